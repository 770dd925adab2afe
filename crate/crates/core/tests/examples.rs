//! Runs the examples that take no arguments.

#[path = "../examples/quickstart.rs"]
mod quickstart;

#[path = "../examples/chain_decode.rs"]
mod chain_decode;

#[path = "../examples/complexity.rs"]
mod complexity;

#[path = "../examples/evenodd_baseline.rs"]
mod evenodd_baseline;

#[path = "../examples/small_writes.rs"]
mod small_writes;

#[test]
fn quickstart_runs() {
    quickstart::main().unwrap();
}

#[test]
fn chain_decode_runs() {
    chain_decode::main().unwrap();
}

#[test]
fn complexity_runs() {
    complexity::main().unwrap();
}

#[test]
fn evenodd_baseline_runs() {
    evenodd_baseline::main().unwrap();
}

#[test]
fn small_writes_runs() {
    small_writes::main().unwrap();
}
