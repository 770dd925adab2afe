use std::fs;
use std::process::{Command, Output};

fn eoflex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eoflex")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_reports_every_pair() {
    let o = eoflex(&["verify", "--tau", "2", "--p", "5", "--k", "3", "--trials", "100"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("10/10 column pairs OK"));
}

#[test]
fn verify_rejects_divisor() {
    let o = eoflex(&["verify", "--tau", "1", "--p", "9", "--k", "4"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("divisor 3"), "{err}");
}

#[test]
fn verify_fails_on_lost_pair() {
    let o = eoflex(&["verify", "--tau", "2", "--p", "7", "--k", "4", "--trials", "5"]);
    assert!(!o.status.success());
    assert!(stdout(&o).contains("(0,3) FAIL"));
}

#[test]
fn bench_default_set() {
    let o = eoflex(&["bench"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let line = out
        .lines()
        .find(|l| l.starts_with("(2,5,3)") && l.contains("encode") && !l.contains("evenodd"))
        .unwrap();
    assert!(line.contains("1.4167"), "{line}");
    assert!(out.contains("params,metric,measured,formula,normalized_measured,normalized_formula"));
}

#[test]
fn bench_params_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sets.csv");
    fs::write(&csv, "tau,p,k\n1,5,3\n").unwrap();
    let o = eoflex(&["bench", "--params-file", csv.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("(1,5,3)") && !out.contains("(2,5,3)"));
}

#[test]
fn usage_errors_exit_nonzero() {
    let o = eoflex(&["encode", "--tau", "2"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
}

#[test]
fn encode_then_decode_with_losses() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    let data: Vec<u8> = (0..70_000u32).map(|i| (i * 7 % 251) as u8).collect();
    fs::write(&input, &data).unwrap();
    let shards = dir.path().join("s");
    let o = eoflex(&[
        "encode", "--tau", "3", "--p", "9", "--k", "3", "--lane-width", "64",
        input.to_str().unwrap(), shards.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    fs::remove_file(shards.join("shard_1.eof")).unwrap();
    fs::remove_file(shards.join("shard_2.eof")).unwrap();
    let out = dir.path().join("out");
    let o = eoflex(&["decode", shards.to_str().unwrap(), out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read(out).unwrap(), data);
}

#[test]
fn decode_with_three_losses_fails() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    fs::write(&input, b"hello").unwrap();
    let shards = dir.path().join("s");
    assert!(eoflex(&["encode", "--tau", "2", "--p", "5", "--k", "3", input.to_str().unwrap(), shards.to_str().unwrap()])
        .status
        .success());
    for c in [0, 1, 4] {
        fs::remove_file(shards.join(format!("shard_{c}.eof"))).unwrap();
    }
    let o = eoflex(&["decode", shards.to_str().unwrap(), dir.path().join("o").to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("3 shards missing"));
}
