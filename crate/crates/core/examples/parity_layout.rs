//! Which parity cells each information bit feeds, for any `(tau, p, k)`.
//!
//! `cargo run --example parity_layout -- 2 5 3`

use eoflex::codec::parity_dependents;
use eoflex::CodeParams;

fn main() -> eoflex::Result<()> {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (tau, p, k) = match args[..] {
        [tau, p, k] => (tau, p, k),
        _ => (2, 5, 3),
    };
    let params = CodeParams::new(tau, p, k)?;
    println!("{params}: common bits on diagonal parity rows 0..{}", params.n_c());
    for i in 0..params.rows() {
        for j in 0..params.k() {
            let deps: Vec<String> = parity_dependents(&params, i, j)
                .into_iter()
                .map(|(r, c)| format!("({r},{c})"))
                .collect();
            println!("b({i},{j}) -> {}", deps.join(" "));
        }
    }
    Ok(())
}
