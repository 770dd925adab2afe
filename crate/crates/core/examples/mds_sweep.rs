//! Rank check of every column pair over a range of parameter sets. Lists
//! the sets where some pair is not recoverable.
//!
//! `cargo run --release --example mds_sweep -- 48` bounds `tau (p - 1)`.

use eoflex::oracle::mds_rank_check;
use eoflex::CodeParams;

fn main() {
    let max_rows: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(24);
    let mut checked = 0;
    let mut failing = 0;
    for p in (3..=max_rows as i64 + 1).step_by(2) {
        for k in 2..=12 {
            for tau in 1..=max_rows as i64 {
                let Ok(params) = CodeParams::new(tau, p, k) else { continue };
                if params.rows() > max_rows {
                    break;
                }
                checked += 1;
                let bad = mds_rank_check(&params);
                if !bad.is_empty() {
                    failing += 1;
                    println!("{params}: unrecoverable pairs {bad:?}");
                }
            }
        }
    }
    println!("{checked} parameter sets checked, {failing} not MDS");
}
