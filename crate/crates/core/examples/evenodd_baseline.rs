//! Classic EVENODD update cost, and the tau = 1 code checked against
//! EVENODD+.

use eoflex::baseline::{
    evenodd_update_complexity, evenodd_update_formula, tau1_equivalence_check, EvenoddParams,
};
use eoflex::metrics::{fmt_dec, measure_update_complexity};
use eoflex::CodeParams;

pub fn main() -> eoflex::Result<()> {
    for (p, k) in [(5, 3), (7, 4), (7, 5), (11, 7)] {
        let e = EvenoddParams::new(p, k)?;
        let m = evenodd_update_complexity(&e);
        let f = evenodd_update_formula(p as usize, k as usize);
        let ours = measure_update_complexity(&CodeParams::new(2, p, k)?);
        println!(
            "({p},{k}) EVENODD update {}/{} (formula {}), tau = 2 code {}",
            m.numer(),
            m.denom(),
            fmt_dec(f),
            fmt_dec(ours)
        );
    }
    for (p, k) in [(5, 3), (7, 5), (9, 3)] {
        let c = tau1_equivalence_check(p, k, 16, 0)?;
        println!(
            "tau = 1, ({p},{k}): threshold {}, {}",
            c.threshold,
            if c.passed() { "matches EVENODD+" } else { "MISMATCH" }
        );
    }
    Ok(())
}
