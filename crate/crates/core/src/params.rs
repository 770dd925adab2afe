//! Code parameters `(tau, p, k)` and the quantities derived from them.
//!
//! The array has `tau * (p - 1)` rows and `k + 2` columns. Row subscripts
//! live in the ring `Z_{tau * p}`; the last `tau` ring positions are virtual
//! rows that read as zero in every information column.

use std::fmt;

use crate::error::{Error, Result};

/// Which side of `tau = k - 1` the parameters fall on.
///
/// The two regimes differ in how many common bits there are and in how many
/// leading rows of the diagonal parity column receive them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `tau >= k - 1`: `k - 1` common bits.
    TauGE,
    /// `tau < k - 1`: `tau` common bits.
    TauLT,
}

/// Validated code parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    tau: usize,
    p: usize,
    k: usize,
    t: usize,
    n_c: usize,
    regime: Regime,
}

impl CodeParams {
    /// Validates `(tau, p, k)` and derives the common-bit count, the
    /// common-row threshold and the regime.
    pub fn new(tau: i64, p: i64, k: i64) -> Result<Self> {
        if tau < 1 {
            return Err(Error::NonPositiveTau(tau));
        }
        if k < 2 {
            return Err(Error::KTooSmall(k));
        }
        if p < 3 || p % 2 == 0 {
            return Err(Error::PNotOdd(p));
        }
        if let Some(divisor) = smallest_divisor_at_most(p, k - 1) {
            return Err(Error::DivisorConditionViolated {
                p,
                divisor,
                k_minus_one: k - 1,
            });
        }
        let (tau, p, k) = (to_usize(tau)?, to_usize(p)?, to_usize(k)?);
        let t = (k - 1).min(tau);
        let regime = if tau >= k - 1 {
            Regime::TauGE
        } else {
            Regime::TauLT
        };
        let n_c = common_rows(regime, k, t);
        let rows = tau
            .checked_mul(p - 1)
            .ok_or_else(|| Error::InvalidParams("tau * (p - 1) overflows".into()))?;
        if n_c > rows {
            return Err(Error::CommonRowsExceedArray { n_c, rows });
        }
        Ok(CodeParams {
            tau,
            p,
            k,
            t,
            n_c,
            regime,
        })
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of information columns.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of common bits, `min(k - 1, tau)`.
    pub fn t(&self) -> usize {
        self.t
    }

    /// Number of leading rows of the diagonal parity column that carry a
    /// common bit.
    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Real rows per column, `tau * (p - 1)`.
    pub fn rows(&self) -> usize {
        self.tau * (self.p - 1)
    }

    /// Size of the subscript ring, `tau * p`.
    pub fn ring(&self) -> usize {
        self.tau * self.p
    }

    /// Total columns, `k + 2`.
    pub fn columns(&self) -> usize {
        self.k + 2
    }

    /// Column index of the row parity.
    pub fn row_parity(&self) -> usize {
        self.k
    }

    /// Column index of the diagonal parity.
    pub fn diag_parity(&self) -> usize {
        self.k + 1
    }

    /// Number of information cells per array, `k * tau * (p - 1)`.
    pub fn info_cells(&self) -> usize {
        self.k * self.rows()
    }

    /// Canonical representative of `x` modulo `tau * p`.
    pub fn mod_ring(&self, x: i64) -> usize {
        x.rem_euclid(self.ring() as i64) as usize
    }

    /// True when ring position `i` is one of the zero-valued virtual rows.
    pub fn is_virtual(&self, i: usize) -> bool {
        i >= self.rows()
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.tau, self.p, self.k)
    }
}

/// Free-function form of [`CodeParams::new`].
pub fn validate_params(tau: i64, p: i64, k: i64) -> Result<CodeParams> {
    CodeParams::new(tau, p, k)
}

/// Number of leading diagonal-parity rows that receive a common bit.
pub fn common_row_threshold(params: &CodeParams) -> usize {
    params.n_c
}

fn common_rows(regime: Regime, k: usize, t: usize) -> usize {
    match regime {
        Regime::TauGE => 2 * ((k - 1) / 2).max(1) * t,
        Regime::TauLT => 2 * (k / 2) * t,
    }
}

/// Smallest divisor `d` of `p` with `1 < d <= bound`, by trial division.
fn smallest_divisor_at_most(p: i64, bound: i64) -> Option<i64> {
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return (d <= bound).then_some(d);
        }
        d += 1;
    }
    // p is prime
    (p <= bound).then_some(p)
}

fn to_usize(x: i64) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::InvalidParams(format!("{x} out of range")))
}
