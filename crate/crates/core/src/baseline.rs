//! Classic EVENODD and the EVENODD+ layout it grew into.
//!
//! Both are `(p-1) x (k+2)` arrays with row parity in column `k` and
//! diagonal parity in column `k+1`. The common bit
//! `S = sum_{j=1}^{k-1} b[p-1-j][j]` is added to every diagonal parity row in
//! EVENODD and only to the first `2 * floor(k/2)` rows in EVENODD+.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::lane::{Lane, XorCounter};
use crate::oracle::{generator_matrix, position};
use crate::params::CodeParams;

/// Parameters of a classic EVENODD code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvenoddParams {
    p: usize,
    k: usize,
}

impl EvenoddParams {
    pub fn new(p: i64, k: i64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::PNotPrime(p));
        }
        if k < 2 || p < k {
            return Err(Error::PTooSmall { p, k });
        }
        Ok(Self {
            p: p as usize,
            k: k as usize,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// A `(p-1) x (k+2)` array of lanes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineArray {
    p: usize,
    k: usize,
    cells: Vec<Lane>,
}

impl BaselineArray {
    /// Zero array of `p - 1` rows and `k + 2` columns.
    pub fn new(p: usize, k: usize, width: usize) -> Self {
        Self {
            p,
            k,
            cells: vec![Lane::zero(width); (p - 1) * (k + 2)],
        }
    }

    pub fn rows(&self) -> usize {
        self.p - 1
    }

    pub fn columns(&self) -> usize {
        self.k + 2
    }

    pub fn cell(&self, i: usize, j: usize) -> &Lane {
        &self.cells[j * self.rows() + i]
    }

    pub fn cell_mut(&mut self, i: usize, j: usize) -> &mut Lane {
        let rows = self.rows();
        &mut self.cells[j * rows + i]
    }

    /// Information cell `(i, j)` with row `p - 1` read as zero.
    fn info(&self, i: usize, j: usize) -> Option<&Lane> {
        (i < self.rows()).then(|| self.cell(i, j))
    }

    /// Fills both parity columns. The common bit is added to the first
    /// `common_rows` diagonal parity rows.
    pub fn encode_counted(&mut self, common_rows: usize, counter: &mut XorCounter) {
        let (p, k) = (self.p, self.k);
        let width = self.cell(0, 0).width();
        for i in 0..self.rows() {
            let mut acc = self.cell(i, 0).clone();
            for j in 1..k {
                acc.xor_counted(self.cell(i, j), counter);
            }
            *self.cell_mut(i, k) = acc;
        }
        let mut common: Option<Lane> = None;
        for j in 1..k {
            fold(&mut common, self.info(p - 1 - j, j), counter);
        }
        let common = common.unwrap_or_else(|| Lane::zero(width));
        for i in 0..self.rows() {
            let mut acc = None;
            for j in 0..k {
                fold(&mut acc, self.info((i + p - j) % p, j), counter);
            }
            let mut acc = acc.unwrap_or_else(|| Lane::zero(width));
            if i < common_rows {
                acc.xor_counted(&common, counter);
            }
            *self.cell_mut(i, k + 1) = acc;
        }
    }
}

fn fold(acc: &mut Option<Lane>, term: Option<&Lane>, counter: &mut XorCounter) {
    match (acc.as_mut(), term) {
        (_, None) => {}
        (Some(a), Some(t)) => a.xor_counted(t, counter),
        (None, Some(t)) => *acc = Some(t.clone()),
    }
}

/// Number of diagonal parity rows that carry the EVENODD+ common bit.
pub fn evenodd_plus_threshold(k: usize) -> usize {
    2 * (k / 2)
}

/// Classic EVENODD encoding of `info`, given row by row as `(p-1) * k` lanes.
pub fn evenodd_encode(params: &EvenoddParams, info: &[Lane]) -> Result<BaselineArray> {
    let mut a = load(params.p, params.k, info)?;
    a.encode_counted(params.p - 1, &mut XorCounter::new());
    Ok(a)
}

/// EVENODD+ encoding for odd `p`: the common bit goes only to the first
/// `2 * floor(k/2)` rows.
pub fn evenodd_plus_encode(p: usize, k: usize, info: &[Lane]) -> Result<BaselineArray> {
    let mut a = load(p, k, info)?;
    a.encode_counted(evenodd_plus_threshold(k), &mut XorCounter::new());
    Ok(a)
}

fn load(p: usize, k: usize, info: &[Lane]) -> Result<BaselineArray> {
    if p < 3 || info.len() != (p - 1) * k {
        return Err(Error::InvalidParams(format!(
            "expected {} information lanes",
            (p.max(1) - 1) * k
        )));
    }
    let width = info[0].width();
    let mut a = BaselineArray::new(p, k, width);
    for i in 0..p - 1 {
        for j in 0..k {
            let lane = &info[i * k + j];
            if lane.width() != width {
                return Err(Error::LaneWidthMismatch {
                    expected: width,
                    got: lane.width(),
                });
            }
            *a.cell_mut(i, j) = lane.clone();
        }
    }
    Ok(a)
}

/// Average number of parity cells that change when one information bit of a
/// zero array is flipped, found by re-encoding.
pub fn measure_update_by_flips(p: usize, k: usize, common_rows: usize) -> Ratio<u64> {
    let rows = p - 1;
    let mut total = 0u64;
    for i in 0..rows {
        for j in 0..k {
            let mut a = BaselineArray::new(p, k, 1);
            a.cell_mut(i, j)[0] = 1;
            a.encode_counted(common_rows, &mut XorCounter::new());
            total += (0..rows)
                .flat_map(|r| [(r, k), (r, k + 1)])
                .filter(|&(r, c)| !a.cell(r, c).is_zero())
                .count() as u64;
        }
    }
    Ratio::new(total, (k * rows) as u64)
}

/// Flip-measured update complexity of classic EVENODD.
pub fn evenodd_update_complexity(params: &EvenoddParams) -> Ratio<u64> {
    measure_update_by_flips(params.p, params.k, params.p - 1)
}

/// `3 - (p + k - 2) / (k (p - 1))`.
pub fn evenodd_update_formula(p: usize, k: usize) -> Ratio<i64> {
    let (p, k) = (p as i64, k as i64);
    Ratio::from_integer(3) - Ratio::new(p + k - 2, k * (p - 1))
}

/// Structural comparison of the `tau = 1` instance with EVENODD+.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tau1Check {
    pub p: usize,
    pub k: usize,
    pub threshold: usize,
    /// Exactly one common bit.
    pub single_common_bit: bool,
    /// The common-bit participants feed exactly the first `threshold`
    /// diagonal parity rows and no others.
    pub common_rows_match: bool,
    /// Generator matrices agree entry for entry.
    pub generator_match: bool,
    /// Random arrays encode identically under both encoders.
    pub trials_match: bool,
}

impl Tau1Check {
    pub fn passed(&self) -> bool {
        self.single_common_bit && self.common_rows_match && self.generator_match && self.trials_match
    }
}

/// Checks that `(1, p, k)` is the EVENODD+ code with threshold
/// `2 * floor(k/2)`.
pub fn tau1_equivalence_check(p: usize, k: usize, trials: usize, seed: u64) -> Result<Tau1Check> {
    use rand::{RngCore, SeedableRng};
    let params = CodeParams::new(1, p as i64, k as i64)?;
    let threshold = evenodd_plus_threshold(k);
    let rows = p - 1;
    let g = generator_matrix(&params);
    let diag = params.diag_parity();

    let common_rows_match = (1..k).all(|j| {
        let c = position(&params, rows - j, j);
        (0..rows).all(|r| g.get(position(&params, r, diag), c) == (r < threshold))
    });

    let mut generator_match = true;
    for i in 0..rows {
        for j in 0..k {
            let mut info = vec![Lane::zero(1); rows * k];
            info[i * k + j] = Lane::from_bytes(&[1]);
            let plus = evenodd_plus_encode(p, k, &info)?;
            let c = position(&params, i, j);
            for col in 0..k + 2 {
                for r in 0..rows {
                    let bit = plus.cell(r, col)[0] & 1 == 1;
                    generator_match &= g.get(position(&params, r, col), c) == bit;
                }
            }
        }
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let trials_match = (0..trials).all(|_| {
        let mut a = crate::array::CodeArray::new(params, 8).expect("width 8");
        let mut info = Vec::with_capacity(rows * k);
        for i in 0..rows {
            for j in 0..k {
                rng.fill_bytes(a.cell_mut(i, j));
                info.push(Lane::from_bytes(a.cell(i, j)));
            }
        }
        crate::codec::encode(&mut a);
        let plus = evenodd_plus_encode(p, k, &info).expect("valid shape");
        (0..rows).all(|r| (0..k + 2).all(|c| plus.cell(r, c).as_bytes() == a.cell(r, c)))
    });

    Ok(Tau1Check {
        p,
        k,
        threshold,
        single_common_bit: params.t() == 1 && params.n_c() == threshold,
        common_rows_match,
        generator_match,
        trials_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(EvenoddParams::new(9, 3), Err(Error::PNotPrime(9))));
        assert!(matches!(EvenoddParams::new(3, 5), Err(Error::PTooSmall { .. })));
        assert!(EvenoddParams::new(5, 3).is_ok());
    }

    #[test]
    fn zero_encodes_to_zero() {
        let params = EvenoddParams::new(5, 3).unwrap();
        let a = evenodd_encode(&params, &vec![Lane::zero(2); 12]).unwrap();
        assert!((0..4).all(|r| a.cell(r, 3).is_zero() && a.cell(r, 4).is_zero()));
    }

    #[test]
    fn common_bit_reaches_every_row() {
        let params = EvenoddParams::new(5, 3).unwrap();
        let mut info = vec![Lane::zero(1); 12];
        info[3 * 3 + 1] = Lane::from_bytes(&[1]);
        let a = evenodd_encode(&params, &info).unwrap();
        for r in 0..4 {
            assert_eq!(a.cell(r, 4).as_bytes(), &[1], "row {r}");
        }
        assert_eq!(a.cell(3, 3).as_bytes(), &[1]);
    }

    #[test]
    fn update_matches_closed_form() {
        for (p, k) in [(5, 3), (7, 4), (7, 5), (11, 7), (3, 3)] {
            let params = EvenoddParams::new(p, k).unwrap();
            let got = evenodd_update_complexity(&params);
            let want = evenodd_update_formula(p as usize, k as usize);
            assert_eq!(
                Ratio::new(*got.numer() as i64, *got.denom() as i64),
                want,
                "({p},{k})"
            );
        }
        assert_eq!(evenodd_update_formula(5, 3), Ratio::new(5, 2));
    }

    #[test]
    fn tau1_reduces_to_evenodd_plus() {
        for (p, k, threshold) in [(5, 3, 2), (7, 5, 4), (9, 3, 2)] {
            let check = tau1_equivalence_check(p, k, 4, 1).unwrap();
            assert_eq!(check.threshold, threshold);
            assert!(check.passed(), "{check:?}");
        }
    }
}
