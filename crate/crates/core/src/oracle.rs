//! GF(2) ground truth: the generator matrix, erasure decoding by Gaussian
//! elimination and exhaustive MDS sweeps.
//!
//! Nothing here shares code with the chain decoder. Codeword bits are
//! indexed column-major, position `j * rows + i` for cell `(i, j)`, so the
//! first `k * rows` positions are the information bits and the top block of
//! the generator is the identity.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::array::CodeArray;
use crate::codec::encode;
use crate::error::{Error, Result};
use crate::lane::Lane;
use crate::params::CodeParams;

/// Dense GF(2) matrix with word-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BinaryMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.words[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.words[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    /// Columns set in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Rows set in column `c`.
    pub fn col_support(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter(|&r| self.get(r, c)).collect()
    }

    /// Sub-matrix made of the given rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    m.set(ri, ci, true);
                }
            }
        }
        m
    }

    /// `self * x` over GF(2).
    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| x[c] && self.get(r, c))
                    .count()
                    % 2
                    == 1
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_rows(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.stride {
                self.words.swap(a * self.stride + w, b * self.stride + w);
            }
        }
    }

    /// row[dst] ^= row[src]
    fn xor_rows(&mut self, dst: usize, src: usize) {
        for w in 0..self.stride {
            let v = self.words[src * self.stride + w];
            self.words[dst * self.stride + w] ^= v;
        }
    }
}

impl std::fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            let line: String = (0..self.cols.min(128))
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Codeword position of cell `(i, j)`.
pub fn position(params: &CodeParams, i: usize, j: usize) -> usize {
    j * params.rows() + i
}

/// Generator matrix: `(k+2) * rows` codeword bits by `k * rows` information
/// bits. Column `c` is the encoding of the unit array with information
/// position `c` set.
pub fn generator_matrix(params: &CodeParams) -> BinaryMatrix {
    let rows = params.rows();
    let n_info = params.info_cells();
    let n_code = params.columns() * rows;
    let mut g = BinaryMatrix::zeros(n_code, n_info);
    for j in 0..params.k() {
        for i in 0..rows {
            let mut unit = CodeArray::new(*params, 1).expect("width 1");
            unit.cell_mut(i, j)[0] = 1;
            encode(&mut unit);
            let c = position(params, i, j);
            for col in 0..params.columns() {
                for r in 0..rows {
                    if unit.cell(r, col)[0] & 1 == 1 {
                        g.set(position(params, r, col), c, true);
                    }
                }
            }
        }
    }
    g
}

/// Recovers every information lane of `received` by Gaussian elimination
/// over the codeword positions outside the `erased` columns. The contents of
/// erased columns are never read.
///
/// Returns the information lanes indexed by [`position`].
pub fn gaussian_decode(
    params: &CodeParams,
    generator: &BinaryMatrix,
    received: &CodeArray,
    erased: &[usize],
) -> Result<Vec<Lane>> {
    let n_info = params.info_cells();
    let rows = params.rows();
    let width = received.lane_width();
    // Augmented system: one equation per surviving codeword position.
    let mut eqs: Vec<(Vec<u64>, Lane)> = Vec::new();
    for col in (0..params.columns()).filter(|c| !erased.contains(c)) {
        for r in 0..rows {
            let pos = position(params, r, col);
            eqs.push((
                generator.row(pos).to_vec(),
                Lane::from_bytes(received.cell(r, col)),
            ));
        }
    }
    let get = |bits: &[u64], c: usize| bits[c / 64] >> (c % 64) & 1 == 1;
    let mut rank = 0;
    for c in 0..n_info {
        let Some(pivot) = (rank..eqs.len()).find(|&r| get(&eqs[r].0, c)) else {
            continue;
        };
        eqs.swap(rank, pivot);
        let (pivot_bits, pivot_lane) = eqs[rank].clone();
        for (r, (bits, lane)) in eqs.iter_mut().enumerate() {
            if r != rank && get(bits, c) {
                for (w, p) in bits.iter_mut().zip(&pivot_bits) {
                    *w ^= p;
                }
                *lane ^= &pivot_lane;
            }
        }
        rank += 1;
    }
    if rank < n_info {
        return Err(Error::Underdetermined {
            rank,
            unknowns: n_info,
        });
    }
    // Reduced row echelon form with full column rank: row c solves unknown c.
    let mut out = vec![Lane::zero(width); n_info];
    for (bits, lane) in eqs.into_iter().take(n_info) {
        let c = (0..n_info).find(|&c| get(&bits, c)).expect("pivot row");
        out[c] = lane;
    }
    Ok(out)
}

/// Writes oracle output into the information cells of `array`.
pub fn write_info(params: &CodeParams, array: &mut CodeArray, info: &[Lane]) {
    for j in 0..params.k() {
        for i in 0..params.rows() {
            array
                .cell_mut(i, j)
                .copy_from_slice(&info[position(params, i, j)]);
        }
    }
}

/// Outcome of the exhaustive sweep for one column pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOutcome {
    pub pair: (usize, usize),
    pub trials: usize,
    pub failures: usize,
}

impl PairOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Per-pair results of [`mds_exhaustive_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsReport {
    pub params: CodeParams,
    pub pairs: Vec<PairOutcome>,
}

impl MdsReport {
    pub fn pairs_tested(&self) -> usize {
        self.pairs.len()
    }

    pub fn failing_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .filter(|p| !p.passed())
            .map(|p| p.pair)
            .collect()
    }

    /// CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,p,k,col_a,col_b,trials,failures,result\n");
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                self.params.tau(),
                self.params.p(),
                self.params.k(),
                p.pair.0,
                p.pair.1,
                p.trials,
                p.failures,
                if p.passed() { "pass" } else { "fail" }
            );
        }
        out
    }
}

/// All unordered column pairs of a `k + 2` column array.
pub fn column_pairs(params: &CodeParams) -> Vec<(usize, usize)> {
    let n = params.columns();
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

/// For every column pair and `trials` seeded random lane-width-1 arrays,
/// checks that Gaussian elimination restores the information.
pub fn mds_exhaustive_check(params: &CodeParams, trials: usize, seed: u64) -> MdsReport {
    let g = generator_matrix(params);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = column_pairs(params)
        .into_iter()
        .map(|(a, b)| {
            let failures = (0..trials)
                .filter(|_| {
                    let mut array = CodeArray::random(*params, 1, &mut rng).expect("width 1");
                    encode(&mut array);
                    let original = array.clone();
                    array.clear_column(a);
                    array.clear_column(b);
                    match gaussian_decode(params, &g, &array, &[a, b]) {
                        Ok(info) => {
                            write_info(params, &mut array, &info);
                            array.info_bytes() != original.info_bytes()
                        }
                        Err(_) => true,
                    }
                })
                .count();
            PairOutcome {
                pair: (a, b),
                trials,
                failures,
            }
        })
        .collect();
    MdsReport {
        params: *params,
        pairs,
    }
}

/// Structural MDS check: for every column pair, the parity equations
/// restricted to the erased information bits have full column rank.
/// Returns the pairs that are not recoverable.
pub fn mds_rank_check(params: &CodeParams) -> Vec<(usize, usize)> {
    let g = generator_matrix(params);
    mds_rank_check_with(params, &g)
}

pub(crate) fn mds_rank_check_with(params: &CodeParams, g: &BinaryMatrix) -> Vec<(usize, usize)> {
    let rows = params.rows();
    let k = params.k();
    column_pairs(params)
        .into_iter()
        .filter(|&(a, b)| {
            let erased_info: Vec<usize> = [a, b]
                .into_iter()
                .filter(|&c| c < k)
                .flat_map(|c| (0..rows).map(move |i| position(params, i, c)))
                .collect();
            if erased_info.is_empty() {
                return false;
            }
            let surviving_parity: Vec<usize> = [params.row_parity(), params.diag_parity()]
                .into_iter()
                .filter(|c| *c != a && *c != b)
                .flat_map(|c| (0..rows).map(move |i| position(params, i, c)))
                .collect();
            g.select(&surviving_parity, &erased_info).rank() < erased_info.len()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_systematic_and_full_rank() {
        for (t, p, k) in [(2, 5, 3), (1, 5, 3), (2, 7, 4)] {
            let params = CodeParams::new(t, p, k).unwrap();
            let g = generator_matrix(&params);
            let n = params.info_cells();
            let top: Vec<usize> = (0..n).collect();
            assert_eq!(g.select(&top, &top), BinaryMatrix::identity(n));
            assert_eq!(g.rank(), n);
        }
    }

    #[test]
    fn generator_column_of_b71() {
        let params = CodeParams::new(2, 5, 3).unwrap();
        let g = generator_matrix(&params);
        let parity: Vec<(usize, usize)> = g
            .col_support(position(&params, 7, 1))
            .into_iter()
            .filter(|&r| r >= params.info_cells())
            .map(|r| (r % 8, r / 8))
            .collect();
        assert_eq!(parity, vec![(7, 3), (0, 4), (2, 4)]);
    }

    #[test]
    fn generator_matches_encode_of_unit() {
        let params = CodeParams::new(2, 5, 3).unwrap();
        let g = generator_matrix(&params);
        let mut x = vec![false; params.info_cells()];
        x[position(&params, 0, 0)] = true;
        let y = g.mul_vec(&x);
        let mut unit = CodeArray::new(params, 1).unwrap();
        unit.cell_mut(0, 0)[0] = 1;
        encode(&mut unit);
        for j in 0..params.columns() {
            for i in 0..params.rows() {
                assert_eq!(y[position(&params, i, j)], unit.cell(i, j)[0] == 1);
            }
        }
        let zero = g.mul_vec(&vec![false; params.info_cells()]);
        assert!(zero.iter().all(|b| !b));
    }

    #[test]
    fn decodes_zero_word() {
        let params = CodeParams::new(2, 5, 3).unwrap();
        let g = generator_matrix(&params);
        let array = CodeArray::new(params, 2).unwrap();
        let info = gaussian_decode(&params, &g, &array, &[0, 2]).unwrap();
        assert!(info.iter().all(Lane::is_zero));
    }

    #[test]
    fn decodes_random_two_info_erasure() {
        let params = CodeParams::new(2, 5, 3).unwrap();
        let g = generator_matrix(&params);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut array = CodeArray::random(params, 16, &mut rng).unwrap();
        encode(&mut array);
        let original = array.clone();
        array.clear_column(0);
        array.clear_column(2);
        let info = gaussian_decode(&params, &g, &array, &[0, 2]).unwrap();
        write_info(&params, &mut array, &info);
        assert_eq!(array.info_bytes(), original.info_bytes());
    }

    #[test]
    fn three_erasures_are_underdetermined() {
        let params = CodeParams::new(1, 5, 3).unwrap();
        let g = generator_matrix(&params);
        let array = CodeArray::new(params, 1).unwrap();
        assert!(matches!(
            gaussian_decode(&params, &g, &array, &[0, 1, 2]),
            Err(Error::Underdetermined { .. })
        ));
    }

    #[test]
    fn sweeps_pass() {
        for ((t, p, k), trials) in [((2, 5, 3), 100), ((3, 9, 3), 50), ((1, 5, 3), 100)] {
            let params = CodeParams::new(t, p, k).unwrap();
            let report = mds_exhaustive_check(&params, trials, 7);
            assert_eq!(report.pairs_tested(), (k as usize + 2) * (k as usize + 1) / 2);
            assert!(report.failing_pairs().is_empty(), "{params}");
            assert!(mds_rank_check(&params).is_empty());
        }
    }

    #[test]
    fn report_csv_has_header() {
        let params = CodeParams::new(1, 5, 3).unwrap();
        let csv = mds_exhaustive_check(&params, 2, 1).to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "tau,p,k,col_a,col_b,trials,failures,result");
        assert_eq!(lines.count(), 10);
    }
}
