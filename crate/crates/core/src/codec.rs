//! Systematic encoder and single-cell parity patching.
//!
//! Column `k` is the plain row parity. Column `k + 1` is the diagonal parity
//! `sum_j b[i - j][j]` (subscripts mod `tau * p`), with common bit
//! `S[i mod t]` added on the first `n_c` rows. Each common bit `S[mu]` is the
//! diagonal that ends on virtual row `tau(p-1) + mu`, which is never stored
//! on its own.

use crate::array::CodeArray;
use crate::lane::{xor_into, Lane, XorCounter};
use crate::params::CodeParams;
use crate::error::{Error, Result};

/// The `t` common bits of one array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonBits {
    pub s: Vec<Lane>,
}

impl CommonBits {
    /// XOR of all common bits.
    pub fn sum(&self) -> Lane {
        let width = self.s.first().map_or(0, |l| l.width());
        let mut acc = Lane::zero(width);
        for lane in &self.s {
            acc ^= lane;
        }
        acc
    }
}

/// Information columns `j >= 1` whose cell on the diagonal of common bit
/// `mu` is a real row, paired with that row.
pub(crate) fn common_bit_participants(
    params: &CodeParams,
    mu: usize,
) -> impl Iterator<Item = (usize, usize)> + '_ {
    let rows = params.rows();
    (1..params.k())
        .filter(move |&j| mu < j)
        .map(move |j| (rows + mu - j, j))
}

/// Computes `S[mu]` for `mu = 0..t`, skipping virtual-row terms.
pub fn compute_common_bits(array: &CodeArray) -> CommonBits {
    compute_common_bits_counted(array, &mut XorCounter::new())
}

pub(crate) fn compute_common_bits_counted(
    array: &CodeArray,
    counter: &mut XorCounter,
) -> CommonBits {
    let params = *array.params();
    let s = (0..params.t())
        .map(|mu| {
            let mut acc: Option<Lane> = None;
            for (i, j) in common_bit_participants(&params, mu) {
                accumulate(&mut acc, array.cell(i, j), counter);
            }
            acc.unwrap_or_else(|| Lane::zero(array.lane_width()))
        })
        .collect();
    CommonBits { s }
}

#[inline]
fn accumulate(acc: &mut Option<Lane>, term: &[u8], counter: &mut XorCounter) {
    match acc {
        Some(lane) => lane.xor_counted(term, counter),
        None => *acc = Some(Lane::from_bytes(term)),
    }
}

/// Encodes both parity columns in place.
pub fn encode(array: &mut CodeArray) {
    encode_counted(array, &mut XorCounter::new());
}

/// Returns an encoded copy of `array`.
pub fn encoded(array: &CodeArray) -> CodeArray {
    let mut out = array.clone();
    encode(&mut out);
    out
}

/// Encodes both parity columns, tallying lane XORs.
///
/// Common bits are computed once and reused on every row below `n_c`;
/// virtual-row diagonal terms are skipped rather than XOR-ed as zeros.
pub fn encode_counted(array: &mut CodeArray, counter: &mut XorCounter) {
    encode_row_parity(array, counter);
    encode_diag_parity(array, counter);
}

pub(crate) fn encode_row_parity(array: &mut CodeArray, counter: &mut XorCounter) {
    let params = *array.params();
    let k = params.k();
    for i in 0..params.rows() {
        let mut acc = Lane::from_bytes(array.cell(i, 0));
        for j in 1..k {
            acc.xor_counted(array.cell(i, j), counter);
        }
        array.cell_mut(i, k).copy_from_slice(&acc);
    }
}

pub(crate) fn encode_diag_parity(array: &mut CodeArray, counter: &mut XorCounter) {
    let params = *array.params();
    let common = compute_common_bits_counted(array, counter);
    for i in 0..params.rows() {
        let mut acc = diagonal_sum(array, i, None, counter);
        if i < params.n_c() {
            acc.xor_counted(&common.s[i % params.t()], counter);
        }
        array.cell_mut(i, params.diag_parity()).copy_from_slice(&acc);
    }
}

/// `sum_j b[i - j][j]` over the real cells of the diagonal through parity
/// row `i`, leaving out column `skip` if given. Returns the zero lane when no
/// term survives.
pub(crate) fn diagonal_sum(
    array: &CodeArray,
    i: usize,
    skip: Option<&[usize]>,
    counter: &mut XorCounter,
) -> Lane {
    let params = array.params();
    let mut acc: Option<Lane> = None;
    for j in 0..params.k() {
        if skip.is_some_and(|s| s.contains(&j)) {
            continue;
        }
        let r = params.mod_ring(i as i64 - j as i64);
        if params.is_virtual(r) {
            continue;
        }
        accumulate(&mut acc, array.cell(r, j), counter);
    }
    acc.unwrap_or_else(|| Lane::zero(array.lane_width()))
}

/// Parity cells whose equations contain information cell `(i, j)`.
pub fn parity_dependents(params: &CodeParams, i: usize, j: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(i, params.row_parity())];
    let d = params.mod_ring((i + j) as i64);
    if !params.is_virtual(d) {
        out.push((d, params.diag_parity()));
    } else if j >= 1 {
        // The diagonal ends on virtual row tau(p-1) + mu: a common-bit term.
        let mu = d - params.rows();
        if mu < params.t() {
            out.extend(
                (mu..params.n_c())
                    .step_by(params.t())
                    .map(|r| (r, params.diag_parity())),
            );
        }
    }
    out
}

/// Replaces information cell `(i, j)` and XOR-patches every parity cell that
/// depends on it. Returns the patched positions; writing the stored value
/// again patches the same positions with a zero delta.
pub fn update_cell(
    array: &mut CodeArray,
    i: usize,
    j: usize,
    new_value: &[u8],
) -> Result<Vec<(usize, usize)>> {
    let params = *array.params();
    if j >= params.k() {
        return Err(Error::ParityColumnNotUpdatable(j));
    }
    if i >= params.rows() {
        return Err(Error::IndexOutOfRing { row: i, col: j });
    }
    if new_value.len() != array.lane_width() {
        return Err(Error::LaneWidthMismatch {
            expected: array.lane_width(),
            got: new_value.len(),
        });
    }
    let mut delta = Lane::from_bytes(array.cell(i, j));
    delta ^= new_value;
    array.cell_mut(i, j).copy_from_slice(new_value);
    let positions = parity_dependents(&params, i, j);
    let mut counter = XorCounter::new();
    for &(r, c) in &positions {
        xor_into(array.cell_mut(r, c), &delta, &mut counter);
    }
    Ok(positions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CodeParams;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn table_one() -> CodeParams {
        CodeParams::new(2, 5, 3).unwrap()
    }

    fn unit(params: CodeParams, i: usize, j: usize) -> CodeArray {
        let mut a = CodeArray::new(params, 1).unwrap();
        a.set_cell(i, j, &[1]).unwrap();
        a
    }

    fn ones(array: &CodeArray, col: usize) -> Vec<usize> {
        (0..array.params().rows())
            .filter(|&i| array.cell(i, col)[0] != 0)
            .collect()
    }

    #[test]
    fn common_bits_of_table_one() {
        let params = table_one();
        let zero = CodeArray::new(params, 1).unwrap();
        assert!(compute_common_bits(&zero).s.iter().all(Lane::is_zero));

        let s = compute_common_bits(&unit(params, 7, 1)).s;
        assert_eq!((s[0][0], s[1][0]), (1, 0));
        let s = compute_common_bits(&unit(params, 6, 2)).s;
        assert_eq!((s[0][0], s[1][0]), (1, 0));
        let s = compute_common_bits(&unit(params, 7, 2)).s;
        assert_eq!((s[0][0], s[1][0]), (0, 1));
    }

    #[test]
    fn unit_vectors_of_table_one() {
        let params = table_one();
        let mut a = CodeArray::new(params, 1).unwrap();
        encode(&mut a);
        assert!(a.is_zero());

        let mut a = unit(params, 0, 0);
        encode(&mut a);
        assert_eq!(ones(&a, 3), vec![0]);
        assert_eq!(ones(&a, 4), vec![0]);

        let mut a = unit(params, 7, 1);
        encode(&mut a);
        assert_eq!(ones(&a, 3), vec![7]);
        assert_eq!(ones(&a, 4), vec![0, 2]);
    }

    #[test]
    fn update_positions_of_table_one() {
        let params = table_one();
        let mut a = CodeArray::new(params, 1).unwrap();
        encode(&mut a);
        assert_eq!(update_cell(&mut a, 0, 0, &[1]).unwrap(), vec![(0, 3), (0, 4)]);
        assert_eq!(
            update_cell(&mut a, 7, 1, &[1]).unwrap(),
            vec![(7, 3), (0, 4), (2, 4)]
        );
        let mut fresh = a.clone();
        encode(&mut fresh);
        assert_eq!(a, fresh);
    }

    #[test]
    fn rewriting_same_value_leaves_array_unchanged() {
        let params = CodeParams::new(2, 7, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut a = CodeArray::random(params, 8, &mut rng).unwrap();
        encode(&mut a);
        let before = a.clone();
        let value = a.cell(5, 2).to_vec();
        let touched = update_cell(&mut a, 5, 2, &value).unwrap();
        assert!(!touched.is_empty());
        assert_eq!(a, before);
    }

    #[test]
    fn update_rejects_parity_column() {
        let mut a = CodeArray::new(table_one(), 1).unwrap();
        assert!(matches!(
            update_cell(&mut a, 0, 3, &[1]),
            Err(Error::ParityColumnNotUpdatable(3))
        ));
    }

    #[test]
    fn rows_past_threshold_carry_no_common_bit() {
        // b[6][2] feeds only S_0: its own diagonal lands on virtual row 8.
        let params = table_one();
        let mut a = unit(params, 6, 2);
        encode(&mut a);
        assert_eq!(ones(&a, 4), vec![0, 2]);
    }

    #[test]
    fn encode_count_of_table_one() {
        let mut a = CodeArray::new(table_one(), 1).unwrap();
        let mut counter = XorCounter::new();
        encode_counted(&mut a, &mut counter);
        assert_eq!(counter.count(), 34);
    }

    fn any_params() -> impl Strategy<Value = CodeParams> {
        prop::sample::select(vec![
            (1, 5, 3),
            (2, 5, 3),
            (3, 5, 3),
            (2, 7, 4),
            (1, 7, 5),
            (3, 9, 3),
            (4, 5, 2),
        ])
        .prop_map(|(t, p, k)| CodeParams::new(t, p, k).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn encode_is_linear_and_idempotent(params in any_params(), s1 in any::<u64>(), s2 in any::<u64>()) {
            let a = CodeArray::random(params, 4, &mut ChaCha8Rng::seed_from_u64(s1)).unwrap();
            let b = CodeArray::random(params, 4, &mut ChaCha8Rng::seed_from_u64(s2)).unwrap();
            let mut sum = a.clone();
            sum.xor_with(&b);
            let mut lhs = encoded(&sum);
            let mut rhs = encoded(&a);
            rhs.xor_with(&encoded(&b));
            prop_assert_eq!(&lhs, &rhs);
            encode(&mut lhs);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn patching_matches_reencode(params in any_params(), seed in any::<u64>(), flips in 1usize..8) {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut a = CodeArray::random(params, 4, &mut rng).unwrap();
            encode(&mut a);
            for _ in 0..flips {
                let i = rng.gen_range(0..params.rows());
                let j = rng.gen_range(0..params.k());
                let v: [u8; 4] = rng.gen();
                update_cell(&mut a, i, j, &v).unwrap();
            }
            prop_assert_eq!(&a, &encoded(&a));
        }
    }
}
