//! Erasure decoding for one or two lost columns.
//!
//! Two lost information columns `f < g` are recovered by chain chasing.
//! After the surviving columns are stripped out of both parities, every
//! ring position `u` ties the two unknown columns together through
//!
//! ```text
//! row      x[u] + y[u]                      = row_syn[u]
//! diagonal x[u] + y[u - (g - f)] (+ S'[mu]) = diag_syn[u + f]
//! ```
//!
//! where `x` is column `f`, `y` is column `g` and the optional `S'` term is
//! the erased part of a common bit. Stepping `u` by `g - f` alternates the two
//! equations and walks a cycle of the ring. Each cycle starts on a virtual
//! row, where both unknowns are zero. Values whose derivation passed through a
//! common-bit row carry the unknown `S'` terms symbolically; reaching the next
//! virtual row turns the accumulated expression into a linear constraint on
//! the `S'` values. Once those are solved, only the cells that still carry a
//! symbolic term are patched.
//!
//! When `tau < k - 1` and `g - f = tau` the ring splits by row residue into
//! `tau` independent sub-arrays of height `p - 1`, each decoded on its own.

use std::collections::BTreeMap;

use crate::array::{CodeArray, ErasurePattern};
use crate::codec::{self, diagonal_sum};
use crate::error::{Error, Result};
use crate::lane::{Lane, XorCounter};
use crate::params::{CodeParams, Regime};

/// XOR tallies of one decode.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct DecodeStats {
    /// Stripping surviving columns out of the parities.
    pub syndrome_xors: u64,
    /// Summing all parity cells into the common-bit total.
    pub sum_xors: u64,
    /// Chain walks, constraint solving and common-bit patching.
    pub chain_xors: u64,
}

impl DecodeStats {
    /// XORs spent after the syndromes are formed: the common-bit sum plus
    /// the chain work.
    pub fn recovery_xors(&self) -> u64 {
        self.sum_xors + self.chain_xors
    }

    pub fn total(&self) -> u64 {
        self.syndrome_xors + self.sum_xors + self.chain_xors
    }
}

/// Restores the erased columns of `array` in place.
pub fn decode(array: &mut CodeArray, pattern: &ErasurePattern) -> Result<DecodeStats> {
    let params = *array.params();
    let k = params.k();
    let cols = pattern.columns();
    for &c in &cols {
        if c >= params.columns() {
            return Err(Error::ColumnOutOfRange {
                col: c,
                columns: params.columns(),
            });
        }
    }
    let info: Vec<usize> = cols.iter().copied().filter(|&c| c < k).collect();
    let mut stats = DecodeStats::default();
    let mut scratch = XorCounter::new();
    match info.as_slice() {
        [] => {
            if pattern.contains(params.row_parity()) {
                codec::encode_row_parity(array, &mut scratch);
            }
            if pattern.contains(params.diag_parity()) {
                codec::encode_diag_parity(array, &mut scratch);
            }
        }
        &[f] => {
            let column = if pattern.contains(params.row_parity()) {
                decode_info_with_diag_parity(array, pattern, f)?
            } else {
                decode_info_via_row_parity(array, pattern, f)?
            };
            array.set_column(f, &column)?;
            if pattern.contains(params.row_parity()) {
                codec::encode_row_parity(array, &mut scratch);
            }
            if pattern.contains(params.diag_parity()) {
                codec::encode_diag_parity(array, &mut scratch);
            }
        }
        &[f, g] => {
            let (x, y, s) = decode_two_info_counted(array, f, g)?;
            array.set_column(f, &x)?;
            array.set_column(g, &y)?;
            stats = s;
        }
        _ => return Err(Error::TooManyErasures(cols.len())),
    }
    Ok(stats)
}

/// `b[i][f] = b[i][k] + sum_{j != f} b[i][j]` for every row.
pub fn decode_info_via_row_parity(
    array: &CodeArray,
    pattern: &ErasurePattern,
    f: usize,
) -> Result<Vec<Lane>> {
    let params = array.params();
    check_info_column(params, f)?;
    if pattern.contains(params.row_parity()) {
        return Err(Error::RowParityMissing);
    }
    let mut counter = XorCounter::new();
    Ok((0..params.rows())
        .map(|i| {
            let mut acc = Lane::from_bytes(array.cell(i, params.row_parity()));
            for j in (0..params.k()).filter(|&j| j != f) {
                acc.xor_counted(array.cell(i, j), &mut counter);
            }
            acc
        })
        .collect())
}

/// Recovers information column `f` from the diagonal parity alone.
///
/// For `f >= 1` the column-`f` cells inside the common bits are found first:
/// on rows `i = f-1, ..., max(0, f-t)` the diagonal through column `f` lands
/// on a virtual row, so the only unknown left in the parity is the column-`f`
/// term of `S[i mod t]`. With the common bits complete, every other row is a
/// single-unknown equation.
pub fn decode_info_with_diag_parity(
    array: &CodeArray,
    pattern: &ErasurePattern,
    f: usize,
) -> Result<Vec<Lane>> {
    let params = *array.params();
    check_info_column(&params, f)?;
    if pattern.contains(params.diag_parity()) {
        return Err(Error::DiagParityMissing);
    }
    let (rows, t) = (params.rows(), params.t());
    let mut counter = XorCounter::new();
    let mut column: Vec<Option<Lane>> = vec![None; rows];

    // Surviving part of each common bit.
    let mut common: Vec<Lane> = (0..t)
        .map(|mu| {
            let mut acc = Lane::zero(array.lane_width());
            for (i, j) in codec::common_bit_participants(&params, mu).filter(|&(_, j)| j != f) {
                acc.xor_counted(array.cell(i, j), &mut counter);
            }
            acc
        })
        .collect();

    if f >= 1 {
        for i in (f.saturating_sub(t)..f).rev() {
            let mu = i % t;
            debug_assert!(params.is_virtual(params.mod_ring(i as i64 - f as i64)));
            debug_assert!(i < params.n_c());
            let mut acc = Lane::from_bytes(array.cell(i, params.diag_parity()));
            acc ^= &diagonal_sum(array, i, Some(&[f]), &mut counter);
            acc ^= &common[mu];
            // acc is the column-f participant of S[mu]: b[rows + mu - f][f].
            let r = rows + mu - f;
            common[mu] ^= &acc;
            column[r] = Some(acc);
        }
    }

    for i in 0..rows {
        let r = params.mod_ring(i as i64 - f as i64);
        if params.is_virtual(r) || column[r].is_some() {
            continue;
        }
        let mut acc = Lane::from_bytes(array.cell(i, params.diag_parity()));
        acc ^= &diagonal_sum(array, i, Some(&[f]), &mut counter);
        if i < params.n_c() {
            acc ^= &common[i % t];
        }
        column[r] = Some(acc);
    }
    column
        .into_iter()
        .enumerate()
        .map(|(i, lane)| {
            lane.ok_or_else(|| Error::ChainStall(format!("row {i} of column {f} not reached")))
        })
        .collect()
}

/// XOR of every parity cell. Equals the sum of all common bits.
pub fn sum_common_bits(array: &CodeArray, pattern: &ErasurePattern) -> Result<Lane> {
    let params = array.params();
    if pattern.contains(params.row_parity()) || pattern.contains(params.diag_parity()) {
        return Err(Error::ParityMissing);
    }
    Ok(sum_parity(array, &mut XorCounter::new()))
}

fn sum_parity(array: &CodeArray, counter: &mut XorCounter) -> Lane {
    let params = array.params();
    let mut acc: Option<Lane> = None;
    for col in [params.row_parity(), params.diag_parity()] {
        for i in 0..params.rows() {
            match &mut acc {
                Some(lane) => lane.xor_counted(array.cell(i, col), counter),
                None => acc = Some(Lane::from_bytes(array.cell(i, col))),
            }
        }
    }
    acc.expect("arrays have at least one row")
}

/// Parities reduced to the two erased information columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromePair {
    pub f: usize,
    pub g: usize,
    /// `b[i][f] + b[i][g]`.
    pub row_syn: Vec<Lane>,
    /// `b[i-f][f] + b[i-g][g]`, plus `S'[i mod t]` on the first `n_c` rows.
    pub diag_syn: Vec<Lane>,
    /// Erased part of each common bit, once recovered.
    pub s_prime: Vec<Option<Lane>>,
    /// Sum of all common bits, once computed.
    pub sum_s: Option<Lane>,
    /// Surviving part of each common bit; `None` when it has no surviving
    /// participant.
    pub known_common: Vec<Option<Lane>>,
}

impl SyndromePair {
    /// True when `S'[mu]` has an erased participant. The others are zero.
    pub fn is_active(&self, mu: usize) -> bool {
        mu < self.known_common.len() && mu < self.g
    }

    /// Sum of the erased parts of all common bits.
    fn sum_s_prime(&self, counter: &mut XorCounter) -> Option<Lane> {
        let mut total = self.sum_s.clone()?;
        for known in self.known_common.iter().flatten() {
            total.xor_counted(known, counter);
        }
        Some(total)
    }
}

/// Strips the surviving information columns out of both parity columns and
/// sums the common bits.
pub fn build_syndromes(array: &CodeArray, f: usize, g: usize) -> Result<SyndromePair> {
    let mut stats = DecodeStats::default();
    let mut syn = build_syndromes_counted(array, f, g, &mut stats)?;
    attach_common_sum(array, &mut syn, &mut stats);
    Ok(syn)
}

fn build_syndromes_counted(
    array: &CodeArray,
    f: usize,
    g: usize,
    stats: &mut DecodeStats,
) -> Result<SyndromePair> {
    let params = *array.params();
    check_info_column(&params, f)?;
    check_info_column(&params, g)?;
    if f >= g {
        return Err(Error::InvalidPattern);
    }
    let (rows, t, k) = (params.rows(), params.t(), params.k());
    let mut syn = XorCounter::new();
    let erased = [f, g];

    let row_syn: Vec<Lane> = (0..rows)
        .map(|i| {
            let mut acc = Lane::from_bytes(array.cell(i, params.row_parity()));
            for j in (0..k).filter(|j| !erased.contains(j)) {
                acc.xor_counted(array.cell(i, j), &mut syn);
            }
            acc
        })
        .collect();

    let known_common: Vec<Option<Lane>> = (0..t)
        .map(|mu| {
            let mut acc: Option<Lane> = None;
            for (i, j) in codec::common_bit_participants(&params, mu) {
                if erased.contains(&j) {
                    continue;
                }
                match &mut acc {
                    Some(lane) => lane.xor_counted(array.cell(i, j), &mut syn),
                    None => acc = Some(Lane::from_bytes(array.cell(i, j))),
                }
            }
            acc
        })
        .collect();

    let diag_syn: Vec<Lane> = (0..rows)
        .map(|i| {
            let mut acc = Lane::from_bytes(array.cell(i, params.diag_parity()));
            for j in (0..k).filter(|j| !erased.contains(j)) {
                let r = params.mod_ring(i as i64 - j as i64);
                if !params.is_virtual(r) {
                    acc.xor_counted(array.cell(r, j), &mut syn);
                }
            }
            if i < params.n_c() {
                if let Some(known) = &known_common[i % t] {
                    acc.xor_counted(known, &mut syn);
                }
            }
            acc
        })
        .collect();

    stats.syndrome_xors += syn.count();
    Ok(SyndromePair {
        f,
        g,
        row_syn,
        diag_syn,
        s_prime: vec![None; t],
        sum_s: None,
        known_common,
    })
}

fn attach_common_sum(array: &CodeArray, syn: &mut SyndromePair, stats: &mut DecodeStats) {
    let mut sum = XorCounter::new();
    syn.sum_s = Some(sum_parity(array, &mut sum));
    stats.sum_xors += sum.count();
}

/// Recovers information columns `f < g`.
pub fn decode_two_info(array: &CodeArray, f: usize, g: usize) -> Result<(Vec<Lane>, Vec<Lane>)> {
    decode_two_info_counted(array, f, g).map(|(x, y, _)| (x, y))
}

/// [`decode_two_info`] with XOR tallies.
pub fn decode_two_info_counted(
    array: &CodeArray,
    f: usize,
    g: usize,
) -> Result<(Vec<Lane>, Vec<Lane>, DecodeStats)> {
    let params = *array.params();
    let mut stats = DecodeStats::default();
    let mut syn = build_syndromes_counted(array, f, g, &mut stats)?;
    attach_common_sum(array, &mut syn, &mut stats);
    let (x, y) = solve_syndromes_counted(&params, &mut syn, &mut stats)?;
    Ok((x, y, stats))
}

/// Recovers both erased columns from their syndromes and fills in
/// `syn.s_prime`.
pub fn solve_syndromes(
    params: &CodeParams,
    syn: &mut SyndromePair,
) -> Result<(Vec<Lane>, Vec<Lane>)> {
    solve_syndromes_counted(params, syn, &mut DecodeStats::default())
}

fn solve_syndromes_counted(
    params: &CodeParams,
    syn: &mut SyndromePair,
    stats: &mut DecodeStats,
) -> Result<(Vec<Lane>, Vec<Lane>)> {
    let (f, g) = (syn.f, syn.g);
    let width = syn.row_syn[0].width();
    let mut chain = XorCounter::new();
    let active = active_mask(syn);
    let segments = build_segments(params, syn, None);
    let mut strip = XorCounter::new();
    let sum = syn.sum_s_prime(&mut strip);
    let choice = match params.regime() {
        // Every cycle already starts from a virtual row with a free relation.
        Regime::TauGE if g - f == params.k() - 1 => Schedule::Ring { seeded: false },
        Regime::TauGE => Schedule::Ring { seeded: true },
        Regime::TauLT => {
            let mut options = vec![Schedule::Ring { seeded: true }, Schedule::Ring { seeded: false }];
            if g - f == params.tau() {
                options.insert(0, Schedule::Interleaved);
            }
            options
                .into_iter()
                .filter_map(|o| schedule_cost(params, syn, &segments, &active, o).map(|c| (c, o)))
                .min_by_key(|(c, _)| *c)
                .map_or(Schedule::Ring { seeded: true }, |(_, o)| o)
        }
    };
    let (x, y) = match choice {
        Schedule::Interleaved => decode_interleaved_counted(params, syn, &mut chain)?,
        Schedule::Ring { seeded } => {
            let sum = if seeded {
                stats.syndrome_xors += strip.count();
                sum
            } else {
                None
            };
            let plan = plan(&segments, sum.is_some().then_some(&active))?;
            let nodes = execute(&segments, &plan, &active, sum.as_ref(), &mut chain)?;
            assemble(params, &segments, nodes, width)?
        }
    };
    stats.chain_xors += chain.count();
    verify_pair(params, syn, &x, &y)?;
    Ok((x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Schedule {
    /// One residue class mod `tau` at a time.
    Interleaved,
    /// The whole ring, optionally opening with the common-bit sum.
    Ring { seeded: bool },
}

/// Chain XORs of a schedule, priced on shapes only. `None` when it stalls.
fn schedule_cost(
    params: &CodeParams,
    syn: &SyndromePair,
    segments: &[Segment<Lane>],
    active: &Mask,
    schedule: Schedule,
) -> Option<u64> {
    let mut counter = XorCounter::new();
    let mut dry = |segments: &[Segment<Lane>], seeded: bool| -> Option<()> {
        let plan = plan(segments, seeded.then_some(active)).ok()?;
        let shapes: Vec<Segment<()>> = segments.iter().map(shape).collect();
        execute(&shapes, &plan, active, seeded.then_some(&()), &mut counter).ok()?;
        Some(())
    };
    match schedule {
        Schedule::Interleaved => {
            for rho in 0..params.tau() {
                dry(&build_segments(params, syn, Some(rho)), false)?;
            }
        }
        Schedule::Ring { seeded } => dry(segments, seeded)?,
    }
    Some(counter.count())
}

/// Decodes the pair `g - f = tau < k - 1` as `tau` independent sub-arrays.
///
/// Both unknowns of every equation then share a row residue mod `tau`, and
/// residue class `rho` holds rows `rho, rho + tau, ..., rho + tau(p-2)` with a
/// single virtual row. Each class carries exactly one unknown common bit and
/// is solved without reference to the others.
pub fn decode_interleaved(array: &CodeArray, f: usize, g: usize) -> Result<(Vec<Lane>, Vec<Lane>)> {
    let params = *array.params();
    if params.regime() != Regime::TauLT || g <= f || g - f != params.tau() {
        return Err(Error::InvalidPattern);
    }
    let mut syn = build_syndromes_counted(array, f, g, &mut DecodeStats::default())?;
    let (x, y) = decode_interleaved_counted(&params, &syn, &mut XorCounter::new())?;
    verify_pair(&params, &mut syn, &x, &y)?;
    Ok((x, y))
}

fn decode_interleaved_counted(
    params: &CodeParams,
    syn: &SyndromePair,
    counter: &mut XorCounter,
) -> Result<(Vec<Lane>, Vec<Lane>)> {
    let width = syn.row_syn[0].width();
    let rows = params.rows();
    let mut x = vec![Lane::zero(width); rows];
    let mut y = vec![Lane::zero(width); rows];
    let active = active_mask(syn);
    for rho in 0..params.tau() {
        let segments = build_segments(params, syn, Some(rho));
        let plan = plan(&segments, None)?;
        let nodes = execute(&segments, &plan, &active, None, counter)?;
        let (xs, ys) = assemble(params, &segments, nodes, width)?;
        for seg in &segments {
            for node in &seg.nodes {
                if node.y {
                    y[node.u] = ys[node.u].clone();
                } else {
                    x[node.u] = xs[node.u].clone();
                }
            }
        }
    }
    Ok((x, y))
}

fn active_mask(syn: &SyndromePair) -> Mask {
    let mut mask = Mask::default();
    for mu in (0..syn.known_common.len()).filter(|&mu| syn.is_active(mu)) {
        mask.toggle(&Mask::unit(mu));
    }
    mask
}

/// Checks every syndrome equation against the restored columns and records
/// the recovered `S'` values. Uncounted.
fn verify_pair(params: &CodeParams, syn: &mut SyndromePair, x: &[Lane], y: &[Lane]) -> Result<()> {
    let width = x.first().map_or(1, Lane::width);
    let zero = Lane::zero(width);
    let rows = params.rows();
    let at = |col: &'_ [Lane], r: usize| -> Lane {
        if params.is_virtual(r) {
            zero.clone()
        } else {
            col[r].clone()
        }
    };
    let pair = |e: usize| -> Lane {
        let mut v = at(x, params.mod_ring(e as i64 - syn.f as i64));
        v ^= &at(y, params.mod_ring(e as i64 - syn.g as i64));
        v
    };
    let stall = |what: String| Err(Error::ChainStall(what));
    let s_prime: Vec<Lane> = (0..params.t()).map(|mu| pair(rows + mu)).collect();
    for u in 0..rows {
        let mut v = x[u].clone();
        v ^= &y[u];
        if v != syn.row_syn[u] {
            return stall(format!("row equation {u} fails after decoding"));
        }
    }
    for e in 0..params.ring() {
        let mut v = pair(e);
        if e < rows {
            if e < params.n_c() && syn.is_active(e % params.t()) {
                v ^= &s_prime[e % params.t()];
            }
            if v != syn.diag_syn[e] {
                return stall(format!("diagonal equation {e} fails after decoding"));
            }
        } else if (e - rows >= params.t() || !syn.is_active(e - rows)) && !v.is_zero() {
            return stall(format!("virtual diagonal {e} is not zero after decoding"));
        }
    }
    if let Some(sum) = syn.sum_s_prime(&mut XorCounter::new()) {
        let mut total = zero.clone();
        for (mu, s) in s_prime.iter().enumerate() {
            if syn.is_active(mu) {
                total ^= s;
            }
        }
        if total != sum {
            return stall("common-bit sum disagrees with the restored columns".into());
        }
    }
    for (mu, s) in s_prime.into_iter().enumerate() {
        syn.s_prime[mu] = syn.is_active(mu).then_some(s);
    }
    Ok(())
}

fn check_info_column(params: &CodeParams, c: usize) -> Result<()> {
    if c >= params.k() {
        return Err(Error::ColumnOutOfRange {
            col: c,
            columns: params.k(),
        });
    }
    Ok(())
}

/// Set of `S'` indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Mask(Vec<u64>);

impl Mask {
    fn unit(bit: usize) -> Self {
        let mut words = vec![0; bit / 64 + 1];
        words[bit / 64] = 1 << (bit % 64);
        Mask(words)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn toggle(&mut self, other: &Mask) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    fn union(&mut self, other: &Mask) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    fn bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }

    fn contains_bit(&self, bit: usize) -> bool {
        self.0.get(bit / 64).is_some_and(|w| w >> (bit % 64) & 1 == 1)
    }

    fn lowest(&self) -> Option<usize> {
        self.bits().next()
    }

    fn from_bits(bits: impl IntoIterator<Item = usize>) -> Mask {
        let mut mask = Mask::default();
        for b in bits {
            mask.toggle(&Mask::unit(b));
        }
        mask
    }
}

/// Lane arithmetic, real or shape-only. The shape form `()` lets the
/// planner price a schedule without touching data.
trait Value: Clone {
    fn plus(&self, other: &Self, counter: &mut XorCounter) -> Self;
    fn vanishes(&self) -> bool;
}

impl Value for Lane {
    fn plus(&self, other: &Self, counter: &mut XorCounter) -> Self {
        let mut out = self.clone();
        out.xor_counted(other, counter);
        out
    }

    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl Value for () {
    fn plus(&self, _: &Self, counter: &mut XorCounter) -> Self {
        counter.add(1);
    }

    fn vanishes(&self) -> bool {
        true
    }
}

/// `lane + sum_{mu in mask} S'[mu]`. A missing lane is structurally zero and
/// costs nothing to combine.
#[derive(Debug, Clone)]
struct Sym<L> {
    lane: Option<L>,
    mask: Mask,
}

impl<L: Value> Sym<L> {
    fn add(&self, other: &Sym<L>, counter: &mut XorCounter) -> Sym<L> {
        let lane = match (&self.lane, &other.lane) {
            (Some(a), Some(b)) => Some(a.plus(b, counter)),
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        };
        let mut mask = self.mask.clone();
        mask.toggle(&other.mask);
        Sym { lane, mask }
    }

    fn shape(&self) -> Sym<()> {
        Sym {
            lane: self.lane.as_ref().map(|_| ()),
            mask: self.mask.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Node {
    /// Column `g` when set, column `f` otherwise.
    y: bool,
    u: usize,
}

/// A run of real rows between two virtual rows of one cycle.
///
/// Equations form a path: `edges[0]` ties `nodes[0]` to the leading virtual
/// row, `edges[i]` ties `nodes[i-1]` to `nodes[i]` and the last edge ties the
/// last node to the trailing virtual row. Every node is therefore the sum of
/// the edges on either side of it, and the sum of all edges vanishes.
#[derive(Debug, Clone)]
struct Segment<L> {
    edges: Vec<Sym<L>>,
    nodes: Vec<Node>,
}

fn build_segments(params: &CodeParams, syn: &SyndromePair, only: Option<usize>) -> Vec<Segment<Lane>> {
    let (n, rows, t, n_c) = (params.ring(), params.rows(), params.t(), params.n_c());
    let s = syn.g - syn.f;
    let tag = |mu: usize| {
        if syn.is_active(mu) {
            Mask::unit(mu)
        } else {
            Mask::default()
        }
    };
    let diag = |u: usize| -> Sym<Lane> {
        let e = (u + syn.f) % n;
        if e < rows {
            Sym {
                lane: Some(syn.diag_syn[e].clone()),
                mask: if e < n_c { tag(e % t) } else { Mask::default() },
            }
        } else {
            let mu = e - rows;
            Sym {
                lane: None,
                mask: if mu < t { tag(mu) } else { Mask::default() },
            }
        }
    };
    let row = |u: usize| Sym {
        lane: Some(syn.row_syn[u].clone()),
        mask: Mask::default(),
    };

    let cycles = gcd(s, n);
    let len = n / cycles;
    let mut segments = Vec::new();
    for c in (0..cycles).filter(|&c| only.is_none_or(|o| o == c)) {
        let order: Vec<usize> = (0..len).map(|q| (c + q * s) % n).collect();
        let first = order
            .iter()
            .position(|&u| u >= rows)
            .expect("every cycle meets a virtual row");
        let mut current = Segment {
            edges: Vec::new(),
            nodes: Vec::new(),
        };
        for q in 1..=len {
            let u = order[(first + q) % len];
            current.edges.push(diag(u));
            if u >= rows {
                segments.push(std::mem::replace(
                    &mut current,
                    Segment {
                        edges: Vec::new(),
                        nodes: Vec::new(),
                    },
                ));
            } else {
                current.nodes.push(Node { y: false, u });
                current.edges.push(row(u));
                current.nodes.push(Node { y: true, u });
            }
        }
    }
    segments
}

fn shape(segment: &Segment<Lane>) -> Segment<()> {
    Segment {
        edges: segment.edges.iter().map(Sym::shape).collect(),
        nodes: segment.nodes.clone(),
    }
}

/// What is known about the `S'` values: independent relations in
/// row-echelon form keyed by lowest index, the individual values they pin
/// down, and cached sums.
#[derive(Debug, Clone)]
struct Facts<L> {
    basis: BTreeMap<usize, Sym<L>>,
    values: BTreeMap<usize, L>,
    combos: BTreeMap<Mask, L>,
}

impl<L: Value> Facts<L> {
    fn new() -> Self {
        Facts {
            basis: BTreeMap::new(),
            values: BTreeMap::new(),
            combos: BTreeMap::new(),
        }
    }

    fn valued(&self) -> Mask {
        Mask::from_bits(self.values.keys().copied())
    }

    fn all_valued(&self, mask: &Mask) -> bool {
        mask.bits().all(|b| self.values.contains_key(&b))
    }

    /// Adds a relation `lane + sum S'[mask] = 0`; returns whether it was
    /// independent of the stored ones.
    fn insert(&mut self, mut rel: Sym<L>, counter: &mut XorCounter) -> Result<bool> {
        loop {
            let pivot = rel.mask.bits().find(|b| self.basis.contains_key(b));
            let Some(pivot) = pivot else { break };
            rel = rel.add(&self.basis[&pivot], counter);
        }
        let independent = match rel.mask.lowest() {
            Some(pivot) => {
                self.basis.insert(pivot, rel);
                true
            }
            None if rel.lane.as_ref().is_none_or(Value::vanishes) => false,
            None => {
                return Err(Error::ChainStall(
                    "parity relations are inconsistent; columns other than the erased ones are damaged"
                        .into(),
                ))
            }
        };
        if independent {
            self.settle(counter);
        }
        Ok(independent)
    }

    /// True when the sum of `S'` over `mask` follows from the relations.
    fn in_span(&self, mask: &Mask) -> bool {
        let mut rem = mask.clone();
        while let Some(low) = rem.lowest() {
            match self.basis.get(&low) {
                Some(row) => rem.toggle(&row.mask),
                None => return false,
            }
        }
        true
    }

    /// Value of the sum of `S'` over `mask`, if it follows from the
    /// relations.
    fn resolve(&mut self, mask: &Mask, counter: &mut XorCounter) -> Option<L> {
        if let Some(v) = self.combos.get(mask) {
            return Some(v.clone());
        }
        let value = if self.all_valued(mask) {
            let mut bits = mask.bits();
            let mut acc = self.values[&bits.next()?].clone();
            for b in bits {
                acc = acc.plus(&self.values[&b], counter);
            }
            acc
        } else {
            if !self.in_span(mask) {
                return None;
            }
            let mut rem = mask.clone();
            let mut acc: Option<L> = None;
            while let Some(low) = rem.lowest() {
                let row = &self.basis[&low];
                rem.toggle(&row.mask);
                if let Some(l) = &row.lane {
                    acc = Some(match acc {
                        Some(a) => a.plus(l, counter),
                        None => l.clone(),
                    });
                }
            }
            acc?
        };
        self.combos.insert(mask.clone(), value.clone());
        Some(value)
    }

    /// Records every relation whose other indices are solved.
    fn settle(&mut self, counter: &mut XorCounter) {
        loop {
            let ready: Vec<(usize, Sym<L>)> = self
                .basis
                .iter()
                .rev()
                .filter(|(pivot, _)| !self.values.contains_key(pivot))
                .filter(|(pivot, rel)| {
                    rel.mask
                        .bits()
                        .all(|b| b == **pivot || self.values.contains_key(&b))
                })
                .map(|(p, r)| (*p, r.clone()))
                .collect();
            if ready.is_empty() {
                break;
            }
            for (pivot, rel) in ready {
                let mut rest = rel.mask.clone();
                rest.toggle(&Mask::unit(pivot));
                let value = self.fold(
                    &Sym {
                        lane: rel.lane.clone(),
                        mask: rest,
                    },
                    counter,
                );
                if let Some(l) = value.lane {
                    self.values.insert(pivot, l);
                }
            }
        }
    }

    /// Folds the individually solved part of `sym`'s mask into its lane.
    fn fold(&mut self, sym: &Sym<L>, counter: &mut XorCounter) -> Sym<L> {
        let solved = Mask::from_bits(sym.mask.bits().filter(|b| self.values.contains_key(b)));
        if solved.is_empty() {
            return sym.clone();
        }
        self.apply(sym, &solved, counter)
    }

    /// Folds the whole mask of `sym` into its lane when it is resolvable.
    fn clear(&mut self, sym: &Sym<L>, counter: &mut XorCounter) -> Option<Sym<L>> {
        if sym.mask.is_empty() {
            return Some(sym.clone());
        }
        if !self.all_valued(&sym.mask) && !self.in_span(&sym.mask) {
            return None;
        }
        Some(self.apply(sym, &sym.mask.clone(), counter))
    }

    fn apply(&mut self, sym: &Sym<L>, part: &Mask, counter: &mut XorCounter) -> Sym<L> {
        let fix = self.resolve(part, counter).expect("resolvable part");
        let mut mask = sym.mask.clone();
        mask.toggle(part);
        let lane = match &sym.lane {
            Some(l) => l.plus(&fix, counter),
            None => fix,
        };
        Sym {
            lane: Some(lane),
            mask,
        }
    }
}

/// How one segment is walked: the edge both walks stop at, which edges get
/// their solved `S'` terms folded in before use, and which nodes have their
/// carried `S'` sum cleared right after they are formed.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Route {
    cut: usize,
    fold: Vec<bool>,
    clear: Vec<bool>,
}

/// Walks a segment from both ends towards the cut edge. Returns the node
/// values and, when asked, the segment's own relation through the cut edge.
fn walk<L: Value>(
    segment: &Segment<L>,
    route: &Route,
    facts: &mut Facts<L>,
    counter: &mut XorCounter,
    want_relation: bool,
) -> (Vec<Sym<L>>, Option<Sym<L>>) {
    let edges = &segment.edges;
    let n = segment.nodes.len();
    let cut = route.cut;
    let edge = |j: usize, facts: &mut Facts<L>, counter: &mut XorCounter| {
        if route.fold[j] {
            facts.fold(&edges[j], counter)
        } else {
            edges[j].clone()
        }
    };
    let settle_node = |j: usize, v: Sym<L>, facts: &mut Facts<L>, counter: &mut XorCounter| {
        if route.clear[j] {
            facts.clear(&v, counter).unwrap_or(v)
        } else {
            v
        }
    };
    let mut nodes: Vec<Option<Sym<L>>> = vec![None; n];
    for j in 0..cut {
        let e = edge(j, facts, counter);
        let v = match j {
            0 => e,
            _ => nodes[j - 1].as_ref().expect("prefix").add(&e, counter),
        };
        nodes[j] = Some(settle_node(j, v, facts, counter));
    }
    for j in (cut..n).rev() {
        let e = edge(j + 1, facts, counter);
        let v = if j + 1 < n {
            nodes[j + 1].as_ref().expect("suffix").add(&e, counter)
        } else {
            e
        };
        nodes[j] = Some(settle_node(j, v, facts, counter));
    }
    let relation = want_relation.then(|| {
        let mut rel = facts.fold(&edges[cut], counter);
        if cut > 0 {
            rel = nodes[cut - 1].as_ref().expect("prefix").add(&rel, counter);
        }
        if cut < n {
            rel = rel.add(nodes[cut].as_ref().expect("suffix"), counter);
        }
        facts.fold(&rel, counter)
    });
    (nodes.into_iter().map(|v| v.expect("walked")).collect(), relation)
}

/// Cost of patching nodes that still carry `S'` terms.
fn patch_cost(nodes: &[Sym<()>]) -> u64 {
    nodes
        .iter()
        .filter(|v| v.lane.is_some() && !v.mask.is_empty())
        .count() as u64
}

/// Picks folds and clears for one side of a cut, minimizing combine, fold,
/// clear and patch costs. `order` lists `(edge, node)` pairs in walking
/// order; each edge forms the node paired with it.
fn choose_side(
    edges: &[Sym<()>],
    order: impl Iterator<Item = (usize, usize)>,
    facts: &Facts<()>,
    route: &mut Route,
) {
    const MAX_STATES: usize = 256;
    #[derive(Clone)]
    struct State {
        cost: u64,
        folds: Vec<usize>,
        clears: Vec<usize>,
    }
    let valued = facts.valued();
    let mut states: BTreeMap<(Mask, bool), State> = BTreeMap::new();
    states.insert(
        (Mask::default(), false),
        State {
            cost: 0,
            folds: Vec::new(),
            clears: Vec::new(),
        },
    );
    let offer = |next: &mut BTreeMap<(Mask, bool), State>, key: (Mask, bool), s: State| {
        if next.get(&key).is_none_or(|o| s.cost < o.cost) {
            next.insert(key, s);
        }
    };
    for (j, node) in order {
        let e = &edges[j];
        let solved = Mask::from_bits(e.mask.bits().filter(|b| valued.contains_bit(*b)));
        let mut next: BTreeMap<(Mask, bool), State> = BTreeMap::new();
        for ((mask, lane), state) in &states {
            let options: &[bool] = if solved.is_empty() { &[false] } else { &[false, true] };
            for &fold in options {
                let mut eff = e.mask.clone();
                let mut s = state.clone();
                let eff_lane = if fold {
                    eff.toggle(&solved);
                    s.cost += e.lane.is_some() as u64;
                    s.folds.push(j);
                    true
                } else {
                    e.lane.is_some()
                };
                s.cost += (*lane && eff_lane) as u64;
                let mut m = mask.clone();
                m.toggle(&eff);
                let l = *lane || eff_lane;
                if !m.is_empty() && (facts.all_valued(&m) || facts.in_span(&m)) {
                    let mut cleared = s.clone();
                    cleared.cost += l as u64;
                    cleared.clears.push(node);
                    offer(&mut next, (Mask::default(), true), cleared);
                }
                s.cost += (l && !m.is_empty()) as u64;
                offer(&mut next, (m, l), s);
            }
        }
        if next.len() > MAX_STATES {
            let mut ranked: Vec<_> = next.into_iter().collect();
            ranked.sort_by_key(|(_, s)| s.cost);
            ranked.truncate(MAX_STATES);
            next = ranked.into_iter().collect();
        }
        states = next;
    }
    if let Some(best) = states.into_values().min_by_key(|s| s.cost) {
        for j in best.folds {
            route.fold[j] = true;
        }
        for j in best.clears {
            route.clear[j] = true;
        }
    }
}

/// Cheapest route through `cut` given `facts`, priced exactly on shapes.
fn route_for(
    seg: &Segment<()>,
    cut: usize,
    facts: &Facts<()>,
    want_relation: bool,
) -> (u64, Route, Option<Sym<()>>) {
    let n = seg.nodes.len();
    let mut route = Route {
        cut,
        fold: vec![false; seg.edges.len()],
        clear: vec![false; n],
    };
    choose_side(&seg.edges, (0..cut).map(|j| (j, j)), facts, &mut route);
    choose_side(&seg.edges, (cut..n).rev().map(|j| (j + 1, j)), facts, &mut route);
    let mut c = XorCounter::new();
    let mut scratch = facts.clone();
    let (nodes, rel) = walk(seg, &route, &mut scratch, &mut c, want_relation);
    (c.count() + patch_cost(&nodes), route, rel)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Step {
    /// Use the sum of all `S'` values.
    Sum,
    /// Walk a segment before its `S'` terms are solved, keeping its relation.
    Early { segment: usize, route: Route },
}

#[derive(Debug, Clone)]
struct Plan {
    steps: Vec<Step>,
    /// Route of every segment not walked early.
    late: Vec<Option<Route>>,
}

/// Orders the work so that the `S'` sums needed by the segments are known
/// with the fewest XORs. Priced on lane shapes only. `sum`, when given, is
/// the support of a known relation summing all `S'` values.
fn plan(segments: &[Segment<Lane>], sum: Option<&Mask>) -> Result<Plan> {
    let shapes: Vec<Segment<()>> = segments.iter().map(shape).collect();
    let mut needed = Mask::default();
    for seg in shapes.iter().filter(|s| !s.nodes.is_empty()) {
        for edge in &seg.edges {
            needed.union(&edge.mask);
        }
    }
    let mut all_known = Facts::<()>::new();
    for b in needed.bits() {
        all_known.values.insert(b, ());
    }
    let clean = |seg: &Segment<()>| -> (u64, Route) {
        (0..seg.edges.len())
            .map(|cut| {
                let (cost, route, _) = route_for(seg, cut, &all_known, false);
                (cost, route)
            })
            .min_by_key(|(cost, route)| (*cost, std::cmp::Reverse(route.cut)))
            .expect("segments have edges")
    };

    let mut facts = Facts::<()>::new();
    let mut walked = vec![false; shapes.len()];
    let mut steps = Vec::new();
    let mut scratch = XorCounter::new();
    if let Some(mask) = sum {
        steps.push(Step::Sum);
        facts.insert(
            Sym {
                lane: Some(()),
                mask: mask.clone(),
            },
            &mut scratch,
        )?;
    }
    for (i, seg) in shapes.iter().enumerate().filter(|(_, s)| s.nodes.is_empty()) {
        walked[i] = true;
        facts.insert(seg.edges[0].clone(), &mut scratch)?;
    }
    while !facts.all_valued(&needed) {
        let mut best: Option<(i64, usize, Route)> = None;
        for (i, seg) in shapes.iter().enumerate().filter(|&(i, _)| !walked[i]) {
            let base = clean(seg).0 as i64;
            for cut in 0..seg.edges.len() {
                let (cost, route, rel) = route_for(seg, cut, &facts, true);
                let mut c = XorCounter::new();
                if !facts.clone().insert(rel.expect("relation requested"), &mut c)? {
                    continue;
                }
                let delta = (cost + c.count()) as i64 - base;
                if best.as_ref().is_none_or(|(d, _, _)| delta < *d) {
                    best = Some((delta, i, route));
                }
            }
        }
        let Some((_, segment, route)) = best else {
            let missing = needed
                .bits()
                .find(|b| !facts.values.contains_key(b))
                .expect("loop condition");
            return Err(Error::ChainStall(format!(
                "S'[{missing}] is not determined by the parity relations"
            )));
        };
        walked[segment] = true;
        let (_, rel) = walk(&shapes[segment], &route, &mut facts, &mut scratch, true);
        facts.insert(rel.expect("relation requested"), &mut scratch)?;
        steps.push(Step::Early { segment, route });
    }
    let late = shapes
        .iter()
        .enumerate()
        .map(|(i, seg)| (!walked[i]).then(|| clean(seg).1))
        .collect();
    Ok(Plan { steps, late })
}

/// Carries out `plan` on real lanes. Returns node values per segment.
fn execute<L: Value>(
    segments: &[Segment<L>],
    plan: &Plan,
    active: &Mask,
    sum_lane: Option<&L>,
    counter: &mut XorCounter,
) -> Result<Vec<Vec<Sym<L>>>> {
    let mut facts = Facts::<L>::new();
    let mut values: Vec<Option<Vec<Sym<L>>>> = vec![None; segments.len()];
    if plan.steps.first() == Some(&Step::Sum) {
        let lane = sum_lane.expect("plan uses the common-bit sum").clone();
        facts.insert(
            Sym {
                lane: Some(lane),
                mask: active.clone(),
            },
            counter,
        )?;
    }
    for (i, seg) in segments.iter().enumerate().filter(|(_, s)| s.nodes.is_empty()) {
        facts.insert(seg.edges[0].clone(), counter)?;
        values[i] = Some(Vec::new());
    }
    for step in &plan.steps {
        if let Step::Early { segment, route } = step {
            let (nodes, rel) = walk(&segments[*segment], route, &mut facts, counter, true);
            facts.insert(rel.expect("relation requested"), counter)?;
            values[*segment] = Some(nodes);
        }
    }
    for (i, route) in plan.late.iter().enumerate() {
        if let Some(route) = route {
            let (nodes, _) = walk(&segments[i], route, &mut facts, counter, false);
            values[i] = Some(nodes);
        }
    }
    values
        .into_iter()
        .map(|nodes| {
            nodes
                .expect("every segment walked")
                .into_iter()
                .map(|v| {
                    facts
                        .clear(&v, counter)
                        .ok_or_else(|| Error::ChainStall("a cell depends on an unsolved S'".into()))
                })
                .collect()
        })
        .collect()
}

fn assemble(
    params: &CodeParams,
    segments: &[Segment<Lane>],
    values: Vec<Vec<Sym<Lane>>>,
    width: usize,
) -> Result<(Vec<Lane>, Vec<Lane>)> {
    let rows = params.rows();
    let mut x: Vec<Option<Lane>> = vec![None; rows];
    let mut y: Vec<Option<Lane>> = vec![None; rows];
    for (seg, nodes) in segments.iter().zip(values) {
        for (node, v) in seg.nodes.iter().zip(nodes) {
            let lane = v.lane.unwrap_or_else(|| Lane::zero(width));
            if node.y {
                y[node.u] = Some(lane);
            } else {
                x[node.u] = Some(lane);
            }
        }
    }
    let fill = |col: Vec<Option<Lane>>| -> Vec<Lane> {
        col.into_iter()
            .map(|v| v.unwrap_or_else(|| Lane::zero(width)))
            .collect()
    };
    Ok((fill(x), fill(y)))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Chain decoder against the Gaussian oracle for one column pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAgreement {
    pub pair: (usize, usize),
    pub trials: usize,
    /// Trials the chain decoder failed or got wrong.
    pub decoder_failures: usize,
    /// Trials the oracle failed or got wrong.
    pub oracle_failures: usize,
    /// Trials where the two restored arrays differ.
    pub disagreements: usize,
}

impl PairAgreement {
    pub fn passed(&self) -> bool {
        self.decoder_failures == 0 && self.oracle_failures == 0 && self.disagreements == 0
    }
}

/// Erases every column pair of `trials` seeded random lane-width-1 arrays
/// and restores it with both [`decode`] and the Gaussian oracle.
pub fn cross_check(params: &CodeParams, trials: usize, seed: u64) -> Vec<PairAgreement> {
    use crate::oracle::{column_pairs, gaussian_decode, generator_matrix, write_info};
    use rand::SeedableRng;
    let gen = generator_matrix(params);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    column_pairs(params)
        .into_iter()
        .map(|(a, b)| {
            let mut out = PairAgreement {
                pair: (a, b),
                trials,
                decoder_failures: 0,
                oracle_failures: 0,
                disagreements: 0,
            };
            let pattern = ErasurePattern::new(params, &[a, b]).expect("distinct columns");
            for _ in 0..trials {
                let mut original = CodeArray::random(*params, 1, &mut rng).expect("width 1");
                codec::encode(&mut original);
                let mut lost = original.clone();
                lost.clear_column(a);
                lost.clear_column(b);
                let mut chain = lost.clone();
                let chain_ok = decode(&mut chain, &pattern).is_ok() && chain == original;
                let mut gauss = lost.clone();
                let gauss_ok = match gaussian_decode(params, &gen, &lost, &[a, b]) {
                    Ok(info) => {
                        write_info(params, &mut gauss, &info);
                        codec::encode(&mut gauss);
                        gauss == original
                    }
                    Err(_) => false,
                };
                out.decoder_failures += !chain_ok as usize;
                out.oracle_failures += !gauss_ok as usize;
                out.disagreements += (chain != gauss) as usize;
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{compute_common_bits, encode};
    use crate::oracle::{gaussian_decode, generator_matrix, position};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn at(tau: i64, p: i64, k: i64) -> CodeParams {
        CodeParams::new(tau, p, k).unwrap()
    }

    fn random_encoded(params: CodeParams, width: usize, seed: u64) -> CodeArray {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = CodeArray::random(params, width, &mut rng).unwrap();
        encode(&mut a);
        a
    }

    fn erase_and_decode(params: CodeParams, cols: &[usize], seed: u64) -> Result<()> {
        let original = random_encoded(params, 8, seed);
        let mut a = original.clone();
        for &c in cols {
            a.clear_column(c);
        }
        decode(&mut a, &ErasurePattern::new(&params, cols)?)?;
        assert_eq!(a, original, "{params} erased {cols:?}");
        Ok(())
    }

    #[test]
    fn restores_examples() {
        let p = at(2, 5, 3);
        for cols in [[3, 4], [0, 2], [1, 3], [0, 1], [1, 2], [2, 4], [0, 4]] {
            erase_and_decode(p, &cols, 7).unwrap();
        }
    }

    #[test]
    fn single_column_via_row_parity() {
        for (params, f) in [(at(2, 5, 3), 1), (at(1, 5, 3), 0)] {
            let a = random_encoded(params, 4, 3);
            let pattern = ErasurePattern::new(&params, &[f]).unwrap();
            let mut lost = a.clone();
            lost.clear_column(f);
            assert_eq!(decode_info_via_row_parity(&lost, &pattern, f).unwrap(), a.column(f));
        }
        let zero = CodeArray::new(at(2, 5, 3), 2).unwrap();
        let pattern = ErasurePattern::new(zero.params(), &[1]).unwrap();
        let col = decode_info_via_row_parity(&zero, &pattern, 1).unwrap();
        assert!(col.iter().all(Lane::is_zero));
    }

    #[test]
    fn single_column_via_diag_parity() {
        let params = at(2, 5, 3);
        for f in 0..params.k() {
            let a = random_encoded(params, 4, 11 + f as u64);
            let pattern = ErasurePattern::new(&params, &[f, params.row_parity()]).unwrap();
            let mut lost = a.clone();
            lost.clear_column(f);
            lost.clear_column(params.row_parity());
            assert_eq!(decode_info_with_diag_parity(&lost, &pattern, f).unwrap(), a.column(f));
        }
        let zero = CodeArray::new(params, 1).unwrap();
        let pattern = ErasurePattern::new(&params, &[2, 3]).unwrap();
        let col = decode_info_with_diag_parity(&zero, &pattern, 2).unwrap();
        assert!(col.iter().all(Lane::is_zero));
    }

    #[test]
    fn common_sum_of_single_participant() {
        let params = at(2, 5, 3);
        let mut a = CodeArray::new(params, 1).unwrap();
        a.set_cell(7, 1, &[1]).unwrap();
        encode(&mut a);
        let none = ErasurePattern::new(&params, &[0, 2]).unwrap();
        assert_eq!(sum_common_bits(&a, &none).unwrap().as_bytes(), &[1]);
        let zero = CodeArray::new(params, 1).unwrap();
        assert!(sum_common_bits(&zero, &none).unwrap().is_zero());
    }

    #[test]
    fn common_sum_matches_direct_computation() {
        let params = at(2, 7, 4);
        let a = random_encoded(params, 16, 5);
        let none = ErasurePattern::new(&params, &[0, 2]).unwrap();
        assert_eq!(sum_common_bits(&a, &none).unwrap(), compute_common_bits(&a).sum());
        let gone = ErasurePattern::new(&params, &[params.row_parity()]).unwrap();
        assert!(matches!(sum_common_bits(&a, &gone), Err(Error::ParityMissing)));
    }

    #[test]
    fn syndromes_of_unencoded_cell() {
        let params = at(2, 5, 3);
        let mut a = CodeArray::new(params, 1).unwrap();
        a.set_cell(3, 1, &[1]).unwrap();
        let syn = build_syndromes(&a, 0, 2).unwrap();
        for i in 0..params.rows() {
            assert_eq!(syn.row_syn[i].as_bytes(), &[(i == 3) as u8], "row {i}");
            assert_eq!(syn.diag_syn[i].as_bytes(), &[(i == 4) as u8], "diag {i}");
        }
        let zero = build_syndromes(&CodeArray::new(params, 1).unwrap(), 0, 1).unwrap();
        assert!(zero.row_syn.iter().chain(&zero.diag_syn).all(Lane::is_zero));
    }

    #[test]
    fn solve_fills_common_parts() {
        let params = at(2, 5, 3);
        let a = random_encoded(params, 4, 9);
        let mut syn = build_syndromes(&a, 0, 2).unwrap();
        let (x, y) = solve_syndromes(&params, &mut syn).unwrap();
        assert_eq!((x, y), (a.column(0), a.column(2)));
        let common = compute_common_bits(&a);
        for mu in 0..params.t() {
            let mut erased = Lane::zero(4);
            for (i, j) in codec::common_bit_participants(&params, mu) {
                if j == 2 {
                    erased ^= a.cell(i, j);
                }
            }
            assert_eq!(syn.s_prime[mu].as_ref(), Some(&erased), "mu {mu}");
            let mut whole = erased.clone();
            if let Some(k) = &syn.known_common[mu] {
                whole ^= k;
            }
            assert_eq!(whole, common.s[mu]);
        }
    }

    #[test]
    fn exact_budget_for_boundary_pair() {
        let params = at(2, 5, 3);
        let a = random_encoded(params, 4, 1);
        let (_, _, stats) = decode_two_info_counted(&a, 0, 2).unwrap();
        assert_eq!(stats.sum_xors, 15);
        assert_eq!(stats.recovery_xors(), 33);
        let zero = CodeArray::new(params, 4).unwrap();
        let (_, _, same) = decode_two_info_counted(&zero, 0, 2).unwrap();
        assert_eq!(same, stats);
    }

    fn oracle_info(array: &CodeArray, f: usize, g: usize) -> (Vec<Lane>, Vec<Lane>) {
        let params = *array.params();
        let gen = generator_matrix(&params);
        let info = gaussian_decode(&params, &gen, array, &[f, g]).unwrap();
        let col = |c: usize| (0..params.rows()).map(|i| info[position(&params, i, c)].clone()).collect();
        (col(f), col(g))
    }

    #[test]
    fn agrees_with_oracle_across_regimes() {
        for params in [at(2, 5, 3), at(1, 7, 5), at(2, 7, 4), at(3, 9, 3), at(1, 5, 3)] {
            let bad = crate::oracle::mds_rank_check(&params);
            for f in 0..params.k() {
                for g in f + 1..params.k() {
                    if bad.contains(&(f, g)) {
                        continue;
                    }
                    let mut a = random_encoded(params, 1, (f * 31 + g) as u64);
                    let want = (a.column(f), a.column(g));
                    a.clear_column(f);
                    a.clear_column(g);
                    assert_eq!(decode_two_info(&a, f, g).unwrap(), want, "{params} ({f},{g})");
                    assert_eq!(oracle_info(&a, f, g), want);
                }
            }
        }
    }

    #[test]
    fn unrecoverable_pair_stalls() {
        let params = at(2, 7, 4);
        let mut a = random_encoded(params, 1, 2);
        a.clear_column(0);
        a.clear_column(3);
        assert!(matches!(decode_two_info(&a, 0, 3), Err(Error::ChainStall(_))));
    }

    #[test]
    fn interleaved_matches_oracle() {
        for params in [at(1, 7, 5), at(2, 7, 4), at(2, 11, 5)] {
            let d = params.tau();
            for f in 0..params.k() - d {
                let g = f + d;
                let mut a = random_encoded(params, 1, f as u64);
                let want = (a.column(f), a.column(g));
                a.clear_column(f);
                a.clear_column(g);
                assert_eq!(decode_interleaved(&a, f, g).unwrap(), want);
                assert_eq!(oracle_info(&a, f, g), want);
            }
        }
        let a = random_encoded(at(2, 5, 3), 1, 0);
        assert!(matches!(decode_interleaved(&a, 0, 2), Err(Error::InvalidPattern)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn row_syndrome_is_pair_sum(seed in any::<u64>(), f in 0usize..3, d in 1usize..3) {
            let params = at(2, 5, 3);
            let g = f + d;
            prop_assume!(g < params.k());
            let a = random_encoded(params, 2, seed);
            let syn = build_syndromes(&a, f, g).unwrap();
            for i in 0..params.rows() {
                let mut want = Lane::from_bytes(a.cell(i, f));
                want ^= a.cell(i, g);
                prop_assert_eq!(&syn.row_syn[i], &want);
            }
        }

        #[test]
        fn any_two_columns_round_trip(seed in any::<u64>(), a in 0usize..5, b in 0usize..5) {
            prop_assume!(a != b);
            erase_and_decode(at(2, 5, 3), &[a, b], seed).unwrap();
        }
    }
}
