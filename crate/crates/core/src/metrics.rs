//! XOR accounting and update complexity, measured and in closed form.
//!
//! Counts are taken on lane-width-1 arrays with an explicit
//! [`XorCounter`]. A decode count covers the work done after the syndromes
//! are formed: summing the parity cells into the common-bit total plus the
//! chain walk.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;

use crate::array::CodeArray;
use crate::baseline::{evenodd_update_complexity, evenodd_update_formula, EvenoddParams};
use crate::codec::{encode_counted, update_cell};
use crate::decoder::decode_two_info_counted;
use crate::error::Result;
use crate::lane::XorCounter;
use crate::params::{CodeParams, Regime};

pub type Rational = Ratio<i64>;

fn q(n: u64) -> Rational {
    Rational::from_integer(n as i64)
}

/// Information bits per array, `k * tau * (p - 1)`.
pub fn info_bits(params: &CodeParams) -> i64 {
    params.info_cells() as i64
}

/// Instrumented XOR count of one encode.
pub fn count_encode_xors(params: &CodeParams) -> u64 {
    let mut array = CodeArray::new(*params, 1).expect("width 1");
    let mut counter = XorCounter::new();
    encode_counted(&mut array, &mut counter);
    counter.count()
}

/// `floor((k-1)/2)` when `tau >= k - 1`, `floor(k/2)` otherwise; raised to 1
/// for `k = 2` so that `n_c = 2 * half * t` holds.
fn half(params: &CodeParams) -> u64 {
    let k = params.k() as u64;
    match params.regime() {
        Regime::TauGE => ((k - 1) / 2).max(1),
        Regime::TauLT => k / 2,
    }
}

/// Closed-form encode count of the regime.
pub fn encode_formula(params: &CodeParams) -> u64 {
    let (k, tau, r) = (params.k() as u64, params.tau() as u64, params.rows() as u64);
    let h = half(params);
    match params.regime() {
        Regime::TauGE => 2 * (k - 1) * r - (k - 1) + 2 * h * (k - 1),
        Regime::TauLT => 2 * (k - 1) * r - tau + 2 * h * tau,
    }
}

/// Which closed-form decode case a pair falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecodeCase {
    /// `tau >= k - 1`, `g - f = k - 1`.
    Boundary { divisible: bool },
    /// `tau >= k - 1`, `g - f < k - 1`.
    Inner { divisible: bool },
    /// `tau < k - 1`, `g - f = tau`.
    Interleaved,
    /// `tau < k - 1`, `g - f != tau`.
    Spread { divisible: bool },
}

impl DecodeCase {
    pub fn of(params: &CodeParams, f: usize, g: usize) -> Self {
        let d = g - f;
        let divisible = params.rows().is_multiple_of(d);
        match params.regime() {
            Regime::TauGE if d == params.k() - 1 => DecodeCase::Boundary { divisible },
            Regime::TauGE => DecodeCase::Inner { divisible },
            Regime::TauLT if d == params.tau() => DecodeCase::Interleaved,
            Regime::TauLT => DecodeCase::Spread { divisible },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DecodeCase::Boundary { divisible: true } => "g-f=k-1, divisible",
            DecodeCase::Boundary { divisible: false } => "g-f=k-1, not divisible",
            DecodeCase::Inner { divisible: true } => "g-f<k-1, divisible",
            DecodeCase::Inner { divisible: false } => "g-f<k-1, not divisible",
            DecodeCase::Interleaved => "g-f=tau",
            DecodeCase::Spread { divisible: true } => "g-f!=tau, divisible",
            DecodeCase::Spread { divisible: false } => "g-f!=tau, not divisible",
        }
    }
}

/// Closed-form decode count for information columns `f < g`: the common-bit
/// sum `2R - 1` plus the case term, with `R = tau (p - 1)`.
pub fn decode_formula(params: &CodeParams, f: usize, g: usize) -> u64 {
    let (k, tau, r, p) = (
        params.k() as u64,
        params.tau() as u64,
        params.rows() as u64,
        params.p() as u64,
    );
    let d = (g - f) as u64;
    let case = match DecodeCase::of(params, f, g) {
        DecodeCase::Boundary { divisible: true } => (k - 1) + 2 * r,
        DecodeCase::Boundary { divisible: false } => (k - 1) * (1 + 2 * r),
        DecodeCase::Inner { divisible: true } => d * (k - 1) + 2 * r,
        DecodeCase::Inner { divisible: false } => d * (k - 2 + 2 * r),
        DecodeCase::Interleaved => tau * (1 + 2 * (p - 1)),
        DecodeCase::Spread { divisible: true } => d * (tau - 1) + 2 * r,
        DecodeCase::Spread { divisible: false } => d * (tau - 1 + 2 * r),
    };
    2 * r - 1 + case
}

/// Instrumented decode count for information columns `f < g`.
pub fn count_decode_xors(params: &CodeParams, f: usize, g: usize) -> Result<u64> {
    let array = CodeArray::new(*params, 1)?;
    let (_, _, stats) = decode_two_info_counted(&array, f, g)?;
    Ok(stats.recovery_xors())
}

/// Normalized decode cell as printed in the comparison table, for the case of
/// `(f, g)`.
pub fn table_decode_cell(params: &CodeParams, f: usize, g: usize) -> Rational {
    let (k, tau, p) = (params.k() as i64, params.tau() as i64, params.p() as i64);
    let d = (g - f) as i64;
    let kr = k * tau * (p - 1);
    match DecodeCase::of(params, f, g) {
        DecodeCase::Boundary { divisible: true } => Ratio::new(4, k) + Ratio::new(k - 2, kr),
        DecodeCase::Boundary { divisible: false } => Ratio::from_integer(2) + Ratio::new(k - 2, kr),
        DecodeCase::Inner { divisible: true } => Ratio::new(4, k) + Ratio::new(d * (k - 2), kr),
        DecodeCase::Inner { divisible: false } => {
            Ratio::new(2 * (d + 1), k) + Ratio::new(d * (k - 2), kr)
        }
        DecodeCase::Interleaved => Ratio::new(2, k) + Ratio::new(2 * p * tau - tau - 1, kr),
        DecodeCase::Spread { divisible: true } => {
            Ratio::new(4, k) + Ratio::new(d * (tau - 1) - 1, kr)
        }
        DecodeCase::Spread { divisible: false } => {
            Ratio::new(2 * (d + 1), k) + Ratio::new(d * (tau - 1), kr)
        }
    }
}

/// Normalized encode cell as printed in the comparison table.
pub fn table_encode_cell(params: &CodeParams) -> Rational {
    let (k, tau, p) = (params.k() as i64, params.tau() as i64, params.p() as i64);
    match params.regime() {
        Regime::TauGE => {
            Ratio::from_integer(2) - Ratio::new(k, 2)
                + Ratio::new(2 * ((k - 1) / 2 - 1) * (k - 1), k * (p - 1) * tau)
        }
        Regime::TauLT => Ratio::from_integer(2) - Ratio::new(2 * p - 2 * (k / 2) - 1, k * (p - 1)),
    }
}

/// Average number of parity cells patched by [`update_cell`] over every
/// information position.
pub fn measure_update_complexity(params: &CodeParams) -> Rational {
    let mut array = CodeArray::new(*params, 1).expect("width 1");
    let mut touched = 0i64;
    for i in 0..params.rows() {
        for j in 0..params.k() {
            touched += update_cell(&mut array, i, j, &[1]).expect("information cell").len() as i64;
        }
    }
    Ratio::new(touched, info_bits(params))
}

/// `(2kR - sum_j min(j, tau) + real common-bit participants * n_c / t) / (kR)`.
pub fn exact_update_complexity(params: &CodeParams) -> Rational {
    let (k, tau, t) = (params.k(), params.tau(), params.t());
    let kr = info_bits(params);
    let lost: usize = (0..k).map(|j| j.min(tau)).sum();
    let real = (0..t)
        .map(|mu| (1..k).filter(|&j| mu < j).count())
        .sum::<usize>();
    let per = params.n_c() / t;
    Ratio::new(2 * kr - lost as i64 + (real * per) as i64, kr)
}

/// Closed-form update complexity of the regime.
pub fn update_formula(params: &CodeParams) -> Rational {
    let k = params.k() as i64;
    let kr = info_bits(params);
    let lead = 2 * half(params) as i64 - 1;
    Ratio::from_integer(2) + Ratio::new(lead * (k - 1), kr)
}

/// Lower bound `2 + (1/p)(1 - 1/k)` on the update complexity of a
/// `(p-1) x (k+2)` MDS array code.
pub fn update_lower_bound(p: usize, k: usize) -> Rational {
    let (p, k) = (p as i64, k as i64);
    Ratio::from_integer(2) + Ratio::new(k - 1, p * k)
}

/// EVENODD+ reference values at `(p, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvenoddPlusReference {
    pub encode: Rational,
    pub decode: Rational,
    pub update: Rational,
}

impl EvenoddPlusReference {
    pub fn at(p: usize, k: usize) -> Self {
        let (p, k) = (p as i64, k as i64);
        let kp = k * (p - 1);
        let lead = 2 * (k / 2) - 1;
        Self {
            encode: Ratio::from_integer(2) - Ratio::new(2 * p - k, kp),
            decode: Ratio::from_integer(2) + Ratio::new(lead, kp),
            update: Ratio::from_integer(2) + Ratio::new(lead * (k - 1), kp),
        }
    }
}

/// Measured and closed-form decode count for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeEntry {
    pub case: DecodeCase,
    /// `None` when the pair cannot be decoded.
    pub measured: Option<u64>,
    pub formula: u64,
    pub table_cell: Rational,
}

impl DecodeEntry {
    /// `measured - formula`.
    pub fn excess(&self) -> Option<i64> {
        self.measured.map(|m| m as i64 - self.formula as i64)
    }
}

/// Complexity figures for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub params: CodeParams,
    pub encode_xors: u64,
    pub encode_formula: u64,
    pub encode_table_cell: Rational,
    pub decode: BTreeMap<(usize, usize), DecodeEntry>,
    pub update_measured: Rational,
    pub update_exact: Rational,
    pub update_formula: Rational,
    pub evenodd_plus: EvenoddPlusReference,
    /// Bound with `p` read as the code's `p`.
    pub update_bound_p: Rational,
    /// Bound with `p - 1` read as the column height `tau (p - 1)`.
    pub update_bound_height: Rational,
    /// Classic EVENODD at `(p, k)`, when `p` is prime: measured and closed
    /// form.
    pub evenodd_update: Option<(Rational, Rational)>,
}

impl ComplexityReport {
    pub fn new(params: &CodeParams) -> Self {
        let (p, k) = (params.p(), params.k());
        let mut decode = BTreeMap::new();
        for f in 0..k {
            for g in f + 1..k {
                decode.insert(
                    (f, g),
                    DecodeEntry {
                        case: DecodeCase::of(params, f, g),
                        measured: count_decode_xors(params, f, g).ok(),
                        formula: decode_formula(params, f, g),
                        table_cell: table_decode_cell(params, f, g),
                    },
                );
            }
        }
        let evenodd_update = EvenoddParams::new(p as i64, k as i64).ok().map(|e| {
            let m = evenodd_update_complexity(&e);
            (
                Ratio::new(*m.numer() as i64, *m.denom() as i64),
                evenodd_update_formula(p, k),
            )
        });
        Self {
            params: *params,
            encode_xors: count_encode_xors(params),
            encode_formula: encode_formula(params),
            encode_table_cell: table_encode_cell(params),
            decode,
            update_measured: measure_update_complexity(params),
            update_exact: exact_update_complexity(params),
            update_formula: update_formula(params),
            evenodd_plus: EvenoddPlusReference::at(p, k),
            update_bound_p: update_lower_bound(p, k),
            update_bound_height: update_lower_bound(params.rows() + 1, k),
            evenodd_update,
        }
    }

    /// `count / (k tau (p - 1))`.
    pub fn normalize(&self, count: u64) -> Rational {
        Ratio::new(count as i64, info_bits(&self.params))
    }

    /// Pairs whose measured count exceeds the closed form, with the excess.
    pub fn decode_deviations(&self) -> Vec<((usize, usize), i64)> {
        self.decode
            .iter()
            .filter_map(|(&pair, e)| e.excess().filter(|&x| x > 0).map(|x| (pair, x)))
            .collect()
    }

    /// Pairs whose measured count exceeds the closed form by more than `t`.
    pub fn decode_violations(&self) -> Vec<((usize, usize), i64)> {
        let t = self.params.t() as i64;
        self.decode_deviations()
            .into_iter()
            .filter(|&(_, x)| x > t)
            .collect()
    }

    /// Pairs the decoder could not recover.
    pub fn undecodable(&self) -> Vec<(usize, usize)> {
        self.decode
            .iter()
            .filter(|(_, e)| e.measured.is_none())
            .map(|(&pair, _)| pair)
            .collect()
    }

    /// True when the printed decode cell equals the closed form divided by
    /// the information bit count.
    pub fn table_decode_consistent(&self, pair: (usize, usize)) -> bool {
        let e = &self.decode[&pair];
        e.table_cell == self.normalize(e.formula)
    }

    pub fn table_encode_consistent(&self) -> bool {
        self.encode_table_cell == self.normalize(self.encode_formula)
    }

    /// Rows in the order params, metric, measured, formula,
    /// normalized-measured, normalized-formula.
    pub fn rows(&self) -> Vec<ReportRow> {
        let p = self.params;
        let label = format!("({},{},{})", p.tau(), p.p(), p.k());
        let row = |metric: String,
                   measured: Option<Rational>,
                   formula: Option<Rational>,
                   nm: Option<Rational>,
                   nf: Option<Rational>| ReportRow {
            params: label.clone(),
            metric,
            measured,
            formula,
            normalized_measured: nm,
            normalized_formula: nf,
        };
        let mut out = vec![row(
            "encode".into(),
            Some(q(self.encode_xors)),
            Some(q(self.encode_formula)),
            Some(self.normalize(self.encode_xors)),
            Some(self.normalize(self.encode_formula)),
        )];
        for (&(f, g), e) in &self.decode {
            out.push(row(
                format!("decode({f},{g})"),
                e.measured.map(q),
                Some(q(e.formula)),
                e.measured.map(|m| self.normalize(m)),
                Some(self.normalize(e.formula)),
            ));
        }
        out.push(row(
            "update".into(),
            Some(self.update_measured),
            Some(self.update_formula),
            Some(self.update_measured),
            Some(self.update_formula),
        ));
        out.push(row(
            "update-exact".into(),
            Some(self.update_exact),
            None,
            Some(self.update_exact),
            None,
        ));
        let r = self.evenodd_plus;
        for (name, v) in [
            ("evenodd+ encode", r.encode),
            ("evenodd+ decode", r.decode),
            ("evenodd+ update", r.update),
        ] {
            out.push(row(name.into(), None, Some(v), None, Some(v)));
        }
        if let Some((m, f)) = self.evenodd_update {
            out.push(row("evenodd update".into(), Some(m), Some(f), Some(m), Some(f)));
        }
        out
    }

    /// Footnotes for the text table.
    pub fn notes(&self) -> Vec<String> {
        let p = self.params;
        let label = format!("({},{},{})", p.tau(), p.p(), p.k());
        let mut out = Vec::new();
        if !self.table_encode_consistent() {
            out.push(format!(
                "{label}: printed encode cell {} disagrees with formula/kR {}",
                fmt_dec(self.encode_table_cell),
                fmt_dec(self.normalize(self.encode_formula))
            ));
        }
        for (&pair, e) in &self.decode {
            if !self.table_decode_consistent(pair) {
                out.push(format!(
                    "{label}: printed decode cell for {pair:?} [{}] is {} but formula/kR is {}",
                    e.case.label(),
                    fmt_dec(e.table_cell),
                    fmt_dec(self.normalize(e.formula))
                ));
            }
        }
        for (pair, x) in self.decode_deviations() {
            let over = if x > p.t() as i64 { ", above formula + t" } else { "" };
            out.push(format!("{label}: decode{pair:?} uses {x} XORs more than the formula{over}"));
        }
        for pair in self.undecodable() {
            out.push(format!("{label}: decode{pair:?} is not recoverable"));
        }
        if self.update_measured < self.update_bound_p {
            out.push(format!(
                "{label}: update {} is below 2+(1/p)(1-1/k) = {} with p = {}; with height + 1 = {} the bound is {}",
                fmt_dec(self.update_measured),
                fmt_dec(self.update_bound_p),
                p.p(),
                p.rows() + 1,
                fmt_dec(self.update_bound_height)
            ));
        }
        out
    }
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub params: String,
    pub metric: String,
    pub measured: Option<Rational>,
    pub formula: Option<Rational>,
    pub normalized_measured: Option<Rational>,
    pub normalized_formula: Option<Rational>,
}

/// Reports for every parameter set in `list`.
pub fn complexity_report(list: &[CodeParams]) -> Vec<ComplexityReport> {
    list.iter().map(ComplexityReport::new).collect()
}

/// Four-decimal rendering.
pub fn fmt_dec(r: Rational) -> String {
    format!("{:.4}", *r.numer() as f64 / *r.denom() as f64)
}

fn cell(v: Option<Rational>) -> String {
    match v {
        None => "-".into(),
        Some(r) if r.is_integer() => r.to_integer().to_string(),
        Some(r) => fmt_dec(r),
    }
}

const HEADER: [&str; 6] = [
    "params",
    "metric",
    "measured",
    "formula",
    "normalized_measured",
    "normalized_formula",
];

fn cells(r: &ReportRow) -> [String; 6] {
    [
        r.params.clone(),
        r.metric.clone(),
        cell(r.measured),
        cell(r.formula),
        r.normalized_measured.map_or("-".into(), fmt_dec),
        r.normalized_formula.map_or("-".into(), fmt_dec),
    ]
}

/// CSV with a header row.
pub fn to_csv(reports: &[ComplexityReport]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in reports.iter().flat_map(|r| r.rows()) {
        let c = cells(&r);
        let _ = writeln!(out, "\"{}\",{}", c[0], c[1..].join(","));
    }
    out
}

/// Aligned text table followed by footnotes.
pub fn to_text(reports: &[ComplexityReport]) -> String {
    let body: Vec<[String; 6]> = reports.iter().flat_map(|r| r.rows()).map(|r| cells(&r)).collect();
    let mut width = HEADER.map(str::len);
    for c in &body {
        for (w, s) in width.iter_mut().zip(c) {
            *w = (*w).max(s.len());
        }
    }
    let mut out = String::new();
    let mut line = |c: &[String]| {
        let parts: Vec<String> = c
            .iter()
            .zip(width)
            .enumerate()
            .map(|(i, (s, w))| if i < 2 { format!("{s:<w$}") } else { format!("{s:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&HEADER.map(String::from));
    for c in &body {
        line(c);
    }
    let notes: Vec<String> = reports.iter().flat_map(|r| r.notes()).collect();
    if !notes.is_empty() {
        out.push('\n');
        for (i, n) in notes.iter().enumerate() {
            let _ = writeln!(out, "[{}] {n}", i + 1);
        }
    }
    out
}

/// Parameter sets used by `bench` when no list is given.
pub fn default_bench_set() -> Vec<CodeParams> {
    [
        (2, 5, 3),
        (1, 5, 3),
        (3, 5, 3),
        (1, 7, 4),
        (2, 7, 4),
        (1, 7, 5),
        (1, 9, 3),
        (2, 9, 3),
        (3, 9, 3),
        (1, 11, 7),
    ]
    .into_iter()
    .map(|(t, p, k)| CodeParams::new(t, p, k).expect("valid default set"))
    .collect()
}
