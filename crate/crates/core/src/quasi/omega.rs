//! The domain minimum `Ω_D` of nonzero detunings.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::table::{side_pairs, FreqTable};
use super::Tuple;
use crate::lattice::radical::combine;
use crate::lattice::{
    evaluate_terms, Dispersion, DispersionId, RadicalForm, SpectralDomain, WaveVector,
};
use crate::precision::{approx_to_f64, Approx, Certified, PrecisionConfig};
use crate::solver::SideConvention;
use crate::{Error, Result};

pub const UNCONSTRAINED_LIMIT: i32 = 150;
pub const CONSERVING_LIMIT: i32 = 128;

// Sums of two floored values differ from the true difference by < 4 ulp.
const ZERO_SLACK: i128 = 4;
const TIE_SLACK: i128 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetuningMode {
    /// Any tuple of domain vectors.
    Unconstrained,
    /// Tuples that conserve momentum.
    Conserving,
}

impl DetuningMode {
    pub fn name(self) -> &'static str {
        match self {
            DetuningMode::Unconstrained => "unconstrained",
            DetuningMode::Conserving => "conserving",
        }
    }
}

impl std::fmt::Display for DetuningMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for DetuningMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unconstrained" => Ok(DetuningMode::Unconstrained),
            "conserving" => Ok(DetuningMode::Conserving),
            _ => Err(Error::Usage(format!(
                "unknown detuning mode '{s}' (unconstrained or conserving)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: u64,
}

#[derive(Debug, Clone)]
pub struct DetuningReport {
    pub disp: DispersionId,
    pub domain: SpectralDomain,
    pub mode: DetuningMode,
    pub omega_d: Certified,
    pub attained_by: Tuple,
    /// Decade histogram of the nonzero gaps examined by the scan, below the
    /// configured cap.
    pub histogram: Vec<Bin>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    disp: DispersionId,
    #[serde(rename = "D")]
    d: i32,
    domain_mode: &'static str,
    mode: &'static str,
    omega_d: String,
    error_bound: f64,
    bits: u32,
    attained_by: &'a Tuple,
    histogram: &'a [Bin],
}

impl DetuningReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ReportJson {
            disp: self.disp,
            d: self.domain.half_width(),
            domain_mode: self.domain.mode_name(),
            mode: self.mode.name(),
            omega_d: self.omega_d.to_decimal(30),
            error_bound: self.omega_d.error_bound(),
            bits: self.omega_d.bits(),
            attained_by: &self.attained_by,
            histogram: &self.histogram,
        })
        .expect("report serializes")
    }
}

#[derive(Debug, Clone)]
pub struct OmegaOptions {
    pub precision: PrecisionConfig,
    pub histogram_cap: f64,
    pub conv: SideConvention,
}

impl Default for OmegaOptions {
    fn default() -> Self {
        OmegaOptions {
            precision: PrecisionConfig::default(),
            histogram_cap: 1.0,
            conv: SideConvention::Distinct,
        }
    }
}

/// `Ω_D`: the smallest nonzero `|Δ|` over the tuple space of `mode`, for
/// the default sign pattern of `d`.
///
/// Unconstrained: tuple sums are streamed in sorted order (a heap merge of
/// the rows `ωᵢ + ωⱼ`, `j ≥ i`) and consecutive gaps are scanned. Conserving:
/// the same scan runs inside each bucket of pairs with a fixed vector sum.
pub fn omega_d(
    dom: &SpectralDomain,
    d: &Dispersion,
    mode: DetuningMode,
    opts: &OmegaOptions,
) -> Result<DetuningReport> {
    if !d.has_default_signs() {
        return Err(Error::Unsupported(
            "omega_d uses the default sign pattern".into(),
        ));
    }
    let limit = match mode {
        DetuningMode::Unconstrained => UNCONSTRAINED_LIMIT,
        DetuningMode::Conserving => CONSERVING_LIMIT,
    };
    if dom.half_width() > limit {
        return Err(Error::Resource(format!(
            "{} omega_d is limited to D <= {limit} (requested D = {})",
            mode.name(),
            dom.half_width()
        )));
    }
    let t = FreqTable::new(d, dom)?;
    let scan = match (mode, d.order()) {
        (DetuningMode::Unconstrained, 4) => unconstrained4(&t),
        (DetuningMode::Unconstrained, _) => unconstrained3(&t),
        (DetuningMode::Conserving, 4) => conserving4(&t, opts.conv),
        (DetuningMode::Conserving, _) => conserving3(&t, opts.conv),
    }?;
    let (omega, tuple) = scan.best.resolve(&t, &opts.precision)?;
    Ok(DetuningReport {
        disp: d.id,
        domain: *dom,
        mode,
        omega_d: omega,
        attained_by: tuple,
        histogram: scan.hist.bins(opts.histogram_cap),
    })
}

#[derive(Default)]
struct Hist(BTreeMap<i32, u64>);

impl Hist {
    fn add(&mut self, gap: Approx) {
        let x = approx_to_f64(gap);
        if x > 0.0 {
            *self.0.entry(x.log10().floor() as i32).or_default() += 1;
        }
    }

    fn merge(mut self, other: Hist) -> Hist {
        for (k, v) in other.0 {
            *self.0.entry(k).or_default() += v;
        }
        self
    }

    fn bins(&self, cap: f64) -> Vec<Bin> {
        self.0
            .iter()
            .map(|(&e, &count)| Bin {
                lo: 10f64.powi(e),
                hi: 10f64.powi(e + 1),
                count,
            })
            .filter(|b| b.lo < cap)
            .collect()
    }
}

#[derive(Clone)]
struct Cand {
    gap: Approx,
    tuple: Tuple,
}

/// Running set of the tuples whose approximate gap is within slack of the
/// smallest seen so far.
#[derive(Default)]
struct Best {
    min: Option<Approx>,
    cands: Vec<Cand>,
}

impl Best {
    fn offer(&mut self, gap: Approx, tuple: impl FnOnce() -> Tuple) {
        match self.min {
            Some(m) if gap > m + TIE_SLACK => {}
            _ => {
                self.cands.push(Cand {
                    gap,
                    tuple: tuple(),
                });
                if self.min.is_none_or(|m| gap < m) {
                    self.min = Some(gap);
                    self.cands.retain(|c| c.gap <= gap + TIE_SLACK);
                }
            }
        }
    }

    fn merge(mut self, other: Best) -> Best {
        for c in other.cands {
            let Cand { gap, tuple } = c;
            self.offer(gap, || tuple);
        }
        self
    }

    fn resolve(self, t: &FreqTable, prec: &PrecisionConfig) -> Result<(Certified, Tuple)> {
        let mut scored: Vec<(Certified, Tuple)> = Vec::new();
        for c in self.cands {
            let det = evaluate_terms(&c.tuple.terms(t), prec)?;
            if !det.is_exact_zero {
                scored.push((det.magnitude, c.tuple));
            }
        }
        let Some(first) = scored.first().cloned() else {
            return Err(Error::Validation(
                "no tuple with nonzero detuning in this domain".into(),
            ));
        };
        let mut best = first;
        for (mag, tup) in scored.into_iter().skip(1) {
            match mag.enclosure.certain_cmp(&best.0.enclosure) {
                Some(std::cmp::Ordering::Less) => best = (mag, tup),
                Some(_) => {}
                None => {
                    // equal magnitudes are decided exactly; keep the smaller tuple
                    if same_magnitude(t, &tup, &best.1)? {
                        if tup < best.1 {
                            best = (mag, tup);
                        }
                    } else if mag.to_f64() < best.0.to_f64() {
                        best = (mag, tup);
                    }
                }
            }
        }
        Ok(best)
    }
}

fn same_magnitude(t: &FreqTable, a: &Tuple, b: &Tuple) -> Result<bool> {
    let ta = a.terms(t);
    let tb = b.terms(t);
    let diff: Vec<(i64, RadicalForm)> = ta
        .iter()
        .cloned()
        .chain(tb.iter().map(|&(w, f)| (-w, f)))
        .collect();
    let sum: Vec<(i64, RadicalForm)> = ta.iter().cloned().chain(tb.iter().cloned()).collect();
    Ok(combine(&diff)?.is_empty() || combine(&sum)?.is_empty())
}

fn exact_zero(t: &FreqTable, tuple: &Tuple) -> Result<bool> {
    Ok(combine(&tuple.terms(t))?.is_empty())
}

struct Scan {
    best: Best,
    hist: Hist,
}

impl Scan {
    fn new() -> Scan {
        Scan {
            best: Best::default(),
            hist: Hist::default(),
        }
    }

    fn merge(self, other: Scan) -> Scan {
        Scan {
            best: self.best.merge(other.best),
            hist: self.hist.merge(other.hist),
        }
    }

    /// Records the gap between two tuple sums; `make` builds the tuple
    /// `lhs ⇒ rhs` whose detuning is that gap.
    fn gap(&mut self, t: &FreqTable, gap: Approx, make: impl Fn() -> Tuple) -> Result<()> {
        if gap <= ZERO_SLACK && exact_zero(t, &make())? {
            return Ok(());
        }
        self.hist.add(gap);
        self.best.offer(gap, make);
        Ok(())
    }
}

/// Distinct frequency values, ascending, each with a representative vector.
fn distinct_values(t: &FreqTable) -> Vec<(Approx, RadicalForm, WaveVector)> {
    let mut v: Vec<(Approx, RadicalForm, WaveVector)> =
        t.vectors().map(|(k, s)| (s.approx, s.form, k)).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0).then(a.2.cmp(&b.2)));
    let mut out: Vec<(Approx, RadicalForm, WaveVector)> = Vec::new();
    for x in v {
        // equal values have identical canonical forms and near-identical approximations
        if out
            .iter()
            .rev()
            .take_while(|y| x.0 - y.0 <= ZERO_SLACK)
            .any(|y| y.1 == x.1)
        {
            continue;
        }
        out.push(x);
    }
    out
}

fn unconstrained4(t: &FreqTable) -> Result<Scan> {
    let vals = distinct_values(t);
    let mut scan = Scan::new();
    let mut heap: BinaryHeap<Reverse<(Approx, u32, u32)>> = (0..vals.len())
        .map(|i| Reverse((2 * vals[i].0, i as u32, i as u32)))
        .collect();
    let mut prev: Option<(Approx, u32, u32)> = None;
    while let Some(Reverse((s, i, j))) = heap.pop() {
        if (j as usize) + 1 < vals.len() {
            heap.push(Reverse((
                vals[i as usize].0 + vals[j as usize + 1].0,
                i,
                j + 1,
            )));
        }
        if let Some((ps, pi, pj)) = prev {
            let pair = |i: u32, j: u32| vec![vals[i as usize].2, vals[j as usize].2];
            scan.gap(t, s - ps, || Tuple::new(pair(i, j), pair(pi, pj)))?;
        }
        prev = Some((s, i, j));
    }
    Ok(scan)
}

fn unconstrained3(t: &FreqTable) -> Result<Scan> {
    let vals = distinct_values(t);
    let n = vals.len();
    // row i holds ωᵢ + ωⱼ for j ≥ i; singles sweep it with one pointer
    let per_row: Vec<Result<Scan>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut scan = Scan::new();
            let row = |j: usize| vals[i].0 + vals[j].0;
            let tuple =
                |j: usize, k: usize| Tuple::new(vec![vals[i].2, vals[j].2], vec![vals[k].2]);
            let mut j = i;
            for (k, single) in vals.iter().enumerate() {
                let r = single.0;
                while j < n && row(j) < r {
                    j += 1;
                }
                for jj in j..n {
                    let gap = row(jj) - r;
                    scan.gap(t, gap, || tuple(jj, k))?;
                    if gap > ZERO_SLACK {
                        break;
                    }
                }
                for jj in (i..j).rev() {
                    let gap = r - row(jj);
                    scan.gap(t, gap, || tuple(jj, k))?;
                    if gap > ZERO_SLACK {
                        break;
                    }
                }
            }
            Ok(scan)
        })
        .collect();
    merge_scans(per_row)
}

fn sum_rows(t: &FreqTable, reach: i64) -> Vec<i64> {
    (-reach * t.h..=reach * t.h).collect()
}

fn conserving4(t: &FreqTable, conv: SideConvention) -> Result<Scan> {
    let distinct = conv == SideConvention::Distinct;
    let rows = sum_rows(t, 2);
    let per_row: Vec<Result<Scan>> = rows
        .par_iter()
        .map(|&sm| {
            let mut scan = Scan::new();
            for sn in -2 * t.h..=2 * t.h {
                let mut pairs = side_pairs(t, (sm, sn), 1, 1, distinct);
                pairs.sort_by_key(|p| p.approx);
                for w in pairs.windows(2) {
                    let (x, y) = (w[0], w[1]);
                    scan.gap(t, y.approx - x.approx, || {
                        Tuple::new(vec![y.a, y.b], vec![x.a, x.b])
                    })?;
                }
            }
            Ok(scan)
        })
        .collect();
    merge_scans(per_row)
}

fn conserving3(t: &FreqTable, conv: SideConvention) -> Result<Scan> {
    let distinct = conv == SideConvention::Distinct;
    let rows: Vec<WaveVector> = t.vectors().map(|(k, _)| k).collect();
    let per_row: Vec<Result<Scan>> = rows
        .par_iter()
        .map(|&k3| {
            let mut scan = Scan::new();
            let w3 = t.slot(k3).unwrap().approx;
            for p in side_pairs(t, (k3.m as i64, k3.n as i64), 1, 1, distinct) {
                let gap = (p.approx - w3).abs();
                scan.gap(t, gap, || Tuple::new(vec![p.a, p.b], vec![k3]))?;
            }
            Ok(scan)
        })
        .collect();
    merge_scans(per_row)
}

fn merge_scans(parts: Vec<Result<Scan>>) -> Result<Scan> {
    let mut acc = Scan::new();
    for p in parts {
        acc = acc.merge(p?);
    }
    Ok(acc)
}
