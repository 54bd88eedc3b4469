//! Exhaustive search over the domain, used to cross-check the fast solvers.

use rayon::prelude::*;

use super::types::{Quartet, ResonanceSet, SideConvention, Triad};
use crate::arith::Sieve;
use crate::lattice::radical::combine;
use crate::lattice::{Conservation, Dispersion, RadicalForm, SpectralDomain, WaveVector};
use crate::{Error, Result};

/// Largest half-width the oracle accepts.
pub const ORACLE_LIMIT: i32 = 16;

const PREFILTER: f64 = 1e-9;

/// Direct `O(|V|³)` search for four-wave sets and `O(|V|²)` (or `O(|V|²·D)`
/// under partial conservation) for three-wave sets.
///
/// Every candidate passing a floating-point prefilter is decided by the exact
/// kernel test. A four-wave solution that is neither Form I nor Form II is
/// reported as a validation error.
pub fn brute_force_oracle(
    d: &Dispersion,
    dom: &SpectralDomain,
    multipliers: Option<&[i64]>,
    conv: SideConvention,
) -> Result<ResonanceSet> {
    if dom.half_width() > ORACLE_LIMIT {
        return Err(Error::Usage(format!(
            "brute-force oracle is limited to D <= {ORACLE_LIMIT} (requested D = {}); the search is cubic in the domain size",
            dom.half_width()
        )));
    }
    if !d.has_default_signs() {
        return Err(Error::Unsupported(
            "oracle handles the default sign pattern only".into(),
        ));
    }
    let p: Vec<i64> = multipliers.map_or(vec![1; d.order()], |p| p.to_vec());
    if p.len() != d.order() || p.iter().any(|&x| x <= 0) {
        return Err(Error::Validation(format!(
            "expected {} positive multipliers",
            d.order()
        )));
    }
    let table = Table::new(d, dom)?;
    let set = if d.order() == 4 {
        if d.conservation != Conservation::Both {
            return Err(Error::Unsupported(
                "four-wave oracle requires full momentum conservation".into(),
            ));
        }
        ResonanceSet::from_quartets(d.id, *dom, quartets(&table, &p, conv)?)
    } else {
        ResonanceSet::from_triads(d.id, *dom, triads(&table, d, &p, conv)?)
    };
    Ok(set.with_multipliers(multipliers.map(|p| p.to_vec())))
}

struct Table {
    dom: SpectralDomain,
    vectors: Vec<WaveVector>,
    forms: Vec<RadicalForm>,
    approx: Vec<f64>,
    // dense grid lookup: position of (m, n) in `vectors`, or usize::MAX
    grid: Vec<usize>,
    w: i64,
}

impl Table {
    fn new(d: &Dispersion, dom: &SpectralDomain) -> Result<Table> {
        let vectors: Vec<WaveVector> = dom.iter().filter(|&k| d.admits(k)).collect();
        let h = dom.half_width() as i64;
        let sieve = Sieve::new((2 * h * h) as u64 + 1);
        let forms = vectors
            .iter()
            .map(|&k| d.frequency_with(&sieve, k))
            .collect::<Result<Vec<_>>>()?;
        let approx = vectors.iter().map(|&k| direct_f64(d, k)).collect();
        let w = 2 * h + 1;
        let mut grid = vec![usize::MAX; (w * w) as usize];
        for (i, k) in vectors.iter().enumerate() {
            grid[((k.m as i64 + h) * w + k.n as i64 + h) as usize] = i;
        }
        Ok(Table {
            dom: *dom,
            vectors,
            forms,
            approx,
            grid,
            w,
        })
    }

    fn find(&self, m: i64, n: i64) -> Option<usize> {
        let h = self.dom.half_width() as i64;
        if m.abs() > h || n.abs() > h {
            return None;
        }
        let i = self.grid[((m + h) * self.w + n + h) as usize];
        (i != usize::MAX).then_some(i)
    }
}

fn direct_f64(d: &Dispersion, k: WaveVector) -> f64 {
    use crate::lattice::DispersionId::*;
    let n2 = k.norm2() as f64;
    match d.id {
        Gravity4 => n2.powf(0.25),
        Planetary3 => 1.0 / n2.sqrt(),
        Capillary3 => n2.powf(0.75),
        Rossby3 => k.m as f64 / (k.n as f64 * (k.n as f64 + 1.0)),
    }
}

fn exact_zero(terms: &[(i64, RadicalForm)]) -> Result<bool> {
    Ok(combine(terms)?.is_empty())
}

fn quartets(t: &Table, p: &[i64], conv: SideConvention) -> Result<Vec<Quartet>> {
    let nv = t.vectors.len();
    let found: Vec<Result<Vec<Quartet>>> = (0..nv)
        .into_par_iter()
        .map(|i1| {
            let mut out = Vec::new();
            let k1 = t.vectors[i1];
            for i2 in 0..nv {
                let k2 = t.vectors[i2];
                for i3 in 0..nv {
                    let k3 = t.vectors[i3];
                    let sm = p[0] * k1.m as i64 + p[1] * k2.m as i64 - p[2] * k3.m as i64;
                    let sn = p[0] * k1.n as i64 + p[1] * k2.n as i64 - p[2] * k3.n as i64;
                    if sm % p[3] != 0 || sn % p[3] != 0 {
                        continue;
                    }
                    let Some(i4) = t.find(sm / p[3], sn / p[3]) else {
                        continue;
                    };
                    let k4 = t.vectors[i4];
                    let approx = p[0] as f64 * t.approx[i1] + p[1] as f64 * t.approx[i2]
                        - p[2] as f64 * t.approx[i3]
                        - p[3] as f64 * t.approx[i4];
                    if approx.abs() > PREFILTER {
                        continue;
                    }
                    let mut a = [(k1, p[0]), (k2, p[1])];
                    let mut b = [(k3, p[2]), (k4, p[3])];
                    a.sort();
                    b.sort();
                    if a == b {
                        continue;
                    }
                    let forms = [t.forms[i1], t.forms[i2], t.forms[i3], t.forms[i4]];
                    let terms: Vec<(i64, RadicalForm)> = (0..4)
                        .map(|j| (if j < 2 { p[j] } else { -p[j] }, forms[j]))
                        .collect();
                    if !exact_zero(&terms)? {
                        continue;
                    }
                    let q = Quartet::from_parts([k1, k2], [k3, k4], forms, Some(p))?;
                    // each solution is met in several orientations; keep the canonical one
                    if q.members() == [k1, k2, k3, k4] && conv.admits_quartet(&q) {
                        out.push(q);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for f in found {
        all.extend(f?);
    }
    Ok(all)
}

fn triads(t: &Table, d: &Dispersion, p: &[i64], conv: SideConvention) -> Result<Vec<Triad>> {
    let nv = t.vectors.len();
    let found: Vec<Result<Vec<Triad>>> = (0..nv)
        .into_par_iter()
        .map(|i1| {
            let mut out = Vec::new();
            let k1 = t.vectors[i1];
            for i2 in 0..nv {
                let k2 = t.vectors[i2];
                let lhs = (
                    p[0] * k1.m as i64 + p[1] * k2.m as i64,
                    p[0] * k1.n as i64 + p[1] * k2.n as i64,
                );
                let candidates: Vec<usize> = match d.conservation {
                    Conservation::Both => {
                        if lhs.0 % p[2] != 0 || lhs.1 % p[2] != 0 {
                            continue;
                        }
                        t.find(lhs.0 / p[2], lhs.1 / p[2]).into_iter().collect()
                    }
                    _ => (0..nv)
                        .filter(|&i3| d.conservation.holds(lhs, t.vectors[i3].scaled(p[2])))
                        .collect(),
                };
                for i3 in candidates {
                    let k3 = t.vectors[i3];
                    let approx = p[0] as f64 * t.approx[i1] + p[1] as f64 * t.approx[i2]
                        - p[2] as f64 * t.approx[i3];
                    if approx.abs() > PREFILTER * (1.0 + t.approx[i3].abs()) {
                        continue;
                    }
                    let terms = [
                        (p[0], t.forms[i1]),
                        (p[1], t.forms[i2]),
                        (-p[2], t.forms[i3]),
                    ];
                    if !exact_zero(&terms)? {
                        continue;
                    }
                    let tr = Triad::with_multipliers(k1, k2, k3, p);
                    if tr.k1 == k1 && tr.k2 == k2 && conv.admits_triad(&tr) {
                        out.push(tr);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for f in found {
        all.extend(f?);
    }
    Ok(all)
}
