//! Quasi-resonances `0 < |Δ| < Ω` and the `N(δ)` profile.

use rayon::prelude::*;
use serde::Serialize;

use super::omega::{omega_d, DetuningMode, OmegaOptions};
use super::table::{side_pairs, FreqTable, PairSum};
use super::Tuple;
use crate::lattice::radical::combine;
use crate::lattice::{
    evaluate_terms, Conservation, Dispersion, DispersionId, SpectralDomain, WaveVector,
};
use crate::precision::{Approx, Certified, Interval, PrecisionConfig, APPROX_BITS};
use crate::solver::{
    count_angle, solve_gravity_scale, solve_three_wave, AngleOptions, Kind, SideConvention,
};
use crate::{Error, Result};

pub const QUASI_LIMIT: i32 = 128;

/// A momentum-conserving tuple with a small, algebraically nonzero detuning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiSolution {
    pub tuple: Tuple,
    /// Certified `|Δ|`.
    pub detuning: Certified,
    /// All member frequencies are integers.
    pub exempt: bool,
    /// Scale or angle by the norm rule (four-wave tuples only).
    pub kind: Option<Kind>,
}

#[derive(Serialize)]
struct QuasiQuartetJson<'a> {
    disp: DispersionId,
    side_a: &'a [WaveVector],
    side_b: &'a [WaveVector],
    kind: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multipliers: &'a Option<Vec<i64>>,
    detuning: String,
    exempt: bool,
}

#[derive(Serialize)]
struct QuasiTriadJson<'a> {
    disp: DispersionId,
    k1: WaveVector,
    k2: WaveVector,
    k3: WaveVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    multipliers: &'a Option<Vec<i64>>,
    detuning: String,
    exempt: bool,
}

impl QuasiSolution {
    pub fn to_json(&self, disp: DispersionId) -> String {
        let t = &self.tuple;
        let det = self.detuning.to_decimal(30);
        if t.lhs.len() == 2 && t.rhs.len() == 1 {
            let rec = QuasiTriadJson {
                disp,
                k1: t.lhs[0],
                k2: t.lhs[1],
                k3: t.rhs[0],
                multipliers: &t.multipliers,
                detuning: det,
                exempt: self.exempt,
            };
            serde_json::to_string(&rec).expect("record serializes")
        } else {
            let rec = QuasiQuartetJson {
                disp,
                side_a: &t.lhs,
                side_b: &t.rhs,
                kind: self.kind,
                multipliers: &t.multipliers,
                detuning: det,
                exempt: self.exempt,
            };
            serde_json::to_string(&rec).expect("record serializes")
        }
    }
}

fn width_approx(width: f64) -> Result<Approx> {
    if width.is_nan() || width <= 0.0 || width > 1e6 {
        return Err(Error::Validation(format!(
            "resonance width must lie in (0, 1e6], got {width}"
        )));
    }
    Ok((width * 2f64.powi(APPROX_BITS as i32)).ceil() as Approx)
}

/// All canonical momentum-conserving tuples with `0 < |Δ| < width`.
///
/// Side pairs are bucketed by their weighted vector sum. Inside a bucket
/// both sides are sorted by frequency sum and a sliding window proposes
/// candidates, which are then decided by the exact zero test and a
/// certified comparison with `width`.
pub fn find_quasi(
    dom: &SpectralDomain,
    d: &Dispersion,
    width: f64,
    multipliers: Option<&[i64]>,
    conv: SideConvention,
    prec: &PrecisionConfig,
) -> Result<Vec<QuasiSolution>> {
    if dom.half_width() > QUASI_LIMIT {
        return Err(Error::Resource(format!(
            "quasi-resonance search is limited to D <= {QUASI_LIMIT} (requested D = {})",
            dom.half_width()
        )));
    }
    if !d.has_default_signs() || d.conservation != Conservation::Both {
        return Err(Error::Unsupported(
            "quasi search needs the default sign pattern and full conservation".into(),
        ));
    }
    let s = d.order();
    let p: Vec<i64> = multipliers.map_or(vec![1; s], |p| p.to_vec());
    if p.len() != s || p.iter().any(|&x| x <= 0) {
        return Err(Error::Validation(format!(
            "expected {s} positive multipliers"
        )));
    }
    let w = width_approx(width)?;
    let slack = 2 * p.iter().sum::<i64>() as i128;
    let t = FreqTable::new(d, dom)?;
    let bound = Interval::from_f64(width, prec.bits);
    let distinct = conv == SideConvention::Distinct;
    let mults = multipliers.map(|p| p.to_vec());

    let reach = p[0] + p[1];
    let rows: Vec<i64> = (-reach * t.h..=reach * t.h).collect();
    let found: Vec<Result<Vec<QuasiSolution>>> = rows
        .par_iter()
        .map(|&sm| {
            let mut out = Vec::new();
            let mut keep = |lhs: Vec<WaveVector>, rhs: Vec<WaveVector>| -> Result<()> {
                let tuple = Tuple::with_multipliers(lhs, rhs, mults.clone());
                if let Some(q) = certify(&t, tuple, &bound, prec)? {
                    out.push(q);
                }
                Ok(())
            };
            for sn in -reach * t.h..=reach * t.h {
                let mut left = side_pairs(&t, (sm, sn), p[0], p[1], distinct);
                left.sort_by_key(|x| x.approx);
                if s == 3 {
                    if sm % p[2] != 0 || sn % p[2] != 0 {
                        continue;
                    }
                    let Some(k3) = t.get(sm / p[2], sn / p[2]) else {
                        continue;
                    };
                    let k3v = WaveVector::new((sm / p[2]) as i32, (sn / p[2]) as i32);
                    let r = p[2] as i128 * k3.approx;
                    for l in &left {
                        if (l.approx - r).abs() < w + slack {
                            keep(vec![l.a, l.b], vec![k3v])?;
                        }
                    }
                } else if p[0] == p[2] && p[1] == p[3] {
                    for (i, x) in left.iter().enumerate() {
                        for y in left[i + 1..]
                            .iter()
                            .take_while(|y| y.approx - x.approx < w + slack)
                        {
                            keep(vec![x.a, x.b], vec![y.a, y.b])?;
                        }
                    }
                } else {
                    let mut right = side_pairs(&t, (sm, sn), p[2], p[3], distinct);
                    right.sort_by_key(|x| x.approx);
                    window(&left, &right, w + slack, |x, y| {
                        keep(vec![x.a, x.b], vec![y.a, y.b])
                    })?;
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for f in found {
        all.extend(f?);
    }
    all.sort_by(|a, b| a.tuple.cmp(&b.tuple));
    all.dedup_by(|a, b| a.tuple == b.tuple);
    Ok(all)
}

fn window(
    left: &[PairSum],
    right: &[PairSum],
    w: Approx,
    mut f: impl FnMut(&PairSum, &PairSum) -> Result<()>,
) -> Result<()> {
    let mut start = 0;
    for x in left {
        while start < right.len() && right[start].approx <= x.approx - w {
            start += 1;
        }
        for y in right[start..]
            .iter()
            .take_while(|y| y.approx < x.approx + w)
        {
            f(x, y)?;
        }
    }
    Ok(())
}

fn certify(
    t: &FreqTable,
    tuple: Tuple,
    bound: &Interval,
    prec: &PrecisionConfig,
) -> Result<Option<QuasiSolution>> {
    let terms = tuple.terms(t);
    if combine(&terms)?.is_empty() {
        return Ok(None);
    }
    let det = evaluate_terms(&terms, prec)?;
    match det.magnitude.enclosure.certain_cmp(bound) {
        Some(std::cmp::Ordering::Less) => {}
        Some(_) => return Ok(None),
        None => {
            return Err(Error::Precision(format!(
                "cannot decide |Δ| < width for {tuple}"
            )));
        }
    }
    let exempt = terms.iter().all(|(_, f)| f.is_rational() && f.kernel == 1);
    let kind = (tuple.lhs.len() == 2 && tuple.rhs.len() == 2).then(|| {
        let mut a = [tuple.lhs[0].norm2(), tuple.lhs[1].norm2()];
        let mut b = [tuple.rhs[0].norm2(), tuple.rhs[1].norm2()];
        a.sort();
        b.sort();
        if a == b {
            Kind::Angle
        } else {
            Kind::Scale
        }
    });
    Ok(Some(QuasiSolution {
        tuple,
        detuning: det.magnitude,
        exempt,
        kind,
    }))
}

/// Number of exact resonances of `d` in `dom`.
pub fn exact_count(dom: &SpectralDomain, d: &Dispersion, conv: SideConvention) -> Result<u64> {
    if d.id == DispersionId::Gravity4 {
        let scale = solve_gravity_scale(dom, conv).len();
        let angle = count_angle(dom, &AngleOptions::default())?.count;
        Ok(scale + angle)
    } else {
        Ok(solve_three_wave(d, dom, conv)?.len())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileRow {
    pub delta: f64,
    pub exact: u64,
    pub quasi: u64,
    pub total: u64,
    /// `δ ≤ Ω_D`, where no quasi-resonance can exist.
    pub below_omega_d: bool,
    /// `N(δ)` equals the exact count.
    pub plateau: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Profile {
    pub disp: DispersionId,
    #[serde(rename = "D")]
    pub d: i32,
    pub domain_mode: &'static str,
    pub omega_d: String,
    pub exact: u64,
    pub rows: Vec<ProfileRow>,
}

/// `N(δ) = #exact + #{quasi : |Δ| < δ}` for each requested width.
pub fn n_profile(
    dom: &SpectralDomain,
    d: &Dispersion,
    deltas: &[f64],
    conv: SideConvention,
    prec: &PrecisionConfig,
) -> Result<Profile> {
    let exact = exact_count(dom, d, conv)?;
    let opts = OmegaOptions {
        precision: *prec,
        conv,
        ..OmegaOptions::default()
    };
    let omega = match omega_d(dom, d, DetuningMode::Conserving, &opts) {
        Ok(r) => Some(r.omega_d),
        Err(Error::Validation(_)) => None,
        Err(e) => return Err(e),
    };
    let widest = deltas.iter().cloned().fold(0.0f64, f64::max);
    let quasi = if widest > 0.0 {
        find_quasi(dom, d, widest, None, conv, prec)?
    } else {
        Vec::new()
    };
    let mut rows = Vec::new();
    for &delta in deltas {
        let bound = Interval::from_f64(delta, prec.bits);
        let mut below = 0u64;
        for q in &quasi {
            match q.detuning.enclosure.certain_cmp(&bound) {
                Some(std::cmp::Ordering::Less) => below += 1,
                Some(_) => {}
                None => {
                    return Err(Error::Precision(format!(
                        "cannot order |Δ| of {} against δ = {delta}",
                        q.tuple
                    )))
                }
            }
        }
        let below_omega_d = match &omega {
            None => true,
            Some(o) => !matches!(
                bound.certain_cmp(&o.enclosure),
                Some(std::cmp::Ordering::Greater)
            ),
        };
        rows.push(ProfileRow {
            delta,
            exact,
            quasi: below,
            total: exact + below,
            below_omega_d,
            plateau: below == 0,
        });
    }
    Ok(Profile {
        disp: d.id,
        d: dom.half_width(),
        domain_mode: dom.mode_name(),
        omega_d: omega.map_or_else(|| "none".to_string(), |o| o.to_decimal(30)),
        exact,
        rows,
    })
}
