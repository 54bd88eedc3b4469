//! Exact three-wave resonances `ω₁ + ω₂ = ω₃`, `k₁ + k₂ = k₃`.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;

use super::types::{ResonanceSet, SideConvention, Triad};
use crate::lattice::{
    CircleIndex, Conservation, Dispersion, DispersionId, KernelKey, SpectralDomain, WaveVector,
};
use crate::{Error, Result};

/// All canonical triads of a three-wave dispersion in `dom`.
///
/// Isotropic laws: within one kernel class the frequencies are rational
/// multiples of a common radical, so `c₁ + c₂ = c₃` is solved on the
/// coefficients first and vectors are matched afterwards. `rossby3` is
/// rational and is solved as a linear Diophantine equation in `(m₁, m₂)`
/// for each pair of `n` values.
pub fn solve_three_wave(
    d: &Dispersion,
    dom: &SpectralDomain,
    conv: SideConvention,
) -> Result<ResonanceSet> {
    if d.order() != 3 {
        return Err(Error::Validation(format!(
            "{} is not a three-wave dispersion",
            d.id
        )));
    }
    if !d.has_default_signs() || d.conservation != Conservation::Both {
        return Err(Error::Unsupported(
            "three-wave solver handles the default sign pattern with full momentum conservation; use the oracle".into(),
        ));
    }
    let triads = match d.id {
        DispersionId::Rossby3 => rossby_triads(dom),
        _ => isotropic_triads(&CircleIndex::build(dom, d)),
    };
    let triads = triads
        .into_iter()
        .filter(|t| conv.admits_triad(t))
        .collect();
    Ok(ResonanceSet::from_triads(d.id, *dom, triads))
}

fn isotropic_triads(idx: &CircleIndex) -> Vec<Triad> {
    let mut classes: BTreeMap<KernelKey, Vec<usize>> = BTreeMap::new();
    for c in idx.iter() {
        classes
            .entry(c.form.unwrap().key())
            .or_default()
            .push(c.index);
    }
    let classes: Vec<Vec<usize>> = classes.into_values().collect();
    classes
        .par_iter()
        .flat_map_iter(|circles| {
            let by_coeff: HashMap<Ratio<i128>, usize> = circles
                .iter()
                .map(|&ci| (idx.circle(ci).form.unwrap().coeff, ci))
                .collect();
            let mut out = Vec::new();
            for (ia, &a) in circles.iter().enumerate() {
                for &b in &circles[ia..] {
                    let target =
                        idx.circle(a).form.unwrap().coeff + idx.circle(b).form.unwrap().coeff;
                    if let Some(&c) = by_coeff.get(&target) {
                        match_vectors(idx, a, b, c, &mut out);
                    }
                }
            }
            out
        })
        .collect()
}

fn match_vectors(idx: &CircleIndex, a: usize, b: usize, c: usize, out: &mut Vec<Triad>) {
    let (ca, cb, cc) = (idx.circle(a), idx.circle(b), idx.circle(c));
    for (i, &k1) in ca.vectors.iter().enumerate() {
        let rest = if a == b { &cb.vectors[i..] } else { cb.vectors };
        for &k2 in rest {
            let k3 = k1 + k2;
            if k3.norm2() == cc.norm && cc.vectors.binary_search(&k3).is_ok() {
                out.push(Triad::new(k1, k2, k3));
            }
        }
    }
}

fn rossby_triads(dom: &SpectralDomain) -> Vec<Triad> {
    let d = Dispersion::rossby3();
    let ns = dom.n_span();
    let ms = dom.m_span();
    let n_lo = ns.lo.max(1);
    let pairs: Vec<(i64, i64)> = (n_lo..=ns.hi)
        .flat_map(|n1| {
            (n1..=ns.hi)
                .filter(move |&n2| n1 + n2 <= ns.hi)
                .map(move |n2| (n1, n2))
        })
        .collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(n1, n2)| {
            let n3 = n1 + n2;
            let (a1, a2, a3) = (n1 * (n1 + 1), n2 * (n2 + 1), n3 * (n3 + 1));
            // m₁/a₁ + m₂/a₂ = (m₁+m₂)/a₃  ⇔  m₁·(a₃−a₁)·a₂ + m₂·(a₃−a₂)·a₁ = 0
            let (big_a, big_b) = ((a3 - a1) * a2, (a3 - a2) * a1);
            let g = big_a.gcd(&big_b);
            let (s1, s2) = (big_b / g, big_a / g);
            // m₁ = t·s1, m₂ = −t·s2
            let t_lo = ceil_div(ms.lo, s1).max(ceil_div(-ms.hi, s2));
            let t_hi = floor_div(ms.hi, s1).min(floor_div(-ms.lo, s2));
            let mut out = Vec::new();
            for t in t_lo..=t_hi {
                let (m1, m2) = (t * s1, -t * s2);
                let k1 = WaveVector::new(m1 as i32, n1 as i32);
                let k2 = WaveVector::new(m2 as i32, n2 as i32);
                let k3 = k1 + k2;
                if [k1, k2, k3].iter().all(|&k| dom.contains(k) && d.admits(k)) {
                    out.push(Triad::new(k1, k2, k3));
                }
            }
            out
        })
        .collect()
}

fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}
