//! Four-wave gravity resonances of Form I, found kernel class by kernel
//! class.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::types::{Kind, Quartet, ResonanceSet, SideConvention};
use crate::lattice::{
    CircleIndex, Dispersion, DispersionId, RadicalForm, SpectralDomain, WaveVector,
};

/// All canonical scale-resonances of `√k₁ + √k₂ = √k₃ + √k₄` in `dom`.
///
/// Scale quartets are always Form I. Within one kernel class `q` the
/// frequencies are `γ·q^(1/4)`, so the problem reduces to
/// `γ₁ + γ₂ = γ₃ + γ₄` with `{γ₁, γ₂} ≠ {γ₃, γ₄}`; side pairs are then
/// matched on their vector sum.
pub fn solve_gravity_scale(dom: &SpectralDomain, conv: SideConvention) -> ResonanceSet {
    let idx = CircleIndex::build(dom, &Dispersion::gravity4());
    solve_gravity_scale_with(&idx, conv)
}

pub fn solve_gravity_scale_with(idx: &CircleIndex, conv: SideConvention) -> ResonanceSet {
    let qs = form_one_quartets(idx, false)
        .into_iter()
        .filter(|q| conv.admits_quartet(q))
        .collect();
    ResonanceSet::from_quartets(DispersionId::Gravity4, *idx.domain(), qs)
}

/// Every Form I quartet, angle-resonances included (the branch whose side
/// pairs preserve the γ multiset).
pub fn gravity_form_one(dom: &SpectralDomain, conv: SideConvention) -> ResonanceSet {
    let idx = CircleIndex::build(dom, &Dispersion::gravity4());
    let qs = form_one_quartets(&idx, true)
        .into_iter()
        .filter(|q| conv.admits_quartet(q))
        .collect();
    ResonanceSet::from_quartets(DispersionId::Gravity4, *dom, qs)
}

struct Member {
    k: WaveVector,
    gamma: i128,
    form: RadicalForm,
}

fn form_one_quartets(idx: &CircleIndex, include_angle: bool) -> Vec<Quartet> {
    assert_eq!(idx.dispersion().id, DispersionId::Gravity4);
    let mut classes: BTreeMap<u128, Vec<usize>> = BTreeMap::new();
    for c in idx.iter() {
        classes
            .entry(c.form.expect("gravity forms").kernel)
            .or_default()
            .push(c.index);
    }
    // γ₁+γ₂ = γ₃+γ₄ with distinct multisets needs three distinct γ values
    let classes: Vec<Vec<usize>> = classes
        .into_values()
        .filter(|circles| include_angle || circles.len() >= 3)
        .collect();

    let mut out: Vec<Quartet> = classes
        .par_iter()
        .flat_map_iter(|circles| class_quartets(idx, circles, include_angle))
        .collect();
    out.sort();
    out
}

fn class_quartets(idx: &CircleIndex, circles: &[usize], include_angle: bool) -> Vec<Quartet> {
    let mut members = Vec::new();
    for &ci in circles {
        let c = idx.circle(ci);
        let form = *c.form.unwrap();
        let gamma = form
            .integer_coeff()
            .expect("gravity coefficients are integers");
        members.extend(c.vectors.iter().map(|&k| Member { k, gamma, form }));
    }
    let mut pairs: Vec<(i64, i64, i128, u32, u32)> =
        Vec::with_capacity(members.len() * (members.len() + 1) / 2);
    for i in 0..members.len() {
        for j in i..members.len() {
            let (a, b) = (&members[i], &members[j]);
            pairs.push((
                a.k.m as i64 + b.k.m as i64,
                a.k.n as i64 + b.k.n as i64,
                a.gamma + b.gamma,
                i as u32,
                j as u32,
            ));
        }
    }
    pairs.sort_unstable();

    let multiset = |i: u32, j: u32| {
        let (x, y) = (members[i as usize].gamma, members[j as usize].gamma);
        (x.min(y), x.max(y))
    };
    let mut out = Vec::new();
    for run in pairs.chunk_by(|x, y| (x.0, x.1, x.2) == (y.0, y.1, y.2)) {
        for a in 0..run.len() {
            for b in a + 1..run.len() {
                let (p, q) = (run[a], run[b]);
                let kind = if multiset(p.3, p.4) == multiset(q.3, q.4) {
                    Kind::Angle
                } else {
                    Kind::Scale
                };
                if kind == Kind::Angle && !include_angle {
                    continue;
                }
                let m = |i: u32| &members[i as usize];
                let quartet = Quartet::from_parts(
                    [m(p.3).k, m(p.4).k],
                    [m(q.3).k, m(q.4).k],
                    [m(p.3).form, m(p.4).form, m(q.3).form, m(q.4).form],
                    None,
                )
                .expect("kernel-class construction yields exact resonances");
                debug_assert_eq!(quartet.kind, kind);
                out.push(quartet);
            }
        }
    }
    out
}
