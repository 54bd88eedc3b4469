//! Angle-resonances: quartets that preserve the multiset of wavelengths.
//!
//! Any angle quartet pairs its members into two same-norm ordered pairs
//! `(u, u')`, `(v, v')` with the same difference `d = u − u' = v − v'`, with
//! sides `{u, v'}` and `{u', v}`. Counting therefore reduces to the sizes of
//! the difference buckets `B_d`. Restricting to one half-plane of `d`
//! removes the `d ↔ −d` double count; quartets with all four members on
//! one circle admit two matchings and are corrected separately (on a circle
//! `a + b = c + d` with `a ≠ b` forces `b = −a`, so these are exactly the
//! pairs of antipodal pairs).

use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use super::types::{Quartet, ResonanceSet};
use crate::arith::{line_points, Span};
use crate::lattice::{
    CircleIndex, Dispersion, DispersionId, DomainMode, SpectralDomain, WaveVector,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleOptions {
    /// Produce the canonical quartets, not just their number.
    pub enumerate: bool,
    /// Enumeration above [`ENUMERATION_LIMIT`] needs this flag.
    pub allow_large_enumeration: bool,
    /// Number of stripes over `d.m` the difference histogram is split into.
    pub stripes: usize,
    /// Memory budget for one stripe's histogram, in bytes.
    pub memory_budget: u64,
}

/// Domains with `D` above this are count-only by default.
pub const ENUMERATION_LIMIT: i32 = 64;

impl Default for AngleOptions {
    fn default() -> Self {
        AngleOptions {
            enumerate: false,
            allow_large_enumeration: false,
            stripes: 1,
            memory_budget: 1 << 30,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AngleCount {
    pub count: u64,
    pub stripes: usize,
    pub set: Option<ResonanceSet>,
}

/// Number of canonical angle quartets in `dom` (and the quartets themselves
/// when `opts.enumerate`).
pub fn count_angle(dom: &SpectralDomain, opts: &AngleOptions) -> Result<AngleCount> {
    let idx = CircleIndex::build(dom, &Dispersion::gravity4());
    count_angle_with(&idx, opts)
}

fn half_plane(d: (i32, i32)) -> bool {
    d.0 > 0 || (d.0 == 0 && d.1 > 0)
}

/// Pairs of antipodal domain vectors on one circle.
fn antipodal_pairs(dom: &SpectralDomain, circle: &[WaveVector]) -> u64 {
    circle.iter().filter(|&&u| dom.contains(-u)).count() as u64 / 2
}

fn choose2(n: u64) -> u128 {
    let n = n as u128;
    n * n.saturating_sub(1) / 2
}

pub fn count_angle_with(idx: &CircleIndex, opts: &AngleOptions) -> Result<AngleCount> {
    let dom = *idx.domain();
    if opts.enumerate && dom.half_width() > ENUMERATION_LIMIT && !opts.allow_large_enumeration {
        return Err(Error::Resource(format!(
            "angle enumeration at D={} exceeds the default limit D={ENUMERATION_LIMIT}; request large enumeration explicitly or count only",
            dom.half_width()
        )));
    }
    let same_circle: u128 = idx
        .iter()
        .map(|c| choose2(antipodal_pairs(&dom, c.vectors)))
        .sum();
    let pairs_part = if opts.enumerate {
        None
    } else {
        Some(striped_pair_sum(idx, opts)?)
    };
    match pairs_part {
        Some(sum) => {
            let count = sum.saturating_sub(same_circle);
            Ok(AngleCount {
                count: clamp(count),
                stripes: opts.stripes.max(1),
                set: None,
            })
        }
        None => {
            let set = enumerate_angle(idx);
            debug_assert!(set.len() as u128 + same_circle >= same_circle);
            Ok(AngleCount {
                count: set.len(),
                stripes: 1,
                set: Some(set),
            })
        }
    }
}

fn clamp(x: u128) -> u64 {
    x.min(u64::MAX as u128) as u64
}

/// `Σ_d C(|B_d|, 2)` over the half-plane of differences, computed stripe by
/// stripe over `d.m`.
fn striped_pair_sum(idx: &CircleIndex, opts: &AngleOptions) -> Result<u128> {
    let dom = idx.domain();
    let (w, h) = (2 * dom.dm.max(0) as i64, 2 * dom.dn.max(0) as i64);
    let rows = (2 * h + 1) as u64;
    let stripes = opts.stripes.max(1) as i64;
    let cols_total = (w + 1) as u64; // d.m ∈ [0, w] in the half-plane
    let cols_per = (cols_total as i64 + stripes - 1) / stripes;
    let bytes = cols_per as u64 * rows * 4;
    if bytes > opts.memory_budget {
        let need = (cols_total * rows * 4).div_ceil(opts.memory_budget.max(1));
        return Err(Error::Resource(format!(
            "difference histogram needs {bytes} bytes per stripe, budget is {}; use at least {need} stripes",
            opts.memory_budget
        )));
    }
    let mut total: u128 = 0;
    for s in 0..stripes {
        let lo = s * cols_per;
        let hi = ((s + 1) * cols_per - 1).min(w);
        if lo > hi {
            continue;
        }
        let counts: Vec<AtomicU32> = (0..((hi - lo + 1) as u64 * rows))
            .map(|_| AtomicU32::new(0))
            .collect();
        (0..idx.len()).into_par_iter().for_each(|ci| {
            let vs = idx.circle(ci).vectors;
            for &u in vs {
                // u'.m ∈ [u.m − hi, u.m − lo]
                let a = vs.partition_point(|v| (v.m as i64) < u.m as i64 - hi);
                let b = vs.partition_point(|v| (v.m as i64) <= u.m as i64 - lo);
                for &v in &vs[a..b] {
                    let d = (u.m - v.m, u.n - v.n);
                    if !half_plane(d) {
                        continue;
                    }
                    let slot = (d.0 as i64 - lo) as u64 * rows + (d.1 as i64 + h) as u64;
                    counts[slot as usize].fetch_add(1, Ordering::Relaxed);
                }
            }
        });
        let part: u128 = counts
            .par_iter()
            .map(|c| choose2(c.load(Ordering::Relaxed) as u64))
            .sum();
        total = total.saturating_add(part);
    }
    Ok(total)
}

/// Difference vector with the ordered pair on one circle that produces it.
type DiffPair = ((i32, i32), WaveVector, WaveVector);

fn enumerate_angle(idx: &CircleIndex) -> ResonanceSet {
    let dom = *idx.domain();
    let mut pairs: Vec<DiffPair> = (0..idx.len())
        .into_par_iter()
        .flat_map_iter(|ci| {
            let vs = idx.circle(ci).vectors;
            let mut out = Vec::new();
            for &u in vs {
                for &v in vs {
                    let d = (u.m - v.m, u.n - v.n);
                    if half_plane(d) {
                        out.push((d, u, v));
                    }
                }
            }
            out
        })
        .collect();
    pairs.par_sort_unstable();
    let groups: Vec<&[DiffPair]> = pairs.chunk_by(|a, b| a.0 == b.0).collect();
    let quartets: Vec<Quartet> = groups
        .par_iter()
        .flat_map_iter(|g| {
            let mut out = Vec::new();
            for i in 0..g.len() {
                for j in i + 1..g.len() {
                    let (u, u2) = (g[i].1, g[i].2);
                    let (v, v2) = (g[j].1, g[j].2);
                    let form = |k: WaveVector| *idx.form_of(k).unwrap();
                    out.push(
                        Quartet::from_parts(
                            [u, v2],
                            [u2, v],
                            [form(u), form(v2), form(u2), form(v)],
                            None,
                        )
                        .expect("difference-bucket matching is an exact angle resonance"),
                    );
                }
            }
            out
        })
        .collect();
    ResonanceSet::from_quartets(DispersionId::Gravity4, dom, quartets)
}

/// `|B_d|`: ordered pairs `(u, u − d)` of same-norm domain vectors, counted
/// in closed form as lattice points on the bisector line `2u·d = |d|²`.
pub fn difference_bucket_size(dom: &SpectralDomain, d: WaveVector) -> u64 {
    if d.is_zero() {
        return 0;
    }
    let (dm, dn) = (d.m as i64, d.n as i64);
    let n2 = dm * dm + dn * dn;
    if n2 % 2 != 0 {
        return 0;
    }
    let c = n2 / 2;
    let (ms, ns) = (dom.m_span(), dom.n_span());
    let xs = Span::new(ms.lo.max(ms.lo + dm), ms.hi.min(ms.hi + dm));
    let ys = Span::new(ns.lo.max(ns.lo + dn), ns.hi.min(ns.hi + dn));
    let line = line_points(dm, dn, c, xs, ys);
    let mut count = line.count();
    if dom.mode == DomainMode::NoAxes && count > 0 {
        let on_line = |x: i64, y: i64| dm * x + dn * y == c && xs.contains(x) && ys.contains(y);
        let mut bad: Vec<(i64, i64)> = Vec::new();
        for x0 in [0, dm] {
            if dn != 0 && (c - dm * x0) % dn == 0 {
                bad.push((x0, (c - dm * x0) / dn));
            }
        }
        for y0 in [0, dn] {
            if dm != 0 && (c - dn * y0) % dm == 0 {
                bad.push(((c - dn * y0) / dm, y0));
            }
        }
        bad.sort();
        bad.dedup();
        count -= bad.into_iter().filter(|&(x, y)| on_line(x, y)).count() as u64;
    }
    count
}

/// Independent angle count from closed-form bucket sizes, no pair
/// enumeration.
pub fn count_angle_closed_form(dom: &SpectralDomain) -> u64 {
    let (w, h) = (2 * dom.dm.max(0), 2 * dom.dn.max(0));
    let pair_sum: u128 = (0..=w)
        .into_par_iter()
        .map(|dm| {
            let mut acc: u128 = 0;
            for dn in -h..=h {
                if half_plane((dm, dn)) {
                    acc += choose2(difference_bucket_size(dom, WaveVector::new(dm, dn)));
                }
            }
            acc
        })
        .sum();
    let same_circle: u128 = circle_antipodal_sum(dom);
    clamp(pair_sum - same_circle)
}

fn circle_antipodal_sum(dom: &SpectralDomain) -> u128 {
    let idx = CircleIndex::build(dom, &Dispersion::gravity4());
    idx.iter()
        .map(|c| choose2(antipodal_pairs(dom, c.vectors)))
        .sum()
}

/// Lattice points of `dom` on the circle `m² + n² = norm`, lexicographic.
pub fn circle_points(dom: &SpectralDomain, norm: u64) -> Vec<WaveVector> {
    let r = crate::arith::isqrt(norm) as i64;
    let mut out = Vec::new();
    for m in -r..=r {
        let rest = norm as i64 - m * m;
        let n = crate::arith::isqrt(rest as u64) as i64;
        if n * n == rest {
            for nn in if n == 0 { vec![0] } else { vec![-n, n] } {
                let k = WaveVector::new(m as i32, nn as i32);
                if dom.contains(k) {
                    out.push(k);
                }
            }
        }
    }
    out
}

/// Number of canonical angle quartets of `dom` containing `k`.
pub fn angle_degree(dom: &SpectralDomain, k: WaveVector) -> Result<u64> {
    if !dom.contains(k) {
        return Err(Error::Domain(format!("{k} is outside {dom}")));
    }
    let circle = circle_points(dom, k.norm2());
    let matchings: u64 = circle
        .iter()
        .filter(|&&c| c != k)
        .map(|&c| difference_bucket_size(dom, k - c) - 1)
        .sum();
    let same_circle = if dom.contains(-k) {
        antipodal_pairs(dom, &circle) - 1
    } else {
        0
    };
    Ok(matchings - same_circle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: i32, n: i32) -> WaveVector {
        WaveVector::new(m, n)
    }

    #[test]
    fn d1_has_six_angle_quartets() {
        let dom = SpectralDomain::full(1);
        let c = count_angle(&dom, &AngleOptions::default()).unwrap();
        assert_eq!(c.count, 6);
        let e = count_angle(
            &dom,
            &AngleOptions {
                enumerate: true,
                ..Default::default()
            },
        )
        .unwrap();
        let set = e.set.unwrap();
        assert_eq!(set.len(), 6);
        assert!(set
            .quartets()
            .iter()
            .any(|q| q.side_a == [v(-1, -1), v(1, 1)] && q.side_b == [v(-1, 1), v(1, -1)]));
        assert_eq!(count_angle_closed_form(&dom), 6);
    }

    #[test]
    fn bucket_size_matches_brute_force() {
        for dom in [
            SpectralDomain::full(4),
            SpectralDomain::no_axes(4),
            SpectralDomain::quadrant(5, 3),
        ] {
            let members: Vec<WaveVector> = dom.iter().collect();
            for dm in -8..=8 {
                for dn in -8..=8 {
                    let d = v(dm, dn);
                    let brute = members
                        .iter()
                        .filter(|&&u| {
                            dom.contains(u - d) && u.norm2() == (u - d).norm2() && !d.is_zero()
                        })
                        .count() as u64;
                    assert_eq!(difference_bucket_size(&dom, d), brute, "{dom} d={d}");
                }
            }
        }
    }

    #[test]
    fn striping_does_not_change_counts() {
        let dom = SpectralDomain::full(9);
        let one = count_angle(&dom, &AngleOptions::default()).unwrap().count;
        let many = count_angle(
            &dom,
            &AngleOptions {
                stripes: 7,
                ..Default::default()
            },
        )
        .unwrap()
        .count;
        assert_eq!(one, many);
        assert_eq!(one, count_angle_closed_form(&dom));
    }

    #[test]
    fn memory_budget_suggests_stripes() {
        let dom = SpectralDomain::full(20);
        let opts = AngleOptions {
            memory_budget: 4096,
            ..Default::default()
        };
        match count_angle(&dom, &opts) {
            Err(Error::Resource(msg)) => assert!(msg.contains("stripes")),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn large_enumeration_needs_flag() {
        let dom = SpectralDomain::full(65);
        let opts = AngleOptions {
            enumerate: true,
            ..Default::default()
        };
        assert!(matches!(count_angle(&dom, &opts), Err(Error::Resource(_))));
    }

    #[test]
    fn degree_matches_enumeration() {
        for dom in [SpectralDomain::full(5), SpectralDomain::no_axes(5)] {
            let set = count_angle(
                &dom,
                &AngleOptions {
                    enumerate: true,
                    ..Default::default()
                },
            )
            .unwrap()
            .set
            .unwrap();
            for k in dom.iter() {
                let want = set.quartets().iter().filter(|q| q.contains(k)).count() as u64;
                assert_eq!(angle_degree(&dom, k).unwrap(), want, "{dom} {k}");
            }
        }
        assert_eq!(angle_degree(&SpectralDomain::full(1), v(1, 0)).unwrap(), 3);
    }
}
