//! Minimal nonzero detuning split by how many member frequencies are
//! rational.

use rayon::prelude::*;
use serde::Serialize;

use super::table::{side_pairs, FreqTable, PairSum};
use super::Tuple;
use crate::lattice::radical::combine;
use crate::lattice::{evaluate_terms, Dispersion, SpectralDomain};
use crate::precision::{Approx, Certified, PrecisionConfig};
use crate::solver::SideConvention;
use crate::{Error, Result};

pub const CLASS_LIMIT: i32 = 64;

const ZERO_SLACK: Approx = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelClass {
    /// All four frequencies are integers.
    AllRational,
    /// Some but not all are integers.
    Mixed,
    /// None is an integer.
    NoRational,
}

impl KernelClass {
    pub const ALL: [KernelClass; 3] = [
        KernelClass::AllRational,
        KernelClass::Mixed,
        KernelClass::NoRational,
    ];

    fn of(rational: u8) -> KernelClass {
        match rational {
            4 => KernelClass::AllRational,
            0 => KernelClass::NoRational,
            _ => KernelClass::Mixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMinimum {
    pub class: KernelClass,
    /// `None` when the class has no tuple with nonzero detuning.
    pub minimum: Option<(Certified, Tuple)>,
}

#[derive(Default, Clone)]
struct Track {
    min: Option<Approx>,
    cands: Vec<(Approx, Tuple)>,
}

impl Track {
    fn offer(&mut self, gap: Approx, tuple: Tuple) {
        if self.min.is_some_and(|m| gap > m + 16) {
            return;
        }
        self.cands.push((gap, tuple));
        if self.min.is_none_or(|m| gap < m) {
            self.min = Some(gap);
            self.cands.retain(|c| c.0 <= gap + 16);
        }
    }
}

/// Smallest nonzero `|ω₁ + ω₂ − ω₃ − ω₄|` over momentum-conserving
/// quartets, reported separately for each [`KernelClass`].
pub fn min_detuning_by_class(
    dom: &SpectralDomain,
    d: &Dispersion,
    conv: SideConvention,
    prec: &PrecisionConfig,
) -> Result<Vec<ClassMinimum>> {
    if d.order() != 4 || !d.has_default_signs() {
        return Err(Error::Unsupported(
            "kernel-class audit is defined for four-wave default signs".into(),
        ));
    }
    if dom.half_width() > CLASS_LIMIT {
        return Err(Error::Resource(format!(
            "kernel-class audit is limited to D <= {CLASS_LIMIT} (requested D = {})",
            dom.half_width()
        )));
    }
    let t = FreqTable::new(d, dom)?;
    let distinct = conv == SideConvention::Distinct;
    let rows: Vec<i64> = (-2 * t.h..=2 * t.h).collect();
    let parts: Vec<Result<[Track; 3]>> = rows
        .par_iter()
        .map(|&sm| {
            let mut tracks: [Track; 3] = Default::default();
            for sn in -2 * t.h..=2 * t.h {
                let mut groups: [Vec<PairSum>; 3] = Default::default();
                for p in side_pairs(&t, (sm, sn), 1, 1, distinct) {
                    groups[p.rational as usize].push(p);
                }
                for g in groups.iter_mut() {
                    g.sort_by_key(|p| p.approx);
                }
                for a in 0..3 {
                    for b in a..3 {
                        let class = KernelClass::of((a + b) as u8) as usize;
                        scan_pair(&t, &groups[a], &groups[b], a == b, &mut tracks[class])?;
                    }
                }
            }
            Ok(tracks)
        })
        .collect();
    let mut merged: [Track; 3] = Default::default();
    for p in parts {
        for (i, tr) in p?.into_iter().enumerate() {
            for (g, tu) in tr.cands {
                merged[i].offer(g, tu);
            }
        }
    }
    let mut out = Vec::new();
    for (i, tr) in merged.into_iter().enumerate() {
        let mut best: Option<(Certified, Tuple)> = None;
        for (_, tuple) in tr.cands {
            let det = evaluate_terms(&tuple.terms(&t), prec)?;
            if det.is_exact_zero {
                continue;
            }
            let better = match &best {
                None => true,
                Some((m, bt)) => match det.magnitude.enclosure.certain_cmp(&m.enclosure) {
                    Some(std::cmp::Ordering::Less) => true,
                    Some(_) => false,
                    None => tuple < *bt,
                },
            };
            if better {
                best = Some((det.magnitude, tuple));
            }
        }
        out.push(ClassMinimum {
            class: KernelClass::ALL[i],
            minimum: best,
        });
    }
    Ok(out)
}

fn scan_pair(
    t: &FreqTable,
    a: &[PairSum],
    b: &[PairSum],
    same: bool,
    track: &mut Track,
) -> Result<()> {
    let mut offer = |x: &PairSum, y: &PairSum| -> Result<()> {
        let gap = (y.approx - x.approx).abs();
        let tuple = Tuple::new(vec![x.a, x.b], vec![y.a, y.b]);
        if gap <= ZERO_SLACK && combine(&tuple.terms(t))?.is_empty() {
            return Ok(());
        }
        track.offer(gap, tuple);
        Ok(())
    };
    if same {
        for w in a.windows(2) {
            offer(&w[0], &w[1])?;
        }
        return Ok(());
    }
    // nearest nonzero neighbours across the two sorted lists; exact ties
    // are stepped over
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j].approx < x.approx {
            j += 1;
        }
        for y in b[j..].iter() {
            offer(x, y)?;
            if y.approx - x.approx > ZERO_SLACK {
                break;
            }
        }
        for y in b[..j].iter().rev() {
            offer(x, y)?;
            if x.approx - y.approx > ZERO_SLACK {
                break;
            }
        }
    }
    Ok(())
}
