use num_integer::Integer;

use crate::arith::Sieve;
use crate::lattice::{Dispersion, RadicalForm, SpectralDomain, WaveVector};
use crate::precision::{interval_floor_approx, Approx, APPROX_BITS};
use crate::Result;

/// Dense grid of exact and approximate frequencies over a domain.
pub(crate) struct FreqTable {
    pub dom: SpectralDomain,
    pub h: i64,
    w: i64,
    slots: Vec<Option<Slot>>,
}

#[derive(Clone, Copy)]
pub(crate) struct Slot {
    pub form: RadicalForm,
    pub approx: Approx,
}

impl FreqTable {
    pub fn new(d: &Dispersion, dom: &SpectralDomain) -> Result<FreqTable> {
        let h = dom.half_width().max(0) as i64;
        let w = 2 * h + 1;
        let sieve = Sieve::new((2 * h * h) as u64 + 1);
        let mut slots = vec![None; (w * w) as usize];
        for k in dom.iter().filter(|&k| d.admits(k)) {
            let form = d.frequency_with(&sieve, k)?;
            let approx = interval_floor_approx(&form.enclose(APPROX_BITS + 8));
            slots[((k.m as i64 + h) * w + k.n as i64 + h) as usize] = Some(Slot { form, approx });
        }
        Ok(FreqTable {
            dom: *dom,
            h,
            w,
            slots,
        })
    }

    pub fn get(&self, m: i64, n: i64) -> Option<&Slot> {
        if m.abs() > self.h || n.abs() > self.h {
            return None;
        }
        self.slots[((m + self.h) * self.w + n + self.h) as usize].as_ref()
    }

    pub fn slot(&self, k: WaveVector) -> Option<&Slot> {
        self.get(k.m as i64, k.n as i64)
    }

    pub fn vectors(&self) -> impl Iterator<Item = (WaveVector, &Slot)> + '_ {
        self.dom
            .iter()
            .filter_map(move |k| self.slot(k).map(|s| (k, s)))
    }
}

/// A weighted pair `pa·ω(a) + pb·ω(b)` with `pa·a + pb·b` fixed by the bucket.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PairSum {
    pub approx: Approx,
    pub a: WaveVector,
    pub b: WaveVector,
    pub rational: u8,
}

/// Pairs `(a, b)` with `pa·a + pb·b = s`. When `pa == pb` the pair is
/// unordered and stored with `a ≤ b`.
pub(crate) fn side_pairs(
    t: &FreqTable,
    s: (i64, i64),
    pa: i64,
    pb: i64,
    distinct: bool,
) -> Vec<PairSum> {
    let h = t.h;
    let mut out = Vec::new();
    // a ranges over the box where b = (s − pa·a)/pb stays within [−h, h]
    let range = |sc: i64| {
        let lo = Integer::div_ceil(&(sc - pb * h), &pa).max(-h);
        let hi = Integer::div_floor(&(sc + pb * h), &pa).min(h);
        lo..=hi
    };
    for am in range(s.0) {
        let rm = s.0 - pa * am;
        if rm % pb != 0 {
            continue;
        }
        for an in range(s.1) {
            let rn = s.1 - pa * an;
            if rn % pb != 0 {
                continue;
            }
            let (bm, bn) = (rm / pb, rn / pb);
            if pa == pb && (am, an) > (bm, bn) {
                continue;
            }
            if distinct && (am, an) == (bm, bn) {
                continue;
            }
            let (Some(sa), Some(sb)) = (t.get(am, an), t.get(bm, bn)) else {
                continue;
            };
            out.push(PairSum {
                approx: pa as i128 * sa.approx + pb as i128 * sb.approx,
                a: WaveVector::new(am as i32, an as i32),
                b: WaveVector::new(bm as i32, bn as i32),
                rational: sa.form.is_rational() as u8 + sb.form.is_rational() as u8,
            });
        }
    }
    out
}
