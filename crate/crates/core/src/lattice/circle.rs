use rayon::prelude::*;

use super::{Dispersion, RadicalForm, SpectralDomain, WaveVector};
use crate::arith::Sieve;
use crate::precision::{interval_floor_approx, Approx, APPROX_BITS};

/// Domain vectors bucketed by squared norm, each bucket in lexicographic
/// order, with the exact frequency of every circle.
#[derive(Debug, Clone)]
pub struct CircleIndex {
    domain: SpectralDomain,
    dispersion: Dispersion,
    norms: Vec<u64>,
    offsets: Vec<usize>,
    vectors: Vec<WaveVector>,
    forms: Vec<Option<RadicalForm>>,
}

/// One bucket of a [`CircleIndex`].
#[derive(Debug, Clone, Copy)]
pub struct Circle<'a> {
    pub index: usize,
    pub norm: u64,
    pub vectors: &'a [WaveVector],
    pub form: Option<&'a RadicalForm>,
}

impl CircleIndex {
    pub fn build(dom: &SpectralDomain, d: &Dispersion) -> Self {
        let max_norm = (dom.dm.max(0) as u64).pow(2) + (dom.dn.max(0) as u64).pow(2);
        let mut counts = vec![0u32; max_norm as usize + 1];
        for k in dom.iter().filter(|k| d.admits(*k)) {
            counts[k.norm2() as usize] += 1;
        }
        let mut slot = vec![u32::MAX; counts.len()];
        let mut norms = Vec::new();
        let mut offsets = vec![0usize];
        for (norm, &c) in counts.iter().enumerate() {
            if c > 0 {
                slot[norm] = norms.len() as u32;
                norms.push(norm as u64);
                offsets.push(offsets.last().unwrap() + c as usize);
            }
        }
        let mut fill: Vec<usize> = offsets[..norms.len()].to_vec();
        let mut vectors = vec![WaveVector::new(0, 0); *offsets.last().unwrap()];
        // domain iteration is lexicographic, so each bucket comes out sorted
        for k in dom.iter().filter(|k| d.admits(*k)) {
            let s = slot[k.norm2() as usize] as usize;
            vectors[fill[s]] = k;
            fill[s] += 1;
        }
        let forms = if d.id.is_isotropic() {
            let sieve = Sieve::new(max_norm);
            norms
                .par_iter()
                .map(|&n| d.norm_form(&sieve.factor(n)))
                .collect()
        } else {
            vec![None; norms.len()]
        };
        CircleIndex {
            domain: *dom,
            dispersion: d.clone(),
            norms,
            offsets,
            vectors,
            forms,
        }
    }

    pub fn domain(&self) -> &SpectralDomain {
        &self.domain
    }

    pub fn dispersion(&self) -> &Dispersion {
        &self.dispersion
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn total_vectors(&self) -> usize {
        self.vectors.len()
    }

    /// All indexed vectors, grouped by increasing norm.
    pub fn vectors(&self) -> &[WaveVector] {
        &self.vectors
    }

    pub fn circle(&self, index: usize) -> Circle<'_> {
        Circle {
            index,
            norm: self.norms[index],
            vectors: &self.vectors[self.offsets[index]..self.offsets[index + 1]],
            form: self.forms[index].as_ref(),
        }
    }

    pub fn position(&self, norm: u64) -> Option<usize> {
        self.norms.binary_search(&norm).ok()
    }

    pub fn get(&self, norm: u64) -> Option<Circle<'_>> {
        self.position(norm).map(|i| self.circle(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = Circle<'_>> + '_ {
        (0..self.len()).map(move |i| self.circle(i))
    }

    pub fn contains(&self, k: WaveVector) -> bool {
        self.get(k.norm2())
            .is_some_and(|c| c.vectors.binary_search(&k).is_ok())
    }

    pub fn form_of(&self, k: WaveVector) -> Option<&RadicalForm> {
        self.get(k.norm2()).and_then(|c| c.form)
    }

    /// Lower fixed-point approximation of every circle frequency.
    pub fn approx_frequencies(&self) -> Vec<Approx> {
        self.forms
            .par_iter()
            .map(|f| {
                interval_floor_approx(&f.expect("isotropic dispersion").enclose(APPROX_BITS + 8))
            })
            .collect()
    }
}

/// Builds the circle index of `dom` under `d`.
pub fn build_circle_index(dom: &SpectralDomain, d: &Dispersion) -> CircleIndex {
    CircleIndex::build(dom, d)
}
