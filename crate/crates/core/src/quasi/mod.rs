//! Nonzero detunings: the domain minimum `Ω_D`, quasi-resonances below a
//! width, the `N(δ)` profile and the exemption from the global lower bound.

mod classes;
mod exempt;
mod omega;
mod search;
mod table;

use serde::Serialize;

use crate::lattice::{RadicalForm, WaveVector};
use crate::solver::canonical_order;
use table::FreqTable;

pub use classes::{min_detuning_by_class, ClassMinimum, KernelClass, CLASS_LIMIT};
pub use exempt::{count_exempt_scale, global_boundary_exempt};
pub use omega::{
    omega_d, Bin, DetuningMode, DetuningReport, OmegaOptions, CONSERVING_LIMIT, UNCONSTRAINED_LIMIT,
};
pub use search::{
    exact_count, find_quasi, n_profile, Profile, ProfileRow, QuasiSolution, QUASI_LIMIT,
};

/// A tuple `lhs ⇒ rhs` in canonical order, standing for
/// `Σ pᵢ ω(lhsᵢ) − Σ pⱼ ω(rhsⱼ)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Tuple {
    pub lhs: Vec<WaveVector>,
    pub rhs: Vec<WaveVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multipliers: Option<Vec<i64>>,
}

impl Tuple {
    pub fn new(lhs: Vec<WaveVector>, rhs: Vec<WaveVector>) -> Tuple {
        Tuple::with_multipliers(lhs, rhs, None)
    }

    pub fn with_multipliers(
        lhs: Vec<WaveVector>,
        rhs: Vec<WaveVector>,
        p: Option<Vec<i64>>,
    ) -> Tuple {
        let nl = lhs.len();
        let members: Vec<WaveVector> = lhs.into_iter().chain(rhs).collect();
        let signs: Vec<i8> = (0..members.len())
            .map(|i| if i < nl { 1 } else { -1 })
            .collect();
        let mults = p.clone().unwrap_or_else(|| vec![1; members.len()]);
        let order = canonical_order(&members, &signs, &mults);
        // a global flip swaps sides; side lengths only match when both are equal
        let mut lhs = order;
        let rhs = lhs.split_off(nl);
        Tuple {
            lhs,
            rhs,
            multipliers: p,
        }
    }

    pub fn members(&self) -> Vec<WaveVector> {
        self.lhs.iter().chain(self.rhs.iter()).copied().collect()
    }

    fn weight(&self, i: usize) -> i64 {
        self.multipliers.as_ref().map_or(1, |p| p[i])
    }

    pub(crate) fn terms(&self, t: &FreqTable) -> Vec<(i64, RadicalForm)> {
        let nl = self.lhs.len();
        self.members()
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let w = self.weight(i);
                (
                    if i < nl { w } else { -w },
                    t.slot(k).expect("tuple member in domain").form,
                )
            })
            .collect()
    }
}

impl std::fmt::Display for Tuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for k in &self.lhs {
            write!(f, "{k}")?;
        }
        f.write_str(" => ")?;
        for k in &self.rhs {
            write!(f, "{k}")?;
        }
        Ok(())
    }
}
