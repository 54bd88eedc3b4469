use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::radical::combine;
use crate::lattice::{DispersionId, RadicalForm, SpectralDomain, WaveVector};
use crate::{Error, Result};

/// Energy-transport type of a quartet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// At least one new wavelength is generated.
    Scale,
    /// The multiset of wavelengths is preserved.
    Angle,
}

/// Kernel structure of an exact gravity quartet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Form {
    /// All four frequencies share one kernel.
    I,
    /// The sides pair off on two distinct kernels.
    II,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Scale => "scale",
            Kind::Angle => "angle",
        })
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::I => "I",
            Form::II => "II",
        })
    }
}

/// Lexicographically smallest arrangement of `tuple` under the permutations
/// that preserve the equation: swaps of positions carrying the same
/// `(sign, multiplier)` label, optionally composed with a global sign flip.
pub fn canonical_order(tuple: &[WaveVector], signs: &[i8], mults: &[i64]) -> Vec<WaveVector> {
    let s = tuple.len();
    let labels: Vec<(i8, i64)> = (0..s).map(|i| (signs[i], mults[i])).collect();
    let mut best = tuple.to_vec();
    let mut perm: Vec<usize> = (0..s).collect();
    permutations(&mut perm, 0, &mut |p| {
        let plain = (0..s).all(|i| labels[p[i]] == labels[i]);
        let flipped = (0..s).all(|i| labels[p[i]] == (-labels[i].0, labels[i].1));
        if plain || flipped {
            let cand: Vec<WaveVector> = p.iter().map(|&j| tuple[j]).collect();
            if cand < best {
                best = cand;
            }
        }
    });
    best
}

fn permutations(p: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize])) {
    if at == p.len() {
        f(p);
        return;
    }
    for i in at..p.len() {
        p.swap(at, i);
        permutations(p, at + 1, f);
        p.swap(at, i);
    }
}

/// One exact four-wave resonance `k₁ + k₂ = k₃ + k₄` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quartet {
    pub side_a: [WaveVector; 2],
    pub side_b: [WaveVector; 2],
    pub kind: Kind,
    pub form: Form,
    /// `[q]` for Form I, `[q₁, q₂]` (kernels of `side_a`) for Form II.
    pub kernels: Vec<u128>,
    /// Radical coefficient of each member, in `side_a ++ side_b` order.
    pub gammas: [i128; 4],
}

pub type QuartetKey = ([WaveVector; 2], [WaveVector; 2]);

impl Quartet {
    pub fn key(&self) -> QuartetKey {
        (self.side_a, self.side_b)
    }

    pub fn members(&self) -> [WaveVector; 4] {
        [
            self.side_a[0],
            self.side_a[1],
            self.side_b[0],
            self.side_b[1],
        ]
    }

    pub fn contains(&self, k: WaveVector) -> bool {
        self.members().contains(&k)
    }

    /// Validates and classifies `side_a ⇒ side_b` given the exact member
    /// frequencies (in the same order) and optional multipliers.
    pub fn from_parts(
        side_a: [WaveVector; 2],
        side_b: [WaveVector; 2],
        forms: [RadicalForm; 4],
        multipliers: Option<&[i64]>,
    ) -> Result<Quartet> {
        let p: Vec<i64> = multipliers.map_or(vec![1; 4], |p| p.to_vec());
        if p.len() != 4 {
            return Err(Error::Validation("a quartet needs four multipliers".into()));
        }
        let members = [side_a[0], side_a[1], side_b[0], side_b[1]];
        let lhs = add(members[0].scaled(p[0]), members[1].scaled(p[1]));
        let rhs = add(members[2].scaled(p[2]), members[3].scaled(p[3]));
        if lhs != rhs {
            return Err(Error::Validation(format!(
                "momentum not conserved: {lhs:?} vs {rhs:?}"
            )));
        }
        let mut sa = vec![(members[0], p[0]), (members[1], p[1])];
        let mut sb = vec![(members[2], p[2]), (members[3], p[3])];
        sa.sort();
        sb.sort();
        if sa == sb {
            return Err(Error::Validation(
                "trivial quartet: both sides are the same multiset".into(),
            ));
        }
        let terms: Vec<(i64, RadicalForm)> = (0..4)
            .map(|i| (if i < 2 { p[i] } else { -p[i] }, forms[i]))
            .collect();
        if !combine(&terms)?.is_empty() {
            return Err(Error::Validation(
                "frequency sums differ: not an exact resonance".into(),
            ));
        }

        let order = canonical_order(&members, &[1, 1, -1, -1], &p);
        let pos = |k: WaveVector, used: &mut [bool; 4]| -> usize {
            let i = (0..4).find(|&i| !used[i] && members[i] == k).unwrap();
            used[i] = true;
            i
        };
        let mut used = [false; 4];
        let idx: Vec<usize> = order.iter().map(|&k| pos(k, &mut used)).collect();
        let forms: Vec<RadicalForm> = idx.iter().map(|&i| forms[i]).collect();
        let side_a = [order[0], order[1]];
        let side_b = [order[2], order[3]];

        let mut na = [side_a[0].norm2(), side_a[1].norm2()];
        let mut nb = [side_b[0].norm2(), side_b[1].norm2()];
        na.sort();
        nb.sort();
        let kind = if na == nb { Kind::Angle } else { Kind::Scale };

        let keys: Vec<_> = forms.iter().map(|f| f.key()).collect();
        let (form, kernels) = if keys.iter().all(|k| *k == keys[0]) {
            (Form::I, vec![keys[0].kernel])
        } else {
            let paired = |a: usize, b: usize| keys[a] == keys[b];
            let ok = keys[0] != keys[1]
                && ((paired(0, 2) && paired(1, 3)) || (paired(0, 3) && paired(1, 2)));
            if !ok {
                return Err(Error::Validation(
                    "kernel pattern is neither Form I nor Form II".into(),
                ));
            }
            (Form::II, vec![keys[0].kernel, keys[1].kernel])
        };
        let gammas = [0, 1, 2, 3].map(|i| {
            let c = forms[i].coeff;
            if c.is_integer() {
                *c.numer()
            } else {
                0
            }
        });
        Ok(Quartet {
            side_a,
            side_b,
            kind,
            form,
            kernels,
            gammas,
        })
    }
}

fn add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 + b.0, a.1 + b.1)
}

impl PartialOrd for Quartet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quartet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Quartet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{} => {}{}",
            self.side_a[0], self.side_a[1], self.side_b[0], self.side_b[1]
        )
    }
}

/// One exact three-wave resonance `k₁ + k₂ = k₃`, canonical with `k₁ ≤ k₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triad {
    pub k1: WaveVector,
    pub k2: WaveVector,
    pub k3: WaveVector,
}

impl Triad {
    pub fn new(k1: WaveVector, k2: WaveVector, k3: WaveVector) -> Self {
        let (k1, k2) = if k2 < k1 { (k2, k1) } else { (k1, k2) };
        Triad { k1, k2, k3 }
    }

    /// Canonical triad under possibly unequal summand multipliers.
    pub fn with_multipliers(k1: WaveVector, k2: WaveVector, k3: WaveVector, p: &[i64]) -> Self {
        if p[0] == p[1] {
            Triad::new(k1, k2, k3)
        } else {
            Triad { k1, k2, k3 }
        }
    }

    pub fn members(&self) -> [WaveVector; 3] {
        [self.k1, self.k2, self.k3]
    }

    pub fn contains(&self, k: WaveVector) -> bool {
        self.members().contains(&k)
    }
}

impl fmt::Display for Triad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} => {}", self.k1, self.k2, self.k3)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub total: u64,
    pub scale: u64,
    pub angle: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solutions {
    Triads(Vec<Triad>),
    Quartets(Vec<Quartet>),
    /// Only the counts were computed.
    CountOnly,
}

/// Canonical, duplicate-free collection of exact resonances of one
/// dispersion on one domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceSet {
    pub disp: DispersionId,
    pub domain: SpectralDomain,
    pub multipliers: Option<Vec<i64>>,
    pub solutions: Solutions,
    pub counts: Counts,
}

impl ResonanceSet {
    pub fn from_quartets(disp: DispersionId, domain: SpectralDomain, mut qs: Vec<Quartet>) -> Self {
        qs.sort();
        qs.dedup_by(|a, b| a.key() == b.key());
        let scale = qs.iter().filter(|q| q.kind == Kind::Scale).count() as u64;
        let counts = Counts {
            total: qs.len() as u64,
            scale,
            angle: qs.len() as u64 - scale,
        };
        ResonanceSet {
            disp,
            domain,
            multipliers: None,
            solutions: Solutions::Quartets(qs),
            counts,
        }
    }

    pub fn from_triads(disp: DispersionId, domain: SpectralDomain, mut ts: Vec<Triad>) -> Self {
        ts.sort();
        ts.dedup();
        let n = ts.len() as u64;
        ResonanceSet {
            disp,
            domain,
            multipliers: None,
            solutions: Solutions::Triads(ts),
            counts: Counts {
                total: n,
                scale: n,
                angle: 0,
            },
        }
    }

    pub fn count_only(disp: DispersionId, domain: SpectralDomain, counts: Counts) -> Self {
        ResonanceSet {
            disp,
            domain,
            multipliers: None,
            solutions: Solutions::CountOnly,
            counts,
        }
    }

    pub fn len(&self) -> u64 {
        self.counts.total
    }

    pub fn is_empty(&self) -> bool {
        self.counts.total == 0
    }

    pub fn is_enumerated(&self) -> bool {
        !matches!(self.solutions, Solutions::CountOnly)
    }

    pub fn quartets(&self) -> &[Quartet] {
        match &self.solutions {
            Solutions::Quartets(q) => q,
            _ => &[],
        }
    }

    pub fn triads(&self) -> &[Triad] {
        match &self.solutions {
            Solutions::Triads(t) => t,
            _ => &[],
        }
    }

    /// Union of two enumerated quartet sets over the same domain.
    pub fn union(&self, other: &ResonanceSet) -> Result<ResonanceSet> {
        if self.domain != other.domain || self.disp != other.disp {
            return Err(Error::Validation(
                "cannot merge sets from different domains or dispersions".into(),
            ));
        }
        match (&self.solutions, &other.solutions) {
            (Solutions::Quartets(a), Solutions::Quartets(b)) => {
                let all = a.iter().chain(b.iter()).cloned().collect();
                Ok(ResonanceSet::from_quartets(self.disp, self.domain, all))
            }
            (Solutions::Triads(a), Solutions::Triads(b)) => {
                let all = a.iter().chain(b.iter()).cloned().collect();
                Ok(ResonanceSet::from_triads(self.disp, self.domain, all))
            }
            _ => Err(Error::Validation(
                "union requires two enumerated sets of the same arity".into(),
            )),
        }
    }

    pub fn with_multipliers(mut self, p: Option<Vec<i64>>) -> Self {
        self.multipliers = p;
        self
    }
}

/// Whether a side of a resonance may repeat a vector (`2k₁ = k₃ + k₄`).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideConvention {
    /// Every side holds distinct vectors.
    #[default]
    Distinct,
    /// Repeated vectors are allowed; only multiset-equal sides are trivial.
    AllowRepeats,
}

impl SideConvention {
    pub fn name(self) -> &'static str {
        match self {
            SideConvention::Distinct => "distinct",
            SideConvention::AllowRepeats => "allow-repeats",
        }
    }

    pub fn admits_quartet(self, q: &Quartet) -> bool {
        self == SideConvention::AllowRepeats
            || (q.side_a[0] != q.side_a[1] && q.side_b[0] != q.side_b[1])
    }

    pub fn admits_triad(self, t: &Triad) -> bool {
        self == SideConvention::AllowRepeats || t.k1 != t.k2
    }
}

impl fmt::Display for SideConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SideConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "distinct" => Ok(SideConvention::Distinct),
            "allow-repeats" => Ok(SideConvention::AllowRepeats),
            _ => Err(Error::Usage(format!(
                "unknown side convention '{s}' (distinct or allow-repeats)"
            ))),
        }
    }
}
