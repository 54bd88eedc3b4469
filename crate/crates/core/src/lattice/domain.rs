use std::fmt;

use serde::{Deserialize, Serialize};

use super::WaveVector;
use crate::arith::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainMode {
    /// Every `(m, n) ≠ (0, 0)` with `|m|, |n| ≤ D`.
    FullSquare,
    /// `0 < |m|, |n| ≤ D`: the full square with both coordinate axes removed.
    NoAxes,
    /// `0 < m ≤ D_m`, `0 < n ≤ D_n`.
    PositiveQuadrant,
}

impl std::str::FromStr for DomainMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "full-square" | "full" => Ok(DomainMode::FullSquare),
            "no-axes" => Ok(DomainMode::NoAxes),
            "positive-quadrant" | "quadrant" => Ok(DomainMode::PositiveQuadrant),
            _ => Err(crate::Error::Usage(format!(
                "unknown domain mode '{s}' (expected full-square, no-axes or positive-quadrant)"
            ))),
        }
    }
}

impl fmt::Display for DomainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainMode::FullSquare => "full-square",
            DomainMode::NoAxes => "no-axes",
            DomainMode::PositiveQuadrant => "positive-quadrant",
        })
    }
}

/// Finite set of admissible wave vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpectralDomain {
    pub mode: DomainMode,
    pub dm: i32,
    pub dn: i32,
}

impl SpectralDomain {
    pub fn full(d: i32) -> Self {
        SpectralDomain {
            mode: DomainMode::FullSquare,
            dm: d,
            dn: d,
        }
    }

    pub fn no_axes(d: i32) -> Self {
        SpectralDomain {
            mode: DomainMode::NoAxes,
            dm: d,
            dn: d,
        }
    }

    pub fn quadrant(dm: i32, dn: i32) -> Self {
        SpectralDomain {
            mode: DomainMode::PositiveQuadrant,
            dm,
            dn,
        }
    }

    pub fn new(mode: DomainMode, dm: i32, dn: i32) -> Self {
        SpectralDomain { mode, dm, dn }
    }

    /// Largest coordinate bound, the "D" of the domain.
    pub fn half_width(&self) -> i32 {
        self.dm.max(self.dn)
    }

    pub fn contains(&self, k: WaveVector) -> bool {
        let in_box = k.m.abs() <= self.dm && k.n.abs() <= self.dn;
        match self.mode {
            DomainMode::FullSquare => in_box && !k.is_zero(),
            DomainMode::NoAxes => in_box && k.m != 0 && k.n != 0,
            DomainMode::PositiveQuadrant => in_box && k.m > 0 && k.n > 0,
        }
    }

    pub fn m_span(&self) -> Span {
        match self.mode {
            DomainMode::PositiveQuadrant => Span::new(1, self.dm as i64),
            _ => Span::new(-self.dm as i64, self.dm as i64),
        }
    }

    pub fn n_span(&self) -> Span {
        match self.mode {
            DomainMode::PositiveQuadrant => Span::new(1, self.dn as i64),
            _ => Span::new(-self.dn as i64, self.dn as i64),
        }
    }

    /// Members in canonical lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = WaveVector> + '_ {
        let (ms, ns) = (self.m_span(), self.n_span());
        (ms.lo..=ms.hi).flat_map(move |m| {
            (ns.lo..=ns.hi)
                .map(move |n| WaveVector::new(m as i32, n as i32))
                .filter(move |k| self.contains(*k))
        })
    }

    pub fn size(&self) -> u64 {
        let (w, h) = (2 * self.dm as u64 + 1, 2 * self.dn as u64 + 1);
        match self.mode {
            DomainMode::FullSquare => w * h - 1,
            DomainMode::NoAxes => (w - 1) * (h - 1),
            DomainMode::PositiveQuadrant => self.dm.max(0) as u64 * self.dn.max(0) as u64,
        }
    }

    /// Invariant under all eight lattice symmetries.
    pub fn is_symmetric(&self) -> bool {
        self.dm == self.dn && self.mode != DomainMode::PositiveQuadrant
    }

    /// Closed under `k ↦ -k`.
    pub fn is_centrally_symmetric(&self) -> bool {
        self.mode != DomainMode::PositiveQuadrant
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            DomainMode::FullSquare => "full-square",
            DomainMode::NoAxes => "no-axes",
            DomainMode::PositiveQuadrant => "positive-quadrant",
        }
    }
}

impl fmt::Display for SpectralDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            DomainMode::PositiveQuadrant => {
                write!(f, "{} Dm={} Dn={}", self.mode_name(), self.dm, self.dn)
            }
            _ => write!(f, "{} D={}", self.mode_name(), self.dm),
        }
    }
}
