use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{RadicalForm, WaveVector};
use crate::arith::{decompose_factored, Sieve};
use crate::{Error, Result};

/// The closed registry of dispersion laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DispersionId {
    /// `ω = (m²+n²)^(1/4)`, four-wave.
    Gravity4,
    /// `ω = 1/√(m²+n²)`, three-wave.
    Planetary3,
    /// `ω = (m²+n²)^(3/4)`, three-wave.
    Capillary3,
    /// `ω = m/(n(n+1))`, three-wave.
    Rossby3,
}

impl DispersionId {
    pub const ALL: [DispersionId; 4] = [
        DispersionId::Gravity4,
        DispersionId::Planetary3,
        DispersionId::Capillary3,
        DispersionId::Rossby3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DispersionId::Gravity4 => "gravity4",
            DispersionId::Planetary3 => "planetary3",
            DispersionId::Capillary3 => "capillary3",
            DispersionId::Rossby3 => "rossby3",
        }
    }

    pub fn order(self) -> usize {
        match self {
            DispersionId::Gravity4 => 4,
            _ => 3,
        }
    }

    /// Frequency depends on `m² + n²` only.
    pub fn is_isotropic(self) -> bool {
        self != DispersionId::Rossby3
    }
}

impl fmt::Display for DispersionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DispersionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DispersionId::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown dispersion '{s}' (expected gravity4, planetary3, capillary3 or rossby3)")))
    }
}

/// Which vector components the interaction conserves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conservation {
    Both,
    FirstOnly,
    SecondOnly,
}

impl Conservation {
    pub fn holds(self, lhs: (i64, i64), rhs: (i64, i64)) -> bool {
        match self {
            Conservation::Both => lhs == rhs,
            Conservation::FirstOnly => lhs.0 == rhs.0,
            Conservation::SecondOnly => lhs.1 == rhs.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dispersion {
    pub id: DispersionId,
    pub signs: Vec<i8>,
    pub conservation: Conservation,
}

impl From<DispersionId> for Dispersion {
    fn from(id: DispersionId) -> Self {
        let signs = if id.order() == 4 {
            vec![1, 1, -1, -1]
        } else {
            vec![1, 1, -1]
        };
        Dispersion {
            id,
            signs,
            conservation: Conservation::Both,
        }
    }
}

impl Dispersion {
    pub fn gravity4() -> Self {
        DispersionId::Gravity4.into()
    }
    pub fn planetary3() -> Self {
        DispersionId::Planetary3.into()
    }
    pub fn capillary3() -> Self {
        DispersionId::Capillary3.into()
    }
    pub fn rossby3() -> Self {
        DispersionId::Rossby3.into()
    }

    pub fn order(&self) -> usize {
        self.signs.len()
    }

    pub fn has_default_signs(&self) -> bool {
        *self
            == Dispersion {
                conservation: self.conservation,
                ..self.id.into()
            }
    }

    /// Whether `ω(k)` is defined.
    pub fn admits(&self, k: WaveVector) -> bool {
        !k.is_zero() && (self.id != DispersionId::Rossby3 || k.n >= 1)
    }

    /// Root order and exponent sign of the radical produced for a norm.
    pub fn radical_shape(&self) -> Option<(u32, u32, i8)> {
        // (power applied to the norm, root order, exponent sign)
        match self.id {
            DispersionId::Gravity4 => Some((1, 4, 1)),
            DispersionId::Planetary3 => Some((1, 2, -1)),
            DispersionId::Capillary3 => Some((3, 4, 1)),
            DispersionId::Rossby3 => None,
        }
    }

    /// Exact form of `ω` on the circle of squared radius `norm`, given the
    /// factorisation of `norm`. `None` for anisotropic laws.
    pub fn norm_form(&self, factors: &[(u64, u32)]) -> Option<RadicalForm> {
        let (power, r, sign) = self.radical_shape()?;
        let (gamma, kernel) = decompose_factored(factors, power, r);
        let gamma = gamma as i128;
        let coeff = if sign > 0 {
            Ratio::from_integer(gamma)
        } else {
            Ratio::new(1, gamma)
        };
        Some(RadicalForm::new(coeff, kernel, r, sign))
    }

    /// Exact frequency `ω(k)`.
    pub fn frequency(&self, k: WaveVector) -> Result<RadicalForm> {
        self.frequency_with(&Sieve::new(2), k)
    }

    pub fn frequency_with(&self, sieve: &Sieve, k: WaveVector) -> Result<RadicalForm> {
        if !self.admits(k) {
            return Err(Error::Domain(format!(
                "{k} is not a valid wave vector for {}",
                self.id
            )));
        }
        if self.id == DispersionId::Rossby3 {
            let n = k.n as i128;
            return Ok(RadicalForm::rational(Ratio::new(k.m as i128, n * (n + 1))));
        }
        Ok(self
            .norm_form(&sieve.factor(k.norm2()))
            .expect("isotropic dispersion"))
    }
}

/// Exact frequency of `k` under `d`.
pub fn frequency(d: &Dispersion, k: WaveVector) -> Result<RadicalForm> {
    d.frequency(k)
}
