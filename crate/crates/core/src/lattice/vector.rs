use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Integer mode pair `(m, n)`: one node of the spectral lattice.
///
/// Ordering is lexicographic on `(m, n)`, which is the canonical order used
/// throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i32; 2]", into = "[i32; 2]")]
pub struct WaveVector {
    pub m: i32,
    pub n: i32,
}

impl WaveVector {
    pub const fn new(m: i32, n: i32) -> Self {
        WaveVector { m, n }
    }

    /// Squared Euclidean norm `m² + n²`.
    pub fn norm2(self) -> u64 {
        let (m, n) = (self.m as i64, self.n as i64);
        (m * m + n * n) as u64
    }

    pub fn is_zero(self) -> bool {
        self.m == 0 && self.n == 0
    }

    pub fn scaled(self, p: i64) -> (i64, i64) {
        (self.m as i64 * p, self.n as i64 * p)
    }

    /// Image under one of the eight symmetries of the square lattice
    /// (`0..8`: four rotations, then the same composed with `m ↔ n`).
    pub fn symmetry(self, which: u8) -> Self {
        let (m, n) = (self.m, self.n);
        let (m, n) = if which >= 4 { (n, m) } else { (m, n) };
        match which % 4 {
            0 => WaveVector::new(m, n),
            1 => WaveVector::new(-n, m),
            2 => WaveVector::new(-m, -n),
            _ => WaveVector::new(n, -m),
        }
    }
}

/// Parses `"m,n"` (surrounding parentheses and spaces are allowed).
impl std::str::FromStr for WaveVector {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        let bad = || crate::Error::Usage(format!("cannot parse wave vector '{s}' (expected m,n)"));
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (m, n) = t.split_once(',').ok_or_else(bad)?;
        Ok(WaveVector::new(
            m.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        ))
    }
}

impl From<[i32; 2]> for WaveVector {
    fn from(v: [i32; 2]) -> Self {
        WaveVector::new(v[0], v[1])
    }
}

impl From<WaveVector> for [i32; 2] {
    fn from(v: WaveVector) -> Self {
        [v.m, v.n]
    }
}

impl From<(i32, i32)> for WaveVector {
    fn from(v: (i32, i32)) -> Self {
        WaveVector::new(v.0, v.1)
    }
}

impl Add for WaveVector {
    type Output = WaveVector;
    fn add(self, o: WaveVector) -> WaveVector {
        WaveVector::new(self.m + o.m, self.n + o.n)
    }
}

impl Sub for WaveVector {
    type Output = WaveVector;
    fn sub(self, o: WaveVector) -> WaveVector {
        WaveVector::new(self.m - o.m, self.n - o.n)
    }
}

impl Neg for WaveVector {
    type Output = WaveVector;
    fn neg(self) -> WaveVector {
        WaveVector::new(-self.m, -self.n)
    }
}

impl fmt::Display for WaveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}
