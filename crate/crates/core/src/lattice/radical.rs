use std::fmt;

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::precision::Interval;

/// Exact frequency `coeff · kernel^(sign/root)` with an r-th-power-free kernel.
///
/// Rational values always carry `kernel = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RadicalForm {
    pub coeff: Ratio<i128>,
    pub kernel: u128,
    pub root: u32,
    pub sign: i8,
}

/// Equivalence class under which coefficients of distinct forms may be summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KernelKey {
    pub kernel: u128,
    pub root: u32,
    pub sign: i8,
}

impl KernelKey {
    pub const RATIONAL: KernelKey = KernelKey {
        kernel: 1,
        root: 1,
        sign: 1,
    };
}

impl RadicalForm {
    pub fn rational(coeff: Ratio<i128>) -> Self {
        RadicalForm {
            coeff,
            kernel: 1,
            root: 1,
            sign: 1,
        }
    }

    pub fn new(coeff: Ratio<i128>, kernel: u128, root: u32, sign: i8) -> Self {
        if kernel == 1 {
            // q^(±1/r) = 1
            return RadicalForm {
                coeff,
                kernel: 1,
                root,
                sign,
            };
        }
        RadicalForm {
            coeff,
            kernel,
            root,
            sign,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.kernel == 1
    }

    pub fn key(&self) -> KernelKey {
        if self.kernel == 1 {
            KernelKey::RATIONAL
        } else {
            KernelKey {
                kernel: self.kernel,
                root: self.root,
                sign: self.sign,
            }
        }
    }

    pub fn scaled(&self, by: i64) -> Self {
        RadicalForm {
            coeff: self.coeff * Ratio::from_integer(by as i128),
            ..*self
        }
    }

    pub fn enclose(&self, bits: u32) -> Interval {
        if self.kernel == 1 {
            Interval::exact_ratio(&self.coeff, bits)
        } else {
            Interval::root(self.kernel, self.root, self.sign, bits).scale(&self.coeff)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.numer().to_f64().unwrap() / self.coeff.denom().to_f64().unwrap();
        if self.kernel == 1 {
            c
        } else {
            c * (self.kernel as f64).powf(self.sign as f64 / self.root as f64)
        }
    }

    /// Integer coefficient when the denominator is one.
    pub fn integer_coeff(&self) -> Option<i128> {
        self.coeff.is_integer().then(|| *self.coeff.numer())
    }
}

fn ratio_text(r: &Ratio<i128>, parens: bool) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if parens {
        format!("({}/{})", r.numer(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text: `7*761^(1/4)`, `(1/5)*2^(-1/2)`, `8`, `1/5`.
impl fmt::Display for RadicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kernel == 1 {
            return f.write_str(&ratio_text(&self.coeff, false));
        }
        let exp = if self.sign < 0 {
            format!("-1/{}", self.root)
        } else {
            format!("1/{}", self.root)
        };
        if self.coeff.is_one() {
            write!(f, "{}^({exp})", self.kernel)
        } else {
            write!(
                f,
                "{}*{}^({exp})",
                ratio_text(&self.coeff, true),
                self.kernel
            )
        }
    }
}

/// Sum of `weight · form` terms grouped by kernel: the exact value as a list
/// of nonzero `(kernel class, rational coefficient)` pairs.
pub fn combine(terms: &[(i64, RadicalForm)]) -> crate::Result<Vec<(KernelKey, Ratio<i128>)>> {
    let mut groups: Vec<(KernelKey, Ratio<i128>)> = Vec::new();
    for (w, form) in terms {
        let c = form
            .coeff
            .numer()
            .checked_mul(*w as i128)
            .map(|n| Ratio::new(n, *form.coeff.denom()))
            .ok_or_else(|| crate::Error::Overflow("coefficient scaling".into()))?;
        let key = form.key();
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, acc)) => *acc = checked_ratio_add(acc, &c)?,
            None => groups.push((key, c)),
        }
    }
    groups.retain(|(_, c)| !c.is_zero());
    groups.sort_by_key(|g| g.0);
    Ok(groups)
}

fn checked_ratio_add(a: &Ratio<i128>, b: &Ratio<i128>) -> crate::Result<Ratio<i128>> {
    use num_integer::Integer;
    let overflow = || crate::Error::Overflow("coefficient sum".into());
    let l = a.denom().lcm(b.denom());
    let x = a.numer().checked_mul(l / a.denom()).ok_or_else(overflow)?;
    let y = b.numer().checked_mul(l / b.denom()).ok_or_else(overflow)?;
    Ok(Ratio::new(x.checked_add(y).ok_or_else(overflow)?, l))
}
