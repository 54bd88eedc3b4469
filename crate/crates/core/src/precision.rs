//! Certified fixed-point arithmetic.
//!
//! A value is carried as an enclosure `[lo, hi] · 2^-bits` of big integers.
//! Every operation rounds outward, so the true value always lies inside the
//! interval and `hi - lo` is a rigorous error bound.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Precision budget for certified evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionConfig {
    /// Fractional bits used for the first evaluation attempt.
    pub bits: u32,
    /// Upper bound on fractional bits when refining.
    pub max_bits: u32,
    /// Required absolute error bound (half-width of the enclosure).
    pub max_abs_error: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            bits: 256,
            max_bits: 4096,
            max_abs_error: 1e-30,
        }
    }
}

impl PrecisionConfig {
    pub fn with_bits(bits: u32) -> Self {
        PrecisionConfig {
            bits,
            max_bits: bits.max(4096),
            ..Default::default()
        }
    }

    pub fn doubled(&self) -> Self {
        PrecisionConfig {
            bits: self.bits * 2,
            max_bits: self.max_bits.max(self.bits * 2),
            ..*self
        }
    }
}

/// Closed interval `[lo, hi] / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl Interval {
    pub fn zero(bits: u32) -> Self {
        Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            bits,
        }
    }

    pub fn exact_ratio(r: &Ratio<i128>, bits: u32) -> Self {
        let num = BigInt::from(*r.numer()) << bits as usize;
        let den = BigInt::from(*r.denom());
        let (lo, hi) = div_outward(&num, &num, &den);
        Interval { lo, hi, bits }
    }

    /// Enclosure of `q^(1/r)` (`sign = +1`) or `q^(-1/r)` (`sign = -1`).
    pub fn root(q: u128, r: u32, sign: i8, bits: u32) -> Self {
        let q = BigInt::from(q);
        if sign >= 0 {
            let scaled = &q << (r * bits) as usize;
            let l = scaled.nth_root(r);
            let exact = l.pow(r) == scaled;
            let hi = if exact { l.clone() } else { &l + 1 };
            Interval { lo: l, hi, bits }
        } else {
            // floor(nth_root(floor(x))) == floor(nth_root(x)) for x ≥ 0
            let scaled = BigInt::one() << (r * bits) as usize;
            let (quot, rem) = scaled.div_rem(&q);
            let l = quot.nth_root(r);
            let exact = rem.is_zero() && l.pow(r) == quot;
            let hi = if exact { l.clone() } else { &l + 1 };
            Interval { lo: l, hi, bits }
        }
    }

    pub fn scale(&self, r: &Ratio<i128>) -> Self {
        let a = BigInt::from(*r.numer());
        let den = BigInt::from(*r.denom());
        let (x, y) = (&self.lo * &a, &self.hi * &a);
        let (mn, mx) = if x <= y { (x, y) } else { (y, x) };
        let (lo, hi) = div_outward(&mn, &mx, &den);
        Interval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    pub fn add(&self, other: &Interval) -> Self {
        assert_eq!(self.bits, other.bits);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Self {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = if -&self.lo > self.hi {
                -&self.lo
            } else {
                self.hi.clone()
            };
            Interval {
                lo: BigInt::zero(),
                hi: m,
                bits: self.bits,
            }
        }
    }

    /// Half-width, as an `f64` upper bound.
    pub fn error_bound(&self) -> f64 {
        let w = &self.hi - &self.lo;
        scaled_to_f64(&w, self.bits + 1) * (1.0 + 1e-12)
    }

    pub fn mid_f64(&self) -> f64 {
        scaled_to_f64(&(&self.lo + &self.hi), self.bits + 1)
    }

    /// Sign of the enclosed value if it is certain.
    pub fn certain_cmp_zero(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Certified comparison with another interval; `None` if they overlap.
    pub fn certain_cmp(&self, other: &Interval) -> Option<Ordering> {
        let (a, b) = align(self, other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else if a.lo == a.hi && b.lo == b.hi && a.lo == b.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        // exact conversion of the binary64 value
        let (mant, exp) = decode_f64(x);
        let v = BigInt::from(mant);
        let shift = exp + bits as i32;
        let v = if shift >= 0 {
            v << shift as usize
        } else {
            v >> (-shift) as usize
        };
        let exact =
            shift >= 0 || (BigInt::from(mant) % (BigInt::one() << (-shift) as usize)).is_zero();
        let hi = if exact { v.clone() } else { &v + 1 };
        Interval { lo: v, hi, bits }
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        if bits >= self.bits {
            let s = (bits - self.bits) as usize;
            Interval {
                lo: &self.lo << s,
                hi: &self.hi << s,
                bits,
            }
        } else {
            let s = (self.bits - bits) as usize;
            let lo = self.lo.div_floor(&(BigInt::one() << s));
            let hi = -((-&self.hi).div_floor(&(BigInt::one() << s)));
            Interval { lo, hi, bits }
        }
    }
}

fn align(a: &Interval, b: &Interval) -> (Interval, Interval) {
    let bits = a.bits.max(b.bits);
    (a.with_bits(bits), b.with_bits(bits))
}

fn div_outward(lo_num: &BigInt, hi_num: &BigInt, den: &BigInt) -> (BigInt, BigInt) {
    let lo = lo_num.div_floor(den);
    let hi = -((-hi_num).div_floor(den));
    (lo, hi)
}

fn decode_f64(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1 << 52) - 1)) as i64;
    if exp == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1 << 52)), exp - 1075)
    }
}

fn scaled_to_f64(v: &BigInt, bits: u32) -> f64 {
    let nbits = v.bits() as i64;
    if nbits <= 1000 {
        v.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(bits as i32))
    } else {
        let shift = (nbits - 60) as usize;
        let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - bits as i32)
    }
}

/// A certified real number: an enclosure produced by a successful
/// evaluation under a [`PrecisionConfig`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certified {
    pub enclosure: Interval,
}

impl Certified {
    pub fn zero() -> Self {
        Certified {
            enclosure: Interval::zero(0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.enclosure.lo.is_zero() && self.enclosure.hi.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure.mid_f64()
    }

    pub fn error_bound(&self) -> f64 {
        self.enclosure.error_bound()
    }

    pub fn bits(&self) -> u32 {
        self.enclosure.bits
    }

    /// Midpoint rendered in scientific notation with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let iv = &self.enclosure;
        let twice = &iv.lo + &iv.hi;
        to_scientific(&twice, iv.bits + 1, digits)
    }
}

impl fmt::Display for Certified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(30))
    }
}

/// `v / 2^bits` in scientific notation, rounded to nearest.
pub fn to_scientific(v: &BigInt, bits: u32, digits: usize) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = v.is_negative();
    let a = v.abs();
    let approx = scaled_to_f64(&a, bits);
    let mut exp10 = approx.log10().floor() as i64;
    // scaled = round(a · 10^(digits-1-exp10) / 2^bits), re-adjusted if it
    // lands outside [10^(digits-1), 10^digits)
    let render = |e: i64| -> BigInt {
        let k = digits as i64 - 1 - e;
        let num = if k >= 0 {
            &a * BigInt::from(10u32).pow(k as u32)
        } else {
            a.clone()
        };
        let den = if k >= 0 {
            BigInt::one() << bits as usize
        } else {
            (BigInt::one() << bits as usize) * BigInt::from(10u32).pow((-k) as u32)
        };
        let twice: BigInt = num * 2 + &den;
        twice.div_floor(&(den * 2))
    };
    let lower = BigInt::from(10u32).pow(digits as u32 - 1);
    let upper = &lower * 10;
    let mut scaled = render(exp10);
    for _ in 0..4 {
        if scaled >= upper {
            exp10 += 1;
        } else if scaled < lower {
            exp10 -= 1;
        } else {
            break;
        }
        scaled = render(exp10);
    }
    let s = scaled.to_string();
    let (head, tail) = s.split_at(1);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push_str(&format!("e{exp10}"));
    out
}

/// Fixed-point approximation with [`APPROX_BITS`] fractional bits, used by
/// the sorting and windowing passes. A stored value `a` satisfies
/// `a ≤ v·2^APPROX_BITS < a + 1`.
pub type Approx = i128;

pub const APPROX_BITS: u32 = 96;

/// `1 ulp` at [`APPROX_BITS`] as an `f64`.
pub fn approx_ulp() -> f64 {
    2f64.powi(-(APPROX_BITS as i32))
}

pub fn approx_to_f64(a: Approx) -> f64 {
    a as f64 * approx_ulp()
}

pub fn interval_floor_approx(iv: &Interval) -> Approx {
    let adj = iv.with_bits(APPROX_BITS);
    adj.lo
        .to_i128()
        .expect("frequency out of fixed-point range")
}
