//! Integer number theory: prime sieving, r-th-power-free decomposition and
//! lattice points on lines.

use num_integer::Integer;

/// Smallest-prime-factor table up to a fixed limit, with trial division
/// beyond it.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2) as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                if let Some(start) = i.checked_mul(i) {
                    let mut j = start;
                    while j <= limit {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Prime factorisation as (prime, exponent) pairs in increasing prime order.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        let push = |p: u64, out: &mut Vec<(u64, u32)>| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        if n > self.limit() {
            let mut p = 2u64;
            while p * p <= n && n > self.limit() {
                while n.is_multiple_of(p) {
                    push(p, &mut out);
                    n /= p;
                }
                p += if p == 2 { 1 } else { 2 };
            }
            if n > self.limit() {
                // n has no factor below its square root
                push(n, &mut out);
                return out;
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            push(p, &mut out);
            n /= p;
        }
        out
    }
}

/// Radical kernel decomposition `power · N = γ^r · q` with `q` free of r-th
/// powers, computed from a factorisation of `N` so that `N^power` never has
/// to be formed.
pub fn decompose_factored(factors: &[(u64, u32)], power: u32, r: u32) -> (u128, u128) {
    let mut gamma: u128 = 1;
    let mut kernel: u128 = 1;
    for &(p, e) in factors {
        let total = e * power;
        gamma *= (p as u128).pow(total / r);
        kernel *= (p as u128).pow(total % r);
    }
    (gamma, kernel)
}

/// Writes `n = γ^r · q` with `q` r-th-power-free.
///
/// Panics if `n == 0` or `r` is not 2 or 4.
pub fn radical_decompose(n: u64, r: u32) -> (u64, u64) {
    assert!(n >= 1, "radical_decompose needs n >= 1");
    assert!(r == 2 || r == 4, "root order must be 2 or 4");
    let sieve = Sieve::new(isqrt(n).min(1 << 24) + 1);
    let (g, q) = decompose_factored(&sieve.factor(n), 1, r);
    (g as u64, q as u64)
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Extended Euclid on signed integers: returns `(g, x, y)` with
/// `a·x + b·y = g = gcd(a, b) ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Inclusive integer range `[lo, hi]`; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: i64,
    pub hi: i64,
}

impl Span {
    pub fn new(lo: i64, hi: i64) -> Self {
        Span { lo, hi }
    }
    pub fn len(&self) -> u64 {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo + 1) as u64
        }
    }
    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
    pub fn contains(&self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Integer points of the line `a·x + b·y = c` in a box, parametrised as
/// `(x0 + t·sx, y0 + t·sy)` for `t` in `ts`.
#[derive(Debug, Clone, Copy)]
pub struct LinePoints {
    pub x0: i64,
    pub y0: i64,
    pub sx: i64,
    pub sy: i64,
    pub ts: Span,
}

impl LinePoints {
    pub fn count(&self) -> u64 {
        self.ts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.ts.lo..=self.ts.hi).map(move |t| (self.x0 + t * self.sx, self.y0 + t * self.sy))
    }
}

fn t_range(base: i64, step: i64, span: Span) -> Span {
    // base + t·step ∈ span
    if step == 0 {
        return if span.contains(base) {
            Span::new(i64::MIN / 4, i64::MAX / 4)
        } else {
            Span::new(1, 0)
        };
    }
    let (lo, hi) = if step > 0 {
        (
            Integer::div_ceil(&(span.lo - base), &step),
            Integer::div_floor(&(span.hi - base), &step),
        )
    } else {
        let s = -step;
        (
            Integer::div_ceil(&(base - span.hi), &s),
            Integer::div_floor(&(base - span.lo), &s),
        )
    };
    Span::new(lo, hi)
}

/// Solves `a·x + b·y = c` for integers within `xs × ys`. `(a, b) ≠ (0, 0)`.
pub fn line_points(a: i64, b: i64, c: i64, xs: Span, ys: Span) -> LinePoints {
    assert!(a != 0 || b != 0);
    let empty = LinePoints {
        x0: 0,
        y0: 0,
        sx: 0,
        sy: 0,
        ts: Span::new(1, 0),
    };
    let (g, u, v) = ext_gcd(a, b);
    if c % g != 0 || xs.is_empty() || ys.is_empty() {
        return empty;
    }
    let k = c / g;
    let (x0, y0) = (
        (u as i128 * k as i128) as i64,
        (v as i128 * k as i128) as i64,
    );
    let (sx, sy) = (b / g, -a / g);
    let tx = t_range(x0, sx, xs);
    let ty = t_range(y0, sy, ys);
    let ts = Span::new(tx.lo.max(ty.lo), tx.hi.min(ty.hi));
    // shift the base point into the range to keep the coordinates small
    if ts.is_empty() {
        return empty;
    }
    let shift = ts.lo;
    LinePoints {
        x0: x0 + shift * sx,
        y0: y0 + shift * sy,
        sx,
        sy,
        ts: Span::new(0, ts.hi - shift),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_examples() {
        assert_eq!(radical_decompose(12176, 4), (2, 761));
        assert_eq!(radical_decompose(4096, 4), (8, 1));
        assert_eq!(radical_decompose(17, 4), (1, 17));
        assert_eq!(radical_decompose(50625, 4), (15, 1));
        assert_eq!(radical_decompose(1827161, 4), (7, 761));
        assert_eq!(radical_decompose(25, 2), (5, 1));
        assert_eq!(radical_decompose(1, 2), (1, 1));
        assert_eq!(radical_decompose(72, 2), (6, 2));
    }

    #[test]
    fn large_prime_beyond_sieve() {
        let s = Sieve::new(100);
        assert_eq!(s.factor(1_000_003), vec![(1_000_003, 1)]);
        assert_eq!(s.factor(2 * 2 * 1_000_003), vec![(2, 2), (1_000_003, 1)]);
        assert_eq!(s.factor(97 * 101), vec![(97, 1), (101, 1)]);
    }

    #[test]
    fn cube_decomposition_without_cubing() {
        // (m²+n²)³ for N = 2·3² = 18: 18³ = 2³·3⁶ = 3⁴ · (2³·3²)
        let s = Sieve::new(100);
        assert_eq!(decompose_factored(&s.factor(18), 3, 4), (3, 72));
    }

    #[test]
    fn line_points_match_enumeration() {
        for (a, b, c) in [
            (2, 4, 10),
            (3, -5, 7),
            (0, 3, 6),
            (4, 0, -8),
            (6, 9, 4),
            (-7, -7, 14),
        ] {
            let xs = Span::new(-9, 11);
            let ys = Span::new(-12, 5);
            let lp = line_points(a, b, c, xs, ys);
            let mut got: Vec<_> = lp.iter().collect();
            got.sort();
            let mut want = Vec::new();
            for x in xs.lo..=xs.hi {
                for y in ys.lo..=ys.hi {
                    if a * x + b * y == c {
                        want.push((x, y));
                    }
                }
            }
            assert_eq!(got, want, "line {a}x+{b}y={c}");
            assert_eq!(lp.count() as usize, want.len());
        }
    }
}
