use num_rational::Ratio;

use super::radical::{combine, KernelKey};
use super::{Dispersion, RadicalForm, WaveVector};
use crate::precision::{Certified, Interval, PrecisionConfig};
use crate::{Error, Result};

/// Frequency mismatch of a tuple: an exact zero decision plus a certified
/// magnitude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detuning {
    pub is_exact_zero: bool,
    /// Signed value of `Σ sᵢ pᵢ ωᵢ`.
    pub value: Certified,
    /// `|value|`.
    pub magnitude: Certified,
}

/// Evaluates `Σ wᵢ · formᵢ`. The zero decision is made on the kernel-grouped
/// rational coefficients; the numeric enclosure is refined until it meets
/// the configured accuracy and separates a nonzero value from zero.
pub fn evaluate_terms(terms: &[(i64, RadicalForm)], prec: &PrecisionConfig) -> Result<Detuning> {
    let groups = combine(terms)?;
    if groups.is_empty() {
        return Ok(Detuning {
            is_exact_zero: true,
            value: Certified::zero(),
            magnitude: Certified::zero(),
        });
    }
    let value = enclose_groups(&groups, prec)?;
    let magnitude = Certified {
        enclosure: value.abs(),
    };
    Ok(Detuning {
        is_exact_zero: false,
        value: Certified { enclosure: value },
        magnitude,
    })
}

/// Certified enclosure of a nonzero kernel-grouped sum.
pub fn enclose_groups(
    groups: &[(KernelKey, Ratio<i128>)],
    prec: &PrecisionConfig,
) -> Result<Interval> {
    let mut bits = prec.bits.max(8);
    loop {
        let mut acc = Interval::zero(bits);
        for (key, c) in groups {
            let f = RadicalForm::new(*c, key.kernel, key.root, key.sign);
            acc = acc.add(&f.enclose(bits));
        }
        if !acc.contains_zero() && acc.error_bound() < prec.max_abs_error {
            return Ok(acc);
        }
        if bits >= prec.max_bits {
            return Err(Error::Precision(format!(
                "could not certify detuning within {:e} using {} fractional bits",
                prec.max_abs_error, prec.max_bits
            )));
        }
        bits = (bits * 2).min(prec.max_bits);
    }
}

/// Detuning `Σ sᵢ pᵢ ω(kᵢ)` of a tuple. Missing multipliers default to one
/// and missing signs to the dispersion's pattern.
pub fn detuning(
    d: &Dispersion,
    tuple: &[WaveVector],
    multipliers: Option<&[i64]>,
    signs: Option<&[i8]>,
    prec: &PrecisionConfig,
) -> Result<Detuning> {
    let signs = signs.unwrap_or(&d.signs);
    if signs.len() != tuple.len() {
        return Err(Error::Validation(format!(
            "{} vectors but {} signs",
            tuple.len(),
            signs.len()
        )));
    }
    if let Some(p) = multipliers {
        if p.len() != tuple.len() {
            return Err(Error::Validation(format!(
                "{} vectors but {} multipliers",
                tuple.len(),
                p.len()
            )));
        }
    }
    let mut terms = Vec::with_capacity(tuple.len());
    for (i, k) in tuple.iter().enumerate() {
        let p = multipliers.map_or(1, |p| p[i]);
        terms.push((signs[i] as i64 * p, d.frequency(*k)?));
    }
    evaluate_terms(&terms, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(list: &[(i32, i32)]) -> Vec<WaveVector> {
        list.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn fig1_quartet_is_exact() {
        let t = vs(&[(64, 0), (135, 180), (80, 60), (119, 120)]);
        let r = detuning(
            &Dispersion::gravity4(),
            &t,
            None,
            None,
            &PrecisionConfig::default(),
        )
        .unwrap();
        assert!(r.is_exact_zero);
        assert!(r.magnitude.is_zero());
    }

    #[test]
    fn nonzero_example() {
        let t = vs(&[(1, 0), (0, 1), (2, 1), (-1, 0)]);
        let r = detuning(
            &Dispersion::gravity4(),
            &t,
            None,
            None,
            &PrecisionConfig::default(),
        )
        .unwrap();
        assert!(!r.is_exact_zero);
        // 1 + 1 - 5^(1/4) - 1, evaluated independently in f64
        let want = (1.0f64 - 5f64.powf(0.25)).abs();
        assert!((r.magnitude.to_f64() - want).abs() < 1e-14);
        assert!((r.magnitude.to_f64() - 0.4953488).abs() < 1e-7);
        assert!(r.magnitude.error_bound() < 1e-30);
    }

    #[test]
    fn identical_sides_cancel() {
        let t = vs(&[(3, 4), (1, 2), (3, 4), (1, 2)]);
        let r = detuning(
            &Dispersion::gravity4(),
            &t,
            None,
            None,
            &PrecisionConfig::default(),
        )
        .unwrap();
        assert!(r.is_exact_zero);
    }

    #[test]
    fn multipliers_fold_into_coefficients() {
        // 2·ω(1,0) - ω(2,0)·... : 2·1 - √2·√2 = 0 with (2,0) norm 4 → ω = √2
        let t = vs(&[(1, 0), (1, 1), (1, 1)]);
        let r = detuning(
            &Dispersion::gravity4(),
            &t,
            Some(&[2, 0, 0]),
            Some(&[1, 1, -1]),
            &PrecisionConfig::default(),
        )
        .unwrap();
        assert!(!r.is_exact_zero);
        assert!((r.magnitude.to_f64() - 2.0).abs() < 1e-15);
        let t = vs(&[(2, 0), (1, 1)]);
        let r = detuning(
            &Dispersion::gravity4(),
            &t,
            Some(&[1, 1]),
            Some(&[1, -1]),
            &PrecisionConfig::default(),
        )
        .unwrap();
        // 4^(1/4) = 2^(1/2) vs 2^(1/4): distinct
        assert!(!r.is_exact_zero);
    }

    #[test]
    fn precision_error_is_explicit() {
        let t = vs(&[(1, 0), (0, 1), (2, 1), (-1, 0)]);
        let tight = PrecisionConfig {
            bits: 16,
            max_bits: 32,
            max_abs_error: 1e-30,
        };
        assert!(matches!(
            detuning(&Dispersion::gravity4(), &t, None, None, &tight),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn length_mismatch() {
        let t = vs(&[(1, 0), (0, 1)]);
        assert!(matches!(
            detuning(
                &Dispersion::gravity4(),
                &t,
                None,
                None,
                &PrecisionConfig::default()
            ),
            Err(Error::Validation(_))
        ));
    }
}
