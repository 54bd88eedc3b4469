//! Classification of candidate quartets and participation degrees.

use serde::Serialize;

use super::angle::angle_degree;
use super::types::{Kind, Quartet, ResonanceSet};
use crate::lattice::{frequency, Dispersion, DispersionId, WaveVector};
use crate::{Error, Result};

/// Validates `side_a ⇒ side_b` as an exact gravity-wave resonance and
/// returns it in canonical form with its kind, form and kernels.
pub fn classify_solution(
    side_a: [WaveVector; 2],
    side_b: [WaveVector; 2],
    multipliers: Option<&[i64]>,
) -> Result<Quartet> {
    let d = Dispersion::gravity4();
    let members = [side_a[0], side_a[1], side_b[0], side_b[1]];
    if members.iter().any(|k| k.is_zero()) {
        return Err(Error::Validation("the zero vector has no frequency".into()));
    }
    let forms = [0, 1, 2, 3].map(|i| frequency(&d, members[i]));
    let forms = [
        forms[0].clone()?,
        forms[1].clone()?,
        forms[2].clone()?,
        forms[3].clone()?,
    ];
    Quartet::from_parts(side_a, side_b, forms, multipliers)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Participation {
    pub k: WaveVector,
    pub scale: u64,
    pub angle: u64,
}

/// Number of quartets of each kind containing `k`.
///
/// The scale degree is read from `scale`, an enumerated scale set. The
/// angle degree is computed in closed form on the same domain, so it never
/// needs the (very large) angle set itself.
pub fn participation(k: WaveVector, scale: &ResonanceSet) -> Result<Participation> {
    if scale.disp != DispersionId::Gravity4 {
        return Err(Error::Validation(
            "participation is defined for gravity4 quartet sets".into(),
        ));
    }
    if !scale.domain.contains(k) {
        return Err(Error::Domain(format!("{k} is outside {}", scale.domain)));
    }
    let scale_degree = scale
        .quartets()
        .iter()
        .filter(|q| q.kind == Kind::Scale && q.contains(k))
        .count() as u64;
    Ok(Participation {
        k,
        scale: scale_degree,
        angle: angle_degree(&scale.domain, k)?,
    })
}

/// Number of solutions of an enumerated set containing `k`.
pub fn degree_in(set: &ResonanceSet, k: WaveVector) -> u64 {
    let q = set.quartets().iter().filter(|q| q.contains(k)).count();
    let t = set.triads().iter().filter(|t| t.contains(k)).count();
    (q + t) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_gravity_scale, Form, SideConvention};
    use crate::SpectralDomain;

    fn v(m: i32, n: i32) -> WaveVector {
        WaveVector::new(m, n)
    }

    #[test]
    fn classifies_the_three_examples() {
        let q = classify_solution([v(-80, -76), v(980, 931)], [v(180, 171), v(720, 684)], None)
            .unwrap();
        assert_eq!((q.kind, q.form), (Kind::Scale, Form::I));
        assert_eq!(q.kernels, vec![761]);
        assert_eq!(q.gammas, [2, 7, 3, 6]);

        let q = classify_solution([v(-1, 4), v(2, -5)], [v(-4, 1), v(5, -2)], None).unwrap();
        assert_eq!((q.kind, q.form), (Kind::Angle, Form::II));
        assert_eq!(q.kernels, vec![17, 29]);

        let q = classify_solution([v(-1, -1), v(1, 1)], [v(-1, 1), v(1, -1)], None).unwrap();
        assert_eq!((q.kind, q.form), (Kind::Angle, Form::I));
        assert_eq!(q.kernels, vec![2]);
    }

    #[test]
    fn rejects_non_resonant_input() {
        assert!(classify_solution([v(1, 0), v(0, 1)], [v(1, 1), v(0, 0)], None).is_err());
        assert!(classify_solution([v(1, 0), v(1, 2)], [v(2, 0), v(0, 2)], None).is_err());
    }

    #[test]
    fn small_domain_participation() {
        let s = solve_gravity_scale(&SpectralDomain::full(1), SideConvention::Distinct);
        let p = participation(v(1, 0), &s).unwrap();
        assert_eq!((p.scale, p.angle), (0, 3));
        assert!(matches!(participation(v(2, 0), &s), Err(Error::Domain(_))));
    }
}
