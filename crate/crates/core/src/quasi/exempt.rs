use crate::lattice::SpectralDomain;
use crate::solver::{solve_gravity_scale, Form, Kind, Quartet, SideConvention};

/// True when every member frequency is an integer (Form I with `q = 1`); such
/// solutions have no global lower bound on the width of nearby
/// quasi-resonances.
pub fn global_boundary_exempt(q: &Quartet) -> bool {
    q.form == Form::I && q.kernels == [1]
}

/// Scale quartets of `dom` without a global lower bound.
pub fn count_exempt_scale(dom: &SpectralDomain, conv: SideConvention) -> u64 {
    let set = solve_gravity_scale(dom, conv);
    set.quartets()
        .iter()
        .filter(|q| q.kind == Kind::Scale && global_boundary_exempt(q))
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::WaveVector;
    use crate::solver::classify_solution;

    #[test]
    fn exemption_examples() {
        let v = WaveVector::new;
        let fig =
            classify_solution([v(64, 0), v(135, 180)], [v(80, 60), v(119, 120)], None).unwrap();
        assert!(global_boundary_exempt(&fig));
        let s = classify_solution([v(-80, -76), v(980, 931)], [v(180, 171), v(720, 684)], None)
            .unwrap();
        assert!(!global_boundary_exempt(&s));
        let a = classify_solution([v(-1, 4), v(2, -5)], [v(-4, 1), v(5, -2)], None).unwrap();
        assert!(!global_boundary_exempt(&a));
        assert_eq!(
            count_exempt_scale(&SpectralDomain::full(1), SideConvention::Distinct),
            0
        );
    }
}
