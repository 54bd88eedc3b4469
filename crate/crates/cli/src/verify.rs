//! The `verify` self-check table.

use std::time::Instant;

use resonate::arith::radical_decompose;
use resonate::cluster::{build_cluster_graph, components, iso_classes};
use resonate::quasi::{count_exempt_scale, n_profile, omega_d, DetuningMode, OmegaOptions};
use resonate::solver::{
    brute_force_oracle, count_angle, count_angle_closed_form, solve_gravity_scale,
    solve_three_wave, AngleOptions, Form, Quartet, ResonanceSet, SideConvention,
};
use resonate::{Dispersion, DispersionId, PrecisionConfig, Result, SpectralDomain};

pub struct Row {
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub secs: f64,
}

fn check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Row {
    let t = Instant::now();
    let (pass, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, e.to_string()),
    };
    Row {
        name: name.to_string(),
        pass,
        detail,
        secs: t.elapsed().as_secs_f64(),
    }
}

fn gravity_exact(dom: &SpectralDomain, conv: SideConvention) -> Result<ResonanceSet> {
    let opts = AngleOptions {
        enumerate: true,
        ..AngleOptions::default()
    };
    solve_gravity_scale(dom, conv).union(&count_angle(dom, &opts)?.set.expect("enumerated"))
}

/// Kernel pattern recomputed from the member norms alone.
fn form_from_norms(q: &Quartet) -> Option<Form> {
    let ker: Vec<u64> = q
        .members()
        .iter()
        .map(|k| radical_decompose(k.norm2(), 4).1)
        .collect();
    if ker.iter().all(|&k| k == ker[0]) {
        return Some(Form::I);
    }
    let pairs = (ker[0] == ker[2] && ker[1] == ker[3]) || (ker[0] == ker[3] && ker[1] == ker[2]);
    (ker[0] != ker[1] && pairs).then_some(Form::II)
}

pub fn run_checks(
    only: Option<DispersionId>,
    long: bool,
    conv: SideConvention,
    prec: &PrecisionConfig,
) -> Vec<Row> {
    let wants = |d: DispersionId| only.is_none_or(|o| o == d);
    let mut rows = Vec::new();

    if wants(DispersionId::Gravity4) {
        rows.push(check("oracle-equivalence gravity4 D<=12", || {
            for d in 1..=12 {
                let dom = SpectralDomain::full(d);
                let oracle = brute_force_oracle(&Dispersion::gravity4(), &dom, None, conv)?;
                if oracle != gravity_exact(&dom, conv)? {
                    return Ok((false, format!("sets differ at D={d}")));
                }
            }
            Ok((true, "D=1..12 full-square".into()))
        }));
        rows.push(check("structure-theorem D<=12", || {
            let dom = SpectralDomain::full(12);
            let set = brute_force_oracle(&Dispersion::gravity4(), &dom, None, conv)?;
            let bad = set
                .quartets()
                .iter()
                .filter(|q| form_from_norms(q) != Some(q.form))
                .count();
            let two = set.quartets().iter().filter(|q| q.form == Form::II).count();
            Ok((
                bad == 0,
                format!("{} quartets, {two} Form II, {bad} exceptions", set.len()),
            ))
        }));
        rows.push(check("plateau gravity4 D<=6", || {
            for d in 1..=6 {
                let dom = SpectralDomain::full(d);
                let opts = OmegaOptions {
                    precision: *prec,
                    conv,
                    ..OmegaOptions::default()
                };
                let om = omega_d(
                    &dom,
                    &Dispersion::gravity4(),
                    DetuningMode::Conserving,
                    &opts,
                )?
                .omega_d
                .to_f64();
                let deltas: Vec<f64> = (0..20)
                    .map(|i| om * 10f64.powf(-1.0 + 2.0 * i as f64 / 19.0))
                    .collect();
                let p = n_profile(&dom, &Dispersion::gravity4(), &deltas, conv, prec)?;
                let flat = p.rows.iter().filter(|r| r.below_omega_d).all(|r| r.plateau);
                let monotone = p.rows.windows(2).all(|w| w[0].total <= w[1].total);
                if !flat || !monotone {
                    return Ok((false, format!("D={d}: plateau {flat}, monotone {monotone}")));
                }
            }
            Ok((true, "20-point grid about the conserving Ω_D".into()))
        }));
        rows.push(check("angle closed form D=200", || {
            let dom = SpectralDomain::full(200);
            let streamed = count_angle(&dom, &AngleOptions::default())?.count;
            let closed = count_angle_closed_form(&dom);
            Ok((
                streamed == closed,
                format!("{streamed} streamed, {closed} closed form"),
            ))
        }));
        rows.push(check("scale count D=1000", || {
            let dom = SpectralDomain::full(1000);
            let n = solve_gravity_scale(&dom, SideConvention::Distinct).len();
            let allow = solve_gravity_scale(&dom, SideConvention::AllowRepeats).len();
            Ok((
                n == 3944 && allow == 53672,
                format!("{n} distinct-sides, {allow} allow-repeats"),
            ))
        }));
        rows.push(check("exempt scale D=1000", || {
            let n = count_exempt_scale(&SpectralDomain::full(1000), SideConvention::Distinct);
            Ok((n == 136, format!("{n}")))
        }));
        if long {
            rows.push(check("total count D=1000 in [3e8, 1.2e9]", || {
                let dom = SpectralDomain::full(1000);
                let scale = solve_gravity_scale(&dom, SideConvention::Distinct).len();
                let angle = count_angle(
                    &dom,
                    &AngleOptions {
                        stripes: 4,
                        ..AngleOptions::default()
                    },
                )?
                .count;
                let total = scale + angle;
                Ok((
                    (300_000_000..=1_200_000_000).contains(&total),
                    format!("{total}"),
                ))
            }));
        }
    }

    for disp in [
        Dispersion::planetary3(),
        Dispersion::capillary3(),
        Dispersion::rossby3(),
    ] {
        if !wants(disp.id) {
            continue;
        }
        rows.push(check(
            &format!("oracle-equivalence {} D<=16", disp.id),
            || {
                for d in 1..=16 {
                    for dom in [
                        SpectralDomain::full(d),
                        SpectralDomain::no_axes(d),
                        SpectralDomain::quadrant(d, d),
                    ] {
                        if brute_force_oracle(&disp, &dom, None, conv)?
                            != solve_three_wave(&disp, &dom, conv)?
                        {
                            return Ok((false, format!("sets differ on {dom}")));
                        }
                    }
                }
                Ok((true, "three domain modes".into()))
            },
        ));
    }
    if wants(DispersionId::Capillary3) {
        rows.push(check("capillary3 empty D=128", || {
            let n = solve_three_wave(&Dispersion::capillary3(), &SpectralDomain::full(128), conv)?
                .len();
            Ok((n == 0, format!("{n} triads")))
        }));
    }
    if wants(DispersionId::Planetary3) {
        rows.push(check("planetary3 count D=200", || {
            let n = solve_three_wave(&Dispersion::planetary3(), &SpectralDomain::full(200), conv)?
                .len();
            Ok((n == 0, format!("{n} triads")))
        }));
    }
    if wants(DispersionId::Rossby3) {
        rows.push(check("rossby3 classes no-axes D=50", || {
            let set = solve_three_wave(
                &Dispersion::rossby3(),
                &SpectralDomain::no_axes(50),
                SideConvention::Distinct,
            )?;
            let classes = iso_classes(&components(&build_cluster_graph(&set)?));
            let got: Vec<usize> = classes.iter().map(|c| c.multiplicity).collect();
            Ok((
                got == [46, 6, 2, 2, 2, 2],
                format!("{} triads, multiplicities {got:?}", set.len()),
            ))
        }));
    }
    rows
}

pub fn table(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in rows {
        let status = if r.pass { "PASS" } else { "FAIL" };
        s.push_str(&format!(
            "{status}  {:<width$}  {}  ({:.1} s)\n",
            r.name, r.detail, r.secs
        ));
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    s.push_str(&format!("{} checks, {failed} failed\n", rows.len()));
    s
}
