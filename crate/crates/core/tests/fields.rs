use std::f64::consts::PI;

use annulus_core::fields::{displacement_at, rigid_body_constant, stress_at, RigidBody};
use annulus_core::model::{build_case_preset, CaseId};
use annulus_core::solver1;

#[test]
fn case_c_inner_pressure_is_reproduced() {
    let (spec, config) = build_case_preset(CaseId::C);
    let (sol, _) = solver1::run(&spec, &config).unwrap();
    let (_, sr, srt) = stress_at(&sol, 0.5, PI).unwrap();
    assert!((sr - 1.0).abs() < 1e-2, "{sr}");
    assert!(srt.abs() < 1e-2, "{srt}");
}

#[test]
fn case_a_free_arc_midpoint_is_traction_free() {
    let (spec, config) = build_case_preset(CaseId::A);
    let (sol, _) = solver1::run(&spec, &config).unwrap();
    let mid = (spec.theta2 + spec.theta1 + 2.0 * PI) / 2.0;
    let (_, sr, srt) = stress_at(&sol, 1.0, mid).unwrap();
    assert!(sr.hypot(srt) <= 2e-2, "{sr} {srt}");
}

fn max_boundary_displacement(sol: &annulus_core::fields::SeriesSolution, rigid: RigidBody) -> f64 {
    let mut m = 0.0f64;
    for j in 0..360 {
        let t = -PI + j as f64 * PI / 180.0;
        for rho in [sol.spec.r, 1.0] {
            let (u, v) = displacement_at(sol, rigid, rho, t).unwrap();
            m = m.max(u.hypot(v));
        }
    }
    m
}

#[test]
fn fixed_arc_stays_put() {
    for case in [CaseId::A, CaseId::B] {
        let (spec, config) = build_case_preset(case);
        let (sol, _) = solver1::run(&spec, &config).unwrap();
        let rigid = rigid_body_constant(&sol, &spec, 400).unwrap();
        let scale = max_boundary_displacement(&sol, rigid);
        let length = spec.theta2 - spec.theta1;
        for j in 0..=100 {
            let t = spec.theta1 + length * (0.1 + 0.8 * j as f64 / 100.0);
            let (u, v) = displacement_at(&sol, rigid, 1.0, t).unwrap();
            assert!(u.hypot(v) <= 1e-2 * scale, "{case:?} at {t}");
        }
    }
}

#[test]
fn rigid_body_shift_zeroes_the_fixed_arc_mean() {
    let (spec, config) = build_case_preset(CaseId::D);
    let (sol, _) = solver1::run(&spec, &config).unwrap();
    let rigid = rigid_body_constant(&sol, &spec, 400).unwrap();
    let thetas = annulus_core::fields::fixed_arc_samples(&spec, 400).unwrap();
    let (mut su, mut sv) = (0.0, 0.0);
    for &t in &thetas {
        let (u, v) = displacement_at(&sol, rigid, 1.0, t).unwrap();
        su += u;
        sv += v;
    }
    let n = thetas.len() as f64;
    assert!((su / n).abs() < 1e-14 && (sv / n).abs() < 1e-14);
}
