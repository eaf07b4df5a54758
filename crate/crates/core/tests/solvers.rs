use annulus_core::fields::rigid_body_constant;
use annulus_core::model::{build_case_preset, CaseId, PlaneCondition, ProblemSpec, TractionSpectrum};
use annulus_core::quadrature::QuadratureTable;
use annulus_core::{solver1, solver2, validate, Complex64};

#[test]
fn table_rep_counts_for_solution_one() {
    for (case, q) in [(CaseId::A, 140), (CaseId::B, 29), (CaseId::C, 79), (CaseId::D, 286)] {
        let (spec, config) = build_case_preset(case);
        let (_, report) = solver1::run(&spec, &config).unwrap();
        assert!((report.reps as f64 / q as f64 - 1.0).abs() <= 0.15, "{case:?} {}", report.reps);
    }
}

#[test]
fn case_a_resultant_coefficients() {
    let (spec, config) = build_case_preset(CaseId::A);
    let (sol, _) = solver1::run(&spec, &config).unwrap();
    assert!((sol.a.get(-1) - Complex64::new(0.0, 0.1 / 2.8)).norm() < 1e-12);
    assert!(validate::check_resultant(&sol, &spec) < 1e-10);
    assert!(validate::check_single_valuedness(&sol) < 1e-10);
}

#[test]
fn balanced_load_has_no_resultant() {
    let (spec, config) = build_case_preset(CaseId::C);
    let (sol, _) = solver1::run(&spec, &config).unwrap();
    assert!(sol.a.get(-1).norm() < 1e-10);
    assert!(sol.b.get(-1).norm() < 1e-10);
}

#[test]
fn solutions_agree_and_close_each_others_constraints() {
    for case in [CaseId::B, CaseId::D] {
        let (spec, config) = build_case_preset(case);
        let table = QuadratureTable::new(&spec, &config).unwrap();
        let (s1, _) = solver1::run(&spec, &config).unwrap();
        let (s2, _) = solver2::run2_with_table(&spec, &config, &table).unwrap();
        assert!(validate::compare_solutions(&s1, &s2) < 1e-3);
        assert!(validate::c11_closure_relative(&s2, &table.c11) < 1e-6);
        assert!(validate::c11_closure_relative(&s1, &table.c11) < 1e-3);
        assert!(validate::check_c12_resultant(&s1, &table.c12, &spec) < 1e-3);
        assert!(validate::check_c12_resultant(&s2, &table.c12, &spec) < 1e-3);
    }
}

#[test]
fn increments_shrink_geometrically() {
    let (spec, config) = build_case_preset(CaseId::D);
    let (_, report) = solver1::run(&spec, &config).unwrap();
    let h = &report.history;
    assert!(h.iter().take(h.len() - 1).all(|v| *v > 0.0));
    let tail = &h[h.len() / 2..];
    let ratio = (tail[tail.len() - 1] / tail[0]).powf(1.0 / (tail.len() - 1) as f64);
    assert!(ratio < 0.95, "tail ratio {ratio}");
}

#[test]
fn plane_stress_custom_problem() {
    let spec = ProblemSpec::new(
        0.25,
        PlaneCondition::PlaneStress,
        0.4,
        -1.0,
        1.5,
        TractionSpectrum::new()
            .with(-1, Complex64::new(0.5, -0.2))
            .with(2, Complex64::new(0.1, 0.0)),
    )
    .unwrap();
    let (_, mut config) = build_case_preset(CaseId::B);
    config.n = 40;
    let (s1, _) = solver1::run(&spec, &config).unwrap();
    let (s2, _) = solver2::run2(&spec, &config).unwrap();
    assert!(validate::compare_solutions(&s1, &s2) < 1e-3);
    assert!(validate::check_closed_form(&s1, &spec) < 1e-10);
    let rigid = rigid_body_constant(&s1, &spec, 400).unwrap();
    let b = validate::boundary_residuals(&s1, &spec, rigid).unwrap();
    assert!(b.inner_traction < 1e-2, "{b:?}");
}

#[test]
fn harmonic_beyond_truncation_is_rejected() {
    let (mut spec, mut config) = build_case_preset(CaseId::C);
    config.n = 10;
    spec.traction.set(11, Complex64::new(1.0, 0.0));
    assert!(solver1::run(&spec, &config).is_err());
    assert!(solver2::run2(&spec, &config).is_err());
}

#[test]
fn reruns_are_bit_identical() {
    let (spec, config) = build_case_preset(CaseId::B);
    let (a, ra) = solver2::run2(&spec, &config).unwrap();
    let (b, rb) = solver2::run2(&spec, &config).unwrap();
    assert_eq!(a, b);
    assert_eq!(ra, rb);
}
