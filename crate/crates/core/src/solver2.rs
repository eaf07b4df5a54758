//! Solution 2: successive approximation closed by the free-arc integral
//! `∫_{C11} φ′ dt = 0`.
//!
//! The triangular solves give `d_{−2}..d_{−N}` and `d_1..d_N`; a 2×2 system
//! built from `α_0`, `β_1`, `c11_{−1}`, `c11_0` then yields `d_{−1}`, `d_0`.

use crate::fields::SeriesSolution;
use crate::linalg::{condition_number_2norm, solve_triangular_toeplitz, ComplexMatrix, DenseLu};
use crate::model::{ProblemSpec, SolverConfig};
use crate::quadrature::QuadratureTable;
use crate::series::TaylorCoefficients;
use crate::solver1::{drive, prepare, IterationReport, IterationState};
use crate::{Complex64, Harmonics, Result};

#[derive(Debug, Clone)]
pub struct Systems2 {
    pub n: usize,
    pub alpha_band: Vec<Complex64>,
    pub beta_band: Vec<Complex64>,
    /// `(N−1)×(N−1)` over `d_{−2}..d_{−N}`.
    pub alpha_system: ComplexMatrix,
    /// `N×N` over `d_1..d_N`.
    pub beta_system: ComplexMatrix,
    /// `[[α_0, −β_1], [c11_{−1}, c11_0]]`.
    pub closure: ComplexMatrix,
    closure_lu: DenseLu,
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
    c11: Harmonics,
}

impl Systems2 {
    pub fn condition_numbers(&self) -> (f64, f64) {
        (
            condition_number_2norm(&self.alpha_system),
            condition_number_2norm(&self.beta_system),
        )
    }
}

/// Truncated systems plus the once-factored 2×2 closure.
pub fn assemble_systems2(taylor: &TaylorCoefficients, c11: &Harmonics) -> Result<Systems2> {
    let n = taylor.n;
    let alpha_band: Vec<Complex64> = (0..n as i64).map(|l| taylor.alpha(l)).collect();
    let beta_band: Vec<Complex64> = (1..=n as i64).map(|l| taylor.beta(l)).collect();
    let closure = ComplexMatrix::from_rows(2, 2, &[taylor.alpha(0), -taylor.beta(1), c11.get(-1), c11.get(0)]);
    let closure_lu = DenseLu::new(&closure)?;
    Ok(Systems2 {
        n,
        alpha_system: ComplexMatrix::upper_toeplitz(&alpha_band, n - 1),
        beta_system: ComplexMatrix::upper_toeplitz(&beta_band, n),
        alpha_band,
        beta_band,
        closure,
        closure_lu,
        alpha: (0..=2 * n as i64).map(|l| taylor.alpha(l)).collect(),
        beta: (0..=2 * n as i64).map(|l| taylor.beta(l)).collect(),
        c11: c11.clone(),
    })
}

fn solve_all(systems: &Systems2, ra: &[Complex64], rb: &[Complex64], load: Complex64) -> Result<Harmonics> {
    let n = systems.n as i64;
    let xa = solve_triangular_toeplitz(&systems.alpha_band, ra)?;
    let xb = solve_triangular_toeplitz(&systems.beta_band, rb)?;
    let mut d = Harmonics::zeros(-n, n);
    for (j, v) in xa.into_iter().enumerate() {
        d.set(-2 - j as i64, v);
    }
    for (j, v) in xb.into_iter().enumerate() {
        d.set(1 + j as i64, v);
    }
    let alpha = |l: i64| systems.alpha[l as usize];
    let beta = |l: i64| systems.beta[l as usize];
    let c11 = &systems.c11;
    let rhs1 = -(1..n).map(|l| alpha(l) * d.get(-1 - l)).sum::<Complex64>()
        + (2..=n + 1).map(|l| beta(l) * d.get(-1 + l)).sum::<Complex64>()
        + load;
    let rhs2 = -(2..=n).map(|l| c11.get(-l) * d.get(-l)).sum::<Complex64>()
        - (1..=n).map(|l| c11.get(l) * d.get(l)).sum::<Complex64>();
    let x = systems.closure_lu.solve(&[rhs1, rhs2])?;
    d.set(-1, x[0]);
    d.set(0, x[1]);
    Ok(d)
}

pub fn initial_step2(spec: &ProblemSpec, systems: &Systems2) -> Result<Harmonics> {
    let n = systems.n;
    let r = spec.r;
    let s = 1.0 - r.powi(-2);
    let f = |k: i64| spec.traction.get(k);

    let ra: Vec<Complex64> = (2..=n).map(|k| r.powi(k as i32) * f(-(k as i64))).collect();
    let mut rb = vec![Complex64::new(0.0, 0.0); n];
    rb[0] = -r * r * f(0);
    for k in 1..n {
        let ki = k as i64;
        let rk2 = r.powi(k as i32 + 2);
        rb[k] = (k + 1) as f64 * s * rk2 * f(-ki).conj() - rk2 * f(ki);
    }
    solve_all(systems, &ra, &rb, r * f(-1))
}

pub fn next_step2(spec: &ProblemSpec, systems: &Systems2, a: &Harmonics, b: &Harmonics) -> Result<Harmonics> {
    let n = systems.n;
    let r = spec.r;
    let s = 1.0 - r.powi(-2);

    let ra: Vec<Complex64> = (2..=n)
        .map(|k| {
            let ki = k as i64;
            (k - 1) as f64 * s * r.powi(2 * k as i32) * a.get(ki).conj() + r.powi(2 * k as i32 - 2) * b.get(-ki)
        })
        .collect();
    let mut rb = vec![Complex64::new(0.0, 0.0); n];
    rb[0] = r * r * a.get(0) + s * r * r * a.get(0).conj();
    if n >= 2 {
        rb[1] = r.powi(4) * a.get(1) + 2.0 * s * r * r * b.get(-1).conj();
    }
    for k in 2..n {
        let ki = k as i64;
        let kf = k as f64;
        let r2k2 = r.powi(2 * k as i32 + 2);
        rb[k] = r2k2 * a.get(ki) * (1.0 + (kf * kf - 1.0) * s * s)
            + (kf + 1.0) * s * r.powi(2 * k as i32) * b.get(-ki).conj();
    }
    solve_all(systems, &ra, &rb, Complex64::new(0.0, 0.0))
}

pub fn iterate_once2(state: &mut IterationState, systems: &Systems2, taylor: &TaylorCoefficients, spec: &ProblemSpec) -> Result<()> {
    let step = next_step2(spec, systems, &state.a_step, &state.b_step)?;
    state.accumulate(step, taylor);
    Ok(())
}

/// Runs with a prebuilt quadrature table (its `c11` must cover `[−N−1, N]`).
pub fn run2_with_table(
    spec: &ProblemSpec,
    config: &SolverConfig,
    table: &QuadratureTable,
) -> Result<(SeriesSolution, IterationReport)> {
    let taylor = prepare(spec, config)?;
    let systems = assemble_systems2(&taylor, &table.c11)?;
    let (cond_alpha, cond_beta) = systems.condition_numbers();
    let state = IterationState::start(initial_step2(spec, &systems)?, &taylor);
    let (state, history) = drive(
        "solution 2",
        config,
        state,
        |s| next_step2(spec, &systems, &s.a_step, &s.b_step),
        &taylor,
    )?;
    let report = IterationReport {
        reps: state.q,
        cond_alpha,
        cond_beta,
        history,
    };
    Ok((SeriesSolution::new(spec, &taylor, state.d), report))
}

pub fn run2(spec: &ProblemSpec, config: &SolverConfig) -> Result<(SeriesSolution, IterationReport)> {
    spec.validate()?;
    config.validate()?;
    let table = QuadratureTable::new(spec, config)?;
    run2_with_table(spec, config, &table)
}
