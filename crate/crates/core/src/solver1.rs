//! Solution 1: successive approximation closed by the residue-theorem
//! constraints (unbalanced resultant and single-valued displacement).
//!
//! Each rep solves two upper-triangular Toeplitz systems: the `α`-system
//! for `d_{−1}..d_{−N}` and the `β`-system for `d_0..d_N`.

use crate::fields::{assemble_ab, SeriesSolution};
use crate::linalg::{condition_number_2norm, solve_triangular_toeplitz, ComplexMatrix};
use crate::model::{ProblemSpec, SolverConfig};
use crate::series::{ContinuationParams, TaylorCoefficients};
use crate::{Complex64, Error, Harmonics, Result};

/// Progress of a successive-approximation run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    /// Accumulated `Σ_q d^(q)`.
    pub d: Harmonics,
    /// Latest increment `d^(q)`.
    pub d_step: Harmonics,
    /// `A_k` of the latest increment.
    pub a_step: Harmonics,
    /// `B_k` of the latest increment.
    pub b_step: Harmonics,
    /// Sweeps performed so far, the initial one included.
    pub q: usize,
}

impl IterationState {
    pub(crate) fn start(step: Harmonics, taylor: &TaylorCoefficients) -> Self {
        let (a_step, b_step) = assemble_ab(&step, taylor);
        Self {
            d: step.clone(),
            d_step: step,
            a_step,
            b_step,
            q: 1,
        }
    }

    pub(crate) fn accumulate(&mut self, step: Harmonics, taylor: &TaylorCoefficients) {
        self.d.add_assign(&step);
        let (a, b) = assemble_ab(&step, taylor);
        self.a_step = a;
        self.b_step = b;
        self.d_step = step;
        self.q += 1;
    }

    pub fn step_size(&self) -> f64 {
        self.d_step.max_abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationReport {
    /// Total sweeps `Q`, the initial solve included.
    pub reps: usize,
    pub cond_alpha: f64,
    pub cond_beta: f64,
    /// `max_k |d_k^(q)|` per sweep.
    pub history: Vec<f64>,
}

/// Band form of the two triangular systems plus their dense matrices.
#[derive(Debug, Clone)]
pub struct Systems {
    pub n: usize,
    pub alpha_band: Vec<Complex64>,
    pub beta_band: Vec<Complex64>,
    pub alpha_system: ComplexMatrix,
    pub beta_system: ComplexMatrix,
}

impl Systems {
    pub fn condition_numbers(&self) -> (f64, f64) {
        (
            condition_number_2norm(&self.alpha_system),
            condition_number_2norm(&self.beta_system),
        )
    }
}

/// `N×N` `α`-system over `d_{−1}..d_{−N}` and `(N+1)×(N+1)` `β`-system
/// over `d_0..d_N`.
pub fn assemble_systems(taylor: &TaylorCoefficients) -> Systems {
    let n = taylor.n;
    let alpha_band: Vec<Complex64> = (0..=n as i64).map(|l| taylor.alpha(l)).collect();
    let beta_band: Vec<Complex64> = (1..=n as i64 + 1).map(|l| taylor.beta(l)).collect();
    Systems {
        n,
        alpha_system: ComplexMatrix::upper_toeplitz(&alpha_band, n),
        beta_system: ComplexMatrix::upper_toeplitz(&beta_band, n + 1),
        alpha_band,
        beta_band,
    }
}

fn solve_pair(systems: &Systems, rhs_alpha: &[Complex64], rhs_beta: &[Complex64]) -> Result<Harmonics> {
    let n = systems.n as i64;
    let xa = solve_triangular_toeplitz(&systems.alpha_band, rhs_alpha)?;
    let xb = solve_triangular_toeplitz(&systems.beta_band, rhs_beta)?;
    let mut d = Harmonics::zeros(-n, n);
    for (j, v) in xa.into_iter().enumerate() {
        d.set(-1 - j as i64, v);
    }
    for (j, v) in xb.into_iter().enumerate() {
        d.set(j as i64, v);
    }
    Ok(d)
}

/// Solves the traction-driven first sweep for `d^(0)`.
pub fn initial_step(spec: &ProblemSpec, systems: &Systems) -> Result<Harmonics> {
    let n = systems.n;
    let r = spec.r;
    let kappa = spec.kappa();
    let s = 1.0 - r.powi(-2);
    let f = |k: i64| spec.traction.get(k);
    let resultant = f(-1) * r / (1.0 + kappa);

    let mut ra = vec![Complex64::new(0.0, 0.0); n];
    ra[0] = resultant;
    for k in 2..=n {
        ra[k - 1] = r.powi(k as i32) * f(-(k as i64));
    }

    let mut rb = vec![Complex64::new(0.0, 0.0); n + 1];
    rb[0] = -kappa * resultant;
    rb[1] = -r * r * f(0);
    if n >= 2 {
        rb[2] = 2.0 * s * r.powi(3) * f(-1).conj() / (1.0 + kappa) - r.powi(3) * f(1);
    }
    for k in 2..n {
        let ki = k as i64;
        let rk2 = r.powi(k as i32 + 2);
        rb[k + 1] = (k + 1) as f64 * s * rk2 * f(-ki).conj() - rk2 * f(ki);
    }
    solve_pair(systems, &ra, &rb)
}

/// Next increment from the previous one's `A_k`, `B_k`.
pub fn next_step(spec: &ProblemSpec, systems: &Systems, a: &Harmonics, b: &Harmonics) -> Result<Harmonics> {
    let n = systems.n;
    let r = spec.r;
    let s = 1.0 - r.powi(-2);

    let mut ra = vec![Complex64::new(0.0, 0.0); n];
    for k in 2..=n {
        let ki = k as i64;
        ra[k - 1] = (k - 1) as f64 * s * r.powi(2 * k as i32) * a.get(ki).conj() + r.powi(2 * k as i32 - 2) * b.get(-ki);
    }

    let mut rb = vec![Complex64::new(0.0, 0.0); n + 1];
    rb[1] = r * r * a.get(0) + s * r * r * a.get(0).conj();
    if n >= 2 {
        rb[2] = r.powi(4) * a.get(1);
    }
    for k in 2..n {
        let ki = k as i64;
        let kf = k as f64;
        let r2k2 = r.powi(2 * k as i32 + 2);
        rb[k + 1] = r2k2 * a.get(ki) * (1.0 + (kf * kf - 1.0) * s * s)
            + (kf + 1.0) * s * r.powi(2 * k as i32) * b.get(-ki).conj();
    }
    solve_pair(systems, &ra, &rb)
}

/// One rep: new increment from the state's previous one, then accumulate.
pub fn iterate_once(state: &mut IterationState, systems: &Systems, taylor: &TaylorCoefficients, spec: &ProblemSpec) -> Result<()> {
    let step = next_step(spec, systems, &state.a_step, &state.b_step)?;
    state.accumulate(step, taylor);
    Ok(())
}

pub(crate) fn prepare(spec: &ProblemSpec, config: &SolverConfig) -> Result<TaylorCoefficients> {
    spec.validate()?;
    config.validate()?;
    spec.check_truncation(config.n)?;
    let params = ContinuationParams::for_spec(spec)?;
    Ok(TaylorCoefficients::new(spec, &params, config.n))
}

/// Drives `step` until the increment falls to `epsilon` or the cap is hit.
pub(crate) fn drive(
    solution: &'static str,
    config: &SolverConfig,
    mut state: IterationState,
    mut step: impl FnMut(&IterationState) -> Result<Harmonics>,
    taylor: &TaylorCoefficients,
) -> Result<(IterationState, Vec<f64>)> {
    let mut history = vec![state.step_size()];
    while state.step_size() > config.epsilon {
        if state.q >= config.max_reps {
            return Err(Error::NotConverged {
                solution,
                reps: state.q,
                last: state.step_size(),
                history,
            });
        }
        let next = step(&state)?;
        state.accumulate(next, taylor);
        history.push(state.step_size());
    }
    Ok((state, history))
}

pub fn run(spec: &ProblemSpec, config: &SolverConfig) -> Result<(SeriesSolution, IterationReport)> {
    let taylor = prepare(spec, config)?;
    let systems = assemble_systems(&taylor);
    let (cond_alpha, cond_beta) = systems.condition_numbers();
    let state = IterationState::start(initial_step(spec, &systems)?, &taylor);
    let (state, history) = drive(
        "solution 1",
        config,
        state,
        |s| next_step(spec, &systems, &s.a_step, &s.b_step),
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::solve_dense;
    use crate::model::{build_case_preset, CaseId, TractionSpectrum};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(case: CaseId) -> (ProblemSpec, SolverConfig, TaylorCoefficients, Systems) {
        let (spec, config) = build_case_preset(case);
        let tc = prepare(&spec, &config).unwrap();
        let sys = assemble_systems(&tc);
        (spec, config, tc, sys)
    }

    #[test]
    fn small_system_layout() {
        let (spec, _) = build_case_preset(CaseId::A);
        let p = ContinuationParams::for_spec(&spec).unwrap();
        let tc = TaylorCoefficients::new(&spec, &p, 2);
        let sys = assemble_systems(&tc);
        let a = &sys.alpha_system;
        assert_eq!((a.rows(), a.cols()), (2, 2));
        assert_eq!(a.get(0, 0), tc.alpha(0));
        assert_eq!(a.get(0, 1), tc.alpha(1));
        assert_eq!(a.get(1, 0), c(0.0, 0.0));
        assert_eq!(a.get(1, 1), tc.alpha(0));
        let b = &sys.beta_system;
        assert_eq!((b.rows(), b.cols()), (3, 3));
        for i in 0..3 {
            assert_eq!(b.get(i, i), c(1.0, 0.0));
        }
        assert_eq!(b.get(0, 2), tc.beta(3));
        assert_eq!(b.get(2, 0), c(0.0, 0.0));
    }

    #[test]
    fn case_a_condition_numbers() {
        let (_, _, _, sys) = setup(CaseId::A);
        let (ca, cb) = sys.condition_numbers();
        assert!((ca / 8.76 - 1.0).abs() < 0.02, "{ca}");
        assert!((cb / 11.92 - 1.0).abs() < 0.02, "{cb}");
    }

    #[test]
    fn case_a_initial_alpha_rhs_and_dense_agreement() {
        let (spec, _, _, sys) = setup(CaseId::A);
        let d0 = initial_step(&spec, &sys).unwrap();
        // only the resultant row is loaded: α-system solution is α-system⁻¹ e_0 · i·0.1/2.8
        let mut rhs = vec![c(0.0, 0.0); sys.n];
        rhs[0] = c(0.0, 0.1 / 2.8);
        let dense = solve_dense(&sys.alpha_system, &rhs).unwrap();
        for (j, v) in dense.iter().enumerate() {
            assert!((d0.get(-1 - j as i64) - v).norm() <= 1e-12 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn case_c_beta_row_zero_loads_inner_pressure() {
        let (spec, _, _, sys) = setup(CaseId::C);
        let d0 = initial_step(&spec, &sys).unwrap();
        let x: Vec<Complex64> = (0..=sys.n as i64).map(|k| d0.get(k)).collect();
        let rb = sys.beta_system.mul_vec(&x);
        assert!((rb[1] - c(-0.25, 0.0)).norm() < 1e-13);
        assert!(rb[0].norm() < 1e-13);
    }

    #[test]
    fn zero_traction_is_fixed_point() {
        let (mut spec, config, tc, sys) = setup(CaseId::B);
        spec.traction = TractionSpectrum::new();
        let d0 = initial_step(&spec, &sys).unwrap();
        assert_eq!(d0.max_abs(), 0.0);
        let mut state = IterationState::start(d0, &tc);
        iterate_once(&mut state, &sys, &tc, &spec).unwrap();
        assert_eq!(state.step_size(), 0.0);
        let (sol, report) = run(&spec, &config).unwrap();
        assert_eq!(report.reps, 1);
        assert_eq!(sol.d.max_abs(), 0.0);
    }

    #[test]
    fn rep_counts() {
        for (case, q) in [(CaseId::B, 29), (CaseId::D, 286)] {
            let (spec, config) = build_case_preset(case);
            let (_, report) = run(&spec, &config).unwrap();
            assert!((report.reps as f64 / q as f64 - 1.0).abs() <= 0.15, "{case:?}: {}", report.reps);
            assert_eq!(report.history.len(), report.reps);
        }
    }

    #[test]
    fn cap_reports_history() {
        let (spec, mut config) = build_case_preset(CaseId::D);
        config.max_reps = 5;
        match run(&spec, &config) {
            Err(Error::NotConverged { reps, history, .. }) => {
                assert_eq!(reps, 5);
                assert_eq!(history.len(), 5);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn single_valuedness_holds_every_rep() {
        let (spec, _, tc, sys) = setup(CaseId::A);
        let mut state = IterationState::start(initial_step(&spec, &sys).unwrap(), &tc);
        for _ in 0..10 {
            let sol = SeriesSolution::new(&spec, &tc, state.d.clone());
            let a = sol.a.get(-1);
            assert!((1.8 * a + sol.b.get(-1)).norm() <= 1e-12 * a.norm().max(1.0));
            iterate_once(&mut state, &sys, &tc, &spec).unwrap();
        }
    }
}
