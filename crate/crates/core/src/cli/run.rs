use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::RunConfig;
use crate::fields::{self, FieldSample, RigidBody, SeriesSolution};
use crate::model::{ProblemSpec, SolverConfig};
use crate::quadrature::{c12_table, QuadratureTable};
use crate::series::ContinuationParams;
use crate::solver1::IterationReport;
use crate::validate::{self, ValidationReport};
use crate::{solver1, solver2, Result};

pub const CSV_HEADER: &str = "theta_deg,rho,sigma_theta,sigma_rho,tau_rhotheta,u,v";

/// Points used to fix the rigid-body constant on the fixed arc.
const RIGID_BODY_SAMPLES: usize = 400;

pub struct SolutionRun {
    pub index: u8,
    pub solution: SeriesSolution,
    pub report: IterationReport,
    pub rigid: RigidBody,
    pub validation: Option<ValidationReport>,
}

pub struct RunSummary {
    pub runs: Vec<SolutionRun>,
    pub files: Vec<PathBuf>,
    pub report: String,
}

/// `samples` points `θ ∈ [−π, π)` on the circle of radius `rho`.
pub fn sample_circle(
    sol: &SeriesSolution,
    rigid: RigidBody,
    rho: f64,
    samples: usize,
    sign_flip: bool,
) -> Result<Vec<FieldSample>> {
    let step = 2.0 * std::f64::consts::PI / samples as f64;
    (0..samples)
        .map(|j| fields::sample(sol, rigid, rho, -std::f64::consts::PI + j as f64 * step, sign_flip))
        .collect()
}

pub fn format_csv(samples: &[FieldSample]) -> String {
    let mut out = String::with_capacity(64 * (samples.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(
            out,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            s.theta.to_degrees(),
            s.rho,
            s.sigma_theta,
            s.sigma_rho,
            s.sigma_rhotheta,
            s.u,
            s.v
        );
    }
    out
}

pub fn emit_csv(path: &Path, samples: &[FieldSample]) -> Result<()> {
    fs::write(path, format_csv(samples))?;
    Ok(())
}

fn table_row(s: &mut String, index: u8, config: &SolverConfig, report: &IterationReport) {
    let _ = writeln!(
        s,
        "solution {index}: N = {}, epsilon = {:e}, M1 = {}, M2 = {}, Q = {}, N_C1 = {:.4}, N_C2 = {:.4}",
        config.n, config.epsilon, config.m1, config.m2, report.reps, report.cond_alpha, report.cond_beta
    );
}

/// Solves, writes one CSV per solution and radius plus a report, and the
/// validation report when requested.
pub fn run_case(spec: &ProblemSpec, config: &SolverConfig, run: &RunConfig) -> Result<RunSummary> {
    run.validate(spec)?;
    fs::create_dir_all(&run.output_dir)?;

    let needs_table = run.solution.includes_two() || run.emit_validation;
    let table = if needs_table {
        Some(QuadratureTable::new(spec, config)?)
    } else {
        None
    };

    let mut runs = Vec::new();
    if run.solution.includes_one() {
        let (solution, report) = solver1::run(spec, config)?;
        runs.push((1u8, solution, report));
    }
    if run.solution.includes_two() {
        let table = table.as_ref().expect("table built for solution 2");
        let (solution, report) = solver2::run2_with_table(spec, config, table)?;
        runs.push((2u8, solution, report));
    }

    let c12_fine = if run.emit_validation {
        let params = ContinuationParams::for_spec(spec)?;
        Some(c12_table(
            spec.theta1,
            spec.theta2,
            params.lambda,
            config.n,
            config.m2 * run.m2_multiplier,
            config.quadrature,
        ))
    } else {
        None
    };

    let mut out = Vec::new();
    for (index, solution, report) in runs {
        let rigid = fields::rigid_body_constant(&solution, spec, RIGID_BODY_SAMPLES)?;
        let validation = match (&table, &c12_fine) {
            (Some(t), Some(fine)) => Some(validate::assess(&solution, spec, t, fine, rigid)?),
            _ => None,
        };
        out.push(SolutionRun {
            index,
            solution,
            report,
            rigid,
            validation,
        });
    }
    if out.len() == 2 {
        let d = validate::compare_solutions(&out[0].solution, &out[1].solution);
        let f = validate::compare_fields(&out[0].solution, out[0].rigid, &out[1].solution, out[1].rigid)?;
        for r in out.iter_mut() {
            if let Some(v) = r.validation.as_mut() {
                v.cross_solution_max_diff = Some(d);
                v.cross_solution_field_diff = Some(f);
            }
        }
    }

    let mut files = Vec::new();
    for r in &out {
        for &rho in &run.sample_radii {
            let samples = sample_circle(&r.solution, r.rigid, rho, run.samples_per_circle, run.sign_flip)?;
            let path = run.output_dir.join(format!("{}_sol{}_rho{:.3}.csv", run.label, r.index, rho));
            emit_csv(&path, &samples)?;
            files.push(path);
        }
    }

    let mut report = String::new();
    let _ = writeln!(report, "{}", run.label);
    let _ = writeln!(
        report,
        "nu = {}, kappa = {}, r = {}, theta1 = {}, theta2 = {}, quadrature = {:?}",
        spec.nu,
        spec.kappa(),
        spec.r,
        spec.theta1,
        spec.theta2,
        config.quadrature
    );
    for r in &out {
        table_row(&mut report, r.index, config, &r.report);
        let _ = writeln!(report, "solution {}: rigid body Dx = {:e}, Dy = {:e}", r.index, r.rigid.dx, r.rigid.dy);
    }
    let path = run.output_dir.join(format!("{}_report.txt", run.label));
    fs::write(&path, &report)?;
    files.push(path);

    if run.emit_validation {
        let mut text = String::new();
        for r in &out {
            if let Some(v) = &r.validation {
                text.push_str(&v.render(&format!("solution {}", r.index)));
            }
        }
        let path = run.output_dir.join(format!("{}_validation.txt", run.label));
        fs::write(&path, &text)?;
        files.push(path);
    }

    Ok(RunSummary {
        runs: out,
        files,
        report,
    })
}
