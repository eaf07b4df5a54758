use std::path::PathBuf;
use std::process::ExitCode;

use annulus_core::cli::{parse_config, run_case, RunConfig, SolutionChoice, Source};
use annulus_core::model::{build_case_preset, CaseId, QuadratureRule};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Solution {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Rule {
    OpenSum,
    DoubleExponential,
}

/// Stresses and displacements in a partially fixed annulus.
#[derive(Debug, Parser)]
#[command(name = "annulus", version)]
struct Args {
    /// Benchmark case.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    case: Option<CaseId>,
    /// Config file (`key = value` lines).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    solution: Option<Solution>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Samples per circle.
    #[arg(long)]
    samples: Option<usize>,
    /// Comma-separated circle radii.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Write raw signs instead of the finite-element convention.
    #[arg(long)]
    no_sign_flip: bool,
    /// Also write the validation report.
    #[arg(long)]
    validate: bool,
    /// M2 factor for the coefficient-identity check.
    #[arg(long)]
    m2_multiplier: Option<usize>,
    #[arg(long, value_enum)]
    quadrature: Option<Rule>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(args: Args) -> annulus_core::Result<()> {
    let (spec, mut solver, mut run) = match (&args.case, &args.config) {
        (Some(case), _) => {
            let (spec, solver) = build_case_preset(*case);
            (spec, solver, RunConfig::for_preset(*case))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let (spec, solver, mut run) = parse_config(&text)?;
            if matches!(run.source, Source::File(_)) {
                run.source = Source::File(path.clone());
            }
            (spec, solver, run)
        }
        (None, None) => unreachable!("clap requires --case or --config"),
    };

    run.output_dir = args.out;
    if let Some(s) = args.solution {
        run.solution = match s {
            Solution::One => SolutionChoice::One,
            Solution::Two => SolutionChoice::Two,
            Solution::Both => SolutionChoice::Both,
        };
    }
    if let Some(n) = args.samples {
        run.samples_per_circle = n;
    }
    if let Some(r) = args.radii {
        run.sample_radii = r;
    }
    if args.no_sign_flip {
        run.sign_flip = false;
        solver.sign_flip = false;
    }
    run.emit_validation |= args.validate;
    if let Some(m) = args.m2_multiplier {
        run.m2_multiplier = m;
    }
    if let Some(q) = args.quadrature {
        solver.quadrature = match q {
            Rule::OpenSum => QuadratureRule::OpenSum,
            Rule::DoubleExponential => QuadratureRule::DoubleExponential,
        };
    }

    let summary = run_case(&spec, &solver, &run)?;
    print!("{}", summary.report);
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
