use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::model::{build_case_preset, CaseId, PlaneCondition, ProblemSpec, QuadratureRule, SolverConfig, TractionSpectrum};
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionChoice {
    One,
    Two,
    Both,
}

impl SolutionChoice {
    pub fn includes_one(self) -> bool {
        matches!(self, SolutionChoice::One | SolutionChoice::Both)
    }

    pub fn includes_two(self) -> bool {
        matches!(self, SolutionChoice::Two | SolutionChoice::Both)
    }
}

impl std::str::FromStr for SolutionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "one" => Ok(SolutionChoice::One),
            "2" | "two" => Ok(SolutionChoice::Two),
            "both" => Ok(SolutionChoice::Both),
            other => Err(Error::InvalidConfig(format!("solution must be 1, 2 or both, got '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Preset(CaseId),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    /// Prefix for output files, e.g. `caseA`.
    pub label: String,
    pub solution: SolutionChoice,
    pub sample_radii: Vec<f64>,
    pub samples_per_circle: usize,
    pub output_dir: PathBuf,
    pub sign_flip: bool,
    pub emit_validation: bool,
    /// Factor applied to `M2` for the coefficient-identity check.
    pub m2_multiplier: usize,
}

impl RunConfig {
    /// Defaults for a preset: circles at `r`, the case's interior radius and 1.
    pub fn for_preset(case: CaseId) -> Self {
        let (spec, _) = build_case_preset(case);
        Self {
            source: Source::Preset(case),
            label: format!("case{}", case.label()),
            solution: SolutionChoice::Both,
            sample_radii: vec![spec.r, case.interior_radius(), 1.0],
            samples_per_circle: 720,
            output_dir: PathBuf::from("."),
            sign_flip: true,
            emit_validation: false,
            m2_multiplier: 10,
        }
    }

    pub fn validate(&self, spec: &ProblemSpec) -> Result<()> {
        if self.samples_per_circle < 8 {
            return Err(Error::InvalidConfig(format!(
                "samples per circle must be at least 8, got {}",
                self.samples_per_circle
            )));
        }
        if self.sample_radii.is_empty() {
            return Err(Error::InvalidConfig("no sample radii".into()));
        }
        for &rho in &self.sample_radii {
            if !(rho >= spec.r && rho <= 1.0) {
                return Err(Error::InvalidConfig(format!("sample radius {rho} outside [{}, 1]", spec.r)));
            }
        }
        if self.m2_multiplier == 0 {
            return Err(Error::InvalidConfig("m2 multiplier must be positive".into()));
        }
        Ok(())
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

/// Parses a real number, also accepting `pi` expressions such as `-pi/2`,
/// `3*pi/4`, `0.5pi` and `pi`.
pub fn parse_number(text: &str) -> Option<f64> {
    let t = text.trim().to_ascii_lowercase();
    if let Ok(v) = t.parse::<f64>() {
        return Some(v);
    }
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, t.strip_prefix('+').unwrap_or(&t).trim()),
    };
    let (numer, denom) = match body.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim().parse::<f64>().ok()?)),
        None => (body, None),
    };
    let coeff_text = numer.strip_suffix("pi")?.trim().trim_end_matches('*').trim();
    let coeff = if coeff_text.is_empty() {
        1.0
    } else {
        coeff_text.parse::<f64>().ok()?
    };
    let v = sign * coeff * PI / denom.unwrap_or(1.0);
    v.is_finite().then_some(v)
}

fn parse_bool(text: &str) -> Option<bool> {
    match text.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

fn parse_harmonic_key(key: &str) -> Option<(char, &str)> {
    let kind = key.chars().next()?;
    if kind != 'p' && kind != 'q' {
        return None;
    }
    let inner = key[1..].trim().strip_prefix('[')?.strip_suffix(']')?;
    Some((kind, inner))
}

/// Parses the line-oriented `key = value` format.
///
/// ```text
/// # case C with a finer free-arc rule
/// case = C
/// M1 = 60000
/// p[1] = 0.25
/// ```
pub fn parse_config(text: &str) -> Result<(ProblemSpec, SolverConfig, RunConfig)> {
    let mut values: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut harmonics: Vec<(usize, char, i64, f64)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| config_err(line, format!("expected 'key = value', got '{content}'")))?;
        let key = key.trim();
        let value = value.trim();
        if let Some((kind, index)) = parse_harmonic_key(key) {
            let k: i64 = index
                .trim()
                .parse()
                .map_err(|_| config_err(line, format!("malformed harmonic index '{index}'")))?;
            let v = parse_number(value).ok_or_else(|| config_err(line, format!("malformed number '{value}'")))?;
            harmonics.push((line, kind, k, v));
            continue;
        }
        let canonical = key.to_ascii_lowercase();
        const KNOWN: [&str; 18] = [
            "case", "nu", "plane", "r", "theta1", "theta2", "n", "epsilon", "max_reps", "m1", "m2", "quadrature",
            "sign_flip", "solution", "samples", "radii", "validate", "m2_multiplier",
        ];
        if !KNOWN.contains(&canonical.as_str()) {
            return Err(config_err(line, format!("unknown key '{key}'")));
        }
        values.insert(canonical, (line, value.to_string()));
    }

    let num = |key: &str| -> Result<Option<(usize, f64)>> {
        match values.get(key) {
            None => Ok(None),
            Some((line, v)) => parse_number(v)
                .map(|x| Some((*line, x)))
                .ok_or_else(|| config_err(*line, format!("malformed number '{v}' for {key}"))),
        }
    };
    let int = |key: &str| -> Result<Option<(usize, usize)>> {
        match values.get(key) {
            None => Ok(None),
            Some((line, v)) => {
                let x: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| config_err(*line, format!("malformed integer '{v}' for {key}")))?;
                if x < 0.0 || x.fract() != 0.0 || !x.is_finite() {
                    return Err(config_err(*line, format!("{key} must be a non-negative integer, got '{v}'")));
                }
                Ok(Some((*line, x as usize)))
            }
        }
    };

    let case = match values.get("case") {
        Some((line, v)) => Some(v.parse::<CaseId>().map_err(|e| config_err(*line, e.to_string()))?),
        None => None,
    };
    let geometry_keys = ["nu", "r", "theta1", "theta2"];
    let (mut spec, mut solver, mut run) = match case {
        Some(c) => {
            let (spec, solver) = build_case_preset(c);
            (spec, solver, RunConfig::for_preset(c))
        }
        None => {
            if geometry_keys.iter().all(|k| !values.contains_key(*k)) && harmonics.is_empty() {
                return Err(Error::ConfigIncomplete("no case or geometry specified".into()));
            }
            let missing: Vec<&str> = geometry_keys.iter().copied().filter(|k| !values.contains_key(*k)).collect();
            if !missing.is_empty() {
                return Err(Error::ConfigIncomplete(format!("missing {}", missing.join(", "))));
            }
            let spec = ProblemSpec {
                nu: 0.3,
                plane_condition: PlaneCondition::PlaneStrain,
                r: 0.5,
                theta1: -PI / 2.0,
                theta2: 0.0,
                traction: TractionSpectrum::new(),
            };
            let run = RunConfig {
                source: Source::File(PathBuf::new()),
                label: "custom".into(),
                solution: SolutionChoice::Both,
                sample_radii: Vec::new(),
                samples_per_circle: 720,
                output_dir: PathBuf::from("."),
                sign_flip: true,
                emit_validation: false,
                m2_multiplier: 10,
            };
            (spec, SolverConfig::default(), run)
        }
    };

    if let Some((line, nu)) = num("nu")? {
        if !(nu > 0.0 && nu < 0.5) {
            return Err(config_err(line, format!("nu out of range (0, 0.5): {nu}")));
        }
        spec.nu = nu;
    }
    if let Some((line, v)) = values.get("plane") {
        spec.plane_condition = match v.to_ascii_lowercase().as_str() {
            "strain" | "plane_strain" => PlaneCondition::PlaneStrain,
            "stress" | "plane_stress" => PlaneCondition::PlaneStress,
            other => return Err(config_err(*line, format!("plane must be strain or stress, got '{other}'"))),
        };
    }
    if let Some((line, r)) = num("r")? {
        if !(r > 0.0 && r < 1.0) {
            return Err(config_err(line, format!("r out of range (0, 1): {r}")));
        }
        spec.r = r;
    }
    if let Some((_, t)) = num("theta1")? {
        spec.theta1 = t;
    }
    if let Some((_, t)) = num("theta2")? {
        spec.theta2 = t;
    }
    if !(spec.theta1 < spec.theta2 && spec.theta2 < spec.theta1 + 2.0 * PI) {
        let line = values
            .get("theta2")
            .or_else(|| values.get("theta1"))
            .map(|(l, _)| *l)
            .unwrap_or(0);
        return Err(config_err(line, "theta ordering violated: need theta1 < theta2 < theta1 + 2pi"));
    }

    if let Some((_, n)) = int("n")? {
        solver.n = n;
    }
    if let Some((line, e)) = num("epsilon")? {
        if !(e > 0.0) {
            return Err(config_err(line, "epsilon must be positive"));
        }
        solver.epsilon = e;
    }
    if let Some((_, m)) = int("max_reps")? {
        solver.max_reps = m;
    }
    if let Some((_, m)) = int("m1")? {
        solver.m1 = m;
    }
    if let Some((_, m)) = int("m2")? {
        solver.m2 = m;
    }
    if let Some((line, v)) = values.get("quadrature") {
        solver.quadrature = parse_rule(v).ok_or_else(|| config_err(*line, format!("unknown quadrature '{v}'")))?;
    }
    if let Some((line, v)) = values.get("sign_flip") {
        let b = parse_bool(v).ok_or_else(|| config_err(*line, format!("malformed boolean '{v}'")))?;
        solver.sign_flip = b;
        run.sign_flip = b;
    }
    if let Some((line, v)) = values.get("validate") {
        run.emit_validation = parse_bool(v).ok_or_else(|| config_err(*line, format!("malformed boolean '{v}'")))?;
    }
    if let Some((line, v)) = values.get("solution") {
        run.solution = v.parse().map_err(|e: Error| config_err(*line, e.to_string()))?;
    }
    if let Some((_, s)) = int("samples")? {
        run.samples_per_circle = s;
    }
    if let Some((_, m)) = int("m2_multiplier")? {
        run.m2_multiplier = m;
    }
    if let Some((line, v)) = values.get("radii") {
        run.sample_radii = v
            .split(',')
            .map(|x| parse_number(x).ok_or_else(|| config_err(*line, format!("malformed radius '{}'", x.trim()))))
            .collect::<Result<_>>()?;
    }
    if run.sample_radii.is_empty() {
        run.sample_radii = vec![spec.r, (spec.r + 1.0) / 2.0, 1.0];
    }

    for &(line, kind, k, v) in &harmonics {
        if k.unsigned_abs() > solver.n as u64 {
            return Err(config_err(line, format!("harmonic |{k}| exceeds N = {}", solver.n)));
        }
        let old = spec.traction.get(k);
        let new = match kind {
            'p' => Complex64::new(v, old.im),
            _ => Complex64::new(old.re, v),
        };
        spec.traction.set(k, new);
    }

    spec.validate()?;
    solver.validate()?;
    spec.check_truncation(solver.n)?;
    run.validate(&spec)?;
    Ok((spec, solver, run))
}

pub(crate) fn parse_rule(text: &str) -> Option<QuadratureRule> {
    match text.trim().to_ascii_lowercase().as_str() {
        "open-sum" | "open_sum" | "opensum" => Some(QuadratureRule::OpenSum),
        "double-exponential" | "double_exponential" | "tanh-sinh" | "de" => Some(QuadratureRule::DoubleExponential),
        _ => None,
    }
}
