//! Command-line front end.
//!
//! Exit status: 0 success, 1 analysis-negative verdict (resonant, not a
//! contraction, linearization rejected, ...), 2 usage or input errors.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polydyn_core::dynamics::{
    check_coordinate_laws, classify_growth, classify_plane, contraction_recurrence_check, orbit,
    strict_algebraicity_report, AlgebraicityStatus, ContractionConfig, DynamicsError, GrowthVerdict, Norm, OrbitError,
    PlaneVerdict, SampleOutcome, Verdict, MIN_GROWTH_ENTRIES,
};
use polydyn_core::linalg::{eigen_decompose, eigenvalues, EigenError};
use polydyn_core::linearize::{
    check_resonance_numeric, check_resonance_symbolic, eigen_symbols_gamma_d, poincare_dulac, verify_linearization,
    LinearizationResult, LinearizeConfig, LinearizeError, ResonanceReport, TruncatedMap, VerifyConfig,
};
use polydyn_core::{
    make_gamma_d, parse_rational, rat, Coefficient, Complex64, DegreeSequenceError, MapError, PolyMap,
    RangeCheck, Rational,
};
use thiserror::Error;

use crate::cache::SharedIterateCache;
use crate::parallel::{contraction_evidence_parallel, threads_from_env};
use crate::parse::{parse_map, MapSpec, ParseError};
use crate::report::{Report, Table};

#[derive(Debug, Parser)]
#[command(name = "polydyn", version, about = "Iterate and analyse polynomial automorphisms of affine space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact degrees of f^1 .. f^N.
    Degseq(DegseqArgs),
    /// Degree-growth class (plane trichotomy in dimension 2).
    Classify(ClassifyArgs),
    /// Exact orbit of a rational point.
    Orbit(OrbitArgs),
    /// Sampled-orbit contraction evidence.
    Contract(ContractArgs),
    /// Symbolic Jacobian matrix and determinant.
    Jacobian(PlainArgs),
    /// Eigenvalues of the linear part at the origin.
    Eigen(PlainArgs),
    /// Resonance relations among the eigenvalues at the origin.
    Resonance(ResonanceArgs),
    /// Truncated Poincare-Dulac linearization.
    Linearize(LinearizeArgs),
    /// Linearize, then check the conjugacy along sampled orbits.
    VerifyLinearize(VerifyArgs),
    /// Unbounded degree growth next to a successful holomorphic linearization.
    #[command(name = "demo-theorem-4-3")]
    DemoTheorem43(DemoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    /// Map-definition file; the first map in it is used.
    #[arg(long, value_name = "FILE", conflicts_with = "gamma_d")]
    pub map: Option<PathBuf>,
    /// Use the built-in gamma_d family (default: gamma_3).
    #[arg(long = "gamma-d", visible_alias = "d", value_name = "D")]
    pub gamma_d: Option<usize>,
    /// Parameters of gamma_d, e.g. 1/3,1/4,1/5.
    #[arg(long, value_name = "LIST", value_delimiter = ',', conflicts_with = "map")]
    pub lambda: Option<Vec<String>>,
    /// Allow parameters outside (0, 1/2).
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Report,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; `-` writes the data to stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum NormArg {
    #[default]
    Sup,
    Euclidean,
}

impl NormArg {
    fn norm(self) -> Norm {
        match self {
            NormArg::Sup => Norm::Sup,
            NormArg::Euclidean => Norm::Euclidean,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PlainArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DegseqArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 25)]
    pub n: u32,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 8)]
    pub n: u32,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 50)]
    pub n: u32,
    /// Start point as rationals, e.g. 1,1/2,-3 (default: all ones).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = NormArg::Sup)]
    pub norm: NormArg,
}

#[derive(Debug, Clone, Args)]
pub struct ContractArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 10.0)]
    pub radius: f64,
    /// Iteration budget per sample.
    #[arg(long, default_value_t = 200)]
    pub n: u32,
    /// Convergence threshold on the orbit norm.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = NormArg::Sup)]
    pub norm: NormArg,
    /// Start point of the exact recurrence check for gamma_3 (default 1,1,1).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x0: Option<Vec<String>>,
    /// Length of the exact recurrence check; exact denominators grow quadratically in the exponent.
    #[arg(long, default_value_t = 50)]
    pub exact_n: u32,
}

#[derive(Debug, Clone, Args)]
pub struct ResonanceArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Largest |m| examined.
    #[arg(long, default_value_t = 12)]
    pub order: u32,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct LinearizeArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Truncation order N.
    #[arg(long, default_value_t = 8)]
    pub trunc: u32,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub lin: LinearizeArgs,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    /// Orbit length.
    #[arg(long, default_value_t = 20)]
    pub n: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest acceptable orbit deviation.
    #[arg(long, default_value_t = 1e-6)]
    pub max_deviation: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Length of the degree table.
    #[arg(long, default_value_t = 25)]
    pub n: u32,
    #[arg(long, default_value_t = 8)]
    pub trunc: u32,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Resonance order bound.
    #[arg(long, default_value_t = 12)]
    pub order: u32,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("map: {0}")]
    Map(#[from] MapError),
    #[error("dynamics: {0}")]
    Dynamics(#[from] DynamicsError),
    #[error("automorphism: {0}")]
    Sequence(#[from] DegreeSequenceError),
    #[error("linearize: {0}")]
    Linearize(LinearizeError),
    #[error("linalg: {0}")]
    Eigen(#[from] EigenError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("invalid argument: {0}")]
    Argument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Negative,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Negative => 1,
        }
    }
}

/// Everything a subcommand produced; `report.tables[0]` is the CSV table.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub status: Status,
    pub report: Report,
    pub summary: Vec<String>,
}

impl RunOutput {
    fn new(report: Report) -> Self {
        Self { status: Status::Success, report, summary: Vec::new() }
    }

    fn say(&mut self, line: impl Into<String>) {
        self.summary.push(line.into());
    }

    fn negative(&mut self) {
        self.status = Status::Negative;
    }
}

/// A loaded map plus the data needed to describe it.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub map: PolyMap<Rational>,
    pub spec: MapSpec,
    /// Set for the built-in gamma_d family.
    pub lambdas: Option<Vec<Rational>>,
}

impl Loaded {
    fn names(&self) -> Vec<&str> {
        self.spec.vars.iter().map(String::as_str).collect()
    }

    fn canonical(&self) -> String {
        self.spec.render()
    }

    fn gamma3_lambdas(&self) -> Option<[Rational; 3]> {
        self.lambdas.as_ref().and_then(|l| <[Rational; 3]>::try_from(l.clone()).ok())
    }
}

const DEFAULT_LAMBDAS: [(i64, i64); 3] = [(1, 3), (1, 4), (1, 5)];

/// `1/3, 1/4, 1/5`, then `1/p` for the primes from 7 on.
pub fn default_lambdas(d: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = DEFAULT_LAMBDAS.iter().take(d).map(|&(n, m)| rat(n, m)).collect();
    let mut p = 7i64;
    while out.len() < d {
        if (2..p).take_while(|q| q * q <= p).all(|q| p % q != 0) {
            out.push(rat(1, p));
        }
        p += 2;
    }
    out
}

fn parse_point(items: &[String], what: &str) -> Result<Vec<Rational>, CliError> {
    items
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| CliError::Argument(format!("{what}: `{s}` is not a rational"))))
        .collect()
}

pub fn load_map(args: &MapArgs) -> Result<Loaded, CliError> {
    if let Some(path) = &args.map {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let spec = parse_map(&text)?;
        let map = spec.to_map()?;
        return Ok(Loaded { map, spec, lambdas: None });
    }
    let d = args.gamma_d.unwrap_or(3);
    let lambdas = match &args.lambda {
        Some(items) => parse_point(items, "--lambda")?,
        None => default_lambdas(d),
    };
    if lambdas.len() != d {
        return Err(CliError::Argument(format!("--lambda has {} entries, --gamma-d is {d}", lambdas.len())));
    }
    let check = if args.lenient { RangeCheck::Lenient } else { RangeCheck::Strict };
    let map = make_gamma_d(&lambdas, check)?;
    let vars: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    let params = lambdas.iter().enumerate().map(|(i, l)| (format!("l{}", i + 1), l.clone())).collect();
    let spec = MapSpec { name: map.name().unwrap_or("gamma").to_string(), vars, params, components: map.components().to_vec() };
    Ok(Loaded { map, spec, lambdas: Some(lambdas) })
}

/// Shortest round-trip decimal, switching to exponent form for very small or large values.
fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn complex_matrix(m: &[Vec<Rational>]) -> Vec<Vec<Complex64>> {
    m.iter().map(|row| row.iter().map(Coefficient::to_complex).collect()).collect()
}

fn degree_table(name: &str, degrees: &[u32]) -> Table {
    let mut t = Table::new(name, &["n", "deg"]);
    for (i, d) in degrees.iter().enumerate() {
        t.push([(i + 1).to_string(), d.to_string()]);
    }
    t
}

fn run_degseq(a: &DegseqArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let cache = SharedIterateCache::new(loaded.map.clone());
    let seq = cache.degree_sequence(a.n)?;
    let mut report = Report::new("degseq", &loaded.canonical());
    report.tables.push(degree_table("degrees", &seq.degrees()));
    let names = loaded.names();
    let mut cols = vec!["n".to_string()];
    cols.extend(names.iter().map(|v| format!("deg_{v}")));
    let mut comp = Table { name: "component_degrees".into(), columns: cols, rows: Vec::new() };
    for e in seq.entries() {
        comp.push(std::iter::once(e.n).chain(e.component_degrees.iter().copied()));
    }
    report.tables.push(comp);
    report.verdict = if seq.len() >= MIN_GROWTH_ENTRIES {
        classify_growth(&seq)?.verdict.label()
    } else {
        String::from("too short to classify")
    };
    report.note("degrees are exact; nothing is claimed beyond the last computed iterate");
    let mut out = RunOutput::new(report);
    let last = seq.entries().last().map(|e| format!("deg f^{} = {}", e.n, e.degree)).unwrap_or_default();
    out.say(format!("degseq {}: {last}; {}", seq.name, out.report.verdict));
    Ok(out)
}

fn run_classify(a: &ClassifyArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let mut report = Report::new("classify", &loaded.canonical());
    let (growth, degrees) = if loaded.map.dim() == 2 {
        let plane = classify_plane(&loaded.map, a.n)?;
        report.verdict = match plane.verdict {
            PlaneVerdict::AffineLike => "affine-like",
            PlaneVerdict::ElementaryLike => "elementary-like",
            PlaneVerdict::Loxodromic => "loxodromic",
            PlaneVerdict::Inconclusive => "inconclusive",
        }
        .into();
        report.note("degree-growth signature only; no conjugating map is constructed");
        (plane.growth, plane.sequence.degrees())
    } else {
        let alg = strict_algebraicity_report(&loaded.map, a.n)?;
        report.verdict = match alg.status {
            AlgebraicityStatus::ConsistentWithStrictlyAlgebraic => "bounded",
            AlgebraicityStatus::NotStrictlyAlgebraicIfTrendContinues => "growing",
            AlgebraicityStatus::Undetermined => "inconclusive",
        }
        .into();
        report.note(alg.statement);
        (alg.growth, alg.sequence.degrees())
    };
    report.tables.push(degree_table("degrees", &degrees));
    report.note(format!("growth: {}", growth.verdict.label()));
    report.note("a bounded verdict at finite N does not decide boundedness beyond N");
    report.float("empirical_dynamical_degree", growth.evidence.empirical_dynamical_degree);
    report.float("log_rate_relative_change", growth.evidence.log_rate_relative_change);
    if let GrowthVerdict::Exponential { rate } = growth.verdict {
        report.float("exponential_rate", rate);
    }
    let mut out = RunOutput::new(report);
    if out.report.verdict == "inconclusive" {
        out.negative();
    }
    out.say(format!("classify: {} ({})", out.report.verdict, growth.verdict.label()));
    Ok(out)
}

fn run_orbit(a: &OrbitArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let d = loaded.map.dim();
    let x0 = match &a.x0 {
        Some(items) => parse_point(items, "--x0")?,
        None => vec![rat(1, 1); d],
    };
    if x0.len() != d {
        return Err(CliError::Argument(format!("--x0 has {} coordinates, map dimension is {d}", x0.len())));
    }
    let mut report = Report::new("orbit", &loaded.canonical());
    let mut cols = vec!["n".to_string()];
    cols.extend(loaded.spec.vars.iter().cloned());
    cols.push("norm".into());
    let mut table = Table { name: "orbit".into(), columns: cols, rows: Vec::new() };
    let (points, norms, diverged) = match orbit(&loaded.map, &x0, a.n as usize, &a.norm.norm()) {
        Ok(o) => (o.points, o.norms, None),
        Err(OrbitError::Divergence { step, partial, .. }) => (partial.points, partial.norms, Some(step)),
        Err(OrbitError::Map(e)) => return Err(e.into()),
    };
    for (n, (p, v)) in points.iter().zip(&norms).enumerate() {
        table.push(std::iter::once(n.to_string()).chain(p.iter().map(|c| c.to_string())).chain([fmt_f64(*v)]));
    }
    report.tables.push(table);
    let last = norms.last().copied().unwrap_or(0.0);
    report.float("final_norm", last);
    let mut out_status = Status::Success;
    report.verdict = match diverged {
        Some(step) => {
            out_status = Status::Negative;
            format!("diverged at step {step}")
        }
        None => String::from("computed"),
    };
    if let Some(l) = loaded.gamma3_lambdas() {
        let bad = check_coordinate_laws(&l, &points);
        report.note(if bad.is_empty() {
            String::from("z_n = l3^n z_0 and y_n = l2 x_(n-1) hold exactly at every step")
        } else {
            format!("coordinate laws fail at steps {bad:?}")
        });
        if !bad.is_empty() {
            out_status = Status::Negative;
        }
    }
    let mut out = RunOutput::new(report);
    out.status = out_status;
    out.say(format!("orbit: {} steps, final norm {}; {}", points.len() - 1, fmt_f64(last), out.report.verdict));
    Ok(out)
}

fn run_contract(a: &ContractArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let cfg = ContractionConfig {
        samples: a.samples,
        radius: a.radius,
        n_max: a.n as usize,
        eps: a.tol,
        norm: a.norm.norm(),
        seed: a.seed,
    };
    let v = contraction_evidence_parallel(&loaded.map, &cfg, threads_from_env());
    let mut report = Report::new("contract", &loaded.canonical());
    let mut t = Table::new("samples", &["sample", "outcome", "step", "final_norm"]);
    for (i, o) in v.outcomes.iter().enumerate() {
        match *o {
            SampleOutcome::Converged { steps } => t.push([i.to_string(), "converged".into(), steps.to_string(), String::new()]),
            SampleOutcome::Diverged { step } => t.push([i.to_string(), "diverged".into(), step.to_string(), String::new()]),
            SampleOutcome::NotConverged { final_norm } => {
                t.push([i.to_string(), "not-converged".into(), a.n.to_string(), fmt_f64(final_norm)])
            }
        }
    }
    report.tables.push(t);
    if let Some(r) = v.spectral_radius_at_0 {
        report.float("spectral_radius_at_0", r);
    }
    report.float("max_iterations_used", v.max_iterations_used as f64);
    for c in &v.caveats {
        report.note(c.clone());
    }
    let mut negative = v.verdict() == Verdict::NotContraction;
    report.verdict = match v.verdict() {
        Verdict::EvidenceForContraction => "evidence-for-contraction".into(),
        Verdict::NotContraction => "not-contraction".into(),
    };
    if !v.origin_fixed {
        report.note("f(0) != 0: the origin is not a fixed point");
    }

    if let (Some(l), true) = (loaded.gamma3_lambdas(), v.origin_fixed) {
        let x0 = match &a.x0 {
            Some(items) => parse_point(items, "--x0")?,
            None => vec![rat(1, 1); 3],
        };
        let x0: [Rational; 3] =
            x0.try_into().map_err(|_| CliError::Argument("--x0 needs three coordinates".into()))?;
        match contraction_recurrence_check(&l, &x0, a.exact_n) {
            Ok(rec) => {
                let mut rt = Table::new("recurrence", &["threshold", "checked_from", "checked_to", "sum_bound", "max_bound"]);
                rt.push([
                    rec.threshold.to_string(),
                    rec.checked_from.to_string(),
                    rec.checked_to.to_string(),
                    rec.sum_bound_holds.to_string(),
                    rec.max_bound_holds.to_string(),
                ]);
                report.tables.push(rt);
                if rec.min_margin_sum.is_finite() {
                    report.float("min_margin_sum_bound", rec.min_margin_sum);
                    report.float("min_margin_max_bound", rec.min_margin_max);
                }
                report.note(format!(
                    "exact recurrence bounds checked for {} <= n <= {}: {}",
                    rec.checked_from,
                    rec.checked_to,
                    if rec.holds() { "hold" } else { "FAIL" }
                ));
                negative |= !rec.holds();
            }
            Err(DynamicsError::Parameter(msg)) => report.note(format!("recurrence check skipped: {msg}")),
            Err(e) => return Err(e.into()),
        }
    }
    let mut out = RunOutput::new(report);
    if negative {
        out.negative();
    }
    out.say(format!(
        "contract: {} ({} of {} samples converged)",
        out.report.verdict, v.converged, v.samples
    ));
    Ok(out)
}

fn run_jacobian(a: &PlainArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let names = loaded.names();
    let j = loaded.map.jacobian();
    let mut report = Report::new("jacobian", &loaded.canonical());
    let mut t = Table::new("jacobian", &["row", "col", "entry"]);
    for (r, row) in j.entries().iter().enumerate() {
        for (c, p) in row.iter().enumerate() {
            t.push([(r + 1).to_string(), (c + 1).to_string(), p.render_with(&names)]);
        }
    }
    report.tables.push(t);
    let det = j.determinant();
    let mut dt = Table::new("determinant", &["determinant"]);
    dt.push([det.render_with(&names)]);
    report.tables.push(dt);
    report.verdict = if det.degree() == 0 && !det.is_zero() {
        format!("constant determinant {}", det.constant_term())
    } else if det.is_zero() {
        String::from("zero determinant")
    } else {
        String::from("non-constant determinant")
    };
    let mut out = RunOutput::new(report);
    out.say(format!("jacobian: det = {}", det.render_with(&names)));
    Ok(out)
}

fn eigen_table(values: &[Complex64]) -> Table {
    let mut t = Table::new("eigenvalues", &["i", "re", "im", "modulus"]);
    for (i, a) in values.iter().enumerate() {
        t.push([(i + 1).to_string(), fmt_f64(a.re), fmt_f64(a.im), fmt_f64(a.norm())]);
    }
    t
}

fn lambdas_f64(l: &[Rational]) -> Vec<f64> {
    l.iter().map(|x| x.to_complex().re).collect()
}

fn run_eigen(a: &PlainArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let lp = complex_matrix(&loaded.map.linear_part()?);
    let values = eigenvalues(&lp)?;
    let mut report = Report::new("eigen", &loaded.canonical());
    report.tables.push(eigen_table(&values));
    let radius = values.iter().map(|a| a.norm()).fold(0.0, f64::max);
    report.float("spectral_radius", radius);
    match eigen_decompose(&lp) {
        Ok(_) => report.note("linear part is diagonalizable"),
        Err(e) => report.note(format!("no eigenbasis: {e}")),
    }
    if let Some(l) = &loaded.lambdas {
        let symbols = eigen_symbols_gamma_d(l.len()).map_err(CliError::Linearize)?;
        let lf = lambdas_f64(l);
        let mut st = Table::new("symbolic", &["i", "symbol", "value", "abs_error"]);
        let mut worst: f64 = 0.0;
        for (i, s) in symbols.iter().enumerate() {
            let v = s.evaluate(&lf);
            let err = (values[i] - Complex64::new(v, 0.0)).norm();
            worst = worst.max(err);
            st.push([(i + 1).to_string(), s.render(), fmt_f64(v), fmt_f64(err)]);
        }
        report.tables.push(st);
        report.float("max_symbolic_deviation", worst);
    }
    report.verdict = if radius < 1.0 { "attracting" } else { "not attracting" }.into();
    let mut out = RunOutput::new(report);
    out.say(format!("eigen: spectral radius {}; {}", fmt_f64(radius), out.report.verdict));
    Ok(out)
}

fn witness_rows(t: &mut Table, method: &str, r: &ResonanceReport) {
    for w in &r.witnesses {
        let m: Vec<String> = w.multi_index.iter().map(u32::to_string).collect();
        t.push([method.to_string(), (w.target + 1).to_string(), m.join(" ")]);
    }
}

fn run_resonance(a: &ResonanceArgs) -> Result<RunOutput, CliError> {
    if a.order < 2 {
        return Err(CliError::Argument("--order must be at least 2".into()));
    }
    let loaded = load_map(&a.map)?;
    let mut report = Report::new("resonance", &loaded.canonical());
    let mut t = Table::new("witnesses", &["method", "target", "multi_index"]);
    let values = eigenvalues(&complex_matrix(&loaded.map.linear_part()?))?;
    let numeric = check_resonance_numeric(&values, a.order, a.tol);
    let symbolic = match &loaded.lambdas {
        Some(l) => Some(check_resonance_symbolic(&eigen_symbols_gamma_d(l.len()).map_err(CliError::Linearize)?, a.order)),
        None => None,
    };
    if let Some(s) = &symbolic {
        witness_rows(&mut t, "symbolic", s);
        report.float("symbolic_pairs_checked", s.checked as f64);
        report.note("symbolic check treats the parameters as algebraically independent and is authoritative");
    }
    witness_rows(&mut t, "numeric", &numeric);
    report.tables.push(t);
    report.float("numeric_pairs_checked", numeric.checked as f64);
    report.float("tol", a.tol);
    if numeric.outside_poincare_domain {
        report.note("some eigenvalue has modulus >= 1 (outside the Poincare domain)");
    }
    let resonant = symbolic.as_ref().map_or(numeric.resonant, |s| s.resonant);
    if let Some(s) = &symbolic {
        if s.resonant != numeric.resonant {
            report.note(format!(
                "numeric check disagrees at tol {}: {} numeric witness(es)",
                fmt_f64(a.tol),
                numeric.witnesses.len()
            ));
        }
    }
    report.verdict = if resonant { "resonant" } else { "non-resonant" }.into();
    let mut out = RunOutput::new(report);
    if resonant {
        out.negative();
    }
    out.say(format!("{} up to order {}", out.report.verdict, a.order));
    Ok(out)
}

fn jet_table(name: &str, jet: &TruncatedMap, names: &[&str]) -> Table {
    let mut t = Table::new(name, &["component", "monomial", "re", "im"]);
    for (i, p) in jet.components().iter().enumerate() {
        for (m, c) in p.terms() {
            t.push([names[i].to_string(), m.render(names), fmt_f64(c.re), fmt_f64(c.im)]);
        }
    }
    t
}

fn linearization_report(report: &mut Report, r: &LinearizationResult, names: &[&str]) {
    report.tables.push(jet_table("u", &r.u, names));
    report.tables.push(jet_table("u_inverse", &r.u_inverse, names));
    report.tables.push(eigen_table(&r.eigenvalues));
    let mut dt = Table::new("denominators", &["order", "min_denominator"]);
    for (k, v) in &r.denominators_by_order {
        dt.push([k.to_string(), fmt_f64(*v)]);
    }
    report.tables.push(dt);
    report.float("residual", r.residual);
    report.float("inverse_residual", r.inverse_residual);
    report.float("min_denominator", r.min_denominator);
    report.float("min_denominator_order", f64::from(r.min_denominator_order));
    report.note(format!(
        "U is the {}-jet of the conjugator, normalized to the identity in degree 1; convergence of the full series is not checked",
        r.order()
    ));
}

/// `Ok(Err(verdict))` marks an analysis-negative outcome.
fn linearize_or_reject(
    f: &PolyMap<Rational>,
    cfg: &LinearizeConfig,
) -> Result<Result<LinearizationResult, (String, String)>, CliError> {
    match poincare_dulac(f, cfg) {
        Ok(r) => Ok(Ok(r)),
        Err(LinearizeError::Resonance(rep)) => Ok(Err((
            "resonant".into(),
            format!("{} resonance witness(es) up to order {}", rep.witnesses.len(), rep.max_order),
        ))),
        Err(e @ LinearizeError::OutsidePoincareDomain { .. }) => Ok(Err(("outside-poincare-domain".into(), e.to_string()))),
        Err(e @ LinearizeError::Convergence { .. }) => Ok(Err(("residual-above-tolerance".into(), e.to_string()))),
        Err(e) => Err(CliError::Linearize(e)),
    }
}

fn lin_config(a: &LinearizeArgs) -> Result<LinearizeConfig, CliError> {
    if a.trunc < 1 {
        return Err(CliError::Argument("--trunc must be at least 1".into()));
    }
    Ok(LinearizeConfig { order: a.trunc, tol: a.tol, ..Default::default() })
}

fn run_linearize(a: &LinearizeArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let names = loaded.names();
    let mut report = Report::new("linearize", &loaded.canonical());
    match linearize_or_reject(&loaded.map, &lin_config(a)?)? {
        Ok(r) => {
            linearization_report(&mut report, &r, &names);
            report.verdict = "linearized".into();
            let mut out = RunOutput::new(report);
            out.say(format!("linearized to order {}: residual {}", a.trunc, fmt_f64(r.residual)));
            Ok(out)
        }
        Err((verdict, why)) => {
            report.verdict = verdict;
            report.note(why.clone());
            report.tables.push(Table::new("u", &["component", "monomial", "re", "im"]));
            let mut out = RunOutput::new(report);
            out.negative();
            out.say(format!("linearize: {} ({why})", out.report.verdict));
            Ok(out)
        }
    }
}

fn run_verify(a: &VerifyArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.lin.map)?;
    let mut report = Report::new("verify-linearize", &loaded.canonical());
    let r = match linearize_or_reject(&loaded.map, &lin_config(&a.lin)?)? {
        Ok(r) => r,
        Err((verdict, why)) => {
            report.verdict = verdict;
            report.note(why);
            report.tables.push(Table::new("samples", &["sample", "max_deviation"]));
            let mut out = RunOutput::new(report);
            out.negative();
            out.say(format!("verify-linearize: {}", out.report.verdict));
            return Ok(out);
        }
    };
    let cfg = VerifyConfig { samples: a.samples, radius: a.radius, n_max: a.n, seed: a.seed };
    let v = verify_linearization(&loaded.map, &r, &cfg);
    let mut t = Table::new("samples", &["sample", "max_deviation"]);
    for (i, d) in v.per_sample.iter().enumerate() {
        t.push([i.to_string(), fmt_f64(*d)]);
    }
    report.tables.push(t);
    report.float("max_deviation", v.max_deviation);
    report.float("residual", v.residual);
    report.float("max_deviation_threshold", a.max_deviation);
    report.note(format!(
        "compared U(f^n(x)) with S L^n S^-1 U(x) for n <= {} on {} seeded points of sup-norm <= {}",
        a.n, a.samples, a.radius
    ));
    let ok = v.linear_part_is_identity && v.max_deviation < a.max_deviation && v.residual < a.lin.tol;
    report.verdict = if !v.linear_part_is_identity {
        "linear-part-not-identity".into()
    } else if ok {
        "verified".into()
    } else {
        "deviation-above-threshold".into()
    };
    let mut out = RunOutput::new(report);
    if !ok {
        out.negative();
    }
    out.say(format!("verify-linearize: {} (max deviation {})", out.report.verdict, fmt_f64(v.max_deviation)));
    Ok(out)
}

fn run_demo(a: &DemoArgs) -> Result<RunOutput, CliError> {
    let loaded = load_map(&a.map)?;
    let names = loaded.names();
    let mut report = Report::new("demo-theorem-4-3", &loaded.canonical());
    let mut ok = true;

    let seq = SharedIterateCache::new(loaded.map.clone()).degree_sequence(a.n)?;
    report.tables.push(degree_table("degrees", &seq.degrees()));
    let growth = classify_growth(&seq)?;
    let growing = !growth.verdict.is_bounded() && growth.verdict != GrowthVerdict::Inconclusive;
    ok &= growing;
    report.note(format!(
        "degree growth through N = {}: {}; unboundedness beyond N is extrapolated, not proved",
        a.n,
        growth.verdict.label()
    ));
    report.note(
        "bounded degrees characterize strict algebraicity, so growing degrees are evidence that no algebraic \
         conjugacy to a linear map exists",
    );

    let resonant = match &loaded.lambdas {
        Some(l) => {
            let r = check_resonance_symbolic(&eigen_symbols_gamma_d(l.len()).map_err(CliError::Linearize)?, a.order);
            report.float("symbolic_pairs_checked", r.checked as f64);
            r.resonant
        }
        None => {
            let values = eigenvalues(&complex_matrix(&loaded.map.linear_part()?))?;
            check_resonance_numeric(&values, a.order, LinearizeConfig::default().resonance_tol).resonant
        }
    };
    ok &= !resonant;
    report.note(format!(
        "eigenvalues at 0 are {}resonant up to order {}",
        if resonant { "" } else { "non-" },
        a.order
    ));

    let cfg = LinearizeConfig { order: a.trunc, tol: a.tol, ..Default::default() };
    match linearize_or_reject(&loaded.map, &cfg)? {
        Ok(r) => {
            let v = verify_linearization(
                &loaded.map,
                &r,
                &VerifyConfig { samples: a.samples, radius: a.radius, n_max: 20, seed: a.seed },
            );
            report.tables.push(eigen_table(&r.eigenvalues));
            let mut dt = Table::new("denominators", &["order", "min_denominator"]);
            for (k, d) in &r.denominators_by_order {
                dt.push([k.to_string(), fmt_f64(*d)]);
            }
            report.tables.push(dt);
            report.tables.push(jet_table("u", &r.u, &names));
            report.float("residual", r.residual);
            report.float("max_deviation", v.max_deviation);
            report.float("min_denominator", r.min_denominator);
            let verified = v.linear_part_is_identity && v.max_deviation < 1e-6;
            ok &= verified;
            report.note(format!(
                "holomorphic linearization: {}-jet residual {} (tol {}), orbit deviation {}",
                a.trunc,
                fmt_f64(r.residual),
                fmt_f64(a.tol),
                fmt_f64(v.max_deviation)
            ));
        }
        Err((verdict, why)) => {
            ok = false;
            report.note(format!("linearization rejected: {verdict}: {why}"));
        }
    }
    report.note(
        "holomorphically conjugate to a linear map but not algebraically: this run exhibits computable evidence \
         for both halves, it proves neither",
    );
    report.verdict = if ok {
        "holomorphically linearizable with growing degrees".into()
    } else {
        "dichotomy not exhibited".into()
    };
    let mut out = RunOutput::new(report);
    if !ok {
        out.negative();
    }
    out.say(format!("demo-theorem-4-3: {}", out.report.verdict));
    for n in &out.report.notes.clone() {
        out.say(format!("  {n}"));
    }
    Ok(out)
}

pub fn run(command: &Command) -> Result<RunOutput, CliError> {
    match command {
        Command::Degseq(a) => run_degseq(a),
        Command::Classify(a) => run_classify(a),
        Command::Orbit(a) => run_orbit(a),
        Command::Contract(a) => run_contract(a),
        Command::Jacobian(a) => run_jacobian(a),
        Command::Eigen(a) => run_eigen(a),
        Command::Resonance(a) => run_resonance(a),
        Command::Linearize(a) => run_linearize(a),
        Command::VerifyLinearize(a) => run_verify(a),
        Command::DemoTheorem43(a) => run_demo(a),
    }
}

fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Degseq(a) => &a.output,
        Command::Classify(a) => &a.output,
        Command::Orbit(a) => &a.output,
        Command::Contract(a) => &a.output,
        Command::Jacobian(a) | Command::Eigen(a) => &a.output,
        Command::Resonance(a) => &a.output,
        Command::Linearize(a) => &a.output,
        Command::VerifyLinearize(a) => &a.lin.output,
        Command::DemoTheorem43(a) => &a.output,
    }
}

/// The bytes `--format` selects.
pub fn render_output(out: &RunOutput, format: Format) -> String {
    match format {
        Format::Report => out.report.to_json(),
        Format::Csv => out.report.tables.first().map(Table::to_csv).unwrap_or_default(),
    }
}

/// Parses `args` (including the program name), runs, writes outputs; returns the exit code.
pub fn main_with<W1: std::io::Write, W2: std::io::Write>(args: &[String], stdout: &mut W1, stderr: &mut W2) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let out = match run(&cli.command) {
        Ok(out) => out,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let o = output_args(&cli.command);
    let data = render_output(&out, o.format);
    let summary = out.summary.join("\n") + "\n";
    match &o.out {
        Some(path) if path.as_os_str() == "-" => {
            let _ = stdout.write_all(data.as_bytes());
            let _ = stderr.write_all(summary.as_bytes());
        }
        Some(path) => {
            if let Err(e) = fs::write(path, data) {
                let _ = writeln!(stderr, "error: writing {}: {e}", path.display());
                return 2;
            }
            let _ = stdout.write_all(summary.as_bytes());
        }
        None => {
            let _ = stdout.write_all(summary.as_bytes());
        }
    }
    out.status.code()
}

#[cfg(test)]
mod tests {
    use super::*;
    use polydyn_core::Monomial;

    #[test]
    fn default_parameters() {
        assert_eq!(default_lambdas(3), [rat(1, 3), rat(1, 4), rat(1, 5)]);
        assert_eq!(default_lambdas(6)[3..], [rat(1, 7), rat(1, 11), rat(1, 13)]);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn monomial_rendering_uses_aliases() {
        assert_eq!(Monomial::new(vec![1, 0, 2]).render(&["x", "y", "z"]), "x*z^2");
    }
}
