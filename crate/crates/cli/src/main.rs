mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use collapse_gauge::channel::{helstrom_upper_bound, reliability_density, reliability_pure};
use collapse_gauge::helstrom::{collapse_helstrom, helstrom_optimal, HelstromOptimum};
use collapse_gauge::lambda::{
    chernoff_bound, conjecture_bound, good_p_threshold, lambda_p, markov_bound,
    single_negative_regime,
};
use collapse_gauge::montecarlo::{estimate_lambda, estimate_positive_measure, estimate_reliability};
use collapse_gauge::search::{maximize_lambda, uniform_projector_effect, SearchStrategy};
use collapse_gauge::serialize::{
    density_from_json, effect_from_json, effect_to_json, hermitian_from_json, state_from_json,
};
use collapse_gauge::{CollapseParams, DensityMatrix, Effect, PureState};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<collapse_gauge::Error> for CliError {
    fn from(e: collapse_gauge::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "collapse-gauge",
    version,
    about = "Detectability of wave-function collapse: experiment reliabilities, optimal \
             discrimination, and the measure of states where an experiment beats blind guessing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reliability of one experiment on one state
    Reliability {
        /// Effect: JSON file, or zero | identity | uniform-projector | rank-k:K
        #[arg(long)]
        effect: String,
        /// Pure state: JSON file, or uniform | basis:K
        #[arg(long, conflicts_with = "rho")]
        state: Option<String>,
        /// Density matrix JSON file
        #[arg(long)]
        rho: Option<String>,
        /// Collapse probability in [0, 1]
        #[arg(long)]
        p: f64,
        /// Dimension; required when every input is a named built-in
        #[arg(long)]
        d: Option<usize>,
        /// Write the result to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal discrimination reliability and the effect attaining it
    Helstrom {
        /// First hypothesis (density matrix JSON file), prior p
        #[arg(long, requires = "rho2", conflicts_with_all = ["rho", "state"])]
        rho1: Option<String>,
        /// Second hypothesis (density matrix JSON file), prior 1-p
        #[arg(long)]
        rho2: Option<String>,
        /// Collapse instance: density matrix JSON file
        #[arg(long, conflicts_with = "state")]
        rho: Option<String>,
        /// Collapse instance: pure state (JSON file, or uniform | basis:K)
        #[arg(long)]
        state: Option<String>,
        /// Prior probability of the first hypothesis (collapse probability)
        #[arg(long)]
        p: f64,
        /// Dimension for named states
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact measure of states where the effect beats blind guessing
    Lambda {
        /// Effect: JSON file, or zero | identity | uniform-projector | rank-k:K
        #[arg(long)]
        effect: String,
        /// Collapse probability in (0, 1)
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic bounds on the measure at a given collapse probability
    Bounds {
        /// Collapse probability in [0, 1]
        #[arg(long)]
        p: f64,
        /// Dimension; unlocks the dimension-dependent bounds
        #[arg(long)]
        d: Option<usize>,
        /// Effect for the trace-dependent bound
        #[arg(long)]
        effect: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimates with binomial standard errors
    Mc {
        /// What to estimate
        #[arg(long, value_enum)]
        method: McMethod,
        /// Effect (lambda and reliability estimates)
        #[arg(long)]
        effect: Option<String>,
        /// Pure state (reliability estimates)
        #[arg(long)]
        state: Option<String>,
        /// Hermitian operator JSON file (positive-measure estimates)
        #[arg(long)]
        operator: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Sample count
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for effects maximizing the measure
    Search {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        /// Number of candidate evaluations
        #[arg(long, default_value_t = 10_000)]
        budget: u64,
        /// uniform_projector | rank_k_projectors | spectrum_parametrized | random_restart_local
        #[arg(long, default_value = "random_restart_local")]
        strategy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure and bounds across a grid of collapse probabilities, as CSV
    Sweep {
        /// Effect: JSON file, or zero | identity | uniform-projector | rank-k:K
        #[arg(long)]
        effect: String,
        #[arg(long, default_value_t = 0.05)]
        p_min: f64,
        #[arg(long, default_value_t = 0.95)]
        p_max: f64,
        /// Number of grid points
        #[arg(long, default_value_t = 19)]
        steps: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full property suite and print a per-theorem pass/fail table
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum McMethod {
    /// Fraction of states where the effect beats blind guessing
    Lambda,
    /// End-to-end simulation of the collapse experiment
    Reliability,
    /// Fraction of states with positive quadratic form
    Measure,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("COLLAPSE_GAUGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError::Validation(format!(
                "COLLAPSE_GAUGE_THREADS must be a positive integer, got '{raw}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("thread pool setup failed: {e}")))?;
    Ok(())
}

fn run(command: Command) -> CliResult<ExitCode> {
    match command {
        Command::Reliability { effect, state, rho, p, d, out } => {
            let text = cmd_reliability(&effect, state.as_deref(), rho.as_deref(), p, d)?;
            emit(&text, out.as_deref())?;
        }
        Command::Helstrom { rho1, rho2, rho, state, p, d, out } => {
            let text = cmd_helstrom(rho1.as_deref(), rho2.as_deref(), rho.as_deref(), state.as_deref(), p, d)?;
            emit(&text, out.as_deref())?;
        }
        Command::Lambda { effect, p, d, out } => {
            let text = cmd_lambda(&effect, p, d)?;
            emit(&text, out.as_deref())?;
        }
        Command::Bounds { p, d, effect, out } => {
            let text = cmd_bounds(p, d, effect.as_deref())?;
            emit(&text, out.as_deref())?;
        }
        Command::Mc { method, effect, state, operator, p, n, seed, d, out } => {
            let text = cmd_mc(method, effect.as_deref(), state.as_deref(), operator.as_deref(), p, n, seed, d)?;
            emit(&text, out.as_deref())?;
        }
        Command::Search { d, p, budget, strategy, seed, out } => {
            let text = cmd_search(d, p, budget, &strategy, seed)?;
            emit(&text, out.as_deref())?;
        }
        Command::Sweep { effect, p_min, p_max, steps, d, out } => {
            let text = cmd_sweep(&effect, p_min, p_max, steps, d)?;
            emit(&text, out.as_deref())?;
        }
        Command::Verify { seed } => {
            return Ok(if verify::run(seed) { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reliability(
    effect: &str,
    state: Option<&str>,
    rho: Option<&str>,
    p: f64,
    d: Option<usize>,
) -> CliResult<String> {
    let reliability = match (state, rho) {
        (Some(s), None) => {
            let psi = load_state(s, d)?;
            let e = load_effect(effect, Some(psi.d()))?;
            let params = CollapseParams::new(p, psi.d())?;
            reliability_pure(&psi, params, &e)?
        }
        (None, Some(r)) => {
            let rho = load_density(r)?;
            let e = load_effect(effect, Some(rho.d()))?;
            let params = CollapseParams::new(p, rho.d())?;
            reliability_density(&rho, params, &e)?
        }
        (None, None) => {
            return Err(CliError::Validation("pass --state or --rho".into()));
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let blind = p.max(1.0 - p);
    Ok(pretty(&json!({
        "reliability": reliability,
        "blind_reliability": blind,
        "beats_blind": reliability > blind,
    })))
}

fn cmd_helstrom(
    rho1: Option<&str>,
    rho2: Option<&str>,
    rho: Option<&str>,
    state: Option<&str>,
    p: f64,
    d: Option<usize>,
) -> CliResult<String> {
    let (optimum, collapse_bound): (HelstromOptimum, Option<f64>) = match (rho1, rho, state) {
        (Some(r1), None, None) => {
            let rho1 = load_density(r1)?;
            let rho2 = load_density(rho2.expect("clap requires rho2 with rho1"))?;
            (helstrom_optimal(&rho1, &rho2, p)?, None)
        }
        (None, Some(r), None) => {
            let rho = load_density(r)?;
            let params = CollapseParams::new(p, rho.d())?;
            (collapse_helstrom(&rho, p)?, Some(helstrom_upper_bound(params)))
        }
        (None, None, Some(s)) => {
            let psi = load_state(s, d)?;
            let rho = DensityMatrix::from_pure(&psi);
            let params = CollapseParams::new(p, rho.d())?;
            (collapse_helstrom(&rho, p)?, Some(helstrom_upper_bound(params)))
        }
        _ => {
            return Err(CliError::Validation(
                "pass either --rho1 with --rho2, or a collapse instance via --rho or --state".into(),
            ));
        }
    };
    let mut result = json!({
        "optimal_reliability": optimum.reliability,
        "blind_reliability": p.max(1.0 - p),
        "effect": effect_value(&optimum.effect),
    });
    if let Some(bound) = collapse_bound {
        result["collapse_upper_bound"] = json!(bound);
    }
    Ok(pretty(&result))
}

fn cmd_lambda(effect: &str, p: f64, d: Option<usize>) -> CliResult<String> {
    let e = load_effect(effect, d)?;
    let params = CollapseParams::new(p, e.d())?;
    let result = lambda_p(&e, params)?;
    Ok(pretty(&json!({
        "lambda": result.value,
        "method": result.method.to_string(),
        "perturbation_applied": result.perturbation_applied,
    })))
}

fn cmd_bounds(p: f64, d: Option<usize>, effect: Option<&str>) -> CliResult<String> {
    let e = effect.map(|spec| load_effect(spec, d)).transpose()?;
    let dim = d.or_else(|| e.as_ref().map(Effect::d));
    let params = CollapseParams::new(p, dim.unwrap_or(2))?;
    let mut result = json!({
        "blind_reliability": p.max(1.0 - p),
        "chernoff": chernoff_bound(params),
        "single_negative_regime": single_negative_regime(p),
    });
    if let Some(dim) = dim {
        result["conjecture_bound"] = json!(conjecture_bound(dim)?);
        if dim >= 3 {
            result["good_p_threshold"] = json!(good_p_threshold(dim)?);
        }
    }
    if let Some(e) = &e {
        result["markov"] = json!(markov_bound(e, CollapseParams::new(p, e.d())?));
    }
    Ok(pretty(&result))
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc(
    method: McMethod,
    effect: Option<&str>,
    state: Option<&str>,
    operator: Option<&str>,
    p: f64,
    n: u64,
    seed: u64,
    d: Option<usize>,
) -> CliResult<String> {
    let estimate = match method {
        McMethod::Lambda => {
            let spec = effect.ok_or_else(|| CliError::Validation("--method lambda needs --effect".into()))?;
            let e = load_effect(spec, d)?;
            let params = CollapseParams::new(p, e.d())?;
            estimate_lambda(&e, params, n, seed)?
        }
        McMethod::Reliability => {
            let state_spec =
                state.ok_or_else(|| CliError::Validation("--method reliability needs --state".into()))?;
            let effect_spec =
                effect.ok_or_else(|| CliError::Validation("--method reliability needs --effect".into()))?;
            let psi = load_state(state_spec, d)?;
            let e = load_effect(effect_spec, Some(psi.d()))?;
            let params = CollapseParams::new(p, psi.d())?;
            estimate_reliability(&psi, params, &e, n, seed)?
        }
        McMethod::Measure => {
            let path = operator
                .ok_or_else(|| CliError::Validation("--method measure needs --operator <file>".into()))?;
            let op = hermitian_from_json(&read_file(path)?)?;
            estimate_positive_measure(&op, n, seed)?
        }
    };
    serde_json::to_string_pretty(&estimate)
        .map_err(|e| CliError::Validation(format!("cannot encode result: {e}")))
}

fn cmd_search(d: usize, p: f64, budget: u64, strategy: &str, seed: u64) -> CliResult<String> {
    let strategy: SearchStrategy = strategy.parse().map_err(CliError::from)?;
    let report = maximize_lambda(d, p, budget, strategy, seed)?;
    Ok(pretty(&json!({
        "best_lambda": report.best_lambda,
        "p": report.p,
        "d": report.d,
        "evaluations": report.evaluations,
        "strategy": report.strategy.to_string(),
        "seed": seed,
        "conjecture_bound": conjecture_bound(d)?,
        "violated_conjecture": report.violated_conjecture,
        "best_effect": effect_value(&report.best_effect),
    })))
}

fn cmd_sweep(effect: &str, p_min: f64, p_max: f64, steps: usize, d: Option<usize>) -> CliResult<String> {
    if steps < 1 {
        return Err(CliError::Validation("--steps must be at least 1".into()));
    }
    if !(p_min > 0.0 && p_max < 1.0 && p_min <= p_max) {
        return Err(CliError::Validation(format!(
            "need 0 < p-min <= p-max < 1, got [{p_min}, {p_max}]"
        )));
    }
    if steps == 1 && p_min != p_max {
        return Err(CliError::Validation("a single step needs p-min = p-max".into()));
    }
    let e = load_effect(effect, d)?;
    let mut rows = String::from("p,lambda,method,bound_markov,bound_chernoff\n");
    for i in 0..steps {
        let p = if steps == 1 {
            p_min
        } else {
            p_min + (p_max - p_min) * i as f64 / (steps - 1) as f64
        };
        let params = CollapseParams::new(p, e.d())?;
        let result = lambda_p(&e, params)?;
        rows.push_str(&format!(
            "{:.16e},{:.16e},{},{:.16e},{:.16e}\n",
            p,
            result.value,
            result.method,
            markov_bound(&e, params),
            chernoff_bound(params),
        ));
    }
    Ok(rows.trim_end().to_string())
}

/// Results go to stdout unless --out redirects them to a file.
fn emit(text: &str, out: Option<&std::path::Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io(format!("cannot write to stdout: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always encode")
}

fn effect_value(e: &Effect) -> Value {
    serde_json::from_str(&effect_to_json(e)).expect("serializer emits valid JSON")
}

fn read_file(path: &str) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))
}

fn need_d(d: Option<usize>, what: &str) -> CliResult<usize> {
    d.ok_or_else(|| CliError::Validation(format!("named input '{what}' requires --d")))
}

fn load_effect(spec: &str, d: Option<usize>) -> CliResult<Effect> {
    match spec {
        "zero" => Ok(Effect::zero(need_d(d, spec)?)),
        "identity" => Ok(Effect::identity(need_d(d, spec)?)),
        "uniform-projector" => Ok(uniform_projector_effect(need_d(d, spec)?)?),
        s if s.starts_with("rank-k:") => {
            let k: usize = s["rank-k:".len()..]
                .parse()
                .map_err(|_| CliError::Validation(format!("cannot parse rank in '{s}'")))?;
            let dim = need_d(d, s)?;
            if k > dim {
                return Err(CliError::Validation(format!("rank {k} exceeds dimension {dim}")));
            }
            Ok(Effect::basis_projector(dim, k)?)
        }
        path => {
            let loaded = effect_from_json(&read_file_with_hint(path)?)?;
            check_declared_dim(d, loaded.d(), path)?;
            Ok(loaded)
        }
    }
}

fn load_state(spec: &str, d: Option<usize>) -> CliResult<PureState> {
    match spec {
        "uniform" => Ok(PureState::uniform(need_d(d, spec)?)?),
        s if s.starts_with("basis:") => {
            let k: usize = s["basis:".len()..]
                .parse()
                .map_err(|_| CliError::Validation(format!("cannot parse index in '{s}'")))?;
            Ok(PureState::basis_state(need_d(d, s)?, k)?)
        }
        path => {
            let loaded = state_from_json(&read_file(path)?)?;
            check_declared_dim(d, loaded.d(), path)?;
            Ok(loaded)
        }
    }
}

fn load_density(path: &str) -> CliResult<DensityMatrix> {
    Ok(density_from_json(&read_file(path)?)?)
}

fn check_declared_dim(declared: Option<usize>, actual: usize, path: &str) -> CliResult<()> {
    match declared {
        Some(d) if d != actual => Err(CliError::Validation(format!(
            "--d {d} contradicts {path}, which has dimension {actual}"
        ))),
        _ => Ok(()),
    }
}

/// Like read_file, but a miss mentions the named built-ins, since a typo in
/// a name lands here.
fn read_file_with_hint(path: &str) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Io(format!(
            "cannot read {path}: {e} (named effects: zero, identity, uniform-projector, rank-k:K)"
        ))
    })
}
