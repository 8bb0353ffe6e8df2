//! Command-line front end: argument parsing, dispatch, and CSV/JSON output.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};

use dyadic_lab::dyadic::DyadicRational;
use dyadic_lab::extremal::{
    compare_s1_gradient, edge_boundary_density, enumerate_min_edge_boundary, enumerate_min_s_norm, harper_set,
    sharpness_table, talagrand_ratio_scan, ExtremalResult, DEFAULT_BUDGET,
};
use dyadic_lab::gaussian::{iso_profile, profile_comparator, profile_equiv_scan, ProfileSample};
use dyadic_lab::inequality::{
    bellman_solve, check_bobkov, check_obstacle, check_three_point, check_two_point, default_q_grid,
    is_exact_fixed_point, lift_to_bivariate, CheckReport, GridFunction, SolverParams, DEFAULT_CAP, DEFAULT_MAX_ITERS,
};
use dyadic_lab::numeric::{dyadic_ratio, format_rational, rational_to_f64, DEFAULT_CONV_TOL, DEFAULT_INEQ_TOL};
use dyadic_lab::staircase::{bn_scaled, check_f_identities, check_p_identities, entropy_comparator, modulus_scan, Staircase};
use dyadic_lab::Number;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_VAR: &str = "DYADIC_LAB_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "dyadic-lab", version, about = "Exact and numerical checks of sharp lower bounds for dyadic square functions")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Grid or tree depth n
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Slack for floating-point checks
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; defaults to stdout, or to a file in $DYADIC_LAB_OUTPUT_DIR
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker thread cap
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Maximum number of sets an enumeration may evaluate
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Function {
    /// The staircase P
    P,
    /// min(x, 1-x)
    Xstar,
    /// 2x(1-x)
    Quadratic,
    /// The Gaussian isoperimetric profile
    Gaussian,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Table of P(x) and x* log2(1/x*) on D_n
    #[command(visible_alias = "figure1")]
    PTable,
    /// Inequality and identity checks
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Grid-maximal Bellman function by value iteration
    Bellman {
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
    },
    /// Exhaustive minimisation over sets of fixed measure
    Bruteforce {
        #[arg(value_enum, default_value_t = Objective::Snorm)]
        objective: Objective,
        /// Cardinality; every k when omitted
        #[arg(long)]
        k: Option<u64>,
    },
    /// Square-function integrals of [0, 2^-k)
    Sharpness {
        #[arg(long, default_value_t = 24)]
        k_max: u32,
    },
    /// Gaussian isoperimetric profile on D_n
    Gaussian,
    /// Edge isoperimetry on the hypercube
    Hypercube {
        #[command(subcommand)]
        task: HypercubeCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    TwoPoint(FunctionArg),
    ThreePoint {
        #[command(flatten)]
        function: FunctionArg,
        /// Comma-separated ascending q values
        #[arg(long, value_delimiter = ',')]
        q_grid: Option<Vec<f64>>,
    },
    Bobkov(FunctionArg),
    Obstacle(FunctionArg),
    /// Digit-sum and staircase identities
    Identities,
    /// Empirical modulus of continuity of P
    Modulus {
        #[arg(long)]
        m_max: Option<u32>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FunctionArg {
    /// Candidate function; chosen from (alpha, beta) when omitted
    #[arg(long, value_enum)]
    pub function: Option<Function>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Snorm,
    Edges,
}

#[derive(Subcommand, Debug)]
pub enum HypercubeCommand {
    Harper,
    Talagrand {
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    Compare,
}

/// Every parameter after defaults are applied.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub depth: u32,
    pub alpha: f64,
    pub beta: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<Function>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_grid: Option<Vec<f64>>,
    pub budget: u64,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// What a command produces: a verdict, scalar facts, and an optional table.
struct Outcome {
    passed: bool,
    summary: Map<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Outcome {
    fn new(passed: bool) -> Self {
        Self { passed, summary: Map::new(), columns: Vec::new(), rows: Vec::new() }
    }

    fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.summary.insert(key.to_string(), serde_json::to_value(value).expect("plain data serializes"));
        self
    }

    fn table(mut self, columns: Vec<&'static str>, rows: Vec<Vec<Value>>) -> Self {
        self.columns = columns;
        self.rows = rows;
        self
    }

    /// One row per violation.
    fn report(report: &CheckReport) -> Self {
        let rows = report
            .violations
            .iter()
            .map(|v| vec![json!(v.witness), json!(v.lhs), json!(v.rhs), json!(v.gap)])
            .collect();
        Self::new(report.passed)
            .with("scanned", report.scanned)
            .with("violation_count", report.violation_count)
            .with("exact", report.exact)
            .table(vec!["witness", "lhs", "rhs", "gap"], rows)
    }
}

fn exact(r: &num_rational::BigRational) -> Value {
    json!(format_rational(r))
}

fn grid_x(k: u64, n: u32) -> (Value, Value) {
    let x = dyadic_ratio(BigInt::from(k), n);
    (exact(&x), json!(k as f64 / (n as f64).exp2()))
}

fn command_name(command: &Command) -> String {
    match command {
        Command::PTable => "p-table".into(),
        Command::Verify { check } => format!(
            "verify-{}",
            match check {
                VerifyCommand::TwoPoint(_) => "two-point",
                VerifyCommand::ThreePoint { .. } => "three-point",
                VerifyCommand::Bobkov(_) => "bobkov",
                VerifyCommand::Obstacle(_) => "obstacle",
                VerifyCommand::Identities => "identities",
                VerifyCommand::Modulus { .. } => "modulus",
            }
        ),
        Command::Bellman { .. } => "bellman".into(),
        Command::Bruteforce { objective, .. } => format!("bruteforce-{}", serde_json::to_value(objective).unwrap().as_str().unwrap()),
        Command::Sharpness { .. } => "sharpness".into(),
        Command::Gaussian => "gaussian".into(),
        Command::Hypercube { task } => format!(
            "hypercube-{}",
            match task {
                HypercubeCommand::Harper => "harper",
                HypercubeCommand::Talagrand { .. } => "talagrand",
                HypercubeCommand::Compare => "compare",
            }
        ),
    }
}

fn default_depth(command: &Command) -> u32 {
    match command {
        Command::PTable => 12,
        Command::Verify { check: VerifyCommand::Bobkov(_) } => 9,
        Command::Verify { check: VerifyCommand::ThreePoint { .. } } => 8,
        Command::Verify { check: VerifyCommand::Modulus { .. } } => 12,
        Command::Verify { .. } => 10,
        Command::Bellman { .. } => 8,
        Command::Bruteforce { .. } | Command::Hypercube { task: HypercubeCommand::Talagrand { .. } } => 3,
        Command::Hypercube { task: HypercubeCommand::Compare } => 4,
        Command::Hypercube { task: HypercubeCommand::Harper } => 8,
        Command::Sharpness { .. } => 0,
        Command::Gaussian => 10,
    }
}

fn default_function(alpha: f64, beta: f64) -> Function {
    match (alpha, beta) {
        (a, b) if a == 1.0 && b == 1.0 => Function::P,
        (_, 2.0) => Function::Gaussian,
        _ => Function::Quadratic,
    }
}

fn resolve(cli: &Cli) -> RunConfig {
    let c = &cli.common;
    let is_bobkov = matches!(cli.command, Command::Verify { check: VerifyCommand::Bobkov(_) });
    let alpha = c.alpha.unwrap_or(match cli.command {
        Command::Sharpness { .. } => 0.5,
        _ => 1.0,
    });
    let beta = if is_bobkov { 2.0 } else { c.beta.unwrap_or(1.0) };
    let alpha = if is_bobkov { 1.0 } else { alpha };
    let function = match &cli.command {
        Command::Verify {
            check:
                VerifyCommand::TwoPoint(f)
                | VerifyCommand::Bobkov(f)
                | VerifyCommand::Obstacle(f)
                | VerifyCommand::ThreePoint { function: f, .. },
        } => Some(f.function.unwrap_or_else(|| default_function(alpha, beta))),
        _ => None,
    };
    let depth = c.depth.unwrap_or_else(|| default_depth(&cli.command));
    let mut config = RunConfig {
        command: command_name(&cli.command),
        depth,
        alpha,
        beta,
        tol: c.tol.unwrap_or(DEFAULT_INEQ_TOL),
        function,
        cap: None,
        max_iters: None,
        k: None,
        k_max: None,
        m_max: None,
        q: None,
        q_grid: None,
        budget: c.budget.unwrap_or(DEFAULT_BUDGET as u64),
        format: c.format,
        output: None,
    };
    match &cli.command {
        Command::Bellman { cap, max_iters } => {
            config.cap = Some(*cap);
            config.max_iters = Some(*max_iters);
            config.tol = c.tol.unwrap_or(DEFAULT_CONV_TOL);
        }
        Command::Bruteforce { k, .. } => config.k = *k,
        Command::Sharpness { k_max } => config.k_max = Some(*k_max),
        Command::Verify { check: VerifyCommand::Modulus { m_max } } => {
            config.m_max = Some(m_max.unwrap_or(depth.saturating_sub(2).max(1)))
        }
        Command::Verify { check: VerifyCommand::ThreePoint { q_grid, .. } } => {
            config.q_grid = Some(q_grid.clone().unwrap_or_else(default_q_grid))
        }
        Command::Hypercube { task: HypercubeCommand::Talagrand { q } } => config.q = Some(*q),
        _ => {}
    }
    let ext = match config.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    config.output = c.output.clone().or_else(|| {
        std::env::var_os(OUTPUT_DIR_VAR).map(|dir| PathBuf::from(dir).join(format!("{}.{ext}", config.command)))
    });
    config
}

fn candidate(function: Function, depth: u32) -> Result<GridFunction> {
    Ok(match function {
        Function::P => GridFunction::staircase(depth)?,
        Function::Xstar => GridFunction::x_star(depth)?,
        Function::Quadratic => GridFunction::quadratic(depth)?,
        Function::Gaussian => GridFunction::gaussian_profile(depth)?,
    })
}

/// Parses, executes, and writes output. `Ok(false)` means a check failed.
pub fn run(cli: Cli) -> Result<bool> {
    if let Some(threads) = cli.common.threads {
        if threads == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("configuring worker threads")?;
    }
    let config = resolve(&cli);
    let outcome = execute(&cli.command, &config)?;
    let text = render(&config, &outcome)?;
    match &config.output {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => io::stdout().write_all(text.as_bytes()).context("writing to stdout")?,
    }
    if !outcome.passed {
        eprintln!("{}: check failed", config.command);
    }
    Ok(outcome.passed)
}

fn render(config: &RunConfig, outcome: &Outcome) -> Result<String> {
    match config.format {
        Format::Json => {
            let rows: Vec<Value> = outcome
                .rows
                .iter()
                .map(|r| Value::Object(outcome.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                .collect();
            let doc = json!({
                "config": config,
                "passed": outcome.passed,
                "summary": outcome.summary,
                "rows": rows,
            });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let cell = |v: &Value| match v {
                Value::String(s) => s.clone(),
                Value::Null => String::new(),
                other => other.to_string(),
            };
            if outcome.columns.is_empty() || outcome.rows.is_empty() {
                w.write_record(["key", "value"])?;
                w.write_record(["passed", &outcome.passed.to_string()])?;
                for (k, v) in &outcome.summary {
                    w.write_record([k.as_str(), &cell(v)])?;
                }
            } else {
                w.write_record(&outcome.columns)?;
                for row in &outcome.rows {
                    w.write_record(row.iter().map(cell))?;
                }
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

fn execute(command: &Command, config: &RunConfig) -> Result<Outcome> {
    let n = config.depth;
    match command {
        Command::PTable => p_table(n, config.tol),
        Command::Verify { check } => verify(check, config),
        Command::Bellman { .. } => bellman(config),
        Command::Bruteforce { objective, .. } => bruteforce(*objective, config),
        Command::Sharpness { .. } => {
            let t = sharpness_table(config.alpha, config.k_max.expect("set by resolve"))?;
            let rows = t
                .rows
                .iter()
                .map(|r| vec![json!(r.k), json!(r.integral), json!(r.bound), json!(r.within_bound), json!(r.norm_ratio)])
                .collect();
            Ok(Outcome::new(t.passed())
                .with("constant", t.constant)
                .table(vec!["k", "integral", "bound", "within_bound", "norm_ratio"], rows))
        }
        Command::Gaussian => gaussian(n),
        Command::Hypercube { task } => hypercube(task, config),
    }
}

fn p_table(n: u32, tol: f64) -> Result<Outcome> {
    if n > 24 {
        bail!("p-table depth must be <= 24, got {n}");
    }
    let stairs = Staircase::new(n);
    let mut passed = true;
    let mut equalities = 0u64;
    let rows = (0..=1u64 << n)
        .map(|k| {
            let (x, xf) = grid_x(k, n);
            let p = stairs.p_value(&DyadicRational::new(k, n).expect("k <= 2^n"));
            let pf = rational_to_f64(&p);
            let comp = entropy_comparator(k as f64 / (n as f64).exp2());
            passed &= pf >= comp - tol;
            let equal = pf == comp;
            equalities += equal as u64;
            vec![x, xf, exact(&p), json!(pf), json!(comp), json!(equal)]
        })
        .collect();
    Ok(Outcome::new(passed)
        .with("equalities", equalities)
        .table(vec!["x", "x_float", "p", "p_float", "comparator", "equal"], rows))
}

fn verify(check: &VerifyCommand, config: &RunConfig) -> Result<Outcome> {
    let n = config.depth;
    let grid = || candidate(config.function.expect("set by resolve"), n);
    Ok(match check {
        VerifyCommand::TwoPoint(_) => Outcome::report(&check_two_point(&grid()?, config.alpha, config.beta, config.tol)?),
        VerifyCommand::Bobkov(_) => Outcome::report(&check_bobkov(&grid()?, config.tol)?),
        VerifyCommand::Obstacle(_) => Outcome::report(&check_obstacle(&grid()?)),
        VerifyCommand::ThreePoint { .. } => {
            let lift = lift_to_bivariate(&grid()?, config.alpha, config.beta)?;
            let q_grid = config.q_grid.as_deref().expect("set by resolve");
            Outcome::report(&check_three_point(&lift, config.alpha, config.beta, q_grid, config.tol)?)
        }
        VerifyCommand::Identities => {
            let f = check_f_identities(1 << n)?;
            let p = check_p_identities(n, config.tol)?;
            let rows = f
                .outcomes
                .iter()
                .chain(&p.outcomes)
                .map(|o| vec![json!(o.name), json!(o.checked), json!(o.passed()), json!(o.counterexample)])
                .collect();
            Outcome::new(f.passed() && p.passed()).table(vec!["identity", "checked", "passed", "counterexample"], rows)
        }
        VerifyCommand::Modulus { .. } => {
            let scan = modulus_scan(n, config.m_max.expect("set by resolve"))?;
            let rows = scan
                .rows
                .iter()
                .map(|r| vec![json!(r.m), json!(r.max_ratio), json!(r.witness.0), json!(r.witness.1)])
                .collect();
            Outcome::new(scan.constant.is_finite())
                .with("constant", scan.constant)
                .with("exhaustive", scan.exhaustive)
                .table(vec!["m", "max_ratio", "witness_k", "witness_l"], rows)
        }
    })
}

fn bellman(config: &RunConfig) -> Result<Outcome> {
    let n = config.depth;
    let params = SolverParams {
        level: n,
        alpha: config.alpha,
        beta: config.beta,
        cap: config.cap.expect("set by resolve"),
        tol: config.tol,
        max_iters: config.max_iters.expect("set by resolve"),
    };
    let out = bellman_solve(&params)?;
    let size = 1u64 << n;
    let reference: Box<dyn Fn(u64) -> f64> = match (config.alpha, config.beta) {
        (a, b) if a == 1.0 && b == 1.0 => Box::new(move |k| bn_scaled(k, n) as f64 / size as f64),
        (a, b) if a == 1.0 && b == 2.0 => Box::new(move |k| iso_profile(k as f64 / size as f64)),
        _ => Box::new(move |k| (k.min(size - k)) as f64 / size as f64),
    };
    let mut max_gap = 0.0f64;
    let rows = (0..=size)
        .map(|k| {
            let (x, xf) = grid_x(k, n);
            let g = out.grid.value_f64(k as usize);
            let r = reference(k);
            max_gap = max_gap.max((g - r).abs());
            vec![x, xf, json!(g), json!(r), json!(g - r)]
        })
        .collect();
    let mut outcome = Outcome::new(out.converged)
        .with("converged", out.converged)
        .with("iterations", out.iterations)
        .with("last_change", out.last_change)
        .with("max_abs_gap_to_reference", max_gap);
    if config.alpha == 1.0 && config.beta == 1.0 {
        let fixed = is_exact_fixed_point(&GridFunction::staircase(n)?)?;
        outcome = outcome.with("staircase_exact_fixed_point", fixed);
        outcome.passed &= fixed && max_gap <= DEFAULT_CONV_TOL;
    }
    Ok(outcome.table(vec!["x", "x_float", "value", "reference", "difference"], rows))
}

/// Lower bound the minimum must respect, if one is known for `(α, β)`.
fn bruteforce_reference(objective: Objective, alpha: f64, beta: f64, k: u64, n: u32) -> Option<Number> {
    let size = 1u64 << n;
    let x = k as f64 / size as f64;
    match (objective, alpha, beta) {
        (Objective::Edges, ..) => Some(Number::Exact(dyadic_ratio(BigInt::from(bn_scaled(k, n)), n))),
        (_, a, b) if a == 1.0 && b == 1.0 => Some(Number::Exact(dyadic_ratio(BigInt::from(bn_scaled(k, n)), n))),
        (_, a, b) if a == 1.0 && b == 2.0 => Some(Number::Float(iso_profile(x))),
        (_, a, b) if b == 1.0 && a < 1.0 => Some(Number::Float(x.min(1.0 - x))),
        _ => None,
    }
}

fn bruteforce(objective: Objective, config: &RunConfig) -> Result<Outcome> {
    let n = config.depth;
    let ks: Vec<u64> = match config.k {
        Some(k) => vec![k],
        None => (0..=1u64 << n).collect(),
    };
    let mut passed = true;
    let mut scanned = 0u64;
    let mut rows = Vec::new();
    for k in ks {
        let r: ExtremalResult = match objective {
            Objective::Snorm => enumerate_min_s_norm(n, k, config.alpha, config.beta, config.budget.into())?,
            Objective::Edges => enumerate_min_edge_boundary(n, k, config.budget.into())?,
        };
        scanned += r.sets_scanned;
        // The quasi-norm is compared, not the integral.
        let norm = match &r.minimum {
            Number::Float(v) => Number::Float(v.powf(1.0 / config.alpha)),
            exact => exact.clone(),
        };
        let reference = bruteforce_reference(objective, config.alpha, config.beta, k, n);
        let ok = match (&norm, &reference) {
            (Number::Exact(a), Some(Number::Exact(b))) => a == b,
            (v, Some(b)) => v.to_f64() >= b.to_f64() - config.tol,
            (_, None) => true,
        };
        passed &= ok;
        let members: Vec<String> = r
            .argmin_members()
            .iter()
            .map(|m| format!("{{{}}}", m.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
            .collect();
        rows.push(vec![
            json!(k),
            json!(r.minimum.exact_string()),
            json!(r.minimum.to_f64()),
            json!(norm.to_f64()),
            json!(reference.as_ref().map(Number::to_string)),
            json!(ok),
            json!(r.initial_segment_attains()),
            json!(r.argmin_count),
            json!(members.join(";")),
        ]);
    }
    Ok(Outcome::new(passed).with("sets_scanned", scanned).table(
        vec!["k", "minimum", "minimum_float", "norm", "reference", "matches", "initial_segment_attains", "argmin_count", "argmins"],
        rows,
    ))
}

fn gaussian(n: u32) -> Result<Outcome> {
    let sample = ProfileSample::new(n)?;
    let scan = profile_equiv_scan(n)?;
    let size = 1u64 << n;
    let rows = sample
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let (x, xf) = grid_x(k as u64, n);
            let comp = profile_comparator(k as f64 / size as f64);
            let ratio = if comp > 0.0 { json!(v / comp) } else { Value::Null };
            vec![x, xf, json!(v), json!(comp), ratio]
        })
        .collect();
    Ok(Outcome::new(true)
        .with("min_ratio", scan.min_ratio)
        .with("min_at", scan.min_at)
        .with("max_ratio", scan.max_ratio)
        .with("max_at", scan.max_at)
        .table(vec!["x", "x_float", "profile", "comparator", "ratio"], rows))
}

fn hypercube(task: &HypercubeCommand, config: &RunConfig) -> Result<Outcome> {
    let n = config.depth;
    Ok(match task {
        HypercubeCommand::Harper => {
            let mut passed = true;
            let rows = (0..=1u64 << n)
                .map(|k| {
                    let density = edge_boundary_density(&harper_set(n, k)?);
                    let bn = dyadic_ratio(BigInt::from(bn_scaled(k, n)), n);
                    passed &= density == bn;
                    Ok(vec![json!(k), exact(&density), exact(&bn), json!(density == bn)])
                })
                .collect::<Result<Vec<_>>>()?;
            Outcome::new(passed).table(vec!["k", "density", "bn", "equal"], rows)
        }
        HypercubeCommand::Talagrand { .. } => {
            let scan = talagrand_ratio_scan(n, config.q.expect("set by resolve"), config.budget.into())?;
            let rows = scan.rows.iter().map(|r| vec![json!(r.k), json!(r.min_ratio), json!(r.argmin)]).collect();
            Outcome::new(scan.min_ratio > 0.0)
                .with("min_ratio", scan.min_ratio)
                .with("argmin", scan.argmin)
                .with("sets_scanned", scan.sets_scanned)
                .table(vec!["k", "min_ratio", "argmin_mask"], rows)
        }
        HypercubeCommand::Compare => Outcome::report(&compare_s1_gradient(n)?),
    })
}
