use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use cachecost::experiment::{run_sweep, SweepResults, SweepSpec, DEFAULT_CONFIDENCE, DEFAULT_SCENARIOS};
use cachecost::io::{read_instance, read_plan, write_instance_binary, write_instance_json, write_plan};
use cachecost::oracle::{certify, random_toy_instance, SmallInstanceLimits, ToyShape};
use cachecost::planner::{lower_bound_cost, plan};
use cachecost::scenario::{generate, ScenarioConfig, DEFAULT_AVAILABILITY_PROB};
use cachecost::{evaluate, validate, Error, Instance64, Objective};
use clap::{Args, Parser, Subcommand};
use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Catalogs at least this large also get a binary instance file.
const BINARY_CACHE_THRESHOLD: usize = 1_000_000;
const ORACLE_REL_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "cachecost", version, about = "Cost-aware cache provisioning at ISP border links")]
struct Cli {
    /// Upper bound on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance.
    Generate(GenerateArgs),
    /// Plan border caches for an instance.
    Plan(PlanArgs),
    /// Evaluate a plan against an instance.
    Evaluate(EvaluateArgs),
    /// Compare the greedy planners with exhaustive search on random toy instances.
    OracleCheck(OracleArgs),
    /// Run a parameter sweep.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// TOML or JSON file with scenario settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    catalog_size: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    availability_prob: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    scenario: Option<u64>,
    /// Instance JSON path.
    #[arg(long)]
    out: PathBuf,
    /// Also write `<out>.bin` regardless of catalog size.
    #[arg(long)]
    binary: bool,
}

#[derive(Args)]
struct PlanArgs {
    /// Instance file (JSON or binary).
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "min-cost")]
    objective: Objective,
    /// Overrides the budget stored in the instance.
    #[arg(long)]
    budget: Option<u64>,
    /// Plan JSON path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    plan: PathBuf,
    /// Overrides the budget stored in the instance.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = ToyShape::default().max_objects)]
    max_objects: usize,
    #[arg(long, default_value_t = ToyShape::default().max_links)]
    max_links: usize,
    #[arg(long, default_value_t = ToyShape::default().max_budget)]
    max_budget: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML or JSON file with sweep settings; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated price ratios.
    #[arg(long, value_delimiter = ',')]
    gamma: Option<Vec<f64>>,
    /// Comma-separated Zipf exponents.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Comma-separated cache budgets.
    #[arg(long, value_delimiter = ',')]
    budget: Option<Vec<u64>>,
    #[arg(long)]
    catalog_size: Option<usize>,
    #[arg(long)]
    scenarios: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long)]
    availability_prob: Option<f64>,
    /// Output directory for `sweep.csv` and `sweep.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    catalog_size: Option<usize>,
    zipf_alpha: Option<f64>,
    price_ratio: Option<f64>,
    budget: Option<u64>,
    availability_prob: Option<f64>,
    seed: Option<u64>,
    scenario: Option<u64>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    gammas: Option<Vec<f64>>,
    alphas: Option<Vec<f64>>,
    budgets: Option<Vec<u64>>,
    catalog_size: Option<usize>,
    scenarios_per_point: Option<usize>,
    seed: Option<u64>,
    confidence: Option<f64>,
    availability_prob: Option<f64>,
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    generated_at_unix: u64,
    #[serde(flatten)]
    results: &'a SweepResults,
}

fn read_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else { return Ok(T::default()) };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(anyhow::Error::from)
    } else {
        toml::from_str(&text).map_err(anyhow::Error::from)
    };
    parsed.with_context(|| format!("invalid config {}", path.display()))
}

fn required<T>(value: Option<T>, name: &str) -> Result<T> {
    value.with_context(|| format!("missing `{name}`: pass the flag or set it in the config file"))
}

fn load_instance(path: &Path, budget: Option<u64>) -> Result<(Instance64, u64)> {
    let (instance, stored) = read_instance(path).with_context(|| format!("invalid instance {}", path.display()))?;
    Ok((instance, budget.unwrap_or(stored)))
}

fn run_generate(args: GenerateArgs) -> Result<()> {
    let file: ScenarioFile = read_config(args.config.as_deref())?;
    let config = ScenarioConfig {
        catalog_size: required(args.catalog_size.or(file.catalog_size), "catalog_size")?,
        zipf_alpha: required(args.alpha.or(file.zipf_alpha), "alpha")?,
        price_ratio: required(args.gamma.or(file.price_ratio), "gamma")?,
        budget: required(args.budget.or(file.budget), "budget")?,
        availability_prob: args.availability_prob.or(file.availability_prob).unwrap_or(DEFAULT_AVAILABILITY_PROB),
        seed: required(args.seed.or(file.seed), "seed")?,
        scenario: args.scenario.or(file.scenario).unwrap_or(0),
    };
    let instance = generate(&config)?;
    write_instance_json(&args.out, &instance, config.budget, Some(serde_json::to_value(&config)?))
        .with_context(|| format!("writing {}", args.out.display()))?;
    info!("wrote {}", args.out.display());
    if args.binary || config.catalog_size >= BINARY_CACHE_THRESHOLD {
        let mut bin = args.out.clone().into_os_string();
        bin.push(".bin");
        let bin = PathBuf::from(bin);
        write_instance_binary(&bin, &instance, config.budget).with_context(|| format!("writing {}", bin.display()))?;
        info!("wrote {}", bin.display());
    }
    Ok(())
}

fn run_plan(args: PlanArgs) -> Result<()> {
    let (instance, budget) = load_instance(&args.instance, args.budget)?;
    let placement = plan(&instance, args.objective, budget)?;
    let report = evaluate(&instance, &placement)?;
    let bound = lower_bound_cost(&instance, budget)?;
    if let Some(out) = &args.out {
        write_plan(out, &placement).with_context(|| format!("writing {}", out.display()))?;
    }
    println!("objective: {}", args.objective);
    println!("budget: {budget}");
    println!("cost: {}", report.total_cost);
    println!("hit-ratio: {}", report.hit_ratio);
    println!("c_LB: {bound}");
    Ok(())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let (instance, budget) = load_instance(&args.instance, args.budget)?;
    let placement = read_plan(&args.plan).with_context(|| format!("invalid plan {}", args.plan.display()))?;
    let verdict = validate(&instance, &placement, budget);
    if !verdict.is_feasible() {
        return Err(Error::Infeasible(verdict).into());
    }
    let report = evaluate(&instance, &placement)?;
    println!("cost: {}", report.total_cost);
    println!("hit-ratio: {}", report.hit_ratio);
    println!("core-hit-fraction: {}", report.core_hit_fraction);
    for (link, outflow) in &report.per_link_outflow {
        println!("outflow {link}: {outflow}");
    }
    Ok(())
}

fn run_oracle_check(args: OracleArgs) -> Result<bool> {
    let shape = ToyShape { max_objects: args.max_objects, max_links: args.max_links, max_budget: args.max_budget };
    let limits = SmallInstanceLimits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = BufWriter::new(io::stdout().lock());
    let mut failed = 0;
    for i in 0..args.instances {
        let (instance, budget) = random_toy_instance(&mut rng, &shape)?;
        let cert = certify(&instance, budget, &limits)?;
        let ok = cert.agrees(ORACLE_REL_TOL);
        failed += usize::from(!ok);
        writeln!(
            out,
            "{} instance {i}: objects {} links {} budget {budget} cost {} bound {} oracle {} hit-ratio {} oracle {}",
            if ok { "pass" } else { "FAIL" },
            instance.num_objects(),
            instance.topology().len(),
            cert.greedy_cost,
            cert.lower_bound,
            cert.oracle_cost,
            cert.greedy_hit_ratio,
            cert.oracle_hit_ratio
        )?;
    }
    writeln!(out, "{} of {} instances passed", args.instances - failed, args.instances)?;
    out.flush()?;
    Ok(failed == 0)
}

fn run_experiment(args: ExperimentArgs) -> Result<()> {
    let file: SweepFile = read_config(args.config.as_deref())?;
    let spec = SweepSpec {
        gammas: required(args.gamma.or(file.gammas), "gamma")?,
        alphas: required(args.alpha.or(file.alphas), "alpha")?,
        budgets: required(args.budget.or(file.budgets), "budget")?,
        catalog_size: required(args.catalog_size.or(file.catalog_size), "catalog_size")?,
        scenarios_per_point: args.scenarios.or(file.scenarios_per_point).unwrap_or(DEFAULT_SCENARIOS),
        seed: args.seed.or(file.seed).context("experiment needs an explicit seed (--seed or `seed` in the config file)")?,
        confidence: args.confidence.or(file.confidence).unwrap_or(DEFAULT_CONFIDENCE),
        availability_prob: args.availability_prob.or(file.availability_prob).unwrap_or(DEFAULT_AVAILABILITY_PROB),
    };
    spec.validate()?;
    info!("running {} points x {} scenarios", spec.gammas.len() * spec.alphas.len() * spec.budgets.len(), spec.scenarios_per_point);
    let results = run_sweep(&spec)?;

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let csv_path = args.out.join("sweep.csv");
    let mut csv = BufWriter::new(fs::File::create(&csv_path).with_context(|| format!("writing {}", csv_path.display()))?);
    results.write_csv(&mut csv)?;
    csv.flush()?;

    let generated_at_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let json_path = args.out.join("sweep.json");
    let mut json = BufWriter::new(fs::File::create(&json_path).with_context(|| format!("writing {}", json_path.display()))?);
    serde_json::to_writer_pretty(&mut json, &SweepOutput { generated_at_unix, results: &results })?;
    json.write_all(b"\n")?;
    json.flush()?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    match cli.command {
        Command::Generate(args) => run_generate(args)?,
        Command::Plan(args) => run_plan(args)?,
        Command::Evaluate(args) => run_evaluate(args)?,
        Command::OracleCheck(args) => return run_oracle_check(args),
        Command::Experiment(args) => run_experiment(args)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CACHECOST_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
