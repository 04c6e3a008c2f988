use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use triset::indicators::{hypervolume_exact, hypervolume_mc, igd, igd_plus};
use triset::io::{read_solution_set, write_solution_set, SolutionSet};
use triset::objective::ObjectiveVector;
use triset::problems::{analytic_bounds, ProblemName};
use triset::selection::{select, SelectionMethod, SubsetRequest};
use triset_bench::error::{Error, Result};
use triset_bench::plotdata::emit_plot_data;
use triset_bench::records::{self, RECORDS_FILE, SELECTIONS_FILE};
use triset_bench::runner::{run_matrix, workers_from_env, WORKERS_ENV};
use triset_bench::summary::{read_if_present, summarize, Summary};
use triset_bench::{lists, ExperimentPlan};

#[derive(Parser)]
#[command(name = "triset", version, about = "Run and analyse population/archive/selection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment matrix and write records and summaries
    Run(RunArgs),
    /// Choose a subset from a solution-set CSV
    Select(SelectArgs),
    /// Print indicator values of a solution-set CSV
    Indicate(IndicateArgs),
    /// Rebuild summary.csv and significance.csv from run records
    Summarize {
        #[arg(long, default_value = ".")]
        dir: PathBuf,
    },
    /// Write plot data files from a summarized run directory
    Plotdata {
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        /// Defaults to DIR/plots
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON plan; flags below override its fields
    #[arg(long)]
    plan: Option<PathBuf>,
    /// e.g. DTLZ1:3,WFG3:5
    #[arg(long)]
    problems: Option<String>,
    /// e.g. tch,pbi
    #[arg(long)]
    algos: Option<String>,
    #[arg(long)]
    pops: Option<String>,
    #[arg(long)]
    archives: Option<String>,
    /// e.g. 1-51
    #[arg(long)]
    seeds: Option<String>,
    /// e.g. distance:15,hv:15,loss:15
    #[arg(long)]
    selections: Option<String>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    budget_scale: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the TRISET_WORKERS environment variable
    #[arg(long)]
    workers: Option<usize>,
    /// Print the resolved plan as JSON and exit
    #[arg(long)]
    dry_run: bool,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "hv")]
    method: SelectionMethod,
    #[arg(long, default_value_t = 15)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Hypervolume reference value used for every objective
    #[arg(long = "ref", default_value_t = 1.1)]
    reference: f64,
    /// Normalize with the analytic bounds of the file's `problem` entry
    #[arg(long)]
    normalize: bool,
    /// Defaults to standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct IndicateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Reference set for IGD and IGD+
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long = "ref", default_value_t = 1.1)]
    hv_reference: f64,
    #[arg(long)]
    normalize: bool,
    /// Monte Carlo samples for more than four objectives
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => run(args),
        Command::Select(args) => select_cmd(args),
        Command::Indicate(args) => indicate(args),
        Command::Summarize { dir } => {
            let summary = load_summary(&dir)?;
            summary.write(&dir)?;
            eprintln!("{} summary rows, {} comparisons", summary.rows.len(), summary.significance.len());
            Ok(())
        }
        Command::Plotdata { dir, out } => {
            let summary = Summary::read(&dir)?;
            let archives = read_if_present(&dir.join(RECORDS_FILE))?;
            let selections = read_if_present(&dir.join(SELECTIONS_FILE))?;
            let out = out.unwrap_or_else(|| dir.join("plots"));
            let outcome = emit_plot_data(&summary, &archives, &selections, &out)?;
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("wrote {} files", outcome.files.len());
            Ok(())
        }
    }
}

fn load_summary(dir: &Path) -> Result<Summary> {
    let archives = records::read_file(&dir.join(RECORDS_FILE))?;
    let selections = read_if_present(&dir.join(SELECTIONS_FILE))?;
    Ok(summarize(&archives, &selections))
}

fn run(args: RunArgs) -> Result<()> {
    let mut plan = match &args.plan {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            ExperimentPlan::from_json(&text)?
        }
        None => ExperimentPlan::new(Vec::new()),
    };
    if let Some(s) = &args.problems {
        plan.problems = lists::parse_problems(s)?;
    }
    if let Some(s) = &args.algos {
        plan.algorithms = lists::parse_algorithms(s)?;
    }
    if let Some(s) = &args.pops {
        plan.populations = Some(lists::parse_sizes(s)?);
    }
    if let Some(s) = &args.archives {
        plan.archives = Some(lists::parse_sizes(s)?);
    }
    if let Some(s) = &args.seeds {
        plan.seeds = lists::parse_seeds(s)?;
    }
    if let Some(s) = &args.selections {
        plan.selections = lists::parse_selections(s)?;
    }
    if args.budget.is_some() {
        plan.budget = args.budget;
    }
    if let Some(s) = args.budget_scale {
        plan.budget_scale = s;
    }
    if args.out.is_some() {
        plan.out = args.out.clone();
    }
    let resolved = plan.resolve()?;
    if args.dry_run {
        println!("{}", plan.to_json());
        eprintln!("{} runs", resolved.runs.len());
        return Ok(());
    }
    let out = plan
        .out
        .clone()
        .ok_or_else(|| Error::Plan("no output directory (use --out)".into()))?;
    let workers = args.workers.or_else(workers_from_env).unwrap_or(0);
    eprintln!(
        "{} runs on {} workers ({WORKERS_ENV})",
        resolved.runs.len(),
        if workers == 0 { "default".to_string() } else { workers.to_string() }
    );
    let output = run_matrix(&resolved, &out, workers)?;
    std::fs::write(out.join("plan.json"), plan.to_json()).map_err(|e| Error::Io {
        path: out.join("plan.json"),
        source: e,
    })?;
    let summary = summarize(&output.archives, &output.selections);
    summary.write(&out)?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn read_set(path: &Path) -> Result<SolutionSet> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(read_solution_set(BufReader::new(file))?)
}

/// Objective vectors of `set`, normalized with the analytic bounds of its
/// `problem` metadata when asked to.
fn objectives(set: &SolutionSet, normalize: bool) -> Result<Vec<ObjectiveVector>> {
    let points = set.objectives();
    if !normalize {
        return Ok(points);
    }
    let name: ProblemName = set
        .metadata
        .get("problem")
        .ok_or_else(|| Error::Data("--normalize needs a 'problem' metadata entry".into()))?
        .parse()?;
    Ok(analytic_bounds(name, set.num_objectives).normalize_all(&points)?)
}

fn select_cmd(args: SelectArgs) -> Result<()> {
    let set = read_set(&args.input)?;
    let points = objectives(&set, args.normalize)?;
    let subset = select(&SubsetRequest {
        candidates: points,
        k: args.k,
        method: args.method,
        hv_reference: Some(ObjectiveVector::splat(args.reference, set.num_objectives)),
        seed: args.seed,
    })?;
    let mut out = SolutionSet {
        solutions: subset.points(&set.solutions),
        ..set.clone()
    };
    out.metadata.insert("kind".into(), "selection".into());
    out.metadata.insert("method".into(), args.method.to_string());
    eprintln!("score={} tie_breaks={}", subset.score, subset.tie_breaks);
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            write_solution_set(&out, io::BufWriter::new(file))?;
        }
        None => write_solution_set(&out, io::stdout().lock())?,
    }
    Ok(())
}

fn indicate(args: IndicateArgs) -> Result<()> {
    let set = read_set(&args.input)?;
    let points = objectives(&set, args.normalize)?;
    let m = set.num_objectives;
    let r = vec![args.hv_reference; m];
    let mut stdout = io::stdout().lock();
    let mut line = |s: String| writeln!(stdout, "{s}").map_err(|e| Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    });
    line(format!("points={}", points.len()))?;
    if points.is_empty() {
        return Ok(());
    }
    if m <= 4 {
        line(format!("hv={:.16e}", hypervolume_exact(&points, &r)?))?;
    } else {
        let est = hypervolume_mc(&points, &r, args.samples, args.seed)?;
        line(format!("hv={:.16e}", est.value))?;
        line(format!("hv_std_error={:.16e}", est.std_error))?;
    }
    if let Some(path) = &args.reference {
        let reference = objectives(&read_set(path)?, args.normalize)?;
        line(format!("igd={:.16e}", igd(&points, &reference)?))?;
        line(format!("igd_plus={:.16e}", igd_plus(&points, &reference)?))?;
    }
    Ok(())
}
