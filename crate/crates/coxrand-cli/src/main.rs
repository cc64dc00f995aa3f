//! coxrand command line: sample random edge-labelled graphs, decide the
//! Coxeter-group properties of a given graph, compute exact expected
//! subgraph counts, run Monte Carlo sweeps, and print the diagram
//! catalog.
//!
//! Exit codes: 0 success, 2 configuration error, 3 search budget
//! exhausted, 4 I/O failure. Thread count changes speed only, never
//! output bytes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coxrand::counting::moment_report;
use coxrand::experiment::{self, emit_csv, emit_svg, render_csv, render_svg, ExperimentConfig};
use coxrand::homology::betti_numbers;
use coxrand::nerve::build_nerve;
use coxrand::pattern::pattern_by_name;
use coxrand::properties::{find_zk, is_fc_type, is_hyperbolic, nerve_dimension};
use coxrand::recognition::{catalog, catalog_instance};
use coxrand::{
    Budgets, CoxError, EdgeLabel, LabelledGraph, PatternGraph, ProbabilitySchedule, Result,
};
use num_traits::ToPrimitive;
use serde_json::json;

#[derive(Parser)]
#[command(name = "coxrand", version, about = "Random graphs and their Coxeter groups")]
struct Cli {
    /// Worker threads; 0 uses every core
    #[arg(long, global = true, env = "COXRAND_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one random graph from a schedule
    Sample {
        /// Schedule JSON file
        #[arg(long)]
        config: PathBuf,
        /// Number of vertices
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// json or dot
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide the properties of one graph
    Analyze {
        /// Graph JSON {"n", "edges"} or sampling spec {"n", "schedule"}
        #[arg(long)]
        config: PathBuf,
        /// Seed used when the config is a sampling spec
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Include the Betti numbers of the nerve
        #[arg(long)]
        betti: bool,
        /// Which Z_k pattern to search for
        #[arg(long, default_value_t = 1)]
        zk: usize,
        #[arg(long, default_value_t = Budgets::default().faces)]
        budget_faces: usize,
        #[arg(long, default_value_t = Budgets::default().cliques)]
        budget_cliques: usize,
        #[arg(long, default_value_t = Budgets::default().search)]
        budget_search: usize,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact expectation and asymptotics of a pattern count
    Expect {
        /// Catalog name, inline pattern JSON, or path to a pattern JSON file
        #[arg(long)]
        pattern: String,
        /// Schedule JSON file
        #[arg(long)]
        config: PathBuf,
        /// Evaluation point; repeatable
        #[arg(long = "n", required_unless_present = "n_range")]
        n: Vec<usize>,
        /// Evaluation points lo:hi:step
        #[arg(long)]
        n_range: Option<String>,
        /// Add the exact Var/E^2-style second-moment ratio column
        #[arg(long)]
        second_moment: bool,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment
    Sweep {
        /// Experiment config JSON file
        #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in preset name
        #[arg(long)]
        preset: Option<String>,
        /// Override the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's trial count
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        budget_faces: Option<usize>,
        #[arg(long)]
        budget_cliques: Option<usize>,
        #[arg(long)]
        budget_search: Option<usize>,
        /// csv, svg, or json
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file for the chosen format; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the supported diagram catalog
    Catalog {
        #[arg(long, default_value_t = 9)]
        max_rank: usize,
        /// Largest I2(m) label listed
        #[arg(long, default_value_t = 12)]
        max_i2: u32,
        /// json or dot
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .expect("the global pool is built once, before any parallel work");
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &CoxError) -> u8 {
    match e {
        CoxError::FaceBudgetExceeded { .. }
        | CoxError::CliqueBudgetExceeded { .. }
        | CoxError::SearchBudgetExceeded { .. } => 3,
        CoxError::Io(_) => 4,
        _ => 2,
    }
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, content)?),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn read_json_value(path: &Path) -> Result<serde_json::Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn unsupported_format(command: &str, supported: &str) -> CoxError {
    CoxError::Config(format!("{command} supports only {supported} output"))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Sample { config, n, seed, format, out } => {
            let schedule: ProbabilitySchedule =
                serde_json::from_value(read_json_value(&config)?)?;
            let g = LabelledGraph::sample(n, &schedule, seed)?;
            let rendered = match format {
                Format::Json => serde_json::to_string(&g)? + "\n",
                Format::Dot => g.to_dot(),
                _ => return Err(unsupported_format("sample", "json or dot")),
            };
            write_out(&out, &rendered)
        }
        Command::Analyze {
            config,
            seed,
            betti,
            zk,
            budget_faces,
            budget_cliques,
            budget_search,
            out,
        } => {
            let g = load_graph(&config, seed)?;
            let fc = is_fc_type(&g, budget_cliques)?;
            let hyp = is_hyperbolic(&g, budget_search)?;
            let dim = nerve_dimension(&g, budget_cliques)?;
            let mut report = json!({
                "n": g.n(),
                "fc_type": fc.fc_type,
                "hyperbolic": hyp.hyperbolic,
                "witness": hyp.witness,
                "nerve_dim": dim,
                "zk": find_zk(&g, zk, false),
            });
            if betti {
                let nerve = build_nerve(&g, budget_faces)?;
                report["betti"] = json!(betti_numbers(&nerve, None).betti);
            }
            write_out(&out, &(serde_json::to_string(&report)? + "\n"))
        }
        Command::Expect { pattern, config, n, n_range, second_moment, out } => {
            let pattern = resolve_pattern(&pattern)?;
            let schedule: ProbabilitySchedule =
                serde_json::from_value(read_json_value(&config)?)?;
            let ns = evaluation_points(&n, n_range.as_deref())?;
            let mut csv = String::from("n,expectation,leading_term");
            if second_moment {
                csv.push_str(",second_moment_ratio");
            }
            csv.push('\n');
            for n in ns {
                let report = moment_report(&pattern, &schedule, n, second_moment)?;
                let ev = schedule.evaluate(n)?;
                let expectation = report.exact_expectation.to_f64().unwrap_or(f64::NAN);
                let leading = report.leading.evaluate(&ev);
                csv.push_str(&format!("{n},{expectation},{leading}"));
                if second_moment {
                    match report.ratio.and_then(|r| r.to_f64()) {
                        Some(ratio) => csv.push_str(&format!(",{ratio}")),
                        None => csv.push(','),
                    }
                }
                csv.push('\n');
            }
            write_out(&out, &csv)
        }
        Command::Sweep {
            config,
            preset,
            seed,
            trials,
            budget_faces,
            budget_cliques,
            budget_search,
            format,
            out,
        } => {
            let mut cfg: ExperimentConfig = match (&preset, &config) {
                (Some(name), None) => experiment::preset(name)?,
                (None, Some(path)) => serde_json::from_value(read_json_value(path)?)?,
                _ => unreachable!("clap enforces exactly one of --preset and --config"),
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(trials) = trials {
                cfg.trials = trials;
            }
            if let Some(faces) = budget_faces {
                cfg.budgets.faces = faces;
            }
            if let Some(cliques) = budget_cliques {
                cfg.budgets.cliques = cliques;
            }
            if let Some(search) = budget_search {
                cfg.budgets.search = search;
            }
            let result = experiment::run(&cfg)?;
            if let Some(path) = &cfg.csv_out {
                emit_csv(&result, path)?;
            }
            if let Some(path) = &cfg.svg_out {
                emit_svg(&result, path)?;
            }
            let rendered = match format {
                Format::Csv => render_csv(&result),
                Format::Svg => render_svg(&result),
                Format::Json => serde_json::to_string(&result)? + "\n",
                Format::Dot => return Err(unsupported_format("sweep", "csv, svg, or json")),
            };
            write_out(&out, &rendered)
        }
        Command::Catalog { max_rank, max_i2, format, out } => {
            let types = catalog(max_rank, max_i2);
            let rendered = match format {
                Format::Json => {
                    let mut entries = Vec::new();
                    for t in &types {
                        let g = catalog_instance(*t)?;
                        let edges: Vec<serde_json::Value> = g
                            .pairs()
                            .filter(|&(u, v)| g.label(u, v) != EdgeLabel::fin(2))
                            .map(|(u, v)| json!([u, v, g.label(u, v)]))
                            .collect();
                        entries.push(json!({
                            "type": t.to_string(),
                            "vertices": g.n(),
                            "edges": edges,
                        }));
                    }
                    serde_json::to_string_pretty(&entries)? + "\n"
                }
                Format::Dot => {
                    let mut text = String::new();
                    for t in &types {
                        text.push_str(&format!("// {t}\n"));
                        text.push_str(&catalog_instance(*t)?.to_dot());
                    }
                    text
                }
                _ => return Err(unsupported_format("catalog", "json or dot")),
            };
            write_out(&out, &rendered)
        }
    }
}

/// Reads either a concrete graph or an (n, schedule) sampling spec.
fn load_graph(path: &Path, seed: u64) -> Result<LabelledGraph> {
    let value = read_json_value(path)?;
    if value.get("edges").is_some() {
        return Ok(serde_json::from_value(value)?);
    }
    let n = value
        .get("n")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| CoxError::Config("analyze input needs an integer \"n\"".to_owned()))?;
    let schedule = value
        .get("schedule")
        .cloned()
        .ok_or_else(|| {
            CoxError::Config("analyze input needs \"edges\" or a \"schedule\"".to_owned())
        })?;
    let schedule: ProbabilitySchedule = serde_json::from_value(schedule)?;
    LabelledGraph::sample(n as usize, &schedule, seed)
}

/// A pattern given as a catalog name, inline JSON, or a JSON file path.
fn resolve_pattern(arg: &str) -> Result<PatternGraph> {
    if arg.trim_start().starts_with('{') {
        return Ok(serde_json::from_str(arg)?);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(serde_json::from_str(&fs::read_to_string(path)?)?);
    }
    pattern_by_name(arg)
}

fn evaluation_points(listed: &[usize], range: Option<&str>) -> Result<Vec<usize>> {
    let mut ns = listed.to_vec();
    if let Some(range) = range {
        let parts: Vec<&str> = range.split(':').collect();
        let parsed: Option<(usize, usize, usize)> = match parts.as_slice() {
            [lo, hi, step] => {
                match (lo.parse(), hi.parse(), step.parse()) {
                    (Ok(lo), Ok(hi), Ok(step)) => Some((lo, hi, step)),
                    _ => None,
                }
            }
            _ => None,
        };
        let (lo, hi, step) = parsed.ok_or_else(|| {
            CoxError::Config(format!("--n-range must look like lo:hi:step, got {range:?}"))
        })?;
        if step == 0 {
            return Err(CoxError::Config("--n-range step must be positive".to_owned()));
        }
        ns.extend((lo..=hi).step_by(step));
    }
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(CoxError::Config("no evaluation points given".to_owned()));
    }
    if ns[0] < 2 {
        return Err(CoxError::Config("evaluation points must be at least 2".to_owned()));
    }
    Ok(ns)
}
