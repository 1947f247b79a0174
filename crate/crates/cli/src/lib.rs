//! Command implementations for the `rankthree` binary.
//!
//! Every command produces a JSON `results` value; [`run`] wraps it in a
//! [`RunReport`] together with input digests and timing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use rankthree::aut::{automorphism_group_with, AutError, AutOptions};
use rankthree::coherent::{krein_check, scheme_spectrum, CoherentConfiguration};
use rankthree::design::{verify_steiner, SteinerSystem};
use rankthree::feasibility::{
    enumerate_feasible, gq_bound, moore_valencies, srg_feasible, GenPolygonParams, SrgVerdict,
};
use rankthree::hs::{build_hs_graph, verify_hs};
use rankthree::perm::block_system_oracle;
use rankthree::perm::sample::transitive_groups;
use rankthree::{Graph, PermGroup, SrgParams};

pub mod config;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

/// Krein parameters below `-KREIN_TOL` count as a violation.
pub const KREIN_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "rankthree",
    version,
    about = "Strongly regular graphs, rank 3 groups and coherent configurations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized commands [default: 0]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// key=value file supplying defaults for seed, workers and node-budget
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Search-tree node budget for automorphism computations [default: 10000000]
    #[arg(long, global = true)]
    pub node_budget: Option<u64>,
    /// Also write the full run report (inputs, results, elapsed) here
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the Higman–Sims graph from S(3,6,22) and verify (100,22,0,6)
    BuildHs {
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_report: PathBuf,
    },
    /// Two-dimensional Weisfeiler–Leman closure of a graph
    Closure { graph: PathBuf },
    /// Rank, subdegrees and primitivity of a permutation group
    Orbitals { gens: PathBuf },
    /// Feasible primitive SRG parameter sets with n ≤ max-n, or one verdict with --params
    FeasibleSrg {
        #[arg(long, required_unless_present = "params")]
        max_n: Option<u64>,
        /// Check a single set "n,k,lambda,mu"
        #[arg(long, value_parser = parse_params)]
        params: Option<SrgParams>,
        /// JSON array of rows (the default)
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// CSV with a header row
        #[arg(long)]
        csv: bool,
    },
    /// Valencies k ≤ kmax of feasible Moore graphs (k²+1, k, 0, 1)
    Moore {
        #[arg(long)]
        kmax: u64,
    },
    /// Check s ≤ t² for a generalized quadrangle (gon 4) or octagon (gon 8)
    Gq { s: u64, t: u64, gon: u32 },
    /// Automorphism group of a graph
    Autgroup { graph: PathBuf },
    /// Eigenmatrices and Krein parameters of an association scheme
    Spectrum {
        #[arg(value_name = "CONFIG")]
        scheme: PathBuf,
    },
    /// Compare the orbital-graph primitivity test with block-system search on random groups
    Harness {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        max_degree: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

fn parse_params(s: &str) -> Result<SrgParams, String> {
    let v: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [n, k, l, m] => Ok(SrgParams::new(n, k, l, m)),
        _ => Err("expected four comma-separated integers n,k,lambda,mu".into()),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Input(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    /// Input path to hex SHA-256 of its contents.
    pub inputs: BTreeMap<String, String>,
    pub results: Value,
    pub elapsed: f64,
}

/// What a command hands back: results plus an exit code (0 or 1).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub results: Value,
    /// Rendered primary output; JSON unless the command asked for CSV.
    pub stdout: String,
    pub exit: u8,
}

/// Settings after merging the config file with command-line flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    pub workers: Option<usize>,
    pub node_budget: u64,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Settings, CliError> {
        let mut s = Settings {
            seed: 0,
            workers: None,
            node_budget: AutOptions::default().node_budget,
        };
        if let Some(path) = &cli.config {
            let text = read_text(path)?;
            let cfg = config::parse(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            if let Some(v) = cfg.seed {
                s.seed = v;
            }
            if let Some(v) = cfg.workers {
                s.workers = Some(v);
            }
            if let Some(v) = cfg.node_budget {
                s.node_budget = v;
            }
        }
        if let Some(v) = cli.seed {
            s.seed = v;
        }
        if let Some(v) = cli.workers {
            s.workers = Some(v);
        }
        if let Some(v) = cli.node_budget {
            s.node_budget = v;
        }
        if s.workers == Some(0) {
            return Err(CliError::Input("workers must be positive".into()));
        }
        Ok(s)
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String, CliError> {
    let bytes = read_bytes(path)?;
    String::from_utf8(bytes)
        .map_err(|_| CliError::Input(format!("{}: not valid UTF-8", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn json_outcome(results: Value, exit: u8) -> Outcome {
    let stdout = serde_json::to_string_pretty(&results).expect("results serialize") + "\n";
    Outcome {
        results,
        stdout,
        exit,
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BuildHs { .. } => "build-hs",
            Command::Closure { .. } => "closure",
            Command::Orbitals { .. } => "orbitals",
            Command::FeasibleSrg { .. } => "feasible-srg",
            Command::Moore { .. } => "moore",
            Command::Gq { .. } => "gq",
            Command::Autgroup { .. } => "autgroup",
            Command::Spectrum { .. } => "spectrum",
            Command::Harness { .. } => "harness",
        }
    }

    fn input_paths(&self) -> Vec<&Path> {
        match self {
            Command::Closure { graph } | Command::Autgroup { graph } => vec![graph],
            Command::Orbitals { gens } => vec![gens],
            Command::Spectrum { scheme } => vec![scheme],
            _ => Vec::new(),
        }
    }
}

/// Runs one command with resolved settings. The worker pool is set up by [`run`].
pub fn execute(command: &Command, settings: &Settings) -> Result<Outcome, CliError> {
    match command {
        Command::BuildHs {
            out_graph,
            out_report,
        } => build_hs(out_graph, out_report),
        Command::Closure { graph } => closure(graph),
        Command::Orbitals { gens } => orbitals(gens),
        Command::FeasibleSrg {
            max_n, params, csv, ..
        } => {
            let format = if *csv { Format::Csv } else { Format::Json };
            Ok(feasible(*max_n, *params, format))
        }
        Command::Moore { kmax } => Ok(json_outcome(
            json!({ "k_max": kmax, "valencies": moore_valencies(*kmax) }),
            EXIT_OK,
        )),
        Command::Gq { s, t, gon } => {
            let p =
                GenPolygonParams::new(*s, *t, *gon).map_err(|e| CliError::Input(e.to_string()))?;
            let v = gq_bound(&p).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(json_outcome(
                serde_json::to_value(v).expect("serializable"),
                EXIT_OK,
            ))
        }
        Command::Autgroup { graph } => autgroup(graph, settings.node_budget),
        Command::Spectrum { scheme } => spectrum(scheme),
        Command::Harness {
            samples,
            max_degree,
        } => harness(settings.seed, *samples, *max_degree),
    }
}

/// Full pipeline: settings, worker pool, command, report file.
pub fn run(cli: &Cli) -> Result<(RunReport, Outcome), CliError> {
    let settings = Settings::resolve(cli)?;
    let start = Instant::now();
    let mut inputs = BTreeMap::new();
    for path in cli.command.input_paths() {
        inputs.insert(path.display().to_string(), sha256_hex(&read_bytes(path)?));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = settings.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Input(format!("cannot start worker pool: {e}")))?;
    let outcome = pool.install(|| execute(&cli.command, &settings))?;
    let report = RunReport {
        command: cli.command.name().to_string(),
        inputs,
        results: outcome.results.clone(),
        elapsed: start.elapsed().as_secs_f64(),
    };
    if let Some(path) = &cli.report {
        write_file(
            path,
            &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"),
        )?;
    }
    Ok((report, outcome))
}

fn build_hs(out_graph: &Path, out_report: &Path) -> Result<Outcome, CliError> {
    let design = SteinerSystem::s3622().map_err(|e| CliError::Input(e.to_string()))?;
    let design_report = verify_steiner(&design);
    let (graph, _) = build_hs_graph(&design).map_err(|e| CliError::Input(e.to_string()))?;
    let verified = verify_hs(&graph);
    let params = graph.check_srg();
    let results = json!({
        "n": graph.n(),
        "k": params.map(|p| p.k),
        "lambda": params.map(|p| p.lambda),
        "mu": params.map(|p| p.mu),
        "edges": graph.edge_count(),
        "design_blocks": design.blocks.len(),
        "design_verified": design_report.passed(),
        "verified": verified.is_ok(),
    });
    write_file(out_graph, &graph.to_text())?;
    write_file(
        out_report,
        &(serde_json::to_string_pretty(&results).expect("serializable") + "\n"),
    )?;
    let exit = if verified.is_ok() && design_report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    Ok(json_outcome(results, exit))
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::parse(&read_text(path)?).map_err(|e| input_err(path, e))
}

fn closure(path: &Path) -> Result<Outcome, CliError> {
    let g = load_graph(path)?;
    let cc = CoherentConfiguration::wl2_closure(&g);
    let r = cc.rank();
    let mut hasher = Sha256::new();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                hasher.update(cc.p(i, j, k).to_le_bytes());
            }
        }
    }
    let results = json!({
        "n": cc.n(),
        "rank": r,
        "fibers": cc.fibers().len(),
        "class_sizes": cc.class_sizes(),
        "commutative": cc.is_commutative(),
        "intersection_digest": hex::encode(hasher.finalize()),
    });
    Ok(json_outcome(results, EXIT_OK))
}

fn orbitals(path: &Path) -> Result<Outcome, CliError> {
    let g = PermGroup::parse(&read_text(path)?).map_err(|e| input_err(path, e))?;
    let dec = g.orbitals().map_err(|e| input_err(path, e))?;
    let criterion = dec.all_orbital_graphs_connected();
    let systems = block_system_oracle(&g).map_err(|e| input_err(path, e))?;
    let oracle = systems.is_empty();
    let results = json!({
        "degree": g.degree(),
        "order": g.order().to_string(),
        "rank": dec.rank,
        "subdegrees": dec.subdegrees,
        "primitive": criterion,
        "oracle_primitive": oracle,
        "block_sizes": systems.iter().map(|b| b.block_size()).collect::<Vec<_>>(),
        "agree": criterion == oracle,
    });
    Ok(json_outcome(
        results,
        if criterion == oracle {
            EXIT_OK
        } else {
            EXIT_VERIFY
        },
    ))
}

fn verdict_row(v: &SrgVerdict) -> Value {
    let sp = v.spectrum.as_ref();
    json!({
        "n": v.params.n,
        "k": v.params.k,
        "lambda": v.params.lambda,
        "mu": v.params.mu,
        "r": sp.map(|s| s.r.to_string()),
        "s": sp.map(|s| s.s.to_string()),
        "f": sp.map(|s| s.f.to_string()),
        "g": sp.map(|s| s.g_mult.to_string()),
        "flags": v.flags(),
        "failed": v.failed,
    })
}

fn feasible(max_n: Option<u64>, params: Option<SrgParams>, format: Format) -> Outcome {
    let rows: Vec<SrgVerdict> = match params {
        Some(p) => vec![srg_feasible(&p)],
        None => enumerate_feasible(max_n.unwrap_or(0)),
    };
    let values: Vec<Value> = rows.iter().map(verdict_row).collect();
    let results = Value::Array(values);
    match format {
        Format::Json => json_outcome(results, EXIT_OK),
        Format::Csv => {
            let mut out = String::from("n,k,lambda,mu,r,s,f,g,flags,failed\n");
            for v in &rows {
                let sp = v.spectrum.as_ref();
                let show = |f: fn(&rankthree::feasibility::SrgSpectrum) -> String| {
                    sp.map(f).unwrap_or_default()
                };
                let failed: Vec<String> = v
                    .failed
                    .iter()
                    .map(|c| {
                        serde_json::to_value(c)
                            .unwrap()
                            .as_str()
                            .unwrap()
                            .to_string()
                    })
                    .collect();
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    v.params.n,
                    v.params.k,
                    v.params.lambda,
                    v.params.mu,
                    show(|s| s.r.to_string()),
                    show(|s| s.s.to_string()),
                    show(|s| s.f.to_string()),
                    show(|s| s.g_mult.to_string()),
                    v.flags().join(";"),
                    failed.join(";"),
                ));
            }
            Outcome {
                results,
                stdout: out,
                exit: EXIT_OK,
            }
        }
    }
}

fn autgroup(path: &Path, node_budget: u64) -> Result<Outcome, CliError> {
    let g = load_graph(path)?;
    let opts = AutOptions {
        node_budget,
        ..AutOptions::default()
    };
    let aut = automorphism_group_with(&g, &opts).map_err(|e| match e {
        AutError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
        other => CliError::Input(other.to_string()),
    })?;
    let results = json!({
        "n": g.n(),
        "order": aut.order().to_string(),
        "vertex_transitive": aut.is_transitive(),
        "generators": aut.generators().iter().map(|p| p.images()).collect::<Vec<_>>(),
    });
    Ok(json_outcome(results, EXIT_OK))
}

fn spectrum(path: &Path) -> Result<Outcome, CliError> {
    let cc = CoherentConfiguration::parse(&read_text(path)?).map_err(|e| input_err(path, e))?;
    let sp = scheme_spectrum(&cc).map_err(|e| input_err(path, e))?;
    let krein = krein_check(&sp, KREIN_TOL);
    let mut results = serde_json::to_value(sp.report()).expect("serializable");
    results["krein_pass"] = json!(krein.pass);
    results["krein_argmin"] = json!([krein.argmin.0, krein.argmin.1, krein.argmin.2]);
    results["idempotent_defect"] = json!(sp.idempotent_defect);
    Ok(json_outcome(
        results,
        if krein.pass { EXIT_OK } else { EXIT_VERIFY },
    ))
}

fn harness(seed: u64, samples: usize, max_degree: usize) -> Result<Outcome, CliError> {
    if max_degree < 2 {
        return Err(CliError::Input("max-degree must be at least 2".into()));
    }
    let groups = transitive_groups(seed, samples, max_degree);
    let mut primitive = 0;
    let mut disagreements = Vec::new();
    for g in &groups {
        let criterion = g
            .is_primitive()
            .map_err(|e| CliError::Input(e.to_string()))?;
        let oracle = block_system_oracle(g)
            .map_err(|e| CliError::Input(e.to_string()))?
            .is_empty();
        primitive += criterion as usize;
        if criterion != oracle {
            disagreements.push(g.to_text());
        }
    }
    let exit = if disagreements.is_empty() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    let results = json!({
        "seed": seed,
        "samples": groups.len(),
        "primitive": primitive,
        "imprimitive": groups.len() - primitive,
        "disagreements": disagreements,
    });
    Ok(json_outcome(results, exit))
}
