//! Command-line front end. Every subcommand reads instance or codebook
//! JSON, prints a single deterministic JSON report (or CSV for sweeps) and
//! signals the outcome through the exit code:
//!
//!   0  success; solver results are certified optimal
//!   2  a search hit its budget and reports an incumbent only
//!   3  the requested check failed (verification, decodability, search)
//!   4  unusable input: parse errors, schema mismatches, capacity limits
//!
//! Timing and node counts vary across runs and machines, so they stay out
//! of the reports unless --timings asks for them.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};
use vpcode::bounds::{all_bounds, BoundReport};
use vpcode::codebook::{codebook_from_json, codebook_to_json, VPCodebook};
use vpcode::concat::{concat_double, concat_general, ConcatOutcome};
use vpcode::cover::{solve, CoverBudget, SolveOutcome};
use vpcode::decodability::verify_codebook;
use vpcode::hypergraph::{enumerate_maximal_edges, DEFAULT_EDGE_CAP};
use vpcode::linear::{
    decodable_indices, is_vp_linear, linear_min_t, linear_to_codebook, LinearEncoder, PrimeField,
};
use vpcode::model::{parse_instance, rate_of, Alphabet, ProblemInstance, SOLVE_SIZE_GUARD};
use vpcode::pliable::{pliable_min_t, pliable_solve_with_choice, ChoiceAssignment};

#[derive(Parser)]
#[command(name = "vpcode", version, about = "Exact solver and toolkit for very-pliable index coding")]
struct Cli {
    /// Worker threads for the search (default: all cores; env fallback VP_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Give up certifying after this many search nodes
    #[arg(long)]
    node_limit: Option<u64>,
    /// Give up certifying after this many seconds
    #[arg(long)]
    time_limit: Option<f64>,
    /// Ceiling on enumerated maximal edges
    #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
    edge_cap: usize,
}

impl BudgetArgs {
    fn budget(&self) -> CoverBudget {
        CoverBudget {
            node_limit: self.node_limit,
            time_limit: self.time_limit.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the optimal codeword count and emit the codebook
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Override the alphabet size from the instance file
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the codebook JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall time and node counts (nondeterministic)
        #[arg(long)]
        timings: bool,
    },
    /// Solve a range of alphabet sizes and tabulate rates and bounds
    Sweep {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 2)]
        kmin: u32,
        #[arg(long)]
        kmax: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Also write the report here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall time per row (nondeterministic)
        #[arg(long)]
        timings: bool,
    },
    /// Check a codebook against an instance
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        codebook: PathBuf,
    },
    /// Report the fiber-size and codeword-count bounds
    Bounds {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Test one linear encoder for full decodability
    LinearCheck {
        #[arg(long)]
        instance: PathBuf,
        /// Prime field size
        #[arg(long)]
        q: u32,
        /// Rows separated by ';', entries by ',': "1,1,0;0,1,1"
        #[arg(long)]
        matrix: String,
        /// Write the equivalent codebook JSON here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustively find the shortest fully decodable linear encoder
    LinearSearch {
        #[arg(long)]
        instance: PathBuf,
        /// Prime field size
        #[arg(long)]
        q: u32,
        /// Largest code length to try (default: m)
        #[arg(long)]
        tmax: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose a codebook with an MDS layer to enlarge the alphabet
    Concat {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long, value_enum, default_value = "double")]
        mode: ConcatMode,
        /// Side-information floor (general mode), default 1
        #[arg(long)]
        p: Option<usize>,
        /// Prime field override for the MDS layer (general mode)
        #[arg(long)]
        field: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimum when each receiver's decoded index is fixed up front
    Pliable {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: Option<u32>,
        /// Solve one fixed assignment, "pos:index" 1-based: "1:2,2:1,3:1"
        #[arg(long)]
        choice: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// List the maximal valid fibers of the coding hypergraph
    EnumerateEdges {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        edge_cap: usize,
        /// Write the full edge list here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConcatMode {
    Double,
    General,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("VP_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("error: thread pool already initialised");
            return ExitCode::from(4);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
    }
}

fn read_instance(path: &Path, k: Option<u32>) -> Result<(ProblemInstance, Alphabet), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let (inst, alphabet) = parse_instance(&text).map_err(|e| e.to_string())?;
    match k {
        Some(k) => Ok((inst, Alphabet::new(k).map_err(|e| e.to_string())?)),
        None => Ok((inst, alphabet)),
    }
}

fn read_codebook(
    path: &Path,
    inst: &ProblemInstance,
    alphabet: Alphabet,
) -> Result<VPCodebook, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    codebook_from_json(&text, inst, alphabet).map_err(|e| e.to_string())
}

fn write_out(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn round4(value: f64) -> f64 {
    (value * 10000.0).round() / 10000.0
}

fn emit<T: Serialize>(report: &T) {
    println!("{}", serde_json::to_string(report).expect("report serialises"));
}

#[derive(Serialize)]
struct SolveReport {
    m: usize,
    k: u32,
    t: u64,
    alpha: f64,
    certified: bool,
    vertex_count: u64,
    edge_count: usize,
    max_edge_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

fn solve_report(inst: &ProblemInstance, out: &SolveOutcome, timing: Option<(u64, u128)>) -> SolveReport {
    SolveReport {
        m: inst.m(),
        k: out.codebook.k,
        t: out.t,
        alpha: round4(out.rate.value()),
        certified: out.optimal,
        vertex_count: out.vertex_count,
        edge_count: out.edge_count,
        max_edge_size: out.max_edge_size,
        nodes: timing.map(|(n, _)| n),
        wall_ms: timing.map(|(_, ms)| ms),
    }
}

#[derive(Serialize)]
struct BoundRow {
    bound: &'static str,
    applicable: bool,
    fiber_cap: String,
    t_lower: String,
    t_lower_ceil: String,
}

fn bound_rows(reports: &[BoundReport]) -> Vec<BoundRow> {
    reports
        .iter()
        .map(|r| BoundRow {
            bound: r.bound_name,
            applicable: r.applicable,
            fiber_cap: r.fiber_cap.to_string(),
            t_lower: format!("{}/{}", r.t_lower_num, r.t_lower_den),
            t_lower_ceil: r.t_lower_ceil.to_string(),
        })
        .collect()
}

/// Applicable bounds folded into one cell: "generic:2;singleton:3".
fn bounds_cell(reports: &[BoundReport]) -> String {
    reports
        .iter()
        .filter(|r| r.applicable)
        .map(|r| format!("{}:{}", r.bound_name, r.t_lower_ceil))
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Serialize, Default)]
struct SweepRow {
    k: u32,
    t_vp: Option<u64>,
    alpha_k: Option<f64>,
    vp_certified: Option<bool>,
    t_pliable: Option<u64>,
    beta_k: Option<f64>,
    pliable_certified: Option<bool>,
    bounds: String,
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

#[derive(Serialize)]
struct SweepReport {
    m: usize,
    receivers: Vec<Vec<usize>>,
    rows: Vec<SweepRow>,
}

fn sweep_row(inst: &ProblemInstance, k: u32, budget: &BudgetArgs, timings: bool) -> SweepRow {
    let start = Instant::now();
    let mut row = SweepRow {
        k,
        ..SweepRow::default()
    };
    let alphabet = match Alphabet::new(k) {
        Ok(a) => a,
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    };
    match all_bounds(inst, alphabet) {
        Ok(reports) => row.bounds = bounds_cell(&reports),
        Err(e) => {
            row.error = e.to_string();
            return row;
        }
    }
    let solvable = inst
        .realisation_count(alphabet)
        .is_some_and(|n| n <= SOLVE_SIZE_GUARD);
    if !solvable {
        row.error = "bounds only: alphabet exceeds the solve guard".into();
        return row;
    }
    let mut errors = Vec::new();
    match solve(inst, alphabet, &budget.budget(), budget.edge_cap) {
        Ok(out) => {
            row.t_vp = Some(out.t);
            row.alpha_k = Some(round4(out.rate.value()));
            row.vp_certified = Some(out.optimal);
        }
        Err(e) => errors.push(format!("solve: {e}")),
    }
    match pliable_min_t(inst, alphabet, &budget.budget(), budget.edge_cap) {
        Ok(best) => {
            row.t_pliable = Some(best.outcome.t);
            row.beta_k = Some(round4(best.outcome.rate.value()));
            row.pliable_certified = Some(best.optimal);
        }
        Err(e) => errors.push(format!("pliable: {e}")),
    }
    row.error = errors.join("; ");
    if timings {
        row.wall_ms = Some(start.elapsed().as_millis());
    }
    row
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn sweep_csv(rows: &[SweepRow], timings: bool) -> String {
    let mut out = String::from(
        "k,t_vp,alpha_k,vp_certified,t_pliable,beta_k,pliable_certified,bounds,error",
    );
    if timings {
        out.push_str(",wall_ms");
    }
    out.push('\n');
    for row in rows {
        let alpha = row.alpha_k.map(|a| format!("{a:.4}"));
        let beta = row.beta_k.map(|b| format!("{b:.4}"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}",
            row.k,
            fmt_opt(&row.t_vp),
            fmt_opt(&alpha),
            fmt_opt(&row.vp_certified),
            fmt_opt(&row.t_pliable),
            fmt_opt(&beta),
            fmt_opt(&row.pliable_certified),
            row.bounds,
            row.error.replace(',', ";"),
        ));
        if timings {
            out.push_str(&format!(",{}", fmt_opt(&row.wall_ms)));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct VerifyOut {
    ok: bool,
    t: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    codeword: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<vpcode::decodability::Diagnostic>,
}

#[derive(Serialize)]
struct LinearCheckReport {
    q: u32,
    t: usize,
    vp: bool,
    /// 1-based decodable indices per canonical receiver.
    decodable: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    choice: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    codewords: Option<u64>,
}

#[derive(Serialize)]
struct LinearSearchReport {
    q: u32,
    tmax: usize,
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rate: Option<f64>,
}

#[derive(Serialize)]
struct ConcatReport {
    mode: &'static str,
    p: usize,
    field: u32,
    /// "explicit" for a user-chosen field, otherwise "auto-upper-bound":
    /// the smallest admissible prime, not the provable minimum.
    field_choice: &'static str,
    k_in: u32,
    k_out: u32,
    t_raw: u64,
    t: u64,
    rate: f64,
}

fn concat_report(out: &ConcatOutcome, mode: &'static str, k_in: u32, explicit: bool) -> ConcatReport {
    let alphabet = Alphabet::new(out.codebook.k).expect("constructed alphabet");
    ConcatReport {
        mode,
        p: out.p,
        field: out.field,
        field_choice: if explicit { "explicit" } else { "auto-upper-bound" },
        k_in,
        k_out: out.codebook.k,
        t_raw: out.t_raw,
        t: out.codebook.t,
        rate: round4(rate_of(out.codebook.t, alphabet).expect("valid rate").value()),
    }
}

#[derive(Serialize)]
struct PliableReport {
    m: usize,
    k: u32,
    t: u64,
    beta: f64,
    certified: bool,
    choice: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignments: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u128>,
}

#[derive(Serialize)]
struct EdgesReport {
    m: usize,
    k: u32,
    vertex_count: u64,
    edge_count: usize,
    max_edge_size: usize,
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Solve {
            instance,
            k,
            budget,
            out,
            timings,
        } => {
            let (inst, alphabet) = read_instance(&instance, k)?;
            let start = Instant::now();
            let outcome =
                solve(&inst, alphabet, &budget.budget(), budget.edge_cap).map_err(|e| e.to_string())?;
            let timing = timings.then(|| (outcome.nodes, start.elapsed().as_millis()));
            if let Some(path) = out {
                write_out(&path, &codebook_to_json(&outcome.codebook).map_err(|e| e.to_string())?)?;
            }
            emit(&solve_report(&inst, &outcome, timing));
            Ok(if outcome.optimal {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Sweep {
            instance,
            kmin,
            kmax,
            format,
            budget,
            out,
            timings,
        } => {
            let (inst, _) = read_instance(&instance, None)?;
            let rows: Vec<SweepRow> = (kmin..=kmax)
                .map(|k| sweep_row(&inst, k, &budget, timings))
                .collect();
            // budget-truncated searches demote the exit code; rows that
            // recorded an error or were bounds-only do not
            let any_incumbent = rows.iter().any(|r| {
                r.vp_certified == Some(false) || r.pliable_certified == Some(false)
            });
            let text = match format {
                Format::Csv => sweep_csv(&rows, timings),
                Format::Json => {
                    let report = SweepReport {
                        m: inst.m(),
                        receivers: inst
                            .receivers()
                            .iter()
                            .map(|r| r.members_one_based())
                            .collect(),
                        rows,
                    };
                    let mut s = serde_json::to_string(&report).expect("report serialises");
                    s.push('\n');
                    s
                }
            };
            print!("{text}");
            if let Some(path) = out {
                write_out(&path, &text)?;
            }
            Ok(if any_incumbent {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Verify { instance, codebook } => {
            let (inst, alphabet) = read_instance(&instance, None)?;
            let cb = read_codebook(&codebook, &inst, alphabet)?;
            let report = verify_codebook(&cb, &inst, alphabet).map_err(|e| e.to_string())?;
            emit(&VerifyOut {
                ok: report.ok,
                t: report.t,
                codeword: report.codeword,
                diagnostic: report.diagnostic,
            });
            Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::Bounds { instance, k, format } => {
            let (inst, alphabet) = read_instance(&instance, k)?;
            let reports = all_bounds(&inst, alphabet).map_err(|e| e.to_string())?;
            let rows = bound_rows(&reports);
            match format {
                Format::Json => emit(&rows),
                Format::Csv => {
                    println!("bound,applicable,fiber_cap,t_lower,t_lower_ceil");
                    for r in rows {
                        println!(
                            "{},{},{},{},{}",
                            r.bound, r.applicable, r.fiber_cap, r.t_lower, r.t_lower_ceil
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::LinearCheck {
            instance,
            q,
            matrix,
            out,
        } => {
            let (inst, _) = read_instance(&instance, None)?;
            let field = PrimeField::new(q).map_err(|e| e.to_string())?;
            let enc = LinearEncoder::parse(&matrix, field).map_err(|e| e.to_string())?;
            if enc.m() != inst.m() {
                return Err(format!(
                    "matrix has {} columns, instance has m={}",
                    enc.m(),
                    inst.m()
                ));
            }
            let (vp, map) = is_vp_linear(&enc, &inst, field);
            let decodable: Vec<Vec<usize>> = inst
                .receivers()
                .iter()
                .map(|h| {
                    decodable_indices(&enc, *h, field)
                        .into_iter()
                        .map(|i| i + 1)
                        .collect()
                })
                .collect();
            let choice = vp.then(|| {
                map.iter()
                    .enumerate()
                    .map(|(pos, c)| format!("{}:{}", pos + 1, c.unwrap() + 1))
                    .collect::<Vec<_>>()
                    .join(",")
            });
            let mut codewords = None;
            if vp {
                let cb = linear_to_codebook(&enc, &inst, field).map_err(|e| e.to_string())?;
                codewords = Some(cb.t);
                if let Some(path) = out {
                    write_out(&path, &codebook_to_json(&cb).map_err(|e| e.to_string())?)?;
                }
            }
            emit(&LinearCheckReport {
                q,
                t: enc.t(),
                vp,
                decodable,
                choice,
                codewords,
            });
            Ok(if vp { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
        Command::LinearSearch {
            instance,
            q,
            tmax,
            out,
        } => {
            let (inst, _) = read_instance(&instance, None)?;
            let field = PrimeField::new(q).map_err(|e| e.to_string())?;
            let tmax = tmax.unwrap_or(inst.m());
            let found = linear_min_t(&inst, field, tmax);
            let report = match &found {
                Some(hit) => LinearSearchReport {
                    q,
                    tmax,
                    found: true,
                    t: Some(hit.t),
                    matrix: Some(hit.witness.render()),
                    rate: Some(hit.t as f64),
                },
                None => LinearSearchReport {
                    q,
                    tmax,
                    found: false,
                    t: None,
                    matrix: None,
                    rate: None,
                },
            };
            if let (Some(hit), Some(path)) = (&found, out) {
                let cb = linear_to_codebook(&hit.witness, &inst, field).map_err(|e| e.to_string())?;
                write_out(&path, &codebook_to_json(&cb).map_err(|e| e.to_string())?)?;
            }
            emit(&report);
            Ok(if report.found {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            })
        }
        Command::Concat {
            instance,
            codebook,
            mode,
            p,
            field,
            out,
        } => {
            let (inst, alphabet) = read_instance(&instance, None)?;
            let cb = read_codebook(&codebook, &inst, alphabet)?;
            let (outcome, mode_name) = match mode {
                ConcatMode::Double => {
                    if p.is_some() || field.is_some() {
                        return Err("--p and --field apply to general mode only".into());
                    }
                    (concat_double(&cb, &inst).map_err(|e| e.to_string())?, "double")
                }
                ConcatMode::General => (
                    concat_general(&cb, &inst, p.unwrap_or(1), field).map_err(|e| e.to_string())?,
                    "general",
                ),
            };
            if let Some(path) = out {
                write_out(
                    &path,
                    &codebook_to_json(&outcome.codebook).map_err(|e| e.to_string())?,
                )?;
            }
            emit(&concat_report(&outcome, mode_name, cb.k, field.is_some()));
            Ok(ExitCode::SUCCESS)
        }
        Command::Pliable {
            instance,
            k,
            choice,
            budget,
            out,
            timings,
        } => {
            let (inst, alphabet) = read_instance(&instance, k)?;
            let start = Instant::now();
            let (outcome, choice_text, certified, assignments) = match choice {
                Some(text) => {
                    let assignment =
                        ChoiceAssignment::parse(&text, &inst).map_err(|e| e.to_string())?;
                    let outcome = pliable_solve_with_choice(
                        &inst,
                        alphabet,
                        &assignment,
                        &budget.budget(),
                        budget.edge_cap,
                    )
                    .map_err(|e| e.to_string())?;
                    let certified = outcome.optimal;
                    (outcome, assignment.render(), certified, None)
                }
                None => {
                    let best = pliable_min_t(&inst, alphabet, &budget.budget(), budget.edge_cap)
                        .map_err(|e| e.to_string())?;
                    let choice_text = best.choice.render();
                    let certified = best.optimal;
                    let assignments = Some(best.assignments);
                    (best.outcome, choice_text, certified, assignments)
                }
            };
            if let Some(path) = out {
                write_out(
                    &path,
                    &codebook_to_json(&outcome.codebook).map_err(|e| e.to_string())?,
                )?;
            }
            emit(&PliableReport {
                m: inst.m(),
                k: alphabet.k(),
                t: outcome.t,
                beta: round4(outcome.rate.value()),
                certified,
                choice: choice_text,
                assignments,
                wall_ms: timings.then(|| start.elapsed().as_millis()),
            });
            Ok(if certified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::EnumerateEdges {
            instance,
            k,
            edge_cap,
            out,
        } => {
            let (inst, alphabet) = read_instance(&instance, k)?;
            let hg = enumerate_maximal_edges(&inst, alphabet, edge_cap).map_err(|e| e.to_string())?;
            if let Some(path) = out {
                let listed: Vec<Vec<Vec<u32>>> = hg
                    .edges
                    .iter()
                    .map(|e| e.iter().map(|&v| hg.universe.realisation(v)).collect())
                    .collect();
                let doc = serde_json::json!({ "edges": listed });
                write_out(&path, &format!("{doc}\n"))?;
            }
            emit(&EdgesReport {
                m: inst.m(),
                k: alphabet.k(),
                vertex_count: hg.vertex_count(),
                edge_count: hg.edges.len(),
                max_edge_size: hg.max_edge_size(),
            });
            Ok(ExitCode::SUCCESS)
        }
    }
}
