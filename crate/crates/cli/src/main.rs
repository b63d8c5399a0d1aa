//! Command-line front end: Lie-algebra validation, admissible-graph
//! enumeration, and verification campaigns with machine-readable reports.
//!
//! Exit codes: 0 success, 1 I/O error, 2 validation failure, 3 enumeration
//! budget exceeded, 4 campaign check failed or errored.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use biquant::checks::{run_check, CampaignConfig, CheckStatus, CHECK_NAMES};
use biquant::graphs::{classify_graph, enumerate_graphs, symmetry_factor, EnumOptions, SecondType};
use biquant::liealg::{LieAlgebra, SymmetricPair};
use biquant::ratlin::format_rat;

#[derive(Parser)]
#[command(name = "biquant", about = "Biquantization workbench for symmetric pairs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a Lie-algebra JSON file (Jacobi, involution, Cartan split).
    LieCheck { path: PathBuf },
    /// Enumerate admissible graphs and print them as JSON.
    GraphsEnum(GraphsArgs),
    /// Run a verification campaign and write a JSON report.
    Verify(VerifyArgs),
    /// Emit a CSV convergence trace of a named weight over sample counts.
    Trace(TraceArgs),
}

#[derive(Args)]
struct TraceArgs {
    /// One of: loopWeight, w1A, w1B, w2A, w2B.
    #[arg(long)]
    weight: String,
    /// Largest sample count; the trace halves it repeatedly.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 2026)]
    seed: u64,
    /// Number of trace points.
    #[arg(long, default_value_t = 6)]
    points: u32,
    /// CSV output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphsArgs {
    /// Number of aerial vertices (≤ 4).
    #[arg(long)]
    n: usize,
    /// Second-type layout: "m=M,mark=I" (half-plane) or "k=K,l=L" (quadrant).
    #[arg(long)]
    second: String,
    #[arg(long, default_value_t = true)]
    multi_edges: bool,
    #[arg(long, default_value_t = true)]
    short_loops: bool,
    #[arg(long, default_value_t = 0)]
    from_boundary: usize,
    #[arg(long, default_value_t = 1)]
    phantom_budget: usize,
    /// Cap on edges into the marked/origin vertex (default unlimited).
    #[arg(long)]
    mark_in_cap: Option<usize>,
    /// Keep graphs regardless of the form-degree/dimension filter.
    #[arg(long, default_value_t = false)]
    no_degree_filter: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Lie-algebra JSON used for the input-validation stage of the campaign.
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Comma-separated check names (default: all).
    #[arg(long)]
    checks: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 2026)]
    seed: u64,
    /// Series truncation order for the BCH suite.
    #[arg(long, default_value_t = 6)]
    order: u32,
    /// Report output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// File-backed weight cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Override the statistical acceptance gate (units of σ).
    #[arg(long)]
    gate_sigma: Option<f64>,
    /// Override the pointwise-identity tolerance.
    #[arg(long)]
    pointwise_tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::LieCheck { path } => lie_check(&path),
        Cmd::GraphsEnum(args) => graphs_enum(&args),
        Cmd::Verify(args) => verify(&args),
        Cmd::Trace(args) => trace(&args),
    }
}

fn trace(args: &TraceArgs) -> ExitCode {
    use biquant::weights::{loop_weight, w1_weight, wheel_weight, WheelFamily};
    let mut rows = vec!["samples,value,stdError,rejections".to_string()];
    let mut n = args.samples;
    let mut schedule = Vec::new();
    for _ in 0..args.points {
        if n == 0 {
            break;
        }
        schedule.push(n);
        n /= 2;
    }
    schedule.reverse();
    for n in schedule {
        let est = match args.weight.as_str() {
            "loopWeight" => loop_weight(n, args.seed),
            "w1A" => w1_weight(WheelFamily::A, n, args.seed),
            "w1B" => w1_weight(WheelFamily::B, n, args.seed),
            "w2A" => wheel_weight(WheelFamily::A, 2, n, args.seed),
            "w2B" => wheel_weight(WheelFamily::B, 2, n, args.seed),
            other => {
                eprintln!("unknown weight {other:?}; use loopWeight, w1A, w1B, w2A or w2B");
                return ExitCode::from(1);
            }
        };
        match est {
            Ok(e) => rows.push(format!(
                "{},{},{},{}",
                e.samples, e.value, e.std_error, e.rejections
            )),
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(4);
            }
        }
    }
    let text = rows.join("\n") + "\n";
    match &args.out {
        None => print!("{text}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::SUCCESS
}

fn lie_check(path: &std::path::Path) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", path.display());
            return ExitCode::from(1);
        }
    };
    let (alg, sigma) = match LieAlgebra::from_json(&text) {
        Ok(v) => v,
        Err(biquant::Error::Json(e)) => {
            eprintln!("malformed JSON: {e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            println!("validation failed: {e}");
            return ExitCode::from(2);
        }
    };
    println!(
        "algebra: dim {} with basis [{}]",
        alg.dim,
        alg.basis_names.join(", ")
    );
    println!("antisymmetry and Jacobi identity: ok");
    if let Some(sigma) = sigma {
        match SymmetricPair::new(alg, sigma) {
            Ok(pair) => {
                println!(
                    "involution: ok; Cartan split dim 𝔭 = {}, dim 𝔨 = {}",
                    pair.p_dim,
                    pair.k_dim()
                );
                let delta = pair.delta_character();
                let formatted: Vec<String> = delta.values.iter().map(format_rat).collect();
                println!("character δ on the 𝔨-basis: [{}]", formatted.join(", "));
            }
            Err(e) => {
                println!("validation failed: {e}");
                return ExitCode::from(2);
            }
        }
    }
    ExitCode::SUCCESS
}

fn parse_second(spec: &str) -> Result<SecondType, String> {
    let mut m = None;
    let mut mark = None;
    let mut k = None;
    let mut l = None;
    for part in spec.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            return Err(format!("bad component {part:?}"));
        };
        let v: usize = value
            .trim()
            .parse()
            .map_err(|_| format!("bad number in {part:?}"))?;
        match key.trim() {
            "m" => m = Some(v),
            "mark" => mark = Some(v),
            "k" => k = Some(v),
            "l" => l = Some(v),
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    match (m, k, l) {
        (Some(m), None, None) => Ok(SecondType::Marked {
            m,
            mark: mark.unwrap_or(0),
        }),
        (None, Some(k), Some(l)) => Ok(SecondType::Quadrant { k, l }),
        _ => Err("use either m=..,mark=.. or k=..,l=..".into()),
    }
}

fn graphs_enum(args: &GraphsArgs) -> ExitCode {
    let second = match parse_second(&args.second) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("bad --second: {e}");
            return ExitCode::from(1);
        }
    };
    let caps = args.mark_in_cap.map(|cap| {
        (0..second.boundary_count())
            .map(|j| if j == second.mark() { cap } else { usize::MAX })
            .collect()
    });
    let options = EnumOptions {
        multi_edges: args.multi_edges,
        short_loops: args.short_loops,
        edges_from_boundary: args.from_boundary,
        phantom_budget: args.phantom_budget,
        boundary_in_caps: caps,
        degree_filter: !args.no_degree_filter,
        max_aerial: 4,
    };
    match enumerate_graphs(args.n, second, &options) {
        Ok(graphs) => {
            let items: Vec<serde_json::Value> = graphs
                .iter()
                .map(|g| {
                    let mut v = g.to_json();
                    v["class"] = serde_json::json!(classify_graph(g));
                    v["symmetryFactor"] = serde_json::json!(format_rat(&symmetry_factor(g)));
                    v["id"] = serde_json::json!(g.graph_id());
                    v
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&items).unwrap());
            ExitCode::SUCCESS
        }
        Err(biquant::Error::Budget(msg)) => {
            eprintln!("budget exceeded: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

fn verify(args: &VerifyArgs) -> ExitCode {
    // optional input-validation stage
    if let Some(path) = &args.algebra {
        let code = lie_check(path);
        if code != ExitCode::SUCCESS {
            return code;
        }
    }
    let names: Vec<String> = match &args.checks {
        None => CHECK_NAMES.iter().map(|s| s.to_string()).collect(),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect(),
    };
    for n in &names {
        if !CHECK_NAMES.contains(&n.as_str()) {
            eprintln!("unknown check {n:?}; known: {}", CHECK_NAMES.join(", "));
            return ExitCode::from(1);
        }
    }
    let mut cfg = CampaignConfig {
        samples: args.samples,
        seed: args.seed,
        order: args.order,
        cache_path: args.cache.clone(),
        ..Default::default()
    };
    if let Some(g) = args.gate_sigma {
        cfg.tolerances.gate_sigma = g;
    }
    if let Some(p) = args.pointwise_tol {
        cfg.tolerances.pointwise = p;
    }
    let mut results = Vec::new();
    let mut all_pass = true;
    for name in &names {
        let outcome = match run_check(name, &cfg) {
            Ok(o) => o,
            Err(e) => {
                all_pass = false;
                results.push(serde_json::json!({
                    "name": name,
                    "status": "error",
                    "error": e.to_string(),
                    "seed": args.seed,
                }));
                continue;
            }
        };
        let line = format!(
            "{:<22} {}",
            outcome.name,
            match outcome.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Error => "ERROR",
            }
        );
        eprintln!("{line}");
        for d in &outcome.details {
            eprintln!("    {d}");
        }
        all_pass &= outcome.passed();
        results.push(serde_json::to_value(&outcome).unwrap());
    }
    let report = serde_json::json!({ "checks": results });
    let text = serde_json::to_string_pretty(&report).unwrap();
    match &args.out {
        None => println!("{text}"),
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    }
}
