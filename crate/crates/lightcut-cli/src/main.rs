//! Command-line surface for the lightcut library.
//!
//! Subcommands: orient, ansatz, simulate, guarantee, optimize, tts, oracle,
//! postprocess, cycles, entropy. Every payload embeds a run manifest; reruns
//! with identical manifests produce byte-identical output. Exit codes:
//! 0 success, 1 parse/validation error, 2 resource-cap error; errors go to
//! stderr as JSON.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lightcut::analysis;
use lightcut::ansatz::{
    build_bipolar_zy, build_qaoa, build_ry, two_qubit_depth, AnsatzCircuit, ParameterScheme,
};
use lightcut::error::Error;
use lightcut::exec::{configure_threads, Parallelism};
use lightcut::graph::{count_simple_cycles, CycleCount, UndirectedGraph, DEFAULT_CYCLE_CAP};
use lightcut::optimize::{maximize_cut, scaling_fit, Method, OptimizerConfig};
use lightcut::oracle::{brute_force_maxcut, cut_value, greedy_flip};
use lightcut::orient::{
    bfs_lightcone_orientation, bipolar_orientation_bfs, bipolar_orientation_dfs, validate_bipolar,
    OrientedDag,
};
use lightcut::sim::{
    expected_cut, half_chain_entropy, sample_bitstrings, variance_estimate, Backend,
    TruncationMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "lightcut", version, about = "Light-cone/bipolar-ZY ansätze for MaxCut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute an acyclic orientation of a graph.
    Orient(OrientArgs),
    /// Build an ansatz circuit and print it.
    Ansatz(AnsatzArgs),
    /// Evaluate per-edge expectations and the expected cut.
    Simulate(SimulateArgs),
    /// Compute a performance-guarantee bound.
    Guarantee(GuaranteeArgs),
    /// Locally optimize the expected cut from an initial point.
    Optimize(OptimizeArgs),
    /// Multi-start time-to-solution benchmark over random 3-regular graphs.
    Tts(TtsArgs),
    /// Brute-force maximum cut.
    Oracle(OracleArgs),
    /// Greedy bit-flip post-processing of sampled assignments.
    Postprocess(PostprocessArgs),
    /// Count simple cycles.
    Cycles(CyclesArgs),
    /// Half-chain entanglement entropy of the ansatz state.
    Entropy(EntropyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AnsatzKindArg {
    BipolarZy,
    LightconeZy,
    Qaoa,
    Ry,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SchemeArg {
    Uniform,
    Degreepair,
    Headdegree,
    Pergate,
}

impl From<SchemeArg> for ParameterScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Uniform => ParameterScheme::Uniform,
            SchemeArg::Degreepair => ParameterScheme::DegreePair,
            SchemeArg::Headdegree => ParameterScheme::HeadDegree,
            SchemeArg::Pergate => ParameterScheme::PerGate,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BackendArg {
    Statevector,
    Pauli,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OrientMethod {
    BfsLightcone,
    BipolarDfs,
    BipolarBfs,
}

#[derive(Args, Debug, Serialize)]
struct CommonOpts {
    /// Graph file in edge-list format (optional `N M` header, `i j` lines).
    #[arg(long)]
    graph: PathBuf,
    /// Master seed; all randomness flows from named substreams of it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker-thread bound (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory; payloads are also written there.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CircuitOpts {
    /// Ansatz family.
    #[arg(long, value_enum, default_value_t = AnsatzKindArg::BipolarZy)]
    ansatz: AnsatzKindArg,
    /// Number of rounds p.
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Parameter scheme for ZY ansätze.
    #[arg(long, value_enum, default_value_t = SchemeArg::Uniform)]
    scheme: SchemeArg,
    /// Light-cone root node.
    #[arg(long, default_value_t = 0)]
    root: usize,
    /// Bipolar source node.
    #[arg(long)]
    s: Option<usize>,
    /// Bipolar sink node (must be adjacent to the source).
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct OrientArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long, value_enum, default_value_t = OrientMethod::BfsLightcone)]
    method: OrientMethod,
    #[arg(long, default_value_t = 0)]
    root: usize,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct AnsatzArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    circuit: CircuitOpts,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    circuit: CircuitOpts,
    /// Comma-separated parameter vector, e.g. `0.93` or `1.57,0.78`.
    #[arg(long)]
    theta: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Statevector)]
    backend: BackendArg,
    /// Truncation spec: `none`, `klocal:K`, `weight:W`, or `coeff:C`.
    #[arg(long, default_value = "none")]
    truncation: String,
    /// Also run the brute-force oracle and report the approximation ratio.
    #[arg(long, default_value_t = false)]
    with_oracle: bool,
    /// Draw this many measurement samples (statevector backend).
    #[arg(long)]
    shots: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct GuaranteeArgs {
    /// One of: zy1-0local, qaoa1, theorem2, zy2-0local, one-local,
    /// angle-relaxed, d-regular.
    #[arg(long)]
    method: String,
    /// Degree for the d-regular bound.
    #[arg(long, default_value_t = 4)]
    d: usize,
    /// Source fraction N+/N for the zy1-0local bound.
    #[arg(long, default_value_t = 0.0)]
    n_plus_ratio: f64,
    /// Search cap for the theorem2 cycle search.
    #[arg(long, default_value_t = 15)]
    k_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct OptimizeArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    circuit: CircuitOpts,
    /// Optimizer: nelder-mead or bfgs.
    #[arg(long, default_value = "nelder-mead")]
    optimizer: String,
    /// Initial parameter vector; random from the init-angles substream if
    /// omitted.
    #[arg(long)]
    theta0: Option<String>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Stop early at the brute-force optimum (requires N within the oracle
    /// cap).
    #[arg(long, default_value_t = false)]
    with_oracle: bool,
}

#[derive(Args, Debug, Serialize)]
struct TtsArgs {
    /// Comma-separated node counts, e.g. `8,10,12,14,16`.
    #[arg(long)]
    n: String,
    /// Graphs per node count.
    #[arg(long, default_value_t = 50)]
    graphs: usize,
    #[arg(long, value_enum, default_value_t = AnsatzKindArg::BipolarZy)]
    ansatz: AnsatzKindArg,
    #[arg(long, value_enum, default_value_t = SchemeArg::Pergate)]
    scheme: SchemeArg,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value = "nelder-mead")]
    optimizer: String,
    #[arg(long, default_value_t = 200)]
    restart_cap: usize,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory for tts.jsonl and tts.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Debug, Serialize)]
struct PostprocessArgs {
    #[command(flatten)]
    common: CommonOpts,
    /// File with one 0/1 assignment per line, e.g. `010110`.
    #[arg(long)]
    bits: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct CyclesArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[arg(long, default_value_t = DEFAULT_CYCLE_CAP)]
    cap: u64,
}

#[derive(Args, Debug, Serialize)]
struct EntropyArgs {
    #[command(flatten)]
    common: CommonOpts,
    #[command(flatten)]
    circuit: CircuitOpts,
    #[arg(long)]
    theta: String,
    /// Bipartition position: qubits 0..cut vs the rest (default N/2).
    #[arg(long)]
    cut: Option<usize>,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    version: String,
    inputs: Vec<String>,
    seed: u64,
    config: Value,
}

fn manifest(command: &str, inputs: Vec<String>, seed: u64, config: Value) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs,
        seed,
        config,
    }
}

/// Named substream derivation so each pipeline stage draws independent,
/// individually reproducible randomness from the master seed.
fn substream_seed(seed: u64, name: &str, k: u64) -> u64 {
    let mut h = seed ^ 0xcbf29ce484222325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h ^= k;
    h.wrapping_mul(0x100000001b3)
}

fn parse_theta(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad angle {f:?}")))
        })
        .collect()
}

fn parse_truncation(spec: &str) -> Result<TruncationMode, Error> {
    let bad = || Error::InvalidArgument(format!("bad truncation spec {spec:?}"));
    match spec.split_once(':') {
        None if spec == "none" => Ok(TruncationMode::None),
        Some(("klocal", k)) => Ok(TruncationMode::KLocal {
            k: k.parse().map_err(|_| bad())?,
        }),
        Some(("weight", w)) => Ok(TruncationMode::Weight {
            w: w.parse().map_err(|_| bad())?,
        }),
        Some(("coeff", c)) => Ok(TruncationMode::Coefficient {
            c: c.parse().map_err(|_| bad())?,
        }),
        _ => Err(bad()),
    }
}

fn load_graph(path: &Path) -> Result<UndirectedGraph, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    UndirectedGraph::parse_edge_list(&text)
}

fn build_dag(g: &UndirectedGraph, opts: &CircuitOpts) -> Result<OrientedDag, Error> {
    match opts.ansatz {
        AnsatzKindArg::BipolarZy => {
            let s = opts.s.unwrap_or(0);
            let t = match opts.t {
                Some(t) => t,
                None => *g
                    .neighbors(s)
                    .first()
                    .ok_or_else(|| Error::InvalidArgument(format!("node {s} has no neighbors")))?,
            };
            bipolar_orientation_dfs(g, s, t)
        }
        _ => bfs_lightcone_orientation(g, opts.root),
    }
}

fn build_circuit(g: &UndirectedGraph, opts: &CircuitOpts) -> Result<AnsatzCircuit, Error> {
    match opts.ansatz {
        AnsatzKindArg::BipolarZy | AnsatzKindArg::LightconeZy => {
            let dag = build_dag(g, opts)?;
            build_bipolar_zy(&dag, opts.p, opts.scheme.into())
        }
        AnsatzKindArg::Qaoa => build_qaoa(g, opts.p),
        AnsatzKindArg::Ry => Ok(build_ry(g)),
    }
}

fn emit(
    name: &str,
    manifest: RunManifest,
    result: Value,
    out: Option<&Path>,
) -> Result<(), Error> {
    let envelope = json!({ "manifest": manifest, "result": result });
    let payload = serde_json::to_string_pretty(&envelope).expect("payload serializes");
    println!("{payload}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::InvalidArgument(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, format!("{payload}\n"))
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn run_orient(args: &OrientArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let dag = match args.method {
        OrientMethod::BfsLightcone => bfs_lightcone_orientation(&g, args.root)?,
        OrientMethod::BipolarDfs => {
            let (s, t) = (args.s.unwrap_or(0), args.t.unwrap_or(1));
            bipolar_orientation_dfs(&g, s, t)?
        }
        OrientMethod::BipolarBfs => {
            let (s, t) = (args.s.unwrap_or(0), args.t.unwrap_or(1));
            bipolar_orientation_bfs(&g, s, t)?
        }
    };
    let report = validate_bipolar(&dag);
    let (num, den) = dag.averaged_heads_in_degree();
    let result = json!({
        "orientation": dag.serialize(),
        "topo_order": dag.topo_order(),
        "sources": dag.sources(),
        "sinks": dag.sinks(),
        "bipolar": {
            "acyclic": report.acyclic,
            "n_plus": report.n_plus,
            "n_minus": report.n_minus,
            "is_bipolar": report.is_bipolar(),
        },
        "averaged_heads_in_degree": { "num": num, "den": den },
    });
    let m = manifest(
        "orient",
        vec![args.common.graph.display().to_string()],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("orient", m, result, args.common.out.as_deref())
}

fn run_ansatz(args: &AnsatzArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let circuit = build_circuit(&g, &args.circuit)?;
    let result = json!({
        "circuit": circuit,
        "two_qubit_depth": two_qubit_depth(&circuit),
        "gate_count": circuit.gates.len(),
    });
    let m = manifest(
        "ansatz",
        vec![args.common.graph.display().to_string()],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("ansatz", m, result, args.common.out.as_deref())
}

fn run_simulate(args: &SimulateArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let circuit = build_circuit(&g, &args.circuit)?;
    let params = parse_theta(&args.theta)?;
    let backend = match args.backend {
        BackendArg::Statevector => Backend::Statevector,
        BackendArg::Pauli => Backend::Pauli,
    };
    let mode = parse_truncation(&args.truncation)?;
    let mut report = expected_cut(&g, &circuit, &params, backend, mode, Parallelism::default())?;
    let mut extra = serde_json::Map::new();
    if args.with_oracle {
        let best = brute_force_maxcut(&g, Parallelism::default())?;
        report = report.with_max_cut(best.value);
        extra.insert("c_max".into(), json!(best.value));
    }
    if let Some(shots) = args.shots {
        let samples = sample_bitstrings(
            &g,
            &circuit,
            &params,
            shots,
            substream_seed(args.common.seed, "sampling", 0),
        )?;
        extra.insert("samples".into(), serde_json::to_value(&samples).unwrap());
    }
    let mut result = serde_json::to_value(&report).unwrap();
    result
        .as_object_mut()
        .unwrap()
        .extend(extra);
    let m = manifest(
        "simulate",
        vec![args.common.graph.display().to_string()],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("simulate", m, result, args.common.out.as_deref())
}

fn run_guarantee(args: &GuaranteeArgs) -> Result<(), Error> {
    configure_threads(args.threads);
    let bound = match args.method.as_str() {
        "zy1-0local" => analysis::theorem1_bound(args.n_plus_ratio)?,
        "qaoa1" => analysis::qaoa1_style_bound(),
        "theorem2" => analysis::theorem2_bound(args.k_max)?,
        "zy2-0local" => analysis::zy2_bound_3regular(),
        "one-local" => analysis::one_local_minmax_3regular(),
        "angle-relaxed" => analysis::angle_relaxed_bound_3regular(),
        "d-regular" => analysis::d_regular_zy1_bound(args.d)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown guarantee method {other:?}"
            )))
        }
    };
    let mut result = serde_json::to_value(&bound).unwrap();
    if let Some(analysis::Witness::CycleIndices { k1, k2 }) = &bound.witness {
        result.as_object_mut().unwrap().insert(
            "cycle_lengths".into(),
            json!([2 * k1 + 3, 2 * k2 + 3]),
        );
    }
    let m = manifest(
        "guarantee",
        vec![],
        0,
        serde_json::to_value(args).unwrap(),
    );
    emit("guarantee", m, result, args.out.as_deref())
}

fn run_optimize(args: &OptimizeArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let circuit = build_circuit(&g, &args.circuit)?;
    let x0 = match &args.theta0 {
        Some(text) => parse_theta(text)?,
        None => {
            let mut rng =
                ChaCha8Rng::seed_from_u64(substream_seed(args.common.seed, "init-angles", 0));
            (0..circuit.parameter_count)
                .map(|_| rng.gen::<f64>() * 2.0 * std::f64::consts::PI - std::f64::consts::PI)
                .collect()
        }
    };
    let method = match args.optimizer.as_str() {
        "nelder-mead" => Method::NelderMead,
        "bfgs" => Method::Bfgs,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown optimizer {other:?}"
            )))
        }
    };
    let config = OptimizerConfig {
        method,
        max_iterations: args.max_iters,
        seed: args.common.seed,
        ..OptimizerConfig::default()
    };
    let c_max = if args.with_oracle {
        Some(brute_force_maxcut(&g, Parallelism::default())?.value)
    } else {
        None
    };
    let out = maximize_cut(&g, &circuit, &x0, &config, c_max.map(|c| c as f64))?;
    let mut result = serde_json::to_value(&out).unwrap();
    if let Some(c) = c_max {
        let obj = result.as_object_mut().unwrap();
        obj.insert("c_max".into(), json!(c));
        obj.insert("ratio".into(), json!(out.value / c as f64));
    }
    let m = manifest(
        "optimize",
        vec![args.common.graph.display().to_string()],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("optimize", m, result, args.common.out.as_deref())
}

/// Deterministically generate the `idx`-th biconnected 3-regular graph of
/// size n for the graph-gen substream of `seed`.
fn tts_graph(n: usize, idx: usize, seed: u64) -> Result<UndirectedGraph, Error> {
    for attempt in 0..1000u64 {
        let s = substream_seed(seed, "graph-gen", ((n as u64) << 32) | (idx as u64) << 12 | attempt);
        let g = match UndirectedGraph::random_regular(n, 3, s) {
            Ok(g) => g,
            Err(_) => continue,
        };
        if !g.is_connected() {
            continue;
        }
        let dec = lightcut::graph::biconnected_components(&g)?;
        if dec.bridges.is_empty() && dec.blocks.len() == 1 {
            return Ok(g);
        }
    }
    Err(Error::RetryCapExceeded { cap: 1000 })
}

fn median_quartiles(values: &mut [f64]) -> (f64, f64, f64) {
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |f: f64| -> f64 {
        let pos = f * (values.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        if lo == hi {
            values[lo]
        } else {
            values[lo] + (pos - lo as f64) * (values[hi] - values[lo])
        }
    };
    (q(0.5), q(0.25), q(0.75))
}

fn run_tts(args: &TtsArgs) -> Result<(), Error> {
    configure_threads(args.threads);
    let sizes: Vec<usize> = args
        .n
        .split(',')
        .map(|f| {
            f.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad node count {f:?}")))
        })
        .collect::<Result<_, _>>()?;
    let method = match args.optimizer.as_str() {
        "nelder-mead" => Method::NelderMead,
        "bfgs" => Method::Bfgs,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown optimizer {other:?}"
            )))
        }
    };
    let mut instances: Vec<(UndirectedGraph, AnsatzCircuit, u64, String, String)> = Vec::new();
    let scheme_name = format!("{:?}", args.scheme).to_lowercase();
    for &n in &sizes {
        for idx in 0..args.graphs {
            let g = tts_graph(n, idx, args.seed)?;
            let circuit = match args.ansatz {
                AnsatzKindArg::Ry => build_ry(&g),
                AnsatzKindArg::LightconeZy => {
                    let dag = bfs_lightcone_orientation(&g, 0)?;
                    build_bipolar_zy(&dag, args.p, args.scheme.into())?
                }
                _ => {
                    let t = g.neighbors(0)[0];
                    let dag = bipolar_orientation_dfs(&g, 0, t)?;
                    build_bipolar_zy(&dag, args.p, args.scheme.into())?
                }
            };
            let c_max = brute_force_maxcut(&g, Parallelism::default())?.value;
            instances.push((
                g,
                circuit,
                c_max,
                format!("n{n}-g{idx}"),
                scheme_name.clone(),
            ));
        }
    }
    let config = OptimizerConfig {
        method,
        max_iterations: args.max_iters,
        restart_cap: args.restart_cap,
        seed: substream_seed(args.seed, "init-angles", 0),
        ..OptimizerConfig::default()
    };
    let records =
        lightcut::optimize::multistart_tts_ensemble(&instances, &config, Parallelism::default())?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| Error::InvalidArgument(format!("cannot create output dir: {e}")))?;
    let jsonl: String = records
        .iter()
        .map(|r| serde_json::to_string(r).unwrap() + "\n")
        .collect();
    std::fs::write(args.out.join("tts.jsonl"), jsonl)
        .map_err(|e| Error::InvalidArgument(format!("cannot write tts.jsonl: {e}")))?;

    let mut csv = String::from("n,median,q25,q75,successes,graphs\n");
    let mut fit_points: Vec<(f64, f64)> = Vec::new();
    for (si, &n) in sizes.iter().enumerate() {
        let slice = &records[si * args.graphs..(si + 1) * args.graphs];
        let mut iters: Vec<f64> = slice.iter().map(|r| r.total_iterations as f64).collect();
        let successes = slice.iter().filter(|r| r.success).count();
        let (med, q25, q75) = median_quartiles(&mut iters);
        csv.push_str(&format!("{n},{med},{q25},{q75},{successes},{}\n", args.graphs));
        fit_points.push((n as f64, med));
    }
    std::fs::write(args.out.join("tts.csv"), &csv)
        .map_err(|e| Error::InvalidArgument(format!("cannot write tts.csv: {e}")))?;

    let fit = if fit_points.len() >= 3 {
        scaling_fit(&fit_points).ok()
    } else {
        None
    };
    let result = json!({
        "records": records.len(),
        "csv": csv,
        "scaling_fit": fit,
    });
    let m = manifest("tts", vec![], args.seed, serde_json::to_value(args).unwrap());
    emit("tts", m, result, Some(args.out.as_path()))
}

fn run_oracle(args: &OracleArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let best = brute_force_maxcut(&g, Parallelism::default())?;
    let result = serde_json::to_value(&best).unwrap();
    let m = manifest(
        "oracle",
        vec![args.common.graph.display().to_string()],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("oracle", m, result, args.common.out.as_deref())
}

fn run_postprocess(args: &PostprocessArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let text = std::fs::read_to_string(&args.bits)
        .map_err(|e| Error::InvalidArgument(format!("cannot read bits file: {e}")))?;
    let mut rows = Vec::new();
    let mut sum_before = 0u64;
    let mut sum_after = 0u64;
    let mut count = 0u64;
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let bits: Vec<u8> = line
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::Parse {
                    line: k + 1,
                    msg: format!("invalid bit {c:?}"),
                }),
            })
            .collect::<Result<_, _>>()?;
        let before = cut_value(&g, &bits);
        let improved = greedy_flip(
            &g,
            &bits,
            substream_seed(args.common.seed, "shuffles", k as u64),
        )?;
        sum_before += before;
        sum_after += improved.value;
        count += 1;
        rows.push(json!({
            "before": before,
            "after": improved.value,
            "bits": improved.bits.iter().map(|b| b.to_string()).collect::<String>(),
        }));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("no assignments in bits file".into()));
    }
    let result = json!({
        "rows": rows,
        "mean_before": sum_before as f64 / count as f64,
        "mean_after": sum_after as f64 / count as f64,
    });
    let m = manifest(
        "postprocess",
        vec![
            args.common.graph.display().to_string(),
            args.bits.display().to_string(),
        ],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("postprocess", m, result, args.common.out.as_deref())
}

fn run_cycles(args: &CyclesArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let result = match count_simple_cycles(&g, args.cap) {
        CycleCount::Exact(count) => json!({ "count": count, "exact": true }),
        CycleCount::ExceededCap(seen) => json!({ "count": seen, "exact": false, "cap": args.cap }),
    };
    let m = manifest(
        "cycles",
        vec![args.common.graph.display().to_string()],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("cycles", m, result, args.common.out.as_deref())
}

fn run_entropy(args: &EntropyArgs) -> Result<(), Error> {
    configure_threads(args.common.threads);
    let g = load_graph(&args.common.graph)?;
    let circuit = build_circuit(&g, &args.circuit)?;
    let params = parse_theta(&args.theta)?;
    let cut = args.cut.unwrap_or(g.n() / 2);
    let entropy = half_chain_entropy(&circuit, &params, cut)?;
    let variance = variance_estimate(
        &g,
        &circuit,
        64,
        substream_seed(args.common.seed, "variance", 0),
        Parallelism::default(),
    )
    .ok();
    let result = json!({
        "cut": cut,
        "entropy_bits": entropy,
        "variance_estimate": variance,
    });
    let m = manifest(
        "entropy",
        vec![args.common.graph.display().to_string()],
        args.common.seed,
        serde_json::to_value(args).unwrap(),
    );
    emit("entropy", m, result, args.common.out.as_deref())
}

fn dispatch(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Orient(a) => run_orient(a),
        Command::Ansatz(a) => run_ansatz(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Guarantee(a) => run_guarantee(a),
        Command::Optimize(a) => run_optimize(a),
        Command::Tts(a) => run_tts(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Postprocess(a) => run_postprocess(a),
        Command::Cycles(a) => run_cycles(a),
        Command::Entropy(a) => run_entropy(a),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Infeasible(_) => "infeasible",
        Error::RetryCapExceeded { .. } => "retry-cap-exceeded",
        Error::Disconnected { .. } => "disconnected",
        Error::NotBiconnected(_) => "not-biconnected",
        Error::QubitCapExceeded { .. } => "qubit-cap-exceeded",
        Error::TermCapExceeded { .. } => "term-cap-exceeded",
        Error::SizeCapExceeded { .. } => "size-cap-exceeded",
        Error::LengthMismatch { .. } => "length-mismatch",
    }
}

/// Merge `--config FILE` (key=value lines mirroring long flags) into the
/// argument list, inserted right after the subcommand so explicit flags win.
fn merge_config_args(mut argv: Vec<String>) -> Result<Vec<String>, Error> {
    let Some(pos) = argv.iter().position(|a| a == "--config") else {
        return Ok(argv);
    };
    if pos + 1 >= argv.len() {
        return Err(Error::InvalidArgument("--config needs a file".into()));
    }
    let path = argv.remove(pos + 1);
    argv.remove(pos);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read config {path}: {e}")))?;
    let mut extra = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: k + 1,
                msg: format!("expected key=value, got {line:?}"),
            });
        };
        let flag = format!("--{}", key.trim());
        // Flags given explicitly on the command line win over the config file.
        if argv.contains(&flag) {
            continue;
        }
        extra.push(flag);
        extra.push(value.trim().to_string());
    }
    // Insert after the subcommand token (first non-flag argument).
    let insert_at = argv
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, a)| !a.starts_with('-'))
        .map(|(i, _)| i + 1)
        .unwrap_or(argv.len());
    argv.splice(insert_at..insert_at, extra);
    Ok(argv)
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match merge_config_args(argv) {
        Ok(v) => v,
        Err(e) => {
            eprintln!(
                "{}",
                json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } })
            );
            std::process::exit(1);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!(
                "{}",
                json!({ "error": { "kind": "usage", "message": e.to_string() } })
            );
            std::process::exit(1);
        }
    };
    if let Err(e) = dispatch(&cli) {
        eprintln!(
            "{}",
            json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } })
        );
        std::process::exit(if e.is_resource_cap() { 2 } else { 1 });
    }
}
