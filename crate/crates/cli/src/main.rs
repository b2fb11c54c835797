//! Command-line driver: instance generation, parameter planning, attacks,
//! verification, and batch experiments.
//!
//! Exit codes: 0 success / error found, 1 attack did not find the error,
//! 2 usage error, 3 malformed or inconsistent data.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use convisd::cryptolab::{
    fnv64, generate_instance, run_experiment, ErrorMode, ErrorSpec, ExperimentConfig, FieldMeta,
    Instance, InstanceConfig,
};
use convisd::planner::{
    self, expected_solutions, iterations_for_target, lost_probability_table, probability_table,
    success_probability, tail_bound, wf_ratio_table,
};
use convisd::seqdecode::{
    attack, estimate_work, AttackOutcome, AttackParams, BlockPosition, DepthStats,
};

const EXIT_NOT_FOUND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DATA: u8 = 3;

#[derive(Parser)]
#[command(
    name = "convisd",
    version,
    about = "Sequential information-set decoding for convolutional-code cryptosystems",
    after_help = "Files: instances and reports are single JSON objects; planning tables are CSV.\n\
                  Every subcommand is deterministic for a fixed --seed."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit the epsilon-sweep planning tables and derived attack metrics.
    Plan(PlanArgs),
    /// Generate a toy public key, ciphertext, and instance file.
    Gen(GenArgs),
    /// Run the sequential ISD attack (or the cheat-mode work estimate) on an
    /// instance file.
    Attack(AttackArgs),
    /// Check a recovered error against an instance.
    Verify(VerifyArgs),
    /// Run a batch of seeds end to end and aggregate a report.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Field size.
    #[arg(long)]
    q: u64,
    /// Block length N = n(gamma+1).
    #[arg(long = "N")]
    block_len: usize,
    /// Block dimension K = k(gamma+1).
    #[arg(long = "K")]
    block_dim: usize,
    /// Number of blocks s.
    #[arg(long)]
    s: usize,
    /// Total error weight t_e.
    #[arg(long)]
    te: usize,
    /// Per-block expected weight; defaults to ceil(te / s).
    #[arg(long)]
    t: Option<usize>,
    /// Epsilon sweep, inclusive: "0..6" or a single value.
    #[arg(long, default_value = "0..6")]
    eps: String,
    /// Error weight used for the iteration metrics; defaults to t + eps_max.
    #[arg(long)]
    w: Option<usize>,
    /// Fixed ISD iteration count to evaluate.
    #[arg(long = "W")]
    iterations: Option<u64>,
    /// Success-probability target to invert into a recommended W.
    #[arg(long)]
    target: Option<f64>,
    /// Also emit the (te, tc, prob) getting-lost grid.
    #[arg(long)]
    table1: bool,
    #[arg(long, default_value_t = 5)]
    te_max: usize,
    #[arg(long, default_value_t = 3)]
    tc_max: usize,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Parameter preset: bolkema-toy, bolkema-full, abns21-full.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    memory: Option<usize>,
    /// Total error weight t_e.
    #[arg(long)]
    te: Option<usize>,
    /// Maximal error degree.
    #[arg(long)]
    error_degree: Option<usize>,
    /// Repeating per-coefficient weight pattern, e.g. "2,3,3".
    #[arg(long)]
    pattern: Option<String>,
    /// Message degree override.
    #[arg(long)]
    msg_degree: Option<usize>,
    /// Key-generation seed.
    #[arg(long, default_value_t = 0)]
    key_seed: u64,
    /// Message/error seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Embed the planted error for benchmarking.
    #[arg(long)]
    benchmark: bool,
    /// Instance output path.
    #[arg(long)]
    out: PathBuf,
    /// Where to store the secret witness and message (kept apart from the
    /// instance so attacks cannot read them); defaults to <out>.secret.json.
    #[arg(long)]
    secret_out: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    instance: PathBuf,
    /// Window parameter gamma; presets may supply it.
    #[arg(long)]
    gamma: Option<usize>,
    /// Attack preset supplying gamma/t/eps/W defaults.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    eps: Option<usize>,
    /// Fixed ISD iterations per block.
    #[arg(long = "W")]
    iterations: Option<u64>,
    /// Derive W from a success-probability target.
    #[arg(long)]
    target: Option<f64>,
    /// Total weight override (defaults to the instance spec).
    #[arg(long)]
    te: Option<usize>,
    /// Low-weight codeword search bound.
    #[arg(long, default_value_t = 2)]
    wlow: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Walk the correct branch and estimate work instead of attacking;
    /// requires a benchmark instance.
    #[arg(long)]
    cheat: bool,
    /// Enumerate all information sets per block (toy sizes only).
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 1_000_000)]
    max_nodes: u64,
    /// Number of blocks override.
    #[arg(long)]
    num_blocks: Option<usize>,
    #[arg(long, default_value_t = 3.4)]
    clock_ghz: f64,
    /// Report output path (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    instance: PathBuf,
    /// JSON error vector ([[..]] or an attack report with an "error" field).
    error: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Parameter preset: bolkema-toy, bolkema-full, abns21-full.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    memory: Option<usize>,
    #[arg(long)]
    te: Option<usize>,
    #[arg(long)]
    error_degree: Option<usize>,
    #[arg(long)]
    pattern: Option<String>,
    #[arg(long)]
    msg_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    key_seed: u64,
    /// Number of error seeds (0..count).
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    eps: Option<usize>,
    #[arg(long = "W")]
    iterations: Option<u64>,
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, default_value_t = 2)]
    wlow: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    cheat: bool,
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 1_000_000)]
    max_nodes: u64,
    /// Worker threads across seeds.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 3.4)]
    clock_ghz: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, msg: msg.into() }
    }
    fn data(msg: impl Into<String>) -> Failure {
        Failure { code: EXIT_DATA, msg: msg.into() }
    }
}

impl From<convisd::Error> for Failure {
    fn from(e: convisd::Error) -> Failure {
        Failure::data(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::data(e.to_string())
    }
}

type CliResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Plan(a) => cmd_plan(a),
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Attack(a) => cmd_attack(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Experiment(a) => cmd_experiment(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn parse_inclusive_range(text: &str) -> Result<(usize, usize), Failure> {
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: usize = lo.parse().map_err(|_| Failure::usage(format!("bad range '{text}'")))?;
        let hi: usize = hi.parse().map_err(|_| Failure::usage(format!("bad range '{text}'")))?;
        if hi < lo {
            return Err(Failure::usage(format!("empty range '{text}'")));
        }
        Ok((lo, hi))
    } else {
        let v: usize = text.parse().map_err(|_| Failure::usage(format!("bad range '{text}'")))?;
        Ok((v, v))
    }
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_plan(args: PlanArgs) -> CliResult {
    if args.block_dim >= args.block_len {
        return Err(Failure::usage("need K < N"));
    }
    if args.s == 0 {
        return Err(Failure::usage("need s >= 1"));
    }
    let (eps_lo, eps_hi) = parse_inclusive_range(&args.eps)?;
    let t = args.t.unwrap_or_else(|| args.te.div_ceil(args.s));
    if t + eps_hi > args.block_len {
        return Err(Failure::usage("t + eps exceeds the block length"));
    }

    let mut text = probability_table(args.q, args.block_len, args.s, args.te, eps_lo..=eps_hi);
    text.push('\n');
    text.push_str(&wf_ratio_table(args.block_len, args.block_dim, t, eps_lo..=eps_hi)?);

    let w = args.w.unwrap_or(t + eps_hi);
    text.push_str("\nmetric,value\n");
    text.push_str(&format!("t,{t}\n"));
    text.push_str(&format!("w,{w}\n"));
    text.push_str(&format!(
        "tail_bound,{:e}\n",
        tail_bound(args.block_len, args.s, t, eps_hi)
    ));
    text.push_str(&format!(
        "expected_solutions,{:e}\n",
        expected_solutions(args.q, args.block_len, args.block_dim, t, eps_hi)
    ));
    if let Some(iters) = args.iterations {
        let p = success_probability(args.block_len, args.block_dim, w, iters, args.s)?;
        text.push_str(&format!("success_probability_W{iters},{p:e}\n"));
    }
    if let Some(target) = args.target {
        let rec = iterations_for_target(args.block_len, args.block_dim, w, args.s, target)
            .map_err(|e| Failure::usage(e.to_string()))?;
        text.push_str(&format!("recommended_W,{rec}\n"));
    }
    if args.table1 {
        text.push('\n');
        text.push_str(&lost_probability_table(args.q, args.block_len, 1..=args.te_max, 1..=args.tc_max));
    }
    write_or_print(args.out.as_ref(), &text)?;
    Ok(0)
}

/// Instance presets mirroring the attacked parameter sets; the -full presets
/// generate real-size instances whose attacks take hours.
struct Profile {
    instance: InstanceConfig,
    gamma: usize,
    t: usize,
    epsilon: usize,
    iterations: u64,
    warn: Option<&'static str>,
}

fn profile(name: &str) -> Result<Profile, Failure> {
    match name {
        "bolkema-toy" => Ok(Profile {
            instance: InstanceConfig {
                q: 2,
                n: 5,
                k: 3,
                memory: 10,
                key_seed: 0,
                error: ErrorSpec::uniform(14, 199),
                message_degree: None,
                benchmark: false,
            },
            gamma: 11,
            t: 1,
            epsilon: 3,
            iterations: 306,
            warn: None,
        }),
        "bolkema-full" => Ok(Profile {
            instance: InstanceConfig {
                q: 2,
                n: 5,
                k: 3,
                memory: 94,
                key_seed: 0,
                error: ErrorSpec::uniform(140, 1999),
                message_degree: None,
                benchmark: false,
            },
            gamma: 11,
            t: 1,
            epsilon: 3,
            iterations: 430,
            warn: Some("full-scale parameters: a single attack run takes hours"),
        }),
        "abns21-full" => Ok(Profile {
            instance: InstanceConfig {
                q: 64,
                n: 62,
                k: 30,
                memory: 2,
                key_seed: 0,
                error: ErrorSpec::pattern(vec![2, 3, 3], 49),
                message_degree: None,
                benchmark: false,
            },
            gamma: 0,
            t: 2,
            epsilon: 3,
            iterations: 700,
            warn: Some("full-scale parameters: a single attack run can take hours"),
        }),
        other => Err(Failure::usage(format!("unknown profile '{other}'"))),
    }
}

fn parse_pattern(text: &str) -> Result<Vec<usize>, Failure> {
    let weights: Result<Vec<usize>, _> = text.split(',').map(str::trim).map(str::parse).collect();
    let weights = weights.map_err(|_| Failure::usage(format!("bad pattern '{text}'")))?;
    if weights.is_empty() {
        return Err(Failure::usage("empty pattern"));
    }
    Ok(weights)
}

fn build_instance_config(
    profile_name: Option<&str>,
    q: Option<u64>,
    n: Option<usize>,
    k: Option<usize>,
    memory: Option<usize>,
    te: Option<usize>,
    error_degree: Option<usize>,
    pattern: Option<&str>,
    msg_degree: Option<usize>,
    key_seed: u64,
    benchmark: bool,
) -> Result<(InstanceConfig, Option<Profile>), Failure> {
    let preset = profile_name.map(profile).transpose()?;
    let base = preset.as_ref().map(|p| p.instance.clone());
    let q = q.or(base.as_ref().map(|b| b.q)).ok_or_else(|| Failure::usage("missing --q"))?;
    let n = n.or(base.as_ref().map(|b| b.n)).ok_or_else(|| Failure::usage("missing --n"))?;
    let k = k.or(base.as_ref().map(|b| b.k)).ok_or_else(|| Failure::usage("missing --k"))?;
    let memory = memory
        .or(base.as_ref().map(|b| b.memory))
        .ok_or_else(|| Failure::usage("missing --memory"))?;
    let degree = error_degree
        .or(base.as_ref().map(|b| b.error.degree_bound))
        .ok_or_else(|| Failure::usage("missing --error-degree"))?;
    let error = match pattern {
        Some(p) => {
            let weights = parse_pattern(p)?;
            if weights.iter().any(|&w| w > n) {
                return Err(Failure::usage("pattern weight exceeds n"));
            }
            let spec = ErrorSpec::pattern(weights, degree);
            if let Some(t) = te {
                if t != spec.t_e {
                    return Err(Failure::usage(format!(
                        "--te {t} conflicts with the pattern total {}",
                        spec.t_e
                    )));
                }
            }
            spec
        }
        None => {
            let te = te
                .or(base.as_ref().map(|b| b.error.t_e))
                .ok_or_else(|| Failure::usage("missing --te"))?;
            match base.as_ref().map(|b| &b.error) {
                Some(spec) if spec.mode == ErrorMode::PerBlockWeights && te == spec.t_e => spec.clone(),
                _ => ErrorSpec::uniform(te, degree),
            }
        }
    };
    if error.t_e > n * (degree + 1) {
        return Err(Failure::usage("t_e exceeds the number of error positions"));
    }
    Ok((
        InstanceConfig {
            q,
            n,
            k,
            memory,
            key_seed,
            error,
            message_degree: msg_degree.or(base.as_ref().and_then(|b| b.message_degree)),
            benchmark,
        },
        preset,
    ))
}

fn cmd_gen(args: GenArgs) -> CliResult {
    let (cfg, preset) = build_instance_config(
        args.profile.as_deref(),
        args.q,
        args.n,
        args.k,
        args.memory,
        args.te,
        args.error_degree,
        args.pattern.as_deref(),
        args.msg_degree,
        args.key_seed,
        args.benchmark,
    )?;
    if let Some(warn) = preset.as_ref().and_then(|p| p.warn) {
        eprintln!("note: {warn}");
    }
    let generated = generate_instance(&cfg, args.seed)?;
    let text = serde_json::to_string_pretty(&generated.instance.to_json())
        .map_err(convisd::Error::from)?;
    fs::write(&args.out, text)?;

    let secret_path = args
        .secret_out
        .unwrap_or_else(|| args.out.with_extension("secret.json"));
    let secret = serde_json::json!({
        "seed": generated.secret.seed,
        "permutation": generated.secret.permutation,
        "message": generated.message.to_json(),
    });
    fs::write(&secret_path, serde_json::to_string_pretty(&secret).map_err(convisd::Error::from)?)?;
    eprintln!(
        "wrote instance to {} (secret witness in {})",
        args.out.display(),
        secret_path.display()
    );
    Ok(0)
}

#[derive(Serialize)]
struct AttackReport {
    outcome: String,
    found: bool,
    verified: bool,
    seed: u64,
    config_hash: String,
    field: FieldMeta,
    params: AttackParams,
    blocks: usize,
    supercode_used: bool,
    nodes: u64,
    per_depth: Vec<DepthStats>,
    seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<serde_json::Value>,
    cheat: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    positions: Option<Vec<BlockPosition>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimated_nodes: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimated_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimated_bits: Option<f64>,
}

fn load_instance(path: &PathBuf) -> Result<(Instance, String), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    let instance = Instance::from_json(&value)
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    Ok((instance, text))
}

fn attack_params_for(args: &AttackArgs, instance: &Instance) -> Result<AttackParams, Failure> {
    let preset = args.profile.as_deref().map(profile).transpose()?;
    let gamma = args
        .gamma
        .or(preset.as_ref().map(|p| p.gamma))
        .ok_or_else(|| Failure::usage("missing --gamma"))?;
    let per_block = gamma + 1;
    let t_e = args.te.unwrap_or(instance.spec.t_e);
    let blocks = args.num_blocks.unwrap_or_else(|| {
        instance
            .ciphertext
            .len()
            .max(instance.spec.degree_bound + 1)
            .div_ceil(per_block)
            .max(1)
    });
    let t = args
        .t
        .or(preset.as_ref().map(|p| p.t))
        .unwrap_or_else(|| t_e.div_ceil(blocks));
    let epsilon = args.eps.or(preset.as_ref().map(|p| p.epsilon)).unwrap_or(3);
    let n = instance.public_key.n();
    let k = instance.public_key.k();
    let (block_len, block_dim) = (n * per_block, k * per_block);
    if t + epsilon > block_len {
        return Err(Failure::usage("t + eps exceeds the block length"));
    }
    let iterations = match (args.iterations, args.target) {
        (Some(w), _) => w,
        (None, Some(target)) => {
            iterations_for_target(block_len, block_dim, t + epsilon, blocks, target)
                .map_err(|e| Failure::usage(e.to_string()))?
        }
        (None, None) => preset.as_ref().map(|p| p.iterations).unwrap_or(430),
    };

    let mut params = AttackParams::new(gamma, t, epsilon, iterations, t_e, args.seed);
    params.w_low = args.wlow;
    params.cheat = args.cheat;
    params.exhaustive_isd = args.exhaustive;
    params.max_nodes = args.max_nodes;
    params.num_blocks = Some(blocks);
    Ok(params)
}

fn cmd_attack(args: AttackArgs) -> CliResult {
    let (instance, raw) = load_instance(&args.instance)?;
    let params = attack_params_for(&args, &instance)?;
    let config_hash = {
        let params_json = serde_json::to_string(&params).map_err(convisd::Error::from)?;
        format!("{:016x}", fnv64(format!("{params_json}\n{raw}").as_bytes()))
    };
    let field = FieldMeta::of(instance.public_key.field());
    let blocks = params.num_blocks.expect("set above");

    let report;
    let exit;
    let started = Instant::now();
    if args.cheat {
        let planted = instance
            .planted_error
            .as_ref()
            .ok_or_else(|| Failure::data("--cheat needs a benchmark instance with planted_error"))?;
        let est = estimate_work(&instance.public_key, &instance.ciphertext, planted, &params)?;
        let seconds = started.elapsed().as_secs_f64();
        let estimated_bits = if est.estimated_seconds > 0.0 {
            Some(
                planner::time_to_bits(est.estimated_seconds, args.clock_ghz)
                    .map_err(|e| Failure::usage(e.to_string()))?,
            )
        } else {
            None
        };
        exit = if est.found_all { 0 } else { EXIT_NOT_FOUND };
        report = AttackReport {
            outcome: if est.found_all { "estimated".into() } else { "missing-blocks".into() },
            found: est.found_all,
            verified: false,
            seed: params.seed,
            config_hash,
            field,
            params: params.clone(),
            blocks,
            supercode_used: est.supercode_used,
            nodes: est.total_positions,
            per_depth: Vec::new(),
            seconds,
            bits: None,
            error: None,
            message: None,
            cheat: true,
            positions: Some(est.positions),
            estimated_nodes: Some(est.total_positions),
            estimated_seconds: Some(est.estimated_seconds),
            estimated_bits,
        };
    } else {
        let out = attack(&instance.public_key, &instance.ciphertext, &params)?;
        let seconds = started.elapsed().as_secs_f64();
        let (outcome, found, error, message) = match out.outcome {
            AttackOutcome::Found { error, message } => {
                ("found".to_string(), true, Some(error.to_json()), Some(message.to_json()))
            }
            AttackOutcome::NotFound => ("not-found".into(), false, None, None),
            AttackOutcome::BudgetExceeded => ("budget-exceeded".into(), false, None, None),
        };
        let bits = found
            .then(|| planner::time_to_bits(seconds.max(1e-9), args.clock_ghz))
            .transpose()
            .map_err(|e| Failure::usage(e.to_string()))?;
        exit = if found { 0 } else { EXIT_NOT_FOUND };
        report = AttackReport {
            outcome,
            found,
            verified: found,
            seed: params.seed,
            config_hash,
            field,
            params: params.clone(),
            blocks,
            supercode_used: out.trace.supercode_used,
            nodes: out.trace.nodes,
            per_depth: out.trace.per_depth,
            seconds,
            bits,
            error,
            message,
            cheat: false,
            positions: None,
            estimated_nodes: None,
            estimated_seconds: None,
            estimated_bits: None,
        };
    }

    let text = serde_json::to_string_pretty(&report).map_err(convisd::Error::from)?;
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(exit)
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let (instance, _) = load_instance(&args.instance)?;
    let text = fs::read_to_string(&args.error)
        .map_err(|e| Failure::data(format!("{}: {e}", args.error.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::data(format!("{}: {e}", args.error.display())))?;
    let error_value = match &value {
        serde_json::Value::Object(map) => map
            .get("error")
            .ok_or_else(|| Failure::data("report has no 'error' field"))?
            .clone(),
        other => other.clone(),
    };
    let field = instance.public_key.field().clone();
    let error = convisd::convcode::PolyVector::from_json(field, instance.public_key.n(), &error_value)
        .map_err(|e| Failure::data(e.to_string()))?;

    let ok = convisd::seqdecode::verify(&instance.public_key, &instance.ciphertext, &error)?
        && error.weight() <= instance.spec.t_e;
    if ok {
        println!("ok: error verifies, weight {} <= t_e {}", error.weight(), instance.spec.t_e);
        Ok(0)
    } else {
        println!("mismatch: error does not verify or exceeds t_e");
        Ok(EXIT_NOT_FOUND)
    }
}

fn cmd_experiment(args: ExperimentArgs) -> CliResult {
    let (instance_cfg, preset) = build_instance_config(
        args.profile.as_deref(),
        args.q,
        args.n,
        args.k,
        args.memory,
        args.te,
        args.error_degree,
        args.pattern.as_deref(),
        args.msg_degree,
        args.key_seed,
        true,
    )?;
    if let Some(warn) = preset.as_ref().and_then(|p| p.warn) {
        eprintln!("note: {warn}");
    }
    let gamma = args
        .gamma
        .or(preset.as_ref().map(|p| p.gamma))
        .ok_or_else(|| Failure::usage("missing --gamma"))?;
    let per_block = gamma + 1;
    let blocks = (instance_cfg.error.degree_bound + 1 + instance_cfg.memory).div_ceil(per_block);
    let t = args
        .t
        .or(preset.as_ref().map(|p| p.t))
        .unwrap_or_else(|| instance_cfg.error.t_e.div_ceil(blocks));
    let epsilon = args.eps.or(preset.as_ref().map(|p| p.epsilon)).unwrap_or(3);
    let (block_len, block_dim) = (instance_cfg.n * per_block, instance_cfg.k * per_block);
    let iterations = match (args.iterations, args.target) {
        (Some(w), _) => w,
        (None, Some(target)) => {
            iterations_for_target(block_len, block_dim, t + epsilon, blocks, target)
                .map_err(|e| Failure::usage(e.to_string()))?
        }
        (None, None) => preset.as_ref().map(|p| p.iterations).unwrap_or(430),
    };
    let mut attack_params =
        AttackParams::new(gamma, t, epsilon, iterations, instance_cfg.error.t_e, args.seed);
    attack_params.w_low = args.wlow;
    attack_params.exhaustive_isd = args.exhaustive;
    attack_params.max_nodes = args.max_nodes;

    let config = ExperimentConfig {
        instance: instance_cfg,
        attack: attack_params,
        seeds: (0..args.seeds as u64).collect(),
        cheat: args.cheat,
        clock_ghz: args.clock_ghz,
        jobs: args.jobs,
    };
    let report = run_experiment(&config)?;
    let text = serde_json::to_string_pretty(&report).map_err(convisd::Error::from)?;
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    eprintln!(
        "seeds {} | discarded {} ({:.1}%) | successes {}/{}",
        report.sampled_seeds,
        report.discarded_seeds,
        100.0 * report.discard_rate,
        report.successes,
        report.attacked_seeds
    );
    Ok(0)
}
