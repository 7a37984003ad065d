//! Command-line front end: generate synthetic data, select subdata, train
//! and evaluate forests, and run benchmark grids.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage error. Every artifact
//! gets a metadata JSON with the resolved flag set and seed; wall-clock
//! numbers go to a separate `.timings.txt` sidecar so the CSV/JSON outputs
//! are byte-identical across reruns with the same seed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use ped_core::bench::{
    self, fit_and_evaluate, DataSource, ExperimentSpec, ForestOverrides, Method, PedOverrides,
    Scale,
};
use ped_core::data::{self, DatasetMeta, GeneratorSpec};
use ped_core::partition::stratum_report;
use ped_core::sampler::{select_ped, select_twinning, select_uniform, Subdata, SubdataMethod};
use ped_core::{PedConfig, PedError, Seed};

#[derive(Parser)]
#[command(
    name = "ped",
    version,
    about = "Partition-enabled subdata selection for classification"
)]
struct Cli {
    /// Worker thread cap (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// JSON file whose values override the given flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset CSV plus metadata sidecar.
    Generate(GenerateArgs),
    /// Select subdata from a CSV and write the chosen rows.
    Select(SelectArgs),
    /// Fit a random forest on a training CSV and evaluate on a test CSV.
    TrainEval(TrainEvalArgs),
    /// Run a benchmark grid and write results, summary, and manifest.
    Bench(BenchArgs),
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct GenerateArgs {
    /// Family: radial3, waveform, twonorm, threenorm, ringnorm,
    /// imbalanced-threenorm, bin-mvn0, bin-mvn1, bin-mix, bin-t3,
    /// mult-mvn0, mult-mvn1.5, mult-mix, mult-t3.
    #[arg(long)]
    family: Option<String>,
    /// Number of rows.
    #[arg(long)]
    n: Option<usize>,
    /// Feature count for the families that take one.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct SelectArgs {
    /// Input CSV.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Target column name.
    #[arg(long)]
    target: Option<String>,
    /// Comma-separated categorical column names.
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    /// Selection method: ped, uniform, or twinning.
    #[arg(long)]
    method: Option<String>,
    /// Subdata size; exactly one of --n / --fraction.
    #[arg(long)]
    n: Option<usize>,
    /// Subdata size as a fraction of N (floored).
    #[arg(long)]
    fraction: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "t-s")]
    t_s: Option<usize>,
    #[arg(long = "t-d")]
    t_d: Option<usize>,
    #[arg(long = "t-n")]
    t_n: Option<usize>,
    #[arg(long = "t-h")]
    t_h: Option<usize>,
    #[arg(long = "eval-cap")]
    eval_cap: Option<usize>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct TrainEvalArgs {
    #[arg(long)]
    train: Option<PathBuf>,
    #[arg(long)]
    test: Option<PathBuf>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ntree: Option<usize>,
    #[arg(long)]
    mtry: Option<usize>,
    #[arg(long = "max-depth")]
    max_depth: Option<usize>,
    #[arg(long = "min-node-size")]
    min_node_size: Option<usize>,
    /// Evaluation report JSON path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct BenchArgs {
    /// Frozen suite: table1, binary, softmax, radial, timing.
    #[arg(long)]
    suite: Option<String>,
    /// Suite scale: desk or paper.
    #[arg(long)]
    scale: Option<String>,
    /// Ad-hoc grid: generator family instead of a suite.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long = "n-train")]
    n_train: Option<usize>,
    #[arg(long = "n-test")]
    n_test: Option<usize>,
    /// Comma-separated fractions in (0, 1].
    #[arg(long, value_delimiter = ',')]
    fractions: Vec<f64>,
    /// Comma-separated subset of full,ped,uniform,twinning.
    #[arg(long, value_delimiter = ',')]
    methods: Vec<String>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for results.csv, summary.md, manifest.json.
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    #[arg(long = "t-s")]
    t_s: Option<usize>,
    #[arg(long = "t-d")]
    t_d: Option<usize>,
    #[arg(long = "t-n")]
    t_n: Option<usize>,
    #[arg(long = "t-h")]
    t_h: Option<usize>,
    #[arg(long = "eval-cap")]
    eval_cap: Option<usize>,
    #[arg(long)]
    ntree: Option<usize>,
    #[arg(long)]
    mtry: Option<usize>,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<PedError> for CliError {
    fn from(e: PedError) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    match value {
        Some(v) => Ok(v),
        None => usage(format!("missing required flag --{flag}")),
    }
}

fn merge_config<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

macro_rules! override_from {
    ($dst:expr, $src:expr, $($field:ident),+) => {
        $(if $src.$field.is_some() { $dst.$field = $src.$field; })+
    };
}

/// Metadata block common to every artifact: resolved flags and seed.
#[derive(Serialize)]
struct CliMeta {
    command: &'static str,
    version: &'static str,
    seed: u64,
    flags: BTreeMap<String, String>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Runtime(format!("serialize {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("write {}: {e}", path.display())))?;
    Ok(())
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("write {}: {e}", path.display())))
}

fn timings_path(out: &Path) -> PathBuf {
    out.with_extension("timings.txt")
}

fn flag(map: &mut BTreeMap<String, String>, key: &str, value: impl ToString) {
    map.insert(key.to_string(), value.to_string());
}

fn cmd_generate(mut args: GenerateArgs, config: Option<&Path>) -> CliResult<()> {
    if let Some(path) = config {
        let over: GenerateArgs = merge_config(path)?;
        override_from!(args, over, family, n, p, seed, out);
    }
    let family = require(args.family, "family")?;
    let n = require(args.n, "n")?;
    let seed = Seed::new(require(args.seed, "seed")?);
    let out = require(args.out, "out")?;

    let spec = GeneratorSpec::from_family(&family, args.p)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let dataset = data::generate(&spec, n, seed)?;
    data::write_csv(&dataset, &out)?;

    let mut flags = BTreeMap::new();
    flag(&mut flags, "family", &family);
    flag(&mut flags, "n", n);
    if let Some(p) = args.p {
        flag(&mut flags, "p", p);
    }
    flag(&mut flags, "seed", seed.0);
    flag(&mut flags, "out", out.display());

    #[derive(Serialize)]
    struct GenerateMeta {
        cli: CliMeta,
        #[serde(flatten)]
        dataset: DatasetMeta,
    }
    write_json(
        &data::meta_path(&out),
        &GenerateMeta {
            cli: CliMeta {
                command: "generate",
                version: ped_core::VERSION,
                seed: seed.0,
                flags,
            },
            dataset: DatasetMeta::of(&dataset).with_generator(spec, seed),
        },
    )?;
    println!("wrote {} rows to {}", dataset.n_rows(), out.display());
    Ok(())
}

#[derive(Serialize)]
struct StratumMetaRow {
    stratum: usize,
    count: u64,
    gini: f64,
    modal_class: u32,
    n_l: usize,
    r_l: usize,
}

fn cmd_select(mut args: SelectArgs, config: Option<&Path>) -> CliResult<()> {
    if let Some(path) = config {
        let over: SelectArgs = merge_config(path)?;
        override_from!(
            args, over, input, target, method, n, fraction, seed, out, t_s, t_d, t_n, t_h,
            eval_cap
        );
        if !over.categorical.is_empty() {
            args.categorical = over.categorical;
        }
    }
    let input = require(args.input, "input")?;
    let target = require(args.target, "target")?;
    let method = require(args.method, "method")?;
    let seed = Seed::new(require(args.seed, "seed")?);
    let out = require(args.out, "out")?;

    let dataset = data::load_csv_auto(&input, &target, &args.categorical)?;
    let n = match (args.n, args.fraction) {
        (Some(n), None) => n,
        (None, Some(f)) => {
            if !(f > 0.0 && f <= 1.0) {
                return usage("--fraction must lie in (0, 1]");
            }
            ((f * dataset.n_rows() as f64).floor() as usize).max(1)
        }
        (Some(_), Some(_)) => return usage("give --n or --fraction, not both"),
        (None, None) => return usage("one of --n / --fraction is required"),
    };

    let mut flags = BTreeMap::new();
    flag(&mut flags, "input", input.display());
    flag(&mut flags, "target", &target);
    if !args.categorical.is_empty() {
        flag(&mut flags, "categorical", args.categorical.join(","));
    }
    flag(&mut flags, "method", &method);
    flag(&mut flags, "n", n);
    flag(&mut flags, "seed", seed.0);
    flag(&mut flags, "out", out.display());

    #[derive(Serialize)]
    struct Selection {
        method: SubdataMethod,
        n: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        winning_depth: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        leaf_count: Option<usize>,
        #[serde(skip_serializing_if = "Option::is_none")]
        total_gini: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        strata: Option<Vec<StratumMetaRow>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        candidates: Option<Vec<ped_core::partition::CandidateScore>>,
    }

    let started = Instant::now();
    let (subdata, selection, timing_lines): (Subdata, Selection, String) = match method.as_str() {
        "ped" => {
            let cfg = PedConfig {
                n,
                t_s: args.t_s,
                t_d: args.t_d,
                t_n: args.t_n.unwrap_or(10),
                t_h: args.t_h.unwrap_or(5),
                eval_cap: args.eval_cap.unwrap_or(ped_core::partition::DEFAULT_EVAL_CAP),
                seed,
            };
            flag(&mut flags, "t-n", cfg.t_n);
            flag(&mut flags, "t-h", cfg.t_h);
            let sel = select_ped(&dataset, &cfg)?;
            let strata = stratum_report(&sel.partition)
                .into_iter()
                .zip(sel.allocation.n_l.iter().zip(&sel.allocation.r_l))
                .map(|(row, (&n_l, &r_l))| StratumMetaRow {
                    stratum: row.stratum,
                    count: row.count,
                    gini: row.gini,
                    modal_class: row.modal_class,
                    n_l,
                    r_l,
                })
                .collect();
            let timings = format!(
                "partition_s={:.6}\nallocation_s={:.6}\ntwinning_s={:.6}\ntotal_s={:.6}\n",
                sel.timings.partition_s,
                sel.timings.allocation_s,
                sel.timings.twinning_s,
                sel.timings.total_s()
            );
            let selection = Selection {
                method: SubdataMethod::Ped,
                n,
                winning_depth: Some(sel.partition.winning_depth),
                leaf_count: Some(sel.partition.leaf_count()),
                total_gini: Some(sel.partition.total_gini),
                strata: Some(strata),
                candidates: Some(sel.partition.candidates.clone()),
            };
            (sel.subdata, selection, timings)
        }
        "uniform" => {
            let sub = select_uniform(&dataset, n, seed)?;
            let timings = format!("total_s={:.6}\n", started.elapsed().as_secs_f64());
            (
                sub,
                Selection {
                    method: SubdataMethod::Uniform,
                    n,
                    winning_depth: None,
                    leaf_count: None,
                    total_gini: None,
                    strata: None,
                    candidates: None,
                },
                timings,
            )
        }
        "twinning" => {
            let sub = select_twinning(&dataset, n, seed)?;
            let timings = format!("total_s={:.6}\n", started.elapsed().as_secs_f64());
            (
                sub,
                Selection {
                    method: SubdataMethod::Twinning,
                    n,
                    winning_depth: None,
                    leaf_count: None,
                    total_gini: None,
                    strata: None,
                    candidates: None,
                },
                timings,
            )
        }
        other => return usage(format!("unknown method '{other}'")),
    };

    data::write_csv_rows(&dataset, &subdata.indices, &out)?;

    #[derive(Serialize)]
    struct SelectMeta {
        cli: CliMeta,
        #[serde(flatten)]
        dataset: DatasetMeta,
        selection: Selection,
    }
    write_json(
        &data::meta_path(&out),
        &SelectMeta {
            cli: CliMeta {
                command: "select",
                version: ped_core::VERSION,
                seed: seed.0,
                flags,
            },
            dataset: DatasetMeta::of(&dataset),
            selection,
        },
    )?;
    write_text(&timings_path(&out), &timing_lines)?;
    println!(
        "selected {} of {} rows by {} into {}",
        subdata.indices.len(),
        dataset.n_rows(),
        method,
        out.display()
    );
    Ok(())
}

fn cmd_train_eval(mut args: TrainEvalArgs, config: Option<&Path>) -> CliResult<()> {
    if let Some(path) = config {
        let over: TrainEvalArgs = merge_config(path)?;
        override_from!(
            args, over, train, test, target, seed, ntree, mtry, max_depth, min_node_size, out
        );
        if !over.categorical.is_empty() {
            args.categorical = over.categorical;
        }
    }
    let train_path = require(args.train, "train")?;
    let test_path = require(args.test, "test")?;
    let target = require(args.target, "target")?;
    let seed = Seed::new(require(args.seed, "seed")?);
    let out = require(args.out, "out")?;

    let train = data::load_csv_auto(&train_path, &target, &args.categorical)?;
    let test = data::load_csv_auto(&test_path, &target, &args.categorical)?;
    if !train.schema_matches(&test) {
        return Err(CliError::Runtime(
            "train and test schemas differ".to_string(),
        ));
    }

    let overrides = ForestOverrides {
        ntree: args.ntree,
        mtry: args.mtry,
        max_depth: args.max_depth,
        min_node_size: args.min_node_size,
    };
    let rows: Vec<usize> = (0..train.n_rows()).collect();
    let started = Instant::now();
    let report = fit_and_evaluate(&train, &rows, &test, &overrides.config(seed))?;
    let elapsed = started.elapsed().as_secs_f64();

    let mut flags = BTreeMap::new();
    flag(&mut flags, "train", train_path.display());
    flag(&mut flags, "test", test_path.display());
    flag(&mut flags, "target", &target);
    flag(&mut flags, "seed", seed.0);
    flag(&mut flags, "ntree", overrides.ntree.unwrap_or(100));
    flag(&mut flags, "out", out.display());

    #[derive(Serialize)]
    struct ReportMeta {
        cli: CliMeta,
        #[serde(flatten)]
        report: ped_core::metrics::EvalReport,
    }
    write_json(
        &out,
        &ReportMeta {
            cli: CliMeta {
                command: "train-eval",
                version: ped_core::VERSION,
                seed: seed.0,
                flags,
            },
            report: report.clone(),
        },
    )?;
    write_text(&timings_path(&out), &format!("fit_eval_s={elapsed:.6}\n"))?;
    println!("accuracy {:.4} auc {:.4}", report.accuracy, report.auc);
    Ok(())
}

fn cmd_bench(mut args: BenchArgs, config: Option<&Path>) -> CliResult<()> {
    if let Some(path) = config {
        let over: BenchArgs = merge_config(path)?;
        override_from!(
            args, over, suite, scale, family, p, n_train, n_test, replicates, seed, out_dir,
            t_s, t_d, t_n, t_h, eval_cap, ntree, mtry
        );
        if !over.fractions.is_empty() {
            args.fractions = over.fractions;
        }
        if !over.methods.is_empty() {
            args.methods = over.methods;
        }
    }
    let seed = Seed::new(require(args.seed, "seed")?);
    let out_dir = require(args.out_dir, "out-dir")?;

    let scale = match args.scale.as_deref() {
        None | Some("desk") => Scale::Desk,
        Some("paper") => Scale::Paper,
        Some(other) => return usage(format!("unknown scale '{other}'")),
    };
    let methods: Vec<Method> = if args.methods.is_empty() {
        vec![Method::Full, Method::Ped, Method::Uniform, Method::Twinning]
    } else {
        args.methods
            .iter()
            .map(|m| Method::parse(m))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?
    };

    let mut specs: Vec<ExperimentSpec> = match (&args.suite, &args.family) {
        (Some(suite), None) => bench::suite(suite, scale, seed)
            .map_err(|e| CliError::Usage(e.to_string()))?,
        (None, Some(family)) => {
            let gen = GeneratorSpec::from_family(family, args.p)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let (n_train_default, n_test_default, reps_default) = match scale {
                Scale::Desk => (20_000, 10_000, 10),
                Scale::Paper => (100_000, 10_000, 50),
            };
            vec![ExperimentSpec {
                name: family.clone(),
                source: DataSource::Generator { spec: gen },
                n_train: args.n_train.unwrap_or(n_train_default),
                n_test: args.n_test.unwrap_or(n_test_default),
                fractions: vec![0.01, 0.05],
                methods: methods.clone(),
                replicates: args.replicates.unwrap_or(reps_default),
                seed: seed.derive(family, 0),
                ped: PedOverrides::default(),
                forest: ForestOverrides::default(),
            }]
        }
        _ => return usage("give exactly one of --suite / --family"),
    };

    // Grid overrides apply across every spec in the run.
    for spec in &mut specs {
        if !args.fractions.is_empty() {
            spec.fractions = args.fractions.clone();
        }
        if !args.methods.is_empty() {
            spec.methods = methods.clone();
        }
        if let Some(r) = args.replicates {
            spec.replicates = r;
        }
        let ped = PedOverrides {
            t_s: args.t_s,
            t_d: args.t_d,
            t_n: args.t_n,
            t_h: args.t_h,
            eval_cap: args.eval_cap,
        };
        if args.t_s.is_some()
            || args.t_d.is_some()
            || args.t_n.is_some()
            || args.t_h.is_some()
            || args.eval_cap.is_some()
        {
            spec.ped = ped;
        }
        if args.ntree.is_some() || args.mtry.is_some() {
            spec.forest = ForestOverrides {
                ntree: args.ntree,
                mtry: args.mtry,
                ..ForestOverrides::default()
            };
        }
    }

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Runtime(format!("create {}: {e}", out_dir.display())))?;

    let mut all_rows = Vec::new();
    for spec in &specs {
        eprintln!(
            "running {} ({} methods x {} fractions x {} replicates)",
            spec.name,
            spec.methods.len(),
            spec.fractions.len(),
            spec.replicates
        );
        all_rows.extend(bench::run_experiment(spec)?);
    }

    write_text(&out_dir.join("results.csv"), &bench::results_csv(&all_rows))?;
    write_text(
        &out_dir.join("results.timings.txt"),
        &bench::timings_text(&all_rows),
    )?;
    let summary = bench::summarize(&all_rows)?;
    write_text(
        &out_dir.join("summary.md"),
        &bench::summary_markdown(&summary),
    )?;

    let mut flags = BTreeMap::new();
    if let Some(s) = &args.suite {
        flag(&mut flags, "suite", s);
    }
    if let Some(f) = &args.family {
        flag(&mut flags, "family", f);
    }
    flag(
        &mut flags,
        "scale",
        match scale {
            Scale::Desk => "desk",
            Scale::Paper => "paper",
        },
    );
    flag(&mut flags, "seed", seed.0);
    flag(&mut flags, "out-dir", out_dir.display());

    #[derive(Serialize)]
    struct Manifest {
        cli: CliMeta,
        specs: Vec<ExperimentSpec>,
    }
    write_json(
        &out_dir.join("manifest.json"),
        &Manifest {
            cli: CliMeta {
                command: "bench",
                version: ped_core::VERSION,
                seed: seed.0,
                flags,
            },
            specs,
        },
    )?;

    let failed = all_rows.iter().filter(|r| r.error.is_some()).count();
    println!(
        "wrote {} result rows ({} failed cells) to {}",
        all_rows.len(),
        failed,
        out_dir.display()
    );
    if failed == all_rows.len() {
        return Err(CliError::Runtime("every benchmark cell failed".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return usage("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
    }
    let config = cli.config.as_deref();
    match cli.command {
        Command::Generate(args) => cmd_generate(args, config),
        Command::Select(args) => cmd_select(args, config),
        Command::TrainEval(args) => cmd_train_eval(args, config),
        Command::Bench(args) => cmd_bench(args, config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            eprintln!("run 'ped --help' for usage");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
