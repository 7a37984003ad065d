//! Experiment harness: generate or load train/test data R times, select
//! subdata with each method, fit forests, and aggregate accuracy/AUC/time.
//!
//! All scientific outputs (results CSV, summary markdown, manifest) are
//! byte-deterministic given the seed; wall-clock timings live in a separate
//! plain-text sidecar because they can never be.

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{self, Dataset, GeneratorSpec};
use crate::error::{PedError, Result};
use crate::forest::{fit_forest_on, ForestConfig};
use crate::metrics::{accuracy, auc_binary, auc_multiclass, confusion_matrix, EvalReport};
use crate::partition::{PedConfig, DEFAULT_EVAL_CAP};
use crate::sampler::{select_ped, select_twinning, select_uniform};
use crate::seed::Seed;

/// Subdata method in the benchmark grid; `Full` skips selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Full,
    Ped,
    Uniform,
    Twinning,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Full => "full",
            Method::Ped => "ped",
            Method::Uniform => "uniform",
            Method::Twinning => "twinning",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Method::Full),
            "ped" => Ok(Method::Ped),
            "uniform" => Ok(Method::Uniform),
            "twinning" => Ok(Method::Twinning),
            other => Err(PedError::InvalidConfig(format!("unknown method '{other}'"))),
        }
    }
}

/// Where the experiment's data comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum DataSource {
    Generator { spec: GeneratorSpec },
    Csv {
        train: PathBuf,
        test: PathBuf,
        target: String,
        #[serde(default)]
        categorical: Vec<String>,
    },
}

/// Optional overrides of the selection tuning parameters.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PedOverrides {
    pub t_s: Option<usize>,
    pub t_d: Option<usize>,
    pub t_n: Option<usize>,
    pub t_h: Option<usize>,
    pub eval_cap: Option<usize>,
}

impl PedOverrides {
    pub fn config(&self, n: usize, seed: Seed) -> PedConfig {
        PedConfig {
            n,
            t_s: self.t_s,
            t_d: self.t_d,
            t_n: self.t_n.unwrap_or(10),
            t_h: self.t_h.unwrap_or(5),
            eval_cap: self.eval_cap.unwrap_or(DEFAULT_EVAL_CAP),
            seed,
        }
    }
}

/// Optional overrides of the forest hyperparameters.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ForestOverrides {
    pub ntree: Option<usize>,
    pub mtry: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_node_size: Option<usize>,
}

impl ForestOverrides {
    pub fn config(&self, seed: Seed) -> ForestConfig {
        ForestConfig {
            ntree: self.ntree.unwrap_or(100),
            mtry: self.mtry,
            max_depth: self.max_depth,
            min_node_size: self.min_node_size.unwrap_or(5),
            seed,
        }
    }
}

/// One benchmark cell grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub source: DataSource,
    pub n_train: usize,
    pub n_test: usize,
    pub fractions: Vec<f64>,
    pub methods: Vec<Method>,
    pub replicates: usize,
    pub seed: Seed,
    #[serde(default)]
    pub ped: PedOverrides,
    #[serde(default)]
    pub forest: ForestOverrides,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(PedError::InvalidConfig("replicates must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(PedError::InvalidConfig("no methods requested".into()));
        }
        if self.fractions.is_empty()
            || self.fractions.iter().any(|&f| !(f > 0.0 && f <= 1.0))
        {
            return Err(PedError::InvalidConfig(
                "fractions must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// One cell of the results grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub method: Method,
    pub fraction: f64,
    pub replicate: usize,
    pub accuracy: f64,
    pub auc: f64,
    pub n_test: usize,
    pub select_time_s: f64,
    pub fit_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl ResultRow {
    pub fn total_time_s(&self) -> f64 {
        self.select_time_s + self.fit_time_s
    }
}

/// Forest + evaluation of a row subset against a shared test set.
pub fn fit_and_evaluate(
    train: &Dataset,
    rows: &[usize],
    test: &Dataset,
    config: &ForestConfig,
) -> Result<EvalReport> {
    if !train.schema_matches(test) {
        return Err(PedError::InvalidConfig(
            "train and test schemas differ".into(),
        ));
    }
    let model = fit_forest_on(train, rows, config)?;
    let pred = model.predict_class(test)?;
    let acc = accuracy(&pred, test.labels())?;
    let proba = model.predict_proba(test)?;
    let auc = if test.n_classes() == 2 {
        let scores: Vec<f64> = proba.iter().map(|r| r[1]).collect();
        auc_binary(&scores, test.labels())?
    } else {
        auc_multiclass(&proba, test.labels())?
    };
    let confusion = confusion_matrix(&pred, test.labels(), test.n_classes())?;
    Ok(EvalReport {
        accuracy: acc,
        auc,
        confusion,
        n_test: test.n_rows(),
    })
}

struct CellOutcome {
    report: Option<EvalReport>,
    select_time_s: f64,
    fit_time_s: f64,
    error: Option<String>,
}

fn run_cell(
    spec: &ExperimentSpec,
    train: &Dataset,
    test: &Dataset,
    method: Method,
    fraction_index: usize,
    fraction: f64,
    rep_seed: Seed,
    full_cache: &mut Option<CellOutcome>,
) -> CellOutcome {
    let n = ((fraction * train.n_rows() as f64).floor() as usize).max(1);

    let attempt = || -> Result<(Vec<usize>, f64)> {
        let t0 = Instant::now();
        let rows = match method {
            Method::Full => (0..train.n_rows()).collect(),
            Method::Ped => {
                let cfg = spec
                    .ped
                    .config(n, rep_seed.derive("select-ped", fraction_index as u64));
                select_ped(train, &cfg)?.subdata.indices
            }
            Method::Uniform => {
                select_uniform(
                    train,
                    n,
                    rep_seed.derive("select-uniform", fraction_index as u64),
                )?
                .indices
            }
            Method::Twinning => {
                select_twinning(
                    train,
                    n,
                    rep_seed.derive("select-twinning", fraction_index as u64),
                )?
                .indices
            }
        };
        Ok((rows, t0.elapsed().as_secs_f64()))
    };

    // The full fit does not depend on the fraction; do it once per replicate.
    if method == Method::Full {
        if let Some(cached) = full_cache.as_ref() {
            return CellOutcome {
                report: cached.report.clone(),
                select_time_s: cached.select_time_s,
                fit_time_s: cached.fit_time_s,
                error: cached.error.clone(),
            };
        }
    }

    let fit_seed = rep_seed.derive(
        match method {
            Method::Full => "forest-full",
            Method::Ped => "forest-ped",
            Method::Uniform => "forest-uniform",
            Method::Twinning => "forest-twinning",
        },
        if method == Method::Full {
            0
        } else {
            fraction_index as u64
        },
    );

    let outcome = match attempt() {
        Err(e) => CellOutcome {
            report: None,
            select_time_s: 0.0,
            fit_time_s: 0.0,
            error: Some(e.to_string()),
        },
        Ok((rows, select_time_s)) => {
            let t0 = Instant::now();
            match fit_and_evaluate(train, &rows, test, &spec.forest.config(fit_seed)) {
                Ok(report) => CellOutcome {
                    report: Some(report),
                    select_time_s: if method == Method::Full {
                        0.0
                    } else {
                        select_time_s
                    },
                    fit_time_s: t0.elapsed().as_secs_f64(),
                    error: None,
                },
                Err(e) => CellOutcome {
                    report: None,
                    select_time_s,
                    fit_time_s: 0.0,
                    error: Some(e.to_string()),
                },
            }
        }
    };

    if method == Method::Full && full_cache.is_none() {
        *full_cache = Some(CellOutcome {
            report: outcome.report.clone(),
            select_time_s: outcome.select_time_s,
            fit_time_s: outcome.fit_time_s,
            error: outcome.error.clone(),
        });
    }
    outcome
}

/// Run the whole grid. Failed cells become error rows; the grid always has
/// |methods| x |fractions| x replicates rows.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;

    // CSV sources load once and are shared read-only across replicates.
    let csv_data: Option<(Dataset, Dataset)> = match &spec.source {
        DataSource::Generator { .. } => None,
        DataSource::Csv {
            train,
            test,
            target,
            categorical,
        } => {
            let tr = data::load_csv_auto(train, target, categorical)?;
            let te = data::load_csv_auto(test, target, categorical)?;
            if !tr.schema_matches(&te) {
                return Err(PedError::InvalidConfig(
                    "train and test schemas differ".into(),
                ));
            }
            Some((tr, te))
        }
    };

    let rows: Result<Vec<Vec<ResultRow>>> = (0..spec.replicates)
        .into_par_iter()
        .map(|r| {
            let rep_seed = spec.seed.derive("rep", r as u64);
            let (train, test) = match (&spec.source, &csv_data) {
                (DataSource::Generator { spec: g }, _) => (
                    data::generate(g, spec.n_train, rep_seed.derive("train", 0))?,
                    data::generate(g, spec.n_test, rep_seed.derive("test", 0))?,
                ),
                (_, Some((tr, te))) => (tr.clone(), te.clone()),
                _ => unreachable!(),
            };

            let mut full_cache: Option<CellOutcome> = None;
            let mut out = Vec::new();
            for &method in &spec.methods {
                for (fi, &fraction) in spec.fractions.iter().enumerate() {
                    let cell = run_cell(
                        spec,
                        &train,
                        &test,
                        method,
                        fi,
                        fraction,
                        rep_seed,
                        &mut full_cache,
                    );
                    let (acc, auc, n_test) = match &cell.report {
                        Some(rep) => (rep.accuracy, rep.auc, rep.n_test),
                        None => (f64::NAN, f64::NAN, 0),
                    };
                    out.push(ResultRow {
                        dataset: spec.name.clone(),
                        method,
                        fraction,
                        replicate: r,
                        accuracy: acc,
                        auc,
                        n_test,
                        select_time_s: cell.select_time_s,
                        fit_time_s: cell.fit_time_s,
                        error: cell.error,
                    });
                }
            }
            Ok(out)
        })
        .collect();

    Ok(rows?.into_iter().flatten().collect())
}

/// Aggregate of one (dataset, method, fraction) group.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub method: Method,
    pub fraction: f64,
    pub n_ok: usize,
    pub n_error: usize,
    pub mean_accuracy: f64,
    pub sd_accuracy: f64,
    pub mean_auc: f64,
    pub sd_auc: f64,
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Group rows by (dataset, method, fraction) in first-appearance order and
/// compute means and sample standard deviations over the successful cells.
pub fn summarize(rows: &[ResultRow]) -> Result<Vec<SummaryRow>> {
    if rows.is_empty() {
        return Err(PedError::EmptyInput("no result rows".into()));
    }
    let mut order: Vec<(String, Method, f64)> = Vec::new();
    for row in rows {
        let key = (row.dataset.clone(), row.method, row.fraction);
        if !order.contains(&key) {
            order.push(key);
        }
    }
    Ok(order
        .into_iter()
        .map(|(dataset, method, fraction)| {
            let group: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.dataset == dataset && r.method == method && r.fraction == fraction)
                .collect();
            let ok: Vec<&&ResultRow> = group.iter().filter(|r| r.error.is_none()).collect();
            let accs: Vec<f64> = ok.iter().map(|r| r.accuracy).collect();
            let aucs: Vec<f64> = ok.iter().map(|r| r.auc).collect();
            let (mean_accuracy, sd_accuracy) = mean_sd(&accs);
            let (mean_auc, sd_auc) = mean_sd(&aucs);
            SummaryRow {
                dataset,
                method,
                fraction,
                n_ok: ok.len(),
                n_error: group.len() - ok.len(),
                mean_accuracy,
                sd_accuracy,
                mean_auc,
                sd_auc,
            }
        })
        .collect())
}

/// Deterministic results CSV. Wall-clock columns are intentionally absent;
/// see [`timings_text`].
pub fn results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("dataset,method,fraction,replicate,accuracy,auc,n_test,error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.dataset,
            r.method.as_str(),
            r.fraction,
            r.replicate,
            r.accuracy,
            r.auc,
            r.n_test,
            r.error.as_deref().unwrap_or("")
        ));
    }
    out
}

/// Wall-clock sidecar, one line per grid cell.
pub fn timings_text(rows: &[ResultRow]) -> String {
    let mut out = String::from(
        "dataset,method,fraction,replicate,select_time_s,fit_time_s,total_time_s\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{:.6}\n",
            r.dataset,
            r.method.as_str(),
            r.fraction,
            r.replicate,
            r.select_time_s,
            r.fit_time_s,
            r.total_time_s()
        ));
    }
    out
}

/// Markdown rendering of [`summarize`]; numbers are the same f64s the CSV
/// export carries.
pub fn summary_markdown(summary: &[SummaryRow]) -> String {
    let mut out = String::from(
        "| dataset | method | fraction | ok | err | accuracy mean | accuracy sd | auc mean | auc sd |\n\
         |---|---|---|---|---|---|---|---|---|\n",
    );
    for s in summary {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            s.dataset,
            s.method.as_str(),
            s.fraction,
            s.n_ok,
            s.n_error,
            s.mean_accuracy,
            s.sd_accuracy,
            s.mean_auc,
            s.sd_auc
        ));
    }
    out
}

/// Benchmark scale: desk-sized grids or the original table sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Desk,
    Paper,
}

fn base_spec(
    name: &str,
    gen: GeneratorSpec,
    scale: Scale,
    methods: Vec<Method>,
    seed: Seed,
) -> ExperimentSpec {
    let (n_train, n_test, replicates) = match scale {
        Scale::Desk => (20_000, 10_000, 10),
        Scale::Paper => (100_000, 10_000, 50),
    };
    ExperimentSpec {
        name: name.to_string(),
        source: DataSource::Generator { spec: gen },
        n_train,
        n_test,
        fractions: vec![0.01, 0.05],
        methods,
        replicates,
        seed: seed.derive(name, 0),
        ped: PedOverrides::default(),
        forest: ForestOverrides::default(),
    }
}

/// Named experiment suites.
pub fn suite(name: &str, scale: Scale, seed: Seed) -> Result<Vec<ExperimentSpec>> {
    let all = vec![Method::Full, Method::Ped, Method::Uniform, Method::Twinning];
    let subs = vec![Method::Ped, Method::Uniform, Method::Twinning];
    match name {
        "table1" => Ok(vec![
            base_spec("waveform", GeneratorSpec::Waveform, scale, all.clone(), seed),
            base_spec(
                "threenorm-p2",
                GeneratorSpec::Threenorm { p: 2 },
                scale,
                all.clone(),
                seed,
            ),
            base_spec(
                "threenorm-p20",
                GeneratorSpec::Threenorm { p: 20 },
                scale,
                all.clone(),
                seed,
            ),
            base_spec(
                "imb-threenorm-p2",
                GeneratorSpec::ImbalancedThreenorm {
                    p: 2,
                    majority_weight: 0.95,
                },
                scale,
                all.clone(),
                seed,
            ),
            base_spec(
                "imb-threenorm-p20",
                GeneratorSpec::ImbalancedThreenorm {
                    p: 20,
                    majority_weight: 0.95,
                },
                scale,
                all.clone(),
                seed,
            ),
            base_spec(
                "ringnorm-p2",
                GeneratorSpec::Ringnorm { p: 2 },
                scale,
                all.clone(),
                seed,
            ),
            base_spec(
                "twonorm-p2",
                GeneratorSpec::Twonorm { p: 2 },
                scale,
                all.clone(),
                seed,
            ),
        ]),
        "binary" => Ok(vec![
            base_spec(
                "bin-mvn0",
                GeneratorSpec::bin_mvn0(),
                scale,
                vec![Method::Full, Method::Ped, Method::Uniform],
                seed,
            ),
            base_spec(
                "bin-mvn1",
                GeneratorSpec::bin_mvn1(),
                scale,
                vec![Method::Full, Method::Ped, Method::Uniform],
                seed,
            ),
            base_spec(
                "bin-mix",
                GeneratorSpec::bin_mix(),
                scale,
                vec![Method::Full, Method::Ped, Method::Uniform],
                seed,
            ),
            base_spec(
                "bin-t3",
                GeneratorSpec::bin_t3(),
                scale,
                vec![Method::Full, Method::Ped, Method::Uniform],
                seed,
            ),
        ]),
        "softmax" => Ok(vec![
            base_spec("mult-mvn0", GeneratorSpec::mult_mvn0(), scale, all.clone(), seed),
            base_spec(
                "mult-mvn1.5",
                GeneratorSpec::mult_mvn15(),
                scale,
                all.clone(),
                seed,
            ),
            base_spec("mult-mix", GeneratorSpec::mult_mix(), scale, all.clone(), seed),
            base_spec("mult-t3", GeneratorSpec::mult_t3(), scale, all, seed),
        ]),
        "radial" => Ok(vec![base_spec(
            "radial3",
            GeneratorSpec::Radial3,
            scale,
            vec![Method::Full, Method::Ped, Method::Uniform, Method::Twinning],
            seed,
        )]),
        "timing" => {
            let (sizes, p) = match scale {
                Scale::Desk => (vec![100_000usize, 400_000], 20usize),
                Scale::Paper => (vec![1_000_000, 10_000_000], 100),
            };
            let gen = GeneratorSpec::LogisticBin {
                beta: vec![0.5; p],
                covariates: crate::data::CovariateCase::Gaussian {
                    mean: vec![0.0; p],
                    sigma: crate::data::generators::equicorrelated(p, 0.5),
                },
            };
            Ok(sizes
                .into_iter()
                .map(|n| {
                    let name = format!("timing-n{n}");
                    ExperimentSpec {
                        fractions: vec![0.05],
                        replicates: 1,
                        n_train: n,
                        n_test: 10_000,
                        ..base_spec(&name, gen.clone(), scale, subs.clone(), seed)
                    }
                })
                .collect())
        }
        other => Err(PedError::InvalidConfig(format!("unknown suite '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec(methods: Vec<Method>, fractions: Vec<f64>, replicates: usize) -> ExperimentSpec {
        ExperimentSpec {
            name: "tiny".into(),
            source: DataSource::Generator {
                spec: GeneratorSpec::Twonorm { p: 2 },
            },
            n_train: 800,
            n_test: 400,
            fractions,
            methods,
            replicates,
            seed: Seed::new(21),
            ped: PedOverrides::default(),
            forest: ForestOverrides {
                ntree: Some(25),
                ..ForestOverrides::default()
            },
        }
    }

    #[test]
    fn uniform_at_fraction_one_equals_full_data_size() {
        let spec = tiny_spec(vec![Method::Full, Method::Uniform], vec![1.0], 1);
        let rows = run_experiment(&spec).unwrap();
        let full = rows.iter().find(|r| r.method == Method::Full).unwrap();
        let uni = rows.iter().find(|r| r.method == Method::Uniform).unwrap();
        // Same training rows, different bootstrap streams: close accuracy.
        assert!((full.accuracy - uni.accuracy).abs() < 0.05);
    }

    #[test]
    fn reruns_are_identical() {
        let spec = tiny_spec(vec![Method::Ped, Method::Uniform], vec![0.1], 2);
        let a = run_experiment(&spec).unwrap();
        let b = run_experiment(&spec).unwrap();
        assert_eq!(results_csv(&a), results_csv(&b));
    }

    #[test]
    fn grid_is_complete_and_shares_test_sets() {
        let spec = tiny_spec(
            vec![Method::Full, Method::Ped, Method::Uniform, Method::Twinning],
            vec![0.05, 0.1],
            2,
        );
        let rows = run_experiment(&spec).unwrap();
        assert_eq!(rows.len(), 4 * 2 * 2);
        for r in 0..2 {
            let n_tests: Vec<usize> = rows
                .iter()
                .filter(|row| row.replicate == r)
                .map(|row| row.n_test)
                .collect();
            assert!(n_tests.iter().all(|&n| n == n_tests[0]));
        }
    }

    #[test]
    fn summary_mean_and_sd_by_hand() {
        let mk = |acc: f64, rep: usize| ResultRow {
            dataset: "d".into(),
            method: Method::Uniform,
            fraction: 0.1,
            replicate: rep,
            accuracy: acc,
            auc: 0.5,
            n_test: 10,
            select_time_s: 0.0,
            fit_time_s: 0.0,
            error: None,
        };
        let single = summarize(&[mk(0.8, 0)]).unwrap();
        assert_eq!(single[0].mean_accuracy, 0.8);
        assert_eq!(single[0].sd_accuracy, 0.0);

        let pair = summarize(&[mk(0.80, 0), mk(0.82, 1)]).unwrap();
        assert!((pair[0].mean_accuracy - 0.81).abs() < 1e-15);
        assert!((pair[0].sd_accuracy - (2.0f64).sqrt() * 0.01).abs() < 1e-12);
    }

    #[test]
    fn summary_matches_csv_export() {
        let spec = tiny_spec(vec![Method::Uniform], vec![0.1], 3);
        let rows = run_experiment(&spec).unwrap();
        let summary = summarize(&rows).unwrap();
        // Recompute the mean from the CSV text.
        let csv = results_csv(&rows);
        let accs: Vec<f64> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(4).unwrap().parse::<f64>().unwrap())
            .collect();
        let mean = accs.iter().sum::<f64>() / accs.len() as f64;
        assert!((mean - summary[0].mean_accuracy).abs() < 1e-12);
        let md = summary_markdown(&summary);
        assert!(md.contains(&format!("{}", summary[0].mean_accuracy)));
    }

    #[test]
    fn empty_summary_errors() {
        assert!(matches!(
            summarize(&[]),
            Err(PedError::EmptyInput(_))
        ));
    }

    #[test]
    fn unknown_suite_errors() {
        assert!(suite("nope", Scale::Desk, Seed::new(0)).is_err());
    }

    #[test]
    fn table1_suite_has_seven_specs() {
        let specs = suite("table1", Scale::Desk, Seed::new(1)).unwrap();
        assert_eq!(specs.len(), 7);
        assert!(specs.iter().all(|s| s.methods.len() == 4));
        assert!(specs.iter().all(|s| s.fractions == vec![0.01, 0.05]));
    }
}
