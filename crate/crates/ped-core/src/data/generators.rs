//! Synthetic dataset generators.
//!
//! Families cover a radial three-class response, the classic Breiman
//! benchmark functions (waveform, twonorm, threenorm, ringnorm, and an
//! imbalanced threenorm), a logistic-regression binary response, and a
//! three-class softmax response with configurable covariate distributions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{ColumnSchema, Dataset};
use crate::error::{PedError, Result};
use crate::seed::Seed;

/// Covariate distribution for the regression-structured families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovariateCase {
    Gaussian {
        mean: Vec<f64>,
        sigma: Vec<Vec<f64>>,
    },
    GaussianMixture {
        weights: Vec<f64>,
        means: Vec<Vec<f64>>,
        sigma: Vec<Vec<f64>>,
    },
    /// Multivariate t with `dof` degrees of freedom and the given scale matrix.
    StudentT {
        dof: f64,
        mean: Vec<f64>,
        scale: Vec<Vec<f64>>,
    },
}

impl CovariateCase {
    pub fn dim(&self) -> usize {
        match self {
            CovariateCase::Gaussian { mean, .. } => mean.len(),
            CovariateCase::GaussianMixture { means, .. } => {
                means.first().map(Vec::len).unwrap_or(0)
            }
            CovariateCase::StudentT { mean, .. } => mean.len(),
        }
    }

    fn matrix(&self) -> &Vec<Vec<f64>> {
        match self {
            CovariateCase::Gaussian { sigma, .. } => sigma,
            CovariateCase::GaussianMixture { sigma, .. } => sigma,
            CovariateCase::StudentT { scale, .. } => scale,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.dim();
        if p == 0 {
            return Err(PedError::InvalidSpec("covariate dimension is zero".into()));
        }
        let sigma = self.matrix();
        if sigma.len() != p || sigma.iter().any(|r| r.len() != p) {
            return Err(PedError::InvalidSpec(format!(
                "covariance must be {p}x{p}"
            )));
        }
        for i in 0..p {
            for j in 0..i {
                if (sigma[i][j] - sigma[j][i]).abs() > 1e-9 {
                    return Err(PedError::InvalidSpec("covariance is not symmetric".into()));
                }
            }
        }
        if cholesky(sigma).is_none() {
            return Err(PedError::InvalidSpec(
                "covariance is not positive definite".into(),
            ));
        }
        match self {
            CovariateCase::GaussianMixture { weights, means, .. } => {
                if weights.len() != means.len() || weights.is_empty() {
                    return Err(PedError::InvalidSpec(
                        "mixture weights and means must match".into(),
                    ));
                }
                if weights.iter().any(|&w| w < 0.0) {
                    return Err(PedError::InvalidSpec("negative mixture weight".into()));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(PedError::InvalidSpec("mixture weights must sum to 1".into()));
                }
                if means.iter().any(|m| m.len() != p) {
                    return Err(PedError::InvalidSpec("mixture mean length mismatch".into()));
                }
            }
            CovariateCase::StudentT { dof, .. } => {
                if *dof <= 0.0 {
                    return Err(PedError::InvalidSpec(
                        "t degrees of freedom must be positive".into(),
                    ));
                }
            }
            CovariateCase::Gaussian { .. } => {}
        }
        Ok(())
    }
}

/// Specification of one synthetic family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Two standard-normal features; class by radius quantiles (92/5/3%).
    Radial3,
    /// 21 features, 3 classes; convex combinations of triangular waveforms.
    Waveform,
    Twonorm { p: usize },
    Threenorm { p: usize },
    Ringnorm { p: usize },
    /// Threenorm conditionals with the class drawn first at the given weight.
    ImbalancedThreenorm { p: usize, majority_weight: f64 },
    /// y ~ Bernoulli(sigmoid(x'beta)).
    LogisticBin {
        beta: Vec<f64>,
        covariates: CovariateCase,
    },
    /// Three classes with probabilities proportional to (1, e^{x'b1}, e^{x'b2});
    /// `beta` holds b1 then b2.
    SoftmaxMult {
        beta: Vec<f64>,
        covariates: CovariateCase,
    },
}

/// Equicorrelated covariance: unit diagonal, `rho` off-diagonal.
pub fn equicorrelated(p: usize, rho: f64) -> Vec<Vec<f64>> {
    (0..p)
        .map(|i| (0..p).map(|j| if i == j { 1.0 } else { rho }).collect())
        .collect()
}

fn scale_matrix(m: &[Vec<f64>], factor: f64) -> Vec<Vec<f64>> {
    m.iter()
        .map(|row| row.iter().map(|v| v * factor).collect())
        .collect()
}

impl GeneratorSpec {
    pub fn n_features(&self) -> usize {
        match self {
            GeneratorSpec::Radial3 => 2,
            GeneratorSpec::Waveform => 21,
            GeneratorSpec::Twonorm { p }
            | GeneratorSpec::Threenorm { p }
            | GeneratorSpec::Ringnorm { p }
            | GeneratorSpec::ImbalancedThreenorm { p, .. } => *p,
            GeneratorSpec::LogisticBin { covariates, .. }
            | GeneratorSpec::SoftmaxMult { covariates, .. } => covariates.dim(),
        }
    }

    pub fn n_classes(&self) -> usize {
        match self {
            GeneratorSpec::Radial3 | GeneratorSpec::Waveform | GeneratorSpec::SoftmaxMult { .. } => 3,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Radial3 | GeneratorSpec::Waveform => Ok(()),
            GeneratorSpec::Twonorm { p }
            | GeneratorSpec::Threenorm { p }
            | GeneratorSpec::Ringnorm { p } => {
                if *p == 0 {
                    Err(PedError::InvalidSpec("p must be positive".into()))
                } else {
                    Ok(())
                }
            }
            GeneratorSpec::ImbalancedThreenorm { p, majority_weight } => {
                if *p == 0 {
                    return Err(PedError::InvalidSpec("p must be positive".into()));
                }
                if !(0.0..1.0).contains(&(1.0 - majority_weight)) || *majority_weight <= 0.0 {
                    return Err(PedError::InvalidSpec(
                        "majority weight must lie in (0, 1]".into(),
                    ));
                }
                Ok(())
            }
            GeneratorSpec::LogisticBin { beta, covariates } => {
                covariates.validate()?;
                if beta.len() != covariates.dim() {
                    return Err(PedError::InvalidSpec(format!(
                        "beta length {} does not match p = {}",
                        beta.len(),
                        covariates.dim()
                    )));
                }
                Ok(())
            }
            GeneratorSpec::SoftmaxMult { beta, covariates } => {
                covariates.validate()?;
                if beta.len() != 2 * covariates.dim() {
                    return Err(PedError::InvalidSpec(format!(
                        "beta length {} does not match (K-1)*p = {}",
                        beta.len(),
                        2 * covariates.dim()
                    )));
                }
                Ok(())
            }
        }
    }

    // Named cases from the subdata-selection literature: seven correlated
    // features with beta = 0.5 for the binary response.
    pub fn bin_mvn0() -> Self {
        GeneratorSpec::LogisticBin {
            beta: vec![0.5; 7],
            covariates: CovariateCase::Gaussian {
                mean: vec![0.0; 7],
                sigma: equicorrelated(7, 0.5),
            },
        }
    }

    pub fn bin_mvn1() -> Self {
        GeneratorSpec::LogisticBin {
            beta: vec![0.5; 7],
            covariates: CovariateCase::Gaussian {
                mean: vec![1.0; 7],
                sigma: equicorrelated(7, 0.5),
            },
        }
    }

    pub fn bin_mix() -> Self {
        GeneratorSpec::LogisticBin {
            beta: vec![0.5; 7],
            covariates: CovariateCase::GaussianMixture {
                weights: vec![0.5, 0.5],
                means: vec![vec![1.0; 7], vec![-1.0; 7]],
                sigma: equicorrelated(7, 0.5),
            },
        }
    }

    pub fn bin_t3() -> Self {
        GeneratorSpec::LogisticBin {
            beta: vec![0.5; 7],
            covariates: CovariateCase::StudentT {
                dof: 3.0,
                mean: vec![0.0; 7],
                scale: scale_matrix(&equicorrelated(7, 0.5), 0.1),
            },
        }
    }

    // Three-class softmax cases: three correlated features, beta = (1,1,1,2,2,2).
    pub fn mult_mvn0() -> Self {
        GeneratorSpec::SoftmaxMult {
            beta: vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0],
            covariates: CovariateCase::Gaussian {
                mean: vec![0.0; 3],
                sigma: equicorrelated(3, 0.5),
            },
        }
    }

    pub fn mult_mvn15() -> Self {
        GeneratorSpec::SoftmaxMult {
            beta: vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0],
            covariates: CovariateCase::Gaussian {
                mean: vec![1.5; 3],
                sigma: equicorrelated(3, 0.5),
            },
        }
    }

    pub fn mult_mix() -> Self {
        GeneratorSpec::SoftmaxMult {
            beta: vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0],
            covariates: CovariateCase::GaussianMixture {
                weights: vec![0.5, 0.5],
                means: vec![vec![1.0; 3], vec![-1.0; 3]],
                sigma: equicorrelated(3, 0.5),
            },
        }
    }

    pub fn mult_t3() -> Self {
        GeneratorSpec::SoftmaxMult {
            beta: vec![1.0, 1.0, 1.0, 2.0, 2.0, 2.0],
            covariates: CovariateCase::StudentT {
                dof: 3.0,
                mean: vec![0.0; 3],
                scale: equicorrelated(3, 0.5),
            },
        }
    }

    /// Build a spec from a CLI family name. `p` applies to the families that
    /// take a dimension; others ignore it.
    pub fn from_family(name: &str, p: Option<usize>) -> Result<Self> {
        let p_or = |d: usize| p.unwrap_or(d);
        let spec = match name {
            "radial3" => GeneratorSpec::Radial3,
            "waveform" => GeneratorSpec::Waveform,
            "twonorm" => GeneratorSpec::Twonorm { p: p_or(2) },
            "threenorm" => GeneratorSpec::Threenorm { p: p_or(2) },
            "ringnorm" => GeneratorSpec::Ringnorm { p: p_or(2) },
            "imbalanced-threenorm" => GeneratorSpec::ImbalancedThreenorm {
                p: p_or(2),
                majority_weight: 0.95,
            },
            "bin-mvn0" => GeneratorSpec::bin_mvn0(),
            "bin-mvn1" => GeneratorSpec::bin_mvn1(),
            "bin-mix" => GeneratorSpec::bin_mix(),
            "bin-t3" => GeneratorSpec::bin_t3(),
            "mult-mvn0" => GeneratorSpec::mult_mvn0(),
            "mult-mvn1.5" => GeneratorSpec::mult_mvn15(),
            "mult-mix" => GeneratorSpec::mult_mix(),
            "mult-t3" => GeneratorSpec::mult_t3(),
            other => {
                return Err(PedError::InvalidSpec(format!(
                    "unknown family '{other}'"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Lower-triangular Cholesky factor, or None when not positive definite.
fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 1e-12 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

struct MvnSampler {
    mean: Vec<f64>,
    chol: Vec<Vec<f64>>,
}

impl MvnSampler {
    fn new(mean: &[f64], sigma: &[Vec<f64>]) -> Self {
        MvnSampler {
            mean: mean.to_vec(),
            chol: cholesky(sigma).expect("validated covariance"),
        }
    }

    fn sample_scaled(&self, rng: &mut ChaCha8Rng, factor: f64, out: &mut [f64]) {
        let p = self.mean.len();
        let mut z = vec![0.0; p];
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        for i in 0..p {
            let mut v = 0.0;
            for k in 0..=i {
                v += self.chol[i][k] * z[k];
            }
            out[i] = self.mean[i] + factor * v;
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        self.sample_scaled(rng, 1.0, out);
    }
}

/// Empirical quantile of a sorted slice: the ceil(alpha*n)-th order statistic.
fn quantile_sorted(sorted: &[f64], alpha: f64) -> f64 {
    let n = sorted.len();
    let k = ((alpha * n as f64).ceil() as usize).clamp(1, n);
    sorted[k - 1]
}

fn dataset_from_columns(
    columns: Vec<Vec<f64>>,
    labels: Vec<u32>,
    n_classes: usize,
) -> Result<Dataset> {
    let schema: Vec<ColumnSchema> = (0..columns.len())
        .map(|j| ColumnSchema::continuous(format!("x{}", j + 1)))
        .collect();
    let label_levels: Vec<String> = (0..n_classes).map(|k| k.to_string()).collect();
    Dataset::new(schema, columns, labels, label_levels, "y")
}

/// Draw `n_rows` i.i.d. rows from the family; deterministic given `seed`.
pub fn generate(spec: &GeneratorSpec, n_rows: usize, seed: Seed) -> Result<Dataset> {
    spec.validate()?;
    if n_rows == 0 {
        return Err(PedError::EmptyInput("n_rows must be positive".into()));
    }
    let mut rng = seed.derive("generate", 0).rng();
    match spec {
        GeneratorSpec::Radial3 => radial3(n_rows, &mut rng),
        GeneratorSpec::Waveform => waveform(n_rows, &mut rng),
        GeneratorSpec::Twonorm { p } => twonorm(*p, n_rows, &mut rng),
        GeneratorSpec::Threenorm { p } => threenorm(*p, n_rows, None, &mut rng),
        GeneratorSpec::Ringnorm { p } => ringnorm(*p, n_rows, &mut rng),
        GeneratorSpec::ImbalancedThreenorm { p, majority_weight } => {
            threenorm(*p, n_rows, Some(*majority_weight), &mut rng)
        }
        GeneratorSpec::LogisticBin { beta, covariates } => {
            logistic_bin(beta, covariates, n_rows, &mut rng)
        }
        GeneratorSpec::SoftmaxMult { beta, covariates } => {
            softmax_mult(beta, covariates, n_rows, &mut rng)
        }
    }
}

/// Classes: 0 = interior majority, 1 = outside the 95% radius quantile,
/// 2 = inside the 3% radius quantile. Quantiles are empirical per batch.
fn radial3(n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let mut x1 = vec![0.0; n];
    let mut x2 = vec![0.0; n];
    let mut radius = vec![0.0; n];
    for i in 0..n {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        x1[i] = a;
        x2[i] = b;
        radius[i] = (a * a + b * b).sqrt();
    }
    let mut sorted = radius.clone();
    sorted.sort_by(f64::total_cmp);
    let outer = quantile_sorted(&sorted, 0.95);
    let inner = quantile_sorted(&sorted, 0.03);
    let labels = radius
        .iter()
        .map(|&r| {
            if r > outer {
                1
            } else if r < inner {
                2
            } else {
                0
            }
        })
        .collect();
    dataset_from_columns(vec![x1, x2], labels, 3)
}

fn waveform(n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    // Triangular bases peaking at positions 7, 15, and 11 of 21.
    let h = |peak: f64, m: usize| (6.0 - (m as f64 + 1.0 - peak).abs()).max(0.0);
    let pairs = [(7.0, 15.0), (7.0, 11.0), (15.0, 11.0)];
    let mut columns = vec![vec![0.0; n]; 21];
    let mut labels = vec![0u32; n];
    for i in 0..n {
        let class = rng.random_range(0..3u32);
        let (p1, p2) = pairs[class as usize];
        let u: f64 = rng.random();
        for (m, col) in columns.iter_mut().enumerate() {
            let noise: f64 = rng.sample(StandardNormal);
            col[i] = u * h(p1, m) + (1.0 - u) * h(p2, m) + noise;
        }
        labels[i] = class;
    }
    dataset_from_columns(columns, labels, 3)
}

fn twonorm(p: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let a = 2.0 / (p as f64).sqrt();
    let mut columns = vec![vec![0.0; n]; p];
    let mut labels = vec![0u32; n];
    for i in 0..n {
        let class = rng.random_range(0..2u32);
        let sign = if class == 0 { 1.0 } else { -1.0 };
        for col in columns.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            col[i] = sign * a + z;
        }
        labels[i] = class;
    }
    dataset_from_columns(columns, labels, 2)
}

/// Threenorm conditionals; `majority` draws class 0 with that probability
/// instead of 0.5 (the imbalanced variant).
fn threenorm(p: usize, n: usize, majority: Option<f64>, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let a = 2.0 / (p as f64).sqrt();
    let p0 = majority.unwrap_or(0.5);
    let mut columns = vec![vec![0.0; n]; p];
    let mut labels = vec![0u32; n];
    for i in 0..n {
        let class = if rng.random::<f64>() < p0 { 0u32 } else { 1 };
        if class == 0 {
            let sign = if rng.random::<f64>() < 0.5 { 1.0 } else { -1.0 };
            for col in columns.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                col[i] = sign * a + z;
            }
        } else {
            for (j, col) in columns.iter_mut().enumerate() {
                let z: f64 = rng.sample(StandardNormal);
                let mean = if j % 2 == 0 { a } else { -a };
                col[i] = mean + z;
            }
        }
        labels[i] = class;
    }
    dataset_from_columns(columns, labels, 2)
}

fn ringnorm(p: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
    let a = 1.0 / (p as f64).sqrt();
    let mut columns = vec![vec![0.0; n]; p];
    let mut labels = vec![0u32; n];
    for i in 0..n {
        let class = rng.random_range(0..2u32);
        for col in columns.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            col[i] = if class == 0 { 2.0 * z } else { a + z };
        }
        labels[i] = class;
    }
    dataset_from_columns(columns, labels, 2)
}

enum PreparedCase {
    Gaussian(MvnSampler),
    Mixture { weights: Vec<f64>, comps: Vec<MvnSampler> },
    StudentT { dof: f64, sampler: MvnSampler },
}

impl PreparedCase {
    fn new(case: &CovariateCase) -> Self {
        match case {
            CovariateCase::Gaussian { mean, sigma } => {
                PreparedCase::Gaussian(MvnSampler::new(mean, sigma))
            }
            CovariateCase::GaussianMixture {
                weights,
                means,
                sigma,
            } => PreparedCase::Mixture {
                weights: weights.clone(),
                comps: means.iter().map(|m| MvnSampler::new(m, sigma)).collect(),
            },
            CovariateCase::StudentT { dof, mean, scale } => PreparedCase::StudentT {
                dof: *dof,
                sampler: MvnSampler::new(mean, scale),
            },
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, out: &mut [f64]) {
        match self {
            PreparedCase::Gaussian(s) => s.sample(rng, out),
            PreparedCase::Mixture { weights, comps } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut pick = comps.len() - 1;
                for (c, &w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        pick = c;
                        break;
                    }
                }
                comps[pick].sample(rng, out);
            }
            PreparedCase::StudentT { dof, sampler } => {
                let w: f64 = ChiSquared::new(*dof).unwrap().sample(rng);
                sampler.sample_scaled(rng, (dof / w).sqrt(), out);
            }
        }
    }
}

fn logistic_bin(
    beta: &[f64],
    case: &CovariateCase,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Dataset> {
    let p = case.dim();
    let prepared = PreparedCase::new(case);
    let mut columns = vec![vec![0.0; n]; p];
    let mut labels = vec![0u32; n];
    let mut x = vec![0.0; p];
    for i in 0..n {
        prepared.draw(rng, &mut x);
        let eta: f64 = x.iter().zip(beta).map(|(xi, bi)| xi * bi).sum();
        let prob = 1.0 / (1.0 + (-eta).exp());
        labels[i] = u32::from(rng.random::<f64>() < prob);
        for (j, col) in columns.iter_mut().enumerate() {
            col[i] = x[j];
        }
    }
    dataset_from_columns(columns, labels, 2)
}

fn softmax_mult(
    beta: &[f64],
    case: &CovariateCase,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Dataset> {
    let p = case.dim();
    let prepared = PreparedCase::new(case);
    let (b1, b2) = beta.split_at(p);
    let mut columns = vec![vec![0.0; n]; p];
    let mut labels = vec![0u32; n];
    let mut x = vec![0.0; p];
    for i in 0..n {
        prepared.draw(rng, &mut x);
        let eta1: f64 = x.iter().zip(b1).map(|(xi, bi)| xi * bi).sum();
        let eta2: f64 = x.iter().zip(b2).map(|(xi, bi)| xi * bi).sum();
        // Class 0 is the baseline with linear predictor 0.
        let m = 0.0f64.max(eta1).max(eta2);
        let w = [(-m).exp(), (eta1 - m).exp(), (eta2 - m).exp()];
        let total = w[0] + w[1] + w[2];
        let u: f64 = rng.random::<f64>() * total;
        let class = if u < w[0] {
            0
        } else if u < w[0] + w[1] {
            1
        } else {
            2
        };
        labels[i] = class;
        for (j, col) in columns.iter_mut().enumerate() {
            col[i] = x[j];
        }
    }
    dataset_from_columns(columns, labels, 3)
}
