//! Random forest classifier: bootstrap sampling, per-node feature subsets,
//! majority vote.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cart::{fit_tree, CartTree, TreeFitConfig};
use crate::data::Dataset;
use crate::error::{PedError, Result};
use crate::seed::Seed;

/// Forest hyperparameters. `mtry = None` resolves to floor(p/3) when p >= 5
/// and p otherwise; `max_depth = None` grows trees until the node-size and
/// purity rules stop them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestConfig {
    pub ntree: usize,
    pub mtry: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_node_size: usize,
    pub seed: Seed,
}

impl ForestConfig {
    pub fn with_defaults(seed: Seed) -> Self {
        ForestConfig {
            ntree: 100,
            mtry: None,
            max_depth: None,
            min_node_size: 5,
            seed,
        }
    }

    pub fn resolved_mtry(&self, p: usize) -> usize {
        match self.mtry {
            Some(m) => m,
            None => {
                if p >= 5 {
                    (p / 3).max(1)
                } else {
                    p
                }
            }
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if self.ntree == 0 {
            return Err(PedError::InvalidConfig("ntree must be >= 1".into()));
        }
        let mtry = self.resolved_mtry(p);
        if mtry == 0 || mtry > p {
            return Err(PedError::InvalidConfig(format!(
                "mtry must lie in [1, {p}]"
            )));
        }
        Ok(())
    }
}

/// A fitted ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<CartTree>,
    pub config: ForestConfig,
    pub n_classes: usize,
}

/// Bootstrap row draw used for tree `i`; exposed so callers can reproduce
/// exactly which rows each tree saw.
pub fn bootstrap_rows(seed: Seed, rows: &[usize], tree_index: usize) -> Vec<usize> {
    let mut rng = seed.derive("tree", tree_index as u64).rng();
    (0..rows.len())
        .map(|_| rows[rng.random_range(0..rows.len())])
        .collect()
}

/// Fit on a row subset of `data` (the rows of a subdata selection).
pub fn fit_forest_on(data: &Dataset, rows: &[usize], config: &ForestConfig) -> Result<ForestModel> {
    if rows.len() < 2 {
        return Err(PedError::EmptyInput(
            "forest needs at least two training rows".into(),
        ));
    }
    config.validate(data.n_features())?;
    let mut seen = vec![false; data.n_classes()];
    for &i in rows {
        seen[data.label(i) as usize] = true;
    }
    if seen.iter().filter(|&&s| s).count() < 2 {
        return Err(PedError::SingleClass);
    }

    let tree_config = TreeFitConfig {
        max_depth: config.max_depth.unwrap_or(usize::MAX),
        mtry: config.resolved_mtry(data.n_features()),
        min_node_size: config.min_node_size,
        seed: config.seed, // reseeded per tree below
    };

    let trees: Result<Vec<CartTree>> = (0..config.ntree)
        .into_par_iter()
        .map(|i| {
            let boot = bootstrap_rows(config.seed, rows, i);
            let cfg = TreeFitConfig {
                seed: config.seed.derive("tree", i as u64).derive("fit", 0),
                ..tree_config.clone()
            };
            fit_tree(data, &boot, &cfg)
        })
        .collect();

    Ok(ForestModel {
        trees: trees?,
        config: config.clone(),
        n_classes: data.n_classes(),
    })
}

/// Fit on every row of `data`.
pub fn fit_forest(data: &Dataset, config: &ForestConfig) -> Result<ForestModel> {
    let rows: Vec<usize> = (0..data.n_rows()).collect();
    fit_forest_on(data, &rows, config)
}

impl ForestModel {
    fn check_arity(&self, data: &Dataset) -> Result<()> {
        let expected = self.trees[0].n_features;
        if data.n_features() != expected {
            return Err(PedError::ArityMismatch {
                expected,
                got: data.n_features(),
            });
        }
        Ok(())
    }

    fn votes_for(&self, data: &Dataset, i: usize) -> Vec<u32> {
        let mut votes = vec![0u32; self.n_classes];
        for tree in &self.trees {
            votes[tree.predict_class_in(data, i) as usize] += 1;
        }
        votes
    }

    /// Per-row plurality vote; ties go to the lowest class id.
    pub fn predict_class(&self, data: &Dataset) -> Result<Vec<u32>> {
        self.check_arity(data)?;
        Ok((0..data.n_rows())
            .into_par_iter()
            .map(|i| {
                let votes = self.votes_for(data, i);
                let mut best = 0usize;
                for (k, &v) in votes.iter().enumerate() {
                    if v > votes[best] {
                        best = k;
                    }
                }
                best as u32
            })
            .collect())
    }

    /// Per-row fraction of trees voting each class; rows sum to 1.
    pub fn predict_proba(&self, data: &Dataset) -> Result<Vec<Vec<f64>>> {
        self.check_arity(data)?;
        let ntree = self.trees.len() as f64;
        Ok((0..data.n_rows())
            .into_par_iter()
            .map(|i| {
                self.votes_for(data, i)
                    .into_iter()
                    .map(|v| f64::from(v) / ntree)
                    .collect()
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate, ColumnSchema, GeneratorSpec};
    use crate::metrics::accuracy;

    fn separable(n: usize) -> Dataset {
        let values: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let labels: Vec<u32> = (0..n).map(|i| u32::from(i >= n / 2)).collect();
        Dataset::new(
            vec![ColumnSchema::continuous("x")],
            vec![values],
            labels,
            vec!["0".into(), "1".into()],
            "y",
        )
        .unwrap()
    }

    #[test]
    fn single_full_tree_fits_its_bootstrap() {
        let data = separable(40);
        let config = ForestConfig {
            ntree: 1,
            mtry: Some(1),
            max_depth: None,
            min_node_size: 1,
            seed: Seed::new(77),
        };
        let model = fit_forest(&data, &config).unwrap();
        let rows: Vec<usize> = (0..data.n_rows()).collect();
        let boot = bootstrap_rows(config.seed, &rows, 0);
        let boot_data = data.subset(&boot).unwrap();
        let pred = model.predict_class(&boot_data).unwrap();
        let acc = accuracy(&pred, boot_data.labels()).unwrap();
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn same_seed_gives_identical_predictions() {
        let data = generate(&GeneratorSpec::Threenorm { p: 3 }, 400, Seed::new(1)).unwrap();
        let test = generate(&GeneratorSpec::Threenorm { p: 3 }, 100, Seed::new(2)).unwrap();
        let config = ForestConfig {
            ntree: 15,
            ..ForestConfig::with_defaults(Seed::new(5))
        };
        let a = fit_forest(&data, &config).unwrap();
        let b = fit_forest(&data, &config).unwrap();
        assert_eq!(
            a.predict_class(&test).unwrap(),
            b.predict_class(&test).unwrap()
        );
    }

    #[test]
    fn twonorm_sanity_accuracy() {
        let train = generate(&GeneratorSpec::Twonorm { p: 2 }, 2000, Seed::new(3)).unwrap();
        let test = generate(&GeneratorSpec::Twonorm { p: 2 }, 2000, Seed::new(4)).unwrap();
        let config = ForestConfig::with_defaults(Seed::new(6));
        let model = fit_forest(&train, &config).unwrap();
        let pred = model.predict_class(&test).unwrap();
        let acc = accuracy(&pred, test.labels()).unwrap();
        assert!(acc >= 0.90, "accuracy {acc}");
    }

    #[test]
    fn single_class_training_errors() {
        let data = separable(10);
        let rows: Vec<usize> = (0..5).collect(); // all labels 0
        let config = ForestConfig::with_defaults(Seed::new(0));
        assert!(matches!(
            fit_forest_on(&data, &rows, &config),
            Err(PedError::SingleClass)
        ));
    }

    fn single_leaf_tree(class: u32, k: usize) -> CartTree {
        let n = k.max(2);
        let values: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let labels = vec![class; n];
        let ds = Dataset::new(
            vec![ColumnSchema::continuous("x")],
            vec![values],
            labels,
            (0..k).map(|c| c.to_string()).collect(),
            "y",
        )
        .unwrap();
        let rows: Vec<usize> = (0..n).collect();
        fit_tree(
            &ds,
            &rows,
            &TreeFitConfig {
                max_depth: 1,
                mtry: 1,
                min_node_size: 1,
                seed: Seed::new(0),
            },
        )
        .unwrap()
    }

    fn probe(k: usize) -> Dataset {
        Dataset::new(
            vec![ColumnSchema::continuous("x")],
            vec![vec![0.0]],
            vec![0],
            (0..k).map(|c| c.to_string()).collect(),
            "y",
        )
        .unwrap()
    }

    #[test]
    fn vote_tie_breaks_to_lowest_class_id() {
        let trees = vec![
            single_leaf_tree(1, 4),
            single_leaf_tree(1, 4),
            single_leaf_tree(3, 4),
            single_leaf_tree(3, 4),
        ];
        let model = ForestModel {
            trees,
            config: ForestConfig::with_defaults(Seed::new(0)),
            n_classes: 4,
        };
        assert_eq!(model.predict_class(&probe(4)).unwrap(), vec![1]);
    }

    #[test]
    fn vote_fractions_count_trees() {
        let trees = vec![
            single_leaf_tree(0, 2),
            single_leaf_tree(0, 2),
            single_leaf_tree(0, 2),
            single_leaf_tree(1, 2),
        ];
        let model = ForestModel {
            trees,
            config: ForestConfig::with_defaults(Seed::new(0)),
            n_classes: 2,
        };
        let proba = model.predict_proba(&probe(2)).unwrap();
        assert_eq!(proba[0], vec![0.75, 0.25]);
    }

    #[test]
    fn proba_rows_sum_to_one() {
        let data = generate(&GeneratorSpec::Waveform, 300, Seed::new(7)).unwrap();
        let config = ForestConfig {
            ntree: 9,
            ..ForestConfig::with_defaults(Seed::new(8))
        };
        let model = fit_forest(&data, &config).unwrap();
        for row in model.predict_proba(&data).unwrap() {
            let total: f64 = row.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unanimous_forest_gives_one_hot() {
        let trees = vec![single_leaf_tree(2, 3), single_leaf_tree(2, 3)];
        let model = ForestModel {
            trees,
            config: ForestConfig::with_defaults(Seed::new(0)),
            n_classes: 3,
        };
        let proba = model.predict_proba(&probe(3)).unwrap();
        assert_eq!(proba[0], vec![0.0, 0.0, 1.0]);
        assert_eq!(model.predict_class(&probe(3)).unwrap(), vec![2]);
    }
}
