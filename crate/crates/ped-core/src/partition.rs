//! Tree-based partition search: fit many shallow trees on small random
//! subsamples, score each by the weighted Gini of its leaves recomputed on
//! the full data, and keep the best one whose leaf count stays within the
//! sampling cap.

use rand::seq::index::sample as index_sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cart::{fit_tree, CartTree, LeafStats, TreeFitConfig};
use crate::data::Dataset;
use crate::error::{PedError, Result};
use crate::seed::Seed;

/// Default cap on the number of rows used to score candidate partitions.
pub const DEFAULT_EVAL_CAP: usize = 5_000_000;

/// Tuning parameters for subdata selection. `t_s` and `t_d` default to
/// floor(sqrt(N)) and max(3, floor(log2 t_s)) at resolution time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PedConfig {
    /// Target subdata size.
    pub n: usize,
    pub t_s: Option<usize>,
    pub t_d: Option<usize>,
    /// Trees fitted per depth.
    pub t_n: usize,
    /// Minimum per-stratum sample.
    pub t_h: usize,
    pub eval_cap: usize,
    pub seed: Seed,
}

impl PedConfig {
    pub fn new(n: usize, seed: Seed) -> Self {
        PedConfig {
            n,
            t_s: None,
            t_d: None,
            t_n: 10,
            t_h: 5,
            eval_cap: DEFAULT_EVAL_CAP,
            seed,
        }
    }

    /// Fill in data-dependent defaults and validate against the dataset size.
    pub fn resolve(&self, n_rows: usize) -> Result<ResolvedPedConfig> {
        let t_s = self
            .t_s
            .unwrap_or_else(|| (n_rows as f64).sqrt().floor() as usize)
            .max(2);
        let t_d = self
            .t_d
            .unwrap_or_else(|| ((t_s as f64).log2().floor() as usize).max(3));
        if t_d < 3 {
            return Err(PedError::InvalidConfig("t_d must be at least 3".into()));
        }
        if t_s > n_rows {
            return Err(PedError::InvalidConfig(format!(
                "t_s = {t_s} exceeds N = {n_rows}"
            )));
        }
        if self.t_n < 1 {
            return Err(PedError::InvalidConfig("t_n must be >= 1".into()));
        }
        if self.t_h < 1 {
            return Err(PedError::InvalidConfig("t_h must be >= 1".into()));
        }
        if self.n > n_rows {
            return Err(PedError::InvalidConfig(format!(
                "subdata size n = {} exceeds N = {n_rows}",
                self.n
            )));
        }
        if self.n < self.t_h {
            return Err(PedError::InvalidConfig(format!(
                "subdata size n = {} is below t_h = {}",
                self.n, self.t_h
            )));
        }
        if self.eval_cap == 0 {
            return Err(PedError::InvalidConfig("eval_cap must be positive".into()));
        }
        Ok(ResolvedPedConfig {
            n: self.n,
            t_s,
            t_d,
            t_n: self.t_n,
            t_h: self.t_h,
            eval_cap: self.eval_cap,
            seed: self.seed,
        })
    }
}

/// A `PedConfig` with every default filled in.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResolvedPedConfig {
    pub n: usize,
    pub t_s: usize,
    pub t_d: usize,
    pub t_n: usize,
    pub t_h: usize,
    pub eval_cap: usize,
    pub seed: Seed,
}

impl ResolvedPedConfig {
    /// Maximum admissible leaf count, floor(n / t_h).
    pub fn leaf_cap(&self) -> usize {
        self.n / self.t_h
    }
}

/// Score of one candidate tree in the search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CandidateScore {
    pub tree_index: usize,
    pub depth_limit: usize,
    pub leaf_count: usize,
    pub total_gini: f64,
    pub admissible: bool,
}

/// The winning partition of the full data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Partition {
    pub source_tree: CartTree,
    /// Leaf id of every full-data row.
    pub assignments: Vec<u32>,
    /// Per-leaf stats recomputed on the full data (or the scoring sample's
    /// Gini with exact full-data counts when the eval cap applied).
    pub strata: Vec<LeafStats>,
    pub total_gini: f64,
    pub winning_depth: usize,
    pub candidates: Vec<CandidateScore>,
}

impl Partition {
    pub fn leaf_count(&self) -> usize {
        self.strata.len()
    }

    /// Row indices grouped by stratum, each group ascending.
    pub fn rows_by_stratum(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.strata.len()];
        for (i, &leaf) in self.assignments.iter().enumerate() {
            groups[leaf as usize].push(i);
        }
        groups
    }
}

/// Weighted total Gini sum((N_l / total) * G_l).
pub fn total_gini(strata: &[(u64, f64)], total: u64) -> Result<f64> {
    if total == 0 {
        return Err(PedError::ZeroTotal);
    }
    Ok(strata
        .iter()
        .map(|&(n, g)| n as f64 / total as f64 * g)
        .sum())
}

fn leaf_stats_on_rows(tree: &CartTree, data: &Dataset, rows: &[usize]) -> Vec<LeafStats> {
    let mut counts = vec![vec![0u64; tree.n_classes]; tree.leaf_count()];
    for &i in rows {
        let leaf = tree.predict_leaf_in(data, i);
        counts[leaf][data.label(i) as usize] += 1;
    }
    counts.into_iter().map(LeafStats::from_counts).collect()
}

fn weighted_gini_of(stats: &[LeafStats]) -> Result<f64> {
    let pairs: Vec<(u64, f64)> = stats.iter().map(|s| (s.count, s.gini)).collect();
    let total: u64 = pairs.iter().map(|&(n, _)| n).sum();
    total_gini(&pairs, total)
}

struct Candidate {
    tree: CartTree,
    eval_stats: Vec<LeafStats>,
    score: CandidateScore,
}

/// Run the partition search.
pub fn find_partition(data: &Dataset, config: &PedConfig) -> Result<Partition> {
    let n_rows = data.n_rows();
    let cfg = config.resolve(n_rows)?;
    let leaf_cap = cfg.leaf_cap();
    let p = data.n_features();

    // Shared scoring sample; the full data unless it exceeds the cap.
    let eval_rows: Vec<usize> = if n_rows > cfg.eval_cap {
        let mut rng = cfg.seed.derive("evalcap", 0).rng();
        let mut rows: Vec<usize> = index_sample(&mut rng, n_rows, cfg.eval_cap)
            .into_iter()
            .collect();
        rows.sort_unstable();
        rows
    } else {
        (0..n_rows).collect()
    };
    let capped = n_rows > cfg.eval_cap;

    let grid: Vec<(usize, usize)> = (1..=cfg.t_n)
        .flat_map(|j1| (3..=cfg.t_d).map(move |j2| (j1, j2)))
        .collect();

    let mut candidates: Vec<Candidate> = grid
        .par_iter()
        .map(|&(j1, j2)| {
            let sub_seed = cfg.seed.derive("part", ((j1 as u64) << 32) | j2 as u64);
            let mut rng = sub_seed.rng();
            let rows: Vec<usize> = index_sample(&mut rng, n_rows, cfg.t_s)
                .into_iter()
                .collect();
            let tree = fit_tree(
                data,
                &rows,
                &TreeFitConfig {
                    max_depth: j2,
                    mtry: p,
                    min_node_size: 1,
                    seed: sub_seed.derive("fit", 0),
                },
            )?;
            let eval_stats = leaf_stats_on_rows(&tree, data, &eval_rows);
            let score = CandidateScore {
                tree_index: j1,
                depth_limit: j2,
                leaf_count: tree.leaf_count(),
                total_gini: weighted_gini_of(&eval_stats)?,
                admissible: tree.leaf_count() <= leaf_cap,
            };
            Ok(Candidate {
                tree,
                eval_stats,
                score,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // Argmin over admissible candidates; ties prefer fewer leaves, then a
    // smaller depth, then earlier grid position.
    let mut winner: Option<usize> = None;
    for (idx, cand) in candidates.iter().enumerate() {
        if !cand.score.admissible {
            continue;
        }
        let better = match winner {
            None => true,
            Some(w) => {
                let b = &candidates[w].score;
                let c = &cand.score;
                c.total_gini < b.total_gini
                    || (c.total_gini == b.total_gini
                        && (c.leaf_count < b.leaf_count
                            || (c.leaf_count == b.leaf_count && c.depth_limit < b.depth_limit)))
            }
        };
        if better {
            winner = Some(idx);
        }
    }
    let winner = winner.ok_or(PedError::LeafCapInfeasible { cap: leaf_cap })?;

    let scores: Vec<CandidateScore> = candidates.iter().map(|c| c.score.clone()).collect();
    let best = candidates.swap_remove(winner);

    // Leaf assignment of every full-data row.
    let assignments: Vec<u32> = (0..n_rows)
        .into_par_iter()
        .map(|i| best.tree.predict_leaf_in(data, i) as u32)
        .collect();

    let strata: Vec<LeafStats> = if capped {
        // Exact full-data counts with the scoring sample's per-leaf Gini, so
        // downstream allocation sees full-data scale without rescanning labels.
        let mut counts = vec![0u64; best.tree.leaf_count()];
        for &leaf in &assignments {
            counts[leaf as usize] += 1;
        }
        best.eval_stats
            .iter()
            .zip(counts)
            .map(|(s, n)| LeafStats {
                count: n,
                class_counts: s.class_counts.clone(),
                gini: if n == 0 { 0.0 } else { s.gini },
                predicted_class: s.predicted_class,
            })
            .collect()
    } else {
        best.eval_stats
    };

    let pairs: Vec<(u64, f64)> = strata.iter().map(|s| (s.count, s.gini)).collect();
    let total: u64 = pairs.iter().map(|&(c, _)| c).sum();
    let total_gini = total_gini(&pairs, total)?;
    let winning_depth = best.tree.depth;

    Ok(Partition {
        source_tree: best.tree,
        assignments,
        strata,
        total_gini,
        winning_depth,
        candidates: scores,
    })
}

/// One row of the stratum report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StratumRow {
    pub stratum: usize,
    pub count: u64,
    pub gini: f64,
    pub modal_class: u32,
}

/// Tabular view of a partition's strata.
pub fn stratum_report(partition: &Partition) -> Vec<StratumRow> {
    partition
        .strata
        .iter()
        .enumerate()
        .map(|(id, s)| StratumRow {
            stratum: id,
            count: s.count,
            gini: s.gini,
            modal_class: s.predicted_class,
        })
        .collect()
}

/// Plain-text rendering of [`stratum_report`].
pub fn render_stratum_table(rows: &[StratumRow]) -> String {
    let mut out = String::from("stratum  count  gini  modal_class\n");
    let mut total = 0u64;
    for r in rows {
        out.push_str(&format!(
            "{}  {}  {}  {}\n",
            r.stratum, r.count, r.gini, r.modal_class
        ));
        total += r.count;
    }
    out.push_str(&format!("total  {total}\n"));
    out
}
