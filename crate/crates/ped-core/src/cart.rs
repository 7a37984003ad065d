//! Depth-limited CART classification trees with Gini splitting.
//!
//! Depth counts node levels, with a lone root at depth 1; `max_depth = 1`
//! therefore means no splits and `max_depth = 2` a single-split stump.
//! Categorical splits send a level set left; levels unseen in training
//! route right.

use rand::seq::index::sample as index_sample;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{ColumnSchema, Dataset};
use crate::error::{PedError, Result};
use crate::seed::Seed;

/// Gini impurity 1 - sum((c/n)^2); 0 for an empty node.
pub fn gini_from_counts(counts: &[u64], total: u64) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let mut acc = 0.0;
    for &c in counts {
        let p = c as f64 / n;
        acc += p * p;
    }
    1.0 - acc
}

fn argmax_class(counts: &[u64]) -> u32 {
    let mut best = 0usize;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    best as u32
}

/// Per-leaf counts, proportions, Gini, and the modal class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafStats {
    pub count: u64,
    pub class_counts: Vec<u64>,
    pub gini: f64,
    pub predicted_class: u32,
}

impl LeafStats {
    pub fn from_counts(class_counts: Vec<u64>) -> Self {
        let count: u64 = class_counts.iter().sum();
        let gini = gini_from_counts(&class_counts, count);
        let predicted_class = argmax_class(&class_counts);
        LeafStats {
            count,
            class_counts,
            gini,
            predicted_class,
        }
    }

    pub fn proportions(&self) -> Vec<f64> {
        if self.count == 0 {
            return vec![0.0; self.class_counts.len()];
        }
        self.class_counts
            .iter()
            .map(|&c| c as f64 / self.count as f64)
            .collect()
    }
}

/// Split condition at an internal node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitKind {
    /// Left if x <= threshold.
    Continuous { threshold: f64 },
    /// Left if the level index is in `left_levels` (sorted); unseen levels go right.
    Categorical { left_levels: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRule {
    pub feature: usize,
    #[serde(flatten)]
    pub kind: SplitKind,
}

impl SplitRule {
    pub fn goes_left(&self, value: f64) -> bool {
        match &self.kind {
            SplitKind::Continuous { threshold } => value <= *threshold,
            SplitKind::Categorical { left_levels } => {
                left_levels.binary_search(&(value as u32)).is_ok()
            }
        }
    }
}

/// A split together with its weighted-Gini decrease
/// (parent_n*G_p - left_n*G_l - right_n*G_r).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredSplit {
    pub rule: SplitRule,
    pub decrease: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Internal {
        rule: SplitRule,
        left: usize,
        right: usize,
    },
    Leaf {
        leaf_id: usize,
        stats: LeafStats,
    },
}

/// A fitted classification tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartTree {
    nodes: Vec<Node>,
    leaf_slots: Vec<usize>,
    pub max_depth: usize,
    pub depth: usize,
    pub n_classes: usize,
    pub n_features: usize,
}

#[derive(Debug, Clone)]
pub struct TreeFitConfig {
    /// Maximum node levels including the root (>= 1).
    pub max_depth: usize,
    /// Candidate features drawn per node, in [1, p].
    pub mtry: usize,
    /// Nodes smaller than 2*min_node_size are not split.
    pub min_node_size: usize,
    pub seed: Seed,
}

impl TreeFitConfig {
    pub fn validate(&self, p: usize) -> Result<()> {
        if self.max_depth < 1 {
            return Err(PedError::InvalidConfig("max_depth must be >= 1".into()));
        }
        if self.mtry < 1 || self.mtry > p {
            return Err(PedError::InvalidConfig(format!(
                "mtry must lie in [1, {p}]"
            )));
        }
        if self.min_node_size < 1 {
            return Err(PedError::InvalidConfig("min_node_size must be >= 1".into()));
        }
        Ok(())
    }
}

struct ClassTally {
    counts: Vec<u64>,
}

impl ClassTally {
    fn of(data: &Dataset, rows: &[usize]) -> Self {
        let mut counts = vec![0u64; data.n_classes()];
        for &i in rows {
            counts[data.label(i) as usize] += 1;
        }
        ClassTally { counts }
    }

    fn distinct(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Best admissible split over the candidate features, or None when no split
/// gives a strictly positive weighted-Gini decrease. Candidate features are
/// scanned in ascending index order; ties keep the earlier candidate
/// (lowest feature, then smallest threshold or lexicographically smallest
/// level set).
pub fn best_split(
    data: &Dataset,
    rows: &[usize],
    candidate_features: &[usize],
) -> Option<ScoredSplit> {
    let tally = ClassTally::of(data, rows);
    let n = rows.len() as u64;
    if n < 2 || tally.distinct() < 2 {
        return None;
    }
    let parent_weight = n as f64 * gini_from_counts(&tally.counts, n);
    let k = data.n_classes();

    let mut best: Option<ScoredSplit> = None;
    let mut features: Vec<usize> = candidate_features.to_vec();
    features.sort_unstable();

    for &j in &features {
        let found = if data.schema()[j].is_categorical() {
            best_categorical_split(data, rows, j, k)
        } else {
            best_continuous_split(data, rows, j, k, &tally.counts)
        };
        if let Some(cand) = found {
            let decrease = parent_weight - cand.child_weight;
            if decrease <= 0.0 {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => decrease > b.decrease,
            };
            if better {
                best = Some(ScoredSplit {
                    rule: SplitRule {
                        feature: j,
                        kind: cand.kind,
                    },
                    decrease,
                });
            }
        }
    }
    best
}

struct FeatureSplit {
    kind: SplitKind,
    /// left_n*G_l + right_n*G_r; smaller is better.
    child_weight: f64,
}

fn children_weight(left: &[u64], right: &[u64]) -> f64 {
    let ln: u64 = left.iter().sum();
    let rn: u64 = right.iter().sum();
    ln as f64 * gini_from_counts(left, ln) + rn as f64 * gini_from_counts(right, rn)
}

/// Scan (value, label) pairs already sorted ascending by value; thresholds
/// sit at midpoints between distinct consecutive values. Returns the best
/// (child weight, threshold); ties keep the smallest threshold.
fn scan_sorted_pairs(pairs: &[(f64, u32)], k: usize, parent_counts: &[u64]) -> Option<(f64, f64)> {
    let mut left = vec![0u64; k];
    let mut right = parent_counts.to_vec();
    let mut best: Option<(f64, f64)> = None;

    for w in 0..pairs.len() - 1 {
        let (v, y) = pairs[w];
        left[y as usize] += 1;
        right[y as usize] -= 1;
        let next = pairs[w + 1].0;
        if next == v {
            continue;
        }
        let weight = children_weight(&left, &right);
        let threshold = (v + next) / 2.0;
        let better = match best {
            None => true,
            Some((bw, _)) => weight < bw,
        };
        if better {
            best = Some((weight, threshold));
        }
    }
    best
}

fn best_continuous_split(
    data: &Dataset,
    rows: &[usize],
    feature: usize,
    k: usize,
    parent_counts: &[u64],
) -> Option<FeatureSplit> {
    let col = data.column(feature);
    let mut pairs: Vec<(f64, u32)> = rows.iter().map(|&i| (col[i], data.label(i))).collect();
    pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    scan_sorted_pairs(&pairs, k, parent_counts).map(|(child_weight, threshold)| FeatureSplit {
        kind: SplitKind::Continuous { threshold },
        child_weight,
    })
}

/// Canonical form: the smallest observed level is always on the left.
fn canonical_left(levels_left: Vec<u32>, observed: &[u32]) -> Vec<u32> {
    let min_level = observed[0];
    let mut left = levels_left;
    left.sort_unstable();
    if left.binary_search(&min_level).is_err() {
        left = observed
            .iter()
            .copied()
            .filter(|l| left.binary_search(l).is_err())
            .collect();
    }
    left
}

fn best_categorical_split(
    data: &Dataset,
    rows: &[usize],
    feature: usize,
    k: usize,
) -> Option<FeatureSplit> {
    let card = data.schema()[feature].cardinality();
    let col = data.column(feature);
    let mut per_level = vec![vec![0u64; k]; card];
    for &i in rows {
        per_level[col[i] as usize][data.label(i) as usize] += 1;
    }
    best_categorical_from_counts(&per_level, k)
}

/// Categorical search over per-level class counts: exact prefix scan for two
/// classes, exhaustive bipartitions up to 10 observed levels, modal-class
/// ordering heuristic beyond that.
fn best_categorical_from_counts(per_level: &[Vec<u64>], k: usize) -> Option<FeatureSplit> {
    let card = per_level.len();
    let observed: Vec<u32> = (0..card as u32)
        .filter(|&l| per_level[l as usize].iter().any(|&c| c > 0))
        .collect();
    if observed.len() < 2 {
        return None;
    }

    let mut best: Option<(f64, Vec<u32>)> = None;
    let mut consider = |left_levels: Vec<u32>| {
        let mut left = vec![0u64; k];
        let mut right = vec![0u64; k];
        for &l in &observed {
            let side = if left_levels.binary_search(&l).is_ok() {
                &mut left
            } else {
                &mut right
            };
            for (c, s) in per_level[l as usize].iter().zip(side.iter_mut()) {
                *s += c;
            }
        }
        let weight = children_weight(&left, &right);
        let canonical = canonical_left(left_levels, &observed);
        let better = match &best {
            None => true,
            Some((bw, bl)) => weight < *bw || (weight == *bw && canonical < *bl),
        };
        if better {
            best = Some((weight, canonical));
        }
    };

    if k == 2 || observed.len() > 10 {
        // Order levels by the relevant class proportion and scan prefixes.
        // For binary Gini the prefix scan over the class-1 ordering is exact.
        let target = if k == 2 {
            1
        } else {
            let mut totals = vec![0u64; k];
            for &l in &observed {
                for (t, c) in totals.iter_mut().zip(&per_level[l as usize]) {
                    *t += c;
                }
            }
            argmax_class(&totals) as usize
        };
        let mut ordered: Vec<(f64, u32)> = observed
            .iter()
            .map(|&l| {
                let counts = &per_level[l as usize];
                let total: u64 = counts.iter().sum();
                (counts[target] as f64 / total as f64, l)
            })
            .collect();
        ordered.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut prefix: Vec<u32> = Vec::new();
        for w in 0..ordered.len() - 1 {
            prefix.push(ordered[w].1);
            let mut left = prefix.clone();
            left.sort_unstable();
            consider(left);
        }
    } else {
        // Exhaustive bipartitions; the lowest observed level stays left so
        // each bipartition appears once.
        let c = observed.len();
        for mask in 0..(1u32 << (c - 1)) {
            let full = (1u32 << c) - 1;
            let m = (mask << 1) | 1;
            if m == full {
                continue;
            }
            let left: Vec<u32> = (0..c)
                .filter(|&b| m & (1 << b) != 0)
                .map(|b| observed[b])
                .collect();
            consider(left);
        }
    }

    best.map(|(child_weight, left_levels)| FeatureSplit {
        kind: SplitKind::Categorical { left_levels },
        child_weight,
    })
}

fn draw_features(rng: &mut ChaCha8Rng, p: usize, mtry: usize) -> Vec<usize> {
    if mtry >= p {
        (0..p).collect()
    } else {
        let mut picked: Vec<usize> = index_sample(rng, p, mtry).into_iter().collect();
        picked.sort_unstable();
        picked
    }
}

/// Stable in-place partition of `segment` by `mark` (true goes first);
/// returns the left-side count.
fn stable_partition(segment: &mut [u32], mark: &[bool], scratch: &mut Vec<u32>) -> usize {
    scratch.clear();
    let mut write = 0usize;
    for r in 0..segment.len() {
        let local = segment[r];
        if mark[local as usize] {
            segment[write] = local;
            write += 1;
        } else {
            scratch.push(local);
        }
    }
    segment[write..].copy_from_slice(scratch);
    write
}

/// Fit a tree on the given row indices (duplicates allowed, e.g. bootstrap).
///
/// Feature values are gathered and presorted once; each split then scans
/// nodes in sorted order and stably partitions the per-feature orders, so
/// the whole build costs O(p n (log n + depth)) instead of re-sorting at
/// every node.
pub fn fit_tree(data: &Dataset, rows: &[usize], config: &TreeFitConfig) -> Result<CartTree> {
    if rows.is_empty() {
        return Err(PedError::EmptyRows);
    }
    config.validate(data.n_features())?;
    let mut rng = config.seed.derive("mtry", 0).rng();
    let p = data.n_features();
    let k = data.n_classes();
    let n = rows.len();

    // Local gather: values and labels indexed by position within `rows`.
    let values: Vec<Vec<f64>> = (0..p)
        .map(|f| {
            let col = data.column(f);
            rows.iter().map(|&i| col[i]).collect()
        })
        .collect();
    let labels: Vec<u32> = rows.iter().map(|&i| data.label(i)).collect();
    let categorical: Vec<bool> = data.schema().iter().map(ColumnSchema::is_categorical).collect();
    let cardinality: Vec<usize> = data.schema().iter().map(ColumnSchema::cardinality).collect();

    // Ascending value order per continuous feature, maintained through splits.
    let mut sorted: Vec<Vec<u32>> = (0..p)
        .map(|f| {
            if categorical[f] {
                return Vec::new();
            }
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.sort_unstable_by(|&a, &b| {
                values[f][a as usize]
                    .total_cmp(&values[f][b as usize])
                    .then(a.cmp(&b))
            });
            order
        })
        .collect();
    let mut members: Vec<u32> = (0..n as u32).collect();
    let mut mark = vec![false; n];
    let mut scratch: Vec<u32> = Vec::with_capacity(n);
    let mut pair_buf: Vec<(f64, u32)> = Vec::with_capacity(n);

    let mut nodes: Vec<Node> = Vec::new();
    let mut leaf_slots: Vec<usize> = Vec::new();
    let mut realized_depth = 0usize;

    struct Frame {
        slot: usize,
        start: usize,
        end: usize,
        level: usize,
    }

    let filler = || Node::Leaf {
        leaf_id: usize::MAX,
        stats: LeafStats::from_counts(vec![0; 1]),
    };
    nodes.push(filler());
    let mut stack = vec![Frame {
        slot: 0,
        start: 0,
        end: n,
        level: 1,
    }];

    while let Some(frame) = stack.pop() {
        realized_depth = realized_depth.max(frame.level);
        let segment = &members[frame.start..frame.end];
        let mut counts = vec![0u64; k];
        for &local in segment {
            counts[labels[local as usize] as usize] += 1;
        }
        let distinct = counts.iter().filter(|&&c| c > 0).count();
        let size = frame.end - frame.start;

        let chosen: Option<ScoredSplit> = if frame.level < config.max_depth
            && distinct >= 2
            && size >= 2 * config.min_node_size
        {
            let features = draw_features(&mut rng, p, config.mtry);
            let parent_weight = size as f64 * gini_from_counts(&counts, size as u64);
            let mut best: Option<ScoredSplit> = None;
            for &f in &features {
                let found = if categorical[f] {
                    let mut per_level = vec![vec![0u64; k]; cardinality[f]];
                    for &local in segment {
                        per_level[values[f][local as usize] as usize]
                            [labels[local as usize] as usize] += 1;
                    }
                    best_categorical_from_counts(&per_level, k)
                } else {
                    pair_buf.clear();
                    pair_buf.extend(
                        sorted[f][frame.start..frame.end]
                            .iter()
                            .map(|&local| (values[f][local as usize], labels[local as usize])),
                    );
                    scan_sorted_pairs(&pair_buf, k, &counts).map(|(child_weight, threshold)| {
                        FeatureSplit {
                            kind: SplitKind::Continuous { threshold },
                            child_weight,
                        }
                    })
                };
                if let Some(cand) = found {
                    let decrease = parent_weight - cand.child_weight;
                    if decrease <= 0.0 {
                        continue;
                    }
                    let better = match &best {
                        None => true,
                        Some(b) => decrease > b.decrease,
                    };
                    if better {
                        best = Some(ScoredSplit {
                            rule: SplitRule {
                                feature: f,
                                kind: cand.kind,
                            },
                            decrease,
                        });
                    }
                }
            }
            best
        } else {
            None
        };

        match chosen {
            Some(split) => {
                for &local in &members[frame.start..frame.end] {
                    mark[local as usize] = split
                        .rule
                        .goes_left(values[split.rule.feature][local as usize]);
                }
                let left_n =
                    stable_partition(&mut members[frame.start..frame.end], &mark, &mut scratch);
                debug_assert!(left_n > 0 && left_n < size);
                for f in 0..p {
                    if !categorical[f] {
                        stable_partition(&mut sorted[f][frame.start..frame.end], &mark, &mut scratch);
                    }
                }
                let mid = frame.start + left_n;

                let left_slot = nodes.len();
                let right_slot = nodes.len() + 1;
                nodes.push(filler());
                nodes.push(filler());
                nodes[frame.slot] = Node::Internal {
                    rule: split.rule,
                    left: left_slot,
                    right: right_slot,
                };
                stack.push(Frame {
                    slot: right_slot,
                    start: mid,
                    end: frame.end,
                    level: frame.level + 1,
                });
                stack.push(Frame {
                    slot: left_slot,
                    start: frame.start,
                    end: mid,
                    level: frame.level + 1,
                });
            }
            None => {
                let leaf_id = leaf_slots.len();
                leaf_slots.push(frame.slot);
                nodes[frame.slot] = Node::Leaf {
                    leaf_id,
                    stats: LeafStats::from_counts(counts),
                };
            }
        }
    }

    Ok(CartTree {
        nodes,
        leaf_slots,
        max_depth: config.max_depth,
        depth: realized_depth,
        n_classes: k,
        n_features: p,
    })
}

impl CartTree {
    pub fn leaf_count(&self) -> usize {
        self.leaf_slots.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Training-time stats in leaf-id order.
    pub fn training_leaf_stats(&self) -> Vec<&LeafStats> {
        self.leaf_slots
            .iter()
            .map(|&slot| match &self.nodes[slot] {
                Node::Leaf { stats, .. } => stats,
                Node::Internal { .. } => unreachable!("leaf slot points at internal node"),
            })
            .collect()
    }

    pub fn predicted_class_of_leaf(&self, leaf_id: usize) -> u32 {
        match &self.nodes[self.leaf_slots[leaf_id]] {
            Node::Leaf { stats, .. } => stats.predicted_class,
            Node::Internal { .. } => unreachable!(),
        }
    }

    fn route<F: Fn(usize) -> f64>(&self, value_of: F) -> usize {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                Node::Leaf { leaf_id, .. } => return *leaf_id,
                Node::Internal { rule, left, right } => {
                    at = if rule.goes_left(value_of(rule.feature)) {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    /// Leaf id for a feature vector; errors on arity mismatch.
    pub fn predict_leaf(&self, row: &[f64]) -> Result<usize> {
        if row.len() != self.n_features {
            return Err(PedError::ArityMismatch {
                expected: self.n_features,
                got: row.len(),
            });
        }
        Ok(self.route(|j| row[j]))
    }

    /// Leaf id for row `i` of a dataset that conforms to the training schema.
    pub fn predict_leaf_in(&self, data: &Dataset, i: usize) -> usize {
        self.route(|j| data.value(i, j))
    }

    /// Modal-class prediction for row `i` of a conforming dataset.
    pub fn predict_class_in(&self, data: &Dataset, i: usize) -> u32 {
        self.predicted_class_of_leaf(self.predict_leaf_in(data, i))
    }
}

/// Recompute per-leaf stats by routing every row of `data` through the tree.
/// Leaves receiving no rows report count 0 and Gini 0.
pub fn leaf_stats_on(tree: &CartTree, data: &Dataset) -> Result<Vec<LeafStats>> {
    if data.n_features() != tree.n_features {
        return Err(PedError::ArityMismatch {
            expected: tree.n_features,
            got: data.n_features(),
        });
    }
    let mut counts = vec![vec![0u64; tree.n_classes]; tree.leaf_count()];
    for i in 0..data.n_rows() {
        let leaf = tree.predict_leaf_in(data, i);
        counts[leaf][data.label(i) as usize] += 1;
    }
    Ok(counts.into_iter().map(LeafStats::from_counts).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ColumnSchema;

    fn one_feature(values: &[f64], labels: &[u32], k: usize) -> Dataset {
        Dataset::new(
            vec![ColumnSchema::continuous("x")],
            vec![values.to_vec()],
            labels.to_vec(),
            (0..k).map(|c| c.to_string()).collect(),
            "y",
        )
        .unwrap()
    }

    fn all_rows(data: &Dataset) -> Vec<usize> {
        (0..data.n_rows()).collect()
    }

    #[test]
    fn best_split_finds_pure_threshold() {
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1], 2);
        let split = best_split(&data, &all_rows(&data), &[0]).unwrap();
        match split.rule.kind {
            SplitKind::Continuous { threshold } => {
                assert!(threshold > 2.0 && threshold < 3.0, "threshold {threshold}")
            }
            _ => panic!("expected continuous split"),
        }
        assert_eq!(split.decrease, 4.0 * 0.5);
    }

    #[test]
    fn best_split_none_when_labels_equal() {
        let data = one_feature(&[1.0, 2.0, 3.0], &[1, 1, 1], 2);
        assert!(best_split(&data, &all_rows(&data), &[0]).is_none());
    }

    #[test]
    fn best_split_categorical_pure() {
        let data = Dataset::new(
            vec![ColumnSchema::categorical(
                "c",
                vec!["A".into(), "B".into()],
            )],
            vec![vec![0.0, 0.0, 1.0, 1.0]],
            vec![0, 0, 1, 1],
            vec!["0".into(), "1".into()],
            "y",
        )
        .unwrap();
        let split = best_split(&data, &all_rows(&data), &[0]).unwrap();
        match &split.rule.kind {
            SplitKind::Categorical { left_levels } => assert_eq!(left_levels, &[0]),
            _ => panic!("expected categorical split"),
        }
        assert_eq!(split.decrease, 4.0 * 0.5);
    }

    fn fit(data: &Dataset, max_depth: usize) -> CartTree {
        fit_tree(
            data,
            &all_rows(data),
            &TreeFitConfig {
                max_depth,
                mtry: data.n_features(),
                min_node_size: 1,
                seed: Seed::new(0),
            },
        )
        .unwrap()
    }

    #[test]
    fn depth_one_yields_modal_root_leaf() {
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0, 5.0], &[0, 1, 1, 1, 0], 2);
        let tree = fit(&data, 1);
        assert_eq!(tree.leaf_count(), 1);
        assert_eq!(tree.depth, 1);
        assert_eq!(tree.predicted_class_of_leaf(0), 1);
    }

    #[test]
    fn depth_two_separates_the_four_row_example() {
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1], 2);
        let tree = fit(&data, 2);
        assert_eq!(tree.leaf_count(), 2);
        let mut errors = 0;
        for i in 0..data.n_rows() {
            if tree.predict_class_in(&data, i) != data.label(i) {
                errors += 1;
            }
        }
        assert_eq!(errors, 0);
    }

    #[test]
    fn pure_dataset_fits_single_leaf() {
        let data = one_feature(&[1.0, 2.0, 3.0], &[1, 1, 1], 2);
        let tree = fit(&data, 5);
        assert_eq!(tree.leaf_count(), 1);
        let stats = tree.training_leaf_stats();
        assert_eq!(stats[0].gini, 0.0);
    }

    #[test]
    fn empty_row_list_is_an_error() {
        let data = one_feature(&[1.0, 2.0], &[0, 1], 2);
        let cfg = TreeFitConfig {
            max_depth: 2,
            mtry: 1,
            min_node_size: 1,
            seed: Seed::new(0),
        };
        assert!(matches!(
            fit_tree(&data, &[], &cfg),
            Err(PedError::EmptyRows)
        ));
    }

    #[test]
    fn routing_left_of_threshold_hits_leaf_zero() {
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1], 2);
        let tree = fit(&data, 2);
        assert_eq!(tree.predict_leaf(&[1.5]).unwrap(), 0);
        assert_eq!(tree.predict_leaf(&[3.5]).unwrap(), 1);
    }

    #[test]
    fn stump_routes_everything_to_single_leaf() {
        let data = one_feature(&[1.0, 2.0], &[0, 1], 2);
        let tree = fit(&data, 1);
        assert_eq!(tree.predict_leaf(&[-100.0]).unwrap(), 0);
        assert_eq!(tree.predict_leaf(&[100.0]).unwrap(), 0);
    }

    #[test]
    fn unseen_level_routes_right() {
        let data = Dataset::new(
            vec![ColumnSchema::categorical(
                "c",
                vec!["A".into(), "B".into(), "C".into()],
            )],
            vec![vec![0.0, 0.0, 1.0, 1.0]],
            vec![0, 0, 1, 1],
            vec!["0".into(), "1".into()],
            "y",
        )
        .unwrap();
        let tree = fit(&data, 2);
        let left_of_a = tree.predict_leaf(&[0.0]).unwrap();
        let unseen_c = tree.predict_leaf(&[2.0]).unwrap();
        assert_ne!(left_of_a, unseen_c);
        assert_eq!(unseen_c, tree.predict_leaf(&[1.0]).unwrap());
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let data = one_feature(&[1.0, 2.0], &[0, 1], 2);
        let tree = fit(&data, 2);
        assert!(matches!(
            tree.predict_leaf(&[1.0, 2.0]),
            Err(PedError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn leaf_stats_on_training_rows_match_stored() {
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &[0, 0, 1, 1, 0, 1], 2);
        let tree = fit(&data, 3);
        let recomputed = leaf_stats_on(&tree, &data).unwrap();
        let stored = tree.training_leaf_stats();
        for (a, b) in recomputed.iter().zip(stored) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn leaf_stats_recompute_gini_by_hand() {
        // One leaf receiving 40 class-0 and 10 class-1 rows: G = 0.32.
        let stats = LeafStats::from_counts(vec![40, 10]);
        assert!((stats.gini - 0.32).abs() < 1e-15);
    }

    #[test]
    fn zero_count_leaf_reports_zeros() {
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1], 2);
        let tree = fit(&data, 2);
        // All probe rows go right of the threshold: leaf 0 receives nothing.
        let probe = one_feature(&[10.0, 11.0], &[0, 1], 2);
        let stats = leaf_stats_on(&tree, &probe).unwrap();
        assert_eq!(stats[0].count, 0);
        assert_eq!(stats[0].gini, 0.0);
        assert!(stats[0].class_counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn fitted_trees_are_deterministic() {
        let data = crate::data::generate(
            &crate::data::GeneratorSpec::Twonorm { p: 4 },
            300,
            Seed::new(11),
        )
        .unwrap();
        let cfg = TreeFitConfig {
            max_depth: 6,
            mtry: 2,
            min_node_size: 1,
            seed: Seed::new(5),
        };
        let rows = all_rows(&data);
        let a = fit_tree(&data, &rows, &cfg).unwrap();
        let b = fit_tree(&data, &rows, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn impurity_monotone_and_children_nonempty() {
        let data = crate::data::generate(
            &crate::data::GeneratorSpec::Threenorm { p: 3 },
            500,
            Seed::new(9),
        )
        .unwrap();
        let rows = all_rows(&data);
        let tree = fit_tree(
            &data,
            &rows,
            &TreeFitConfig {
                max_depth: 7,
                mtry: 3,
                min_node_size: 1,
                seed: Seed::new(1),
            },
        )
        .unwrap();

        // Recursively recompute row sets per node and check the invariants.
        fn walk(tree: &CartTree, data: &Dataset, at: usize, rows: &[usize]) {
            match &tree.nodes()[at] {
                Node::Leaf { .. } => {}
                Node::Internal { rule, left, right } => {
                    let (l, r): (Vec<usize>, Vec<usize>) = rows
                        .iter()
                        .partition(|&&i| rule.goes_left(data.value(i, rule.feature)));
                    assert!(!l.is_empty() && !r.is_empty());
                    let tally = |rs: &[usize]| {
                        let mut c = vec![0u64; data.n_classes()];
                        for &i in rs {
                            c[data.label(i) as usize] += 1;
                        }
                        c
                    };
                    let pc = tally(rows);
                    let lc = tally(&l);
                    let rc = tally(&r);
                    let g = |c: &[u64]| {
                        let n: u64 = c.iter().sum();
                        gini_from_counts(c, n) * n as f64
                    };
                    assert!(g(&lc) + g(&rc) <= g(&pc) + 1e-9);
                    walk(tree, data, *left, &l);
                    walk(tree, data, *right, &r);
                }
            }
        }
        walk(&tree, &data, 0, &rows);

        for stats in tree.training_leaf_stats() {
            let k = data.n_classes() as f64;
            assert!(stats.gini >= 0.0 && stats.gini <= 1.0 - 1.0 / k + 1e-12);
            let pure = stats.class_counts.iter().filter(|&&c| c > 0).count() == 1;
            assert_eq!(pure, stats.gini == 0.0);
        }
    }

    #[test]
    fn tree_serializes_to_json_and_back() {
        let data = one_feature(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1], 2);
        let tree = fit(&data, 2);
        let json = serde_json::to_string(&tree).unwrap();
        let back: CartTree = serde_json::from_str(&json).unwrap();
        assert_eq!(tree, back);
    }
}
