//! Gini-optimal stratum allocation and subdata assembly.
//!
//! The allocation minimizes the expected test Gini: each stratum's share of
//! the budget grows with sqrt(N_l * G_l), clamped to
//! [min(t_h, N_l), N_l]. Within each stratum the rows are picked by
//! twinning, so every stratum's subsample mirrors its joint distribution.

mod kdtree;
mod twin;

use std::collections::BinaryHeap;
use std::time::Instant;

use rand::seq::index::sample as index_sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cart::LeafStats;
use crate::data::Dataset;
use crate::error::{PedError, Result};
use crate::partition::{find_partition, Partition, PedConfig};
use crate::seed::Seed;

use twin::{twin_indices, twin_space};

/// How a subdata was selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubdataMethod {
    Ped,
    Uniform,
    Twinning,
}

impl SubdataMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SubdataMethod::Ped => "ped",
            SubdataMethod::Uniform => "uniform",
            SubdataMethod::Twinning => "twinning",
        }
    }
}

/// Selected row indices into the source dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Subdata {
    pub indices: Vec<usize>,
    pub method: SubdataMethod,
    /// Stratum id per selected row (PED only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provenance: Option<Vec<u32>>,
}

/// Per-stratum sample sizes with their bounds and twinning ratios.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AllocationPlan {
    pub n_l: Vec<usize>,
    /// floor(N_l / n_l); twinning ratio per stratum.
    pub r_l: Vec<usize>,
    pub lower: Vec<usize>,
    pub upper: Vec<usize>,
}

/// Unclamped allocation weights sqrt(N_l * G_l).
pub fn sqrt_allocation_weights(strata: &[(u64, f64)]) -> Vec<f64> {
    strata.iter().map(|&(n, g)| (n as f64 * g).sqrt()).collect()
}

#[derive(PartialEq)]
struct GainItem {
    gain: f64,
    stratum: usize,
    at: usize,
}

impl Eq for GainItem {}

impl PartialOrd for GainItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GainItem {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Max-heap on gain; equal gains pop the lowest stratum first.
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.stratum.cmp(&self.stratum))
    }
}

/// Objective decrease from raising a stratum's allocation m -> m+1; the
/// variance term of the expected test Gini drops by a / (m (m+1)) with
/// a = N_l * G_l.
fn marginal_gain(a: f64, m: usize) -> f64 {
    a / (m as f64 * (m as f64 + 1.0))
}

/// Optimal integer allocation of `n` samples across strata.
///
/// Starts every stratum at its lower bound min(t_h, N_l) and spends the
/// remaining budget one unit at a time on the largest marginal decrease of
/// the expected test Gini, respecting the N_l upper bounds. For a separable
/// convex objective this greedy matches the exhaustive integer optimum.
/// Zero-Gini strata have zero marginal gain, so they stay at their lower
/// bound unless feasibility forces more.
pub fn allocate(strata: &[(u64, f64)], n: usize, t_h: usize) -> Result<AllocationPlan> {
    let lower: Vec<usize> = strata
        .iter()
        .map(|&(nl, _)| (t_h as u64).min(nl) as usize)
        .collect();
    let upper: Vec<usize> = strata.iter().map(|&(nl, _)| nl as usize).collect();
    let lower_sum: usize = lower.iter().sum();
    let upper_sum: usize = upper.iter().sum();
    if lower_sum > n || upper_sum < n {
        return Err(PedError::InfeasibleBounds {
            lower_sum,
            upper_sum,
            budget: n,
        });
    }

    let gains: Vec<f64> = strata.iter().map(|&(nl, g)| nl as f64 * g).collect();
    let mut n_l = lower.clone();
    let mut budget = n - lower_sum;

    let mut heap = BinaryHeap::new();
    for (l, &m) in n_l.iter().enumerate() {
        if m < upper[l] {
            heap.push(GainItem {
                gain: marginal_gain(gains[l], m.max(1)),
                stratum: l,
                at: m,
            });
        }
    }
    while budget > 0 {
        let item = heap.pop().expect("feasible budget always has capacity");
        if item.at != n_l[item.stratum] {
            continue; // stale entry
        }
        n_l[item.stratum] += 1;
        budget -= 1;
        if n_l[item.stratum] < upper[item.stratum] {
            heap.push(GainItem {
                gain: marginal_gain(gains[item.stratum], n_l[item.stratum]),
                stratum: item.stratum,
                at: n_l[item.stratum],
            });
        }
    }

    let r_l = n_l
        .iter()
        .zip(&upper)
        .map(|(&nl, &cap)| if nl == 0 { 1 } else { cap / nl })
        .collect();
    Ok(AllocationPlan {
        n_l,
        r_l,
        lower,
        upper,
    })
}

/// Expected Gini on test data when each stratum's class proportions are
/// estimated from n_l subdata rows:
/// sum_l (N_l/N) * { (1 - sum_k p^2) + sum_k p(1-p)/n_l }.
///
/// The second term is the estimation-variance penalty; it vanishes as
/// n_l grows, leaving the plain weighted Gini.
pub fn expected_test_gini(strata: &[LeafStats], allocation: &[usize], total: u64) -> Result<f64> {
    if strata.len() != allocation.len() {
        return Err(PedError::LengthMismatch {
            left: strata.len(),
            right: allocation.len(),
        });
    }
    if total == 0 {
        return Err(PedError::ZeroTotal);
    }
    let mut value = 0.0;
    for (l, (s, &nl)) in strata.iter().zip(allocation).enumerate() {
        if s.count == 0 {
            continue;
        }
        if nl == 0 {
            return Err(PedError::ZeroAllocation { stratum: l });
        }
        let weight = s.count as f64 / total as f64;
        let mut sq = 0.0;
        let mut var = 0.0;
        for &c in &s.class_counts {
            let p = c as f64 / s.count as f64;
            sq += p * p;
            var += p * (1.0 - p) / nl as f64;
        }
        value += weight * ((1.0 - sq) + var);
    }
    Ok(value)
}

fn srswor(n: usize, k: usize, seed: Seed) -> Vec<usize> {
    let mut rng = seed.rng();
    let mut picked: Vec<usize> = index_sample(&mut rng, n, k).into_iter().collect();
    picked.sort_unstable();
    picked
}

/// Twinning-based draw of `n_target` rows from a stratum. Ratio 1 (or a
/// full draw) degenerates to uniform sampling; otherwise a ratio-r walk
/// over-samples to ceil(|rows|/r) and a seeded uniform pick trims to size.
pub fn twin_within(
    data: &Dataset,
    rows: &[usize],
    n_target: usize,
    seed: Seed,
) -> Result<Vec<usize>> {
    if n_target == 0 {
        return Err(PedError::EmptySample);
    }
    if n_target > rows.len() {
        return Err(PedError::SampleTooLarge {
            n: n_target,
            population: rows.len(),
        });
    }
    if n_target == rows.len() {
        let mut all = rows.to_vec();
        all.sort_unstable();
        return Ok(all);
    }
    let ratio = rows.len() / n_target;
    let locals: Vec<usize> = if ratio == 1 {
        srswor(rows.len(), n_target, seed.derive("subselect", 0))
    } else {
        let emitted = twin_indices(twin_space(data, rows), ratio, seed);
        if emitted.len() == n_target {
            emitted
        } else {
            let keep = srswor(emitted.len(), n_target, seed.derive("subselect", 0));
            keep.into_iter().map(|i| emitted[i]).collect()
        }
    };
    let mut out: Vec<usize> = locals.into_iter().map(|l| rows[l]).collect();
    out.sort_unstable();
    Ok(out)
}

/// Wall-clock breakdown of a PED selection.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PedTimings {
    pub partition_s: f64,
    pub allocation_s: f64,
    pub twinning_s: f64,
}

impl PedTimings {
    pub fn total_s(&self) -> f64 {
        self.partition_s + self.allocation_s + self.twinning_s
    }
}

/// A PED subdata with everything needed to report how it was chosen.
#[derive(Debug, Clone)]
pub struct PedSelection {
    pub subdata: Subdata,
    pub partition: Partition,
    pub allocation: AllocationPlan,
    pub timings: PedTimings,
}

/// Strata whose sample is at least this large are drawn uniformly instead
/// of by the twinning walk: at that size a uniform sample already matches
/// the stratum distribution, and the walk's pool scans would dominate the
/// selection cost on big data.
pub const LARGE_STRATUM_UNIFORM: usize = 512;

/// Full pipeline: partition, allocate, twin within each stratum.
pub fn select_ped(data: &Dataset, config: &PedConfig) -> Result<PedSelection> {
    let t0 = Instant::now();
    let partition =
        find_partition(data, config).map_err(|e| e.in_stage("partition search"))?;
    let t1 = Instant::now();

    let pairs: Vec<(u64, f64)> = partition.strata.iter().map(|s| (s.count, s.gini)).collect();
    let allocation =
        allocate(&pairs, config.n, config.t_h).map_err(|e| e.in_stage("allocation"))?;
    let t2 = Instant::now();

    let groups = partition.rows_by_stratum();
    let picks: Result<Vec<Vec<usize>>> = groups
        .par_iter()
        .enumerate()
        .map(|(l, rows)| {
            let target = allocation.n_l[l];
            if target == 0 {
                return Ok(Vec::new());
            }
            let seed = config.seed.derive("stratum", l as u64);
            if target >= LARGE_STRATUM_UNIFORM && target < rows.len() {
                let keep = srswor(rows.len(), target, seed.derive("subselect", 0));
                return Ok(keep.into_iter().map(|i| rows[i]).collect());
            }
            twin_within(data, rows, target, seed).map_err(|e| e.in_stage("stratum twinning"))
        })
        .collect();
    let picks = picks?;
    let t3 = Instant::now();

    let mut indices = Vec::with_capacity(config.n);
    let mut provenance = Vec::with_capacity(config.n);
    for (l, rows) in picks.into_iter().enumerate() {
        provenance.extend(std::iter::repeat_n(l as u32, rows.len()));
        indices.extend(rows);
    }
    debug_assert_eq!(indices.len(), config.n);

    Ok(PedSelection {
        subdata: Subdata {
            indices,
            method: SubdataMethod::Ped,
            provenance: Some(provenance),
        },
        partition,
        allocation,
        timings: PedTimings {
            partition_s: (t1 - t0).as_secs_f64(),
            allocation_s: (t2 - t1).as_secs_f64(),
            twinning_s: (t3 - t2).as_secs_f64(),
        },
    })
}

/// Simple random sample without replacement.
pub fn select_uniform(data: &Dataset, n: usize, seed: Seed) -> Result<Subdata> {
    if n == 0 {
        return Err(PedError::EmptySample);
    }
    if n > data.n_rows() {
        return Err(PedError::SampleTooLarge {
            n,
            population: data.n_rows(),
        });
    }
    Ok(Subdata {
        indices: srswor(data.n_rows(), n, seed.derive("uniform", 0)),
        method: SubdataMethod::Uniform,
        provenance: None,
    })
}

/// Twinning over the whole dataset.
pub fn select_twinning(data: &Dataset, n: usize, seed: Seed) -> Result<Subdata> {
    let rows: Vec<usize> = (0..data.n_rows()).collect();
    let indices = twin_within(data, &rows, n, seed)?;
    Ok(Subdata {
        indices,
        method: SubdataMethod::Twinning,
        provenance: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate, GeneratorSpec};

    #[test]
    fn allocation_follows_sqrt_rule() {
        // sqrt(900*0.1) : sqrt(100*0.4) = 3 : 2 over a budget of 100.
        let plan = allocate(&[(900, 0.1), (100, 0.4)], 100, 5).unwrap();
        assert_eq!(plan.n_l, vec![60, 40]);
        assert_eq!(plan.r_l, vec![15, 2]);
    }

    #[test]
    fn zero_gini_stratum_clamps_to_lower_bound() {
        let plan = allocate(&[(1000, 0.2), (4, 0.0)], 50, 5).unwrap();
        assert_eq!(plan.n_l, vec![46, 4]);
        assert_eq!(plan.lower, vec![5, 4]);
    }

    #[test]
    fn single_stratum_takes_whole_budget() {
        let plan = allocate(&[(500, 0.3)], 77, 5).unwrap();
        assert_eq!(plan.n_l, vec![77]);
    }

    #[test]
    fn infeasible_bounds_error() {
        assert!(matches!(
            allocate(&[(3, 0.5), (3, 0.5)], 20, 5),
            Err(PedError::InfeasibleBounds { .. })
        ));
        assert!(matches!(
            allocate(&[(100, 0.5), (100, 0.5)], 4, 5),
            Err(PedError::InfeasibleBounds { .. })
        ));
    }

    #[test]
    fn weights_are_scale_equivariant() {
        let base = [(100u64, 0.3), (400, 0.1), (50, 0.5)];
        let scaled: Vec<(u64, f64)> = base.iter().map(|&(n, g)| (n * 7, g)).collect();
        let w0 = sqrt_allocation_weights(&base);
        let w1 = sqrt_allocation_weights(&scaled);
        let ratio0: Vec<f64> = w0.iter().map(|w| w / w0[0]).collect();
        let ratio1: Vec<f64> = w1.iter().map(|w| w / w1[0]).collect();
        for (a, b) in ratio0.iter().zip(&ratio1) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    fn stats(counts: Vec<u64>) -> LeafStats {
        LeafStats::from_counts(counts)
    }

    #[test]
    fn pure_strata_have_zero_expected_gini() {
        let strata = vec![stats(vec![30, 0]), stats(vec![0, 70])];
        let g = expected_test_gini(&strata, &[5, 9], 100).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn expected_gini_adds_estimation_penalty() {
        // One stratum at p = (0.5, 0.5) and n_l = 10: base Gini 0.5 plus a
        // variance penalty of (0.25 + 0.25) / 10.
        let strata = vec![stats(vec![50, 50])];
        let g = expected_test_gini(&strata, &[10], 100).unwrap();
        assert!((g - 0.55).abs() < 1e-15, "got {g}");
    }

    #[test]
    fn expected_gini_tends_to_weighted_gini() {
        let strata = vec![stats(vec![40, 10]), stats(vec![25, 25])];
        let g = expected_test_gini(&strata, &[1_000_000_000, 1_000_000_000], 100).unwrap();
        let weighted = 0.5 * 0.32 + 0.5 * 0.5;
        assert!((g - weighted).abs() < 1e-8);
    }

    #[test]
    fn zero_allocation_on_nonempty_stratum_errors() {
        let strata = vec![stats(vec![10, 10])];
        assert!(matches!(
            expected_test_gini(&strata, &[0], 20),
            Err(PedError::ZeroAllocation { stratum: 0 })
        ));
    }

    #[test]
    fn twin_within_identity_when_target_is_all() {
        let data = generate(&GeneratorSpec::Twonorm { p: 2 }, 50, Seed::new(1)).unwrap();
        let rows: Vec<usize> = (5..25).collect();
        let out = twin_within(&data, &rows, 20, Seed::new(2)).unwrap();
        assert_eq!(out, rows);
    }

    #[test]
    fn twin_within_returns_exact_count_of_distinct_rows() {
        let data = generate(&GeneratorSpec::Twonorm { p: 2 }, 100, Seed::new(3)).unwrap();
        let rows: Vec<usize> = (0..10).collect();
        let out = twin_within(&data, &rows, 5, Seed::new(4)).unwrap();
        assert_eq!(out.len(), 5);
        let mut sorted = out.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 5);
        assert!(out.iter().all(|i| rows.contains(i)));
    }

    #[test]
    fn twin_within_rejects_bad_targets() {
        let data = generate(&GeneratorSpec::Twonorm { p: 2 }, 20, Seed::new(5)).unwrap();
        let rows: Vec<usize> = (0..10).collect();
        assert!(matches!(
            twin_within(&data, &rows, 0, Seed::new(6)),
            Err(PedError::EmptySample)
        ));
        assert!(matches!(
            twin_within(&data, &rows, 11, Seed::new(6)),
            Err(PedError::SampleTooLarge { .. })
        ));
    }

    #[test]
    fn twin_sample_tracks_distribution_better_than_uniform() {
        use crate::metrics::energy_distance;
        let data = generate(&GeneratorSpec::Twonorm { p: 3 }, 2000, Seed::new(7)).unwrap();
        let rows: Vec<usize> = (0..2000).collect();
        let pick = twin_within(&data, &rows, 100, Seed::new(8)).unwrap();
        let cloud =
            |ids: &[usize]| -> Vec<Vec<f64>> { ids.iter().map(|&i| data.row(i)).collect() };
        let full = cloud(&rows);
        let twin_d = energy_distance(&cloud(&pick), &full).unwrap();
        let mut uniform_ds: Vec<f64> = (0..20)
            .map(|t| {
                let u = srswor(2000, 100, Seed::new(100 + t));
                energy_distance(&cloud(&u), &full).unwrap()
            })
            .collect();
        uniform_ds.sort_by(f64::total_cmp);
        let median = uniform_ds[uniform_ds.len() / 2];
        assert!(
            twin_d <= median,
            "twin energy {twin_d} vs uniform median {median}"
        );
    }

    #[test]
    fn select_uniform_contract() {
        let data = generate(&GeneratorSpec::Twonorm { p: 2 }, 100, Seed::new(9)).unwrap();
        let all = select_uniform(&data, 100, Seed::new(10)).unwrap();
        assert_eq!(all.indices, (0..100).collect::<Vec<_>>());
        let again = select_uniform(&data, 30, Seed::new(11)).unwrap();
        let again2 = select_uniform(&data, 30, Seed::new(11)).unwrap();
        assert_eq!(again.indices, again2.indices);
        assert!(matches!(
            select_uniform(&data, 101, Seed::new(12)),
            Err(PedError::SampleTooLarge { .. })
        ));
    }

    #[test]
    fn uniform_class_shares_stay_near_population() {
        // Hypergeometric: n=1000 of N=20000 with class share q has
        // sd = sqrt(n q (1-q) (N-n)/(N-1)).
        let data = generate(&GeneratorSpec::Radial3, 20_000, Seed::new(13)).unwrap();
        let sub = select_uniform(&data, 1000, Seed::new(14)).unwrap();
        let pop = data.class_counts();
        let mut got = vec![0u64; 3];
        for &i in &sub.indices {
            got[data.label(i) as usize] += 1;
        }
        for k in 0..3 {
            let q = pop[k] as f64 / 20_000.0;
            let expected = 1000.0 * q;
            let sd = (1000.0 * q * (1.0 - q) * (19_000.0 / 19_999.0)).sqrt();
            assert!(
                (got[k] as f64 - expected).abs() <= 3.0 * sd,
                "class {k}: got {} expected {expected} sd {sd}",
                got[k]
            );
        }
    }

    #[test]
    fn select_ped_assembles_exact_budget() {
        let data = generate(&GeneratorSpec::Radial3, 2500, Seed::new(15)).unwrap();
        let config = PedConfig::new(500, Seed::new(16));
        let sel = select_ped(&data, &config).unwrap();
        assert_eq!(sel.subdata.indices.len(), 500);
        let mut sorted = sel.subdata.indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 500, "indices distinct");
        let prov = sel.subdata.provenance.as_ref().unwrap();
        assert_eq!(prov.len(), 500);
        // Provenance agrees with the partition's assignments.
        for (&i, &l) in sel.subdata.indices.iter().zip(prov) {
            assert_eq!(sel.partition.assignments[i], l);
        }
    }

    #[test]
    fn ped_oversamples_the_outer_ring() {
        let data = generate(&GeneratorSpec::Radial3, 2500, Seed::new(17)).unwrap();
        let sel = select_ped(&data, &PedConfig::new(500, Seed::new(18))).unwrap();
        let outer_share = sel
            .subdata
            .indices
            .iter()
            .filter(|&&i| data.label(i) == 1)
            .count() as f64
            / 500.0;
        assert!(
            outer_share > 0.08,
            "outer class share {outer_share} should exceed its 5% population share"
        );
    }

    #[test]
    fn pure_strata_get_lower_bounds() {
        // Perfectly separable data: every stratum is pure, so the allocation
        // clamps at min(t_h, N_l) and spends the remainder where it must.
        let values: Vec<f64> = (0..400).map(f64::from).collect();
        let labels: Vec<u32> = (0..400).map(|i| u32::from(i >= 200)).collect();
        let data = crate::data::Dataset::new(
            vec![crate::data::ColumnSchema::continuous("x")],
            vec![values],
            labels,
            vec!["0".into(), "1".into()],
            "y",
        )
        .unwrap();
        let config = PedConfig::new(40, Seed::new(19));
        let sel = select_ped(&data, &config).unwrap();
        assert_eq!(sel.subdata.indices.len(), 40);
        let pure = sel.partition.strata.iter().all(|s| s.gini == 0.0);
        assert!(pure);
    }
}
