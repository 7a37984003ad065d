//! Sequential twinning over a row set.
//!
//! Rows are embedded in a joint space: continuous features standardized to
//! zero mean and unit variance over the set, categorical features and the
//! class label one-hot encoded and scaled by 1/sqrt(2). A ratio-r pass emits
//! every r-th point of a nearest-neighbor walk, so the emitted set of size
//! ceil(m/r) matches the joint distribution of the source rows.

use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::kdtree::NnPool;
use crate::data::{ColumnKind, Dataset};
use crate::seed::Seed;

use rand::Rng;

/// Standardized joint-space coordinates for a set of rows.
pub(crate) struct TwinSpace {
    pub points: Vec<f64>,
    pub dims: usize,
}

pub(crate) fn twin_space(data: &Dataset, rows: &[usize]) -> TwinSpace {
    let one_hot = 0.5f64.sqrt();
    let k = data.n_classes();
    let mut dims = k;
    for col in data.schema() {
        dims += match &col.kind {
            ColumnKind::Continuous => 1,
            ColumnKind::Categorical { levels } => levels.len(),
        };
    }

    let m = rows.len();
    let mut points = vec![0.0; m * dims];
    let mut offset = 0usize;
    for (j, col) in data.schema().iter().enumerate() {
        match &col.kind {
            ColumnKind::Continuous => {
                let values = data.column(j);
                let mut mean = 0.0;
                for &i in rows {
                    mean += values[i];
                }
                mean /= m as f64;
                let mut var = 0.0;
                for &i in rows {
                    let d = values[i] - mean;
                    var += d * d;
                }
                var /= m as f64;
                let sd = var.sqrt();
                if sd > 1e-12 {
                    for (local, &i) in rows.iter().enumerate() {
                        points[local * dims + offset] = (values[i] - mean) / sd;
                    }
                }
                offset += 1;
            }
            ColumnKind::Categorical { levels } => {
                let values = data.column(j);
                for (local, &i) in rows.iter().enumerate() {
                    let level = values[i] as usize;
                    points[local * dims + offset + level] = one_hot;
                }
                offset += levels.len();
            }
        }
    }
    for (local, &i) in rows.iter().enumerate() {
        points[local * dims + offset + data.label(i) as usize] = one_hot;
    }
    TwinSpace { points, dims }
}

/// Ratio-`r` twinning walk; returns ceil(m/r) local indices in emission
/// order. Requires r >= 2 and a nonempty space.
pub(crate) fn twin_indices(space: TwinSpace, r: usize, seed: Seed) -> Vec<usize> {
    debug_assert!(r >= 2);
    let dims = space.dims;
    let points = space.points;
    let m = points.len() / dims;
    let mut pool = NnPool::build(points, dims);
    let mut emitted = Vec::with_capacity(m / r + 1);

    let mut rng: ChaCha8Rng = seed.derive("start", 0).rng();
    let probe: Vec<f64> = (0..dims).map(|_| rng.sample(StandardNormal)).collect();
    let mut current = pool.nearest(&probe).expect("nonempty pool");

    loop {
        emitted.push(current as usize);
        let here: Vec<f64> = pool.coords(current).to_vec();
        pool.remove(current);
        let want = (r - 1).min(pool.live_count());
        if want == 0 {
            if pool.live_count() == 0 {
                break;
            }
            current = pool.nearest(&here).expect("live points remain");
            continue;
        }
        let neighbors = pool.k_nearest(&here, want);
        let last = *neighbors.last().expect("want > 0");
        let anchor: Vec<f64> = pool.coords(last).to_vec();
        for id in neighbors {
            pool.remove(id);
        }
        match pool.nearest(&anchor) {
            Some(next) => current = next,
            None => break,
        }
    }
    emitted
}
