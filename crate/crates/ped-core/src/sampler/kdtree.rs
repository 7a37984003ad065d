//! Exact nearest-neighbor pool with deletions, used by the sequential
//! twinning pass. A kd-tree with lazy removal handles large pools; small
//! pools fall back to linear scans. Distance ties break on the lower point
//! id so queries are fully deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const BRUTE_FORCE_LIMIT: usize = 256;
const LEAF_SIZE: usize = 16;
// Above this dimensionality plane pruning stops paying for itself and a
// contiguous linear scan wins at any pool size we see.
const KD_MAX_DIMS: usize = 12;

#[derive(Clone, Copy, PartialEq)]
struct Hit {
    dist2: f64,
    id: u32,
}

impl Eq for Hit {}

impl PartialOrd for Hit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dist2
            .total_cmp(&other.dist2)
            .then(self.id.cmp(&other.id))
    }
}

enum KdNode {
    Split {
        dim: usize,
        value: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        start: usize,
        end: usize,
    },
}

/// Point pool supporting exact k-nearest queries and removal.
pub struct NnPool {
    dims: usize,
    points: Vec<f64>,
    removed: Vec<bool>,
    live: usize,
    removed_since_build: usize,
    prefer_tree: bool,
    // Tree arena; empty when the pool is small enough for linear scans.
    nodes: Vec<KdNode>,
    order: Vec<u32>,
    root: usize,
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl NnPool {
    /// Build over `n` points stored row-major in `points`.
    pub fn build(points: Vec<f64>, dims: usize) -> Self {
        assert!(dims > 0 && points.len() % dims == 0);
        let n = points.len() / dims;
        let mut pool = NnPool {
            prefer_tree: dims <= KD_MAX_DIMS,
            dims,
            points,
            removed: vec![false; n],
            live: n,
            removed_since_build: 0,
            nodes: Vec::new(),
            order: Vec::new(),
            root: 0,
        };
        pool.rebuild();
        pool
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn coords(&self, id: u32) -> &[f64] {
        let i = id as usize * self.dims;
        &self.points[i..i + self.dims]
    }

    pub fn remove(&mut self, id: u32) {
        let i = id as usize;
        if !self.removed[i] {
            self.removed[i] = true;
            self.live -= 1;
            self.removed_since_build += 1;
            if !self.nodes.is_empty() && self.removed_since_build > self.live {
                self.rebuild();
            }
        }
    }

    fn rebuild(&mut self) {
        self.removed_since_build = 0;
        self.nodes.clear();
        self.order = (0..self.points.len() / self.dims)
            .filter(|&i| !self.removed[i])
            .map(|i| i as u32)
            .collect();
        if self.live <= BRUTE_FORCE_LIMIT || !self.prefer_tree {
            return;
        }
        let end = self.order.len();
        self.root = self.build_node(0, end);
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        if end - start <= LEAF_SIZE {
            self.nodes.push(KdNode::Leaf { start, end });
            return self.nodes.len() - 1;
        }
        // Split on the dimension with the widest spread.
        let mut best_dim = 0;
        let mut best_spread = -1.0;
        for d in 0..self.dims {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for &id in &self.order[start..end] {
                let v = self.points[id as usize * self.dims + d];
                lo = lo.min(v);
                hi = hi.max(v);
            }
            if hi - lo > best_spread {
                best_spread = hi - lo;
                best_dim = d;
            }
        }
        if best_spread <= 0.0 {
            // All points identical in every dimension.
            self.nodes.push(KdNode::Leaf { start, end });
            return self.nodes.len() - 1;
        }
        let mid = (start + end) / 2;
        let dims = self.dims;
        let points = &self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points[a as usize * dims + best_dim]
                .total_cmp(&points[b as usize * dims + best_dim])
                .then(a.cmp(&b))
        });
        let value = self.points[self.order[mid] as usize * self.dims + best_dim];
        let slot = self.nodes.len();
        self.nodes.push(KdNode::Leaf { start, end }); // placeholder
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[slot] = KdNode::Split {
            dim: best_dim,
            value,
            left,
            right,
        };
        slot
    }

    fn scan_leaf(&self, start: usize, end: usize, query: &[f64], k: usize, heap: &mut BinaryHeap<Hit>) {
        for &id in &self.order[start..end] {
            if self.removed[id as usize] {
                continue;
            }
            let bound = if heap.len() < k {
                f64::INFINITY
            } else {
                heap.peek().unwrap().dist2
            };
            // Partial-distance abort in 8-coordinate blocks: the blocks stay
            // vectorizable, and a point is dropped only when the running sum
            // strictly exceeds the k-th distance, so exact ties survive.
            let coords = self.coords(id);
            let mut acc = 0.0;
            let mut alive = true;
            for (qs, cs) in query.chunks(8).zip(coords.chunks(8)) {
                acc += qs
                    .iter()
                    .zip(cs)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>();
                if acc > bound {
                    alive = false;
                    break;
                }
            }
            if !alive {
                continue;
            }
            let h = Hit { dist2: acc, id };
            if heap.len() < k {
                heap.push(h);
            } else if h < *heap.peek().unwrap() {
                heap.pop();
                heap.push(h);
            }
        }
    }

    fn search_node(&self, at: usize, query: &[f64], k: usize, heap: &mut BinaryHeap<Hit>) {
        match &self.nodes[at] {
            KdNode::Leaf { start, end } => self.scan_leaf(*start, *end, query, k, heap),
            KdNode::Split {
                dim,
                value,
                left,
                right,
            } => {
                let diff = query[*dim] - value;
                let (near, far) = if diff < 0.0 { (*left, *right) } else { (*right, *left) };
                self.search_node(near, query, k, heap);
                let worst = heap.peek().map_or(f64::INFINITY, |h| h.dist2);
                if heap.len() < k || diff * diff <= worst {
                    self.search_node(far, query, k, heap);
                }
            }
        }
    }

    /// Up to `k` nearest live points, ascending by (distance, id).
    pub fn k_nearest(&self, query: &[f64], k: usize) -> Vec<u32> {
        if k == 0 || self.live == 0 {
            return Vec::new();
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        if self.nodes.is_empty() {
            self.scan_leaf(0, self.order.len(), query, k, &mut heap);
        } else {
            self.search_node(self.root, query, k, &mut heap);
        }
        let mut hits = heap.into_vec();
        hits.sort();
        hits.into_iter().map(|h| h.id).collect()
    }

    /// Nearest live point to the query, if any.
    pub fn nearest(&self, query: &[f64]) -> Option<u32> {
        self.k_nearest(query, 1).first().copied()
    }
}
