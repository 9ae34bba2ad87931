//! Regression trees and bagged forests over a generic feature matrix.
//!
//! This is the nonparametric learner behind counterfactual prediction. It is
//! deliberately self-contained and tuned for repeated fits inside Monte
//! Carlo loops: in-place index partitioning, reused scratch buffers, and
//! prefix-sum split scans. Rows with a missing (`NaN`) split feature always
//! descend to the right child, both during training and prediction.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::rng::{StreamKind, Streams};

/// Hyperparameters for a single regression tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeParams {
    /// Features tried per node; `0` means all features.
    pub mtry: usize,
    /// Minimum rows in each child.
    pub min_leaf: usize,
    /// Maximum depth; root is depth 0.
    pub max_depth: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            mtry: 0,
            min_leaf: 5,
            max_depth: 64,
        }
    }
}

#[derive(Debug, Clone)]
struct Node {
    /// Split feature, or `u32::MAX` for a leaf.
    feature: u32,
    threshold: f64,
    left: u32,
    right: u32,
    /// Leaf prediction (node mean).
    value: f64,
}

const LEAF: u32 = u32::MAX;

/// A fitted regression tree.
#[derive(Debug, Clone)]
pub struct RegressionTree {
    nodes: Vec<Node>,
}

struct Workspace {
    pairs: Vec<(f64, f64)>,
    features: Vec<u32>,
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [f64],
    params: TreeParams,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: u32,
    threshold: f64,
    score: f64,
}

impl<'a> Builder<'a> {
    /// Scan one feature for the score-maximizing cut.
    ///
    /// `score = sum_L^2/n_L + sum_R^2/n_R`; maximizing it minimizes the
    /// within-child SSE. Missing rows contribute to the right side of every
    /// candidate.
    fn scan_feature(
        &self,
        rows: &[u32],
        feature: u32,
        node_sum: f64,
        ws_pairs: &mut Vec<(f64, f64)>,
    ) -> Option<(f64, f64)> {
        let col = &self.x[feature as usize];
        ws_pairs.clear();
        for &r in rows {
            let v = col[r as usize];
            if !v.is_nan() {
                ws_pairs.push((v, self.y[r as usize]));
            }
        }
        let m_total = rows.len();
        let present = ws_pairs.len();
        if present < 2 {
            return None;
        }
        ws_pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let min_leaf = self.params.min_leaf;
        let mut best: Option<(f64, f64)> = None;
        let mut left_sum = 0.0;
        for k in 0..present - 1 {
            left_sum += ws_pairs[k].1;
            let n_left = k + 1;
            let n_right = m_total - n_left;
            if n_left < min_leaf {
                continue;
            }
            if n_right < min_leaf {
                break;
            }
            if ws_pairs[k].0 >= ws_pairs[k + 1].0 {
                continue;
            }
            let right_sum = node_sum - left_sum;
            let score =
                left_sum * left_sum / n_left as f64 + right_sum * right_sum / n_right as f64;
            if best.map_or(true, |(s, _)| score > s) {
                best = Some((score, 0.5 * (ws_pairs[k].0 + ws_pairs[k + 1].0)));
            }
        }
        best.map(|(s, t)| (t, s))
    }

    fn grow(&mut self, rows: &mut [u32], depth: usize, rng: &mut ChaCha8Rng, ws: &mut Workspace) -> u32 {
        let m = rows.len();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for &r in rows.iter() {
            let v = self.y[r as usize];
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / m as f64;
        let node_sse = (sum_sq - sum * sum / m as f64).max(0.0);

        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            feature: LEAF,
            threshold: f64::NAN,
            left: 0,
            right: 0,
            value: mean,
        });

        if depth >= self.params.max_depth || m < 2 * self.params.min_leaf || node_sse <= 1e-12 {
            return id;
        }

        let p = self.x.len();
        let mtry = if self.params.mtry == 0 || self.params.mtry >= p {
            p
        } else {
            self.params.mtry
        };
        // partial Fisher-Yates over the reusable feature-id buffer
        ws.features.clear();
        ws.features.extend(0..p as u32);
        let mut best: Option<BestSplit> = None;
        for k in 0..mtry {
            let pick = rng.random_range(k..p);
            ws.features.swap(k, pick);
            let feature = ws.features[k];
            let mut pairs = std::mem::take(&mut ws.pairs);
            if let Some((threshold, score)) = self.scan_feature(rows, feature, sum, &mut pairs) {
                if best.as_ref().map_or(true, |b| score > b.score) {
                    best = Some(BestSplit {
                        feature,
                        threshold,
                        score,
                    });
                }
            }
            ws.pairs = pairs;
        }

        let parent_score = sum * sum / m as f64;
        let best = match best {
            Some(b) if b.score - parent_score > 1e-12 + 1e-9 * node_sse => b,
            _ => return id,
        };

        // partition in place: left = value <= threshold, right = rest
        // (missing included)
        let col = &self.x[best.feature as usize];
        let mut lo = 0usize;
        let mut hi = m;
        while lo < hi {
            let v = col[rows[lo] as usize];
            if !v.is_nan() && v <= best.threshold {
                lo += 1;
            } else {
                hi -= 1;
                rows.swap(lo, hi);
            }
        }
        debug_assert!(lo >= self.params.min_leaf && m - lo >= self.params.min_leaf);
        let (left_rows, right_rows) = rows.split_at_mut(lo);
        let left_id = self.grow(left_rows, depth + 1, rng, ws);
        let right_id = self.grow(right_rows, depth + 1, rng, ws);
        self.nodes[id as usize].feature = best.feature;
        self.nodes[id as usize].threshold = best.threshold;
        self.nodes[id as usize].left = left_id;
        self.nodes[id as usize].right = right_id;
        id
    }
}

impl RegressionTree {
    /// Fit on the given training rows of a column-major feature matrix.
    pub fn fit(
        x: &[Vec<f64>],
        y: &[f64],
        rows: &[u32],
        params: TreeParams,
        rng: &mut ChaCha8Rng,
    ) -> RegressionTree {
        assert!(!rows.is_empty(), "cannot fit a tree on zero rows");
        let mut builder = Builder {
            x,
            y,
            params,
            nodes: Vec::with_capacity(2 * rows.len() / params.min_leaf.max(1) + 1),
        };
        let mut rows = rows.to_vec();
        let mut ws = Workspace {
            pairs: Vec::with_capacity(rows.len()),
            features: Vec::with_capacity(x.len()),
        };
        builder.grow(&mut rows, 0, rng, &mut ws);
        RegressionTree {
            nodes: builder.nodes,
        }
    }

    /// Predict one row of a column-major feature matrix.
    pub fn predict_row(&self, x: &[Vec<f64>], row: usize) -> f64 {
        let mut at = 0u32;
        loop {
            let node = &self.nodes[at as usize];
            if node.feature == LEAF {
                return node.value;
            }
            let v = x[node.feature as usize][row];
            at = if !v.is_nan() && v <= node.threshold {
                node.left
            } else {
                node.right
            };
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: u32) -> usize {
            let n = &nodes[at as usize];
            if n.feature == LEAF {
                0
            } else {
                1 + walk(nodes, n.left).max(walk(nodes, n.right))
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Hyperparameters for a bagged forest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForestParams {
    pub n_trees: usize,
    pub tree: TreeParams,
    /// Also estimate the out-of-bag mean squared error.
    pub compute_oob: bool,
}

/// A fitted forest; predictions are the plain average over trees.
#[derive(Debug, Clone)]
pub struct Forest {
    trees: Vec<RegressionTree>,
    pub oob_mse: Option<f64>,
}

/// Fit a forest on `train_rows`. Each tree draws its bootstrap sample and
/// feature subsamples from its own keyed substream, so the result does not
/// depend on thread scheduling.
pub fn fit_forest(
    x: &[Vec<f64>],
    y: &[f64],
    train_rows: &[u32],
    params: &ForestParams,
    streams: &Streams,
) -> Forest {
    assert!(params.n_trees >= 1);
    let n = train_rows.len();
    let fitted: Vec<(RegressionTree, Option<Vec<bool>>)> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = streams.rng(StreamKind::Tree, t as u64);
            let mut in_bag = vec![false; n];
            let bag: Vec<u32> = (0..n)
                .map(|_| {
                    let k = rng.random_range(0..n);
                    in_bag[k] = true;
                    train_rows[k]
                })
                .collect();
            let tree = RegressionTree::fit(x, y, &bag, params.tree, &mut rng);
            (tree, params.compute_oob.then_some(in_bag))
        })
        .collect();

    let oob_mse = if params.compute_oob {
        let mut err_sum = 0.0;
        let mut counted = 0usize;
        for (k, &row) in train_rows.iter().enumerate() {
            let mut acc = 0.0;
            let mut trees = 0usize;
            for (tree, in_bag) in &fitted {
                if !in_bag.as_ref().expect("oob tracked")[k] {
                    acc += tree.predict_row(x, row as usize);
                    trees += 1;
                }
            }
            if trees > 0 {
                let resid = y[row as usize] - acc / trees as f64;
                err_sum += resid * resid;
                counted += 1;
            }
        }
        (counted > 0).then(|| err_sum / counted as f64)
    } else {
        None
    };

    Forest {
        trees: fitted.into_iter().map(|(t, _)| t).collect(),
        oob_mse,
    }
}

impl Forest {
    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn predict_row(&self, x: &[Vec<f64>], row: usize) -> f64 {
        let mut acc = 0.0;
        for tree in &self.trees {
            acc += tree.predict_row(x, row);
        }
        acc / self.trees.len() as f64
    }

    pub fn predict_rows(&self, x: &[Vec<f64>], rows: std::ops::Range<usize>) -> Vec<f64> {
        rows.map(|r| self.predict_row(x, r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_data(n: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
        let x: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| if v > 0.5 { 1.0 } else { 0.0 }).collect();
        (vec![x], y)
    }

    #[test]
    fn single_tree_fits_step_exactly() {
        let (x, y) = step_data(100);
        let rows: Vec<u32> = (0..100).collect();
        let streams = Streams::new(0);
        let tree = RegressionTree::fit(
            &x,
            &y,
            &rows,
            TreeParams {
                mtry: 0,
                min_leaf: 5,
                max_depth: 8,
            },
            &mut streams.rng(StreamKind::Tree, 0),
        );
        for r in 0..100 {
            assert_eq!(tree.predict_row(&x, r), y[r]);
        }
    }

    #[test]
    fn constant_target_is_single_leaf() {
        let x = vec![(0..50).map(|i| i as f64).collect::<Vec<_>>()];
        let y = vec![3.25; 50];
        let rows: Vec<u32> = (0..50).collect();
        let streams = Streams::new(0);
        let tree = RegressionTree::fit(
            &x,
            &y,
            &rows,
            TreeParams::default(),
            &mut streams.rng(StreamKind::Tree, 0),
        );
        assert_eq!(tree.node_count(), 1);
        assert_eq!(tree.predict_row(&x, 7), 3.25);
    }

    #[test]
    fn min_leaf_respected() {
        let (x, y) = step_data(40);
        let rows: Vec<u32> = (0..40).collect();
        let streams = Streams::new(0);
        let tree = RegressionTree::fit(
            &x,
            &y,
            &rows,
            TreeParams {
                mtry: 0,
                min_leaf: 25,
                max_depth: 8,
            },
            &mut streams.rng(StreamKind::Tree, 0),
        );
        // 40 rows cannot produce two children of 25
        assert_eq!(tree.node_count(), 1);
    }

    #[test]
    fn missing_rows_go_right() {
        let mut x0: Vec<f64> = (0..60).map(|i| i as f64).collect();
        x0[3] = f64::NAN;
        x0[4] = f64::NAN;
        let y: Vec<f64> = (0..60).map(|i| if i >= 30 { 10.0 } else { 0.0 }).collect();
        let x = vec![x0.clone()];
        let rows: Vec<u32> = (0..60).collect();
        let streams = Streams::new(0);
        let tree = RegressionTree::fit(
            &x,
            &y,
            &rows,
            TreeParams {
                mtry: 0,
                min_leaf: 2,
                max_depth: 1,
            },
            &mut streams.rng(StreamKind::Tree, 0),
        );
        // the two missing rows follow the right branch at prediction time,
        // landing with the high-valued group
        let p_missing = tree.predict_row(&x, 3);
        let p_high = tree.predict_row(&x, 59);
        assert_eq!(p_missing, p_high);
    }

    #[test]
    fn forest_is_deterministic_across_pool_sizes() {
        let (x, y) = step_data(200);
        let rows: Vec<u32> = (0..200).collect();
        let params = ForestParams {
            n_trees: 25,
            tree: TreeParams {
                mtry: 1,
                min_leaf: 5,
                max_depth: 16,
            },
            compute_oob: false,
        };
        let streams = Streams::new(9);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                let f = fit_forest(&x, &y, &rows, &params, &streams);
                f.predict_rows(&x, 0..200)
            })
        };
        let a = run(1);
        let b = run(3);
        assert_eq!(
            a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn oob_error_beats_response_variance_on_signal() {
        let n = 300;
        let x0: Vec<f64> = (0..n).map(|i| (i as f64 * 0.61803) % 1.0).collect();
        let y: Vec<f64> = x0
            .iter()
            .enumerate()
            .map(|(i, &v)| if v > 0.5 { 2.0 } else { 0.0 } + ((i * 31 % 17) as f64) * 0.01)
            .collect();
        let x = vec![x0];
        let rows: Vec<u32> = (0..n as u32).collect();
        let params = ForestParams {
            n_trees: 60,
            tree: TreeParams {
                mtry: 1,
                min_leaf: 5,
                max_depth: 16,
            },
            compute_oob: true,
        };
        let streams = Streams::new(4);
        let f = fit_forest(&x, &y, &rows, &params, &streams);
        let var = crate::stats::variance(&y);
        let oob = f.oob_mse.expect("oob computed");
        assert!(oob.is_finite());
        assert!(oob < var, "oob {oob} should beat variance {var}");
    }
}
