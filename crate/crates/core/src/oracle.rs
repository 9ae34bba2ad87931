//! Brute-force reference implementations for tests (feature `oracle`).
//!
//! These re-derive the split-search definition from scratch — enumerate
//! every candidate cut, partition by one pass over the node rows in index
//! order, compute each child's SSE as a two-pass sum of squared deviations
//! in that order — without touching any of the production search code. The
//! production searches must agree with these scans exactly, bit for bit.

use std::collections::BTreeSet;

use crate::data::{CovariateKind, Dataset};

/// A candidate or winning split found by exhaustive scan.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteSplit {
    pub var: usize,
    pub threshold: Option<f64>,
    pub levels: Option<BTreeSet<u32>>,
    pub sse: f64,
    pub n_left: usize,
    pub n_right: usize,
}

fn brute_mean(values: &[f64]) -> f64 {
    let mut s = 0.0;
    for v in values {
        s += v;
    }
    s / values.len() as f64
}

fn brute_sse(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let m = brute_mean(values);
    let mut s = 0.0;
    for v in values {
        s += (v - m) * (v - m);
    }
    s
}

enum Candidate {
    Threshold(f64),
    Levels(BTreeSet<u32>),
}

fn enumerate_candidates(rows: &[usize], d: &Dataset, var: usize, target: &[f64]) -> Vec<Candidate> {
    let col = d.column(var);
    match d.kind(var) {
        CovariateKind::Continuous | CovariateKind::Binary => {
            let mut values = Vec::new();
            for &r in rows {
                let v = col[r];
                if !v.is_nan() && !values.contains(&v) {
                    values.push(v);
                }
            }
            values.sort_by(f64::total_cmp);
            let mut out = Vec::new();
            for k in 0..values.len().saturating_sub(1) {
                out.push(Candidate::Threshold(0.5 * (values[k] + values[k + 1])));
            }
            out
        }
        CovariateKind::Categorical { levels } => {
            let mut sums = vec![0.0f64; levels as usize];
            let mut counts = vec![0usize; levels as usize];
            for &r in rows {
                let v = col[r];
                if !v.is_nan() {
                    sums[v as usize] += target[r];
                    counts[v as usize] += 1;
                }
            }
            let mut order: Vec<(f64, u32)> = (0..levels)
                .filter(|&l| counts[l as usize] > 0)
                .map(|l| (sums[l as usize] / counts[l as usize] as f64, l))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut out = Vec::new();
            for k in 1..order.len() {
                let set: BTreeSet<u32> = order[..k].iter().map(|&(_, l)| l).collect();
                out.push(Candidate::Levels(set));
            }
            out
        }
    }
}

fn evaluate(
    rows: &[usize],
    d: &Dataset,
    var: usize,
    cand: &Candidate,
    target: &[f64],
    min_each: usize,
) -> Option<(f64, usize, usize)> {
    let col = d.column(var);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &r in rows {
        let v = col[r];
        let goes_left = match cand {
            Candidate::Threshold(c) => !v.is_nan() && v <= *c,
            Candidate::Levels(set) => !v.is_nan() && set.contains(&(v as u32)),
        };
        if goes_left {
            left.push(target[r]);
        } else {
            right.push(target[r]);
        }
    }
    if left.len() < min_each.max(1) || right.len() < min_each.max(1) {
        return None;
    }
    Some((brute_sse(&left) + brute_sse(&right), left.len(), right.len()))
}

/// Exhaustive scan of one variable.
pub fn brute_force_split_on(
    rows: &[usize],
    d: &Dataset,
    var: usize,
    target: &[f64],
    min_each: usize,
) -> Option<BruteSplit> {
    let mut best: Option<BruteSplit> = None;
    for cand in enumerate_candidates(rows, d, var, target) {
        if let Some((sse, n_left, n_right)) = evaluate(rows, d, var, &cand, target, min_each) {
            if best.as_ref().map_or(true, |b| sse < b.sse) {
                best = Some(BruteSplit {
                    var,
                    threshold: match &cand {
                        Candidate::Threshold(c) => Some(*c),
                        Candidate::Levels(_) => None,
                    },
                    levels: match cand {
                        Candidate::Levels(set) => Some(set),
                        Candidate::Threshold(_) => None,
                    },
                    sse,
                    n_left,
                    n_right,
                });
            }
        }
    }
    best
}

/// Exhaustive scan over every (variable, cut) pair; variables visited in
/// name order so ties resolve like the production search.
pub fn brute_force_cart(
    rows: &[usize],
    d: &Dataset,
    target: &[f64],
    min_each: usize,
) -> Option<BruteSplit> {
    let mut order: Vec<usize> = (0..d.p()).collect();
    order.sort_by(|&a, &b| d.name(a).cmp(d.name(b)));
    let mut best: Option<BruteSplit> = None;
    for &var in &order {
        if let Some(split) = brute_force_split_on(rows, d, var, target, min_each) {
            if best.as_ref().map_or(true, |b| split.sse < b.sse) {
                best = Some(split);
            }
        }
    }
    best
}
