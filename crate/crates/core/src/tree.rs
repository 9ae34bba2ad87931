//! Regression trees on individual treatment effects with two split
//! policies.
//!
//! The unbiased policy decouples variable selection from cutpoint search:
//! each covariate gets a univariate association test against the target,
//! the smallest p-value wins, and only then is the SSE-minimizing cutpoint
//! located on the winning variable. Two selection tests are available: a
//! sign-table chi-square (residual signs cross-tabulated against quartile
//! bins of the covariate — the default, sensitive to step shapes and
//! cardinality-free) and a least-squares slope t-test (one-way F for
//! categorical columns). The exhaustive policy jointly minimizes child SSE
//! over every (variable, cut) pair, which favors many-cutpoint variables —
//! the selection bias the unbiased policy exists to remove.
//!
//! Split-search arithmetic is canonical: children are formed by one pass
//! over the node rows in index order, and each child's SSE is the two-pass
//! sum of squared deviations in that same order. Ties in SSE resolve to the
//! smallest cut (and, across variables, to the lexicographically first
//! name), so results are reproducible and independent of column order.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::data::{ConditionOp, CovariateKind, Dataset, Signature, SplitCondition};
use crate::stats;

#[derive(Debug, Error, PartialEq)]
pub enum TreeError {
    #[error("no admissible variable: every covariate is constant on this node")]
    NoAdmissibleVariable,
}

/// Which split search a tree uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SplitPolicyKind {
    GuideUnbiased,
    CartExhaustive,
}

/// Stopping configuration shared by every policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StopRule {
    pub min_node: usize,
    pub max_depth: usize,
    /// Split-significance threshold: a node splits only when its selection
    /// p-value is <= theta. P-values are floored at a tiny positive value,
    /// so theta = 0 never splits.
    pub theta: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_node: 20,
            max_depth: 3,
            theta: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitPolicy {
    pub kind: SplitPolicyKind,
    pub stop: StopRule,
    pub selection: SelectionTest,
}

/// Left-branch definition of a split.
#[derive(Debug, Clone, PartialEq)]
pub enum CutKind {
    /// Left branch is `x <= threshold`; missing goes right.
    Threshold(f64),
    /// Left branch is `level in set`; missing goes right.
    Levels(BTreeSet<u32>),
}

impl CutKind {
    pub fn threshold(&self) -> Option<f64> {
        match self {
            CutKind::Threshold(c) => Some(*c),
            CutKind::Levels(_) => None,
        }
    }

    pub(crate) fn goes_left(&self, v: f64) -> bool {
        if v.is_nan() {
            return false;
        }
        match self {
            CutKind::Threshold(c) => v <= *c,
            CutKind::Levels(set) => set.contains(&(v as u32)),
        }
    }
}

/// Result of a cutpoint search on one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub cut: CutKind,
    /// Total within-child SSE at this cut.
    pub sse: f64,
    pub n_left: usize,
    pub n_right: usize,
}

/// Which univariate association test drives unbiased variable selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SelectionTest {
    /// Chi-square independence of residual signs against covariate bins
    /// (quartiles for continuous columns, levels otherwise). Shape-agnostic
    /// and free of cutpoint-count bias.
    #[default]
    CurvatureChiSquare,
    /// Least-squares slope t-test (one-way F-test for categorical columns).
    SlopeT,
}

/// Sign-table chi-square: cross-tabulate `sign(target - node mean)` against
/// bins of the covariate and test independence. Empty bins collapse; a node
/// whose residuals all share one sign reports p = 1.
fn curvature_test_p(xs: &[f64], resid: &[f64], kind: CovariateKind) -> f64 {
    let n = xs.len();
    if n < 4 {
        return 1.0;
    }
    let edges: Vec<f64> = match kind {
        CovariateKind::Continuous => {
            let mut sorted = xs.to_vec();
            sorted.sort_unstable_by(f64::total_cmp);
            (1..4).map(|q| sorted[(q * n / 4).min(n - 1)]).collect()
        }
        CovariateKind::Binary => vec![0.5],
        CovariateKind::Categorical { levels } => {
            (0..levels.saturating_sub(1)).map(|l| l as f64 + 0.5).collect()
        }
    };
    let m = edges.len() + 1;
    let mut table = vec![[0usize; 2]; m];
    for (x, r) in xs.iter().zip(resid) {
        let bin = edges.iter().filter(|&&e| *x > e).count();
        table[bin][usize::from(*r >= 0.0)] += 1;
    }
    let col_totals: Vec<usize> = table.iter().map(|row| row[0] + row[1]).collect();
    let occupied: Vec<usize> = (0..m).filter(|&b| col_totals[b] > 0).collect();
    if occupied.len() < 2 {
        return 1.0;
    }
    let pos: usize = table.iter().map(|row| row[1]).sum();
    let neg = n - pos;
    if pos == 0 || neg == 0 {
        return 1.0;
    }
    let mut chi2 = 0.0;
    for &b in &occupied {
        for (sign_total, observed) in [(neg, table[b][0]), (pos, table[b][1])] {
            let expected = col_totals[b] as f64 * sign_total as f64 / n as f64;
            if expected > 0.0 {
                let diff = observed as f64 - expected;
                chi2 += diff * diff / expected;
            }
        }
    }
    stats::chi_square_p(chi2, (occupied.len() - 1) as f64)
}

/// Univariate variable selection with an explicit test: the covariate whose
/// association test with the target has the smallest p-value, ties broken
/// by name.
pub fn select_variable_with(
    rows: &[usize],
    d: &Dataset,
    target: &[f64],
    test: SelectionTest,
) -> Result<(usize, f64), TreeError> {
    let mut order: Vec<usize> = (0..d.p()).collect();
    order.sort_by(|&a, &b| d.name(a).cmp(d.name(b)));
    let node_mean = stats::mean(&rows.iter().map(|&r| target[r]).collect::<Vec<_>>());
    let mut best: Option<(usize, f64)> = None;
    let mut xs: Vec<f64> = Vec::with_capacity(rows.len());
    let mut ys: Vec<f64> = Vec::with_capacity(rows.len());
    for &j in &order {
        let col = d.column(j);
        xs.clear();
        ys.clear();
        for &r in rows {
            let v = col[r];
            if !v.is_nan() {
                xs.push(v);
                ys.push(target[r]);
            }
        }
        let mut distinct = xs.clone();
        distinct.sort_unstable_by(f64::total_cmp);
        distinct.dedup();
        if distinct.len() < 2 {
            continue;
        }
        let p = match test {
            SelectionTest::CurvatureChiSquare => {
                let resid: Vec<f64> = ys.iter().map(|y| y - node_mean).collect();
                curvature_test_p(&xs, &resid, d.kind(j))
            }
            SelectionTest::SlopeT => match d.kind(j) {
                CovariateKind::Continuous | CovariateKind::Binary => {
                    stats::slope_test_p(&xs, &ys)
                }
                CovariateKind::Categorical { levels } => {
                    let codes: Vec<u32> = xs.iter().map(|v| *v as u32).collect();
                    stats::oneway_f_p(&codes, &ys, levels)
                }
            },
        };
        if best.map_or(true, |(_, bp)| p < bp) {
            best = Some((j, p));
        }
    }
    best.ok_or(TreeError::NoAdmissibleVariable)
}

/// Univariate variable selection with the default test.
pub fn select_variable_guide(
    rows: &[usize],
    d: &Dataset,
    target: &[f64],
) -> Result<(usize, f64), TreeError> {
    select_variable_with(rows, d, target, SelectionTest::default())
}

/// Canonical evaluation of one candidate cut: one pass over the node rows
/// in index order, children SSE two-pass in that order. Returns `None` when
/// a child falls below `min_each`.
fn evaluate_cut(
    rows: &[usize],
    col: &[f64],
    cut: &CutKind,
    target: &[f64],
    min_each: usize,
    left_buf: &mut Vec<f64>,
    right_buf: &mut Vec<f64>,
) -> Option<(f64, usize, usize)> {
    left_buf.clear();
    right_buf.clear();
    for &r in rows {
        if cut.goes_left(col[r]) {
            left_buf.push(target[r]);
        } else {
            right_buf.push(target[r]);
        }
    }
    if left_buf.len() < min_each.max(1) || right_buf.len() < min_each.max(1) {
        return None;
    }
    let total = stats::sse(left_buf) + stats::sse(right_buf);
    Some((total, left_buf.len(), right_buf.len()))
}

/// All candidate cuts for a variable, in deterministic order: ascending
/// midpoints for numeric columns; for categorical columns, growing prefixes
/// of the levels sorted by level-mean of the target (ties by level id).
pub(crate) fn candidate_cuts(rows: &[usize], d: &Dataset, var: usize, target: &[f64]) -> Vec<CutKind> {
    let col = d.column(var);
    match d.kind(var) {
        CovariateKind::Continuous | CovariateKind::Binary => {
            let mut values: Vec<f64> = rows
                .iter()
                .map(|&r| col[r])
                .filter(|v| !v.is_nan())
                .collect();
            values.sort_unstable_by(f64::total_cmp);
            values.dedup();
            values
                .windows(2)
                .map(|w| CutKind::Threshold(0.5 * (w[0] + w[1])))
                .collect()
        }
        CovariateKind::Categorical { levels } => {
            let mut sum = vec![0.0f64; levels as usize];
            let mut count = vec![0usize; levels as usize];
            for &r in rows {
                let v = col[r];
                if !v.is_nan() {
                    sum[v as usize] += target[r];
                    count[v as usize] += 1;
                }
            }
            let mut observed: Vec<(f64, u32)> = (0..levels)
                .filter(|&l| count[l as usize] > 0)
                .map(|l| (sum[l as usize] / count[l as usize] as f64, l))
                .collect();
            observed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut cuts = Vec::new();
            let mut set = BTreeSet::new();
            for k in 0..observed.len().saturating_sub(1) {
                set.insert(observed[k].1);
                cuts.push(CutKind::Levels(set.clone()));
            }
            cuts
        }
    }
}

fn find_split_with_min(
    rows: &[usize],
    d: &Dataset,
    var: usize,
    target: &[f64],
    min_each: usize,
) -> Option<CutResult> {
    let col = d.column(var);
    let cuts = candidate_cuts(rows, d, var, target);
    let mut left_buf = Vec::with_capacity(rows.len());
    let mut right_buf = Vec::with_capacity(rows.len());
    let mut best: Option<CutResult> = None;
    for cut in cuts {
        if let Some((sse, n_left, n_right)) =
            evaluate_cut(rows, col, &cut, target, min_each, &mut left_buf, &mut right_buf)
        {
            if best.as_ref().map_or(true, |b| sse < b.sse) {
                best = Some(CutResult {
                    cut,
                    sse,
                    n_left,
                    n_right,
                });
            }
        }
    }
    best
}

/// SSE-minimizing cutpoint on one variable, over all midpoints between
/// consecutive distinct values (ties resolve to the smallest cut).
pub fn find_split_value(
    rows: &[usize],
    d: &Dataset,
    var: usize,
    target: &[f64],
) -> Option<CutResult> {
    find_split_with_min(rows, d, var, target, 0)
}

fn select_split_cart_with_min(
    rows: &[usize],
    d: &Dataset,
    target: &[f64],
    min_each: usize,
) -> Option<(usize, CutResult)> {
    let mut order: Vec<usize> = (0..d.p()).collect();
    order.sort_by(|&a, &b| d.name(a).cmp(d.name(b)));
    let mut best: Option<(usize, CutResult)> = None;
    for &j in &order {
        if let Some(res) = find_split_with_min(rows, d, j, target, min_each) {
            if best.as_ref().map_or(true, |(_, b)| res.sse < b.sse) {
                best = Some((j, res));
            }
        }
    }
    best
}

/// Joint exhaustive minimization of child SSE over every (variable, cut)
/// pair; the returned p-value is a Welch two-sample test between the child
/// targets, used only for the stopping rule.
pub fn select_split_cart(
    rows: &[usize],
    d: &Dataset,
    target: &[f64],
) -> Option<(usize, CutResult, f64)> {
    select_split_cart_with_min(rows, d, target, 0).map(|(var, res)| {
        let p = welch_p_at_cut(rows, d, var, &res.cut, target);
        (var, res, p)
    })
}

fn welch_p_at_cut(rows: &[usize], d: &Dataset, var: usize, cut: &CutKind, target: &[f64]) -> f64 {
    let col = d.column(var);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &r in rows {
        if cut.goes_left(col[r]) {
            left.push(target[r]);
        } else {
            right.push(target[r]);
        }
    }
    stats::welch_test_p(&left, &right)
}

/// One accepted or offered split during growth.
#[derive(Debug, Clone)]
pub struct ChosenSplit {
    pub var: usize,
    pub p_value: f64,
    pub cut: CutKind,
    pub sse: f64,
}

/// Node-level model driving growth: how to pick a split and what a leaf
/// reports. Implementations exist for the two ITE policies here and for the
/// outcome-interaction comparator in `methods`.
pub trait SplitFinder {
    /// Best admissible split for the node, with both children at least
    /// `min_each` rows; `None` when the node cannot split.
    fn choose(&self, rows: &[usize], d: &Dataset, min_each: usize) -> Option<ChosenSplit>;

    /// The value a leaf reports (for ITE trees, the mean ITE).
    fn leaf_value(&self, rows: &[usize], d: &Dataset) -> f64;
}

/// Unbiased two-stage finder over a target vector.
pub struct GuideIteFinder<'a> {
    pub target: &'a [f64],
    pub test: SelectionTest,
}

impl SplitFinder for GuideIteFinder<'_> {
    fn choose(&self, rows: &[usize], d: &Dataset, min_each: usize) -> Option<ChosenSplit> {
        let (var, p_value) = select_variable_with(rows, d, self.target, self.test).ok()?;
        let res = find_split_with_min(rows, d, var, self.target, min_each)?;
        Some(ChosenSplit {
            var,
            p_value,
            cut: res.cut,
            sse: res.sse,
        })
    }

    fn leaf_value(&self, rows: &[usize], d: &Dataset) -> f64 {
        let _ = d;
        stats::mean(&rows.iter().map(|&r| self.target[r]).collect::<Vec<_>>())
    }
}

/// Exhaustive joint finder over a target vector.
pub struct CartIteFinder<'a> {
    pub target: &'a [f64],
}

impl SplitFinder for CartIteFinder<'_> {
    fn choose(&self, rows: &[usize], d: &Dataset, min_each: usize) -> Option<ChosenSplit> {
        let (var, res) = select_split_cart_with_min(rows, d, self.target, min_each)?;
        let p_value = welch_p_at_cut(rows, d, var, &res.cut, self.target);
        Some(ChosenSplit {
            var,
            p_value,
            cut: res.cut,
            sse: res.sse,
        })
    }

    fn leaf_value(&self, rows: &[usize], d: &Dataset) -> f64 {
        let _ = d;
        stats::mean(&rows.iter().map(|&r| self.target[r]).collect::<Vec<_>>())
    }
}

/// Split stored on an internal node.
#[derive(Debug, Clone)]
pub struct SplitInfo {
    pub var: usize,
    pub var_name: String,
    pub cut: CutKind,
    pub left: usize,
    pub right: usize,
}

/// One node of a fitted tree.
#[derive(Debug, Clone)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub rows: Vec<usize>,
    /// Leaf statistic (mean target for ITE trees).
    pub value: f64,
    /// Selection p-value computed at this node, if selection ran.
    pub p_value: Option<f64>,
    pub split: Option<SplitInfo>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.split.is_none()
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }
}

/// A fitted partition of the rows. Nodes are stored in breadth-first order,
/// so `id + 1` matches the conventional numbered-circle rendering (root 1,
/// its children 2 and 3, ...).
#[derive(Debug, Clone)]
pub struct Tree {
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        self.nodes.iter().filter(|n| n.is_leaf()).collect()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn has_split(&self) -> bool {
        self.nodes.len() > 1
    }

    /// Path conditions from the root to a node, in root-to-leaf order.
    pub fn signature_of(&self, node_id: usize) -> Signature {
        let mut chain = Vec::new();
        let mut at = node_id;
        while let Some(parent) = self.nodes[at].parent {
            let split = self.nodes[parent].split.as_ref().expect("parent splits");
            let is_left = split.left == at;
            let op = match (&split.cut, is_left) {
                (CutKind::Threshold(c), true) => ConditionOp::Le { threshold: *c },
                (CutKind::Threshold(c), false) => ConditionOp::Gt { threshold: *c },
                (CutKind::Levels(s), true) => ConditionOp::In { levels: s.clone() },
                (CutKind::Levels(s), false) => ConditionOp::NotIn { levels: s.clone() },
            };
            chain.push(SplitCondition {
                variable: split.var_name.clone(),
                op,
            });
            at = parent;
        }
        chain.reverse();
        Signature { conditions: chain }
    }

    /// Indented text rendering with numbered nodes, per-node size and value.
    pub fn render_text(&self, value_label: &str) -> String {
        let mut out = String::new();
        self.render_node(0, 0, value_label, &mut out);
        out
    }

    fn render_node(&self, id: usize, indent: usize, value_label: &str, out: &mut String) {
        let node = &self.nodes[id];
        let pad = "  ".repeat(indent);
        let p = node
            .p_value
            .map(|p| format!(", p = {p:.4}"))
            .unwrap_or_default();
        out.push_str(&format!(
            "{pad}node {}: n = {}, {value_label} = {:.4}{p}\n",
            node.id + 1,
            node.n(),
            node.value
        ));
        if let Some(split) = &node.split {
            let (left_cond, right_cond) = match &split.cut {
                CutKind::Threshold(c) => (
                    format!("{} <= {}", split.var_name, c),
                    format!("{} > {}", split.var_name, c),
                ),
                CutKind::Levels(s) => {
                    let ls: Vec<String> = s.iter().map(|l| l.to_string()).collect();
                    (
                        format!("{} in {{{}}}", split.var_name, ls.join(",")),
                        format!("{} not in {{{}}}", split.var_name, ls.join(",")),
                    )
                }
            };
            out.push_str(&format!(
                "{pad}  [{left_cond} -> node {}]\n",
                self.nodes[split.left].id + 1
            ));
            self.render_node(split.left, indent + 1, value_label, out);
            out.push_str(&format!(
                "{pad}  [{right_cond} -> node {}]\n",
                self.nodes[split.right].id + 1
            ));
            self.render_node(split.right, indent + 1, value_label, out);
        }
    }

    /// JSON rendering: nodes with rules, leaf statistics, and p-values.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct NodeView<'a> {
            id: usize,
            parent: Option<usize>,
            depth: usize,
            n: usize,
            value: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            p_value: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            split: Option<SplitView<'a>>,
        }
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct SplitView<'a> {
            variable: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            threshold: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            levels: Option<&'a BTreeSet<u32>>,
            left: usize,
            right: usize,
        }
        let views: Vec<NodeView> = self
            .nodes
            .iter()
            .map(|n| NodeView {
                id: n.id + 1,
                parent: n.parent.map(|p| p + 1),
                depth: n.depth,
                n: n.n(),
                value: n.value,
                p_value: n.p_value,
                split: n.split.as_ref().map(|s| SplitView {
                    variable: &s.var_name,
                    threshold: s.cut.threshold(),
                    levels: match &s.cut {
                        CutKind::Levels(set) => Some(set),
                        CutKind::Threshold(_) => None,
                    },
                    left: s.left + 1,
                    right: s.right + 1,
                }),
            })
            .collect();
        serde_json::to_string_pretty(&views).expect("tree serializes")
    }
}

/// Grow a tree over `rows` with the given finder and stopping rule.
///
/// A node splits only when (i) an admissible split exists with both children
/// at least `min_node` rows, and (ii) its selection p-value is <= theta.
/// Growth is breadth-first, so node ids follow the conventional numbering.
pub fn grow_tree_with<F: SplitFinder>(
    d: &Dataset,
    rows: Vec<usize>,
    finder: &F,
    stop: &StopRule,
) -> Tree {
    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    nodes.push(TreeNode {
        id: 0,
        parent: None,
        depth: 0,
        value: finder.leaf_value(&rows, d),
        rows,
        p_value: None,
        split: None,
    });
    queue.push_back(0);

    while let Some(id) = queue.pop_front() {
        let depth = nodes[id].depth;
        if depth >= stop.max_depth || nodes[id].rows.len() < 2 * stop.min_node {
            continue;
        }
        let chosen = match finder.choose(&nodes[id].rows, d, stop.min_node) {
            Some(c) => c,
            None => continue,
        };
        nodes[id].p_value = Some(chosen.p_value);
        if chosen.p_value > stop.theta {
            continue;
        }
        let col = d.column(chosen.var);
        let mut left_rows = Vec::new();
        let mut right_rows = Vec::new();
        for &r in &nodes[id].rows {
            if chosen.cut.goes_left(col[r]) {
                left_rows.push(r);
            } else {
                right_rows.push(r);
            }
        }
        debug_assert!(left_rows.len() >= stop.min_node && right_rows.len() >= stop.min_node);
        let left_id = nodes.len();
        nodes.push(TreeNode {
            id: left_id,
            parent: Some(id),
            depth: depth + 1,
            value: finder.leaf_value(&left_rows, d),
            rows: left_rows,
            p_value: None,
            split: None,
        });
        let right_id = nodes.len();
        nodes.push(TreeNode {
            id: right_id,
            parent: Some(id),
            depth: depth + 1,
            value: finder.leaf_value(&right_rows, d),
            rows: right_rows,
            p_value: None,
            split: None,
        });
        nodes[id].split = Some(SplitInfo {
            var: chosen.var,
            var_name: d.name(chosen.var).to_string(),
            cut: chosen.cut,
            left: left_id,
            right: right_id,
        });
        queue.push_back(left_id);
        queue.push_back(right_id);
    }

    Tree { nodes }
}

/// Grow an ITE tree over all rows under the given policy.
pub fn grow_tree(d: &Dataset, target: &[f64], policy: &SplitPolicy) -> Tree {
    assert_eq!(d.n(), target.len());
    let rows: Vec<usize> = (0..d.n()).collect();
    match policy.kind {
        SplitPolicyKind::GuideUnbiased => grow_tree_with(
            d,
            rows,
            &GuideIteFinder {
                target,
                test: policy.selection,
            },
            &policy.stop,
        ),
        SplitPolicyKind::CartExhaustive => {
            grow_tree_with(d, rows, &CartIteFinder { target }, &policy.stop)
        }
    }
}

/// Which leaf a signature describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafSelector {
    /// The leaf with the largest value (ties: smallest node id).
    LargestValue,
    /// A specific node id.
    Node(usize),
}

/// The root-to-leaf signature of the selected leaf. A single-leaf tree has
/// no subgroup: the result is the empty signature.
pub fn extract_signature(tree: &Tree, selector: LeafSelector) -> Signature {
    if !tree.has_split() {
        return Signature::default();
    }
    let leaf = match selector {
        LeafSelector::Node(id) => id,
        LeafSelector::LargestValue => {
            let mut best = None::<(f64, usize)>;
            for n in tree.leaves() {
                if best.map_or(true, |(v, _)| n.value > v) {
                    best = Some((n.value, n.id));
                }
            }
            best.expect("tree has leaves").1
        }
    };
    tree.signature_of(leaf)
}
