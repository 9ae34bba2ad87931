//! Monte Carlo comparison harness: Type I error, power, and conditional
//! true discovery rate across a split-threshold sweep.
//!
//! For every seed one alternative dataset and one null-twin dataset (same
//! scenario with the predictive effect removed) are generated, and each
//! method's root-node decision is recorded once. Identification at a
//! threshold is a pure function of that decision, so a single fit yields the
//! whole sweep. Rates are aligned across methods by their realized Type I
//! error, which is how the methods are compared fairly: at equal Type I
//! error, who has more power and a higher conditional true discovery rate.

use rayon::prelude::*;
use serde::Serialize;

use crate::methods::{ite_for, root_analysis_from_ite, Method, MethodConfig, RootAnalysis};
use crate::rng::{StreamKind, Streams};
use crate::sim::Scenario;
use crate::stats;

/// `k` log-spaced thresholds in `[1e-4, 1]`.
pub fn theta_grid(k: usize) -> Vec<f64> {
    assert!(k >= 2);
    (0..k)
        .map(|i| {
            let frac = i as f64 / (k - 1) as f64;
            10f64.powf(-4.0 * (1.0 - frac))
        })
        .collect()
}

/// Default sweep: 50 log-spaced thresholds in `[1e-4, 1]`.
pub fn default_theta_grid() -> Vec<f64> {
    theta_grid(50)
}

/// One method's root decision on one generated dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub method: Method,
    pub scenario: String,
    pub seed_index: u64,
    pub is_null: bool,
    pub root: RootAnalysis,
    /// Name of the true predictive column, when the scenario has one.
    pub pred_name: Option<String>,
    /// The realized true cut `x_0`.
    pub true_cut: f64,
}

impl TrialOutcome {
    pub fn identified_at(&self, theta: f64) -> bool {
        self.root.identified_at(theta)
    }

    /// θ-indexed identification flags (nondecreasing in θ).
    pub fn flags(&self, grid: &[f64]) -> Vec<bool> {
        grid.iter().map(|&t| self.identified_at(t)).collect()
    }

    pub fn root_hits_pred(&self) -> bool {
        match (&self.root.variable, &self.pred_name) {
            (Some(v), Some(p)) => v == p,
            _ => false,
        }
    }
}

/// Run `iterations` paired (alternative, null-twin) trials of the given
/// methods. Deterministic given `seed0`; trials execute in parallel.
pub fn run_trials(
    scenario: &Scenario,
    methods: &[Method],
    iterations: usize,
    cfg: &MethodConfig,
    seed0: u64,
) -> Vec<TrialOutcome> {
    let null_scn = scenario.null_twin();
    let base = Streams::new(seed0);
    let per_trial: Vec<Vec<TrialOutcome>> = (0..iterations as u64)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::with_capacity(2 * methods.len());
            for (is_null, scn) in [(false, scenario), (true, &null_scn)] {
                let trial_seed = base.derive(StreamKind::Trial, 2 * i + u64::from(is_null)).seed();
                let (d, truth) = crate::sim::gen_scenario_dataset(scn, trial_seed);
                let dc = d.sorted_by_name();
                let pred_name = truth.pred_index.map(|j| d.name(j).to_string());
                let ite = methods
                    .iter()
                    .any(|m| m.uses_ite())
                    .then(|| ite_for(&dc, cfg, trial_seed));
                for &method in methods {
                    let root = match method {
                        Method::Gi => crate::methods::root_analysis_gi(&dc, &cfg.stop),
                        _ => root_analysis_from_ite(
                            &dc,
                            &ite.as_ref().expect("ite computed").values,
                            method,
                            cfg,
                        ),
                    };
                    out.push(TrialOutcome {
                        method,
                        scenario: scn.name.clone(),
                        seed_index: i,
                        is_null,
                        root,
                        pred_name: pred_name.clone(),
                        true_cut: truth.cut,
                    });
                }
            }
            out
        })
        .collect();
    per_trial.into_iter().flatten().collect()
}

/// Fraction of (null) trials identified at θ.
pub fn type1_error(null_outcomes: &[&TrialOutcome], theta: f64) -> f64 {
    rate(null_outcomes, theta)
}

/// Fraction of (alternative) trials identified at θ.
pub fn power(alt_outcomes: &[&TrialOutcome], theta: f64) -> f64 {
    rate(alt_outcomes, theta)
}

fn rate(outcomes: &[&TrialOutcome], theta: f64) -> f64 {
    if outcomes.is_empty() {
        return f64::NAN;
    }
    outcomes.iter().filter(|o| o.identified_at(theta)).count() as f64 / outcomes.len() as f64
}

/// Among identified alternative trials at θ, the fraction whose root split
/// variable is the true predictive variable. `None` when nothing was
/// identified (undefined, not zero).
pub fn conditional_tdr(alt_outcomes: &[&TrialOutcome], theta: f64) -> Option<f64> {
    let identified: Vec<_> = alt_outcomes
        .iter()
        .filter(|o| o.identified_at(theta))
        .collect();
    if identified.is_empty() {
        return None;
    }
    Some(identified.iter().filter(|o| o.root_hits_pred()).count() as f64 / identified.len() as f64)
}

/// One sweep point of a metrics curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePoint {
    pub theta: f64,
    pub type1: f64,
    pub type1_se: f64,
    pub power: f64,
    pub power_se: f64,
    pub tdr: Option<f64>,
    pub tdr_se: Option<f64>,
    pub n_null: usize,
    pub n_alt: usize,
    pub n_identified: usize,
}

/// Threshold-swept (Type I error, power, conditional TDR) triples for one
/// method on one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsCurve {
    pub method: Method,
    pub scenario: String,
    pub points: Vec<CurvePoint>,
}

/// Build per-method curves from a batch of trial outcomes.
pub fn build_curves(outcomes: &[TrialOutcome], grid: &[f64]) -> Vec<MetricsCurve> {
    let mut keys: Vec<(Method, String)> = Vec::new();
    for o in outcomes {
        let key = (o.method, base_scenario(&o.scenario));
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.iter()
        .map(|(method, scenario)| {
            let null: Vec<&TrialOutcome> = outcomes
                .iter()
                .filter(|o| o.method == *method && o.is_null && base_scenario(&o.scenario) == *scenario)
                .collect();
            let alt: Vec<&TrialOutcome> = outcomes
                .iter()
                .filter(|o| o.method == *method && !o.is_null && base_scenario(&o.scenario) == *scenario)
                .collect();
            let points = grid
                .iter()
                .map(|&theta| {
                    let t1 = type1_error(&null, theta);
                    let pw = power(&alt, theta);
                    let n_identified = alt.iter().filter(|o| o.identified_at(theta)).count();
                    let tdr = conditional_tdr(&alt, theta);
                    CurvePoint {
                        theta,
                        type1: t1,
                        type1_se: stats::binomial_se(t1, null.len()),
                        power: pw,
                        power_se: stats::binomial_se(pw, alt.len()),
                        tdr,
                        tdr_se: tdr.map(|r| stats::binomial_se(r, n_identified)),
                        n_null: null.len(),
                        n_alt: alt.len(),
                        n_identified,
                    }
                })
                .collect();
            MetricsCurve {
                method: *method,
                scenario: scenario.clone(),
                points,
            }
        })
        .collect()
}

fn base_scenario(name: &str) -> String {
    name.strip_suffix("-null").unwrap_or(name).to_string()
}

/// Power/TDR of one method read off its curve at a target realized Type I
/// error, by linear interpolation along the curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MatchedPoint {
    pub method: Method,
    pub scenario: String,
    pub target_type1: f64,
    pub power: f64,
    pub power_se: f64,
    pub tdr: Option<f64>,
    pub tdr_se: Option<f64>,
    /// Set when the target Type I error lies outside the realized range.
    pub extrapolated: bool,
}

/// Interpolate one curve at a target Type I error level.
pub fn matched_at(curve: &MetricsCurve, target_type1: f64) -> MatchedPoint {
    let pts = &curve.points;
    let n_alt = pts.first().map_or(0, |p| p.n_alt);
    let make = |power: f64, tdr: Option<f64>, n_id: usize, extrapolated: bool| MatchedPoint {
        method: curve.method,
        scenario: curve.scenario.clone(),
        target_type1,
        power,
        power_se: stats::binomial_se(power, n_alt),
        tdr,
        tdr_se: tdr.map(|r| stats::binomial_se(r, n_id.max(1))),
        extrapolated,
    };
    // first sweep point at or above the target
    let k = match pts.iter().position(|p| p.type1 >= target_type1) {
        Some(k) => k,
        None => {
            let last = pts.last().expect("curve has points");
            return make(last.power, last.tdr, last.n_identified, true);
        }
    };
    if k == 0 {
        // interpolate from the origin: rates vanish as theta -> 0
        let p0 = &pts[0];
        if p0.type1 <= 0.0 {
            return make(p0.power, p0.tdr, p0.n_identified, false);
        }
        let w = target_type1 / p0.type1;
        return make(w * p0.power, p0.tdr, p0.n_identified, false);
    }
    let (a, b) = (&pts[k - 1], &pts[k]);
    if b.type1 <= a.type1 {
        return make(b.power, b.tdr, b.n_identified, false);
    }
    let w = (target_type1 - a.type1) / (b.type1 - a.type1);
    let power = a.power + w * (b.power - a.power);
    let tdr = match (a.tdr, b.tdr) {
        (Some(x), Some(y)) => Some(x + w * (y - x)),
        (None, y) => y,
        (x, None) => x,
    };
    let n_id = ((a.n_identified as f64) + w * (b.n_identified as f64 - a.n_identified as f64))
        .round() as usize;
    make(power, tdr, n_id, false)
}

/// Aligned comparison of every curve at the query Type I levels.
pub fn matched_comparison(curves: &[MetricsCurve], levels: &[f64]) -> Vec<MatchedPoint> {
    let mut rows = Vec::new();
    for &level in levels {
        for curve in curves {
            rows.push(matched_at(curve, level));
        }
    }
    rows
}

/// Curves as CSV: one row per (scenario, method, theta).
pub fn curves_to_csv(curves: &[MetricsCurve]) -> String {
    let mut out = String::from(
        "scenario,method,theta,type1,type1_se,power,power_se,tdr,tdr_se,n_null,n_alt,n_identified\n",
    );
    for c in curves {
        for p in &c.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                c.scenario,
                c.method,
                p.theta,
                p.type1,
                p.type1_se,
                p.power,
                p.power_se,
                p.tdr.map(|v| v.to_string()).unwrap_or_default(),
                p.tdr_se.map(|v| v.to_string()).unwrap_or_default(),
                p.n_null,
                p.n_alt,
                p.n_identified,
            ));
        }
    }
    out
}

/// Matched-comparison table as Markdown.
pub fn matched_to_markdown(rows: &[MatchedPoint]) -> String {
    let mut out = String::from(
        "| scenario | type I error | method | power (se) | conditional TDR (se) |\n\
         |---|---|---|---|---|\n",
    );
    for r in rows {
        let tdr = match (r.tdr, r.tdr_se) {
            (Some(v), Some(se)) => format!("{v:.3} ({se:.3})"),
            _ => "undefined".to_string(),
        };
        let flag = if r.extrapolated { " *extrapolated*" } else { "" };
        out.push_str(&format!(
            "| {} | {:.2} | {} | {:.3} ({:.3}) | {} |{flag}\n",
            r.scenario, r.target_type1, r.method, r.power, r.power_se, tdr
        ));
    }
    out
}
