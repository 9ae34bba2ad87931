//! Counterfactual response estimation and individual treatment effects.
//!
//! A nonparametric model is trained on the observed (weight-1) rows of the
//! stacked design, with the treatment indicator and both interaction blocks
//! supplied as explicit features. Predicting the same covariates under the
//! flipped treatment yields each patient's counterfactual response `y'`, and
//! the per-patient treatment effect is `y - y'` for treated patients and
//! `y' - y` for controls — treatment-minus-control in both arms.

use serde::Serialize;
use thiserror::Error;

use crate::data::{stack_counterfactual, Dataset, ResponseKind};
use crate::forest::{fit_forest, Forest, ForestParams, RegressionTree, TreeParams};
use crate::rng::{StreamKind, Streams};

#[derive(Debug, Error)]
pub enum CounterfactualError {
    #[error("covariate schema mismatch: model was trained on different columns")]
    SchemaMismatch,
}

/// Anything that can predict the response of every row of a dataset under an
/// arbitrary treatment assignment. Implemented by fitted models and, in
/// tests, by the noiseless generating law itself.
pub trait OutcomePredictor: Send + Sync {
    fn predict_at(&self, d: &Dataset, treatment: &[u8])
        -> Result<Vec<f64>, CounterfactualError>;
}

/// Model family for the counterfactual fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Backend {
    /// Bagged regression forest (the default).
    Forest,
    /// One unbagged regression tree over all features; used for oracle
    /// checks and as the fast path inside bootstrap loops.
    SingleTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterfactualConfig {
    pub backend: Backend,
    pub n_trees: usize,
    /// Features tried per split; `None` means `ceil(sqrt(3p + 1))`.
    pub mtry: Option<usize>,
    pub min_leaf: usize,
    pub max_depth: usize,
    /// Also compute out-of-bag and training-error metadata (costs extra
    /// prediction passes).
    pub compute_error_metrics: bool,
}

impl Default for CounterfactualConfig {
    fn default() -> Self {
        CounterfactualConfig {
            backend: Backend::Forest,
            n_trees: 500,
            mtry: None,
            min_leaf: 5,
            max_depth: 64,
            compute_error_metrics: false,
        }
    }
}

impl CounterfactualConfig {
    pub fn single_tree() -> Self {
        CounterfactualConfig {
            backend: Backend::SingleTree,
            ..Default::default()
        }
    }

    fn resolve_mtry(&self, p: usize) -> usize {
        self.mtry
            .unwrap_or_else(|| ((3 * p + 1) as f64).sqrt().ceil() as usize)
    }
}

#[derive(Debug, Clone)]
enum ModelKind {
    /// Degenerate response: every prediction is this constant.
    Constant(f64),
    Forest(Forest),
    Tree(RegressionTree),
}

/// Fit metadata exported with the model summary.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelMetadata {
    /// Set when the training response was constant.
    pub constant_response: Option<f64>,
    pub oob_mse: Option<f64>,
    pub train_mse: Option<f64>,
}

/// A fitted counterfactual model over the stacked feature space.
#[derive(Debug, Clone)]
pub struct CounterfactualModel {
    kind: ModelKind,
    covariate_names: Vec<String>,
    response_kind: ResponseKind,
    pub config: CounterfactualConfig,
    pub seed: u64,
    pub metadata: ModelMetadata,
}

/// Learner feature columns for a dataset under a given treatment vector:
/// `[t, x.., t*x.., (1-t)*x..]`, matching the stacked-design layout.
fn feature_columns_for(d: &Dataset, treatment: &[u8]) -> Vec<Vec<f64>> {
    let p = d.p();
    let t: Vec<f64> = treatment.iter().map(|&v| f64::from(v)).collect();
    let mut cols = Vec::with_capacity(3 * p + 1);
    cols.push(t.clone());
    for j in 0..p {
        cols.push(d.column(j).to_vec());
    }
    for j in 0..p {
        cols.push(d.column(j).iter().zip(&t).map(|(x, tv)| x * tv).collect());
    }
    for j in 0..p {
        cols.push(
            d.column(j)
                .iter()
                .zip(&t)
                .map(|(x, tv)| x * (1.0 - tv))
                .collect(),
        );
    }
    cols
}

/// Fit the counterfactual model for a dataset.
///
/// Training uses only the observed (fit-weight 1) rows of the stacked
/// design; the counterfactual rows are scored, never fitted. Deterministic
/// given `(dataset, config, seed)`.
pub fn fit_counterfactual(
    d: &Dataset,
    cfg: &CounterfactualConfig,
    seed: u64,
) -> CounterfactualModel {
    let n = d.n();
    let y = d.response();
    let constant = y.iter().all(|v| *v == y[0]).then(|| y[0]);

    let mut metadata = ModelMetadata {
        constant_response: constant,
        oob_mse: None,
        train_mse: None,
    };

    let kind = if let Some(c) = constant {
        ModelKind::Constant(c)
    } else {
        let design = stack_counterfactual(d);
        let cols = design.feature_columns();
        let train_rows: Vec<u32> = (0..n as u32).collect();
        let streams = Streams::new(seed);
        let tree_params = TreeParams {
            mtry: cfg.resolve_mtry(d.p()),
            min_leaf: cfg.min_leaf,
            max_depth: cfg.max_depth,
        };
        match cfg.backend {
            Backend::Forest => {
                let forest = fit_forest(
                    &cols,
                    &design.y_observed,
                    &train_rows,
                    &ForestParams {
                        n_trees: cfg.n_trees,
                        tree: tree_params,
                        compute_oob: cfg.compute_error_metrics,
                    },
                    &streams,
                );
                metadata.oob_mse = forest.oob_mse;
                if cfg.compute_error_metrics {
                    let fitted = forest.predict_rows(&cols, 0..n);
                    metadata.train_mse = Some(
                        fitted
                            .iter()
                            .zip(y)
                            .map(|(f, yv)| (yv - f) * (yv - f))
                            .sum::<f64>()
                            / n as f64,
                    );
                }
                ModelKind::Forest(forest)
            }
            Backend::SingleTree => {
                let tree = RegressionTree::fit(
                    &cols,
                    &design.y_observed,
                    &train_rows,
                    TreeParams {
                        mtry: 0,
                        ..tree_params
                    },
                    &mut streams.rng(StreamKind::Tree, 0),
                );
                if cfg.compute_error_metrics {
                    let train: f64 = (0..n)
                        .map(|i| {
                            let r = y[i] - tree.predict_row(&cols, i);
                            r * r
                        })
                        .sum();
                    metadata.train_mse = Some(train / n as f64);
                }
                ModelKind::Tree(tree)
            }
        }
    };

    CounterfactualModel {
        kind,
        covariate_names: d.names().to_vec(),
        response_kind: d.response_kind(),
        config: *cfg,
        seed,
        metadata,
    }
}

impl CounterfactualModel {
    pub fn backend(&self) -> Backend {
        self.config.backend
    }

    /// JSON model summary: backend, config, seed, error metrics.
    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Summary<'a> {
            backend: Backend,
            config: &'a CounterfactualConfig,
            seed: u64,
            metadata: &'a ModelMetadata,
            covariates: &'a [String],
        }
        serde_json::to_string_pretty(&Summary {
            backend: self.config.backend,
            config: &self.config,
            seed: self.seed,
            metadata: &self.metadata,
            covariates: &self.covariate_names,
        })
        .expect("summary serializes")
    }
}

impl OutcomePredictor for CounterfactualModel {
    fn predict_at(
        &self,
        d: &Dataset,
        treatment: &[u8],
    ) -> Result<Vec<f64>, CounterfactualError> {
        if d.names() != self.covariate_names.as_slice() {
            return Err(CounterfactualError::SchemaMismatch);
        }
        let preds = match &self.kind {
            ModelKind::Constant(c) => vec![*c; d.n()],
            ModelKind::Forest(f) => {
                let cols = feature_columns_for(d, treatment);
                f.predict_rows(&cols, 0..d.n())
            }
            ModelKind::Tree(t) => {
                let cols = feature_columns_for(d, treatment);
                (0..d.n()).map(|i| t.predict_row(&cols, i)).collect()
            }
        };
        Ok(match self.response_kind {
            ResponseKind::Continuous => preds,
            ResponseKind::Binary => preds.into_iter().map(|v| v.clamp(0.0, 1.0)).collect(),
        })
    }
}

/// Counterfactual predictions: each patient scored at `1 - t_i` with
/// unchanged covariates.
pub fn predict_flipped(
    m: &dyn OutcomePredictor,
    d: &Dataset,
) -> Result<Vec<f64>, CounterfactualError> {
    let flipped: Vec<u8> = d.treatment().iter().map(|&t| 1 - t).collect();
    m.predict_at(d, &flipped)
}

/// Sign convention of an ITE vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum IteConvention {
    TreatmentMinusControl,
}

/// Per-patient individual treatment effects.
#[derive(Debug, Clone, PartialEq)]
pub struct IteVector {
    pub values: Vec<f64>,
    pub convention: IteConvention,
}

/// `ite_i = y_i - y'_i` for treated patients and `y'_i - y_i` for controls.
pub fn compute_ite(d: &Dataset, y_flipped: &[f64]) -> IteVector {
    assert_eq!(d.n(), y_flipped.len());
    let values = (0..d.n())
        .map(|i| {
            let y = d.response()[i];
            if d.treatment()[i] == 1 {
                y - y_flipped[i]
            } else {
                y_flipped[i] - y
            }
        })
        .collect();
    IteVector {
        values,
        convention: IteConvention::TreatmentMinusControl,
    }
}

/// Convenience: fit, predict flipped, and compute the ITE vector.
pub fn estimate_ite(
    d: &Dataset,
    cfg: &CounterfactualConfig,
    seed: u64,
) -> (CounterfactualModel, IteVector) {
    let model = fit_counterfactual(d, cfg, seed);
    let flipped = predict_flipped(&model, d).expect("model predicts its own schema");
    let ite = compute_ite(d, &flipped);
    (model, ite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::CovariateKind;
    use crate::sim::{gen_scenario_dataset, OracleLaw, Scenario};

    fn small_dataset() -> Dataset {
        // two covariate clusters, outcome depends on (cluster, arm)
        let n = 24;
        let mut x = Vec::new();
        let mut t = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let cluster = if i < n / 2 { 0.0 } else { 10.0 };
            let arm = (i % 2) as u8;
            x.push(cluster);
            t.push(arm);
            y.push(cluster * 0.1 + f64::from(arm) * 2.0);
        }
        Dataset::new(
            y,
            ResponseKind::Continuous,
            t,
            vec![x],
            vec![CovariateKind::Continuous],
            vec!["X1".into()],
        )
        .unwrap()
    }

    #[test]
    fn ite_formula() {
        let d = Dataset::new(
            vec![1.0, 0.0],
            ResponseKind::Continuous,
            vec![1, 0],
            vec![vec![0.0, 1.0]],
            vec![CovariateKind::Continuous],
            vec!["X1".into()],
        )
        .unwrap();
        let ite = compute_ite(&d, &[0.0, 1.0]);
        // treated: y - y' = 1; control: y' - y = 1
        assert_eq!(ite.values, vec![1.0, 1.0]);
    }

    #[test]
    fn constant_response_gives_zero_ite() {
        let d = Dataset::new(
            vec![3.0; 10],
            ResponseKind::Continuous,
            vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
            vec![(0..10).map(|i| i as f64).collect()],
            vec![CovariateKind::Continuous],
            vec!["X1".into()],
        )
        .unwrap();
        let (model, ite) = estimate_ite(&d, &CounterfactualConfig::default(), 1);
        assert_eq!(model.metadata.constant_response, Some(3.0));
        assert!(ite.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_tree_twin_consistency() {
        // with identical covariates and opposite arms both patients map to
        // the same leaves, so A's flipped prediction equals B's fitted value
        let d = small_dataset();
        let model = fit_counterfactual(&d, &CounterfactualConfig::single_tree(), 0);
        let fitted = model.predict_at(&d, d.treatment()).unwrap();
        let flipped = predict_flipped(&model, &d).unwrap();
        for i in (0..d.n()).step_by(2) {
            // rows i (control) and i+1 (treated) share a covariate value
            assert!((flipped[i] - fitted[i + 1]).abs() < 1e-12);
            assert!((flipped[i + 1] - fitted[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_tree_observed_row_fidelity() {
        let d = small_dataset();
        let model = fit_counterfactual(&d, &CounterfactualConfig::single_tree(), 0);
        let fitted = model.predict_at(&d, d.treatment()).unwrap();
        // exact recovery is possible here, so fitted values equal responses
        for i in 0..d.n() {
            assert!((fitted[i] - d.response()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_flipped_prediction_matches_plug_in() {
        let mut scn = Scenario::preset("no-prognostic").unwrap();
        scn.noise_variance = 0.0;
        let (d, truth) = gen_scenario_dataset(&scn, 5);
        let law = OracleLaw::from_scenario(&scn, &truth);
        let flipped = predict_flipped(&law, &d).unwrap();
        for i in 0..d.n() {
            let t_flip = 1.0 - f64::from(d.treatment()[i]);
            let expected = if truth.membership[i] {
                0.5 * t_flip + 0.2 * t_flip
            } else {
                0.2 * t_flip
            };
            assert!((flipped[i] - expected).abs() < 1e-12);
        }
        let ite = compute_ite(&d, &flipped);
        for i in 0..d.n() {
            let expected = if truth.membership[i] { 0.7 } else { 0.2 };
            assert!((ite.values[i] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_sign_flip_negates_ite() {
        let mut scn = Scenario::preset("mix-prognostic").unwrap();
        scn.noise_variance = 0.0;
        let (d, truth) = gen_scenario_dataset(&scn, 8);
        let law = OracleLaw::from_scenario(&scn, &truth);
        let neg_law = law.negated();
        let neg_y: Vec<f64> = d.response().iter().map(|y| -y).collect();
        let d_neg = Dataset::new(
            neg_y,
            d.response_kind(),
            d.treatment().to_vec(),
            (0..d.p()).map(|j| d.column(j).to_vec()).collect(),
            d.kinds().to_vec(),
            d.names().to_vec(),
        )
        .unwrap();
        let ite = compute_ite(&d, &predict_flipped(&law, &d).unwrap());
        let ite_neg = compute_ite(&d_neg, &predict_flipped(&neg_law, &d_neg).unwrap());
        for i in 0..d.n() {
            assert!((ite.values[i] + ite_neg.values[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn forest_oob_below_response_variance() {
        let (d, _) = gen_scenario_dataset(&Scenario::preset("no-prognostic").unwrap(), 13);
        let cfg = CounterfactualConfig {
            compute_error_metrics: true,
            ..Default::default()
        };
        let model = fit_counterfactual(&d, &cfg, 3);
        let oob = model.metadata.oob_mse.expect("oob computed");
        let var = crate::stats::variance(d.response());
        assert!(oob.is_finite());
        assert!(oob < var, "oob {oob} vs var {var}");
    }

    #[test]
    fn binary_response_bounds() {
        let mut scn = Scenario::preset("no-prognostic").unwrap();
        scn.response_kind = ResponseKind::Binary;
        scn.n = 200;
        let (d, _) = gen_scenario_dataset(&scn, 2);
        let cfg = CounterfactualConfig {
            n_trees: 50,
            ..Default::default()
        };
        let (model, ite) = estimate_ite(&d, &cfg, 9);
        let flipped = predict_flipped(&model, &d).unwrap();
        assert!(flipped.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert!(ite.values.iter().all(|&v| (-1.0..=1.0).contains(&v)));
    }

    #[test]
    fn determinism_same_seed_same_ite() {
        let (d, _) = gen_scenario_dataset(&Scenario::preset("no-prognostic").unwrap(), 30);
        let cfg = CounterfactualConfig {
            n_trees: 40,
            ..Default::default()
        };
        let (_, a) = estimate_ite(&d, &cfg, 7);
        let (_, b) = estimate_ite(&d, &cfg, 7);
        assert_eq!(
            a.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
        let (_, c) = estimate_ite(&d, &cfg, 8);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn schema_mismatch_detected() {
        let (d, _) = gen_scenario_dataset(&Scenario::preset("no-prognostic").unwrap(), 1);
        let model = fit_counterfactual(
            &d,
            &CounterfactualConfig {
                n_trees: 5,
                ..Default::default()
            },
            1,
        );
        let renamed = {
            let mut names: Vec<String> = d.names().to_vec();
            names[0] = "other".into();
            Dataset::new(
                d.response().to_vec(),
                d.response_kind(),
                d.treatment().to_vec(),
                (0..d.p()).map(|j| d.column(j).to_vec()).collect(),
                d.kinds().to_vec(),
                names,
            )
            .unwrap()
        };
        assert!(matches!(
            predict_flipped(&model, &renamed),
            Err(CounterfactualError::SchemaMismatch)
        ));
    }
}
