//! Seeded generators for the simulation scenarios: Bernoulli(0.5) treatment,
//! an equicorrelated Gaussian covariate block (unit variance, pairwise
//! correlation 0.5) with independent Beta-Bernoulli binary columns, and the
//! linear / logistic outcome models with one predictive and at most one
//! prognostic variable.
//!
//! Every draw comes from a keyed substream (see [`crate::rng`]), so a given
//! `(scenario, seed)` pair produces a bit-identical dataset on every run and
//! adding a column never disturbs the draws of the others.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::counterfactual::OutcomePredictor;
use crate::data::{CovariateKind, Dataset, ResponseKind};
use crate::rng::{StreamKind, Streams};

/// Count and kinds of the pure-noise covariates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NoiseSpec {
    pub continuous: usize,
    pub binary: usize,
}

impl NoiseSpec {
    pub fn count(&self) -> usize {
        self.continuous + self.binary
    }
}

/// A simulation scenario: effect sizes, covariate kinds, and sample size.
/// The subgroup cut `x_0` is always the realized sample mean of the
/// predictive column, so a binary predictive variable places the `1` level
/// inside the subgroup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub beta_pred: f64,
    pub beta_prog: f64,
    pub beta_trt: f64,
    #[serde(default)]
    pub pred_kind: Option<CovariateKind>,
    #[serde(default)]
    pub prog_kind: Option<CovariateKind>,
    pub noise: NoiseSpec,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_response_kind")]
    pub response_kind: ResponseKind,
    /// Variance of the additive noise in the continuous outcome model.
    #[serde(default = "default_noise_variance")]
    pub noise_variance: f64,
}

fn default_n() -> usize {
    400
}

fn default_response_kind() -> ResponseKind {
    ResponseKind::Continuous
}

fn default_noise_variance() -> f64 {
    0.25
}

impl Scenario {
    /// Named presets: `no-prognostic`, `no-prognostic-mix`, `mix-prognostic`.
    pub fn preset(name: &str) -> Option<Scenario> {
        match name {
            "no-prognostic" => Some(Scenario {
                name: name.into(),
                beta_pred: 0.5,
                beta_prog: 0.0,
                beta_trt: 0.2,
                pred_kind: Some(CovariateKind::Continuous),
                prog_kind: None,
                noise: NoiseSpec {
                    continuous: 13,
                    binary: 0,
                },
                n: 400,
                response_kind: ResponseKind::Continuous,
                noise_variance: 0.25,
            }),
            "no-prognostic-mix" => Some(Scenario {
                name: name.into(),
                beta_pred: 0.2,
                beta_prog: 0.0,
                beta_trt: 0.2,
                pred_kind: Some(CovariateKind::Binary),
                prog_kind: None,
                noise: NoiseSpec {
                    continuous: 12,
                    binary: 1,
                },
                n: 400,
                response_kind: ResponseKind::Continuous,
                noise_variance: 0.25,
            }),
            "mix-prognostic" => Some(Scenario {
                name: name.into(),
                beta_pred: 0.5,
                beta_prog: 0.5,
                beta_trt: 0.2,
                pred_kind: Some(CovariateKind::Continuous),
                prog_kind: Some(CovariateKind::Continuous),
                noise: NoiseSpec {
                    continuous: 13,
                    binary: 0,
                },
                n: 400,
                response_kind: ResponseKind::Continuous,
                noise_variance: 0.25,
            }),
            _ => None,
        }
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["no-prognostic", "no-prognostic-mix", "mix-prognostic"]
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n < 2 {
            return Err(format!("scenario n must be >= 2, got {}", self.n));
        }
        if self.prog_kind.is_none() && self.beta_prog != 0.0 {
            return Err("betaProg must be 0 when there is no prognostic variable".into());
        }
        if self.pred_kind.is_none() && self.beta_pred != 0.0 {
            return Err("betaPred must be 0 when there is no predictive variable".into());
        }
        if self.noise_variance < 0.0 {
            return Err("noiseVariance must be >= 0".into());
        }
        for k in [self.pred_kind, self.prog_kind].into_iter().flatten() {
            if k.is_categorical() {
                return Err("categorical covariates are not generated by scenarios".into());
            }
        }
        Ok(())
    }

    /// Total covariate count including the predictive/prognostic columns.
    pub fn p_total(&self) -> usize {
        self.noise.count()
            + usize::from(self.pred_kind.is_some())
            + usize::from(self.prog_kind.is_some())
    }

    /// The matching no-subgroup scenario: predictive effect removed, all
    /// other parameters (including prognostic and main treatment effects)
    /// retained.
    pub fn null_twin(&self) -> Scenario {
        Scenario {
            name: format!("{}-null", self.name),
            beta_pred: 0.0,
            ..self.clone()
        }
    }

    /// Covariate kinds in role order: predictive, prognostic, then noise
    /// (binary noise first).
    fn role_kinds(&self) -> Vec<CovariateKind> {
        let mut kinds = Vec::with_capacity(self.p_total());
        if let Some(k) = self.pred_kind {
            kinds.push(k);
        }
        if let Some(k) = self.prog_kind {
            kinds.push(k);
        }
        kinds.extend(std::iter::repeat(CovariateKind::Binary).take(self.noise.binary));
        kinds.extend(std::iter::repeat(CovariateKind::Continuous).take(self.noise.continuous));
        kinds
    }
}

/// Ground truth attached to a generated dataset. Indices refer to columns of
/// the emitted (shuffled) dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TruthLabels {
    pub pred_index: Option<usize>,
    pub prog_index: Option<usize>,
    /// The realized cut `x_0` (sample mean of the predictive column); `NaN`
    /// when there is no predictive variable.
    pub cut: f64,
    /// `membership[i] = x_pred[i] > x_0`; all-false without a predictive
    /// variable.
    pub membership: Vec<bool>,
}

/// I.i.d. fair Bernoulli treatment draws.
pub fn gen_treatment(n: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.random_bool(0.5))).collect()
}

/// Generate covariate columns for the given kinds.
///
/// Continuous columns are `sqrt(0.5) * shared + sqrt(0.5) * own`, giving unit
/// variance and pairwise correlation 0.5 across all continuous columns.
/// Binary columns are Bernoulli(p) with `p ~ Beta(2,3)` drawn once per
/// column, independent of everything else.
pub fn gen_covariates(n: usize, kinds: &[CovariateKind], streams: &Streams) -> Vec<Vec<f64>> {
    let mut shared_rng = streams.rng(StreamKind::CovariateShared, 0);
    let shared: Vec<f64> = (0..n).map(|_| shared_rng.sample(StandardNormal)).collect();
    let w = 0.5f64.sqrt();
    kinds
        .iter()
        .enumerate()
        .map(|(j, kind)| {
            let mut rng = streams.rng(StreamKind::CovariateColumn, j as u64);
            match kind {
                CovariateKind::Continuous => (0..n)
                    .map(|i| {
                        let z: f64 = rng.sample(StandardNormal);
                        w * shared[i] + w * z
                    })
                    .collect(),
                CovariateKind::Binary => {
                    let beta = Beta::new(2.0, 3.0).expect("valid Beta(2,3)");
                    let p_x = beta.sample(&mut rng);
                    (0..n).map(|_| f64::from(rng.random_bool(p_x))).collect()
                }
                CovariateKind::Categorical { .. } => {
                    unreachable!("scenarios do not generate categorical covariates")
                }
            }
        })
        .collect()
}

/// Generate the response for role-ordered covariates (predictive column
/// first if present, then prognostic, then noise).
///
/// Returns the response and the in-role-order truth labels; the caller is
/// responsible for remapping indices if columns are shuffled afterwards.
pub fn gen_outcome(
    scn: &Scenario,
    role_columns: &[Vec<f64>],
    treatment: &[u8],
    streams: &Streams,
) -> (Vec<f64>, TruthLabels) {
    let n = treatment.len();
    let mut rng = streams.rng(StreamKind::Outcome, 0);
    let pred_index = scn.pred_kind.map(|_| 0usize);
    let prog_index = scn.prog_kind.map(|_| usize::from(scn.pred_kind.is_some()));

    let (cut, membership) = match pred_index {
        Some(j) => {
            let col = &role_columns[j];
            let x0 = col.iter().sum::<f64>() / n as f64;
            (x0, col.iter().map(|&x| x > x0).collect())
        }
        None => (f64::NAN, vec![false; n]),
    };

    let mu: Vec<f64> = (0..n)
        .map(|i| {
            let t = f64::from(treatment[i]);
            let pred_term = if membership[i] { scn.beta_pred * t } else { 0.0 };
            let prog_term = match prog_index {
                Some(j) => scn.beta_prog * role_columns[j][i],
                None => 0.0,
            };
            pred_term + prog_term + scn.beta_trt * t
        })
        .collect();

    let response = match scn.response_kind {
        ResponseKind::Continuous => {
            let sd = scn.noise_variance.sqrt();
            mu.iter()
                .map(|m| {
                    let e: f64 = rng.sample(StandardNormal);
                    m + sd * e
                })
                .collect()
        }
        ResponseKind::Binary => mu
            .iter()
            .map(|m| {
                let p = 1.0 / (1.0 + (-m).exp());
                f64::from(rng.random_bool(p))
            })
            .collect(),
    };

    (
        response,
        TruthLabels {
            pred_index,
            prog_index,
            cut,
            membership,
        },
    )
}

/// Generate a complete dataset for a scenario. Covariate order is shuffled
/// per seed (names `X1..Xp` are assigned after the shuffle) so methods
/// cannot exploit column position; truth indices point into the shuffled
/// dataset.
pub fn gen_scenario_dataset(scn: &Scenario, seed: u64) -> (Dataset, TruthLabels) {
    scn.validate().expect("valid scenario");
    let streams = Streams::new(seed);
    let n = scn.n;
    let role_kinds = scn.role_kinds();
    let columns = gen_covariates(n, &role_kinds, &streams);
    let treatment = gen_treatment(n, &mut streams.rng(StreamKind::Treatment, 0));
    let (response, truth) = gen_outcome(scn, &columns, &treatment, &streams);

    let p = role_kinds.len();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut shuffle_rng = streams.rng(StreamKind::ColumnShuffle, 0);
    for i in (1..p).rev() {
        let j = shuffle_rng.random_range(0..=i);
        perm.swap(i, j);
    }
    // perm[k] = role slot placed at output position k
    let mut shuffled_cols = Vec::with_capacity(p);
    let mut shuffled_kinds = Vec::with_capacity(p);
    for &slot in &perm {
        shuffled_cols.push(columns[slot].clone());
        shuffled_kinds.push(role_kinds[slot]);
    }
    let names: Vec<String> = (1..=p).map(|k| format!("X{k}")).collect();
    let position_of = |slot: Option<usize>| {
        slot.map(|s| perm.iter().position(|&q| q == s).expect("slot present"))
    };
    let truth = TruthLabels {
        pred_index: position_of(truth.pred_index),
        prog_index: position_of(truth.prog_index),
        cut: truth.cut,
        membership: truth.membership,
    };

    let dataset = Dataset::new(
        response,
        scn.response_kind,
        treatment,
        shuffled_cols,
        shuffled_kinds,
        names,
    )
    .expect("generated dataset is valid");
    (dataset, truth)
}

/// The noiseless generating law of a scenario, usable as a counterfactual
/// model in oracle tests: predicts the mean response (or `P(Y = 1)` for a
/// binary response) at any treatment assignment.
#[derive(Debug, Clone)]
pub struct OracleLaw {
    pub beta_pred: f64,
    pub beta_prog: f64,
    pub beta_trt: f64,
    pub pred_index: Option<usize>,
    pub prog_index: Option<usize>,
    pub cut: f64,
    pub response_kind: ResponseKind,
}

impl OracleLaw {
    pub fn from_scenario(scn: &Scenario, truth: &TruthLabels) -> OracleLaw {
        OracleLaw {
            beta_pred: scn.beta_pred,
            beta_prog: scn.beta_prog,
            beta_trt: scn.beta_trt,
            pred_index: truth.pred_index,
            prog_index: truth.prog_index,
            cut: truth.cut,
            response_kind: scn.response_kind,
        }
    }

    /// The same law with the response sign flipped.
    pub fn negated(&self) -> OracleLaw {
        OracleLaw {
            beta_pred: -self.beta_pred,
            beta_prog: -self.beta_prog,
            beta_trt: -self.beta_trt,
            ..self.clone()
        }
    }
}

impl OutcomePredictor for OracleLaw {
    fn predict_at(
        &self,
        d: &Dataset,
        treatment: &[u8],
    ) -> Result<Vec<f64>, crate::counterfactual::CounterfactualError> {
        Ok((0..d.n())
            .map(|i| {
                let t = f64::from(treatment[i]);
                let pred_term = match self.pred_index {
                    Some(j) if d.value(i, j) > self.cut => self.beta_pred * t,
                    _ => 0.0,
                };
                let prog_term = match self.prog_index {
                    Some(j) => self.beta_prog * d.value(i, j),
                    None => 0.0,
                };
                let mu = pred_term + prog_term + self.beta_trt * t;
                match self.response_kind {
                    ResponseKind::Continuous => mu,
                    ResponseKind::Binary => 1.0 / (1.0 + (-mu).exp()),
                }
            })
            .collect())
    }
}
