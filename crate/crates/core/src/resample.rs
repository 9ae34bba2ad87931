//! Real-data inference: permutation calibration of the split threshold and
//! the signature-conditioned bootstrap.
//!
//! Permuting the treatment column alone breaks the treatment-covariate and
//! treatment-response associations while leaving every covariate-response
//! association intact: the predictive effect is removed, the prognostic
//! structure kept. Repeating the root-node analysis on permuted copies gives
//! a null distribution of selection p-values; the calibrated threshold is
//! its empirical target-quantile.
//!
//! The bootstrap redraws rows with replacement, refits the counterfactual
//! step on each resample, and summarizes the fresh ITEs inside the original
//! signature (the signature itself is held fixed, which is what makes the
//! interval account for selection uncertainty). Intervals are percentile
//! order statistics.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::counterfactual::{estimate_ite, CounterfactualConfig};
use crate::data::{apply_signature, DataError, Dataset, Signature};
use crate::methods::{root_analysis, Method, MethodConfig};
use crate::rng::{StreamKind, Streams};

#[derive(Debug, Error)]
pub enum ResampleError {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Uniformly permute the treatment column; covariate-response rows are
/// untouched.
pub fn permute_treatment(d: &Dataset, rng: &mut ChaCha8Rng) -> Dataset {
    let mut t = d.treatment().to_vec();
    for i in (1..t.len()).rev() {
        let j = rng.random_range(0..=i);
        t.swap(i, j);
    }
    d.with_treatment(t)
        .expect("permutation preserves the treatment multiset")
}

/// Result of a permutation calibration.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PermutationCalibration {
    pub target: f64,
    pub n_perm: usize,
    /// Null root selection p-values, one per permutation replicate (a
    /// replicate where no root split was admissible contributes 1.0).
    pub null_pvalues: Vec<f64>,
    /// Empirical target-quantile of the null p-values: identification at
    /// `root p <= theta_star` has Type I error ~= target on this null.
    pub theta_star: f64,
}

/// Calibrate the split threshold for a method on a dataset by treatment
/// permutation.
pub fn calibrate_threshold(
    d: &Dataset,
    method: Method,
    cfg: &MethodConfig,
    target: f64,
    n_perm: usize,
    seed: u64,
) -> Result<PermutationCalibration, ResampleError> {
    if !(0.0..1.0).contains(&target) || target <= 0.0 {
        return Err(ResampleError::Invalid(format!(
            "target level must be in (0,1), got {target}"
        )));
    }
    if n_perm < 20 {
        return Err(ResampleError::Invalid(format!(
            "need at least 20 permutations, got {n_perm}"
        )));
    }
    if (n_perm as f64) < 1.0 / target {
        return Err(ResampleError::Invalid(format!(
            "need >= 1/target = {:.0} permutations for a resolvable quantile, got {n_perm}",
            1.0 / target
        )));
    }
    let base = Streams::new(seed);
    let null_pvalues: Vec<f64> = (0..n_perm as u64)
        .into_par_iter()
        .map(|r| {
            let sub = base.derive(StreamKind::Permutation, r);
            let permuted = permute_treatment(d, &mut sub.rng(StreamKind::Permutation, 0));
            let root = root_analysis(&permuted, method, cfg, sub.seed());
            root.p.unwrap_or(1.0)
        })
        .collect();
    let mut sorted = null_pvalues.clone();
    sorted.sort_unstable_by(f64::total_cmp);
    // k-th smallest order statistic, k = floor(target * n_perm)
    let k = ((target * n_perm as f64).floor() as usize).max(1);
    let theta_star = sorted[k - 1];
    Ok(PermutationCalibration {
        target,
        n_perm,
        null_pvalues,
        theta_star,
    })
}

/// Percentile-bootstrap summary of subgroup mean ITEs under a fixed
/// signature.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BootstrapSummary {
    pub b: usize,
    pub level: f64,
    /// Point estimates from a fit on the original dataset.
    pub point_member: f64,
    pub point_nonmember: f64,
    pub point_difference: f64,
    /// Per-replicate subgroup means; `None` marks an excluded replicate
    /// (one side of the signature was empty, or a resample lost an arm).
    pub member_means: Vec<Option<f64>>,
    pub nonmember_means: Vec<Option<f64>>,
    pub differences: Vec<Option<f64>>,
    pub excluded: usize,
    pub member_ci: (f64, f64),
    pub nonmember_ci: (f64, f64),
    pub difference_ci: (f64, f64),
}

/// Percentile interval of the non-missing values: the `ceil(a/2*m)`-th and
/// `(m+1-ceil(a/2*m))`-th order statistics, `a = 1 - level`.
fn percentile_ci(values: &[Option<f64>], level: f64) -> (f64, f64) {
    let mut present: Vec<f64> = values.iter().flatten().copied().collect();
    if present.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    present.sort_unstable_by(f64::total_cmp);
    let m = present.len();
    let alpha = 1.0 - level;
    let k_lo = ((alpha / 2.0 * m as f64).ceil() as usize).clamp(1, m);
    let k_hi = m + 1 - k_lo;
    (present[k_lo - 1], present[k_hi - 1])
}

/// Signature-conditioned bootstrap confidence intervals.
///
/// Each replicate resamples `n` rows with replacement, refits the
/// counterfactual step on the resample, computes fresh ITEs, and splits the
/// resample by the *original* signature. Replicates where either side is
/// empty are recorded as missing and excluded from the intervals.
pub fn bootstrap_ci(
    d: &Dataset,
    signature: &Signature,
    b: usize,
    level: f64,
    cfg: &CounterfactualConfig,
    seed: u64,
) -> Result<BootstrapSummary, ResampleError> {
    if b < 100 {
        return Err(ResampleError::Invalid(format!(
            "need at least 100 bootstrap replicates, got {b}"
        )));
    }
    if !(0.0..1.0).contains(&level) || level <= 0.0 {
        return Err(ResampleError::Invalid(format!(
            "confidence level must be in (0,1), got {level}"
        )));
    }
    // validate the signature once against the original dataset
    let (members, nonmembers) = apply_signature(d, signature)?;

    let point = {
        let (_, ite) = estimate_ite(d, cfg, seed);
        let mean_of = |rows: &[usize]| {
            if rows.is_empty() {
                f64::NAN
            } else {
                rows.iter().map(|&i| ite.values[i]).sum::<f64>() / rows.len() as f64
            }
        };
        (mean_of(&members), mean_of(&nonmembers))
    };

    let n = d.n();
    let base = Streams::new(seed);
    let replicates: Vec<Option<(f64, f64)>> = (0..b as u64)
        .into_par_iter()
        .map(|r| {
            let sub = base.derive(StreamKind::Bootstrap, r);
            let mut rng = sub.rng(StreamKind::Bootstrap, 0);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            let resample = match d.subset_rows(&idx) {
                Ok(rs) => rs,
                Err(_) => return None, // resample lost a treatment arm
            };
            let (_, ite) = estimate_ite(&resample, cfg, sub.seed());
            let (mem, rest) =
                apply_signature(&resample, signature).expect("signature validated on original");
            if mem.is_empty() || rest.is_empty() {
                return None;
            }
            let mean_of = |rows: &[usize]| {
                rows.iter().map(|&i| ite.values[i]).sum::<f64>() / rows.len() as f64
            };
            Some((mean_of(&mem), mean_of(&rest)))
        })
        .collect();

    let member_means: Vec<Option<f64>> = replicates.iter().map(|r| r.map(|(m, _)| m)).collect();
    let nonmember_means: Vec<Option<f64>> =
        replicates.iter().map(|r| r.map(|(_, nm)| nm)).collect();
    let differences: Vec<Option<f64>> =
        replicates.iter().map(|r| r.map(|(m, nm)| m - nm)).collect();
    let excluded = replicates.iter().filter(|r| r.is_none()).count();

    Ok(BootstrapSummary {
        b,
        level,
        point_member: point.0,
        point_nonmember: point.1,
        point_difference: point.0 - point.1,
        member_ci: percentile_ci(&member_means, level),
        nonmember_ci: percentile_ci(&nonmember_means, level),
        difference_ci: percentile_ci(&differences, level),
        member_means,
        nonmember_means,
        differences,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterfactual::Backend;
    use crate::data::{ConditionOp, SplitCondition};
    use crate::sim::{gen_scenario_dataset, Scenario};
    use crate::stats;
    use crate::tree::StopRule;

    #[test]
    fn permutation_preserves_everything_but_treatment_order() {
        let (d, _) = gen_scenario_dataset(&Scenario::preset("mix-prognostic").unwrap(), 3);
        let streams = Streams::new(1);
        let p = permute_treatment(&d, &mut streams.rng(StreamKind::Permutation, 0));
        let mut before: Vec<u8> = d.treatment().to_vec();
        let mut after: Vec<u8> = p.treatment().to_vec();
        assert_ne!(before, after, "permutation should move labels");
        before.sort_unstable();
        after.sort_unstable();
        assert_eq!(before, after, "multiset preserved");
        assert_eq!(d.response(), p.response());
        for j in 0..d.p() {
            assert_eq!(d.column(j), p.column(j));
        }
        // prognostic association with Y is exactly unchanged
        let xj = d.column(0);
        assert_eq!(
            stats::slope_test_p(xj, d.response()),
            stats::slope_test_p(p.column(0), p.response())
        );
    }

    #[test]
    fn interaction_p_uniform_under_permutation() {
        // a dataset with prognostic but no predictive structure: after
        // permuting T, the T x X interaction p-value should be uniform-like
        let mut scn = Scenario::preset("mix-prognostic").unwrap();
        scn.beta_pred = 0.0;
        scn.beta_trt = 0.0;
        let (d, truth) = gen_scenario_dataset(&scn, 5);
        let xp = truth.pred_index.unwrap();
        let streams = Streams::new(7);
        let n_perm = 500;
        let mut pvals: Vec<f64> = (0..n_perm)
            .map(|r| {
                let p = permute_treatment(&d, &mut streams.rng(StreamKind::Permutation, r));
                let t: Vec<f64> = p.treatment().iter().map(|&v| f64::from(v)).collect();
                let x = p.column(xp).to_vec();
                let tx: Vec<f64> = t.iter().zip(&x).map(|(a, b)| a * b).collect();
                let ones = vec![1.0; p.n()];
                let reduced = stats::ols(&[&ones, &t, &x], p.response());
                let full = stats::ols(&[&ones, &t, &x, &tx], p.response());
                stats::nested_f_p(&reduced, &full)
            })
            .collect();
        pvals.sort_unstable_by(f64::total_cmp);
        // Kolmogorov-Smirnov distance against U(0,1); 1% critical value
        let mut d_stat: f64 = 0.0;
        for (i, p) in pvals.iter().enumerate() {
            let emp_hi = (i + 1) as f64 / n_perm as f64;
            let emp_lo = i as f64 / n_perm as f64;
            d_stat = d_stat.max((emp_hi - p).abs()).max((p - emp_lo).abs());
        }
        let crit = 1.63 / (n_perm as f64).sqrt();
        assert!(d_stat < crit, "KS distance {d_stat:.4} vs {crit:.4}");
    }

    #[test]
    fn theta_star_is_the_order_statistic() {
        let (d, _) = gen_scenario_dataset(&Scenario::preset("no-prognostic").unwrap(), 11);
        let cfg = MethodConfig {
            counterfactual: CounterfactualConfig {
                backend: Backend::SingleTree,
                ..Default::default()
            },
            stop: StopRule::default(),
            selection: Default::default(),
        };
        let cal = calibrate_threshold(&d, Method::Gi, &cfg, 0.10, 50, 4).unwrap();
        let mut sorted = cal.null_pvalues.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        assert_eq!(cal.theta_star, sorted[4]); // floor(0.10 * 50) = 5th smallest
        assert_eq!(cal.null_pvalues.len(), 50);
        // calibration is deterministic
        let again = calibrate_threshold(&d, Method::Gi, &cfg, 0.10, 50, 4).unwrap();
        assert_eq!(cal.null_pvalues, again.null_pvalues);
    }

    #[test]
    fn calibration_argument_validation() {
        let (d, _) = gen_scenario_dataset(&Scenario::preset("no-prognostic").unwrap(), 1);
        let cfg = MethodConfig::default();
        assert!(calibrate_threshold(&d, Method::Gi, &cfg, 0.0, 100, 1).is_err());
        assert!(calibrate_threshold(&d, Method::Gi, &cfg, 0.05, 10, 1).is_err());
        assert!(calibrate_threshold(&d, Method::Gi, &cfg, 0.001, 100, 1).is_err());
    }

    fn true_signature(d: &Dataset, pred_index: usize, cut: f64) -> Signature {
        Signature::new(vec![SplitCondition {
            variable: d.name(pred_index).to_string(),
            op: ConditionOp::Gt { threshold: cut },
        }])
        .unwrap()
    }

    #[test]
    fn bootstrap_percentile_indices_and_determinism() {
        let (d, truth) = gen_scenario_dataset(&Scenario::preset("no-prognostic").unwrap(), 21);
        let sig = true_signature(&d, truth.pred_index.unwrap(), truth.cut);
        let cfg = CounterfactualConfig::single_tree();
        let s = bootstrap_ci(&d, &sig, 500, 0.95, &cfg, 8).unwrap();
        assert_eq!(s.excluded, 0);
        let mut sorted: Vec<f64> = s.differences.iter().flatten().copied().collect();
        sorted.sort_unstable_by(f64::total_cmp);
        // (13th, 488th) order statistics at B = 500, level 95%
        assert_eq!(s.difference_ci, (sorted[12], sorted[487]));
        let again = bootstrap_ci(&d, &sig, 500, 0.95, &cfg, 8).unwrap();
        assert_eq!(s.differences, again.differences);
        assert_eq!(s.difference_ci, again.difference_ci);
    }

    #[test]
    fn bootstrap_degenerate_constant_data() {
        use crate::data::{CovariateKind, ResponseKind};
        let n = 40;
        let d = Dataset::new(
            vec![2.5; n],
            ResponseKind::Continuous,
            (0..n).map(|i| (i % 2) as u8).collect(),
            vec![(0..n).map(|i| i as f64).collect()],
            vec![CovariateKind::Continuous],
            vec!["X1".into()],
        )
        .unwrap();
        let sig = Signature::new(vec![SplitCondition {
            variable: "X1".into(),
            op: ConditionOp::Le {
                threshold: n as f64 / 2.0,
            },
        }])
        .unwrap();
        let s = bootstrap_ci(&d, &sig, 100, 0.95, &CounterfactualConfig::single_tree(), 3).unwrap();
        assert_eq!(s.member_ci, (0.0, 0.0));
        assert_eq!(s.nonmember_ci, (0.0, 0.0));
        assert_eq!(s.difference_ci, (0.0, 0.0));
    }

    #[test]
    fn bootstrap_rejects_bad_arguments() {
        let (d, truth) = gen_scenario_dataset(&Scenario::preset("no-prognostic").unwrap(), 2);
        let sig = true_signature(&d, truth.pred_index.unwrap(), truth.cut);
        let cfg = CounterfactualConfig::single_tree();
        assert!(bootstrap_ci(&d, &sig, 50, 0.95, &cfg, 1).is_err());
        assert!(bootstrap_ci(&d, &sig, 100, 1.5, &cfg, 1).is_err());
    }
}
