//! Shared fixtures for the criterion benchmarks.

use vg_core::methods::MethodConfig;
use vg_core::sim::{gen_scenario_dataset, Scenario, TruthLabels};
use vg_core::Dataset;

/// The standard benchmark dataset: the continuous-predictive scenario at its
/// default size (n = 400, p = 14).
pub fn bench_dataset(seed: u64) -> (Dataset, TruthLabels) {
    let scn = Scenario::preset("no-prognostic").unwrap();
    gen_scenario_dataset(&scn, seed)
}

pub fn bench_config(n_trees: usize) -> MethodConfig {
    MethodConfig {
        counterfactual: vg_core::CounterfactualConfig {
            n_trees,
            ..Default::default()
        },
        ..Default::default()
    }
}
