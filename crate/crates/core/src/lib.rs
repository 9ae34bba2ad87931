//! Subgroup identification from randomized-trial data.
//!
//! The crate implements three recursive-partitioning pipelines over
//! individual treatment effects — VG (counterfactual ITE estimation followed
//! by unbiased variable selection), VT (the same ITEs followed by an
//! exhaustive CART-style search), and Gi (interaction tests on the raw
//! outcome) — together with the simulation scenarios, threshold-sweep
//! metrics, permutation calibration, and signature-conditioned bootstrap
//! needed to compare and apply them.

pub mod counterfactual;
pub mod data;
pub mod forest;
pub mod methods;
pub mod metrics;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod report;
pub mod resample;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod tree;

pub use counterfactual::{
    compute_ite, fit_counterfactual, predict_flipped, Backend, CounterfactualConfig,
    CounterfactualModel, IteVector, OutcomePredictor,
};
pub use data::{
    apply_signature, load_csv, stack_counterfactual, CovariateKind, CsvSchema, DataError, Dataset,
    ResponseKind, Signature, StackedDesign,
};
pub use methods::{run_gi, run_method, run_vg, run_vt, Method, MethodConfig, SubgroupResult};
pub use sim::{gen_scenario_dataset, Scenario, TruthLabels};
pub use tree::{
    extract_signature, find_split_value, grow_tree, select_split_cart, select_variable_guide,
    SplitPolicy, SplitPolicyKind, StopRule, Tree,
};
