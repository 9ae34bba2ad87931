//! Full-scale C7 procedure at three frozen seed triples.
use vg_core::counterfactual::CounterfactualConfig;
use vg_core::methods::{root_analysis, Method, MethodConfig};
use vg_core::resample::calibrate_threshold;
use vg_core::rng::{StreamKind, Streams};
use vg_core::sim::{gen_scenario_dataset, Scenario};

#[test]
#[ignore]
fn c7_full_candidates() {
    let null_scn = Scenario::preset("no-prognostic").unwrap().null_twin();
    let cfg = MethodConfig {
        counterfactual: CounterfactualConfig { n_trees: 500, ..Default::default() },
        stop: Default::default(),
        selection: Default::default(),
    };
    for (cal_data_seed, cal_seed, eval_seed) in [(77_002u64, 781u64, 782u64), (77_003, 791, 792), (77_004, 801, 802)] {
        let (d_cal, _) = gen_scenario_dataset(&null_scn, cal_data_seed);
        let cal = calibrate_threshold(&d_cal, Method::Vg, &cfg, 0.05, 500, cal_seed).unwrap();
        let evals = 500u64;
        let hits: usize = (0..evals)
            .map(|k| {
                let seed = Streams::new(eval_seed).derive(StreamKind::Trial, k).seed();
                let (d, _) = gen_scenario_dataset(&null_scn, seed);
                let root = root_analysis(&d, Method::Vg, &cfg, seed);
                usize::from(root.identified_at(cal.theta_star))
            })
            .sum();
        println!(
            "seeds ({cal_data_seed},{cal_seed},{eval_seed}): theta*={:.3e} rate={:.4}",
            cal.theta_star,
            hits as f64 / evals as f64
        );
    }
}
