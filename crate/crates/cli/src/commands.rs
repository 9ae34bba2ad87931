//! Implementations of the five subcommands.

use std::path::{Path, PathBuf};

use serde::Serialize;

use vg_core::counterfactual::{Backend, CounterfactualConfig};
use vg_core::data::{self, ConditionOp, CsvSchema, Dataset, Signature, SplitCondition};
use vg_core::methods::{self, Method, MethodConfig, SubgroupResult};
use vg_core::metrics::{self, MetricsCurve};
use vg_core::report;
use vg_core::resample;
use vg_core::rng::{StreamKind, Streams};
use vg_core::sim::{self, Scenario};
use vg_core::tree::{SelectionTest, StopRule};

use crate::outdir::RunDir;
use crate::{AnalyzeArgs, BootstrapArgs, CalibrateArgs, Cli, CliError, CompareArgs, SimulateArgs};

fn resolve_scenario(spec: &str, n_override: Option<usize>) -> Result<Scenario, CliError> {
    let mut scn = if let Some(s) = Scenario::preset(spec) {
        s
    } else if spec.ends_with(".json") {
        let body = std::fs::read_to_string(spec)
            .map_err(|e| CliError::Data(format!("cannot read scenario file '{spec}': {e}")))?;
        serde_json::from_str::<Scenario>(&body)
            .map_err(|e| CliError::Data(format!("invalid scenario file '{spec}': {e}")))?
    } else {
        return Err(CliError::Usage(format!(
            "unknown scenario '{spec}' (presets: {})",
            Scenario::preset_names().join(", ")
        )));
    };
    if let Some(n) = n_override {
        scn.n = n;
    }
    scn.validate().map_err(CliError::Data)?;
    Ok(scn)
}

fn parse_method(name: &str) -> Result<Method, CliError> {
    name.parse().map_err(CliError::Usage)
}

fn parse_selection(name: &str) -> Result<SelectionTest, CliError> {
    match name {
        "curvature" => Ok(SelectionTest::CurvatureChiSquare),
        "slope-t" => Ok(SelectionTest::SlopeT),
        other => Err(CliError::Usage(format!(
            "unknown selection test '{other}' (expected curvature or slope-t)"
        ))),
    }
}

fn parse_backend(name: &str) -> Result<Backend, CliError> {
    match name {
        "forest" => Ok(Backend::Forest),
        "single-tree" => Ok(Backend::SingleTree),
        other => Err(CliError::Usage(format!(
            "unknown backend '{other}' (expected forest or single-tree)"
        ))),
    }
}

fn load_dataset(data: &Path, schema: &Path) -> Result<(Dataset, CsvSchema), CliError> {
    let schema = CsvSchema::load(schema)?;
    let d = data::load_csv(data, &schema)?;
    Ok((d, schema))
}

fn method_config(
    backend: Backend,
    trees: usize,
    min_node: usize,
    max_depth: usize,
    theta: f64,
    selection: SelectionTest,
) -> MethodConfig {
    MethodConfig {
        counterfactual: CounterfactualConfig {
            backend,
            n_trees: trees,
            ..Default::default()
        },
        stop: StopRule {
            min_node,
            max_depth,
            theta,
        },
        selection,
    }
}

pub fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<(), CliError> {
    let scn = resolve_scenario(&args.scenario, args.n)?;
    let (d, truth) = sim::gen_scenario_dataset(&scn, cli.seed);

    let mut run = RunDir::create(&cli.out)?;
    let mut csv = Vec::new();
    d.write_csv(&mut csv)?;
    run.write(
        "dataset.csv",
        std::str::from_utf8(&csv).expect("csv is utf-8"),
    )?;
    run.write("dataset.schema.json", &d.schema().to_json())?;

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct TruthView<'a> {
        pred_name: Option<&'a str>,
        prog_name: Option<&'a str>,
        #[serde(flatten)]
        truth: &'a sim::TruthLabels,
    }
    let truth_json = serde_json::to_string_pretty(&TruthView {
        pred_name: truth.pred_index.map(|j| d.name(j)),
        prog_name: truth.prog_index.map(|j| d.name(j)),
        truth: &truth,
    })
    .expect("truth serializes");
    run.write("truth.json", &truth_json)?;

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Config<'a> {
        scenario: &'a Scenario,
    }
    run.finish("simulate", cli.seed, &Config { scenario: &scn })?;
    println!(
        "wrote {} rows x {} covariates to {}",
        d.n(),
        d.p(),
        cli.out.display()
    );
    Ok(())
}

pub fn compare(cli: &Cli, args: &CompareArgs) -> Result<(), CliError> {
    let scenarios: Vec<Scenario> = args
        .scenarios
        .iter()
        .map(|s| resolve_scenario(s, None))
        .collect::<Result<_, _>>()?;
    let methods: Vec<Method> = args
        .methods
        .iter()
        .map(|m| parse_method(m))
        .collect::<Result<_, _>>()?;
    if methods.is_empty() || scenarios.is_empty() {
        return Err(CliError::Usage("need at least one scenario and method".into()));
    }
    if args.iterations == 0 {
        return Err(CliError::Usage("--iterations must be at least 1".into()));
    }
    if args.theta_grid < 2 {
        return Err(CliError::Usage("--theta-grid must be at least 2".into()));
    }
    // theta is irrelevant for the sweep itself; root decisions are swept
    let cfg = method_config(
        Backend::Forest,
        args.trees,
        args.min_node,
        args.max_depth,
        0.05,
        parse_selection(&args.selection)?,
    );
    let grid = metrics::theta_grid(args.theta_grid);

    let mut run = RunDir::create(&cli.out)?;
    let mut all_curves: Vec<MetricsCurve> = Vec::new();
    for (idx, scn) in scenarios.iter().enumerate() {
        let scn_seed = Streams::new(cli.seed)
            .derive(StreamKind::Trial, idx as u64)
            .seed();
        let outcomes = metrics::run_trials(scn, &methods, args.iterations, &cfg, scn_seed);
        let curves = metrics::build_curves(&outcomes, &grid);
        let (power_svg, tdr_svg) = report::curve_plots(&scn.name, &curves);
        run.write(&format!("power_{}.svg", scn.name), &power_svg)?;
        run.write(&format!("tdr_{}.svg", scn.name), &tdr_svg)?;
        all_curves.extend(curves);
        println!("swept {} ({} iterations)", scn.name, args.iterations);
    }
    run.write("curves.csv", &metrics::curves_to_csv(&all_curves))?;
    let matched = metrics::matched_comparison(&all_curves, &args.match_levels);
    run.write("comparison.md", &metrics::matched_to_markdown(&matched))?;
    run.write(
        "comparison.json",
        &serde_json::to_string_pretty(&matched).expect("matched serializes"),
    )?;

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Config<'a> {
        scenarios: &'a [Scenario],
        methods: &'a [Method],
        iterations: usize,
        theta_grid: usize,
        trees: usize,
        min_node: usize,
        max_depth: usize,
        match_levels: &'a [f64],
        selection: &'a str,
    }
    run.finish(
        "compare",
        cli.seed,
        &Config {
            scenarios: &scenarios,
            methods: &methods,
            iterations: args.iterations,
            theta_grid: args.theta_grid,
            trees: args.trees,
            min_node: args.min_node,
            max_depth: args.max_depth,
            match_levels: &args.match_levels,
            selection: &args.selection,
        },
    )?;
    println!("outputs in {}", cli.out.display());
    Ok(())
}

fn complement(cond: &SplitCondition) -> SplitCondition {
    let op = match &cond.op {
        ConditionOp::Le { threshold } => ConditionOp::Gt { threshold: *threshold },
        ConditionOp::Gt { threshold } => ConditionOp::Le { threshold: *threshold },
        ConditionOp::In { levels } => ConditionOp::NotIn { levels: levels.clone() },
        ConditionOp::NotIn { levels } => ConditionOp::In { levels: levels.clone() },
    };
    SplitCondition {
        variable: cond.variable.clone(),
        op,
    }
}

fn group_labels(sig: &Signature) -> (String, String) {
    if sig.conditions.len() == 1 {
        (
            sig.conditions[0].to_string(),
            complement(&sig.conditions[0]).to_string(),
        )
    } else {
        (format!("inside: {sig}"), format!("outside: {sig}"))
    }
}

/// Observed treated-minus-control mean over a row subset.
fn observed_effect(d: &Dataset, rows: &[usize]) -> Option<f64> {
    let mut treated = (0usize, 0.0f64);
    let mut control = (0usize, 0.0f64);
    for &i in rows {
        if d.treatment()[i] == 1 {
            treated = (treated.0 + 1, treated.1 + d.response()[i]);
        } else {
            control = (control.0 + 1, control.1 + d.response()[i]);
        }
    }
    if treated.0 == 0 || control.0 == 0 {
        return None;
    }
    Some(treated.1 / treated.0 as f64 - control.1 / control.0 as f64)
}

/// First-dataset effect column: mean ITE for the ITE-based methods, the
/// observed arm difference for Gi.
fn first_dataset_effects(
    d: &Dataset,
    result: &SubgroupResult,
    sig: &Signature,
    cfg: &MethodConfig,
) -> Result<(f64, f64, f64), CliError> {
    let (members, rest) = data::apply_signature(d, sig)?;
    if result.method.uses_ite() {
        let dc = d.sorted_by_name();
        let ite = methods::ite_for(&dc, cfg, result.seed);
        let mean_of = |rows: &[usize]| {
            rows.iter().map(|&i| ite.values[i]).sum::<f64>() / rows.len().max(1) as f64
        };
        let all: Vec<usize> = (0..d.n()).collect();
        Ok((mean_of(&all), mean_of(&members), mean_of(&rest)))
    } else {
        let all: Vec<usize> = (0..d.n()).collect();
        let overall = observed_effect(d, &all).unwrap_or(f64::NAN);
        let inside = observed_effect(d, &members).unwrap_or(f64::NAN);
        let outside = observed_effect(d, &rest).unwrap_or(f64::NAN);
        Ok((overall, inside, outside))
    }
}

pub fn analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<(), CliError> {
    let method = parse_method(&args.method)?;
    let backend = parse_backend(&args.backend)?;

    let calibration_request = match (&args.calibrate, args.no_calibration) {
        (Some(_), true) => {
            return Err(CliError::Usage(
                "--calibrate and --no-calibration are mutually exclusive".into(),
            ))
        }
        (Some(v), false) => {
            let level = v[0];
            if v[1].fract() != 0.0 || v[1] < 1.0 {
                return Err(CliError::Usage(
                    "--calibrate NPERM must be a positive integer".into(),
                ));
            }
            Some((level, v[1] as usize))
        }
        (None, false) => {
            return Err(CliError::Usage(
                "choose --calibrate LEVEL NPERM or --no-calibration".into(),
            ))
        }
        (None, true) => None,
    };

    let (d, schema) = load_dataset(&args.data, &args.schema)?;
    let mut run = RunDir::create(&cli.out)?;
    let mut cfg = method_config(
        backend,
        args.trees,
        args.min_node,
        args.max_depth,
        args.theta,
        parse_selection(&args.selection)?,
    );

    let mut banner = None;
    match &calibration_request {
        Some((level, n_perm)) => {
            let cal =
                resample::calibrate_threshold(&d, method, &cfg, *level, *n_perm, cli.seed)?;
            cfg.stop.theta = cal.theta_star;
            run.write(
                "calibration.json",
                &serde_json::to_string_pretty(&cal).expect("calibration serializes"),
            )?;
            println!(
                "calibrated theta* = {:.6} at target level {level} ({n_perm} permutations)",
                cal.theta_star
            );
        }
        None => {
            let msg = format!(
                "WARNING: Type I error is not controlled (exploratory fit at theta = {})",
                cfg.stop.theta
            );
            println!("{msg}");
            banner = Some(msg);
        }
    }

    let result = methods::run_method(method, &d, &cfg, cli.seed)?;
    if method.uses_ite() {
        // export the counterfactual model summary alongside the tree; the
        // refit is bit-identical to the one inside the pipeline
        let summary_cfg = vg_core::CounterfactualConfig {
            compute_error_metrics: true,
            ..cfg.counterfactual
        };
        let dc = d.sorted_by_name();
        let model = vg_core::fit_counterfactual(&dc, &summary_cfg, cli.seed);
        run.write("model.json", &model.summary_json())?;
    }
    let mut tree_txt = String::new();
    if let Some(b) = &banner {
        tree_txt.push_str(b);
        tree_txt.push('\n');
    }
    tree_txt.push_str(&result.render_text());
    run.write("tree.txt", &tree_txt)?;
    run.write("tree.json", &result.tree.to_json())?;
    run.write("result.json", &result.to_json())?;

    if result.identified {
        println!(
            "subgroup identified: {}",
            result.signature.as_ref().expect("identified").to_string()
        );
    } else {
        println!("no subgroup identified at this level");
    }

    if let Some(second_path) = &args.transfer {
        let second = data::load_csv(second_path, &schema)?;
        let table = match &result.signature {
            Some(sig) => {
                let (inside_label, outside_label) = group_labels(sig);
                let (overall1, inside1, outside1) =
                    first_dataset_effects(&d, &result, sig, &cfg)?;
                let (members2, rest2) = data::apply_signature(&second, sig)?;
                let all2: Vec<usize> = (0..second.n()).collect();
                let rows = vec![
                    report::TransferRow {
                        group: "Overall".into(),
                        first: overall1,
                        second: observed_effect(&second, &all2),
                    },
                    report::TransferRow {
                        group: inside_label,
                        first: inside1,
                        second: observed_effect(&second, &members2),
                    },
                    report::TransferRow {
                        group: outside_label,
                        first: outside1,
                        second: observed_effect(&second, &rest2),
                    },
                ];
                run.write(
                    "transfer.json",
                    &serde_json::to_string_pretty(&TransferView::from(&rows))
                        .expect("transfer serializes"),
                )?;
                report::transfer_table_markdown(&rows)
            }
            None => "no subgroup identified; nothing to transfer\n".to_string(),
        };
        run.write("transfer.md", &table)?;
    }

    if let Some(b) = args.bootstrap {
        match &result.signature {
            Some(sig) => {
                let bs_cfg = CounterfactualConfig {
                    backend: parse_backend(&args.bootstrap_backend)?,
                    n_trees: args.trees,
                    ..Default::default()
                };
                let summary = resample::bootstrap_ci(&d, sig, b, args.level, &bs_cfg, cli.seed)?;
                let (inside_label, outside_label) = group_labels(sig);
                run.write(
                    "bootstrap.md",
                    &report::bootstrap_table_markdown(&inside_label, &outside_label, &summary),
                )?;
                run.write(
                    "bootstrap.json",
                    &serde_json::to_string_pretty(&summary).expect("bootstrap serializes"),
                )?;
            }
            None => {
                run.write("bootstrap.md", "no subgroup identified; nothing to bootstrap\n")?;
            }
        }
    }

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Config<'a> {
        data: String,
        schema_file: String,
        schema: &'a CsvSchema,
        method: Method,
        calibrate: Option<(f64, usize)>,
        no_calibration: bool,
        theta: f64,
        transfer: Option<String>,
        bootstrap: Option<usize>,
        level: f64,
        backend: &'a str,
        bootstrap_backend: &'a str,
        trees: usize,
        min_node: usize,
        max_depth: usize,
        resolved_theta: f64,
        selection: &'a str,
    }
    run.finish(
        "analyze",
        cli.seed,
        &Config {
            data: args.data.display().to_string(),
            schema_file: args.schema.display().to_string(),
            schema: &schema,
            method,
            calibrate: calibration_request,
            no_calibration: args.no_calibration,
            theta: args.theta,
            transfer: args.transfer.as_ref().map(|p| p.display().to_string()),
            bootstrap: args.bootstrap,
            level: args.level,
            backend: &args.backend,
            bootstrap_backend: &args.bootstrap_backend,
            trees: args.trees,
            min_node: args.min_node,
            max_depth: args.max_depth,
            resolved_theta: cfg.stop.theta,
            selection: &args.selection,
        },
    )?;
    println!("outputs in {}", cli.out.display());
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TransferView {
    rows: Vec<TransferRowView>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TransferRowView {
    group: String,
    first: f64,
    second: Option<f64>,
}

impl From<&Vec<report::TransferRow>> for TransferView {
    fn from(rows: &Vec<report::TransferRow>) -> Self {
        TransferView {
            rows: rows
                .iter()
                .map(|r| TransferRowView {
                    group: r.group.clone(),
                    first: r.first,
                    second: r.second,
                })
                .collect(),
        }
    }
}

pub fn calibrate(cli: &Cli, args: &CalibrateArgs) -> Result<(), CliError> {
    let (d, schema) = load_dataset(&args.data, &args.schema)?;
    let method = parse_method(&args.method)?;
    let backend = parse_backend(&args.backend)?;
    let cfg = method_config(
        backend,
        args.trees,
        args.min_node,
        args.max_depth,
        args.target,
        parse_selection(&args.selection)?,
    );
    let cal = resample::calibrate_threshold(&d, method, &cfg, args.target, args.n_perm, cli.seed)?;

    let mut run = RunDir::create(&cli.out)?;
    run.write(
        "calibration.json",
        &serde_json::to_string_pretty(&cal).expect("calibration serializes"),
    )?;
    run.write(
        "calibration.md",
        &format!(
            "| target | permutations | theta* |\n|---|---|---|\n| {} | {} | {:.6} |\n",
            cal.target, cal.n_perm, cal.theta_star
        ),
    )?;

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Config<'a> {
        data: String,
        schema: &'a CsvSchema,
        method: Method,
        target: f64,
        n_perm: usize,
        backend: &'a str,
        trees: usize,
        min_node: usize,
        max_depth: usize,
        selection: &'a str,
    }
    run.finish(
        "calibrate",
        cli.seed,
        &Config {
            data: args.data.display().to_string(),
            schema: &schema,
            method,
            target: args.target,
            n_perm: args.n_perm,
            backend: &args.backend,
            trees: args.trees,
            min_node: args.min_node,
            max_depth: args.max_depth,
            selection: &args.selection,
        },
    )?;
    println!(
        "theta* = {:.6} (target {}, {} permutations); outputs in {}",
        cal.theta_star,
        cal.target,
        cal.n_perm,
        cli.out.display()
    );
    Ok(())
}

pub fn bootstrap(cli: &Cli, args: &BootstrapArgs) -> Result<(), CliError> {
    let (d, schema) = load_dataset(&args.data, &args.schema)?;
    let sig_body = std::fs::read_to_string(&args.signature)
        .map_err(|e| CliError::Data(format!("cannot read signature file: {e}")))?;
    let sig = Signature::from_json(&sig_body)?;
    let backend = parse_backend(&args.backend)?;
    let cfg = CounterfactualConfig {
        backend,
        n_trees: args.trees,
        ..Default::default()
    };
    let summary = resample::bootstrap_ci(&d, &sig, args.b, args.level, &cfg, cli.seed)?;

    let mut run = RunDir::create(&cli.out)?;
    let (inside_label, outside_label) = group_labels(&sig);
    run.write(
        "bootstrap.md",
        &report::bootstrap_table_markdown(&inside_label, &outside_label, &summary),
    )?;
    run.write(
        "bootstrap.json",
        &serde_json::to_string_pretty(&summary).expect("bootstrap serializes"),
    )?;

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    struct Config<'a> {
        data: String,
        schema: &'a CsvSchema,
        signature: &'a Signature,
        b: usize,
        level: f64,
        backend: &'a str,
        trees: usize,
    }
    run.finish(
        "bootstrap",
        cli.seed,
        &Config {
            data: args.data.display().to_string(),
            schema: &schema,
            signature: &sig,
            b: args.b,
            level: args.level,
            backend: &args.backend,
            trees: args.trees,
        },
    )?;
    println!(
        "difference CI: ({:.4}, {:.4}); outputs in {}",
        summary.difference_ci.0,
        summary.difference_ci.1,
        cli.out.display()
    );
    Ok(())
}

// keep PathBuf in scope for arg structs defined in main.rs
#[allow(unused)]
fn _path_type_check(_: &PathBuf) {}
