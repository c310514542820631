//! Implementations of the CLI subcommands.

use std::path::{Path, PathBuf};

use milred::analysis::{
    assemble_bound, count_union_instances, deviation_term, lcl_risk_scale, mil_complexity_bound,
    total_bag_instances, BoundParams, DeviationMode,
};
use milred::core::{
    empirical_risk_mil, lcl_loss, mcl_loss, trl_loss, Instance, LCLExample, LinearWeights,
    LossKind, MCLExample, MILExample, MulticlassWeights, TRLExample,
};
use milred::datagen::{gen_lcl, gen_mcl, gen_mil, gen_trl, GenConfig};
use milred::oracle::{
    verify_risk_rescaling_montecarlo, verify_erm_equality, verify_rademacher_equality,
    verify_solver_optimality, HypothesisGrid, VerificationReport,
};
use milred::reductions::{
    check_loss_equality, lcl_reduce, mcl_reduce, mcl_restore, reduce_lcl_sample,
    reduce_mcl_sample, reduce_trl_sample, trl_reduce, LclReduction, MclReduction, ReducedSample,
    TrlReduction,
};
use milred::solvers::{train_auto, train_oneclass_misvm, SolverConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::formats::{
    self, read_lcl_dataset, read_mcl_dataset, read_mil_dataset, read_model, read_trl_dataset,
    resolve_out, MetricRow, ModelFile, TrueLabelRecord,
};
use crate::{CliError, EvalKind, GenArgs, Kind, OriginalKind, SolverArgs};

pub fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let cfg = GenConfig {
        seed: args.seed,
        n: args.n,
        d: args.d,
        k: args.k,
        set_size: args.set_size,
        theta: args.theta,
        r_norm: args.r_norm,
        margin: args.margin,
    };
    let out = resolve_out(
        args.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.jsonl", args.kind)))
            .as_path(),
    );
    let written = match args.kind {
        Kind::Mil => {
            let data = gen_mil(&cfg).map_err(CliError::from)?;
            formats::write_jsonl(&out, &formats::mil_records(&data.examples))?;
            data.examples.len()
        }
        Kind::Trl => {
            let data = gen_trl(&cfg).map_err(CliError::from)?;
            let records: Vec<formats::TrlRecord> = data
                .examples
                .iter()
                .map(|ex| formats::TrlRecord {
                    items: ex.items().iter().map(|i| i.coords().to_vec()).collect(),
                    target_index: ex.target_index(),
                })
                .collect();
            formats::write_jsonl(&out, &records)?;
            records.len()
        }
        Kind::Mcl => {
            let data = gen_mcl(&cfg).map_err(CliError::from)?;
            let records: Vec<formats::MclRecord> = data
                .examples
                .iter()
                .map(|ex| formats::MclRecord {
                    features: ex.x().coords().to_vec(),
                    label: ex.y(),
                    k: ex.k(),
                })
                .collect();
            formats::write_jsonl(&out, &records)?;
            records.len()
        }
        Kind::Lcl => {
            let data = gen_lcl(&cfg).map_err(CliError::from)?;
            let records: Vec<formats::LclRecord> = data
                .examples
                .iter()
                .map(|ex| formats::LclRecord {
                    features: ex.x().coords().to_vec(),
                    label: ex.y(),
                    k: ex.k(),
                    is_true: ex.gamma(),
                })
                .collect();
            formats::write_jsonl(&out, &records)?;
            if let Some(sidecar) = &args.sidecar {
                let sidecar = resolve_out(sidecar);
                let labels: Vec<TrueLabelRecord> = data
                    .true_labels
                    .iter()
                    .map(|&true_label| TrueLabelRecord { true_label })
                    .collect();
                formats::write_jsonl(&sidecar, &labels)?;
            }
            records.len()
        }
    };
    println!("wrote {written} {} records to {}", args.kind, out.display());
    Ok(())
}

fn reduce_from_file(kind: OriginalKind, input: &Path) -> Result<ReducedSample, CliError> {
    let reduced = match kind {
        OriginalKind::Trl => reduce_trl_sample(&read_trl_dataset(input)?),
        OriginalKind::Mcl => reduce_mcl_sample(&read_mcl_dataset(input)?),
        OriginalKind::Lcl => reduce_lcl_sample(&read_lcl_dataset(input)?),
    };
    reduced.map_err(CliError::from)
}

pub fn cmd_reduce(kind: OriginalKind, input: &Path, out: &Path) -> Result<(), CliError> {
    let reduced = reduce_from_file(kind, input)?;
    let out = resolve_out(out);
    formats::write_jsonl(&out, &formats::mil_records(&reduced.examples))?;
    println!(
        "reduced {} {kind} examples to {} bags ({} skipped) -> {}",
        reduced.examples.len() + reduced.skipped_count,
        reduced.examples.len(),
        reduced.skipped_count,
        out.display()
    );
    Ok(())
}

pub fn cmd_train(input: &Path, out: &Path, solver: &SolverArgs) -> Result<(), CliError> {
    let sample = read_mil_dataset(input)?;
    let config = solver.to_config();
    let (result, path) = train_auto(&sample, &config).map_err(CliError::from)?;
    let out = resolve_out(out);
    formats::write_model(&out, &ModelFile::linear(&result.weights))?;
    println!(
        "trained via {path}: objective {:.9}, {} iterations, converged={} -> {}",
        result.objective,
        result.iterations,
        result.converged,
        out.display()
    );
    if !result.converged {
        let trace_path = out.with_extension("trace.json");
        let trace = serde_json::json!({ "objective_trace": result.objective_trace });
        std::fs::write(&trace_path, format!("{trace:#}\n"))
            .map_err(|e| CliError::io(&trace_path, e))?;
        return Err(CliError::NonConvergence { trace_path });
    }
    Ok(())
}

/// Integer loss counts and mean risks for one space.
struct SpaceRisk {
    count: u32,
    mean: f64,
}

fn original_and_reduced_risks(
    kind: OriginalKind,
    data: &Path,
    model: &ModelFile,
) -> Result<(SpaceRisk, SpaceRisk, usize), CliError> {
    match kind {
        OriginalKind::Trl => {
            let sample = read_trl_dataset(data)?;
            let w = model.to_linear()?;
            let mut count = 0u32;
            for ex in &sample {
                count += u32::from(trl_loss(&w, ex).map_err(CliError::from)?);
            }
            let reduced: Vec<MILExample> = sample.iter().filter_map(trl_reduce).collect();
            let skipped = sample.len() - reduced.len();
            let (red_count, red_mean) = reduced_zero_one(&reduced, &w)?;
            Ok((
                SpaceRisk {
                    count,
                    mean: mean_of(count, sample.len()),
                },
                SpaceRisk {
                    count: red_count,
                    mean: red_mean,
                },
                skipped,
            ))
        }
        OriginalKind::Mcl => {
            let sample = read_mcl_dataset(data)?;
            let weights = restore_multiclass(model, &sample.iter().map(MCLExample::k).collect::<Vec<_>>())?;
            let mut count = 0u32;
            for ex in &sample {
                count += u32::from(mcl_loss(&weights, ex).map_err(CliError::from)?);
            }
            let w = milred::reductions::flatten(&weights);
            let reduced: Vec<MILExample> = sample.iter().map(mcl_reduce).collect();
            let (red_count, red_mean) = reduced_zero_one(&reduced, &w)?;
            Ok((
                SpaceRisk {
                    count,
                    mean: mean_of(count, sample.len()),
                },
                SpaceRisk {
                    count: red_count,
                    mean: red_mean,
                },
                0,
            ))
        }
        OriginalKind::Lcl => {
            let sample = read_lcl_dataset(data)?;
            let weights =
                restore_multiclass(model, &sample.iter().map(LCLExample::k).collect::<Vec<_>>())?;
            let mut count = 0u32;
            for ex in &sample {
                count += u32::from(lcl_loss(&weights, ex).map_err(CliError::from)?);
            }
            let w = milred::reductions::flatten(&weights);
            let reduced: Vec<MILExample> = sample.iter().map(lcl_reduce).collect();
            let (red_count, red_mean) = reduced_zero_one(&reduced, &w)?;
            Ok((
                SpaceRisk {
                    count,
                    mean: mean_of(count, sample.len()),
                },
                SpaceRisk {
                    count: red_count,
                    mean: red_mean,
                },
                0,
            ))
        }
    }
}

fn mean_of(count: u32, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        f64::from(count) / n as f64
    }
}

fn reduced_zero_one(reduced: &[MILExample], w: &LinearWeights) -> Result<(u32, f64), CliError> {
    if reduced.is_empty() {
        return Ok((0, 0.0));
    }
    let mean = empirical_risk_mil(reduced, w, LossKind::ZeroOne).map_err(CliError::from)?;
    let count = (mean * reduced.len() as f64).round() as u32;
    Ok((count, mean))
}

fn restore_multiclass(model: &ModelFile, ks: &[usize]) -> Result<MulticlassWeights, CliError> {
    let Some(&k) = ks.first() else {
        return Err(CliError::data("dataset is empty".into()));
    };
    if ks.iter().any(|&other| other != k) {
        return Err(CliError::data("dataset mixes class counts".into()));
    }
    if model.kind == "multiclass" {
        let classes = model
            .classes
            .ok_or_else(|| CliError::data("multiclass model is missing class count".into()))?;
        if classes != k {
            return Err(CliError::data(format!(
                "model has {classes} classes but dataset has {k}"
            )));
        }
        return MulticlassWeights::from_flat(model.weights.clone(), classes, model.lambda_cap)
            .map_err(|e| CliError::data(format!("invalid model weights: {e}")));
    }
    let omega = model.to_linear()?;
    mcl_restore(&omega, k).map_err(|e| CliError::data(format!("cannot restore model: {e}")))
}

pub fn cmd_eval(
    kind: EvalKind,
    data: &Path,
    model_path: &Path,
    report: &Path,
) -> Result<(), CliError> {
    let model = read_model(model_path)?;
    let mut rows = Vec::new();
    let passed = match kind {
        EvalKind::Mil => {
            let sample = read_mil_dataset(data)?;
            let w = model.to_linear()?;
            let zero_one =
                empirical_risk_mil(&sample, &w, LossKind::ZeroOne).map_err(CliError::from)?;
            let hinge =
                empirical_risk_mil(&sample, &w, LossKind::Hinge).map_err(CliError::from)?;
            rows.push(MetricRow::new("empirical_risk_zero_one", "mil", zero_one, 0.0, true));
            rows.push(MetricRow::new("empirical_risk_hinge", "mil", hinge, 0.0, true));
            true
        }
        EvalKind::Trl | EvalKind::Mcl | EvalKind::Lcl => {
            let original_kind = match kind {
                EvalKind::Trl => OriginalKind::Trl,
                EvalKind::Mcl => OriginalKind::Mcl,
                EvalKind::Lcl => OriginalKind::Lcl,
                EvalKind::Mil => unreachable!(),
            };
            let (original, reduced, skipped) =
                original_and_reduced_risks(original_kind, data, &model)?;
            let matched = original.count == reduced.count;
            rows.push(MetricRow::new(
                "loss_count",
                "original",
                f64::from(original.count),
                0.0,
                true,
            ));
            rows.push(MetricRow::new(
                "loss_count",
                "reduced",
                f64::from(reduced.count),
                0.0,
                true,
            ));
            rows.push(MetricRow::new(
                "empirical_risk_zero_one",
                "original",
                original.mean,
                0.0,
                true,
            ));
            rows.push(MetricRow::new(
                "empirical_risk_zero_one",
                "reduced",
                reduced.mean,
                0.0,
                true,
            ));
            rows.push(MetricRow::new(
                "skipped_examples",
                "reduced",
                skipped as f64,
                0.0,
                true,
            ));
            rows.push(MetricRow::new(
                "loss_count_match",
                "both",
                (f64::from(original.count) - f64::from(reduced.count)).abs(),
                0.0,
                matched,
            ));
            matched
        }
    };

    let report = resolve_out(report);
    formats::write_metric_csv(&report, &rows)?;
    print!("{}", formats::metric_csv(&rows));
    println!("report -> {}", report.display());
    if !passed {
        return Err(CliError::Verification {
            message: "original and reduced loss counts disagree".into(),
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bound(
    data: &Path,
    model_path: &Path,
    lipschitz: f64,
    r_norm: Option<f64>,
    lambda_cap: Option<f64>,
    eta: f64,
    delta: f64,
    theta: Option<f64>,
    k: Option<usize>,
    report: &Path,
) -> Result<(), CliError> {
    let sample = read_mil_dataset(data)?;
    let model = read_model(model_path)?;
    let w = model.to_linear()?;

    let max_instance_norm = sample
        .iter()
        .flat_map(|ex| ex.bag.instances())
        .map(Instance::norm)
        .fold(0.0f64, f64::max);
    let r_norm = r_norm.unwrap_or(max_instance_norm);
    let lambda_cap = lambda_cap.or(w.lambda_cap()).unwrap_or_else(|| w.norm());

    let params = BoundParams {
        lipschitz,
        r_norm,
        lambda_cap,
        n: sample.len(),
        total_bag_instances: total_bag_instances(&sample),
        union_instances: count_union_instances(&sample),
        eta,
        delta,
    };
    let complexity = mil_complexity_bound(&params).map_err(CliError::from)?;
    let dev_literal =
        deviation_term(params.n, delta, DeviationMode::InverseDelta).map_err(CliError::from)?;
    let dev_log =
        deviation_term(params.n, delta, DeviationMode::LogInverseDelta).map_err(CliError::from)?;
    let scale = match (theta, k) {
        (Some(theta), Some(k)) => lcl_risk_scale(theta, k),
        (None, None) => 1.0,
        _ => {
            return Err(CliError::data(
                "--theta and --k must be given together".into(),
            ))
        }
    };
    let hinge_risk =
        empirical_risk_mil(&sample, &w, LossKind::Hinge).map_err(CliError::from)?;

    let rows = vec![
        MetricRow::new("complexity_expr1", "reduced", complexity.expr1, 0.0, true),
        MetricRow::new(
            "complexity_expr1_degenerate",
            "reduced",
            f64::from(u8::from(complexity.expr1_degenerate)),
            0.0,
            true,
        ),
        MetricRow::new("complexity_expr2", "reduced", complexity.expr2, 0.0, true),
        MetricRow::new(
            "complexity_expr2_degenerate",
            "reduced",
            f64::from(u8::from(complexity.expr2_degenerate)),
            0.0,
            true,
        ),
        MetricRow::new("complexity_min", "reduced", complexity.value(), 0.0, true),
        MetricRow::new("deviation_inverse_delta", "reduced", dev_literal, 0.0, true),
        MetricRow::new("deviation_log_inverse_delta", "reduced", dev_log, 0.0, true),
        MetricRow::new("risk_scale", "original", scale, 0.0, true),
        MetricRow::new("empirical_risk_hinge", "reduced", hinge_risk, 0.0, true),
        MetricRow::new(
            "assembled_bound_inverse_delta",
            "original",
            assemble_bound(hinge_risk, complexity.value(), dev_literal, scale),
            0.0,
            true,
        ),
        MetricRow::new(
            "assembled_bound_log_inverse_delta",
            "original",
            assemble_bound(hinge_risk, complexity.value(), dev_log, scale),
            0.0,
            true,
        ),
    ];
    let report = resolve_out(report);
    formats::write_metric_csv(&report, &rows)?;
    print!("{}", formats::metric_csv(&rows));
    println!("report -> {}", report.display());
    Ok(())
}

fn normal_vec(rng: &mut ChaCha12Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

fn loss_equality_bulk(seed: u64) -> Vec<VerificationReport> {
    let draws = 2_000;
    let mut reports = Vec::new();

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut violations = 0u32;
    for _ in 0..draws {
        let d = rng.random_range(1..=4);
        let len = rng.random_range(1..=6);
        let items: Vec<Instance> = (0..len)
            .map(|_| Instance::new(normal_vec(&mut rng, d)).unwrap())
            .collect();
        let ex = TRLExample::new(items, rng.random_range(0..len)).unwrap();
        let w = LinearWeights::uncapped(normal_vec(&mut rng, d)).unwrap();
        if !check_loss_equality(&TrlReduction, &ex, &w).unwrap().passed {
            violations += 1;
        }
    }
    reports.push(VerificationReport::equality(
        "loss_equality_bulk_trl",
        f64::from(violations),
        0.0,
        0.0,
        None,
    ));

    let mut violations = 0u32;
    for _ in 0..draws {
        let d = rng.random_range(1..=4);
        let k = rng.random_range(2..=5);
        let ex = MCLExample::new(
            Instance::new(normal_vec(&mut rng, d)).unwrap(),
            rng.random_range(1..=k),
            k,
        )
        .unwrap();
        let h = MulticlassWeights::from_flat(normal_vec(&mut rng, d * k), k, None).unwrap();
        if !check_loss_equality(&MclReduction { k }, &ex, &h)
            .unwrap()
            .passed
        {
            violations += 1;
        }
    }
    reports.push(VerificationReport::equality(
        "loss_equality_bulk_mcl",
        f64::from(violations),
        0.0,
        0.0,
        None,
    ));

    let mut violations = 0u32;
    for _ in 0..draws {
        let d = rng.random_range(1..=4);
        let k = rng.random_range(2..=5);
        let gamma = rng.random::<bool>();
        let ex = LCLExample::new(
            Instance::new(normal_vec(&mut rng, d)).unwrap(),
            rng.random_range(1..=k),
            gamma,
            k,
        )
        .unwrap();
        let h = MulticlassWeights::from_flat(normal_vec(&mut rng, d * k), k, None).unwrap();
        if !check_loss_equality(&LclReduction { k }, &ex, &h)
            .unwrap()
            .passed
        {
            violations += 1;
        }
    }
    reports.push(VerificationReport::equality(
        "loss_equality_bulk_lcl",
        f64::from(violations),
        0.0,
        0.0,
        None,
    ));

    reports
}

fn erm_checks(seed: u64) -> Result<Vec<VerificationReport>, CliError> {
    let grid_points = 2_000;
    let mut reports = Vec::new();

    let trl = gen_trl(&GenConfig {
        seed,
        n: 6,
        d: 2,
        set_size: 3,
        r_norm: 1.0,
        margin: None,
        ..GenConfig::default()
    })
    .map_err(CliError::from)?;
    let grid = HypothesisGrid::seeded_ball(2, grid_points, 1.0, seed ^ 0xa5, None)
        .map_err(CliError::from)?;
    reports.push(
        verify_erm_equality(&TrlReduction, &trl.examples, &grid).map_err(CliError::from)?,
    );

    let mcl = gen_mcl(&GenConfig {
        seed: seed + 1,
        n: 6,
        d: 2,
        k: 3,
        r_norm: 1.0,
        margin: None,
        ..GenConfig::default()
    })
    .map_err(CliError::from)?;
    let grid = HypothesisGrid::seeded_ball(6, grid_points, 1.0, seed ^ 0xb6, None)
        .map_err(CliError::from)?;
    reports.push(
        verify_erm_equality(&MclReduction { k: 3 }, &mcl.examples, &grid)
            .map_err(CliError::from)?,
    );

    let lcl = gen_lcl(&GenConfig {
        seed: seed + 2,
        n: 6,
        d: 2,
        k: 3,
        theta: 0.5,
        r_norm: 1.0,
        margin: None,
        ..GenConfig::default()
    })
    .map_err(CliError::from)?;
    let grid = HypothesisGrid::seeded_ball(6, grid_points, 1.0, seed ^ 0xc7, None)
        .map_err(CliError::from)?;
    reports.push(
        verify_erm_equality(&LclReduction { k: 3 }, &lcl.examples, &grid)
            .map_err(CliError::from)?,
    );
    Ok(reports)
}

fn rademacher_checks(seed: u64) -> Result<Vec<VerificationReport>, CliError> {
    let mut reports = Vec::new();
    let trl = gen_trl(&GenConfig {
        seed,
        n: 10,
        d: 2,
        set_size: 3,
        r_norm: 1.0,
        margin: None,
        ..GenConfig::default()
    })
    .map_err(CliError::from)?;
    let grid =
        HypothesisGrid::seeded_ball(2, 64, 1.0, seed ^ 0x11, None).map_err(CliError::from)?;
    reports.push(
        verify_rademacher_equality(&TrlReduction, &trl.examples, &grid, 100, seed ^ 0x21)
            .map_err(CliError::from)?,
    );

    let mcl = gen_mcl(&GenConfig {
        seed: seed + 1,
        n: 10,
        d: 2,
        k: 3,
        r_norm: 1.0,
        margin: None,
        ..GenConfig::default()
    })
    .map_err(CliError::from)?;
    let grid =
        HypothesisGrid::seeded_ball(6, 64, 1.0, seed ^ 0x12, None).map_err(CliError::from)?;
    reports.push(
        verify_rademacher_equality(&MclReduction { k: 3 }, &mcl.examples, &grid, 100, seed ^ 0x22)
            .map_err(CliError::from)?,
    );

    let lcl = gen_lcl(&GenConfig {
        seed: seed + 2,
        n: 10,
        d: 2,
        k: 3,
        theta: 0.5,
        r_norm: 1.0,
        margin: None,
        ..GenConfig::default()
    })
    .map_err(CliError::from)?;
    let grid =
        HypothesisGrid::seeded_ball(6, 64, 1.0, seed ^ 0x13, None).map_err(CliError::from)?;
    reports.push(
        verify_rademacher_equality(&LclReduction { k: 3 }, &lcl.examples, &grid, 100, seed ^ 0x23)
            .map_err(CliError::from)?,
    );
    Ok(reports)
}

fn risk_rescaling_checks(seed: u64) -> Result<Vec<VerificationReport>, CliError> {
    let (d, k) = (2usize, 4usize);
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x77);
    let mut reports = Vec::new();
    for &theta in &[0.0, 0.5, 1.0] {
        let weights = MulticlassWeights::from_flat(normal_vec(&mut rng, d * k), k, None)
            .map_err(CliError::from)?;
        let cfg = GenConfig {
            seed: 0,
            n: 1,
            d,
            k,
            theta,
            r_norm: 1.0,
            margin: None,
            ..GenConfig::default()
        };
        let mut report = verify_risk_rescaling_montecarlo(&cfg, &weights, 20_000, seed ^ 0x88)
            .map_err(CliError::from)?;
        report.name = format!("{}_theta_{theta}", report.name);
        reports.push(report);
    }
    Ok(reports)
}

fn solver_checks(seed: u64) -> Result<Vec<VerificationReport>, CliError> {
    let trl = gen_trl(&GenConfig {
        seed,
        n: 6,
        d: 2,
        set_size: 4,
        r_norm: 1.0,
        margin: None,
        ..GenConfig::default()
    })
    .map_err(CliError::from)?;
    let reduced = reduce_trl_sample(&trl.examples).map_err(CliError::from)?;
    let config = SolverConfig::default();
    let result = train_oneclass_misvm(&reduced.examples, &config).map_err(CliError::from)?;
    let grid =
        HypothesisGrid::seeded_ball(2, 4_000, 3.0, seed ^ 0x31, None).map_err(CliError::from)?;
    let report = verify_solver_optimality(
        &reduced.examples,
        &result,
        &grid,
        config.c_reg,
        1e-4,
        200,
        seed ^ 0x32,
    )
    .map_err(CliError::from)?;
    Ok(vec![report])
}

pub fn cmd_verify(checks: &str, seeds: u64, report_path: &Path) -> Result<(), CliError> {
    let selected: Vec<&str> = if checks == "all" {
        vec!["loss-equality", "erm", "rademacher", "risk-rescaling", "solver"]
    } else {
        checks.split(',').map(str::trim).collect()
    };
    let mut reports = Vec::new();
    for seed in 1..=seeds {
        for &check in &selected {
            let mut batch = match check {
                "loss-equality" => loss_equality_bulk(seed),
                "erm" => erm_checks(seed)?,
                "rademacher" => rademacher_checks(seed)?,
                "risk-rescaling" => risk_rescaling_checks(seed)?,
                "solver" => solver_checks(seed)?,
                other => {
                    return Err(CliError::data(format!(
                        "unknown check {other:?}; expected loss-equality, erm, rademacher, risk-rescaling, solver, or all"
                    )))
                }
            };
            for report in &mut batch {
                report.name = format!("{}_seed{}", report.name, seed);
            }
            reports.extend(batch);
        }
    }

    for report in &reports {
        println!(
            "{}: {}",
            report.name,
            if report.passed { "PASS" } else { "FAIL" }
        );
    }
    let report_path = resolve_out(report_path);
    formats::write_verify_report(&report_path, &reports)?;
    println!("report -> {}", report_path.display());

    let failures = reports.iter().filter(|r| !r.passed).count();
    if failures > 0 {
        return Err(CliError::Verification {
            message: format!("{failures} of {} checks failed", reports.len()),
        });
    }
    println!("all {} checks passed", reports.len());
    Ok(())
}
