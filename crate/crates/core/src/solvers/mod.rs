//! ERM solvers for the reduced problems.
//!
//! * [`train_oneclass_misvm`]: all bags labeled -1; the hinge-of-max
//!   objective is convex (the max pulls out of the hinge as a max of per
//!   instance hinges) and is solved to a certified duality gap.
//! * [`train_binary_misvm_dc`]: mixed labels; CCCP outer loop that fixes
//!   each positive bag's witness instance, solves the convex subproblem, and
//!   repeats while the true objective keeps dropping.
//! * [`train_multiclass_svm_direct`]: the margin objective optimized
//!   natively in per-class rows, used as an independent route to cross-check
//!   the reduced path.
//!
//! All solvers are deterministic: same sample and config give bitwise
//! identical results.

mod convex;
mod multiclass;

pub use multiclass::{
    objective_multiclass_direct, train_multiclass_svm_direct, MulticlassSolverResult,
};

use crate::core::{bag_score_raw, hinge, LinearWeights, MILExample};
use crate::error::{Error, Result};
use convex::{ConvexSubproblem, SubproblemSolution};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

/// Training hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Slack penalty weight in the objective.
    pub c_reg: f64,
    /// Absolute objective tolerance; convex solves certify a duality gap at
    /// most this large.
    pub tol: f64,
    /// Inner iteration budget per convex solve (sweeps, for the direct
    /// multi-class solver).
    pub max_iters: usize,
    /// Stop the DC outer loop once an iteration improves the objective by
    /// less than this.
    pub dc_epsilon: f64,
    /// Seed for randomized restarts.
    pub seed: u64,
    /// Extra seeded random initializations for the DC solver; the best final
    /// objective wins. 0 keeps only the deterministic zero start.
    pub restarts: usize,
    /// DC outer iteration cap.
    pub max_outer_iters: usize,
    /// Optional hypothesis norm cap; `None` solves the uncapped formulation.
    pub lambda_cap: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            c_reg: 1.0,
            tol: 1e-6,
            max_iters: 50_000,
            dc_epsilon: 1e-8,
            seed: 0,
            restarts: 0,
            max_outer_iters: 100,
            lambda_cap: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c_reg", self.c_reg),
            ("tol", self.tol),
            ("dc_epsilon", self.dc_epsilon),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        if self.max_outer_iters == 0 {
            return Err(Error::InvalidParameter(
                "max_outer_iters must be >= 1".into(),
            ));
        }
        if let Some(cap) = self.lambda_cap {
            if cap <= 0.0 || !cap.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "lambda_cap must be positive and finite, got {cap}"
                )));
            }
        }
        Ok(())
    }
}

/// Output of a training run. The trace records the true objective after the
/// initial point and each accepted outer iteration, and never increases.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub weights: LinearWeights,
    pub objective: f64,
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

/// Which solver [`train_auto`] picked, by label content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainingPath {
    OneClassConvex,
    DifferenceOfConvex,
}

impl std::fmt::Display for TrainingPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrainingPath::OneClassConvex => write!(f, "one-class-convex"),
            TrainingPath::DifferenceOfConvex => write!(f, "dc"),
        }
    }
}

/// MI-SVM objective with slacks eliminated:
/// `0.5 ||w||^2 + c * sum_i hinge(y_i, bag_score(w, B_i))`.
pub fn objective_misvm(sample: &[MILExample], w: &LinearWeights, c_reg: f64) -> Result<f64> {
    let dim = sample_dim(sample)?;
    if w.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: w.dim(),
        });
    }
    if c_reg <= 0.0 || !c_reg.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "c_reg must be positive and finite, got {c_reg}"
        )));
    }
    Ok(objective_misvm_raw(sample, w.as_slice(), c_reg))
}

pub(crate) fn objective_misvm_raw(sample: &[MILExample], w: &[f64], c_reg: f64) -> f64 {
    let norm_sq: f64 = w.iter().map(|c| c * c).sum();
    let hinge_sum: f64 = sample
        .iter()
        .map(|ex| hinge(ex.label(), bag_score_raw(w, &ex.bag)))
        .sum();
    0.5 * norm_sq + c_reg * hinge_sum
}

fn sample_dim(sample: &[MILExample]) -> Result<usize> {
    let first = sample.first().ok_or(Error::EmptySample)?;
    let dim = first.bag.dim();
    for ex in sample {
        if ex.bag.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: ex.bag.dim(),
            });
        }
    }
    Ok(dim)
}

/// Builds the convex subproblem for a witness assignment. Groups are pushed
/// in example order so dual variables stay aligned across witness updates:
/// negative bags contribute all instances negated, positive bags contribute
/// the single witness instance.
fn build_subproblem(
    sample: &[MILExample],
    dim: usize,
    c_reg: f64,
    witnesses: &[usize],
) -> ConvexSubproblem {
    let mut sub = ConvexSubproblem::new(dim, c_reg);
    let mut pos_index = 0;
    for ex in sample {
        if ex.label() == -1 {
            let negated: Vec<Vec<f64>> = ex
                .bag
                .instances()
                .iter()
                .map(|inst| inst.coords().iter().map(|c| -c).collect())
                .collect();
            sub.push_group(negated.iter().map(Vec::as_slice));
        } else {
            let witness = ex.bag.instances()[witnesses[pos_index]].coords();
            pos_index += 1;
            sub.push_group(std::iter::once(witness));
        }
    }
    sub
}

/// Lowest-index argmax witness per positive bag (all-zero weights pick
/// index 0).
fn pick_witnesses(sample: &[MILExample], w: &[f64]) -> Vec<usize> {
    let mut witnesses = Vec::new();
    for ex in sample {
        if ex.label() == 1 {
            let mut best = 0;
            let mut best_score = f64::NEG_INFINITY;
            for (j, inst) in ex.bag.instances().iter().enumerate() {
                let score = inst.coords().iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
                if score > best_score {
                    best_score = score;
                    best = j;
                }
            }
            witnesses.push(best);
        }
    }
    witnesses
}

/// Solves one convex subproblem, honoring an optional norm cap by bisecting
/// the KKT multiplier of `||w|| <= cap`: the capped minimizer equals the
/// uncapped minimizer of the same problem with penalty weight `c / (1 + nu)`
/// for the `nu >= 0` whose solution lands on the norm boundary.
fn solve_convex(
    sub: &mut ConvexSubproblem,
    c_reg: f64,
    config: &SolverConfig,
    warm: Option<&[f64]>,
) -> SubproblemSolution {
    sub.set_cap(c_reg);
    let base = sub.solve(config.tol, config.max_iters, warm);
    let Some(cap) = config.lambda_cap else {
        return base;
    };
    let norm = |w: &[f64]| w.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm(&base.w) <= cap {
        return base;
    }

    // bracket the multiplier
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut warm_lambda = base.lambda.clone();
    let mut best = None;
    for _ in 0..60 {
        sub.set_cap(c_reg / (1.0 + hi));
        let sol = sub.solve(config.tol, config.max_iters, Some(&warm_lambda));
        warm_lambda = sol.lambda.clone();
        let n = norm(&sol.w);
        if n <= cap {
            best = Some(sol);
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    let Some(mut best) = best else {
        // even extreme shrinkage stays above the cap; give up and rescale
        let mut sol = base;
        let scale = cap / norm(&sol.w);
        for c in sol.w.iter_mut() {
            *c *= scale;
        }
        sol.converged = false;
        return sol;
    };

    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        sub.set_cap(c_reg / (1.0 + mid));
        let sol = sub.solve(config.tol, config.max_iters, Some(&warm_lambda));
        warm_lambda = sol.lambda.clone();
        let n = norm(&sol.w);
        if n <= cap {
            hi = mid;
            best = sol;
            if n >= cap * (1.0 - 1e-9) {
                break;
            }
        } else {
            lo = mid;
        }
    }
    // land exactly inside the feasible ball
    let n = norm(&best.w);
    if n > cap {
        let scale = cap / n;
        for c in best.w.iter_mut() {
            *c *= scale;
        }
    }
    best
}

fn finish_result(
    sample: &[MILExample],
    config: &SolverConfig,
    w: Vec<f64>,
    trace: Vec<f64>,
    iterations: usize,
    converged: bool,
) -> Result<SolverResult> {
    let objective = objective_misvm_raw(sample, &w, config.c_reg);
    let weights = LinearWeights::new(w, config.lambda_cap)?;
    Ok(SolverResult {
        weights,
        objective,
        iterations,
        objective_trace: trace,
        converged,
    })
}

/// Convex one-class MI-SVM: requires every label to be -1 and returns a
/// solution whose objective is within `config.tol` of the global optimum
/// (certified by the duality gap).
pub fn train_oneclass_misvm(sample: &[MILExample], config: &SolverConfig) -> Result<SolverResult> {
    config.validate()?;
    let dim = sample_dim(sample)?;
    if let Some(i) = sample.iter().position(|ex| ex.label() == 1) {
        return Err(Error::PositiveLabelInOneClass(i));
    }
    let initial = objective_misvm_raw(sample, &vec![0.0; dim], config.c_reg);
    let mut sub = build_subproblem(sample, dim, config.c_reg, &[]);
    let sol = solve_convex(&mut sub, config.c_reg, config, None);
    let objective = objective_misvm_raw(sample, &sol.w, config.c_reg);
    finish_result(
        sample,
        config,
        sol.w,
        vec![initial, objective],
        sol.iterations,
        sol.converged,
    )
}

struct DcRun {
    w: Vec<f64>,
    objective: f64,
    trace: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn dc_run(sample: &[MILExample], dim: usize, config: &SolverConfig, w_init: Vec<f64>) -> DcRun {
    let mut w = w_init;
    let mut objective = objective_misvm_raw(sample, &w, config.c_reg);
    let mut trace = vec![objective];
    let mut warm: Option<Vec<f64>> = None;
    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..config.max_outer_iters {
        let witnesses = pick_witnesses(sample, &w);
        let mut sub = build_subproblem(sample, dim, config.c_reg, &witnesses);
        let sol = solve_convex(&mut sub, config.c_reg, config, warm.as_deref());
        iterations += sol.iterations;
        warm = Some(sol.lambda.clone());
        let candidate = objective_misvm_raw(sample, &sol.w, config.c_reg);
        if candidate > objective {
            // within inner-solver slack of a fixed point; stop on the last
            // accepted iterate to keep the trace monotone
            converged = true;
            break;
        }
        let decrease = objective - candidate;
        w = sol.w;
        objective = candidate;
        trace.push(objective);
        if decrease < config.dc_epsilon {
            converged = true;
            break;
        }
    }
    DcRun {
        w,
        objective,
        trace,
        iterations,
        converged,
    }
}

/// Binary MI-SVM via CCCP: fixes the witness instance of each positive bag,
/// solves the convex subproblem, and repeats until the objective decrease
/// falls below `dc_epsilon`. Reaches a local optimum; `config.restarts` adds
/// seeded random initializations. An all-negative sample short-circuits to
/// [`train_oneclass_misvm`].
pub fn train_binary_misvm_dc(sample: &[MILExample], config: &SolverConfig) -> Result<SolverResult> {
    config.validate()?;
    let dim = sample_dim(sample)?;
    if sample.iter().all(|ex| ex.label() == -1) {
        return train_oneclass_misvm(sample, config);
    }

    let mut best = dc_run(sample, dim, config, vec![0.0; dim]);
    if config.restarts > 0 {
        let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
        let scale = 1.0 / (dim as f64).sqrt();
        for _ in 0..config.restarts {
            let init: Vec<f64> = (0..dim)
                .map(|_| {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    g * scale
                })
                .collect();
            let run = dc_run(sample, dim, config, init);
            if run.objective < best.objective {
                best = run;
            }
        }
    }
    finish_result(
        sample,
        config,
        best.w,
        best.trace,
        best.iterations,
        best.converged,
    )
}

/// Dispatch by label content: an all-negative sample trains on the convex
/// one-class path, anything else goes through the DC solver.
pub fn train_auto(
    sample: &[MILExample],
    config: &SolverConfig,
) -> Result<(SolverResult, TrainingPath)> {
    if !sample.is_empty() && sample.iter().all(|ex| ex.label() == -1) {
        Ok((
            train_oneclass_misvm(sample, config)?,
            TrainingPath::OneClassConvex,
        ))
    } else {
        Ok((
            train_binary_misvm_dc(sample, config)?,
            TrainingPath::DifferenceOfConvex,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Bag, Instance};

    fn bag(instances: &[&[f64]]) -> Bag {
        Bag::new(
            instances
                .iter()
                .map(|c| Instance::new(c.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn mil(instances: &[&[f64]], label: i8) -> MILExample {
        MILExample::new(bag(instances), label).unwrap()
    }

    fn lw(w: &[f64]) -> LinearWeights {
        LinearWeights::uncapped(w.to_vec()).unwrap()
    }

    #[test]
    fn objective_values() {
        let s = vec![mil(&[&[1.0, 0.0]], -1)];
        assert_eq!(objective_misvm(&s, &lw(&[0.0, 0.0]), 1.0).unwrap(), 1.0);
        assert_eq!(objective_misvm(&s, &lw(&[-1.0, 0.0]), 1.0).unwrap(), 0.5);
        let s = vec![mil(&[&[1.0, 0.0], &[0.0, 1.0]], -1)];
        assert_eq!(objective_misvm(&s, &lw(&[-1.0, -1.0]), 10.0).unwrap(), 1.0);
        assert!(objective_misvm(&[], &lw(&[1.0]), 1.0).is_err());
    }

    #[test]
    fn oneclass_single_bag() {
        let s = vec![mil(&[&[1.0, 0.0]], -1)];
        let r = train_oneclass_misvm(&s, &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.objective - 0.5).abs() < 1e-6);
        assert!((r.weights.as_slice()[0] + 1.0).abs() < 1e-3);
        assert!(r.weights.as_slice()[1].abs() < 1e-6);
        assert_eq!(r.objective_trace.len(), 2);
        assert!(r.objective_trace[0] >= r.objective_trace[1]);
    }

    #[test]
    fn oneclass_two_instance_bag() {
        let s = vec![mil(&[&[1.0, 0.0], &[0.0, 1.0]], -1)];
        let config = SolverConfig {
            c_reg: 100.0,
            ..SolverConfig::default()
        };
        let r = train_oneclass_misvm(&s, &config).unwrap();
        assert!(r.converged);
        assert!((r.objective - 1.0).abs() < 1e-6);
    }

    #[test]
    fn oneclass_vanishing_c() {
        let s = vec![
            mil(&[&[1.0, 0.0]], -1),
            mil(&[&[0.5, 0.5]], -1),
            mil(&[&[0.0, 1.0]], -1),
        ];
        let config = SolverConfig {
            c_reg: 1e-8,
            tol: 1e-12,
            ..SolverConfig::default()
        };
        let r = train_oneclass_misvm(&s, &config).unwrap();
        assert!(r.objective <= 3.0 * 1e-8 + 1e-12);
        assert!(r.weights.norm() <= (2.0 * 3.0 * 1e-8f64).sqrt() + 1e-9);
    }

    #[test]
    fn oneclass_rejects_positive_labels() {
        let s = vec![mil(&[&[1.0]], -1), mil(&[&[2.0]], 1)];
        assert!(matches!(
            train_oneclass_misvm(&s, &SolverConfig::default()),
            Err(Error::PositiveLabelInOneClass(1))
        ));
    }

    #[test]
    fn dc_symmetric_positive_bag() {
        let s = vec![mil(&[&[1.0, 0.0], &[-1.0, 0.0]], 1)];
        let config = SolverConfig {
            c_reg: 100.0,
            ..SolverConfig::default()
        };
        let r = train_binary_misvm_dc(&s, &config).unwrap();
        assert!(r.converged);
        assert!((r.objective - 0.5).abs() < 1e-6);
        // zero init picks the lowest-index witness (1, 0)
        assert!((r.weights.as_slice()[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn dc_delegates_all_negative_to_oneclass() {
        let s = vec![mil(&[&[1.0, 0.2], &[0.3, 0.8]], -1), mil(&[&[0.4, 0.1]], -1)];
        let config = SolverConfig::default();
        let dc = train_binary_misvm_dc(&s, &config).unwrap();
        let oc = train_oneclass_misvm(&s, &config).unwrap();
        assert_eq!(dc, oc);
    }

    #[test]
    fn dc_trace_monotone_and_deterministic() {
        let s = vec![
            mil(&[&[1.0, 0.3], &[-0.5, 0.8]], 1),
            mil(&[&[0.9, -0.8], &[0.1, 0.4]], -1),
            mil(&[&[-0.2, -0.9]], 1),
            mil(&[&[0.7, 0.7], &[0.6, -0.1]], -1),
        ];
        let config = SolverConfig {
            restarts: 2,
            ..SolverConfig::default()
        };
        let a = train_binary_misvm_dc(&s, &config).unwrap();
        let b = train_binary_misvm_dc(&s, &config).unwrap();
        assert_eq!(a, b);
        for pair in a.objective_trace.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-12);
        }
        assert_eq!(a.objective, objective_misvm(&s, &a.weights, 1.0).unwrap());
    }

    #[test]
    fn capped_training_projects_onto_ball() {
        let s = vec![mil(&[&[1.0, 0.0]], -1)];
        let config = SolverConfig {
            lambda_cap: Some(0.5),
            ..SolverConfig::default()
        };
        let r = train_oneclass_misvm(&s, &config).unwrap();
        assert!(r.weights.norm() <= 0.5 * (1.0 + 1e-9));
        // capped optimum: w = (-0.5, 0), objective 0.125 + 0.5
        assert!((r.objective - 0.625).abs() < 1e-4);
        assert_eq!(r.weights.lambda_cap(), Some(0.5));
    }

    #[test]
    fn auto_dispatches_by_label_content() {
        let neg = vec![mil(&[&[1.0]], -1)];
        let (_, path) = train_auto(&neg, &SolverConfig::default()).unwrap();
        assert_eq!(path, TrainingPath::OneClassConvex);
        let mixed = vec![mil(&[&[1.0]], -1), mil(&[&[0.5]], 1)];
        let (_, path) = train_auto(&mixed, &SolverConfig::default()).unwrap();
        assert_eq!(path, TrainingPath::DifferenceOfConvex);
        let pos = vec![mil(&[&[1.0]], 1)];
        let (_, path) = train_auto(&pos, &SolverConfig::default()).unwrap();
        assert_eq!(path, TrainingPath::DifferenceOfConvex);
    }
}
