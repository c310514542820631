//! Direct multi-class SVM in per-class weight rows:
//!
//! ```text
//! min_W 0.5 ||W||^2 + c * sum_i max(0, 1 + max_{y' != y_i} <w_{y'} - w_{y_i}, x_i>)
//! ```
//!
//! This is the same function the one-class MI-SVM minimizes on the reduced
//! block-embedded bags, optimized here natively over rows as an independent
//! route: the two solvers share nothing past the objective value, so their
//! agreement cross-checks the embedding and the bookkeeping on both sides.
//!
//! Method: deterministic cyclic dual coordinate ascent. Each example owns a
//! block of k-1 dual variables (one per rival class) constrained to a capped
//! simplex; single-coordinate steps use the exact line search, and a pairwise
//! transfer unsticks blocks resting on the cap. The duality gap is evaluated
//! exactly and certifies the result.

use crate::core::{MCLExample, MulticlassWeights};
use crate::error::{Error, Result};
use crate::solvers::SolverConfig;

/// Output of the direct multi-class solver.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassSolverResult {
    pub weights: MulticlassWeights,
    pub objective: f64,
    /// Coordinate sweeps over the sample.
    pub iterations: usize,
    pub converged: bool,
}

struct Problem<'a> {
    sample: &'a [MCLExample],
    k: usize,
    d: usize,
    /// 2 * ||x_i||^2, the curvature of every dual coordinate of example i.
    curvature: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(sample: &'a [MCLExample]) -> Result<Self> {
        let first = sample.first().ok_or(Error::EmptySample)?;
        let k = first.k();
        let d = first.x().dim();
        for ex in sample {
            if ex.k() != k {
                return Err(Error::ClassCountMismatch {
                    weights_k: k,
                    example_k: ex.k(),
                });
            }
            if ex.x().dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: ex.x().dim(),
                });
            }
        }
        let curvature = sample
            .iter()
            .map(|ex| 2.0 * ex.x().coords().iter().map(|c| c * c).sum::<f64>())
            .collect();
        Ok(Self {
            sample,
            k,
            d,
            curvature,
        })
    }

    /// Rival class for slot `s` of example `i` (slots skip the true class).
    fn rival(&self, i: usize, slot: usize) -> usize {
        let y = self.sample[i].y();
        if slot + 1 < y {
            slot + 1
        } else {
            slot + 2
        }
    }

    fn row<'w>(&self, w: &'w [f64], class: usize) -> &'w [f64] {
        &w[(class - 1) * self.d..class * self.d]
    }

    /// `<w_rival - w_y, x_i>`.
    fn rival_score(&self, w: &[f64], i: usize, rival: usize) -> f64 {
        let x = self.sample[i].x().coords();
        let y = self.sample[i].y();
        let wr = self.row(w, rival);
        let wy = self.row(w, y);
        x.iter()
            .zip(wr.iter().zip(wy))
            .map(|(xi, (r, o))| xi * (r - o))
            .sum()
    }

    /// Applies `alpha[i][slot] += delta` to the weight rows.
    fn apply(&self, w: &mut [f64], i: usize, rival: usize, delta: f64) {
        let x = self.sample[i].x().coords();
        let y = self.sample[i].y();
        let start_r = (rival - 1) * self.d;
        let start_y = (y - 1) * self.d;
        for (j, xi) in x.iter().enumerate() {
            w[start_r + j] -= delta * xi;
            w[start_y + j] += delta * xi;
        }
    }

    fn primal(&self, w: &[f64], c: f64) -> f64 {
        let norm_sq: f64 = w.iter().map(|v| v * v).sum();
        let mut hinge_sum = 0.0;
        for i in 0..self.sample.len() {
            let worst = (1..=self.k)
                .filter(|&j| j != self.sample[i].y())
                .map(|j| self.rival_score(w, i, j))
                .fold(f64::NEG_INFINITY, f64::max);
            hinge_sum += (1.0 + worst).max(0.0);
        }
        0.5 * norm_sq + c * hinge_sum
    }

    /// Rebuilds W from the dual variables, clearing accumulated drift.
    fn rebuild(&self, alpha: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; self.k * self.d];
        let slots = self.k - 1;
        for i in 0..self.sample.len() {
            for slot in 0..slots {
                let a = alpha[i * slots + slot];
                if a != 0.0 {
                    self.apply(&mut w, i, self.rival(i, slot), a);
                }
            }
        }
        w
    }
}

fn solve_direct(problem: &Problem, c: f64, gap_tol: f64, max_sweeps: usize) -> (Vec<f64>, usize, bool) {
    let n = problem.sample.len();
    let slots = problem.k - 1;
    let mut alpha = vec![0.0; n * slots];
    let mut block_sum = vec![0.0; n];
    let mut w = vec![0.0; problem.k * problem.d];

    // examples with zero features contribute a constant hinge; their dual
    // block sits at the cap and never touches W
    for i in 0..n {
        if problem.curvature[i] == 0.0 {
            alpha[i * slots] = c;
            block_sum[i] = c;
        }
    }

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        for i in 0..n {
            let q = problem.curvature[i];
            if q == 0.0 {
                continue;
            }
            for slot in 0..slots {
                let rival = problem.rival(i, slot);
                let g = 1.0 + problem.rival_score(&w, i, rival);
                let a = alpha[i * slots + slot];
                let delta = (g / q).clamp(-a, (c - block_sum[i]).max(0.0));
                if delta != 0.0 {
                    alpha[i * slots + slot] += delta;
                    block_sum[i] += delta;
                    problem.apply(&mut w, i, rival, delta);
                }
            }
            // block resting on the cap: move mass from the flattest rival to
            // the steepest one
            if block_sum[i] >= c * (1.0 - 1e-12) && slots > 1 {
                let mut best_slot = 0;
                let mut best_g = f64::NEG_INFINITY;
                let mut worst_slot = None;
                let mut worst_g = f64::INFINITY;
                for slot in 0..slots {
                    let g = 1.0 + problem.rival_score(&w, i, problem.rival(i, slot));
                    if g > best_g {
                        best_g = g;
                        best_slot = slot;
                    }
                    if alpha[i * slots + slot] > 0.0 && g < worst_g {
                        worst_g = g;
                        worst_slot = Some(slot);
                    }
                }
                if let Some(worst_slot) = worst_slot {
                    if worst_slot != best_slot && best_g > worst_g {
                        let t = ((best_g - worst_g) / q).min(alpha[i * slots + worst_slot]);
                        if t > 0.0 {
                            alpha[i * slots + best_slot] += t;
                            alpha[i * slots + worst_slot] -= t;
                            problem.apply(&mut w, i, problem.rival(i, best_slot), t);
                            problem.apply(&mut w, i, problem.rival(i, worst_slot), -t);
                        }
                    }
                }
            }
        }

        if sweeps % 64 == 0 {
            w = problem.rebuild(&alpha);
        }
        let dual = alpha.iter().sum::<f64>() - 0.5 * w.iter().map(|v| v * v).sum::<f64>();
        if problem.primal(&w, c) - dual <= gap_tol {
            converged = true;
            break;
        }
    }
    (problem.rebuild(&alpha), sweeps, converged)
}

/// Trains the multi-class margin objective directly in row space. With a
/// norm cap the KKT multiplier is bisected exactly as in the linear solvers.
pub fn train_multiclass_svm_direct(
    sample: &[MCLExample],
    config: &SolverConfig,
) -> Result<MulticlassSolverResult> {
    config.validate()?;
    let problem = Problem::new(sample)?;
    let (mut w, mut sweeps, mut converged) =
        solve_direct(&problem, config.c_reg, config.tol, config.max_iters);

    if let Some(cap) = config.lambda_cap {
        let norm = |w: &[f64]| w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm(&w) > cap {
            let mut lo = 0.0;
            let mut hi = 1.0;
            loop {
                let (cand, s, ok) = solve_direct(
                    &problem,
                    config.c_reg / (1.0 + hi),
                    config.tol,
                    config.max_iters,
                );
                sweeps += s;
                if norm(&cand) <= cap {
                    w = cand;
                    converged = ok;
                    break;
                }
                lo = hi;
                hi *= 2.0;
                if hi > 1e15 {
                    break;
                }
            }
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                let (cand, s, ok) = solve_direct(
                    &problem,
                    config.c_reg / (1.0 + mid),
                    config.tol,
                    config.max_iters,
                );
                sweeps += s;
                let n = norm(&cand);
                if n <= cap {
                    hi = mid;
                    w = cand;
                    converged = ok;
                    if n >= cap * (1.0 - 1e-9) {
                        break;
                    }
                } else {
                    lo = mid;
                }
            }
            let n = norm(&w);
            if n > cap {
                let scale = cap / n;
                for v in w.iter_mut() {
                    *v *= scale;
                }
            }
        }
    }

    let objective = problem.primal(&w, config.c_reg);
    let weights = MulticlassWeights::from_flat(w, problem.k, config.lambda_cap)?;
    Ok(MulticlassSolverResult {
        weights,
        objective,
        iterations: sweeps,
        converged,
    })
}

/// The objective [`train_multiclass_svm_direct`] minimizes, exposed for
/// oracles and tests.
pub fn objective_multiclass_direct(
    sample: &[MCLExample],
    weights: &MulticlassWeights,
    c_reg: f64,
) -> Result<f64> {
    let problem = Problem::new(sample)?;
    if weights.k() != problem.k {
        return Err(Error::ClassCountMismatch {
            weights_k: weights.k(),
            example_k: problem.k,
        });
    }
    if weights.dim() != problem.d {
        return Err(Error::DimensionMismatch {
            expected: problem.d,
            found: weights.dim(),
        });
    }
    if c_reg <= 0.0 || !c_reg.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "c_reg must be positive and finite, got {c_reg}"
        )));
    }
    Ok(problem.primal(weights.flat(), c_reg))
}
