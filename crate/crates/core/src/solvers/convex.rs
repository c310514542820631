//! Convex subproblem engine shared by the MI-SVM solvers.
//!
//! Every convex piece the solvers need has the same shape:
//!
//! ```text
//! min_w  0.5 ||w||^2 + cap * sum_g max(0, max_{a in g} (1 - <w, q_a>))
//! ```
//!
//! where each group `g` is one training example and its atoms `q_a` are
//! sign-folded instance vectors (negated bag instances for negative bags, the
//! fixed witness instance for positive bags). The solver works on the dual
//!
//! ```text
//! max_{l >= 0, sum_g l <= cap}  sum(l) - 0.5 ||Q l||^2,    w = Q l,
//! ```
//!
//! by cyclic coordinate ascent with exact per-coordinate line search, plus a
//! pairwise transfer step that unsticks groups resting on their cap. The
//! duality gap is evaluated exactly, so results carry a certificate:
//! `gap <= tol` means the primal objective is within `tol` of the optimum.
//! Everything is deterministic.

/// One convex subproblem instance. Atoms are stored row-major, grouped
/// contiguously per example.
#[derive(Debug, Clone)]
pub(crate) struct ConvexSubproblem {
    dim: usize,
    cap: f64,
    atom_data: Vec<f64>,
    group_bounds: Vec<(usize, usize)>,
}

/// Outcome of a subproblem solve. `primal` is the subproblem objective at
/// `w`; `gap` is the certified distance to the subproblem optimum.
#[derive(Debug, Clone)]
#[allow(dead_code)] // primal and gap are diagnostics for tests and debugging
pub(crate) struct SubproblemSolution {
    pub w: Vec<f64>,
    pub primal: f64,
    pub gap: f64,
    /// Coordinate sweeps performed.
    pub iterations: usize,
    pub converged: bool,
    pub lambda: Vec<f64>,
}

impl ConvexSubproblem {
    pub fn new(dim: usize, cap: f64) -> Self {
        Self {
            dim,
            cap,
            atom_data: Vec::new(),
            group_bounds: Vec::new(),
        }
    }

    /// Swaps the per-group dual cap; the norm-cap bisection reuses one
    /// subproblem across penalty weights.
    pub fn set_cap(&mut self, cap: f64) {
        self.cap = cap;
    }

    /// Adds one example's atoms as a group.
    pub fn push_group<'a>(&mut self, atoms: impl Iterator<Item = &'a [f64]>) {
        let start = self.atom_count();
        for atom in atoms {
            debug_assert_eq!(atom.len(), self.dim);
            self.atom_data.extend_from_slice(atom);
        }
        let end = self.atom_count();
        debug_assert!(end > start, "groups must be nonempty");
        self.group_bounds.push((start, end));
    }

    pub fn atom_count(&self) -> usize {
        self.atom_data.len() / self.dim.max(1)
    }

    fn atom(&self, a: usize) -> &[f64] {
        &self.atom_data[a * self.dim..(a + 1) * self.dim]
    }

    /// `w = Q lambda`.
    fn primal_point(&self, lambda: &[f64]) -> Vec<f64> {
        let mut w = vec![0.0; self.dim];
        for (a, &l) in lambda.iter().enumerate() {
            if l != 0.0 {
                for (wi, qi) in w.iter_mut().zip(self.atom(a)) {
                    *wi += l * qi;
                }
            }
        }
        w
    }

    /// Subproblem primal objective at `w`.
    pub fn primal_objective(&self, w: &[f64]) -> f64 {
        let mut total = 0.5 * dot(w, w);
        for &(start, end) in &self.group_bounds {
            let worst = (start..end)
                .map(|a| 1.0 - dot(self.atom(a), w))
                .fold(f64::NEG_INFINITY, f64::max);
            total += self.cap * worst.max(0.0);
        }
        total
    }

    fn dual_objective(&self, lambda: &[f64], w: &[f64]) -> f64 {
        lambda.iter().sum::<f64>() - 0.5 * dot(w, w)
    }

    /// Projects each group's coordinates onto `{l >= 0, sum <= cap}`.
    fn project(&self, lambda: &mut [f64]) {
        for &(start, end) in &self.group_bounds {
            project_capped_simplex(&mut lambda[start..end], self.cap);
        }
    }

    /// Cyclic dual coordinate ascent with exact gap stopping. `warm` seeds
    /// the dual variables (projected back to feasibility), which the DC outer
    /// loop uses across witness updates. One iteration is a full sweep over
    /// all coordinates.
    pub fn solve(&self, gap_tol: f64, max_sweeps: usize, warm: Option<&[f64]>) -> SubproblemSolution {
        let m = self.atom_count();
        let mut lambda = match warm {
            Some(prev) if prev.len() == m => prev.to_vec(),
            _ => vec![0.0; m],
        };
        self.project(&mut lambda);

        let atom_norm2: Vec<f64> = (0..m).map(|a| dot(self.atom(a), self.atom(a))).collect();
        let mut w = self.primal_point(&lambda);
        let mut best_primal = self.primal_objective(&w);
        let mut best_w = w.clone();
        let mut gap = best_primal - self.dual_objective(&lambda, &w);
        if gap <= gap_tol {
            return SubproblemSolution {
                w,
                primal: best_primal,
                gap,
                iterations: 0,
                converged: true,
                lambda,
            };
        }

        let mut sweeps = 0;
        let mut converged = false;
        let mut grads: Vec<f64> = Vec::new();
        while sweeps < max_sweeps {
            sweeps += 1;
            for &(start, end) in &self.group_bounds {
                let mut room = self.cap - lambda[start..end].iter().sum::<f64>();
                for a in start..end {
                    let grad = 1.0 - dot(self.atom(a), &w);
                    let delta = if atom_norm2[a] == 0.0 {
                        // zero atom: the dual grows linearly in its weight
                        if grad > 0.0 {
                            room.max(0.0)
                        } else {
                            -lambda[a]
                        }
                    } else {
                        (grad / atom_norm2[a]).clamp(-lambda[a], room.max(0.0))
                    };
                    if delta != 0.0 {
                        lambda[a] += delta;
                        room -= delta;
                        let atom = self.atom(a);
                        for (wi, qi) in w.iter_mut().zip(atom) {
                            *wi += delta * qi;
                        }
                    }
                }
                // group at its cap: move mass from the flattest held atom to
                // the steepest one
                if end - start > 1 && room <= self.cap * 1e-12 {
                    grads.clear();
                    grads.extend((start..end).map(|a| 1.0 - dot(self.atom(a), &w)));
                    let mut best_a = start;
                    let mut worst_b: Option<usize> = None;
                    for a in start..end {
                        if grads[a - start] > grads[best_a - start] {
                            best_a = a;
                        }
                        if lambda[a] > 0.0
                            && worst_b.is_none_or(|b| grads[a - start] < grads[b - start])
                        {
                            worst_b = Some(a);
                        }
                    }
                    if let Some(b) = worst_b {
                        let rise = grads[best_a - start] - grads[b - start];
                        if b != best_a && rise > 0.0 {
                            let curvature: f64 = self
                                .atom(best_a)
                                .iter()
                                .zip(self.atom(b))
                                .map(|(p, q)| (p - q) * (p - q))
                                .sum();
                            if curvature > 0.0 {
                                let t = (rise / curvature).min(lambda[b]);
                                if t > 0.0 {
                                    lambda[best_a] += t;
                                    lambda[b] -= t;
                                    let (qa, qb) = (self.atom(best_a), self.atom(b));
                                    for ((wi, pa), pb) in w.iter_mut().zip(qa).zip(qb) {
                                        *wi += t * (pa - pb);
                                    }
                                }
                            }
                        }
                    }
                }
            }

            // clear accumulated drift before certifying
            if sweeps % 32 == 0 {
                w = self.primal_point(&lambda);
            }
            let primal = self.primal_objective(&w);
            if primal < best_primal {
                best_primal = primal;
                best_w = w.clone();
            }
            gap = best_primal - self.dual_objective(&lambda, &w);
            if gap <= gap_tol {
                converged = true;
                break;
            }
        }

        SubproblemSolution {
            w: best_w,
            primal: best_primal,
            gap,
            iterations: sweeps,
            converged,
            lambda,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean projection onto `{x >= 0, sum(x) <= cap}`: clamp to the
/// nonnegative orthant, and if the sum still exceeds the cap project onto the
/// `sum = cap` simplex face.
pub(crate) fn project_capped_simplex(x: &mut [f64], cap: f64) {
    let mut sum = 0.0;
    for v in x.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
        sum += *v;
    }
    if sum <= cap {
        return;
    }
    let mut sorted: Vec<f64> = x.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - cap) / (j + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        } else {
            break;
        }
    }
    for v in x.iter_mut() {
        *v = (*v - threshold).max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_respects_constraints() {
        let mut x = vec![0.7, -0.2, 0.9];
        project_capped_simplex(&mut x, 1.0);
        assert!(x.iter().all(|&v| v >= 0.0));
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // already feasible: untouched apart from the clamp
        let mut y = vec![0.1, 0.2];
        project_capped_simplex(&mut y, 1.0);
        assert_eq!(y, vec![0.1, 0.2]);
    }

    #[test]
    fn projection_matches_grid_search() {
        let cap = 0.8;
        let target = [0.9, 0.4, -0.3];
        let mut projected = target.to_vec();
        project_capped_simplex(&mut projected, cap);
        let dist = |p: &[f64]| -> f64 {
            p.iter()
                .zip(&target)
                .map(|(a, b)| (a - b) * (a - b))
                .sum()
        };
        let best = dist(&projected);
        let steps = 60;
        for i in 0..=steps {
            for j in 0..=steps {
                let a = cap * i as f64 / steps as f64;
                let b = cap * j as f64 / steps as f64;
                for kk in 0..=steps {
                    let c = cap * kk as f64 / steps as f64;
                    if a + b + c <= cap + 1e-12 {
                        assert!(dist(&[a, b, c]) >= best - 1e-6);
                    }
                }
            }
        }
    }

    #[test]
    fn single_negative_bag_closed_form() {
        // min 0.5 w^2 + max(0, 1 + w_1): optimum w = (-1, 0), value 0.5
        let mut sub = ConvexSubproblem::new(2, 1.0);
        sub.push_group([[-1.0, 0.0].as_slice()].into_iter());
        let sol = sub.solve(1e-10, 10_000, None);
        assert!(sol.converged);
        assert!((sol.primal - 0.5).abs() < 1e-8);
        assert!((sol.w[0] + 1.0).abs() < 1e-4);
        assert!(sol.w[1].abs() < 1e-8);
    }

    #[test]
    fn two_instance_negative_bag_closed_form() {
        // bag {(1,0),(0,1)} labeled -1, cap 100: optimum w = (-1,-1), value 1
        let mut sub = ConvexSubproblem::new(2, 100.0);
        sub.push_group([[-1.0, 0.0].as_slice(), [0.0, -1.0].as_slice()].into_iter());
        let sol = sub.solve(1e-10, 10_000, None);
        assert!(sol.converged);
        assert!((sol.primal - 1.0).abs() < 1e-8);
        assert!((sol.w[0] + 1.0).abs() < 1e-5);
        assert!((sol.w[1] + 1.0).abs() < 1e-5);
    }

    #[test]
    fn zero_atoms_cap_the_dual() {
        let mut sub = ConvexSubproblem::new(2, 3.0);
        sub.push_group([[0.0, 0.0].as_slice()].into_iter());
        let sol = sub.solve(1e-10, 100, None);
        assert!(sol.converged);
        assert_eq!(sol.w, vec![0.0, 0.0]);
        assert!((sol.primal - 3.0).abs() < 1e-12);
        assert_eq!(sol.lambda, vec![3.0]);
    }

    #[test]
    fn overcomplete_atoms_still_certify() {
        // three atoms in two dimensions: the dual Hessian is singular, the
        // gap must still close
        let mut sub = ConvexSubproblem::new(2, 5.0);
        sub.push_group([[-1.0, 0.2].as_slice(), [0.3, -1.0].as_slice()].into_iter());
        sub.push_group([[-0.4, -0.9].as_slice()].into_iter());
        let sol = sub.solve(1e-10, 20_000, None);
        assert!(sol.converged, "gap stuck at {}", sol.gap);
    }

    #[test]
    fn warm_start_reaches_same_answer() {
        let mut sub = ConvexSubproblem::new(2, 5.0);
        sub.push_group([[-1.0, 0.2].as_slice(), [0.3, -1.0].as_slice()].into_iter());
        sub.push_group([[-0.4, -0.9].as_slice()].into_iter());
        let cold = sub.solve(1e-10, 20_000, None);
        let warm = sub.solve(1e-10, 20_000, Some(&cold.lambda));
        assert!(cold.converged && warm.converged);
        assert!((cold.primal - warm.primal).abs() < 1e-8);
        assert!(warm.iterations <= cold.iterations);
    }
}
