//! Empirical Rademacher complexity estimation and the plug-in
//! generalization-bound arithmetic.
//!
//! The complexity bound exposes both sub-expressions of the min with every
//! hidden constant set to 1, so the outputs are order-of-magnitude indicators
//! rather than certified bounds; tests pin the arithmetic, not the constants.
//!
//! The deviation term comes in two variants, one with a raw `1/delta`
//! numerator and one with the standard concentration form `ln(1/delta)`;
//! neither is asserted as canonical.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::collections::HashSet;

use crate::core::MILExample;
use crate::error::{Error, Result};

/// Inputs for [`mil_complexity_bound`] and the deviation term.
///
/// `eta` is a distribution-dependent parameter with no in-crate estimator;
/// callers must supply it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams {
    /// Lipschitz constant of the surrogate loss (1 for hinge).
    pub lipschitz: f64,
    /// Cap on instance norms.
    pub r_norm: f64,
    /// Cap on hypothesis weight norms.
    pub lambda_cap: f64,
    /// Sample size.
    pub n: usize,
    /// Sum of bag sizes over the sample.
    pub total_bag_instances: usize,
    /// Number of distinct instances across all bags (exact coordinate
    /// equality).
    pub union_instances: usize,
    /// Distribution-dependent capacity parameter; caller supplied.
    pub eta: f64,
    /// Confidence level in (0, 1).
    pub delta: f64,
}

/// The two complexity sub-expressions. A sub-expression whose logarithm
/// argument is <= 1 is reported as 0 with its degenerate flag set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityBound {
    pub expr1: f64,
    pub expr2: f64,
    pub expr1_degenerate: bool,
    pub expr2_degenerate: bool,
}

impl ComplexityBound {
    /// The smaller of the two sub-expressions as reported.
    pub fn value(&self) -> f64 {
        self.expr1.min(self.expr2)
    }
}

/// Complexity bound for the max-of-linear bag class with an L-Lipschitz loss:
///
/// ```text
/// expr1 = L*r*A * log2(4 L^2 r^2 A^2 n T) * ln(L^2 n) / sqrt(n)
/// expr2 = L*r*A * sqrt(eta * ln U) / sqrt(n)
/// ```
///
/// with `r` the instance-norm cap, `A` the weight-norm cap, `T` the total
/// instance count, and `U` the union instance count.
pub fn mil_complexity_bound(p: &BoundParams) -> Result<ComplexityBound> {
    if p.n == 0 {
        return Err(Error::InvalidParameter("sample size must be >= 1".into()));
    }
    for (name, v) in [
        ("lipschitz", p.lipschitz),
        ("r_norm", p.r_norm),
        ("lambda_cap", p.lambda_cap),
        ("eta", p.eta),
    ] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name} must be finite and nonnegative, got {v}"
            )));
        }
    }
    if p.union_instances > p.total_bag_instances {
        return Err(Error::InvalidParameter(format!(
            "union_instances {} exceeds total_bag_instances {}",
            p.union_instances, p.total_bag_instances
        )));
    }
    let scale = p.lipschitz * p.r_norm * p.lambda_cap;
    let sqrt_n = (p.n as f64).sqrt();

    let log2_arg = 4.0
        * p.lipschitz.powi(2)
        * p.r_norm.powi(2)
        * p.lambda_cap.powi(2)
        * p.n as f64
        * p.total_bag_instances as f64;
    let ln_arg = p.lipschitz.powi(2) * p.n as f64;
    let expr1_degenerate = log2_arg <= 1.0 || ln_arg <= 1.0;
    let expr1 = if expr1_degenerate {
        0.0
    } else {
        scale * log2_arg.log2() * ln_arg.ln() / sqrt_n
    };

    let union = p.union_instances as f64;
    let expr2_degenerate = union <= 1.0;
    let expr2 = if expr2_degenerate {
        0.0
    } else {
        scale * (p.eta * union.ln()).sqrt() / sqrt_n
    };

    Ok(ComplexityBound {
        expr1,
        expr2,
        expr1_degenerate,
        expr2_degenerate,
    })
}

/// Which form of the confidence term to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationMode {
    /// `3 * sqrt((1/delta) / (2n))`.
    InverseDelta,
    /// `3 * sqrt(ln(1/delta) / (2n))`, the standard concentration form.
    LogInverseDelta,
}

/// Confidence deviation term at level `delta` for a size-`n` sample.
pub fn deviation_term(n: usize, delta: f64, mode: DeviationMode) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let numerator = match mode {
        DeviationMode::InverseDelta => 1.0 / delta,
        DeviationMode::LogInverseDelta => (1.0 / delta).ln(),
    };
    Ok(3.0 * (numerator / (2.0 * n as f64)).sqrt())
}

/// Factor converting complementary-label risk into ordinary multi-class
/// risk: `(k - 1) / (theta * (k - 2) + 1)`.
pub fn lcl_risk_scale(theta: f64, k: usize) -> f64 {
    assert!(
        (0.0..=1.0).contains(&theta),
        "theta must lie in [0, 1], got {theta}"
    );
    assert!(k >= 2, "need at least 2 classes, got {k}");
    (k - 1) as f64 / (theta * (k - 2) as f64 + 1.0)
}

/// `scale * (empirical_risk + 2 * complexity + deviation)`.
pub fn assemble_bound(empirical_risk: f64, complexity: f64, deviation: f64, scale: f64) -> f64 {
    scale * (empirical_risk + 2.0 * complexity + deviation)
}

fn validate_loss_rows(loss_rows: &[Vec<f64>]) -> Result<usize> {
    let first = loss_rows.first().ok_or(Error::EmptyHypothesisSet)?;
    let n = first.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    for row in loss_rows {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
    }
    Ok(n)
}

fn sup_signed_sum(loss_rows: &[Vec<f64>], signs: &[f64]) -> f64 {
    loss_rows
        .iter()
        .map(|row| row.iter().zip(signs).map(|(l, s)| l * s).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Monte-Carlo estimate of the empirical Rademacher complexity of a finite
/// hypothesis set, given per-hypothesis loss rows over a fixed sample:
/// the mean over seeded sign draws of `sup_h (1/n) sum_i sigma_i * l_h(i)`.
///
/// Deterministic given the seed; trials are combined in draw order.
pub fn rademacher_mc_estimate(loss_rows: &[Vec<f64>], trials: usize, seed: u64) -> Result<f64> {
    let n = validate_loss_rows(loss_rows)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut signs = vec![0.0; n];
    let mut total = 0.0;
    for _ in 0..trials {
        for s in &mut signs {
            *s = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
        total += sup_signed_sum(loss_rows, &signs);
    }
    Ok(total / trials as f64 / n as f64)
}

/// Exact expectation over all 2^n sign vectors (n <= 20). Sign vectors are
/// enumerated in complementary pairs so symmetric contributions cancel
/// exactly in floating point.
pub fn rademacher_exact(loss_rows: &[Vec<f64>]) -> Result<f64> {
    let n = validate_loss_rows(loss_rows)?;
    if n > 20 {
        return Err(Error::InvalidParameter(format!(
            "exact enumeration supports n <= 20, got {n}"
        )));
    }
    let mut signs = vec![0.0; n];
    let mut total = 0.0;
    // first coordinate fixed to +1; the complement covers the other half
    for mask in 0..(1u64 << (n - 1)) {
        signs[0] = 1.0;
        for (i, s) in signs.iter_mut().enumerate().skip(1) {
            *s = if mask >> (i - 1) & 1 == 1 { 1.0 } else { -1.0 };
        }
        let up = sup_signed_sum(loss_rows, &signs);
        for s in &mut signs {
            *s = -*s;
        }
        let down = sup_signed_sum(loss_rows, &signs);
        total += up + down;
    }
    Ok(total / (1u64 << n) as f64 / n as f64)
}

/// Sum of bag sizes over a MIL sample.
pub fn total_bag_instances(sample: &[MILExample]) -> usize {
    sample.iter().map(|ex| ex.bag.len()).sum()
}

/// Number of distinct instances across all bags, deduplicated by exact
/// coordinate equality (`-0.0` and `+0.0` compare equal).
pub fn count_union_instances(sample: &[MILExample]) -> usize {
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for ex in sample {
        for inst in ex.bag.instances() {
            let key: Vec<u64> = inst
                .coords()
                .iter()
                .map(|&c| (if c == 0.0 { 0.0 } else { c }).to_bits())
                .collect();
            seen.insert(key);
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Bag, Instance};
    use proptest::prelude::*;

    fn params() -> BoundParams {
        BoundParams {
            lipschitz: 1.0,
            r_norm: 1.0,
            lambda_cap: 1.0,
            n: 4,
            total_bag_instances: 8,
            union_instances: 8,
            eta: 1.0,
            delta: 0.05,
        }
    }

    #[test]
    fn complexity_expr1_arithmetic() {
        let b = mil_complexity_bound(&params()).unwrap();
        // log2(4 * 4 * 8) * ln(4) / 2 = 7 * ln 4 / 2
        let expected = 7.0 * 4.0f64.ln() / 2.0;
        assert!((b.expr1 - expected).abs() < 1e-12);
        assert!(!b.expr1_degenerate);
    }

    #[test]
    fn complexity_expr2_arithmetic() {
        let mut p = params();
        p.eta = 2.0;
        p.union_instances = 16;
        p.total_bag_instances = 16;
        let b = mil_complexity_bound(&p).unwrap();
        let expected = (2.0 * 16.0f64.ln()).sqrt() / 2.0;
        assert!((b.expr2 - expected).abs() < 1e-12);
        assert!((b.value() - expected).abs() < 1e-12);
    }

    #[test]
    fn complexity_degenerate_flags() {
        let p = BoundParams {
            n: 1,
            total_bag_instances: 1,
            union_instances: 1,
            ..params()
        };
        let b = mil_complexity_bound(&p).unwrap();
        assert_eq!((b.expr1, b.expr2), (0.0, 0.0));
        assert!(b.expr1_degenerate && b.expr2_degenerate);
    }

    #[test]
    fn deviation_both_modes() {
        let d = deviation_term(1000, 0.05, DeviationMode::InverseDelta).unwrap();
        assert!((d - 0.3).abs() < 1e-12);
        let d = deviation_term(2, (-1.0f64).exp(), DeviationMode::LogInverseDelta).unwrap();
        assert!((d - 1.5).abs() < 1e-12);
        // vanishes with n in either mode
        for mode in [DeviationMode::InverseDelta, DeviationMode::LogInverseDelta] {
            assert!(deviation_term(1 << 40, 0.5, mode).unwrap() < 1e-4);
        }
        assert!(deviation_term(10, 1.0, DeviationMode::LogInverseDelta).is_err());
        assert!(deviation_term(0, 0.5, DeviationMode::LogInverseDelta).is_err());
    }

    #[test]
    fn risk_scale_values() {
        assert_eq!(lcl_risk_scale(1.0, 7), 1.0);
        assert_eq!(lcl_risk_scale(0.0, 5), 4.0);
        assert_eq!(lcl_risk_scale(0.5, 4), 1.5);
        for theta in [0.0, 0.25, 0.5, 0.75, 1.0] {
            assert_eq!(lcl_risk_scale(theta, 2), 1.0);
        }
    }

    #[test]
    fn assemble_is_affine() {
        assert!((assemble_bound(0.1, 0.2, 0.3, 1.0) - 0.8).abs() < 1e-12);
        assert_eq!(assemble_bound(0.0, 0.0, 0.0, 17.0), 0.0);
        assert!((assemble_bound(0.1, 0.2, 0.3, 2.0) - 1.6).abs() < 1e-12);
    }

    #[test]
    fn rademacher_single_hypothesis_is_zero_exactly() {
        let rows = vec![vec![1.0, 0.0, 1.0, 1.0, 0.0]];
        assert_eq!(rademacher_exact(&rows).unwrap(), 0.0);
    }

    #[test]
    fn rademacher_two_hypotheses_half() {
        // n = 1, losses 0 and 1: E[max(sigma * 0, sigma * 1)] = 1/2
        let rows = vec![vec![0.0], vec![1.0]];
        assert_eq!(rademacher_exact(&rows).unwrap(), 0.5);
        let mc = rademacher_mc_estimate(&rows, 40_000, 11).unwrap();
        assert!((mc - 0.5).abs() < 0.02);
    }

    #[test]
    fn rademacher_deterministic_and_validating() {
        let rows = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let a = rademacher_mc_estimate(&rows, 500, 3).unwrap();
        let b = rademacher_mc_estimate(&rows, 500, 3).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!(rademacher_mc_estimate(&[], 10, 0).is_err());
        assert!(rademacher_mc_estimate(&[vec![]], 10, 0).is_err());
        assert!(rademacher_mc_estimate(&rows, 0, 0).is_err());
    }

    // standard error shrinks like 1 / sqrt(trials): quadrupling the trial
    // count roughly halves the spread across independent seeds
    #[test]
    fn rademacher_error_scales_with_trials() {
        let rows = vec![
            vec![1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0],
        ];
        let truth = rademacher_exact(&rows).unwrap();
        let spread = |trials: usize| {
            let errs: Vec<f64> = (0..40)
                .map(|seed| (rademacher_mc_estimate(&rows, trials, seed).unwrap() - truth).abs())
                .collect();
            (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt()
        };
        let coarse = spread(64);
        let fine = spread(256);
        assert!(
            fine < 0.75 * coarse,
            "rms error did not shrink: {coarse} -> {fine}"
        );
    }

    #[test]
    fn union_count_dedups_exact_coordinates() {
        let inst = |c: &[f64]| Instance::new(c.to_vec()).unwrap();
        let bag1 = Bag::new(vec![inst(&[1.0, 2.0]), inst(&[1.0, 2.0])]).unwrap();
        let bag2 = Bag::new(vec![inst(&[1.0, 2.0]), inst(&[-0.0, 0.0]), inst(&[0.0, 0.0])])
            .unwrap();
        let sample = vec![
            MILExample::new(bag1, -1).unwrap(),
            MILExample::new(bag2, 1).unwrap(),
        ];
        assert_eq!(total_bag_instances(&sample), 5);
        assert_eq!(count_union_instances(&sample), 2);
    }

    proptest! {
        // nondecreasing in each scale parameter
        #[test]
        fn complexity_monotone(
            l in 0.5f64..4.0,
            r in 0.5f64..4.0,
            lam in 0.5f64..4.0,
            eta in 0.5f64..4.0,
            bump in 0.1f64..2.0,
        ) {
            let base = BoundParams {
                lipschitz: l,
                r_norm: r,
                lambda_cap: lam,
                n: 16,
                total_bag_instances: 64,
                union_instances: 48,
                eta,
                delta: 0.1,
            };
            let v0 = mil_complexity_bound(&base).unwrap().value();
            for grown in [
                BoundParams { lipschitz: l + bump, ..base.clone() },
                BoundParams { r_norm: r + bump, ..base.clone() },
                BoundParams { lambda_cap: lam + bump, ..base.clone() },
                BoundParams { eta: eta + bump, ..base.clone() },
            ] {
                let v1 = mil_complexity_bound(&grown).unwrap().value();
                prop_assert!(v1 >= v0 - 1e-12);
            }
        }
    }
}
