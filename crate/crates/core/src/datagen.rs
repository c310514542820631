//! Seeded synthetic generators for all four problem kinds.
//!
//! Features are uniform in the radius-`r_norm` ball and labels come from
//! planted linear hypotheses, so a positive `margin` makes the planted
//! hypothesis a zero-empirical-risk witness (enforced by rejection
//! resampling). Planted weights are returned for diagnostics; the LCL
//! generator additionally returns the true labels out-of-band so risk
//! rescaling can be verified without leaking them to training code.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::core::{
    Bag, Instance, LCLExample, MCLExample, MILExample, MulticlassWeights, TRLExample,
};
use crate::error::{Error, Result};

/// Attempts per example before concluding the requested margin is not
/// attainable at the configured feature scale.
const MAX_REJECTIONS: usize = 100_000;

/// Shared generator configuration. Each generator reads the fields it needs:
/// `set_size` is items per TRL set and instances per MIL bag, `k` and `theta`
/// apply to the class-labeled kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub set_size: usize,
    /// Probability that an LCL record carries an ordinary (true) label.
    pub theta: f64,
    /// Feature norm cap.
    pub r_norm: f64,
    /// Optional separation margin; `None` or `Some(0.0)` disables rejection.
    pub margin: Option<f64>,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 1,
            d: 2,
            k: 2,
            set_size: 3,
            theta: 1.0,
            r_norm: 1.0,
            margin: None,
        }
    }
}

impl GenConfig {
    fn validate_base(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        if self.d == 0 {
            return Err(Error::InvalidParameter("d must be >= 1".into()));
        }
        if self.r_norm <= 0.0 || !self.r_norm.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "r_norm must be positive and finite, got {}",
                self.r_norm
            )));
        }
        if let Some(m) = self.margin {
            if m < 0.0 || !m.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "margin must be nonnegative and finite, got {m}"
                )));
            }
        }
        Ok(())
    }

    fn validate_classes(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::TooFewClasses(self.k));
        }
        Ok(())
    }

    fn validate_set_size(&self) -> Result<()> {
        if self.set_size == 0 {
            return Err(Error::InvalidParameter("set_size must be >= 1".into()));
        }
        Ok(())
    }

    fn validate_theta(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, 1], got {}",
                self.theta
            )));
        }
        Ok(())
    }

    fn margin_or_zero(&self) -> f64 {
        self.margin.unwrap_or(0.0)
    }
}

fn unit_vector(rng: &mut ChaCha12Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return v.iter().map(|c| c / norm).collect();
        }
    }
}

/// Uniform point of the radius-`r` ball: uniform direction, radius
/// `r * U^(1/d)`.
fn ball_point(rng: &mut ChaCha12Rng, d: usize, r: f64) -> Instance {
    let dir = unit_vector(rng, d);
    let radius = r * rng.random::<f64>().powf(1.0 / d as f64);
    Instance::new(dir.into_iter().map(|c| c * radius).collect())
        .expect("ball point has finite coordinates")
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn margin_error(kind: &str, margin: f64) -> Error {
    Error::InvalidParameter(format!(
        "could not draw a {kind} example with margin {margin} after {MAX_REJECTIONS} attempts"
    ))
}

/// A MIL sample plus the planted scoring rule that labeled it.
#[derive(Debug, Clone)]
pub struct GeneratedMil {
    pub examples: Vec<MILExample>,
    pub planted_weights: Vec<f64>,
    pub planted_bias: f64,
}

/// Binary labeled bags: label = sign(max-instance score - bias), with the
/// bias set to a pilot median so both labels occur.
pub fn gen_mil(cfg: &GenConfig) -> Result<GeneratedMil> {
    cfg.validate_base()?;
    cfg.validate_set_size()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let w = unit_vector(&mut rng, cfg.d);
    let margin = cfg.margin_or_zero();

    let draw_bag = |rng: &mut ChaCha12Rng| -> (Bag, f64) {
        let instances: Vec<Instance> = (0..cfg.set_size)
            .map(|_| ball_point(rng, cfg.d, cfg.r_norm))
            .collect();
        let score = instances
            .iter()
            .map(|x| dot(&w, x.coords()))
            .fold(f64::NEG_INFINITY, f64::max);
        (Bag::new(instances).expect("set_size >= 1"), score)
    };

    // pilot pass to center the bias at the median bag score
    let mut pilot: Vec<f64> = (0..200).map(|_| draw_bag(&mut rng).1).collect();
    pilot.sort_by(f64::total_cmp);
    let bias = pilot[pilot.len() / 2];

    let mut examples = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let mut attempts = 0;
        let (bag, score) = loop {
            let (bag, score) = draw_bag(&mut rng);
            if (score - bias).abs() >= margin {
                break (bag, score);
            }
            attempts += 1;
            if attempts >= MAX_REJECTIONS {
                return Err(margin_error("mil", margin));
            }
        };
        let label = if score - bias > 0.0 { 1 } else { -1 };
        examples.push(MILExample::new(bag, label).expect("label is -1 or +1"));
    }
    Ok(GeneratedMil {
        examples,
        planted_weights: w,
        planted_bias: bias,
    })
}

/// A TRL sample plus the planted scoring function that chose the targets.
#[derive(Debug, Clone)]
pub struct GeneratedTrl {
    pub examples: Vec<TRLExample>,
    pub planted_weights: Vec<f64>,
}

/// Item sets whose target is the planted-score argmax (lowest index on
/// ties); a positive margin forces the target to win by that much.
pub fn gen_trl(cfg: &GenConfig) -> Result<GeneratedTrl> {
    cfg.validate_base()?;
    cfg.validate_set_size()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let w = unit_vector(&mut rng, cfg.d);
    let margin = cfg.margin_or_zero();

    let mut examples = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let mut attempts = 0;
        let ex = loop {
            let items: Vec<Instance> = (0..cfg.set_size)
                .map(|_| ball_point(&mut rng, cfg.d, cfg.r_norm))
                .collect();
            let scores: Vec<f64> = items.iter().map(|x| dot(&w, x.coords())).collect();
            let mut target = 0;
            for (i, s) in scores.iter().enumerate() {
                if *s > scores[target] {
                    target = i;
                }
            }
            let runner_up = scores
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != target)
                .map(|(_, s)| *s)
                .fold(f64::NEG_INFINITY, f64::max);
            if cfg.set_size == 1 || scores[target] - runner_up >= margin {
                break TRLExample::new(items, target).expect("target index is in range");
            }
            attempts += 1;
            if attempts >= MAX_REJECTIONS {
                return Err(margin_error("trl", margin));
            }
        };
        examples.push(ex);
    }
    Ok(GeneratedTrl {
        examples,
        planted_weights: w,
    })
}

/// An MCL sample plus the planted per-class weights that labeled it.
#[derive(Debug, Clone)]
pub struct GeneratedMcl {
    pub examples: Vec<MCLExample>,
    pub planted: MulticlassWeights,
}

fn planted_multiclass(rng: &mut ChaCha12Rng, d: usize, k: usize) -> MulticlassWeights {
    let flat = unit_vector(rng, d * k);
    MulticlassWeights::from_flat(flat, k, None).expect("unit vector is finite and nonempty")
}

fn draw_labeled_point(
    rng: &mut ChaCha12Rng,
    planted: &MulticlassWeights,
    cfg: &GenConfig,
    margin: f64,
) -> Result<(Instance, usize)> {
    let mut attempts = 0;
    loop {
        let x = ball_point(rng, cfg.d, cfg.r_norm);
        let scores: Vec<f64> = (1..=cfg.k)
            .map(|j| dot(planted.row(j), x.coords()))
            .collect();
        let mut best = 0;
        for (j, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = j;
            }
        }
        let runner_up = scores
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != best)
            .map(|(_, s)| *s)
            .fold(f64::NEG_INFINITY, f64::max);
        if scores[best] - runner_up >= margin {
            return Ok((x, best + 1));
        }
        attempts += 1;
        if attempts >= MAX_REJECTIONS {
            return Err(margin_error("multiclass", margin));
        }
    }
}

/// Instances labeled by the planted margin argmax, with optional margin
/// enforcement by rejection sampling.
pub fn gen_mcl(cfg: &GenConfig) -> Result<GeneratedMcl> {
    cfg.validate_base()?;
    cfg.validate_classes()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let planted = planted_multiclass(&mut rng, cfg.d, cfg.k);
    let margin = cfg.margin_or_zero();

    let mut examples = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let (x, y) = draw_labeled_point(&mut rng, &planted, cfg, margin)?;
        examples.push(MCLExample::new(x, y, cfg.k).expect("label is in 1..=k"));
    }
    Ok(GeneratedMcl { examples, planted })
}

/// An LCL sample, the planted weights, and the true labels kept out-of-band
/// for verification only.
#[derive(Debug, Clone)]
pub struct GeneratedLcl {
    pub examples: Vec<LCLExample>,
    pub true_labels: Vec<usize>,
    pub planted: MulticlassWeights,
}

/// Draws `(x, y_true)` as in [`gen_mcl`]; emits the true label with
/// probability `theta`, otherwise a complementary label uniform over the
/// `k - 1` other classes.
pub fn gen_lcl(cfg: &GenConfig) -> Result<GeneratedLcl> {
    cfg.validate_base()?;
    cfg.validate_classes()?;
    cfg.validate_theta()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let planted = planted_multiclass(&mut rng, cfg.d, cfg.k);
    let margin = cfg.margin_or_zero();

    let mut examples = Vec::with_capacity(cfg.n);
    let mut true_labels = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let (x, y_true) = draw_labeled_point(&mut rng, &planted, cfg, margin)?;
        let ordinary = rng.random::<f64>() < cfg.theta;
        let (y, gamma) = if ordinary {
            (y_true, true)
        } else {
            // uniform over the k-1 labels != y_true
            let mut idx = rng.random_range(1..cfg.k);
            if idx >= y_true {
                idx += 1;
            }
            (idx, false)
        };
        examples.push(LCLExample::new(x, y, gamma, cfg.k).expect("label is in 1..=k"));
        true_labels.push(y_true);
    }
    Ok(GeneratedLcl {
        examples,
        true_labels,
        planted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{mcl_loss, trl_loss, LinearWeights};

    fn cfg(seed: u64) -> GenConfig {
        GenConfig {
            seed,
            n: 64,
            d: 3,
            k: 4,
            set_size: 4,
            theta: 0.5,
            r_norm: 2.0,
            margin: None,
        }
    }

    #[test]
    fn rejects_zero_n() {
        let bad = GenConfig {
            n: 0,
            ..GenConfig::default()
        };
        assert!(gen_mil(&bad).is_err());
        assert!(gen_trl(&bad).is_err());
        assert!(gen_mcl(&bad).is_err());
        assert!(gen_lcl(&bad).is_err());
    }

    #[test]
    fn same_seed_same_sample() {
        let a = gen_lcl(&cfg(9)).unwrap();
        let b = gen_lcl(&cfg(9)).unwrap();
        assert_eq!(a.examples, b.examples);
        assert_eq!(a.true_labels, b.true_labels);
        let c = gen_lcl(&cfg(10)).unwrap();
        assert_ne!(a.examples, c.examples);

        let m1 = gen_mil(&cfg(4)).unwrap();
        let m2 = gen_mil(&cfg(4)).unwrap();
        assert_eq!(m1.examples, m2.examples);
        assert_eq!(m1.planted_bias, m2.planted_bias);
    }

    #[test]
    fn features_respect_norm_cap() {
        let g = gen_mil(&cfg(1)).unwrap();
        for ex in &g.examples {
            for inst in ex.bag.instances() {
                assert!(inst.norm() <= 2.0 + 1e-12);
            }
        }
        let g = gen_trl(&cfg(2)).unwrap();
        for ex in &g.examples {
            for item in ex.items() {
                assert!(item.norm() <= 2.0 + 1e-12);
            }
        }
        let g = gen_mcl(&cfg(3)).unwrap();
        for ex in &g.examples {
            assert!(ex.x().norm() <= 2.0 + 1e-12);
            assert!((1..=4).contains(&ex.y()));
        }
    }

    #[test]
    fn trl_target_maximizes_planted_score() {
        let g = gen_trl(&cfg(5)).unwrap();
        let w = LinearWeights::uncapped(g.planted_weights.clone()).unwrap();
        for ex in &g.examples {
            let target_score = dot(w.as_slice(), ex.target().coords());
            for item in ex.items() {
                assert!(dot(w.as_slice(), item.coords()) <= target_score);
            }
        }

        let singles = GenConfig {
            set_size: 1,
            ..cfg(6)
        };
        for ex in &gen_trl(&singles).unwrap().examples {
            assert_eq!(ex.target_index(), 0);
        }
    }

    #[test]
    fn planted_hypotheses_have_zero_risk_with_margin() {
        let margin_cfg = GenConfig {
            margin: Some(0.05),
            ..cfg(7)
        };
        let g = gen_trl(&margin_cfg).unwrap();
        let w = LinearWeights::uncapped(g.planted_weights).unwrap();
        for ex in &g.examples {
            assert_eq!(trl_loss(&w, ex).unwrap(), 0);
        }

        let g = gen_mcl(&margin_cfg).unwrap();
        for ex in &g.examples {
            assert_eq!(mcl_loss(&g.planted, ex).unwrap(), 0);
        }
    }

    #[test]
    fn lcl_theta_extremes() {
        let all_true = GenConfig {
            theta: 1.0,
            ..cfg(8)
        };
        let g = gen_lcl(&all_true).unwrap();
        for (ex, y_true) in g.examples.iter().zip(&g.true_labels) {
            assert!(ex.gamma());
            assert_eq!(ex.y(), *y_true);
        }

        let all_comp = GenConfig {
            theta: 0.0,
            ..cfg(8)
        };
        let g = gen_lcl(&all_comp).unwrap();
        for (ex, y_true) in g.examples.iter().zip(&g.true_labels) {
            assert!(!ex.gamma());
            assert_ne!(ex.y(), *y_true);
        }
    }

    #[test]
    fn lcl_gamma_fraction_concentrates() {
        let cfg = GenConfig {
            n: 100_000,
            theta: 0.3,
            ..cfg(12)
        };
        let g = gen_lcl(&cfg).unwrap();
        let frac = g.examples.iter().filter(|ex| ex.gamma()).count() as f64 / cfg.n as f64;
        let slack = 3.0 * (0.3f64 * 0.7 / cfg.n as f64).sqrt();
        assert!(
            (frac - 0.3).abs() <= slack,
            "gamma fraction {frac} departs from theta by more than {slack}"
        );
    }

    // complementary labels never equal the true label and spread roughly
    // uniformly over the other k-1 classes
    #[test]
    fn complementary_labels_uniform() {
        let cfg = GenConfig {
            n: 30_000,
            theta: 0.0,
            k: 4,
            ..cfg(13)
        };
        let g = gen_lcl(&cfg).unwrap();
        // count complementary labels by offset among the k-1 candidates
        let mut counts = [0usize; 3];
        for (ex, y_true) in g.examples.iter().zip(&g.true_labels) {
            assert_ne!(ex.y(), *y_true);
            let offset = if ex.y() < *y_true { ex.y() } else { ex.y() - 1 };
            counts[offset - 1] += 1;
        }
        let expected = cfg.n as f64 / 3.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 2 degrees of freedom; 13.8 is the 0.1% point
        assert!(chi2 < 13.8, "chi-square {chi2} too large: {counts:?}");
    }
}
