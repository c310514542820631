//! Domain types and losses shared by every other module.
//!
//! Conventions that the rest of the crate depends on:
//!
//! * all 0/1 losses are written in margin form with `<= 0`, so score ties
//!   count as errors in both the original and the reduced space, which is
//!   what makes the reduction identities exact rather than almost-exact;
//! * `top1_predict` and multi-class prediction break argmax ties by lowest
//!   index, but the margin-form losses (not the argmax) define training risk;
//! * weight constructors reject norm-cap violations instead of projecting;
//!   solvers that need projection do it internally before constructing.

use crate::error::{Error, Result};

/// Inner product of two equal-length slices. Callers check dimensions.
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Relative slack absorbed by norm-cap checks so that weights produced by an
/// internal projection (`w * cap / ||w||`) survive reconstruction despite
/// rounding.
const CAP_SLACK: f64 = 1e-12;

fn check_cap(norm: f64, cap: Option<f64>) -> Result<()> {
    if let Some(cap) = cap {
        if cap.is_nan() || cap <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "norm cap must be positive, got {cap}"
            )));
        }
        if norm > cap * (1.0 + CAP_SLACK) {
            return Err(Error::NormCapExceeded { norm, cap });
        }
    }
    Ok(())
}

/// A d-dimensional feature vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    coords: Vec<f64>,
}

impl Instance {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.coords)
    }
}

/// A nonempty multiset of instances of equal dimension. Duplicates are kept;
/// only union-of-instances counts deduplicate, and they do so elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Bag {
    instances: Vec<Instance>,
}

impl Bag {
    pub fn new(instances: Vec<Instance>) -> Result<Self> {
        let first = instances.first().ok_or(Error::EmptyBag)?;
        let d = first.dim();
        for inst in &instances {
            if inst.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: inst.dim(),
                });
            }
        }
        Ok(Self { instances })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    /// Number of instances; at least 1 by construction.
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.instances[0].dim()
    }
}

/// A labeled bag: the input unit of binary MIL.
#[derive(Debug, Clone, PartialEq)]
pub struct MILExample {
    pub bag: Bag,
    label: i8,
}

impl MILExample {
    pub fn new(bag: Bag, label: i8) -> Result<Self> {
        if label != -1 && label != 1 {
            return Err(Error::InvalidBinaryLabel(label));
        }
        Ok(Self { bag, label })
    }

    pub fn label(&self) -> i8 {
        self.label
    }
}

/// Linear hypothesis weights, optionally capped at `||w|| <= lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearWeights {
    w: Vec<f64>,
    lambda_cap: Option<f64>,
}

impl LinearWeights {
    pub fn new(w: Vec<f64>, lambda_cap: Option<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if w.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        check_cap(l2_norm(&w), lambda_cap)?;
        Ok(Self { w, lambda_cap })
    }

    /// Weights with no norm cap.
    pub fn uncapped(w: Vec<f64>) -> Result<Self> {
        Self::new(w, None)
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn lambda_cap(&self) -> Option<f64> {
        self.lambda_cap
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.w)
    }
}

/// A top-1 ranking example: an item set and the index of the target item.
#[derive(Debug, Clone, PartialEq)]
pub struct TRLExample {
    items: Vec<Instance>,
    target_index: usize,
}

impl TRLExample {
    pub fn new(items: Vec<Instance>, target_index: usize) -> Result<Self> {
        let first = items.first().ok_or(Error::EmptyItemSet)?;
        let d = first.dim();
        for item in &items {
            if item.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: item.dim(),
                });
            }
        }
        if target_index >= items.len() {
            return Err(Error::TargetIndexOutOfRange {
                index: target_index,
                len: items.len(),
            });
        }
        Ok(Self {
            items,
            target_index,
        })
    }

    pub fn items(&self) -> &[Instance] {
        &self.items
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    pub fn target(&self) -> &Instance {
        &self.items[self.target_index]
    }

    pub fn dim(&self) -> usize {
        self.items[0].dim()
    }
}

/// A multi-class example with label in `1..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MCLExample {
    x: Instance,
    y: usize,
    k: usize,
}

impl MCLExample {
    pub fn new(x: Instance, y: usize, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewClasses(k));
        }
        if y < 1 || y > k {
            return Err(Error::LabelOutOfRange { label: y, k });
        }
        Ok(Self { x, y, k })
    }

    pub fn x(&self) -> &Instance {
        &self.x
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// A labeled-or-complementarily-labeled example. `gamma = true` means `y` is
/// the true label; `gamma = false` means the example asserts "not `y`".
#[derive(Debug, Clone, PartialEq)]
pub struct LCLExample {
    x: Instance,
    y: usize,
    gamma: bool,
    k: usize,
}

impl LCLExample {
    pub fn new(x: Instance, y: usize, gamma: bool, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewClasses(k));
        }
        if y < 1 || y > k {
            return Err(Error::LabelOutOfRange { label: y, k });
        }
        Ok(Self { x, y, gamma, k })
    }

    pub fn x(&self) -> &Instance {
        &self.x
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn gamma(&self) -> bool {
        self.gamma
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Stacked per-class weight rows `(w_1 .. w_k)`, stored row-major, with an
/// optional Frobenius-norm cap.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassWeights {
    flat: Vec<f64>,
    k: usize,
    d: usize,
    lambda_cap: Option<f64>,
}

impl MulticlassWeights {
    pub fn new(rows: Vec<Vec<f64>>, lambda_cap: Option<f64>) -> Result<Self> {
        let k = rows.len();
        if k < 2 {
            return Err(Error::TooFewClasses(k));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::EmptyInstance);
        }
        let mut flat = Vec::with_capacity(k * d);
        for row in &rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(flat, k, lambda_cap)
    }

    /// Builds from a concatenated `k * d` vector; the inverse of
    /// [`MulticlassWeights::flat`].
    pub fn from_flat(flat: Vec<f64>, k: usize, lambda_cap: Option<f64>) -> Result<Self> {
        if k < 2 {
            return Err(Error::TooFewClasses(k));
        }
        if flat.is_empty() || !flat.len().is_multiple_of(k) {
            return Err(Error::DimensionNotDivisible {
                dim: flat.len(),
                k,
            });
        }
        if flat.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        check_cap(l2_norm(&flat), lambda_cap)?;
        let d = flat.len() / k;
        Ok(Self {
            flat,
            k,
            d,
            lambda_cap,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Row for class `y` (1-based).
    pub fn row(&self, y: usize) -> &[f64] {
        &self.flat[(y - 1) * self.d..y * self.d]
    }

    /// The rows concatenated in class order.
    pub fn flat(&self) -> &[f64] {
        &self.flat
    }

    pub fn lambda_cap(&self) -> Option<f64> {
        self.lambda_cap
    }

    /// Frobenius norm, i.e. the 2-norm of the concatenation.
    pub fn norm(&self) -> f64 {
        l2_norm(&self.flat)
    }
}

/// Loss selector for empirical risks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    ZeroOne,
    Hinge,
}

/// Bag score `max_{x in B} <w, x>`.
pub fn bag_score(w: &LinearWeights, bag: &Bag) -> Result<f64> {
    if w.dim() != bag.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: bag.dim(),
        });
    }
    Ok(bag_score_raw(w.as_slice(), bag))
}

/// Unchecked bag score over a raw weight slice; solver hot path.
pub(crate) fn bag_score_raw(w: &[f64], bag: &Bag) -> f64 {
    bag.instances()
        .iter()
        .map(|x| dot(w, x.coords()))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Binary zero-one loss `I(y * score <= 0)`; a ties count as errors.
pub fn zero_one_binary(label: i8, score: f64) -> u8 {
    u8::from(f64::from(label) * score <= 0.0)
}

/// Hinge loss `max(0, 1 - y * score)`; 1-Lipschitz in the score and an upper
/// bound on [`zero_one_binary`].
pub fn hinge(label: i8, score: f64) -> f64 {
    (1.0 - f64::from(label) * score).max(0.0)
}

/// Mean per-bag loss over a MIL sample, summed in index order.
pub fn empirical_risk_mil(sample: &[MILExample], w: &LinearWeights, loss: LossKind) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut total = 0.0;
    for ex in sample {
        let score = bag_score(w, &ex.bag)?;
        total += match loss {
            LossKind::ZeroOne => f64::from(zero_one_binary(ex.label(), score)),
            LossKind::Hinge => hinge(ex.label(), score),
        };
    }
    Ok(total / sample.len() as f64)
}

/// Index of the item with the largest inner product; ties broken by lowest
/// index.
pub fn top1_predict(w: &LinearWeights, items: &[Instance]) -> Result<usize> {
    if items.is_empty() {
        return Err(Error::EmptyItemSet);
    }
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (i, item) in items.iter().enumerate() {
        if item.dim() != w.dim() {
            return Err(Error::DimensionMismatch {
                expected: w.dim(),
                found: item.dim(),
            });
        }
        let score = dot(w.as_slice(), item.coords());
        if score > best_score {
            best_score = score;
            best = i;
        }
    }
    Ok(best)
}

/// Top-1 ranking 0/1 loss in margin form: error iff the target does not
/// strictly beat every other item. A singleton set has no competitor and
/// never loses.
pub fn trl_loss(w: &LinearWeights, ex: &TRLExample) -> Result<u8> {
    if w.dim() != ex.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: ex.dim(),
        });
    }
    if ex.items().len() == 1 {
        return Ok(0);
    }
    let target_score = dot(w.as_slice(), ex.target().coords());
    let rival = ex
        .items()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ex.target_index())
        .map(|(_, x)| dot(w.as_slice(), x.coords()))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(u8::from(target_score - rival <= 0.0))
}

/// Multi-class 0/1 loss in margin form: error iff the true class's score does
/// not strictly beat every other class.
pub fn mcl_loss(weights: &MulticlassWeights, ex: &MCLExample) -> Result<u8> {
    check_multiclass_dims(weights, ex.k(), ex.x())?;
    Ok(u8::from(-rival_margin(weights, ex.x(), ex.y()) <= 0.0))
}

/// Labeled/complementary 0/1 loss. With an ordinary label this is
/// [`mcl_loss`]; with a complementary label the error event flips: loss iff
/// the forbidden class would win the margin comparison.
pub fn lcl_loss(weights: &MulticlassWeights, ex: &LCLExample) -> Result<u8> {
    check_multiclass_dims(weights, ex.k(), ex.x())?;
    let margin = rival_margin(weights, ex.x(), ex.y());
    if ex.gamma() {
        Ok(u8::from(-margin <= 0.0))
    } else {
        Ok(u8::from(margin <= 0.0))
    }
}

/// `max_{y' != y} <w_{y'} - w_y, x>`: positive when some rival beats class
/// `y`, negative when `y` strictly wins.
pub(crate) fn rival_margin(weights: &MulticlassWeights, x: &Instance, y: usize) -> f64 {
    let own = dot(weights.row(y), x.coords());
    let best_rival = (1..=weights.k())
        .filter(|&j| j != y)
        .map(|j| dot(weights.row(j), x.coords()))
        .fold(f64::NEG_INFINITY, f64::max);
    best_rival - own
}

fn check_multiclass_dims(weights: &MulticlassWeights, k: usize, x: &Instance) -> Result<()> {
    if weights.k() != k {
        return Err(Error::ClassCountMismatch {
            weights_k: weights.k(),
            example_k: k,
        });
    }
    if weights.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: weights.dim(),
            found: x.dim(),
        });
    }
    Ok(())
}
