//! The example transforms (`alpha`) and hypothesis transforms (`beta`) that
//! carry TRL, MCL, and LCL into binary MIL, plus sample-level reduction and
//! the pointwise loss-equality checker.
//!
//! All three reductions share one shape: the reduced bag holds difference
//! vectors built around the labeled class/item, the reduced label says which
//! side of zero the bag score must fall on, and `beta` is a re-indexing of
//! the same weight coordinates (identity for TRL, block-splitting for
//! MCL/LCL). That makes every `beta` onto, which is what upgrades the ERM
//! inequality to an equality.
//!
//! Label convention for LCL: an ordinary label reduces with bag label `-1`
//! (exactly the MCL case) and a complementary label with `+1`, because the
//! complementary error event is "the forbidden class wins the margin", i.e.
//! the bag score falls at or below zero.

use crate::core::{
    bag_score, zero_one_binary, Bag, Instance, LCLExample, LinearWeights, MCLExample, MILExample,
    MulticlassWeights, TRLExample,
};
use crate::error::{Error, Result};
use crate::oracle::VerificationReport;

/// Which original problem a reduced sample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Trl,
    Mcl,
    Lcl,
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProblemKind::Trl => write!(f, "trl"),
            ProblemKind::Mcl => write!(f, "mcl"),
            ProblemKind::Lcl => write!(f, "lcl"),
        }
    }
}

/// Source-problem metadata attached to a reduced sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub kind: ProblemKind,
    /// Original feature dimension (0 for an empty sample).
    pub d: usize,
    /// Class count for MCL/LCL sources.
    pub k: Option<usize>,
}

/// A MIL sample produced by elementwise `alpha`, in source order, with
/// degenerate originals counted rather than emitted.
#[derive(Debug, Clone)]
pub struct ReducedSample {
    pub examples: Vec<MILExample>,
    pub provenance: Provenance,
    pub skipped_count: usize,
}

/// TRL `alpha`: bag of competitor-minus-target differences, label -1.
/// A singleton item set has no competitors and is skipped.
pub fn trl_reduce(ex: &TRLExample) -> Option<MILExample> {
    if ex.items().len() == 1 {
        return None;
    }
    let target = ex.target().coords();
    let diffs: Vec<Instance> = ex
        .items()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != ex.target_index())
        .map(|(_, x)| {
            let coords = x.coords().iter().zip(target).map(|(a, b)| a - b).collect();
            Instance::new(coords).expect("difference of finite vectors is finite")
        })
        .collect();
    let bag = Bag::new(diffs).expect("non-singleton item set leaves at least one competitor");
    Some(MILExample::new(bag, -1).expect("-1 is a valid label"))
}

/// TRL `beta`: the identity on the weight vector. The restored hypothesis
/// ranks with `top1_predict` under the same `w`.
pub fn trl_restore(w: LinearWeights) -> LinearWeights {
    w
}

/// Places `x` in the `y`-th of `k` blocks of a `d * k` zero vector.
pub fn mcl_embed(x: &Instance, y: usize, k: usize) -> Result<Instance> {
    if k < 2 {
        return Err(Error::TooFewClasses(k));
    }
    if y < 1 || y > k {
        return Err(Error::LabelOutOfRange { label: y, k });
    }
    let d = x.dim();
    let mut coords = vec![0.0; d * k];
    coords[(y - 1) * d..y * d].copy_from_slice(x.coords());
    Instance::new(coords)
}

/// Difference of two block embeddings of the same `x`: `x` in block `to`,
/// `-x` in block `from`.
fn block_difference(x: &Instance, to: usize, from: usize, k: usize) -> Instance {
    let d = x.dim();
    let mut coords = vec![0.0; d * k];
    coords[(to - 1) * d..to * d].copy_from_slice(x.coords());
    for (slot, v) in coords[(from - 1) * d..from * d].iter_mut().zip(x.coords()) {
        *slot = -v;
    }
    Instance::new(coords).expect("finite input stays finite")
}

fn multiclass_bag(x: &Instance, y: usize, k: usize) -> Bag {
    let diffs: Vec<Instance> = (1..=k)
        .filter(|&j| j != y)
        .map(|j| block_difference(x, j, y, k))
        .collect();
    Bag::new(diffs).expect("k >= 2 leaves at least one rival class")
}

/// MCL `alpha`: bag of the k-1 rival-minus-own block differences, label -1.
pub fn mcl_reduce(ex: &MCLExample) -> MILExample {
    MILExample::new(multiclass_bag(ex.x(), ex.y(), ex.k()), -1).expect("-1 is a valid label")
}

/// MCL `beta`: split a `d * k` weight vector into k rows of d.
pub fn mcl_restore(omega: &LinearWeights, k: usize) -> Result<MulticlassWeights> {
    MulticlassWeights::from_flat(omega.as_slice().to_vec(), k, omega.lambda_cap())
}

/// Inverse of [`mcl_restore`]: concatenate the rows. Norm and cap carry over
/// unchanged.
pub fn flatten(weights: &MulticlassWeights) -> LinearWeights {
    LinearWeights::new(weights.flat().to_vec(), weights.lambda_cap())
        .expect("flattening preserves the norm")
}

/// LCL `alpha`: the MCL bag for `(x, y)`, labeled -1 for an ordinary label
/// and +1 for a complementary one.
pub fn lcl_reduce(ex: &LCLExample) -> MILExample {
    let label = if ex.gamma() { -1 } else { 1 };
    MILExample::new(multiclass_bag(ex.x(), ex.y(), ex.k()), label).expect("label is -1 or +1")
}

/// Elementwise TRL reduction; singleton sets are counted as skipped.
pub fn reduce_trl_sample(sample: &[TRLExample]) -> Result<ReducedSample> {
    let d = check_uniform(sample.iter().map(|ex| ex.dim()))?;
    let mut examples = Vec::with_capacity(sample.len());
    let mut skipped_count = 0;
    for ex in sample {
        match trl_reduce(ex) {
            Some(mil) => examples.push(mil),
            None => skipped_count += 1,
        }
    }
    Ok(ReducedSample {
        examples,
        provenance: Provenance {
            kind: ProblemKind::Trl,
            d,
            k: None,
        },
        skipped_count,
    })
}

/// Elementwise MCL reduction.
pub fn reduce_mcl_sample(sample: &[MCLExample]) -> Result<ReducedSample> {
    let d = check_uniform(sample.iter().map(|ex| ex.x().dim()))?;
    let k = check_uniform_k(sample.iter().map(MCLExample::k))?;
    Ok(ReducedSample {
        examples: sample.iter().map(mcl_reduce).collect(),
        provenance: Provenance {
            kind: ProblemKind::Mcl,
            d,
            k,
        },
        skipped_count: 0,
    })
}

/// Elementwise LCL reduction.
pub fn reduce_lcl_sample(sample: &[LCLExample]) -> Result<ReducedSample> {
    let d = check_uniform(sample.iter().map(|ex| ex.x().dim()))?;
    let k = check_uniform_k(sample.iter().map(LCLExample::k))?;
    Ok(ReducedSample {
        examples: sample.iter().map(lcl_reduce).collect(),
        provenance: Provenance {
            kind: ProblemKind::Lcl,
            d,
            k,
        },
        skipped_count: 0,
    })
}

fn check_uniform(mut dims: impl Iterator<Item = usize>) -> Result<usize> {
    let Some(first) = dims.next() else {
        return Ok(0);
    };
    for d in dims {
        if d != first {
            return Err(Error::DimensionMismatch {
                expected: first,
                found: d,
            });
        }
    }
    Ok(first)
}

fn check_uniform_k(mut ks: impl Iterator<Item = usize>) -> Result<Option<usize>> {
    let Some(first) = ks.next() else {
        return Ok(None);
    };
    for k in ks {
        if k != first {
            return Err(Error::ClassCountMismatch {
                weights_k: first,
                example_k: k,
            });
        }
    }
    Ok(Some(first))
}

/// A homogeneous original sample of any supported kind.
#[derive(Debug, Clone)]
pub enum OriginalSample {
    Trl(Vec<TRLExample>),
    Mcl(Vec<MCLExample>),
    Lcl(Vec<LCLExample>),
}

impl OriginalSample {
    pub fn kind(&self) -> ProblemKind {
        match self {
            OriginalSample::Trl(_) => ProblemKind::Trl,
            OriginalSample::Mcl(_) => ProblemKind::Mcl,
            OriginalSample::Lcl(_) => ProblemKind::Lcl,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            OriginalSample::Trl(s) => s.len(),
            OriginalSample::Mcl(s) => s.len(),
            OriginalSample::Lcl(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Order-preserving elementwise `alpha` for the matching kind.
    pub fn reduce(&self) -> Result<ReducedSample> {
        match self {
            OriginalSample::Trl(s) => reduce_trl_sample(s),
            OriginalSample::Mcl(s) => reduce_mcl_sample(s),
            OriginalSample::Lcl(s) => reduce_lcl_sample(s),
        }
    }
}

/// One reduction viewed abstractly: enough structure for the brute-force and
/// Rademacher verifiers to treat all three kinds uniformly.
pub trait ErmReduction {
    type Example;
    type Hypothesis: Clone;

    fn kind(&self) -> ProblemKind;

    /// `alpha`; `None` marks a degenerate original whose loss is 0 for every
    /// hypothesis and which is dropped from reduced training samples.
    fn alpha(&self, ex: &Self::Example) -> Option<MILExample>;

    /// `beta`: reduced weights back to an original-space hypothesis.
    fn beta(&self, w: &LinearWeights) -> Result<Self::Hypothesis>;

    /// The reduced-space weights matched to an original hypothesis; the
    /// right-inverse of [`ErmReduction::beta`].
    fn reduced_weights(&self, h: &Self::Hypothesis) -> LinearWeights;

    fn original_loss(&self, h: &Self::Hypothesis, ex: &Self::Example) -> Result<u8>;

    /// Binary bag loss of reduced weights on `alpha(ex)`; 0 for skipped
    /// degenerates.
    fn reduced_loss(&self, w: &LinearWeights, ex: &Self::Example) -> Result<u8> {
        match self.alpha(ex) {
            Some(mil) => Ok(zero_one_binary(mil.label(), bag_score(w, &mil.bag)?)),
            None => Ok(0),
        }
    }
}

/// Top-1 ranking to MIL.
#[derive(Debug, Clone, Copy)]
pub struct TrlReduction;

impl ErmReduction for TrlReduction {
    type Example = TRLExample;
    type Hypothesis = LinearWeights;

    fn kind(&self) -> ProblemKind {
        ProblemKind::Trl
    }

    fn alpha(&self, ex: &TRLExample) -> Option<MILExample> {
        trl_reduce(ex)
    }

    fn beta(&self, w: &LinearWeights) -> Result<LinearWeights> {
        Ok(trl_restore(w.clone()))
    }

    fn reduced_weights(&self, h: &LinearWeights) -> LinearWeights {
        h.clone()
    }

    fn original_loss(&self, h: &LinearWeights, ex: &TRLExample) -> Result<u8> {
        crate::core::trl_loss(h, ex)
    }
}

/// Multi-class to MIL via block embedding.
#[derive(Debug, Clone, Copy)]
pub struct MclReduction {
    pub k: usize,
}

impl ErmReduction for MclReduction {
    type Example = MCLExample;
    type Hypothesis = MulticlassWeights;

    fn kind(&self) -> ProblemKind {
        ProblemKind::Mcl
    }

    fn alpha(&self, ex: &MCLExample) -> Option<MILExample> {
        Some(mcl_reduce(ex))
    }

    fn beta(&self, w: &LinearWeights) -> Result<MulticlassWeights> {
        mcl_restore(w, self.k)
    }

    fn reduced_weights(&self, h: &MulticlassWeights) -> LinearWeights {
        flatten(h)
    }

    fn original_loss(&self, h: &MulticlassWeights, ex: &MCLExample) -> Result<u8> {
        crate::core::mcl_loss(h, ex)
    }
}

/// Labeled-and-complementarily-labeled to MIL; same embedding as MCL with a
/// per-example label.
#[derive(Debug, Clone, Copy)]
pub struct LclReduction {
    pub k: usize,
}

impl ErmReduction for LclReduction {
    type Example = LCLExample;
    type Hypothesis = MulticlassWeights;

    fn kind(&self) -> ProblemKind {
        ProblemKind::Lcl
    }

    fn alpha(&self, ex: &LCLExample) -> Option<MILExample> {
        Some(lcl_reduce(ex))
    }

    fn beta(&self, w: &LinearWeights) -> Result<MulticlassWeights> {
        mcl_restore(w, self.k)
    }

    fn reduced_weights(&self, h: &MulticlassWeights) -> LinearWeights {
        flatten(h)
    }

    fn original_loss(&self, h: &MulticlassWeights, ex: &LCLExample) -> Result<u8> {
        crate::core::lcl_loss(h, ex)
    }
}

/// Checks the pointwise identity: original 0/1 loss of `h` on `ex` equals the
/// binary bag loss of the matched reduced weights on `alpha(ex)`. Integer
/// equality, no tolerance; the report carries both values and the example on
/// failure.
pub fn check_loss_equality<R>(
    reduction: &R,
    ex: &R::Example,
    h: &R::Hypothesis,
) -> Result<VerificationReport>
where
    R: ErmReduction,
    R::Example: std::fmt::Debug,
{
    let original = reduction.original_loss(h, ex)?;
    let reduced = reduction.reduced_loss(&reduction.reduced_weights(h), ex)?;
    let name = format!("loss_equality_{}", reduction.kind());
    let witness = (original != reduced).then(|| {
        serde_json::json!({
            "original_loss": original,
            "reduced_loss": reduced,
            "example": format!("{ex:?}"),
        })
    });
    Ok(VerificationReport::equality(
        name,
        f64::from(original),
        f64::from(reduced),
        0.0,
        witness,
    ))
}
