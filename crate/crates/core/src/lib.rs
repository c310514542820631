//! milred: reduce ranking, multi-class, and complementary-label ERM to
//! multiple-instance learning.
//!
//! The library turns three supervised problems into binary MIL problems over
//! bags of difference vectors, so that a single family of MI-SVM solvers can
//! train all of them and the trained weights map back to the original space:
//!
//! * top-1 ranking (`TRL`): pick the best item of a set with a linear scorer;
//! * multi-class (`MCL`): argmax over per-class weight rows;
//! * labeled-and-complementarily-labeled (`LCL`): records either assert a
//!   true label or forbid one.
//!
//! Each reduction is a pair of maps: `alpha` sends an example to a labeled
//! bag, `beta` sends reduced weights back to an original-space hypothesis.
//! The defining property is pointwise loss equality: the original 0/1 loss of
//! `beta(w)` on an example equals the binary bag loss of `w` on `alpha` of
//! that example, with ties counted as errors on both sides. Everything else
//! (equality of empirical risk minima, equality of empirical Rademacher
//! complexity, risk rescaling for complementary labels) follows from that
//! identity and is checked mechanically by the [`oracle`] module.
//!
//! Module map:
//!
//! * [`core`]: instances, bags, weight types, losses, empirical risks;
//! * [`reductions`]: the three `alpha`/`beta` pairs and sample-level
//!   reduction;
//! * [`solvers`]: convex one-class MI-SVM, DC (CCCP) binary MI-SVM, and a
//!   direct multi-class SVM baseline;
//! * [`analysis`]: Rademacher estimation and generalization-bound
//!   arithmetic;
//! * [`datagen`]: seeded synthetic generators with planted hypotheses;
//! * [`oracle`]: brute-force and Monte-Carlo verifiers used by the test
//!   suite and the `verify` CLI command.

pub mod analysis;
pub mod core;
pub mod datagen;
pub mod error;
pub mod oracle;
pub mod reductions;
pub mod solvers;

pub use error::{Error, Result};
