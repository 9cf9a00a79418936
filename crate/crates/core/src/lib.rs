//! Generalized Zak transforms for finite abelian groups acting on finite
//! weighted spaces, with the fiberwise theory of invariant subspaces built on
//! top of them: range functions, frame and Riesz bounds, Parseval
//! decompositions, and the subgroup-translation picture with its fiberization
//! map. A dense linear-algebra [`oracle`] cross-checks the fiberwise results.
//!
//! The numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`.

pub mod action;
pub mod decomp;
pub mod error;
pub mod fixtures;
pub mod frames;
pub mod group;
mod linalg;
pub mod oracle;
pub mod ranges;
pub mod scalar;
pub mod translation;
pub mod zak;

pub use num_complex::Complex;

pub use action::{Condition, QuasiInvariantAction, TilingTransversal, ValidationReport, Violation, WeightedSpace};
pub use decomp::{parseval_decompose, verify_decomposition, DecompositionReport};
pub use error::{Error, Result};
pub use frames::{bracket, frame_check, riesz_check, single_generator_report, BoundKind, BracketFunction, FiberBounds, FrameReport};
pub use group::{Element, FiniteAbelianGroup, Subgroup};
pub use linalg::{column_svd, ColumnSvd};
pub use ranges::{membership, project, range_of, Membership, RangeFunction};
pub use scalar::{Real, Tolerances};
pub use translation::{Normalization, TiAnalysis, TranslationAction, TranslationScenario, WeilCheck};
pub use zak::{FiberLayout, FiberedVector, ZakTransform};

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;

pub type Action64 = QuasiInvariantAction<f64>;
pub type Action32 = QuasiInvariantAction<f32>;
pub type Zak64 = ZakTransform<f64>;
pub type Zak32 = ZakTransform<f32>;
pub type Fibered64 = FiberedVector<f64>;
pub type Fibered32 = FiberedVector<f32>;
pub type Range64 = RangeFunction<f64>;
pub type Range32 = RangeFunction<f32>;
pub type FrameReport64 = FrameReport<f64>;
pub type FrameReport32 = FrameReport<f32>;
pub type Tolerances64 = Tolerances<f64>;
pub type Tolerances32 = Tolerances<f32>;
