//! Guesswork of i.i.d. word sources, unconditioned and restricted to the
//! typical set.
//!
//! - [`entropy`]: distributions, types, typical-set membership, type counts.
//! - [`tilt`]: the tilted family `l ∝ p^beta` and the boundary types `l-`, `l+`.
//! - [`asymptotics`]: scaled CGFs, rate functions and growth exponents.
//! - [`oracle`]: exact finite-`k` guessing tables, moments and censuses.

pub mod asymptotics;
pub mod entropy;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod tilt;

pub use asymptotics::{
    binary_closed_forms, growth_exponents, guesswork_pmf_approx, rate_function, scgf,
    BinaryClosedForms, GrowthExponents, RateFunction, ScgfModel, SourceKind,
};
pub use entropy::{LetterDistribution, TypeVector, TypicalSetSpec, Word};
pub use error::{Error, Result};
pub use tilt::{boundary_types, l_star, BoundaryTypes, ConstrainedTilt, Regime, TiltedFamily};
