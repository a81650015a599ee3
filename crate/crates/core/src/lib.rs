//! Certified lower and upper bounds on the Fourier l1 dimension of
//! missing-digit measures.
//!
//! The crate is organised in layers:
//!
//! - [`enclosure`]: directed-rounded interval arithmetic over dyadic
//!   endpoints, with rigorous elementary functions and complex boxes;
//! - [`measure`]: missing-digit systems and the functions built from them
//!   (the symbol modulus `g`, cocycle products, grid sums, truncated
//!   Fourier coefficients);
//! - [`certify`]: Lipschitz-grid verification producing self-checking
//!   certificates, two-sided dimension bracketing, and refinement;
//! - [`analytic`]: closed-form lower bounds valid for large bases;
//! - [`consequences`]: the exponent calculus that turns a certified
//!   dimension bound into counting and approximation exponents.
//!
//! Every numeric result is an [`enclosure::Enclosure`] guaranteed to
//! contain the exact value; verdicts are three-valued (pass, fail,
//! inconclusive) and certificates can be re-checked from their serialized
//! form alone.

pub mod analytic;
pub mod certify;
pub mod consequences;
pub mod enclosure;
pub mod error;
pub mod measure;
pub mod rational;

pub use enclosure::{ComplexBox, Enclosure, DEFAULT_PRECISION};
pub use error::{Error, Result};
pub use measure::DigitSystem;
