//! L-data: triples (f, K, m) of Dirichlet log-coefficients, an archimedean
//! integral kernel and a zero multiset, tied together by the explicit
//! formula. The crate builds such data from classical inputs (Selberg-style
//! gamma factors, primitive Dirichlet characters), verifies the defining
//! distributional identity against zero data, synthesizes the canonical
//! gamma factor, evaluates the associated L-functions, and classifies
//! degree-1 data as shifted Dirichlet L-functions.

pub mod analytic;
pub mod builders;
pub mod characters;
pub mod classify;
pub mod coeff;
pub mod datum;
pub mod error;
pub mod explicit;
pub mod files;
pub mod gamma;
pub mod kahan;
pub mod kernel;
pub mod quad;
pub mod special;
pub mod testfuncs;
pub mod zero_io;
pub mod zeros;

pub use coeff::CoefficientSeq;
pub use datum::{LDatum, Positivity, ValidationReport};
pub use error::{Error, Result};
pub use kernel::{Kernel, KernelTable, KernelTerm};
pub use num_complex::Complex64;
pub use num_rational::Rational64;
pub use zeros::{ZeroEntry, ZeroMultiset};
