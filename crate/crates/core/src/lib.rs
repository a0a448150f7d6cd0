//! Exact and certified computations with fractal measures on the real line.
//!
//! The crate covers self-similar measures `mu_{rho,D}`, the alternating-sign
//! measures generated by `x -> (-1)^{floor(d/m)} rho (x + d)`, and Moran
//! measures given as a finite prefix followed by a periodic tail. On top of
//! these it provides:
//!
//! * exact rational arithmetic and an exact vanishing test for sums of roots
//!   of unity ([`exact`]);
//! * digit-set algebra, mask polynomials and exact zero sets ([`digits`]);
//! * certified Fourier-transform evaluation, including the 2x2 matrix cocycle
//!   for alternating measures ([`fourier`]);
//! * exact Hadamard-triple checks and product-form certificates
//!   ([`hadamard`]);
//! * orthogonality, Q-function, maximal orthogonal families and spectrality
//!   decisions ([`spectra`]).

pub mod digits;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod hadamard;
pub mod measure;
pub mod spectra;

pub use digits::{Atom, Block, DigitSet, ZeroSetExpr, ZeroSetTerm};
pub use error::{Error, Result, UndecidedPair};
pub use exact::{Rational, RootOfUnitySum};
pub use fourier::CertifiedComplex;
pub use measure::{
    AlternatingSpec, MeasureSpec, MoranSpec, MoranStage, SelfSimilarSpec, SignedDigit, SymmetricAlternatingSpec,
};
pub use spectra::FrequencySet;

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
