//! Certified Fourier transforms `mu(xi) = int exp(2 pi i x xi) dmu(x)`.
//!
//! Self-similar and Moran measures are evaluated as truncated infinite
//! products of mask polynomials; alternating-sign measures go through a 2x2
//! matrix cocycle and never touch the product route, so the two can be
//! compared against each other.

mod checks;
mod cocycle;
mod product;

use num_complex::Complex64;

use crate::digits::{mask_eval, mask_eval_exact, DigitSet};
use crate::exact::Rational;
use crate::measure::{AlternatingSpec, MeasureSpec, MoranSpec, SelfSimilarSpec, SymmetricAlternatingSpec};

pub use checks::{sweep, verify_nu_equals_mu, verify_symmetric_example, IdentityReport, SweepRow};
pub use product::product_vanishes_at;

pub(crate) const EPS: f64 = f64::EPSILON;

/// Double-precision value with `|true value - value| <= error_bound`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedComplex {
    pub value: Complex64,
    pub error_bound: f64,
}

impl CertifiedComplex {
    pub fn exact(value: Complex64) -> Self {
        CertifiedComplex {
            value,
            error_bound: 0.0,
        }
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// True when the certified disc around `value` misses 0.
    pub fn excludes_zero(&self) -> bool {
        self.value.norm() > self.error_bound
    }

    /// Exact zero, as produced by the factor short-circuit.
    pub fn is_exact_zero(&self) -> bool {
        self.error_bound == 0.0 && self.value == Complex64::new(0.0, 0.0)
    }
}

/// Evaluation point: a double, or an exact rational whose phases are reduced
/// mod 1 before rounding.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Arg<'a> {
    Float(f64),
    Exact(&'a Rational),
}

impl Arg<'_> {
    fn is_zero(&self) -> bool {
        match self {
            Arg::Float(x) => *x == 0.0,
            Arg::Exact(x) => x.is_zero(),
        }
    }

    fn abs(&self) -> f64 {
        match self {
            Arg::Float(x) => x.abs(),
            Arg::Exact(x) => x.abs().to_f64(),
        }
    }

    fn to_rational(self) -> Option<Rational> {
        match self {
            Arg::Float(x) => Rational::from_f64(x),
            Arg::Exact(x) => Some(x.clone()),
        }
    }
}

/// Transform of the uniform discrete measure on `e`, i.e. `m_E(xi)`.
pub fn ft_discrete(e: &DigitSet, xi: f64) -> Complex64 {
    mask_eval(e, xi)
}

pub fn ft_discrete_at(e: &DigitSet, xi: &Rational) -> Complex64 {
    mask_eval_exact(e, xi)
}

pub fn ft_self_similar(spec: &SelfSimilarSpec, xi: f64, tol: f64) -> CertifiedComplex {
    product::moran_product(&MoranSpec::from_self_similar(spec), Arg::Float(xi), tol)
}

pub fn ft_self_similar_at(spec: &SelfSimilarSpec, xi: &Rational, tol: f64) -> CertifiedComplex {
    product::moran_product(&MoranSpec::from_self_similar(spec), Arg::Exact(xi), tol)
}

pub fn ft_moran(spec: &MoranSpec, xi: f64, tol: f64) -> CertifiedComplex {
    product::moran_product(spec, Arg::Float(xi), tol)
}

pub fn ft_moran_at(spec: &MoranSpec, xi: &Rational, tol: f64) -> CertifiedComplex {
    product::moran_product(spec, Arg::Exact(xi), tol)
}

pub fn ft_alternating(spec: &AlternatingSpec, xi: f64, tol: f64) -> CertifiedComplex {
    cocycle::cocycle_transform(&spec.rho, &spec.signed_digits(), Arg::Float(xi), tol)
}

pub fn ft_alternating_at(spec: &AlternatingSpec, xi: &Rational, tol: f64) -> CertifiedComplex {
    cocycle::cocycle_transform(&spec.rho, &spec.signed_digits(), Arg::Exact(xi), tol)
}

pub fn ft_alternating_symmetric(spec: &SymmetricAlternatingSpec, xi: f64, tol: f64) -> CertifiedComplex {
    cocycle::cocycle_transform(&spec.rho, &spec.signed_digits(), Arg::Float(xi), tol)
}

pub fn ft_alternating_symmetric_at(spec: &SymmetricAlternatingSpec, xi: &Rational, tol: f64) -> CertifiedComplex {
    cocycle::cocycle_transform(&spec.rho, &spec.signed_digits(), Arg::Exact(xi), tol)
}

/// Dispatches on the measure variant.
pub fn evaluate(spec: &MeasureSpec, xi: f64, tol: f64) -> CertifiedComplex {
    match spec {
        MeasureSpec::SelfSimilar(s) => ft_self_similar(s, xi, tol),
        MeasureSpec::Alternating(a) => ft_alternating(a, xi, tol),
        MeasureSpec::AlternatingSymmetric(a) => ft_alternating_symmetric(a, xi, tol),
        MeasureSpec::Moran(m) => ft_moran(m, xi, tol),
    }
}

pub fn evaluate_at(spec: &MeasureSpec, xi: &Rational, tol: f64) -> CertifiedComplex {
    match spec {
        MeasureSpec::SelfSimilar(s) => ft_self_similar_at(s, xi, tol),
        MeasureSpec::Alternating(a) => ft_alternating_at(a, xi, tol),
        MeasureSpec::AlternatingSymmetric(a) => ft_alternating_symmetric_at(a, xi, tol),
        MeasureSpec::Moran(m) => ft_moran_at(m, xi, tol),
    }
}
