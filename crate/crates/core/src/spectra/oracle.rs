use serde::Serialize;

use super::decisions::nu_zero_superset_member;
use crate::digits::{measure_zero_set, ZeroSetExpr};
use crate::exact::Rational;
use crate::fourier::{evaluate_at, product_vanishes_at};
use crate::measure::{MeasureSpec, MoranSpec};

/// Answer to "is `x` a zero of the Fourier transform".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Zero,
    NonZero,
    Indeterminate,
}

/// How a membership answer was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Exact zero-set expression.
    ZeroSet,
    /// Exact test of the finitely many mask factors that can vanish.
    FactorTest,
    /// Outside the known superset of zeros for the odd alternating family.
    Superset,
    /// Certified numeric evaluation whose error disc misses 0.
    Certified,
    /// Nothing decisive.
    None,
}

/// Tolerance of the numeric fallback.
const FALLBACK_TOL: f64 = 1e-12;

/// Decides zero membership for one measure, caching its exact zero set.
///
/// Exact routes are tried first. The numeric fallback only ever answers
/// `NonZero`, since a small certified value does not prove a zero.
pub struct ZeroOracle<'a> {
    spec: &'a MeasureSpec,
    zero_set: Option<ZeroSetExpr>,
    product: Option<MoranSpec>,
    odd_family: Option<u32>,
}

impl<'a> ZeroOracle<'a> {
    pub fn new(spec: &'a MeasureSpec) -> Self {
        let zero_set = measure_zero_set(spec);
        let product = match spec {
            MeasureSpec::SelfSimilar(s) => Some(MoranSpec::from_self_similar(s)),
            MeasureSpec::Moran(m) => Some(m.clone()),
            _ => None,
        };
        let odd_family = match spec {
            MeasureSpec::Alternating(a) if a.period == 1 && a.digit_count % 2 == 1 && a.digit_count >= 3 => {
                Some(a.digit_count)
            }
            _ => None,
        };
        ZeroOracle {
            spec,
            zero_set,
            product,
            odd_family,
        }
    }

    /// True when every answer is exact (no numeric fallback can be needed).
    pub fn is_exact(&self) -> bool {
        self.zero_set.is_some()
    }

    pub fn decide(&self, x: &Rational) -> (Membership, Evidence) {
        if x.is_zero() {
            return (Membership::NonZero, Evidence::ZeroSet);
        }
        if let Some(z) = &self.zero_set {
            let m = if z.contains(x) {
                Membership::Zero
            } else {
                Membership::NonZero
            };
            return (m, Evidence::ZeroSet);
        }
        if let Some(p) = &self.product {
            match product_vanishes_at(p, x) {
                Some(true) => return (Membership::Zero, Evidence::FactorTest),
                Some(false) => return (Membership::NonZero, Evidence::FactorTest),
                None => {}
            }
        }
        if let (Some(s), Some(rho)) = (self.odd_family, self.spec.rho()) {
            if nu_zero_superset_member(s, rho, x) == Ok(false) {
                return (Membership::NonZero, Evidence::Superset);
            }
        }
        if evaluate_at(self.spec, x, FALLBACK_TOL).excludes_zero() {
            return (Membership::NonZero, Evidence::Certified);
        }
        (Membership::Indeterminate, Evidence::None)
    }

    pub fn membership(&self, x: &Rational) -> Membership {
        self.decide(x).0
    }
}
