use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{Arg, CertifiedComplex, EPS};
use crate::digits::{mask_eval, mask_eval_exact, mask_vanishes, DigitSet};
use crate::exact::Rational;
use crate::measure::MoranSpec;

/// Geometric data of the periodic tail used by the truncation bound.
struct TailBound {
    /// `sum_{r=1}^{P} max|R_r| / |b_1 ... b_r|` over one period.
    period_sum: f64,
    /// `|b_1 ... b_P|` over one period.
    period_expansion: f64,
}

impl TailBound {
    fn new(spec: &MoranSpec) -> Option<TailBound> {
        if spec.tail.is_empty() {
            return None;
        }
        let mut cumulative = Rational::one();
        let mut period_sum = 0.0;
        for stage in &spec.tail {
            cumulative = cumulative * stage.b.abs();
            period_sum += (stage.digits.max_abs() / &cumulative).to_f64();
        }
        Some(TailBound {
            period_sum,
            period_expansion: cumulative.to_f64(),
        })
    }

    /// `sum_{k > J} 2 pi max|R_k| |y_k|` when stage `J` closes a period and
    /// `y_J = xi / B_J` has absolute value `y_abs`.
    fn after(&self, y_abs: f64) -> f64 {
        TAU * y_abs * self.period_sum / (1.0 - 1.0 / self.period_expansion)
    }
}

/// Rounding error of one mask factor evaluated in double precision.
pub(super) fn factor_rounding(digits: usize, max_digit: f64, y_abs: f64, exact_phases: bool) -> f64 {
    let phase = if exact_phases {
        0.0
    } else {
        TAU * max_digit * y_abs * 4.0 * EPS
    };
    phase + (digits as f64 + 16.0) * EPS
}

/// Stages visited until the remaining tail sum falls below `threshold`,
/// yielding `(stage digits, exact 1 / B_k, tail sum after this stage)`. The
/// tail sum is only known at period boundaries and is infinite elsewhere.
fn stages_until<'a>(
    spec: &'a MoranSpec,
    xi_abs: f64,
    threshold: f64,
) -> impl Iterator<Item = (&'a DigitSet, Rational, f64)> + 'a {
    let tail = TailBound::new(spec);
    let mut inverse = Rational::one();
    let mut k = 0usize;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let stage = spec.stage(k)?;
        inverse = &inverse / &stage.b;
        k += 1;
        let y_abs = xi_abs * inverse.abs().to_f64();
        let remaining = match &tail {
            None if k == spec.prefix.len() => 0.0,
            None => f64::INFINITY,
            Some(t) if k >= spec.prefix.len() && (k - spec.prefix.len()).is_multiple_of(spec.tail.len()) => {
                t.after(y_abs)
            }
            Some(_) => f64::INFINITY,
        };
        if remaining <= threshold {
            done = true;
        }
        Some((&stage.digits, inverse.clone(), remaining))
    })
}

/// `prod_k m_{R_k}(xi / (b_1 ... b_k))` with a certified error bound.
///
/// Truncation stops at a period boundary once the tail sum is at most
/// `min(tol, 1) / 2`. Every later factor then satisfies `|1 - m| < 1` and is
/// nonzero, so checking the visited factors for exact zeros is complete.
pub(super) fn moran_product(spec: &MoranSpec, xi: Arg<'_>, tol: f64) -> CertifiedComplex {
    if xi.is_zero() {
        return CertifiedComplex::exact(Complex64::new(1.0, 0.0));
    }
    let xi_abs = xi.abs();
    let xi_exact = xi.to_rational();
    let threshold = tol.min(1.0) / 2.0;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut rounding = 0.0;
    let mut truncation = 0.0;
    for (digits, inverse, remaining) in stages_until(spec, xi_abs, threshold) {
        let (value, y_abs) = match xi {
            Arg::Float(x) => {
                let y = x * inverse.to_f64();
                (mask_eval(digits, y), y.abs())
            }
            Arg::Exact(x) => {
                let y = x * &inverse;
                (mask_eval_exact(digits, &y), y.abs().to_f64())
            }
        };
        let err = factor_rounding(
            digits.len(),
            digits.max_abs().to_f64(),
            y_abs,
            matches!(xi, Arg::Exact(_)),
        );
        if value.norm() <= 2.0 * err {
            if let Some(x) = &xi_exact {
                if mask_vanishes(digits, &(x * &inverse)) == Some(true) {
                    return CertifiedComplex::exact(Complex64::new(0.0, 0.0));
                }
            }
        }
        acc *= value;
        rounding += err + 4.0 * EPS;
        truncation = remaining;
    }
    CertifiedComplex {
        value: acc,
        error_bound: truncation + 1.01 * rounding,
    }
}

/// Exact answer to "does the infinite product vanish at `x`", or `None` when
/// some factor's root order overflows.
pub fn product_vanishes_at(spec: &MoranSpec, x: &Rational) -> Option<bool> {
    if x.is_zero() {
        return Some(false);
    }
    let mut undecided = false;
    for (digits, inverse, _) in stages_until(spec, x.abs().to_f64(), 0.5) {
        match mask_vanishes(digits, &(x * &inverse)) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => undecided = true,
        }
    }
    (!undecided).then_some(false)
}
