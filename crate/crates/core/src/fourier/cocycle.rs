use std::f64::consts::TAU;

use num_complex::Complex64;

use super::product::factor_rounding;
use super::{Arg, CertifiedComplex, EPS};
use crate::digits::unit_phasor;
use crate::exact::Rational;
use crate::measure::SignedDigit;

/// Cocycle entries `A(u) = (1/n) sum_{+} e(d u)` and `B(u) = (1/n) sum_{-} e(-d u)`.
fn entries(digits: &[SignedDigit], u: Arg<'_>) -> (Complex64, Complex64) {
    let mut a = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    for sd in digits {
        let turns = match u {
            Arg::Float(y) => (sd.digit as f64 * y).rem_euclid(1.0),
            Arg::Exact(y) => (y * Rational::from_integer(sd.digit)).fract().to_f64(),
        };
        if sd.preserving {
            a += unit_phasor(turns);
        } else {
            b += unit_phasor(turns).conj();
        }
    }
    let n = digits.len() as f64;
    (a / n, b / n)
}

/// Number of cocycle steps so that seeding with `(1, 1)` at `rho^K xi` costs at
/// most `tol / 2`, and the seed error itself.
fn depth(rho: f64, max_digit: f64, xi_abs: f64, tol: f64) -> (usize, f64) {
    let seed = |k: i32| TAU * max_digit * rho.powi(k) * xi_abs / (1.0 - rho);
    let mut k = 0;
    while seed(k) > tol / 2.0 {
        k += 1;
    }
    (k as usize, seed(k))
}

/// `F(xi) = M(rho xi) ... M(rho^K xi) (1, 1)` with
/// `F(t) = (nu(t), nu(-t))` and `M(u) = [[A, B], [conj B, conj A]]`.
///
/// Each row of `M` has absolute sum at most 1, so the seed error is not
/// amplified by the product.
pub(super) fn cocycle_transform(rho: &Rational, digits: &[SignedDigit], xi: Arg<'_>, tol: f64) -> CertifiedComplex {
    if xi.is_zero() {
        return CertifiedComplex::exact(Complex64::new(1.0, 0.0));
    }
    let max_digit = max_digit(digits);
    let (k_max, seed_error) = depth(rho.to_f64(), max_digit, xi.abs(), tol);
    let (value, rounding) = unroll(rho, digits, xi, k_max);
    CertifiedComplex {
        value,
        error_bound: seed_error + 1.01 * rounding,
    }
}

fn max_digit(digits: &[SignedDigit]) -> f64 {
    digits.iter().map(|d| d.digit.unsigned_abs()).max().unwrap_or(0) as f64
}

/// First component of `M(rho xi) ... M(rho^k_max xi) (1, 1)` and its rounding
/// error.
fn unroll(rho: &Rational, digits: &[SignedDigit], xi: Arg<'_>, k_max: usize) -> (Complex64, f64) {
    let max_digit = max_digit(digits);
    let mut powers = Vec::with_capacity(k_max);
    let mut power = Rational::one();
    for _ in 0..k_max {
        power = power * rho;
        powers.push(power.clone());
    }
    let mut f = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let mut rounding = 0.0;
    let exact = matches!(xi, Arg::Exact(_));
    for p in powers.iter().rev() {
        let (y_abs, (a, b)) = match xi {
            Arg::Float(x) => {
                let y = x * p.to_f64();
                (y.abs(), entries(digits, Arg::Float(y)))
            }
            Arg::Exact(x) => {
                let y = x * p;
                (y.abs().to_f64(), entries(digits, Arg::Exact(&y)))
            }
        };
        f = (a * f.0 + b * f.1, b.conj() * f.0 + a.conj() * f.1);
        rounding += 2.0 * factor_rounding(digits.len(), max_digit, y_abs, exact) + 6.0 * EPS;
    }
    (f.0, rounding)
}
