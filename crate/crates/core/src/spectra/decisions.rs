use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use super::FrequencySet;
use crate::error::{domain, Result};
use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralityDecision {
    pub spectral: bool,
    pub reason: String,
}

/// The alternating measure with `2Nm` digits and period `m` is spectral iff
/// `1/rho` is an integer `p` with `2Nm | p`.
pub fn spectrality_decision(m: u32, n_blocks: u32, rho: &Rational) -> Result<SpectralityDecision> {
    if m == 0 || n_blocks == 0 {
        return domain("m and N must be positive");
    }
    if !rho.is_positive() || rho >= &Rational::one() {
        return domain(format!("rho = {rho} is not in (0, 1)"));
    }
    let inverse = rho.recip()?;
    let Some(p) = inverse.to_integer() else {
        return Ok(SpectralityDecision {
            spectral: false,
            reason: format!("1/rho = {inverse} is not an integer"),
        });
    };
    let k = BigInt::from(2u64 * m as u64 * n_blocks as u64);
    let spectral = p.is_multiple_of(&k);
    let reason = if spectral {
        format!("{k}\u{2223}{p}")
    } else {
        format!("{k}\u{2224}{p}")
    };
    Ok(SpectralityDecision { spectral, reason })
}

/// At most `s` mutually orthogonal exponentials when `gcd(p, s) = 1`; `None`
/// when that hypothesis (or `p, s >= 2`) fails.
pub fn orthogonality_bound(p: u64, s: u64) -> Option<u64> {
    (p >= 2 && s >= 2 && p.gcd(&s) == 1).then_some(s)
}

/// Membership of `x` in
/// `U_{k>=1} ((2Z+1) \ s(2Z+1)) / (2 rho^k s)  u  U_{k>=1} (Z \ sZ) / (rho^k s)`,
/// the known superset of zeros for the alternating measure on `D_s`, `s` odd.
pub fn nu_zero_superset_member(s: u32, rho: &Rational, x: &Rational) -> Result<bool> {
    if s < 3 || s.is_multiple_of(2) {
        return domain(format!("s = {s} must be odd and at least 3"));
    }
    if !rho.is_positive() || rho >= &Rational::one() {
        return domain(format!("rho = {rho} is not in (0, 1)"));
    }
    let s_q = Rational::from_integer(s);
    let s_int = BigInt::from(s);
    // both families have minimum absolute value 1 / (2s)
    let floor = Rational::new(1, 2 * s as i64)?;
    let mut y = x * rho;
    while !y.is_zero() && y.abs() >= floor {
        let odd = (&y * Rational::from_integer(2) * &s_q).to_integer();
        if odd.is_some_and(|u| u.is_odd() && !u.is_multiple_of(&s_int)) {
            return Ok(true);
        }
        let plain = (&y * &s_q).to_integer();
        if plain.is_some_and(|v| !v.is_multiple_of(&s_int)) {
            return Ok(true);
        }
        y = y * rho;
    }
    Ok(false)
}

fn windowed(scale: &Rational, modulus: i64, window: &Rational) -> Result<FrequencySet> {
    if window.is_negative() {
        return domain("window must be nonnegative");
    }
    let bound = (window / scale).floor();
    let bound = i64::try_from(bound).map_err(|_| crate::Error::Domain("window too large".into()))?;
    let elements = std::iter::once(Rational::zero()).chain(
        (-bound..=bound)
            .filter(|k| k.rem_euclid(modulus) != 0)
            .map(|k| Rational::from_integer(k) * scale),
    );
    FrequencySet::new(elements)
}

/// `{0} u ((Z \ sZ) / (2s))` within `[-window, window]`, for odd `s`.
pub fn odd_superset_candidates(s: u32, window: &Rational) -> Result<FrequencySet> {
    if s < 3 || s.is_multiple_of(2) {
        return domain(format!("s = {s} must be odd and at least 3"));
    }
    windowed(&Rational::new(1, 2 * s as i64)?, s as i64, window)
}

/// `{0} u ((Z \ sZ) / (sQ))` with `Q = p(1 - s) + 1` within
/// `[-window, window]`, for even `s`.
pub fn even_superset_candidates(s: u32, p: u32, window: &Rational) -> Result<FrequencySet> {
    if s < 2 || s % 2 == 1 {
        return domain(format!("s = {s} must be even"));
    }
    let q = p as i64 * (1 - s as i64) + 1;
    if q == 0 {
        return domain("Q = p(1 - s) + 1 vanishes");
    }
    windowed(&Rational::new(1, (s as i64 * q).abs())?, s as i64, window)
}
