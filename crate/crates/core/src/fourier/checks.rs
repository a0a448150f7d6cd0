use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{evaluate, ft_alternating, ft_alternating_symmetric, ft_self_similar, CertifiedComplex, EPS};
use crate::digits::{alternate_digit_set, unit_phasor, DigitSet};
use crate::error::{domain, Result};
use crate::exact::Rational;
use crate::measure::{AlternatingSpec, MeasureSpec, SelfSimilarSpec, SymmetricAlternatingSpec};

/// Outcome of comparing two evaluators at sampled points.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub worst_xi: f64,
    /// Largest sum of the two certified bounds over the samples.
    pub max_error_bound: f64,
    pub tol: f64,
    pub pass: bool,
}

fn sample_points(count: usize, window: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(-window..=window)).collect()
}

/// Runs `pair` at every sample; a sample passes when its deviation is at most
/// `allowance(bounds)`.
fn compare<F, A>(points: &[f64], tol: f64, pair: F, allowance: A) -> IdentityReport
where
    F: Fn(f64) -> (CertifiedComplex, CertifiedComplex) + Sync,
    A: Fn(f64) -> f64,
{
    let results: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|&xi| {
            let (a, b) = pair(xi);
            (xi, (a.value - b.value).norm(), a.error_bound + b.error_bound)
        })
        .collect();
    let mut report = IdentityReport {
        samples: points.len(),
        max_deviation: 0.0,
        worst_xi: 0.0,
        max_error_bound: 0.0,
        tol,
        pass: true,
    };
    for (xi, dev, bound) in results {
        if dev > report.max_deviation {
            report.max_deviation = dev;
            report.worst_xi = xi;
        }
        report.max_error_bound = report.max_error_bound.max(bound);
        if dev > allowance(bound) {
            report.pass = false;
        }
    }
    report
}

/// Cocycle transform of the alternating measure with `n = 2Nm` digits
/// against the product transform of `mu_{rho, D_m (+) 2m D_N (+) (1 + m rho - 2Nm) D_2}`.
pub fn verify_nu_equals_mu(
    m: u32,
    n_blocks: u32,
    rho: &Rational,
    sample_count: usize,
    window: f64,
    tol: f64,
    seed: u64,
) -> Result<IdentityReport> {
    let alt = AlternatingSpec::new(rho.clone(), m, 2 * n_blocks * m)?;
    let ss = SelfSimilarSpec {
        rho: rho.clone(),
        digits: alternate_digit_set(m, n_blocks, rho)?,
    };
    let points = sample_points(sample_count, window, seed);
    Ok(compare(
        &points,
        tol,
        |xi| (ft_alternating(&alt, xi, tol), ft_self_similar(&ss, xi, tol)),
        |bound| tol + bound,
    ))
}

/// `nu(t) = exp(-2 pi i n t rho / (1 - rho)) mu_{rho, D_{2n+1}}(t)` for the
/// symmetric alternating measure on `{-n, ..., n}`. Both sides are evaluated
/// at `tol / 100` and every deviation must stay within `tol`.
pub fn verify_symmetric_example(
    n: u32,
    rho: &Rational,
    sample_count: usize,
    window: f64,
    tol: f64,
    seed: u64,
) -> Result<IdentityReport> {
    let alt = SymmetricAlternatingSpec::new(rho.clone(), n)?;
    let ss = SelfSimilarSpec {
        rho: rho.clone(),
        digits: DigitSet::consecutive(2 * n + 1)?,
    };
    let shift = (Rational::from_integer(n) * rho / (Rational::one() - rho)).to_f64();
    let eval_tol = tol / 100.0;
    let points = sample_points(sample_count, window, seed);
    Ok(compare(
        &points,
        tol,
        |t| {
            let lhs = ft_alternating_symmetric(&alt, t, eval_tol);
            let mu = ft_self_similar(&ss, t, eval_tol);
            let turns = (-shift * t).rem_euclid(1.0);
            let phase: Complex64 = unit_phasor(turns);
            let rhs = CertifiedComplex {
                value: phase * mu.value,
                error_bound: mu.error_bound + std::f64::consts::TAU * (shift * t).abs() * 2.0 * EPS + 8.0 * EPS,
            };
            (lhs, rhs)
        },
        |_| tol,
    ))
}

#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub xi: f64,
    pub value: CertifiedComplex,
}

/// `points` equally spaced evaluations on `[from, to]`, computed in parallel.
pub fn sweep(spec: &MeasureSpec, from: f64, to: f64, points: usize, tol: f64) -> Result<Vec<SweepRow>> {
    if tol.is_nan() || tol <= 0.0 {
        return domain("tolerance must be positive");
    }
    if !from.is_finite() || !to.is_finite() {
        return domain("sweep bounds must be finite");
    }
    let step = if points > 1 {
        (to - from) / (points - 1) as f64
    } else {
        0.0
    };
    Ok((0..points)
        .into_par_iter()
        .map(|i| {
            let xi = if i + 1 == points && points > 1 {
                to
            } else {
                from + step * i as f64
            };
            SweepRow {
                xi,
                value: evaluate(spec, xi, tol),
            }
        })
        .collect())
}
