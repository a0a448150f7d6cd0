//! Fixed workloads shared by the criterion benchmarks in `benches/`.

use fractspec_core::spectra::odd_superset_candidates;
use fractspec_core::{DigitSet, FrequencySet, MeasureSpec, Rational};

fn q(s: &str) -> Rational {
    s.parse().expect("fixture rational")
}

/// `mu_{1/4, {0, 2}}`.
pub fn middle_fourth() -> MeasureSpec {
    MeasureSpec::self_similar(q("1/4"), DigitSet::from_integers(&[0, 2]).expect("digits")).expect("spec")
}

/// Alternating measure with `m = 2`, `n = 8`, `rho = 1/8`.
pub fn alternating() -> MeasureSpec {
    MeasureSpec::alternating(q("1/8"), 2, 8).expect("spec")
}

/// Odd alternating measure `m = 1`, `s = 3`, `rho = 1/2`, whose zeros have
/// no exact description.
pub fn odd_alternating() -> MeasureSpec {
    MeasureSpec::alternating(q("1/2"), 1, 3).expect("spec")
}

/// `(Z \ 3Z) / 6` windowed to `[-window, window]`.
pub fn odd_window(window: i64) -> FrequencySet {
    odd_superset_candidates(3, &Rational::from_integer(window)).expect("window")
}

/// `D = {0, 1, 8, 9}`, which admits no Hadamard companion modulo 4.
pub fn inadmissible_digits() -> DigitSet {
    DigitSet::from_integers(&[0, 1, 8, 9]).expect("digits")
}

/// Evaluation points spread over `[-10, 10]`.
pub fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|i| -10.0 + 20.0 * i as f64 / points as f64).collect()
}
