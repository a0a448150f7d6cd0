use num_complex::Complex64;
use std::f64::consts::TAU;

use super::DigitSet;
use crate::error::Result;
use crate::exact::{Rational, RootOfUnitySum};

/// `m_D(x) = (1/#D) sum_{d in D} exp(2 pi i d x)` at a float point.
pub fn mask_eval(d: &DigitSet, x: f64) -> Complex64 {
    if d.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let sum: Complex64 = d
        .iter()
        .map(|digit| unit_phasor((digit.to_f64() * x).rem_euclid(1.0)))
        .sum();
    sum / d.len() as f64
}

/// `m_D(x)` at a rational point; phases are reduced mod 1 exactly before
/// rounding, so large arguments lose no accuracy.
pub fn mask_eval_exact(d: &DigitSet, x: &Rational) -> Complex64 {
    if d.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let sum: Complex64 = d.iter().map(|digit| unit_phasor((digit * x).fract().to_f64())).sum();
    sum / d.len() as f64
}

/// `#D * m_D(x)` as an exact root-of-unity sum.
pub fn mask_root_sum(d: &DigitSet, x: &Rational) -> Result<RootOfUnitySum> {
    let phases: Vec<Rational> = d.iter().map(|digit| digit * x).collect();
    RootOfUnitySum::from_phases(&phases)
}

/// Exact answer to `m_D(x) = 0`, or `None` when the root order overflows.
pub fn mask_vanishes(d: &DigitSet, x: &Rational) -> Option<bool> {
    mask_root_sum(d, x).ok().map(|s| s.is_zero())
}

pub(crate) fn unit_phasor(turns: f64) -> Complex64 {
    let (s, c) = (TAU * turns).sin_cos();
    Complex64::new(c, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::alternate_digit_set;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn known_values() {
        let d2 = DigitSet::consecutive(2).unwrap();
        let d3 = DigitSet::consecutive(3).unwrap();
        assert!(mask_eval(&d2, 0.5).norm() < 1e-15);
        assert!(mask_eval(&d3, 1.0 / 3.0).norm() < 1e-15);
        assert_eq!(mask_vanishes(&d2, &q("1/2")), Some(true));
        assert_eq!(mask_vanishes(&d3, &q("1/3")), Some(true));
        assert_eq!(mask_vanishes(&d3, &q("1/2")), Some(false));
        let odd = DigitSet::from_integers(&[0, 1, 3]).unwrap();
        for d in [&d2, &d3, &odd] {
            assert_eq!(mask_eval(d, 0.0), Complex64::new(1.0, 0.0));
            assert_eq!(mask_eval_exact(d, &Rational::zero()), Complex64::new(1.0, 0.0));
        }
    }

    fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
        Rational::new(rng.gen_range(-400..400), rng.gen_range(1..60)).unwrap()
    }

    #[test]
    fn factorization_over_direct_sums() {
        let a = DigitSet::from_integers(&[0, 1]).unwrap();
        let b = DigitSet::new([q("0"), q("4"), q("8")]).unwrap();
        let c = DigitSet::new([q("0"), q("-27/4")]).unwrap();
        let bc = b.direct_sum(&c).unwrap();
        let abc = a.direct_sum(&bc).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = random_rational(&mut rng);
            let lhs = mask_eval_exact(&abc, &x);
            let rhs = mask_eval_exact(&a, &x) * mask_eval_exact(&bc, &x);
            assert!((lhs - rhs).norm() < 1e-12);
            let exact = mask_root_sum(&abc, &x).unwrap();
            let prod = mask_root_sum(&a, &x)
                .unwrap()
                .mul(&mask_root_sum(&bc, &x).unwrap())
                .unwrap();
            assert_eq!(exact.is_zero(), prod.is_zero());
        }
    }

    #[test]
    fn modulus_and_periodicity() {
        let d = alternate_digit_set(2, 3, &q("1/5")).unwrap();
        let int = DigitSet::from_integers(&[0, 1, 5, 7]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let x: f64 = rng.gen_range(-30.0..30.0);
            assert!(mask_eval(&d, x).norm() <= 1.0 + 1e-12);
            let p = mask_eval(&int, x);
            let shifted = mask_eval(&int, x + 1.0);
            assert!((p - shifted).norm() < 1e-9);
        }
    }
}
