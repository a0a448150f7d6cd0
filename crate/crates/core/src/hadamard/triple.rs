use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digits::{mask_eval_exact, mask_root_sum, mask_vanishes, DigitSet};
use crate::error::{domain, Error, Result};
use crate::exact::{Rational, RootOfUnitySum};

/// Exact record that `#D m_D((left - right) / p)` vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub left: Rational,
    pub right: Rational,
    pub sum: RootOfUnitySum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HadamardCertificate {
    pub p: u64,
    pub digits: DigitSet,
    pub labels: DigitSet,
    pub witnesses: Vec<Witness>,
}

/// First label pair whose mask value does not vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HadamardFailure {
    pub left: Rational,
    pub right: Rational,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum HadamardOutcome {
    Verified(HadamardCertificate),
    Failed(HadamardFailure),
}

impl HadamardOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, HadamardOutcome::Verified(_))
    }
}

fn point(p: u64, left: &Rational, right: &Rational) -> Rational {
    (left - right) / Rational::from_integer(p)
}

fn check_shape(p: u64, digits: &DigitSet, labels: &DigitSet) -> Result<()> {
    if p == 0 {
        return domain("modulus must be positive");
    }
    if digits.len() != labels.len() {
        return Err(Error::CardinalityMismatch {
            digits: digits.len(),
            labels: labels.len(),
        });
    }
    if digits.is_empty() {
        return domain("digit set is empty");
    }
    Ok(())
}

/// `(p, D, L)` is a Hadamard triple iff `m_D((l1 - l2) / p) = 0` for all
/// distinct labels; each pair is decided by an exact root-of-unity test.
pub fn check_hadamard(p: u64, digits: &DigitSet, labels: &DigitSet) -> Result<HadamardOutcome> {
    check_shape(p, digits, labels)?;
    let mut witnesses = Vec::new();
    let ls = labels.elements();
    for (i, left) in ls.iter().enumerate() {
        for right in &ls[i + 1..] {
            let x = point(p, right, left);
            let sum = mask_root_sum(digits, &x)?;
            if !sum.is_zero() {
                return Ok(HadamardOutcome::Failed(HadamardFailure {
                    left: left.clone(),
                    right: right.clone(),
                    value: mask_eval_exact(digits, &x),
                }));
            }
            witnesses.push(Witness {
                left: left.clone(),
                right: right.clone(),
                sum,
            });
        }
    }
    Ok(HadamardOutcome::Verified(HadamardCertificate {
        p,
        digits: digits.clone(),
        labels: labels.clone(),
        witnesses,
    }))
}

impl HadamardCertificate {
    /// Re-derives every witness and checks it vanishes and covers all pairs.
    pub fn verify(&self) -> Result<bool> {
        check_shape(self.p, &self.digits, &self.labels)?;
        let pairs = self.labels.len() * (self.labels.len() - 1) / 2;
        if self.witnesses.len() != pairs {
            return Ok(false);
        }
        for w in &self.witnesses {
            if !self.labels.contains(&w.left) || !self.labels.contains(&w.right) || w.left == w.right {
                return Ok(false);
            }
            let expected = mask_root_sum(&self.digits, &point(self.p, &w.right, &w.left))?;
            let mirrored = mask_root_sum(&self.digits, &point(self.p, &w.left, &w.right))?;
            if (w.sum != expected && w.sum != mirrored) || !w.sum.is_zero() {
                return Ok(false);
            }
        }
        let mut seen: Vec<(&Rational, &Rational)> = self
            .witnesses
            .iter()
            .map(|w| {
                if w.left < w.right {
                    (&w.left, &w.right)
                } else {
                    (&w.right, &w.left)
                }
            })
            .collect();
        seen.sort();
        seen.dedup();
        Ok(seen.len() == pairs)
    }
}

/// Largest entry of `|H* H - I|` for `H = (e(d l / p)) / sqrt(#D)`, with rows
/// indexed by digits and columns by labels.
pub fn unitarity_deviation(p: u64, digits: &DigitSet, labels: &DigitSet) -> Result<f64> {
    check_shape(p, digits, labels)?;
    let ls = labels.elements();
    let mut worst: f64 = 0.0;
    for (i, a) in ls.iter().enumerate() {
        for (j, b) in ls.iter().enumerate() {
            // (H* H)_{ab} = m_D((b - a) / p)
            let entry = mask_eval_exact(digits, &point(p, b, a));
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((entry - Complex64::new(target, 0.0)).norm());
        }
    }
    Ok(worst)
}

/// Smallest (lexicographically) label set `{0 = l_1 < ... < l_n} within
/// [0, label_bound]` forming a Hadamard triple with `(p, digits)`.
///
/// Label sets are normalized by translation to contain 0 as minimum, so the
/// search is complete up to translation within the bound.
pub fn search_companion(p: u64, digits: &DigitSet, label_bound: u64) -> Result<Option<HadamardCertificate>> {
    if p == 0 {
        return domain("modulus must be positive");
    }
    let n = digits.len();
    if n == 0 {
        return domain("digit set is empty");
    }
    let pf = Rational::from_integer(p);
    // good[delta] <=> m_D(delta / p) = 0
    let good: Vec<bool> = (0..=label_bound)
        .into_par_iter()
        .map(|delta| delta > 0 && mask_vanishes(digits, &(Rational::from_integer(delta) / &pf)) == Some(true))
        .collect();
    let found = if n == 1 {
        Some(vec![0])
    } else {
        (1..=label_bound).into_par_iter().find_map_first(|second| {
            if !good[second as usize] {
                return None;
            }
            let mut chosen = vec![0, second];
            extend(&good, label_bound, n, &mut chosen).then_some(chosen)
        })
    };
    let Some(labels) = found else {
        return Ok(None);
    };
    let labels = DigitSet::new(labels.into_iter().map(Rational::from_integer))?;
    match check_hadamard(p, digits, &labels)? {
        HadamardOutcome::Verified(cert) => Ok(Some(cert)),
        HadamardOutcome::Failed(f) => Err(Error::Consistency(format!(
            "search produced labels failing at pair ({}, {})",
            f.left, f.right
        ))),
    }
}

/// Depth-first completion in lexicographic order.
fn extend(good: &[bool], bound: u64, n: usize, chosen: &mut Vec<u64>) -> bool {
    if chosen.len() == n {
        return true;
    }
    let last = *chosen.last().expect("starts with 0");
    for next in last + 1..=bound {
        if chosen.iter().all(|&c| good[(next - c) as usize]) {
            chosen.push(next);
            if extend(good, bound, n, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> DigitSet {
        DigitSet::from_integers(v).unwrap()
    }

    #[test]
    fn middle_fourth_triple() {
        let out = check_hadamard(4, &ints(&[0, 2]), &ints(&[0, 1])).unwrap();
        let HadamardOutcome::Verified(cert) = out else { panic!() };
        assert_eq!(cert.witnesses.len(), 1);
        assert!(cert.verify().unwrap());
        assert!(unitarity_deviation(4, &ints(&[0, 2]), &ints(&[0, 1])).unwrap() < 1e-12);
    }

    #[test]
    fn failures_and_errors() {
        let out = check_hadamard(4, &ints(&[0, 1]), &ints(&[0, 1])).unwrap();
        let HadamardOutcome::Failed(f) = out else { panic!() };
        assert_eq!((f.left.to_i64(), f.right.to_i64()), (Some(0), Some(1)));
        assert!((f.value - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!(check_hadamard(2, &ints(&[0, 1]), &ints(&[0, 1])).unwrap().is_verified());
        assert!(matches!(
            check_hadamard(4, &ints(&[0, 1]), &ints(&[0])),
            Err(Error::CardinalityMismatch { .. })
        ));
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let HadamardOutcome::Verified(mut cert) = check_hadamard(4, &ints(&[0, 2]), &ints(&[0, 1])).unwrap() else {
            panic!()
        };
        cert.labels = ints(&[0, 3]);
        assert!(!cert.verify().unwrap());
    }

    #[test]
    fn companion_search() {
        let found = search_companion(4, &ints(&[0, 2]), 4).unwrap().unwrap();
        assert_eq!(found.labels, ints(&[0, 1]));
        let found = search_companion(2, &ints(&[0, 1]), 2).unwrap().unwrap();
        assert_eq!(found.labels, ints(&[0, 1]));
        assert!(search_companion(4, &ints(&[0, 1, 8, 9]), 64).unwrap().is_none());
        let found = search_companion(3, &ints(&[0, 1, 2]), 10).unwrap().unwrap();
        assert_eq!(found.labels, ints(&[0, 1, 2]));
    }
}
