//! Orthogonal exponentials, spectra and spectrality decisions.
//!
//! `{e(lambda x)}` over a finite `Lambda` is orthogonal in `L^2(mu)` iff every
//! nonzero difference of `Lambda` is a zero of the Fourier transform of `mu`.

mod clique;
mod decisions;
mod oracle;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::digits::DigitSet;
use crate::error::{domain, Error, Result, UndecidedPair};
use crate::exact::Rational;
use crate::fourier::evaluate_at;
use crate::measure::MeasureSpec;

pub use clique::max_clique;
pub use decisions::{
    even_superset_candidates, nu_zero_superset_member, odd_superset_candidates, orthogonality_bound,
    spectrality_decision, SpectralityDecision,
};
pub use oracle::{Evidence, Membership, ZeroOracle};

/// Finite sorted set of frequencies.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FrequencySet {
    elements: Vec<Rational>,
}

impl FrequencySet {
    /// Fails on repeated elements.
    pub fn new(elements: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut elements: Vec<Rational> = elements.into_iter().collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return domain(format!("frequency {} appears twice", w[0]));
        }
        Ok(FrequencySet { elements })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        FrequencySet::new(values.iter().map(|&v| Rational::from_integer(v)))
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elements.iter()
    }
}

impl<'de> Deserialize<'de> for FrequencySet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Rational>::deserialize(deserializer)?;
        FrequencySet::new(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrthogonalityVerdict {
    Orthogonal,
    /// `right - left` is not a zero of the transform.
    NotOrthogonal {
        left: Rational,
        right: Rational,
        difference: Rational,
    },
    /// Some difference could be neither confirmed nor excluded.
    Indeterminate {
        left: Rational,
        right: Rational,
        difference: Rational,
    },
}

impl OrthogonalityVerdict {
    pub fn is_orthogonal(&self) -> bool {
        matches!(self, OrthogonalityVerdict::Orthogonal)
    }
}

/// Distinct positive differences of `lam`, with one representative pair each.
fn differences(lam: &FrequencySet) -> BTreeMap<Rational, (Rational, Rational)> {
    let mut out = BTreeMap::new();
    for (i, a) in lam.iter().enumerate() {
        for b in &lam.elements[i + 1..] {
            out.entry(b - a).or_insert_with(|| (a.clone(), b.clone()));
        }
    }
    out
}

/// Decides every distinct difference in parallel. The transforms handled
/// here are of real measures, so membership is symmetric under `x -> -x`.
fn decide_all<'a>(
    oracle: &ZeroOracle<'_>,
    diffs: impl IntoIterator<Item = &'a Rational>,
) -> HashMap<Rational, Membership> {
    let diffs: Vec<&Rational> = diffs.into_iter().collect();
    diffs
        .into_par_iter()
        .map(|d| (d.clone(), oracle.membership(d)))
        .collect()
}

/// Orthogonality of `{e(lambda x) : lambda in lam}` in `L^2(mu)`.
///
/// A definite failure takes precedence over an undecided pair.
pub fn is_orthogonal(spec: &MeasureSpec, lam: &FrequencySet) -> OrthogonalityVerdict {
    let oracle = ZeroOracle::new(spec);
    let diffs = differences(lam);
    let decided = decide_all(&oracle, diffs.keys());
    let mut undecided = None;
    for (d, (left, right)) in diffs {
        match decided[&d] {
            Membership::Zero => {}
            Membership::NonZero => {
                return OrthogonalityVerdict::NotOrthogonal {
                    left,
                    right,
                    difference: d,
                }
            }
            Membership::Indeterminate => {
                undecided.get_or_insert(OrthogonalityVerdict::Indeterminate {
                    left,
                    right,
                    difference: d,
                });
            }
        }
    }
    undecided.unwrap_or(OrthogonalityVerdict::Orthogonal)
}

/// `Q(xi) = sum_lambda |mu(xi + lambda)|^2` with a certified bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QValue {
    pub value: f64,
    pub error_bound: f64,
}

/// Each term is evaluated exactly at the rational point `xi + lambda` (the
/// double `xi` is converted exactly) to within `tol / #lam`.
pub fn q_function(spec: &MeasureSpec, lam: &FrequencySet, xi: f64, tol: f64) -> Result<QValue> {
    if tol.is_nan() || tol <= 0.0 {
        return domain("tolerance must be positive");
    }
    let Some(base) = Rational::from_f64(xi) else {
        return domain(format!("xi = {xi} is not finite"));
    };
    if lam.is_empty() {
        return Ok(QValue {
            value: 0.0,
            error_bound: 0.0,
        });
    }
    let term_tol = tol / lam.len() as f64;
    let terms: Vec<(f64, f64)> = lam
        .elements
        .par_iter()
        .map(|l| {
            let v = evaluate_at(spec, &(&base + l), term_tol);
            let a = v.abs();
            // ||true|^2 - |v|^2| <= (2|v| + e) e
            (a * a, (2.0 * a + v.error_bound) * v.error_bound)
        })
        .collect();
    let value: f64 = terms.iter().map(|t| t.0).sum();
    let error: f64 = terms.iter().map(|t| t.1).sum();
    let rounding = lam.len() as f64 * f64::EPSILON * (value + 1.0);
    Ok(QValue {
        value,
        error_bound: error + rounding,
    })
}

/// `{sum_{j<k} p^j l_j : l_j in labels}`; every expansion must be distinct.
pub fn canonical_spectrum(p: u64, labels: &DigitSet, depth: u32) -> Result<FrequencySet> {
    if p == 0 || depth == 0 {
        return domain("modulus and depth must be positive");
    }
    if !labels.contains(&Rational::zero()) {
        return domain("label set must contain 0");
    }
    let pq = Rational::from_integer(p);
    let mut acc: Vec<Rational> = vec![Rational::zero()];
    let mut scale = Rational::one();
    for _ in 0..depth {
        let mut seen = BTreeSet::new();
        for a in &acc {
            for l in labels.iter() {
                let v = a + &scale * l;
                if !seen.insert(v.clone()) {
                    return Err(Error::DegenerateLabels(v));
                }
            }
        }
        acc = seen.into_iter().collect();
        scale = scale * &pq;
    }
    FrequencySet::new(acc)
}

/// Largest orthogonal subfamily of `candidates` and the search effort.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalFamily {
    pub size: usize,
    pub family: FrequencySet,
    pub explored_nodes: u64,
}

/// Exact maximum clique in the graph on `candidates` whose edges are the
/// pairs with difference in the zero set. Refuses if any edge is undecided.
pub fn max_orthogonal_family(spec: &MeasureSpec, candidates: &FrequencySet) -> Result<OrthogonalFamily> {
    let oracle = ZeroOracle::new(spec);
    let diffs = differences(candidates);
    let decided = decide_all(&oracle, diffs.keys());
    if let Some((d, (left, right))) = diffs.iter().find(|(d, _)| decided[*d] == Membership::Indeterminate) {
        return Err(Error::Indeterminate(Box::new(UndecidedPair {
            left: left.clone(),
            right: right.clone(),
            difference: d.clone(),
        })));
    }
    let els = candidates.elements();
    let n = els.len();
    let mut adjacent = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let edge = decided[&(&els[j] - &els[i])] == Membership::Zero;
            adjacent[i][j] = edge;
            adjacent[j][i] = edge;
        }
    }
    let (clique, explored_nodes) = max_clique(&adjacent);
    Ok(OrthogonalFamily {
        size: clique.len(),
        family: FrequencySet::new(clique.into_iter().map(|i| els[i].clone()))?,
        explored_nodes,
    })
}

/// Frequencies filed by residue: `lambda / b1 = (i + q1 j) / c + z` with
/// `z` an integer puts `z` into cell `i + q1 j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionResult {
    pub b1: Rational,
    pub c: u64,
    pub q1: u64,
    pub gamma1: u64,
    pub cells: BTreeMap<u64, FrequencySet>,
    /// Values `lambda / b1` that match no cell.
    pub leftovers: FrequencySet,
}

impl DecompositionResult {
    /// The input frequencies recovered from cells and leftovers.
    pub fn reassemble(&self) -> Result<FrequencySet> {
        let c = Rational::from_integer(self.c);
        let mut out = Vec::new();
        for (index, cell) in &self.cells {
            let offset = Rational::from_integer(*index) / &c;
            out.extend(cell.iter().map(|z| &self.b1 * (&offset + z)));
        }
        out.extend(self.leftovers.iter().map(|t| &self.b1 * t));
        FrequencySet::new(out)
    }
}

pub fn decompose_spectrum(
    lam: &FrequencySet,
    b1: &Rational,
    c: u64,
    q1: u64,
    gamma1: u64,
) -> Result<DecompositionResult> {
    if b1.is_zero() {
        return domain("b1 must be nonzero");
    }
    if c == 0 || q1 == 0 || gamma1 == 0 {
        return domain("c, q1 and gamma1 must be positive");
    }
    let cells_count = q1.checked_mul(gamma1).filter(|&k| k <= c);
    let Some(cells_count) = cells_count else {
        return domain(format!("q1 * gamma1 = {q1} * {gamma1} exceeds c = {c}"));
    };
    let cq = Rational::from_integer(c);
    let mut cells: BTreeMap<u64, Vec<Rational>> = (0..cells_count).map(|k| (k, Vec::new())).collect();
    let mut leftovers = Vec::new();
    for l in lam.iter() {
        let t = l / b1;
        let scaled = &t * &cq;
        let filed = scaled.to_integer().and_then(|u| {
            let r = u.mod_floor_u64(c);
            (r < cells_count).then_some(r)
        });
        match filed {
            Some(r) => {
                let z = &t - Rational::from_integer(r) / &cq;
                cells.get_mut(&r).expect("index below cell count").push(z);
            }
            None => leftovers.push(t),
        }
    }
    Ok(DecompositionResult {
        b1: b1.clone(),
        c,
        q1,
        gamma1,
        cells: cells
            .into_iter()
            .map(|(k, v)| FrequencySet::new(v).map(|s| (k, s)))
            .collect::<Result<_>>()?,
        leftovers: FrequencySet::new(leftovers)?,
    })
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for num_bigint::BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        self.mod_floor(&num_bigint::BigInt::from(m))
            .to_u64()
            .expect("residue below modulus")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::Block;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn middle_fourth() -> MeasureSpec {
        let d = DigitSet::from_blocks(&[Block::new(q("2"), 2)]).unwrap();
        MeasureSpec::self_similar(q("1/4"), d).unwrap()
    }

    #[test]
    fn orthogonality_examples() {
        let spec = middle_fourth();
        assert!(is_orthogonal(&spec, &FrequencySet::from_integers(&[0, 1, 4, 5]).unwrap()).is_orthogonal());
        assert!(is_orthogonal(&spec, &FrequencySet::from_integers(&[0]).unwrap()).is_orthogonal());
        let v = is_orthogonal(&spec, &FrequencySet::from_integers(&[0, 2]).unwrap());
        assert_eq!(
            v,
            OrthogonalityVerdict::NotOrthogonal {
                left: q("0"),
                right: q("2"),
                difference: q("2")
            }
        );
        // same answers without recorded structure, through the factor test
        let plain = MeasureSpec::self_similar(q("1/4"), DigitSet::from_integers(&[0, 2]).unwrap()).unwrap();
        assert!(is_orthogonal(&plain, &FrequencySet::from_integers(&[0, 1, 4, 5]).unwrap()).is_orthogonal());
    }

    #[test]
    fn q_function_basics() {
        let spec = middle_fourth();
        let zero = FrequencySet::from_integers(&[0]).unwrap();
        let v = q_function(&spec, &zero, 0.0, 1e-9).unwrap();
        assert_eq!(v.value, 1.0);
        let lam = canonical_spectrum(4, &DigitSet::from_integers(&[0, 1]).unwrap(), 3).unwrap();
        let v = q_function(&spec, &lam, 0.0, 1e-9).unwrap();
        assert!((v.value - 1.0).abs() <= v.error_bound + 1e-15);
        let bigger = canonical_spectrum(4, &DigitSet::from_integers(&[0, 1]).unwrap(), 4).unwrap();
        for xi in [0.1, 0.37, 0.8] {
            let a = q_function(&spec, &lam, xi, 1e-9).unwrap();
            let b = q_function(&spec, &bigger, xi, 1e-9).unwrap();
            assert!(b.value + b.error_bound >= a.value - a.error_bound);
        }
    }

    #[test]
    fn canonical_spectra() {
        let l = DigitSet::from_integers(&[0, 1]).unwrap();
        assert_eq!(
            canonical_spectrum(4, &l, 2).unwrap(),
            FrequencySet::from_integers(&[0, 1, 4, 5]).unwrap()
        );
        assert_eq!(
            canonical_spectrum(2, &l, 3).unwrap(),
            FrequencySet::from_integers(&[0, 1, 2, 3, 4, 5, 6, 7]).unwrap()
        );
        let clash = DigitSet::from_integers(&[0, 1, 2]).unwrap();
        assert_eq!(canonical_spectrum(2, &clash, 2), Err(Error::DegenerateLabels(q("2"))));
        assert!(canonical_spectrum(4, &DigitSet::from_integers(&[1, 2]).unwrap(), 2).is_err());
    }

    #[test]
    fn decomposition() {
        let lam = FrequencySet::from_integers(&[0, 1, 4, 5]).unwrap();
        let r = decompose_spectrum(&lam, &q("4"), 2, 1, 2).unwrap();
        assert_eq!(r.cells[&0], FrequencySet::from_integers(&[0, 1]).unwrap());
        assert!(r.cells[&1].is_empty());
        assert_eq!(r.leftovers, FrequencySet::new([q("1/4"), q("5/4")]).unwrap());
        assert_eq!(r.reassemble().unwrap(), lam);
        let single = decompose_spectrum(&FrequencySet::from_integers(&[0]).unwrap(), &q("3"), 5, 2, 2).unwrap();
        assert_eq!(single.cells[&0], FrequencySet::from_integers(&[0]).unwrap());
        assert!(single.leftovers.is_empty());
        assert!(decompose_spectrum(&lam, &q("4"), 2, 2, 2).is_err());
    }

    #[test]
    fn small_family_search() {
        let spec = middle_fourth();
        let cands = FrequencySet::from_integers(&[0, 1, 2, 3, 4, 5]).unwrap();
        let fam = max_orthogonal_family(&spec, &cands).unwrap();
        assert!(is_orthogonal(&spec, &fam.family).is_orthogonal());
        assert_eq!(fam.size, 4);
        let single = max_orthogonal_family(&spec, &FrequencySet::from_integers(&[0]).unwrap()).unwrap();
        assert_eq!(single.size, 1);
    }
}
