//! Measure specifications: self-similar, alternating-sign and Moran.

use serde::{Deserialize, Serialize};

use crate::digits::{Block, DigitSet};
use crate::error::{domain, Result};
use crate::exact::Rational;

fn check_ratio(rho: &Rational) -> Result<()> {
    if !rho.is_positive() || rho >= &Rational::one() {
        return domain(format!("contraction ratio {rho} is not in (0, 1)"));
    }
    Ok(())
}

/// `mu_{rho, D}`: invariant measure of `x -> rho (x + d)`, `d` in `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfSimilarSpec {
    pub rho: Rational,
    pub digits: DigitSet,
}

/// Invariant measure of `x -> (-1)^floor(d / period) rho (x + d)` for
/// `d` in `{0, ..., digit_count - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingSpec {
    pub rho: Rational,
    pub period: u32,
    pub digit_count: u32,
}

/// Invariant measure of `x -> (-1)^d rho (x + d)` for `d` in `{-n, ..., n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricAlternatingSpec {
    pub rho: Rational,
    pub half_width: u32,
}

/// One factor `delta_{(b_1 ... b_k)^{-1} R_k}` of a Moran convolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoranStage {
    pub b: Rational,
    #[serde(rename = "R")]
    pub digits: DigitSet,
}

impl MoranStage {
    pub fn new(b: Rational, digits: DigitSet) -> Self {
        MoranStage { b, digits }
    }
}

/// Finite prefix of stages followed by a tail repeated forever. An empty
/// tail makes the measure a finite convolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoranSpec {
    pub prefix: Vec<MoranStage>,
    pub tail: Vec<MoranStage>,
}

impl MoranSpec {
    pub fn new(prefix: Vec<MoranStage>, tail: Vec<MoranStage>) -> Result<Self> {
        for stage in prefix.iter().chain(&tail) {
            if stage.b.abs() <= Rational::one() {
                return domain(format!("stage expansion {} must exceed 1 in absolute value", stage.b));
            }
            if stage.digits.is_empty() {
                return domain("stage digit set is empty");
            }
        }
        Ok(MoranSpec { prefix, tail })
    }

    /// The self-similar measure `mu_{rho, D}` as a Moran convolution.
    pub fn from_self_similar(spec: &SelfSimilarSpec) -> Self {
        let b = spec.rho.recip().expect("validated ratio");
        MoranSpec {
            prefix: Vec::new(),
            tail: vec![MoranStage::new(b, spec.digits.clone())],
        }
    }

    /// Stage `k` (0-based) of the infinite sequence, or `None` past the end of
    /// a finite convolution.
    pub fn stage(&self, k: usize) -> Option<&MoranStage> {
        if k < self.prefix.len() {
            return Some(&self.prefix[k]);
        }
        if self.tail.is_empty() {
            return None;
        }
        Some(&self.tail[(k - self.prefix.len()) % self.tail.len()])
    }
}

/// Digit with the sign of its contraction, `true` for orientation preserving.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedDigit {
    pub digit: i64,
    pub preserving: bool,
}

impl AlternatingSpec {
    pub fn new(rho: Rational, period: u32, digit_count: u32) -> Result<Self> {
        check_ratio(&rho)?;
        if period == 0 || digit_count == 0 || !digit_count.is_multiple_of(period) {
            return domain(format!("period {period} must divide digit count {digit_count}"));
        }
        Ok(AlternatingSpec {
            rho,
            period,
            digit_count,
        })
    }

    pub fn signed_digits(&self) -> Vec<SignedDigit> {
        (0..self.digit_count as i64)
            .map(|d| SignedDigit {
                digit: d,
                preserving: (d / self.period as i64) % 2 == 0,
            })
            .collect()
    }

    /// Number of sign blocks `n / m`.
    pub fn block_count(&self) -> u32 {
        self.digit_count / self.period
    }
}

impl SymmetricAlternatingSpec {
    pub fn new(rho: Rational, half_width: u32) -> Result<Self> {
        check_ratio(&rho)?;
        if half_width == 0 {
            return domain("symmetric digit set needs n >= 1");
        }
        Ok(SymmetricAlternatingSpec { rho, half_width })
    }

    pub fn signed_digits(&self) -> Vec<SignedDigit> {
        let n = self.half_width as i64;
        (-n..=n)
            .map(|d| SignedDigit {
                digit: d,
                preserving: d.rem_euclid(2) == 0,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecRepr", into = "SpecRepr")]
pub enum MeasureSpec {
    SelfSimilar(SelfSimilarSpec),
    Alternating(AlternatingSpec),
    AlternatingSymmetric(SymmetricAlternatingSpec),
    Moran(MoranSpec),
}

impl MeasureSpec {
    pub fn self_similar(rho: Rational, digits: DigitSet) -> Result<Self> {
        check_ratio(&rho)?;
        if digits.is_empty() {
            return domain("digit set is empty");
        }
        Ok(MeasureSpec::SelfSimilar(SelfSimilarSpec { rho, digits }))
    }

    pub fn alternating(rho: Rational, period: u32, digit_count: u32) -> Result<Self> {
        AlternatingSpec::new(rho, period, digit_count).map(MeasureSpec::Alternating)
    }

    pub fn alternating_symmetric(rho: Rational, half_width: u32) -> Result<Self> {
        SymmetricAlternatingSpec::new(rho, half_width).map(MeasureSpec::AlternatingSymmetric)
    }

    pub fn moran(prefix: Vec<MoranStage>, tail: Vec<MoranStage>) -> Result<Self> {
        MoranSpec::new(prefix, tail).map(MeasureSpec::Moran)
    }

    /// The contraction ratio of the self-similar and alternating variants.
    pub fn rho(&self) -> Option<&Rational> {
        match self {
            MeasureSpec::SelfSimilar(s) => Some(&s.rho),
            MeasureSpec::Alternating(a) => Some(&a.rho),
            MeasureSpec::AlternatingSymmetric(a) => Some(&a.rho),
            MeasureSpec::Moran(_) => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum SpecRepr {
    SelfSimilar {
        rho: Rational,
        digits: DigitSet,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        blocks: Option<Vec<Block>>,
    },
    Alternating {
        rho: Rational,
        m: u32,
        n: u32,
    },
    AlternatingSymmetric {
        rho: Rational,
        n: u32,
    },
    Moran {
        #[serde(default)]
        prefix: Vec<MoranStage>,
        #[serde(default)]
        tail: Vec<MoranStage>,
    },
}

impl TryFrom<SpecRepr> for MeasureSpec {
    type Error = crate::error::Error;

    fn try_from(repr: SpecRepr) -> Result<Self> {
        match repr {
            SpecRepr::SelfSimilar { rho, digits, blocks } => {
                let digits = match blocks {
                    Some(b) => DigitSet::with_structure(digits.elements().iter().cloned(), b)?,
                    None => digits,
                };
                MeasureSpec::self_similar(rho, digits)
            }
            SpecRepr::Alternating { rho, m, n } => MeasureSpec::alternating(rho, m, n),
            SpecRepr::AlternatingSymmetric { rho, n } => MeasureSpec::alternating_symmetric(rho, n),
            SpecRepr::Moran { prefix, tail } => MeasureSpec::moran(prefix, tail),
        }
    }
}

impl From<MeasureSpec> for SpecRepr {
    fn from(spec: MeasureSpec) -> Self {
        match spec {
            MeasureSpec::SelfSimilar(s) => SpecRepr::SelfSimilar {
                rho: s.rho,
                digits: s.digits,
                blocks: None,
            },
            MeasureSpec::Alternating(a) => SpecRepr::Alternating {
                rho: a.rho,
                m: a.period,
                n: a.digit_count,
            },
            MeasureSpec::AlternatingSymmetric(a) => SpecRepr::AlternatingSymmetric {
                rho: a.rho,
                n: a.half_width,
            },
            MeasureSpec::Moran(m) => SpecRepr::Moran {
                prefix: m.prefix,
                tail: m.tail,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn validation() {
        assert!(MeasureSpec::self_similar(q("1"), DigitSet::consecutive(2).unwrap()).is_err());
        assert!(MeasureSpec::self_similar(q("-1/2"), DigitSet::consecutive(2).unwrap()).is_err());
        assert!(MeasureSpec::alternating(q("1/2"), 2, 3).is_err());
        assert!(MeasureSpec::alternating_symmetric(q("1/2"), 0).is_err());
        let d = DigitSet::consecutive(2).unwrap();
        assert!(MeasureSpec::moran(vec![MoranStage::new(q("1"), d.clone())], vec![]).is_err());
        assert!(MeasureSpec::moran(vec![], vec![MoranStage::new(q("-3"), d)]).is_ok());
    }

    #[test]
    fn signed_digits() {
        let a = AlternatingSpec::new(q("1/8"), 2, 8).unwrap();
        let signs: Vec<bool> = a.signed_digits().iter().map(|s| s.preserving).collect();
        assert_eq!(signs, [true, true, false, false, true, true, false, false]);
        let s = SymmetricAlternatingSpec::new(q("1/3"), 1).unwrap();
        let signs: Vec<(i64, bool)> = s.signed_digits().iter().map(|s| (s.digit, s.preserving)).collect();
        assert_eq!(signs, [(-1, false), (0, true), (1, false)]);
    }

    #[test]
    fn json_schema() {
        let cases = [
            r#"{"type":"self_similar","rho":"1/4","digits":["0","2"]}"#,
            r#"{"type":"alternating","rho":"1/8","m":2,"n":8}"#,
            r#"{"type":"alternating_symmetric","rho":"1/3","n":1}"#,
            r#"{"type":"moran","prefix":[{"b":"4","R":["0","2"]}],"tail":[{"b":"4","R":["0","2"]}]}"#,
        ];
        for text in cases {
            let spec: MeasureSpec = serde_json::from_str(text).unwrap();
            let back: MeasureSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
            assert_eq!(back, spec);
        }
        let structured: MeasureSpec = serde_json::from_str(
            r#"{"type":"self_similar","rho":"1/4","digits":["0","2"],"blocks":[{"scale":"2","len":2}]}"#,
        )
        .unwrap();
        let MeasureSpec::SelfSimilar(s) = structured else {
            panic!()
        };
        assert!(s.digits.structure().is_some());
        assert!(serde_json::from_str::<MeasureSpec>(r#"{"type":"alternating","rho":"1/8","m":3,"n":8}"#).is_err());
        assert!(serde_json::from_str::<MeasureSpec>(r#"{"type":"cantor"}"#).is_err());
    }
}
