use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::exact::Rational;

/// One summand `scale * {0, 1, ..., len - 1}` of a recorded direct-sum
/// decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub scale: Rational,
    pub len: u32,
}

impl Block {
    pub fn new(scale: Rational, len: u32) -> Self {
        Block { scale, len }
    }
}

/// Finite set of rational digits, optionally carrying the direct-sum
/// decomposition it was built from.
///
/// The decomposition is recorded at construction and never inferred; it is
/// what makes exact zero sets of the mask polynomial available.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitSet {
    elements: Vec<Rational>,
    structure: Option<Vec<Block>>,
}

impl DigitSet {
    pub fn new(elements: impl IntoIterator<Item = Rational>) -> Result<Self> {
        let mut elements: Vec<Rational> = elements.into_iter().collect();
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return domain(format!("digit {} appears twice", w[0]));
        }
        Ok(DigitSet {
            elements,
            structure: None,
        })
    }

    pub fn from_integers(digits: &[i64]) -> Result<Self> {
        DigitSet::new(digits.iter().map(|&d| Rational::from_integer(d)))
    }

    /// `{0, 1, ..., n - 1}` with structure `[(1, n)]`.
    pub fn consecutive(n: u32) -> Result<Self> {
        if n == 0 {
            return domain("consecutive digit set needs n >= 1");
        }
        Ok(DigitSet {
            elements: (0..n as i64).map(Rational::from_integer).collect(),
            structure: Some(vec![Block::new(Rational::one(), n)]),
        })
    }

    /// `(+)_i scale_i * {0, ..., len_i - 1}`.
    pub fn from_blocks(blocks: &[Block]) -> Result<Self> {
        let mut acc = DigitSet::consecutive(1)?;
        acc.structure = Some(Vec::new());
        for b in blocks {
            let part = DigitSet::consecutive(b.len)?.scaled(&b.scale)?;
            acc = acc.direct_sum(&part)?;
        }
        Ok(acc)
    }

    /// Attaches a decomposition, checking that it reproduces `elements`.
    pub fn with_structure(elements: impl IntoIterator<Item = Rational>, blocks: Vec<Block>) -> Result<Self> {
        let plain = DigitSet::new(elements)?;
        let built = DigitSet::from_blocks(&blocks)?;
        if built.elements != plain.elements {
            return domain("blocks do not reproduce the listed digits");
        }
        Ok(built)
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn structure(&self) -> Option<&[Block]> {
        self.structure.as_deref()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_integral(&self) -> bool {
        self.elements.iter().all(Rational::is_integer)
    }

    pub fn max_abs(&self) -> Rational {
        self.elements.iter().map(Rational::abs).max().unwrap_or_default()
    }

    /// Integer digits as `i64`, if they all are integers in range.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.elements.iter().map(Rational::to_i64).collect()
    }

    /// `{a + b}`; every sum must be reached by exactly one pair.
    pub fn direct_sum(&self, other: &DigitSet) -> Result<DigitSet> {
        let mut seen = BTreeSet::new();
        for a in &self.elements {
            for b in &other.elements {
                let s = a + b;
                if !seen.insert(s.clone()) {
                    return Err(Error::NotDirectSum(s));
                }
            }
        }
        let structure = match (&self.structure, &other.structure) {
            (Some(x), Some(y)) => Some(x.iter().chain(y).cloned().collect()),
            _ => None,
        };
        Ok(DigitSet {
            elements: seen.into_iter().collect(),
            structure,
        })
    }

    pub fn scaled(&self, factor: &Rational) -> Result<DigitSet> {
        if factor.is_zero() {
            return domain("scaling a digit set by zero");
        }
        let mut elements: Vec<Rational> = self.elements.iter().map(|d| d * factor).collect();
        elements.sort();
        let structure = self
            .structure
            .as_ref()
            .map(|blocks| blocks.iter().map(|b| Block::new(&b.scale * factor, b.len)).collect());
        Ok(DigitSet { elements, structure })
    }

    /// Shifts every digit; the decomposition is dropped unless `t = 0`.
    pub fn translated(&self, t: &Rational) -> DigitSet {
        if t.is_zero() {
            return self.clone();
        }
        DigitSet {
            elements: self.elements.iter().map(|d| d + t).collect(),
            structure: None,
        }
    }

    /// Same elements without the recorded decomposition.
    pub fn unstructured(&self) -> DigitSet {
        DigitSet {
            elements: self.elements.clone(),
            structure: None,
        }
    }
}

/// `D_m (+) 2m D_N (+) (1 + m rho - 2Nm) D_2`, with its structure recorded.
pub fn alternate_digit_set(m: u32, n: u32, rho: &Rational) -> Result<DigitSet> {
    if m == 0 || n == 0 {
        return domain("m and N must be positive");
    }
    if !rho.is_positive() || rho >= &Rational::one() {
        return domain(format!("rho = {rho} is not in (0, 1)"));
    }
    let m_q = Rational::from_integer(m);
    let two_nm = Rational::from_integer(2 * n as i64 * m as i64);
    let shift = Rational::one() + &m_q * rho - two_nm;
    DigitSet::from_blocks(&[
        Block::new(Rational::one(), m),
        Block::new(Rational::from_integer(2 * m as i64), n),
        Block::new(shift, 2),
    ])
}

#[derive(Serialize, Deserialize)]
struct StructuredRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<Block>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DigitSetRepr {
    Plain(Vec<Rational>),
    Structured(StructuredRepr),
}

impl Serialize for DigitSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.structure {
            None => self.elements.serialize(serializer),
            Some(blocks) => StructuredRepr {
                elements: Some(self.elements.clone()),
                blocks: Some(blocks.clone()),
            }
            .serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for DigitSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let set = match DigitSetRepr::deserialize(deserializer)? {
            DigitSetRepr::Plain(v) => DigitSet::new(v),
            DigitSetRepr::Structured(StructuredRepr { elements, blocks }) => match (elements, blocks) {
                (Some(e), Some(b)) => DigitSet::with_structure(e, b),
                (None, Some(b)) => DigitSet::from_blocks(&b),
                (Some(e), None) => DigitSet::new(e),
                (None, None) => Err(Error::Domain("digit set needs elements or blocks".into())),
            },
        };
        set.map_err(D::Error::custom)
    }
}
