use num_bigint::BigInt;
use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{alternate_digit_set, DigitSet};
use crate::exact::Rational;
use crate::measure::MeasureSpec;

/// Building block of an exact zero set. Neither variant contains 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Atom {
    /// `scale * (Z \ nZ) / n`
    LatticeComplement { scale: Rational, modulus: u32 },
    /// `scale * (2Z + 1) / (2 beta)`
    OddLattice {
        scale: Rational,
        half_denominator: Rational,
    },
}

impl Atom {
    pub fn contains(&self, x: &Rational) -> bool {
        match self {
            Atom::LatticeComplement { scale, modulus } => {
                let y = x * Rational::from_integer(*modulus) / scale;
                match y.to_integer() {
                    Some(k) => !k.is_multiple_of(&BigInt::from(*modulus)),
                    None => false,
                }
            }
            Atom::OddLattice {
                scale,
                half_denominator,
            } => {
                let y = x * Rational::from_integer(2) * half_denominator / scale;
                y.to_integer().is_some_and(|k| k.is_odd())
            }
        }
    }

    /// Smallest absolute value of an element.
    pub fn min_abs(&self) -> Rational {
        match self {
            Atom::LatticeComplement { scale, modulus } => scale.abs() / Rational::from_integer(*modulus),
            Atom::OddLattice {
                scale,
                half_denominator,
            } => (scale / (half_denominator * Rational::from_integer(2))).abs(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Atom::LatticeComplement { modulus: 1, .. })
    }

    pub fn scaled(&self, factor: &Rational) -> Atom {
        match self {
            Atom::LatticeComplement { scale, modulus } => Atom::LatticeComplement {
                scale: scale * factor,
                modulus: *modulus,
            },
            Atom::OddLattice {
                scale,
                half_denominator,
            } => Atom::OddLattice {
                scale: scale * factor,
                half_denominator: half_denominator.clone(),
            },
        }
    }

    /// The element indexed by `k`, skipping indices that fall outside the atom.
    pub fn element(&self, k: i64) -> Option<Rational> {
        match self {
            Atom::LatticeComplement { scale, modulus } => {
                (k.rem_euclid(*modulus as i64) != 0).then(|| scale * Rational::new(k, *modulus).unwrap())
            }
            Atom::OddLattice {
                scale,
                half_denominator,
            } => Some(scale * Rational::from_integer(2 * k + 1) / (half_denominator * Rational::from_integer(2))),
        }
    }
}

/// `base^j * (union of atoms)` for all `j >= min_exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dilation {
    pub base: Rational,
    pub min_exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSetTerm {
    pub atoms: Vec<Atom>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilation: Option<Dilation>,
}

impl ZeroSetTerm {
    fn contains(&self, x: &Rational) -> bool {
        let atoms: Vec<&Atom> = self.atoms.iter().filter(|a| !a.is_empty()).collect();
        let Some(dilation) = &self.dilation else {
            return atoms.iter().any(|a| a.contains(x));
        };
        let Some(floor) = atoms.iter().map(|a| a.min_abs()).min() else {
            return false;
        };
        // |base| > 1, so only the finitely many j with |x / base^j| >= floor
        // can produce a match.
        let mut y = x
            .checked_div(&dilation.base.pow(dilation.min_exponent as i64).unwrap())
            .unwrap();
        while y.abs() >= floor {
            if atoms.iter().any(|a| a.contains(&y)) {
                return true;
            }
            y = &y / &dilation.base;
        }
        false
    }
}

/// Finite union of (possibly dilated) atom unions with exact membership.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSetExpr {
    pub terms: Vec<ZeroSetTerm>,
}

impl ZeroSetExpr {
    pub fn contains(&self, x: &Rational) -> bool {
        !x.is_zero() && self.terms.iter().any(|t| t.contains(x))
    }

    /// Wraps every term in `base^j`, `j >= min_exponent`. Terms that already
    /// carry a dilation are left alone.
    pub fn dilated(mut self, base: &Rational, min_exponent: u32) -> ZeroSetExpr {
        for t in &mut self.terms {
            if t.dilation.is_none() {
                t.dilation = Some(Dilation {
                    base: base.clone(),
                    min_exponent,
                });
            }
        }
        self
    }

    pub fn scaled(mut self, factor: &Rational) -> ZeroSetExpr {
        for t in &mut self.terms {
            t.atoms = t.atoms.iter().map(|a| a.scaled(factor)).collect();
        }
        self
    }

    /// Random element: picks a term, a dilation exponent below
    /// `min_exponent + max_extra_exponent`, an atom and an index in
    /// `[-max_index, max_index]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_extra_exponent: u32, max_index: i64) -> Option<Rational> {
        let candidates: Vec<&ZeroSetTerm> = self
            .terms
            .iter()
            .filter(|t| t.atoms.iter().any(|a| !a.is_empty()))
            .collect();
        if candidates.is_empty() {
            return None;
        }
        loop {
            let term = candidates[rng.gen_range(0..candidates.len())];
            let atom = &term.atoms[rng.gen_range(0..term.atoms.len())];
            if atom.is_empty() {
                continue;
            }
            let Some(x) = atom.element(rng.gen_range(-max_index..=max_index)) else {
                continue;
            };
            return Some(match &term.dilation {
                None => x,
                Some(d) => {
                    let j = d.min_exponent + rng.gen_range(0..=max_extra_exponent);
                    x * d.base.pow(j as i64).unwrap()
                }
            });
        }
    }
}

/// Exact zero set of `m_D` from its recorded decomposition; `None` when `D`
/// carries no structure.
pub fn mask_zero_set(d: &DigitSet) -> Option<ZeroSetExpr> {
    let blocks = d.structure()?;
    let atoms = blocks
        .iter()
        .filter(|b| b.len >= 2)
        .map(|b| {
            if b.len == 2 {
                Atom::OddLattice {
                    scale: Rational::one(),
                    half_denominator: b.scale.clone(),
                }
            } else {
                Atom::LatticeComplement {
                    scale: b.scale.recip().expect("block scales are nonzero"),
                    modulus: b.len,
                }
            }
        })
        .collect();
    Some(ZeroSetExpr {
        terms: vec![ZeroSetTerm { atoms, dilation: None }],
    })
}

/// Exact zero set of the Fourier transform of a measure, or `None` when some
/// digit set in play has no recorded structure (or, for alternating
/// measures with an odd number of sign blocks, no closed form is known).
pub fn measure_zero_set(spec: &MeasureSpec) -> Option<ZeroSetExpr> {
    match spec {
        MeasureSpec::SelfSimilar(s) => self_similar_zero_set(&s.rho, &s.digits),
        MeasureSpec::Alternating(a) => {
            let blocks = a.digit_count / a.period;
            if blocks % 2 != 0 {
                return None;
            }
            let d = alternate_digit_set(a.period, blocks / 2, &a.rho).ok()?;
            self_similar_zero_set(&a.rho, &d)
        }
        MeasureSpec::AlternatingSymmetric(a) => {
            // same zero set as mu_{rho, D_{2n+1}}: the transforms differ by a unimodular phase
            let d = DigitSet::consecutive(2 * a.half_width + 1).ok()?;
            self_similar_zero_set(&a.rho, &d)
        }
        MeasureSpec::Moran(m) => {
            let mut terms = Vec::new();
            let mut cumulative = Rational::one();
            for stage in &m.prefix {
                cumulative = cumulative * &stage.b;
                terms.extend(mask_zero_set(&stage.digits)?.scaled(&cumulative).terms);
            }
            if !m.tail.is_empty() {
                let period: Rational = m.tail.iter().fold(Rational::one(), |acc, s| acc * &s.b);
                for stage in &m.tail {
                    cumulative = cumulative * &stage.b;
                    let level = mask_zero_set(&stage.digits)?.scaled(&cumulative).dilated(&period, 0);
                    terms.extend(level.terms);
                }
            }
            Some(ZeroSetExpr { terms })
        }
    }
}

fn self_similar_zero_set(rho: &Rational, digits: &DigitSet) -> Option<ZeroSetExpr> {
    let base = rho.recip().ok()?;
    Some(mask_zero_set(digits)?.dilated(&base, 1))
}
