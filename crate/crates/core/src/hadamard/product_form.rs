use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::triple::{check_hadamard, HadamardFailure, HadamardOutcome};
use crate::digits::DigitSet;
use crate::error::{domain, Error, Result};
use crate::exact::Rational;

/// Stage digit set `E_j(d)` as a function of the previous-stage digit `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StageMap {
    Constant(DigitSet),
    Branches(Vec<Branch>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub from: Rational,
    pub digits: DigitSet,
}

impl StageMap {
    fn at(&self, d: &Rational) -> Option<&DigitSet> {
        match self {
            StageMap::Constant(e) => Some(e),
            StageMap::Branches(bs) => bs.iter().find(|b| &b.from == d).map(|b| &b.digits),
        }
    }
}

/// Stage `j`: the digit map `E_j`, its labels `L_j`, and the exponent `l_j`
/// (unused for stage 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductStage {
    #[serde(default)]
    pub exponent: u32,
    pub digits: StageMap,
    pub labels: DigitSet,
}

/// One Hadamard sub-triple that was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubTriple {
    pub name: String,
    pub digits: DigitSet,
    pub labels: DigitSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFormCertificate {
    pub p: u64,
    /// The assembled digit set `D^(k)`.
    pub digits: DigitSet,
    /// `L_0 (+) ... (+) L_k`.
    pub labels: DigitSet,
    pub stages: Vec<ProductStage>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checked: Vec<SubTriple>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ProductFormFailure {
    Malformed {
        detail: String,
    },
    NotHadamard {
        triple: String,
        failure: Box<HadamardFailure>,
    },
    Collision {
        stage: usize,
        value: Rational,
    },
    AssemblyMismatch,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductFormVerdict {
    pub verified: bool,
    pub checked: Vec<SubTriple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ProductFormFailure>,
}

/// `D^(j) = union over d in D^(j-1) of d + p^{l_1 + ... + l_j} E_j(d)`, failing
/// on the first repeated element.
fn assemble(p: u64, stages: &[ProductStage]) -> std::result::Result<Vec<Vec<Rational>>, ProductFormFailure> {
    let StageMap::Constant(base) = &stages[0].digits else {
        return Err(ProductFormFailure::Malformed {
            detail: "stage 0 must have a constant digit set".into(),
        });
    };
    let mut levels = vec![base.elements().to_vec()];
    let mut exponent = 0i64;
    let pq = Rational::from_integer(p);
    for (j, stage) in stages.iter().enumerate().skip(1) {
        exponent += stage.exponent as i64;
        let scale = pq.pow(exponent).expect("nonzero modulus");
        let mut next = BTreeSet::new();
        for d in levels.last().expect("stage 0 present") {
            let Some(e) = stage.digits.at(d) else {
                return Err(ProductFormFailure::Malformed {
                    detail: format!("stage {j} has no digit set for {d}"),
                });
            };
            for x in e.iter() {
                let v = d + &scale * x;
                if !next.insert(v.clone()) {
                    return Err(ProductFormFailure::Collision { stage: j, value: v });
                }
            }
        }
        levels.push(next.into_iter().collect());
    }
    Ok(levels)
}

/// Distinct digit sets `E_j(d)` for `d` ranging over `D^(j-1)`.
fn stage_values<'a>(stage: &'a ProductStage, previous: &[Rational]) -> Vec<&'a DigitSet> {
    let mut out: Vec<&DigitSet> = Vec::new();
    for d in previous {
        if let Some(e) = stage.digits.at(d) {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

fn direct_sum_all(sets: &[&DigitSet]) -> Result<DigitSet> {
    let mut acc = DigitSet::consecutive(1)?;
    for s in sets {
        acc = acc.direct_sum(s)?;
    }
    Ok(acc)
}

/// Every combination of one entry from each list.
fn combinations<'a>(choices: &[Vec<&'a DigitSet>]) -> Vec<Vec<&'a DigitSet>> {
    let mut out = vec![Vec::new()];
    for options in choices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(*o);
                    v
                })
            })
            .collect();
    }
    out
}

/// Sub-triples required by the product-form conditions: each stage on its
/// own, and every head `E_0 (+) ... (+) E_m` and tail `E_m (+) ... (+) E_k`,
/// over all combinations of branch values (the strictest reading when stage
/// maps are not constant).
type Triple<'a> = (String, Vec<&'a DigitSet>, Vec<&'a DigitSet>);

fn required_triples<'a>(stages: &'a [ProductStage], levels: &[Vec<Rational>]) -> Vec<Triple<'a>> {
    let k = stages.len() - 1;
    let values: Vec<Vec<&DigitSet>> = stages
        .iter()
        .enumerate()
        .map(|(j, s)| match (&s.digits, j) {
            (StageMap::Constant(e), _) => vec![e],
            (_, j) => stage_values(s, &levels[j - 1]),
        })
        .collect();
    let labels: Vec<&DigitSet> = stages.iter().map(|s| &s.labels).collect();
    let mut out = Vec::new();
    let push_range = |lo: usize, hi: usize, out: &mut Vec<_>| {
        for combo in combinations(&values[lo..=hi]) {
            let name = if lo == hi {
                format!("E{lo}")
            } else {
                format!("E{lo}..E{hi}")
            };
            out.push((name, combo, labels[lo..=hi].to_vec()));
        }
    };
    for j in 0..=k {
        push_range(j, j, &mut out);
    }
    for m in 1..=k {
        push_range(0, m, &mut out);
        if m < k {
            push_range(m, k, &mut out);
        }
    }
    out
}

/// Re-derives `D^(k)` and re-runs every required Hadamard check exactly.
pub fn verify_product_form(cert: &ProductFormCertificate) -> ProductFormVerdict {
    let fail = |failure, checked| ProductFormVerdict {
        verified: false,
        checked,
        failure: Some(failure),
    };
    if cert.stages.is_empty() || cert.p == 0 {
        let detail = "a certificate needs a positive modulus and at least one stage".to_string();
        return fail(ProductFormFailure::Malformed { detail }, vec![]);
    }
    if cert.stages.len() > 1 && cert.stages[1].exponent == 0 {
        let detail = "the first stage exponent must be positive".to_string();
        return fail(ProductFormFailure::Malformed { detail }, vec![]);
    }
    let levels = match assemble(cert.p, &cert.stages) {
        Ok(l) => l,
        Err(f) => return fail(f, vec![]),
    };
    let mut checked = Vec::new();
    for (name, digit_parts, label_parts) in required_triples(&cert.stages, &levels) {
        let (digits, labels) = match (direct_sum_all(&digit_parts), direct_sum_all(&label_parts)) {
            (Ok(d), Ok(l)) => (d, l),
            (Err(Error::NotDirectSum(v)), _) | (_, Err(Error::NotDirectSum(v))) => {
                return fail(ProductFormFailure::Collision { stage: 0, value: v }, checked)
            }
            (Err(e), _) | (_, Err(e)) => return fail(ProductFormFailure::Malformed { detail: e.to_string() }, checked),
        };
        match check_hadamard(cert.p, &digits, &labels) {
            Ok(HadamardOutcome::Verified(_)) => checked.push(SubTriple { name, digits, labels }),
            Ok(HadamardOutcome::Failed(failure)) => {
                return fail(
                    ProductFormFailure::NotHadamard {
                        triple: name,
                        failure: Box::new(failure),
                    },
                    checked,
                )
            }
            Err(e) => {
                return fail(
                    ProductFormFailure::Malformed {
                        detail: format!("{name}: {e}"),
                    },
                    checked,
                )
            }
        }
    }
    let full_labels = direct_sum_all(&cert.stages.iter().map(|s| &s.labels).collect::<Vec<_>>());
    let assembled = levels.last().expect("stage 0 present");
    if assembled.as_slice() != cert.digits.elements()
        || full_labels.as_ref().ok().map(|l| l.elements()) != Some(cert.labels.elements())
    {
        return fail(ProductFormFailure::AssemblyMismatch, checked);
    }
    ProductFormVerdict {
        verified: true,
        checked,
        failure: None,
    }
}

/// Two-stage certificate for `(p, pD, L)` with `p = 2 m N p'` and
/// `D = D_m (+) 2m D_N (+) (1 + m/p - 2Nm) D_2`:
/// `E_0 = {0, (1 - 2mN) p + m}`, `E_1 = D_m`, `E_2 = 2m D_N`,
/// `L_0 = {0, N p'}`, `L_1 = 2N p' D_m`, `L_2 = p' D_N`.
///
/// With the cumulative scaling `p^{l_1 + ... + l_j}`, the assembly
/// `pD = E_0 (+) p E_1 (+) p E_2` corresponds to exponents `(1, 0)`.
pub fn build_product_form(m: u32, n_blocks: u32, p_prime: u32) -> Result<ProductFormCertificate> {
    if m == 0 || n_blocks == 0 || p_prime == 0 {
        return domain("m, N and p' must be positive");
    }
    let (mi, ni, pi) = (m as i64, n_blocks as i64, p_prime as i64);
    let p = 2 * mi * ni * pi;
    let e0 = DigitSet::from_integers(&[0, (1 - 2 * mi * ni) * p + mi])?;
    let e1 = DigitSet::consecutive(m)?;
    let e2 = DigitSet::consecutive(n_blocks)?.scaled(&Rational::from_integer(2 * mi))?;
    let l0 = DigitSet::from_integers(&[0, ni * pi])?;
    let l1 = DigitSet::consecutive(m)?.scaled(&Rational::from_integer(2 * ni * pi))?;
    let l2 = DigitSet::consecutive(n_blocks)?.scaled(&Rational::from_integer(pi))?;
    let pq = Rational::from_integer(p);
    let digits = e0.direct_sum(&e1.scaled(&pq)?)?.direct_sum(&e2.scaled(&pq)?)?;
    let labels = l0.direct_sum(&l1)?.direct_sum(&l2)?;
    let mut cert = ProductFormCertificate {
        p: p as u64,
        digits,
        labels,
        stages: vec![
            ProductStage {
                exponent: 0,
                digits: StageMap::Constant(e0),
                labels: l0,
            },
            ProductStage {
                exponent: 1,
                digits: StageMap::Constant(e1),
                labels: l1,
            },
            ProductStage {
                exponent: 0,
                digits: StageMap::Constant(e2),
                labels: l2,
            },
        ],
        checked: Vec::new(),
    };
    let verdict = verify_product_form(&cert);
    if !verdict.verified {
        return Err(Error::Consistency(format!(
            "product form for m={m}, N={n_blocks}, p'={p_prime} failed: {:?}",
            verdict.failure
        )));
    }
    cert.checked = verdict.checked;
    Ok(cert)
}

/// Summary of distinct sub-triples by name, for reports.
pub fn checked_summary(checked: &[SubTriple]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for s in checked {
        *out.entry(s.name.clone()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::alternate_digit_set;

    fn ints(v: &[i64]) -> DigitSet {
        DigitSet::from_integers(v).unwrap()
    }

    #[test]
    fn smallest_construction() {
        let cert = build_product_form(1, 1, 1).unwrap();
        assert_eq!(cert.p, 2);
        assert_eq!(cert.stages[0].digits, StageMap::Constant(ints(&[-1, 0])));
        assert_eq!(cert.stages[0].labels, ints(&[0, 1]));
        assert!(verify_product_form(&cert).verified);
    }

    #[test]
    fn construction_m2_n3() {
        let cert = build_product_form(2, 3, 1).unwrap();
        assert_eq!(cert.p, 12);
        assert_eq!(cert.stages[0].digits, StageMap::Constant(ints(&[-130, 0])));
        assert_eq!(cert.stages[0].labels, ints(&[0, 3]));
        assert_eq!(cert.stages[1].labels.elements(), ints(&[0, 6]).elements());
        assert_eq!(cert.stages[2].labels.elements(), ints(&[0, 1, 2]).elements());
        assert_eq!(cert.labels.len(), 12);
        assert!(build_product_form(2, 2, 2).is_ok());
    }

    #[test]
    fn assembly_matches_alternate_digit_set() {
        for (m, n, pp) in [(1, 1, 1), (2, 3, 1), (2, 2, 2), (3, 1, 2)] {
            let cert = build_product_form(m, n, pp).unwrap();
            let p = Rational::from_integer(cert.p);
            let d = alternate_digit_set(m, n, &p.recip().unwrap())
                .unwrap()
                .scaled(&p)
                .unwrap();
            assert_eq!(cert.digits.elements(), d.elements());
        }
    }

    #[test]
    fn tampered_labels_fail() {
        let mut cert = build_product_form(1, 1, 1).unwrap();
        cert.stages[0].labels = ints(&[0, 2]);
        let v = verify_product_form(&cert);
        assert!(!v.verified);
        let Some(ProductFormFailure::NotHadamard { failure, .. }) = v.failure else {
            panic!("{v:?}")
        };
        assert_eq!(failure.right, Rational::from_integer(2));
    }

    #[test]
    fn zero_stage_certificate() {
        let cert = ProductFormCertificate {
            p: 4,
            digits: ints(&[0, 2]),
            labels: ints(&[0, 1]),
            stages: vec![ProductStage {
                exponent: 0,
                digits: StageMap::Constant(ints(&[0, 2])),
                labels: ints(&[0, 1]),
            }],
            checked: vec![],
        };
        assert!(verify_product_form(&cert).verified);
    }

    #[test]
    fn admissible_free_example() {
        // (4, {0, 1, 8, 9}) has no companion, but is a one-stage product form
        let stage0 = ProductStage {
            exponent: 0,
            digits: StageMap::Constant(ints(&[0, 1])),
            labels: ints(&[0, 2]),
        };
        let cert = ProductFormCertificate {
            p: 4,
            digits: ints(&[0, 1, 8, 9]),
            labels: ints(&[0, 1, 2, 3]),
            stages: vec![
                stage0,
                ProductStage {
                    exponent: 1,
                    digits: StageMap::Constant(ints(&[0, 2])),
                    labels: ints(&[0, 1]),
                },
            ],
            checked: vec![],
        };
        let v = verify_product_form(&cert);
        assert!(v.verified, "{v:?}");
        assert_eq!(checked_summary(&v.checked).len(), 3);
    }

    #[test]
    fn branch_maps_are_supported() {
        let mut cert = ProductFormCertificate {
            p: 4,
            digits: ints(&[-7, 0, 1, 8]),
            labels: ints(&[0, 1, 2, 3]),
            stages: vec![
                ProductStage {
                    exponent: 0,
                    digits: StageMap::Constant(ints(&[0, 1])),
                    labels: ints(&[0, 2]),
                },
                ProductStage {
                    exponent: 1,
                    digits: StageMap::Branches(vec![
                        Branch {
                            from: Rational::from_integer(0),
                            digits: ints(&[0, 2]),
                        },
                        Branch {
                            from: Rational::from_integer(1),
                            digits: ints(&[-2, 0]),
                        },
                    ]),
                    labels: ints(&[0, 1]),
                },
            ],
            checked: vec![],
        };
        let v = verify_product_form(&cert);
        assert!(v.verified, "{v:?}");
        // one head triple per branch value
        assert_eq!(checked_summary(&v.checked)["E0..E1"], 2);
        cert.digits = ints(&[0, 1, 8, 9]);
        assert_eq!(
            verify_product_form(&cert).failure,
            Some(ProductFormFailure::AssemblyMismatch)
        );
    }
}
