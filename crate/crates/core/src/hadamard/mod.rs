//! Hadamard triples `(p, D, L)` and product-form certificates.

mod product_form;
mod triple;

use serde::{Deserialize, Serialize};

use crate::digits::DigitSet;
use crate::error::Result;

pub use product_form::{
    build_product_form, checked_summary, verify_product_form, Branch, ProductFormCertificate, ProductFormFailure,
    ProductFormVerdict, ProductStage, StageMap, SubTriple,
};
pub use triple::{
    check_hadamard, search_companion, unitarity_deviation, HadamardCertificate, HadamardFailure, HadamardOutcome,
    Witness,
};

/// Certificate file contents: a plain triple (optionally with witnesses) or
/// a product form when `stages` is present.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CertificateFile {
    pub p: u64,
    pub digits: DigitSet,
    pub labels: DigitSet,
    #[serde(default)]
    pub stages: Vec<ProductStage>,
    #[serde(default)]
    pub witnesses: Option<Vec<Witness>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateVerdict {
    Triple {
        verified: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        failure: Option<HadamardFailure>,
        /// Whether supplied witnesses (if any) all re-derive and vanish.
        #[serde(skip_serializing_if = "Option::is_none")]
        witnesses_valid: Option<bool>,
    },
    ProductForm(ProductFormVerdict),
}

impl CertificateVerdict {
    pub fn verified(&self) -> bool {
        match self {
            CertificateVerdict::Triple {
                verified,
                witnesses_valid,
                ..
            } => *verified && witnesses_valid.unwrap_or(true),
            CertificateVerdict::ProductForm(v) => v.verified,
        }
    }
}

/// Re-verifies a certificate from its own contents.
pub fn verify_certificate(file: &CertificateFile) -> Result<CertificateVerdict> {
    if !file.stages.is_empty() {
        let cert = ProductFormCertificate {
            p: file.p,
            digits: file.digits.clone(),
            labels: file.labels.clone(),
            stages: file.stages.clone(),
            checked: Vec::new(),
        };
        return Ok(CertificateVerdict::ProductForm(verify_product_form(&cert)));
    }
    let outcome = check_hadamard(file.p, &file.digits, &file.labels)?;
    let witnesses_valid = match &file.witnesses {
        None => None,
        Some(w) => Some(
            HadamardCertificate {
                p: file.p,
                digits: file.digits.clone(),
                labels: file.labels.clone(),
                witnesses: w.clone(),
            }
            .verify()?,
        ),
    };
    Ok(match outcome {
        HadamardOutcome::Verified(_) => CertificateVerdict::Triple {
            verified: true,
            failure: None,
            witnesses_valid,
        },
        HadamardOutcome::Failed(f) => CertificateVerdict::Triple {
            verified: false,
            failure: Some(f),
            witnesses_valid,
        },
    })
}
