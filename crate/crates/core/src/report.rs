//! JSON documents emitted by the command-line tool, and re-ingestion of
//! their certificates.

use serde::{Deserialize, Serialize};

use crate::extnat::ExtNat;
use crate::invariants::{
    validate_optimal_ic_certificate, validate_report, Analyzed, CertificateEntry, InfinitenessReason, InvariantKind,
    InvariantReport,
};
use crate::iso::EmbeddingWitness;
use crate::lattice::Subgroup;
use crate::mask::Mask;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueDoc {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub finite: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub infinite: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gap_order: Option<usize>,
}

impl ValueDoc {
    pub fn new(value: ExtNat, reason: Option<InfinitenessReason>) -> ValueDoc {
        match value {
            ExtNat::Finite(k) => ValueDoc {
                finite: Some(k),
                infinite: None,
                reason: None,
                gap_order: None,
            },
            ExtNat::Infinite => {
                let (reason, gap_order) = match reason {
                    Some(InfinitenessReason::GroupCyclic) => ("g_cyclic", None),
                    Some(InfinitenessReason::SpectrumGap(d)) => ("spectrum_gap", Some(d)),
                    Some(InfinitenessReason::NoCover) | None => ("no_cover", None),
                };
                ValueDoc {
                    finite: None,
                    infinite: Some(true),
                    reason: Some(reason.into()),
                    gap_order,
                }
            }
        }
    }

    pub fn value(&self) -> ExtNat {
        match self.finite {
            Some(k) => ExtNat::Finite(k),
            None => ExtNat::Infinite,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDoc {
    pub order: usize,
    pub elements: Vec<usize>,
    /// Images of `elements` under the embedding into H (IC only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub image: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub kind: InvariantKind,
    pub operands: Vec<String>,
    pub value: ValueDoc,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Vec<SubgroupDoc>>,
    pub elapsed_ms: u64,
    pub engine_version: String,
    pub max_order: usize,
}

impl ResultDocument {
    pub fn new(report: &InvariantReport, with_certificate: bool, elapsed_ms: u64, max_order: usize) -> Self {
        let certificate = (with_certificate && report.value.is_finite()).then(|| {
            report
                .certificate
                .iter()
                .map(|e| SubgroupDoc {
                    order: e.subgroup.order(),
                    elements: e.subgroup.elements(),
                    image: e.witness.as_ref().map(|w| w.image.clone()),
                })
                .collect()
        });
        ResultDocument {
            kind: report.kind,
            operands: report.operands.clone(),
            value: ValueDoc::new(report.value, report.reason),
            certificate,
            elapsed_ms,
            engine_version: crate::ENGINE_VERSION.to_string(),
            max_order,
        }
    }

    /// Rebuilds the certificate against freshly constructed operands and runs
    /// the same validators as the library. The cover-solver record is not
    /// part of the document, so only the group-level checks apply.
    pub fn revalidate(&self, g: &Analyzed, h: Option<&Analyzed>) -> bool {
        let Some(docs) = &self.certificate else {
            return false;
        };
        let mut certificate = Vec::with_capacity(docs.len());
        for d in docs {
            let members = Mask::from_indices(d.elements.iter().copied());
            let Some(subgroup) = Subgroup::from_members(&g.group, members) else {
                return false;
            };
            if subgroup.order() != d.order || subgroup.elements() != d.elements {
                return false;
            }
            let witness = d.image.as_ref().map(|image| EmbeddingWitness {
                source: d.elements.clone(),
                image: image.clone(),
            });
            certificate.push(CertificateEntry { subgroup, witness });
        }
        let report = InvariantReport {
            kind: self.kind,
            operands: self.operands.clone(),
            value: self.value.value(),
            certificate,
            reason: None,
            cover: None,
        };
        let value_one_ic = self.kind == InvariantKind::Ic && self.value.finite == Some(1);
        if value_one_ic {
            return validate_report(&report, g, h);
        }
        let with_cover = crate::invariants::attach_cover(report, g);
        match self.kind {
            InvariantKind::Ic => h.is_some_and(|h| validate_optimal_ic_certificate(&with_cover, g, h)),
            _ => validate_report(&with_cover, g, h),
        }
    }
}
