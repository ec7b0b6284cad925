//! σ(G), σ_c(G) and IC(G;H) by reduction to minimum set cover.
//!
//! All three use the same universe: one point per maximal cyclic subgroup of
//! G. A subgroup contains an element exactly when it contains the cyclic
//! subgroup it generates, so covering those points covers G.

mod checks;

pub use checks::*;

use serde::{Deserialize, Serialize};

use crate::cover::{self, min_cover, CoverInstance, CoverSolution};
use crate::error::Result;
use crate::extnat::ExtNat;
use crate::group::{build, FiniteGroup};
use crate::iso::{embeds, embeds_subgroup, order_spectrum, EmbeddingWitness, OrderSpectrum};
use crate::lattice::{all_subgroups, closure, Subgroup, SubgroupLattice};
use crate::limits::Limits;
use crate::mask::Mask;
use crate::spec::GroupSpec;

/// A group together with its subgroup lattice and order spectrum.
#[derive(Clone, Debug)]
pub struct Analyzed {
    pub group: FiniteGroup,
    pub lattice: SubgroupLattice,
    pub spectrum: OrderSpectrum,
}

impl Analyzed {
    pub fn new(group: FiniteGroup, limits: &Limits) -> Result<Analyzed> {
        let lattice = all_subgroups(&group, limits)?;
        let spectrum = order_spectrum(&group);
        Ok(Analyzed {
            group,
            lattice,
            spectrum,
        })
    }

    pub fn from_spec(spec: &GroupSpec, limits: &Limits) -> Result<Analyzed> {
        Analyzed::new(build(spec, limits)?, limits)
    }

    /// A subgroup re-indexed as a standalone group.
    pub fn subgroup(&self, sub: &Subgroup, limits: &Limits) -> Result<Analyzed> {
        let label = format!("{}[{}]", self.group.label(), sub.order());
        let (g, _) = self.group.induced(sub.members(), label);
        Analyzed::new(g, limits)
    }

    pub fn label(&self) -> &str {
        self.group.label()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    Sigma,
    SigmaC,
    Ic,
}

impl InvariantKind {
    pub fn name(&self) -> &'static str {
        match self {
            InvariantKind::Sigma => "sigma",
            InvariantKind::SigmaC => "sigma_c",
            InvariantKind::Ic => "ic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfinitenessReason {
    /// G is cyclic, so a generator lies in no proper subgroup.
    GroupCyclic,
    /// G has an element of this order and H has none.
    SpectrumGap(usize),
    NoCover,
}

impl std::fmt::Display for InfinitenessReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfinitenessReason::GroupCyclic => f.write_str("cyclic group"),
            InfinitenessReason::SpectrumGap(d) => write!(f, "spectrum gap: order {d}"),
            InfinitenessReason::NoCover => f.write_str("no cover"),
        }
    }
}

/// One member of a cover certificate.
#[derive(Clone, Debug)]
pub struct CertificateEntry {
    pub subgroup: Subgroup,
    /// For IC: an injective homomorphism from the subgroup into H.
    pub witness: Option<EmbeddingWitness>,
}

#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub kind: InvariantKind,
    pub operands: Vec<String>,
    pub value: ExtNat,
    pub certificate: Vec<CertificateEntry>,
    pub reason: Option<InfinitenessReason>,
    /// The cover instance and its solution, when the solver ran.
    pub cover: Option<(CoverInstance, CoverSolution)>,
}

impl InvariantReport {
    fn infinite(kind: InvariantKind, operands: Vec<String>, reason: InfinitenessReason) -> Self {
        InvariantReport {
            kind,
            operands,
            value: ExtNat::Infinite,
            certificate: Vec::new(),
            reason: Some(reason),
            cover: None,
        }
    }

    pub fn subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.certificate.iter().map(|e| &e.subgroup)
    }
}

/// Point `k` stands for the `k`-th maximal cyclic subgroup of `g`.
fn cover_points(g: &Analyzed, sets: &[&Subgroup]) -> Result<CoverInstance> {
    let points: Vec<&Subgroup> = g.lattice.maximal_cyclic_subgroups().collect();
    let masks = sets
        .iter()
        .map(|s| {
            points
                .iter()
                .enumerate()
                .filter(|(_, c)| c.is_subgroup_of(s))
                .map(|(k, _)| k)
                .collect::<Mask>()
        })
        .collect();
    CoverInstance::new(points.len(), masks)
}

fn solve(
    kind: InvariantKind,
    operands: Vec<String>,
    g: &Analyzed,
    candidates: Vec<CertificateEntry>,
    limits: &Limits,
) -> Result<InvariantReport> {
    let refs: Vec<&Subgroup> = candidates.iter().map(|c| &c.subgroup).collect();
    let inst = cover_points(g, &refs)?;
    let sol = min_cover(&inst, limits)?;
    if !sol.value.is_finite() {
        return Ok(InvariantReport::infinite(kind, operands, InfinitenessReason::NoCover));
    }
    let certificate = sol
        .certificate
        .iter()
        .map(|&c| candidates[inst.source()[c]].clone())
        .collect();
    Ok(InvariantReport {
        kind,
        operands,
        value: sol.value,
        certificate,
        reason: None,
        cover: Some((inst, sol)),
    })
}

/// Covering number: fewest proper subgroups whose union is G.
pub fn sigma(g: &Analyzed, limits: &Limits) -> Result<InvariantReport> {
    let operands = vec![g.label().to_string()];
    if g.group.is_cyclic() {
        return Ok(InvariantReport::infinite(
            InvariantKind::Sigma,
            operands,
            InfinitenessReason::GroupCyclic,
        ));
    }
    let candidates = g
        .lattice
        .maximal_subgroups()
        .map(|s| CertificateEntry {
            subgroup: s.clone(),
            witness: None,
        })
        .collect();
    solve(InvariantKind::Sigma, operands, g, candidates, limits)
}

/// Cyclic covering number: fewest proper cyclic subgroups whose union is G.
pub fn sigma_c(g: &Analyzed, limits: &Limits) -> Result<InvariantReport> {
    let operands = vec![g.label().to_string()];
    if g.group.is_cyclic() {
        return Ok(InvariantReport::infinite(
            InvariantKind::SigmaC,
            operands,
            InfinitenessReason::GroupCyclic,
        ));
    }
    let candidates = g
        .lattice
        .maximal_cyclic_subgroups()
        .map(|s| CertificateEntry {
            subgroup: s.clone(),
            witness: None,
        })
        .collect();
    solve(InvariantKind::SigmaC, operands, g, candidates, limits)
}

/// The ⊆-maximal subgroups of G that embed into H, each with a witness.
///
/// Subgroups are visited from largest to smallest; anything inside an
/// already accepted subgroup embeds by restriction and is skipped.
pub fn maximal_embeddable(g: &Analyzed, h: &Analyzed) -> Vec<CertificateEntry> {
    let mut accepted: Vec<CertificateEntry> = Vec::new();
    for s in g.lattice.all().iter().rev() {
        if accepted.iter().any(|a| s.is_subgroup_of(&a.subgroup)) {
            continue;
        }
        if let Some(w) = embeds_subgroup(&g.group, s.members(), &h.group, &h.lattice) {
            accepted.push(CertificateEntry {
                subgroup: s.clone(),
                witness: Some(w),
            });
        }
    }
    accepted.sort_by(|a, b| a.subgroup.cmp(&b.subgroup));
    accepted
}

/// Injective hom-complexity IC(G;H).
pub fn ic(g: &Analyzed, h: &Analyzed, limits: &Limits) -> Result<InvariantReport> {
    let operands = vec![g.label().to_string(), h.label().to_string()];
    if let Some(w) = embeds(&g.group, &h.group, &h.lattice) {
        let mut report = InvariantReport {
            kind: InvariantKind::Ic,
            operands,
            value: ExtNat::Finite(1),
            certificate: vec![CertificateEntry {
                subgroup: g.lattice.whole().clone(),
                witness: Some(w),
            }],
            reason: None,
            cover: None,
        };
        if limits.fault_injection {
            report.value = ExtNat::Finite(2);
        }
        return Ok(report);
    }
    if let Some(d) = g.spectrum.first_gap(&h.spectrum) {
        return Ok(InvariantReport::infinite(
            InvariantKind::Ic,
            operands,
            InfinitenessReason::SpectrumGap(d),
        ));
    }
    let candidates = maximal_embeddable(g, h);
    solve(InvariantKind::Ic, operands, g, candidates, limits)
}

/// Replaces the stored cover record by one over the elements of G whose
/// candidates are exactly the certificate members, so that a certificate
/// received from elsewhere can go through [`cover::validate_cover`].
pub fn attach_cover(mut report: InvariantReport, g: &Analyzed) -> InvariantReport {
    let members: Vec<Mask> = report.subgroups().map(|s| *s.members()).collect();
    let k = members.len();
    if let Ok(inst) = CoverInstance::new(g.order(), members) {
        let sol = CoverSolution {
            value: report.value,
            certificate: (0..k).collect(),
        };
        report.cover = Some((inst, sol));
    }
    report
}

fn union_of<'a>(subs: impl Iterator<Item = &'a Subgroup>) -> Mask {
    subs.fold(Mask::EMPTY, |acc, s| acc.union(s.members()))
}

/// Structural validation of a report against the groups it was computed for.
///
/// Checks that the certificate has `value` members, that they cover G
/// irredundantly, that every member is proper (σ), proper and cyclic (σ_c),
/// or carries a verified injective homomorphism into H (IC), and that the
/// stored cover solution passes [`cover::validate_cover`].
pub fn validate_report(report: &InvariantReport, g: &Analyzed, h: Option<&Analyzed>) -> bool {
    let Some(k) = report.value.finite() else {
        return report.certificate.is_empty();
    };
    if report.certificate.len() as u64 != k {
        return false;
    }
    let members: Vec<Mask> = report.subgroups().map(|s| *s.members()).collect();
    if !cover::covers_irredundantly(&g.group.elements(), &members) {
        return false;
    }
    if members.len() <= 20 {
        match cover::inclusion_exclusion_cardinality(&members) {
            Ok(n) if n as usize == g.order() => {}
            _ => return false,
        }
    }
    let entries_ok = report.certificate.iter().all(|e| {
        crate::lattice::is_subgroup(&g.group, e.subgroup.members())
            && match report.kind {
                InvariantKind::Sigma => e.subgroup.is_proper(),
                InvariantKind::SigmaC => e.subgroup.is_proper() && e.subgroup.is_cyclic(&g.group),
                InvariantKind::Ic => match (&e.witness, h) {
                    (Some(w), Some(h)) => w.source == e.subgroup.elements() && w.verify(&g.group, &h.group),
                    _ => false,
                },
            }
    });
    if !entries_ok {
        return false;
    }
    match &report.cover {
        Some((inst, sol)) => cover::validate_cover(inst, sol),
        None => k == 1 && report.kind == InvariantKind::Ic,
    }
}

/// The structure every optimal IC certificate with more than one member must
/// have: (i) no member lies inside the union of the others, and (ii) any two
/// members generate either G or a subgroup with no injective homomorphism
/// into H.
pub fn validate_optimal_ic_certificate(report: &InvariantReport, g: &Analyzed, h: &Analyzed) -> bool {
    if report.kind != InvariantKind::Ic || !matches!(report.value, ExtNat::Finite(k) if k > 1) {
        return false;
    }
    if !validate_report(report, g, Some(h)) {
        return false;
    }
    let subs: Vec<&Subgroup> = report.subgroups().collect();
    let whole = g.group.elements();
    let irredundant = (0..subs.len()).all(|i| {
        let others = union_of(subs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| *s));
        !subs[i].members().is_subset(&others) && others != whole
    });
    if !irredundant {
        return false;
    }
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            let join = closure(&g.group, &subs[i].members().union(subs[j].members()));
            if join.order() != g.order() && embeds_subgroup(&g.group, join.members(), &h.group, &h.lattice).is_some() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn an(s: &str) -> Analyzed {
        Analyzed::from_spec(&parse_spec(s).unwrap(), &Limits::default()).unwrap()
    }

    fn value(r: Result<InvariantReport>) -> ExtNat {
        r.unwrap().value
    }

    const L: Limits = Limits {
        max_order: 128,
        max_subgroups: 200_000,
        solver_nodes: 100_000_000,
        exhaustive_assoc_bound: 128,
        fault_injection: false,
    };

    #[test]
    fn sigma_examples() {
        for n in 1..=16 {
            let r = sigma(&an(&format!("C{n}")), &L).unwrap();
            assert_eq!(r.value, ExtNat::Infinite);
            assert_eq!(r.reason, Some(InfinitenessReason::GroupCyclic));
        }
        assert_eq!(value(sigma(&an("C2^2"), &L)), ExtNat::Finite(3));
        assert_eq!(value(sigma(&an("C3^3"), &L)), ExtNat::Finite(4));
        assert_eq!(value(sigma(&an("Q8"), &L)), ExtNat::Finite(3));
        assert_eq!(value(sigma(&an("D3"), &L)), ExtNat::Finite(4));
    }

    #[test]
    fn sigma_c_examples() {
        assert_eq!(value(sigma_c(&an("C3^2"), &L)), ExtNat::Finite(4));
        assert_eq!(value(sigma_c(&an("C2^3"), &L)), ExtNat::Finite(7));
        assert_eq!(value(sigma_c(&an("Q8"), &L)), ExtNat::Finite(3));
    }

    #[test]
    fn ic_examples() {
        let cases = [
            ("C2^2", "C2", ExtNat::Finite(3)),
            ("C3^3", "C3", ExtNat::Finite(13)),
            ("C3^2", "C9", ExtNat::Finite(4)),
            ("D5", "C10", ExtNat::Finite(6)),
            ("C4", "C2", ExtNat::Infinite),
            ("C1", "C1", ExtNat::Finite(1)),
            ("C1", "Q8", ExtNat::Finite(1)),
            ("C2", "C1", ExtNat::Infinite),
        ];
        for (g, h, want) in cases {
            let (g, h) = (an(g), an(h));
            let r = ic(&g, &h, &L).unwrap();
            assert_eq!(r.value, want, "IC({};{})", g.label(), h.label());
            assert!(validate_report(&r, &g, Some(&h)), "IC({};{})", g.label(), h.label());
        }
        let r = ic(&an("C4"), &an("C2"), &L).unwrap();
        assert_eq!(r.reason, Some(InfinitenessReason::SpectrumGap(4)));
    }

    #[test]
    fn optimal_certificate_structure() {
        for (g, h) in [("C2^2", "C2"), ("C3^2", "C9"), ("D5", "C10"), ("C2^3", "C2^2")] {
            let (g, h) = (an(g), an(h));
            let r = ic(&g, &h, &L).unwrap();
            assert!(validate_optimal_ic_certificate(&r, &g, &h), "{}", g.label());
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let (g, h) = (an("C2^2"), an("C2"));
        let mut r = ic(&g, &h, &L).unwrap();
        // replace a member by the trivial subgroup, which lies inside another member
        let trivial = g.lattice.get(0).clone();
        r.certificate[0] = CertificateEntry {
            witness: embeds_subgroup(&g.group, trivial.members(), &h.group, &h.lattice),
            subgroup: trivial,
        };
        assert!(!validate_optimal_ic_certificate(&r, &g, &h));
        assert!(!validate_report(&r, &g, Some(&h)));

        let r = ic(&g, &h, &L).unwrap();
        let mut padded = r.clone();
        padded.certificate.push(r.certificate[0].clone());
        padded.value = ExtNat::Finite(4);
        assert!(!validate_report(&padded, &g, Some(&h)));
    }

    #[test]
    fn sigma_c_equals_maximal_cyclic_count() {
        for s in ["C2^2", "Q8", "D4", "D6", "C4 x C2", "SD(7,3)", "Q16", "C3 x D3"] {
            let g = an(s);
            let r = sigma_c(&g, &L).unwrap();
            assert_eq!(r.value, ExtNat::Finite(g.lattice.maximal_cyclic().len() as u64), "{s}");
            assert!(validate_report(&r, &g, None));
            let sg = sigma(&g, &L).unwrap();
            assert!(validate_report(&sg, &g, None));
            assert!(sg.value >= ExtNat::Finite(3));
            assert!(r.value >= sg.value);
        }
    }

    #[test]
    fn faulty_solver_is_caught_by_validation() {
        let faulty = Limits {
            fault_injection: true,
            ..L
        };
        let (g, h) = (an("C2^2"), an("C2"));
        let r = ic(&g, &h, &faulty).unwrap();
        assert_eq!(r.value, ExtNat::Finite(4));
        assert!(!validate_report(&r, &g, Some(&h)));
    }
}
