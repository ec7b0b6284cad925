//! The family corpus: every group built from the spec families (and direct
//! products of them) up to an order bound, one representative per
//! isomorphism class.

use std::collections::HashMap;

use crate::error::Result;
use crate::invariants::Analyzed;
use crate::iso::are_isomorphic;
use crate::limits::Limits;
use crate::spec::{is_prime, GroupSpec};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub spec: GroupSpec,
    pub group: Analyzed,
}

impl CorpusEntry {
    pub fn label(&self) -> &str {
        self.group.label()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// Nontrivial single-family groups of order ≤ `bound`.
pub fn atoms(bound: usize) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for n in 2..=bound {
        out.push(GroupSpec::Cyclic(n));
    }
    for n in 3..=bound / 2 {
        out.push(GroupSpec::Dihedral(n));
    }
    let mut m = 8;
    while m <= bound {
        out.push(GroupSpec::GeneralizedQuaternion(m));
        m *= 2;
    }
    for q in (3..=bound).filter(|&q| is_prime(q)) {
        for p in (2..q).filter(|&p| is_prime(p) && (q - 1) % p == 0 && p * q <= bound) {
            out.push(GroupSpec::SemidirectPQ { q, p });
        }
    }
    out
}

/// Spec for the product of `factors` (atom indices, nondecreasing), with
/// runs of equal factors written as powers.
fn product_spec(atoms: &[GroupSpec], factors: &[usize]) -> GroupSpec {
    let mut parts: Vec<GroupSpec> = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let j = (i..factors.len())
            .find(|&j| factors[j] != factors[i])
            .unwrap_or(factors.len());
        let base = atoms[factors[i]].clone();
        parts.push(if j - i == 1 {
            base
        } else {
            GroupSpec::power(base, (j - i) as u32)
        });
        i = j;
    }
    parts
        .into_iter()
        .reduce(GroupSpec::product)
        .expect("at least one factor")
}

/// Multisets of atom indices (nondecreasing) whose orders multiply to ≤ bound.
fn factorizations(orders: &[usize], bound: usize) -> Vec<Vec<usize>> {
    fn go(orders: &[usize], bound: usize, from: usize, acc: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for i in from..orders.len() {
            if acc * orders[i] <= bound {
                cur.push(i);
                go(orders, bound, i, acc * orders[i], cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(orders, bound, 0, 1, &mut Vec::new(), &mut out);
    out
}

/// Candidate specs in canonical order: by order, then by number of factors,
/// then by factor indices.
pub fn candidate_specs(bound: usize) -> Vec<GroupSpec> {
    let atoms = atoms(bound);
    let orders: Vec<usize> = atoms
        .iter()
        .map(|a| a.predicted_order().expect("family atom"))
        .collect();
    let mut keyed: Vec<(usize, Vec<usize>)> = factorizations(&orders, bound)
        .into_iter()
        .map(|f| (f.iter().map(|&i| orders[i]).product(), f))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(&b.1)));
    let mut out = vec![GroupSpec::Cyclic(1)];
    out.extend(keyed.iter().map(|(_, f)| product_spec(&atoms, f)));
    out
}

/// Order, order spectrum and commutativity: equal for isomorphic groups.
type BucketKey = (usize, Vec<(usize, usize)>, bool);

/// One representative per isomorphism class among [`candidate_specs`],
/// keeping the first spec seen for each class.
pub fn corpus(bound: usize, limits: &Limits) -> Result<Vec<CorpusEntry>> {
    let mut out: Vec<CorpusEntry> = Vec::new();
    let mut buckets: HashMap<BucketKey, Vec<usize>> = HashMap::new();
    for spec in candidate_specs(bound) {
        let group = Analyzed::from_spec(&spec, limits)?;
        let key = (
            group.order(),
            group.spectrum.0.iter().map(|(&a, &b)| (a, b)).collect(),
            group.group.is_abelian(),
        );
        let bucket = buckets.entry(key).or_default();
        if bucket
            .iter()
            .any(|&i| are_isomorphic(&out[i].group.group, &group.group).is_some())
        {
            continue;
        }
        bucket.push(out.len());
        out.push(CorpusEntry { spec, group });
    }
    Ok(out)
}
