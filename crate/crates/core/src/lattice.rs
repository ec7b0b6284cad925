//! Subgroup enumeration and the maximal / maximal-cyclic strata.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Budget, Error, Result};
use crate::extnat::ExtNat;
use crate::group::FiniteGroup;
use crate::limits::Limits;
use crate::mask::Mask;

/// A subgroup of a parent group, as a membership mask over the parent's
/// element indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    members: Mask,
    parent_order: usize,
    generators: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.parent_order == other.parent_order
    }
}

impl Eq for Subgroup {}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.members.cmp(&other.members))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    pub fn trivial(g: &FiniteGroup) -> Subgroup {
        Subgroup {
            members: Mask::singleton(0),
            parent_order: g.order(),
            generators: Vec::new(),
        }
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        closure(g, &g.elements())
    }

    /// Wraps a mask after checking it is closed under the parent's operation.
    pub fn from_members(g: &FiniteGroup, members: Mask) -> Option<Subgroup> {
        if !is_subgroup(g, &members) {
            return None;
        }
        let s = closure(g, &members);
        debug_assert_eq!(s.members, members);
        Some(s)
    }

    pub fn members(&self) -> &Mask {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    /// A generating set, in the order elements were adjoined.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn is_proper(&self) -> bool {
        self.order() < self.parent_order
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_cyclic(&self, g: &FiniteGroup) -> bool {
        let n = self.order();
        self.members.iter().any(|a| g.element_order(a) == n)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.to_vec()
    }
}

/// Independent closure check: contains the identity, closed under products
/// and inverses.
pub fn is_subgroup(g: &FiniteGroup, members: &Mask) -> bool {
    if !members.contains(0) {
        return false;
    }
    let v = members.to_vec();
    if v.last().is_some_and(|&x| x >= g.order()) {
        return false;
    }
    v.iter()
        .all(|&a| members.contains(g.inv(a)) && v.iter().all(|&b| members.contains(g.mul(a, b))))
}

/// `⟨sub ∪ {a}⟩`, adjoining whole left cosets of `sub` at a time.
pub fn extend(g: &FiniteGroup, sub: &Subgroup, a: usize) -> Subgroup {
    if sub.contains(a) {
        return sub.clone();
    }
    let mut generators = sub.generators.clone();
    generators.push(a);
    let base = sub.elements();
    let mut members = sub.members;
    let mut reps = vec![0usize];
    let mut i = 0;
    while i < reps.len() {
        let x = reps[i];
        i += 1;
        for &s in &generators {
            let y = g.mul(s, x);
            if !members.contains(y) {
                for &h in &base {
                    members.insert(g.mul(y, h));
                }
                reps.push(y);
            }
        }
    }
    Subgroup {
        members,
        parent_order: g.order(),
        generators,
    }
}

/// The least subgroup containing `seed`.
pub fn closure(g: &FiniteGroup, seed: &Mask) -> Subgroup {
    let mut s = Subgroup::trivial(g);
    for a in seed.iter() {
        s = extend(g, &s, a);
    }
    s
}

/// `{⟨a⟩ : a ∈ G}` without duplicates, in canonical order. Includes the
/// trivial subgroup.
pub fn cyclic_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen: HashMap<Mask, Subgroup> = HashMap::new();
    for a in 0..g.order() {
        let m = g.cyclic_mask(a);
        seen.entry(m).or_insert_with(|| Subgroup {
            members: m,
            parent_order: g.order(),
            generators: if a == 0 { vec![] } else { vec![a] },
        });
    }
    let mut v: Vec<Subgroup> = seen.into_values().collect();
    v.sort();
    v
}

/// The `⊆`-maximal members of `subgroups` (only among the cyclic ones when
/// `restrict_to_cyclic`), in canonical order.
pub fn maximal_filter(g: &FiniteGroup, subgroups: &[Subgroup], restrict_to_cyclic: bool) -> Vec<Subgroup> {
    let pool: Vec<&Subgroup> = subgroups
        .iter()
        .filter(|s| !restrict_to_cyclic || s.is_cyclic(g))
        .collect();
    let mut out: Vec<Subgroup> = pool
        .iter()
        .filter(|s| !pool.iter().any(|t| t.order() > s.order() && s.is_subgroup_of(t)))
        .map(|s| (*s).clone())
        .collect();
    out.sort();
    out
}

/// Every subgroup of a group, with its maximal and maximal-cyclic strata.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    all: Vec<Subgroup>,
    maximal: Vec<usize>,
    maximal_cyclic: Vec<usize>,
    index: HashMap<Mask, usize>,
    by_order: HashMap<usize, Vec<usize>>,
}

impl SubgroupLattice {
    /// All subgroups in canonical order: by order, then by mask.
    pub fn all(&self) -> &[Subgroup] {
        &self.all
    }

    /// Indices into [`all`](Self::all) of the maximal proper subgroups.
    pub fn maximal(&self) -> &[usize] {
        &self.maximal
    }

    /// Indices of the subgroups maximal among cyclic subgroups.
    pub fn maximal_cyclic(&self) -> &[usize] {
        &self.maximal_cyclic
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn get(&self, i: usize) -> &Subgroup {
        &self.all[i]
    }

    pub fn index_of(&self, members: &Mask) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn whole(&self) -> &Subgroup {
        self.all.last().expect("lattice contains the whole group")
    }

    pub fn maximal_subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.maximal.iter().map(|&i| &self.all[i])
    }

    pub fn maximal_cyclic_subgroups(&self) -> impl Iterator<Item = &Subgroup> {
        self.maximal_cyclic.iter().map(|&i| &self.all[i])
    }

    pub fn of_order(&self, n: usize) -> impl Iterator<Item = (usize, &Subgroup)> {
        self.by_order
            .get(&n)
            .into_iter()
            .flatten()
            .map(move |&i| (i, &self.all[i]))
    }
}

/// Enumerates all subgroups by layered join-closure: start from the cyclic
/// subgroups and repeatedly adjoin generators of prime-power order until no
/// new subgroup appears.
pub fn all_subgroups(g: &FiniteGroup, limits: &Limits) -> Result<SubgroupLattice> {
    let n = g.order();
    if n > limits.max_order {
        return Err(Error::OrderLimitExceeded {
            order: n,
            limit: limits.max_order,
        });
    }
    let budget = |count: usize| -> Result<()> {
        if count > limits.max_subgroups {
            Err(Error::BudgetExceeded {
                what: Budget::Subgroups,
                limit: limits.max_subgroups as u64,
            })
        } else {
            Ok(())
        }
    };

    let cyclic = cyclic_subgroups(g);
    let atoms: Vec<usize> = cyclic
        .iter()
        .filter(|c| c.order() > 1 && is_prime_power(c.order()))
        .map(|c| c.generators[0])
        .collect();

    let mut found: Vec<Subgroup> = Vec::new();
    let mut seen: HashMap<Mask, usize> = HashMap::new();
    for c in cyclic {
        seen.insert(c.members, found.len());
        found.push(c);
    }
    budget(found.len())?;
    // has_proper_extension[i]: some ⟨S_i, a⟩ ≠ S_i is still proper
    let mut has_proper_extension = vec![false; found.len()];
    let mut frontier: Vec<usize> = (0..found.len()).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for idx in frontier {
            for &a in &atoms {
                if found[idx].contains(a) {
                    continue;
                }
                let joined = extend(g, &found[idx], a);
                if joined.order() < n {
                    has_proper_extension[idx] = true;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(joined.members) {
                    e.insert(found.len());
                    found.push(joined);
                    has_proper_extension.push(false);
                    next.push(found.len() - 1);
                    budget(found.len())?;
                }
            }
        }
        frontier = next;
    }

    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| found[a].cmp(&found[b]));
    let all: Vec<Subgroup> = order.iter().map(|&i| found[i].clone()).collect();
    let maximal: Vec<usize> = order
        .iter()
        .enumerate()
        .filter(|(_, &old)| found[old].is_proper() && !has_proper_extension[old])
        .map(|(new, _)| new)
        .collect();
    let index: HashMap<Mask, usize> = all.iter().enumerate().map(|(i, s)| (s.members, i)).collect();

    let cyclic_idx: Vec<usize> = (0..all.len()).filter(|&i| all[i].is_cyclic(g)).collect();
    let maximal_cyclic = cyclic_idx
        .iter()
        .copied()
        .filter(|&i| {
            !cyclic_idx
                .iter()
                .any(|&j| all[j].order() > all[i].order() && all[i].is_subgroup_of(&all[j]))
        })
        .collect();

    let mut by_order: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, s) in all.iter().enumerate() {
        by_order.entry(s.order()).or_default().push(i);
    }

    Ok(SubgroupLattice {
        all,
        maximal,
        maximal_cyclic,
        index,
        by_order,
    })
}

fn is_prime_power(n: usize) -> bool {
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap_or(n);
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// True iff every proper subgroup is cyclic.
pub fn all_proper_subgroups_cyclic(g: &FiniteGroup, lattice: &SubgroupLattice) -> bool {
    lattice.all().iter().filter(|s| s.is_proper()).all(|s| s.is_cyclic(g))
}

pub(crate) fn totient(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Σ_{x ≠ 1} 1/φ(ord x)` as an exact rational, which always comes out as
/// the number of nontrivial cyclic subgroups. Infinite for cyclic groups.
pub fn totient_cover_bound(g: &FiniteGroup) -> ExtNat {
    if g.is_cyclic() {
        return ExtNat::Infinite;
    }
    let (mut num, mut den) = (0u128, 1u128);
    for a in 1..g.order() {
        let phi = totient(g.element_order(a)) as u128;
        num = num * phi + den;
        den *= phi;
        let d = gcd(num, den);
        num /= d;
        den /= d;
    }
    assert_eq!(den, 1, "totient sum must be an integer");
    ExtNat::Finite(num as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build;
    use crate::spec::parse_spec;

    fn grp(s: &str) -> FiniteGroup {
        build(&parse_spec(s).unwrap(), &Limits::default()).unwrap()
    }

    fn orders(v: &[Subgroup]) -> Vec<usize> {
        v.iter().map(Subgroup::order).collect()
    }

    /// Every identity-containing subset closed under the operation.
    fn brute_force_subgroups(g: &FiniteGroup) -> Vec<Mask> {
        let n = g.order();
        let mut out = Vec::new();
        for bits in 0u64..(1 << (n - 1)) {
            if !n.is_multiple_of(bits.count_ones() as usize + 1) {
                continue;
            }
            let m = Mask::from_indices(std::iter::once(0).chain((1..n).filter(|i| bits >> (i - 1) & 1 == 1)));
            if is_subgroup(g, &m) {
                out.push(m);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    #[test]
    fn cyclic_subgroup_examples() {
        assert_eq!(orders(&cyclic_subgroups(&grp("C4"))), vec![1, 2, 4]);
        assert_eq!(orders(&cyclic_subgroups(&grp("C2^2"))), vec![1, 2, 2, 2]);
        assert_eq!(orders(&cyclic_subgroups(&grp("Q8"))), vec![1, 2, 4, 4, 4]);
    }

    #[test]
    fn lattice_examples() {
        let l = all_subgroups(&grp("C12"), &Limits::default()).unwrap();
        assert_eq!(orders(l.all()), vec![1, 2, 3, 4, 6, 12]);
        let l = all_subgroups(&grp("C2^2"), &Limits::default()).unwrap();
        assert_eq!(l.len(), 5);
        let l = all_subgroups(&grp("D5"), &Limits::default()).unwrap();
        assert_eq!(orders(l.all()), vec![1, 2, 2, 2, 2, 2, 5, 10]);
    }

    #[test]
    fn lattice_matches_brute_force() {
        for s in [
            "C1", "C2^2", "C12", "D5", "Q8", "D4", "C2^3", "SD(7,3)", "D3 x C2", "C4 x C2", "Q16", "D6", "C3^2",
        ] {
            let g = grp(s);
            if g.order() > 21 {
                continue;
            }
            let l = all_subgroups(&g, &Limits::default()).unwrap();
            let got: Vec<Mask> = l.all().iter().map(|s| *s.members()).collect();
            assert_eq!(got, brute_force_subgroups(&g), "{s}");
            assert_eq!(l.all().first().unwrap().order(), 1);
            assert_eq!(l.whole().order(), g.order());
        }
    }

    #[test]
    fn closure_examples() {
        let g = grp("C2^2");
        assert_eq!(closure(&g, &Mask::singleton(0)).order(), 1);
        assert_eq!(closure(&g, &Mask::from_indices([1, 2])).order(), 4);
        let c12 = grp("C12");
        // 3 has order 4, 2 has order 6
        assert_eq!(closure(&c12, &Mask::from_indices([3, 2])).order(), 12);
    }

    #[test]
    fn maximal_filter_examples() {
        let g = grp("C8");
        let chain: Vec<Subgroup> = [4usize, 2, 1]
            .iter()
            .map(|&a| closure(&g, &Mask::singleton(a)))
            .filter(|s| s.order() < 8)
            .collect();
        assert_eq!(orders(&maximal_filter(&g, &chain, false)), vec![4]);

        let v4 = grp("C2^2");
        let l = all_subgroups(&v4, &Limits::default()).unwrap();
        let proper: Vec<Subgroup> = l.all().iter().filter(|s| s.is_proper()).cloned().collect();
        assert_eq!(orders(&maximal_filter(&v4, &proper, false)), vec![2, 2, 2]);

        let q8 = grp("Q8");
        assert_eq!(
            orders(&maximal_filter(&q8, &cyclic_subgroups(&q8), true)),
            vec![4, 4, 4]
        );
    }

    #[test]
    fn strata_agree_with_filter() {
        for s in ["C12", "D6", "Q16", "C2^4", "C4 x C2", "SD(7,3)", "D4 x C2", "C3^3"] {
            let g = grp(s);
            let l = all_subgroups(&g, &Limits::default()).unwrap();
            let proper: Vec<Subgroup> = l.all().iter().filter(|s| s.is_proper()).cloned().collect();
            let max: Vec<Subgroup> = l.maximal_subgroups().cloned().collect();
            assert_eq!(max, maximal_filter(&g, &proper, false), "{s}");
            let maxc: Vec<Subgroup> = l.maximal_cyclic_subgroups().cloned().collect();
            assert_eq!(maxc, maximal_filter(&g, l.all(), true), "{s}");
            for sub in l.all() {
                assert!(is_subgroup(&g, sub.members()), "{s}");
                assert_eq!(g.order() % sub.order(), 0);
            }
        }
    }

    #[test]
    fn elementary_abelian_maximal_cyclic_count() {
        for (s, p, n) in [
            ("C2^2", 2u32, 2u32),
            ("C2^3", 2, 3),
            ("C2^4", 2, 4),
            ("C3^2", 3, 2),
            ("C3^3", 3, 3),
            ("C5^2", 5, 2),
        ] {
            let l = all_subgroups(&grp(s), &Limits::default()).unwrap();
            let want = (p.pow(n) - 1) / (p - 1);
            assert_eq!(l.maximal_cyclic().len() as u32, want, "{s}");
        }
    }

    #[test]
    fn subgroup_counts_of_elementary_abelian_groups() {
        // Gaussian binomial sums
        let l = all_subgroups(&grp("C2^5"), &Limits::default()).unwrap();
        assert_eq!(l.len(), 374);
        let l = all_subgroups(&grp("C3^3"), &Limits::default()).unwrap();
        assert_eq!(l.len(), 1 + 13 + 13 + 1);
    }

    #[test]
    fn budget_is_a_hard_error() {
        let limits = Limits {
            max_subgroups: 10,
            ..Limits::default()
        };
        assert!(matches!(
            all_subgroups(&grp("C2^4"), &limits),
            Err(Error::BudgetExceeded {
                what: Budget::Subgroups,
                ..
            })
        ));
    }

    #[test]
    fn miller_moreno_predicate() {
        let check = |s: &str| {
            let g = grp(s);
            let l = all_subgroups(&g, &Limits::default()).unwrap();
            all_proper_subgroups_cyclic(&g, &l)
        };
        assert!(check("Q8"));
        assert!(check("SD(3,2)"));
        assert!(!check("C2^3"));
        // Q16 contains a copy of Q8
        assert!(!check("Q16"));
    }

    #[test]
    fn totient_bound_examples() {
        assert_eq!(totient_cover_bound(&grp("C2^2")), ExtNat::Finite(3));
        assert_eq!(totient_cover_bound(&grp("Q8")), ExtNat::Finite(4));
        assert_eq!(totient_cover_bound(&grp("C3^2")), ExtNat::Finite(4));
        assert_eq!(totient_cover_bound(&grp("C6")), ExtNat::Infinite);
    }

    #[test]
    fn totient_bound_counts_nontrivial_cyclic_subgroups() {
        for s in ["Q8", "D6", "C4 x C2", "SD(7,3)", "Q16", "C2^4", "D4 x C3"] {
            let g = grp(s);
            let l = all_subgroups(&g, &Limits::default()).unwrap();
            let nontrivial_cyclic = cyclic_subgroups(&g).len() as u64 - 1;
            assert_eq!(totient_cover_bound(&g), ExtNat::Finite(nontrivial_cyclic), "{s}");
            assert!(ExtNat::Finite(l.maximal_cyclic().len() as u64) <= totient_cover_bound(&g));
        }
    }
}
