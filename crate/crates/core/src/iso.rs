//! Isomorphism and embeddability of finite groups.
//!
//! Both questions reduce to one search: find an injective homomorphism from a
//! subgroup of one table into a subgroup of another. Generator images are
//! chosen among elements of equal order, and each choice is propagated along
//! the Cayley graph of the generated subgroup so that conflicts surface as
//! soon as they exist.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::group::FiniteGroup;
use crate::lattice::{extend, Subgroup, SubgroupLattice};
use crate::mask::Mask;

/// Element order → number of elements of that order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpectrum(pub BTreeMap<usize, usize>);

impl OrderSpectrum {
    pub fn count(&self, d: usize) -> usize {
        self.0.get(&d).copied().unwrap_or(0)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    /// Every order present here is present in `other`.
    pub fn dominated_by(&self, other: &OrderSpectrum) -> bool {
        self.orders().all(|d| other.count(d) > 0)
    }

    /// First order present here and absent from `other`.
    pub fn first_gap(&self, other: &OrderSpectrum) -> Option<usize> {
        self.orders().find(|&d| other.count(d) == 0)
    }

    /// Every count here is at most the matching count in `other`.
    fn fits_in(&self, other: &OrderSpectrum) -> bool {
        self.0.iter().all(|(&d, &c)| other.count(d) >= c)
    }
}

pub fn order_spectrum(g: &FiniteGroup) -> OrderSpectrum {
    OrderSpectrum(g.spectrum_on(&g.elements()))
}

pub fn spectrum_dominates(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    order_spectrum(g).dominated_by(&order_spectrum(h))
}

/// An injective homomorphism, listed as aligned source/image element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub source: Vec<usize>,
    pub image: Vec<usize>,
}

impl EmbeddingWitness {
    pub fn image_of(&self, a: usize) -> Option<usize> {
        self.source.binary_search(&a).ok().map(|i| self.image[i])
    }

    /// Independent check that the map is an injective homomorphism from the
    /// subgroup `source` of `src` into `dst`.
    pub fn verify(&self, src: &FiniteGroup, dst: &FiniteGroup) -> bool {
        if self.source.len() != self.image.len() || self.source.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.source.iter().any(|&a| a >= src.order()) || self.image.iter().any(|&b| b >= dst.order()) {
            return false;
        }
        let mut seen = Mask::EMPTY;
        for &b in &self.image {
            if seen.contains(b) {
                return false;
            }
            seen.insert(b);
        }
        for (i, &a) in self.source.iter().enumerate() {
            for (j, &b) in self.source.iter().enumerate() {
                match self.image_of(src.mul(a, b)) {
                    Some(fab) if fab == dst.mul(self.image[i], self.image[j]) => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// Greedy generating set: repeatedly take a highest-order element outside the
/// current closure (lowest index on ties).
pub fn greedy_generators(g: &FiniteGroup, members: &Mask) -> Vec<usize> {
    let mut sub = Subgroup::trivial(g);
    let mut gens = Vec::new();
    while sub.order() < members.len() {
        let next = members
            .iter()
            .filter(|&a| !sub.contains(a))
            .max_by(|&a, &b| g.element_order(a).cmp(&g.element_order(b)).then(b.cmp(&a)))
            .expect("members not yet generated");
        gens.push(next);
        sub = extend(g, &sub, next);
    }
    gens
}

const UNMAPPED: usize = usize::MAX;

struct Search<'a> {
    src: &'a FiniteGroup,
    dst: &'a FiniteGroup,
    gens: Vec<usize>,
    images: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
    assigned: Vec<usize>,
}

impl Search<'_> {
    fn propagate(&mut self, level: usize) -> bool {
        let mut k = 0;
        while k < self.assigned.len() {
            let x = self.assigned[k];
            k += 1;
            for j in 0..=level {
                let y = self.src.mul(x, self.gens[j]);
                let fy = self.dst.mul(self.map[x], self.images[j]);
                if self.map[y] == UNMAPPED {
                    if self.used[fy] {
                        return false;
                    }
                    self.map[y] = fy;
                    self.used[fy] = true;
                    self.assigned.push(y);
                } else if self.map[y] != fy {
                    return false;
                }
            }
        }
        true
    }

    fn rollback(&mut self, len: usize) {
        while self.assigned.len() > len {
            let y = self.assigned.pop().expect("nonempty");
            self.used[self.map[y]] = false;
            self.map[y] = UNMAPPED;
        }
    }

    fn run(&mut self, level: usize) -> bool {
        if level == self.gens.len() {
            return true;
        }
        for ci in 0..self.candidates[level].len() {
            let b = self.candidates[level][ci];
            if self.used[b] {
                continue;
            }
            let mark = self.assigned.len();
            self.images[level] = b;
            if self.propagate(level) && self.run(level + 1) {
                return true;
            }
            self.rollback(mark);
        }
        false
    }
}

/// Searches for an injective homomorphism from the subgroup `src_set` of `src`
/// into the subgroup `dst_set` of `dst`.
pub fn find_monomorphism(
    src: &FiniteGroup,
    src_set: &Mask,
    dst: &FiniteGroup,
    dst_set: &Mask,
) -> Option<EmbeddingWitness> {
    if src_set.len() > dst_set.len() {
        return None;
    }
    let gens = greedy_generators(src, src_set);
    let candidates = gens
        .iter()
        .map(|&a| {
            dst_set
                .iter()
                .filter(|&b| dst.element_order(b) == src.element_order(a))
                .collect()
        })
        .collect();
    let mut map = vec![UNMAPPED; src.order()];
    let mut used = vec![false; dst.order()];
    map[0] = 0;
    used[0] = true;
    let mut search = Search {
        src,
        dst,
        images: vec![UNMAPPED; gens.len()],
        gens,
        candidates,
        map,
        used,
        assigned: vec![0],
    };
    if !search.run(0) {
        return None;
    }
    let source = src_set.to_vec();
    let image = source.iter().map(|&a| search.map[a]).collect();
    Some(EmbeddingWitness { source, image })
}

/// A bijective homomorphism `g → h`, if one exists.
pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Option<EmbeddingWitness> {
    if g.order() != h.order() || order_spectrum(g) != order_spectrum(h) || g.is_abelian() != h.is_abelian() {
        return None;
    }
    find_monomorphism(g, &g.elements(), h, &h.elements())
}

/// An injective homomorphism from the subgroup `src_set` of `src` into `dst`,
/// found by testing each subgroup of `dst` of the right order.
pub fn embeds_subgroup(
    src: &FiniteGroup,
    src_set: &Mask,
    dst: &FiniteGroup,
    dst_lattice: &SubgroupLattice,
) -> Option<EmbeddingWitness> {
    let n = src_set.len();
    if !dst.order().is_multiple_of(n) {
        return None;
    }
    let spectrum = OrderSpectrum(src.spectrum_on(src_set));
    if !spectrum.fits_in(&order_spectrum(dst)) {
        return None;
    }
    let abelian = src.is_abelian_on(src_set);
    dst_lattice
        .of_order(n)
        .filter(|(_, t)| OrderSpectrum(dst.spectrum_on(t.members())) == spectrum)
        .filter(|(_, t)| dst.is_abelian_on(t.members()) == abelian)
        .find_map(|(_, t)| find_monomorphism(src, src_set, dst, t.members()))
}

/// An injective homomorphism `k → h`, if `h` has a subgroup isomorphic to `k`.
pub fn embeds(k: &FiniteGroup, h: &FiniteGroup, h_lattice: &SubgroupLattice) -> Option<EmbeddingWitness> {
    embeds_subgroup(k, &k.elements(), h, h_lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build;
    use crate::lattice::all_subgroups;
    use crate::limits::Limits;
    use crate::spec::parse_spec;

    fn grp(s: &str) -> FiniteGroup {
        build(&parse_spec(s).unwrap(), &Limits::default()).unwrap()
    }

    fn lat(g: &FiniteGroup) -> SubgroupLattice {
        all_subgroups(g, &Limits::default()).unwrap()
    }

    /// Tries every bijection (Heap's algorithm).
    fn exhaustive_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
        let n = g.order();
        if n != h.order() {
            return false;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let is_hom = |p: &[usize]| (0..n).all(|a| (0..n).all(|b| p[g.mul(a, b)] == h.mul(p[a], p[b])));
        let mut c = vec![0; n];
        if is_hom(&perm) {
            return true;
        }
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i)
                } else {
                    perm.swap(c[i], i)
                }
                if is_hom(&perm) {
                    return true;
                }
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        false
    }

    #[test]
    fn spectrum_examples() {
        assert_eq!(order_spectrum(&grp("C4")).0, BTreeMap::from([(1, 1), (2, 1), (4, 2)]));
        assert_eq!(order_spectrum(&grp("C2^2")).0, BTreeMap::from([(1, 1), (2, 3)]));
        assert_eq!(order_spectrum(&grp("D5")).0, BTreeMap::from([(1, 1), (2, 5), (5, 4)]));
    }

    #[test]
    fn isomorphism_examples() {
        let w = are_isomorphic(&grp("C6"), &grp("C2 x C3")).unwrap();
        assert!(w.verify(&grp("C6"), &grp("C2 x C3")));
        assert!(are_isomorphic(&grp("C4"), &grp("C2^2")).is_none());
        let d3 = grp("D3");
        let s3 = grp("Perm[(1 2 3);(1 2)]");
        let w = are_isomorphic(&d3, &s3).unwrap();
        assert!(w.verify(&d3, &s3));
        assert!(exhaustive_isomorphic(&d3, &s3));
        assert!(are_isomorphic(&grp("SD(5,2)"), &grp("D5")).is_some());
        assert!(are_isomorphic(&grp("SD(3,2)"), &grp("D3")).is_some());
        assert!(are_isomorphic(&grp("D4"), &grp("Q8")).is_none());
    }

    #[test]
    fn isomorphism_agrees_with_exhaustive_scan() {
        let small = [
            "C1",
            "C2",
            "C3",
            "C4",
            "C2^2",
            "C5",
            "C6",
            "D3",
            "C7",
            "C8",
            "C4 x C2",
            "C2^3",
            "D4",
            "Q8",
            "Perm[(1 2)(3 4);(1 3)(2 4)]",
            "Perm[(1 2 3 4)]",
        ];
        let groups: Vec<FiniteGroup> = small.iter().map(|s| grp(s)).collect();
        for (i, g) in groups.iter().enumerate() {
            assert!(are_isomorphic(g, g).is_some(), "{} reflexive", small[i]);
            for (j, h) in groups.iter().enumerate() {
                let fast = are_isomorphic(g, h);
                assert_eq!(
                    fast.is_some(),
                    exhaustive_isomorphic(g, h),
                    "{} vs {}",
                    small[i],
                    small[j]
                );
                assert_eq!(fast.is_some(), are_isomorphic(h, g).is_some(), "symmetry");
                if let Some(w) = fast {
                    assert!(w.verify(g, h));
                }
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let q8 = grp("Q8");
        let lq = lat(&q8);
        let w = embeds(&grp("C2"), &q8, &lq).unwrap();
        let involutions: Vec<usize> = (0..8).filter(|&a| q8.element_order(a) == 2).collect();
        assert_eq!(w.image, vec![0, involutions[0]]);
        assert_eq!(involutions.len(), 1);
        assert!(embeds(&grp("C2^2"), &q8, &lq).is_none());
        for h in ["C1", "C5", "Q8", "D6"] {
            let h = grp(h);
            assert!(embeds(&grp("C1"), &h, &lat(&h)).is_some());
        }
    }

    #[test]
    fn embedding_implies_spectrum_and_divisibility() {
        let names = [
            "C1", "C2", "C4", "C2^2", "D4", "Q8", "C4 x C2", "C2^3", "D3", "C6", "D6", "Q16", "D4 x C2",
        ];
        let groups: Vec<FiniteGroup> = names.iter().map(|s| grp(s)).collect();
        let lattices: Vec<SubgroupLattice> = groups.iter().map(lat).collect();
        let n = groups.len();
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if let Some(w) = embeds(&groups[i], &groups[j], &lattices[j]) {
                    assert!(w.verify(&groups[i], &groups[j]));
                    assert!(spectrum_dominates(&groups[i], &groups[j]));
                    assert_eq!(groups[j].order() % groups[i].order(), 0);
                    rel[i][j] = true;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if rel[a][b] && rel[b][c] {
                        assert!(rel[a][c], "{} -> {} -> {}", names[a], names[b], names[c]);
                    }
                }
            }
        }
    }

    #[test]
    fn domination_examples() {
        assert!(spectrum_dominates(&grp("C2^2"), &grp("C2")));
        assert!(!spectrum_dominates(&grp("C4"), &grp("C2^2")));
        assert!(spectrum_dominates(&grp("C3^2"), &grp("C9")));
    }

    #[test]
    fn witness_rejects_broken_maps() {
        let c4 = grp("C4");
        let good = EmbeddingWitness {
            source: vec![0, 1, 2, 3],
            image: vec![0, 3, 2, 1],
        };
        assert!(good.verify(&c4, &c4));
        let not_hom = EmbeddingWitness {
            source: vec![0, 1, 2, 3],
            image: vec![0, 2, 1, 3],
        };
        assert!(!not_hom.verify(&c4, &c4));
        let not_injective = EmbeddingWitness {
            source: vec![0, 2],
            image: vec![0, 0],
        };
        assert!(!not_injective.verify(&c4, &c4));
    }
}
