//! Exact minimum set cover with certificates.
//!
//! The solver runs a depth-first branch-and-bound seeded with a greedy upper
//! bound: it branches on the uncovered point with the fewest covering
//! candidates, and prunes with `⌈uncovered / largest useful candidate⌉`. Among
//! all minimum covers it returns the lexicographically least one (as a sorted
//! list of candidate indices), found by fixing the certificate one position at
//! a time behind a feasibility search.

use crate::error::{Budget, Error, Result};
use crate::extnat::ExtNat;
use crate::limits::Limits;
use crate::mask::{Mask, MASK_CAPACITY};

/// A set-cover problem over points `0..universe_size`.
///
/// Construction drops empty, duplicate and dominated candidates (those
/// strictly contained in another). Surviving candidates keep their input
/// order; `source()` maps them back to input positions.
#[derive(Clone, Debug)]
pub struct CoverInstance {
    universe_size: usize,
    candidates: Vec<Mask>,
    source: Vec<usize>,
    feasible: bool,
}

impl CoverInstance {
    pub fn new(universe_size: usize, sets: Vec<Mask>) -> Result<CoverInstance> {
        if universe_size > MASK_CAPACITY {
            return Err(Error::UniverseTooLarge(universe_size));
        }
        let universe = Mask::full(universe_size);
        let sets: Vec<Mask> = sets.iter().map(|s| s.intersection(&universe)).collect();
        let mut candidates = Vec::new();
        let mut source = Vec::new();
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                continue;
            }
            let dominated = sets
                .iter()
                .enumerate()
                .any(|(j, t)| j != i && s.is_subset(t) && (s != t || j < i));
            if !dominated {
                candidates.push(*s);
                source.push(i);
            }
        }
        let covered = candidates.iter().fold(Mask::EMPTY, |acc, c| acc.union(c));
        Ok(CoverInstance {
            universe_size,
            feasible: covered == universe,
            candidates,
            source,
        })
    }

    pub fn from_lists(universe_size: usize, sets: &[Vec<usize>]) -> Result<CoverInstance> {
        if let Some(&p) = sets.iter().flatten().find(|&&p| p >= universe_size) {
            return Err(Error::InvalidPartition(format!("point {p} outside the universe")));
        }
        Self::new(
            universe_size,
            sets.iter().map(|s| Mask::from_indices(s.iter().copied())).collect(),
        )
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn universe(&self) -> Mask {
        Mask::full(self.universe_size)
    }

    pub fn candidates(&self) -> &[Mask] {
        &self.candidates
    }

    /// Input position of each surviving candidate.
    pub fn source(&self) -> &[usize] {
        &self.source
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    /// The same instance with candidates sorted by their ascending point lists.
    pub fn canonicalized(&self) -> CoverInstance {
        let mut order: Vec<usize> = (0..self.candidates.len()).collect();
        order.sort_by_key(|&i| self.candidates[i].to_vec());
        CoverInstance {
            universe_size: self.universe_size,
            candidates: order.iter().map(|&i| self.candidates[i]).collect(),
            source: order.iter().map(|&i| self.source[i]).collect(),
            feasible: self.feasible,
        }
    }
}

/// A minimum cover value and, when finite, the candidate indices achieving it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    pub value: ExtNat,
    /// Ascending indices into [`CoverInstance::candidates`].
    pub certificate: Vec<usize>,
}

impl CoverSolution {
    pub fn sets<'a>(&'a self, inst: &'a CoverInstance) -> impl Iterator<Item = &'a Mask> + 'a {
        self.certificate.iter().map(move |&i| &inst.candidates[i])
    }
}

struct Solver<'a> {
    cands: &'a [Mask],
    covering: Vec<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl Solver<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::BudgetExceeded {
                what: Budget::SolverNodes,
                limit: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn lower_bound(&self, uncovered: &Mask, min_index: usize) -> Option<usize> {
        let best = self.cands[min_index..]
            .iter()
            .map(|c| c.intersection_len(uncovered))
            .max()
            .unwrap_or(0);
        (best > 0).then(|| uncovered.len().div_ceil(best))
    }

    /// Uncovered point with the fewest candidates at or after `min_index`.
    fn branch_point(&self, uncovered: &Mask, min_index: usize) -> (usize, usize) {
        uncovered
            .iter()
            .map(|p| {
                let n = self.covering[p].iter().filter(|&&c| c >= min_index).count();
                (n, p)
            })
            .min()
            .expect("uncovered is nonempty")
    }

    fn greedy(&self, universe: Mask) -> Vec<usize> {
        let mut uncovered = universe;
        let mut chosen = Vec::new();
        while !uncovered.is_empty() {
            let (i, _) = self
                .cands
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.intersection_len(&uncovered)))
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .expect("feasible instance");
            chosen.push(i);
            uncovered = uncovered.difference(&self.cands[i]);
        }
        chosen.sort_unstable();
        chosen
    }

    fn minimize(&mut self, uncovered: Mask, chosen: &mut Vec<usize>, best: &mut usize) -> Result<()> {
        self.tick()?;
        if uncovered.is_empty() {
            *best = (*best).min(chosen.len());
            return Ok(());
        }
        let Some(lb) = self.lower_bound(&uncovered, 0) else {
            return Ok(());
        };
        if chosen.len() + lb >= *best {
            return Ok(());
        }
        let (_, p) = self.branch_point(&uncovered, 0);
        for k in 0..self.covering[p].len() {
            let c = self.covering[p][k];
            chosen.push(c);
            self.minimize(uncovered.difference(&self.cands[c]), chosen, best)?;
            chosen.pop();
        }
        Ok(())
    }

    /// Can `uncovered` be covered by at most `slots` candidates with index at
    /// least `min_index`?
    fn feasible(&mut self, uncovered: Mask, min_index: usize, slots: usize) -> Result<bool> {
        self.tick()?;
        if uncovered.is_empty() {
            return Ok(true);
        }
        if slots == 0 {
            return Ok(false);
        }
        match self.lower_bound(&uncovered, min_index) {
            Some(lb) if lb <= slots => {}
            _ => return Ok(false),
        }
        let (count, p) = self.branch_point(&uncovered, min_index);
        if count == 0 {
            return Ok(false);
        }
        for k in 0..self.covering[p].len() {
            let c = self.covering[p][k];
            if c < min_index {
                continue;
            }
            if self.feasible(uncovered.difference(&self.cands[c]), min_index, slots - 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Exact minimum cover, with the lexicographically least optimal certificate.
pub fn min_cover(inst: &CoverInstance, limits: &Limits) -> Result<CoverSolution> {
    if inst.universe_size == 0 {
        return Ok(CoverSolution {
            value: ExtNat::Finite(0),
            certificate: vec![],
        });
    }
    if !inst.feasible {
        return Ok(CoverSolution {
            value: ExtNat::Infinite,
            certificate: vec![],
        });
    }
    let mut covering = vec![Vec::new(); inst.universe_size];
    for (i, c) in inst.candidates.iter().enumerate() {
        for p in c.iter() {
            covering[p].push(i);
        }
    }
    let mut solver = Solver {
        cands: &inst.candidates,
        covering,
        nodes: 0,
        budget: limits.solver_nodes,
    };
    let universe = inst.universe();
    let greedy = solver.greedy(universe);
    let mut best = greedy.len();
    solver.minimize(universe, &mut Vec::new(), &mut best)?;

    let mut certificate = Vec::with_capacity(best);
    let mut uncovered = universe;
    let mut next = 0;
    for pos in 0..best {
        let remaining = best - pos - 1;
        let mut picked = None;
        for c in next..inst.candidates.len() {
            let rest = uncovered.difference(&inst.candidates[c]);
            if rest != uncovered && solver.feasible(rest, c + 1, remaining)? {
                picked = Some(c);
                break;
            }
        }
        let c = picked.expect("an optimal cover extends every feasible prefix");
        certificate.push(c);
        uncovered = uncovered.difference(&inst.candidates[c]);
        next = c + 1;
    }
    debug_assert!(uncovered.is_empty());

    if limits.fault_injection {
        if let Some(extra) = (0..inst.candidates.len()).find(|c| !certificate.contains(c)) {
            certificate.push(extra);
            certificate.sort_unstable();
        }
        return Ok(CoverSolution {
            value: ExtNat::Finite(best as u64 + 1),
            certificate,
        });
    }
    Ok(CoverSolution {
        value: ExtNat::Finite(best as u64),
        certificate,
    })
}

/// Certificate covers the universe, is irredundant, and has `value` members.
pub fn validate_cover(inst: &CoverInstance, sol: &CoverSolution) -> bool {
    let Some(k) = sol.value.finite() else {
        return false;
    };
    if sol.certificate.len() as u64 != k {
        return false;
    }
    if sol.certificate.iter().any(|&i| i >= inst.candidates.len()) {
        return false;
    }
    let mut sorted = sol.certificate.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != sol.certificate.len() {
        return false;
    }
    let sets: Vec<Mask> = sol.sets(inst).copied().collect();
    covers_irredundantly(&inst.universe(), &sets)
}

/// `sets` union to `universe`, and dropping any one of them leaves a point
/// uncovered.
pub fn covers_irredundantly(universe: &Mask, sets: &[Mask]) -> bool {
    let union = sets.iter().fold(Mask::EMPTY, |acc, s| acc.union(s));
    if union != *universe {
        return false;
    }
    (0..sets.len()).all(|i| {
        let others = sets
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Mask::EMPTY, |acc, (_, s)| acc.union(s));
        others != *universe
    })
}

/// `|A₁ ∪ … ∪ A_k|` by the alternating sum of intersection sizes over all
/// nonempty index subsets.
pub fn inclusion_exclusion_cardinality(sets: &[Mask]) -> Result<u64> {
    if sets.len() > 20 {
        return Err(Error::TooManySets(sets.len()));
    }
    fn walk(sets: &[Mask], from: usize, acc: Mask, depth: usize, total: &mut i64) {
        for i in from..sets.len() {
            let next = if depth == 0 {
                sets[i]
            } else {
                acc.intersection(&sets[i])
            };
            let size = next.len() as i64;
            if size == 0 {
                continue;
            }
            // |J| = depth + 1
            if depth.is_multiple_of(2) {
                *total += size;
            } else {
                *total -= size;
            }
            walk(sets, i + 1, next, depth + 1, total);
        }
    }
    let mut total = 0i64;
    walk(sets, 0, Mask::EMPTY, 0, &mut total);
    Ok(total as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lim() -> Limits {
        Limits::default()
    }

    /// Smallest cover by enumerating every candidate subset; ties broken by
    /// the lexicographically least sorted index list.
    fn brute_force(inst: &CoverInstance) -> (ExtNat, Vec<usize>) {
        let m = inst.candidates().len();
        let universe = inst.universe();
        let mut best: Option<Vec<usize>> = None;
        for bits in 0u32..(1 << m) {
            let idx: Vec<usize> = (0..m).filter(|i| bits >> i & 1 == 1).collect();
            let union = idx.iter().fold(Mask::EMPTY, |a, &i| a.union(&inst.candidates()[i]));
            if union != universe {
                continue;
            }
            best = match best {
                Some(b) if (b.len(), &b) <= (idx.len(), &idx) => Some(b),
                _ => Some(idx),
            };
        }
        match best {
            Some(b) => (ExtNat::Finite(b.len() as u64), b),
            None => (ExtNat::Infinite, vec![]),
        }
    }

    #[test]
    fn triangle_instance() {
        let inst = CoverInstance::from_lists(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let sol = min_cover(&inst, &lim()).unwrap();
        assert_eq!(sol.value, ExtNat::Finite(2));
        let sets: Vec<Vec<usize>> = sol.sets(&inst).map(Mask::to_vec).collect();
        assert_eq!(sets, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(brute_force(&inst), (sol.value, sol.certificate.clone()));
        assert!(validate_cover(&inst, &sol));
    }

    #[test]
    fn tiny_instances() {
        let one = CoverInstance::from_lists(1, &[vec![0]]).unwrap();
        assert_eq!(min_cover(&one, &lim()).unwrap().value, ExtNat::Finite(1));
        let gap = CoverInstance::from_lists(2, &[vec![0]]).unwrap();
        assert!(!gap.is_feasible());
        assert_eq!(min_cover(&gap, &lim()).unwrap().value, ExtNat::Infinite);
    }

    #[test]
    fn dominated_candidates_are_dropped() {
        let inst = CoverInstance::from_lists(4, &[vec![0], vec![0, 1], vec![2, 3], vec![0, 1], vec![]]).unwrap();
        assert_eq!(inst.source(), &[1, 2]);
    }

    #[test]
    fn validator_rejects_broken_certificates() {
        let inst = CoverInstance::from_lists(4, &[vec![0, 1], vec![2], vec![3], vec![1, 2]]).unwrap();
        let sol = min_cover(&inst, &lim()).unwrap();
        assert_eq!(sol.value, ExtNat::Finite(3));
        assert!(validate_cover(&inst, &sol));

        let mut short = sol.clone();
        short.certificate.pop();
        short.value = ExtNat::Finite(2);
        assert!(!validate_cover(&inst, &short));

        let padded = CoverSolution {
            value: ExtNat::Finite(4),
            certificate: vec![0, 1, 2, 3],
        };
        assert!(!validate_cover(&inst, &padded));

        let wrong_count = CoverSolution {
            value: ExtNat::Finite(4),
            ..sol
        };
        assert!(!validate_cover(&inst, &wrong_count));
    }

    #[test]
    fn node_budget_is_enforced() {
        let sets: Vec<Vec<usize>> = (0..12).map(|i| vec![i, (i + 1) % 12, (i + 5) % 12]).collect();
        let inst = CoverInstance::from_lists(12, &sets).unwrap();
        let tight = Limits {
            solver_nodes: 3,
            ..lim()
        };
        assert!(matches!(
            min_cover(&inst, &tight),
            Err(Error::BudgetExceeded {
                what: Budget::SolverNodes,
                ..
            })
        ));
    }

    #[test]
    fn fault_injection_breaks_validation() {
        let inst = CoverInstance::from_lists(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let faulty = Limits {
            fault_injection: true,
            ..lim()
        };
        let sol = min_cover(&inst, &faulty).unwrap();
        assert_eq!(sol.value, ExtNat::Finite(3));
        assert!(!validate_cover(&inst, &sol));
    }

    #[test]
    fn inclusion_exclusion_examples() {
        let a = Mask::from_indices([0, 1, 2]);
        assert_eq!(inclusion_exclusion_cardinality(&[a]).unwrap(), 3);
        // the three order-2 subgroups of C2 x C2 as element masks
        let v4 = [
            Mask::from_indices([0, 1]),
            Mask::from_indices([0, 2]),
            Mask::from_indices([0, 3]),
        ];
        assert_eq!(inclusion_exclusion_cardinality(&v4).unwrap(), 4);
        assert_eq!(inclusion_exclusion_cardinality(&[]).unwrap(), 0);
        let many = vec![a; 21];
        assert_eq!(inclusion_exclusion_cardinality(&many), Err(Error::TooManySets(21)));
    }

    fn instance() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
        (1usize..=16).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(prop::collection::vec(0..n, 1..=6), 1..=20),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn matches_exhaustive_search((n, sets) in instance()) {
            let inst = CoverInstance::from_lists(n, &sets).unwrap();
            let sol = min_cover(&inst, &lim()).unwrap();
            let (value, cert) = brute_force(&inst);
            prop_assert_eq!(sol.value, value);
            if value.is_finite() {
                prop_assert_eq!(&sol.certificate, &cert);
                prop_assert!(validate_cover(&inst, &sol));
            }
        }

        #[test]
        fn value_is_permutation_invariant((n, sets) in instance(), seed in any::<u64>()) {
            let mut shuffled = sets.clone();
            let mut s = seed;
            for i in (1..shuffled.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                shuffled.swap(i, (s >> 33) as usize % (i + 1));
            }
            let a = CoverInstance::from_lists(n, &sets).unwrap();
            let b = CoverInstance::from_lists(n, &shuffled).unwrap();
            let sa = min_cover(&a, &lim()).unwrap();
            let sb = min_cover(&b, &lim()).unwrap();
            prop_assert_eq!(sa.value, sb.value);
            let ca = min_cover(&a.canonicalized(), &lim()).unwrap();
            let cb = min_cover(&b.canonicalized(), &lim()).unwrap();
            let sets_a: Vec<Mask> = ca.sets(&a.canonicalized()).copied().collect();
            let sets_b: Vec<Mask> = cb.sets(&b.canonicalized()).copied().collect();
            prop_assert_eq!(sets_a, sets_b);
        }

        #[test]
        fn inclusion_exclusion_matches_union(sets in prop::collection::vec(prop::collection::vec(0usize..40, 0..12), 0..10)) {
            let masks: Vec<Mask> = sets.iter().map(|s| Mask::from_indices(s.iter().copied())).collect();
            let union = masks.iter().fold(Mask::EMPTY, |a, m| a.union(m));
            prop_assert_eq!(inclusion_exclusion_cardinality(&masks).unwrap(), union.len() as u64);
        }
    }
}
