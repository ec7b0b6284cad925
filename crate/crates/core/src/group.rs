//! Finite groups as validated Cayley tables, and constructors for the
//! supported families.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::mask::Mask;
use crate::spec::{Cycles, GroupSpec};

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<usize>,
    elem_order: Vec<usize>,
    label: String,
}

impl FiniteGroup {
    /// Validates `table` (row-major, `order × order`) and derives inverses and
    /// element orders.
    pub fn from_table(order: usize, table: Vec<u32>, label: impl Into<String>, limits: &Limits) -> Result<Self> {
        if order == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if order > limits.max_order {
            return Err(Error::OrderLimitExceeded {
                order,
                limit: limits.max_order,
            });
        }
        if table.len() != order * order {
            return Err(Error::NotAGroup("table is not square".into()));
        }
        if let Some(&bad) = table.iter().find(|&&x| x as usize >= order) {
            return Err(Error::NotAGroup(format!("entry {bad} out of range")));
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::NotAGroup(format!("element 0 is not an identity for {a}")));
            }
        }
        let inverse = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(b, a) == 0)
                    .ok_or_else(|| Error::NotAGroup(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let mut g = FiniteGroup {
            order,
            table,
            inverse,
            elem_order: vec![0; order],
            label: label.into(),
        };
        if order <= limits.exhaustive_assoc_bound {
            g.check_associativity_exhaustive()?;
        } else {
            g.check_associativity_light()?;
        }
        for a in 0..order {
            let mut x = a;
            let mut m = 1;
            while x != 0 {
                x = g.mul(x, a);
                m += 1;
                if m > order {
                    return Err(Error::NotAGroup(format!("element {a} has no finite order")));
                }
            }
            g.elem_order[a] = m;
        }
        Ok(g)
    }

    fn check_associativity_exhaustive(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::NotAGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Light's test: associativity on all `(x, s, y)` with `s` in a set that
    /// generates the table under right multiplication.
    fn check_associativity_light(&self) -> Result<()> {
        let n = self.order;
        let mut reached = Mask::singleton(0);
        let mut gens = Vec::new();
        while reached.len() < n {
            let s = (0..n).find(|&x| !reached.contains(x)).expect("unreached element");
            gens.push(s);
            let mut queue: VecDeque<usize> = reached.iter().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if !reached.contains(y) {
                        reached.insert(y);
                        queue.push_back(y);
                    }
                }
            }
        }
        for &s in &gens {
            for x in 0..n {
                let xs = self.mul(x, s);
                for y in 0..n {
                    if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                        return Err(Error::NotAGroup(format!("({x}·{s})·{y} ≠ {x}·({s}·{y})")));
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// Least `m ≥ 1` with `a^m` the identity.
    #[inline]
    pub fn element_order(&self, a: usize) -> usize {
        self.elem_order[a]
    }

    pub fn element_orders(&self) -> &[usize] {
        &self.elem_order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = label.into();
    }

    pub fn elements(&self) -> Mask {
        Mask::full(self.order)
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        let mut x = 0;
        for _ in 0..e % self.elem_order[a] {
            x = self.mul(x, a);
        }
        x
    }

    pub fn is_abelian(&self) -> bool {
        self.is_abelian_on(&self.elements())
    }

    pub fn is_abelian_on(&self, members: &Mask) -> bool {
        let v = members.to_vec();
        v.iter()
            .enumerate()
            .all(|(i, &a)| v[i + 1..].iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Elements of the cyclic subgroup generated by `a`.
    pub fn cyclic_mask(&self, a: usize) -> Mask {
        let mut m = Mask::singleton(0);
        let mut x = a;
        while x != 0 {
            m.insert(x);
            x = self.mul(x, a);
        }
        m
    }

    pub fn is_cyclic(&self) -> bool {
        self.elem_order.contains(&self.order)
    }

    /// Counts of element orders over `members`.
    pub fn spectrum_on(&self, members: &Mask) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for a in members.iter() {
            *m.entry(self.elem_order[a]).or_insert(0) += 1;
        }
        m
    }

    /// Re-indexes the subgroup `members` as a standalone group. Returns it with
    /// the list of parent indices, so that element `i` of the result is
    /// `parents[i]`.
    pub fn induced(&self, members: &Mask, label: impl Into<String>) -> (FiniteGroup, Vec<usize>) {
        let parents = members.to_vec();
        debug_assert_eq!(parents.first(), Some(&0));
        let mut local = HashMap::with_capacity(parents.len());
        for (i, &p) in parents.iter().enumerate() {
            local.insert(p, i);
        }
        let n = parents.len();
        let mut table = Vec::with_capacity(n * n);
        let mut inverse = Vec::with_capacity(n);
        let mut elem_order = Vec::with_capacity(n);
        for &a in &parents {
            for &b in &parents {
                table.push(local[&self.mul(a, b)] as u32);
            }
            inverse.push(local[&self.inv(a)]);
            elem_order.push(self.elem_order[a]);
        }
        let g = FiniteGroup {
            order: n,
            table,
            inverse,
            elem_order,
            label: label.into(),
        };
        (g, parents)
    }

    /// Checks every structural invariant of the table from scratch.
    pub fn verify(&self) -> Result<()> {
        let limits = Limits {
            max_order: usize::MAX,
            exhaustive_assoc_bound: usize::MAX,
            ..Limits::default()
        };
        let rebuilt = FiniteGroup::from_table(self.order, self.table.clone(), self.label.clone(), &limits)?;
        if rebuilt.inverse != self.inverse || rebuilt.elem_order != self.elem_order {
            return Err(Error::NotAGroup("cached inverses or orders are stale".into()));
        }
        Ok(())
    }
}

fn table_from<F: Fn(usize, usize) -> usize>(n: usize, f: F) -> Vec<u32> {
    let mut t = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            t.push(f(a, b) as u32);
        }
    }
    t
}

fn check_order(order: usize, limits: &Limits) -> Result<()> {
    if order > limits.max_order {
        Err(Error::OrderLimitExceeded {
            order,
            limit: limits.max_order,
        })
    } else {
        Ok(())
    }
}

/// Builds the group a spec denotes.
pub fn build(spec: &GroupSpec, limits: &Limits) -> Result<FiniteGroup> {
    spec.validate()?;
    if let Some(order) = spec.predicted_order() {
        check_order(order, limits)?;
    }
    let mut g = build_node(spec, limits)?;
    if let Some(order) = spec.predicted_order() {
        if g.order() != order {
            return Err(Error::NotAGroup(format!(
                "{spec} realized order {} instead of {order}",
                g.order()
            )));
        }
    }
    g.set_label(spec.to_string());
    Ok(g)
}

fn build_node(spec: &GroupSpec, limits: &Limits) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic(n) => cyclic(*n, limits),
        GroupSpec::Dihedral(n) => dihedral(*n, limits),
        GroupSpec::GeneralizedQuaternion(m) => generalized_quaternion(*m, limits),
        GroupSpec::SemidirectPQ { q, p } => build_semidirect_pq(*q, *p, limits),
        GroupSpec::Product(l, r) => {
            let l = build_node(l, limits)?;
            let r = build_node(r, limits)?;
            direct_product(&l, &r, limits)
        }
        GroupSpec::Power(b, e) => {
            let base = build_node(b, limits)?;
            let mut acc = base.clone();
            for _ in 1..*e {
                acc = direct_product(&acc, &base, limits)?;
            }
            Ok(acc)
        }
        GroupSpec::PermGroup(gens) => {
            let degree = GroupSpec::perm_degree(gens);
            let perms = gens
                .iter()
                .map(|c| Permutation::from_cycles(c, degree))
                .collect::<Result<Vec<_>>>()?;
            from_permutation_generators(&perms, limits)
        }
    }
}

pub fn cyclic(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidSpec("cyclic order must be positive".into()));
    }
    check_order(n, limits)?;
    FiniteGroup::from_table(n, table_from(n, |a, b| (a + b) % n), format!("C{n}"), limits)
}

/// `D_n` of order `2n`. Element `j·n + i` is `r^i a^j`.
pub fn dihedral(n: usize, limits: &Limits) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidSpec(format!("D{n}: parameter must be at least 3")));
    }
    check_order(2 * n, limits)?;
    let t = table_from(2 * n, |x, y| {
        let (i, j) = (x % n, x / n);
        let (k, l) = (y % n, y / n);
        let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
        ((j + l) % 2) * n + rot
    });
    FiniteGroup::from_table(2 * n, t, format!("D{n}"), limits)
}

/// Generalized quaternion group of order `m`:
/// `⟨x, y | x^{m/2} = 1, y² = x^{m/4}, y x y⁻¹ = x⁻¹⟩`. Element `j·(m/2) + i`
/// is `x^i y^j`.
pub fn generalized_quaternion(m: usize, limits: &Limits) -> Result<FiniteGroup> {
    if m < 8 || !m.is_power_of_two() {
        return Err(Error::InvalidSpec(format!(
            "Q{m}: order must be a power of two, at least 8"
        )));
    }
    check_order(m, limits)?;
    let n = m / 2;
    let t = table_from(m, |a, b| {
        let (i, j) = (a % n, a / n);
        let (k, l) = (b % n, b / n);
        let mut e = if j == 0 { i + k } else { i + n - k };
        if j == 1 && l == 1 {
            e += n / 2;
        }
        ((j + l) % 2) * n + e % n
    });
    FiniteGroup::from_table(m, t, format!("Q{m}"), limits)
}

/// Non-abelian `C_q ⋊ C_p`. Element `j·q + i` is the pair `(i, j)` with
/// `(i, j)(i', j') = (i + r^j i', j + j')`, `r` the least integer above 1
/// with `r^p ≡ 1 (mod q)`.
pub fn build_semidirect_pq(q: usize, p: usize, limits: &Limits) -> Result<FiniteGroup> {
    GroupSpec::SemidirectPQ { q, p }.validate()?;
    check_order(p * q, limits)?;
    let r = (2..q)
        .find(|&r| mod_pow(r, p, q) == 1)
        .ok_or_else(|| Error::InvalidSpec(format!("SD({q},{p}): no nontrivial action")))?;
    let rpow: Vec<usize> = (0..p).map(|j| mod_pow(r, j, q)).collect();
    let t = table_from(p * q, |a, b| {
        let (i, j) = (a % q, a / q);
        let (k, l) = (b % q, b / q);
        ((j + l) % p) * q + (i + rpow[j] * k) % q
    });
    FiniteGroup::from_table(p * q, t, format!("SD({q},{p})"), limits)
}

fn mod_pow(base: usize, exp: usize, m: usize) -> usize {
    let mut acc = 1 % m;
    for _ in 0..exp {
        acc = acc * base % m;
    }
    acc
}

/// `left × right`; element `a·|right| + b` is the pair `(a, b)`.
pub fn direct_product(left: &FiniteGroup, right: &FiniteGroup, limits: &Limits) -> Result<FiniteGroup> {
    let (n, m) = (left.order(), right.order());
    check_order(n.saturating_mul(m), limits)?;
    let t = table_from(n * m, |x, y| left.mul(x / m, y / m) * m + right.mul(x % m, y % m));
    FiniteGroup::from_table(n * m, t, format!("{} x {}", left.label(), right.label()), limits)
}

/// A permutation of `0..degree`, stored as images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    /// Builds from 1-based cycles on `1..=degree`.
    pub fn from_cycles(cycles: &Cycles, degree: usize) -> Result<Self> {
        let mut img: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        for c in cycles {
            for (k, &pt) in c.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(Error::InvalidSpec(format!("point {pt} outside 1..={degree}")));
                }
                if std::mem::replace(&mut seen[pt - 1], true) {
                    return Err(Error::InvalidSpec(format!("point {pt} repeated")));
                }
                img[pt - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        Ok(Permutation(img))
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidSpec("images do not form a bijection".into()));
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    fn padded(&self, degree: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.0.len()..degree);
        Permutation(v)
    }
}

/// Breadth-first closure of the generators. Element 0 is the identity;
/// the rest are numbered in discovery order, multiplying on the right by
/// each generator in turn. Products compose left to right.
pub fn from_permutation_generators(gens: &[Permutation], limits: &Limits) -> Result<FiniteGroup> {
    let degree = gens.iter().map(Permutation::degree).max().unwrap_or(0);
    let gens: Vec<Permutation> = gens.iter().map(|g| g.padded(degree)).collect();
    let mut elems = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    index.insert(elems[0].clone(), 0);
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        head += 1;
        for g in &gens {
            let y = x.then(g);
            if !index.contains_key(&y) {
                if elems.len() >= limits.max_order {
                    return Err(Error::OrderLimitExceeded {
                        order: elems.len() + 1,
                        limit: limits.max_order,
                    });
                }
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
    }
    let n = elems.len();
    let t = table_from(n, |a, b| index[&elems[a].then(&elems[b])]);
    FiniteGroup::from_table(n, t, format!("Perm(degree {degree}, order {n})"), limits)
}
