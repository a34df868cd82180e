//! Dense multiplication-table view of a finite group.
//!
//! Every finite backend (Cayley table, finite abelian, modular Heisenberg)
//! can be enumerated into a [`FiniteGroup`], on which the structural
//! algorithms and the graph explorer operate with `u32` element indices.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::groups::GroupElement;

/// Largest order for which a dense table is built.
pub const MAX_TABLE_ORDER: usize = 4096;

/// A set of element indices stored as a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementSet {
    bits: Vec<u64>,
    len: usize,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            bits: vec![0; universe.div_ceil(64)],
            len: universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = ElementSet::empty(universe);
        for i in 0..universe {
            s.insert(i as u32);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = u32>) -> Self {
        let mut s = ElementSet::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        self.bits[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Returns `true` if the element was not already present.
    #[inline]
    pub fn insert(&mut self, i: u32) -> bool {
        let w = &mut self.bits[(i / 64) as usize];
        let mask = 1u64 << (i % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len as u32).filter(move |&i| self.contains(i))
    }
}

#[derive(Debug)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<u32>,
    identity: u32,
    inverses: Vec<u32>,
    generators: Vec<u32>,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
}

impl FiniteGroup {
    /// Validates a raw multiplication table: identity, inverses and
    /// associativity over all triples.
    pub fn from_table(
        labels: Vec<String>,
        rows: &[Vec<usize>],
        generators: &[String],
    ) -> Result<Self> {
        let n = labels.len();
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate element label {l:?}")));
            }
        }
        let table: Vec<u32> = rows.iter().flatten().map(|&v| v as u32).collect();
        let at = |a: usize, b: usize| table[a * n + b] as usize;

        let identity = (0..n)
            .find(|&e| (0..n).all(|a| at(e, a) == a && at(a, e) == a))
            .ok_or_else(|| Error::Axiom("no two-sided identity element".into()))?;

        let mut inverses = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::Axiom(format!("element {:?} has no inverse", labels[a])))?;
            inverses[a] = b as u32;
        }

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::Axiom(format!(
                            "associativity fails for ({:?}, {:?}, {:?})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }

        let generators = generators
            .iter()
            .map(|g| {
                seen.get(g).map(|&i| i as u32).ok_or_else(|| {
                    Error::InvalidSpec(format!("generator {g:?} is not an element label"))
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let elements: Vec<GroupElement> = (0..n as u32).map(GroupElement::Table).collect();
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        Ok(FiniteGroup {
            labels,
            table,
            identity: identity as u32,
            inverses,
            generators,
            elements,
            index,
        })
    }

    /// Enumerated view of a backend: `elements[0]` must be the identity.
    pub(crate) fn from_elements(
        elements: Vec<GroupElement>,
        labels: Vec<String>,
        generators: &[GroupElement],
        mul: impl Fn(&GroupElement, &GroupElement) -> GroupElement,
    ) -> Result<Self> {
        let n = elements.len();
        if n > MAX_TABLE_ORDER {
            return Err(Error::BudgetExceeded {
                what: "multiplication table order".into(),
                required: n as u64,
                limit: MAX_TABLE_ORDER as u64,
            });
        }
        let index: HashMap<GroupElement, u32> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i as u32))
            .collect();
        let mut table = vec![0u32; n * n];
        for (a, ea) in elements.iter().enumerate() {
            for (b, eb) in elements.iter().enumerate() {
                table[a * n + b] = index[&mul(ea, eb)];
            }
        }
        let identity = 0u32;
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            inverses[a] = (0..n as u32)
                .find(|&b| table[a * n + b as usize] == identity)
                .expect("enumerated group has inverses");
        }
        let generators = generators.iter().map(|g| index[g]).collect();
        Ok(FiniteGroup {
            labels,
            table,
            identity,
            inverses,
            generators,
            elements,
            index,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.labels.len() + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    #[inline]
    pub fn identity(&self) -> u32 {
        self.identity
    }

    /// `s^-1 a s`.
    #[inline]
    pub fn conjugate(&self, a: u32, s: u32) -> u32 {
        self.mul(self.mul(self.inv(s), a), s)
    }

    /// `a^-1 b^-1 a b`.
    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut acc = self.identity;
        for _ in 0..e.unsigned_abs() % self.order() as u64 {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn label(&self, a: u32) -> &str {
        &self.labels[a as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element(&self, a: u32) -> &GroupElement {
        &self.elements[a as usize]
    }

    pub fn index_of(&self, e: &GroupElement) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn index_of_label(&self, label: &str) -> Option<u32> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u32)
    }

    /// The distinguished generators of the backend.
    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    /// A generating set: the distinguished generators when they suffice,
    /// otherwise every element.
    pub fn generating_set(&self) -> Vec<u32> {
        if self.closure(&self.generators).count() == self.order() {
            self.generators.clone()
        } else {
            (0..self.order() as u32).collect()
        }
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.generating_set();
        g.iter()
            .all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> ElementSet {
        let mut set = ElementSet::empty(self.order());
        set.insert(self.identity);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if set.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        set
    }

    /// Normal closure of `gens`: the subgroup generated by all conjugates.
    pub fn normal_closure(&self, gens: &[u32]) -> ElementSet {
        let conj_by = self.generating_set();
        let mut set = self.closure(gens);
        loop {
            let mut extra = Vec::new();
            for a in set.iter() {
                for &s in &conj_by {
                    let c = self.conjugate(a, s);
                    if !set.contains(c) {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return set;
            }
            let mut all: Vec<u32> = set.iter().collect();
            all.extend(extra);
            set = self.closure(&all);
        }
    }

    pub fn is_normal(&self, subgroup: &ElementSet) -> bool {
        let conj_by = self.generating_set();
        subgroup.iter().all(|a| {
            conj_by
                .iter()
                .all(|&s| subgroup.contains(self.conjugate(a, s)))
        })
    }

    /// Derived subgroup: normal closure of commutators of generator pairs.
    pub fn derived_subgroup(&self) -> ElementSet {
        let gens = self.generating_set();
        let mut comms = Vec::new();
        for &a in &gens {
            for &b in &gens {
                comms.push(self.commutator(a, b));
            }
        }
        self.normal_closure(&comms)
    }

    /// `[A, B]` for subgroups given as sets: subgroup generated by commutators
    /// of elements of `a` with generators of the group, assuming `a` normal.
    pub fn commutator_with_group(&self, a: &ElementSet) -> ElementSet {
        let gens = self.generating_set();
        let mut comms = Vec::new();
        for x in a.iter() {
            for &g in &gens {
                comms.push(self.commutator(x, g));
            }
        }
        self.normal_closure(&comms)
    }

    /// Coset ids of `normal`, numbered in order of least element index, plus
    /// one representative per coset.
    pub fn cosets(&self, normal: &ElementSet) -> (Vec<u32>, Vec<u32>) {
        let n = self.order();
        let mut coset = vec![u32::MAX; n];
        let mut reps = Vec::new();
        for a in 0..n as u32 {
            if coset[a as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(a);
            for h in normal.iter() {
                coset[self.mul(a, h) as usize] = id;
            }
        }
        (coset, reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3_rows() -> Vec<Vec<usize>> {
        (0..3)
            .map(|a| (0..3).map(|b| (a + b) % 3).collect())
            .collect()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn validates_cyclic_table() {
        let g = FiniteGroup::from_table(labels(3), &z3_rows(), &["1".into()]).unwrap();
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 2);
        assert_eq!(g.element_order(1), 3);
        assert_eq!(g.closure(&[1]).count(), 3);
        assert!(g.is_abelian());
        assert_eq!(g.pow(1, -4), 2);
    }

    #[test]
    fn rejects_non_associative_table() {
        // Identity 0, every element self-inverse, but 1*2=2*1=0 breaks associativity.
        let rows = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        let err = FiniteGroup::from_table(labels(3), &rows, &[]).unwrap_err();
        assert!(
            matches!(err, Error::Axiom(ref m) if m.contains("associativity")),
            "{err}"
        );
    }

    #[test]
    fn rejects_missing_identity_and_unknown_generator() {
        let rows = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(
            FiniteGroup::from_table(vec!["a".into(), "a".into()], &rows, &[]),
            Err(Error::InvalidSpec(_))
        ));
        let rows = vec![vec![1, 1], vec![1, 1]];
        assert!(matches!(
            FiniteGroup::from_table(labels(2), &rows, &[]),
            Err(Error::Axiom(_))
        ));
        assert!(matches!(
            FiniteGroup::from_table(labels(3), &z3_rows(), &["7".into()]),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn element_set_operations() {
        let mut s = ElementSet::empty(130);
        assert!(s.insert(129));
        assert!(!s.insert(129));
        s.insert(3);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 129]);
        let f = ElementSet::full(130);
        assert!(s.is_subset(&f));
        assert!(!f.is_subset(&s));
        assert_eq!(f.intersect(&s), s);
    }
}
