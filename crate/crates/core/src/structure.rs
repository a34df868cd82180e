//! Structural predicates and subobjects of groups: generation, maximal and
//! Frattini subgroups, nilpotency, rank and weight, Schreier generators of
//! the derived subgroup, and words for elements.

use std::collections::{HashSet, VecDeque};

use crate::abelian::{exponent_rows, rows_generate};
use crate::error::{Error, Result};
use crate::groups::{ElementOrder, ElementSet, FiniteGroup, Group, GroupElement, GroupSpec, Tuple};
use crate::words::{evaluate_word, Letter, Word};

/// An explicit subgroup of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: ElementSet,
    pub is_normal: bool,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.count()
    }

    pub fn labels(&self, g: &FiniteGroup) -> Vec<String> {
        self.elements
            .iter()
            .map(|a| g.label(a).to_string())
            .collect()
    }
}

/// Whether the entries of `t` generate `g`.
pub fn generates(g: &Group, t: &Tuple) -> Result<bool> {
    if g.is_table() {
        let f = g.finite()?;
        return Ok(f.closure(&t.indices()?).count() == f.order());
    }
    // Nilpotent backends: generation is detected on the abelianization,
    // since the derived subgroup consists of non-generators.
    let ab = g.abelianization()?;
    let projected = ab.project_tuple(t)?;
    Ok(rows_generate(&ab.form, &exponent_rows(&projected)?))
}

/// Whether the normal closure of the entries of `t` is `g`.
pub fn normally_generates(g: &Group, t: &Tuple) -> Result<bool> {
    if g.is_table() {
        let f = g.finite()?;
        return Ok(f.normal_closure(&t.indices()?).count() == f.order());
    }
    // Every backend other than a raw table is nilpotent, hence in class C,
    // where normal generation and generation agree.
    generates(g, t)
}

fn finite_of(g: &Group) -> Result<&FiniteGroup> {
    g.finite()
}

/// Every subgroup, found by cyclic extension from the trivial subgroup,
/// together with whether it is maximal.
fn subgroup_lattice(f: &FiniteGroup) -> Vec<(ElementSet, bool)> {
    let n = f.order();
    let trivial = f.closure(&[]);
    let mut seen: HashSet<ElementSet> = HashSet::from([trivial.clone()]);
    let mut queue = VecDeque::from([(trivial, Vec::<u32>::new())]);
    let mut out = Vec::new();
    while let Some((h, gens)) = queue.pop_front() {
        let mut covered = h.clone();
        let mut maximal = h.count() < n;
        for b in 0..n as u32 {
            if covered.contains(b) {
                continue;
            }
            // <H, b> depends only on the coset bH.
            for x in h.iter() {
                covered.insert(f.mul(b, x));
            }
            let mut ext_gens = gens.clone();
            ext_gens.push(b);
            let k = f.closure(&ext_gens);
            if k.count() < n {
                maximal = false;
            }
            if seen.insert(k.clone()) {
                queue.push_back((k, ext_gens));
            }
        }
        out.push((h, maximal));
    }
    out
}

/// All maximal proper subgroups, ordered by their sorted element lists.
pub fn maximal_subgroups(g: &Group) -> Result<Vec<Subgroup>> {
    let f = finite_of(g)?;
    let mut out: Vec<Subgroup> = subgroup_lattice(f)
        .into_iter()
        .filter(|(_, maximal)| *maximal)
        .map(|(h, _)| Subgroup {
            is_normal: f.is_normal(&h),
            elements: h,
        })
        .collect();
    out.sort_by_key(|s| s.elements.iter().collect::<Vec<_>>());
    Ok(out)
}

/// Intersection of the maximal subgroups (the whole group if it is trivial).
pub fn frattini(g: &Group) -> Result<Subgroup> {
    let f = finite_of(g)?;
    let maximals = maximal_subgroups(g)?;
    let elements = maximals.iter().fold(ElementSet::full(f.order()), |acc, m| {
        acc.intersect(&m.elements)
    });
    Ok(Subgroup {
        elements,
        is_normal: true,
    })
}

/// Lower central series reaches the trivial group.
pub fn is_nilpotent(g: &Group) -> Result<bool> {
    let f = finite_of(g)?;
    let mut cur = ElementSet::full(f.order());
    loop {
        if cur.count() == 1 {
            return Ok(true);
        }
        let next = f.commutator_with_group(&cur);
        if next == cur {
            return Ok(false);
        }
        cur = next;
    }
}

/// Every maximal subgroup is normal.
pub fn is_class_c(g: &Group) -> Result<bool> {
    Ok(maximal_subgroups(g)?.iter().all(|m| m.is_normal))
}

fn exists_tuple(f: &FiniteGroup, n: usize, pred: &dyn Fn(&[u32]) -> bool) -> bool {
    // Multisets suffice: both properties ignore order and repetition.
    let order = f.order() as u32;
    let mut idx = vec![0u32; n];
    loop {
        if pred(&idx) {
            return true;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            if idx[pos] + 1 < order {
                idx[pos] += 1;
                let v = idx[pos];
                for slot in idx[pos + 1..].iter_mut() {
                    *slot = v;
                }
                break;
            }
        }
    }
}

/// `(rank, weight)`: the least sizes of generating and normally generating
/// tuples.
pub fn rank_and_weight(g: &Group) -> Result<(usize, usize)> {
    let f = finite_of(g)?;
    let n = f.order();
    if n == 1 {
        return Ok((0, 0));
    }
    // Both are bounded below by the rank of the abelianization.
    let start = g.abelianization()?.form.rank().max(1);
    let weight = (start..)
        .find(|&k| exists_tuple(f, k, &|t| f.normal_closure(t).count() == n))
        .expect("the whole group normally generates");
    let rank = (start.max(weight)..)
        .find(|&k| exists_tuple(f, k, &|t| f.closure(t).count() == n))
        .expect("the whole group generates");
    Ok((rank, weight))
}

/// Exponent ranges for the Schreier generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchreierRange {
    /// `n_1 in [0, ord(pi(x)))`, `n_2 in [0, ord(pi(y)))` with orders in the
    /// abelianization.
    Abelianized,
    /// `[0, ord(x))` and `[0, ord(y))` with orders in the group.
    Full,
    /// `(-ord(x), ord(x))` and `(-ord(y), ord(y))`.
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierGenerator {
    pub element: GroupElement,
    pub n1: i64,
    pub n2: i64,
    /// Index of the appended base letter (1 for `x`).
    pub l: usize,
}

#[derive(Clone, Debug)]
pub struct SchreierSet {
    pub x: GroupElement,
    pub y: GroupElement,
    pub range: SchreierRange,
    pub generators: Vec<SchreierGenerator>,
}

fn order_u64(o: ElementOrder) -> Result<i64> {
    match o {
        ElementOrder::Finite(k) => Ok(k as i64),
        ElementOrder::Infinite => Err(Error::InfiniteGroup),
    }
}

fn schreier_candidates(
    g: &Group,
    x: &GroupElement,
    y: &GroupElement,
    range: SchreierRange,
) -> Result<Vec<SchreierGenerator>> {
    let (ox, oy) = match range {
        SchreierRange::Abelianized => {
            let ab = g.abelianization()?;
            let t = ab.target();
            (
                order_u64(t.element_order(&ab.project(x)?)?)?,
                order_u64(t.element_order(&ab.project(y)?)?)?,
            )
        }
        _ => (
            order_u64(g.element_order(x)?)?,
            order_u64(g.element_order(y)?)?,
        ),
    };
    let (r1, r2) = match range {
        SchreierRange::Symmetric => (-ox + 1..ox, -oy + 1..oy),
        _ => (0..ox, 0..oy),
    };
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for n1 in r1 {
        for n2 in r2.clone() {
            let head = g.mul(&g.pow(x, n1)?, &g.pow(y, n2)?)?;
            let tail = g.mul(&g.pow(x, n1 + 1)?, &g.pow(y, n2)?)?;
            let s = g.mul(&g.mul(&head, x)?, &g.inv(&tail)?)?;
            if s != g.identity() && seen.insert(s.clone()) {
                out.push(SchreierGenerator {
                    element: s,
                    n1,
                    n2,
                    l: 1,
                });
            }
        }
    }
    Ok(out)
}

/// Schreier-type generators of `[G, G]` for a generating pair, with the
/// given exponent ranges. Fails with [`Error::Hypothesis`] if they do not
/// generate the derived subgroup.
pub fn schreier_with_range(
    g: &Group,
    x: &GroupElement,
    y: &GroupElement,
    range: SchreierRange,
) -> Result<SchreierSet> {
    let f = finite_of(g)?;
    let pair = Tuple::new(g, vec![x.clone(), y.clone()])?;
    if !generates(g, &pair)? {
        return Err(Error::NotGenerating);
    }
    let generators = schreier_candidates(g, x, y, range)?;
    let idx = generators
        .iter()
        .map(|s| g.index_of(&s.element))
        .collect::<Result<Vec<_>>>()?;
    if f.closure(&idx) != f.derived_subgroup() {
        return Err(Error::Hypothesis(format!(
            "{range:?} Schreier set does not generate the derived subgroup"
        )));
    }
    Ok(SchreierSet {
        x: x.clone(),
        y: y.clone(),
        range,
        generators,
    })
}

/// Schreier generators of `[G, G]`: abelianized exponent ranges first, then
/// full and symmetric ranges if the smaller set falls short.
pub fn schreier_commutator_generators(
    g: &Group,
    x: &GroupElement,
    y: &GroupElement,
) -> Result<SchreierSet> {
    let mut last = None;
    for range in [
        SchreierRange::Abelianized,
        SchreierRange::Full,
        SchreierRange::Symmetric,
    ] {
        match schreier_with_range(g, x, y, range) {
            Ok(s) => return Ok(s),
            Err(e @ Error::Hypothesis(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one range tried"))
}

/// Breadth-first tree of right multiplications by `gens` from the identity.
pub(crate) struct WordTree {
    parent: Vec<Option<(u32, usize)>>,
    root: u32,
}

impl WordTree {
    pub(crate) fn new(f: &FiniteGroup, gens: &[u32]) -> WordTree {
        let n = f.order();
        let root = f.identity();
        let mut parent = vec![None; n];
        let mut seen = ElementSet::empty(n);
        seen.insert(root);
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for (k, &s) in gens.iter().enumerate() {
                let b = f.mul(a, s);
                if seen.insert(b) {
                    parent[b as usize] = Some((a, k));
                    queue.push_back(b);
                }
            }
        }
        WordTree { parent, root }
    }

    /// Generator positions whose product (left to right) is `target`.
    pub(crate) fn path(&self, target: u32) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = target;
        while cur != self.root {
            let (p, k) = self.parent[cur as usize]?;
            out.push(k);
            cur = p;
        }
        out.reverse();
        Some(out)
    }
}

/// A shortest positive word in the entries of `t` evaluating to `target`.
pub fn express_in_generators(g: &Group, t: &Tuple, target: &GroupElement) -> Result<Word> {
    let f = finite_of(g)?;
    let tree = WordTree::new(f, &t.indices()?);
    let path = tree.path(g.index_of(target)?).ok_or(Error::NotGenerating)?;
    let word = Word::from_letters(
        t.len(),
        path.into_iter().map(|k| Letter::new(k + 1, 1)).collect(),
    )?;
    debug_assert_eq!(&evaluate_word(&word, g, t)?, target);
    if &evaluate_word(&word, g, t)? != target {
        return Err(Error::ReplayMismatch);
    }
    Ok(word)
}

/// `G / N` as a Cayley-table group, and the projection on table indices.
pub struct Quotient {
    pub group: Group,
    pub map: Vec<u32>,
}

pub fn quotient(g: &Group, normal: &ElementSet) -> Result<Quotient> {
    let f = finite_of(g)?;
    if !f.is_normal(normal) {
        return Err(Error::Hypothesis(
            "quotient by a non-normal subgroup".into(),
        ));
    }
    let (coset, reps) = f.cosets(normal);
    let q = reps.len();
    let labels: Vec<String> = reps.iter().map(|&r| f.label(r).to_string()).collect();
    let table: Vec<Vec<usize>> = reps
        .iter()
        .map(|&a| {
            reps.iter()
                .map(|&b| coset[f.mul(a, b) as usize] as usize)
                .collect()
        })
        .collect();
    let identity_coset = coset[f.identity() as usize] as usize;
    let mut gens: Vec<usize> = Vec::new();
    for &s in &f.generating_set() {
        let c = coset[s as usize] as usize;
        if c != identity_coset && !gens.contains(&c) {
            gens.push(c);
        }
    }
    let spec = GroupSpec::CayleyTable {
        elements: labels.clone(),
        table,
        generators: gens.iter().map(|&c| labels[c].clone()).collect(),
    };
    debug_assert_eq!(q, labels.len());
    Ok(Quotient {
        group: Group::from_spec(spec)?,
        map: coset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn generation_examples() {
        let h1 = Group::from_spec(GroupSpec::heisenberg(1, None)).unwrap();
        let t = Tuple::parse(&h1, "(1,0,5);(0,1,-3)").unwrap();
        assert!(generates(&h1, &t).unwrap());
        let t = Tuple::parse(&h1, "(2,0,0);(0,1,0)").unwrap();
        assert!(!generates(&h1, &t).unwrap());

        let z5 = Group::from_spec(GroupSpec::abelian(vec![5], 0)).unwrap();
        assert!(!generates(&z5, &Tuple::parse(&z5, "(0)").unwrap()).unwrap());
        assert!(generates(&z5, &Tuple::parse(&z5, "(3)").unwrap()).unwrap());

        let q8 = corpus::quaternion();
        assert!(generates(&q8, &Tuple::parse(&q8, "i;j").unwrap()).unwrap());
        assert!(!generates(&q8, &Tuple::parse(&q8, "i;-i").unwrap()).unwrap());
    }

    #[test]
    fn normal_generation_examples() {
        let s3 = corpus::symmetric(3);
        assert!(normally_generates(&s3, &Tuple::parse(&s3, "(1 2)").unwrap()).unwrap());
        assert!(!generates(&s3, &Tuple::parse(&s3, "(1 2)").unwrap()).unwrap());
        assert!(!normally_generates(&s3, &Tuple::parse(&s3, "(1 2 3)").unwrap()).unwrap());
        let q8 = corpus::quaternion();
        assert!(!normally_generates(&q8, &Tuple::parse(&q8, "i").unwrap()).unwrap());
    }

    #[test]
    fn maximal_subgroup_examples() {
        let q8 = corpus::quaternion();
        let m = maximal_subgroups(&q8).unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.iter().all(|s| s.order() == 4 && s.is_normal));

        let s3 = corpus::symmetric(3);
        let m = maximal_subgroups(&s3).unwrap();
        let mut shape: Vec<(usize, bool)> = m.iter().map(|s| (s.order(), s.is_normal)).collect();
        shape.sort();
        assert_eq!(shape, vec![(2, false), (2, false), (2, false), (3, true)]);

        let z4 = corpus::cyclic(4);
        let m = maximal_subgroups(&z4).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].labels(z4.finite().unwrap()), vec!["0", "2"]);
    }

    #[test]
    fn frattini_examples() {
        let q8 = corpus::quaternion();
        let phi = frattini(&q8).unwrap();
        let mut labels = phi.labels(q8.finite().unwrap());
        labels.sort();
        assert_eq!(labels, vec!["-1", "1"]);
        assert_eq!(frattini(&corpus::symmetric(3)).unwrap().order(), 1);
        assert_eq!(frattini(&corpus::cyclic(7)).unwrap().order(), 1);
    }

    #[test]
    fn nilpotency_and_class_c() {
        assert!(is_nilpotent(&corpus::quaternion()).unwrap());
        assert!(!is_nilpotent(&corpus::symmetric(3)).unwrap());
        assert!(is_nilpotent(&corpus::cyclic(6)).unwrap());
        assert!(is_class_c(&corpus::quaternion()).unwrap());
        assert!(!is_class_c(&corpus::alternating(4)).unwrap());
        assert!(!is_class_c(&corpus::symmetric(3)).unwrap());
    }

    #[test]
    fn rank_weight_examples() {
        assert_eq!(rank_and_weight(&corpus::quaternion()).unwrap(), (2, 2));
        assert_eq!(rank_and_weight(&corpus::symmetric(3)).unwrap(), (2, 1));
        assert_eq!(rank_and_weight(&corpus::cyclic(6)).unwrap(), (1, 1));
    }

    #[test]
    fn schreier_examples() {
        let q8 = corpus::quaternion();
        let x = q8.element_from_label("i").unwrap();
        let y = q8.element_from_label("j").unwrap();
        let s = schreier_commutator_generators(&q8, &x, &y).unwrap();
        assert!(!s.generators.is_empty());

        let z = corpus::abelian_table(&[2, 4]);
        let x = z.element_from_label("(1,0)").unwrap();
        let y = z.element_from_label("(0,1)").unwrap();
        let s = schreier_commutator_generators(&z, &x, &y).unwrap();
        assert!(s.generators.is_empty());

        let h = Group::from_spec(GroupSpec::heisenberg(1, Some(3))).unwrap();
        let x = h.element_from_coords(&[1, 0, 0]).unwrap();
        let y = h.element_from_coords(&[0, 1, 0]).unwrap();
        let s = schreier_commutator_generators(&h, &x, &y).unwrap();
        let f = h.finite().unwrap();
        let idx: Vec<u32> = s
            .generators
            .iter()
            .map(|g| h.index_of(&g.element).unwrap())
            .collect();
        assert_eq!(f.closure(&idx).count(), 3);
    }

    #[test]
    fn express_examples() {
        let q8 = corpus::quaternion();
        let t = Tuple::parse(&q8, "i;j").unwrap();
        let w = express_in_generators(&q8, &t, &q8.element_from_label("-1").unwrap()).unwrap();
        assert_eq!(w.to_string(), "x1^2");
        let w = express_in_generators(&q8, &t, &q8.identity()).unwrap();
        assert!(w.is_empty());

        let z5 = corpus::cyclic(5);
        let t = Tuple::parse(&z5, "2").unwrap();
        let w = express_in_generators(&z5, &t, &z5.element_from_label("1").unwrap()).unwrap();
        assert_eq!(w.to_string(), "x1^3");
    }

    #[test]
    fn quotient_by_frattini() {
        let q8 = corpus::quaternion();
        let phi = frattini(&q8).unwrap();
        let q = quotient(&q8, &phi.elements).unwrap();
        assert_eq!(q.group.order(), Some(4));
        assert!(q.group.finite().unwrap().is_abelian());
    }
}
