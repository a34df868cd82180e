//! Group backends behind one element contract.
//!
//! A [`Group`] is an immutable, cheaply clonable handle over one of four
//! backends: a validated Cayley table, a finitely generated abelian group
//! `Z_{m_1} x ... x Z_{m_r} x Z^s`, a Heisenberg group `H_k` (over the
//! integers or modulo `m`), or the free nilpotent group `F_2(c)`, `c <= 3`.
//! Elements are always kept in canonical form, so `==` on [`GroupElement`]
//! is equality in the group.

mod finite;
mod free_nilpotent;
mod heisenberg;
mod spec;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::abelian::{smith_normal_form, AbelianForm, IntMatrix};
use crate::error::{Error, Result};
use crate::words::{evaluate_in, parse_word, Word};

pub use finite::{ElementSet, FiniteGroup, MAX_TABLE_ORDER};
pub use free_nilpotent::FreeNilpotent;
pub use heisenberg::Heisenberg;
pub use spec::GroupSpec;

/// A group element in canonical form for its backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// Index into a multiplication table.
    Table(u32),
    /// Torsion coordinates reduced into `[0, m_i)`, then free coordinates.
    Abelian(Vec<BigInt>),
    /// `(x_1..x_k, y_1..y_k, z)`.
    Heisenberg(Vec<BigInt>),
    /// Mal'cev coordinates `(a, b, e, f, g)`.
    FreeNilpotent(Vec<BigInt>),
}

impl GroupElement {
    pub fn coords(&self) -> Option<&[BigInt]> {
        match self {
            GroupElement::Table(_) => None,
            GroupElement::Abelian(v)
            | GroupElement::Heisenberg(v)
            | GroupElement::FreeNilpotent(v) => Some(v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

#[derive(Clone, Debug)]
pub struct AbelianBackend {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

impl AbelianBackend {
    fn dim(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    fn reduce(&self, v: &mut [BigInt]) {
        for (c, m) in v.iter_mut().zip(&self.torsion) {
            *c = c.mod_floor(m);
        }
    }
}

#[derive(Debug)]
enum Backend {
    Table(Arc<FiniteGroup>),
    Abelian(AbelianBackend),
    Heisenberg(Heisenberg),
    FreeNilpotent(FreeNilpotent),
}

#[derive(Debug)]
struct GroupInner {
    spec: GroupSpec,
    backend: Backend,
    finite: OnceLock<Result<Arc<FiniteGroup>>>,
}

/// Immutable group handle; clones share the backend.
#[derive(Clone, Debug)]
pub struct Group(Arc<GroupInner>);

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Group {}

impl Group {
    /// Validates `spec` and builds the backend. Cayley tables get the full
    /// axiom check here.
    pub fn from_spec(spec: GroupSpec) -> Result<Group> {
        spec.check_parameters()?;
        let backend = match &spec {
            GroupSpec::CayleyTable {
                elements,
                table,
                generators,
            } => Backend::Table(Arc::new(FiniteGroup::from_table(
                elements.clone(),
                table,
                generators,
            )?)),
            GroupSpec::Abelian { torsion, free_rank } => Backend::Abelian(AbelianBackend {
                torsion: torsion.iter().map(|&m| BigInt::from(m)).collect(),
                free_rank: *free_rank,
            }),
            GroupSpec::Heisenberg { k, modulus } => Backend::Heisenberg(Heisenberg {
                k: *k,
                modulus: modulus.map(BigInt::from),
            }),
            GroupSpec::FreeNilpotent { class, .. } => {
                Backend::FreeNilpotent(FreeNilpotent { class: *class })
            }
        };
        Ok(Group(Arc::new(GroupInner {
            spec,
            backend,
            finite: OnceLock::new(),
        })))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.0.spec
    }

    pub fn kind_name(&self) -> &'static str {
        self.0.spec.kind_name()
    }

    pub fn is_table(&self) -> bool {
        matches!(self.0.backend, Backend::Table(_))
    }

    pub fn heisenberg(&self) -> Option<&Heisenberg> {
        match &self.0.backend {
            Backend::Heisenberg(h) => Some(h),
            _ => None,
        }
    }

    pub fn free_nilpotent(&self) -> Option<&FreeNilpotent> {
        match &self.0.backend {
            Backend::FreeNilpotent(f) => Some(f),
            _ => None,
        }
    }

    /// Abelian backends are described by their own invariant-factor form.
    pub fn abelian_form(&self) -> Option<AbelianForm> {
        match &self.0.spec {
            GroupSpec::Abelian { torsion, free_rank } => {
                Some(AbelianForm::new(torsion.clone(), *free_rank).expect("validated"))
            }
            _ => None,
        }
    }

    /// `None` when the group is infinite.
    pub fn order(&self) -> Option<u64> {
        match &self.0.backend {
            Backend::Table(t) => Some(t.order() as u64),
            Backend::Abelian(a) if a.free_rank == 0 => a
                .torsion
                .iter()
                .try_fold(1u64, |acc, m| acc.checked_mul(m.to_u64()?)),
            Backend::Abelian(_) => None,
            Backend::Heisenberg(h) => h
                .modulus
                .as_ref()
                .and_then(|m| m.to_u64())
                .and_then(|m| m.checked_pow(h.dim() as u32)),
            Backend::FreeNilpotent(f) if f.class == 0 => Some(1),
            Backend::FreeNilpotent(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.0.backend {
            Backend::Table(_) => true,
            Backend::Abelian(a) => a.free_rank == 0,
            Backend::Heisenberg(h) => h.modulus.is_some(),
            Backend::FreeNilpotent(_) => false,
        }
    }

    /// Nilpotent backends (everything except general Cayley tables) are
    /// known to have all maximal subgroups normal.
    pub fn is_known_nilpotent(&self) -> bool {
        !self.is_table()
    }

    pub fn identity(&self) -> GroupElement {
        match &self.0.backend {
            Backend::Table(t) => GroupElement::Table(t.identity()),
            Backend::Abelian(a) => GroupElement::Abelian(vec![BigInt::zero(); a.dim()]),
            Backend::Heisenberg(h) => GroupElement::Heisenberg(h.identity()),
            Backend::FreeNilpotent(f) => GroupElement::FreeNilpotent(f.identity()),
        }
    }

    /// Whether `a` is a canonical element of this backend.
    pub fn contains(&self, a: &GroupElement) -> bool {
        match (&self.0.backend, a) {
            (Backend::Table(t), GroupElement::Table(i)) => (*i as usize) < t.order(),
            (Backend::Abelian(ab), GroupElement::Abelian(v)) => {
                v.len() == ab.dim()
                    && v.iter()
                        .zip(&ab.torsion)
                        .all(|(c, m)| !c.is_negative() && c < m)
            }
            (Backend::Heisenberg(h), GroupElement::Heisenberg(v)) => h.is_canonical(v),
            (Backend::FreeNilpotent(f), GroupElement::FreeNilpotent(v)) => f.is_canonical(v),
            _ => false,
        }
    }

    fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::BackendMismatch(format!(
                "{a:?} is not an element of this {} group",
                self.kind_name()
            )))
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (&self.0.backend, a, b) {
            (Backend::Table(t), GroupElement::Table(x), GroupElement::Table(y)) => {
                GroupElement::Table(t.mul(*x, *y))
            }
            (Backend::Abelian(ab), GroupElement::Abelian(x), GroupElement::Abelian(y)) => {
                let mut v: Vec<BigInt> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                ab.reduce(&mut v);
                GroupElement::Abelian(v)
            }
            (Backend::Heisenberg(h), GroupElement::Heisenberg(x), GroupElement::Heisenberg(y)) => {
                GroupElement::Heisenberg(h.mul(x, y))
            }
            (
                Backend::FreeNilpotent(f),
                GroupElement::FreeNilpotent(x),
                GroupElement::FreeNilpotent(y),
            ) => GroupElement::FreeNilpotent(f.mul(x, y)),
            _ => unreachable!("elements checked against backend"),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(match (&self.0.backend, a) {
            (Backend::Table(t), GroupElement::Table(x)) => GroupElement::Table(t.inv(*x)),
            (Backend::Abelian(ab), GroupElement::Abelian(x)) => {
                let mut v: Vec<BigInt> = x.iter().map(|c| -c).collect();
                ab.reduce(&mut v);
                GroupElement::Abelian(v)
            }
            (Backend::Heisenberg(h), GroupElement::Heisenberg(x)) => {
                GroupElement::Heisenberg(h.inv(x))
            }
            (Backend::FreeNilpotent(f), GroupElement::FreeNilpotent(x)) => {
                GroupElement::FreeNilpotent(f.inv(x))
            }
            _ => unreachable!("element checked against backend"),
        })
    }

    pub fn pow(&self, a: &GroupElement, e: i64) -> Result<GroupElement> {
        let mut base = if e < 0 { self.inv(a)? } else { a.clone() };
        self.check(&base)?;
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            base = self.mul_unchecked(&base, &base);
            n >>= 1;
        }
        Ok(acc)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let ai = self.inv(a)?;
        let bi = self.inv(b)?;
        let left = self.mul(&ai, &bi)?;
        let right = self.mul(a, b)?;
        self.mul(&left, &right)
    }

    /// `a^s = s^-1 a s`.
    pub fn conjugate(&self, a: &GroupElement, s: &GroupElement) -> Result<GroupElement> {
        let si = self.inv(s)?;
        let t = self.mul(&si, a)?;
        self.mul(&t, s)
    }

    pub fn element_order(&self, a: &GroupElement) -> Result<ElementOrder> {
        self.check(a)?;
        if *a == self.identity() {
            return Ok(ElementOrder::Finite(1));
        }
        Ok(match (&self.0.backend, a) {
            (Backend::Table(t), GroupElement::Table(x)) => {
                ElementOrder::Finite(t.element_order(*x))
            }
            (Backend::Abelian(ab), GroupElement::Abelian(v)) => {
                if v[ab.torsion.len()..].iter().any(|c| !c.is_zero()) {
                    ElementOrder::Infinite
                } else {
                    let ord = v
                        .iter()
                        .zip(&ab.torsion)
                        .fold(BigInt::one(), |acc, (c, m)| acc.lcm(&(m / c.gcd(m))));
                    ElementOrder::Finite(ord.to_u64().expect("order fits in u64"))
                }
            }
            (Backend::Heisenberg(h), _) if h.modulus.is_some() => {
                let mut k = 1u64;
                let mut x = a.clone();
                while x != self.identity() {
                    x = self.mul_unchecked(&x, a);
                    k += 1;
                }
                ElementOrder::Finite(k)
            }
            _ => ElementOrder::Infinite,
        })
    }

    /// Distinguished generators: the table's listed generators, the unit
    /// vectors of abelian and Heisenberg groups, or `(x, y)` for `F_2(c)`.
    pub fn generators(&self) -> Vec<GroupElement> {
        match &self.0.backend {
            Backend::Table(t) => t
                .generators()
                .iter()
                .map(|&i| GroupElement::Table(i))
                .collect(),
            Backend::Abelian(ab) => (0..ab.dim())
                .map(|i| {
                    let mut v = vec![BigInt::zero(); ab.dim()];
                    v[i] = BigInt::one();
                    GroupElement::Abelian(v)
                })
                .collect(),
            Backend::Heisenberg(h) => (0..2 * h.k)
                .map(|i| GroupElement::Heisenberg(h.unit(i)))
                .collect(),
            Backend::FreeNilpotent(f) => vec![
                GroupElement::FreeNilpotent(f.x()),
                GroupElement::FreeNilpotent(f.y()),
            ],
        }
    }

    /// Dense table view; errors for infinite groups or very large orders.
    pub fn finite(&self) -> Result<&FiniteGroup> {
        if let Backend::Table(t) = &self.0.backend {
            return Ok(t);
        }
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let cached = self.0.finite.get_or_init(|| self.enumerate().map(Arc::new));
        match cached {
            Ok(f) => Ok(f),
            Err(e) => Err(e.clone()),
        }
    }

    fn enumerate(&self) -> Result<FiniteGroup> {
        let order = self.order().ok_or(Error::InfiniteGroup)?;
        if order > MAX_TABLE_ORDER as u64 {
            return Err(Error::BudgetExceeded {
                what: "multiplication table order".into(),
                required: order,
                limit: MAX_TABLE_ORDER as u64,
            });
        }
        let radices: Vec<BigInt> = match &self.0.backend {
            Backend::Abelian(ab) => ab.torsion.clone(),
            Backend::Heisenberg(h) => vec![h.modulus.clone().expect("finite"); h.dim()],
            _ => unreachable!("tables return early, others are infinite"),
        };
        let wrap = |v: Vec<BigInt>| match &self.0.backend {
            Backend::Abelian(_) => GroupElement::Abelian(v),
            _ => GroupElement::Heisenberg(v),
        };
        // Mixed radix, first coordinate most significant.
        let mut elements = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); radices.len()];
        loop {
            elements.push(wrap(cur.clone()));
            let mut pos = radices.len();
            loop {
                if pos == 0 {
                    let labels = elements.iter().map(|e| self.format_element(e)).collect();
                    return FiniteGroup::from_elements(
                        elements,
                        labels,
                        &self.generators(),
                        |a, b| self.mul_unchecked(a, b),
                    );
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] < radices[pos] {
                    break;
                }
                cur[pos] = BigInt::zero();
            }
        }
    }

    /// Builds a canonical element from integer coordinates (reducing modular
    /// coordinates). Not available for Cayley tables.
    pub fn element_from_coords(&self, coords: &[i64]) -> Result<GroupElement> {
        let v: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        self.element_from_bigints(v)
    }

    pub fn element_from_bigints(&self, mut v: Vec<BigInt>) -> Result<GroupElement> {
        let expected = match &self.0.backend {
            Backend::Table(_) => {
                return Err(Error::BackendMismatch(
                    "cayley table elements are given by label".into(),
                ))
            }
            Backend::Abelian(ab) => ab.dim(),
            Backend::Heisenberg(h) => h.dim(),
            Backend::FreeNilpotent(_) => FreeNilpotent::DIM,
        };
        if v.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: v.len(),
            });
        }
        let e = match &self.0.backend {
            Backend::Abelian(ab) => {
                ab.reduce(&mut v);
                GroupElement::Abelian(v)
            }
            Backend::Heisenberg(h) => {
                h.reduce(&mut v);
                GroupElement::Heisenberg(v)
            }
            Backend::FreeNilpotent(_) => GroupElement::FreeNilpotent(v),
            Backend::Table(_) => unreachable!(),
        };
        self.check(&e)?;
        Ok(e)
    }

    pub fn element_from_label(&self, label: &str) -> Result<GroupElement> {
        match &self.0.backend {
            Backend::Table(t) => t
                .index_of_label(label)
                .map(GroupElement::Table)
                .ok_or_else(|| Error::BackendMismatch(format!("unknown element label {label:?}"))),
            _ => Err(Error::BackendMismatch(
                "only cayley table elements have labels".into(),
            )),
        }
    }

    /// Parses a table label or a coordinate literal such as `(1,0,-3)`.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        if self.is_table() {
            return self.element_from_label(text);
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .or_else(|| text.strip_prefix('[').and_then(|s| s.strip_suffix(']')))
            .unwrap_or(text);
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::parse(0, format!("bad coordinate {c:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.element_from_bigints(coords)
    }

    pub fn format_element(&self, a: &GroupElement) -> String {
        match (&self.0.backend, a) {
            (Backend::Table(t), GroupElement::Table(i)) if (*i as usize) < t.order() => {
                t.label(*i).to_string()
            }
            (_, e) => match e.coords() {
                Some(v) => {
                    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                    format!("({})", parts.join(","))
                }
                None => format!("{e:?}"),
            },
        }
    }

    /// Labels for tables; coordinate arrays (numbers, or strings when they
    /// exceed 64 bits) otherwise.
    pub fn element_to_json(&self, a: &GroupElement) -> Value {
        match a.coords() {
            None => Value::String(self.format_element(a)),
            Some(v) => Value::Array(
                v.iter()
                    .map(|c| match c.to_i64() {
                        Some(x) => Value::from(x),
                        None => Value::String(c.to_string()),
                    })
                    .collect(),
            ),
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<GroupElement> {
        match v {
            Value::String(s) if self.is_table() => self.element_from_label(s),
            Value::Array(items) => {
                let coords = items
                    .iter()
                    .map(|item| match item {
                        Value::Number(n) => n
                            .as_i64()
                            .map(BigInt::from)
                            .ok_or_else(|| Error::Json(format!("non-integer coordinate {n}"))),
                        Value::String(s) => s
                            .parse::<BigInt>()
                            .map_err(|_| Error::Json(format!("bad coordinate {s:?}"))),
                        other => Err(Error::Json(format!("bad coordinate {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.element_from_bigints(coords)
            }
            other => Err(Error::Json(format!(
                "cannot read {other} as an element of a {} group",
                self.kind_name()
            ))),
        }
    }

    /// Converts a table index of [`Group::finite`] back to an element.
    pub fn element_at(&self, index: u32) -> Result<GroupElement> {
        Ok(self.finite()?.element(index).clone())
    }

    pub fn index_of(&self, a: &GroupElement) -> Result<u32> {
        self.finite()?
            .index_of(a)
            .ok_or_else(|| Error::BackendMismatch(format!("{a:?} not in table")))
    }

    /// The abelianization `G/[G,G]` with its canonical projection.
    pub fn abelianization(&self) -> Result<Abelianization> {
        let (form, map) = match &self.0.backend {
            Backend::Abelian(_) => (self.abelian_form().expect("abelian"), AbMap::Identity),
            Backend::Heisenberg(h) => {
                let form = match &h.modulus {
                    Some(m) => {
                        AbelianForm::new(vec![m.to_u64().expect("small modulus"); 2 * h.k], 0)?
                    }
                    None => AbelianForm::new(vec![], 2 * h.k)?,
                };
                (form, AbMap::Prefix(2 * h.k))
            }
            Backend::FreeNilpotent(_) => (AbelianForm::new(vec![], 2)?, AbMap::Prefix(2)),
            Backend::Table(t) => {
                let (form, coords) = table_abelianization(t)?;
                (form, AbMap::Table(coords))
            }
        };
        let target = Group::from_spec(form.to_spec())?;
        Ok(Abelianization { form, target, map })
    }
}

/// Invariant factors of `G/[G,G]` for a table group and the coordinates of
/// every element's image.
fn table_abelianization(t: &FiniteGroup) -> Result<(AbelianForm, Vec<Vec<BigInt>>)> {
    let derived = t.derived_subgroup();
    let (coset, reps) = t.cosets(&derived);
    let gens = t.generating_set();
    let q = reps.len();
    let ngen = gens.len();

    // Spanning tree of the quotient's Cayley graph labels each coset by a
    // word vector; tree defects give the relation lattice.
    let mut label: Vec<Option<Vec<i64>>> = vec![None; q];
    let root = coset[t.identity() as usize] as usize;
    label[root] = Some(vec![0; ngen]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(c) = queue.pop_front() {
        let lc = label[c].clone().expect("visited");
        for (i, &g) in gens.iter().enumerate() {
            let d = coset[t.mul(reps[c], g) as usize] as usize;
            if label[d].is_none() {
                let mut ld = lc.clone();
                ld[i] += 1;
                label[d] = Some(ld);
                queue.push_back(d);
            }
        }
    }
    let label: Vec<Vec<i64>> = label.into_iter().map(|l| l.expect("connected")).collect();

    let mut rows = Vec::new();
    for c in 0..q {
        for (i, &g) in gens.iter().enumerate() {
            let d = coset[t.mul(reps[c], g) as usize] as usize;
            let row: Vec<i64> = (0..ngen)
                .map(|j| label[c][j] + i64::from(i == j) - label[d][j])
                .collect();
            if row.iter().any(|&x| x != 0) {
                rows.push(row);
            }
        }
    }
    if ngen == 0 {
        return Ok((AbelianForm::new(vec![], 0)?, vec![vec![]; t.order()]));
    }
    let rel = IntMatrix::from_i64(&rows, ngen);
    let snf = smith_normal_form(&rel);
    let diag: Vec<BigInt> = (0..ngen)
        .map(|j| {
            if j < snf.d.rows() {
                snf.d.get(j, j).abs()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    let kept: Vec<usize> = (0..ngen).filter(|&j| diag[j] > BigInt::one()).collect();
    let torsion: Vec<u64> = kept
        .iter()
        .map(|&j| diag[j].to_u64().expect("finite quotient"))
        .collect();

    let coset_coords: Vec<Vec<BigInt>> = label
        .iter()
        .map(|l| {
            kept.iter()
                .map(|&j| {
                    let w: BigInt = (0..ngen)
                        .map(|i| BigInt::from(l[i]) * snf.v.get(i, j))
                        .sum();
                    w.mod_floor(&diag[j])
                })
                .collect()
        })
        .collect();
    let coords = (0..t.order())
        .map(|a| coset_coords[coset[a] as usize].clone())
        .collect();
    Ok((AbelianForm::new(torsion, 0)?, coords))
}

#[derive(Clone, Debug)]
enum AbMap {
    Identity,
    Prefix(usize),
    Table(Vec<Vec<BigInt>>),
}

/// `Ab(G)` as an invariant-factor form plus the projection `G -> Ab(G)`.
#[derive(Clone, Debug)]
pub struct Abelianization {
    pub form: AbelianForm,
    target: Group,
    map: AbMap,
}

impl Abelianization {
    /// The abelian group `Ab(G)` as its own backend.
    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn project(&self, a: &GroupElement) -> Result<GroupElement> {
        match (&self.map, a) {
            (AbMap::Identity, _) => Ok(a.clone()),
            (AbMap::Prefix(len), e) => {
                let v = e
                    .coords()
                    .ok_or_else(|| Error::BackendMismatch("expected coordinates".into()))?;
                self.target.element_from_bigints(v[..*len].to_vec())
            }
            (AbMap::Table(coords), GroupElement::Table(i)) => coords
                .get(*i as usize)
                .map(|c| GroupElement::Abelian(c.clone()))
                .ok_or_else(|| Error::BackendMismatch(format!("index {i} out of range"))),
            (AbMap::Table(_), e) => Err(Error::BackendMismatch(format!(
                "{e:?} is not a table element"
            ))),
        }
    }

    pub fn project_tuple(&self, t: &Tuple) -> Result<Tuple> {
        let entries = t
            .entries()
            .iter()
            .map(|e| self.project(e))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(&self.target, entries)
    }
}

/// An ordered tuple of elements of one group.
#[derive(Clone, Debug)]
pub struct Tuple {
    group: Group,
    entries: Vec<GroupElement>,
}

impl PartialEq for Tuple {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for Tuple {}

impl Tuple {
    pub fn new(group: &Group, entries: Vec<GroupElement>) -> Result<Tuple> {
        for e in &entries {
            group.check(e)?;
        }
        Ok(Tuple {
            group: group.clone(),
            entries,
        })
    }

    pub fn from_coords(group: &Group, coords: &[Vec<i64>]) -> Result<Tuple> {
        let entries = coords
            .iter()
            .map(|c| group.element_from_coords(c))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(group, entries)
    }

    pub fn from_labels(group: &Group, labels: &[&str]) -> Result<Tuple> {
        let entries = labels
            .iter()
            .map(|l| group.element_from_label(l))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(group, entries)
    }

    pub fn from_indices(group: &Group, indices: &[u32]) -> Result<Tuple> {
        let entries = indices
            .iter()
            .map(|&i| group.element_at(i))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(group, entries)
    }

    /// Parses `;`-separated element literals, e.g. `(1,0,5);(0,1,-3)` or `i;j`.
    pub fn parse(group: &Group, text: &str) -> Result<Tuple> {
        let entries = text
            .split(';')
            .map(|s| group.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(group, entries)
    }

    /// Parses `;`-separated words over the distinguished generators.
    pub fn from_words(group: &Group, text: &str) -> Result<Tuple> {
        let gens = group.generators();
        if gens.is_empty() {
            return Err(Error::Unsupported(
                "group has no distinguished generators to evaluate words over".into(),
            ));
        }
        let entries = text
            .split(';')
            .map(|s| evaluate_in(&parse_word(s, gens.len())?, group, &gens))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(group, entries)
    }

    pub fn evaluate_words(group: &Group, words: &[Word]) -> Result<Tuple> {
        let gens = group.generators();
        let entries = words
            .iter()
            .map(|w| evaluate_in(w, group, &gens))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(group, entries)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn entries(&self) -> &[GroupElement] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<GroupElement> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &GroupElement {
        &self.entries[i]
    }

    pub(crate) fn set(&mut self, i: usize, e: GroupElement) {
        self.entries[i] = e;
    }

    /// Table indices of the entries (finite groups only).
    pub fn indices(&self) -> Result<Vec<u32>> {
        self.entries
            .iter()
            .map(|e| self.group.index_of(e))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|e| self.group.element_to_json(e))
                .collect(),
        )
    }

    pub fn from_json(group: &Group, v: &Value) -> Result<Tuple> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::Json("tuple must be a JSON array".into()))?;
        let entries = items
            .iter()
            .map(|item| group.element_from_json(item))
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(group, entries)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| self.group.format_element(e))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}
