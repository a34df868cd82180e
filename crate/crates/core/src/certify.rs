//! Constructive certificates: Heisenberg canonicalization, AC normalization
//! of 2-generated nilpotent groups, Frattini lifting and stabilization, plus
//! the central-automorphism computations in `F_2(3)` and Akbulut-Kirby pairs.

use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::abelian::{exponent_rows, reduce_rows};
use crate::error::{Error, Result};
use crate::explorer::{components, find_path, portable_conjugator, GraphQuery, Mode};
use crate::groups::{Group, GroupElement, Tuple};
use crate::moves::{
    apply_sequence, invert_sequence, Certificate, CertificateKind, Move, MoveSequence, Step,
    StepOrigin,
};
use crate::structure::{
    frattini, generates, is_class_c, normally_generates, quotient, rank_and_weight,
    schreier_commutator_generators, WordTree,
};
use crate::words::{free_reduce, Word};

/// Accumulates moves with provenance while tracking the current tuple.
struct Chain {
    kind: CertificateKind,
    source: Tuple,
    current: Tuple,
    moves: Vec<Move>,
    steps: Vec<Step>,
}

impl Chain {
    fn new(kind: CertificateKind, source: &Tuple) -> Chain {
        Chain {
            kind,
            source: source.clone(),
            current: source.clone(),
            moves: Vec::new(),
            steps: Vec::new(),
        }
    }

    fn push(&mut self, moves: Vec<Move>, origin: StepOrigin, label: &str) -> Result<()> {
        if moves.is_empty() {
            return Ok(());
        }
        let ms = MoveSequence::new(self.current.len(), moves)?;
        self.current = apply_sequence(&self.current, &ms)?;
        self.steps.push(Step {
            origin,
            label: label.to_string(),
            moves: ms.len(),
        });
        self.moves.extend(ms.moves().iter().cloned());
        Ok(())
    }

    /// Appends a recipe block if it lands on `expected`, otherwise a
    /// search-found path to `expected`.
    fn push_checked(
        &mut self,
        moves: Vec<Move>,
        expected: &Tuple,
        label: &str,
        search: &GraphQuery,
    ) -> Result<()> {
        let ms = MoveSequence::new(self.current.len(), moves)?;
        if apply_sequence(&self.current, &ms)? == *expected {
            return self.push(ms.moves().to_vec(), StepOrigin::Recipe, label);
        }
        let cert = find_path(search, &self.current, expected)?.ok_or_else(|| {
            Error::NoCertificate(format!("{label}: no path to the expected tuple"))
        })?;
        self.push(cert.moves().moves().to_vec(), StepOrigin::Search, label)
    }

    fn finish(self, target: &Tuple) -> Result<Certificate> {
        let ms = MoveSequence::new(self.source.len(), self.moves)?;
        Certificate::new(self.kind, self.source, target.clone(), ms, self.steps)
    }
}

/// Moves `R(slot, s_1, +1) R(slot, s_2, +1) ...` right-multiplying entry
/// `slot` by `element`, spelled as a positive word in the entries at `using`.
fn multiply_slot_by(
    t: &Tuple,
    slot: usize,
    using: &[usize],
    element: &GroupElement,
) -> Result<Vec<Move>> {
    let g = t.group();
    let f = g.finite()?;
    let gens: Vec<u32> = using
        .iter()
        .map(|&i| g.index_of(t.get(i - 1)))
        .collect::<Result<_>>()?;
    let path = WordTree::new(f, &gens)
        .path(g.index_of(element)?)
        .ok_or(Error::NotGenerating)?;
    Ok(path
        .into_iter()
        .map(|k| Move::r(slot, using[k], 1))
        .collect())
}

fn repeat(m: &Move, times: usize) -> Vec<Move> {
    vec![m.clone(); times]
}

/// Nielsen moves whose replay aligns `t` with `target` in `Ab(G)`: reduce
/// both projections to the same canonical rows and compose.
fn abelian_alignment(t: &Tuple, target: &Tuple) -> Result<Vec<Move>> {
    let ab = t.group().abelianization()?;
    let (mt, rt) = reduce_rows(&ab.form, exponent_rows(&ab.project_tuple(t)?)?)?;
    let (mb, rb) = reduce_rows(&ab.form, exponent_rows(&ab.project_tuple(target)?)?)?;
    if rt != rb {
        return Err(Error::NoCertificate(
            "the abelianized tuples lie in different classes".into(),
        ));
    }
    let back = invert_sequence(&MoveSequence::new(t.len(), mb)?);
    let mut moves = mt;
    moves.extend(back.moves().iter().cloned());
    Ok(moves)
}

/// Moves adding `m` to the central coordinate of entry `i` (1-based) of a
/// Heisenberg tuple whose entry `i` and its partner project to unit vectors.
/// For `i <= k` one step is `R(i,k+i,+1) L(i,k+i,-1)`; for `i > k` it is
/// `R(i,i-k,-1) L(i,i-k,+1)`; negative `m` uses the inverse step.
pub fn heisenberg_clearing_moves(k: usize, i: usize, m: i64) -> Vec<Move> {
    let (partner, s) = if i <= k { (k + i, 1) } else { (i - k, -1) };
    let step = [Move::r(i, partner, s), Move::l(i, partner, -s)];
    let inverse = [Move::l(i, partner, s), Move::r(i, partner, -s)];
    let block: &[Move] = if m >= 0 { &step } else { &inverse };
    (0..m.unsigned_abs())
        .flat_map(|_| block.iter().cloned())
        .collect()
}

/// Nielsen certificate from a generating `2k`-tuple of `H_k` to the standard
/// tuple `(e_1, ..., e_2k)`.
pub fn heisenberg_canonicalize(g: &Group, t: &Tuple) -> Result<Certificate> {
    let h = g
        .heisenberg()
        .ok_or_else(|| Error::BackendMismatch("expected a Heisenberg group".into()))?;
    let k = h.k;
    if t.len() != 2 * k {
        return Err(Error::LengthMismatch {
            expected: 2 * k,
            actual: t.len(),
        });
    }
    if !generates(g, t)? {
        return Err(Error::NotGenerating);
    }
    let ab = g.abelianization()?;
    let (moves, rows) = reduce_rows(&ab.form, exponent_rows(&ab.project_tuple(t)?)?)?;
    let standard: Vec<GroupElement> = (0..2 * k)
        .map(|i| GroupElement::Heisenberg(h.unit(i)))
        .collect();
    let target = Tuple::new(g, standard)?;
    let unit_rows = exponent_rows(&ab.project_tuple(&target)?)?;
    if rows != unit_rows {
        return Err(Error::NoCertificate(
            "the abelianized tuple is not Nielsen equivalent to the standard basis".into(),
        ));
    }
    let mut chain = Chain::new(CertificateKind::Nielsen, t);
    chain.push(moves, StepOrigin::Recipe, "abelianization row reduction")?;
    let mut clearing = Vec::new();
    for i in 1..=2 * k {
        let z = chain
            .current
            .get(i - 1)
            .coords()
            .expect("heisenberg coordinates")[2 * k]
            .clone();
        let z = match &h.modulus {
            Some(m) => {
                let r = z.mod_floor(m);
                if &r * 2 > *m {
                    r - m
                } else {
                    r
                }
            }
            None => z,
        };
        let z = z
            .to_i64()
            .ok_or_else(|| Error::Unsupported("central coordinate beyond 64 bits".into()))?;
        clearing.extend(heisenberg_clearing_moves(k, i, -z));
    }
    chain.push(clearing, StepOrigin::Recipe, "central clearing")?;
    chain.finish(&target)
}

/// Precomputed data for normalizing pairs to a fixed basis `(x, y)`.
pub struct AcNormalizer {
    group: Group,
    basis: Tuple,
    search: GraphQuery,
}

impl AcNormalizer {
    /// Checks the hypotheses: finite, class C, rank 2, `(x, y)` generating.
    pub fn new(g: &Group, basis: &Tuple) -> Result<AcNormalizer> {
        g.finite()?;
        if basis.len() != 2 {
            return Err(Error::LengthMismatch {
                expected: 2,
                actual: basis.len(),
            });
        }
        if !is_class_c(g)? {
            return Err(Error::Hypothesis("group is not in class C".into()));
        }
        if rank_and_weight(g)?.0 != 2 {
            return Err(Error::Hypothesis("group does not have rank 2".into()));
        }
        if !generates(g, basis)? {
            return Err(Error::Hypothesis("basis pair does not generate".into()));
        }
        Ok(AcNormalizer {
            group: g.clone(),
            basis: basis.clone(),
            search: GraphQuery::new(g, 2, Mode::Ac),
        })
    }

    fn conj(&self, e: &GroupElement) -> Result<crate::moves::Conjugator> {
        portable_conjugator(&self.group, e)
    }

    /// Positive word over `S` for `phi`: the table indices of its letters.
    fn schreier_word(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        phi: &GroupElement,
    ) -> Result<Vec<(i64, i64, GroupElement)>> {
        let g = &self.group;
        let set = schreier_commutator_generators(g, x, y)?;
        let idx: Vec<u32> = set
            .generators
            .iter()
            .map(|s| g.index_of(&s.element))
            .collect::<Result<_>>()?;
        let path = WordTree::new(g.finite()?, &idx)
            .path(g.index_of(phi)?)
            .ok_or_else(|| Error::Hypothesis("element is not in the derived subgroup".into()))?;
        Ok(path
            .into_iter()
            .map(|k| {
                let s = &set.generators[k];
                (s.n1, s.n2, s.element.clone())
            })
            .collect())
    }

    /// `(x s phi', y) -> (x phi', y)` for `s = x^n1 y^n2 x (x^(n1+1) y^n2)^-1`.
    fn first_macro(&self, x: &GroupElement, n1: i64, n2: i64) -> Result<Vec<Move>> {
        let g = &self.group;
        let p = |e: i64| g.pow(x, e);
        let lsign: i8 = if n2 >= 0 { 1 } else { -1 };
        let l = Move::l(1, 2, lsign);
        let mut out = vec![Move::inv(2), Move::ac(2, self.conj(&p(-(n1 + 1))?)?, 1)];
        out.extend(repeat(&l, n2.unsigned_abs() as usize));
        out.push(Move::ac(2, self.conj(&p(n1 + 1)?)?, 1));
        out.push(Move::inv(2));
        out.push(Move::ac(2, self.conj(&p(-(n1 + 2))?)?, 1));
        out.extend(repeat(&l, n2.unsigned_abs() as usize));
        out.push(Move::ac(2, self.conj(&p(n1 + 2)?)?, 1));
        Ok(out)
    }

    /// `(x, y s phi') -> (x, y phi')` for `s = x^n1 y^n2 x (x^(n1+1) y^n2)^-1`.
    fn second_macro(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        n1: i64,
        n2: i64,
    ) -> Result<Vec<Move>> {
        let g = &self.group;
        let c = g.mul(&g.mul(y, &g.pow(x, n1)?)?, &g.pow(y, n2)?)?;
        Ok(vec![
            Move::inv(1),
            Move::ac(1, self.conj(&g.inv(&c)?)?, 1),
            Move::l(2, 1, 1),
            Move::ac(1, self.conj(&c)?, 1),
            Move::inv(1),
            Move::ac(1, self.conj(&g.inv(y)?)?, 1),
            Move::l(2, 1, 1),
            Move::ac(1, self.conj(y)?, 1),
        ])
    }

    /// AC certificate from `t` to the basis pair.
    pub fn normalize(&self, t: &Tuple) -> Result<Certificate> {
        let g = &self.group;
        if t.len() != 2 {
            return Err(Error::LengthMismatch {
                expected: 2,
                actual: t.len(),
            });
        }
        if !generates(g, t)? {
            return Err(Error::NotGenerating);
        }
        let (x, y) = (self.basis.get(0).clone(), self.basis.get(1).clone());
        let mut chain = Chain::new(CertificateKind::Ac, t);
        chain.push(
            abelian_alignment(t, &self.basis)?,
            StepOrigin::Recipe,
            "abelianization alignment",
        )?;

        // (x phi1, y phi2) -> (x phi1, y) with respect to the pair (x phi1, y)
        let xhat = chain.current.get(0).clone();
        let mut phi2 = g.mul(&g.inv(&y)?, chain.current.get(1))?;
        for (n1, n2, s) in self.schreier_word(&xhat, &y, &phi2)? {
            let rest = g.mul(&g.inv(&s)?, &phi2)?;
            let expected = Tuple::new(g, vec![xhat.clone(), g.mul(&y, &rest)?])?;
            let moves = self.second_macro(&xhat, &y, n1, n2)?;
            chain.push_checked(
                moves,
                &expected,
                "second-entry commutator peel",
                &self.search,
            )?;
            phi2 = rest;
        }

        // (x phi1, y) -> (x, y)
        let mut phi1 = g.mul(&g.inv(&x)?, chain.current.get(0))?;
        for (n1, n2, s) in self.schreier_word(&x, &y, &phi1)? {
            let rest = g.mul(&g.inv(&s)?, &phi1)?;
            let expected = Tuple::new(g, vec![g.mul(&x, &rest)?, y.clone()])?;
            let moves = self.first_macro(&x, n1, n2)?;
            chain.push_checked(
                moves,
                &expected,
                "first-entry commutator peel",
                &self.search,
            )?;
            phi1 = rest;
        }
        chain.finish(&self.basis)
    }
}

/// AC certificate from a generating pair `t` to `basis` in a finite
/// 2-generated class-C group. Fails with [`Error::NoCertificate`] when the
/// abelianized pairs are not equivalent.
pub fn ac_normalize_2gen_nilpotent(g: &Group, t: &Tuple, basis: &Tuple) -> Result<Certificate> {
    AcNormalizer::new(g, basis)?.normalize(t)
}

/// Standard generating tuple `(x_1, ..., x_d, 1, ..., 1)` used by
/// [`frattini_lift`].
pub fn canonical_generators(g: &Group, n: usize) -> Result<Tuple> {
    let f = g.finite()?;
    let (d, _) = rank_and_weight(g)?;
    if n < d {
        return Err(Error::Hypothesis(format!("n = {n} is below the rank {d}")));
    }
    let dist: Vec<u32> = f.generators().to_vec();
    let mut chosen: Option<Vec<u32>> = None;
    if dist.len() == d && f.closure(&dist).count() == f.order() {
        chosen = Some(dist);
    } else {
        let order = f.order() as u64;
        let total = order.pow(d as u32);
        for key in 0..total {
            let mut idx = vec![0u32; d];
            let mut k = key;
            for slot in idx.iter_mut().rev() {
                *slot = (k % order) as u32;
                k /= order;
            }
            if f.closure(&idx).count() == f.order() {
                chosen = Some(idx);
                break;
            }
        }
    }
    let mut idx = chosen.expect("some d-tuple generates");
    idx.resize(n, f.identity());
    Tuple::from_indices(g, &idx)
}

/// Nielsen certificate from a generating `n`-tuple to
/// `(x_1, ..., x_d, 1, ..., 1)`, `d = rank(G)`, by lifting a path in the
/// Frattini quotient and clearing the Frattini parts.
pub fn frattini_lift(g: &Group, n: usize, t: &Tuple) -> Result<Certificate> {
    if t.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: t.len(),
        });
    }
    if !generates(g, t)? {
        return Err(Error::NotGenerating);
    }
    let target = canonical_generators(g, n)?;
    let d = rank_and_weight(g)?.0;
    let phi = frattini(g)?;
    let q = quotient(g, &phi.elements)?;
    let project = |u: &Tuple| -> Result<Tuple> {
        let idx: Vec<u32> = u.indices()?.iter().map(|&a| q.map[a as usize]).collect();
        Tuple::from_indices(&q.group, &idx)
    };
    let query = GraphQuery::new(&q.group, n, Mode::Nielsen);
    let report = components(&query)?;
    if report.component_count != 1 {
        return Err(Error::Hypothesis(format!(
            "the Nielsen graph of the Frattini quotient has {} components",
            report.component_count
        )));
    }
    let path = find_path(&query, &project(t)?, &project(&target)?)?
        .ok_or_else(|| Error::NoCertificate("quotient path not found".into()))?;
    let mut chain = Chain::new(CertificateKind::Nielsen, t);
    chain.push(
        path.moves().moves().to_vec(),
        StepOrigin::Recipe,
        "Frattini quotient path",
    )?;

    let first: Vec<usize> = (1..=d).collect();
    let mut clear = Vec::new();
    for j in d + 1..=n {
        let inv = g.inv(chain.current.get(j - 1))?;
        clear.extend(multiply_slot_by(&chain.current, j, &first, &inv)?);
    }
    chain.push(clear, StepOrigin::Recipe, "clear trailing Frattini entries")?;

    for i in 1..=d {
        let x = target.get(i - 1);
        let phi_i = g.mul(&g.inv(x)?, chain.current.get(i - 1))?;
        if phi_i == g.identity() {
            continue;
        }
        if n == d {
            return Err(Error::Hypothesis(
                "n = rank leaves no spare slot for Frattini correction".into(),
            ));
        }
        let spare = d + 1;
        let mut moves = multiply_slot_by(&chain.current, spare, &first, &phi_i)?;
        chain.push(
            std::mem::take(&mut moves),
            StepOrigin::Recipe,
            "load Frattini factor",
        )?;
        chain.push(
            vec![Move::r(i, spare, -1)],
            StepOrigin::Recipe,
            "cancel Frattini factor",
        )?;
        let back = g.inv(chain.current.get(spare - 1))?;
        let moves = multiply_slot_by(&chain.current, spare, &first, &back)?;
        chain.push(moves, StepOrigin::Recipe, "clear spare slot")?;
    }
    chain.finish(&target)
}

/// Lifts an AC certificate on `n`-tuples to `n + 1` entries: from
/// `extended_source` to `(x_1, ..., x_n, 1)` where `(x_1, ..., x_n)` is the
/// target of `cert`. Requires a finite class-C group.
pub fn stabilize_certificate(
    g: &Group,
    cert: &Certificate,
    extended_source: &Tuple,
) -> Result<Certificate> {
    if cert.group() != g {
        return Err(Error::BackendMismatch(
            "certificate belongs to another group".into(),
        ));
    }
    if !is_class_c(g)? {
        return Err(Error::Hypothesis("group is not in class C".into()));
    }
    let n = cert.target().len();
    if extended_source.len() != n + 1 {
        return Err(Error::LengthMismatch {
            expected: n + 1,
            actual: extended_source.len(),
        });
    }
    if !normally_generates(g, extended_source)? {
        return Err(Error::NotGenerating);
    }
    let mut entries = cert.target().entries().to_vec();
    entries.push(g.identity());
    let target = Tuple::new(g, entries)?;
    let first: Vec<usize> = (1..=n).collect();
    let mut chain = Chain::new(CertificateKind::Ac, extended_source);

    if extended_source.entries()[..n] == *cert.source().entries() {
        chain.push(
            cert.moves().moves().to_vec(),
            StepOrigin::Recipe,
            "lifted certificate",
        )?;
    } else {
        chain.push(
            abelian_alignment(extended_source, &target)?,
            StepOrigin::Recipe,
            "abelianization alignment",
        )?;
    }
    let inv = g.inv(chain.current.get(n))?;
    let moves = multiply_slot_by(&chain.current, n + 1, &first, &inv)?;
    chain.push(moves, StepOrigin::Recipe, "clear last entry")?;

    for i in 1..=n {
        let c = g.mul(&g.inv(target.get(i - 1))?, chain.current.get(i - 1))?;
        if c == g.identity() {
            continue;
        }
        let moves = multiply_slot_by(&chain.current, n + 1, &first, &c)?;
        chain.push(moves, StepOrigin::Recipe, "load commutator factor")?;
        chain.push(
            vec![Move::r(i, n + 1, -1)],
            StepOrigin::Recipe,
            "cancel commutator factor",
        )?;
        let back = g.inv(chain.current.get(n))?;
        let moves = multiply_slot_by(&chain.current, n + 1, &first, &back)?;
        chain.push(moves, StepOrigin::Recipe, "clear last entry")?;
    }
    chain.finish(&target)
}

/// Exponents of the central automorphism
/// `x -> x [y,x,x]^l1 [y,x,y]^l2`, `y -> y [y,x,x]^m1 [y,x,y]^m2` of `F_2(3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CentralAutParams {
    pub lambda1: i64,
    pub lambda2: i64,
    pub mu1: i64,
    pub mu2: i64,
}

/// The stated sufficient condition for tameness: `l1 = m2`, `l2 = m1 = 0`.
/// Only this direction is asserted by the source of the criterion.
pub fn is_tame_central(p: CentralAutParams) -> bool {
    p.lambda1 == p.mu2 && p.lambda2 == 0 && p.mu1 == 0
}

/// Images of `x` and `y` under the central automorphism with parameters `p`.
pub fn central_automorphism_images(
    g: &Group,
    p: CentralAutParams,
) -> Result<(GroupElement, GroupElement)> {
    if g.free_nilpotent().map(|f| f.class) != Some(3) {
        return Err(Error::BackendMismatch("expected F_2(3)".into()));
    }
    let c = |v: [i64; 5]| g.element_from_coords(&v);
    let x = c([1, 0, 0, p.lambda1, p.lambda2])?;
    let y = g.mul(&c([0, 1, 0, 0, 0])?, &c([0, 0, 0, p.mu1, p.mu2])?)?;
    Ok((x, y))
}

/// Image of `v` under the endomorphism of `F_2(c)` sending `x -> img_x`,
/// `y -> img_y`, via the Mal'cev basis `x, y, [y,x], [y,x,x], [y,x,y]`.
pub fn apply_endomorphism(
    g: &Group,
    img_x: &GroupElement,
    img_y: &GroupElement,
    v: &GroupElement,
) -> Result<GroupElement> {
    if g.free_nilpotent().is_none() {
        return Err(Error::BackendMismatch(
            "expected a free nilpotent group".into(),
        ));
    }
    let coords = v.coords().expect("free nilpotent coordinates");
    let c = g.commutator(img_y, img_x)?;
    let d = g.commutator(&c, img_x)?;
    let h = g.commutator(&c, img_y)?;
    let mut acc = g.identity();
    for (base, e) in [img_x, img_y, &c, &d, &h].into_iter().zip(coords) {
        let e = e
            .to_i64()
            .ok_or_else(|| Error::Unsupported("exponent beyond 64 bits".into()))?;
        acc = g.mul(&acc, &g.pow(base, e)?)?;
    }
    Ok(acc)
}

/// `alpha^k(x)` for `alpha: x -> x [y,x,x], y -> y` in `F_2(3)`, computed
/// by iterating `alpha` through the group arithmetic.
pub fn andreadakis_power(k: u64) -> Result<GroupElement> {
    let g = Group::from_spec(crate::groups::GroupSpec::free_nilpotent(3))?;
    let alpha = CentralAutParams {
        lambda1: 1,
        lambda2: 0,
        mu1: 0,
        mu2: 0,
    };
    let (ax, ay) = central_automorphism_images(&g, alpha)?;
    let mut v = g.generators()[0].clone();
    for _ in 0..k {
        v = apply_endomorphism(&g, &ax, &ay, &v)?;
    }
    Ok(v)
}

/// The pair `(x y x y^-1 x^-1 y^-1, x^l y^-(l+1))` over `x1, x2`.
pub fn akbulut_kirby(l: i64) -> Result<(Word, Word)> {
    if l < 1 {
        return Err(Error::InvalidSpec(format!(
            "Akbulut-Kirby index must be at least 1, got {l}"
        )));
    }
    let u = Word::from_pairs(2, &[(1, 1), (2, 1), (1, 1), (2, -1), (1, -1), (2, -1)])?;
    let x = Word::generator(2, 1)?;
    let y = Word::generator(2, 2)?;
    let v = x.pow(l).concat(&y.pow(-(l + 1)));
    Ok((free_reduce(&u), free_reduce(&v)))
}
