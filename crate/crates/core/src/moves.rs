//! Nielsen and Andrews-Curtis moves, sequences, and replay-checked
//! certificates.
//!
//! Indices are 1-based everywhere, in memory and in JSON.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement, GroupSpec, Tuple};
use crate::words::{evaluate_in, parse_word, Word};

/// What an AC move conjugates by: a word over the group's distinguished
/// generators, or an explicit element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugator {
    Word(Word),
    Element(GroupElement),
}

impl Conjugator {
    pub fn resolve(&self, group: &Group) -> Result<GroupElement> {
        match self {
            Conjugator::Element(e) => Ok(e.clone()),
            Conjugator::Word(w) => {
                let gens = group.generators();
                if w.alphabet_rank() > gens.len() {
                    return Err(Error::GeneratorOutOfRange {
                        index: w.alphabet_rank(),
                        rank: gens.len(),
                    });
                }
                evaluate_in(w, group, &gens[..w.alphabet_rank()])
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    /// `t_i <- t_i * t_j^sign`
    R { i: usize, j: usize, sign: i8 },
    /// `t_i <- t_j^sign * t_i`
    L { i: usize, j: usize, sign: i8 },
    /// `t_j <- t_j^-1`
    I { j: usize },
    /// `t_i <- c^-1 t_i c` with `c = s^sign`
    AC { i: usize, s: Conjugator, sign: i8 },
}

fn check_sign(sign: i8) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!(
            "move sign must be +1 or -1, got {sign}"
        )))
    }
}

fn check_index(index: usize, len: usize) -> Result<()> {
    if index == 0 || index > len {
        Err(Error::IndexOutOfRange { index, len })
    } else {
        Ok(())
    }
}

impl Move {
    pub fn r(i: usize, j: usize, sign: i8) -> Move {
        Move::R { i, j, sign }
    }

    pub fn l(i: usize, j: usize, sign: i8) -> Move {
        Move::L { i, j, sign }
    }

    pub fn inv(j: usize) -> Move {
        Move::I { j }
    }

    pub fn ac(i: usize, s: Conjugator, sign: i8) -> Move {
        Move::AC { i, s, sign }
    }

    pub fn is_ac(&self) -> bool {
        matches!(self, Move::AC { .. })
    }

    /// Checks indices (and `i != j`) against a tuple length.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Move::R { i, j, sign } | Move::L { i, j, sign } => {
                check_index(*i, n)?;
                check_index(*j, n)?;
                check_sign(*sign)?;
                if i == j {
                    return Err(Error::EqualIndices(*i));
                }
                Ok(())
            }
            Move::I { j } => check_index(*j, n),
            Move::AC { i, sign, .. } => {
                check_index(*i, n)?;
                check_sign(*sign)
            }
        }
    }

    pub fn inverse(&self) -> Move {
        match self {
            Move::R { i, j, sign } => Move::R {
                i: *i,
                j: *j,
                sign: -sign,
            },
            Move::L { i, j, sign } => Move::L {
                i: *i,
                j: *j,
                sign: -sign,
            },
            Move::I { j } => Move::I { j: *j },
            Move::AC { i, s, sign } => Move::AC {
                i: *i,
                s: s.clone(),
                sign: -sign,
            },
        }
    }

    pub fn to_json(&self, group: &Group) -> Value {
        match self {
            Move::R { i, j, sign } => json!({"op": "R", "i": i, "j": j, "sign": sign}),
            Move::L { i, j, sign } => json!({"op": "L", "i": i, "j": j, "sign": sign}),
            Move::I { j } => json!({"op": "I", "j": j}),
            Move::AC { i, s, sign } => {
                let s = match s {
                    Conjugator::Word(w) => Value::String(w.to_string()),
                    Conjugator::Element(e) => json!({"element": group.element_to_json(e)}),
                };
                json!({"op": "AC", "i": i, "s": s, "sign": sign})
            }
        }
    }

    pub fn from_json(group: &Group, v: &Value) -> Result<Move> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json(format!("move must be an object, got {v}")))?;
        let index = |key: &str| -> Result<usize> {
            obj.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Json(format!("move field {key:?} missing or not an index")))
        };
        let sign = || -> Result<i8> {
            match obj.get("sign").and_then(Value::as_i64) {
                Some(1) => Ok(1),
                Some(-1) => Ok(-1),
                _ => Err(Error::Json("move sign must be 1 or -1".into())),
            }
        };
        let op = obj
            .get("op")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("move field \"op\" missing".into()))?;
        match op {
            "R" => Ok(Move::r(index("i")?, index("j")?, sign()?)),
            "L" => Ok(Move::l(index("i")?, index("j")?, sign()?)),
            "I" => Ok(Move::inv(index("j")?)),
            "AC" => {
                let s = match obj.get("s") {
                    Some(Value::String(text)) => {
                        let rank = group.generators().len().max(1);
                        Conjugator::Word(parse_word(text, rank)?)
                    }
                    Some(Value::Object(o)) => match o.get("element") {
                        Some(e) => Conjugator::Element(group.element_from_json(e)?),
                        None => {
                            return Err(Error::Json(
                                "AC conjugator object needs \"element\"".into(),
                            ))
                        }
                    },
                    _ => return Err(Error::Json("AC move needs a conjugator \"s\"".into())),
                };
                Ok(Move::ac(index("i")?, s, sign()?))
            }
            other => Err(Error::Json(format!("unknown move op {other:?}"))),
        }
    }
}

fn sign_str(sign: i8) -> &'static str {
    if sign > 0 {
        "+"
    } else {
        "-"
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::R { i, j, sign } => write!(f, "R({i},{j},{})", sign_str(*sign)),
            Move::L { i, j, sign } => write!(f, "L({i},{j},{})", sign_str(*sign)),
            Move::I { j } => write!(f, "I({j})"),
            Move::AC { i, s, sign } => match s {
                Conjugator::Word(w) => write!(f, "AC({i},{w},{})", sign_str(*sign)),
                Conjugator::Element(e) => write!(f, "AC({i},{e:?},{})", sign_str(*sign)),
            },
        }
    }
}

/// Applies one move, changing exactly one entry.
pub fn apply_move(t: &Tuple, m: &Move) -> Result<Tuple> {
    m.validate(t.len())?;
    let g = t.group();
    let mut out = t.clone();
    match m {
        Move::R { i, j, sign } => {
            let y = g.pow(t.get(j - 1), i64::from(*sign))?;
            out.set(i - 1, g.mul(t.get(i - 1), &y)?);
        }
        Move::L { i, j, sign } => {
            let y = g.pow(t.get(j - 1), i64::from(*sign))?;
            out.set(i - 1, g.mul(&y, t.get(i - 1))?);
        }
        Move::I { j } => out.set(j - 1, g.inv(t.get(j - 1))?),
        Move::AC { i, s, sign } => {
            let s = s.resolve(g)?;
            let c = g.pow(&s, i64::from(*sign))?;
            out.set(i - 1, g.conjugate(t.get(i - 1), &c)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSequence {
    n: usize,
    moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(n: usize, moves: Vec<Move>) -> Result<MoveSequence> {
        for m in &moves {
            m.validate(n)?;
        }
        Ok(MoveSequence { n, moves })
    }

    pub fn empty(n: usize) -> MoveSequence {
        MoveSequence { n, moves: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn has_ac(&self) -> bool {
        self.moves.iter().any(Move::is_ac)
    }

    pub fn push(&mut self, m: Move) -> Result<()> {
        m.validate(self.n)?;
        self.moves.push(m);
        Ok(())
    }

    pub fn extend(&mut self, other: &MoveSequence) -> Result<()> {
        if other.n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        self.moves.extend(other.moves.iter().cloned());
        Ok(())
    }
}

pub fn apply_sequence(t: &Tuple, ms: &MoveSequence) -> Result<Tuple> {
    if t.len() != ms.n {
        return Err(Error::LengthMismatch {
            expected: ms.n,
            actual: t.len(),
        });
    }
    let mut cur = t.clone();
    for m in &ms.moves {
        cur = apply_move(&cur, m)?;
    }
    Ok(cur)
}

pub fn invert_sequence(ms: &MoveSequence) -> MoveSequence {
    MoveSequence {
        n: ms.n,
        moves: ms.moves.iter().rev().map(Move::inverse).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Nielsen,
    Ac,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Nielsen => "nielsen",
            CertificateKind::Ac => "ac",
        }
    }

    pub fn parse(s: &str) -> Result<CertificateKind> {
        match s {
            "nielsen" => Ok(CertificateKind::Nielsen),
            "ac" => Ok(CertificateKind::Ac),
            other => Err(Error::Json(format!("unknown certificate kind {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOrigin {
    Recipe,
    Search,
}

impl StepOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            StepOrigin::Recipe => "paper-recipe",
            StepOrigin::Search => "bfs-fallback",
        }
    }
}

/// Provenance of a contiguous block of moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub origin: StepOrigin,
    pub label: String,
    pub moves: usize,
}

/// A move sequence proven (by replay) to carry `source` to `target`.
#[derive(Clone, Debug)]
pub struct Certificate {
    kind: CertificateKind,
    source: Tuple,
    target: Tuple,
    moves: MoveSequence,
    steps: Vec<Step>,
}

impl Certificate {
    /// Replays `moves` on `source`; fails unless it lands exactly on `target`.
    pub fn new(
        kind: CertificateKind,
        source: Tuple,
        target: Tuple,
        moves: MoveSequence,
        steps: Vec<Step>,
    ) -> Result<Certificate> {
        if kind == CertificateKind::Nielsen && moves.has_ac() {
            return Err(Error::KindMismatch);
        }
        if source.group() != target.group() {
            return Err(Error::BackendMismatch(
                "source and target groups differ".into(),
            ));
        }
        if apply_sequence(&source, &moves)? != target {
            return Err(Error::ReplayMismatch);
        }
        Ok(Certificate {
            kind,
            source,
            target,
            moves,
            steps,
        })
    }

    /// Single-origin certificate.
    pub fn from_moves(
        kind: CertificateKind,
        source: Tuple,
        target: Tuple,
        moves: MoveSequence,
        label: &str,
    ) -> Result<Certificate> {
        let steps = vec![Step {
            origin: StepOrigin::Recipe,
            label: label.to_string(),
            moves: moves.len(),
        }];
        Certificate::new(kind, source, target, moves, steps)
    }

    pub fn kind(&self) -> CertificateKind {
        self.kind
    }

    pub fn group(&self) -> &Group {
        self.source.group()
    }

    pub fn source(&self) -> &Tuple {
        &self.source
    }

    pub fn target(&self) -> &Tuple {
        &self.target
    }

    pub fn moves(&self) -> &MoveSequence {
        &self.moves
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn used_fallback(&self) -> bool {
        self.steps.iter().any(|s| s.origin == StepOrigin::Search)
    }

    /// `self` followed by `next`; targets and sources must meet.
    pub fn then(&self, next: &Certificate) -> Result<Certificate> {
        if self.target != next.source {
            return Err(Error::ReplayMismatch);
        }
        let kind = if self.kind == CertificateKind::Ac || next.kind == CertificateKind::Ac {
            CertificateKind::Ac
        } else {
            CertificateKind::Nielsen
        };
        let mut moves = self.moves.clone();
        moves.extend(&next.moves)?;
        let mut steps = self.steps.clone();
        steps.extend(next.steps.iter().cloned());
        Certificate::new(kind, self.source.clone(), next.target.clone(), moves, steps)
    }

    pub fn inverted(&self) -> Result<Certificate> {
        let mut steps = self.steps.clone();
        steps.reverse();
        Certificate::new(
            self.kind,
            self.target.clone(),
            self.source.clone(),
            invert_sequence(&self.moves),
            steps,
        )
    }

    pub fn to_json(&self) -> Value {
        let group = self.group();
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({"origin": s.origin.as_str(), "label": s.label, "moves": s.moves}))
            .collect();
        let mut obj = Map::new();
        obj.insert("group".into(), group.spec().to_json_value());
        obj.insert("kind".into(), Value::from(self.kind.as_str()));
        obj.insert("source".into(), self.source.to_json());
        obj.insert("target".into(), self.target.to_json());
        obj.insert(
            "moves".into(),
            Value::Array(self.moves.moves.iter().map(|m| m.to_json(group)).collect()),
        );
        obj.insert("metadata".into(), json!({"steps": steps}));
        obj.insert("replay".into(), Value::Bool(true));
        Value::Object(obj)
    }

    /// Parses and re-verifies a certificate document.
    pub fn from_json(v: &Value) -> Result<Certificate> {
        let field = |key: &str| {
            v.get(key)
                .ok_or_else(|| Error::Json(format!("certificate field {key:?} missing")))
        };
        let spec: GroupSpec = serde_json::from_value(field("group")?.clone())?;
        let group = Group::from_spec(spec)?;
        Certificate::from_json_in(&group, v)
    }

    /// Like [`Certificate::from_json`] but reuses an existing group handle.
    pub fn from_json_in(group: &Group, v: &Value) -> Result<Certificate> {
        let field = |key: &str| {
            v.get(key)
                .ok_or_else(|| Error::Json(format!("certificate field {key:?} missing")))
        };
        let kind = CertificateKind::parse(
            field("kind")?
                .as_str()
                .ok_or_else(|| Error::Json("kind must be a string".into()))?,
        )?;
        let source = Tuple::from_json(group, field("source")?)?;
        let target = Tuple::from_json(group, field("target")?)?;
        let moves = field("moves")?
            .as_array()
            .ok_or_else(|| Error::Json("moves must be an array".into()))?
            .iter()
            .map(|m| Move::from_json(group, m))
            .collect::<Result<Vec<_>>>()?;
        let moves = MoveSequence::new(source.len(), moves)?;
        let mut steps = Vec::new();
        if let Some(list) = v.pointer("/metadata/steps").and_then(Value::as_array) {
            for s in list {
                let origin = match s.get("origin").and_then(Value::as_str) {
                    Some("bfs-fallback") => StepOrigin::Search,
                    _ => StepOrigin::Recipe,
                };
                steps.push(Step {
                    origin,
                    label: s
                        .get("label")
                        .and_then(Value::as_str)
                        .unwrap_or_default()
                        .to_string(),
                    moves: s.get("moves").and_then(Value::as_u64).unwrap_or(0) as usize,
                });
            }
        }
        Certificate::new(kind, source, target, moves, steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupSpec;

    fn h1() -> Group {
        Group::from_spec(GroupSpec::heisenberg(1, None)).unwrap()
    }

    #[test]
    fn r_and_l_act_on_one_entry() {
        let g = h1();
        let t = Tuple::from_coords(&g, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let r = apply_move(&t, &Move::r(1, 2, 1)).unwrap();
        assert_eq!(
            r,
            Tuple::from_coords(&g, &[vec![1, 1, 1], vec![0, 1, 0]]).unwrap()
        );
        let l = apply_move(&t, &Move::l(1, 2, 1)).unwrap();
        assert_eq!(
            l,
            Tuple::from_coords(&g, &[vec![1, 1, 0], vec![0, 1, 0]]).unwrap()
        );
    }

    #[test]
    fn clearing_step_adds_one_to_center() {
        let g = h1();
        let t = Tuple::from_coords(&g, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let ms = MoveSequence::new(2, vec![Move::r(1, 2, 1), Move::l(1, 2, -1)]).unwrap();
        let out = apply_sequence(&t, &ms).unwrap();
        assert_eq!(
            out,
            Tuple::from_coords(&g, &[vec![1, 0, 1], vec![0, 1, 0]]).unwrap()
        );
    }

    #[test]
    fn invalid_moves_rejected() {
        assert_eq!(Move::r(1, 1, 1).validate(2), Err(Error::EqualIndices(1)));
        assert!(matches!(
            Move::inv(3).validate(2),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            Move::inv(0).validate(2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn involution_and_inverse_pair() {
        let g = h1();
        let t = Tuple::from_coords(&g, &[vec![2, -1, 4], vec![3, 5, -7]]).unwrap();
        let twice = MoveSequence::new(2, vec![Move::inv(1), Move::inv(1)]).unwrap();
        assert_eq!(apply_sequence(&t, &twice).unwrap(), t);
        let pair = MoveSequence::new(2, vec![Move::r(1, 2, 1), Move::r(1, 2, -1)]).unwrap();
        assert_eq!(apply_sequence(&t, &pair).unwrap(), t);
        assert_eq!(apply_sequence(&t, &MoveSequence::empty(2)).unwrap(), t);
    }

    #[test]
    fn invert_single() {
        let ms = MoveSequence::new(2, vec![Move::r(1, 2, 1)]).unwrap();
        assert_eq!(invert_sequence(&ms).moves(), &[Move::r(1, 2, -1)]);
        assert!(invert_sequence(&MoveSequence::empty(2)).is_empty());
    }

    #[test]
    fn certificate_rejects_bad_replay_and_kind() {
        let g = h1();
        let t = Tuple::from_coords(&g, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let ms = MoveSequence::new(2, vec![Move::r(1, 2, 1)]).unwrap();
        let res = Certificate::from_moves(CertificateKind::Nielsen, t.clone(), t.clone(), ms, "x");
        assert_eq!(res.unwrap_err(), Error::ReplayMismatch);

        let s = Conjugator::Word(parse_word("x2", 2).unwrap());
        let ms = MoveSequence::new(2, vec![Move::ac(1, s.clone(), 1), Move::ac(1, s, -1)]).unwrap();
        let res = Certificate::from_moves(
            CertificateKind::Nielsen,
            t.clone(),
            t.clone(),
            ms.clone(),
            "x",
        );
        assert_eq!(res.unwrap_err(), Error::KindMismatch);
        assert!(Certificate::from_moves(CertificateKind::Ac, t.clone(), t, ms, "x").is_ok());
    }

    #[test]
    fn ac_move_conjugates() {
        let g = h1();
        let t = Tuple::from_coords(&g, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let s = Conjugator::Word(parse_word("x2", 2).unwrap());
        let out = apply_move(&t, &Move::ac(1, s, 1)).unwrap();
        // y^-1 x y = x [x, y] and [x, y] = (0,0,1)
        assert_eq!(out.get(0), &g.element_from_coords(&[1, 0, 1]).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let g = h1();
        let t = Tuple::from_coords(&g, &[vec![1, 0, 5], vec![0, 1, -3]]).unwrap();
        let e = g.element_from_coords(&[0, 1, 0]).unwrap();
        let ms = MoveSequence::new(
            2,
            vec![
                Move::r(1, 2, 1),
                Move::inv(2),
                Move::ac(1, Conjugator::Word(parse_word("x2*x1", 2).unwrap()), -1),
                Move::ac(2, Conjugator::Element(e), 1),
            ],
        )
        .unwrap();
        let target = apply_sequence(&t, &ms).unwrap();
        let cert = Certificate::from_moves(CertificateKind::Ac, t, target, ms, "test").unwrap();
        let v = cert.to_json();
        assert_eq!(v["moves"][0], json!({"op":"R","i":1,"j":2,"sign":1}));
        assert_eq!(v["moves"][1], json!({"op":"I","j":2}));
        assert_eq!(
            v["moves"][2],
            json!({"op":"AC","i":1,"s":"x2*x1","sign":-1})
        );
        let back = Certificate::from_json(&v).unwrap();
        assert_eq!(back.moves(), cert.moves());
        assert_eq!(back.target(), cert.target());
    }
}
