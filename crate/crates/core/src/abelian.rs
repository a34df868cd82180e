//! Integer matrices, Smith normal form, and the closed-form classification
//! of Nielsen classes for finitely generated abelian groups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement, GroupSpec, Tuple};
use crate::moves::{Certificate, CertificateKind, Move, MoveSequence};

/// `Z_{m_1} x ... x Z_{m_r} x Z^s` with `m_1 | m_2 | ... | m_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianForm {
    pub torsion: Vec<u64>,
    pub free_rank: usize,
}

impl AbelianForm {
    pub fn new(torsion: Vec<u64>, free_rank: usize) -> Result<AbelianForm> {
        GroupSpec::abelian(torsion.clone(), free_rank).check_parameters()?;
        Ok(AbelianForm { torsion, free_rank })
    }

    /// `r + s`, the minimal number of generators.
    pub fn rank(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn order(&self) -> Option<u64> {
        if self.free_rank > 0 {
            return None;
        }
        self.torsion
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec::abelian(self.torsion.clone(), self.free_rank)
    }

    fn modulus(&self, col: usize) -> Option<BigInt> {
        self.torsion.get(col).map(|&m| BigInt::from(m))
    }
}

impl fmt::Display for AbelianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|m| format!("Z{m}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            s => parts.push(format!("Z^{s}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        IntMatrix {
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

/// `U * A * V = D`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero and zero diagonal entries, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Smith normal form with a deterministic pivot: smallest nonzero absolute
/// value in the remaining block, first in row-major order.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if !x.is_zero() && pivot.is_none_or(|(pi, pj)| x.abs() < d.get(pi, pj).abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return Smith { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let p = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t).div_floor(&p);
                if !q.is_zero() {
                    d.add_row(i, t, &-&q);
                    u.add_row(i, t, &-&q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = d.get(t, j).div_floor(&p);
                if !q.is_zero() {
                    d.add_col(j, t, &-&q);
                    v.add_col(j, t, &-&q);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, d, v }
}

pub fn euler_phi(m: u64) -> u64 {
    let mut result = m;
    let mut x = m;
    let mut p = 2;
    while p * p <= x {
        if x.is_multiple_of(p) {
            while x.is_multiple_of(p) {
                x /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if x > 1 {
        result -= result / x;
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prediction {
    /// No generating `n`-tuples exist.
    Empty,
    Components(u64),
}

impl Prediction {
    pub fn count(self) -> u64 {
        match self {
            Prediction::Empty => 0,
            Prediction::Components(c) => c,
        }
    }
}

/// Number of components of the Nielsen graph on generating `n`-tuples.
pub fn predicted_components(a: &AbelianForm, n: usize) -> Prediction {
    let rank = a.rank();
    if n < rank {
        return Prediction::Empty;
    }
    if n > rank || a.torsion.is_empty() {
        return Prediction::Components(1);
    }
    let m1 = a.torsion[0];
    if m1 == 2 {
        Prediction::Components(1)
    } else {
        Prediction::Components(euler_phi(m1) / 2)
    }
}

/// Exponent rows of a tuple of abelian-backend elements.
pub(crate) fn exponent_rows(t: &Tuple) -> Result<Vec<Vec<BigInt>>> {
    t.entries()
        .iter()
        .map(|e| match e {
            GroupElement::Abelian(v) => Ok(v.clone()),
            other => Err(Error::BackendMismatch(format!(
                "expected an abelian element, got {other:?}"
            ))),
        })
        .collect()
}

/// Whether integer rows generate the abelian group `a`: the rows together
/// with the torsion relations must span `Z^{r+s}`.
pub fn rows_generate(a: &AbelianForm, rows: &[Vec<BigInt>]) -> bool {
    let d = a.rank();
    if d == 0 {
        return true;
    }
    let mut all: Vec<Vec<BigInt>> = rows.to_vec();
    for (i, &m) in a.torsion.iter().enumerate() {
        let mut r = vec![BigInt::zero(); d];
        r[i] = BigInt::from(m);
        all.push(r);
    }
    if all.len() < d {
        return false;
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(all, d));
    snf.diagonal().iter().all(|x| x.is_one())
}

/// The `{u, m_1 - u}` class of the exponent-matrix determinant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetClass {
    pub u: u64,
    pub complement: u64,
    /// Whether `a` lies in the range where this invariant was checked to be
    /// complete against exhaustive search.
    pub validated: bool,
}

impl DetClass {
    pub fn pair(&self) -> (u64, u64) {
        (self.u, self.complement)
    }
}

pub fn det_invariant_validated(a: &AbelianForm) -> bool {
    a.free_rank == 0
        && match a.torsion.as_slice() {
            [m] => *m <= 12,
            [m, k] => m == k && (3..=5).contains(m),
            _ => false,
        }
}

/// Determinant of the exponent matrix mod `m_1`, up to sign. Constant on
/// Nielsen classes of generating `r`-tuples of `Z_{m_1} x ... x Z_{m_r}`.
pub fn nielsen_det_invariant(a: &AbelianForm, t: &Tuple) -> Result<DetClass> {
    if a.free_rank != 0 || a.torsion.is_empty() {
        return Err(Error::Hypothesis(
            "determinant invariant needs a finite abelian group".into(),
        ));
    }
    if t.len() != a.rank() {
        return Err(Error::Hypothesis(format!(
            "determinant invariant needs n = rank = {}, got n = {}",
            a.rank(),
            t.len()
        )));
    }
    let m1 = a.torsion[0];
    if m1 < 3 {
        return Err(Error::Hypothesis(
            "determinant invariant needs m_1 >= 3".into(),
        ));
    }
    let rows = exponent_rows(t)?;
    if !rows_generate(a, &rows) {
        return Err(Error::NotGenerating);
    }
    let det = IntMatrix::from_rows(rows, a.rank()).det();
    let u = det.mod_floor(&BigInt::from(m1)).to_u64().expect("reduced");
    let (lo, hi) = if u <= m1 - u {
        (u, m1 - u)
    } else {
        (m1 - u, u)
    };
    Ok(DetClass {
        u: lo,
        complement: hi,
        validated: det_invariant_validated(a),
    })
}

/// Row-reduction state: integer rows with torsion columns kept in `[0, m)`.
struct Reducer<'a> {
    form: &'a AbelianForm,
    rows: Vec<Vec<BigInt>>,
    moves: Vec<Move>,
}

impl Reducer<'_> {
    fn reduce_row(&mut self, k: usize) {
        for (c, x) in self.rows[k].iter_mut().enumerate() {
            if let Some(m) = self.form.modulus(c) {
                *x = x.mod_floor(&m);
            }
        }
    }

    /// `row_k += q * row_p`, emitted as `|q|` R moves.
    fn add(&mut self, k: usize, p: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let count = q.abs().to_usize().expect("multiplier fits in memory");
        let sign: i8 = if q.is_positive() { 1 } else { -1 };
        for _ in 0..count {
            self.moves.push(Move::r(k + 1, p + 1, sign));
        }
        let src = self.rows[p].clone();
        for (x, y) in self.rows[k].iter_mut().zip(&src) {
            *x += q * y;
        }
        self.reduce_row(k);
    }

    fn negate(&mut self, k: usize) {
        self.moves.push(Move::inv(k + 1));
        for x in self.rows[k].iter_mut() {
            *x = -&*x;
        }
        self.reduce_row(k);
    }

    fn swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        // (a, b) -> (a+b, b) -> (a+b, -a) -> (b, -a) -> (b, a)
        let one = BigInt::one();
        self.add(i, j, &one);
        self.add(j, i, &-&one);
        self.add(i, j, &one);
        self.negate(j);
    }

    /// Euclid on column `c` over the active rows; returns the pivot row.
    fn eliminate_column(&mut self, c: usize, active: &[usize], target: usize) -> usize {
        let modulus = self.form.modulus(c);
        loop {
            let nonzero: Vec<usize> = active
                .iter()
                .copied()
                .filter(|&k| !self.rows[k][c].is_zero())
                .collect();
            let pivot = *nonzero
                .iter()
                .min_by_key(|&&k| (self.rows[k][c].abs(), k != target, k))
                .expect("generating rows have a nonzero entry in every column");
            let p = self.rows[pivot][c].clone();
            let others: Vec<usize> = nonzero.iter().copied().filter(|&k| k != pivot).collect();
            if others.is_empty() {
                // A zero row may stand in for the modulus itself.
                let spare = active.iter().copied().find(|&k| k != pivot);
                match (&modulus, spare) {
                    (Some(m), Some(z)) if !p.abs().is_one() => {
                        let q = m.div_floor(&p);
                        self.add(z, pivot, &-q);
                        continue;
                    }
                    _ => return pivot,
                }
            }
            for k in others {
                let q = self.rows[k][c].div_floor(&p);
                self.add(k, pivot, &-q);
            }
        }
    }
}

/// Nielsen reduction of integer rows in `a` to `(u e_1, e_2, ..., e_d, 0, ...)`,
/// with `u = 1` unless `n = d` and the group is finite with `m_1 >= 3`.
/// Returns the moves and the reduced rows.
pub(crate) fn reduce_rows(
    a: &AbelianForm,
    rows: Vec<Vec<BigInt>>,
) -> Result<(Vec<Move>, Vec<Vec<BigInt>>)> {
    let d = a.rank();
    let n = rows.len();
    if !rows_generate(a, &rows) {
        return Err(Error::NotGenerating);
    }
    let mut r = Reducer {
        form: a,
        rows,
        moves: Vec::new(),
    };
    for k in 0..n {
        r.reduce_row(k);
    }
    // Reverse column order: the pivot rows of later columns carry multiples
    // of larger moduli, so the active rows alone generate each column.
    let mut active: Vec<usize> = (0..n).collect();
    for c in (0..d).rev() {
        let pivot = r.eliminate_column(c, &active, c);
        let unit = r.rows[pivot][c].clone();
        match a.modulus(c) {
            Some(m) => {
                if &m - &unit < unit {
                    r.negate(pivot);
                }
            }
            None => {
                if unit.is_negative() {
                    r.negate(pivot);
                }
            }
        }
        r.swap(pivot, c);
        active.retain(|&k| k != c);
    }
    // Back-substitution, lowest column first.
    for c in 0..d {
        let u = r.rows[c][c].clone();
        let m = a.modulus(c);
        for k in 0..n {
            if k == c || r.rows[k][c].is_zero() {
                continue;
            }
            let h = r.rows[k][c].clone();
            let q = match &m {
                Some(m) => {
                    let inv = mod_inverse(&u, m).expect("pivot is a unit");
                    let mut q = (h * inv).mod_floor(m);
                    if &q * 2u32 > *m {
                        q -= m;
                    }
                    q
                }
                None => h,
            };
            r.add(k, c, &-q);
        }
    }
    Ok((r.moves, r.rows))
}

fn mod_inverse(u: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = u.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else if m.is_one() {
        Some(BigInt::zero())
    } else {
        None
    }
}

/// Nielsen certificate from `t` to `(e_1, ..., e_d, 1, ...)`, or to
/// `(u e_1, e_2, ..., e_d)` when `n = d`, the group is finite and
/// `m_1 >= 3`; `u` is the smaller of the `{u, m_1 - u}` determinant class.
pub fn abelian_reduce(a: &AbelianForm, t: &Tuple) -> Result<Certificate> {
    let group = t.group();
    if group.abelian_form().as_ref() != Some(a) {
        return Err(Error::BackendMismatch(format!(
            "tuple does not live in the abelian group {a}"
        )));
    }
    let (moves, rows) = reduce_rows(a, exponent_rows(t)?)?;
    let target = Tuple::new(group, rows.into_iter().map(GroupElement::Abelian).collect())?;
    let ms = MoveSequence::new(t.len(), moves)?;
    Certificate::from_moves(
        CertificateKind::Nielsen,
        t.clone(),
        target,
        ms,
        "abelian row reduction",
    )
}

/// Convenience: the abelian group `Z_{m_1} x ... x Z^s` as a backend.
pub fn abelian_group(a: &AbelianForm) -> Result<Group> {
    Group::from_spec(a.to_spec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det_i64(m: &[Vec<i64>]) -> i64 {
        // Cofactor expansion oracle for small matrices.
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_i64(&minor)
            })
            .sum()
    }

    #[test]
    fn smith_examples() {
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 4]], 2));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
        let s = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        let s = smith_normal_form(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]], 2));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(euler_phi(12), 4);
        for m in 1..200u64 {
            let brute = (1..=m).filter(|&k| k.gcd(&m) == 1).count() as u64;
            assert_eq!(euler_phi(m), brute, "m = {m}");
        }
    }

    #[test]
    fn predictions() {
        let z5 = AbelianForm::new(vec![5], 0).unwrap();
        assert_eq!(predicted_components(&z5, 1), Prediction::Components(2));
        assert_eq!(predicted_components(&z5, 2), Prediction::Components(1));
        assert_eq!(predicted_components(&z5, 0), Prediction::Empty);
        let z2z4 = AbelianForm::new(vec![2, 4], 0).unwrap();
        assert_eq!(predicted_components(&z2z4, 2), Prediction::Components(1));
        assert_eq!(predicted_components(&z2z4, 1), Prediction::Empty);
        let z3 = AbelianForm::new(vec![], 3).unwrap();
        assert_eq!(predicted_components(&z3, 3), Prediction::Components(1));
        let z7 = AbelianForm::new(vec![7, 7], 0).unwrap();
        assert_eq!(predicted_components(&z7, 2), Prediction::Components(3));
    }

    #[test]
    fn det_invariant_examples() {
        let a = AbelianForm::new(vec![5], 0).unwrap();
        let g = abelian_group(&a).unwrap();
        let t = Tuple::from_coords(&g, &[vec![2]]).unwrap();
        assert_eq!(nielsen_det_invariant(&a, &t).unwrap().pair(), (2, 3));
        let t = Tuple::from_coords(&g, &[vec![1]]).unwrap();
        assert_eq!(nielsen_det_invariant(&a, &t).unwrap().pair(), (1, 4));
        let a = AbelianForm::new(vec![3, 3], 0).unwrap();
        let g = abelian_group(&a).unwrap();
        let t = Tuple::from_coords(&g, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(nielsen_det_invariant(&a, &t).unwrap().pair(), (1, 2));
        let t = Tuple::from_coords(&g, &[vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(nielsen_det_invariant(&a, &t), Err(Error::NotGenerating));
    }

    #[test]
    fn reduce_z2_single_subtraction() {
        let a = AbelianForm::new(vec![], 2).unwrap();
        let g = abelian_group(&a).unwrap();
        let t = Tuple::from_coords(&g, &[vec![1, 1], vec![0, 1]]).unwrap();
        let cert = abelian_reduce(&a, &t).unwrap();
        assert_eq!(cert.moves().moves(), &[Move::r(1, 2, -1)]);
    }

    #[test]
    fn reduce_examples() {
        let a = AbelianForm::new(vec![5], 0).unwrap();
        let g = abelian_group(&a).unwrap();
        let t = Tuple::from_coords(&g, &[vec![2], vec![0]]).unwrap();
        let cert = abelian_reduce(&a, &t).unwrap();
        assert_eq!(
            cert.target(),
            &Tuple::from_coords(&g, &[vec![1], vec![0]]).unwrap()
        );

        let a = AbelianForm::new(vec![2, 2], 0).unwrap();
        let g = abelian_group(&a).unwrap();
        let t = Tuple::from_coords(&g, &[vec![1, 1], vec![0, 1]]).unwrap();
        let cert = abelian_reduce(&a, &t).unwrap();
        assert_eq!(
            cert.target(),
            &Tuple::from_coords(&g, &[vec![1, 0], vec![0, 1]]).unwrap()
        );

        let a = AbelianForm::new(vec![5], 0).unwrap();
        let g = abelian_group(&a).unwrap();
        let t = Tuple::from_coords(&g, &[vec![3]]).unwrap();
        let cert = abelian_reduce(&a, &t).unwrap();
        assert_eq!(cert.target(), &Tuple::from_coords(&g, &[vec![2]]).unwrap());
    }

    #[test]
    fn reduce_rejects_non_generating() {
        let a = AbelianForm::new(vec![5], 0).unwrap();
        let g = abelian_group(&a).unwrap();
        let t = Tuple::from_coords(&g, &[vec![0]]).unwrap();
        assert_eq!(abelian_reduce(&a, &t).unwrap_err(), Error::NotGenerating);
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-50i64..=50, c), r)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn smith_is_correct(m in arb_matrix()) {
            let cols = m[0].len();
            let a = IntMatrix::from_i64(&m, cols);
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            prop_assert!(s.u.det().abs().is_one());
            prop_assert!(s.v.det().abs().is_one());
            for i in 0..s.d.rows() {
                for j in 0..s.d.cols() {
                    if i != j {
                        prop_assert!(s.d.get(i, j).is_zero());
                    }
                }
            }
            let diag = s.diagonal();
            for w in diag.windows(2) {
                prop_assert!(!w[0].is_negative());
                if w[0].is_zero() {
                    prop_assert!(w[1].is_zero());
                } else {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                }
            }
        }

        #[test]
        fn det_matches_cofactor(m in (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(-20i64..=20, n), n)
        })) {
            let n = m.len();
            prop_assert_eq!(IntMatrix::from_i64(&m, n).det(), BigInt::from(det_i64(&m)));
        }

        #[test]
        fn reduction_replays_in_free_abelian(rows in proptest::collection::vec(
            proptest::collection::vec(-9i64..=9, 2), 2..=4)) {
            let a = AbelianForm::new(vec![], 2).unwrap();
            let g = abelian_group(&a).unwrap();
            let t = Tuple::from_coords(&g, &rows).unwrap();
            let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            match abelian_reduce(&a, &t) {
                Ok(cert) => {
                    prop_assert!(rows_generate(&a, &big));
                    let mut expect = vec![vec![0i64; 2]; rows.len()];
                    expect[0][0] = 1;
                    expect[1][1] = 1;
                    prop_assert_eq!(cert.target(), &Tuple::from_coords(&g, &expect).unwrap());
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::NotGenerating);
                    prop_assert!(!rows_generate(&a, &big));
                }
            }
        }
    }
}
