//! Free nilpotent group `F_2(c)`, `c <= 3`, in Mal'cev coordinates.
//!
//! An element `(a, b, e, f, g)` stands for `x^a y^b c^e d^f h^g` where
//! `c = [y,x]`, `d = [y,x,x] = [c,x]` and `h = [y,x,y] = [c,y]`, with
//! `[u,v] = u^-1 v^-1 u v`. `d` and `h` are central. Moving letters into
//! normal order uses the collection rules
//!
//! ```text
//! y x   = x y c
//! c x   = x c d
//! c y   = y c h
//! y^{x^A}       = y c^A d^{A(A-1)/2}
//! (y^b)^{x^A}   = y^b c^{Ab} d^{b A(A-1)/2} h^{A b(b-1)/2}
//! ```
//!
//! which, collected through a full product, give the closed form in
//! [`FreeNilpotent::mul`]. Coordinates beyond the class are kept at zero.

use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct FreeNilpotent {
    pub class: u32,
}

fn half_pred(a: &BigInt) -> BigInt {
    // a(a-1)/2, exact for every integer a
    (a * (a - 1u32)) / 2u32
}

impl FreeNilpotent {
    pub const DIM: usize = 5;

    pub fn truncate(&self, v: &mut [BigInt]) {
        if self.class < 2 {
            v[2] = BigInt::zero();
        }
        if self.class < 3 {
            v[3] = BigInt::zero();
            v[4] = BigInt::zero();
        }
    }

    pub fn is_canonical(&self, v: &[BigInt]) -> bool {
        v.len() == Self::DIM
            && (self.class >= 2 || v[2].is_zero())
            && (self.class >= 3 || (v[3].is_zero() && v[4].is_zero()))
    }

    pub fn identity(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); Self::DIM]
    }

    pub fn mul(&self, l: &[BigInt], r: &[BigInt]) -> Vec<BigInt> {
        let (a, b, e, f, g) = (&l[0], &l[1], &l[2], &l[3], &l[4]);
        let (aa, bb, ee, ff, gg) = (&r[0], &r[1], &r[2], &r[3], &r[4]);
        // x^a y^b c^e | x^A y^B c^E: push x^A left past y^b c^e, then y^B past c^{e+Ab}.
        let c_mid = e + aa * b;
        let mut out = vec![
            a + aa,
            b + bb,
            &c_mid + ee,
            f + ff + e * aa + b * half_pred(aa),
            g + gg + &c_mid * bb + aa * half_pred(b),
        ];
        self.truncate(&mut out);
        out
    }

    pub fn inv(&self, v: &[BigInt]) -> Vec<BigInt> {
        let (a, b, e, f, g) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
        // Solve v * w = 1 coordinate by coordinate using the product formula.
        let aa = -a;
        let bb = -b;
        let ee = -(e + &aa * b);
        let c_mid = e + &aa * b;
        let ff = -(f + e * &aa + b * half_pred(&aa));
        let gg = -(g + &c_mid * &bb + &aa * half_pred(b));
        let mut out = vec![aa, bb, ee, ff, gg];
        self.truncate(&mut out);
        out
    }

    pub fn x(&self) -> Vec<BigInt> {
        let mut v = self.identity();
        v[0] = BigInt::from(1);
        v
    }

    pub fn y(&self) -> Vec<BigInt> {
        let mut v = self.identity();
        v[1] = BigInt::from(1);
        v
    }
}
