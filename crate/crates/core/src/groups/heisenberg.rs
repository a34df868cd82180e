//! Discrete Heisenberg group `H_k` in coordinates `(x_1..x_k, y_1..y_k, z)`,
//! optionally reduced modulo `m`.
//!
//! Product: `(x, y, z)(x', y', z') = (x + x', y + y', z + z' + <x, y'>)`.
//! Inverse: `(x, y, z)^-1 = (-x, -y, <x, y> - z)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug)]
pub struct Heisenberg {
    pub k: usize,
    pub modulus: Option<BigInt>,
}

impl Heisenberg {
    pub fn dim(&self) -> usize {
        2 * self.k + 1
    }

    pub fn reduce(&self, coords: &mut [BigInt]) {
        if let Some(m) = &self.modulus {
            for c in coords.iter_mut() {
                *c = c.mod_floor(m);
            }
        }
    }

    pub fn is_canonical(&self, coords: &[BigInt]) -> bool {
        coords.len() == self.dim()
            && match &self.modulus {
                Some(m) => coords.iter().all(|c| !c.is_negative() && c < m),
                None => true,
            }
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let k = self.k;
        let mut out: Vec<BigInt> = a.iter().zip(b).map(|(p, q)| p + q).collect();
        for i in 0..k {
            out[2 * k] += &a[i] * &b[k + i];
        }
        self.reduce(&mut out);
        out
    }

    pub fn inv(&self, a: &[BigInt]) -> Vec<BigInt> {
        let k = self.k;
        let mut out: Vec<BigInt> = a.iter().map(|c| -c).collect();
        let mut z = -&a[2 * k];
        for i in 0..k {
            z += &a[i] * &a[k + i];
        }
        out[2 * k] = z;
        self.reduce(&mut out);
        out
    }

    pub fn identity(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.dim()]
    }

    /// Unit vector `e_i` (0-based, `i < 2k`) with zero central coordinate.
    pub fn unit(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.identity();
        v[i] = BigInt::from(1);
        self.reduce(&mut v);
        v
    }
}
