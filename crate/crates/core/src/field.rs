//! Prime fields `F_p` and dense square matrices over them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported modulus.
pub const MAX_PRIME: u32 = 257;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} exceeds the supported maximum of {MAX_PRIME}")]
    TooLarge(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    /// Inverse of a non-zero element.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The non-zero residues `1..p`.
    pub fn units(self) -> impl Iterator<Item = u32> {
        1..self.p
    }
}

/// A dense `n × n` matrix over `F_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    n: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, n: usize) -> Self {
        FpMatrix {
            field,
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(field: PrimeField, d: &[u32]) -> Self {
        let mut m = Self::zeros(field, d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(field, n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x % field.modulus());
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.n + j] = x;
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.n, other.n, "shape mismatch");
        let f = self.field;
        let n = self.n;
        let mut out = FpMatrix::zeros(f, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<FpMatrix> {
        let f = self.field;
        let n = self.n;
        let mut a = self.clone();
        let mut inv = FpMatrix::identity(f, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| a.get(r, col) != 0)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let s = f.inv(a.get(col, col));
            a.scale_row(col, s);
            inv.scale_row(col, s);
            for r in 0..n {
                let factor = a.get(r, col);
                if r == col || factor == 0 {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(factor, a.get(col, j))));
                    inv.set(r, j, f.sub(inv.get(r, j), f.mul(factor, inv.get(col, j))));
                }
            }
        }
        Some(inv)
    }

    pub fn is_identity(&self) -> bool {
        *self == FpMatrix::identity(self.field, self.n)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }

    fn scale_row(&mut self, r: usize, s: u32) {
        for j in 0..self.n {
            let v = self.field.mul(self.get(r, j), s);
            self.set(r, j, v);
        }
    }

    /// Column shuffle `A^g`: entry `(i, j)` is `A(i, perm(j))`.
    pub fn shuffle_right(&self, perm: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.n);
        for i in 0..self.n {
            for (j, &pj) in perm.iter().enumerate() {
                out.set(i, j, self.get(i, pj));
            }
        }
        out
    }

    /// Row shuffle `^gA`: entry `(i, j)` is `A(perm(i), j)`.
    pub fn shuffle_left(&self, perm: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.field, self.n);
        for (i, &pi) in perm.iter().enumerate() {
            for j in 0..self.n {
                out.set(i, j, self.get(pi, j));
            }
        }
        out
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }
}
