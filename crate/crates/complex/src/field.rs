//! Arithmetic in the prime field with `p` elements.

use crate::ComplexError;

/// A prime modulus. All matrix and complex arithmetic is carried out modulo
/// one of these; constructing a `Field` is the only place primality is
/// checked.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Field {
    p: u64,
}

impl Field {
    pub fn new(p: u64) -> Result<Self, ComplexError> {
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(ComplexError::NotPrime(p));
        }
        Ok(Field { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    /// Canonical representative in `0..p` of an integer.
    pub fn norm(&self, x: i128) -> u64 {
        let p = self.p as i128;
        (((x % p) + p) % p) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Inverse by Fermat's little theorem; `a` must be nonzero mod `p`.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        a %= self.p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
}
