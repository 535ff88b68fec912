// SPDX-License-Identifier: Apache-2.0

//! Finite local rings: `Z/p^a`, `GF(p^s)` and `F_p[X]/(X^k)`.
//!
//! Elements are indexed `0..order`. For `Z/p^a` the index is the residue
//! itself. For the two polynomial kinds the index is the coefficient vector
//! read as a base-`p` number with the constant term as the least significant
//! digit, so index 0 is zero, index 1 is one and index `p` is `X`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::numtheory::is_prime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalKind {
    /// `Z/p^a`.
    ZmodPK,
    /// `GF(p^s)`.
    GaloisField,
    /// `F_p[X]/(X^k)`.
    TruncatedPoly,
}

/// Parameters of one local factor. `exp` is `a`, `s` or `k` depending on kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalRingSpec {
    pub kind: LocalKind,
    pub p: u64,
    pub exp: u32,
}

impl LocalRingSpec {
    pub fn new(kind: LocalKind, p: u64, exp: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if exp == 0 {
            return Err(Error::Parse {
                pos: 0,
                msg: "exponent must be at least 1".into(),
            });
        }
        if p.checked_pow(exp).is_none() {
            return Err(Error::SizeCapExceeded {
                order: u64::MAX,
                cap: u64::MAX,
            });
        }
        Ok(LocalRingSpec { kind, p, exp })
    }

    pub fn zmod(p: u64, alpha: u32) -> Result<Self> {
        Self::new(LocalKind::ZmodPK, p, alpha)
    }

    pub fn field(p: u64, s: u32) -> Result<Self> {
        Self::new(LocalKind::GaloisField, p, s)
    }

    pub fn truncated(p: u64, k: u32) -> Result<Self> {
        Self::new(LocalKind::TruncatedPoly, p, k)
    }

    /// `|R|`.
    pub fn order(&self) -> u64 {
        self.p.pow(self.exp)
    }

    /// Order `m` of the maximal ideal.
    pub fn ideal_order(&self) -> u64 {
        match self.kind {
            LocalKind::GaloisField => 1,
            LocalKind::ZmodPK | LocalKind::TruncatedPoly => self.p.pow(self.exp - 1),
        }
    }

    /// Residue field order `q = |R| / m`.
    pub fn residue_order(&self) -> u64 {
        match self.kind {
            LocalKind::GaloisField => self.order(),
            LocalKind::ZmodPK | LocalKind::TruncatedPoly => self.p,
        }
    }

    pub fn unit_count(&self) -> u64 {
        self.order() - self.ideal_order()
    }

    pub fn is_field(&self) -> bool {
        self.ideal_order() == 1
    }

    fn sort_key(&self) -> (u64, u64, LocalKind, u64) {
        (self.residue_order(), self.order(), self.kind, self.p)
    }
}

impl PartialOrd for LocalRingSpec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LocalRingSpec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for LocalRingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LocalKind::ZmodPK => write!(f, "Z{}", self.order()),
            LocalKind::GaloisField => write!(f, "F{}", self.order()),
            LocalKind::TruncatedPoly => write!(f, "F{}[x]/(x^{})", self.p, self.exp),
        }
    }
}

/// A built local ring with on-the-fly arithmetic on element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRing {
    spec: LocalRingSpec,
    order: usize,
    /// Low coefficients `c_0..c_{s-1}` of the monic modulus (GF only).
    modulus: Vec<u64>,
}

impl LocalRing {
    pub fn build(spec: LocalRingSpec) -> Self {
        let order = spec.order() as usize;
        let modulus = match spec.kind {
            LocalKind::GaloisField => smallest_irreducible(spec.p, spec.exp as usize),
            _ => Vec::new(),
        };
        LocalRing { spec, order, modulus }
    }

    pub fn spec(&self) -> &LocalRingSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ideal_order(&self) -> usize {
        self.spec.ideal_order() as usize
    }

    pub fn residue_order(&self) -> u64 {
        self.spec.residue_order()
    }

    /// Full modulus polynomial, constant term first, leading coefficient
    /// included. `GaloisField` gets its irreducible, `TruncatedPoly` gets
    /// `X^k`, `ZmodPK` has none.
    pub fn modulus(&self) -> Option<Vec<u64>> {
        match self.spec.kind {
            LocalKind::ZmodPK => None,
            LocalKind::GaloisField => {
                let mut m = self.modulus.clone();
                m.push(1);
                Some(m)
            }
            LocalKind::TruncatedPoly => {
                let mut m = vec![0; self.spec.exp as usize];
                m.push(1);
                Some(m)
            }
        }
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        1
    }

    /// Number of base-`p` digits in the coefficient representation.
    fn digits(&self) -> usize {
        match self.spec.kind {
            LocalKind::ZmodPK => 1,
            _ => self.spec.exp as usize,
        }
    }

    /// Coefficient vector (constant term first) for polynomial kinds, or the
    /// residue itself for `Z/p^a`.
    pub fn coefficients(&self, x: usize) -> Vec<u64> {
        if self.spec.kind == LocalKind::ZmodPK {
            return vec![x as u64];
        }
        let p = self.spec.p as usize;
        let mut x = x;
        (0..self.digits())
            .map(|_| {
                let d = x % p;
                x /= p;
                d as u64
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u64]) -> usize {
        if self.spec.kind == LocalKind::ZmodPK {
            return coeffs[0] as usize % self.order;
        }
        let p = self.spec.p;
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c % p) as usize
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        match self.spec.kind {
            LocalKind::ZmodPK => (x + y) % self.order,
            _ => {
                let p = self.spec.p as usize;
                let (mut x, mut y) = (x, y);
                let (mut out, mut place) = (0usize, 1usize);
                for _ in 0..self.digits() {
                    out += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                out
            }
        }
    }

    pub fn neg(&self, x: usize) -> usize {
        match self.spec.kind {
            LocalKind::ZmodPK => (self.order - x) % self.order,
            _ => {
                let p = self.spec.p as usize;
                let mut x = x;
                let (mut out, mut place) = (0usize, 1usize);
                for _ in 0..self.digits() {
                    out += ((p - x % p) % p) * place;
                    x /= p;
                    place *= p;
                }
                out
            }
        }
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        match self.spec.kind {
            LocalKind::ZmodPK => ((x as u128 * y as u128) % self.order as u128) as usize,
            LocalKind::GaloisField => {
                let p = self.spec.p;
                let prod = poly_mul(&self.coefficients(x), &self.coefficients(y), p);
                let mut full = self.modulus.clone();
                full.push(1);
                self.from_coefficients(&poly_rem(prod, &full, p))
            }
            LocalKind::TruncatedPoly => {
                let p = self.spec.p;
                let mut prod = poly_mul(&self.coefficients(x), &self.coefficients(y), p);
                prod.truncate(self.digits());
                self.from_coefficients(&prod)
            }
        }
    }

    /// Units are exactly the elements outside the maximal ideal.
    pub fn is_unit(&self, x: usize) -> bool {
        match self.spec.kind {
            LocalKind::ZmodPK => !(x as u64).is_multiple_of(self.spec.p),
            LocalKind::GaloisField => x != 0,
            LocalKind::TruncatedPoly => !(x as u64).is_multiple_of(self.spec.p),
        }
    }

    pub fn in_maximal_ideal(&self, x: usize) -> bool {
        !self.is_unit(x)
    }

    /// Additive group as a product of cyclic groups: one factor of order
    /// `p^a` for `Z/p^a`, otherwise one factor of order `p` per coefficient.
    pub fn additive_orders(&self) -> Vec<u64> {
        match self.spec.kind {
            LocalKind::ZmodPK => vec![self.order as u64],
            _ => vec![self.spec.p; self.digits()],
        }
    }
}

/// Product of two polynomials over `F_p`, constant term first.
fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`. The result
/// has exactly `deg m` coefficients.
fn poly_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let deg = m.len() - 1;
    while a.len() > deg {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let base = a.len() - deg;
            for (j, &mj) in m[..deg].iter().enumerate() {
                a[base + j] = (a[base + j] + (p - lead) * mj) % p;
            }
        }
    }
    a.resize(deg, 0);
    a
}

/// Whether the monic polynomial `m` (full, constant first) of degree >= 1
/// has no monic factor of degree between 1 and `deg / 2`.
fn is_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut divisor: Vec<u64> = (0..d)
                .scan(low, |rest, _| {
                    let c = *rest % p;
                    *rest /= p;
                    Some(c)
                })
                .collect();
            divisor.push(1);
            if poly_rem(m.to_vec(), &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `s` over `F_p`, returned as its low
/// coefficients `c_0..c_{s-1}`. Candidates are ordered lexicographically on
/// `(c_0, c_1, .., c_{s-1})`.
fn smallest_irreducible(p: u64, s: usize) -> Vec<u64> {
    let total = p.pow(s as u32);
    for rank in 0..total {
        // c_0 is the most significant digit of `rank`.
        let mut low = vec![0u64; s];
        let mut r = rank;
        for slot in low.iter_mut().rev() {
            *slot = r % p;
            r /= p;
        }
        let mut full = low.clone();
        full.push(1);
        if is_irreducible(&full, p) {
            return low;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
