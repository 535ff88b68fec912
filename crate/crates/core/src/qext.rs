// SPDX-License-Identifier: Apache-2.0

//! Exact numbers of the form `sum c_d * sqrt(d)` with rational `c_d` and
//! squarefree radicands `d` (`d = 1` is the rational part).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ring::numtheory::{factorize, prime_power};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QuadExt {
    terms: BTreeMap<u64, BigRational>,
}

/// Split `n > 0` as `a^2 * d` with `d` squarefree.
fn square_part(n: u64) -> (u64, u64) {
    let (mut outside, mut inside) = (1u64, 1u64);
    for (p, e) in factorize(n) {
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            inside *= p;
        }
    }
    (outside, inside)
}

impl QuadExt {
    pub fn zero() -> Self {
        QuadExt::default()
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::term(1, r)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `c * sqrt(d)` for squarefree `d`.
    fn term(d: u64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(d, c);
        }
        QuadExt { terms }
    }

    /// `sqrt(n)` for any positive integer, reduced to squarefree form.
    pub fn sqrt(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let (outside, inside) = square_part(n);
        Self::term(inside, BigRational::from_integer(outside.into()))
    }

    /// `sqrt(p^s)`: `p^(s/2)` for even `s`, else `p^((s-1)/2) * sqrt(p)`.
    pub fn sqrt_of_prime_power(q: u64) -> Result<Self> {
        let (p, s) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let outside = BigRational::from_integer(p.pow(s / 2).into());
        Ok(if s % 2 == 0 {
            Self::term(1, outside)
        } else {
            Self::term(p, outside)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Radicand/coefficient pairs, ascending by radicand.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&d, c)| (d, c))
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        QuadExt {
            terms: self.terms.iter().map(|(&d, c)| (d, c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    fn add_term(&mut self, d: u64, c: BigRational) {
        let slot = self.terms.entry(d).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Float value with a bound on its absolute error.
    pub fn approx(&self) -> (f64, f64) {
        let mut value = 0.0f64;
        let mut magnitude = 0.0f64;
        for (&d, c) in &self.terms {
            let term = c.to_f64().unwrap_or(f64::NAN) * (d as f64).sqrt();
            value += term;
            magnitude += term.abs();
        }
        let k = self.terms.len() as f64;
        (value, magnitude * (k + 4.0) * f64::EPSILON)
    }

    pub fn to_f64(&self) -> f64 {
        self.approx().0
    }

    /// Certified sign. A single term is decided exactly; otherwise the float
    /// value must clear its error bound.
    pub fn signum(&self) -> Result<Ordering> {
        match self.terms.len() {
            0 => return Ok(Ordering::Equal),
            1 => {
                let c = self.terms.values().next().unwrap();
                return Ok(if c.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                });
            }
            _ => {}
        }
        let (v, err) = self.approx();
        if !v.is_finite() || v.abs() <= err {
            return Err(Error::PrecisionLoss(self.to_string()));
        }
        Ok(if v > 0.0 { Ordering::Greater } else { Ordering::Less })
    }

    pub fn abs(&self) -> Result<Self> {
        Ok(match self.signum()? {
            Ordering::Less => -self,
            _ => self.clone(),
        })
    }

    /// Exact numeric comparison.
    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        (self - other).signum()
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            terms: self.terms.iter().map(|(&d, c)| (d, -c)).collect(),
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let mut out = self.clone();
        for (&d, c) in &rhs.terms {
            out.add_term(d, c.clone());
        }
        out
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        let mut out = self.clone();
        for (&d, c) in &rhs.terms {
            out.add_term(d, -c);
        }
        out
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let mut out = QuadExt::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                // sqrt(a) sqrt(b) = g sqrt(ab / g^2)
                let g = a.gcd(&b);
                let radicand = (a / g).checked_mul(b / g).expect("radicand overflow");
                let c = ca * cb * BigRational::from_integer(g.into());
                out.add_term(radicand, c);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: QuadExt) -> QuadExt { (&self).$m(&rhs) }
        }
        impl $tr<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $m(self, rhs: &QuadExt) -> QuadExt { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for QuadExt {
    fn sum<I: Iterator<Item = QuadExt>>(iter: I) -> QuadExt {
        iter.fold(QuadExt::zero(), |a, b| a + b)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_integer(n)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadExt {
    /// `a/b + c/d*sqrt(5) - sqrt(13)`, radicands ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&d, c)) in self.terms.iter().enumerate() {
            let shown = if i == 0 {
                c.clone()
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
                c.abs()
            };
            if d == 1 {
                f.write_str(&fmt_rational(&shown))?;
            } else if shown.is_one() {
                write!(f, "sqrt({d})")?;
            } else if (-&shown).is_one() {
                write!(f, "-sqrt({d})")?;
            } else {
                write!(f, "{}*sqrt({d})", fmt_rational(&shown))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExt({self})")
    }
}

/// JSON form: `{"1": "a/b", "5": "c/d"}`.
impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(d, c)| (d.to_string(), fmt_rational(c)))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let map = BTreeMap::<String, String>::deserialize(de)?;
        let mut out = QuadExt::zero();
        for (d, c) in map {
            let d: u64 = d.parse().map_err(D::Error::custom)?;
            if d == 0 || square_part(d).0 != 1 {
                return Err(D::Error::custom(format!("radicand {d} is not squarefree")));
            }
            let c: BigRational = c.parse().map_err(D::Error::custom)?;
            out.add_term(d, c);
        }
        Ok(out)
    }
}
