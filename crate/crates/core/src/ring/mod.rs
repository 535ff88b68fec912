// SPDX-License-Identifier: Apache-2.0

//! Finite commutative rings as normalized products of explicit local rings.

mod local;
pub mod numtheory;
mod parse;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use local::{LocalKind, LocalRing, LocalRingSpec};

use crate::error::{Error, Result};

/// Default limit on the order of rings whose elements get materialized.
pub const DEFAULT_CAP: u64 = 100_000;

/// A parsed ring: local factors sorted by `(q, |R|, kind)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    factors: Vec<LocalRingSpec>,
}

impl RingSpec {
    pub fn new(mut factors: Vec<LocalRingSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "ring needs at least one factor".into(),
            });
        }
        factors.sort();
        let spec = RingSpec { factors };
        spec.checked_order().ok_or(Error::SizeCapExceeded {
            order: u64::MAX,
            cap: u64::MAX,
        })?;
        Ok(spec)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse::parse_factors(text)?)
    }

    pub fn factors(&self) -> &[LocalRingSpec] {
        &self.factors
    }

    fn checked_order(&self) -> Option<u64> {
        self.factors.iter().try_fold(1u64, |acc, f| acc.checked_mul(f.order()))
    }

    pub fn order(&self) -> u64 {
        self.checked_order().unwrap()
    }

    pub fn build(&self) -> ProductRing {
        ProductRing::from_spec(self.clone(), DEFAULT_CAP)
    }

    pub fn build_with_cap(&self, cap: u64) -> ProductRing {
        ProductRing::from_spec(self.clone(), cap)
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// Every residue order is `1 mod 4`.
    #[serde(rename = "ALL_1MOD4")]
    All1Mod4,
    /// Exactly one residue order is `3 mod 4`, the rest `1 mod 4`.
    #[serde(rename = "ONE_3MOD4")]
    One3Mod4,
    /// Even residue order, or two or more factors with `q = 3 mod 4`.
    Unsupported,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::All1Mod4 => "ALL_1MOD4",
            Classification::One3Mod4 => "ONE_3MOD4",
            Classification::Unsupported => "UNSUPPORTED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorProfile {
    pub order: u64,
    pub ideal_order: u64,
    pub residue_order: u64,
    pub residue_mod4: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueProfile {
    pub factors: Vec<FactorProfile>,
    pub classification: Classification,
}

/// Additive group of a ring as `Z_{d_1} x .. x Z_{d_r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveCoordinates {
    orders: Vec<u64>,
    /// Per local factor: (first coordinate slot, number of slots).
    layout: Vec<(usize, usize)>,
}

impl AdditiveCoordinates {
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn encode(&self, ring: &ProductRing, x: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.orders.len());
        for (local, component) in ring.factors.iter().zip(ring.split(x)) {
            out.extend(local.coefficients(component));
        }
        out
    }

    pub fn decode(&self, ring: &ProductRing, coords: &[u64]) -> usize {
        let parts: Vec<usize> = ring
            .factors
            .iter()
            .zip(&self.layout)
            .map(|(local, &(start, len))| local.from_coefficients(&coords[start..start + len]))
            .collect();
        ring.join(&parts)
    }
}

/// A built product ring. Element indices are mixed-radix over the factors
/// with the first factor most significant, so the index of `(x_1, .., x_s)`
/// is the row-major position used by iterated tensor products.
#[derive(Debug, Clone)]
pub struct ProductRing {
    spec: RingSpec,
    factors: Vec<LocalRing>,
    strides: Vec<usize>,
    order: u64,
    cap: u64,
}

impl ProductRing {
    fn from_spec(spec: RingSpec, cap: u64) -> Self {
        let factors: Vec<LocalRing> = spec.factors.iter().map(|&s| LocalRing::build(s)).collect();
        let order = spec.order();
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1].saturating_mul(factors[i + 1].order());
        }
        ProductRing {
            spec,
            factors,
            strides,
            order,
            cap,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(RingSpec::parse(text)?.build())
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn canonical(&self) -> String {
        self.spec.to_string()
    }

    pub fn factors(&self) -> &[LocalRing] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Fails with `SizeCapExceeded` when the ring is too large to enumerate.
    pub fn check_cap(&self) -> Result<usize> {
        if self.order > self.cap {
            Err(Error::SizeCapExceeded {
                order: self.order,
                cap: self.cap,
            })
        } else {
            Ok(self.order as usize)
        }
    }

    /// `|R^x| = prod (|R_i| - m_i)`.
    pub fn unit_count(&self) -> u64 {
        self.spec.factors.iter().map(|f| f.unit_count()).product()
    }

    pub fn split(&self, x: usize) -> Vec<usize> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(f, &s)| (x / s) % f.order())
            .collect()
    }

    pub fn join(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.strides).map(|(&c, &s)| c * s).sum()
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.strides.iter().sum()
    }

    fn check_index(&self, x: usize) -> Result<()> {
        if (x as u64) < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: x,
                order: self.order as usize,
            })
        }
    }

    fn componentwise(&self, x: usize, y: usize, op: impl Fn(&LocalRing, usize, usize) -> usize) -> usize {
        let (xs, ys) = (self.split(x), self.split(y));
        let parts: Vec<usize> = self
            .factors
            .iter()
            .zip(xs.into_iter().zip(ys))
            .map(|(f, (a, b))| op(f, a, b))
            .collect();
        self.join(&parts)
    }

    pub fn add(&self, x: usize, y: usize) -> Result<usize> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn neg(&self, x: usize) -> Result<usize> {
        self.check_index(x)?;
        Ok(self.neg_unchecked(x))
    }

    pub fn mul(&self, x: usize, y: usize) -> Result<usize> {
        self.check_index(x)?;
        self.check_index(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn add_unchecked(&self, x: usize, y: usize) -> usize {
        self.componentwise(x, y, LocalRing::add)
    }

    pub(crate) fn neg_unchecked(&self, x: usize) -> usize {
        self.componentwise(x, 0, |f, a, _| f.neg(a))
    }

    pub(crate) fn mul_unchecked(&self, x: usize, y: usize) -> usize {
        self.componentwise(x, y, LocalRing::mul)
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.factors.iter().zip(self.split(x)).all(|(f, c)| f.is_unit(c))
    }

    /// All units, ascending by index.
    pub fn units(&self) -> Result<Vec<usize>> {
        let n = self.check_cap()?;
        Ok((0..n).filter(|&x| self.is_unit(x)).collect())
    }

    pub fn residue_profile(&self) -> ResidueProfile {
        let factors: Vec<FactorProfile> = self
            .spec
            .factors
            .iter()
            .map(|f| FactorProfile {
                order: f.order(),
                ideal_order: f.ideal_order(),
                residue_order: f.residue_order(),
                residue_mod4: f.residue_order() % 4,
            })
            .collect();
        let even = factors.iter().any(|f| f.residue_order % 2 == 0);
        let threes = factors.iter().filter(|f| f.residue_mod4 == 3).count();
        let classification = match (even, threes) {
            (false, 0) => Classification::All1Mod4,
            (false, 1) => Classification::One3Mod4,
            _ => Classification::Unsupported,
        };
        ResidueProfile {
            factors,
            classification,
        }
    }

    pub fn classification(&self) -> Classification {
        self.residue_profile().classification
    }

    /// Position of the unique factor with `q = 3 mod 4`, when the ring is
    /// `ONE_3MOD4`.
    pub fn r0_index(&self) -> Option<usize> {
        if self.classification() != Classification::One3Mod4 {
            return None;
        }
        self.factors.iter().position(|f| f.residue_order() % 4 == 3)
    }

    /// Factors with `q = 1 mod 4`, in sorted order. These are `R_1..R_s`.
    pub fn one_mod4_factors(&self) -> Vec<&LocalRing> {
        self.factors.iter().filter(|f| f.residue_order() % 4 == 1).collect()
    }

    pub fn additive_coordinates(&self) -> AdditiveCoordinates {
        let mut orders = Vec::new();
        let mut layout = Vec::new();
        for f in &self.factors {
            let o = f.additive_orders();
            layout.push((orders.len(), o.len()));
            orders.extend(o);
        }
        AdditiveCoordinates { orders, layout }
    }

    pub fn is_local(&self) -> bool {
        self.factors.len() == 1
    }
}

impl fmt::Display for ProductRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> ProductRing {
        ProductRing::parse(s).unwrap()
    }

    #[test]
    fn normalization_sorts_by_residue_order() {
        assert_eq!(RingSpec::parse("F9*F5").unwrap().to_string(), "F5*F9");
        assert_eq!(RingSpec::parse("Z45").unwrap().to_string(), "Z9*Z5");
        assert_eq!(
            RingSpec::parse("F5[x]/(x^2) * Z25 * F25").unwrap().to_string(),
            "Z25*F5[x]/(x^2)*F25"
        );
    }

    #[test]
    fn unit_counts() {
        assert_eq!(ring("Z45").units().unwrap().len(), 24);
        assert_eq!(ring("Z9").units().unwrap(), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(ring("F9*F5").units().unwrap().len(), 32);
        assert_eq!(ring("F9*F5").unit_count(), 32);
    }

    #[test]
    fn residue_profiles() {
        let p = ring("Z45").residue_profile();
        let rows: Vec<_> = p
            .factors
            .iter()
            .map(|f| (f.order, f.ideal_order, f.residue_order, f.residue_mod4))
            .collect();
        assert_eq!(rows, vec![(9, 3, 3, 3), (5, 1, 5, 1)]);
        assert_eq!(p.classification, Classification::One3Mod4);
        assert_eq!(ring("F5*F13").classification(), Classification::All1Mod4);
        assert_eq!(ring("F3*F7").classification(), Classification::Unsupported);
        assert_eq!(ring("F4").classification(), Classification::Unsupported);
        assert_eq!(ring("Z45").r0_index(), Some(0));
    }

    #[test]
    fn additive_orders() {
        assert_eq!(ring("Z9").additive_coordinates().orders(), &[9]);
        assert_eq!(ring("F9").additive_coordinates().orders(), &[3, 3]);
        assert_eq!(ring("Z45").additive_coordinates().orders(), &[9, 5]);
        assert_eq!(ring("F3[x]/(x^3)").additive_coordinates().orders(), &[3, 3, 3]);
    }

    #[test]
    fn arithmetic_identities() {
        let r = ring("F9*Z5");
        let one = r.one();
        for x in 0..45 {
            assert_eq!(r.add(x, 0).unwrap(), x);
            assert_eq!(r.mul(x, one).unwrap(), x);
            assert_eq!(r.add(x, r.neg(x).unwrap()).unwrap(), 0);
        }
        assert!(matches!(
            r.add(45, 0),
            Err(Error::IndexOutOfRange { index: 45, order: 45 })
        ));
    }

    #[test]
    fn cap_enforced() {
        let r = RingSpec::parse("Z1000003").unwrap().build();
        assert!(matches!(r.units(), Err(Error::SizeCapExceeded { .. })));
        let small = RingSpec::parse("F13").unwrap().build_with_cap(10);
        assert!(matches!(
            small.check_cap(),
            Err(Error::SizeCapExceeded { order: 13, cap: 10 })
        ));
    }
}
