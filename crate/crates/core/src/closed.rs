// SPDX-License-Identifier: Apache-2.0

//! Closed-form spectra of quadratic unitary Cayley graphs as exact
//! multisets of multiquadratic numbers.
//!
//! For a ring `R = R_1 x .. x R_s` whose residue orders `q_i` are all
//! `1 mod 4`, every disjoint pair `(A, B)` of factor positions contributes
//!
//! ```text
//! λ_{A,B} = (-1)^|B| |R^x| / (2^s prod_{i in A} (sqrt q_i + 1) prod_{j in B} (sqrt q_j - 1))
//! ```
//!
//! with multiplicity `prod_{k in A ∪ B} (q_k - 1) / 2`. A single extra factor
//! `R_0` with `q_0 = 3 mod 4` scales each value by `|R_0^x|` and adds a
//! second family `-m_0 λ_{A,B}` of `q_0 - 1` times the multiplicity.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qext::QuadExt;
use crate::ring::{Classification, LocalRing, ProductRing};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: QuadExt,
    pub approx: f64,
    pub multiplicity: u64,
}

/// Distinct eigenvalues with multiplicities, descending by value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    /// Merges equal values and drops zero multiplicities.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (QuadExt, u64)>) -> Self {
        let mut merged: Vec<(QuadExt, u64)> = Vec::new();
        for (value, mult) in pairs {
            if mult == 0 {
                continue;
            }
            match merged.iter_mut().find(|(v, _)| *v == value) {
                Some(slot) => slot.1 += mult,
                None => merged.push((value, mult)),
            }
        }
        merged.sort_by(|(a, _), (b, _)| b.cmp_value(a).unwrap_or_else(|_| b.to_f64().total_cmp(&a.to_f64())));
        Spectrum {
            entries: merged
                .into_iter()
                .map(|(value, multiplicity)| SpectrumEntry {
                    approx: value.to_f64(),
                    value,
                    multiplicity,
                })
                .collect(),
        }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// `sum mult * λ^k`, exactly.
    pub fn moment(&self, k: u32) -> QuadExt {
        self.entries
            .iter()
            .map(|e| e.value.pow(k).scale_int(e.multiplicity as i64))
            .sum()
    }

    pub fn largest(&self) -> &SpectrumEntry {
        &self.entries[0]
    }

    pub fn multiplicity_of(&self, value: &QuadExt) -> u64 {
        self.entries
            .iter()
            .find(|e| e.value == *value)
            .map_or(0, |e| e.multiplicity)
    }

    /// All eigenvalues as floats, ascending, each repeated by multiplicity.
    pub fn expand_f64(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.approx, e.multiplicity as usize))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }

    /// Spectrum of a tensor product: all pairwise products.
    pub fn tensor(&self, other: &Spectrum) -> Spectrum {
        Spectrum::from_pairs(self.entries.iter().flat_map(|a| {
            other
                .entries
                .iter()
                .map(move |b| (&a.value * &b.value, a.multiplicity * b.multiplicity))
        }))
    }

    /// Negates the value of the first entry below the top that is nonzero.
    /// Used to check that verification notices a wrong sign.
    pub fn with_flipped_sign(&self) -> Spectrum {
        let mut pairs: Vec<(QuadExt, u64)> = self.entries.iter().map(|e| (e.value.clone(), e.multiplicity)).collect();
        if let Some(slot) = pairs.iter_mut().skip(1).find(|(v, _)| !v.is_zero()) {
            slot.0 = -&slot.0;
        }
        Spectrum::from_pairs(pairs)
    }
}

fn odd_residue(local: &LocalRing) -> Result<u64> {
    let q = local.residue_order();
    if q.is_multiple_of(2) {
        Err(Error::EvenCharacteristicUnsupported(q))
    } else {
        Ok(q)
    }
}

fn int(n: u64) -> QuadExt {
    QuadExt::from_integer(n)
}

/// Spectrum of `G_R` for a single local ring with odd residue order.
pub fn local_spectrum(local: &LocalRing) -> Result<Spectrum> {
    let q = odd_residue(local)?;
    let order = local.order() as u64;
    let m = local.ideal_order() as u64;
    let zeros = (int(0), order - q);
    Ok(if q % 4 == 1 {
        let root = QuadExt::sqrt_of_prime_power(q)?;
        let half_m = QuadExt::from_rational(BigRational::new(m.into(), 2.into()));
        let plus = &half_m * &(&root - &QuadExt::one());
        let minus = &half_m * &(-&root - QuadExt::one());
        Spectrum::from_pairs([
            (
                QuadExt::from_rational(BigRational::new((order - m).into(), 2.into())),
                1,
            ),
            (plus, (q - 1) / 2),
            (minus, (q - 1) / 2),
            zeros,
        ])
    } else {
        Spectrum::from_pairs([(int(order - m), 1), (-int(m), q - 1), zeros])
    })
}

/// Where each `q = 1 mod 4` factor sits in a disjoint pair `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Neither,
    InA,
    InB,
}

/// All `3^s` assignments of factors to `A`, `B` or neither.
fn disjoint_pairs(s: usize) -> impl Iterator<Item = Vec<Slot>> {
    (0..3usize.pow(s as u32)).map(move |mut code| {
        (0..s)
            .map(|_| {
                let slot = [Slot::Neither, Slot::InA, Slot::InB][code % 3];
                code /= 3;
                slot
            })
            .collect()
    })
}

/// `λ_{A,B}` over the given factors, with denominators rationalised:
/// `1/(sqrt q + 1) = (sqrt q - 1)/(q - 1)` and `1/(sqrt q - 1) = (sqrt q + 1)/(q - 1)`.
fn lambda_over(factors: &[&LocalRing], slots: &[Slot]) -> Result<QuadExt> {
    let units: u64 = factors.iter().map(|f| f.spec().unit_count()).product();
    let s = factors.len() as u32;
    let mut value = QuadExt::from_rational(BigRational::new(units.into(), BigInt::from(2u64.pow(s))));
    for (f, slot) in factors.iter().zip(slots) {
        let q = f.residue_order();
        let root = QuadExt::sqrt_of_prime_power(q)?;
        let over = BigRational::new(1.into(), (q - 1).into());
        match slot {
            Slot::Neither => {}
            Slot::InA => value = &value * &(&root - &QuadExt::one()).scale(&over),
            Slot::InB => value = -(&value * &(&root + &QuadExt::one()).scale(&over)),
        }
    }
    Ok(value)
}

fn pair_multiplicity(factors: &[&LocalRing], slots: &[Slot]) -> u64 {
    factors
        .iter()
        .zip(slots)
        .filter(|(_, &s)| s != Slot::Neither)
        .map(|(f, _)| (f.residue_order() - 1) / 2)
        .product()
}

/// `λ_{A,B}` for an `ALL_1MOD4` ring. `a` and `b` are 1-based factor
/// positions in sorted order.
pub fn lambda_ab(ring: &ProductRing, a: &[usize], b: &[usize]) -> Result<QuadExt> {
    if ring.classification() != Classification::All1Mod4 {
        return Err(Error::WrongClassification);
    }
    let factors = ring.one_mod4_factors();
    let mut slots = vec![Slot::Neither; factors.len()];
    for (set, tag) in [(a, Slot::InA), (b, Slot::InB)] {
        for &i in set {
            if i == 0 || i > factors.len() {
                return Err(Error::BadFactorIndex(i));
            }
            if slots[i - 1] != Slot::Neither {
                return Err(Error::OverlappingSets);
            }
            slots[i - 1] = tag;
        }
    }
    lambda_over(&factors, &slots)
}

fn residue_product(factors: &[&LocalRing]) -> u64 {
    factors.iter().map(|f| f.residue_order()).product()
}

pub fn spectrum_all_1mod4(ring: &ProductRing) -> Result<Spectrum> {
    if ring.classification() != Classification::All1Mod4 {
        return Err(Error::WrongClassification);
    }
    let factors = ring.one_mod4_factors();
    let mut pairs = Vec::new();
    for slots in disjoint_pairs(factors.len()) {
        pairs.push((lambda_over(&factors, &slots)?, pair_multiplicity(&factors, &slots)));
    }
    pairs.push((QuadExt::zero(), ring.order() - residue_product(&factors)));
    Ok(Spectrum::from_pairs(pairs))
}

pub fn spectrum_one_3mod4(ring: &ProductRing) -> Result<Spectrum> {
    if ring.classification() != Classification::One3Mod4 {
        return Err(Error::WrongClassification);
    }
    let r0 = &ring.factors()[ring.r0_index().expect("ONE_3MOD4 has an R_0")];
    let rest = ring.one_mod4_factors();
    if rest.is_empty() {
        return local_spectrum(r0);
    }
    let q0 = r0.residue_order();
    let r0_units = int(r0.spec().unit_count());
    // |R_0^x| / (q_0 - 1) = m_0
    let scaled_down = -int(r0.ideal_order() as u64);
    let mut pairs = Vec::new();
    for slots in disjoint_pairs(rest.len()) {
        let lambda = lambda_over(&rest, &slots)?;
        let mult = pair_multiplicity(&rest, &slots);
        pairs.push((&r0_units * &lambda, mult));
        pairs.push((&scaled_down * &lambda, mult * (q0 - 1)));
    }
    pairs.push((QuadExt::zero(), ring.order() - q0 * residue_product(&rest)));
    Ok(Spectrum::from_pairs(pairs))
}

/// Dispatches on classification; rings outside the two supported classes
/// are rejected.
pub fn closed_spectrum(ring: &ProductRing) -> Result<Spectrum> {
    match ring.classification() {
        Classification::Unsupported => Err(Error::UnsupportedRingClass { ring: ring.canonical() }),
        _ if ring.is_local() => local_spectrum(&ring.factors()[0]),
        Classification::All1Mod4 => spectrum_all_1mod4(ring),
        Classification::One3Mod4 => spectrum_one_3mod4(ring),
    }
}
