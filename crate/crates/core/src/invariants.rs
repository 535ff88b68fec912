// SPDX-License-Identifier: Apache-2.0

//! Energy, hyperenergetic status, spectral moments, triangle counts and the
//! Ramanujan property, each available both from closed forms and from a
//! spectrum. All threshold decisions are made in exact arithmetic.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::closed::Spectrum;
use crate::error::{Error, Result};
use crate::qext::QuadExt;
use crate::ring::{Classification, LocalRing, ProductRing};

/// The supported-class split `R_0 x R_1 x .. x R_s` of a ring.
struct Split<'a> {
    r0: Option<&'a LocalRing>,
    rest: Vec<&'a LocalRing>,
}

fn split(ring: &ProductRing) -> Result<Split<'_>> {
    match ring.classification() {
        Classification::Unsupported => Err(Error::UnsupportedRingClass { ring: ring.canonical() }),
        _ => Ok(Split {
            r0: ring.r0_index().map(|i| &ring.factors()[i]),
            rest: ring.one_mod4_factors(),
        }),
    }
}

fn int(n: u64) -> QuadExt {
    QuadExt::from_integer(n)
}

fn sqrt_q(f: &LocalRing) -> QuadExt {
    QuadExt::sqrt_of_prime_power(f.residue_order()).expect("residue order is a prime power")
}

/// `|R^x| / 2^s * prod (sqrt q_i + 1)`, times `2 |R_0^x|` when `R_0` is present.
pub fn energy_closed(ring: &ProductRing) -> Result<QuadExt> {
    let parts = split(ring)?;
    let units: u64 = parts.rest.iter().map(|f| f.spec().unit_count()).product();
    let s = parts.rest.len() as u32;
    let mut energy = QuadExt::from_rational(BigRational::new(units.into(), BigInt::from(2u64.pow(s))));
    for f in &parts.rest {
        energy = &energy * &(&sqrt_q(f) + &QuadExt::one());
    }
    if let Some(r0) = parts.r0 {
        energy = energy.scale_int(2 * r0.spec().unit_count() as i64);
    }
    Ok(energy)
}

/// `sum mult * |λ|` with each sign certified.
pub fn energy_of_spectrum(spec: &Spectrum) -> Result<QuadExt> {
    let mut total = QuadExt::zero();
    for e in spec.entries() {
        total = &total + &e.value.abs()?.scale_int(e.multiplicity as i64);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub computed: bool,
    pub classifier: Option<bool>,
}

impl Verdict {
    pub fn agrees(&self) -> Option<bool> {
        self.classifier.map(|c| c == self.computed)
    }
}

/// Exception list for `E(G) > 2(n - 1)` by residue orders. A lone factor
/// with `q = 3 mod 4` has energy `2 |R^x| <= 2(n - 1)` and is never
/// hyperenergetic.
pub fn hyperenergetic_classifier(ring: &ProductRing) -> Result<bool> {
    let parts = split(ring)?;
    let qs: Vec<u64> = parts.rest.iter().map(|f| f.residue_order()).collect();
    Ok(match parts.r0 {
        None => !matches!(qs.as_slice(), [5] | [5, 5]),
        Some(_) if qs.is_empty() => false,
        Some(r0) => !(r0.residue_order() == 3 && qs == [5]),
    })
}

/// Strict `E(G) > 2(n - 1)` decided exactly, paired with the classifier.
pub fn hyperenergetic(ring: &ProductRing) -> Result<Verdict> {
    let energy = energy_closed(ring)?;
    let bound = int(2 * (ring.order() - 1));
    Ok(Verdict {
        computed: energy.cmp_value(&bound)? == Ordering::Greater,
        classifier: Some(hyperenergetic_classifier(ring)?),
    })
}

/// `s_k` of one local factor's graph.
fn local_moment(f: &LocalRing, k: u32) -> Result<BigInt> {
    let q = f.residue_order();
    let m = BigInt::from(f.ideal_order());
    let mk = m.pow(k);
    let q1 = BigInt::from(q - 1);
    if q % 4 == 3 {
        let sign = if k.is_multiple_of(2) {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        return Ok(mk * &q1 * (q1.pow(k - 1) + sign));
    }
    let root = sqrt_q(f);
    let one = QuadExt::one();
    let inner = &QuadExt::from_integer(q1.pow(k - 1) * 2) + &(&(&root - &one).pow(k) + &(-&root - one).pow(k));
    let scale = BigRational::new(mk * q1, BigInt::from(2u64).pow(k + 1));
    let value = inner.scale(&scale);
    value
        .to_integer()
        .ok_or_else(|| Error::NonIntegerResult(value.to_string()))
}

/// `s_k(G_R)` as the product of per-factor local moments.
pub fn moment_closed(ring: &ProductRing, k: u32) -> Result<BigInt> {
    assert!(k >= 1, "moments are indexed from 1");
    let parts = split(ring)?;
    parts
        .r0
        .into_iter()
        .chain(parts.rest.iter().copied())
        .try_fold(BigInt::one(), |acc, f| Ok(acc * local_moment(f, k)?))
}

/// `n_3 = prod(factor terms) / (6 * 8^s)` where the `R_0` term is
/// `m |R| |R^x| (q - 2)` and each `q = 1 mod 4` term is `m |R| |R^x| (q - 5)`.
pub fn triangles_closed(ring: &ProductRing) -> Result<BigInt> {
    let parts = split(ring)?;
    let term = |f: &LocalRing, shift: i64| {
        BigInt::from(f.ideal_order())
            * BigInt::from(f.order())
            * BigInt::from(f.spec().unit_count())
            * (BigInt::from(f.residue_order()) - shift)
    };
    let mut numer = BigInt::one();
    if let Some(r0) = parts.r0 {
        numer *= term(r0, 2);
    }
    for f in &parts.rest {
        numer *= term(f, 5);
    }
    let denom = BigInt::from(6) * BigInt::from(8).pow(parts.rest.len() as u32);
    let (quot, rem) = numer.div_rem(&denom);
    if !rem.is_zero() {
        return Err(Error::NonIntegerResult(format!("{numer}/{denom}")));
    }
    Ok(quot)
}

/// `λ(G)^2 <= 4(r - 1)` where `λ(G)` is the largest `|λ|` over eigenvalues
/// other than `±r`.
pub fn ramanujan_check(spec: &Spectrum, degree: u64) -> Result<bool> {
    let r = int(degree);
    let top = spec.multiplicity_of(&r);
    if top != 1 {
        return Err(Error::Disconnected(top));
    }
    let minus_r = -&r;
    let mut radius = QuadExt::zero();
    for e in spec.entries() {
        if e.value == r || e.value == minus_r {
            continue;
        }
        let a = e.value.abs()?;
        if a.cmp_value(&radius)? == Ordering::Greater {
            radius = a;
        }
    }
    let bound = int(4 * degree.saturating_sub(1));
    Ok((&radius * &radius).cmp_value(&bound)? != Ordering::Greater)
}

/// Classification by ring shape alone, no spectrum involved.
pub fn ramanujan_classified(ring: &ProductRing) -> Result<bool> {
    let parts = split(ring)?;
    let fields_with = |fs: &[&LocalRing], qs: &[u64]| -> bool {
        fs.iter().all(|f| f.spec().is_field()) && fs.iter().map(|f| f.residue_order()).eq(qs.iter().copied())
    };
    Ok(match parts.r0 {
        Some(r0) if parts.rest.is_empty() => {
            let m0 = r0.ideal_order() as u64;
            4 * r0.order() as u64 >= (m0 + 2) * (m0 + 2)
        }
        None => match parts.rest.as_slice() {
            [f] => f.spec().is_field(),
            fs @ [_, _] => fields_with(fs, &[5, 5]),
            _ => false,
        },
        Some(r0) => {
            r0.spec().is_field()
                && r0.residue_order() == 3
                && parts.rest.len() == 1
                && [5, 9, 13].iter().any(|&q| fields_with(&parts.rest, &[q]))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed::closed_spectrum;

    fn ring(s: &str) -> ProductRing {
        ProductRing::parse(s).unwrap()
    }

    #[test]
    fn energies() {
        assert_eq!(energy_closed(&ring("Z9")).unwrap(), QuadExt::from(12));
        let s5 = QuadExt::sqrt(5);
        assert_eq!(
            energy_closed(&ring("F5*F5")).unwrap(),
            &QuadExt::from(24) + &s5.scale_int(8)
        );
        assert_eq!(
            energy_closed(&ring("F3*F5")).unwrap(),
            (&s5 + &QuadExt::one()).scale_int(8)
        );
        let z5 = energy_of_spectrum(&closed_spectrum(&ring("Z5")).unwrap()).unwrap();
        assert_eq!(z5, (&s5 + &QuadExt::one()).scale_int(2));
        let f35 = ring("F3*F5");
        assert_eq!(
            energy_of_spectrum(&closed_spectrum(&f35).unwrap()).unwrap(),
            energy_closed(&f35).unwrap()
        );
        assert!(energy_of_spectrum(&Spectrum::from_pairs([(QuadExt::zero(), 4)]))
            .unwrap()
            .is_zero());
        assert!(matches!(
            energy_closed(&ring("F3*F7")),
            Err(Error::UnsupportedRingClass { .. })
        ));
    }

    #[test]
    fn hyperenergetic_examples() {
        let f13 = hyperenergetic(&ring("F13")).unwrap();
        assert_eq!(
            f13,
            Verdict {
                computed: true,
                classifier: Some(true)
            }
        );
        let f55 = hyperenergetic(&ring("F5*F5")).unwrap();
        assert_eq!(
            f55,
            Verdict {
                computed: false,
                classifier: Some(false)
            }
        );
        // E = 16 = 2(n - 1) exactly: strict inequality fails.
        assert_eq!(energy_closed(&ring("F9")).unwrap(), QuadExt::from(16));
        let f9 = hyperenergetic(&ring("F9")).unwrap();
        assert_eq!(
            f9,
            Verdict {
                computed: false,
                classifier: Some(true)
            }
        );
        assert_eq!(f9.agrees(), Some(false));
        let z9 = hyperenergetic(&ring("Z9")).unwrap();
        assert_eq!(
            z9,
            Verdict {
                computed: false,
                classifier: Some(false)
            }
        );
    }

    #[test]
    fn moments() {
        assert_eq!(moment_closed(&ring("Z9"), 3).unwrap(), 162.into());
        assert_eq!(moment_closed(&ring("Z5"), 2).unwrap(), 10.into());
        for s in ["Z9", "F5*F13", "Z45", "F3*F9", "F25*Z25"] {
            assert_eq!(moment_closed(&ring(s), 1).unwrap(), 0.into(), "{s}");
        }
        // Multiplicativity over a tensor decomposition.
        assert_eq!(
            moment_closed(&ring("F3*F13"), 4).unwrap(),
            moment_closed(&ring("F3"), 4).unwrap() * moment_closed(&ring("F13"), 4).unwrap()
        );
    }

    #[test]
    fn moments_match_spectrum_power_sums() {
        for s in ["F5*F9", "Z45", "F7*F5*F5", "Z125"] {
            let r = ring(s);
            let sp = closed_spectrum(&r).unwrap();
            for k in 1..=6 {
                assert_eq!(
                    QuadExt::from_integer(moment_closed(&r, k).unwrap()),
                    sp.moment(k),
                    "{s} k={k}"
                );
            }
        }
    }

    #[test]
    fn triangles() {
        assert_eq!(triangles_closed(&ring("Z3")).unwrap(), 1.into());
        assert_eq!(triangles_closed(&ring("Z13")).unwrap(), 26.into());
        assert_eq!(triangles_closed(&ring("Z5")).unwrap(), 0.into());
        assert_eq!(triangles_closed(&ring("Z9")).unwrap(), 27.into());
        // p(p-1)(p-5)/48 for p = 1 mod 4, p(p-1)(p-2)/6 for p = 3 mod 4
        assert_eq!(triangles_closed(&ring("Z17")).unwrap(), (17 * 16 * 12 / 48).into());
        assert_eq!(triangles_closed(&ring("Z11")).unwrap(), (11 * 10 * 9 / 6).into());
        for s in ["F3*F13", "Z45", "F9*F13"] {
            let r = ring(s);
            assert_eq!(triangles_closed(&r).unwrap() * 6, moment_closed(&r, 3).unwrap(), "{s}");
        }
    }

    #[test]
    fn ramanujan_checks() {
        let r = ring("F3*F5");
        assert!(ramanujan_check(&closed_spectrum(&r).unwrap(), 4).unwrap());
        let z27 = ring("Z27");
        assert!(!ramanujan_check(&closed_spectrum(&z27).unwrap(), 18).unwrap());
        let z49 = ring("Z49");
        assert!(ramanujan_check(&closed_spectrum(&z49).unwrap(), 42).unwrap());
        let two_components = Spectrum::from_pairs([(QuadExt::from(2), 2), (QuadExt::from(-1), 4)]);
        assert_eq!(ramanujan_check(&two_components, 2), Err(Error::Disconnected(2)));
    }

    #[test]
    fn ramanujan_classifier() {
        assert!(ramanujan_classified(&ring("Z9")).unwrap());
        assert!(!ramanujan_classified(&ring("Z25")).unwrap());
        assert!(ramanujan_classified(&ring("F3*F13")).unwrap());
        assert!(ramanujan_classified(&ring("F3*F9")).unwrap());
        assert!(!ramanujan_classified(&ring("F3*F17")).unwrap());
        assert!(!ramanujan_classified(&ring("Z27")).unwrap());
        assert!(ramanujan_classified(&ring("F5*F5")).unwrap());
        assert!(!ramanujan_classified(&ring("F5*F9")).unwrap());
        assert!(!ramanujan_classified(&ring("F5[x]/(x^2)")).unwrap());
        assert!(!ramanujan_classified(&ring("Z9*F5")).unwrap());
    }
}
