// SPDX-License-Identifier: Apache-2.0

//! Exhaustive enumeration of rings up to an order bound and the survey table
//! built over them.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed::closed_spectrum;
use crate::error::{Error, Result};
use crate::graph::{cayley_graph, triangle_count_oracle};
use crate::invariants::{energy_closed, hyperenergetic, ramanujan_check, ramanujan_classified, triangles_closed};
use crate::oracle::{character_spectrum, match_spectra};
use crate::report::MATCH_TOLERANCE;
use crate::ring::numtheory::is_prime;
use crate::ring::{Classification, LocalRingSpec, RingSpec};

/// Local rings of order at most `max_order`: `GF(p^s)` for `s >= 1`, and
/// `Z_{p^a}`, `F_p[x]/(x^a)` for `a >= 2`. `Z_p` is the field `F_p`.
pub fn local_specs(max_order: u64) -> Vec<LocalRingSpec> {
    let mut out = Vec::new();
    for p in (2..=max_order).filter(|&p| is_prime(p)) {
        let mut e = 1u32;
        let mut order = p;
        while order <= max_order {
            out.push(LocalRingSpec::field(p, e).expect("prime base"));
            if e >= 2 {
                out.push(LocalRingSpec::zmod(p, e).expect("prime base"));
                out.push(LocalRingSpec::truncated(p, e).expect("prime base"));
            }
            match order.checked_mul(p) {
                Some(next) => order = next,
                None => break,
            }
            e += 1;
        }
    }
    out.sort();
    out
}

/// Every product of local rings with order at most `max_order`, one per
/// multiset of factors, sorted by order then canonical name.
pub fn enumerate_rings(max_order: u64) -> Vec<RingSpec> {
    fn extend(
        locals: &[LocalRingSpec],
        start: usize,
        budget: u64,
        acc: &mut Vec<LocalRingSpec>,
        out: &mut Vec<RingSpec>,
    ) {
        for (i, f) in locals.iter().enumerate().skip(start) {
            if f.order() > budget {
                continue;
            }
            acc.push(*f);
            out.push(RingSpec::new(acc.clone()).expect("non-empty factor list"));
            extend(locals, i, budget / f.order(), acc, out);
            acc.pop();
        }
    }
    let locals = local_specs(max_order);
    let mut out = Vec::new();
    extend(&locals, 0, max_order, &mut Vec::new(), &mut out);
    let mut keyed: Vec<(u64, String, RingSpec)> = out.into_iter().map(|r| (r.order(), r.to_string(), r)).collect();
    keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    keyed.into_iter().map(|(_, _, r)| r).collect()
}

/// Supported rings only.
pub fn enumerate_supported(max_order: u64) -> Vec<RingSpec> {
    enumerate_rings(max_order)
        .into_iter()
        .filter(|r| r.build().classification() != Classification::Unsupported)
        .collect()
}

/// One survey row. Column order is the CSV header order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub ring: String,
    pub order: u64,
    pub classification: Classification,
    pub degree: u64,
    pub energy: String,
    pub energy_approx: f64,
    pub hyperenergetic_computed: bool,
    pub hyperenergetic_classifier: bool,
    pub ramanujan_computed: bool,
    pub ramanujan_classifier: bool,
    pub triangles: u64,
    pub spectrum_agree: bool,
    pub triangles_agree: bool,
    pub hyperenergetic_agree: bool,
    pub ramanujan_agree: bool,
}

pub fn survey_row(spec: &RingSpec, cap: u64) -> Result<SurveyRow> {
    let ring = spec.build_with_cap(cap);
    let spectrum = closed_spectrum(&ring)?;
    let degree = spectrum
        .largest()
        .value
        .to_integer()
        .and_then(|d| d.to_u64())
        .ok_or_else(|| Error::NonIntegerResult(spectrum.largest().value.to_string()))?;
    let energy = energy_closed(&ring)?;
    let hyper = hyperenergetic(&ring)?;
    let hyper_classifier = hyper.classifier.unwrap_or(hyper.computed);
    let ram_computed = ramanujan_check(&spectrum, degree)?;
    let ram_classifier = ramanujan_classified(&ring)?;
    let triangles = triangles_closed(&ring)?;
    let triangles = triangles
        .to_u64()
        .ok_or_else(|| Error::NonIntegerResult(triangles.to_string()))?;
    let spectrum_agree = match_spectra(&spectrum, &character_spectrum(&ring)?, MATCH_TOLERANCE)?.pass;
    let triangles_agree = triangle_count_oracle(&cayley_graph(&ring)?)? == triangles;
    Ok(SurveyRow {
        ring: ring.canonical(),
        order: ring.order(),
        classification: ring.classification(),
        degree,
        energy: energy.to_string(),
        energy_approx: energy.to_f64(),
        hyperenergetic_computed: hyper.computed,
        hyperenergetic_classifier: hyper_classifier,
        ramanujan_computed: ram_computed,
        ramanujan_classifier: ram_classifier,
        triangles,
        spectrum_agree,
        triangles_agree,
        hyperenergetic_agree: hyper.computed == hyper_classifier,
        ramanujan_agree: ram_computed == ram_classifier,
    })
}

/// Rows for every supported ring with `|R| <= max_order`, computed in
/// parallel and returned in enumeration order.
pub fn survey(max_order: u64, cap: u64) -> Result<Vec<SurveyRow>> {
    if max_order > cap {
        return Err(Error::SizeCapExceeded { order: max_order, cap });
    }
    enumerate_supported(max_order)
        .par_iter()
        .map(|spec| survey_row(spec, cap))
        .collect()
}
