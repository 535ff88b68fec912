// SPDX-License-Identifier: Apache-2.0

//! The invariant battery behind `quct verify`: every closed form is checked
//! against the brute-force oracles, and the oracles against each other.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed::{closed_spectrum, Spectrum};
use crate::error::Result;
use crate::graph::{
    cayley_graph, factor_tensor_product, residue_tensor_model, tensor_decomposes, triangle_count_oracle, Graph,
};
use crate::invariants::{
    energy_closed, energy_of_spectrum, hyperenergetic, moment_closed, ramanujan_check, ramanujan_classified,
    triangles_closed,
};
use crate::oracle::{character_spectrum, jacobi_spectrum, match_spectra, max_deviation, walk_moments, NumericSpectrum};
use crate::qext::QuadExt;
use crate::report::MATCH_TOLERANCE;
use crate::ring::{Classification, ProductRing, RingSpec};
use crate::survey::enumerate_rings;

pub const SPECTRUM_MATCH: &str = "spectrum-match";
pub const ORACLE_AGREEMENT: &str = "oracle-agreement";
pub const TRACE_IDENTITIES: &str = "trace-identities";
pub const MOMENTS: &str = "moments";
pub const TRIANGLES: &str = "triangles";
pub const ENERGY: &str = "energy";
pub const RAMANUJAN: &str = "ramanujan";
pub const HYPERENERGETIC: &str = "hyperenergetic";
pub const TENSOR_DECOMPOSITION: &str = "tensor-decomposition";
pub const LOCAL_COSPECTRALITY: &str = "local-cospectrality";

/// Relative tolerance for float power sums against exact walk counts.
const POWER_SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ring: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub k_max: u32,
    /// Negates one eigenvalue of the closed spectrum before any comparison.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            k_max: 6,
            inject_fault: false,
        }
    }
}

struct Battery {
    checks: Vec<Check>,
}

impl Battery {
    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }
}

/// Whether the only factor has residue order 9: there the exact energy is at
/// most `2(n - 1)` while the classifier's exception list says hyperenergetic.
pub fn is_hyperenergetic_boundary(ring: &ProductRing) -> bool {
    ring.factors().len() == 1 && ring.factors()[0].residue_order() == 9
}

pub fn verify_ring(ring: &ProductRing, opts: &VerifyOptions) -> Result<VerifyReport> {
    let graph = cayley_graph(ring)?;
    let character = character_spectrum(ring)?;
    let jacobi = jacobi_spectrum(&graph)?;
    let walks = walk_moments(&graph, opts.k_max.max(3) as usize);
    let triangles = triangle_count_oracle(&graph)?;
    let mut b = Battery { checks: Vec::new() };

    let dev = max_deviation(&character, &jacobi);
    b.push(
        ORACLE_AGREEMENT,
        dev < MATCH_TOLERANCE,
        format!("character vs jacobi max_dev={dev:e}"),
    );

    if ring.classification() == Classification::Unsupported {
        power_sum_checks(&mut b, &jacobi, &walks, triangles);
    } else {
        let mut spectrum = closed_spectrum(ring)?;
        if opts.inject_fault {
            spectrum = spectrum.with_flipped_sign();
        }
        closed_checks(
            &mut b, ring, &graph, &spectrum, &character, &jacobi, &walks, triangles, opts.k_max,
        )?;
    }
    structure_checks(&mut b, ring, &graph, &jacobi)?;

    let pass = b.checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        ring: ring.canonical(),
        pass,
        checks: b.checks,
    })
}

fn power_sum_checks(b: &mut Battery, numeric: &NumericSpectrum, walks: &[BigInt], triangles: u64) {
    let mut bad = Vec::new();
    for (k, exact) in walks.iter().enumerate().skip(1) {
        let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
        let approx = numeric.power_sum(k as i32);
        if (approx - exact_f).abs() > POWER_SUM_TOLERANCE * exact_f.abs().max(numeric.len() as f64) {
            bad.push(k);
        }
    }
    b.push(
        MOMENTS,
        bad.is_empty(),
        format!("walk counts vs power sums, failing k={bad:?}"),
    );
    let from_walks = &walks[3] / 6;
    b.push(
        TRIANGLES,
        BigInt::from(triangles) == from_walks,
        format!("bitset={triangles} s3/6={from_walks}"),
    );
}

#[allow(clippy::too_many_arguments)]
fn closed_checks(
    b: &mut Battery,
    ring: &ProductRing,
    graph: &Graph,
    spectrum: &Spectrum,
    character: &NumericSpectrum,
    jacobi: &NumericSpectrum,
    walks: &[BigInt],
    triangles: u64,
    k_max: u32,
) -> Result<()> {
    let n = ring.order();
    let degree = graph.regular_degree().unwrap_or(0) as u64;

    let by_character = match_spectra(spectrum, character, MATCH_TOLERANCE);
    let by_jacobi = match_spectra(spectrum, jacobi, MATCH_TOLERANCE);
    let (pass, detail) = match (by_character, by_jacobi) {
        (Ok(c), Ok(j)) => (
            c.pass && j.pass,
            format!("character max_dev={:e}, jacobi max_dev={:e}", c.max_dev, j.max_dev),
        ),
        (Err(e), _) | (_, Err(e)) => (false, e.to_string()),
    };
    b.push(SPECTRUM_MATCH, pass, detail);

    let top = spectrum.largest();
    let trace_ok = spectrum.total_multiplicity() == n
        && spectrum.moment(1).is_zero()
        && spectrum.moment(2) == QuadExt::from_integer(n * degree)
        && top.value == QuadExt::from_integer(degree)
        && top.multiplicity == 1;
    b.push(
        TRACE_IDENTITIES,
        trace_ok,
        format!("n={n} degree={degree} top={}^{}", top.value, top.multiplicity),
    );

    let mut bad = Vec::new();
    for k in 1..=k_max {
        if moment_closed(ring, k)? != walks[k as usize] {
            bad.push(k);
        }
    }
    b.push(
        MOMENTS,
        bad.is_empty(),
        format!("closed vs walk counts, failing k={bad:?}"),
    );

    let closed_triangles = triangles_closed(ring)?;
    let ok = closed_triangles == BigInt::from(triangles) && &closed_triangles * 6 == moment_closed(ring, 3)?;
    b.push(TRIANGLES, ok, format!("closed={closed_triangles} bitset={triangles}"));

    let closed_energy = energy_closed(ring)?;
    let spectral_energy = energy_of_spectrum(spectrum)?;
    let numeric_dev = (closed_energy.to_f64() - character.energy()).abs();
    b.push(
        ENERGY,
        closed_energy == spectral_energy && numeric_dev < MATCH_TOLERANCE * n as f64,
        format!("closed={closed_energy} spectrum={spectral_energy} numeric_dev={numeric_dev:e}"),
    );

    let ram = ramanujan_check(spectrum, degree);
    let classified = ramanujan_classified(ring)?;
    let (ok, detail) = match ram {
        Ok(computed) => (
            computed == classified,
            format!("computed={computed} classifier={classified}"),
        ),
        Err(e) => (false, e.to_string()),
    };
    b.push(RAMANUJAN, ok, detail);

    let hyper = hyperenergetic(ring)?;
    let classifier = hyper.classifier.unwrap_or(hyper.computed);
    let expected_disagreement = is_hyperenergetic_boundary(ring);
    b.push(
        HYPERENERGETIC,
        (hyper.computed != classifier) == expected_disagreement,
        format!(
            "computed={} classifier={classifier} boundary_case={expected_disagreement}",
            hyper.computed
        ),
    );
    Ok(())
}

fn structure_checks(b: &mut Battery, ring: &ProductRing, graph: &Graph, jacobi: &NumericSpectrum) -> Result<()> {
    let Ok(criterion) = tensor_decomposes(ring) else {
        return Ok(());
    };
    if ring.factors().len() > 1 {
        let product = factor_tensor_product(ring)?;
        let equal = product.edges() == graph.edges();
        b.push(
            TENSOR_DECOMPOSITION,
            equal == criterion,
            format!("criterion={criterion} edge_sets_equal={equal}"),
        );
    }
    if let [local] = ring.factors() {
        let model = residue_tensor_model(local)?;
        let dev = max_deviation(jacobi, &jacobi_spectrum(&model)?);
        let same_degree = model.regular_degree() == graph.regular_degree();
        b.push(
            LOCAL_COSPECTRALITY,
            dev < MATCH_TOLERANCE && same_degree,
            format!("max_dev={dev:e} same_degree={same_degree}"),
        );
    }
    Ok(())
}

/// Verifies each ring in parallel; reports come back in input order.
pub fn verify_rings(rings: &[RingSpec], cap: u64, opts: &VerifyOptions) -> Result<Vec<VerifyReport>> {
    rings
        .par_iter()
        .map(|spec| verify_ring(&spec.build_with_cap(cap), opts))
        .collect()
}

/// Every enumerated ring up to `max_order`, supported or not.
pub fn verify_up_to(max_order: u64, cap: u64, opts: &VerifyOptions) -> Result<Vec<VerifyReport>> {
    if max_order > cap {
        return Err(crate::error::Error::SizeCapExceeded { order: max_order, cap });
    }
    verify_rings(&enumerate_rings(max_order), cap, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str, opts: VerifyOptions) -> VerifyReport {
        verify_ring(&ProductRing::parse(s).unwrap(), &opts).unwrap()
    }

    fn names(r: &VerifyReport) -> Vec<&str> {
        r.checks.iter().map(|c| c.name.as_str()).collect()
    }

    #[test]
    fn supported_product_runs_full_battery() {
        let r = run("Z45", VerifyOptions::default());
        assert!(r.pass, "{r:?}");
        assert_eq!(
            names(&r),
            [
                ORACLE_AGREEMENT,
                SPECTRUM_MATCH,
                TRACE_IDENTITIES,
                MOMENTS,
                TRIANGLES,
                ENERGY,
                RAMANUJAN,
                HYPERENERGETIC,
                TENSOR_DECOMPOSITION
            ]
        );
    }

    #[test]
    fn local_ring_checks_cospectrality() {
        let r = run("Z25", VerifyOptions::default());
        assert!(r.pass, "{r:?}");
        assert!(names(&r).contains(&LOCAL_COSPECTRALITY));
        assert!(!names(&r).contains(&TENSOR_DECOMPOSITION));
    }

    #[test]
    fn f9_boundary_is_expected() {
        let r = run("F9", VerifyOptions::default());
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn unsupported_rings_use_oracles_only() {
        let r = run("F3*F7", VerifyOptions::default());
        assert!(r.pass, "{r:?}");
        assert_eq!(names(&r), [ORACLE_AGREEMENT, MOMENTS, TRIANGLES, TENSOR_DECOMPOSITION]);
        let even = run("Z8", VerifyOptions::default());
        assert!(even.pass, "{even:?}");
        assert_eq!(names(&even), [ORACLE_AGREEMENT, MOMENTS, TRIANGLES]);
    }

    #[test]
    fn injected_fault_fails_spectrum_match() {
        let opts = VerifyOptions {
            inject_fault: true,
            ..VerifyOptions::default()
        };
        let r = run("F5*F13", opts);
        assert!(!r.pass);
        assert!(r.failed().any(|c| c.name == SPECTRUM_MATCH));
    }
}
