// SPDX-License-Identifier: Apache-2.0

//! Per-ring reports combining closed forms with the brute-force oracles.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::closed::{closed_spectrum, Spectrum};
use crate::error::{Error, Result};
use crate::graph::{cayley_graph, diameter_bfs, tensor_decomposes, triangle_count_oracle, Graph};
use crate::invariants::{
    energy_closed, hyperenergetic, moment_closed, ramanujan_check, ramanujan_classified, triangles_closed, Verdict,
};
use crate::oracle::{character_spectrum, jacobi_spectrum, match_spectra, walk_moments, MatchReport, NumericSpectrum};
use crate::qext::QuadExt;
use crate::ring::{Classification, ProductRing};

/// Spectra are compared against the oracles at this absolute tolerance.
pub const MATCH_TOLERANCE: f64 = 1e-8;
/// Tolerance for float-only threshold decisions on unsupported rings.
pub const FLOAT_TOLERANCE: f64 = 1e-6;
/// The dense eigensolver is skipped above this vertex count.
pub const JACOBI_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Closed,
    Oracle,
    Both,
}

impl Source {
    fn closed(self) -> bool {
        self != Source::Oracle
    }

    fn oracle(self) -> bool {
        self != Source::Closed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Energy {
    pub exact: Option<QuadExt>,
    pub approx: f64,
}

/// Closed-vs-oracle agreement per quantity; `None` when one side is absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sources {
    pub spectrum_character: Option<bool>,
    pub spectrum_jacobi: Option<bool>,
    pub moments: Option<bool>,
    pub triangles: Option<bool>,
    pub energy: Option<bool>,
}

/// Moments are decimal strings so that large values stay exact in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub ring: String,
    pub order: u64,
    pub classification: Classification,
    pub degree: u64,
    pub energy: Energy,
    pub hyperenergetic: Verdict,
    pub moments: Vec<String>,
    pub triangles: u64,
    pub ramanujan: Option<Verdict>,
    pub sources: Sources,
}

/// A numeric eigenvalue cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericEntry {
    pub approx: f64,
    pub multiplicity: u64,
}

/// Everything `quct report` prints. `diameter` is `None` for a disconnected
/// graph; `tensor_decomposes` is `None` when some residue order is even.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub invariants: InvariantReport,
    pub spectrum: Option<Spectrum>,
    pub numeric_spectrum: Option<Vec<NumericEntry>>,
    pub diameter: Option<usize>,
    pub tensor_decomposes: Option<bool>,
    pub matches: Vec<MatchReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub source: Source,
    pub k_max: u32,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            source: Source::Both,
            k_max: 4,
        }
    }
}

/// Groups sorted floats whose neighbours differ by less than `FLOAT_TOLERANCE`.
pub fn cluster(numeric: &NumericSpectrum) -> Vec<NumericEntry> {
    let mut out: Vec<(f64, u64, f64)> = Vec::new();
    for &v in numeric.values.iter().rev() {
        match out.last_mut() {
            Some((sum, count, last)) if (*last - v).abs() < FLOAT_TOLERANCE => {
                *sum += v;
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter()
        .map(|(sum, count, _)| {
            let approx = sum / count as f64;
            NumericEntry {
                approx: if approx.abs() < FLOAT_TOLERANCE { 0.0 } else { approx },
                multiplicity: count,
            }
        })
        .collect()
}

fn to_u64(n: &num_bigint::BigInt) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::NonIntegerResult(n.to_string()))
}

struct Oracles {
    graph: Graph,
    character: NumericSpectrum,
    jacobi: Option<NumericSpectrum>,
    walks: Vec<num_bigint::BigInt>,
    triangles: u64,
}

fn oracles(ring: &ProductRing, k_max: u32) -> Result<Oracles> {
    let graph = cayley_graph(ring)?;
    let character = character_spectrum(ring)?;
    let jacobi = if graph.n() <= JACOBI_LIMIT {
        Some(jacobi_spectrum(&graph)?)
    } else {
        None
    };
    let walks = walk_moments(&graph, k_max as usize);
    let triangles = triangle_count_oracle(&graph)?;
    Ok(Oracles {
        graph,
        character,
        jacobi,
        walks,
        triangles,
    })
}

/// Float Ramanujan test, `None` when the top eigenvalue repeats.
fn numeric_ramanujan(numeric: &NumericSpectrum, r: f64) -> Option<bool> {
    let top = numeric
        .values
        .iter()
        .filter(|v| (*v - r).abs() < FLOAT_TOLERANCE)
        .count();
    if top != 1 {
        return None;
    }
    let lambda = numeric.nontrivial_radius(r, FLOAT_TOLERANCE);
    Some(lambda * lambda <= 4.0 * (r - 1.0) + FLOAT_TOLERANCE)
}

/// Builds the report. Unsupported rings fail with `UnsupportedRingClass`
/// unless the oracle side was requested alone.
pub fn build_report(ring: &ProductRing, opts: &ReportOptions) -> Result<Report> {
    ring.check_cap()?;
    let supported = ring.classification() != Classification::Unsupported;
    if !supported && opts.source != Source::Oracle {
        return Err(Error::UnsupportedRingClass { ring: ring.canonical() });
    }
    let k_max = opts.k_max.max(1);
    let n = ring.order();
    let oracle = if opts.source.oracle() {
        Some(oracles(ring, k_max)?)
    } else {
        None
    };

    let mut sources = Sources::default();
    let mut matches = Vec::new();
    let (invariants, spectrum) = if opts.source.closed() {
        let spectrum = closed_spectrum(ring)?;
        let degree = spectrum
            .largest()
            .value
            .to_integer()
            .and_then(|d| d.to_u64())
            .unwrap_or(0);
        let energy = energy_closed(ring)?;
        let moments = (1..=k_max)
            .map(|k| moment_closed(ring, k))
            .collect::<Result<Vec<_>>>()?;
        let triangles = to_u64(&triangles_closed(ring)?)?;
        let ramanujan = Verdict {
            computed: ramanujan_check(&spectrum, degree)?,
            classifier: Some(ramanujan_classified(ring)?),
        };
        if let Some(o) = &oracle {
            let m = match_spectra(&spectrum, &o.character, MATCH_TOLERANCE)?;
            sources.spectrum_character = Some(m.pass);
            matches.push(m);
            if let Some(j) = &o.jacobi {
                let m = match_spectra(&spectrum, j, MATCH_TOLERANCE)?;
                sources.spectrum_jacobi = Some(m.pass);
                matches.push(m);
            }
            sources.moments = Some(moments.iter().zip(&o.walks[1..]).all(|(a, b)| a == b));
            sources.triangles = Some(triangles == o.triangles);
            sources.energy = Some((energy.to_f64() - o.character.energy()).abs() < FLOAT_TOLERANCE * n as f64);
        }
        let report = InvariantReport {
            ring: ring.canonical(),
            order: n,
            classification: ring.classification(),
            degree,
            energy: Energy {
                approx: energy.to_f64(),
                exact: Some(energy),
            },
            hyperenergetic: hyperenergetic(ring)?,
            moments: moments.iter().map(|m| m.to_string()).collect(),
            triangles,
            ramanujan: Some(ramanujan),
            sources,
        };
        (report, Some(spectrum))
    } else {
        let o = oracle.as_ref().expect("oracle side requested");
        let degree = o.graph.regular_degree().unwrap_or(0) as u64;
        let energy = o.character.energy();
        let report = InvariantReport {
            ring: ring.canonical(),
            order: n,
            classification: ring.classification(),
            degree,
            energy: Energy {
                exact: None,
                approx: energy,
            },
            hyperenergetic: Verdict {
                computed: energy > 2.0 * (n - 1) as f64 + FLOAT_TOLERANCE,
                classifier: None,
            },
            moments: o.walks[1..].iter().map(|m| m.to_string()).collect(),
            triangles: o.triangles,
            ramanujan: numeric_ramanujan(&o.character, degree as f64).map(|computed| Verdict {
                computed,
                classifier: None,
            }),
            sources,
        };
        (report, None)
    };

    let graph = match oracle {
        Some(o) => Some((o.graph, o.character)),
        None => None,
    };
    let (diameter, numeric_spectrum) = match graph {
        Some((g, character)) => (diameter_bfs(&g), Some(cluster(&character))),
        None => (diameter_bfs(&cayley_graph(ring)?), None),
    };
    Ok(Report {
        invariants,
        spectrum,
        numeric_spectrum,
        diameter,
        tensor_decomposes: tensor_decomposes(ring).ok(),
        matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> ProductRing {
        ProductRing::parse(s).unwrap()
    }

    #[test]
    fn z9_both() {
        let r = build_report(&ring("Z9"), &ReportOptions::default()).unwrap();
        let inv = &r.invariants;
        assert_eq!(inv.degree, 6);
        assert_eq!(inv.energy.exact, Some(QuadExt::from(12)));
        assert_eq!(inv.moments, ["0", "54", "162", "1458"]);
        assert_eq!(inv.triangles, 27);
        assert_eq!(
            inv.ramanujan,
            Some(Verdict {
                computed: true,
                classifier: Some(true)
            })
        );
        assert_eq!(r.diameter, Some(2));
        assert_eq!(r.tensor_decomposes, Some(true));
        assert_eq!(r.matches.len(), 2);
        assert!(r.matches.iter().all(|m| m.pass));
        assert_eq!(
            inv.sources,
            Sources {
                spectrum_character: Some(true),
                spectrum_jacobi: Some(true),
                moments: Some(true),
                triangles: Some(true),
                energy: Some(true),
            }
        );
        let clusters = r.numeric_spectrum.unwrap();
        let mults: Vec<u64> = clusters.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mults, [1, 6, 2]);
    }

    #[test]
    fn closed_only_skips_oracles() {
        let opts = ReportOptions {
            source: Source::Closed,
            k_max: 2,
        };
        let r = build_report(&ring("F3*F5"), &opts).unwrap();
        assert!(r.matches.is_empty());
        assert_eq!(r.invariants.sources, Sources::default());
        assert_eq!(r.invariants.moments.len(), 2);
        assert!((r.invariants.energy.approx - 25.888543819998).abs() < 1e-9);
        assert!(r.numeric_spectrum.is_none());
    }

    #[test]
    fn unsupported_rings() {
        let f37 = ring("F3*F7");
        for source in [Source::Closed, Source::Both] {
            let opts = ReportOptions { source, k_max: 4 };
            assert!(matches!(
                build_report(&f37, &opts),
                Err(Error::UnsupportedRingClass { .. })
            ));
        }
        let opts = ReportOptions {
            source: Source::Oracle,
            k_max: 3,
        };
        let r = build_report(&f37, &opts).unwrap();
        assert_eq!(r.invariants.degree, 6);
        assert_eq!(r.invariants.energy.exact, None);
        assert_eq!(r.tensor_decomposes, Some(false));
        assert_eq!(r.invariants.moments[0], "0");
        assert_eq!(r.invariants.moments[1], (21 * 6).to_string());
    }

    #[test]
    fn oracle_only_matches_closed_values() {
        let opts = ReportOptions {
            source: Source::Oracle,
            k_max: 4,
        };
        let r = build_report(&ring("F13"), &opts).unwrap();
        assert_eq!(r.invariants.triangles, 26);
        assert!(r.invariants.hyperenergetic.computed);
        assert!(r.invariants.ramanujan.unwrap().computed);
    }
}
