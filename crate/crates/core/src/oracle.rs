// SPDX-License-Identifier: Apache-2.0

//! Brute-force spectra that share nothing with the closed forms: character
//! sums over the additive group, a cyclic Jacobi eigensolver on the dense
//! adjacency matrix, and exact closed-walk counts.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::closed::Spectrum;
use crate::error::{Error, Result};
use crate::graph::{connection_set, Graph};
use crate::ring::ProductRing;

pub const JACOBI_MAX_SWEEPS: usize = 50;
pub const IMAGINARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Character,
    Jacobi,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Character => "CHARACTER",
            Method::Jacobi => "JACOBI",
        })
    }
}

/// Ascending float eigenvalues of one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSpectrum {
    pub values: Vec<f64>,
    pub method: Method,
}

impl NumericSpectrum {
    fn sorted(mut values: Vec<f64>, method: Method) -> Self {
        values.sort_by(f64::total_cmp);
        NumericSpectrum { values, method }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }

    pub fn power_sum(&self, k: i32) -> f64 {
        self.values.iter().map(|v| v.powi(k)).sum()
    }

    /// Largest `|λ|` excluding eigenvalues within `tol` of `±r`.
    pub fn nontrivial_radius(&self, r: f64, tol: f64) -> f64 {
        self.values
            .iter()
            .filter(|v| (v.abs() - r).abs() > tol)
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `λ_a = sum_{t in T} exp(2πi <a, t>)` for every character `a` of the
/// additive group `Z_{d_1} x .. x Z_{d_r}`.
pub fn character_spectrum(ring: &ProductRing) -> Result<NumericSpectrum> {
    let n = ring.check_cap()?;
    let coords = ring.additive_coordinates();
    let orders = coords.orders().to_vec();
    let t: Vec<Vec<u64>> = connection_set(ring)?
        .into_iter()
        .map(|x| coords.encode(ring, x))
        .collect();
    // Phases as exact fractions of a full turn over the common denominator.
    let lcm = orders.iter().fold(1u64, |l, &d| num_integer::lcm(l, d));
    let weights: Vec<u64> = orders.iter().map(|&d| lcm / d).collect();
    let turn: Vec<(f64, f64)> = (0..lcm)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / lcm as f64;
            (theta.cos(), theta.sin())
        })
        .collect();

    let mut values = Vec::with_capacity(n);
    let mut a = vec![0u64; orders.len()];
    for _ in 0..n {
        let (mut re, mut im) = (0.0, 0.0);
        for ts in &t {
            let phase = ts
                .iter()
                .zip(&a)
                .zip(&weights)
                .fold(0u64, |acc, ((&tj, &aj), &w)| (acc + (aj * tj % lcm) * w) % lcm);
            re += turn[phase as usize].0;
            im += turn[phase as usize].1;
        }
        if im.abs() >= IMAGINARY_TOLERANCE {
            return Err(Error::NonRealCharacterSum(im));
        }
        values.push(re);
        // next character index, last coordinate fastest
        for j in (0..a.len()).rev() {
            a[j] += 1;
            if a[j] < orders[j] {
                break;
            }
            a[j] = 0;
        }
    }
    Ok(NumericSpectrum::sorted(values, Method::Character))
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops
/// below `1e-10 * n`.
pub fn jacobi_spectrum(g: &Graph) -> Result<NumericSpectrum> {
    if g.has_loops() {
        return Err(Error::LoopsPresent);
    }
    jacobi_eigenvalues(g.n(), g.adjacency_matrix().concat()).map(|v| NumericSpectrum::sorted(v, Method::Jacobi))
}

/// Eigenvalues of a dense symmetric matrix given row-major.
pub fn jacobi_eigenvalues(n: usize, a: Vec<f64>) -> Result<Vec<f64>> {
    jacobi_with_limit(n, a, JACOBI_MAX_SWEEPS)
}

fn jacobi_with_limit(n: usize, mut a: Vec<f64>, max_sweeps: usize) -> Result<Vec<f64>> {
    let tol = 1e-10 * n.max(1) as f64;
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off < tol {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k * n + p] = new_kp;
                    a[p * n + k] = new_kp;
                    a[k * n + q] = new_kq;
                    a[q * n + k] = new_kq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

/// `s_k = trace(A^k)` for `k = 0..=k_max`, exactly. Each vertex's closed
/// walks are counted by repeated matrix-vector products in `u128`, falling
/// back to big integers on overflow.
pub fn walk_moments(g: &Graph, k_max: usize) -> Vec<BigInt> {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|u| g.neighbors(u).collect()).collect();
    let mut totals = vec![BigInt::from(0); k_max + 1];
    for v in 0..n {
        match closed_walks_u128(&adj, v, k_max) {
            Some(counts) => {
                for (t, c) in totals.iter_mut().zip(counts) {
                    *t += c;
                }
            }
            None => {
                for (t, c) in totals.iter_mut().zip(closed_walks_big(&adj, v, k_max)) {
                    *t += c;
                }
            }
        }
    }
    totals
}

fn closed_walks_u128(adj: &[Vec<usize>], v: usize, k_max: usize) -> Option<Vec<u128>> {
    let n = adj.len();
    let mut x = vec![0u128; n];
    x[v] = 1;
    let mut out = vec![1u128];
    for _ in 0..k_max {
        let mut y = vec![0u128; n];
        for (u, nbrs) in adj.iter().enumerate() {
            let mut acc = 0u128;
            for &w in nbrs {
                acc = acc.checked_add(x[w])?;
            }
            y[u] = acc;
        }
        out.push(y[v]);
        x = y;
    }
    Some(out)
}

fn closed_walks_big(adj: &[Vec<usize>], v: usize, k_max: usize) -> Vec<BigInt> {
    let n = adj.len();
    let mut x = vec![BigInt::from(0); n];
    x[v] = BigInt::from(1);
    let mut out = vec![BigInt::from(1)];
    for _ in 0..k_max {
        let y: Vec<BigInt> = adj.iter().map(|nbrs| nbrs.iter().map(|&w| &x[w]).sum()).collect();
        out.push(y[v].clone());
        x = y;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub method: Method,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Expands the closed spectrum to sorted floats and compares positionally.
pub fn match_spectra(closed: &Spectrum, numeric: &NumericSpectrum, tol: f64) -> Result<MatchReport> {
    if closed.total_multiplicity() != numeric.len() as u64 {
        return Err(Error::CardinalityMismatch {
            closed: closed.total_multiplicity(),
            numeric: numeric.len(),
        });
    }
    let max_dev = closed
        .expand_f64()
        .iter()
        .zip(&numeric.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(MatchReport {
        method: numeric.method,
        max_dev,
        tol,
        pass: max_dev < tol,
    })
}

/// Positional comparison of two numeric spectra.
pub fn max_deviation(a: &NumericSpectrum, b: &NumericSpectrum) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.values
        .iter()
        .zip(&b.values)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
