// SPDX-License-Identifier: Apache-2.0

//! Quadratic unitary Cayley graphs, tensor products and combinatorial oracles.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ring::{LocalRing, LocalRingSpec, ProductRing, RingSpec, DEFAULT_CAP};

/// Dense bitset adjacency. Loops are allowed (pseudographs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    /// Sets `u ~ v` and `v ~ u`.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.set(u, v);
        self.set(v, u);
    }

    fn set(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Common degree (a loop counts once), if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|u| self.degree(u) == d).then_some(d)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|u| self.has_edge(u, u))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.neighbors(u).all(|v| self.has_edge(v, u)))
    }

    /// Edges `u <= v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.neighbors(u).filter(move |&v| v >= u).map(move |v| (u, v)))
            .collect()
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|u| {
                (0..self.n)
                    .map(|v| if self.has_edge(u, v) { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect()
    }

    /// `u v` per line, 0-based.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{}\" {{\n", name.replace('"', "'"));
        for u in 0..self.n {
            writeln!(out, "  {u};").unwrap();
        }
        for (u, v) in self.edges() {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn check_size(n: u64, cap: u64) -> Result<usize> {
    if n > cap {
        Err(Error::SizeCapExceeded { order: n, cap })
    } else {
        Ok(n as usize)
    }
}

/// `Q_R = { u^2 : u unit }`, ascending.
pub fn quadratic_unit_squares(ring: &ProductRing) -> Result<Vec<usize>> {
    let mut squares: Vec<usize> = ring.units()?.into_iter().map(|u| ring.mul_unchecked(u, u)).collect();
    squares.sort_unstable();
    squares.dedup();
    Ok(squares)
}

/// `T_R = Q_R ∪ -Q_R`, ascending.
pub fn connection_set(ring: &ProductRing) -> Result<Vec<usize>> {
    let q = quadratic_unit_squares(ring)?;
    let mut t: Vec<usize> = q
        .iter()
        .map(|&x| ring.neg_unchecked(x))
        .chain(q.iter().copied())
        .collect();
    t.sort_unstable();
    t.dedup();
    Ok(t)
}

/// `x ~ y` iff `x - y ∈ T_R`.
pub fn cayley_graph(ring: &ProductRing) -> Result<Graph> {
    let n = ring.check_cap()?;
    let t = connection_set(ring)?;
    let mut g = Graph::empty(n);
    for x in 0..n {
        for &s in &t {
            g.set(x, ring.add_unchecked(x, s));
        }
    }
    Ok(g)
}

fn odd_residue(local: &LocalRing) -> Result<u64> {
    let q = local.residue_order();
    if q.is_multiple_of(2) {
        Err(Error::EvenCharacteristicUnsupported(q))
    } else {
        Ok(q)
    }
}

/// Whether `-1` is the square of a unit, decided from the residue order.
pub fn minus_one_is_square(local: &LocalRing) -> Result<bool> {
    Ok(odd_residue(local)? % 4 == 1)
}

/// Tensor product with row-major vertex order: `(u, v) -> u * |H| + v`.
pub fn tensor_product(g: &Graph, h: &Graph) -> Result<Graph> {
    tensor_product_capped(g, h, DEFAULT_CAP)
}

pub fn tensor_product_capped(g: &Graph, h: &Graph, cap: u64) -> Result<Graph> {
    let n = check_size(g.n as u64 * h.n as u64, cap)?;
    let mut out = Graph::empty(n);
    let hn = h.n;
    let h_adj: Vec<Vec<usize>> = (0..hn).map(|v| h.neighbors(v).collect()).collect();
    for u in 0..g.n {
        for x in g.neighbors(u) {
            for (v, hv) in h_adj.iter().enumerate() {
                for &y in hv {
                    out.set(u * hn + v, x * hn + y);
                }
            }
        }
    }
    Ok(out)
}

/// `K̊_n`: every pair adjacent, loops included.
pub fn complete_pseudograph(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in 0..n {
            g.set(u, v);
        }
    }
    g
}

pub fn complete_graph(n: usize) -> Graph {
    let mut g = complete_pseudograph(n);
    for u in 0..n {
        g.bits[u * g.words + u / 64] &= !(1 << (u % 64));
    }
    g
}

/// Whether `G_R` equals the tensor product of the factor graphs: at most one
/// factor may have `-1` outside `Q`.
pub fn tensor_decomposes(ring: &ProductRing) -> Result<bool> {
    let mut bad = 0;
    for f in ring.factors() {
        if !minus_one_is_square(f)? {
            bad += 1;
        }
    }
    Ok(bad <= 1)
}

/// Iterated tensor product of the local factors' Cayley graphs, in factor
/// order. Under the ring's mixed-radix indexing this is directly comparable
/// with `cayley_graph(ring)`.
pub fn factor_tensor_product(ring: &ProductRing) -> Result<Graph> {
    ring.check_cap()?;
    let mut acc: Option<Graph> = None;
    for f in ring.factors() {
        let local = RingSpec::new(vec![*f.spec()])?.build_with_cap(ring.cap());
        let g = cayley_graph(&local)?;
        acc = Some(match acc {
            None => g,
            Some(a) => tensor_product_capped(&a, &g, ring.cap())?,
        });
    }
    Ok(acc.expect("ring has at least one factor"))
}

/// `G_{R/M} ⊗ K̊_m` for a local ring with odd residue order.
pub fn residue_tensor_model(local: &LocalRing) -> Result<Graph> {
    let q = odd_residue(local)?;
    let (p, s) = crate::ring::numtheory::prime_power(q).expect("residue order is a prime power");
    let field = RingSpec::new(vec![LocalRingSpec::field(p, s)?])?.build();
    tensor_product(&cayley_graph(&field)?, &complete_pseudograph(local.ideal_order()))
}

/// Triangles via `sum over edges u < v of |N(u) ∩ N(v)|`, divided by 3.
pub fn triangle_count_oracle(g: &Graph) -> Result<u64> {
    if g.has_loops() {
        return Err(Error::LoopsPresent);
    }
    let mut total = 0u64;
    for u in 0..g.n {
        let ru = g.row(u);
        for v in g.neighbors(u).filter(|&v| v > u) {
            total += ru
                .iter()
                .zip(g.row(v))
                .map(|(a, b)| (a & b).count_ones() as u64)
                .sum::<u64>();
        }
    }
    Ok(total / 3)
}

/// Exact diameter by BFS from every vertex; `None` if disconnected.
pub fn diameter_bfs(g: &Graph) -> Option<usize> {
    let mut diameter = 0;
    let mut dist = vec![usize::MAX; g.n];
    let mut queue = VecDeque::new();
    for src in 0..g.n {
        dist.fill(usize::MAX);
        dist[src] = 0;
        queue.push_back(src);
        let mut seen = 1;
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    diameter = diameter.max(dist[v]);
                    seen += 1;
                    queue.push_back(v);
                }
            }
        }
        if seen < g.n {
            return None;
        }
    }
    Some(diameter)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> ProductRing {
        ProductRing::parse(s).unwrap()
    }

    /// Independent square enumeration straight from the residues.
    fn squares_mod(n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (1..n)
            .filter(|u| num_integer::gcd(*u, n) == 1)
            .map(|u| u * u % n)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn squares_and_connection_sets() {
        assert_eq!(quadratic_unit_squares(&ring("Z5")).unwrap(), vec![1, 4]);
        assert_eq!(quadratic_unit_squares(&ring("Z9")).unwrap(), vec![1, 4, 7]);
        assert_eq!(squares_mod(9), vec![1, 4, 7]);
        assert_eq!(quadratic_unit_squares(&ring("F13")).unwrap().len(), 6);
        assert_eq!(connection_set(&ring("Z5")).unwrap(), vec![1, 4]);
        assert_eq!(connection_set(&ring("Z3")).unwrap(), vec![1, 2]);
        assert_eq!(connection_set(&ring("F3*F5")).unwrap().len(), 4);
    }

    #[test]
    fn small_cayley_graphs() {
        let c5 = cayley_graph(&ring("Z5")).unwrap();
        assert_eq!(c5.regular_degree(), Some(2));
        assert_eq!(diameter_bfs(&c5), Some(2));
        assert_eq!(triangle_count_oracle(&c5).unwrap(), 0);

        let k333 = cayley_graph(&ring("Z9")).unwrap();
        assert_eq!(k333.regular_degree(), Some(6));
        for u in 0..9 {
            for v in 0..9 {
                assert_eq!(k333.has_edge(u, v), u % 3 != v % 3);
            }
        }
        assert_eq!(triangle_count_oracle(&k333).unwrap(), 27);
        assert_eq!(diameter_bfs(&k333), Some(2));

        let k3 = cayley_graph(&ring("Z3")).unwrap();
        assert_eq!(triangle_count_oracle(&k3).unwrap(), 1);
        assert_eq!(diameter_bfs(&k3), Some(1));

        let g = cayley_graph(&ring("F3*F5")).unwrap();
        assert_eq!((g.n(), g.regular_degree()), (15, Some(4)));
        assert!(g.is_symmetric() && !g.has_loops());
    }

    #[test]
    fn minus_one() {
        let exhaustive = |s: &str| {
            let r = ring(s);
            let q = quadratic_unit_squares(&r).unwrap();
            q.contains(&r.neg_unchecked(r.one()))
        };
        for s in ["Z5", "Z9", "F9", "Z3", "F13", "F3[x]/(x^2)", "Z25", "F27", "F49"] {
            let r = ring(s);
            assert_eq!(minus_one_is_square(&r.factors()[0]).unwrap(), exhaustive(s), "{s}");
        }
        assert!(minus_one_is_square(&ring("Z5").factors()[0]).unwrap());
        assert!(!minus_one_is_square(&ring("Z9").factors()[0]).unwrap());
        assert!(minus_one_is_square(&ring("F9").factors()[0]).unwrap());
        assert_eq!(
            minus_one_is_square(&ring("F4").factors()[0]),
            Err(Error::EvenCharacteristicUnsupported(4))
        );
    }

    #[test]
    fn tensor_products() {
        let k3 = complete_graph(3);
        let model = tensor_product(&k3, &complete_pseudograph(3)).unwrap();
        // K_3 ⊗ K̊_3 in row-major order: (a, b) ~ (c, d) iff a != c.
        for u in 0..9 {
            for v in 0..9 {
                assert_eq!(model.has_edge(u, v), u / 3 != v / 3);
            }
        }
        let c5 = cayley_graph(&ring("Z5")).unwrap();
        assert_eq!(tensor_product(&c5, &complete_pseudograph(1)).unwrap(), c5);

        let r = ring("F3*F5");
        assert!(tensor_decomposes(&r).unwrap());
        assert_eq!(factor_tensor_product(&r).unwrap(), cayley_graph(&r).unwrap());
        let bad = ring("F3*F7");
        assert!(!tensor_decomposes(&bad).unwrap());
        assert_ne!(factor_tensor_product(&bad).unwrap(), cayley_graph(&bad).unwrap());
        assert!(tensor_decomposes(&ring("F5*F13")).unwrap());
    }

    #[test]
    fn pseudograph() {
        let k1 = complete_pseudograph(1);
        assert!(k1.has_edge(0, 0));
        let k2 = complete_pseudograph(2);
        assert!((0..2).all(|u| (0..2).all(|v| k2.has_edge(u, v))));
        assert_eq!(triangle_count_oracle(&k2), Err(Error::LoopsPresent));
    }

    #[test]
    fn disconnected_diameter() {
        let mut g = Graph::empty(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        assert_eq!(diameter_bfs(&g), None);
    }

    #[test]
    fn exports() {
        let g = cayley_graph(&ring("Z3")).unwrap();
        assert_eq!(g.to_edge_list(), "0 1\n0 2\n1 2\n");
        assert!(g.to_dot("Z3").contains("1 -- 2;"));
    }
}
