//! Deterministic, seedable generators for the graph families used throughout
//! the crate: fixed families (complete, bipartite, cycle, path, grid, Turán,
//! Paley, threshold) and random families (Erdős–Rényi, uniform-attachment,
//! prefix-attachment growth processes).
//!
//! Node ordering conventions are part of the contract:
//! - growth models list nodes in birth order `0..n` (the classical
//!   descriptions are 1-based; all closed forms below are restated 0-based);
//! - `turan` assigns node `v` to class `v % r`;
//! - `grid` uses row-major indexing.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

pub fn empty(n: usize) -> SimpleGraph {
    SimpleGraph::empty(n)
}

pub fn complete(n: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    SimpleGraph::from_edges(n, &edges).expect("valid")
}

pub fn complete_bipartite(a: usize, b: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (0..a)
        .flat_map(|u| (a..a + b).map(move |v| (u, v)))
        .collect();
    SimpleGraph::from_edges(a + b, &edges).expect("valid")
}

pub fn cycle(n: usize) -> SimpleGraph {
    if n < 3 {
        return path(n);
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_edges(n, &edges).expect("valid")
}

pub fn path(n: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    SimpleGraph::from_edges(n, &edges).expect("valid")
}

/// `rows x cols` grid with 4-neighbor adjacency; node `(r, c)` is `r*cols + c`.
pub fn grid(rows: usize, cols: usize) -> SimpleGraph {
    let mut edges = vec![];
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((r * cols + c, r * cols + c + 1));
            }
            if r + 1 < rows {
                edges.push((r * cols + c, (r + 1) * cols + c));
            }
        }
    }
    SimpleGraph::from_edges(rows * cols, &edges).expect("valid")
}

/// Turán graph: complete multipartite with `r` near-equal classes
/// (class of node `v` is `v % r`), the triangle-free-extremal graph at r = 2.
pub fn turan(n: usize, r: usize) -> Result<SimpleGraph> {
    if r == 0 || r > n.max(1) {
        return Err(Error::InvalidParam(format!(
            "turan requires 1 <= r <= n, got n={n}, r={r}"
        )));
    }
    let mut edges = vec![];
    for u in 0..n {
        for v in (u + 1)..n {
            if u % r != v % r {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, &edges)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Paley graph on a prime `p ≡ 1 (mod 4)`: `i ~ j` iff `i - j` is a nonzero
/// quadratic residue mod p (symmetric because -1 is a residue).
pub fn paley(p: usize) -> Result<SimpleGraph> {
    if !is_prime(p as u64) || p % 4 != 1 {
        return Err(Error::InvalidParam(format!(
            "paley requires a prime p = 1 mod 4, got {p}"
        )));
    }
    let mut residue = vec![false; p];
    for x in 1..p {
        residue[(x * x) % p] = true;
    }
    let mut edges = vec![];
    for u in 0..p {
        for v in (u + 1)..p {
            if residue[(v - u) % p] {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(p, &edges)
}

/// Threshold graph: nodes `0..n`, `i ~ j` iff `i + j <= n - 2` for `i != j`
/// (the 1-based rule "i + j <= n" shifted to 0-based indices). Its edge
/// density converges to the half-plane indicator `x + y <= 1`.
pub fn threshold(n: usize) -> SimpleGraph {
    let mut edges = vec![];
    for u in 0..n {
        for v in (u + 1)..n {
            if u + v + 2 <= n {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edges(n, &edges).expect("valid")
}

/// Erdős–Rényi graph G(n, p), each pair independently with probability `p`.
pub fn er(n: usize, p: f64, seed: u64) -> Result<SimpleGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!(
            "edge probability must lie in [0,1], got {p}"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut g = SimpleGraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Uniform-attachment growth graph after `n` rounds: starting from one node,
/// each round adds a node and then joins every nonadjacent pair independently
/// with probability 1/(current node count).
///
/// For the final graph the pair events are independent with
/// P(i ~ j) = 1 - j/n for i < j (0-based birth order), which is what this
/// generator samples directly; expected edge count is (n^2 - 1)/6.
pub fn uniform_attachment(n: usize, seed: u64) -> SimpleGraph {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut g = SimpleGraph::empty(n);
    for j in 1..n {
        let p_edge = 1.0 - (j as f64) / (n as f64);
        for i in 0..j {
            if rng.gen_bool(p_edge) {
                g.add_edge(i, j).expect("valid");
            }
        }
    }
    g
}

/// Prefix-attachment growth graph: node `v` (0-based birth order) picks
/// `z` uniform in `{0, ..., v}` and connects to nodes `0..z`.
///
/// 0-based closed form: P(i ~ j) = (j - i)/(j + 1) for i < j; connections to
/// a common later node are maximally dependent (they form a prefix).
/// Expected edge count is n(n-1)/4.
pub fn prefix_attachment(n: usize, seed: u64) -> SimpleGraph {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut g = SimpleGraph::empty(n);
    for v in 0..n {
        let z = rng.gen_range(0..=v);
        for i in 0..z {
            g.add_edge(i, v).expect("valid");
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphic_simple;

    #[test]
    fn paley_5_is_the_5_cycle() {
        let g = paley(5).unwrap();
        assert!(isomorphic_simple(&g, &cycle(5)).unwrap());
    }

    #[test]
    fn paley_13_is_strongly_regular() {
        // Paley on q nodes is SRG(q, (q-1)/2, (q-5)/4, (q-1)/4).
        let g = paley(13).unwrap();
        for v in 0..13 {
            assert_eq!(g.degree(v), 6);
        }
        for u in 0..13 {
            for v in (u + 1)..13 {
                let c = g.codegree(u, v);
                if g.adjacent(u, v) {
                    assert_eq!(c, 2);
                } else {
                    assert_eq!(c, 3);
                }
            }
        }
    }

    #[test]
    fn paley_rejects_bad_moduli() {
        assert!(paley(7).is_err()); // prime but 3 mod 4
        assert!(paley(9).is_err()); // not prime
    }

    #[test]
    fn turan_is_complete_multipartite() {
        let g = turan(6, 3).unwrap();
        // K_{2,2,2} = complement of 3 disjoint edges (classes {0,3},{1,4},{2,5}).
        let m = SimpleGraph::from_edges(6, &[(0, 3), (1, 4), (2, 5)]).unwrap();
        assert!(isomorphic_simple(&g, &m.complement()).unwrap());
        // Equitable classes: sizes differ by at most one.
        let g7 = turan(7, 3).unwrap();
        let mut class_sizes = [0usize; 3];
        for v in 0..7 {
            class_sizes[v % 3] += 1;
        }
        class_sizes.sort_unstable();
        assert_eq!(class_sizes, [2, 2, 3]);
        assert_eq!(g7.m(), (7 * 7 - (3 * 3 + 2 * 2 + 2 * 2)) as u64 / 2);
    }

    #[test]
    fn blow_up_of_edge_is_c4() {
        let k2 = complete(2);
        let b = k2.blow_up(2).unwrap();
        assert!(isomorphic_simple(&b, &cycle(4)).unwrap());
    }

    #[test]
    fn threshold_small_case() {
        // n=5, 0-based: i + j <= 3 -> edges (0,1),(0,2),(0,3),(1,2)
        let g = threshold(5);
        let expect = SimpleGraph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn er_determinism_and_density() {
        let a = er(40, 0.5, 11).unwrap();
        let b = er(40, 0.5, 11).unwrap();
        assert_eq!(a, b);
        let c = er(40, 0.5, 12).unwrap();
        assert_ne!(a, c);
        assert!(er(10, 1.5, 0).is_err());
        let full = er(10, 1.0, 3).unwrap();
        assert_eq!(full.m(), 45);
    }

    #[test]
    fn uniform_attachment_pair_marginals() {
        // P(i ~ j) = 1 - j/n for i < j, checked empirically over seeds.
        let n = 8;
        let (i, j) = (1usize, 5usize);
        let trials = 10_000;
        let mut hits = 0;
        for seed in 0..trials {
            if uniform_attachment(n, seed).adjacent(i, j) {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        let p = 1.0 - j as f64 / n as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (freq - p).abs() < 4.5 * sigma,
            "freq {freq} vs p {p} (sigma {sigma})"
        );
    }

    #[test]
    fn uniform_attachment_expected_edges() {
        // E[m] = (n^2 - 1)/6; average over seeds should land close.
        let n = 30usize;
        let trials = 2000u64;
        let total: u64 = (0..trials).map(|s| uniform_attachment(n, s).m()).sum();
        let mean = total as f64 / trials as f64;
        let expect = ((n * n - 1) as f64) / 6.0;
        assert!(
            (mean - expect).abs() < 0.02 * expect,
            "mean {mean} vs {expect}"
        );
    }

    #[test]
    fn prefix_attachment_pair_marginals() {
        // P(i ~ j) = (j - i)/(j + 1) for i < j (0-based).
        let n = 10;
        let (i, j) = (1usize, 5usize);
        let trials = 10_000;
        let mut hits = 0;
        for seed in 0..trials {
            if prefix_attachment(n, seed).adjacent(i, j) {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        let p = (j - i) as f64 / (j + 1) as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (freq - p).abs() < 4.5 * sigma,
            "freq {freq} vs p {p} (sigma {sigma})"
        );
    }

    #[test]
    fn prefix_attachment_expected_edges() {
        let n = 40usize;
        let trials = 2000u64;
        let total: u64 = (0..trials).map(|s| prefix_attachment(n, s).m()).sum();
        let mean = total as f64 / trials as f64;
        let expect = (n * (n - 1)) as f64 / 4.0;
        assert!(
            (mean - expect).abs() < 0.02 * expect,
            "mean {mean} vs {expect}"
        );
    }

    #[test]
    fn prefix_attachment_connections_form_prefixes() {
        for seed in 0..50 {
            let g = prefix_attachment(12, seed);
            for v in 0..12 {
                // the earlier neighbors of v must be 0..z for some z
                let nb: Vec<usize> = g.neighbors(v).into_iter().filter(|&u| u < v).collect();
                for (idx, &u) in nb.iter().enumerate() {
                    assert_eq!(u, idx, "earlier neighbors of {v} must form a prefix");
                }
            }
        }
    }

    #[test]
    fn grid_degrees() {
        let g = grid(3, 4);
        assert_eq!(g.n(), 12);
        assert_eq!(g.m(), (3 * 3 + 2 * 4) as u64); // 3 rows * 3 + 2 cols... = 17
        assert_eq!(g.degree(0), 2); // corner
        assert_eq!(g.degree(1), 3); // edge
        assert_eq!(g.degree(5), 4); // interior
    }
}
