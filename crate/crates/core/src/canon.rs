//! Canonical forms for small multigraphs by exact minimum-encoding search.
//!
//! The canonical encoding of a graph is the lexicographically smallest
//! upper-triangular multiplicity matrix (diagonal included, so loops are
//! covered) over all node orderings. Two graphs are isomorphic iff their
//! encodings are equal. Variants pin a prefix of the ordering: a rooted form
//! fixes the root at position 0, a labeled form fixes the labeled nodes at
//! positions `0..k` in label order.
//!
//! The search is a prefix-pruned backtrack over orderings, with nodes
//! pre-sorted by a degree/neighborhood refinement so the minimum is found
//! early. Exact but exponential in the worst case, hence the size caps.

use crate::error::{Error, Result};
use crate::graph::{KLabeledGraph, Multigraph, SimpleGraph};

/// Default node caps for canonicalization.
pub const CANON_MAX_NODES: usize = 10;
pub const CANON_MAX_NODES_ROOTED: usize = 30;

/// Canonical encoding; equal iff isomorphic (within the same variant).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn bytes(&self) -> &[u32] {
        &self.0
    }
}

/// Canonical form plus the witnessing data.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub form: CanonicalForm,
    /// `perm[p] = v`: original node placed at canonical position `p`.
    pub perm: Vec<usize>,
    /// Number of orderings attaining the minimum = number of automorphisms
    /// (respecting the fixed prefix, for rooted/labeled variants).
    pub aut: u64,
}

fn mult_matrix(g: &Multigraph) -> Vec<u32> {
    let n = g.n();
    let mut m = vec![0u32; n * n];
    for ((u, v), mult) in g.edge_iter() {
        m[u * n + v] = mult;
        m[v * n + u] = mult;
    }
    m
}

/// Iterated neighborhood refinement: returns per-node color ids, invariant
/// under isomorphisms that fix the `fixed` prefix nodes pointwise.
fn refine_colors(n: usize, mm: &[u32], fixed: &[usize]) -> Vec<u64> {
    let mut color: Vec<u64> = (0..n)
        .map(|v| {
            if let Some(p) = fixed.iter().position(|&f| f == v) {
                // fixed nodes get unique colors by their prefix position
                u64::MAX - p as u64
            } else {
                let deg: u64 = (0..n).map(|w| mm[v * n + w] as u64).sum();
                deg * 64 + mm[v * n + v] as u64
            }
        })
        .collect();
    for _ in 0..n {
        let sig: Vec<(u64, Vec<(u64, u32)>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<(u64, u32)> = (0..n)
                    .filter(|&w| w != v && mm[v * n + w] > 0)
                    .map(|w| (color[w], mm[v * n + w]))
                    .collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let mut keys: Vec<(u64, Vec<(u64, u32)>)> = sig.clone();
        keys.sort_unstable();
        keys.dedup();
        let next: Vec<u64> = sig
            .iter()
            .map(|s| keys.binary_search(s).unwrap() as u64)
            .collect();
        let class_count =
            |c: &[u64]| c.iter().collect::<std::collections::BTreeSet<_>>().len();
        let stable = class_count(&next) == class_count(&color);
        color = next;
        if stable {
            break;
        }
    }
    color
}

/// Exact minimum-encoding search with `fixed` nodes pinned to the first
/// positions in the given order.
fn canonicalize_fixed(g: &Multigraph, fixed: &[usize], cap: usize) -> Result<Canonical> {
    let n = g.n();
    if n > cap {
        return Err(Error::SizeBound {
            what: "canonical form node count",
            limit: cap,
            got: n,
        });
    }
    if n == 0 {
        return Ok(Canonical {
            form: CanonicalForm(vec![]),
            perm: vec![],
            aut: 1,
        });
    }
    let mm = mult_matrix(g);
    let colors = refine_colors(n, &mm, fixed);

    // Order free nodes by (color, id); the backtrack tries candidates in this
    // order, which tends to reach the minimal encoding quickly.
    let mut free: Vec<usize> = (0..n).filter(|v| !fixed.contains(v)).collect();
    free.sort_unstable_by_key(|&v| (colors[v], v));

    let enc_len = n * (n + 1) / 2;
    let mut best: Vec<u32> = vec![u32::MAX; enc_len];
    let mut best_perm: Vec<usize> = vec![];
    let mut aut: u64 = 0;

    // perm[pos] = node; enc holds rows: position p contributes entries
    // (q <= p) -> mult(perm[q], perm[p]) appended in order q = 0..=p.
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    perm.extend_from_slice(fixed);
    let mut used = vec![false; n];
    for &v in fixed {
        used[v] = true;
    }
    let mut enc: Vec<u32> = Vec::with_capacity(enc_len);

    // Backtrack over orderings. A branch is cut as soon as its partial
    // encoding is lexicographically greater than the prefix of the current
    // best: prefixes of the eventual minimum are never greater than the
    // prefixes of any current best, so this is exact. Leaves tied with the
    // final minimum are exactly the (prefix-respecting) automorphisms.
    fn dfs(
        n: usize,
        mm: &[u32],
        free: &[usize],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        enc: &mut Vec<u32>,
        best: &mut Vec<u32>,
        best_perm: &mut Vec<usize>,
        aut: &mut u64,
    ) {
        let pos = perm.len();
        if pos == n {
            match enc.as_slice().cmp(best.as_slice()) {
                std::cmp::Ordering::Less => {
                    *best = enc.clone();
                    *best_perm = perm.clone();
                    *aut = 1;
                }
                std::cmp::Ordering::Equal => {
                    if best_perm.is_empty() {
                        *best_perm = perm.clone();
                    }
                    *aut += 1;
                }
                std::cmp::Ordering::Greater => {}
            }
            return;
        }
        for &v in free {
            if used[v] {
                continue;
            }
            let row_start = enc.len();
            for q in 0..=pos {
                enc.push(if q == pos {
                    mm[v * n + v]
                } else {
                    mm[perm[q] * n + v]
                });
            }
            if enc.as_slice() > &best[..enc.len()] {
                enc.truncate(row_start);
                continue;
            }
            perm.push(v);
            used[v] = true;
            dfs(n, mm, free, perm, used, enc, best, best_perm, aut);
            perm.pop();
            used[v] = false;
            enc.truncate(row_start);
        }
    }

    // Seed `best` from one concrete ordering (fixed prefix + free nodes in
    // refinement order) so every comparison has a complete reference; that
    // ordering is itself explored, so the seed is attainable.
    {
        let mut p = perm.clone();
        p.extend_from_slice(&free);
        let mut e = Vec::with_capacity(enc_len);
        for pos in 0..n {
            for q in 0..=pos {
                e.push(if q == pos {
                    mm[p[pos] * n + p[pos]]
                } else {
                    mm[p[q] * n + p[pos]]
                });
            }
        }
        best = e;
        best_perm = vec![];
    }

    // Emit the fixed-prefix rows (common to every ordering).
    for pos in 0..perm.len() {
        for q in 0..=pos {
            enc.push(if q == pos {
                mm[perm[pos] * n + perm[pos]]
            } else {
                mm[perm[q] * n + perm[pos]]
            });
        }
    }

    dfs(
        n, &mm, &free, &mut perm, &mut used, &mut enc, &mut best, &mut best_perm, &mut aut,
    );

    Ok(Canonical {
        form: CanonicalForm({
            let mut v = Vec::with_capacity(enc_len + 1);
            v.push(n as u32);
            v.extend_from_slice(&best);
            v
        }),
        perm: best_perm,
        aut,
    })
}

/// Canonical form of an unlabeled multigraph (cap: 10 nodes).
pub fn canonical_form(g: &Multigraph) -> Result<Canonical> {
    canonicalize_fixed(g, &[], CANON_MAX_NODES)
}

pub fn canonical_form_capped(g: &Multigraph, cap: usize) -> Result<Canonical> {
    canonicalize_fixed(g, &[], cap)
}

/// Canonical form of a rooted graph: only root-preserving orderings
/// (cap: 30 nodes; intended for neighborhood balls, which refinement
/// by distance-from-root keeps tractable).
pub fn canonical_form_rooted(g: &Multigraph, root: usize) -> Result<Canonical> {
    if root >= g.n() {
        return Err(Error::NodeOutOfRange {
            node: root,
            n: g.n(),
        });
    }
    canonicalize_fixed(g, &[root], CANON_MAX_NODES_ROOTED)
}

/// Canonical form of a k-labeled graph: labeled nodes are pinned to positions
/// `0..k` in label order; only unlabeled nodes are permuted.
pub fn canonical_form_labeled(g: &KLabeledGraph) -> Result<Canonical> {
    let mut c = canonicalize_fixed(g.base(), g.labels(), CANON_MAX_NODES.max(g.k()))?;
    // Fold k into the encoding so graphs differing only in k compare unequal.
    let mut v = vec![g.k() as u32];
    v.extend_from_slice(c.form.bytes());
    c.form = CanonicalForm(v);
    Ok(c)
}

/// Isomorphism test via canonical forms.
pub fn isomorphic(a: &Multigraph, b: &Multigraph) -> Result<bool> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)?.form == canonical_form(b)?.form)
}

pub fn isomorphic_simple(a: &SimpleGraph, b: &SimpleGraph) -> Result<bool> {
    isomorphic(&a.to_multigraph(), &b.to_multigraph())
}

/// Number of automorphisms of a simple graph.
pub fn automorphism_count(g: &SimpleGraph) -> Result<u64> {
    Ok(canonical_form(&g.to_multigraph())?.aut)
}

/// All isomorphism classes of simple graphs on exactly `n` nodes
/// (each as a representative on nodes `0..n`), n <= 7.
pub fn enumerate_simple_graphs(n: usize) -> Result<Vec<SimpleGraph>> {
    if n > 7 {
        return Err(Error::SizeBound {
            what: "graph enumeration node count",
            limit: 7,
            got: n,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let g = SimpleGraph::from_edges(n, &edges)?;
        let c = canonical_form(&g.to_multigraph())?;
        if seen.insert(c.form) {
            out.push(g);
        }
    }
    Ok(out)
}

/// All isomorphism classes of simple graphs on `1..=n` nodes.
pub fn enumerate_simple_graphs_upto(n: usize) -> Result<Vec<SimpleGraph>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(enumerate_simple_graphs(k)?);
    }
    Ok(out)
}

/// All isomorphism classes of k-labeled simple graphs on `k..=max_n` nodes:
/// the default finite bases for connection matrices and kernel tests.
/// Two k-labeled graphs count as isomorphic only via label-preserving maps.
pub fn enumerate_klabeled_simple(k: usize, max_n: usize) -> Result<Vec<KLabeledGraph>> {
    if max_n > 6 {
        return Err(Error::SizeBound {
            what: "k-labeled enumeration node count",
            limit: 6,
            got: max_n,
        });
    }
    if k > max_n {
        return Err(Error::InvalidParam(format!(
            "need k <= max_n, got k={k}, max_n={max_n}"
        )));
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for n in k.max(1)..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u64..(1u64 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = Multigraph::from_edges(n, &edges)?;
            let lg = KLabeledGraph::from_multigraph(g, k)?;
            let c = canonical_form_labeled(&lg)?;
            if seen.insert(c.form) {
                out.push(lg);
            }
        }
    }
    Ok(out)
}
