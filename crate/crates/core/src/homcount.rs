//! Exact homomorphism, embedding and induced-embedding counts with the
//! derived densities, inclusion–exclusion transforms between them, weighted
//! homomorphisms, degree-constrained induced counts and the cycle/spectrum
//! identity `hom(C_k, G) = sum of k-th powers of adjacency eigenvalues`.
//!
//! Counts are exact integers from a pruned backtracking search over maps
//! `V(F) -> V(G)`; every routine carries an explicit work budget so oversized
//! inputs fail fast instead of running forever.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph, WeightedGraph};

/// Default cap on elementary backtracking steps (candidate checks).
pub const DEFAULT_WORK_BUDGET: u128 = 1_000_000_000;

/// Largest pattern the exact counters accept.
pub const MAX_PATTERN_NODES: usize = 9;

/// Larger cap for degree-constrained induced counts (bounded-degree
/// neighborhood patterns).
pub const MAX_CONSTRAINED_PATTERN_NODES: usize = 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CountKind {
    /// Adjacency-preserving maps (not necessarily injective).
    Hom,
    /// Injective adjacency-preserving maps.
    Inj,
    /// Injective maps preserving adjacency and non-adjacency.
    Ind,
}

/// Order pattern nodes so that each node after the first of its component has
/// an already-placed neighbor; placing connected prefixes lets adjacency
/// checks prune early.
fn search_order(f: &SimpleGraph) -> Vec<usize> {
    let k = f.n();
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        // pick an unplaced node with a placed neighbor, else a fresh seed
        let next = (0..k)
            .filter(|&v| !placed[v])
            .find(|&v| f.neighbors(v).iter().any(|&w| placed[w]))
            .or_else(|| (0..k).find(|&v| !placed[v]))
            .expect("some node unplaced");
        placed[next] = true;
        order.push(next);
    }
    order
}

fn count_impl(
    kind: CountKind,
    f: &SimpleGraph,
    g: &SimpleGraph,
    deg_constraint: Option<&[Option<usize>]>,
    budget: u128,
) -> Result<u128> {
    let k = f.n();
    // degree constraints prune so aggressively that larger patterns stay
    // cheap (they arise as bounded-degree neighborhoods); the work budget
    // still guards runaway cases
    let max_k = if deg_constraint.is_some() {
        MAX_CONSTRAINED_PATTERN_NODES
    } else {
        MAX_PATTERN_NODES
    };
    if k > max_k {
        return Err(Error::SizeBound {
            what: "pattern node count",
            limit: max_k,
            got: k,
        });
    }
    if k == 0 {
        return Ok(1);
    }
    let gn = g.n();
    if gn == 0 {
        return Ok(0);
    }
    let order = search_order(f);
    // for each position: earlier positions split into neighbors/non-neighbors
    let mut nbr_pos: Vec<Vec<usize>> = vec![vec![]; k];
    let mut non_pos: Vec<Vec<usize>> = vec![vec![]; k];
    for d in 0..k {
        for e in 0..d {
            if f.adjacent(order[d], order[e]) {
                nbr_pos[d].push(e);
            } else {
                non_pos[d].push(e);
            }
        }
    }
    let injective = !matches!(kind, CountKind::Hom);
    let induced = matches!(kind, CountKind::Ind);
    let g_deg: Vec<usize> = (0..gn).map(|v| g.degree(v)).collect();

    let mut phi = vec![0usize; k];
    let mut used = vec![false; gn];
    let mut steps: u128 = 0;
    let mut total: u128 = 0;

    // explicit stack of candidate indices per depth
    let mut depth = 0usize;
    let mut cand = vec![0usize; k];
    loop {
        if cand[depth] >= gn {
            // exhaust depth, backtrack
            if depth == 0 {
                break;
            }
            cand[depth] = 0;
            depth -= 1;
            if injective {
                used[phi[depth]] = false;
            }
            cand[depth] += 1;
            continue;
        }
        let c = cand[depth];
        steps += 1;
        if steps > budget {
            return Err(Error::WorkBound {
                estimate: steps,
                limit: budget,
            });
        }
        let mut ok = !(injective && used[c]);
        if ok {
            if let Some(cons) = deg_constraint {
                if let Some(want) = cons[order[depth]] {
                    ok = g_deg[c] == want;
                }
            }
        }
        if ok {
            for &e in &nbr_pos[depth] {
                if !g.adjacent(phi[e], c) {
                    ok = false;
                    break;
                }
            }
        }
        if ok && induced {
            for &e in &non_pos[depth] {
                if g.adjacent(phi[e], c) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            phi[depth] = c;
            if depth + 1 == k {
                total += 1;
                cand[depth] += 1;
            } else {
                if injective {
                    used[c] = true;
                }
                depth += 1;
            }
        } else {
            cand[depth] += 1;
        }
    }
    Ok(total)
}

/// Exact count of maps of the given kind with the default work budget.
pub fn count(kind: CountKind, f: &SimpleGraph, g: &SimpleGraph) -> Result<u128> {
    count_budgeted(kind, f, g, DEFAULT_WORK_BUDGET)
}

pub fn count_budgeted(
    kind: CountKind,
    f: &SimpleGraph,
    g: &SimpleGraph,
    budget: u128,
) -> Result<u128> {
    count_impl(kind, f, g, None, budget)
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling(n: u128, k: usize) -> u128 {
    (0..k as u128).map(|i| n.saturating_sub(i)).product()
}

fn require_nonempty(g: &SimpleGraph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::InvalidParam(
            "densities need a target graph with at least one node".into(),
        ));
    }
    Ok(())
}

/// Homomorphism density `t(F, G) = hom(F, G) / n^k`: the probability that a
/// uniform random map is adjacency-preserving.
pub fn t(f: &SimpleGraph, g: &SimpleGraph) -> Result<f64> {
    require_nonempty(g)?;
    let hom = count(CountKind::Hom, f, g)?;
    Ok(hom as f64 / (g.n() as f64).powi(f.n() as i32))
}

/// Injective density `inj(F, G) / (n)_k`: the probability that a uniform
/// random injective map preserves adjacency.
pub fn t_inj(f: &SimpleGraph, g: &SimpleGraph) -> Result<f64> {
    require_nonempty(g)?;
    if g.n() < f.n() {
        return Ok(0.0);
    }
    let inj = count(CountKind::Inj, f, g)?;
    Ok(inj as f64 / falling(g.n() as u128, f.n()) as f64)
}

/// Induced density `ind(F, G) / (n)_k`: the probability that a uniform random
/// injective map hits exactly the edges of `F`.
pub fn t_ind(f: &SimpleGraph, g: &SimpleGraph) -> Result<f64> {
    require_nonempty(g)?;
    if g.n() < f.n() {
        return Ok(0.0);
    }
    let ind = count(CountKind::Ind, f, g)?;
    Ok(ind as f64 / falling(g.n() as u128, f.n()) as f64)
}

// ---------------------------------------------------------------------------
// Inclusion–exclusion transforms over the supergraph lattice
// ---------------------------------------------------------------------------

/// Node pairs of `F` not joined by an edge, in lexicographic order; bit `i`
/// of a lattice index corresponds to adding `missing_pairs(f)[i]`.
pub fn missing_pairs(f: &SimpleGraph) -> Vec<(usize, usize)> {
    let mut out = vec![];
    for u in 0..f.n() {
        for v in (u + 1)..f.n() {
            if !f.adjacent(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

pub const MAX_LATTICE_NODES: usize = 5;

fn check_lattice(f: &SimpleGraph) -> Result<Vec<(usize, usize)>> {
    if f.n() > MAX_LATTICE_NODES {
        return Err(Error::SizeBound {
            what: "supergraph-lattice node count",
            limit: MAX_LATTICE_NODES,
            got: f.n(),
        });
    }
    Ok(missing_pairs(f))
}

/// The supergraph of `F` on the same nodes obtained by adding the missing
/// pairs selected by `mask` (see [`missing_pairs`] for bit order).
pub fn supergraph(f: &SimpleGraph, mask: u32) -> SimpleGraph {
    let missing = missing_pairs(f);
    let mut g = f.clone();
    for (i, &(u, v)) in missing.iter().enumerate() {
        if mask >> i & 1 == 1 {
            g.add_edge(u, v).expect("valid pair");
        }
    }
    g
}

/// All supergraphs of `F` on its node set, indexed by lattice mask.
pub fn supergraphs_all(f: &SimpleGraph) -> Result<Vec<SimpleGraph>> {
    let missing = check_lattice(f)?;
    Ok((0..1u32 << missing.len())
        .map(|mask| supergraph(f, mask))
        .collect())
}

/// Möbius inversion on the lattice: from injective densities indexed by mask
/// to induced densities, `t_ind(F') = sum over F'' >= F' of (-1)^{|E''\E'|} t_inj(F'')`.
pub fn tind_from_tinj(f: &SimpleGraph, tinj: &[f64]) -> Result<Vec<f64>> {
    let missing = check_lattice(f)?;
    let p = missing.len();
    if tinj.len() != 1 << p {
        return Err(Error::InvalidParam(format!(
            "lattice vector must have length {}, got {}",
            1 << p,
            tinj.len()
        )));
    }
    let full = (1u32 << p) - 1;
    let mut out = vec![0.0; 1 << p];
    for s in 0..=full {
        let comp = full & !s;
        // iterate over supersets of s: s | t for t subset of comp
        let mut tmask = comp;
        loop {
            let sup = s | tmask;
            let added = (sup & !s).count_ones();
            let sign = if added % 2 == 0 { 1.0 } else { -1.0 };
            out[s as usize] += sign * tinj[sup as usize];
            if tmask == 0 {
                break;
            }
            tmask = (tmask - 1) & comp;
        }
    }
    Ok(out)
}

/// Inverse transform: `t_inj(F') = sum over F'' >= F' of t_ind(F'')`.
pub fn tinj_from_tind(f: &SimpleGraph, tind: &[f64]) -> Result<Vec<f64>> {
    let missing = check_lattice(f)?;
    let p = missing.len();
    if tind.len() != 1 << p {
        return Err(Error::InvalidParam(format!(
            "lattice vector must have length {}, got {}",
            1 << p,
            tind.len()
        )));
    }
    let full = (1u32 << p) - 1;
    let mut out = vec![0.0; 1 << p];
    for s in 0..=full {
        let comp = full & !s;
        let mut tmask = comp;
        loop {
            out[s as usize] += tind[(s | tmask) as usize];
            if tmask == 0 {
                break;
            }
            tmask = (tmask - 1) & comp;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Weighted homomorphisms
// ---------------------------------------------------------------------------

/// `hom(F, H) = sum over maps phi of prod alpha_{phi(u)} prod beta_{phi(u)phi(v)}^mult`,
/// the partition-function form of homomorphism counting into a weighted graph.
/// Loops in `H` enter through the diagonal of beta.
pub fn hom_weighted(f: &Multigraph, h: &WeightedGraph) -> Result<f64> {
    hom_weighted_budgeted(f, h, DEFAULT_WORK_BUDGET)
}

pub fn hom_weighted_budgeted(f: &Multigraph, h: &WeightedGraph, budget: u128) -> Result<f64> {
    let k = f.n();
    let q = h.n();
    if q == 0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    let est = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if est > budget {
        return Err(Error::WorkBound {
            estimate: est,
            limit: budget,
        });
    }
    let edges: Vec<((usize, usize), u32)> = f.edge_iter().collect();
    let mut phi = vec![0usize; k];
    let mut total = 0.0f64;
    loop {
        let mut w = 1.0f64;
        for u in 0..k {
            w *= h.alpha(phi[u]);
        }
        for &((u, v), m) in &edges {
            w *= h.beta(phi[u], phi[v]).powi(m as i32);
        }
        total += w;
        // odometer
        let mut d = 0;
        loop {
            if d == k {
                return Ok(total);
            }
            phi[d] += 1;
            if phi[d] < q {
                break;
            }
            phi[d] = 0;
            d += 1;
        }
    }
}

/// Per-node homomorphism frequency `hom(F, G)/|V(G)|` for connected patterns,
/// the natural normalization in the bounded-degree regime.
pub fn s_density(f: &SimpleGraph, g: &SimpleGraph) -> Result<f64> {
    if !f.is_connected() {
        return Err(Error::InvalidParam(
            "per-node frequency is defined for connected patterns only".into(),
        ));
    }
    require_nonempty(g)?;
    let hom = count(CountKind::Hom, f, g)?;
    Ok(hom as f64 / g.n() as f64)
}

/// Count injective induced embeddings of `F` whose image nodes have the
/// prescribed degrees in `G`: `deg_G(phi(v)) = deg[v]`.
pub fn ind_deg(f: &SimpleGraph, deg: &[usize], g: &SimpleGraph) -> Result<u128> {
    if deg.len() != f.n() {
        return Err(Error::InvalidParam(format!(
            "degree vector length {} != pattern size {}",
            deg.len(),
            f.n()
        )));
    }
    let cons: Vec<Option<usize>> = deg.iter().map(|&d| Some(d)).collect();
    count_impl(CountKind::Ind, f, g, Some(&cons), DEFAULT_WORK_BUDGET)
}

/// Like [`ind_deg`] but with optional constraints (`None` = unconstrained),
/// used to sum over free boundary degrees in one pass.
pub(crate) fn ind_deg_opt(
    f: &SimpleGraph,
    deg: &[Option<usize>],
    g: &SimpleGraph,
) -> Result<u128> {
    if deg.len() != f.n() {
        return Err(Error::InvalidParam(format!(
            "degree vector length {} != pattern size {}",
            deg.len(),
            f.n()
        )));
    }
    count_impl(CountKind::Ind, f, g, Some(deg), DEFAULT_WORK_BUDGET)
}

// ---------------------------------------------------------------------------
// Cycle counts vs the adjacency spectrum
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct CycleSpectrum {
    /// Exact `hom(C_k, G)` = number of closed k-walks (integer trace of A^k).
    pub hom: i128,
    /// Sum of k-th powers of the adjacency eigenvalues.
    pub spectral: f64,
    /// `|hom - spectral| / max(1, |hom|)`.
    pub relative_gap: f64,
}

pub const MAX_SPECTRUM_NODES: usize = 2000;

/// Compute `hom(C_k, G)` two independent ways: exactly as the trace of the
/// k-th adjacency power (integer arithmetic) and spectrally as the power sum
/// of eigenvalues. Their agreement is the cycle/spectrum identity.
pub fn cycle_spectrum(k: usize, g: &SimpleGraph) -> Result<CycleSpectrum> {
    if k < 3 {
        return Err(Error::InvalidParam(format!(
            "cycle length must be at least 3, got {k}"
        )));
    }
    let n = g.n();
    if n > MAX_SPECTRUM_NODES {
        return Err(Error::SizeBound {
            what: "node count for spectrum computation",
            limit: MAX_SPECTRUM_NODES,
            got: n,
        });
    }
    if n == 0 {
        return Ok(CycleSpectrum {
            hom: 0,
            spectral: 0.0,
            relative_gap: 0.0,
        });
    }
    // Entries of A^k are at most n^(k-1); keep them inside i128.
    if (k as f64 - 1.0) * (n.max(2) as f64).ln() > 126.0 * std::f64::consts::LN_2 {
        return Err(Error::SizeBound {
            what: "cycle length (A^k would overflow 128-bit integers)",
            limit: (126.0 * std::f64::consts::LN_2 / (n.max(2) as f64).ln()) as usize + 1,
            got: k,
        });
    }

    let adj: Vec<i128> = {
        let mut a = vec![0i128; n * n];
        for (u, v) in g.edge_iter() {
            a[u * n + v] = 1;
            a[v * n + u] = 1;
        }
        a
    };
    let mut power = adj.clone();
    for _ in 0..k - 2 {
        let mut next = vec![0i128; n * n];
        for i in 0..n {
            for l in 0..n {
                let x = power[i * n + l];
                if x != 0 {
                    for j in 0..n {
                        next[i * n + j] += x * adj[l * n + j];
                    }
                }
            }
        }
        power = next;
    }
    // trace(A^{k-1} * A)
    let mut hom: i128 = 0;
    for i in 0..n {
        for j in 0..n {
            hom += power[i * n + j] * adj[j * n + i];
        }
    }

    let m = DMatrix::<f64>::from_fn(n, n, |i, j| adj[i * n + j] as f64);
    let eigs = m.symmetric_eigenvalues();
    let spectral: f64 = eigs.iter().map(|l| l.powi(k as i32)).sum();
    let relative_gap = (hom as f64 - spectral).abs() / (hom as f64).abs().max(1.0);
    Ok(CycleSpectrum {
        hom,
        spectral,
        relative_gap,
    })
}
