//! Ground-state energies and statistical physics on graphs: normalized
//! maximum cuts, weighted multiway cuts (free and proportion-restricted),
//! balanced homomorphism sums, partition functions with free energy, the
//! hom-number sandwich inequalities that tie cuts to homomorphism counts,
//! and the continuum energy of a step graphon.
//!
//! Conventions (pinned by tests):
//! - `e_G(S,T)` counts ordered incidences: an edge with both endpoints in
//!   `S ∩ T` contributes twice.
//! - Multiway cut objectives are `(1/n²) Σ_ij β_ij e(S_i,S_j)`, which equals
//!   `(2/n²) Σ_{uv ∈ E} β_{φ(u)φ(v)}`; with `q = 2` and `β` the exchange
//!   matrix this is **twice** the normalized maxcut.
//! - The spin energy of a map is `E_φ = (2/n²) Σ_{uv ∈ E} J_{φ(u)φ(v)}`; the
//!   ground state `min_φ E_φ` equals `-mmcut(G, -J)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, WeightedGraph};
use crate::graphon::StepGraphon;
use crate::homcount;

pub const MAX_EXACT_MAXCUT_NODES: usize = 24;

/// A cut with its normalized density `e(S, V∖S)/n²`.
#[derive(Clone, Debug)]
pub struct CutResult {
    pub density: f64,
    /// `true` = node on the S side.
    pub side: Vec<bool>,
    pub exact: bool,
}

/// Exact normalized maximum cut by Gray-code enumeration of one side
/// (node `n-1` pinned to break the complement symmetry).
pub fn maxcut_exact(g: &SimpleGraph) -> Result<CutResult> {
    let n = g.n();
    if n > MAX_EXACT_MAXCUT_NODES {
        return Err(Error::SizeBound {
            what: "node count for exact maxcut",
            limit: MAX_EXACT_MAXCUT_NODES,
            got: n,
        });
    }
    if n == 0 {
        return Ok(CutResult {
            density: 0.0,
            side: vec![],
            exact: true,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .into_iter()
                .fold(0u32, |acc, w| acc | 1 << w)
        })
        .collect();
    let deg: Vec<i64> = (0..n).map(|v| g.degree(v) as i64).collect();
    let free = n - 1; // node n-1 stays on the fixed side
    let mut mask = 0u32;
    let mut cut: i64 = 0;
    let mut best: i64 = 0;
    let mut best_mask = 0u32;
    for code in 1u64..1u64 << free {
        let v = code.trailing_zeros() as usize;
        // moving v across: edges to the S side flip roles
        let to_s = (adj[v] & mask).count_ones() as i64;
        let delta = if mask >> v & 1 == 0 {
            // v joins S: edges into S become internal, the rest become cut
            deg[v] - 2 * to_s
        } else {
            // v leaves S: edges into S become cut, the rest become internal
            2 * to_s - deg[v]
        };
        mask ^= 1 << v;
        cut += delta;
        if cut > best {
            best = cut;
            best_mask = mask;
        }
    }
    Ok(CutResult {
        density: best as f64 / (n as f64 * n as f64),
        side: (0..n).map(|v| best_mask >> v & 1 == 1).collect(),
        exact: true,
    })
}

/// Greedy local search with restarts: single-node flips to a local optimum.
/// Always a valid lower bound on the maxcut density.
pub fn maxcut_local(g: &SimpleGraph, restarts: usize, seed: u64) -> CutResult {
    let n = g.n();
    if n == 0 {
        return CutResult {
            density: 0.0,
            side: vec![],
            exact: false,
        };
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best_cut = 0u64;
    let mut best_side = vec![false; n];
    for _ in 0..restarts.max(1) {
        let mut side: Vec<bool> = (0..n).map(|_| rng.gen::<bool>()).collect();
        loop {
            let mut improved = false;
            for v in 0..n {
                let mut same = 0i64;
                let mut cross = 0i64;
                for w in g.neighbors(v) {
                    if side[w] == side[v] {
                        same += 1;
                    } else {
                        cross += 1;
                    }
                }
                if same > cross {
                    side[v] = !side[v];
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        let cut: u64 = g
            .edge_iter()
            .filter(|&(u, v)| side[u] != side[v])
            .count() as u64;
        if cut > best_cut {
            best_cut = cut;
            best_side = side;
        }
    }
    CutResult {
        density: best_cut as f64 / (n as f64 * n as f64),
        side: best_side,
        exact: false,
    }
}

/// Exact if feasible, otherwise local search.
pub fn maxcut(g: &SimpleGraph, seed: u64) -> CutResult {
    match maxcut_exact(g) {
        Ok(r) => r,
        Err(_) => maxcut_local(g, 16, seed),
    }
}

/// Symmetric q×q target-weight matrix for multiway cuts.
#[derive(Clone, Debug)]
pub struct TargetWeights {
    pub q: usize,
    values: Vec<f64>,
}

impl TargetWeights {
    pub fn new(q: usize, values: Vec<f64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParam("need at least one class".into()));
        }
        if values.len() != q * q {
            return Err(Error::InvalidParam(format!(
                "expected {} entries, got {}",
                q * q,
                values.len()
            )));
        }
        for i in 0..q {
            for j in 0..q {
                if !values[i * q + j].is_finite() {
                    return Err(Error::InvalidParam("weights must be finite".into()));
                }
                if (values[i * q + j] - values[j * q + i]).abs() > 1e-12 {
                    return Err(Error::InvalidParam("weights must be symmetric".into()));
                }
            }
        }
        Ok(TargetWeights { q, values })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.q + j]
    }

    pub fn from_weighted(h: &WeightedGraph) -> Self {
        let q = h.n();
        let values = (0..q * q)
            .map(|idx| h.beta(idx / q, idx % q))
            .collect();
        TargetWeights { q, values }
    }
}

/// A multiway assignment with its normalized objective
/// `(1/n²) Σ_ij β_ij e(S_i,S_j)`.
#[derive(Clone, Debug)]
pub struct MulticutResult {
    pub density: f64,
    pub assignment: Vec<usize>,
    pub exact: bool,
}

fn multicut_objective(g: &SimpleGraph, beta: &TargetWeights, phi: &[usize]) -> f64 {
    let n = g.n() as f64;
    let sum: f64 = g
        .edge_iter()
        .map(|(u, v)| beta.get(phi[u], phi[v]))
        .sum();
    2.0 * sum / (n * n)
}

/// Exact maximum multiway cut by enumerating all q^n assignments
/// (work-budget guarded).
pub fn mmcut_exact(g: &SimpleGraph, beta: &TargetWeights) -> Result<MulticutResult> {
    let n = g.n();
    let q = beta.q;
    if n == 0 {
        return Ok(MulticutResult {
            density: 0.0,
            assignment: vec![],
            exact: true,
        });
    }
    let est = (q as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX)
        .saturating_mul(g.edge_iter().count().max(1) as u128);
    if est > homcount::DEFAULT_WORK_BUDGET {
        return Err(Error::WorkBound {
            estimate: est,
            limit: homcount::DEFAULT_WORK_BUDGET,
        });
    }
    let mut phi = vec![0usize; n];
    let mut best = f64::NEG_INFINITY;
    let mut best_phi = phi.clone();
    loop {
        let val = multicut_objective(g, beta, &phi);
        if val > best {
            best = val;
            best_phi = phi.clone();
        }
        let mut d = 0;
        loop {
            if d == n {
                return Ok(MulticutResult {
                    density: best,
                    assignment: best_phi,
                    exact: true,
                });
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

/// Local-search multiway cut (single-node class moves, restarts); lower bound.
pub fn mmcut_local(
    g: &SimpleGraph,
    beta: &TargetWeights,
    restarts: usize,
    seed: u64,
) -> MulticutResult {
    let n = g.n();
    let q = beta.q;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    let mut best_phi = vec![0usize; n];
    for _ in 0..restarts.max(1) {
        let mut phi: Vec<usize> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        loop {
            let mut improved = false;
            for v in 0..n {
                // contribution of v's edges under each class choice
                let mut gain = vec![0.0f64; q];
                for w in g.neighbors(v) {
                    for (c, gain_c) in gain.iter_mut().enumerate() {
                        *gain_c += beta.get(c, phi[w]);
                    }
                }
                let bc = (0..q)
                    .max_by(|&a, &b| gain[a].total_cmp(&gain[b]))
                    .unwrap();
                if gain[bc] > gain[phi[v]] + 1e-15 {
                    phi[v] = bc;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        let val = multicut_objective(g, beta, &phi);
        if val > best {
            best = val;
            best_phi = phi;
        }
    }
    MulticutResult {
        density: best,
        assignment: best_phi,
        exact: false,
    }
}

/// Integer class sizes compatible with the proportion constraint
/// `| |S_i| - α_i n | < 1`.
fn balanced_size_vectors(alpha: &[f64], n: usize) -> Vec<Vec<usize>> {
    let q = alpha.len();
    let mut out = vec![];
    let mut cur = vec![0usize; q];
    fn rec(
        alpha: &[f64],
        n: usize,
        idx: usize,
        used: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let q = alpha.len();
        if idx == q {
            if used == n {
                out.push(cur.clone());
            }
            return;
        }
        let target = alpha[idx] * n as f64;
        let lo = (target - 1.0).max(0.0).floor() as usize;
        let hi = (target + 1.0).ceil() as usize;
        for c in lo..=hi.min(n - used) {
            if (c as f64 - target).abs() < 1.0 {
                cur[idx] = c;
                rec(alpha, n, idx + 1, used + c, cur, out);
            }
        }
    }
    rec(alpha, n, 0, 0, &mut cur, &mut out);
    out
}

fn normalized_alpha(h: &WeightedGraph) -> Vec<f64> {
    let total = h.alpha_total();
    (0..h.n()).map(|i| h.alpha(i) / total).collect()
}

/// Enumerate maps with prescribed class sizes, folding each map into an
/// accumulator.
fn for_each_balanced_map(
    g: &SimpleGraph,
    sizes: &[usize],
    mut visit: impl FnMut(&[usize]),
) -> Result<()> {
    let n = g.n();
    let q = sizes.len();
    // multinomial budget estimate
    let mut log_count = 0.0f64;
    for v in 1..=n {
        log_count += (v as f64).ln();
    }
    for &s in sizes {
        for v in 1..=s {
            log_count -= (v as f64).ln();
        }
    }
    if log_count > (homcount::DEFAULT_WORK_BUDGET as f64).ln() {
        let est = log_count.exp();
        return Err(Error::WorkBound {
            estimate: if est < 3.0e38 { est as u128 } else { u128::MAX },
            limit: homcount::DEFAULT_WORK_BUDGET,
        });
    }
    let mut remaining: Vec<usize> = sizes.to_vec();
    let mut phi = vec![0usize; n];
    fn rec(
        v: usize,
        n: usize,
        q: usize,
        remaining: &mut Vec<usize>,
        phi: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if v == n {
            visit(phi);
            return;
        }
        for c in 0..q {
            if remaining[c] > 0 {
                remaining[c] -= 1;
                phi[v] = c;
                rec(v + 1, n, q, remaining, phi, visit);
                remaining[c] += 1;
            }
        }
    }
    rec(0, n, q, &mut remaining, &mut phi, &mut visit);
    Ok(())
}

/// Exact restricted multiway cut: maximize the multicut objective over maps
/// whose class sizes match the node weights of `H` within one node.
pub fn rmcut_exact(g: &SimpleGraph, h: &WeightedGraph) -> Result<MulticutResult> {
    let alpha = normalized_alpha(h);
    let beta = TargetWeights::from_weighted(h);
    let n = g.n();
    if n == 0 {
        return Ok(MulticutResult {
            density: 0.0,
            assignment: vec![],
            exact: true,
        });
    }
    let size_vectors = balanced_size_vectors(&alpha, n);
    if size_vectors.is_empty() {
        return Err(Error::InvalidParam(
            "no integer class sizes satisfy the proportion constraint".into(),
        ));
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_phi = vec![];
    for sizes in &size_vectors {
        for_each_balanced_map(g, sizes, |phi| {
            let val = multicut_objective(g, &beta, phi);
            if val > best {
                best = val;
                best_phi = phi.to_vec();
            }
        })?;
    }
    Ok(MulticutResult {
        density: best,
        assignment: best_phi,
        exact: true,
    })
}

/// Balanced homomorphism sum `hom*(G, H̃) = Σ over proportion-balanced maps
/// of Π over edges of β̃_{φ(u)φ(v)}`.
pub fn hom_star(g: &SimpleGraph, h_tilde: &WeightedGraph) -> Result<f64> {
    let alpha = normalized_alpha(h_tilde);
    let n = g.n();
    if n == 0 {
        return Ok(1.0);
    }
    let size_vectors = balanced_size_vectors(&alpha, n);
    if size_vectors.is_empty() {
        return Err(Error::InvalidParam(
            "no integer class sizes satisfy the proportion constraint".into(),
        ));
    }
    let edges: Vec<(usize, usize)> = g.edge_iter().collect();
    let mut total = 0.0f64;
    for sizes in &size_vectors {
        for_each_balanced_map(g, sizes, |phi| {
            let mut w = 1.0f64;
            for &(u, v) in &edges {
                w *= h_tilde.beta(phi[u], phi[v]);
            }
            total += w;
        })?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Partition functions
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EnsembleKind {
    /// `Z = Σ_φ exp(-E_φ)` with `E_φ = (2/n²) Σ_{uv∈E} J_{φ(u)φ(v)}`.
    Standard,
    /// Mean-field scaling `Z = Σ_φ exp(-n·E_φ)`; free energy `-ln Z / n`.
    MeanField,
}

#[derive(Clone, Debug)]
pub struct PartitionFunction {
    pub ln_z: f64,
    pub z: f64,
    /// Defined for the mean-field ensemble only.
    pub free_energy: Option<f64>,
    /// Ground-state energy `min_φ E_φ`.
    pub ground_state: f64,
}

/// Compute the partition function by exhaustive enumeration with streaming
/// log-sum-exp (no overflow even when individual Boltzmann weights would
/// overflow a double).
pub fn partition_function(
    g: &SimpleGraph,
    j: &TargetWeights,
    kind: EnsembleKind,
) -> Result<PartitionFunction> {
    let n = g.n();
    let q = j.q;
    if n == 0 {
        return Err(Error::InvalidParam("need at least one node".into()));
    }
    let est = (q as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX)
        .saturating_mul(g.edge_iter().count().max(1) as u128);
    if est > homcount::DEFAULT_WORK_BUDGET {
        return Err(Error::WorkBound {
            estimate: est,
            limit: homcount::DEFAULT_WORK_BUDGET,
        });
    }
    let edges: Vec<(usize, usize)> = g.edge_iter().collect();
    let nf = n as f64;
    let scale = match kind {
        EnsembleKind::Standard => 1.0,
        EnsembleKind::MeanField => nf,
    };
    let mut phi = vec![0usize; n];
    // streaming log-sum-exp over x = -scale * E_phi
    let mut running_max = f64::NEG_INFINITY;
    let mut running_sum = 0.0f64;
    let mut ground = f64::INFINITY;
    loop {
        let e_phi: f64 = edges
            .iter()
            .map(|&(u, v)| j.get(phi[u], phi[v]))
            .sum::<f64>()
            * 2.0
            / (nf * nf);
        if e_phi < ground {
            ground = e_phi;
        }
        let x = -scale * e_phi;
        if x <= running_max {
            running_sum += (x - running_max).exp();
        } else {
            running_sum = running_sum * (running_max - x).exp() + 1.0;
            running_max = x;
        }
        let mut d = 0;
        loop {
            if d == n {
                let ln_z = running_max + running_sum.ln();
                return Ok(PartitionFunction {
                    ln_z,
                    z: ln_z.exp(),
                    free_energy: match kind {
                        EnsembleKind::MeanField => Some(-ln_z / nf),
                        EnsembleKind::Standard => None,
                    },
                    ground_state: ground,
                });
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

// ---------------------------------------------------------------------------
// Hom-number sandwiches and right-convergence quantities
// ---------------------------------------------------------------------------

/// The 2-node weighted graph whose homomorphism count sandwiches maxcut:
/// unit node weights and loop weights, cross-edge weight 2.
pub fn maxcut_target() -> WeightedGraph {
    WeightedGraph::new(2, vec![1.0, 1.0], vec![1.0, 2.0, 2.0, 1.0]).expect("valid")
}

#[derive(Clone, Debug)]
pub struct CutHomSandwich {
    pub maxcut: f64,
    pub log2_hom_per_n2: f64,
    pub upper: f64,
}

/// Exact two-sided bound `maxcut ≤ log₂ hom(G,H)/n² ≤ maxcut + 1/n` with the
/// specific 2-node target; holds for every graph, not just asymptotically.
pub fn cut_hom_sandwich(g: &SimpleGraph) -> Result<CutHomSandwich> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParam("need nodes".into()));
    }
    let mc = maxcut_exact(g)?.density;
    let hom = homcount::hom_weighted(&g.to_multigraph(), &maxcut_target())?;
    let val = hom.log2() / (n as f64 * n as f64);
    Ok(CutHomSandwich {
        maxcut: mc,
        log2_hom_per_n2: val,
        upper: mc + 1.0 / n as f64,
    })
}

#[derive(Clone, Debug)]
pub struct HomCutGap {
    /// `log hom / n²` (base 2 for the multiway form, natural for the
    /// restricted form).
    pub log_hom_per_n2: f64,
    /// Half the corresponding cut density: the matching normalization, since
    /// the cut objective counts ordered pairs while `hom` multiplies over
    /// unordered edges.
    pub half_cut: f64,
    pub gap: f64,
}

/// Gap in the multiway-cut sandwich: `log₂ hom(G, H_exp)/n²` vs
/// `mmcut(G,β)/2`, where `H_exp` has edge weights `2^β`. The factor ½ is
/// forced by the ordered-pair convention in the cut objective and is pinned
/// by tests.
pub fn mcut_hom_gap(g: &SimpleGraph, beta: &TargetWeights) -> Result<HomCutGap> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParam("need nodes".into()));
    }
    let q = beta.q;
    let h_exp = WeightedGraph::new(
        q,
        vec![1.0; q],
        (0..q * q)
            .map(|idx| 2.0f64.powf(beta.get(idx / q, idx % q)))
            .collect(),
    )?;
    let hom = homcount::hom_weighted(&g.to_multigraph(), &h_exp)?;
    let log_hom = hom.log2() / (n as f64 * n as f64);
    let half_cut = mmcut_exact(g, beta)?.density / 2.0;
    Ok(HomCutGap {
        log_hom_per_n2: log_hom,
        half_cut,
        gap: log_hom - half_cut,
    })
}

/// Gap in the restricted sandwich: `ln hom*(G, H̃)/n²` vs `rmcut(G,H)/2`,
/// where `H̃` has edge weights `e^β`.
pub fn rmcut_hom_gap(g: &SimpleGraph, h: &WeightedGraph) -> Result<HomCutGap> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParam("need nodes".into()));
    }
    let q = h.n();
    let mut beta_exp = vec![0.0; q * q];
    for i in 0..q {
        for j in 0..q {
            beta_exp[i * q + j] = h.beta(i, j).exp();
        }
    }
    let h_tilde = WeightedGraph::new(q, (0..q).map(|i| h.alpha(i)).collect(), beta_exp)?;
    let hs = hom_star(g, &h_tilde)?;
    let log_hom = hs.ln() / (n as f64 * n as f64);
    let half_cut = rmcut_exact(g, h)?.density / 2.0;
    Ok(HomCutGap {
        log_hom_per_n2: log_hom,
        half_cut,
        gap: log_hom - half_cut,
    })
}

#[derive(Clone, Debug)]
pub struct RightQuantities {
    /// Entropy-per-node `u(G,H) = ln hom(G,H) / n`; `-inf` when `hom = 0`.
    pub u: f64,
    /// Dissimilarity `D(H) = Σ_ij (α_i α_j / α_H²)(1 - β_ij/β_max)`.
    pub d_h: f64,
    /// Dense normalization `log₂ hom / n²` for the cut sandwiches.
    pub log2_hom_per_n2: f64,
}

pub fn right_quantities(g: &SimpleGraph, h: &WeightedGraph) -> Result<RightQuantities> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParam("need nodes".into()));
    }
    let q = h.n();
    let mut beta_max = f64::NEG_INFINITY;
    for i in 0..q {
        for j in 0..q {
            beta_max = beta_max.max(h.beta(i, j));
        }
    }
    if beta_max <= 0.0 {
        return Err(Error::InvalidParam(
            "D(H) needs a positive maximum edge weight".into(),
        ));
    }
    let total = h.alpha_total();
    let mut d_h = 0.0;
    for i in 0..q {
        for j in 0..q {
            d_h += h.alpha(i) * h.alpha(j) / (total * total) * (1.0 - h.beta(i, j) / beta_max);
        }
    }
    let hom = homcount::hom_weighted(&g.to_multigraph(), h)?;
    let (u, log2n2) = if hom > 0.0 {
        (
            hom.ln() / n as f64,
            hom.log2() / (n as f64 * n as f64),
        )
    } else {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    };
    Ok(RightQuantities {
        u,
        d_h,
        log2_hom_per_n2: log2n2,
    })
}

// ---------------------------------------------------------------------------
// Graphon energy
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GraphonEnergy {
    /// Best objective found (a lower bound on the true maximum).
    pub value: f64,
    /// `split[k*q + i]` = mass of block `k` assigned to class `i`.
    pub split: Vec<f64>,
    pub blocks: usize,
    pub classes: usize,
}

/// Continuum analogue of the restricted multiway cut: maximize
/// `Σ_ij β_ij ∫∫_{S_i×S_j} W` over partitions of `[0,1]` with prescribed
/// class measures `α`. For a step graphon this is a biquadratic program over
/// a transportation polytope (block masses × class masses); we run
/// coordinate ascent on 2×2 exchange moves from several feasible starts.
pub fn energy_graphon(w: &StepGraphon, h: &WeightedGraph, seed: u64) -> Result<GraphonEnergy> {
    let m = w.blocks();
    let q = h.n();
    let alpha = normalized_alpha(h);
    // feasible start: product split x[k][i] = p_k * alpha_i
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let objective = |x: &[f64]| -> f64 {
        // sum_ij beta_ij sum_kl x[k,i] W_kl x[l,j]
        let mut val = 0.0;
        for k in 0..m {
            for l in 0..m {
                let wkl = w.value(k, l);
                if wkl == 0.0 {
                    continue;
                }
                let mut inner = 0.0;
                for i in 0..q {
                    for j in 0..q {
                        inner += h.beta(i, j) * x[k * q + i] * x[l * q + j];
                    }
                }
                val += wkl * inner;
            }
        }
        val
    };

    let mut best_x = vec![0.0; m * q];
    let mut best_val = f64::NEG_INFINITY;
    let restarts = 6;
    for restart in 0..restarts {
        let mut x = vec![0.0; m * q];
        if restart == 0 {
            for k in 0..m {
                for i in 0..q {
                    x[k * q + i] = w.mass(k) * alpha[i];
                }
            }
        } else {
            // random feasible point: random doubly-constrained table by
            // iterative proportional fitting from random positives
            for v in x.iter_mut() {
                *v = rng.gen::<f64>() + 0.05;
            }
            for _ in 0..60 {
                for k in 0..m {
                    let s: f64 = (0..q).map(|i| x[k * q + i]).sum();
                    for i in 0..q {
                        x[k * q + i] *= w.mass(k) / s;
                    }
                }
                for i in 0..q {
                    let s: f64 = (0..m).map(|k| x[k * q + i]).sum();
                    if s > 0.0 {
                        for k in 0..m {
                            x[k * q + i] *= alpha[i] / s;
                        }
                    }
                }
            }
        }
        // coordinate ascent over 2x2 exchange moves: x[k,i]+=d, x[k,j]-=d,
        // x[l,i]-=d, x[l,j]+=d keeps both margins; objective is quadratic in d
        for _sweep in 0..200 {
            let mut improved = false;
            for k in 0..m {
                for l in 0..m {
                    if l == k {
                        continue;
                    }
                    for i in 0..q {
                        for j in 0..q {
                            if j == i {
                                continue;
                            }
                            let d_max = x[k * q + j].min(x[l * q + i]);
                            let d_min = -x[k * q + i].min(x[l * q + j]);
                            if d_max - d_min < 1e-14 {
                                continue;
                            }
                            // objective(d) = a d^2 + b d + c along the move
                            let (a, b) = exchange_coeffs(w, h, &x, q, k, l, i, j);
                            let cand_d = if a.abs() > 1e-14 {
                                let stat = -b / (2.0 * a);
                                if a < 0.0 && stat > d_min && stat < d_max {
                                    // concave: interior maximum
                                    stat
                                } else if a * d_max * d_max + b * d_max
                                    >= a * d_min * d_min + b * d_min
                                {
                                    d_max
                                } else {
                                    d_min
                                }
                            } else if b > 0.0 {
                                d_max
                            } else {
                                d_min
                            };
                            let gain = a * cand_d * cand_d + b * cand_d;
                            if gain > 1e-13 {
                                x[k * q + i] += cand_d;
                                x[k * q + j] -= cand_d;
                                x[l * q + i] -= cand_d;
                                x[l * q + j] += cand_d;
                                improved = true;
                            }
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        let val = objective(&x);
        if val > best_val {
            best_val = val;
            best_x = x;
        }
    }
    Ok(GraphonEnergy {
        value: best_val,
        split: best_x,
        blocks: m,
        classes: q,
    })
}

/// Quadratic coefficients (a, b) of the objective along the 2x2 exchange
/// move with step d: x[k,i]+=d, x[k,j]-=d, x[l,i]-=d, x[l,j]+=d.
#[allow(clippy::too_many_arguments)]
fn exchange_coeffs(
    w: &StepGraphon,
    h: &WeightedGraph,
    x: &[f64],
    q: usize,
    k: usize,
    l: usize,
    i: usize,
    j: usize,
) -> (f64, f64) {
    let m = w.blocks();
    // delta vector has 4 nonzero entries; objective F(x) = sum over pairs of
    // entries: F(x + d*D) = F(x) + d * (2 x' M D) + d^2 (D' M D) where
    // M[(k,i),(l,j)] = W_kl beta_ij (symmetric).
    let entries = [(k, i, 1.0), (k, j, -1.0), (l, i, -1.0), (l, j, 1.0)];
    // b = 2 * sum over delta entries of (row sum against x)
    let mut b = 0.0;
    for &(bk, bi, sgn) in &entries {
        let mut row = 0.0;
        for lk in 0..m {
            let wv = w.value(bk, lk);
            if wv == 0.0 {
                continue;
            }
            for lj in 0..q {
                row += wv * h.beta(bi, lj) * x[lk * q + lj];
            }
        }
        b += 2.0 * sgn * row;
    }
    let mut a = 0.0;
    for &(ak, ai, s1) in &entries {
        for &(bk, bi, s2) in &entries {
            a += s1 * s2 * w.value(ak, bk) * h.beta(ai, bi);
        }
    }
    (a, b)
}
