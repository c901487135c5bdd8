//! Node similarity from squared-adjacency rows, its estimation through a
//! subgraph sampling oracle, representative-set growing and Voronoi
//! classification, quotient graphs, partition quality diagnostics, and the
//! implicit max-cut pipeline built on top of them.
//!
//! The similarity distance between nodes `u, v` is the normalized l1
//! distance of their rows in A²:
//! `d2(u,v) = E_z |a2(u,z) - a2(v,z)|` with `a2(x,y) = E_w a(x,w) a(y,w)`,
//! both expectations uniform over the node set. Squaring suppresses the
//! O(sqrt n) fluctuations of raw adjacency rows, which is what makes the
//! distance estimable from constant-size samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::cutdist::{self, StepKernel};
use crate::error::{Error, Result};
use crate::graph::{Partition, SimpleGraph, WeightedGraph};
use crate::graphon::{self, Graphon, Point};

/// Largest graph for exact d2 computations.
pub const MAX_EXACT_D2_NODES: usize = 5000;

/// Largest graph for the pairwise-diameter diagnostics in
/// [`regularity_quality`].
pub const MAX_QUALITY_NODES: usize = 2000;

/// Practical representative cap for the max-cut pipeline.
pub const MAX_PIPELINE_REPS: usize = 24;

/// Per-estimate budget on inner times outer sample counts; prevents
/// accidental multi-hour estimates when the requested error is tiny.
pub const MAX_ESTIMATE_WORK: u128 = 4_000_000_000;

// ---------------------------------------------------------------------------
// Exact similarity distance
// ---------------------------------------------------------------------------

fn codegree_row(g: &SimpleGraph, u: usize) -> Vec<u32> {
    (0..g.n()).map(|z| g.codegree(u, z) as u32).collect()
}

fn d2_from_rows(row_u: &[u32], row_v: &[u32], n: usize) -> f64 {
    let sum: u64 = row_u
        .iter()
        .zip(row_v)
        .map(|(&a, &b)| (a as i64 - b as i64).unsigned_abs())
        .sum();
    sum as f64 / (n as f64 * n as f64)
}

/// Exact similarity distance `d2(u,v) = (1/n²) Σ_z |codeg(u,z) - codeg(v,z)|`.
pub fn d2_exact(g: &SimpleGraph, u: usize, v: usize) -> Result<f64> {
    let n = g.n();
    if n > MAX_EXACT_D2_NODES {
        return Err(Error::SizeBound {
            what: "node count for exact similarity distance",
            limit: MAX_EXACT_D2_NODES,
            got: n,
        });
    }
    if u >= n {
        return Err(Error::NodeOutOfRange { node: u, n });
    }
    if v >= n {
        return Err(Error::NodeOutOfRange { node: v, n });
    }
    if u == v {
        return Ok(0.0);
    }
    Ok(d2_from_rows(&codegree_row(g, u), &codegree_row(g, v), n))
}

// ---------------------------------------------------------------------------
// Sampling oracle
// ---------------------------------------------------------------------------

/// Opaque reference to a sampled node held by a [`SamplingOracle`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Handle(usize);

enum HandleData {
    /// Concrete backing: an actual node id.
    Node(usize),
    /// Graphon backing: the latent point, plus a never-reused nonce that
    /// keys this handle's adjacency coins.
    Latent { point: Point, nonce: u64 },
}

enum BackingSource<'a> {
    Concrete(&'a SimpleGraph),
    Limit(&'a dyn Graphon),
}

/// Black-box access to a huge graph: draw uniform random nodes and query
/// adjacency between previously drawn nodes. Answers between any two issued
/// handles are consistent across repeated queries; fresh handles are uniform
/// over the backing population and independent of history.
///
/// With graphon backing, each handle stores its latent point and the edge
/// between two handles is a coin with the kernel value as bias, keyed by the
/// pair of handle nonces so the answer never changes.
pub struct SamplingOracle<'a> {
    backing: BackingSource<'a>,
    registry: Vec<HandleData>,
    coin_seed: u64,
    next_nonce: u64,
    queries: u64,
}

impl<'a> SamplingOracle<'a> {
    pub fn from_graph(g: &'a SimpleGraph, seed: u64) -> Result<Self> {
        if g.n() == 0 {
            return Err(Error::InvalidParam("backing graph has no nodes".into()));
        }
        Ok(SamplingOracle {
            backing: BackingSource::Concrete(g),
            registry: vec![],
            coin_seed: seed,
            next_nonce: 0,
            queries: 0,
        })
    }

    pub fn from_graphon(w: &'a dyn Graphon, seed: u64) -> Result<Self> {
        Ok(SamplingOracle {
            backing: BackingSource::Limit(w),
            registry: vec![],
            coin_seed: seed,
            next_nonce: 0,
            queries: 0,
        })
    }

    /// Number of issued handles.
    pub fn handles(&self) -> usize {
        self.registry.len()
    }

    /// Total adjacency queries served so far.
    pub fn queries(&self) -> u64 {
        self.queries
    }

    /// Concrete node id behind a handle, when the backing is a graph.
    pub fn node_of(&self, h: Handle) -> Option<usize> {
        match self.registry.get(h.0) {
            Some(HandleData::Node(v)) => Some(*v),
            _ => None,
        }
    }

    /// Draw a fresh uniform node using the supplied randomness.
    pub fn fresh(&mut self, rng: &mut ChaCha12Rng) -> Handle {
        let data = match self.backing {
            BackingSource::Concrete(g) => HandleData::Node(rng.gen_range(0..g.n())),
            BackingSource::Limit(w) => {
                let nonce = self.next_nonce;
                self.next_nonce += 1;
                HandleData::Latent {
                    point: w.sample_point(rng),
                    nonce,
                }
            }
        };
        self.registry.push(data);
        Handle(self.registry.len() - 1)
    }

    /// Register a handle for a specific node of a concrete backing (used to
    /// tie representatives back to known nodes in tests and partitions).
    pub fn register_node(&mut self, v: usize) -> Result<Handle> {
        match self.backing {
            BackingSource::Concrete(g) => {
                if v >= g.n() {
                    return Err(Error::NodeOutOfRange { node: v, n: g.n() });
                }
                self.registry.push(HandleData::Node(v));
                Ok(Handle(self.registry.len() - 1))
            }
            BackingSource::Limit(_) => Err(Error::InvalidParam(
                "cannot pin a concrete node on a graphon-backed oracle".into(),
            )),
        }
    }

    /// Adjacency between two issued handles. A handle is never adjacent to
    /// itself (the backing population has no loops).
    pub fn adjacent(&mut self, a: Handle, b: Handle) -> Result<bool> {
        self.queries += 1;
        if a.0 >= self.registry.len() || b.0 >= self.registry.len() {
            return Err(Error::InvalidParam("unknown handle".into()));
        }
        if a == b {
            return Ok(false);
        }
        match (&self.backing, &self.registry[a.0], &self.registry[b.0]) {
            (BackingSource::Concrete(g), HandleData::Node(x), HandleData::Node(y)) => {
                Ok(g.adjacent(*x, *y))
            }
            (
                BackingSource::Limit(w),
                HandleData::Latent { point: px, nonce: nx },
                HandleData::Latent { point: py, nonce: ny },
            ) => {
                let (lo, hi) = if nx <= ny { (*nx, *ny) } else { (*ny, *nx) };
                let coin = graphon::pair_coin(self.coin_seed, lo as usize, hi as usize);
                Ok(coin < w.eval(px, py))
            }
            _ => Err(Error::InvalidParam("handle/backing mismatch".into())),
        }
    }

    fn truncate(&mut self, len: usize) {
        self.registry.truncate(len);
    }
}

// ---------------------------------------------------------------------------
// Similarity distance estimation through the oracle
// ---------------------------------------------------------------------------

/// Sample count for both levels of [`d2_estimate`]: `ceil(8 ln(8/eps) / eps²)`.
///
/// Why this suffices for `|D2 - d2| <= eps` with probability `>= 1 - eps`:
/// the estimator averages, over `N` outer draws `z`, the quantity
/// `|â2(u,z) - â2(v,z)|` where each `â2` difference is an inner average of
/// `N` terms `a(u,w)a(z,w) - a(v,w)a(z,w)` in [-1,1].
/// - Inner bias: `E| inner avg - true | <= sqrt(Var) <= 1/sqrt(N) <= eps/2`
///   as soon as `N >= 4/eps²`, which holds because `8 ln(8/eps) >= 4`.
/// - Outer fluctuation: the outer terms are iid in [0,1], so Hoeffding gives
///   `P(|D2 - E D2| > eps/2) <= 2 exp(-N eps²/2) = 2 (eps/8)^4 <= eps`.
pub fn sample_size(eps: f64) -> usize {
    (8.0 * (8.0 / eps).ln() / (eps * eps)).ceil() as usize
}

/// Estimate `d2(u,v)` through the oracle by two-level sampling. With
/// probability at least `1 - eps` the result is within `eps` of the exact
/// distance. Reproducible for a fixed `(oracle seed, seed)` pair.
pub fn d2_estimate(
    oracle: &mut SamplingOracle,
    u: Handle,
    v: Handle,
    eps: f64,
    seed: u64,
) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(Error::InvalidParam("error bound must be in (0,1)".into()));
    }
    let n_samples = sample_size(eps);
    let work = (n_samples as u128) * (n_samples as u128);
    if work > MAX_ESTIMATE_WORK {
        return Err(Error::WorkBound {
            estimate: work,
            limit: MAX_ESTIMATE_WORK,
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    if u == v {
        return Ok(0.0);
    }

    // fast path for concrete backing: sample node ids directly instead of
    // registering scratch handles (identical estimator, no registry churn)
    let concrete = match (&oracle.backing, oracle.node_of(u), oracle.node_of(v)) {
        (BackingSource::Concrete(g), Some(nu), Some(nv)) => Some((*g, nu, nv)),
        _ => None,
    };
    if let Some((g, nu, nv)) = concrete {
        let n = g.n();
        let mut acc = 0.0;
        for _ in 0..n_samples {
            let z = rng.gen_range(0..n);
            let mut su = 0i64;
            let mut sv = 0i64;
            for _ in 0..n_samples {
                let w = rng.gen_range(0..n);
                if g.adjacent(z, w) {
                    if g.adjacent(nu, w) {
                        su += 1;
                    }
                    if g.adjacent(nv, w) {
                        sv += 1;
                    }
                }
            }
            acc += (su - sv).abs() as f64 / n_samples as f64;
        }
        oracle.queries += 3 * (n_samples as u64) * (n_samples as u64);
        return Ok(acc / n_samples as f64);
    }

    let mut acc = 0.0;
    for _ in 0..n_samples {
        let mark = oracle.handles();
        let z = oracle.fresh(&mut rng);
        let mut su = 0i64;
        let mut sv = 0i64;
        for _ in 0..n_samples {
            let w = oracle.fresh(&mut rng);
            if oracle.adjacent(z, w)? {
                if oracle.adjacent(u, w)? {
                    su += 1;
                }
                if oracle.adjacent(v, w)? {
                    sv += 1;
                }
            }
        }
        acc += (su - sv).abs() as f64 / n_samples as f64;
        // release scratch handles; kept handles keep their nonces, so no
        // adjacency answer ever changes
        oracle.truncate(mark);
    }
    Ok(acc / n_samples as f64)
}

// ---------------------------------------------------------------------------
// Representative sets
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HaltReason {
    /// The rejection counter reached `ceil(1/eps²)`.
    ConsecutiveRejections,
    /// The hard cap `2^{2/eps²}` was reached.
    SizeCap,
}

#[derive(Clone, Debug)]
pub struct CandidateEvent {
    pub handle: Handle,
    /// Estimated distances to the representatives present at the time.
    pub estimates: Vec<f64>,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct RepTrace {
    pub events: Vec<CandidateEvent>,
    pub halt: HaltReason,
}

/// A set of pairwise-far node handles encoding a partition implicitly: the
/// cell of `r` is the set of nodes closer to `r` than to any other
/// representative.
#[derive(Clone, Debug)]
pub struct RepresentativeSet {
    pub handles: Vec<Handle>,
    pub eps: f64,
    /// Row-major `|R| x |R|` matrix of the acceptance-time distance
    /// estimates (0 on the diagonal; entry (i,j) for j < i was measured when
    /// representative i was admitted, and is mirrored to (j,i)).
    pub pairwise: Vec<f64>,
    pub trace: RepTrace,
}

impl RepresentativeSet {
    pub fn len(&self) -> usize {
        self.handles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.handles.is_empty()
    }
}

/// Hard cap `2^{2/eps²}` on the representative count.
pub fn rep_cap(eps: f64) -> f64 {
    2.0f64.powf(2.0 / (eps * eps))
}

/// Grow a representative set through the oracle: repeatedly draw a fresh
/// node, estimate its distance to every current representative with
/// per-call error `eps/|R|`, and admit it only when every estimate exceeds
/// `eps/2`; halt after `ceil(1/eps²)` consecutive rejections or at the size
/// cap.
pub fn build_reps(
    oracle: &mut SamplingOracle,
    eps: f64,
    seed: u64,
) -> Result<RepresentativeSet> {
    if !(0.0..=0.5).contains(&eps) || eps <= 0.0 {
        return Err(Error::InvalidParam(
            "representative growing needs 0 < eps <= 1/2".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let max_rejections = (1.0 / (eps * eps)).ceil() as usize;
    let cap = rep_cap(eps);
    let mut handles: Vec<Handle> = vec![];
    let mut pairwise_rows: Vec<Vec<f64>> = vec![];
    let mut events = vec![];
    let mut rejections = 0usize;
    let halt;
    loop {
        if (handles.len() as f64) >= cap {
            halt = HaltReason::SizeCap;
            break;
        }
        if rejections >= max_rejections {
            halt = HaltReason::ConsecutiveRejections;
            break;
        }
        let w = oracle.fresh(&mut rng);
        let call_eps = if handles.is_empty() {
            eps
        } else {
            eps / handles.len() as f64
        };
        let mut estimates = Vec::with_capacity(handles.len());
        let mut all_far = true;
        for &r in &handles {
            let d = d2_estimate(oracle, w, r, call_eps, rng.gen())?;
            let far = d > eps / 2.0;
            estimates.push(d);
            if !far {
                all_far = false;
                break; // one near representative already disqualifies w
            }
        }
        events.push(CandidateEvent {
            handle: w,
            estimates: estimates.clone(),
            accepted: all_far,
        });
        if all_far {
            pairwise_rows.push(estimates);
            handles.push(w);
            rejections = 0;
        } else {
            rejections += 1;
        }
    }
    let k = handles.len();
    let mut pairwise = vec![0.0; k * k];
    for (i, row) in pairwise_rows.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            pairwise[i * k + j] = d;
            pairwise[j * k + i] = d;
        }
    }
    Ok(RepresentativeSet {
        handles,
        eps,
        pairwise,
        trace: RepTrace { events, halt },
    })
}

/// Classify a node to its (approximately) nearest representative: estimates
/// every distance with per-call error `eps/|R|` and returns the index of the
/// smallest. Scanning in index order breaks ties toward the lowest index.
///
/// Guarantee: with probability at least `1 - eps` every estimate is within
/// `eps/|R|` of the true distance (union bound over the `|R|` calls, each of
/// which fails with probability at most `eps/|R|`), and then the returned
/// `r` satisfies `d2(u,r) <= min_r d2(u,r) + 2 eps/|R|`, which is stronger
/// than the additive form `(1+eps) min + 2 eps`.
pub fn classify(
    oracle: &mut SamplingOracle,
    reps: &[Handle],
    u: Handle,
    eps: f64,
    seed: u64,
) -> Result<usize> {
    let call_eps = eps / reps.len().max(1) as f64;
    classify_with_call_error(oracle, reps, u, call_eps, seed)
}

/// Classification with an explicit per-estimate error (the max-cut pipeline
/// uses a coarser per-call error than `eps/|R|`: it only needs aggregate
/// densities, where independent misclassifications average out).
pub(crate) fn classify_with_call_error(
    oracle: &mut SamplingOracle,
    reps: &[Handle],
    u: Handle,
    call_eps: f64,
    seed: u64,
) -> Result<usize> {
    if reps.is_empty() {
        return Err(Error::InvalidParam(
            "cannot classify against an empty representative set".into(),
        ));
    }
    if reps.len() == 1 {
        return Ok(0);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, &r) in reps.iter().enumerate() {
        let d = d2_estimate(oracle, u, r, call_eps, rng.gen())?;
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Voronoi partitions and quotients
// ---------------------------------------------------------------------------

/// Partition a concrete graph into the cells of the given representative
/// nodes under the exact similarity distance (the deterministic counterpart
/// of [`classify`], available because the whole graph is in hand). Ties go
/// to the lowest representative index; a representative always lands in its
/// own cell, so no cell is empty.
pub fn voronoi_partition(g: &SimpleGraph, reps: &[usize]) -> Result<Partition> {
    let n = g.n();
    if reps.is_empty() {
        return Err(Error::InvalidParam("need at least one representative".into()));
    }
    if n > MAX_EXACT_D2_NODES {
        return Err(Error::SizeBound {
            what: "node count for exact Voronoi cells",
            limit: MAX_EXACT_D2_NODES,
            got: n,
        });
    }
    let mut seen = std::collections::BTreeSet::new();
    for &r in reps {
        if r >= n {
            return Err(Error::NodeOutOfRange { node: r, n });
        }
        if !seen.insert(r) {
            return Err(Error::InvalidParam(format!(
                "representative {r} listed twice"
            )));
        }
    }
    let rep_rows: Vec<Vec<u32>> = reps.iter().map(|&r| codegree_row(g, r)).collect();
    let mut assignment = vec![0usize; n];
    for v in 0..n {
        if let Some(i) = reps.iter().position(|&r| r == v) {
            assignment[v] = i;
            continue;
        }
        let row_v = codegree_row(g, v);
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, row_r) in rep_rows.iter().enumerate() {
            let d = d2_from_rows(&row_v, row_r, n);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        assignment[v] = best;
    }
    // keep cell order aligned with representative order
    let mut blocks: Vec<Vec<usize>> = vec![vec![]; reps.len()];
    for (v, &b) in assignment.iter().enumerate() {
        blocks[b].push(v);
    }
    Partition::new(n, blocks)
}

/// Contract a partition to a weighted graph: node weights `|V_i|/n`, edge
/// weights the pair densities `e(V_i,V_j)/(|V_i||V_j|)`, where `e` counts
/// ordered incidences so the diagonal weight is `2 e(V_i)/|V_i|²`. The total
/// edge mass is preserved exactly: `Σ_ij (|V_i||V_j|/n²) β_ij = 2|E|/n²`.
pub fn quotient(g: &SimpleGraph, p: &Partition) -> Result<WeightedGraph> {
    if p.n() != g.n() {
        return Err(Error::InvalidParam(format!(
            "partition of {} nodes does not match graph on {}",
            p.n(),
            g.n()
        )));
    }
    let k = p.num_blocks();
    let n = g.n();
    let mut e = vec![0u64; k * k];
    for (u, v) in g.edge_iter() {
        let (a, b) = (p.block_of(u), p.block_of(v));
        e[a * k + b] += 1;
        e[b * k + a] += 1;
    }
    let sizes = p.sizes();
    let alpha: Vec<f64> = sizes.iter().map(|&s| s as f64 / n as f64).collect();
    let beta: Vec<f64> = (0..k * k)
        .map(|idx| {
            let (i, j) = (idx / k, idx % k);
            e[idx] as f64 / (sizes[i] as f64 * sizes[j] as f64)
        })
        .collect();
    WeightedGraph::new(k, alpha, beta)
}

// ---------------------------------------------------------------------------
// Partition quality
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct RegularityQuality {
    /// Cut distance between the graph and its partition average (exact when
    /// the block count fits the exact cut-norm solver, otherwise a heuristic
    /// lower estimate).
    pub dcut: f64,
    pub dcut_exact: bool,
    /// Similarity-distance diameter of each class (no nodes removed).
    pub diameters: Vec<f64>,
    /// Fraction of nodes greedily removed for the best certified bound.
    pub exceptional_fraction: f64,
    /// Largest class diameter after the removals.
    pub residual_diameter: f64,
    /// Certified upper bound `24 * max(exceptional fraction, residual
    /// diameter)`, minimized over the greedy removal sequence. Valid because
    /// removing a `delta` fraction and leaving class diameters at most
    /// `delta` forces the cut distance below `24 delta`.
    pub upper_bound: f64,
}

/// Diagnostics for how well a partition captures a graph: the cut distance
/// to the partition average, per-class similarity diameters, and a certified
/// diameter-based upper bound obtained by greedily removing the nodes with
/// the worst within-class eccentricity.
pub fn regularity_quality(g: &SimpleGraph, p: &Partition) -> Result<RegularityQuality> {
    let n = g.n();
    if p.n() != n {
        return Err(Error::InvalidParam(format!(
            "partition of {} nodes does not match graph on {}",
            p.n(),
            n
        )));
    }
    if n > MAX_QUALITY_NODES {
        return Err(Error::SizeBound {
            what: "node count for partition quality diagnostics",
            limit: MAX_QUALITY_NODES,
            got: n,
        });
    }
    // cut distance between the adjacency kernel and the partition average,
    // on the common n-block refinement (node order fixed: this is the
    // labeled distance, which is what the partition average is compared in)
    let q = quotient(g, p)?;
    let masses = vec![1.0 / n as f64; n];
    let mut values = vec![0.0; n * n];
    for u in 0..n {
        for v in 0..n {
            let adj = if g.adjacent(u, v) { 1.0 } else { 0.0 };
            values[u * n + v] = adj - q.beta(p.block_of(u), p.block_of(v));
        }
    }
    let diff = StepKernel::new(masses, values)?;
    let norm = cutdist::cut_norm(&diff)?;

    // within-class pairwise distances
    let rows: Vec<Vec<u32>> = (0..n).map(|u| codegree_row(g, u)).collect();
    let mut class_pairs: Vec<Vec<(usize, usize, f64)>> = vec![];
    let mut diameters = vec![];
    for block in p.blocks() {
        let mut pairs = vec![];
        let mut diam = 0.0f64;
        for (ai, &a) in block.iter().enumerate() {
            for &b in block.iter().skip(ai + 1) {
                let d = d2_from_rows(&rows[a], &rows[b], n);
                diam = diam.max(d);
                pairs.push((a, b, d));
            }
        }
        diameters.push(diam);
        class_pairs.push(pairs);
    }

    // greedy removal: repeatedly drop the node with the largest within-class
    // eccentricity; after each removal the pair (removed fraction, residual
    // diameter) certifies the bound 24*max of the two
    let mut alive = vec![true; n];
    let mut removed = 0usize;
    let eval_diam = |alive: &[bool]| -> f64 {
        let mut d = 0.0f64;
        for pairs in &class_pairs {
            for &(a, b, dist) in pairs {
                if alive[a] && alive[b] {
                    d = d.max(dist);
                }
            }
        }
        d
    };
    let mut best_bound = f64::INFINITY;
    let mut best_frac = 0.0;
    let mut best_resid = 0.0;
    loop {
        let frac = removed as f64 / n as f64;
        let resid = eval_diam(&alive);
        let bound = 24.0 * frac.max(resid);
        if bound < best_bound {
            best_bound = bound;
            best_frac = frac;
            best_resid = resid;
        }
        if resid <= 0.0 || frac >= 0.5 {
            break;
        }
        // node with the worst eccentricity among the living
        let mut ecc = vec![0.0f64; n];
        for pairs in &class_pairs {
            for &(a, b, dist) in pairs {
                if alive[a] && alive[b] {
                    ecc[a] = ecc[a].max(dist);
                    ecc[b] = ecc[b].max(dist);
                }
            }
        }
        let worst = (0..n)
            .filter(|&v| alive[v])
            .max_by(|&a, &b| ecc[a].total_cmp(&ecc[b]))
            .unwrap();
        if ecc[worst] <= 0.0 {
            break;
        }
        alive[worst] = false;
        removed += 1;
    }

    Ok(RegularityQuality {
        dcut: norm.value,
        dcut_exact: norm.exact,
        diameters,
        exceptional_fraction: best_frac,
        residual_diameter: best_resid,
        upper_bound: best_bound,
    })
}

// ---------------------------------------------------------------------------
// Implicit max-cut
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct MaxcutPipeline {
    /// Estimated max-cut density `max_S e(S, V\S)/n²`.
    pub estimate: f64,
    /// Fractional left-share per representative class at the optimum.
    pub shares: Vec<f64>,
    /// Representative indices on each side after rounding the shares.
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// Sampled class weights (fractions of classified nodes).
    pub class_weights: Vec<f64>,
    /// Sampled pair densities, row-major `k x k` (diagonal uses the
    /// within-class unordered-pair density).
    pub class_densities: Vec<f64>,
    pub reps: RepresentativeSet,
}

/// Estimate the maximum cut density of the backing population entirely
/// through the oracle: grow representatives, classify a fresh sample to
/// estimate class weights and pair densities, then maximize the cut of the
/// resulting weighted quotient over fractional splits (classes may split
/// between the sides, so shares live in [0,1]; with a single class the
/// optimum is half/half, giving density/4).
pub fn maxcut_pipeline(
    oracle: &mut SamplingOracle,
    eps: f64,
    seed: u64,
) -> Result<MaxcutPipeline> {
    if !(0.15..=0.5).contains(&eps) {
        return Err(Error::InvalidParam(
            "max-cut pipeline needs 0.15 <= eps <= 0.5".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let reps = build_reps(oracle, eps, rng.gen())?;
    let k = reps.len();
    if k > MAX_PIPELINE_REPS {
        return Err(Error::SizeBound {
            what: "representative count in the max-cut pipeline",
            limit: MAX_PIPELINE_REPS,
            got: k,
        });
    }

    // classify a fresh sample; coarse per-call error eps is enough because
    // only aggregate weights/densities matter
    let m = sample_size(eps);
    let mut members: Vec<Handle> = Vec::with_capacity(m);
    let mut labels: Vec<usize> = Vec::with_capacity(m);
    for _ in 0..m {
        let u = oracle.fresh(&mut rng);
        let c = classify_with_call_error(oracle, &reps.handles, u, eps, rng.gen())?;
        members.push(u);
        labels.push(c);
    }
    let mut counts = vec![0usize; k];
    for &c in &labels {
        counts[c] += 1;
    }
    let class_weights: Vec<f64> = counts.iter().map(|&c| c as f64 / m as f64).collect();

    // pair densities from adjacency among the classified sample
    let mut adj_pairs = vec![0u64; k * k];
    let mut tot_pairs = vec![0u64; k * k];
    for i in 0..m {
        for j in (i + 1)..m {
            let (a, b) = (labels[i], labels[j]);
            tot_pairs[a * k + b] += 1;
            tot_pairs[b * k + a] += 1;
            if oracle.adjacent(members[i], members[j])? {
                adj_pairs[a * k + b] += 1;
                adj_pairs[b * k + a] += 1;
            }
        }
    }
    let class_densities: Vec<f64> = (0..k * k)
        .map(|idx| {
            if tot_pairs[idx] == 0 {
                0.0
            } else {
                adj_pairs[idx] as f64 / tot_pairs[idx] as f64
            }
        })
        .collect();

    let shares = fractional_maxcut(&class_weights, &class_densities, k, rng.gen());
    let estimate = cut_value(&class_weights, &class_densities, k, &shares);
    let mut left = vec![];
    let mut right = vec![];
    for (i, &x) in shares.iter().enumerate() {
        if x >= 0.5 {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    Ok(MaxcutPipeline {
        estimate,
        shares,
        left,
        right,
        class_weights,
        class_densities,
        reps,
    })
}

fn cut_value(w: &[f64], beta: &[f64], k: usize, x: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..k {
        for j in 0..k {
            total += w[i] * w[j] * beta[i * k + j] * x[i] * (1.0 - x[j]);
        }
    }
    total
}

/// Maximize `Σ_ij w_i w_j β_ij x_i (1-x_j)` over `x in [0,1]^k` by
/// coordinate ascent (each coordinate's restriction is a concave quadratic,
/// maximized in closed form), from every binary start when `k <= 12` plus
/// seeded random starts.
fn fractional_maxcut(w: &[f64], beta: &[f64], k: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = vec![];
    if k <= 12 {
        for mask in 0u32..(1 << k) {
            starts.push((0..k).map(|i| ((mask >> i) & 1) as f64).collect());
        }
    }
    for _ in 0..20 {
        starts.push((0..k).map(|_| rng.gen::<f64>()).collect());
    }
    let mut best = vec![0.0; k];
    let mut best_val = f64::NEG_INFINITY;
    for mut x in starts {
        for _sweep in 0..200 {
            let mut moved = false;
            for i in 0..k {
                // restriction to x_i: a x_i² + b x_i + const
                let mut s_out = 0.0; // i on the left against the rest
                let mut s_in = 0.0; // i on the right against the rest
                for j in 0..k {
                    if j == i {
                        continue;
                    }
                    s_out += w[i] * w[j] * beta[i * k + j] * (1.0 - x[j]);
                    s_in += w[j] * w[i] * beta[j * k + i] * x[j];
                }
                let a = -w[i] * w[i] * beta[i * k + i];
                let b = w[i] * w[i] * beta[i * k + i] + s_out - s_in;
                let cand = if a < -1e-18 {
                    (-b / (2.0 * a)).clamp(0.0, 1.0)
                } else if b > 0.0 {
                    1.0
                } else {
                    0.0
                };
                if (cand - x[i]).abs() > 1e-12 {
                    let old = a * x[i] * x[i] + b * x[i];
                    let new = a * cand * cand + b * cand;
                    if new > old + 1e-15 {
                        x[i] = cand;
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        let val = cut_value(w, beta, k, &x);
        if val > best_val {
            best_val = val;
            best = x;
        }
    }
    best
}

/// Implicit cut membership: a node goes left iff its estimated distance to
/// the left representatives is smaller than to the right ones.
pub fn cut_side(
    oracle: &mut SamplingOracle,
    reps: &RepresentativeSet,
    left: &[usize],
    right: &[usize],
    u: Handle,
    eps: f64,
    seed: u64,
) -> Result<bool> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::InvalidParam(
            "both sides of the cut need at least one representative".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut min_left = f64::INFINITY;
    for &i in left {
        let d = d2_estimate(oracle, u, reps.handles[i], eps, rng.gen())?;
        min_left = min_left.min(d);
    }
    let mut min_right = f64::INFINITY;
    for &i in right {
        let d = d2_estimate(oracle, u, reps.handles[i], eps, rng.gen())?;
        min_right = min_right.min(d);
    }
    Ok(min_left < min_right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use nalgebra::DMatrix;

    fn two_cliques(m: usize) -> SimpleGraph {
        let mut g = SimpleGraph::empty(2 * m);
        for side in 0..2 {
            let base = side * m;
            for a in 0..m {
                for b in (a + 1)..m {
                    g.add_edge(base + a, base + b).unwrap();
                }
            }
        }
        g
    }

    /// Independent dense-matrix computation of the similarity distance.
    fn d2_matrix_oracle(g: &SimpleGraph, u: usize, v: usize) -> f64 {
        let n = g.n();
        let a = DMatrix::<f64>::from_fn(n, n, |i, j| if g.adjacent(i, j) { 1.0 } else { 0.0 });
        let c = &a * &a;
        (0..n)
            .map(|z| (c[(u, z)] - c[(v, z)]).abs())
            .sum::<f64>()
            / (n as f64 * n as f64)
    }

    #[test]
    fn d2_exact_basics() {
        let g = gen::er(20, 0.5, 1).unwrap();
        assert_eq!(d2_exact(&g, 7, 7).unwrap(), 0.0);
        // twins: same side of a complete bipartite graph
        let kb = gen::complete_bipartite(6, 6);
        assert_eq!(d2_exact(&kb, 0, 1).unwrap(), 0.0);
        // opposite sides are far
        assert!((d2_exact(&kb, 0, 6).unwrap() - 0.5).abs() < 1e-12);
        // symmetry
        assert_eq!(
            d2_exact(&g, 3, 11).unwrap(),
            d2_exact(&g, 11, 3).unwrap()
        );
    }

    #[test]
    fn d2_exact_matches_matrix_oracle() {
        // complete graph minus one edge: the two nonadjacent nodes vs others
        let mut k4 = gen::complete(4);
        let mut edges: Vec<(usize, usize)> = k4.edge_iter().collect();
        edges.retain(|&(u, v)| !(u == 0 && v == 1));
        k4 = SimpleGraph::from_edges(4, &edges).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                assert!(
                    (d2_exact(&k4, u, v).unwrap() - d2_matrix_oracle(&k4, u, v)).abs() < 1e-12
                );
            }
        }
        for seed in 0..3 {
            let g = gen::er(25, 0.4, seed).unwrap();
            for (u, v) in [(0, 1), (3, 17), (9, 24)] {
                assert!(
                    (d2_exact(&g, u, v).unwrap() - d2_matrix_oracle(&g, u, v)).abs() < 1e-12
                );
            }
        }
    }

    #[test]
    fn estimate_is_zero_for_identical_nodes() {
        let g = gen::er(100, 0.5, 2).unwrap();
        let mut o = SamplingOracle::from_graph(&g, 7).unwrap();
        let u = o.register_node(4).unwrap();
        assert_eq!(d2_estimate(&mut o, u, u, 0.2, 3).unwrap(), 0.0);
    }

    #[test]
    fn estimate_reproducible_and_seed_sensitive() {
        let g = gen::er(200, 0.5, 3).unwrap();
        let mut o = SamplingOracle::from_graph(&g, 7).unwrap();
        let u = o.register_node(0).unwrap();
        let v = o.register_node(1).unwrap();
        let a = d2_estimate(&mut o, u, v, 0.25, 11).unwrap();
        let b = d2_estimate(&mut o, u, v, 0.25, 11).unwrap();
        let c = d2_estimate(&mut o, u, v, 0.25, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn estimate_tracks_exact_distance() {
        let g = gen::er(500, 0.5, 4).unwrap();
        let mut o = SamplingOracle::from_graph(&g, 9).unwrap();
        let eps = 0.2;
        let mut within = 0;
        let mut rng = ChaCha12Rng::seed_from_u64(55);
        for t in 0..30 {
            let (a, b) = (rng.gen_range(0..500), rng.gen_range(0..500));
            let u = o.register_node(a).unwrap();
            let v = o.register_node(b).unwrap();
            let est = d2_estimate(&mut o, u, v, eps, t).unwrap();
            let exact = d2_exact(&g, a, b).unwrap();
            if (est - exact).abs() <= eps {
                within += 1;
            }
        }
        assert!(within >= 27, "only {within}/30 within eps");
    }

    #[test]
    fn estimate_separates_bipartite_sides() {
        let g = gen::complete_bipartite(30, 30);
        let mut o = SamplingOracle::from_graph(&g, 1).unwrap();
        let same = (o.register_node(0).unwrap(), o.register_node(1).unwrap());
        let cross = (o.register_node(0).unwrap(), o.register_node(30).unwrap());
        let d_same = d2_estimate(&mut o, same.0, same.1, 0.15, 5).unwrap();
        let d_cross = d2_estimate(&mut o, cross.0, cross.1, 0.15, 6).unwrap();
        assert!(d_same < 0.15, "same-side estimate {d_same}");
        assert!((d_cross - 0.5).abs() < 0.15, "cross estimate {d_cross}");
    }

    #[test]
    fn oracle_answers_are_consistent_and_match_backing() {
        let g = gen::er(50, 0.5, 8).unwrap();
        let mut o = SamplingOracle::from_graph(&g, 3).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let hs: Vec<Handle> = (0..20).map(|_| o.fresh(&mut rng)).collect();
        for &a in &hs {
            for &b in &hs {
                let first = o.adjacent(a, b).unwrap();
                let again = o.adjacent(a, b).unwrap();
                assert_eq!(first, again);
                let (na, nb) = (o.node_of(a).unwrap(), o.node_of(b).unwrap());
                assert_eq!(first, na != nb && g.adjacent(na, nb));
            }
        }
        assert!(o.queries() >= 800);
    }

    #[test]
    fn graphon_oracle_consistent_coins() {
        let w = crate::graphon::StepGraphon::constant(0.5).unwrap();
        let mut o = SamplingOracle::from_graphon(&w, 5).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let hs: Vec<Handle> = (0..25).map(|_| o.fresh(&mut rng)).collect();
        let mut edges = 0;
        for (i, &a) in hs.iter().enumerate() {
            for &b in hs.iter().skip(i + 1) {
                let x = o.adjacent(a, b).unwrap();
                assert_eq!(x, o.adjacent(a, b).unwrap());
                assert_eq!(x, o.adjacent(b, a).unwrap());
                if x {
                    edges += 1;
                }
            }
        }
        // 300 pairs at density 1/2
        assert!(edges > 100 && edges < 200, "{edges}");
        assert!(o.node_of(hs[0]).is_none());
    }

    #[test]
    fn graphon_estimate_bipartite_limit() {
        // two-block graphon with all mass across: d2 of points in opposite
        // blocks is 1/2, same block 0
        let w = crate::graphon::StepGraphon::new(
            vec![0.5, 0.5],
            vec![0.0, 1.0, 1.0, 0.0],
        )
        .unwrap();
        let mut o = SamplingOracle::from_graphon(&w, 9).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        // draw until we hold one point per block
        let mut in0 = None;
        let mut in1 = None;
        for _ in 0..200 {
            let h = o.fresh(&mut rng);
            let side = match &o.registry[h.0] {
                HandleData::Latent { point, .. } => match point {
                    Point::Interval(x) => usize::from(*x >= 0.5),
                    _ => unreachable!(),
                },
                _ => unreachable!(),
            };
            if side == 0 && in0.is_none() {
                in0 = Some(h);
            }
            if side == 1 && in1.is_none() {
                in1 = Some(h);
            }
            if in0.is_some() && in1.is_some() {
                break;
            }
        }
        let (a, b) = (in0.unwrap(), in1.unwrap());
        let d = d2_estimate(&mut o, a, b, 0.2, 11).unwrap();
        assert!((d - 0.5).abs() < 0.2, "cross-block estimate {d}");
        let before = o.handles();
        let _ = d2_estimate(&mut o, a, b, 0.2, 12).unwrap();
        assert_eq!(o.handles(), before, "scratch handles must be released");
    }

    #[test]
    fn reps_on_complete_graph_stay_single() {
        let g = gen::complete(60);
        for seed in 0..5 {
            let mut o = SamplingOracle::from_graph(&g, seed).unwrap();
            let r = build_reps(&mut o, 0.3, seed).unwrap();
            assert_eq!(r.len(), 1, "seed {seed}");
            assert_eq!(r.trace.halt, HaltReason::ConsecutiveRejections);
            // the rejection run has exactly ceil(1/eps²) trailing rejections
            let tail = r
                .trace
                .events
                .iter()
                .rev()
                .take_while(|e| !e.accepted)
                .count();
            assert_eq!(tail, (1.0f64 / 0.09).ceil() as usize);
        }
    }

    #[test]
    fn reps_find_both_cliques() {
        let g = two_cliques(40);
        let mut found_two = 0;
        for seed in 0..10 {
            let mut o = SamplingOracle::from_graph(&g, seed).unwrap();
            let r = build_reps(&mut o, 0.3, 1000 + seed).unwrap();
            assert!(r.len() <= 2, "seed {seed}: |R| = {}", r.len());
            if r.len() == 2 {
                found_two += 1;
                // the two representatives really are in different cliques
                let a = o.node_of(r.handles[0]).unwrap() / 40;
                let b = o.node_of(r.handles[1]).unwrap() / 40;
                assert_ne!(a, b, "seed {seed}");
                // acceptance-time estimates exceed the threshold
                assert!(r.pairwise[1] > 0.15);
            }
        }
        assert!(found_two >= 8, "two cliques found in {found_two}/10 seeds");
    }

    #[test]
    fn classify_basics_and_two_clique_accuracy() {
        let g = two_cliques(40);
        let mut o = SamplingOracle::from_graph(&g, 77).unwrap();
        let r0 = o.register_node(3).unwrap(); // clique 0
        let r1 = o.register_node(47).unwrap(); // clique 1
        // singleton set short-circuits
        let u = o.register_node(10).unwrap();
        assert_eq!(classify(&mut o, &[r0], u, 0.2, 1).unwrap(), 0);
        // a representative classifies to itself (its own estimate is exactly 0)
        assert_eq!(classify(&mut o, &[r0, r1], r1, 0.2, 2).unwrap(), 1);
        let mut correct = 0;
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for t in 0..40 {
            let v = rng.gen_range(0..80);
            let h = o.register_node(v).unwrap();
            let c = classify(&mut o, &[r0, r1], h, 0.2, 100 + t).unwrap();
            if c == v / 40 {
                correct += 1;
            }
        }
        assert!(correct >= 38, "only {correct}/40 classified correctly");
    }

    #[test]
    fn voronoi_all_reps_is_discrete() {
        let g = gen::er(12, 0.5, 5).unwrap();
        let reps: Vec<usize> = (0..12).collect();
        let p = voronoi_partition(&g, &reps).unwrap();
        assert_eq!(p.num_blocks(), 12);
        assert!(p.sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn voronoi_recovers_planted_cliques() {
        let g = two_cliques(30);
        let p = voronoi_partition(&g, &[5, 35]).unwrap();
        assert_eq!(p.num_blocks(), 2);
        let mis: usize = (0..60)
            .filter(|&v| p.block_of(v) != v / 30)
            .count();
        assert_eq!(mis, 0, "{mis} misclassified");
    }

    #[test]
    fn voronoi_validates_reps() {
        let g = gen::er(10, 0.5, 6).unwrap();
        assert!(voronoi_partition(&g, &[]).is_err());
        assert!(voronoi_partition(&g, &[10]).is_err());
        assert!(voronoi_partition(&g, &[3, 3]).is_err());
    }

    #[test]
    fn quotient_discrete_partition_is_adjacency() {
        let g = gen::er(9, 0.5, 7).unwrap();
        let p = Partition::new(9, (0..9).map(|v| vec![v]).collect()).unwrap();
        let q = quotient(&g, &p).unwrap();
        for u in 0..9 {
            assert!((q.alpha(u) - 1.0 / 9.0).abs() < 1e-15);
            for v in 0..9 {
                let want = if g.adjacent(u, v) { 1.0 } else { 0.0 };
                assert_eq!(q.beta(u, v), want);
            }
        }
    }

    #[test]
    fn quotient_single_block_and_turan() {
        let g = gen::er(14, 0.4, 8).unwrap();
        let m = g.edge_iter().count() as f64;
        let p1 = Partition::new(14, vec![(0..14).collect()]).unwrap();
        let q1 = quotient(&g, &p1).unwrap();
        assert!((q1.beta(0, 0) - 2.0 * m / 196.0).abs() < 1e-15);

        // complete multipartite on three classes of four: off-diagonal
        // density 1, diagonal 0
        let t = gen::turan(12, 3).unwrap();
        let classes: Vec<Vec<usize>> = (0..3)
            .map(|c| (0..12).filter(|&v| v % 3 == c).collect())
            .collect();
        assert!(!t.adjacent(0, 3) && t.adjacent(0, 1));
        let p = Partition::new(12, classes).unwrap();
        let q = quotient(&t, &p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 1.0 };
                assert!((q.beta(i, j) - want).abs() < 1e-15, "{i}{j}");
            }
        }
    }

    #[test]
    fn quotient_preserves_edge_mass() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for seed in 0..5 {
            let g = gen::er(20, 0.4, seed).unwrap();
            let assignment: Vec<usize> = (0..20).map(|_| rng.gen_range(0..4)).collect();
            let p = Partition::from_assignment(&assignment).unwrap();
            let q = quotient(&g, &p).unwrap();
            let k = p.num_blocks();
            let mass: f64 = (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| q.alpha(i) * q.alpha(j) * q.beta(i, j))
                .sum();
            let want = 2.0 * g.edge_iter().count() as f64 / 400.0;
            assert!((mass - want).abs() < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn quality_discrete_partition_is_exactly_the_graph() {
        let g = gen::er(10, 0.5, 9).unwrap();
        let p = Partition::new(10, (0..10).map(|v| vec![v]).collect()).unwrap();
        let quality = regularity_quality(&g, &p).unwrap();
        assert!(quality.dcut_exact);
        assert!(quality.dcut.abs() < 1e-12);
        assert!(quality.diameters.iter().all(|&d| d == 0.0));
        assert_eq!(quality.upper_bound, 0.0);
    }

    #[test]
    fn quality_upper_bound_dominates_exact_distance() {
        // the diameter-based certificate is a true upper bound for the cut
        // distance on every graph/partition pair
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        for seed in 0..10 {
            let n = 12 + (seed as usize % 5);
            let g = gen::er(n, 0.5, 100 + seed).unwrap();
            let blocks = 2 + (seed as usize % 3);
            let assignment: Vec<usize> =
                (0..n).map(|_| rng.gen_range(0..blocks)).collect();
            let p = Partition::from_assignment(&assignment).unwrap();
            let quality = regularity_quality(&g, &p).unwrap();
            assert!(quality.dcut_exact);
            assert!(
                quality.dcut <= quality.upper_bound + 1e-9,
                "seed {seed}: exact {} > bound {}",
                quality.dcut,
                quality.upper_bound
            );
        }
    }

    #[test]
    fn quality_single_block_on_er_is_small() {
        let g = gen::er(18, 0.5, 10).unwrap();
        let p = Partition::new(18, vec![(0..18).collect()]).unwrap();
        let quality = regularity_quality(&g, &p).unwrap();
        assert!(quality.dcut_exact);
        // one block averages to the density: the residual cut norm is the
        // quasirandom deviation, small but positive
        assert!(quality.dcut > 0.01 && quality.dcut < 0.3, "{}", quality.dcut);
    }

    #[test]
    fn pipeline_two_sided_on_complete_bipartite() {
        let g = gen::complete_bipartite(60, 60);
        let mut o = SamplingOracle::from_graph(&g, 31).unwrap();
        let out = maxcut_pipeline(&mut o, 0.3, 17).unwrap();
        assert!(
            (out.estimate - 0.25).abs() < 0.02,
            "estimate {}",
            out.estimate
        );
        assert_eq!(out.reps.len(), 2);
        assert_eq!(out.left.len(), 1);
        assert_eq!(out.right.len(), 1);
        // representatives sit on opposite sides and the split respects that
        let side = |i: usize| o.node_of(out.reps.handles[i]).unwrap() / 60;
        assert_ne!(side(out.left[0]), side(out.right[0]));
    }

    #[test]
    fn pipeline_empty_graph_zero() {
        let g = gen::empty(50);
        let mut o = SamplingOracle::from_graph(&g, 32).unwrap();
        let out = maxcut_pipeline(&mut o, 0.3, 18).unwrap();
        assert_eq!(out.estimate, 0.0);
        assert_eq!(out.reps.len(), 1);
    }

    #[test]
    fn pipeline_single_class_gives_quarter_density() {
        // one representative class: the fractional split puts half the class
        // on each side, estimating density/4 (here ~ 1/8)
        let g = gen::er(300, 0.5, 33).unwrap();
        let mut o = SamplingOracle::from_graph(&g, 34).unwrap();
        let out = maxcut_pipeline(&mut o, 0.3, 19).unwrap();
        assert_eq!(out.reps.len(), 1);
        assert!((out.shares[0] - 0.5).abs() < 1e-9);
        assert!((out.estimate - 0.125).abs() < 0.02, "{}", out.estimate);
    }

    #[test]
    fn cut_side_separates_bipartite_nodes() {
        let g = gen::complete_bipartite(40, 40);
        let mut o = SamplingOracle::from_graph(&g, 35).unwrap();
        let out = maxcut_pipeline(&mut o, 0.3, 20).unwrap();
        let left_side = o.node_of(out.reps.handles[out.left[0]]).unwrap() / 40;
        let mut agree = 0;
        for t in 0..20 {
            let v = (t * 4) % 80;
            let h = o.register_node(v).unwrap();
            let goes_left =
                cut_side(&mut o, &out.reps, &out.left, &out.right, h, 0.15, 300 + t as u64)
                    .unwrap();
            let same_side_as_left_rep = (v / 40) == left_side;
            if goes_left == same_side_as_left_rep {
                agree += 1;
            }
        }
        assert!(agree >= 18, "only {agree}/20 assigned consistently");
    }

    #[test]
    fn full_loop_reps_then_partition_meets_weak_bound() {
        // end-to-end: representatives grown through the oracle, cells from
        // exact distances, quality certified against (4 eps)^(1/4)
        let eps = 0.3f64;
        let target = (4.0 * eps).powf(0.25);
        for seed in 0..3 {
            let g = gen::er(22, 0.5, 200 + seed).unwrap();
            let mut o = SamplingOracle::from_graph(&g, seed).unwrap();
            let reps = build_reps(&mut o, eps, 400 + seed).unwrap();
            let mut rep_nodes: Vec<usize> = reps
                .handles
                .iter()
                .map(|&h| o.node_of(h).unwrap())
                .collect();
            rep_nodes.sort_unstable();
            rep_nodes.dedup();
            let p = voronoi_partition(&g, &rep_nodes).unwrap();
            let quality = regularity_quality(&g, &p).unwrap();
            assert!(quality.dcut_exact);
            assert!(
                quality.dcut <= target,
                "seed {seed}: {} > {target}",
                quality.dcut
            );
        }
    }
}
