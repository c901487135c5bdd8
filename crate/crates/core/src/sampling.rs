//! Observables of bounded-size random samples from a graph: the k-node
//! induced-subgraph distribution, the radius-r neighborhood (rooted ball)
//! distribution, reconstruction of the ball distribution from
//! degree-constrained induced counts, concentration and sampling-lemma
//! harnesses, parameter estimation from samples, the quasirandomness
//! property battery, and convergence diagnostics for growth models.

use std::collections::BTreeMap;

use rand::seq::index::sample as index_sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::canon::{canonical_form_capped, canonical_form_rooted, CanonicalForm};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph};
use crate::graphon::{self, Graphon};
use crate::homcount;

/// Largest k for which the exact k-sample distribution is enumerated.
pub const MAX_EXACT_SAMPLE_K: usize = 6;

/// Cap on enumerated k-subsets in exact mode.
pub const MAX_SUBSET_ENUMERATION: u128 = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleKind {
    /// Isomorphism class of the subgraph induced by k uniform distinct nodes.
    SubgraphK(usize),
    /// Rooted isomorphism class of the radius-r ball at a uniform root,
    /// under a degree bound d.
    BallR { r: usize, d: usize },
}

/// A probability distribution over canonical (rooted) graph classes.
#[derive(Clone, Debug)]
pub struct SampleDistribution {
    pub kind: SampleKind,
    pub probs: BTreeMap<CanonicalForm, f64>,
    /// A representative per class; for balls, relabeled with the root at
    /// node 0.
    pub reps: BTreeMap<CanonicalForm, Multigraph>,
    pub exact: bool,
    /// 0 in exact mode.
    pub trials: usize,
}

impl SampleDistribution {
    pub fn prob(&self, form: &CanonicalForm) -> f64 {
        self.probs.get(form).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probs.values().sum()
    }
}

/// Total variation distance `(1/2) Σ |p - q|` over the union of supports.
pub fn total_variation(a: &SampleDistribution, b: &SampleDistribution) -> f64 {
    let mut keys: Vec<&CanonicalForm> = a.probs.keys().collect();
    for k in b.probs.keys() {
        if !a.probs.contains_key(k) {
            keys.push(k);
        }
    }
    0.5 * keys
        .into_iter()
        .map(|k| (a.prob(k) - b.prob(k)).abs())
        .sum::<f64>()
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Exact k-node sample distribution by enumerating all `C(n,k)` subsets and
/// canonicalizing each induced subgraph.
pub fn sigma_exact(g: &SimpleGraph, k: usize) -> Result<SampleDistribution> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParam(format!(
            "sample size k={k} must satisfy 1 <= k <= n={n}"
        )));
    }
    if k > MAX_EXACT_SAMPLE_K {
        return Err(Error::SizeBound {
            what: "sample size for exact subgraph distribution",
            limit: MAX_EXACT_SAMPLE_K,
            got: k,
        });
    }
    let total = binom(n as u128, k as u128);
    if total > MAX_SUBSET_ENUMERATION {
        return Err(Error::WorkBound {
            estimate: total,
            limit: MAX_SUBSET_ENUMERATION,
        });
    }
    let mut counts: BTreeMap<CanonicalForm, u64> = BTreeMap::new();
    let mut reps: BTreeMap<CanonicalForm, Multigraph> = BTreeMap::new();
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let sub = g.induce(&subset)?.to_multigraph();
        let c = canonical_form_capped(&sub, k)?;
        *counts.entry(c.form.clone()).or_insert(0) += 1;
        reps.entry(c.form).or_insert(sub);
        // next k-combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                let probs = counts
                    .into_iter()
                    .map(|(f, c)| (f, c as f64 / total as f64))
                    .collect();
                return Ok(SampleDistribution {
                    kind: SampleKind::SubgraphK(k),
                    probs,
                    reps,
                    exact: true,
                    trials: 0,
                });
            }
            i -= 1;
            if subset[i] < n - (k - i) {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Empirical k-node sample distribution over `trials` uniform k-subsets.
pub fn sigma_empirical(
    g: &SimpleGraph,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<SampleDistribution> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParam(format!(
            "sample size k={k} must satisfy 1 <= k <= n={n}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParam("need at least one trial".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<CanonicalForm, u64> = BTreeMap::new();
    let mut reps: BTreeMap<CanonicalForm, Multigraph> = BTreeMap::new();
    for _ in 0..trials {
        let subset: Vec<usize> = index_sample(&mut rng, n, k).into_vec();
        let sub = g.induce(&subset)?.to_multigraph();
        let c = canonical_form_capped(&sub, k)?;
        *counts.entry(c.form.clone()).or_insert(0) += 1;
        reps.entry(c.form).or_insert(sub);
    }
    let probs = counts
        .into_iter()
        .map(|(f, c)| (f, c as f64 / trials as f64))
        .collect();
    Ok(SampleDistribution {
        kind: SampleKind::SubgraphK(k),
        probs,
        reps,
        exact: false,
        trials,
    })
}

fn check_degree_bound(g: &SimpleGraph, d: usize) -> Result<()> {
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) > d) {
        return Err(Error::InvalidParam(format!(
            "degree bound {d} violated: node {v} has degree {}",
            g.degree(v)
        )));
    }
    Ok(())
}

/// Extract the rooted ball of radius `r` around `v` as a graph with the root
/// relabeled to node 0, plus its canonical form.
fn rooted_ball_class(g: &SimpleGraph, v: usize, r: usize) -> Result<(CanonicalForm, Multigraph)> {
    let mut nodes = g.ball(v, r);
    nodes.sort_unstable();
    let root_pos = nodes.iter().position(|&x| x == v).expect("root in ball");
    let sub = g.induce(&nodes)?.to_multigraph();
    let c = canonical_form_rooted(&sub, root_pos)?;
    // relabel so the root is node 0 (canonical perm puts it at position 0)
    let mut inv = vec![0usize; sub.n()];
    for (pos, &orig) in c.perm.iter().enumerate() {
        inv[orig] = pos;
    }
    let mut rep = Multigraph::new(sub.n());
    for ((a, b), m) in sub.edge_iter() {
        rep.add_edge_mult(inv[a], inv[b], m)?;
    }
    Ok((c.form, rep))
}

/// Exact neighborhood sample distribution: the rooted r-ball class at each
/// of the n roots, uniformly weighted.
pub fn rho_exact(g: &SimpleGraph, r: usize, d: usize) -> Result<SampleDistribution> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParam("need at least one node".into()));
    }
    check_degree_bound(g, d)?;
    let mut counts: BTreeMap<CanonicalForm, u64> = BTreeMap::new();
    let mut reps: BTreeMap<CanonicalForm, Multigraph> = BTreeMap::new();
    for v in 0..n {
        let (form, rep) = rooted_ball_class(g, v, r)?;
        *counts.entry(form.clone()).or_insert(0) += 1;
        reps.entry(form).or_insert(rep);
    }
    let probs = counts
        .into_iter()
        .map(|(f, c)| (f, c as f64 / n as f64))
        .collect();
    Ok(SampleDistribution {
        kind: SampleKind::BallR { r, d },
        probs,
        reps,
        exact: true,
        trials: 0,
    })
}

/// Empirical neighborhood distribution from uniformly sampled roots.
pub fn rho_empirical(
    g: &SimpleGraph,
    r: usize,
    d: usize,
    trials: usize,
    seed: u64,
) -> Result<SampleDistribution> {
    let n = g.n();
    if n == 0 || trials == 0 {
        return Err(Error::InvalidParam("need nodes and trials".into()));
    }
    check_degree_bound(g, d)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<CanonicalForm, u64> = BTreeMap::new();
    let mut reps: BTreeMap<CanonicalForm, Multigraph> = BTreeMap::new();
    for _ in 0..trials {
        let v = rng.gen_range(0..n);
        let (form, rep) = rooted_ball_class(g, v, r)?;
        *counts.entry(form.clone()).or_insert(0) += 1;
        reps.entry(form).or_insert(rep);
    }
    let probs = counts
        .into_iter()
        .map(|(f, c)| (f, c as f64 / trials as f64))
        .collect();
    Ok(SampleDistribution {
        kind: SampleKind::BallR { r, d },
        probs,
        reps,
        exact: false,
        trials,
    })
}

/// Probability that the r-ball at a uniform root of `G` is rooted-isomorphic
/// to `ball` (rooted at `root`), computed **without** extracting balls from
/// `G`: counts induced embeddings of `ball` whose interior nodes (distance
/// `< r` from the root) keep their exact degrees, then divides by
/// `n · |Aut_rooted(ball)|`. An induced embedding with matching interior
/// degrees necessarily covers the whole r-ball of the image root, which
/// makes the count exactly (#matching roots) · |Aut_rooted|.
pub fn ball_probability_from_counts(
    ball: &SimpleGraph,
    root: usize,
    r: usize,
    g: &SimpleGraph,
) -> Result<f64> {
    let b = ball.n();
    if root >= b {
        return Err(Error::NodeOutOfRange { node: root, n: b });
    }
    // distances inside the candidate ball
    let mut dist = vec![usize::MAX; b];
    dist[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for w in ball.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist.iter().any(|&x| x > r) {
        return Err(Error::InvalidParam(
            "candidate is not a valid ball: some node is farther than r from the root".into(),
        ));
    }
    let constraints: Vec<Option<usize>> = (0..b)
        .map(|v| {
            if dist[v] < r {
                Some(ball.degree(v))
            } else {
                None
            }
        })
        .collect();
    let embeddings = homcount::ind_deg_opt(ball, &constraints, g)?;
    let aut = canonical_form_rooted(&ball.to_multigraph(), root)?.aut;
    Ok(embeddings as f64 / (g.n() as f64 * aut as f64))
}

pub const MAX_RECONSTRUCT_NODES: usize = 30;
pub const MAX_RECONSTRUCT_DEGREE: usize = 3;
pub const MAX_RECONSTRUCT_RADIUS: usize = 2;

/// Reconstruct the neighborhood distribution from induced-embedding counts
/// with degree constraints (no ball extraction in the probability path).
/// The candidate class list is read off the graph in one scan; each class
/// probability then comes from the independent counting identity.
pub fn rho_from_counts(g: &SimpleGraph, r: usize, d: usize) -> Result<SampleDistribution> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidParam("need at least one node".into()));
    }
    if n > MAX_RECONSTRUCT_NODES {
        return Err(Error::SizeBound {
            what: "node count for neighborhood reconstruction",
            limit: MAX_RECONSTRUCT_NODES,
            got: n,
        });
    }
    if d > MAX_RECONSTRUCT_DEGREE {
        return Err(Error::SizeBound {
            what: "degree bound for neighborhood reconstruction",
            limit: MAX_RECONSTRUCT_DEGREE,
            got: d,
        });
    }
    if r > MAX_RECONSTRUCT_RADIUS {
        return Err(Error::SizeBound {
            what: "radius for neighborhood reconstruction",
            limit: MAX_RECONSTRUCT_RADIUS,
            got: r,
        });
    }
    check_degree_bound(g, d)?;
    // candidate classes: distinct ball shapes present in G (a support scan
    // only; probabilities below never reuse these counts)
    let mut candidates: BTreeMap<CanonicalForm, (SimpleGraph, usize)> = BTreeMap::new();
    for v in 0..n {
        let mut nodes = g.ball(v, r);
        nodes.sort_unstable();
        let root_pos = nodes.iter().position(|&x| x == v).unwrap();
        let sub = g.induce(&nodes)?;
        let c = canonical_form_rooted(&sub.to_multigraph(), root_pos)?;
        candidates.entry(c.form).or_insert((sub, root_pos));
    }
    let mut probs = BTreeMap::new();
    let mut reps = BTreeMap::new();
    for (form, (ball, root)) in candidates {
        let p = ball_probability_from_counts(&ball, root, r, g)?;
        // representative relabeled with root first
        let mut order: Vec<usize> = (0..ball.n()).collect();
        order.swap(0, root);
        let mb = ball.induce(&order)?.to_multigraph();
        probs.insert(form.clone(), p);
        reps.insert(form, mb);
    }
    Ok(SampleDistribution {
        kind: SampleKind::BallR { r, d },
        probs,
        reps,
        exact: true,
        trials: 0,
    })
}

// ---------------------------------------------------------------------------
// Concentration and parameter testing
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ConcentrationReport {
    pub mean: f64,
    pub std: f64,
    pub median: f64,
    /// Azuma-style bound `sqrt(2 t k)` for node-Lipschitz parameters.
    pub lipschitz_bound: f64,
    pub lipschitz_violation_rate: f64,
    /// Stated allowance `e^{-t}` for the Lipschitz bound.
    pub lipschitz_allowance: f64,
    /// Distance-smoothness bound `20/sqrt(k)`.
    pub smooth_bound: f64,
    pub smooth_violation_rate: f64,
    /// Stated allowance `2^{-k}`.
    pub smooth_allowance: f64,
    pub values: Vec<f64>,
}

/// Sample `trials` induced k-subgraphs, evaluate `f` on each, and report how
/// often the deviation from the empirical median exceeds each concentration
/// bound. The reference point is the median because the bounds only assert
/// that *some* center works.
pub fn concentration_harness(
    f: &dyn Fn(&SimpleGraph) -> f64,
    g: &SimpleGraph,
    k: usize,
    trials: usize,
    seed: u64,
    t: f64,
) -> Result<ConcentrationReport> {
    if k == 0 || k > g.n() || trials == 0 {
        return Err(Error::InvalidParam(
            "need 1 <= k <= n and at least one trial".into(),
        ));
    }
    if t <= 0.0 {
        return Err(Error::InvalidParam("tail parameter t must be > 0".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    for _ in 0..trials {
        let subset: Vec<usize> = index_sample(&mut rng, g.n(), k).into_vec();
        values.push(f(&g.induce(&subset)?));
    }
    let mean = values.iter().sum::<f64>() / trials as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / trials as f64;
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let median = if trials % 2 == 1 {
        sorted[trials / 2]
    } else {
        0.5 * (sorted[trials / 2 - 1] + sorted[trials / 2])
    };
    let lipschitz_bound = (2.0 * t * k as f64).sqrt();
    let smooth_bound = 20.0 / (k as f64).sqrt();
    let count_over = |bound: f64| {
        values.iter().filter(|&&v| (v - median).abs() >= bound).count() as f64 / trials as f64
    };
    Ok(ConcentrationReport {
        mean,
        std: var.sqrt(),
        median,
        lipschitz_bound,
        lipschitz_violation_rate: count_over(lipschitz_bound),
        lipschitz_allowance: (-t).exp(),
        smooth_bound,
        smooth_violation_rate: count_over(smooth_bound),
        smooth_allowance: 0.5f64.powi(k.min(1023) as i32),
        values,
    })
}

/// Where parameter-test samples come from: a concrete graph (uniform
/// k-subsets) or a graphon (W-random k-node graphs).
pub enum SampleSource<'a> {
    Concrete(&'a SimpleGraph),
    Limit(&'a dyn Graphon),
}

impl SampleSource<'_> {
    fn draw(&self, k: usize, rng: &mut ChaCha12Rng) -> Result<SimpleGraph> {
        match self {
            SampleSource::Concrete(g) => {
                if k > g.n() {
                    return Err(Error::InvalidParam(format!(
                        "k={k} exceeds population size {}",
                        g.n()
                    )));
                }
                let subset: Vec<usize> = index_sample(&mut *rng, g.n(), k).into_vec();
                g.induce(&subset)
            }
            SampleSource::Limit(w) => {
                Ok(graphon::w_random(k, *w, rng.gen::<u64>())?.graph)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParameterEstimate {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub values: Vec<f64>,
}

/// Estimate a parameter of the backing population as the median of `f` over
/// sampled induced k-node graphs, with interquartile spread.
pub fn parameter_test(
    f: &dyn Fn(&SimpleGraph) -> f64,
    source: &SampleSource,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<ParameterEstimate> {
    if trials == 0 || k == 0 {
        return Err(Error::InvalidParam("need k >= 1 and trials >= 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    for _ in 0..trials {
        values.push(f(&source.draw(k, &mut rng)?));
    }
    let mut sorted = values.clone();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let quantile = |p: f64| -> f64 {
        let idx = (p * (trials - 1) as f64).round() as usize;
        sorted[idx]
    };
    Ok(ParameterEstimate {
        median: quantile(0.5),
        q1: quantile(0.25),
        q3: quantile(0.75),
        values,
    })
}

// ---------------------------------------------------------------------------
// Sampling-lemma harnesses
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PairSamplingReport {
    /// Exact cut distance of the full aligned pair.
    pub full_distance: f64,
    /// Per-trial |d(G[S],H[S]) - d(G,H)| deviations.
    pub deviations: Vec<f64>,
    /// Stated deviation bound `10 / k^{1/4}`.
    pub bound: f64,
    pub violation_rate: f64,
    /// Stated allowance `2 e^{-sqrt(k)/8}`.
    pub allowance: f64,
}

/// Sample common k-subsets of two aligned graphs and compare the induced cut
/// distance to the full one (both computed exactly).
pub fn pair_sampling_harness(
    g: &SimpleGraph,
    h: &SimpleGraph,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<PairSamplingReport> {
    if g.n() != h.n() {
        return Err(Error::InvalidParam("graphs must share a node set".into()));
    }
    if k == 0 || k > g.n() || trials == 0 {
        return Err(Error::InvalidParam("need 1 <= k <= n and trials".into()));
    }
    let full = crate::cutdist::d_cut_aligned(g, h)?;
    if !full.exact {
        return Err(Error::SizeBound {
            what: "node count for exact pair-sampling distances",
            limit: crate::cutdist::MAX_EXACT_CUT_BLOCKS,
            got: g.n(),
        });
    }
    let kf = k as f64;
    let bound = 10.0 / kf.powf(0.25);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut deviations = Vec::with_capacity(trials);
    for _ in 0..trials {
        let subset: Vec<usize> = index_sample(&mut rng, g.n(), k).into_vec();
        let gs = g.induce(&subset)?;
        let hs = h.induce(&subset)?;
        let ds = crate::cutdist::d_cut_aligned(&gs, &hs)?;
        deviations.push((ds.value - full.value).abs());
    }
    let violation_rate =
        deviations.iter().filter(|&&d| d > bound).count() as f64 / trials as f64;
    Ok(PairSamplingReport {
        full_distance: full.value,
        deviations,
        bound,
        violation_rate,
        allowance: 2.0 * (-kf.sqrt() / 8.0).exp(),
    })
}

#[derive(Clone, Debug)]
pub struct SelfSamplingReport {
    /// Per-trial upper estimates of the unlabeled cut distance between the
    /// graph and its sampled induced subgraph.
    pub estimates: Vec<f64>,
    /// Stated bound `10 / sqrt(log2 k)`.
    pub bound: f64,
    pub violation_rate: f64,
    /// Stated allowance `2^{-k}`.
    pub allowance: f64,
}

/// Estimate how far a k-node sample drifts from its parent graph in the
/// unlabeled cut distance, using the bracket's upper estimate.
pub fn self_sampling_harness(
    g: &SimpleGraph,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<SelfSamplingReport> {
    if k < 2 || k > g.n() || trials == 0 {
        return Err(Error::InvalidParam("need 2 <= k <= n and trials".into()));
    }
    let kf = k as f64;
    let bound = 10.0 / kf.log2().sqrt();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut estimates = Vec::with_capacity(trials);
    for trial in 0..trials {
        let subset: Vec<usize> = index_sample(&mut rng, g.n(), k).into_vec();
        let gs = g.induce(&subset)?;
        let bracket = crate::cutdist::delta_cut_bracket(g, &gs, seed ^ trial as u64)?;
        estimates.push(bracket.upper);
    }
    let violation_rate =
        estimates.iter().filter(|&&d| d > bound).count() as f64 / trials as f64;
    Ok(SelfSamplingReport {
        estimates,
        bound,
        violation_rate,
        allowance: 0.5f64.powi(k.min(1023) as i32),
    })
}

// ---------------------------------------------------------------------------
// Quasirandomness battery
// ---------------------------------------------------------------------------

/// Fast exact homomorphism counts for the quasirandomness catalog, via
/// degree/codegree formulas (no backtracking), so they scale to n ≈ 3000.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum CatalogPattern {
    K2,
    P3,
    K3,
    P4,
    C4,
    Star3,
}

impl CatalogPattern {
    pub const ALL: [CatalogPattern; 6] = [
        CatalogPattern::K2,
        CatalogPattern::P3,
        CatalogPattern::K3,
        CatalogPattern::P4,
        CatalogPattern::C4,
        CatalogPattern::Star3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CatalogPattern::K2 => "K2",
            CatalogPattern::P3 => "P3",
            CatalogPattern::K3 => "K3",
            CatalogPattern::P4 => "P4",
            CatalogPattern::C4 => "C4",
            CatalogPattern::Star3 => "K13",
        }
    }

    pub fn nodes(&self) -> usize {
        match self {
            CatalogPattern::K2 => 2,
            CatalogPattern::P3 | CatalogPattern::K3 => 3,
            _ => 4,
        }
    }

    pub fn edges(&self) -> usize {
        match self {
            CatalogPattern::K2 => 1,
            CatalogPattern::P3 => 2,
            CatalogPattern::K3 => 3,
            CatalogPattern::P4 => 3,
            CatalogPattern::C4 => 4,
            CatalogPattern::Star3 => 3,
        }
    }

    pub fn graph(&self) -> SimpleGraph {
        let mk = |n, e: &[(usize, usize)]| SimpleGraph::from_edges(n, e).unwrap();
        match self {
            CatalogPattern::K2 => mk(2, &[(0, 1)]),
            CatalogPattern::P3 => mk(3, &[(0, 1), (1, 2)]),
            CatalogPattern::K3 => mk(3, &[(0, 1), (1, 2), (0, 2)]),
            CatalogPattern::P4 => mk(4, &[(0, 1), (1, 2), (2, 3)]),
            CatalogPattern::C4 => mk(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]),
            CatalogPattern::Star3 => mk(4, &[(0, 1), (0, 2), (0, 3)]),
        }
    }

    /// Exact hom count via closed-form degree/codegree identities.
    pub fn hom(&self, g: &SimpleGraph) -> u128 {
        let n = g.n();
        let deg: Vec<u128> = (0..n).map(|v| g.degree(v) as u128).collect();
        match self {
            CatalogPattern::K2 => deg.iter().sum(),
            CatalogPattern::P3 => deg.iter().map(|&d| d * d).sum(),
            CatalogPattern::Star3 => deg.iter().map(|&d| d * d * d).sum(),
            CatalogPattern::K3 => {
                // ordered adjacent pairs weighted by codegree = tr A^3
                let mut total: u128 = 0;
                for (u, v) in g.edge_iter() {
                    total += 2 * g.codegree(u, v) as u128;
                }
                total
            }
            CatalogPattern::P4 => {
                // walks a-b-c-d: sum over ordered edges (b,c) of deg_b deg_c
                let mut total: u128 = 0;
                for (u, v) in g.edge_iter() {
                    total += 2 * deg[u] * deg[v];
                }
                total
            }
            CatalogPattern::C4 => {
                // tr A^4 = sum over ordered pairs (incl. equal) codeg^2
                let mut total: u128 = 0;
                for u in 0..n {
                    total += deg[u] * deg[u]; // codeg(u,u) = deg(u)
                    for v in (u + 1)..n {
                        let c = g.codegree(u, v) as u128;
                        total += 2 * c * c;
                    }
                }
                total
            }
        }
    }
}

/// Exact number of 4-cycles: `(tr A^4 - 2 Σ deg² + 2m) / 8`.
pub fn c4_count(g: &SimpleGraph) -> u128 {
    let tr4 = CatalogPattern::C4.hom(g);
    let degsq: u128 = (0..g.n()).map(|v| (g.degree(v) as u128).pow(2)).sum();
    let m2 = CatalogPattern::K2.hom(g);
    (tr4 + m2 - 2 * degsq) / 8
}

#[derive(Clone, Debug)]
pub struct QuasirandomReport {
    pub p: f64,
    /// max_v |deg(v) - pn| / (pn)
    pub degree_deviation: f64,
    /// max_{u<v} |codeg(u,v) - p²n| / (p²n)
    pub codegree_deviation: f64,
    /// max over the catalog of |hom(F,G)/(p^e n^v) - 1|
    pub hom_deviation: f64,
    pub hom_ratios: Vec<(&'static str, f64)>,
    /// #C4 / (p⁴ n⁴ / 8)
    pub c4_ratio: f64,
    /// max over sampled half-size subsets of |e(S)/(p|S|²/2) - 1|
    pub subset_deviation: f64,
}

impl QuasirandomReport {
    /// Largest normalized deviation across all four properties.
    pub fn max_deviation(&self) -> f64 {
        self.degree_deviation
            .max(self.codegree_deviation)
            .max(self.hom_deviation)
            .max((self.c4_ratio - 1.0).abs())
            .max(self.subset_deviation)
    }
}

/// Check the equivalent quasirandomness properties at density `p`: degrees
/// and codegrees, catalog homomorphism ratios, the 4-cycle count, and edge
/// counts inside random half-size subsets.
pub fn quasirandom_battery(g: &SimpleGraph, p: f64, seed: u64) -> Result<QuasirandomReport> {
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidParam("graph too small".into()));
    }
    if !(0.0..=1.0).contains(&p) || p <= 0.0 {
        return Err(Error::InvalidParam("density p must be in (0,1]".into()));
    }
    let nf = n as f64;
    let mut degree_deviation = 0.0f64;
    for v in 0..n {
        degree_deviation = degree_deviation.max((g.degree(v) as f64 - p * nf).abs() / (p * nf));
    }
    let p2n = p * p * nf;
    let mut codegree_deviation = 0.0f64;
    for u in 0..n {
        for v in (u + 1)..n {
            codegree_deviation =
                codegree_deviation.max((g.codegree(u, v) as f64 - p2n).abs() / p2n);
        }
    }
    let mut hom_ratios = vec![];
    let mut hom_deviation = 0.0f64;
    for pat in CatalogPattern::ALL {
        let expect = p.powi(pat.edges() as i32) * nf.powi(pat.nodes() as i32);
        let ratio = pat.hom(g) as f64 / expect;
        hom_deviation = hom_deviation.max((ratio - 1.0).abs());
        hom_ratios.push((pat.name(), ratio));
    }
    let c4_expect = p.powi(4) * nf.powi(4) / 8.0;
    let c4_ratio = c4_count(g) as f64 / c4_expect;

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let half = n / 2;
    let mut subset_deviation = 0.0f64;
    for _ in 0..50 {
        let subset: Vec<usize> = index_sample(&mut rng, n, half).into_vec();
        let mut in_set = vec![false; n];
        for &v in &subset {
            in_set[v] = true;
        }
        let edges = g
            .edge_iter()
            .filter(|&(u, v)| in_set[u] && in_set[v])
            .count() as f64;
        let expect = p * (half * half) as f64 / 2.0;
        subset_deviation = subset_deviation.max((edges - expect).abs() / expect);
    }
    Ok(QuasirandomReport {
        p,
        degree_deviation,
        codegree_deviation,
        hom_deviation,
        hom_ratios,
        c4_ratio,
        subset_deviation,
    })
}

// ---------------------------------------------------------------------------
// Convergence diagnostics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub n: usize,
    pub pattern: &'static str,
    pub mean: f64,
    pub stderr: f64,
    pub seeds: usize,
}

/// Densities `t(F, G_n)` for a generated family across sizes, averaged over
/// seeds, for comparison against limit-graphon targets. Counting is exact
/// per graph (catalog formulas); the error bars reflect generation noise.
pub fn convergence_diagnostic(
    family: &dyn Fn(usize, u64) -> Result<SimpleGraph>,
    sizes: &[usize],
    patterns: &[CatalogPattern],
    seeds: usize,
    seed0: u64,
) -> Result<Vec<ConvergenceRow>> {
    if seeds == 0 {
        return Err(Error::InvalidParam("need at least one seed".into()));
    }
    let mut rows = vec![];
    for &n in sizes {
        let graphs: Vec<SimpleGraph> = (0..seeds)
            .map(|s| family(n, seed0 + s as u64))
            .collect::<Result<_>>()?;
        for &pat in patterns {
            let vals: Vec<f64> = graphs
                .iter()
                .map(|g| {
                    pat.hom(g) as f64 / (n as f64).powi(pat.nodes() as i32)
                })
                .collect();
            let mean = vals.iter().sum::<f64>() / seeds as f64;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / (seeds as f64 - 1.0).max(1.0);
            rows.push(ConvergenceRow {
                n,
                pattern: pat.name(),
                mean,
                stderr: (var / seeds as f64).sqrt(),
                seeds,
            });
        }
    }
    Ok(rows)
}

/// Draw a uniform random k-subset as indices (exposed for harness reuse).
pub fn random_subset(n: usize, k: usize, rng: &mut dyn RngCore) -> Vec<usize> {
    index_sample(rng, n, k).into_vec()
}
