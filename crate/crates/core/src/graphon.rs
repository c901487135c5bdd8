//! Graphons: symmetric measurable functions `W : [0,1]^2 -> [0,1]` as limit
//! objects for dense graph sequences. Provides exact density evaluation on
//! step functions, Monte Carlo density estimation for general graphons,
//! W-random graph sampling with retrievable latent points, and a small
//! catalog of analytically interesting limit graphons.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Multigraph, SimpleGraph, WeightedGraph};
use crate::homcount;

/// A latent point of a graphon's underlying probability space. Step and
/// interval-based graphons use `Interval`; the prefix-attachment limit lives
/// on the unit square; the parity graphon on infinite bit strings
/// (truncated to 64 sampled bits).
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Interval(f64),
    Square(f64, f64),
    Bits(u64),
}

impl Point {
    pub fn as_interval(&self) -> Result<f64> {
        match self {
            Point::Interval(x) => Ok(*x),
            _ => Err(Error::InvalidParam(
                "expected a point of the unit interval".into(),
            )),
        }
    }
}

/// A graphon presented by its point space: sampling a latent point and
/// evaluating the symmetric kernel at a pair of points.
pub trait Graphon {
    fn describe(&self) -> String;
    fn sample_point(&self, rng: &mut dyn RngCore) -> Point;
    /// Symmetric, with values in [0,1].
    fn eval(&self, x: &Point, y: &Point) -> f64;
}

// ---------------------------------------------------------------------------
// Step graphons
// ---------------------------------------------------------------------------

/// A step function graphon: `m` blocks with masses `p` (positive, summing to
/// one) and a symmetric value matrix `B` with entries in [0,1].
///
/// JSON format: `{"p": [masses...], "B": [[row...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "StepGraphonRepr", into = "StepGraphonRepr")]
pub struct StepGraphon {
    p: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct StepGraphonRepr {
    p: Vec<f64>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
}

impl TryFrom<StepGraphonRepr> for StepGraphon {
    type Error = Error;
    fn try_from(r: StepGraphonRepr) -> Result<Self> {
        let m = r.p.len();
        if r.b.len() != m || r.b.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidParam(format!(
                "value matrix must be {m}x{m} to match {m} block masses"
            )));
        }
        let flat: Vec<f64> = r.b.into_iter().flatten().collect();
        StepGraphon::new(r.p, flat)
    }
}

impl From<StepGraphon> for StepGraphonRepr {
    fn from(w: StepGraphon) -> Self {
        let m = w.blocks();
        StepGraphonRepr {
            p: w.p.clone(),
            b: (0..m)
                .map(|i| w.b[i * m..(i + 1) * m].to_vec())
                .collect(),
        }
    }
}

impl StepGraphon {
    /// Build from block masses and a row-major symmetric value matrix.
    pub fn new(p: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let m = p.len();
        if m == 0 {
            return Err(Error::InvalidParam("a step graphon needs blocks".into()));
        }
        if p.iter().any(|&x| !x.is_finite() || x <= 0.0) {
            return Err(Error::InvalidParam(
                "block masses must be positive and finite".into(),
            ));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam(format!(
                "block masses must sum to 1, got {total}"
            )));
        }
        if b.len() != m * m {
            return Err(Error::InvalidParam(format!(
                "value matrix must have {} entries, got {}",
                m * m,
                b.len()
            )));
        }
        for i in 0..m {
            for j in 0..m {
                let v = b[i * m + j];
                if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidParam(format!(
                        "graphon values must lie in [0,1], got {v} at ({i},{j})"
                    )));
                }
                if (v - b[j * m + i]).abs() > 1e-12 {
                    return Err(Error::InvalidParam(
                        "graphon value matrix must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(StepGraphon { p, b })
    }

    pub fn blocks(&self) -> usize {
        self.p.len()
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.p[i]
    }

    pub fn masses(&self) -> &[f64] {
        &self.p
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.b[i * self.blocks() + j]
    }

    /// The constant-`p` graphon (one block).
    pub fn constant(p: f64) -> Result<Self> {
        StepGraphon::new(vec![1.0], vec![p])
    }

    /// The step graphon of a weighted graph: block masses proportional to
    /// node weights, values the edge weights (which must lie in [0,1]).
    pub fn from_weighted(h: &WeightedGraph) -> Result<Self> {
        let total = h.alpha_total();
        let p: Vec<f64> = (0..h.n()).map(|i| h.alpha(i) / total).collect();
        let m = h.n();
        let mut b = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                b[i * m + j] = h.beta(i, j);
            }
        }
        StepGraphon::new(p, b)
    }

    /// The step graphon `W_G` of a simple graph: `n` equal blocks, 0/1 values
    /// from the adjacency matrix.
    pub fn from_simple(g: &SimpleGraph) -> Result<Self> {
        if g.n() == 0 {
            return Err(Error::InvalidParam(
                "cannot form the graphon of an empty-node graph".into(),
            ));
        }
        StepGraphon::from_weighted(&WeightedGraph::from_simple(g))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("step graphon serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Exact homomorphism density `t(F, W) = sum over block maps of
    /// prod p prod B^multiplicity`. Multi-edges raise the kernel value to the
    /// corresponding power.
    pub fn t(&self, f: &Multigraph) -> Result<f64> {
        let h = WeightedGraph::new(
            self.blocks(),
            self.p.clone(),
            self.b.clone(),
        )?;
        homcount::hom_weighted(f, &h)
    }

    /// Exact induced density `t_ind(F, W) = sum over block maps of
    /// prod p prod_{edges} B prod_{non-edges} (1 - B)` for simple patterns.
    pub fn t_ind(&self, f: &SimpleGraph) -> Result<f64> {
        let k = f.n();
        let m = self.blocks();
        if k > homcount::MAX_PATTERN_NODES {
            return Err(Error::SizeBound {
                what: "pattern node count",
                limit: homcount::MAX_PATTERN_NODES,
                got: k,
            });
        }
        if k == 0 {
            return Ok(1.0);
        }
        let est = (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if est > homcount::DEFAULT_WORK_BUDGET {
            return Err(Error::WorkBound {
                estimate: est,
                limit: homcount::DEFAULT_WORK_BUDGET,
            });
        }
        let mut phi = vec![0usize; k];
        let mut total = 0.0f64;
        loop {
            let mut w = 1.0f64;
            for u in 0..k {
                w *= self.p[phi[u]];
            }
            for u in 0..k {
                for v in (u + 1)..k {
                    let val = self.value(phi[u], phi[v]);
                    w *= if f.adjacent(u, v) { val } else { 1.0 - val };
                }
            }
            total += w;
            let mut d = 0;
            loop {
                if d == k {
                    return Ok(total);
                }
                phi[d] += 1;
                if phi[d] < m {
                    break;
                }
                phi[d] = 0;
                d += 1;
            }
        }
    }

    fn block_of(&self, x: f64) -> usize {
        let mut acc = 0.0;
        for (i, &mass) in self.p.iter().enumerate() {
            acc += mass;
            if x < acc {
                return i;
            }
        }
        self.blocks() - 1
    }
}

impl Graphon for StepGraphon {
    fn describe(&self) -> String {
        format!("step graphon with {} blocks", self.blocks())
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Point {
        Point::Interval(rng.gen::<f64>())
    }

    fn eval(&self, x: &Point, y: &Point) -> f64 {
        let (x, y) = match (x, y) {
            (Point::Interval(a), Point::Interval(b)) => (*a, *b),
            _ => panic!("step graphons are evaluated at interval points"),
        };
        self.value(self.block_of(x), self.block_of(y))
    }
}

// ---------------------------------------------------------------------------
// Built-in limit graphons
// ---------------------------------------------------------------------------

/// Limit graphons arising from growth models and algebraic constructions.
#[derive(Clone, Debug)]
pub enum Builtin {
    /// Constant graphon `W = p` (Erdos–Renyi limit).
    Constant(f64),
    /// `W(x,y) = 1 - max(x,y)`: limit of the uniform-attachment growth model.
    UniformAttachmentLimit,
    /// `W(x,y) = 1 if x + y <= 1`: limit of threshold/half graphs.
    ThresholdLimit,
    /// Limit of the prefix-attachment model on the unit square with
    /// coordinates (position, fraction kept): `W((x1,y1),(x2,y2)) = 1` iff
    /// `x1 < x2 y2` or `x2 < x1 y1`.
    PrefixAttachmentLimit,
    /// The "forgetful" interval kernel `W(x,y) = |x-y| / max(x,y)` that has
    /// the same pair marginals as the prefix-attachment limit but loses the
    /// dependence structure, so higher densities differ.
    PrefixAttachmentNaive,
    /// `W(x,y) = 1 if q(x,y) > 0` for a symmetric real polynomial `q` with
    /// coefficient matrix `coeffs[i][j]` on `x^i y^j`.
    PolySign(Vec<Vec<f64>>),
    /// On infinite bit strings: look at the first bit position where the two
    /// points differ; connect iff that position is odd (positions start
    /// at 1). A random-free graphon that is not a step function.
    BitParity,
}

impl Builtin {
    pub fn poly_sign(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        let d = coeffs.len();
        if coeffs.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidParam(
                "polynomial coefficient matrix must be square".into(),
            ));
        }
        for i in 0..d {
            for j in 0..d {
                if (coeffs[i][j] - coeffs[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidParam(
                        "polynomial coefficient matrix must be symmetric".into(),
                    ));
                }
            }
        }
        Ok(Builtin::PolySign(coeffs))
    }
}

fn bit(bits: u64, pos_from_1: u32) -> u64 {
    // position 1 = most significant sampled bit
    bits >> (64 - pos_from_1) & 1
}

impl Graphon for Builtin {
    fn describe(&self) -> String {
        match self {
            Builtin::Constant(p) => format!("constant graphon p={p}"),
            Builtin::UniformAttachmentLimit => "uniform-attachment limit 1-max(x,y)".into(),
            Builtin::ThresholdLimit => "threshold limit 1{x+y<=1}".into(),
            Builtin::PrefixAttachmentLimit => "prefix-attachment limit (unit square)".into(),
            Builtin::PrefixAttachmentNaive => "|x-y|/max(x,y) interval kernel".into(),
            Builtin::PolySign(_) => "sign-of-polynomial graphon".into(),
            Builtin::BitParity => "first-differing-bit parity graphon".into(),
        }
    }

    fn sample_point(&self, rng: &mut dyn RngCore) -> Point {
        match self {
            Builtin::PrefixAttachmentLimit => Point::Square(rng.gen::<f64>(), rng.gen::<f64>()),
            Builtin::BitParity => Point::Bits(rng.gen::<u64>()),
            _ => Point::Interval(rng.gen::<f64>()),
        }
    }

    fn eval(&self, x: &Point, y: &Point) -> f64 {
        match self {
            Builtin::Constant(p) => *p,
            Builtin::UniformAttachmentLimit => {
                let (a, b) = (x.as_interval().unwrap(), y.as_interval().unwrap());
                1.0 - a.max(b)
            }
            Builtin::ThresholdLimit => {
                let (a, b) = (x.as_interval().unwrap(), y.as_interval().unwrap());
                if a + b <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Builtin::PrefixAttachmentLimit => {
                let ((x1, y1), (x2, y2)) = match (x, y) {
                    (Point::Square(a, b), Point::Square(c, d)) => ((*a, *b), (*c, *d)),
                    _ => panic!("prefix-attachment limit lives on the unit square"),
                };
                if x1 < x2 * y2 || x2 < x1 * y1 {
                    1.0
                } else {
                    0.0
                }
            }
            Builtin::PrefixAttachmentNaive => {
                let (a, b) = (x.as_interval().unwrap(), y.as_interval().unwrap());
                let hi = a.max(b);
                if hi <= 0.0 {
                    0.0
                } else {
                    (a - b).abs() / hi
                }
            }
            Builtin::PolySign(coeffs) => {
                let (a, b) = (x.as_interval().unwrap(), y.as_interval().unwrap());
                let mut q = 0.0;
                let mut xp = 1.0;
                for row in coeffs {
                    let mut yp = 1.0;
                    for &c in row {
                        q += c * xp * yp;
                        yp *= b;
                    }
                    xp *= a;
                }
                if q > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Builtin::BitParity => {
                let (ax, by) = match (x, y) {
                    (Point::Bits(a), Point::Bits(b)) => (*a, *b),
                    _ => panic!("parity graphon lives on bit strings"),
                };
                if ax == by {
                    return 0.0;
                }
                let mut pos = 1u32;
                while bit(ax, pos) == bit(by, pos) {
                    pos += 1;
                }
                if pos % 2 == 1 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo densities and W-random graphs
// ---------------------------------------------------------------------------

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

fn mc_density(
    f: &SimpleGraph,
    w: &dyn Graphon,
    samples: usize,
    seed: u64,
    induced: bool,
) -> Result<McEstimate> {
    let k = f.n();
    if k == 0 || samples == 0 {
        return Err(Error::InvalidParam(
            "Monte Carlo density needs a nonempty pattern and at least one sample".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..samples {
        let pts: Vec<Point> = (0..k).map(|_| w.sample_point(&mut rng)).collect();
        let mut prod = 1.0f64;
        'outer: for u in 0..k {
            for v in (u + 1)..k {
                let val = w.eval(&pts[u], &pts[v]);
                prod *= if f.adjacent(u, v) {
                    val
                } else if induced {
                    1.0 - val
                } else {
                    1.0
                };
                if prod == 0.0 {
                    break 'outer;
                }
            }
        }
        sum += prod;
        sum_sq += prod * prod;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    Ok(McEstimate {
        value: mean,
        stderr: (var / n).sqrt(),
        samples,
    })
}

/// Monte Carlo estimate of `t(F, W)` from i.i.d. latent points: each sample
/// is the product of kernel values over the edges of `F`.
pub fn t_mc(f: &SimpleGraph, w: &dyn Graphon, samples: usize, seed: u64) -> Result<McEstimate> {
    mc_density(f, w, samples, seed, false)
}

/// Monte Carlo estimate of the induced density `t_ind(F, W)`.
pub fn t_ind_mc(
    f: &SimpleGraph,
    w: &dyn Graphon,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    mc_density(f, w, samples, seed, true)
}

/// Deterministic per-pair coin: mixes the seed with the (unordered) pair so
/// edge indicators depend only on the two latent points and the seed.
pub(crate) fn pair_coin(seed: u64, i: usize, j: usize) -> f64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let mut z = seed
        ^ (lo as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (hi as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    // splitmix64 finalizer
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// A W-random graph together with the latent points that generated it.
#[derive(Clone, Debug)]
pub struct WRandom {
    pub graph: SimpleGraph,
    pub points: Vec<Point>,
}

/// Sample `G(n, W)`: draw `n` i.i.d. latent points, then connect each pair
/// independently with probability `W(X_i, X_j)`. The latent points are
/// returned so downstream consumers can audit or reuse them.
pub fn w_random(n: usize, w: &dyn Graphon, seed: u64) -> Result<WRandom> {
    if n == 0 {
        return Err(Error::InvalidParam("need at least one node".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let points: Vec<Point> = (0..n).map(|_| w.sample_point(&mut rng)).collect();
    let coin_seed = rng.gen::<u64>();
    let mut g = SimpleGraph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let p = w.eval(&points[i], &points[j]);
            if pair_coin(coin_seed, i, j) < p {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(WRandom { graph: g, points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::homcount::{count, CountKind};

    #[test]
    fn step_graphon_json_round_trip() {
        let w = StepGraphon::new(
            vec![0.25, 0.75],
            vec![0.1, 0.6, 0.6, 0.9],
        )
        .unwrap();
        let s = w.to_json();
        let back = StepGraphon::from_json(&s).unwrap();
        assert_eq!(back.blocks(), 2);
        assert!((back.mass(0) - 0.25).abs() < 1e-15);
        assert!((back.value(0, 1) - 0.6).abs() < 1e-15);
        // canonical JSON shape
        assert!(s.contains("\"p\""));
        assert!(s.contains("\"B\""));
    }

    #[test]
    fn step_graphon_validation() {
        assert!(StepGraphon::new(vec![0.5, 0.6], vec![0.0; 4]).is_err()); // bad mass sum
        assert!(StepGraphon::new(vec![1.0], vec![1.5]).is_err()); // value out of range
        assert!(StepGraphon::new(vec![0.5, 0.5], vec![0.1, 0.2, 0.3, 0.4]).is_err());
        // asymmetric
        assert!(StepGraphon::new(vec![], vec![]).is_err());
    }

    #[test]
    fn density_of_graph_equals_density_of_its_graphon() {
        // t(F, G) = t(F, W_G) exactly (non-injective maps correspond to
        // block tuples with repeats).
        let g = gen::er(6, 0.5, 11).unwrap();
        let w = StepGraphon::from_simple(&g).unwrap();
        for f in [gen::complete(3), gen::path(4), gen::cycle(4)] {
            let exact = count(CountKind::Hom, &f, &g).unwrap() as f64
                / (g.n() as f64).powi(f.n() as i32);
            let via_w = w.t(&f.to_multigraph()).unwrap();
            assert!((exact - via_w).abs() < 1e-12, "{exact} vs {via_w}");
        }
    }

    #[test]
    fn constant_graphon_densities_are_powers_of_p() {
        let w = StepGraphon::constant(0.3).unwrap();
        let k3 = gen::complete(3).to_multigraph();
        assert!((w.t(&k3).unwrap() - 0.3f64.powi(3)).abs() < 1e-12);
        let p4 = gen::path(4).to_multigraph();
        assert!((w.t(&p4).unwrap() - 0.3f64.powi(3)).abs() < 1e-12);
        // induced density of an edge in constant p: p
        let k2 = gen::complete(2);
        assert!((w.t_ind(&k2).unwrap() - 0.3).abs() < 1e-12);
        // induced non-edge: 1 - p
        let e2 = gen::empty(2);
        assert!((w.t_ind(&e2).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn induced_density_sums_to_one_over_patterns() {
        // over all graphs on 3 labeled nodes (8 of them as edge subsets)
        let w = StepGraphon::new(
            vec![0.5, 0.5],
            vec![0.2, 0.7, 0.7, 0.4],
        )
        .unwrap();
        let mut total = 0.0;
        for mask in 0..8u32 {
            let mut edges = vec![];
            let pairs = [(0, 1), (0, 2), (1, 2)];
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    edges.push((u, v));
                }
            }
            let f = SimpleGraph::from_edges(3, &edges).unwrap();
            total += w.t_ind(&f).unwrap();
        }
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multiplicities_raise_kernel_powers() {
        // t of a double edge on constant p is p^2, not p
        let w = StepGraphon::constant(0.5).unwrap();
        let mut f = Multigraph::new(2);
        f.add_edge(0, 1).unwrap();
        f.add_edge(0, 1).unwrap();
        assert!((w.t(&f).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mc_density_agrees_with_exact_on_step_graphon() {
        let w = StepGraphon::new(
            vec![0.3, 0.7],
            vec![0.8, 0.2, 0.2, 0.6],
        )
        .unwrap();
        let f = gen::complete(3);
        let exact = w.t(&f.to_multigraph()).unwrap();
        let est = t_mc(&f, &w, 40_000, 7).unwrap();
        assert!(
            (est.value - exact).abs() < 4.5 * est.stderr + 1e-9,
            "exact {exact}, est {} +- {}",
            est.value,
            est.stderr
        );
        let exact_ind = w.t_ind(&f).unwrap();
        let est_ind = t_ind_mc(&f, &w, 40_000, 8).unwrap();
        assert!((est_ind.value - exact_ind).abs() < 4.5 * est_ind.stderr + 1e-9);
    }

    #[test]
    fn uniform_attachment_limit_triangle_density() {
        // t(K3, 1 - max(x,y)) = 1/15 by direct integration.
        let f = gen::complete(3);
        let est = t_mc(&f, &Builtin::UniformAttachmentLimit, 200_000, 3).unwrap();
        assert!(
            (est.value - 1.0 / 15.0).abs() < 4.5 * est.stderr,
            "est {} +- {}",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn threshold_limit_edge_density_is_half() {
        let k2 = gen::complete(2);
        let est = t_mc(&k2, &Builtin::ThresholdLimit, 100_000, 4).unwrap();
        assert!((est.value - 0.5).abs() < 4.5 * est.stderr);
    }

    #[test]
    fn prefix_limit_and_naive_kernel_share_edge_density() {
        // Both have edge density 1/2 ... the naive kernel integrates
        // |x-y|/max to 1/2 as well, but triangle densities differ.
        let k2 = gen::complete(2);
        let lim = t_mc(&k2, &Builtin::PrefixAttachmentLimit, 150_000, 5).unwrap();
        let nai = t_mc(&k2, &Builtin::PrefixAttachmentNaive, 150_000, 5).unwrap();
        assert!(
            (lim.value - nai.value).abs() < 4.5 * (lim.stderr + nai.stderr),
            "{} vs {}",
            lim.value,
            nai.value
        );
        let k3 = gen::complete(3);
        let lim3 = t_mc(&k3, &Builtin::PrefixAttachmentLimit, 400_000, 6).unwrap();
        let nai3 = t_mc(&k3, &Builtin::PrefixAttachmentNaive, 400_000, 6).unwrap();
        assert!(
            (lim3.value - nai3.value).abs() > 6.0 * (lim3.stderr + nai3.stderr),
            "triangle densities should split: {} vs {}",
            lim3.value,
            nai3.value
        );
    }

    #[test]
    fn parity_graphon_edge_density() {
        // First differing bit is position k with prob 2^-k; odd positions sum
        // to 1/2 + 1/8 + ... = 2/3.
        let k2 = gen::complete(2);
        let est = t_mc(&k2, &Builtin::BitParity, 150_000, 9).unwrap();
        assert!(
            (est.value - 2.0 / 3.0).abs() < 4.5 * est.stderr,
            "est {} +- {}",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn poly_sign_validation_and_eval() {
        assert!(Builtin::poly_sign(vec![vec![0.0, 1.0], vec![0.5, 0.0]]).is_err());
        // q(x,y) = x + y - 1 > 0 is the complement of the threshold graphon
        let w = Builtin::poly_sign(vec![vec![-1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(
            w.eval(&Point::Interval(0.9), &Point::Interval(0.9)),
            1.0
        );
        assert_eq!(
            w.eval(&Point::Interval(0.1), &Point::Interval(0.2)),
            0.0
        );
    }

    #[test]
    fn w_random_from_graph_step_graphon_statistics() {
        // G(n, W_{K2 step}) with B = [[0,1],[1,0]] and equal masses is a
        // random bipartite-ish graph; check edge density near 1/2 across the
        // blocks by comparing to the exact t(K2, W) = 1/2.
        let w = StepGraphon::new(vec![0.5, 0.5], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let sample = w_random(400, &w, 12).unwrap();
        let d = sample.graph.edge_density();
        assert!((d - 0.5).abs() < 0.05, "density {d}");
        assert_eq!(sample.points.len(), 400);
        // no edges inside a block: check via latent points
        for i in 0..400 {
            for j in (i + 1)..400 {
                if sample.graph.adjacent(i, j) {
                    let bi = sample.points[i].as_interval().unwrap() < 0.5;
                    let bj = sample.points[j].as_interval().unwrap() < 0.5;
                    assert_ne!(bi, bj, "edge inside a block");
                }
            }
        }
    }

    #[test]
    fn w_random_deterministic_in_seed() {
        let w = StepGraphon::constant(0.4).unwrap();
        let a = w_random(50, &w, 77).unwrap();
        let b = w_random(50, &w, 77).unwrap();
        let c = w_random(50, &w, 78).unwrap();
        assert_eq!(a.graph.edge_iter().collect::<Vec<_>>(), b.graph.edge_iter().collect::<Vec<_>>());
        assert_ne!(a.graph.edge_iter().collect::<Vec<_>>(), c.graph.edge_iter().collect::<Vec<_>>());
    }

    #[test]
    fn w_random_triangle_density_tracks_graphon() {
        let w = StepGraphon::constant(0.5).unwrap();
        let sample = w_random(300, &w, 21).unwrap();
        let k3 = gen::complete(3);
        let t_sample = crate::homcount::t(&k3, &sample.graph).unwrap();
        assert!((t_sample - 0.125).abs() < 0.02, "t = {t_sample}");
    }
}
