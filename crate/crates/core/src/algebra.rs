//! Quantum graphs — formal rational combinations of `k`-labeled multigraphs —
//! with two gluing products, connection submatrices with PSD/rank
//! diagnostics, inner-product kernel membership tests, square-sum
//! certificates, and a battery of classical density inequalities.
//!
//! Two products coexist and serve different parameters:
//!
//! * [`QuantumGraph::product`] glues by *adding* edge multiplicities.  This
//!   is the product under which counting parameters such as weighted
//!   homomorphisms and perfect matchings are reflection positive, and it is
//!   the product used by [`connection_submatrix`] and [`kernel_test`].
//! * [`QuantumGraph::product_simple`] glues in the simple-graph algebra: a
//!   pair connected in both factors keeps a single edge.  Under this product
//!   the inclusion–exclusion elements produced by [`hat`] are idempotent,
//!   which is what makes square-sum certificates reduce to coefficient-exact
//!   identities between simple graphs ([`square_sum_unlabel`]).

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::rational::Rational64;
use num::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{self, CanonicalForm};
use crate::error::{Error, Result};
use crate::gen;
use crate::graph::{KLabeledGraph, Multigraph, SimpleGraph};
use crate::graphon::{self, Graphon, StepGraphon};
use crate::homcount;

/// Absolute tolerance below which a parameter value counts as zero in
/// [`kernel_test`].
pub const KERNEL_TOL: f64 = 1e-9;

/// Cap on the number of non-adjacent node pairs [`hat`] will expand over
/// (the expansion has one term per subset of missing pairs).
pub const HAT_MAX_MISSING: usize = 20;

/// Node cap for exact perfect-matching counts.
pub const MAX_PM_NODES: usize = 16;

// ---------------------------------------------------------------------------
// QuantumGraph
// ---------------------------------------------------------------------------

/// Formal finite linear combination of `k`-labeled multigraphs with rational
/// coefficients, reduced so that label-preserving isomorphic terms are
/// merged and zero coefficients dropped.
#[derive(Clone, Debug)]
pub struct QuantumGraph {
    k: usize,
    terms: BTreeMap<CanonicalForm, (KLabeledGraph, Rational64)>,
}

impl PartialEq for QuantumGraph {
    /// Equality of reduced forms: same `k`, same canonical terms with the
    /// same coefficients (representatives may differ by isomorphism).
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((fa, (_, ca)), (fb, (_, cb)))| fa == fb && ca == cb)
    }
}

impl QuantumGraph {
    pub fn zero(k: usize) -> Self {
        QuantumGraph {
            k,
            terms: BTreeMap::new(),
        }
    }

    /// Single-term quantum graph `coeff * g`.
    pub fn from_term(g: KLabeledGraph, coeff: Rational64) -> Result<Self> {
        let mut q = QuantumGraph::zero(g.k());
        q.accumulate(g, coeff)?;
        Ok(q)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate over `(representative, coefficient)` pairs in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&KLabeledGraph, Rational64)> {
        self.terms.values().map(|(g, c)| (g, *c))
    }

    /// Coefficient of the class of `g` (zero when absent).
    pub fn coeff(&self, g: &KLabeledGraph) -> Result<Rational64> {
        if g.k() != self.k {
            return Err(Error::LabelMismatch {
                left: self.k,
                right: g.k(),
            });
        }
        let form = canon::canonical_form_labeled(g)?.form;
        Ok(self
            .terms
            .get(&form)
            .map(|(_, c)| *c)
            .unwrap_or_else(Rational64::zero))
    }

    fn accumulate(&mut self, g: KLabeledGraph, coeff: Rational64) -> Result<()> {
        if g.k() != self.k {
            return Err(Error::LabelMismatch {
                left: self.k,
                right: g.k(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let form = canon::canonical_form_labeled(&g)?.form;
        match self.terms.entry(form) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().1 += coeff;
                if e.get().1.is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert((g, coeff));
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::LabelMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let mut out = self.clone();
        for (g, c) in other.terms.values() {
            out.accumulate(g.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for (_, c) in out.terms.values_mut() {
            *c = -*c;
        }
        out
    }

    pub fn scale(&self, c: Rational64) -> Self {
        if c.is_zero() {
            return QuantumGraph::zero(self.k);
        }
        let mut out = self.clone();
        for (_, coeff) in out.terms.values_mut() {
            *coeff *= c;
        }
        out
    }

    fn product_with<F>(&self, other: &Self, op: F) -> Result<Self>
    where
        F: Fn(&KLabeledGraph, &KLabeledGraph) -> Result<KLabeledGraph>,
    {
        if self.k != other.k {
            return Err(Error::LabelMismatch {
                left: self.k,
                right: other.k,
            });
        }
        let mut out = QuantumGraph::zero(self.k);
        for (ga, ca) in self.terms.values() {
            for (gb, cb) in other.terms.values() {
                out.accumulate(op(ga, gb)?, ca * cb)?;
            }
        }
        Ok(out)
    }

    /// Gluing product: identify equally labeled nodes, multiplicities add.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.product_with(other, |a, b| a.glue(b))
    }

    /// Gluing product in the simple-graph algebra: identify equally labeled
    /// nodes, shared edges collapse to a single edge.
    pub fn product_simple(&self, other: &Self) -> Result<Self> {
        self.product_with(other, |a, b| a.glue_simple(b))
    }

    /// Forget labels term by term, optionally dropping isolated nodes, and
    /// reduce in the unlabeled algebra (`k = 0`).
    pub fn unlabel(&self, drop_isolated: bool) -> Result<QuantumGraph> {
        let mut out = QuantumGraph::zero(0);
        for (g, c) in self.terms.values() {
            let m = g.unlabel(drop_isolated);
            out.accumulate(KLabeledGraph::from_multigraph(m, 0)?, *c)?;
        }
        Ok(out)
    }

    /// Evaluate a graph parameter term by term:
    /// `sum_i coeff_i * f(unlabel(F_i))`.
    pub fn eval<F>(&self, f: F, drop_isolated: bool) -> Result<f64>
    where
        F: Fn(&Multigraph) -> Result<f64>,
    {
        let mut acc = 0.0;
        for (g, c) in self.terms.values() {
            let cf = c.to_f64().ok_or_else(|| {
                Error::Numerical(format!("coefficient {c} does not fit in f64"))
            })?;
            acc += cf * f(&g.unlabel(drop_isolated))?;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// hat: inclusion-exclusion over supergraphs
// ---------------------------------------------------------------------------

/// Inclusion–exclusion element of a fully labeled simple graph `F`:
///
/// `hat(F) = sum over supergraphs F' of F on the same node set of
/// (-1)^{|E(F') \ E(F)|} F'`.
///
/// Homomorphism-style densities of `hat(F)` are induced densities of `F`
/// (the alternating sum cancels every map that merges or connects what `F`
/// keeps apart), and `hat(F)` is idempotent under the simple gluing product.
/// Requires every node labeled and `F` simple.
pub fn hat(f: &KLabeledGraph) -> Result<QuantumGraph> {
    if f.k() != f.n() {
        return Err(Error::BadLabeling(format!(
            "hat needs every node labeled: {} labels on {} nodes",
            f.k(),
            f.n()
        )));
    }
    for ((u, v), m) in f.base().edge_iter() {
        if m > 1 {
            return Err(Error::NotSimple(format!(
                "hat is defined for simple graphs; pair ({u},{v}) has multiplicity {m}"
            )));
        }
    }
    let n = f.n();
    let present: std::collections::BTreeSet<(usize, usize)> =
        f.base().edge_iter().map(|(p, _)| p).collect();
    let missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .filter(|p| !present.contains(p))
        .collect();
    if missing.len() > HAT_MAX_MISSING {
        return Err(Error::SizeBound {
            what: "non-adjacent pairs in hat expansion",
            limit: HAT_MAX_MISSING,
            got: missing.len(),
        });
    }
    let mut out = QuantumGraph::zero(f.k());
    for mask in 0u64..(1u64 << missing.len()) {
        let mut base = f.base().clone();
        for (i, &(u, v)) in missing.iter().enumerate() {
            if mask >> i & 1 == 1 {
                base.add_edge_mult(u, v, 1)?;
            }
        }
        let sign = if mask.count_ones() % 2 == 0 {
            Rational64::one()
        } else {
            -Rational64::one()
        };
        out.accumulate(KLabeledGraph::new(base, f.labels().to_vec())?, sign)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Connection submatrices
// ---------------------------------------------------------------------------

/// Finite principal submatrix of a connection matrix: `M[a][b] =
/// f(unlabel(glue(F_a, F_b)))` over an explicit basis of `k`-labeled graphs
/// (multiplicity gluing; isolated nodes kept when unlabeling).
#[derive(Clone, Debug)]
pub struct ConnectionSubmatrix {
    pub k: usize,
    pub basis: Vec<KLabeledGraph>,
    pub matrix: DMatrix<f64>,
}

impl ConnectionSubmatrix {
    pub fn psd_rank(&self, tol: f64) -> Result<PsdReport> {
        psd_rank_check(&self.matrix, tol)
    }
}

/// Evaluate a graph parameter on all pairwise gluings of a basis.  Entries
/// are computed in parallel over the upper triangle and mirrored.
pub fn connection_submatrix<F>(
    f: F,
    k: usize,
    basis: &[KLabeledGraph],
) -> Result<ConnectionSubmatrix>
where
    F: Fn(&Multigraph) -> Result<f64> + Sync,
{
    for g in basis {
        if g.k() != k {
            return Err(Error::LabelMismatch {
                left: k,
                right: g.k(),
            });
        }
    }
    let n = basis.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .collect();
    let entries: Vec<f64> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let glued = basis[a].glue(&basis[b])?;
            f(&glued.unlabel(false))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut matrix = DMatrix::zeros(n, n);
    for (&(a, b), &val) in pairs.iter().zip(entries.iter()) {
        matrix[(a, b)] = val;
        matrix[(b, a)] = val;
    }
    Ok(ConnectionSubmatrix {
        k,
        basis: basis.to_vec(),
        matrix,
    })
}

/// Outcome of an eigenvalue scan of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct PsdReport {
    /// Minimum eigenvalue is at least `-tol`.
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    /// Count of eigenvalues with `|lambda| > tol * max |lambda|`.
    pub rank: usize,
    /// All eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
}

/// PSD test and numerical rank of a symmetric matrix via its eigenvalues.
pub fn psd_rank_check(m: &DMatrix<f64>, tol: f64) -> Result<PsdReport> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidParam(format!(
            "matrix is {}x{}, not square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(
            "matrix has non-finite entries".to_string(),
        ));
    }
    let scale = m.iter().fold(0.0f64, |s, &x| s.max(x.abs()));
    for a in 0..m.nrows() {
        for b in (a + 1)..m.ncols() {
            if (m[(a, b)] - m[(b, a)]).abs() > 1e-9 * scale.max(1.0) {
                return Err(Error::InvalidParam(format!(
                    "matrix is not symmetric at ({a},{b})"
                )));
            }
        }
    }
    if m.nrows() == 0 {
        return Ok(PsdReport {
            is_psd: true,
            min_eigenvalue: 0.0,
            rank: 0,
            eigenvalues: vec![],
        });
    }
    let mut eigenvalues: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    let min_eigenvalue = eigenvalues[0];
    let eig_scale = eigenvalues.iter().fold(0.0f64, |s, &x| s.max(x.abs()));
    let rank = eigenvalues
        .iter()
        .filter(|&&e| e.abs() > tol * eig_scale)
        .count();
    Ok(PsdReport {
        is_psd: min_eigenvalue >= -tol,
        min_eigenvalue,
        rank,
        eigenvalues,
    })
}

// ---------------------------------------------------------------------------
// Kernel membership
// ---------------------------------------------------------------------------

/// True iff `f(unlabel(glue(x, y)))` vanishes (within [`KERNEL_TOL`]) for
/// every basis element `y` — a finite witness that `x` lies in the kernel of
/// the inner product induced by `f` (multiplicity gluing; isolated nodes
/// kept).
pub fn kernel_test<F>(f: F, x: &QuantumGraph, basis: &[KLabeledGraph]) -> Result<bool>
where
    F: Fn(&Multigraph) -> Result<f64>,
{
    for y in basis {
        let yq = QuantumGraph::from_term(y.clone(), Rational64::one())?;
        let val = x.product(&yq)?.eval(&f, false)?;
        if val.abs() > KERNEL_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of perfect matchings of a multigraph, counting parallel edges as
/// distinct (so a doubled edge on two nodes has two perfect matchings).
/// Loops never participate.  Exact for up to [`MAX_PM_NODES`] nodes.
pub fn perfect_matchings(g: &Multigraph) -> Result<u128> {
    let n = g.n();
    if n > MAX_PM_NODES {
        return Err(Error::SizeBound {
            what: "perfect matching node count",
            limit: MAX_PM_NODES,
            got: n,
        });
    }
    if n % 2 == 1 {
        return Ok(0);
    }
    let mut mult = vec![0u32; n * n];
    for ((u, v), m) in g.edge_iter() {
        if u != v {
            mult[u * n + v] = m;
            mult[v * n + u] = m;
        }
    }
    fn rec(n: usize, mult: &[u32], used: u32) -> u128 {
        let Some(u) = (0..n).find(|&v| used >> v & 1 == 0) else {
            return 1;
        };
        let mut total = 0u128;
        for v in (u + 1)..n {
            if used >> v & 1 == 0 && mult[u * n + v] > 0 {
                total += mult[u * n + v] as u128
                    * rec(n, mult, used | 1 << u | 1 << v);
            }
        }
        total
    }
    Ok(rec(n, &mult, 0))
}

// ---------------------------------------------------------------------------
// Square-sum certificates
// ---------------------------------------------------------------------------

/// Expand a sum of squares `sum_i scale_sq_i * y_i^2` in the simple gluing
/// algebra, forget labels, drop isolated nodes, and reduce.  Each `y_i`
/// carries its own label count; the squared scale keeps irrational scales
/// (such as sqrt 2) exact.  Scales must be nonnegative.
pub fn square_sum_unlabel(terms: &[(QuantumGraph, Rational64)]) -> Result<QuantumGraph> {
    let mut out = QuantumGraph::zero(0);
    for (y, scale_sq) in terms {
        if scale_sq.is_negative() {
            return Err(Error::InvalidParam(format!(
                "squared scale must be nonnegative, got {scale_sq}"
            )));
        }
        let sq = y.product_simple(y)?;
        out = out.add(&sq.unlabel(true)?.scale(*scale_sq))?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Certificates (JSON-serializable)
// ---------------------------------------------------------------------------

/// One graph term in a serialized quantum graph: node count, edges with
/// multiplicity, the nodes carrying labels `1..=k` in order, and a rational
/// coefficient as `(numerator, denominator)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphTermRepr {
    pub nodes: usize,
    pub edges: Vec<(usize, usize, u32)>,
    pub labels: Vec<usize>,
    pub coeff: (i64, i64),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuantumGraphRepr {
    pub k: usize,
    pub terms: Vec<GraphTermRepr>,
}

/// One square `scale_sq * y^2` of a certificate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SquareTermRepr {
    pub scale_sq: (i64, i64),
    pub y: QuantumGraphRepr,
}

/// A square-sum certificate: the claim that `sum_i scale_sq_i * y_i^2`,
/// unlabeled with isolated nodes dropped, equals `target` coefficient by
/// coefficient.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub squares: Vec<SquareTermRepr>,
    pub target: QuantumGraphRepr,
}

fn ratio_from_pair((num, den): (i64, i64)) -> Result<Rational64> {
    if den == 0 {
        return Err(Error::InvalidParam(
            "rational coefficient with zero denominator".to_string(),
        ));
    }
    Ok(Rational64::new(num, den))
}

impl QuantumGraphRepr {
    pub fn to_quantum(&self) -> Result<QuantumGraph> {
        let mut q = QuantumGraph::zero(self.k);
        for t in &self.terms {
            let mut base = Multigraph::new(t.nodes);
            for &(u, v, m) in &t.edges {
                base.add_edge_mult(u, v, m)?;
            }
            if t.labels.len() != self.k {
                return Err(Error::BadLabeling(format!(
                    "term has {} labels but k = {}",
                    t.labels.len(),
                    self.k
                )));
            }
            let g = KLabeledGraph::new(base, t.labels.clone())?;
            q.accumulate(g, ratio_from_pair(t.coeff)?)?;
        }
        Ok(q)
    }

    pub fn from_quantum(q: &QuantumGraph) -> Self {
        let terms = q
            .terms()
            .map(|(g, c)| GraphTermRepr {
                nodes: g.n(),
                edges: g.base().edge_iter().map(|((u, v), m)| (u, v, m)).collect(),
                labels: g.labels().to_vec(),
                coeff: (*c.numer(), *c.denom()),
            })
            .collect();
        QuantumGraphRepr { k: q.k(), terms }
    }
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Result of checking a certificate: the reduced square sum, the reduced
/// target, and whether they agree exactly.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub matches: bool,
    pub computed: QuantumGraph,
    pub target: QuantumGraph,
    /// Number of classes on which computed and target coefficients differ.
    pub difference_terms: usize,
}

/// Check a square-sum certificate by exact rational expansion.
pub fn verify_certificate(cert: &Certificate) -> Result<CertificateReport> {
    let mut squares = Vec::with_capacity(cert.squares.len());
    for s in &cert.squares {
        squares.push((s.y.to_quantum()?, ratio_from_pair(s.scale_sq)?));
    }
    let computed = square_sum_unlabel(&squares)?;
    if cert.target.k != 0 {
        return Err(Error::BadLabeling(format!(
            "certificate target must be unlabeled (k = 0), got k = {}",
            cert.target.k
        )));
    }
    let target = cert.target.to_quantum()?;
    let difference_terms = computed.sub(&target)?.num_terms();
    Ok(CertificateReport {
        matches: difference_terms == 0,
        computed,
        target,
        difference_terms,
    })
}

/// The classical triangle-density certificate: with `F` the 3-node graph
/// with one edge, the squares `hat(F fully labeled)` and
/// `sqrt 2 * (F with one edge endpoint labeled - F with the isolated node
/// labeled)` sum and unlabel to `K3 - 2*(two disjoint edges) + K2`, which is
/// the statement `t(K3, G) >= t(K2, G) (2 t(K2, G) - 1)` in quantum-graph
/// form.
pub fn goodman_certificate() -> Result<Certificate> {
    let edge_plus_isolated = Multigraph::from_edges(3, &[(0, 1)])?;
    let f1 = KLabeledGraph::new(edge_plus_isolated.clone(), vec![0, 1, 2])?;
    let f2 = KLabeledGraph::new(edge_plus_isolated.clone(), vec![0])?;
    let f3 = KLabeledGraph::new(edge_plus_isolated, vec![2])?;

    let hat_f1 = hat(&f1)?;
    let diff = QuantumGraph::from_term(f2, Rational64::one())?
        .sub(&QuantumGraph::from_term(f3, Rational64::one())?)?;

    let squares = vec![
        SquareTermRepr {
            scale_sq: (1, 1),
            y: QuantumGraphRepr::from_quantum(&hat_f1),
        },
        SquareTermRepr {
            scale_sq: (2, 1),
            y: QuantumGraphRepr::from_quantum(&diff),
        },
    ];

    let triangle = Multigraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)])?;
    let two_edges = Multigraph::from_edges(4, &[(0, 1), (2, 3)])?;
    let edge = Multigraph::from_edges(2, &[(0, 1)])?;
    let mut target = QuantumGraph::from_term(
        KLabeledGraph::from_multigraph(triangle, 0)?,
        Rational64::one(),
    )?;
    target = target.add(&QuantumGraph::from_term(
        KLabeledGraph::from_multigraph(two_edges, 0)?,
        Rational64::from_integer(-2),
    )?)?;
    target = target.add(&QuantumGraph::from_term(
        KLabeledGraph::from_multigraph(edge, 0)?,
        Rational64::one(),
    )?)?;

    Ok(Certificate {
        squares,
        target: QuantumGraphRepr::from_quantum(&target),
    })
}

// ---------------------------------------------------------------------------
// Classical density inequalities
// ---------------------------------------------------------------------------

/// Where the battery reads its densities from: exact counts on a graph,
/// exact evaluation on a step graphon, or Monte Carlo on a general graphon.
pub enum DensityTarget<'a> {
    Graph(&'a SimpleGraph),
    Step(&'a StepGraphon),
    Limit {
        w: &'a dyn Graphon,
        samples: usize,
        seed: u64,
    },
}

/// One inequality verdict.  `margin = lhs - rhs` is nonnegative when the
/// inequality holds; for Monte Carlo targets `sigma` carries the propagated
/// standard error and a violation is declared only beyond four sigma.
#[derive(Clone, Debug)]
pub struct InequalityCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub sigma: Option<f64>,
    pub violated: bool,
    /// True for checks of open conjectures (reported, never counted as
    /// theorem violations).
    pub conjectural: bool,
}

/// Densities with standard errors for the battery patterns.
struct Density {
    value: f64,
    stderr: f64,
}

fn battery_density(target: &DensityTarget, pattern: &SimpleGraph, idx: u64) -> Result<Density> {
    match target {
        DensityTarget::Graph(g) => Ok(Density {
            value: homcount::t(pattern, g)?,
            stderr: 0.0,
        }),
        DensityTarget::Step(w) => Ok(Density {
            value: w.t(&pattern.to_multigraph())?,
            stderr: 0.0,
        }),
        DensityTarget::Limit { w, samples, seed } => {
            let est = graphon::t_mc(pattern, *w, *samples, seed.wrapping_add(idx))?;
            Ok(Density {
                value: est.value,
                stderr: est.stderr,
            })
        }
    }
}

fn verdict(
    name: &str,
    lhs: &Density,
    rhs_value: f64,
    rhs_sigma: f64,
    conjectural: bool,
    mc: bool,
) -> InequalityCheck {
    let margin = lhs.value - rhs_value;
    let sigma = (lhs.stderr * lhs.stderr + rhs_sigma * rhs_sigma).sqrt();
    let violated = if mc {
        margin < -4.0 * sigma
    } else {
        margin < -1e-12
    };
    InequalityCheck {
        name: name.to_string(),
        lhs: lhs.value,
        rhs: rhs_value,
        margin,
        sigma: if mc { Some(sigma) } else { None },
        violated,
        conjectural,
    }
}

/// Evaluate the classical homomorphism-density inequalities on a target:
///
/// * Goodman: `t(K3) >= t(K2) (2 t(K2) - 1)`
/// * Kruskal–Katona: `t(K3) <= t(K2)^{3/2}`
/// * Erdős: `t(C4) >= t(K2)^4`
/// * Blakley–Roy: `t(P_m) >= t(K2)^{m-1}` for paths on 3, 4, 5 nodes
/// * Sidorenko (conjecture, report-only) for an optional supplied bipartite
///   pattern: `t(F) >= t(K2)^{|E(F)|}`.
///
/// Margins are `lhs - rhs`, positive when satisfied.
pub fn inequality_battery(
    target: &DensityTarget,
    sidorenko_pattern: Option<&SimpleGraph>,
) -> Result<Vec<InequalityCheck>> {
    let mc = matches!(target, DensityTarget::Limit { .. });
    let k2 = gen::complete(2);
    let k3 = gen::complete(3);
    let c4 = gen::cycle(4);
    let p3 = gen::path(3);
    let p4 = gen::path(4);
    let p5 = gen::path(5);

    let t2 = battery_density(target, &k2, 0)?;
    let t3 = battery_density(target, &k3, 1)?;
    let tc4 = battery_density(target, &c4, 2)?;
    let tp3 = battery_density(target, &p3, 3)?;
    let tp4 = battery_density(target, &p4, 4)?;
    let tp5 = battery_density(target, &p5, 5)?;

    let mut out = Vec::new();

    // Goodman: t(K3) - t(K2)(2 t(K2) - 1) >= 0.
    // d rhs / d t2 = 4 t2 - 1.
    out.push(verdict(
        "goodman",
        &t3,
        t2.value * (2.0 * t2.value - 1.0),
        (4.0 * t2.value - 1.0).abs() * t2.stderr,
        false,
        mc,
    ));

    // Kruskal-Katona: t(K2)^{3/2} - t(K3) >= 0.
    let kk_lhs = Density {
        value: t2.value.max(0.0).powf(1.5),
        stderr: 1.5 * t2.value.max(0.0).sqrt() * t2.stderr,
    };
    out.push(verdict("kruskal-katona", &kk_lhs, t3.value, t3.stderr, false, mc));

    // Erdős: t(C4) - t(K2)^4 >= 0.
    out.push(verdict(
        "erdos-c4",
        &tc4,
        t2.value.powi(4),
        4.0 * t2.value.powi(3).abs() * t2.stderr,
        false,
        mc,
    ));

    // Blakley-Roy: t(P_m) - t(K2)^{m-1} >= 0.
    for (name, tp, e) in [
        ("blakley-roy-p3", &tp3, 2),
        ("blakley-roy-p4", &tp4, 3),
        ("blakley-roy-p5", &tp5, 4),
    ] {
        out.push(verdict(
            name,
            tp,
            t2.value.powi(e),
            e as f64 * t2.value.powi(e - 1).abs() * t2.stderr,
            false,
            mc,
        ));
    }

    if let Some(f) = sidorenko_pattern {
        if !is_bipartite(f) {
            return Err(Error::InvalidParam(
                "sidorenko check needs a bipartite pattern".to_string(),
            ));
        }
        let e = f.edge_iter().count() as i32;
        let tf = battery_density(target, f, 6)?;
        out.push(verdict(
            "sidorenko",
            &tf,
            t2.value.powi(e),
            e as f64 * t2.value.powi(e - 1).abs() * t2.stderr,
            true,
            mc,
        ));
    }

    Ok(out)
}

fn is_bipartite(g: &SimpleGraph) -> bool {
    let n = g.n();
    let mut color = vec![usize::MAX; n];
    for start in 0..n {
        if color[start] != usize::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if color[v] == usize::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::enumerate_klabeled_simple;
    use crate::graph::WeightedGraph;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn labeled(n: usize, edges: &[(usize, usize)], labels: &[usize]) -> KLabeledGraph {
        KLabeledGraph::new(
            Multigraph::from_edges(n, edges).unwrap(),
            labels.to_vec(),
        )
        .unwrap()
    }

    fn random_step(rng: &mut ChaCha12Rng, max_blocks: usize) -> StepGraphon {
        let b = rng.gen_range(1..=max_blocks);
        let mut masses: Vec<f64> = (0..b).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = masses.iter().sum();
        for m in &mut masses {
            *m /= total;
        }
        let mut values = vec![0.0; b * b];
        for i in 0..b {
            for j in i..b {
                let v: f64 = rng.gen_range(0.0..1.0);
                values[i * b + j] = v;
                values[j * b + i] = v;
            }
        }
        StepGraphon::new(masses, values).unwrap()
    }

    // -- QuantumGraph arithmetic ------------------------------------------

    #[test]
    fn terms_merge_up_to_labeled_isomorphism() {
        // The same 1-labeled path written with two different node orderings.
        let a = labeled(3, &[(0, 1), (1, 2)], &[0]);
        let b = labeled(3, &[(2, 1), (1, 0)], &[2]);
        let qa = QuantumGraph::from_term(a.clone(), r(1)).unwrap();
        let qb = QuantumGraph::from_term(b, r(2)).unwrap();
        let sum = qa.add(&qb).unwrap();
        assert_eq!(sum.num_terms(), 1);
        assert_eq!(sum.coeff(&a).unwrap(), r(3));

        // Subtracting three copies cancels to zero.
        let zero = sum.sub(&qa.scale(r(3))).unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero, QuantumGraph::zero(1));
    }

    #[test]
    fn label_position_distinguishes_terms() {
        // Labeling an endpoint vs the middle of a path gives distinct classes.
        let end = labeled(3, &[(0, 1), (1, 2)], &[0]);
        let mid = labeled(3, &[(0, 1), (1, 2)], &[1]);
        let q = QuantumGraph::from_term(end.clone(), r(1))
            .unwrap()
            .add(&QuantumGraph::from_term(mid.clone(), r(5)).unwrap())
            .unwrap();
        assert_eq!(q.num_terms(), 2);
        assert_eq!(q.coeff(&end).unwrap(), r(1));
        assert_eq!(q.coeff(&mid).unwrap(), r(5));
    }

    #[test]
    fn unit_is_identity_for_both_products() {
        let unit = QuantumGraph::from_term(KLabeledGraph::unit(2), r(1)).unwrap();
        let x = QuantumGraph::from_term(labeled(3, &[(0, 2), (1, 2)], &[0, 1]), r(3)).unwrap();
        assert_eq!(x.product(&unit).unwrap(), x);
        assert_eq!(x.product_simple(&unit).unwrap(), x);
    }

    #[test]
    fn multiplicity_and_simple_products_differ_on_shared_edges() {
        let k2 = labeled(2, &[(0, 1)], &[0, 1]);
        let q = QuantumGraph::from_term(k2.clone(), r(1)).unwrap();

        let doubled = q.product(&q).unwrap();
        let mut two = Multigraph::new(2);
        two.add_edge_mult(0, 1, 2).unwrap();
        let double_edge = KLabeledGraph::new(two, vec![0, 1]).unwrap();
        assert_eq!(doubled.coeff(&double_edge).unwrap(), r(1));
        assert_eq!(doubled.num_terms(), 1);

        let simple = q.product_simple(&q).unwrap();
        assert_eq!(simple.coeff(&k2).unwrap(), r(1));
        assert_eq!(simple.num_terms(), 1);
    }

    #[test]
    fn k_mismatch_is_rejected() {
        let a = QuantumGraph::from_term(KLabeledGraph::unit(1), r(1)).unwrap();
        let b = QuantumGraph::from_term(KLabeledGraph::unit(2), r(1)).unwrap();
        assert!(a.add(&b).is_err());
        assert!(a.product(&b).is_err());
    }

    // -- hat ----------------------------------------------------------------

    #[test]
    fn hat_of_single_node_is_itself() {
        let k1 = labeled(1, &[], &[0]);
        let h = hat(&k1).unwrap();
        assert_eq!(h, QuantumGraph::from_term(k1, r(1)).unwrap());
    }

    #[test]
    fn hat_of_nonedge_subtracts_the_edge() {
        let o2 = labeled(2, &[], &[0, 1]);
        let k2 = labeled(2, &[(0, 1)], &[0, 1]);
        let h = hat(&o2).unwrap();
        assert_eq!(h.num_terms(), 2);
        assert_eq!(h.coeff(&o2).unwrap(), r(1));
        assert_eq!(h.coeff(&k2).unwrap(), r(-1));

        // A fully present graph has nothing to expand.
        assert_eq!(hat(&k2).unwrap(), QuantumGraph::from_term(k2, r(1)).unwrap());
    }

    #[test]
    fn hat_requires_full_labeling_and_simple_input() {
        let partial = labeled(3, &[(0, 1)], &[0, 1]);
        assert!(hat(&partial).is_err());

        let mut doubled = Multigraph::new(2);
        doubled.add_edge_mult(0, 1, 2).unwrap();
        let bad = KLabeledGraph::new(doubled, vec![0, 1]).unwrap();
        assert!(hat(&bad).is_err());
    }

    #[test]
    fn hat_is_idempotent_under_simple_gluing() {
        for g in [
            labeled(2, &[], &[0, 1]),
            labeled(3, &[(0, 1)], &[0, 1, 2]),
            labeled(3, &[(0, 1), (1, 2)], &[0, 1, 2]),
            labeled(4, &[(0, 1), (2, 3)], &[0, 1, 2, 3]),
        ] {
            let h = hat(&g).unwrap();
            assert_eq!(h.product_simple(&h).unwrap(), h, "hat^2 != hat");
        }
    }

    #[test]
    fn hat_density_is_induced_density() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let patterns = [
            (3, vec![(0, 1), (1, 2)]),          // path
            (3, vec![(0, 1)]),                  // edge + isolated node
            (4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]), // 4-cycle
        ];
        for _ in 0..10 {
            let w = random_step(&mut rng, 4);
            for (n, edges) in &patterns {
                let f = labeled(*n, edges, &(0..*n).collect::<Vec<_>>());
                let h = hat(&f).unwrap();
                let lhs = h.eval(|m| w.t(m), false).unwrap();
                let simple = SimpleGraph::from_edges(*n, edges).unwrap();
                let rhs = w.t_ind(&simple).unwrap();
                assert!(
                    (lhs - rhs).abs() < 1e-9,
                    "t(hat F) = {lhs} vs t_ind(F) = {rhs}"
                );
            }
        }
    }

    // -- connection submatrices ---------------------------------------------

    #[test]
    fn multiplicative_parameter_gives_rank_one_matrix() {
        // Unlabeled gluing is disjoint union, and t(., W) is multiplicative
        // over disjoint unions, so the k = 0 matrix is an outer product.
        let w = StepGraphon::new(
            vec![0.5, 0.5],
            vec![0.8, 0.3, 0.3, 0.6],
        )
        .unwrap();
        let basis = enumerate_klabeled_simple(0, 3).unwrap();
        assert_eq!(basis.len(), 7);
        let m = connection_submatrix(|g| w.t(g), 0, &basis).unwrap();
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let expected = m.matrix[(a, a)].sqrt() * m.matrix[(b, b)].sqrt();
                assert!((m.matrix[(a, b)] - expected).abs() < 1e-9);
            }
        }
        let report = m.psd_rank(1e-9).unwrap();
        assert!(report.is_psd);
        assert_eq!(report.rank, 1);
    }

    #[test]
    fn entries_match_a_direct_homomorphism_count() {
        // f = hom(., K2) on the 1-labeled basis, with every entry recomputed
        // here by enumerating all maps into K2 explicitly.
        let k2 = WeightedGraph::from_simple(&gen::complete(2));
        let basis = enumerate_klabeled_simple(1, 3).unwrap();
        let m = connection_submatrix(|g| homcount::hom_weighted(g, &k2), 1, &basis).unwrap();
        for a in 0..basis.len() {
            for b in 0..basis.len() {
                let glued = basis[a].glue(&basis[b]).unwrap().unlabel(false);
                let n = glued.n();
                let mut total = 0.0f64;
                for code in 0..(1usize << n) {
                    let mut prod = 1.0;
                    for ((u, v), mult) in glued.edge_iter() {
                        let adjacent = (code >> u & 1) != (code >> v & 1);
                        if !adjacent {
                            prod = 0.0;
                            break;
                        }
                        let _ = mult; // beta = 1 on edges of K2, any power stays 1
                    }
                    total += prod;
                }
                assert!(
                    (m.matrix[(a, b)] - total).abs() < 1e-9,
                    "entry ({a},{b}): {} vs brute {total}",
                    m.matrix[(a, b)]
                );
            }
        }
    }

    #[test]
    fn empty_basis_gives_empty_matrix() {
        let m = connection_submatrix(|_| Ok(1.0), 2, &[]).unwrap();
        assert_eq!(m.matrix.nrows(), 0);
        let report = m.psd_rank(1e-9).unwrap();
        assert!(report.is_psd);
        assert_eq!(report.rank, 0);
    }

    #[test]
    fn identity_matrix_is_psd_full_rank() {
        let report = psd_rank_check(&DMatrix::identity(5, 5), 1e-9).unwrap();
        assert!(report.is_psd);
        assert_eq!(report.rank, 5);
        assert!((report.min_eigenvalue - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psd_rank_check_validates_input() {
        assert!(psd_rank_check(&DMatrix::from_row_slice(1, 2, &[1.0, 2.0]), 1e-9).is_err());
        assert!(psd_rank_check(
            &DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]),
            1e-9
        )
        .is_err());
        assert!(psd_rank_check(
            &DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]),
            1e-9
        )
        .is_err());
    }

    #[test]
    fn triangle_homomorphisms_are_psd_with_rank_at_most_nine() {
        let k3 = WeightedGraph::from_simple(&gen::complete(3));
        let basis = enumerate_klabeled_simple(2, 3).unwrap();
        assert_eq!(basis.len(), 10);
        let m = connection_submatrix(|g| homcount::hom_weighted(g, &k3), 2, &basis).unwrap();
        let report = m.psd_rank(1e-6).unwrap();
        assert!(
            report.is_psd,
            "min eigenvalue {}",
            report.min_eigenvalue
        );
        assert!(report.rank <= 9, "rank {} > 9", report.rank);
    }

    #[test]
    fn edge_parity_parameter_is_not_psd() {
        // Parity of the number of adjacent pairs: gluing two labeled edges
        // stacks them onto one pair, so parity is not multiplicative and the
        // 2x2 principal minor on {no edge, edge} is indefinite.
        let parity = |g: &Multigraph| {
            Ok(if g.distinct_edge_count() % 2 == 1 {
                -1.0
            } else {
                1.0
            })
        };
        let basis = enumerate_klabeled_simple(2, 3).unwrap();
        let m = connection_submatrix(parity, 2, &basis).unwrap();
        let report = m.psd_rank(1e-9).unwrap();
        assert!(!report.is_psd);
        assert!(report.min_eigenvalue < -0.5);
    }

    #[test]
    fn limit_densities_are_reflection_positive() {
        let mut rng = ChaCha12Rng::seed_from_u64(4242);
        for _ in 0..5 {
            let w = random_step(&mut rng, 3);
            for k in 0..=2usize {
                let basis = enumerate_klabeled_simple(k, 3).unwrap();
                let m = connection_submatrix(|g| w.t(g), k, &basis).unwrap();
                let report = m.psd_rank(1e-8).unwrap();
                assert!(
                    report.is_psd,
                    "k = {k}: min eigenvalue {}",
                    report.min_eigenvalue
                );
            }
        }
    }

    // -- perfect matchings and kernels ---------------------------------------

    #[test]
    fn perfect_matching_counts_on_known_graphs() {
        let pm = |n, edges: &[(usize, usize)]| {
            perfect_matchings(&Multigraph::from_edges(n, edges).unwrap()).unwrap()
        };
        assert_eq!(pm(0, &[]), 1); // empty product
        assert_eq!(pm(2, &[(0, 1)]), 1);
        assert_eq!(pm(3, &[(0, 1), (1, 2)]), 0); // odd order
        assert_eq!(pm(4, &[(0, 1), (1, 2), (2, 3)]), 1); // path
        assert_eq!(pm(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]), 2); // 4-cycle
        assert_eq!(pm(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 3); // K4
        assert_eq!(pm(4, &[(0, 1), (2, 3)]), 1);
        assert_eq!(pm(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]), 2); // 6-cycle

        let mut doubled = Multigraph::new(2);
        doubled.add_edge_mult(0, 1, 2).unwrap();
        assert_eq!(perfect_matchings(&doubled).unwrap(), 2);

        assert!(perfect_matchings(&Multigraph::new(18)).is_err());
    }

    #[test]
    fn subdividing_an_edge_twice_preserves_matching_counts() {
        // P4 with labeled endpoints acts exactly like a labeled edge on
        // perfect matchings, so their difference is in the kernel.
        let p4 = labeled(4, &[(0, 1), (1, 2), (2, 3)], &[0, 3]);
        let p2 = labeled(2, &[(0, 1)], &[0, 1]);
        let x = QuantumGraph::from_term(p4, r(1))
            .unwrap()
            .sub(&QuantumGraph::from_term(p2.clone(), r(1)).unwrap())
            .unwrap();
        let basis = enumerate_klabeled_simple(2, 4).unwrap();
        assert_eq!(basis.len(), 50);
        let f = |g: &Multigraph| Ok(perfect_matchings(g)? as f64);
        assert!(kernel_test(f, &x, &basis).unwrap());

        // Subdividing by a single node flips the parity of the path and
        // leaves the kernel.
        let p3 = labeled(3, &[(0, 1), (1, 2)], &[0, 2]);
        let y = QuantumGraph::from_term(p3, r(1))
            .unwrap()
            .sub(&QuantumGraph::from_term(p2, r(1)).unwrap())
            .unwrap();
        assert!(!kernel_test(f, &y, &basis).unwrap());

        // The zero element is always in the kernel.
        assert!(kernel_test(f, &QuantumGraph::zero(2), &basis).unwrap());
    }

    // -- square sums and certificates ----------------------------------------

    #[test]
    fn goodman_square_sum_reduces_to_the_triangle_bound() {
        let edge_plus_isolated = Multigraph::from_edges(3, &[(0, 1)]).unwrap();
        let f1 = KLabeledGraph::new(edge_plus_isolated.clone(), vec![0, 1, 2]).unwrap();
        let f2 = KLabeledGraph::new(edge_plus_isolated.clone(), vec![0]).unwrap();
        let f3 = KLabeledGraph::new(edge_plus_isolated, vec![2]).unwrap();
        let diff = QuantumGraph::from_term(f2, r(1))
            .unwrap()
            .sub(&QuantumGraph::from_term(f3, r(1)).unwrap())
            .unwrap();

        let result =
            square_sum_unlabel(&[(hat(&f1).unwrap(), r(1)), (diff, r(2))]).unwrap();

        let triangle =
            KLabeledGraph::from_multigraph(Multigraph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap(), 0)
                .unwrap();
        let two_edges =
            KLabeledGraph::from_multigraph(Multigraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap(), 0)
                .unwrap();
        let edge =
            KLabeledGraph::from_multigraph(Multigraph::from_edges(2, &[(0, 1)]).unwrap(), 0)
                .unwrap();

        assert_eq!(result.num_terms(), 3);
        assert_eq!(result.coeff(&triangle).unwrap(), r(1));
        assert_eq!(result.coeff(&two_edges).unwrap(), r(-2));
        assert_eq!(result.coeff(&edge).unwrap(), r(1));
    }

    #[test]
    fn square_of_the_unit_is_the_empty_graph() {
        let o2 = QuantumGraph::from_term(KLabeledGraph::unit(2), r(1)).unwrap();
        let out = square_sum_unlabel(&[(o2, r(1))]).unwrap();
        assert_eq!(out.num_terms(), 1);
        let empty = KLabeledGraph::from_multigraph(Multigraph::new(0), 0).unwrap();
        assert_eq!(out.coeff(&empty).unwrap(), r(1));
    }

    #[test]
    fn negative_scale_is_rejected() {
        let o1 = QuantumGraph::from_term(KLabeledGraph::unit(1), r(1)).unwrap();
        assert!(square_sum_unlabel(&[(o1, r(-1))]).is_err());
    }

    #[test]
    fn square_sums_evaluate_nonnegative_on_random_graphons() {
        let edge_plus_isolated = Multigraph::from_edges(3, &[(0, 1)]).unwrap();
        let f1 = KLabeledGraph::new(edge_plus_isolated.clone(), vec![0, 1, 2]).unwrap();
        let f2 = KLabeledGraph::new(edge_plus_isolated.clone(), vec![0]).unwrap();
        let f3 = KLabeledGraph::new(edge_plus_isolated, vec![2]).unwrap();

        let squares = vec![
            // hat of the 3-node one-edge graph, fully labeled
            (hat(&f1).unwrap(), r(1)),
            // endpoint-labeled minus isolated-labeled
            (
                QuantumGraph::from_term(f2, r(1))
                    .unwrap()
                    .sub(&QuantumGraph::from_term(f3, r(1)).unwrap())
                    .unwrap(),
                r(2),
            ),
            // labeled edge minus cherry through an unlabeled midpoint
            (
                QuantumGraph::from_term(labeled(2, &[(0, 1)], &[0, 1]), r(1))
                    .unwrap()
                    .sub(
                        &QuantumGraph::from_term(labeled(3, &[(0, 2), (2, 1)], &[0, 1]), r(1))
                            .unwrap(),
                    )
                    .unwrap(),
                r(1),
            ),
            // non-adjacency witness: unit minus pendant edge
            (
                QuantumGraph::from_term(KLabeledGraph::unit(1), r(1))
                    .unwrap()
                    .sub(&QuantumGraph::from_term(labeled(2, &[(0, 1)], &[0]), r(1)).unwrap())
                    .unwrap(),
                r(3),
            ),
        ];

        let mut reduced = Vec::new();
        for (y, s) in &squares {
            reduced.push(square_sum_unlabel(&[(y.clone(), *s)]).unwrap());
        }

        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..500 {
            let w = random_step(&mut rng, 4);
            for q in &reduced {
                let val = q.eval(|m| w.t(m), true).unwrap();
                assert!(val >= -1e-9, "square evaluated to {val}");
            }
        }
    }

    #[test]
    fn certificate_round_trips_and_verifies() {
        let cert = goodman_certificate().unwrap();
        let json = cert.to_json();
        let back = Certificate::from_json(&json).unwrap();
        let report = verify_certificate(&back).unwrap();
        assert!(report.matches, "difference terms: {}", report.difference_terms);

        // Tampering with a target coefficient must be caught.
        let mut bad = cert.clone();
        bad.target.terms[0].coeff = (2, 1);
        let report = verify_certificate(&bad).unwrap();
        assert!(!report.matches);
        assert_eq!(report.difference_terms, 1);

        // Zero denominators are rejected.
        let mut broken = cert;
        broken.squares[0].scale_sq = (1, 0);
        assert!(verify_certificate(&broken).is_err());
    }

    // -- inequality battery ---------------------------------------------------

    fn check<'a>(report: &'a [InequalityCheck], name: &str) -> &'a InequalityCheck {
        report
            .iter()
            .find(|c| c.name == name)
            .unwrap_or_else(|| panic!("missing check {name}"))
    }

    #[test]
    fn battery_on_constant_graphon_has_closed_form_margins() {
        let p = 0.6;
        let w = StepGraphon::constant(p).unwrap();
        let report = inequality_battery(&DensityTarget::Step(&w), None).unwrap();
        assert_eq!(report.len(), 6);
        for c in &report {
            assert!(!c.violated, "{} flagged on a constant graphon", c.name);
            assert!(c.sigma.is_none());
        }
        let goodman = check(&report, "goodman");
        assert!((goodman.margin - (p * p * p - p * (2.0 * p - 1.0))).abs() < 1e-12);
        // A random-like target meets the quadrilateral and path bounds with
        // equality.
        assert!(check(&report, "erdos-c4").margin.abs() < 1e-12);
        assert!(check(&report, "blakley-roy-p4").margin.abs() < 1e-12);
    }

    #[test]
    fn battery_on_balanced_bipartite_graphon_meets_goodman_with_equality() {
        let w = StepGraphon::new(vec![0.5, 0.5], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let report = inequality_battery(&DensityTarget::Step(&w), None).unwrap();
        let goodman = check(&report, "goodman");
        assert!(goodman.margin.abs() < 1e-12);
        assert!(!goodman.violated);
        assert!(check(&report, "kruskal-katona").margin > 0.3);
    }

    #[test]
    fn battery_on_clique_graphon_meets_kruskal_katona_with_equality() {
        // A clique on a c-fraction of the nodes: t(K2) = c^2, t(K3) = c^3.
        let c: f64 = 0.55;
        let w = StepGraphon::new(vec![c, 1.0 - c], vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let report = inequality_battery(&DensityTarget::Step(&w), None).unwrap();
        let kk = check(&report, "kruskal-katona");
        assert!(kk.margin.abs() < 1e-12, "margin {}", kk.margin);
        assert!(!kk.violated);
    }

    #[test]
    fn battery_on_complete_graph_meets_goodman_with_equality() {
        let g = gen::complete(5);
        let report = inequality_battery(&DensityTarget::Graph(&g), None).unwrap();
        let goodman = check(&report, "goodman");
        assert!(goodman.margin.abs() < 1e-12);
        for c in &report {
            assert!(!c.violated, "{} flagged on K5", c.name);
        }
    }

    #[test]
    fn battery_accepts_monte_carlo_targets() {
        let w = graphon::Builtin::Constant(0.5);
        let star = gen::complete_bipartite(1, 3);
        let report = inequality_battery(
            &DensityTarget::Limit {
                w: &w,
                samples: 4000,
                seed: 7,
            },
            Some(&star),
        )
        .unwrap();
        assert_eq!(report.len(), 7);
        for c in &report {
            assert!(c.sigma.is_some());
            assert!(!c.violated, "{} flagged at 4 sigma", c.name);
        }
        let sid = check(&report, "sidorenko");
        assert!(sid.conjectural);
    }

    #[test]
    fn sidorenko_pattern_must_be_bipartite() {
        let g = gen::complete(4);
        let triangle = gen::complete(3);
        assert!(inequality_battery(&DensityTarget::Graph(&g), Some(&triangle)).is_err());
    }
}
