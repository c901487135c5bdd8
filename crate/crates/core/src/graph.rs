//! Core graph types: multigraphs, simple graphs with fast adjacency,
//! node/edge-weighted graphs, k-labeled graphs and node partitions.
//!
//! Conventions used throughout the crate:
//! - nodes are `0..n`;
//! - multigraph edges are stored as unordered pairs `(u, v)` with `u <= v`
//!   and an integer multiplicity; a pair with `u == v` is a loop;
//! - in a simple graph loops are forbidden and multiplicities are at most 1;
//! - a weighted graph carries positive node weights `alpha[i]` and a
//!   symmetric real edge-weight matrix `beta` whose diagonal holds loop
//!   weights (0 meaning "no loop").

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Multigraph
// ---------------------------------------------------------------------------

/// Finite multigraph with optional loops.
#[derive(Clone, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    loops_allowed: bool,
    /// (u, v) with u <= v  ->  multiplicity >= 1
    edges: BTreeMap<(usize, usize), u32>,
}

impl fmt::Debug for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multigraph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Multigraph {
    /// Loopless multigraph on `n` isolated nodes.
    pub fn new(n: usize) -> Self {
        Multigraph {
            n,
            loops_allowed: false,
            edges: BTreeMap::new(),
        }
    }

    /// Multigraph on `n` isolated nodes that accepts loop edges.
    pub fn new_with_loops(n: usize) -> Self {
        Multigraph {
            n,
            loops_allowed: true,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn loops_allowed(&self) -> bool {
        self.loops_allowed
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::NodeOutOfRange { node: v, n: self.n });
        }
        Ok(())
    }

    /// Add one copy of edge `{u, v}`.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.add_edge_mult(u, v, 1)
    }

    /// Add `mult` parallel copies of edge `{u, v}`.
    pub fn add_edge_mult(&mut self, u: usize, v: usize, mult: u32) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v && !self.loops_allowed {
            return Err(Error::LoopRejected(u));
        }
        if mult == 0 {
            return Ok(());
        }
        let key = (u.min(v), u.max(v));
        *self.edges.entry(key).or_insert(0) += mult;
        Ok(())
    }

    /// Multiplicity of edge `{u, v}` (0 when absent).
    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        let key = (u.min(v), u.max(v));
        self.edges.get(&key).copied().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.multiplicity(u, v) > 0
    }

    /// Iterate over distinct edges `((u, v), multiplicity)` with `u <= v`.
    pub fn edge_iter(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.edges.iter().map(|(&k, &m)| (k, m))
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> u64 {
        self.edges.values().map(|&m| m as u64).sum()
    }

    /// Number of distinct node pairs that carry at least one edge.
    pub fn distinct_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Degree counted with multiplicity; a loop contributes 2.
    pub fn degree(&self, v: usize) -> u64 {
        let mut d = 0u64;
        for (&(a, b), &m) in &self.edges {
            if a == v && b == v {
                d += 2 * m as u64;
            } else if a == v || b == v {
                d += m as u64;
            }
        }
        d
    }

    pub fn is_simple(&self) -> bool {
        self.edges
            .iter()
            .all(|(&(a, b), &m)| a != b && m == 1)
    }

    pub fn has_loops(&self) -> bool {
        self.edges.keys().any(|&(a, b)| a == b)
    }

    /// Forget multiplicities: keep one copy of every non-loop edge, drop loops.
    pub fn simplified(&self) -> SimpleGraph {
        let edges: Vec<(usize, usize)> = self
            .edges
            .keys()
            .copied()
            .filter(|&(a, b)| a != b)
            .collect();
        SimpleGraph::from_edges(self.n, &edges).expect("edges validated on insert")
    }

    /// Disjoint union; the right graph's nodes are shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Multigraph) -> Multigraph {
        let mut g = Multigraph {
            n: self.n + other.n,
            loops_allowed: self.loops_allowed || other.loops_allowed,
            edges: self.edges.clone(),
        };
        for (&(u, v), &m) in &other.edges {
            *g.edges.entry((u + self.n, v + self.n)).or_insert(0) += m;
        }
        g
    }

    /// Keep only the nodes in `keep` (in the given order), relabeled `0..keep.len()`.
    pub fn induce(&self, keep: &[usize]) -> Result<Multigraph> {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            self.check_node(v)?;
            if pos[v] != usize::MAX {
                return Err(Error::InvalidParam(format!(
                    "node {v} repeated in induced-subgraph node list"
                )));
            }
            pos[v] = i;
        }
        let mut g = Multigraph {
            n: keep.len(),
            loops_allowed: self.loops_allowed,
            edges: BTreeMap::new(),
        };
        for (&(u, v), &m) in &self.edges {
            if pos[u] != usize::MAX && pos[v] != usize::MAX {
                let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
                g.edges.insert((a, b), m);
            }
        }
        Ok(g)
    }

    /// Drop nodes of degree zero, relabeling the rest in increasing order.
    pub fn drop_isolated(&self) -> Multigraph {
        let keep: Vec<usize> = (0..self.n).filter(|&v| self.degree(v) > 0).collect();
        self.induce(&keep).expect("kept nodes are valid")
    }

    /// Replace every node by `m` twins. Copies `i` of `u` and `j` of `v` are
    /// joined with the multiplicity of `{u, v}`; a loop at `u` induces edges
    /// (and loops) among all copies of `u` with the loop's multiplicity.
    pub fn blow_up(&self, m: usize) -> Result<Multigraph> {
        if m == 0 {
            return Err(Error::InvalidParam("blow-up factor must be >= 1".into()));
        }
        let mut g = Multigraph {
            n: self.n * m,
            loops_allowed: self.loops_allowed,
            edges: BTreeMap::new(),
        };
        for (&(u, v), &mult) in &self.edges {
            if u == v {
                for i in 0..m {
                    for j in i..m {
                        g.edges.insert((u * m + i, u * m + j), mult);
                    }
                }
            } else {
                for i in 0..m {
                    for j in 0..m {
                        let (a, b) = (u * m + i, v * m + j);
                        g.edges.insert((a.min(b), a.max(b)), mult);
                    }
                }
            }
        }
        Ok(g)
    }
}

// ---------------------------------------------------------------------------
// SimpleGraph
// ---------------------------------------------------------------------------

/// Simple graph (no loops, no parallel edges) with bitset adjacency rows,
/// sized for exact work on a few thousand nodes.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>, // n * words, row v at [v*words .. (v+1)*words)
    m: u64,
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, m={})", self.n, self.m)
    }
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        SimpleGraph {
            n,
            words,
            rows: vec![0u64; n * words],
            m: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimpleGraph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Validate a multigraph as simple (multiplicity <= 1, no loops).
    pub fn from_multigraph(g: &Multigraph) -> Result<Self> {
        let mut s = SimpleGraph::empty(g.n());
        for ((u, v), m) in g.edge_iter() {
            if u == v {
                return Err(Error::NotSimple(format!("loop at node {u}")));
            }
            if m > 1 {
                return Err(Error::NotSimple(format!(
                    "edge ({u},{v}) has multiplicity {m}"
                )));
            }
            s.add_edge(u, v)?;
        }
        Ok(s)
    }

    pub fn to_multigraph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.n);
        for (u, v) in self.edge_iter() {
            g.add_edge(u, v).expect("valid by construction");
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n {
            return Err(Error::NodeOutOfRange { node: u, n: self.n });
        }
        if v >= self.n {
            return Err(Error::NodeOutOfRange { node: v, n: self.n });
        }
        if u == v {
            return Err(Error::LoopRejected(u));
        }
        if !self.adjacent(u, v) {
            self.rows[u * self.words + v / 64] |= 1u64 << (v % 64);
            self.rows[v * self.words + u / 64] |= 1u64 << (u % 64);
            self.m += 1;
        }
        Ok(())
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree(v));
        for (wi, &w) in self.row(v).iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Number of common neighbors of `u` and `v`.
    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn edge_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .into_iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Edge density normalized by n^2: `2m / n^2`.
    pub fn edge_density(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        2.0 * self.m as f64 / (self.n as f64 * self.n as f64)
    }

    pub fn induce(&self, keep: &[usize]) -> Result<SimpleGraph> {
        let mut seen = vec![false; self.n];
        for &v in keep {
            if v >= self.n {
                return Err(Error::NodeOutOfRange { node: v, n: self.n });
            }
            if seen[v] {
                return Err(Error::InvalidParam(format!(
                    "node {v} repeated in induced-subgraph node list"
                )));
            }
            seen[v] = true;
        }
        let mut g = SimpleGraph::empty(keep.len());
        for i in 0..keep.len() {
            for j in i + 1..keep.len() {
                if self.adjacent(keep[i], keep[j]) {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }

    /// Replace every node by `m` twins; copies of adjacent nodes are joined.
    pub fn blow_up(&self, m: usize) -> Result<SimpleGraph> {
        if m == 0 {
            return Err(Error::InvalidParam("blow-up factor must be >= 1".into()));
        }
        let mut g = SimpleGraph::empty(self.n * m);
        for (u, v) in self.edge_iter() {
            for i in 0..m {
                for j in 0..m {
                    g.add_edge(u * m + i, v * m + j)?;
                }
            }
        }
        Ok(g)
    }

    pub fn complement(&self) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.adjacent(u, v) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        g
    }

    /// Connected components as sorted node lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut nodes = vec![];
            comp[s] = id;
            while let Some(v) = stack.pop() {
                nodes.push(v);
                for w in self.neighbors(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            nodes.sort_unstable();
            out.push(nodes);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Nodes at distance <= r from `root`, sorted.
    pub fn ball(&self, root: usize, r: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut out = vec![root];
        while let Some(v) = queue.pop_front() {
            if dist[v] == r {
                continue;
            }
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

// ---------------------------------------------------------------------------
// Edge-list text format
// ---------------------------------------------------------------------------

/// Parse the plain edge-list format: a header line `n m` followed by `m`
/// lines `u v` (0-based). Parallel edges are given by repeating a line.
pub fn parse_edge_list(text: &str) -> Result<Multigraph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty edge-list input".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .ok_or_else(|| Error::Parse("missing node count in header".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad node count: {e}")))?;
    let m: usize = it
        .next()
        .ok_or_else(|| Error::Parse("missing edge count in header".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad edge count: {e}")))?;
    if it.next().is_some() {
        return Err(Error::Parse("header must be exactly `n m`".into()));
    }
    let mut g = Multigraph::new_with_loops(n);
    let mut count = 0usize;
    for line in lines {
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .ok_or_else(|| Error::Parse(format!("bad edge line: {line:?}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad endpoint in {line:?}: {e}")))?;
        let v: usize = it
            .next()
            .ok_or_else(|| Error::Parse(format!("bad edge line: {line:?}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad endpoint in {line:?}: {e}")))?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("edge line must be `u v`: {line:?}")));
        }
        g.add_edge(u, v)?;
        count += 1;
    }
    if count != m {
        return Err(Error::Parse(format!(
            "header announces {m} edges but {count} edge lines follow"
        )));
    }
    Ok(g)
}

/// Write the edge-list format; parallel edges are repeated.
pub fn write_edge_list(g: &Multigraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for ((u, v), m) in g.edge_iter() {
        for _ in 0..m {
            out.push_str(&format!("{u} {v}\n"));
        }
    }
    out
}

pub fn parse_simple_edge_list(text: &str) -> Result<SimpleGraph> {
    SimpleGraph::from_multigraph(&parse_edge_list(text)?)
}

pub fn write_simple_edge_list(g: &SimpleGraph) -> String {
    write_edge_list(&g.to_multigraph())
}

// ---------------------------------------------------------------------------
// WeightedGraph
// ---------------------------------------------------------------------------

/// Graph with positive node weights and a symmetric real edge-weight matrix;
/// `beta[i][i]` is the weight of the loop at `i` (0 for no loop).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WeightedGraphRepr", into = "WeightedGraphRepr")]
pub struct WeightedGraph {
    n: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>, // row-major n x n, symmetric
}

/// Serialized form: `{"n": ..., "alpha": [...], "beta": [...]}` with `beta`
/// row-major of length n*n.
#[derive(Serialize, Deserialize)]
struct WeightedGraphRepr {
    n: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl TryFrom<WeightedGraphRepr> for WeightedGraph {
    type Error = Error;
    fn try_from(r: WeightedGraphRepr) -> Result<Self> {
        WeightedGraph::new(r.n, r.alpha, r.beta)
    }
}

impl From<WeightedGraph> for WeightedGraphRepr {
    fn from(w: WeightedGraph) -> Self {
        WeightedGraphRepr {
            n: w.n,
            alpha: w.alpha,
            beta: w.beta,
        }
    }
}

impl WeightedGraph {
    pub fn new(n: usize, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.len() != n {
            return Err(Error::InvalidParam(format!(
                "alpha has length {} but n = {n}",
                alpha.len()
            )));
        }
        if beta.len() != n * n {
            return Err(Error::InvalidParam(format!(
                "beta has length {} but n*n = {}",
                beta.len(),
                n * n
            )));
        }
        for (i, &a) in alpha.iter().enumerate() {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "node weight alpha[{i}] = {a} must be positive and finite"
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let b = beta[i * n + j];
                if !b.is_finite() {
                    return Err(Error::InvalidParam(format!(
                        "edge weight beta[{i}][{j}] = {b} must be finite"
                    )));
                }
                if (b - beta[j * n + i]).abs() > 0.0 {
                    return Err(Error::InvalidParam(format!(
                        "beta must be symmetric: beta[{i}][{j}] != beta[{j}][{i}]"
                    )));
                }
            }
        }
        Ok(WeightedGraph { n, alpha, beta })
    }

    /// Unit node weights, edge weight 1 on every edge of `g`, no loops.
    pub fn from_simple(g: &SimpleGraph) -> Self {
        let n = g.n();
        let mut beta = vec![0.0; n * n];
        for (u, v) in g.edge_iter() {
            beta[u * n + v] = 1.0;
            beta[v * n + u] = 1.0;
        }
        WeightedGraph {
            n,
            alpha: vec![1.0; n],
            beta,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self, i: usize) -> f64 {
        self.alpha[i]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self, i: usize, j: usize) -> f64 {
        self.beta[i * self.n + j]
    }

    /// Total node weight.
    pub fn alpha_total(&self) -> f64 {
        self.alpha.iter().sum()
    }

    pub fn scale_alpha(&self, c: f64) -> Result<WeightedGraph> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParam(format!(
                "node-weight scale {c} must be positive and finite"
            )));
        }
        WeightedGraph::new(
            self.n,
            self.alpha.iter().map(|a| a * c).collect(),
            self.beta.clone(),
        )
    }

    /// Apply `f` to every edge weight (used e.g. to exponentiate a coupling
    /// matrix), keeping node weights.
    pub fn map_beta(&self, f: impl Fn(f64) -> f64) -> Result<WeightedGraph> {
        WeightedGraph::new(
            self.n,
            self.alpha.clone(),
            self.beta.iter().map(|&b| f(b)).collect(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

// ---------------------------------------------------------------------------
// KLabeledGraph
// ---------------------------------------------------------------------------

/// Multigraph with `k` distinct nodes carrying labels `1..=k`
/// (`labels[i]` is the node with label `i+1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLabeledGraph {
    base: Multigraph,
    labels: Vec<usize>,
}

impl KLabeledGraph {
    pub fn new(base: Multigraph, labels: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; base.n()];
        for &v in &labels {
            if v >= base.n() {
                return Err(Error::BadLabeling(format!(
                    "label on node {v} but the graph has {} nodes",
                    base.n()
                )));
            }
            if seen[v] {
                return Err(Error::BadLabeling(format!("node {v} labeled twice")));
            }
            seen[v] = true;
        }
        Ok(KLabeledGraph { base, labels })
    }

    /// `O_k`: k isolated labeled nodes (multiplicative unit of gluing).
    pub fn unit(k: usize) -> Self {
        KLabeledGraph {
            base: Multigraph::new(k),
            labels: (0..k).collect(),
        }
    }

    /// Label nodes `0..k` of `g` in order.
    pub fn from_multigraph(g: Multigraph, k: usize) -> Result<Self> {
        if k > g.n() {
            return Err(Error::BadLabeling(format!(
                "cannot place {k} labels on {} nodes",
                g.n()
            )));
        }
        KLabeledGraph::new(g, (0..k).collect())
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn base(&self) -> &Multigraph {
        &self.base
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Glue: identify equally labeled nodes; edge multiplicities add.
    pub fn glue(&self, other: &KLabeledGraph) -> Result<KLabeledGraph> {
        if self.k() != other.k() {
            return Err(Error::LabelMismatch {
                left: self.k(),
                right: other.k(),
            });
        }
        let k = self.k();
        let n1 = self.base.n();
        // Map other's nodes into the merged graph.
        let mut map = vec![usize::MAX; other.base.n()];
        for i in 0..k {
            map[other.labels[i]] = self.labels[i];
        }
        let mut next = n1;
        for v in 0..other.base.n() {
            if map[v] == usize::MAX {
                map[v] = next;
                next += 1;
            }
        }
        let mut base = Multigraph {
            n: next,
            loops_allowed: self.base.loops_allowed || other.base.loops_allowed,
            edges: self.base.edges.clone(),
        };
        for (&(u, v), &m) in &other.base.edges {
            let (a, b) = (map[u].min(map[v]), map[u].max(map[v]));
            *base.edges.entry((a, b)).or_insert(0) += m;
        }
        Ok(KLabeledGraph {
            base,
            labels: self.labels.clone(),
        })
    }

    /// Glue in the simple-graph algebra: like `glue`, but a pair connected in
    /// both factors keeps a single edge instead of accumulating multiplicity.
    pub fn glue_simple(&self, other: &KLabeledGraph) -> Result<KLabeledGraph> {
        let mut glued = self.glue(other)?;
        for m in glued.base.edges.values_mut() {
            *m = 1;
        }
        Ok(glued)
    }

    /// Disjoint union keeping both label sets: `self`'s labels stay `1..=k`,
    /// `other`'s become `k+1..=k+l`.
    pub fn tensor(&self, other: &KLabeledGraph) -> KLabeledGraph {
        let base = self.base.disjoint_union(&other.base);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|&v| v + self.base.n()));
        KLabeledGraph { base, labels }
    }

    /// Forget the labels; optionally drop isolated nodes.
    pub fn unlabel(&self, drop_isolated: bool) -> Multigraph {
        if drop_isolated {
            self.base.drop_isolated()
        } else {
            self.base.clone()
        }
    }
}

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

/// Partition of `0..n` into nonempty blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::BadPartition(format!("block {b} is empty")));
            }
            for &v in block {
                if v >= n {
                    return Err(Error::BadPartition(format!(
                        "node {v} out of range for ground set of size {n}"
                    )));
                }
                if block_of[v] != usize::MAX {
                    return Err(Error::BadPartition(format!(
                        "node {v} appears in blocks {} and {b}",
                        block_of[v]
                    )));
                }
                block_of[v] = b;
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::BadPartition(format!("node {v} not covered")));
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(Partition { n, blocks, block_of })
    }

    /// Build from a class assignment `a[v] = class index`; class indices may
    /// be sparse and are compacted in order of first appearance.
    pub fn from_assignment(assignment: &[usize]) -> Result<Self> {
        let n = assignment.len();
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (v, &c) in assignment.iter().enumerate() {
            let id = *remap.entry(c).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[id].push(v);
        }
        Partition::new(n, blocks)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multigraph_multiplicity_accumulates() {
        let mut g = Multigraph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 0).unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.distinct_edge_count(), 1);
        assert!(!g.is_simple());
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn loops_rejected_unless_allowed() {
        let mut g = Multigraph::new(2);
        assert!(matches!(g.add_edge(1, 1), Err(Error::LoopRejected(1))));
        let mut h = Multigraph::new_with_loops(2);
        h.add_edge(1, 1).unwrap();
        assert_eq!(h.degree(1), 2);
        assert!(h.has_loops());
    }

    #[test]
    fn glue_of_fully_labeled_edge_doubles_it() {
        let e = KLabeledGraph::new(Multigraph::from_edges(2, &[(0, 1)]).unwrap(), vec![0, 1])
            .unwrap();
        let g = e.glue(&e).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.base().multiplicity(0, 1), 2);
        let s = e.glue_simple(&e).unwrap();
        assert_eq!(s.base().multiplicity(0, 1), 1);
    }

    #[test]
    fn glue_unit_is_identity() {
        let mut base = Multigraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        base.add_edge(0, 1).unwrap();
        let f = KLabeledGraph::new(base, vec![0, 3]).unwrap();
        let o2 = KLabeledGraph::unit(2);
        assert_eq!(f.glue(&o2).unwrap(), f);
        assert_eq!(o2.glue(&f).unwrap().base().edge_count(), 4);
    }

    #[test]
    fn glue_merges_by_label_position_not_node_id() {
        // Path 0-1-2 with label 1 on node 2 and label 2 on node 0,
        // glued with a labeled edge, attaches the edge across the path ends.
        let p = KLabeledGraph::new(Multigraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(), vec![2, 0])
            .unwrap();
        let e = KLabeledGraph::new(Multigraph::from_edges(2, &[(0, 1)]).unwrap(), vec![0, 1])
            .unwrap();
        let g = p.glue(&e).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.base().multiplicity(0, 2), 1); // new edge joins the ends
        assert_eq!(g.base().edge_count(), 3); // triangle
    }

    #[test]
    fn tensor_shifts_right_labels() {
        let a = KLabeledGraph::from_multigraph(Multigraph::from_edges(2, &[(0, 1)]).unwrap(), 1)
            .unwrap();
        let b = KLabeledGraph::from_multigraph(Multigraph::from_edges(2, &[(0, 1)]).unwrap(), 2)
            .unwrap();
        let t = a.tensor(&b);
        assert_eq!(t.k(), 3);
        assert_eq!(t.labels(), &[0, 2, 3]);
        assert_eq!(t.n(), 4);
        assert_eq!(t.base().edge_count(), 2);
    }

    #[test]
    fn unlabel_drops_isolated_nodes_when_asked() {
        let g = Multigraph::from_edges(4, &[(1, 2)]).unwrap();
        let f = KLabeledGraph::new(g, vec![0]).unwrap();
        assert_eq!(f.unlabel(false).n(), 4);
        let dropped = f.unlabel(true);
        assert_eq!(dropped.n(), 2);
        assert_eq!(dropped.multiplicity(0, 1), 1);
    }

    #[test]
    fn simple_graph_rejects_multiplicity_and_loops() {
        let mut g = Multigraph::new_with_loops(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 1).unwrap();
        assert!(SimpleGraph::from_multigraph(&g).is_err());
        let mut h = Multigraph::new_with_loops(3);
        h.add_edge(2, 2).unwrap();
        assert!(SimpleGraph::from_multigraph(&h).is_err());
    }

    #[test]
    fn simple_graph_adjacency_and_degrees() {
        let g = SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(g.m(), 5);
        for v in 0..5 {
            assert_eq!(g.degree(v), 2);
        }
        assert!(g.adjacent(4, 0));
        assert!(!g.adjacent(0, 2));
        assert_eq!(g.codegree(0, 2), 1);
        assert_eq!(g.neighbors(0), vec![1, 4]);
        assert!(g.is_connected());
    }

    #[test]
    fn induce_preserves_order_and_edges() {
        let g = SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let h = g.induce(&[3, 1, 2]).unwrap();
        // order: new 0 = old 3, new 1 = old 1, new 2 = old 2
        assert!(h.adjacent(0, 2));
        assert!(h.adjacent(1, 2));
        assert!(!h.adjacent(0, 1));
    }

    #[test]
    fn blow_up_sizes() {
        let k2 = SimpleGraph::from_edges(2, &[(0, 1)]).unwrap();
        let b = k2.blow_up(3).unwrap();
        assert_eq!(b.n(), 6);
        assert_eq!(b.m(), 9);
        // loop blow-up: single node with a loop becomes a complete graph with loops
        let mut l = Multigraph::new_with_loops(1);
        l.add_edge(0, 0).unwrap();
        let lb = l.blow_up(3).unwrap();
        assert_eq!(lb.n(), 3);
        assert_eq!(lb.edge_count(), 6); // 3 loops + 3 edges
    }

    #[test]
    fn ball_radii() {
        let g = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert_eq!(g.ball(0, 0), vec![0]);
        assert_eq!(g.ball(0, 2), vec![0, 1, 2]);
        assert_eq!(g.ball(2, 1), vec![1, 2, 3]);
    }

    #[test]
    fn edge_list_round_trip_with_multiplicity() {
        let mut g = Multigraph::new_with_loops(4);
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(2, 2).unwrap();
        g.add_edge(1, 3).unwrap();
        let text = write_edge_list(&g);
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(g.n(), h.n());
        assert_eq!(h.multiplicity(0, 1), 2);
        assert_eq!(h.multiplicity(2, 2), 1);
        assert_eq!(h.edge_count(), 4);
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("2 1\n0 1\n1 0\n").is_err()); // count mismatch
        assert!(parse_edge_list("2 1\n0 5\n").is_err()); // out of range
        assert!(parse_edge_list("2 1\n0 1 7\n").is_err()); // trailing field
    }

    #[test]
    fn weighted_graph_validation() {
        assert!(WeightedGraph::new(2, vec![1.0, -1.0], vec![0.0; 4]).is_err());
        assert!(WeightedGraph::new(2, vec![1.0, 1.0], vec![0.0, 1.0, 2.0, 0.0]).is_err());
        let w = WeightedGraph::new(2, vec![0.5, 1.5], vec![0.0, 2.0, 2.0, 1.0]).unwrap();
        assert_eq!(w.alpha_total(), 2.0);
        assert_eq!(w.beta(0, 1), 2.0);
        let json = w.to_json();
        let back = WeightedGraph::from_json(&json).unwrap();
        assert_eq!(w, back);
    }

    #[test]
    fn weighted_json_rejects_asymmetric() {
        let bad = r#"{"n":2,"alpha":[1,1],"beta":[0,1,2,0]}"#;
        assert!(WeightedGraph::from_json(bad).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err()); // 2 uncovered
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err()); // overlap
        assert!(Partition::new(3, vec![vec![0, 1, 2], vec![]]).is_err()); // empty block
        let p = Partition::new(4, vec![vec![3, 0], vec![1, 2]]).unwrap();
        assert_eq!(p.block_of(3), 0);
        assert_eq!(p.blocks()[0], vec![0, 3]);
        let q = Partition::from_assignment(&[7, 2, 7, 2]).unwrap();
        assert_eq!(q.num_blocks(), 2);
        assert_eq!(q.blocks()[0], vec![0, 2]);
    }
}
