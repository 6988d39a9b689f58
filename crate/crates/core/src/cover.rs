//! Covers of a base graph, value maps on cover vertices and transversals.
//!
//! A cover of `G` has one fiber `X_v = {(v, 0), .., (v, κ-1)}` per base vertex
//! and, for every base edge `uv`, a (possibly partial, possibly empty) matching
//! between `X_u` and `X_v`. Fiber indices are 0-based in the library; the JSON
//! and text formats use 1-based indices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{families, Graph};

/// A vertex `(v, q)` of a cover. Serialised as `[v, q + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoverVertex {
    pub v: usize,
    pub q: usize,
}

impl CoverVertex {
    pub fn new(v: usize, q: usize) -> Self {
        CoverVertex { v, q }
    }
}

/// Matching between the fibers of the endpoints of one base edge `(u, v)`, `u < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    fwd: Vec<Option<usize>>,
    bwd: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(kappa: usize) -> Self {
        Matching {
            fwd: vec![None; kappa],
            bwd: vec![None; kappa],
        }
    }

    pub fn identity(kappa: usize) -> Self {
        Matching {
            fwd: (0..kappa).map(Some).collect(),
            bwd: (0..kappa).map(Some).collect(),
        }
    }

    /// Builds a matching from `(p, q)` pairs meaning `(u, p) ~ (v, q)`.
    /// Returns `None` if the pairs are out of range or not injective both ways.
    pub fn from_pairs(kappa: usize, pairs: &[(usize, usize)]) -> Option<Self> {
        let mut m = Matching::empty(kappa);
        for &(p, q) in pairs {
            if p >= kappa || q >= kappa || m.fwd[p].is_some() || m.bwd[q].is_some() {
                return None;
            }
            m.fwd[p] = Some(q);
            m.bwd[q] = Some(p);
        }
        Some(m)
    }

    /// Pairs `(p, q)` sorted by `p`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.fwd
            .iter()
            .enumerate()
            .filter_map(|(p, q)| q.map(|q| (p, q)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.fwd.iter().filter(|q| q.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_perfect(&self) -> bool {
        self.len() == self.fwd.len()
    }

    /// Partner in the upper endpoint's fiber of index `p` at the lower endpoint.
    pub fn forward(&self, p: usize) -> Option<usize> {
        self.fwd[p]
    }

    pub fn backward(&self, q: usize) -> Option<usize> {
        self.bwd[q]
    }
}

/// A cover `H` of a base graph `G`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cover {
    base: Graph,
    kappa: usize,
    // Indexed like `base.edges()`.
    matchings: Vec<Matching>,
}

/// An edge `(u, v)` with the `(p, q)` pairs of its matching.
pub type EdgePairs = ((usize, usize), Vec<(usize, usize)>);

impl Cover {
    /// Builds a cover from per-edge pair lists. Each entry `((u, v), pairs)`
    /// lists `(p, q)` meaning `(u, p) ~ (v, q)`, 0-based. Edges without an entry
    /// get the empty matching.
    pub fn new(
        base: Graph,
        kappa: usize,
        matchings: &[EdgePairs],
    ) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::ZeroKappa);
        }
        let mut ms = vec![Matching::empty(kappa); base.edge_count()];
        let mut seen = vec![false; base.edge_count()];
        for ((u, v), pairs) in matchings {
            let (u, v) = (*u, *v);
            let e = base.edge_index(u, v).ok_or(Error::NotAnEdge(u, v))?;
            if seen[e] {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            seen[e] = true;
            for &(p, q) in pairs {
                for x in [p, q] {
                    if x >= kappa {
                        return Err(Error::FiberIndexOutOfRange { index: x + 1, kappa });
                    }
                }
            }
            let oriented: Vec<_> = if u < v {
                pairs.clone()
            } else {
                pairs.iter().map(|&(p, q)| (q, p)).collect()
            };
            ms[e] = Matching::from_pairs(kappa, &oriented).ok_or(Error::NotAMatching {
                u: u.min(v),
                v: u.max(v),
            })?;
        }
        Ok(Cover {
            base,
            kappa,
            matchings: ms,
        })
    }

    /// Builds a cover from matchings already indexed like `base.edges()`.
    pub fn from_matchings(base: Graph, kappa: usize, matchings: Vec<Matching>) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::ZeroKappa);
        }
        if matchings.len() != base.edge_count() || matchings.iter().any(|m| m.fwd.len() != kappa)
        {
            return Err(Error::Precondition(
                "one matching of fiber size kappa per base edge".into(),
            ));
        }
        Ok(Cover {
            base,
            kappa,
            matchings,
        })
    }

    /// Every matching is the identity: `(u, p) ~ (v, q)` iff `uv ∈ E(G)` and `p = q`.
    pub fn id_cover(base: &Graph, kappa: usize) -> Result<Self> {
        let ms = vec![Matching::identity(kappa); base.edge_count()];
        Cover::from_matchings(base.clone(), kappa, ms)
    }

    /// `Γ_n`: the identity 2-fold cover of `C_n`.
    pub fn circular_ladder(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition("ladder needs n >= 3".into()));
        }
        Cover::id_cover(&families::cycle(n), 2)
    }

    /// `M_n`: 2-fold cover of `C_n` with identity matchings on the path edges
    /// and the swap on the closing edge `{n-1, 0}`.
    pub fn mobius_ladder(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition("Möbius ladder needs n >= 3".into()));
        }
        let base = families::cycle(n);
        let closing = base.edge_index(0, n - 1).unwrap();
        let ms = (0..base.edge_count())
            .map(|e| {
                if e == closing {
                    Matching::from_pairs(2, &[(0, 1), (1, 0)]).unwrap()
                } else {
                    Matching::identity(2)
                }
            })
            .collect();
        Cover::from_matchings(base, 2, ms)
    }

    /// `K̃_p`: κ disjoint copies of `K_p` as the identity cover of `K_p`.
    pub fn tilde_complete(p: usize, kappa: usize) -> Result<Self> {
        if p < 2 {
            return Err(Error::Precondition("K̃_p needs p >= 2".into()));
        }
        Cover::id_cover(&families::complete(p), kappa)
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn matching(&self, edge: usize) -> &Matching {
        &self.matchings[edge]
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    /// Index in `X_v` matched to `(u, p)` on edge `uv`, if any.
    #[inline]
    pub fn partner(&self, u: usize, p: usize, v: usize) -> Option<usize> {
        let e = self.base.edge_index(u, v)?;
        let m = &self.matchings[e];
        if u < v {
            m.fwd[p]
        } else {
            m.bwd[p]
        }
    }

    pub fn adjacent(&self, a: CoverVertex, b: CoverVertex) -> bool {
        a.v != b.v && self.partner(a.v, a.q, b.v) == Some(b.q)
    }

    /// Neighbours of `(v, q)` in `H`.
    pub fn cover_neighbors(&self, x: CoverVertex) -> Vec<CoverVertex> {
        self.base
            .neighbors(x.v)
            .iter()
            .filter_map(|&u| self.partner(x.v, x.q, u).map(|q| CoverVertex::new(u, q)))
            .collect()
    }

    /// Restriction to the base subgraph induced on `vertices`, relabelled so
    /// that `vertices[i]` becomes base vertex `i`.
    pub fn restrict(&self, vertices: &[usize]) -> Cover {
        let base = self.base.induced(vertices);
        let ms = base
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (u, v) = (vertices[a], vertices[b]);
                let e = self.base.edge_index(u, v).unwrap();
                if u < v {
                    self.matchings[e].clone()
                } else {
                    Matching {
                        fwd: self.matchings[e].bwd.clone(),
                        bwd: self.matchings[e].fwd.clone(),
                    }
                }
            })
            .collect();
        Cover {
            base,
            kappa: self.kappa,
            matchings: ms,
        }
    }

    /// `H - X_v` as a cover of `G - v`.
    pub fn remove_fiber(&self, v: usize) -> Cover {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.restrict(&keep)
    }

    /// Induced subgraph `H[S]` for an arbitrary set of cover vertices.
    pub fn induced(&self, vertices: impl IntoIterator<Item = CoverVertex>) -> CoverSubgraph<'_> {
        CoverSubgraph::build(self, vertices.into_iter().collect())
    }

    pub fn full_subgraph(&self) -> CoverSubgraph<'_> {
        self.induced(
            (0..self.n()).flat_map(|v| (0..self.kappa).map(move |q| CoverVertex::new(v, q))),
        )
    }

    /// The kernel: `H` minus every `(v, q)` with `f(v, q) = 0`.
    pub fn kernel(&self, f: &ValueMap) -> CoverSubgraph<'_> {
        self.induced(
            (0..self.n())
                .flat_map(|v| (0..self.kappa).map(move |q| CoverVertex::new(v, q)))
                .filter(|x| f.get(x.v, x.q) > 0),
        )
    }

    /// `H[R]` for a transversal `R`.
    pub fn induced_on_transversal(&self, r: &Transversal) -> CoverSubgraph<'_> {
        self.induced(r.cover_vertices())
    }

    /// Number of neighbours of `(v, q)` among the picks of `r` (ignoring `v`'s own pick).
    pub fn degree_into(&self, v: usize, q: usize, r: &Transversal) -> usize {
        self.base
            .neighbors(v)
            .iter()
            .filter(|&&u| self.partner(v, q, u) == Some(r.picks[u]))
            .count()
    }

    pub fn check_values(&self, f: &ValueMap) -> Result<()> {
        let expected = self.n() * self.kappa;
        if f.kappa != self.kappa || f.values.len() != expected {
            return Err(Error::ValueShape {
                expected,
                got: f.values.len(),
            });
        }
        Ok(())
    }

    pub fn check_transversal(&self, r: &Transversal) -> Result<()> {
        if r.picks.len() != self.n() {
            return Err(Error::TransversalShape {
                expected: self.n(),
                got: r.picks.len(),
            });
        }
        if let Some(&q) = r.picks.iter().find(|&&q| q >= self.kappa) {
            return Err(Error::FiberIndexOutOfRange {
                index: q + 1,
                kappa: self.kappa,
            });
        }
        Ok(())
    }
}

/// Nonnegative integer values `f(v, q)` on cover vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ValueMap {
    kappa: usize,
    values: Vec<u32>,
}

impl ValueMap {
    /// `values` is row-major: `values[v * kappa + q]`.
    pub fn new(kappa: usize, values: Vec<u32>) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::ZeroKappa);
        }
        if !values.len().is_multiple_of(kappa) {
            return Err(Error::ValueShape {
                expected: values.len().next_multiple_of(kappa),
                got: values.len(),
            });
        }
        Ok(ValueMap { kappa, values })
    }

    pub fn zeros(n: usize, kappa: usize) -> Self {
        ValueMap {
            kappa,
            values: vec![0; n * kappa],
        }
    }

    pub fn constant(n: usize, kappa: usize, c: u32) -> Self {
        ValueMap {
            kappa,
            values: vec![c; n * kappa],
        }
    }

    /// Builds `f(v, q) = per_layer[q]` for every `v`.
    pub fn per_layer(n: usize, per_layer: &[u32]) -> Self {
        ValueMap {
            kappa: per_layer.len(),
            values: (0..n).flat_map(|_| per_layer.iter().copied()).collect(),
        }
    }

    pub fn from_fibers(fibers: &[Vec<u32>]) -> Result<Self> {
        let kappa = fibers.first().map_or(1, Vec::len);
        if fibers.iter().any(|f| f.len() != kappa) {
            return Err(Error::Precondition("fibers of unequal length".into()));
        }
        ValueMap::new(kappa, fibers.concat())
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn n(&self) -> usize {
        self.values.len() / self.kappa
    }

    #[inline]
    pub fn get(&self, v: usize, q: usize) -> u32 {
        self.values[v * self.kappa + q]
    }

    pub fn set(&mut self, v: usize, q: usize, value: u32) {
        self.values[v * self.kappa + q] = value;
    }

    pub fn fiber(&self, v: usize) -> &[u32] {
        &self.values[v * self.kappa..(v + 1) * self.kappa]
    }

    pub fn fiber_sum(&self, v: usize) -> u64 {
        self.fiber(v).iter().map(|&x| x as u64).sum()
    }

    pub fn fiber_max(&self, v: usize) -> u32 {
        self.fiber(v).iter().copied().max().unwrap_or(0)
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn restrict(&self, vertices: &[usize]) -> ValueMap {
        ValueMap {
            kappa: self.kappa,
            values: vertices.iter().flat_map(|&v| self.fiber(v).to_vec()).collect(),
        }
    }

    pub fn remove_fiber(&self, v: usize) -> ValueMap {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.restrict(&keep)
    }

    /// `f` is constant on each connected component of `H`.
    pub fn is_semi_constant(&self, cover: &Cover) -> bool {
        let full = cover.full_subgraph();
        full.components().iter().all(|comp| {
            let first = self.get(comp[0].v, comp[0].q);
            comp.iter().all(|x| self.get(x.v, x.q) == first)
        })
    }
}

/// One pick per fiber. Serialised as a list of 1-based fiber indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transversal {
    #[serde(with = "crate::serde_util::one_based")]
    pub picks: Vec<usize>,
}

impl Transversal {
    pub fn new(picks: Vec<usize>) -> Self {
        Transversal { picks }
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    pub fn cover_vertices(&self) -> impl Iterator<Item = CoverVertex> + '_ {
        self.picks
            .iter()
            .enumerate()
            .map(|(v, &q)| CoverVertex::new(v, q))
    }

    /// Values of `f` at the picks, in base-vertex order.
    pub fn values(&self, f: &ValueMap) -> Vec<u32> {
        self.cover_vertices().map(|x| f.get(x.v, x.q)).collect()
    }

    /// Picks as 1-based fiber indices.
    pub fn one_based(&self) -> Vec<usize> {
        self.picks.iter().map(|q| q + 1).collect()
    }
}

/// Induced subgraph of a cover on a set of cover vertices.
#[derive(Debug, Clone)]
pub struct CoverSubgraph<'a> {
    cover: &'a Cover,
    vertices: Vec<CoverVertex>,
    adj: Vec<Vec<usize>>,
}

impl<'a> CoverSubgraph<'a> {
    fn build(cover: &'a Cover, mut vertices: Vec<CoverVertex>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        let kappa = cover.kappa();
        let mut local = vec![usize::MAX; cover.n() * kappa];
        for (i, x) in vertices.iter().enumerate() {
            local[x.v * kappa + x.q] = i;
        }
        let adj = vertices
            .iter()
            .map(|&x| {
                let mut out: Vec<usize> = cover
                    .cover_neighbors(x)
                    .into_iter()
                    .map(|y| local[y.v * kappa + y.q])
                    .filter(|&i| i != usize::MAX)
                    .collect();
                out.sort_unstable();
                out
            })
            .collect();
        CoverSubgraph {
            cover,
            vertices,
            adj,
        }
    }

    pub fn parent(&self) -> &'a Cover {
        self.cover
    }

    /// Sorted cover vertices; local index `i` refers to `vertices()[i]`.
    pub fn vertices(&self) -> &[CoverVertex] {
        &self.vertices
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Edges as pairs of cover vertices, each listed once with the smaller first.
    pub fn edges(&self) -> Vec<(CoverVertex, CoverVertex)> {
        let mut out = Vec::new();
        for (i, ns) in self.adj.iter().enumerate() {
            for &j in ns {
                if i < j {
                    out.push((self.vertices[i], self.vertices[j]));
                }
            }
        }
        out
    }

    /// Connected components, each a sorted list of cover vertices.
    pub fn components(&self) -> Vec<Vec<CoverVertex>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp.into_iter().map(|i| self.vertices[i]).collect());
        }
        out
    }

    /// Values of `f` at the vertices, aligned with local indices.
    pub fn values(&self, f: &ValueMap) -> Vec<u32> {
        self.vertices.iter().map(|x| f.get(x.v, x.q)).collect()
    }
}
