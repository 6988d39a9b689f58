//! Simple undirected base graphs on dense vertex indices `0..n`.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite simple undirected graph. Immutable once built.
///
/// Edges are stored as sorted pairs `(u, v)` with `u < v`; the edge list itself
/// is sorted, so an edge index is stable and can key per-edge data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting out-of-range endpoints, self-loops and
    /// repeated edges (in either orientation).
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Subgraph induced on `vertices`, relabelled so that `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]))
            .collect();
        Graph::new(vertices.len(), &edges).expect("induced subgraph of a simple graph is simple")
    }

    /// `G - v`, with vertices above `v` shifted down by one.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
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
            out.push(comp);
        }
        out
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// At least three vertices, connected, and no cut vertex.
    pub fn is_2connected(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.blocks().blocks.len() == 1
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    /// Connected and 2-regular.
    pub fn is_cycle(&self) -> bool {
        self.n >= 3 && self.is_regular(2) && self.is_connected()
    }

    pub fn is_complete(&self) -> bool {
        self.n >= 1 && self.is_regular(self.n - 1)
    }

    /// Vertices of a cycle graph in walking order starting at 0.
    pub fn cycle_order(&self) -> Option<Vec<usize>> {
        if !self.is_cycle() {
            return None;
        }
        let mut order = vec![0, self.adj[0][0]];
        while order.len() < self.n {
            let (prev, cur) = (order[order.len() - 2], order[order.len() - 1]);
            let next = if self.adj[cur][0] == prev {
                self.adj[cur][1]
            } else {
                self.adj[cur][0]
            };
            order.push(next);
        }
        Some(order)
    }

    /// Block (biconnected component) decomposition. Bridges form `K2` blocks
    /// and isolated vertices form single-vertex blocks.
    pub fn blocks(&self) -> BlockDecomposition {
        BlockFinder::new(self).run()
    }
}

/// Blocks, cut vertices and the incidences of the block-cut tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    /// Sorted vertex sets, ordered lexicographically.
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: Vec<usize>,
    /// `(block index, cut vertex)` incidences.
    pub block_cut_edges: Vec<(usize, usize)>,
}

impl BlockDecomposition {
    /// Indices of the blocks containing `v`.
    pub fn blocks_of(&self, v: usize) -> Vec<usize> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.binary_search(&v).is_ok())
            .map(|(i, _)| i)
            .collect()
    }
}

// Hopcroft-Tarjan with an explicit edge stack.
struct BlockFinder<'g> {
    g: &'g Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<(usize, usize)>,
    blocks: Vec<Vec<usize>>,
}

impl<'g> BlockFinder<'g> {
    fn new(g: &'g Graph) -> Self {
        BlockFinder {
            g,
            disc: vec![usize::MAX; g.n],
            low: vec![0; g.n],
            time: 0,
            stack: Vec::new(),
            blocks: Vec::new(),
        }
    }

    fn run(mut self) -> BlockDecomposition {
        for s in 0..self.g.n {
            if self.disc[s] != usize::MAX {
                continue;
            }
            if self.g.adj[s].is_empty() {
                self.disc[s] = self.time;
                self.time += 1;
                self.blocks.push(vec![s]);
                continue;
            }
            self.dfs(s, usize::MAX);
        }
        let mut blocks = self.blocks;
        for b in &mut blocks {
            b.sort_unstable();
            b.dedup();
        }
        blocks.sort();
        let mut count = vec![0usize; self.g.n];
        for b in &blocks {
            for &v in b {
                count[v] += 1;
            }
        }
        let cut_vertices: Vec<usize> = (0..self.g.n).filter(|&v| count[v] >= 2).collect();
        let mut block_cut_edges = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            for &v in b {
                if count[v] >= 2 {
                    block_cut_edges.push((i, v));
                }
            }
        }
        BlockDecomposition {
            blocks,
            cut_vertices,
            block_cut_edges,
        }
    }

    fn dfs(&mut self, u: usize, parent: usize) {
        self.disc[u] = self.time;
        self.low[u] = self.time;
        self.time += 1;
        for i in 0..self.g.adj[u].len() {
            let w = self.g.adj[u][i];
            if self.disc[w] == usize::MAX {
                self.stack.push((u, w));
                self.dfs(w, u);
                self.low[u] = self.low[u].min(self.low[w]);
                if self.low[w] >= self.disc[u] {
                    let mut block = Vec::new();
                    while let Some((a, b)) = self.stack.pop() {
                        block.push(a);
                        block.push(b);
                        if (a, b) == (u, w) {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if w != parent && self.disc[w] < self.disc[u] {
                self.stack.push((u, w));
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
    }
}

/// Named graph families used by the generators, examples and the harness.
pub mod families {
    use super::*;

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::new(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    /// `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Graph {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::new(k + 1, &edges).unwrap()
    }

    /// Two triangles sharing vertex 2.
    pub fn bowtie() -> Graph {
        Graph::new(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::new(10, &edges).unwrap()
    }

    /// Look up a family member by name: `P<n>`, `C<n>`, `K<n>`, `S<k>`,
    /// `bowtie`, `petersen`.
    pub fn by_name(name: &str) -> Option<Graph> {
        match name {
            "bowtie" => return Some(bowtie()),
            "petersen" => return Some(petersen()),
            _ => {}
        }
        let (head, tail) = name.split_at(1.min(name.len()));
        let k: usize = tail.parse().ok()?;
        match head {
            "P" if k >= 1 => Some(path(k)),
            "C" if k >= 3 => Some(cycle(k)),
            "K" if k >= 1 => Some(complete(k)),
            "S" if k >= 1 => Some(star(k)),
            _ => None,
        }
    }

    /// Erdős–Rényi `G(n, p)`.
    pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    /// Uniform random labelled tree shape (random attachment) plus `G(n, p)` extra edges,
    /// so the result is always connected.
    pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut edges = random_tree_edges(n, rng);
        for u in 0..n {
            for v in u + 1..n {
                if !edges.contains(&(u, v)) && rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
        Graph::new(n, &random_tree_edges(n, rng)).unwrap()
    }

    fn random_tree_edges<R: Rng>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut edges = Vec::new();
        for i in 1..n {
            let j = rng.random_range(0..i);
            let (a, b) = (perm[i], perm[j]);
            edges.push((a.min(b), a.max(b)));
        }
        edges
    }

    /// Connected graph in which every vertex has at most `k` neighbours among
    /// earlier vertices, hence `k`-degenerate (strictly `(k+1)`-degenerate).
    pub fn random_k_degenerate<R: Rng>(n: usize, k: usize, rng: &mut R) -> Graph {
        assert!(k >= 1);
        let mut edges = Vec::new();
        for i in 1..n {
            let mut earlier: Vec<usize> = (0..i).collect();
            earlier.shuffle(rng);
            let take = rng.random_range(1..=k.min(i));
            for &j in &earlier[..take] {
                edges.push((j, i));
            }
        }
        Graph::new(n, &edges).unwrap()
    }
}
