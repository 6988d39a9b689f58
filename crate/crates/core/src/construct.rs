//! Recognition of building covers and of constructible valued covers.
//!
//! A valued cover is constructible when it is obtained from building covers by
//! repeatedly identifying one base vertex of two pieces (and their fibers
//! index by index) while adding the values on the shared fiber. For connected
//! bases this is decided block by block: every block, with some share of the
//! values at its cut vertices, must be a building cover.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cover::{Cover, CoverVertex, ValueMap};
use crate::error::{Error, Result};
use crate::serde_util::{one_based, one_based_pairs};

/// Which building case a valued cover matches, with the data that proves it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BuildingKind {
    /// Exactly one positive vertex per fiber; they induce a copy of the base.
    Monoblock {
        #[serde(with = "one_based")]
        picks: Vec<usize>,
    },
    /// Base is `K_p`; the kernel is a disjoint union of `K_p` copies with `f`
    /// constant on each copy.
    TildeComplete { components: Vec<TildeComponent> },
    /// Base is an odd cycle; the kernel is two disjoint cycles, `f ≡ 1` on it.
    OddCycleLadder {
        cycle: Vec<usize>,
        #[serde(with = "one_based_pairs")]
        layers: Vec<[usize; 2]>,
    },
    /// Base is an even cycle; the kernel is a single cycle through both
    /// layers, `f ≡ 1` on it.
    EvenCycleMobius {
        cycle: Vec<usize>,
        #[serde(with = "one_based_pairs")]
        layers: Vec<[usize; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TildeComponent {
    pub vertices: Vec<CoverVertex>,
    pub value: u32,
}

impl BuildingKind {
    pub fn tag(&self) -> &'static str {
        match self {
            BuildingKind::Monoblock { .. } => "Monoblock",
            BuildingKind::TildeComplete { .. } => "TildeComplete",
            BuildingKind::OddCycleLadder { .. } => "OddCycleLadder",
            BuildingKind::EvenCycleMobius { .. } => "EvenCycleMobius",
        }
    }

    /// Renames base vertices through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> BuildingKind {
        match self {
            BuildingKind::Monoblock { picks } => BuildingKind::Monoblock {
                picks: picks.clone(),
            },
            BuildingKind::TildeComplete { components } => BuildingKind::TildeComplete {
                components: components
                    .iter()
                    .map(|c| TildeComponent {
                        vertices: c
                            .vertices
                            .iter()
                            .map(|x| CoverVertex::new(map(x.v), x.q))
                            .collect(),
                        value: c.value,
                    })
                    .collect(),
            },
            BuildingKind::OddCycleLadder { cycle, layers } => BuildingKind::OddCycleLadder {
                cycle: cycle.iter().map(|&v| map(v)).collect(),
                layers: layers.clone(),
            },
            BuildingKind::EvenCycleMobius { cycle, layers } => BuildingKind::EvenCycleMobius {
                cycle: cycle.iter().map(|&v| map(v)).collect(),
                layers: layers.clone(),
            },
        }
    }

    /// Re-checks the witness against the defining conditions of its case.
    pub fn recheck(&self, c: &Cover, f: &ValueMap) -> bool {
        let n = c.n();
        if c.check_values(f).is_err() || !degree_equality(c, f) {
            return false;
        }
        match self {
            BuildingKind::Monoblock { picks } => {
                picks.len() == n
                    && picks.iter().all(|&q| q < c.kappa())
                    && (0..n).all(|v| {
                        (0..c.kappa()).all(|q| (f.get(v, q) > 0) == (q == picks[v]))
                    })
                    && c
                        .base()
                        .edges()
                        .iter()
                        .all(|&(u, v)| c.partner(u, picks[u], v) == Some(picks[v]))
            }
            BuildingKind::TildeComplete { components } => {
                if !c.base().is_complete() || n < 2 {
                    return false;
                }
                let mut covered = Vec::new();
                for comp in components {
                    let mut fibers: Vec<usize> = comp.vertices.iter().map(|x| x.v).collect();
                    fibers.sort_unstable();
                    fibers.dedup();
                    if fibers.len() != n || comp.vertices.len() != n || comp.value == 0 {
                        return false;
                    }
                    if comp.vertices.iter().any(|x| x.q >= c.kappa() || f.get(x.v, x.q) != comp.value) {
                        return false;
                    }
                    for (i, &a) in comp.vertices.iter().enumerate() {
                        for &b in &comp.vertices[i + 1..] {
                            if !c.adjacent(a, b) {
                                return false;
                            }
                        }
                    }
                    covered.extend(comp.vertices.iter().copied());
                }
                covered.sort_unstable();
                let before = covered.len();
                covered.dedup();
                covered.len() == before && covered == c.kernel(f).vertices()
            }
            BuildingKind::OddCycleLadder { cycle, layers } => {
                recheck_ladder(c, f, cycle, layers, false)
            }
            BuildingKind::EvenCycleMobius { cycle, layers } => {
                recheck_ladder(c, f, cycle, layers, true)
            }
        }
    }
}

fn recheck_ladder(c: &Cover, f: &ValueMap, cycle: &[usize], layers: &[[usize; 2]], swapped: bool) -> bool {
    let n = c.n();
    let g = c.base();
    if !g.is_cycle() || cycle.len() != n || layers.len() != n || n.is_multiple_of(2) != swapped {
        return false;
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return false;
    }
    for i in 0..n {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        if !g.has_edge(a, b) {
            return false;
        }
        let [x, y] = layers[i];
        if x == y || x >= c.kappa() || y >= c.kappa() {
            return false;
        }
        // Kernel at this fiber is exactly {x, y}, all with value 1.
        for q in 0..c.kappa() {
            let expected = u32::from(q == x || q == y);
            if f.get(a, q) != expected {
                return false;
            }
        }
        let next = layers[(i + 1) % n];
        let closing = i + 1 == n;
        for j in 0..2 {
            let target = if closing && swapped { next[1 - j] } else { next[j] };
            if c.partner(a, layers[i][j], b) != Some(target) {
                return false;
            }
        }
    }
    true
}

/// `Σ_q f(v, q) = deg(v)` at every base vertex.
pub fn degree_equality(c: &Cover, f: &ValueMap) -> bool {
    (0..c.n()).all(|v| f.fiber_sum(v) == c.base().degree(v) as u64)
}

/// Decides whether `(c, f)` is a building cover and returns the matching case.
/// Cases are tried in the order monoblock, `K̃_p`, ladder/Möbius.
pub fn check_building(c: &Cover, f: &ValueMap) -> Result<Option<BuildingKind>> {
    c.check_values(f)?;
    if !c.base().is_connected() {
        return Err(Error::Disconnected);
    }
    if !degree_equality(c, f) {
        return Ok(None);
    }
    Ok(monoblock(c, f).or_else(|| tilde_complete(c, f)).or_else(|| ladder(c, f)))
}

fn monoblock(c: &Cover, f: &ValueMap) -> Option<BuildingKind> {
    let mut picks = Vec::with_capacity(c.n());
    for v in 0..c.n() {
        let mut positive = (0..c.kappa()).filter(|&q| f.get(v, q) > 0);
        let q = positive.next()?;
        if positive.next().is_some() {
            return None;
        }
        picks.push(q);
    }
    c.base()
        .edges()
        .iter()
        .all(|&(u, v)| c.partner(u, picks[u], v) == Some(picks[v]))
        .then_some(BuildingKind::Monoblock { picks })
}

fn tilde_complete(c: &Cover, f: &ValueMap) -> Option<BuildingKind> {
    let p = c.n();
    if p < 2 || !c.base().is_complete() {
        return None;
    }
    let kernel = c.kernel(f);
    let mut components = Vec::new();
    for comp in kernel.components() {
        if comp.len() != p {
            return None;
        }
        // Fibers are independent, so p pairwise adjacent vertices use p distinct fibers.
        for (i, &a) in comp.iter().enumerate() {
            if comp[i + 1..].iter().any(|&b| !c.adjacent(a, b)) {
                return None;
            }
        }
        let value = f.get(comp[0].v, comp[0].q);
        if comp.iter().any(|x| f.get(x.v, x.q) != value) {
            return None;
        }
        components.push(TildeComponent {
            vertices: comp,
            value,
        });
    }
    Some(BuildingKind::TildeComplete { components })
}

fn ladder(c: &Cover, f: &ValueMap) -> Option<BuildingKind> {
    let cycle = c.base().cycle_order()?;
    let n = cycle.len();
    let positives = |v: usize| -> Option<[usize; 2]> {
        let qs: Vec<usize> = (0..c.kappa()).filter(|&q| f.get(v, q) > 0).collect();
        (qs.len() == 2 && qs.iter().all(|&q| f.get(v, q) == 1)).then(|| [qs[0], qs[1]])
    };
    let mut layers = vec![positives(cycle[0])?];
    for i in 1..n {
        let (prev, cur) = (cycle[i - 1], cycle[i]);
        let kernel_here = positives(cur)?;
        let mut next = [0; 2];
        for j in 0..2 {
            let q = c.partner(prev, layers[i - 1][j], cur)?;
            if !kernel_here.contains(&q) {
                return None;
            }
            next[j] = q;
        }
        layers.push(next);
    }
    let last = cycle[n - 1];
    let back = [
        c.partner(last, layers[n - 1][0], cycle[0])?,
        c.partner(last, layers[n - 1][1], cycle[0])?,
    ];
    let identity = back == layers[0];
    let swap = back == [layers[0][1], layers[0][0]];
    match (n % 2 == 1, identity, swap) {
        (true, true, _) => Some(BuildingKind::OddCycleLadder { cycle, layers }),
        (false, _, true) => Some(BuildingKind::EvenCycleMobius { cycle, layers }),
        _ => None,
    }
}

/// A building cover over one piece of the base.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leaf {
    /// Base vertices of the piece, sorted.
    pub vertices: Vec<usize>,
    /// Witness, in terms of the global vertex labels.
    pub building: BuildingKind,
    /// The piece's share of `f`, one fiber row per entry of `vertices`.
    pub values: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingPart {
    pub leaf: usize,
    pub share: Vec<u32>,
}

/// Identification of the copies of `cut_vertex` across `parts`, whose shares
/// add up to `f(cut_vertex, ·)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub cut_vertex: usize,
    pub parts: Vec<GluingPart>,
}

/// Witness of constructibility. Gluings are listed leaf-to-root with respect
/// to the block-cut tree rooted at the first leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTree {
    pub kappa: usize,
    pub leaves: Vec<Leaf>,
    pub gluings: Vec<Gluing>,
}

struct BlockInfo {
    vertices: Vec<usize>,
    cover: Cover,
    // (local index, global cut vertex)
    cuts: Vec<(usize, usize)>,
}

/// Decides constructibility of a valued cover of a connected base, returning
/// a construction tree when it is constructible.
pub fn is_constructible(c: &Cover, f: &ValueMap) -> Result<Option<ConstructionTree>> {
    c.check_values(f)?;
    let g = c.base();
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if !degree_equality(c, f) {
        return Ok(None);
    }
    let bd = g.blocks();
    let blocks: Vec<BlockInfo> = bd
        .blocks
        .iter()
        .map(|vs| BlockInfo {
            cover: c.restrict(vs),
            cuts: vs
                .iter()
                .enumerate()
                .filter(|(_, v)| bd.cut_vertices.binary_search(v).is_ok())
                .map(|(i, &v)| (i, v))
                .collect(),
            vertices: vs.clone(),
        })
        .collect();
    let mut search = SplitSearch {
        c,
        f,
        blocks: &blocks,
        cuts: bd
            .cut_vertices
            .iter()
            .map(|&w| (w, bd.blocks_of(w)))
            .collect(),
        shares: blocks.iter().map(|b| f.restrict(&b.vertices)).collect(),
        memo: HashMap::new(),
        kinds: vec![None; blocks.len()],
    };
    // A block is checked once its last cut vertex has been split.
    let mut ready_after = vec![None; blocks.len()];
    for (i, (_, bs)) in search.cuts.iter().enumerate() {
        for &b in bs {
            ready_after[b] = Some(i);
        }
    }
    for (b, ready) in ready_after.iter().enumerate() {
        if ready.is_none() && !search.check_block(b) {
            return Ok(None);
        }
    }
    if !search.assign(0, &ready_after) {
        return Ok(None);
    }
    Ok(Some(search.into_tree(&bd.block_cut_edges)))
}

struct SplitSearch<'a> {
    c: &'a Cover,
    f: &'a ValueMap,
    blocks: &'a [BlockInfo],
    cuts: Vec<(usize, Vec<usize>)>,
    shares: Vec<ValueMap>,
    memo: HashMap<(usize, Vec<u32>), Option<BuildingKind>>,
    kinds: Vec<Option<BuildingKind>>,
}

impl SplitSearch<'_> {
    fn check_block(&mut self, b: usize) -> bool {
        let key = (b, self.shares[b].values().to_vec());
        let kind = match self.memo.get(&key) {
            Some(k) => k.clone(),
            None => {
                let k = check_building(&self.blocks[b].cover, &self.shares[b])
                    .expect("blocks are connected and shaped like the cover");
                self.memo.insert(key, k.clone());
                k
            }
        };
        let ok = kind.is_some();
        self.kinds[b] = kind;
        ok
    }

    fn local_index(&self, b: usize, w: usize) -> usize {
        self.blocks[b].cuts.iter().find(|&&(_, g)| g == w).unwrap().0
    }

    fn assign(&mut self, i: usize, ready_after: &[Option<usize>]) -> bool {
        if i == self.cuts.len() {
            return true;
        }
        let (w, incident) = self.cuts[i].clone();
        let degs: Vec<u32> = incident
            .iter()
            .map(|&b| {
                let lw = self.local_index(b, w);
                self.blocks[b].cover.base().degree(lw) as u32
            })
            .collect();
        let total = self.f.fiber(w).to_vec();
        let mut splits = Vec::new();
        distributions(&total, &degs, &mut Vec::new(), &mut splits);
        for split in splits {
            for (k, &b) in incident.iter().enumerate() {
                let lw = self.local_index(b, w);
                for (q, &x) in split[k].iter().enumerate() {
                    self.shares[b].set(lw, q, x);
                }
            }
            let ok = incident
                .iter()
                .filter(|&&b| ready_after[b] == Some(i))
                .all(|&b| self.check_block(b));
            if ok && self.assign(i + 1, ready_after) {
                return true;
            }
        }
        false
    }

    fn into_tree(self, block_cut_edges: &[(usize, usize)]) -> ConstructionTree {
        let leaves: Vec<Leaf> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(b, info)| Leaf {
                vertices: info.vertices.clone(),
                building: self.kinds[b]
                    .as_ref()
                    .expect("every block was checked")
                    .relabel(|v| info.vertices[v]),
                values: (0..info.vertices.len())
                    .map(|v| self.shares[b].fiber(v).to_vec())
                    .collect(),
            })
            .collect();
        let depth = cut_depths(self.blocks.len(), block_cut_edges);
        let mut gluings: Vec<Gluing> = self
            .cuts
            .iter()
            .map(|(w, incident)| Gluing {
                cut_vertex: *w,
                parts: incident
                    .iter()
                    .map(|&b| GluingPart {
                        leaf: b,
                        share: self.shares[b].fiber(self.local_index(b, *w)).to_vec(),
                    })
                    .collect(),
            })
            .collect();
        gluings.sort_by_key(|gl| (std::cmp::Reverse(depth.get(&gl.cut_vertex).copied().unwrap_or(0)), gl.cut_vertex));
        ConstructionTree {
            kappa: self.c.kappa(),
            leaves,
            gluings,
        }
    }
}

// BFS depth of each cut vertex in the block-cut tree rooted at block 0.
fn cut_depths(blocks: usize, edges: &[(usize, usize)]) -> HashMap<usize, usize> {
    let mut depth = HashMap::new();
    if blocks == 0 {
        return depth;
    }
    let mut seen_block = vec![false; blocks];
    seen_block[0] = true;
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((b, d)) = queue.pop_front() {
        for &(_, w) in edges.iter().filter(|&&(bb, _)| bb == b) {
            if depth.contains_key(&w) {
                continue;
            }
            depth.insert(w, d + 1);
            for &(other, _) in edges.iter().filter(|&&(o, ww)| ww == w && o != b) {
                if !seen_block[other] {
                    seen_block[other] = true;
                    queue.push_back((other, d + 2));
                }
            }
        }
    }
    depth
}

// All ways to write `total` (a vector over fiber indices) as a sum of
// vectors whose coordinate sums are `degs[k]`.
fn distributions(total: &[u32], degs: &[u32], acc: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
    if degs.len() == acc.len() + 1 {
        let rest: Vec<u32> = (0..total.len())
            .map(|q| total[q] - acc.iter().map(|s| s[q]).sum::<u32>())
            .collect();
        if rest.iter().sum::<u32>() == degs[acc.len()] {
            acc.push(rest);
            out.push(acc.clone());
            acc.pop();
        }
        return;
    }
    let remaining: Vec<u32> = (0..total.len())
        .map(|q| total[q] - acc.iter().map(|s| s[q]).sum::<u32>())
        .collect();
    let mut part = vec![0; total.len()];
    compositions(degs[acc.len()], &remaining, 0, &mut part, &mut |p| {
        acc.push(p.to_vec());
        distributions(total, degs, acc, out);
        acc.pop();
    });
}

fn compositions(left: u32, caps: &[u32], q: usize, part: &mut Vec<u32>, emit: &mut dyn FnMut(&[u32])) {
    if q == caps.len() {
        if left == 0 {
            emit(part);
        }
        return;
    }
    for x in 0..=left.min(caps[q]) {
        part[q] = x;
        compositions(left - x, caps, q + 1, part, emit);
    }
    part[q] = 0;
}

/// Checks a construction tree against `(c, f)`: the leaves partition the base
/// edges, overlap in single vertices arranged as a tree, their shares sum to
/// `f`, the gluing records agree with the shares, and every leaf is a
/// building cover whose stored witness rechecks.
pub fn verify_construction_tree(tree: &ConstructionTree, c: &Cover, f: &ValueMap) -> bool {
    let g = c.base();
    let n = g.n();
    if c.check_values(f).is_err() || tree.kappa != c.kappa() || tree.leaves.is_empty() {
        return false;
    }
    let mut membership = vec![Vec::new(); n];
    for (i, leaf) in tree.leaves.iter().enumerate() {
        if leaf.vertices.is_empty()
            || leaf.vertices.windows(2).any(|w| w[0] >= w[1])
            || leaf.vertices.iter().any(|&v| v >= n)
            || leaf.values.len() != leaf.vertices.len()
            || leaf.values.iter().any(|row| row.len() != c.kappa())
        {
            return false;
        }
        for &v in &leaf.vertices {
            membership[v].push(i);
        }
    }
    if membership.iter().any(Vec::is_empty) {
        return false;
    }
    for &(u, v) in g.edges() {
        let holders = tree
            .leaves
            .iter()
            .filter(|l| l.vertices.binary_search(&u).is_ok() && l.vertices.binary_search(&v).is_ok())
            .count();
        if holders != 1 {
            return false;
        }
    }
    // Leaves and shared vertices must form a tree.
    let shared: Vec<usize> = (0..n).filter(|&v| membership[v].len() >= 2).collect();
    let incidences: usize = shared.iter().map(|&v| membership[v].len()).sum();
    if incidences + 1 != tree.leaves.len() + shared.len() {
        return false;
    }
    let mut seen = vec![false; tree.leaves.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for &v in &tree.leaves[i].vertices {
            for &j in &membership[v] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return false;
    }
    let share_at = |i: usize, v: usize| -> &[u32] {
        let leaf = &tree.leaves[i];
        &leaf.values[leaf.vertices.binary_search(&v).unwrap()]
    };
    for (v, owners) in membership.iter().enumerate().take(n) {
        for q in 0..c.kappa() {
            let sum: u64 = owners.iter().map(|&i| share_at(i, v)[q] as u64).sum();
            if sum != f.get(v, q) as u64 {
                return false;
            }
        }
    }
    let mut glued: Vec<usize> = tree.gluings.iter().map(|gl| gl.cut_vertex).collect();
    glued.sort_unstable();
    if glued != shared {
        return false;
    }
    for gl in &tree.gluings {
        let mut leaves: Vec<usize> = gl.parts.iter().map(|p| p.leaf).collect();
        leaves.sort_unstable();
        if leaves != membership[gl.cut_vertex] {
            return false;
        }
        if gl.parts.iter().any(|p| p.share != share_at(p.leaf, gl.cut_vertex)) {
            return false;
        }
    }
    tree.leaves.iter().all(|leaf| {
        let sub = c.restrict(&leaf.vertices);
        let Ok(sub_f) = ValueMap::from_fibers(&leaf.values) else {
            return false;
        };
        if !sub.base().is_connected() {
            return false;
        }
        let local = |v: usize| leaf.vertices.binary_search(&v).unwrap_or(usize::MAX);
        let witness = leaf.building.relabel(local);
        matches!(check_building(&sub, &sub_f), Ok(Some(_))) && witness.recheck(&sub, &sub_f)
    })
}
