//! Colouring problems expressed as valued covers.
//!
//! Every encoder yields a `(Cover, ValueMap)` whose SFDTs correspond exactly to
//! the solutions of the original problem, so a single solver decides them all.

use serde::{Deserialize, Serialize};

use crate::cover::{Cover, EdgePairs, Transversal, ValueMap};
use crate::degeneracy;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Per-vertex colour lists over the palette `0..kappa` (printed 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListAssignment {
    kappa: usize,
    lists: Vec<Vec<usize>>,
}

impl ListAssignment {
    /// Lists are sorted and deduplicated.
    pub fn new(kappa: usize, mut lists: Vec<Vec<usize>>) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::ZeroKappa);
        }
        for l in &mut lists {
            if let Some(&c) = l.iter().find(|&&c| c >= kappa) {
                return Err(Error::FiberIndexOutOfRange { index: c + 1, kappa });
            }
            l.sort_unstable();
            l.dedup();
        }
        Ok(ListAssignment { kappa, lists })
    }

    /// The whole palette at every vertex.
    pub fn uniform(n: usize, kappa: usize) -> Result<Self> {
        ListAssignment::new(kappa, vec![(0..kappa).collect(); n])
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn contains(&self, v: usize, c: usize) -> bool {
        self.lists[v].binary_search(&c).is_ok()
    }
}

/// A graph with a sign `+1` or `-1` on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    base: Graph,
    // indexed like base.edges()
    signs: Vec<i8>,
}

impl SignedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)], signs: &[i8]) -> Result<Self> {
        if edges.len() != signs.len() {
            return Err(Error::ValueShape {
                expected: edges.len(),
                got: signs.len(),
            });
        }
        if let Some(&s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Precondition(format!("edge sign must be +1 or -1, got {s}")));
        }
        let base = Graph::new(n, edges)?;
        let mut by_index = vec![0; edges.len()];
        for (&(u, v), &s) in edges.iter().zip(signs) {
            by_index[base.edge_index(u, v).expect("edge was just inserted")] = s;
        }
        Ok(SignedGraph { base, signs: by_index })
    }

    pub fn all_positive(base: Graph) -> Self {
        let signs = vec![1; base.edge_count()];
        SignedGraph { base, signs }
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn sign(&self, u: usize, v: usize) -> Option<i8> {
        self.base.edge_index(u, v).map(|e| self.signs[e])
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }
}

/// `κ` value functions `f_1, .., f_κ` on the base vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    functions: Vec<Vec<u32>>,
}

impl PartitionSpec {
    pub fn new(functions: Vec<Vec<u32>>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::ZeroKappa);
        }
        let n = functions[0].len();
        if let Some(bad) = functions.iter().find(|f| f.len() != n) {
            return Err(Error::ValueShape {
                expected: n,
                got: bad.len(),
            });
        }
        Ok(PartitionSpec { functions })
    }

    /// `f_i ≡ t_i`.
    pub fn constants(n: usize, t: &[u32]) -> Result<Self> {
        PartitionSpec::new(t.iter().map(|&x| vec![x; n]).collect())
    }

    /// Transposes per-vertex rows `[f_1(v), .., f_κ(v)]`.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let kappa = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != kappa) {
            return Err(Error::ValueShape {
                expected: kappa,
                got: bad.len(),
            });
        }
        PartitionSpec::new((0..kappa).map(|i| rows.iter().map(|r| r[i]).collect()).collect())
    }

    pub fn kappa(&self) -> usize {
        self.functions.len()
    }

    pub fn function(&self, i: usize) -> &[u32] {
        &self.functions[i]
    }
}

/// ID-cover with `f(v, i) = f_i(v)`. An SFDT exists iff `V(G)` splits into
/// `V_1, .., V_κ` with each `G[V_i]` strictly `f_i`-degenerate.
pub fn encode_partition(g: &Graph, spec: &PartitionSpec) -> Result<(Cover, ValueMap)> {
    if spec.function(0).len() != g.n() {
        return Err(Error::ValueShape {
            expected: g.n(),
            got: spec.function(0).len(),
        });
    }
    let kappa = spec.kappa();
    let cover = Cover::id_cover(g, kappa)?;
    let mut f = ValueMap::zeros(g.n(), kappa);
    for i in 0..kappa {
        for (v, &x) in spec.function(i).iter().enumerate() {
            f.set(v, i, x);
        }
    }
    Ok((cover, f))
}

/// `V_i = { v : (v, i) ∈ R }`.
pub fn decode_partition(r: &Transversal, kappa: usize) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); kappa];
    for (v, &q) in r.picks.iter().enumerate() {
        parts[q].push(v);
    }
    parts
}

/// Each `G[V_i]` is strictly `f_i`-degenerate and the parts cover `V(G)` once.
pub fn is_valid_partition(g: &Graph, spec: &PartitionSpec, parts: &[Vec<usize>]) -> bool {
    if parts.len() != spec.kappa() {
        return false;
    }
    let mut seen = vec![false; g.n()];
    for p in parts {
        for &v in p {
            if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
    }
    if seen.contains(&false) {
        return false;
    }
    parts.iter().enumerate().all(|(i, p)| {
        let fi: Vec<u32> = p.iter().map(|&v| spec.function(i)[v]).collect();
        degeneracy::is_strictly_f_degenerate(g.induced(p).adjacency(), &fi)
    })
}

fn list_values(g: &Graph, lists: &ListAssignment, value: u32) -> Result<(Cover, ValueMap)> {
    if lists.n() != g.n() {
        return Err(Error::ValueShape {
            expected: g.n(),
            got: lists.n(),
        });
    }
    let kappa = lists.kappa();
    let cover = Cover::id_cover(g, kappa)?;
    let mut f = ValueMap::zeros(g.n(), kappa);
    for v in 0..g.n() {
        for &c in lists.list(v) {
            f.set(v, c, value);
        }
    }
    Ok((cover, f))
}

/// ID-cover with `f(v, c) = 1` for `c ∈ L(v)`: SFDTs are proper `L`-colourings.
pub fn encode_list_coloring(g: &Graph, lists: &ListAssignment) -> Result<(Cover, ValueMap)> {
    list_values(g, lists, 1)
}

/// ID-cover with `f(v, c) = 2` for `c ∈ L(v)`: SFDTs are colourings whose
/// colour classes induce forests.
pub fn encode_forested(g: &Graph, lists: &ListAssignment) -> Result<(Cover, ValueMap)> {
    list_values(g, lists, 2)
}

/// `k` forests covering `V(G)`, as an instance of [`encode_forested`].
pub fn encode_vertex_arboricity(g: &Graph, k: usize) -> Result<(Cover, ValueMap)> {
    encode_forested(g, &ListAssignment::uniform(g.n(), k)?)
}

/// The colour of each vertex, 0-based.
pub fn decode_coloring(r: &Transversal) -> Vec<usize> {
    r.picks.clone()
}

pub fn is_proper_list_coloring(g: &Graph, lists: &ListAssignment, colors: &[usize]) -> bool {
    colors.len() == g.n()
        && (0..g.n()).all(|v| lists.contains(v, colors[v]))
        && g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

/// Checks that `f` is a DP-colouring instance: values in `{0, 1}` and at least
/// `t` available colours per fiber. SFDTs are then independent transversals.
pub fn check_dp_instance(c: &Cover, f: &ValueMap, t: u64) -> Result<()> {
    c.check_values(f)?;
    for v in 0..c.n() {
        if let Some(q) = f.fiber(v).iter().position(|&x| x > 1) {
            return Err(Error::Precondition(format!(
                "f({v},{}) = {} is not in {{0,1}}",
                q + 1,
                f.get(v, q)
            )));
        }
        if f.fiber_sum(v) < t {
            return Err(Error::Precondition(format!(
                "fiber {v} offers {} colours, fewer than {t}",
                f.fiber_sum(v)
            )));
        }
    }
    Ok(())
}

/// The signed colour set for `k` colours in fiber order:
/// `0, +1, -1, +2, -2, ..` for odd `k` and `+1, -1, +2, -2, ..` for even `k`.
pub fn signed_colors(k: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(k);
    if k % 2 == 1 {
        out.push(0);
    }
    for s in 1..=(k / 2) as i64 {
        out.push(s);
        out.push(-s);
    }
    out
}

fn signed_index(k: usize, c: i64) -> usize {
    if k % 2 == 1 {
        if c == 0 {
            0
        } else {
            2 * c.unsigned_abs() as usize - usize::from(c > 0)
        }
    } else {
        2 * c.unsigned_abs() as usize - 1 - usize::from(c > 0)
    }
}

/// Colour `a` at `u` is matched with `σ(uv)·a` at `v`; `f ≡ 1`. SFDTs are
/// signed `k`-colourings, i.e. `φ(u) ≠ σ(uv)·φ(v)` on every edge.
pub fn encode_signed(sg: &SignedGraph, k: usize) -> Result<(Cover, ValueMap)> {
    if k == 0 {
        return Err(Error::ZeroKappa);
    }
    let colors = signed_colors(k);
    let g = sg.base();
    let ms: Vec<EdgePairs> = g
        .edges()
        .iter()
        .zip(sg.signs())
        .map(|(&(u, v), &s)| {
            let pairs = colors
                .iter()
                .enumerate()
                .map(|(i, &a)| (i, signed_index(k, s as i64 * a)))
                .collect();
            ((u, v), pairs)
        })
        .collect();
    let cover = Cover::new(g.clone(), k, &ms)?;
    Ok((cover, ValueMap::constant(g.n(), k, 1)))
}

pub fn decode_signed(r: &Transversal, k: usize) -> Vec<i64> {
    let colors = signed_colors(k);
    r.picks.iter().map(|&i| colors[i]).collect()
}

pub fn is_proper_signed_coloring(sg: &SignedGraph, k: usize, colors: &[i64]) -> bool {
    let palette = signed_colors(k);
    colors.len() == sg.base().n()
        && colors.iter().all(|c| palette.contains(c))
        && sg
            .base()
            .edges()
            .iter()
            .zip(sg.signs())
            .all(|(&(u, v), &s)| colors[u] != s as i64 * colors[v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::solver::{find_sfdt, SolveStatus};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Oracle: try every colour vector.
    fn brute_list_colorable(g: &Graph, lists: &ListAssignment) -> bool {
        let n = g.n();
        let k = lists.kappa();
        (0..k.pow(n as u32)).any(|mut code| {
            let colors: Vec<usize> = (0..n)
                .map(|_| {
                    let c = code % k;
                    code /= k;
                    c
                })
                .collect();
            (0..n).all(|v| lists.list(v).contains(&colors[v]))
                && g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
        })
    }

    #[test]
    fn partition_examples() {
        let k4 = families::complete(4);
        let (c, f) = encode_partition(&k4, &PartitionSpec::constants(4, &[1, 2]).unwrap()).unwrap();
        assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);

        let c4 = families::cycle(4);
        let spec = PartitionSpec::constants(4, &[2, 2]).unwrap();
        let (c, f) = encode_partition(&c4, &spec).unwrap();
        let r = find_sfdt(&c, &f).witness.unwrap();
        let parts = decode_partition(&r, 2);
        assert!(is_valid_partition(&c4, &spec, &parts));

        let pet = families::petersen();
        let col = degeneracy::coloring_number(pet.adjacency());
        let (c, f) = encode_partition(&pet, &PartitionSpec::constants(10, &[col]).unwrap()).unwrap();
        let r = find_sfdt(&c, &f).witness.unwrap();
        assert_eq!(decode_partition(&r, 1), vec![(0..10).collect::<Vec<_>>()]);

        let (c, f) = encode_partition(&Graph::empty(0), &PartitionSpec::new(vec![vec![], vec![]]).unwrap()).unwrap();
        let r = find_sfdt(&c, &f).witness.unwrap();
        assert_eq!(decode_partition(&r, 2), vec![Vec::<usize>::new(), vec![]]);
    }

    #[test]
    fn partition_shape_errors() {
        let spec = PartitionSpec::constants(3, &[1]).unwrap();
        assert!(encode_partition(&families::path(4), &spec).is_err());
        assert!(PartitionSpec::new(vec![vec![1], vec![1, 2]]).is_err());
        assert!(PartitionSpec::new(vec![]).is_err());
    }

    #[test]
    fn list_coloring_examples() {
        let k3 = families::complete(3);
        let (c, f) = encode_list_coloring(&k3, &ListAssignment::uniform(3, 3).unwrap()).unwrap();
        let r = find_sfdt(&c, &f).witness.unwrap();
        assert!(is_proper_list_coloring(&k3, &ListAssignment::uniform(3, 3).unwrap(), &decode_coloring(&r)));

        let (c, f) = encode_list_coloring(&k3, &ListAssignment::new(3, vec![vec![0, 1]; 3]).unwrap()).unwrap();
        assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);

        let c6 = families::cycle(6);
        let lists = ListAssignment::new(3, vec![vec![1, 2]; 6]).unwrap();
        let (c, f) = encode_list_coloring(&c6, &lists).unwrap();
        let r = find_sfdt(&c, &f).witness.unwrap();
        assert!(is_proper_list_coloring(&c6, &lists, &decode_coloring(&r)));
    }

    #[test]
    fn list_coloring_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..400 {
            let n = rng.random_range(1..=6);
            let kappa = rng.random_range(1..=3);
            let g = families::gnp(n, 0.5, &mut rng);
            let lists = (0..n)
                .map(|_| (0..kappa).filter(|_| rng.random_bool(0.6)).collect())
                .collect();
            let lists = ListAssignment::new(kappa, lists).unwrap();
            let (c, f) = encode_list_coloring(&g, &lists).unwrap();
            let res = find_sfdt(&c, &f);
            assert_eq!(res.is_found(), brute_list_colorable(&g, &lists));
            if let Some(r) = res.witness {
                assert!(is_proper_list_coloring(&g, &lists, &decode_coloring(&r)));
            }
        }
    }

    #[test]
    fn forested_examples() {
        let k4 = families::complete(4);
        let (c, f) = encode_forested(&k4, &ListAssignment::uniform(4, 2).unwrap()).unwrap();
        let r = find_sfdt(&c, &f).witness.unwrap();
        let spec = PartitionSpec::constants(4, &[2, 2]).unwrap();
        assert!(is_valid_partition(&k4, &spec, &decode_partition(&r, 2)));

        let k3 = families::complete(3);
        let (c, f) = encode_forested(&k3, &ListAssignment::uniform(3, 1).unwrap()).unwrap();
        assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);

        let (c, f) = encode_vertex_arboricity(&families::complete(5), 3).unwrap();
        assert!(find_sfdt(&c, &f).is_found());
        let (c, f) = encode_vertex_arboricity(&families::complete(5), 2).unwrap();
        assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);
    }

    #[test]
    fn dp_examples() {
        for n in [3, 5, 7] {
            let c = Cover::circular_ladder(n).unwrap();
            let f = ValueMap::constant(n, 2, 1);
            check_dp_instance(&c, &f, 2).unwrap();
            assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);
        }
        for n in [4, 6] {
            let c = Cover::mobius_ladder(n).unwrap();
            let f = ValueMap::constant(n, 2, 1);
            check_dp_instance(&c, &f, 2).unwrap();
            assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);
        }
        let c = Cover::id_cover(&families::path(2), 2).unwrap();
        assert!(check_dp_instance(&c, &ValueMap::constant(2, 2, 2), 2).is_err());
        assert!(check_dp_instance(&c, &ValueMap::per_layer(2, &[1, 0]), 2).is_err());
    }

    #[test]
    fn dp_trees_always_colourable() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let n = rng.random_range(1..=7);
            let g = families::random_tree(n, &mut rng);
            let edges: Vec<_> = g
                .edges()
                .iter()
                .map(|&e| {
                    let pairs = if rng.random_bool(0.5) { vec![(0, 0), (1, 1)] } else { vec![(0, 1), (1, 0)] };
                    (e, pairs)
                })
                .collect();
            let c = Cover::new(g, 2, &edges).unwrap();
            let f = ValueMap::constant(n, 2, 1);
            check_dp_instance(&c, &f, 2).unwrap();
            assert!(find_sfdt(&c, &f).is_found());
        }
    }

    #[test]
    fn signed_color_order() {
        assert_eq!(signed_colors(1), vec![0]);
        assert_eq!(signed_colors(4), vec![1, -1, 2, -2]);
        assert_eq!(signed_colors(5), vec![0, 1, -1, 2, -2]);
        for k in 1..=7 {
            for (i, &c) in signed_colors(k).iter().enumerate() {
                assert_eq!(signed_index(k, c), i);
            }
        }
    }

    #[test]
    fn signed_examples() {
        let tri = SignedGraph::all_positive(families::complete(3));
        let (c, f) = encode_signed(&tri, 2).unwrap();
        assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);
        let (c, f) = encode_signed(&tri, 3).unwrap();
        let r = find_sfdt(&c, &f).witness.unwrap();
        assert!(is_proper_signed_coloring(&tri, 3, &decode_signed(&r, 3)));

        let neg = SignedGraph::new(2, &[(0, 1)], &[-1]).unwrap();
        let (c, f) = encode_signed(&neg, 1).unwrap();
        assert_eq!(find_sfdt(&c, &f).status, SolveStatus::Exhausted);
        assert!(encode_signed(&neg, 0).is_err());
    }

    // Oracle: every colour vector over the signed palette.
    fn brute_signed_colorable(sg: &SignedGraph, k: usize) -> bool {
        let palette = signed_colors(k);
        let n = sg.base().n();
        (0..k.pow(n as u32)).any(|mut code| {
            let colors: Vec<i64> = (0..n)
                .map(|_| {
                    let c = palette[code % k];
                    code /= k;
                    c
                })
                .collect();
            is_proper_signed_coloring(sg, k, &colors)
        })
    }

    #[test]
    fn signed_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let n = rng.random_range(1..=5);
            let k = rng.random_range(1..=4);
            let g = families::gnp(n, 0.6, &mut rng);
            let signs: Vec<i8> = g.edges().iter().map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
            let sg = SignedGraph::new(n, g.edges(), &signs).unwrap();
            let (c, f) = encode_signed(&sg, k).unwrap();
            for m in c.matchings() {
                assert!(m.is_perfect());
            }
            let res = find_sfdt(&c, &f);
            assert_eq!(res.is_found(), brute_signed_colorable(&sg, k));
            if let Some(r) = res.witness {
                assert!(is_proper_signed_coloring(&sg, k, &decode_signed(&r, k)));
            }
        }
    }

    fn graph_and_spec() -> impl Strategy<Value = (Graph, PartitionSpec)> {
        (1usize..=6, 1usize..=3).prop_flat_map(|(n, kappa)| {
            (
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                proptest::collection::vec(proptest::collection::vec(0u32..=3, n), kappa),
            )
                .prop_map(move |(bits, fs)| {
                    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
                    let edges: Vec<_> = pairs.into_iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
                    (Graph::new(n, &edges).unwrap(), PartitionSpec::new(fs).unwrap())
                })
        })
    }

    proptest! {
        #[test]
        fn partition_round_trip((g, spec) in graph_and_spec(), seed in any::<u64>()) {
            let (c, f) = encode_partition(&g, &spec).unwrap();
            if let Some(r) = find_sfdt(&c, &f).witness {
                prop_assert!(is_valid_partition(&g, &spec, &decode_partition(&r, spec.kappa())));
            }
            // A random valid partition re-encodes to an SFDT.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picks: Vec<usize> = (0..g.n()).map(|_| rng.random_range(0..spec.kappa())).collect();
            let r = Transversal::new(picks);
            let parts = decode_partition(&r, spec.kappa());
            prop_assert_eq!(is_valid_partition(&g, &spec, &parts), crate::solver::is_sfdt(&c, &f, &r));
        }
    }
}
