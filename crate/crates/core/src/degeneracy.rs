//! Strict `f`-degeneracy of graphs with per-vertex values.
//!
//! A graph is strictly `f`-degenerate when every nonempty subgraph has a vertex
//! `v` with degree below `f(v)`. Peeling is confluent: deleting a vertex never
//! raises a degree, so a vertex that is removable stays removable and the
//! greedy outcome is independent of the order of removals.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertices `v_1, .., v_t` such that each `v_i` has fewer than `f(v_i)`
/// neighbours among `v_{i+1}, .., v_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalOrder {
    pub order: Vec<usize>,
}

impl RemovalOrder {
    /// Recounts right-neighbours directly.
    pub fn is_valid_for(&self, adj: &[Vec<usize>], f: &[u32]) -> bool {
        let n = adj.len();
        if self.order.len() != n {
            return false;
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in self.order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return false;
            }
            pos[v] = i;
        }
        self.order.iter().enumerate().all(|(i, &v)| {
            let right = adj[v].iter().filter(|&&w| pos[w] > i).count();
            (right as u64) < f[v] as u64
        })
    }
}

/// Greedy peeling. Returns an `f`-removing order, or `None` if a nonempty
/// subgraph with all degrees `>= f` remains.
///
/// At each step the vertex minimising `(degree - f, index)` is removed, so the
/// witness is deterministic.
pub fn removal_order(adj: &[Vec<usize>], f: &[u32]) -> Option<RemovalOrder> {
    let n = adj.len();
    assert_eq!(f.len(), n, "one value per vertex");
    // Values above n carry no extra information.
    let cap = |x: u32| (x as i64).min(n as i64);
    let mut deg: Vec<i64> = adj.iter().map(|a| a.len() as i64).collect();
    let mut queue: BTreeSet<(i64, usize)> = (0..n).map(|v| (deg[v] - cap(f[v]), v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some(&(slack, v)) = queue.iter().next() {
        if slack >= 0 {
            return None;
        }
        queue.remove(&(slack, v));
        removed[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if !removed[w] {
                queue.remove(&(deg[w] - cap(f[w]), w));
                deg[w] -= 1;
                queue.insert((deg[w] - cap(f[w]), w));
            }
        }
    }
    Some(RemovalOrder { order })
}

pub fn is_strictly_f_degenerate(adj: &[Vec<usize>], f: &[u32]) -> bool {
    removal_order(adj, f).is_some()
}

pub fn is_strictly_k_degenerate(adj: &[Vec<usize>], k: u32) -> bool {
    is_strictly_f_degenerate(adj, &vec![k; adj.len()])
}

/// Least `k` such that the graph is strictly `k`-degenerate (degeneracy + 1;
/// 0 for the empty graph).
pub fn coloring_number(adj: &[Vec<usize>]) -> u32 {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut degeneracy = 0;
    while let Some((d, v)) = queue.pop_first() {
        degeneracy = degeneracy.max(d);
        removed[v] = true;
        for &w in &adj[v] {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    degeneracy as u32 + 1
}

/// Largest graph accepted by [`brute_force_strictly_f_degenerate`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

/// The definition applied literally: every nonempty vertex subset must induce
/// a subgraph with some vertex of induced degree below its value.
pub fn brute_force_strictly_f_degenerate(adj: &[Vec<usize>], f: &[u32]) -> Result<bool> {
    let n = adj.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let masks: Vec<u32> = adj
        .iter()
        .map(|a| a.iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    for subset in 1u32..(1u32 << n) {
        let has_low = (0..n)
            .filter(|&v| subset >> v & 1 == 1)
            .any(|v| (masks[v] & subset).count_ones() < f[v]);
        if !has_low {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{families, Graph};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn adj(g: &Graph) -> Vec<Vec<usize>> {
        g.adjacency().to_vec()
    }

    #[test]
    fn definition_examples() {
        let edgeless = adj(&Graph::empty(4));
        assert!(is_strictly_f_degenerate(&edgeless, &[1; 4]));
        let tree = adj(&families::star(4));
        assert!(is_strictly_f_degenerate(&tree, &[2; 5]));
        let c4 = adj(&families::cycle(4));
        assert!(!is_strictly_f_degenerate(&c4, &[2; 4]));
        let k2 = adj(&families::path(2));
        assert!(!is_strictly_f_degenerate(&k2, &[1; 2]));
        for (a, f) in [(&edgeless, vec![1; 4]), (&tree, vec![2; 5]), (&c4, vec![2; 4]), (&k2, vec![1; 2])] {
            assert_eq!(
                brute_force_strictly_f_degenerate(a, &f).unwrap(),
                is_strictly_f_degenerate(a, &f)
            );
        }
        assert!(!brute_force_strictly_f_degenerate(&adj(&Graph::empty(1)), &[0]).unwrap());
        assert!(is_strictly_f_degenerate(&[], &[]));
    }

    #[test]
    fn constant_k_examples() {
        let k4 = adj(&families::complete(4));
        assert!(is_strictly_k_degenerate(&k4, 4));
        assert!(!is_strictly_k_degenerate(&k4, 3));
        assert!(is_strictly_k_degenerate(&adj(&families::cycle(6)), 3));
    }

    #[test]
    fn coloring_number_examples() {
        assert_eq!(coloring_number(&adj(&families::complete(5))), 5);
        assert_eq!(coloring_number(&adj(&families::star(3))), 2);
        assert_eq!(coloring_number(&adj(&families::cycle(7))), 3);
        assert_eq!(coloring_number(&adj(&Graph::empty(3))), 1);
        assert_eq!(coloring_number(&[]), 0);
    }

    // Oracle: min over all nonempty subsets of the subset's minimum degree, plus one.
    fn coloring_number_oracle(a: &[Vec<usize>]) -> u32 {
        let n = a.len();
        let mut best = 0;
        for s in 1u32..(1 << n) {
            let min_deg = (0..n)
                .filter(|&v| s >> v & 1 == 1)
                .map(|v| a[v].iter().filter(|&&w| s >> w & 1 == 1).count())
                .min()
                .unwrap();
            best = best.max(min_deg as u32 + 1);
        }
        best
    }

    #[test]
    fn coloring_number_matches_subset_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(1..=8);
            let g = families::gnp(n, 0.5, &mut rng);
            let a = adj(&g);
            let col = coloring_number(&a);
            assert_eq!(col, coloring_number_oracle(&a));
            assert!(is_strictly_k_degenerate(&a, col));
            assert!(!is_strictly_k_degenerate(&a, col - 1));
        }
    }

    #[test]
    fn brute_force_guard() {
        let big = adj(&Graph::empty(21));
        assert!(matches!(
            brute_force_strictly_f_degenerate(&big, &[1; 21]),
            Err(Error::TooLarge { .. })
        ));
    }

    fn graph_and_values() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<u32>)> {
        (1usize..=8).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                proptest::collection::vec(any::<bool>(), pairs),
                proptest::collection::vec(0u32..=3, n),
            )
                .prop_map(move |(bits, f)| {
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for u in 0..n {
                        for v in u + 1..n {
                            if bits[k] {
                                edges.push((u, v));
                            }
                            k += 1;
                        }
                    }
                    (Graph::new(n, &edges).unwrap().adjacency().to_vec(), f)
                })
        })
    }

    proptest! {
        #[test]
        fn greedy_equals_brute_force((a, f) in graph_and_values()) {
            prop_assert_eq!(
                is_strictly_f_degenerate(&a, &f),
                brute_force_strictly_f_degenerate(&a, &f).unwrap()
            );
        }

        #[test]
        fn witness_is_sound((a, f) in graph_and_values()) {
            if let Some(order) = removal_order(&a, &f) {
                prop_assert!(order.is_valid_for(&a, &f));
            }
        }

        #[test]
        fn raising_a_value_never_breaks_degeneracy((a, f) in graph_and_values(), v in 0usize..8) {
            let v = v % a.len();
            let mut g = f.clone();
            g[v] += 1;
            if is_strictly_f_degenerate(&a, &f) {
                prop_assert!(is_strictly_f_degenerate(&a, &g));
            }
        }

        #[test]
        fn heredity((a, f) in graph_and_values(), mask in any::<u8>()) {
            if is_strictly_f_degenerate(&a, &f) {
                let keep: Vec<usize> = (0..a.len()).filter(|&v| mask >> v & 1 == 1).collect();
                let g = Graph::new(a.len(), &a.iter().enumerate()
                    .flat_map(|(u, ns)| ns.iter().filter(move |&&w| u < w).map(move |&w| (u, w)))
                    .collect::<Vec<_>>()).unwrap().induced(&keep);
                let sub_f: Vec<u32> = keep.iter().map(|&v| f[v]).collect();
                prop_assert!(is_strictly_f_degenerate(g.adjacency(), &sub_f));
            }
        }
    }
}
