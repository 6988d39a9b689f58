//! Exact search for strictly `f`-degenerate transversals (SFDTs) and the
//! deficiency descent that turns any SFDT into a degree-bounded one.

use std::collections::VecDeque;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cover::{Cover, Transversal, ValueMap};
use crate::degeneracy;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Found,
    Exhausted,
    /// A node or time limit stopped the search before it was complete.
    Aborted,
}

/// Limits for a single search. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
}

/// Deficiency values visited by the descent, starting with the initial SFDT.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub deficiencies: Vec<i64>,
}

impl DescentTrace {
    pub fn swaps(&self) -> usize {
        self.deficiencies.len().saturating_sub(1)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.deficiencies.windows(2).all(|w| w[1] < w[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub witness: Option<Transversal>,
    pub nodes_expanded: u64,
    /// The witness satisfies `deg_R(v, q) <= f(v, q)` at every pick.
    pub bounded: bool,
    /// The witness satisfies `deg_R(v, q) < f(v, q)` at every pick.
    pub strictly_bounded: bool,
    pub descent: Option<DescentTrace>,
}

impl SolveResult {
    fn new(status: SolveStatus, witness: Option<Transversal>, nodes: u64, c: &Cover, f: &ValueMap) -> Self {
        let (bounded, strictly_bounded) = match &witness {
            Some(r) => (
                max_overshoot(c, f, r) <= 0,
                max_overshoot(c, f, r) < 0,
            ),
            None => (false, false),
        };
        SolveResult {
            status,
            witness,
            nodes_expanded: nodes,
            bounded,
            strictly_bounded,
            descent: None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.status == SolveStatus::Found
    }
}

/// `def(R) = |E(H[R])| - Σ_{(v,q) ∈ R} f(v, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Deficiency(pub i64);

impl fmt::Display for Deficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn deficiency(c: &Cover, f: &ValueMap, r: &Transversal) -> Deficiency {
    let edges = c.induced_on_transversal(r).edge_count() as i64;
    let total: i64 = r.values(f).iter().map(|&x| x as i64).sum();
    Deficiency(edges - total)
}

/// `H[R]` is strictly `f`-degenerate.
pub fn is_sfdt(c: &Cover, f: &ValueMap, r: &Transversal) -> bool {
    if c.check_transversal(r).is_err() {
        return false;
    }
    let h = c.induced_on_transversal(r);
    degeneracy::is_strictly_f_degenerate(h.adjacency(), &h.values(f))
}

// max over picks of deg_R(v, q_v) - f(v, q_v)
fn max_overshoot(c: &Cover, f: &ValueMap, r: &Transversal) -> i64 {
    (0..c.n())
        .map(|v| c.degree_into(v, r.picks[v], r) as i64 - f.get(v, r.picks[v]) as i64)
        .max()
        .unwrap_or(-1)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cap {
    None,
    AtMost,
}

/// Fiber order used by the search: BFS from a maximum-degree root in each
/// component (lowest index on ties), neighbours in ascending order.
pub fn search_order(c: &Cover) -> Vec<usize> {
    let g = c.base();
    let mut order = Vec::with_capacity(g.n());
    let mut seen = vec![false; g.n()];
    for comp in g.components() {
        let root = *comp
            .iter()
            .max_by_key(|&&v| (g.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    c: &'a Cover,
    f: &'a ValueMap,
    order: Vec<usize>,
    picks: Vec<usize>,
    cap: Cap,
    nodes: u64,
    opts: SolveOptions,
    started: Instant,
    aborted: bool,
}

impl<'a> Search<'a> {
    fn new(c: &'a Cover, f: &'a ValueMap, cap: Cap, opts: SolveOptions) -> Self {
        Search {
            c,
            f,
            order: search_order(c),
            picks: vec![usize::MAX; c.n()],
            cap,
            nodes: 0,
            opts,
            started: Instant::now(),
            aborted: false,
        }
    }

    fn run(mut self) -> SolveResult {
        let found = self.extend(0);
        let status = if found {
            SolveStatus::Found
        } else if self.aborted {
            SolveStatus::Aborted
        } else {
            SolveStatus::Exhausted
        };
        let witness = found.then(|| Transversal::new(self.picks.clone()));
        SolveResult::new(status, witness, self.nodes, self.c, self.f)
    }

    fn out_of_budget(&self) -> bool {
        if self.opts.max_nodes.is_some_and(|m| self.nodes >= m) {
            return true;
        }
        // Checking the clock every node is wasteful; every 1024 is plenty.
        self.nodes.is_multiple_of(1024) && self.opts.timeout.is_some_and(|t| self.started.elapsed() >= t)
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for q in 0..self.c.kappa() {
            if self.f.get(v, q) == 0 {
                continue;
            }
            if self.out_of_budget() {
                self.aborted = true;
                return false;
            }
            self.nodes += 1;
            self.picks[v] = q;
            if self.partial_ok(depth) && self.extend(depth + 1) {
                return true;
            }
            if self.aborted {
                return false;
            }
        }
        self.picks[v] = usize::MAX;
        false
    }

    // The picks placed so far induce a subgraph of every completion's H[R], so
    // if they are not strictly f-degenerate (or break the degree cap, which only
    // grows with more picks) no completion can succeed.
    fn partial_ok(&self, depth: usize) -> bool {
        let placed = &self.order[..=depth];
        let mut local = vec![usize::MAX; self.c.n()];
        for (i, &v) in placed.iter().enumerate() {
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); placed.len()];
        let mut vals = Vec::with_capacity(placed.len());
        for (i, &v) in placed.iter().enumerate() {
            let q = self.picks[v];
            vals.push(self.f.get(v, q));
            for &u in self.c.base().neighbors(v) {
                if local[u] != usize::MAX && self.c.partner(v, q, u) == Some(self.picks[u]) {
                    adj[i].push(local[u]);
                }
            }
        }
        let cap_ok = match self.cap {
            Cap::None => true,
            Cap::AtMost => adj.iter().zip(&vals).all(|(a, &x)| a.len() as u64 <= x as u64),
        };
        cap_ok && degeneracy::is_strictly_f_degenerate(&adj, &vals)
    }
}

/// Complete backtracking search over transversals. Cover vertices with
/// `f = 0` are never picked since they cannot appear in any SFDT.
pub fn find_sfdt(c: &Cover, f: &ValueMap) -> SolveResult {
    find_sfdt_with(c, f, SolveOptions::default())
}

pub fn find_sfdt_with(c: &Cover, f: &ValueMap, opts: SolveOptions) -> SolveResult {
    Search::new(c, f, Cap::None, opts).run()
}

fn fiber_sums_at_least(c: &Cover, f: &ValueMap, strict: bool) -> bool {
    (0..c.n()).all(|v| {
        let s = f.fiber_sum(v);
        let d = c.base().degree(v) as u64;
        if strict {
            s > d
        } else {
            s >= d
        }
    })
}

/// Repeatedly replaces the lowest-index pick breaking the cap by the
/// lowest-index admissible pick in its fiber. Each swap lowers `def(R)`.
/// Returns `None` if some violating fiber has no admissible replacement,
/// which cannot happen when the fiber sums dominate the degrees.
fn descend(c: &Cover, f: &ValueMap, mut r: Transversal, strict: bool) -> Option<(Transversal, DescentTrace)> {
    let mut trace = vec![deficiency(c, f, &r).0];
    loop {
        let violating = (0..c.n()).find(|&v| {
            let d = c.degree_into(v, r.picks[v], &r) as u64;
            let cap = f.get(v, r.picks[v]) as u64;
            if strict {
                d >= cap
            } else {
                d > cap
            }
        });
        let Some(w) = violating else {
            return Some((r, DescentTrace { deficiencies: trace }));
        };
        let q = (0..c.kappa()).find(|&q| (c.degree_into(w, q, &r) as u64) < f.get(w, q) as u64)?;
        r.picks[w] = q;
        debug_assert!(is_sfdt(c, f, &r));
        trace.push(deficiency(c, f, &r).0);
    }
}

/// An SFDT with `deg_R(v, q) <= f(v, q)` at every pick.
///
/// When `Σ_q f(v, q) >= deg(v)` everywhere, any SFDT is pushed down by
/// deficiency descent and the trace is reported. Otherwise the search itself
/// enforces the cap.
pub fn find_sfdt_bounded(c: &Cover, f: &ValueMap) -> SolveResult {
    find_sfdt_bounded_with(c, f, SolveOptions::default())
}

pub fn find_sfdt_bounded_with(c: &Cover, f: &ValueMap, opts: SolveOptions) -> SolveResult {
    if !fiber_sums_at_least(c, f, false) {
        return Search::new(c, f, Cap::AtMost, opts).run();
    }
    let plain = find_sfdt_with(c, f, opts);
    with_descent(c, f, plain, false)
}

/// An SFDT with `deg_R(v, q) < f(v, q)` at every pick. Requires
/// `Σ_q f(v, q) > deg(v)` at every base vertex.
pub fn find_sfdt_strictly_bounded(c: &Cover, f: &ValueMap) -> Result<SolveResult> {
    find_sfdt_strictly_bounded_with(c, f, SolveOptions::default())
}

pub fn find_sfdt_strictly_bounded_with(c: &Cover, f: &ValueMap, opts: SolveOptions) -> Result<SolveResult> {
    if let Some(v) = (0..c.n()).find(|&v| f.fiber_sum(v) <= c.base().degree(v) as u64) {
        return Err(Error::Precondition(format!(
            "fiber sum {} at vertex {v} does not exceed its degree {}",
            f.fiber_sum(v),
            c.base().degree(v)
        )));
    }
    let plain = find_sfdt_with(c, f, opts);
    Ok(with_descent(c, f, plain, true))
}

fn with_descent(c: &Cover, f: &ValueMap, plain: SolveResult, strict: bool) -> SolveResult {
    let Some(start) = plain.witness.clone() else {
        return plain;
    };
    match descend(c, f, start, strict) {
        Some((r, trace)) => {
            let mut out = SolveResult::new(SolveStatus::Found, Some(r), plain.nodes_expanded, c, f);
            out.descent = Some(trace);
            out
        }
        None => plain,
    }
}

/// `(H, f)` has no SFDT, but `(H - X_v, f)` has one for every base vertex `v`.
pub fn find_minimal_non_sfdt(c: &Cover, f: &ValueMap) -> bool {
    if find_sfdt(c, f).status != SolveStatus::Exhausted {
        return false;
    }
    (0..c.n()).all(|v| find_sfdt(&c.remove_fiber(v), &f.remove_fiber(v)).is_found())
}
