//! Exhaustive and sampled supply of covers and value maps.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cover::{Cover, Matching, ValueMap};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest instance space enumerated exhaustively.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum MatchingPolicy {
    /// Every partial matching on every edge.
    All,
    /// Every perfect matching on every edge.
    PerfectOnly,
    /// `count` covers with each edge's matching drawn uniformly from all
    /// partial matchings.
    Sampled { count: usize },
}

/// `Σ_k C(κ,k)² k!`, the number of partial matchings between two `κ`-sets.
pub fn matching_count(kappa: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    let mut fact = 1u128;
    total += 1;
    for k in 1..=kappa as u128 {
        binom = binom * (kappa as u128 - k + 1) / k;
        fact *= k;
        total += binom * binom * fact;
    }
    total
}

/// All partial matchings between two `κ`-sets, smallest first.
pub fn all_matchings(kappa: usize) -> Vec<Matching> {
    let mut out = Vec::new();
    let mut fwd = vec![None; kappa];
    let mut used = vec![false; kappa];
    extend_matchings(0, &mut fwd, &mut used, &mut out);
    out.sort_by_key(|m| (m.len(), m.pairs()));
    out
}

fn extend_matchings(p: usize, fwd: &mut Vec<Option<usize>>, used: &mut Vec<bool>, out: &mut Vec<Matching>) {
    let kappa = fwd.len();
    if p == kappa {
        let pairs: Vec<(usize, usize)> = fwd.iter().enumerate().filter_map(|(p, q)| q.map(|q| (p, q))).collect();
        out.push(Matching::from_pairs(kappa, &pairs).expect("injective by construction"));
        return;
    }
    extend_matchings(p + 1, fwd, used, out);
    for q in 0..kappa {
        if !used[q] {
            used[q] = true;
            fwd[p] = Some(q);
            extend_matchings(p + 1, fwd, used, out);
            fwd[p] = None;
            used[q] = false;
        }
    }
}

/// The `κ!` perfect matchings, in lexicographic order of their permutations.
pub fn perfect_matchings(kappa: usize) -> Vec<Matching> {
    all_matchings(kappa).into_iter().filter(Matching::is_perfect).collect()
}

fn checked_power(base: u128, exp: usize) -> u128 {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base)).unwrap_or(u128::MAX)
}

/// Covers of `g` with fiber size `kappa` under `policy`. Exhaustive policies
/// are refused when the count exceeds [`ENUMERATION_LIMIT`].
pub fn enumerate_covers<R: Rng>(g: &Graph, kappa: usize, policy: MatchingPolicy, rng: &mut R) -> Result<Vec<Cover>> {
    if kappa == 0 {
        return Err(Error::ZeroKappa);
    }
    let choices = match policy {
        MatchingPolicy::PerfectOnly => perfect_matchings(kappa),
        _ => all_matchings(kappa),
    };
    let m = g.edge_count();
    if let MatchingPolicy::Sampled { count } = policy {
        return Ok((0..count).map(|_| random_cover(g, kappa, false, rng)).collect());
    }
    let total = checked_power(choices.len() as u128, m);
    if total > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard {
            count: total,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(product(&vec![choices.len(); m])
        .into_iter()
        .map(|idx| {
            let ms = idx.iter().map(|&i| choices[i].clone()).collect();
            Cover::from_matchings(g.clone(), kappa, ms).unwrap()
        })
        .collect())
}

/// Number of covers [`enumerate_covers`] yields.
pub fn cover_space_size(g: &Graph, kappa: usize, policy: MatchingPolicy) -> u128 {
    match policy {
        MatchingPolicy::All => checked_power(matching_count(kappa), g.edge_count()),
        MatchingPolicy::PerfectOnly => checked_power((1..=kappa as u128).product(), g.edge_count()),
        MatchingPolicy::Sampled { count } => count as u128,
    }
}

/// One cover with each edge's matching drawn uniformly from the perfect
/// matchings or from all partial matchings.
pub fn random_cover<R: Rng>(g: &Graph, kappa: usize, perfect: bool, rng: &mut R) -> Cover {
    let choices = if perfect { perfect_matchings(kappa) } else { all_matchings(kappa) };
    let ms = (0..g.edge_count()).map(|_| choices.choose(rng).unwrap().clone()).collect();
    Cover::from_matchings(g.clone(), kappa, ms).unwrap()
}

// Mixed-radix counter, last position fastest.
fn product(radix: &[usize]) -> Vec<Vec<usize>> {
    if radix.contains(&0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0; radix.len()];
    loop {
        out.push(idx.clone());
        let mut i = radix.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < radix[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Which value maps to pair with each cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum ValuePolicy {
    /// `Σ_q f(v, q) = deg(v)`, entries at most `min(deg(v), cap)`.
    DegreeEqual { cap: u32 },
    /// `deg(v) <= Σ_q f(v, q) <= deg(v) + extra`, entries at most `cap`.
    DegreeGe { cap: u32, extra: u32 },
    /// `deg(v) < Σ_q f(v, q) <= deg(v) + extra`, entries at most `cap`.
    DegreeGt { cap: u32, extra: u32 },
    /// `Σ_q f(v, q) >= m` with `m` given or, if absent, the base's colouring number;
    /// sums at most `m + extra`, entries at most `cap`.
    AtLeast { min_sum: Option<u32>, cap: u32, extra: u32 },
    /// Every entry in `0..=cap`.
    Bounded { cap: u32 },
    /// `f ≡ value`.
    Constant { value: u32 },
}

/// Fibers of length `kappa` with entries `<= cap` and sum in `lo..=hi`.
pub fn fiber_options(kappa: usize, cap: u32, lo: u64, hi: u64) -> Vec<Vec<u32>> {
    product(&vec![cap as usize + 1; kappa])
        .into_iter()
        .map(|idx| idx.into_iter().map(|x| x as u32).collect::<Vec<u32>>())
        .filter(|fib| {
            let s: u64 = fib.iter().map(|&x| x as u64).sum();
            (lo..=hi).contains(&s)
        })
        .collect()
}

/// The admissible fibers of each base vertex.
pub fn value_options(g: &Graph, kappa: usize, policy: ValuePolicy) -> Vec<Vec<Vec<u32>>> {
    let col = || crate::degeneracy::coloring_number(g.adjacency());
    (0..g.n())
        .map(|v| {
            let d = g.degree(v) as u64;
            match policy {
                ValuePolicy::DegreeEqual { cap } => fiber_options(kappa, cap.min(d as u32), d, d),
                ValuePolicy::DegreeGe { cap, extra } => fiber_options(kappa, cap, d, d + extra as u64),
                ValuePolicy::DegreeGt { cap, extra } => fiber_options(kappa, cap, d + 1, d + extra as u64),
                ValuePolicy::AtLeast { min_sum, cap, extra } => {
                    let m = min_sum.unwrap_or_else(col) as u64;
                    fiber_options(kappa, cap, m, m + extra as u64)
                }
                ValuePolicy::Bounded { cap } => fiber_options(kappa, cap, 0, u64::MAX),
                ValuePolicy::Constant { value } => vec![vec![value; kappa]],
            }
        })
        .collect()
}

pub fn value_space_size(options: &[Vec<Vec<u32>>]) -> u128 {
    options
        .iter()
        .try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128))
        .unwrap_or(u128::MAX)
}

/// Every value map drawn from `options`, guarded by [`ENUMERATION_LIMIT`].
pub fn enumerate_values(options: &[Vec<Vec<u32>>], kappa: usize) -> Result<Vec<ValueMap>> {
    let total = value_space_size(options);
    if total > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard {
            count: total,
            limit: ENUMERATION_LIMIT,
        });
    }
    let radix: Vec<usize> = options.iter().map(Vec::len).collect();
    if options.is_empty() {
        return Ok(vec![ValueMap::zeros(0, kappa)]);
    }
    Ok(product(&radix)
        .into_iter()
        .map(|idx| {
            let fibers: Vec<Vec<u32>> = idx.iter().enumerate().map(|(v, &i)| options[v][i].clone()).collect();
            ValueMap::from_fibers(&fibers).unwrap()
        })
        .collect())
}

/// One value map chosen uniformly from `options`; `None` if some vertex has
/// no admissible fiber.
pub fn sample_values<R: Rng>(options: &[Vec<Vec<u32>>], kappa: usize, rng: &mut R) -> Option<ValueMap> {
    if options.is_empty() {
        return Some(ValueMap::zeros(0, kappa));
    }
    let fibers: Option<Vec<Vec<u32>>> = options.iter().map(|o| o.choose(rng).cloned()).collect();
    Some(ValueMap::from_fibers(&fibers?).unwrap())
}
