//! Desk-scale verification: instance families, theorem checks run over them,
//! and reports that replay.

pub mod checks;
pub mod enumerate;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{Cover, ValueMap};
use crate::error::{Error, Result};
use crate::graph::{families, Graph};
use crate::io::CoverDoc;

pub use checks::{check, Outcome, Tally, Theorem};
pub use enumerate::{enumerate_covers, matching_count, MatchingPolicy, ValuePolicy, ENUMERATION_LIMIT};

/// Where base graphs come from. Random sources draw from the family seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "source")]
pub enum BaseSource {
    /// Names understood by [`families::by_name`].
    Named { names: Vec<String> },
    /// Connected random graphs.
    Random { count: usize, n_min: usize, n_max: usize, p: f64 },
    Trees { count: usize, n_min: usize, n_max: usize },
    /// Connected graphs with every vertex having at most `k` earlier neighbours.
    Degenerate { count: usize, n_min: usize, n_max: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFamily {
    pub bases: BaseSource,
    pub kappa: usize,
    pub matchings: MatchingPolicy,
    pub values: ValuePolicy,
    /// Value maps drawn per cover instead of enumerating all of them.
    pub values_per_cover: Option<usize>,
    /// For a base whose instance space exceeds [`ENUMERATION_LIMIT`], draw
    /// this many random instances instead of failing.
    pub sample_when_large: Option<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub base: String,
    pub cover: Cover,
    pub f: ValueMap,
}

impl InstanceFamily {
    fn base_graphs(&self, rng: &mut ChaCha8Rng) -> Result<Vec<(String, Graph)>> {
        let random = |count: usize, n_min: usize, n_max: usize, rng: &mut ChaCha8Rng, make: &dyn Fn(usize, &mut ChaCha8Rng) -> Graph| {
            (0..count)
                .map(|i| {
                    let n = rng.random_range(n_min..=n_max);
                    (format!("random-{i}"), make(n, rng))
                })
                .collect::<Vec<_>>()
        };
        Ok(match &self.bases {
            BaseSource::Named { names } => names
                .iter()
                .map(|name| {
                    families::by_name(name)
                        .map(|g| (name.clone(), g))
                        .ok_or_else(|| Error::Precondition(format!("unknown graph family {name:?}")))
                })
                .collect::<Result<_>>()?,
            &BaseSource::Random { count, n_min, n_max, p } => {
                random(count, n_min, n_max, rng, &|n, r| families::random_connected(n, p, r))
            }
            &BaseSource::Trees { count, n_min, n_max } => random(count, n_min, n_max, rng, &|n, r| families::random_tree(n, r)),
            &BaseSource::Degenerate { count, n_min, n_max, k } => {
                random(count, n_min, n_max, rng, &|n, r| families::random_k_degenerate(n, k, r))
            }
        })
    }

    /// Every instance of the family in a fixed order.
    pub fn instances(&self) -> Result<Vec<Instance>> {
        self.iter()?.collect()
    }

    /// Lazy form of [`InstanceFamily::instances`], in the same order. Bases
    /// are expanded one at a time so memory stays proportional to one base's
    /// covers and value maps rather than their product.
    pub fn iter(&self) -> Result<Instances<'_>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let bases = self.base_graphs(&mut rng)?;
        Ok(Instances {
            family: self,
            rng,
            bases: bases.into_iter(),
            current: None,
            failed: false,
        })
    }

    fn expand(&self, name: String, g: Graph, rng: &mut ChaCha8Rng) -> Result<Expansion> {
        let options = enumerate::value_options(&g, self.kappa, self.values);
        let per_cover = match self.values_per_cover {
            Some(k) => k as u128,
            None => enumerate::value_space_size(&options),
        };
        let total = enumerate::cover_space_size(&g, self.kappa, self.matchings).saturating_mul(per_cover);
        if total > ENUMERATION_LIMIT {
            return match self.sample_when_large {
                Some(k) => Ok(Expansion::Sampled {
                    name,
                    g,
                    options,
                    left: k,
                }),
                None => Err(Error::EnumerationGuard {
                    count: total,
                    limit: ENUMERATION_LIMIT,
                }),
            };
        }
        let covers = enumerate_covers(&g, self.kappa, self.matchings, rng)?;
        let values = match self.values_per_cover {
            None => Some(enumerate::enumerate_values(&options, self.kappa)?),
            Some(_) => None,
        };
        Ok(Expansion::Product {
            name,
            covers: covers.into_iter(),
            cover: None,
            values,
            options,
            pending: Vec::new().into_iter(),
        })
    }
}

enum Expansion {
    Sampled {
        name: String,
        g: Graph,
        options: Vec<Vec<Vec<u32>>>,
        left: usize,
    },
    Product {
        name: String,
        covers: std::vec::IntoIter<Cover>,
        cover: Option<Cover>,
        values: Option<Vec<ValueMap>>,
        options: Vec<Vec<Vec<u32>>>,
        pending: std::vec::IntoIter<ValueMap>,
    },
}

/// Iterator returned by [`InstanceFamily::iter`]. Stops after the first error.
pub struct Instances<'a> {
    family: &'a InstanceFamily,
    rng: ChaCha8Rng,
    bases: std::vec::IntoIter<(String, Graph)>,
    current: Option<Expansion>,
    failed: bool,
}

impl Instances<'_> {
    fn step(&mut self) -> Option<Instance> {
        let fam = self.family;
        let rng = &mut self.rng;
        match self.current.as_mut()? {
            Expansion::Sampled { name, g, options, left } => {
                let perfect = fam.matchings == MatchingPolicy::PerfectOnly;
                while *left > 0 {
                    *left -= 1;
                    let cover = enumerate::random_cover(g, fam.kappa, perfect, rng);
                    if let Some(f) = enumerate::sample_values(options, fam.kappa, rng) {
                        return Some(Instance {
                            base: name.clone(),
                            cover,
                            f,
                        });
                    }
                }
                None
            }
            Expansion::Product {
                name,
                covers,
                cover,
                values,
                options,
                pending,
            } => loop {
                if let (Some(c), Some(f)) = (cover.as_ref(), pending.next()) {
                    return Some(Instance {
                        base: name.clone(),
                        cover: c.clone(),
                        f,
                    });
                }
                let next = covers.next()?;
                let fs: Vec<ValueMap> = match values {
                    Some(all) => all.clone(),
                    None => (0..fam.values_per_cover.unwrap_or(0))
                        .filter_map(|_| enumerate::sample_values(options, fam.kappa, rng))
                        .collect(),
                };
                *pending = fs.into_iter();
                *cover = Some(next);
            },
        }
    }
}

impl Iterator for Instances<'_> {
    type Item = Result<Instance>;

    fn next(&mut self) -> Option<Result<Instance>> {
        if self.failed {
            return None;
        }
        loop {
            if let Some(inst) = self.step() {
                return Some(Ok(inst));
            }
            let (name, g) = self.bases.next()?;
            match self.family.expand(name, g, &mut self.rng) {
                Ok(e) => self.current = Some(e),
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Position of the instance in the family's order.
    pub index: u64,
    pub base: String,
    pub instance: CoverDoc,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub family: Option<InstanceFamily>,
    pub instances_checked: u64,
    pub skipped: u64,
    pub counterexamples: Vec<Counterexample>,
    pub stats: BTreeMap<String, u64>,
}

impl TheoremReport {
    pub fn new(theorem: Theorem) -> Self {
        TheoremReport {
            theorem,
            family: None,
            instances_checked: 0,
            skipped: 0,
            counterexamples: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// Folds one outcome in. Outcomes must be recorded in instance order.
    pub fn record(&mut self, index: u64, instance: &Instance, outcome: Outcome) {
        match outcome {
            Outcome::Skip => self.skipped += 1,
            Outcome::Pass(t) => {
                self.instances_checked += 1;
                for (k, v) in t {
                    *self.stats.entry(k).or_default() += v;
                }
            }
            Outcome::Fail(detail) => {
                self.instances_checked += 1;
                self.counterexamples.push(Counterexample {
                    index,
                    base: instance.base.clone(),
                    instance: CoverDoc::from_instance(&instance.cover, &instance.f),
                    detail,
                });
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }

    /// One JSON object per counterexample.
    pub fn json_lines(&self) -> String {
        let mut out = String::new();
        for cx in &self.counterexamples {
            let line = serde_json::json!({ "theorem": self.theorem, "counterexample": cx });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<18} {:>10}", "theorem", self.theorem.name());
        let _ = writeln!(out, "{:<18} {:>10}", "checked", self.instances_checked);
        let _ = writeln!(out, "{:<18} {:>10}", "skipped", self.skipped);
        let _ = writeln!(out, "{:<18} {:>10}", "counterexamples", self.counterexamples.len());
        for (k, v) in &self.stats {
            let _ = writeln!(out, "{k:<18} {v:>10}");
        }
        out
    }
}

/// Re-runs the check on a stored counterexample; `true` if it still fails.
pub fn replay(theorem: Theorem, cx: &Counterexample) -> Result<bool> {
    let (c, f) = cx.instance.to_instance()?;
    Ok(matches!(check(theorem, &c, &f), Outcome::Fail(_)))
}

/// Checks every instance, using `jobs` worker threads, and merges outcomes
/// in instance order.
pub fn run_instances(theorem: Theorem, instances: &[Instance], jobs: usize) -> TheoremReport {
    let mut report = TheoremReport::new(theorem);
    let pool = worker_pool(jobs);
    run_chunk(theorem, instances, 0, pool.as_ref(), &mut report);
    report
}

/// Instances checked per parallel batch when streaming a family.
const CHUNK: usize = 1 << 14;

fn worker_pool(jobs: usize) -> Option<rayon::ThreadPool> {
    (jobs > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
    })
}

fn run_chunk(theorem: Theorem, chunk: &[Instance], offset: u64, pool: Option<&rayon::ThreadPool>, report: &mut TheoremReport) {
    let outcomes: Vec<Outcome> = match pool {
        None => chunk.iter().map(|i| check(theorem, &i.cover, &i.f)).collect(),
        Some(pool) => pool.install(|| chunk.par_iter().map(|i| check(theorem, &i.cover, &i.f)).collect()),
    };
    for (idx, (inst, outcome)) in chunk.iter().zip(outcomes).enumerate() {
        report.record(offset + idx as u64, inst, outcome);
    }
}

/// Streams the family through the checks in batches; the report does not
/// depend on `jobs`.
pub fn run_family(theorem: Theorem, family: &InstanceFamily, jobs: usize) -> Result<TheoremReport> {
    let mut report = TheoremReport::new(theorem);
    let pool = worker_pool(jobs);
    let mut iter = family.iter()?;
    let mut offset = 0u64;
    loop {
        let chunk = iter.by_ref().take(CHUNK).collect::<Result<Vec<_>>>()?;
        if chunk.is_empty() {
            break;
        }
        run_chunk(theorem, &chunk, offset, pool.as_ref(), &mut report);
        offset += chunk.len() as u64;
    }
    report.family = Some(family.clone());
    Ok(report)
}

pub fn verify_theorem_mr(family: &InstanceFamily, jobs: usize) -> Result<TheoremReport> {
    run_family(Theorem::Mr, family, jobs)
}

pub fn verify_lemma_ge(family: &InstanceFamily, jobs: usize) -> Result<TheoremReport> {
    run_family(Theorem::Ge, family, jobs)
}

pub fn verify_smr_msmr(family: &InstanceFamily, jobs: usize) -> Result<TheoremReport> {
    run_family(Theorem::SmrMsmr, family, jobs)
}

pub fn verify_theorem_l_and_gallai(family: &InstanceFamily, jobs: usize) -> Result<TheoremReport> {
    run_family(Theorem::LGallai, family, jobs)
}

pub fn verify_theorem_5_1(family: &InstanceFamily, m: Option<u32>, jobs: usize) -> Result<TheoremReport> {
    run_family(Theorem::T51 { m }, family, jobs)
}

/// Named bases `P2..P{max_n}`, `C3..C{max_n}`, `K4` when `max_n >= 4`, plus
/// the bowtie when `max_n >= 5`.
pub fn default_bases(max_n: usize) -> Vec<String> {
    let mut names = Vec::new();
    for n in 2..=max_n {
        names.push(format!("P{n}"));
    }
    for n in 3..=max_n {
        names.push(format!("C{n}"));
    }
    for n in 4..=max_n.min(4) {
        names.push(format!("K{n}"));
    }
    if max_n >= 5 {
        names.push("bowtie".into());
    }
    names
}
