//! The `sfdt` command line.
//!
//! Exit codes: 0 success or "yes", 1 "no" (exhausted, not constructible,
//! counterexamples found), 2 usage error, 3 unreadable or invalid input,
//! 4 search aborted by a limit.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::construct::is_constructible;
use crate::cover::{Cover, Transversal, ValueMap};
use crate::degeneracy;
use crate::error::Error;
use crate::harness::{self, BaseSource, InstanceFamily, MatchingPolicy, Theorem, ValuePolicy};
use crate::io;
use crate::reductions::{self, PartitionSpec};
use crate::solver::{self, SolveOptions, SolveResult, SolveStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_ABORTED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "sfdt", version, about = "Strictly f-degenerate transversals of valued covers")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "SFDT_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Write the JSON result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct Limits {
    /// Stop after expanding this many search nodes (exit 4).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: Option<u64>,

    /// Stop after this many seconds (exit 4).
    #[arg(long, value_parser = positive_seconds)]
    pub timeout_s: Option<f64>,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err("timeout must be positive".into())
    }
}

impl Limits {
    fn options(self) -> SolveOptions {
        SolveOptions {
            max_nodes: self.max_nodes,
            timeout: self.timeout_s.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for an SFDT of a valued cover (JSON; `-` reads standard input).
    Solve {
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Search for an SFDT with deg_R(v, q) <= f(v, q) at every pick.
    SolveBounded {
        input: PathBuf,
        /// Require deg_R(v, q) < f(v, q); needs every fiber sum above its degree.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Decide constructibility and print the construction tree.
    Recognize { input: PathBuf },
    /// Check that a transversal induces a strictly f-degenerate subgraph.
    CheckDegenerate {
        input: PathBuf,
        /// 1-based picks, as a JSON array or comma separated.
        #[arg(long)]
        witness: String,
    },
    /// Encode a colouring problem as a valued cover.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Run a theorem over a desk-scale instance family.
    Verify {
        #[arg(value_enum)]
        theorem: VerifyTheorem,
        /// Largest base graph.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(2..=6))]
        max_n: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=3))]
        kappa: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        /// Random instances per base when a space is too large to enumerate.
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
    },
    /// Generate named valued covers.
    #[command(subcommand)]
    Gen(Gen),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyTheorem {
    Mr,
    Ge,
    Smr,
    Gallai,
    T51,
}

#[derive(Debug, Subcommand)]
pub enum Reduce {
    /// List colouring: edge list plus `v: c1 c2 ...` lists.
    List {
        graph: PathBuf,
        lists: PathBuf,
        #[arg(long)]
        kappa: usize,
    },
    /// Signed colouring with `k` colours: edge list with `u v ±1` lines.
    Signed {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Partition into parts with `G[V_i]` strictly `f_i`-degenerate; rows `v: f_1 .. f_κ`.
    Partition { graph: PathBuf, values: PathBuf },
    /// Colourings whose classes induce forests.
    Forested {
        graph: PathBuf,
        lists: PathBuf,
        #[arg(long)]
        kappa: usize,
    },
    /// Check that a valued cover is a DP-colouring instance with `t` colours.
    Dp {
        input: PathBuf,
        #[arg(long)]
        t: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum Gen {
    /// Identity matchings over `C_n`, f ≡ 1.
    Ladder { n: usize },
    /// `C_n` with one crossed edge, f ≡ 1.
    Mobius { n: usize },
    /// Identity matchings over `K_p`, values per layer (default `p-1` on layer 1).
    Tilde {
        p: usize,
        #[arg(long, default_value_t = 2)]
        kappa: usize,
        /// Comma-separated value of each layer.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<u32>>,
    },
    /// Identity matchings over an edge-list graph, f ≡ value.
    Id {
        graph: PathBuf,
        #[arg(long)]
        kappa: usize,
        #[arg(long, default_value_t = 1)]
        value: u32,
    },
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            msg: e.to_string(),
        }
    }
}

fn input_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        msg: format!("cannot read {}: {e}", path.display()),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| input_failure(path, e))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| input_failure(path, e))
}

fn read_instance(path: &Path) -> Result<(Cover, ValueMap), Failure> {
    Ok(io::read_cover_json(&read_text(path)?)?)
}

fn instance_json(c: &Cover, f: &ValueMap) -> Value {
    serde_json::to_value(io::CoverDoc::from_instance(c, f)).expect("documents serialise")
}

fn solve_json(res: &SolveResult) -> Value {
    let mut out = json!({
        "status": res.status,
        "nodes": res.nodes_expanded,
    });
    if let Some(r) = &res.witness {
        out["witness"] = json!(r.one_based());
    }
    out
}

fn status_code(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Found => EXIT_OK,
        SolveStatus::Exhausted => EXIT_NO,
        SolveStatus::Aborted => EXIT_ABORTED,
    }
}

fn parse_witness(text: &str, n: usize) -> Result<Transversal, Failure> {
    let bad = |msg: String| Failure { code: EXIT_INPUT, msg };
    let picks: Vec<usize> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| bad(format!("witness: {e}")))?
    } else {
        text.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse().map_err(|_| bad(format!("witness entry {t:?} is not a number"))))
            .collect::<Result<_, _>>()?
    };
    if picks.len() != n {
        return Err(Error::TransversalShape { expected: n, got: picks.len() }.into());
    }
    if picks.contains(&0) {
        return Err(bad("witness picks are 1-based".into()));
    }
    Ok(Transversal::new(picks.into_iter().map(|q| q - 1).collect()))
}

fn family(theorem: VerifyTheorem, max_n: usize, kappa: usize, samples: usize, seed: u64) -> (Theorem, InstanceFamily) {
    let named = BaseSource::Named {
        names: harness::default_bases(max_n),
    };
    let base = InstanceFamily {
        bases: named,
        kappa,
        matchings: MatchingPolicy::PerfectOnly,
        values: ValuePolicy::DegreeEqual { cap: 3 },
        values_per_cover: None,
        sample_when_large: Some(samples),
        seed,
    };
    let ge_values = ValuePolicy::DegreeGe { cap: 3, extra: 1 };
    match theorem {
        VerifyTheorem::Mr => (Theorem::Mr, base),
        VerifyTheorem::Gallai => (Theorem::LGallai, base),
        VerifyTheorem::Ge => (
            Theorem::Ge,
            InstanceFamily {
                matchings: MatchingPolicy::All,
                values: ge_values,
                ..base
            },
        ),
        VerifyTheorem::Smr => (Theorem::SmrMsmr, InstanceFamily { values: ge_values, ..base }),
        VerifyTheorem::T51 => (
            Theorem::T51 { m: None },
            InstanceFamily {
                bases: BaseSource::Degenerate {
                    count: samples,
                    n_min: 2,
                    n_max: max_n,
                    k: 2,
                },
                matchings: MatchingPolicy::Sampled { count: 2 },
                values: ValuePolicy::AtLeast {
                    min_sum: None,
                    cap: 3,
                    extra: 1,
                },
                values_per_cover: Some(2),
                ..base
            },
        ),
    }
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<(Value, i32), Failure> {
    match &cli.command {
        Command::Solve { input, limits } => {
            let (c, f) = read_instance(input)?;
            let res = solver::find_sfdt_with(&c, &f, limits.options());
            Ok((solve_json(&res), status_code(res.status)))
        }
        Command::SolveBounded { input, strict, limits } => {
            let (c, f) = read_instance(input)?;
            let res = if *strict {
                solver::find_sfdt_strictly_bounded_with(&c, &f, limits.options())?
            } else {
                solver::find_sfdt_bounded_with(&c, &f, limits.options())
            };
            let mut out = solve_json(&res);
            out["bounded"] = json!(res.bounded);
            out["strictly_bounded"] = json!(res.strictly_bounded);
            if let Some(t) = &res.descent {
                out["descent"] = json!(t.deficiencies);
            }
            Ok((out, status_code(res.status)))
        }
        Command::Recognize { input } => {
            let (c, f) = read_instance(input)?;
            Ok(match is_constructible(&c, &f)? {
                Some(tree) => (json!({"status": "constructible", "tree": tree}), EXIT_OK),
                None => (json!({"status": "not-constructible"}), EXIT_NO),
            })
        }
        Command::CheckDegenerate { input, witness } => {
            let (c, f) = read_instance(input)?;
            c.check_values(&f)?;
            let r = parse_witness(witness, c.n())?;
            c.check_transversal(&r)?;
            let h = c.induced_on_transversal(&r);
            Ok(match degeneracy::removal_order(h.adjacency(), &h.values(&f)) {
                Some(order) => {
                    let vertices: Vec<usize> = order.order.iter().map(|&i| h.vertices()[i].v).collect();
                    (json!({"status": "yes", "removal_order": vertices}), EXIT_OK)
                }
                None => (json!({"status": "no"}), EXIT_NO),
            })
        }
        Command::Reduce(r) => reduce(r),
        Command::Verify {
            theorem,
            max_n,
            kappa,
            jobs,
            samples,
        } => {
            let (thm, fam) = family(*theorem, *max_n as usize, *kappa as usize, *samples as usize, cli.seed);
            let report = harness::run_family(thm, &fam, *jobs as usize)?;
            let _ = stderr.write_all(report.summary().as_bytes());
            let code = if report.passed() { EXIT_OK } else { EXIT_NO };
            let status = if report.passed() { "ok" } else { "counterexamples" };
            Ok((json!({"status": status, "report": report}), code))
        }
        Command::Gen(g) => generate(g),
    }
}

fn reduce(r: &Reduce) -> Result<(Value, i32), Failure> {
    let (c, f) = match r {
        Reduce::List { graph, lists, kappa } | Reduce::Forested { graph, lists, kappa } => {
            let g = io::parse_edge_list(&read_text(graph)?)?;
            let l = io::parse_list_assignment(&read_text(lists)?, g.n(), *kappa)?;
            if matches!(r, Reduce::List { .. }) {
                reductions::encode_list_coloring(&g, &l)?
            } else {
                reductions::encode_forested(&g, &l)?
            }
        }
        Reduce::Signed { graph, k } => {
            let sg = io::parse_signed_edge_list(&read_text(graph)?)?;
            reductions::encode_signed(&sg, *k)?
        }
        Reduce::Partition { graph, values } => {
            let g = io::parse_edge_list(&read_text(graph)?)?;
            let rows = io::parse_value_rows(&read_text(values)?, g.n())?;
            reductions::encode_partition(&g, &PartitionSpec::from_rows(&rows)?)?
        }
        Reduce::Dp { input, t } => {
            let (c, f) = read_instance(input)?;
            return Ok(match reductions::check_dp_instance(&c, &f, *t) {
                Ok(()) => (json!({"status": "valid"}), EXIT_OK),
                Err(e) => (json!({"status": "invalid", "reason": e.to_string()}), EXIT_NO),
            });
        }
    };
    Ok((instance_json(&c, &f), EXIT_OK))
}

fn generate(g: &Gen) -> Result<(Value, i32), Failure> {
    let (c, f) = match g {
        Gen::Ladder { n } => (Cover::circular_ladder(*n)?, ValueMap::constant(*n, 2, 1)),
        Gen::Mobius { n } => (Cover::mobius_ladder(*n)?, ValueMap::constant(*n, 2, 1)),
        Gen::Tilde { p, kappa, values } => {
            let layers = match values {
                Some(v) if v.len() != *kappa => {
                    return Err(Error::ValueShape {
                        expected: *kappa,
                        got: v.len(),
                    }
                    .into())
                }
                Some(v) => v.clone(),
                None => {
                    let mut v = vec![0; *kappa];
                    if let Some(first) = v.first_mut() {
                        *first = p.saturating_sub(1) as u32;
                    }
                    v
                }
            };
            (Cover::tilde_complete(*p, *kappa)?, ValueMap::per_layer(*p, &layers))
        }
        Gen::Id { graph, kappa, value } => {
            let g = io::parse_edge_list(&read_text(graph)?)?;
            let n = g.n();
            (Cover::id_cover(&g, *kappa)?, ValueMap::constant(n, *kappa, *value))
        }
    };
    Ok((instance_json(&c, &f), EXIT_OK))
}

/// Parses `args` (including the program name) and runs the command. JSON goes
/// to `stdout` (or `--output`), diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, stderr) {
        Ok((value, code)) => {
            let mut text = value.to_string();
            text.push('\n');
            let written = match &cli.output {
                Some(path) => fs::write(path, &text),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_INPUT;
            }
            code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.msg);
            f.code
        }
    }
}
