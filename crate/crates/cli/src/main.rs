//! `oddcycle`: command-line front end.
//!
//! Exit status: 0 on success, 1 when the computation ends in a failure
//! outcome (structure failure, exhausted budget, certificate that does not
//! hold), 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use oddcycle_core::bound::{bipartite_threshold, certify_bound, ell_c_bound, grid_search, Region};
use oddcycle_core::coloring::{hom_find, HomOutcome};
use oddcycle_core::cycles::audit_short_cycle_proximity;
use oddcycle_core::decomposition::{decompose, verify_decomposition};
use oddcycle_core::experiment::{run_experiment, ExperimentConfig};
use oddcycle_core::graph::{families, generate_gnp};
use oddcycle_core::oracle::{circulant, circular_chromatic, hom_search_with, ChiC, HomSearchResult, SearchOptions, DEFAULT_BUDGET};
use oddcycle_core::{odd_girth, Graph};
use serde_json::json;

#[derive(Parser)]
#[command(name = "oddcycle", version, about = "Odd-cycle homomorphisms of sparse random graphs")]
struct Cli {
    /// Seed for random graph generation (experiments use seed + i for trial i).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Where the input graph comes from: a file, or `G(n, c/n)` from `--seed`.
#[derive(Args)]
struct GraphSource {
    /// Edge-list file ("n m" header, then "u v" per line).
    #[arg(long, conflicts_with_all = ["n", "c"])]
    input: Option<PathBuf>,
    #[arg(long, requires = "c")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    c: Option<f64>,
}

impl GraphSource {
    fn load(&self, seed: u64) -> anyhow::Result<Graph> {
        match (&self.input, self.n, self.c) {
            (Some(p), _, _) => Ok(Graph::read_edge_list(p)?),
            (None, Some(n), Some(c)) => Ok(generate_gnp(n, c, seed)?),
            _ => Err(usage("give --input FILE or --n N --c C")),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate G(n, c/n) as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Shortest odd cycle.
    OddGirth {
        #[command(flatten)]
        graph: GraphSource,
    },
    /// Homomorphism to C_{2l+1}, or an odd cycle shorter than 2l+1.
    HomFind {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        ell: usize,
    },
    /// Exact homomorphism search to C_{2l+1} or to the circulant C_{p,q}.
    Oracle {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, conflicts_with_all = ["p", "q"], required_unless_present = "p")]
        ell: Option<usize>,
        #[arg(long, requires = "q")]
        p: Option<usize>,
        #[arg(long, requires = "p")]
        q: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Exact circular chromatic number of a small graph.
    ChiC {
        #[command(flatten)]
        graph: GraphSource,
        /// Largest numerator tried (default: number of vertices).
        #[arg(long)]
        p_max: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Forest + separated edges decomposition.
    Decompose {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        k: usize,
        /// Cycle length above which long arcs are cut (default ceil(0.05 ln n)).
        #[arg(long)]
        long_threshold: Option<usize>,
        /// Instead, audit short cycles: report pairs of cycles shorter than L
        /// at distance below L, as a JSON array.
        #[arg(long, value_name = "L")]
        audit_short: Option<usize>,
    },
    /// Certified grid maximisation of the five-class rate b(c, .).
    BoundGrid {
        #[arg(long, default_value_t = 4.0)]
        c: f64,
        #[arg(long, default_value_t = 0.0008)]
        delta: f64,
        /// Level to certify: sup b < rho.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = 0.06)]
        min_class: f64,
        #[arg(long, default_value_t = 0.6)]
        max_ind_set: f64,
    },
    /// Largest induced bipartite fraction and the odd-cycle bound it gives.
    BipartiteThreshold {
        #[arg(long)]
        c: f64,
    },
    /// Monte-Carlo trials of hom-find with a report against the odd-girth law.
    Experiment {
        /// Flat key=value file; flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long)]
        trials: Option<u64>,
        /// Cross-check small instances with exact search.
        #[arg(long)]
        oracle: bool,
        /// Record wall time per trial (makes the CSV non-reproducible).
        #[arg(long)]
        timing: bool,
        /// Directory for trials.csv and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: &str) -> anyhow::Error {
    Usage(msg.to_string()).into()
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Gen { n, c, output } => {
            let g = generate_gnp(n, c, seed)?;
            match output {
                Some(p) => g.write_edge_list(&p)?,
                None if cli.json => print_json(&g)?,
                None => print!("{}", g.to_edge_list_string()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::OddGirth { graph } => {
            let g = graph.load(seed)?;
            let og = odd_girth(&g);
            if cli.json {
                print_json(&json!({
                    "odd_girth": og.as_ref().map(|c| c.len()),
                    "cycle": og,
                }))?;
            } else {
                match og {
                    Some(c) => println!("{}", c.len()),
                    None => println!("none"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::HomFind { graph, ell } => {
            let g = graph.load(seed)?;
            let out = hom_find(&g, ell)?;
            out.check(&g, ell).context("produced outcome failed re-verification")?;
            print_json(&out)?;
            Ok(status(!matches!(out, HomOutcome::StructureFailure(_))))
        }
        Cmd::Oracle { graph, ell, p, q, budget } => {
            let g = graph.load(seed)?;
            let (h, opts) = match (ell, p, q) {
                (Some(l), _, _) if l >= 1 => (families::cycle(2 * l + 1), SearchOptions { budget, fix_first: true }),
                (None, Some(p), Some(q)) => (circulant(p, q)?, SearchOptions { budget, fix_first: true }),
                _ => return Err(usage("need --ell >= 1 or both --p and --q")),
            };
            let r = hom_search_with(&g, &h, opts);
            if cli.json {
                print_json(&r)?;
            } else {
                match &r {
                    HomSearchResult::Found(m) => println!("found {:?}", m.mapping),
                    HomSearchResult::NoHom => println!("none"),
                    HomSearchResult::BudgetExceeded { nodes } => println!("indeterminate after {nodes} nodes"),
                }
            }
            Ok(status(r.decided().is_some()))
        }
        Cmd::ChiC { graph, p_max, budget } => {
            let g = graph.load(seed)?;
            let r = circular_chromatic(&g, p_max, budget)?;
            if cli.json {
                print_json(&r)?;
            } else {
                match &r {
                    ChiC::Exact(f) => println!("{}/{}", f.p, f.q),
                    ChiC::Indeterminate { undecided, upper } => println!(
                        "indeterminate: {} undecided fraction(s), upper bound {:?}",
                        undecided.len(),
                        upper.map(|f| format!("{}/{}", f.p, f.q))
                    ),
                }
            }
            Ok(status(matches!(r, ChiC::Exact(_))))
        }
        Cmd::Decompose { graph, k, long_threshold, audit_short } => {
            let g = graph.load(seed)?;
            if let Some(l) = audit_short {
                let v = audit_short_cycle_proximity(&g, l, l)?;
                print_json(&v)?;
                return Ok(status(v.is_empty()));
            }
            match decompose(&g, k, long_threshold)? {
                Ok(d) => {
                    let report = verify_decomposition(&g, &d);
                    if !report.all_ok() {
                        bail!("decomposition failed re-verification: {report:?}");
                    }
                    print_json(&d)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(f) => {
                    print_json(&f)?;
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::BoundGrid { c, delta, rho, min_class, max_ind_set } => {
            let region = Region { min_class, max_ind_set };
            let r = grid_search(c, delta, region)?;
            let cert = certify_bound(&r, rho);
            let mut v = serde_json::to_value(&r)?;
            let obj = v.as_object_mut().expect("report is an object");
            obj.insert("rho".into(), json!(cert.rho));
            obj.insert("epsilon".into(), json!(cert.epsilon));
            obj.insert("holds".into(), json!(cert.holds));
            obj.insert("certificate".into(), serde_json::to_value(cert)?);
            print_json(&v)?;
            Ok(status(cert.holds))
        }
        Cmd::BipartiteThreshold { c } => {
            let beta = bipartite_threshold(c)?;
            let bound = ell_c_bound(c)?;
            if cli.json {
                print_json(&json!({ "c": c, "beta_star": beta, "odd_cycle_bound": bound }))?;
            } else {
                match bound {
                    Some(b) => println!(
                        "beta* = {:.12}; no homomorphism to C_L for odd L >= {} (l >= {})",
                        b.beta_star, b.min_cycle_length, b.ell
                    ),
                    None => println!("no threshold: the bipartite bound never drops below 1 at c = {c}"),
                }
            }
            Ok(status(beta.is_some()))
        }
        Cmd::Experiment { config, n, c, ell, trials, oracle, timing, out } => {
            let mut cfg = ExperimentConfig { seed, ..Default::default() };
            if let Some(p) = &config {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                cfg.apply_kv(&text)?;
            }
            // flags win over the file; --seed only when given explicitly
            if std::env::args().any(|a| a == "--seed" || a.starts_with("--seed=")) {
                cfg.seed = seed;
            }
            if let Some(x) = n {
                cfg.n = x;
            }
            if let Some(x) = c {
                cfg.c = x;
            }
            if let Some(x) = ell {
                cfg.ell = x;
            }
            if let Some(x) = trials {
                cfg.trials = x;
            }
            cfg.oracle |= oracle;
            cfg.timing |= timing;
            let e = run_experiment(&cfg)?;
            if let Some(dir) = out {
                let (csv, json) = e.write(&dir)?;
                eprintln!("wrote {} and {}", csv.display(), json.display());
            }
            print_json(&e.report)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let s = cause.to_string();
                if !msg.contains(&s) {
                    msg = format!("{msg}: {s}");
                }
            }
            eprintln!("error: {msg}");
            let input_error = e.downcast_ref::<Usage>().is_some()
                || e.downcast_ref::<oddcycle_core::Error>().is_some_and(|e| {
                    !matches!(e, oddcycle_core::Error::Inconsistent(_))
                });
            ExitCode::from(if input_error { 2 } else { 1 })
        }
    }
}
