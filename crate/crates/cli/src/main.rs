//! `netcomp`: classify target functions, bound computing capacities, build
//! and verify network codes, and search small code classes exhaustively.

mod inputs;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use netcomp::algebra::{Algebra, Elem};
use netcomp::codes::{read_code, verify_code, verify_code_random, write_code, NetworkCode, Verification};
use netcomp::codes::DEFAULT_VERIFY_BUDGET;
use netcomp::construct::{self, Construction};
use netcomp::functions::{TargetFunction, DEFAULT_RING_BUDGET};
use netcomp::network::{Network, DEFAULT_CUT_BUDGET};
use netcomp::search::{self, SearchKind, SearchOutcome, DEFAULT_SEARCH_BUDGET};
use rand::SeedableRng;
use report::Report;

#[derive(Parser)]
#[command(name = "netcomp", version, about = "Network computing toolkit")]
struct Cli {
    /// Seed for every randomized step; echoed in each report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place a target function in the injective / semi-injective / reducible picture.
    Classify {
        #[arg(long)]
        function: String,
        #[arg(long)]
        alphabet: String,
        /// Arity; optional for `table:` functions.
        #[arg(long)]
        sources: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RING_BUDGET)]
        ring_budget: u128,
    },
    /// Routing capacity, min cut and the capacity bounds for a network and target.
    Capacity {
        #[arg(long)]
        network: String,
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = DEFAULT_CUT_BUDGET)]
        cut_budget: u64,
    },
    /// Build one of the explicit codes and write it out.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Check a code file against a target on every message assignment.
    Verify {
        #[arg(long)]
        network: String,
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = DEFAULT_VERIFY_BUDGET)]
        budget: u128,
        /// Check this many seeded random assignments instead of all of them.
        #[arg(long)]
        random: Option<u64>,
    },
    /// Exhaustive search for a `(k, n)` code in a class.
    Search {
        #[arg(long)]
        network: String,
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        function: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Linear)]
        kind: Kind,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        /// Worker threads for the search (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Where to write a witness code when one is found.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// Koetter–Médard linear code for `sum a_i x_i` over a field.
    Km {
        #[arg(long)]
        network: String,
        /// Field size `q` or an algebra spec such as `field:4`.
        #[arg(long)]
        field: String,
        /// Comma-separated coefficients `a_1,...,a_s`.
        #[arg(long)]
        coeffs: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// `(1, lambda)` relay-network code for a reducible target.
    Relay {
        #[arg(long)]
        function: String,
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        sources: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RING_BUDGET)]
        ring_budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
    /// `(2, 1)` mod-q sum code on the reverse butterfly.
    ButterflyMod {
        #[arg(long)]
        q: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// `(2n, n')` arithmetic-sum code on the reverse butterfly.
    ButterflyArith {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(clap::Args)]
struct OutArgs {
    /// Code file to write; table files go next to it, prefixed by its stem.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the network the code runs on.
    #[arg(long)]
    network_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Linear,
    General,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<Report> {
    Ok(match cli.command {
        Command::Classify { function, alphabet, sources, ring_budget } => {
            classify(cli.seed, &function, &alphabet, sources, ring_budget)?
        }
        Command::Capacity { network, alphabet, function, cut_budget } => {
            capacity(cli.seed, &network, &alphabet, &function, cut_budget)?
        }
        Command::Construct { kind } => construct(cli.seed, kind)?,
        Command::Verify { network, code, alphabet, function, budget, random } => {
            verify(cli.seed, &network, &code, &alphabet, &function, budget, random)?
        }
        Command::Search { network, alphabet, function, k, n, kind, budget, jobs, out } => {
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("starting worker threads")?;
            }
            let kind = match kind {
                Kind::Linear => SearchKind::Linear,
                Kind::General => SearchKind::General,
            };
            run_search(cli.seed, &network, &alphabet, &function, k, n, kind, budget, out.as_deref())?
        }
    })
}

fn vector(v: &[Elem]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn classify(seed: u64, function: &str, alphabet: &str, sources: Option<usize>, budget: u128) -> Result<Report> {
    let alg = inputs::alphabet(alphabet)?;
    let f = inputs::function(function, &alg, sources)?;
    let c = f.classify(budget)?;
    let mut r = Report::new("classify", seed);
    r.put("function", f.name());
    r.put("alphabet", &alg);
    r.put("arity", f.arity());
    r.put("class", c.class);
    r.put("reducible", c.reduction.is_some());
    match &c.semi_injective_witness {
        Some(x) => r.put("semi_injective_witness", vector(x)),
        None => r.put("semi_injective_witness", "none"),
    }
    if let Some(w) = &c.reduction {
        r.put("lambda", w.lambda);
        r.put("T", &w.t);
        if let Some(d) = &w.direction {
            r.put("direction", vector(d));
        }
        r.note(format!("reducible with lambda = {}", w.lambda));
    }
    if let Some(l) = c.exhausted_lambda {
        r.put("exhausted_lambda", l);
        r.note(format!("not reducible (lambda <= {l} exhausted)"));
    }
    r.put("unresolved", c.unresolved);
    if c.unresolved {
        r.note(format!("reducibility scan exceeded the budget of {budget} matrices"));
    }
    if c.semi_injective_witness.is_some() {
        r.note("semi-injective, hence not reducible");
    }
    Ok(r)
}

fn capacity(seed: u64, network: &str, alphabet: &str, function: &str, budget: u64) -> Result<Report> {
    let net = inputs::network(network)?;
    let alg = inputs::alphabet(alphabet)?;
    let f = inputs::function(function, &alg, Some(net.num_sources()))?;
    let b = net.bound_report(&f, budget)?;
    let mut r = Report::new("capacity", seed);
    r.put("network", network);
    r.put("alphabet", &alg);
    r.put("function", f.name());
    r.rational("routing_capacity", b.routing_capacity);
    r.put("min_cut", b.min_cut);
    r.log("footprint_bound", &b.footprint.value);
    r.put("footprint_bound.cut", &b.footprint.cut);
    r.put("footprint_bound.footprint", b.footprint.footprint);
    r.log("min_cut_bound", &b.min_cut_bound);
    r.log("coding_gain_bound", &b.coding_gain_bound);
    r.put("class", b.class);
    for (i, s) in b.statements.iter().enumerate() {
        let key = format!("statement.{i}");
        r.bound(&key, &format!("{} {} ", s.quantity, s.relation), &s.value);
        r.put(&format!("{key}.rule"), s.rule);
        r.note(s.to_string());
    }
    Ok(r)
}

fn write_outputs(r: &mut Report, code: &mut NetworkCode, net: &Network, out: &OutArgs) -> Result<()> {
    if let Some(path) = &out.out {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("code");
        code.prefix_tables(stem);
        write_code(code, path)?;
        r.put("out", path.display());
    }
    if let Some(path) = &out.network_out {
        std::fs::write(path, net.serialize()).with_context(|| format!("writing {}", path.display()))?;
        r.put("network_out", path.display());
    }
    Ok(())
}

fn describe_construction(r: &mut Report, c: &Construction) {
    r.put("alphabet", &c.code.alphabet);
    r.put("function", c.function.name());
    r.put("k", c.code.k);
    r.put("n", c.code.n);
    r.rational("rate", c.code.rate());
    r.put("verification", verification_label(&c.verification));
    r.put("verification.mode", if c.exhaustive { "exhaustive" } else { "random" });
    if let Verification::Verified { assignments } = c.verification {
        r.put("verification.assignments", assignments);
    }
}

fn verification_label(v: &Verification) -> &'static str {
    if v.is_verified() {
        "verified"
    } else {
        "counterexample"
    }
}

fn construct(seed: u64, kind: ConstructKind) -> Result<Report> {
    let mut r = Report::new("construct", seed);
    match kind {
        ConstructKind::Km { network, field, coeffs, out } => {
            let net = inputs::network(&network)?;
            let alg = inputs::alphabet(&field)?;
            let coeffs: Vec<Elem> = coeffs
                .split(',')
                .map(|c| c.trim().parse())
                .collect::<Result<_, _>>()
                .context("--coeffs must be comma-separated element indices")?;
            let mut km = construct::km_construct(&net, &alg, &coeffs, seed)?;
            r.put("kind", "km");
            r.put("network", &network);
            describe_construction(&mut r, &km.construction);
            r.put("min_cut", km.c);
            r.put("degree", km.degree);
            r.put("extension", &km.extension);
            r.put("attempts", km.attempts);
            r.put("determinants", vector(&km.determinants));
            r.put("determinants_nonzero", km.determinants.iter().all(|&d| d != 0));
            match &km.minimizing_cut {
                Some(cut) => r.put("minimizing_cut", cut),
                None => r.put("minimizing_cut", "not enumerated"),
            }
            r.note(format!(
                "rate {} equals the min cut {} using GF({}^{})",
                km.rate(),
                km.c,
                alg.size(),
                km.degree
            ));
            write_outputs(&mut r, &mut km.construction.code, &net, &out)?;
        }
        ConstructKind::Relay { function, alphabet, sources, ring_budget, out } => {
            let alg = inputs::alphabet(&alphabet)?;
            let f = inputs::function(&function, &alg, sources)?;
            let witness = if alg.is_field() {
                f.reducible_over_field()?
            } else {
                f.reducible_over_ring(f.arity().saturating_sub(1), ring_budget)?
            };
            let Some(witness) = witness else { bail!("`{}` is not reducible over {alg}", f.name()) };
            let mut c = construct::relay_reduction_code(&f, &witness)?;
            r.put("kind", "relay");
            r.put("lambda", witness.lambda);
            r.put("T", &witness.t);
            describe_construction(&mut r, &c);
            r.rational("routing_capacity", c.network.routing_capacity());
            write_outputs(&mut r, &mut c.code, &c.network, &out)?;
        }
        ConstructKind::ButterflyMod { q, out } => {
            let mut c = construct::butterfly_mod_code(q)?;
            r.put("kind", "butterfly-mod");
            describe_construction(&mut r, &c);
            write_outputs(&mut r, &mut c.code, &c.network, &out)?;
        }
        ConstructKind::ButterflyArith { q, n, out } => {
            let mut c = construct::butterfly_arith_code(q, n)?;
            r.put("kind", "butterfly-arith");
            describe_construction(&mut r, &c);
            r.log("capacity", &construct::butterfly_capacity(q));
            write_outputs(&mut r, &mut c.code, &c.network, &out)?;
        }
    }
    Ok(r)
}

fn verify(
    seed: u64,
    network: &str,
    code: &Path,
    alphabet: &str,
    function: &str,
    budget: u128,
    random: Option<u64>,
) -> Result<Report> {
    let net = inputs::network(network)?;
    let alg: Algebra = inputs::alphabet(alphabet)?;
    let f: TargetFunction = inputs::function(function, &alg, Some(net.num_sources()))?;
    let c = read_code(code, &net, &alg)?;
    let v = match random {
        Some(samples) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            verify_code_random(&net, &c, &f, samples, &mut rng)?
        }
        None => verify_code(&net, &c, &f, budget)?,
    };
    let mut r = Report::new("verify", seed);
    r.put("network", network);
    r.put("code", code.display());
    r.put("alphabet", &alg);
    r.put("function", f.name());
    r.put("k", c.k);
    r.put("n", c.n);
    r.rational("rate", c.rate());
    r.put("mode", if random.is_some() { "random" } else { "exhaustive" });
    r.put("result", verification_label(&v));
    match &v {
        Verification::Verified { assignments } => r.put("assignments", assignments),
        Verification::Counterexample { messages, component, expected, decoded } => {
            r.put("component", component);
            r.put("expected", expected);
            r.put("decoded", decoded);
            r.note("counterexample messages (one row per source):");
            for (i, m) in messages.iter().enumerate() {
                r.put(&format!("message.{}", i + 1), vector(m));
                r.note(format!("  s{}: {}", i + 1, vector(m)));
            }
        }
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn run_search(
    seed: u64,
    network: &str,
    alphabet: &str,
    function: &str,
    k: usize,
    n: usize,
    kind: SearchKind,
    budget: u64,
    out: Option<&Path>,
) -> Result<Report> {
    let net = inputs::network(network)?;
    let alg = inputs::alphabet(alphabet)?;
    let f = inputs::function(function, &alg, Some(net.num_sources()))?;
    let outcome = search::search(kind, &net, &f, k, n, budget)?;
    let mut r = Report::new("search", seed);
    r.put("network", network);
    r.put("alphabet", &alg);
    r.put("function", f.name());
    r.put("kind", kind);
    r.put("k", k);
    r.put("n", n);
    r.put("result", outcome.label());
    r.put("evaluations", outcome.evaluations());
    match &outcome {
        SearchOutcome::Found { code, candidate, candidates, .. } => {
            r.put("candidates", candidates);
            r.put("witness_index", candidate);
            r.rational("rate", code.rate());
            if let Some(path) = out {
                let mut code = code.clone();
                let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("code");
                code.prefix_tables(stem);
                write_code(&code, path)?;
                r.put("out", path.display());
            }
        }
        SearchOutcome::Exhausted { candidates, .. } => {
            r.put("candidates", candidates);
            r.note(format!("no {kind} ({k}, {n}) code computes {} on this network", f.name()));
        }
        SearchOutcome::BudgetExceeded { candidates, remaining, .. } => {
            r.put("candidates", candidates);
            r.put("remaining", remaining);
            r.note(format!("budget of {budget} evaluations reached before covering the class"));
        }
    }
    Ok(r)
}
