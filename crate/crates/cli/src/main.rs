mod output;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mahlerlab::identities::{default_sample_points, list_identity_cases, verify_identity};
use mahlerlab::liouville::exponent::approximation_exponent;
use mahlerlab::liouville::witness::{
    find_witness, verify_witness, verify_witness_json, Inequality, WitnessCheck, WitnessVerdict,
};
use mahlerlab::mahler::{class_signature, geometric_grid, wn_naive, wn_search, wn_sweep, Store};
use mahlerlab::maillet::{image_exponent_experiment, RationalFunction};
use mahlerlab::numeric::complex::ComplexBall;
use mahlerlab::numeric::functions::{eval_fn, FunctionTag};
use mahlerlab::numeric::spec::NumberSpec;
use num_bigint::BigInt;
use serde_json::{json, Value};

use output::Format;

#[derive(Parser)]
#[command(name = "mahlerlab", version, about = "Liouville witnesses, Mahler w_n sweeps and identity checks")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(2..=16384))]
    prec: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// JSONL record store used by `wn sweep` and `classify`.
    #[arg(long, global = true, env = "MAHLERLAB_STORE", default_value = "mahlerlab.jsonl")]
    store: PathBuf,

    /// Print computed/loaded counters to stderr.
    #[arg(long, global = true)]
    stats: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a certified witness 0 < |xi - p/q| < q^-n.
    Witness {
        #[arg(long)]
        xi: NumberSpec,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Check a witness given by flags, a JSON file, or JSON on stdin.
    VerifyWitness(VerifyArgs),
    /// Measure -log|xi - p/q| / log q.
    Exponent {
        #[arg(long)]
        xi: NumberSpec,
        #[arg(long, allow_hyphen_values = true)]
        p: BigInt,
        #[arg(long)]
        q: BigInt,
    },
    /// Compute w_n(xi, H).
    Wn(WnArgs),
    /// Estimate w_n exponents and report a classification signature.
    Classify {
        #[arg(long)]
        xi: NumberSpec,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Identity catalog.
    #[command(subcommand)]
    Identities(IdentitiesCommand),
    /// Approximation exponents of R(L) for a rational function R and lacunary L.
    Maillet {
        #[arg(long = "R", short = 'R', default_value = "(t^2 + 1)/(2*t)")]
        r: RationalFunction,
        #[arg(long)]
        xi: NumberSpec,
        #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2, 3, 4])]
        depths: Vec<u32>,
    },
    /// Enclose a number, or an elementary function at it.
    Eval {
        #[arg(long)]
        xi: NumberSpec,
        #[arg(long = "fn")]
        function: Option<FunctionTag>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Witness JSON file; `-` reads stdin.
    #[arg(long, conflicts_with_all = ["xi", "n", "p", "q"])]
    file: Option<PathBuf>,
    #[arg(long, requires_all = ["n", "p", "q"])]
    xi: Option<NumberSpec>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<BigInt>,
    #[arg(long)]
    q: Option<BigInt>,
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct WnArgs {
    #[command(subcommand)]
    sweep: Option<WnCommand>,
    #[arg(long)]
    xi: Option<NumberSpec>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    #[arg(long = "H")]
    h: Option<BigInt>,
    /// Full enumeration instead of the pruned search.
    #[arg(long)]
    naive: bool,
}

#[derive(Subcommand)]
enum WnCommand {
    /// Evaluate w_n over a grid of heights, resuming from the store.
    Sweep {
        #[arg(long)]
        xi: NumberSpec,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Explicit heights, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "factor"])]
    grid: Option<Vec<BigInt>>,
    #[arg(long, requires = "to")]
    from: Option<BigInt>,
    #[arg(long, requires = "from")]
    to: Option<BigInt>,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    factor: u32,
}

#[derive(Subcommand)]
enum IdentitiesCommand {
    List,
    Verify {
        #[arg(long)]
        case: String,
        /// Sample point; the default sample points when omitted.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<NumberSpec>,
        /// Branches k in -K..=K for log-based cases.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(..=64))]
        branches: u32,
    },
}

enum Failure {
    Usage(String),
    Compute(mahlerlab::Error),
}

impl From<mahlerlab::Error> for Failure {
    fn from(e: mahlerlab::Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome = Result<Vec<Value>, Failure>;

impl GridArgs {
    fn heights(&self) -> Result<Vec<BigInt>, Failure> {
        match (&self.grid, &self.from, &self.to) {
            (Some(g), _, _) => Ok(g.clone()),
            (None, Some(a), Some(b)) => geometric_grid(a, self.factor, b).map_err(|e| Failure::Usage(e.to_string())),
            _ => Err(Failure::Usage("give --grid or --from/--to".into())),
        }
    }
}

fn check_json(xi: &NumberSpec, n: u32, p: &BigInt, q: &BigInt, c: &WitnessCheck, prec: u32) -> Value {
    let (verdict, which) = match &c.verdict {
        WitnessVerdict::Certified => ("Certified", None),
        WitnessVerdict::Refuted { which, .. } => (
            "Refuted",
            Some(match which {
                Inequality::Lower => "lower",
                Inequality::Upper => "upper",
            }),
        ),
        WitnessVerdict::Undecided => ("Undecided", None),
    };
    json!({
        "xi": xi.to_string(),
        "n": n,
        "p": p.to_string(),
        "q": q.to_string(),
        "verdict": verdict,
        "which": which,
        "distance": c.distance.to_string_prec(prec),
    })
}

fn open_store(cli: &Cli) -> Result<Store, Failure> {
    Ok(Store::open(&cli.store)?)
}

fn run(cli: &Cli) -> Outcome {
    let prec = cli.prec;
    match &cli.command {
        Command::Witness { xi, n } => {
            let NumberSpec::Lacunary(l) = xi else {
                return Err(Failure::Usage(format!("`{xi}` is not a lacunary number")));
            };
            let w = find_witness(l, *n, prec)?;
            Ok(vec![serde_json::to_value(w.to_json(prec)).expect("serializable")])
        }
        Command::VerifyWitness(a) => {
            if let Some(path) = &a.file {
                let mut text = String::new();
                if path.as_os_str() == "-" {
                    std::io::stdin()
                        .read_to_string(&mut text)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                } else {
                    text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                }
                let w: mahlerlab::liouville::witness::WitnessJson =
                    serde_json::from_str(&text).map_err(|e| Failure::Compute(mahlerlab::Error::Parse {
                        pos: e.column(),
                        msg: e.to_string(),
                    }))?;
                let (p, q) = w.integers()?;
                let c = verify_witness_json(&text, prec)?;
                return Ok(vec![check_json(&w.xi, w.n, &p, &q, &c, prec)]);
            }
            match (&a.xi, a.n, &a.p, &a.q) {
                (Some(xi), Some(n), Some(p), Some(q)) => {
                    let c = verify_witness(xi, n, p, q, prec)?;
                    Ok(vec![check_json(xi, n, p, q, &c, prec)])
                }
                _ => Err(Failure::Usage("give --file or all of --xi --n --p --q".into())),
            }
        }
        Command::Exponent { xi, p, q } => {
            let m = approximation_exponent(xi, p, q, prec)?;
            Ok(vec![json!({
                "xi": xi.to_string(),
                "p": m.p.to_string(),
                "q": m.q.to_string(),
                "exponent": m.exponent.to_string_prec(prec),
            })])
        }
        Command::Wn(a) => match &a.sweep {
            Some(WnCommand::Sweep { xi, n, grid }) => {
                let heights = grid.heights()?;
                let mut store = open_store(cli)?;
                let s = wn_sweep(xi, *n, &heights, prec, &mut store)?;
                if cli.stats {
                    eprintln!("computed={} loaded={}", s.computed, s.loaded);
                }
                Ok(s.records.iter().map(output::record).collect())
            }
            None => {
                let (Some(xi), Some(n), Some(h)) = (&a.xi, a.n, &a.h) else {
                    return Err(Failure::Usage("wn needs --xi, --n and --H".into()));
                };
                let r = if a.naive {
                    wn_naive(xi, n, h, prec)?
                } else {
                    wn_search(xi, n, h, prec)?
                };
                if cli.stats {
                    eprintln!("computed=1 loaded=0");
                }
                Ok(vec![output::record(&r)])
            }
        },
        Command::Classify { xi, n_max, grid } => {
            let heights = grid.heights()?;
            let mut store = open_store(cli)?;
            let before = store.len();
            let r = class_signature(xi, *n_max, &heights, prec, &mut store)?;
            if cli.stats {
                eprintln!("computed={} loaded={}", store.len() - before, before);
            }
            Ok(vec![serde_json::to_value(r).expect("serializable")])
        }
        Command::Identities(IdentitiesCommand::List) => Ok(list_identity_cases()
            .iter()
            .map(|c| {
                json!({
                    "id": c.id,
                    "description": c.description,
                    "expected": c.expected,
                    "domain": c.domain,
                    "multivalued": c.multivalued,
                    "polynomial": c.polynomial.as_ref().map(|p| p.to_string()),
                })
            })
            .collect()),
        Command::Identities(IdentitiesCommand::Verify { case, alpha, branches }) => {
            let points = match alpha {
                Some(a) => vec![a.clone()],
                None => default_sample_points(),
            };
            let mut out = Vec::new();
            for a in &points {
                for v in verify_identity(case, a, prec, *branches)? {
                    out.push(serde_json::to_value(v.to_json()).expect("serializable"));
                }
            }
            Ok(out)
        }
        Command::Maillet { r, xi, depths } => {
            let NumberSpec::Lacunary(l) = xi else {
                return Err(Failure::Usage(format!("`{xi}` is not a lacunary number")));
            };
            let rows = image_exponent_experiment(r, l, depths, prec)?;
            Ok(rows
                .iter()
                .map(|row| serde_json::to_value(row.to_json(r, l, prec)).expect("serializable"))
                .collect())
        }
        Command::Eval { xi, function } => {
            let v = match function {
                None => json!({ "xi": xi.to_string(), "fn": null, "value": xi.to_ball(prec).to_string_prec(prec), "low_precision": false }),
                Some(f) => {
                    let z = ComplexBall::real(xi.to_ball(prec + 32));
                    let e = eval_fn(*f, &z, prec)?;
                    json!({
                        "xi": xi.to_string(),
                        "fn": f.name(),
                        "value": e.value.to_string_prec(prec),
                        "low_precision": e.low_precision,
                    })
                }
            };
            Ok(vec![v])
        }
    }
}

fn single(cmd: &Command) -> bool {
    !matches!(
        cmd,
        Command::Wn(WnArgs { sweep: Some(_), .. })
            | Command::Identities(_)
            | Command::Maillet { .. }
    )
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(values) => {
            print!("{}", output::render(&values, cli.format, single(&cli.command)));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
