use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use pellroot::corpus::{parse_corpus, GOLDEN_JSON};
use pellroot::eval::digits_per_term;
use pellroot::wire::parse_rational;
use pellroot::{
    amplify_power, build, evaluate, fundamental_solution, reproduce, terms_needed, verify_identity, BuildError,
    EvalConfig, Identity, PellInstance, SeriesSpec, Theorem,
};

const EXIT_INVALID: u8 = 2;
const EXIT_NOT_APPLICABLE: u8 = 3;
const EXIT_ORACLE_ALARM: u8 = 4;
const EXIT_CORPUS_MISMATCH: u8 = 5;

#[derive(Parser)]
#[command(name = "pellroot", version, about = "Square roots from Pell solutions and hypergeometric series")]
struct Cli {
    /// Reject radicands that are not prime.
    #[arg(long, global = true)]
    prime_only: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    A,
    B,
    C,
    D,
    E,
    F,
    All,
}

impl TheoremArg {
    fn theorems(self) -> Vec<Theorem> {
        match self {
            TheoremArg::A => vec![Theorem::A],
            TheoremArg::B => vec![Theorem::B],
            TheoremArg::C => vec![Theorem::C],
            TheoremArg::D => vec![Theorem::D],
            TheoremArg::E => vec![Theorem::E],
            TheoremArg::F => vec![Theorem::F],
            TheoremArg::All => Theorem::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IdentityArg {
    Binomial,
    Quadratic,
    Cubic,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental solution of x^2 - p y^2 = 1, or its s-th power.
    Solve {
        p: BigUint,
        #[arg(long, short = 's')]
        power: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Prefactor and argument of the expansions for sqrt(p).
    Series {
        p: BigUint,
        #[arg(long, short = 's', default_value_t = 1)]
        power: u32,
        #[arg(long, short = 't', value_enum, default_value = "all")]
        theorem: TheoremArg,
        #[arg(long, conflicts_with = "latex")]
        json: bool,
        #[arg(long)]
        latex: bool,
    },
    /// Evaluate one expansion to the requested number of decimals.
    Eval {
        p: BigUint,
        #[arg(long, short = 's', default_value_t = 1)]
        power: u32,
        #[arg(long, short = 't')]
        theorem: Theorem,
        #[arg(long, short = 'd')]
        digits: u32,
        #[arg(long)]
        json: bool,
    },
    /// Check one transformation identity numerically.
    Verify {
        #[arg(value_enum)]
        identity: IdentityArg,
        /// Exponent, e.g. 1/2.
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        a: String,
        /// Point of evaluation, e.g. -1/3.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, short = 'd', default_value_t = 30)]
        digits: u32,
    },
    /// Rebuild the checked-in corpus of expansions and compare exactly.
    Reproduce {
        #[arg(long)]
        only_p: Option<String>,
        /// Use this corpus file instead of the embedded one.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Terms needed and digits per term for every theorem and s = 1..4.
    Bench {
        p: BigUint,
        #[arg(long, short = 'd')]
        digits: u64,
        #[arg(long)]
        csv: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn is_prime(p: &BigUint) -> Option<bool> {
    let n = p.to_u64()?;
    if n < 2 {
        return Some(false);
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return Some(false);
        }
        d += 1;
    }
    Some(true)
}

fn instance(p: &BigUint, prime_only: bool) -> Result<PellInstance, Failure> {
    if prime_only {
        match is_prime(p) {
            Some(true) => {}
            Some(false) => return Err(fail(EXIT_INVALID, format!("p = {p} is not prime"))),
            None => return Err(fail(EXIT_INVALID, format!("p = {p} is too large to test for primality"))),
        }
    }
    PellInstance::new(p.clone()).map_err(|e| fail(EXIT_INVALID, e.to_string()))
}

fn solution(p: &BigUint, power: u32, prime_only: bool) -> Result<pellroot::PellSolution, Failure> {
    let inst = instance(p, prime_only)?;
    amplify_power(&fundamental_solution(&inst), power).map_err(|e| fail(EXIT_INVALID, e.to_string()))
}

fn spec_for(p: &BigUint, power: u32, theorem: Theorem, prime_only: bool) -> Result<SeriesSpec, Failure> {
    let sol = solution(p, power, prime_only)?;
    build(theorem, &sol).map_err(|e| match e {
        BuildError::NotApplicable { .. } => fail(EXIT_NOT_APPLICABLE, e.to_string()),
        other => fail(EXIT_INVALID, other.to_string()),
    })
}

fn config() -> Result<EvalConfig, Failure> {
    EvalConfig::from_env().map_err(|e| fail(EXIT_INVALID, e.to_string()))
}

/// Rough `10^e` rendering of a tiny positive rational.
fn magnitude(q: &num_rational::BigRational) -> String {
    let n = q.numer().to_string().len() as i64;
    let d = q.denom().to_string().len() as i64;
    format!("< 1e{}", n - d + 1)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let prime_only = cli.prime_only;
    let mut out = String::new();
    match cli.command {
        Command::Solve { p, power, json } => {
            let sol = solution(&p, power.unwrap_or(1), prime_only)?;
            if json {
                out = serde_json::to_string(&sol).expect("serializable");
                out.push('\n');
            } else {
                let _ = writeln!(out, "{sol}");
            }
        }
        Command::Series { p, power, theorem, json, latex } => {
            let sol = solution(&p, power, prime_only)?;
            let wanted = theorem.theorems();
            let mut specs = Vec::new();
            for t in &wanted {
                match build(*t, &sol) {
                    Ok(s) => specs.push(s),
                    Err(e @ BuildError::NotApplicable { .. }) if wanted.len() == 1 => {
                        return Err(fail(EXIT_NOT_APPLICABLE, e.to_string()))
                    }
                    Err(e @ BuildError::NotApplicable { .. }) => eprintln!("note: skipping: {e}"),
                    Err(e) => return Err(fail(EXIT_INVALID, e.to_string())),
                }
            }
            if json {
                out = if wanted.len() == 1 {
                    serde_json::to_string(&specs[0])
                } else {
                    serde_json::to_string(&specs)
                }
                .expect("serializable");
                out.push('\n');
            } else {
                for s in &specs {
                    let line = if latex { s.to_latex() } else { s.to_string() };
                    let _ = writeln!(out, "{line}");
                }
            }
        }
        Command::Eval { p, power, theorem, digits, json } => {
            let spec = spec_for(&p, power, theorem, prime_only)?;
            let report = evaluate(&spec, digits, &config()?).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            if json {
                let _ = writeln!(out, "{}", report.to_json());
            } else {
                let _ = writeln!(out, "sqrt({}) = {}", p, report.decimal);
                let _ = writeln!(out, "terms_used: {}", report.terms_used);
                let _ = writeln!(out, "guard_digits: {}", report.guard_digits);
                let _ = writeln!(out, "tail_bound: {}", magnitude(&report.tail_bound));
                let _ = writeln!(out, "oracle_agrees: {}", report.oracle_agrees);
            }
            if !report.oracle_agrees {
                print!("{out}");
                return Err(fail(EXIT_ORACLE_ALARM, "evaluation disagrees with the integer square-root oracle"));
            }
        }
        Command::Verify { identity, a, x, digits } => {
            let a = parse_rational(&a).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let x = parse_rational(&x).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let which = match identity {
                IdentityArg::Binomial => Identity::Binomial,
                IdentityArg::Quadratic => Identity::Quadratic,
                IdentityArg::Cubic => Identity::Cubic,
            };
            let ok = verify_identity(which, &a, &x, digits).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let _ = writeln!(out, "{which:?} a={a} x={x} digits={digits}: {}", if ok { "holds" } else { "FAILS" });
            if !ok {
                print!("{out}");
                return Err(fail(EXIT_ORACLE_ALARM, "identity does not hold at the requested precision"));
            }
        }
        Command::Reproduce { only_p, corpus } => {
            let text = match corpus {
                Some(path) => std::fs::read_to_string(&path)
                    .map_err(|e| fail(EXIT_INVALID, format!("{}: {e}", path.display())))?,
                None => GOLDEN_JSON.to_owned(),
            };
            let entries = parse_corpus(&text).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
            let report = reproduce(&entries, only_p.as_deref(), &config()?);
            out = report.render();
            if !report.all_passed() {
                print!("{out}");
                let names: Vec<String> = report.failures().map(|o| format!("#{:02} {}", o.index, o.label)).collect();
                return Err(fail(EXIT_CORPUS_MISMATCH, format!("corpus mismatch: {}", names.join(", "))));
            }
        }
        Command::Bench { p, digits, csv } => {
            let inst = instance(&p, prime_only)?;
            let base = fundamental_solution(&inst);
            let rows: Vec<(Theorem, u32)> =
                Theorem::ALL.iter().flat_map(|&t| (1..=4).map(move |s| (t, s))).collect();
            let cells: Vec<Option<(u64, f64)>> = rows
                .par_iter()
                .map(|&(t, s)| {
                    let sol = amplify_power(&base, s).expect("s >= 1");
                    build(t, &sol).ok().map(|spec| (terms_needed(&spec, digits), digits_per_term(&spec)))
                })
                .collect();
            if csv {
                out.push_str("theorem,s,terms,digits_per_term\n");
            } else {
                let _ = writeln!(out, "sqrt({p}) to {digits} digits");
                let _ = writeln!(out, "{:<8}{:>3}{:>10}{:>16}", "theorem", "s", "terms", "digits/term");
            }
            for ((t, s), cell) in rows.iter().zip(&cells) {
                match (cell, csv) {
                    (Some((k, d)), true) => {
                        let _ = writeln!(out, "{t},{s},{k},{d:.3}");
                    }
                    (None, true) => {
                        let _ = writeln!(out, "{t},{s},,");
                    }
                    (Some((k, d)), false) => {
                        let _ = writeln!(out, "{:<8}{:>3}{:>10}{:>16.3}", t.to_string(), s, k, d);
                    }
                    (None, false) => {
                        let _ = writeln!(out, "{:<8}{:>3}{:>10}{:>16}", t.to_string(), s, "n/a", "n/a");
                    }
                }
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
