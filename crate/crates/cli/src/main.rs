//! `cullis`: batch front end for Cullis determinants and their preservers.
//!
//! Results go to stdout as a single JSON document; diagnostics go to stderr.
//! Exit codes: 0 success, 1 verified false, 2 usage or data error,
//! 3 budget or resource guard exceeded.

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cullis_core::cullis::{det_with_algo, Budget, DetAlgo};
use cullis_core::json::{map_from_json, map_to_json, matrix_from_json, matrix_to_json, report_to_json};
use cullis_core::lambda::{lambda_coeffs, max_deg_over_all_a};
use cullis_core::preserver::{
    enumerate_preservers, factor_two_sided, is_preserver, make_k2_counterexample, make_s_shift,
    make_singular_preserver, make_two_sided, radical_enumerate, CheckMethod, Verdict, DEFAULT_ENUM_BUDGET,
    DEFAULT_SYMBOLIC_GUARD,
};
use cullis_core::verify::{self, Fault, VerifyConfig};
use cullis_core::{CullisError, FieldSpec, RectMatrix};

#[derive(Parser)]
#[command(name = "cullis", version, about = "Exact Cullis determinants and determinant preservers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cullis' determinant of a matrix file.
    Det {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
    },
    /// Coefficients of det(A + λB).
    Lambda {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Maximum over all A of the λ-degree of det(A + λB), with rank(B).
    Maxdeg {
        #[arg(long)]
        input: String,
    },
    /// Build, check, factor and enumerate linear preservers.
    Preserver {
        #[command(subcommand)]
        action: PreserverCmd,
    },
    /// Run the table of identities and structural checks.
    VerifyPaper {
        /// Comma-separated shapes such as 4x2,5x3.
        #[arg(long, value_delimiter = ',')]
        shapes: Option<Vec<String>>,
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<u64>>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, value_enum, hide = true, default_value_t = FaultArg::None)]
        inject_fault: FaultArg,
    },
}

#[derive(Subcommand)]
enum PreserverCmd {
    /// Decide whether a map preserves the determinant.
    Check {
        #[arg(long)]
        map: String,
        #[arg(long, value_enum, default_value_t = Method::Symbolic)]
        method: Method,
        /// Reinterpret the map's entries in GF(p).
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u128>,
    },
    /// X -> AXB from two square matrix files.
    MakeTwoSided {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// The signed semi-cyclic shift S(i,j).
    MakeSShift {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        p: Option<u64>,
    },
    /// The k = 2 preserver that is not of two-sided form.
    MakeK2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<u64>,
    },
    /// X -> X - x11 J, a singular preserver when n + k is odd.
    MakeSingular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Recover (A, B) with T(X) = AXB.
    Factor {
        #[arg(long)]
        map: String,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Every preserver over GF(p) at a tiny shape.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        budget: Option<u128>,
        /// Include the maps themselves in the output.
        #[arg(long)]
        maps: bool,
    },
    /// The radical of the determinant over GF(p).
    Radical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        budget: Option<u128>,
        /// Include the radical elements in the output.
        #[arg(long)]
        elements: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Auto,
    Def,
    Laplace,
    Minorsum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exhaustive,
    Symbolic,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    None,
    NegateSetSign,
}

/// A finished command: JSON payload plus exit status.
struct Outcome {
    payload: Value,
    code: u8,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { payload, code: 0 }
    }

    fn falsified(payload: Value) -> Self {
        Outcome { payload, code: 1 }
    }
}

enum Failure {
    Data(String),
    Budget(String),
}

impl From<CullisError> for Failure {
    fn from(e: CullisError) -> Self {
        match e {
            CullisError::BudgetExceeded { .. } | CullisError::ResourceGuard { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

/// `CULLIS_BUDGET` replaces the built-in default when no flag is given.
fn env_budget() -> Result<Option<u128>, Failure> {
    match std::env::var("CULLIS_BUDGET") {
        Ok(s) => s
            .trim()
            .parse::<u128>()
            .map(Some)
            .map_err(|_| Failure::Data(format!("CULLIS_BUDGET is not a non-negative integer: {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn budget_or(flag: Option<u128>, default: u128) -> Result<u128, Failure> {
    Ok(match flag {
        Some(b) => b,
        None => env_budget()?.unwrap_or(default),
    })
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("cannot read {path}: {e}")))
}

fn field_of(p: Option<u64>) -> Result<FieldSpec, Failure> {
    match p {
        Some(p) => Ok(FieldSpec::prime(p)?),
        None => Ok(FieldSpec::Rational),
    }
}

fn parse_shape(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Data(format!("shape {s:?} is not of the form NxK"));
    let (n, k) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?))
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Det { input, algo } => {
            let x = matrix_from_json(&read(&input)?, None)?;
            let algo = match algo {
                Algo::Auto => DetAlgo::Auto,
                Algo::Def => DetAlgo::Definition,
                Algo::Laplace => DetAlgo::Laplace,
                Algo::Minorsum => DetAlgo::MinorSum,
            };
            let budget = Budget::new(budget_or(None, cullis_core::cullis::DEFAULT_BUDGET)?);
            let d = det_with_algo(&x, algo, &budget)?;
            Ok(Outcome::ok(json!({"det": d.to_string()})))
        }
        Command::Lambda { a, b } => {
            let a = matrix_from_json(&read(&a)?, None)?;
            let b = matrix_from_json(&read(&b)?, None)?;
            let p = lambda_coeffs(&a, &b)?;
            let coeffs: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
            Ok(Outcome::ok(json!({"coeffs": coeffs, "degree": p.degree()})))
        }
        Command::Maxdeg { input } => {
            let b = matrix_from_json(&read(&input)?, None)?;
            Ok(Outcome::ok(json!({"max_deg": max_deg_over_all_a(&b)?, "rank": b.rank()})))
        }
        Command::Preserver { action } => run_preserver(action),
        Command::VerifyPaper { shapes, p, seed, samples, inject_fault } => {
            let shapes = match shapes {
                Some(list) => Some(list.iter().map(|s| parse_shape(s)).collect::<Result<Vec<_>, _>>()?),
                None => None,
            };
            let cfg = VerifyConfig {
                shapes,
                primes: p,
                seed,
                samples,
                fault: match inject_fault {
                    FaultArg::None => Fault::None,
                    FaultArg::NegateSetSign => Fault::NegateSetSign,
                },
            };
            let outcomes = verify::run(&cfg);
            let report = verify::report_json(&outcomes);
            if verify::all_pass(&outcomes) {
                Ok(Outcome::ok(report))
            } else {
                Ok(Outcome::falsified(report))
            }
        }
    }
}

fn run_preserver(action: PreserverCmd) -> Result<Outcome, Failure> {
    match action {
        PreserverCmd::Check { map, method, p, samples, seed, budget } => {
            let field = p.map(FieldSpec::prime).transpose()?;
            let t = map_from_json(&read(&map)?, field)?;
            let method = match method {
                Method::Exhaustive => CheckMethod::Exhaustive { budget: budget_or(budget, DEFAULT_ENUM_BUDGET)? },
                Method::Symbolic => CheckMethod::Symbolic { guard: budget_or(budget, DEFAULT_SYMBOLIC_GUARD)? },
                Method::Random => CheckMethod::Random { samples, seed },
            };
            let report = is_preserver(&t, method)?;
            let payload = report_to_json(&report);
            Ok(match report.verdict {
                Verdict::Violates(_) => Outcome::falsified(payload),
                _ => Outcome::ok(payload),
            })
        }
        PreserverCmd::MakeTwoSided { a, b } => {
            let a = matrix_from_json(&read(&a)?, None)?;
            let b = matrix_from_json(&read(&b)?, None)?;
            Ok(Outcome::ok(map_to_json(&make_two_sided(&a, &b)?)))
        }
        PreserverCmd::MakeSShift { n, k, i, j, p } => {
            Ok(Outcome::ok(map_to_json(&make_s_shift(n, k, i, j, field_of(p)?)?)))
        }
        PreserverCmd::MakeK2 { n, p } => Ok(Outcome::ok(map_to_json(&make_k2_counterexample(n, field_of(p)?)?))),
        PreserverCmd::MakeSingular { n, k, p } => {
            Ok(Outcome::ok(map_to_json(&make_singular_preserver(n, k, field_of(p)?)?)))
        }
        PreserverCmd::Factor { map, p } => {
            let field = p.map(FieldSpec::prime).transpose()?;
            let t = map_from_json(&read(&map)?, field)?;
            Ok(match factor_two_sided(&t) {
                Some((a, b)) => Outcome::ok(json!({"A": matrix_to_json(&a), "B": matrix_to_json(&b)})),
                None => Outcome::falsified(json!({"factorable": false})),
            })
        }
        PreserverCmd::Enumerate { n, k, p, budget, maps } => {
            let census = enumerate_preservers(n, k, p, budget_or(budget, DEFAULT_ENUM_BUDGET)?)?;
            let mut out = json!({"count": census.count});
            if maps {
                out["maps"] = Value::Array(census.maps.iter().map(map_to_json).collect());
            }
            Ok(Outcome::ok(out))
        }
        PreserverCmd::Radical { n, k, p, budget, elements } => {
            let rad = radical_enumerate(n, k, p, budget_or(budget, DEFAULT_ENUM_BUDGET)?)?;
            let ones = RectMatrix::ones(n, k, FieldSpec::prime(p)?);
            let mut out = json!({"size": rad.len(), "contains_ones": rad.contains(&ones)});
            if elements {
                out["elements"] = Value::Array(rad.iter().map(matrix_to_json).collect());
            }
            Ok(Outcome::ok(out))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            println!("{}", out.payload);
            ExitCode::from(out.code)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
