//! `pseudoknot`: counts, generating functions and growth rates of
//! `<k,λ,σ>`-structures from the command line.
//!
//! Exit codes: 0 success, 1 verification mismatch or failed computation,
//! 2 invalid flags or input, 3 brute-force size refusal.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pseudoknot_core::asymptotics::{
    format_rate, solve_growth, write_growth_csv, GrowthResult, RootEquation, RootKind,
};
use pseudoknot_core::diagram::{BruteForce, Diagram, StructureClass, DEFAULT_ORACLE_BOUND};
use pseudoknot_core::enumeration::{CountTable, TableKind, TableParams};
use pseudoknot_core::golden::{verify_table, GoldenTable, VerifyReport};
use pseudoknot_core::series::{GfRecipe, Series};
use pseudoknot_core::{Count, Error};

const ORACLE_ENV: &str = "PSEUDOKNOT_ORACLE_MAX";

#[derive(Parser)]
#[command(
    name = "pseudoknot",
    version,
    about = "Enumeration of k-noncrossing RNA structures"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact counts of <k,λ,σ>-structures for n = 0..=n-max.
    Count {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long, value_parser = ["2", "4"])]
        lambda: String,
        #[arg(long)]
        n_max: usize,
        /// Split counts by number of arcs (lambda 4 only).
        #[arg(long)]
        per_h: bool,
    },
    /// Generating-function coefficients up to x^order.
    Series {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long)]
        order: usize,
        /// Minimum arc length; with k = 2 and sigma = 1 any value >= 1 gives
        /// secondary structures.
        #[arg(long, default_value_t = 4)]
        lambda: usize,
    },
    /// Exponential growth rates from the singularity equations.
    Growth {
        #[arg(long, value_parser = parse_kind)]
        kind: RootKind,
        /// One or more crossing bounds, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Stack lengths, comma separated (k2sigma and k4sigma only).
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<usize>,
        #[arg(long, default_value_t = pseudoknot_core::asymptotics::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Minimal class, stacks and core of a diagram file.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Brute-force counts by number of arcs.
    Oracle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        sigma: usize,
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        n: usize,
    },
    /// Recompute a bundled reference table and compare.
    Verify {
        /// T000, Table1, tab1b, tab2, tab3 or all.
        #[arg(long)]
        table: String,
    },
}

fn parse_kind(s: &str) -> Result<RootKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Mismatch(String),
    Refused(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) | Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Refused(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m)
            | Failure::Mismatch(m)
            | Failure::Refused(m)
            | Failure::Compute(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::OracleTooLarge { .. } => Failure::Refused(msg),
            Error::InvalidParameter(_)
            | Error::InvalidClass(_)
            | Error::InvalidDiagram(_)
            | Error::Parse { .. }
            | Error::UnsupportedK(_)
            | Error::TruncationOrder { .. } => Failure::Usage(msg),
            _ => Failure::Compute(msg),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.format) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Failure::Mismatch(out) = &failure {
                print!("{out}");
                eprintln!("pseudoknot: verification failed");
            } else {
                eprintln!("pseudoknot: {}", failure.message());
            }
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command, format: Format) -> Outcome {
    match command {
        Command::Count {
            k,
            sigma,
            lambda,
            n_max,
            per_h,
        } => count(
            k,
            sigma,
            lambda.parse().expect("restricted by clap"),
            n_max,
            per_h,
            format,
        ),
        Command::Series {
            k,
            sigma,
            order,
            lambda,
        } => series(k, sigma, order, lambda, format),
        Command::Growth {
            kind,
            k,
            sigma,
            tol,
        } => growth(kind, &k, &sigma, tol, format),
        Command::Classify { input } => classify(&input, format),
        Command::Oracle {
            k,
            sigma,
            lambda,
            n,
        } => oracle(k, sigma, lambda, n, format),
        Command::Verify { table } => verify(&table, format),
    }
}

fn count(
    k: usize,
    sigma: usize,
    lambda: usize,
    n_max: usize,
    per_h: bool,
    format: Format,
) -> Outcome {
    if per_h && lambda != 4 {
        return Err(Failure::Usage(
            "--per-h is only available for --lambda 4".into(),
        ));
    }
    let table = match (lambda, sigma) {
        (4, _) => CountTable::t4_sigma(k, sigma, n_max, per_h)?,
        (2, 1) => CountTable::tk21(k, n_max)?,
        (2, _) => {
            let coeffs = GfRecipe::k2sigma(k, sigma, n_max).evaluate()?;
            let counts = coeffs
                .to_counts()
                .ok_or_else(|| Failure::Compute("non-integral coefficient".into()))?;
            let params = TableParams {
                k: Some(k),
                lambda: 2,
                sigma,
            };
            CountTable::from_totals(
                TableKind::Tk2Sigma,
                params,
                "generating function",
                0,
                counts,
            )
        }
        _ => unreachable!("restricted by clap"),
    };
    Ok(render_counts(&table, per_h, format))
}

fn render_counts(table: &CountTable, per_h: bool, format: Format) -> String {
    let p = table.params;
    match format {
        Format::Csv => {
            let mut out = String::from(if per_h { "n,h,count\n" } else { "n,count\n" });
            for (n, h, v) in table.iter() {
                match h {
                    Some(h) => writeln!(out, "{n},{h},{v}"),
                    None => writeln!(out, "{n},{v}"),
                }
                .expect("write to string");
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .iter()
                .map(|(n, h, v)| match h {
                    Some(h) => json!({ "n": n, "h": h, "count": v.to_string() }),
                    None => json!({ "n": n, "count": v.to_string() }),
                })
                .collect();
            pretty(json!({
                "kind": table.kind.to_string(),
                "k": p.k,
                "lambda": p.lambda,
                "sigma": p.sigma,
                "rows": rows,
            }))
        }
    }
}

fn series(k: usize, sigma: usize, order: usize, lambda: usize, format: Format) -> Outcome {
    let recipe = match (k, sigma, lambda) {
        (2, 1, l) if l != 4 => GfRecipe::secondary(l, order),
        (_, _, 2) => GfRecipe::k2sigma(k, sigma, order),
        (_, _, 4) => GfRecipe::k4sigma(k, sigma, order),
        _ => {
            return Err(Failure::Usage(format!(
                "--lambda {lambda} is only available for k = 2, sigma = 1"
            )))
        }
    };
    let s: Series = recipe.evaluate()?;
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("n,coefficient\n");
            for (n, c) in s.coeffs().iter().enumerate() {
                writeln!(out, "{n},{c}").expect("write to string");
            }
            out
        }
        Format::Json => {
            let coeffs: Vec<Value> = s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| json!({ "n": n, "coefficient": c.to_string() }))
                .collect();
            pretty(json!({ "recipe": recipe.id(), "order": order, "coefficients": coeffs }))
        }
    })
}

fn growth(kind: RootKind, ks: &[usize], sigmas: &[usize], tol: f64, format: Format) -> Outcome {
    let sigmas: Vec<usize> = match kind {
        RootKind::K21 | RootKind::K41 => {
            if sigmas.iter().any(|&s| s != 1) {
                return Err(Failure::Usage(format!("--sigma does not apply to {kind}")));
            }
            vec![1]
        }
        RootKind::K2Sigma | RootKind::K4Sigma if sigmas.is_empty() => {
            return Err(Failure::Usage(format!("--sigma is required for {kind}")));
        }
        _ => sigmas.to_vec(),
    };
    let mut results = Vec::new();
    for &sigma in &sigmas {
        for &k in ks {
            let eq = RootEquation::new(kind, k, sigma)?;
            results.push(solve_growth(&eq, tol)?);
        }
    }
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_growth_csv(&mut buf, &results).expect("write to memory");
            String::from_utf8(buf).expect("ascii output")
        }
        Format::Json => pretty(Value::Array(results.iter().map(growth_json).collect())),
    })
}

fn growth_json(r: &GrowthResult) -> Value {
    let gamma: f64 = format!("{:.15}", r.gamma_f64()).parse().expect("float");
    let rate: f64 = format_rate(r.rate_f64()).parse().expect("float");
    let residual: f64 = format!("{:.3e}", r.residual).parse().expect("float");
    json!({
        "k": r.k,
        "sigma": r.sigma,
        "lambda": r.lambda,
        "gamma": gamma,
        "rate": rate,
        "dominance_verified": r.dominance_verified,
        "residual": residual,
    })
}

fn classify(path: &PathBuf, format: Format) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let d: Diagram = text.parse()?;
    let class = d.classify();
    let stacks = d.stack_decompose();
    let core = d.core_map();
    let arc_list = |arcs: &[(usize, usize)]| -> Vec<String> {
        arcs.iter().map(|(i, j)| format!("{i}-{j}")).collect()
    };
    let stack_list: Vec<String> = stacks
        .stacks
        .iter()
        .map(|s| format!("{}:{}", arc_list(&[s.outermost()])[0], s.len()))
        .collect();
    Ok(match format {
        Format::Csv => {
            let rows = [
                ("n", d.n().to_string()),
                ("arcs", arc_list(d.arcs()).join(";")),
                ("class", class.to_string()),
                ("k", class.k.to_string()),
                ("lambda", opt(class.lambda)),
                ("sigma", opt(class.sigma)),
                ("stacks", stack_list.join(";")),
                ("core_n", core.n().to_string()),
                ("core_arcs", arc_list(core.arcs()).join(";")),
            ];
            let mut out = String::from("field,value\n");
            for (key, value) in rows {
                writeln!(out, "{key},{value}").expect("write to string");
            }
            out
        }
        Format::Json => pretty(json!({
            "n": d.n(),
            "arcs": arc_list(d.arcs()),
            "class": class.to_string(),
            "k": class.k,
            "lambda": class.lambda,
            "sigma": class.sigma,
            "stacks": stack_list,
            "core_n": core.n(),
            "core_arcs": arc_list(core.arcs()),
        })),
    })
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "inf".into(), |v| v.to_string())
}

fn oracle_bound() -> Result<usize, Failure> {
    match std::env::var(ORACLE_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "{ORACLE_ENV} must be a nonnegative integer, got `{v}`"
            ))
        }),
        Err(_) => Ok(DEFAULT_ORACLE_BOUND),
    }
}

fn oracle(k: usize, sigma: usize, lambda: usize, n: usize, format: Format) -> Outcome {
    let class = StructureClass::new(k, lambda, sigma)?;
    let counts = BruteForce::new(oracle_bound()?).class_counts_by_arcs(n, &class)?;
    let total: Count = counts.iter().sum();
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("n,h,count\n");
            for (h, c) in counts.iter().enumerate() {
                writeln!(out, "{n},{h},{c}").expect("write to string");
            }
            writeln!(out, "{n},,{total}").expect("write to string");
            out
        }
        Format::Json => {
            let rows: Vec<Value> = counts
                .iter()
                .enumerate()
                .map(|(h, c)| json!({ "n": n, "h": h, "count": c.to_string() }))
                .collect();
            pretty(json!({
                "class": class.to_string(),
                "n": n,
                "rows": rows,
                "total": total.to_string(),
            }))
        }
    })
}

fn verify(table: &str, format: Format) -> Outcome {
    let tables = if table.eq_ignore_ascii_case("all") {
        GoldenTable::ALL.to_vec()
    } else {
        vec![table.parse::<GoldenTable>()?]
    };
    let reports = tables
        .into_iter()
        .map(verify_table)
        .collect::<Result<Vec<_>, _>>()?;
    let out = match format {
        Format::Csv => {
            let mut out = String::from("table,entry,expected,computed,ok\n");
            for r in &reports {
                for l in &r.lines {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        r.table, l.label, l.expected, l.computed, l.ok
                    )
                    .expect("write to string");
                }
            }
            out
        }
        Format::Json => pretty(Value::Array(reports.iter().map(report_json).collect())),
    };
    if reports.iter().all(VerifyReport::passed) {
        Ok(out)
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn report_json(r: &VerifyReport) -> Value {
    let lines: Vec<Value> = r
        .lines
        .iter()
        .map(|l| json!({ "entry": l.label, "expected": l.expected, "computed": l.computed, "ok": l.ok }))
        .collect();
    json!({ "table": r.table.id(), "passed": r.passed(), "entries": lines })
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}
