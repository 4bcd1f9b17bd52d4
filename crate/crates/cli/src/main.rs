use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frobpow_core::{
    dimension, fmt_rational, parse_ideal, plot_subdivision_with, CriticalResult,
    CriticalSolver, Error, Limits, Monomial, Oracle, ParsedIdeal, PlotOptions, SimplexSpec,
    SolverOptions,
};
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "frobpow", version, about = "Frobenius powers and critical exponents of monomial ideals")]
struct Cli {
    /// Upper bound on enumeration states per operation.
    #[arg(long, global = true, env = "FROBPOW_BUDGET", default_value_t = frobpow_core::limits::DEFAULT_MAX_STATES)]
    budget: u64,

    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IdealArgs {
    /// Generators such as "x^2*y^2, y^3*z^3", or the JSON form.
    #[arg(long)]
    ideal: String,

    /// Comma-separated variable names, fixing their order.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Args)]
struct PrimeArg {
    #[arg(short = 'p', long = "p")]
    p: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Least critical exponent.
    Lce {
        #[command(flatten)]
        ideal: IdealArgs,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long)]
        trace: bool,
    },
    /// Critical exponent of the monomial x^b.
    Crit {
        #[command(flatten)]
        ideal: IdealArgs,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        /// Subtract dividing generators when x^b lies in the ideal.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Frobenius power at a rational t in [0, 1).
    Power {
        #[command(flatten)]
        ideal: IdealArgs,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, value_parser = parse_rational)]
        t: BigRational,
    },
    /// Frobenius power at k/q from the generator formula.
    OraclePower {
        #[command(flatten)]
        ideal: IdealArgs,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
    },
    /// Whether x^b lies in the Frobenius power at k/q.
    Member {
        #[command(flatten)]
        ideal: IdealArgs,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        q: u64,
    },
    /// Jumps on (0, 1] and the power on each interval.
    Jumps {
        #[command(flatten)]
        ideal: IdealArgs,
        #[command(flatten)]
        prime: PrimeArg,
        /// Depth of the scan used as a cross-check; 0 disables it.
        #[arg(long)]
        check_depth: Option<u32>,
    },
    /// Powers at every k/p^e in [0, 1), merged into constant runs.
    Scan {
        #[command(flatten)]
        ideal: IdealArgs,
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(short = 'e', long = "e")]
        e: u32,
    },
    /// SVG of the q x q subdivision for a two-generator ideal.
    Plot {
        #[command(flatten)]
        ideal: IdealArgs,
        #[arg(long)]
        q: u64,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Level lines u1 + u2 = t*q.
        #[arg(long, value_delimiter = ',', value_parser = parse_rational)]
        overlay: Vec<BigRational>,
        #[arg(long, overrides_with = "labels")]
        no_labels: bool,
        #[arg(long, overrides_with = "no_labels")]
        labels: bool,
    },
    /// Sierpinski simplex points and dimension.
    Fractal {
        #[command(flatten)]
        prime: PrimeArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        depth: u32,
        #[arg(long, conflicts_with = "dimension")]
        points: bool,
        #[arg(long)]
        dimension: bool,
    },
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| format!("expected a rational such as 3/4, got {s:?}"))
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::NegativeExponent { .. }
            | Error::EmptyGenerators
            | Error::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn load(args: &IdealArgs) -> Result<ParsedIdeal, Failure> {
    Ok(parse_ideal(&args.ideal, args.vars.as_deref())?)
}

fn monomial(parsed: &ParsedIdeal, b: &[u64]) -> Result<Monomial, Failure> {
    if b.len() != parsed.ideal.num_vars() {
        return Err(Error::LengthMismatch {
            expected: parsed.ideal.num_vars(),
            found: b.len(),
        }
        .into());
    }
    Ok(Monomial::new(b.to_vec()))
}

fn ideal_value(parsed: &ParsedIdeal, ideal: &frobpow_core::MonomialIdeal) -> Value {
    json!({
        "text": parsed.ring.format_ideal(ideal),
        "ideal": parsed.ring.ideal_json(ideal),
    })
}

fn critical_text(r: &CriticalResult, trace: bool) -> String {
    let mut out = String::new();
    if trace {
        for line in &r.trace {
            out.push_str(&format!("{line}\n"));
        }
    }
    out.push_str(&format!("{}\n", fmt_rational(&r.lambda)));
    out.push_str(&format!("expansion: {}\n", r.expansion));
    let witness: Vec<String> = r.witness.iter().map(ToString::to_string).collect();
    out.push_str(&format!("witness: {}\n", witness.join(" ")));
    if r.reduced_by > 0 {
        out.push_str(&format!("reduced_by: {}\n", r.reduced_by));
    }
    out
}

fn run(cli: Cli) -> Result<String, Failure> {
    let limits = Limits::default().with_max_states(cli.budget);
    let json = cli.json;
    let render = |text: String, value: Value| {
        if json {
            format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable"))
        } else {
            text
        }
    };
    Ok(match cli.command {
        Command::Lce { ideal, prime, trace } => {
            let parsed = load(&ideal)?;
            let options = SolverOptions {
                trace,
                ..Default::default()
            };
            let r = CriticalSolver::with_options(&parsed.ideal, prime.p, options, limits)?.lce()?;
            render(critical_text(&r, trace), r.to_json())
        }
        Command::Crit {
            ideal,
            prime,
            b,
            reduce,
            trace,
        } => {
            let parsed = load(&ideal)?;
            let b = monomial(&parsed, &b)?;
            let options = SolverOptions {
                reduce,
                trace,
                ..Default::default()
            };
            let r = CriticalSolver::with_options(&parsed.ideal, prime.p, options, limits)?.lambda_b(&b)?;
            render(critical_text(&r, trace), r.to_json())
        }
        Command::Power { ideal, prime, t } => {
            let parsed = load(&ideal)?;
            let power = if parsed.ideal.is_unit() {
                frobpow_core::power_at(&parsed.ideal, &t, prime.p)?
            } else {
                CriticalSolver::with_options(&parsed.ideal, prime.p, SolverOptions::default(), limits)?
                    .power_at(&t)?
            };
            render(
                format!("{}\n", parsed.ring.format_ideal(&power)),
                json!({ "t": fmt_rational(&t), "power": ideal_value(&parsed, &power) }),
            )
        }
        Command::OraclePower { ideal, prime, k, q } => {
            let parsed = load(&ideal)?;
            let power = Oracle::with_limits(&parsed.ideal, prime.p, limits)?.power(k, q)?;
            render(
                format!("{}\n", parsed.ring.format_ideal(&power)),
                json!({ "k": k, "q": q, "power": ideal_value(&parsed, &power) }),
            )
        }
        Command::Member {
            ideal,
            prime,
            b,
            k,
            q,
        } => {
            let parsed = load(&ideal)?;
            let b = monomial(&parsed, &b)?;
            let member = Oracle::with_limits(&parsed.ideal, prime.p, limits)?.member(&b, k, q)?;
            render(format!("{member}\n"), json!({ "member": member }))
        }
        Command::Jumps {
            ideal,
            prime,
            check_depth,
        } => {
            let parsed = load(&ideal)?;
            let depth = check_depth.unwrap_or_else(|| frobpow_core::critical::default_check_depth(prime.p));
            let table = CriticalSolver::with_options(&parsed.ideal, prime.p, SolverOptions::default(), limits)?
                .jumps(depth)?;
            let jumps: Vec<String> = table.jumps.iter().map(ToString::to_string).collect();
            let mut text = format!("{}\n", jumps.join(" "));
            for iv in &table.intervals {
                text.push_str(&format!(
                    "[{}, {}): {}\n",
                    iv.start,
                    iv.end,
                    parsed.ring.format_ideal(&iv.ideal)
                ));
            }
            let intervals: Vec<Value> = table
                .intervals
                .iter()
                .map(|iv| {
                    json!({
                        "start": fmt_rational(&iv.start),
                        "end": fmt_rational(&iv.end),
                        "power": ideal_value(&parsed, &iv.ideal),
                    })
                })
                .collect();
            render(
                text,
                json!({
                    "jumps": table.jumps.iter().map(fmt_rational).collect::<Vec<_>>(),
                    "intervals": intervals,
                    "checked_depth": table.checked_depth,
                }),
            )
        }
        Command::Scan { ideal, prime, e } => {
            let parsed = load(&ideal)?;
            let runs = Oracle::with_limits(&parsed.ideal, prime.p, limits)?.scan(e)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for run in &runs {
                let (start, end) = (run.start.to_rational(), run.end.to_rational());
                text.push_str(&format!("[{start}, {end}): {}\n", parsed.ring.format_ideal(&run.ideal)));
                rows.push(json!({
                    "start": fmt_rational(&start),
                    "end": fmt_rational(&end),
                    "power": ideal_value(&parsed, &run.ideal),
                }));
            }
            render(text, json!({ "e": e, "runs": rows }))
        }
        Command::Plot {
            ideal,
            q,
            out,
            overlay,
            no_labels,
            labels: _,
        } => {
            let parsed = load(&ideal)?;
            let options = PlotOptions {
                labels: !no_labels,
                ring: Some(parsed.ring.clone()),
                overlay,
            };
            let svg = plot_subdivision_with(&parsed.ideal, q, &options)?;
            std::fs::write(&out, svg)
                .map_err(|e| Failure::Compute(format!("cannot write {}: {e}", out.display())))?;
            render(
                format!("wrote {}\n", out.display()),
                json!({ "out": out.display().to_string() }),
            )
        }
        Command::Fractal {
            prime,
            d,
            depth,
            points,
            dimension: only_dimension,
        } => {
            let spec = SimplexSpec::new(prime.p, d, depth)?;
            let dim = dimension(prime.p, d)?;
            let dim_text = format!("dimension: log_{}({}) = {}\n", prime.p, dim.count, dim.value);
            if only_dimension {
                render(
                    dim_text,
                    json!({ "p": prime.p, "d": d, "count": dim.count.to_string(), "dimension": dim.value }),
                )
            } else {
                let set = frobpow_core::fractal::sierpinski_points_with_limits(&spec, &limits)?;
                let rows: Vec<Vec<String>> = set
                    .iter()
                    .map(|v| v.iter().map(|x| fmt_rational(&x.to_rational())).collect())
                    .collect();
                let mut text = String::new();
                if points {
                    for row in &rows {
                        text.push_str(&format!("({})\n", row.join(", ")));
                    }
                } else {
                    text.push_str(&format!("points: {}\n", rows.len()));
                    text.push_str(&dim_text);
                }
                let mut value = json!({
                    "p": prime.p,
                    "d": d,
                    "depth": depth,
                    "count": rows.len(),
                    "dimension": dim.value,
                });
                if points {
                    value["points"] = json!(rows);
                }
                render(text, value)
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
