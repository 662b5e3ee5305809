use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lgwork::optimize::{maximize_re_l_over_lambda, optimize, Objective, OptimizeConfig};
use lgwork::oracle::{feasible, MarginalTriple};
use lgwork::protocol::ProtocolDocument;
use lgwork::schemes::{fcs_work_distribution, sample_char_fn, write_char_fn_csv};
use lgwork::sweep::{self, Axis, SweepSpec, SweepTarget};
use lgwork::{l_lambda, m_k, CoplanarAngles, Interval, Protocol, SchemeKind};

#[derive(Parser)]
#[command(
    name = "lgwork",
    version,
    about = "Work statistics and Leggett-Garg tests for a driven qubit"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Energy gap
    #[arg(long, global = true, default_value_t = 1.0)]
    epsilon: f64,
    /// Inverse temperature of the initial thermal state
    #[arg(long, global = true, default_value_t = 1.0)]
    beta: f64,
    /// Angle between a0 and a1
    #[arg(long, global = true, default_value_t = 0.0)]
    theta10: f64,
    /// Angle between a1 and a2
    #[arg(long, global = true, default_value_t = 0.0)]
    theta21: f64,
    #[arg(long, global = true, value_enum, default_value_t = Scheme::Tpm)]
    scheme: Scheme,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON protocol file; replaces --epsilon, --beta, --theta10, --theta21
    #[arg(long, global = true)]
    protocol: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Tpm,
    Fcs,
    Mh,
}

impl From<Scheme> for SchemeKind {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Tpm => SchemeKind::Tpm,
            Scheme::Fcs => SchemeKind::Fcs,
            Scheme::Mh => SchemeKind::Mh,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    MinMEven,
    MaxAbsMOdd,
    MaxReL,
    MaxAbsImL,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntervalArg {
    #[value(name = "01")]
    I01,
    #[value(name = "12")]
    I12,
    #[value(name = "02")]
    I02,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate M_k or L_lambda at one protocol
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(long, conflicts_with = "lambda", required_unless_present = "lambda")]
        k: Option<u32>,
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Evaluate M_k or L_lambda over a coplanar grid
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[arg(long, conflicts_with_all = ["lambda", "lambda_eps_range"])]
        k: Option<u32>,
        /// Fixed counting field
        #[arg(long, conflicts_with = "lambda_eps_range")]
        lambda: Option<f64>,
        /// MIN:MAX:COUNT for lambda*epsilon in [0, 2pi]
        #[arg(long, value_parser = parse_range)]
        lambda_eps_range: Option<Axis>,
        /// MIN:MAX:COUNT for theta10 in [0, pi]
        #[arg(long, value_parser = parse_range)]
        theta10_range: Option<Axis>,
        /// MIN:MAX:COUNT for theta21 in [0, pi]
        #[arg(long, value_parser = parse_range)]
        theta21_range: Option<Axis>,
        /// MIN:MAX:COUNT for beta*epsilon in [0, 20]
        #[arg(long, value_parser = parse_range)]
        beta_eps_range: Option<Axis>,
    },
    /// Search protocol geometry for the extremal violation
    #[command(allow_negative_numbers = true)]
    Maximize {
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Also optimize over lambda*epsilon in [0, 2pi] (max-re-l only)
        #[arg(long, conflicts_with = "lambda")]
        scan_lambda: bool,
        /// Free both azimuths as well as the polar angles
        #[arg(long)]
        full_sphere: bool,
    },
    /// Test whether the scheme's two-time marginals have a joint extension
    Oracle,
    /// Sample the characteristic function on a lambda grid
    #[command(allow_negative_numbers = true)]
    Charfn {
        #[arg(long, value_enum, default_value_t = IntervalArg::All)]
        interval: IntervalArg,
        #[arg(long, default_value_t = 0.0)]
        lambda_min: f64,
        #[arg(long, default_value_t = 2.0 * PI)]
        lambda_max: f64,
        #[arg(long, default_value_t = 65)]
        points: usize,
    },
}

fn parse_range(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, count] = parts[..] else {
        return Err(format!("expected MIN:MAX:COUNT, got '{s}'"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    let count = count
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("'{count}': {e}"))?;
    Ok(Axis::Range {
        min: num(min)?,
        max: num(max)?,
        count,
    })
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<lgwork::Error> for Failure {
    fn from(e: lgwork::Error) -> Self {
        match e {
            lgwork::Error::Io(e) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn protocol(g: &Global) -> Result<Protocol, Failure> {
    match &g.protocol {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            Ok(Protocol::from_json(&text)?)
        }
        None => Ok(Protocol::from_angles(
            g.epsilon,
            g.beta,
            CoplanarAngles::new(g.theta10, g.theta21)?,
        )?),
    }
}

fn json_only(g: &Global, command: &str) -> Result<(), Failure> {
    match g.format {
        Some(Format::Csv) => Err(usage(format!("{command} emits JSON only"))),
        _ => Ok(()),
    }
}

fn coplanar_only(g: &Global, command: &str) -> Result<(), Failure> {
    match g.protocol {
        Some(_) => Err(usage(format!(
            "{command} works on the coplanar family; --protocol is not accepted"
        ))),
        None => Ok(()),
    }
}

fn to_json_bytes(v: &impl serde::Serialize) -> Result<Vec<u8>, Failure> {
    let mut out = serde_json::to_vec_pretty(v).map_err(|e| usage(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

fn eval(g: &Global, k: Option<u32>, lambda: Option<f64>) -> Result<Vec<u8>, Failure> {
    json_only(g, "eval")?;
    let p = protocol(g)?;
    let s = g.scheme.into();
    let q = match (k, lambda) {
        (Some(k), _) => m_k(&p, k, s)?,
        (None, Some(lambda)) if lambda.is_finite() => l_lambda(&p, lambda, s),
        (None, Some(lambda)) => return Err(usage(format!("lambda must be finite, got {lambda}"))),
        (None, None) => return Err(usage("one of --k or --lambda is required")),
    };
    to_json_bytes(&q.report(&p))
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    g: &Global,
    k: Option<u32>,
    lambda: Option<f64>,
    lambda_eps_range: Option<Axis>,
    theta10_range: Option<Axis>,
    theta21_range: Option<Axis>,
    beta_eps_range: Option<Axis>,
) -> Result<Vec<u8>, Failure> {
    coplanar_only(g, "sweep")?;
    let target = match (k, lambda, lambda_eps_range) {
        (Some(k), _, _) => SweepTarget::Moment { k },
        (None, Some(lambda), _) => SweepTarget::CharFn {
            lambda_eps: Axis::Fixed(lambda * g.epsilon),
        },
        (None, None, Some(axis)) => SweepTarget::CharFn { lambda_eps: axis },
        (None, None, None) => {
            return Err(usage(
                "one of --k, --lambda or --lambda-eps-range is required",
            ))
        }
    };
    let spec = SweepSpec {
        epsilon: g.epsilon,
        scheme: g.scheme.into(),
        target,
        theta10: theta10_range.unwrap_or(Axis::Fixed(g.theta10)),
        theta21: theta21_range.unwrap_or(Axis::Fixed(g.theta21)),
        beta_eps: beta_eps_range.unwrap_or(Axis::Fixed(g.beta * g.epsilon)),
    };
    let rows = sweep::run(&spec)?;
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            sweep::write_csv(&spec, &rows, &mut buf)?;
            Ok(buf)
        }
        Format::Json => {
            let reports: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let p = Protocol::from_angles(
                        r.epsilon,
                        r.beta,
                        CoplanarAngles::new(r.theta10, r.theta21)?,
                    )?;
                    Ok(serde_json::to_value(r.quantity.report(&p)).expect("report serializes"))
                })
                .collect::<Result<_, lgwork::Error>>()?;
            to_json_bytes(&json!({ "spec": spec, "rows": reports }))
        }
    }
}

fn maximize(
    g: &Global,
    objective: ObjectiveArg,
    k: Option<u32>,
    lambda: Option<f64>,
    scan_lambda: bool,
    full_sphere: bool,
) -> Result<Vec<u8>, Failure> {
    json_only(g, "maximize")?;
    coplanar_only(g, "maximize")?;
    let cfg = OptimizeConfig {
        scheme: g.scheme.into(),
        epsilon: g.epsilon,
        beta: g.beta,
        full_sphere,
    };
    let need_k = || k.ok_or_else(|| usage("--k is required for moment objectives"));
    let need_lambda = || {
        lambda.ok_or_else(|| usage("--lambda is required for characteristic-function objectives"))
    };
    if scan_lambda {
        return match objective {
            ObjectiveArg::MaxReL => to_json_bytes(&maximize_re_l_over_lambda(&cfg)?),
            _ => Err(usage("--scan-lambda applies to max-re-l only")),
        };
    }
    let objective = match objective {
        ObjectiveArg::MinMEven => Objective::MinimizeEvenMoment { k: need_k()? },
        ObjectiveArg::MaxAbsMOdd => Objective::MaximizeAbsOddMoment { k: need_k()? },
        ObjectiveArg::MaxReL => Objective::MaximizeReL {
            lambda: need_lambda()?,
        },
        ObjectiveArg::MaxAbsImL => Objective::MaximizeAbsImL {
            lambda: need_lambda()?,
        },
    };
    to_json_bytes(&optimize(objective, &cfg)?)
}

fn oracle(g: &Global) -> Result<Vec<u8>, Failure> {
    json_only(g, "oracle")?;
    let p = protocol(g)?;
    let s: SchemeKind = g.scheme.into();
    let triple = MarginalTriple::for_scheme(&p, s);
    let by_interval = |f: &dyn Fn(usize, Interval) -> Value| -> Value {
        Interval::ALL
            .iter()
            .enumerate()
            .map(|(i, &iv)| (iv.label().to_string(), f(i, iv)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    let negativity = triple.negativity();
    let mut report = json!({
        "scheme": s,
        "protocol": ProtocolDocument::from(&p),
        "marginals": by_interval(&|i, _| json!(triple.marginals[i].weights())),
        "negativity": by_interval(&|i, _| json!(negativity[i])),
        "feasibility": feasible(&triple)?,
    });
    if s == SchemeKind::Fcs {
        report["fcs_half_quantum_weight"] =
            by_interval(&|_, iv| json!(fcs_work_distribution(&p, iv).half_quantum_weight()));
    }
    to_json_bytes(&report)
}

fn charfn(
    g: &Global,
    interval: IntervalArg,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<Vec<u8>, Failure> {
    let p = protocol(g)?;
    if points < 2 {
        return Err(usage(format!("--points must be at least 2, got {points}")));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(usage(format!("invalid lambda range [{lo}, {hi}]")));
    }
    let intervals: Vec<Interval> = match interval {
        IntervalArg::I01 => vec![Interval::I01],
        IntervalArg::I12 => vec![Interval::I12],
        IntervalArg::I02 => vec![Interval::I02],
        IntervalArg::All => Interval::ALL.to_vec(),
    };
    let lambdas = Axis::Range {
        min: lo,
        max: hi,
        count: points,
    }
    .values();
    let rows = sample_char_fn(&p, &intervals, &lambdas, g.scheme.into());
    match g.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_char_fn_csv(&rows, &mut buf)?;
            Ok(buf)
        }
        Format::Json => to_json_bytes(&rows),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let bytes = match cli.command {
        Command::Eval { k, lambda } => eval(g, k, lambda)?,
        Command::Sweep {
            k,
            lambda,
            lambda_eps_range,
            theta10_range,
            theta21_range,
            beta_eps_range,
        } => run_sweep(
            g,
            k,
            lambda,
            lambda_eps_range,
            theta10_range,
            theta21_range,
            beta_eps_range,
        )?,
        Command::Maximize {
            objective,
            k,
            lambda,
            scan_lambda,
            full_sphere,
        } => maximize(g, objective, k, lambda, scan_lambda, full_sphere)?,
        Command::Oracle => oracle(g)?,
        Command::Charfn {
            interval,
            lambda_min,
            lambda_max,
            points,
        } => charfn(g, interval, lambda_min, lambda_max, points)?,
    };
    match &g.out {
        Some(path) => {
            fs::write(path, &bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
