use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use goldbach_core::counting::{count_s, error_t_fourier, error_t_fracsum, error_t_from_counts, parse_point, Point};
use goldbach_core::density::{big_ratio, omega, ratio_to_f64};
use goldbach_core::modulus::{goldbach_modulus, primorial_upto, ProblemInstance, SquareFreeModulus};
use goldbach_core::report::ratio_string;
use goldbach_core::scanner::{
    goldbach_witness, scan_ubh_range, twin_witness, ScanConfig, ScanKind, ScanReport, Status, WitnessRecord,
};
use goldbach_core::spectra::{slice_spectrum_direct, slice_spectrum_product, spectrum_direct, spectrum_product};
use goldbach_core::verify::{run_suite, Suite, VerifyConfig};
use goldbach_core::Error;

/// Largest N (or twin window M²) scanned without --slow-ok.
const SLOW_LIMIT: u64 = 5_000_000;

/// Largest modulus for which `eval spectrum` also prints the direct sum.
const DIRECT_LIMIT: u64 = 1_000_000;

#[derive(Parser)]
#[command(name = "goldbach", version, about = "Exact Goldbach counting functions, spectra and hypothesis scans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one invariant suite.
    Verify(VerifyArgs),
    /// Scan the upper-bound hypotheses.
    Scan(ScanArgs),
    /// Evaluate a single quantity.
    Eval(EvalArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// One of sets, modset, spectra, counting, deduction, density.
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    /// Largest sampled modulus P.
    #[arg(long, default_value_t = 2310)]
    max_p: u64,
    /// Number of random instances besides (4, 15).
    #[arg(long, default_value_t = 40)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ubh,
    UbhTheta,
    Twin,
    TwinTheta,
}

impl From<Kind> for ScanKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Ubh => ScanKind::Ubh,
            Kind::UbhTheta => ScanKind::UbhTheta,
            Kind::Twin => ScanKind::Twin,
            Kind::TwinTheta => ScanKind::TwinTheta,
        }
    }
}

#[derive(Args)]
struct ScanArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Scan a single N.
    #[arg(long, alias = "n", conflicts_with_all = ["from", "to"])]
    at: Option<u64>,
    /// First N of an inclusive range.
    #[arg(long, requires = "to")]
    from: Option<u64>,
    /// Last N of an inclusive range.
    #[arg(long, requires = "from")]
    to: Option<u64>,
    /// Cutoff M for the twin form.
    #[arg(long)]
    m: Option<u64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Resumable progress file, one line per finished N.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// N per checkpoint flush.
    #[arg(long, default_value_t = 256)]
    stride: u64,
    /// Keep every verdict, not just violations and the tightest slice.
    #[arg(long)]
    full: bool,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Allow N (or M² for twin scans) above 5,000,000.
    #[arg(long)]
    slow_ok: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Spectrum,
    Count,
    Error,
    Density,
    Witness,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Fracsum,
    Counts,
    Fourier,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(value_enum)]
    what: What,
    /// The instance N.
    #[arg(long)]
    n: u64,
    /// Squarefree modulus P.
    #[arg(long, alias = "p-limit-product", conflicts_with = "z")]
    p: Option<u64>,
    /// Use P = product of primes <= z. With neither --p nor --z,
    /// P is the product of primes <= sqrt(2N).
    #[arg(long)]
    z: Option<u64>,
    /// Frequency k for the cosine spectrum.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    /// Point x as "7.5", "15/2" or "-3".
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Restrict to the slice d (a divisor of P_6N).
    #[arg(long)]
    slice: Option<u64>,
    /// How the error term is computed.
    #[arg(long, value_enum, default_value_t = Form::Fracsum)]
    form: Form,
    /// Fourier truncation order.
    #[arg(long, default_value_t = 100_000)]
    terms: u64,
    /// Twin cutoff M (witness only).
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Internal(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = std::panic::catch_unwind(|| match cli.command {
        Command::Verify(a) => verify(a),
        Command::Scan(a) => scan(a),
        Command::Eval(a) => eval(a),
    });
    match run {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
        Err(_) => ExitCode::from(3),
    }
}

fn print_json(v: &Value) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn verify(a: VerifyArgs) -> Outcome {
    let cfg = VerifyConfig {
        max_p: a.max_p,
        samples: a.samples,
        seed: a.seed,
    };
    let checks = run_suite(a.suite, &cfg)?;
    let ok = checks.iter().all(|c| c.ok());
    if a.json {
        print_json(&json!({ "suite": a.suite.name(), "config": cfg, "checks": checks, "ok": ok }))?;
    } else {
        for c in &checks {
            let mark = if c.ok() { "PASS" } else { "FAIL" };
            print!("{mark} {} ({} passed, {} failed)", c.name, c.passed, c.failed);
            match &c.first_failure {
                Some(f) => println!(": {f}"),
                None => println!(),
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn scan(a: ScanArgs) -> Outcome {
    let kind = ScanKind::from(a.kind);
    let (from, to) = match (a.at, a.from, a.to) {
        (Some(n), _, _) => (n, n),
        (None, Some(f), Some(t)) => (f, t),
        _ => return Err(Failure::Usage("give --at N or both --from and --to".into())),
    };
    if from > to {
        return Err(Failure::Usage(format!("empty range: --from {from} exceeds --to {to}")));
    }
    if kind.is_twin() {
        let m = a.m.ok_or_else(|| Failure::Usage("twin scans need --m".into()))?;
        if m.saturating_mul(m) > SLOW_LIMIT && !a.slow_ok {
            return Err(Failure::Usage(format!("M = {m} gives a window above {SLOW_LIMIT}; pass --slow-ok")));
        }
    } else if to > SLOW_LIMIT && !a.slow_ok {
        return Err(Failure::Usage(format!("N above {SLOW_LIMIT} is slow; pass --slow-ok")));
    }
    let mut config = ScanConfig::new(kind, from, to);
    config.m = a.m;
    config.full = a.full || from == to;
    config.stride = a.stride;

    let started = Instant::now();
    let report = scan_ubh_range(&config, a.workers, a.checkpoint.as_deref())?;
    eprintln!("elapsed {:.3}s", started.elapsed().as_secs_f64());

    if a.json {
        println!("{}", report.to_json()?);
    } else if a.csv {
        print!("{}", report.to_csv());
    } else {
        print_scan_text(&report);
    }
    Ok(if report.has_violations() { 1 } else { 0 })
}

fn print_scan_text(r: &ScanReport) {
    for v in &r.verdicts {
        let p = v.p.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
        if v.status == Status::Vacuous {
            println!("N={} vacuous", v.big_n);
            continue;
        }
        println!(
            "N={} p={p} {} x={} lhs={} rhs={:.12} margin={:.12}",
            v.big_n,
            v.status,
            ratio_string::format(&v.worst_x),
            v.lhs,
            ratio_to_f64(&big_ratio(v.rhs_num.clone(), v.rhs_den.clone())),
            ratio_to_f64(&v.margin),
        );
    }
    for e in &r.resumed {
        println!("N={} {} (from checkpoint)", e.big_n, e.status);
    }
    let s = &r.summary;
    println!(
        "checked {}: {} holds, {} violated, {} vacuous, {} resumed",
        s.checked, s.holds, s.violated, s.vacuous, s.resumed
    );
}

fn modulus(a: &EvalArgs) -> Result<SquareFreeModulus, Failure> {
    Ok(match (a.p, a.z) {
        (Some(p), _) => SquareFreeModulus::from_u64(p)?,
        (None, Some(z)) => primorial_upto(z),
        (None, None) => goldbach_modulus(a.n),
    })
}

fn point(a: &EvalArgs) -> Result<Point, Failure> {
    let x = a.x.as_deref().ok_or_else(|| Failure::Usage("--x is required".into()))?;
    Ok(parse_point(x)?)
}

fn fmt_point(x: &Point) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn eval(a: EvalArgs) -> Outcome {
    if let What::Witness = a.what {
        return witness(&a);
    }
    let inst = ProblemInstance::new(a.n, modulus(&a)?)?;
    let p = inst.modulus().value().to_string();
    let head = json!({ "N": a.n, "P": p, "slice": a.slice });
    match a.what {
        What::Spectrum => {
            let k = a.k.ok_or_else(|| Failure::Usage("--k is required".into()))?;
            let value = match a.slice {
                None => spectrum_product(&inst, k),
                Some(d) => slice_spectrum_product(&inst, d, k)?,
            };
            let direct = match inst.modulus().as_u64() {
                Some(pv) if pv <= DIRECT_LIMIT => Some(match a.slice {
                    None => spectrum_direct(&inst, k)?,
                    Some(d) => slice_spectrum_direct(&inst, d, k)?,
                }),
                _ => None,
            };
            if a.json {
                print_json(&json!({ "instance": head, "k": k, "product": value, "direct": direct }))?;
            } else {
                println!("{value:.12}");
            }
        }
        What::Count => {
            let x = point(&a)?;
            let s = count_s(&inst, &x, a.slice)?;
            if a.json {
                print_json(&json!({ "instance": head, "x": fmt_point(&x), "S": s }))?;
            } else {
                println!("{s}");
            }
        }
        What::Error => {
            let x = point(&a)?;
            let (exact, approx) = match a.form {
                Form::Fracsum => {
                    let t = error_t_fracsum(&inst, &x, a.slice)?;
                    (Some(fmt_point(&t)), *t.numer() as f64 / *t.denom() as f64)
                }
                Form::Counts => {
                    let t = error_t_from_counts(&inst, &x, a.slice)?;
                    (Some(ratio_string::format(&t)), ratio_to_f64(&t))
                }
                Form::Fourier => (None, error_t_fourier(&inst, &x, a.terms, a.slice)?),
            };
            if a.json {
                print_json(&json!({ "instance": head, "x": fmt_point(&x), "T": exact, "approx": approx }))?;
            } else {
                match exact {
                    Some(e) => println!("{e} ({approx:.12})"),
                    None => println!("{approx:.12}"),
                }
            }
        }
        What::Density => {
            let w = omega(&inst, a.slice)?;
            if a.json {
                print_json(&json!({ "instance": head, "omega": w }))?;
            } else {
                println!("{} ({:.12})", ratio_string::format(&w.exact), w.approx);
            }
        }
        What::Witness => unreachable!(),
    }
    Ok(0)
}

fn witness(a: &EvalArgs) -> Outcome {
    let rec: WitnessRecord = match a.m {
        Some(m) => twin_witness(a.n, m)?,
        None => goldbach_witness(a.n)?,
    };
    if a.json {
        print_json(&serde_json::to_value(&rec).map_err(|e| Failure::Internal(e.to_string()))?)?;
    } else {
        match (&rec.pair, rec.m) {
            (Some(w), None) => println!("n={} {}+{}", w.n, w.p_small, w.p_large),
            (Some(w), Some(_)) => println!("n={} {}-{}", w.n, w.p_large, w.p_small),
            (None, _) => println!("no witness"),
        }
    }
    Ok(if rec.pair.is_some() { 0 } else { 1 })
}
