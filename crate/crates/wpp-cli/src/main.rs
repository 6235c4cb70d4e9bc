//! Command-line surface for the weighted projective plane toolkit.
//!
//! Structured output goes to stdout, diagnostics to stderr. Exit codes:
//! 0 success, 2 bad input, 3 inconsistent spectral data, 4 ambiguity
//! (a uniqueness violation, which should never happen).

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wpp::exact::{self, Float, Integer, Rational};
use wpp::extremal;
use wpp::heat;
use wpp::recovery::{self, SpectralInput};
use wpp::topology::{self, WeightTriple};
use wpp::trig;
use wpp::Error;

#[derive(Parser)]
#[command(
    name = "wpp",
    version,
    about = "Heat-trace invariants of weighted projective planes and spectral weight recovery"
)]
struct Cli {
    /// Working mantissa precision in bits (minimum 64)
    #[arg(long, global = true, default_value_t = exact::DEFAULT_PRECISION)]
    precision: u32,

    /// Denominator bound for rational reconstruction
    #[arg(long, global = true, default_value_t = SpectralInput::DEFAULT_MAX_DENOMINATOR)]
    max_denominator: u64,

    /// Relative tolerance for reconstruction and the extremality test
    #[arg(long, global = true, default_value = "1e-9")]
    rel_tol: String,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Forward model: Chern numbers, T, and the 0- and 1-form heat
    /// coefficients for given weights
    Forward {
        n1: u64,
        n2: u64,
        n3: u64,
        /// Volume of the Kähler class ("p/q" or decimal)
        #[arg(long, default_value = "1")]
        vol: String,
        /// Explicit ∫τ² for a non-extremal metric (default: the extremal
        /// value 96π²·(ΣNᵢ²)/(N₁N₂N₃))
        #[arg(long)]
        tau_sq: Option<String>,
    },
    /// Recover the weights from 𝔞₀(Δ₀), 𝔞₁(Δ₀), 𝔞₂(Δ₀), 𝔞₂(Δ₁); with no
    /// arguments, reads a `forward` JSON report from stdin
    Recover {
        a0: Option<String>,
        a1: Option<String>,
        a2_0: Option<String>,
        a2_1: Option<String>,
    },
    /// Recover three prime weights from b = ∫c₁² alone
    RecoverPrime { b: String },
    /// Recover the weights from b = ∫c₁² and the Euler characteristic
    RecoverChi { b: String, chi: String },
    /// Decide whether 𝔞₂(Δ₀) comes from the extremal metric
    ExtremalCheck {
        n1: u64,
        n2: u64,
        n3: u64,
        /// Heard value of 𝔞₂(Δ₀) ("p/q" or decimal)
        #[arg(long)]
        a2_0: String,
        /// Singular trace sum T (default: computed from the weights)
        #[arg(long)]
        t: Option<String>,
    },
    /// Exhaustive self-checks over all coprime triples up to a bound
    Selftest {
        #[arg(long, default_value_t = 50)]
        bound: u64,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidWeights(_) | Error::Domain(_) => 2,
        Error::Overflow(_) | Error::NoApproximant(_) | Error::Inconsistent(_) => 3,
        Error::Ambiguous(_) | Error::Internal(_) => 4,
    }
}

/// "p/q", integer, or decimal (the latter reconstructed under the bound).
fn parse_rational(s: &str, prec: u32, max_den: &Integer, tol: &Float) -> wpp::Result<Rational> {
    let t = s.trim();
    if !t.contains('.') && !t.contains('e') && !t.contains('E') {
        return exact::rational_from_str(t);
    }
    let x = exact::parse_decimal(t, prec)?;
    exact::rationalize(&x, max_den, tol)
}

struct Ctx {
    precision: u32,
    max_denominator: Integer,
    rel_tol: Float,
    output: Output,
}

impl Ctx {
    fn emit(&self, v: &Value, text: String) {
        match self.output {
            Output::Json => println!("{v}"),
            Output::Text => println!("{text}"),
        }
    }
}

fn cmd_forward(ctx: &Ctx, n: [u64; 3], vol: &str, tau_sq: Option<&str>) -> wpp::Result<()> {
    let w = WeightTriple::new(n[0], n[1], n[2])?;
    let prec = ctx.precision;
    let vol = exact::parse_decimal(vol, prec)?;
    let tau_sq = tau_sq.map(|s| exact::parse_decimal(s, prec)).transpose()?;
    let chern = topology::chern_numbers(&w);
    let t = trig::t_direct(&w, prec);
    let h0 = heat::heat_coefficients(&w, &vol, 0, tau_sq.as_ref(), prec)?;
    let h1 = heat::heat_coefficients(&w, &vol, 1, tau_sq.as_ref(), prec)?;

    let report = json!({
        "weights": w.to_json(),
        "chern": chern.to_json(),
        "t": t.to_json(),
        "volume": exact::float_decimal(&vol),
        "heat": [h0.to_json(), h1.to_json()],
        "precision": prec,
    });
    let text = format!(
        "weights: {w}\nb = {}, c = {}, d = {}\nT = {}{}\n\
         a0(D0) = {}\na1(D0) = {}\na2(D0) = {}{}\na2(D1) = {}{}",
        exact::rational_str(&chern.b),
        exact::rational_str(&chern.c),
        exact::rational_str(&chern.d),
        exact::float_decimal(&t.value),
        t.reconstructed
            .as_ref()
            .map(|r| format!(" = {}", exact::rational_str(r)))
            .unwrap_or_default(),
        exact::float_decimal(&h0.a0),
        exact::float_decimal(&h0.a1),
        exact::float_decimal(&h0.a2),
        h0.a2_exact
            .as_ref()
            .map(|r| format!(" = {}", exact::rational_str(r)))
            .unwrap_or_default(),
        exact::float_decimal(&h1.a2),
        h1.a2_exact
            .as_ref()
            .map(|r| format!(" = {}", exact::rational_str(r)))
            .unwrap_or_default(),
    );
    ctx.emit(&report, text);
    Ok(())
}

fn spectral_input_from_stdin(ctx: &Ctx) -> wpp::Result<SpectralInput> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Error::Domain(format!("cannot read stdin: {e}")))?;
    let v: Value = serde_json::from_str(&buf)
        .map_err(|e| Error::Domain(format!("stdin is not a JSON report: {e}")))?;
    let prec = v["precision"]
        .as_u64()
        .map(|p| p as u32)
        .unwrap_or(ctx.precision);
    let field = |idx: usize, key: &str| -> wpp::Result<&str> {
        v["heat"][idx][key]
            .as_str()
            .ok_or_else(|| Error::Domain(format!("report is missing heat[{idx}].{key}")))
    };
    SpectralInput::from_decimals(
        field(0, "a0")?,
        field(0, "a1")?,
        field(0, "a2")?,
        field(1, "a2")?,
        prec,
        ctx.max_denominator.to_u64(),
    )
}

fn cmd_recover(ctx: &Ctx, args: [Option<&str>; 4]) -> wpp::Result<()> {
    let input = match args {
        [Some(a0), Some(a1), Some(a2_0), Some(a2_1)] => SpectralInput::from_decimals(
            a0,
            a1,
            a2_0,
            a2_1,
            ctx.precision,
            ctx.max_denominator.to_u64(),
        )?,
        [None, None, None, None] => spectral_input_from_stdin(ctx)?,
        _ => {
            return Err(Error::Domain(
                "recover takes all four invariants or none (stdin)".into(),
            ))
        }
    };
    let report = recovery::recover_weights(&input, &ctx.rel_tol)?;
    let text = format!("weights: {}", report.weights);
    ctx.emit(&report.to_json(), text);
    Ok(())
}

fn cmd_recover_prime(ctx: &Ctx, b: &str) -> wpp::Result<()> {
    let b = parse_rational(b, ctx.precision, &ctx.max_denominator, &ctx.rel_tol)?;
    let w = recovery::recover_prime(&b)?;
    let report = json!({ "weights": w.to_json(), "b": exact::rational_str(&b) });
    ctx.emit(&report, format!("weights: {w}"));
    Ok(())
}

fn cmd_recover_chi(ctx: &Ctx, b: &str, chi: &str) -> wpp::Result<()> {
    let b = parse_rational(b, ctx.precision, &ctx.max_denominator, &ctx.rel_tol)?;
    let chi = parse_rational(chi, ctx.precision, &ctx.max_denominator, &ctx.rel_tol)?;
    let report = recovery::recover_with_chi(&b, &chi)?;
    let text = format!("weights: {}", report.weights);
    ctx.emit(&report.to_json(), text);
    Ok(())
}

fn cmd_extremal_check(ctx: &Ctx, n: [u64; 3], a2_0: &str, t: Option<&str>) -> wpp::Result<()> {
    let w = WeightTriple::new(n[0], n[1], n[2])?;
    let prec = ctx.precision;
    let a2_0 = exact::parse_decimal(a2_0, prec)?;
    let t = match t {
        Some(s) => exact::parse_decimal(s, prec)?,
        None => trig::t_direct(&w, prec).value,
    };
    let check = extremal::check_extremal(&w, &a2_0, &t, &ctx.rel_tol)?;
    let mut report = check.to_json();
    report["weights"] = w.to_json();
    let text = format!(
        "weights: {w}\nextremal: {}\nextracted ∫τ² = {}\nexpected  ∫τ² = {} (= {}·π²)",
        check.extremal,
        exact::float_decimal(&check.extracted),
        exact::float_decimal(&check.expected),
        exact::rational_str(&check.expected_pi2_coefficient),
    );
    ctx.emit(&report, text);
    Ok(())
}

fn coprime_triples(bound: u64) -> Vec<WeightTriple> {
    let mut out = Vec::new();
    for a in 1..=bound {
        for b in a..=bound {
            if exact::gcd(a, b) != 1 {
                continue;
            }
            for c in b..=bound {
                if exact::gcd(a, c) == 1 && exact::gcd(b, c) == 1 {
                    out.push(WeightTriple::new(a, b, c).unwrap());
                }
            }
        }
    }
    out
}

fn cmd_selftest(ctx: &Ctx, bound: u64) -> wpp::Result<()> {
    let prec = ctx.precision;
    let triples = coprime_triples(bound);
    let mut failures: Vec<String> = Vec::new();

    for w in &triples {
        let ch = topology::chern_numbers(w);
        match recovery::recover_from_bcd(&ch.b, &ch.c, &ch.d) {
            Ok(r) if r.weights == *w => {}
            Ok(r) => failures.push(format!("{w}: exact recovery returned {}", r.weights)),
            Err(e) => failures.push(format!("{w}: exact recovery failed: {e}")),
        }
        match recovery::recover_with_chi(&ch.b, &ch.c) {
            Ok(r) if r.weights == *w => {}
            Ok(r) => failures.push(format!("{w}: χ-recovery returned {}", r.weights)),
            Err(e) => failures.push(format!("{w}: χ-recovery failed: {e}")),
        }
        match extremal::tau_sq_integral(w, extremal::TauSqRoute::PolytopeIntegration) {
            Ok(r) if r.pi2_coefficient == Rational::from(96 * &ch.d) => {}
            Ok(r) => failures.push(format!("{w}: ∫τ² = {}", r.pi2_coefficient)),
            Err(e) => failures.push(format!("{w}: ∫τ² failed: {e}")),
        }
    }

    // prime branch over triples of distinct primes
    let primes: Vec<u64> = (2..=bound).filter(|&p| exact::is_prime(p)).collect();
    let mut prime_cases = 0u64;
    for (i, &p1) in primes.iter().enumerate() {
        for (j, &p2) in primes.iter().enumerate().skip(i + 1) {
            for &p3 in primes.iter().skip(j + 1) {
                let w = WeightTriple::new(p1, p2, p3).unwrap();
                prime_cases += 1;
                match recovery::recover_prime(&topology::chern_numbers(&w).b) {
                    Ok(t) if t == w => {}
                    Ok(t) => failures.push(format!("{w}: prime recovery returned {t}")),
                    Err(e) => failures.push(format!("{w}: prime recovery failed: {e}")),
                }
            }
        }
    }

    // the trigonometric identity is the slow part; cap its sweep
    let trig_bound = bound.min(25);
    let trig_triples = coprime_triples(trig_bound);
    let tol = exact::pow2(prec, -((prec / 2) as i32));
    for w in &trig_triples {
        let direct = trig::t_direct(w, prec);
        let closed = trig::t_closed(w, prec);
        let mut diff = direct.value.clone();
        diff -= &closed.value;
        diff.abs_mut();
        if diff > tol {
            failures.push(format!("{w}: |T_direct − T_closed| = {diff:.3e}"));
        }
    }

    for f in failures.iter().take(10) {
        eprintln!("selftest failure: {f}");
    }
    let report = json!({
        "bound": bound,
        "triples": triples.len(),
        "prime_triples": prime_cases,
        "trig_triples": trig_triples.len(),
        "failures": failures.len(),
    });
    let text = format!("triples: {}, failures: {}", triples.len(), failures.len());
    ctx.emit(&report, text);
    if !failures.is_empty() {
        std::process::exit(1);
    }
    Ok(())
}

fn run(cli: &Cli) -> wpp::Result<()> {
    if cli.precision < exact::MIN_PRECISION {
        return Err(Error::Domain(format!(
            "precision {} is below the minimum of {} bits",
            cli.precision,
            exact::MIN_PRECISION
        )));
    }
    let rel_tol = exact::parse_decimal(&cli.rel_tol, cli.precision)?;
    if !(rel_tol.is_sign_positive() && !rel_tol.is_zero()) {
        return Err(Error::Domain("rel-tol must be positive".into()));
    }
    let ctx = Ctx {
        precision: cli.precision,
        max_denominator: Integer::from(cli.max_denominator),
        rel_tol,
        output: cli.output,
    };
    match &cli.command {
        Command::Forward {
            n1,
            n2,
            n3,
            vol,
            tau_sq,
        } => cmd_forward(&ctx, [*n1, *n2, *n3], vol, tau_sq.as_deref()),
        Command::Recover { a0, a1, a2_0, a2_1 } => cmd_recover(
            &ctx,
            [
                a0.as_deref(),
                a1.as_deref(),
                a2_0.as_deref(),
                a2_1.as_deref(),
            ],
        ),
        Command::RecoverPrime { b } => cmd_recover_prime(&ctx, b),
        Command::RecoverChi { b, chi } => cmd_recover_chi(&ctx, b, chi),
        Command::ExtremalCheck {
            n1,
            n2,
            n3,
            a2_0,
            t,
        } => cmd_extremal_check(&ctx, [*n1, *n2, *n3], a2_0, t.as_deref()),
        Command::Selftest { bound } => cmd_selftest(&ctx, *bound),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
