use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use canyons::analysis::{analyze, compare_germs, generic_polars_of, milnor_of, polars_of, signature_of, Settings};
use canyons::cluster::Verdict;
use canyons::number::GaussRat;
use canyons::oracle::milnor_oracle;
use canyons::parse::{parse_constant, parse_polynomial, InputGerm, DEFAULT_DEGREE_CAP};
use canyons::report::{self, Labels};
use canyons::selftest::{self, is_internal};
use canyons::series::Exponent;
use canyons::Error;

/// Gradient canyons, partial Milnor numbers and canyon signatures of plane curve germs.
#[derive(Parser, Debug)]
#[command(name = "canyons", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug)]
struct Options {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Initial working precision in bits for non-rational coefficients.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(32..=65536))]
    precision: u32,
    /// Fixed truncation horizon, an integer or `p/q`; disables automatic escalation.
    #[arg(long, global = true, value_parser = parse_horizon)]
    horizon: Option<Exponent>,
    /// Worker threads for the canyon grouping.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Name of the variable in the `y` role.
    #[arg(long, global = true)]
    y_var: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full canyon report.
    Analyze { germ: String },
    /// Newton-Puiseux roots of the x-derivative.
    Polars { germ: String },
    /// Roots of f_x + tau f_y for each direction tau.
    GenericPolars {
        germ: String,
        /// Comma-separated directions, e.g. `1,-1,1/2+i`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        tau: Vec<String>,
    },
    /// Milnor number, with the resultant cross-check.
    Milnor { germ: String },
    /// Canyon signature.
    Signature { germ: String },
    /// Compares the signatures of two germs; exit code 3 when they differ.
    Compare { first: String, second: String },
    /// Runs the built-in regression checks.
    Selftest,
}

fn parse_horizon(s: &str) -> Result<Exponent, String> {
    let e: Exponent = s.parse().map_err(|e: Error| e.to_string())?;
    if e <= Exponent::zero() {
        return Err("the horizon must be positive".into());
    }
    Ok(e)
}

const EXIT_USAGE: u8 = 1;
const EXIT_ANALYTIC: u8 = 2;
const EXIT_DISTINGUISHED: u8 = 3;

fn stage(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } | Error::NotVanishingAtOrigin | Error::DegreeCap { .. } | Error::EmptyInput => "parsing",
        Error::NotReduced | Error::NotMiniregular | Error::NoValidShear => "normalization",
        Error::IndeterminateOrder { .. } | Error::HorizonExceeded { .. } | Error::PrecisionExhausted | Error::MultipleRoot => {
            "expansion"
        }
        Error::InconsistentCanyon(_) | Error::NonIntegerMilnor(_) | Error::StructureViolation(_) => "canyon checks",
        Error::InvalidInput(_) => "input",
    }
}

fn fail(s: &str) -> impl Fn(Error) -> (Error, Option<String>) + '_ {
    move |e| (e, Some(s.to_string()))
}

fn report_error(e: &Error, input: Option<&str>) -> ExitCode {
    if is_internal(e) {
        eprintln!("internal error in {}: {}", stage(e), e);
        eprintln!("This indicates a bug in canyons. Please report it with the command line that triggered it.");
        if let Some(s) = input {
            eprintln!("input: {}", s);
        }
        return ExitCode::from(EXIT_ANALYTIC);
    }
    eprintln!("error in {}: {}", stage(e), e);
    if let Error::IndeterminateOrder { needed } = e {
        eprintln!("hint: rerun with --horizon {} or larger", needed);
    }
    match e {
        Error::Parse { .. }
        | Error::NotVanishingAtOrigin
        | Error::DegreeCap { .. }
        | Error::EmptyInput
        | Error::NotReduced
        | Error::InvalidInput(_) => ExitCode::from(EXIT_USAGE),
        _ => ExitCode::from(EXIT_ANALYTIC),
    }
}

fn labels(g: &InputGerm) -> Labels {
    Labels { expression: g.expression.clone(), x: g.vars.0.clone(), y: g.vars.1.clone() }
}

fn emit(json: bool, text: String, value: impl FnOnce() -> String) {
    if json {
        println!("{}", value());
    } else {
        print!("{}", text);
    }
}

fn run(cli: Cli) -> Result<ExitCode, (Error, Option<String>)> {
    let o = &cli.opts;
    let settings = Settings { precision: o.precision, horizon: o.horizon, ..Settings::default() };
    let read = |s: &str| {
        parse_polynomial(s, o.y_var.as_deref(), DEFAULT_DEGREE_CAP).map_err(|e| (e, Some(s.to_string())))
    };
    match &cli.command {
        Command::Analyze { germ } => {
            let g = read(germ)?;
            let l = labels(&g);
            let a = analyze(&g.poly, &settings).map_err(fail(germ))?;
            emit(o.json, report::analyze_text(&a, &l), || report::to_json(&report::analyze_json(&a, &l)));
        }
        Command::Polars { germ } => {
            let g = read(germ)?;
            let l = labels(&g);
            let (form, ps, ctx) = polars_of(&g.poly, &settings).map_err(fail(germ))?;
            emit(o.json, report::polars_text(&g.poly, &form, &ps, &ctx, &l), || {
                report::to_json(&report::polars_json("polars", &g.poly, &form, &ps, &ctx, &l))
            });
        }
        Command::GenericPolars { germ, tau } => {
            let g = read(germ)?;
            let l = labels(&g);
            let mut texts = String::new();
            let mut values = Vec::new();
            for t in tau {
                let t: GaussRat = parse_constant(t).map_err(|e| (e, Some(t.clone())))?;
                if t.is_zero() {
                    return Err((Error::InvalidInput("tau must be nonzero".into()), None));
                }
                let (form, ps, ctx) = generic_polars_of(&g.poly, &t, &settings).map_err(fail(germ))?;
                texts.push_str(&format!("tau = {}\n", t));
                texts.push_str(&report::polars_text(&g.poly, &form, &ps, &ctx, &l));
                values.push(report::polars_json("generic-polars", &g.poly, &form, &ps, &ctx, &l));
            }
            emit(o.json, texts, || report::to_json(&values));
        }
        Command::Milnor { germ } => {
            let g = read(germ)?;
            let l = labels(&g);
            let mu = milnor_of(&g.poly, &settings).map_err(fail(germ))?;
            let oracle = milnor_oracle(&g.poly);
            let text = match oracle {
                Some(r) => format!("Milnor number: {} (resultants: {})\n", mu, r),
                None => format!("Milnor number: {}\n", mu),
            };
            emit(o.json, text, || report::to_json(&report::milnor_json(&g.poly, mu, oracle, &l)));
            if oracle.is_some_and(|r| r as i64 != mu) {
                return Err((Error::StructureViolation(format!("resultants give {}", oracle.unwrap())), Some(germ.clone())));
            }
        }
        Command::Signature { germ } => {
            let g = read(germ)?;
            let l = labels(&g);
            let s = signature_of(&g.poly, &settings).map_err(fail(germ))?;
            emit(o.json, report::signature_text(&s), || report::to_json(&report::signature_json(&g.poly, &s, &l)));
        }
        Command::Compare { first, second } => {
            let (f, g) = (read(first)?, read(second)?);
            let (lf, lg) = (labels(&f), labels(&g));
            let (verdict, a, b) = compare_germs(&f.poly, &g.poly, &settings).map_err(|e| (e, None))?;
            let text = match &verdict {
                Verdict::Distinguished { witness } => format!("DISTINGUISHED\nwitness: {}\n", witness),
                Verdict::Indistinguishable => "INDISTINGUISHABLE\n".to_string(),
            };
            emit(o.json, text, || {
                report::to_json(&report::compare_json([(&f.poly, &lf), (&g.poly, &lg)], &verdict, [&a, &b]))
            });
            if matches!(verdict, Verdict::Distinguished { .. }) {
                return Ok(ExitCode::from(EXIT_DISTINGUISHED));
            }
        }
        Command::Selftest => {
            let outcomes = selftest::run(&settings);
            if o.json {
                println!("{}", report::to_json(&outcomes));
            } else {
                for c in &outcomes {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    println!("criterion {}: {} {} ({})", c.criterion, mark, c.title, c.detail);
                }
            }
            if outcomes.iter().any(|c| !c.passed) {
                return Ok(ExitCode::from(EXIT_ANALYTIC));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.opts.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {}", e);
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err((e, input)) => report_error(&e, input.as_deref()),
    }
}
