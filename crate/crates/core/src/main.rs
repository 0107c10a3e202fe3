use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ppoly::arith::{parse_real, to_decimal, BigComplex, PrecisionContext};
use ppoly::cli::{build_family, run_suite, write_artifacts, write_csv, write_json, SuiteConfig, SuiteItem, CACHE_ENV, FORM_FAMILIES};
use ppoly::forms::{eigenforms_cached, eisenstein_expansion, FourierExpansion};
use ppoly::lfun::{completed_l_derivative, required_truncation};
use ppoly::periodpoly::LaurentPoly;
use ppoly::roots::{unimodularity_report, ExclusionPolicy, Verdict};
use ppoly::{Error, Result};

#[derive(Parser)]
#[command(name = "ppoly", version, about = "Period polynomials of level-1 modular forms and their zeros")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
struct Opts {
    /// Working precision in bits
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[arg(long, global = true)]
    k_min: Option<u32>,
    #[arg(long, global = true)]
    k_max: Option<u32>,
    #[arg(long, global = true)]
    m_max: Option<u32>,
    #[arg(long, global = true)]
    pass_tol: Option<f64>,
    #[arg(long, global = true)]
    fail_tol: Option<f64>,
    /// Directory for JSON and CSV artifacts
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached eigenform coefficients
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Hecke eigenforms of weight k
    Forms {
        #[arg(long)]
        k: u32,
        /// Number of coefficients to print
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Lambda_f^(m)(s)
    Lvalue {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        s: String,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
    /// Coefficients of a polynomial
    Poly {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Roots of a polynomial and its unimodularity verdict
    Zeros {
        #[command(flatten)]
        poly: PolyArgs,
        /// none, exclude-reals or exclude-quadruple-and-zero
        #[arg(long, default_value = "none")]
        policy: String,
    },
    /// Run a verification suite
    Verify { suite: String },
    /// Summarize suite reports written by `verify`
    Report {
        /// Report files or directories holding them
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct FormArgs {
    #[arg(long)]
    k: u32,
    /// Index of the eigenform (by size of a_2)
    #[arg(long, default_value_t = 0)]
    form: usize,
    /// Use the Eisenstein series instead of an eigenform
    #[arg(long)]
    eisenstein: bool,
}

#[derive(Args, Clone)]
struct PolyArgs {
    /// r, q, zagier-tilde, brown-closed, ramanujan, lalin-smyth, p-m, correction-p or sigma-ss
    #[arg(long)]
    family: String,
    #[command(flatten)]
    form: FormArgs,
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Keep only the odd or even part
    #[arg(long)]
    parity: Option<String>,
}

fn context(opts: &Opts) -> Result<PrecisionContext> {
    PrecisionContext::new(opts.precision_bits.unwrap_or(200))
}

fn load_form(args: &FormArgs, ctx: &PrecisionContext, opts: &Opts) -> Result<FourierExpansion> {
    let n = required_truncation(args.k, ctx);
    if args.eisenstein {
        return eisenstein_expansion(args.k, n);
    }
    let pkg = eigenforms_cached(args.k, n, ctx, opts.cache.as_deref())?;
    pkg.forms
        .get(args.form)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("weight {} has {} eigenforms", args.k, pkg.forms.len())))
}

fn build_poly(args: &PolyArgs, ctx: &PrecisionContext, opts: &Opts) -> Result<LaurentPoly> {
    let form = if FORM_FAMILIES.contains(&args.family.as_str()) {
        Some(load_form(&args.form, ctx, opts)?)
    } else {
        None
    };
    build_family(&args.family, form.as_ref(), args.form.k, args.m, args.parity.as_deref(), ctx)
}

fn suite_config(suite: &str, opts: &Opts) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(suite);
    macro_rules! set {
        ($($field:ident <- $opt:ident),*) => {$(if let Some(v) = opts.$opt { cfg.$field = v; })*};
    }
    set!(k_min <- k_min, k_max <- k_max, m_max <- m_max, precision_bits <- precision_bits, pass_tol <- pass_tol, fail_tol <- fail_tol);
    cfg.out = opts.out.clone();
    if opts.cache.is_some() {
        cfg.cache = opts.cache.clone();
    }
    cfg
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Inconclusive => 2,
    }
}

fn run(cli: Cli) -> Result<u8> {
    let opts = &cli.opts;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.cmd {
        Command::Forms { k, count } => {
            let ctx = context(opts)?;
            let pkg = eigenforms_cached(*k, required_truncation(*k, &ctx).max(*count), &ctx, opts.cache.as_deref())?;
            let forms: Vec<_> = pkg
                .forms
                .iter()
                .zip(&pkg.certificates)
                .map(|(f, c)| {
                    json!({
                        "coefficients": (0..=*count).map(|n| to_decimal(&f.coeff(n, ctx.bits()))).collect::<Vec<_>>(),
                        "t2_residual": to_decimal(&c.t2_residual),
                        "t3_residual": to_decimal(&c.t3_residual),
                    })
                })
                .collect();
            write_json(&json!({ "k": k, "precision_bits": pkg.precision, "forms": forms }), &mut out)?;
        }
        Command::Lvalue { form, s, m } => {
            let ctx = context(opts)?;
            let f = load_form(form, &ctx, opts)?;
            let s = BigComplex::from_real(parse_real(s, ctx.bits() + 64)?);
            let v = completed_l_derivative(&f, &s, *m, &ctx)?;
            write_json(
                &json!({
                    "k": form.k, "m": m, "s": to_decimal(&v.s.re),
                    "re": to_decimal(&v.value.re), "im": to_decimal(&v.value.im),
                    "est_error": to_decimal(&v.est_error),
                }),
                &mut out,
            )?;
        }
        Command::Poly { poly } => {
            let ctx = context(opts)?;
            let p = build_poly(poly, &ctx, opts)?;
            match opts.format {
                Format::Json => write_json(&p, &mut out)?,
                Format::Csv => {
                    writeln!(out, "exponent,re,im")?;
                    for e in p.support() {
                        let c = p.coeff(e);
                        writeln!(out, "{e},{},{}", to_decimal(&c.re), to_decimal(&c.im))?;
                    }
                }
            }
        }
        Command::Zeros { poly, policy } => {
            let ctx = context(opts)?;
            let p = build_poly(poly, &ctx, opts)?;
            let tol = suite_config("conj-derivatives", opts).tolerances();
            let mut z = unimodularity_report(&p, ExclusionPolicy::parse(policy)?, &tol, &ctx)?;
            if poly.family == "q" {
                z = z.with_order(poly.m);
            }
            match opts.format {
                Format::Json => write_json(&z, &mut out)?,
                Format::Csv => write_csv([&z], &mut out)?,
            }
            return Ok(verdict_code(z.verdict));
        }
        Command::Verify { suite } => {
            let cfg = suite_config(suite, opts);
            let report = run_suite(&cfg)?;
            match opts.format {
                Format::Json => write_json(&report, &mut out)?,
                Format::Csv => {
                    let zeros = report.items.iter().filter_map(|i| match i {
                        SuiteItem::Zeros(z) => Some(z),
                        _ => None,
                    });
                    write_csv(zeros, &mut out)?
                }
            }
            if let Some(dir) = &cfg.out {
                write_artifacts(&report, dir)?;
            }
            eprintln!(
                "{}: {:?} ({} pass, {} fail, {} inconclusive) in {:.1}s at {} bits",
                report.suite,
                report.verdict,
                report.counts.pass,
                report.counts.fail,
                report.counts.inconclusive,
                report.elapsed.as_secs_f64(),
                cfg.precision_bits
            );
            return Ok(report.exit_code() as u8);
        }
        Command::Report { paths } => return summarize(paths, &mut out),
    }
    Ok(0)
}

fn summarize(paths: &[PathBuf], out: &mut impl Write) -> Result<u8> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut v: Vec<PathBuf> = std::fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            v.sort();
            files.extend(v);
        } else {
            files.push(p.clone());
        }
    }
    let mut overall = Verdict::Pass;
    for f in files {
        let v: serde_json::Value = serde_json::from_reader(std::fs::File::open(&f)?)?;
        let verdict: Verdict = serde_json::from_value(v["verdict"].clone())
            .map_err(|_| Error::Parse(format!("{} is not a suite report", f.display())))?;
        overall = overall.and(verdict);
        let c = &v["counts"];
        writeln!(
            out,
            "{:<22} {:<13} pass {:>4}  fail {:>4}  inconclusive {:>4}",
            v["suite"].as_str().unwrap_or("?"),
            format!("{verdict:?}").to_lowercase(),
            c["pass"],
            c["fail"],
            c["inconclusive"]
        )?;
    }
    Ok(verdict_code(overall))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
