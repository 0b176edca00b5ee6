//! `qpb`: build the quantized coordinate rings, reduce expressions, run the
//! verification suites, and emit machine-readable reports.
//!
//! Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error,
//! 3 reduction budget exhausted.

mod output;
mod suites;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qpb_core::coeff::Rat;
use qpb_core::freealg::{parse, NcPoly};
use qpb_core::localization::{check_order_independence, localize};
use qpb_core::qgroups::{self, qminor, Algebra, AlgebraFamily, AlgebraSpec};
use qpb_core::twist::{twisted_product, CocycleSpec, TwistMode};
use qpb_core::Error;

use output::{Format, SuiteParams};

#[derive(Parser)]
#[command(name = "qpb", version, about = "Exact verification engine for quantum principal bundles on quantum projective spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a presented algebra and print a summary.
    Build {
        /// Algebra family: mq, glq, slq, pq, torus, projq.
        #[arg(long, default_value = "slq")]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        n: u8,
        /// Grassmannian block size (with `--algebra pq-block`).
        #[arg(long)]
        r: Option<u8>,
        /// Build the multiparametric variant.
        #[arg(long)]
        twist: bool,
        /// Phase exponent file: lines `j k g^m`, `#` comments.
        #[arg(long)]
        theta_file: Option<String>,
    },
    /// Reduce an expression to its canonical normal form.
    Nf {
        #[arg(long, default_value = "mq")]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        n: u8,
        /// Localize at these column indices first (comma separated).
        #[arg(long, value_delimiter = ',')]
        invert: Vec<u8>,
        /// Specialize q to an exact rational (`3`, `2/3`) or `symbolic`.
        #[arg(long, default_value = "symbolic")]
        q: String,
        /// Reduction budget override (rule applications).
        #[arg(long)]
        budget: Option<u64>,
        expr: String,
    },
    /// Print a quantum determinant or minor in normal form.
    Det {
        #[arg(long, default_value_t = 2)]
        n: u8,
        #[arg(long, value_delimiter = ',')]
        rows: Vec<u8>,
        #[arg(long, value_delimiter = ',')]
        cols: Vec<u8>,
    },
    /// Apply the parabolic coaction (id ⊗ π)Δ to an expression.
    Coact {
        #[arg(long, default_value_t = 2)]
        n: u8,
        /// Localize at these indices first; the coaction extends with
        /// d_i^-1 -> d_i^-1 ⊗ p_11^-1.
        #[arg(long, value_delimiter = ',')]
        invert: Vec<u8>,
        expr: String,
    },
    /// Build an Ore localization and optionally check order independence.
    Localize {
        #[arg(long, default_value_t = 2)]
        n: u8,
        #[arg(long, value_delimiter = ',', required = true)]
        invert: Vec<u8>,
        /// Compare the iterated builds over all insertion orders.
        #[arg(long)]
        check_order: bool,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a verification suite and emit a report.
    Verify {
        /// confluence | hopf | determinant | factorization | cleaving |
        /// trivialization | canonical | coinvariants | sheaf | grassmannian
        /// | twist | classical | negative | all
        suite: String,
        #[arg(long, default_value_t = 2)]
        n: u8,
        #[arg(long)]
        r: Option<u8>,
        /// Chart index (cleaving/trivialization/canonical); all charts when
        /// omitted.
        #[arg(long)]
        k: Option<u8>,
        #[arg(long)]
        degree: Option<usize>,
        /// Specialize q before the classical suite (`1` by definition).
        #[arg(long, default_value = "symbolic")]
        q: String,
        #[arg(long)]
        theta_file: Option<String>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Twisted product of two expressions.
    TwistProduct {
        /// gamma | sigma | both
        #[arg(long, default_value = "both")]
        mode: String,
        #[arg(long)]
        theta_file: Option<String>,
        #[arg(long, default_value = "slq")]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        n: u8,
        left: String,
        right: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => ExitCode::from(3),
                Error::Syntax { .. }
                | Error::IndexOutOfRange(_)
                | Error::LetterNotAdmitted(_)
                | Error::InvalidSpec(_) => ExitCode::from(2),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn family(name: &str) -> Result<AlgebraFamily, Error> {
    Ok(match name {
        "mq" => AlgebraFamily::Mn,
        "glq" => AlgebraFamily::GLn,
        "slq" => AlgebraFamily::SLn,
        "pq" => AlgebraFamily::Parabolic,
        "torus" => AlgebraFamily::Torus,
        "projq" => AlgebraFamily::ProjectiveRing,
        other => return Err(Error::InvalidSpec(format!("unknown algebra `{other}`"))),
    })
}

fn parse_q(text: &str) -> Result<Option<Rat>, Error> {
    if text == "symbolic" {
        return Ok(None);
    }
    let parts: Vec<&str> = text.splitn(2, '/').collect();
    let bad = || Error::InvalidSpec(format!("cannot parse q value `{text}`"));
    let num: i64 = parts[0].trim().parse().map_err(|_| bad())?;
    let den: i64 = if parts.len() == 2 { parts[1].trim().parse().map_err(|_| bad())? } else { 1 };
    if den == 0 {
        return Err(bad());
    }
    Ok(Some(qpb_core::coeff::ratio(num, den)))
}

/// Phase exponent file: `j k g^m` per line, `#` comments.  Rational
/// exponents are rejected: the formal phases only take integer powers.
fn parse_theta(path: &str, n: u8) -> Result<CocycleSpec, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {path}: {e}")))?;
    let mut spec = CocycleSpec::trivial(n);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| {
            Error::InvalidSpec(format!("{path}:{}: {msg}", lineno + 1))
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(bad("expected `j k g^m`"));
        }
        let j: u8 = fields[0].parse().map_err(|_| bad("bad row index"))?;
        let k: u8 = fields[1].parse().map_err(|_| bad("bad column index"))?;
        let exp = fields[2]
            .strip_prefix("g^")
            .ok_or_else(|| bad("exponent must be written g^m"))?;
        if exp.contains('/') || exp.contains('.') {
            return Err(bad("rational phase exponents are not supported; integers only"));
        }
        let m: i64 = exp.parse().map_err(|_| bad("bad integer exponent"))?;
        spec.set(j, k, m)?;
    }
    Ok(spec)
}

fn build_algebra(name: &str, n: u8, twist: bool, theta: Option<&CocycleSpec>) -> Result<Algebra, Error> {
    let fam = family(name)?;
    let spec = AlgebraSpec { family: fam, n, r: None, twist };
    if let (true, Some(t)) = (twist, theta) {
        let untwisted = qgroups::build(AlgebraSpec { twist: false, ..spec })?;
        return qpb_core::twist::build_twisted_of(&untwisted, t);
    }
    qgroups::build(spec)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Build { algebra, n, r, twist, theta_file } => {
            if let Some(r) = r {
                let alg = qgroups::parabolic_block(n, r)?;
                println!("{}", summary(&alg));
                return Ok(ExitCode::SUCCESS);
            }
            let theta = theta_file.as_deref().map(|p| parse_theta(p, n)).transpose()?;
            let alg = build_algebra(&algebra, n, twist, theta.as_ref())?;
            println!("{}", summary(&alg));
            Ok(ExitCode::SUCCESS)
        }
        Command::Nf { algebra, n, invert, q, budget, expr } => {
            let alg = build_algebra(&algebra, n, false, None)?;
            let mut pres = if invert.is_empty() {
                alg.pres.clone()
            } else {
                localize(&alg, &invert)?.pres
            };
            if let Some(b) = budget {
                pres.budget = b;
            }
            let poly = parse(&expr, &pres.context())?;
            let mut nf = pres.normal_form(&poly)?;
            if let Some(qv) = parse_q(&q)? {
                nf = nf.map_scalars(|c| c.specialize(&qv, false))?;
            }
            println!("{nf}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Det { n, rows, cols } => {
            let alg = qgroups::build_mn(n)?;
            let det = if rows.is_empty() && cols.is_empty() {
                qgroups::det_q(n)
            } else {
                qminor(&rows, &cols)?
            };
            println!("{}", alg.pres.normal_form(&det)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Coact { n, invert, expr } => {
            let sl = qgroups::build_sln(n)?;
            if invert.is_empty() {
                let pq = qgroups::build_parabolic(n)?;
                let poly = parse(&expr, &sl.pres.context())?;
                println!("{}", sl.coaction_pi(&pq.pres, &poly)?);
            } else {
                let loc = localize(&sl, &invert)?;
                let poly = parse(&expr, &loc.pres.context())?;
                println!("{}", loc.coaction(&poly)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Localize { n, invert, check_order, degree, format, seed } => {
            let sl = qgroups::build_sln(n)?;
            let loc = localize(&sl, &invert)?;
            let fmt = Format::parse(&format)?;
            let degree = degree.unwrap_or_else(|| qgroups::default_cap(n));
            let mut report = qpb_core::report::Report::new();
            report.push(qpb_core::report::Check::pass(
                format!("localize/build/{}", loc.pres.name),
                format!(
                    "{} built with {} rules over {} letters",
                    loc.pres.name,
                    loc.pres.rules().len(),
                    loc.pres.letters().len()
                ),
            ));
            if check_order {
                report.extend(check_order_independence(&sl, &invert, degree)?);
            }
            let params = SuiteParams {
                n: Some(n),
                k: None,
                r: None,
                degree: Some(degree),
                seed,
                theta: None,
            };
            output::emit("localize", &params, report, fmt)
        }
        Command::Verify { suite, n, r, k, degree, q, theta_file, format, seed } => {
            let fmt = Format::parse(&format)?;
            let theta = theta_file.as_deref().map(|p| parse_theta(p, n)).transpose()?;
            let params = SuiteParams {
                n: Some(n),
                k,
                r,
                degree,
                seed,
                theta: theta_file.clone(),
            };
            let report = suites::run_suite(&suite, n, r, k, degree, &q, theta.as_ref(), seed)?;
            output::emit(&suite, &params, report, fmt)
        }
        Command::TwistProduct { mode, theta_file, algebra, n, left, right } => {
            let mode = match mode.as_str() {
                "gamma" => TwistMode::Gamma,
                "sigma" => TwistMode::Sigma,
                "both" => TwistMode::Both,
                other => {
                    return Err(Error::InvalidSpec(format!(
                        "unknown mode `{other}` (gamma|sigma|both)"
                    )))
                }
            };
            let theta = match theta_file.as_deref() {
                Some(p) => parse_theta(p, n)?,
                None => CocycleSpec::generic(n),
            };
            let alg = build_algebra(&algebra, n, false, None)?;
            let ctx = alg.pres.context();
            let l: NcPoly = parse(&left, &ctx)?;
            let r: NcPoly = parse(&right, &ctx)?;
            println!("{}", twisted_product(mode, &theta, &alg.pres, &l, &r)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn summary(alg: &Algebra) -> String {
    let pres = &alg.pres;
    let hopf = match &alg.hopf {
        None => "none",
        Some(h) if h.antipode.is_empty() => "bialgebra (Δ, ε)",
        Some(_) => "Hopf (Δ, ε, S)",
    };
    format!(
        "{}: {} generators, {} defining rules, {} after completion (degree cap {}), structure maps: {}",
        pres.name,
        pres.letters().len(),
        pres.defining_rules().len(),
        pres.rules().len(),
        pres.degree_cap,
        hopf
    )
}
