//! `conesing`: JSON front end for the cone singularity toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error,
//! 3 unmet precondition, 4 internal invariant violation.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use conesing_core::counterexamples::verify_examples;
use conesing_core::demazure::{default_bound, hilbert_series_through, is_smooth, presentation};
use conesing_core::enumerate::{audit_catalog, enumerate, mld_spectrum, search_bounds, CatalogEntry, SearchParams};
use conesing_core::quotient::{
    cartier_index_of_kx, horizontal_log_discrepancy, log_fano_quotient, necessary_eps_conditions,
    vertex_decomposition, vertex_log_discrepancy,
};
use conesing_core::resolution::{
    blow_down, build_graph, is_eps_lc_x, link_determinant, mld_vertex, summarize, transverse_types,
};
use conesing_core::scalar::{format_rational, parse_rational};
use conesing_core::toric::{
    cartier_index, cone_of_x, random_valuations, rng, verify_comparison, Fan, ToricDivisor, DEFAULT_SEED,
};
use conesing_core::{ConeError, CurveCouple, QDivisorP1, Rational};

const SCHEMA: &str = "conesing/1";

#[derive(Parser)]
#[command(name = "conesing", version, about = "Exact invariants of cone singularities")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every invariant of a couple in one report.
    Describe {
        #[arg(long)]
        couple: PathBuf,
    },
    /// Hilbert function and series of the section ring.
    Hilbert {
        #[arg(long)]
        couple: PathBuf,
        #[arg(long, default_value_t = 0)]
        through: usize,
    },
    /// Generators, relations and equations of the section ring.
    Presentation {
        #[arg(long)]
        couple: PathBuf,
        #[arg(long)]
        gen_bound: Option<usize>,
        #[arg(long)]
        rel_bound: Option<usize>,
    },
    /// Log Fano quotient and vertex log discrepancy.
    Discrepancy {
        #[arg(long)]
        couple: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
        #[arg(long)]
        isotropy_bound: Option<u64>,
    },
    /// Minimal resolution graph, discrepancies and mld.
    Resolve {
        #[arg(long)]
        couple: PathBuf,
    },
    /// Catalog of eps-lc cone surfaces with bounded isotropy.
    Enumerate {
        #[arg(long, value_parser = rational_arg)]
        epsilon: Rational,
        #[arg(long)]
        isotropy_bound: u64,
    },
    /// The set of minimal log discrepancies of a catalog.
    MldSet {
        #[arg(long, value_parser = rational_arg)]
        epsilon: Rational,
        #[arg(long)]
        isotropy_bound: u64,
    },
    /// Compare log discrepancies over a toric base.
    ToricCheck {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        divisor: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the three families that show the bounds are needed.
    VerifyExamples {
        #[arg(long, default_value_t = 200)]
        an_n: i64,
        #[arg(long, default_value_t = 500)]
        an_box: i64,
        #[arg(long, default_value_t = 50)]
        rnc_max: i64,
    },
    /// Re-check a catalog, or a freshly enumerated one.
    Audit {
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, value_parser = rational_arg)]
        epsilon: Option<Rational>,
        #[arg(long)]
        isotropy_bound: Option<u64>,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Failure {
    Parse(String),
    Precondition(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Precondition(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<ConeError> for Failure {
    fn from(e: ConeError) -> Self {
        if e.is_parse() {
            Failure::Parse(e.to_string())
        } else if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Precondition(e.to_string())
        }
    }
}

/// A report and whether its checks passed.
struct Outcome {
    report: Value,
    verified: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, verified: true }
    }
}

type Run = Result<Outcome, Failure>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoupleFile {
    divisor: QDivisorP1,
    #[serde(default)]
    #[allow(dead_code)]
    meta: Option<Value>,
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Parse(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn read_couple(path: &Path) -> Result<CurveCouple, Failure> {
    let file: CoupleFile = read_json(path)?;
    Ok(CurveCouple::new(file.divisor)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn params(epsilon: Rational, isotropy_bound: u64) -> Result<SearchParams, Failure> {
    Ok(SearchParams::new(epsilon, isotropy_bound)?)
}

fn describe(path: &Path) -> Run {
    let c = read_couple(path)?;
    let pair = log_fano_quotient(&c);
    let vertex = vertex_decomposition(&c)?;
    let graph = build_graph(&c)?;
    let horizontal: Vec<Value> = c
        .divisor()
        .points()
        .map(|p| {
            Ok(json!({
                "point": to_value(p),
                "log_discrepancy": q(&horizontal_log_discrepancy(&c, p)?),
            }))
        })
        .collect::<Result<_, ConeError>>()?;
    let isotropies: Vec<Value> = c
        .divisor()
        .points()
        .map(|p| json!({"point": to_value(p), "order": c.isotropy_order(p)}))
        .collect();
    let nf = c.normal_form();
    Ok(Outcome::ok(json!({
        "couple": to_value(&c),
        "degree": q(&c.degree()),
        "normal_form": to_value(&nf),
        "quotient_boundary": to_value(&pair.boundary),
        "log_canonical_degree": q(&pair.log_canonical_degree()),
        "a_E0": q(&vertex_log_discrepancy(&c)?),
        "horizontal": horizontal,
        "vertex_decomposition": to_value(&vertex),
        "cartier_index_KX": cartier_index_of_kx(&c)?,
        "mld": q(&mld_vertex(&c)?),
        "smooth": is_smooth(&c)?,
        "graph": to_value(&graph),
        "minimal_graph": to_value(&blow_down(&graph)),
        "determinant": link_determinant(&graph),
        "hilbert": to_value(&hilbert_series_through(&c, 0)),
        "isotropies": isotropies,
        "max_isotropy": c.max_isotropy(),
    })))
}

fn hilbert(path: &Path, through: usize) -> Run {
    let c = read_couple(path)?;
    Ok(Outcome::ok(to_value(&hilbert_series_through(&c, through))))
}

fn present(path: &Path, gen_bound: Option<usize>, rel_bound: Option<usize>) -> Run {
    let c = read_couple(path)?;
    let gb = gen_bound.unwrap_or_else(|| default_bound(&c));
    let rb = rel_bound.unwrap_or(gb);
    Ok(Outcome::ok(to_value(&presentation(&c, gb, rb)?)))
}

fn discrepancy(path: &Path, epsilon: Option<Rational>, isotropy_bound: Option<u64>) -> Run {
    let c = read_couple(path)?;
    let pair = log_fano_quotient(&c);
    let mut report = json!({
        "quotient_boundary": to_value(&pair.boundary),
        "log_canonical_degree": q(&pair.log_canonical_degree()),
        "a_E0": q(&vertex_log_discrepancy(&c)?),
        "vertex_decomposition": to_value(&vertex_decomposition(&c)?),
        "cartier_index_KX": cartier_index_of_kx(&c)?,
    });
    if let Some(eps) = epsilon {
        let n = isotropy_bound.unwrap_or_else(|| c.max_isotropy());
        report["necessary_conditions"] = to_value(&necessary_eps_conditions(&c, &eps, n)?);
        report["eps_lc"] = Value::Bool(is_eps_lc_x(&c, &eps)?);
    }
    Ok(Outcome::ok(report))
}

fn resolve(path: &Path) -> Run {
    let c = read_couple(path)?;
    let g = build_graph(&c)?;
    Ok(Outcome::ok(json!({
        "graph": to_value(&g),
        "log_discrepancies": g.log_discrepancies().iter().map(q).collect::<Vec<_>>(),
        "minimal_graph": to_value(&blow_down(&g)),
        "summary": to_value(&summarize(&g)),
        "mld": q(&mld_vertex(&c)?),
        "transverse": to_value(&transverse_types(&c)?),
    })))
}

fn catalog_report(p: &SearchParams, catalog: &[CatalogEntry]) -> Result<Value, Failure> {
    Ok(json!({
        "params": to_value(p),
        "bounds": to_value(&search_bounds(p)?),
        "summary": {
            "count": catalog.len(),
            "mld_spectrum": mld_spectrum(catalog).iter().map(q).collect::<Vec<_>>(),
        },
        "catalog": to_value(&catalog),
    }))
}

fn run_enumerate(epsilon: Rational, isotropy_bound: u64) -> Run {
    let p = params(epsilon, isotropy_bound)?;
    let catalog = enumerate(&p)?;
    Ok(Outcome::ok(catalog_report(&p, &catalog)?))
}

fn mld_set(epsilon: Rational, isotropy_bound: u64) -> Run {
    let p = params(epsilon, isotropy_bound)?;
    let catalog = enumerate(&p)?;
    Ok(Outcome::ok(json!({
        "params": to_value(&p),
        "count": catalog.len(),
        "mld_spectrum": mld_spectrum(&catalog).iter().map(q).collect::<Vec<_>>(),
    })))
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var("CONESING_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Parse(format!("CONESING_SEED is not an unsigned integer: {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn toric_check(fan: &Path, divisor: &Path, samples: usize, seed: Option<u64>) -> Run {
    let fan: Fan = read_json(fan)?;
    let coeffs: ToricDivisor = read_json(divisor)?;
    let d = ToricDivisor::new(&fan, coeffs.coeffs)?;
    let seed = match seed {
        Some(s) => s,
        None => seed_from_env()?,
    };
    let mut vs = fan.rays().to_vec();
    vs.extend(random_valuations(&mut rng(seed), fan.rank(), samples, 9));
    let cone = cone_of_x(&fan, &d)?;
    let report = verify_comparison(&fan, &d, &vs)?;
    Ok(Outcome {
        verified: report.is_clean(),
        report: json!({
            "seed": seed,
            "cone": to_value(&cone),
            "cartier_index": cartier_index(&fan, &d)?,
            "comparison": to_value(&report),
        }),
    })
}

fn run_verify_examples(an_n: i64, an_box: i64, rnc_max: i64) -> Run {
    let r = verify_examples(an_n, an_box, rnc_max)?;
    Ok(Outcome {
        verified: r.pass(),
        report: to_value(&r),
    })
}

#[derive(Deserialize)]
struct CatalogFile {
    params: SearchParams,
    catalog: Vec<CatalogEntry>,
}

fn audit(catalog: Option<PathBuf>, epsilon: Option<Rational>, isotropy_bound: Option<u64>) -> Run {
    let (p, entries) = match catalog {
        Some(path) => {
            let file: CatalogFile = read_json(&path)?;
            let p = params(
                epsilon.unwrap_or(file.params.epsilon),
                isotropy_bound.unwrap_or(file.params.isotropy_bound),
            )?;
            (p, file.catalog)
        }
        None => {
            let (Some(eps), Some(n)) = (epsilon, isotropy_bound) else {
                return Err(Failure::Precondition(
                    "audit needs --catalog or both --epsilon and --isotropy-bound".into(),
                ));
            };
            let p = params(eps, n)?;
            let entries = enumerate(&p)?;
            (p, entries)
        }
    };
    let report = audit_catalog(&entries, &p);
    Ok(Outcome {
        verified: report.is_clean(),
        report: json!({ "params": to_value(&p), "audit": to_value(&report) }),
    })
}

fn dispatch(cmd: Command) -> Run {
    match cmd {
        Command::Describe { couple } => describe(&couple),
        Command::Hilbert { couple, through } => hilbert(&couple, through),
        Command::Presentation {
            couple,
            gen_bound,
            rel_bound,
        } => present(&couple, gen_bound, rel_bound),
        Command::Discrepancy {
            couple,
            epsilon,
            isotropy_bound,
        } => discrepancy(&couple, epsilon, isotropy_bound),
        Command::Resolve { couple } => resolve(&couple),
        Command::Enumerate {
            epsilon,
            isotropy_bound,
        } => run_enumerate(epsilon, isotropy_bound),
        Command::MldSet {
            epsilon,
            isotropy_bound,
        } => mld_set(epsilon, isotropy_bound),
        Command::ToricCheck {
            fan,
            divisor,
            samples,
            seed,
        } => toric_check(&fan, &divisor, samples, seed),
        Command::VerifyExamples { an_n, an_box, rnc_max } => run_verify_examples(an_n, an_box, rnc_max),
        Command::Audit {
            catalog,
            epsilon,
            isotropy_bound,
        } => audit(catalog, epsilon, isotropy_bound),
    }
}

fn with_schema(report: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(SCHEMA.into()));
    match report {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

fn emit(report: &Value, out: Option<&Path>) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(4);
        }
    }
    match dispatch(cli.command) {
        Ok(outcome) => {
            if let Err(e) = emit(&with_schema(outcome.report), cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(4);
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
