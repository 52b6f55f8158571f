//! `cdu`: build trace-form permutation families, measure their c-differential
//! uniformity and run the exhaustive verification suites.

mod args;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use cdu_core::families::h_condition_exponent_alt;
use cdu_core::{
    build_family, c_uniformity, check_h_permutation_condition, classify_theorem_case,
    is_permutation, parse_element, run_suite, scan_c, solve_affine, write_cddt_csv,
    AffineLinearizedEq, CRange, ElementLiteral, Family, Field, HPrecondition, Suite,
    VerificationSuiteResult,
};

use args::FamilyArgs;
use report::{
    AnnotatedReport, FieldInfo, GammaRow, GammaScanDocument, GammaSummary, Metadata,
    ReportDocument, TOOL_VERSION,
};

#[derive(Debug, Parser)]
#[command(
    name = "cdu",
    version,
    about = "c-differential uniformity of trace-form permutations over GF(2^m)"
)]
struct Cli {
    /// worker threads (0 = one per core)
    #[arg(long, env = "CDU_THREADS", default_value_t = 0, global = true)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Report,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a family table and report its c-uniformity for a range of c
    Analyze {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "report")]
        format: Format,
    },
    /// Run verification suites; exits nonzero if any check fails
    Verify {
        /// t1, t2, t3, lemma or all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 12)]
        max_m: u32,
        /// also print every individual verdict
        #[arg(long)]
        verbose: bool,
        /// write the full results as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the full c-DDT for a single c as CSV
    Ddt {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        omit_zero: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve x^(2^i) + alpha*x + beta = 0 over F_{2^t}
    Lemma {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Sweep every admissible gamma for a family
    ScanGamma {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Analyze {
            family,
            out,
            format,
        } => analyze(&family, out.as_deref(), format),
        Command::Verify {
            suite,
            max_m,
            verbose,
            out,
        } => verify(&suite, max_m, verbose, out.as_deref()),
        Command::Ddt {
            family,
            omit_zero,
            out,
        } => ddt(&family, omit_zero, out.as_deref()),
        Command::Lemma { t, i, alpha, beta } => lemma(t, i, &alpha, &beta),
        Command::ScanGamma { family, out } => scan_gamma(&family, out.as_deref()),
    }
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn h_precondition(family: &FamilyArgs) -> HPrecondition {
    if family.override_h_precondition {
        HPrecondition::Override
    } else {
        HPrecondition::Enforce
    }
}

fn analyze(args: &FamilyArgs, out: Option<&Path>, format: Format) -> Result<ExitCode> {
    if format == Format::Csv {
        return ddt(args, false, out);
    }
    let start = Instant::now();
    let params = args.params(None)?;
    let field = params.field()?;
    let table = build_family(&field, &params, h_precondition(args))?;
    let (range, exclusions) = args.c_range(&field, "all")?;
    let reports = scan_c(&table, &range, &exclusions)?
        .into_iter()
        .map(|report| AnnotatedReport {
            theorem_case: classify_theorem_case(&field, params.t, report.c).ok(),
            report,
        })
        .collect();
    let doc = ReportDocument {
        tool_version: TOOL_VERSION,
        field: FieldInfo::from(&field),
        params,
        reports,
        metadata: Metadata {
            elapsed_seconds: start.elapsed().as_secs_f64(),
        },
    };
    write_json(out, &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn ddt(args: &FamilyArgs, omit_zero: bool, out: Option<&Path>) -> Result<ExitCode> {
    let params = args.params(None)?;
    let field = params.field()?;
    let table = build_family(&field, &params, h_precondition(args))?;
    if args.c_spec()?.is_none() {
        bail!("the c-DDT dump needs exactly one c");
    }
    let c = match args.c_range(&field, "")? {
        (CRange::Set(list), _) if list.len() == 1 => list[0],
        _ => bail!("the c-DDT dump needs exactly one c"),
    };
    let mut w = open_output(out)?;
    write_cddt_csv(&mut w, &table, c, omit_zero)
        .and_then(|_| w.flush())
        .with_context(|| match out {
            Some(p) => format!("cannot write {}", p.display()),
            None => "cannot write to stdout".into(),
        })?;
    Ok(ExitCode::SUCCESS)
}

fn verify(suite: &str, max_m: u32, verbose: bool, out: Option<&Path>) -> Result<ExitCode> {
    if max_m > cdu_core::field::MAX_DEGREE {
        bail!("--max-m must be at most {}", cdu_core::field::MAX_DEGREE);
    }
    let suites: Vec<Suite> = if suite.eq_ignore_ascii_case("all") {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let mut results = Vec::new();
    let mut ok = true;
    for s in suites {
        let r = run_suite(s, max_m)?;
        print_suite(&r, verbose);
        ok &= r.passed();
        results.push(r);
    }
    if out.is_some() {
        write_json(out, &results)?;
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn print_suite(r: &VerificationSuiteResult, verbose: bool) {
    let failed = r.failures().count();
    println!(
        "suite {} (max m {}): {} checks, {} failed, {:.2} s",
        r.suite,
        r.max_m,
        r.verdicts.len(),
        failed,
        r.elapsed_seconds
    );
    // one row per (instance without gamma, claim)
    let mut rows: Vec<(String, String, usize, usize)> = Vec::new();
    for v in &r.verdicts {
        let base = match v.instance.rsplit_once(" gamma=") {
            Some((head, _)) => head.to_string(),
            None => v.instance.clone(),
        };
        match rows
            .iter_mut()
            .find(|(b, c, _, _)| *b == base && *c == v.claim)
        {
            Some(row) => {
                row.2 += v.pass as usize;
                row.3 += 1;
            }
            None => rows.push((base, v.claim.clone(), v.pass as usize, 1)),
        }
    }
    for (base, claim, pass, total) in rows {
        let tag = if pass == total { "PASS" } else { "FAIL" };
        println!("  {tag}  {base:<28} {claim:<44} {pass}/{total}");
    }
    for v in &r.verdicts {
        if verbose || !v.pass {
            let tag = if v.pass { "pass" } else { "FAIL" };
            println!("    {tag}: {} | {} | {}", v.instance, v.claim, v.observed);
        }
    }
    for note in &r.notes {
        println!("  note: {note}");
    }
}

fn lemma(t: u32, i: u32, alpha: &str, beta: &str) -> Result<ExitCode> {
    let field = Field::with_degree(t)?;
    let alpha = parse_element(&field, alpha)?;
    let beta = parse_element(&field, beta)?;
    let eq = AffineLinearizedEq::new(field, i, alpha, beta)?;
    let roots = solve_affine(&eq);
    let allowed = cdu_core::linsolve::allowed_root_counts(i, t);
    println!("x^(2^{i}) + {alpha}*x + {beta} = 0 over F_2^{t}");
    println!("roots: {roots:?}");
    println!("count: {} (possible: 0, 1, {})", roots.len(), allowed[2]);
    Ok(ExitCode::SUCCESS)
}

fn scan_gamma(args: &FamilyArgs, out: Option<&Path>) -> Result<ExitCode> {
    let start = Instant::now();
    let base = args.params(Some("1"))?;
    let field = base.field()?;
    let m = field.degree();
    let s = match base.family {
        Family::F | Family::H => 2 * base.t,
        Family::G => base.t,
        Family::Generic => m,
    };
    let gammas: Vec<u32> = field
        .subfield_elements(s)?
        .into_iter()
        .filter(|&g| g != 0)
        .collect();
    let c_spec = args.c_spec()?;
    let cs = match &c_spec {
        Some(_) => {
            let (range, exclusions) = args.c_range(&field, "all")?;
            let cs: Vec<u32> = range
                .elements(&field)?
                .into_iter()
                .filter(|c| !exclusions.contains(c))
                .collect();
            Some(cs)
        }
        None => None,
    };

    let is_h = base.family == Family::H;
    let i = base.i.unwrap_or(1);
    let rows: Result<Vec<GammaRow>> = gammas
        .par_iter()
        .map(|&gamma| {
            let p = base.with_gamma(ElementLiteral::Bits(gamma as u64));
            let table = build_family(&field, &p, HPrecondition::Override)?;
            let (h_condition, h_condition_alt_exponent) = if is_h {
                let cond = check_h_permutation_condition(&field, base.t, base.n, i, gamma, None)?;
                let alt = check_h_permutation_condition(
                    &field,
                    base.t,
                    base.n,
                    i,
                    gamma,
                    Some(h_condition_exponent_alt(i)),
                )?;
                (Some(cond), Some(alt))
            } else {
                (None, None)
            };
            let max_uniformity = cs.as_ref().map(|cs| {
                cs.iter()
                    .map(|&c| c_uniformity(&table, c).uniformity)
                    .max()
                    .unwrap_or(0)
            });
            Ok(GammaRow {
                gamma,
                permutation: is_permutation(&table),
                h_condition,
                h_condition_alt_exponent,
                max_uniformity,
            })
        })
        .collect();
    let rows = rows?;

    let count = |f: &dyn Fn(&GammaRow) -> bool| rows.iter().filter(|r| f(r)).count();
    let summary = GammaSummary {
        gammas: rows.len(),
        permutations: count(&|r| r.permutation),
        condition_pass_not_permutation: is_h
            .then(|| count(&|r| r.h_condition == Some(true) && !r.permutation)),
        permutation_not_condition_pass: is_h
            .then(|| count(&|r| r.h_condition == Some(false) && r.permutation)),
        alt_exponent_pass_not_permutation: is_h
            .then(|| count(&|r| r.h_condition_alt_exponent == Some(true) && !r.permutation)),
    };
    let params = base.to_string();
    let params = match params.rsplit_once(" gamma=") {
        Some((head, _)) => head.to_string(),
        None => params,
    };
    let doc = GammaScanDocument {
        tool_version: TOOL_VERSION,
        field: FieldInfo::from(&field),
        params,
        gamma_subfield_degree: s,
        c: c_spec,
        rows,
        summary,
        metadata: Metadata {
            elapsed_seconds: start.elapsed().as_secs_f64(),
        },
    };
    write_json(out, &doc)?;
    Ok(ExitCode::SUCCESS)
}
