//! `polargap`: classify orthogonal forms, build their polar spaces, compute
//! gaps algebraically and intrinsically, and verify the characterization
//! checks.
//!
//! Exit codes: 0 success, 1 failed check or other error, 2 unreadable or
//! unsupported input, 3 degenerate form, 4 inconclusive, 5 budget exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polargap::catalog::full_catalog;
use polargap::chains::{intrinsic_gaps, verify_theorems, VerifyOptions, VerifyReport};
use polargap::forms::QuadraticForm;
use polargap::field::GaloisField;
use polargap::geometry::PolarSpace;
use polargap::io::{parse_form, AnyForm};
use polargap::Error;
use rayon::prelude::*;
use serde_json::json;

#[derive(Parser)]
#[command(name = "polargap", version, about = "Gaps of orthogonal polar spaces, computed two ways")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebraic rank, gaps and label of a form.
    Classify(FormArgs),
    /// Build the polar space of a form and export its points and lines.
    Geometry(FormArgs),
    /// Gaps from the decomposition and from chains in the geometry.
    Gaps(FormArgs),
    /// Run every check against one form.
    Verify(FormArgs),
    /// Run every check against the built-in catalog.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct Common {
    /// Chain-construction trials per form.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on enumerated points and visited subspaces.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Output::Human)]
    output: Output,
    /// Include per-check timings (output is then no longer reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct FormArgs {
    /// Form file.
    #[arg(long)]
    form: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CatalogArgs {
    /// Random equivalents generated per standard form.
    #[arg(long, default_value_t = 2)]
    equivalents: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Human,
    Structured,
}

/// Outcome of a command: printed text and exit status.
struct Done {
    text: String,
    code: u8,
}

impl Done {
    fn ok(text: String) -> Self {
        Done { text, code: 0 }
    }
}

impl Common {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            trials: self.trials as usize,
            seed: self.seed,
            budget: self.budget as usize,
            timings: self.timings,
        }
    }
}

enum Failure {
    Read(PathBuf, io::Error),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Read(..) => 2,
            Failure::Core(e) => match e {
                Error::Parse { .. } | Error::NotEnumerable(_) | Error::InvalidField(_) => 2,
                Error::Degenerate { .. } => 3,
                Error::Inconclusive(_) => 4,
                Error::BudgetExceeded { .. } => 5,
                _ => 1,
            },
        }
    }

    fn report(&self) {
        match self {
            Failure::Read(path, e) => eprintln!("polargap: cannot read {}: {e}", path.display()),
            Failure::Core(e) => {
                eprintln!("polargap: {e}");
                if matches!(e, Error::NotEnumerable(_)) {
                    eprintln!("polargap: only `classify` accepts infinite fields");
                }
            }
        }
    }
}

fn load(path: &PathBuf) -> Result<AnyForm, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Read(path.clone(), e))?;
    Ok(parse_form(&text)?)
}

fn finite(form: AnyForm) -> Result<QuadraticForm<GaloisField>, Error> {
    match form {
        AnyForm::Finite(f) => Ok(f),
        AnyForm::RationalFunction(f) => Err(Error::NotEnumerable(f.field().to_string())),
    }
}

fn classify(args: &FormArgs) -> Result<Done, Failure> {
    let form = load(&args.form)?;
    let g = form.gaps()?;
    let text = match args.common.output {
        Output::Human => format!("field {}\ndimension {}\n{g}\n", form.field_spec(), form.dim()),
        Output::Structured => format!(
            "{}\n",
            json!({
                "record": "classify",
                "field": form.field_spec().to_string(),
                "dimension": form.dim(),
                "n": g.n,
                "e": g.e,
                "p": g.p,
                "r": g.r,
                "label": g.label.to_string(),
            })
        ),
    };
    Ok(Done::ok(text))
}

fn geometry(args: &FormArgs) -> Result<Done, Failure> {
    let form = finite(load(&args.form)?)?;
    let space = PolarSpace::build_with_budget(&form, args.common.budget as usize)?;
    let text = match args.common.output {
        Output::Human => space.export(),
        Output::Structured => format!(
            "{}\n",
            json!({
                "record": "geometry",
                "field": space.field().to_string(),
                "dimension": space.dim(),
                "rank": space.rank(),
                "points": space.num_points(),
                "lines": space.lines().len(),
                "radical-dim": space.radical().dim(),
            })
        ),
    };
    Ok(Done::ok(text))
}

fn gaps(args: &FormArgs) -> Result<Done, Failure> {
    let form = finite(load(&args.form)?)?;
    let space = PolarSpace::build_with_budget(&form, args.common.budget as usize)?;
    let g = *space.gaps();
    let i = intrinsic_gaps(&space, args.common.trials as usize, args.common.seed)?;
    let agree = g.triple() == i.triple();
    let text = match args.common.output {
        Output::Human => format!(
            "algebraic: {g}\nintrinsic: r={}, e={}, p={} over {} trials\n{}\n",
            i.r,
            i.e,
            i.p,
            i.trials,
            if agree { "reconciled" } else { "MISMATCH" }
        ),
        Output::Structured => format!(
            "{}\n",
            json!({
                "record": "gaps",
                "n": g.n,
                "algebraic": [g.r, g.e, g.p],
                "intrinsic": [i.r, i.e, i.p],
                "trials": i.trials,
                "seed": args.common.seed,
                "reconciled": agree,
            })
        ),
    };
    Ok(Done {
        text,
        code: if agree { 0 } else { 1 },
    })
}

fn report_code(report: &VerifyReport) -> u8 {
    if report.budget_exceeded {
        5
    } else if report.passed() {
        0
    } else {
        1
    }
}

fn verify(args: &FormArgs) -> Result<Done, Failure> {
    let form = finite(load(&args.form)?)?;
    let space = PolarSpace::build_with_budget(&form, args.common.budget as usize)?;
    let report = verify_theorems(&space, args.common.options());
    let text = match args.common.output {
        Output::Human => report.render_human(),
        Output::Structured => report.to_json_lines(),
    };
    Ok(Done {
        code: report_code(&report),
        text,
    })
}

struct ItemResult {
    name: String,
    report: Result<VerifyReport, Error>,
}

fn catalog(args: &CatalogArgs) -> Result<Done, Failure> {
    let entries = full_catalog(args.equivalents, args.common.seed)?;
    let options = args.common.options();
    let results: Vec<ItemResult> = entries
        .par_iter()
        .map(|e| ItemResult {
            name: e.name.clone(),
            report: PolarSpace::build_with_budget(&e.form, options.budget).map(|s| verify_theorems(&s, options)),
        })
        .collect();
    let failed = results
        .iter()
        .filter(|r| r.report.as_ref().map_or(true, |rep| !rep.passed()))
        .count();

    let mut text = String::new();
    match args.common.output {
        Output::Human => {
            text.push_str(&format!("{:<14} {:<10} {:<10} {:>5} {:>5} {:>5}  status\n", "form", "algebraic", "intrinsic", "pass", "fail", "skip"));
            for r in &results {
                match &r.report {
                    Ok(rep) => {
                        let count = |s| rep.records.iter().filter(|c| c.status == s).count();
                        let triple = |t: (usize, usize, usize)| format!("({},{},{})", t.0, t.1, t.2);
                        let intrinsic = rep.intrinsic.as_ref().map_or("-".to_string(), |i| triple(i.triple()));
                        text.push_str(&format!(
                            "{:<14} {:<10} {:<10} {:>5} {:>5} {:>5}  {}\n",
                            r.name,
                            triple(rep.algebraic.triple()),
                            intrinsic,
                            count(polargap::chains::CheckStatus::Pass),
                            count(polargap::chains::CheckStatus::Fail),
                            count(polargap::chains::CheckStatus::Skip),
                            if rep.passed() { "ok" } else { "FAILED" }
                        ));
                    }
                    Err(e) => text.push_str(&format!("{:<14} error: {e}\n", r.name)),
                }
            }
            text.push_str(&format!("{} items, {} failed\n", results.len(), failed));
        }
        Output::Structured => {
            for r in &results {
                let record = match &r.report {
                    Ok(rep) => json!({
                        "record": "catalog-item",
                        "form": r.name,
                        "passed": rep.passed(),
                        "algebraic": [rep.algebraic.r, rep.algebraic.e, rep.algebraic.p],
                        "intrinsic": rep.intrinsic.as_ref().map(|i| [i.r, i.e, i.p]),
                        "failed-checks": rep.failures().map(|c| c.check_id).collect::<Vec<_>>(),
                    }),
                    Err(e) => json!({
                        "record": "catalog-item",
                        "form": r.name,
                        "passed": false,
                        "error": e.to_string(),
                    }),
                };
                text.push_str(&record.to_string());
                text.push('\n');
            }
            let summary = json!({ "record": "catalog-summary", "items": results.len(), "failed": failed });
            text.push_str(&summary.to_string());
            text.push('\n');
        }
    }
    Ok(Done {
        text,
        code: if failed == 0 { 0 } else { 1 },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(a) => classify(a),
        Command::Geometry(a) => geometry(a),
        Command::Gaps(a) => gaps(a),
        Command::Verify(a) => verify(a),
        Command::Catalog(a) => catalog(a),
    };
    match result {
        Ok(done) => {
            let mut out = io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = out.write_all(done.text.as_bytes());
            ExitCode::from(done.code)
        }
        Err(f) => {
            f.report();
            ExitCode::from(f.exit_code())
        }
    }
}
