use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stablepoly::construct::{bezout, hadamard, random_stable, Recipe};
use stablepoly::factcheck::{self, probe_question, Question, SuiteReport};
use stablepoly::interlace::{check_relation, Relation};
use stablepoly::stability::{decide, SamplerConfig, StabilityVerdict};
use stablepoly::{format_text, parse_text, Error, MultiPoly, UniPoly, C64};

const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const SEED_ENV: &str = "STABLEPOLY_SEED";

#[derive(Parser)]
#[command(name = "stablepoly", version, about = "Stability checks, interlacing tests and constructions for multivariate polynomials")]
struct Cli {
    /// Seed for every random choice; STABLEPOLY_SEED overrides it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Restrictions per stability decision; for verify and probe, trials per suite.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Root tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory receiving one JSON report per suite or probe.
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Include wall-clock times in reports.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecipeArg {
    Product,
    RealProduct,
    Pencil,
    RealPencil,
    Closure,
}

impl From<RecipeArg> for Recipe {
    fn from(r: RecipeArg) -> Self {
        match r {
            RecipeArg::Product => Recipe::Product,
            RecipeArg::RealProduct => Recipe::RealProduct,
            RecipeArg::Pencil => Recipe::Pencil,
            RecipeArg::RealPencil => Recipe::RealPencil,
            RecipeArg::Closure => Recipe::Closure,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuestionArg {
    Q1,
    Q2,
}

#[derive(Subcommand)]
enum Command {
    /// Decide stability of a polynomial (inline text, or a file with text or JSON).
    Check { poly: String },
    /// Test a relation: H, U, P, Hsim or Psim.
    Interlace { relation: String, f: String, g: String },
    /// Generate a certified stable polynomial.
    Construct {
        #[arg(value_enum)]
        recipe: RecipeArg,
        #[arg(long, default_value_t = 2)]
        nvars: usize,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Coefficientwise product of a univariate f with g along one variable.
    Hadamard {
        f: String,
        g: String,
        /// 1-based variable of g.
        #[arg(long, default_value_t = 1)]
        var: usize,
    },
    /// Bezoutian (f(x)g(y) - f(y)g(x)) / (x - y) of two univariate polynomials.
    Bezout { f: String, g: String },
    /// Run fact suites.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Run an exploratory probe.
    Probe {
        #[arg(value_enum)]
        which: QuestionArg,
    },
    /// List suite ids.
    Suites,
}

struct Output {
    json: Value,
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(out) => {
            // A closed pipe is not an error worth reporting.
            let mut stdout = std::io::stdout().lock();
            let _ = match format {
                Format::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Text => write!(stdout, "{}", out.text),
            };
            ExitCode::from(out.code)
        }
        Err(e) => {
            let (kind, code) = classify(&e);
            match format {
                Format::Json => eprintln!("{}", json!({ "error": { "kind": kind, "message": e.to_string() } })),
                Format::Text => eprintln!("error ({kind}): {e}"),
            }
            ExitCode::from(code)
        }
    }
}

fn classify(e: &Error) -> (&'static str, u8) {
    match e {
        Error::NoConvergence { .. } | Error::Numerical(_) => ("numerical", EXIT_NUMERICAL),
        Error::Syntax { .. } => ("syntax", EXIT_USAGE),
        Error::Io(_) => ("io", EXIT_USAGE),
        Error::Json(_) => ("json", EXIT_USAGE),
        Error::UnknownSuite(_) => ("unknown_suite", EXIT_USAGE),
        _ => ("invalid_input", EXIT_USAGE),
    }
}

fn effective_seed(flag: u64) -> Result<u64, Error> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{SEED_ENV} is not an unsigned integer: {s:?}"))),
        Err(_) => Ok(flag),
    }
}

/// Reads an inline polynomial, or a file holding text or JSON.
fn read_poly(arg: &str) -> Result<MultiPoly, Error> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let t = text.trim();
        return if t.starts_with('{') {
            Ok(serde_json::from_str(t)?)
        } else {
            parse_text(t)
        };
    }
    parse_text(arg)
}

fn read_uni(arg: &str) -> Result<UniPoly, Error> {
    let p = read_poly(arg)?;
    if p.nvars() > 1 {
        return Err(Error::InvalidInput(format!("{arg:?} must be univariate in x1")));
    }
    if p.nvars() == 0 {
        return Ok(UniPoly::constant(p.coeff(&[])));
    }
    p.to_univariate(0)
}

fn widen(f: MultiPoly, g: MultiPoly) -> (MultiPoly, MultiPoly) {
    let n = f.nvars().max(g.nvars());
    let (fn_, gn) = (f.nvars(), g.nvars());
    (f.append_vars(n - fn_), g.append_vars(n - gn))
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn fmt_point(p: &[C64]) -> String {
    format!("({})", p.iter().map(|z| fmt_c(*z)).collect::<Vec<_>>().join(", "))
}

fn verdict_text(v: &StabilityVerdict) -> String {
    match v {
        StabilityVerdict::Unstable { witness: Some(w), reason, .. } => format!("unstable: zero at {} ({reason})", fmt_point(w)),
        StabilityVerdict::Unstable { witness: None, reason, .. } => format!("unstable: {reason}"),
        StabilityVerdict::ProbablyStable { trials, seed, min_margin } => {
            let margin = min_margin.map_or("none".to_string(), |m| format!("{m:.3e}"));
            format!("probably stable: {trials} restrictions, seed {seed}, min margin {margin}")
        }
        StabilityVerdict::StableByCertificate { kind } => format!("stable by certificate: {}", kind.name()),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run(cli: Cli) -> Result<Output, Error> {
    let seed = effective_seed(cli.seed)?;
    let mut cfg = SamplerConfig::default().with_trials(cli.trials.unwrap_or(1000)).with_seed(seed);
    cfg.tol = cli.tol;
    let ok = |json: Value, text: String| Output { json, text, code: 0 };
    match cli.command {
        Command::Check { poly } => {
            let f = read_poly(&poly)?;
            let v = decide(&f, &cfg, None)?;
            Ok(ok(
                json!({ "input": f, "text": format_text(&f), "verdict": v }),
                format!("{}\n", verdict_text(&v)),
            ))
        }
        Command::Interlace { relation, f, g } => {
            let rel: Relation = relation.parse()?;
            let (f, g) = widen(read_poly(&f)?, read_poly(&g)?);
            let v = check_relation(&f, &g, rel, &cfg)?;
            let mut text = format!("{rel}: {}", if v.accepted() { "holds" } else { "no" });
            if let Some(note) = &v.note {
                let _ = write!(text, " ({note})");
            }
            if let Some(w) = &v.witness {
                let _ = write!(text, "\nwitness: {}", serde_json::to_string(w).expect("serializable"));
            }
            text.push('\n');
            Ok(ok(to_value(&v), text))
        }
        Command::Construct { recipe, nvars, degree } => {
            let (p, kind) = random_stable(nvars, degree, seed, recipe.into())?;
            Ok(ok(
                json!({ "recipe": Recipe::from(recipe), "seed": seed, "certificate": kind, "poly": p, "text": format_text(&p) }),
                format!("{}\n", format_text(&p)),
            ))
        }
        Command::Hadamard { f, g, var } => {
            let f = read_uni(&f)?;
            let g = read_poly(&g)?;
            if var == 0 {
                return Err(Error::InvalidInput("--var is 1-based".into()));
            }
            let h = hadamard(&f, &g, var - 1)?;
            Ok(ok(json!({ "poly": h, "text": format_text(&h) }), format!("{}\n", format_text(&h))))
        }
        Command::Bezout { f, g } => {
            let b = bezout(&read_uni(&f)?, &read_uni(&g)?)?;
            Ok(ok(json!({ "poly": b, "text": format_text(&b) }), format!("{}\n", format_text(&b))))
        }
        Command::Verify { suite } => verify(&suite, cli.trials, seed, cli.timing, cli.corpus.as_deref()),
        Command::Probe { which } => {
            let q = match which {
                QuestionArg::Q1 => Question::Q1,
                QuestionArg::Q2 => Question::Q2,
            };
            let report = probe_question(q, cli.trials.unwrap_or(factcheck::lookup(q.suite_id())?.default_trials), seed)?;
            if let Some(dir) = cli.corpus.as_deref() {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(format!("{}.json", q.suite_id())), serde_json::to_string_pretty(&report)? + "\n")?;
            }
            let mut text = format!("{} ({} trials, seed {seed})\n", q.suite_id(), report.budget);
            for (k, v) in &report.histogram {
                let _ = writeln!(text, "  {k}: {v}");
            }
            let _ = writeln!(text, "  observations: {}", report.observations.len());
            Ok(ok(to_value(&report), text))
        }
        Command::Suites => {
            let mut text = String::new();
            let mut list = Vec::new();
            for s in factcheck::registry() {
                let _ = writeln!(text, "{:22} {}", s.id, s.statement);
                list.push(json!({ "id": s.id, "kind": s.kind, "statement": s.statement, "default_trials": s.default_trials }));
            }
            Ok(ok(Value::Array(list), text))
        }
    }
}

fn verify(suite: &str, trials: Option<usize>, seed: u64, timing: bool, corpus: Option<&Path>) -> Result<Output, Error> {
    let ids: Vec<&str> = if suite == "all" {
        factcheck::suite_ids()
    } else {
        vec![factcheck::lookup(suite)?.id]
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for id in ids {
        let r = factcheck::run_suite(id, trials, seed)?;
        reports.push(if timing { r } else { r.without_timing() });
    }
    if let Some(dir) = corpus {
        std::fs::create_dir_all(dir)?;
        for r in &reports {
            factcheck::corpus_save(r, &dir.join(format!("{}.json", r.suite)))?;
        }
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.suite.as_str()).collect();
    let mut text = String::new();
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        let _ = write!(
            text,
            "{status} {:22} trials={} passes={} skips={} refutations={}",
            r.suite,
            r.trials,
            r.passes,
            r.skips,
            r.refutations.len()
        );
        if let Some(ms) = r.ms {
            let _ = write!(text, " ms={ms}");
        }
        if let Some(first) = r.refutations.first() {
            let _ = write!(text, "  [trial {}: {}]", first.trial, first.reason);
        }
        text.push('\n');
    }
    let _ = writeln!(text, "{} suites, {} failed", reports.len(), failed.len());
    let json = json!({ "seed": seed, "failed": failed, "suites": reports });
    Ok(Output {
        code: if failed.is_empty() { 0 } else { EXIT_REFUTED },
        json,
        text,
    })
}
