//! `spl`: command-line front end for checking, translating and solving
//! standpoint-logic and V1 formulas.
//!
//! Exit codes: 0 success (model, SAT, monodic, no discrepancy); 1 negative
//! verdict (not a model, exhausted UNSAT, not monodic, discrepancy); 2 usage,
//! parse or validation error; 3 search timeout.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use spl_core::finder::{Bounds, ModelFinder, SearchOutcome, Verdict};
use spl_core::fosl::{FoslModelFile, FoslStructure};
use spl_core::generate::{generate_formula, generate_fosl_structure, generate_v1_structure, GenSignature};
use spl_core::syntax::{
    infer_fosl_vocabulary, parse_formula, print_formula, strip_comments, FoslVocabulary, Formula,
    OpenSignature, V1Vocabulary,
};
use spl_core::translation::{full_translation, translation_report};
use spl_core::v1::V1Structure;

#[derive(Debug, Parser)]
#[command(name = "spl", version, about = "Standpoint logic and V1 reasoning toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Flavor {
    Fosl,
    V1,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Artifact {
    Formula,
    Structure,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a formula on a model file, per precisification and globally.
    Check {
        formula: PathBuf,
        model: PathBuf,
        #[arg(long, value_enum, default_value = "fosl")]
        flavor: Flavor,
        /// Vocabulary file; required for V1, inferred from the inputs otherwise.
        #[arg(long)]
        vocab: Option<PathBuf>,
        /// Also write the verdicts as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate a V1 sentence into standpoint logic.
    Translate {
        formula: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        strict_names: bool,
        /// Translated formula; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Size and monodicity report; defaults to `<out>.report.json` when
        /// `--out` is given.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Search for a model within bounds.
    Solve {
        formula: PathBuf,
        #[arg(long, value_enum, default_value = "fosl")]
        flavor: Flavor,
        #[arg(long)]
        vocab: Option<PathBuf>,
        /// `dmax,pmax[,emax,imax]`; V1 with two values uses dmax for both
        /// entities and individuals.
        #[arg(long)]
        bounds: Option<String>,
        /// Seconds per search.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        no_symmetry: bool,
        /// Model file written on success; the model is embedded in the
        /// report otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare V1 satisfiability of a sentence with that of its translation.
    Equisat {
        formula: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        strict_names: bool,
        /// Report file; found models are written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 iff every modality scopes over at most one free variable.
    Monodic {
        formula: PathBuf,
        #[arg(long, value_enum, default_value = "fosl")]
        flavor: Flavor,
        #[arg(long)]
        vocab: Option<PathBuf>,
    },
    /// Print a seeded random formula or structure.
    Generate {
        #[arg(value_enum)]
        artifact: Artifact,
        #[arg(long, value_enum, default_value = "fosl")]
        flavor: Flavor,
        #[arg(long)]
        vocab: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        bounds: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    let text = if text.ends_with('\n') { text.to_string() } else { format!("{text}\n") };
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => say(text),
    }
}

/// Writes a line to stdout, reporting a closed pipe as an error instead of
/// panicking.
fn say(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    writeln!(out, "{text}")?;
    out.flush()?;
    Ok(())
}

fn formula_text(path: &Path) -> Result<String> {
    Ok(strip_comments(&read(path)?))
}

fn v1_vocab(path: Option<&Path>) -> Result<V1Vocabulary> {
    let path = path.context("--vocab is required for the v1 flavor")?;
    V1Vocabulary::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn fosl_vocab_file(path: &Path) -> Result<FoslVocabulary> {
    FoslVocabulary::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn merge(a: &FoslVocabulary, b: &FoslVocabulary) -> Result<FoslVocabulary> {
    let mut preds: BTreeMap<String, usize> = a.predicates().clone();
    for (p, &k) in b.predicates() {
        if let Some(&j) = preds.get(p) {
            if j != k {
                bail!("predicate `{p}` has arity {j} in the model and {k} in the formula");
            }
        }
        preds.insert(p.clone(), k);
    }
    let consts: BTreeSet<String> = a.constants().union(b.constants()).cloned().collect();
    let sps: BTreeSet<String> = a.standpoints().union(b.standpoints()).cloned().collect();
    Ok(FoslVocabulary::new(preds, consts, sps)?)
}

/// The formula and its vocabulary: from `--vocab` when given, otherwise the
/// smallest vocabulary the formula (and model, if any) needs.
fn fosl_input(
    formula: &Path,
    vocab: Option<&Path>,
    model: Option<&FoslModelFile>,
) -> Result<(FoslVocabulary, Formula)> {
    let text = formula_text(formula)?;
    let vocab = match vocab {
        Some(p) => fosl_vocab_file(p)?,
        None => {
            let open = parse_formula(&text, &OpenSignature).context("formula")?;
            let from_formula = infer_fosl_vocabulary(&open)?;
            match model {
                Some(m) => merge(&m.infer_vocabulary(from_formula.predicates())?, &from_formula)?,
                None => from_formula,
            }
        }
    };
    let f = parse_formula(&text, &vocab).context("formula")?;
    Ok((vocab, f))
}

fn v1_input(formula: &Path, vocab: Option<&Path>) -> Result<(V1Vocabulary, Formula)> {
    let vocab = v1_vocab(vocab)?;
    let f = parse_formula(&formula_text(formula)?, &vocab).context("formula")?;
    Ok((vocab, f))
}

fn parse_bounds(spec: Option<&str>, flavor: Flavor, timeout: Option<f64>) -> Result<Bounds> {
    let mut b = match spec {
        None => Bounds::default(),
        Some(s) => {
            let parts = s
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("bounds `{s}` must be comma-separated integers"))?;
            match (parts.as_slice(), flavor) {
                ([d, p], Flavor::Fosl) => Bounds::fosl(*d, *p)?,
                ([d, p], Flavor::V1) => Bounds::new(*d, *p, *d, *d, Bounds::default().timeout)?,
                ([d, p, e, i], _) => Bounds::new(*d, *p, *e, *i, Bounds::default().timeout)?,
                _ => bail!("bounds `{s}` must be dmax,pmax or dmax,pmax,emax,imax"),
            }
        }
    };
    if let Some(t) = timeout {
        if !(t.is_finite() && t > 0.0) {
            bail!("timeout must be a positive number of seconds");
        }
        b = b.with_timeout(Duration::from_secs_f64(t))?;
    }
    Ok(b)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

#[derive(Serialize)]
struct CheckReport {
    flavor: Flavor,
    formula: String,
    precisifications: BTreeMap<String, bool>,
    model: bool,
}

fn check(
    formula: &Path,
    model: &Path,
    flavor: Flavor,
    vocab: Option<&Path>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let model_text = read(model)?;
    let (f, per_prec) = match flavor {
        Flavor::Fosl => {
            let file: FoslModelFile = serde_json::from_str(&model_text)
                .with_context(|| format!("malformed model file {}", model.display()))?;
            let (vocab, f) = fosl_input(formula, vocab, Some(&file))?;
            let m = FoslStructure::from_model_file(&vocab, &file)
                .with_context(|| format!("invalid model {}", model.display()))?;
            let mut per = BTreeMap::new();
            for p in m.precs() {
                per.insert(m.prec_id(p).to_string(), m.satisfies_at(p, &f)?);
            }
            (f, per)
        }
        Flavor::V1 => {
            let (vocab, f) = v1_input(formula, vocab)?;
            let m = V1Structure::from_json(&vocab, &model_text)
                .with_context(|| format!("invalid model {}", model.display()))?;
            for w in m.warnings() {
                eprintln!("warning: {w}");
            }
            let mut per = BTreeMap::new();
            for p in m.precs() {
                per.insert(m.prec_id(p).to_string(), m.satisfies_at_v1(p, &f)?);
            }
            (f, per)
        }
    };
    let global = per_prec.values().all(|&b| b);
    for (p, ok) in &per_prec {
        say(&format!("{p}: {}", if *ok { "satisfied" } else { "not satisfied" }))?;
    }
    say(&format!("global: {}", if global { "model" } else { "not a model" }))?;
    if let Some(out) = out {
        let report = CheckReport {
            flavor,
            formula: print_formula(&f),
            precisifications: per_prec,
            model: global,
        };
        write(out, &to_json(&report)?)?;
    }
    Ok(if global { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn translate(
    formula: &Path,
    vocab: &Path,
    strict: bool,
    out: Option<&Path>,
    report: Option<&Path>,
) -> Result<ExitCode> {
    let (vocab, f) = v1_input(formula, Some(vocab))?;
    if !f.is_sentence() {
        bail!("only sentences can be translated; free variables: {:?}", f.free_variables());
    }
    let full = full_translation(&vocab, &f, strict)?;
    emit(out, &print_formula(&full))?;
    let report_path = report
        .map(Path::to_path_buf)
        .or_else(|| out.map(|o| sidecar(o, "report.json")));
    if let Some(p) = report_path {
        write(&p, &to_json(&translation_report(&vocab, &f, strict)?)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    path.with_file_name(name)
}

#[derive(Serialize)]
struct SolveReport {
    flavor: Flavor,
    outcome: &'static str,
    elapsed_ms: u128,
    bounds: Bounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<serde_json::Value>,
}

fn outcome_code<M>(o: &SearchOutcome<M>) -> ExitCode {
    match o {
        SearchOutcome::Model(_) => ExitCode::SUCCESS,
        SearchOutcome::ExhaustedUnsat(_) => ExitCode::from(1),
        SearchOutcome::Timeout(_) => ExitCode::from(3),
    }
}

#[allow(clippy::too_many_arguments)]
fn solve(
    formula: &Path,
    flavor: Flavor,
    vocab: Option<&Path>,
    bounds: Option<&str>,
    timeout: Option<f64>,
    no_symmetry: bool,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let b = parse_bounds(bounds, flavor, timeout)?.with_symmetry_reduction(!no_symmetry);
    let finder = ModelFinder::new(b);
    let start = Instant::now();
    let (label, code, model_json) = match flavor {
        Flavor::Fosl => {
            let (vocab, f) = fosl_input(formula, vocab, None)?;
            let o = finder.find_fosl(&vocab, &f)?;
            let json = o.model().map(|m| serde_json::to_value(m.to_model_file())).transpose()?;
            (o.label(), outcome_code(&o), json)
        }
        Flavor::V1 => {
            let (vocab, f) = v1_input(formula, vocab)?;
            let o = finder.find_v1(&vocab, &f)?;
            let json = o.model().map(|m| serde_json::to_value(m.to_model_file())).transpose()?;
            (o.label(), outcome_code(&o), json)
        }
    };
    let elapsed_ms = start.elapsed().as_millis();
    let mut report = SolveReport {
        flavor,
        outcome: label,
        elapsed_ms,
        bounds: b,
        model_path: None,
        model: None,
    };
    if let Some(m) = model_json {
        match out {
            Some(p) => {
                write(p, &serde_json::to_string_pretty(&m)?)?;
                report.model_path = Some(p.display().to_string());
            }
            None => report.model = Some(m),
        }
    }
    say(&to_json(&report)?)?;
    Ok(code)
}

fn equisat(
    formula: &Path,
    vocab: &Path,
    bounds: Option<&str>,
    timeout: Option<f64>,
    strict: bool,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let (vocab, f) = v1_input(formula, Some(vocab))?;
    let b = parse_bounds(bounds, Flavor::V1, timeout)?;
    let mut report = ModelFinder::new(b).equisat(&vocab, &f, strict)?;
    if let Some(out) = out {
        if let Some(m) = &report.v1_model {
            let p = sidecar(out, "v1-model.json");
            write(&p, &m.to_json())?;
            report.v1.model_path = Some(p.display().to_string());
        }
        if let Some(m) = &report.fosl_model {
            let p = sidecar(out, "fosl-model.json");
            write(&p, &m.to_json())?;
            report.fosl.model_path = Some(p.display().to_string());
        }
    }
    emit(out, &to_json(&report)?)?;
    if out.is_some() {
        say(&format!("verdict: {}", serde_json::to_value(report.verdict)?.as_str().unwrap_or("?")))?;
    }
    Ok(if report.verdict == Verdict::Discrepancy {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn monodic(formula: &Path, flavor: Flavor, vocab: Option<&Path>) -> Result<ExitCode> {
    let f = match flavor {
        Flavor::Fosl => fosl_input(formula, vocab, None)?.1,
        Flavor::V1 => v1_input(formula, vocab)?.1,
    };
    let yes = f.is_monodic();
    say(&yes.to_string())?;
    Ok(if yes { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[allow(clippy::too_many_arguments)]
fn generate(
    artifact: Artifact,
    flavor: Flavor,
    vocab: &Path,
    seed: u64,
    depth: usize,
    bounds: Option<&str>,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let b = parse_bounds(bounds, flavor, None)?;
    let text = match (artifact, flavor) {
        (Artifact::Formula, Flavor::Fosl) => {
            print_formula(&generate_formula(&GenSignature::from(&fosl_vocab_file(vocab)?), seed, depth))
        }
        (Artifact::Formula, Flavor::V1) => {
            print_formula(&generate_formula(&GenSignature::from(&v1_vocab(Some(vocab))?), seed, depth))
        }
        (Artifact::Structure, Flavor::Fosl) => generate_fosl_structure(&fosl_vocab_file(vocab)?, seed, &b).to_json(),
        (Artifact::Structure, Flavor::V1) => generate_v1_structure(&v1_vocab(Some(vocab))?, seed, &b)?.to_json(),
    };
    emit(out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            formula,
            model,
            flavor,
            vocab,
            out,
        } => check(&formula, &model, flavor, vocab.as_deref(), out.as_deref()),
        Command::Translate {
            formula,
            vocab,
            strict_names,
            out,
            report,
        } => translate(&formula, &vocab, strict_names, out.as_deref(), report.as_deref()),
        Command::Solve {
            formula,
            flavor,
            vocab,
            bounds,
            timeout,
            no_symmetry,
            out,
        } => solve(
            &formula,
            flavor,
            vocab.as_deref(),
            bounds.as_deref(),
            timeout,
            no_symmetry,
            out.as_deref(),
        ),
        Command::Equisat {
            formula,
            vocab,
            bounds,
            timeout,
            strict_names,
            out,
        } => equisat(&formula, &vocab, bounds.as_deref(), timeout, strict_names, out.as_deref()),
        Command::Monodic {
            formula,
            flavor,
            vocab,
        } => monodic(&formula, flavor, vocab.as_deref()),
        Command::Generate {
            artifact,
            flavor,
            vocab,
            seed,
            depth,
            bounds,
            out,
        } => generate(artifact, flavor, &vocab, seed, depth, bounds.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
