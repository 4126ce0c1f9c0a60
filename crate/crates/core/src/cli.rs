//! Command-line driver.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::Presentation;
use crate::catalog::{check_fixture, fixture_with, CatalogError};
use crate::cohomology::{massey_triple, CohomologyTable};
use crate::dsl::{self, Block, Document, DslError};
use crate::fibration::{describe_reduction, theoremC_reduce, TransferConditions};
use crate::formality::{formality, Verdict, Witness};
use crate::sullivan::{minimal_model, SullivanError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable overriding the truncation degree.
pub const MAX_DEGREE_ENV: &str = "CDGA_MAX_DEGREE";

#[derive(Debug, Parser)]
#[command(
    name = "cdga",
    version,
    about = "Exact computations with rational CDGAs"
)]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Truncation degree N; overrides CDGA_MAX_DEGREE and file directives.
    #[arg(long, global = true, value_name = "N")]
    pub max_degree: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a file and validate every block.
    Validate { file: PathBuf },
    /// Betti numbers and representatives.
    Cohomology {
        file: PathBuf,
        #[arg(long)]
        block: Option<String>,
    },
    /// Minimal Sullivan model with its quasi-isomorphism.
    MinimalModel {
        file: PathBuf,
        #[arg(long)]
        block: Option<String>,
    },
    /// Formality verdict (exit 0 formal, 2 non-formal, 3 inconclusive).
    Formality {
        file: PathBuf,
        #[arg(long)]
        block: Option<String>,
    },
    /// Model of a fibration block, primitivity and reduction.
    Fibration {
        file: PathBuf,
        #[arg(long)]
        block: Option<String>,
    },
    /// Triple Massey product of three closed elements.
    Massey {
        file: PathBuf,
        a: String,
        b: String,
        c: String,
        #[arg(long)]
        block: Option<String>,
    },
    /// Print a built-in fixture, or check its expected values.
    Fixture {
        name: String,
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {err}")]
    Dsl { path: String, err: DslError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Sullivan(#[from] SullivanError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Fibration(#[from] crate::fibration::FibrationError),
    #[error("invalid {MAX_DEGREE_ENV}: `{0}`")]
    Env(String),
}

/// Outcome of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub input: String,
    pub max_degree: Option<u32>,
    pub result: Value,
    pub witnesses: Vec<Value>,
    pub text: String,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "input": self.input,
            "max_degree": self.max_degree,
            "result": self.result,
            "witnesses": self.witnesses,
            "version": VERSION,
        })
    }
}

pub fn exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Formal(_) => 0,
        Verdict::NonFormal(_) => 2,
        Verdict::Inconclusive(_) => 3,
    }
}

/// The effective truncation override: flag first, then the environment.
pub fn max_degree_override(flag: Option<u32>) -> Result<Option<u32>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(MAX_DEGREE_ENV) {
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => s.trim().parse().map(Some).map_err(|_| CliError::Env(s)),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    dsl::parse(&text).map_err(|err| CliError::Dsl {
        path: path.display().to_string(),
        err,
    })
}

fn dsl_err(path: &Path, err: DslError) -> CliError {
    CliError::Dsl {
        path: path.display().to_string(),
        err,
    }
}

/// The presentation of a block: an algebra, or the total space of a fibration.
fn block_presentation(
    doc: &Document,
    path: &Path,
    block: Option<&str>,
    n: Option<u32>,
) -> Result<(String, Presentation), CliError> {
    let b = match block {
        Some(name) => doc
            .block(name)
            .ok_or_else(|| CliError::Usage(format!("no block named `{name}`")))?,
        None => doc
            .blocks
            .first()
            .ok_or_else(|| CliError::Usage("the file has no blocks".into()))?,
    };
    let p = match b {
        Block::Algebra(a) => doc.presentation(a, n).map_err(|e| dsl_err(path, e))?,
        Block::Fibration(f) => doc
            .fibration_model(f, n)
            .map_err(|e| dsl_err(path, e))?
            .total()
            .clone(),
    };
    Ok((b.name().to_string(), p))
}

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Massey {
            degree,
            a,
            b,
            c,
            value,
            indeterminacy_dim,
        } => json!({
            "kind": "massey",
            "degree": degree,
            "triple": [a, b, c],
            "value": value,
            "indeterminacy_dim": indeterminacy_dim,
            "label": w.label(),
        }),
        Witness::Ideal {
            degree,
            element,
            complement_independent,
            ..
        } => json!({
            "kind": "ideal",
            "degree": degree,
            "element": element,
            "complement_independent": complement_independent,
            "label": w.label(),
        }),
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let n = max_degree_override(cli.max_degree)?;
    match &cli.command {
        Command::Validate { file } => validate(file, n),
        Command::Cohomology { file, block } => cohomology(file, block.as_deref(), n),
        Command::MinimalModel { file, block } => minimal(file, block.as_deref(), n),
        Command::Formality { file, block } => formality_cmd(file, block.as_deref(), n),
        Command::Fibration { file, block } => fibration(file, block.as_deref(), n),
        Command::Massey {
            file,
            a,
            b,
            c,
            block,
        } => massey(file, [a, b, c], block.as_deref(), n),
        Command::Fixture { name, check } => fixture_cmd(name, *check, n),
    }
}

fn report(command: &'static str, input: String, max_degree: Option<u32>) -> Report {
    Report {
        command,
        input,
        max_degree,
        result: Value::Null,
        witnesses: Vec::new(),
        text: String::new(),
        exit_code: 0,
    }
}

fn validate(file: &Path, n: Option<u32>) -> Result<Report, CliError> {
    let doc = load(file)?;
    let mut r = report("validate", file.display().to_string(), n);
    let mut blocks = Vec::new();
    for b in &doc.blocks {
        let (_, p) = block_presentation(&doc, file, Some(b.name()), n)?;
        let kind = match b {
            Block::Algebra(_) => "algebra",
            Block::Fibration(_) => "fibration",
        };
        let _ = writeln!(
            r.text,
            "{kind} {}: {} (N = {})",
            b.name(),
            p,
            p.max_degree()
        );
        blocks.push(json!({
            "name": b.name(),
            "kind": kind,
            "presentation": p.to_string(),
            "max_degree": p.max_degree(),
        }));
    }
    if r.max_degree.is_none() {
        r.max_degree = blocks
            .first()
            .and_then(|b| b["max_degree"].as_u64())
            .map(|x| x as u32);
    }
    r.text.push_str("ok\n");
    r.result = json!({ "blocks": blocks, "valid": true });
    Ok(r)
}

fn cohomology(file: &Path, block: Option<&str>, n: Option<u32>) -> Result<Report, CliError> {
    let doc = load(file)?;
    let (name, p) = block_presentation(&doc, file, block, n)?;
    let t = CohomologyTable::compute(&p);
    let mut r = report(
        "cohomology",
        file.display().to_string(),
        Some(p.max_degree()),
    );
    let betti = t.betti_numbers();
    let _ = writeln!(r.text, "{name}: {p}");
    let _ = writeln!(r.text, "betti: {betti:?}");
    let mut reps = serde_json::Map::new();
    for k in 0..=t.top_degree() {
        let list: Vec<String> = t.representatives(k).iter().map(|x| p.format(x)).collect();
        if !list.is_empty() {
            let _ = writeln!(r.text, "H^{k}: {}", list.join(", "));
            reps.insert(k.to_string(), json!(list));
        }
    }
    r.result = json!({ "block": name, "betti": betti, "representatives": reps });
    Ok(r)
}

fn minimal(file: &Path, block: Option<&str>, n: Option<u32>) -> Result<Report, CliError> {
    let doc = load(file)?;
    let (name, p) = block_presentation(&doc, file, block, n)?;
    let m = minimal_model(&p)?;
    let mut r = report(
        "minimal-model",
        file.display().to_string(),
        Some(p.max_degree()),
    );
    let model = m.model();
    let _ = writeln!(r.text, "{name}: {p}");
    let _ = writeln!(r.text, "minimal model: {model}");
    let mut gens = Vec::new();
    for ((i, g), origin) in model.generators().iter().enumerate().zip(m.origins()) {
        let image = p.format(m.map().image(i));
        let _ = writeln!(r.text, "  {}:{} -> {}  ({origin})", g.name, g.degree, image);
        gens.push(json!({
            "name": g.name,
            "degree": g.degree,
            "d": model.format(model.dg(i)),
            "image": image,
            "origin": origin.to_string(),
        }));
    }
    r.result = json!({
        "block": name,
        "model": model.to_string(),
        "generators": gens,
        "verified": m.verify().passed(),
    });
    Ok(r)
}

fn formality_cmd(file: &Path, block: Option<&str>, n: Option<u32>) -> Result<Report, CliError> {
    let doc = load(file)?;
    let (name, p) = block_presentation(&doc, file, block, n)?;
    let (m, v) = formality(&p)?;
    let mut r = report(
        "formality",
        file.display().to_string(),
        Some(v.degree_bound),
    );
    let complement = v.complement.names(m.model());
    let _ = writeln!(r.text, "{name}: {p}");
    let _ = writeln!(r.text, "minimal model: {}", m.model());
    let _ = writeln!(r.text, "complement: [{}]", complement.join(", "));
    let _ = writeln!(r.text, "verdict: {} (N = {})", v.name(), v.degree_bound);
    let mut result = json!({
        "block": name,
        "model": m.model().to_string(),
        "verdict": v.name(),
        "complement": complement,
        "complement_forced": v.complement.forced,
    });
    match &v.verdict {
        Verdict::Formal(mu) => {
            let cert: Vec<Value> = mu
                .describe()
                .into_iter()
                .map(|(g, c)| {
                    let _ = writeln!(r.text, "  mu: {g} -> {c}");
                    json!({ "generator": g, "image": c })
                })
                .collect();
            result["certificate"] = json!(cert);
        }
        Verdict::NonFormal(ws) => {
            for w in ws {
                let _ = writeln!(r.text, "  witness: {w}");
                r.witnesses.push(witness_json(w));
            }
        }
        Verdict::Inconclusive(reason) => {
            let _ = writeln!(r.text, "  reason: {reason}");
            result["reason"] = json!(reason);
        }
    }
    r.exit_code = exit_code(&v.verdict);
    r.result = result;
    Ok(r)
}

fn fibration(file: &Path, block: Option<&str>, n: Option<u32>) -> Result<Report, CliError> {
    let doc = load(file)?;
    let fb = match block {
        Some(name) => doc
            .fibration_block(name)
            .ok_or_else(|| CliError::Usage(format!("no fibration block named `{name}`")))?,
        None => doc
            .blocks
            .iter()
            .find_map(|b| match b {
                Block::Fibration(f) => Some(f),
                _ => None,
            })
            .ok_or_else(|| CliError::Usage("the file has no fibration block".into()))?,
    };
    let fm = doc.fibration_model(fb, n).map_err(|e| dsl_err(file, e))?;
    let mut r = report(
        "fibration",
        file.display().to_string(),
        Some(fm.max_degree()),
    );
    let base = fm.base().model();
    let _ = writeln!(r.text, "fibration {}: fibre {}", fb.name, fm.kind());
    let _ = writeln!(r.text, "base: {base}");
    let _ = writeln!(r.text, "u = {}", base.format(fm.u()));
    let _ = writeln!(r.text, "total: {}", fm.total());
    let _ = writeln!(r.text, "primitive: {}", fm.is_primitive());
    let cond = TransferConditions::evaluate(fm.base(), fm.kind());
    let mut result = json!({
        "block": fb.name,
        "fiber": fm.kind().to_string(),
        "base": base.to_string(),
        "u": base.format(fm.u()),
        "total": fm.total().to_string(),
        "primitive": fm.is_primitive(),
        "conditions": {
            "connectivity": cond.connectivity,
            "hurewicz_n": cond.hurewicz_n,
            "hurewicz_twist": cond.hurewicz_twist,
            "connectivity_route": cond.connectivity_route,
            "low_connectivity_route": cond.low_connectivity_route,
            "satisfied": cond.satisfied(fm.kind()),
        },
    });
    let _ = writeln!(
        r.text,
        "transfer hypotheses: {} (rational connectivity {})",
        if cond.satisfied(fm.kind()) {
            "satisfied"
        } else {
            "not satisfied"
        },
        cond.connectivity
    );
    if fm.kind().truncation().is_some() && !fm.u().is_zero() {
        let red = theoremC_reduce(&fm)?;
        for line in describe_reduction(&fm, &red) {
            let _ = writeln!(r.text, "{line}");
        }
        let report = crate::fibration::verify_phi(&red);
        let _ = writeln!(r.text, "phi quasi-isomorphism: {}", report.passed());
        result["reduced"] = json!(red.ve_model.to_string());
        result["phi_quasi_iso"] = json!(report.passed());
        result["phi"] = json!(red
            .phi
            .describe()
            .into_iter()
            .map(|(g, v)| json!({ "generator": g, "image": v }))
            .collect::<Vec<_>>());
    } else {
        let _ = writeln!(r.text, "reduction: not applicable");
        result["reduced"] = Value::Null;
    }
    r.result = result;
    Ok(r)
}

fn massey(
    file: &Path,
    exprs: [&String; 3],
    block: Option<&str>,
    n: Option<u32>,
) -> Result<Report, CliError> {
    let doc = load(file)?;
    let (name, p) = block_presentation(&doc, file, block, n)?;
    let t = CohomologyTable::compute(&p);
    let mut classes = Vec::new();
    for e in exprs {
        let x = p
            .parse(e)
            .map_err(|err| CliError::Usage(format!("cannot parse `{e}`: {err}")))?;
        let c = t
            .class_of(&x)
            .ok_or_else(|| CliError::Usage(format!("`{e}` is not a closed homogeneous element")))?;
        classes.push(c);
    }
    let mut r = report("massey", file.display().to_string(), Some(p.max_degree()));
    let res = massey_triple(&t, &classes[0], &classes[1], &classes[2])
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let value = p.format(&res.representative);
    let _ = writeln!(
        r.text,
        "{name}: <{}, {}, {}> in degree {}",
        exprs[0], exprs[1], exprs[2], res.degree
    );
    let _ = writeln!(r.text, "representative: {value}");
    let _ = writeln!(
        r.text,
        "indeterminacy dimension: {}",
        res.indeterminacy.len()
    );
    let _ = writeln!(r.text, "contains zero: {}", res.contains_zero);
    r.result = json!({
        "block": name,
        "degree": res.degree,
        "representative": value,
        "class": t.format_class(&res.class),
        "indeterminacy_dim": res.indeterminacy.len(),
        "contains_zero": res.contains_zero,
    });
    Ok(r)
}

fn fixture_cmd(name: &str, check: bool, n: Option<u32>) -> Result<Report, CliError> {
    let f = fixture_with(name, n)?;
    let p = f.presentation()?;
    let mut r = report("fixture", name.to_string(), Some(p.max_degree()));
    let doc = f.document().to_string();
    let mut result = json!({
        "name": f.name,
        "description": f.description,
        "presentation": p.to_string(),
        "dsl": doc,
    });
    if !check {
        r.text = doc;
        r.result = result;
        return Ok(r);
    }
    let rep = check_fixture(&f)?;
    let _ = writeln!(r.text, "{}: {}", f.name, f.description);
    let _ = writeln!(r.text, "presentation: {}", rep.presentation);
    if let Some(red) = &rep.reduced {
        let _ = writeln!(r.text, "reduced model: {red}");
    }
    let _ = writeln!(r.text, "verdict: {}", rep.verdict);
    let mut checks = Vec::new();
    for l in &rep.lines {
        let _ = writeln!(
            r.text,
            "[{}] {} ({}) found {}",
            if l.ok { "pass" } else { "FAIL" },
            l.expected.property,
            l.expected.source,
            l.found
        );
        checks.push(json!({
            "property": l.expected.property.to_string(),
            "source": l.expected.source.to_string(),
            "found": l.found,
            "ok": l.ok,
        }));
    }
    result["reduced"] = json!(rep.reduced);
    result["verdict"] = json!(rep.verdict);
    result["checks"] = json!(checks);
    result["passed"] = json!(rep.passed());
    r.exit_code = if rep.passed() { 0 } else { 1 };
    r.result = result;
    Ok(r)
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&r.to_json()).expect("valid JSON")
                );
            } else {
                print!("{}", r.text);
            }
            r.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
