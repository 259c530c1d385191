use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mglex::assembly::{assemble_report, CompositionTree, Reading, TraceStep};
use mglex::lexicon::{Lexicon, SCHEMA_VERSION};
use mglex::logic::{term_to_formula, Formula};
use mglex::reduction::{normalize_in, unfold_definitions, Normalizer, Strategy};
use mglex::subtyping::{check_coherence, coercion_term, derive_subtype};
use mglex::terms::{parse_term, parse_type, type_of, Signature, Term};

const TREE_FORMAT_VERSION: u32 = 1;
const OUTPUT_SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "mglex",
    version,
    about = "Meaning assembly with a many-sorted second-order lambda calculus"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// How logical forms are written.
    #[arg(long, global = true, value_enum, default_value_t = LogicForm::Unicode)]
    logic_form: LogicForm,
    /// Print the schema versions of the input and output formats and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LogicForm {
    Unicode,
    Ascii,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a lexicon, or type-check a term against it.
    Check {
        #[arg(long)]
        lexicon: PathBuf,
        /// A term in the core syntax.
        term: Option<String>,
    },
    /// Normalize a term.
    Normalize {
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Print every reduction step.
        #[arg(long)]
        trace: bool,
        /// Keep defined constants folded.
        #[arg(long)]
        no_unfold: bool,
        /// Reduction strategy.
        #[arg(long, value_enum, default_value_t = StrategyArg::Outermost)]
        strategy: StrategyArg,
        /// Give up after this many steps.
        #[arg(long)]
        max_steps: Option<usize>,
        term: String,
    },
    /// Decide whether one type is a subtype of another.
    Subtype {
        #[arg(long)]
        lexicon: PathBuf,
        sub: String,
        sup: String,
    },
    /// Check that the coercion graph of a lexicon is coherent.
    Coherence {
        #[arg(long)]
        lexicon: PathBuf,
        /// Maximum derivation height.
        #[arg(long)]
        depth: usize,
    },
    /// Compose a tree of words into its readings.
    Assemble {
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        /// Print every reading (the default).
        #[arg(long, conflicts_with = "first")]
        all: bool,
        /// Print only the first reading.
        #[arg(long)]
        first: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Outermost,
    Innermost,
}

struct Failure {
    code: &'static str,
    message: String,
}

fn fail(code: &'static str, e: impl Display) -> Failure {
    Failure { code, message: e.to_string() }
}

enum Outcome {
    Positive,
    Negative,
}

struct Out {
    format: Format,
    logic: LogicForm,
}

impl Out {
    fn emit(&self, text: String, value: Value) {
        match self.format {
            Format::Text => println!("{text}"),
            Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("json output")),
        }
    }

    fn formula_value(&self, f: &Formula) -> Value {
        match self.logic {
            LogicForm::Unicode => Value::from(f.unicode()),
            LogicForm::Ascii => Value::from(f.ascii()),
            LogicForm::Json => f.to_json(),
        }
    }

    fn formula_text(&self, f: &Formula) -> String {
        match self.logic {
            LogicForm::Unicode => f.unicode(),
            LogicForm::Ascii => f.ascii(),
            LogicForm::Json => f.to_json().to_string(),
        }
    }

    fn term_text(&self, t: &Term) -> String {
        if self.logic == LogicForm::Unicode {
            t.unicode()
        } else {
            t.to_string()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))
}

fn load_lexicon(path: &Path) -> Result<Lexicon, Failure> {
    let src = read(path)?;
    Lexicon::from_json(&src).map_err(|e| fail(e.code(), format!("{}: {e}", path.display())))
}

fn checked_term(sig: &Signature, src: &str) -> Result<(Term, mglex::terms::Type), Failure> {
    let t = parse_term(sig, src).map_err(|e| fail("parse", e))?;
    let ty = type_of(sig, &t).map_err(|e| fail("type", e))?;
    Ok((t, ty))
}

fn trace_json(steps: &[TraceStep]) -> Value {
    serde_json::to_value(steps).expect("trace serializes")
}

fn trace_text(steps: &[TraceStep]) -> String {
    if steps.is_empty() {
        return "direct".into();
    }
    steps
        .iter()
        .map(|s| {
            let at = match (&s.word, s.occurrence) {
                (Some(w), Some(o)) => format!("{w}#{o}"),
                _ => "-".into(),
            };
            let cluster = s.cluster.map(|c| format!(" in cluster {c}")).unwrap_or_default();
            format!("{}({}) on {at}{cluster}", s.label, s.flag)
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let out = Out { format: cli.format, logic: cli.logic_form };
    if cli.schema {
        out.emit(
            format!(
                "lexicon schema {SCHEMA_VERSION}\ntree format {TREE_FORMAT_VERSION}\noutput schema {OUTPUT_SCHEMA_VERSION}"
            ),
            json!({
                "lexicon_schema": SCHEMA_VERSION,
                "tree_format": TREE_FORMAT_VERSION,
                "output_schema": OUTPUT_SCHEMA_VERSION,
            }),
        );
        return Ok(Outcome::Positive);
    }
    let Some(command) = cli.command else {
        return Err(fail("usage", "no subcommand given; see --help"));
    };
    match command {
        Command::Check { lexicon, term } => {
            let lex = load_lexicon(&lexicon)?;
            match term {
                Some(src) => {
                    let (t, ty) = checked_term(&lex.signature, &src)?;
                    out.emit(
                        format!("{} : {}", out.term_text(&t), ty),
                        json!({"term": t.to_string(), "type": ty.to_string()}),
                    );
                }
                None => {
                    let sorts = lex.signature.sorts().count();
                    out.emit(
                        format!("ok: {} entries, {sorts} sorts", lex.len()),
                        json!({"valid": true, "entries": lex.len(), "sorts": sorts}),
                    );
                }
            }
            Ok(Outcome::Positive)
        }
        Command::Normalize { lexicon, trace, no_unfold, strategy, max_steps, term } => {
            let sig = match lexicon {
                Some(p) => load_lexicon(&p)?.signature,
                None => Signature::new(),
            };
            let (t, ty) = checked_term(&sig, &term)?;
            let start = if no_unfold { t } else { unfold_definitions(&sig, &t) };
            let strategy = match strategy {
                StrategyArg::Outermost => Strategy::LeftmostOutermost,
                StrategyArg::Innermost => Strategy::RightmostInnermost,
            };
            let normalizer = Normalizer { strategy, max_steps };
            let steps = normalizer.trace(&start).map_err(|e| fail("limit", e))?;
            let nf = steps.last().cloned().unwrap_or(start);
            let formula = if ty.is_prop() { term_to_formula(&sig, &nf).ok() } else { None };
            let mut text = String::new();
            if trace {
                for (i, s) in steps.iter().enumerate() {
                    text.push_str(&format!("{i:>4}  {}\n", out.term_text(s)));
                }
            }
            text.push_str(&format!("{} : {ty}", out.term_text(&nf)));
            if let Some(f) = &formula {
                text.push_str(&format!("\n{}", out.formula_text(f)));
            }
            let mut v = json!({"normal_form": nf.to_string(), "type": ty.to_string(), "steps": steps.len().saturating_sub(1)});
            if trace {
                v["trace"] = steps.iter().map(|s| Value::from(s.to_string())).collect();
            }
            if let Some(f) = &formula {
                v["formula"] = out.formula_value(f);
            }
            out.emit(text, v);
            Ok(Outcome::Positive)
        }
        Command::Subtype { lexicon, sub, sup } => {
            let lex = load_lexicon(&lexicon)?;
            let sig = &lex.signature;
            let s = parse_type(sig, &sub).map_err(|e| fail("parse", e))?;
            let t = parse_type(sig, &sup).map_err(|e| fail("parse", e))?;
            for ty in [&s, &t] {
                sig.check_closed_type(ty).map_err(|e| fail("type", e))?;
            }
            match derive_subtype(sig, &s, &t) {
                Some(d) => {
                    let c = coercion_term(&d, "x").normalized();
                    out.emit(
                        format!("{s} < {t}\ncoercion: {}\n{d}", out.term_text(&c.as_function())),
                        json!({
                            "subtype": true,
                            "coercion": c.as_function().to_string(),
                            "derivation": d.to_string(),
                        }),
                    );
                    Ok(Outcome::Positive)
                }
                None => {
                    out.emit(format!("{s} is not a subtype of {t}"), json!({"subtype": false}));
                    Ok(Outcome::Negative)
                }
            }
        }
        Command::Coherence { lexicon, depth } => {
            let lex = load_lexicon(&lexicon)?;
            let report = check_coherence(&lex.signature, depth);
            let mut text = String::new();
            for p in &report.pairs {
                let verdict = if p.is_coherent() && p.matches_declared { "unique" } else { "INCOHERENT" };
                let classes: Vec<_> = p.classes.iter().map(|c| c.coercion.as_str()).collect();
                text.push_str(&format!("{} < {}: {verdict} [{}]\n", p.from, p.to, classes.join(" | ")));
            }
            text.push_str(if report.is_coherent() { "coherent" } else { "incoherent" });
            out.emit(text, serde_json::to_value(&report).expect("report serializes"));
            Ok(if report.is_coherent() { Outcome::Positive } else { Outcome::Negative })
        }
        Command::Assemble { lexicon, tree, all: _, first } => {
            let lex = load_lexicon(&lexicon)?;
            let tree = CompositionTree::from_json(&read(&tree)?).map_err(|e| fail("parse", e))?;
            let mut result = assemble_report(&lex, &tree).map_err(|e| fail("input", e))?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if first {
                result.readings.truncate(1);
            }
            let sig = &lex.signature;
            let formula = |t: &Term| term_to_formula(sig, &normalize_in(sig, t)).ok();
            let mut text = String::new();
            let mut values = Vec::new();
            for (i, r) in result.readings.iter().enumerate() {
                let f = formula(&r.logical_form);
                let shown =
                    f.as_ref().map(|f| out.formula_text(f)).unwrap_or_else(|| out.term_text(&r.logical_form));
                text.push_str(&format!("{}. {shown}\n   via {}\n", i + 1, trace_text(&r.trace)));
                let presup: Vec<Value> = r
                    .presuppositions
                    .iter()
                    .map(|p| match formula(p) {
                        Some(f) => out.formula_value(&f),
                        None => Value::from(p.to_string()),
                    })
                    .collect();
                for p in &r.presuppositions {
                    let shown = formula(p).map(|f| out.formula_text(&f)).unwrap_or_else(|| p.to_string());
                    text.push_str(&format!("   presupposes {shown}\n"));
                }
                values.push(reading_json(&out, r, f.as_ref(), presup));
            }
            if result.readings.is_empty() {
                text.push_str("no reading: rejected");
            }
            out.emit(text.trim_end().to_string(), json!({"readings": values, "warnings": result.warnings}));
            Ok(if result.readings.is_empty() { Outcome::Negative } else { Outcome::Positive })
        }
    }
}

fn reading_json(out: &Out, r: &Reading, f: Option<&Formula>, presuppositions: Vec<Value>) -> Value {
    json!({
        "logical_form": r.logical_form.to_string(),
        "type": r.ty.to_string(),
        "formula": f.map(|f| out.formula_value(f)).unwrap_or(Value::Null),
        "trace": trace_json(&r.trace),
        "alternative_traces": r.alternative_traces.iter().map(|t| trace_json(t)).collect::<Vec<_>>(),
        "presuppositions": presuppositions,
        "typing_facts": serde_json::to_value(&r.typing_facts).expect("facts serialize"),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_errors = cli.format == Format::Json;
    match run(cli) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(f) => {
            if json_errors {
                eprintln!("{}", json!({"error": {"code": f.code, "message": f.message}}));
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(2)
        }
    }
}
