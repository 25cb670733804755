//! The `catgram` command line.
//!
//! Every command reads JSON (or classical grammar text) from files and
//! writes pretty-printed JSON. Exit codes: 0 when the command succeeds and
//! any property it checks holds, 1 when the property fails, 2 on bad input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Args, Parser as ClapParser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::automaton::Automaton;
use crate::contour::{self, DyckLetter};
use crate::error::Error;
use crate::freecat::{FiniteGraph, Path, PathRepr};
use crate::grammar::{self, import_classical, ClassicalGrammar, Grammar};
use crate::oracle;
use crate::parser::{ParseCount, Parser, ParserConfig, Strategy};
use crate::product::{self, PullbackOptions};
use crate::species::{DerivationTree, Species};

#[derive(Debug, ClapParser)]
#[command(name = "catgram", version, about = "Context-free grammars of arrows over free categories")]
struct Cli {
    /// `json` is pretty-printed; `text` prints lists one entry per line.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn render(value: &Value, format: Format) -> String {
    match (format, value) {
        (Format::Text, Value::Array(items)) => items
            .iter()
            .map(|v| match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        (Format::Text, other) => other.to_string(),
        (Format::Json, other) => serde_json::to_string_pretty(other).expect("JSON values serialize"),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a grammar and report its properties.
    Validate(GrammarArg),
    /// Parse a word.
    Parse(ParseArgs),
    /// List the words of a grammar or automaton up to a length.
    Enumerate(EnumerateArgs),
    /// Pull a grammar back along an automaton.
    Intersect(IntersectArgs),
    /// Print the bilinear normal form.
    Bilinearize(GrammarArg),
    /// Print the contour word of a tree.
    Contour(ContourArgs),
    /// Translate between contour words and annotated Dyck words.
    Dyck(DyckArgs),
    /// Print the contour decomposition and optionally check it.
    CsDecompose(CsArgs),
    /// Compare two grammars' languages up to a length.
    CheckEquiv(EquivArgs),
}

#[derive(Debug, Args)]
struct GrammarArg {
    /// Grammar JSON, or classical text `R -> w0 R1 w1 ...`.
    #[arg(short, long)]
    grammar: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Direct,
    Bilinear,
}

#[derive(Debug, Args)]
struct ParseArgs {
    #[arg(short, long)]
    grammar: String,
    /// Bare string when every generator is one character, else a JSON path.
    #[arg(short, long)]
    word: String,
    #[arg(long, default_value_t = 16)]
    limit: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Bilinear)]
    strategy: StrategyArg,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(short, long, conflicts_with = "automaton", required_unless_present = "automaton")]
    grammar: Option<String>,
    #[arg(short, long)]
    automaton: Option<String>,
    #[arg(long)]
    max_len: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Emit {
    Pullback,
    Image,
}

#[derive(Debug, Args)]
struct IntersectArgs {
    #[arg(short, long)]
    grammar: String,
    #[arg(short, long)]
    automaton: String,
    #[arg(long, value_enum, default_value_t = Emit::Image)]
    emit: Emit,
    /// Keep useless colors.
    #[arg(long)]
    untrimmed: bool,
}

#[derive(Debug, Args)]
struct SpeciesSource {
    #[arg(short, long, conflicts_with = "species", required_unless_present = "species")]
    grammar: Option<String>,
    #[arg(short, long)]
    species: Option<String>,
}

#[derive(Debug, Args)]
struct ContourArgs {
    #[command(flatten)]
    source: SpeciesSource,
    #[arg(short, long)]
    tree: String,
}

#[derive(Debug, Args)]
struct DyckArgs {
    #[command(flatten)]
    source: SpeciesSource,
    /// Encode a tree (`--tree`) or a contour word (`--contour`).
    #[arg(long, conflicts_with = "decode")]
    encode: bool,
    /// Decode a JSON list of letters.
    #[arg(long, value_name = "LETTERS")]
    decode: Option<String>,
    #[arg(short, long)]
    tree: Option<String>,
    #[arg(long, value_name = "PATH")]
    contour: Option<String>,
}

#[derive(Debug, Args)]
struct CsArgs {
    #[arg(short, long)]
    grammar: String,
    /// Compare both sides on words up to this length.
    #[arg(long)]
    check_bound: Option<usize>,
}

#[derive(Debug, Args)]
struct EquivArgs {
    #[arg(long = "g1")]
    g1: String,
    #[arg(long = "g2")]
    g2: String,
    #[arg(long)]
    max_len: usize,
}

/// Bad input; exit code 2. A failing property is reported as a normal
/// result with `holds = false`.
enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

/// Runs the command line `argv` (program name first), writing the result
/// to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    // `-g1` / `-g2` are accepted as spellings of `--g1` / `--g2`
    let argv: Vec<OsString> = argv
        .into_iter()
        .map(|a| {
            let a: OsString = a.into();
            match a.to_str() {
                Some("-g1") => "--g1".into(),
                Some("-g2") => "--g2".into(),
                _ => a,
            }
        })
        .collect();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok((value, holds)) => {
            let _ = writeln!(out, "{}", render(&value, cli.format));
            if holds {
                0
            } else {
                1
            }
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Validate(a) => validate(&a.grammar),
        Command::Parse(a) => parse(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Intersect(a) => intersect(a),
        Command::Bilinearize(a) => {
            let g = load_grammar(&a.grammar)?;
            Ok((to_value(&grammar::bilinearize(&g)?.grammar), true))
        }
        Command::Contour(a) => {
            let s = load_species(&a.source)?;
            let t: DerivationTree = load_json(&a.tree)?;
            let cw = contour::contour_word(&s, &t)?;
            Ok((json!({"src": cw.src(), "dst": cw.dst(), "corners": cw.gens()}), true))
        }
        Command::Dyck(a) => dyck(a),
        Command::CsDecompose(a) => cs_decompose(a),
        Command::CheckEquiv(a) => {
            let g1 = load_grammar(&a.g1)?;
            let g2 = load_grammar(&a.g2)?;
            match grammar::check_equiv_bounded(&g1, &g2, a.max_len)? {
                None => Ok((json!({"equal": true}), true)),
                Some(w) => Ok((
                    json!({"equal": false, "counterexample": word_json(g1.category(), &w)}),
                    false,
                )),
            }
        }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

/// JSON when the file starts with `{`, classical grammar text otherwise.
fn load_grammar(path: &str) -> Result<Grammar, Failure> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
    } else {
        let cg = ClassicalGrammar::parse(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        Ok(import_classical(&cg)?)
    }
}

fn load_species(src: &SpeciesSource) -> Result<Species, Failure> {
    match (&src.grammar, &src.species) {
        (Some(g), _) => Ok(load_grammar(g)?.species().clone()),
        (None, Some(s)) => load_json(s),
        (None, None) => Err(Failure::Input("need --grammar or --species".into())),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn word_json(cat: &FiniteGraph, w: &Path) -> Value {
    if cat.single_char_generators() {
        Value::String(w.gens().concat())
    } else {
        to_value(&w.to_repr())
    }
}

/// Reads a word: a JSON path if it parses as one, else a bare string of
/// one-character generators starting at `src`.
fn read_word(cat: &FiniteGraph, src: &str, text: &str) -> Result<Path, Failure> {
    if let Ok(repr) = serde_json::from_str::<PathRepr>(text) {
        return Ok(cat.resolve(&repr)?);
    }
    if !cat.single_char_generators() {
        return Err(Failure::Input(
            "generators have multi-character names; give the word as a JSON array".into(),
        ));
    }
    Ok(cat.word(src, text)?)
}

fn validate(path: &str) -> Outcome {
    let text = read(path)?;
    let g = if text.trim_start().starts_with('{') {
        let repr: grammar::GrammarRepr =
            serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        match Grammar::from_repr(&repr) {
            Ok(g) => g,
            Err(e) => return Ok((json!({"valid": false, "errors": [e.to_string()]}), false)),
        }
    } else {
        load_grammar(path)?
    };
    Ok((json!({"valid": true, "properties": to_value(&g.properties())}), true))
}

fn parse(a: ParseArgs) -> Outcome {
    let g = load_grammar(&a.grammar)?;
    let w = read_word(g.category(), &g.start_type().left, &a.word)?;
    let strategy = match a.strategy {
        StrategyArg::Direct => Strategy::Direct,
        StrategyArg::Bilinear => Strategy::Bilinear,
    };
    let p = Parser::with_config(&g, ParserConfig { strategy, ..Default::default() })?;
    let nonterminals = p.recognize(&w)?;
    let forest = p.parse_forest(&w)?;
    let count = forest.count();
    let parses = match count {
        ParseCount::Infinite => Vec::new(),
        ParseCount::Finite(_) => forest.enumerate(a.limit)?,
    };
    let member = !forest.is_empty();
    Ok((
        json!({
            "member": member,
            "nonterminals": nonterminals,
            "count": to_value(&count),
            "parses": to_value(&parses),
        }),
        member,
    ))
}

fn enumerate(a: EnumerateArgs) -> Outcome {
    let (cat, words) = match (&a.grammar, &a.automaton) {
        (Some(g), _) => {
            let g = load_grammar(g)?;
            let ws = oracle::enumerate_language(&g, a.max_len);
            (g.category().clone(), ws)
        }
        (None, Some(m)) => {
            let m: Automaton = load_json(m)?;
            let ws = oracle::enumerate_regular_language(&m, a.max_len);
            (m.base().clone(), ws)
        }
        (None, None) => return Err(Failure::Input("need --grammar or --automaton".into())),
    };
    let list: Vec<Value> = words.iter().map(|w| word_json(&cat, w)).collect();
    Ok((Value::Array(list), true))
}

fn intersect(a: IntersectArgs) -> Outcome {
    let g = load_grammar(&a.grammar)?;
    let m: Automaton = load_json(&a.automaton)?;
    let opts = PullbackOptions {
        trim: !a.untrimmed,
        ..Default::default()
    };
    let result = match a.emit {
        Emit::Pullback => product::pullback_grammar_with(&g, &m, opts)?,
        Emit::Image => product::intersect_with(&g, &m, opts)?,
    };
    Ok((to_value(&result), true))
}

fn dyck(a: DyckArgs) -> Outcome {
    let s = load_species(&a.source)?;
    if let Some(path) = &a.decode {
        let letters: Vec<DyckLetter> = load_json(path)?;
        let cw = contour::dyck_decode(&s, &letters)?;
        return Ok((json!({"src": cw.src(), "dst": cw.dst(), "corners": cw.gens()}), true));
    }
    let cw = match (&a.tree, &a.contour) {
        (Some(t), _) => contour::contour_word(&s, &load_json::<DerivationTree>(t)?)?,
        (None, Some(c)) => {
            let repr: PathRepr = load_json(c)?;
            contour::contour_category(&s).resolve(&repr)?
        }
        (None, None) => return Err(Failure::Input("dyck --encode needs --tree or --contour".into())),
    };
    let letters = contour::dyck_translate(&s, &cw)?;
    Ok((
        json!({
            "brackets": contour::brackets(&letters),
            "balanced": contour::is_balanced(&letters),
            "letters": to_value(&letters),
        }),
        true,
    ))
}

fn cs_decompose(a: CsArgs) -> Outcome {
    let g = load_grammar(&a.grammar)?;
    let d = contour::cs_decompose(&g)?;
    let q = &d.interpretation;
    let mut report = json!({
        "universal": to_value(&d.universal),
        "automaton": to_value(&d.colors),
        "interpretation": {
            "objects": q.object_map(),
            "generators": q.generator_map().iter().map(|(k, p)| (k.clone(), to_value(&p.to_repr()))).collect::<serde_json::Map<_, _>>(),
        },
    });
    let mut holds = true;
    if let Some(bound) = a.check_bound {
        let check = contour::cs_check_bounded(&g, bound)?;
        holds = check.holds();
        let words = |ws: &std::collections::BTreeSet<Path>| ws.iter().map(|w| word_json(g.category(), w)).collect::<Vec<_>>();
        report["check"] = json!({
            "bound": bound,
            "holds": holds,
            "language": words(&check.language),
            "decomposed": words(&check.decomposed),
        });
    }
    Ok((report, holds))
}
