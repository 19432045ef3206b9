//! Command-line interface.
//!
//! Four commands over a shared word syntax:
//!
//! * `witness GENERATORS..` — run the pipeline and print the witness word;
//! * `analyze GENERATORS..` — print the full subgroup-tower report;
//! * `member --in H|K|I|L|N WORD GENERATORS..` — one membership query;
//! * `export-dot --graph core|cover|cayley --out PATH GENERATORS..` — write
//!   a Graphviz rendering of one of the constructed graphs.
//!
//! Words use letter syntax (`a`–`z` generators, `A`–`Z` their inverses) for
//! ranks up to 26, or numeric syntax (`x3` = third generator, `X3` its
//! inverse) for any rank; a word containing a digit is parsed entirely
//! numerically. The empty string is the identity.
//!
//! Exit codes: 0 for success (including a `member` query answering false),
//! 2 when a witness is impossible because the subgroup has finite index,
//! 1 for every error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::completion::complete;
use crate::dot::render_dot;
use crate::error::{Error, Result};
use crate::graph::CoreGraph;
use crate::pipeline::{
    run_pipeline, Chain, HIndexStatus, PipelineConfig, PipelineStatus, WitnessReport,
};
use crate::word::{Alphabet, Letter, Sign, Word};

/// Parse a word. Any digit switches the whole word to numeric syntax.
pub fn parse_word(text: &str, alphabet: Alphabet) -> Result<Word> {
    let letters = if text.chars().any(|c| c.is_ascii_digit()) {
        parse_numeric(text, alphabet)?
    } else {
        parse_letters(text, alphabet)?
    };
    Word::reduce(letters, alphabet)
}

fn parse_letters(text: &str, alphabet: Alphabet) -> Result<Vec<Letter>> {
    let mut letters = Vec::new();
    for c in text.chars() {
        let (gen, sign) = match c {
            'a'..='z' => ((c as u8 - b'a') as usize, Sign::Pos),
            'A'..='Z' => ((c as u8 - b'A') as usize, Sign::Neg),
            _ => {
                return Err(Error::Parse(format!("unexpected character {c:?} in word {text:?}")))
            }
        };
        if gen >= alphabet.rank() {
            return Err(Error::Parse(format!(
                "letter {c:?} needs generator {} but the rank is {}",
                gen + 1,
                alphabet.rank()
            )));
        }
        letters.push(Letter { gen, sign });
    }
    Ok(letters)
}

fn parse_numeric(text: &str, alphabet: Alphabet) -> Result<Vec<Letter>> {
    let mut letters = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        let sign = match c {
            'x' => Sign::Pos,
            'X' => Sign::Neg,
            _ => {
                return Err(Error::Parse(format!(
                    "expected 'x' or 'X' at {c:?} in numeric word {text:?}"
                )))
            }
        };
        let mut digits = String::new();
        while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
            digits.push(d);
            chars.next();
        }
        if digits.is_empty() {
            return Err(Error::Parse(format!("missing generator index after {c:?} in {text:?}")));
        }
        let index: usize = digits
            .parse()
            .map_err(|_| Error::Parse(format!("generator index {digits} is out of range")))?;
        if index == 0 || index > alphabet.rank() {
            return Err(Error::Parse(format!(
                "generator index {index} is outside 1..={}",
                alphabet.rank()
            )));
        }
        letters.push(Letter { gen: index - 1, sign });
    }
    Ok(letters)
}

#[derive(Parser)]
#[command(
    name = "fgwitness",
    version,
    about = "Witnesses that a finitely generated infinite-index subgroup of a free group \
             is disjoint from some nontrivial normal subgroup"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a nontrivial normal subgroup avoiding ⟨GENERATORS⟩ and print its witness element.
    Witness(ReportArgs),
    /// Print the full subgroup-tower report for ⟨GENERATORS⟩.
    Analyze(ReportArgs),
    /// Decide whether WORD lies in one subgroup of the tower.
    Member(MemberArgs),
    /// Write one of the constructed graphs as Graphviz DOT.
    ExportDot(ExportArgs),
}

#[derive(Args)]
struct ReportArgs {
    /// Generators of the subgroup H, one word per argument.
    generators: Vec<String>,
    /// Rank of the ambient free group.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Abort if the coset-action closure exceeds this many elements.
    #[arg(long, default_value_t = 10_000)]
    max_cosets: usize,
    /// Basis-word length bound for the disjointness check.
    #[arg(long, default_value_t = 6)]
    depth_disjoint: usize,
    /// Conjugator length bound for the normality check.
    #[arg(long, default_value_t = 4)]
    depth_normal: usize,
}

#[derive(Args)]
struct MemberArgs {
    /// Which subgroup of the tower to test against.
    #[arg(long = "in", value_name = "SUBGROUP")]
    subgroup: String,
    /// The word to test.
    word: String,
    /// Generators of the subgroup H, one word per argument.
    generators: Vec<String>,
    /// Rank of the ambient free group.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Abort if the coset-action closure exceeds this many elements.
    #[arg(long, default_value_t = 10_000)]
    max_cosets: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    /// The subgroup's folded core graph.
    Core,
    /// The finite-index completion K.
    Cover,
    /// The Cayley cover of the kernel I.
    Cayley,
}

#[derive(Args)]
struct ExportArgs {
    /// Which graph to export.
    #[arg(long, value_enum)]
    graph: GraphKind,
    /// Output path for the DOT file.
    #[arg(long)]
    out: String,
    /// Generators of the subgroup H, one word per argument.
    generators: Vec<String>,
    /// Rank of the ambient free group.
    #[arg(long, default_value_t = 2)]
    rank: usize,
    /// Abort if the coset-action closure exceeds this many elements.
    #[arg(long, default_value_t = 10_000)]
    max_cosets: usize,
}

/// Entry point: parse arguments, dispatch, print, and return the exit code.
pub fn run<I>(args: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            let _ = err.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                0
            } else {
                1
            };
        }
    };
    match dispatch(cli.command) {
        Ok((stdout, code)) => {
            print!("{stdout}");
            code
        }
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn parse_generators(texts: &[String], alphabet: Alphabet) -> Result<Vec<Word>> {
    texts.iter().map(|t| parse_word(t, alphabet)).collect()
}

fn dispatch(command: Command) -> Result<(String, i32)> {
    match command {
        Command::Witness(args) => {
            let (report, json) = report_for(&args)?;
            let code = exit_code(report.status);
            let text = if json {
                render_json(&report)
            } else {
                match &report.witness {
                    Some(witness) => format!("{}\n", show_word(witness)),
                    None => match report.h_index {
                        HIndexStatus::Finite(n) => format!("no witness: finite index {n}\n"),
                        _ => "no witness\n".to_string(),
                    },
                }
            };
            Ok((text, code))
        }
        Command::Analyze(args) => {
            let (report, json) = report_for(&args)?;
            let code = exit_code(report.status);
            let text = if json { render_json(&report) } else { render_text(&report) };
            Ok((text, code))
        }
        Command::Member(args) => {
            let test: fn(&Chain, &Word) -> bool = match args.subgroup.as_str() {
                "H" => Chain::in_h,
                "K" => Chain::in_k,
                "I" => Chain::in_i,
                "L" => Chain::in_l,
                "N" => Chain::in_n,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown subgroup {other:?}: expected H, K, I, L, or N"
                    )))
                }
            };
            let alphabet = Alphabet::new(args.rank)?;
            let word = parse_word(&args.word, alphabet)?;
            let generators = parse_generators(&args.generators, alphabet)?;
            let chain = Chain::build(&generators, alphabet, args.max_cosets)?;
            Ok((format!("{}\n", test(&chain, &word)), 0))
        }
        Command::ExportDot(args) => {
            let alphabet = Alphabet::new(args.rank)?;
            let generators = parse_generators(&args.generators, alphabet)?;
            let core = CoreGraph::from_generators(&generators, alphabet)?;
            let rendered = match args.graph {
                GraphKind::Core => render_dot(&core, "core"),
                GraphKind::Cover => render_dot(&complete(&core).cover, "cover"),
                GraphKind::Cayley => {
                    let chain = Chain::build(&generators, alphabet, args.max_cosets)?;
                    render_dot(&chain.cover_i, "cayley")
                }
            };
            std::fs::write(&args.out, rendered)?;
            Ok((String::new(), 0))
        }
    }
}

fn report_for(args: &ReportArgs) -> Result<(WitnessReport, bool)> {
    let alphabet = Alphabet::new(args.rank)?;
    let generators = parse_generators(&args.generators, alphabet)?;
    let config = PipelineConfig {
        max_cosets: args.max_cosets,
        depth_disjoint: args.depth_disjoint,
        depth_normal: args.depth_normal,
        ..PipelineConfig::default()
    };
    let outcome = run_pipeline(&generators, alphabet, &config)?;
    Ok((outcome.report, args.json))
}

fn exit_code(status: PipelineStatus) -> i32 {
    match status {
        PipelineStatus::NoWitnessFiniteIndex => 2,
        _ => 0,
    }
}

/// A word in display syntax, with the identity written as `1`.
fn show_word(word: &Word) -> String {
    if word.is_identity() {
        "1".to_string()
    } else {
        word.to_string()
    }
}

/// A word list, space-separated; `-` when empty.
fn show_words(words: &[Word]) -> String {
    if words.is_empty() {
        "-".to_string()
    } else {
        words.iter().map(show_word).collect::<Vec<_>>().join(" ")
    }
}

fn render_text(report: &WitnessReport) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    line(format!("status: {}", report.status.as_str()));
    line(format!("rank: {}", report.rank));
    line(format!("H generators: {}", show_words(&report.h_generators)));
    line(format!("H rank: {}", report.h_rank));
    let (index_status, index) = index_fields(report.h_index);
    line(format!("H index status: {index_status}"));
    line(format!(
        "H index: {}",
        index.map_or_else(|| "-".to_string(), |n| n.to_string())
    ));
    line(format!("K index: {}", report.k_index));
    line(format!("Q basis: {}", show_words(&report.q_basis)));
    line(format!("I index: {}", report.i_index));
    line(format!("coset reps: {}", show_words(&report.coset_reps)));
    line(format!("basis I∩H: {}", show_words(&report.basis_ih)));
    line(format!("basis J: {}", show_words(&report.basis_j)));
    line(format!(
        "witness: {}",
        report.witness.as_ref().map_or_else(|| "-".to_string(), show_word)
    ));
    match &report.verification {
        Some(v) => {
            line(format!(
                "verification: passed (depth disjoint {}, depth normal {})",
                v.depth_disjoint, v.depth_normal
            ));
            line(format!("  disjointness checks: {}", v.counts.disjointness));
            line(format!("  normality checks: {}", v.counts.normality));
            line(format!("  free factor checks: {}", v.counts.free_factor));
            line(format!("  lemma intersection checks: {}", v.counts.lemma_intersection));
        }
        None => line("verification: -".to_string()),
    }
    line(format!(
        "config: max cosets {}, depth disjoint {}, depth normal {}, witness budget {}",
        report.config.max_cosets,
        report.config.depth_disjoint,
        report.config.depth_normal,
        report.config.witness_budget
    ));
    out
}

fn index_fields(status: HIndexStatus) -> (&'static str, Option<usize>) {
    match status {
        HIndexStatus::Infinite => ("infinite", None),
        HIndexStatus::Finite(n) => ("finite", Some(n)),
        HIndexStatus::Trivial => ("trivial", None),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonReport {
    status: &'static str,
    rank: usize,
    h_generators: Vec<String>,
    h_rank: usize,
    h_index_status: &'static str,
    h_index: Option<usize>,
    k_index: usize,
    q_basis: Vec<String>,
    i_index: usize,
    coset_reps: Vec<String>,
    #[serde(rename = "basisIH")]
    basis_ih: Vec<String>,
    basis_j: Vec<String>,
    witness: Option<String>,
    verification: Option<JsonVerification>,
    config: JsonConfig,
}

#[derive(Serialize)]
struct JsonVerification {
    depths: JsonDepths,
    counts: JsonCounts,
    passed: JsonPassed,
}

#[derive(Serialize)]
struct JsonDepths {
    disjoint: usize,
    normal: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonCounts {
    disjointness: usize,
    normality: usize,
    free_factor: usize,
    lemma_intersection: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonPassed {
    disjointness: bool,
    normality: bool,
    free_factor: bool,
    lemma_intersection: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonConfig {
    max_cosets: usize,
    depth_disjoint: usize,
    depth_normal: usize,
    witness_budget: usize,
}

fn render_json(report: &WitnessReport) -> String {
    let to_strings = |words: &[Word]| words.iter().map(Word::to_string).collect::<Vec<_>>();
    let (h_index_status, h_index) = index_fields(report.h_index);
    let mirror = JsonReport {
        status: report.status.as_str(),
        rank: report.rank,
        h_generators: to_strings(&report.h_generators),
        h_rank: report.h_rank,
        h_index_status,
        h_index,
        k_index: report.k_index,
        q_basis: to_strings(&report.q_basis),
        i_index: report.i_index,
        coset_reps: to_strings(&report.coset_reps),
        basis_ih: to_strings(&report.basis_ih),
        basis_j: to_strings(&report.basis_j),
        witness: report.witness.as_ref().map(Word::to_string),
        verification: report.verification.as_ref().map(|v| JsonVerification {
            depths: JsonDepths { disjoint: v.depth_disjoint, normal: v.depth_normal },
            counts: JsonCounts {
                disjointness: v.counts.disjointness,
                normality: v.counts.normality,
                free_factor: v.counts.free_factor,
                lemma_intersection: v.counts.lemma_intersection,
            },
            passed: JsonPassed {
                disjointness: true,
                normality: true,
                free_factor: true,
                lemma_intersection: true,
            },
        }),
        config: JsonConfig {
            max_cosets: report.config.max_cosets,
            depth_disjoint: report.config.depth_disjoint,
            depth_normal: report.config.depth_normal,
            witness_budget: report.config.witness_budget,
        },
    };
    let mut rendered = serde_json::to_string_pretty(&mirror).expect("report serializes");
    rendered.push('\n');
    rendered
}
