//! Command-line front end. [`run`] does all the work against injected
//! streams so the binary is a thin wrapper and tests can drive it in-process.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use agglutspell::batch::{evaluate, parse_corpus, BatchReport};
use agglutspell::{
    load_language, CorrectionStats, LangError, LanguageDefinition, RootQuery, SearchOptions,
    Speller, Suggestion,
};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISSPELLED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "agglutspell",
    version,
    about = "Spelling checker and corrector for agglutinative languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report whether a word is in the language.
    Check {
        #[command(flatten)]
        common: Common,
        word: String,
    },
    /// Print ranked corrections for a word.
    Suggest {
        #[command(flatten)]
        common: Common,
        word: String,
    },
    /// Correct every word of a TSV corpus and report operation counts.
    Batch {
        #[command(flatten)]
        common: Common,
        /// `misspelled<TAB>intended` per line; `-` reads standard input.
        corpus: PathBuf,
    },
    /// Read words, show suggestions and echo the chosen corrections.
    Interactive {
        #[command(flatten)]
        common: Common,
    },
    /// Load a language pack and report its problems.
    ValidatePack {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Language pack file.
    #[arg(long, value_name = "PATH")]
    lang: PathBuf,
    /// Maximum edit distance of a suggestion.
    #[arg(short = 't', long = "threshold", default_value_t = 1,
          value_parser = clap::value_parser!(u8).range(0..=3))]
    threshold: u8,
    /// q-gram length of the root index.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..))]
    q: u8,
    /// Number of leading q-grams of the word consulted.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Number of those q-grams a root may miss.
    #[arg(long = "tq", default_value_t = 2)]
    tq: usize,
    /// Append operation counts.
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    json: bool,
    /// Bound the search by length only instead of by cut-off distance.
    #[arg(long)]
    no_prune: bool,
    /// Check every root by edit distance instead of the q-gram index.
    #[arg(long)]
    no_prefilter: bool,
}

impl Common {
    fn options(&self) -> Result<SearchOptions, String> {
        let query = RootQuery::new(self.k, self.tq, self.threshold as usize)?;
        Ok(SearchOptions {
            query,
            prune: !self.no_prune,
            prefilter: !self.no_prefilter,
        })
    }
}

/// Standard streams of one invocation.
pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Parses `args` (program name first) and executes the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I, io: &mut Io<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
            let text = err.render().to_string();
            let sink: &mut dyn Write = if err.use_stderr() {
                io.stderr
            } else {
                io.stdout
            };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli.command, io) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(err)) => {
            let _ = writeln!(io.stderr, "error: {err}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Io(err)
    }
}

fn load_pack(path: &Path) -> Result<LanguageDefinition, Failure> {
    let file = File::open(path)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    load_language(BufReader::new(file)).map_err(|e| match e {
        LangError::Invalid(diags) => Failure::Usage(format!(
            "{}: invalid language pack\n{}",
            path.display(),
            diags
                .iter()
                .map(|d| format!("  {d}"))
                .collect::<Vec<_>>()
                .join("\n")
        )),
        other => Failure::Usage(format!("{}: {other}", path.display())),
    })
}

fn execute(command: Command, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        Command::Check { common, word } => {
            let def = load_pack(&common.lang)?;
            let speller = Speller::new(&def, common.q as usize);
            let ok = speller.recognize(&word);
            if common.json {
                writeln!(io.stdout, "{}", json!({ "word": word, "valid": ok }))?;
            } else {
                writeln!(io.stdout, "{}", if ok { "OK" } else { "MISSPELLED" })?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_MISSPELLED })
        }
        Command::Suggest { common, word } => {
            let options = common.options().map_err(Failure::Usage)?;
            let def = load_pack(&common.lang)?;
            let speller = Speller::new(&def, common.q as usize);
            let mut stats = CorrectionStats::default();
            let ranked = speller.suggest(&word, &options, &mut stats);
            if ranked.is_empty() {
                writeln!(io.stderr, "no suggestions")?;
            }
            if common.json {
                let mut doc = json!({
                    "word": word,
                    "suggestions": ranked.iter().map(suggestion_json).collect::<Vec<_>>(),
                });
                if common.stats {
                    doc["stats"] = stats_json(&stats);
                }
                writeln!(io.stdout, "{doc}")?;
            } else {
                for s in &ranked {
                    writeln!(io.stdout, "{}", suggestion_row(s))?;
                }
                if common.stats {
                    writeln!(io.stdout, "# {}", stats_line(&stats))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Batch { common, corpus } => {
            let options = common.options().map_err(Failure::Usage)?;
            let def = load_pack(&common.lang)?;
            let text = if corpus.as_os_str() == "-" {
                let mut buf = String::new();
                io.stdin.read_to_string(&mut buf)?;
                buf
            } else {
                std::fs::read_to_string(&corpus)
                    .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", corpus.display())))?
            };
            let speller = Speller::new(&def, common.q as usize);
            let report = evaluate(&speller, &parse_corpus(&text), &options);
            for skipped in &report.skipped {
                writeln!(
                    io.stderr,
                    "warning: line {}: {}; skipped",
                    skipped.line, skipped.reason
                )?;
            }
            if common.json {
                writeln!(io.stdout, "{}", report_json(&report))?;
            } else {
                write_report(io.stdout, &report)?;
            }
            Ok(EXIT_OK)
        }
        Command::Interactive { common } => {
            let options = common.options().map_err(Failure::Usage)?;
            let def = load_pack(&common.lang)?;
            let speller = Speller::new(&def, common.q as usize);
            interactive(&speller, &options, io)?;
            Ok(EXIT_OK)
        }
        Command::ValidatePack { common } => {
            let def = load_pack(&common.lang)?;
            writeln!(
                io.stdout,
                "ok: {} roots, {} states, {} transitions",
                def.roots.len(),
                def.fsa.states.len(),
                def.fsa.transitions.len()
            )?;
            Ok(EXIT_OK)
        }
    }
}

/// `rank<TAB>surface<TAB>distance<TAB>score<TAB>lexical`, with the first analysis.
pub fn suggestion_row(s: &Suggestion) -> String {
    format!(
        "{}\t{}\t{}\t{:.4}\t{}",
        s.rank,
        s.candidate.surface,
        s.candidate.distance,
        s.score,
        s.candidate.lexical()
    )
}

fn suggestion_json(s: &Suggestion) -> Value {
    json!({
        "rank": s.rank,
        "surface": s.candidate.surface,
        "distance": s.candidate.distance,
        "score": format!("{:.4}", s.score),
        "lexical": s.candidate.lexical(),
    })
}

fn stats_line(stats: &CorrectionStats) -> String {
    format!(
        "recognitions={} generations={} edit_ops={} solutions={}",
        stats.recognitions, stats.generations, stats.edit_ops, stats.solutions
    )
}

fn stats_json(stats: &CorrectionStats) -> Value {
    json!({
        "recognitions": stats.recognitions,
        "generations": stats.generations,
        "edit_ops": stats.edit_ops,
        "solutions": stats.solutions,
    })
}

fn yes_no(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

const BATCH_HEADER: &str =
    "word\trecognitions\tgenerations\tedit_ops\tsolutions\tfound\tfirst\ttop";

fn write_report(out: &mut dyn Write, report: &BatchReport) -> io::Result<()> {
    writeln!(out, "{BATCH_HEADER}")?;
    for row in &report.rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.word,
            row.stats.recognitions,
            row.stats.generations,
            row.stats.edit_ops,
            row.stats.solutions,
            yes_no(row.found()),
            yes_no(row.found_first()),
            row.suggestions
                .first()
                .map_or("-", |s| s.candidate.surface.as_str())
        )?;
    }
    let a = &report.aggregate;
    writeln!(
        out,
        "mean\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.1}%\t{:.1}%\t-",
        a.mean_recognitions,
        a.mean_generations,
        a.mean_edit_ops,
        a.mean_solutions,
        a.accuracy_found,
        a.accuracy_first
    )?;
    writeln!(
        out,
        "# words={} evaluated={} skipped={}",
        a.words,
        a.evaluated,
        report.skipped.len()
    )
}

fn report_json(report: &BatchReport) -> Value {
    let a = &report.aggregate;
    json!({
        "rows": report.rows.iter().map(|row| json!({
            "word": row.word,
            "intended": row.intended,
            "found": row.found(),
            "first": row.found_first(),
            "stats": stats_json(&row.stats),
            "suggestions": row.suggestions.iter().map(suggestion_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "aggregate": {
            "words": a.words,
            "evaluated": a.evaluated,
            "mean_recognitions": a.mean_recognitions,
            "mean_generations": a.mean_generations,
            "mean_edit_ops": a.mean_edit_ops,
            "mean_solutions": a.mean_solutions,
            "accuracy_found": a.accuracy_found,
            "accuracy_first": a.accuracy_first,
        },
        "skipped": report.skipped.iter().map(|s| json!({
            "line": s.line,
            "reason": s.reason,
        })).collect::<Vec<_>>(),
    })
}

const HELP: &str = "\
enter a word to check it; after suggestions are listed, enter a rank to
accept that correction or an empty line to skip
  :help   show this text
  :quit   end the session";

fn interactive(speller: &Speller<'_>, options: &SearchOptions, io: &mut Io<'_>) -> io::Result<()> {
    let mut buf = String::new();
    let mut next_line = |stdin: &mut dyn BufRead| -> io::Result<Option<String>> {
        buf.clear();
        if stdin.read_line(&mut buf)? == 0 {
            return Ok(None);
        }
        Ok(Some(buf.trim().to_string()))
    };
    loop {
        write!(io.stderr, "> ")?;
        io.stderr.flush()?;
        let Some(word) = next_line(io.stdin)? else {
            break;
        };
        match word.as_str() {
            "" => continue,
            ":quit" | ":q" => break,
            w if w.starts_with(':') => {
                writeln!(io.stderr, "{HELP}")?;
                continue;
            }
            _ => {}
        }
        if speller.recognize(&word) {
            writeln!(io.stderr, "ok")?;
            continue;
        }
        let mut stats = CorrectionStats::default();
        let ranked = speller.suggest(&word, options, &mut stats);
        if ranked.is_empty() {
            writeln!(io.stderr, "no suggestions")?;
            continue;
        }
        for s in &ranked {
            writeln!(io.stderr, "{}", suggestion_row(s))?;
        }
        write!(io.stderr, "select> ")?;
        io.stderr.flush()?;
        let Some(choice) = next_line(io.stdin)? else {
            break;
        };
        if choice == ":quit" || choice == ":q" {
            break;
        }
        if choice.is_empty() {
            continue;
        }
        match choice.parse::<usize>() {
            Ok(n) if (1..=ranked.len()).contains(&n) => {
                let surface = &ranked[n - 1].candidate.surface;
                writeln!(io.stdout, "{surface}")?;
            }
            _ => writeln!(io.stderr, "{HELP}")?,
        }
    }
    Ok(())
}
