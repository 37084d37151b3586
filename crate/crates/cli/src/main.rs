//! Command-line front end: parsing, enumeration, composition, verification
//! sweeps, resolution building and DOT export.
//!
//! Exit status: 0 pass, 1 counterexample found, 2 inconclusive at the
//! bounds, 3 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semitheory::algebra::{check_roundtrip, RoundtripBounds, StrictAlgebra};
use semitheory::completion::{
    canonicalize_pointed, check_category_laws, check_theory_axioms, compose_trees, enumerate_trees, enumerate_tuples,
    parse_tuple, phi, AxiomBounds, TreeTuple,
};
use semitheory::dot::tuple_to_dot;
use semitheory::filtration::{check_l1, check_l2, check_l3, check_l4, check_pullback, FiltrationBounds};
use semitheory::resolution::{
    check_identities, compare_completion, complete_dimension, enumerate_nested, FiniteSemiTheory, ResolutionBounds,
};
use semitheory::{Error, Presentation, Report, Verdict};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "semitheory",
    version,
    about = "Free semi-theories, their completions and bounded verification sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    JsonLines,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Lemma {
    L1,
    L2,
    L3,
    L4,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a theory, algebra or table file and print it in canonical form.
    Parse {
        #[arg(long)]
        theory: Option<PathBuf>,
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// List words, trees or tuples within the bounds.
    Enumerate {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long, default_value_t = 1)]
        target: usize,
        /// List words of at most this many letters instead of trees.
        #[arg(long)]
        max_word_len: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_nodes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compose two tree tuples: LEFT after RIGHT.
    Compose {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print a term or word in canonical form.
    Normalize {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, conflicts_with = "word")]
        term: Option<String>,
        #[arg(long, requires = "source")]
        word: Option<String>,
        #[arg(long)]
        source: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Send a word to its tree tuple, or present a level of a resolution.
    Complete {
        #[arg(long, conflicts_with = "table")]
        theory: Option<PathBuf>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        source: Option<usize>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        max_word_len: usize,
        /// Compare the level completion with this presentation of the table.
        #[arg(long, requires = "table")]
        reference: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_nodes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a tree tuple in a strict algebra.
    Eval {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        term: String,
        /// Input tuple such as `(0,1)`.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check the algebraic-theory axioms, the category laws, or with an
    /// algebra the round trip through the completion.
    CheckAxioms {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        algebra: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        max_nodes: usize,
        #[arg(long, default_value_t = 3)]
        max_word_len: usize,
        #[arg(long, default_value_t = 3)]
        max_object: usize,
        /// Also check associativity and units with this many random triples.
        #[arg(long)]
        category_laws: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the unique-factorization lemmas.
    CheckLemma {
        #[arg(long, value_enum)]
        lemma: Lemma,
        #[arg(long)]
        theory: PathBuf,
        #[arg(long, default_value_t = 7)]
        max_nodes: usize,
        #[arg(long, default_value_t = 4)]
        max_word_len: usize,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long)]
        max_object: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Check that a filtration square is a pullback of Hom-sets.
    CheckPullback {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        source: usize,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, default_value_t = 7)]
        max_nodes: usize,
        #[arg(long, default_value_t = 4)]
        max_word_len: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build the bounded resolution of a finite table.
    Resolve {
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, default_value_t = 3)]
        max_word_len: usize,
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
        #[arg(long)]
        check_identities: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Write one DOT digraph per component of a tree tuple.
    ExportDot {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long, default_value = "tree")]
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Collects output lines and the verdicts of emitted reports.
struct Out {
    format: Format,
    lines: Vec<String>,
    verdicts: Vec<Verdict>,
}

impl Out {
    fn new(format: Format) -> Self {
        Out {
            format,
            lines: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    fn value(&mut self, kind: &str, value: impl ToString) {
        let value = value.to_string();
        match self.format {
            Format::Text => self.lines.push(value),
            Format::JsonLines => self.lines.push(json!({ "kind": kind, "value": value }).to_string()),
        }
    }

    fn report(&mut self, r: Report) {
        self.verdicts.push(r.verdict);
        match self.format {
            Format::Text => self.lines.push(r.to_string().trim_end().to_string()),
            Format::JsonLines => self.lines.push(r.to_json_line()),
        }
    }

    fn status(&self) -> u8 {
        if self.verdicts.contains(&Verdict::Fail) {
            1
        } else if self.verdicts.contains(&Verdict::Inconclusive) {
            2
        } else {
            0
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_theory(path: &Path) -> CliResult<Presentation> {
    Ok(Presentation::parse(&read(path)?)?)
}

fn load_algebra(path: &Path, p: &Presentation) -> CliResult<StrictAlgebra> {
    let a = StrictAlgebra::parse(&read(path)?)?;
    a.check_against(p)?;
    Ok(a)
}

fn load_table(path: &Path) -> CliResult<FiniteSemiTheory> {
    Ok(FiniteSemiTheory::parse(&read(path)?)?)
}

fn load_term(p: &Presentation, text: &str) -> CliResult<TreeTuple> {
    let t = parse_tuple(text, None)?;
    t.validate(p)?;
    Ok(t)
}

fn run(command: Command) -> CliResult<(Common, Out)> {
    match command {
        Command::Parse {
            theory,
            algebra,
            table,
            common,
        } => {
            let mut out = Out::new(common.format);
            match (theory, algebra, table) {
                (Some(t), None, None) => out.value("theory", load_theory(&t)?.to_text().trim_end()),
                (Some(t), Some(a), None) => {
                    let p = load_theory(&t)?;
                    out.value("algebra", load_algebra(&a, &p)?.to_text().trim_end());
                }
                (None, Some(a), None) => {
                    out.value("algebra", StrictAlgebra::parse(&read(&a)?)?.to_text().trim_end());
                }
                (None, None, Some(t)) => out.value("table", load_table(&t)?.to_text().trim_end()),
                _ => {
                    return Err(CliError::Usage(
                        "give --theory (optionally with --algebra), --algebra, or --table".into(),
                    ))
                }
            }
            Ok((common, out))
        }
        Command::Enumerate {
            theory,
            source,
            target,
            max_word_len,
            max_nodes,
            common,
        } => {
            let p = load_theory(&theory)?;
            let mut out = Out::new(common.format);
            match max_word_len {
                Some(len) => {
                    for w in p.enumerate_words(source, target, len)? {
                        out.value("word", w);
                    }
                }
                None if target == 1 => {
                    for t in enumerate_trees(&p, source, max_nodes)? {
                        out.value("tree", t);
                    }
                }
                None => {
                    for t in enumerate_tuples(&p, source, target, max_nodes)? {
                        out.value("tuple", t);
                    }
                }
            }
            Ok((common, out))
        }
        Command::Compose {
            theory,
            left,
            right,
            common,
        } => {
            let p = load_theory(&theory)?;
            let (s, t) = (load_term(&p, &left)?, load_term(&p, &right)?);
            let mut out = Out::new(common.format);
            out.value("tuple", compose_trees(&s, &t)?);
            Ok((common, out))
        }
        Command::Normalize {
            theory,
            term,
            word,
            source,
            common,
        } => {
            let p = load_theory(&theory)?;
            let mut out = Out::new(common.format);
            match (term, word, source) {
                (Some(term), None, _) => {
                    let t = parse_tuple(&term, None)?;
                    let t = if p.is_pointed() {
                        let components = t
                            .components
                            .iter()
                            .map(|c| canonicalize_pointed(&p, c))
                            .collect::<semitheory::Result<_>>()?;
                        TreeTuple::new(t.domain, components)
                    } else {
                        t
                    };
                    t.validate(&p)?;
                    out.value("tuple", t);
                }
                (None, Some(word), Some(n)) => out.value("word", p.parse_word(n, &word)?),
                _ => return Err(CliError::Usage("give --term, or --word with --source".into())),
            }
            Ok((common, out))
        }
        Command::Complete {
            theory,
            word,
            source,
            table,
            level,
            max_word_len,
            reference,
            max_nodes,
            common,
        } => {
            let mut out = Out::new(common.format);
            match (theory, table) {
                (Some(theory), None) => {
                    let p = load_theory(&theory)?;
                    let (word, n) = word
                        .zip(source)
                        .ok_or_else(|| CliError::Usage("give --word and --source with --theory".into()))?;
                    out.value("tuple", phi(&p, &p.parse_word(n, &word)?)?);
                }
                (None, Some(table)) => {
                    let t = load_table(&table)?;
                    let bounds = ResolutionBounds {
                        max_level: level,
                        max_len: max_word_len,
                        cap: 200_000,
                    };
                    match reference {
                        Some(r) => {
                            let p = load_theory(&r)?;
                            out.report(compare_completion(&t, level, &p, max_nodes, bounds)?);
                        }
                        None => {
                            let lp = complete_dimension(&t, level, bounds)?;
                            out.value("presentation", lp.presentation.to_text().trim_end());
                        }
                    }
                }
                _ => return Err(CliError::Usage("give --theory or --table".into())),
            }
            Ok((common, out))
        }
        Command::Eval {
            theory,
            algebra,
            term,
            input,
            common,
        } => {
            let p = load_theory(&theory)?;
            let a = load_algebra(&algebra, &p)?;
            let t = load_term(&p, &term)?;
            let x = a.parse_elements(&input)?;
            let mut out = Out::new(common.format);
            out.value("elements", a.format_elements(&a.eval_tuple(&t, &x)?));
            Ok((common, out))
        }
        Command::CheckAxioms {
            theory,
            algebra,
            max_nodes,
            max_word_len,
            max_object,
            category_laws,
            seed,
            common,
        } => {
            let p = load_theory(&theory)?;
            let mut out = Out::new(common.format);
            match algebra {
                Some(a) => {
                    let a = load_algebra(&a, &p)?;
                    let bounds = RoundtripBounds {
                        max_nodes,
                        max_word_len,
                        max_object,
                    };
                    out.report(check_roundtrip(&a, &p, bounds)?);
                }
                None => {
                    out.report(check_theory_axioms(&p, AxiomBounds::new(max_nodes, max_object))?);
                    if let Some(triples) = category_laws {
                        out.report(check_category_laws(&p, max_nodes.min(4), max_object, triples, seed)?);
                    }
                }
            }
            Ok((common, out))
        }
        Command::CheckLemma {
            lemma,
            theory,
            max_nodes,
            max_word_len,
            level,
            max_object,
            common,
        } => {
            let p = load_theory(&theory)?;
            let bounds = FiltrationBounds {
                max_nodes,
                max_word_len,
                max_level: level,
                max_object,
            };
            let mut out = Out::new(common.format);
            let checks: &[Lemma] = match lemma {
                Lemma::All => &[Lemma::L1, Lemma::L2, Lemma::L3, Lemma::L4],
                Lemma::L1 => &[Lemma::L1],
                Lemma::L2 => &[Lemma::L2],
                Lemma::L3 => &[Lemma::L3],
                Lemma::L4 => &[Lemma::L4],
            };
            for l in checks {
                let r = match l {
                    Lemma::L1 => check_l1(&p, bounds)?,
                    Lemma::L2 => check_l2(&p, bounds)?,
                    Lemma::L3 => check_l3(&p, bounds)?,
                    Lemma::L4 | Lemma::All => check_l4(&p, bounds)?,
                };
                out.report(r);
            }
            Ok((common, out))
        }
        Command::CheckPullback {
            theory,
            algebra,
            source,
            level,
            max_nodes,
            max_word_len,
            common,
        } => {
            let p = load_theory(&theory)?;
            let a = load_algebra(&algebra, &p)?;
            let mut out = Out::new(common.format);
            out.report(check_pullback(
                &p,
                source,
                level,
                &a,
                FiltrationBounds::new(max_nodes, max_word_len),
            )?);
            Ok((common, out))
        }
        Command::Resolve {
            table,
            level,
            max_word_len,
            cap,
            check_identities: check,
            common,
        } => {
            let t = load_table(&table)?;
            let bounds = ResolutionBounds {
                max_level: level,
                max_len: max_word_len,
                cap,
            };
            bounds.validate()?;
            let mut out = Out::new(common.format);
            for k in 0..=level {
                let words = enumerate_nested(&t, k, bounds.len_at(k), cap)?;
                out.value("level", format!("level {k}: {} words", words.len()));
            }
            if check {
                out.report(check_identities(&t, bounds)?);
            }
            Ok((common, out))
        }
        Command::ExportDot {
            theory,
            term,
            name,
            common,
        } => {
            let p = load_theory(&theory)?;
            let t = load_term(&p, &term)?;
            let mut out = Out::new(Format::Text);
            out.value("dot", tuple_to_dot(&t, &name).trim_end());
            Ok((common, out))
        }
    }
}

fn emit(common: &Common, out: &Out) -> CliResult<()> {
    let mut text = out.lines.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    match &common.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli.command).and_then(|(common, out)| emit(&common, &out).map(|_| out.status())) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Core(Error::BoundExceeded(_)) => 2,
                _ => 3,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_the_worst_verdict() {
        let mut out = Out::new(Format::Text);
        assert_eq!(out.status(), 0);
        out.report(Report::new("a").finish());
        assert_eq!(out.status(), 0);
        let mut r = Report::new("b");
        r.inconclusive_case();
        out.report(r.finish());
        assert_eq!(out.status(), 2);
        let mut r = Report::new("c");
        r.fail("x");
        out.report(r.finish());
        assert_eq!(out.status(), 1);
    }
}
