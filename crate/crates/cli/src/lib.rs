//! Command-line surface over `tendency-core`.
//!
//! Exit codes: 0 success, 1 an operation or directive failed, 2 usage,
//! syntax or validation error.

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use tendency_core::catalog::standard_catalog;
use tendency_core::intensity::compare_conditions_with;
use tendency_core::regularity::{parse_observation_log, test_regularity, Regularity};
use tendency_core::scenario::{
    load_scenario, run_scenario, Directive, DirectiveKind, RunConfig, RunOutput, Scenario,
};
use tendency_core::{parse_formula, ActionName, Enumerator};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tendency", version, about = "Emotions as action tendencies")]
struct Cli {
    /// Directory for report and trace files
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Step guard for satiation runs and wish waits
    #[arg(long, global = true, value_name = "N", default_value_t = 100,
          value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,
    /// Maximum number of atoms enumerated per truth table (at most 30)
    #[arg(long, global = true, value_name = "N", default_value_t = 20)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare the intensity of two condition formulas
    Compare { left: String, right: String },
    /// Check the order laws over every desire of a scenario
    Laws { scenario: PathBuf },
    /// Run a scenario's directives
    #[command(visible_alias = "run")]
    Simulate { scenario: PathBuf },
    /// Run every wish of a scenario and compare them pairwise
    Wish { scenario: PathBuf },
    /// Test the regularity `whenever TRIGGER then OUTCOME` against a log
    Observe {
        log: PathBuf,
        trigger: String,
        outcome: String,
    },
    /// Print the built-in emotion dictionary
    Catalog {
        /// Tab-separated output
        #[arg(long)]
        tsv: bool,
    },
    /// Interactive loop over the same commands
    Repl,
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    enumerator: Enumerator,
    config: RunConfig,
    out_dir: Option<PathBuf>,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdin = std::io::stdin();
    dispatch_with_input(argv, &mut stdin.lock(), out, err)
}

/// Like [`dispatch`], with the REPL reading from `input`.
pub fn dispatch_with_input<I, T>(
    argv: I,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let enumerator = match Enumerator::new(cli.cap) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(err, "error: --cap: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx {
        out,
        err,
        config: RunConfig {
            enumerator,
            max_steps: cli.max_steps,
        },
        enumerator,
        out_dir: cli.out,
    };
    let code = match cli.command {
        Command::Repl => repl(&mut ctx, input),
        other => run_command(&mut ctx, other),
    };
    let _ = ctx.out.flush();
    code
}

fn run_command(ctx: &mut Ctx<'_>, command: Command) -> i32 {
    match command {
        Command::Compare { left, right } => compare(ctx, &left, &right),
        Command::Laws { scenario } => with_scenario(ctx, &scenario, |s| {
            s.directives = vec![Directive {
                line: 0,
                text: "laws".into(),
                kind: DirectiveKind::Laws(Vec::new()),
            }];
        }),
        Command::Simulate { scenario } => with_scenario(ctx, &scenario, |_| {}),
        Command::Wish { scenario } => with_scenario(ctx, &scenario, wish_directives),
        Command::Observe {
            log,
            trigger,
            outcome,
        } => observe(ctx, &log, &trigger, &outcome),
        Command::Catalog { tsv } => catalog(ctx, tsv),
        Command::Repl => {
            let _ = writeln!(ctx.err, "error: already in the repl");
            EXIT_USAGE
        }
    }
}

fn compare(ctx: &mut Ctx<'_>, left: &str, right: &str) -> i32 {
    let mut parsed = Vec::new();
    for (side, text) in [("left", left), ("right", right)] {
        match parse_formula(text) {
            Ok(f) => parsed.push(f),
            Err(e) => {
                let _ = writeln!(ctx.err, "error: {side} formula `{text}`: {e}");
                return EXIT_USAGE;
            }
        }
    }
    match compare_conditions_with(&ctx.enumerator, &parsed[0], &parsed[1]) {
        Ok(rel) => {
            let _ = writeln!(ctx.out, "{}", rel.render("left", "right"));
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_FAILED
        }
    }
}

fn wish_directives(s: &mut Scenario) {
    let mut directives = Vec::new();
    let mut push = |text: String, kind| {
        directives.push(Directive {
            line: 0,
            text,
            kind,
        });
    };
    for w in &s.wishes {
        push(
            format!("wait {}", w.id),
            DirectiveKind::Wait {
                wish: w.id.clone(),
                name: w.id.clone(),
            },
        );
    }
    for (i, a) in s.wishes.iter().enumerate() {
        for b in &s.wishes[i + 1..] {
            push(
                format!("compare_wishes {} {}", a.id, b.id),
                DirectiveKind::CompareWishes(a.id.clone(), b.id.clone()),
            );
        }
    }
    s.directives = directives;
}

fn with_scenario(ctx: &mut Ctx<'_>, path: &Path, adjust: impl FnOnce(&mut Scenario)) -> i32 {
    let mut scenario = match load_scenario(path, &ctx.enumerator) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    adjust(&mut scenario);
    let output = run_scenario(&scenario, &ctx.config);
    emit(ctx, &output)
}

fn emit(ctx: &mut Ctx<'_>, output: &RunOutput) -> i32 {
    let _ = write!(ctx.out, "{}", output.report);
    if let Some(dir) = &ctx.out_dir {
        if let Err(e) = output.write_to(dir) {
            let _ = writeln!(ctx.err, "error: writing {}: {e}", dir.display());
            return EXIT_FAILED;
        }
    }
    output.exit_code()
}

fn observe(ctx: &mut Ctx<'_>, log: &Path, trigger: &str, outcome: &str) -> i32 {
    let trigger = match parse_formula(trigger) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: trigger `{trigger}`: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match ActionName::new(outcome) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: outcome: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match std::fs::read_to_string(log) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: cannot read {}: {e}", log.display());
            return EXIT_USAGE;
        }
    };
    let obs = match parse_observation_log(&text) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {}: {e}", log.display());
            return EXIT_USAGE;
        }
    };
    match test_regularity(&Regularity::new(trigger, outcome), &obs) {
        Ok(r) => {
            let _ = writeln!(ctx.out, "{r}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_FAILED
        }
    }
}

fn catalog(ctx: &mut Ctx<'_>, tsv: bool) -> i32 {
    for entry in standard_catalog() {
        let line = if tsv {
            entry.export_line()
        } else {
            let rule = match (entry.condition(), entry.quality()) {
                (Some(c), Some(q)) => format!("{c} => {q}"),
                (None, Some(q)) => format!("(form over {q})"),
                _ => "(form)".to_owned(),
            };
            let mark = if entry.lossy { "  [approximate]" } else { "" };
            format!("{:<11} {:<36} {}{mark}", entry.name, rule, entry.gloss)
        };
        let _ = writeln!(ctx.out, "{line}");
    }
    EXIT_OK
}

const REPL_HELP: &str = "\
commands:
  compare <f1> <f2>         quote formulas that contain spaces
  laws <scenario>
  simulate <scenario>
  wish <scenario>
  observe <log> <trigger> <outcome>
  catalog [--tsv]
  help
  quit
";

/// Reads one command per line until end of input or `quit`. Returns the
/// exit code of the last command.
fn repl(ctx: &mut Ctx<'_>, input: &mut dyn BufRead) -> i32 {
    let mut last = EXIT_OK;
    let mut line = String::new();
    loop {
        let _ = write!(ctx.out, "> ");
        let _ = ctx.out.flush();
        line.clear();
        match input.read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                let _ = writeln!(ctx.err, "error: {e}");
                return EXIT_FAILED;
            }
        }
        let Some(words) = shlex::split(line.trim()) else {
            let _ = writeln!(ctx.err, "error: unbalanced quotes");
            last = EXIT_USAGE;
            continue;
        };
        match words.first().map(String::as_str) {
            None => continue,
            Some("quit" | "exit") => break,
            Some("help") => {
                let _ = write!(ctx.out, "{REPL_HELP}");
                continue;
            }
            _ => {}
        }
        let argv = std::iter::once("tendency".to_owned()).chain(words);
        last = match Cli::try_parse_from(argv) {
            Ok(cli) => run_command(ctx, cli.command),
            Err(e) => {
                let _ = write!(ctx.err, "{}", e.render());
                EXIT_USAGE
            }
        };
    }
    let _ = writeln!(ctx.out);
    last
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("tendency").chain(args.iter().copied());
        let code = dispatch_with_input(argv, &mut std::io::empty(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn compare_prints_the_relation() {
        let (code, out, _) = run(&["compare", "C1", "C1 & C2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "left > right (witness: C1=1, C2=0)\n");
        let (_, out, _) = run(&["compare", "C1", "C1 | C2"]);
        assert_eq!(out, "left < right\n");
        let (_, out, _) = run(&["compare", "a", "b"]);
        assert_eq!(out, "left || right (witness: a=1, b=0)\n");
    }

    #[test]
    fn syntax_error_is_usage() {
        let (code, out, err) = run(&["compare", "C1 &", "C2"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("left formula"), "{err}");
    }

    #[test]
    fn cap_flag() {
        let (code, _, err) = run(&["--cap", "1", "compare", "a", "a & b"]);
        assert_eq!(code, 1);
        assert!(err.contains("error"));
        let (code, _, _) = run(&["--cap", "31", "compare", "a", "b"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&[]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["compare", "a"]).0, 2);
        assert_eq!(run(&["--max-steps", "0", "catalog"]).0, 2);
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("compare"));
    }

    #[test]
    fn catalog_lists_glosses() {
        let (code, out, _) = run(&["catalog"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 13);
        assert!(out.contains("feeling thirst: desiring to drink"));
        let (_, tsv, _) = run(&["catalog", "--tsv"]);
        assert!(tsv
            .lines()
            .any(|l| l == "thirst\tdrink\twater_at_hand\tfeeling thirst: desiring to drink"));
    }

    #[test]
    fn repl_runs_the_same_verbs() {
        let mut input = "help\ncompare C1 \"C1 & C2\"\n\ncompare \"a &\" b\nquit\n".as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = dispatch_with_input(["tendency", "repl"], &mut input, &mut out, &mut err);
        let out = String::from_utf8(out).unwrap();
        assert_eq!(code, 2);
        assert!(out.contains("commands:"));
        assert!(out.contains("left > right (witness: C1=1, C2=0)"));
        assert!(!String::from_utf8(err).unwrap().is_empty());
    }

    #[test]
    fn repl_ends_at_eof() {
        let mut input = "compare a a\n".as_bytes();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = dispatch_with_input(["tendency", "repl"], &mut input, &mut out, &mut err);
        assert_eq!(code, 0);
        assert!(String::from_utf8(out).unwrap().contains("left = right"));
    }
}
