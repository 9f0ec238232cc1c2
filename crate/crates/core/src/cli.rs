//! Command-line surface.
//!
//! Exit codes: 0 success or PASS, 1 FAIL, 2 usage error or unknown id,
//! 3 insufficient order or window.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use crate::error::Error;
use crate::rational::{fmt_rational, int, parse_rational, ExactRational};
use crate::series::PuiseuxSeries;
use crate::verify::{self, check_record, discover, Expr, IdentityRecord, Status, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INSUFFICIENT: i32 = 3;

pub const DEFAULT_ORDER: i64 = 50;

#[derive(Parser, Debug)]
#[command(name = "qlab", version, about = "Exact q-series identities: expand, verify, discover")]
struct Cli {
    #[command(subcommand)]
    verb: VerbArgs,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Truncation order as an exact rational `p` or `p/q`.
    #[arg(long, value_parser = parse_order, allow_hyphen_values = true)]
    order: Option<ExactRational>,
    /// Machine-readable JSON output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum VerbArgs {
    /// Expand a named series or expression.
    Expand {
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check one registry identity.
    Verify {
        id: String,
        #[command(flatten)]
        common: Common,
        /// Registry file with `id | order | lhs | rhs` lines.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Check every registry identity.
    #[command(name = "verify-all")]
    VerifyAll {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Find exact linear relations among series.
    Discover {
        #[arg(required = true, num_args = 1..)]
        targets: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_order(s: &str) -> Result<ExactRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Expand,
    Verify,
    VerifyAll,
    Discover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub verb: Verb,
    pub targets: Vec<String>,
    pub order: ExactRational,
    pub output: OutputMode,
    pub registry: Option<PathBuf>,
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let (verb, targets, common, registry) = match cli.verb {
        VerbArgs::Expand { target, common } => (Verb::Expand, vec![target], common, None),
        VerbArgs::Verify { id, common, registry } => (Verb::Verify, vec![id], common, registry),
        VerbArgs::VerifyAll { common, registry } => (Verb::VerifyAll, vec![], common, registry),
        VerbArgs::Discover { targets, common } => (Verb::Discover, targets, common, None),
    };
    Ok(Command {
        verb,
        targets,
        order: common.order.unwrap_or_else(|| int(DEFAULT_ORDER)),
        output: if common.json { OutputMode::Machine } else { OutputMode::Text },
        registry,
    })
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InsufficientOrder { .. } | Error::InsufficientWindow(_) | Error::InsufficientRows { .. } => {
            EXIT_INSUFFICIENT
        }
        _ => EXIT_USAGE,
    }
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAIL,
        Status::InsufficientOrder => EXIT_INSUFFICIENT,
    }
}

fn load_records(cmd: &Command) -> Result<Vec<IdentityRecord>, Error> {
    match &cmd.registry {
        None => Ok(verify::registry()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            verify::parse_registry(&text)
        }
    }
}

fn series_json(target: &str, f: &PuiseuxSeries) -> serde_json::Value {
    let terms: Vec<_> = f.terms().map(|(e, c)| json!([fmt_rational(&e), fmt_rational(c)])).collect();
    json!({
        "target": target,
        "order": fmt_rational(f.order()),
        "denominator": f.grading_denominator(),
        "terms": terms,
    })
}

fn emit_report(out: &mut dyn Write, rep: &VerificationReport, mode: OutputMode) -> std::io::Result<()> {
    match mode {
        OutputMode::Text => writeln!(out, "{}", rep.to_text()),
        OutputMode::Machine => writeln!(out, "{}", rep.to_json()),
    }
}

/// Runs `cmd`, writing results to `out` and diagnostics to `err`; returns the
/// exit code.
pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_verb(cmd, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run_verb(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let io = |e: std::io::Error| Error::Parse(format!("write failed: {e}"));
    match cmd.verb {
        Verb::Expand => {
            let target = &cmd.targets[0];
            let f = target.parse::<Expr>()?.eval_series(&cmd.order)?;
            match cmd.output {
                OutputMode::Text => write!(out, "{}", f.to_text()).map_err(io)?,
                OutputMode::Machine => writeln!(out, "{}", series_json(target, &f)).map_err(io)?,
            }
            if f.order() < &cmd.order {
                writeln!(err, "warning: only certified below q^{}", fmt_rational(f.order())).map_err(io)?;
                return Ok(EXIT_INSUFFICIENT);
            }
            Ok(EXIT_OK)
        }
        Verb::Verify => {
            let records = load_records(cmd)?;
            let rec = verify::find(&records, &cmd.targets[0])?;
            let rep = check_record(rec, &cmd.order)?;
            emit_report(out, &rep, cmd.output).map_err(io)?;
            Ok(status_code(rep.status))
        }
        Verb::VerifyAll => {
            let records = load_records(cmd)?;
            // every record is evaluated; output keeps registry order
            let results: Vec<_> = records.par_iter().map(|r| check_record(r, &cmd.order)).collect();
            let (mut fail, mut error, mut short) = (false, false, false);
            for (rec, res) in records.iter().zip(results) {
                match res {
                    Ok(rep) => {
                        fail |= rep.status == Status::Fail;
                        short |= rep.status == Status::InsufficientOrder;
                        emit_report(out, &rep, cmd.output).map_err(io)?;
                    }
                    Err(e) => {
                        error = true;
                        writeln!(err, "{}: error: {e}", rec.id).map_err(io)?;
                    }
                }
            }
            Ok(if fail {
                EXIT_FAIL
            } else if error {
                EXIT_USAGE
            } else if short {
                EXIT_INSUFFICIENT
            } else {
                EXIT_OK
            })
        }
        Verb::Discover => {
            let series = cmd
                .targets
                .iter()
                .map(|t| t.parse::<Expr>()?.eval_series(&cmd.order))
                .collect::<Result<Vec<_>, _>>()?;
            let relations = discover(&series, &cmd.order)?;
            match cmd.output {
                OutputMode::Text => {
                    if relations.is_empty() {
                        writeln!(out, "no relations mod q^{}", fmt_rational(&cmd.order)).map_err(io)?;
                    }
                    for r in &relations {
                        writeln!(out, "{r}").map_err(io)?;
                    }
                }
                OutputMode::Machine => {
                    let rels: Vec<Vec<String>> = relations
                        .iter()
                        .map(|r| r.coefficients.iter().map(fmt_rational).collect())
                        .collect();
                    let v = json!({
                        "targets": cmd.targets,
                        "order": fmt_rational(&cmd.order),
                        "relations": rels,
                    });
                    writeln!(out, "{v}").map_err(io)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parses `argv`, executes, and returns the exit code. Usage errors print the
/// clap diagnostic to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cmd = match parse_args(argv) {
        Ok(cmd) => cmd,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute(&cmd, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn args(s: &str) -> Vec<&str> {
        std::iter::once("qlab").chain(s.split_whitespace()).collect()
    }

    fn run_capture(s: &str) -> (i32, String, String) {
        let cmd = parse_args(args(s)).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = execute(&cmd, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parses_commands() {
        let c = parse_args(args("verify MIN-1 --order 100")).unwrap();
        assert_eq!(c.verb, Verb::Verify);
        assert_eq!(c.targets, vec!["MIN-1"]);
        assert_eq!(c.order, int(100));
        assert_eq!(c.output, OutputMode::Text);
        let c = parse_args(args("expand chi:5,6,1,2 --order 10 --json")).unwrap();
        assert_eq!(c.verb, Verb::Expand);
        assert_eq!(c.output, OutputMode::Machine);
        let c = parse_args(args("verify-all")).unwrap();
        assert_eq!(c.order, int(50));
        let c = parse_args(args("expand phi --order -7/2")).unwrap();
        assert_eq!(c.order, rat(-7, 2));
        let c = parse_args(args("discover phi rr:1")).unwrap();
        assert_eq!(c.targets.len(), 2);
    }

    #[test]
    fn rejects_bad_usage() {
        for s in ["verify --order abc", "verify MIN-1 --order abc", "verify MIN-1 --bogus", "frobnicate", "discover", "expand"] {
            let e = parse_args(args(s)).unwrap_err();
            assert!(e.use_stderr(), "{s}");
        }
        assert_eq!(run(args("verify --order abc")), EXIT_USAGE);
        assert!(parse_args(args("expand phi --order 11/60+5")).is_err());
    }

    #[test]
    fn expand_output() {
        let (code, out, _) = run_capture("expand rr:1 --order 311/60");
        assert_eq!(code, EXIT_OK);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "D=60 O=311/60");
        assert_eq!(lines[1], "11/60 1/1");
        assert_eq!(lines.len(), 5);
        let f = PuiseuxSeries::parse_text(&out).unwrap();
        assert_eq!(f.order(), &rat(311, 60));
        let (code, out, _) = run_capture("expand phi --order 3 --json");
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"][1][0], "1/1");
        assert_eq!(v["terms"][1][1], "-1/1");
    }

    #[test]
    fn verify_exit_codes() {
        let (code, out, _) = run_capture("verify MIN-1 --order 30");
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.trim(), "MIN-1 PASS order=30/1");
        let (code, _, err) = run_capture("verify NOPE");
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("NOPE"));
        let (code, _, _) = run_capture("expand nonsense");
        assert_eq!(code, EXIT_USAGE);
        let (code, _, _) = run_capture("discover phi --order 3");
        assert_eq!(code, EXIT_INSUFFICIENT);
    }

    #[test]
    fn registry_override_and_failures() {
        let dir = std::env::temp_dir().join(format!("qlab-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("reg.txt");
        std::fs::write(&path, "GOOD | 20 | phi | inv(inv(phi))\nBAD | 20 | phi | phi+mono(1,7)\nSHORT | 20 | mono(1,3/2)*spec(qpl(2),5/2,-3/2) | mono(1,3/2)*spec(qpr(2),5/2,-3/2)\n").unwrap();
        let p = path.display();
        let (code, out, _) = run_capture(&format!("verify GOOD --registry {p} --order 20"));
        assert_eq!((code, out.trim()), (EXIT_OK, "GOOD PASS order=20/1"));
        let (code, out, _) = run_capture(&format!("verify BAD --registry {p}"));
        assert_eq!(code, EXIT_FAIL);
        assert!(out.contains("exponent=7/1 lhs=1/1 rhs=2/1"), "{out}");
        let (code, _, _) = run_capture(&format!("verify SHORT --registry {p}"));
        assert_eq!(code, EXIT_INSUFFICIENT);
        let (code, out, _) = run_capture(&format!("verify-all --registry {p} --json"));
        assert_eq!(code, EXIT_FAIL);
        let ids: Vec<String> = out
            .lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["id"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(ids, vec!["GOOD", "BAD", "SHORT"]);
        let (code, _, _) = run_capture("verify GOOD --registry /nonexistent/reg.txt");
        assert_eq!(code, EXIT_USAGE);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn discover_output() {
        let (code, out, _) = run_capture("discover chi:5,6,1,2 chi:5,6,1,4 chi:2,5,1,1@q^1/2 --order 30");
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.trim(), "(1/1, 1/1, -1/1) mod q^30/1");
        let (_, out, _) = run_capture("discover chi:5,6,1,1 chi:5,6,1,2 --order 20");
        assert_eq!(out.trim(), "no relations mod q^20/1");
    }
}
