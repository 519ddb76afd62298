//! Command-line frontend: problem documents, dispatch and exit codes.
//!
//! Exit codes are [`EXIT_OK`] on success or acceptance, [`EXIT_REJECT`] when
//! the verifier rejects or an algorithm reports a diagnostic, and
//! [`EXIT_INPUT`] for anything wrong with the input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use valfactor_core::json::{
    self, cert_to_json, expansion_to_json, monomial_form_to_json, object, parse_cert,
    parse_document, parse_monomap, parse_polynomial, parse_weights, verdict_to_json, JsonError,
    JsonResult,
};
use valfactor_core::{
    monomialize_capped, perron_accumulate, verify_zigzag, zigzag_factor_capped, Cap, Error,
    MonoMap, Polynomial, Value, Verdict, ZigzagCert, ZIGZAG_DEFAULT_CAP,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Which document an input file holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Factor,
    Monomialize,
    Perron { steps: usize },
    Verify,
}

/// A parsed input document.
#[derive(Clone, Debug)]
pub enum Problem {
    Factor { map: MonoMap, weights: Vec<Value> },
    Monomialize { poly: Polynomial, weights: Vec<Value> },
    Perron { weights: Vec<Value>, steps: usize },
    Verify(ZigzagCert),
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub trace: bool,
    pub cap: Option<usize>,
}

/// Exit code plus everything destined for the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Strict parse of `bytes` as a document of the given kind.
///
/// Factor problems are `{"map", "weights"}`, monomialization problems
/// `{"poly", "weights"}`, Perron inputs a bare weight list and verify
/// inputs a certificate.
pub fn parse_problem(kind: Kind, bytes: &[u8]) -> JsonResult<Problem> {
    let doc = parse_document(bytes)?;
    match kind {
        Kind::Factor => {
            let obj = object(&doc, "", &["map", "weights"])?;
            let map = parse_monomap(&obj["map"], "map")?;
            let weights = parse_weights(&obj["weights"], "weights")?;
            check_count(weights.len(), map.n(), "weights")?;
            Ok(Problem::Factor { map, weights })
        }
        Kind::Monomialize => {
            let obj = object(&doc, "", &["poly", "weights"])?;
            let poly = parse_polynomial(&obj["poly"], "poly")?;
            let weights = parse_weights(&obj["weights"], "weights")?;
            check_count(weights.len(), poly.n(), "weights")?;
            Ok(Problem::Monomialize { poly, weights })
        }
        Kind::Perron { steps } => Ok(Problem::Perron {
            weights: parse_weights(&doc, "weights")?,
            steps,
        }),
        Kind::Verify => Ok(Problem::Verify(parse_cert(&doc, "")?)),
    }
}

fn check_count(found: usize, expected: usize, path: &str) -> JsonResult<()> {
    if found == expected {
        Ok(())
    } else {
        Err(JsonError {
            path: path.to_string(),
            message: format!("expected {expected} weights, found {found}"),
        })
    }
}

/// Runs a parsed problem.
pub fn run(problem: &Problem, opts: &Options) -> Outcome {
    let mut trace = String::new();
    let result = match problem {
        Problem::Factor { map, weights } => {
            let cap = opts.cap.map_or(ZIGZAG_DEFAULT_CAP, Cap);
            zigzag_factor_capped(map, weights, cap).map(|cert| {
                if opts.trace {
                    trace_cert(&mut trace, &cert);
                }
                (EXIT_OK, cert_to_json(&cert))
            })
        }
        Problem::Monomialize { poly, weights } => {
            let cap = opts.cap.map_or(Cap::DEFAULT, Cap);
            monomialize_capped(poly, weights, cap).map(|form| {
                if opts.trace {
                    let _ = writeln!(trace, "{} Perron steps", form.transform.h);
                    let _ = writeln!(trace, "unit {}", form.unit);
                }
                (EXIT_OK, monomial_form_to_json(&form))
            })
        }
        Problem::Perron { weights, steps } => perron_accumulate(weights, *steps).map(|run| {
            if opts.trace {
                for (h, d) in run.digits().iter().enumerate() {
                    let d: Vec<String> = d.iter().map(ToString::to_string).collect();
                    let _ = writeln!(trace, "step {}: digits {}", h + 1, d.join(" "));
                }
            }
            (EXIT_OK, expansion_to_json(&run))
        }),
        Problem::Verify(cert) => {
            let verdict = verify_zigzag(cert);
            if opts.trace {
                let _ = writeln!(trace, "{verdict}");
            }
            let code = if verdict == Verdict::Accept { EXIT_OK } else { EXIT_REJECT };
            Ok((code, verdict_to_json(&verdict)))
        }
    };
    match result {
        Ok((code, doc)) => Outcome {
            code,
            stdout: json::to_pretty_string(&doc),
            stderr: trace,
        },
        Err(e) => error_outcome(&e, trace),
    }
}

fn error_outcome(e: &Error, mut stderr: String) -> Outcome {
    let code = if e.is_diagnostic() { EXIT_REJECT } else { EXIT_INPUT };
    let _ = writeln!(stderr, "error: {e}");
    Outcome {
        code,
        stdout: String::new(),
        stderr,
    }
}

fn trace_cert(out: &mut String, cert: &ZigzagCert) {
    let _ = writeln!(out, "{} upper nodes", cert.upper_count());
    for (k, a) in cert.arrows.iter().enumerate() {
        let _ = writeln!(
            out,
            "node {}: {} moves from the left, {} from the right",
            2 * k + 1,
            a.left.len(),
            a.right.len()
        );
    }
}

/// Parses and runs one input document.
pub fn run_bytes(kind: Kind, bytes: &[u8], opts: &Options) -> Outcome {
    match parse_problem(kind, bytes) {
        Ok(problem) => run(&problem, opts),
        Err(e) => Outcome::input_error(e),
    }
}

#[derive(Parser, Debug)]
#[command(name = "valfactor", version, about = "Zigzag factorization of monomial maps along valuations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor a monomial map into a certified zigzag of blowups.
    Factor {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print a summary of the computation to standard error.
        #[arg(long)]
        trace: bool,
        /// Iteration cap for every loop.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Check a zigzag certificate.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
    },
    /// Monomialize a polynomial by Perron transforms.
    Monomialize {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Accumulate Perron steps for a weight vector.
    Perron {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: bool,
    },
}

/// Full command-line run: argument parsing, file input and output.
pub fn execute<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let (kind, input, output, opts) = match cli.command {
        Command::Factor { input, output, trace, cap } => {
            (Kind::Factor, input, output, Options { trace, cap })
        }
        Command::Verify { input, output, trace } => {
            (Kind::Verify, input, output, Options { trace, cap: None })
        }
        Command::Monomialize { input, output, trace, cap } => {
            (Kind::Monomialize, input, output, Options { trace, cap })
        }
        Command::Perron { weights, steps, output, trace } => {
            (Kind::Perron { steps }, weights, output, Options { trace, cap: None })
        }
    };
    let bytes = match std::fs::read(&input) {
        Ok(b) => b,
        Err(e) => return Outcome::input_error(format!("cannot read {}: {e}", input.display())),
    };
    let mut outcome = run_bytes(kind, &bytes, &opts);
    if let Some(path) = output {
        if let Err(e) = write_output(&path, &outcome.stdout) {
            return Outcome::input_error(format!("cannot write {}: {e}", path.display()));
        }
        outcome.stdout.clear();
    }
    outcome
}

fn write_output(path: &Path, text: &str) -> std::io::Result<()> {
    std::fs::write(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value as Json;

    #[test]
    fn identity_factors_to_an_empty_zigzag() {
        let input = br#"{"map": {"n": 2, "rows": [[1, 0], [0, 1]]},
            "weights": {"basis": [1, 2], "values": [["1/1", "0/1"], ["0/1", "1/1"]]}}"#;
        let out = run_bytes(Kind::Factor, input, &Options::default());
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
        let doc: Json = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(doc["arrows"], Json::Array(vec![]));
        assert_eq!(doc["nodes"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn weight_count_is_checked() {
        let input = br#"{"map": {"n": 2, "rows": [[1, 0], [0, 1]]},
            "weights": {"basis": [1], "values": [["1/1"]]}}"#;
        let e = parse_problem(Kind::Factor, input).unwrap_err();
        assert_eq!(e.path, "weights");
    }

    #[test]
    fn bad_radicand_is_an_input_error() {
        let input = br#"{"map": {"n": 2, "rows": [[1, 0], [0, 1]]},
            "weights": {"basis": [1, 4], "values": [["1/1", "0/1"], ["0/1", "1/1"]]}}"#;
        let out = run_bytes(Kind::Factor, input, &Options::default());
        assert_eq!(out.code, EXIT_INPUT);
        assert_eq!(out.stderr, "error: radicand not squarefree at weights.basis[1]\n");
    }

    #[test]
    fn diagnostics_exit_one() {
        let input = br#"{"map": {"n": 2, "rows": [[5, 8], [3, 5]]},
            "weights": {"basis": [1, 2], "values": [["1/1", "0/1"], ["0/1", "1/1"]]}}"#;
        let out = run_bytes(Kind::Factor, input, &Options { trace: false, cap: Some(1) });
        assert_eq!(out.code, EXIT_REJECT, "{}", out.stderr);
        assert!(out.stderr.contains("cap exceeded"));
        let out = run_bytes(Kind::Factor, input, &Options::default());
        assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    }

    #[test]
    fn unimodularity_is_an_input_error() {
        let input = br#"{"map": {"n": 2, "rows": [[2, 0], [0, 1]]},
            "weights": {"basis": [1, 2], "values": [["1/1", "0/1"], ["0/1", "1/1"]]}}"#;
        assert_eq!(run_bytes(Kind::Factor, input, &Options::default()).code, EXIT_INPUT);
    }

    #[test]
    fn arguments() {
        let out = execute(["valfactor", "frobnicate"]);
        assert_eq!(out.code, EXIT_INPUT);
        let out = execute(["valfactor", "--help"]);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("factor"));
        let out = execute(["valfactor", "verify", "-i", "/nonexistent/cert.json"]);
        assert_eq!(out.code, EXIT_INPUT);
        assert!(out.stderr.starts_with("error: cannot read"));
    }
}
