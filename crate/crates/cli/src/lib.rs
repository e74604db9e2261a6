//! Batch front end for the `morsebott` library.
//!
//! Exit codes: `0` when the command succeeded and every checked identity
//! holds, `1` for usage and parse errors, `2` when the input is
//! mathematically invalid (validation failure, not Morse-Bott, or a violated
//! identity).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use morsebott::analysis::{kernel_inequality_check, morse_bott_inequalities};
use morsebott::conley::conley_theorem_check;
use morsebott::flow::{closed_orbits, to_dot, vector_field};
use morsebott::homology::{betti, chain_complex, Coefficients};
use morsebott::io::{
    collections_doc, conley_doc, flow_doc, full_report, homology_doc, inequalities_doc,
    morse_check_doc, parse_arrows, parse_complex, parse_function, parse_value, perturb_doc,
    validation_doc, IoError, ReportDocument,
};
use morsebott::morse::{
    check_discrete_morse, check_morse_bott, collections, decompose, owners, Epsilon, MorseError,
};
use morsebott::{Complex, DiscreteFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mbt", version, about = "Discrete Morse-Bott analysis of regular CW complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Emit a JSON document instead of text
    #[arg(long)]
    json: bool,
    /// Skip the chain-condition and incidence checks on load
    #[arg(long)]
    no_validate: bool,
}

#[derive(Args, Debug)]
struct Inputs {
    /// Complex file (`cell`/`face` or `simplex` lines)
    complex: PathBuf,
    /// Function file (`value <cell> <num>[/<den>]` lines)
    function: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check dimensions, incidences and the chain condition
    Validate {
        complex: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check the Morse-Bott condition and list violations
    MorseCheck {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        out: Output,
    },
    /// Collections, noncritical cells and reduced collections
    Collections {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        out: Output,
    },
    /// Betti numbers, torsion and Poincaré polynomial of the complex
    Homology {
        complex: PathBuf,
        #[arg(long, default_value = "z")]
        coeff: Coefficients,
        #[command(flatten)]
        out: Output,
    },
    /// Vector field and closed orbits
    Flow {
        complex: PathBuf,
        /// Function inducing the field; also used to classify orbits by collection
        function: Option<PathBuf>,
        /// Arrow file (`arrow <source> <target>` lines) replacing the induced field
        #[arg(long)]
        arrows: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        max_orbits: usize,
        /// Print the field as a Graphviz digraph
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        out: Output,
    },
    /// The Morse-Bott inequalities and kernel-sum checks
    Inequalities {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "z")]
        coeff: Coefficients,
        #[command(flatten)]
        out: Output,
    },
    /// Index pairs, Conley indices and the Conley-theoretic identity
    Conley {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value = "z")]
        coeff: Coefficients,
        #[command(flatten)]
        out: Output,
    },
    /// The perturbation f − ε/(dim + 1) and its critical cells
    Perturb {
        #[command(flatten)]
        inputs: Inputs,
        /// `auto` or a positive rational `p/q`
        #[arg(long, default_value = "auto", value_parser = parse_epsilon)]
        epsilon: Epsilon,
        #[command(flatten)]
        out: Output,
    },
    /// Every check over both Z and Z/2
    Report {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 1000)]
        max_orbits: usize,
        #[command(flatten)]
        out: Output,
    },
}

fn parse_epsilon(s: &str) -> Result<Epsilon, String> {
    if s == "auto" {
        return Ok(Epsilon::Auto);
    }
    parse_value(s).map(Epsilon::Value)
}

/// Failure carried to the exit code, with a message for standard error.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path, validate: bool) -> Result<Complex, Failure> {
    parse_complex(&read(path)?, validate).map_err(|e| {
        let code = if matches!(e, IoError::Invalid(_)) { EXIT_INVALID } else { EXIT_USAGE };
        let mut message = format!("{}: {e}", path.display());
        if let IoError::Invalid(report) = &e {
            for v in &report.violations {
                message.push_str(&format!("\n  {}: {}", v.rule, v.message));
            }
        }
        Failure { code, message }
    })
}

fn load_function(path: &Path, complex: &Complex) -> Result<DiscreteFunction, Failure> {
    parse_function(&read(path)?, complex).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(inputs: &Inputs, out: &Output) -> Result<(Complex, DiscreteFunction), Failure> {
    let complex = load_complex(&inputs.complex, !out.no_validate)?;
    let f = load_function(&inputs.function, &complex)?;
    Ok((complex, f))
}

/// What a command produced: a document, or raw text such as DOT output.
enum Rendered {
    Doc(Box<ReportDocument>),
    Text(String),
}

fn morse_doc(complex: &Complex, f: &DiscreteFunction) -> ReportDocument {
    let verdict = check_morse_bott(complex, f);
    ReportDocument::MorseCheck(morse_check_doc(complex, &verdict, check_discrete_morse(complex, f).ok))
}

fn execute(command: &Command) -> Result<(Rendered, bool), Failure> {
    let doc = |d: ReportDocument| {
        let ok = d.ok();
        Ok((Rendered::Doc(Box::new(d)), ok))
    };
    match command {
        Command::Validate { complex, .. } => {
            let k = load_complex(complex, false)?;
            doc(ReportDocument::Validation(validation_doc(&k, &k.validate())))
        }
        Command::MorseCheck { inputs, out } => {
            let (k, f) = load(inputs, out)?;
            doc(morse_doc(&k, &f))
        }
        Command::Collections { inputs, out } => {
            let (k, f) = load(inputs, out)?;
            match decompose(&k, &f) {
                Ok(dec) => doc(ReportDocument::Collections(collections_doc(&k, &dec))),
                Err(MorseError::NotMorseBott(_)) => doc(morse_doc(&k, &f)),
                Err(e) => Err(usage(e.to_string())),
            }
        }
        Command::Homology { complex, coeff, out } => {
            let k = load_complex(complex, !out.no_validate)?;
            let cc = chain_complex(&k, *coeff).map_err(|e| Failure {
                code: EXIT_INVALID,
                message: e.to_string(),
            })?;
            doc(ReportDocument::Homology(homology_doc(&betti(&cc))))
        }
        Command::Flow {
            complex,
            function,
            arrows,
            max_orbits,
            dot,
            out,
        } => {
            let k = load_complex(complex, !out.no_validate)?;
            let f = function.as_deref().map(|p| load_function(p, &k)).transpose()?;
            let field = match (arrows, &f) {
                (Some(path), _) => parse_arrows(&read(path)?, &k).map_err(|e| usage(format!("{}: {e}", path.display())))?,
                (None, Some(f)) => vector_field(&k, f),
                (None, None) => return Err(usage("flow needs a function file or --arrows")),
            };
            if *dot {
                return Ok((Rendered::Text(to_dot(&field, &k)), true));
            }
            let owner = f.as_ref().map(|f| owners(&k, &collections(&k, f)));
            let search = closed_orbits(&field, &k, *max_orbits);
            doc(ReportDocument::Flow(flow_doc(&k, &field, &search, owner.as_deref())))
        }
        Command::Inequalities { inputs, coeff, out } => {
            let (k, f) = load(inputs, out)?;
            let report = match morse_bott_inequalities(&k, &f, *coeff) {
                Ok(r) => r,
                Err(morsebott::analysis::AnalysisError::Morse(MorseError::NotMorseBott(_))) => {
                    return doc(morse_doc(&k, &f))
                }
                Err(e) => return Err(Failure { code: EXIT_INVALID, message: e.to_string() }),
            };
            let kernels = kernel_inequality_check(&k, &f, *coeff)
                .map_err(|e| Failure { code: EXIT_INVALID, message: e.to_string() })?;
            doc(ReportDocument::Inequalities(inequalities_doc(&k, &report, &kernels)))
        }
        Command::Conley { inputs, coeff, out } => {
            let (k, f) = load(inputs, out)?;
            match conley_theorem_check(&k, &f, *coeff) {
                Ok(r) => doc(ReportDocument::Conley(conley_doc(&k, &r))),
                Err(morsebott::conley::ConleyError::Morse(MorseError::NotMorseBott(_))) => doc(morse_doc(&k, &f)),
                Err(e) => Err(Failure { code: EXIT_INVALID, message: e.to_string() }),
            }
        }
        Command::Perturb { inputs, epsilon, out } => {
            let (k, f) = load(inputs, out)?;
            let d = perturb_doc(&k, &f, epsilon).map_err(|e| usage(e.to_string()))?;
            doc(ReportDocument::Perturb(d))
        }
        Command::Report { inputs, max_orbits, out } => {
            let (k, f) = load(inputs, out)?;
            doc(ReportDocument::Report(full_report(&k, &f, *max_orbits)))
        }
    }
}

fn json_flag(command: &Command) -> bool {
    match command {
        Command::Validate { out, .. }
        | Command::MorseCheck { out, .. }
        | Command::Collections { out, .. }
        | Command::Homology { out, .. }
        | Command::Flow { out, .. }
        | Command::Inequalities { out, .. }
        | Command::Conley { out, .. }
        | Command::Perturb { out, .. }
        | Command::Report { out, .. } => out.json,
    }
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok((rendered, ok)) => {
            let text = match rendered {
                Rendered::Text(t) => t,
                Rendered::Doc(d) if json_flag(&cli.command) => d.to_json(),
                Rendered::Doc(d) => {
                    let mut t = d.to_text();
                    t.push_str(if ok { "verdict: ok\n" } else { "verdict: FAILED\n" });
                    t
                }
            };
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_USAGE;
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "mbt: {message}");
            code
        }
    }
}
