use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilinv::invariants::Construction;
use nilinv::parabolic::ParabolicShape;
use nilinv::properties::all_properties;
use nilinv::report;
use nilinv::roots::Letter;
use nilinv::verify::{verify, VerifyOptions, DEFAULT_ORBIT_SAMPLES};
use nilinv::Error;

#[derive(Parser)]
#[command(name = "nilinv", version, about = "Invariants of the unipotent adjoint action on parabolic nilradicals (types B, C, D)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nilradical, Levi roots, R, k and the adjusted Levi set.
    Roots(Shape),
    /// The base S and its generations.
    Base(Shape),
    /// Admissible pairs and the set Phi.
    Pairs(Shape),
    /// The matrix diagram with S and Phi marked.
    Diagram(Shape),
    /// The invariant polynomials.
    Invariants(Shape),
    /// Check invariance, independence and the orbit bound.
    Verify(Shape),
    /// Everything above plus the structural property checks.
    Report(Shape),
}

#[derive(Args)]
struct Shape {
    #[arg(long = "type", value_name = "B|C|D")]
    letter: Letter,
    #[arg(long)]
    n: usize,
    /// Block sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    blocks: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    retries: usize,
    /// Use S and P instead of the circled-times and times marks.
    #[arg(long)]
    ascii: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// What a subcommand produced and whether it counts as a pass.
struct Outcome {
    body: String,
    passed: bool,
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    let (Command::Roots(s)
    | Command::Base(s)
    | Command::Pairs(s)
    | Command::Diagram(s)
    | Command::Invariants(s)
    | Command::Verify(s)
    | Command::Report(s)) = cmd;
    let shape = ParabolicShape::parse(s.letter, s.n, &s.blocks)?;
    let cons = Construction::new(shape)?;
    let json = s.format == Format::Json;
    let opts = VerifyOptions {
        seed: s.seed,
        retries: s.retries,
        orbit_samples: DEFAULT_ORBIT_SAMPLES,
    };
    let to_json = |doc: &report::Document| {
        serde_json::to_string_pretty(doc).expect("serializable document") + "\n"
    };

    let out = match cmd {
        Command::Roots(_) => {
            let body = if json {
                let mut doc = report::document(&cons, None, serde_json::Value::Null);
                doc.roots = Some(report::roots_json(&cons));
                to_json(&doc)
            } else {
                report::roots_text(&cons)
            };
            Outcome { body, passed: true }
        }
        Command::Base(_) | Command::Pairs(_) => {
            let body = if json {
                to_json(&report::document(&cons, None, serde_json::Value::Null))
            } else if matches!(cmd, Command::Base(_)) {
                report::base_text(&cons)
            } else {
                report::pairs_text(&cons)
            };
            Outcome { body, passed: true }
        }
        Command::Diagram(_) => Outcome {
            body: report::render_diagram(&cons, s.ascii),
            passed: true,
        },
        Command::Invariants(_) => {
            let sys = cons.build_system()?;
            let body = if json {
                to_json(&report::document(&cons, Some(&sys), serde_json::Value::Null))
            } else {
                report::invariants_text(&cons, &sys)
            };
            Outcome { body, passed: true }
        }
        Command::Verify(_) => {
            let sys = cons.build_system()?;
            let rep = verify(&sys, &cons, opts);
            let body = if json {
                let value = report::report_value(Some(&rep), None);
                to_json(&report::document(&cons, Some(&sys), value))
            } else {
                report::verify_text(&rep)
            };
            Outcome {
                body,
                passed: rep.passed(),
            }
        }
        Command::Report(_) => {
            let sys = cons.build_system()?;
            let rep = verify(&sys, &cons, opts);
            let props = all_properties(&cons);
            let passed = rep.passed() && props.iter().all(|p| p.ok());
            let body = if json {
                let value = report::report_value(Some(&rep), Some(&props));
                let mut doc = report::document(&cons, Some(&sys), value);
                doc.roots = Some(report::roots_json(&cons));
                to_json(&doc)
            } else {
                [
                    report::roots_text(&cons),
                    report::pairs_text(&cons),
                    report::render_diagram(&cons, s.ascii),
                    report::invariants_text(&cons, &sys),
                    report::verify_text(&rep),
                    report::properties_text(&props),
                ]
                .join("\n")
            };
            Outcome { body, passed }
        }
    };
    if let Some(path) = &s.output {
        std::fs::write(path, &out.body)
            .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
        return Ok(Outcome {
            body: String::new(),
            ..out
        });
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.body.as_bytes());
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::InvalidShape(_) | Error::Parse(_) | Error::Precondition(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
