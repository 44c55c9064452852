//! Command-line front end for the toriq library.
//!
//! Subcommands: `fan check|info`, `quiver`, `relations`, `rep check|hom`,
//! and `example`. Every command reads files or standard input (`-`),
//! writes data to standard output and diagnostics to standard error, and
//! exits 0 on success, 1 when a structurally sound input fails validation
//! or a membership condition, 2 on malformed input (including shape
//! mismatches with the quiver), and 3 on an internal error.

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use toriq::builtin::{builtin_fan, roster};
use toriq::category::{
    check_all, hom_dim, rep_from_value, relations, shape_failures, Condition, ConditionReport,
    Morphism, Representation,
};
use toriq::fan::{fan_from_value, FanError};
use toriq::json::{cone_to_value, int_to_value, matq_to_value, parse_text, to_pretty_string};
use toriq::{Fan, Quiver};

#[derive(Parser)]
#[command(name = "toriq", version, about = "Fans, their quivers, and quiver representations")]
struct Cli {
    /// Emit diagnostics on standard error as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Skip the pairwise cone-intersection check when loading fans
    /// (ray-containment violations are still caught).
    #[arg(long, global = true)]
    trust_fan: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan file or summarize its structure.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Export the quiver of a fan.
    Quiver {
        /// Fan file, or `-` for standard input.
        path: String,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Print the monodromy relations the fan imposes, one per line.
    Relations {
        /// Fan file, or `-` for standard input.
        path: String,
    },
    /// Check representations against a fan or compute morphism spaces.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Print a built-in example fan as JSON.
    Example {
        /// One of p1, p2, fan1, cn:<n>, or cstar:<l>,<n>.
        name: String,
    },
}

#[derive(Subcommand)]
enum FanCmd {
    /// Exit 0 iff the file describes a regular fan.
    Check { path: String },
    /// Print faces, loop counts, and chart bases as JSON.
    Info { path: String },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Exit 0 iff the representation satisfies conditions (i) through (iv).
    Check { fan: String, rep: String },
    /// Print the dimension of the space of morphisms from A to B.
    Hom {
        fan: String,
        a: String,
        b: String,
        /// Also print a basis of the morphism space as JSON.
        #[arg(long)]
        basis: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(&cli)) {
        Ok(code) => code,
        // The default panic hook has already written the details.
        Err(_) => ExitCode::from(3),
    }
}

fn run(cli: &Cli) -> ExitCode {
    let diag = Reporter { json: cli.json };
    match &cli.command {
        Command::Fan(FanCmd::Check { path }) => match load_fan(path, cli.trust_fan, &diag) {
            Loaded::Fan(fan) => {
                diag.fan_ok(&fan);
                ExitCode::SUCCESS
            }
            Loaded::Failed(code) => code,
        },
        Command::Fan(FanCmd::Info { path }) => with_fan(path, cli, &diag, |fan| {
            print!("{}", to_pretty_string(&fan.info_value()));
            ExitCode::SUCCESS
        }),
        Command::Quiver { path, format } => with_fan(path, cli, &diag, |fan| {
            let quiver = Quiver::from_fan(&fan);
            match format {
                Format::Dot => print!("{}", quiver.to_dot()),
                Format::Json => print!("{}", to_pretty_string(&quiver.to_value())),
            }
            ExitCode::SUCCESS
        }),
        Command::Relations { path } => with_fan(path, cli, &diag, |fan| {
            for word in relations(&fan) {
                println!("{word}");
            }
            ExitCode::SUCCESS
        }),
        Command::Rep(RepCmd::Check { fan, rep }) => {
            with_fan(fan, cli, &diag, |fan| match read_rep(rep, &diag) {
                Some(rep) => {
                    let report = check_all(&fan, &rep);
                    diag.condition_report(&report);
                    if report.passed() {
                        ExitCode::SUCCESS
                    } else if report.failed_condition(Condition::Shape) {
                        ExitCode::from(2)
                    } else {
                        ExitCode::from(1)
                    }
                }
                None => ExitCode::from(2),
            })
        }
        Command::Rep(RepCmd::Hom { fan, a, b, basis }) => {
            with_fan(fan, cli, &diag, |fan| {
                let (Some(rep_a), Some(rep_b)) = (read_rep(a, &diag), read_rep(b, &diag))
                else {
                    return ExitCode::from(2);
                };
                for (label, rep) in [("A", &rep_a), ("B", &rep_b)] {
                    let shape = shape_failures(&fan, rep);
                    if !shape.is_empty() {
                        diag.shape_mismatch(label, &shape);
                        return ExitCode::from(2);
                    }
                }
                let (dim, morphisms) = hom_dim(&rep_a, &rep_b);
                println!("{dim}");
                if *basis {
                    let value = Value::Array(morphisms.iter().map(morphism_to_value).collect());
                    print!("{}", to_pretty_string(&value));
                }
                ExitCode::SUCCESS
            })
        }
        Command::Example { name } => match builtin_fan(name) {
            Some(fan) => {
                print!("{}", to_pretty_string(&fan.to_value()));
                ExitCode::SUCCESS
            }
            None => {
                diag.error(&format!(
                    "unknown example {name:?} (available: {})",
                    roster().join(", ")
                ));
                ExitCode::from(2)
            }
        },
    }
}

enum Loaded {
    Fan(Fan),
    Failed(ExitCode),
}

/// Reads, parses, and validates a fan file; diagnostics are printed here so
/// callers only branch on the outcome.
fn load_fan(path: &str, trust_fan: bool, diag: &Reporter) -> Loaded {
    let text = match read_input(path) {
        Ok(text) => text,
        Err(message) => {
            diag.error(&message);
            return Loaded::Failed(ExitCode::from(2));
        }
    };
    let parsed = parse_text(&text).and_then(|v| fan_from_value(&v));
    let (dim, rays, max_cones) = match parsed {
        Ok(parts) => parts,
        Err(e) => {
            diag.error(&e.to_string());
            return Loaded::Failed(ExitCode::from(2));
        }
    };
    match Fan::load(dim, rays, max_cones, trust_fan) {
        Ok(fan) => Loaded::Fan(fan),
        Err(e) => {
            diag.fan_failure(&e);
            Loaded::Failed(ExitCode::from(1))
        }
    }
}

fn with_fan(
    path: &str,
    cli: &Cli,
    diag: &Reporter,
    action: impl FnOnce(Fan) -> ExitCode,
) -> ExitCode {
    match load_fan(path, cli.trust_fan, diag) {
        Loaded::Fan(fan) => action(fan),
        Loaded::Failed(code) => code,
    }
}

fn read_rep(path: &str, diag: &Reporter) -> Option<Representation> {
    let text = match read_input(path) {
        Ok(text) => text,
        Err(message) => {
            diag.error(&message);
            return None;
        }
    };
    match parse_text(&text).and_then(|v| rep_from_value(&v)) {
        Ok(rep) => Some(rep),
        Err(e) => {
            diag.error(&e.to_string());
            None
        }
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
    }
}

fn morphism_to_value(m: &Morphism) -> Value {
    let entries: Map<String, Value> = m
        .maps
        .iter()
        .map(|(cone, matrix)| (cone.to_string(), matq_to_value(matrix)))
        .collect();
    Value::Object(entries)
}

fn fan_error_value(e: &FanError) -> Value {
    let kind = match e {
        FanError::RayDimension { .. } => "ray_dimension",
        FanError::NonPrimitiveRay { .. } => "non_primitive_ray",
        FanError::DuplicateRay { .. } => "duplicate_ray",
        FanError::UnknownRayIndex { .. } => "unknown_ray_index",
        FanError::NonSmoothCone { .. } => "non_smooth_cone",
        FanError::FanAxiomViolation { .. } => "fan_axiom_violation",
    };
    let mut m = Map::new();
    m.insert("kind".into(), Value::from(kind));
    m.insert("message".into(), Value::from(e.to_string()));
    match e {
        FanError::NonSmoothCone { cone, diagonal } => {
            m.insert("cone".into(), cone_to_value(cone));
            m.insert(
                "diagonal".into(),
                Value::Array(diagonal.iter().map(int_to_value).collect()),
            );
        }
        FanError::FanAxiomViolation { a, b } => {
            m.insert("a".into(), cone_to_value(a));
            m.insert("b".into(), cone_to_value(b));
        }
        _ => {}
    }
    Value::Object(m)
}

/// All standard-error output goes through here, so the `--json` switch
/// changes the format in one place.
struct Reporter {
    json: bool,
}

impl Reporter {
    fn error(&self, message: &str) {
        if self.json {
            let mut m = Map::new();
            m.insert("error".into(), Value::from(message));
            eprintln!("{}", Value::Object(m));
        } else {
            eprintln!("error: {message}");
        }
    }

    fn fan_ok(&self, fan: &Fan) {
        if self.json {
            let mut m = Map::new();
            m.insert("passed".into(), Value::from(true));
            m.insert("failures".into(), Value::Array(Vec::new()));
            eprintln!("{}", Value::Object(m));
        } else {
            let trusted = if fan.is_trusted() {
                " (pairwise intersection check skipped)"
            } else {
                ""
            };
            eprintln!(
                "fan ok: {} rays, {} faces{trusted}",
                fan.ray_count(),
                fan.cone_count()
            );
        }
    }

    fn fan_failure(&self, e: &FanError) {
        if self.json {
            let mut m = Map::new();
            m.insert("passed".into(), Value::from(false));
            m.insert("failures".into(), Value::Array(vec![fan_error_value(e)]));
            eprintln!("{}", Value::Object(m));
        } else {
            eprintln!("invalid fan: {e}");
        }
    }

    fn condition_report(&self, report: &ConditionReport) {
        if self.json {
            eprintln!("{}", report.to_value());
        } else if report.passed() {
            eprintln!("ok: conditions (i)-(iv) all hold");
        } else {
            for failure in report.failures() {
                eprintln!("{failure}");
            }
        }
    }

    fn shape_mismatch(&self, label: &str, failures: &[toriq::category::Failure]) {
        if self.json {
            let mut m = Map::new();
            m.insert("error".into(), Value::from(format!("representation {label} does not fit the quiver")));
            m.insert(
                "failures".into(),
                Value::Array(failures.iter().map(|f| f.to_value()).collect()),
            );
            eprintln!("{}", Value::Object(m));
        } else {
            for failure in failures {
                eprintln!("representation {label}: {failure}");
            }
        }
    }
}
