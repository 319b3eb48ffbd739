use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use weilforge::ast::Type;
use weilforge::exec::{exit_code, Executor, Value};
use weilforge::output;
use weilforge::parser::parse_program_with;
use weilforge_core::points::tangent_dimensions;
use weilforge_core::serialize::{algebra_from_json, content_hash};

#[derive(Parser)]
#[command(name = "weilforge", version, about = "Affine-structure criteria for Weil algebras")]
struct Cli {
    /// Emit JSON instead of a text table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Weil,
    Regular,
    Aut,
    Jet,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script.
    Run {
        script: PathBuf,
        /// Also write the rows of all scans to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check one criterion. The ideal expression may refer to the algebra as `A`.
    Check {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Algebra expression, e.g. `truncated(m=1, l=3)`, or a path to an algebra JSON file.
        #[arg(long)]
        algebra: String,
        /// Ideal expression, e.g. `mpow(A, 2)`.
        #[arg(long)]
        ideal: String,
    },
    /// Threshold scan over truncated algebras.
    Scan {
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        l_max: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tangent-space dimensions for near-points and jets of R^n.
    Dims {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        ambient: usize,
    },
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(code as u8)
}

/// Binds `A` from an algebra expression or JSON file.
fn load_algebra(ex: &mut Executor, spec: &str) -> Result<(), String> {
    let path = std::path::Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {spec}: {e}"))?;
        let a = algebra_from_json(&text).map_err(|e| e.to_string())?;
        ex.bind("A", Value::Algebra(a));
        return Ok(());
    }
    let prog = parse_program_with(&format!("A = {spec};"), &[]).map_err(|e| e.to_string())?;
    let (_, err) = ex.run(&prog);
    err.map_or(Ok(()), |e| Err(e.message))
}

fn emit(json: bool, outcomes: &[weilforge::Outcome], err: Option<&weilforge::exec::ExecError>) -> i32 {
    let code = exit_code(outcomes, err);
    if json {
        println!("{}", output::render_json(outcomes, err, code));
    } else {
        print!("{}", output::render_text(outcomes));
        if let Some(e) = err {
            eprintln!("{e}");
        }
    }
    code
}

fn write_csv(path: &PathBuf, outcomes: &[weilforge::Outcome]) -> Result<(), String> {
    let text = output::scans_csv(outcomes).unwrap_or_else(|| {
        weilforge_core::criteria::scan_csv(&[])
    });
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { script, csv } => {
            let src = match std::fs::read_to_string(&script) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", script.display());
                    return exit(2);
                }
            };
            let program = match weilforge::parse_program(&src) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{}: {e}", script.display());
                    return exit(2);
                }
            };
            let mut ex = Executor::new();
            let (outcomes, err) = ex.run(&program);
            let code = emit(cli.json, &outcomes, err.as_ref());
            if let Some(path) = csv {
                if let Err(e) = write_csv(&path, &outcomes) {
                    eprintln!("{e}");
                    return exit(2);
                }
            }
            exit(code)
        }
        Command::Check { kind, algebra, ideal } => {
            let mut ex = Executor::new();
            if let Err(e) = load_algebra(&mut ex, &algebra) {
                eprintln!("{e}");
                return exit(2);
            }
            let kw = match kind {
                Kind::Weil => "weil",
                Kind::Regular => "regular",
                Kind::Aut => "aut",
                Kind::Jet => "jet",
            };
            let src = format!("check {kw} A {ideal};");
            let program = match parse_program_with(&src, &[("A", Type::Algebra)]) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{e}");
                    return exit(2);
                }
            };
            let (outcomes, err) = ex.run(&program);
            exit(emit(cli.json, &outcomes, err.as_ref()))
        }
        Command::Scan { m_max, l_max, csv } => {
            let program = match weilforge::parse_program(&format!("scan truncated m<={m_max} l<={l_max};")) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("{e}");
                    return exit(2);
                }
            };
            let mut ex = Executor::new();
            let (outcomes, err) = ex.run(&program);
            let code = emit(cli.json, &outcomes, err.as_ref());
            if let Some(path) = csv {
                if let Err(e) = write_csv(&path, &outcomes) {
                    eprintln!("{e}");
                    return exit(2);
                }
            }
            exit(code)
        }
        Command::Dims { algebra, ambient } => {
            let mut ex = Executor::new();
            if let Err(e) = load_algebra(&mut ex, &algebra) {
                eprintln!("{e}");
                return exit(2);
            }
            let Some(Value::Algebra(a)) = ex.get("A").cloned() else {
                eprintln!("expected an algebra");
                return exit(2);
            };
            if ambient == 0 {
                eprintln!("--ambient must be at least 1");
                return exit(2);
            }
            let t = match tangent_dimensions(&a, ambient) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("{e}");
                    return exit(2);
                }
            };
            if cli.json {
                let doc = json!({
                    "results": [{
                        "kind": "dims",
                        "algebra_hash": content_hash(&a),
                        "ambient": ambient,
                        "near_point_tangent": t.near_point_tangent,
                        "algebra_derivations": t.algebra_derivations,
                        "jet_tangent": t.jet_tangent,
                    }],
                    "error": null,
                    "exit_code": 0,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            } else {
                let jet = t.jet_tangent.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
                print!(
                    "{}",
                    output::table(
                        &["dim A", "n", "near-point tangent", "Der(A,A)", "jet tangent"],
                        &[vec![
                            a.dim().to_string(),
                            ambient.to_string(),
                            t.near_point_tangent.to_string(),
                            t.algebra_derivations.to_string(),
                            jet,
                        ]],
                    )
                );
            }
            exit(0)
        }
    }
}
