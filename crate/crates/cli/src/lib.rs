//! Scripting language and command-line front end for `weilforge-core`.
//!
//! ```text
//! program := stmt*
//! stmt    := name "=" expr ";"
//!          | "check" kind expr expr ";"
//!          | "scan" "truncated" "m" "<=" int "l" "<=" int ";"
//!          | "export" name string ";"
//! expr    := "truncated(" "m" "=" int "," "l" "=" int ")"
//!          | "quotient(" expr "," expr ")" | "mpow(" expr "," int ")"
//!          | "ideal(" expr ";" poly ("," poly)* ")" | "ann(" expr "," expr ")" | name
//! kind    := "weil" | "regular" | "aut" | "jet"
//! ```
//!
//! Polynomials are written in the generator names of the algebra (`xi` for
//! one variable, `xi1`, `xi2`, ... otherwise). `#` starts a comment.

pub mod ast;
pub mod exec;
pub mod lexer;
pub mod output;
pub mod parser;

pub use ast::Program;
pub use exec::{exit_code, Executor, Outcome};
pub use parser::{parse_program, parse_program_with, ParseError};

/// Report schema for `--json` output.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Parses and runs a script, returning rendered output and the exit code.
pub fn run_script(src: &str, json: bool) -> (String, i32) {
    let program = match parse_program(src) {
        Ok(p) => p,
        Err(e) => return (format!("{e}\n"), 2),
    };
    let mut ex = Executor::new();
    let (outcomes, err) = ex.run(&program);
    let code = exit_code(&outcomes, err.as_ref());
    if json {
        (output::render_json(&outcomes, err.as_ref(), code) + "\n", code)
    } else {
        let mut text = output::render_text(&outcomes);
        if let Some(e) = err {
            text.push_str(&format!("{e}\n"));
        }
        (text, code)
    }
}
