//! Statement execution and result records.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use weilforge_core::algebra::{quotient, truncated_algebra, AlgebraRef};
use weilforge_core::criteria::{affine_report, scan_truncated, AffineReport, ScanRow};
use weilforge_core::ideal::{annihilator, ideal_span, maximal_power, Ideal};
use weilforge_core::linalg::{scale_vec, Q};
use weilforge_core::serialize::{algebra_doc, content_hash, ideal_doc};
use weilforge_core::WeilError;

use crate::ast::{Expr, PolyExpr, Program, Stmt};
use crate::lexer::Pos;

#[derive(Clone, Debug)]
pub enum Value {
    Algebra(AlgebraRef),
    Ideal(Ideal),
}

impl Value {
    fn algebra(&self) -> &AlgebraRef {
        match self {
            Value::Algebra(a) => a,
            Value::Ideal(i) => i.algebra(),
        }
    }
}

/// Evaluation failure of one statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecError {
    pub pos: Pos,
    pub statement: String,
    pub message: String,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error at {} in `{}`: {}", self.pos, self.statement, self.message)
    }
}

impl std::error::Error for ExecError {}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Define {
        statement: String,
        name: String,
        #[serde(rename = "type")]
        ty: String,
        dim: usize,
        algebra_hash: String,
    },
    Check {
        statement: String,
        report: AffineReport,
    },
    Scan {
        statement: String,
        rows: Vec<ScanRow>,
        disagreements: usize,
    },
    Export {
        statement: String,
        name: String,
        path: String,
        algebra_hash: String,
    },
}

impl Outcome {
    /// Whether the statement reports a failure (exit code 1).
    pub fn failed(&self) -> bool {
        match self {
            Outcome::Check { report, .. } => !report.holds,
            Outcome::Scan { disagreements, .. } => *disagreements > 0,
            _ => false,
        }
    }
}

#[derive(Default)]
pub struct Executor {
    env: HashMap<String, Value>,
}

fn eval_poly(a: &AlgebraRef, p: &PolyExpr) -> Result<Vec<Q>, String> {
    let names = a.generator_names();
    let mut acc = vec![Q::from_integer(0.into()); a.dim()];
    for t in &p.terms {
        let mut v = scale_vec(&t.coeff, &a.unit());
        for (n, e) in &t.factors {
            let idx = names
                .iter()
                .position(|g| g == n)
                .ok_or_else(|| format!("NameError: `{n}` is not a generator (generators: {})", names.join(", ")))?;
            v = a.mul(&v, &a.pow(&a.generators()[idx], *e));
        }
        for (x, y) in acc.iter_mut().zip(v) {
            *x += y;
        }
    }
    Ok(acc)
}

fn core_error(e: WeilError) -> String {
    e.to_string()
}

impl Executor {
    pub fn new() -> Self {
        Executor::default()
    }

    pub fn bind(&mut self, name: &str, v: Value) {
        self.env.insert(name.to_string(), v);
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.env.get(name)
    }

    fn algebra(&self, e: &Expr) -> Result<AlgebraRef, String> {
        match self.eval(e)? {
            Value::Algebra(a) => Ok(a),
            Value::Ideal(_) => Err("TypeError: expected algebra, found ideal".into()),
        }
    }

    fn ideal(&self, e: &Expr) -> Result<Ideal, String> {
        match self.eval(e)? {
            Value::Ideal(i) => Ok(i),
            Value::Algebra(_) => Err("TypeError: expected ideal, found algebra".into()),
        }
    }

    fn ideal_of(&self, a: &AlgebraRef, e: &Expr) -> Result<Ideal, String> {
        let i = self.ideal(e)?;
        if i.algebra() != a {
            return Err(format!("ideal `{e}` belongs to a different algebra"));
        }
        Ok(i)
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, String> {
        Ok(match e {
            Expr::Truncated { m, l } => Value::Algebra(truncated_algebra(*m, *l).map_err(core_error)?),
            Expr::Quotient(a, i) => {
                let a = self.algebra(a)?;
                let i = self.ideal_of(&a, i)?;
                Value::Algebra(quotient(&i).map_err(core_error)?.algebra)
            }
            Expr::MPow(a, k) => Value::Ideal(maximal_power(&self.algebra(a)?, *k)),
            Expr::Ideal(a, polys) => {
                let a = self.algebra(a)?;
                let gens = polys.iter().map(|p| eval_poly(&a, p)).collect::<Result<Vec<_>, _>>()?;
                Value::Ideal(ideal_span(&a, &gens).map_err(core_error)?)
            }
            Expr::Ann(a, i) => {
                let a = self.algebra(a)?;
                Value::Ideal(annihilator(&self.ideal_of(&a, i)?))
            }
            Expr::Name(n) => self
                .env
                .get(n)
                .cloned()
                .ok_or_else(|| format!("NameError: `{n}` is not defined"))?,
        })
    }

    pub fn execute_stmt(&mut self, s: &Stmt) -> Result<Outcome, String> {
        let statement = s.to_string();
        match s {
            Stmt::Let { name, expr } => {
                let v = self.eval(expr)?;
                let (ty, dim) = match &v {
                    Value::Algebra(a) => ("algebra", a.dim()),
                    Value::Ideal(i) => ("ideal", i.dim()),
                };
                let algebra_hash = content_hash(v.algebra());
                self.env.insert(name.clone(), v);
                Ok(Outcome::Define {
                    statement,
                    name: name.clone(),
                    ty: ty.into(),
                    dim,
                    algebra_hash,
                })
            }
            Stmt::Check { kind, algebra, ideal } => {
                let a = self.algebra(algebra)?;
                let i = self.ideal_of(&a, ideal)?;
                let report = affine_report(*kind, &i).map_err(core_error)?;
                Ok(Outcome::Check { statement, report })
            }
            Stmt::Scan { m_max, l_max } => {
                let rows = scan_truncated(*m_max, *l_max).map_err(core_error)?;
                let disagreements = rows.iter().filter(|r| !r.agree).count();
                Ok(Outcome::Scan {
                    statement,
                    rows,
                    disagreements,
                })
            }
            Stmt::Export { name, path } => {
                let v = self.env.get(name).ok_or_else(|| format!("NameError: `{name}` is not defined"))?;
                let json = match v {
                    Value::Algebra(a) => serde_json::to_string_pretty(&algebra_doc(a)),
                    Value::Ideal(i) => serde_json::to_string_pretty(&ideal_doc(i)),
                }
                .map_err(|e| e.to_string())?;
                std::fs::write(path, json + "\n").map_err(|e| format!("cannot write {path}: {e}"))?;
                Ok(Outcome::Export {
                    statement,
                    name: name.clone(),
                    path: path.clone(),
                    algebra_hash: content_hash(v.algebra()),
                })
            }
        }
    }

    /// Runs statements in order, stopping at the first evaluation error.
    pub fn run(&mut self, program: &Program) -> (Vec<Outcome>, Option<ExecError>) {
        let mut out = Vec::new();
        for (s, pos) in program.statements.iter().zip(&program.positions) {
            match self.execute_stmt(s) {
                Ok(o) => out.push(o),
                Err(message) => {
                    return (
                        out,
                        Some(ExecError {
                            pos: *pos,
                            statement: s.to_string(),
                            message,
                        }),
                    )
                }
            }
        }
        (out, None)
    }
}

/// 0 when everything holds, 1 when a check or scan fails, 2 on evaluation error.
pub fn exit_code(outcomes: &[Outcome], error: Option<&ExecError>) -> i32 {
    if error.is_some() {
        2
    } else if outcomes.iter().any(Outcome::failed) {
        1
    } else {
        0
    }
}
