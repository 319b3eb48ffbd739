//! Syntax tree of scripts and its canonical printer.

use std::fmt;

use weilforge_core::criteria::Subject;
use weilforge_core::linalg::{fmt_q, Q};
use num_traits::{One, Signed, Zero};

use crate::lexer::Pos;

/// `coeff * name^e * ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Q,
    pub factors: Vec<(String, u32)>,
}

/// A polynomial in generator names, kept exactly as written term by term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyExpr {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Truncated { m: usize, l: usize },
    Quotient(Box<Expr>, Box<Expr>),
    MPow(Box<Expr>, usize),
    Ideal(Box<Expr>, Vec<PolyExpr>),
    Ann(Box<Expr>, Box<Expr>),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Let { name: String, expr: Expr },
    Check { kind: Subject, algebra: Expr, ideal: Expr },
    Scan { m_max: usize, l_max: usize },
    Export { name: String, path: String },
}

/// Parsed script. Equality ignores source positions.
#[derive(Clone, Debug, Default)]
pub struct Program {
    pub statements: Vec<Stmt>,
    pub positions: Vec<Pos>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Eq for Program {}

/// Static type of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Type {
    Algebra,
    Ideal,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type::Algebra => "algebra",
            Type::Ideal => "ideal",
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // sign is printed by the enclosing polynomial
        let c = self.coeff.abs();
        if self.factors.is_empty() {
            return f.write_str(&fmt_q(&c));
        }
        if !c.is_one() {
            write!(f, "{}*", fmt_q(&c))?;
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff < Q::zero();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Truncated { m, l } => write!(f, "truncated(m={m}, l={l})"),
            Expr::Quotient(a, i) => write!(f, "quotient({a}, {i})"),
            Expr::MPow(a, k) => write!(f, "mpow({a}, {k})"),
            Expr::Ideal(a, polys) => {
                let ps: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
                write!(f, "ideal({a}; {})", ps.join(", "))
            }
            Expr::Ann(a, i) => write!(f, "ann({a}, {i})"),
            Expr::Name(n) => f.write_str(n),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Let { name, expr } => write!(f, "{name} = {expr};"),
            Stmt::Check { kind, algebra, ideal } => write!(f, "check {kind} {algebra} {ideal};"),
            Stmt::Scan { m_max, l_max } => write!(f, "scan truncated m<={m_max} l<={l_max};"),
            Stmt::Export { name, path } => write!(f, "export {name} \"{path}\";"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
