//! Recursive-descent parser with name and type resolution.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::One;
use weilforge_core::criteria::Subject;
use weilforge_core::linalg::Q;

use crate::ast::{Expr, PolyExpr, Program, Stmt, Term, Type};
use crate::lexer::{tokenize, Pos, Tok, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        pos: Pos,
        found: String,
        expected: BTreeSet<String>,
    },
    Name {
        pos: Pos,
        name: String,
    },
    Type {
        pos: Pos,
        expected: Type,
        found: Type,
    },
}

impl ParseError {
    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Name { pos, .. } | ParseError::Type { pos, .. } => *pos,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, found, expected } => {
                let exp: Vec<&str> = expected.iter().map(|s| s.as_str()).collect();
                write!(f, "SyntaxError at {pos}: found {found}, expected one of: {}", exp.join(", "))
            }
            ParseError::Name { pos, name } => write!(f, "NameError at {pos}: `{name}` is not defined"),
            ParseError::Type { pos, expected, found } => {
                write!(f, "TypeError at {pos}: expected {expected}, found {found}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

const KEYWORDS: [&str; 8] = ["check", "scan", "export", "truncated", "quotient", "mpow", "ideal", "ann"];

struct Parser {
    toks: Vec<Token>,
    at: usize,
    env: HashMap<String, Type>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(ParseError::Syntax {
            pos: t.pos,
            found: t.tok.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            self.error(&[&tok.to_string()])
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Pos> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => Ok(self.bump().pos),
            _ => self.error(&[&format!("`{kw}`")]),
        }
    }

    fn int(&mut self) -> PResult<usize> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                Ok(n as usize)
            }
            _ => self.error(&["integer"]),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut prog = Program::default();
        while self.peek().tok != Tok::Eof {
            let pos = self.peek().pos;
            let s = self.statement()?;
            prog.statements.push(s);
            prog.positions.push(pos);
        }
        Ok(prog)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let t = self.peek().clone();
        let Tok::Ident(word) = &t.tok else {
            return self.error(&["`check`", "`scan`", "`export`", "name"]);
        };
        match word.as_str() {
            "check" => {
                self.bump();
                let kind = match &self.peek().tok {
                    Tok::Ident(k) if Subject::from_keyword(k).is_some() => {
                        let s = Subject::from_keyword(k).unwrap();
                        self.bump();
                        s
                    }
                    _ => return self.error(&["`weil`", "`regular`", "`aut`", "`jet`"]),
                };
                let algebra = self.typed_expr(Type::Algebra)?;
                let ideal = self.typed_expr(Type::Ideal)?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::Check { kind, algebra, ideal })
            }
            "scan" => {
                self.bump();
                self.keyword("truncated")?;
                self.keyword("m")?;
                self.expect(Tok::Le)?;
                let m_max = self.int()?;
                self.keyword("l")?;
                self.expect(Tok::Le)?;
                let l_max = self.int()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt::Scan { m_max, l_max })
            }
            "export" => {
                self.bump();
                let (name, pos) = self.name()?;
                if !self.env.contains_key(&name) {
                    return Err(ParseError::Name { pos, name });
                }
                let path = match &self.peek().tok {
                    Tok::Str(s) => s.clone(),
                    _ => return self.error(&["string"]),
                };
                self.bump();
                self.expect(Tok::Semi)?;
                Ok(Stmt::Export { name, path })
            }
            w if KEYWORDS.contains(&w) => self.error(&["`check`", "`scan`", "`export`", "name"]),
            _ => {
                let (name, _) = self.name()?;
                self.expect(Tok::Eq)?;
                let (expr, ty) = self.expr()?;
                self.expect(Tok::Semi)?;
                self.env.insert(name.clone(), ty);
                Ok(Stmt::Let { name, expr })
            }
        }
    }

    fn name(&mut self) -> PResult<(String, Pos)> {
        match &self.peek().tok {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                Ok((s, self.bump().pos))
            }
            _ => self.error(&["name"]),
        }
    }

    fn typed_expr(&mut self, want: Type) -> PResult<Expr> {
        let pos = self.peek().pos;
        let (e, ty) = self.expr()?;
        if ty != want {
            return Err(ParseError::Type {
                pos,
                expected: want,
                found: ty,
            });
        }
        Ok(e)
    }

    fn expr(&mut self) -> PResult<(Expr, Type)> {
        let t = self.peek().clone();
        let Tok::Ident(word) = &t.tok else {
            return self.error(&["expression"]);
        };
        match word.as_str() {
            "truncated" => {
                self.bump();
                self.expect(Tok::LParen)?;
                self.keyword("m")?;
                self.expect(Tok::Eq)?;
                let m = self.int()?;
                self.expect(Tok::Comma)?;
                self.keyword("l")?;
                self.expect(Tok::Eq)?;
                let l = self.int()?;
                self.expect(Tok::RParen)?;
                Ok((Expr::Truncated { m, l }, Type::Algebra))
            }
            "quotient" | "ann" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.typed_expr(Type::Algebra)?;
                self.expect(Tok::Comma)?;
                let i = self.typed_expr(Type::Ideal)?;
                self.expect(Tok::RParen)?;
                Ok(if word == "quotient" {
                    (Expr::Quotient(Box::new(a), Box::new(i)), Type::Algebra)
                } else {
                    (Expr::Ann(Box::new(a), Box::new(i)), Type::Ideal)
                })
            }
            "mpow" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.typed_expr(Type::Algebra)?;
                self.expect(Tok::Comma)?;
                let k = self.int()?;
                self.expect(Tok::RParen)?;
                Ok((Expr::MPow(Box::new(a), k), Type::Ideal))
            }
            "ideal" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let a = self.typed_expr(Type::Algebra)?;
                self.expect(Tok::Semi)?;
                let mut polys = Vec::new();
                if self.peek().tok != Tok::RParen {
                    polys.push(self.poly()?);
                    while self.peek().tok == Tok::Comma {
                        self.bump();
                        polys.push(self.poly()?);
                    }
                }
                self.expect(Tok::RParen)?;
                Ok((Expr::Ideal(Box::new(a), polys), Type::Ideal))
            }
            w if KEYWORDS.contains(&w) => self.error(&["expression"]),
            _ => {
                let (name, pos) = self.name()?;
                match self.env.get(&name) {
                    Some(&ty) => Ok((Expr::Name(name), ty)),
                    None => Err(ParseError::Name { pos, name }),
                }
            }
        }
    }

    fn poly(&mut self) -> PResult<PolyExpr> {
        let mut terms = Vec::new();
        let mut negate = false;
        if self.peek().tok == Tok::Minus {
            self.bump();
            negate = true;
        }
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            match self.peek().tok {
                Tok::Plus => negate = false,
                Tok::Minus => negate = true,
                _ => break,
            }
            self.bump();
        }
        Ok(PolyExpr { terms })
    }

    fn term(&mut self) -> PResult<Term> {
        let mut coeff = Q::one();
        let mut factors = Vec::new();
        loop {
            match self.peek().tok.clone() {
                Tok::Int(n) => {
                    self.bump();
                    let mut c = Q::from_integer(n.into());
                    if self.peek().tok == Tok::Slash {
                        self.bump();
                        let d = self.int()?;
                        if d == 0 {
                            return self.error(&["nonzero denominator"]);
                        }
                        c /= Q::from_integer(d.into());
                    }
                    coeff *= c;
                }
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                    self.bump();
                    let mut e = 1u32;
                    if self.peek().tok == Tok::Caret {
                        self.bump();
                        e = self.int()? as u32;
                    }
                    factors.push((s, e));
                }
                _ => return self.error(&["integer", "generator name"]),
            }
            if self.peek().tok == Tok::Star {
                self.bump();
            } else {
                break;
            }
        }
        Ok(Term { coeff, factors })
    }
}

/// Parses a script; `predefined` names are in scope from the start.
pub fn parse_program_with(src: &str, predefined: &[(&str, Type)]) -> PResult<Program> {
    let toks = tokenize(src).map_err(|e| ParseError::Syntax {
        pos: e.pos,
        found: e.message,
        expected: BTreeSet::from(["token".to_string()]),
    })?;
    let mut p = Parser {
        toks,
        at: 0,
        env: predefined.iter().map(|(n, t)| (n.to_string(), *t)).collect(),
    };
    p.program()
}

pub fn parse_program(src: &str) -> PResult<Program> {
    parse_program_with(src, &[])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoke() {
        let p = parse_program("A = truncated(m=1, l=3); I = mpow(A, 2); check weil A I;").unwrap();
        assert_eq!(p.statements.len(), 3);
        let p = parse_program("scan truncated m<=2 l<=5;").unwrap();
        assert_eq!(p.statements, vec![Stmt::Scan { m_max: 2, l_max: 5 }]);
        assert!(parse_program("").unwrap().statements.is_empty());
    }

    #[test]
    fn name_error_at_use_site() {
        let err = parse_program("I = ideal(A; xi^2);").unwrap_err();
        assert_eq!(
            err,
            ParseError::Name {
                pos: Pos { line: 1, column: 11 },
                name: "A".into()
            }
        );
    }

    #[test]
    fn type_error() {
        let err = parse_program("A = truncated(m=1, l=2); I = mpow(A, 1); check weil I A;").unwrap_err();
        assert!(matches!(err, ParseError::Type { expected: Type::Algebra, found: Type::Ideal, .. }));
    }

    #[test]
    fn syntax_error_lists_expected() {
        let err = parse_program("A = truncated(m=1 l=2);").unwrap_err();
        match err {
            ParseError::Syntax { pos, expected, .. } => {
                assert_eq!(pos, Pos { line: 1, column: 19 });
                assert!(expected.contains("`,`"));
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn polynomials() {
        let p = parse_program("A = truncated(m=2, l=3); I = ideal(A; -xi1^2 + 1/2*xi1*xi2 - 3, xi2);").unwrap();
        let Stmt::Let { expr: Expr::Ideal(_, polys), .. } = &p.statements[1] else { panic!() };
        assert_eq!(polys.len(), 2);
        assert_eq!(polys[0].to_string(), "-xi1^2 + 1/2*xi1*xi2 - 3");
    }
}
