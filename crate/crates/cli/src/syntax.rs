//! Lexer and parser for the script language.
//!
//! ```text
//! chart C { even x, y; odd xi } hatted
//! let s = x^2 * #x + 1/2 * xi * #y
//! change U { x -> x + y^2, y -> y } inverse { x -> x - y^2, y -> y }
//! bracket(s, x)
//! rary(s; x, y)
//! ```
//!
//! Statements need no separator; `;` may be used between them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use densilift_core::Parity;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError { pos, message: message.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: [&str; 14] = ["->", "{", "}", "(", ")", ",", ";", "+", "-", "*", "/", "^", "=", "#"];

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let mut advance = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut i);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i);
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            i = start;
            advance(text.len(), &mut i);
            out.push((Tok::Int(text.parse().expect("digits")), pos));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            i = start;
            advance(text.chars().count(), &mut i);
            out.push((Tok::Ident(text), pos));
        } else if c == '"' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                j += 1;
            }
            if j >= chars.len() || chars[j] != '"' {
                return err(pos, "unterminated string literal");
            }
            let text: String = chars[start..j].iter().collect();
            advance(j + 1 - i, &mut i);
            out.push((Tok::Str(text), pos));
        } else if let Some(sym) = SYMBOLS.iter().find(|s| {
            let s: Vec<char> = s.chars().collect();
            chars[i..].starts_with(&s)
        }) {
            advance(sym.len(), &mut i);
            out.push((Tok::Sym(sym), pos));
        } else {
            return err(pos, format!("unexpected character `{c}`"));
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Str(String),
    /// A name: coordinate, `t`, `w`, binding or coordinate change.
    Name(String),
    /// `#name`: the fiber partner of a coordinate, or `#t`.
    Fiber(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, BigRational),
    /// `name(a, b; c, d)`: arguments grouped by `;`.
    Call(String, Vec<Vec<Expr>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Chart { name: String, coords: Vec<(String, Parity)>, hatted: bool },
    Let { name: String, value: Expr },
    Change { name: String, forward: Vec<(String, Expr)>, inverse: Option<Vec<(String, Expr)>> },
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StmtKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub statements: Vec<Statement>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        let hit = self.is_sym(s);
        if hit {
            self.bump();
        }
        hit
    }

    fn expect_sym(&mut self, s: &str) -> Result<Pos, SyntaxError> {
        if self.is_sym(s) {
            Ok(self.bump().1)
        } else {
            err(self.pos(), format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), SyntaxError> {
        match self.bump() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => err(p, format!("expected a name, found {t}")),
        }
    }

    fn script(&mut self) -> Result<Script, SyntaxError> {
        let mut statements = Vec::new();
        loop {
            while self.eat_sym(";") {}
            if *self.peek() == Tok::Eof {
                return Ok(Script { statements });
            }
            statements.push(self.statement()?);
        }
    }

    fn statement(&mut self) -> Result<Statement, SyntaxError> {
        let pos = self.pos();
        let kind = if self.is_word("chart") {
            self.bump();
            self.chart()?
        } else if self.is_word("let") {
            self.bump();
            let (name, _) = self.ident()?;
            self.expect_sym("=")?;
            StmtKind::Let { name, value: self.expr()? }
        } else if self.is_word("change") {
            self.bump();
            let (name, _) = self.ident()?;
            let forward = self.mapping()?;
            let inverse = if self.is_word("inverse") {
                self.bump();
                Some(self.mapping()?)
            } else {
                None
            };
            StmtKind::Change { name, forward, inverse }
        } else {
            StmtKind::Expr(self.expr()?)
        };
        Ok(Statement { kind, pos })
    }

    fn chart(&mut self) -> Result<StmtKind, SyntaxError> {
        let (name, _) = self.ident()?;
        self.expect_sym("{")?;
        let mut coords = Vec::new();
        while !self.is_sym("}") {
            let (kw, p) = self.ident()?;
            let parity = match kw.as_str() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                _ => return err(p, format!("expected `even` or `odd`, found `{kw}`")),
            };
            loop {
                let (c, _) = self.ident()?;
                coords.push((c, parity));
                if !self.eat_sym(",") {
                    break;
                }
            }
            if !self.eat_sym(";") && !self.is_sym("}") {
                return err(self.pos(), format!("expected `;` or `}}`, found {}", self.peek()));
            }
        }
        self.expect_sym("}")?;
        let hatted = self.is_word("hatted");
        if hatted {
            self.bump();
        }
        Ok(StmtKind::Chart { name, coords, hatted })
    }

    fn mapping(&mut self) -> Result<Vec<(String, Expr)>, SyntaxError> {
        self.expect_sym("{")?;
        let mut out = Vec::new();
        while !self.is_sym("}") {
            let (name, _) = self.ident()?;
            self.expect_sym("->")?;
            out.push((name, self.expr()?));
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym("}")?;
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat_sym("+") {
                ExprKind::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.eat_sym("-") {
                ExprKind::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { kind, pos };
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat_sym("*") {
                ExprKind::Mul(Box::new(lhs), Box::new(self.unary()?))
            } else if self.eat_sym("/") {
                ExprKind::Div(Box::new(lhs), Box::new(self.unary()?))
            } else {
                return Ok(lhs);
            };
            lhs = Expr { kind, pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        if self.eat_sym("-") {
            return Ok(Expr { kind: ExprKind::Neg(Box::new(self.unary()?)), pos });
        }
        let base = self.atom()?;
        if self.eat_sym("^") {
            let e = self.exponent()?;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), e), pos });
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<BigInt, SyntaxError> {
        match self.bump() {
            (Tok::Int(n), _) => Ok(n),
            (t, p) => err(p, format!("expected an integer, found {t}")),
        }
    }

    /// `2`, `(-1)`, `(1/2)`, `(-3/2)`.
    fn exponent(&mut self) -> Result<BigRational, SyntaxError> {
        if let Tok::Int(_) = self.peek() {
            return Ok(BigRational::from_integer(self.int()?));
        }
        let open = self.expect_sym("(")?;
        let neg = self.eat_sym("-");
        let p = self.int()?;
        let q = if self.eat_sym("/") { self.int()? } else { BigInt::from(1) };
        self.expect_sym(")")?;
        if q == BigInt::from(0) {
            return err(open, "zero denominator in exponent");
        }
        let r = BigRational::new(p, q);
        Ok(if neg { -r } else { r })
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let (tok, pos) = self.bump();
        let kind = match tok {
            Tok::Int(n) => ExprKind::Int(n),
            Tok::Str(s) => ExprKind::Str(s),
            Tok::Sym("#") => ExprKind::Fiber(self.ident()?.0),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                return Ok(e);
            }
            Tok::Ident(name) if self.is_sym("(") => {
                self.bump();
                let mut groups = vec![Vec::new()];
                if !self.is_sym(")") {
                    loop {
                        groups.last_mut().expect("nonempty").push(self.expr()?);
                        if self.eat_sym(",") {
                            continue;
                        }
                        if self.eat_sym(";") {
                            groups.push(Vec::new());
                            continue;
                        }
                        break;
                    }
                }
                self.expect_sym(")")?;
                ExprKind::Call(name, groups)
            }
            Tok::Ident(name) => {
                if matches!(name.as_str(), "chart" | "let" | "change" | "inverse") {
                    return err(pos, format!("`{name}` is a keyword"));
                }
                ExprKind::Name(name)
            }
            t => return err(pos, format!("expected an expression, found {t}")),
        };
        Ok(Expr { kind, pos })
    }
}

pub fn parse(src: &str) -> Result<Script, SyntaxError> {
    let toks = lex(src)?;
    Parser { toks, at: 0 }.script()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statements_without_separators() {
        let s = parse("chart C { even x }  let s = x^2 * #x").unwrap();
        assert_eq!(s.statements.len(), 2);
        assert!(matches!(&s.statements[1].kind, StmtKind::Let { name, .. } if name == "s"));
    }

    #[test]
    fn exponents_and_calls() {
        let s = parse("rary(S; x, y) t^(-1/2) t^2").unwrap();
        match &s.statements[0].kind {
            StmtKind::Expr(Expr { kind: ExprKind::Call(n, g), .. }) => {
                assert_eq!(n, "rary");
                assert_eq!(g.len(), 2);
                assert_eq!(g[1].len(), 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            &s.statements[1].kind,
            StmtKind::Expr(Expr { kind: ExprKind::Pow(_, e), .. }) if *e == BigRational::new((-1).into(), 2.into())
        ));
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = parse("chart C { even x }\nlet y = (x + ").unwrap_err();
        assert_eq!(e.pos.line, 2);
        let e = parse("let a = x $ y").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 11 });
        assert!(parse("chart C { weird x }").is_err());
        assert!(parse("\"open").is_err());
    }

    #[test]
    fn change_with_inverse() {
        let s = parse("change U { x -> x + y^2, y -> y } inverse { x -> x - y^2, y -> y }").unwrap();
        match &s.statements[0].kind {
            StmtKind::Change { forward, inverse, .. } => {
                assert_eq!(forward.len(), 2);
                assert_eq!(inverse.as_ref().map(Vec::len), Some(2));
            }
            other => panic!("{other:?}"),
        }
    }
}
