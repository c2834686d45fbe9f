//! Lexer and recursive-descent parser for the DSL.
//!
//! Beyond the core grammar the parser accepts `#` line comments, integer powers `e^k`
//! and negative exponential rates `exp(-2*t)`; momentum and fibre names nest, as in
//! `P[d[x]]`.

use std::str::FromStr;

use oddjacobi::{Parity, Rational};

use crate::error::{DslError, Stage};
use crate::model::*;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Num(String),
    Sym(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("`{n}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn ident(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    /// An identifier, or `P[name]` / `d[name]` with no interior whitespace.
    fn name(&mut self) -> Result<String, DslError> {
        let start = self.pos();
        let head = self.ident();
        if head.is_empty() {
            return Err(DslError::new(Stage::Lexical, start, "expected a name"));
        }
        if (head == "P" || head == "d") && self.chars.peek() == Some(&'[') {
            self.bump();
            let inner = self.name()?;
            if self.bump() != Some(']') {
                return Err(DslError::new(Stage::Lexical, start, format!("unterminated `{head}[`")));
            }
            return Ok(format!("{head}[{inner}]"));
        }
        Ok(head)
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Pos)>, DslError> {
        let mut out = Vec::new();
        loop {
            let pos = self.pos();
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, pos));
                return Ok(out);
            };
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_ascii_alphabetic() || c == '_' {
                out.push((Tok::Name(self.name()?), pos));
            } else if c.is_ascii_digit() {
                let mut n = self.digits();
                if self.chars.peek() == Some(&'/') {
                    self.bump();
                    let d = self.digits();
                    if d.is_empty() {
                        return Err(DslError::new(Stage::Lexical, pos, format!("malformed rational `{n}/`")));
                    }
                    if d.bytes().all(|b| b == b'0') {
                        return Err(DslError::new(Stage::Lexical, pos, "zero denominator"));
                    }
                    n = format!("{n}/{d}");
                }
                out.push((Tok::Num(n), pos));
            } else if "{}();:,=+-*^".contains(c) {
                self.bump();
                out.push((Tok::Sym(c), pos));
            } else {
                return Err(DslError::new(Stage::Lexical, pos, format!("unexpected character `{c}`")));
            }
        }
    }
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

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> DslError {
        DslError::new(
            Stage::Syntax,
            self.pos(),
            format!("expected {expected}, found {}", self.peek().describe()),
        )
    }

    fn sym(&mut self, c: char) -> Result<Pos, DslError> {
        if *self.peek() == Tok::Sym(c) {
            Ok(self.next().1)
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, Pos), DslError> {
        match self.peek().clone() {
            Tok::Name(n) => {
                let p = self.next().1;
                Ok((n, p))
            }
            _ => Err(self.error(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, DslError> {
        match self.peek() {
            Tok::Name(n) if n == kw => Ok(self.next().1),
            _ => Err(self.error(&format!("`{kw}`"))),
        }
    }

    fn integer(&mut self) -> Result<i64, DslError> {
        let negative = self.eat('-');
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) if !n.contains('/') => {
                self.next();
                let v: i64 = n
                    .parse()
                    .map_err(|_| DslError::new(Stage::Lexical, pos, format!("integer `{n}` out of range")))?;
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.error("an integer")),
        }
    }

    fn model(&mut self) -> Result<Model, DslError> {
        let mut m = Model::default();
        loop {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Eof => return Ok(m),
                Tok::Name(kw) => match kw.as_str() {
                    "chart" => m.charts.push(self.chart()?),
                    "structure" => m.structures.push(self.structure()?),
                    "check" => {
                        self.next();
                        let (name, _) = self.name("a structure name")?;
                        self.sym(';')?;
                        m.directives.push(Directive::Check { name, pos });
                    }
                    "bracket" => {
                        self.next();
                        let (name, _) = self.name("a structure name")?;
                        self.sym('(')?;
                        let f = self.expr()?;
                        self.sym(',')?;
                        let g = self.expr()?;
                        self.sym(')')?;
                        self.sym(';')?;
                        m.directives.push(Directive::Bracket { name, f, g, pos });
                    }
                    "convert" => {
                        self.next();
                        let (name, _) = self.name("a structure name")?;
                        self.keyword("via")?;
                        let (via, _) = self.name("a conversion name")?;
                        self.sym(';')?;
                        m.directives.push(Directive::Convert { name, via, pos });
                    }
                    _ => return Err(self.error("`chart`, `structure`, `check`, `bracket` or `convert`")),
                },
                _ => return Err(self.error("`chart`, `structure`, `check`, `bracket` or `convert`")),
            }
        }
    }

    fn chart(&mut self) -> Result<ChartDecl, DslError> {
        let pos = self.keyword("chart")?;
        let (name, _) = self.name("a chart name")?;
        self.sym('{')?;
        let mut coords = Vec::new();
        while !self.eat('}') {
            let cpos = self.keyword("coord")?;
            let (cname, _) = self.name("a coordinate name")?;
            self.sym(':')?;
            let parity = match self.peek() {
                Tok::Name(p) if p == "even" => Parity::Even,
                Tok::Name(p) if p == "odd" => Parity::Odd,
                _ => return Err(self.error("`even` or `odd`")),
            };
            self.next();
            let weight = if matches!(self.peek(), Tok::Name(w) if w == "weight") {
                self.next();
                self.integer()?
            } else {
                0
            };
            self.sym(';')?;
            coords.push(CoordDecl {
                name: cname,
                parity,
                weight,
                pos: cpos,
            });
        }
        Ok(ChartDecl { name, coords, pos })
    }

    fn structure(&mut self) -> Result<StructureDecl, DslError> {
        let pos = self.keyword("structure")?;
        let (kw, kpos) = self.name("a structure kind")?;
        let kind = Kind::from_keyword(&kw).ok_or_else(|| {
            let known: Vec<_> = Kind::ALL.iter().map(|k| k.keyword()).collect();
            DslError::new(
                Stage::Syntax,
                kpos,
                format!("unknown structure kind `{kw}` (known: {})", known.join(", ")),
            )
        })?;
        let (name, _) = self.name("a structure name")?;
        self.keyword("on")?;
        let (chart, _) = self.name("a chart name")?;
        self.sym('{')?;
        let mut fields = Vec::new();
        while !self.eat('}') {
            let (fname, fpos) = self.name("a field name")?;
            self.sym('=')?;
            let value = self.expr()?;
            self.sym(';')?;
            fields.push(Field {
                name: fname,
                value,
                pos: fpos,
            });
        }
        Ok(StructureDecl {
            kind,
            name,
            chart,
            fields,
            pos,
        })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => Op::Add,
                Tok::Sym('-') => Op::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.next().1;
            let rhs = self.term()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Sym('*') {
            let pos = self.next().1;
            let rhs = self.unary()?;
            lhs = Expr::new(ExprKind::Binary(Op::Mul, Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if *self.peek() == Tok::Sym('-') {
            let pos = self.next().1;
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            let pos = self.next().1;
            let k = self.integer()?;
            let k = u32::try_from(k).map_err(|_| DslError::new(Stage::Syntax, pos, "power must be a non-negative integer"))?;
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), k), pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.next();
                let r = Rational::from_str(&n)
                    .map_err(|_| DslError::new(Stage::Lexical, pos, format!("malformed rational `{n}`")))?;
                Ok(Expr::new(ExprKind::Num(r), pos))
            }
            Tok::Name(n) if n == "exp" && self.toks[self.at + 1].0 == Tok::Sym('(') => {
                self.next();
                self.sym('(')?;
                let rate = self.integer()?;
                self.sym('*')?;
                let (base, _) = self.name("a coordinate name")?;
                self.sym(')')?;
                Ok(Expr::new(ExprKind::Exp { rate, base }, pos))
            }
            Tok::Name(n) => {
                self.next();
                Ok(Expr::new(ExprKind::Name(n), pos))
            }
            Tok::Sym('(') => {
                self.next();
                let e = self.expr()?;
                self.sym(')')?;
                Ok(e)
            }
            _ => Err(self.error("an expression")),
        }
    }
}

fn tokens(source: &str) -> Result<Vec<(Tok, Pos)>, DslError> {
    Lexer {
        chars: source.chars().peekable(),
        line: 1,
        col: 1,
    }
    .tokens()
}

/// Parse a whole DSL file.
pub fn parse(source: &str) -> Result<Model, DslError> {
    Parser {
        toks: tokens(source)?,
        at: 0,
    }
    .model()
}

/// Parse a single expression, such as a bracket argument given on the command line.
pub fn parse_expr(source: &str) -> Result<Expr, DslError> {
    let mut p = Parser {
        toks: tokens(source)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of expression"));
    }
    Ok(e)
}
