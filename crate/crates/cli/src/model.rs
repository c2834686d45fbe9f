//! Syntax tree of a DSL file and its rendering back to source text.

use std::fmt;

use oddjacobi::{Parity, Rational};

/// A 1-based source position. Positions are metadata: they never take part in equality,
/// so a model compares equal to its own re-parsed rendering.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(Rational),
    /// A coordinate, momentum `P[x]` or fibre `d[x]`, spelled as written.
    Name(String),
    Exp { rate: i64, base: String },
    Neg(Box<Expr>),
    Binary(Op, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(Op::Add | Op::Sub, ..) => 1,
            ExprKind::Binary(Op::Mul, ..) => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }

    fn render_at(&self, min: u8, out: &mut String) {
        let paren = self.precedence() < min;
        if paren {
            out.push('(');
        }
        match &self.kind {
            ExprKind::Num(r) => out.push_str(&r.to_string()),
            ExprKind::Name(n) => out.push_str(n),
            ExprKind::Exp { rate, base } => out.push_str(&format!("exp({rate}*{base})")),
            ExprKind::Neg(e) => {
                out.push('-');
                e.render_at(3, out);
            }
            ExprKind::Binary(op, l, r) => {
                let p = self.precedence();
                l.render_at(p, out);
                match op {
                    Op::Mul => out.push('*'),
                    _ => {
                        out.push(' ');
                        out.push_str(op.symbol());
                        out.push(' ');
                    }
                }
                // binary operators associate to the left
                r.render_at(p + 1, out);
            }
            ExprKind::Pow(e, k) => {
                e.render_at(5, out);
                out.push_str(&format!("^{k}"));
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render_at(0, &mut out);
        f.write_str(&out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordDecl {
    pub name: String,
    pub parity: Parity,
    pub weight: i64,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartDecl {
    pub name: String,
    pub coords: Vec<CoordDecl>,
    pub pos: Pos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    OddJacobi,
    Schouten,
    QManifold,
    QuasiQ,
    ExactQs,
    Algebroid,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::OddJacobi,
        Kind::Schouten,
        Kind::QManifold,
        Kind::QuasiQ,
        Kind::ExactQs,
        Kind::Algebroid,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Kind::OddJacobi => "oddjacobi",
            Kind::Schouten => "schouten",
            Kind::QManifold => "qmanifold",
            Kind::QuasiQ => "quasiq",
            Kind::ExactQs => "exactqs",
            Kind::Algebroid => "algebroid",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub name: String,
    pub value: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureDecl {
    pub kind: Kind,
    pub name: String,
    pub chart: String,
    pub fields: Vec<Field>,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Check { name: String, pos: Pos },
    Bracket { name: String, f: Expr, g: Expr, pos: Pos },
    Convert { name: String, via: String, pos: Pos },
}

impl Directive {
    pub fn target(&self) -> &str {
        match self {
            Directive::Check { name, .. } | Directive::Bracket { name, .. } | Directive::Convert { name, .. } => name,
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            Directive::Check { pos, .. } | Directive::Bracket { pos, .. } | Directive::Convert { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Model {
    pub charts: Vec<ChartDecl>,
    pub structures: Vec<StructureDecl>,
    pub directives: Vec<Directive>,
}

impl Model {
    /// Source text that parses back to an equal model: charts, then structures, then
    /// directives.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.charts {
            out.push_str(&format!("chart {} {{\n", c.name));
            for d in &c.coords {
                let parity = if d.parity.is_odd() { "odd" } else { "even" };
                out.push_str(&format!("  coord {} : {parity}", d.name));
                if d.weight != 0 {
                    out.push_str(&format!(" weight {}", d.weight));
                }
                out.push_str(";\n");
            }
            out.push_str("}\n\n");
        }
        for s in &self.structures {
            out.push_str(&format!("structure {} {} on {} {{\n", s.kind.keyword(), s.name, s.chart));
            for f in &s.fields {
                out.push_str(&format!("  {} = {};\n", f.name, f.value));
            }
            out.push_str("}\n\n");
        }
        for d in &self.directives {
            match d {
                Directive::Check { name, .. } => out.push_str(&format!("check {name};\n")),
                Directive::Bracket { name, f, g, .. } => out.push_str(&format!("bracket {name}({f}, {g});\n")),
                Directive::Convert { name, via, .. } => out.push_str(&format!("convert {name} via {via};\n")),
            }
        }
        out
    }
}
