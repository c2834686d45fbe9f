//! Plain data files describing algebroid structure functions.
//!
//! ```text
//! # comments run to the end of a line
//! base 1                  # base dimension: coordinates x1..xn, even, weight 0
//! fibre e1 even           # one line per fibre: name and parity of the section
//! fibre e2 even
//! anchor e2 x1 = 1        # Q_α^A
//! bracket e2 e1 e2 = 1    # Q^γ_βα, written γ β α
//! cocycle e1 = 1          # Q_α
//! ```
//!
//! Coefficients are DSL expressions on the base chart; entries not given are zero. A
//! bracket entry fixes its graded-symmetric partner `Q^γ_αβ` unless that is given too.

use std::sync::Arc;

use oddjacobi::algebroid::{AlgebroidData, Fibre};
use oddjacobi::{make_chart, Chart, Parity, Poly};

use crate::elab;
use crate::error::{DslError, Stage};
use crate::model::Pos;
use crate::parse::parse_expr;

fn at(line: usize, col: usize) -> Pos {
    Pos { line, col }
}

struct Builder {
    base: Option<Arc<Chart>>,
    fibres: Vec<(String, Parity)>,
    anchor: Vec<(usize, usize, Poly)>,
    brackets: Vec<(usize, usize, usize, Poly)>,
    cocycle: Vec<(usize, Poly)>,
}

impl Builder {
    fn base(&self, line: usize) -> Result<&Arc<Chart>, DslError> {
        self.base
            .as_ref()
            .ok_or_else(|| DslError::new(Stage::Syntax, at(line, 1), "`base` must come first"))
    }

    fn fibre(&self, name: &str, line: usize) -> Result<usize, DslError> {
        self.fibres
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| DslError::new(Stage::Resolution, at(line, 1), format!("unknown fibre `{name}`")))
    }
}

/// Parse a data file into algebroid data.
pub fn parse_algebroid(source: &str) -> Result<AlgebroidData, DslError> {
    let mut b = Builder {
        base: None,
        fibres: Vec::new(),
        anchor: Vec::new(),
        brackets: Vec::new(),
        cocycle: Vec::new(),
    };
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        let (head, value) = match text.split_once('=') {
            Some((h, v)) => (h, Some((v, h.len() + 2))),
            None => (text, None),
        };
        let words: Vec<&str> = head.split_whitespace().collect();
        let syntax = |msg: &str| DslError::new(Stage::Syntax, at(line, 1), msg.to_string());
        let coefficient = |b: &Builder| -> Result<Poly, DslError> {
            let (v, col) = value.ok_or_else(|| syntax("expected `= expression`"))?;
            let shift = |e: DslError| DslError::new(e.stage, at(line, col + e.col() - 1), e.message);
            let e = parse_expr(v).map_err(shift)?;
            elab::expr(b.base(line)?, &e).map(|(p, _)| p).map_err(shift)
        };
        match words.as_slice() {
            ["base", n] if value.is_none() => {
                if b.base.is_some() {
                    return Err(syntax("`base` given twice"));
                }
                let n: usize = n.parse().map_err(|_| syntax("base dimension must be a number"))?;
                let chart = make_chart((1..=n).map(|a| (format!("x{a}"), Parity::Even, 0)))
                    .map_err(|e| DslError::new(Stage::Structure, at(line, 1), e.to_string()))?;
                b.base = Some(chart);
            }
            ["fibre", name, parity] if value.is_none() => {
                b.base(line)?;
                if !b.anchor.is_empty() || !b.brackets.is_empty() || !b.cocycle.is_empty() {
                    return Err(syntax("fibres must be listed before coefficients"));
                }
                let parity = match *parity {
                    "even" => Parity::Even,
                    "odd" => Parity::Odd,
                    _ => return Err(syntax("fibre parity must be `even` or `odd`")),
                };
                if b.fibre(name, line).is_ok() {
                    return Err(DslError::new(Stage::Resolution, at(line, 1), format!("fibre `{name}` given twice")));
                }
                b.fibres.push((name.to_string(), parity));
            }
            ["anchor", alpha, x] => {
                let a = b.fibre(alpha, line)?;
                let base = b.base(line)?;
                let xi = base
                    .index_of(x)
                    .map_err(|_| DslError::new(Stage::Resolution, at(line, 1), format!("unknown base coordinate `{x}`")))?;
                let c = coefficient(&b)?;
                b.anchor.push((a, xi, c));
            }
            ["bracket", gamma, beta, alpha] => {
                let (g, be, a) = (b.fibre(gamma, line)?, b.fibre(beta, line)?, b.fibre(alpha, line)?);
                let c = coefficient(&b)?;
                b.brackets.push((g, be, a, c));
            }
            ["cocycle", alpha] => {
                let a = b.fibre(alpha, line)?;
                let c = coefficient(&b)?;
                b.cocycle.push((a, c));
            }
            _ => return Err(syntax("expected `base`, `fibre`, `anchor`, `bracket` or `cocycle`")),
        }
    }
    let base = b.base.clone().ok_or_else(|| DslError::new(Stage::Syntax, at(1, 1), "missing `base` line"))?;
    let (r, n) = (b.fibres.len(), base.len());
    let zero = Poly::zero(&base);
    let mut anchor = vec![vec![zero.clone(); n]; r];
    let mut brackets = vec![vec![vec![zero.clone(); r]; r]; r];
    let mut cocycle = vec![zero.clone(); r];
    for (a, x, c) in b.anchor {
        anchor[a][x] = c;
    }
    for (a, c) in b.cocycle {
        cocycle[a] = c;
    }
    let given: Vec<(usize, usize, usize)> = b.brackets.iter().map(|(g, be, a, _)| (*g, *be, *a)).collect();
    for (g, be, a, c) in b.brackets {
        if !given.contains(&(g, a, be)) {
            let sign = b.fibres[a].1.flip().koszul(b.fibres[be].1.flip());
            brackets[g][a][be] = c.scale_int(sign);
        }
        brackets[g][be][a] = c;
    }
    let fibres = b
        .fibres
        .into_iter()
        .map(|(name, parity)| Fibre::new(parity, name.clone(), format!("xi[{name}]")))
        .collect();
    AlgebroidData::new(&base, fibres, anchor, brackets, cocycle)
        .map_err(|e| DslError::new(Stage::Structure, at(1, 1), e.to_string()))
}
