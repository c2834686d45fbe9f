//! Elaboration: names resolve against charts, expressions become exact polynomials and
//! structures are built with the core constructors.
//!
//! Every expression carries a static parity. `+` and `-` demand equal parities on both
//! sides; there is no implicit coercion, not even for literal zero.

use std::collections::HashMap;
use std::sync::Arc;

use oddjacobi::algebroid::{decode_algebroid, AlgebroidData};
use oddjacobi::constructions::{ExactQSData, QSData, QuasiQData};
use oddjacobi::phase::unsymbol;
use oddjacobi::{make_chart, Chart, OddJacobiStructure, Parity, Poly};

use crate::error::{DslError, Stage};
use crate::model::*;

#[derive(Debug, Clone)]
pub enum Structure {
    /// `oddjacobi`, `schouten` and `qmanifold` all elaborate to an odd Jacobi structure.
    Jacobi(OddJacobiStructure),
    QuasiQ(QuasiQData),
    ExactQs(ExactQSData),
    Algebroid { jacobi: OddJacobiStructure, data: AlgebroidData },
}

impl Structure {
    pub fn jacobi(&self) -> Option<&OddJacobiStructure> {
        match self {
            Structure::Jacobi(j) | Structure::Algebroid { jacobi: j, .. } => Some(j),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bound {
    pub name: String,
    pub kind: Kind,
    pub base: Arc<Chart>,
    pub value: Structure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conversion {
    Schoutenize,
    Jacobi,
    Homological,
    QuasiQ,
    Lie,
    Sections,
    Extend,
}

impl Conversion {
    pub fn name(self) -> &'static str {
        match self {
            Conversion::Schoutenize => "schoutenize",
            Conversion::Jacobi => "jacobi",
            Conversion::Homological => "homological",
            Conversion::QuasiQ => "quasiq",
            Conversion::Lie => "lie",
            Conversion::Sections => "sections",
            Conversion::Extend => "extend",
        }
    }

    /// Conversions available for a structure kind.
    pub fn for_kind(kind: Kind) -> &'static [Conversion] {
        use Conversion::*;
        match kind {
            Kind::OddJacobi | Kind::Schouten | Kind::QManifold => &[Schoutenize],
            Kind::ExactQs => &[Jacobi],
            Kind::QuasiQ => &[Homological],
            Kind::Algebroid => &[Schoutenize, QuasiQ, Lie, Sections, Extend],
        }
    }
}

#[derive(Debug, Clone)]
pub enum Step {
    Check { target: usize },
    Bracket { target: usize, f: Poly, g: Poly, label: String },
    Convert { target: usize, via: Conversion },
}

#[derive(Debug, Clone)]
pub struct Program {
    pub charts: HashMap<String, Arc<Chart>>,
    pub structures: Vec<Bound>,
    pub steps: Vec<Step>,
}

impl Program {
    pub fn structure(&self, name: &str) -> Option<&Bound> {
        self.structures.iter().find(|b| b.name == name)
    }
}

/// Elaborate `e` on `chart`, returning the polynomial and its static parity.
pub fn expr(chart: &Arc<Chart>, e: &Expr) -> Result<(Poly, Parity), DslError> {
    let at = |stage, msg: String| DslError::new(stage, e.pos, msg);
    match &e.kind {
        ExprKind::Num(r) => Ok((Poly::constant(chart, r.clone()), Parity::Even)),
        ExprKind::Name(n) => match chart.index_of(n) {
            Ok(i) => Ok((Poly::generator(chart, i), chart.parity(i))),
            Err(_) if n.starts_with("P[") && !chart.has_momenta() => Err(at(
                Stage::Resolution,
                format!("momentum `{n}` is not allowed in a function on the base"),
            )),
            Err(_) => Err(at(Stage::Resolution, format!("unknown name `{n}`"))),
        },
        ExprKind::Exp { rate, base } => {
            let i = chart
                .index_of(base)
                .map_err(|_| at(Stage::Resolution, format!("unknown name `{base}`")))?;
            if chart.parity(i).is_odd() {
                return Err(at(Stage::Parity, format!("exponential of odd coordinate `{base}`")));
            }
            let p = Poly::exp_tag(chart, base, *rate).map_err(|err| at(Stage::Structure, err.to_string()))?;
            Ok((p, Parity::Even))
        }
        ExprKind::Neg(inner) => {
            let (p, par) = expr(chart, inner)?;
            Ok((-p, par))
        }
        ExprKind::Pow(inner, k) => {
            let (p, par) = expr(chart, inner)?;
            let par = if *k % 2 == 0 { Parity::Even } else { par };
            Ok((p.pow(*k), par))
        }
        ExprKind::Binary(op, l, r) => {
            let (a, pa) = expr(chart, l)?;
            let (b, pb) = expr(chart, r)?;
            match op {
                Op::Mul => Ok((&a * &b, pa + pb)),
                Op::Add | Op::Sub if pa != pb => Err(at(
                    Stage::Parity,
                    format!("operands of `{}` have parities {} and {}", op.symbol(), word(pa), word(pb)),
                )),
                Op::Add => Ok((&a + &b, pa)),
                Op::Sub => Ok((&a - &b, pa)),
            }
        }
    }
}

fn word(p: Parity) -> &'static str {
    if p.is_odd() {
        "odd"
    } else {
        "even"
    }
}

fn chart_of(decl: &ChartDecl) -> Result<Arc<Chart>, DslError> {
    let mut seen = HashMap::new();
    for c in &decl.coords {
        if seen.insert(c.name.as_str(), ()).is_some() {
            return Err(DslError::new(
                Stage::Resolution,
                c.pos,
                format!("coordinate `{}` declared twice in chart `{}`", c.name, decl.name),
            ));
        }
    }
    make_chart(decl.coords.iter().map(|c| (c.name.clone(), c.parity, c.weight)))
        .map_err(|e| DslError::new(Stage::Structure, decl.pos, e.to_string()))
}

struct Fields<'a> {
    decl: &'a StructureDecl,
    base: Arc<Chart>,
    phase: Arc<Chart>,
    values: HashMap<&'a str, Poly>,
}

impl<'a> Fields<'a> {
    /// Elaborate the declared fields. `allowed` lists `(name, on_phase)`.
    fn new(decl: &'a StructureDecl, base: Arc<Chart>, allowed: &[(&str, bool)]) -> Result<Self, DslError> {
        let phase = base
            .cotangent()
            .map_err(|e| DslError::new(Stage::Structure, decl.pos, e.to_string()))?;
        let mut values = HashMap::new();
        for f in &decl.fields {
            let Some(&(_, on_phase)) = allowed.iter().find(|(n, _)| *n == f.name) else {
                let names: Vec<_> = allowed.iter().map(|(n, _)| *n).collect();
                return Err(DslError::new(
                    Stage::Resolution,
                    f.pos,
                    format!(
                        "`{}` is not a field of {} structures (fields: {})",
                        f.name,
                        decl.kind.keyword(),
                        names.join(", ")
                    ),
                ));
            };
            let chart = if on_phase { &phase } else { &base };
            let (p, _) = expr(chart, &f.value)?;
            if values.insert(f.name.as_str(), p).is_some() {
                return Err(DslError::new(Stage::Resolution, f.pos, format!("field `{}` given twice", f.name)));
            }
        }
        Ok(Fields {
            decl,
            base,
            phase,
            values,
        })
    }

    fn required(&self, name: &str) -> Result<Poly, DslError> {
        self.values.get(name).cloned().ok_or_else(|| {
            DslError::new(
                Stage::Resolution,
                self.decl.pos,
                format!("structure `{}` is missing field `{name}`", self.decl.name),
            )
        })
    }

    fn optional(&self, name: &str) -> Poly {
        self.values.get(name).cloned().unwrap_or_else(|| Poly::zero(&self.phase))
    }

    fn fail(&self, err: oddjacobi::Error) -> DslError {
        DslError::new(Stage::Structure, self.decl.pos, format!("structure `{}`: {err}", self.decl.name))
    }
}

fn structure(decl: &StructureDecl, base: Arc<Chart>) -> Result<Structure, DslError> {
    let allowed: &[(&str, bool)] = match decl.kind {
        Kind::OddJacobi | Kind::Algebroid => &[("S", true), ("Q", true)],
        Kind::Schouten => &[("S", true)],
        Kind::QManifold => &[("Q", true)],
        Kind::QuasiQ => &[("D", true), ("q", false)],
        Kind::ExactQs => &[("Sbar", true), ("Qbar", true), ("E", true)],
    };
    let f = Fields::new(decl, base, allowed)?;
    let jacobi = |s: Poly, q: Poly| OddJacobiStructure::new(&f.base, s, q).map_err(|e| f.fail(e));
    match decl.kind {
        Kind::OddJacobi => Ok(Structure::Jacobi(jacobi(f.required("S")?, f.required("Q")?)?)),
        Kind::Schouten => Ok(Structure::Jacobi(jacobi(f.required("S")?, Poly::zero(&f.phase))?)),
        Kind::QManifold => Ok(Structure::Jacobi(jacobi(Poly::zero(&f.phase), f.required("Q")?)?)),
        Kind::Algebroid => {
            let j = jacobi(f.required("S")?, f.required("Q")?)?;
            let data = decode_algebroid(&j).map_err(|e| f.fail(e))?;
            Ok(Structure::Algebroid { jacobi: j, data })
        }
        Kind::QuasiQ => {
            let d = unsymbol(&f.required("D")?).map_err(|e| f.fail(e))?;
            let q = f.required("q")?;
            Ok(Structure::QuasiQ(QuasiQData::new(d, q).map_err(|e| f.fail(e))?))
        }
        Kind::ExactQs => {
            let qs = QSData::new(&f.base, f.required("Sbar")?, f.optional("Qbar")).map_err(|e| f.fail(e))?;
            let e = unsymbol(&f.required("E")?).map_err(|e| f.fail(e))?;
            Ok(Structure::ExactQs(ExactQSData::new(qs, e).map_err(|e| f.fail(e))?))
        }
    }
}

/// Resolve and build everything in `model`. Charts and structures live in separate
/// namespaces.
pub fn elaborate(model: &Model) -> Result<Program, DslError> {
    let mut charts = HashMap::new();
    for c in &model.charts {
        if charts.insert(c.name.clone(), chart_of(c)?).is_some() {
            return Err(DslError::new(Stage::Resolution, c.pos, format!("chart `{}` declared twice", c.name)));
        }
    }
    let mut structures: Vec<Bound> = Vec::new();
    for s in &model.structures {
        if structures.iter().any(|b| b.name == s.name) {
            return Err(DslError::new(Stage::Resolution, s.pos, format!("structure `{}` declared twice", s.name)));
        }
        let base = charts
            .get(&s.chart)
            .cloned()
            .ok_or_else(|| DslError::new(Stage::Resolution, s.pos, format!("unknown chart `{}`", s.chart)))?;
        let value = structure(s, base.clone())?;
        structures.push(Bound {
            name: s.name.clone(),
            kind: s.kind,
            base,
            value,
        });
    }
    let mut steps = Vec::new();
    for d in &model.directives {
        let target = structures
            .iter()
            .position(|b| b.name == d.target())
            .ok_or_else(|| DslError::new(Stage::Resolution, d.pos(), format!("unknown structure `{}`", d.target())))?;
        let bound = &structures[target];
        steps.push(match d {
            Directive::Check { .. } => Step::Check { target },
            Directive::Bracket { f, g, pos, .. } => {
                if bound.value.jacobi().is_none() {
                    return Err(DslError::new(
                        Stage::Resolution,
                        *pos,
                        format!("`{}` is a {} structure and has no bracket", bound.name, bound.kind.keyword()),
                    ));
                }
                let label = format!("[[{f}, {g}]]");
                let (f, _) = expr(&bound.base, f)?;
                let (g, _) = expr(&bound.base, g)?;
                Step::Bracket { target, f, g, label }
            }
            Directive::Convert { via, pos, .. } => {
                let options = Conversion::for_kind(bound.kind);
                let conv = options.iter().find(|c| c.name() == via).copied().ok_or_else(|| {
                    let names: Vec<_> = options.iter().map(|c| c.name()).collect();
                    DslError::new(
                        Stage::Resolution,
                        *pos,
                        format!(
                            "no conversion `{via}` for {} structures (available: {})",
                            bound.kind.keyword(),
                            names.join(", ")
                        ),
                    )
                })?;
                Step::Convert { target, via: conv }
            }
        });
    }
    Ok(Program {
        charts,
        structures,
        steps,
    })
}
