//! Built-in example models, as DSL source.

use std::fmt;

use oddjacobi::algebroid::{build_jacobi_algebroid, extend_lie_to_jacobi, tangent_algebroid, AlgebroidData};
use oddjacobi::{make_chart, rational, Chart, OddJacobiStructure, Parity, Poly};

use crate::error::DslError;
use crate::model::{Kind, Model};
use crate::parse::parse;

pub const NAMES: [&str; 13] = [
    "superline",
    "odd_symplectic",
    "lie_schouten",
    "de_rham",
    "lie_algebra_bracket",
    "odd_contact",
    "exact_qs_1",
    "flat_connection",
    "lie_algebra_cocycle",
    "tangent_extension",
    "algebroid_2dim",
    "non_jacobi_algebroid",
    "flat_connection_open",
];

/// Entries whose check directive is expected to fail.
pub const NEGATIVE: [&str; 2] = ["non_jacobi_algebroid", "flat_connection_open"];

#[derive(Debug, Clone)]
pub enum CatalogError {
    Unknown(String),
    BadParameter(String),
    Source(DslError),
}

impl fmt::Display for CatalogError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogError::Unknown(name) => {
                write!(f, "unknown example `{name}`; available: {}", NAMES.join(", "))
            }
            CatalogError::BadParameter(msg) => f.write_str(msg),
            CatalogError::Source(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CatalogError {}

/// `[e1,e2] = e2` as `c[γ][α][β] = Q^γ_αβ`.
pub fn affine_line_constants() -> Vec<Vec<Vec<i64>>> {
    vec![vec![vec![0, 0], vec![0, 0]], vec![vec![0, 1], vec![-1, 0]]]
}

/// Constants whose Jacobiator does not vanish.
pub fn non_jacobi_constants() -> Vec<Vec<Vec<i64>>> {
    let mut c = vec![vec![vec![0i64; 3]; 3]; 3];
    for (g, b, a) in [(2, 0, 1), (2, 1, 2), (0, 0, 2)] {
        c[g][b][a] = 1;
        c[g][a][b] = -1;
    }
    c
}

fn chart_text(name: &str, chart: &Chart) -> String {
    let mut out = format!("chart {name} {{\n");
    for g in chart.generators() {
        let parity = if g.parity.is_odd() { "odd" } else { "even" };
        out.push_str(&format!("  coord {} : {parity}", g.name));
        if g.weight != 0 {
            out.push_str(&format!(" weight {}", g.weight));
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

fn structure_text(kind: Kind, name: &str, chart: &str, fields: &[(&str, &Poly)]) -> String {
    let mut out = format!("structure {} {name} on {chart} {{\n", kind.keyword());
    for (f, p) in fields {
        out.push_str(&format!("  {f} = {p};\n"));
    }
    out.push_str("}\n");
    out
}

fn jacobi_text(comment: &str, kind: Kind, name: &str, chart: &str, j: &OddJacobiStructure, directives: &[&str]) -> String {
    let mut out = format!("# {comment}\n{}\n", chart_text(chart, j.base()));
    out.push_str(&structure_text(kind, name, chart, &[("S", j.s()), ("Q", j.q())]));
    out.push('\n');
    for d in directives {
        out.push_str(&format!("{d}\n"));
    }
    out
}

const SUPERLINE: &str = "\
# the canonical odd Jacobi structure on the superline R^{1|1}
chart line {
  coord t : even;
  coord xi : odd;
}

structure oddjacobi superline on line {
  S = -P[xi]*P[t];
  Q = -P[xi];
}

check superline;
bracket superline(t, xi);
convert superline via schoutenize;
";

const ODD_SYMPLECTIC: &str = "\
# the canonical odd symplectic structure on the anticotangent bundle of the plane
chart forms {
  coord x1 : even;
  coord x2 : even;
  coord d[x1] : odd weight 1;
  coord d[x2] : odd weight 1;
}

structure schouten odd_symplectic on forms {
  S = P[d[x1]]*P[x1] + P[d[x2]]*P[x2];
}

check odd_symplectic;
bracket odd_symplectic(x1*x2, d[x1]*d[x2]);
convert odd_symplectic via schoutenize;
";

const EXACT_QS_1: &str = "\
# an exact QS-manifold on the anticotangent bundle of the line
chart line {
  coord x1 : even;
  coord xs1 : odd weight 1;
}

structure exactqs exact_qs_1 on line {
  Sbar = P[xs1]*P[x1];
  Qbar = P[xs1];
  E = xs1*P[xs1];
}

check exact_qs_1;
convert exact_qs_1 via jacobi;
";

/// The Schouten structure `S = 1/2 (-1)^(α+β) π^α π^β Q^γ_αβ η_γ` on `Πg*` for an
/// even Lie algebra with `constants[γ][α][β] = Q^γ_αβ`.
pub fn lie_schouten(constants: &[Vec<Vec<i64>>]) -> String {
    let r = constants.len();
    let chart = make_chart((1..=r).map(|i| (format!("eta{i}"), Parity::Odd, 1))).expect("fresh names");
    let ph = chart.cotangent().expect("plain chart");
    let var = |n: String| Poly::var(&ph, &n).expect("declared");
    let mut s = Poly::zero(&ph);
    for (g, m) in constants.iter().enumerate() {
        for (a, row) in m.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                let term = &(&var(format!("P[eta{}]", a + 1)) * &var(format!("P[eta{}]", b + 1))) * &var(format!("eta{}", g + 1));
                s = &s + &term.scale(&rational(c, 2));
            }
        }
    }
    let mut out = format!("# the Lie-Schouten structure of a {r}-dimensional Lie algebra\n{}\n", chart_text("dual", &chart));
    out.push_str(&structure_text(Kind::Schouten, "lie_schouten", "dual", &[("S", &s)]));
    out.push_str("\ncheck lie_schouten;\nbracket lie_schouten(eta1, eta2);\nconvert lie_schouten via schoutenize;\n");
    out
}

/// `Q = 1/2 ξ^α ξ^β Q^γ_βα ∂_γ` on `Πg`, written as its symbol.
pub fn lie_algebra_bracket(constants: &[Vec<Vec<i64>>]) -> String {
    let r = constants.len();
    let chart = make_chart((1..=r).map(|i| (format!("xi{i}"), Parity::Odd, 1))).expect("fresh names");
    let ph = chart.cotangent().expect("plain chart");
    let var = |n: String| Poly::var(&ph, &n).expect("declared");
    let mut q = Poly::zero(&ph);
    for (g, m) in constants.iter().enumerate() {
        for (b, row) in m.iter().enumerate() {
            for (a, &c) in row.iter().enumerate() {
                let term = &(&var(format!("xi{}", a + 1)) * &var(format!("xi{}", b + 1))) * &var(format!("P[xi{}]", g + 1));
                q = &q + &term.scale(&rational(c, 2));
            }
        }
    }
    let mut out = format!("# the homological field of a {r}-dimensional Lie algebra\n{}\n", chart_text("shifted", &chart));
    out.push_str(&structure_text(Kind::QManifold, "lie_algebra_bracket", "shifted", &[("Q", &q)]));
    out.push_str("\ncheck lie_algebra_bracket;\nbracket lie_algebra_bracket(xi1, xi2);\nconvert lie_algebra_bracket via schoutenize;\n");
    out
}

/// The de Rham differential of `R^n` as a Q-manifold.
pub fn de_rham(n: usize) -> String {
    let mut out = format!("# the de Rham differential on the anticotangent bundle of R^{n}\nchart forms {{\n");
    for a in 1..=n {
        out.push_str(&format!("  coord x{a} : even;\n"));
    }
    for a in 1..=n {
        out.push_str(&format!("  coord d[x{a}] : odd weight 1;\n"));
    }
    out.push_str("}\n\nstructure qmanifold de_rham on forms {\n  Q = ");
    let terms: Vec<_> = (1..=n).map(|a| format!("d[x{a}]*P[x{a}]")).collect();
    out.push_str(&terms.join(" + "));
    out.push_str(";\n}\n\ncheck de_rham;\nbracket de_rham(x1^2, d[x1]);\n");
    out
}

/// Odd contact structure on `ΠT*R^n x R^{0|1}`: `S = p_*^a (p_a + x*_a π)`, `Q = -π`.
pub fn odd_contact(n: usize) -> String {
    let mut out = format!("# the odd contact structure on the anticotangent bundle of R^{n} times R^{{0|1}}\nchart contact {{\n");
    for a in 1..=n {
        out.push_str(&format!("  coord x{a} : even;\n"));
    }
    for a in 1..=n {
        out.push_str(&format!("  coord xs{a} : odd weight 1;\n"));
    }
    out.push_str("  coord tau : odd weight 1;\n}\n\nstructure oddjacobi odd_contact on contact {\n  S = ");
    let terms: Vec<_> = (1..=n).map(|a| format!("P[xs{a}]*(P[x{a}] + xs{a}*P[tau])")).collect();
    out.push_str(&terms.join(" + "));
    out.push_str(";\n  Q = -P[tau];\n}\n\ncheck odd_contact;\nbracket odd_contact(x1, xs1);\nbracket odd_contact(tau, tau);\nconvert odd_contact via schoutenize;\n");
    out
}

/// The quasi Q-manifold `D = d + 𝔸 Ξ`, `q = 𝔸` of an abelian connection
/// `𝔸 = d[x_a] A_a` on `R^n`, components given as DSL expressions in `x1..xn`.
pub fn flat_connection(name: &str, components: &[&str]) -> String {
    let n = components.len();
    let mut out = format!("# the abelian connection A = {}\nchart forms {{\n", connection_text(components));
    for a in 1..=n {
        out.push_str(&format!("  coord x{a} : even;\n"));
    }
    for a in 1..=n {
        out.push_str(&format!("  coord d[x{a}] : odd weight 1;\n"));
    }
    let d: Vec<_> = (1..=n).map(|a| format!("d[x{a}]*P[x{a}]")).collect();
    let euler: Vec<_> = (1..=n).map(|a| format!("d[x{a}]*P[d[x{a}]]")).collect();
    let conn = connection_text(components);
    out.push_str(&format!(
        "}}\n\nstructure quasiq {name} on forms {{\n  D = {} + ({conn})*({});\n  q = {conn};\n}}\n\ncheck {name};\n",
        d.join(" + "),
        euler.join(" + ")
    ));
    out
}

fn connection_text(components: &[&str]) -> String {
    let terms: Vec<_> = components
        .iter()
        .enumerate()
        .map(|(a, c)| format!("d[x{}]*({c})", a + 1))
        .collect();
    terms.join(" + ")
}

fn algebroid_text(comment: &str, name: &str, d: &AlgebroidData, extra: &[&str]) -> String {
    let j = build_jacobi_algebroid(d).expect("catalog algebroid data");
    let mut directives = vec![format!("check {name};")];
    directives.extend(extra.iter().map(|c| format!("convert {name} via {c};")));
    let directives: Vec<&str> = directives.iter().map(String::as_str).collect();
    jacobi_text(comment, Kind::Algebroid, name, "dual", &j, &directives)
}

/// First cocycle `(c1, c2)` in `[-2, 2]^2`, zero excluded, for which the Jacobi algebroid
/// of `constants` verifies.
pub fn find_cocycle(constants: &[Vec<Vec<i64>>]) -> Option<Vec<i64>> {
    let r = constants.len();
    let mut candidates: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..r {
        candidates = candidates
            .into_iter()
            .flat_map(|c| {
                (-2..=2).map(move |v| {
                    let mut next = c.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    candidates.into_iter().filter(|c| c.iter().any(|&v| v != 0)).find(|c| {
        AlgebroidData::lie_algebra(constants, c)
            .ok()
            .and_then(|d| build_jacobi_algebroid(&d).ok())
            .is_some_and(|j| j.verified().is_some_and(|r| r.verdict()))
    })
}

fn lie_algebra_cocycle() -> String {
    let d = AlgebroidData::lie_algebra(&affine_line_constants(), &[1, 0]).expect("valid constants");
    let j = build_jacobi_algebroid(&d).expect("weights");
    jacobi_text(
        "the odd Jacobi structure of the Lie algebra [e1,e2] = e2 with the cocycle e1*",
        Kind::OddJacobi,
        "lie_algebra_cocycle",
        "dual",
        &j,
        &["check lie_algebra_cocycle;", "bracket lie_algebra_cocycle(eta1, eta2);", "convert lie_algebra_cocycle via schoutenize;"],
    )
}

fn tangent_extension() -> String {
    let lie = tangent_algebroid(1).expect("tangent algebroid");
    let j = extend_lie_to_jacobi(&lie, "tau").expect("Lie algebroid");
    jacobi_text(
        "the Jacobi algebroid extending the tangent algebroid of the line",
        Kind::Algebroid,
        "tangent_extension",
        "dual",
        &j,
        &[
            "check tangent_extension;",
            "bracket tangent_extension(x1, xs1);",
            "convert tangent_extension via quasiq;",
            "convert tangent_extension via lie;",
        ],
    )
}

fn algebroid_2dim() -> String {
    let constants = affine_line_constants();
    let cocycle = find_cocycle(&constants).expect("the algebra has nonzero cocycles");
    let d = AlgebroidData::lie_algebra(&constants, &cocycle).expect("valid constants");
    algebroid_text(
        "the Jacobi algebroid of the Lie algebra [e1,e2] = e2 with a cocycle found by search",
        "algebroid_2dim",
        &d,
        &["quasiq", "lie", "sections", "schoutenize"],
    )
}

fn non_jacobi_algebroid() -> String {
    let d = AlgebroidData::lie_algebra(&non_jacobi_constants(), &[0, 0, 0]).expect("antisymmetric constants");
    algebroid_text("bracket constants violating the Jacobi identity", "non_jacobi_algebroid", &d, &[])
}

fn parameter(name: &str) -> Result<(&str, Option<usize>), CatalogError> {
    let Some((head, rest)) = name.split_once('(') else {
        return Ok((name, None));
    };
    let n = rest
        .strip_suffix(')')
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| CatalogError::BadParameter(format!("malformed parameter in `{name}`")))?;
    Ok((head, Some(n)))
}

/// DSL source of a catalog entry. `de_rham` and `odd_contact` take a dimension, as in
/// `odd_contact(2)`.
pub fn source(name: &str) -> Result<String, CatalogError> {
    let (head, n) = parameter(name)?;
    if n.is_some() && !matches!(head, "de_rham" | "odd_contact") {
        return Err(CatalogError::BadParameter(format!("`{head}` takes no parameter")));
    }
    Ok(match head {
        "superline" => SUPERLINE.to_string(),
        "odd_symplectic" => ODD_SYMPLECTIC.to_string(),
        "lie_schouten" => lie_schouten(&affine_line_constants()),
        "de_rham" => de_rham(n.unwrap_or(2)),
        "lie_algebra_bracket" => lie_algebra_bracket(&affine_line_constants()),
        "odd_contact" => odd_contact(n.unwrap_or(1)),
        "exact_qs_1" => EXACT_QS_1.to_string(),
        "flat_connection" => flat_connection("flat_connection", &["x2", "x1"]),
        "lie_algebra_cocycle" => lie_algebra_cocycle(),
        "tangent_extension" => tangent_extension(),
        "algebroid_2dim" => algebroid_2dim(),
        "non_jacobi_algebroid" => non_jacobi_algebroid(),
        "flat_connection_open" => flat_connection("flat_connection_open", &["0", "x1"]),
        _ => return Err(CatalogError::Unknown(name.to_string())),
    })
}

pub fn catalog(name: &str) -> Result<Model, CatalogError> {
    parse(&source(name)?).map_err(CatalogError::Source)
}
