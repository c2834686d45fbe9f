//! Jacobi algebroids: weight minus one odd Jacobi structures on `ΠE*` built from
//! structure functions, the canonical map `R: T*(ΠE*) -> T*(ΠE)`, the quasi Q-manifold
//! on `ΠE` and the Lie algebroid with a 1-cocycle it determines.

use std::collections::HashMap;
use std::sync::Arc;

use crate::chart::{make_chart, momentum_name, Chart, Parity};
use crate::constructions::{
    field_weight, quasiq_to_homological, schoutenize, verify_qs, verify_quasi_q, QSData, QuasiQData,
};
use crate::error::{Error, Result};
use crate::jacobi::{verify_odd_jacobi, OddJacobiStructure};
use crate::phase::{
    apply, canonical_symplectic_form, commutator, de_rham, interior, poisson, pullback_form, symbol, unsymbol,
    VectorField,
};
use crate::poly::{rational, Poly, WeightOf};
use crate::report::VerificationReport;

/// One fibre direction `α` of `E`: its parity, the coordinate `η_α` on `ΠE*` and the
/// coordinate `ξ^α` on `ΠE`. Both coordinates have parity `α + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fibre {
    pub parity: Parity,
    pub eta: String,
    pub xi: String,
}

impl Fibre {
    pub fn new(parity: Parity, eta: impl Into<String>, xi: impl Into<String>) -> Self {
        Fibre {
            parity,
            eta: eta.into(),
            xi: xi.into(),
        }
    }
}

/// Structure functions of a Jacobi algebroid over the chart `base`:
/// anchor `Q_α^A = anchor[α][A]`, bracket `Q^γ_βα = brackets[γ][β][α]` and cocycle
/// `Q_α = cocycle[α]`, all functions on `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebroidData {
    base: Arc<Chart>,
    fibres: Vec<Fibre>,
    anchor: Vec<Vec<Poly>>,
    brackets: Vec<Vec<Vec<Poly>>>,
    cocycle: Vec<Poly>,
    dual: Arc<Chart>,
    bundle: Arc<Chart>,
}

fn check_parity(f: &Poly, expected: Parity, what: impl Fn() -> String) -> Result<()> {
    match f.parity_of().homogeneous() {
        _ if f.is_zero() => Ok(()),
        Some(p) if p == expected => Ok(()),
        Some(found) => Err(Error::ParityMismatch {
            name: what(),
            expected,
            found,
        }),
        None => Err(Error::Shape(format!("{} has mixed parity", what()))),
    }
}

impl AlgebroidData {
    pub fn new(
        base: &Arc<Chart>,
        fibres: Vec<Fibre>,
        anchor: Vec<Vec<Poly>>,
        brackets: Vec<Vec<Vec<Poly>>>,
        cocycle: Vec<Poly>,
    ) -> Result<Self> {
        let r = fibres.len();
        let n = base.len();
        if base.has_momenta() {
            return Err(Error::AlreadyCotangent);
        }
        if let Some(g) = base.generators().iter().find(|g| g.weight != 0) {
            return Err(Error::Weight(format!("base coordinate {} must have weight 0", g.name)));
        }
        if anchor.len() != r || anchor.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("anchor must be {r} x {n}")));
        }
        if brackets.len() != r || brackets.iter().any(|m| m.len() != r || m.iter().any(|row| row.len() != r)) {
            return Err(Error::Shape(format!("brackets must be {r} x {r} x {r}")));
        }
        if cocycle.len() != r {
            return Err(Error::Shape(format!("cocycle must have {r} entries")));
        }
        let all = anchor
            .iter()
            .flatten()
            .chain(brackets.iter().flatten().flatten())
            .chain(cocycle.iter());
        for f in all {
            if f.chart() != base {
                return Err(Error::ChartMismatch);
            }
        }
        for (a, fa) in fibres.iter().enumerate() {
            for (x, g) in base.generators().iter().enumerate() {
                check_parity(&anchor[a][x], fa.parity + g.parity, || {
                    format!("anchor[{}][{}]", fa.eta, g.name)
                })?;
            }
            check_parity(&cocycle[a], fa.parity, || format!("cocycle[{}]", fa.eta))?;
            for (c, fc) in fibres.iter().enumerate() {
                for (b, fb) in fibres.iter().enumerate() {
                    let k = &brackets[c][b][a];
                    check_parity(k, fa.parity + fb.parity + fc.parity, || {
                        format!("brackets[{}][{}][{}]", fc.eta, fb.eta, fa.eta)
                    })?;
                    // the xi-xi coefficient is graded symmetric in the xi parities
                    let sign = fa.parity.flip().koszul(fb.parity.flip());
                    if *k != brackets[c][a][b].scale_int(sign) {
                        return Err(Error::Shape(format!(
                            "brackets[{}][{}][{}] breaks graded antisymmetry",
                            fc.eta, fb.eta, fa.eta
                        )));
                    }
                }
            }
        }
        let mut dual_decls: Vec<(String, Parity, i64)> =
            base.generators().iter().map(|g| (g.name.clone(), g.parity, 0)).collect();
        let mut bundle_decls = dual_decls.clone();
        dual_decls.extend(fibres.iter().map(|f| (f.eta.clone(), f.parity.flip(), 1)));
        bundle_decls.extend(fibres.iter().map(|f| (f.xi.clone(), f.parity.flip(), 1)));
        let dual = make_chart(dual_decls)?;
        let bundle = make_chart(bundle_decls)?;
        if bundle.cotangent()?.generators().iter().any(|g| dual.contains(&g.name) && !base.contains(&g.name)) {
            return Err(Error::NameCollision("fibre coordinates of ΠE and ΠE* overlap".into()));
        }
        Ok(AlgebroidData {
            base: base.clone(),
            fibres,
            anchor,
            brackets,
            cocycle,
            dual,
            bundle,
        })
    }

    /// Lie algebra data over a point: `brackets[γ][β][α]` rational constants, cocycle
    /// constants, even fibres named `eta{i}` / `xi{i}`.
    pub fn lie_algebra(constants: &[Vec<Vec<i64>>], cocycle: &[i64]) -> Result<Self> {
        let r = cocycle.len();
        let base = make_chart(Vec::<(String, Parity, i64)>::new())?;
        let fibres = (1..=r)
            .map(|i| Fibre::new(Parity::Even, format!("eta{i}"), format!("xi{i}")))
            .collect();
        let k = |n: i64| Poly::integer(&base, n);
        let brackets = constants
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(|&c| k(c)).collect()).collect())
            .collect();
        let cocycle = cocycle.iter().map(|&c| k(c)).collect();
        AlgebroidData::new(&base, fibres, vec![vec![]; r], brackets, cocycle)
    }

    pub fn base(&self) -> &Arc<Chart> {
        &self.base
    }

    pub fn fibres(&self) -> &[Fibre] {
        &self.fibres
    }

    pub fn rank(&self) -> usize {
        self.fibres.len()
    }

    pub fn anchor(&self, alpha: usize, a: usize) -> &Poly {
        &self.anchor[alpha][a]
    }

    pub fn bracket_fn(&self, gamma: usize, beta: usize, alpha: usize) -> &Poly {
        &self.brackets[gamma][beta][alpha]
    }

    pub fn cocycle(&self, alpha: usize) -> &Poly {
        &self.cocycle[alpha]
    }

    /// The chart `ΠE*`: base coordinates then `η_α` of weight 1.
    pub fn dual_chart(&self) -> &Arc<Chart> {
        &self.dual
    }

    /// The chart `ΠE`: base coordinates then `ξ^α` of weight 1.
    pub fn bundle_chart(&self) -> &Arc<Chart> {
        &self.bundle
    }

    pub fn is_lie(&self) -> bool {
        self.cocycle.iter().all(Poly::is_zero)
    }

    fn with_cocycle(&self, cocycle: Vec<Poly>) -> Self {
        AlgebroidData {
            cocycle,
            ..self.clone()
        }
    }
}

fn weight_audit(name: &str, f: &Poly, w: i64) -> Result<()> {
    if f.has_weight(w) {
        return Ok(());
    }
    let found = match f.weight_of() {
        WeightOf::Homogeneous(w) => w.to_string(),
        WeightOf::Inhomogeneous => "inhomogeneous".into(),
    };
    Err(Error::Weight(format!("{name} has weight {found}, expected {w}")))
}

/// `S` and `Q` on `T*(ΠE*)`, without verification.
fn algebroid_functions(d: &AlgebroidData) -> Result<(Poly, Poly)> {
    let ph = d.dual.cotangent()?;
    let var = |name: &str| Poly::var(&ph, name);
    let lift = |f: &Poly| f.embed(&ph);
    let half = rational(1, 2);
    let mut s = Poly::zero(&ph);
    let mut q = Poly::zero(&ph);
    for (a, fa) in d.fibres.iter().enumerate() {
        let pi_a = var(&momentum_name(&fa.eta))?;
        for (x, g) in d.base.generators().iter().enumerate() {
            let p = var(&momentum_name(&g.name))?;
            let term = &(&pi_a * &lift(&d.anchor[a][x])?) * &p;
            s = &s + &term.scale_int(fa.parity.sign());
        }
        for (b, fb) in d.fibres.iter().enumerate() {
            let pi_b = var(&momentum_name(&fb.eta))?;
            for (c, fc) in d.fibres.iter().enumerate() {
                let k = &d.brackets[c][b][a];
                if k.is_zero() {
                    continue;
                }
                let term = &(&(&pi_a * &pi_b) * &lift(k)?) * &var(&fc.eta)?;
                s = &s + &term.scale(&half).scale_int((fa.parity + fb.parity).sign());
            }
        }
        q = &q + &(&pi_a * &lift(&d.cocycle[a])?);
    }
    Ok((s, q))
}

/// `S = (-1)^α π^α Q_α^A p_A + (-1)^(α+β) 1/2 π^α π^β Q^γ_βα η_γ`, `Q = π^α Q_α`, with a
/// weight audit (both of weight -1). The returned structure carries its verification.
pub fn build_jacobi_algebroid(d: &AlgebroidData) -> Result<OddJacobiStructure> {
    let (s, q) = algebroid_functions(d)?;
    weight_audit("S", &s, -1)?;
    weight_audit("Q", &q, -1)?;
    Ok(OddJacobiStructure::new(&d.dual, s, q)?.verify())
}

/// Read the structure functions back from a weight minus one structure on a chart
/// whose weight-0 generators are the base and weight-1 generators the `η_α`.
/// `ξ^α` is named `xi[η_α]`.
pub fn decode_algebroid(j: &OddJacobiStructure) -> Result<AlgebroidData> {
    let chart = j.base();
    let mut base_decls = Vec::new();
    let mut fibres = Vec::new();
    for g in chart.generators() {
        match g.weight {
            0 if fibres.is_empty() => base_decls.push((g.name.clone(), g.parity, 0)),
            1 => fibres.push(Fibre::new(g.parity.flip(), g.name.clone(), format!("xi[{}]", g.name))),
            _ => {
                return Err(Error::Weight(format!(
                    "{} must have weight 0 (listed first) or weight 1",
                    g.name
                )))
            }
        }
    }
    let base = make_chart(base_decls)?;
    let ph = j.phase();
    let idx = |name: &str| ph.index_of(name);
    let lower = |f: Poly| {
        f.restrict(&base)
            .map_err(|_| Error::Shape("structure functions depend on fibre coordinates".into()))
    };
    let mut anchor = Vec::new();
    let mut brackets = vec![Vec::new(); fibres.len()];
    let mut cocycle = Vec::new();
    for fa in &fibres {
        let pi_a = idx(&momentum_name(&fa.eta))?;
        let mut row = Vec::new();
        for g in base.generators() {
            let p = idx(&momentum_name(&g.name))?;
            let c = j.s().left_derivative(p).left_derivative(pi_a).scale_int(fa.parity.sign());
            row.push(lower(c)?);
        }
        anchor.push(row);
        cocycle.push(lower(j.q().left_derivative(pi_a))?);
    }
    for (c, fc) in fibres.iter().enumerate() {
        let eta = idx(&fc.eta)?;
        let se = j.s().left_derivative(eta);
        for fb in &fibres {
            let mut row = Vec::new();
            for fa in &fibres {
                let k = se
                    .left_derivative(idx(&momentum_name(&fa.eta))?)
                    .left_derivative(idx(&momentum_name(&fb.eta))?)
                    .scale_int((fa.parity + fb.parity).sign());
                row.push(lower(k)?);
            }
            brackets[c].push(row);
        }
    }
    let d = AlgebroidData::new(&base, fibres, anchor, brackets, cocycle)?;
    let (s, q) = algebroid_functions(&d)?;
    if s.transfer(ph)? != *j.s() || q.transfer(ph)? != *j.q() {
        return Err(Error::Shape("structure is not of algebroid form".into()));
    }
    Ok(d)
}

/// `(R^-1)^*`: a function on `T*(ΠE*)` as a function on `T*(ΠE)`, via
/// `η_α -> π_α` and `π^α -> (-1)^α ξ^α`.
pub fn r_pullback(d: &AlgebroidData, f: &Poly) -> Result<Poly> {
    let source = d.dual.cotangent()?;
    if f.chart() != &source {
        return Err(Error::ChartMismatch);
    }
    let target = d.bundle.cotangent()?;
    let mut binding = HashMap::new();
    for fa in &d.fibres {
        binding.insert(fa.eta.clone(), Poly::var(&target, &momentum_name(&fa.xi))?);
        binding.insert(
            momentum_name(&fa.eta),
            Poly::var(&target, &fa.xi)?.scale_int(fa.parity.sign()),
        );
    }
    f.pullback(&target, &binding)
}

/// `R^*`: `π_α -> η_α`, `ξ^α -> (-1)^α π^α`.
fn r_binding(d: &AlgebroidData) -> Result<HashMap<String, Poly>> {
    let target = d.dual.cotangent()?;
    let mut binding = HashMap::new();
    for fa in &d.fibres {
        binding.insert(momentum_name(&fa.xi), Poly::var(&target, &fa.eta)?);
        binding.insert(
            fa.xi.clone(),
            Poly::var(&target, &momentum_name(&fa.eta))?.scale_int(fa.parity.sign()),
        );
    }
    Ok(binding)
}

/// `R^* ω_T*(ΠE) - ω_T*(ΠE*)` for the algebroid's charts.
pub fn symplectomorphism_residual(d: &AlgebroidData) -> Result<Poly> {
    let source = d.bundle.cotangent()?;
    let target = d.dual.cotangent()?;
    let omega_e = canonical_symplectic_form(&source)?;
    let omega_dual = canonical_symplectic_form(&target)?;
    let pulled = pullback_form(&omega_e, &target, &r_binding(d)?)?;
    pulled.try_sub(&omega_dual)
}

/// Generic charts of the given dimensions: base coordinates and fibres alternate
/// even, odd, even, ...
pub fn generic_algebroid_charts(base_dim: usize, fibre_dim: usize) -> Result<AlgebroidData> {
    let alt = |i: usize| if i.is_multiple_of(2) { Parity::Even } else { Parity::Odd };
    let base = make_chart((0..base_dim).map(|i| (format!("x{}", i + 1), alt(i), 0)))?;
    let fibres: Vec<Fibre> = (0..fibre_dim)
        .map(|i| Fibre::new(alt(i), format!("eta{}", i + 1), format!("xi{}", i + 1)))
        .collect();
    let r = fibres.len();
    let zero = Poly::zero(&base);
    AlgebroidData::new(
        &base,
        fibres,
        vec![vec![zero.clone(); base_dim]; r],
        vec![vec![vec![zero.clone(); r]; r]; r],
        vec![zero; r],
    )
}

/// Lemma A at `(base_dim | fibre_dim)`: the pullback of the canonical symplectic form
/// of `T*(ΠE)` along `R` is that of `T*(ΠE*)`.
pub fn verify_symplectomorphism(base_dim: usize, fibre_dim: usize) -> Result<VerificationReport> {
    let d = generic_algebroid_charts(base_dim, fibre_dim)?;
    let mut report = VerificationReport::new(format!("R symplectomorphism ({base_dim}|{fibre_dim})"));
    report.residual("R*omega(ΠE) - omega(ΠE*)", symplectomorphism_residual(&d)?);
    Ok(report)
}

/// `D = unsymbol((R^-1)^* S)`, `q = -(R^-1)^* Q`, after checking the algebroid verifies.
pub fn extract_quasiq(d: &AlgebroidData) -> Result<QuasiQData> {
    let j = build_jacobi_algebroid(d)?;
    if !j.verified().is_some_and(VerificationReport::verdict) {
        return Err(Error::Precondition("algebroid structure does not verify".into()));
    }
    extract_quasiq_unchecked(d)
}

/// [`extract_quasiq`] without the precondition, for exhibiting failures.
pub fn extract_quasiq_unchecked(d: &AlgebroidData) -> Result<QuasiQData> {
    let (s, q) = algebroid_functions(d)?;
    let s_hat = r_pullback(d, &s)?;
    let q_hat = r_pullback(d, &q)?;
    let field = unsymbol(&s_hat)?;
    let curving = -q_hat.restrict(&d.bundle)?;
    QuasiQData::new(field, curving)
}

/// The homological field and cocycle on `ΠE`, from
/// `Q = ξ^α Q_α^A d/dx^A + 1/2(ξ^α ξ^β Q^γ_βα + (-1)^α 2 ξ^α Q_α ξ^γ) d/dξ^γ` and
/// `φ = (-1)^(α+1) ξ^α Q_α`.
pub fn lie_algebroid_from_jacobi(d: &AlgebroidData) -> Result<(VectorField, Poly)> {
    let e = &d.bundle;
    let lift = |f: &Poly| f.embed(e);
    let xis = d.fibres.iter().map(|f| Poly::var(e, &f.xi)).collect::<Result<Vec<_>>>()?;
    let xi = |a: usize| &xis[a];
    let half = rational(1, 2);
    let mut comps = Vec::new();
    for x in 0..d.base.len() {
        let mut c = Poly::zero(e);
        for a in 0..d.rank() {
            c = &c + &(xi(a) * &lift(&d.anchor[a][x])?);
        }
        comps.push((x, c));
    }
    let mut phi = Poly::zero(e);
    for (a, fa) in d.fibres.iter().enumerate() {
        phi = &phi - &(xi(a) * &lift(&d.cocycle[a])?).scale_int(fa.parity.sign());
    }
    for c in 0..d.rank() {
        let mut comp = Poly::zero(e);
        for a in 0..d.rank() {
            for b in 0..d.rank() {
                let k = &d.brackets[c][b][a];
                if !k.is_zero() {
                    comp = &comp + &(&(xi(a) * xi(b)) * &lift(k)?).scale(&half);
                }
            }
        }
        comp = &comp - &(&phi * xi(c));
        comps.push((e.index_of(&d.fibres[c].xi)?, comp));
    }
    Ok((VectorField::new(e, comps)?, phi))
}

/// Everything between the algebroid and its Lie form on one instance: the structure
/// conditions, the quasi Q conditions, `[Q,Q]`, `Q(φ)`, the agreement of the direct
/// formula with `D - qΞ`, and both round trips.
pub fn algebroid_chain(d: &AlgebroidData) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("Jacobi algebroid chain");
    let j = build_jacobi_algebroid(d)?;
    report.absorb("structure", j.verified().cloned().unwrap_or_default());
    let quasi = extract_quasiq_unchecked(d)?;
    report.absorb("quasi Q", verify_quasi_q(&quasi));
    let (q, phi) = lie_algebroid_from_jacobi(d)?;
    report.residual("[Q,Q]", symbol(&commutator(&q, &q)?)?);
    report.residual("Q(phi)", apply(&q, &phi)?);
    let xi = crate::phase::euler_field(&d.bundle)?;
    let from_quasi = quasi.d.try_sub(&xi.times(&quasi.q)?)?;
    report.residual("Q - (D - q Xi)", symbol(&q.try_sub(&from_quasi)?)?);
    report.residual("phi - q", phi.try_sub(&quasi.q)?);
    if report.verdict() {
        let (q2, phi2) = quasiq_to_homological(&quasi)?;
        let back = crate::constructions::homological_plus_cocycle_to_quasiq(&q2, &phi2)?;
        report.residual("round trip D", symbol(&back.d.try_sub(&quasi.d)?)?);
        report.residual("round trip q", back.q.try_sub(&quasi.q)?);
        report.claim(
            "weights of D and q",
            matches!(field_weight(&quasi.d)?, WeightOf::Homogeneous(1)) || quasi.d.is_zero(),
            format!("D: {}, q: {}", weight_text(field_weight(&quasi.d)?, quasi.d.is_zero()), weight_text(quasi.q.weight_of(), quasi.q.is_zero())),
        );
    }
    Ok(report)
}

fn weight_text(w: WeightOf, zero: bool) -> String {
    if zero {
        "zero".into()
    } else {
        format!("{w:?}")
    }
}

/// Anchors and section brackets read off the homological field `Q` on `ΠE`. Sections
/// are rendered as the linear functions `η_γ` on `ΠE*`, anchors as symbols on `T*M`.
pub fn section_report(d: &AlgebroidData) -> Result<VerificationReport> {
    let (q, phi) = lie_algebroid_from_jacobi(d)?;
    let e = &d.bundle;
    let base_phase = d.base.cotangent()?;
    let mut report = VerificationReport::new("sections and anchor");
    for fa in &d.fibres {
        let xa = e.index_of(&fa.xi)?;
        let mut anchor = Poly::zero(&base_phase);
        for (x, g) in d.base.generators().iter().enumerate() {
            let c = q.component(x).left_derivative(xa).restrict(&d.base)?;
            anchor = &anchor + &(&c.embed(&base_phase)? * &Poly::var(&base_phase, &momentum_name(&g.name))?);
        }
        report.value(format!("a(s_{})", fa.eta), anchor);
    }
    for fa in &d.fibres {
        for fb in &d.fibres {
            let mut out = Poly::zero(&d.dual);
            for fc in &d.fibres {
                let k = q
                    .component(e.index_of(&fc.xi)?)
                    .left_derivative(e.index_of(&fb.xi)?)
                    .left_derivative(e.index_of(&fa.xi)?)
                    .restrict(&d.base)?;
                out = &out + &(&k.embed(&d.dual)? * &Poly::var(&d.dual, &fc.eta)?);
            }
            report.value(format!("[s_{}, s_{}]", fa.eta, fb.eta), out);
        }
    }
    report.value("phi", phi);
    Ok(report)
}

/// The Jacobi algebroid on `ΠE* x R^{0|1}` of a Lie algebroid: `S + π π^α η_α`, `Q = -π`,
/// with `τ` odd of weight 1.
pub fn extend_lie_to_jacobi(lie: &AlgebroidData, tau: &str) -> Result<OddJacobiStructure> {
    if !lie.is_lie() {
        return Err(Error::Precondition("cocycle must vanish".into()));
    }
    let j = build_jacobi_algebroid(lie)?;
    if !j.verified().is_some_and(VerificationReport::verdict) {
        return Err(Error::Precondition("input is not a Lie algebroid".into()));
    }
    let mut decls: Vec<(String, Parity, i64)> = lie
        .dual
        .generators()
        .iter()
        .map(|g| (g.name.clone(), g.parity, g.weight))
        .collect();
    decls.push((tau.to_string(), Parity::Odd, 1));
    let chart = make_chart(decls)?;
    let ph = chart.cotangent()?;
    let pi = Poly::var(&ph, &momentum_name(tau))?;
    let mut s = j.s().transfer(&ph)?;
    for fa in &lie.fibres {
        let term = &(&pi * &Poly::var(&ph, &momentum_name(&fa.eta))?) * &Poly::var(&ph, &fa.eta)?;
        s = &s + &term;
    }
    weight_audit("S", &s, -1)?;
    Ok(OddJacobiStructure::new(&chart, s, -pi)?.verify())
}

/// Schoutenization of the algebroid structure, with the weight audit `w(S̄) = -1`.
pub fn schoutenize_algebroid(d: &AlgebroidData) -> Result<QSData> {
    let j = build_jacobi_algebroid(d)?;
    let qs = schoutenize(&j)?;
    weight_audit("Sbar", &qs.sbar, -1)?;
    Ok(qs)
}

/// The dual Schouten structure and cocycle of the Lie form,
/// `S̄ = (-1)^α π^α Q_α^A p_A + 1/2((-1)^(α+β) π^α π^β Q^γ_βα + (-1)^γ 2 π^α Q_α π^γ) η_γ`
/// and `φ̄ = -π^α Q_α`: residuals `{S̄,S̄}` and `{S̄,φ̄}`.
pub fn verify_dual_lie_form(d: &AlgebroidData) -> Result<VerificationReport> {
    let (sbar, phibar) = dual_lie_form(d)?;
    let mut report = VerificationReport::new("dual Lie form");
    report.residual("{Sbar,Sbar}", poisson(&sbar, &sbar)?);
    report.residual("{Sbar,phibar}", poisson(&sbar, &phibar)?);
    Ok(report)
}

pub fn dual_lie_form(d: &AlgebroidData) -> Result<(Poly, Poly)> {
    let lie = d.with_cocycle(vec![Poly::zero(&d.base); d.rank()]);
    let (mut sbar, _) = algebroid_functions(&lie)?;
    let (_, q) = algebroid_functions(d)?;
    let ph = sbar.chart().clone();
    for fc in &d.fibres {
        let pi_c = Poly::var(&ph, &momentum_name(&fc.eta))?;
        let eta_c = Poly::var(&ph, &fc.eta)?;
        sbar = &sbar + &(&(&q * &pi_c) * &eta_c).scale_int(fc.parity.sign());
    }
    Ok((sbar, -q))
}

/// The odd contact structure on `ΠT*N x R^{0|1}` with `dim N = n`: coordinates
/// `x{a}` (even, weight 0), `xs{a}` (odd, weight 1), `tau` (odd, weight 1);
/// `S = p_*^a (p_a + x*_a π)`, `Q = -π`.
pub fn odd_contact_structure(n: usize) -> Result<OddJacobiStructure> {
    let mut decls: Vec<(String, Parity, i64)> = (1..=n).map(|a| (format!("x{a}"), Parity::Even, 0)).collect();
    decls.extend((1..=n).map(|a| (format!("xs{a}"), Parity::Odd, 1)));
    decls.push(("tau".into(), Parity::Odd, 1));
    let base = make_chart(decls)?;
    let ph = base.cotangent()?;
    let pi = Poly::var(&ph, "P[tau]")?;
    let mut s = Poly::zero(&ph);
    for a in 1..=n {
        let inner = &Poly::var(&ph, &format!("P[x{a}]"))? + &(&Poly::var(&ph, &format!("xs{a}"))? * &pi);
        s = &s + &(&Poly::var(&ph, &format!("P[xs{a}]"))? * &inner);
    }
    OddJacobiStructure::new(&base, s, -pi)
}

/// Tangent algebroid of `R^n`: fibres `xs{a}` over `x{a}` with identity anchor.
pub fn tangent_algebroid(n: usize) -> Result<AlgebroidData> {
    let base = make_chart((1..=n).map(|a| (format!("x{a}"), Parity::Even, 0)))?;
    let fibres = (1..=n)
        .map(|a| Fibre::new(Parity::Even, format!("xs{a}"), format!("xi{a}")))
        .collect();
    let anchor = (0..n)
        .map(|a| (0..n).map(|b| Poly::integer(&base, i64::from(a == b))).collect())
        .collect();
    let zero = Poly::zero(&base);
    AlgebroidData::new(
        &base,
        fibres,
        anchor,
        vec![vec![vec![zero.clone(); n]; n]; n],
        vec![zero; n],
    )
}

/// The contact form `α = dτ - x*_a dx^a` and the fibre map `φ_S`:
/// `φ_S*(α) = 0`, `φ_S*(dα) = S`, `i_Q α = 1`, `i_Q dα = 0`.
pub fn contact_check(n: usize) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::Precondition("contact_check needs n >= 1".into()));
    }
    let j = odd_contact_structure(n)?;
    let base = j.base();
    let forms = base.anticotangent()?;
    let var = |name: &str| Poly::var(&forms, name);
    let mut alpha = var("d[tau]")?;
    for a in 1..=n {
        alpha = &alpha - &(&var(&format!("xs{a}"))? * &var(&format!("d[x{a}]"))?);
    }
    let dalpha = de_rham(&alpha)?;

    // φ_S*(dz) = (-1)^z dS/dp_z
    let ph = j.phase();
    let mut binding = HashMap::new();
    for (i, g) in base.generators().iter().enumerate() {
        let p = ph.momentum_of(i).expect("cotangent chart");
        let image = j.s().left_derivative(p).scale_int(g.parity.sign());
        binding.insert(crate::chart::fibre_name(&g.name), image);
    }
    let phi = |f: &Poly| f.pullback(ph, &binding);

    let q = j.homological_field()?;
    let mut report = VerificationReport::new(format!("odd contact form (n = {n})"));
    report.residual("phi_S*(alpha)", phi(&alpha)?);
    report.residual("phi_S*(d alpha) - S", &phi(&dalpha)? - j.s());
    report.residual("i_Q alpha - 1", &interior(&q, &alpha)? - &Poly::one(&forms));
    report.residual("i_Q d alpha", interior(&q, &dalpha)?);
    Ok(report)
}

/// Weight audits of an algebroid instance: `S`, `Q` of weight -1 on `ΠE*`, `D` and `q`
/// of weight 1 on `ΠE`.
pub fn weight_report(d: &AlgebroidData) -> Result<VerificationReport> {
    let (s, q) = algebroid_functions(d)?;
    let quasi = extract_quasiq_unchecked(d)?;
    let mut report = VerificationReport::new("weights");
    let check = |r: &mut VerificationReport, name: &str, w: WeightOf, zero: bool, expected: i64| {
        let ok = zero || w == WeightOf::Homogeneous(expected);
        r.claim(format!("w({name}) = {expected}"), ok, weight_text(w, zero));
    };
    check(&mut report, "S", s.weight_of(), s.is_zero(), -1);
    check(&mut report, "Q", q.weight_of(), q.is_zero(), -1);
    check(&mut report, "D", field_weight(&quasi.d)?, quasi.d.is_zero(), 1);
    check(&mut report, "q", quasi.q.weight_of(), quasi.q.is_zero(), 1);
    Ok(report)
}

/// Check a Schoutenized algebroid: QS conditions and weight.
pub fn verify_schoutenized_algebroid(d: &AlgebroidData) -> Result<VerificationReport> {
    let qs = schoutenize_algebroid(d)?;
    let mut report = verify_qs(&qs);
    report.structure = "Schoutenized algebroid".into();
    report.claim("w(Sbar) = -1", qs.sbar.has_weight(-1), format!("{:?}", qs.sbar.weight_of()));
    Ok(report)
}

/// `verify_odd_jacobi` of the built structure, as a report.
pub fn verify_algebroid(d: &AlgebroidData) -> Result<VerificationReport> {
    let j = build_jacobi_algebroid(d)?;
    Ok(j.verified().cloned().unwrap_or_else(|| verify_odd_jacobi(&j)))
}
