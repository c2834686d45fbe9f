//! Odd Jacobi structures `(S, Q)`: an odd fibre-quadratic `S` and an odd fibre-linear
//! `Q` (the symbol of a homological field) on a cotangent chart, the odd Jacobi bracket
//! they define on base functions, and the checks of the algebra it forms.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::{Chart, Parity};
use crate::error::{Error, Result};
use crate::phase::{apply, poisson, symbol, unsymbol, VectorField};
use crate::poly::{int, Monomial, Poly, PolyParity};
use crate::report::VerificationReport;

#[derive(Debug, Clone)]
pub struct OddJacobiStructure {
    base: Arc<Chart>,
    phase: Arc<Chart>,
    s: Poly,
    q: Poly,
    verified: Option<VerificationReport>,
}

impl PartialEq for OddJacobiStructure {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.s == other.s && self.q == other.q
    }
}

impl OddJacobiStructure {
    /// `s` and `q` must live on the cotangent chart of `base`. Shape is not checked
    /// here; [`verify_odd_jacobi`] reports it.
    pub fn new(base: &Arc<Chart>, s: Poly, q: Poly) -> Result<Self> {
        let phase = base.cotangent()?;
        if s.chart() != &phase || q.chart() != &phase {
            return Err(Error::ChartMismatch);
        }
        Ok(OddJacobiStructure {
            base: base.clone(),
            phase,
            s,
            q,
            verified: None,
        })
    }

    /// Structure from an almost Schouten function and a homological vector field.
    pub fn from_field(s: Poly, q: &VectorField) -> Result<Self> {
        OddJacobiStructure::new(q.base(), s, symbol(q)?)
    }

    pub fn base(&self) -> &Arc<Chart> {
        &self.base
    }

    pub fn phase(&self) -> &Arc<Chart> {
        &self.phase
    }

    pub fn s(&self) -> &Poly {
        &self.s
    }

    /// The symbol of the homological vector field.
    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn verified(&self) -> Option<&VerificationReport> {
        self.verified.as_ref()
    }

    /// Run [`verify_odd_jacobi`] and keep the report.
    pub fn verify(mut self) -> Self {
        self.verified = Some(verify_odd_jacobi(&self));
        self
    }

    pub fn homological_field(&self) -> Result<VectorField> {
        unsymbol(&self.q)
    }

    /// Structure functions `S^AB = d/dp_A d/dp_B S`, with `S = 1/2 S^AB p_B p_A`.
    pub fn s_component(&self, a: usize, b: usize) -> Result<Poly> {
        let pa = self.phase.momentum_of(a).ok_or(Error::NotCotangent)?;
        let pb = self.phase.momentum_of(b).ok_or(Error::NotCotangent)?;
        self.s
            .left_derivative(pb)
            .left_derivative(pa)
            .restrict(&self.base)
    }

    /// `Q^A = d/dp_A Q`.
    pub fn q_component(&self, a: usize) -> Result<Poly> {
        let pa = self.phase.momentum_of(a).ok_or(Error::NotCotangent)?;
        self.q.left_derivative(pa).restrict(&self.base)
    }

    fn lift(&self, f: &Poly) -> Result<Poly> {
        if f.chart() == &self.base {
            f.embed(&self.phase)
        } else if f.chart() == &self.phase {
            if f.is_momentum_free() {
                Ok(f.clone())
            } else {
                Err(Error::NotMomentumFree)
            }
        } else {
            Err(Error::ChartMismatch)
        }
    }

    fn lower(&self, f: Poly) -> Result<Poly> {
        f.restrict(&self.base)
    }

    /// `Q(f)` for a base function.
    pub fn q_apply(&self, f: &Poly) -> Result<Poly> {
        let f = self.lift(f)?;
        self.lower(poisson(&self.q, &f)?)
    }

    /// Odd Jacobi bracket `[[f,g]] = (-1)^(f+1) {{S,f},g} - (-1)^(f+1) {Q, fg}`.
    /// Mixed-parity `f` is split into homogeneous parts.
    pub fn bracket(&self, f: &Poly, g: &Poly) -> Result<Poly> {
        let f = self.lift(f)?;
        let g = self.lift(g)?;
        let mut out = Poly::zero(&self.phase);
        for (pf, part) in f.parity_parts() {
            let sign = pf.flip().sign();
            let double = poisson(&poisson(&self.s, &part)?, &g)?;
            let anomaly = poisson(&self.q, &(&part * &g))?;
            out = &out + &(&double - &anomaly).scale_int(sign);
        }
        self.lower(out)
    }

    /// Hamiltonian vector field from its coordinate form
    /// `X_f = (-1)^(A f + 1) S^AB df/dx^B d/dx^A + (-1)^f f Q^A d/dx^A`,
    /// validated against `X_f(g) = (-1)^f [[f,g]] - Q(f) g` on every base generator.
    pub fn hamiltonian_vf(&self, f: &Poly) -> Result<VectorField> {
        let f = self.lift(f)?.restrict(&self.base)?;
        let shape = |e: Error| Error::Shape(format!("cannot read structure functions: {e}"));
        let n = self.base.len();
        let mut comps = Vec::new();
        for (pf, part) in f.parity_parts() {
            let derivs: Vec<Poly> = (0..n).map(|b| part.left_derivative(b)).collect();
            for a in 0..n {
                let sign = -self.base.parity(a).koszul(pf);
                let mut c = Poly::zero(&self.base);
                for (b, db) in derivs.iter().enumerate() {
                    if db.is_zero() {
                        continue;
                    }
                    let sab = self.s_component(a, b).map_err(shape)?;
                    c = &c + &(&sab * db).scale_int(sign);
                }
                let qa = self.q_component(a).map_err(shape)?;
                c = &c + &(&part * &qa).scale_int(pf.sign());
                comps.push((a, c));
            }
        }
        let field = VectorField::new(&self.base, comps)?;
        let qf = self.q_apply(&f)?;
        for z in 0..n {
            let g = Poly::generator(&self.base, z);
            let lhs = apply(&field, &g)?;
            let mut rhs = &Poly::zero(&self.base) - &(&qf * &g);
            for (pf, part) in f.parity_parts() {
                rhs = &rhs + &self.bracket(&part, &g)?.scale_int(pf.sign());
            }
            if lhs != rhs {
                return Err(Error::HamiltonianMismatch(f.to_string()));
            }
        }
        Ok(field)
    }
}

/// Shape checks followed by the three residuals `{Q,Q}`, `{Q,S}`, `{S,S} + 2QS`.
pub fn verify_odd_jacobi(j: &OddJacobiStructure) -> VerificationReport {
    let mut report = VerificationReport::new("odd Jacobi structure");
    shape_checks(&mut report, &j.s, "S", 2);
    shape_checks(&mut report, &j.q, "Q", 1);
    let (s, q) = (&j.s, &j.q);
    let residual = |a: &Poly, b: &Poly| poisson(a, b).expect("structure lives on its cotangent chart");
    report.residual("{Q,Q}", residual(q, q));
    report.residual("{Q,S}", residual(q, s));
    report.residual("{S,S} + 2QS", &residual(s, s) + &(q * s).scale_int(2));
    report
}

/// Odd, of momentum degree `degree` (zero is accepted).
pub(crate) fn shape_checks(report: &mut VerificationReport, f: &Poly, name: &str, degree: u32) {
    if f.parity_of() != PolyParity::Odd && !f.is_zero() {
        report.shape(format!("{name} is odd"), format!("{name} has parity {:?}", f.parity_of()));
    }
    if !f.has_momentum_degree(degree) {
        let found = f
            .momentum_degree()
            .map_or_else(|| "mixed".to_string(), |d| d.to_string());
        report.shape(
            format!("{name} has momentum degree {degree}"),
            format!("{name} has momentum degree {found}"),
        );
    }
}

pub fn odd_jacobi_bracket(j: &OddJacobiStructure, f: &Poly, g: &Poly) -> Result<Poly> {
    j.bracket(f, g)
}

pub fn hamiltonian_vf(j: &OddJacobiStructure, f: &Poly) -> Result<VectorField> {
    j.hamiltonian_vf(f)
}

/// Residuals `{chi, S}` and `{chi, Q}` of the symbol `chi` of `x`.
pub fn is_jacobi_vf(j: &OddJacobiStructure, x: &VectorField) -> Result<VerificationReport> {
    if x.base() != j.base() {
        return Err(Error::ChartMismatch);
    }
    let chi = symbol(x)?;
    let mut report = VerificationReport::new("Jacobi vector field");
    report.residual("{chi,S}", poisson(&chi, &j.s)?);
    report.residual("{chi,Q}", poisson(&chi, &j.q)?);
    Ok(report)
}

fn parity_of_sample(f: &Poly) -> Result<Parity> {
    f.parity_of()
        .homogeneous()
        .ok_or_else(|| Error::Precondition(format!("sample `{f}` is not parity-homogeneous")))
}

fn first_nonzero(residuals: impl IntoIterator<Item = Poly>, chart: &Arc<Chart>) -> Poly {
    residuals
        .into_iter()
        .find(|r| !r.is_zero())
        .unwrap_or_else(|| Poly::zero(chart))
}

/// Symmetry, Jacobi identity, generalised Leibniz rule, anomaly identity and the even
/// diagonal on every sample triple. Each family reports its first nonzero residual.
pub fn check_theorem_odd_jacobi_algebra(
    j: &OddJacobiStructure,
    samples: &[(Poly, Poly, Poly)],
) -> Result<VerificationReport> {
    let base = j.base();
    let one = Poly::one(base);
    let mut symmetry = Vec::new();
    let mut jacobi = Vec::new();
    let mut leibniz = Vec::new();
    let mut anomaly = Vec::new();
    let mut diagonal = Vec::new();
    for (f, g, h) in samples {
        let (pf, pg, ph) = (parity_of_sample(f)?, parity_of_sample(g)?, parity_of_sample(h)?);
        let br = |a: &Poly, b: &Poly| j.bracket(a, b);
        // [[f,g]] + (-1)^((f+1)(g+1)) [[g,f]]
        symmetry.push(&br(f, g)? + &br(g, f)?.scale_int(pf.flip().koszul(pg.flip())));
        // sum over cyclic (f,g,h) of (-1)^((f+1)(h+1)) [[f,[[g,h]]]]
        let cyc = [
            (f, g, h, pf.flip().koszul(ph.flip())),
            (g, h, f, pg.flip().koszul(pf.flip())),
            (h, f, g, ph.flip().koszul(pg.flip())),
        ];
        let mut sum = Poly::zero(base);
        for (a, b, c, sign) in cyc {
            sum = &sum + &br(a, &br(b, c)?)?.scale_int(sign);
        }
        jacobi.push(sum);
        // [[f,gh]] - [[f,g]]h - (-1)^((f+1)g) g[[f,h]] + [[f,1]]gh
        let gh = g * h;
        let lhs = &(&br(f, &gh)? - &(&br(f, g)? * h)) - &(g * &br(f, h)?).scale_int(pf.flip().koszul(pg));
        leibniz.push(&lhs + &(&br(f, &one)? * &gh));
        // [[f,1]] + (-1)^(f+1) Q(f)
        anomaly.push(&br(f, &one)? + &j.q_apply(f)?.scale_int(pf.flip().sign()));
        if pf == Parity::Even {
            diagonal.push(br(f, &br(f, f)?)?);
        }
    }
    let mut report = VerificationReport::new(format!("odd Jacobi algebra ({} samples)", samples.len()));
    report.residual("symmetry", first_nonzero(symmetry, base));
    report.residual("Jacobi identity", first_nonzero(jacobi, base));
    report.residual("generalised Leibniz rule", first_nonzero(leibniz, base));
    report.residual("anomaly [[f,1]]", first_nonzero(anomaly, base));
    report.residual("even diagonal", first_nonzero(diagonal, base));
    Ok(report)
}

/// `Q([[f,g]]) = [[Q f, g]] + (-1)^(f+1) [[f, Q g]]`, `[Q, X_f] = -X_(Q f)` and
/// `[X_f, X_g] = -X_([[f,g]])`. Field identities report the symbol of the difference.
pub fn check_derivation_and_morphism(
    j: &OddJacobiStructure,
    f: &Poly,
    g: &Poly,
) -> Result<VerificationReport> {
    use crate::phase::commutator;
    let pf = parity_of_sample(f)?;
    parity_of_sample(g)?;
    let q = j.homological_field()?;
    let qf = j.q_apply(f)?;
    let qg = j.q_apply(g)?;
    let fg = j.bracket(f, g)?;
    let derivation = &(&j.q_apply(&fg)? - &j.bracket(&qf, g)?) - &j.bracket(f, &qg)?.scale_int(pf.flip().sign());

    let xf = j.hamiltonian_vf(f)?;
    let xg = j.hamiltonian_vf(g)?;
    let q_xf = commutator(&q, &xf)?.try_add(&j.hamiltonian_vf(&qf)?)?;
    let xf_xg = commutator(&xf, &xg)?.try_add(&j.hamiltonian_vf(&fg)?)?;

    let mut report = VerificationReport::new("derivation and morphism");
    report.residual("Q derivation of [[f,g]]", derivation);
    report.residual("[Q,X_f] + X_Q(f)", symbol(&q_xf)?);
    report.residual("[X_f,X_g] + X_[[f,g]]", symbol(&xf_xg)?);
    Ok(report)
}

/// `X_f` is a Jacobi vector field iff `Q(f) = 0`, evaluated on one `f`.
pub fn check_q_closed_hamiltonian(j: &OddJacobiStructure, f: &Poly) -> Result<VerificationReport> {
    let qf = j.q_apply(f)?;
    let xf = j.hamiltonian_vf(f)?;
    let jac = is_jacobi_vf(j, &xf)?;
    let closed = qf.is_zero();
    let is_jacobi = jac.verdict();
    let mut report = VerificationReport::new("Q-closed Hamiltonian fields");
    report.value("Q(f)", qf);
    for c in &jac.conditions {
        if let Some(p) = jac.residual_of(&c.name) {
            report.value(format!("X_f: {}", c.name), p.clone());
        }
    }
    report.claim(
        "Q(f) = 0 iff X_f is Jacobi",
        closed == is_jacobi,
        format!("Q-closed: {closed}, Jacobi: {is_jacobi}"),
    );
    Ok(report)
}

/// Every monomial in the generators of `chart` of total degree at most `max_degree` and
/// the given parity. On a cotangent chart this includes the momenta.
fn monomials(chart: &Arc<Chart>, max_degree: u32, parity: Parity) -> Vec<Poly> {
    let gens: Vec<usize> = (0..chart.len()).collect();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Poly, u32)> = vec![(0, Poly::one(chart), 0)];
    while let Some((pos, mono, deg)) = stack.pop() {
        if pos == gens.len() {
            let m: Option<&Monomial> = mono.terms().next().map(|(m, _)| m);
            if m.is_some_and(|m| m.parity(chart) == parity) {
                out.push(mono);
            }
            continue;
        }
        let g = gens[pos];
        let cap = if chart.parity(g).is_odd() { 1 } else { max_degree - deg };
        let var = Poly::generator(chart, g);
        let mut power = mono.clone();
        for e in 0..=cap.min(max_degree - deg) {
            stack.push((pos + 1, power.clone(), deg + e));
            power = &power * &var;
        }
    }
    out.sort_by(|a, b| a.terms().next().map(|t| t.0).cmp(&b.terms().next().map(|t| t.0)));
    out
}

/// Deterministic random function of the given parity: one to four distinct monomials of
/// degree at most `max_degree`, coefficients in `[-9, 9] \ {0}`.
pub fn random_function(chart: &Arc<Chart>, max_degree: u32, parity: Parity, seed: u64) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = monomials(chart, max_degree, parity);
    if basis.is_empty() {
        return Poly::zero(chart);
    }
    let count = rng.random_range(1..=basis.len().min(4));
    let mut out = Poly::zero(chart);
    for i in sample(&mut rng, basis.len(), count) {
        let mut c = 0;
        while c == 0 {
            c = rng.random_range(-9..=9);
        }
        out = &out + &basis[i].scale(&int(c));
    }
    out
}

/// `count` homogeneous triples with random parities, reproducible from `seed`.
pub fn random_triples(chart: &Arc<Chart>, count: usize, max_degree: u32, seed: u64) -> Vec<(Poly, Poly, Poly)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = || {
        let parity = if rng.random_bool(0.5) { Parity::Odd } else { Parity::Even };
        random_function(chart, max_degree, parity, rng.random())
    };
    (0..count).map(|_| (next(), next(), next())).collect()
}
