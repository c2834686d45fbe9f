//! Structures built from other structures: Schoutenization, exact QS-manifolds and their
//! pencil of odd Jacobi structures, quasi Q-manifolds and the weight-one correspondence
//! with homological fields carrying a cocycle.

use std::sync::Arc;

use crate::chart::{make_chart, Chart, Parity};
use crate::error::{Error, Result};
use crate::jacobi::{shape_checks, verify_odd_jacobi, OddJacobiStructure};
use crate::phase::{apply, commutator, euler_field, poisson, symbol, VectorField};
use crate::poly::{rational, Poly, PolyParity, Rational, WeightOf};
use crate::report::VerificationReport;

/// Default name of the even coordinate added by Schoutenization.
pub const SCHOUTEN_COORD: &str = "T";

/// A Schouten structure `Sbar` with a homological field (symbol `qbar`) preserving it.
#[derive(Debug, Clone, PartialEq)]
pub struct QSData {
    pub base: Arc<Chart>,
    pub sbar: Poly,
    pub qbar: Poly,
}

impl QSData {
    pub fn new(base: &Arc<Chart>, sbar: Poly, qbar: Poly) -> Result<Self> {
        let phase = base.cotangent()?;
        if sbar.chart() != &phase || qbar.chart() != &phase {
            return Err(Error::ChartMismatch);
        }
        Ok(QSData {
            base: base.clone(),
            sbar,
            qbar,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactQSData {
    pub qs: QSData,
    pub homothety: VectorField,
}

impl ExactQSData {
    pub fn new(qs: QSData, homothety: VectorField) -> Result<Self> {
        if homothety.base() != &qs.base {
            return Err(Error::ChartMismatch);
        }
        if homothety.parity() == Some(Parity::Odd) {
            return Err(Error::Precondition("homothety field must be even".into()));
        }
        Ok(ExactQSData { qs, homothety })
    }
}

/// `D^2 = qD` and `D(q) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiQData {
    pub base: Arc<Chart>,
    pub d: VectorField,
    pub q: Poly,
}

impl QuasiQData {
    pub fn new(d: VectorField, q: Poly) -> Result<Self> {
        if q.chart() != d.base() {
            return Err(Error::ChartMismatch);
        }
        if d.parity() == Some(Parity::Even) {
            return Err(Error::ParityMismatch {
                name: "D".into(),
                expected: Parity::Odd,
                found: Parity::Even,
            });
        }
        match q.parity_of() {
            PolyParity::Odd => {}
            PolyParity::Even if q.is_zero() => {}
            PolyParity::Even => {
                return Err(Error::ParityMismatch {
                    name: "q".into(),
                    expected: Parity::Odd,
                    found: Parity::Even,
                })
            }
            PolyParity::Mixed => return Err(Error::Precondition("q has mixed parity".into())),
        }
        Ok(QuasiQData {
            base: d.base().clone(),
            d,
            q,
        })
    }
}

/// Weight of a vector field: the weight of its symbol.
pub fn field_weight(x: &VectorField) -> Result<WeightOf> {
    Ok(symbol(x)?.weight_of())
}

/// Base chart extended by an even weight-zero coordinate `name`.
fn extended_base(base: &Arc<Chart>, name: &str) -> Result<Arc<Chart>> {
    if base.contains(name) || base.cotangent()?.contains(name) {
        return Err(Error::NameCollision(name.to_string()));
    }
    Chart::product(&[base.clone(), make_chart([(name, Parity::Even, 0)])?])
}

/// `Sbar = exp(-t) (S - Q p)` with `p` the momentum of the new coordinate `t`.
fn schouten_function(s: &Poly, q: &Poly, phase: &Arc<Chart>, name: &str) -> Result<Poly> {
    let s = s.transfer(phase)?;
    let q = q.transfer(phase)?;
    let p = Poly::var(phase, &crate::chart::momentum_name(name))?;
    let e = Poly::exp_tag(phase, name, -1)?;
    Ok(&e * &(&s - &(&q * &p)))
}

/// Schoutenization with the default coordinate name.
pub fn schoutenize(j: &OddJacobiStructure) -> Result<QSData> {
    schoutenize_as(j, SCHOUTEN_COORD)
}

/// Extend by an even coordinate `name` and form `Sbar = exp(-t)(S - Q p)`, keeping `Q`.
pub fn schoutenize_as(j: &OddJacobiStructure, name: &str) -> Result<QSData> {
    let report = j.verified().cloned().unwrap_or_else(|| verify_odd_jacobi(j));
    if !report.verdict() {
        return Err(Error::Precondition("structure is not odd Jacobi".into()));
    }
    let base = extended_base(j.base(), name)?;
    let phase = base.cotangent()?;
    let sbar = schouten_function(j.s(), j.q(), &phase, name)?;
    let qbar = j.q().transfer(&phase)?;
    QSData::new(&base, sbar, qbar)
}

/// The two expansions used to prove Schoutenization, for any `S`, `Q` of the right
/// shape on `base`:
/// `{Sbar,Sbar} = exp(-2t)({S,S} + 2QS - 2p{S,Q} + p^2{Q,Q})` and
/// `{Sbar,Q} = exp(-t)({S,Q} - p{Q,Q})`.
pub fn check_schoutenization_identities(
    base: &Arc<Chart>,
    s: &Poly,
    q: &Poly,
) -> Result<VerificationReport> {
    let ext = extended_base(base, SCHOUTEN_COORD)?;
    let phase = ext.cotangent()?;
    let sbar = schouten_function(s, q, &phase, SCHOUTEN_COORD)?;
    let (s, q) = (s.transfer(&phase)?, q.transfer(&phase)?);
    let p = Poly::var(&phase, &crate::chart::momentum_name(SCHOUTEN_COORD))?;
    let e1 = Poly::exp_tag(&phase, SCHOUTEN_COORD, -1)?;
    let e2 = Poly::exp_tag(&phase, SCHOUTEN_COORD, -2)?;
    let ss = poisson(&s, &s)?;
    let sq = poisson(&s, &q)?;
    let qq = poisson(&q, &q)?;

    let expansion1 = &ss + &(&(&q * &s).scale_int(2) - &(&p * &sq).scale_int(2));
    let expansion1 = &e2 * &(&expansion1 + &(&p.pow(2) * &qq));
    let expansion2 = &e1 * &(&sq - &(&p * &qq));

    let mut report = VerificationReport::new("Schoutenization identities");
    report.residual("{Sbar,Sbar} expansion", &poisson(&sbar, &sbar)? - &expansion1);
    report.residual("{Sbar,Q} expansion", &poisson(&sbar, &q)? - &expansion2);
    Ok(report)
}

/// Residuals `{Sbar,Sbar}`, `{Qbar,Sbar}`, `{Qbar,Qbar}`.
pub fn verify_qs(d: &QSData) -> VerificationReport {
    let mut report = VerificationReport::new("QS-manifold");
    shape_checks(&mut report, &d.sbar, "Sbar", 2);
    shape_checks(&mut report, &d.qbar, "Qbar", 1);
    let br = |a: &Poly, b: &Poly| poisson(a, b).expect("QS data lives on its cotangent chart");
    report.residual("{Sbar,Sbar}", br(&d.sbar, &d.sbar));
    report.residual("{Qbar,Sbar}", br(&d.qbar, &d.sbar));
    report.residual("{Qbar,Qbar}", br(&d.qbar, &d.qbar));
    report
}

/// The QS conditions followed by `{E,Sbar} + Sbar` and `{E,Qbar} + Qbar`.
pub fn verify_exact_qs(d: &ExactQSData) -> VerificationReport {
    let mut report = verify_qs(&d.qs);
    report.structure = "exact QS-manifold".into();
    let e = symbol(&d.homothety).expect("homothety lives on the base chart");
    let br = |a: &Poly, b: &Poly| poisson(a, b).expect("same cotangent chart");
    report.residual("{E,Sbar} + Sbar", &br(&e, &d.qs.sbar) + &d.qs.sbar);
    report.residual("{E,Qbar} + Qbar", &br(&e, &d.qs.qbar) + &d.qs.qbar);
    report
}

/// Pencil member `S = a Sbar + b E Qbar`, `Q = b Qbar`.
pub fn exact_qs_to_jacobi(d: &ExactQSData, a: &Rational, b: &Rational) -> Result<OddJacobiStructure> {
    if !verify_exact_qs(d).verdict() {
        return Err(Error::Precondition("data is not an exact QS-manifold".into()));
    }
    pencil_member(d, a, b)
}

fn pencil_member(d: &ExactQSData, a: &Rational, b: &Rational) -> Result<OddJacobiStructure> {
    let e = symbol(&d.homothety)?;
    let s = &d.qs.sbar.scale(a) + &(&e * &d.qs.qbar).scale(b);
    OddJacobiStructure::new(&d.qs.base, s, d.qs.qbar.scale(b))
}

/// For the pencil member at `(1,1)`: `{S,S} + 2 Qbar (Sbar + E Qbar)`, plus for every
/// pair of parameter points sharing `b`, `Q - Q'` and `S - S' - (a - a') Sbar`.
pub fn check_exact_qs_expansion(d: &ExactQSData, params: &[(Rational, Rational)]) -> Result<VerificationReport> {
    let one = rational(1, 1);
    let j = pencil_member(d, &one, &one)?;
    let e = symbol(&d.homothety)?;
    let mut report = VerificationReport::new("exact QS expansion");
    let rhs = (&d.qs.qbar * &(&d.qs.sbar + &(&e * &d.qs.qbar))).scale_int(2);
    report.residual("{S,S} + 2Qbar(Sbar + E Qbar)", &poisson(j.s(), j.s())? + &rhs);
    for (i, (a, b)) in params.iter().enumerate() {
        for (a2, b2) in &params[i + 1..] {
            if b != b2 {
                continue;
            }
            let j1 = pencil_member(d, a, b)?;
            let j2 = pencil_member(d, a2, b2)?;
            let name = format!("pencil ({a},{b}) vs ({a2},{b2})");
            report.residual(format!("{name}: Q"), j1.q() - j2.q());
            let diff = &(j1.s() - j2.s()) - &d.qs.sbar.scale(&(a - a2));
            report.residual(format!("{name}: S"), diff);
        }
    }
    Ok(report)
}

/// Residuals `1/2 [D,D] - qD` (as symbols) and `D(q)`.
pub fn verify_quasi_q(d: &QuasiQData) -> VerificationReport {
    let mut report = VerificationReport::new("quasi Q-manifold");
    let phase = d.base.cotangent().expect("base chart has no momenta");
    let sd = symbol(&d.d).expect("D lives on its base chart");
    let half_dd = poisson(&sd, &sd).expect("cotangent chart").scale(&rational(1, 2));
    let qd = &d.q.embed(&phase).expect("q lives on the base chart") * &sd;
    report.residual("1/2[D,D] - qD", &half_dd - &qd);
    report.residual("D(q)", apply(&d.d, &d.q).expect("q lives on the base chart"));
    report
}

fn weight_one(name: &str, w: WeightOf, zero: bool) -> Result<()> {
    match w {
        _ if zero => Ok(()),
        WeightOf::Homogeneous(1) => Ok(()),
        WeightOf::Homogeneous(w) => Err(Error::Weight(format!("{name} has weight {w}, expected 1"))),
        WeightOf::Inhomogeneous => Err(Error::Weight(format!("{name} is not weight-homogeneous"))),
    }
}

/// `Q = D - q Xi` and `phi = q` for weight-one quasi Q data.
pub fn quasiq_to_homological(d: &QuasiQData) -> Result<(VectorField, Poly)> {
    if !verify_quasi_q(d).verdict() {
        return Err(Error::Precondition("data is not a quasi Q-manifold".into()));
    }
    weight_one("D", field_weight(&d.d)?, d.d.is_zero())?;
    weight_one("q", d.q.weight_of(), d.q.is_zero())?;
    let xi = euler_field(&d.base)?;
    let q = d.d.try_sub(&xi.times(&d.q)?)?;
    Ok((q, d.q.clone()))
}

/// `D = Q + phi Xi` and `q = phi` for a weight-one homological field with a weight-one
/// odd cocycle.
pub fn homological_plus_cocycle_to_quasiq(q: &VectorField, phi: &Poly) -> Result<QuasiQData> {
    if phi.chart() != q.base() {
        return Err(Error::ChartMismatch);
    }
    if !commutator(q, q)?.is_zero() {
        return Err(Error::Precondition("[Q,Q] is not zero".into()));
    }
    if !apply(q, phi)?.is_zero() {
        return Err(Error::Precondition("Q(phi) is not zero".into()));
    }
    if !phi.is_zero() && phi.parity_of() != PolyParity::Odd {
        return Err(Error::Precondition("phi is not odd".into()));
    }
    weight_one("Q", field_weight(q)?, q.is_zero())?;
    let xi = euler_field(q.base())?;
    if apply(&xi, phi)? != *phi {
        return Err(Error::Weight("phi is not of weight 1".into()));
    }
    QuasiQData::new(q.try_add(&xi.times(phi)?)?, phi.clone())
}
