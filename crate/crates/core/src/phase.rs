//! Phase-space calculus: the canonical Poisson bracket on a cotangent chart, vector
//! fields through their symbols, Euler and de Rham fields, and differential forms as
//! functions on anticotangent charts.
//!
//! Every vector-field operation is routed through the symbol `X^A p_A` and the Poisson
//! bracket, so there is exactly one sign convention in play.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::chart::{Chart, GenKind, Parity};
use crate::error::{Error, Result};
use crate::poly::{int, Poly};

/// Build the cotangent chart of `base`.
pub fn cotangent_chart(base: &Arc<Chart>) -> Result<Arc<Chart>> {
    base.cotangent()
}

/// Build the anticotangent chart of `base`, with `w(dz) = w(z)`.
pub fn anticotangent_chart(base: &Arc<Chart>) -> Result<Arc<Chart>> {
    base.anticotangent()
}

/// Canonical Poisson bracket
/// `{F,G} = (-1)^(AF+A) dF/dp_A dG/dx^A - (-1)^(AF) dF/dx^A dG/dp_A`.
///
/// `F` may be of mixed parity; it is split into homogeneous parts.
pub fn poisson(f: &Poly, g: &Poly) -> Result<Poly> {
    let chart = f.chart();
    if chart != g.chart() {
        return Err(Error::ChartMismatch);
    }
    if chart.cotangent_base().is_none() {
        return Err(Error::NotCotangent);
    }
    let mut out = Poly::zero(chart);
    if f.is_zero() || g.is_zero() {
        return Ok(out);
    }
    let pairs = chart.conjugate_pairs();
    let mut g_cache: HashMap<usize, Poly> = HashMap::new();
    let mut dg = |i: usize| g_cache.entry(i).or_insert_with(|| g.left_derivative(i)).clone();
    for (pf, part) in f.parity_parts() {
        for &(x, p) in &pairs {
            let a = chart.parity(x);
            let df_dp = part.left_derivative(p);
            if !df_dp.is_zero() {
                let dg_dx = dg(x);
                if !dg_dx.is_zero() {
                    // (-1)^(A*F + A)
                    let sign = a.koszul(pf) * a.sign();
                    out = &out + &(&df_dp * &dg_dx).scale_int(sign);
                }
            }
            let df_dx = part.left_derivative(x);
            if !df_dx.is_zero() {
                let dg_dp = dg(p);
                if !dg_dp.is_zero() {
                    out = &out - &(&df_dx * &dg_dp).scale_int(a.koszul(pf));
                }
            }
        }
    }
    Ok(out)
}

/// A vector field `X^A d/dz^A` on a chart without momenta. Components are stored
/// sparsely, keyed by generator index; zero components are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    base: Arc<Chart>,
    components: BTreeMap<usize, Poly>,
}

impl VectorField {
    pub fn zero(base: &Arc<Chart>) -> Result<VectorField> {
        VectorField::new(base, Vec::new())
    }

    /// Field with the given components. All components must share a total parity
    /// `parity(X^A) + parity(z^A)`.
    pub fn new(base: &Arc<Chart>, components: impl IntoIterator<Item = (usize, Poly)>) -> Result<VectorField> {
        let mut comps: BTreeMap<usize, Poly> = BTreeMap::new();
        for (idx, c) in components {
            if c.chart() != base {
                return Err(Error::ChartMismatch);
            }
            if idx >= base.len() {
                return Err(Error::UnknownGenerator(format!("#{idx}")));
            }
            let entry = comps.entry(idx).or_insert_with(|| Poly::zero(base));
            *entry = &*entry + &c;
        }
        comps.retain(|_, c| !c.is_zero());
        let field = VectorField {
            base: base.clone(),
            components: comps,
        };
        field.checked_parity()?;
        Ok(field)
    }

    pub fn from_named(base: &Arc<Chart>, components: impl IntoIterator<Item = (String, Poly)>) -> Result<VectorField> {
        let comps = components
            .into_iter()
            .map(|(n, p)| Ok((base.index_of(&n)?, p)))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(base, comps)
    }

    /// `f * d/dz`.
    pub fn partial(base: &Arc<Chart>, name: &str, coefficient: Poly) -> Result<VectorField> {
        VectorField::new(base, [(base.index_of(name)?, coefficient)])
    }

    fn checked_parity(&self) -> Result<Option<Parity>> {
        let mut seen = None;
        for (&idx, c) in &self.components {
            for (p, _) in c.parity_parts() {
                let total = p + self.base.parity(idx);
                match seen {
                    None => seen = Some(total),
                    Some(s) if s != total => return Err(Error::InhomogeneousField),
                    _ => {}
                }
            }
        }
        Ok(seen)
    }

    /// Parity of the field; `None` for the zero field.
    pub fn parity(&self) -> Option<Parity> {
        self.checked_parity().ok().flatten()
    }

    pub fn base(&self) -> &Arc<Chart> {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, idx: usize) -> Poly {
        self.components
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.base))
    }

    pub fn component_named(&self, name: &str) -> Result<Poly> {
        Ok(self.component(self.base.index_of(name)?))
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &Poly)> {
        self.components.iter().map(|(&i, p)| (i, p))
    }

    pub fn try_add(&self, other: &VectorField) -> Result<VectorField> {
        if self.base != other.base {
            return Err(Error::ChartMismatch);
        }
        let comps = self
            .components
            .iter()
            .chain(other.components.iter())
            .map(|(&i, p)| (i, p.clone()));
        VectorField::new(&self.base, comps.collect::<Vec<_>>())
    }

    pub fn try_sub(&self, other: &VectorField) -> Result<VectorField> {
        self.try_add(&other.scale_int(-1))
    }

    pub fn scale_int(&self, n: i64) -> VectorField {
        VectorField {
            base: self.base.clone(),
            components: self
                .components
                .iter()
                .map(|(&i, p)| (i, p.scale(&int(n))))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    /// Left multiplication by a function: `f X = f X^A d/dz^A`.
    pub fn times(&self, f: &Poly) -> Result<VectorField> {
        if f.chart() != &self.base {
            return Err(Error::ChartMismatch);
        }
        VectorField::new(
            &self.base,
            self.components
                .iter()
                .map(|(&i, p)| (i, f * p))
                .collect::<Vec<_>>(),
        )
    }

    /// Principal symbol `X^A p_A` on the cotangent chart.
    pub fn symbol(&self) -> Result<Poly> {
        symbol(self)
    }

    /// Action on a function of the base chart: `X(f) = {symbol(X), f}`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        apply(self, f)
    }
}

/// Principal symbol `X^A p_A`, component then momentum.
pub fn symbol(x: &VectorField) -> Result<Poly> {
    let cot = x.base.cotangent()?;
    let mut out = Poly::zero(&cot);
    for (&idx, c) in &x.components {
        let p = cot.momentum_of(idx).expect("cotangent chart has every momentum");
        out = &out + &(&c.embed(&cot)? * &Poly::generator(&cot, p));
    }
    Ok(out)
}

/// Inverse of [`symbol`] on functions linear in the momenta.
pub fn unsymbol(chi: &Poly) -> Result<VectorField> {
    let chart = chi.chart();
    let base = chart.cotangent_base().ok_or(Error::NotCotangent)?.clone();
    if !chi.has_momentum_degree(1) {
        let found = chi
            .momentum_degree()
            .map_or_else(|| "mixed".to_string(), |d| d.to_string());
        return Err(Error::MomentumDegree { expected: 1, found });
    }
    let mut comps = Vec::new();
    for (parity, part) in chi.parity_parts() {
        for (x, p) in chart.conjugate_pairs() {
            let a = chart.parity(x);
            // d/dp_A (X^B p_B) = (-1)^(A (X + 1)) X^A
            let sign = a.koszul(parity.flip());
            let c = part.left_derivative(p).scale_int(sign).restrict(&base)?;
            if !c.is_zero() {
                comps.push((x, c));
            }
        }
    }
    VectorField::new(&base, comps)
}

/// `X(f) = {symbol(X), f}` for a function `f` on the base chart of `X`. On charts that
/// already contain momenta (forms over a phase space) there is no cotangent chart and
/// the component form `X^A df/dz^A` is used.
pub fn apply(x: &VectorField, f: &Poly) -> Result<Poly> {
    if f.chart() != &x.base {
        return Err(Error::ChartMismatch);
    }
    if !x.base.has_momenta() {
        let cot = x.base.cotangent()?;
        return poisson(&symbol(x)?, &f.embed(&cot)?)?.restrict(&x.base);
    }
    components_apply(x, f)
}

fn components_apply(x: &VectorField, f: &Poly) -> Result<Poly> {
    let mut out = Poly::zero(&x.base);
    for (&idx, c) in &x.components {
        out = &out + &(c * &f.left_derivative(idx));
    }
    Ok(out)
}

/// Lie derivative of a phase-space function along `X`: `{symbol(X), F}`.
pub fn lie_derivative(x: &VectorField, f: &Poly) -> Result<Poly> {
    poisson(&symbol(x)?, f)
}

/// Graded commutator `[X, Y]`, computed as `unsymbol({symbol X, symbol Y})`.
pub fn commutator(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if x.base != y.base {
        return Err(Error::ChartMismatch);
    }
    unsymbol(&poisson(&symbol(x)?, &symbol(y)?)?)
}

/// Weight-counting field `sum w(z) z d/dz`.
pub fn euler_field(chart: &Arc<Chart>) -> Result<VectorField> {
    let comps = chart
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.weight != 0)
        .map(|(i, g)| (i, Poly::generator(chart, i).scale_int(g.weight)))
        .collect::<Vec<_>>();
    VectorField::new(chart, comps)
}

/// The de Rham field `d = d[z] d/dz` on an anticotangent chart.
pub fn de_rham_field(chart: &Arc<Chart>) -> Result<VectorField> {
    if chart.anticotangent_base().is_none() {
        return Err(Error::NotAnticotangent);
    }
    let comps = chart
        .generators()
        .iter()
        .enumerate()
        .filter_map(|(j, g)| match g.kind {
            GenKind::Fibre { of } => Some((of, Poly::generator(chart, j))),
            _ => None,
        })
        .collect::<Vec<_>>();
    VectorField::new(chart, comps)
}

/// De Rham differential of a form on an anticotangent chart.
pub fn de_rham(f: &Poly) -> Result<Poly> {
    apply(&de_rham_field(f.chart())?, f)
}

/// Interior product `i_X = (-1)^X X^A d/d(dz^A)` of a field on the base chart with a
/// form on the anticotangent chart of that base.
pub fn interior(x: &VectorField, form: &Poly) -> Result<Poly> {
    let forms = form.chart();
    match forms.anticotangent_base() {
        Some(b) if b == &x.base => {}
        _ => return Err(Error::NotAnticotangent),
    }
    let sign = x.parity().map_or(1, Parity::sign);
    let mut out = Poly::zero(forms);
    for (&idx, c) in &x.components {
        let fibre = forms.fibre_of(idx).expect("anticotangent chart has every fibre");
        out = &out + &(&c.embed(forms)? * &form.left_derivative(fibre));
    }
    Ok(out.scale_int(sign))
}

/// Canonical symplectic form `sum dp_A dx^A` of a cotangent chart, as a function on
/// its anticotangent chart.
pub fn canonical_symplectic_form(phase: &Arc<Chart>) -> Result<Poly> {
    if phase.cotangent_base().is_none() {
        return Err(Error::NotCotangent);
    }
    let forms = phase.anticotangent()?;
    let mut out = Poly::zero(&forms);
    for (x, p) in phase.conjugate_pairs() {
        let dp = Poly::generator(&forms, forms.fibre_of(p).expect("fibre"));
        let dx = Poly::generator(&forms, forms.fibre_of(x).expect("fibre"));
        out = &out + &(&dp * &dx);
    }
    Ok(out)
}

/// Pull a form back along a map of base charts given by `binding` (generators of the
/// source base by name, images on `target`; unbound generators map by name). Fibres
/// pull back as `d[z] -> d(image of z)`.
pub fn pullback_form(
    form: &Poly,
    target: &Arc<Chart>,
    binding: &HashMap<String, Poly>,
) -> Result<Poly> {
    let source_forms = form.chart();
    let source = source_forms.anticotangent_base().ok_or(Error::NotAnticotangent)?.clone();
    let target_forms = target.anticotangent()?;
    let mut full = HashMap::new();
    for (i, g) in source.generators().iter().enumerate() {
        let image = match binding.get(&g.name) {
            Some(p) => p.clone(),
            None => Poly::var(target, &g.name)?,
        };
        let image = image.embed(&target_forms)?;
        let fibre = source_forms.generator(source_forms.fibre_of(i).expect("fibre")).name.clone();
        full.insert(fibre, de_rham(&image)?);
        full.insert(g.name.clone(), image);
    }
    form.pullback(&target_forms, &full)
}
