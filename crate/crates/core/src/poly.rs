//! Canonical-form graded polynomials with exact rational coefficients.
//!
//! A monomial is a product of generators in chart declaration order, optionally times
//! formal exponentials `exp(rate*t)` of even generators. Odd generators appear at most
//! once. Two equal polynomials have identical term maps, so equality is syntactic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chart::{Chart, Parity};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Product of generators in canonical order, with exponential tags keyed by base index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
    exps: Vec<(u32, i64)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(idx: usize) -> Self {
        Monomial {
            factors: vec![(idx as u32, 1)],
            exps: Vec::new(),
        }
    }

    /// `(generator index, exponent)` in declaration order.
    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.factors.iter().map(|&(i, e)| (i as usize, e))
    }

    /// `(base generator index, rate)` of the exponential tags.
    pub fn exp_tags(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.exps.iter().map(|&(i, r)| (i as usize, r))
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.factors
            .iter()
            .find(|f| f.0 as usize == idx)
            .map_or(0, |f| f.1)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exps.is_empty()
    }

    pub fn parity(&self, chart: &Chart) -> Parity {
        let odd = self
            .factors
            .iter()
            .filter(|&&(i, _)| chart.parity(i as usize).is_odd())
            .count();
        Parity::from_bit(odd as u32)
    }

    pub fn weight(&self, chart: &Chart) -> i64 {
        self.factors
            .iter()
            .map(|&(i, e)| chart.generator(i as usize).weight * e as i64)
            .sum()
    }

    /// Canonical product `self * other` and the Koszul sign of reordering, or `None`
    /// when an odd generator would be squared.
    fn mul(&self, other: &Monomial, chart: &Chart) -> Option<(Monomial, bool)> {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let mut negative = false;
        // odd factors of `self` strictly after the current merge point
        let mut odd_left_remaining = self
            .factors
            .iter()
            .filter(|f| chart.parity(f.0 as usize).is_odd())
            .count();
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            let take_left = match (self.factors.get(i), other.factors.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        if chart.parity(a.0 as usize).is_odd() {
                            return None;
                        }
                        factors.push((a.0, a.1 + b.1));
                        i += 1;
                        j += 1;
                        continue;
                    }
                },
                (Some(_), None) => true,
                (None, _) => false,
            };
            if take_left {
                let a = self.factors[i];
                if chart.parity(a.0 as usize).is_odd() {
                    odd_left_remaining -= 1;
                }
                factors.push(a);
                i += 1;
            } else {
                let b = other.factors[j];
                if chart.parity(b.0 as usize).is_odd() && odd_left_remaining % 2 == 1 {
                    negative = !negative;
                }
                factors.push(b);
                j += 1;
            }
        }
        let mut exps = self.exps.clone();
        for &(base, rate) in &other.exps {
            match exps.binary_search_by_key(&base, |e| e.0) {
                Ok(pos) => {
                    exps[pos].1 += rate;
                    if exps[pos].1 == 0 {
                        exps.remove(pos);
                    }
                }
                Err(pos) => exps.insert(pos, (base, rate)),
            }
        }
        Some((Monomial { factors, exps }, negative))
    }

    fn max_index(&self) -> Option<usize> {
        let f = self.factors.last().map(|f| f.0 as usize);
        let e = self.exps.last().map(|e| e.0 as usize);
        f.max(e)
    }
}

impl Ord for Monomial {
    /// Total degree ascending; within a degree, larger exponents on earlier generators
    /// first; exponential tags last.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                for (a, b) in self.factors.iter().zip(&other.factors) {
                    match a.0.cmp(&b.0) {
                        Ordering::Equal => match b.1.cmp(&a.1) {
                            Ordering::Equal => continue,
                            ord => return ord,
                        },
                        ord => return ord,
                    }
                }
                self.factors.len().cmp(&other.factors.len())
            })
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Parity classification of a polynomial. The zero polynomial counts as even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyParity {
    Even,
    Odd,
    Mixed,
}

impl PolyParity {
    pub fn homogeneous(self) -> Option<Parity> {
        match self {
            PolyParity::Even => Some(Parity::Even),
            PolyParity::Odd => Some(Parity::Odd),
            PolyParity::Mixed => None,
        }
    }
}

/// Weight classification. The zero polynomial has weight 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightOf {
    Homogeneous(i64),
    Inhomogeneous,
}

#[derive(Clone, Debug)]
pub struct Poly {
    chart: Arc<Chart>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.chart == other.chart && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(chart: &Arc<Chart>) -> Poly {
        Poly {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Arc<Chart>) -> Poly {
        Poly::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Arc<Chart>, c: Rational) -> Poly {
        Poly::from_terms(chart, [(Monomial::one(), c)])
    }

    pub fn integer(chart: &Arc<Chart>, n: i64) -> Poly {
        Poly::constant(chart, int(n))
    }

    pub fn generator(chart: &Arc<Chart>, idx: usize) -> Poly {
        assert!(idx < chart.len(), "generator index out of range");
        Poly::from_terms(chart, [(Monomial::generator(idx), Rational::one())])
    }

    pub fn var(chart: &Arc<Chart>, name: &str) -> Result<Poly> {
        Ok(Poly::generator(chart, chart.index_of(name)?))
    }

    /// Formal exponential `exp(rate * base)` of an even generator.
    pub fn exp_tag(chart: &Arc<Chart>, base: &str, rate: i64) -> Result<Poly> {
        let idx = chart.index_of(base)?;
        if chart.parity(idx).is_odd() {
            return Err(Error::OddExpBase(base.to_string()));
        }
        if rate == 0 {
            return Ok(Poly::one(chart));
        }
        let m = Monomial {
            factors: Vec::new(),
            exps: vec![(idx as u32, rate)],
        };
        Ok(Poly::from_terms(chart, [(m, Rational::one())]))
    }

    fn from_terms(chart: &Arc<Chart>, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Poly {
        let mut p = Poly::zero(chart);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_chart(&self, other: &Poly) -> Result<()> {
        if Arc::ptr_eq(&self.chart, &other.chart) || self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.same_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.same_chart(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    /// Graded-commutative product in canonical form.
    pub fn multiply(&self, other: &Poly) -> Result<Poly> {
        self.same_chart(other)?;
        let mut out = Poly::zero(&self.chart);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, negative)) = ma.mul(mb, &self.chart) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.chart);
        }
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Poly {
        self.scale(&int(n))
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one(&self.chart);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    /// Left derivative with respect to the generator at `idx`.
    pub fn left_derivative(&self, idx: usize) -> Poly {
        let odd = self.chart.parity(idx).is_odd();
        let mut out = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            if let Some(pos) = m.factors.iter().position(|f| f.0 as usize == idx) {
                let (_, e) = m.factors[pos];
                let mut negative = false;
                if odd {
                    let odd_before = m.factors[..pos]
                        .iter()
                        .filter(|f| self.chart.parity(f.0 as usize).is_odd())
                        .count();
                    negative = odd_before % 2 == 1;
                }
                let mut dm = m.clone();
                if e == 1 {
                    dm.factors.remove(pos);
                } else {
                    dm.factors[pos].1 -= 1;
                }
                let coeff = c * int(e as i64);
                out.add_term(dm, if negative { -coeff } else { coeff });
            }
            if let Some(&(_, rate)) = m.exps.iter().find(|x| x.0 as usize == idx) {
                out.add_term(m.clone(), c * int(rate));
            }
        }
        out
    }

    pub fn derivative(&self, name: &str) -> Result<Poly> {
        Ok(self.left_derivative(self.chart.index_of(name)?))
    }

    pub fn parity_of(&self) -> PolyParity {
        let mut seen = None;
        for m in self.terms.keys() {
            let p = m.parity(&self.chart);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return PolyParity::Mixed,
                _ => {}
            }
        }
        match seen {
            Some(Parity::Odd) => PolyParity::Odd,
            _ => PolyParity::Even,
        }
    }

    /// `(even part, odd part)`.
    pub fn split_parity(&self) -> (Poly, Poly) {
        let mut even = Poly::zero(&self.chart);
        let mut odd = Poly::zero(&self.chart);
        for (m, c) in &self.terms {
            let target = if m.parity(&self.chart).is_odd() { &mut odd } else { &mut even };
            target.terms.insert(m.clone(), c.clone());
        }
        (even, odd)
    }

    /// Nonzero homogeneous parts, tagged by parity.
    pub fn parity_parts(&self) -> Vec<(Parity, Poly)> {
        let (even, odd) = self.split_parity();
        let mut parts = Vec::with_capacity(2);
        if !even.is_zero() {
            parts.push((Parity::Even, even));
        }
        if !odd.is_zero() {
            parts.push((Parity::Odd, odd));
        }
        parts
    }

    pub fn weight_of(&self) -> WeightOf {
        let mut seen = None;
        for m in self.terms.keys() {
            let w = m.weight(&self.chart);
            match seen {
                None => seen = Some(w),
                Some(v) if v != w => return WeightOf::Inhomogeneous,
                _ => {}
            }
        }
        WeightOf::Homogeneous(seen.unwrap_or(0))
    }

    /// Zero, or homogeneous of weight `w`.
    pub fn has_weight(&self, w: i64) -> bool {
        self.terms.keys().all(|m| m.weight(&self.chart) == w)
    }

    /// Polynomial degree in the momentum generators, if homogeneous. Zero gives `None`.
    pub fn momentum_degree(&self) -> Option<u32> {
        let mut seen = None;
        for m in self.terms.keys() {
            let d: u32 = m
                .factors()
                .filter(|&(i, _)| self.chart.generator(i).is_momentum())
                .map(|(_, e)| e)
                .sum();
            match seen {
                None => seen = Some(d),
                Some(v) if v != d => return None,
                _ => {}
            }
        }
        seen
    }

    /// Zero, or homogeneous of momentum degree `d`.
    pub fn has_momentum_degree(&self, d: u32) -> bool {
        self.is_zero() || self.momentum_degree() == Some(d)
    }

    pub fn is_momentum_free(&self) -> bool {
        self.terms.keys().all(|m| {
            m.factors()
                .all(|(i, _)| !self.chart.generator(i).is_momentum())
        })
    }

    /// Reinterpret on a chart that starts with this polynomial's chart.
    pub fn embed(&self, target: &Arc<Chart>) -> Result<Poly> {
        if !target.extends(&self.chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(Poly {
            chart: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Reinterpret on a prefix chart; fails if a generator outside the prefix occurs.
    pub fn restrict(&self, target: &Arc<Chart>) -> Result<Poly> {
        if !self.chart.extends(target) {
            return Err(Error::ChartMismatch);
        }
        if let Some(m) = self.terms.keys().find(|m| m.max_index().is_some_and(|i| i >= target.len())) {
            let i = m.max_index().unwrap_or(0);
            return Err(Error::UnknownGenerator(self.chart.generator(i).name.clone()));
        }
        Ok(Poly {
            chart: target.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Substitution on the same chart; unbound generators map to themselves.
    pub fn substitute(&self, binding: &HashMap<usize, Poly>) -> Result<Poly> {
        let named = binding
            .iter()
            .map(|(&i, p)| (self.chart.generator(i).name.clone(), p.clone()))
            .collect();
        self.pullback(&self.chart.clone(), &named)
    }

    /// Algebra morphism to `target`: bound generators map to their images, every other
    /// generator to the generator of the same name in `target`. Images must have the
    /// parity of the generator they replace.
    pub fn pullback(&self, target: &Arc<Chart>, binding: &HashMap<String, Poly>) -> Result<Poly> {
        for (name, image) in binding {
            let idx = self.chart.index_of(name)?;
            image.same_chart(&Poly::zero(target))?;
            let expected = self.chart.parity(idx);
            match image.parity_of() {
                PolyParity::Mixed => return Err(Error::MixedBinding(name.clone())),
                p if !image.is_zero() && p.homogeneous() != Some(expected) => {
                    return Err(Error::ParityMismatch {
                        name: name.clone(),
                        expected,
                        found: expected.flip(),
                    })
                }
                _ => {}
            }
        }
        let mut images: HashMap<usize, Poly> = HashMap::new();
        let mut image_of = |idx: usize| -> Result<Poly> {
            if let Some(p) = images.get(&idx) {
                return Ok(p.clone());
            }
            let g = self.chart.generator(idx);
            let p = match binding.get(&g.name) {
                Some(p) => p.clone(),
                None => {
                    let t = target.index_of(&g.name)?;
                    if target.parity(t) != g.parity {
                        return Err(Error::ParityMismatch {
                            name: g.name.clone(),
                            expected: g.parity,
                            found: target.parity(t),
                        });
                    }
                    Poly::generator(target, t)
                }
            };
            images.insert(idx, p.clone());
            Ok(p)
        };
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for &(base, rate) in &m.exps {
                let name = &self.chart.generator(base as usize).name;
                if binding.contains_key(name) {
                    return Err(Error::ExpSubstitution(name.clone()));
                }
                term = &term * &Poly::exp_tag(target, name, rate)?;
            }
            for (idx, e) in m.factors() {
                let img = image_of(idx)?;
                for _ in 0..e {
                    term = &term * &img;
                }
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Move to another chart, matching generators by name.
    pub fn transfer(&self, target: &Arc<Chart>) -> Result<Poly> {
        if target.extends(&self.chart) {
            return self.embed(target);
        }
        self.pullback(target, &HashMap::new())
    }

    /// Render one generator power or exponential tag.
    fn render_monomial(&self, m: &Monomial, out: &mut String) {
        let mut first = true;
        let mut sep = |out: &mut String| {
            if !first {
                out.push('*');
            }
            first = false;
        };
        for (base, rate) in m.exp_tags() {
            sep(out);
            out.push_str(&format!("exp({}*{})", rate, self.chart.generator(base).name));
        }
        for (idx, e) in m.factors() {
            sep(out);
            out.push_str(&self.chart.generator(idx).name);
            if e > 1 {
                out.push_str(&format!("^{e}"));
            }
        }
    }
}

fn render_rational(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

impl fmt::Display for Poly {
    /// Canonical text form: terms in monomial order, coefficients as `n/d`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k == 0 {
                out.push_str(&render_rational(c));
            } else if c.is_negative() {
                out.push_str(" - ");
                out.push_str(&render_rational(&-c.clone()));
            } else {
                out.push_str(" + ");
                out.push_str(&render_rational(c));
            }
            if !m.is_one() {
                out.push('*');
                self.render_monomial(m, &mut out);
            }
        }
        f.write_str(&out)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("chart mismatch in addition")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("chart mismatch in subtraction")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.multiply(rhs).expect("chart mismatch in multiplication")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::make_chart;
    use Parity::*;

    fn superline() -> Arc<Chart> {
        make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap()
    }

    fn v(c: &Arc<Chart>, n: &str) -> Poly {
        Poly::var(c, n).unwrap()
    }

    #[test]
    fn odd_square_vanishes() {
        let c = superline();
        let xi = v(&c, "xi");
        assert!((&xi * &xi).is_zero());
    }

    #[test]
    fn odd_transposition_flips_sign() {
        let c = make_chart([("a", Odd, 0), ("b", Odd, 0)]).unwrap();
        let (a, b) = (v(&c, "a"), v(&c, "b"));
        assert_eq!(&b * &a, -(&a * &b));
        assert_eq!((&a * &b).to_string(), "1/1*a*b");
        assert_eq!((&b * &a).to_string(), "-1/1*a*b");
    }

    /// Sign of sorting a word of generator indices into declaration order, counted by
    /// bubble sort transpositions of odd-odd neighbours.
    fn bubble_sign(mut word: Vec<usize>, chart: &Chart) -> i64 {
        let mut sign = 1;
        for i in 0..word.len() {
            for j in 0..word.len() - 1 - i {
                if word[j] > word[j + 1] {
                    if chart.parity(word[j]).is_odd() && chart.parity(word[j + 1]).is_odd() {
                        sign = -sign;
                    }
                    word.swap(j, j + 1);
                }
            }
        }
        sign
    }

    #[test]
    fn reordering_matches_bubble_sort_oracle() {
        // (eta1 pi1) * (pi2 eta2) on a chart ordered eta1, eta2, pi1, pi2
        let c = make_chart([("eta1", Odd, 1), ("eta2", Odd, 1), ("pi1", Odd, -1), ("pi2", Odd, -1)]).unwrap();
        let lhs = &v(&c, "eta1") * &v(&c, "pi1");
        let rhs = &v(&c, "pi2") * &v(&c, "eta2");
        let prod = &lhs * &rhs;
        let expected = bubble_sign(vec![0, 2, 3, 1], &c);
        assert_eq!(expected, 1);
        let canonical = &(&(&v(&c, "eta1") * &v(&c, "eta2")) * &v(&c, "pi1")) * &v(&c, "pi2");
        assert_eq!(prod, canonical.scale_int(expected));
        // rhs alone: pi2 eta2 -> -eta2 pi2
        assert_eq!(rhs, (&v(&c, "eta2") * &v(&c, "pi2")).scale_int(bubble_sign(vec![3, 1], &c)));
    }

    #[test]
    fn derivative_of_leading_and_trailing_odd_factor() {
        let c = superline();
        let (t, xi) = (v(&c, "t"), v(&c, "xi"));
        assert_eq!((&xi * &t).derivative("xi").unwrap(), t);
        assert_eq!((&t * &xi).derivative("xi").unwrap(), t);
    }

    #[test]
    fn left_derivative_sign_past_odd_factor() {
        let c = make_chart([("a", Odd, 0), ("b", Odd, 0)]).unwrap();
        let ab = &v(&c, "a") * &v(&c, "b");
        assert_eq!(ab.derivative("b").unwrap(), -v(&c, "a"));
        assert_eq!(ab.derivative("a").unwrap(), v(&c, "b"));
    }

    #[test]
    fn derivative_of_exponential_tag() {
        let c = make_chart([("t", Even, 0), ("p", Even, 0)]).unwrap();
        let f = &Poly::exp_tag(&c, "t", -1).unwrap() * &v(&c, "p");
        assert_eq!(f.derivative("t").unwrap(), -&f);
        let g = &Poly::exp_tag(&c, "t", 3).unwrap() * &v(&c, "t").pow(2);
        let expected = &(&Poly::exp_tag(&c, "t", 3).unwrap() * &v(&c, "t")).scale_int(2) + &g.scale_int(3);
        assert_eq!(g.derivative("t").unwrap(), expected);
    }

    #[test]
    fn exp_tag_group_law() {
        let c = superline();
        let a = Poly::exp_tag(&c, "t", 2).unwrap();
        let b = Poly::exp_tag(&c, "t", -5).unwrap();
        assert_eq!(&a * &b, Poly::exp_tag(&c, "t", -3).unwrap());
        assert_eq!(Poly::exp_tag(&c, "t", 0).unwrap(), Poly::one(&c));
        assert_eq!(&a * &Poly::exp_tag(&c, "t", -2).unwrap(), Poly::one(&c));
        assert_eq!(Poly::exp_tag(&c, "xi", 1).unwrap_err(), Error::OddExpBase("xi".into()));
    }

    #[test]
    fn parity_classification() {
        let c = superline();
        let (t, xi) = (v(&c, "t"), v(&c, "xi"));
        assert_eq!((&xi * &t).parity_of(), PolyParity::Odd);
        assert_eq!((&Poly::one(&c) + &t.pow(2)).parity_of(), PolyParity::Even);
        assert_eq!((&t + &xi).parity_of(), PolyParity::Mixed);
    }

    #[test]
    fn weight_classification() {
        let c = make_chart([("t", Even, 0), ("xs", Odd, 1), ("pi", Odd, -1), ("Q", Even, 0)]).unwrap();
        assert_eq!((&v(&c, "pi") * &v(&c, "Q")).weight_of(), WeightOf::Homogeneous(-1));
        assert_eq!(Poly::one(&c).weight_of(), WeightOf::Homogeneous(0));
        assert_eq!((&v(&c, "t") + &v(&c, "xs")).weight_of(), WeightOf::Inhomogeneous);
    }

    #[test]
    fn substitution_basics() {
        let c = superline();
        let (t, xi) = (v(&c, "t"), v(&c, "xi"));
        let f = &(&t * &xi) + &t.pow(2);
        assert_eq!(f.substitute(&HashMap::new()).unwrap(), f);
        let b = HashMap::from([(1usize, Poly::zero(&c))]);
        assert_eq!(f.substitute(&b).unwrap(), t.pow(2));
        let bad = HashMap::from([(1usize, t.clone())]);
        assert!(matches!(f.substitute(&bad), Err(Error::ParityMismatch { .. })));
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let a = superline();
        let b = make_chart([("s", Even, 0)]).unwrap();
        assert_eq!(
            Poly::one(&a).multiply(&Poly::one(&b)).unwrap_err(),
            Error::ChartMismatch
        );
    }

    #[test]
    fn rendering_is_canonical() {
        let c = superline();
        let (t, xi) = (v(&c, "t"), v(&c, "xi"));
        let f = &(&(&xi * &t).scale(&rational(-3, 2)) + &Poly::integer(&c, 2)) + &t.pow(3);
        assert_eq!(f.to_string(), "2/1 - 3/2*t*xi + 1/1*t^3");
        let e = &Poly::exp_tag(&c, "t", -1).unwrap() * &xi;
        assert_eq!(e.to_string(), "1/1*exp(-1*t)*xi");
        assert_eq!(Poly::zero(&c).to_string(), "0");
    }

    #[test]
    fn transfer_reorders_with_signs() {
        let a = make_chart([("a", Odd, 0), ("b", Odd, 0)]).unwrap();
        let b = make_chart([("b", Odd, 0), ("a", Odd, 0)]).unwrap();
        let ab = &v(&a, "a") * &v(&a, "b");
        let moved = ab.transfer(&b).unwrap();
        assert_eq!(moved.to_string(), "-1/1*b*a");
    }
}
