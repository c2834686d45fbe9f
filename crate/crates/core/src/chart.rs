//! Generators and charts: the ordered coordinate contexts every polynomial lives on.
//!
//! The declaration order of a chart is the canonical factor order of its monomials.
//! Cotangent and anticotangent extensions append generators after the base ones, so a
//! function on the base chart is also a function on its extensions with the same
//! generator indices.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Grassmann parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u32) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Self {
        self + Parity::Odd
    }

    /// `(-1)^(self * other)` as `+1` or `-1`.
    pub fn koszul(self, other: Parity) -> i64 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }

    /// `(-1)^self` as `+1` or `-1`.
    pub fn sign(self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Role of a generator inside its chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Base,
    /// Momentum conjugate to the generator at index `of`.
    Momentum { of: usize },
    /// Parity-reversed tangent fibre `d[z]` over the generator at index `of`.
    Fibre { of: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub parity: Parity,
    pub weight: i64,
    pub kind: GenKind,
}

impl Generator {
    pub fn is_momentum(&self) -> bool {
        matches!(self.kind, GenKind::Momentum { .. })
    }
}

/// Derived name of the momentum conjugate to `name`.
pub fn momentum_name(name: &str) -> String {
    format!("P[{name}]")
}

/// Derived name of the anticotangent fibre over `name`.
pub fn fibre_name(name: &str) -> String {
    format!("d[{name}]")
}

#[derive(Debug, Clone)]
pub enum Provenance {
    Plain,
    Cotangent(Arc<Chart>),
    Anticotangent(Arc<Chart>),
    Product(Vec<Arc<Chart>>),
}

/// An ordered generator context. Charts are shared behind `Arc` and never mutated.
pub struct Chart {
    gens: Vec<Generator>,
    provenance: Provenance,
    index: HashMap<String, usize>,
    cotangent: OnceLock<Arc<Chart>>,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter().map(|g| &g.name)).finish()
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.gens == other.gens
    }
}

impl Eq for Chart {}

impl Chart {
    fn build(gens: Vec<Generator>, provenance: Provenance) -> Result<Arc<Chart>> {
        let mut index = HashMap::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::DuplicateName(g.name.clone()));
            }
        }
        Ok(Arc::new(Chart {
            gens,
            provenance,
            index,
            cotangent: OnceLock::new(),
        }))
    }

    /// Plain chart from `(name, parity, weight)` declarations.
    pub fn new<S: Into<String>>(decls: impl IntoIterator<Item = (S, Parity, i64)>) -> Result<Arc<Chart>> {
        let gens = decls
            .into_iter()
            .map(|(name, parity, weight)| Generator {
                name: name.into(),
                parity,
                weight,
                kind: GenKind::Base,
            })
            .collect();
        Chart::build(gens, Provenance::Plain)
    }

    /// Product chart: generators of each factor in order. Momenta and fibres keep their
    /// links, shifted to the new positions.
    pub fn product(factors: &[Arc<Chart>]) -> Result<Arc<Chart>> {
        let mut gens = Vec::new();
        for c in factors {
            let offset = gens.len();
            gens.extend(c.gens.iter().map(|g| {
                let kind = match g.kind {
                    GenKind::Base => GenKind::Base,
                    GenKind::Momentum { of } => GenKind::Momentum { of: of + offset },
                    GenKind::Fibre { of } => GenKind::Fibre { of: of + offset },
                };
                Generator { kind, ..g.clone() }
            }));
        }
        Chart::build(gens, Provenance::Product(factors.to_vec()))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, idx: usize) -> &Generator {
        &self.gens[idx]
    }

    pub fn parity(&self, idx: usize) -> Parity {
        self.gens[idx].parity
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Does `self` start with exactly the generators of `base`?
    pub fn extends(&self, base: &Chart) -> bool {
        self.gens.len() >= base.gens.len() && self.gens[..base.gens.len()] == base.gens[..]
    }

    pub fn has_momenta(&self) -> bool {
        self.gens.iter().any(Generator::is_momentum)
    }

    /// `(coordinate index, momentum index)` for every conjugate pair.
    pub fn conjugate_pairs(&self) -> Vec<(usize, usize)> {
        self.gens
            .iter()
            .enumerate()
            .filter_map(|(i, g)| match g.kind {
                GenKind::Momentum { of } => Some((of, i)),
                _ => None,
            })
            .collect()
    }

    /// Index of the momentum conjugate to generator `idx`, if present.
    pub fn momentum_of(&self, idx: usize) -> Option<usize> {
        self.gens
            .iter()
            .position(|g| g.kind == GenKind::Momentum { of: idx })
    }

    /// Index of the fibre `d[z]` over generator `idx`, if present.
    pub fn fibre_of(&self, idx: usize) -> Option<usize> {
        self.gens.iter().position(|g| g.kind == GenKind::Fibre { of: idx })
    }

    /// The chart this one is the cotangent of, if any.
    pub fn cotangent_base(&self) -> Option<&Arc<Chart>> {
        match &self.provenance {
            Provenance::Cotangent(base) => Some(base),
            _ => None,
        }
    }

    pub fn anticotangent_base(&self) -> Option<&Arc<Chart>> {
        match &self.provenance {
            Provenance::Anticotangent(base) => Some(base),
            _ => None,
        }
    }

    /// Cotangent chart: the base generators followed by one momentum `P[z]` per base
    /// generator, with the same parity and opposite weight. Cached per chart.
    pub fn cotangent(self: &Arc<Self>) -> Result<Arc<Chart>> {
        if self.has_momenta() {
            return Err(Error::AlreadyCotangent);
        }
        if let Some(c) = self.cotangent.get() {
            return Ok(c.clone());
        }
        let mut gens = self.gens.clone();
        for (i, g) in self.gens.iter().enumerate() {
            gens.push(Generator {
                name: momentum_name(&g.name),
                parity: g.parity,
                weight: -g.weight,
                kind: GenKind::Momentum { of: i },
            });
        }
        let chart = Chart::build(gens, Provenance::Cotangent(self.clone()))?;
        Ok(self.cotangent.get_or_init(|| chart).clone())
    }

    /// Anticotangent chart with fibre weights `w(dz) = w(z)`.
    pub fn anticotangent(self: &Arc<Self>) -> Result<Arc<Chart>> {
        self.anticotangent_weighted(|g| g.weight)
    }

    /// Anticotangent chart: the base generators followed by `d[z]` of flipped parity per
    /// base generator, weight given by `weight`.
    pub fn anticotangent_weighted(
        self: &Arc<Self>,
        weight: impl Fn(&Generator) -> i64,
    ) -> Result<Arc<Chart>> {
        let mut gens = self.gens.clone();
        for (i, g) in self.gens.iter().enumerate() {
            gens.push(Generator {
                name: fibre_name(&g.name),
                parity: g.parity.flip(),
                weight: weight(g),
                kind: GenKind::Fibre { of: i },
            });
        }
        Chart::build(gens, Provenance::Anticotangent(self.clone()))
    }
}

/// Build a plain chart. Declaration order is the canonical monomial order.
pub fn make_chart<S: Into<String>>(decls: impl IntoIterator<Item = (S, Parity, i64)>) -> Result<Arc<Chart>> {
    Chart::new(decls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Parity::*;

    #[test]
    fn superline_chart() {
        let c = make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.index_of("xi").unwrap(), 1);
        assert_eq!(c.parity(1), Odd);
    }

    #[test]
    fn empty_chart_is_a_point() {
        let c = make_chart(Vec::<(String, Parity, i64)>::new()).unwrap();
        assert!(c.is_empty());
        let t = c.cotangent().unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn weighted_chart() {
        let c = make_chart([("x", Even, 0), ("xs", Odd, 1)]).unwrap();
        assert_eq!(c.generator(1).weight, 1);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = make_chart([("x", Even, 0), ("x", Odd, 0)]).unwrap_err();
        assert_eq!(err, Error::DuplicateName("x".into()));
    }

    #[test]
    fn cotangent_appends_conjugate_momenta() {
        let c = make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap();
        let t = c.cotangent().unwrap();
        let names: Vec<_> = t.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["t", "xi", "P[t]", "P[xi]"]);
        assert_eq!(t.parity(3), Odd);
        assert_eq!(t.conjugate_pairs(), vec![(0, 2), (1, 3)]);
        assert!(Arc::ptr_eq(&t, &c.cotangent().unwrap()));
        assert_eq!(t.cotangent().unwrap_err(), Error::AlreadyCotangent);
    }

    #[test]
    fn cotangent_momentum_weights_are_negated() {
        let c = make_chart([("x", Even, 0), ("eta", Odd, 1)]).unwrap();
        let t = c.cotangent().unwrap();
        assert_eq!(t.generator(t.index_of("P[eta]").unwrap()).weight, -1);
    }

    #[test]
    fn anticotangent_flips_parity() {
        let c = make_chart([("x", Even, 0)]).unwrap();
        let a = c.anticotangent().unwrap();
        assert_eq!(a.generator(1).name, "d[x]");
        assert_eq!(a.parity(1), Odd);
        let c = make_chart([("xi", Odd, 0)]).unwrap();
        assert_eq!(c.anticotangent().unwrap().parity(1), Even);
        let e = make_chart(Vec::<(String, Parity, i64)>::new()).unwrap();
        assert!(e.anticotangent().unwrap().is_empty());
    }
}
