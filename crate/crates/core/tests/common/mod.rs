#![allow(dead_code)]

use std::sync::Arc;

use oddjacobi::{make_chart, Chart, OddJacobiStructure, Parity, Poly};

pub use Parity::{Even, Odd};

pub fn v(c: &Arc<Chart>, name: &str) -> Poly {
    Poly::var(c, name).unwrap()
}

pub fn superline() -> OddJacobiStructure {
    let base = make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap();
    let ph = base.cotangent().unwrap();
    let (pi, p) = (v(&ph, "P[xi]"), v(&ph, "P[t]"));
    OddJacobiStructure::new(&base, -(&pi * &p), -pi).unwrap()
}

/// Coordinates `x1..xn` (even, weight 0), `xs1..xsn` (odd, weight 1), `tau` (odd, weight 1).
pub fn contact_chart(n: usize) -> Arc<Chart> {
    let mut decls = Vec::new();
    for a in 1..=n {
        decls.push((format!("x{a}"), Even, 0));
    }
    for a in 1..=n {
        decls.push((format!("xs{a}"), Odd, 1));
    }
    decls.push(("tau".to_string(), Odd, 1));
    make_chart(decls).unwrap()
}

/// `S = p_*^a (p_a + x*_a pi)`, `Q = -pi`.
pub fn odd_contact(n: usize) -> OddJacobiStructure {
    let base = contact_chart(n);
    let ph = base.cotangent().unwrap();
    let pi = v(&ph, "P[tau]");
    let mut s = Poly::zero(&ph);
    for a in 1..=n {
        let inner = &v(&ph, &format!("P[x{a}]")) + &(&v(&ph, &format!("xs{a}")) * &pi);
        s = &s + &(&v(&ph, &format!("P[xs{a}]")) * &inner);
    }
    OddJacobiStructure::new(&base, s, -pi).unwrap()
}

/// The de Rham differential on `ΠTℝⁿ` as a structure with `S = 0`.
pub fn de_rham(n: usize) -> OddJacobiStructure {
    let plain = make_chart((1..=n).map(|a| (format!("x{a}"), Even, 0))).unwrap();
    let base = plain.anticotangent().unwrap();
    let d = oddjacobi::phase::de_rham_field(&base).unwrap();
    let ph = base.cotangent().unwrap();
    OddJacobiStructure::from_field(Poly::zero(&ph), &d).unwrap()
}

pub fn parity_of(f: &Poly) -> Parity {
    f.parity_of().homogeneous().unwrap_or(Even)
}

/// Odd, momentum-quadratic function with random polynomial coefficients.
pub fn random_s(base: &Arc<Chart>, seed: u64) -> Poly {
    let ph = base.cotangent().unwrap();
    let n = base.len();
    let mut s = Poly::zero(&ph);
    for a in 0..n {
        for b in a..n {
            let parity = Odd + base.parity(a) + base.parity(b);
            let c = oddjacobi::random_function(base, 2, parity, seed.wrapping_mul(31).wrapping_add((a * n + b) as u64));
            let pa = Poly::generator(&ph, ph.momentum_of(a).unwrap());
            let pb = Poly::generator(&ph, ph.momentum_of(b).unwrap());
            s = &s + &(&(&c.embed(&ph).unwrap() * &pa) * &pb);
        }
    }
    s
}

/// Odd, momentum-linear function with random polynomial coefficients.
pub fn random_q(base: &Arc<Chart>, seed: u64) -> Poly {
    let ph = base.cotangent().unwrap();
    let mut q = Poly::zero(&ph);
    for a in 0..base.len() {
        let c = oddjacobi::random_function(base, 2, Odd + base.parity(a), seed.wrapping_mul(17).wrapping_add(a as u64));
        q = &q + &(&c.embed(&ph).unwrap() * &Poly::generator(&ph, ph.momentum_of(a).unwrap()));
    }
    q
}

/// `ΠT*ℝⁿ`: `x1..xn` even weight 0, `xs1..xsn` odd weight 1.
pub fn anticotangent_rn(n: usize) -> Arc<Chart> {
    let mut decls: Vec<(String, Parity, i64)> = (1..=n).map(|a| (format!("x{a}"), Even, 0)).collect();
    decls.extend((1..=n).map(|a| (format!("xs{a}"), Odd, 1)));
    make_chart(decls).unwrap()
}
