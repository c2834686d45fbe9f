//! Directive execution.

use oddjacobi::algebroid::{
    algebroid_chain, extend_lie_to_jacobi, extract_quasiq, lie_algebroid_from_jacobi, section_report,
    verify_schoutenized_algebroid, weight_report,
};
use oddjacobi::constructions::{
    check_exact_qs_expansion, exact_qs_to_jacobi, quasiq_to_homological, schoutenize, verify_exact_qs,
    verify_qs, verify_quasi_q,
};
use oddjacobi::phase::{apply, commutator, symbol};
use oddjacobi::{
    check_theorem_odd_jacobi_algebra, int, random_triples, verify_odd_jacobi, OddJacobiStructure, Rational,
    VerificationReport,
};

use crate::elab::{Bound, Conversion, Program, Step, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub max_degree: u32,
    /// Random triples checked against the odd Jacobi algebra identities per `check`.
    pub samples: usize,
    pub parallel: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            max_degree: 3,
            samples: 8,
            parallel: false,
        }
    }
}

/// Name of the even coordinate added by `convert ... via extend`.
pub const EXTENSION_COORD: &str = "tau";

fn pencil_points() -> Vec<(Rational, Rational)> {
    vec![(int(1), int(0)), (int(0), int(1)), (int(1), int(1)), (int(2), int(3))]
}

fn jacobi_check(j: &OddJacobiStructure, opts: &Options) -> oddjacobi::Result<VerificationReport> {
    let mut report = verify_odd_jacobi(j);
    if report.verdict() && opts.samples > 0 {
        let triples = random_triples(j.base(), opts.samples, opts.max_degree, opts.seed);
        report.absorb("algebra", check_theorem_odd_jacobi_algebra(j, &triples)?);
    }
    Ok(report)
}

fn check(b: &Bound, opts: &Options) -> oddjacobi::Result<VerificationReport> {
    match &b.value {
        Structure::Jacobi(j) => jacobi_check(j, opts),
        Structure::QuasiQ(d) => Ok(verify_quasi_q(d)),
        Structure::ExactQs(d) => {
            let mut report = verify_exact_qs(d);
            if report.verdict() {
                for (a, c) in pencil_points() {
                    let j = exact_qs_to_jacobi(d, &a, &c)?;
                    report.absorb(&format!("pencil ({a},{c})"), verify_odd_jacobi(&j));
                }
                report.absorb("", check_exact_qs_expansion(d, &pencil_points())?);
            }
            Ok(report)
        }
        Structure::Algebroid { data, .. } => {
            let mut report = algebroid_chain(data)?;
            report.absorb("", weight_report(data)?);
            Ok(report)
        }
    }
}

fn convert(b: &Bound, via: Conversion) -> oddjacobi::Result<VerificationReport> {
    let mut report = VerificationReport::new("");
    match (via, &b.value) {
        (Conversion::Schoutenize, Structure::Algebroid { data, .. }) => {
            let qs = oddjacobi::algebroid::schoutenize_algebroid(data)?;
            report.value("Sbar", qs.sbar.clone());
            report.value("Qbar", qs.qbar.clone());
            report.absorb("", verify_schoutenized_algebroid(data)?);
        }
        (Conversion::Schoutenize, Structure::Jacobi(j)) => {
            let qs = schoutenize(j)?;
            report.value("Sbar", qs.sbar.clone());
            report.value("Qbar", qs.qbar.clone());
            report.absorb("", verify_qs(&qs));
        }
        (Conversion::Jacobi, Structure::ExactQs(d)) => {
            let j = exact_qs_to_jacobi(d, &int(1), &int(1))?;
            report.value("S", j.s().clone());
            report.value("Q", j.q().clone());
            report.absorb("", verify_odd_jacobi(&j));
        }
        (Conversion::Homological, Structure::QuasiQ(d)) => {
            let (q, phi) = quasiq_to_homological(d)?;
            report.value("Q", symbol(&q)?);
            report.value("phi", phi.clone());
            report.residual("[Q,Q]", symbol(&commutator(&q, &q)?)?);
            report.residual("Q(phi)", apply(&q, &phi)?);
        }
        (Conversion::QuasiQ, Structure::Algebroid { data, .. }) => {
            let d = extract_quasiq(data)?;
            report.value("D", symbol(&d.d)?);
            report.value("q", d.q.clone());
            report.absorb("", verify_quasi_q(&d));
        }
        (Conversion::Lie, Structure::Algebroid { data, .. }) => {
            let (q, phi) = lie_algebroid_from_jacobi(data)?;
            report.value("Q", symbol(&q)?);
            report.value("phi", phi.clone());
            report.residual("[Q,Q]", symbol(&commutator(&q, &q)?)?);
            report.residual("Q(phi)", apply(&q, &phi)?);
        }
        (Conversion::Sections, Structure::Algebroid { data, .. }) => {
            report.absorb("", section_report(data)?);
        }
        (Conversion::Extend, Structure::Algebroid { data, .. }) => {
            let j = extend_lie_to_jacobi(data, EXTENSION_COORD)?;
            report.value("S", j.s().clone());
            report.value("Q", j.q().clone());
            report.absorb("", j.verified().cloned().unwrap_or_else(|| verify_odd_jacobi(&j)));
        }
        _ => unreachable!("conversion checked during elaboration"),
    }
    Ok(report)
}

fn execute(program: &Program, step: &Step, opts: &Options) -> VerificationReport {
    let (title, result) = match step {
        Step::Check { target } => {
            let b = &program.structures[*target];
            (b.name.clone(), check(b, opts))
        }
        Step::Bracket { target, f, g, label } => {
            let b = &program.structures[*target];
            let j = b.value.jacobi().expect("bracket target checked during elaboration");
            let result = j.bracket(f, g).map(|v| {
                let mut r = VerificationReport::new("");
                r.value(label.clone(), v);
                r
            });
            (format!("{} bracket", b.name), result)
        }
        Step::Convert { target, via } => {
            let b = &program.structures[*target];
            (format!("{} via {}", b.name, via.name()), convert(b, *via))
        }
    };
    let mut report = result.unwrap_or_else(|err| {
        let mut r = VerificationReport::new("");
        r.claim("error", false, err.to_string());
        r
    });
    report.structure = title;
    report
}

/// Execute every directive, one report each, in directive order.
pub fn run(program: &Program, opts: &Options) -> Vec<VerificationReport> {
    if !opts.parallel {
        return program.steps.iter().map(|s| execute(program, s, opts)).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = program
            .steps
            .iter()
            .map(|s| scope.spawn(move || execute(program, s, opts)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("directive thread panicked")).collect()
    })
}
