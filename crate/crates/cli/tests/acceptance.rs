//! End-to-end acceptance run. Every criterion prints one line with its verdict and
//! wall time; the process exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use oddjacobi::algebroid::*;
use oddjacobi::constructions::{
    check_schoutenization_identities, exact_qs_to_jacobi, schoutenize, verify_exact_qs, verify_qs,
};
use oddjacobi::phase::poisson;
use oddjacobi::{
    check_derivation_and_morphism, check_q_closed_hamiltonian, check_theorem_odd_jacobi_algebra, int, make_chart,
    random_function, random_triples, rational, verify_odd_jacobi, Chart, OddJacobiStructure, Parity, Poly,
    VerificationReport,
};
use oddjacobi_cli::catalog::{self, NAMES, NEGATIVE};
use oddjacobi_cli::elab::Structure;
use oddjacobi_cli::{elaborate, verify_source, Options};

use Parity::{Even, Odd};

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passes(r: &VerificationReport) -> Outcome {
    ensure(r.verdict(), || format!("{r}"))
}

fn v(c: &Arc<Chart>, name: &str) -> Poly {
    Poly::var(c, name).unwrap()
}

fn parity_of(f: &Poly) -> Parity {
    f.parity_of().homogeneous().unwrap_or(Even)
}

fn parity(seed: u64) -> Parity {
    if (seed >> 5).is_multiple_of(2) {
        Even
    } else {
        Odd
    }
}

fn superline() -> OddJacobiStructure {
    let base = make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap();
    let ph = base.cotangent().unwrap();
    let (pi, p) = (v(&ph, "P[xi]"), v(&ph, "P[t]"));
    OddJacobiStructure::new(&base, -(&pi * &p), -pi).unwrap()
}

/// `S = p*(p + x* pi)`, `Q = -pi` on `(x, x* | tau)`, written out by hand.
fn contact_one() -> OddJacobiStructure {
    let base = make_chart([("x1", Even, 0), ("xs1", Odd, 1), ("tau", Odd, 1)]).unwrap();
    let ph = base.cotangent().unwrap();
    let pi = v(&ph, "P[tau]");
    let s = &v(&ph, "P[xs1]") * &(&v(&ph, "P[x1]") + &(&v(&ph, "xs1") * &pi));
    OddJacobiStructure::new(&base, s, -pi).unwrap()
}

fn program(name: &str) -> oddjacobi_cli::Program {
    let model = catalog::catalog(name).unwrap();
    elaborate(&model).unwrap()
}

fn random_s(base: &Arc<Chart>, seed: u64) -> Poly {
    let ph = base.cotangent().unwrap();
    let n = base.len();
    let mut s = Poly::zero(&ph);
    for a in 0..n {
        for b in a..n {
            let c = random_function(base, 2, Odd + base.parity(a) + base.parity(b), seed.wrapping_mul(31) + (a * n + b) as u64);
            let pa = Poly::generator(&ph, ph.momentum_of(a).unwrap());
            let pb = Poly::generator(&ph, ph.momentum_of(b).unwrap());
            s = &s + &(&(&c.embed(&ph).unwrap() * &pa) * &pb);
        }
    }
    s
}

fn random_q(base: &Arc<Chart>, seed: u64) -> Poly {
    let ph = base.cotangent().unwrap();
    let mut q = Poly::zero(&ph);
    for a in 0..base.len() {
        let c = random_function(base, 2, Odd + base.parity(a), seed.wrapping_mul(17) + a as u64);
        q = &q + &(&c.embed(&ph).unwrap() * &Poly::generator(&ph, ph.momentum_of(a).unwrap()));
    }
    q
}

fn superline_residuals() -> Outcome {
    let j = superline();
    let r = verify_odd_jacobi(&j);
    passes(&r)?;
    let zeros = r.conditions.iter().filter_map(|c| r.residual_of(&c.name)).filter(|p| p.is_zero()).count();
    ensure(zeros == 3, || format!("expected three zero residuals, got {zeros}\n{r}"))?;
    let ss = poisson(j.s(), j.s()).unwrap();
    let rhs = (j.q() * j.s()).scale_int(-2);
    ensure(ss.is_zero() && rhs.is_zero(), || format!("{{S,S}} = {ss}, -2QS = {rhs}"))?;
    let from_catalog = program("superline");
    let b = from_catalog.structure("superline").unwrap();
    ensure(b.value.jacobi() == Some(&j), || "catalog superline differs".into())
}

fn odd_contact() -> Outcome {
    for n in 1..=2 {
        let j = odd_contact_structure(n).map_err(|e| e.to_string())?;
        passes(&verify_odd_jacobi(&j))?;
        passes(&contact_check(n).map_err(|e| e.to_string())?)?;
    }
    Ok(())
}

fn odd_jacobi_algebra() -> Outcome {
    let structures = [superline(), odd_contact_structure(1).unwrap(), odd_contact_structure(2).unwrap()];
    for (k, j) in structures.iter().enumerate() {
        let samples = random_triples(j.base(), 100, 3, 1000 + k as u64);
        let r = check_theorem_odd_jacobi_algebra(j, &samples).map_err(|e| e.to_string())?;
        passes(&r)?;
    }
    Ok(())
}

fn derivation_and_morphism() -> Outcome {
    let mut seen = 0;
    let mut failures = Vec::new();
    for name in NAMES.iter().filter(|n| !NEGATIVE.contains(n)) {
        let prog = program(name);
        for b in &prog.structures {
            let Some(j) = b.value.jacobi() else { continue };
            seen += 1;
            for i in 0..20u64 {
                let f = random_function(j.base(), 2, parity(i * 7 + 1), i * 7 + 1);
                let g = random_function(j.base(), 2, parity(i * 11 + 3), i * 11 + 3);
                let r = check_derivation_and_morphism(j, &f, &g).map_err(|e| format!("{name}: {e}"))?;
                if !r.verdict() {
                    failures.push(format!("{name}: f = {f}, g = {g}\n{r}"));
                }
                // Q(g) is always Q-closed, so both sides of the biconditional get exercised
                for h in [f, j.q_apply(&g).map_err(|e| e.to_string())?] {
                    let r = check_q_closed_hamiltonian(j, &h).map_err(|e| format!("{name}: {e}"))?;
                    if !r.verdict() {
                        let detail = r.get("Q(f) = 0 iff X_f is Jacobi").map(|c| c.residual_text()).unwrap_or_default();
                        failures.push(format!("{name}: f = {h}, Q(f) = {}, {detail}", j.q_apply(&h).unwrap()));
                    }
                }
            }
        }
    }
    ensure(seen >= 8, || format!("only {seen} catalog structures with a bracket"))?;
    ensure(failures.is_empty(), || failures.join("\n"))
}

fn schoutenization() -> Outcome {
    let bases = [
        make_chart([("t", Even, 0), ("xi", Odd, 0)]).unwrap(),
        make_chart([("x", Even, 0), ("y", Even, 0), ("eta", Odd, 0)]).unwrap(),
        make_chart([("x", Even, 0), ("xi", Odd, 1), ("zeta", Odd, -1)]).unwrap(),
    ];
    for (k, base) in bases.iter().enumerate() {
        for seed in 0..6u64 {
            let seed = seed + 100 * k as u64;
            let (s, q) = (random_s(base, seed), random_q(base, seed));
            let r = check_schoutenization_identities(base, &s, &q).map_err(|e| e.to_string())?;
            passes(&r)?;
        }
    }
    let qs = schoutenize(&superline()).map_err(|e| e.to_string())?;
    passes(&verify_qs(&qs))
}

fn exact_qs() -> Outcome {
    let prog = program("exact_qs_1");
    let b = prog.structure("exact_qs_1").ok_or("exact_qs_1 missing")?;
    let Structure::ExactQs(d) = &b.value else {
        return Err("exact_qs_1 is not an exact QS structure".into());
    };
    passes(&verify_exact_qs(d))?;
    for (a, bb) in [(1, 0), (0, 1), (1, 1), (2, 3)] {
        let j = exact_qs_to_jacobi(d, &int(a), &int(bb)).map_err(|e| e.to_string())?;
        passes(&verify_odd_jacobi(&j)).map_err(|e| format!("({a},{bb}): {e}"))?;
    }
    Ok(())
}

fn chain(d: &AlgebroidData) -> Outcome {
    build_jacobi_algebroid(d).map_err(|e| e.to_string())?;
    passes(&verify_algebroid(d).map_err(|e| e.to_string())?)?;
    extract_quasiq(d).map_err(|e| e.to_string())?;
    let r = algebroid_chain(d).map_err(|e| e.to_string())?;
    passes(&r)?;
    for name in ["[Q,Q]", "Q(phi)", "round trip D", "round trip q"] {
        let zero = r.residual_of(name).is_some_and(Poly::is_zero);
        ensure(zero, || format!("{name} missing or nonzero\n{r}"))?;
    }
    Ok(())
}

fn algebroid_chains() -> Outcome {
    let constants = catalog::affine_line_constants();
    let cocycle = catalog::find_cocycle(&constants).ok_or("no cocycle found")?;
    chain(&AlgebroidData::lie_algebra(&constants, &cocycle).unwrap())?;
    let ext = extend_lie_to_jacobi(&tangent_algebroid(1).unwrap(), "tau").map_err(|e| e.to_string())?;
    chain(&decode_algebroid(&ext).map_err(|e| e.to_string())?)?;
    let bad = catalog::non_jacobi_constants();
    let d = AlgebroidData::lie_algebra(&bad, &vec![0; bad.len()]).unwrap();
    let r = algebroid_chain(&d).map_err(|e| e.to_string())?;
    let nonzero = r.conditions.iter().filter_map(|c| r.residual_of(&c.name)).any(|p| !p.is_zero());
    ensure(!r.verdict() && nonzero, || format!("non-Jacobi constants passed\n{r}"))
}

fn symplectomorphism() -> Outcome {
    for (b, f) in [(1, 1), (1, 2), (2, 1)] {
        passes(&verify_symplectomorphism(b, f).map_err(|e| e.to_string())?)?;
    }
    let d = generic_algebroid_charts(1, 1).unwrap();
    let ph = d.dual_chart().cotangent().unwrap();
    let mut nontrivial = 0;
    for i in 0..50u64 {
        let f = random_function(&ph, 3, parity(i * 13), i * 13);
        let g = random_function(&ph, 3, parity(i * 29 + 5), i * 29 + 5);
        let fg = poisson(&f, &g).unwrap();
        nontrivial += usize::from(!fg.is_zero());
        let lhs = r_pullback(&d, &fg).map_err(|e| e.to_string())?;
        let rhs = poisson(&r_pullback(&d, &f).unwrap(), &r_pullback(&d, &g).unwrap()).unwrap();
        ensure(lhs == rhs, || format!("pair {i}: {}", &lhs - &rhs))?;
    }
    ensure(nontrivial > 10, || format!("only {nontrivial} nonzero brackets"))
}

fn corollaries() -> Outcome {
    let ext = extend_lie_to_jacobi(&tangent_algebroid(1).unwrap(), "tau").map_err(|e| e.to_string())?;
    let oracle = contact_one();
    ensure(ext.s() == oracle.s() && ext.q() == oracle.q(), || format!("S = {}, Q = {}", ext.s(), ext.q()))?;
    ensure(ext == odd_contact_structure(1).unwrap(), || "odd_contact_structure(1) differs".into())?;
    for (name, expect) in [("flat_connection", true), ("flat_connection_open", false)] {
        let reports = verify_source(&catalog::source(name).unwrap(), &Options::default()).map_err(|e| e.to_string())?;
        let ok = reports.iter().all(VerificationReport::verdict);
        ensure(ok == expect, || format!("{name}: verdict {ok}"))?;
    }
    let constants = catalog::affine_line_constants();
    for d in [
        AlgebroidData::lie_algebra(&constants, &[-2, 0]).unwrap(),
        decode_algebroid(&ext).unwrap(),
    ] {
        let r = verify_schoutenized_algebroid(&d).map_err(|e| e.to_string())?;
        passes(&r)?;
        ensure(r.get("w(Sbar) = -1").is_some_and(|c| c.pass()), || format!("{r}"))?;
    }
    Ok(())
}

fn phase_22() -> Arc<Chart> {
    make_chart([("x", Even, 0), ("y", Even, 0), ("xi", Odd, 0), ("eta", Odd, 0)])
        .unwrap()
        .cotangent()
        .unwrap()
}

fn poisson_axioms() -> Outcome {
    let ph = phase_22();
    for i in 0..100u64 {
        let s = [i * 3 + 1, i * 5 + 2, i * 7 + 3];
        let [f, g, h] = s.map(|k| random_function(&ph, 3, parity(k * 37), k * 37));
        let (pf, pg) = (parity_of(&f), parity_of(&g));
        let fg = poisson(&f, &g).unwrap();
        ensure(fg == poisson(&g, &f).unwrap().scale_int(-pf.koszul(pg)), || format!("symmetry, triple {i}"))?;
        let jac = &poisson(&f, &poisson(&g, &h).unwrap()).unwrap()
            - &(&poisson(&fg, &h).unwrap() + &poisson(&g, &poisson(&f, &h).unwrap()).unwrap().scale_int(pf.koszul(pg)));
        ensure(jac.is_zero(), || format!("Jacobi, triple {i}: {jac}"))?;
        let leibniz = &poisson(&f, &(&g * &h)).unwrap()
            - &(&(&fg * &h) + &(&g * &poisson(&f, &h).unwrap()).scale_int(pf.koszul(pg)));
        ensure(leibniz.is_zero(), || format!("Leibniz, triple {i}: {leibniz}"))?;
    }
    Ok(())
}

fn graded_core() -> Outcome {
    let charts = [
        make_chart([("x", Even, 0), ("xi", Odd, 1), ("y", Even, -1), ("eta", Odd, 0), ("zeta", Odd, 2)]).unwrap(),
        phase_22(),
    ];
    for c in &charts {
        for i in 0..c.len() {
            let z = Poly::generator(c, i);
            ensure(!c.parity(i).is_odd() || (&z * &z).is_zero(), || format!("odd square in {c:?}"))?;
        }
        for i in 0..40u64 {
            let (f, g) = (random_function(c, 3, parity(i * 41), i * 41), random_function(c, 3, parity(i * 43 + 1), i * 43 + 1));
            let sign = parity_of(&f).koszul(parity_of(&g));
            ensure(&f * &g == (&g * &f).scale_int(sign), || format!("commutativity {f} {g}"))?;
            let (z, w) = ((i as usize) % c.len(), (i as usize * 3 + 1) % c.len());
            let lhs = (&f * &g).left_derivative(z);
            let rhs = &(&f.left_derivative(z) * &g) + &(&f * &g.left_derivative(z)).scale_int(c.parity(z).koszul(parity_of(&f)));
            ensure(lhs == rhs, || format!("Leibniz {f} {g} at {z}"))?;
            let swap = f.left_derivative(z).left_derivative(w).scale_int(c.parity(z).koszul(c.parity(w)));
            ensure(f.left_derivative(w).left_derivative(z) == swap, || format!("derivatives {f} at {z},{w}"))?;
        }
    }
    Ok(())
}

/// `{Q,Q}`, `{Q,S}` and `{S,S} + 2QS` against their coordinate expansions in the
/// components `S^AB` and `Q^A`.
#[allow(clippy::needless_range_loop)]
fn local_expansions(seed: u64) -> Outcome {
    let base = make_chart([("x", Even, 0), ("xi", Odd, 0)]).unwrap();
    let ph = base.cotangent().unwrap();
    let n = base.len();
    let pa = |a: usize| Poly::generator(&ph, ph.momentum_of(a).unwrap());
    let lift = |f: &Poly| f.embed(&ph).unwrap();
    let mut sab = vec![vec![Poly::zero(&base); n]; n];
    for a in 0..n {
        for b in a..n {
            if a == b && base.parity(a).is_odd() {
                continue;
            }
            let f = random_function(&base, 2, Odd + base.parity(a) + base.parity(b), seed * 13 + (a * n + b) as u64);
            sab[b][a] = f.scale_int(base.parity(a).koszul(base.parity(b)));
            sab[a][b] = f;
        }
    }
    let qa: Vec<Poly> = (0..n).map(|a| random_function(&base, 2, Odd + base.parity(a), seed * 7 + a as u64)).collect();
    let mut s = Poly::zero(&ph);
    let mut q = Poly::zero(&ph);
    for a in 0..n {
        for b in 0..n {
            s = &s + &(&(&lift(&sab[a][b]) * &pa(b)) * &pa(a)).scale(&rational(1, 2));
        }
        q = &q + &(&lift(&qa[a]) * &pa(a));
    }
    let sign = |p: Parity, t: Poly| t.scale_int(p.sign());
    let (mut qq, mut qs, mut ss) = (Poly::zero(&ph), Poly::zero(&ph), Poly::zero(&ph));
    for a in 0..n {
        for b in 0..n {
            qq = &qq + &(&lift(&(&qa[b] * &qa[a].left_derivative(b))) * &pa(a)).scale_int(2);
            let mut coef = Poly::zero(&base);
            for c in 0..n {
                coef = &coef + &(&qa[c] * &sab[b][a].left_derivative(c)).scale(&rational(1, 2));
                coef = &coef + &sign(base.parity(b), &sab[b][c] * &qa[a].left_derivative(c));
            }
            qs = &qs + &(&(&lift(&coef) * &pa(a)) * &pa(b));
            for c in 0..n {
                let mut k = &qa[c] * &sab[b][a];
                for d in 0..n {
                    k = &k + &(&sab[c][d] * &sab[b][a].left_derivative(d));
                }
                ss = &ss + &sign(base.parity(c), &(&(&lift(&k) * &pa(a)) * &pa(b)) * &pa(c));
            }
        }
    }
    ensure(poisson(&q, &q).unwrap() == qq, || format!("{{Q,Q}} seed {seed}"))?;
    ensure(poisson(&q, &s).unwrap() == qs, || format!("{{Q,S}} seed {seed}"))?;
    ensure(&poisson(&s, &s).unwrap() + &(&q * &s).scale_int(2) == ss, || format!("{{S,S}} + 2QS seed {seed}"))
}

fn engine() -> Outcome {
    poisson_axioms()?;
    graded_core()?;
    (0..25).try_for_each(local_expansions)
}

fn cli() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let bin = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_oddjacobi")).args(args).current_dir(&dir).output().unwrap();
    let o = bin(&["verify", "tests/golden/superline.dsl", "--format", "json"]);
    let golden = std::fs::read(dir.join("tests/golden/superline.json")).unwrap();
    ensure(o.status.code() == Some(0), || format!("exit {:?}", o.status.code()))?;
    ensure(o.stdout == golden, || String::from_utf8_lossy(&o.stdout).into_owned())?;
    for name in NEGATIVE {
        let o = bin(&["examples", "run", name]);
        ensure(o.status.code() == Some(1), || format!("{name}: exit {:?}", o.status.code()))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("superline residuals", 1, superline_residuals),
        ("odd contact structure and form", 2, odd_contact),
        ("odd Jacobi algebra on sample triples", 20, odd_jacobi_algebra),
        ("derivation, morphism and Q-closed fields", 10, derivation_and_morphism),
        ("Schoutenization", 5, schoutenization),
        ("exact QS pencil", 3, exact_qs),
        ("algebroid chain", 5, algebroid_chains),
        ("symplectomorphism", 5, symplectomorphism),
        ("tangent extension, flat connections, weights", 5, corollaries),
        ("engine self-tests", 10, engine),
        ("command line golden file", 1, cli),
    ];
    let release = !cfg!(debug_assertions);
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        total += elapsed;
        let slow = elapsed > Duration::from_secs(*budget);
        let outcome = match outcome {
            Ok(()) if slow && release => Err(format!("took {elapsed:.2?}, budget {budget} s")),
            other => other,
        };
        let mark = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let note = if slow && !release { "  (over budget in a debug build)" } else { "" };
        println!("criterion {:>2}  {mark}  {name}  [{:.2} s / {budget} s]{note}", k + 1, elapsed.as_secs_f64());
        if let Err(e) = outcome {
            failed += 1;
            for line in e.lines() {
                println!("    {line}");
            }
        }
    }
    println!("{} of {} criteria passed in {:.2} s", criteria.len() - failed, criteria.len(), total.as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
