pub mod algebroid;
pub mod chart;
pub mod constructions;
pub mod error;
pub mod jacobi;
pub mod phase;
pub mod poly;
pub mod report;

pub use chart::{make_chart, Chart, GenKind, Generator, Parity, Provenance};
pub use error::{Error, Result};
pub use jacobi::{
    check_derivation_and_morphism, check_q_closed_hamiltonian, check_theorem_odd_jacobi_algebra,
    hamiltonian_vf, is_jacobi_vf, odd_jacobi_bracket, random_function, random_triples, verify_odd_jacobi,
    OddJacobiStructure,
};
pub use poly::{int, rational, Monomial, Poly, PolyParity, Rational, WeightOf};
pub use report::{Condition, Outcome, VerificationReport};
