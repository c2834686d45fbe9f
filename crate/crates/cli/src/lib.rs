//! The DSL, example catalog and check runner behind the `oddjacobi` command.

pub mod catalog;
pub mod datafile;
pub mod elab;
pub mod emit;
pub mod error;
pub mod model;
pub mod parse;
pub mod run;

pub use catalog::{catalog, CatalogError};
pub use elab::{elaborate, Program};
pub use emit::{emit, exit_code, Format};
pub use error::{DslError, Stage};
pub use model::Model;
pub use parse::parse;
pub use run::{run, Options};

use oddjacobi::VerificationReport;

/// Parse, elaborate and run a DSL source.
pub fn verify_source(source: &str, opts: &Options) -> Result<Vec<VerificationReport>, DslError> {
    let model = parse(source)?;
    let program = elaborate(&model)?;
    Ok(run(&program, opts))
}
