#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod ansatz;
pub mod einstein_vlasov;
pub mod error;
pub mod nordstrom_vlasov;
pub mod numerics;
pub mod report;
pub mod reports;
pub mod vlasov_poisson;

pub use ansatz::{AnsatzProfile, Model, MomentSet};
pub use error::{Error, NumericsError, Result};
pub use numerics::{BuildOptions, RadialGrid, Tolerances};
pub use report::{Check, Residual, VirialReport};
pub use reports::{run_from_config, RunConfig, RunOutcome, ScanRow, ScanTable};
