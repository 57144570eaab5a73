//! Exact engine for Ramanujan-type identities built from generalized
//! eta-quotients on Gamma1(N).

pub mod admissible;
pub mod arith;
pub mod error;
pub mod etaquot;
pub mod expr;
pub mod geinf;
pub mod lattice;
pub mod modular;
pub mod pipeline;
pub mod qseries;
pub mod radu;

pub use error::{Error, Result};
pub use etaquot::{GenEtaQuotient, PartitionFunctionSpec};
pub use qseries::{pochhammer, QSeries};
