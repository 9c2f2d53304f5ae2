//! Exact computation, simulation and cross-validation for exchangeable
//! Gibbs partitions.

pub mod cli;
pub mod conditional;
pub mod enumerate;
pub mod error;
pub mod estimators;
pub mod factorials;
pub mod models;
pub mod numeric;
pub mod oracle;
pub mod polya;
pub mod samplers;
pub mod stirling;
pub mod unconditional;
pub mod verify;

pub use conditional::{NewBlockOutcome, ObservedSample};
pub use error::{Error, Result};
pub use models::{GibbsModel, PitmanYor, WeightTable};
pub use numeric::SignedLogValue;
pub use unconditional::{Composition, CountsVector};
