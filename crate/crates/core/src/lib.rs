//! Distance-based quantifiers of coherence, certainty and nonclassicality.

pub mod cli;
pub mod density;
pub mod distance;
pub mod error;
pub mod figures;
pub mod infinite;
pub mod oracle;
pub mod overcomplete;
pub mod quantifiers;
pub mod random;
pub mod states;
pub mod sweep;
pub mod verify;

pub use density::{DensityMatrix, PureState, Tolerances};
pub use error::{Error, Result};
pub use quantifiers::QuantifierReport;
