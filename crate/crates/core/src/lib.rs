//! b-symbol read channels over `F_2`: the cyclic b-symbol metric, locality of
//! functions, minimum-length code search, and function-correcting b-symbol
//! code constructions with exhaustive verifiers.

pub mod check;
pub mod codes;
pub mod encoders;
pub mod error;
pub mod functions;
pub mod io;
pub mod metric;
pub mod report;

pub use check::{CheckStatus, TheoremCheck};
pub use codes::{Code, RequirementMatrix, SearchResult, SearchStatus};
pub use error::{Error, Result};
pub use functions::{FunctionTable, WeightDistribution};
pub use metric::{Metric, Word};
