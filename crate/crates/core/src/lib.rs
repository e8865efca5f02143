//! The integer partition function `p(n)`: exact recurrence, the convergent
//! Rademacher series with a rounding certificate, and the supporting pieces
//! (Dedekind sums, Farey sequences and Ford circles, the eta function,
//! half-integer Bessel functions and leading-order asymptotics).

pub mod asymptotics;
pub mod bessel;
pub mod dedekind;
pub mod error;
pub mod eta;
pub mod exact;
pub mod farey;
pub mod par;
pub mod precision;
pub mod series;

pub use error::{Error, Result};
pub use exact::{p_exact, PartitionCache, PartitionValue};
pub use par::Execution;
pub use precision::{HighComplex, HighReal, PrecisionContext};
pub use series::{p_series, SeriesOptions, SeriesReport};
