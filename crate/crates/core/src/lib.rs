//! Social welfare orderings over finite well-being profiles, the axioms used
//! to characterise them, and machine-checkable derivation chains.

pub mod error;
pub mod numeric;
pub mod axioms;
pub mod cli;
pub mod orderings;
pub mod profile;
pub mod propositions;
pub mod search;
pub mod verdict;

pub use error::{Error, Result};
pub use numeric::{Approx, Rational, Tolerance, Value};
pub use orderings::{swo_compare, OrderingSpec};
pub use profile::{ceil_ratio, RankedProfile, WellbeingProfile};
pub use verdict::{Comparison, Verdict};
