//! Exact monodromy data for cyclic covers of projective space branched along
//! hyperplane arrangements.
//!
//! Everything is computed over cyclotomic fields with exact rational
//! coefficients; signs of real algebraic numbers are decided by certified
//! interval enclosures.

pub mod certifier;
pub mod coverrep;
pub mod cyclotomic;
pub mod error;
pub mod exactla;
pub mod invariants;
pub mod pham;

pub use cyclotomic::CycloNum;
pub use error::{Error, Result};
