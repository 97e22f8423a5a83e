//! Exact p-adic wavelet computations over cyclotomic fields.

pub mod cyclotomic;
pub mod error;
pub mod families;
pub mod json;
pub mod moments;
pub mod mra;
pub mod padic;
pub mod stepfn;

pub use cyclotomic::{CycMatrix, CycNumber};
pub use error::{Error, Result};
pub use moments::{Mode, MomentProfile, VanishingOrder};
pub use mra::{FilterSeq, TrigPoly};
pub use padic::{Ball, NormExp, Prime, Rat, Valuation};
pub use stepfn::{Piece, StepFunction};
