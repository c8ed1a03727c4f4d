//! Critical points of `gl_{r+1}` master functions, their fundamental
//! differential operators, and the `d(n-1, l)` bound on their number.

pub mod diffop;
pub mod error;
pub mod master;
pub mod pipeline;
pub mod poly;
pub mod rootdata;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use master::{CanonicalKey, Coords, CriticalPoint, Multiplicity};
pub use rootdata::{Caps, Multidegree, WeightSystem};
pub use scalar::{C64, CQ};
