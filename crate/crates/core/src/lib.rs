//! Loops of Bol-Moufang type.
//!
//! The crate names and dualizes the sixty identities of Bol-Moufang type,
//! evaluates them over finite loops, searches for loops with prescribed
//! identities, and checks the resulting classification against reference
//! data.

pub mod classify;
pub mod cli;
pub mod constructions;
pub mod eval;
pub mod loops;
pub mod search;
pub mod term;

pub use eval::{profile, Profile, Variety, Witness};
pub use loops::{FiniteLoop, LoopError};
pub use term::{enumerate_all, Identity, IdentityName, TermError};
