//! Exact Shapley-Shubik power indices for (j,k) simple games and interval
//! simple games.
//!
//! The discrete index is computed three ways (roll-call enumeration, the
//! swing formula over `C(v, T)`, and the Shapley value of the average game)
//! and the crate ships the decompositions and axiom checks that characterize
//! it. Interval games are handled exactly for finite step representations and
//! by Monte Carlo for arbitrary monotone evaluators.

pub mod average;
pub mod axioms;
pub mod builtin;
pub mod coalition;
pub mod decomposition;
pub mod error;
pub mod games;
pub mod indices;
pub mod interval;
pub mod rational;
pub mod tu;

pub use coalition::Coalition;
pub use error::{GameError, Result};
pub use games::{GameBody, GameCombo, GameShape, JKGame, Profile};
pub use rational::Rational;
pub use tu::{PowerVector, TUGame};
