//! Fuss-Catalan structures and the Markov chains that walk over them.
//!
//! The crate covers 2-Dyck paths ([`fuss_dyck`]), non-crossing spanning trees
//! on points in convex position ([`ncst`]), the recursive bijection between the
//! two ([`bijection`]), the adjacent-move and flip chains ([`chains`]), flip-move
//! canonical paths simulating adjacent moves together with their encoding and
//! congestion census ([`canonical`]), and exact small-`n` spectral and mixing
//! analysis ([`spectral`]).

pub mod bijection;
pub mod canonical;
pub mod chains;
pub mod error;
pub mod fuss_dyck;
pub mod ncst;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use fuss_dyck::{DyckPath, Step};
pub use ncst::{Edge, Ncst};
pub use rng::RngStream;
