//! Cayley graphs of diameter 3 and order `q^2(q-1)`, `q = 2^(2n+1)`, built
//! from the polarity quotient of the symplectic quadrangle `W(q)`.

pub mod analysis;
pub mod cover;
pub mod error;
pub mod export;
pub mod geometry;
pub mod gf2m;
pub mod graphs;
pub mod group;
pub mod polarity;
pub mod suites;

pub use error::{Error, Result};
