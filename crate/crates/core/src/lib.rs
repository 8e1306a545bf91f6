//! Exact solver, verifier, and construction toolkit for very-pliable index
//! coding: a sender broadcasts a function of `m` messages over `[0:k-1]` so
//! that each receiver, knowing the messages indexed by its side-information
//! set, can decode some message it does not have. The decoded index may
//! depend on the realisation, which is what separates this model from
//! pliable index coding and drives the broadcast rate below `k`.

pub mod bitset;
pub mod bounds;
pub mod codebook;
pub mod concat;
pub mod cover;
pub mod decodability;
pub mod error;
pub mod hypergraph;
pub mod linear;
pub mod model;
pub mod pliable;

pub use error::{Error, Result};
