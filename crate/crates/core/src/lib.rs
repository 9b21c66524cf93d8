//! Perfect secret-key capacity and communication for omniscience on
//! pairwise independent networks.
//!
//! A network is a [`graph::Multigraph`]: every pair of terminals shares
//! `e_ij` independent uniform bits. The crate computes the omniscience
//! rate and secret-key capacity as exact linear programs, packs Steiner
//! trees, builds linear key-agreement protocols over GF(2) and verifies
//! them by exhaustion, and analyses the single-helper case.

pub mod cli;
pub mod error;
pub mod gf2;
pub mod graph;
pub mod helper;
pub mod lp;
pub mod omniscience;
pub mod packing;
pub mod protocol;
pub mod rational;

pub use error::{Error, Result};
