//! Simulation and verification toolkit for two-party quantum protocols under
//! superselection rules.
//!
//! The crate implements finite-group representation data, abstract charge
//! systems with fusion bookkeeping, sector-structured states and operators,
//! the reference-system construction that lifts unrestricted operations to
//! charge-conserving ones, a two-party game engine with abort semantics, the
//! compilation between invariant-world and unrestricted-world games, and the
//! constructive bit-commitment and data-hiding attacks. Everything is exposed
//! through a seeded, deterministic scenario CLI (`ssrsim`).

pub mod error;
pub mod linalg;

pub mod charge;
pub mod game;
pub mod group;
pub mod reference;
pub mod sector;

pub mod cli;

pub use error::{Error, Result};
