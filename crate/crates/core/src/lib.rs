//! Finite-scale computations with ionads.
//!
//! An ionad is a set of points with a cartesian comonad on `Set^X`, its
//! interior comonad. Everything here is generated by a flat basis
//! `M : B → Set^X` over finite data.

pub mod construct;
pub mod error;
pub mod fincat;
pub mod ionad;
pub mod morphism;
pub mod site;
pub mod space;

pub use error::{Budget, Error, Result};
