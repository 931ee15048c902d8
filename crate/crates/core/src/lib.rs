//! Extended Baxter Q-systems for simply-laced Lie algebras.
//!
//! The crate builds extended Q-systems from minimal input data and verifies
//! the relations they satisfy — Wronskian pair relations, fused flag and
//! projection windows, quantisation pairings, fused Fierz identities, Hirota
//! bilinear recurrences, character solutions, and Bethe equations — at desk
//! scale, in exact arithmetic where the statements are exact and in floating
//! point with relative residual reporting where they are not.

pub mod algebra;
pub mod error;
pub mod exact;
pub mod fusion;
pub mod laurent;
pub mod linalg;
pub mod project;
pub mod aseries;
pub mod characters;
pub mod qsystem;
pub mod gamma;
pub mod report;
pub mod spectral;
pub mod reps;

pub use algebra::{AlgebraSpec, CartanData, HeightFunction, PFData, Series, WeightSystem};
pub use error::{Error, Result};
