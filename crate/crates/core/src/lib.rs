//! Solvers for the avoidance game on finite convex geometries.
//!
//! Three independent routes compute nim numbers: brute-force
//! Sprague-Grundy expansion ([`game`]), the structure-class quotient
//! ([`structure`]) and the closed-form signature tables ([`closed_forms`]).
//! The [`audit`] module cross-checks them over enumerated corpora.

pub mod audit;
pub mod closed_forms;
pub mod enumerate;
pub mod game;
pub mod instance;
pub mod geometry;
pub mod structure;
pub mod subset;

pub use game::{GameError, GameSpec, Nim, Outcome, Position};
pub use geometry::{build_geometry, Geometry, GeometryDescriptor, GeometryError, GroundSet};
pub use subset::Subset;
