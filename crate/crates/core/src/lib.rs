//! robin-bands: a numerical laboratory for the principal eigenvalue of the
//! Robin Laplacian with large negative boundary parameter.
//!
//! The crate builds planar "comb" domains whose top boundary glues scaled
//! copies of two mollified tent profiles, meshes them with a boundary-layer
//! graded structured grid, and computes the principal eigenvalue E(α) of the
//! Laplacian with Robin condition ∂_ν u + αu = 0 on the top curve by P1
//! finite elements. On such domains the normalized eigenvalue E(α)/α²
//! oscillates between two disjoint bands as α → -∞ — each block "captures"
//! the eigenfunction when 1/|α| matches its scale — so the limit of E(α)/α²
//! does not exist. The `harness` module drives sweeps demonstrating exactly
//! that, and `oracles` provides independent closed-form cross-checks.

pub mod error;
pub mod fem;
pub mod geometry;
pub mod harness;
pub mod mesh;
pub mod oracles;
pub mod quad;

pub use error::{Error, Result};
