//! Exact computations with the Lie algebras `W(a,b)` and their central
//! extensions `Vir(a,b)`, the rank-one free non-weight modules `Φ(λ,α,h)`
//! and `Θ(λ,r)` on `ℂ[s,t]`, and a finite-window classification of such
//! modules.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod orbit;
pub mod poly;
pub mod report;
pub mod repmod;
pub mod scalar;

pub use error::{Error, Result};
pub use poly::{BiPoly, UniPoly};
pub use scalar::Scalar;
