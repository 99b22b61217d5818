//! Isometric reflections in finite-dimensional normed spaces.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! - [`spaces`]: symbolic norms on `R^n` (p-norms, weighted, nested,
//!   Orlicz–Nakano, polytope balls), norming functionals, sphere sampling
//!   and exact polytope membership;
//! - [`reflections`]: reflections `s = 1 - 2 e*⊗e`, isometry tests, angles,
//!   commutation, product orders;
//! - [`group`]: finite matrix groups generated by reflections, orbits,
//!   invariant scalar products and projections;
//! - [`coxeter`]: Coxeter graphs, finite/infinite classification and the
//!   `A_Δ / B_Δ / D_Δ` family criteria;
//! - [`decomposition`]: Hilbert/Coxeter strip decomposition of sequence-space
//!   norms;
//! - [`constants`]: operator norms and the reflection constant `c(E)`;
//! - [`fixtures`]: the canonical norms, root systems and reflection sets.

#![no_std]

extern crate alloc;

pub mod constants;
pub mod coxeter;
pub mod decomposition;
mod error;
pub mod fixtures;
pub mod group;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod rational;
pub mod reflections;
pub mod spaces;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use rational::{QMatrix, QVector, Rational};
pub use reflections::Reflection;
pub use spaces::{Exponent, Functional, NormSpec, SphereSample, Vector};
