//! R-linear (antilinear) Krylov subspace methods.
//!
//! This crate implements minimal-residual iterations for systems of the form
//! `kappa z + M conj(z) = b`: the R-linear Arnoldi process and GMRES, the
//! complex symmetric Lanczos recurrence and the CSYM method, consimilarity
//! decompositions (con-Schur, condiagonalization), the polyanalytic
//! polynomial class underlying the convergence analysis, min-max convergence
//! bounds via Lawson iteration, and Monte Carlo estimation of the probability
//! that a random matrix is condiagonalizable.
//!
//! Everything is generic over a precision family: standard `f64` or
//! double-double ([`scalar::Dd`], roughly 31-32 decimal digits).

pub mod bound;
pub mod coneig;
pub mod dd;
pub mod eig;
mod error;
pub mod experiments;
pub mod krylov;
pub mod ls;
pub mod lu;
pub mod mat;
pub mod par;
pub mod polyspace;
pub mod randmat;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
