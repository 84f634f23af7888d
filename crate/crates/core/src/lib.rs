//! Discriminator of the cubic `f(x) = x^3 + x`.
//!
//! `Δ(n)` is the smallest modulus `m` for which `f(1), ..., f(n)` are
//! pairwise distinct mod `m`. It equals `3^⌈log₃ n⌉` except at
//! `n = 3^(6s+5) + 1` and `n = 3^(6s+5) + 2`, where it drops to
//! `7 · 3^(6s+4)`.
//!
//! The crate computes `Δ(n)` two independent ways and re-checks, at desk
//! scale, every computable ingredient of the argument behind the closed
//! form:
//!
//! - [`modarith`]: Legendre symbols, square roots, Hensel lifting, factoring.
//! - [`charsum`]: exact character and exponential sums in `ℤ[ζ_q]`.
//! - [`discriminator`]: the injectivity kernel, brute-force and closed-form `Δ(n)`.
//! - [`casework`]: the eight-case partition of moduli, collision constructions,
//!   the counting sums and the explicit inequalities.
//! - [`report`], [`sweep`], [`suites`]: verification records, the parallel
//!   resumable runner, and the named check suites.
//! - [`cli`]: the `discrim` command line.

pub mod casework;
pub mod charsum;
pub mod cli;
pub mod discriminator;
pub mod error;
pub mod modarith;
pub mod report;
pub mod suites;
pub mod sweep;

pub use error::{Error, Result};
