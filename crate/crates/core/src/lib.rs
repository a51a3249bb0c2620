//! Planar polynomial vector fields with prescribed invariant algebraic curves.
//!
//! The library is organized in four layers:
//!
//! * [`polycore`] — exact sparse bivariate polynomials over the rationals,
//!   with division, differentiation, affine substitution and a subresultant
//!   gcd used to certify non-degeneracy of curves.
//! * [`curvegeom`] — numerical geometry of the real variety `C = 0`:
//!   singular-point search, oval tracing by marching squares with Newton
//!   refinement, and line/oval disjointness checks.
//! * [`dynamics`] — adaptive Runge–Kutta integration with dense output,
//!   Poincaré return maps, periodic-orbit refinement, divergence exponents
//!   and a Green's-theorem flux cross-check.
//! * [`construct`] — the constructions themselves: cofactor certificates,
//!   fields having every oval of a curve as a hyperbolic limit cycle,
//!   composition with a base field through an epsilon search, Kolmogorov
//!   and game-theory builders, and the lower-bound tables.
//!
//! The [`cli`] module exposes everything as deterministic subcommands.

pub mod cli;
pub mod construct;
pub mod curvegeom;
pub mod dynamics;
pub mod error;
pub mod polycore;

pub use error::Error;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
