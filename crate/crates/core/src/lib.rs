//! Exact computer algebra for Brown-Peterson cohomology of projective
//! Stiefel manifolds.
//!
//! * [`arith`]: p-local rationals, valuations, binomial coefficients.
//! * [`algebra`]: truncated coefficient polynomials, power series and the
//!   exterior algebra on Stiefel generators.
//! * [`fgl`]: the p-typical formal group law of BP in Araki generators,
//!   `[a]`-series and Adams operations.
//! * [`ss`]: the homotopy fixed point spectral sequence of
//!   `W_{n,k} -> PW_{n,k} -> CP^infty`, both by explicit page turning and in
//!   closed form.
//! * [`obstruction`]: criteria ruling out S^1-equivariant maps between
//!   Stiefel manifolds.

pub mod algebra;
pub mod arith;
pub mod error;
pub mod exec;
pub mod fgl;
pub mod obstruction;
pub mod ss;

pub use arith::{PLocal, Prime, Valuation};
pub use error::{Error, Result};
pub use exec::Exec;
