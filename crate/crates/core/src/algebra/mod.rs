//! Truncated graded algebra: coefficient polynomials in the `v_i`, power
//! series over them, and the exterior algebra on Stiefel generators.

mod ext;
mod multi;
mod poly;
mod render;
mod series;

pub use ext::{ExtElement, ExtKey, StiefelContext};
pub use multi::{BiSeries, MultiSeries};
pub use poly::{CoeffPoly, VMonomial};
pub use render::render_terms;
pub use series::Series;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::arith::{PLocal, Prime};
use crate::error::{Error, Result};

/// Which terms survive: v-indices up to `d`, total v-exponent up to
/// `max_jorder` (so `max_jorder = 1` works modulo J^2), and powers of the
/// series variables up to `max_xdeg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub p: Prime,
    pub d: usize,
    pub max_jorder: u32,
    pub max_xdeg: usize,
}

impl TruncationPolicy {
    /// Policy with `d` chosen as the largest `i` with `p^i <= max_xdeg`:
    /// `v_i` first enters the log with `x^(p^i)`, so larger indices never
    /// survive the x-truncation.
    pub fn new(p: Prime, max_jorder: u32, max_xdeg: usize) -> Result<Self> {
        let mut d = 0;
        let mut pow = p.get() as usize;
        while pow <= max_xdeg {
            d += 1;
            pow = pow.saturating_mul(p.get() as usize);
        }
        Self::with_d(p, d, max_jorder, max_xdeg)
    }

    pub fn with_d(p: Prime, d: usize, max_jorder: u32, max_xdeg: usize) -> Result<Self> {
        if max_jorder < 1 {
            return Err(Error::InvalidConfig("max_jorder must be at least 1".into()));
        }
        if max_xdeg < 1 {
            return Err(Error::InvalidConfig("max_xdeg must be at least 1".into()));
        }
        Ok(TruncationPolicy { p, d, max_jorder, max_xdeg })
    }

    /// The same policy working modulo `J^2`.
    pub fn mod_j2(p: Prime, max_xdeg: usize) -> Result<Self> {
        Self::new(p, 1, max_xdeg)
    }
}

/// Coefficient rings usable in [`ExtElement`].
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(c: &PLocal) -> Self;
}

impl Coeff for PLocal {
    fn zero() -> Self {
        PLocal::zero()
    }
    fn one() -> Self {
        PLocal::one()
    }
    fn is_zero(&self) -> bool {
        PLocal::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(c: &PLocal) -> Self {
        c.clone()
    }
}

impl Coeff for CoeffPoly {
    fn zero() -> Self {
        CoeffPoly::zero()
    }
    fn one() -> Self {
        CoeffPoly::one()
    }
    fn is_zero(&self) -> bool {
        CoeffPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(c: &PLocal) -> Self {
        CoeffPoly::constant(c.clone())
    }
}

/// Dropping the terms a policy excludes. Idempotent.
pub trait Truncate {
    fn truncate(&self, pol: &TruncationPolicy) -> Self;
}
