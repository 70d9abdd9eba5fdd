//! The homotopy fixed point spectral sequence
//! `E_2 = Z_(p)[x] (x) BP^*(W_{n,k}) => BP^*(PW_{n,k})`
//! in its v-free specialisation (coefficients Z_(p)).
//!
//! [`complex`] builds the filtered differential graded algebra
//! `Z_(p)[x] (x) Lambda(y_{n-k+1}, ..., y_n)` with `D(y_j) = C(n, j) x^j`,
//! [`page`] turns its pages with Smith normal forms over Z_(p), and
//! [`presentation`] gives the closed form in terms of binomial valuations.
//! [`check`] compares the two.

pub mod check;
pub mod complex;
pub mod lattice;
pub mod page;
pub mod presentation;

pub use check::{cross_check, CrossCheckReport, Discrepancy};
pub use complex::{transgress, FilteredComplex};
pub use lattice::Order;
pub use page::{build_e2, run_pages, run_to_einfty, DiffBlock, Page, Slot, SlotShape, Summand};
pub use presentation::{presentation_closed_form, Presentation};

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::StiefelContext;
use crate::arith::{binom_int, Prime};
use crate::error::{Error, Result};

/// How `d_{2j}(y_j)` is chosen. Anything but `Binomial` exists to check
/// that the comparison harness notices a wrong differential.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Transgression {
    #[default]
    Binomial,
    /// `C(n, j) * factor` for the one index `j`, binomial elsewhere.
    Perturbed { j: usize, factor: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SsConfig {
    pub n: usize,
    pub k: usize,
    pub p: Prime,
    /// Highest power of `x` kept on the pages.
    pub xmax: usize,
    pub transgression: Transgression,
}

impl SsConfig {
    /// Configuration with the default truncation `xmax = n + 8`.
    pub fn new(n: usize, k: usize, p: Prime) -> Result<Self> {
        Self::with_xmax(n, k, p, n + 8)
    }

    pub fn with_xmax(n: usize, k: usize, p: Prime, xmax: usize) -> Result<Self> {
        StiefelContext::new(n, k)?;
        if xmax < n {
            return Err(Error::InvalidConfig(format!("xmax = {xmax} must be at least n = {n}")));
        }
        Ok(SsConfig { n, k, p, xmax, transgression: Transgression::Binomial })
    }

    /// Truncation `max(n + 8, 2n)`, so the window reaches every `gamma_j`.
    pub fn covering(n: usize, k: usize, p: Prime) -> Result<Self> {
        Self::with_xmax(n, k, p, (n + 8).max(2 * n))
    }

    pub fn with_transgression(mut self, t: Transgression) -> Self {
        self.transgression = t;
        self
    }

    pub fn stiefel(&self) -> StiefelContext {
        StiefelContext { n: self.n, k: self.k }
    }

    /// Results are claimed for total degrees `0..=validity_window()`.
    pub fn validity_window(&self) -> usize {
        2 * (self.xmax - self.n)
    }

    /// The coefficient `c_j` in `d_{2j}(y_j) = c_j x^j`.
    pub fn transgression_coefficient(&self, j: usize) -> BigInt {
        let c = binom_int(self.n as u64, j as i64);
        match self.transgression {
            Transgression::Perturbed { j: jj, factor } if jj == j => c * factor,
            _ => c,
        }
    }
}
