use std::fmt;

use crate::arith::{PLocal, Prime};
use crate::error::{Error, Result};

use super::poly::CoeffPoly;
use super::render::{power_factor, render_terms};
use super::{Truncate, TruncationPolicy};

/// A power series in one variable `x` over [`CoeffPoly`], truncated above
/// `x^max_xdeg`. Dense: entry `t` is the coefficient of `x^t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<CoeffPoly>,
}

impl Series {
    pub fn zero(pol: &TruncationPolicy) -> Self {
        Series { coeffs: vec![CoeffPoly::zero(); pol.max_xdeg + 1] }
    }

    /// The series `x`.
    pub fn x(pol: &TruncationPolicy) -> Self {
        Series::monomial(1, CoeffPoly::one(), pol)
    }

    /// `c * x^t`, or zero if `t` is beyond the truncation.
    pub fn monomial(t: usize, c: CoeffPoly, pol: &TruncationPolicy) -> Self {
        let mut s = Series::zero(pol);
        if t <= pol.max_xdeg {
            s.coeffs[t] = c.truncate(pol);
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<CoeffPoly>, pol: &TruncationPolicy) -> Self {
        let mut s = Series::zero(pol);
        for (t, c) in coeffs.into_iter().enumerate().take(pol.max_xdeg + 1) {
            s.coeffs[t] = c.truncate(pol);
        }
        s
    }

    /// Convenience constructor from scalar coefficients.
    pub fn from_scalars(coeffs: &[i64], pol: &TruncationPolicy) -> Self {
        Series::from_coeffs(coeffs.iter().map(|&c| CoeffPoly::constant(c.into())).collect(), pol)
    }

    pub fn max_xdeg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, t: usize) -> CoeffPoly {
        self.coeffs.get(t).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[CoeffPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CoeffPoly::is_zero)
    }

    pub fn add(&self, other: &Series) -> Series {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Series, f: impl Fn(&CoeffPoly, &CoeffPoly) -> CoeffPoly) -> Series {
        let len = self.coeffs.len().min(other.coeffs.len());
        Series { coeffs: (0..len).map(|t| f(&self.coeffs[t], &other.coeffs[t])).collect() }
    }

    pub fn neg(&self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &PLocal) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn scale_poly(&self, c: &CoeffPoly, pol: &TruncationPolicy) -> Series {
        Series { coeffs: self.coeffs.iter().map(|a| a.mul_trunc(c, pol)).collect() }
    }

    pub fn mul(&self, other: &Series, pol: &TruncationPolicy) -> Series {
        let n = pol.max_xdeg.min(self.max_xdeg()).min(other.max_xdeg());
        let mut out = vec![CoeffPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j].add_assign(&a.mul_trunc(b, pol));
                }
            }
        }
        Series { coeffs: out }
    }

    pub fn pow(&self, e: u32, pol: &TruncationPolicy) -> Series {
        let mut acc = Series::monomial(0, CoeffPoly::one(), pol);
        for _ in 0..e {
            acc = acc.mul(self, pol);
        }
        acc
    }

    /// `f(g(x))`; `g` must have no constant term.
    pub fn compose(&self, g: &Series, pol: &TruncationPolicy) -> Result<Series> {
        if !g.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = Series::zero(pol);
        let mut power = Series::monomial(0, CoeffPoly::one(), pol);
        for (t, c) in self.coeffs.iter().enumerate().take(pol.max_xdeg + 1) {
            if t > 0 {
                power = power.mul(g, pol);
            }
            if !c.is_zero() {
                out = out.add(&power.scale_poly(c, pol));
            }
        }
        Ok(out)
    }

    /// Compositional inverse of a series `x + O(x^2)`, solved one degree at
    /// a time: the coefficient of `x^t` in `f(g(x))` is `g_t` plus terms in
    /// `g_1, ..., g_{t-1}` only.
    pub fn reverse(&self, pol: &TruncationPolicy) -> Result<Series> {
        if !self.coeff(0).is_zero() || !self.coeff(1).is_one() {
            return Err(Error::NotReversible);
        }
        let mut g = Series::x(pol);
        for t in 2..=pol.max_xdeg {
            let residual = self.compose(&g, pol)?.coeff(t);
            g.coeffs[t] = &g.coeffs[t] - &residual;
        }
        Ok(g)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&CoeffPoly) -> CoeffPoly) -> Series {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Sets every `v_i` to zero.
    pub fn v_free(&self) -> Series {
        self.map_coeffs(CoeffPoly::v_free)
    }

    /// Lowest `t` with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Common cohomological degree of all terms, with `|x| = 2`.
    pub fn homogeneous_degree(&self, p: Prime) -> Option<i64> {
        let mut degs = self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(t, c)| {
            c.homogeneous_degree(p).map(|d| d + 2 * t as i64)
        });
        let first = degs.next()??;
        degs.all(|d| d == Some(first)).then_some(first)
    }

    pub fn is_p_integral(&self, p: Prime) -> bool {
        self.coeffs.iter().all(|c| c.is_p_integral(p))
    }

    pub(crate) fn rendered_terms(&self, var: &str) -> Vec<(PLocal, Vec<String>)> {
        let mut terms = Vec::new();
        for (t, c) in self.coeffs.iter().enumerate() {
            for (c, mut factors) in c.rendered_terms() {
                factors.extend(power_factor(var, t));
                terms.push((c, factors));
            }
        }
        terms
    }

    pub fn render(&self, var: &str) -> String {
        render_terms(self.rendered_terms(var))
    }
}

impl Truncate for Series {
    fn truncate(&self, pol: &TruncationPolicy) -> Series {
        Series::from_coeffs(self.coeffs.clone(), pol)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VMonomial;

    fn int_pol(max_xdeg: usize) -> TruncationPolicy {
        TruncationPolicy::with_d(Prime::TWO, 0, 1, max_xdeg).unwrap()
    }

    fn bp_pol(max_xdeg: usize) -> TruncationPolicy {
        TruncationPolicy::mod_j2(Prime::TWO, max_xdeg).unwrap()
    }

    #[test]
    fn compose_square() {
        let pol = int_pol(3);
        let f = Series::from_scalars(&[0, 0, 1], &pol);
        let g = Series::from_scalars(&[0, 1, 1], &pol);
        assert_eq!(f.compose(&g, &pol).unwrap(), Series::from_scalars(&[0, 0, 1, 2], &pol));
        assert_eq!(g.compose(&Series::x(&pol), &pol).unwrap(), g);
    }

    #[test]
    fn compose_rejects_constant_term() {
        let pol = int_pol(3);
        let f = Series::from_scalars(&[0, 1], &pol);
        let g = Series::from_scalars(&[1, 1], &pol);
        assert_eq!(f.compose(&g, &pol), Err(Error::NonzeroConstantTerm));
    }

    fn half_v1_x2(sign: i64, pol: &TruncationPolicy) -> Series {
        let c = CoeffPoly::monomial(VMonomial::var(1), PLocal::new(sign, 2));
        Series::x(pol).add(&Series::monomial(2, c, pol))
    }

    #[test]
    fn compose_mod_j2_cancels() {
        let pol = bp_pol(4);
        let f = half_v1_x2(-1, &pol);
        let g = half_v1_x2(1, &pol);
        assert_eq!(f.compose(&g, &pol).unwrap(), Series::x(&pol));
    }

    #[test]
    fn reverse_examples() {
        let pol = bp_pol(4);
        assert_eq!(Series::x(&pol).reverse(&pol).unwrap(), Series::x(&pol));
        assert_eq!(half_v1_x2(-1, &pol).reverse(&pol).unwrap(), half_v1_x2(1, &pol));

        let pol = int_pol(4);
        let f = Series::from_scalars(&[0, 1, 1], &pol);
        assert_eq!(f.reverse(&pol).unwrap(), Series::from_scalars(&[0, 1, -1, 2, -5], &pol));
    }

    #[test]
    fn reverse_needs_unit_leading_term() {
        let pol = int_pol(4);
        assert_eq!(Series::from_scalars(&[0, 2, 1], &pol).reverse(&pol), Err(Error::NotReversible));
        assert_eq!(Series::from_scalars(&[1, 1], &pol).reverse(&pol), Err(Error::NotReversible));
    }

    #[test]
    fn truncation_drops_high_powers() {
        let wide = int_pol(6);
        let narrow = int_pol(4);
        let x5 = Series::monomial(5, CoeffPoly::one(), &wide);
        assert!(x5.truncate(&narrow).is_zero());
        let e = Series::from_scalars(&[0, 1, 3], &narrow);
        assert_eq!(e.truncate(&narrow), e);
    }

    #[test]
    fn display() {
        let pol = bp_pol(4);
        assert_eq!(half_v1_x2(1, &pol).to_string(), "x + (1/2)*v1*x^2");
    }
}
