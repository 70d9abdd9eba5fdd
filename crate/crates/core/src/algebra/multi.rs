use std::collections::BTreeMap;
use std::fmt;

use crate::arith::PLocal;
use crate::error::{Error, Result};

use super::poly::CoeffPoly;
use super::render::{power_factor, render_terms};
use super::series::Series;
use super::{Truncate, TruncationPolicy};

const VAR_NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// A power series in `arity` variables over [`CoeffPoly`], truncated at
/// total degree `max_xdeg`. Sparse in the exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiSeries {
    arity: usize,
    terms: BTreeMap<Vec<u32>, CoeffPoly>,
}

/// Two-variable series, the home of the formal group law `F(x, y)`.
pub type BiSeries = MultiSeries;

impl MultiSeries {
    pub fn zero(arity: usize) -> Self {
        MultiSeries { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: CoeffPoly) -> Self {
        let mut s = MultiSeries::zero(arity);
        s.add_term(vec![0; arity], &c);
        s
    }

    /// The `i`-th variable (0-based).
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity);
        let mut e = vec![0; arity];
        e[i] = 1;
        let mut s = MultiSeries::zero(arity);
        s.add_term(e, &CoeffPoly::one());
        s
    }

    /// A univariate series placed in variable `i`.
    pub fn from_series(s: &Series, arity: usize, i: usize) -> Self {
        let mut out = MultiSeries::zero(arity);
        for (t, c) in s.coeffs().iter().enumerate() {
            let mut e = vec![0; arity];
            e[i] = t as u32;
            out.add_term(e, c);
        }
        out
    }

    /// Back to one variable; panics unless `arity == 1`.
    pub fn to_series(&self, pol: &TruncationPolicy) -> Series {
        assert_eq!(self.arity, 1);
        let mut coeffs = vec![CoeffPoly::zero(); pol.max_xdeg + 1];
        for (e, c) in &self.terms {
            if let Some(slot) = coeffs.get_mut(e[0] as usize) {
                *slot = c.clone();
            }
        }
        Series::from_coeffs(coeffs, pol)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> CoeffPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: &CoeffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &MultiSeries) -> MultiSeries {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiSeries) -> MultiSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiSeries {
        MultiSeries { arity: self.arity, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale_poly(&self, c: &CoeffPoly, pol: &TruncationPolicy) -> MultiSeries {
        let mut out = MultiSeries::zero(self.arity);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), &a.mul_trunc(c, pol));
        }
        out
    }

    pub fn mul(&self, other: &MultiSeries, pol: &TruncationPolicy) -> MultiSeries {
        assert_eq!(self.arity, other.arity);
        let mut out = MultiSeries::zero(self.arity);
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().sum();
                if (da + db) as usize > pol.max_xdeg {
                    continue;
                }
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, &ca.mul_trunc(cb, pol));
            }
        }
        out
    }

    /// Substitutes `args[i]` for variable `i`. Every argument must have zero
    /// constant term and share one arity, which becomes the result's.
    pub fn substitute(&self, args: &[MultiSeries], pol: &TruncationPolicy) -> Result<MultiSeries> {
        assert_eq!(args.len(), self.arity);
        let out_arity = args.first().map_or(0, |a| a.arity);
        if args.iter().any(|a| a.arity != out_arity) {
            return Err(Error::MismatchedContext("substitution arity".into(), "mixed".into()));
        }
        if args.iter().any(|a| !a.coeff(&vec![0; out_arity]).is_zero()) {
            return Err(Error::NonzeroConstantTerm);
        }
        // powers[i][e] = args[i]^e
        let powers: Vec<Vec<MultiSeries>> = args
            .iter()
            .map(|a| {
                let mut ps = vec![MultiSeries::constant(out_arity, CoeffPoly::one())];
                for _ in 0..pol.max_xdeg {
                    let next = ps.last().unwrap().mul(a, pol);
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = MultiSeries::zero(out_arity);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() as usize > pol.max_xdeg {
                continue;
            }
            let mut term = MultiSeries::constant(out_arity, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                term = term.mul(&powers[i][ei as usize], pol);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `f(self)` for a univariate `f`.
    pub fn compose_into(&self, f: &Series, pol: &TruncationPolicy) -> Result<MultiSeries> {
        MultiSeries::from_series(f, 1, 0).substitute(std::slice::from_ref(self), pol)
    }

    /// Sets variable `i` to zero.
    pub fn restrict_zero(&self, i: usize) -> MultiSeries {
        MultiSeries {
            arity: self.arity,
            terms: self.terms.iter().filter(|(e, _)| e[i] == 0).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Permutes the variables: variable `i` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> MultiSeries {
        let mut out = MultiSeries::zero(self.arity);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.arity];
            for (i, &ei) in e.iter().enumerate() {
                f[perm[i]] = ei;
            }
            out.add_term(f, c);
        }
        out
    }

    pub fn v_free(&self) -> MultiSeries {
        let mut out = MultiSeries::zero(self.arity);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.v_free());
        }
        out
    }

    fn rendered_terms(&self) -> Vec<(PLocal, Vec<String>)> {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        // total degree, then by decreasing power of the first variable
        keys.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let mut out = Vec::new();
        for e in keys {
            for (c, mut factors) in self.terms[e].rendered_terms() {
                for (i, &ei) in e.iter().enumerate() {
                    let name = VAR_NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string());
                    factors.extend(power_factor(&name, ei as usize));
                }
                out.push((c, factors));
            }
        }
        out
    }
}

impl Truncate for MultiSeries {
    fn truncate(&self, pol: &TruncationPolicy) -> MultiSeries {
        let mut out = MultiSeries::zero(self.arity);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() as usize <= pol.max_xdeg {
                out.add_term(e.clone(), &c.truncate(pol));
            }
        }
        out
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.rendered_terms()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;

    #[test]
    fn binomial_expansion() {
        let pol = TruncationPolicy::with_d(Prime::TWO, 0, 1, 3).unwrap();
        let x = MultiSeries::var(2, 0);
        let y = MultiSeries::var(2, 1);
        let s = x.add(&y);
        let sq = s.mul(&s, &pol);
        assert_eq!(sq.to_string(), "x^2 + 2*x*y + y^2");
        let cube = sq.mul(&s, &pol).mul(&s, &pol);
        assert!(cube.is_zero(), "degree 4 truncated");
    }

    #[test]
    fn substitute_symmetric() {
        let pol = TruncationPolicy::with_d(Prime::TWO, 0, 1, 4).unwrap();
        let x = MultiSeries::var(2, 0);
        let y = MultiSeries::var(2, 1);
        let f = x.mul(&y, &pol);
        let swapped = f.substitute(&[y.clone(), x.clone()], &pol).unwrap();
        assert_eq!(swapped, f);
        assert_eq!(f.permute(&[1, 0]), f);
        assert!(f.restrict_zero(1).is_zero());
    }
}
