use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{PLocal, Prime};

use super::render::render_terms;
use super::{Truncate, TruncationPolicy};

/// A monomial `v_1^e_1 * ... * v_d^e_d`, stored without trailing zero
/// exponents so equal monomials compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VMonomial(Vec<u32>);

impl VMonomial {
    pub fn one() -> Self {
        VMonomial(Vec::new())
    }

    /// `v_i` for `i >= 1`.
    pub fn var(i: usize) -> Self {
        assert!(i >= 1, "v-generators are indexed from 1");
        let mut e = vec![0; i];
        e[i - 1] = 1;
        VMonomial(e)
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        VMonomial(exps)
    }

    /// Exponent of `v_i`.
    pub fn exponent(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total v-exponent, i.e. the power of J containing the monomial.
    pub fn jorder(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Largest index with a nonzero exponent.
    pub fn max_index(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Cohomological degree, `|v_i| = -2(p^i - 1)`.
    pub fn degree(&self, p: Prime) -> i64 {
        let p = p.get() as i64;
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| -2 * e as i64 * (p.pow(i as u32 + 1) - 1))
            .sum()
    }

    pub fn mul(&self, other: &VMonomial) -> VMonomial {
        let len = self.0.len().max(other.0.len());
        let exps = (0..len)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        VMonomial(exps)
    }

    pub(crate) fn factors(&self) -> Vec<String> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("v{}", i + 1) } else { format!("v{}^{}", i + 1, e) })
            .collect()
    }
}

// Graded lexicographic: lower J-order first, then larger exponent of v_1,
// then of v_2, and so on.
impl Ord for VMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.jorder().cmp(&other.jorder()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            for i in 0..len {
                let a = self.0.get(i).copied().unwrap_or(0);
                let b = other.0.get(i).copied().unwrap_or(0);
                if a != b {
                    return b.cmp(&a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for VMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.factors();
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join("*"))
        }
    }
}

/// An element of `Q[v_1, ..., v_d]`; its p-integral elements form the
/// coefficient ring `Z_(p)[v_1, ..., v_d]` of BP.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<VMonomial, PLocal>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    pub fn one() -> Self {
        CoeffPoly::constant(PLocal::one())
    }

    pub fn constant(c: PLocal) -> Self {
        CoeffPoly::monomial(VMonomial::one(), c)
    }

    pub fn var(i: usize) -> Self {
        CoeffPoly::monomial(VMonomial::var(i), PLocal::one())
    }

    pub fn monomial(m: VMonomial, c: PLocal) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CoeffPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (VMonomial, PLocal)>) -> Self {
        let mut out = CoeffPoly::zero();
        for (m, c) in terms {
            out.add_term(m, &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VMonomial, &PLocal)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &VMonomial) -> PLocal {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> PLocal {
        self.coeff(&VMonomial::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(VMonomial::is_one)
    }

    pub fn add_term(&mut self, m: VMonomial, c: &PLocal) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &CoeffPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn scale(&self, c: &PLocal) -> CoeffPoly {
        if c.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// Product keeping only the monomials allowed by `pol`.
    pub fn mul_trunc(&self, other: &CoeffPoly, pol: &TruncationPolicy) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.jorder() + mb.jorder() > pol.max_jorder {
                    continue;
                }
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn pow_trunc(&self, e: u32, pol: &TruncationPolicy) -> CoeffPoly {
        let mut acc = CoeffPoly::one().truncate(pol);
        for _ in 0..e {
            acc = acc.mul_trunc(self, pol);
        }
        acc
    }

    /// Rewrites each monomial's coefficient by `f(monomial)`.
    pub fn map_terms(&self, mut f: impl FnMut(&VMonomial, &PLocal) -> PLocal) -> CoeffPoly {
        CoeffPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(m, c))))
    }

    /// Sets every `v_i` to zero.
    pub fn v_free(&self) -> CoeffPoly {
        CoeffPoly::constant(self.constant_term())
    }

    /// Common degree of all terms, if the element is homogeneous and nonzero.
    pub fn homogeneous_degree(&self, p: Prime) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| m.degree(p));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// True when every coefficient lies in Z_(p).
    pub fn is_p_integral(&self, p: Prime) -> bool {
        self.terms.values().all(|c| c.is_p_integral(p))
    }

    pub(crate) fn rendered_terms(&self) -> Vec<(PLocal, Vec<String>)> {
        self.terms.iter().map(|(m, c)| (c.clone(), m.factors())).collect()
    }
}

impl Truncate for CoeffPoly {
    fn truncate(&self, pol: &TruncationPolicy) -> CoeffPoly {
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.jorder() <= pol.max_jorder && m.max_index() <= pol.d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_terms(self.rendered_terms()))
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &CoeffPoly {
    type Output = CoeffPoly;
    fn sub(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_assign(&-rhs);
        out
    }
}

impl Neg for &CoeffPoly {
    type Output = CoeffPoly;
    fn neg(self) -> CoeffPoly {
        CoeffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// Untruncated product.
impl Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol(jorder: u32) -> TruncationPolicy {
        TruncationPolicy::with_d(Prime::TWO, 3, jorder, 4).unwrap()
    }

    #[test]
    fn square_and_cube_of_v1() {
        let v1 = CoeffPoly::var(1);
        let sq = v1.mul_trunc(&v1, &pol(2));
        assert_eq!(sq, CoeffPoly::monomial(VMonomial::from_exponents(vec![2]), PLocal::one()));
        assert!(v1.mul_trunc(&sq, &pol(2)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let v1 = CoeffPoly::var(1);
        let a = &CoeffPoly::one() + &v1;
        let b = &CoeffPoly::one() - &v1;
        let prod = a.mul_trunc(&b, &pol(2));
        assert_eq!(prod.to_string(), "1 - v1^2");
    }

    #[test]
    fn degrees() {
        let m = VMonomial::from_exponents(vec![1, 1]);
        assert_eq!(m.degree(Prime::TWO), -2 - 6);
        assert_eq!(VMonomial::var(2).degree(Prime::THREE), -16);
        let homog = &CoeffPoly::var(1).pow_trunc(3, &pol(3)) + &CoeffPoly::var(2);
        assert_eq!(homog.homogeneous_degree(Prime::TWO), Some(-6));
        let mixed = &CoeffPoly::var(1) + &CoeffPoly::var(2);
        assert_eq!(mixed.homogeneous_degree(Prime::TWO), None);
    }

    #[test]
    fn truncate_is_idempotent() {
        let e = &CoeffPoly::var(1).pow_trunc(2, &pol(2)) + &CoeffPoly::var(2);
        let once = e.truncate(&pol(1));
        assert_eq!(once, CoeffPoly::var(2));
        assert_eq!(once.truncate(&pol(1)), once);
    }

    #[test]
    fn monomial_order() {
        let mut ms = vec![VMonomial::var(2), VMonomial::one(), VMonomial::var(1)];
        ms.sort();
        assert_eq!(ms, vec![VMonomial::one(), VMonomial::var(1), VMonomial::var(2)]);
    }
}
