use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::PLocal;
use crate::error::{Error, Result};

use super::poly::CoeffPoly;
use super::render::{power_factor, render_terms};
use super::{Coeff, Truncate, TruncationPolicy};

/// The Stiefel manifold `W_{n,k}`; its exterior generators are
/// `y_{n-k+1}, ..., y_n` with `|y_j| = 2j - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StiefelContext {
    pub n: usize,
    pub k: usize,
}

impl StiefelContext {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 1 || k > n {
            return Err(Error::InvalidConfig(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
        Ok(StiefelContext { n, k })
    }

    /// Index of the lowest generator, `n - k + 1`.
    pub fn lo(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn generators(&self) -> std::ops::RangeInclusive<usize> {
        self.lo()..=self.n
    }

    pub fn contains(&self, j: usize) -> bool {
        self.generators().contains(&j)
    }
}

impl fmt::Display for StiefelContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W({},{})", self.n, self.k)
    }
}

/// Basis monomial `x^t * y_S` with `S` strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtKey {
    pub subset: Vec<usize>,
    pub t: usize,
}

impl ExtKey {
    pub fn new(subset: Vec<usize>, t: usize) -> Self {
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        ExtKey { subset, t }
    }

    /// `sum_{j in S} (2j - 1) + 2t`.
    pub fn degree(&self) -> usize {
        self.exterior_degree() + 2 * self.t
    }

    pub fn exterior_degree(&self) -> usize {
        self.subset.iter().map(|j| 2 * j - 1).sum()
    }
}

impl Ord for ExtKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.subset
            .len()
            .cmp(&other.subset.len())
            .then_with(|| self.subset.cmp(&other.subset))
            .then_with(|| self.t.cmp(&other.t))
    }
}

impl PartialOrd for ExtKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Merges two increasing index lists. `None` if they share an index
/// (`y_j^2 = 0`), otherwise the union and the Koszul sign
/// `(-1)^{#{(a, b) : a in S, b in T, a > b}}`.
pub fn merge_with_sign(s: &[usize], t: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(s.len() + t.len());
    let (mut i, mut j) = (0, 0);
    let mut inversions = 0usize;
    while i < s.len() && j < t.len() {
        match s[i].cmp(&t[j]) {
            Ordering::Less => {
                out.push(s[i]);
                i += 1;
            }
            Ordering::Greater => {
                inversions += s.len() - i;
                out.push(t[j]);
                j += 1;
            }
            Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&s[i..]);
    out.extend_from_slice(&t[j..]);
    Some((out, inversions % 2 == 1))
}

/// An element of `Lambda(y_{n-k+1}, ..., y_n) [x]` with coefficients in `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement<C: Coeff = PLocal> {
    ctx: StiefelContext,
    terms: BTreeMap<ExtKey, C>,
}

impl<C: Coeff> ExtElement<C> {
    pub fn zero(ctx: StiefelContext) -> Self {
        ExtElement { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: StiefelContext) -> Self {
        Self::monomial(ctx, ExtKey::new(vec![], 0), C::one())
    }

    pub fn monomial(ctx: StiefelContext, key: ExtKey, c: C) -> Self {
        let mut e = Self::zero(ctx);
        e.add_term(key, &c);
        e
    }

    /// The generator `y_j`.
    pub fn y(ctx: StiefelContext, j: usize) -> Result<Self> {
        if !ctx.contains(j) {
            return Err(Error::IndexOutOfRange { index: j, lo: ctx.lo(), hi: ctx.n });
        }
        Ok(Self::monomial(ctx, ExtKey::new(vec![j], 0), C::one()))
    }

    /// `x^t`.
    pub fn x_pow(ctx: StiefelContext, t: usize) -> Self {
        Self::monomial(ctx, ExtKey::new(vec![], t), C::one())
    }

    /// `c * x^t * y_{j_1} ... y_{j_r}` with the indices in any order; the
    /// Koszul sign of sorting them is applied.
    pub fn product_of(ctx: StiefelContext, c: C, t: usize, ys: &[usize]) -> Result<Self> {
        let mut acc = Self::monomial(ctx, ExtKey::new(vec![], t), c);
        for &j in ys {
            acc = acc.mul(&Self::y(ctx, j)?)?;
        }
        Ok(acc)
    }

    pub fn context(&self) -> StiefelContext {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtKey, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &ExtKey) -> C {
        self.terms.get(key).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: ExtKey, c: &C) {
        if c.is_zero() {
            return;
        }
        let updated = match self.terms.get(&key) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if updated.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, updated);
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::MismatchedContext(self.ctx.to_string(), other.ctx.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        ExtElement { ctx: self.ctx, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.ctx);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), &a.mul(c));
        }
        out
    }

    /// Graded-commutative product with Koszul signs.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = Self::zero(self.ctx);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let Some((subset, negative)) = merge_with_sign(&ka.subset, &kb.subset) else {
                    continue;
                };
                let c = ca.mul(cb);
                let c = if negative { c.neg() } else { c };
                out.add_term(ExtKey::new(subset, ka.t + kb.t), &c);
            }
        }
        Ok(out)
    }

    /// Drops terms with `x`-power above `max_xdeg`.
    pub fn truncate_x(&self, max_xdeg: usize) -> Self {
        ExtElement {
            ctx: self.ctx,
            terms: self.terms.iter().filter(|(k, _)| k.t <= max_xdeg).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Drops terms with more than `max_len` exterior factors (working
    /// modulo `I^{max_len + 1}` for `I` the ideal of the `y_j`).
    pub fn truncate_exterior(&self, max_len: usize) -> Self {
        ExtElement {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.subset.len() <= max_len)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ExtElement<D> {
        let mut out = ExtElement::zero(self.ctx);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    /// Common total degree of all terms, ignoring coefficient degrees.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(ExtKey::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

fn key_factors(k: &ExtKey) -> Vec<String> {
    let mut f: Vec<String> = power_factor("x", k.t).into_iter().collect();
    f.extend(k.subset.iter().map(|j| format!("y{j}")));
    f
}

impl fmt::Display for ExtElement<PLocal> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(k, c)| (c.clone(), key_factors(k)));
        f.write_str(&render_terms(terms))
    }
}

impl fmt::Display for ExtElement<CoeffPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in &self.terms {
            for (a, mut factors) in c.rendered_terms() {
                factors.extend(key_factors(k));
                terms.push((a, factors));
            }
        }
        f.write_str(&render_terms(terms))
    }
}

impl Truncate for PLocal {
    fn truncate(&self, _pol: &TruncationPolicy) -> PLocal {
        self.clone()
    }
}

impl<C: Coeff + Truncate> Truncate for ExtElement<C> {
    fn truncate(&self, pol: &TruncationPolicy) -> Self {
        let mut out = Self::zero(self.ctx);
        for (k, c) in &self.terms {
            if k.t <= pol.max_xdeg {
                out.add_term(k.clone(), &c.truncate(pol));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::VMonomial;
    use crate::arith::Prime;

    fn ctx() -> StiefelContext {
        StiefelContext::new(4, 2).unwrap()
    }

    fn y(j: usize) -> ExtElement {
        ExtElement::y(ctx(), j).unwrap()
    }

    #[test]
    fn koszul_signs() {
        assert_eq!(y(3).mul(&y(4)).unwrap().to_string(), "y3*y4");
        assert_eq!(y(4).mul(&y(3)).unwrap().to_string(), "-y3*y4");
        assert!(y(3).mul(&y(3)).unwrap().is_zero());
    }

    #[test]
    fn distributes_over_x() {
        let x = ExtElement::x_pow(ctx(), 1);
        let a = y(3).add(&x).unwrap();
        let b = y(4).add(&x).unwrap();
        assert_eq!(a.mul(&b).unwrap().to_string(), "x^2 + x*y3 + x*y4 + y3*y4");
    }

    #[test]
    fn mismatched_context() {
        let other = ExtElement::<PLocal>::y(StiefelContext::new(5, 2).unwrap(), 4).unwrap();
        assert!(matches!(y(4).mul(&other), Err(Error::MismatchedContext(..))));
    }

    #[test]
    fn generator_range() {
        assert!(matches!(ExtElement::<PLocal>::y(ctx(), 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn merge_sign_counts_inversions() {
        assert_eq!(merge_with_sign(&[2, 5], &[1, 3]), Some((vec![1, 2, 3, 5], true)));
        assert_eq!(merge_with_sign(&[1, 2], &[3]), Some((vec![1, 2, 3], false)));
        assert_eq!(merge_with_sign(&[4, 5], &[1, 2]), Some((vec![1, 2, 4, 5], false)));
        assert_eq!(merge_with_sign(&[1], &[1]), None);
    }

    #[test]
    fn truncate_bp_element() {
        let pol = TruncationPolicy::with_d(Prime::TWO, 2, 1, 4).unwrap();
        let v1sq = CoeffPoly::monomial(VMonomial::from_exponents(vec![2]), PLocal::one());
        let e = ExtElement::<CoeffPoly>::y(ctx(), 3).unwrap().scale(&v1sq);
        assert!(e.truncate(&pol).is_zero());
        let x5 = ExtElement::<CoeffPoly>::x_pow(ctx(), 5);
        assert!(x5.truncate(&pol).is_zero());
        let keep = ExtElement::<CoeffPoly>::y(ctx(), 4).unwrap().scale(&CoeffPoly::var(1));
        assert_eq!(keep.truncate(&pol), keep);
        assert_eq!(keep.to_string(), "v1*y4");
    }

    #[test]
    fn degrees() {
        let e = ExtElement::<PLocal>::product_of(ctx(), PLocal::one(), 2, &[4, 3]).unwrap();
        assert_eq!(e.to_string(), "-x^2*y3*y4");
        assert_eq!(e.homogeneous_degree(), Some(4 + 5 + 7));
    }
}
