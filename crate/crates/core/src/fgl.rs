//! The p-typical formal group law of BP in Araki generators.
//!
//! Everything is derived from the logarithm, whose coefficients solve
//! `p * l_n = sum_{0 <= i <= n} l_i * v_{n-i}^(p^i)` with `l_0 = 1`, `v_0 = p`.
//! The exponential is its compositional inverse, `F(x, y) = exp(log x + log y)`
//! and `[a](x) = exp(a * log x)`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::{
    BiSeries, CoeffPoly, ExtElement, ExtKey, MultiSeries, Series, StiefelContext, Truncate, TruncationPolicy,
    VMonomial,
};
use crate::arith::{PContext, PLocal, Prime, Valuation};
use crate::error::{Error, Result};

/// Log, exp and formal sum for one truncation policy, built eagerly.
#[derive(Clone, Debug)]
pub struct FglContext {
    pol: TruncationPolicy,
    log_coeffs: Vec<CoeffPoly>,
    log: Series,
    exp: Series,
    /// Built on first use: the bivariate law dominates the cost at high
    /// x-degree and most callers only need univariate series.
    fgl: OnceLock<BiSeries>,
}

impl FglContext {
    pub fn new(pol: TruncationPolicy) -> Result<Self> {
        let log_coeffs = log_coefficients(&pol);
        let mut log = Series::x(&pol);
        let mut pi = pol.p.get() as usize;
        for l in log_coeffs.iter().skip(1) {
            log = log.add(&Series::monomial(pi, l.clone(), &pol));
            pi *= pol.p.get() as usize;
        }
        let exp = log.reverse(&pol)?;
        Ok(FglContext { pol, log_coeffs, log, exp, fgl: OnceLock::new() })
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.pol
    }

    pub fn prime(&self) -> Prime {
        self.pol.p
    }

    /// `l_0 = 1, l_1, l_2, ...` for every `n` with `p^n <= max_xdeg`.
    pub fn log_coefficients(&self) -> &[CoeffPoly] {
        &self.log_coeffs
    }

    pub fn log(&self) -> &Series {
        &self.log
    }

    pub fn exp(&self) -> &Series {
        &self.exp
    }

    /// `F(x, y)`.
    pub fn fgl(&self) -> &BiSeries {
        self.fgl.get_or_init(|| {
            let lx = MultiSeries::from_series(&self.log, 2, 0);
            let ly = MultiSeries::from_series(&self.log, 2, 1);
            lx.add(&ly).compose_into(&self.exp, &self.pol).expect("log has no constant term")
        })
    }

    /// `F(a(x), b(x))` for series without constant term.
    pub fn formal_sum(&self, a: &Series, b: &Series) -> Result<Series> {
        let args = [MultiSeries::from_series(a, 1, 0), MultiSeries::from_series(b, 1, 0)];
        Ok(self.fgl().substitute(&args, &self.pol)?.to_series(&self.pol))
    }

    /// `[a](x) = exp(a * log x)`.
    pub fn n_series(&self, a: &PLocal) -> Result<Series> {
        self.exp.compose(&self.log.scale(a), &self.pol)
    }

    /// `[a](x)` as the iterated formal sum `x +_F x +_F ...`, with
    /// `[-a](x) = [-1]([a](x))`. Independent of [`FglContext::n_series`]
    /// except through `F` itself.
    pub fn n_series_by_sum(&self, a: i64) -> Result<Series> {
        let x = Series::x(&self.pol);
        let mut acc = Series::zero(&self.pol);
        for _ in 0..a.unsigned_abs() {
            acc = self.formal_sum(&acc, &x)?;
        }
        if a < 0 {
            let inverse = self.exp.compose(&self.log.neg(), &self.pol)?;
            acc = inverse.compose(&acc, &self.pol)?;
        }
        Ok(acc)
    }

    /// The Adams operation `Psi^a` for a unit `a` of Z_(p).
    pub fn adams(&self, a: &PLocal) -> Result<AdamsOperation> {
        let p = self.pol.p;
        if !a.is_p_unit(p) {
            return Err(Error::NonUnitParameter(a.to_string(), p.get()));
        }
        let series = self.n_series(a)?.scale(&a.recip()?);
        for c in series.coeffs() {
            for (_, coeff) in c.terms() {
                PContext::strict(p).check(coeff.clone())?;
            }
        }
        Ok(AdamsOperation { a: a.clone(), pol: self.pol, series })
    }

    /// Checks `[p](x) = p x +_F v_1 x^p +_F v_2 x^(p^2) +_F ...` to the
    /// truncation.
    pub fn araki_check(&self) -> Result<ArakiReport> {
        let p = self.pol.p;
        let lhs = self.n_series(&PLocal::from_int(p.big()))?;
        let mut rhs = Series::x(&self.pol).scale(&PLocal::from_int(p.big()));
        let mut pi = p.get() as usize;
        let mut i = 1;
        while pi <= self.pol.max_xdeg {
            let term = Series::monomial(pi, CoeffPoly::var(i), &self.pol);
            rhs = self.formal_sum(&rhs, &term)?;
            pi *= p.get() as usize;
            i += 1;
        }
        let first_failure = (0..=self.pol.max_xdeg).find(|&t| lhs.coeff(t) != rhs.coeff(t)).map(|t| ArakiMismatch {
            xdeg: t,
            p_series: lhs.coeff(t).to_string(),
            formal_sum: rhs.coeff(t).to_string(),
        });
        Ok(ArakiReport { holds: first_failure.is_none(), first_failure })
    }

    /// Unit, commutativity and associativity of `F`, exactly to the
    /// truncation.
    pub fn axiom_report(&self) -> Result<FglAxioms> {
        let pol = &self.pol;
        let f = self.fgl();
        let unit = f.restrict_zero(1) == MultiSeries::var(2, 0) && f.restrict_zero(0) == MultiSeries::var(2, 1);
        let commutative = f.permute(&[1, 0]) == *f;
        let (x, y, z) = (MultiSeries::var(3, 0), MultiSeries::var(3, 1), MultiSeries::var(3, 2));
        let xy = f.substitute(&[x.clone(), y.clone()], pol)?;
        let yz = f.substitute(&[y, z.clone()], pol)?;
        let left = f.substitute(&[xy, z], pol)?;
        let right = f.substitute(&[x, yz], pol)?;
        let associative = left == right;
        Ok(FglAxioms { unit, commutative, associative })
    }

    /// Compares the coefficient of `v_n` in `l_n` with the two candidate
    /// closed forms `1/(p - p^(p^n))` and `1/(p - p^n)` modulo J^2.
    pub fn log_denominator_diagnostic(&self) -> Vec<LogDenominator> {
        let p = self.pol.p;
        let pz = PLocal::from_int(p.big());
        self.log_coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, l)| {
                let computed = l.coeff(&VMonomial::var(n));
                let recursion = (&pz - &PLocal::from_int(p.pow(p.get().pow(n as u32) as u32))).recip().ok();
                let stated = (&pz - &PLocal::from_int(p.pow(n as u32))).recip().ok();
                LogDenominator {
                    n,
                    matches_recursion_form: recursion.as_ref() == Some(&computed),
                    matches_stated_form: stated.as_ref() == Some(&computed),
                    computed: computed.to_string(),
                    recursion_form: recursion.map(|c| c.to_string()),
                    stated_form: stated.map(|c| c.to_string()),
                }
            })
            .collect()
    }
}

fn log_coefficients(pol: &TruncationPolicy) -> Vec<CoeffPoly> {
    let p = pol.p;
    let mut ls = vec![CoeffPoly::one()];
    let mut n = 1u32;
    while (p.get() as usize).checked_pow(n).is_some_and(|pn| pn <= pol.max_xdeg) {
        let mut rhs = CoeffPoly::var(n as usize).truncate(pol);
        for (i, li) in ls.iter().enumerate().skip(1) {
            let vpow = CoeffPoly::var(n as usize - i).truncate(pol).pow_trunc(p.get().pow(i as u32) as u32, pol);
            rhs.add_assign(&li.mul_trunc(&vpow, pol));
        }
        // l_n * (p - p^(p^n)) = rhs
        let denom = PLocal::from_int(p.big()) - PLocal::from_int(p.pow(p.get().pow(n) as u32));
        ls.push(rhs.scale(&denom.recip().expect("p - p^(p^n) is nonzero")));
        n += 1;
    }
    ls
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArakiMismatch {
    pub xdeg: usize,
    pub p_series: String,
    pub formal_sum: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FglAxioms {
    pub unit: bool,
    pub commutative: bool,
    pub associative: bool,
}

impl FglAxioms {
    pub fn all(&self) -> bool {
        self.unit && self.commutative && self.associative
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArakiReport {
    pub holds: bool,
    pub first_failure: Option<ArakiMismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogDenominator {
    pub n: usize,
    pub computed: String,
    pub recursion_form: Option<String>,
    pub stated_form: Option<String>,
    pub matches_recursion_form: bool,
    pub matches_stated_form: bool,
}

/// `Psi^a`, acting on coefficients by `v_i -> a^(p^i - 1) v_i` and on the
/// orientation class by `x -> a^{-1} [a](x)`.
#[derive(Clone, Debug)]
pub struct AdamsOperation {
    a: PLocal,
    pol: TruncationPolicy,
    series: Series,
}

impl AdamsOperation {
    pub fn parameter(&self) -> &PLocal {
        &self.a
    }

    /// `Psi^a(x)`.
    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.pol
    }

    pub fn apply<T: AdamsOperand>(&self, e: &T) -> Result<T> {
        e.apply_adams(self)
    }

    fn coefficient_factor(&self, m: &VMonomial) -> PLocal {
        let p = self.pol.p.get();
        let e: u32 = m.exponents().iter().enumerate().map(|(i, &e)| e * (p.pow(i as u32 + 1) as u32 - 1)).sum();
        self.a.pow(e)
    }
}

/// Things `Psi^a` acts on.
pub trait AdamsOperand: Sized {
    fn apply_adams(&self, op: &AdamsOperation) -> Result<Self>;
}

impl AdamsOperand for CoeffPoly {
    fn apply_adams(&self, op: &AdamsOperation) -> Result<Self> {
        Ok(self.map_terms(|m, c| c * &op.coefficient_factor(m)))
    }
}

impl AdamsOperand for Series {
    fn apply_adams(&self, op: &AdamsOperation) -> Result<Self> {
        let mapped = self.map_coeffs(|c| c.apply_adams(op).expect("coefficient action is total"));
        mapped.truncate(&op.pol).compose(&op.series, &op.pol)
    }
}

/// Action on `BP^*(W_{n,k})` modulo `I^2 + J^2`, `I` the ideal of the `y_j`.
/// Only `p = 2`, `a = 3` is supported.
///
/// `y_j` restricts to the suspension of `x^{j-1}` on a stunted projective
/// space, so `Psi^3(y_j)` is read off from `Psi^3(x)^{j-1}`: the coefficient
/// of `x^m` becomes the coefficient of `y_{m+1}`, and `x^m` with `m >= n`
/// vanishes.
impl AdamsOperand for ExtElement<CoeffPoly> {
    fn apply_adams(&self, op: &AdamsOperation) -> Result<Self> {
        if op.pol.p != Prime::TWO || op.a != PLocal::from(3) {
            return Err(Error::UnsupportedContext(format!(
                "Stiefel generators need p = 2 and a = 3, got p = {}, a = {}",
                op.pol.p, op.a
            )));
        }
        let ctx = self.context();
        let pol = TruncationPolicy::mod_j2(Prime::TWO, ctx.n.max(2))?;
        let local;
        let op = if op.pol.max_xdeg >= ctx.n && op.pol.max_jorder == 1 {
            op
        } else {
            local = FglContext::new(pol)?.adams(&PLocal::from(3))?;
            &local
        };
        let mut out = ExtElement::zero(ctx);
        for (key, c) in self.terms() {
            if key.t > 0 {
                return Err(Error::UnsupportedContext("terms with a power of x".into()));
            }
            let c = c.apply_adams(op)?.truncate(&pol);
            match key.subset.as_slice() {
                [] => out.add_term(key.clone(), &c),
                [j] => {
                    let power = op.series.pow(*j as u32 - 1, &pol);
                    for (m, coeff) in power.coeffs().iter().enumerate() {
                        if coeff.is_zero() || m + 1 > ctx.n {
                            continue;
                        }
                        out.add_term(ExtKey::new(vec![m + 1], 0), &coeff.mul_trunc(&c, &pol));
                    }
                }
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Convenience wrapper: `Psi^a(e)` under `pol`.
pub fn adams_apply<T: AdamsOperand>(a: &PLocal, e: &T, pol: TruncationPolicy) -> Result<T> {
    FglContext::new(pol)?.adams(a)?.apply(e)
}

/// `alpha_i` read off from `Psi^3(x) = x + sum alpha_i v_i x^(2^i)` modulo
/// J^2 at p = 2, for `1 <= i <= max_i`.
pub fn adams3_alphas(max_i: usize) -> Result<Vec<PLocal>> {
    let pol = TruncationPolicy::mod_j2(Prime::TWO, 1 << max_i)?;
    let psi = FglContext::new(pol)?.adams(&PLocal::from(3))?;
    Ok((1..=max_i).map(|i| psi.series().coeff(1 << i).coeff(&VMonomial::var(i))).collect())
}

/// Builds a Stiefel element `y_j` with `BP`-coefficients.
pub fn stiefel_generator(ctx: StiefelContext, j: usize) -> Result<ExtElement<CoeffPoly>> {
    ExtElement::y(ctx, j)
}

/// `v_p` of every coefficient of a series, for integrality diagnostics.
pub fn coefficient_valuations(s: &Series, p: Prime) -> Vec<(usize, String, Valuation)> {
    let mut out = Vec::new();
    for (t, c) in s.coeffs().iter().enumerate() {
        for (m, a) in c.terms() {
            out.push((t, m.to_string(), a.vp(p)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2(max_xdeg: usize) -> FglContext {
        FglContext::new(TruncationPolicy::mod_j2(Prime::TWO, max_xdeg).unwrap()).unwrap()
    }

    fn v(i: usize, c: PLocal) -> CoeffPoly {
        CoeffPoly::monomial(VMonomial::var(i), c)
    }

    #[test]
    fn log_coefficients_mod_j2() {
        let f = ctx2(4);
        assert_eq!(f.log_coefficients()[1], v(1, PLocal::new(-1, 2)));
        assert_eq!(f.log_coefficients()[2], v(2, PLocal::new(-1, 14)));
    }

    #[test]
    fn exp_mod_j2() {
        let f = ctx2(4);
        assert_eq!(f.exp().to_string(), "x + (1/2)*v1*x^2 + (1/14)*v2*x^4");
        let pol = f.policy();
        assert_eq!(f.exp().compose(f.log(), pol).unwrap(), Series::x(pol));
    }

    #[test]
    fn fgl_low_degree() {
        let f = ctx2(2);
        assert_eq!(f.fgl().to_string(), "x + y + v1*x*y");
    }

    #[test]
    fn three_series() {
        let f = ctx2(4);
        let s = f.n_series(&PLocal::from(3)).unwrap();
        assert_eq!(s.to_string(), "3*x + 3*v1*x^2 + (39/7)*v2*x^4");
        assert_eq!(f.n_series(&PLocal::one()).unwrap(), Series::x(f.policy()));
    }

    #[test]
    fn adams_three() {
        let f = ctx2(8);
        let psi = f.adams(&PLocal::from(3)).unwrap();
        assert_eq!(psi.series().to_string(), "x + v1*x^2 + (13/7)*v2*x^4 + (1093/127)*v3*x^8");
        assert_eq!(f.adams(&PLocal::one()).unwrap().series(), &Series::x(f.policy()));
    }

    #[test]
    fn adams_rejects_non_units() {
        let f = ctx2(4);
        assert!(matches!(f.adams(&PLocal::from(2)), Err(Error::NonUnitParameter(..))));
        assert!(matches!(f.adams(&PLocal::zero()), Err(Error::NonUnitParameter(..))));
    }

    #[test]
    fn coefficient_action() {
        let f = ctx2(8);
        let psi = f.adams(&PLocal::from(3)).unwrap();
        assert_eq!(psi.apply(&CoeffPoly::var(1)).unwrap(), v(1, PLocal::from(3)));
        assert_eq!(psi.apply(&CoeffPoly::var(3)).unwrap(), v(3, PLocal::from(2187)));
    }

    #[test]
    fn stiefel_generators() {
        let ctx = StiefelContext::new(8, 3).unwrap();
        let pol = TruncationPolicy::mod_j2(Prime::TWO, 8).unwrap();
        let y6 = stiefel_generator(ctx, 6).unwrap();
        let out = adams_apply(&PLocal::from(3), &y6, pol).unwrap();
        assert_eq!(out.to_string(), "y6 + 5*v1*y7");
        let y8 = stiefel_generator(ctx, 8).unwrap();
        assert_eq!(adams_apply(&PLocal::from(3), &y8, pol).unwrap(), y8);
    }

    #[test]
    fn stiefel_needs_p2_a3() {
        let ctx = StiefelContext::new(8, 3).unwrap();
        let y6 = stiefel_generator(ctx, 6).unwrap();
        let pol = TruncationPolicy::mod_j2(Prime::TWO, 8).unwrap();
        assert!(matches!(adams_apply(&PLocal::from(5), &y6, pol), Err(Error::UnsupportedContext(_))));
        let pol3 = TruncationPolicy::mod_j2(Prime::THREE, 9).unwrap();
        assert!(matches!(adams_apply(&PLocal::from(2), &y6, pol3), Err(Error::UnsupportedContext(_))));
    }

    #[test]
    fn v_free_specialisation() {
        let f = ctx2(8);
        assert_eq!(f.log().v_free(), Series::x(f.policy()));
        assert_eq!(f.exp().v_free(), Series::x(f.policy()));
        let s = f.n_series(&PLocal::from(5)).unwrap().v_free();
        assert_eq!(s, Series::x(f.policy()).scale(&PLocal::from(5)));
    }

    #[test]
    fn denominator_diagnostic() {
        let d = ctx2(8).log_denominator_diagnostic();
        assert_eq!(d.len(), 3);
        assert!(d.iter().all(|e| e.matches_recursion_form));
        // 1/(p - p^1) does not exist; for n >= 2 the stated form disagrees
        assert_eq!(d[0].stated_form, None);
        assert!(!d[1].matches_stated_form);
    }

    #[test]
    fn alphas() {
        let a = adams3_alphas(3).unwrap();
        assert_eq!(a, vec![PLocal::one(), PLocal::new(13, 7), PLocal::new(1093, 127)]);
    }
}
