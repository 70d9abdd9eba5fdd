//! Exact scalars: p-local rationals, p-adic valuations and binomial coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated rational prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `p^e` as a big integer.
    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.big(), e as usize)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// p-adic valuation. Zero has valuation `Infinite`, which compares above
/// every finite value so running minima need no special casing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Whether a computation must stay inside Z_(p) or may use the whole
/// fraction field Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Strict,
    FractionField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact rational number, read as an element of Z_(p) for an ambient
/// prime carried by the surrounding context.
///
/// The ring operators are total on Q; integrality at `p` is checked where a
/// caller asks for it, through [`PContext::arith`] or [`PLocal::is_p_integral`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PLocal(BigRational);

impl PLocal {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        PLocal(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        PLocal(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        PLocal(BigRational::zero())
    }

    pub fn one() -> Self {
        PLocal(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn abs(&self) -> Self {
        PLocal(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(PLocal(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        PLocal(num_traits::pow(self.0.clone(), e as usize))
    }

    /// Valuation at `p`: exponent of `p` in the numerator minus that in the
    /// denominator.
    pub fn vp(&self, p: Prime) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        Valuation::Finite(int_vp(self.numer(), p) as i64 - int_vp(self.denom(), p) as i64)
    }

    /// True when the denominator is prime to `p`.
    pub fn is_p_integral(&self, p: Prime) -> bool {
        !self.denom().is_multiple_of(&p.big())
    }

    /// A unit of Z_(p): p-integral with valuation zero.
    pub fn is_p_unit(&self, p: Prime) -> bool {
        self.vp(p) == Valuation::Finite(0)
    }

    /// Splits a nonzero value as `p^v * u` with `u` a p-adic unit.
    pub fn split_p_power(&self, p: Prime) -> Option<(i64, PLocal)> {
        let v = self.vp(p).finite()?;
        let scale = PLocal::from_int(p.pow(v.unsigned_abs() as u32));
        let unit = if v >= 0 { self / &scale } else { self * &scale };
        Some((v, unit))
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }
}

impl Default for PLocal {
    fn default() -> Self {
        PLocal::zero()
    }
}

impl From<i64> for PLocal {
    fn from(n: i64) -> Self {
        PLocal::from_int(n)
    }
}

impl From<BigInt> for PLocal {
    fn from(n: BigInt) -> Self {
        PLocal::from_int(n)
    }
}

impl From<BigRational> for PLocal {
    fn from(q: BigRational) -> Self {
        PLocal(q)
    }
}

impl fmt::Display for PLocal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl std::str::FromStr for PLocal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let s = s.trim();
        match s.split_once('/') {
            Some((a, b)) => {
                let num: BigInt = a.trim().parse().map_err(|_| bad())?;
                let den: BigInt = b.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(PLocal::new(num, den))
            }
            None => Ok(PLocal::from_int(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&PLocal> for &PLocal {
            type Output = PLocal;
            fn $method(self, rhs: &PLocal) -> PLocal {
                PLocal((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<PLocal> for PLocal {
            type Output = PLocal;
            fn $method(self, rhs: PLocal) -> PLocal {
                PLocal(self.0.$method(rhs.0))
            }
        }
        impl $trait<&PLocal> for PLocal {
            type Output = PLocal;
            fn $method(self, rhs: &PLocal) -> PLocal {
                PLocal(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division by zero panics, as for the underlying rationals; fallible
// division goes through `PContext::arith` or `recip`.
forward_binop!(Div, div);

impl AddAssign<&PLocal> for PLocal {
    fn add_assign(&mut self, rhs: &PLocal) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&PLocal> for PLocal {
    fn sub_assign(&mut self, rhs: &PLocal) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&PLocal> for PLocal {
    fn mul_assign(&mut self, rhs: &PLocal) {
        self.0 *= &rhs.0;
    }
}

impl Neg for PLocal {
    type Output = PLocal;
    fn neg(self) -> PLocal {
        PLocal(-self.0)
    }
}

impl Neg for &PLocal {
    type Output = PLocal;
    fn neg(self) -> PLocal {
        PLocal(-&self.0)
    }
}

/// Prime plus integrality mode; the checked entry point for scalar
/// arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PContext {
    pub p: Prime,
    pub mode: Mode,
}

impl PContext {
    pub fn strict(p: Prime) -> Self {
        PContext { p, mode: Mode::Strict }
    }

    pub fn fraction_field(p: Prime) -> Self {
        PContext { p, mode: Mode::FractionField }
    }

    pub fn arith(&self, a: &PLocal, b: &PLocal, op: ArithOp) -> Result<PLocal> {
        let r = match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => {
                if b.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                a / b
            }
        };
        self.check(r)
    }

    /// Passes `value` through unless strict mode forbids its denominator.
    pub fn check(&self, value: PLocal) -> Result<PLocal> {
        if self.mode == Mode::Strict && !value.is_p_integral(self.p) {
            return Err(Error::NonPLocalResult { value: value.to_string(), p: self.p.get() });
        }
        Ok(value)
    }
}

/// Exponent of `p` in a nonzero integer (0 for zero, by convention of the
/// callers, which handle zero separately).
pub fn int_vp(n: &BigInt, p: Prime) -> u64 {
    if n.is_zero() {
        return 0;
    }
    let pb = p.big();
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

pub fn vp(a: &PLocal, p: Prime) -> Valuation {
    a.vp(p)
}

/// Binomial coefficient; zero outside `0 <= k <= n`.
pub fn binom(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn binom_int(n: u64, k: i64) -> BigInt {
    BigInt::from(binom(n, k))
}

/// `v_p(C(n, k))` by Kummer's theorem: the number of carries when adding
/// `k` and `n - k` in base `p`.
pub fn vp_binom(n: u64, k: u64, p: Prime) -> Valuation {
    if k > n {
        return Valuation::Infinite;
    }
    let p = p.get();
    let (mut a, mut b) = (k, n - k);
    let mut carry = 0;
    let mut carries = 0;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = u64::from(s >= p);
        carries += carry;
        a /= p;
        b /= p;
    }
    Valuation::Finite(carries as i64)
}

/// `v_p(n!)` by Legendre's formula.
pub fn vp_factorial(n: u64, p: Prime) -> u64 {
    let p = p.get();
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// `v_p(C(n, k))` from Legendre's formula.
pub fn vp_binom_legendre(n: u64, k: u64, p: Prime) -> Valuation {
    if k > n {
        return Valuation::Infinite;
    }
    let v = vp_factorial(n, p) - vp_factorial(k, p) - vp_factorial(n - k, p);
    Valuation::Finite(v as i64)
}

/// Compares two valuations of p-integral elements, for callers that want a
/// divisibility test in Z_(p).
pub fn divides_in_zp(a: &PLocal, b: &PLocal, p: Prime) -> bool {
    match (a.vp(p), b.vp(p)) {
        (Valuation::Infinite, bv) => bv.is_infinite(),
        (av, bv) => av.cmp(&bv) != Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> PLocal {
        PLocal::new(n, d)
    }

    #[test]
    fn add_in_lowest_terms() {
        let ctx = PContext::strict(Prime::TWO);
        assert_eq!(ctx.arith(&q(3, 5), &q(1, 5), ArithOp::Add).unwrap(), q(4, 5));
    }

    #[test]
    fn strict_division_by_p_fails() {
        let ctx = PContext::strict(Prime::TWO);
        let err = ctx.arith(&q(1, 1), &q(2, 1), ArithOp::Div).unwrap_err();
        assert!(matches!(err, Error::NonPLocalResult { p: 2, .. }));
    }

    #[test]
    fn fraction_field_division() {
        let ctx = PContext::fraction_field(Prime::TWO);
        let r = ctx.arith(&q(-26, 1), &q(-14, 1), ArithOp::Div).unwrap();
        assert_eq!(r, q(13, 7));
        assert_eq!(r.numer(), &BigInt::from(13));
        assert_eq!(r.denom(), &BigInt::from(7));
    }

    #[test]
    fn division_by_zero() {
        let ctx = PContext::fraction_field(Prime::THREE);
        assert_eq!(ctx.arith(&q(1, 1), &PLocal::zero(), ArithOp::Div), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_is_canonical() {
        let z = q(0, 7);
        assert_eq!(z.numer(), &BigInt::zero());
        assert_eq!(z.denom(), &BigInt::one());
        assert_eq!(z, PLocal::zero());
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&q(12, 1), Prime::TWO), Valuation::Finite(2));
        assert_eq!(vp(&PLocal::zero(), Prime::TWO), Valuation::Infinite);
        assert_eq!(vp(&q(13, 7), Prime::TWO), Valuation::Finite(0));
        assert_eq!(vp(&q(1, 4), Prime::TWO), Valuation::Finite(-2));
        assert!(Valuation::Finite(1_000) < Valuation::Infinite);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), BigUint::from(6u32));
        assert_eq!(binom(5, 7), BigUint::zero());
        assert_eq!(binom(5, -1), BigUint::zero());
        let c = binom_int(702, 9);
        assert_eq!(int_vp(&c, Prime::TWO), 1);
        assert_eq!(vp_binom_legendre(702, 9, Prime::TWO), Valuation::Finite(1));
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(vp_binom(4, 3, Prime::TWO), Valuation::Finite(2));
        assert_eq!(vp_binom(9, 4, Prime::THREE), Valuation::Finite(2));
        assert_eq!(vp_binom(6, 2, Prime::TWO), Valuation::Finite(0));
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(9).is_err());
        assert_eq!(Prime::new(5).unwrap().get(), 5);
    }

    #[test]
    fn split_p_power() {
        let (v, u) = q(-24, 5).split_p_power(Prime::TWO).unwrap();
        assert_eq!(v, 3);
        assert_eq!(u, q(-3, 5));
        let (v, u) = q(3, 4).split_p_power(Prime::TWO).unwrap();
        assert_eq!(v, -2);
        assert_eq!(u, q(3, 1));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!("13/7".parse::<PLocal>().unwrap(), q(13, 7));
        assert_eq!("-4".parse::<PLocal>().unwrap(), q(-4, 1));
        assert!("1/0".parse::<PLocal>().is_err());
        assert!("x".parse::<PLocal>().is_err());
    }
}
