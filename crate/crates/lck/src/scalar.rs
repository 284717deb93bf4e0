//! Scalar backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rat`] (arbitrary-precision rationals, the default — results are
//! exact and comparisons are literal) and [`Flt`] (f64 with a process-wide
//! comparison tolerance, for inputs that need square roots).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

static FLOAT_TOL_BITS: AtomicU64 = AtomicU64::new(f64::to_bits(1e-9));

/// Comparison tolerance used by the [`Flt`] backend (default `1e-9`).
pub fn float_tolerance() -> f64 {
    f64::from_bits(FLOAT_TOL_BITS.load(Ordering::Relaxed))
}

/// Override the [`Flt`] comparison tolerance process-wide.
pub fn set_float_tolerance(tol: f64) {
    FLOAT_TOL_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

/// Field of coefficients. `scalar_eq`/`is_zero` are the comparisons every
/// algorithm uses, so the float backend can widen them by a tolerance while
/// the exact backend keeps them literal.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is exact and comparisons are literal.
    const EXACT: bool;
    /// Backend name used in reports ("exact" | "float").
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// `num / den`; panics if `den == 0`.
    fn from_fraction(num: i64, den: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    /// Exact rational value of this scalar. Total for both backends: every
    /// finite f64 is a dyadic rational. Panics on non-finite floats.
    fn to_rational(&self) -> BigRational;
    fn is_zero(&self) -> bool;
    fn scalar_eq(&self, other: &Self) -> bool;
    /// Strictly positive (beyond tolerance for the float backend).
    fn is_positive(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Square root when the backend can represent it: exact backend succeeds
    /// only on squares of rationals, float backend on any nonnegative value.
    fn sqrt(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        self.scalar_eq(&Self::one())
    }
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Exact rational scalar.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(r: BigRational) -> Self {
        Rat(r)
    }
    pub fn rational(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}
rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

/// Floor square root check: `n` must be a perfect square.
fn bigint_exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl Scalar for Rat {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_fraction(num: i64, den: i64) -> Self {
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn from_rational(r: &BigRational) -> Self {
        Rat(r.clone())
    }
    fn to_rational(&self) -> BigRational {
        self.0.clone()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn scalar_eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
    fn abs(&self) -> Self {
        Rat(self.0.abs())
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
    fn sqrt(&self) -> Option<Self> {
        let num = bigint_exact_sqrt(self.0.numer())?;
        let den = bigint_exact_sqrt(self.0.denom())?;
        Some(Rat(BigRational::new(num, den)))
    }
}

/// Float scalar with tolerance comparisons. Equality is `|a - b| <= tol`,
/// which is deliberately not transitive; it mirrors how the numbers are used.
#[derive(Clone, Copy, Debug)]
pub struct Flt(pub f64);

impl fmt::Display for Flt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for Flt {
    fn eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= float_tolerance()
    }
}

macro_rules! flt_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Flt {
            type Output = Flt;
            fn $method(self, rhs: Flt) -> Flt {
                Flt(self.0 $op rhs.0)
            }
        }
    };
}
flt_binop!(Add, add, +);
flt_binop!(Sub, sub, -);
flt_binop!(Mul, mul, *);
flt_binop!(Div, div, /);

impl Neg for Flt {
    type Output = Flt;
    fn neg(self) -> Flt {
        Flt(-self.0)
    }
}

impl Scalar for Flt {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn zero() -> Self {
        Flt(0.0)
    }
    fn one() -> Self {
        Flt(1.0)
    }
    fn from_int(n: i64) -> Self {
        Flt(n as f64)
    }
    fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Flt(num as f64 / den as f64)
    }
    fn from_rational(r: &BigRational) -> Self {
        Flt(r.to_f64().unwrap_or(f64::NAN))
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_float(self.0).expect("non-finite float has no rational value")
    }
    fn is_zero(&self) -> bool {
        self.0.abs() <= float_tolerance()
    }
    fn scalar_eq(&self, other: &Self) -> bool {
        (self.0 - other.0).abs() <= float_tolerance()
    }
    fn is_positive(&self) -> bool {
        self.0 > float_tolerance()
    }
    fn abs(&self) -> Self {
        Flt(self.0.abs())
    }
    fn to_f64(&self) -> f64 {
        self.0
    }
    fn sqrt(&self) -> Option<Self> {
        if self.0 < -float_tolerance() {
            None
        } else {
            Some(Flt(self.0.max(0.0).sqrt()))
        }
    }
}

/// Parse a rational literal: optional sign, integer, or `p/q` with `q != 0`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = |reason: &str| Error::ParseRational {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(bad("empty string"));
    }
    let mut parts = s.splitn(2, '/');
    let num_str = parts.next().unwrap().trim();
    let num: BigInt = num_str
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    match parts.next() {
        None => Ok(BigRational::from_integer(num)),
        Some(den_str) => {
            let den: BigInt = den_str
                .trim()
                .parse()
                .map_err(|_| bad("denominator is not an integer"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Parse directly into a backend scalar.
pub fn parse_scalar<S: Scalar>(text: &str) -> Result<S> {
    Ok(S::from_rational(&parse_rational(text)?))
}

/// Canonical serialization: `p/q`, or `p` when the denominator is 1. Both
/// backends round-trip bit-exactly through this (floats are dyadic rationals).
pub fn render_scalar<S: Scalar>(x: &S) -> String {
    x.to_rational().to_string()
}

/// Best rational approximation to `x` with denominator at most `max_den`,
/// via continued-fraction convergents.
pub fn approximate_rational(x: f64, max_den: u64) -> BigRational {
    assert!(max_den >= 1);
    if !x.is_finite() {
        return BigRational::zero();
    }
    let negative = x < 0.0;
    let mut frac = x.abs();
    // Convergents h/k of the continued-fraction expansion.
    let (mut h0, mut h1) = (BigInt::from(1), BigInt::from(frac.floor() as i64));
    let (mut k0, mut k1) = (BigInt::from(0), BigInt::from(1));
    frac -= frac.floor();
    let bound = BigInt::from(max_den);
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        frac = 1.0 / frac;
        let a = frac.floor();
        if a >= 9e18 {
            break;
        }
        let a_big = BigInt::from(a as i64);
        let h2 = &a_big * &h1 + &h0;
        let k2 = &a_big * &k1 + &k0;
        if k2 > bound {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        frac -= a;
    }
    let mut r = BigRational::new(h1, k1);
    if negative {
        r = -r;
    }
    r
}
