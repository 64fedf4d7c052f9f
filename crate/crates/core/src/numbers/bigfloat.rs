//! Dyadic floating-point numbers `mantissa * 2^exp` with exact addition,
//! subtraction and multiplication, and explicitly rounded division.
//!
//! Rounding never happens implicitly: callers either keep results exact or
//! call [`BigFloat::truncated`] / [`BigFloat::div_round`], both of which
//! return a bound on the rounding error.  Ball arithmetic feeds those error
//! bounds into radii, so every rounded center stays certified.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// `mant * 2^exp`.  Zero is canonically `{mant: 0, exp: 0}`; nonzero
/// mantissas carry no trailing zero bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        BigFloat { mant: BigInt::from(1), exp: 0 }
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        BigFloat { mant: BigInt::from(1), exp: k }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::new(n, 0)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::new(BigInt::from(n), 0)
    }

    /// Exact conversion; every finite `f64` is dyadic.  Panics on NaN/inf.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 needs a finite value");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1 } else { -1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Self::new(BigInt::from(sign) * BigInt::from(mant), exp)
    }

    /// Normalizing constructor: strips trailing zero bits.
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            BigFloat { mant: mant >> tz, exp: exp + tz as i64 }
        } else {
            BigFloat { mant, exp }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Bit length of the mantissa (0 for zero).
    pub fn mant_bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Position of the most significant bit: magnitude lies in
    /// `[2^(msb-1), 2^msb)`.  Meaningless for zero.
    fn msb(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }

    /// Exact sum.
    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp { (self, other) } else { (other, self) };
        let shift = (hi.exp - lo.exp) as u64;
        Self::new((hi.mant.clone() << shift) + &lo.mant, lo.exp)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Exact product by `2^k`.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round the mantissa to at most `prec` bits, toward zero.  Returns the
    /// rounded value and an upper bound on the absolute error.
    pub fn truncated(&self, prec: u32) -> (Self, Self) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), Self::zero());
        }
        let shift = bits - prec as u64;
        let (sign, mag) = (self.mant.sign(), self.mant.magnitude().clone());
        let kept: BigInt = BigInt::from(mag >> shift);
        let kept = if sign == Sign::Minus { -kept } else { kept };
        let rounded = Self::new(kept, self.exp + shift as i64);
        // Discarded bits are below one ulp of the rounded value.
        (rounded, Self::pow2(self.exp + shift as i64))
    }

    /// Truncated quotient at `prec` significant bits, with an error bound.
    /// `other` must be nonzero.
    pub fn div_round(&self, other: &Self, prec: u32) -> (Self, Self) {
        assert!(!other.is_zero(), "BigFloat division by zero");
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let la = self.mant.bits() as i64;
        let lb = other.mant.bits() as i64;
        let shift = (prec as i64 + 1 + lb - la).max(0) as u64;
        let num: BigInt = self.mant.clone() << shift;
        let (q, r) = num_integer::Integer::div_rem(&num, &other.mant);
        let exp = self.exp - other.exp - shift as i64;
        let err = if r.is_zero() { Self::zero() } else { Self::pow2(exp) };
        (Self::new(q, exp), err)
    }

    /// Convert an exact rational; the error bound is zero when the
    /// denominator is a power of two.
    pub fn from_rational(q: &BigRational, prec: u32) -> (Self, Self) {
        let denom = q.denom();
        let tz = denom.trailing_zeros().unwrap_or(0);
        if (denom >> tz).bits() == 1 {
            // denom == 2^tz: exactly representable.
            return (Self::new(q.numer().clone(), -(tz as i64)), Self::zero());
        }
        Self::from_bigint(q.numer().clone()).div_round(&Self::from_bigint(denom.clone()), prec)
    }

    /// Exact conversion back to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(self.mant.clone() << self.exp)
        } else {
            BigRational::new(self.mant.clone(), BigInt::from(1) << (-self.exp) as u64)
        }
    }

    /// Exact comparison.
    pub fn cmp_val(&self, other: &Self) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        let by_sign = match (sa, sb) {
            (Sign::Minus, Sign::Minus) => None,
            (Sign::Plus, Sign::Plus) => None,
            _ => Some(sign_rank(sa).cmp(&sign_rank(sb))),
        };
        if let Some(ord) = by_sign {
            return ord;
        }
        if self.is_zero() {
            return Ordering::Equal; // both zero
        }
        // Same nonzero sign: compare magnitudes via msb first.
        let flip = sa == Sign::Minus;
        let ord = match self.msb().cmp(&other.msb()) {
            Ordering::Equal => {
                let diff = self.sub(other);
                sign_rank(diff.mant.sign()).cmp(&0)
            }
            o => o,
        };
        if flip {
            ord.reverse()
        } else {
            ord
        }
    }

    /// `self <= other`, exact.
    pub fn le(&self, other: &Self) -> bool {
        self.cmp_val(other) != Ordering::Greater
    }

    /// `self < other`, exact.
    pub fn lt(&self, other: &Self) -> bool {
        self.cmp_val(other) == Ordering::Less
    }

    pub fn max_val(&self, other: &Self) -> Self {
        if self.cmp_val(other) == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        }
    }

    /// Approximate conversion for display and seeding only.  Saturates to
    /// +/- infinity outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Reduce the mantissa to at most 53 bits first so it converts
        // exactly, then apply the exponent in two halves so intermediate
        // scales stay finite for every representable result.
        let (r, _) = self.truncated(53);
        let m = r.mant.to_f64().unwrap_or(if r.mant.is_negative() { f64::MIN } else { f64::MAX });
        let e = r.exp.clamp(-4400, 4400);
        let e1 = (e / 2) as i32;
        let e2 = (e - e / 2) as i32;
        m * 2f64.powi(e1) * 2f64.powi(e2)
    }

    /// Decimal rendering with `sig` significant digits, scientific form.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        // dec_exp ~ floor(log10 |x|)
        let msb = self.msb();
        let mut dec_exp = ((msb as f64 - 0.5) * std::f64::consts::LOG10_2).floor() as i64;
        // digits = round(|x| * 10^(sig-1-dec_exp)), retry if the estimate of
        // dec_exp was off by one.
        loop {
            let k = sig as i64 - 1 - dec_exp;
            let mag = self.mant.magnitude();
            let mut num: BigInt = BigInt::from(mag.clone());
            let mut den: BigInt = BigInt::from(1);
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            if k >= 0 {
                num *= BigInt::from(10u32).pow(k as u32);
            } else {
                den *= BigInt::from(10u32).pow((-k) as u32);
            }
            // Round to nearest.
            let digits: BigInt = (num * 2 + &den) / (den * 2);
            let s = digits.to_string();
            if s.len() > sig {
                dec_exp += s.len() as i64 - sig as i64;
                continue;
            }
            if s.len() < sig || s == "0" {
                dec_exp -= 1;
                if dec_exp < msb - (3 + sig as i64 * 4) {
                    return "0".to_string();
                }
                continue;
            }
            let neg = if self.is_negative() { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() {
                format!("{neg}{head}e{dec_exp}")
            } else {
                format!("{neg}{head}.{tail}e{dec_exp}")
            };
        }
    }
}

fn sign_rank(s: Sign) -> i32 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({})", self.to_decimal_string(10))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(17))
    }
}
