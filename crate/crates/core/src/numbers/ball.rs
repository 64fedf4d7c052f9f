//! Complex ball arithmetic: a center with dyadic real/imaginary parts and
//! a radius that is a certified bound on the distance to the true value.
//!
//! Every operation takes an explicit working precision.  Centers are
//! truncated to that many bits and the truncation error is folded into the
//! radius, so enclosures remain valid after rounding.  Radii are kept short
//! (32-bit mantissas) and always rounded upward.

use super::bigfloat::BigFloat;
use num_rational::BigRational;
use std::fmt;

const RADIUS_BITS: u32 = 32;

/// Closed disc `{ z : |z - (re + i*im)| <= rad }`.
#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    pub re: BigFloat,
    pub im: BigFloat,
    pub rad: BigFloat,
}

/// Round a (nonnegative) radius up to a short mantissa.
fn rad_up(r: &BigFloat) -> BigFloat {
    debug_assert!(!r.is_negative());
    let (t, err) = r.truncated(RADIUS_BITS);
    t.add(&err)
}

impl Ball {
    pub fn zero() -> Self {
        Ball { re: BigFloat::zero(), im: BigFloat::zero(), rad: BigFloat::zero() }
    }

    pub fn one() -> Self {
        Ball { re: BigFloat::one(), im: BigFloat::zero(), rad: BigFloat::zero() }
    }

    pub fn exact_int(n: i64) -> Self {
        Ball { re: BigFloat::from_i64(n), im: BigFloat::zero(), rad: BigFloat::zero() }
    }

    pub fn from_parts(re: BigFloat, im: BigFloat, rad: BigFloat) -> Self {
        debug_assert!(!rad.is_negative());
        Ball { re, im, rad }
    }

    /// Enclose a real rational at `prec` bits (exact when dyadic).
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let (re, err) = BigFloat::from_rational(q, prec);
        Ball { re, im: BigFloat::zero(), rad: rad_up(&err) }
    }

    /// Enclose a complex rational point at `prec` bits.
    pub fn from_rational_pair(re: &BigRational, im: &BigRational, prec: u32) -> Self {
        let (r, er) = BigFloat::from_rational(re, prec);
        let (i, ei) = BigFloat::from_rational(im, prec);
        Ball { re: r, im: i, rad: rad_up(&er.add(&ei)) }
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// The center as a radius-zero ball.
    pub fn mid(&self) -> Self {
        Ball { re: self.re.clone(), im: self.im.clone(), rad: BigFloat::zero() }
    }

    /// Upper bound for `|z|` over the ball (within a factor sqrt(2)).
    pub fn ub(&self) -> BigFloat {
        rad_up(&self.re.abs().add(&self.im.abs()).add(&self.rad))
    }

    /// Certified lower bound for `|z|` over the ball (0 when inconclusive).
    pub fn lb(&self) -> BigFloat {
        let l = self.re.abs().max_val(&self.im.abs()).sub(&self.rad);
        if l.is_negative() {
            BigFloat::zero()
        } else {
            // Round down: truncation toward zero of a nonnegative value.
            l.truncated(RADIUS_BITS).0
        }
    }

    /// True when the ball provably does not contain 0.
    pub fn excludes_zero(&self) -> bool {
        self.re.abs().max_val(&self.im.abs()).cmp_val(&self.rad) == std::cmp::Ordering::Greater
    }

    /// True when the ball provably does contain 0.
    pub fn definitely_contains_zero(&self) -> bool {
        self.re.abs().add(&self.im.abs()).le(&self.rad)
    }

    /// `other` is provably a subset of `self`.
    pub fn contains_ball(&self, other: &Self) -> bool {
        let d = other.re.sub(&self.re).abs().add(&other.im.sub(&self.im).abs());
        d.add(&other.rad).le(&self.rad)
    }

    /// `other` is a subset of the interior of `self`.
    pub fn contains_ball_strictly(&self, other: &Self) -> bool {
        let d = other.re.sub(&self.re).abs().add(&other.im.sub(&self.im).abs());
        d.add(&other.rad).lt(&self.rad)
    }

    /// Grow the radius to at least `r`.
    pub fn inflated_to(&self, r: &BigFloat) -> Self {
        Ball { re: self.re.clone(), im: self.im.clone(), rad: self.rad.max_val(r) }
    }

    fn rounded(re: BigFloat, im: BigFloat, rad: BigFloat, prec: u32) -> Self {
        let (re, er) = re.truncated(prec);
        let (im, ei) = im.truncated(prec);
        Ball { re, im, rad: rad_up(&rad.add(&er).add(&ei)) }
    }

    pub fn neg(&self) -> Self {
        Ball { re: self.re.neg(), im: self.im.neg(), rad: self.rad.clone() }
    }

    pub fn conj(&self) -> Self {
        Ball { re: self.re.clone(), im: self.im.neg(), rad: self.rad.clone() }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        Self::rounded(
            self.re.add(&other.re),
            self.im.add(&other.im),
            self.rad.add(&other.rad),
            prec,
        )
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        // |z*w - c_z*c_w| <= |c_z| r_w + |c_w| r_z + r_z r_w
        let ua = self.re.abs().add(&self.im.abs());
        let ub = other.re.abs().add(&other.im.abs());
        let rad = ua
            .mul(&other.rad)
            .add(&ub.mul(&self.rad))
            .add(&self.rad.mul(&other.rad));
        Self::rounded(re, im, rad, prec)
    }

    /// Multiply by an exact rational scalar.
    pub fn scale_rational(&self, q: &BigRational, prec: u32) -> Self {
        self.mul(&Ball::from_rational(q, prec + 8), prec)
    }

    /// Reciprocal.  `None` when the ball cannot be certified nonzero.
    pub fn recip(&self, prec: u32) -> Option<Self> {
        let low = self.re.abs().max_val(&self.im.abs());
        if low.cmp_val(&self.rad) != std::cmp::Ordering::Greater {
            return None;
        }
        let den = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let (re, er) = self.re.div_round(&den, prec);
        let (im, ei) = self.im.neg().div_round(&den, prec);
        // |1/z - 1/c| <= r / (|c| (|c| - r)) with |c| >= low.
        let gap = low.sub(&self.rad);
        let (extra, ee) = self.rad.div_round(&low.mul(&gap), RADIUS_BITS);
        let rad = rad_up(&extra.add(&ee).add(&er).add(&ei));
        Some(Ball { re, im, rad })
    }

    /// Quotient.  `None` when the divisor cannot be certified nonzero.
    pub fn div(&self, other: &Self, prec: u32) -> Option<Self> {
        Some(self.mul(&other.recip(prec + 8)?, prec))
    }

    /// Integer power by repeated squaring; negative exponents reciprocate.
    pub fn powi(&self, k: i64, prec: u32) -> Option<Self> {
        if k < 0 {
            return self.recip(prec + 8)?.powi(-k, prec);
        }
        let mut acc = Ball::one();
        let mut base = self.clone();
        let mut k = k as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, prec + 8);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, prec + 8);
            }
        }
        Some(Self::rounded(acc.re, acc.im, acc.rad, prec))
    }

    /// Approximate center for display/seeding only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal rendering of the center (real-only balls drop the imaginary
    /// part).
    pub fn center_string(&self, sig: usize) -> String {
        if self.im.is_zero() {
            self.re.to_decimal_string(sig)
        } else {
            let im = self.im.to_decimal_string(sig);
            let sign = if self.im.is_negative() { "" } else { "+" };
            format!("{}{}{}i", self.re.to_decimal_string(sig), sign, im)
        }
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ball({} +/- {})", self.center_string(8), self.rad.to_decimal_string(3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Signed};

    fn third() -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(3))
    }

    #[test]
    fn rational_enclosure_contains_value() {
        let b = Ball::from_rational(&third(), 128);
        assert!(!b.is_exact());
        let err = (b.re.to_rational() - third()).abs();
        assert!(err <= b.rad.to_rational());
        assert!(b.rad.le(&BigFloat::pow2(-120)));
    }

    #[test]
    fn exact_integers_stay_exact() {
        let a = Ball::exact_int(7);
        let b = Ball::exact_int(-3);
        let s = a.add(&b, 64);
        let p = a.mul(&b, 64);
        assert!(s.is_exact() && p.is_exact());
        assert_eq!(s.re, BigFloat::from_i64(4));
        assert_eq!(p.re, BigFloat::from_i64(-21));
    }

    #[test]
    fn product_enclosure_is_sound() {
        // (1/3 + small error) squared must contain 1/9.
        let b = Ball::from_rational(&third(), 96);
        let sq = b.mul(&b, 96);
        let exact = third() * third();
        let err = (sq.re.to_rational() - exact).abs();
        assert!(err <= sq.rad.to_rational());
    }

    #[test]
    fn reciprocal_encloses_inverse() {
        let b = Ball::from_rational(&third(), 128);
        let r = b.recip(128).expect("1/3 is certifiably nonzero");
        let err = (r.re.to_rational() - BigRational::from_integer(BigInt::from(3))).abs();
        assert!(err <= r.rad.to_rational());
        // A ball straddling zero has no certified reciprocal.
        let z = Ball::from_parts(BigFloat::zero(), BigFloat::zero(), BigFloat::one());
        assert!(z.recip(64).is_none());
    }

    #[test]
    fn zero_tests_are_one_sided() {
        let z = Ball::from_parts(BigFloat::pow2(-80), BigFloat::zero(), BigFloat::pow2(-10));
        assert!(!z.excludes_zero());
        assert!(z.definitely_contains_zero());
        let nz = Ball::exact_int(2).inflated_to(&BigFloat::pow2(-3));
        assert!(nz.excludes_zero());
        assert!(!nz.definitely_contains_zero());
    }

    #[test]
    fn powers_match_exact_rationals() {
        let b = Ball::from_rational(&third(), 160);
        let p = b.powi(5, 160).unwrap();
        let exact = third().pow(5);
        let err = (p.re.to_rational() - exact).abs();
        assert!(err <= p.rad.to_rational());
        let inv = b.powi(-2, 160).unwrap();
        let exact = BigRational::from_integer(BigInt::from(9));
        let err = (inv.re.to_rational() - exact).abs();
        assert!(err <= inv.rad.to_rational());
        assert!(BigRational::one() <= inv.rad.to_rational().recip());
    }

    #[test]
    fn containment_check() {
        let big = Ball::from_parts(BigFloat::zero(), BigFloat::zero(), BigFloat::one());
        let small = Ball::from_parts(BigFloat::pow2(-2), BigFloat::pow2(-2), BigFloat::pow2(-3));
        assert!(big.contains_ball(&small));
        assert!(big.contains_ball_strictly(&small));
        assert!(!small.contains_ball(&big));
    }
}
