//! Dual-precision scalars for local (affine-chart) computations.
//!
//! Classifying a singular point involves long chains of ring operations on
//! the coefficients of a truncated power series: translations, shears,
//! completing squares.  When the point has rational coordinates every
//! coefficient stays an exact [`BigRational`] and all zero tests are
//! decisions, not guesses.  When the point involves certified roots we carry
//! each coefficient as a *pair* of balls, one evaluated at the working
//! precision and one at twice the working precision.  A coefficient is
//! declared zero only when both enclosures are tiny (below `2^-p/2` resp.
//! `2^-p`), and declared nonzero as soon as either enclosure excludes zero.
//! Running the two precisions in lockstep means a flaky "zero" at precision
//! `p` gets a second chance to reveal itself at `2p` before we commit.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numbers::{eval_value, exact_rational, AlgebraicValue, Ball, BigFloat, NumError, ZeroStatus};
use crate::poly::Coef;

/// A coefficient in a local power-series computation: either an exact
/// rational or a pair of ball enclosures at precisions `p` and `2p`.
#[derive(Clone, Debug)]
pub enum LocalCoef {
    /// Exact rational value; all operations on two `Exact`s stay exact.
    Exact(BigRational),
    /// Certified enclosures of the same value at two precisions.
    Approx {
        /// Enclosure computed with working precision `prec`.
        lo: Ball,
        /// Enclosure computed with working precision `2 * prec`.
        hi: Ball,
        /// The base working precision in bits.
        prec: u32,
    },
}

impl LocalCoef {
    /// Builds a coefficient from a symbolic value, going exact when possible.
    pub fn from_value(v: &AlgebraicValue, prec: u32) -> Result<Self, NumError> {
        if let Some(q) = exact_rational(v) {
            return Ok(LocalCoef::Exact(q));
        }
        let lo = eval_value(v, prec)?;
        let hi = eval_value(v, 2 * prec)?;
        Ok(LocalCoef::Approx { lo, hi, prec })
    }

    /// Wraps an exact rational.
    pub fn from_rational(q: BigRational) -> Self {
        LocalCoef::Exact(q)
    }

    /// True if this is the exact-rational representation.
    pub fn is_exact(&self) -> bool {
        matches!(self, LocalCoef::Exact(_))
    }

    /// Working precision of the approximate lane, if any.
    fn approx_prec(&self) -> Option<u32> {
        match self {
            LocalCoef::Exact(_) => None,
            LocalCoef::Approx { prec, .. } => Some(*prec),
        }
    }

    /// Renders an exact value as a ball pair at the given precision.
    fn to_balls(&self, prec: u32) -> (Ball, Ball) {
        match self {
            LocalCoef::Exact(q) => (Ball::from_rational(q, prec), Ball::from_rational(q, 2 * prec)),
            LocalCoef::Approx { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// Decides the sign status of this coefficient.
    ///
    /// `NonZero` is certified (an enclosure excludes zero).  `Zero` is a
    /// heuristic for the approximate lane — both enclosures are smaller than
    /// their precision-dependent thresholds — but exact for the rational
    /// lane.  Anything else is `Undecided`.
    pub fn zero_status(&self) -> ZeroStatus {
        match self {
            LocalCoef::Exact(q) => {
                if q.is_zero() {
                    ZeroStatus::Zero
                } else {
                    ZeroStatus::NonZero
                }
            }
            LocalCoef::Approx { lo, hi, prec } => {
                if lo.excludes_zero() || hi.excludes_zero() {
                    return ZeroStatus::NonZero;
                }
                let tol_lo = BigFloat::pow2(-((*prec / 2) as i64));
                let tol_hi = BigFloat::pow2(-(*prec as i64));
                if lo.ub().lt(&tol_lo) && hi.ub().lt(&tol_hi) {
                    ZeroStatus::Zero
                } else {
                    ZeroStatus::Undecided
                }
            }
        }
    }

    /// A certified lower bound on the magnitude (zero for the undecidable).
    pub fn magnitude_lower_bound(&self) -> BigFloat {
        match self {
            LocalCoef::Exact(q) => Ball::from_rational(q, 64).lb(),
            LocalCoef::Approx { hi, .. } => hi.lb(),
        }
    }

    /// Applies a binary operation, staying exact when both sides are exact.
    fn binop(
        &self,
        other: &Self,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        ball: impl Fn(&Ball, &Ball, u32) -> Ball,
    ) -> Self {
        match (self, other) {
            (LocalCoef::Exact(a), LocalCoef::Exact(b)) => LocalCoef::Exact(exact(a, b)),
            _ => {
                let prec = match (self.approx_prec(), other.approx_prec()) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!("exact/exact handled above"),
                };
                let (alo, ahi) = self.to_balls(prec);
                let (blo, bhi) = other.to_balls(prec);
                LocalCoef::Approx {
                    lo: ball(&alo, &blo, prec),
                    hi: ball(&ahi, &bhi, 2 * prec),
                    prec,
                }
            }
        }
    }

    /// Division.  Fails when the divisor's status does not certify nonzero
    /// (ball division by a possibly-zero divisor is unsound).
    pub fn div(&self, other: &Self) -> Result<Self, NumError> {
        match (self, other) {
            (LocalCoef::Exact(a), LocalCoef::Exact(b)) => {
                if b.is_zero() {
                    Err(NumError::DivisionByZero)
                } else {
                    Ok(LocalCoef::Exact(a / b))
                }
            }
            _ => {
                let prec = match (self.approx_prec(), other.approx_prec()) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!(),
                };
                let (alo, ahi) = self.to_balls(prec);
                let (blo, bhi) = other.to_balls(prec);
                let lo = alo.div(&blo, prec).ok_or(NumError::PrecisionExhausted(prec))?;
                let hi = ahi.div(&bhi, 2 * prec).ok_or(NumError::PrecisionExhausted(2 * prec))?;
                Ok(LocalCoef::Approx { lo, hi, prec })
            }
        }
    }

    /// Best available enclosure (the high-precision lane) for reporting.
    pub fn enclosure(&self, prec: u32) -> Ball {
        match self {
            LocalCoef::Exact(q) => Ball::from_rational(q, prec),
            LocalCoef::Approx { hi, .. } => hi.clone(),
        }
    }

    /// Approximate `f64` value of the midpoint, for diagnostics only.
    pub fn approx_f64(&self) -> f64 {
        match self {
            LocalCoef::Exact(q) => Ball::from_rational(q, 64).to_f64_pair().0,
            LocalCoef::Approx { hi, .. } => hi.to_f64_pair().0,
        }
    }
}

impl Coef for LocalCoef {
    fn zero() -> Self {
        LocalCoef::Exact(<BigRational as Zero>::zero())
    }

    fn one() -> Self {
        LocalCoef::Exact(<BigRational as One>::one())
    }

    fn add(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a + b, |a, b, p| a.add(b, p))
    }

    fn sub(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a - b, |a, b, p| a.sub(b, p))
    }

    fn mul(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a * b, |a, b, p| a.mul(b, p))
    }

    fn neg(&self) -> Self {
        match self {
            LocalCoef::Exact(q) => LocalCoef::Exact(-q),
            LocalCoef::Approx { lo, hi, prec } => LocalCoef::Approx {
                lo: lo.neg(),
                hi: hi.neg(),
                prec: *prec,
            },
        }
    }

    /// Only the exact rational zero is dropped from polynomial term maps;
    /// approximate near-zeros must survive so later status checks see them.
    fn is_canonical_zero(&self) -> bool {
        matches!(self, LocalCoef::Exact(q) if q.is_zero())
    }
}
