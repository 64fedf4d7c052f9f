//! Algebraic numbers as evaluation recipes.
//!
//! A value is an exact rational, an isolated root of a monic rational
//! polynomial, or an arithmetic expression over other values.  Recipes are
//! immutable and cheap to share; evaluation produces a [`Ball`] at a caller
//! chosen precision, escalating the working precision internally when
//! cancellation eats accuracy.

use super::ball::Ball;
use super::bigfloat::BigFloat;
use super::roots::refine_root;
use super::{clamp_precision, NumError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// A root-isolating description: monic polynomial (ascending coefficients,
/// trailing 1), a complex rational seed, and an isolation radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSpec {
    pub coeffs: Vec<BigRational>,
    pub seed_re: BigRational,
    pub seed_im: BigRational,
    pub radius: BigRational,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl Op {
    fn symbol(self) -> &'static str {
        match self {
            Op::Add => "+",
            Op::Sub => "-",
            Op::Mul => "*",
            Op::Div => "/",
            Op::Pow => "pow",
        }
    }

    fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "+" => Op::Add,
            "-" => Op::Sub,
            "*" => Op::Mul,
            "/" => Op::Div,
            "pow" | "^" => Op::Pow,
            _ => return None,
        })
    }
}

/// An exact complex algebraic number, represented by its recipe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum AlgebraicValue {
    Rational(BigRational),
    RootOf(Arc<RootSpec>),
    Expr(Op, Arc<AlgebraicValue>, Arc<AlgebraicValue>),
}

impl AlgebraicValue {
    pub fn zero() -> Self {
        AlgebraicValue::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        AlgebraicValue::Rational(BigRational::one())
    }

    pub fn from_i64(n: i64) -> Self {
        AlgebraicValue::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        AlgebraicValue::Rational(q)
    }

    pub fn root_of(spec: RootSpec) -> Self {
        AlgebraicValue::RootOf(Arc::new(spec))
    }

    pub fn is_rational_zero(&self) -> bool {
        matches!(self, AlgebraicValue::Rational(q) if q.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            AlgebraicValue::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Sum; rational operands fold exactly instead of building a node.
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (AlgebraicValue::Rational(a), AlgebraicValue::Rational(b)) => {
                AlgebraicValue::Rational(a + b)
            }
            _ if self.is_rational_zero() => other.clone(),
            _ if other.is_rational_zero() => self.clone(),
            _ => AlgebraicValue::Expr(Op::Add, Arc::new(self.clone()), Arc::new(other.clone())),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (AlgebraicValue::Rational(a), AlgebraicValue::Rational(b)) => {
                AlgebraicValue::Rational(a - b)
            }
            _ if other.is_rational_zero() => self.clone(),
            _ => AlgebraicValue::Expr(Op::Sub, Arc::new(self.clone()), Arc::new(other.clone())),
        }
    }

    pub fn neg(&self) -> Self {
        AlgebraicValue::zero().sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (AlgebraicValue::Rational(a), AlgebraicValue::Rational(b)) => {
                AlgebraicValue::Rational(a * b)
            }
            _ if self.is_rational_zero() || other.is_rational_zero() => AlgebraicValue::zero(),
            _ if matches!(self, AlgebraicValue::Rational(q) if q.is_one()) => other.clone(),
            _ if matches!(other, AlgebraicValue::Rational(q) if q.is_one()) => self.clone(),
            _ => AlgebraicValue::Expr(Op::Mul, Arc::new(self.clone()), Arc::new(other.clone())),
        }
    }

    /// Quotient; `Err` when the divisor is the literal rational zero.
    pub fn div(&self, other: &Self) -> Result<Self, NumError> {
        if other.is_rational_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(match (self, other) {
            (AlgebraicValue::Rational(a), AlgebraicValue::Rational(b)) => {
                AlgebraicValue::Rational(a / b)
            }
            _ if self.is_rational_zero() => AlgebraicValue::zero(),
            _ if matches!(other, AlgebraicValue::Rational(q) if q.is_one()) => self.clone(),
            _ => AlgebraicValue::Expr(Op::Div, Arc::new(self.clone()), Arc::new(other.clone())),
        })
    }

    /// Integer power; `Err` for a negative power of literal zero.
    pub fn pow(&self, k: i64) -> Result<Self, NumError> {
        if self.is_rational_zero() && k < 0 {
            return Err(NumError::DivisionByZero);
        }
        Ok(match self {
            AlgebraicValue::Rational(q) => {
                let p = q.pow(k.unsigned_abs() as u32 as i32);
                AlgebraicValue::Rational(if k < 0 { p.recip() } else { p })
            }
            _ if k == 0 => AlgebraicValue::one(),
            _ if k == 1 => self.clone(),
            _ => AlgebraicValue::Expr(
                Op::Pow,
                Arc::new(self.clone()),
                Arc::new(AlgebraicValue::from_i64(k)),
            ),
        })
    }

    /// Approximate complex value for seeding/display only.
    pub fn approx_f64(&self) -> (f64, f64) {
        match eval_value(self, 64) {
            Ok(b) => b.to_f64_pair(),
            Err(_) => (f64::NAN, f64::NAN),
        }
    }
}

impl fmt::Debug for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicValue::Rational(q) => write!(f, "{q}"),
            AlgebraicValue::RootOf(s) => {
                write!(f, "root_of(deg {}, seed {},{})", s.coeffs.len() - 1, s.seed_re, s.seed_im)
            }
            AlgebraicValue::Expr(op, a, b) => write!(f, "({a:?} {} {b:?})", op.symbol()),
        }
    }
}

/// Fold a recipe to an exact rational when every node is rational
/// arithmetic; `None` as soon as a root or an invalid fold appears.
pub fn exact_rational(v: &AlgebraicValue) -> Option<BigRational> {
    match v {
        AlgebraicValue::Rational(q) => Some(q.clone()),
        AlgebraicValue::RootOf(_) => None,
        AlgebraicValue::Expr(op, a, b) => {
            let a = exact_rational(a)?;
            let b = exact_rational(b)?;
            Some(match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
                Op::Div => {
                    if b.is_zero() {
                        return None;
                    }
                    a / b
                }
                Op::Pow => {
                    let k = rational_integer(&b)?;
                    if a.is_zero() && k < 0 {
                        return None;
                    }
                    let p = a.pow(k.unsigned_abs() as u32 as i32);
                    if k < 0 {
                        p.recip()
                    } else {
                        p
                    }
                }
            })
        }
    }
}

fn rational_integer(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Evaluation

static ROOT_CACHE: OnceLock<Mutex<HashMap<(RootSpec, u32), Ball>>> = OnceLock::new();

fn cached_refine(spec: &RootSpec, prec: u32) -> Result<Ball, NumError> {
    let cache = ROOT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&(spec.clone(), prec)) {
        return Ok(b.clone());
    }
    let b = refine_root(&spec.coeffs, &spec.seed_re, &spec.seed_im, &spec.radius, prec)?;
    cache.lock().unwrap().insert((spec.clone(), prec), b.clone());
    Ok(b)
}

// Shared subtrees make recipes DAGs, not trees: the vectors produced by
// linear algebra over values reuse every intermediate node many times.
// Memoizing per (node address, working precision) keeps evaluation linear
// in the DAG size instead of exponential in its depth.  The cache holds a
// strong reference to each key's node so an address cannot be recycled
// while its entry is alive.
thread_local! {
    static NODE_CACHE: std::cell::RefCell<HashMap<(usize, u32), (Arc<AlgebraicValue>, Ball)>> =
        std::cell::RefCell::new(HashMap::new());
}

/// Entry cap for the per-thread node cache; on overflow it is dropped
/// wholesale and rebuilt by subsequent evaluations.
const NODE_CACHE_CAP: usize = 1 << 18;

fn eval_node(v: &Arc<AlgebraicValue>, work: u32) -> Result<Ball, NumError> {
    if matches!(**v, AlgebraicValue::Rational(_)) {
        return eval_at(v, work);
    }
    let key = (Arc::as_ptr(v) as usize, work);
    if let Some(b) = NODE_CACHE.with(|c| c.borrow().get(&key).map(|(_, b)| b.clone())) {
        return Ok(b);
    }
    let b = eval_at(v, work)?;
    NODE_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= NODE_CACHE_CAP {
            c.clear();
        }
        c.insert(key, (Arc::clone(v), b.clone()));
    });
    Ok(b)
}

/// Bottom-up ball evaluation at one working precision.  Division by a ball
/// that straddles zero surfaces as `PrecisionExhausted` so the caller can
/// escalate.
fn eval_at(v: &AlgebraicValue, work: u32) -> Result<Ball, NumError> {
    match v {
        AlgebraicValue::Rational(q) => Ok(Ball::from_rational(q, work)),
        AlgebraicValue::RootOf(spec) => cached_refine(spec, work),
        AlgebraicValue::Expr(op, a, b) => {
            let x = eval_node(a, work)?;
            match op {
                Op::Add => Ok(x.add(&eval_node(b, work)?, work)),
                Op::Sub => Ok(x.sub(&eval_node(b, work)?, work)),
                Op::Mul => Ok(x.mul(&eval_node(b, work)?, work)),
                Op::Div => {
                    let y = eval_node(b, work)?;
                    match x.div(&y, work) {
                        Some(r) => Ok(r),
                        None => {
                            if exact_rational(b).map_or(false, |q| q.is_zero()) {
                                Err(NumError::DivisionByZero)
                            } else {
                                Err(NumError::PrecisionExhausted(work))
                            }
                        }
                    }
                }
                Op::Pow => {
                    let k = b
                        .as_rational()
                        .and_then(rational_integer)
                        .ok_or_else(|| NumError::Malformed("pow exponent must be an integer".into()))?;
                    match x.powi(k, work) {
                        Some(r) => Ok(r),
                        None => Err(NumError::PrecisionExhausted(work)),
                    }
                }
            }
        }
    }
}

/// Evaluate a recipe to a ball of radius at most `2^-precision` (radius 0
/// when the value is exactly dyadic).  The working precision starts above
/// the request and doubles on failure, at most four times.
pub fn eval_value(v: &AlgebraicValue, precision: u32) -> Result<Ball, NumError> {
    let precision = clamp_precision(precision);
    let goal = BigFloat::pow2(-(precision as i64 + 2));
    let mut work = precision + 32;
    let mut last = NumError::PrecisionExhausted(work);
    for _ in 0..=4 {
        match eval_at(v, work) {
            Ok(b) if b.rad.le(&goal) => {
                let out = if b.rad.is_zero() {
                    b
                } else {
                    b.inflated_to(&BigFloat::pow2(-(precision as i64)))
                };
                return Ok(out);
            }
            Ok(_) => last = NumError::PrecisionExhausted(work),
            Err(NumError::PrecisionExhausted(p)) => last = NumError::PrecisionExhausted(p),
            Err(e) => return Err(e),
        }
        work = work.saturating_mul(2);
    }
    Err(last)
}

/// Three-way zero status of a recipe.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroStatus {
    /// Certified: an all-rational recipe folded to zero.  Heuristic for
    /// algebraic recipes (value below tolerance at two precisions).
    Zero,
    /// Certified: an evaluation ball excluded zero.
    NonZero,
    /// Evaluation could not decide at the given precision.
    Undecided,
}

/// Decide whether a recipe is zero.
///
/// All-rational recipes are decided exactly.  Otherwise the value is
/// evaluated at `precision` and `2 * precision`; a ball excluding zero is a
/// certified `NonZero`, and magnitudes below `2^-(precision/2)` resp.
/// `2^-precision` at the two precisions give a (one-sided) heuristic
/// `Zero`: a true zero is never reported `NonZero`.
pub fn is_zero_heuristic(v: &AlgebraicValue, precision: u32) -> Result<ZeroStatus, NumError> {
    if let Some(q) = exact_rational(v) {
        return Ok(if q.is_zero() { ZeroStatus::Zero } else { ZeroStatus::NonZero });
    }
    let precision = clamp_precision(precision);
    let lo = match eval_value(v, precision) {
        Ok(b) => b,
        Err(NumError::PrecisionExhausted(_)) => return Ok(ZeroStatus::Undecided),
        Err(e) => return Err(e),
    };
    if lo.excludes_zero() {
        return Ok(ZeroStatus::NonZero);
    }
    let hi = match eval_value(v, precision * 2) {
        Ok(b) => b,
        Err(NumError::PrecisionExhausted(_)) => return Ok(ZeroStatus::Undecided),
        Err(e) => return Err(e),
    };
    if hi.excludes_zero() {
        return Ok(ZeroStatus::NonZero);
    }
    let tol_lo = BigFloat::pow2(-(precision as i64 / 2));
    let tol_hi = BigFloat::pow2(-(precision as i64));
    if lo.ub().lt(&tol_lo) && hi.ub().lt(&tol_hi) {
        Ok(ZeroStatus::Zero)
    } else {
        Ok(ZeroStatus::Undecided)
    }
}

// ---------------------------------------------------------------------------
// JSON encoding
//
//   {"rational": "2/3"}
//   {"root_of": {"poly": ["c0", ..., "1"], "seed": [re, im], "radius": r}}
//   {"expr": {"op": "+", "args": [value, value, ...]}}

#[derive(Serialize, Deserialize)]
enum ValueJson {
    #[serde(rename = "rational")]
    Rational(NumLit),
    #[serde(rename = "root_of")]
    RootOf { poly: Vec<NumLit>, seed: (NumLit, NumLit), radius: NumLit },
    #[serde(rename = "expr")]
    Expr { op: String, args: Vec<ValueJson> },
}

/// Number literal: a JSON string ("-2/3", "1.68") or a JSON number.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumLit {
    Str(String),
    Num(f64),
}

impl NumLit {
    fn to_rational(&self) -> Result<BigRational, NumError> {
        match self {
            NumLit::Str(s) => parse_rational(s),
            NumLit::Num(x) => BigRational::from_float(*x)
                .ok_or_else(|| NumError::Malformed(format!("non-finite number {x}"))),
        }
    }
}

/// Parse "a/b", plain integers, and decimal notation ("1.68", "-2.5e-3").
pub fn parse_rational(s: &str) -> Result<BigRational, NumError> {
    let s = s.trim();
    let bad = || NumError::Malformed(format!("cannot parse rational from {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    // Decimal with optional exponent.
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if frac_part.contains(['+', '-']) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let shift = exp10 - frac_part.len() as i64;
    let base = BigInt::from(10u32);
    Ok(if shift >= 0 {
        BigRational::from_integer(n * base.pow(shift as u32))
    } else {
        BigRational::new(n, base.pow((-shift) as u32))
    })
}

fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn to_json(v: &AlgebraicValue) -> ValueJson {
    match v {
        AlgebraicValue::Rational(q) => ValueJson::Rational(NumLit::Str(rational_string(q))),
        AlgebraicValue::RootOf(s) => ValueJson::RootOf {
            poly: s.coeffs.iter().map(|c| NumLit::Str(rational_string(c))).collect(),
            seed: (
                NumLit::Str(rational_string(&s.seed_re)),
                NumLit::Str(rational_string(&s.seed_im)),
            ),
            radius: NumLit::Str(rational_string(&s.radius)),
        },
        AlgebraicValue::Expr(op, a, b) => ValueJson::Expr {
            op: op.symbol().to_string(),
            args: vec![to_json(a), to_json(b)],
        },
    }
}

fn from_json(j: &ValueJson) -> Result<AlgebraicValue, NumError> {
    match j {
        ValueJson::Rational(lit) => Ok(AlgebraicValue::Rational(lit.to_rational()?)),
        ValueJson::RootOf { poly, seed, radius } => {
            let coeffs: Result<Vec<_>, _> = poly.iter().map(NumLit::to_rational).collect();
            let coeffs = coeffs?;
            if coeffs.len() < 2 {
                return Err(NumError::Malformed("root_of poly needs degree >= 1".into()));
            }
            if coeffs.last().map_or(true, |c| !c.is_one()) {
                return Err(NumError::Malformed("root_of poly must be monic".into()));
            }
            Ok(AlgebraicValue::root_of(RootSpec {
                coeffs,
                seed_re: seed.0.to_rational()?,
                seed_im: seed.1.to_rational()?,
                radius: radius.to_rational()?,
            }))
        }
        ValueJson::Expr { op, args } => {
            let op = Op::from_symbol(op)
                .ok_or_else(|| NumError::Malformed(format!("unknown operator {op:?}")))?;
            if args.len() < 2 {
                return Err(NumError::Malformed("expr needs at least two args".into()));
            }
            if op == Op::Pow && args.len() != 2 {
                return Err(NumError::Malformed("pow takes exactly two args".into()));
            }
            let mut parsed = args.iter().map(from_json);
            let mut acc = parsed.next().unwrap()?;
            for rhs in parsed {
                let rhs = rhs?;
                acc = match op {
                    Op::Add => acc.add(&rhs),
                    Op::Sub => acc.sub(&rhs),
                    Op::Mul => acc.mul(&rhs),
                    Op::Div => acc.div(&rhs)?,
                    Op::Pow => {
                        let k = rhs
                            .as_rational()
                            .and_then(rational_integer)
                            .ok_or_else(|| {
                                NumError::Malformed("pow exponent must be an integer".into())
                            })?;
                        acc.pow(k)?
                    }
                };
            }
            Ok(acc)
        }
    }
}

impl Serialize for AlgebraicValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        to_json(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraicValue {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = ValueJson::deserialize(deserializer)?;
        from_json(&j).map_err(serde::de::Error::custom)
    }
}
