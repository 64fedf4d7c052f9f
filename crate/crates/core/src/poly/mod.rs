//! Sparse multivariate polynomials in up to six variables `y0..y5`.
//!
//! Terms live in a map keyed by fixed-width exponent vectors, ordered
//! graded-lexicographically with `y0 > y1 > ...`: higher total degree
//! first, ties broken by the earlier variable carrying the larger
//! exponent.  The coefficient type is generic so the same engine serves
//! exact/algebraic projective polynomials and the truncated local germs
//! used by the singularity classifier.

mod parse;

pub use parse::parse_poly;

use crate::numbers::{eval_value, AlgebraicValue, Ball, NumError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Hard cap on the number of variables (projective work uses 4 or 5,
/// local germs up to 4).
pub const MAX_VARS: usize = 6;

/// Exponent vector of one monomial.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Expo([u8; MAX_VARS]);

impl Expo {
    pub fn zero() -> Self {
        Expo([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0u8; MAX_VARS];
        e[i] = 1;
        Expo(e)
    }

    pub fn from_slice(exps: &[u8]) -> Self {
        let mut e = [0u8; MAX_VARS];
        e[..exps.len()].copy_from_slice(exps);
        Expo(e)
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn with(&self, i: usize, v: u8) -> Self {
        let mut e = self.0;
        e[i] = v;
        Expo(e)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.0;
        for i in 0..MAX_VARS {
            e[i] = e[i].checked_add(other.0[i]).expect("exponent overflow");
        }
        Expo(e)
    }

    /// Componentwise difference when `other` divides `self`.
    pub fn try_sub(&self, other: &Self) -> Option<Self> {
        let mut e = self.0;
        for i in 0..MAX_VARS {
            e[i] = e[i].checked_sub(other.0[i])?;
        }
        Some(Expo(e))
    }

    /// Scale every exponent (substituting `y_i -> y_i^k`).
    pub fn scaled(&self, k: u8) -> Self {
        let mut e = self.0;
        for v in &mut e {
            *v = v.checked_mul(k).expect("exponent overflow");
        }
        Expo(e)
    }
}

impl Ord for Expo {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient ring interface.  `is_canonical_zero` must only report
/// provable zeros: dropping such terms never changes the polynomial.
pub trait Coef: Clone + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_canonical_zero(&self) -> bool;
}

impl Coef for AlgebraicValue {
    fn zero() -> Self {
        AlgebraicValue::zero()
    }
    fn one() -> Self {
        AlgebraicValue::one()
    }
    fn add(&self, other: &Self) -> Self {
        AlgebraicValue::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        AlgebraicValue::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        AlgebraicValue::mul(self, other)
    }
    fn neg(&self) -> Self {
        AlgebraicValue::neg(self)
    }
    fn is_canonical_zero(&self) -> bool {
        self.is_rational_zero()
    }
}

impl Coef for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_canonical_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Sparse polynomial with coefficients in `C`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<C: Coef> {
    nvars: usize,
    terms: BTreeMap<Expo, C>,
}

/// The main polynomial type: algebraic-number coefficients.
pub type MultiPoly = Poly<AlgebraicValue>;

impl<C: Coef> Poly<C> {
    pub fn new(nvars: usize) -> Self {
        assert!(nvars >= 1 && nvars <= MAX_VARS, "unsupported variable count {nvars}");
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::new(nvars);
        p.insert_add(Expo::zero(), c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut p = Self::new(nvars);
        p.insert_add(Expo::var(i), C::one());
        p
    }

    pub fn monomial(nvars: usize, e: Expo, c: C) -> Self {
        let mut p = Self::new(nvars);
        p.insert_add(e, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, e: &Expo) -> Option<&C> {
        self.terms.get(e)
    }

    pub fn leading(&self) -> Option<(&Expo, &C)> {
        self.terms.iter().next_back()
    }

    /// Add `c * y^e`, dropping the entry if the sum is canonically zero.
    pub fn insert_add(&mut self, e: Expo, c: C) {
        for i in self.nvars..MAX_VARS {
            assert_eq!(e.get(i), 0, "exponent on an absent variable");
        }
        if c.is_canonical_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_canonical_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::new(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(*e, c.neg());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_canonical_zero() {
            return Self::new(self.nvars);
        }
        let mut out = Self::new(self.nvars);
        for (e, v) in &self.terms {
            out.insert_add(*e, v.mul(c));
        }
        out
    }

    pub fn mul_monomial(&self, e: &Expo, c: &C) -> Self {
        let mut out = Self::new(self.nvars);
        if c.is_canonical_zero() {
            return out;
        }
        for (te, tc) in &self.terms {
            out.insert_add(te.add(e), tc.mul(c));
        }
        out
    }

    /// Schoolbook product (term-by-term accumulation into a map).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::new(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_add(ea.add(eb), ca.mul(cb));
            }
        }
        out
    }

    /// Product with all terms above `max_deg` discarded.
    pub fn mul_truncated(&self, other: &Self, max_deg: u32) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::new(self.nvars);
        for (ea, ca) in &self.terms {
            let da = ea.total();
            if da > max_deg {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + eb.total() > max_deg {
                    continue;
                }
                out.insert_add(ea.add(eb), ca.mul(cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn pow_truncated(&self, k: u32, max_deg: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C::one());
        for _ in 0..k {
            acc = acc.mul_truncated(self, max_deg);
        }
        acc
    }

    /// Maximum total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|e| e.total())
    }

    /// `Some(d)` when every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for e in self.terms.keys() {
            match deg {
                None => deg = Some(e.total()),
                Some(d) if d == e.total() => {}
                _ => return None,
            }
        }
        deg
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::new(self.nvars);
        for (e, c) in &self.terms {
            if e.total() == d {
                out.terms.insert(*e, c.clone());
            }
        }
        out
    }

    pub fn truncate_above(&self, max_deg: u32) -> Self {
        let mut out = Self::new(self.nvars);
        for (e, c) in &self.terms {
            if e.total() <= max_deg {
                out.terms.insert(*e, c.clone());
            }
        }
        out
    }

    /// Smallest total degree carrying a term, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|e| e.total())
    }

    /// Partial derivative in variable `i`.
    pub fn derive(&self, i: usize) -> Self {
        assert!(i < self.nvars);
        let mut out = Self::new(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(i);
            if k == 0 {
                continue;
            }
            let mut factor = C::zero();
            for _ in 0..k {
                factor = factor.add(&C::one());
            }
            out.insert_add(e.with(i, k - 1), c.mul(&factor));
        }
        out
    }

    /// Substitute `y_i -> images[i]`, optionally truncating at a total
    /// degree.  Image powers are computed once per variable.
    pub fn substitute(&self, images: &[Self], max_deg: Option<u32>) -> Self {
        assert_eq!(images.len(), self.nvars);
        let cap = max_deg.unwrap_or(u32::MAX);
        // Power tables up to each variable's maximal exponent.
        let mut tables: Vec<Vec<Self>> = Vec::with_capacity(self.nvars);
        for (i, img) in images.iter().enumerate() {
            let maxe = self.terms.keys().map(|e| e.get(i)).max().unwrap_or(0);
            let mut tab = vec![Self::constant(self.nvars, C::one())];
            for k in 1..=maxe {
                let prev = &tab[(k - 1) as usize];
                let next = if cap == u32::MAX { prev.mul(img) } else { prev.mul_truncated(img, cap) };
                tab.push(next);
            }
            tables.push(tab);
        }
        let mut out = Self::new(self.nvars);
        for (e, c) in &self.terms {
            let mut term = Self::constant(self.nvars, c.clone());
            for i in 0..self.nvars {
                let k = e.get(i);
                if k > 0 {
                    let factor = &tables[i][k as usize];
                    term = if cap == u32::MAX { term.mul(factor) } else { term.mul_truncated(factor, cap) };
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Substitute `y_i -> y_i^k` by scaling exponents.
    pub fn power_substitute(&self, k: u8) -> Self {
        let mut out = Self::new(self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.scaled(k), c.clone());
        }
        out
    }

    /// Evaluate at a point of the coefficient ring via power tables.
    pub fn evaluate_in_ring(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut tables: Vec<Vec<C>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let maxe = self.terms.keys().map(|e| e.get(i)).max().unwrap_or(0);
            let mut tab = vec![C::one()];
            for k in 1..=maxe {
                tab.push(tab[(k - 1) as usize].mul(&point[i]));
            }
            tables.push(tab);
        }
        let mut parts: Vec<C> = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..self.nvars {
                let k = e.get(i);
                if k > 0 {
                    t = t.mul(&tables[i][k as usize]);
                }
            }
            parts.push(t);
        }
        // Sum pairwise rather than by a running fold: symbolic coefficients
        // record the addition tree, and a left-deep chain over hundreds of
        // terms nests too deep for downstream consumers (serialized reports,
        // recursive evaluators) while the balanced tree stays logarithmic.
        while parts.len() > 1 {
            let mut next = Vec::with_capacity(parts.len().div_ceil(2));
            for pair in parts.chunks(2) {
                next.push(match pair {
                    [a, b] => a.add(b),
                    [a] => a.clone(),
                    _ => unreachable!(),
                });
            }
            parts = next;
        }
        parts.pop().unwrap_or_else(C::zero)
    }

    pub fn map_coefs<D: Coef>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::new(self.nvars);
        for (e, c) in &self.terms {
            out.insert_add(*e, f(c));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// AlgebraicValue-specific operations

impl MultiPoly {
    /// Build from rational coefficients.
    pub fn from_rational_terms(nvars: usize, terms: &[(Expo, BigRational)]) -> Self {
        let mut p = Self::new(nvars);
        for (e, c) in terms {
            p.insert_add(*e, AlgebraicValue::from_rational(c.clone()));
        }
        p
    }

    /// `Some` when every coefficient folds to an exact rational.
    pub fn rational_coefficients(&self) -> Option<Poly<BigRational>> {
        let mut out = Poly::new(self.nvars);
        for (e, c) in &self.terms {
            out.insert_add(*e, crate::numbers::exact_rational(c)?);
        }
        Some(out)
    }

    /// Symbolic evaluation: exact for rational data, otherwise a recipe to
    /// evaluate at any precision.
    pub fn evaluate(&self, point: &[AlgebraicValue]) -> AlgebraicValue {
        self.evaluate_in_ring(point)
    }

    /// Ball evaluation at a working precision.
    pub fn eval_ball(&self, point: &[Ball], prec: u32) -> Result<Ball, NumError> {
        assert_eq!(point.len(), self.nvars);
        let mut tables: Vec<Vec<Ball>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let maxe = self.terms.keys().map(|e| e.get(i)).max().unwrap_or(0);
            let mut tab = vec![Ball::one()];
            for k in 1..=maxe {
                tab.push(tab[(k - 1) as usize].mul(&point[i], prec));
            }
            tables.push(tab);
        }
        let mut acc = Ball::zero();
        for (e, c) in &self.terms {
            let mut t = eval_value(c, prec)?;
            for i in 0..self.nvars {
                let k = e.get(i);
                if k > 0 {
                    t = t.mul(&tables[i][k as usize], prec);
                }
            }
            acc = acc.add(&t, prec);
        }
        Ok(acc)
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derive(i)).collect()
    }

    /// Matrix of second partials evaluated at a point (symbolic).
    pub fn hessian_at(&self, point: &[AlgebraicValue]) -> Vec<Vec<AlgebraicValue>> {
        let mut rows = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let di = self.derive(i);
            let mut row = Vec::with_capacity(self.nvars);
            for j in 0..self.nvars {
                row.push(di.derive(j).evaluate(point));
            }
            rows.push(row);
        }
        rows
    }

    /// Coefficients of `t -> F(P + t v)`, ascending in `t`, optionally
    /// truncated at `t^max_order`.
    pub fn restrict_to_line(
        &self,
        p: &[AlgebraicValue],
        v: &[AlgebraicValue],
        max_order: Option<usize>,
    ) -> Vec<AlgebraicValue> {
        assert_eq!(p.len(), self.nvars);
        assert_eq!(v.len(), self.nvars);
        let deg = self.degree().unwrap_or(0) as usize;
        let cap = max_order.unwrap_or(deg).min(deg);
        // Per variable: (p_i + t v_i)^e as ascending t-coefficients.
        let mut tables: Vec<Vec<Vec<AlgebraicValue>>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let maxe = self.terms.keys().map(|e| e.get(i)).max().unwrap_or(0) as usize;
            let mut tab: Vec<Vec<AlgebraicValue>> = vec![vec![AlgebraicValue::one()]];
            for e in 1..=maxe {
                let prev = &tab[e - 1];
                let mut next = vec![AlgebraicValue::zero(); (e + 1).min(cap + 1)];
                for (k, c) in prev.iter().enumerate() {
                    if k < next.len() {
                        next[k] = next[k].add(&c.mul(&p[i]));
                    }
                    if k + 1 < next.len() {
                        next[k + 1] = next[k + 1].add(&c.mul(&v[i]));
                    }
                }
                tab.push(next);
            }
            tables.push(tab);
        }
        let mut out = vec![AlgebraicValue::zero(); cap + 1];
        for (e, c) in &self.terms {
            let mut term = vec![c.clone()];
            for i in 0..self.nvars {
                let k = e.get(i) as usize;
                if k == 0 {
                    continue;
                }
                term = convolve_truncated(&term, &tables[i][k], cap);
            }
            for (k, val) in term.into_iter().enumerate() {
                out[k] = out[k].add(&val);
            }
        }
        out
    }

    /// Long division by a single divisor under graded-lex: returns
    /// (quotient, remainder) with no remainder term divisible by the
    /// divisor's leading monomial.  Requires an invertible (structurally
    /// nonzero) leading coefficient.
    pub fn divide_by(&self, divisor: &Self) -> Result<(Self, Self), NumError> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lead_e, lead_c) = divisor
            .leading()
            .ok_or_else(|| NumError::Malformed("division by the zero polynomial".into()))?;
        let lead_e = *lead_e;
        let lead_c = lead_c.clone();
        let mut quotient = Self::new(self.nvars);
        let mut remainder = Self::new(self.nvars);
        let mut work = self.clone();
        while let Some((e, c)) = work.leading().map(|(e, c)| (*e, c.clone())) {
            match e.try_sub(&lead_e) {
                Some(qe) => {
                    let qc = c.div(&lead_c)?;
                    quotient.insert_add(qe, qc.clone());
                    work = work.sub(&divisor.mul_monomial(&qe, &qc));
                }
                None => {
                    remainder.insert_add(e, c.clone());
                    let mut w = work;
                    w.terms.remove(&e);
                    work = w;
                }
            }
        }
        Ok((quotient, remainder))
    }
}

fn convolve_truncated(
    a: &[AlgebraicValue],
    b: &[AlgebraicValue],
    cap: usize,
) -> Vec<AlgebraicValue> {
    let n = (a.len() + b.len() - 1).min(cap + 1);
    let mut out = vec![AlgebraicValue::zero(); n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

/// All degree-`d` exponent vectors in `nvars` variables, descending
/// graded-lex (so `y0^d` comes first).
pub fn monomial_basis(nvars: usize, d: u32) -> Vec<Expo> {
    assert!(nvars >= 1 && nvars <= MAX_VARS);
    let mut out = Vec::new();
    let mut cur = [0u8; MAX_VARS];
    fn rec(out: &mut Vec<Expo>, cur: &mut [u8; MAX_VARS], var: usize, nvars: usize, left: u32) {
        if var == nvars - 1 {
            cur[var] = left as u8;
            out.push(Expo(*cur));
            cur[var] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[var] = e as u8;
            rec(out, cur, var + 1, nvars, left - e);
        }
        cur[var] = 0;
    }
    assert!(d <= u8::MAX as u32, "degree too large for u8 exponents");
    rec(&mut out, &mut cur, 0, nvars, d);
    out
}

/// Number of degree-`d` monomials in `nvars` variables.
pub fn monomial_count(nvars: usize, d: u32) -> usize {
    // C(d + nvars - 1, nvars - 1)
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..nvars {
        num *= BigInt::from(d + i as u32);
        den *= BigInt::from(i);
    }
    let q: BigInt = num / den;
    q.try_into().expect("count fits usize")
}

// ---------------------------------------------------------------------------
// Projective points

/// A point of projective space given by explicit (not normalized)
/// homogeneous coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectivePoint {
    pub coords: Vec<AlgebraicValue>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<AlgebraicValue>) -> Self {
        ProjectivePoint { coords }
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        ProjectivePoint { coords: coords.iter().map(|&c| AlgebraicValue::from_i64(c)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinates as balls at a working precision.
    pub fn eval_coords(&self, prec: u32) -> Result<Vec<Ball>, NumError> {
        self.coords.iter().map(|c| eval_value(c, prec)).collect()
    }

    /// `Some` when every coordinate folds to an exact rational.
    pub fn rational_coords(&self) -> Option<Vec<BigRational>> {
        self.coords.iter().map(crate::numbers::exact_rational).collect()
    }
}

// ---------------------------------------------------------------------------
// Display (canonical text form, defined for rational coefficients)

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms_desc() {
            let (sign, mag) = match crate::numbers::exact_rational(c) {
                Some(q) => {
                    if q.is_negative() {
                        ("-", rational_text(&-q.clone()))
                    } else {
                        ("+", rational_text(&q))
                    }
                }
                None => ("+", format!("({c:?})")),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let mon = monomial_text(e, self.nvars);
            match (mag.as_str(), mon.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                ("1", false) => write!(f, "{mon}")?,
                (_, false) => write!(f, "{mag}*{mon}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn monomial_text(e: &Expo, nvars: usize) -> String {
    let mut parts = Vec::new();
    for i in 0..nvars {
        match e.get(i) {
            0 => {}
            1 => parts.push(format!("y{i}")),
            k => parts.push(format!("y{i}^{k}")),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(src: &str) -> MultiPoly {
        parse_poly(src, 4).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        // Degree dominates; within a degree y0 beats y1 beats ...
        let a = Expo::from_slice(&[2, 0, 0, 0]);
        let b = Expo::from_slice(&[1, 1, 0, 0]);
        let c = Expo::from_slice(&[0, 0, 0, 3]);
        assert!(c > a, "higher degree is greater");
        assert!(a > b, "y0^2 beats y0*y1");
        let basis = monomial_basis(4, 2);
        assert_eq!(basis[0], a);
        assert_eq!(basis[1], b);
        assert_eq!(*basis.last().unwrap(), Expo::from_slice(&[0, 0, 0, 2]));
    }

    #[test]
    fn basis_counts_match_enumeration_oracle() {
        // Brute-force enumeration over all tuples with sum d.
        for nvars in [3usize, 4, 5] {
            for d in 0..=12u32 {
                // Count compositions of d into nvars parts by brute force.
                fn rec(var: usize, left: u32, nvars: usize, count: &mut usize) {
                    if var == nvars - 1 {
                        *count += 1;
                        return;
                    }
                    for e in 0..=left {
                        rec(var + 1, left - e, nvars, count);
                    }
                }
                let mut count = 0usize;
                rec(0, d, nvars, &mut count);
                assert_eq!(monomial_basis(nvars, d).len(), count);
                assert_eq!(monomial_count(nvars, d), count);
            }
        }
        // The fixed sizes used by the condition matrices.
        assert_eq!(monomial_count(4, 4), 35);
        assert_eq!(monomial_count(4, 6), 84);
        assert_eq!(monomial_count(4, 8), 165);
        assert_eq!(monomial_count(5, 5), 126);
    }

    #[test]
    fn ring_laws_on_random_rational_polys() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let random_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut poly = MultiPoly::new(4);
            for _ in 0..rng.gen_range(1..8) {
                let e = Expo::from_slice(&[
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                    rng.gen_range(0..3),
                ]);
                let c = q(rng.gen_range(-9..10), rng.gen_range(1..5));
                poly.insert_add(e, AlgebraicValue::from_rational(c));
            }
            poly
        };
        for _ in 0..40 {
            let a = random_poly(&mut rng);
            let b = random_poly(&mut rng);
            let c = random_poly(&mut rng);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.sub(&a), MultiPoly::new(4));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }

    #[test]
    fn euler_identity_for_homogeneous_polys() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let d = rng.gen_range(1..=6u32);
            let basis = monomial_basis(4, d);
            let mut poly = MultiPoly::new(4);
            for e in &basis {
                if rng.gen_bool(0.3) {
                    poly.insert_add(*e, AlgebraicValue::from_i64(rng.gen_range(-5..6)));
                }
            }
            if poly.is_zero() {
                continue;
            }
            assert_eq!(poly.homogeneous_degree(), Some(d));
            // sum_i y_i dF/dy_i == d * F
            let mut acc = MultiPoly::new(4);
            for i in 0..4 {
                acc = acc.add(&poly.derive(i).mul_monomial(&Expo::var(i), &AlgebraicValue::one()));
            }
            assert_eq!(acc, poly.scale(&AlgebraicValue::from_i64(d as i64)));
        }
    }

    #[test]
    fn homogeneity_under_scaling() {
        let f = p("y0^2*y1 - 3*y2^3 + 1/2*y0*y1*y3");
        assert_eq!(f.homogeneous_degree(), Some(3));
        let pt: Vec<AlgebraicValue> = [3, -2, 5, 7].iter().map(|&c| AlgebraicValue::from_i64(c)).collect();
        let lam = AlgebraicValue::from_rational(q(4, 3));
        let scaled: Vec<AlgebraicValue> = pt.iter().map(|c| c.mul(&lam)).collect();
        let lhs = crate::numbers::exact_rational(&f.evaluate(&scaled)).unwrap();
        let rhs = crate::numbers::exact_rational(
            &f.evaluate(&pt).mul(&lam.pow(3).unwrap()),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_and_line_restriction_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let basis = monomial_basis(4, 4);
            let mut f = MultiPoly::new(4);
            for e in &basis {
                if rng.gen_bool(0.25) {
                    f.insert_add(*e, AlgebraicValue::from_i64(rng.gen_range(-4..5)));
                }
            }
            let pt: Vec<AlgebraicValue> =
                (0..4).map(|_| AlgebraicValue::from_i64(rng.gen_range(-3..4))).collect();
            let v: Vec<AlgebraicValue> =
                (0..4).map(|_| AlgebraicValue::from_i64(rng.gen_range(-3..4))).collect();
            let line = f.restrict_to_line(&pt, &v, Some(2));
            // t^0 coefficient is F(P).
            assert_eq!(
                crate::numbers::exact_rational(&line[0]),
                crate::numbers::exact_rational(&f.evaluate(&pt))
            );
            // t^1 coefficient is grad F(P) . v.
            let mut dot = AlgebraicValue::zero();
            for i in 0..4 {
                dot = dot.add(&f.derive(i).evaluate(&pt).mul(&v[i]));
            }
            assert_eq!(
                crate::numbers::exact_rational(&line[1]),
                crate::numbers::exact_rational(&dot)
            );
        }
    }

    #[test]
    fn hessian_is_symmetric() {
        let f = p("y0^3*y1 + y1^2*y2^2 - 2*y3^4");
        let pt: Vec<AlgebraicValue> =
            [1, 2, -1, 3].iter().map(|&c| AlgebraicValue::from_i64(c)).collect();
        let h = f.hessian_at(&pt);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    crate::numbers::exact_rational(&h[i][j]),
                    crate::numbers::exact_rational(&h[j][i])
                );
            }
        }
    }

    #[test]
    fn division_with_remainder() {
        let f = p("y0^3 + y1^3 + y2^3 + y3^3");
        let g = p("y0*y1 - y2*y3");
        let prod = f.mul(&g);
        let (quot, rem) = prod.divide_by(&f).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, g);
        // Now a division that must leave a remainder.
        let h = prod.add(&p("y2^2"));
        let (quot, rem) = h.divide_by(&f).unwrap();
        assert_eq!(quot, g);
        assert_eq!(rem, p("y2^2"));
    }

    #[test]
    fn exponent_scaling_substitutes_powers() {
        let f = p("y0*y1 - y2*y3");
        let g = f.power_substitute(3);
        assert_eq!(g, p("y0^3*y1^3 - y2^3*y3^3"));
        // Matches the generic substitution y_i -> y_i^3.
        let images: Vec<MultiPoly> = (0..4)
            .map(|i| MultiPoly::variable(4, i).pow(3))
            .collect();
        assert_eq!(f.substitute(&images, None), g);
    }

    #[test]
    fn ball_eval_encloses_exact_eval() {
        let f = p("1/3*y0^2 - y1*y2 + 7*y3^2");
        let pt = [q(1, 7), q(2, 3), q(-1, 2), q(5, 11)];
        let exact: BigRational = q(1, 3) * q(1, 49) - q(2, 3) * q(-1, 2) + q(5, 1) * q(25, 121) * q(7, 5);
        let balls: Vec<Ball> = pt.iter().map(|c| Ball::from_rational(c, 128)).collect();
        let got = f.eval_ball(&balls, 128).unwrap();
        let err = (got.re.to_rational() - exact).abs();
        assert!(err <= got.rad.to_rational());
    }

    #[test]
    fn min_degree_and_parts() {
        let f = p("y0^2 + y1^3 + y0*y1^4");
        assert_eq!(f.min_degree(), Some(2));
        assert_eq!(f.degree(), Some(5));
        assert_eq!(f.homogeneous_part(3), p("y1^3"));
        assert_eq!(f.truncate_above(3), p("y0^2 + y1^3"));
    }
}
