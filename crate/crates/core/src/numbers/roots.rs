//! Certified refinement of isolated polynomial roots.
//!
//! A root is described by a monic rational polynomial, a complex seed and an
//! isolation radius.  Refinement first polishes the seed with plain Newton
//! steps, then certifies the result with the interval Newton operator
//! `N(B) = mid(B) - p(mid(B)) / p'(B)`: when `N(B)` lands strictly inside
//! `B`, the disc `B` contains exactly one (simple) root, and iterating `N`
//! shrinks the enclosure quadratically.

use super::ball::Ball;
use super::bigfloat::BigFloat;
use super::NumError;
use num_rational::BigRational;
use num_traits::Zero;

/// Horner evaluation of `coeffs[0] + coeffs[1] z + ...` over a ball.
pub(crate) fn eval_poly_ball(coeffs: &[BigRational], z: &Ball, prec: u32) -> Ball {
    let mut acc = Ball::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, prec);
        if !c.is_zero() {
            acc = acc.add(&Ball::from_rational(c, prec), prec);
        }
    }
    acc
}

fn derivative(coeffs: &[BigRational]) -> Vec<BigRational> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(i.into()))
        .collect()
}

/// Monic gcd of two rational polynomials (Euclidean remainder sequence).
fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        v
    }
    fn make_monic(mut v: Vec<BigRational>) -> Vec<BigRational> {
        if let Some(lead) = v.last().cloned() {
            for c in &mut v {
                *c /= lead.clone();
            }
        }
        v
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        // a mod b
        let db = b.len() - 1;
        let lead = b[db].clone();
        while a.len() > db {
            let da = a.len() - 1;
            let factor = a[da].clone() / lead.clone();
            for i in 0..=db {
                let t = &factor * &b[i];
                a[da - db + i] -= t;
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    make_monic(a)
}

fn validate(coeffs: &[BigRational]) -> Result<(), NumError> {
    if coeffs.len() < 2 {
        return Err(NumError::Malformed("root polynomial must have degree >= 1".into()));
    }
    if coeffs.last().unwrap().is_zero() {
        return Err(NumError::Malformed("root polynomial has zero leading coefficient".into()));
    }
    Ok(())
}

/// Refine the root of `coeffs` isolated by the seed disc to a ball of
/// radius at most `2^-target` (exactly `2^-target` unless the enclosure is
/// exact).  Coefficients are ascending; the seed and radius are exact
/// rationals.
pub fn refine_root(
    coeffs: &[BigRational],
    seed_re: &BigRational,
    seed_im: &BigRational,
    radius: &BigRational,
    target: u32,
) -> Result<Ball, NumError> {
    validate(coeffs)?;
    if radius <= &BigRational::zero() {
        return Err(NumError::Malformed("isolation radius must be positive".into()));
    }
    // Linear polynomial: the root is rational, no iteration needed.
    if coeffs.len() == 2 {
        let root = -(&coeffs[0] / &coeffs[1]);
        return Ok(Ball::from_rational(&root, target + 8));
    }

    let deriv = derivative(coeffs);
    let seed = |prec: u32| {
        let mut b = Ball::from_rational_pair(seed_re, seed_im, prec);
        let (r, up) = BigFloat::from_rational(radius, 32);
        b.rad = b.rad.add(&r).add(&up);
        b
    };
    let goal = BigFloat::pow2(-(target as i64 + 2));

    let mut work = target.max(64) + 64;
    let mut derivative_straddles_at_seed = false;
    for _escalation in 0..=4 {
        let b0 = seed(work);
        if let Some(ball) = try_certify(coeffs, &deriv, &b0, &goal, work) {
            let out = if ball.rad.is_zero() {
                ball
            } else {
                ball.inflated_to(&BigFloat::pow2(-(target as i64)))
            };
            return Ok(out);
        }
        if !eval_poly_ball(&deriv, &b0, work).excludes_zero() {
            derivative_straddles_at_seed = true;
        }
        work *= 2;
    }

    if derivative_straddles_at_seed {
        // Distinguish a genuinely multiple root from a merely bad seed.
        let g = poly_gcd(coeffs, &deriv);
        if g.len() >= 2 {
            let b0 = seed(work);
            if !eval_poly_ball(&g, &b0, work).excludes_zero() {
                return Err(NumError::MultipleRoot);
            }
        }
    }
    Err(NumError::NonIsolatingSeed)
}

/// One full polish-then-certify attempt at a fixed working precision.
fn try_certify(
    coeffs: &[BigRational],
    deriv: &[BigRational],
    b0: &Ball,
    goal: &BigFloat,
    work: u32,
) -> Option<Ball> {
    // Phase 1: plain Newton on the center to converge near the root.
    let mut x = b0.mid();
    let mut step_size = b0.rad.clone();
    for _ in 0..64 {
        let px = eval_poly_ball(coeffs, &x, work);
        if px.definitely_contains_zero() && px.rad.is_zero() {
            step_size = BigFloat::zero();
            break; // hit the root exactly
        }
        let dx = eval_poly_ball(deriv, &x, work);
        let Some(step) = px.div(&dx, work) else { break };
        let next = x.sub(&step, work).mid();
        step_size = step.ub();
        x = next;
        if step_size.le(&BigFloat::pow2(-(work as i64) + 8).mul(&x.ub().add(&BigFloat::one()))) {
            break;
        }
    }
    // The root we converged to must be the one the seed disc isolates.
    let drift = x.sub(&b0.mid(), work).ub();
    if !drift.le(&b0.rad) {
        return None;
    }

    // Phase 2: certify with the interval Newton operator on a small disc
    // around the polished point, growing the disc if needed.
    let tiny = BigFloat::pow2(-(work as i64) + 16).mul(&x.ub().add(&BigFloat::one()));
    let mut r = step_size.mul(&BigFloat::from_i64(4)).add(&tiny);
    for _grow in 0..8 {
        if b0.rad.lt(&r) {
            break;
        }
        let cand = x.inflated_to(&r);
        if let Some(shrunk) = contract_to_goal(coeffs, deriv, cand, goal, work) {
            return Some(shrunk);
        }
        r = r.mul(&BigFloat::from_i64(16));
    }
    None
}

/// Establish the contraction `N(B)` strictly inside `B`, then iterate until
/// the radius reaches the goal.  `None` when certification or the radius
/// goal fails at this precision.
fn contract_to_goal(
    coeffs: &[BigRational],
    deriv: &[BigRational],
    mut b: Ball,
    goal: &BigFloat,
    work: u32,
) -> Option<Ball> {
    let mut proven = false;
    for _ in 0..80 {
        let mid = b.mid();
        let pm = eval_poly_ball(coeffs, &mid, work);
        let pd = eval_poly_ball(deriv, &b, work);
        if !pd.excludes_zero() {
            return None;
        }
        let n = mid.sub(&pm.div(&pd, work)?, work);
        if b.contains_ball_strictly(&n) {
            proven = true;
            b = n;
        } else if proven {
            // N(B) still contains the unique root of B; keep whichever
            // enclosure is tighter and stop when progress stalls.
            if n.rad.lt(&b.rad) {
                b = n;
            } else {
                break;
            }
        } else {
            return None;
        }
        if proven && b.rad.le(goal) {
            return Some(b);
        }
    }
    if proven && b.rad.le(goal) {
        Some(b)
    } else {
        None
    }
}
