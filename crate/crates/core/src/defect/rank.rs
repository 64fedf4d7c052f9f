//! Rank computation: exact fraction-free elimination for rational matrices,
//! certified ball elimination for algebraic ones, and a minor-based oracle
//! used to cross-check both.
//!
//! The numeric path never trusts a floating pivot: an entry may only be used
//! as a pivot when its ball encloses values bounded away from zero relative
//! to the matrix norm, so every elimination step is valid for the true
//! matrix.  The resulting count is a proven lower bound on the rank; the
//! upper bound (that the discarded entries really vanish) is heuristic, and
//! is only reported as `certified` when two runs at precisions `p` and `2p`
//! agree and no discarded entry could be bounded away from zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numbers::{clamp_precision, eval_value, AlgebraicValue, Ball, BigFloat, NumError, MAX_PRECISION};

/// Which elimination engine to use for a rank computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankBackend {
    /// Fraction-free integer elimination; requires rational entries.
    Exact,
    /// Certified ball elimination at a working precision.
    Numeric,
    /// Exact when every entry is rational, numeric otherwise.
    Auto,
}

/// Outcome of a rank computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    /// The computed rank.
    pub rank: usize,
    /// The engine that actually ran (`exact` or `numeric`).
    pub backend: RankBackend,
    /// Exact results are always certified.  Numeric results are certified
    /// when the runs at `p` and `2p` bits agree and nothing ambiguous was
    /// left behind; see the module docs for what that does and does not
    /// guarantee.
    pub certified: bool,
    /// Working precision of a numeric run.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision: Option<u32>,
}

impl RankResult {
    /// An exact, certified result.
    pub fn exact(rank: usize) -> Self {
        RankResult {
            rank,
            backend: RankBackend::Exact,
            certified: true,
            precision: None,
        }
    }
}

/// Rank of a rational matrix by Bareiss fraction-free elimination.
///
/// Each row is scaled by the least common multiple of its denominators
/// (which does not change the rank) and the elimination then stays in
/// integers, with every division exact.
pub fn bareiss_rank(m: &[Vec<BigRational>]) -> usize {
    let nr = m.len();
    if nr == 0 {
        return 0;
    }
    let nc = m[0].len();
    if nc == 0 {
        return 0;
    }
    let mut w: Vec<Vec<BigInt>> = Vec::with_capacity(nr);
    for row in m {
        let mut scale = BigInt::one();
        for x in row {
            scale = scale.lcm(x.denom());
        }
        w.push(
            row.iter()
                .map(|x| x.numer() * (&scale / x.denom()))
                .collect(),
        );
    }
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut col = 0usize;
    while rank < nr && col < nc {
        // First nonzero pivot in (row, col) order within the current column.
        let pivot_row = (rank..nr).find(|&r| !w[r][col].is_zero());
        let Some(pr) = pivot_row else {
            col += 1;
            continue;
        };
        w.swap(rank, pr);
        let p = w[rank][col].clone();
        for i in (rank + 1)..nr {
            for j in (col + 1)..nc {
                let num = &p * &w[i][j] - &w[i][col] * &w[rank][j];
                let (q, rem) = num.div_rem(&prev);
                assert!(rem.is_zero(), "fraction-free elimination produced a remainder");
                w[i][j] = q;
            }
            w[i][col] = BigInt::zero();
        }
        prev = p;
        rank += 1;
        col += 1;
    }
    rank
}

/// Determinant of a square rational matrix by plain elimination.
fn rational_det(m: &mut Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero());
        let Some(pr) = pivot else {
            return BigRational::zero();
        };
        if pr != k {
            m.swap(k, pr);
            det = -det;
        }
        let p = m[k][k].clone();
        det *= &p;
        for i in (k + 1)..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            for j in k..n {
                let sub = &f * &m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}

/// Reference rank via explicit minors, for cross-checking the elimination
/// engines on small matrices.
///
/// Grows a witness submatrix one row and column at a time: if an invertible
/// `k x k` witness exists and the rank exceeds `k`, some one-step extension
/// is again invertible (the bordered determinant equals the witness
/// determinant times a Schur-complement entry, and the Schur complement of
/// an invertible block is nonzero whenever the rank exceeds the block size).
/// So the greedy growth never gets stuck below the true rank.
pub fn minor_rank(m: &[Vec<BigRational>]) -> usize {
    let nr = m.len();
    let nc = if nr == 0 { 0 } else { m[0].len() };
    let mut rows: Vec<usize> = Vec::new();
    let mut cols: Vec<usize> = Vec::new();
    loop {
        let mut extended = false;
        'search: for r in 0..nr {
            if rows.contains(&r) {
                continue;
            }
            for c in 0..nc {
                if cols.contains(&c) {
                    continue;
                }
                rows.push(r);
                cols.push(c);
                let mut sub: Vec<Vec<BigRational>> = rows
                    .iter()
                    .map(|&ri| cols.iter().map(|&ci| m[ri][ci].clone()).collect())
                    .collect();
                if !rational_det(&mut sub).is_zero() {
                    extended = true;
                    break 'search;
                }
                rows.pop();
                cols.pop();
            }
        }
        if !extended {
            return rows.len();
        }
    }
}

struct BallRun {
    rank: usize,
    /// True when every entry left unpivoted is consistent with zero.
    clean: bool,
}

/// One complete-pivoting ball elimination at a fixed working precision.
fn ball_rank_once(entries: &[Vec<AlgebraicValue>], prec: u32) -> Result<BallRun, NumError> {
    let nr = entries.len();
    let nc = if nr == 0 { 0 } else { entries[0].len() };
    if nr == 0 || nc == 0 {
        return Ok(BallRun { rank: 0, clean: true });
    }
    let mut m: Vec<Vec<Ball>> = Vec::with_capacity(nr);
    let mut norm = BigFloat::zero();
    for row in entries {
        let mut out = Vec::with_capacity(nc);
        for v in row {
            let b = eval_value(v, prec)?;
            norm = norm.max_val(&b.ub());
            out.push(b);
        }
        m.push(out);
    }
    // Entries certifiably larger than norm * 2^(-p/2) may pivot; everything
    // below is treated as zero for this run (and re-examined afterwards).
    let tol = norm.mul_pow2(-((prec / 2) as i64));
    let mut row_active = vec![true; nr];
    let mut col_active = vec![true; nc];
    let mut rank = 0usize;
    loop {
        let mut best: Option<(usize, usize, BigFloat)> = None;
        for r in 0..nr {
            if !row_active[r] {
                continue;
            }
            for c in 0..nc {
                if !col_active[c] {
                    continue;
                }
                let lb = m[r][c].lb();
                if lb.le(&tol) {
                    continue;
                }
                // Strict improvement keeps the lowest (row, col) among ties.
                match &best {
                    Some((_, _, b)) if !b.lt(&lb) => {}
                    _ => best = Some((r, c, lb)),
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let pivot = m[pr][pc].clone();
        for r in 0..nr {
            if !row_active[r] || r == pr {
                continue;
            }
            let factor = m[r][pc]
                .div(&pivot, prec)
                .ok_or(NumError::PrecisionExhausted(prec))?;
            for c in 0..nc {
                if !col_active[c] || c == pc {
                    continue;
                }
                let sub = factor.mul(&m[pr][c], prec);
                m[r][c] = m[r][c].sub(&sub, prec);
            }
            m[r][pc] = Ball::zero();
        }
        row_active[pr] = false;
        col_active[pc] = false;
        rank += 1;
    }
    let mut clean = true;
    for r in 0..nr {
        if !row_active[r] {
            continue;
        }
        for c in 0..nc {
            if col_active[c] && m[r][c].excludes_zero() {
                clean = false;
            }
        }
    }
    Ok(BallRun { rank, clean })
}

/// Certified numeric rank: runs the ball elimination at `p` and `2p` bits,
/// escalating the precision (up to three attempts) until the two runs agree
/// and neither leaves an entry that is provably nonzero unpivoted.
pub fn certified_ball_rank(
    entries: &[Vec<AlgebraicValue>],
    precision: u32,
) -> Result<RankResult, NumError> {
    let mut p = clamp_precision(precision);
    let mut last = None;
    for _ in 0..3 {
        if 2 * p > MAX_PRECISION {
            break;
        }
        let lo = ball_rank_once(entries, p)?;
        let hi = ball_rank_once(entries, 2 * p)?;
        let certified = lo.clean && hi.clean && lo.rank == hi.rank;
        let result = RankResult {
            rank: hi.rank,
            backend: RankBackend::Numeric,
            certified,
            precision: Some(p),
        };
        if certified {
            return Ok(result);
        }
        last = Some(result);
        p *= 2;
    }
    Ok(last.expect("at least one attempt runs"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{parse_rational, RootSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn to_values(m: &[Vec<BigRational>]) -> Vec<Vec<AlgebraicValue>> {
        m.iter()
            .map(|row| row.iter().map(|q| AlgebraicValue::Rational(q.clone())).collect())
            .collect()
    }

    /// Random rational matrix of shape (r x c) and rank at most `k`,
    /// constructed as a product of (r x k) and (k x c) factors.
    fn random_low_rank(rng: &mut ChaCha8Rng, r: usize, c: usize, k: usize) -> Vec<Vec<BigRational>> {
        let a: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..k).map(|_| rng.gen_range(-4i64..=4)).collect())
            .collect();
        let b: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..c).map(|_| rng.gen_range(-4i64..=4)).collect())
            .collect();
        (0..r)
            .map(|i| {
                (0..c)
                    .map(|j| rat((0..k).map(|t| a[i][t] * b[t][j]).sum::<i64>()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn three_engines_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..60 {
            let r = rng.gen_range(1..=7);
            let c = rng.gen_range(1..=7);
            let k = rng.gen_range(0..=r.min(c));
            let m = random_low_rank(&mut rng, r, c, k);
            let oracle = minor_rank(&m);
            assert!(oracle <= k);
            assert_eq!(bareiss_rank(&m), oracle, "bareiss disagrees with minors");
            let num = certified_ball_rank(&to_values(&m), 128).unwrap();
            assert!(num.certified);
            assert_eq!(num.rank, oracle, "ball elimination disagrees with minors");
        }
    }

    #[test]
    fn degenerate_shapes() {
        assert_eq!(bareiss_rank(&[]), 0);
        assert_eq!(minor_rank(&[]), 0);
        let zero = vec![vec![rat(0); 4]; 3];
        assert_eq!(bareiss_rank(&zero), 0);
        assert_eq!(minor_rank(&zero), 0);
        let num = certified_ball_rank(&to_values(&zero), 64).unwrap();
        assert_eq!(num.rank, 0);
        assert!(num.certified);
        let id: Vec<Vec<BigRational>> = (0..5)
            .map(|i| (0..5).map(|j| rat((i == j) as i64)).collect())
            .collect();
        assert_eq!(bareiss_rank(&id), 5);
        assert_eq!(minor_rank(&id), 5);
    }

    #[test]
    fn fractions_are_cleared_per_row() {
        // rank 1 with awkward denominators
        let m = vec![
            vec![parse_rational("1/3").unwrap(), parse_rational("2/5").unwrap()],
            vec![parse_rational("5/6").unwrap(), parse_rational("1/1").unwrap()],
        ];
        // det = 1/3 - 2/5*5/6 = 1/3 - 1/3 = 0
        assert_eq!(bareiss_rank(&m), 1);
        assert_eq!(minor_rank(&m), 1);
    }

    fn sqrt2() -> AlgebraicValue {
        AlgebraicValue::RootOf(Arc::new(RootSpec {
            coeffs: vec![
                parse_rational("-2").unwrap(),
                parse_rational("0").unwrap(),
                parse_rational("1").unwrap(),
            ],
            seed_re: parse_rational("141/100").unwrap(),
            seed_im: parse_rational("0").unwrap(),
            radius: parse_rational("1/10").unwrap(),
        }))
    }

    #[test]
    fn algebraic_rank_deficiency_is_detected() {
        // [[sqrt2, 1], [2, sqrt2]] has rank 1: the second row is sqrt2 times
        // the first.  Only the ball engine can see this.
        let s = sqrt2();
        let m = vec![
            vec![s.clone(), AlgebraicValue::Rational(rat(1))],
            vec![AlgebraicValue::Rational(rat(2)), s.clone()],
        ];
        let res = certified_ball_rank(&m, 128).unwrap();
        assert_eq!(res.rank, 1);
        assert!(res.certified);
        // perturbing one entry restores full rank
        let m2 = vec![
            vec![s.clone(), AlgebraicValue::Rational(rat(1))],
            vec![AlgebraicValue::Rational(rat(2)), AlgebraicValue::Rational(rat(3))],
        ];
        let res2 = certified_ball_rank(&m2, 128).unwrap();
        assert_eq!(res2.rank, 2);
        assert!(res2.certified);
    }

    #[test]
    fn rank_result_serialization() {
        let r = RankResult {
            rank: 55,
            backend: RankBackend::Exact,
            certified: true,
            precision: None,
        };
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["rank"], 55);
        assert_eq!(json["backend"], "exact");
        assert_eq!(json["certified"], true);
        assert!(json.get("precision").is_none());
        let n = RankResult {
            rank: 3,
            backend: RankBackend::Numeric,
            certified: false,
            precision: Some(256),
        };
        let json = serde_json::to_value(&n).unwrap();
        assert_eq!(json["precision"], 256);
    }

}
