//! Recognition of A-D-E (Du Val) singular points on projective hypersurfaces.
//!
//! The entry points are [`is_singular`] (is a given point a singular point of
//! the surface), [`classify`] (which A-D-E type is it), and [`adapted_frame`]
//! (a tangent direction spanning the degenerate plane of the Hessian, needed
//! to write down tangency conditions for chains of double points).
//!
//! Classification works on the local germ: the surface equation is
//! dehomogenized in a chart where the point has a certifiably nonzero
//! coordinate, translated so the point sits at the origin, and truncated to a
//! fixed order.  The quadratic part is diagonalized by congruence, the square
//! variables are split off by iterated shears, and the residual series in the
//! kernel variables is matched against the A-D-E normal forms:
//!
//! * corank 0 — an ordinary node `A1`;
//! * corank 1 — residual `u^s` gives `A_{s-1}`;
//! * corank 2 — the cubic term decides: three distinct roots give `D4`, a
//!   double root leads into the `D_m` chain, a triple root into `E6`, `E7`,
//!   `E8`.
//!
//! Every branching decision is a zero test on a coefficient.  With rational
//! data the tests are exact; with algebraic point coordinates they run on
//! certified ball enclosures at two precisions (see
//! [`scalar::LocalCoef`]), so a `NonZero` verdict is always certified and
//! only `Zero` verdicts are heuristic.

pub mod classify;
pub mod scalar;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numbers::{is_zero_heuristic, AlgebraicValue, NumError, ZeroStatus};
use crate::poly::{MultiPoly, ProjectivePoint};

pub use classify::{classify, ClassifyOptions, Classification, GermSeries};
pub use scalar::LocalCoef;

/// Errors arising while probing or classifying a singular point.
#[derive(Debug, thiserror::Error)]
pub enum SingError {
    /// The point does not lie on the surface, or the gradient does not vanish.
    #[error("the point is not a singular point of the surface")]
    NotSingular,
    /// The quadratic part of the germ vanishes identically, so the point has
    /// multiplicity at least three and is not a double point.
    #[error("the quadratic part of the germ vanishes; not a double point")]
    NotDoublePoint,
    /// The truncation order ran out before the type could be decided.
    #[error("series truncation order too small to determine the singularity type")]
    TruncationInsufficient,
    /// The quadratic part has corank three or more (or a degenerate cubic),
    /// which is outside the A-D-E range.
    #[error("the germ is degenerate beyond the A-D-E range")]
    CorankTooHigh,
    /// A zero test could not be decided at the working precision.
    #[error("zero test undecided at the working precision")]
    Undecided,
    /// The Hessian kernel at the point does not have the expected dimension.
    #[error("hessian kernel has dimension {0}, expected 2")]
    KernelUnexpected(usize),
    /// No lift rule is available for this branch type and cover degree.
    #[error("no lift rule for branch type {ade} under a degree-{n} cover")]
    UnsupportedLift {
        /// Type of the branch-surface singularity.
        ade: ADEType,
        /// Degree of the cyclic cover.
        n: u32,
    },
    /// An underlying numeric evaluation failed.
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A Du Val singularity type: `A_m` (m >= 1), `D_m` (m >= 4), or `E_m`
/// (m in 6..=8).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ADEType {
    /// `A_m`: normal form `x1^(m+1) + x2^2 + x3^2`.
    A(u32),
    /// `D_m`: normal form `x1 (x2^2 + x1^(m-2)) + x3^2`.
    D(u32),
    /// `E_m`: the three exceptional normal forms for m = 6, 7, 8.
    E(u32),
}

impl ADEType {
    /// Checks the subscript range for the series.
    pub fn is_valid(self) -> bool {
        match self {
            ADEType::A(m) => m >= 1,
            ADEType::D(m) => m >= 4,
            ADEType::E(m) => (6..=8).contains(&m),
        }
    }

    /// The subscript, which equals the Milnor number of the normal form.
    pub fn milnor_number(self) -> u32 {
        match self {
            ADEType::A(m) | ADEType::D(m) | ADEType::E(m) => m,
        }
    }

    /// Number of infinitely-near singular points that show up when the
    /// double point is resolved by blowing up: `A_m` has `ceil(m/2) - 1`,
    /// `D_m` has `2*floor(m/2) - 1`, and `E6`, `E7`, `E8` have 3, 6, 7.
    pub fn near_point_count(self) -> u32 {
        match self {
            ADEType::A(m) => m.div_ceil(2) - 1,
            ADEType::D(m) => 2 * (m / 2) - 1,
            ADEType::E(6) => 3,
            ADEType::E(7) => 6,
            ADEType::E(8) => 7,
            ADEType::E(_) => panic!("invalid E subscript"),
        }
    }

    /// Number of linear conditions the point imposes in a defect matrix:
    /// the point itself plus its infinitely-near points.
    pub fn condition_count(self) -> u32 {
        1 + self.near_point_count()
    }

    /// Short label such as `"A3"`, `"D4"`, `"E6"`.
    pub fn label(self) -> String {
        match self {
            ADEType::A(m) => format!("A{m}"),
            ADEType::D(m) => format!("D{m}"),
            ADEType::E(m) => format!("E{m}"),
        }
    }

    /// Parses a label like `"A3"`; returns `None` for malformed or
    /// out-of-range subscripts.
    pub fn parse(s: &str) -> Option<Self> {
        let (kind, num) = s.split_at(1);
        let m: u32 = num.parse().ok()?;
        let t = match kind {
            "A" | "a" => ADEType::A(m),
            "D" | "d" => ADEType::D(m),
            "E" | "e" => ADEType::E(m),
            _ => return None,
        };
        t.is_valid().then_some(t)
    }
}

impl fmt::Display for ADEType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for ADEType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for ADEType {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ADEType::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid A-D-E label `{s}`")))
    }
}

/// Type of a singular point of the cover, given the type of the branch
/// surface point and the cover degree `n`.
///
/// The supported rules: every Du Val type is preserved by a double cover;
/// a node `A1` lifts to `A_{n-1}` under a degree-`n` cover; a cusp `A2`
/// lifts to `D4` under a triple cover.  `n = 1` is the identity.
pub fn lift_type(branch: ADEType, n: u32) -> Result<ADEType, SingError> {
    if !branch.is_valid() || n == 0 {
        return Err(SingError::UnsupportedLift { ade: branch, n });
    }
    match (branch, n) {
        (t, 1) => Ok(t),
        (t, 2) => Ok(t),
        (ADEType::A(1), n) => Ok(ADEType::A(n - 1)),
        (ADEType::A(2), 3) => Ok(ADEType::D(4)),
        (t, n) => Err(SingError::UnsupportedLift { ade: t, n }),
    }
}

/// Breakdown of the count `mu` = actual singular points + infinitely-near
/// points for an inventory of singularities of the resolved cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuCount {
    /// Number of actual singular points.
    pub points: usize,
    /// Number of infinitely-near points across all of them.
    pub near_points: usize,
    /// `points + near_points`; this is the `mu` entering the Hodge formulas.
    pub total: usize,
}

/// Counts actual plus infinitely-near singular points over an inventory.
pub fn mu_and_near_points<I: IntoIterator<Item = ADEType>>(types: I) -> MuCount {
    let mut points = 0usize;
    let mut near = 0usize;
    for t in types {
        points += 1;
        near += t.near_point_count() as usize;
    }
    MuCount {
        points,
        near_points: near,
        total: points + near,
    }
}

/// Tallies an inventory into counts per type label, useful for reports.
pub fn inventory_by_type<I: IntoIterator<Item = ADEType>>(types: I) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for t in types {
        *out.entry(t.label()).or_insert(0) += 1;
    }
    out
}

/// How the tangency directions attached to a singular point were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    /// `v1` spans, together with the point itself, the kernel of the Hessian.
    #[default]
    HessianKernel,
    /// Directions supplied externally (general `D`/`E` condition frames).
    GeneralLinear,
}

/// A classified singular point together with its tangency frame.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SingularPointRecord {
    /// Homogeneous coordinates of the point.
    pub point: ProjectivePoint,
    /// The A-D-E type of the branch-surface germ at the point.
    #[serde(rename = "type")]
    pub ade: ADEType,
    /// Primary tangency direction (the `x1`-axis of the normal form).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v1: Option<Vec<AlgebraicValue>>,
    /// Secondary direction (the `x2`-axis), only needed for `D`/`E` frames.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v2: Option<Vec<AlgebraicValue>>,
    /// Provenance of `v1`/`v2`.
    #[serde(default)]
    pub frame_kind: FrameKind,
}

/// A tangency frame at a singular point.
#[derive(Clone, Debug)]
pub struct Frame {
    /// Primary direction; spans the Hessian kernel together with the point.
    pub v1: Vec<AlgebraicValue>,
    /// Secondary direction, when the type needs one.
    pub v2: Option<Vec<AlgebraicValue>>,
    /// How the frame was obtained.
    pub kind: FrameKind,
}

fn status_of(v: &AlgebraicValue, precision: u32) -> Result<ZeroStatus, SingError> {
    Ok(is_zero_heuristic(v, precision)?)
}

/// Decides whether `p` is a singular point of the hypersurface `f = 0`:
/// the value and every partial derivative must vanish at `p`.
///
/// `Ok(false)` is certified (some value is provably nonzero); `Ok(true)`
/// is exact for rational data and heuristic for ball-evaluated data.
pub fn is_singular(f: &MultiPoly, p: &ProjectivePoint, precision: u32) -> Result<bool, SingError> {
    let mut values = vec![f.evaluate(&p.coords)];
    for i in 0..f.nvars() {
        values.push(f.derive(i).evaluate(&p.coords));
    }
    let mut all_zero = true;
    for v in &values {
        match status_of(v, precision)? {
            ZeroStatus::NonZero => return Ok(false),
            ZeroStatus::Zero => {}
            ZeroStatus::Undecided => all_zero = false,
        }
    }
    if all_zero {
        Ok(true)
    } else {
        Err(SingError::Undecided)
    }
}

/// Determinant of the submatrix on `rows` x `cols` by cofactor expansion.
///
/// The recipe depth is bounded by the submatrix size.  That matters: these
/// determinants end up in stored frames and serialized reports, and an
/// elimination history would nest pivots into expressions too deep for
/// ordinary JSON parsers to read back.
fn symbolic_det(m: &[Vec<AlgebraicValue>], rows: &[usize], cols: &[usize]) -> AlgebraicValue {
    match rows.len() {
        0 => AlgebraicValue::one(),
        1 => m[rows[0]][cols[0]].clone(),
        _ => {
            let mut acc: Option<AlgebraicValue> = None;
            for (j, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(jj, _)| jj != j)
                    .map(|(_, &cc)| cc)
                    .collect();
                let term = m[rows[0]][c].mul(&symbolic_det(m, &rows[1..], &rest));
                acc = Some(match (acc, j % 2 == 0) {
                    (None, true) => term,
                    (None, false) => term.neg(),
                    (Some(a), true) => a.add(&term),
                    (Some(a), false) => a.sub(&term),
                });
            }
            acc.expect("nonempty cofactor expansion")
        }
    }
}

/// Kernel basis of a small symbolic matrix; returns the free columns and
/// one basis vector per free column (unit there, zero at the other frees).
///
/// The rank witness grows one row and column at a time, certified by the
/// nonzero status of the bordered determinant — when an invertible `k x k`
/// witness exists and the rank exceeds `k`, some one-step extension is again
/// invertible, so stalling at all-zero borders certifies the rank.  Cramer's
/// rule on the witness then solves for the kernel vectors, keeping every
/// component a single quotient of cofactor determinants.
fn hessian_kernel(
    m: Vec<Vec<AlgebraicValue>>,
    precision: u32,
) -> Result<(Vec<usize>, Vec<Vec<AlgebraicValue>>), SingError> {
    let n = m.len();
    let mut rows: Vec<usize> = Vec::new();
    let mut cols: Vec<usize> = Vec::new();
    loop {
        let mut grown = false;
        let mut undecided = false;
        'search: for r in 0..n {
            if rows.contains(&r) {
                continue;
            }
            for c in 0..n {
                if cols.contains(&c) {
                    continue;
                }
                rows.push(r);
                cols.push(c);
                match status_of(&symbolic_det(&m, &rows, &cols), precision)? {
                    ZeroStatus::NonZero => {
                        grown = true;
                        break 'search;
                    }
                    ZeroStatus::Zero => {}
                    ZeroStatus::Undecided => undecided = true,
                }
                rows.pop();
                cols.pop();
            }
        }
        if !grown {
            if undecided {
                // Some border might still be nonzero; the rank is not
                // certified either way.
                return Err(SingError::Undecided);
            }
            break;
        }
    }
    let witness = symbolic_det(&m, &rows, &cols);
    let free_cols: Vec<usize> = (0..n).filter(|c| !cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![AlgebraicValue::zero(); n];
        v[fc] = AlgebraicValue::one();
        // Solve  m[rows, cols] * x = -m[rows, fc]  by Cramer's rule.
        for (j, &pc) in cols.iter().enumerate() {
            let mut replaced = cols.clone();
            replaced[j] = fc;
            let numer = symbolic_det(&m, &rows, &replaced);
            v[pc] = numer.div(&witness)?.neg();
        }
        basis.push(v);
    }
    Ok((free_cols, basis))
}

/// Computes the adapted tangency frame at a singular point of type `A_m`
/// with `m >= 2`: a direction `v1` that spans, together with the point
/// itself, the two-dimensional kernel of the Hessian of `f` at the point.
///
/// The point is always in the kernel (Euler's identity), so the kernel being
/// two-dimensional pins `v1` down up to scaling and adding multiples of the
/// point — and the tangency conditions built from `v1` are invariant under
/// exactly those changes.
pub fn adapted_frame(f: &MultiPoly, p: &ProjectivePoint, precision: u32) -> Result<Frame, SingError> {
    let h = f.hessian_at(&p.coords);
    let (free_cols, basis) = hessian_kernel(h, precision)?;
    if basis.len() != 2 {
        return Err(SingError::KernelUnexpected(basis.len()));
    }
    // p = p[f0] * basis[0] + p[f1] * basis[1]; pick the basis vector that is
    // guaranteed independent of p.
    let comp0 = &p.coords[free_cols[0]];
    let v1 = match status_of(comp0, precision)? {
        ZeroStatus::NonZero => basis[1].clone(),
        ZeroStatus::Zero => basis[0].clone(),
        ZeroStatus::Undecided => return Err(SingError::Undecided),
    };
    Ok(Frame {
        v1,
        v2: None,
        kind: FrameKind::HessianKernel,
    })
}
