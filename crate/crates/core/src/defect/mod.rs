//! Condition matrices and defects.
//!
//! An A-D-E point on a surface or threefold imposes linear conditions on the
//! polynomials of a fixed degree: vanishing at the point, plus derivative
//! conditions along the tangency directions of its normal form.  This module
//! builds those matrices (rows = monomial basis, columns = one condition),
//! computes their ranks with the engines in [`rank`], and evaluates the
//! defect formulas for cyclic covers from the rank deficits.

pub mod rank;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::numbers::{
    eval_value, is_zero_heuristic, AlgebraicValue, NumError, ZeroStatus, DEFAULT_PRECISION,
};
use crate::poly::{monomial_basis, Expo, MultiPoly, Poly, ProjectivePoint};
use crate::singular::{lift_type, mu_and_near_points, ADEType, SingError, SingularPointRecord};

pub use rank::{bareiss_rank, certified_ball_rank, minor_rank, RankBackend, RankResult};

/// Errors from matrix construction, rank computation and defect evaluation.
#[derive(Debug, thiserror::Error)]
pub enum DefectError {
    /// A point's coordinate dimension disagrees with the matrix's.
    #[error("point {0} has an inconsistent coordinate dimension")]
    DimensionMismatch(usize),
    /// The chosen specialization needs a frame vector the record lacks.
    #[error("record {point}: specialization needs a {what} frame vector")]
    MissingFrame { point: usize, what: &'static str },
    /// A frame direction proportional to the point itself: its derivative
    /// column would be a multiple of the value column (Euler's relation)
    /// instead of an independent condition.
    #[error("record {point}: frame direction is proportional to the point")]
    DegenerateDirection { point: usize },
    /// The record's type is outside the chosen specialization's table.
    #[error("specialization {spec:?} does not apply to {ade} records")]
    UnsupportedSpecialization { spec: Specialization, ade: ADEType },
    /// The exact backend was requested for a matrix with irrational entries.
    #[error("exact rank backend requires rational matrix entries")]
    ExactUnavailable,
    /// The ball elimination could not certify a rank after precision
    /// escalation; the best estimate is carried for partial reporting.
    #[error("rank undecided: best estimate {} at {:?} bits", .0.rank, .0.precision)]
    RankUndecided(RankResult),
    /// The cover degree must divide the surface degree.
    #[error("cover degree {n} must divide the surface degree {d}")]
    DivisibilityError { d: u32, n: u32 },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Sing(#[from] SingError),
}

/// What a single matrix column asserts about a section `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionTag {
    /// `H(P) = 0`.
    Value,
    /// `(H|_L)^(order)(P) = 0` along the line through `P` with direction `v1`.
    DerivV1 { order: u32 },
    /// First derivative along the secondary direction `v2` (D and E points).
    DerivV2,
    /// First derivative along the last coordinate axis (cover-fiber
    /// direction for hypersurface families in `P_4`).
    DerivFiber,
}

impl ConditionTag {
    /// Short label used in matrix dumps.
    fn label(&self) -> String {
        match self {
            ConditionTag::Value => "value".into(),
            ConditionTag::DerivV1 { order } => format!("d{order}v1"),
            ConditionTag::DerivV2 => "dv2".into(),
            ConditionTag::DerivFiber => "dfiber".into(),
        }
    }
}

/// Column identity: which point, which condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    /// Index into the point/record list the matrix was built from.
    pub point: usize,
    pub tag: ConditionTag,
}

/// Per-type column plans for `build_condition_matrix`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Specialization {
    /// Cusps on a triple-cover branch surface: value + first derivative
    /// along the Hessian-kernel direction.
    TripleCusp,
    /// `A_m` points on a double-cover branch: value + the derivative chain
    /// along the Hessian-kernel line, orders `1..=ceil(m/2)-1`.
    DoubleAChain,
    /// `A_3` points of a quintic threefold: value + derivative along the
    /// last coordinate axis, over the degree-5 basis in 5 variables.
    QuinticA3,
    /// The full condition table with user-supplied frames: `A_m` as the
    /// chain above; `D_m` adds a `v2` derivative and runs the chain to
    /// `floor(m/2)-1`; `E_m` adds `v2` and runs the chain to `m-5`.
    GeneralLinearFrame,
}

/// A condition matrix over the monomial basis of a fixed degree.
///
/// Rows are indexed by `monomial_basis(nvars, degree)`; columns are generated
/// per point and stored column-major, keyed by [`ColumnSpec`].
#[derive(Clone, Debug)]
pub struct ConditionMatrix {
    nvars: usize,
    degree: u32,
    rows: Vec<Expo>,
    columns: Vec<ColumnSpec>,
    /// `entries[col][row]`.
    entries: Vec<Vec<AlgebraicValue>>,
}

/// Debuggable matrix snapshot: decimal centers as CSV plus a JSON sidecar
/// with exactness flags and ball radii.
#[derive(Clone, Debug)]
pub struct MatrixDump {
    pub csv: String,
    pub sidecar: serde_json::Value,
}

impl ConditionMatrix {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.columns.len()
    }

    /// Monomial exponents indexing the rows, in graded-lex order.
    pub fn rows(&self) -> &[Expo] {
        &self.rows
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    pub fn entry(&self, row: usize, col: usize) -> &AlgebraicValue {
        &self.entries[col][row]
    }

    /// Row-major rational copy, `Some` only when every entry is rational.
    pub fn rational_rows(&self) -> Option<Vec<Vec<BigRational>>> {
        let mut out = Vec::with_capacity(self.row_count());
        for i in 0..self.row_count() {
            let mut row = Vec::with_capacity(self.col_count());
            for col in &self.entries {
                row.push(crate::numbers::exact_rational(&col[i])?);
            }
            out.push(row);
        }
        Some(out)
    }

    fn value_rows(&self) -> Vec<Vec<AlgebraicValue>> {
        (0..self.row_count())
            .map(|i| self.entries.iter().map(|col| col[i].clone()).collect())
            .collect()
    }

    /// Rank under the requested backend.
    ///
    /// `Auto` runs the exact engine whenever the matrix is rational and the
    /// certified ball engine otherwise.  A numeric rank that stays
    /// uncertified after precision escalation is an error
    /// ([`DefectError::RankUndecided`]) carrying the best estimate.
    pub fn rank(&self, backend: RankBackend, precision: u32) -> Result<RankResult, DefectError> {
        if self.row_count() == 0 || self.col_count() == 0 {
            return Ok(RankResult::exact(0));
        }
        match backend {
            RankBackend::Exact => match self.rational_rows() {
                Some(m) => Ok(RankResult::exact(bareiss_rank(&m))),
                None => Err(DefectError::ExactUnavailable),
            },
            RankBackend::Auto => match self.rational_rows() {
                Some(m) => Ok(RankResult::exact(bareiss_rank(&m))),
                None => self.numeric_rank(precision),
            },
            RankBackend::Numeric => self.numeric_rank(precision),
        }
    }

    fn numeric_rank(&self, precision: u32) -> Result<RankResult, DefectError> {
        let res = certified_ball_rank(&self.value_rows(), precision)?;
        if res.certified {
            Ok(res)
        } else {
            Err(DefectError::RankUndecided(res))
        }
    }

    /// CSV of decimal centers plus a JSON sidecar of radii and exactness.
    pub fn dump(&self, precision: u32) -> Result<MatrixDump, NumError> {
        let mut csv = String::from("monomial");
        for spec in &self.columns {
            csv.push_str(&format!(",p{}:{}", spec.point, spec.tag.label()));
        }
        csv.push('\n');
        let mut exact_flags: Vec<Vec<bool>> = Vec::with_capacity(self.row_count());
        let mut radii: Vec<Vec<String>> = Vec::with_capacity(self.row_count());
        for (i, e) in self.rows.iter().enumerate() {
            let mono: MultiPoly = Poly::monomial(self.nvars, *e, AlgebraicValue::one());
            csv.push_str(&mono.to_string());
            let mut row_exact = Vec::with_capacity(self.col_count());
            let mut row_rad = Vec::with_capacity(self.col_count());
            for col in &self.entries {
                let v = &col[i];
                let b = eval_value(v, precision)?;
                csv.push(',');
                csv.push_str(&b.center_string(12));
                row_exact.push(crate::numbers::exact_rational(v).is_some());
                row_rad.push(b.rad.to_decimal_string(4));
            }
            csv.push('\n');
            exact_flags.push(row_exact);
            radii.push(row_rad);
        }
        let sidecar = serde_json::json!({
            "rows": self.row_count(),
            "cols": self.col_count(),
            "nvars": self.nvars,
            "degree": self.degree,
            "precision": precision,
            "columns": self.columns,
            "exact": exact_flags,
            "radius": radii,
        });
        Ok(MatrixDump { csv, sidecar })
    }
}

/// `k!` as a rational scalar.
fn factorial(k: u32) -> BigRational {
    let mut acc = BigInt::from(1u32);
    for i in 2..=k {
        acc *= i;
    }
    BigRational::from_integer(acc)
}

/// One point's contribution to a matrix: its coordinates, the frame
/// directions available, and the conditions to emit.
struct PointPlan<'a> {
    index: usize,
    coords: &'a [AlgebraicValue],
    v1: Option<&'a [AlgebraicValue]>,
    v2: Option<&'a [AlgebraicValue]>,
    tags: Vec<ConditionTag>,
}

/// Rejects direction vectors proportional to the point (all 2x2 minors of
/// the pair certify as zero).  Undecided minors are accepted: the direction
/// cannot be proven degenerate.
fn check_direction(
    index: usize,
    p: &[AlgebraicValue],
    v: &[AlgebraicValue],
) -> Result<(), DefectError> {
    if v.len() != p.len() {
        return Err(DefectError::DimensionMismatch(index));
    }
    let mut all_zero = true;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let minor = p[i].mul(&v[j]).sub(&p[j].mul(&v[i]));
            match is_zero_heuristic(&minor, DEFAULT_PRECISION)? {
                ZeroStatus::NonZero => return Ok(()),
                ZeroStatus::Zero => {}
                ZeroStatus::Undecided => all_zero = false,
            }
        }
    }
    if all_zero {
        Err(DefectError::DegenerateDirection { point: index })
    } else {
        Ok(())
    }
}

/// Ascending restriction coefficients of every row monomial along one line:
/// `block[row][k]` is the `t^k` coefficient of `row(P + t v)`.
fn restriction_block(
    row_polys: &[MultiPoly],
    p: &[AlgebraicValue],
    v: &[AlgebraicValue],
    max_order: u32,
) -> Vec<Vec<AlgebraicValue>> {
    row_polys
        .iter()
        .map(|m| {
            let mut c = m.restrict_to_line(p, v, Some(max_order as usize));
            c.resize(max_order as usize + 1, AlgebraicValue::zero());
            c
        })
        .collect()
}

/// Shared assembly: emits the planned columns point by point, computing each
/// needed line restriction once per (point, direction) pair.
fn assemble(
    nvars: usize,
    degree: u32,
    plans: &[PointPlan<'_>],
) -> Result<ConditionMatrix, DefectError> {
    let rows = monomial_basis(nvars, degree);
    let row_polys: Vec<MultiPoly> = rows
        .iter()
        .map(|e| Poly::monomial(nvars, *e, AlgebraicValue::one()))
        .collect();
    let mut columns = Vec::new();
    let mut entries: Vec<Vec<AlgebraicValue>> = Vec::new();
    for plan in plans {
        if plan.coords.len() != nvars {
            return Err(DefectError::DimensionMismatch(plan.index));
        }
        let v1_max = plan
            .tags
            .iter()
            .filter_map(|t| match t {
                ConditionTag::DerivV1 { order } => Some(*order),
                _ => None,
            })
            .max();
        let v1_block = match v1_max {
            Some(m) => {
                let dir = plan.v1.ok_or(DefectError::MissingFrame {
                    point: plan.index,
                    what: "v1",
                })?;
                check_direction(plan.index, plan.coords, dir)?;
                Some(restriction_block(&row_polys, plan.coords, dir, m))
            }
            None => None,
        };
        let v2_block = if plan.tags.contains(&ConditionTag::DerivV2) {
            let dir = plan.v2.ok_or(DefectError::MissingFrame {
                point: plan.index,
                what: "v2",
            })?;
            check_direction(plan.index, plan.coords, dir)?;
            Some(restriction_block(&row_polys, plan.coords, dir, 1))
        } else {
            None
        };
        let fiber_block = if plan.tags.contains(&ConditionTag::DerivFiber) {
            let mut dir = vec![AlgebraicValue::zero(); nvars];
            dir[nvars - 1] = AlgebraicValue::one();
            check_direction(plan.index, plan.coords, &dir)?;
            Some(restriction_block(&row_polys, plan.coords, &dir, 1))
        } else {
            None
        };
        // Value entries come free with any computed block (its order-0
        // coefficients); only value-only points evaluate directly.
        let values: Vec<AlgebraicValue> = if let Some(b) = &v1_block {
            b.iter().map(|r| r[0].clone()).collect()
        } else if let Some(b) = &v2_block {
            b.iter().map(|r| r[0].clone()).collect()
        } else if let Some(b) = &fiber_block {
            b.iter().map(|r| r[0].clone()).collect()
        } else {
            row_polys.iter().map(|m| m.evaluate(plan.coords)).collect()
        };
        for tag in &plan.tags {
            let col: Vec<AlgebraicValue> = match tag {
                ConditionTag::Value => values.clone(),
                ConditionTag::DerivV1 { order } => {
                    let block = v1_block.as_ref().expect("v1 block was computed");
                    if *order <= 1 {
                        block.iter().map(|r| r[*order as usize].clone()).collect()
                    } else {
                        // The k-th derivative is k! times the t^k coefficient.
                        let f = AlgebraicValue::from_rational(factorial(*order));
                        block
                            .iter()
                            .map(|r| r[*order as usize].mul(&f))
                            .collect()
                    }
                }
                ConditionTag::DerivV2 => v2_block
                    .as_ref()
                    .expect("v2 block was computed")
                    .iter()
                    .map(|r| r[1].clone())
                    .collect(),
                ConditionTag::DerivFiber => fiber_block
                    .as_ref()
                    .expect("fiber block was computed")
                    .iter()
                    .map(|r| r[1].clone())
                    .collect(),
            };
            columns.push(ColumnSpec {
                point: plan.index,
                tag: *tag,
            });
            entries.push(col);
        }
    }
    Ok(ConditionMatrix {
        nvars,
        degree,
        rows,
        columns,
        entries,
    })
}

/// Matrix with one value-column per point: sections of the given degree in
/// the ideal of the point set.
///
/// With no points the basis dimension defaults to 4 variables.
pub fn build_vanishing_matrix(
    degree: u32,
    points: &[ProjectivePoint],
) -> Result<ConditionMatrix, DefectError> {
    let nvars = points.first().map(|p| p.coords.len()).unwrap_or(4);
    let plans: Vec<PointPlan<'_>> = points
        .iter()
        .enumerate()
        .map(|(i, p)| PointPlan {
            index: i,
            coords: &p.coords,
            v1: None,
            v2: None,
            tags: vec![ConditionTag::Value],
        })
        .collect();
    assemble(nvars, degree, &plans)
}

/// Column plan for one record under a specialization.
fn condition_tags(ade: ADEType, spec: Specialization) -> Result<Vec<ConditionTag>, DefectError> {
    let chain = |upto: u32| (1..=upto).map(|order| ConditionTag::DerivV1 { order });
    match (spec, ade) {
        (Specialization::TripleCusp, ADEType::A(2)) => Ok(vec![
            ConditionTag::Value,
            ConditionTag::DerivV1 { order: 1 },
        ]),
        (Specialization::DoubleAChain, ADEType::A(m)) => {
            let mut tags = vec![ConditionTag::Value];
            tags.extend(chain(m.div_ceil(2) - 1));
            Ok(tags)
        }
        (Specialization::QuinticA3, ADEType::A(3)) => {
            Ok(vec![ConditionTag::Value, ConditionTag::DerivFiber])
        }
        (Specialization::GeneralLinearFrame, ADEType::A(m)) => {
            let mut tags = vec![ConditionTag::Value];
            tags.extend(chain(m.div_ceil(2) - 1));
            Ok(tags)
        }
        (Specialization::GeneralLinearFrame, ADEType::D(m)) => {
            let mut tags = vec![ConditionTag::Value, ConditionTag::DerivV2];
            tags.extend(chain(m / 2 - 1));
            Ok(tags)
        }
        (Specialization::GeneralLinearFrame, ADEType::E(m)) => {
            let mut tags = vec![ConditionTag::Value, ConditionTag::DerivV2];
            tags.extend(chain(m - 5));
            Ok(tags)
        }
        (spec, ade) => Err(DefectError::UnsupportedSpecialization { spec, ade }),
    }
}

/// Condition matrix over the records under the chosen specialization.
///
/// With no records the basis dimension defaults to 4 variables (5 for the
/// quintic specialization).
pub fn build_condition_matrix(
    degree: u32,
    records: &[SingularPointRecord],
    spec: Specialization,
) -> Result<ConditionMatrix, DefectError> {
    let nvars = records
        .first()
        .map(|r| r.point.coords.len())
        .unwrap_or(match spec {
            Specialization::QuinticA3 => 5,
            _ => 4,
        });
    let mut plans = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        plans.push(PointPlan {
            index: i,
            coords: &r.point.coords,
            v1: r.v1.as_deref(),
            v2: r.v2.as_deref(),
            tags: condition_tags(r.ade, spec)?,
        });
    }
    assemble(nvars, degree, &plans)
}

/// One linear system entering a defect formula.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DefectComponent {
    /// Degree of the system; negative degrees contribute an empty matrix.
    pub degree: i64,
    pub rows: usize,
    pub cols: usize,
    pub rank: RankResult,
    /// Dimension of the subspace satisfying the conditions: rows - rank.
    pub h0_ideal: usize,
}

/// A defect value together with the intermediate dimensions behind it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DefectResult {
    pub delta: i64,
    /// Singular points plus infinitely near ones on the covering threefold.
    pub mu: usize,
    /// Which formula produced `delta`.
    pub formula: String,
    pub components: Vec<DefectComponent>,
    /// True when every rank that entered the formula was certified.
    pub certified: bool,
}

fn component_for(
    matrix: &ConditionMatrix,
    degree: i64,
    backend: RankBackend,
    precision: u32,
) -> Result<DefectComponent, DefectError> {
    let rank = matrix.rank(backend, precision)?;
    Ok(DefectComponent {
        degree,
        rows: matrix.row_count(),
        cols: matrix.col_count(),
        h0_ideal: matrix.row_count() - rank.rank,
        rank,
    })
}

fn finish(
    mu: usize,
    formula: &str,
    components: Vec<DefectComponent>,
) -> Result<DefectResult, DefectError> {
    let delta = mu as i64 - components.iter().map(|c| c.rank.rank as i64).sum::<i64>();
    if delta < 0 {
        return Err(DefectError::BadInput(format!(
            "negative defect {delta}: the conditions are not consistent with the claimed types"
        )));
    }
    let certified = components.iter().all(|c| c.rank.certified);
    Ok(DefectResult {
        delta,
        mu,
        formula: formula.into(),
        components,
        certified,
    })
}

/// Defect of a triple cover branched along a degree-`d` surface whose only
/// singularities are the given cusps: `mu` minus the ranks of the
/// degree-`(4d/3 - 4)` vanishing matrix and the degree-`(5d/3 - 4)`
/// cusp-condition matrix.
pub fn defect_triple(
    d: u32,
    records: &[SingularPointRecord],
    backend: RankBackend,
    precision: u32,
) -> Result<DefectResult, DefectError> {
    if d % 3 != 0 {
        return Err(DefectError::DivisibilityError { d, n: 3 });
    }
    if d < 6 {
        return Err(DefectError::BadInput(format!(
            "triple-cover branch degree must be at least 6, got {d}"
        )));
    }
    let points: Vec<ProjectivePoint> = records.iter().map(|r| r.point.clone()).collect();
    let lifted = records
        .iter()
        .map(|r| lift_type(r.ade, 3))
        .collect::<Result<Vec<_>, _>>()?;
    let mu = mu_and_near_points(lifted).total;
    let deg_low = (4 * d / 3 - 4) as i64;
    let deg_high = (5 * d / 3 - 4) as i64;
    let m_low = build_vanishing_matrix(deg_low as u32, &points)?;
    let m_high = build_condition_matrix(deg_high as u32, records, Specialization::TripleCusp)?;
    let components = vec![
        component_for(&m_low, deg_low, backend, precision)?,
        component_for(&m_high, deg_high, backend, precision)?,
    ];
    finish(mu, "triple", components)
}

/// Defect of a double cover branched along a degree-`d` surface with Du Val
/// singularities: `mu` minus the rank of the degree-`(3d/2 - 4)` condition
/// matrix (value columns for `A_1`, derivative chains for deeper points).
pub fn defect_double(
    d: u32,
    records: &[SingularPointRecord],
    backend: RankBackend,
    precision: u32,
) -> Result<DefectResult, DefectError> {
    if d % 2 != 0 {
        return Err(DefectError::DivisibilityError { d, n: 2 });
    }
    if d < 4 {
        return Err(DefectError::BadInput(format!(
            "double-cover branch degree must be at least 4, got {d}"
        )));
    }
    let lifted = records
        .iter()
        .map(|r| lift_type(r.ade, 2))
        .collect::<Result<Vec<_>, _>>()?;
    let mu = mu_and_near_points(lifted).total;
    let deg = (3 * d / 2 - 4) as i64;
    let m = build_condition_matrix(deg as u32, records, Specialization::GeneralLinearFrame)?;
    let components = vec![component_for(&m, deg, backend, precision)?];
    finish(mu, "double", components)
}

/// Defect of an `n`-fold cyclic cover branched along a degree-`d` surface
/// with only ordinary nodes: `ceil((n-1)/2) * #nodes` minus the ranks of the
/// vanishing matrices at degrees `d + j*d/n - 4` for `j = ceil(n/2) .. n-1`.
pub fn defect_nfold(
    d: u32,
    n: u32,
    nodes: &[ProjectivePoint],
    backend: RankBackend,
    precision: u32,
) -> Result<DefectResult, DefectError> {
    if n < 2 {
        return Err(DefectError::BadInput(format!(
            "cover degree must be at least 2, got {n}"
        )));
    }
    if d % n != 0 {
        return Err(DefectError::DivisibilityError { d, n });
    }
    if d <= n {
        return Err(DefectError::BadInput(format!(
            "branch degree {d} must exceed the cover degree {n}"
        )));
    }
    let mu = nodes.len() * ((n as usize - 1).div_ceil(2));
    let mut components = Vec::new();
    for j in n.div_ceil(2)..n {
        let deg = (d + j * d / n) as i64 - 4;
        if deg < 0 {
            continue;
        }
        let m = build_vanishing_matrix(deg as u32, nodes)?;
        components.push(component_for(&m, deg, backend, precision)?);
    }
    finish(mu, &format!("nfold({n})"), components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{parse_rational, RootSpec};
    use crate::singular::FrameKind;
    use std::sync::Arc;

    fn rational_point(coords: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_integers(coords)
    }

    fn int_values(v: &[i64]) -> Vec<AlgebraicValue> {
        v.iter()
            .map(|&n| AlgebraicValue::Rational(BigRational::from_integer(n.into())))
            .collect()
    }

    fn record(coords: &[i64], ade: ADEType, v1: Option<&[i64]>, v2: Option<&[i64]>) -> SingularPointRecord {
        SingularPointRecord {
            point: rational_point(coords),
            ade,
            v1: v1.map(int_values),
            v2: v2.map(int_values),
            frame_kind: FrameKind::default(),
        }
    }

    #[test]
    fn vanishing_matrix_shapes_and_ranks() {
        let m = build_vanishing_matrix(4, &[]).unwrap();
        assert_eq!((m.row_count(), m.col_count()), (35, 0));
        assert_eq!(m.rank(RankBackend::Auto, 128).unwrap().rank, 0);

        let pts = vec![rational_point(&[1, 0, 0, 0]), rational_point(&[0, 1, 0, 0])];
        let m = build_vanishing_matrix(1, &pts).unwrap();
        assert_eq!((m.row_count(), m.col_count()), (4, 2));
        assert_eq!(m.rank(RankBackend::Exact, 128).unwrap().rank, 2);
    }

    #[test]
    fn collinear_points_impose_few_conditions() {
        // five points on the line y2 = y3 = 0
        let pts: Vec<ProjectivePoint> = (0..5)
            .map(|k| rational_point(&[1, k, 0, 0]))
            .collect();
        // degree-1 forms: only 2 independent conditions (restriction to the
        // line is a pencil)
        let m1 = build_vanishing_matrix(1, &pts).unwrap();
        assert_eq!(m1.rank(RankBackend::Exact, 128).unwrap().rank, 2);
        // degree-2 forms restrict to a 3-dimensional space on the line
        let m2 = build_vanishing_matrix(2, &pts).unwrap();
        assert_eq!(m2.rank(RankBackend::Exact, 128).unwrap().rank, 3);
    }

    #[test]
    fn column_plans_match_the_condition_table() {
        let cases: Vec<(ADEType, usize)> = vec![
            (ADEType::A(1), 1),
            (ADEType::A(2), 1),
            (ADEType::A(3), 2),
            (ADEType::A(7), 4),
            (ADEType::D(4), 3),
            (ADEType::D(5), 3),
            (ADEType::D(8), 5),
            (ADEType::E(6), 3),
            (ADEType::E(7), 4),
            (ADEType::E(8), 5),
        ];
        for (ade, expect) in cases {
            let tags = condition_tags(ade, Specialization::GeneralLinearFrame).unwrap();
            assert_eq!(tags.len(), expect, "column count for {ade}");
        }
        // cusp specialization: exactly two columns per point
        let tags = condition_tags(ADEType::A(2), Specialization::TripleCusp).unwrap();
        assert_eq!(
            tags,
            vec![ConditionTag::Value, ConditionTag::DerivV1 { order: 1 }]
        );
        // the cusp specialization rejects everything else
        assert!(matches!(
            condition_tags(ADEType::A(3), Specialization::TripleCusp),
            Err(DefectError::UnsupportedSpecialization { .. })
        ));
        assert!(matches!(
            condition_tags(ADEType::D(4), Specialization::DoubleAChain),
            Err(DefectError::UnsupportedSpecialization { .. })
        ));
    }

    #[test]
    fn derivative_entries_are_true_derivatives() {
        // A_5 contributes orders 1 and 2 along v1.  For the monomial y0^3 at
        // P = (1:1:1:1) with v1 = e0, the restriction is (1+t)^3, whose
        // first and second derivatives at t = 0 are 3 and 6.
        let rec = record(&[1, 1, 1, 1], ADEType::A(5), Some(&[1, 0, 0, 0]), None);
        let m = build_condition_matrix(3, &[rec], Specialization::DoubleAChain).unwrap();
        assert_eq!(m.col_count(), 3);
        let row = m
            .rows()
            .iter()
            .position(|e| e.get(0) == 3)
            .expect("y0^3 in the basis");
        let val = crate::numbers::exact_rational(m.entry(row, 0)).unwrap();
        let d1 = crate::numbers::exact_rational(m.entry(row, 1)).unwrap();
        let d2 = crate::numbers::exact_rational(m.entry(row, 2)).unwrap();
        assert_eq!(val, parse_rational("1").unwrap());
        assert_eq!(d1, parse_rational("3").unwrap());
        assert_eq!(d2, parse_rational("6").unwrap());
    }

    #[test]
    fn quintic_specialization_uses_the_last_axis() {
        // A_3 point of a quintic threefold at (0:0:0:1:0) in P_4; the fiber
        // column differentiates along y4.
        let rec = record(&[0, 0, 0, 1, 0], ADEType::A(3), None, None);
        let m = build_condition_matrix(5, &[rec], Specialization::QuinticA3).unwrap();
        assert_eq!((m.row_count(), m.col_count()), (126, 2));
        // entry for y3^4*y4 in the fiber column: d/dy4 = y3^4 -> 1 at P
        let row = m
            .rows()
            .iter()
            .position(|e| e.get(3) == 4 && e.get(4) == 1)
            .unwrap();
        assert_eq!(
            crate::numbers::exact_rational(m.entry(row, 1)).unwrap(),
            parse_rational("1").unwrap()
        );
        // value column kills every monomial except y3^5
        let row_val = m.rows().iter().position(|e| e.get(3) == 5).unwrap();
        assert_eq!(
            crate::numbers::exact_rational(m.entry(row_val, 0)).unwrap(),
            parse_rational("1").unwrap()
        );
        assert_eq!(m.rank(RankBackend::Auto, 128).unwrap().rank, 2);
    }

    #[test]
    fn missing_and_degenerate_frames_are_rejected() {
        let rec = record(&[1, 2, 3, 4], ADEType::A(3), None, None);
        assert!(matches!(
            build_condition_matrix(4, &[rec], Specialization::DoubleAChain),
            Err(DefectError::MissingFrame { what: "v1", .. })
        ));
        let rec = record(&[1, 2, 3, 4], ADEType::A(3), Some(&[2, 4, 6, 8]), None);
        assert!(matches!(
            build_condition_matrix(4, &[rec], Specialization::DoubleAChain),
            Err(DefectError::DegenerateDirection { point: 0 })
        ));
        let rec = record(&[1, 2, 3, 4], ADEType::D(4), Some(&[1, 0, 0, 0]), None);
        assert!(matches!(
            build_condition_matrix(4, &[rec], Specialization::GeneralLinearFrame),
            Err(DefectError::MissingFrame { what: "v2", .. })
        ));
    }

    #[test]
    fn rank_is_invariant_under_frame_changes() {
        // Euler's relation makes the columns of (lambda P, alpha v1 + beta P)
        // triangular combinations of the columns of (P, v1).
        let recs = vec![
            record(&[1, 2, 3, 4], ADEType::A(5), Some(&[1, 0, 1, 0]), None),
            record(&[1, 0, 0, 1], ADEType::A(3), Some(&[0, 1, 2, 0]), None),
        ];
        let m = build_condition_matrix(5, &recs, Specialization::DoubleAChain).unwrap();
        let base = m.rank(RankBackend::Exact, 128).unwrap().rank;
        let rescaled = vec![
            record(&[3, 6, 9, 12], ADEType::A(5), Some(&[5, 4, 11, 8]), None),
            record(&[-2, 0, 0, -2], ADEType::A(3), Some(&[7, 7, 14, 0]), None),
        ];
        let m2 = build_condition_matrix(5, &rescaled, Specialization::DoubleAChain).unwrap();
        assert_eq!(m2.rank(RankBackend::Exact, 128).unwrap().rank, base);
        // permuting the rows (monomial basis order) changes nothing either
        let mut rows = m.rational_rows().unwrap();
        rows.reverse();
        assert_eq!(bareiss_rank(&rows), base);
    }

    #[test]
    fn exact_backend_rejects_irrational_entries() {
        let s = AlgebraicValue::RootOf(Arc::new(RootSpec {
            coeffs: vec![
                parse_rational("-2").unwrap(),
                parse_rational("0").unwrap(),
                parse_rational("1").unwrap(),
            ],
            seed_re: parse_rational("3/2").unwrap(),
            seed_im: parse_rational("0").unwrap(),
            radius: parse_rational("1/4").unwrap(),
        }));
        let p = ProjectivePoint {
            coords: vec![
                AlgebraicValue::one(),
                s,
                AlgebraicValue::zero(),
                AlgebraicValue::zero(),
            ],
        };
        let m = build_vanishing_matrix(2, &[p]).unwrap();
        assert!(matches!(
            m.rank(RankBackend::Exact, 128),
            Err(DefectError::ExactUnavailable)
        ));
        // auto falls back to the certified numeric engine
        let auto = m.rank(RankBackend::Auto, 128).unwrap();
        assert_eq!(auto.backend, RankBackend::Numeric);
        assert_eq!(auto.rank, 1);
        assert!(auto.certified);
    }

    #[test]
    fn numeric_and_exact_agree_on_rational_matrices() {
        let recs = vec![
            record(&[1, 2, 3, 4], ADEType::A(3), Some(&[1, 0, 1, 0]), None),
            record(&[0, 1, 1, 2], ADEType::A(2), None, None),
            record(&[5, 1, 0, 3], ADEType::A(1), None, None),
        ];
        let m = build_condition_matrix(4, &recs, Specialization::GeneralLinearFrame).unwrap();
        let exact = m.rank(RankBackend::Exact, 256).unwrap();
        let numeric = m.rank(RankBackend::Numeric, 256).unwrap();
        assert_eq!(exact.rank, numeric.rank);
        assert!(numeric.certified);
    }

    #[test]
    fn nfold_defect_on_one_node_is_zero() {
        // n = 4, d = 8: systems at degrees 8 and 10; one point imposes one
        // independent condition on each, so delta = 2 - 1 - 1 = 0.
        let nodes = vec![rational_point(&[1, 0, 0, 0])];
        let res = defect_nfold(8, 4, &nodes, RankBackend::Auto, 128).unwrap();
        assert_eq!(res.mu, 2);
        assert_eq!(res.delta, 0);
        assert_eq!(res.components.len(), 2);
        assert_eq!(res.components[0].degree, 8);
        assert_eq!(res.components[1].degree, 10);
        assert!(res.certified);
        // n = 2 coincides with the double-cover formula on nodal input
        let rec = vec![record(&[1, 0, 0, 0], ADEType::A(1), None, None)];
        let double = defect_double(8, &rec, RankBackend::Auto, 128).unwrap();
        let via_nfold = defect_nfold(8, 2, &nodes, RankBackend::Auto, 128).unwrap();
        assert_eq!(double.delta, via_nfold.delta);
        assert_eq!(double.mu, via_nfold.mu);
        assert_eq!(
            double.components[0].rank.rank,
            via_nfold.components[0].rank.rank
        );
    }

    #[test]
    fn small_defect_examples() {
        // single node on a quartic double cover: 10 quadrics, one condition
        let rec = vec![record(&[0, 0, 0, 1], ADEType::A(1), None, None)];
        let res = defect_double(4, &rec, RankBackend::Auto, 128).unwrap();
        assert_eq!(res.mu, 1);
        assert_eq!(res.components[0].degree, 2);
        assert_eq!(res.components[0].rows, 10);
        assert_eq!(res.components[0].rank.rank, 1);
        assert_eq!(res.delta, 0);
        // cusp-free sextic triple cover
        let res = defect_triple(6, &[], RankBackend::Auto, 128).unwrap();
        assert_eq!(res.delta, 0);
        assert_eq!(res.mu, 0);
        assert_eq!(res.components[0].rows, 35);
        assert_eq!(res.components[1].rows, 84);
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(
            defect_triple(7, &[], RankBackend::Auto, 128),
            Err(DefectError::DivisibilityError { d: 7, n: 3 })
        ));
        assert!(matches!(
            defect_double(7, &[], RankBackend::Auto, 128),
            Err(DefectError::DivisibilityError { d: 7, n: 2 })
        ));
        assert!(matches!(
            defect_nfold(9, 3, &[], RankBackend::Auto, 128),
            Ok(DefectResult { delta: 0, .. })
        ));
        assert!(matches!(
            defect_nfold(8, 3, &[], RankBackend::Auto, 128),
            Err(DefectError::DivisibilityError { d: 8, n: 3 })
        ));
        assert!(matches!(
            defect_nfold(3, 3, &[], RankBackend::Auto, 128),
            Err(DefectError::BadInput(_))
        ));
    }

    #[test]
    fn dump_and_result_serialization() {
        let recs = vec![record(&[1, 0, 0, 2], ADEType::A(3), Some(&[0, 1, 0, 0]), None)];
        let m = build_condition_matrix(2, &recs, Specialization::DoubleAChain).unwrap();
        let dump = m.dump(128).unwrap();
        let mut lines = dump.csv.lines();
        assert_eq!(lines.next().unwrap(), "monomial,p0:value,p0:d1v1");
        assert_eq!(dump.csv.lines().count(), 1 + m.row_count());
        assert_eq!(dump.sidecar["rows"], 10);
        assert_eq!(dump.sidecar["cols"], 2);
        assert_eq!(dump.sidecar["exact"][0][0], true);
        assert_eq!(
            dump.sidecar["columns"][1]["tag"]["kind"],
            "deriv_v1"
        );

        let res = defect_double(4, &[record(&[0, 0, 0, 1], ADEType::A(1), None, None)], RankBackend::Auto, 128)
            .unwrap();
        let json = serde_json::to_value(&res).unwrap();
        assert_eq!(json["delta"], 0);
        assert_eq!(json["mu"], 1);
        assert_eq!(json["formula"], "double");
        assert_eq!(json["components"][0]["rank"]["backend"], "exact");
    }
}
