//! Worked example surfaces with verified singular loci, their condition
//! matrices, and their Hodge numbers computed along both available routes.
//!
//! A bundle packages a surface, its singular-point records, and frozen
//! expected invariants.  Running an example verifies the inventory locally
//! (each listed point is singular, of the stated type, with a frame adapted
//! to the surface), assembles the defect, and produces small- and
//! big-resolution reports together with consistency checks.

mod build;
mod examples;

pub use build::{
    build_direct, build_power_pullback, build_residual, line_quadric_points,
    LineQuadricIntersection,
};
pub use examples::{build_bundle, build_quintic, EXAMPLE_NAMES};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::defect::{
    build_condition_matrix, defect_double, defect_triple, DefectComponent, DefectError,
    DefectResult, RankBackend, RankResult, Specialization,
};
use crate::hodge::{
    euler_check, hodge_big_cover, hodge_big_general, hodge_small, p4_inputs,
    small_big_conversion, BranchKind, CoverSpec, HodgeCheck, HodgeError, HodgeReport,
};
use crate::numbers::{is_zero_heuristic, NumError, ZeroStatus};
use crate::poly::MultiPoly;
use crate::singular::{classify, ADEType, ClassifyOptions, SingError, SingularPointRecord};

/// Errors from example construction and verification.
#[derive(Debug, thiserror::Error)]
pub enum GalleryError {
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("the residual factor does not divide the product")]
    NonzeroRemainder,
    #[error("the coordinate forms are linearly dependent")]
    DependentForms,
    #[error("the line lies inside the quadric")]
    LineInQuadric,
    #[error("the two forms do not cut out a line")]
    DegenerateLine,
    #[error("a construction line is tangent to the quadric")]
    UnexpectedTangency,
    #[error("records {0} and {1} describe the same point")]
    DuplicatePoint(usize, usize),
    #[error("record {index}: expected {expected}, classified as {found}")]
    TypeMismatch {
        index: usize,
        expected: ADEType,
        found: ADEType,
    },
    #[error("record {0}: the point is not singular on the surface")]
    NotSingular(usize),
    #[error("record {0}: the stored frame is not adapted to the surface")]
    BadFrame(usize),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Sing(#[from] SingError),
    #[error(transparent)]
    Defect(#[from] DefectError),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
}

/// Frozen invariants an example is expected to reproduce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedNumbers {
    /// Condition-matrix ranks, in pipeline order.
    pub ranks: Vec<usize>,
    pub h11: i64,
    pub h12: i64,
    /// Where the frozen values come from: `printed` or `derived`.
    pub source: String,
}

/// A packaged example: surface, singular-point records, expectations.
#[derive(Clone, Debug)]
pub struct ExampleBundle {
    pub name: String,
    pub surface: MultiPoly,
    /// Degree of the cyclic cover; `1` marks a hypersurface studied as-is.
    pub cover_degree: u32,
    pub records: Vec<SingularPointRecord>,
    pub expected: ExpectedNumbers,
}

impl ExampleBundle {
    /// Singularity counts per type.
    pub fn inventory(&self) -> BTreeMap<ADEType, usize> {
        let mut out = BTreeMap::new();
        for rec in &self.records {
            *out.entry(rec.ade).or_insert(0) += 1;
        }
        out
    }

    /// The cover this bundle describes, when it is one.
    pub fn cover_spec(&self) -> Option<CoverSpec> {
        let d = self.surface.homogeneous_degree()? as u32;
        match self.cover_degree {
            3 => Some(CoverSpec::new(d, 3, BranchKind::Cuspidal, self.inventory())),
            2 => Some(CoverSpec::new(d, 2, BranchKind::DuVal, self.inventory())),
            _ => None,
        }
    }

    /// Serializable description of the bundle.
    pub fn manifest(&self) -> serde_json::Value {
        json!({
            "name": self.name,
            "surface": self.surface.to_string(),
            "cover_degree": self.cover_degree,
            "points": self.records,
            "expected": self.expected,
        })
    }
}

/// Certifies the singular-point records of a surface, locally: every listed
/// point is distinct, singular, of the stated type, and any stored `v1`
/// direction annihilates the Hessian without degenerating to the point.
/// Nothing is claimed about singular points that are not listed.
pub fn verify_inventory(
    surface: &MultiPoly,
    records: &[SingularPointRecord],
    precision: u32,
) -> Result<(), GalleryError> {
    // pairwise distinctness via 2x2 minors of the coordinate pairs
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let p = &records[i].point.coords;
            let q = &records[j].point.coords;
            let mut all_zero = true;
            'outer: for a in 0..p.len() {
                for b in a + 1..p.len() {
                    let minor = AlgebraicValueMinor(p, q, a, b).value();
                    match is_zero_heuristic(&minor, precision)? {
                        ZeroStatus::NonZero => {
                            all_zero = false;
                            break 'outer;
                        }
                        ZeroStatus::Zero => {}
                        ZeroStatus::Undecided => return Err(SingError::Undecided.into()),
                    }
                }
            }
            if all_zero {
                return Err(GalleryError::DuplicatePoint(i, j));
            }
        }
    }

    let opts = ClassifyOptions {
        precision,
        max_order: 8,
    };
    for (index, rec) in records.iter().enumerate() {
        if !crate::singular::is_singular(surface, &rec.point, precision)? {
            return Err(GalleryError::NotSingular(index));
        }
        let found = classify(surface, &rec.point, &opts)?;
        if found.ade != rec.ade {
            return Err(GalleryError::TypeMismatch {
                index,
                expected: rec.ade,
                found: found.ade,
            });
        }
        if let Some(v1) = &rec.v1 {
            check_frame_direction(surface, rec, v1, index, precision)?;
        }
    }
    Ok(())
}

/// Convenience wrapper for one coordinate minor `p_a q_b - p_b q_a`.
struct AlgebraicValueMinor<'a>(
    &'a [crate::numbers::AlgebraicValue],
    &'a [crate::numbers::AlgebraicValue],
    usize,
    usize,
);

impl AlgebraicValueMinor<'_> {
    fn value(&self) -> crate::numbers::AlgebraicValue {
        use crate::numbers::AlgebraicValue as V;
        let AlgebraicValueMinor(p, q, a, b) = self;
        V::sub(&V::mul(&p[*a], &q[*b]), &V::mul(&p[*b], &q[*a]))
    }
}

/// The stored direction must annihilate the Hessian at the point and must
/// not be a multiple of the point itself.
fn check_frame_direction(
    surface: &MultiPoly,
    rec: &SingularPointRecord,
    v1: &[crate::numbers::AlgebraicValue],
    index: usize,
    precision: u32,
) -> Result<(), GalleryError> {
    use crate::numbers::AlgebraicValue as V;
    let n = rec.point.coords.len();
    if v1.len() != n {
        return Err(GalleryError::BadFrame(index));
    }
    let hessian = surface.hessian_at(&rec.point.coords);
    for row in &hessian {
        let mut acc = V::zero();
        for (h, v) in row.iter().zip(v1) {
            acc = V::add(&acc, &V::mul(h, v));
        }
        match is_zero_heuristic(&acc, precision)? {
            ZeroStatus::Zero => {}
            ZeroStatus::NonZero => return Err(GalleryError::BadFrame(index)),
            ZeroStatus::Undecided => return Err(SingError::Undecided.into()),
        }
    }
    let p = &rec.point.coords;
    let mut independent = false;
    'outer: for a in 0..n {
        for b in a + 1..n {
            let minor = V::sub(&V::mul(&p[a], &v1[b]), &V::mul(&p[b], &v1[a]));
            if let ZeroStatus::NonZero = is_zero_heuristic(&minor, precision)? {
                independent = true;
                break 'outer;
            }
        }
    }
    if !independent {
        return Err(GalleryError::BadFrame(index));
    }
    Ok(())
}

/// Everything a full example run produces.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleRun {
    #[serde(skip)]
    pub bundle: ExampleBundle,
    pub defect: DefectResult,
    /// Small-resolution report, for the cover families that have one.
    pub small: Option<HodgeReport>,
    pub big: HodgeReport,
    pub checks: Vec<HodgeCheck>,
    pub matches_expected: bool,
}

impl ExampleRun {
    /// Headline Hodge numbers: the small-resolution values when present.
    pub fn headline(&self) -> (i64, i64) {
        match &self.small {
            Some(r) => (r.h11, r.h12),
            None => (self.big.h11, self.big.h12),
        }
    }

    /// Full run report as a JSON value with stable key order.
    pub fn to_json(&self) -> serde_json::Value {
        let (h11, h12) = self.headline();
        json!({
            "name": self.bundle.name,
            "cover_degree": self.bundle.cover_degree,
            "points": self.bundle.records.len(),
            "inventory": crate::singular::inventory_by_type(
                self.bundle.records.iter().map(|r| r.ade)
            ),
            "h11": h11,
            "h12": h12,
            "defect": self.defect,
            "small": self.small,
            "big": self.big,
            "checks": self.checks,
            "expected": self.bundle.expected,
            "matches_expected": self.matches_expected,
        })
    }
}

/// Builds, verifies, and evaluates the named example end to end.
pub fn run_example(
    name: &str,
    backend: RankBackend,
    precision: u32,
) -> Result<ExampleRun, GalleryError> {
    let bundle = build_bundle(name, precision)?;
    verify_inventory(&bundle.surface, &bundle.records, precision)?;

    let degree = bundle
        .surface
        .homogeneous_degree()
        .ok_or_else(|| GalleryError::BadInput("the example surface is zero".into()))? as u32;

    if let Some(spec) = bundle.cover_spec() {
        let defect = match bundle.cover_degree {
            3 => defect_triple(degree, &bundle.records, backend, precision)?,
            _ => defect_double(degree, &bundle.records, backend, precision)?,
        };
        let ranks: Vec<RankResult> = defect.components.iter().map(|c| c.rank.clone()).collect();
        let mut small = hodge_small(&spec, &ranks)?;
        let direct = hodge_big_cover(&spec, defect.delta)?;
        let shifted = small_big_conversion(&spec, &small)?;
        let path_ok = direct.h11 == shifted.h11
            && direct.h12 == shifted.h12
            && small.h12 == direct.h12;
        let euler = euler_check(&small, &spec)?;
        let checks = vec![
            HodgeCheck {
                name: "euler".into(),
                pass: euler.pass,
            },
            HodgeCheck {
                name: "path_independence".into(),
                pass: path_ok,
            },
        ];
        small.checks = checks.clone();
        let mut big = direct;
        big.rank_inputs = ranks.clone();
        big.checks = checks.clone();
        let rank_values: Vec<usize> = ranks.iter().map(|r| r.rank).collect();
        let matches_expected = rank_values == bundle.expected.ranks
            && small.h11 == bundle.expected.h11
            && small.h12 == bundle.expected.h12;
        return Ok(ExampleRun {
            bundle,
            defect,
            small: Some(small),
            big,
            checks,
            matches_expected,
        });
    }

    // Hypersurface case: a quintic threefold in P_4.
    let matrix = build_condition_matrix(degree, &bundle.records, Specialization::QuinticA3)?;
    let rank = matrix.rank(backend, precision)?;
    let mu = 2 * bundle.records.len();
    let delta = mu as i64 - rank.rank as i64;
    if delta < 0 {
        return Err(GalleryError::BadInput(format!(
            "rank {} exceeds the condition count {mu}",
            rank.rank
        )));
    }
    let defect = DefectResult {
        delta,
        mu,
        formula: "quintic".into(),
        components: vec![DefectComponent {
            degree: degree as i64,
            rows: matrix.row_count(),
            cols: matrix.col_count(),
            rank: rank.clone(),
            h0_ideal: matrix.row_count() - rank.rank,
        }],
        certified: rank.certified,
    };
    let mut big = hodge_big_general(&p4_inputs(degree), mu, delta)?;
    big.rank_inputs = vec![rank.clone()];
    let matches_expected = vec![rank.rank] == bundle.expected.ranks
        && big.h11 == bundle.expected.h11
        && big.h12 == bundle.expected.h12;
    Ok(ExampleRun {
        bundle,
        defect,
        small: None,
        big,
        checks: Vec::new(),
        matches_expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::DEFAULT_PRECISION;
    use crate::poly::{parse_poly, ProjectivePoint};
    use crate::singular::FrameKind;

    #[test]
    fn tampered_inventories_are_rejected() {
        let surface = parse_poly("y0*y1*y2 - y3^3", 4).unwrap();
        let cusp = ProjectivePoint::from_integers(&[1, 0, 0, 0]);
        let ok = SingularPointRecord {
            point: cusp.clone(),
            ade: ADEType::A(2),
            v1: Some(vec![
                crate::numbers::AlgebraicValue::zero(),
                crate::numbers::AlgebraicValue::zero(),
                crate::numbers::AlgebraicValue::zero(),
                crate::numbers::AlgebraicValue::one(),
            ]),
            v2: None,
            frame_kind: FrameKind::HessianKernel,
        };
        // the honest record passes
        verify_inventory(&surface, &[ok.clone()], DEFAULT_PRECISION).unwrap();
        // wrong type
        let mut bad_type = ok.clone();
        bad_type.ade = ADEType::A(3);
        assert!(matches!(
            verify_inventory(&surface, &[bad_type], DEFAULT_PRECISION),
            Err(GalleryError::TypeMismatch { .. })
        ));
        // a smooth point
        let mut smooth = ok.clone();
        smooth.point = ProjectivePoint::from_integers(&[1, 1, 1, 1]);
        assert!(matches!(
            verify_inventory(&surface, &[smooth], DEFAULT_PRECISION),
            Err(GalleryError::NotSingular(0))
        ));
        // duplicate points (up to scale)
        let mut scaled = ok.clone();
        scaled.point = ProjectivePoint::from_integers(&[3, 0, 0, 0]);
        assert!(matches!(
            verify_inventory(&surface, &[ok.clone(), scaled], DEFAULT_PRECISION),
            Err(GalleryError::DuplicatePoint(0, 1))
        ));
        // a frame that does not annihilate the Hessian
        let mut bad_frame = ok.clone();
        bad_frame.v1 = Some(vec![
            crate::numbers::AlgebraicValue::zero(),
            crate::numbers::AlgebraicValue::zero(),
            crate::numbers::AlgebraicValue::one(),
            crate::numbers::AlgebraicValue::one(),
        ]);
        assert!(matches!(
            verify_inventory(&surface, &[bad_frame], DEFAULT_PRECISION),
            Err(GalleryError::BadFrame(0))
        ));
        // a frame proportional to the point
        let mut parallel = ok;
        parallel.v1 = Some(vec![
            crate::numbers::AlgebraicValue::from_rational(num_rational::BigRational::from_integer(2.into())),
            crate::numbers::AlgebraicValue::zero(),
            crate::numbers::AlgebraicValue::zero(),
            crate::numbers::AlgebraicValue::zero(),
        ]);
        assert!(matches!(
            verify_inventory(&surface, &[parallel], DEFAULT_PRECISION),
            Err(GalleryError::BadFrame(0))
        ));
    }

    #[test]
    fn the_smallest_tabulated_arrangement_runs_end_to_end() {
        let run = run_example("table72_row1", RankBackend::Auto, DEFAULT_PRECISION).unwrap();
        assert!(run.matches_expected, "run: {}", run.to_json());
        let small = run.small.as_ref().unwrap();
        assert_eq!((small.h11, small.h12), (3, 75));
        assert_eq!(run.defect.mu, 40);
        assert_eq!(run.defect.delta, 40 - 9 - 19);
        assert!(run.checks.iter().all(|c| c.pass));
        let json = run.to_json();
        assert_eq!(json["h11"], 3);
        assert_eq!(json["h12"], 75);
        assert_eq!(json["inventory"]["A2"], 10);
        assert_eq!(json["checks"][0]["name"], "euler");
    }

    #[test]
    fn the_quintic_template_runs_end_to_end() {
        let run = run_example("quintic_template", RankBackend::Auto, DEFAULT_PRECISION).unwrap();
        assert!(run.matches_expected);
        assert!(run.small.is_none());
        assert_eq!((run.big.h11, run.big.h12), (3, 99));
        assert_eq!(run.defect.delta, 0);
        assert_eq!(run.defect.mu, 2);
        let manifest = run.bundle.manifest();
        assert_eq!(manifest["name"], "quintic_template");
        assert_eq!(manifest["expected"]["source"], "derived");
        assert!(manifest["surface"].as_str().unwrap().contains("y4"));
    }
}
