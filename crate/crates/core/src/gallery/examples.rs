//! The bundled worked examples: plane-arrangement sextics over a quadric,
//! a residual-quotient sextic, power-map pullbacks with 36 and 64 singular
//! points, and a quintic threefold template.
//!
//! Every bundle carries its surface, its singular-point records (points,
//! types, tangency frames), and frozen expected invariants.  Coordinates
//! that live in extensions are stored as exact algebraic numbers.

use num_rational::BigRational;

use crate::numbers::{AlgebraicValue, RootSpec};
use crate::poly::{parse_poly, MultiPoly, ProjectivePoint};
use crate::singular::{adapted_frame, ADEType, FrameKind, SingularPointRecord};

use super::build::{build_direct, build_power_pullback, build_residual, line_quadric_points};
use super::{ExampleBundle, ExpectedNumbers, GalleryError};

/// Names of all bundled examples, in gallery order.
pub const EXAMPLE_NAMES: [&str; 14] = [
    "sextic30",
    "table72_row1",
    "table72_row2",
    "table72_row3",
    "table72_row4",
    "table72_row5",
    "table72_row6",
    "table72_row7",
    "table72_row8",
    "table72_row9",
    "residual27",
    "cusp36",
    "octic64",
    "quintic_template",
];

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn qi(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn val(n: i64) -> AlgebraicValue {
    AlgebraicValue::from_rational(qi(n))
}

fn p4(src: &str) -> MultiPoly {
    parse_poly(src, 4).expect("bundled polynomial data parses")
}

// ---------------------------------------------------------------------------
// Plane-arrangement sextics over the quadric y0 y1 - y2 y3
// ---------------------------------------------------------------------------

fn base_quadric() -> MultiPoly {
    p4("y0*y1 - y2*y3")
}

/// The six tangent planes of the arrangement, 1-indexed.
fn plane(i: usize) -> MultiPoly {
    match i {
        1 => p4("y0"),
        2 => p4("y1"),
        3 => p4("4*y0 + y1 - 2*y2 - 2*y3"),
        4 => p4("y0 + 4*y1 - 2*y2 - 2*y3"),
        5 => p4("y0 + y1 + y2 + y3"),
        6 => p4("y0 + y1 - y2 - y3"),
        _ => unreachable!("plane index out of range"),
    }
}

/// Smooth surfaces that agree with products of planes along the quadric.
fn factor_surface(planes: &[usize]) -> MultiPoly {
    let s = base_quadric();
    let prod = |idx: &[usize]| -> MultiPoly {
        let mut out = plane(idx[0]);
        for &i in &idx[1..] {
            out = out.mul(&plane(i));
        }
        out
    };
    let r1 = p4("y0 + 4*y1 + 2*y2 + 3*y3");
    let r2 = p4("4*y0 + y1 + 3*y2 + 2*y3");
    let r = p4("y0^2 + y1^2 + y2^2 + y3^2");
    match planes {
        [_] => prod(planes),
        [_, _] => prod(planes).add(&s.scale(&val(2))),
        [1, 2, 3] => prod(planes).add(&s.mul(&r1)),
        [4, 5, 6] => prod(planes).add(&s.mul(&r2)),
        [3, 4, 5, 6] => prod(planes).add(&s.mul(&r)),
        [2, 3, 4, 5, 6] => prod(planes).add(&r1.mul(&s).mul(&r)),
        _ => unreachable!("no bundled factor for this plane set"),
    }
}

/// Plane groupings for the arrangement family: entry 0 is the six-plane
/// sextic, entries 1..=9 the nine tabulated variants.
const ARRANGEMENTS: [&[&[usize]]; 10] = [
    &[&[1], &[2], &[3], &[4], &[5], &[6]],
    &[&[1], &[2, 3, 4, 5, 6]],
    &[&[1, 2], &[3, 4, 5, 6]],
    &[&[1, 2, 3], &[4, 5, 6]],
    &[&[1], &[2], &[3, 4, 5, 6]],
    &[&[1], &[2, 3], &[4, 5, 6]],
    &[&[1, 2], &[3, 4], &[5, 6]],
    &[&[1], &[2], &[3], &[4, 5, 6]],
    &[&[1], &[2], &[3, 4], &[5, 6]],
    &[&[1], &[2], &[3], &[4], &[5, 6]],
];

/// Frozen `(points, rank4, rank6, h11, h12)` for the arrangement family.
const ARRANGEMENT_EXPECTED: [(usize, usize, usize, i64, i64); 10] = [
    (30, 25, 55, 11, 23),
    (10, 9, 19, 3, 75),
    (16, 15, 31, 3, 57),
    (18, 17, 35, 3, 51),
    (18, 16, 34, 5, 53),
    (22, 20, 42, 5, 41),
    (24, 22, 46, 5, 35),
    (24, 21, 45, 7, 37),
    (26, 23, 49, 7, 31),
    (28, 24, 52, 9, 27),
];

/// Builds one member of the arrangement family: surface, cusp records with
/// Hessian-kernel frames, and the frozen expected numbers.
fn arrangement_bundle(
    name: &str,
    index: usize,
    precision: u32,
) -> Result<ExampleBundle, GalleryError> {
    let s = base_quadric();
    let groups = ARRANGEMENTS[index];
    let factors: Vec<MultiPoly> = groups.iter().map(|g| factor_surface(g)).collect();
    let (surface, expected_points) = build_direct(&s, &factors)?;

    let mut records = Vec::new();
    for (a, ga) in groups.iter().enumerate() {
        for gb in groups.iter().skip(a + 1) {
            for &i in ga.iter() {
                for &j in gb.iter() {
                    let cut = line_quadric_points(&plane(i), &plane(j), &s)?;
                    if cut.tangent {
                        return Err(GalleryError::UnexpectedTangency);
                    }
                    for point in cut.points {
                        let frame = adapted_frame(&surface, &point, precision)?;
                        records.push(SingularPointRecord {
                            point,
                            ade: ADEType::A(2),
                            v1: Some(frame.v1),
                            v2: None,
                            frame_kind: FrameKind::HessianKernel,
                        });
                    }
                }
            }
        }
    }
    debug_assert_eq!(records.len(), expected_points);

    let (nu, r4, r6, h11, h12) = ARRANGEMENT_EXPECTED[index];
    debug_assert_eq!(nu, expected_points);
    Ok(ExampleBundle {
        name: name.into(),
        surface,
        cover_degree: 3,
        records,
        expected: ExpectedNumbers {
            ranks: vec![r4, r6],
            h11,
            h12,
            source: "printed".into(),
        },
    })
}

// ---------------------------------------------------------------------------
// Residual sextic with 27 cusps
// ---------------------------------------------------------------------------

/// The three cube roots of `-1/3`: one real, one conjugate pair.
fn cube_roots_of_minus_third() -> [AlgebraicValue; 3] {
    let coeffs = vec![q(1, 3), qi(0), qi(0), qi(1)];
    let mk = |re: BigRational, im: BigRational| {
        AlgebraicValue::root_of(RootSpec {
            coeffs: coeffs.clone(),
            seed_re: re,
            seed_im: im,
            radius: q(1, 50),
        })
    };
    [
        mk(q(-693_361, 1_000_000), qi(0)),
        mk(q(346_681, 1_000_000), q(600_468, 1_000_000)),
        mk(q(346_681, 1_000_000), q(-600_468, 1_000_000)),
    ]
}

fn residual_bundle(precision: u32) -> Result<ExampleBundle, GalleryError> {
    let r = p4("y0^3 + y1^3 + y2^3 + y3^3");
    let cubics = [
        p4("y1^3").add(&r),
        p4("y2^3").add(&r),
        p4("y3^3").add(&r),
    ];
    let s = p4("y1*y2*y3");
    let surface = build_residual(&cubics, &s, &r)?;

    let roots = cube_roots_of_minus_third();
    let one = val(1);
    let zero = val(0);
    let mut records = Vec::new();
    // One family per vanishing coordinate among y1, y2, y3.
    for hole in 1..=3usize {
        for a in &roots {
            for b in &roots {
                let mut coords = vec![one.clone()];
                let mut rest = vec![a.clone(), b.clone()].into_iter();
                for slot in 1..=3usize {
                    if slot == hole {
                        coords.push(zero.clone());
                    } else {
                        coords.push(rest.next().expect("two root slots"));
                    }
                }
                let point = ProjectivePoint::new(coords);
                let frame = adapted_frame(&surface, &point, precision)?;
                records.push(SingularPointRecord {
                    point,
                    ade: ADEType::A(2),
                    v1: Some(frame.v1),
                    v2: None,
                    frame_kind: FrameKind::HessianKernel,
                });
            }
        }
    }

    Ok(ExampleBundle {
        name: "residual27".into(),
        surface,
        cover_degree: 3,
        records,
        expected: ExpectedNumbers {
            ranks: vec![24, 51],
            h11: 7,
            h12: 28,
            source: "printed".into(),
        },
    })
}

// ---------------------------------------------------------------------------
// Power-map pullbacks: 36-cusp sextic and 64-point octic
// ---------------------------------------------------------------------------

/// Tangent-plane coordinate frame shared by the two pullback examples.
fn pullback_forms() -> [MultiPoly; 4] {
    [
        p4("y0"),
        p4("y1"),
        p4("y0 + y1 - y2 - y3"),
        p4("8*y0 + 8*y1 - 64*y2 - y3"),
    ]
}

/// Point of `P_3` with the given frame coordinates, via the inverse of the
/// frame's linear map.
fn point_from_frame(z: [AlgebraicValue; 4]) -> ProjectivePoint {
    let comb = |terms: &[(i64, &AlgebraicValue)], den: i64| -> AlgebraicValue {
        let mut acc = AlgebraicValue::zero();
        for (k, v) in terms {
            let scaled = AlgebraicValue::mul(&AlgebraicValue::from_rational(qi(*k)), v);
            acc = AlgebraicValue::add(&acc, &scaled);
        }
        AlgebraicValue::div(&acc, &AlgebraicValue::from_rational(qi(den)))
            .expect("division by a nonzero constant")
    };
    let y2 = comb(&[(7, &z[0]), (7, &z[1]), (1, &z[2]), (-1, &z[3])], 63);
    let y3 = comb(&[(56, &z[0]), (56, &z[1]), (-64, &z[2]), (1, &z[3])], 63);
    ProjectivePoint::new(vec![z[0].clone(), z[1].clone(), y2, y3])
}

/// Frame coordinates of the singular points of the degree-`n` pullback:
/// the n-th roots of the four frame-space base points.
fn pullback_frame_points(
    unit_root: &AlgebraicValue,
    n: u32,
    root_of_eight: &AlgebraicValue,
    root_of_minus49: &AlgebraicValue,
) -> Result<Vec<[AlgebraicValue; 4]>, GalleryError> {
    let one = val(1);
    let zero = val(0);
    let mut units = Vec::with_capacity(n as usize);
    for k in 0..n {
        units.push(AlgebraicValue::pow(unit_root, k as i64)?);
    }
    let mut out = Vec::new();
    for ua in &units {
        for ub in &units {
            let w8 = AlgebraicValue::mul(root_of_eight, ub);
            out.push([zero.clone(), one.clone(), ua.clone(), w8.clone()]);
            out.push([one.clone(), zero.clone(), ua.clone(), w8]);
            let w49 = AlgebraicValue::mul(root_of_minus49, ub);
            out.push([one.clone(), ua.clone(), zero.clone(), w49.clone()]);
            out.push([
                root_of_eight.clone(),
                AlgebraicValue::mul(root_of_eight, ua),
                w49,
                zero.clone(),
            ]);
        }
    }
    Ok(out)
}

fn quadratic_root(c0: i64, c1: i64, re: BigRational, im: BigRational) -> AlgebraicValue {
    AlgebraicValue::root_of(RootSpec {
        coeffs: vec![qi(c0), qi(c1), qi(1)],
        seed_re: re,
        seed_im: im,
        radius: q(1, 4),
    })
}

fn pullback_bundle(name: &str, n: u32, precision: u32) -> Result<ExampleBundle, GalleryError> {
    let forms = pullback_forms();
    let surface = build_power_pullback(&base_quadric(), &forms, n)?;
    let (frame_points, ade) = match n {
        3 => {
            // primitive cube root of unity and cube roots of 8 and -49
            let omega = quadratic_root(1, 1, q(-1, 2), q(866_025, 1_000_000));
            let two = val(2);
            let c49 = AlgebraicValue::root_of(RootSpec {
                coeffs: vec![qi(49), qi(0), qi(0), qi(1)],
                seed_re: q(-3_659_306, 1_000_000),
                seed_im: qi(0),
                radius: q(1, 10),
            });
            (
                pullback_frame_points(&omega, 3, &two, &c49)?,
                ADEType::A(2),
            )
        }
        4 => {
            // i, the positive real fourth root of 8, and a fourth root of -49
            let i_unit = quadratic_root(1, 0, qi(0), qi(1));
            let r8 = AlgebraicValue::root_of(RootSpec {
                coeffs: vec![qi(-8), qi(0), qi(0), qi(0), qi(1)],
                seed_re: q(1_681_793, 1_000_000),
                seed_im: qi(0),
                radius: q(1, 10),
            });
            let c49 = AlgebraicValue::root_of(RootSpec {
                coeffs: vec![qi(49), qi(0), qi(0), qi(0), qi(1)],
                seed_re: q(1_870_829, 1_000_000),
                seed_im: q(1_870_829, 1_000_000),
                radius: q(1, 10),
            });
            (
                pullback_frame_points(&i_unit, 4, &r8, &c49)?,
                ADEType::A(3),
            )
        }
        _ => {
            return Err(GalleryError::BadInput(format!(
                "no bundled pullback of exponent {n}"
            )))
        }
    };

    let mut records = Vec::new();
    for z in frame_points {
        let point = point_from_frame(z);
        let frame = adapted_frame(&surface, &point, precision)?;
        records.push(SingularPointRecord {
            point,
            ade,
            v1: Some(frame.v1),
            v2: None,
            frame_kind: FrameKind::HessianKernel,
        });
    }

    let expected = match n {
        3 => ExpectedNumbers {
            ranks: vec![30, 66],
            h11: 13,
            h12: 7,
            source: "printed".into(),
        },
        _ => ExpectedNumbers {
            ranks: vec![122],
            h11: 7,
            h12: 27,
            source: "printed".into(),
        },
    };
    Ok(ExampleBundle {
        name: name.into(),
        surface,
        cover_degree: if n == 3 { 3 } else { 2 },
        records,
        expected,
    })
}

// ---------------------------------------------------------------------------
// Quintic threefold template
// ---------------------------------------------------------------------------

/// Builds records for a quintic threefold `s5 + y4^4 * plane` in `P_4` from
/// a node list of the quintic surface `s5`: each node becomes an `A_3`
/// point of the threefold (no tangency frame is needed; the conditions use
/// the fifth coordinate direction).
pub fn build_quintic(
    s5: &MultiPoly,
    plane: &MultiPoly,
    nodes: &[ProjectivePoint],
) -> Result<(MultiPoly, Vec<SingularPointRecord>), GalleryError> {
    if s5.nvars() != 4 || plane.nvars() != 4 {
        return Err(GalleryError::BadInput(
            "the quintic surface and the plane live in four variables".into(),
        ));
    }
    if s5.homogeneous_degree() != Some(5) || plane.homogeneous_degree() != Some(1) {
        return Err(GalleryError::DegreeMismatch(
            "need a quintic surface and a plane".into(),
        ));
    }
    let lift = |f: &MultiPoly| -> MultiPoly {
        let mut out = MultiPoly::new(5);
        for (e, c) in f.terms() {
            let mut exps = [0u8; 5];
            for i in 0..4 {
                exps[i] = e.get(i);
            }
            out.insert_add(crate::poly::Expo::from_slice(&exps), c.clone());
        }
        out
    };
    let mut fiber = crate::poly::Expo::zero();
    fiber = fiber.with(4, 4);
    let surface = lift(s5).add(&lift(plane).mul_monomial(&fiber, &val(1)));
    let mut records = Vec::new();
    for node in nodes {
        let mut coords = node.coords.clone();
        if coords.len() != 4 {
            return Err(GalleryError::BadInput(
                "quintic nodes live in the base projective space".into(),
            ));
        }
        coords.push(AlgebraicValue::zero());
        records.push(SingularPointRecord {
            point: ProjectivePoint::new(coords),
            ade: ADEType::A(3),
            v1: None,
            v2: None,
            frame_kind: FrameKind::HessianKernel,
        });
    }
    Ok((surface, records))
}

fn quintic_bundle() -> Result<ExampleBundle, GalleryError> {
    // One-node quintic: the only singular point is (0:0:0:1).  The plane
    // section y3 = 0 is the smooth Fermat quintic curve.
    let s5 = p4("y3^3*(y0*y1 - y2^2) + y0^5 + y1^5 + y2^5");
    let plane = p4("y3");
    let nodes = vec![ProjectivePoint::from_integers(&[0, 0, 0, 1])];
    let (surface, records) = build_quintic(&s5, &plane, &nodes)?;
    Ok(ExampleBundle {
        name: "quintic_template".into(),
        surface,
        cover_degree: 1,
        records,
        expected: ExpectedNumbers {
            ranks: vec![2],
            h11: 3,
            h12: 99,
            source: "derived".into(),
        },
    })
}

/// Builds the named example bundle; frames are certified at `precision`.
pub fn build_bundle(name: &str, precision: u32) -> Result<ExampleBundle, GalleryError> {
    match name {
        "sextic30" => arrangement_bundle(name, 0, precision),
        "residual27" => residual_bundle(precision),
        "cusp36" => pullback_bundle(name, 3, precision),
        "octic64" => pullback_bundle(name, 4, precision),
        "quintic_template" => quintic_bundle(),
        _ => {
            if let Some(rest) = name.strip_prefix("table72_row") {
                if let Ok(i) = rest.parse::<usize>() {
                    if (1..=9).contains(&i) {
                        return arrangement_bundle(name, i, precision);
                    }
                }
            }
            Err(GalleryError::UnknownExample(name.into()))
        }
    }
}
