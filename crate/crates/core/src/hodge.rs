//! Closed-form Hodge-number and Euler-characteristic calculators.
//!
//! Two resolution flavours are covered.  "Big" resolutions blow up every
//! (infinitely near) singular point; their `h^{1,1}`/`h^{1,2}` follow from a
//! general formula over ambient cohomology data plus the pair `(mu, delta)`.
//! "Small" resolutions replace each exceptional divisor tower by curves;
//! for the two supported cover families the numbers come directly from
//! condition-matrix ranks, and the two routes are tied together by an exact
//! conversion shift (the fiber topology of each exceptional set).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::defect::RankResult;
use crate::singular::{lift_type, mu_and_near_points, ADEType};

/// Errors from the Hodge calculators.
#[derive(Debug, thiserror::Error)]
pub enum HodgeError {
    /// The general `h^{1,2}` formula needs `h^2(O_X) = 0`.
    #[error("the h^{{1,2}} formula requires h^2(O_X) = 0, got {0}")]
    AssumptionViolated(i64),
    /// The cover's degrees or inventory fall outside the supported tables.
    #[error("unsupported cover: {0}")]
    UnsupportedCover(String),
    /// The small/big conversion shift is only known for selected fibers.
    #[error("unsupported exceptional-fiber topology: {0}")]
    UnsupportedFiberTopology(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

/// `C(a, k)` with the dimension-counting convention: `0` whenever `a < k`.
pub fn binomial(a: i64, k: u32) -> i64 {
    if a < k as i64 {
        return 0;
    }
    let mut num: i128 = 1;
    for i in 0..k as i64 {
        num *= (a - i) as i128;
    }
    let mut den: i128 = 1;
    for i in 1..=k as i128 {
        den *= i;
    }
    (num / den) as i64
}

/// Ambient cohomology dimensions entering the general big-resolution
/// formula.  These are inputs, not computed: the caller asserts them for
/// the fourfold at hand (helpers below provide the two standard ambients).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyInputs {
    /// `h^i` of the (Zariski) 1-form sheaf on the ambient fourfold.
    pub h1_omega: i64,
    pub h2_omega: i64,
    pub h3_omega: i64,
    pub h4_omega: i64,
    /// `h^0(O_X(2Y + K_X))`.
    pub h0_2y_k: i64,
    /// `h^0(O_X(Y + K_X))`.
    pub h0_y_k: i64,
    /// `h^3(O_X(-2Y))`.
    pub h3_minus_2y: i64,
    /// `h^4` of the 1-form sheaf twisted by `-Y`.
    pub h4_omega_minus_y: i64,
    /// `h^2(O_X)`; must vanish for the `h^{1,2}` formula.
    pub h2_ox: i64,
}

/// Which singularities the branch surface is allowed to carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchKind {
    /// Ordinary nodes only; any cover degree.
    Nodal,
    /// Ordinary cusps only; triple covers.
    Cuspidal,
    /// Arbitrary Du Val points; double covers.
    DuVal,
}

/// A cyclic cover of `P_3`: degree-`n` cover branched along a degree-`d`
/// surface whose singularity counts are listed per type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub d: u32,
    pub n: u32,
    pub branch: BranchKind,
    /// Counts per branch-surface singularity type.
    pub inventory: BTreeMap<ADEType, usize>,
}

impl CoverSpec {
    pub fn new(d: u32, n: u32, branch: BranchKind, inventory: BTreeMap<ADEType, usize>) -> Self {
        CoverSpec {
            d,
            n,
            branch,
            inventory,
        }
    }

    /// Total number of singular points on the branch surface.
    pub fn point_count(&self) -> usize {
        self.inventory.values().sum()
    }

    /// Branch types expanded with multiplicity.
    fn types(&self) -> impl Iterator<Item = ADEType> + '_ {
        self.inventory
            .iter()
            .flat_map(|(t, c)| std::iter::repeat(*t).take(*c))
    }

    /// Degree bookkeeping and inventory/flag compatibility.
    pub fn validate(&self) -> Result<(), HodgeError> {
        if self.n < 2 {
            return Err(HodgeError::UnsupportedCover(format!(
                "cover degree must be at least 2, got {}",
                self.n
            )));
        }
        if self.d % self.n != 0 || self.d <= self.n {
            return Err(HodgeError::UnsupportedCover(format!(
                "branch degree {} must be a proper multiple of the cover degree {}",
                self.d, self.n
            )));
        }
        for (t, _) in self.inventory.iter().filter(|(_, c)| **c > 0) {
            let ok = match self.branch {
                BranchKind::Nodal => *t == ADEType::A(1),
                BranchKind::Cuspidal => self.n == 3 && *t == ADEType::A(2),
                BranchKind::DuVal => self.n == 2 && t.is_valid(),
            };
            if !ok {
                return Err(HodgeError::UnsupportedCover(format!(
                    "{t} points are not covered by the {:?} branch table at n = {}",
                    self.branch, self.n
                )));
            }
        }
        Ok(())
    }

    /// `mu` of the covering threefold: singular points plus infinitely near
    /// ones, counted for the lifted singularity types.
    pub fn lifted_mu(&self) -> Result<usize, HodgeError> {
        let mut lifted = Vec::with_capacity(self.point_count());
        for t in self.types() {
            lifted.push(
                lift_type(t, self.n)
                    .map_err(|e| HodgeError::UnsupportedCover(e.to_string()))?,
            );
        }
        Ok(mu_and_near_points(lifted).total)
    }
}

/// Which resolution a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    Big,
    Small,
}

/// A named pass/fail consistency verdict attached to a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeCheck {
    pub name: String,
    pub pass: bool,
}

/// Hodge numbers of a resolved threefold together with the data they came
/// from.  `euler` is `2*(h11 - h12)`, valid whenever the threefold carries
/// no 1- or 2-forms (true for every case produced here).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeReport {
    pub h11: i64,
    pub h12: i64,
    pub mu: i64,
    pub delta: i64,
    pub euler: i64,
    pub resolution: Resolution,
    pub formula_id: String,
    /// `h^3(O)` of the resolved cover, when the formula provides it.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h3_o: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rank_inputs: Vec<RankResult>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub checks: Vec<HodgeCheck>,
}

impl HodgeReport {
    fn new(h11: i64, h12: i64, mu: i64, delta: i64, resolution: Resolution, id: &str) -> Self {
        HodgeReport {
            h11,
            h12,
            mu,
            delta,
            euler: 2 * (h11 - h12),
            resolution,
            formula_id: id.into(),
            h3_o: None,
            rank_inputs: Vec::new(),
            checks: Vec::new(),
        }
    }
}

/// Big-resolution Hodge numbers over user-supplied ambient cohomology.
///
/// `h11 = h^1(Omega) + mu + delta + h^3(O(-2Y))` and
/// `h12 = h^0(2Y+K) + h^4(Omega) - h^0(Y+K) - h^3(Omega) - h^4(Omega(-Y))
///        - mu + delta`, the latter valid only when `h^2(O_X) = 0`.
pub fn hodge_big_general(
    c: &CohomologyInputs,
    mu: usize,
    delta: i64,
) -> Result<HodgeReport, HodgeError> {
    if c.h2_ox != 0 {
        return Err(HodgeError::AssumptionViolated(c.h2_ox));
    }
    if delta < 0 {
        return Err(HodgeError::BadInput(format!("negative defect {delta}")));
    }
    let fields = [
        c.h1_omega,
        c.h2_omega,
        c.h3_omega,
        c.h4_omega,
        c.h0_2y_k,
        c.h0_y_k,
        c.h3_minus_2y,
        c.h4_omega_minus_y,
    ];
    if fields.iter().any(|&v| v < 0) {
        return Err(HodgeError::BadInput(
            "cohomology dimensions must be nonnegative".into(),
        ));
    }
    let mu = mu as i64;
    let h11 = c.h1_omega + mu + delta + c.h3_minus_2y;
    let h12 =
        c.h0_2y_k + c.h4_omega - c.h0_y_k - c.h3_omega - c.h4_omega_minus_y - mu + delta;
    Ok(HodgeReport::new(
        h11,
        h12,
        mu,
        delta,
        Resolution::Big,
        "big_general",
    ))
}

/// The cover `h^{1,2}` sum: over `j = 1 .. n-1`,
/// `C(d + j d/n - 1, 3) - 4 C(j d/n, 3)`, then `- mu + delta`.
fn cover_h12(d: u32, n: u32, mu: i64, delta: i64) -> i64 {
    let (d, n) = (d as i64, n as i64);
    let w = d / n;
    let mut total = 0;
    for j in 1..n {
        total += binomial(d + j * w - 1, 3) - 4 * binomial(j * w, 3);
    }
    total - mu + delta
}

/// Big-resolution Hodge numbers of a cyclic cover of `P_3`:
/// `h11 = 1 + mu + delta` with `mu` counted for the lifted inventory, `h12`
/// from the cover sum, and `h^3(O) = C((n-1) d/n - 1, 3)`.
pub fn hodge_big_cover(spec: &CoverSpec, delta: i64) -> Result<HodgeReport, HodgeError> {
    spec.validate()?;
    if delta < 0 {
        return Err(HodgeError::BadInput(format!("negative defect {delta}")));
    }
    let mu = spec.lifted_mu()? as i64;
    let h11 = 1 + mu + delta;
    let h12 = cover_h12(spec.d, spec.n, mu, delta);
    let mut report = HodgeReport::new(h11, h12, mu, delta, Resolution::Big, "big_cover");
    report.h3_o = Some(binomial(((spec.n - 1) * spec.d / spec.n) as i64 - 1, 3));
    Ok(report)
}

/// Per-point `h^4` of the exceptional fiber in the small resolution, i.e.
/// the `h^{1,1}` shift between the two resolutions.
fn fiber_shift(spec: &CoverSpec) -> Result<i64, HodgeError> {
    let mut shift = 0i64;
    for (t, c) in spec.inventory.iter().filter(|(_, c)| **c > 0) {
        let per_point = match (spec.n, t) {
            // cusp of a triple cover: tower over a D_4 point, fiber h^4 = 5
            (3, ADEType::A(2)) => 5,
            // A_{2k+1} of a double cover: fiber h^4 = k + 1
            (2, ADEType::A(m)) if m % 2 == 1 => ((m + 1) / 2) as i64,
            _ => {
                return Err(HodgeError::UnsupportedFiberTopology(format!(
                    "{t} at cover degree {}",
                    spec.n
                )))
            }
        };
        shift += per_point * *c as i64;
    }
    Ok(shift)
}

/// Small-resolution Hodge numbers from condition-matrix ranks.
///
/// Supported: triple sextics with cusps (`rank_inputs` = the degree-4 and
/// degree-6 ranks) and double octics with odd `A_m` points (a single
/// degree-8 rank).
pub fn hodge_small(spec: &CoverSpec, rank_inputs: &[RankResult]) -> Result<HodgeReport, HodgeError> {
    spec.validate()?;
    let nu = spec.point_count() as i64;
    let mu = spec.lifted_mu()? as i64;
    match (spec.n, spec.d, spec.branch) {
        (3, 6, BranchKind::Cuspidal) => {
            let [r4, r6] = rank_inputs else {
                return Err(HodgeError::BadInput(format!(
                    "triple sextic needs exactly 2 ranks, got {}",
                    rank_inputs.len()
                )));
            };
            let ranks = (r4.rank + r6.rank) as i64;
            let delta = mu - ranks;
            if delta < 0 {
                return Err(HodgeError::BadInput(format!("negative defect {delta}")));
            }
            let mut report = HodgeReport::new(
                1 + 3 * nu - ranks,
                103 - ranks,
                mu,
                delta,
                Resolution::Small,
                "small_triple_sextic",
            );
            report.h3_o = Some(1);
            report.rank_inputs = rank_inputs.to_vec();
            Ok(report)
        }
        (2, 8, BranchKind::DuVal) => {
            let [r8] = rank_inputs else {
                return Err(HodgeError::BadInput(format!(
                    "double octic needs exactly 1 rank, got {}",
                    rank_inputs.len()
                )));
            };
            if let Some((t, _)) = spec
                .inventory
                .iter()
                .find(|(t, c)| **c > 0 && !matches!(t, ADEType::A(m) if m % 2 == 1))
            {
                return Err(HodgeError::UnsupportedCover(format!(
                    "small double octics need odd A points only, got {t}"
                )));
            }
            let delta = mu - r8.rank as i64;
            if delta < 0 {
                return Err(HodgeError::BadInput(format!("negative defect {delta}")));
            }
            let mut report = HodgeReport::new(
                1 + mu - r8.rank as i64,
                149 - r8.rank as i64,
                mu,
                delta,
                Resolution::Small,
                "small_double_octic",
            );
            report.h3_o = Some(1);
            report.rank_inputs = rank_inputs.to_vec();
            Ok(report)
        }
        _ => Err(HodgeError::UnsupportedCover(format!(
            "no small-resolution formula for n = {}, d = {}, {:?} branch",
            spec.n, spec.d, spec.branch
        ))),
    }
}

/// Convert between the two resolutions of the same cover: `h^{1,1}` shifts
/// by the total fiber `h^4`, `h^{1,2}` is unchanged.
pub fn small_big_conversion(
    spec: &CoverSpec,
    report: &HodgeReport,
) -> Result<HodgeReport, HodgeError> {
    spec.validate()?;
    let shift = fiber_shift(spec)?;
    let (h11, resolution, id) = match report.resolution {
        Resolution::Small => (report.h11 + shift, Resolution::Big, "big_from_small"),
        Resolution::Big => (report.h11 - shift, Resolution::Small, "small_from_big"),
    };
    let mut out = HodgeReport::new(
        h11,
        report.h12,
        report.mu,
        report.delta,
        resolution,
        id,
    );
    out.h3_o = report.h3_o;
    out.rank_inputs = report.rank_inputs.clone();
    Ok(out)
}

/// Outcome of the Euler-characteristic cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub pass: bool,
    /// `2 (h11 - h12)` from the report.
    pub from_hodge: i64,
    /// The closed-form count for the family.
    pub from_formula: i64,
}

/// Checks `2 (h11 - h12)` of a small-resolution report against the closed
/// forms `6 nu - 204` (triple sextics) and `2 sum a_{2k+1} (k+1) - 296`
/// (double octics).
pub fn euler_check(report: &HodgeReport, spec: &CoverSpec) -> Result<EulerCheck, HodgeError> {
    if report.resolution != Resolution::Small {
        return Err(HodgeError::BadInput(
            "the Euler cross-check applies to small-resolution reports".into(),
        ));
    }
    let from_formula = match (spec.n, spec.d, spec.branch) {
        (3, 6, BranchKind::Cuspidal) => 6 * spec.point_count() as i64 - 204,
        (2, 8, BranchKind::DuVal) => 2 * fiber_shift(spec)? - 296,
        _ => {
            return Err(HodgeError::UnsupportedCover(format!(
                "no Euler closed form for n = {}, d = {}",
                spec.n, spec.d
            )))
        }
    };
    let from_hodge = 2 * (report.h11 - report.h12);
    Ok(EulerCheck {
        pass: from_hodge == from_formula && report.euler == from_hodge,
        from_hodge,
        from_formula,
    })
}

/// Ambient inputs for `P_4` and a degree-`d` hypersurface: reproduces the
/// projective-space specialization of the big-resolution formula.
pub fn p4_inputs(d: u32) -> CohomologyInputs {
    let d = d as i64;
    CohomologyInputs {
        h1_omega: 1,
        h2_omega: 0,
        h3_omega: 0,
        h4_omega: 0,
        h0_2y_k: binomial(2 * d - 1, 4),
        h0_y_k: binomial(d - 1, 4),
        h3_minus_2y: 0,
        // h^0 of the twisted tangent sheaf via the Euler sequence
        h4_omega_minus_y: 5 * binomial(d, 4) - binomial(d - 1, 4),
        h2_ox: 0,
    }
}

/// `h^0(O(m))` on the weighted projective space `P(1,1,1,1,w)`.
fn weighted_h0(m: i64, w: u32) -> i64 {
    if m < 0 {
        return 0;
    }
    let w = w as i64;
    (0..=m / w).map(|k| binomial(m - k * w + 3, 3)).sum()
}

/// Ambient inputs for the weighted projective space `P(1,1,1,1, d/n)`
/// containing the degree-`n` cover of `P_3` branched in degree `d` (the
/// cover is the hypersurface `y_4^n = b_d`).  Feeding these to
/// [`hodge_big_general`] must reproduce [`hodge_big_cover`] exactly; the
/// twists come from `K_X = O(-(4 + d/n))` and the generalized Euler
/// sequence `0 -> O -> O(1)^4 + O(d/n) -> T -> 0`.
pub fn weighted_cover_inputs(d: u32, n: u32) -> CohomologyInputs {
    let w = d / n;
    let (di, wi) = (d as i64, w as i64);
    CohomologyInputs {
        h1_omega: 1,
        h2_omega: 0,
        h3_omega: 0,
        h4_omega: 0,
        h0_2y_k: weighted_h0(2 * di - 4 - wi, w),
        h0_y_k: weighted_h0(di - 4 - wi, w),
        h3_minus_2y: 0,
        h4_omega_minus_y: 4 * weighted_h0(di - wi - 3, w) + weighted_h0(di - 4, w)
            - weighted_h0(di - wi - 4, w),
        h2_ox: 0,
    }
}
