//! The A-D-E recognition algorithm on local germs.
//!
//! Pipeline: extract the germ of the surface at the point (dehomogenize in a
//! chart with a certifiably nonzero coordinate, translate to the origin,
//! truncate), diagonalize the quadratic part by congruence, split off the
//! square variables by iterated shears, and read the type off the residual
//! series in the kernel variables.  Every coordinate change is a polynomial
//! substitution with unit Jacobian, so the germ stays right-equivalent to
//! the original at each step; the only heuristic ingredient is deciding
//! which coefficients are zero (see [`LocalCoef::zero_status`]).
//!
//! No square or cube roots of coefficients are ever taken: the square
//! variables keep their diagonal coefficients, double- and triple-root
//! directions of the cubic are rational expressions in its coefficients,
//! and the recognition thresholds are formulated so that non-normalized
//! units do not matter.

use num_rational::BigRational;

use super::scalar::LocalCoef;
use super::{ADEType, SingError};
use crate::numbers::{clamp_precision, BigFloat, ZeroStatus};
use crate::poly::{Coef, Expo, MultiPoly, Poly, ProjectivePoint};

/// Options controlling classification.
#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Working precision in bits for ball-evaluated coefficients.
    pub precision: u32,
    /// Truncation order of the local series.  Types up to `A_{max_order-1}`
    /// and `D_{max_order-1}` are recognizable at order `max_order`.
    pub max_order: u32,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            precision: crate::numbers::DEFAULT_PRECISION,
            max_order: 12,
        }
    }
}

/// A truncated local power series around a singular point candidate.
#[derive(Clone)]
pub struct GermSeries {
    /// The series, in local variables `x0..x{n-1}`.
    pub poly: Poly<LocalCoef>,
    /// All terms of total degree above this order have been discarded.
    pub order: u32,
}

impl std::fmt::Debug for GermSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GermSeries({} vars, {} terms, order {})",
            self.poly.nvars(),
            self.poly.num_terms(),
            self.order
        )
    }
}

impl GermSeries {
    /// Builds a germ directly from a polynomial with symbolic coefficients.
    pub fn from_poly(p: &MultiPoly, precision: u32, order: u32) -> Result<Self, SingError> {
        let mut out = Poly::new(p.nvars());
        for (e, c) in p.terms() {
            if e.total() > order {
                continue;
            }
            out.insert_add(*e, LocalCoef::from_value(c, precision)?);
        }
        Ok(GermSeries { poly: out, order })
    }
}

/// Result of classifying a singular point.
#[derive(Clone, Debug)]
pub struct Classification {
    /// The recognized Du Val type.
    pub ade: ADEType,
    /// Index of the affine chart used for the local computation.
    pub chart: usize,
    /// Corank of the quadratic part of the germ (0 for `A1`, 1 for the
    /// `A` chain, 2 for `D` and `E`).
    pub corank: usize,
}

fn rat(n: i64, d: i64) -> LocalCoef {
    LocalCoef::from_rational(BigRational::new(n.into(), d.into()))
}

fn status_opt(c: Option<&LocalCoef>) -> ZeroStatus {
    match c {
        None => ZeroStatus::Zero,
        Some(c) => c.zero_status(),
    }
}

fn identity_images(n: usize) -> Vec<Poly<LocalCoef>> {
    (0..n).map(|i| Poly::variable(n, i)).collect()
}

fn filter_terms(p: &Poly<LocalCoef>, keep: impl Fn(&Expo) -> bool) -> Poly<LocalCoef> {
    let mut out = Poly::new(p.nvars());
    for (e, c) in p.terms() {
        if keep(e) {
            out.insert_add(*e, c.clone());
        }
    }
    out
}

/// Extracts the local germ of `f` at `p`: picks the chart with the largest
/// certified coordinate, rescales the point to put that coordinate at 1,
/// and expands `f` around the point in the remaining affine coordinates.
/// Returns the germ and the chart index.
pub fn germ_at(
    f: &MultiPoly,
    p: &ProjectivePoint,
    precision: u32,
    max_order: u32,
) -> Result<(GermSeries, usize), SingError> {
    let n = f.nvars();
    assert_eq!(p.dim(), n, "point and surface must live in the same space");
    let pc: Vec<LocalCoef> = p
        .coords
        .iter()
        .map(|c| LocalCoef::from_value(c, precision))
        .collect::<Result<_, _>>()?;
    // Chart selection: the coordinate with the largest certified magnitude.
    let mut chart: Option<(usize, BigFloat)> = None;
    for (i, c) in pc.iter().enumerate() {
        let lb = c.magnitude_lower_bound();
        if !lb.is_positive() {
            continue;
        }
        match &chart {
            Some((_, best)) if !best.lt(&lb) => {}
            _ => chart = Some((i, lb)),
        }
    }
    let Some((chart, _)) = chart else {
        // No coordinate is certifiably nonzero at this precision.
        return Err(SingError::Undecided);
    };
    let nl = n - 1;
    // Local variable index for each original variable, and the translated
    // base polynomials (p_i / p_chart) + x_i.
    let mut local = vec![usize::MAX; n];
    let mut bases: Vec<Poly<LocalCoef>> = Vec::new();
    {
        let mut li = 0usize;
        for i in 0..n {
            if i == chart {
                continue;
            }
            local[i] = li;
            let ci = pc[i].div(&pc[chart])?;
            bases.push(Poly::variable(nl, li).add(&Poly::constant(nl, ci)));
            li += 1;
        }
    }
    // Per-variable power tables up to the largest exponent appearing in f.
    let mut max_exp = vec![0u8; n];
    for (e, _) in f.terms() {
        for i in 0..n {
            max_exp[i] = max_exp[i].max(e.get(i));
        }
    }
    let mut tables: Vec<Vec<Poly<LocalCoef>>> = Vec::new();
    for i in 0..n {
        if i == chart {
            continue;
        }
        let base = &bases[local[i]];
        let mut tab = vec![Poly::constant(nl, LocalCoef::one())];
        for k in 1..=max_exp[i] as usize {
            tab.push(tab[k - 1].mul_truncated(base, max_order));
        }
        tables.push(tab);
    }
    let mut germ = Poly::new(nl);
    for (e, c) in f.terms() {
        let mut t = Poly::constant(nl, LocalCoef::from_value(c, precision)?);
        for i in 0..n {
            if i == chart || e.get(i) == 0 {
                continue;
            }
            t = t.mul_truncated(&tables[local[i]][e.get(i) as usize], max_order);
        }
        germ = germ.add(&t);
    }
    Ok((GermSeries { poly: germ, order: max_order }, chart))
}

/// Classifies the singular point of `f = 0` at `p`.
///
/// On an undecided zero test the whole computation is retried at twice and
/// then four times the working precision before giving up.
pub fn classify(
    f: &MultiPoly,
    p: &ProjectivePoint,
    opts: &ClassifyOptions,
) -> Result<Classification, SingError> {
    let mut precision = clamp_precision(opts.precision);
    let mut last = None;
    for _ in 0..3 {
        match classify_at(f, p, precision, opts.max_order) {
            Err(SingError::Undecided) => {
                last = Some(Err(SingError::Undecided));
                precision = clamp_precision(precision.saturating_mul(2));
            }
            out => return out,
        }
    }
    last.unwrap()
}

fn classify_at(
    f: &MultiPoly,
    p: &ProjectivePoint,
    precision: u32,
    max_order: u32,
) -> Result<Classification, SingError> {
    let (germ, chart) = germ_at(f, p, precision, max_order)?;
    let (ade, corank) = classify_germ(&germ)?;
    Ok(Classification { ade, chart, corank })
}

/// Classifies a local germ directly.  Returns the type and the corank of
/// the quadratic part.
pub fn classify_germ(germ: &GermSeries) -> Result<(ADEType, usize), SingError> {
    let k = germ.order;
    let mut g = germ.poly.clone();
    // The germ of a singular point has no constant or linear part.  For
    // ball coefficients these are heuristic zeros; anything certified
    // nonzero means the point is not singular at all.
    for (e, c) in g.terms() {
        if e.total() <= 1 {
            match c.zero_status() {
                ZeroStatus::NonZero => return Err(SingError::NotSingular),
                ZeroStatus::Undecided => return Err(SingError::Undecided),
                ZeroStatus::Zero => {}
            }
        }
    }
    g = filter_terms(&g, |e| e.total() >= 2);

    let (square, kernel) = diagonalize(&mut g, k)?;
    let corank = kernel.len();
    match corank {
        0 => Ok((ADEType::A(1), 0)),
        1 | 2 => {
            split_squares(&mut g, &square, k)?;
            let h = kernel_residual(&g, &square, &kernel);
            let ade = if corank == 1 {
                a_chain(&h, k)?
            } else {
                de_chain(h, k)?
            };
            Ok((ade, corank))
        }
        _ => {
            if square.is_empty() {
                Err(SingError::NotDoublePoint)
            } else {
                Err(SingError::CorankTooHigh)
            }
        }
    }
}

/// Diagonalizes the quadratic part of `g` by congruence, applying each
/// elementary substitution to the whole germ.  Returns the square variables
/// with their diagonal coefficients, and the kernel variables.
fn diagonalize(
    g: &mut Poly<LocalCoef>,
    k: u32,
) -> Result<(Vec<(usize, LocalCoef)>, Vec<usize>), SingError> {
    let n = g.nvars();
    let mut processed = vec![false; n];
    let mut square: Vec<(usize, LocalCoef)> = Vec::new();
    let mut rounds = 0usize;
    loop {
        rounds += 1;
        if rounds > 2 * n + 4 {
            return Err(SingError::Undecided);
        }
        let quad = g.homogeneous_part(2);
        // Prefer a certified-nonzero diagonal entry as pivot.
        let mut pivot = None;
        let mut saw_undecided = false;
        for i in 0..n {
            if processed[i] {
                continue;
            }
            match status_opt(quad.coefficient(&Expo::var(i).scaled(2))) {
                ZeroStatus::NonZero => {
                    pivot = Some(i);
                    break;
                }
                ZeroStatus::Undecided => saw_undecided = true,
                ZeroStatus::Zero => {}
            }
        }
        let Some(i) = pivot else {
            // No usable diagonal entry.  A nonzero mixed term x_i*x_j can be
            // turned into a diagonal one by the substitution x_i <- x_i + x_j.
            let mut mixed = None;
            'outer: for i in 0..n {
                if processed[i] {
                    continue;
                }
                for j in (i + 1)..n {
                    if processed[j] {
                        continue;
                    }
                    match status_opt(quad.coefficient(&Expo::var(i).add(&Expo::var(j)))) {
                        ZeroStatus::NonZero => {
                            mixed = Some((i, j));
                            break 'outer;
                        }
                        ZeroStatus::Undecided => saw_undecided = true,
                        ZeroStatus::Zero => {}
                    }
                }
            }
            if let Some((i, j)) = mixed {
                let mut images = identity_images(n);
                images[i] = Poly::variable(n, i).add(&Poly::variable(n, j));
                *g = g.substitute(&images, Some(k));
                continue;
            }
            if saw_undecided {
                return Err(SingError::Undecided);
            }
            break;
        };
        let d = quad
            .coefficient(&Expo::var(i).scaled(2))
            .expect("pivot was just certified nonzero")
            .clone();
        // Kill every mixed term x_i*x_j by x_i <- x_i - (c/(2d)) x_j.
        let mut images = identity_images(n);
        let mut dirty = false;
        for j in 0..n {
            if j == i {
                continue;
            }
            let c = quad.coefficient(&Expo::var(i).add(&Expo::var(j)));
            match status_opt(c) {
                ZeroStatus::Zero => {}
                ZeroStatus::Undecided => return Err(SingError::Undecided),
                ZeroStatus::NonZero => {
                    let a = c.unwrap().div(&rat(2, 1).mul(&d))?;
                    images[i] = images[i].sub(&Poly::variable(n, j).scale(&a));
                    dirty = true;
                }
            }
        }
        if dirty {
            *g = g.substitute(&images, Some(k));
        }
        processed[i] = true;
        square.push((i, d));
    }
    let kernel = (0..n).filter(|&i| !processed[i]).collect();
    Ok((square, kernel))
}

/// Splits off the square variables: iterated shears
/// `x_i <- x_i - L_i/(2 d_i)` remove every term that is linear in a square
/// variable and free of the others, so the residual in the kernel variables
/// is exactly the critical-value series of the quadratic bundle.
fn split_squares(
    g: &mut Poly<LocalCoef>,
    square: &[(usize, LocalCoef)],
    k: u32,
) -> Result<(), SingError> {
    if square.is_empty() {
        return Ok(());
    }
    let n = g.nvars();
    if square.len() == n {
        return Ok(());
    }
    for _round in 0..=(k as usize + 2) {
        let mut acted = false;
        for &(i, ref d) in square {
            // L_i: terms with exponent exactly 1 in x_i and 0 in the other
            // square variables; heuristic zeros are noise and are skipped.
            // A kernel part of degree m > k - 2 is also skipped: the term
            // itself vanishes on restriction to the kernel, and every term
            // its shear would create has degree >= m + 2 > k, beyond the
            // truncation order — so the skip is exact, and it keeps
            // top-order ball noise from being re-sheared forever.
            let mut l = Poly::new(n);
            for (e, c) in g.terms() {
                if e.get(i) != 1 {
                    continue;
                }
                if square.iter().any(|&(j, _)| j != i && e.get(j) != 0) {
                    continue;
                }
                if c.zero_status() == ZeroStatus::Zero {
                    continue;
                }
                if e.total() as u32 + 1 > k {
                    continue;
                }
                l.insert_add(e.with(i, 0), c.clone());
            }
            if l.is_zero() {
                continue;
            }
            let factor = rat(-1, 1).div(&rat(2, 1).mul(d))?;
            let mut images = identity_images(n);
            images[i] = Poly::variable(n, i).add(&l.scale(&factor));
            *g = g.substitute(&images, Some(k));
            acted = true;
        }
        if !acted {
            return Ok(());
        }
    }
    // With the order cap above, every certified term is consumed within
    // k rounds; exhaustion means an undecidable coefficient kept the loop
    // busy, which more precision can settle.
    Err(SingError::Undecided)
}

/// Restricts the germ to the kernel variables (sets every square variable
/// to zero) and renumbers the kernel variables compactly.
fn kernel_residual(
    g: &Poly<LocalCoef>,
    square: &[(usize, LocalCoef)],
    kernel: &[usize],
) -> Poly<LocalCoef> {
    let mut out = Poly::new(kernel.len().max(1));
    for (e, c) in g.terms() {
        if square.iter().any(|&(i, _)| e.get(i) != 0) {
            continue;
        }
        let mut e2 = Expo::zero();
        for (new_i, &old_i) in kernel.iter().enumerate() {
            e2 = e2.with(new_i, e.get(old_i));
        }
        out.insert_add(e2, c.clone());
    }
    out
}

/// Corank-1 recognition: the residual is `u^s * unit`, giving `A_{s-1}`.
fn a_chain(h: &Poly<LocalCoef>, k: u32) -> Result<ADEType, SingError> {
    for s in 2..=k {
        match status_opt(h.coefficient(&Expo::var(0).scaled(s as u8))) {
            ZeroStatus::NonZero => {
                if s == 2 {
                    // A nonzero square term on a kernel variable contradicts
                    // the diagonalization; the data is too noisy to trust.
                    return Err(SingError::Undecided);
                }
                return Ok(ADEType::A(s - 1));
            }
            ZeroStatus::Undecided => return Err(SingError::Undecided),
            ZeroStatus::Zero => {}
        }
    }
    Err(SingError::TruncationInsufficient)
}

/// Corank-2 recognition: `D` and `E` types, decided by the root structure
/// of the cubic part of the residual.
fn de_chain(h: Poly<LocalCoef>, k: u32) -> Result<ADEType, SingError> {
    let e30 = Expo::var(0).scaled(3);
    let e21 = Expo::var(0).scaled(2).add(&Expo::var(1));
    let e12 = Expo::var(0).add(&Expo::var(1).scaled(2));
    let e03 = Expo::var(1).scaled(3);
    let zero = LocalCoef::zero();
    let coef = |e: &Expo| h.coefficient(e).cloned().unwrap_or_else(|| zero.clone());
    let (a, b, c, d) = (coef(&e30), coef(&e21), coef(&e12), coef(&e03));
    let statuses = [a.zero_status(), b.zero_status(), c.zero_status(), d.zero_status()];
    if statuses.contains(&ZeroStatus::Undecided) {
        return Err(SingError::Undecided);
    }
    if statuses.iter().all(|s| *s == ZeroStatus::Zero) {
        // Vanishing cubic: corank 2 but beyond the A-D-E range.
        return Err(SingError::CorankTooHigh);
    }
    // Discriminant of a*u^3 + b*u^2 v + c*u v^2 + d*v^3.
    let disc = {
        let t18 = rat(18, 1).mul(&a).mul(&b).mul(&c).mul(&d);
        let t4b = rat(-4, 1).mul(&b).mul(&b).mul(&b).mul(&d);
        let tbc = b.mul(&b).mul(&c).mul(&c);
        let t4c = rat(-4, 1).mul(&a).mul(&c).mul(&c).mul(&c);
        let t27 = rat(-27, 1).mul(&a).mul(&a).mul(&d).mul(&d);
        t18.add(&t4b).add(&tbc).add(&t4c).add(&t27)
    };
    match disc.zero_status() {
        ZeroStatus::NonZero => return Ok(ADEType::D(4)),
        ZeroStatus::Undecided => return Err(SingError::Undecided),
        ZeroStatus::Zero => {}
    }
    // Repeated root.  The Hessian of the cubic separates double from triple:
    // it vanishes identically exactly for a perfect cube.
    let ha = rat(12, 1).mul(&a).mul(&c).add(&rat(-4, 1).mul(&b).mul(&b));
    let hb = rat(36, 1).mul(&a).mul(&d).add(&rat(-4, 1).mul(&b).mul(&c));
    let hc = rat(12, 1).mul(&b).mul(&d).add(&rat(-4, 1).mul(&c).mul(&c));
    let hstat = [ha.zero_status(), hb.zero_status(), hc.zero_status()];
    if hstat.contains(&ZeroStatus::Undecided) {
        return Err(SingError::Undecided);
    }
    if hstat.iter().all(|s| *s == ZeroStatus::Zero) {
        e_branch(h, (a, b, c, d), k)
    } else {
        d_branch(h, (ha, hb, hc), k)
    }
}

/// Applies the linear change of the two kernel variables sending the given
/// direction `w = (w0, w1)` to the new `u`-axis, so that a line vanishing on
/// `w` becomes proportional to the new `v`.
fn align_direction(h: &Poly<LocalCoef>, w: (LocalCoef, LocalCoef), k: u32) -> Poly<LocalCoef> {
    // New coordinates (U, V) with old = U*w + V*w', where w' completes w to
    // a basis: w' = (1, 0) when w1 is the reliable component, (0, 1) when w0.
    let n = h.nvars();
    let u = Poly::variable(n, 0);
    let v = Poly::variable(n, 1);
    let mut images = identity_images(n);
    if w.1.zero_status() == ZeroStatus::NonZero {
        // w = (t0, 1), w' = (1, 0): old u = t0*U + V, old v = U.
        images[0] = u.scale(&w.0).add(&v);
        images[1] = u;
    } else {
        // w = (1, s0), w' = (0, 1): old u = U, old v = s0*U + V.
        images[1] = u.scale(&w.1).add(&v);
        images[0] = u;
    }
    h.substitute(&images, Some(k))
}

/// The `D_m` chain (m >= 5): cubic with a double root.
fn d_branch(
    h: Poly<LocalCoef>,
    hess: (LocalCoef, LocalCoef, LocalCoef),
    k: u32,
) -> Result<ADEType, SingError> {
    let (ha, hb, hc) = hess;
    // The Hessian quadratic is a perfect square vanishing on the double-root
    // direction of the cubic.
    let w = match (ha.zero_status(), hc.zero_status()) {
        (ZeroStatus::NonZero, _) => {
            let t0 = hb.neg().div(&rat(2, 1).mul(&ha))?;
            (t0, LocalCoef::one())
        }
        (_, ZeroStatus::NonZero) => {
            let s0 = hb.neg().div(&rat(2, 1).mul(&hc))?;
            (LocalCoef::one(), s0)
        }
        // A perfect square with both square coefficients zero is zero.
        _ => return Err(SingError::Undecided),
    };
    let mut h = align_direction(&h, w, k);
    // Cubic is now v^2 (alpha*u + beta*v); normalize to u*v^2 by absorbing
    // beta into u.
    let e12 = Expo::var(0).add(&Expo::var(1).scaled(2));
    let e03 = Expo::var(1).scaled(3);
    let alpha = h.coefficient(&e12).cloned().unwrap_or_else(LocalCoef::zero);
    if alpha.zero_status() != ZeroStatus::NonZero {
        return Err(SingError::Undecided);
    }
    let beta = h.coefficient(&e03).cloned().unwrap_or_else(LocalCoef::zero);
    if beta.zero_status() != ZeroStatus::Zero {
        let mut images = identity_images(2);
        // old u = (U - beta*V)/alpha keeps the v^2 factor and sets the cubic
        // to exactly U*V^2 (up to evaluation noise).
        images[0] = Poly::variable(2, 0)
            .scale(&LocalCoef::one().div(&alpha)?)
            .sub(&Poly::variable(2, 1).scale(&beta.div(&alpha)?));
        h = h.substitute(&images, Some(k));
    }
    // Remove all v-linear terms c*u^a*v by shears v <- v - (c/(2 w0)) u^{a-1},
    // where w0 is the coefficient of u*v^2.
    let e_uv2 = e12;
    for _ in 0..=(k as usize + 2) {
        let mut lowest: Option<(u8, LocalCoef)> = None;
        for a in 0..=(k as u8) {
            let e = Expo::var(0).scaled(a).add(&Expo::var(1));
            let c = h.coefficient(&e).cloned().unwrap_or_else(LocalCoef::zero);
            if c.zero_status() != ZeroStatus::Zero {
                lowest = Some((a, c));
                break;
            }
        }
        let Some((a, c)) = lowest else { break };
        if a < 2 {
            // A surviving linear or quadratic cross term contradicts the
            // earlier reductions; the data is too noisy.
            return Err(SingError::Undecided);
        }
        let w0 = h.coefficient(&e_uv2).cloned().unwrap_or_else(LocalCoef::zero);
        if w0.zero_status() != ZeroStatus::NonZero {
            return Err(SingError::Undecided);
        }
        let delta = c.neg().div(&rat(2, 1).mul(&w0))?;
        let mut images = identity_images(2);
        images[1] = Poly::variable(2, 1).add(&Poly::monomial(
            2,
            Expo::var(0).scaled(a - 1),
            delta,
        ));
        h = h.substitute(&images, Some(k));
    }
    // Verify the v-linear part is gone within the truncation order.
    for a in 0..=(k as u8) {
        let e = Expo::var(0).scaled(a).add(&Expo::var(1));
        match status_opt(h.coefficient(&e)) {
            ZeroStatus::Zero => {}
            ZeroStatus::NonZero => return Err(SingError::TruncationInsufficient),
            ZeroStatus::Undecided => return Err(SingError::Undecided),
        }
    }
    // Read off the order of the pure-u part: u^s gives D_{s+1}.
    for s in 4..=(k as u8) {
        match status_opt(h.coefficient(&Expo::var(0).scaled(s))) {
            ZeroStatus::NonZero => return Ok(ADEType::D(s as u32 + 1)),
            ZeroStatus::Undecided => return Err(SingError::Undecided),
            ZeroStatus::Zero => {}
        }
    }
    Err(SingError::TruncationInsufficient)
}

/// The `E6`/`E7`/`E8` recognition: cubic with a triple root.
fn e_branch(
    h: Poly<LocalCoef>,
    cubic: (LocalCoef, LocalCoef, LocalCoef, LocalCoef),
    k: u32,
) -> Result<ADEType, SingError> {
    let (a, b, c, d) = cubic;
    // Triple-root direction of the cubic.
    let w = match (a.zero_status(), d.zero_status()) {
        (ZeroStatus::NonZero, _) => {
            let t0 = b.neg().div(&rat(3, 1).mul(&a))?;
            (t0, LocalCoef::one())
        }
        (_, ZeroStatus::NonZero) => {
            let s0 = c.neg().div(&rat(3, 1).mul(&d))?;
            (LocalCoef::one(), s0)
        }
        // A perfect cube has a nonzero coefficient on at least one of the
        // two pure-power monomials.
        _ => return Err(SingError::Undecided),
    };
    let mut h = align_direction(&h, w, k);
    let e03 = Expo::var(1).scaled(3);
    let gamma = h.coefficient(&e03).cloned().unwrap_or_else(LocalCoef::zero);
    if gamma.zero_status() != ZeroStatus::NonZero {
        return Err(SingError::Undecided);
    }
    // Absorb every term divisible by v^2 (beyond gamma*v^3 itself) into v by
    // shears v <- v - s/(3 gamma).
    for _ in 0..=(k as usize + 2) {
        let mut bpoly = Poly::new(2);
        for (e, cf) in h.terms() {
            if e.get(1) < 2 || e.total() < 4 {
                continue;
            }
            if cf.zero_status() == ZeroStatus::Zero {
                continue;
            }
            bpoly.insert_add(e.with(1, e.get(1) - 2), cf.clone());
        }
        if bpoly.is_zero() {
            break;
        }
        let factor = rat(-1, 1).div(&rat(3, 1).mul(&gamma))?;
        let mut images = identity_images(2);
        images[1] = Poly::variable(2, 1).add(&bpoly.scale(&factor));
        h = h.substitute(&images, Some(k));
    }
    for (e, cf) in h.terms() {
        if e.get(1) < 2 || e.total() < 4 {
            continue;
        }
        match cf.zero_status() {
            ZeroStatus::Zero => {}
            ZeroStatus::NonZero => return Err(SingError::TruncationInsufficient),
            ZeroStatus::Undecided => return Err(SingError::Undecided),
        }
    }
    // Recognition coefficients: u^4 (E6), u^3 v (E7), u^5 (E8).
    let a4 = status_opt(h.coefficient(&Expo::var(0).scaled(4)));
    if a4 == ZeroStatus::Undecided {
        return Err(SingError::Undecided);
    }
    if a4 == ZeroStatus::NonZero {
        return Ok(ADEType::E(6));
    }
    let b4 = status_opt(h.coefficient(&Expo::var(0).scaled(3).add(&Expo::var(1))));
    if b4 == ZeroStatus::Undecided {
        return Err(SingError::Undecided);
    }
    if b4 == ZeroStatus::NonZero {
        return Ok(ADEType::E(7));
    }
    let c5 = status_opt(h.coefficient(&Expo::var(0).scaled(5)));
    match c5 {
        ZeroStatus::NonZero => Ok(ADEType::E(8)),
        ZeroStatus::Undecided => Err(SingError::Undecided),
        // v^3 + (nothing recognizable): outside the A-D-E range.
        ZeroStatus::Zero => Err(SingError::CorankTooHigh),
    }
}
