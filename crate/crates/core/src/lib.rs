//! Defect and Hodge numbers of resolved threefold hypersurfaces with
//! A-D-E singularities.
//!
//! The pipeline: describe a hypersurface (a branch surface in `P^3` plus a
//! cyclic cover degree, or a quintic in `P^4` with a tangent plane), locate
//! and classify its Du Val singular points, assemble the linear-condition
//! matrices those points impose on forms of prescribed degrees, compute
//! certified ranks, and feed the ranks into closed-form expressions for the
//! defect and the Hodge numbers `h^{1,1}`, `h^{1,2}` of the resolutions.
//!
//! Modules mirror the stages:
//! * [`numbers`] — exact rationals, complex interval (ball) arithmetic, and
//!   algebraic numbers given by root-isolating recipes.
//! * [`poly`] — sparse multivariate polynomials over those scalars.
//! * [`singular`] — singular-point detection, A-D-E classification, adapted
//!   frames, Milnor numbers, cyclic-cover type lifts.
//! * [`defect`] — condition matrices, exact and certified-numeric rank,
//!   defect formulas for double/triple/n-fold covers.
//! * [`hodge`] — Hodge-number and Euler-characteristic formulas, plus the
//!   big-resolution/small-resolution conversions.
//! * [`gallery`] — reproducible worked examples with verified inventories.

pub mod defect;
pub mod gallery;
pub mod hodge;
pub mod numbers;
pub mod poly;
pub mod singular;
