//! Helicoidal motions of oriented geodesics in the three-dimensional space
//! forms ℝ³, S³ and H³.
//!
//! The manifold G_κ of oriented complete geodesics of the space form of
//! curvature κ carries a family of distinguished curves: a ray sliding along
//! a unit-speed geodesic axis while rotating about it with constant angular
//! speed α sweeps a helicoid, and the corresponding curve of rays in G_κ is
//! called α-helicoidal. This crate provides
//!
//! * [`spaceform`] — closed-form metric, geodesics, parallel transport,
//!   cross product, isometry groups and the screw flow exp(tξ_α) in a single
//!   ℝ⁴-embedded model for all three curvatures;
//! * [`lines`] — canonical representations of oriented geodesics, the
//!   helicoidal surfaces/curves, group actions, and the Euclidean common
//!   perpendicular;
//! * [`quatsphere`] — quaternionic machinery for κ = 1: the two-to-one covers
//!   of SO(3) and SO(4), the identification of oriented great circles with
//!   S²×S², and Hopf-fibration classification;
//! * [`admissible`] — Jacobi fields and every admissibility criterion
//!   (Jacobi, ruled-surface, homogeneous screw), the fiber frame
//!   Ad(k(s,t))(ξ_α), the numerical substantiality rank, and the isotropy
//!   triviality check;
//! * [`planner`] — constructive piecewise planners on the space of oriented
//!   lines: the 3-piece helicoidal planner, the 2-piece homogeneous screw
//!   planner, plan execution, and the 2-piece impossibility residual search.
//!
//! A structural remark worth keeping in mind: the bundle of α-admissible
//! directions over G_κ is not topologically trivial when α² ≠ κ (its total
//! space has the fundamental group of the isometry group, not of a
//! product), so no global "admissible frame" exists and nothing here is
//! computed in a global trivialization — fibers are always reached through
//! the group action from the reference configuration.
//!
//! Everything is pure and deterministic: values are immutable after
//! construction, sampling operations take explicit seeds, and no global
//! state exists, so all types are safe to share across threads.

pub mod admissible;
pub mod error;
pub mod lines;
pub mod planner;
pub mod quatsphere;
pub mod spaceform;

pub use error::{GeomError, PlannerError};
pub use lines::{HelicoidalFrame, OrientedGeodesic};
pub use planner::{HelicoidalPiece, Plan, PlanPiece, ScrewPiece};
pub use quatsphere::{Quaternion, SphereCirclePoint};
pub use spaceform::{Curvature, Isometry, LieAlgebraElement, SpacePoint, TangentVector};
