//! Piecewise planners on the space of oriented lines of ℝ³.
//!
//! Two families of admissible curves are used as plan pieces:
//!
//! * helicoidal pieces — one α-helicoidal motion Γ_{ℓ,p,A} restricted to a
//!   time interval ([`plan_helicoidal_3`] joins any two lines with at most
//!   three of them, and [`two_piece_residual`] produces grid evidence that
//!   two never suffice for the reversal ℓ → −ℓ);
//! * screw pieces — α-admissible orbits of one-parameter rigid motion
//!   groups ([`plan_homogeneous_2`] joins any two lines with at most two,
//!   via [`screw_hop_solve`]).
//!
//! Plans chain their pieces and carry the executed endpoint residual;
//! [`execute_plan`] replays a plan forward and recomputes that residual.

mod screw_hop;
mod three_piece;

pub use screw_hop::{plan_homogeneous_2, screw_hop_solve, ScrewHop, ScrewHopOptions};
pub use three_piece::{plan_helicoidal_3, plan_parallel};

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::admissible::ScrewParams;
use crate::error::{GeomError, PlannerError};
use crate::lines::{helicoidal_curve, HelicoidalFrame, OrientedGeodesic};
use crate::spaceform::{Curvature, Isometry, SpacePoint, TangentVector};

/// Chaining tolerance: consecutive pieces must start where the previous
/// piece ended, up to this canonical-coordinate distance.
pub const CHAIN_TOL: f64 = 1e-6;

/// One α-helicoidal motion run for a fixed axis length.
#[derive(Debug, Clone)]
pub struct HelicoidalPiece {
    pub frame: HelicoidalFrame,
    pub duration: f64,
}

impl HelicoidalPiece {
    pub fn endpoint(&self) -> Result<OrientedGeodesic, GeomError> {
        helicoidal_curve(&self.frame, self.duration)
    }
}

/// One admissible homogeneous (screw-orbit) motion run for a fixed time.
#[derive(Debug, Clone)]
pub struct ScrewPiece {
    pub params: ScrewParams,
    pub start: OrientedGeodesic,
    pub duration: f64,
}

impl ScrewPiece {
    pub fn endpoint(&self) -> Result<OrientedGeodesic, GeomError> {
        let g = self.params.motion_at(self.duration)?;
        crate::lines::act_on_geodesic(&g, &self.start)
    }
}

#[derive(Debug, Clone)]
pub enum PlanPiece {
    Helicoidal(HelicoidalPiece),
    Screw(ScrewPiece),
}

impl PlanPiece {
    pub fn start(&self) -> &OrientedGeodesic {
        match self {
            PlanPiece::Helicoidal(p) => p.frame.line(),
            PlanPiece::Screw(p) => &p.start,
        }
    }

    pub fn duration(&self) -> f64 {
        match self {
            PlanPiece::Helicoidal(p) => p.duration,
            PlanPiece::Screw(p) => p.duration,
        }
    }

    pub fn endpoint(&self) -> Result<OrientedGeodesic, GeomError> {
        match self {
            PlanPiece::Helicoidal(p) => p.endpoint(),
            PlanPiece::Screw(p) => p.endpoint(),
        }
    }
}

/// An ordered list of pieces joining `source` to `target`.
#[derive(Debug, Clone)]
pub struct Plan {
    pub alpha: f64,
    pub pieces: Vec<PlanPiece>,
    pub source: OrientedGeodesic,
    pub target: OrientedGeodesic,
    /// Canonical-coordinate distance between the executed endpoint and
    /// `target`, as recomputed by the last [`execute_plan`] call.
    pub endpoint_residual: f64,
}

impl Plan {
    pub fn empty(alpha: f64, source: OrientedGeodesic, target: OrientedGeodesic) -> Self {
        Plan {
            alpha,
            pieces: Vec::new(),
            source,
            target,
            endpoint_residual: 0.0,
        }
    }
}

/// Replay a plan: verify the chaining of consecutive pieces, evaluate each
/// piece at its duration, store and return the final geodesic.
pub fn execute_plan(plan: &mut Plan) -> Result<OrientedGeodesic, PlannerError> {
    let mut current = plan.source;
    for (index, piece) in plan.pieces.iter().enumerate() {
        let gap = piece.start().canonical_distance(&current)?;
        if gap > CHAIN_TOL {
            return Err(PlannerError::BrokenPlan { index, gap });
        }
        current = piece.endpoint()?;
    }
    plan.endpoint_residual = current.canonical_distance(&plan.target)?;
    Ok(current)
}

/// Grid specification for the two-piece reachability search.
///
/// The four parameters of a two-piece candidate are the first-piece
/// duration, the second-piece base point along the intermediate line, the
/// angle of the second axis in the plane orthogonal to the intermediate
/// line, and the second-piece duration. Durations range over one full
/// direction period 2π/|α| and base offsets over ±(π/|α| + 1) unless
/// overridden.
#[derive(Debug, Clone, Copy)]
pub struct TwoPieceGrid {
    pub t0_steps: usize,
    pub s_steps: usize,
    pub phi_steps: usize,
    pub t1_steps: usize,
    pub t_max: Option<f64>,
    pub s_max: Option<f64>,
}

impl Default for TwoPieceGrid {
    fn default() -> Self {
        TwoPieceGrid {
            t0_steps: 11,
            s_steps: 11,
            phi_steps: 8,
            t1_steps: 11,
            t_max: None,
            s_max: None,
        }
    }
}

impl TwoPieceGrid {
    pub fn total_points(&self) -> usize {
        self.t0_steps * self.s_steps * self.phi_steps * self.t1_steps
    }

    /// Multiply every step count, keeping the ranges.
    pub fn refined(&self, factor: usize) -> Self {
        TwoPieceGrid {
            t0_steps: self.t0_steps * factor,
            s_steps: self.s_steps * factor,
            phi_steps: self.phi_steps * factor,
            t1_steps: self.t1_steps * factor,
            ..*self
        }
    }
}

/// Minimum canonical distance from any two-piece helicoidal endpoint to the
/// reversed line −ℓ, over the parameter grid. The reversal is never reached
/// exactly; this search quantifies the gap on a compact parameter window.
pub fn two_piece_residual(
    line: &OrientedGeodesic,
    alpha: f64,
    grid: &TwoPieceGrid,
) -> Result<f64, PlannerError> {
    two_piece_residual_to(line, &line.reverse(), alpha, grid)
}

/// Same search against an arbitrary target; with the target equal to ℓ
/// itself the first piece can be exactly retraced and the minimum drops
/// to zero.
pub fn two_piece_residual_to(
    line: &OrientedGeodesic,
    target: &OrientedGeodesic,
    alpha: f64,
    grid: &TwoPieceGrid,
) -> Result<f64, PlannerError> {
    if line.kappa() != Curvature::Euclidean {
        return Err(GeomError::Unsupported {
            kappa: line.kappa().as_int(),
            what: "the two-piece search runs on oriented lines of R^3".into(),
        }
        .into());
    }
    if alpha == 0.0 {
        return Err(GeomError::invalid("two-piece search needs alpha != 0").into());
    }
    // normalize: move `line` to the x-axis (the symmetry group of the pair
    // (ℓ, target-distance) lets the first piece start at the origin with
    // axis e₂)
    let rot = crate::lines::rotation_taking(line.spatial_dir(), Vector3::x());
    let g = Isometry::from_rotation_translation(rot, -rot * line.spatial_base());
    let axis_line = OrientedGeodesic::x_axis();
    let tgt = crate::lines::act_on_geodesic(&g, target)?;

    let period = 2.0 * std::f64::consts::PI / alpha.abs();
    let t_max = grid.t_max.unwrap_or(period);
    let s_max = grid
        .s_max
        .unwrap_or(std::f64::consts::PI / alpha.abs() + 1.0);

    let origin = SpacePoint::from_spatial(Vector3::zeros());
    let axis1 = TangentVector::from_spatial(origin, Vector3::y())?;
    let frame1 = HelicoidalFrame::new(axis_line, origin, axis1, alpha)?;

    let mut best = f64::INFINITY;
    for i0 in 0..grid.t0_steps {
        let t0 = (i0 + 1) as f64 * t_max / grid.t0_steps as f64;
        let l1 = helicoidal_curve(&frame1, t0)?;
        let v1 = l1.spatial_dir();
        let u1 = l1.spatial_base();
        // v1 stays in the xz-plane, so e₂ is a valid axis direction and
        // {e₂, v1×e₂} spans the plane orthogonal to ℓ₁
        let n2 = v1.cross(&Vector3::y());
        for is in 0..grid.s_steps {
            let s0 = -s_max + 2.0 * s_max * is as f64 / (grid.s_steps - 1).max(1) as f64;
            let p = SpacePoint::from_spatial(u1 + v1 * s0);
            for ip in 0..grid.phi_steps {
                let phi = 2.0 * std::f64::consts::PI * ip as f64 / grid.phi_steps as f64;
                let a_dir = Vector3::y() * phi.cos() + n2 * phi.sin();
                let a = TangentVector::from_spatial(p, a_dir)?;
                let frame2 = HelicoidalFrame::new(l1, p, a, alpha)?;
                for i1 in 0..grid.t1_steps {
                    let t1 = i1 as f64 * t_max / (grid.t1_steps - 1).max(1) as f64;
                    let end = helicoidal_curve(&frame2, t1)?;
                    let r = end.canonical_distance(&tgt)?;
                    if r < best {
                        best = r;
                    }
                }
            }
        }
    }
    Ok(best)
}

// --- JSON representation -------------------------------------------------
//
// {"schema":"plan/v1","alpha":..,"source":{..},"target":{..},
//  "pieces":[{"type":"helicoidal",..}|{"type":"screw",..}],
//  "endpoint_residual":..}

const PLAN_SCHEMA: &str = "plan/v1";

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum PieceRepr {
    Helicoidal {
        line: OrientedGeodesic,
        p: [f64; 4],
        a: [f64; 4],
        alpha: f64,
        duration: f64,
    },
    Screw {
        theta: f64,
        lambda: f64,
        rho: f64,
        eta: f64,
        /// Row-major 4×4 matrix of the conjugating frame.
        frame: Vec<f64>,
        start: OrientedGeodesic,
        duration: f64,
    },
}

fn matrix_row_major(m: &Matrix4<f64>) -> Vec<f64> {
    (0..4)
        .flat_map(|r| (0..4).map(move |c| m[(r, c)]))
        .collect()
}

impl From<&PlanPiece> for PieceRepr {
    fn from(piece: &PlanPiece) -> Self {
        match piece {
            PlanPiece::Helicoidal(h) => {
                let p = h.frame.axis_origin().coords();
                let a = h.frame.axis().vec();
                PieceRepr::Helicoidal {
                    line: *h.frame.line(),
                    p: [p[0], p[1], p[2], p[3]],
                    a: [a[0], a[1], a[2], a[3]],
                    alpha: h.frame.alpha(),
                    duration: h.duration,
                }
            }
            PlanPiece::Screw(s) => PieceRepr::Screw {
                theta: s.params.theta,
                lambda: s.params.lambda,
                rho: s.params.rho,
                eta: s.params.eta,
                frame: matrix_row_major(s.params.frame.matrix()),
                start: s.start,
                duration: s.duration,
            },
        }
    }
}

impl PieceRepr {
    fn build(self) -> Result<PlanPiece, GeomError> {
        match self {
            PieceRepr::Helicoidal {
                line,
                p,
                a,
                alpha,
                duration,
            } => {
                let base = SpacePoint::new(line.kappa(), Vector4::from(p))?;
                let axis = TangentVector::new(base, Vector4::from(a))?;
                let frame = HelicoidalFrame::new(line, base, axis, alpha)?;
                Ok(PlanPiece::Helicoidal(HelicoidalPiece { frame, duration }))
            }
            PieceRepr::Screw {
                theta,
                lambda,
                rho,
                eta,
                frame,
                start,
                duration,
            } => {
                if frame.len() != 16 {
                    return Err(GeomError::invalid(
                        "screw frame must be a row-major 4x4 matrix (16 floats)",
                    ));
                }
                let mat = Matrix4::from_row_slice(&frame);
                let frame = Isometry::new(Curvature::Euclidean, mat)?;
                let params = ScrewParams::new(theta, lambda, rho, eta, frame)?;
                Ok(PlanPiece::Screw(ScrewPiece {
                    params,
                    start,
                    duration,
                }))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PlanRepr {
    schema: String,
    alpha: f64,
    source: OrientedGeodesic,
    target: OrientedGeodesic,
    pieces: Vec<PieceRepr>,
    endpoint_residual: f64,
}

impl Serialize for Plan {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PlanRepr {
            schema: PLAN_SCHEMA.to_string(),
            alpha: self.alpha,
            source: self.source,
            target: self.target,
            pieces: self.pieces.iter().map(PieceRepr::from).collect(),
            endpoint_residual: self.endpoint_residual,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Plan {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PlanRepr::deserialize(deserializer)?;
        if repr.schema != PLAN_SCHEMA {
            return Err(D::Error::custom(format!(
                "unsupported plan schema {:?}, expected {PLAN_SCHEMA:?}",
                repr.schema
            )));
        }
        let pieces = repr
            .pieces
            .into_iter()
            .map(|p| p.build().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Plan {
            alpha: repr.alpha,
            pieces,
            source: repr.source,
            target: repr.target,
            endpoint_residual: repr.endpoint_residual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::screw_exponential;

    #[test]
    fn empty_plan_executes_to_the_source() {
        let l = OrientedGeodesic::x_axis();
        let mut plan = Plan::empty(1.0, l, l);
        let end = execute_plan(&mut plan).unwrap();
        assert!(end.equals(&l, 1e-12).unwrap());
        assert_eq!(plan.endpoint_residual, 0.0);
    }

    #[test]
    fn single_standard_piece_matches_the_screw_orbit() {
        let alpha = 1.4;
        let t = 0.9;
        let frame = HelicoidalFrame::standard(Curvature::Euclidean, alpha);
        let source = *frame.line();
        let s = screw_exponential(Curvature::Euclidean, alpha, t).unwrap();
        let expected = crate::lines::act_on_geodesic(&s, &source).unwrap();
        let mut plan = Plan {
            alpha,
            pieces: vec![PlanPiece::Helicoidal(HelicoidalPiece {
                frame,
                duration: t,
            })],
            source,
            target: expected,
            endpoint_residual: f64::NAN,
        };
        let end = execute_plan(&mut plan).unwrap();
        assert!(end.equals(&expected, 1e-10).unwrap());
        assert!(plan.endpoint_residual < 1e-10);
    }

    #[test]
    fn broken_chains_are_reported() {
        let alpha = 1.0;
        let frame = HelicoidalFrame::standard(Curvature::Euclidean, alpha);
        let far =
            OrientedGeodesic::from_spatial(Vector3::new(0.0, 5.0, 0.0), Vector3::x()).unwrap();
        let mut plan = Plan {
            alpha,
            pieces: vec![PlanPiece::Helicoidal(HelicoidalPiece {
                frame,
                duration: 1.0,
            })],
            source: far,
            target: far,
            endpoint_residual: 0.0,
        };
        match execute_plan(&mut plan) {
            Err(PlannerError::BrokenPlan { index: 0, gap }) => assert!(gap > 1.0),
            other => panic!("expected a broken-plan error, got {other:?}"),
        }
    }

    #[test]
    fn two_piece_search_hits_zero_when_the_target_is_the_line_itself() {
        let l = OrientedGeodesic::x_axis();
        let grid = TwoPieceGrid {
            t0_steps: 6,
            s_steps: 7,
            phi_steps: 8,
            t1_steps: 6,
            ..TwoPieceGrid::default()
        };
        let r = two_piece_residual_to(&l, &l, 1.0, &grid).unwrap();
        assert!(
            r < 1e-9,
            "retracing the first piece should reach the line, r = {r}"
        );
    }

    #[test]
    fn two_piece_search_stays_away_from_the_reversal() {
        let l = OrientedGeodesic::x_axis();
        let grid = TwoPieceGrid {
            t0_steps: 8,
            s_steps: 7,
            phi_steps: 8,
            t1_steps: 8,
            ..TwoPieceGrid::default()
        };
        let r = two_piece_residual(&l, 1.0, &grid).unwrap();
        assert!(
            r > 0.1,
            "two-piece reversal residual unexpectedly small: {r}"
        );
    }

    #[test]
    fn plan_json_round_trip() {
        let alpha = 0.8;
        let frame = HelicoidalFrame::standard(Curvature::Euclidean, alpha);
        let source = *frame.line();
        let mut plan = Plan {
            alpha,
            pieces: vec![PlanPiece::Helicoidal(HelicoidalPiece {
                frame,
                duration: 1.2,
            })],
            source,
            target: source,
            endpoint_residual: 0.0,
        };
        execute_plan(&mut plan).unwrap();
        let text = serde_json::to_string(&plan).unwrap();
        assert!(text.contains("\"schema\":\"plan/v1\""));
        assert!(text.contains("\"type\":\"helicoidal\""));
        let mut back: Plan = serde_json::from_str(&text).unwrap();
        let e1 = execute_plan(&mut back).unwrap();
        let e2 = execute_plan(&mut plan).unwrap();
        assert!(e1.equals(&e2, 1e-12).unwrap());
        // schema string is enforced
        let bad = text.replace("plan/v1", "plan/v9");
        assert!(serde_json::from_str::<Plan>(&bad).is_err());
    }
}
