//! Joining oriented lines by admissible homogeneous (screw-orbit) motions.
//!
//! A screw with axis L, rates (θ, λ) and the moved line at distance ρ and
//! angle η from L produces an α-admissible orbit exactly when
//! |θ sin η| = |α| and α(λ + ρθ cot η) = θ. Two closed-form hop families are
//! recognized directly:
//!
//! * intersecting pairs at angle 2η ∈ (0, π): the screw about the bisector
//!   axis through the intersection with θ = α/sin η, λ = 1/sin η reaches the
//!   target after a half turn;
//! * antiparallel pairs offset by exactly π/|α|: the η = π/2 member of the
//!   same family.
//!
//! Every other pair goes to a damped least-squares search over the screw
//! axis, the rates, and the stopping time, with the residual combining the
//! line-matching chart (4 components) and the two admissibility equations.
//! The search starts from a handful of geometric seeds; failure to converge
//! is reported as infeasibility, not as an error — the reversal ℓ → −ℓ is
//! genuinely unreachable in one hop.
//!
//! The two-piece planner routes through an intermediate line meeting both
//! endpoints — the common perpendicular when it exists, chords joining a
//! point of each line otherwise — so that both hops are intersecting pairs
//! and resolve in closed form.

use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

use crate::admissible::{screw_admissible, ScrewParams};
use crate::error::{GeomError, PlannerError};
use crate::lines::{common_perpendicular_euclidean, CommonPerpendicular, OrientedGeodesic};
use crate::planner::{execute_plan, Plan, PlanPiece, ScrewPiece};
use crate::spaceform::{Curvature, Isometry};

const PI: f64 = std::f64::consts::PI;

/// Search budget for the damped least-squares hop solver.
#[derive(Debug, Clone, Copy)]
pub struct ScrewHopOptions {
    /// Multi-start seed count.
    pub seeds: usize,
    /// Iteration budget per seed.
    pub max_iters: usize,
}

impl Default for ScrewHopOptions {
    fn default() -> Self {
        ScrewHopOptions {
            seeds: 8,
            max_iters: 200,
        }
    }
}

/// Outcome of the one-hop search.
#[derive(Debug, Clone)]
pub enum ScrewHop {
    Feasible(Box<ScrewPiece>),
    /// No admissible one-hop motion was found within the budget; carries the
    /// best line-matching residual reached.
    Infeasible {
        best_residual: f64,
    },
}

fn require_flat(l: &OrientedGeodesic) -> Result<(), PlannerError> {
    if l.kappa() != Curvature::Euclidean {
        return Err(GeomError::Unsupported {
            kappa: l.kappa().as_int(),
            what: "screw hops are defined on oriented lines of R^3".into(),
        }
        .into());
    }
    Ok(())
}

fn any_perpendicular(v: &Vector3<f64>) -> Vector3<f64> {
    let trial = if v[0].abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    (trial - v * trial.dot(v)).normalize()
}

/// Relative position of a line with respect to an oriented screw axis:
/// the distance ρ, the signed angle η with v = cos η·u + sin η·(n×u), and
/// the frame carrying the standard configuration onto the actual one.
struct AxisConfig {
    rho: f64,
    eta: f64,
    frame: Isometry,
}

fn axis_config(l: &OrientedGeodesic, c: Vector3<f64>, u: Vector3<f64>) -> Option<AxisConfig> {
    let v = l.spatial_dir();
    let ul = l.spatial_base();
    let n_cross = u.cross(&v);
    let nn = n_cross.norm_squared();
    if nn < 1e-18 {
        return None; // axis parallel to the line: η degenerate
    }
    let diff = ul - c;
    let tau = diff.cross(&v).dot(&n_cross) / nn;
    let sigma = diff.cross(&u).dot(&n_cross) / nn;
    let a0 = c + u * tau;
    let foot_line = ul + v * sigma;
    let rho_vec = foot_line - a0;
    let rho = rho_vec.norm();
    let (e1p, n, eta) = if rho > 1e-9 {
        let n = rho_vec / rho;
        let e1p = n.cross(&u);
        (e1p, n, v.dot(&e1p).atan2(v.dot(&u)))
    } else {
        let vp = v - u * v.dot(&u);
        let sp = vp.norm();
        let e1p = vp / sp;
        let n = u.cross(&e1p);
        (e1p, n, sp.atan2(v.dot(&u)))
    };
    let rot = Matrix3::from_columns(&[e1p, n, u]);
    Some(AxisConfig {
        rho,
        eta,
        frame: Isometry::from_rotation_translation(rot, a0),
    })
}

fn finish_piece(
    start: &OrientedGeodesic,
    frame: Isometry,
    mut theta: f64,
    mut lambda: f64,
    rho: f64,
    eta: f64,
    mut duration: f64,
) -> Result<ScrewPiece, GeomError> {
    // run the group backwards instead of using a negative duration; the
    // admissibility equations are invariant under (θ, λ) ↦ (−θ, −λ)
    if duration < 0.0 {
        theta = -theta;
        lambda = -lambda;
        duration = -duration;
    }
    Ok(ScrewPiece {
        params: ScrewParams::new(theta, lambda, rho, eta, frame)?,
        start: *start,
        duration,
    })
}

fn verified(
    piece: ScrewPiece,
    target: &OrientedGeodesic,
    alpha: f64,
    tol: f64,
) -> Result<Option<ScrewPiece>, GeomError> {
    if piece.duration > 0.0 && !screw_admissible(&piece.params, alpha, 1e-8)? {
        return Ok(None);
    }
    // the frame must carry the standard (ρ, η) line onto the start line,
    // otherwise the admissibility equations talk about a different orbit
    let standard = piece.params.standard_line()?;
    let carried = crate::lines::act_on_geodesic(&piece.params.frame, &standard)?;
    if !carried.equals(&piece.start, 1e-6)? {
        return Ok(None);
    }
    let end = piece.endpoint()?;
    Ok((end.canonical_distance(target)? <= tol).then_some(piece))
}

/// A zero-duration admissible piece for coincident source and target.
fn trivial_piece(l: &OrientedGeodesic, alpha: f64) -> Result<ScrewPiece, GeomError> {
    let v = l.spatial_dir();
    let w = any_perpendicular(&v);
    let rot = Matrix3::from_columns(&[v, w.cross(&v), w]);
    let frame = Isometry::from_rotation_translation(rot, l.spatial_base());
    finish_piece(l, frame, alpha, 1.0, 0.0, PI / 2.0, 0.0)
}

/// Closed form for intersecting pairs at angle 2η ∈ (0, π): map the standard
/// position (both lines through the bisector axis, offset π/α apart along
/// it) onto the actual pair and read off θ = α/sin η, λ = 1/sin η, t = π/θ.
fn intersecting_hop(l: &OrientedGeodesic, l2: &OrientedGeodesic, alpha: f64) -> Option<ScrewPiece> {
    let (v, v2) = (l.spatial_dir(), l2.spatial_dir());
    let cos2eta = v.dot(&v2).clamp(-1.0, 1.0);
    let two_eta = cos2eta.acos();
    // near-parallel and near-antiparallel pairs make the frame construction
    // ill-conditioned and the rates blow up; the caller falls back to the
    // numeric solver or to a two-hop route
    if two_eta.sin() < 1e-4 {
        return None;
    }
    let meet = match common_perpendicular_euclidean(l, l2).ok()? {
        CommonPerpendicular::Feet {
            distance, on_first, ..
        } if distance < 1e-7 => on_first.spatial(),
        _ => return None,
    };
    let eta = 0.5 * two_eta;

    let t2 = (v2 - v * cos2eta).normalize();
    let basis = Matrix3::from_columns(&[v, t2, v.cross(&t2)]);
    let vs = Vector3::new(eta.sin(), 0.0, eta.cos());
    let vs2 = Vector3::new(-eta.sin(), 0.0, eta.cos());
    let t2s = (vs2 - vs * cos2eta).normalize();
    let basis_std = Matrix3::from_columns(&[vs, t2s, vs.cross(&t2s)]);
    let rot = basis * basis_std.transpose();

    // the standard lines intersect at parameter π/(2α cos η) along the first
    let s_star = PI / (2.0 * alpha * eta.cos());
    let trans = meet - rot * (vs * s_star);
    let frame = Isometry::from_rotation_translation(rot, trans);

    let theta = alpha / eta.sin();
    let lambda = 1.0 / eta.sin();
    finish_piece(l, frame, theta, lambda, 0.0, eta, PI / theta).ok()
}

/// Closed form for antiparallel pairs at distance exactly π/|α|: the η = π/2
/// member of the standard family.
fn antiparallel_offset_hop(
    l: &OrientedGeodesic,
    l2: &OrientedGeodesic,
    alpha: f64,
) -> Option<ScrewPiece> {
    let (v, v2) = (l.spatial_dir(), l2.spatial_dir());
    if v.dot(&v2) > -1.0 + 1e-12 {
        return None;
    }
    let distance = match common_perpendicular_euclidean(l, l2).ok()? {
        CommonPerpendicular::Parallel { distance } => distance,
        _ => return None,
    };
    if (distance - PI / alpha.abs()).abs() > 1e-9 * (1.0 + distance) {
        return None;
    }
    let f1 = l.spatial_base();
    let u2 = l2.spatial_base();
    let f2 = u2 + v2 * (f1 - u2).dot(&v2);
    let w_hat = (f2 - f1) / distance;
    let col3 = w_hat * alpha.signum();
    let rot = Matrix3::from_columns(&[v, col3.cross(&v), col3]);
    let frame = Isometry::from_rotation_translation(rot, f1);
    finish_piece(l, frame, alpha, 1.0, 0.0, PI / 2.0, PI / alpha).ok()
}

// --- damped least-squares search -----------------------------------------

const PARAMS: usize = 8; // axis anchor (3), axis direction angles (2), θ, λ, t
const RESIDUALS: usize = 6; // line-matching chart (4) + admissibility (2)

struct HopProblem {
    source: OrientedGeodesic,
    target_base: Vector3<f64>,
    target_dir: Vector3<f64>,
    b1: Vector3<f64>,
    b2: Vector3<f64>,
    alpha: f64,
}

type ParamVec = SVector<f64, PARAMS>;
type ResidualVec = SVector<f64, RESIDUALS>;

impl HopProblem {
    fn new(source: &OrientedGeodesic, target: &OrientedGeodesic, alpha: f64) -> Self {
        let target_dir = target.spatial_dir();
        let b1 = any_perpendicular(&target_dir);
        let b2 = target_dir.cross(&b1);
        HopProblem {
            source: *source,
            target_base: target.spatial_base(),
            target_dir,
            b1,
            b2,
            alpha,
        }
    }

    fn residual(&self, p: &ParamVec) -> ResidualVec {
        let big = ResidualVec::repeat(1e3);
        let c = Vector3::new(p[0], p[1], p[2]);
        let (azimuth, elevation) = (p[3], p[4]);
        let u = Vector3::new(
            elevation.cos() * azimuth.cos(),
            elevation.cos() * azimuth.sin(),
            elevation.sin(),
        );
        let (theta, lambda, t) = (p[5], p[6], p[7]);
        let Some(cfg) = axis_config(&self.source, c, u) else {
            return big;
        };
        let sin_eta = cfg.eta.sin();
        if sin_eta.abs() < 1e-3 {
            return big;
        }
        let Ok(params) = ScrewParams::new(theta, lambda, cfg.rho, cfg.eta, cfg.frame) else {
            return big;
        };
        let Ok(motion) = params.motion_at(t) else {
            return big;
        };
        let Ok(moved) = crate::lines::act_on_geodesic(&motion, &self.source) else {
            return big;
        };
        let w = moved.spatial_dir();
        let denom = 1.0 + w.dot(&self.target_dir);
        if denom < 1e-3 {
            return big;
        }
        let du = moved.spatial_base() - self.target_base;
        ResidualVec::from_column_slice(&[
            du.dot(&self.b1),
            du.dot(&self.b2),
            2.0 * w.dot(&self.b1) / denom,
            2.0 * w.dot(&self.b2) / denom,
            (theta * sin_eta).abs() - self.alpha.abs(),
            self.alpha * (lambda + cfg.rho * theta * cfg.eta.cos() / sin_eta) - theta,
        ])
    }

    /// Levenberg-style damped Gauss–Newton from one seed.
    fn solve_from(&self, seed: ParamVec, max_iters: usize, stop_tol: f64) -> (ParamVec, f64) {
        let mut p = seed;
        let mut r = self.residual(&p);
        let mut cost = r.norm_squared();
        let mut mu = 1e-3;
        for _ in 0..max_iters {
            if r.amax() < stop_tol {
                break;
            }
            let mut jac = SMatrix::<f64, RESIDUALS, PARAMS>::zeros();
            for j in 0..PARAMS {
                let h = 1e-7 * (1.0 + p[j].abs());
                let mut pj = p;
                pj[j] += h;
                let rj = self.residual(&pj);
                jac.set_column(j, &((rj - r) / h));
            }
            let jtj = jac.transpose() * jac;
            let jtr = jac.transpose() * r;
            let mut damped = jtj;
            for i in 0..PARAMS {
                damped[(i, i)] += mu * (jtj[(i, i)] + 1e-12);
            }
            let Some(delta) = damped.lu().solve(&(-jtr)) else {
                mu *= 10.0;
                continue;
            };
            let p_new = p + delta;
            let r_new = self.residual(&p_new);
            let cost_new = r_new.norm_squared();
            if cost_new < cost {
                p = p_new;
                r = r_new;
                cost = cost_new;
                mu = (mu / 3.0).max(1e-12);
                if delta.norm() < 1e-14 * (1.0 + p.norm()) {
                    break;
                }
            } else {
                mu *= 4.0;
                if mu > 1e10 {
                    break;
                }
            }
        }
        (p, r.amax())
    }
}

fn direction_angles(u: &Vector3<f64>) -> (f64, f64) {
    (u[1].atan2(u[0]), u[2].clamp(-1.0, 1.0).asin())
}

fn pack_seed(
    l: &OrientedGeodesic,
    c: Vector3<f64>,
    u: Vector3<f64>,
    alpha: f64,
    flip: bool,
) -> Option<ParamVec> {
    let cfg = axis_config(l, c, u)?;
    let sin_eta = cfg.eta.sin();
    if sin_eta.abs() < 1e-3 {
        return None;
    }
    let theta = if flip {
        -alpha / sin_eta
    } else {
        alpha / sin_eta
    };
    let lambda = theta / alpha - cfg.rho * theta * cfg.eta.cos() / sin_eta;
    let t = PI / theta;
    let (a, b) = direction_angles(&u);
    Some(ParamVec::from_column_slice(&[
        c[0], c[1], c[2], a, b, theta, lambda, t,
    ]))
}

fn build_seeds(
    l: &OrientedGeodesic,
    l2: &OrientedGeodesic,
    alpha: f64,
    budget: usize,
) -> Result<Vec<ParamVec>, GeomError> {
    let (v, v2) = (l.spatial_dir(), l2.spatial_dir());
    let (f1, f2, dist) = match common_perpendicular_euclidean(l, l2)? {
        CommonPerpendicular::Feet {
            distance,
            on_first,
            on_second,
        } => (on_first.spatial(), on_second.spatial(), distance),
        CommonPerpendicular::Parallel { distance } => {
            let f1 = l.spatial_base();
            let u2 = l2.spatial_base();
            let f2 = u2 + v2 * (f1 - u2).dot(&v2);
            (f1, f2, distance)
        }
    };
    let mid = (f1 + f2) / 2.0;
    let bisector = if (v + v2).norm() > 1e-6 {
        (v + v2).normalize()
    } else {
        any_perpendicular(&v)
    };
    let splitter = if (v2 - v).norm() > 1e-6 {
        (v2 - v).normalize()
    } else {
        any_perpendicular(&v)
    };
    let n_hat = if dist > 1e-9 {
        (f2 - f1) / dist
    } else if v.cross(&v2).norm() > 1e-9 {
        v.cross(&v2).normalize()
    } else {
        any_perpendicular(&v)
    };
    let configurations = [
        (f1, bisector, false),
        (f1, bisector, true),
        (mid, bisector, false),
        (mid, bisector, true),
        (f1, n_hat, false),
        (f2, bisector, false),
        (mid, splitter, false),
        (mid, n_hat, true),
    ];
    let mut seeds = Vec::new();
    for (c, u, flip) in configurations {
        if let Some(seed) = pack_seed(l, c, u, alpha, flip) {
            seeds.push(seed);
            if seeds.len() >= budget {
                break;
            }
        }
    }
    Ok(seeds)
}

/// Search for a single α-admissible homogeneous motion carrying one line to
/// another. Closed forms cover intersecting pairs and the antiparallel pair
/// offset by π/|α|; everything else runs the damped least-squares search.
/// Unreachable targets (such as the reversal) come back `Infeasible`.
pub fn screw_hop_solve(
    source: &OrientedGeodesic,
    target: &OrientedGeodesic,
    alpha: f64,
    tol: f64,
) -> Result<ScrewHop, PlannerError> {
    screw_hop_solve_with(source, target, alpha, tol, &ScrewHopOptions::default())
}

pub fn screw_hop_solve_with(
    source: &OrientedGeodesic,
    target: &OrientedGeodesic,
    alpha: f64,
    tol: f64,
    options: &ScrewHopOptions,
) -> Result<ScrewHop, PlannerError> {
    require_flat(source)?;
    require_flat(target)?;
    if alpha == 0.0 {
        return Err(GeomError::invalid("screw hops are defined for alpha != 0").into());
    }
    // coincident lines (including translates along the common direction,
    // which are the same element of the line space): nothing to do, witness
    // a zero-duration admissible piece
    if source.equals(target, tol)? {
        let piece = trivial_piece(source, alpha)?;
        return Ok(ScrewHop::Feasible(Box::new(piece)));
    }
    if let Some(piece) = intersecting_hop(source, target, alpha) {
        if let Some(ok) = verified(piece, target, alpha, tol)? {
            return Ok(ScrewHop::Feasible(Box::new(ok)));
        }
    }
    if let Some(piece) = antiparallel_offset_hop(source, target, alpha) {
        if let Some(ok) = verified(piece, target, alpha, tol)? {
            return Ok(ScrewHop::Feasible(Box::new(ok)));
        }
    }

    let problem = HopProblem::new(source, target, alpha);
    let stop_tol = tol.min(1e-9);
    let mut best = f64::INFINITY;
    for seed in build_seeds(source, target, alpha, options.seeds)? {
        let (p, reached) = problem.solve_from(seed, options.max_iters, stop_tol);
        best = best.min(reached);
        // anything within the caller's tolerance is worth verifying; the
        // verification step re-checks admissibility at 1e-8 and the endpoint
        if reached > tol {
            continue;
        }
        let c = Vector3::new(p[0], p[1], p[2]);
        let (azimuth, elevation) = (p[3], p[4]);
        let mut u = Vector3::new(
            elevation.cos() * azimuth.cos(),
            elevation.cos() * azimuth.sin(),
            elevation.sin(),
        );
        let (mut theta, mut lambda, t) = (p[5], p[6], p[7]);
        let Some(mut cfg) = axis_config(source, c, u) else {
            continue;
        };
        // orient the axis so that η ∈ (0, π); the rates flip with it
        if cfg.eta < 0.0 {
            u = -u;
            theta = -theta;
            lambda = -lambda;
            let Some(flipped) = axis_config(source, c, u) else {
                continue;
            };
            cfg = flipped;
        }
        let Ok(piece) = finish_piece(source, cfg.frame, theta, lambda, cfg.rho, cfg.eta, t) else {
            continue;
        };
        if let Some(ok) = verified(piece, target, alpha, tol)? {
            return Ok(ScrewHop::Feasible(Box::new(ok)));
        }
    }
    Ok(ScrewHop::Infeasible {
        best_residual: best,
    })
}

/// Join two oriented lines by at most two admissible homogeneous motions:
/// one direct hop when the solver finds one, otherwise two hops through an
/// intermediate line orthogonal to both (the common perpendicular line
/// first, then swept fallbacks).
pub fn plan_homogeneous_2(
    source: &OrientedGeodesic,
    target: &OrientedGeodesic,
    alpha: f64,
    tol: f64,
) -> Result<Plan, PlannerError> {
    require_flat(source)?;
    require_flat(target)?;
    if alpha == 0.0 {
        return Err(GeomError::invalid("the homogeneous planner needs alpha != 0").into());
    }
    if source.equals(target, tol)? {
        return Ok(Plan::empty(alpha, *source, *target));
    }

    let mut best_direct = f64::INFINITY;
    match screw_hop_solve(source, target, alpha, tol)? {
        ScrewHop::Feasible(piece) => {
            let mut plan = Plan {
                alpha,
                pieces: vec![PlanPiece::Screw(*piece)],
                source: *source,
                target: *target,
                endpoint_residual: f64::NAN,
            };
            execute_plan(&mut plan)?;
            if plan.endpoint_residual <= tol {
                return Ok(plan);
            }
        }
        ScrewHop::Infeasible { best_residual } => best_direct = best_residual,
    }

    let mut attempts = 0usize;
    for intermediate in intermediate_candidates(source, target)? {
        if intermediate.equals(source, tol)? || intermediate.equals(target, tol)? {
            continue;
        }
        attempts += 1;
        let ScrewHop::Feasible(first) = screw_hop_solve(source, &intermediate, alpha, tol)? else {
            continue;
        };
        let ScrewHop::Feasible(second) = screw_hop_solve(&intermediate, target, alpha, tol)? else {
            continue;
        };
        let mut plan = Plan {
            alpha,
            pieces: vec![PlanPiece::Screw(*first), PlanPiece::Screw(*second)],
            source: *source,
            target: *target,
            endpoint_residual: f64::NAN,
        };
        execute_plan(&mut plan)?;
        if plan.endpoint_residual <= tol {
            return Ok(plan);
        }
    }
    Err(PlannerError::Failure {
        stage: "intermediate-search".into(),
        details: format!(
            "no feasible 2-hop route found ({attempts} intermediates tried, \
             best direct residual {best_direct:e})"
        ),
    })
}

/// Intermediate lines for the two-hop route. The common-perpendicular line
/// comes first (it meets both endpoints at right angles, so both hops
/// resolve in closed form), followed by chords joining a point of the
/// source to a point of the target — these meet both lines exactly at
/// whatever angle the geometry dictates, which keeps the route solvable
/// even for nearly parallel or nearly antiparallel pairs.
fn intermediate_candidates(
    source: &OrientedGeodesic,
    target: &OrientedGeodesic,
) -> Result<Vec<OrientedGeodesic>, GeomError> {
    let (v, v2) = (source.spatial_dir(), target.spatial_dir());
    let mut out = Vec::new();
    let mut push = |base: Vector3<f64>, dir: Vector3<f64>| {
        if let Ok(line) = OrientedGeodesic::from_spatial(base, dir) {
            out.push(line);
        }
    };

    // anchor points on the two lines: the perpendicular feet when those are
    // well conditioned, the canonical base and its projection otherwise
    let near_parallel = v.cross(&v2).norm() < 1e-6;
    let feet = if near_parallel {
        None
    } else {
        match common_perpendicular_euclidean(source, target)? {
            CommonPerpendicular::Feet {
                distance,
                on_first,
                on_second,
            } => Some((on_first.spatial(), on_second.spatial(), distance)),
            CommonPerpendicular::Parallel { .. } => None,
        }
    };
    let (f1, f2, dist) = feet.unwrap_or_else(|| {
        let f1 = source.spatial_base();
        let u2 = target.spatial_base();
        let f2 = u2 + v2 * (f1 - u2).dot(&v2);
        (f1, f2, (f2 - f1).norm())
    });

    // lines orthogonal to both endpoint directions through the segment
    if dist > 1e-9 {
        let n_hat = (f2 - f1) / dist;
        push(f1, n_hat);
        push(f1, -n_hat);
    } else if !near_parallel {
        let n_hat = v.cross(&v2).normalize();
        push(f1, n_hat);
        push(f1, -n_hat);
    }
    if near_parallel {
        // coincident or antiparallel images: any perpendicular through a
        // point of the source works
        let b1 = any_perpendicular(&v);
        let b2 = v.cross(&b1);
        for i in 0..6 {
            let phi = PI * i as f64 / 3.0;
            push(f1, b1 * phi.cos() + b2 * phi.sin());
        }
    }

    // chords: through a point of each line, avoiding degenerate lengths and
    // angles too close to 0 or π
    for a in [0.0, 1.0, -1.0] {
        for b in [0.0, 1.0, -1.0] {
            let p = f1 + v * a;
            let q = f2 + v2 * b;
            let chord = q - p;
            if chord.norm() < 1e-3 {
                continue;
            }
            let w = chord.normalize();
            if w.dot(&v).abs() > 1.0 - 1e-6 || w.dot(&v2).abs() > 1.0 - 1e-6 {
                continue;
            }
            push(p, w);
        }
    }

    // lateral offsets that intersect neither line: pure solver fodder, last
    if dist > 1e-9 {
        let n_hat = (f2 - f1) / dist;
        for sigma in [0.5, -0.5] {
            push(f1 + v * sigma, n_hat);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(u: Vector3<f64>, w: Vector3<f64>) -> OrientedGeodesic {
        OrientedGeodesic::from_spatial(u, w.normalize()).unwrap()
    }

    #[test]
    fn standard_offset_configuration_is_one_closed_form_hop() {
        // ℓ through the origin at angle η to e₃, ℓ′ mirrored and lifted π/α
        let alpha = 1.3;
        let eta = 0.7f64;
        let l = line(Vector3::zeros(), Vector3::new(eta.sin(), 0.0, eta.cos()));
        let l2 = line(
            Vector3::new(0.0, 0.0, PI / alpha),
            Vector3::new(-eta.sin(), 0.0, eta.cos()),
        );
        match screw_hop_solve(&l, &l2, alpha, 1e-9).unwrap() {
            ScrewHop::Feasible(piece) => {
                assert!((piece.params.theta - alpha / eta.sin()).abs() < 1e-9);
                assert!((piece.params.lambda - 1.0 / eta.sin()).abs() < 1e-9);
                assert!((piece.duration - PI / piece.params.theta).abs() < 1e-9);
                assert!(screw_admissible(&piece.params, alpha, 1e-10).unwrap());
                let end = piece.endpoint().unwrap();
                assert!(end.equals(&l2, 1e-9).unwrap());
            }
            ScrewHop::Infeasible { best_residual } => {
                panic!("expected a closed-form hop, best residual {best_residual}")
            }
        }
    }

    #[test]
    fn translates_along_the_direction_are_trivially_feasible() {
        let l = line(Vector3::new(0.0, 1.0, 2.0), Vector3::new(1.0, 1.0, 0.0));
        let slid = line(
            Vector3::new(0.0, 1.0, 2.0) + l.spatial_dir() * 3.7,
            Vector3::new(1.0, 1.0, 0.0),
        );
        match screw_hop_solve(&l, &slid, 2.0, 1e-9).unwrap() {
            ScrewHop::Feasible(piece) => {
                assert_eq!(piece.duration, 0.0);
                let end = piece.endpoint().unwrap();
                assert!(end.equals(&l, 1e-10).unwrap());
                // the frame places the standard (ρ, η) line onto the start
                let std_line = piece.params.standard_line().unwrap();
                let carried =
                    crate::lines::act_on_geodesic(&piece.params.frame, &std_line).unwrap();
                assert!(carried.equals(&piece.start, 1e-9).unwrap());
            }
            _ => panic!("a line translated along itself is the same line"),
        }
    }

    #[test]
    fn reversal_is_infeasible_in_one_hop() {
        let l = OrientedGeodesic::x_axis();
        match screw_hop_solve(&l, &l.reverse(), 1.0, 1e-8).unwrap() {
            ScrewHop::Infeasible { best_residual } => {
                assert!(best_residual > 1e-8);
            }
            ScrewHop::Feasible(_) => panic!("the reversal must not be reachable in one hop"),
        }
    }

    #[test]
    fn reversal_takes_two_pieces() {
        let l = OrientedGeodesic::x_axis();
        let plan = plan_homogeneous_2(&l, &l.reverse(), 1.0, 1e-8).unwrap();
        assert_eq!(plan.pieces.len(), 2);
        assert!(plan.endpoint_residual < 1e-8);
        for piece in &plan.pieces {
            match piece {
                PlanPiece::Screw(s) => {
                    assert!(screw_admissible(&s.params, 1.0, 1e-8).unwrap());
                    assert!(s.params.eta > 0.0 && s.params.eta < PI);
                }
                _ => panic!("homogeneous plans consist of screw pieces"),
            }
        }
    }

    #[test]
    fn antiparallel_offset_by_half_pitch_is_a_single_hop() {
        let alpha = 1.0;
        let l = line(Vector3::zeros(), Vector3::x());
        let l2 = line(Vector3::new(0.0, PI / alpha, 0.0), -Vector3::x());
        let plan = plan_homogeneous_2(&l, &l2, alpha, 1e-8).unwrap();
        assert_eq!(plan.pieces.len(), 1);
        assert!(plan.endpoint_residual < 1e-8);
    }

    #[test]
    fn nearly_degenerate_pairs_remain_plannable() {
        // near-identical, nearly parallel, and nearly antiparallel pairs sit
        // close to the branch boundaries of the closed forms
        let cases = [
            (
                line(Vector3::zeros(), Vector3::x()),
                line(Vector3::new(0.0, 1e-5, 0.0), Vector3::x()),
            ),
            (
                line(Vector3::zeros(), Vector3::x()),
                line(Vector3::zeros(), Vector3::new(1.0, 1e-5, 0.0)),
            ),
            (
                line(Vector3::zeros(), Vector3::x()),
                line(Vector3::new(0.0, 1.0, 0.0), Vector3::new(-1.0, 1e-7, 0.0)),
            ),
        ];
        for alpha in [0.2, 1.0, 5.0] {
            for (a, b) in &cases {
                let plan = plan_homogeneous_2(a, b, alpha, 1e-6).unwrap();
                assert!(plan.pieces.len() <= 2);
                assert!(plan.endpoint_residual < 1e-6, "alpha = {alpha}");
            }
        }
    }

    #[test]
    fn generic_pairs_take_at_most_two_pieces() {
        let pairs = [
            (
                line(Vector3::new(0.1, -0.4, 0.8), Vector3::new(1.0, 0.2, -0.3)),
                line(Vector3::new(2.0, 1.0, 0.0), Vector3::new(0.0, 1.0, 1.0)),
            ),
            (
                line(Vector3::zeros(), Vector3::x()),
                line(Vector3::new(0.0, 2.0, 0.0), Vector3::x()),
            ),
            (
                line(Vector3::new(0.0, 0.0, 1.0), Vector3::y()),
                line(Vector3::zeros(), Vector3::x()),
            ),
        ];
        for alpha in [0.8, -1.5] {
            for (a, b) in &pairs {
                let plan = plan_homogeneous_2(a, b, alpha, 1e-6).unwrap();
                assert!(plan.pieces.len() <= 2);
                assert!(
                    plan.endpoint_residual < 1e-6,
                    "alpha = {alpha}, residual = {:e}",
                    plan.endpoint_residual
                );
                for piece in &plan.pieces {
                    if let PlanPiece::Screw(s) = piece {
                        if s.duration > 0.0 {
                            assert!(screw_admissible(&s.params, alpha, 1e-8).unwrap());
                        }
                    }
                }
            }
        }
    }
}
