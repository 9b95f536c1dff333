//! Admissibility criteria for curves of oriented geodesics and the
//! infinitesimal data behind them.
//!
//! A tangent vector of G_κ is α-admissible when it is the initial velocity
//! of an α-helicoidal curve. This module collects every way the library
//! decides that question:
//!
//! * through Jacobi fields along the reference geodesic ([`jacobi_admissible`]):
//!   a field J ∈ 𝒥_σ with J(0) ⊥ J′(0) is admissible iff ‖J′(0)‖ = |α| and
//!   J′(0) = α·J(0)×σ′(0);
//! * through ruled-surface data for κ = 0 ([`ruled_admissible`]), the same
//!   two equations on a standard parametrization β + sV;
//! * for homogeneous curves, orbits of screw groups R_{θt}T_{λt}
//!   ([`screw_admissible`]): |θ sin η| = |α| and α(λ + ρθ cot η) = θ;
//! * through the fiber of the control bundle itself ([`fiber_frame`],
//!   [`f_zeta`], [`substantial_rank`]): the fiber over the reference line is
//!   the Ad-orbit of the generator ξ_α under the line stabilizer, and the
//!   control system is controllable exactly when that orbit spans the full
//!   4-dimensional complement 𝔭_κ, which happens iff α² ≠ κ.
//!
//! The circular helicoid ([`circular_helicoid_check`]) is the standard
//! counterexample: its ruling speed is √(α² + 1/r²) > |α| for every radius,
//! so it is never α-admissible.

use nalgebra::{DMatrix, Matrix2, Vector2, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GeomError;
use crate::lines::OrientedGeodesic;
use crate::spaceform::{
    cross, geodesic_velocity, parallel_transport, rotation_block, sin_cos_kappa, Curvature,
    Isometry, LieAlgebraElement, TangentVector,
};

/// Initial data of a Jacobi field along a reference geodesic:
/// J(s) = cos_κ(s)U(s) + sin_κ(s)V(s) + (a + sb)σ′(s) with U, V the parallel
/// fields extending u, v ⊥ σ′(0).
#[derive(Debug, Clone, Copy)]
pub struct JacobiData {
    /// Unit tangent σ′(0) at the base point of the reference geodesic.
    sigma: TangentVector,
    u: TangentVector,
    v: TangentVector,
    a: f64,
    b: f64,
}

impl JacobiData {
    pub fn new(
        sigma: TangentVector,
        u: TangentVector,
        v: TangentVector,
        a: f64,
        b: f64,
    ) -> Result<Self, GeomError> {
        if !sigma.is_unit(1e-7) {
            return Err(GeomError::invalid("reference direction must be unit"));
        }
        for (name, w) in [("u", &u), ("v", &v)] {
            if (w.base().coords() - sigma.base().coords()).norm() > 1e-7 {
                return Err(GeomError::invalid(format!(
                    "{name} must be based at the reference base point"
                )));
            }
            let pairing = w.inner(&sigma);
            if pairing.abs() > 1e-7 * (1.0 + w.norm()) {
                return Err(GeomError::invalid(format!(
                    "{name} must be orthogonal to the reference direction, got {pairing:e}"
                )));
            }
        }
        Ok(JacobiData { sigma, u, v, a, b })
    }

    /// Data of a field in 𝒥_σ (from unit-speed variations), i.e. b = 0.
    pub fn unit_speed(
        sigma: TangentVector,
        u: TangentVector,
        v: TangentVector,
        a: f64,
    ) -> Result<Self, GeomError> {
        Self::new(sigma, u, v, a, 0.0)
    }

    #[inline]
    pub fn sigma(&self) -> &TangentVector {
        &self.sigma
    }

    #[inline]
    pub fn kappa(&self) -> Curvature {
        self.sigma.kappa()
    }
}

/// Evaluate a Jacobi field and its covariant derivative at arc length `s`.
///
/// Differentiating the closed form termwise (U, V, σ′ are parallel) gives
/// J′(s) = −κ sin_κ(s)U(s) + cos_κ(s)V(s) + b·σ′(s).
pub fn jacobi_eval(data: &JacobiData, s: f64) -> Result<(TangentVector, TangentVector), GeomError> {
    let kappa = data.kappa();
    let k = kappa.value();
    let (sk, ck) = sin_cos_kappa(kappa, s);
    let us = parallel_transport(&data.sigma, &data.u, s)?;
    let vs = parallel_transport(&data.sigma, &data.v, s)?;
    let speed = geodesic_velocity(&data.sigma, s)?;
    let value = us.vec() * ck + vs.vec() * sk + speed.vec() * (data.a + s * data.b);
    let derivative = us.vec() * (-k * sk) + vs.vec() * ck + speed.vec() * data.b;
    Ok((
        TangentVector::new(*speed.base(), value)?,
        TangentVector::new(*speed.base(), derivative)?,
    ))
}

/// The Jacobi admissibility criterion for fields of unit-speed variations
/// with J(0) ⊥ J′(0): admissible iff ‖J′(0)‖ = |α| and
/// J′(0) = α·J(0)×σ′(0).
pub fn jacobi_admissible(data: &JacobiData, alpha: f64, tol: f64) -> Result<bool, GeomError> {
    if data.b != 0.0 {
        return Err(GeomError::invalid(
            "admissibility is defined for fields of unit-speed variations (b = 0)",
        ));
    }
    let (j0, j0p) = jacobi_eval(data, 0.0)?;
    let pairing = j0.inner(&j0p);
    if pairing.abs() > 1e-7 * (1.0 + j0.norm()) * (1.0 + j0p.norm()) {
        return Err(GeomError::invalid(format!(
            "criterion requires J(0) ⊥ J′(0), got <J,J'> = {pairing:e}"
        )));
    }
    if (j0p.norm() - alpha.abs()).abs() > tol {
        return Ok(false);
    }
    let rhs = cross(&j0, &data.sigma)?;
    let gap = (j0p.vec() - rhs.vec() * alpha).norm();
    Ok(gap <= tol)
}

/// Ruled-surface admissibility for κ = 0: for a standard parametrization
/// β + sV (with β′ ⊥ V′ at the evaluation time), the swept curve of lines is
/// α-admissible iff ‖V′(0)‖ = |α| and V′(0) = α·β′(0)×V(0).
pub fn ruled_admissible(
    beta_dot0: Vector3<f64>,
    v0: Vector3<f64>,
    vdot0: Vector3<f64>,
    alpha: f64,
    tol: f64,
) -> Result<bool, GeomError> {
    if (v0.norm() - 1.0).abs() > 1e-7 {
        return Err(GeomError::invalid("ruling direction V(0) must be unit"));
    }
    let pairing = beta_dot0.dot(&vdot0);
    if pairing.abs() > 1e-6 * (1.0 + beta_dot0.norm()) * (1.0 + vdot0.norm()) {
        return Err(GeomError::invalid(format!(
            "input is not standard (<β′,V′> = {pairing:e}); \
             re-parametrize through the striction line first"
        )));
    }
    if (vdot0.norm() - alpha.abs()).abs() > tol {
        return Ok(false);
    }
    Ok((vdot0 - beta_dot0.cross(&v0) * alpha).norm() <= tol)
}

/// Standard ruled data (β̃′(t₀), V(t₀), V′(t₀)) extracted at one parameter.
#[derive(Debug, Clone, Copy)]
pub struct StandardRuledData {
    pub beta_dot: Vector3<f64>,
    pub v: Vector3<f64>,
    pub v_dot: Vector3<f64>,
}

/// Differentiation settings for [`standardize_ruled`].
#[derive(Debug, Clone, Copy)]
pub struct StandardizeOptions {
    /// Step of the 5-point stencil for β′ and V′.
    pub step: f64,
    /// Step of the outer stencil for the striction correction term; larger
    /// than `step` because its input already carries stencil noise.
    pub outer_step: f64,
    /// Richardson-extrapolate the inner stencils (two stencil widths).
    /// Worth enabling when the supplied curves are themselves interpolated
    /// from coarse samples.
    pub richardson: bool,
}

impl Default for StandardizeOptions {
    fn default() -> Self {
        StandardizeOptions {
            step: 1e-5,
            outer_step: 1e-3,
            richardson: false,
        }
    }
}

fn five_point_derivative<F: Fn(f64) -> Vector3<f64>>(f: &F, t: f64, h: f64) -> Vector3<f64> {
    (f(t - 2.0 * h) - f(t - h) * 8.0 + f(t + h) * 8.0 - f(t + 2.0 * h)) / (12.0 * h)
}

fn derivative<F: Fn(f64) -> Vector3<f64>>(
    f: &F,
    t: f64,
    opts: &StandardizeOptions,
) -> Vector3<f64> {
    if opts.richardson {
        let coarse = five_point_derivative(f, t, opts.step);
        let fine = five_point_derivative(f, t, opts.step / 2.0);
        // 5-point stencils have O(h⁴) error
        (fine * 16.0 - coarse) / 15.0
    } else {
        five_point_derivative(f, t, opts.step)
    }
}

/// Re-parametrize a ruled surface β(t) + sV(t) through its striction line
/// and return the standard data at `t0`.
///
/// The striction substitution β̃ = β − (⟨β′,V′⟩/⟨V′,V′⟩)V kills ⟨β̃′,V′⟩
/// identically (using ⟨V,V′⟩ = 0 for unit V), so only first derivatives of
/// the correction coefficient are needed; they are taken with a wider
/// stencil because the coefficient itself is assembled from stencil values.
pub fn standardize_ruled<B, V>(
    beta: B,
    v: V,
    t0: f64,
    opts: StandardizeOptions,
) -> Result<StandardRuledData, GeomError>
where
    B: Fn(f64) -> Vector3<f64>,
    V: Fn(f64) -> Vector3<f64>,
{
    let v0 = v(t0);
    if (v0.norm() - 1.0).abs() > 1e-6 {
        return Err(GeomError::invalid(format!(
            "ruling direction must be unit, got norm {}",
            v0.norm()
        )));
    }
    let v_dot = derivative(&v, t0, &opts);
    if v_dot.norm() < 1e-8 {
        return Err(GeomError::CylindricalInput { norm: v_dot.norm() });
    }
    let beta_dot = derivative(&beta, t0, &opts);
    let coeff = |t: f64| -> f64 {
        let bd = derivative(&beta, t, &opts);
        let vd = derivative(&v, t, &opts);
        bd.dot(&vd) / vd.dot(&vd)
    };
    let lambda = coeff(t0);
    let h = opts.outer_step;
    let lambda_dot = (coeff(t0 - 2.0 * h) - 8.0 * coeff(t0 - h) + 8.0 * coeff(t0 + h)
        - coeff(t0 + 2.0 * h))
        / (12.0 * h);
    let beta_tilde_dot = beta_dot - v0 * lambda_dot - v_dot * lambda;
    Ok(StandardRuledData {
        beta_dot: beta_tilde_dot,
        v: v0,
        v_dot,
    })
}

/// The circular helicoid of radius r: the ruling rotates with angular speed
/// α along a unit-speed circle instead of a geodesic axis. Returns the
/// closures (center curve, ruling direction).
pub fn circular_helicoid(
    r: f64,
    alpha: f64,
) -> (impl Fn(f64) -> Vector3<f64>, impl Fn(f64) -> Vector3<f64>) {
    let c = move |t: f64| Vector3::new(r * (t / r).cos(), r * (t / r).sin(), 0.0);
    let v = move |t: f64| {
        let radial = Vector3::new((t / r).cos(), (t / r).sin(), 0.0);
        radial * (alpha * t).cos() + Vector3::z() * (alpha * t).sin()
    };
    (c, v)
}

/// Ruling speed of the circular helicoid and its admissibility verdict.
///
/// The standard parametrization keeps the ruling V, whose speed at t = 0 is
/// ‖(1/r)e₂ + αe₃‖ = √(α² + 1/r²) > |α|, so the swept curve of lines is
/// never α-admissible.
pub fn circular_helicoid_check(r: f64, alpha: f64) -> Result<(f64, bool), GeomError> {
    if r.is_nan() || r <= 0.0 {
        return Err(GeomError::invalid("circular helicoid needs radius r > 0"));
    }
    if alpha == 0.0 {
        return Err(GeomError::invalid("circular helicoid needs alpha != 0"));
    }
    let speed = (alpha * alpha + 1.0 / (r * r)).sqrt();
    Ok((speed, false))
}

/// Parameters of a homogeneous curve of lines: the orbit of the line at
/// distance ρ and angle η from the z-axis under t ↦ R_{θt}T_{λt}, conjugated
/// into general position by `frame`.
#[derive(Debug, Clone)]
pub struct ScrewParams {
    pub theta: f64,
    pub lambda: f64,
    pub rho: f64,
    pub eta: f64,
    pub frame: Isometry,
}

impl ScrewParams {
    pub fn new(
        theta: f64,
        lambda: f64,
        rho: f64,
        eta: f64,
        frame: Isometry,
    ) -> Result<Self, GeomError> {
        if rho < 0.0 {
            return Err(GeomError::invalid("rho must be nonnegative"));
        }
        if frame.kappa() != Curvature::Euclidean {
            return Err(GeomError::KappaMismatch(frame.kappa().as_int(), 0));
        }
        frame.validate(1e-7)?;
        Ok(ScrewParams {
            theta,
            lambda,
            rho,
            eta,
            frame,
        })
    }

    /// The screw isometry at time t, in world coordinates.
    pub fn motion_at(&self, t: f64) -> Result<Isometry, GeomError> {
        let rot = Isometry::rotation_about_axis(Vector3::z(), self.theta * t)?;
        let slide = Isometry::translation(Vector3::z() * (self.lambda * t));
        let standard = rot.compose(&slide)?;
        self.frame
            .compose(&standard)?
            .compose(&self.frame.inverse())
    }

    /// The line in standard position whose orbit the parameters describe:
    /// [s ↦ ρe₂ + s(sin η e₁ + cos η e₃)], before conjugation by `frame`.
    pub fn standard_line(&self) -> Result<OrientedGeodesic, GeomError> {
        OrientedGeodesic::from_spatial(
            Vector3::y() * self.rho,
            Vector3::new(self.eta.sin(), 0.0, self.eta.cos()),
        )
    }
}

/// Homogeneous admissibility: the orbit t ↦ R_{θt}T_{λt}·ℓ of the line with
/// offset ρ and angle η is α-admissible iff |θ sin η| = |α| and
/// α(λ + ρθ cot η) = θ.
pub fn screw_admissible(params: &ScrewParams, alpha: f64, tol: f64) -> Result<bool, GeomError> {
    if alpha == 0.0 {
        return Err(GeomError::invalid(
            "homogeneous admissibility is stated for alpha != 0",
        ));
    }
    let (sin_eta, cos_eta) = (params.eta.sin(), params.eta.cos());
    if sin_eta.abs() < 1e-12 {
        if (params.rho * params.theta).abs() > 1e-12 {
            return Err(GeomError::SingularCotangent);
        }
        // cot η drops out when ρθ = 0, but |θ sin η| = 0 ≠ |α|
        return Ok(false);
    }
    let eq1 = ((params.theta * sin_eta).abs() - alpha.abs()).abs() <= tol;
    let cot = cos_eta / sin_eta;
    let eq2 =
        (alpha * (params.lambda + params.rho * params.theta * cot) - params.theta).abs() <= tol;
    Ok(eq1 && eq2)
}

/// One element of the fiber of the α-helicoidal bundle over the reference
/// line: the conjugate of ξ_α by the stabilizer element with parameters
/// (s, t), expressed in 𝔭_κ.
#[derive(Debug, Clone, Copy)]
pub struct FiberVector {
    pub s: f64,
    pub t: f64,
    pub value: LieAlgebraElement,
}

fn a_block(kappa: Curvature, alpha: f64) -> Matrix2<f64> {
    Matrix2::new(0.0, alpha, kappa.value(), 0.0)
}

/// The fiber frame: lower-left block R₁(s)·a₁^α·R_κ(−t), upper-right block
/// −R_κ(t)·(a_κ^α)ᵀ·R₁(−s). Ranges over the full fiber as (s, t) vary, with
/// the symmetry that s ↦ s + π negates the element.
pub fn fiber_frame(kappa: Curvature, alpha: f64, s: f64, t: f64) -> FiberVector {
    let lower = rotation_block(Curvature::Spherical, s)
        * a_block(Curvature::Spherical, alpha)
        * rotation_block(kappa, -t);
    let upper = -rotation_block(kappa, t)
        * a_block(kappa, alpha).transpose()
        * rotation_block(Curvature::Spherical, -s);
    let x = Vector2::new(lower[(0, 0)], lower[(1, 0)]);
    let y = Vector2::new(lower[(0, 1)], lower[(1, 1)]);
    let value = LieAlgebraElement::from_z_blocks(kappa, x, y);
    debug_assert!({
        let m = value.matrix();
        (m[(0, 2)] - upper[(0, 0)]).abs() < 1e-9
            && (m[(0, 3)] - upper[(0, 1)]).abs() < 1e-9
            && (m[(1, 2)] - upper[(1, 0)]).abs() < 1e-9
            && (m[(1, 3)] - upper[(1, 1)]).abs() < 1e-9
    });
    FiberVector { s, t, value }
}

/// The pairing f_ζ(s, t) = ⟨Ad(k(s,t))(ξ_α), ζ⟩ with the block inner product
/// on 𝔭_κ. The fiber spans all of 𝔭_κ exactly when f_ζ ≡ 0 forces ζ = 0.
pub fn f_zeta(
    kappa: Curvature,
    alpha: f64,
    zeta: &LieAlgebraElement,
    s: f64,
    t: f64,
) -> Result<f64, GeomError> {
    fiber_frame(kappa, alpha, s, t).value.p_inner(zeta)
}

/// Numerical rank of the span of the fiber over pseudo-random parameter
/// samples, in the (x₁, x₂, y₁, y₂) coordinates of 𝔭_κ.
///
/// Equals 4 (the fiber is substantial) iff α² ≠ κ. The default singular
/// value threshold 1e−8 sits far below the O(1) spectral gap between the
/// substantial and degenerate cases.
pub fn substantial_rank(kappa: Curvature, alpha: f64, samples: usize, seed: u64) -> usize {
    substantial_rank_with_threshold(kappa, alpha, samples, seed, 1e-8)
}

pub fn substantial_rank_with_threshold(
    kappa: Curvature,
    alpha: f64,
    samples: usize,
    seed: u64,
    threshold: f64,
) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut mat = DMatrix::<f64>::zeros(4, samples);
    for col in 0..samples {
        let s = rng.gen_range(0.0..two_pi);
        let t = match kappa {
            Curvature::Spherical => rng.gen_range(0.0..two_pi),
            _ => rng.gen_range(-3.0..3.0),
        };
        let fv = fiber_frame(kappa, alpha, s, t);
        let (x, y) = fv.value.z_blocks().expect("fiber frame lies in p_kappa");
        mat[(0, col)] = x[0];
        mat[(1, col)] = x[1];
        mat[(2, col)] = y[0];
        mat[(3, col)] = y[1];
    }
    let svd = mat.svd(false, false);
    svd.singular_values
        .iter()
        .filter(|&&sv| sv > threshold)
        .count()
}

/// Whether the isotropy of the screw generator inside the line stabilizer is
/// trivial, i.e. whether the stabilizer acts simply transitively on the
/// fiber. Defined for κ ∈ {0, −1} and α ≠ 0.
///
/// A stabilizer element with parameters (s, t) fixes ξ_α iff
/// R₁(s)a₁^α = a₁^α R_κ(t), which reduces to the three scalar equations
/// −sin s = α sin_κ t, cos s = cos_κ t, α sin s = −κ sin_κ t. The grid is
/// scanned for near-solutions, each near-solution is polished by
/// Gauss–Newton, and the polished solutions must all be the identity.
pub fn isotropy_trivial(
    kappa: Curvature,
    alpha: f64,
    grid: (usize, usize),
) -> Result<bool, GeomError> {
    if kappa == Curvature::Spherical {
        return Err(GeomError::Unsupported {
            kappa: 1,
            what: "simple transitivity is asserted for kappa in {0, -1}".into(),
        });
    }
    if alpha == 0.0 {
        return Err(GeomError::invalid("isotropy check requires alpha != 0"));
    }
    let (ns, nt) = grid;
    if ns < 2 || nt < 2 {
        return Err(GeomError::invalid("grid must have at least 2x2 points"));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let t_range = 3.0;
    let residuals = |s: f64, t: f64| -> Vector3<f64> {
        let (skt, ckt) = sin_cos_kappa(kappa, t);
        Vector3::new(
            -s.sin() - alpha * skt,
            s.cos() - ckt,
            alpha * s.sin() + kappa.value() * skt,
        )
    };
    // detection threshold scales with the grid spacing and the equations'
    // Lipschitz constant
    let step_s = two_pi / ns as f64;
    let step_t = 2.0 * t_range / nt as f64;
    let lipschitz = (1.0 + alpha.abs()) * (1.0 + t_range.cosh().min(1e3));
    let detect = lipschitz * step_s.max(step_t);

    for is in 0..ns {
        for it in 0..nt {
            let s0 = is as f64 * step_s;
            let t0 = -t_range + it as f64 * step_t;
            if residuals(s0, t0).norm() > detect {
                continue;
            }
            // Gauss-Newton polish of the candidate
            let (mut s, mut t) = (s0, t0);
            for _ in 0..40 {
                let r = residuals(s, t);
                if r.norm() < 1e-12 {
                    break;
                }
                let h = 1e-7;
                let js = (residuals(s + h, t) - residuals(s - h, t)) / (2.0 * h);
                let jt = (residuals(s, t + h) - residuals(s, t - h)) / (2.0 * h);
                let jtj = Matrix2::new(js.dot(&js), js.dot(&jt), jt.dot(&js), jt.dot(&jt));
                let rhs = Vector2::new(js.dot(&r), jt.dot(&r));
                match jtj.try_inverse() {
                    Some(inv) => {
                        let delta = inv * rhs;
                        s -= delta[0];
                        t -= delta[1];
                    }
                    None => break,
                }
            }
            if residuals(s, t).norm() > 1e-9 {
                continue; // not actually a solution
            }
            let (skt, ckt) = sin_cos_kappa(kappa, t);
            let identity = s.sin().abs() < 1e-6
                && (s.cos() - 1.0).abs() < 1e-6
                && skt.abs() < 1e-6
                && (ckt - 1.0).abs() < 1e-6;
            if !identity {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaceform::{xi_alpha, SpacePoint};
    use nalgebra::Vector4;

    const PI: f64 = std::f64::consts::PI;

    fn axis_sigma(kappa: Curvature) -> TangentVector {
        let p = SpacePoint::origin(kappa);
        TangentVector::new(p, Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap()
    }

    fn tv(kappa: Curvature, x: f64, y: f64, z: f64) -> TangentVector {
        let p = SpacePoint::origin(kappa);
        TangentVector::new(p, Vector4::new(0.0, x, y, z)).unwrap()
    }

    #[test]
    fn jacobi_initial_conditions() {
        for kappa in Curvature::ALL {
            let sigma = axis_sigma(kappa);
            let u = tv(kappa, 0.0, 0.4, -0.1);
            let v = tv(kappa, 0.0, 0.2, 0.9);
            let (a, b) = (0.7, -1.3);
            let data = JacobiData::new(sigma, u, v, a, b).unwrap();
            let (j0, j0p) = jacobi_eval(&data, 0.0).unwrap();
            assert!((j0.vec() - (u.vec() + sigma.vec() * a)).norm() < 1e-14);
            assert!((j0p.vec() - (v.vec() + sigma.vec() * b)).norm() < 1e-14);
        }
    }

    #[test]
    fn pure_velocity_field_is_the_kernel_generator() {
        for kappa in Curvature::ALL {
            let sigma = axis_sigma(kappa);
            let zero = tv(kappa, 0.0, 0.0, 0.0);
            let data = JacobiData::new(sigma, zero, zero, 1.0, 0.0).unwrap();
            for s in [0.0, 0.8, 2.2] {
                let (j, _) = jacobi_eval(&data, s).unwrap();
                let speed = geodesic_velocity(&sigma, s).unwrap();
                assert!((j.vec() - speed.vec()).norm() < 1e-13, "kappa = {kappa}");
            }
        }
    }

    #[test]
    fn spherical_field_flips_sign_after_half_period() {
        let sigma = axis_sigma(Curvature::Spherical);
        let u = tv(Curvature::Spherical, 0.0, 1.0, 0.0);
        let zero = tv(Curvature::Spherical, 0.0, 0.0, 0.0);
        let data = JacobiData::new(sigma, u, zero, 0.0, 0.0).unwrap();
        let (j, _) = jacobi_eval(&data, PI).unwrap();
        // cos₁(π) = −1 and e₂ is parallel along the (e₀,e₁)-circle
        assert!((j.vec() + Vector4::new(0.0, 0.0, 1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn jacobi_admissibility_examples() {
        let sigma = axis_sigma(Curvature::Euclidean); // the x-axis
        let zero = tv(Curvature::Euclidean, 0.0, 0.0, 0.0);
        let alpha = 1.7;
        // J(0) = e3, J'(0) = α e2: admissible since e3 × e1 = e2
        let u = tv(Curvature::Euclidean, 0.0, 0.0, 1.0);
        let v = tv(Curvature::Euclidean, 0.0, alpha, 0.0);
        let data = JacobiData::unit_speed(sigma, u, v, 0.0).unwrap();
        assert!(jacobi_admissible(&data, alpha, 1e-9).unwrap());

        // J'(0) = 0 with α ≠ 0 fails the norm equation
        let still = JacobiData::unit_speed(sigma, u, zero, 0.0).unwrap();
        assert!(!jacobi_admissible(&still, alpha, 1e-9).unwrap());

        // wrong sign fails the cross-product equation
        let vneg = tv(Curvature::Euclidean, 0.0, -alpha, 0.0);
        let wrong = JacobiData::unit_speed(sigma, u, vneg, 0.0).unwrap();
        assert!(!jacobi_admissible(&wrong, alpha, 1e-9).unwrap());

        // b ≠ 0 is outside the stated criterion
        let bad = JacobiData::new(sigma, u, v, 0.0, 0.5).unwrap();
        assert!(jacobi_admissible(&bad, alpha, 1e-9).is_err());

        // the hypothesis J(0) ⊥ J'(0) is checked, not repaired
        let tilted = tv(Curvature::Euclidean, 0.0, alpha, 0.4);
        let nonorthogonal = JacobiData::unit_speed(sigma, u, tilted, 0.0).unwrap();
        assert!(jacobi_admissible(&nonorthogonal, alpha, 1e-9).is_err());
    }

    #[test]
    fn ruled_admissibility_examples() {
        let alpha = -2.2;
        // the standard helicoid: β' = e3, V = e1, V' = α e2
        assert!(ruled_admissible(
            Vector3::z(),
            Vector3::x(),
            Vector3::y() * alpha,
            alpha,
            1e-9
        )
        .unwrap());
        assert!(
            !ruled_admissible(Vector3::z(), Vector3::x(), Vector3::zeros(), alpha, 1e-9).unwrap()
        );
        // non-standard input is rejected with a hint
        let err = ruled_admissible(Vector3::y(), Vector3::x(), Vector3::y(), alpha, 1e-9);
        assert!(err.is_err());

        // a hyperboloid orbit satisfying the homogeneous equations pushes
        // through: β'(0) = λe₃ − ρθe₁, V(0) = sin η e₁ + cos η e₃,
        // V'(0) = θ sin η e₂ with (λ, ρ, η, θ) = (0, 1, π/4, √2), α = 1
        let theta = 2.0f64.sqrt();
        let eta = PI / 4.0;
        let beta_dot = -Vector3::x() * theta;
        let v0 = Vector3::new(eta.sin(), 0.0, eta.cos());
        let vdot = Vector3::y() * (theta * eta.sin());
        assert!(ruled_admissible(beta_dot, v0, vdot, 1.0, 1e-12).unwrap());
    }

    #[test]
    fn standardize_leaves_standard_input_unchanged() {
        let alpha = 1.4;
        let beta = move |t: f64| Vector3::z() * t;
        let v = move |t: f64| Vector3::new((alpha * t).cos(), (alpha * t).sin(), 0.0);
        let data = standardize_ruled(beta, v, 0.0, StandardizeOptions::default()).unwrap();
        assert!((data.beta_dot - Vector3::z()).norm() < 1e-8);
        assert!((data.v - Vector3::x()).norm() < 1e-12);
        assert!((data.v_dot - Vector3::y() * alpha).norm() < 1e-8);
        assert!(ruled_admissible(data.beta_dot, data.v, data.v_dot, alpha, 1e-7).unwrap());
    }

    #[test]
    fn standardize_circular_helicoid_speed() {
        for (r, alpha) in [(1.0, 2.0), (0.5, 2.0), (0.1, -0.5)] {
            let (c, v) = circular_helicoid(r, alpha);
            let data = standardize_ruled(c, v, 0.0, StandardizeOptions::default()).unwrap();
            let expect = (alpha * alpha + 1.0 / (r * r)).sqrt();
            assert!(
                (data.v_dot.norm() - expect).abs() < 1e-6,
                "r = {r}, alpha = {alpha}"
            );
            assert!(data.beta_dot.dot(&data.v_dot).abs() < 1e-7);
        }
    }

    #[test]
    fn richardson_extrapolation_rescues_coarse_stencils() {
        // with a deliberately coarse step the plain 5-point stencil loses
        // several digits; the two-width extrapolation recovers them
        let (r, alpha) = (1.0f64, 2.0f64);
        let expect = (alpha * alpha + 1.0 / (r * r)).sqrt();
        let coarse = StandardizeOptions {
            step: 0.05,
            ..StandardizeOptions::default()
        };
        let refined = StandardizeOptions {
            richardson: true,
            ..coarse
        };
        let (c, v) = circular_helicoid(r, alpha);
        let plain = standardize_ruled(&c, &v, 0.0, coarse).unwrap();
        let extrapolated = standardize_ruled(&c, &v, 0.0, refined).unwrap();
        let err_plain = (plain.v_dot.norm() - expect).abs();
        let err_richardson = (extrapolated.v_dot.norm() - expect).abs();
        assert!(err_richardson < err_plain / 10.0);
        assert!(err_richardson < 1e-5);
    }

    #[test]
    fn standardize_detects_cylinders() {
        let beta = |t: f64| Vector3::new(t, t * t, 0.0);
        let v = |_t: f64| Vector3::z();
        let err = standardize_ruled(beta, v, 0.0, StandardizeOptions::default());
        assert!(matches!(err, Err(GeomError::CylindricalInput { .. })));
    }

    #[test]
    fn circular_helicoid_closed_form() {
        let (speed, adm) = circular_helicoid_check(1.0, 2.0).unwrap();
        assert!((speed - 5.0f64.sqrt()).abs() < 1e-15);
        assert!(!adm);
        let (speed, adm) = circular_helicoid_check(0.5, 2.0).unwrap();
        assert!((speed - 8.0f64.sqrt()).abs() < 1e-15);
        assert!(!adm);
        // straight-axis limit: speed tends to |α| but stays inadmissible
        let (speed, adm) = circular_helicoid_check(1e9, 2.0).unwrap();
        assert!((speed - 2.0).abs() < 1e-9);
        assert!(!adm);
        assert!(circular_helicoid_check(-1.0, 2.0).is_err());
        assert!(circular_helicoid_check(1.0, 0.0).is_err());
    }

    #[test]
    fn screw_admissibility_examples() {
        let id = Isometry::identity(Curvature::Euclidean);
        // the reference helicoidal motion: ρ=0, η=π/2, θ=α, λ=1
        let alpha = 1.9;
        let p = ScrewParams::new(alpha, 1.0, 0.0, PI / 2.0, id).unwrap();
        assert!(screw_admissible(&p, alpha, 1e-12).unwrap());

        // λ=0 hyperboloid orbit: cot η = 1/(αρ), θ = α/sin η
        let alpha = 1.0;
        let eta = PI / 4.0;
        let p = ScrewParams::new(
            2.0f64.sqrt(),
            0.0,
            1.0,
            eta,
            Isometry::identity(Curvature::Euclidean),
        )
        .unwrap();
        assert!(screw_admissible(&p, alpha, 1e-12).unwrap());

        // θ = 0 violates the first equation for α ≠ 0
        let p = ScrewParams::new(
            0.0,
            1.0,
            0.5,
            PI / 3.0,
            Isometry::identity(Curvature::Euclidean),
        )
        .unwrap();
        assert!(!screw_admissible(&p, 1.0, 1e-12).unwrap());

        // singular cotangent
        let p =
            ScrewParams::new(1.0, 1.0, 0.5, 0.0, Isometry::identity(Curvature::Euclidean)).unwrap();
        assert!(matches!(
            screw_admissible(&p, 1.0, 1e-12),
            Err(GeomError::SingularCotangent)
        ));
    }

    #[test]
    fn fiber_frame_endpoints() {
        for kappa in Curvature::ALL {
            let alpha = 1.3;
            let at_zero = fiber_frame(kappa, alpha, 0.0, 0.0);
            let xi = xi_alpha(kappa, alpha);
            assert!((at_zero.value.matrix() - xi.matrix()).norm() < 1e-14);

            let at_pi = fiber_frame(kappa, alpha, PI, 0.0);
            assert!((at_pi.value.matrix() + xi.matrix()).norm() < 1e-13);
        }
    }

    #[test]
    fn fiber_frame_matches_stabilizer_conjugation() {
        // conjugation by diag(R_κ(a), R₁(b)) produces the frame at (s,t) = (b,a)
        for kappa in Curvature::ALL {
            let alpha = -0.7;
            for (a, b) in [(0.4, 1.2), (2.0, -0.9)] {
                let mut k = nalgebra::Matrix4::<f64>::zeros();
                k.view_mut((0, 0), (2, 2))
                    .copy_from(&rotation_block(kappa, a));
                k.view_mut((2, 2), (2, 2))
                    .copy_from(&rotation_block(Curvature::Spherical, b));
                let k_inv = k.try_inverse().unwrap();
                let conj = k * xi_alpha(kappa, alpha).matrix() * k_inv;
                let frame = fiber_frame(kappa, alpha, b, a);
                assert!(
                    (conj - frame.value.matrix()).norm() < 1e-12,
                    "kappa = {kappa}"
                );
            }
        }
    }

    #[test]
    fn f_zeta_examples() {
        for kappa in Curvature::ALL {
            let alpha = 1.5;
            let xi = xi_alpha(kappa, alpha);
            let val = f_zeta(kappa, alpha, &xi, 0.0, 0.0).unwrap();
            assert!((val - (1.0 + alpha * alpha)).abs() < 1e-14);

            let zero = LieAlgebraElement::from_z_blocks(kappa, Vector2::zeros(), Vector2::zeros());
            for (s, t) in [(0.3, 0.9), (2.0, -1.0)] {
                assert_eq!(f_zeta(kappa, alpha, &zero, s, t).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn degenerate_zeta_annihilates_the_fiber_when_alpha_squared_is_kappa() {
        // ζ = Z with block [α 1; −α 1], i.e. x = (α, −α), y = (1, 1)
        for (kappa, alpha) in [
            (Curvature::Euclidean, 0.0),
            (Curvature::Spherical, 1.0),
            (Curvature::Spherical, -1.0),
        ] {
            let zeta = LieAlgebraElement::from_z_blocks(
                kappa,
                Vector2::new(alpha, -alpha),
                Vector2::new(1.0, 1.0),
            );
            for i in 0..20 {
                for j in 0..20 {
                    let s = i as f64 * PI / 10.0;
                    let t = match kappa {
                        Curvature::Spherical => j as f64 * PI / 10.0,
                        _ => -3.0 + j as f64 * 0.3,
                    };
                    let val = f_zeta(kappa, alpha, &zeta, s, t).unwrap();
                    assert!(
                        val.abs() < 1e-12,
                        "kappa = {kappa}, alpha = {alpha}, (s,t) = ({s},{t}), f = {val:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_detects_the_critical_parameters() {
        assert_eq!(substantial_rank(Curvature::Euclidean, 1.0, 64, 0), 4);
        assert!(substantial_rank(Curvature::Euclidean, 0.0, 64, 0) < 4);
        // α² = κ = 1: the fiber elements depend on s + t only, so the fiber
        // is a circle spanning a 2-plane
        assert_eq!(substantial_rank(Curvature::Spherical, 1.0, 64, 0), 2);
        assert_eq!(substantial_rank(Curvature::Spherical, -1.0, 64, 0), 2);
        assert_eq!(substantial_rank(Curvature::Spherical, 0.5, 64, 0), 4);
        assert_eq!(substantial_rank(Curvature::Hyperbolic, 1.0, 64, 0), 4);
    }

    #[test]
    fn rank_is_deterministic_and_monotone_in_samples() {
        let r1 = substantial_rank(Curvature::Spherical, 2.0, 16, 7);
        let r2 = substantial_rank(Curvature::Spherical, 2.0, 16, 7);
        assert_eq!(r1, r2);
        let mut prev = 0;
        for n in [4, 8, 16, 64, 256] {
            let r = substantial_rank(Curvature::Euclidean, 0.8, n, 7);
            assert!(r >= prev);
            prev = r;
        }
    }

    #[test]
    fn isotropy_is_trivial_for_flat_and_hyperbolic() {
        for kappa in [Curvature::Euclidean, Curvature::Hyperbolic] {
            for alpha in [1.0, -2.0, 0.5] {
                assert!(
                    isotropy_trivial(kappa, alpha, (20, 20)).unwrap(),
                    "kappa = {kappa}, alpha = {alpha}"
                );
            }
        }
        assert!(isotropy_trivial(Curvature::Spherical, 1.0, (10, 10)).is_err());
        assert!(isotropy_trivial(Curvature::Euclidean, 0.0, (10, 10)).is_err());
    }
}
