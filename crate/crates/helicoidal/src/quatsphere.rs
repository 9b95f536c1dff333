//! Quaternionic description of the oriented great circles of S³.
//!
//! S³ is the group of unit quaternions. The maps f(p)(x) = p·x·p̄ on
//! imaginary quaternions and F(p,q)(y) = p·y·q̄ on all of ℍ are the familiar
//! surjective two-to-one covers of SO(3) and SO(4). Acting on the reference
//! circle c_o = [s ↦ e^{is}] they identify the manifold of oriented great
//! circles with S²×S²: the circle (a,b)·c_o corresponds to the pair
//! (a·i·ā, b·i·b̄). Writing a circle as s ↦ a·e^{is}·b̄ and reading off a
//! point p and the unit velocity v there gives the point-free evaluation
//! used by [`phi_map`]: a·b̄ = p and a·i·b̄ = v force the two factors to be
//! v·p̄ and p̄·v.
//!
//! In these coordinates the set of fibers of a Hopf fibration is exactly a
//! slice {z}×S² or S²×{z}, which is what [`hopf_classify`] tests for.

use nalgebra::{Matrix4, Vector3, Vector4};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GeomError;
use crate::lines::OrientedGeodesic;
use crate::spaceform::{Curvature, Isometry, SpacePoint, TangentVector};

/// A quaternion w + x·i + y·j + z·k with the Hamilton product (i·j = k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn one() -> Self {
        Quaternion::new(1.0, 0.0, 0.0, 0.0)
    }

    pub const fn i() -> Self {
        Quaternion::new(0.0, 1.0, 0.0, 0.0)
    }

    pub const fn j() -> Self {
        Quaternion::new(0.0, 0.0, 1.0, 0.0)
    }

    pub const fn k() -> Self {
        Quaternion::new(0.0, 0.0, 0.0, 1.0)
    }

    /// Purely imaginary quaternion from a 3-vector.
    pub fn from_imaginary(v: Vector3<f64>) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    /// Identification ℝ⁴ ≡ ℍ, e₀ ↦ 1, e₁ ↦ i, e₂ ↦ j, e₃ ↦ k.
    pub fn from_vector4(v: &Vector4<f64>) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vector4(self) -> Vector4<f64> {
        Vector4::new(self.w, self.x, self.y, self.z)
    }

    pub fn imaginary(self) -> Vector3<f64> {
        Vector3::new(self.x, self.y, self.z)
    }

    pub fn conjugate(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn inverse(self) -> Result<Self, GeomError> {
        let n2 = self.norm_squared();
        if n2 < 1e-300 {
            return Err(GeomError::invalid("cannot invert a zero quaternion"));
        }
        let c = self.conjugate();
        Ok(Quaternion::new(c.w / n2, c.x / n2, c.y / n2, c.z / n2))
    }

    /// Exponential of the imaginary quaternion with components `v`:
    /// cos|v| + sin|v|·v̂.
    pub fn exp_imaginary(v: Vector3<f64>) -> Self {
        let theta = v.norm();
        if theta < 1e-300 {
            return Quaternion::one();
        }
        let (s, c) = theta.sin_cos();
        let axis = v * (s / theta);
        Quaternion::new(c, axis[0], axis[1], axis[2])
    }

    pub fn scaled(self, f: f64) -> Self {
        Quaternion::new(self.w * f, self.x * f, self.y * f, self.z * f)
    }

    pub fn is_unit(self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }
}

impl std::ops::Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, r: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * r.w - self.x * r.x - self.y * r.y - self.z * r.z,
            self.w * r.x + self.x * r.w + self.y * r.z - self.z * r.y,
            self.w * r.y - self.x * r.z + self.y * r.w + self.z * r.x,
            self.w * r.z + self.x * r.y - self.y * r.x + self.z * r.w,
        )
    }
}

impl std::ops::Add for Quaternion {
    type Output = Quaternion;

    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

/// The SO(3) action f(p)(x) = p·x·p̄ of a unit quaternion on imaginary
/// quaternions, expressed on 3-vectors.
pub fn rot3(p: Quaternion, x: Vector3<f64>) -> Vector3<f64> {
    (p * Quaternion::from_imaginary(x) * p.conjugate()).imaginary()
}

/// The SO(4) action F(p,q)(y) = p·y·q̄ of a pair of unit quaternions.
pub fn rot4(p: Quaternion, q: Quaternion, y: Quaternion) -> Quaternion {
    p * y * q.conjugate()
}

/// The 4×4 matrix of y ↦ p·y·q̄ as an isometry of S³.
pub fn quat_pair_isometry(p: Quaternion, q: Quaternion) -> Isometry {
    let cols = [
        rot4(p, q, Quaternion::one()).to_vector4(),
        rot4(p, q, Quaternion::i()).to_vector4(),
        rot4(p, q, Quaternion::j()).to_vector4(),
        rot4(p, q, Quaternion::k()).to_vector4(),
    ];
    Isometry::from_matrix_unchecked(Curvature::Spherical, Matrix4::from_columns(&cols))
}

/// The rotation R_β of ℝ⁴ fixing 1 and k and turning the i–j plane by β,
/// as a pair for [`rot4`]: R_β(q) = e^{βk/2}·q·e^{−βk/2}.
pub fn r_beta_pair(beta: f64) -> (Quaternion, Quaternion) {
    let h = Quaternion::exp_imaginary(Vector3::z() * (beta / 2.0));
    (h, h)
}

/// The transvection T_τ along t ↦ e^{tk}: T_τ(q) = e^{τk/2}·q·e^{τk/2}.
/// Its differential realizes parallel transport along that geodesic.
pub fn t_tau_pair(tau: f64) -> (Quaternion, Quaternion) {
    let h = Quaternion::exp_imaginary(Vector3::z() * (tau / 2.0));
    (h, h.conjugate())
}

pub fn r_beta_isometry(beta: f64) -> Isometry {
    let (p, q) = r_beta_pair(beta);
    quat_pair_isometry(p, q)
}

pub fn t_tau_isometry(tau: f64) -> Isometry {
    let (p, q) = t_tau_pair(tau);
    quat_pair_isometry(p, q)
}

/// A point of S²×S²: the coordinates of an oriented great circle.
///
/// Both components are unit imaginary quaternions, stored by their
/// imaginary parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereCirclePoint {
    x: Vector3<f64>,
    y: Vector3<f64>,
}

impl SphereCirclePoint {
    pub fn new(x: Vector3<f64>, y: Vector3<f64>) -> Result<Self, GeomError> {
        for (name, v) in [("x", &x), ("y", &y)] {
            if (v.norm() - 1.0).abs() > 1e-6 {
                return Err(GeomError::invalid(format!(
                    "{name} factor must be a unit imaginary quaternion, norm {}",
                    v.norm()
                )));
            }
        }
        Ok(SphereCirclePoint { x, y })
    }

    #[inline]
    pub fn x(&self) -> Vector3<f64> {
        self.x
    }

    #[inline]
    pub fn y(&self) -> Vector3<f64> {
        self.y
    }
}

#[derive(Serialize, Deserialize)]
struct CirclePointRepr {
    x: [f64; 3],
    y: [f64; 3],
}

impl Serialize for SphereCirclePoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CirclePointRepr {
            x: [self.x[0], self.x[1], self.x[2]],
            y: [self.y[0], self.y[1], self.y[2]],
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SphereCirclePoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CirclePointRepr::deserialize(deserializer)?;
        SphereCirclePoint::new(Vector3::from(repr.x), Vector3::from(repr.y))
            .map_err(serde::de::Error::custom)
    }
}

/// The S²×S² coordinates of an oriented great circle.
///
/// With p any point of the circle and v the unit velocity there (as
/// quaternions), the two factors are v·p̄ and p̄·v; the result does not
/// depend on the choice of p.
pub fn phi_map(circle: &OrientedGeodesic) -> Result<SphereCirclePoint, GeomError> {
    if circle.kappa() != Curvature::Spherical {
        return Err(GeomError::Unsupported {
            kappa: circle.kappa().as_int(),
            what: "the S^2 x S^2 coordinates exist for great circles of S^3".into(),
        });
    }
    let p = Quaternion::from_vector4(circle.base().coords());
    let v = Quaternion::from_vector4(circle.dir().vec());
    let x = v * p.conjugate();
    let y = p.conjugate() * v;
    SphereCirclePoint::new(x.imaginary(), y.imaginary())
}

/// Unit quaternion a with a·i·ā equal to the given unit imaginary target;
/// the antipodal target −i takes the lift a = j.
fn lift_rotating_i_to(target: Vector3<f64>) -> Quaternion {
    let i = Vector3::x();
    let c = i.dot(&target);
    if c > 1.0 - 1e-14 {
        return Quaternion::one();
    }
    if c < -1.0 + 1e-14 {
        return Quaternion::j();
    }
    let axis = i.cross(&target);
    let angle = c.clamp(-1.0, 1.0).acos();
    Quaternion::exp_imaginary(axis.normalize() * (angle / 2.0))
}

/// The oriented great circle with the given S²×S² coordinates:
/// [s ↦ a·e^{is}·b̄] for any lifts a, b of the two factors. The two-to-one
/// ambiguity of the lifts does not change the circle.
pub fn phi_inverse(x: Vector3<f64>, y: Vector3<f64>) -> Result<OrientedGeodesic, GeomError> {
    let at = SphereCirclePoint::new(x, y)?;
    let a = lift_rotating_i_to(at.x.normalize());
    let b = lift_rotating_i_to(at.y.normalize());
    let p = a * b.conjugate();
    let v = a * Quaternion::i() * b.conjugate();
    let base = SpacePoint::new(Curvature::Spherical, p.to_vector4())?;
    let ray = TangentVector::new(base, v.to_vector4())?;
    OrientedGeodesic::from_point_direction(ray)
}

/// The S²×S² path of the helicoidal curve in good position:
/// t ↦ (R_{t(1+α)}(i), R_{t(α−1)}(i)).
///
/// Writing the surface orbit as T_t R_{αt}(e^{si}) = a_t·e^{is}·b̄_t forces
/// a_t = e^{(1+α)tk/2} and b̄_t = e^{(1−α)tk/2}, so the second factor
/// b_t·i·b̄_t turns with angular rate α − 1: it freezes exactly at α = 1
/// and the two factors' speeds are |1+α| and |1−α|.
pub fn gamma_sphere(alpha: f64, t: f64) -> SphereCirclePoint {
    let (p1, _) = r_beta_pair(t * (1.0 + alpha));
    let (p2, _) = r_beta_pair(t * (alpha - 1.0));
    SphereCirclePoint {
        x: rot3(p1, Vector3::x()),
        y: rot3(p2, Vector3::x()),
    }
}

/// Whether a tangent vector of S²×S² is the initial velocity of an
/// α-helicoidal curve through `at`: the fiber over (x, y) consists of the
/// pairs ((1+α)z, (1−α)w) with z, w unit and orthogonal to x, y.
pub fn fiber_membership_sphere(
    alpha: f64,
    at: &SphereCirclePoint,
    vel: (Vector3<f64>, Vector3<f64>),
    tol: f64,
) -> Result<bool, GeomError> {
    let t1 = vel.0.dot(&at.x);
    let t2 = vel.1.dot(&at.y);
    let scale1 = vel.0.norm().max(1.0);
    let scale2 = vel.1.norm().max(1.0);
    if t1.abs() > 1e-7 * scale1 || t2.abs() > 1e-7 * scale2 {
        return Err(GeomError::invalid(format!(
            "velocity is not tangent: <v1,x> = {t1:e}, <v2,y> = {t2:e}"
        )));
    }
    // for α = ±1 one factor must vanish and the other must have norm 2;
    // both demands are instances of the same norm conditions
    let ok1 = (vel.0.norm() - (1.0 + alpha).abs()).abs() <= tol;
    let ok2 = (vel.1.norm() - (1.0 - alpha).abs()).abs() <= tol;
    Ok(ok1 && ok2)
}

/// Outcome of testing a family of circles against the Hopf slices.
#[derive(Debug, Clone, PartialEq)]
pub enum HopfClass {
    /// First factor constant: the sample is consistent with the fiber set
    /// {z}×S² of a left Hopf fibration.
    LeftHopf {
        z: Vector3<f64>,
    },
    /// Second factor constant: consistent with S²×{z}.
    RightHopf {
        z: Vector3<f64>,
    },
    /// Both factors constant (degenerate sample, e.g. a single circle).
    BothConstant {
        x: Vector3<f64>,
        y: Vector3<f64>,
    },
    NotHopf,
}

/// Options for [`hopf_classify`].
#[derive(Debug, Clone, Copy)]
pub struct HopfClassifyOptions {
    /// Maximal deviation of a factor from its mean direction for the factor
    /// to count as constant.
    pub constancy_tol: f64,
    /// Report the constant factor of right-Hopf families with reversed sign.
    /// The default keeps the factor exactly as computed.
    pub reverse_right_convention: bool,
}

impl Default for HopfClassifyOptions {
    fn default() -> Self {
        HopfClassifyOptions {
            constancy_tol: 1e-6,
            reverse_right_convention: false,
        }
    }
}

fn constant_factor(values: &[Vector3<f64>], tol: f64) -> Option<Vector3<f64>> {
    let sum: Vector3<f64> = values.iter().sum();
    if sum.norm() < 1e-9 {
        return None;
    }
    let mean = sum.normalize();
    let max_dev = values.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    (max_dev <= tol).then_some(mean)
}

/// Classify a finite family of oriented great circles: does it sit inside
/// the fiber set of a left or right Hopf fibration?
pub fn hopf_classify(
    circles: &[OrientedGeodesic],
    options: HopfClassifyOptions,
) -> Result<HopfClass, GeomError> {
    if circles.is_empty() {
        return Err(GeomError::invalid(
            "hopf classification needs a nonempty sample of circles",
        ));
    }
    let mut xs = Vec::with_capacity(circles.len());
    let mut ys = Vec::with_capacity(circles.len());
    for c in circles {
        let pt = phi_map(c)?;
        xs.push(pt.x);
        ys.push(pt.y);
    }
    let cx = constant_factor(&xs, options.constancy_tol);
    let cy = constant_factor(&ys, options.constancy_tol);
    Ok(match (cx, cy) {
        (Some(x), Some(y)) => HopfClass::BothConstant { x, y },
        (Some(z), None) => HopfClass::LeftHopf { z },
        (None, Some(z)) => HopfClass::RightHopf {
            z: if options.reverse_right_convention {
                -z
            } else {
                z
            },
        },
        (None, None) => HopfClass::NotHopf,
    })
}
