//! Closed-form Riemannian primitives of the three-dimensional space forms
//! M_κ, κ ∈ {−1, 0, +1}, embedded in ℝ⁴.
//!
//! All three geometries share one coordinate model. With the κ-weighted
//! bilinear form ⟨x,y⟩_κ = κx₀y₀ + x₁y₁ + x₂y₂ + x₃y₃:
//!
//! * κ = +1: the unit sphere S³ = {⟨x,x⟩₁ = 1},
//! * κ = −1: hyperbolic space H³, the x₀ > 0 sheet of {⟨x,x⟩₋₁ = −1},
//! * κ = 0: Euclidean space as the affine slice ℝ³ ≡ e₀ + ℝ³ = {x₀ = 1},
//!
//! so points, tangent vectors, and isometries are uniformly 4-vectors and
//! 4×4 matrices, and geodesics, parallel transport, and the screw flow
//! exp(tξ_α) have one closed form each with sin_κ/cos_κ in place of the
//! circular functions.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector2, Vector3, Vector4};

use crate::error::GeomError;

/// Default tolerance for constraint validation (membership, tangency,
/// orthogonality of constructed inputs).
pub const VALIDATE_TOL: f64 = 1e-9;
/// Tolerance for identities that are exact in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;
/// Largest hyperbolic argument accepted before cosh overflows f64.
pub const HYPERBOLIC_LIMIT: f64 = 700.0;

/// Constant sectional curvature of a space form, restricted to {−1, 0, +1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    Hyperbolic,
    Euclidean,
    Spherical,
}

impl Curvature {
    pub const ALL: [Curvature; 3] = [
        Curvature::Hyperbolic,
        Curvature::Euclidean,
        Curvature::Spherical,
    ];

    /// κ as a float, for use in the closed-form expressions.
    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Curvature::Hyperbolic => -1.0,
            Curvature::Euclidean => 0.0,
            Curvature::Spherical => 1.0,
        }
    }

    #[inline]
    pub fn as_int(self) -> i8 {
        self.value() as i8
    }

    pub fn from_int(k: i64) -> Result<Self, GeomError> {
        match k {
            -1 => Ok(Curvature::Hyperbolic),
            0 => Ok(Curvature::Euclidean),
            1 => Ok(Curvature::Spherical),
            other => Err(GeomError::invalid(format!(
                "curvature must be -1, 0 or 1, got {other}"
            ))),
        }
    }
}

impl std::fmt::Display for Curvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.as_int())
    }
}

/// The κ-weighted inner product ⟨x,y⟩_κ = κx₀y₀ + x₁y₁ + x₂y₂ + x₃y₃.
#[inline]
pub fn metric_inner(kappa: Curvature, x: &Vector4<f64>, y: &Vector4<f64>) -> f64 {
    kappa.value() * x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
}

/// Generalized sine and cosine: (sin_κ r, cos_κ r) with sin₁ = sin,
/// sin₀ = id, sin₋₁ = sinh and cos_κ = sin_κ′ (so cos₀ ≡ 1).
#[inline]
pub fn sin_cos_kappa(kappa: Curvature, r: f64) -> (f64, f64) {
    match kappa {
        Curvature::Spherical => (r.sin(), r.cos()),
        Curvature::Euclidean => (r, 1.0),
        Curvature::Hyperbolic => (r.sinh(), r.cosh()),
    }
}

/// The 2×2 block R_κ(t) = [cos_κ t, −κ sin_κ t; sin_κ t, cos_κ t]:
/// a rotation for κ = 1, a shear (translation block) for κ = 0, and a
/// Lorentz boost for κ = −1.
pub fn rotation_block(kappa: Curvature, t: f64) -> Matrix2<f64> {
    let (s, c) = sin_cos_kappa(kappa, t);
    Matrix2::new(c, -kappa.value() * s, s, c)
}

fn check_hyperbolic_range(kappa: Curvature, s: f64) -> Result<(), GeomError> {
    if kappa == Curvature::Hyperbolic && s.abs() > HYPERBOLIC_LIMIT {
        Err(GeomError::HyperbolicRange(s))
    } else {
        Ok(())
    }
}

/// A point of M_κ in embedded coordinates.
///
/// Invariants: for κ = 0 the 0-th coordinate is exactly 1; for κ = ±1 the
/// point satisfies ⟨x,x⟩_κ = κ within tolerance, with x₀ > 0 when κ = −1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePoint {
    kappa: Curvature,
    coords: Vector4<f64>,
}

impl SpacePoint {
    pub fn new(kappa: Curvature, coords: Vector4<f64>) -> Result<Self, GeomError> {
        Self::with_tolerance(kappa, coords, VALIDATE_TOL)
    }

    pub fn with_tolerance(
        kappa: Curvature,
        coords: Vector4<f64>,
        tol: f64,
    ) -> Result<Self, GeomError> {
        match kappa {
            Curvature::Euclidean => {
                if coords[0] != 1.0 {
                    return Err(GeomError::invalid(format!(
                        "Euclidean point must have x0 = 1 exactly, got {}",
                        coords[0]
                    )));
                }
            }
            _ => {
                let q = metric_inner(kappa, &coords, &coords);
                if (q - kappa.value()).abs() > tol {
                    return Err(GeomError::invalid(format!(
                        "point off the curvature-{kappa} quadric: <x,x> = {q}"
                    )));
                }
                if kappa == Curvature::Hyperbolic && coords[0] <= 0.0 {
                    return Err(GeomError::invalid(
                        "hyperbolic point must lie on the x0 > 0 sheet",
                    ));
                }
            }
        }
        Ok(SpacePoint { kappa, coords })
    }

    /// The base point e₀ (the origin of ℝ³ under the affine identification).
    pub fn origin(kappa: Curvature) -> Self {
        SpacePoint {
            kappa,
            coords: Vector4::new(1.0, 0.0, 0.0, 0.0),
        }
    }

    /// Euclidean point from spatial coordinates.
    pub fn from_spatial(v: Vector3<f64>) -> Self {
        SpacePoint {
            kappa: Curvature::Euclidean,
            coords: Vector4::new(1.0, v[0], v[1], v[2]),
        }
    }

    #[inline]
    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    #[inline]
    pub fn coords(&self) -> &Vector4<f64> {
        &self.coords
    }

    /// Spatial part (x₁, x₂, x₃).
    #[inline]
    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.coords[1], self.coords[2], self.coords[3])
    }

    /// Re-project onto the constraint set. Bounds drift after long
    /// compositions of isometries.
    pub fn renormalized(&self) -> Self {
        let mut c = self.coords;
        match self.kappa {
            Curvature::Euclidean => c[0] = 1.0,
            _ => {
                let q = metric_inner(self.kappa, &c, &c) * self.kappa.value();
                if q > 0.0 {
                    c /= q.sqrt();
                }
            }
        }
        SpacePoint {
            kappa: self.kappa,
            coords: c,
        }
    }

    pub(crate) fn from_coords_unchecked(kappa: Curvature, coords: Vector4<f64>) -> Self {
        SpacePoint { kappa, coords }
    }
}

/// A tangent vector of M_κ, carrying its base point.
///
/// Invariants: for κ = 0 the 0-th component is exactly 0; for κ = ±1 the
/// vector is ⟨,⟩_κ-orthogonal to its base point within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    base: SpacePoint,
    vec: Vector4<f64>,
}

impl TangentVector {
    pub fn new(base: SpacePoint, vec: Vector4<f64>) -> Result<Self, GeomError> {
        Self::with_tolerance(base, vec, VALIDATE_TOL)
    }

    pub fn with_tolerance(
        base: SpacePoint,
        vec: Vector4<f64>,
        tol: f64,
    ) -> Result<Self, GeomError> {
        match base.kappa {
            Curvature::Euclidean => {
                if vec[0] != 0.0 {
                    return Err(GeomError::invalid(format!(
                        "Euclidean tangent vector must have v0 = 0 exactly, got {}",
                        vec[0]
                    )));
                }
            }
            _ => {
                let pairing = metric_inner(base.kappa, base.coords(), &vec);
                // Scale-aware: tangency degrades linearly with |v|.
                if pairing.abs() > tol * (1.0 + vec.norm()) {
                    return Err(GeomError::invalid(format!(
                        "vector not tangent at its base: <p,v> = {pairing:e}"
                    )));
                }
            }
        }
        Ok(TangentVector { base, vec })
    }

    /// Euclidean tangent vector from spatial components.
    pub fn from_spatial(base: SpacePoint, v: Vector3<f64>) -> Result<Self, GeomError> {
        if base.kappa != Curvature::Euclidean {
            return Err(GeomError::KappaMismatch(base.kappa.as_int(), 0));
        }
        Ok(TangentVector {
            base,
            vec: Vector4::new(0.0, v[0], v[1], v[2]),
        })
    }

    #[inline]
    pub fn base(&self) -> &SpacePoint {
        &self.base
    }

    #[inline]
    pub fn kappa(&self) -> Curvature {
        self.base.kappa
    }

    #[inline]
    pub fn vec(&self) -> &Vector4<f64> {
        &self.vec
    }

    #[inline]
    pub fn spatial(&self) -> Vector3<f64> {
        Vector3::new(self.vec[1], self.vec[2], self.vec[3])
    }

    /// ⟨v,v⟩_κ^{1/2}. The metric is Riemannian on tangent spaces, so this is
    /// well defined for all three curvatures.
    pub fn norm(&self) -> f64 {
        metric_inner(self.kappa(), &self.vec, &self.vec)
            .max(0.0)
            .sqrt()
    }

    pub fn inner(&self, other: &TangentVector) -> f64 {
        metric_inner(self.kappa(), &self.vec, &other.vec)
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Gram–Schmidt against the base point followed by unit normalization.
    pub fn renormalized_unit(&self) -> Result<Self, GeomError> {
        let base = self.base.renormalized();
        let mut v = self.vec;
        match base.kappa {
            Curvature::Euclidean => v[0] = 0.0,
            _ => {
                let k = base.kappa.value();
                let pairing = metric_inner(base.kappa, base.coords(), &v);
                // subtract the normal component <v,p>/<p,p> p with <p,p> = κ
                v -= base.coords() * (pairing * k);
            }
        }
        let n = metric_inner(base.kappa, &v, &v).sqrt();
        if n.is_nan() || n <= 0.0 {
            return Err(GeomError::invalid("cannot normalize a zero tangent vector"));
        }
        Ok(TangentVector { base, vec: v / n })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TangentVector {
            base: self.base,
            vec: self.vec * factor,
        }
    }

    pub(crate) fn from_parts_unchecked(base: SpacePoint, vec: Vector4<f64>) -> Self {
        TangentVector { base, vec }
    }
}

fn ensure_same_base(a: &TangentVector, b: &TangentVector) -> Result<(), GeomError> {
    if a.kappa() != b.kappa() {
        return Err(GeomError::KappaMismatch(
            a.kappa().as_int(),
            b.kappa().as_int(),
        ));
    }
    if (a.base.coords() - b.base.coords()).norm() > 1e-7 {
        return Err(GeomError::invalid(
            "tangent vectors are based at different points",
        ));
    }
    Ok(())
}

fn ensure_unit(v: &TangentVector, what: &str) -> Result<(), GeomError> {
    if !v.is_unit(1e-7) {
        return Err(GeomError::invalid(format!(
            "{what} must be a unit vector, got norm {}",
            v.norm()
        )));
    }
    Ok(())
}

/// The geodesic point γ_v(s) = cos_κ(s)·p + sin_κ(s)·v for a unit tangent
/// vector v at p. For κ = 0 this is p + s·v.
pub fn geodesic_point(v: &TangentVector, s: f64) -> Result<SpacePoint, GeomError> {
    ensure_unit(v, "geodesic direction")?;
    check_hyperbolic_range(v.kappa(), s)?;
    let (sk, ck) = sin_cos_kappa(v.kappa(), s);
    let coords = v.base.coords() * ck + v.vec * sk;
    Ok(SpacePoint::from_coords_unchecked(v.kappa(), coords))
}

/// The geodesic velocity γ_v′(s) = −κ sin_κ(s)·p + cos_κ(s)·v, based at γ_v(s).
pub fn geodesic_velocity(v: &TangentVector, s: f64) -> Result<TangentVector, GeomError> {
    ensure_unit(v, "geodesic direction")?;
    check_hyperbolic_range(v.kappa(), s)?;
    let k = v.kappa().value();
    let (sk, ck) = sin_cos_kappa(v.kappa(), s);
    let base = geodesic_point(v, s)?;
    let vec = v.base.coords() * (-k * sk) + v.vec * ck;
    Ok(TangentVector::from_parts_unchecked(base, vec))
}

/// Parallel transport of `w` along the geodesic γ_v to γ_v(s).
///
/// In the embedding the component of `w` along `v` follows the geodesic
/// velocity, while the component orthogonal to the plane span{p, v} is
/// carried unchanged.
pub fn parallel_transport(
    v: &TangentVector,
    w: &TangentVector,
    s: f64,
) -> Result<TangentVector, GeomError> {
    ensure_same_base(v, w)?;
    ensure_unit(v, "transport direction")?;
    check_hyperbolic_range(v.kappa(), s)?;
    let along = metric_inner(v.kappa(), &w.vec, &v.vec);
    let perp = w.vec - v.vec * along;
    let vel = geodesic_velocity(v, s)?;
    let vec = vel.vec * along + perp;
    Ok(TangentVector::from_parts_unchecked(*vel.base(), vec))
}

/// The κ-generalized cross product of two tangent vectors at a common point.
///
/// For orthonormal u, v at p it is the unique unit vector w such that
/// {p, u, v, w} is a positively oriented ⟨,⟩_κ-orthogonal basis of ℝ⁴
/// (det(p,u,v,w) > 0); extended bilinearly. Componentwise
/// w_i = κ^{δ_{i0}} det(p, u, v, e_i), which for κ = 0 reduces to the
/// spatial 3-D cross product of the spatial parts.
pub fn cross(u: &TangentVector, v: &TangentVector) -> Result<TangentVector, GeomError> {
    ensure_same_base(u, v)?;
    let p = u.base.coords();
    let mut w = Vector4::zeros();
    for i in 0..4 {
        let mut e = Vector4::zeros();
        e[i] = 1.0;
        let d = Matrix4::from_columns(&[*p, u.vec, v.vec, e]).determinant();
        w[i] = if i == 0 { u.kappa().value() * d } else { d };
    }
    Ok(TangentVector::from_parts_unchecked(u.base, w))
}

/// An orientation-preserving isometry of M_κ as a 4×4 matrix acting on
/// embedded coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    kappa: Curvature,
    mat: Matrix4<f64>,
}

impl Isometry {
    pub fn new(kappa: Curvature, mat: Matrix4<f64>) -> Result<Self, GeomError> {
        let g = Isometry { kappa, mat };
        g.validate(VALIDATE_TOL)?;
        Ok(g)
    }

    pub fn identity(kappa: Curvature) -> Self {
        Isometry {
            kappa,
            mat: Matrix4::identity(),
        }
    }

    /// Euclidean isometry x ↦ Rx + a in the affine model.
    pub fn from_rotation_translation(rot: Matrix3<f64>, a: Vector3<f64>) -> Self {
        let mut mat = Matrix4::identity();
        mat.fixed_view_mut::<3, 3>(1, 1).copy_from(&rot);
        mat[(1, 0)] = a[0];
        mat[(2, 0)] = a[1];
        mat[(3, 0)] = a[2];
        Isometry {
            kappa: Curvature::Euclidean,
            mat,
        }
    }

    /// Euclidean translation.
    pub fn translation(a: Vector3<f64>) -> Self {
        Self::from_rotation_translation(Matrix3::identity(), a)
    }

    /// Euclidean rotation about an axis through the origin.
    pub fn rotation_about_axis(axis: Vector3<f64>, angle: f64) -> Result<Self, GeomError> {
        let n = axis.norm();
        if n < 1e-12 {
            return Err(GeomError::invalid("rotation axis must be nonzero"));
        }
        let rot = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
        Ok(Self::from_rotation_translation(
            rot.into_inner(),
            Vector3::zeros(),
        ))
    }

    #[inline]
    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.mat
    }

    pub fn validate(&self, tol: f64) -> Result<(), GeomError> {
        let m = &self.mat;
        match self.kappa {
            Curvature::Euclidean => {
                let row_ok = (m[(0, 0)] - 1.0).abs() <= tol
                    && m[(0, 1)].abs() <= tol
                    && m[(0, 2)].abs() <= tol
                    && m[(0, 3)].abs() <= tol;
                if !row_ok {
                    return Err(GeomError::invalid(
                        "Euclidean isometry must have first row (1,0,0,0)",
                    ));
                }
                let r = m.fixed_view::<3, 3>(1, 1).into_owned();
                let defect = (r.transpose() * r - Matrix3::identity()).norm();
                if defect > 10.0 * tol || (r.determinant() - 1.0).abs() > 10.0 * tol {
                    return Err(GeomError::invalid(
                        "Euclidean isometry block is not special orthogonal",
                    ));
                }
            }
            Curvature::Spherical => {
                let defect = (m.transpose() * m - Matrix4::identity()).norm();
                if defect > 10.0 * tol || (m.determinant() - 1.0).abs() > 10.0 * tol {
                    return Err(GeomError::invalid("matrix is not in SO(4)"));
                }
            }
            Curvature::Hyperbolic => {
                let j = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
                let defect = (m.transpose() * j * m - j).norm();
                if defect > 10.0 * tol || (m.determinant() - 1.0).abs() > 10.0 * tol {
                    return Err(GeomError::invalid("matrix is not in O(1,3) with det 1"));
                }
                if m[(0, 0)] <= 0.0 {
                    return Err(GeomError::invalid(
                        "hyperbolic isometry must preserve the x0 > 0 sheet",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn compose(&self, other: &Isometry) -> Result<Self, GeomError> {
        if self.kappa != other.kappa {
            return Err(GeomError::KappaMismatch(
                self.kappa.as_int(),
                other.kappa.as_int(),
            ));
        }
        Ok(Isometry {
            kappa: self.kappa,
            mat: self.mat * other.mat,
        })
    }

    /// Group inverse, computed from the defining relation of each group
    /// rather than by LU factorization.
    pub fn inverse(&self) -> Self {
        let mat = match self.kappa {
            Curvature::Euclidean => {
                let r = self.mat.fixed_view::<3, 3>(1, 1).into_owned();
                let a = Vector3::new(self.mat[(1, 0)], self.mat[(2, 0)], self.mat[(3, 0)]);
                let rt = r.transpose();
                let mut m = Matrix4::identity();
                m.fixed_view_mut::<3, 3>(1, 1).copy_from(&rt);
                let b = -rt * a;
                m[(1, 0)] = b[0];
                m[(2, 0)] = b[1];
                m[(3, 0)] = b[2];
                m
            }
            Curvature::Spherical => self.mat.transpose(),
            Curvature::Hyperbolic => {
                let j = Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0));
                j * self.mat.transpose() * j
            }
        };
        Isometry {
            kappa: self.kappa,
            mat,
        }
    }

    /// Apply to a point. The matrix acts linearly on embedded coordinates.
    pub fn apply_point(&self, p: &SpacePoint) -> Result<SpacePoint, GeomError> {
        if self.kappa != p.kappa() {
            return Err(GeomError::KappaMismatch(
                self.kappa.as_int(),
                p.kappa().as_int(),
            ));
        }
        self.validate(VALIDATE_TOL)?;
        Ok(SpacePoint::from_coords_unchecked(
            self.kappa,
            self.mat * p.coords(),
        ))
    }

    /// Apply to a tangent vector; the differential of a linear isometry is
    /// the same matrix.
    pub fn apply_tangent(&self, v: &TangentVector) -> Result<TangentVector, GeomError> {
        let base = self.apply_point(v.base())?;
        Ok(TangentVector::from_parts_unchecked(base, self.mat * v.vec))
    }

    pub(crate) fn from_matrix_unchecked(kappa: Curvature, mat: Matrix4<f64>) -> Self {
        Isometry { kappa, mat }
    }
}

/// The screw isometry S_t = exp(tξ_α): the block R_κ(t) acting on the
/// (x₀, x₃) coordinates composed with a rotation by αt of the (x₁, x₂)
/// plane. For κ = 0 this is a rotation about the z-axis together with a
/// unit-speed translation along it.
pub fn screw_exponential(kappa: Curvature, alpha: f64, t: f64) -> Result<Isometry, GeomError> {
    check_hyperbolic_range(kappa, t)?;
    let (sk, ck) = sin_cos_kappa(kappa, t);
    let (sa, ca) = (alpha * t).sin_cos();
    let k = kappa.value();
    let mat = Matrix4::new(
        ck,
        0.0,
        0.0,
        -k * sk, //
        0.0,
        ca,
        -sa,
        0.0, //
        0.0,
        sa,
        ca,
        0.0, //
        sk,
        0.0,
        0.0,
        ck,
    );
    Ok(Isometry { kappa, mat })
}

/// An element of the isometry Lie algebra 𝔤_κ, usually one lying in the
/// Ad-invariant complement 𝔭_κ of the line stabilizer.
///
/// Elements of 𝔭_κ have the block form Z(x,y) with 2-vector blocks x, y:
/// lower-left 2×2 block (x | y), upper-right block (−κx | −y)ᵀ, zero
/// diagonal blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieAlgebraElement {
    kappa: Curvature,
    mat: Matrix4<f64>,
}

impl LieAlgebraElement {
    /// Build Z(x, y) ∈ 𝔭_κ from its 2-vector blocks.
    pub fn from_z_blocks(kappa: Curvature, x: Vector2<f64>, y: Vector2<f64>) -> Self {
        let k = kappa.value();
        let mut m = Matrix4::zeros();
        m[(2, 0)] = x[0];
        m[(3, 0)] = x[1];
        m[(2, 1)] = y[0];
        m[(3, 1)] = y[1];
        m[(0, 2)] = -k * x[0];
        m[(0, 3)] = -k * x[1];
        m[(1, 2)] = -y[0];
        m[(1, 3)] = -y[1];
        LieAlgebraElement { kappa, mat: m }
    }

    pub fn from_matrix(kappa: Curvature, mat: Matrix4<f64>) -> Self {
        LieAlgebraElement { kappa, mat }
    }

    #[inline]
    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.mat
    }

    /// The blocks (x, y) when the element lies in 𝔭_κ; errors otherwise.
    pub fn z_blocks(&self) -> Result<(Vector2<f64>, Vector2<f64>), GeomError> {
        let m = &self.mat;
        let x = Vector2::new(m[(2, 0)], m[(3, 0)]);
        let y = Vector2::new(m[(2, 1)], m[(3, 1)]);
        let rebuilt = Self::from_z_blocks(self.kappa, x, y);
        if (self.mat - rebuilt.mat).norm() > 1e-9 {
            return Err(GeomError::invalid(
                "Lie algebra element is not in the complement p_kappa",
            ));
        }
        Ok((x, y))
    }

    /// The inner product ⟨Z(x,y), Z(u,v)⟩ = ⟨x,u⟩ + ⟨y,v⟩ on 𝔭_κ.
    pub fn p_inner(&self, other: &LieAlgebraElement) -> Result<f64, GeomError> {
        if self.kappa != other.kappa {
            return Err(GeomError::KappaMismatch(
                self.kappa.as_int(),
                other.kappa.as_int(),
            ));
        }
        let (x1, y1) = self.z_blocks()?;
        let (x2, y2) = other.z_blocks()?;
        Ok(x1.dot(&x2) + y1.dot(&y2))
    }
}

/// The screw generator ξ_α = Z((0,1), (α,0)) ∈ 𝔭_κ, with d/dt|₀ exp(tξ_α)
/// realizing the infinitesimal helicoidal motion of pitch 2π/α.
pub fn xi_alpha(kappa: Curvature, alpha: f64) -> LieAlgebraElement {
    LieAlgebraElement::from_z_blocks(kappa, Vector2::new(0.0, 1.0), Vector2::new(alpha, 0.0))
}
