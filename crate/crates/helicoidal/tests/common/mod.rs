//! Shared oracles and deterministic random generators for the integration
//! tests. Everything here is independent of the closed forms it checks:
//! the matrix exponential is a scaling-and-squaring series, the Jacobi
//! oracle integrates the differential equation, and random elements are
//! produced from seeded streams so failures replay exactly.
//!
//! Each test binary includes this module separately and uses a subset.
#![allow(dead_code)]

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use helicoidal::spaceform::metric_inner;
use helicoidal::{Curvature, Isometry, OrientedGeodesic, SpacePoint, TangentVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix exponential by scaling and squaring of a machine-precision Taylor
/// series; the oracle for the closed-form screw flow.
pub fn expm4(a: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = a.norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for i in 1..=30 {
        term = term * scaled / i as f64;
        sum += term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    let mut out = sum;
    for _ in 0..squarings {
        out = out * out;
    }
    out
}

pub fn max_abs_entry(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

pub fn unit3<R: Rng>(r: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

pub fn random_line<R: Rng>(r: &mut R) -> OrientedGeodesic {
    let base = Vector3::new(
        r.gen_range(-3.0..3.0),
        r.gen_range(-3.0..3.0),
        r.gen_range(-3.0..3.0),
    );
    OrientedGeodesic::from_spatial(base, unit3(r)).unwrap()
}

/// Random point of M_κ, reached from the base point along a random geodesic.
pub fn random_point<R: Rng>(r: &mut R, kappa: Curvature) -> SpacePoint {
    let origin = SpacePoint::origin(kappa);
    let dir = random_unit_tangent(r, &origin);
    let s = r.gen_range(-1.5..1.5);
    helicoidal::spaceform::geodesic_point(&dir, s).unwrap()
}

/// Random unit tangent vector at a point, by projecting a random ambient
/// vector onto the tangent space.
pub fn random_unit_tangent<R: Rng>(r: &mut R, p: &SpacePoint) -> TangentVector {
    loop {
        let raw = Vector4::new(
            if p.kappa() == Curvature::Euclidean {
                0.0
            } else {
                r.gen_range(-1.0..1.0)
            },
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
            r.gen_range(-1.0..1.0),
        );
        let k = p.kappa().value();
        let mut vec = raw;
        if p.kappa() != Curvature::Euclidean {
            let pairing = metric_inner(p.kappa(), p.coords(), &vec);
            vec -= p.coords() * (pairing * k);
        }
        let n = metric_inner(p.kappa(), &vec, &vec);
        if n > 1e-6 {
            return TangentVector::new(*p, vec / n.sqrt()).unwrap();
        }
    }
}

/// Random unit tangent at `p` orthogonal to a given unit tangent there.
pub fn random_orthogonal_tangent<R: Rng>(r: &mut R, v: &TangentVector) -> TangentVector {
    loop {
        let w = random_unit_tangent(r, v.base());
        let proj = w.vec() - v.vec() * w.inner(v);
        let n = metric_inner(v.kappa(), &proj, &proj);
        if n > 1e-6 {
            return TangentVector::new(*v.base(), proj / n.sqrt()).unwrap();
        }
    }
}

pub fn random_rotation<R: Rng>(r: &mut R) -> Matrix3<f64> {
    let axis = unit3(r);
    let angle = r.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_unchecked(axis), angle).into_inner()
}

/// Random orientation-preserving isometry of M_κ: rotation+translation for
/// κ = 0, the exponential of a random Lie algebra element otherwise.
pub fn random_isometry<R: Rng>(r: &mut R, kappa: Curvature) -> Isometry {
    match kappa {
        Curvature::Euclidean => {
            let a = Vector3::new(
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
                r.gen_range(-2.0..2.0),
            );
            Isometry::from_rotation_translation(random_rotation(r), a)
        }
        _ => {
            // 𝔤_κ elements have first row (0, −κxᵀ), first column (0, x),
            // and a skew lower-right block
            let x = Vector3::new(
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            );
            let b = Vector3::new(
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            );
            let k = kappa.value();
            let mat = Matrix4::new(
                0.0,
                -k * x[0],
                -k * x[1],
                -k * x[2], //
                x[0],
                0.0,
                -b[2],
                b[1], //
                x[1],
                b[2],
                0.0,
                -b[0], //
                x[2],
                -b[1],
                b[0],
                0.0,
            );
            Isometry::new(kappa, expm4(&mat)).expect("exponential lands in the group")
        }
    }
}
