//! Property-based invariants of the geometry kernel.

mod common;

use nalgebra::{Vector3, Vector4};
use proptest::prelude::*;

use helicoidal::admissible::fiber_frame;
use helicoidal::lines::act_on_geodesic;
use helicoidal::quatsphere::{rot3, rot4, Quaternion};
use helicoidal::spaceform::{
    cross, geodesic_point, metric_inner, parallel_transport, screw_exponential,
};
use helicoidal::{Curvature, OrientedGeodesic, SpacePoint, TangentVector};

fn kappa_strategy() -> impl Strategy<Value = Curvature> {
    prop_oneof![
        Just(Curvature::Hyperbolic),
        Just(Curvature::Euclidean),
        Just(Curvature::Spherical),
    ]
}

fn unit3_strategy() -> impl Strategy<Value = Vector3<f64>> {
    ([-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]).prop_filter_map("norm too small", |[x, y, z]| {
        let v = Vector3::new(x, y, z);
        let n = v.norm();
        (n > 1e-2).then(|| v / n)
    })
}

fn spatial_strategy() -> impl Strategy<Value = Vector3<f64>> {
    ([-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0]).prop_map(|[x, y, z]| Vector3::new(x, y, z))
}

fn line_strategy() -> impl Strategy<Value = OrientedGeodesic> {
    (spatial_strategy(), unit3_strategy())
        .prop_map(|(u, v)| OrientedGeodesic::from_spatial(u, v).unwrap())
}

/// Unit tangent at the base point of M_κ built from a unit spatial vector,
/// which is tangent there for every curvature.
fn tangent_at_origin(kappa: Curvature, v: Vector3<f64>) -> TangentVector {
    let p = SpacePoint::origin(kappa);
    TangentVector::new(p, Vector4::new(0.0, v[0], v[1], v[2])).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn geodesics_stay_on_their_quadric(
        kappa in kappa_strategy(),
        v in unit3_strategy(),
        s in -3.0f64..3.0,
    ) {
        let dir = tangent_at_origin(kappa, v);
        let q = geodesic_point(&dir, s).unwrap();
        match kappa {
            Curvature::Euclidean => prop_assert_eq!(q.coords()[0], 1.0),
            _ => {
                let g = metric_inner(kappa, q.coords(), q.coords());
                prop_assert!((g - kappa.value()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn transport_is_an_isometry_of_tangent_spaces(
        kappa in kappa_strategy(),
        v in unit3_strategy(),
        a in spatial_strategy(),
        b in spatial_strategy(),
        s in -2.0f64..2.0,
    ) {
        let dir = tangent_at_origin(kappa, v);
        let p = SpacePoint::origin(kappa);
        let wa = TangentVector::new(p, Vector4::new(0.0, a[0], a[1], a[2])).unwrap();
        let wb = TangentVector::new(p, Vector4::new(0.0, b[0], b[1], b[2])).unwrap();
        let ta = parallel_transport(&dir, &wa, s).unwrap();
        let tb = parallel_transport(&dir, &wb, s).unwrap();
        prop_assert!((ta.inner(&tb) - wa.inner(&wb)).abs() < 1e-12 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn screw_flow_is_a_one_parameter_group(
        kappa in kappa_strategy(),
        alpha in -3.0f64..3.0,
        s in -2.0f64..2.0,
        t in -2.0f64..2.0,
    ) {
        let a = screw_exponential(kappa, alpha, s).unwrap();
        let b = screw_exponential(kappa, alpha, t).unwrap();
        let c = screw_exponential(kappa, alpha, s + t).unwrap();
        let gap = (a.compose(&b).unwrap().matrix() - c.matrix()).norm();
        prop_assert!(gap < 1e-12 * (1.0 + c.matrix().norm()));
    }

    #[test]
    fn cross_is_antisymmetric_and_bilinear(
        kappa in kappa_strategy(),
        a in spatial_strategy(),
        b in spatial_strategy(),
        c in spatial_strategy(),
        lam in -2.0f64..2.0,
    ) {
        let p = SpacePoint::origin(kappa);
        let ta = TangentVector::new(p, Vector4::new(0.0, a[0], a[1], a[2])).unwrap();
        let tb = TangentVector::new(p, Vector4::new(0.0, b[0], b[1], b[2])).unwrap();
        let tc = TangentVector::new(p, Vector4::new(0.0, c[0], c[1], c[2])).unwrap();

        let ab = cross(&ta, &tb).unwrap();
        let ba = cross(&tb, &ta).unwrap();
        prop_assert!((ab.vec() + ba.vec()).norm() < 1e-12 * (1.0 + ab.vec().norm()));

        // linearity in the first slot: (a + λc) × b = a×b + λ(c×b)
        let combo = TangentVector::new(
            p,
            Vector4::new(0.0, a[0] + lam * c[0], a[1] + lam * c[1], a[2] + lam * c[2]),
        )
        .unwrap();
        let lhs = cross(&combo, &tb).unwrap();
        let cb = cross(&tc, &tb).unwrap();
        let rhs = ab.vec() + cb.vec() * lam;
        prop_assert!((lhs.vec() - rhs).norm() < 1e-11 * (1.0 + rhs.norm()));
    }

    #[test]
    fn canonicalization_is_idempotent_and_keeps_the_orientation(
        line in line_strategy(),
        s in -4.0f64..4.0,
    ) {
        // re-canonicalize from a shifted representative
        let shifted = line.velocity_at(s).unwrap();
        let again = OrientedGeodesic::from_point_direction(shifted).unwrap();
        prop_assert!(line.equals(&again, 1e-9).unwrap());
        prop_assert!(again.spatial_dir().dot(&line.spatial_dir()) > 0.999);
    }

    #[test]
    fn acting_is_a_group_action_on_lines(
        line in line_strategy(),
        axis1 in unit3_strategy(),
        angle1 in -3.0f64..3.0,
        shift1 in spatial_strategy(),
        axis2 in unit3_strategy(),
        angle2 in -3.0f64..3.0,
        shift2 in spatial_strategy(),
    ) {
        let rot1 = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_unchecked(axis1), angle1).into_inner();
        let rot2 = nalgebra::Rotation3::from_axis_angle(
            &nalgebra::Unit::new_unchecked(axis2), angle2).into_inner();
        let g = helicoidal::Isometry::from_rotation_translation(rot1, shift1);
        let h = helicoidal::Isometry::from_rotation_translation(rot2, shift2);
        let composed = act_on_geodesic(&g.compose(&h).unwrap(), &line).unwrap();
        let stepwise = act_on_geodesic(&g, &act_on_geodesic(&h, &line).unwrap()).unwrap();
        prop_assert!(composed.equals(&stepwise, 1e-10).unwrap());
    }

    #[test]
    fn geodesic_json_round_trip_is_bit_exact(line in line_strategy()) {
        let text = serde_json::to_string(&line).unwrap();
        let back: OrientedGeodesic = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(line.base().coords(), back.base().coords());
        prop_assert_eq!(line.dir().vec(), back.dir().vec());
        prop_assert_eq!(text, serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn quaternion_norms_multiply_and_rotations_preserve_them(
        a in spatial_strategy(),
        b in spatial_strategy(),
        w1 in -2.0f64..2.0,
        w2 in -2.0f64..2.0,
        axis in unit3_strategy(),
        half in -3.0f64..3.0,
    ) {
        let qa = Quaternion::new(w1, a[0], a[1], a[2]);
        let qb = Quaternion::new(w2, b[0], b[1], b[2]);
        let prod = qa * qb;
        prop_assert!((prod.norm() - qa.norm() * qb.norm()).abs()
            < 1e-12 * (1.0 + qa.norm() * qb.norm()));

        let p = Quaternion::exp_imaginary(axis * half);
        let rotated = rot3(p, a);
        prop_assert!((rotated.norm() - a.norm()).abs() < 1e-12 * (1.0 + a.norm()));
        // conjugation by a unit quaternion keeps imaginary quaternions
        // imaginary up to rounding
        let full = p * Quaternion::from_imaginary(a) * p.conjugate();
        prop_assert!(full.w.abs() < 1e-12 * (1.0 + a.norm()));
        let four = rot4(p, p, qb);
        prop_assert!((four.norm() - qb.norm()).abs() < 1e-12 * (1.0 + qb.norm()));
    }

    #[test]
    fn fiber_frame_is_odd_under_a_half_turn_in_s(
        kappa in kappa_strategy(),
        alpha in -3.0f64..3.0,
        s in 0.0f64..6.3,
        t in -2.0f64..2.0,
    ) {
        let plain = fiber_frame(kappa, alpha, s, t);
        let shifted = fiber_frame(kappa, alpha, s + std::f64::consts::PI, t);
        let gap = (plain.value.matrix() + shifted.value.matrix()).norm();
        prop_assert!(gap < 1e-12 * (1.0 + plain.value.matrix().norm()));
    }
}
