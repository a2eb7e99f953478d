use super::*;
use crate::delaunay::profile_from_extremum;
use crate::delaunay::{reparametrize_conformal, revolve};
use crate::surface::Catenoid;

fn catenoid_a() -> f64 {
    1.0 / (libm::cosh(1.0) * libm::cosh(1.0))
}

fn catenoid_fixture() -> AnnulusFixture {
    let a = catenoid_a();
    let d = 2.0 * (a + libm::tanh(1.0));
    fit_tangent_annulus(
        0.0,
        FitTarget::TwoSpheres { distance: d },
        &FitOptions::default(),
    )
    .unwrap()
}

#[test]
fn catenoid_fit_recovers_neck_radius() {
    let fx = catenoid_fixture();
    assert!((fx.r0 - catenoid_a()).abs() < 1e-9, "r0 = {}", fx.r0);
    assert!((fx.c - 2.0 * catenoid_a()).abs() < 1e-9);
    assert!(
        (fx.patch.u_max - 1.0).abs() < 1e-8,
        "u0 = {}",
        fx.patch.u_max
    );
    assert!((fx.patch.u_min + 1.0).abs() < 1e-8);
    assert_eq!(fx.k_sign, CurvatureSign::Negative);
    assert!(!fx.trace.is_empty());
}

#[test]
fn catenoid_fit_has_a_second_root() {
    let a = catenoid_a();
    let d = 2.0 * (a + libm::tanh(1.0));
    let opts = FitOptions {
        choice: RootChoice::SmallestR0,
        ..FitOptions::default()
    };
    let fx = fit_tangent_annulus(0.0, FitTarget::TwoSpheres { distance: d }, &opts).unwrap();
    assert!(fx.r0 < 0.3 && fx.r0 > 0.1, "r0 = {}", fx.r0);
    let z0 = fx.sphere(Boundary::Upper).unwrap().center.z;
    assert!((2.0 * z0 - d).abs() < 1e-9);
}

#[test]
fn catenoid_boundary_matches_closed_form() {
    let fx = catenoid_fixture();
    let a = catenoid_a();
    let closed = Catenoid::new(a, -1.0, 1.0);
    for v in [0.0, 0.7, 2.0] {
        let p = fx.patch.position(1.0, v);
        assert!(p.dist(closed.position(1.0, v)) < 1e-9);
    }
}

#[test]
fn tangency_and_boundary_speed_on_catenoid() {
    let fx = catenoid_fixture();
    for (b, sphere) in fx.sphere_boundaries() {
        let t = tangency_residual(&fx.patch, fx.boundary_u(b), &sphere, 128).unwrap();
        assert!(t.position < 1e-9 && t.normal < 1e-9, "{b:?}: {t:?}");
        let s = boundary_speed_check(&fx, b, 128).unwrap();
        assert!((s.predicted - libm::sqrt(catenoid_a())).abs() < 1e-9);
        assert!(
            s.speed_deviation < 1e-8 && s.kappa2_deviation < 1e-8,
            "{s:?}"
        );
    }
}

#[test]
fn excluded_sphere_case_is_rejected() {
    let t = FitTarget::TwoSpheres { distance: 1.0 };
    assert!(matches!(
        fit_tangent_annulus(-1.0, t, &FitOptions::default()),
        Err(Error::ExcludedCase(_))
    ));
    let opts = FitOptions {
        radius: 2.0,
        ..FitOptions::default()
    };
    assert!(matches!(
        fit_tangent_annulus(-0.5, t, &opts),
        Err(Error::ExcludedCase(_))
    ));
    assert!(matches!(
        find_tangency(-1.0, 0.5),
        Err(Error::ExcludedCase(_))
    ));
}

#[test]
fn cylinder_is_flagged_degenerate() {
    // Radius-1 cylinder around the axis, H = -1/2; it touches every centered unit sphere.
    let prof = profile_from_extremum(-0.5, 1.0, -1.0, 1.0).unwrap();
    let patch = reparametrize_conformal(&revolve(prof))
        .unwrap()
        .with_range(-0.5, 0.5);
    let s = SphereCfg {
        center: Vec3::new(0.0, 0.0, 0.5),
        radius: 1.0,
    };
    let config = Configuration::TwoSpheres {
        spheres: [
            SphereCfg {
                center: -s.center,
                radius: 1.0,
            },
            s,
        ],
    };
    let fx = AnnulusFixture::new(-0.5, 1.0, patch, config, CurvatureSign::Positive);
    assert!(matches!(
        boundary_speed_check(&fx, Boundary::Upper, 32),
        Err(Error::NotApplicable(_))
    ));
    let lb = interior_lambda_bound(&fx, Grid::new(16, 8)).unwrap();
    assert_eq!(lb.k_sign, None);
    assert!(lb.margin.abs() < 1e-10);
}

#[test]
fn interior_lambda_bound_by_case() {
    let cases = [
        (0.0, catenoid_a(), CurvatureSign::Negative),
        (-0.3, 0.5, CurvatureSign::Negative),
        (0.5, 0.4, CurvatureSign::Negative),
        (-0.75, 1.2, CurvatureSign::Positive),
        (-2.0, 0.7, CurvatureSign::Positive),
    ];
    for (h, r0, sign) in cases {
        let fx = two_sphere_fixture(h, r0).unwrap();
        assert_eq!(fx.k_sign, sign);
        let lb = interior_lambda_bound(&fx, Grid::new(64, 8)).unwrap();
        assert_eq!(lb.k_sign, Some(sign));
        assert!(lb.margin > 0.0, "H = {h}: {lb:?}");
        for (b, sphere) in fx.sphere_boundaries() {
            let t = tangency_residual(&fx.patch, fx.boundary_u(b), &sphere, 64).unwrap();
            assert!(t.position < 1e-9 && t.normal < 1e-9, "H = {h}: {t:?}");
            let s = boundary_speed_check(&fx, b, 64).unwrap();
            assert!(
                s.speed_deviation < 1e-8 && s.kappa2_deviation < 1e-8,
                "H = {h}: {s:?}"
            );
        }
    }
}

#[test]
fn conormal_curves_are_convex_and_match_formula() {
    for (h, r0) in [(0.0, catenoid_a()), (-0.75, 1.2), (-2.0, 0.7)] {
        let fx = two_sphere_fixture(h, r0).unwrap();
        for b in [Boundary::Lower, Boundary::Upper] {
            let u = fx.boundary_u(b);
            let nu = conormal_curve(&fx.patch, u, 256);
            let conv = spherical_convexity(&nu, Vec3::ZERO, 1.0).unwrap();
            assert!(conv.convex, "H = {h} {b:?}: [{}, {}]", conv.min, conv.max);
            let rep = conormal_curvature_check(&fx.patch, u, 256).unwrap();
            assert!(
                rep.max_deviation < 1e-3 * rep.max_predicted.max(1.0),
                "H = {h} {b:?}: {rep:?}"
            );
        }
    }
}

#[test]
fn catenoid_conormal_curvature_is_tan_phi() {
    let fx = catenoid_fixture();
    let rep = conormal_curvature_check(&fx.patch, 1.0, 512).unwrap();
    // cot φ = sinh u on the catenoid.
    assert!(
        (rep.max_predicted - 1.0 / libm::sinh(1.0)).abs() < 1e-8,
        "{rep:?}"
    );
}

#[test]
fn convexity_detects_a_wiggle() {
    let pts: Vec<Vec3> = (0..200)
        .map(|k| {
            let t = core::f64::consts::TAU * k as f64 / 200.0;
            let lat = 0.3 + 0.25 * libm::sin(5.0 * t);
            Vec3::new(
                libm::cos(lat) * libm::cos(t),
                libm::cos(lat) * libm::sin(t),
                libm::sin(lat),
            )
        })
        .collect();
    assert!(!spherical_convexity(&pts, Vec3::ZERO, 1.0).unwrap().convex);
    let off: Vec<Vec3> = pts.iter().map(|p| *p * 1.1).collect();
    assert!(matches!(
        spherical_convexity(&off, Vec3::ZERO, 1.0),
        Err(Error::Input(_))
    ));
}

#[test]
fn catenoid_plane_contact_angle() {
    let a = catenoid_a();
    let u1 = 0.4;
    let alpha = catenoid_cut_angle(u1);
    let fx = sphere_plane_fixture(0.0, a, alpha).unwrap();
    assert!(
        (fx.patch.u_min - u1).abs() < 1e-8,
        "u1 = {}",
        fx.patch.u_min
    );
    let rep = plane_boundary_check(&fx, 256).unwrap();
    assert!(rep.planarity < 1e-12, "{rep:?}");
    assert!(rep.contact_angle_deviation < 1e-6, "{rep:?}");
    assert!(rep.curvature_deviation < 1e-6, "{rep:?}");
    assert!(rep.convex);
    assert!(rep.min_lambda_u > 0.0);
    let sphere = fx.sphere(Boundary::Upper).unwrap();
    let t = tangency_residual(&fx.patch, fx.patch.u_max, &sphere, 64).unwrap();
    assert!(t.position < 1e-9);
}

#[test]
fn sphere_plane_fit_by_distance() {
    let alpha = 2.0;
    let target = FitTarget::SpherePlane {
        distance: 0.9,
        alpha,
    };
    let fx = fit_tangent_annulus(0.0, target, &FitOptions::default()).unwrap();
    let Configuration::SpherePlane { sphere, plane } = fx.config else {
        panic!()
    };
    assert!((sphere.center.z - plane.offset - 0.9).abs() < 1e-9);
    let rep = plane_boundary_check(&fx, 128).unwrap();
    assert!(rep.contact_angle_deviation < 1e-6, "{rep:?}");
}

#[test]
fn fit_rescales_radius() {
    let a = catenoid_a();
    let d = 2.0 * (a + libm::tanh(1.0));
    let opts = FitOptions {
        radius: 3.0,
        ..FitOptions::default()
    };
    let fx = fit_tangent_annulus(0.0, FitTarget::TwoSpheres { distance: 3.0 * d }, &opts).unwrap();
    assert!((fx.r0 - a).abs() < 1e-9);
    assert_eq!(fx.radius, 3.0);
    let rebuilt = fx.descriptor().build().unwrap();
    assert_eq!(rebuilt.patch, fx.patch);
}

#[test]
fn infeasible_distance_is_reported() {
    let t = FitTarget::TwoSpheres { distance: 10.0 };
    assert!(matches!(
        fit_tangent_annulus(0.0, t, &FitOptions::default()),
        Err(Error::Infeasible(_))
    ));
}

#[test]
fn ball_containment_verdicts() {
    let fx = catenoid_fixture();
    for rep in ball_containment(&fx, Grid::new(32, 16)).unwrap() {
        assert_eq!(rep.verdict, Containment::Outside, "{rep:?}");
    }
    let fx = two_sphere_fixture(-2.0, 0.7).unwrap();
    for rep in ball_containment(&fx, Grid::new(32, 16)).unwrap() {
        assert_eq!(rep.verdict, Containment::Inside, "{rep:?}");
    }
}

#[test]
fn catenoid_is_embedded() {
    let fx = catenoid_fixture();
    assert_eq!(
        self_intersection_check(&fx.patch, Grid::new(48, 64)).unwrap(),
        None
    );
}

#[test]
fn full_nodoid_self_intersects() {
    // Several periods of a nodoid meridian loop over themselves.
    let prof = profile_from_extremum(1.0, 0.5, -6.0, 6.0).unwrap();
    let patch = reparametrize_conformal(&revolve(prof)).unwrap();
    let w = self_intersection_check(&patch, Grid::new(400, 48)).unwrap();
    let w = w.unwrap();
    // The witness point lies on both triangles' planes.
    for tri in [w.first, w.second] {
        let n = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
        assert!(n.dot(w.point - tri[0]).abs() < 1e-9);
    }
}

#[test]
fn unduloid_over_several_periods_is_embedded() {
    let prof = profile_from_extremum(-0.75, 1.2, -8.0, 8.0).unwrap();
    let patch = reparametrize_conformal(&revolve(prof)).unwrap();
    assert_eq!(
        self_intersection_check(&patch, Grid::new(300, 48)).unwrap(),
        None
    );
}

#[test]
fn sphere_against_itself_and_unit_catenoid_waist() {
    let s = crate::surface::ConformalSphere::unit(-1.0, 1.0);
    let unit = SphereCfg {
        center: Vec3::ZERO,
        radius: 1.0,
    };
    let t = tangency_residual(&s, 0.5, &unit, 64).unwrap();
    assert!(t.position < 1e-15 && t.normal < 1e-15, "{t:?}");
    let cat = Catenoid::new(1.0, -1.0, 1.0);
    let t = tangency_residual(&cat, 0.0, &unit, 64).unwrap();
    assert!(t.position < 1e-10 && t.normal < 1e-10, "{t:?}");
}

#[test]
fn hemisphere_and_waist_meet_planes_orthogonally() {
    let hemi = crate::surface::ConformalSphere::unit(0.0, 3.0);
    let rep = contact_angle(&hemi, 0.0, &Plane::new(Vec3::Z, 0.0), 64).unwrap();
    assert!(
        (rep.mean - FRAC_PI_2).abs() < 1e-12 && rep.spread < 1e-12,
        "{rep:?}"
    );
    let cat = Catenoid::new(1.0, 0.0, 1.0);
    let rep = contact_angle(&cat, 0.0, &Plane::new(Vec3::Z, 0.0), 64).unwrap();
    assert!((rep.mean - FRAC_PI_2).abs() < 1e-12);
    let cut = Catenoid::new(1.0, 0.3, 1.0);
    let rep = contact_angle(&cut, 0.3, &Plane::new(Vec3::Z, 0.3), 64).unwrap();
    assert!(
        (rep.mean - catenoid_cut_angle(0.3)).abs() < 1e-12 && rep.spread < 1e-8,
        "{rep:?}"
    );
    assert!(matches!(
        contact_angle(&cut, 0.3, &Plane::new(Vec3::X, 0.0), 64),
        Err(Error::Input(_))
    ));
}

#[test]
fn boundary_curves_are_convex_spherical_curves() {
    let fx = catenoid_fixture();
    for (b, sphere) in fx.sphere_boundaries() {
        let pts: Vec<Vec3> = (0..256)
            .map(|j| {
                fx.patch
                    .position(fx.boundary_u(b), core::f64::consts::TAU * j as f64 / 256.0)
            })
            .collect();
        assert!(
            spherical_convexity(&pts, sphere.center, 1.0)
                .unwrap()
                .convex
        );
    }
}

#[test]
fn offset_collapses_boundaries_to_centers_and_is_embedded() {
    for (h, r0) in [(0.0, catenoid_a()), (-0.75, 1.2), (-2.0, 0.7)] {
        let fx = two_sphere_fixture(h, r0).unwrap();
        let off = crate::parallel::offset(&fx.patch, 1.0);
        for (b, sphere) in fx.sphere_boundaries() {
            for v in [0.0, 1.0, 4.0] {
                let d = off.position(fx.boundary_u(b), v).dist(sphere.center);
                assert!(d < 1e-7, "H = {h}: {d}");
            }
        }
        assert_eq!(
            self_intersection_check(&off, Grid::new(64, 48)).unwrap(),
            None,
            "H = {h}"
        );
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]

    #[test]
    fn built_fixtures_are_tangent(h in -0.6..0.6f64, r0 in 0.25..0.6f64) {
        let Ok(fx) = two_sphere_fixture(h, r0) else { return Ok(()) };
        for (b, sphere) in fx.sphere_boundaries() {
            let t = tangency_residual(&fx.patch, fx.boundary_u(b), &sphere, 64).unwrap();
            proptest::prop_assert!(t.position < 1e-8 && t.normal < 1e-8, "{:?}", t);
        }
    }
}
