use super::*;
use crate::contact::{
    fit_tangent_annulus, sphere_plane_fixture, two_sphere_fixture, FitOptions, FitTarget, SphereCfg,
};
use crate::delaunay::{profile_from_extremum, reparametrize_conformal, revolve};
use crate::surface::{FdPatch, GraphSamples, Orientation};

fn catenoid_a() -> f64 {
    1.0 / (libm::cosh(1.0) * libm::cosh(1.0))
}

fn catenoid() -> AnnulusFixture {
    let d = 2.0 * (catenoid_a() + libm::tanh(1.0));
    fit_tangent_annulus(
        0.0,
        FitTarget::TwoSpheres { distance: d },
        &FitOptions::default(),
    )
    .unwrap()
}

#[test]
fn classify_examples() {
    assert_eq!(
        classify_case(0.0, -1),
        CaseClass {
            tag: CaseTag::I,
            expected: Some(ExpectedSurface::Catenoid)
        }
    );
    assert_eq!(
        classify_case(-0.3, -1).expected,
        Some(ExpectedSurface::Unduloid)
    );
    assert_eq!(
        classify_case(0.4, -1).expected,
        Some(ExpectedSurface::Nodoid)
    );
    assert_eq!(
        classify_case(-0.75, 1),
        CaseClass {
            tag: CaseTag::Ii,
            expected: Some(ExpectedSurface::Unduloid)
        }
    );
    assert_eq!(
        classify_case(-2.0, 1),
        CaseClass {
            tag: CaseTag::Iii,
            expected: Some(ExpectedSurface::Nodoid)
        }
    );
    assert_eq!(classify_case(-1.0, 1).tag, CaseTag::Excluded);
    assert_eq!(classify_case(-0.5, 0).tag, CaseTag::Degenerate);
    assert_eq!(classify_case(-0.5, 1).tag, CaseTag::Boundary);
    assert_eq!(classify_case(0.2, 1).tag, CaseTag::Uncovered);
    assert_eq!(classify_case(-1.5, -1).tag, CaseTag::Uncovered);
    assert_eq!(classify_case_scaled(-0.375, 1, 2.0).tag, CaseTag::Ii);
}

#[test]
fn catenoid_suites_pass() {
    let fx = catenoid();
    let opts = SuiteOptions::default();
    let l1 = lemma1_suite(&fx, &opts).unwrap();
    assert!(l1.passed(), "{l1}");
    assert_eq!(l1.case.unwrap().tag, CaseTag::I);
    let l2 = lemma2_suite(&fx, &opts).unwrap();
    assert!(l2.passed(), "{l2}");
    assert_eq!(l2.recompute(), l2.verdict);
}

#[test]
fn case_suites_pass() {
    let opts = SuiteOptions::default();
    for (h, r0, tag) in [
        (-0.3, 0.5, CaseTag::I),
        (0.5, 0.4, CaseTag::I),
        (-0.75, 1.2, CaseTag::Ii),
        (-2.0, 0.7, CaseTag::Iii),
    ] {
        let fx = two_sphere_fixture(h, r0).unwrap();
        let rep = theorem_report(&fx, &opts).unwrap();
        assert_eq!(rep.case.unwrap().tag, tag);
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn case_iii_variant_bound_is_informational() {
    let fx = two_sphere_fixture(-2.0, 0.7).unwrap();
    let rep = lemma2_suite(&fx, &SuiteOptions::default()).unwrap();
    let variant = rep
        .checks
        .iter()
        .find(|c| c.name.contains("variant"))
        .unwrap();
    assert!(variant.informational && !variant.pass);
    assert!(rep.passed());
}

#[test]
fn perturbed_sphere_fails_tangency() {
    let mut fx = catenoid();
    if let Configuration::TwoSpheres { spheres } = &mut fx.config {
        spheres[1] = SphereCfg {
            center: spheres[1].center,
            radius: 1.0 + 1e-3,
        };
    }
    let rep = lemma1_suite(&fx, &SuiteOptions::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::Failed);
    let t = rep
        .checks
        .iter()
        .find(|c| c.name == "tangency position (upper)")
        .unwrap();
    assert!(!t.pass && (t.value - 1e-3).abs() < 1e-8, "{}", t.value);
}

#[test]
fn cylinder_is_degenerate() {
    let prof = profile_from_extremum(-0.5, 1.0, -1.0, 1.0).unwrap();
    let patch = reparametrize_conformal(&revolve(prof))
        .unwrap()
        .with_range(-0.5, 0.5);
    let fx = catenoid().with_patch(patch);
    let fx = AnnulusFixture {
        h: -0.5,
        c: 1.0,
        ..fx
    };
    let rep = lemma1_suite(&fx, &SuiteOptions::default()).unwrap();
    assert_eq!(rep.verdict, Verdict::Degenerate);
    assert_eq!(rep.case.unwrap().tag, CaseTag::Degenerate);
}

#[test]
fn non_cmc_patch_fails_hopf_first() {
    let fx = catenoid();
    let base = fx.patch.clone();
    let (lo, hi) = (base.u_min, base.u_max);
    let stretched = FdPatch::new(
        move |u: f64, v: f64| {
            let p = base.position(u, v);
            Vec3::new(p.x, p.y, 1.05 * p.z)
        },
        lo,
        hi,
        Orientation::Flipped,
    );
    let fx = fx.with_patch(FdPatch {
        conformal: true,
        ..stretched
    });
    let rep = lemma1_suite(
        &fx,
        &SuiteOptions {
            grid: Grid::new(16, 16),
            ..SuiteOptions::default()
        },
    )
    .unwrap();
    assert_eq!(rep.verdict, Verdict::Failed);
    let first = rep.failures().next().unwrap();
    assert!(first.name.starts_with("Hopf"), "{rep}");
}

#[test]
fn sphere_plane_suite_passes() {
    let fx = sphere_plane_fixture(0.0, catenoid_a(), 2.0).unwrap();
    let rep = lemma1_suite(&fx, &SuiteOptions::default()).unwrap();
    assert!(rep.passed(), "{rep}");
    assert!(rep
        .checks
        .iter()
        .any(|c| c.name == "lambda_u on plane boundary"));
}

#[test]
fn pde_trivial_and_negative_controls() {
    let flat = GraphSamples::from_fn(|_, _| 0.0, 0.01, 4);
    assert_eq!(pde_residual(&flat, 0.0).unwrap().max, 0.0);
    assert!(matches!(
        pde_residual(&GraphSamples::from_fn(|_, _| 0.0, 0.1, 1), 0.0),
        Err(Error::Config(_))
    ));
    // Unit sphere seen from inside, curving toward +z: offset-type graph with H~ = 1.
    let cap = GraphSamples::from_fn(|x, y| 1.0 - libm::sqrt(1.0 - x * x - y * y), 0.005, 8);
    // A unit sphere has K~ = 1 and H~ = 1, which satisfies the relation for every H.
    assert!(pde_residual(&cap, 0.3).unwrap().max < 1e-4);
    // Radius 2 (H~ = 1/2, K~ = 1/4) satisfies the relation only for H = 1.
    let big = GraphSamples::from_fn(|x, y| 2.0 - libm::sqrt(4.0 - x * x - y * y), 0.005, 8);
    let good = pde_residual(&big, 1.0).unwrap().max;
    let bad = pde_residual(&big, 0.0).unwrap().max;
    assert!(good < 1e-4 && bad > 1e-2, "{good} {bad}");
}

#[test]
fn saddle_is_not_certified() {
    let saddle = GraphSamples::from_fn(|x, y| 0.5 * (x * x - y * y), 0.01, 6);
    let e = ellipticity_check(&saddle, 0.0);
    assert_eq!(e.certified_by, Certification::NotCertified);
    assert!(!e.is_elliptic);
}

#[test]
fn graph_suite_certifies_each_case() {
    let opts = SuiteOptions::default();
    for (h, r0) in [(0.0, catenoid_a()), (-0.75, 1.2), (-2.0, 0.7)] {
        let fx = two_sphere_fixture(h, r0).unwrap();
        let rep = graph_suite(&fx, &opts).unwrap();
        assert!(rep.passed(), "H = {h}: {rep}");
    }
}

#[test]
fn perturbed_h_breaks_pde() {
    let fx = catenoid();
    let off = offset(&fx.patch, 1.0);
    let (a, b) = fx.patch.u_range();
    let g = local_graph(&off, 0.5 * (a + b), 1.0, 0.02, 8, GraphSide::Normal).unwrap();
    let ok = pde_residual(&g, 0.0).unwrap().max;
    let bad = pde_residual(&g, 1e-2).unwrap().max;
    assert!(ok < PDE_TOL && bad > 10.0 * PDE_TOL, "{ok} {bad}");
}

proptest::proptest! {
    #[test]
    fn case_classification_scales_with_the_radius(
        h in -3.0..1.0f64,
        rho in 0.2..5.0f64,
        sign in proptest::prop_oneof![proptest::strategy::Just(-1i8), proptest::strategy::Just(0), proptest::strategy::Just(1)],
    ) {
        proptest::prop_assert_eq!(classify_case_scaled(h / rho, sign, rho).tag, classify_case(h, sign).tag);
    }
}
