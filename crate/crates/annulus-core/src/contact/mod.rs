//! Annuli meeting spheres tangentially (and planes at a contact angle):
//! configurations, fitted fixtures, and the boundary checks that hold on
//! them.
//!
//! Fixtures are built at unit sphere radius with the symmetry axis along
//! `z`; [`AnnulusFixture::radius`] records the scale to apply on export.
//! The lower boundary row is `u_min` and the upper one `u_max`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::delaunay::ConformalRevolved;
use crate::surface::{curvature, fundamental_forms, Grid, Patch};
use crate::{Error, Plane, Result, Vec3};

mod fit;
mod intersect;

pub use fit::{
    find_cut, find_tangency, fit_tangent_annulus, sphere_plane_fixture, two_sphere_fixture,
    CurvatureSign, FitOptions, FitTarget, RootChoice, SolverStep, Tangency,
};
pub use intersect::{self_intersection_check, IntersectionWitness};

/// Tolerance on geodesic-curvature sign changes in [`spherical_convexity`].
pub const EPS_CONV: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SphereCfg {
    pub center: Vec3,
    pub radius: f64,
}

/// Plane `{x : unit_normal . x = offset}` met at `contact_angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlaneCfg {
    pub unit_normal: Vec3,
    pub offset: f64,
    pub contact_angle: f64,
}

impl PlaneCfg {
    pub fn plane(&self) -> Plane {
        Plane::new(self.unit_normal, self.offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Configuration {
    TwoSpheres { spheres: [SphereCfg; 2] },
    SpherePlane { sphere: SphereCfg, plane: PlaneCfg },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Boundary {
    Lower,
    Upper,
}

/// A fitted annulus with the configuration it meets.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusFixture<P = ConformalRevolved> {
    pub h: f64,
    /// Radius of the vertical-tangent circle the meridian is built from.
    pub r0: f64,
    /// Hopf constant `c = h11 - h22`.
    pub c: f64,
    pub k_sign: CurvatureSign,
    /// Physical sphere radius; the fixture itself is at unit scale.
    pub radius: f64,
    pub patch: P,
    pub config: Configuration,
    pub trace: Vec<SolverStep>,
}

/// Enough to rebuild a fixture exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FixtureDescriptor {
    pub h: f64,
    pub r0: f64,
    /// `None` for two spheres, the contact angle for sphere + plane.
    pub alpha: Option<f64>,
    pub radius: f64,
}

impl FixtureDescriptor {
    pub fn build(&self) -> Result<AnnulusFixture> {
        let mut fx = match self.alpha {
            None => two_sphere_fixture(self.h, self.r0)?,
            Some(a) => sphere_plane_fixture(self.h, self.r0, a)?,
        };
        fx.radius = self.radius;
        Ok(fx)
    }
}

impl AnnulusFixture {
    pub(crate) fn new(
        h: f64,
        r0: f64,
        patch: ConformalRevolved,
        config: Configuration,
        k_sign: CurvatureSign,
    ) -> Self {
        let c = 2.0 * (r0 + h * r0 * r0);
        Self {
            h,
            r0,
            c,
            k_sign,
            radius: 1.0,
            patch,
            config,
            trace: Vec::new(),
        }
    }

    pub fn descriptor(&self) -> FixtureDescriptor {
        let alpha = match self.config {
            Configuration::TwoSpheres { .. } => None,
            Configuration::SpherePlane { plane, .. } => Some(plane.contact_angle),
        };
        FixtureDescriptor {
            h: self.h,
            r0: self.r0,
            alpha,
            radius: self.radius,
        }
    }
}

impl<P: Patch> AnnulusFixture<P> {
    /// The same fixture data over a different patch (fault injection,
    /// offsets).
    pub fn with_patch<Q: Patch>(&self, patch: Q) -> AnnulusFixture<Q> {
        AnnulusFixture {
            h: self.h,
            r0: self.r0,
            c: self.c,
            k_sign: self.k_sign,
            radius: self.radius,
            patch,
            config: self.config,
            trace: self.trace.clone(),
        }
    }

    pub fn boundary_u(&self, b: Boundary) -> f64 {
        match b {
            Boundary::Lower => self.patch.u_range().0,
            Boundary::Upper => self.patch.u_range().1,
        }
    }

    /// The sphere a boundary touches, if it is a sphere boundary.
    pub fn sphere(&self, b: Boundary) -> Option<SphereCfg> {
        match (self.config, b) {
            (Configuration::TwoSpheres { spheres }, Boundary::Lower) => Some(spheres[0]),
            (Configuration::TwoSpheres { spheres }, Boundary::Upper) => Some(spheres[1]),
            (Configuration::SpherePlane { sphere, .. }, Boundary::Upper) => Some(sphere),
            (Configuration::SpherePlane { .. }, Boundary::Lower) => None,
        }
    }

    pub fn sphere_boundaries(&self) -> Vec<(Boundary, SphereCfg)> {
        [Boundary::Lower, Boundary::Upper]
            .into_iter()
            .filter_map(|b| self.sphere(b).map(|s| (b, s)))
            .collect()
    }

    /// Conformal factor on the sphere boundaries predicted by the Hopf
    /// constant: `λ² = c / (2 (1 + H))`.
    pub fn predicted_boundary_speed(&self) -> Result<f64> {
        if libm::fabs(1.0 + self.h) < 1e-12 {
            return Err(Error::ExcludedCase("H = -1".into()));
        }
        let q = self.c / (2.0 * (1.0 + self.h));
        if !(q > 0.0) {
            return Err(Error::Infeasible(alloc::format!(
                "c / (2 (1 + H)) = {q} is not positive"
            )));
        }
        Ok(libm::sqrt(q))
    }
}

fn v_samples<P: Patch + ?Sized>(patch: &P, n: usize) -> Vec<f64> {
    let (v0, v1) = patch.v_range();
    (0..n)
        .map(|j| v0 + (v1 - v0) * j as f64 / n as f64)
        .collect()
}

/// Worst deviation of a boundary row from tangency with a sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TangencyResidual {
    /// `max | |X - C| - ρ |`.
    pub position: f64,
    /// `max |N - (X - C) / ρ|`.
    pub normal: f64,
}

/// Tangency residual of row `u` against `sphere`, over `nv` samples.
pub fn tangency_residual<P: Patch + ?Sized>(
    patch: &P,
    u: f64,
    sphere: &SphereCfg,
    nv: usize,
) -> Result<TangencyResidual> {
    if nv < 8 {
        return Err(Error::Config(
            "tangency check needs at least 8 samples".into(),
        ));
    }
    let mut out = TangencyResidual {
        position: 0.0,
        normal: 0.0,
    };
    for v in v_samples(patch, nv) {
        let x = patch.position(u, v);
        let n = patch.normal(u, v);
        let d = x - sphere.center;
        out.position = out.position.max(libm::fabs(d.norm() - sphere.radius));
        out.normal = out.normal.max((n - d / sphere.radius).norm());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundarySpeedReport {
    pub predicted: f64,
    /// `max |λ - predicted|` along the row.
    pub speed_deviation: f64,
    /// `max |κ2 + 1|` along the row.
    pub kappa2_deviation: f64,
}

/// On a sphere boundary the conformal factor is constant and the parallel
/// curvature equals that of the unit sphere.
pub fn boundary_speed_check<P: Patch>(
    fx: &AnnulusFixture<P>,
    b: Boundary,
    nv: usize,
) -> Result<BoundarySpeedReport> {
    if fx.sphere(b).is_none() {
        return Err(Error::NotApplicable("boundary lies on a plane".into()));
    }
    check_not_flat(fx)?;
    let predicted = fx.predicted_boundary_speed()?;
    let u = fx.boundary_u(b);
    let mut out = BoundarySpeedReport {
        predicted,
        speed_deviation: 0.0,
        kappa2_deviation: 0.0,
    };
    for v in v_samples(&fx.patch, nv) {
        let forms = fundamental_forms(&fx.patch, u, v)?;
        let cs = curvature(&forms);
        out.speed_deviation = out
            .speed_deviation
            .max(libm::fabs(libm::sqrt(forms.e) - predicted));
        out.kappa2_deviation = out.kappa2_deviation.max(libm::fabs(cs.kappa2 + 1.0));
    }
    Ok(out)
}

fn check_not_flat<P: Patch>(fx: &AnnulusFixture<P>) -> Result<()> {
    let (lo, hi) = fx.patch.u_range();
    let flat = (0..=8).all(|i| {
        let u = lo + (hi - lo) * i as f64 / 8.0;
        curvature_at_row(fx, u)
            .map(|k| libm::fabs(k) < 1e-10)
            .unwrap_or(false)
    });
    if flat {
        return Err(Error::NotApplicable("K vanishes identically".into()));
    }
    Ok(())
}

fn curvature_at_row<P: Patch>(fx: &AnnulusFixture<P>, u: f64) -> Result<f64> {
    Ok(curvature(&fundamental_forms(&fx.patch, u, 0.0)?).k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LambdaBoundReport {
    /// `c / (2 (1 + H))`.
    pub bound: f64,
    /// Positive when the interior satisfies the strict inequality: for
    /// `K < 0` this is `bound - max λ²`, for `K > 0` it is `min λ² - bound`.
    /// When `K` vanishes identically it is `-max |λ² - bound|`.
    pub margin: f64,
    pub k_sign: Option<CurvatureSign>,
}

/// Interior comparison of `λ²` with its boundary value, over the interior
/// rows of `grid`.
pub fn interior_lambda_bound<P: Patch>(
    fx: &AnnulusFixture<P>,
    grid: Grid,
) -> Result<LambdaBoundReport> {
    if libm::fabs(1.0 + fx.h) < 1e-12 {
        return Err(Error::ExcludedCase("H = -1".into()));
    }
    if grid.nu < 3 {
        return Err(Error::Config("need at least one interior row".into()));
    }
    let bound = fx.c / (2.0 * (1.0 + fx.h));
    let us = grid.u_values(&fx.patch);
    let interior = &us[1..us.len() - 1];
    let mut lam_min = f64::INFINITY;
    let mut lam_max = f64::NEG_INFINITY;
    let (mut pos, mut neg) = (false, false);
    for &u in interior {
        for v in v_samples(&fx.patch, grid.nv.min(8)) {
            let forms = fundamental_forms(&fx.patch, u, v)?;
            let k = curvature(&forms).k;
            pos |= k > 1e-12;
            neg |= k < -1e-12;
            lam_min = lam_min.min(forms.e);
            lam_max = lam_max.max(forms.e);
        }
    }
    let (margin, k_sign) = match (pos, neg) {
        (true, true) => {
            return Err(Error::NotApplicable(
                "K changes sign in the interior".into(),
            ))
        }
        (false, true) => (bound - lam_max, Some(CurvatureSign::Negative)),
        (true, false) => (lam_min - bound, Some(CurvatureSign::Positive)),
        (false, false) => (-(lam_max - bound).max(bound - lam_min).max(0.0), None),
    };
    Ok(LambdaBoundReport {
        bound,
        margin,
        k_sign,
    })
}

/// Boundary conormal `ν = X_u / |X_u|` sampled along row `u`.
pub fn conormal_curve<P: Patch + ?Sized>(patch: &P, u: f64, nv: usize) -> Vec<Vec3> {
    v_samples(patch, nv)
        .into_iter()
        .map(|v| patch.jet(u, v).du.normalized())
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvexityReport {
    pub geodesic_curvature: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub convex: bool,
}

/// Geodesic curvature of a closed, uniformly sampled curve on the sphere
/// `|x - center| = radius`, and whether it keeps one sign (up to
/// [`EPS_CONV`]).
pub fn spherical_convexity(points: &[Vec3], center: Vec3, radius: f64) -> Result<ConvexityReport> {
    let n = points.len();
    if n < 5 {
        return Err(Error::Config("need at least 5 curve samples".into()));
    }
    if let Some(p) = points
        .iter()
        .find(|p| libm::fabs((**p - center).norm() - radius) > 1e-6 * radius)
    {
        return Err(Error::Input(alloc::format!(
            "sample at distance {} from the center, sphere radius {radius}",
            (*p - center).norm()
        )));
    }
    let q: Vec<Vec3> = points.iter().map(|p| (*p - center) / radius).collect();
    let kg: Vec<f64> = (0..n)
        .map(|k| {
            let (a, b, c) = (q[(k + n - 1) % n], q[k], q[(k + 1) % n]);
            let d1 = (c - a) * 0.5;
            let d2 = c - b * 2.0 + a;
            b.cross(d1).dot(d2) / libm::pow(d1.norm(), 3.0)
        })
        .collect();
    let min = kg.iter().copied().fold(f64::INFINITY, f64::min);
    let max = kg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let convex = min >= -EPS_CONV || max <= EPS_CONV;
    Ok(ConvexityReport {
        geodesic_curvature: kg,
        min,
        max,
        convex,
    })
}

/// Fourth-order central differences (per unit sample step) of a closed,
/// uniformly sampled curve. Needs at least 5 samples.
fn periodic_derivatives(points: &[Vec3]) -> Vec<(Vec3, Vec3)> {
    let n = points.len();
    (0..n)
        .map(|k| {
            let at = |o: isize| points[(k as isize + o).rem_euclid(n as isize) as usize];
            let d1 = (at(-2) - at(2) + (at(1) - at(-1)) * 8.0) / 12.0;
            let d2 = ((at(1) + at(-1)) * 16.0 - at(0) * 30.0 - at(2) - at(-2)) / 12.0;
            (d1, d2)
        })
        .collect()
}

/// Discrete curvature vectors of a closed, uniformly sampled space curve.
fn curvature_vectors(points: &[Vec3]) -> Vec<Vec3> {
    periodic_derivatives(points)
        .into_iter()
        .map(|(d1, d2)| {
            let t = d1.normalized();
            (d2 - t * d2.dot(t)) / d1.norm_sq()
        })
        .collect()
}

/// Signed curvature of a closed plane curve, positive when it turns
/// counterclockwise about `normal`, with a convexity verdict.
pub fn planar_convexity(points: &[Vec3], normal: Vec3) -> Result<ConvexityReport> {
    if points.len() < 5 {
        return Err(Error::Config("need at least 5 curve samples".into()));
    }
    let k: Vec<f64> = periodic_derivatives(points)
        .into_iter()
        .map(|(d1, d2)| d1.cross(d2).dot(normal) / libm::pow(d1.norm(), 3.0))
        .collect();
    let min = k.iter().copied().fold(f64::INFINITY, f64::min);
    let max = k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let convex = min >= -EPS_CONV || max <= EPS_CONV;
    Ok(ConvexityReport {
        geodesic_curvature: k,
        min,
        max,
        convex,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConormalCurvatureReport {
    /// `max |κ_ν . N - h22 / λ_u|` over the row.
    pub max_deviation: f64,
    /// `max |h22 / λ_u|`, for scale.
    pub max_predicted: f64,
}

/// Normal component of the curvature vector of the conormal curve,
/// compared with `h22 / λ_u` (`λ = |X_v|`).
pub fn conormal_curvature_check<P: Patch + ?Sized>(
    patch: &P,
    u: f64,
    nv: usize,
) -> Result<ConormalCurvatureReport> {
    if !patch.conformal() {
        return Err(Error::NotCurvatureCoordinate(
            "patch is not conformal".into(),
        ));
    }
    let vs = v_samples(patch, nv);
    let nu_curve = conormal_curve(patch, u, nv);
    let kv = curvature_vectors(&nu_curve);
    let mut out = ConormalCurvatureReport {
        max_deviation: 0.0,
        max_predicted: 0.0,
    };
    for (j, &v) in vs.iter().enumerate() {
        let jet = patch.jet(u, v);
        let forms = fundamental_forms(patch, u, v)?;
        let lambda = jet.dv.norm();
        let lambda_u = jet.dv.dot(jet.duv) / lambda;
        if libm::fabs(lambda_u) < 1e-12 {
            return Err(Error::Singular { factor: lambda_u });
        }
        let predicted = forms.h22 / lambda_u;
        out.max_predicted = out.max_predicted.max(libm::fabs(predicted));
        out.max_deviation = out
            .max_deviation
            .max(libm::fabs(kv[j].dot(forms.normal) - predicted));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContactAngleReport {
    pub samples: Vec<f64>,
    pub mean: f64,
    /// `max |α(v) - mean|`.
    pub spread: f64,
    /// `max` distance of the boundary row from the plane.
    pub planarity: f64,
}

/// Angle between the outward conormal of the patch along boundary row `u`
/// and the outward conormal, within the plane, of the planar domain the
/// row bounds. The row must lie on the plane within `1e-8` (relative to
/// the row's size).
pub fn contact_angle<P: Patch + ?Sized>(
    patch: &P,
    u: f64,
    plane: &Plane,
    nv: usize,
) -> Result<ContactAngleReport> {
    if nv < 8 {
        return Err(Error::Config(
            "contact angle needs at least 8 samples".into(),
        ));
    }
    let (u_lo, u_hi) = patch.u_range();
    let inward_is_plus_u = libm::fabs(u - u_lo) <= libm::fabs(u - u_hi);
    let vs = v_samples(patch, nv);
    let jets: Vec<_> = vs.iter().map(|&v| patch.jet(u, v)).collect();
    let centroid = jets.iter().fold(Vec3::ZERO, |a, j| a + j.position) / nv as f64;
    let size = jets
        .iter()
        .fold(0.0f64, |m, j| m.max(j.position.dist(centroid)))
        .max(1e-300);
    let planarity = jets.iter().fold(0.0f64, |m, j| {
        m.max(libm::fabs(plane.signed_distance(j.position)))
    });
    if planarity > 1e-8 * size.max(1.0) {
        return Err(Error::Input(alloc::format!(
            "boundary row is {planarity:e} off the plane"
        )));
    }
    let samples: Vec<f64> = jets
        .iter()
        .map(|jet| {
            let surf = if inward_is_plus_u {
                -jet.du.normalized()
            } else {
                jet.du.normalized()
            };
            let mut m = plane.normal.cross(jet.dv.normalized());
            if m.dot(jet.position - centroid) < 0.0 {
                m = -m;
            }
            libm::acos(surf.dot(m).clamp(-1.0, 1.0))
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / nv as f64;
    let spread = samples
        .iter()
        .fold(0.0f64, |m, a| m.max(libm::fabs(a - mean)));
    Ok(ContactAngleReport {
        samples,
        mean,
        spread,
        planarity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlaneBoundaryReport {
    pub planarity: f64,
    pub contact_angle_mean: f64,
    /// `max |α(v) - mean|`.
    pub contact_angle_spread: f64,
    /// `max |α(v) - α_target|`.
    pub contact_angle_deviation: f64,
    /// `max | |κ⃗| - (-κ2 / sin α) |` with `|κ⃗|` from discrete differences.
    pub curvature_deviation: f64,
    /// `min λ_u` along the row.
    pub min_lambda_u: f64,
    /// Whether the plane curve keeps one turning direction.
    pub convex: bool,
}

/// Contact angle, planarity and curvature of the plane boundary of a
/// sphere + plane fixture.
pub fn plane_boundary_check<P: Patch>(
    fx: &AnnulusFixture<P>,
    nv: usize,
) -> Result<PlaneBoundaryReport> {
    let Configuration::SpherePlane { plane, .. } = fx.config else {
        return Err(Error::NotApplicable("fixture has no plane boundary".into()));
    };
    let p = &fx.patch;
    let u = fx.boundary_u(Boundary::Lower);
    let angles = contact_angle(p, u, &plane.plane(), nv)?;
    let vs = v_samples(p, nv);
    let pts: Vec<Vec3> = vs.iter().map(|&v| p.position(u, v)).collect();
    let kv = curvature_vectors(&pts);
    let mut out = PlaneBoundaryReport {
        planarity: angles.planarity,
        contact_angle_mean: angles.mean,
        contact_angle_spread: angles.spread,
        contact_angle_deviation: 0.0,
        curvature_deviation: 0.0,
        min_lambda_u: f64::INFINITY,
        convex: planar_convexity(&pts, plane.unit_normal)?.convex,
    };
    for (j, &v) in vs.iter().enumerate() {
        let jet = p.jet(u, v);
        let alpha = angles.samples[j];
        out.contact_angle_deviation = out
            .contact_angle_deviation
            .max(libm::fabs(alpha - plane.contact_angle));
        let kappa2 = curvature(&fundamental_forms(p, u, v)?).kappa2;
        let predicted = -kappa2 / libm::sin(alpha);
        out.curvature_deviation = out
            .curvature_deviation
            .max(libm::fabs(kv[j].norm() - predicted));
        out.min_lambda_u = out.min_lambda_u.min(jet.dv.dot(jet.duv) / jet.dv.norm());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Containment {
    Outside,
    Inside,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BallReport {
    pub sphere: SphereCfg,
    /// Extremes of `|X - C| - ρ` over the interior rows.
    pub min_gap: f64,
    pub max_gap: f64,
    pub verdict: Containment,
}

/// Where the interior of the annulus lies relative to each ball it touches.
pub fn ball_containment<P: Patch>(fx: &AnnulusFixture<P>, grid: Grid) -> Result<Vec<BallReport>> {
    if grid.nu < 3 {
        return Err(Error::Config("need at least one interior row".into()));
    }
    let us = grid.u_values(&fx.patch);
    let vs = grid.v_values(&fx.patch);
    let mut out = Vec::new();
    for (_, sphere) in fx.sphere_boundaries() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &u in &us[1..us.len() - 1] {
            for &v in &vs {
                let g = (fx.patch.position(u, v) - sphere.center).norm() - sphere.radius;
                lo = lo.min(g);
                hi = hi.max(g);
            }
        }
        let verdict = if lo > 0.0 {
            Containment::Outside
        } else if hi < 0.0 {
            Containment::Inside
        } else {
            Containment::Mixed
        };
        out.push(BallReport {
            sphere,
            min_gap: lo,
            max_gap: hi,
            verdict,
        });
    }
    Ok(out)
}

/// Contact angle of the catenoid `a (cosh u cos v, cosh u sin v, u)`,
/// restricted to `u >= u1`, with the horizontal plane through its lower
/// boundary.
pub fn catenoid_cut_angle(u1: f64) -> f64 {
    FRAC_PI_2 + libm::atan(libm::sinh(u1))
}

#[cfg(test)]
mod tests;
