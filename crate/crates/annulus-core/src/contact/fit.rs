//! Fitting rotational CMC annuli to sphere/plane configurations.
//!
//! Every fixture is a piece of a meridian that starts at a vertical tangent
//! (`φ = π/2`, radius `r0`) on the plane `z = 0`. Tangency to a unit sphere
//! centered on the axis happens where `r = sin φ` (the point `X - N` lies on
//! the axis); the sphere center is then at height `z + cos φ`. By the
//! reversal symmetry of the meridian ODE the piece over `[-t0, t0]` touches
//! two spheres at `±z0`.
//!
//! For fixed `H` the free parameter is `r0` (equivalently the force
//! `r0 + H r0²`). The fit scans `r0`, then refines a sign change of the
//! distance residual with Brent's method. The tangency point itself is a
//! root of `r - sin φ` refined the same way on the meridian interpolant.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use super::{AnnulusFixture, Configuration, PlaneCfg, SphereCfg};
use crate::delaunay::{reparametrize_conformal, revolve, ProfileCurve};
use crate::num::{brent, dopri5, OdeOptions, Stop};
use crate::{Error, Result, Vec3};

/// Longest meridian arclength searched for a tangency point.
const MAX_SEARCH: f64 = 40.0;

/// Extra meridian kept beyond each boundary so stencils can reach past it.
const MARGIN: f64 = 0.05;

/// What the fixture has to meet.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum FitTarget {
    /// Two unit spheres whose centers are `distance` apart. For `H < -1`
    /// the spheres overlap and the one touching the upper boundary has the
    /// lower center.
    TwoSpheres { distance: f64 },
    /// One unit sphere whose center is `distance` from a plane met at
    /// contact angle `alpha`.
    SpherePlane { distance: f64, alpha: f64 },
}

/// Which root to keep when the scan finds several.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RootChoice {
    LargestR0,
    SmallestR0,
}

/// Sign of the Gaussian curvature the fixture must have.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CurvatureSign {
    Negative,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitOptions {
    /// Search interval for the extremal radius `r0` (unit-sphere scale).
    pub r0_bracket: (f64, f64),
    pub scan_points: usize,
    pub choice: RootChoice,
    pub k_sign: Option<CurvatureSign>,
    /// Common sphere radius; the problem is rescaled to radius 1.
    pub radius: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            r0_bracket: (1e-3, 4.0),
            scan_points: 160,
            choice: RootChoice::LargestR0,
            k_sign: None,
            radius: 1.0,
        }
    }
}

/// One evaluation of the outer residual.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverStep {
    pub r0: f64,
    pub residual: f64,
}

/// Tangency geometry of the meridian through `(r0, φ = π/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangency {
    pub profile: ProfileCurve,
    /// Arclength of the tangency point (`t0 > 0`).
    pub t0: f64,
    /// Height of the upper sphere center.
    pub z0: f64,
    pub k_sign: CurvatureSign,
}

fn tangency_gap(r: f64, phi: f64) -> f64 {
    r - libm::sin(phi)
}

/// Locate the first tangency with a unit sphere on the axis, going up from
/// the extremum. Fails when the meridian has none within the search length
/// or `K` changes sign before reaching it.
pub fn find_tangency(h: f64, r0: f64) -> Result<Tangency> {
    if libm::fabs(h + 1.0) < 1e-12 {
        return Err(Error::ExcludedCase("H = -1 (the sphere itself)".into()));
    }
    let g0 = r0 - 1.0;
    if libm::fabs(g0) < 1e-12 {
        return Err(Error::Infeasible(
            "extremum already tangent (u0 = 0)".into(),
        ));
    }
    let spec = crate::delaunay::DelaunaySpec::through_extremum(h, r0);
    let opts = OdeOptions::default();
    let rhs = |_: f64, y: &[f64; 2]| {
        let (sp, cp) = libm::sincos(y[1]);
        [cp, -2.0 * h - sp / y[0]]
    };
    let (_, stop) = dopri5(rhs, 0.0, [r0, FRAC_PI_2], MAX_SEARCH, &opts, |_, y| {
        y[0] > crate::delaunay::AXIS_GUARD && tangency_gap(y[0], y[1]).signum() == g0.signum()
    })?;
    let s_cross = match stop {
        Stop::Guard(s) => s,
        Stop::Completed => {
            return Err(Error::Infeasible(alloc::format!(
                "no tangency for r0 = {r0}"
            )))
        }
    };
    let span = s_cross * (1.0 + MARGIN) + MARGIN;
    let profile =
        crate::delaunay::integrate_profile_span(&spec, r0, FRAC_PI_2, -span, span, &opts)?;
    if profile.truncated.is_some() {
        return Err(Error::Infeasible(alloc::format!(
            "meridian reaches the axis for r0 = {r0}"
        )));
    }
    // The guard fired inside the last accepted step before s_cross.
    let gap = |s: f64| {
        let st = profile.state_at(s);
        tangency_gap(st.value[0], st.value[2])
    };
    let lo = profile
        .samples
        .iter()
        .rev()
        .find(|p| p.s >= 0.0 && p.s < s_cross && gap(p.s).signum() == g0.signum())
        .map(|p| p.s)
        .unwrap_or(0.0);
    let t0 = brent(gap, lo, s_cross, 1e-15)?;
    let sign_at = |s: f64| {
        let st = profile.state_at(s);
        st.d1[2] * libm::sin(st.value[2])
    };
    let k0 = sign_at(0.0);
    if k0 == 0.0 {
        return Err(Error::NotApplicable("K vanishes at the extremum".into()));
    }
    let mixed = profile
        .samples
        .iter()
        .filter(|p| p.s > 0.0 && p.s < t0)
        .map(|p| p.s)
        .chain(core::iter::once(t0))
        .any(|s| sign_at(s).signum() != k0.signum());
    if mixed {
        return Err(Error::NotApplicable(alloc::format!(
            "K changes sign before the tangency for r0 = {r0}"
        )));
    }
    let st = profile.state_at(t0);
    let z0 = st.value[1] + libm::cos(st.value[2]);
    let k_sign = if k0 > 0.0 {
        CurvatureSign::Positive
    } else {
        CurvatureSign::Negative
    };
    Ok(Tangency {
        profile,
        t0,
        z0,
        k_sign,
    })
}

/// Arclength in `[0, t0]` where the contact angle with a horizontal plane
/// equals `alpha` (`cos α = -cos φ`).
pub fn find_cut(tan: &Tangency, alpha: f64) -> Result<f64> {
    if libm::fabs(alpha - FRAC_PI_2) < 1e-15 {
        return Ok(0.0);
    }
    let target = libm::cos(alpha);
    let f = |s: f64| -libm::cos(tan.profile.state_at(s).value[2]) - target;
    let (a, b) = (f(0.0), f(tan.t0));
    if a.signum() == b.signum() {
        return Err(Error::Infeasible(alloc::format!(
            "contact angle {alpha} not attained between the extremum and the sphere"
        )));
    }
    brent(f, 0.0, tan.t0, 1e-15)
}

/// Two-sphere fixture for the meridian through `r0` (unit spheres).
pub fn two_sphere_fixture(h: f64, r0: f64) -> Result<AnnulusFixture> {
    let tan = find_tangency(h, r0)?;
    let conf = reparametrize_conformal(&revolve(tan.profile.clone()))?;
    let u0 = tan.profile.state_at(tan.t0).value[3];
    let lower = tan.profile.state_at(-tan.t0).value[3];
    let patch = conf.with_range(lower, u0);
    let config = Configuration::TwoSpheres {
        spheres: [
            SphereCfg {
                center: Vec3::new(0.0, 0.0, -tan.z0),
                radius: 1.0,
            },
            SphereCfg {
                center: Vec3::new(0.0, 0.0, tan.z0),
                radius: 1.0,
            },
        ],
    };
    Ok(AnnulusFixture::new(h, r0, patch, config, tan.k_sign))
}

/// Sphere + plane fixture: the piece from the cut at contact angle `alpha`
/// up to the sphere.
pub fn sphere_plane_fixture(h: f64, r0: f64, alpha: f64) -> Result<AnnulusFixture> {
    if !(alpha > 0.0 && alpha < core::f64::consts::PI) {
        return Err(Error::Input(alloc::format!(
            "contact angle must lie in (0, π), got {alpha}"
        )));
    }
    let tan = find_tangency(h, r0)?;
    let t1 = find_cut(&tan, alpha)?;
    let conf = reparametrize_conformal(&revolve(tan.profile.clone()))?;
    let u0 = tan.profile.state_at(tan.t0).value[3];
    let u1 = tan.profile.state_at(t1).value[3];
    let z1 = tan.profile.state_at(t1).value[1];
    let patch = conf.with_range(u1, u0);
    let config = Configuration::SpherePlane {
        sphere: SphereCfg {
            center: Vec3::new(0.0, 0.0, tan.z0),
            radius: 1.0,
        },
        plane: PlaneCfg {
            unit_normal: Vec3::Z,
            offset: z1,
            contact_angle: alpha,
        },
    };
    Ok(AnnulusFixture::new(h, r0, patch, config, tan.k_sign))
}

/// Distance residual for a trial `r0` (unit scale).
fn residual(h: f64, r0: f64, target: FitTarget, want: Option<CurvatureSign>) -> Option<f64> {
    let tan = find_tangency(h, r0).ok()?;
    if want.is_some_and(|w| w != tan.k_sign) {
        return None;
    }
    match target {
        FitTarget::TwoSpheres { distance } => Some(2.0 * libm::fabs(tan.z0) - distance),
        FitTarget::SpherePlane { distance, alpha } => {
            let t1 = find_cut(&tan, alpha).ok()?;
            Some(libm::fabs(tan.z0 - tan.profile.state_at(t1).value[1]) - distance)
        }
    }
}

/// Fit an annulus with mean curvature `h` to the target configuration.
pub fn fit_tangent_annulus(h: f64, target: FitTarget, opts: &FitOptions) -> Result<AnnulusFixture> {
    if !(opts.radius > 0.0) {
        return Err(Error::Input("sphere radius must be positive".into()));
    }
    // Rescale to unit spheres: lengths / ρ, curvatures * ρ.
    let rho = opts.radius;
    let h_unit = h * rho;
    if libm::fabs(h_unit + 1.0) < 1e-12 {
        return Err(Error::ExcludedCase(
            "H = -1/ρ: the annulus is part of the sphere".into(),
        ));
    }
    let target = match target {
        FitTarget::TwoSpheres { distance } => FitTarget::TwoSpheres {
            distance: distance / rho,
        },
        FitTarget::SpherePlane { distance, alpha } => FitTarget::SpherePlane {
            distance: distance / rho,
            alpha,
        },
    };
    let (lo, hi) = opts.r0_bracket;
    if !(lo > 0.0 && hi > lo) || opts.scan_points < 2 {
        return Err(Error::Config("invalid r0 bracket or scan size".into()));
    }
    let mut trace = Vec::new();
    let ratio = libm::pow(hi / lo, 1.0 / (opts.scan_points - 1) as f64);
    let scan: Vec<(f64, Option<f64>)> = (0..opts.scan_points)
        .map(|i| {
            let r0 = lo * libm::pow(ratio, i as f64);
            let res = residual(h_unit, r0, target, opts.k_sign);
            if let Some(res) = res {
                trace.push(SolverStep { r0, residual: res });
            }
            (r0, res)
        })
        .collect();
    let mut roots = Vec::new();
    for w in scan.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        let (Some(fa), Some(fb)) = (fa, fb) else {
            continue;
        };
        if fa.signum() == fb.signum() && fa != 0.0 {
            continue;
        }
        let f = |r: f64| {
            let res = residual(h_unit, r, target, opts.k_sign).unwrap_or(f64::NAN);
            trace.push(SolverStep {
                r0: r,
                residual: res,
            });
            res
        };
        if let Ok(r) = brent(f, a, b, 1e-15) {
            if residual(h_unit, r, target, opts.k_sign).is_some_and(|x| libm::fabs(x) < 1e-9) {
                roots.push(r);
            }
        }
    }
    let r0 = match opts.choice {
        RootChoice::LargestR0 => roots
            .iter()
            .copied()
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r)))),
        RootChoice::SmallestR0 => roots
            .iter()
            .copied()
            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r)))),
    }
    .ok_or_else(|| {
        Error::Infeasible(alloc::format!(
            "no tangent annulus with H = {h} for {target:?}"
        ))
    })?;
    let mut fixture = match target {
        FitTarget::TwoSpheres { .. } => two_sphere_fixture(h_unit, r0)?,
        FitTarget::SpherePlane { alpha, .. } => sphere_plane_fixture(h_unit, r0, alpha)?,
    };
    fixture.radius = rho;
    fixture.trace = trace;
    Ok(fixture)
}
