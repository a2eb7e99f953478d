//! Rotational constant mean curvature surfaces from the meridian ODE
//!
//! ```text
//! r' = cos φ,   z' = sin φ,   φ' = -2H - sin φ / r
//! ```
//!
//! in arclength `s`, with the surface normal `(sin φ cos v, sin φ sin v,
//! -cos φ)`. This convention gives the unit sphere `H = -1` with its outward
//! normal, and conserves the first integral `r sin φ + H r²` (the force).
//! A fourth component `u' = 1/r` carries the conformal coordinate along.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::num::{dopri5, hermite5, OdeOptions, Stop};
use crate::surface::{Jet2, Orientation, Patch};
use crate::{Error, Result, Vec3};

/// Delaunay family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Family {
    Plane,
    Catenoid,
    Sphere,
    Cylinder,
    Unduloid,
    Nodoid,
    /// `H * force < -1/4`: no meridian exists.
    Infeasible,
}

/// Relative band inside which `H * force` counts as exactly `0` or `-1/4`.
pub const FAMILY_TIE_TOL: f64 = 1e-12;

/// Family from mean curvature and force, by the sign and size of `H * force`.
pub fn classify_family(h: f64, force: f64) -> Family {
    let hf = h * force;
    if h == 0.0 {
        return if force == 0.0 {
            Family::Plane
        } else {
            Family::Catenoid
        };
    }
    if libm::fabs(hf) <= FAMILY_TIE_TOL {
        Family::Sphere
    } else if libm::fabs(hf + 0.25) <= FAMILY_TIE_TOL {
        Family::Cylinder
    } else if hf > 0.0 {
        Family::Nodoid
    } else if hf > -0.25 {
        Family::Unduloid
    } else {
        Family::Infeasible
    }
}

/// Force of the cylinder with mean curvature `h` (radius `1/(2|h|)`).
pub fn cylinder_force(h: f64) -> f64 {
    -0.25 / h
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DelaunaySpec {
    pub h: f64,
    pub force: f64,
    pub family: Family,
}

impl DelaunaySpec {
    pub fn new(h: f64, force: f64) -> Self {
        Self {
            h,
            force,
            family: classify_family(h, force),
        }
    }

    /// Spec whose meridian is vertical (`φ = π/2`) at radius `r0`.
    pub fn through_extremum(h: f64, r0: f64) -> Self {
        Self::new(h, r0 + h * r0 * r0)
    }

    pub fn first_integral(&self, r: f64, phi: f64) -> f64 {
        r * libm::sin(phi) + self.h * r * r
    }
}

/// One meridian sample.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileSample {
    pub s: f64,
    pub r: f64,
    pub z: f64,
    pub phi: f64,
    /// Conformal coordinate `∫ ds / r`, zero at the start point.
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Truncation {
    /// The meridian reached the axis (`r` below the guard) at this arclength.
    HitAxis { s: f64 },
}

/// Meridian of a rotational CMC surface, ordered by arclength, with
/// quintic Hermite interpolation between the integrator's accepted steps.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileCurve {
    pub spec: DelaunaySpec,
    pub samples: Vec<ProfileSample>,
    pub truncated: Option<Truncation>,
}

/// Radius below which a meridian is considered to have reached the axis.
pub const AXIS_GUARD: f64 = 1e-6;

fn rhs(h: f64) -> impl Fn(f64, &[f64; 4]) -> [f64; 4] {
    move |_, y| {
        let (sp, cp) = libm::sincos(y[2]);
        [cp, sp, -2.0 * h - sp / y[0], 1.0 / y[0]]
    }
}

/// `[value, d/ds, d²/ds²]` for each of `r, z, φ, u` at a state.
fn state_jets(h: f64, y: &[f64; 4]) -> [[f64; 3]; 4] {
    let r = y[0];
    let (sp, cp) = libm::sincos(y[2]);
    let dphi = -2.0 * h - sp / r;
    let ddphi = -cp * dphi / r + sp * cp / (r * r);
    [
        [r, cp, -sp * dphi],
        [y[1], sp, cp * dphi],
        [y[2], dphi, ddphi],
        [y[3], 1.0 / r, -cp / (r * r)],
    ]
}

fn integrate_leg(
    spec: &DelaunaySpec,
    y0: [f64; 4],
    s_end: f64,
    opts: &OdeOptions,
) -> Result<(Vec<ProfileSample>, Option<Truncation>)> {
    let (pts, stop) = dopri5(rhs(spec.h), 0.0, y0, s_end, opts, |_, y| y[0] > AXIS_GUARD)?;
    let samples = pts
        .into_iter()
        .map(|(s, y)| ProfileSample {
            s,
            r: y[0],
            z: y[1],
            phi: y[2],
            u: y[3],
        })
        .collect();
    let trunc = match stop {
        Stop::Completed => None,
        Stop::Guard(s) => Some(Truncation::HitAxis { s }),
    };
    Ok((samples, trunc))
}

/// Integrate the meridian over arclength `[s_min, s_max]` (containing 0)
/// from `(r, z, φ) = (r_start, 0, phi_start)` at `s = 0`.
pub fn integrate_profile_span(
    spec: &DelaunaySpec,
    r_start: f64,
    phi_start: f64,
    s_min: f64,
    s_max: f64,
    opts: &OdeOptions,
) -> Result<ProfileCurve> {
    if !(r_start > 0.0) {
        return Err(Error::Input(alloc::format!(
            "r_start must be positive, got {r_start}"
        )));
    }
    if !(s_min <= 0.0 && s_max >= 0.0 && s_max > s_min) {
        return Err(Error::Input("arclength span must contain 0".into()));
    }
    let f0 = spec.first_integral(r_start, phi_start);
    if libm::fabs(f0 - spec.force) > 1e-12 * (1.0 + libm::fabs(spec.force)) {
        return Err(Error::Input(alloc::format!(
            "start point has first integral {f0}, spec force is {}",
            spec.force
        )));
    }
    let y0 = [r_start, 0.0, phi_start, 0.0];
    let mut samples = Vec::new();
    let mut truncated = None;
    if s_min < 0.0 {
        let (back, t) = integrate_leg(spec, y0, s_min, opts)?;
        samples.extend(back.into_iter().rev());
        truncated = t;
    }
    if s_max > 0.0 {
        let (fwd, t) = integrate_leg(spec, y0, s_max, opts)?;
        if !samples.is_empty() {
            samples.pop();
        }
        samples.extend(fwd);
        truncated = truncated.or(t);
    }
    Ok(ProfileCurve {
        spec: *spec,
        samples,
        truncated,
    })
}

/// Integrate forward (or backward, for negative `length`) from the start
/// point.
pub fn integrate_profile(
    spec: &DelaunaySpec,
    r_start: f64,
    phi_start: f64,
    length: f64,
) -> Result<ProfileCurve> {
    let opts = OdeOptions::default();
    if length >= 0.0 {
        integrate_profile_span(spec, r_start, phi_start, 0.0, length, &opts)
    } else {
        integrate_profile_span(spec, r_start, phi_start, length, 0.0, &opts)
    }
}

/// Meridian state and its arclength derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileState {
    /// `[r, z, φ, u]`.
    pub value: [f64; 4],
    pub d1: [f64; 4],
    pub d2: [f64; 4],
}

impl ProfileCurve {
    pub fn s_range(&self) -> (f64, f64) {
        (self.samples[0].s, self.samples[self.samples.len() - 1].s)
    }

    pub fn u_range(&self) -> (f64, f64) {
        (self.samples[0].u, self.samples[self.samples.len() - 1].u)
    }

    fn seg_by<F: Fn(&ProfileSample) -> f64>(&self, key: F, x: f64) -> usize {
        let n = self.samples.len();
        let i = self.samples.partition_point(|p| key(p) <= x);
        i.clamp(1, n - 1) - 1
    }

    /// Interpolated state at arclength `s` (clamped to the sampled span).
    pub fn state_at(&self, s: f64) -> ProfileState {
        let (lo, hi) = self.s_range();
        let s = s.clamp(lo, hi);
        let i = self.seg_by(|p| p.s, s);
        let a = &self.samples[i];
        let b = &self.samples[i + 1];
        let ds = b.s - a.s;
        let ja = state_jets(self.spec.h, &[a.r, a.z, a.phi, a.u]);
        let jb = state_jets(self.spec.h, &[b.r, b.z, b.phi, b.u]);
        let t = (s - a.s) / ds;
        let mut out = ProfileState {
            value: [0.0; 4],
            d1: [0.0; 4],
            d2: [0.0; 4],
        };
        for k in 0..4 {
            let p0 = [ja[k][0], ja[k][1] * ds, ja[k][2] * ds * ds];
            let p1 = [jb[k][0], jb[k][1] * ds, jb[k][2] * ds * ds];
            let [v, d, dd] = hermite5(t, p0, p1);
            out.value[k] = v;
            out.d1[k] = d / ds;
            out.d2[k] = dd / (ds * ds);
        }
        out
    }

    /// Arclength at which the conformal coordinate equals `u`.
    pub fn s_of_u(&self, u: f64) -> f64 {
        let (ulo, uhi) = self.u_range();
        let u = u.clamp(ulo, uhi);
        let i = self.seg_by(|p| p.u, u);
        let a = &self.samples[i];
        let b = &self.samples[i + 1];
        // Newton from the linear guess, safeguarded to the segment.
        let mut s = a.s + (b.s - a.s) * (u - a.u) / (b.u - a.u);
        for _ in 0..30 {
            let st = self.state_at(s);
            let step = (st.value[3] - u) / st.d1[3];
            s = (s - step).clamp(a.s, b.s);
            if libm::fabs(step) < 1e-15 * (1.0 + libm::fabs(s)) {
                break;
            }
        }
        s
    }

    /// `max |r sin φ + H r² - force|` over the stored samples.
    pub fn first_integral_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|p| libm::fabs(self.spec.first_integral(p.r, p.phi) - self.spec.force))
            .fold(0.0, f64::max)
    }

    /// Arclengths of interior local minima of `r`, refined on the
    /// interpolant (where `cos φ` changes sign from negative to positive).
    pub fn radius_minima(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for w in self.samples.windows(2) {
            let (ca, cb) = (libm::cos(w[0].phi), libm::cos(w[1].phi));
            if ca < 0.0 && cb >= 0.0 {
                if let Ok(s) = crate::num::brent(|s| self.state_at(s).d1[0], w[0].s, w[1].s, 1e-14)
                {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// Surface of revolution `(t, v) -> (r(t) cos v, r(t) sin v, z(t))` in
/// arclength parametrization, normal pointing away from the axis where the
/// meridian climbs.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolvedPatch {
    pub profile: ProfileCurve,
    pub t_min: f64,
    pub t_max: f64,
}

pub fn revolve(profile: ProfileCurve) -> RevolvedPatch {
    let (t_min, t_max) = profile.s_range();
    RevolvedPatch {
        profile,
        t_min,
        t_max,
    }
}

impl RevolvedPatch {
    pub fn with_range(mut self, t_min: f64, t_max: f64) -> Self {
        self.t_min = t_min;
        self.t_max = t_max;
        self
    }
}

fn revolved_jet(st: &ProfileState, v: f64) -> Jet2 {
    let [r, z, phi, _] = st.value;
    let dphi = st.d1[2];
    let (sv, cv) = libm::sincos(v);
    let (sp, cp) = libm::sincos(phi);
    Jet2 {
        position: Vec3::new(r * cv, r * sv, z),
        du: Vec3::new(cp * cv, cp * sv, sp),
        dv: Vec3::new(-r * sv, r * cv, 0.0),
        duu: Vec3::new(-sp * dphi * cv, -sp * dphi * sv, cp * dphi),
        duv: Vec3::new(-cp * sv, cp * cv, 0.0),
        dvv: Vec3::new(-r * cv, -r * sv, 0.0),
    }
}

impl Patch for RevolvedPatch {
    fn jet(&self, t: f64, v: f64) -> Jet2 {
        revolved_jet(&self.profile.state_at(t), v)
    }

    fn u_range(&self) -> (f64, f64) {
        (self.t_min, self.t_max)
    }

    fn orientation(&self) -> Orientation {
        Orientation::Flipped
    }
}

/// The same surface in conformal curvature coordinates `(u, v)` with
/// `du = dt / r`, so `λ = r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalRevolved {
    pub profile: ProfileCurve,
    pub u_min: f64,
    pub u_max: f64,
}

/// Conformal reparametrization of a revolved patch (over its `t` range).
pub fn reparametrize_conformal(patch: &RevolvedPatch) -> Result<ConformalRevolved> {
    let p = &patch.profile;
    if p.samples.iter().any(|s| !(s.r > 0.0)) {
        return Err(Error::Input("meridian touches the axis".into()));
    }
    if p.samples.windows(2).any(|w| !(w[1].u > w[0].u)) {
        return Err(Error::Solver("conformal coordinate is not monotone".into()));
    }
    let u_min = p.state_at(patch.t_min).value[3];
    let u_max = p.state_at(patch.t_max).value[3];
    Ok(ConformalRevolved {
        profile: p.clone(),
        u_min,
        u_max,
    })
}

impl ConformalRevolved {
    pub fn with_range(mut self, u_min: f64, u_max: f64) -> Self {
        self.u_min = u_min;
        self.u_max = u_max;
        self
    }

    /// Meridian state at conformal coordinate `u`.
    pub fn state_at_u(&self, u: f64) -> ProfileState {
        self.profile.state_at(self.profile.s_of_u(u))
    }
}

impl Patch for ConformalRevolved {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        let st = self.state_at_u(u);
        let j = revolved_jet(&st, v);
        let r = st.value[0];
        let dr_dt = st.d1[0];
        // d/du = r d/dt.
        Jet2 {
            position: j.position,
            du: j.du * r,
            dv: j.dv,
            duu: (j.du * dr_dt + j.duu * r) * r,
            duv: j.duv * r,
            dvv: j.dvv,
        }
    }

    fn u_range(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    fn conformal(&self) -> bool {
        true
    }

    fn orientation(&self) -> Orientation {
        Orientation::Flipped
    }
}

/// Meridian starting at a vertical tangent (`φ = π/2`) at radius `r0`,
/// integrated over `[s_min, s_max]`.
pub fn profile_from_extremum(h: f64, r0: f64, s_min: f64, s_max: f64) -> Result<ProfileCurve> {
    let spec = DelaunaySpec::through_extremum(h, r0);
    integrate_profile_span(&spec, r0, FRAC_PI_2, s_min, s_max, &OdeOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{curvature_at, fundamental_forms, FdPatch, Grid};

    #[test]
    fn classify_examples() {
        assert_eq!(classify_family(0.0, 1.0), Family::Catenoid);
        assert_eq!(classify_family(0.0, 0.0), Family::Plane);
        assert_eq!(classify_family(-1.0, 0.0), Family::Sphere);
        assert_eq!(
            classify_family(-0.75, cylinder_force(-0.75)),
            Family::Cylinder
        );
        // the constant solution r = 2/3, φ = π/2 of φ' = -2H - sin φ / r
        assert_eq!(
            classify_family(-0.75, 2.0 / 3.0 - 0.75 * 4.0 / 9.0),
            Family::Cylinder
        );
        assert_eq!(classify_family(-1.0, 0.2), Family::Unduloid);
        assert_eq!(classify_family(-1.0, -0.2), Family::Nodoid);
        assert_eq!(classify_family(1.0, 0.2), Family::Nodoid);
        assert_eq!(classify_family(-1.0, 0.3), Family::Infeasible);
    }

    #[test]
    fn catenary_profile() {
        let spec = DelaunaySpec::new(0.0, 1.0);
        let p = integrate_profile(&spec, 1.0, FRAC_PI_2, 3.0).unwrap();
        assert!(p.truncated.is_none());
        let mut worst = 0.0f64;
        for k in 0..=300 {
            let s = 3.0 * k as f64 / 300.0;
            let st = p.state_at(s);
            worst = worst.max((st.value[0] - libm::cosh(st.value[1])).abs());
        }
        assert!(worst < 1e-8, "{worst}");
        assert!(p.first_integral_drift() < 1e-9);
    }

    #[test]
    fn sphere_profile_hits_axis() {
        let spec = DelaunaySpec::new(-1.0, 0.0);
        let p = integrate_profile(&spec, 1.0, FRAC_PI_2, 3.0).unwrap();
        match p.truncated {
            Some(Truncation::HitAxis { s }) => assert!((s - FRAC_PI_2).abs() < 1e-3, "{s}"),
            None => panic!("expected truncation"),
        }
        for q in &p.samples {
            assert!((q.r * q.r + q.z * q.z - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cylinder_profile_is_constant() {
        let spec = DelaunaySpec::new(-0.5, 0.5);
        let p = integrate_profile(&spec, 1.0, FRAC_PI_2, 5.0).unwrap();
        for q in &p.samples {
            assert!((q.r - 1.0).abs() < 1e-14 && (q.phi - FRAC_PI_2).abs() < 1e-14);
        }
    }

    #[test]
    fn inconsistent_start_rejected() {
        let spec = DelaunaySpec::new(0.0, 1.0);
        assert!(integrate_profile(&spec, 1.0, 0.0, 1.0).is_err());
        assert!(integrate_profile(&spec, -1.0, FRAC_PI_2, 1.0).is_err());
    }

    #[test]
    fn revolve_curvatures() {
        let cat =
            revolve(integrate_profile(&DelaunaySpec::new(0.0, 1.0), 1.0, FRAC_PI_2, 2.0).unwrap());
        let sph =
            revolve(integrate_profile(&DelaunaySpec::new(-1.0, 0.0), 1.0, FRAC_PI_2, 1.2).unwrap());
        let cyl =
            revolve(integrate_profile(&DelaunaySpec::new(-0.5, 0.5), 1.0, FRAC_PI_2, 2.0).unwrap());
        for t in [0.1, 0.5, 1.0] {
            for v in [0.0, 2.0] {
                assert!(curvature_at(&cat, t, v).unwrap().h.abs() < 1e-6);
                assert!((curvature_at(&sph, t, v).unwrap().k - 1.0).abs() < 1e-6);
                assert!(curvature_at(&cyl, t, v).unwrap().k.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn revolve_fd_oracle_mean_curvature() {
        for (h, r0) in [(0.5, 0.6), (-0.8, 0.9), (-1.3, 0.6)] {
            let p = revolve(profile_from_extremum(h, r0, -1.0, 1.0).unwrap());
            let fd = FdPatch::new(|t, v| p.position(t, v), -0.9, 0.9, Orientation::Flipped);
            for t in [-0.5, 0.0, 0.7] {
                let c = curvature_at(&fd, t, 0.4).unwrap();
                assert!((c.h - h).abs() < 1e-6, "h={h} t={t} got {}", c.h);
            }
        }
    }

    #[test]
    fn conformal_catenoid_closed_form() {
        let a = 0.5;
        let p = integrate_profile_span(
            &DelaunaySpec::new(0.0, a),
            a,
            FRAC_PI_2,
            -2.0,
            2.0,
            &OdeOptions::default(),
        )
        .unwrap();
        let conf = reparametrize_conformal(&revolve(p)).unwrap();
        for t in [-1.5, -0.3, 0.0, 0.8, 1.9] {
            let u = conf.profile.state_at(t).value[3];
            assert!((u - libm::asinh(t / a)).abs() < 1e-9, "{t}");
        }
        let (lo, hi) = conf.u_range();
        for k in 0..=10 {
            let u = lo + (hi - lo) * k as f64 / 10.0;
            let f = fundamental_forms(&conf, u, 0.7).unwrap();
            let want = a * a * libm::cosh(u).powi(2);
            assert!((f.e - want).abs() < 1e-6 && (f.g - want).abs() < 1e-6);
        }
    }

    #[test]
    fn conformal_cylinder_identity_and_nodoid_residual() {
        let p = integrate_profile(&DelaunaySpec::new(-0.5, 0.5), 1.0, FRAC_PI_2, 3.0).unwrap();
        let conf = reparametrize_conformal(&revolve(p)).unwrap();
        for s in [0.0, 1.0, 2.5] {
            assert!((conf.profile.s_of_u(s) - s).abs() < 1e-12);
        }
        let nod = profile_from_extremum(1.0, 0.5, -1.5, 1.5).unwrap();
        assert_eq!(nod.spec.family, Family::Nodoid);
        let conf = reparametrize_conformal(&revolve(nod)).unwrap();
        let fd = FdPatch::new(
            |u, v| conf.position(u, v),
            conf.u_min,
            conf.u_max,
            Orientation::Flipped,
        );
        let (lo, hi) = conf.u_range();
        for k in 1..10 {
            let u = lo + (hi - lo) * k as f64 / 10.0;
            let j = fd.jet(u, 0.3);
            let e = j.du.norm_sq();
            let res = ((e - j.dv.norm_sq()).abs() + j.du.dot(j.dv).abs()) / e;
            assert!(res < 1e-6, "{res}");
        }
        let _ = Grid::default();
    }

    #[test]
    fn unduloid_period() {
        let p = profile_from_extremum(-1.0, 0.3, 0.0, 12.0).unwrap();
        assert_eq!(p.spec.family, Family::Unduloid);
        let mins: Vec<f64> = p
            .radius_minima()
            .iter()
            .map(|&s| p.state_at(s).value[0])
            .collect();
        assert!(mins.len() >= 2);
        for w in mins.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-6);
        }
        assert!((mins[0] - 0.3).abs() < 1e-6);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn family_depends_on_the_product(h in -3.0..3.0f64, f in -2.0..2.0f64, s in 0.1..10.0f64) {
            proptest::prop_assert_eq!(classify_family(h / s, f * s), classify_family(h, f));
        }

        #[test]
        fn first_integral_is_conserved(h in -2.0..-0.2f64, r0 in 0.2..2.0f64) {
            let spec = DelaunaySpec::through_extremum(h, r0);
            proptest::prop_assume!(spec.force.abs() > 0.05);
            let profile = integrate_profile(&spec, r0, FRAC_PI_2, 5.0).unwrap();
            proptest::prop_assert!(profile.first_integral_drift() < 1e-9);
        }
    }
}
