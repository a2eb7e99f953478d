//! Parametric patches with second-order jets and the pointwise differential
//! geometry built on them: fundamental forms, principal curvatures, the Hopf
//! constant `c = h11 - h22` and the Gauss-equation residual.
//!
//! Parameters are `(u, v)` with `v` periodic of period `2π` unless a patch says
//! otherwise. Second fundamental form coefficients are `h_ij = N . X_ij` with
//! `N` fixed by the patch's [`Orientation`].

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::{Error, Result, Vec3};

mod fd;
mod graph;
mod patches;

pub use fd::FdPatch;
pub use graph::{local_graph, GraphDerivs, GraphSamples, GraphSide};
pub use patches::{Catenoid, ConformalSphere, Cylinder, PolarPlane};

/// Position and first/second partial derivatives at a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub position: Vec3,
    pub du: Vec3,
    pub dv: Vec3,
    pub duu: Vec3,
    pub duv: Vec3,
    pub dvv: Vec3,
}

impl Jet2 {
    pub fn is_finite(&self) -> bool {
        [
            self.position,
            self.du,
            self.dv,
            self.duu,
            self.duv,
            self.dvv,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Which way the unit normal points relative to `X_u x X_v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Orientation {
    /// `N = X_u x X_v / |X_u x X_v|`.
    Standard,
    /// `N = -X_u x X_v / |X_u x X_v|`.
    Flipped,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Standard => 1.0,
            Orientation::Flipped => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Orientation::Standard => Orientation::Flipped,
            Orientation::Flipped => Orientation::Standard,
        }
    }
}

/// A surface patch on `[u0, u1] x [v0, v1]`.
pub trait Patch {
    fn jet(&self, u: f64, v: f64) -> Jet2;

    fn u_range(&self) -> (f64, f64);

    fn v_range(&self) -> (f64, f64) {
        (0.0, TAU)
    }

    fn periodic_v(&self) -> bool {
        true
    }

    /// True when `E = G` and `F = 0` by construction.
    fn conformal(&self) -> bool {
        false
    }

    fn orientation(&self) -> Orientation;

    fn position(&self, u: f64, v: f64) -> Vec3 {
        self.jet(u, v).position
    }

    /// Unit normal at `(u, v)` given the jet there.
    fn unit_normal(&self, _u: f64, _v: f64, jet: &Jet2) -> Vec3 {
        jet.du.cross(jet.dv).normalized() * self.orientation().sign()
    }

    fn normal(&self, u: f64, v: f64) -> Vec3 {
        let j = self.jet(u, v);
        self.unit_normal(u, v, &j)
    }
}

impl<P: Patch + ?Sized> Patch for &P {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        (**self).jet(u, v)
    }
    fn u_range(&self) -> (f64, f64) {
        (**self).u_range()
    }
    fn v_range(&self) -> (f64, f64) {
        (**self).v_range()
    }
    fn periodic_v(&self) -> bool {
        (**self).periodic_v()
    }
    fn conformal(&self) -> bool {
        (**self).conformal()
    }
    fn orientation(&self) -> Orientation {
        (**self).orientation()
    }
    fn position(&self, u: f64, v: f64) -> Vec3 {
        (**self).position(u, v)
    }
    fn unit_normal(&self, u: f64, v: f64, jet: &Jet2) -> Vec3 {
        (**self).unit_normal(u, v, jet)
    }
    fn normal(&self, u: f64, v: f64) -> Vec3 {
        (**self).normal(u, v)
    }
}

/// First and second fundamental forms at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FundForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub h11: f64,
    pub h12: f64,
    pub h22: f64,
    /// Conformal factor `λ² = E`, set when the patch is conformal.
    pub lambda_sq: Option<f64>,
    pub normal: Vec3,
}

impl FundForms {
    pub fn det_first(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }
}

/// Curvatures at a point. `kappa1` belongs to the `u` curvature line and
/// `kappa2` to the `v` one when the coordinates are curvature coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvatureSample {
    pub h: f64,
    pub k: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub normal: Vec3,
}

/// Forms from a jet with the normal fixed by `orientation`.
pub fn forms_from_jet(
    jet: &Jet2,
    orientation: Orientation,
    conformal: bool,
    u: f64,
    v: f64,
) -> Result<FundForms> {
    let cross = jet.du.cross(jet.dv);
    let len = cross.norm();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::DegeneratePoint { u, v });
    }
    forms_with_normal(jet, cross / len * orientation.sign(), conformal, u, v)
}

/// Forms from a jet with an externally supplied unit normal.
pub fn forms_with_normal(
    jet: &Jet2,
    normal: Vec3,
    conformal: bool,
    u: f64,
    v: f64,
) -> Result<FundForms> {
    let e = jet.du.dot(jet.du);
    let f = jet.du.dot(jet.dv);
    let g = jet.dv.dot(jet.dv);
    if !(e * g - f * f > 0.0) {
        return Err(Error::DegeneratePoint { u, v });
    }
    Ok(FundForms {
        e,
        f,
        g,
        h11: normal.dot(jet.duu),
        h12: normal.dot(jet.duv),
        h22: normal.dot(jet.dvv),
        lambda_sq: conformal.then_some(e),
        normal,
    })
}

pub fn fundamental_forms<P: Patch + ?Sized>(patch: &P, u: f64, v: f64) -> Result<FundForms> {
    let jet = patch.jet(u, v);
    let len = jet.du.cross(jet.dv).norm();
    if !(len > 0.0) || !len.is_finite() {
        return Err(Error::DegeneratePoint { u, v });
    }
    forms_with_normal(&jet, patch.unit_normal(u, v, &jet), patch.conformal(), u, v)
}

/// Principal, mean and Gaussian curvature from the fundamental forms.
pub fn curvature(forms: &FundForms) -> CurvatureSample {
    let FundForms {
        e,
        f,
        g,
        h11,
        h12,
        h22,
        normal,
        ..
    } = *forms;
    let scale = libm::fabs(h11) + libm::fabs(h22) + libm::fabs(h12);
    let (kappa1, kappa2) =
        if libm::fabs(f) <= 1e-13 * libm::sqrt(e * g) && libm::fabs(h12) <= 1e-13 * scale {
            (h11 / e, h22 / g)
        } else {
            let det = e * g - f * f;
            // Shape operator S = I^{-1} II.
            let s11 = (g * h11 - f * h12) / det;
            let s12 = (g * h12 - f * h22) / det;
            let s21 = (e * h12 - f * h11) / det;
            let s22 = (e * h22 - f * h12) / det;
            let mean = 0.5 * (s11 + s22);
            let gauss = s11 * s22 - s12 * s21;
            let disc = libm::sqrt((mean * mean - gauss).max(0.0));
            let (a, b) = (mean + disc, mean - disc);
            // Attach to the u line the eigenvalue whose eigenvector is closer to d/du.
            let u_alignment = |mu: f64| {
                let (p, q) = if libm::fabs(s12) + libm::fabs(mu - s11)
                    >= libm::fabs(mu - s22) + libm::fabs(s21)
                {
                    (s12, mu - s11)
                } else {
                    (mu - s22, s21)
                };
                let len_sq = e * p * p + 2.0 * f * p * q + g * q * q;
                if len_sq <= 0.0 {
                    return 0.0;
                }
                let proj = e * p + f * q;
                proj * proj / (e * len_sq)
            };
            if u_alignment(a) >= u_alignment(b) {
                (a, b)
            } else {
                (b, a)
            }
        };
    CurvatureSample {
        h: 0.5 * (kappa1 + kappa2),
        k: kappa1 * kappa2,
        kappa1,
        kappa2,
        normal,
    }
}

/// Curvature at a parameter point.
pub fn curvature_at<P: Patch + ?Sized>(patch: &P, u: f64, v: f64) -> Result<CurvatureSample> {
    Ok(curvature(&fundamental_forms(patch, u, v)?))
}

/// Sampling resolution: `nu` rows spanning `[u0, u1]` inclusive, `nv`
/// columns spanning `[v0, v1)` for periodic patches and inclusive otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { nu: 128, nv: 256 }
    }
}

impl Grid {
    pub const fn new(nu: usize, nv: usize) -> Self {
        Self { nu, nv }
    }

    pub fn u_values<P: Patch + ?Sized>(&self, patch: &P) -> Vec<f64> {
        let (a, b) = patch.u_range();
        crate::num::linspace(a, b, self.nu)
    }

    pub fn v_values<P: Patch + ?Sized>(&self, patch: &P) -> Vec<f64> {
        let (a, b) = patch.v_range();
        if patch.periodic_v() {
            (0..self.nv)
                .map(|j| a + (b - a) * j as f64 / self.nv as f64)
                .collect()
        } else {
            crate::num::linspace(a, b, self.nv)
        }
    }
}

/// Outcome of [`hopf_constant`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HopfReport {
    /// Mean of `h11 - h22` over the grid.
    pub c: f64,
    /// `max |h11 - h22 - c|`.
    pub max_deviation: f64,
    /// `max |h12|`.
    pub max_h12: f64,
    /// `max |H - mean H|`.
    pub h_spread: f64,
    pub mean_h: f64,
}

/// Hopf constant of a conformal CMC patch, with the residuals that certify
/// it. `h_tol` bounds the allowed spread of `H` and the relative
/// conformality defect.
pub fn hopf_constant<P: Patch + ?Sized>(patch: &P, grid: Grid, h_tol: f64) -> Result<HopfReport> {
    if !patch.conformal() {
        return Err(Error::NotCurvatureCoordinate(
            "patch is not flagged conformal".into(),
        ));
    }
    let us = grid.u_values(patch);
    let vs = grid.v_values(patch);
    let mut diffs = Vec::with_capacity(us.len() * vs.len());
    let mut hs = Vec::with_capacity(us.len() * vs.len());
    let mut max_h12 = 0.0f64;
    for &u in &us {
        for &v in &vs {
            let forms = fundamental_forms(patch, u, v)?;
            let conf = (libm::fabs(forms.e - forms.g) + libm::fabs(forms.f)) / forms.e;
            if conf > h_tol {
                return Err(Error::NotCurvatureCoordinate(alloc::format!(
                    "conformality defect {conf:e} at ({u}, {v})"
                )));
            }
            diffs.push(forms.h11 - forms.h22);
            hs.push(curvature(&forms).h);
            max_h12 = max_h12.max(libm::fabs(forms.h12));
        }
    }
    let n = diffs.len() as f64;
    let c = diffs.iter().sum::<f64>() / n;
    let mean_h = hs.iter().sum::<f64>() / n;
    let h_spread = hs.iter().fold(0.0f64, |m, h| m.max(libm::fabs(h - mean_h)));
    if h_spread > h_tol {
        return Err(Error::NotCurvatureCoordinate(alloc::format!(
            "mean curvature varies by {h_spread:e}"
        )));
    }
    let max_deviation = diffs.iter().fold(0.0f64, |m, d| m.max(libm::fabs(d - c)));
    Ok(HopfReport {
        c,
        max_deviation,
        max_h12,
        h_spread,
        mean_h,
    })
}

/// `max |Δ log λ + K λ²|` over interior grid points of a conformal patch.
///
/// `Δ` uses the fourth-order five-point central stencil in `u` and `v`
/// (wrapping in `v`), so rows within two of the `u` ends are skipped.
pub fn gauss_residual<P: Patch + ?Sized>(patch: &P, grid: Grid) -> Result<f64> {
    if !patch.conformal() {
        return Err(Error::NotCurvatureCoordinate(
            "patch is not flagged conformal".into(),
        ));
    }
    if grid.nu < 5 || grid.nv < 5 || !patch.periodic_v() {
        return Err(Error::Config(
            "gauss_residual needs a periodic patch and at least 5x5 samples".into(),
        ));
    }
    let us = grid.u_values(patch);
    let vs = grid.v_values(patch);
    let (nu, nv) = (us.len(), vs.len());
    let hu = us[1] - us[0];
    let hv = vs[1] - vs[0];
    let mut log_lambda = Vec::with_capacity(nu * nv);
    let mut k_lsq = Vec::with_capacity(nu * nv);
    for &u in &us {
        for &v in &vs {
            let forms = fundamental_forms(patch, u, v)?;
            let lsq = forms.e;
            log_lambda.push(0.5 * libm::log(lsq));
            k_lsq.push(curvature(&forms).k * lsq);
        }
    }
    let at = |i: usize, j: isize| log_lambda[i * nv + j.rem_euclid(nv as isize) as usize];
    let d2 = |m2: f64, m1: f64, c: f64, p1: f64, p2: f64, h: f64| {
        (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h)
    };
    let mut worst = 0.0f64;
    for i in 2..nu - 2 {
        for j in 0..nv as isize {
            let c = at(i, j);
            let luu = d2(
                at(i - 2, j),
                at(i - 1, j),
                c,
                at(i + 1, j),
                at(i + 2, j),
                hu,
            );
            let lvv = d2(
                at(i, j - 2),
                at(i, j - 1),
                c,
                at(i, j + 1),
                at(i, j + 2),
                hv,
            );
            let r = libm::fabs(luu + lvv + k_lsq[i * nv + j as usize]);
            worst = worst.max(r);
        }
    }
    Ok(worst)
}
