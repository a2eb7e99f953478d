//! Parallel surfaces `X - ρN` of a patch, with the unit normal kept equal to
//! the base normal. Principal curvatures transform as `κ / (1 + ρκ)` and the
//! surface is singular where `1 + ρκ = 0`.

use alloc::vec::Vec;

use crate::surface::{
    curvature, forms_with_normal, fundamental_forms, FdPatch, Grid, Jet2, Orientation, Patch,
};
use crate::{Error, Result, Vec3};

/// Threshold on `|1 + ρκ|` below which a point is singular.
pub const EPS_SING: f64 = 1e-6;

/// Base-step fraction (of the `u` span) for differencing the analytic
/// first derivatives of an offset into second derivatives.
const OFFSET_STEP_FRACTION: f64 = 1e-3;

/// The parallel surface at distance `rho` against the normal.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetPatch<P> {
    pub base: P,
    pub rho: f64,
}

pub fn offset<P: Patch>(patch: P, rho: f64) -> OffsetPatch<P> {
    OffsetPatch { base: patch, rho }
}

/// Shape operator `S = I⁻¹ II` of the base at a jet, as `[[s11, s12], [s21, s22]]`
/// so that `N_u = -(s11 X_u + s21 X_v)` and `N_v = -(s12 X_u + s22 X_v)`.
fn shape_operator(jet: &Jet2, normal: Vec3) -> [[f64; 2]; 2] {
    let e = jet.du.dot(jet.du);
    let f = jet.du.dot(jet.dv);
    let g = jet.dv.dot(jet.dv);
    let h11 = normal.dot(jet.duu);
    let h12 = normal.dot(jet.duv);
    let h22 = normal.dot(jet.dvv);
    let det = e * g - f * f;
    [
        [(g * h11 - f * h12) / det, (g * h12 - f * h22) / det],
        [(e * h12 - f * h11) / det, (e * h22 - f * h12) / det],
    ]
}

impl<P: Patch> OffsetPatch<P> {
    /// Position and first derivatives from the base jet and the Weingarten map.
    fn first_order(&self, u: f64, v: f64) -> (Vec3, Vec3, Vec3) {
        let jet = self.base.jet(u, v);
        let n = self.base.unit_normal(u, v, &jet);
        let s = shape_operator(&jet, n);
        let n_u = -(jet.du * s[0][0] + jet.dv * s[1][0]);
        let n_v = -(jet.du * s[0][1] + jet.dv * s[1][1]);
        (
            jet.position - n * self.rho,
            jet.du - n_u * self.rho,
            jet.dv - n_v * self.rho,
        )
    }

    fn step(&self) -> f64 {
        let (a, b) = self.base.u_range();
        OFFSET_STEP_FRACTION * (b - a)
    }
}

impl<P: Patch> Patch for OffsetPatch<P> {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        let (position, du, dv) = self.first_order(u, v);
        let h = self.step();
        let central = |h: f64| {
            let (_, up_u, up_v) = self.first_order(u + h, v);
            let (_, um_u, um_v) = self.first_order(u - h, v);
            let (_, vp_u, vp_v) = self.first_order(u, v + h);
            let (_, vm_u, vm_v) = self.first_order(u, v - h);
            let duu = (up_u - um_u) / (2.0 * h);
            let dvv = (vp_v - vm_v) / (2.0 * h);
            let duv = ((vp_u - vm_u) + (up_v - um_v)) / (4.0 * h);
            (duu, duv, dvv)
        };
        let (a_uu, a_uv, a_vv) = central(h);
        let (b_uu, b_uv, b_vv) = central(0.5 * h);
        Jet2 {
            position,
            du,
            dv,
            duu: (b_uu * 4.0 - a_uu) / 3.0,
            duv: (b_uv * 4.0 - a_uv) / 3.0,
            dvv: (b_vv * 4.0 - a_vv) / 3.0,
        }
    }

    fn u_range(&self) -> (f64, f64) {
        self.base.u_range()
    }

    fn v_range(&self) -> (f64, f64) {
        self.base.v_range()
    }

    fn periodic_v(&self) -> bool {
        self.base.periodic_v()
    }

    fn orientation(&self) -> Orientation {
        self.base.orientation()
    }

    fn position(&self, u: f64, v: f64) -> Vec3 {
        self.base.position(u, v) - self.base.normal(u, v) * self.rho
    }

    fn unit_normal(&self, u: f64, v: f64, _jet: &Jet2) -> Vec3 {
        self.base.normal(u, v)
    }
}

/// `κ / (1 + ρκ)`, or a singular signal.
pub fn offset_curvature(kappa: f64, rho: f64) -> Result<f64> {
    let factor = 1.0 + rho * kappa;
    if libm::fabs(factor) <= EPS_SING {
        return Err(Error::Singular { factor });
    }
    Ok(kappa / factor)
}

/// Which principal factor vanished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SingularFactor {
    Kappa1,
    Kappa2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SingularPoint {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub v: f64,
    pub factor: SingularFactor,
    /// `1 + ρκ` at the point.
    pub value: f64,
}

/// Grid points where `|1 + ρκ₁|` or `|1 + ρκ₂|` is within `eps`.
pub fn singular_locus<P: Patch + ?Sized>(
    patch: &P,
    rho: f64,
    grid: Grid,
    eps: f64,
) -> Result<Vec<SingularPoint>> {
    let us = grid.u_values(patch);
    let vs = grid.v_values(patch);
    let mut out = Vec::new();
    for (i, &u) in us.iter().enumerate() {
        for (j, &v) in vs.iter().enumerate() {
            let c = curvature(&fundamental_forms(patch, u, v)?);
            for (factor, k) in [
                (SingularFactor::Kappa1, c.kappa1),
                (SingularFactor::Kappa2, c.kappa2),
            ] {
                let value = 1.0 + rho * k;
                if libm::fabs(value) < eps {
                    out.push(SingularPoint {
                        i,
                        j,
                        u,
                        v,
                        factor,
                        value,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Offset curvatures recomputed from finite-difference jets of the offset
/// position map. Independent of [`offset_curvature`] and of the analytic
/// offset jets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOffsetCurvature {
    pub h: f64,
    pub k: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

/// Curvature of `X - ρN` at `(u, v)` from Richardson-extrapolated finite
/// differences of positions, with the normal taken from the base.
pub fn fd_offset_curvature<P: Patch + ?Sized>(
    base: &P,
    rho: f64,
    u: f64,
    v: f64,
) -> Result<FdOffsetCurvature> {
    let (a, b) = base.u_range();
    let mut fd = FdPatch::new(
        |u, v| base.position(u, v) - base.normal(u, v) * rho,
        a,
        b,
        base.orientation(),
    );
    fd.extend_outside = true;
    let jet = fd.jet(u, v);
    let forms = forms_with_normal(&jet, base.normal(u, v), false, u, v)?;
    let c = curvature(&forms);
    Ok(FdOffsetCurvature {
        h: c.h,
        k: c.k,
        kappa1: c.kappa1,
        kappa2: c.kappa2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeingartenReport {
    /// `max |(1+H)K̃ - (1+2H)H̃ + H|` over nonsingular samples.
    pub max_residual: f64,
    pub h: f64,
    pub samples: usize,
    pub skipped_singular: usize,
}

/// Linear Weingarten residual of the unit offset of a CMC patch, with `H̃`
/// and `K̃` from finite-difference jets of the offset positions. Points with
/// `|1 + κᵢ| <= eps_skip` are skipped.
pub fn weingarten_residual<P: Patch + ?Sized>(
    patch: &P,
    grid: Grid,
    eps_skip: f64,
) -> Result<WeingartenReport> {
    let us = grid.u_values(patch);
    let vs = grid.v_values(patch);
    let mut hs = Vec::with_capacity(us.len() * vs.len());
    let mut pts = Vec::new();
    for &u in &us {
        for &v in &vs {
            let c = curvature(&fundamental_forms(patch, u, v)?);
            hs.push(c.h);
            pts.push((u, v, c));
        }
    }
    let h = hs.iter().sum::<f64>() / hs.len() as f64;
    let spread = hs.iter().fold(0.0f64, |m, x| m.max(libm::fabs(x - h)));
    if spread > 1e-6 {
        return Err(Error::NotCurvatureCoordinate(alloc::format!(
            "mean curvature varies by {spread:e}"
        )));
    }
    if libm::fabs(h + 1.0) < 1e-9 {
        return Err(Error::ExcludedCase("H = -1 (sphere)".into()));
    }
    let mut worst = 0.0f64;
    let mut used = 0;
    let mut skipped = 0;
    for (u, v, c) in pts {
        if libm::fabs(1.0 + c.kappa1) <= eps_skip || libm::fabs(1.0 + c.kappa2) <= eps_skip {
            skipped += 1;
            continue;
        }
        let t = fd_offset_curvature(patch, 1.0, u, v)?;
        let r = libm::fabs((1.0 + h) * t.k - (1.0 + 2.0 * h) * t.h + h);
        worst = worst.max(r);
        used += 1;
    }
    if used == 0 {
        return Err(Error::EmptySample);
    }
    Ok(WeingartenReport {
        max_residual: worst,
        h,
        samples: used,
        skipped_singular: skipped,
    })
}

/// `max |κ̃ᵢ(fd) - κᵢ/(1+ρκᵢ)|` over grid points with `|1 + ρκᵢ| > min_factor`.
/// Returns `(max error, samples compared)`.
pub fn offset_curvature_law_error<P: Patch + ?Sized>(
    patch: &P,
    rho: f64,
    grid: Grid,
    min_factor: f64,
) -> Result<(f64, usize)> {
    let us = grid.u_values(patch);
    let vs = grid.v_values(patch);
    let mut worst = 0.0f64;
    let mut n = 0;
    for &u in &us {
        for &v in &vs {
            let c = curvature(&fundamental_forms(patch, u, v)?);
            if libm::fabs(1.0 + rho * c.kappa1) <= min_factor
                || libm::fabs(1.0 + rho * c.kappa2) <= min_factor
            {
                continue;
            }
            let t = fd_offset_curvature(patch, rho, u, v)?;
            let k1 = offset_curvature(c.kappa1, rho)?;
            let k2 = offset_curvature(c.kappa2, rho)?;
            worst = worst
                .max(libm::fabs(t.kappa1 - k1))
                .max(libm::fabs(t.kappa2 - k2));
            n += 1;
        }
    }
    Ok((worst, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{curvature_at, Catenoid, ConformalSphere, Cylinder};

    #[test]
    fn offset_curvature_examples() {
        assert_eq!(offset_curvature(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(offset_curvature(-2.0, 1.0).unwrap(), 2.0);
        assert!(matches!(
            offset_curvature(-1.0, 1.0),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn sphere_collapses_to_center() {
        let s = ConformalSphere {
            center: Vec3::new(0.3, -0.2, 1.0),
            radius: 1.0,
            u_min: -2.0,
            u_max: 2.0,
        };
        let o = offset(s, 1.0);
        for (u, v) in [(0.0, 0.0), (1.2, 2.0), (-1.9, 5.0)] {
            assert!((o.position(u, v) - s.center).norm() < 1e-14);
        }
        let locus = singular_locus(&s, 1.0, Grid::new(5, 6), EPS_SING).unwrap();
        assert_eq!(locus.len(), 2 * 30);
    }

    #[test]
    fn cylinder_offset_radius() {
        let c = Cylinder::new(2.0, -1.0, 1.0);
        let o = offset(c, 1.0);
        for (u, v) in [(0.0, 0.0), (0.5, 2.0)] {
            let p = o.position(u, v);
            assert!(((p.x * p.x + p.y * p.y).sqrt() - 1.0).abs() < 1e-14);
            let k = curvature_at(&o, u, v).unwrap();
            assert!((k.kappa2 + 1.0).abs() < 1e-8 && k.kappa1.abs() < 1e-8);
        }
        assert!(singular_locus(&c, 1.0, Grid::new(8, 8), EPS_SING)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn analytic_offset_jets_match_law() {
        let cat = Catenoid::new(0.6, -0.8, 0.8);
        let o = offset(cat, 1.0);
        for (u, v) in [(0.0, 0.0), (0.3, 1.0), (-0.5, 4.0)] {
            let base = curvature_at(&cat, u, v).unwrap();
            let t = curvature_at(&o, u, v).unwrap();
            assert!(
                (t.kappa1 - base.kappa1 / (1.0 + base.kappa1)).abs() < 1e-7,
                "{t:?}"
            );
            assert!((t.kappa2 - base.kappa2 / (1.0 + base.kappa2)).abs() < 1e-7);
            assert!((t.normal - base.normal).norm() < 1e-15);
        }
    }

    #[test]
    fn fd_law_and_weingarten_on_catenoid() {
        let cat = Catenoid::new(0.42, -0.9, 0.9);
        let (err, n) = offset_curvature_law_error(&cat, 1.0, Grid::new(12, 8), 0.1).unwrap();
        assert!(n > 0 && err < 1e-5, "{err}");
        let w = weingarten_residual(&cat, Grid::new(12, 8), EPS_SING).unwrap();
        assert!(w.max_residual < 1e-6, "{w:?}");
        assert_eq!(w.skipped_singular, 0);
    }

    #[test]
    fn weingarten_rejects_sphere() {
        let s = ConformalSphere::unit(-1.0, 1.0);
        assert!(matches!(
            weingarten_residual(&s, Grid::new(6, 6), EPS_SING),
            Err(Error::ExcludedCase(_))
        ));
    }

    #[test]
    fn offset_round_trip() {
        let cat = Catenoid::new(0.5, -0.7, 0.7);
        let back = offset(offset(cat, 0.3), -0.3);
        for (u, v) in [(0.0, 0.0), (0.6, 1.0), (-0.6, 3.0)] {
            assert!((back.position(u, v) - cat.position(u, v)).norm() < 1e-12);
        }
    }

    proptest::proptest! {
        #[test]
        fn offset_curvature_inverts(k in -5.0..5.0f64, rho in -2.0..2.0f64) {
            proptest::prop_assume!((1.0 + rho * k).abs() > 0.05);
            let back = offset_curvature(offset_curvature(k, rho).unwrap(), -rho).unwrap();
            proptest::prop_assert!((back - k).abs() < 1e-9 * (1.0 + k.abs()));
        }
    }
}
