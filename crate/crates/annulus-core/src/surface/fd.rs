use super::{Jet2, Orientation, Patch};
use crate::Vec3;

/// Jets by Richardson-extrapolated finite differences of a position map.
///
/// Central stencils are used wherever they stay inside `[u0, u1]`; closer to
/// an end the `u` derivatives switch to one-sided second-order stencils
/// (also Richardson-extrapolated). `v` wraps when the patch is periodic.
pub struct FdPatch<F> {
    pub position_fn: F,
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub periodic: bool,
    pub conformal: bool,
    pub orientation: Orientation,
    /// Base step (parameter units) in `u` and `v`.
    pub step: f64,
    /// Allow central stencils to reach past the `u` ends.
    pub extend_outside: bool,
}

/// Relative base step used by [`FdPatch::new`].
pub const FD_STEP_FRACTION: f64 = 1e-3;

impl<F: Fn(f64, f64) -> Vec3> FdPatch<F> {
    /// Periodic patch on `[u_min, u_max] x [0, 2π)` with step
    /// `FD_STEP_FRACTION * (u_max - u_min)`.
    pub fn new(position_fn: F, u_min: f64, u_max: f64, orientation: Orientation) -> Self {
        Self {
            position_fn,
            u_min,
            u_max,
            v_min: 0.0,
            v_max: core::f64::consts::TAU,
            periodic: true,
            conformal: false,
            orientation,
            step: FD_STEP_FRACTION * (u_max - u_min),
            extend_outside: false,
        }
    }

    fn p(&self, u: f64, v: f64) -> Vec3 {
        (self.position_fn)(u, v)
    }

    /// `u` stencil direction: 0 central, +1 forward, -1 backward.
    fn u_side(&self, u: f64) -> f64 {
        if self.extend_outside {
            return 0.0;
        }
        let reach = 2.0 * self.step;
        if u - reach < self.u_min - 1e-15 {
            1.0
        } else if u + reach > self.u_max + 1e-15 {
            -1.0
        } else {
            0.0
        }
    }

    /// First and second derivative of `g` at 0 with step `h`, central or
    /// one-sided (`side`), Richardson-extrapolated.
    fn derivs<G: Fn(f64) -> Vec3>(g: &G, h: f64, side: f64) -> (Vec3, Vec3) {
        let raw = |h: f64| -> (Vec3, Vec3) {
            if side == 0.0 {
                let (m, c, p) = (g(-h), g(0.0), g(h));
                ((p - m) / (2.0 * h), (p - c * 2.0 + m) / (h * h))
            } else {
                let s = side;
                let (f0, f1, f2, f3) = (g(0.0), g(s * h), g(2.0 * s * h), g(3.0 * s * h));
                let d1 = (f0 * -3.0 + f1 * 4.0 - f2) / (2.0 * h) * s;
                let d2 = (f0 * 2.0 - f1 * 5.0 + f2 * 4.0 - f3) / (h * h);
                (d1, d2)
            }
        };
        let (a1, a2) = raw(h);
        let (b1, b2) = raw(0.5 * h);
        ((b1 * 4.0 - a1) / 3.0, (b2 * 4.0 - a2) / 3.0)
    }
}

impl<F: Fn(f64, f64) -> Vec3> Patch for FdPatch<F> {
    fn jet(&self, u: f64, v: f64) -> Jet2 {
        let h = self.step;
        let side = self.u_side(u);
        let along_u = |s: f64| self.p(u + s, v);
        let along_v = |s: f64| self.p(u, v + s);
        let (du, duu) = Self::derivs(&along_u, h, side);
        let (dv, dvv) = Self::derivs(&along_v, h, 0.0);
        // Mixed derivative: u-derivative of the central v-derivative.
        let dv_at = |s: f64| {
            let g = |t: f64| self.p(u + s, v + t);
            Self::derivs(&g, h, 0.0).0
        };
        let (duv, _) = Self::derivs(&dv_at, h, side);
        Jet2 {
            position: self.p(u, v),
            du,
            dv,
            duu,
            duv,
            dvv,
        }
    }

    fn u_range(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    fn v_range(&self) -> (f64, f64) {
        (self.v_min, self.v_max)
    }

    fn periodic_v(&self) -> bool {
        self.periodic
    }

    fn conformal(&self) -> bool {
        self.conformal
    }

    fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn position(&self, u: f64, v: f64) -> Vec3 {
        self.p(u, v)
    }
}
