use alloc::vec::Vec;

use super::{curvature, fundamental_forms, Patch};
use crate::{Error, Result, Vec3};

/// Direction in which graph heights are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphSide {
    /// Along the patch normal `N`; the graph's mean curvature then equals the
    /// patch's.
    Normal,
    /// Along `-N`.
    AgainstNormal,
}

/// Heights of a patch over its tangent plane at a point, on a square grid in
/// principal axes: `x` along the `kappa1` direction, `y` along `N x e1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSamples {
    pub origin: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    /// Unit direction in which heights are measured.
    pub up: Vec3,
    pub spacing: f64,
    pub n_half: usize,
    /// Row-major over `x` index then `y` index, each in `-n_half..=n_half`.
    pub values: Vec<f64>,
}

/// Central-difference derivatives of a graph at a grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphDerivs {
    pub fx: f64,
    pub fy: f64,
    pub fxx: f64,
    pub fxy: f64,
    pub fyy: f64,
}

impl GraphDerivs {
    /// `W = sqrt(1 + fx² + fy²)`.
    pub fn w(&self) -> f64 {
        libm::sqrt(1.0 + self.fx * self.fx + self.fy * self.fy)
    }
}

impl GraphSamples {
    fn side(&self) -> usize {
        2 * self.n_half + 1
    }

    pub fn value(&self, ix: isize, iy: isize) -> f64 {
        let n = self.n_half as isize;
        self.values[((ix + n) as usize) * self.side() + (iy + n) as usize]
    }

    /// Node coordinates in the tangent plane.
    pub fn coords(&self, ix: isize, iy: isize) -> (f64, f64) {
        (ix as f64 * self.spacing, iy as f64 * self.spacing)
    }

    /// Second-order central differences at `(ix, iy)`; needs `|ix|, |iy| < n_half`.
    pub fn derivs_at(&self, ix: isize, iy: isize) -> GraphDerivs {
        let h = self.spacing;
        let f = |a: isize, b: isize| self.value(ix + a, iy + b);
        GraphDerivs {
            fx: (f(1, 0) - f(-1, 0)) / (2.0 * h),
            fy: (f(0, 1) - f(0, -1)) / (2.0 * h),
            fxx: (f(1, 0) - 2.0 * f(0, 0) + f(-1, 0)) / (h * h),
            fyy: (f(0, 1) - 2.0 * f(0, 0) + f(0, -1)) / (h * h),
            fxy: (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4.0 * h * h),
        }
    }

    /// Interior node indices (those where [`Self::derivs_at`] applies).
    pub fn interior(&self) -> impl Iterator<Item = (isize, isize)> {
        let m = self.n_half as isize - 1;
        (-m..=m).flat_map(move |i| (-m..=m).map(move |j| (i, j)))
    }

    /// Analytic-style evaluation: heights from a closed-form function, for
    /// negative controls and tests.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(f: F, spacing: f64, n_half: usize) -> Self {
        let n = n_half as isize;
        let mut values = Vec::with_capacity((2 * n_half + 1) * (2 * n_half + 1));
        for i in -n..=n {
            for j in -n..=n {
                values.push(f(i as f64 * spacing, j as f64 * spacing));
            }
        }
        Self {
            origin: Vec3::ZERO,
            e1: Vec3::X,
            e2: Vec3::Y,
            up: Vec3::Z,
            spacing,
            n_half,
            values,
        }
    }
}

/// Principal direction of `kappa1` at `(u, v)` as a unit tangent vector.
fn principal_frame<P: Patch + ?Sized>(patch: &P, u: f64, v: f64) -> Result<(Vec3, Vec3, Vec3)> {
    let forms = fundamental_forms(patch, u, v)?;
    let cs = curvature(&forms);
    let jet = patch.jet(u, v);
    let (e, f, g) = (forms.e, forms.f, forms.g);
    let (h11, h12, h22) = (forms.h11, forms.h12, forms.h22);
    let det = e * g - f * f;
    let s11 = (g * h11 - f * h12) / det;
    let s12 = (g * h12 - f * h22) / det;
    let s21 = (e * h12 - f * h11) / det;
    let s22 = (e * h22 - f * h12) / det;
    let mu = cs.kappa1;
    let (p, q) = if libm::fabs(s12) + libm::fabs(mu - s11) >= libm::fabs(mu - s22) + libm::fabs(s21)
    {
        (s12, mu - s11)
    } else {
        (mu - s22, s21)
    };
    let t = jet.du * p + jet.dv * q;
    let e1 = if t.norm() > 1e-12 * jet.du.norm() {
        t.normalized()
    } else {
        jet.du.normalized()
    };
    let n = cs.normal;
    let e1 = (e1 - n * e1.dot(n)).normalized();
    let e2 = n.cross(e1);
    Ok((e1, e2, n))
}

fn try_graph<P: Patch + ?Sized>(
    patch: &P,
    u: f64,
    v: f64,
    radius: f64,
    n_half: usize,
    frame: (Vec3, Vec3, Vec3),
    up: Vec3,
) -> Option<Vec<f64>> {
    let (e1, e2, _) = frame;
    let origin = patch.position(u, v);
    let (u_lo, u_hi) = patch.u_range();
    let n = n_half as isize;
    let side = 2 * n_half + 1;
    let h = radius / n_half as f64;
    let j0 = patch.jet(u, v);
    let det0 = j0.du.dot(e1) * j0.dv.dot(e2) - j0.dv.dot(e1) * j0.du.dot(e2);
    let mut params = alloc::vec![(f64::NAN, f64::NAN); side * side];
    let mut values = alloc::vec![0.0; side * side];
    let idx = |i: isize, j: isize| ((i + n) as usize) * side + (j + n) as usize;
    params[idx(0, 0)] = (u, v);
    for ring in 0..=n {
        for i in -ring..=ring {
            for j in -ring..=ring {
                if i.abs().max(j.abs()) != ring {
                    continue;
                }
                let (mut pu, mut pv) = params[idx(i - i.signum(), j - j.signum())];
                let (x, y) = (i as f64 * h, j as f64 * h);
                let mut converged = false;
                for _ in 0..60 {
                    let jet = patch.jet(pu, pv);
                    let d = jet.position - origin;
                    let rx = d.dot(e1) - x;
                    let ry = d.dot(e2) - y;
                    let a = jet.du.dot(e1);
                    let b = jet.dv.dot(e1);
                    let c = jet.du.dot(e2);
                    let dd = jet.dv.dot(e2);
                    let det = a * dd - b * c;
                    if !(libm::fabs(det) > 0.05 * libm::fabs(det0)) || det.signum() != det0.signum()
                    {
                        return None;
                    }
                    let du = (dd * rx - b * ry) / det;
                    let dv = (-c * rx + a * ry) / det;
                    pu -= du;
                    pv -= dv;
                    if libm::fabs(rx) + libm::fabs(ry) < 1e-13 * (1.0 + radius) {
                        converged = true;
                        break;
                    }
                }
                if !converged || pu < u_lo - 1e-12 || pu > u_hi + 1e-12 {
                    return None;
                }
                params[idx(i, j)] = (pu, pv);
                values[idx(i, j)] = (patch.position(pu, pv) - origin).dot(up);
            }
        }
    }
    Some(values)
}

/// Height function of `patch` over its tangent plane at `(u, v)`, sampled
/// on a `(2 n_half + 1)²` square grid of half-width `radius` in principal
/// axes. Fails with the largest working radius (found by halving) when the
/// projection is not injective at `radius`.
pub fn local_graph<P: Patch + ?Sized>(
    patch: &P,
    u: f64,
    v: f64,
    radius: f64,
    n_half: usize,
    side: GraphSide,
) -> Result<GraphSamples> {
    if n_half < 2 {
        return Err(Error::Config("local_graph needs n_half >= 2".into()));
    }
    let (u_lo, u_hi) = patch.u_range();
    if !(u > u_lo && u < u_hi) {
        return Err(Error::Input(alloc::format!(
            "u = {u} is not interior to [{u_lo}, {u_hi}]"
        )));
    }
    let frame = principal_frame(patch, u, v)?;
    let up = match side {
        GraphSide::Normal => frame.2,
        GraphSide::AgainstNormal => -frame.2,
    };
    if let Some(values) = try_graph(patch, u, v, radius, n_half, frame, up) {
        return Ok(GraphSamples {
            origin: patch.position(u, v),
            e1: frame.0,
            e2: frame.1,
            up,
            spacing: radius / n_half as f64,
            n_half,
            values,
        });
    }
    let mut r = radius;
    for _ in 0..40 {
        r *= 0.5;
        if try_graph(patch, u, v, r, n_half, frame, up).is_some() {
            return Err(Error::ShrinkRadius { max_radius: r });
        }
    }
    Err(Error::ShrinkRadius { max_radius: 0.0 })
}
