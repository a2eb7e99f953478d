//! The PDE satisfied by local graphs of the unit offset, and its
//! ellipticity.
//!
//! For a graph `f` measured along the offset normal, with
//! `W = sqrt(1 + fx² + fy²)` and `Q = (1+fy²) fxx - 2 fx fy fxy + (1+fx²) fyy`,
//! the offset's mean and Gaussian curvature are `Q / 2W³` and
//! `(fxx fyy - fxy²) / W⁴`. The linear Weingarten relation then reads
//! `2(1+H)(fxx fyy - fxy²) + 2H W⁴ = (1+2H) Q W`, which is
//! `det(2(1+H) D²f + A(Df)) = W⁴` with `A = -(1+2H) W [[1+fx², fx fy], [fx fy, 1+fy²]]`.

use crate::surface::{GraphDerivs, GraphSamples};
use crate::{Error, Result};

use super::MARGIN_GUARD;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PdeResidual {
    /// `max |LHS - RHS|` over interior nodes.
    pub max: f64,
    pub at_center: f64,
}

fn parts(d: &GraphDerivs) -> (f64, f64, f64, f64) {
    let w2 = 1.0 + d.fx * d.fx + d.fy * d.fy;
    let q = (1.0 + d.fy * d.fy) * d.fxx - 2.0 * d.fx * d.fy * d.fxy + (1.0 + d.fx * d.fx) * d.fyy;
    let det = d.fxx * d.fyy - d.fxy * d.fxy;
    (w2, libm::sqrt(w2), q, det)
}

/// Residual of `2(1+H)(fxx fyy - fxy²) + 2H(1+fx²+fy²)² = (1+2H) Q W` over
/// the interior nodes of `f`.
pub fn pde_residual(f: &GraphSamples, h: f64) -> Result<PdeResidual> {
    if f.n_half < 2 {
        return Err(Error::Config(
            "graph needs at least two nodes on each side of the center".into(),
        ));
    }
    let mut out = PdeResidual {
        max: 0.0,
        at_center: 0.0,
    };
    for (i, j) in f.interior() {
        let d = f.derivs_at(i, j);
        let (w2, w, q, det) = parts(&d);
        let lhs = 2.0 * (1.0 + h) * det + 2.0 * h * w2 * w2;
        let rhs = (1.0 + 2.0 * h) * q * w;
        let r = libm::fabs(lhs - rhs);
        out.max = out.max.max(r);
        if i == 0 && j == 0 {
            out.at_center = r;
        }
    }
    Ok(out)
}

/// Which argument certified ellipticity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Certification {
    /// Offset mean curvature above 1 (`Q > 2W³`) and a positive trace.
    MeanCurvatureAboveOne,
    /// Offset mean curvature above `H/(1+H)` (`Q > 2H/(1+H) W³`), with the
    /// sign-flipped operator `-2(1+H)D²f - A` positive definite.
    MeanCurvatureAboveRatio,
    /// `-1 < H < -1/2`: certified without a curvature bound.
    Unconditional,
    /// Positive trace without the mean-curvature bound.
    DirectTrace,
    NotCertified,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EllipticityReport {
    /// Extremes of `2(1+H)Δf - (1+2H)(2 + |∇f|²)W` over interior nodes.
    pub trace_min: f64,
    pub trace_max: f64,
    pub trace_center: f64,
    /// `min (Q - 2W³)`.
    pub above_one_margin: f64,
    /// `min (Q - 2H/(1+H) W³)`.
    pub above_ratio_margin: f64,
    /// `min (Δf - (1+2H)/(2(1+H)) (2 + |∇f|²) W)`.
    pub flipped_trace_min: f64,
    pub certified_by: Certification,
    /// The quantity that certified (or failed to certify); positive when
    /// elliptic.
    pub margin: f64,
    pub is_elliptic: bool,
}

/// Ellipticity of the offset PDE at the interior nodes of `f`. Since the
/// determinant of `2(1+H)D²f + A` equals `W⁴ > 0`, definiteness follows
/// from the sign of the trace.
pub fn ellipticity_check(f: &GraphSamples, h: f64) -> EllipticityReport {
    let ratio = h / (1.0 + h);
    let flip = (1.0 + 2.0 * h) / (2.0 * (1.0 + h));
    let mut r = EllipticityReport {
        trace_min: f64::INFINITY,
        trace_max: f64::NEG_INFINITY,
        trace_center: f64::NAN,
        above_one_margin: f64::INFINITY,
        above_ratio_margin: f64::INFINITY,
        flipped_trace_min: f64::INFINITY,
        certified_by: Certification::NotCertified,
        margin: f64::NEG_INFINITY,
        is_elliptic: false,
    };
    for (i, j) in f.interior() {
        let d = f.derivs_at(i, j);
        let (w2, w, q, _) = parts(&d);
        let lap = d.fxx + d.fyy;
        let grad = w2 - 1.0;
        let trace = 2.0 * (1.0 + h) * lap - (1.0 + 2.0 * h) * (2.0 + grad) * w;
        r.trace_min = r.trace_min.min(trace);
        r.trace_max = r.trace_max.max(trace);
        if i == 0 && j == 0 {
            r.trace_center = trace;
        }
        let w3 = w2 * w;
        r.above_one_margin = r.above_one_margin.min(q - 2.0 * w3);
        r.above_ratio_margin = r.above_ratio_margin.min(q - 2.0 * ratio * w3);
        r.flipped_trace_min = r.flipped_trace_min.min(lap - flip * (2.0 + grad) * w);
    }
    let g = MARGIN_GUARD;
    if libm::fabs(1.0 + h) < 1e-12 {
        return r;
    }
    if h > -1.0 && h < -0.5 {
        r.certified_by = Certification::Unconditional;
        r.margin = -r.trace_max;
    } else if h > -1.0 {
        if r.above_one_margin > g && r.trace_min > g {
            r.certified_by = Certification::MeanCurvatureAboveOne;
            r.margin = r.above_one_margin.min(r.trace_min);
        } else if r.trace_min > g {
            r.certified_by = Certification::DirectTrace;
            r.margin = r.trace_min;
        } else {
            r.margin = r.trace_min;
        }
    } else {
        r.margin = r.above_ratio_margin.min(r.flipped_trace_min);
        if r.margin > g {
            r.certified_by = Certification::MeanCurvatureAboveRatio;
        }
    }
    r.is_elliptic = r.certified_by != Certification::NotCertified;
    r
}
