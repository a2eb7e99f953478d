//! Moving-plane reflection on sampled surfaces and recovery of a rotation
//! axis from a point cloud.
//!
//! For a unit direction `n` orthogonal to a candidate axis, the plane
//! `Π^l = {x : n·(x - a) = l}` cuts the cloud into a far side (`s > l`) and a
//! near side. Reflecting the deep part of the far side across `Π^l` and asking
//! whether it comes within the contact tolerance of the near side gives a
//! discrete touch predicate; `l_touch` is the smallest `l ≥ 0` where it holds.
//! A cloud that is rotationally symmetric about the axis has `l_touch = 0` in
//! every direction and reflects onto itself across every plane through the
//! axis.

mod grid;

use alloc::vec::Vec;

use crate::num::{nelder_mead, sym_eigen3};
use crate::surface::Patch;
use crate::{Error, Line, Plane, Result, Vec3};

pub use grid::SpatialGrid;

/// Fine sampling used to measure meridian and parallel lengths.
const MEASURE_U: usize = 2048;
const MEASURE_V: usize = 256;
const BISECT_ITERS: usize = 40;
/// Largest subsample driving the axis refinement.
const REFINE_SAMPLES: usize = 2000;
/// Mirror-image distances beyond this many pitches count as this many.
const REFINE_CAP_PITCHES: f64 = 10.0;
const REFINE_THETAS: usize = 8;
/// Caps shallower than this many pitches (or a quarter of the cloud's width
/// along the sweep direction, if smaller) are ignored: a tiny cap and its
/// mirror image always nearly agree.
const MIN_CAP_PITCHES: f64 = 8.0;

/// Sampled surface. `markers` index samples on the surface boundary or at
/// singular points; touches near them are classified as boundary touches.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointCloud {
    pub points: Vec<Vec3>,
    pub normals: Option<Vec<Vec3>>,
    pub markers: Vec<usize>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec3>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(k) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::Input(alloc::format!("point {k} is not finite")));
        }
        Ok(Self {
            points,
            normals: None,
            markers: Vec::new(),
        })
    }

    pub fn with_normals(mut self, normals: Vec<Vec3>) -> Result<Self> {
        if normals.len() != self.points.len() {
            return Err(Error::Input("normal count differs from point count".into()));
        }
        self.normals = Some(normals);
        Ok(self)
    }

    pub fn with_markers(mut self, markers: Vec<usize>) -> Result<Self> {
        if markers.iter().any(|&m| m >= self.points.len()) {
            return Err(Error::Input("marker index out of range".into()));
        }
        self.markers = markers;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> Vec3 {
        let sum = self
            .points
            .iter()
            .fold(Vec3::new(0.0, 0.0, 0.0), |a, &p| a + p);
        sum / self.points.len() as f64
    }

    /// Largest distance of any sample from the centroid.
    pub fn radius(&self) -> f64 {
        let c = self.centroid();
        self.points.iter().map(|p| p.dist(c)).fold(0.0, f64::max)
    }

    /// Image under `x ↦ R x + t`.
    pub fn transformed(&self, rot: &[[f64; 3]; 3], shift: Vec3) -> Self {
        let apply = |p: Vec3| {
            Vec3::new(
                rot[0][0] * p.x + rot[0][1] * p.y + rot[0][2] * p.z,
                rot[1][0] * p.x + rot[1][1] * p.y + rot[1][2] * p.z,
                rot[2][0] * p.x + rot[2][1] * p.y + rot[2][2] * p.z,
            )
        };
        Self {
            points: self.points.iter().map(|&p| apply(p) + shift).collect(),
            normals: self
                .normals
                .as_ref()
                .map(|ns| ns.iter().map(|&n| apply(n)).collect()),
            markers: self.markers.clone(),
        }
    }

    /// Roughly uniform samples of a `v`-periodic patch at arclength spacing
    /// `spacing`. Rows whose parallel is shorter than `spacing` collapse to a
    /// single sample; the first and last rows are recorded as markers.
    pub fn from_patch<P: Patch + ?Sized>(patch: &P, spacing: f64) -> Result<Self> {
        if !patch.periodic_v() {
            return Err(Error::Config(
                "uniform sampling needs a v-periodic patch".into(),
            ));
        }
        if !(spacing > 0.0) {
            return Err(Error::Config("sampling spacing must be positive".into()));
        }
        let (u0, u1) = patch.u_range();
        let (v0, v1) = patch.v_range();
        let eval = |u: f64, v: f64| {
            let p = patch.position(u, v);
            if p.is_finite() {
                Ok(p)
            } else {
                Err(Error::DegeneratePoint { u, v })
            }
        };
        let mut cumulative = Vec::with_capacity(MEASURE_U + 1);
        let mut prev = eval(u0, v0)?;
        let mut total = 0.0;
        cumulative.push(0.0);
        for k in 1..=MEASURE_U {
            let p = eval(u0 + (u1 - u0) * k as f64 / MEASURE_U as f64, v0)?;
            total += p.dist(prev);
            cumulative.push(total);
            prev = p;
        }
        let rows = (libm::round(total / spacing) as usize).max(1) + 1;
        let mut points = Vec::new();
        let mut markers = Vec::new();
        let mut k = 0;
        for i in 0..rows {
            let target = total * i as f64 / (rows - 1) as f64;
            while k + 1 < MEASURE_U && cumulative[k + 1] < target {
                k += 1;
            }
            let span = cumulative[k + 1] - cumulative[k];
            let frac = if span > 0.0 {
                ((target - cumulative[k]) / span).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let u = u0 + (u1 - u0) * (k as f64 + frac) / MEASURE_U as f64;
            let mut circ = 0.0;
            let mut q = eval(u, v0)?;
            for j in 1..=MEASURE_V {
                let p = eval(u, v0 + (v1 - v0) * j as f64 / MEASURE_V as f64)?;
                circ += p.dist(q);
                q = p;
            }
            let cols = (libm::round(circ / spacing) as usize).max(1);
            let stagger = if i % 2 == 1 { 0.5 } else { 0.0 };
            let first = points.len();
            for j in 0..cols {
                let v = v0 + (v1 - v0) * (j as f64 + stagger) / cols as f64;
                points.push(eval(u, v)?);
            }
            if i == 0 || i == rows - 1 {
                markers.extend(first..points.len());
            }
        }
        Self::new(points)?.with_markers(markers)
    }
}

/// Mirror image of `cloud` across `plane`.
pub fn reflect(cloud: &PointCloud, plane: &Plane) -> PointCloud {
    PointCloud {
        points: cloud.points.iter().map(|&p| plane.reflect(p)).collect(),
        normals: cloud
            .normals
            .as_ref()
            .map(|ns| ns.iter().map(|&n| plane.reflect_dir(n)).collect()),
        markers: cloud.markers.clone(),
    }
}

fn bbox_diagonal(points: &[Vec3]) -> f64 {
    let mut lo = points[0];
    let mut hi = points[0];
    for p in points {
        lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
        hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
    }
    hi.dist(lo)
}

/// Bucket size giving a few points per occupied cell for a surface sample.
fn default_cell(points: &[Vec3]) -> f64 {
    let diag = bbox_diagonal(points).max(1e-12);
    diag / libm::sqrt(points.len() as f64).max(1.0)
}

/// `max_{a ∈ from} dist(a, to)` against a prebuilt grid over `to`.
fn directed(from: &[Vec3], to: &SpatialGrid<'_>) -> f64 {
    from.iter()
        .filter_map(|&p| to.nearest(p, |_| true))
        .map(|(_, d)| d)
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two samples.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let ga = SpatialGrid::new(&a.points, default_cell(&a.points));
    let gb = SpatialGrid::new(&b.points, default_cell(&b.points));
    Ok(directed(&a.points, &gb).max(directed(&b.points, &ga)))
}

/// Median distance from a sample to its nearest distinct neighbor.
pub fn sampling_pitch(cloud: &PointCloud) -> Result<f64> {
    let pts = &cloud.points;
    let grid = SpatialGrid::new(pts, default_cell(pts));
    let mut d: Vec<f64> = pts
        .iter()
        .filter_map(|&p| grid.nearest(p, |j| pts[j] != p).map(|(_, d)| d))
        .collect();
    if d.is_empty() {
        return Err(Error::EmptySample);
    }
    d.sort_by(f64::total_cmp);
    Ok(d[d.len() / 2])
}

/// How the reflected cap first met the near side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TouchKind {
    Interior,
    Boundary,
    /// No touch for `l ∈ [0, L]`; the opposite direction `θ + π` is the one
    /// to sweep.
    None,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepResult {
    pub theta: f64,
    pub l_touch: Option<f64>,
    pub touch_kind: TouchKind,
    /// Hausdorff distance between the cloud and its mirror image across the
    /// plane through the axis.
    pub residual: f64,
    /// Reflected far-side sample and the near-side sample it met.
    pub witness: Option<(Vec3, Vec3)>,
}

/// Plane normal `cos θ e₁ + sin θ e₂` for an orthonormal frame around the
/// axis. `e₁` is the axis' `any_perpendicular`, so the frame is a function of
/// the axis direction alone.
pub fn sweep_normal(axis: &Line, theta: f64) -> Vec3 {
    let e1 = axis.dir.any_perpendicular().normalized();
    let e2 = axis.dir.cross(e1);
    e1 * libm::cos(theta) + e2 * libm::sin(theta)
}

/// Cloud with its search structures, reused across many sweeps.
#[derive(Debug, Clone)]
pub struct Sweeper<'a> {
    cloud: &'a PointCloud,
    grid: SpatialGrid<'a>,
    pitch: f64,
}

impl<'a> Sweeper<'a> {
    pub fn new(cloud: &'a PointCloud) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::EmptySample);
        }
        let pitch = sampling_pitch(cloud)?;
        let grid = SpatialGrid::new(&cloud.points, default_cell(&cloud.points));
        Ok(Self { cloud, grid, pitch })
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// Hausdorff distance between the cloud and its reflection in `plane`.
    /// Reflection is an isometric involution, so one direction suffices.
    pub fn reflection_residual(&self, plane: &Plane) -> f64 {
        self.cloud
            .points
            .iter()
            .map(|&p| {
                self.grid
                    .nearest(plane.reflect(p), |_| true)
                    .map_or(f64::INFINITY, |(_, d)| d)
            })
            .fold(0.0, f64::max)
    }

    /// First deep far-side sample whose mirror image lands within `tol` of a
    /// near-side sample. Deep means farther than half the cap depth from the
    /// plane; shallower samples sit next to the cut where the cap and its
    /// image always nearly agree.
    fn touch(&self, s: &[f64], n: Vec3, l: f64, tol: f64) -> Option<(usize, usize)> {
        let s_max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s_min = s.iter().copied().fold(f64::INFINITY, f64::min);
        let depth = s_max - l;
        if depth <= (MIN_CAP_PITCHES * self.pitch).min(0.25 * (s_max - s_min)) {
            return None;
        }
        let band = 0.5 * depth;
        s.iter()
            .enumerate()
            .filter(|&(_, &si)| si - l > band)
            .find_map(|(i, &si)| {
                let q = self.cloud.points[i] - n * (2.0 * (si - l));
                self.grid.any_within(q, tol, |j| s[j] < l).map(|j| (i, j))
            })
    }

    /// Moving-plane sweep in direction `θ` around `axis`, starting from the
    /// plane at distance `l_max`, which must miss the cloud.
    pub fn sweep(&self, axis: &Line, theta: f64, l_max: f64, tol: f64) -> Result<SweepResult> {
        if !(tol > 0.0) {
            return Err(Error::Config("contact tolerance must be positive".into()));
        }
        let n = sweep_normal(axis, theta);
        let s: Vec<f64> = self
            .cloud
            .points
            .iter()
            .map(|&p| n.dot(p - axis.point))
            .collect();
        if s.iter().any(|&si| si >= l_max) {
            return Err(Error::InvalidSweepDistance { l: l_max });
        }
        let residual = self.reflection_residual(&Plane::through(axis.point, n));
        // The scan grid depends only on the cloud, which keeps l_touch
        // monotone in the tolerance.
        let step = 0.25 * self.pitch;
        let steps = libm::ceil(l_max / step) as usize;
        let mut found = None;
        for k in 0..=steps {
            let l = (k as f64 * step).min(l_max);
            if let Some(pair) = self.touch(&s, n, l, tol) {
                found = Some((k, l, pair));
                break;
            }
        }
        let Some((k, mut hi, mut pair)) = found else {
            return Ok(SweepResult {
                theta,
                l_touch: None,
                touch_kind: TouchKind::None,
                residual,
                witness: None,
            });
        };
        if k > 0 {
            let mut lo = (k - 1) as f64 * step;
            for _ in 0..BISECT_ITERS {
                let mid = 0.5 * (lo + hi);
                match self.touch(&s, n, mid, tol) {
                    Some(p) => {
                        hi = mid;
                        pair = p;
                    }
                    None => lo = mid,
                }
            }
        }
        let (i, j) = pair;
        let near = self.cloud.points[j];
        let reflected = self.cloud.points[i] - n * (2.0 * (s[i] - hi));
        let at_marker = self
            .cloud
            .markers
            .iter()
            .any(|&m| self.cloud.points[m].dist(near) <= tol);
        let touch_kind = if at_marker {
            TouchKind::Boundary
        } else {
            TouchKind::Interior
        };
        Ok(SweepResult {
            theta,
            l_touch: Some(hi),
            touch_kind,
            residual,
            witness: Some((reflected, near)),
        })
    }

    /// Mean distance from the mirror images of a subsample to the cloud,
    /// averaged over a few planes through `axis` and truncated at
    /// `REFINE_CAP_PITCHES`. Smooth enough to refine an axis with a simplex
    /// search.
    fn axis_objective(&self, axis: &Line, stride: usize) -> f64 {
        let cap = REFINE_CAP_PITCHES * self.pitch;
        let mut total = 0.0;
        let mut count = 0usize;
        for t in 0..REFINE_THETAS {
            let theta = core::f64::consts::PI * t as f64 / REFINE_THETAS as f64;
            let plane = Plane::through(axis.point, sweep_normal(axis, theta));
            for p in self.cloud.points.iter().step_by(stride) {
                let d = self
                    .grid
                    .nearest_within(plane.reflect(*p), cap, |_| true)
                    .map_or(cap, |(_, d)| d);
                total += d;
                count += 1;
            }
        }
        total / count.max(1) as f64
    }

    /// Local simplex refinement of an axis: two tilt angles and two offsets
    /// in the plane orthogonal to the starting direction.
    pub fn refine_axis(&self, start: &Line) -> Line {
        let stride = (self.cloud.len() / REFINE_SAMPLES).max(1);
        let e1 = start.dir.any_perpendicular().normalized();
        let e2 = start.dir.cross(e1);
        let build = |x: &[f64; 4]| {
            Line::new(
                start.point + e1 * x[2] + e2 * x[3],
                start.dir + e1 * x[0] + e2 * x[1],
            )
        };
        let f0 = self.axis_objective(start, stride);
        let step = [0.02, 0.02, self.pitch, self.pitch];
        let (x, f) = nelder_mead(
            |x| self.axis_objective(&build(x), stride),
            [0.0; 4],
            step,
            400,
            1e-3 * self.pitch,
        );
        if f < f0 {
            build(&x)
        } else {
            *start
        }
    }
}

/// One moving-plane sweep. `tol` is the contact tolerance.
pub fn sweep_first_touch(
    cloud: &PointCloud,
    axis: &Line,
    theta: f64,
    l_max: f64,
    tol: f64,
) -> Result<SweepResult> {
    Sweeper::new(cloud)?.sweep(axis, theta, l_max, tol)
}

/// Where to look for the axis before falling back to principal axes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AxisHint {
    Line(Line),
    /// Two points on the axis, such as the two cone points of a closed
    /// parallel surface.
    Points(Vec3, Vec3),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymmetryOptions {
    pub n_theta: usize,
    /// Contact tolerance as a multiple of the sampling pitch.
    pub contact_factor: f64,
    /// Largest accepted reflection residual, in sampling pitches.
    pub residual_factor: f64,
    /// Largest accepted `l_touch`, in sampling pitches.
    pub touch_factor: f64,
    pub refine: bool,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        Self {
            n_theta: 32,
            contact_factor: 2.0,
            residual_factor: 2.0,
            touch_factor: 2.0,
            refine: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymmetryReport {
    /// The recovered axis, or `None` when no candidate passed.
    pub axis: Option<Line>,
    /// Best candidate examined (the accepted axis when there is one).
    pub candidate: Line,
    pub pitch: f64,
    pub contact_tol: f64,
    /// Sweep directions and the reflection residual of the candidate in each.
    pub thetas: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Largest entry of `residuals`.
    pub max_residual: f64,
    /// Largest `l_touch` over the swept directions (infinite if some
    /// direction never touched or the sweeps were skipped).
    pub max_l_touch: f64,
    pub sweeps: Vec<SweepResult>,
    /// For each marker, the largest distance from its mirror images to the
    /// cloud.
    pub marker_residuals: Vec<f64>,
}

fn principal_axes(cloud: &PointCloud) -> [Line; 3] {
    let c = cloud.centroid();
    let mut m = [[0.0; 3]; 3];
    for p in &cloud.points {
        let d = (*p - c).to_array();
        for (r, row) in m.iter_mut().enumerate() {
            for (k, x) in row.iter_mut().enumerate() {
                *x += d[r] * d[k];
            }
        }
    }
    let (vals, vecs) = sym_eigen3(m);
    let col = |k: usize| Vec3::new(vecs[0][k], vecs[1][k], vecs[2][k]);
    // The symmetry axis of a body of revolution is the eigenvector whose
    // eigenvalue stands apart from the other two.
    let gap = |k: usize| {
        let others: Vec<f64> = (0..3)
            .filter(|&j| j != k)
            .map(|j| libm::fabs(vals[j] - vals[k]))
            .collect();
        others[0].min(others[1])
    };
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| gap(b).total_cmp(&gap(a)));
    order.map(|k| Line::new(c, col(k)))
}

/// Search for a rotation axis. Candidates are tried in order: the hint, the
/// line through the two most distant markers, then the principal axes of the
/// sample. Each is refined, then accepted when every plane through it
/// reflects the cloud onto itself within `residual_factor` pitches and every
/// sweep touches at `l ≤ touch_factor` pitches.
pub fn detect_rotational_symmetry(
    cloud: &PointCloud,
    hint: Option<AxisHint>,
    opts: &SymmetryOptions,
) -> Result<SymmetryReport> {
    if opts.n_theta == 0 {
        return Err(Error::Config("n_theta must be positive".into()));
    }
    let sweeper = Sweeper::new(cloud)?;
    let pitch = sweeper.pitch();
    let contact_tol = opts.contact_factor * pitch;
    let mut candidates = Vec::new();
    match hint {
        Some(AxisHint::Line(l)) => candidates.push(l),
        Some(AxisHint::Points(a, b)) if a.dist(b) > 0.0 => candidates.push(Line::through(a, b)),
        _ => {}
    }
    if hint.is_none() && cloud.markers.len() >= 2 {
        let mut best = (0.0, 0, 0);
        for (x, &a) in cloud.markers.iter().enumerate() {
            for &b in &cloud.markers[x + 1..] {
                let d = cloud.points[a].dist(cloud.points[b]);
                if d > best.0 {
                    best = (d, a, b);
                }
            }
        }
        if best.0 > 0.0 {
            candidates.push(Line::through(cloud.points[best.1], cloud.points[best.2]));
        }
    }
    candidates.extend(principal_axes(cloud));

    let thetas: Vec<f64> = (0..opts.n_theta)
        .map(|k| core::f64::consts::TAU * k as f64 / opts.n_theta as f64)
        .collect();
    let mut best: Option<SymmetryReport> = None;
    for start in candidates {
        let axis = if opts.refine {
            sweeper.refine_axis(&start)
        } else {
            start
        };
        let residuals: Vec<f64> = thetas
            .iter()
            .map(|&t| {
                sweeper.reflection_residual(&Plane::through(axis.point, sweep_normal(&axis, t)))
            })
            .collect();
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        let mut report = SymmetryReport {
            axis: None,
            candidate: axis,
            pitch,
            contact_tol,
            thetas: thetas.clone(),
            residuals,
            max_residual,
            max_l_touch: f64::INFINITY,
            sweeps: Vec::new(),
            marker_residuals: Vec::new(),
        };
        if max_residual < opts.residual_factor * pitch {
            // Sweep from a plane that clears the cloud in every direction.
            let reach = cloud
                .points
                .iter()
                .map(|p| axis.distance_to(*p))
                .fold(0.0, f64::max);
            let l_start = reach + pitch;
            let sweeps = thetas
                .iter()
                .map(|&t| sweeper.sweep(&axis, t, l_start, contact_tol))
                .collect::<Result<Vec<_>>>()?;
            report.max_l_touch = sweeps
                .iter()
                .map(|s| s.l_touch.unwrap_or(f64::INFINITY))
                .fold(0.0, f64::max);
            report.sweeps = sweeps;
            report.marker_residuals = cloud
                .markers
                .iter()
                .map(|&m| {
                    thetas
                        .iter()
                        .map(|&t| {
                            let q = Plane::through(axis.point, sweep_normal(&axis, t))
                                .reflect(cloud.points[m]);
                            sweeper
                                .grid
                                .nearest(q, |_| true)
                                .map_or(f64::INFINITY, |(_, d)| d)
                        })
                        .fold(0.0, f64::max)
                })
                .collect();
            if report.max_l_touch <= opts.touch_factor * pitch {
                report.axis = Some(axis);
                return Ok(report);
            }
        }
        if best
            .as_ref()
            .is_none_or(|b| report.max_residual < b.max_residual)
        {
            best = Some(report);
        }
    }
    best.ok_or(Error::EmptySample)
}
