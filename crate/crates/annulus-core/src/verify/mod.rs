//! Case classification and the verification suites run on fitted
//! fixtures: boundary identities, offset-curvature inequalities, the
//! linear Weingarten PDE of the offset and its ellipticity, and the
//! composed consistency report.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::contact::{
    ball_containment, boundary_speed_check, conormal_curvature_check, conormal_curve,
    interior_lambda_bound, plane_boundary_check, self_intersection_check, spherical_convexity,
    tangency_residual, AnnulusFixture, Boundary, Configuration, Containment, CurvatureSign,
    FixtureDescriptor, EPS_CONV,
};
use crate::parallel::{offset, weingarten_residual, EPS_SING};
use crate::surface::{
    curvature, fundamental_forms, gauss_residual, hopf_constant, local_graph, GraphSide, Grid,
    Patch,
};
use crate::symmetry::{detect_rotational_symmetry, AxisHint, PointCloud, SymmetryOptions};
use crate::{Error, Line, Result, Vec3};

mod pde;

pub use pde::{ellipticity_check, pde_residual, Certification, EllipticityReport, PdeResidual};

/// Guard added to strict-positivity checks.
pub const MARGIN_GUARD: f64 = 1e-10;
/// Tolerance on the graph PDE residual.
pub const PDE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CaseTag {
    /// `K < 0`, `H > -1`.
    I,
    /// `K > 0`, `-1 < H < -1/2`.
    Ii,
    /// `K > 0`, `H < -1`.
    Iii,
    /// `H = -1`: the annulus would be part of the sphere.
    Excluded,
    /// `K ≡ 0`: part of a cylinder.
    Degenerate,
    /// `K > 0`, `H = -1/2`.
    Boundary,
    /// Sign of `K` and `H` combine in a way none of the cases covers
    /// (`K < 0` with `H < -1`, or `K > 0` with `H > -1/2`).
    Uncovered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ExpectedSurface {
    Unduloid,
    Catenoid,
    Nodoid,
    Cylinder,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseClass {
    pub tag: CaseTag,
    pub expected: Option<ExpectedSurface>,
}

const CASE_TIE: f64 = 1e-12;

/// Case of an annulus with mean curvature `h` (unit spheres) and Gaussian
/// curvature sign `sign_k` (`-1`, `0`, `+1`).
pub fn classify_case(h: f64, sign_k: i8) -> CaseClass {
    let near = |a: f64, b: f64| libm::fabs(a - b) <= CASE_TIE;
    let (tag, expected) = if near(h, -1.0) {
        (CaseTag::Excluded, Some(ExpectedSurface::Sphere))
    } else if sign_k == 0 {
        (CaseTag::Degenerate, Some(ExpectedSurface::Cylinder))
    } else if sign_k < 0 {
        if h > -1.0 {
            let s = if near(h, 0.0) {
                ExpectedSurface::Catenoid
            } else if h < 0.0 {
                ExpectedSurface::Unduloid
            } else {
                ExpectedSurface::Nodoid
            };
            (CaseTag::I, Some(s))
        } else {
            (CaseTag::Uncovered, None)
        }
    } else if near(h, -0.5) {
        (CaseTag::Boundary, None)
    } else if h > -1.0 && h < -0.5 {
        (CaseTag::Ii, Some(ExpectedSurface::Unduloid))
    } else if h < -1.0 {
        (CaseTag::Iii, Some(ExpectedSurface::Nodoid))
    } else {
        (CaseTag::Uncovered, None)
    };
    CaseClass { tag, expected }
}

/// [`classify_case`] for spheres of radius `rho`: the thresholds become
/// `-1/ρ` and `-1/(2ρ)`.
pub fn classify_case_scaled(h: f64, sign_k: i8, rho: f64) -> CaseClass {
    classify_case(h * rho, sign_k)
}

/// How a check's value is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Rule {
    /// Pass iff `value <= tol`.
    AtMost,
    /// Pass iff `value > tol`.
    Above,
}

impl Rule {
    pub fn eval(self, value: f64, tol: f64) -> bool {
        match self {
            Rule::AtMost => value <= tol,
            Rule::Above => value > tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub rule: Rule,
    pub pass: bool,
    /// Reported but not part of the verdict.
    pub informational: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Consistent,
    Failed,
    /// `K ≡ 0`; the suites do not apply.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerificationReport {
    pub title: String,
    pub case: Option<CaseClass>,
    pub fixture: Option<FixtureDescriptor>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn new(title: &str) -> Self {
        Self {
            title: title.to_string(),
            case: None,
            fixture: None,
            checks: Vec::new(),
            notes: Vec::new(),
            verdict: Verdict::Consistent,
        }
    }

    pub fn check(&mut self, name: &str, value: f64, tol: f64, rule: Rule) {
        self.push(name, value, tol, rule, false);
    }

    pub fn info(&mut self, name: &str, value: f64, tol: f64, rule: Rule) {
        self.push(name, value, tol, rule, true);
    }

    fn push(&mut self, name: &str, value: f64, tol: f64, rule: Rule, informational: bool) {
        let pass = rule.eval(value, tol);
        self.checks.push(Check {
            name: name.to_string(),
            value,
            tol,
            rule,
            pass,
            informational,
        });
        if !pass && !informational && self.verdict == Verdict::Consistent {
            self.verdict = Verdict::Failed;
        }
    }

    /// A check whose computation itself failed.
    pub fn failed(&mut self, name: &str, err: &Error) {
        self.push(name, f64::NAN, 0.0, Rule::AtMost, false);
        self.notes.push(alloc::format!("{name}: {err}"));
    }

    pub fn note(&mut self, note: String) {
        self.notes.push(note);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(&c.name, c.value, c.tol, c.rule, c.informational);
        }
        self.notes.extend(other.notes);
        if other.verdict == Verdict::Degenerate {
            self.verdict = Verdict::Degenerate;
        }
    }

    /// Verdict recomputed from the recorded values and tolerances.
    pub fn recompute(&self) -> Verdict {
        if self.verdict == Verdict::Degenerate {
            return Verdict::Degenerate;
        }
        let ok = self
            .checks
            .iter()
            .all(|c| c.informational || c.rule.eval(c.value, c.tol));
        if ok {
            Verdict::Consistent
        } else {
            Verdict::Failed
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass && !c.informational)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Consistent
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        if let Some(c) = self.case {
            writeln!(f, "case: {:?} (expected surface: {:?})", c.tag, c.expected)?;
        }
        let width = self
            .checks
            .iter()
            .map(|c| c.name.chars().count())
            .max()
            .unwrap_or(0);
        for c in &self.checks {
            let op = match c.rule {
                Rule::AtMost => "<=",
                Rule::Above => "> ",
            };
            let status = match (c.pass, c.informational) {
                (true, _) => "pass",
                (false, true) => "info",
                (false, false) => "FAIL",
            };
            writeln!(
                f,
                "  {status}  {:width$}  {:>13.6e} {op} {:.1e}",
                c.name, c.value, c.tol
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        write!(f, "verdict: {:?}", self.verdict)
    }
}

/// Sampling used by the suites.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteOptions {
    pub grid: Grid,
    /// Samples along each boundary row.
    pub boundary_samples: usize,
    /// Grid for the finite-difference offset checks.
    pub offset_grid: Grid,
    /// Graph half-width and half-count for the PDE checks.
    pub graph_radius: f64,
    pub graph_half: usize,
    /// Grid for the self-intersection test of the offset.
    pub embed_grid: Grid,
    /// Arclength spacing of the offset point cloud used for axis recovery.
    pub cloud_spacing: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            grid: Grid::new(64, 64),
            boundary_samples: 256,
            offset_grid: Grid::new(24, 8),
            graph_radius: 0.01,
            graph_half: 8,
            embed_grid: Grid::new(64, 64),
            cloud_spacing: 0.015,
        }
    }
}

/// Sign of `K` over the interior rows: `0` when it vanishes identically,
/// an error when it changes sign.
pub fn gaussian_sign<P: Patch + ?Sized>(patch: &P, grid: Grid) -> Result<i8> {
    let us = grid.u_values(patch);
    let (mut pos, mut neg) = (false, false);
    for &u in &us[1..us.len().saturating_sub(1)] {
        let k = curvature(&fundamental_forms(patch, u, 0.0)?).k;
        pos |= k > 1e-10;
        neg |= k < -1e-10;
    }
    match (pos, neg) {
        (true, true) => Err(Error::NotApplicable("K changes sign".into())),
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        (false, false) => Ok(0),
    }
}

fn boundary_name(b: Boundary) -> &'static str {
    match b {
        Boundary::Lower => "lower",
        Boundary::Upper => "upper",
    }
}

/// Wrong-sign excursion of a geodesic-curvature sample set.
fn convexity_defect(min: f64, max: f64) -> f64 {
    (-min).max(0.0).min(max.max(0.0))
}

fn start_report<P: Patch>(
    title: &str,
    fx: &AnnulusFixture<P>,
    opts: &SuiteOptions,
) -> Result<(VerificationReport, i8)> {
    if libm::fabs(fx.h + 1.0) < 1e-12 {
        return Err(Error::ExcludedCase("H = -1".into()));
    }
    let mut rep = VerificationReport::new(title);
    let sign = gaussian_sign(&fx.patch, opts.grid)?;
    rep.case = Some(classify_case(fx.h, sign));
    Ok((rep, sign))
}

/// Boundary identities of a fixture: tangency, constant boundary speed,
/// `κ2 = -1` on the spheres, the interior bound on `λ²`, convexity of the
/// boundary and conormal curves, plus Hopf constancy and the Gauss
/// equation.
pub fn lemma1_suite<P: Patch>(
    fx: &AnnulusFixture<P>,
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    let (mut rep, sign) = start_report("boundary identities", fx, opts)?;
    match hopf_constant(&fx.patch, opts.grid, 1e-6) {
        Ok(hopf) => {
            rep.check(
                "Hopf constant deviation",
                hopf.max_deviation,
                1e-6,
                Rule::AtMost,
            );
            rep.check(
                "h12 (curvature coordinates)",
                hopf.max_h12,
                1e-6,
                Rule::AtMost,
            );
            rep.check(
                "mean curvature vs fixture H",
                libm::fabs(hopf.mean_h - fx.h),
                1e-6,
                Rule::AtMost,
            );
            rep.check(
                "Hopf constant vs fixture c",
                libm::fabs(hopf.c - fx.c),
                1e-6,
                Rule::AtMost,
            );
        }
        Err(e) => rep.failed("Hopf constant deviation", &e),
    }
    if sign == 0 {
        rep.verdict = Verdict::Degenerate;
        rep.note("K vanishes identically: the annulus is part of a cylinder".into());
        return Ok(rep);
    }
    match gauss_residual(&fx.patch, opts.grid) {
        Ok(g) => rep.check("Gauss equation residual", g, 1e-5, Rule::AtMost),
        Err(e) => rep.failed("Gauss equation residual", &e),
    }
    let nv = opts.boundary_samples;
    for (b, sphere) in fx.sphere_boundaries() {
        let name = boundary_name(b);
        let u = fx.boundary_u(b);
        let t = tangency_residual(&fx.patch, u, &sphere, nv)?;
        rep.check(
            &alloc::format!("tangency position ({name})"),
            t.position,
            1e-8,
            Rule::AtMost,
        );
        rep.check(
            &alloc::format!("tangency normal ({name})"),
            t.normal,
            1e-8,
            Rule::AtMost,
        );
        match boundary_speed_check(fx, b, nv) {
            Ok(s) => {
                rep.check(
                    &alloc::format!("boundary speed ({name})"),
                    s.speed_deviation,
                    1e-6,
                    Rule::AtMost,
                );
                rep.check(
                    &alloc::format!("kappa2 + 1 on boundary ({name})"),
                    s.kappa2_deviation,
                    1e-6,
                    Rule::AtMost,
                );
            }
            Err(e) => rep.failed(&alloc::format!("boundary speed ({name})"), &e),
        }
        let pts: Vec<Vec3> = (0..nv)
            .map(|j| {
                let (v0, v1) = fx.patch.v_range();
                fx.patch.position(u, v0 + (v1 - v0) * j as f64 / nv as f64)
            })
            .collect();
        match spherical_convexity(&pts, sphere.center, sphere.radius) {
            Ok(c) => rep.check(
                &alloc::format!("boundary curve convexity ({name})"),
                convexity_defect(c.min, c.max),
                EPS_CONV,
                Rule::AtMost,
            ),
            Err(e) => rep.failed(&alloc::format!("boundary curve convexity ({name})"), &e),
        }
        let nu = conormal_curve(&fx.patch, u, nv);
        let c = spherical_convexity(&nu, Vec3::ZERO, 1.0)?;
        rep.check(
            &alloc::format!("conormal convexity ({name})"),
            convexity_defect(c.min, c.max),
            EPS_CONV,
            Rule::AtMost,
        );
        match conormal_curvature_check(&fx.patch, u, nv) {
            Ok(k) => rep.check(
                &alloc::format!("conormal curvature vs h22/lambda_u ({name})"),
                k.max_deviation / k.max_predicted.max(1.0),
                1e-3,
                Rule::AtMost,
            ),
            Err(e) => rep.failed(
                &alloc::format!("conormal curvature vs h22/lambda_u ({name})"),
                &e,
            ),
        }
    }
    match interior_lambda_bound(fx, opts.grid) {
        Ok(lb) => rep.check(
            "interior lambda^2 bound margin",
            lb.margin,
            MARGIN_GUARD,
            Rule::Above,
        ),
        Err(e) => rep.failed("interior lambda^2 bound margin", &e),
    }
    if let Configuration::SpherePlane { plane, .. } = fx.config {
        let p = plane_boundary_check(fx, nv)?;
        rep.check("plane boundary planarity", p.planarity, 1e-10, Rule::AtMost);
        rep.check(
            "contact angle deviation",
            p.contact_angle_deviation,
            1e-6,
            Rule::AtMost,
        );
        rep.check(
            "contact angle spread",
            p.contact_angle_spread,
            1e-6,
            Rule::AtMost,
        );
        rep.check(
            "plane boundary curvature vs -kappa2/sin(alpha)",
            p.curvature_deviation,
            1e-6,
            Rule::AtMost,
        );
        rep.check(
            "plane boundary convexity",
            if p.convex { 0.0 } else { 1.0 },
            0.0,
            Rule::AtMost,
        );
        if sign < 0 && plane.contact_angle > core::f64::consts::FRAC_PI_2 {
            rep.check(
                "lambda_u on plane boundary",
                p.min_lambda_u,
                0.0,
                Rule::Above,
            );
        }
    }
    Ok(rep)
}

/// Offset-surface suite: the linear Weingarten relation, the case
/// inequalities on `κ̃1`, `κ̃2`, `H̃`, and the range of `c / 2λ²(1+H)`.
pub fn lemma2_suite<P: Patch>(
    fx: &AnnulusFixture<P>,
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    let (mut rep, sign) = start_report("offset surface", fx, opts)?;
    if sign == 0 {
        rep.verdict = Verdict::Degenerate;
        rep.note("K vanishes identically: the annulus is part of a cylinder".into());
        return Ok(rep);
    }
    match weingarten_residual(&fx.patch, opts.offset_grid, EPS_SING) {
        Ok(w) => rep.check(
            "linear Weingarten residual",
            w.max_residual,
            1e-6,
            Rule::AtMost,
        ),
        Err(e) => rep.failed("linear Weingarten residual", &e),
    }
    let h = fx.h;
    let hr = h / (1.0 + h);
    let us = opts.grid.u_values(&fx.patch);
    let mut k1_min = f64::INFINITY;
    let mut k1_max = f64::NEG_INFINITY;
    let mut k2_min = f64::INFINITY;
    let mut k2_max = f64::NEG_INFINITY;
    let mut ht_min = f64::INFINITY;
    let mut ht_max = f64::NEG_INFINITY;
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    let mut closed_form = 0.0f64;
    for &u in &us[1..us.len() - 1] {
        let forms = fundamental_forms(&fx.patch, u, 0.0)?;
        let cs = curvature(&forms);
        let k1 = cs.kappa1 / (1.0 + cs.kappa1);
        let k2 = cs.kappa2 / (1.0 + cs.kappa2);
        let ht = 0.5 * (k1 + k2);
        let q = fx.c / (2.0 * forms.e * (1.0 + h));
        let k1_cf = (hr + q) / (1.0 + q);
        let k2_cf = (hr - q) / (1.0 - q);
        let ht_cf = (hr - q * q) / (1.0 - q * q);
        let scale = 1.0 + libm::fabs(k1) + libm::fabs(k2);
        closed_form = closed_form
            .max(libm::fabs(k1 - k1_cf) / scale)
            .max(libm::fabs(k2 - k2_cf) / scale)
            .max(libm::fabs(ht - ht_cf) / scale);
        k1_min = k1_min.min(k1);
        k1_max = k1_max.max(k1);
        k2_min = k2_min.min(k2);
        k2_max = k2_max.max(k2);
        ht_min = ht_min.min(ht);
        ht_max = ht_max.max(ht);
        q_min = q_min.min(q);
        q_max = q_max.max(q);
    }
    rep.check(
        "offset curvatures vs closed form in c/2lambda^2(1+H)",
        closed_form,
        1e-8,
        Rule::AtMost,
    );
    let g = MARGIN_GUARD;
    match rep.case.map(|c| c.tag) {
        Some(CaseTag::I) => {
            rep.check("kappa1~ > 0 margin", k1_min, g, Rule::Above);
            rep.check("kappa2~ > 1 margin", k2_min - 1.0, g, Rule::Above);
            rep.check("H~ > 1 margin", ht_min - 1.0, g, Rule::Above);
        }
        Some(CaseTag::Ii) => {
            rep.check("c/2lambda^2(1+H) > 0 margin", q_min, g, Rule::Above);
            rep.check(
                "c/2lambda^2(1+H) < min(1, -H/(1+H)) margin",
                1.0f64.min(-hr) - q_max,
                g,
                Rule::Above,
            );
            rep.check("kappa1~ < 0 margin", -k1_max, g, Rule::Above);
            rep.check("kappa2~ < H/(1+H) margin", hr - k2_max, g, Rule::Above);
            rep.check("H~ < H/(1+H) margin", hr - ht_max, g, Rule::Above);
        }
        Some(CaseTag::Iii) => {
            rep.check("c/2lambda^2(1+H) > 0 margin", q_min, g, Rule::Above);
            rep.check("c/2lambda^2(1+H) < 1 margin", 1.0 - q_max, g, Rule::Above);
            let b_half = (1.0 + 2.0 * h) / (2.0 * (1.0 + h));
            rep.check(
                "kappa1~ > (1+2H)/2(1+H) margin",
                k1_min - b_half,
                g,
                Rule::Above,
            );
            let b_full = (1.0 + 2.0 * h) / (1.0 + h);
            rep.info(
                "kappa1~ > (1+2H)/(1+H) margin (variant bound)",
                k1_min - b_full,
                g,
                Rule::Above,
            );
            rep.check("kappa2~ > H/(1+H) margin", k2_min - hr, g, Rule::Above);
            rep.check("H~ > H/(1+H) margin", ht_min - hr, g, Rule::Above);
        }
        other => rep.note(alloc::format!("no case inequalities for {other:?}")),
    }
    Ok(rep)
}

/// Interior parameter points used for graph spot checks.
fn spot_points<P: Patch>(patch: &P) -> [(f64, f64); 3] {
    let (a, b) = patch.u_range();
    [
        (a + 0.3 * (b - a), 0.4),
        (a + 0.5 * (b - a), 2.1),
        (a + 0.7 * (b - a), 4.4),
    ]
}

/// Graph checks on the unit offset: PDE residual and ellipticity at a few
/// interior points.
pub fn graph_suite<P: Patch>(
    fx: &AnnulusFixture<P>,
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new("offset graphs");
    let off = offset(&fx.patch, 1.0);
    for (k, (u, v)) in spot_points(&fx.patch).into_iter().enumerate() {
        let graph = match local_graph(
            &off,
            u,
            v,
            opts.graph_radius,
            opts.graph_half,
            GraphSide::Normal,
        ) {
            Ok(g) => g,
            Err(Error::ShrinkRadius { max_radius }) if max_radius > 0.0 => {
                local_graph(&off, u, v, max_radius, opts.graph_half, GraphSide::Normal)?
            }
            Err(e) => return Err(e),
        };
        let r = pde_residual(&graph, fx.h)?;
        rep.check(
            &alloc::format!("PDE residual at point {k}"),
            r.max,
            PDE_TOL,
            Rule::AtMost,
        );
        let e = ellipticity_check(&graph, fx.h);
        rep.check(
            &alloc::format!("ellipticity margin at point {k}"),
            e.margin,
            MARGIN_GUARD,
            Rule::Above,
        );
        rep.note(alloc::format!(
            "point {k}: ellipticity certified by {:?}",
            e.certified_by
        ));
    }
    Ok(rep)
}

/// Everything above plus containment against the balls and embeddedness
/// of the offset.
pub fn theorem_report<P: Patch>(
    fx: &AnnulusFixture<P>,
    opts: &SuiteOptions,
) -> Result<VerificationReport> {
    let title = match fx.config {
        Configuration::TwoSpheres { .. } => "annulus between two spheres",
        Configuration::SpherePlane { .. } => "annulus between a sphere and a plane",
    };
    let mut rep = VerificationReport::new(title);
    let l1 = lemma1_suite(fx, opts)?;
    rep.case = l1.case;
    rep.merge(l1);
    if rep.verdict == Verdict::Degenerate {
        return Ok(rep);
    }
    rep.merge(lemma2_suite(fx, opts)?);
    let tag = rep.case.map(|c| c.tag);
    if let Configuration::TwoSpheres { .. } = fx.config {
        let expected = match tag {
            Some(CaseTag::I | CaseTag::Ii) => Some(Containment::Outside),
            Some(CaseTag::Iii) => Some(Containment::Inside),
            _ => None,
        };
        for (k, ball) in ball_containment(fx, opts.grid)?.into_iter().enumerate() {
            match expected {
                Some(Containment::Outside) => rep.check(
                    &alloc::format!("outside ball {k} margin"),
                    ball.min_gap,
                    0.0,
                    Rule::Above,
                ),
                Some(Containment::Inside) => rep.check(
                    &alloc::format!("inside ball {k} margin"),
                    -ball.max_gap,
                    0.0,
                    Rule::Above,
                ),
                _ => rep.note(alloc::format!("ball {k}: {:?}", ball.verdict)),
            }
        }
    }
    let off = offset(&fx.patch, 1.0);
    match self_intersection_check(&off, opts.embed_grid)? {
        None => rep.check("offset self-intersections", 0.0, 0.0, Rule::AtMost),
        Some(w) => {
            rep.check("offset self-intersections", 1.0, 0.0, Rule::AtMost);
            rep.note(alloc::format!("offset crosses itself near {:?}", w.point));
        }
    }
    if let Configuration::TwoSpheres { spheres } = fx.config {
        symmetry_checks(&mut rep, &off, spheres[0].center, spheres[1].center, opts)?;
    }
    rep.merge(graph_suite(fx, opts)?);
    Ok(rep)
}

/// Recover the axis of the closed offset from a point cloud, seeded with the
/// two cone points, and compare it with the axis of the fixture.
fn symmetry_checks<P: Patch>(
    rep: &mut VerificationReport,
    off: &P,
    o1: Vec3,
    o2: Vec3,
    opts: &SuiteOptions,
) -> Result<()> {
    let cloud = PointCloud::from_patch(off, opts.cloud_spacing)?;
    let sym = detect_rotational_symmetry(
        &cloud,
        Some(AxisHint::Points(o1, o2)),
        &SymmetryOptions::default(),
    )?;
    let truth = Line::through(o1, o2);
    rep.check(
        "offset symmetry residual / pitch",
        sym.max_residual / sym.pitch,
        2.0,
        Rule::AtMost,
    );
    match sym.axis {
        Some(axis) => rep.check(
            "recovered axis angle",
            axis.angle_to(&truth),
            1e-4,
            Rule::AtMost,
        ),
        None => {
            rep.check("recovered axis angle", f64::INFINITY, 1e-4, Rule::AtMost);
            rep.note("no rotation axis recovered from the offset cloud".to_string());
        }
    }
    Ok(())
}

impl CurvatureSign {
    pub fn as_i8(self) -> i8 {
        match self {
            CurvatureSign::Negative => -1,
            CurvatureSign::Positive => 1,
        }
    }
}

#[cfg(test)]
mod tests;
