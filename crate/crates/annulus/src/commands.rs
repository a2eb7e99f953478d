//! The subcommands. Each returns whether its checks passed; errors mean bad
//! input or an infeasible request.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use annulus_core::contact::{
    fit_tangent_annulus, AnnulusFixture, Configuration, FitOptions, FitTarget, FixtureDescriptor,
    SolverStep,
};
use annulus_core::delaunay::{
    integrate_profile_span, reparametrize_conformal, revolve, ConformalRevolved, DelaunaySpec,
    Family,
};
use annulus_core::num::OdeOptions;
use annulus_core::parallel::offset;
use annulus_core::surface::{Catenoid, ConformalSphere, Cylinder, Patch};
use annulus_core::symmetry::{detect_rotational_symmetry, AxisHint, SymmetryOptions, TouchKind};
use annulus_core::verify::{classify_case, theorem_report, SuiteOptions, Verdict};
use annulus_core::{Line, Vec3};

use crate::config::{FamilyArg, RunConfig};
use crate::formats;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

fn core_err(e: annulus_core::Error) -> anyhow::Error {
    anyhow!("{e}")
}

/// What `fit` writes: enough to rebuild the fixture, plus the solver trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureFile {
    pub descriptor: FixtureDescriptor,
    pub target: Option<FitTarget>,
    #[serde(default)]
    pub trace: Vec<SolverStep>,
}

pub fn load_fixture(path: &Path) -> Result<AnnulusFixture> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading fixture {}", path.display()))?;
    let file: FixtureFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing fixture {}", path.display()))?;
    let mut fx = file
        .descriptor
        .build()
        .map_err(core_err)
        .context("rebuilding fixture")?;
    fx.trace = file.trace;
    Ok(fx)
}

fn require_fixture(cfg: &RunConfig) -> Result<AnnulusFixture> {
    let path = cfg.fixture.as_deref().context("--fixture is required")?;
    load_fixture(path)
}

/// Smallest positive radius where the meridian of `(h, force)` is vertical.
pub fn extremum_radius(h: f64, force: f64) -> Result<f64> {
    if h == 0.0 {
        if force > 0.0 {
            return Ok(force);
        }
        bail!("a catenoid needs a positive force, got {force}");
    }
    let disc = 1.0 + 4.0 * h * force;
    if disc < 0.0 {
        bail!("no meridian exists for H = {h}, force = {force} (H * force < -1/4)");
    }
    let s = disc.sqrt();
    [(-1.0 + s) / (2.0 * h), (-1.0 - s) / (2.0 * h)]
        .into_iter()
        .filter(|r| *r > 0.0)
        .min_by(f64::total_cmp)
        .ok_or_else(|| anyhow!("no positive extremum radius for H = {h}, force = {force}"))
}

/// Conformal Delaunay patch whose meridian is centered on an extremum.
pub fn delaunay_patch(h: f64, force: f64, length: f64) -> Result<ConformalRevolved> {
    let spec = DelaunaySpec::new(h, force);
    match spec.family {
        Family::Infeasible => {
            bail!("no meridian exists for H = {h}, force = {force} (H * force < -1/4)")
        }
        Family::Plane | Family::Sphere => bail!(
            "{:?} has no annular meridian; use --family sphere",
            spec.family
        ),
        _ => {}
    }
    let r0 = extremum_radius(h, force)?;
    let profile = integrate_profile_span(
        &spec,
        r0,
        FRAC_PI_2,
        -0.5 * length,
        0.5 * length,
        &OdeOptions::default(),
    )
    .map_err(core_err)?;
    if let Some(t) = profile.truncated {
        bail!("the meridian reaches the axis ({t:?}); shorten --length");
    }
    reparametrize_conformal(&revolve(profile)).map_err(core_err)
}

fn write_mesh<P: Patch + ?Sized>(cfg: &RunConfig, stem: &str, patch: &P) -> Result<()> {
    formats::write(
        &cfg.out.join(format!("{stem}.obj")),
        &formats::obj_string(patch, cfg.grid)?,
    )?;
    formats::write(
        &cfg.out.join(format!("{stem}.csv")),
        &formats::curvature_csv(patch, cfg.grid)?,
    )
}

pub fn generate(cfg: &RunConfig) -> Result<Outcome> {
    let family = cfg.family.context("--family is required")?;
    let range = cfg.u_range.unwrap_or((-1.0, 1.0));
    let stem = format!("{family:?}").to_lowercase();
    match family {
        FamilyArg::Catenoid => write_mesh(cfg, &stem, &Catenoid::new(cfg.scale, range.0, range.1))?,
        FamilyArg::Sphere => write_mesh(cfg, &stem, &ConformalSphere::unit(range.0, range.1))?,
        FamilyArg::Cylinder => write_mesh(cfg, &stem, &Cylinder::new(cfg.scale, range.0, range.1))?,
        FamilyArg::Unduloid | FamilyArg::Nodoid | FamilyArg::Delaunay => {
            let h = cfg.h.context("--H is required for Delaunay surfaces")?;
            let force = cfg
                .force
                .context("--force is required for Delaunay surfaces")?;
            let actual = DelaunaySpec::new(h, force).family;
            let wanted = match family {
                FamilyArg::Unduloid => Some(Family::Unduloid),
                FamilyArg::Nodoid => Some(Family::Nodoid),
                _ => None,
            };
            if wanted.is_some_and(|w| w != actual) {
                bail!("H = {h}, force = {force} describes family {actual:?}, not {family:?}");
            }
            let patch = delaunay_patch(h, force, cfg.length)?;
            write_mesh(cfg, &stem, &patch)?;
            formats::write(
                &cfg.out.join(format!("{stem}_profile.csv")),
                &formats::profile_csv(&patch.profile)?,
            )?;
        }
    }
    println!("wrote {}/{stem}.obj and {stem}.csv", cfg.out.display());
    Ok(Outcome::Pass)
}

pub fn fit(cfg: &RunConfig) -> Result<Outcome> {
    let h = cfg.h.context("--H is required")?;
    let distance = cfg
        .sphere_distance
        .context("--sphere-distance is required")?;
    let target = match cfg.contact_angle {
        None => FitTarget::TwoSpheres { distance },
        Some(alpha) => FitTarget::SpherePlane { distance, alpha },
    };
    let opts = FitOptions {
        choice: cfg.root,
        radius: cfg.radius,
        ..FitOptions::default()
    };
    let fx = fit_tangent_annulus(h, target, &opts).map_err(core_err)?;
    let file = FixtureFile {
        descriptor: fx.descriptor(),
        target: Some(target),
        trace: fx.trace.clone(),
    };
    let path = cfg.out.join("fixture.json");
    formats::write(&path, &formats::json_string(&file)?)?;
    let case = classify_case(h, fx.k_sign.as_i8());
    println!(
        "r0 = {:.16e}, c = {:.16e}, case {:?}",
        fx.r0, fx.c, case.tag
    );
    println!("wrote {}", path.display());
    Ok(Outcome::Pass)
}

pub fn offset_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let fx = require_fixture(cfg)?;
    let off = offset(fx.patch.clone(), cfg.rho);
    write_mesh(cfg, "offset", &off)?;
    let cloud =
        annulus_core::symmetry::PointCloud::from_patch(&off, cfg.spacing).map_err(core_err)?;
    formats::write(&cfg.out.join("offset.xyz"), &formats::xyz_string(&cloud)?)?;
    println!(
        "wrote {}/offset.obj, offset.csv and offset.xyz ({} points)",
        cfg.out.display(),
        cloud.len()
    );
    Ok(Outcome::Pass)
}

fn unit_vector(rng: &mut ChaCha8Rng) -> Vec3 {
    let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
    let t: f64 = std::f64::consts::TAU * rng.gen::<f64>();
    let r = (1.0 - z * z).max(0.0).sqrt();
    Vec3::new(r * t.cos(), r * t.sin(), z)
}

/// Fault injection: inflate every sphere by `1 + eps` and move its center
/// by `eps` in a seeded random direction.
pub fn perturb_spheres(fx: &mut AnnulusFixture, eps: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bump = |s: &mut annulus_core::contact::SphereCfg| {
        s.radius *= 1.0 + eps;
        s.center += unit_vector(&mut rng) * eps;
    };
    match &mut fx.config {
        Configuration::TwoSpheres { spheres } => spheres.iter_mut().for_each(&mut bump),
        Configuration::SpherePlane { sphere, .. } => bump(sphere),
    }
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let mut fx = require_fixture(cfg)?;
    if cfg.case_only {
        let case = classify_case(fx.h, fx.k_sign.as_i8());
        print!("{}", formats::json_string(&case)?);
        return Ok(Outcome::Pass);
    }
    if let Some(eps) = cfg.perturb_sphere {
        perturb_spheres(&mut fx, eps, cfg.seed);
    }
    let opts = SuiteOptions {
        grid: cfg.grid,
        ..SuiteOptions::default()
    };
    let rep = theorem_report(&fx, &opts).map_err(core_err)?;
    formats::write(&cfg.out.join("report.json"), &formats::json_string(&rep)?)?;
    formats::write(&cfg.out.join("report.txt"), &rep.to_string())?;
    print!("{rep}");
    if rep.verdict == Verdict::Consistent {
        Ok(Outcome::Pass)
    } else {
        for c in rep.failures() {
            eprintln!("failed check: {}", c.name);
        }
        if rep.verdict == Verdict::Degenerate {
            eprintln!("degenerate fixture: K vanishes identically");
        }
        Ok(Outcome::Fail)
    }
}

pub fn symmetry(cfg: &RunConfig) -> Result<Outcome> {
    let path = cfg.cloud.as_deref().context("--cloud is required")?;
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading cloud {}", path.display()))?;
    let cloud =
        formats::parse_xyz(&text).with_context(|| format!("parsing cloud {}", path.display()))?;
    let hint = cfg.hint.map(|h| {
        AxisHint::Line(Line::new(
            Vec3::new(h[0], h[1], h[2]),
            Vec3::new(h[3], h[4], h[5]),
        ))
    });
    let opts = SymmetryOptions {
        n_theta: cfg.thetas,
        contact_factor: cfg.tol_contact,
        residual_factor: cfg.tol_symmetry,
        touch_factor: cfg.tol_touch,
        refine: true,
    };
    let rep = detect_rotational_symmetry(&cloud, hint, &opts).map_err(core_err)?;
    formats::write(&cfg.out.join("symmetry.json"), &formats::json_string(&rep)?)?;
    let mut csv = String::from("theta,residual,l_touch,touch\n");
    for (k, (&theta, &res)) in rep.thetas.iter().zip(&rep.residuals).enumerate() {
        let sweep = rep.sweeps.get(k);
        let l = sweep
            .and_then(|s| s.l_touch)
            .map(|l| format!("{l:.16e}"))
            .unwrap_or_default();
        let kind = match sweep.map(|s| s.touch_kind) {
            Some(TouchKind::Interior) => "interior",
            Some(TouchKind::Boundary) => "boundary",
            Some(TouchKind::None) => "none",
            None => "",
        };
        writeln!(csv, "{theta:.16e},{res:.16e},{l},{kind}")?;
    }
    formats::write(&cfg.out.join("symmetry_residuals.csv"), &csv)?;
    match rep.axis {
        Some(axis) => {
            println!(
                "axis through ({:.9}, {:.9}, {:.9}) along ({:.9}, {:.9}, {:.9}); residual {:.3e} = {:.3} pitches",
                axis.point.x,
                axis.point.y,
                axis.point.z,
                axis.dir.x,
                axis.dir.y,
                axis.dir.z,
                rep.max_residual,
                rep.max_residual / rep.pitch
            );
            Ok(Outcome::Pass)
        }
        None => {
            println!(
                "no rotation axis; best residual {:.3e} = {:.3} pitches",
                rep.max_residual,
                rep.max_residual / rep.pitch
            );
            Ok(Outcome::Fail)
        }
    }
}

pub fn export(cfg: &RunConfig) -> Result<Outcome> {
    let fx = require_fixture(cfg)?;
    write_mesh(cfg, "fixture", &fx.patch)?;
    formats::write(
        &cfg.out.join("profile.csv"),
        &formats::profile_csv(&fx.patch.profile)?,
    )?;
    let off = offset(fx.patch.clone(), 1.0);
    let cloud =
        annulus_core::symmetry::PointCloud::from_patch(&off, cfg.spacing).map_err(core_err)?;
    formats::write(&cfg.out.join("offset.xyz"), &formats::xyz_string(&cloud)?)?;
    formats::write(
        &cfg.out.join("descriptor.json"),
        &formats::json_string(&fx.descriptor())?,
    )?;
    println!(
        "wrote fixture.obj, fixture.csv, profile.csv, offset.xyz and descriptor.json to {}",
        cfg.out.display()
    );
    Ok(Outcome::Pass)
}
