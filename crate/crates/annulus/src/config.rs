//! Run parameters: command-line flags over a JSON config file over defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use annulus_core::contact::RootChoice;
use annulus_core::surface::Grid;

/// Surface families `generate` can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Catenoid,
    Sphere,
    Cylinder,
    Unduloid,
    Nodoid,
    /// Whatever Delaunay surface `--H` and `--force` describe.
    Delaunay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootArg {
    Largest,
    Smallest,
}

impl From<RootArg> for RootChoice {
    fn from(r: RootArg) -> Self {
        match r {
            RootArg::Largest => RootChoice::LargestR0,
            RootArg::Smallest => RootChoice::SmallestR0,
        }
    }
}

/// Every tunable parameter. Each field is optional so that flags and the
/// config file can be layered; a JSON config uses the same names in
/// snake_case (`H` stays `H`).
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// JSON file with default values for any of these parameters.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Surface family for `generate`.
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Mean curvature.
    #[arg(long = "H", allow_hyphen_values = true)]
    #[serde(rename = "H")]
    pub h: Option<f64>,
    /// Force (first integral `r sin φ + H r²`).
    #[arg(long, allow_hyphen_values = true)]
    pub force: Option<f64>,
    /// Catenoid waist radius or cylinder radius.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Parameter range `a:b` for catenoid, sphere and cylinder.
    #[arg(long, allow_hyphen_values = true)]
    pub u_range: Option<String>,
    /// Meridian arclength for Delaunay surfaces, centered on an extremum.
    #[arg(long)]
    pub length: Option<f64>,
    /// Distance between sphere centers, or from the sphere center to the plane.
    #[arg(long)]
    pub sphere_distance: Option<f64>,
    /// Contact angle with the plane; selects the sphere + plane configuration.
    #[arg(long)]
    pub contact_angle: Option<f64>,
    /// Sphere radius (the fit is scale invariant).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Which root of the fit to keep when several exist.
    #[arg(long, value_enum)]
    pub root: Option<RootArg>,
    /// Sampling grid `NxM` (u by v).
    #[arg(long)]
    pub grid: Option<String>,
    /// Offset distance for `offset`.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Fixture file written by `fit`.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
    /// Point cloud (`x y z` per line) for `symmetry`.
    #[arg(long)]
    pub cloud: Option<PathBuf>,
    /// Axis hint `px,py,pz,dx,dy,dz` for `symmetry`.
    #[arg(long, allow_hyphen_values = true)]
    pub hint: Option<String>,
    /// Arclength spacing of exported point clouds.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Number of sweep directions for `symmetry`.
    #[arg(long)]
    pub thetas: Option<usize>,
    /// Contact tolerance of the moving-plane sweep, in sampling pitches.
    #[arg(long)]
    pub tol_contact: Option<f64>,
    /// Accepted reflection residual, in sampling pitches.
    #[arg(long)]
    pub tol_symmetry: Option<f64>,
    /// Accepted touch distance, in sampling pitches.
    #[arg(long)]
    pub tol_touch: Option<f64>,
    /// Scale the sphere radii of the fixture by `1 + EPS` and move the
    /// centers by `EPS` in a seeded random direction (fault injection).
    #[arg(long, allow_hyphen_values = true)]
    pub perturb_sphere: Option<f64>,
    /// Seed for the fault-injection direction.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Only classify the fixture.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_only: Option<bool>,
}

macro_rules! layer {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Params {
    /// Fill unset fields from `other`.
    pub fn or(mut self, other: &Params) -> Params {
        layer!(self, other; out, family, h, force, scale, u_range, length, sphere_distance, contact_angle,
            radius, root, grid, rho, fixture, cloud, hint, spacing, thetas, tol_contact, tol_symmetry,
            tol_touch, perturb_sphere, seed, case_only);
        self
    }

    /// Flags layered over the config file named by `--config`, if any.
    pub fn resolve(self) -> Result<RunConfig> {
        let merged = match &self.config {
            Some(path) => {
                let file = read_config(path)?;
                self.or(&file)
            }
            None => self,
        };
        RunConfig::from_params(merged)
    }
}

fn read_config(path: &Path) -> Result<Params> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

/// Resolved parameters with defaults applied and invariants checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub out: PathBuf,
    pub family: Option<FamilyArg>,
    pub h: Option<f64>,
    pub force: Option<f64>,
    pub scale: f64,
    pub u_range: Option<(f64, f64)>,
    pub length: f64,
    pub sphere_distance: Option<f64>,
    pub contact_angle: Option<f64>,
    pub radius: f64,
    pub root: RootChoice,
    pub grid: Grid,
    pub rho: f64,
    pub fixture: Option<PathBuf>,
    pub cloud: Option<PathBuf>,
    pub hint: Option<[f64; 6]>,
    pub spacing: f64,
    pub thetas: usize,
    pub tol_contact: f64,
    pub tol_symmetry: f64,
    pub tol_touch: f64,
    pub perturb_sphere: Option<f64>,
    pub seed: u64,
    pub case_only: bool,
}

/// Smallest accepted grid resolution per direction.
pub const MIN_RESOLUTION: usize = 16;

pub fn parse_grid(s: &str) -> Result<Grid> {
    let (a, b) = s
        .split_once(['x', 'X'])
        .with_context(|| format!("grid must look like NxM, got {s:?}"))?;
    let nu: usize = a
        .trim()
        .parse()
        .with_context(|| format!("bad grid count {a:?}"))?;
    let nv: usize = b
        .trim()
        .parse()
        .with_context(|| format!("bad grid count {b:?}"))?;
    if nu < MIN_RESOLUTION || nv < MIN_RESOLUTION {
        bail!("grid resolution must be at least {MIN_RESOLUTION} in each direction, got {nu}x{nv}");
    }
    Ok(Grid::new(nu, nv))
}

pub fn parse_range(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .with_context(|| format!("range must look like a:b, got {s:?}"))?;
    let lo: f64 = a
        .trim()
        .parse()
        .with_context(|| format!("bad range bound {a:?}"))?;
    let hi: f64 = b
        .trim()
        .parse()
        .with_context(|| format!("bad range bound {b:?}"))?;
    if lo >= hi || lo.is_nan() || hi.is_nan() {
        bail!("range {s:?} is empty");
    }
    Ok((lo, hi))
}

fn parse_hint(s: &str) -> Result<[f64; 6]> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad hint value {t:?}"))
        })
        .collect::<Result<_>>()?;
    let arr: [f64; 6] = vals
        .try_into()
        .map_err(|_| anyhow::anyhow!("hint needs six comma-separated numbers"))?;
    if arr[3] == 0.0 && arr[4] == 0.0 && arr[5] == 0.0 {
        bail!("hint direction is zero");
    }
    Ok(arr)
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        bail!("{name} must be positive, got {x}");
    }
    Ok(x)
}

impl RunConfig {
    pub fn from_params(p: Params) -> Result<Self> {
        let cfg = RunConfig {
            out: p.out.unwrap_or_else(|| PathBuf::from("out")),
            family: p.family,
            h: p.h,
            force: p.force,
            scale: positive("scale", p.scale.unwrap_or(1.0))?,
            u_range: p.u_range.as_deref().map(parse_range).transpose()?,
            length: positive("length", p.length.unwrap_or(2.0 * std::f64::consts::PI))?,
            sphere_distance: p.sphere_distance,
            contact_angle: p.contact_angle,
            radius: positive("radius", p.radius.unwrap_or(1.0))?,
            root: p.root.unwrap_or(RootArg::Largest).into(),
            grid: p
                .grid
                .as_deref()
                .map(parse_grid)
                .transpose()?
                .unwrap_or(Grid::new(64, 64)),
            rho: p.rho.unwrap_or(1.0),
            fixture: p.fixture,
            cloud: p.cloud,
            hint: p.hint.as_deref().map(parse_hint).transpose()?,
            spacing: positive("spacing", p.spacing.unwrap_or(0.02))?,
            thetas: p.thetas.unwrap_or(32),
            tol_contact: positive("tol-contact", p.tol_contact.unwrap_or(2.0))?,
            tol_symmetry: positive("tol-symmetry", p.tol_symmetry.unwrap_or(2.0))?,
            tol_touch: positive("tol-touch", p.tol_touch.unwrap_or(2.0))?,
            perturb_sphere: p.perturb_sphere,
            seed: p.seed.unwrap_or(0),
            case_only: p.case_only.unwrap_or(false),
        };
        if cfg.thetas == 0 {
            bail!("thetas must be positive");
        }
        if !cfg.rho.is_finite() {
            bail!("rho must be finite");
        }
        Ok(cfg)
    }
}
