//! OBJ meshes, CSV tables, `x y z` point clouds and JSON documents.
//!
//! Floating-point values in CSV, OBJ and xyz output are written with 17
//! significant digits, so they read back bit for bit. JSON goes through
//! `serde_json`, whose shortest round-trip formatting has the same
//! property.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use annulus_core::delaunay::ProfileCurve;
use annulus_core::surface::{curvature, fundamental_forms, Grid, Patch};
use annulus_core::symmetry::PointCloud;
use annulus_core::Vec3;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn vertices<P: Patch + ?Sized>(patch: &P, grid: Grid) -> (Vec<f64>, Vec<f64>) {
    (grid.u_values(patch), grid.v_values(patch))
}

/// Triangulated OBJ with one vertex and normal per grid sample, in grid
/// order (`u` outer, `v` inner). Faces are counterclockwise about the
/// patch normal. Samples with a non-finite normal (cone points of an
/// offset) get a zero normal.
pub fn obj_string<P: Patch + ?Sized>(patch: &P, grid: Grid) -> Result<String> {
    let (us, vs) = vertices(patch, grid);
    let (nu, nv) = (us.len(), vs.len());
    let mut out = String::new();
    writeln!(out, "# {nu} x {nv} grid")?;
    for &u in &us {
        for &v in &vs {
            let p = patch.position(u, v);
            if !p.is_finite() {
                bail!("non-finite position at (u, v) = ({u}, {v})");
            }
            writeln!(out, "v {} {} {}", num(p.x), num(p.y), num(p.z))?;
        }
    }
    for &u in &us {
        for &v in &vs {
            let n = patch.normal(u, v);
            let n = if n.is_finite() { n } else { Vec3::ZERO };
            writeln!(out, "vn {} {} {}", num(n.x), num(n.y), num(n.z))?;
        }
    }
    let cols = if patch.periodic_v() { nv } else { nv - 1 };
    // X_u × X_v agrees with the patch normal up to the orientation sign.
    let flip = patch.orientation().sign() < 0.0;
    let id = |i: usize, j: usize| i * nv + j % nv + 1;
    for i in 0..nu - 1 {
        for j in 0..cols {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            for mut t in [[a, b, c], [a, c, d]] {
                if flip {
                    t.swap(1, 2);
                }
                writeln!(out, "f {0}//{0} {1}//{1} {2}//{2}", t[0], t[1], t[2])?;
            }
        }
    }
    Ok(out)
}

pub const CURVATURE_HEADER: &str = "u,v,x,y,z,lambda_sq,H,K,kappa1,kappa2";

/// Per-vertex table in the same order as [`obj_string`]. Curvature fields
/// are `NaN` where the metric degenerates.
pub fn curvature_csv<P: Patch + ?Sized>(patch: &P, grid: Grid) -> Result<String> {
    let (us, vs) = vertices(patch, grid);
    let mut out = String::from(CURVATURE_HEADER);
    out.push('\n');
    for &u in &us {
        for &v in &vs {
            let jet = patch.jet(u, v);
            let p = jet.position;
            let (lsq, h, k, k1, k2) = match fundamental_forms(patch, u, v) {
                Ok(f) => {
                    let c = curvature(&f);
                    (f.lambda_sq.unwrap_or(f.e), c.h, c.k, c.kappa1, c.kappa2)
                }
                Err(_) => (jet.du.norm_sq(), f64::NAN, f64::NAN, f64::NAN, f64::NAN),
            };
            let row = [u, v, p.x, p.y, p.z, lsq, h, k, k1, k2].map(num);
            writeln!(out, "{}", row.join(","))?;
        }
    }
    Ok(out)
}

/// Meridian samples `s, r, z, phi, u` for plotting.
pub fn profile_csv(profile: &ProfileCurve) -> Result<String> {
    let mut out = String::from("s,r,z,phi,u\n");
    for s in &profile.samples {
        writeln!(
            out,
            "{},{},{},{},{}",
            num(s.s),
            num(s.r),
            num(s.z),
            num(s.phi),
            num(s.u)
        )?;
    }
    Ok(out)
}

pub fn xyz_string(cloud: &PointCloud) -> Result<String> {
    let mut out = String::new();
    for p in &cloud.points {
        writeln!(out, "{} {} {}", num(p.x), num(p.y), num(p.z))?;
    }
    Ok(out)
}

/// Whitespace- or comma-separated `x y z` lines; extra columns (normals)
/// are read when there are six. Blank lines and `#` comments are skipped.
pub fn parse_xyz(text: &str) -> Result<PointCloud> {
    let mut points = Vec::new();
    let mut normals = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals: Vec<f64> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .with_context(|| format!("line {}: bad number {t:?}", k + 1))
            })
            .collect::<Result<_>>()?;
        match vals.len() {
            3 => points.push(Vec3::new(vals[0], vals[1], vals[2])),
            6 => {
                points.push(Vec3::new(vals[0], vals[1], vals[2]));
                normals.push(Vec3::new(vals[3], vals[4], vals[5]));
            }
            n => bail!("line {}: expected 3 or 6 columns, found {n}", k + 1),
        }
    }
    let cloud = PointCloud::new(points).map_err(|e| anyhow::anyhow!("{e}"))?;
    if normals.is_empty() {
        Ok(cloud)
    } else if normals.len() == cloud.len() {
        cloud
            .with_normals(normals)
            .map_err(|e| anyhow::anyhow!("{e}"))
    } else {
        bail!("normals given on some lines only")
    }
}

pub fn json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
