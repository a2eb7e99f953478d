//! Self-intersection test for a sampled patch.
//!
//! The parameter grid is triangulated, coincident vertices are welded (so
//! cone points and the periodic seam do not count as crossings), and every
//! pair of triangles without a shared vertex whose bounding boxes share a
//! hash cell is tested edge-against-triangle in both directions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::surface::{Grid, Patch};
use crate::{Error, Result, Vec3};

const WELD_TOL: f64 = 1e-9;

/// Two crossing triangles and a point on both.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntersectionWitness {
    pub first: [Vec3; 3],
    pub second: [Vec3; 3],
    pub point: Vec3,
}

type Cell = (i64, i64, i64);

fn cell_of(p: Vec3, size: f64) -> Cell {
    (
        libm::floor(p.x / size) as i64,
        libm::floor(p.y / size) as i64,
        libm::floor(p.z / size) as i64,
    )
}

/// Map every sample to the index of the first sample within `WELD_TOL`.
fn weld(points: &[Vec3]) -> Vec<usize> {
    let size = 4.0 * WELD_TOL;
    let mut cells: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    let mut ids = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        let c = cell_of(p, size);
        let mut found = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = cells.get(&(c.0 + dx, c.1 + dy, c.2 + dz)) {
                        if let Some(&j) = list.iter().find(|&&j| points[j].dist(p) <= WELD_TOL) {
                            found = Some(j);
                            break 'search;
                        }
                    }
                }
            }
        }
        match found {
            Some(j) => ids.push(j),
            None => {
                cells.entry(c).or_default().push(i);
                ids.push(i);
            }
        }
    }
    ids
}

/// Segment `p + t (q - p)`, `t ∈ (0, 1)`, against the open triangle.
fn segment_hits_triangle(p: Vec3, q: Vec3, tri: &[Vec3; 3]) -> Option<Vec3> {
    let d = q - p;
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let pv = d.cross(e2);
    let det = e1.dot(pv);
    let scale = e1.norm() * e2.norm() * d.norm();
    if libm::fabs(det) <= 1e-12 * scale {
        return None;
    }
    let inv = 1.0 / det;
    let tv = p - tri[0];
    let a = tv.dot(pv) * inv;
    if !(a > 1e-9 && a < 1.0 - 1e-9) {
        return None;
    }
    let qv = tv.cross(e1);
    let b = d.dot(qv) * inv;
    if !(b > 1e-9 && a + b < 1.0 - 1e-9) {
        return None;
    }
    let t = e2.dot(qv) * inv;
    (t > 1e-9 && t < 1.0 - 1e-9).then(|| p + d * t)
}

fn triangles_cross(a: &[Vec3; 3], b: &[Vec3; 3]) -> Option<Vec3> {
    for (x, y) in [(a, b), (b, a)] {
        for k in 0..3 {
            if let Some(p) = segment_hits_triangle(x[k], x[(k + 1) % 3], y) {
                return Some(p);
            }
        }
    }
    None
}

/// First crossing found on the triangulated `grid` sampling of `patch`, or
/// `None` when the sampled surface is embedded.
pub fn self_intersection_check<P: Patch + ?Sized>(
    patch: &P,
    grid: Grid,
) -> Result<Option<IntersectionWitness>> {
    if grid.nu < 2 || grid.nv < 3 {
        return Err(Error::Config(
            "self-intersection check needs at least a 2 x 3 grid".into(),
        ));
    }
    let us = grid.u_values(patch);
    let vs = grid.v_values(patch);
    let (nu, nv) = (us.len(), vs.len());
    let periodic = patch.periodic_v();
    let mut points = Vec::with_capacity(nu * nv);
    for &u in &us {
        for &v in &vs {
            let p = patch.position(u, v);
            if !p.is_finite() {
                return Err(Error::DegeneratePoint { u, v });
            }
            points.push(p);
        }
    }
    let ids = weld(&points);
    let idx = |i: usize, j: usize| ids[i * nv + j % nv];
    let cols = if periodic { nv } else { nv - 1 };
    let mut tris: Vec<[usize; 3]> = Vec::with_capacity(2 * (nu - 1) * cols);
    for i in 0..nu - 1 {
        for j in 0..cols {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            for t in [[a, b, c], [a, c, d]] {
                if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                    continue;
                }
                let area = (points[t[1]] - points[t[0]])
                    .cross(points[t[2]] - points[t[0]])
                    .norm();
                if area > 1e-20 {
                    tris.push(t);
                }
            }
        }
    }
    if tris.is_empty() {
        return Ok(None);
    }
    let mean_edge = tris
        .iter()
        .map(|t| {
            points[t[0]].dist(points[t[1]])
                + points[t[1]].dist(points[t[2]])
                + points[t[2]].dist(points[t[0]])
        })
        .sum::<f64>()
        / (3.0 * tris.len() as f64);
    let size = 2.0 * mean_edge.max(1e-12);
    let bbox = |t: &[usize; 3]| {
        let mut lo = points[t[0]];
        let mut hi = lo;
        for &k in &t[1..] {
            let p = points[k];
            lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        (lo, hi)
    };
    let boxes: Vec<(Vec3, Vec3)> = tris.iter().map(bbox).collect();
    let mut cells: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
    for (k, (lo, hi)) in boxes.iter().enumerate() {
        let (a, b) = (cell_of(*lo, size), cell_of(*hi, size));
        for x in a.0..=b.0 {
            for y in a.1..=b.1 {
                for z in a.2..=b.2 {
                    cells.entry((x, y, z)).or_default().push(k);
                }
            }
        }
    }
    for (cell, list) in &cells {
        for (n, &s) in list.iter().enumerate() {
            for &t in &list[n + 1..] {
                let (ta, tb) = (tris[s], tris[t]);
                if ta.iter().any(|x| tb.contains(x)) {
                    continue;
                }
                let (la, ha) = boxes[s];
                let (lb, hb) = boxes[t];
                let lo = Vec3::new(la.x.max(lb.x), la.y.max(lb.y), la.z.max(lb.z));
                let hi = Vec3::new(ha.x.min(hb.x), ha.y.min(hb.y), ha.z.min(hb.z));
                if lo.x > hi.x || lo.y > hi.y || lo.z > hi.z {
                    continue;
                }
                // Visit each pair once: in the cell holding the overlap's low corner.
                if cell_of(lo, size) != *cell {
                    continue;
                }
                let a = [points[ta[0]], points[ta[1]], points[ta[2]]];
                let b = [points[tb[0]], points[tb[1]], points[tb[2]]];
                if let Some(point) = triangles_cross(&a, &b) {
                    return Ok(Some(IntersectionWitness {
                        first: a,
                        second: b,
                        point,
                    }));
                }
            }
        }
    }
    Ok(None)
}
