use alloc::vec::Vec;

use crate::Vec3;

/// Most cells a grid may allocate; the cell size grows to respect it.
const MAX_CELLS: usize = 1 << 22;

/// Uniform bucket grid over a fixed point set for nearest-neighbor and
/// fixed-radius queries.
#[derive(Debug, Clone)]
pub struct SpatialGrid<'a> {
    points: &'a [Vec3],
    origin: Vec3,
    cell: f64,
    dims: [usize; 3],
    starts: Vec<u32>,
    order: Vec<u32>,
}

impl<'a> SpatialGrid<'a> {
    /// Grid with cells of roughly `cell` (enlarged if the box would need too
    /// many cells). `points` must be nonempty and finite.
    pub fn new(points: &'a [Vec3], cell: f64) -> Self {
        let mut lo = points[0];
        let mut hi = points[0];
        for p in points {
            lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        let ext = hi - lo;
        let mut cell = if cell > 0.0 { cell } else { 1.0 };
        let dims = loop {
            let d = [ext.x, ext.y, ext.z].map(|e| (libm::floor(e / cell) as usize) + 1);
            if d[0].saturating_mul(d[1]).saturating_mul(d[2]) <= MAX_CELLS {
                break d;
            }
            cell *= 1.5;
        };
        let n_cells = dims[0] * dims[1] * dims[2];
        let mut grid = Self {
            points,
            origin: lo,
            cell,
            dims,
            starts: alloc::vec![0; n_cells + 1],
            order: Vec::new(),
        };
        let ids: Vec<usize> = points.iter().map(|p| grid.index(grid.coords(*p))).collect();
        for &c in &ids {
            grid.starts[c + 1] += 1;
        }
        for c in 0..n_cells {
            grid.starts[c + 1] += grid.starts[c];
        }
        let mut fill = grid.starts.clone();
        grid.order = alloc::vec![0; points.len()];
        for (i, &c) in ids.iter().enumerate() {
            grid.order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        grid
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    fn coords(&self, p: Vec3) -> [usize; 3] {
        let d = p - self.origin;
        let f = |x: f64, n: usize| (libm::floor(x / self.cell).max(0.0) as usize).min(n - 1);
        [
            f(d.x, self.dims[0]),
            f(d.y, self.dims[1]),
            f(d.z, self.dims[2]),
        ]
    }

    fn index(&self, c: [usize; 3]) -> usize {
        (c[0] * self.dims[1] + c[1]) * self.dims[2] + c[2]
    }

    fn bucket(&self, c: [usize; 3]) -> &[u32] {
        let k = self.index(c);
        &self.order[self.starts[k] as usize..self.starts[k + 1] as usize]
    }

    /// Cells at Chebyshev distance exactly `r` from `c`.
    fn ring(&self, c: [usize; 3], r: usize, mut f: impl FnMut([usize; 3])) {
        let r = r as i64;
        let lo = |k: usize| (c[k] as i64 - r).max(0);
        let hi = |k: usize| (c[k] as i64 + r).min(self.dims[k] as i64 - 1);
        let cz = c[2] as i64;
        for x in lo(0)..=hi(0) {
            let x_face = (x - c[0] as i64).abs() == r;
            for y in lo(1)..=hi(1) {
                if x_face || (y - c[1] as i64).abs() == r {
                    for z in lo(2)..=hi(2) {
                        f([x as usize, y as usize, z as usize]);
                    }
                } else {
                    // Only the two z faces remain, when they exist.
                    for z in [cz - r, cz + r] {
                        if z >= 0 && z < self.dims[2] as i64 {
                            f([x as usize, y as usize, z as usize]);
                        }
                    }
                }
            }
        }
    }

    fn max_ring(&self) -> usize {
        self.dims.iter().copied().max().unwrap_or(1)
    }

    /// Nearest point accepted by `keep`, with its distance.
    pub fn nearest(&self, q: Vec3, keep: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
        self.nearest_rings(q, self.max_ring(), keep)
    }

    /// Nearest point within `radius` of `q`, if any.
    pub fn nearest_within(
        &self,
        q: Vec3,
        radius: f64,
        keep: impl Fn(usize) -> bool,
    ) -> Option<(usize, f64)> {
        let reach = (libm::ceil(radius / self.cell) as usize + 1).min(self.max_ring());
        self.nearest_rings(q, reach, keep)
            .filter(|&(_, d)| d <= radius)
    }

    fn nearest_rings(
        &self,
        q: Vec3,
        reach: usize,
        keep: impl Fn(usize) -> bool,
    ) -> Option<(usize, f64)> {
        let c = self.coords(q);
        let mut best: Option<(usize, f64)> = None;
        for r in 0..=reach {
            self.ring(c, r, |cc| {
                for &i in self.bucket(cc) {
                    let i = i as usize;
                    if !keep(i) {
                        continue;
                    }
                    let d = self.points[i].dist(q);
                    if best.is_none_or(|(_, b)| d < b) {
                        best = Some((i, d));
                    }
                }
            });
            // Every cell in ring r + 1 is at least r cells away.
            if let Some((_, b)) = best {
                if b <= r as f64 * self.cell {
                    break;
                }
            }
        }
        best
    }

    /// Some point accepted by `keep` within `radius` of `q`.
    pub fn any_within(&self, q: Vec3, radius: f64, keep: impl Fn(usize) -> bool) -> Option<usize> {
        let c = self.coords(q);
        let reach = (libm::ceil(radius / self.cell) as usize + 1).min(self.max_ring());
        let mut found = None;
        for r in 0..=reach {
            self.ring(c, r, |cc| {
                if found.is_some() {
                    return;
                }
                found = self
                    .bucket(cc)
                    .iter()
                    .map(|&i| i as usize)
                    .find(|&i| keep(i) && self.points[i].dist(q) <= radius);
            });
            if found.is_some() {
                break;
            }
        }
        found
    }
}
