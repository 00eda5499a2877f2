use crate::geometry::{Domain, Point2, PointSet2D, Topology};
use crate::scalar::Scalar;

/// Uniform bucket grid over a point set, cell size close to the mean
/// spacing `sqrt(area / n)`.
///
/// Queries evaluate the same metric as [`super::distance`], pair by pair,
/// so results match an exhaustive scan exactly.
#[derive(Debug, Clone)]
pub struct NeighborIndex<'a, T> {
    points: &'a [Point2<T>],
    domain: Domain<T>,
    nx: usize,
    ny: usize,
    cell_w: T,
    cell_h: T,
    // CSR layout: indices of cell c are entries[starts[c]..starts[c + 1]]
    starts: Vec<usize>,
    entries: Vec<usize>,
}

const MAX_CELLS_PER_AXIS: usize = 4096;

impl<'a, T: Scalar> NeighborIndex<'a, T> {
    pub fn new(ps: &'a PointSet2D<T>) -> Self {
        Self::from_parts(ps.points(), *ps.domain())
    }

    /// Builds over raw positions; all must lie inside `domain`.
    pub fn from_parts(points: &'a [Point2<T>], domain: Domain<T>) -> Self {
        let n = points.len().max(1) as f64;
        let w = domain.width().as_f64();
        let h = domain.height().as_f64();
        let spacing = (w * h / n).sqrt();
        let nx = ((w / spacing).floor() as usize).clamp(1, MAX_CELLS_PER_AXIS);
        let ny = ((h / spacing).floor() as usize).clamp(1, MAX_CELLS_PER_AXIS);
        let cell_w = domain.width() / T::from_usize_lossy(nx);
        let cell_h = domain.height() / T::from_usize_lossy(ny);

        let mut index = Self {
            points,
            domain,
            nx,
            ny,
            cell_w,
            cell_h,
            starts: vec![0; nx * ny + 1],
            entries: vec![0; points.len()],
        };
        let cells: Vec<usize> = points.iter().map(|p| index.cell_of(*p)).collect();
        for &c in &cells {
            index.starts[c + 1] += 1;
        }
        for c in 0..nx * ny {
            index.starts[c + 1] += index.starts[c];
        }
        let mut fill = index.starts.clone();
        for (i, &c) in cells.iter().enumerate() {
            index.entries[fill[c]] = i;
            fill[c] += 1;
        }
        index
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    fn axis_cell(v: T, size: T, count: usize) -> usize {
        let c = (v / size).floor();
        if c <= T::zero() {
            0
        } else {
            c.to_usize().unwrap_or(count - 1).min(count - 1)
        }
    }

    fn cell_of(&self, p: Point2<T>) -> usize {
        let cx = Self::axis_cell(p.x, self.cell_w, self.nx);
        let cy = Self::axis_cell(p.y, self.cell_h, self.ny);
        cy * self.nx + cx
    }

    fn cell_entries(&self, cx: usize, cy: usize) -> &[usize] {
        let c = cy * self.nx + cx;
        &self.entries[self.starts[c]..self.starts[c + 1]]
    }

    /// Offsets along one axis that address distinct cells: `lo..=hi`.
    fn offset_range(&self, count: usize) -> (isize, isize) {
        match self.domain.topology() {
            Topology::Toroidal => {
                let lo = -(((count - 1) / 2) as isize);
                (lo, lo + count as isize - 1)
            }
            Topology::Bounded => (-(count as isize - 1), count as isize - 1),
        }
    }

    fn resolve(&self, base: usize, off: isize, count: usize) -> Option<usize> {
        let c = base as isize + off;
        match self.domain.topology() {
            Topology::Toroidal => Some(c.rem_euclid(count as isize) as usize),
            Topology::Bounded => (0..count as isize).contains(&c).then_some(c as usize),
        }
    }

    /// Nearest other point to entry `i`: `(index, distance)`.
    ///
    /// Ties resolve to the lowest index. Requires at least two points.
    pub fn nearest(&self, i: usize) -> (usize, T) {
        self.nearest_to(self.points[i], Some(i))
            .expect("nearest neighbor query needs at least two points")
    }

    /// Nearest point to an arbitrary location, optionally skipping one entry.
    pub fn nearest_to(&self, q: Point2<T>, exclude: Option<usize>) -> Option<(usize, T)> {
        let qx = Self::axis_cell(q.x, self.cell_w, self.nx);
        let qy = Self::axis_cell(q.y, self.cell_h, self.ny);
        let (xlo, xhi) = self.offset_range(self.nx);
        let (ylo, yhi) = self.offset_range(self.ny);
        let max_ring = xlo.abs().max(xhi).max(ylo.abs()).max(yhi);
        let cmin = self.cell_w.min(self.cell_h);
        let slack = T::one() - T::lit(1e-9);

        let mut best: Option<(usize, T)> = None;
        for ring in 0..=max_ring {
            for dy in (-ring).max(ylo)..=ring.min(yhi) {
                let Some(cy) = self.resolve(qy, dy, self.ny) else {
                    continue;
                };
                let mut visit = |dx: isize| {
                    let Some(cx) = self.resolve(qx, dx, self.nx) else {
                        return;
                    };
                    for &j in self.cell_entries(cx, cy) {
                        if Some(j) == exclude {
                            continue;
                        }
                        let d = self.domain.metric(q, self.points[j]);
                        best = match best {
                            Some((bj, bd)) if bd < d || (bd == d && bj < j) => Some((bj, bd)),
                            _ => Some((j, d)),
                        };
                    }
                };
                if dy.abs() == ring {
                    for dx in (-ring).max(xlo)..=ring.min(xhi) {
                        visit(dx);
                    }
                } else {
                    // interior rows only contribute their two edge columns
                    if -ring >= xlo {
                        visit(-ring);
                    }
                    if ring <= xhi {
                        visit(ring);
                    }
                }
            }
            if let Some((_, bd)) = best {
                let reach = T::from_usize_lossy(ring as usize) * cmin * slack;
                if bd <= reach {
                    break;
                }
            }
        }
        best
    }

    /// Calls `visit(j, distance)` for every entry within `radius` of `q`.
    pub fn for_each_within(&self, q: Point2<T>, radius: T, mut visit: impl FnMut(usize, T)) {
        let span = |size: T, count: usize| -> (isize, isize) {
            let k = (radius / size).ceil().to_isize().unwrap_or(isize::MAX / 4) + 1;
            let (lo, hi) = self.offset_range(count);
            ((-k).max(lo), k.min(hi))
        };
        let (xlo, xhi) = span(self.cell_w, self.nx);
        let (ylo, yhi) = span(self.cell_h, self.ny);
        let qx = Self::axis_cell(q.x, self.cell_w, self.nx);
        let qy = Self::axis_cell(q.y, self.cell_h, self.ny);
        for dy in ylo..=yhi {
            let Some(cy) = self.resolve(qy, dy, self.ny) else {
                continue;
            };
            for dx in xlo..=xhi {
                let Some(cx) = self.resolve(qx, dx, self.nx) else {
                    continue;
                };
                for &j in self.cell_entries(cx, cy) {
                    let d = self.domain.metric(q, self.points[j]);
                    if d <= radius {
                        visit(j, d);
                    }
                }
            }
        }
    }
}
