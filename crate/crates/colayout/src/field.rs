//! Discretized scalar fields over the room: the scene SDF, the robot's free
//! space, the accessible region, per-object interaction fields, and grid
//! path planning.

use std::collections::BinaryHeap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{sd_rect, sd_room_interior, Point2};
use crate::num::{count, real, Real};
use crate::scene::{Scene, SceneObject, Side};

/// A scalar field sampled at cell centers, origin at the room corner.
/// Values are stored row-major by y: `index = iy * nx + ix`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid<R> {
    resolution: R,
    nx: usize,
    ny: usize,
    values: Vec<R>,
}

impl<R: Real> FieldGrid<R> {
    /// An all-zero grid covering `width x height` at `resolution` m/cell.
    /// Cell counts round up so the grid always covers the room.
    pub fn for_room(width: R, height: R, resolution: R) -> Result<Self> {
        if !(resolution.is_finite() && resolution > R::zero()) {
            return Err(Error::InvalidArgument(
                "resolution must be finite and positive".into(),
            ));
        }
        let nx = (width / resolution).ceil().to_usize().unwrap_or(0);
        let ny = (height / resolution).ceil().to_usize().unwrap_or(0);
        if nx < 3 || ny < 3 {
            return Err(Error::GridTooCoarse { nx, ny });
        }
        Ok(Self {
            resolution,
            nx,
            ny,
            values: vec![R::zero(); nx * ny],
        })
    }

    #[inline]
    pub fn resolution(&self) -> R {
        self.resolution
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.nx && iy < self.ny);
        iy * self.nx + ix
    }

    #[inline]
    pub fn get(&self, ix: usize, iy: usize) -> R {
        self.values[self.index(ix, iy)]
    }

    #[inline]
    pub fn set(&mut self, ix: usize, iy: usize, v: R) {
        let i = self.index(ix, iy);
        self.values[i] = v;
    }

    #[inline]
    pub fn values(&self) -> &[R] {
        &self.values
    }

    /// Center of cell `(ix, iy)` in room coordinates.
    #[inline]
    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2<R> {
        let half = real::<R>(0.5);
        Point2::new(
            (count::<R>(ix) + half) * self.resolution,
            (count::<R>(iy) + half) * self.resolution,
        )
    }

    /// Cell containing a point, if the point is on the grid.
    pub fn cell_of(&self, p: Point2<R>) -> Option<(usize, usize)> {
        cell_of_point(self.resolution, self.nx, self.ny, p)
    }

    /// Clamp a point to the grid and return its cell.
    pub fn nearest_cell(&self, p: Point2<R>) -> (usize, usize) {
        let clamp = |v: R, n: usize| -> usize {
            let i = (v / self.resolution).floor();
            if i < R::zero() {
                0
            } else {
                i.to_usize().unwrap_or(n - 1).min(n - 1)
            }
        };
        (clamp(p.x, self.nx), clamp(p.y, self.ny))
    }

    pub fn min_value(&self) -> R {
        self.values.iter().copied().fold(R::infinity(), R::min)
    }

    pub fn max_value(&self) -> R {
        self.values.iter().copied().fold(R::neg_infinity(), R::max)
    }
}

/// The scene SDF `f_B`: per cell, the exact minimum over all object signed
/// distances and the room-interior distance, evaluated analytically at the
/// cell center.
pub fn scene_sdf<R: Real>(scene: &Scene<R>, resolution: R) -> Result<FieldGrid<R>> {
    let mut grid = FieldGrid::for_room(scene.room.width, scene.room.height, resolution)?;
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let q = grid.cell_center(ix, iy);
            let mut d = sd_room_interior(q, &scene.room);
            for obj in &scene.objects {
                d = d.min(sd_rect(q, &obj.footprint));
            }
            grid.set(ix, iy, d);
        }
    }
    Ok(grid)
}

/// The robot free-space field `f_R = f_B - r_b`, exact per cell.
pub fn free_space<R: Real>(grid: &FieldGrid<R>, r_b: R) -> FieldGrid<R> {
    let mut out = grid.clone();
    for v in &mut out.values {
        *v = *v - r_b;
    }
    out
}

/// The single 4-connected component of positive free space containing the
/// seed cell.
#[derive(Clone, Debug, PartialEq)]
pub struct AccessibleRegion<R> {
    resolution: R,
    nx: usize,
    ny: usize,
    mask: Vec<bool>,
    seed_cell: (usize, usize),
}

impl<R: Real> AccessibleRegion<R> {
    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn resolution(&self) -> R {
        self.resolution
    }

    #[inline]
    pub fn seed_cell(&self) -> (usize, usize) {
        self.seed_cell
    }

    #[inline]
    pub fn contains(&self, ix: usize, iy: usize) -> bool {
        ix < self.nx && iy < self.ny && self.mask[iy * self.nx + ix]
    }

    pub fn cell_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Mask cell count times the cell area, exactly.
    pub fn area(&self) -> R {
        count::<R>(self.cell_count()) * self.resolution * self.resolution
    }

    #[inline]
    pub fn cell_center(&self, ix: usize, iy: usize) -> Point2<R> {
        let half = real::<R>(0.5);
        Point2::new(
            (count::<R>(ix) + half) * self.resolution,
            (count::<R>(iy) + half) * self.resolution,
        )
    }
}

/// Flood-fill the free-space grid from the seed: the cell with positive
/// clearance nearest `seed_hint` when given, otherwise the cell with maximal
/// clearance. Ties pick the lowest row-major index. Errors when no cell has
/// positive clearance.
pub fn accessible_region<R: Real>(
    free: &FieldGrid<R>,
    seed_hint: Option<Point2<R>>,
) -> Result<AccessibleRegion<R>> {
    let nx = free.nx;
    let ny = free.ny;
    let mut seed: Option<(usize, usize)> = None;
    match seed_hint {
        Some(hint) => {
            let mut best = R::infinity();
            for iy in 0..ny {
                for ix in 0..nx {
                    if free.get(ix, iy) > R::zero() {
                        let d = free.cell_center(ix, iy).distance(hint);
                        if d < best {
                            best = d;
                            seed = Some((ix, iy));
                        }
                    }
                }
            }
        }
        None => {
            let mut best = R::neg_infinity();
            for iy in 0..ny {
                for ix in 0..nx {
                    let v = free.get(ix, iy);
                    if v > R::zero() && v > best {
                        best = v;
                        seed = Some((ix, iy));
                    }
                }
            }
        }
    }
    let seed_cell = seed.ok_or(Error::NoFreeSpace)?;

    let mut mask = vec![false; nx * ny];
    let mut stack = vec![seed_cell];
    mask[seed_cell.1 * nx + seed_cell.0] = true;
    while let Some((ix, iy)) = stack.pop() {
        let push = |jx: usize, jy: usize, mask: &mut Vec<bool>, stack: &mut Vec<(usize, usize)>| {
            if !mask[jy * nx + jx] && free.get(jx, jy) > R::zero() {
                mask[jy * nx + jx] = true;
                stack.push((jx, jy));
            }
        };
        if ix > 0 {
            push(ix - 1, iy, &mut mask, &mut stack);
        }
        if ix + 1 < nx {
            push(ix + 1, iy, &mut mask, &mut stack);
        }
        if iy > 0 {
            push(ix, iy - 1, &mut mask, &mut stack);
        }
        if iy + 1 < ny {
            push(ix, iy + 1, &mut mask, &mut stack);
        }
    }

    Ok(AccessibleRegion {
        resolution: free.resolution,
        nx,
        ny,
        mask,
        seed_cell,
    })
}

/// Point evaluation of the pseudo-interaction function for one object:
/// a linear ramp from ±1 on the boundary to 0 at arm reach `d_max`, positive
/// on sides the robot can interact with and negative elsewhere.
pub fn interaction_value<R: Real>(obj: &SceneObject<R>, d_max: R, q: Point2<R>) -> R {
    let rect = &obj.footprint;
    let f_plus = sd_rect(q, rect).max(R::zero());
    let ramp = (R::one() - f_plus / d_max).max(R::zero());
    if ramp == R::zero() {
        return R::zero();
    }
    // Nearest boundary face in the object frame: the axis with the larger
    // boundary excess wins, x on ties.
    let p = rect.pose.to_frame(q);
    let ex = p.x.abs() - rect.half_extents.0;
    let ey = p.y.abs() - rect.half_extents.1;
    let side = if ex >= ey {
        if p.x >= R::zero() {
            Side::Front
        } else {
            Side::Back
        }
    } else if p.y >= R::zero() {
        Side::Left
    } else {
        Side::Right
    };
    if obj.interaction_sides.contains(&side) {
        ramp
    } else {
        -ramp
    }
}

/// The pseudo-interaction field of one object, sampled on the same grid
/// geometry as `grid`. Values lie in `[-1, 1]` and vanish beyond `d_max`.
pub fn interaction_field<R: Real>(
    scene: &Scene<R>,
    object_id: &str,
    grid: &FieldGrid<R>,
) -> Result<FieldGrid<R>> {
    let obj = scene
        .object(object_id)
        .ok_or_else(|| Error::UnknownObject(object_id.to_string()))?;
    let mut out = FieldGrid {
        resolution: grid.resolution,
        nx: grid.nx,
        ny: grid.ny,
        values: vec![R::zero(); grid.nx * grid.ny],
    };
    for iy in 0..out.ny {
        for ix in 0..out.nx {
            let v = interaction_value(obj, scene.robot.d_max, out.cell_center(ix, iy));
            out.set(ix, iy, v);
        }
    }
    Ok(out)
}

/// Cell index window covering the object's footprint inflated by `margin`,
/// clamped to the grid. Cells outside it have zero interaction value.
pub fn interaction_window<R: Real>(
    obj: &SceneObject<R>,
    margin: R,
    grid: &FieldGrid<R>,
) -> (usize, usize, usize, usize) {
    let (lo, hi) = obj.footprint.aabb();
    let (x0, y0) = grid.nearest_cell(Point2::new(lo.x - margin, lo.y - margin));
    let (x1, y1) = grid.nearest_cell(Point2::new(hi.x + margin, hi.y + margin));
    (x0, y0, x1, y1)
}

// ---------------------------------------------------------------------------
// Grid path planning

/// Path costs are kept as move counts so that equal paths compare exactly:
/// `length = resolution * (straight + sqrt(2) * diagonal)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct MoveCount {
    straight: u32,
    diagonal: u32,
}

impl MoveCount {
    fn length<R: Real>(self, resolution: R) -> R {
        resolution * (count::<R>(self.straight as usize) + R::SQRT_2() * count::<R>(self.diagonal as usize))
    }
}

struct HeapEntry<R> {
    f: R,
    seq: u64,
    cell: (usize, usize),
}

impl<R: Real> PartialEq for HeapEntry<R> {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.seq == other.seq
    }
}
impl<R: Real> Eq for HeapEntry<R> {}
impl<R: Real> PartialOrd for HeapEntry<R> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<R: Real> Ord for HeapEntry<R> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Reversed: BinaryHeap is a max-heap and we want the smallest f first,
        // breaking ties by insertion order for determinism.
        other
            .f
            .partial_cmp(&self.f)
            .expect("finite path costs")
            .then(other.seq.cmp(&self.seq))
    }
}

const NEIGHBORS: [(i64, i64, bool); 8] = [
    (1, 0, false),
    (-1, 0, false),
    (0, 1, false),
    (0, -1, false),
    (1, 1, true),
    (1, -1, true),
    (-1, 1, true),
    (-1, -1, true),
];

fn octile<R: Real>(a: (usize, usize), b: (usize, usize), resolution: R) -> R {
    let dx = a.0.abs_diff(b.0) as u32;
    let dy = a.1.abs_diff(b.1) as u32;
    MoveCount {
        straight: dx.abs_diff(dy),
        diagonal: dx.min(dy),
    }
    .length(resolution)
}

fn cell_of_point<R: Real>(
    resolution: R,
    nx: usize,
    ny: usize,
    p: Point2<R>,
) -> Option<(usize, usize)> {
    if !(p.x >= R::zero() && p.y >= R::zero()) {
        return None;
    }
    let ix = (p.x / resolution).floor().to_usize()?;
    let iy = (p.y / resolution).floor().to_usize()?;
    if ix < nx && iy < ny {
        Some((ix, iy))
    } else {
        None
    }
}

fn snap_to_mask<R: Real>(region: &AccessibleRegion<R>, p: Point2<R>) -> Result<(usize, usize)> {
    match cell_of_point(region.resolution, region.nx, region.ny, p) {
        Some((ix, iy)) if region.contains(ix, iy) => Ok((ix, iy)),
        _ => Err(Error::Inaccessible {
            x: p.x.to_f64().unwrap_or(f64::NAN),
            y: p.y.to_f64().unwrap_or(f64::NAN),
        }),
    }
}

/// Shortest 8-connected path length between two points snapped to accessible
/// cells: A* with the octile heuristic, which matches Dijkstra exactly.
pub fn shortest_path<R: Real>(
    region: &AccessibleRegion<R>,
    a: Point2<R>,
    b: Point2<R>,
) -> Result<R> {
    let start = snap_to_mask(region, a)?;
    let goal = snap_to_mask(region, b)?;
    if start == goal {
        return Ok(R::zero());
    }

    let nx = region.nx;
    let idx = |c: (usize, usize)| c.1 * nx + c.0;
    let mut best: Vec<Option<MoveCount>> = vec![None; nx * region.ny];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    best[idx(start)] = Some(MoveCount {
        straight: 0,
        diagonal: 0,
    });
    heap.push(HeapEntry {
        f: octile(start, goal, region.resolution),
        seq,
        cell: start,
    });

    while let Some(entry) = heap.pop() {
        let cell = entry.cell;
        let g = best[idx(cell)].expect("queued cells have a cost");
        if cell == goal {
            return Ok(g.length(region.resolution));
        }
        // Stale queue entries are skipped via the f-value check.
        if entry.f > g.length(region.resolution) + octile(cell, goal, region.resolution) {
            continue;
        }
        for &(dx, dy, diag) in &NEIGHBORS {
            let jx = cell.0 as i64 + dx;
            let jy = cell.1 as i64 + dy;
            if jx < 0 || jy < 0 || jx as usize >= nx || jy as usize >= region.ny {
                continue;
            }
            let next = (jx as usize, jy as usize);
            if !region.contains(next.0, next.1) {
                continue;
            }
            let cand = MoveCount {
                straight: g.straight + u32::from(!diag),
                diagonal: g.diagonal + u32::from(diag),
            };
            let better = match best[idx(next)] {
                None => true,
                Some(old) => cand.length(region.resolution) < old.length(region.resolution),
            };
            if better {
                best[idx(next)] = Some(cand);
                seq += 1;
                heap.push(HeapEntry {
                    f: cand.length(region.resolution) + octile(next, goal, region.resolution),
                    seq,
                    cell: next,
                });
            }
        }
    }
    Err(Error::Disconnected)
}

/// Dump a grid as a 16-bit binary PGM (P5), values linearly mapped from
/// `[min, max]` to `[0, 65535]`, top image row = highest y.
pub fn write_pgm<R: Real>(grid: &FieldGrid<R>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let lo = grid.min_value();
    let hi = grid.max_value();
    let span = hi - lo;
    let mut data = Vec::with_capacity(grid.nx * grid.ny * 2 + 32);
    data.extend_from_slice(format!("P5\n{} {}\n65535\n", grid.nx, grid.ny).as_bytes());
    for iy in (0..grid.ny).rev() {
        for ix in 0..grid.nx {
            let v = grid.get(ix, iy);
            let t = if span > R::zero() {
                ((v - lo) / span).to_f64().unwrap_or(0.0)
            } else {
                0.0
            };
            let px = (t * 65535.0).round().clamp(0.0, 65535.0) as u16;
            data.extend_from_slice(&px.to_be_bytes());
        }
    }
    std::fs::write(path, data).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Scene;
    use approx::assert_relative_eq;

    fn empty_room_scene() -> Scene<f64> {
        Scene::from_json(
            r#"{
                "room": {"width": 10.0, "height": 10.0},
                "robot": {"r_b": 0.3, "d_max": 0.8},
                "objects": [
                    {"id": "c", "label": "cabinet", "pose": [9.5, 9.5, 0.0],
                     "half_extents": [0.4, 0.4], "movable": false}
                ]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn scene_sdf_center_of_empty_room() {
        let scene = Scene::<f64>::from_json(
            r#"{
                "room": {"width": 10.0, "height": 10.0},
                "robot": {"r_b": 0.3, "d_max": 0.8},
                "objects": [
                    {"id": "c", "label": "cabinet", "pose": [5.0, 5.0, 0.0],
                     "half_extents": [0.4, 0.4], "movable": false}
                ]
            }"#,
        )
        .unwrap();
        let grid = scene_sdf(&scene, 0.5).unwrap();
        // Cell at the object's center is negative.
        let (ix, iy) = grid.cell_of(Point2::new(5.0, 5.0)).unwrap();
        assert!(grid.get(ix, iy) < 0.0);
    }

    #[test]
    fn scene_sdf_rejects_coarse_grid() {
        let scene = empty_room_scene();
        assert!(matches!(
            scene_sdf(&scene, 6.0),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn free_space_is_exact_subtraction() {
        let scene = empty_room_scene();
        let grid = scene_sdf(&scene, 0.25).unwrap();
        let free = free_space(&grid, 0.3);
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                assert_eq!(free.get(ix, iy), grid.get(ix, iy) - 0.3);
            }
        }
    }

    #[test]
    fn accessible_region_covers_open_room() {
        let scene = empty_room_scene();
        let grid = scene_sdf(&scene, 0.25).unwrap();
        let free = free_space(&grid, 0.3);
        let region = accessible_region(&free, None).unwrap();
        let positive = free.values().iter().filter(|&&v| v > 0.0).count();
        assert_eq!(region.cell_count(), positive);
        assert_relative_eq!(region.area(), positive as f64 * 0.0625);
    }

    #[test]
    fn full_width_wall_disconnects() {
        // A wall of furniture across the middle splits the room.
        let scene = Scene::<f64>::from_json(
            r#"{
                "room": {"width": 10.0, "height": 10.0},
                "robot": {"r_b": 0.3, "d_max": 0.8, "seed_hint": [1.0, 5.0]},
                "objects": [
                    {"id": "w", "label": "wardrobe", "pose": [5.0, 5.0, 0.0],
                     "half_extents": [0.5, 5.0], "movable": false}
                ]
            }"#,
        )
        .unwrap();
        let grid = scene_sdf(&scene, 0.25).unwrap();
        let free = free_space(&grid, 0.3);
        let region = accessible_region(&free, scene.robot.seed_hint).unwrap();
        // Only the left half is reachable from the hint.
        for iy in 0..region.ny() {
            for ix in 0..region.nx() {
                if region.contains(ix, iy) {
                    assert!(region.cell_center(ix, iy).x < 5.0);
                }
            }
        }
        // The right half would be reachable from a right-side seed.
        let right = accessible_region(&free, Some(Point2::new(9.0, 5.0))).unwrap();
        assert!(right.cell_count() > 0);
        for iy in 0..right.ny() {
            for ix in 0..right.nx() {
                if right.contains(ix, iy) {
                    assert!(right.cell_center(ix, iy).x > 5.0);
                }
            }
        }
    }

    #[test]
    fn no_free_cell_errors() {
        let scene = Scene::<f64>::from_json(
            r#"{
                "room": {"width": 2.0, "height": 2.0},
                "robot": {"r_b": 5.0, "d_max": 0.8},
                "objects": [
                    {"id": "c", "label": "cabinet", "pose": [1.0, 1.0, 0.0],
                     "half_extents": [0.4, 0.4], "movable": false}
                ]
            }"#,
        )
        .unwrap();
        let grid = scene_sdf(&scene, 0.25).unwrap();
        let free = free_space(&grid, scene.robot.r_b);
        assert!(matches!(
            accessible_region(&free, None),
            Err(Error::NoFreeSpace)
        ));
    }

    #[test]
    fn interaction_ramp_probes() {
        // Axis-aligned cabinet, front = +x, d_max = 0.8.
        let scene = Scene::<f64>::from_json(
            r#"{
                "room": {"width": 10.0, "height": 10.0},
                "robot": {"r_b": 0.3, "d_max": 0.8},
                "objects": [
                    {"id": "c", "label": "cabinet", "pose": [5.0, 5.0, 0.0],
                     "half_extents": [0.4, 0.5], "movable": true}
                ]
            }"#,
        )
        .unwrap();
        let obj = scene.object("c").unwrap();
        // On the interactive (front) face boundary.
        assert_relative_eq!(
            interaction_value(obj, 0.8, Point2::new(5.4, 5.0)),
            1.0,
            epsilon = 1e-9
        );
        // At exactly arm reach from the front face.
        assert_relative_eq!(
            interaction_value(obj, 0.8, Point2::new(5.4 + 0.8, 5.0)),
            0.0,
            epsilon = 1e-9
        );
        // Halfway out on a non-interactive face (back).
        assert_relative_eq!(
            interaction_value(obj, 0.8, Point2::new(5.0 - 0.4 - 0.4, 5.0)),
            -0.5,
            epsilon = 1e-9
        );
        // Left face is non-interactive for a cabinet.
        assert_relative_eq!(
            interaction_value(obj, 0.8, Point2::new(5.0, 5.5 + 0.4)),
            -0.5,
            epsilon = 1e-9
        );
        // Beyond reach.
        assert_eq!(interaction_value(obj, 0.8, Point2::new(9.9, 5.0)), 0.0);
    }

    #[test]
    fn interaction_field_is_bounded_and_banded() {
        let scene = empty_room_scene();
        let grid = scene_sdf(&scene, 0.25).unwrap();
        let f = interaction_field(&scene, "c", &grid).unwrap();
        let obj = scene.object("c").unwrap();
        for iy in 0..f.ny() {
            for ix in 0..f.nx() {
                let v = f.get(ix, iy);
                assert!(v.abs() <= 1.0);
                if v != 0.0 {
                    let fp = sd_rect(f.cell_center(ix, iy), &obj.footprint).max(0.0);
                    assert!(fp < scene.robot.d_max);
                }
            }
        }
        assert!(matches!(
            interaction_field(&scene, "nope", &grid),
            Err(Error::UnknownObject(_))
        ));
    }

    #[test]
    fn shortest_path_trivial_cases() {
        let scene = empty_room_scene();
        let grid = scene_sdf(&scene, 0.5).unwrap();
        let free = free_space(&grid, 0.3);
        let region = accessible_region(&free, None).unwrap();
        let a = Point2::new(2.25, 2.25);
        assert_eq!(shortest_path(&region, a, a).unwrap(), 0.0);
        // Axis-aligned offset of 10 cells.
        let b = Point2::new(2.25 + 5.0, 2.25);
        assert_relative_eq!(shortest_path(&region, a, b).unwrap(), 10.0 * 0.5);
        // Symmetry.
        let c = Point2::new(4.3, 6.1);
        assert_eq!(
            shortest_path(&region, a, c).unwrap(),
            shortest_path(&region, c, a).unwrap()
        );
    }

    #[test]
    fn shortest_path_rejects_blocked_endpoints() {
        let scene = empty_room_scene();
        let grid = scene_sdf(&scene, 0.25).unwrap();
        let free = free_space(&grid, 0.3);
        let region = accessible_region(&free, None).unwrap();
        // Inside the cabinet footprint.
        let blocked = Point2::new(9.5, 9.5);
        assert!(matches!(
            shortest_path(&region, blocked, Point2::new(5.0, 5.0)),
            Err(Error::Inaccessible { .. })
        ));
    }

    #[test]
    fn monotone_in_radius() {
        let scene = empty_room_scene();
        let grid = scene_sdf(&scene, 0.25).unwrap();
        let tight = accessible_region(&free_space(&grid, 0.6), Some(Point2::new(5.0, 5.0))).unwrap();
        let loose = accessible_region(&free_space(&grid, 0.3), Some(Point2::new(5.0, 5.0))).unwrap();
        for iy in 0..tight.ny() {
            for ix in 0..tight.nx() {
                if tight.contains(ix, iy) {
                    assert!(loose.contains(ix, iy));
                }
            }
        }
    }

    #[test]
    fn pgm_dump_is_deterministic() {
        let scene = empty_room_scene();
        let grid = scene_sdf(&scene, 0.5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.pgm");
        let p2 = dir.path().join("b.pgm");
        write_pgm(&grid, &p1).unwrap();
        write_pgm(&grid, &p2).unwrap();
        let b1 = std::fs::read(&p1).unwrap();
        let b2 = std::fs::read(&p2).unwrap();
        assert_eq!(b1, b2);
        assert!(b1.starts_with(b"P5\n20 20\n65535\n"));
    }
}
