//! Shared oracles for the integration and acceptance suites. Everything in
//! here deliberately recomputes geometry through a different route than the
//! library so the two sides stay independent.

#![allow(dead_code)]

use colayout::geometry::{OrientedRect, Point2, Pose2, Room};
use colayout::scene::Scene;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Corners computed from raw trigonometry, counterclockwise.
pub fn oracle_corners(rect: &OrientedRect<f64>) -> [Point2<f64>; 4] {
    let (hx, hy) = rect.half_extents;
    let (s, c) = rect.pose.theta.sin_cos();
    let map = |lx: f64, ly: f64| {
        Point2::new(
            rect.pose.x + c * lx - s * ly,
            rect.pose.y + s * lx + c * ly,
        )
    };
    [map(hx, hy), map(-hx, hy), map(-hx, -hy), map(hx, -hy)]
}

/// Point-in-convex-polygon by cross-product orientation, the sign oracle
/// for the rectangle SDF.
pub fn point_in_rect_oracle(q: Point2<f64>, rect: &OrientedRect<f64>) -> bool {
    let cs = oracle_corners(rect);
    for i in 0..4 {
        let a = cs[i];
        let b = cs[(i + 1) % 4];
        let cross = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
        if cross < 0.0 {
            return false;
        }
    }
    true
}

/// Unsigned distance to the rectangle boundary by brute-force sampling of
/// `n` evenly spaced perimeter points (corners included).
pub fn boundary_sample_distance(q: Point2<f64>, rect: &OrientedRect<f64>, n: usize) -> f64 {
    let cs = oracle_corners(rect);
    let mut best = f64::INFINITY;
    let lens: Vec<f64> = (0..4).map(|i| cs[i].distance(cs[(i + 1) % 4])).collect();
    let perimeter: f64 = lens.iter().sum();
    for i in 0..n {
        let mut t = (i as f64 / n as f64) * perimeter;
        let mut edge = 0;
        while edge < 3 && t > lens[edge] {
            t -= lens[edge];
            edge += 1;
        }
        let a = cs[edge];
        let b = cs[(edge + 1) % 4];
        let u = (t / lens[edge]).min(1.0);
        let p = Point2::new(a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u);
        best = best.min(q.distance(p));
    }
    for c in cs {
        best = best.min(q.distance(c));
    }
    best
}

fn segments_intersect(a: Point2<f64>, b: Point2<f64>, c: Point2<f64>, d: Point2<f64>) -> bool {
    let orient = |p: Point2<f64>, q: Point2<f64>, r: Point2<f64>| {
        (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    };
    let on_seg = |p: Point2<f64>, q: Point2<f64>, r: Point2<f64>| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_seg(a, b, c))
        || (d2 == 0.0 && on_seg(a, b, d))
        || (d3 == 0.0 && on_seg(c, d, a))
        || (d4 == 0.0 && on_seg(c, d, b))
}

/// Convex polygon intersection test independent of the SAT implementation:
/// any edge pair crosses, or one contains a vertex of the other.
pub fn rects_intersect_oracle(a: &OrientedRect<f64>, b: &OrientedRect<f64>) -> bool {
    let ca = oracle_corners(a);
    let cb = oracle_corners(b);
    for i in 0..4 {
        for j in 0..4 {
            if segments_intersect(ca[i], ca[(i + 1) % 4], cb[j], cb[(j + 1) % 4]) {
                return true;
            }
        }
    }
    point_in_rect_oracle(ca[0], b) || point_in_rect_oracle(cb[0], a)
}

fn point_segment(p: Point2<f64>, a: Point2<f64>, b: Point2<f64>) -> f64 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len_sq = abx * abx + aby * aby;
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * abx + (p.y - a.y) * aby) / len_sq).clamp(0.0, 1.0);
    p.distance(Point2::new(a.x + abx * t, a.y + aby * t))
}

/// Distance between two disjoint rectangles by dense boundary sampling of
/// one against the exact edges of the other, both ways.
pub fn sampled_rect_distance(
    a: &OrientedRect<f64>,
    b: &OrientedRect<f64>,
    samples: usize,
) -> f64 {
    let ca = oracle_corners(a);
    let cb = oracle_corners(b);
    let mut best = f64::INFINITY;
    let sweep = |from: &[Point2<f64>; 4], to: &[Point2<f64>; 4], best: &mut f64| {
        let lens: Vec<f64> = (0..4).map(|i| from[i].distance(from[(i + 1) % 4])).collect();
        let perimeter: f64 = lens.iter().sum();
        for i in 0..samples {
            let mut t = (i as f64 / samples as f64) * perimeter;
            let mut edge = 0;
            while edge < 3 && t > lens[edge] {
                t -= lens[edge];
                edge += 1;
            }
            let a0 = from[edge];
            let a1 = from[(edge + 1) % 4];
            let u = (t / lens[edge]).min(1.0);
            let p = Point2::new(a0.x + (a1.x - a0.x) * u, a0.y + (a1.y - a0.y) * u);
            for j in 0..4 {
                *best = best.min(point_segment(p, to[j], to[(j + 1) % 4]));
            }
        }
        for &c in from {
            for j in 0..4 {
                *best = best.min(point_segment(c, to[j], to[(j + 1) % 4]));
            }
        }
    };
    sweep(&ca, &cb, &mut best);
    sweep(&cb, &ca, &mut best);
    best
}

pub fn random_rect(rng: &mut ChaCha8Rng) -> OrientedRect<f64> {
    let hx = rng.random_range(0.2..1.2);
    let hy = rng.random_range(0.2..1.2);
    OrientedRect::new(
        Pose2::new(
            rng.random_range(-3.0..3.0),
            rng.random_range(-3.0..3.0),
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
        ),
        hx,
        hy,
    )
}

/// A random valid scene: labeled rectangles fully inside the room. Object
/// overlaps are allowed (fields must handle them).
pub fn random_scene(rng: &mut ChaCha8Rng) -> Scene<f64> {
    let width = rng.random_range(6.0..9.0);
    let height = rng.random_range(5.0..8.0);
    let labels = ["table", "chair", "cabinet", "bed", "shelf", "sofa"];
    let n = rng.random_range(3..=6);
    let mut objects = Vec::new();
    for i in 0..n {
        let hx: f64 = rng.random_range(0.2..0.8);
        let hy: f64 = rng.random_range(0.2..0.8);
        let margin = (hx * hx + hy * hy).sqrt() + 0.01;
        let x = rng.random_range(margin..width - margin);
        let y = rng.random_range(margin..height - margin);
        let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let label = labels[rng.random_range(0..labels.len())];
        objects.push(format!(
            r#"{{"id": "o{i}", "label": "{label}", "pose": [{x}, {y}, {theta}], "half_extents": [{hx}, {hy}]}}"#
        ));
    }
    let r_b = rng.random_range(0.2..0.35);
    let d_max = rng.random_range(0.6..1.0);
    let json = format!(
        r#"{{"room": {{"width": {width}, "height": {height}}},
            "robot": {{"r_b": {r_b}, "d_max": {d_max}}},
            "objects": [{}]}}"#,
        objects.join(",")
    );
    Scene::from_json(&json).expect("generated scene is valid")
}

/// Signed rectangle distance through an independent route: polygon edge
/// distances plus the containment oracle, no box-SDF algebra.
pub fn sd_rect_oracle(q: Point2<f64>, rect: &OrientedRect<f64>) -> f64 {
    let cs = oracle_corners(rect);
    let mut d = f64::INFINITY;
    for i in 0..4 {
        d = d.min(point_segment(q, cs[i], cs[(i + 1) % 4]));
    }
    if point_in_rect_oracle(q, rect) {
        -d
    } else {
        d
    }
}

/// Room-interior signed distance the slow way.
pub fn sd_room_oracle(q: Point2<f64>, room: &Room<f64>) -> f64 {
    let inside = q.x >= 0.0 && q.x <= room.width && q.y >= 0.0 && q.y <= room.height;
    let walls = [
        (Point2::new(0.0, 0.0), Point2::new(room.width, 0.0)),
        (Point2::new(room.width, 0.0), Point2::new(room.width, room.height)),
        (Point2::new(room.width, room.height), Point2::new(0.0, room.height)),
        (Point2::new(0.0, room.height), Point2::new(0.0, 0.0)),
    ];
    let mut d = f64::INFINITY;
    for (a, b) in walls {
        d = d.min(point_segment(q, a, b));
    }
    if inside {
        d
    } else {
        -d
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    let a = 10.0;
    a * x.len() as f64
        + x.iter()
            .map(|&v| v * v - a * (2.0 * std::f64::consts::PI * v).cos())
            .sum::<f64>()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}
