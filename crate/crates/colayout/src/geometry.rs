//! Planar primitives: points, poses, oriented rectangles, and exact signed
//! distances. Everything here is a pure function on immutable values.

use std::ops::{Add, Mul, Neg, Sub};

use crate::num::Real;

/// A point or vector in the room plane, in meters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2<R> {
    pub x: R,
    pub y: R,
}

impl<R: Real> Point2<R> {
    #[inline]
    pub fn new(x: R, y: R) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn dot(self, other: Self) -> R {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm_sq(self) -> R {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> R {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn distance(self, other: Self) -> R {
        (self - other).norm()
    }

    /// Rotate counterclockwise by `angle` radians about the origin.
    #[inline]
    pub fn rotated(self, angle: R) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<R: Real> Add for Point2<R> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<R: Real> Sub for Point2<R> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<R: Real> Neg for Point2<R> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<R: Real> Mul<R> for Point2<R> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: R) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

/// Wrap an angle to `[-π, π)`.
#[inline]
pub fn wrap_angle<R: Real>(theta: R) -> R {
    let pi = R::PI();
    let two_pi = pi + pi;
    let mut a = (theta + pi) % two_pi;
    if a < R::zero() {
        a = a + two_pi;
    }
    a - pi
}

/// A planar pose: position plus heading, with the heading normalized to
/// `[-π, π)` on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose2<R> {
    pub x: R,
    pub y: R,
    pub theta: R,
}

impl<R: Real> Pose2<R> {
    #[inline]
    pub fn new(x: R, y: R, theta: R) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    #[inline]
    pub fn position(self) -> Point2<R> {
        Point2::new(self.x, self.y)
    }

    /// Map a world-frame point into this pose's local frame.
    #[inline]
    pub fn to_frame(self, q: Point2<R>) -> Point2<R> {
        let (s, c) = self.theta.sin_cos();
        let dx = q.x - self.x;
        let dy = q.y - self.y;
        Point2::new(c * dx + s * dy, -s * dx + c * dy)
    }

    /// Map a local-frame point into the world frame.
    #[inline]
    pub fn from_frame(self, p: Point2<R>) -> Point2<R> {
        let (s, c) = self.theta.sin_cos();
        Point2::new(self.x + c * p.x - s * p.y, self.y + s * p.x + c * p.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }
}

/// An oriented rectangle: the planar footprint of a furniture bounding box.
///
/// In the local frame, +x is the object's front and +y its left side; the
/// rectangle spans `[-hx, hx] x [-hy, hy]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedRect<R> {
    pub pose: Pose2<R>,
    /// `(hx, hy)`, both strictly positive.
    pub half_extents: (R, R),
}

impl<R: Real> OrientedRect<R> {
    #[inline]
    pub fn new(pose: Pose2<R>, hx: R, hy: R) -> Self {
        debug_assert!(hx > R::zero() && hy > R::zero());
        Self {
            pose,
            half_extents: (hx, hy),
        }
    }

    #[inline]
    pub fn center(&self) -> Point2<R> {
        self.pose.position()
    }

    /// Corners in counterclockwise order starting at local `(+hx, +hy)`.
    pub fn corners(&self) -> [Point2<R>; 4] {
        let (hx, hy) = self.half_extents;
        [
            self.pose.from_frame(Point2::new(hx, hy)),
            self.pose.from_frame(Point2::new(-hx, hy)),
            self.pose.from_frame(Point2::new(-hx, -hy)),
            self.pose.from_frame(Point2::new(hx, -hy)),
        ]
    }

    /// Axis-aligned bounding box as `(min, max)` corners.
    pub fn aabb(&self) -> (Point2<R>, Point2<R>) {
        let cs = self.corners();
        let mut lo = cs[0];
        let mut hi = cs[0];
        for c in &cs[1..] {
            lo.x = lo.x.min(c.x);
            lo.y = lo.y.min(c.y);
            hi.x = hi.x.max(c.x);
            hi.y = hi.y.max(c.y);
        }
        (lo, hi)
    }
}

/// An axis-aligned rectangular room with one corner at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Room<R> {
    pub width: R,
    pub height: R,
}

impl<R: Real> Room<R> {
    #[inline]
    pub fn new(width: R, height: R) -> Self {
        Self { width, height }
    }

    #[inline]
    pub fn center(&self) -> Point2<R> {
        let half = R::from_f64(0.5).unwrap();
        Point2::new(self.width * half, self.height * half)
    }

    #[inline]
    pub fn perimeter(&self) -> R {
        (self.width + self.height) + (self.width + self.height)
    }
}

/// Exact signed distance from `q` to the rectangle boundary: negative inside,
/// zero on the boundary, positive outside.
pub fn sd_rect<R: Real>(q: Point2<R>, rect: &OrientedRect<R>) -> R {
    let p = rect.pose.to_frame(q);
    let dx = p.x.abs() - rect.half_extents.0;
    let dy = p.y.abs() - rect.half_extents.1;
    let ox = dx.max(R::zero());
    let oy = dy.max(R::zero());
    let outside = (ox * ox + oy * oy).sqrt();
    let inside = dx.max(dy).min(R::zero());
    outside + inside
}

/// Signed distance to the nearest wall: positive inside the room, zero on a
/// wall, negative outside. This is the negated box SDF of the room rectangle,
/// so walls act as obstacles in the scene field.
pub fn sd_room_interior<R: Real>(q: Point2<R>, room: &Room<R>) -> R {
    let half = R::from_f64(0.5).unwrap();
    let hx = room.width * half;
    let hy = room.height * half;
    let dx = (q.x - hx).abs() - hx;
    let dy = (q.y - hy).abs() - hy;
    let ox = dx.max(R::zero());
    let oy = dy.max(R::zero());
    let outside = (ox * ox + oy * oy).sqrt();
    let inside = dx.max(dy).min(R::zero());
    -(outside + inside)
}

/// How far `rect` sticks out of the room: zero when fully contained
/// (wall contact allowed), otherwise the deepest corner protrusion in meters.
pub fn room_protrusion<R: Real>(rect: &OrientedRect<R>, room: &Room<R>) -> R {
    let mut worst = R::zero();
    for c in rect.corners() {
        worst = worst.max(-sd_room_interior(c, room));
    }
    worst.max(R::zero())
}

fn point_segment_distance<R: Real>(p: Point2<R>, a: Point2<R>, b: Point2<R>) -> R {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == R::zero() {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len_sq).max(R::zero()).min(R::one());
    p.distance(a + ab * t)
}

fn project<R: Real>(corners: &[Point2<R>; 4], axis: Point2<R>) -> (R, R) {
    let mut lo = R::infinity();
    let mut hi = R::neg_infinity();
    for c in corners {
        let v = c.dot(axis);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

/// Minimum distance between the boundaries of two oriented rectangles when
/// disjoint, or the negative penetration depth (minimum translation distance
/// along a face normal) when they overlap. Touching boundaries give zero.
pub fn rect_separation<R: Real>(a: &OrientedRect<R>, b: &OrientedRect<R>) -> R {
    let ca = a.corners();
    let cb = b.corners();

    let (sa, ka) = a.pose.theta.sin_cos();
    let (sb, kb) = b.pose.theta.sin_cos();
    let axes = [
        Point2::new(ka, sa),
        Point2::new(-sa, ka),
        Point2::new(kb, sb),
        Point2::new(-sb, kb),
    ];

    // SAT over the face normals decides overlap; the minimum axis overlap is
    // the penetration depth.
    let mut min_overlap = R::infinity();
    let mut disjoint = false;
    for axis in axes {
        let (alo, ahi) = project(&ca, axis);
        let (blo, bhi) = project(&cb, axis);
        let gap = (blo - ahi).max(alo - bhi);
        if gap >= R::zero() {
            disjoint = true;
        } else {
            min_overlap = min_overlap.min(-gap);
        }
    }
    if !disjoint {
        return -min_overlap;
    }

    // Disjoint: the exact boundary distance is attained at a vertex of one
    // rectangle and an edge (or vertex) of the other.
    let mut best = R::infinity();
    for i in 0..4 {
        for j in 0..4 {
            let jn = (j + 1) % 4;
            best = best.min(point_segment_distance(ca[i], cb[j], cb[jn]));
            best = best.min(point_segment_distance(cb[i], ca[j], ca[jn]));
        }
    }
    best
}
