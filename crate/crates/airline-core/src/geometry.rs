//! Coordinate conventions and segment geometry.
//!
//! Rasters use `x` = column (left to right) and `y` = row (top to bottom),
//! origin at the top-left pixel, pixel centers on integer coordinates.

use crate::scalar::Scalar;

/// Integer pixel coordinate bound to some raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PixelCoord {
    /// Column index, 0-based, left to right.
    pub x: usize,
    /// Row index, 0-based, top to bottom.
    pub y: usize,
}

impl PixelCoord {
    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

/// Sub-pixel point or 2-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Self) -> S {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> S {
        self.dot(self).sqrt()
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }

    pub fn scale(self, s: S) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n == S::zero() {
            None
        } else {
            Some(self.scale(S::one() / n))
        }
    }

    pub fn distance(self, other: Self) -> S {
        self.sub(other).norm()
    }
}

/// A detected or ground-truth line segment.
///
/// `direction` has unit norm and lies in the closed upper half-plane
/// (`y > 0`, or `y == 0 && x >= 0`); lines are undirected so the sign is
/// canonical. `center` is the anchor the segment was fitted around: the
/// region pixel mean for detections, the endpoint midpoint for segments
/// built with [`LineSegment::from_endpoints`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSegment<S> {
    pub p1: Point2<S>,
    pub p2: Point2<S>,
    pub center: Point2<S>,
    pub direction: Point2<S>,
}

/// Flip a vector into the closed upper half-plane (ties toward +x).
pub(crate) fn canonical_sign<S: Scalar>(v: Point2<S>) -> Point2<S> {
    if v.y < S::zero() || (v.y == S::zero() && v.x < S::zero()) {
        v.scale(-S::one())
    } else {
        v
    }
}

impl<S: Scalar> LineSegment<S> {
    /// Builds a segment from its two endpoints; center is their midpoint.
    ///
    /// Coincident endpoints get the canonical direction `(1, 0)` so the
    /// unit-norm invariant holds even for degenerate inputs.
    pub fn from_endpoints(p1: Point2<S>, p2: Point2<S>) -> Self {
        let half = S::from_f64_lossy(0.5);
        let center = p1.add(p2).scale(half);
        let direction = p2
            .sub(p1)
            .normalized()
            .map(canonical_sign)
            .unwrap_or(Point2::new(S::one(), S::zero()));
        Self {
            p1,
            p2,
            center,
            direction,
        }
    }

    pub fn length(&self) -> S {
        self.p1.distance(self.p2)
    }

    /// Undirected angle between the two segment directions, in degrees,
    /// in `[0, 90]`.
    pub fn angle_to(&self, other: &Self) -> S {
        let d = self.direction.dot(other.direction).abs();
        let clamped = if d > S::one() { S::one() } else { d };
        clamped.acos() * S::from_f64_lossy(180.0 / std::f64::consts::PI)
    }
}

/// Minimum Euclidean distance between two segments (0 when they intersect).
pub fn segment_distance<S: Scalar>(a: &LineSegment<S>, b: &LineSegment<S>) -> S {
    if segments_intersect(a, b) {
        return S::zero();
    }
    let d1 = point_segment_distance(a.p1, b);
    let d2 = point_segment_distance(a.p2, b);
    let d3 = point_segment_distance(b.p1, a);
    let d4 = point_segment_distance(b.p2, a);
    d1.min(d2).min(d3.min(d4))
}

/// Distance from a point to the closest point of a segment.
pub fn point_segment_distance<S: Scalar>(p: Point2<S>, seg: &LineSegment<S>) -> S {
    let d = seg.p2.sub(seg.p1);
    let len2 = d.dot(d);
    if len2 == S::zero() {
        return p.distance(seg.p1);
    }
    let t = p.sub(seg.p1).dot(d) / len2;
    let t = t.max(S::zero()).min(S::one());
    p.distance(seg.p1.add(d.scale(t)))
}

fn orient2<S: Scalar>(a: Point2<S>, b: Point2<S>, c: Point2<S>) -> S {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn segments_intersect<S: Scalar>(a: &LineSegment<S>, b: &LineSegment<S>) -> bool {
    let o1 = orient2(a.p1, a.p2, b.p1);
    let o2 = orient2(a.p1, a.p2, b.p2);
    let o3 = orient2(b.p1, b.p2, a.p1);
    let o4 = orient2(b.p1, b.p2, a.p2);
    // Proper crossing; collinear touching is resolved by the endpoint
    // distances in segment_distance, which are zero in that case.
    (o1 * o2 < S::zero()) && (o3 * o4 < S::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(x1: f64, y1: f64, x2: f64, y2: f64) -> LineSegment<f64> {
        LineSegment::from_endpoints(Point2::new(x1, y1), Point2::new(x2, y2))
    }

    #[test]
    fn direction_is_canonical() {
        let s = seg(10.0, 5.0, 0.0, 5.0);
        assert_eq!(s.direction, Point2::new(1.0, 0.0));
        let s = seg(0.0, 10.0, 0.0, 0.0);
        assert_eq!(s.direction, Point2::new(0.0, 1.0));
    }

    #[test]
    fn crossing_segments_have_zero_distance() {
        let a = seg(0.0, 0.0, 10.0, 10.0);
        let b = seg(0.0, 10.0, 10.0, 0.0);
        assert_eq!(segment_distance(&a, &b), 0.0);
    }

    #[test]
    fn parallel_segments_distance() {
        let a = seg(0.0, 0.0, 10.0, 0.0);
        let b = seg(0.0, 3.0, 10.0, 3.0);
        assert!((segment_distance(&a, &b) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_gap_distance() {
        let a = seg(0.0, 0.0, 10.0, 0.0);
        let b = seg(14.0, 3.0, 20.0, 3.0);
        assert!((segment_distance(&a, &b) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn angle_between_segments() {
        let a = seg(0.0, 0.0, 10.0, 0.0);
        let b = seg(0.0, 0.0, 10.0, 10.0);
        assert!((a.angle_to(&b) - 45.0).abs() < 1e-9);
        // Undirected: reversing endpoints changes nothing.
        let c = seg(10.0, 10.0, 0.0, 0.0);
        assert!((a.angle_to(&c) - 45.0).abs() < 1e-9);
    }
}
