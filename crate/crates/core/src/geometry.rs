//! Planar geometry primitives: points, vertex angles, oriented rectangles
//! and area-uniform sampling inside annular sectors.
//!
//! All coordinates are metres in a local Cartesian frame; angles are radians
//! unless a function explicitly works in degrees.

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    /// Vertex angle is undefined because two of the three points coincide.
    #[error("vertex angle undefined: coincident points at the vertex")]
    DegenerateVertex,
    /// Annular sector bounds are inverted or negative.
    #[error("invalid annular sector: r_min {r_min}, r_max {r_max}, angles [{angle_lo}, {angle_hi}]")]
    InvalidSector {
        r_min: f64,
        r_max: f64,
        angle_lo: f64,
        angle_hi: f64,
    },
}

/// A point in the planar map frame, metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

/// Euclidean distance between two points.
#[inline]
pub fn distance(a: Point, b: Point) -> f64 {
    (b.x - a.x).hypot(b.y - a.y)
}

/// Bearing of the direction from `a` to `b`, radians in (-pi, pi].
#[inline]
pub fn bearing(a: Point, b: Point) -> f64 {
    (b.y - a.y).atan2(b.x - a.x)
}

/// Interior angle at `vertex` between the segments towards `prev` and
/// `next`, in degrees within [0, 180].
///
/// A straight continuation (`prev`, `vertex`, `next` collinear in that
/// order) measures 180°, an exact reversal 0°, a perpendicular turn 90°.
/// Coincident points make the angle undefined and return an error.
pub fn vertex_angle(prev: Point, vertex: Point, next: Point) -> Result<f64, GeometryError> {
    let ux = prev.x - vertex.x;
    let uy = prev.y - vertex.y;
    let vx = next.x - vertex.x;
    let vy = next.y - vertex.y;
    if (ux == 0.0 && uy == 0.0) || (vx == 0.0 && vy == 0.0) {
        return Err(GeometryError::DegenerateVertex);
    }
    let cross = ux * vy - uy * vx;
    let dot = ux * vx + uy * vy;
    Ok(cross.abs().atan2(dot).to_degrees())
}

/// A rectangle with an arbitrary heading: `length` extends along the heading
/// direction, `width` across it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub center: Point,
    pub length: f64,
    pub width: f64,
    /// Direction of the length axis, radians.
    pub heading: f64,
}

impl OrientedRect {
    pub fn new(center: Point, length: f64, width: f64, heading: f64) -> Self {
        OrientedRect {
            center,
            length,
            width,
            heading,
        }
    }

    /// Unit vectors along the length and width axes.
    #[inline]
    pub fn axes(&self) -> (f64, f64, f64, f64) {
        let (sin_h, cos_h) = self.heading.sin_cos();
        (cos_h, sin_h, -sin_h, cos_h)
    }
}

/// The four corners in a consistent winding order, starting at
/// (+length/2, +width/2) in the rectangle's own frame.
pub fn rect_corners(rect: &OrientedRect) -> [Point; 4] {
    let (lx, ly, wx, wy) = rect.axes();
    let hl = rect.length / 2.0;
    let hw = rect.width / 2.0;
    let corner = |sl: f64, sw: f64| Point {
        x: rect.center.x + sl * hl * lx + sw * hw * wx,
        y: rect.center.y + sl * hl * ly + sw * hw * wy,
    };
    [
        corner(1.0, 1.0),
        corner(1.0, -1.0),
        corner(-1.0, -1.0),
        corner(-1.0, 1.0),
    ]
}

/// Draws a point uniformly by area from the annular sector around `center`
/// bounded by radii `[r_min, r_max]` and bearings `[angle_lo, angle_hi]`.
///
/// Area uniformity requires the radius to be the square root of a value
/// drawn uniformly between the squared bounds; a radius drawn uniformly
/// would oversample the inner rings.
pub fn sample_in_annular_sector<R: Rng>(
    center: Point,
    r_min: f64,
    r_max: f64,
    angle_lo: f64,
    angle_hi: f64,
    rng: &mut R,
) -> Result<Point, GeometryError> {
    if !(0.0..).contains(&r_min) || r_max <= r_min || angle_hi <= angle_lo {
        return Err(GeometryError::InvalidSector {
            r_min,
            r_max,
            angle_lo,
            angle_hi,
        });
    }
    let r = rng
        .gen_range(r_min * r_min..=r_max * r_max)
        .sqrt();
    let theta = rng.gen_range(angle_lo..angle_hi);
    Ok(Point {
        x: center.x + r * theta.cos(),
        y: center.y + r * theta.sin(),
    })
}

/// Shoelace area of a simple polygon given by its vertices in order.
pub fn polygon_area(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut twice_area = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        twice_area += a.x * b.y - b.x * a.y;
    }
    twice_area.abs() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn distance_3_4_5() {
        assert_eq!(distance(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
    }

    #[test]
    fn distance_is_symmetric_and_zero_on_self() {
        let a = Point::new(-2.5, 7.0);
        let b = Point::new(10.0, -1.0);
        assert_eq!(distance(a, b), distance(b, a));
        assert_eq!(distance(a, a), 0.0);
    }

    #[test]
    fn vertex_angle_straight_continuation_is_180() {
        let angle = vertex_angle(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
        )
        .unwrap();
        assert!((angle - 180.0).abs() < 1e-9, "got {angle}");
    }

    #[test]
    fn vertex_angle_exact_reversal_is_0() {
        let angle = vertex_angle(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 0.0),
        )
        .unwrap();
        assert!(angle.abs() < 1e-9, "got {angle}");
    }

    #[test]
    fn vertex_angle_perpendicular_is_90() {
        let angle = vertex_angle(
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
        )
        .unwrap();
        assert!((angle - 90.0).abs() < 1e-9, "got {angle}");
    }

    #[test]
    fn vertex_angle_rejects_coincident_points() {
        let p = Point::new(1.0, 1.0);
        assert_eq!(
            vertex_angle(p, p, Point::new(2.0, 2.0)),
            Err(GeometryError::DegenerateVertex)
        );
        assert_eq!(
            vertex_angle(Point::new(0.0, 0.0), p, p),
            Err(GeometryError::DegenerateVertex)
        );
    }

    #[test]
    fn rect_corners_axis_aligned() {
        let rect = OrientedRect::new(Point::new(0.0, 0.0), 2.0, 1.0, 0.0);
        let corners = rect_corners(&rect);
        let expected = [
            Point::new(1.0, 0.5),
            Point::new(1.0, -0.5),
            Point::new(-1.0, -0.5),
            Point::new(-1.0, 0.5),
        ];
        for (c, e) in corners.iter().zip(expected.iter()) {
            assert!((c.x - e.x).abs() < 1e-12 && (c.y - e.y).abs() < 1e-12);
        }
    }

    #[test]
    fn rect_corners_heading_rotates_the_footprint() {
        let rect = OrientedRect::new(Point::new(0.0, 0.0), 2.0, 1.0, std::f64::consts::FRAC_PI_2);
        let corners = rect_corners(&rect);
        // Rotating 90° counterclockwise maps (1.0, 0.5) to (-0.5, 1.0).
        assert!((corners[0].x + 0.5).abs() < 1e-12);
        assert!((corners[0].y - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_rejects_bad_bounds() {
        let c = Point::new(0.0, 0.0);
        assert!(sample_in_annular_sector(c, 5.0, 5.0, 0.0, 1.0, &mut rng(1)).is_err());
        assert!(sample_in_annular_sector(c, -1.0, 5.0, 0.0, 1.0, &mut rng(1)).is_err());
        assert!(sample_in_annular_sector(c, 0.0, 5.0, 1.0, 1.0, &mut rng(1)).is_err());
    }

    #[test]
    fn samples_stay_inside_the_sector() {
        let c = Point::new(10.0, -4.0);
        let (r_min, r_max) = (20.0, 120.0);
        let (lo, hi) = (0.3, 1.1);
        let mut r = rng(7);
        for _ in 0..10_000 {
            let p = sample_in_annular_sector(c, r_min, r_max, lo, hi, &mut r).unwrap();
            let radius = distance(c, p);
            assert!(radius >= r_min - 1e-9 && radius <= r_max + 1e-9);
            let theta = bearing(c, p);
            assert!(theta >= lo - 1e-9 && theta <= hi + 1e-9);
        }
    }

    /// Area uniformity on a full disc: half the area of a disc of radius R
    /// lies within R/sqrt(2), so half the samples should too.
    #[test]
    fn disc_sampling_median_radius_matches_area_split() {
        let c = Point::new(0.0, 0.0);
        let r_max = 50.0;
        let split = r_max / 2f64.sqrt();
        let mut r = rng(42);
        let n = 1_000_000;
        let mut inside = 0usize;
        for _ in 0..n {
            let p =
                sample_in_annular_sector(c, 0.0, r_max, 0.0, std::f64::consts::TAU, &mut r).unwrap();
            if distance(c, p) <= split {
                inside += 1;
            }
        }
        let fraction = inside as f64 / n as f64;
        assert!(
            (fraction - 0.5).abs() < 0.01,
            "fraction inside R/sqrt(2) was {fraction}"
        );
    }

    /// Kolmogorov-Smirnov check of the radial CDF against the analytic
    /// area-uniform law F(r) = (r^2 - r_min^2) / (r_max^2 - r_min^2).
    #[test]
    fn annulus_radial_cdf_passes_ks_test() {
        let c = Point::new(0.0, 0.0);
        let (r_min, r_max) = (30.0, 90.0);
        let n = 100_000;
        let mut radii: Vec<f64> = Vec::with_capacity(n);
        let mut r = rng(1234);
        for _ in 0..n {
            let p =
                sample_in_annular_sector(c, r_min, r_max, -1.0, 2.5, &mut r).unwrap();
            radii.push(distance(c, p));
        }
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cdf = |radius: f64| {
            (radius * radius - r_min * r_min) / (r_max * r_max - r_min * r_min)
        };
        let mut d_stat: f64 = 0.0;
        for (i, radius) in radii.iter().enumerate() {
            let f = cdf(*radius);
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            d_stat = d_stat.max((f - lo).abs()).max((hi - f).abs());
        }
        // Critical value at significance 0.01 is 1.63 / sqrt(n).
        let critical = 1.63 / (n as f64).sqrt();
        assert!(d_stat < critical, "KS statistic {d_stat} >= {critical}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn coord() -> impl Strategy<Value = f64> {
            -1.0e4..1.0e4
        }

        fn point() -> impl Strategy<Value = Point> {
            (coord(), coord()).prop_map(|(x, y)| Point::new(x, y))
        }

        proptest! {
            #[test]
            fn triangle_inequality(a in point(), b in point(), c in point()) {
                prop_assert!(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
            }

            #[test]
            fn vertex_angle_symmetric_in_prev_next(a in point(), v in point(), b in point()) {
                prop_assume!(a != v && b != v);
                let lhs = vertex_angle(a, v, b).unwrap();
                let rhs = vertex_angle(b, v, a).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-9);
            }

            #[test]
            fn vertex_angle_invariant_under_rotation_translation(
                a in point(), v in point(), b in point(),
                phi in -3.2..3.2f64, tx in coord(), ty in coord(),
            ) {
                prop_assume!(distance(a, v) > 1e-6 && distance(b, v) > 1e-6);
                let (s, c) = phi.sin_cos();
                let map = |p: Point| Point::new(
                    c * p.x - s * p.y + tx,
                    s * p.x + c * p.y + ty,
                );
                let before = vertex_angle(a, v, b).unwrap();
                let after = vertex_angle(map(a), map(v), map(b)).unwrap();
                prop_assert!((before - after).abs() < 1e-6, "{before} vs {after}");
            }

            #[test]
            fn rect_corner_area_matches_dimensions(
                cx in coord(), cy in coord(),
                length in 0.1..500.0f64, width in 0.1..500.0f64,
                heading in -7.0..7.0f64,
            ) {
                let rect = OrientedRect::new(Point::new(cx, cy), length, width, heading);
                let area = polygon_area(&rect_corners(&rect));
                let expected = length * width;
                prop_assert!(
                    (area - expected).abs() <= 1e-6 * expected.max(1.0),
                    "area {area}, expected {expected}"
                );
            }
        }
    }
}
