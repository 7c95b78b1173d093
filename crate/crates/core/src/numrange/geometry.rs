//! Planar convex geometry on points stored as complex numbers.

use num_complex::Complex64;

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn turn(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    cross(a - o, b - o)
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
///
/// Nearly collinear points are dropped using `tol` on the cross product,
/// which only ever shrinks the hull. Degenerate inputs return one point
/// (all coincident) or two points (a segment).
pub fn convex_hull(points: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() == 2 && (hull[0] - hull[1]).norm() == 0.0 {
        hull.truncate(1);
    }
    hull
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Signed distances from `p` to each edge line; positive means inside.
fn edge_margins(hull: &[Complex64], p: Complex64) -> impl Iterator<Item = f64> + '_ {
    let h = hull.len();
    (0..h).map(move |i| {
        let a = hull[i];
        let b = hull[(i + 1) % h];
        let len = (b - a).norm();
        if len == 0.0 {
            f64::NEG_INFINITY
        } else {
            turn(a, b, p) / len
        }
    })
}

/// True iff `p` lies inside the hull with margin greater than `tol`.
pub fn strictly_contains(hull: &[Complex64], p: Complex64, tol: f64) -> bool {
    hull.len() >= 3 && edge_margins(hull, p).all(|m| m > tol)
}

/// Euclidean distance from `p` to the closed convex polygon `hull`.
pub fn distance_to_polygon(hull: &[Complex64], p: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (p - hull[0]).norm(),
        2 => segment_distance(p, hull[0], hull[1]),
        h => {
            if edge_margins(hull, p).all(|m| m >= 0.0) {
                return 0.0;
            }
            (0..h)
                .map(|i| segment_distance(p, hull[i], hull[(i + 1) % h]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Minimum width of a convex polygon by rotating calipers.
///
/// For each edge the farthest vertex is tracked with a monotone pointer;
/// the width is the smallest such edge-to-vertex height.
pub fn caliper_width(hull: &[Complex64]) -> f64 {
    let h = hull.len();
    if h < 3 {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    let mut j = 1;
    for i in 0..h {
        let a = hull[i];
        let b = hull[(i + 1) % h];
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let height = |k: usize| turn(a, b, hull[k % h]).abs() / len;
        let mut steps = 0;
        while steps < h && height(j + 1) >= height(j) {
            j = (j + 1) % h;
            steps += 1;
        }
        best = best.min(height(j));
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

/// Largest distance between two points of a convex polygon.
pub fn polygon_diameter(hull: &[Complex64]) -> f64 {
    diameter_pair(hull).map_or(0.0, |(d, _, _)| d)
}

/// Diameter of a convex polygon together with a pair of vertices realizing it
/// (rotating calipers over antipodal pairs).
pub fn diameter_pair(hull: &[Complex64]) -> Option<(f64, Complex64, Complex64)> {
    let h = hull.len();
    match h {
        0 => None,
        1 => Some((0.0, hull[0], hull[0])),
        2 => Some(((hull[0] - hull[1]).norm(), hull[0], hull[1])),
        _ => {
            let mut best = (0.0f64, hull[0], hull[0]);
            let mut consider = |p: Complex64, q: Complex64| {
                let d = (p - q).norm();
                if d > best.0 {
                    best = (d, p, q);
                }
            };
            let mut j = 1;
            for i in 0..h {
                let a = hull[i];
                let b = hull[(i + 1) % h];
                let mut steps = 0;
                while steps < h && turn(a, b, hull[(j + 1) % h]).abs() >= turn(a, b, hull[j]).abs() {
                    j = (j + 1) % h;
                    steps += 1;
                }
                for k in [j, (j + 1) % h] {
                    consider(a, hull[k]);
                    consider(b, hull[k]);
                }
            }
            Some(best)
        }
    }
}

/// Clips a convex polygon to `Re(e^{-i theta} z) <= offset` (Sutherland-Hodgman).
///
/// Vertices violating the constraint by at most `tol` are kept, so the
/// result never cuts into the true half-plane.
pub fn clip_half_plane(poly: &[Complex64], theta: f64, offset: f64, tol: f64) -> Vec<Complex64> {
    let dir = Complex64::from_polar(1.0, -theta);
    let level = |z: Complex64| (dir * z).re - offset;
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let cur = poly[i];
        let next = poly[(i + 1) % n];
        let (lc, ln) = (level(cur), level(next));
        let cur_in = lc <= tol;
        let next_in = ln <= tol;
        if cur_in {
            out.push(cur);
        }
        if cur_in != next_in && (lc - ln).abs() > 0.0 {
            let t = lc / (lc - ln);
            out.push(cur + (next - cur) * t.clamp(0.0, 1.0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn square() -> Vec<Complex64> {
        vec![p(0.0, 0.0), p(2.0, 0.0), p(2.0, 2.0), p(0.0, 2.0)]
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let mut pts = square();
        pts.extend([p(1.0, 1.0), p(1.0, 0.0), p(0.5, 1.5)]);
        let hull = convex_hull(&pts, 0.0);
        assert_eq!(hull.len(), 4);
        for v in square() {
            assert!(hull.contains(&v));
        }
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(convex_hull(&[p(1.0, 1.0); 5], 0.0), vec![p(1.0, 1.0)]);
        let seg = convex_hull(&[p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0)], 0.0);
        assert_eq!(seg.len(), 2);
        assert_eq!(caliper_width(&seg), 0.0);
        assert!((polygon_diameter(&seg) - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn containment_and_distance() {
        let sq = convex_hull(&square(), 0.0);
        assert!(strictly_contains(&sq, p(1.0, 1.0), 1e-9));
        assert!(!strictly_contains(&sq, p(0.0, 1.0), 1e-9));
        assert_eq!(distance_to_polygon(&sq, p(1.0, 1.0)), 0.0);
        assert!((distance_to_polygon(&sq, p(-1.0, 1.0)) - 1.0).abs() < 1e-15);
        assert!((distance_to_polygon(&sq, p(3.0, 3.0)) - 2f64.sqrt()).abs() < 1e-15);
        assert!((distance_to_polygon(&[p(3.0, 4.0)], p(0.0, 0.0)) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn width_and_diameter_of_rectangle() {
        let rect = convex_hull(&[p(0.0, 0.0), p(4.0, 0.0), p(4.0, 1.0), p(0.0, 1.0)], 0.0);
        assert!((caliper_width(&rect) - 1.0).abs() < 1e-15);
        assert!((polygon_diameter(&rect) - 17f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn width_and_diameter_of_regular_polygon() {
        let m = 12;
        let pts: Vec<Complex64> = (0..m)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64))
            .collect();
        let hull = convex_hull(&pts, 0.0);
        let w = 2.0 * (std::f64::consts::PI / m as f64).cos();
        assert!((caliper_width(&hull) - w).abs() < 1e-12);
        assert!((polygon_diameter(&hull) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn clipping_a_square() {
        // keep x <= 1
        let clipped = clip_half_plane(&square(), 0.0, 1.0, 0.0);
        let hull = convex_hull(&clipped, 0.0);
        assert_eq!(hull.len(), 4);
        assert!(hull.iter().all(|z| z.re <= 1.0 + 1e-15));
        assert!((polygon_diameter(&hull) - 5f64.sqrt()).abs() < 1e-12);
    }
}
