//! Certified brackets for the geometry of the numerical range `W(X)`.
//!
//! The support function of `W(X)` in direction `theta` is
//! `f(theta) = lambda_max(Re(e^{-i theta} X))`, and a top eigenvector `h`
//! gives a boundary point `h* X h`. Sampling `f` on a uniform grid yields
//!
//! * an inner polygon, the convex hull of boundary witnesses, contained in `W(X)`;
//! * an outer polygon, the intersection of the supporting half-planes,
//!   containing `W(X)`.
//!
//! Every bracket below is read off one of these two polygons or from
//! individual support values, so `lower <= true value <= upper` holds up to
//! eigensolver round-off. After the grid pass a few extra support values are
//! evaluated near the best grid angle (golden-section search for the distance
//! and width, cutting planes for the radius and diameter). Extra evaluations
//! only add valid witnesses and half-planes, so they tighten the brackets
//! without affecting their validity.

pub mod geometry;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::matcore::{hermitian_eig, real_part, ComplexMatrix, HermitianMatrix, MatError};

use geometry::{caliper_width, clip_half_plane, convex_hull, diameter_pair, distance_to_polygon, strictly_contains};

/// Default number of sampled angles.
pub const DEFAULT_ANGLES: usize = 720;

const MAX_CUTS: usize = 64;
const MAX_GOLDEN_STEPS: usize = 80;
const REL_GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RangeError {
    #[error("angle count must be even and at least 8, got {0}")]
    BadAngleCount(usize),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

fn check_angles(m: usize) -> Result<(), RangeError> {
    if m < 8 || m % 2 != 0 {
        return Err(RangeError::BadAngleCount(m));
    }
    Ok(())
}

fn check_square(x: &ComplexMatrix) -> Result<(), RangeError> {
    if !x.is_square() {
        return Err(MatError::NotSquare {
            rows: x.rows(),
            cols: x.cols(),
        }
        .into());
    }
    Ok(())
}

/// A support value together with the boundary point that attains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportValue {
    pub value: f64,
    pub witness: Complex64,
}

/// Both extreme eigenpairs of `Re(e^{-i theta} X)`: the support values in
/// directions `theta` (top) and `theta + pi` (minus bottom).
#[derive(Debug, Clone, Copy)]
struct Probe {
    theta: f64,
    top: f64,
    bottom: f64,
    top_witness: Complex64,
    bottom_witness: Complex64,
}

impl Probe {
    fn breadth(&self) -> f64 {
        self.top - self.bottom
    }
}

fn rotated_real_part(x: &ComplexMatrix, theta: f64) -> HermitianMatrix {
    HermitianMatrix::symmetrized(&x.scale(Complex64::from_polar(1.0, -theta)))
}

fn probe(x: &ComplexMatrix, theta: f64) -> Result<Probe, MatError> {
    let eig = hermitian_eig(&rotated_real_part(x, theta))?;
    let n = eig.vectors.len();
    let vals = eig.values.values();
    Ok(Probe {
        theta,
        top: vals[0],
        bottom: vals[n - 1],
        top_witness: x.quadratic_form(&eig.vectors[0]),
        bottom_witness: x.quadratic_form(&eig.vectors[n - 1]),
    })
}

/// `f(theta) = lambda_max(Re(e^{-i theta} X))` with a boundary witness
/// `h* X h` for a unit top eigenvector `h`.
pub fn support_function(x: &ComplexMatrix, theta: f64) -> Result<SupportValue, RangeError> {
    check_square(x)?;
    let p = probe(x, theta)?;
    Ok(SupportValue {
        value: p.top,
        witness: p.top_witness,
    })
}

/// Support values and boundary witnesses on the grid `theta_j = 2 pi j / m`.
#[derive(Debug, Clone, Serialize)]
pub struct SupportSample {
    pub m: usize,
    pub angles: Vec<f64>,
    pub values: Vec<f64>,
    pub witnesses: Vec<Complex64>,
}

impl SupportSample {
    /// `f(theta_j) + f(theta_j + pi)`.
    pub fn breadth(&self, j: usize) -> f64 {
        self.values[j] + self.values[(j + self.m / 2) % self.m]
    }

    /// `lambda_min(Re(e^{-i theta_j} X)) = -f(theta_j + pi)`.
    pub fn lower_support(&self, j: usize) -> f64 {
        -self.values[(j + self.m / 2) % self.m]
    }

    pub fn step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.m as f64
    }

    fn scale(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs())
            .chain(self.witnesses.iter().map(|w| w.norm()))
            .fold(0.0, f64::max)
    }

    /// `(theta, Re p, Im p)` rows for plotting.
    pub fn boundary_rows(&self) -> Vec<(f64, f64, f64)> {
        self.angles
            .iter()
            .zip(&self.witnesses)
            .map(|(&t, w)| (t, w.re, w.im))
            .collect()
    }
}

/// Samples the support function of `W(X)` at `m` equally spaced angles.
///
/// `m` must be even so that `theta` and `theta + pi` are both on the grid;
/// one Hermitian eigenproblem serves each such pair.
pub fn sample_range(x: &ComplexMatrix, m: usize) -> Result<SupportSample, RangeError> {
    check_angles(m)?;
    check_square(x)?;
    let half = m / 2;
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let probes: Vec<Probe> = (0..half)
        .into_par_iter()
        .map(|j| probe(x, step * j as f64))
        .collect::<Result<_, _>>()?;
    let mut values = vec![0.0; m];
    let mut witnesses = vec![Complex64::new(0.0, 0.0); m];
    for (j, p) in probes.iter().enumerate() {
        values[j] = p.top;
        witnesses[j] = p.top_witness;
        values[j + half] = -p.bottom;
        witnesses[j + half] = p.bottom_witness;
    }
    Ok(SupportSample {
        m,
        angles: (0..m).map(|j| step * j as f64).collect(),
        values,
        witnesses,
    })
}

/// Whether `0 ∈ W(X)` as far as the current sample can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroVerdict {
    /// 0 lies strictly inside the inner polygon.
    Yes,
    /// A supporting half-plane separates 0 from `W(X)`.
    No,
    /// 0 is on or near the boundary at this resolution.
    Undecided,
}

/// Bracket for `dist(0, W(X))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceBracket {
    pub lower: f64,
    pub upper: f64,
    pub contains_zero: ZeroVerdict,
    /// Angle `theta*` maximizing `lambda_min(Re(e^{-i theta} X))` among the
    /// evaluated angles; `Re(e^{-i theta*} X) >= lower * I`.
    pub angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WidthBracket {
    pub lower: f64,
    pub upper: f64,
    /// Direction of the narrowest evaluated supporting strip.
    pub angle: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

/// All four brackets for one matrix at one resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeSummary {
    pub m: usize,
    pub d_lower: f64,
    pub d_upper: f64,
    pub width_lower: f64,
    pub width_upper: f64,
    pub radius_lower: f64,
    pub radius_upper: f64,
    pub diam_lower: f64,
    pub diam_upper: f64,
    pub contains_zero: ZeroVerdict,
}

/// Grid sample plus the extra evaluations made while refining brackets.
struct Refiner<'a> {
    x: &'a ComplexMatrix,
    sample: &'a SupportSample,
    extra: Vec<Probe>,
    scale: f64,
}

impl<'a> Refiner<'a> {
    fn new(x: &'a ComplexMatrix, sample: &'a SupportSample) -> Self {
        Self {
            x,
            sample,
            extra: Vec::new(),
            scale: sample.scale(),
        }
    }

    fn tol(&self) -> f64 {
        REL_GEOM_TOL * self.scale
    }

    fn eval(&mut self, theta: f64) -> Result<Probe, MatError> {
        let p = probe(self.x, theta)?;
        self.extra.push(p);
        Ok(p)
    }

    /// Golden-section search maximizing `score` on `[lo, hi]`; returns the best
    /// evaluated angle and score.
    fn golden_max(&mut self, lo: f64, hi: f64, score: impl Fn(&Probe) -> f64) -> Result<(f64, f64), MatError> {
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let (mut a, mut b) = (lo, hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = score(&self.eval(c)?);
        let mut fd = score(&self.eval(d)?);
        let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
        for _ in 0..MAX_GOLDEN_STEPS {
            if b - a <= 1e-15 * (1.0 + a.abs()) {
                break;
            }
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = score(&self.eval(c)?);
                if fc > best.1 {
                    best = (c, fc);
                }
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = score(&self.eval(d)?);
                if fd > best.1 {
                    best = (d, fd);
                }
            }
        }
        Ok(best)
    }

    /// Largest `lambda_min(Re(e^{-i theta} X))` found, with its angle.
    fn best_lower_support(&mut self) -> Result<(f64, f64), MatError> {
        let s = self.sample;
        let (j, g) = (0..s.m)
            .map(|j| (j, s.lower_support(j)))
            .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let step = s.step();
        let theta = s.angles[j];
        let (t, v) = self.golden_max(theta - step, theta + step, |p| p.bottom)?;
        Ok(if v > g { (t, v) } else { (theta, g) })
    }

    /// Smallest evaluated strip breadth, with its angle.
    fn best_breadth(&mut self) -> Result<(f64, f64), MatError> {
        let s = self.sample;
        let (j, w) = (0..s.m / 2)
            .map(|j| (j, s.breadth(j)))
            .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
        let step = s.step();
        let theta = s.angles[j];
        let (t, v) = self.golden_max(theta - step, theta + step, |p| -p.breadth())?;
        Ok(if -v < w { (t, -v) } else { (theta, w) })
    }

    fn witnesses(&self) -> Vec<Complex64> {
        let mut pts = self.sample.witnesses.clone();
        for p in &self.extra {
            pts.push(p.top_witness);
            pts.push(p.bottom_witness);
        }
        pts
    }

    fn inner_hull(&self) -> Vec<Complex64> {
        convex_hull(&self.witnesses(), REL_GEOM_TOL * self.scale * self.scale)
    }

    fn outer_polygon(&self) -> Vec<Complex64> {
        let s = self.sample;
        let r = 2.0 * self.scale + 1.0;
        let mut poly = vec![
            Complex64::new(-r, -r),
            Complex64::new(r, -r),
            Complex64::new(r, r),
            Complex64::new(-r, r),
        ];
        let tol = self.tol();
        for (theta, f) in s.angles.iter().zip(&s.values) {
            poly = clip_half_plane(&poly, *theta, *f, tol);
        }
        for p in &self.extra {
            poly = clip_half_plane(&poly, p.theta, p.top, tol);
            poly = clip_half_plane(&poly, p.theta + std::f64::consts::PI, -p.bottom, tol);
        }
        convex_hull(&poly, 0.0)
    }

    fn cut(&self, poly: &[Complex64], p: &Probe) -> Vec<Complex64> {
        let tol = self.tol();
        let poly = clip_half_plane(poly, p.theta, p.top, tol);
        let poly = clip_half_plane(&poly, p.theta + std::f64::consts::PI, -p.bottom, tol);
        convex_hull(&poly, 0.0)
    }

    /// Cuts the outer polygon at its farthest vertex until that vertex is
    /// (nearly) a point of `W(X)`; returns the final outer radius.
    fn refine_radius(&mut self, mut outer: Vec<Complex64>) -> Result<(f64, Vec<Complex64>), MatError> {
        for _ in 0..MAX_CUTS {
            let Some(&v) = outer.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
                break;
            };
            if v.norm() == 0.0 {
                break;
            }
            let p = self.eval(v.arg())?;
            if v.norm() - p.top <= self.tol() {
                break;
            }
            outer = self.cut(&outer, &p);
        }
        let r = outer.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok((r, outer))
    }

    /// Cuts the outer polygon across its diameter direction until the
    /// farthest pair is matched by a supporting strip.
    fn refine_diameter(&mut self, mut outer: Vec<Complex64>) -> Result<(f64, Vec<Complex64>), MatError> {
        for _ in 0..MAX_CUTS {
            let Some((d, a, b)) = diameter_pair(&outer) else {
                break;
            };
            if d == 0.0 {
                break;
            }
            let p = self.eval((a - b).arg())?;
            if d - p.breadth() <= self.tol() {
                break;
            }
            outer = self.cut(&outer, &p);
        }
        let d = diameter_pair(&outer).map_or(0.0, |(d, _, _)| d);
        Ok((d, outer))
    }

    fn max_breadth(&self) -> f64 {
        let grid = (0..self.sample.m / 2)
            .map(|j| self.sample.breadth(j))
            .fold(0.0, f64::max);
        self.extra.iter().map(Probe::breadth).fold(grid, f64::max)
    }

    fn distance(&mut self) -> Result<DistanceBracket, MatError> {
        let (angle, g) = self.best_lower_support()?;
        let mut lower = if g > self.tol() { g } else { 0.0 };
        let hull = self.inner_hull();
        let origin = Complex64::new(0.0, 0.0);
        let mut upper = distance_to_polygon(&hull, origin);
        let contains_zero = if strictly_contains(&hull, origin, self.tol()) {
            lower = 0.0;
            upper = 0.0;
            ZeroVerdict::Yes
        } else if lower > 0.0 {
            ZeroVerdict::No
        } else {
            ZeroVerdict::Undecided
        };
        Ok(DistanceBracket {
            lower,
            upper: upper.max(lower),
            contains_zero,
            angle,
        })
    }

    fn width(&mut self) -> Result<WidthBracket, MatError> {
        let (angle, upper) = self.best_breadth()?;
        let upper = upper.max(0.0);
        let lower = caliper_width(&self.inner_hull()).min(upper);
        Ok(WidthBracket { lower, upper, angle })
    }
}

/// Bracket for `dist(0, W(X))` and the zero-membership verdict.
pub fn distance_to_zero(x: &ComplexMatrix, m: usize) -> Result<DistanceBracket, RangeError> {
    let sample = sample_range(x, m)?;
    distance_from_sample(x, &sample)
}

pub fn distance_from_sample(x: &ComplexMatrix, sample: &SupportSample) -> Result<DistanceBracket, RangeError> {
    Ok(Refiner::new(x, sample).distance()?)
}

/// Bracket for the width of `W(X)`: the narrowest evaluated supporting strip
/// from above, the calipers width of the inner polygon from below.
pub fn width(x: &ComplexMatrix, m: usize) -> Result<WidthBracket, RangeError> {
    let sample = sample_range(x, m)?;
    width_from_sample(x, &sample)
}

pub fn width_from_sample(x: &ComplexMatrix, sample: &SupportSample) -> Result<WidthBracket, RangeError> {
    Ok(Refiner::new(x, sample).width()?)
}

/// Bracket for the numerical radius `w(X)`.
pub fn numerical_radius(x: &ComplexMatrix, m: usize) -> Result<Bracket, RangeError> {
    let sample = sample_range(x, m)?;
    let mut r = Refiner::new(x, &sample);
    let (upper, _) = r.refine_radius(r.outer_polygon())?;
    let lower = r.witnesses().iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(Bracket {
        lower,
        upper: upper.max(lower),
    })
}

fn hermitian_spread(x: &ComplexMatrix) -> Result<Option<f64>, MatError> {
    let h = real_part(x)?;
    if x.max_abs_diff(h.as_matrix()) > crate::matcore::herm_tol(x.max_abs()) {
        return Ok(None);
    }
    Ok(Some(h.eigenvalues()?.spread()))
}

/// Bracket for `diam W(X)`; exact spectral spread when `X` is Hermitian.
pub fn diameter(x: &ComplexMatrix, m: usize) -> Result<Bracket, RangeError> {
    let sample = sample_range(x, m)?;
    if let Some(s) = hermitian_spread(x)? {
        return Ok(Bracket { lower: s, upper: s });
    }
    let mut r = Refiner::new(x, &sample);
    let (upper, _) = r.refine_diameter(r.outer_polygon())?;
    let lower = r.max_breadth().max(geometry::polygon_diameter(&r.inner_hull()));
    Ok(Bracket {
        lower: lower.min(upper),
        upper,
    })
}

/// Full analysis: the grid sample, both polygons and the summary brackets.
#[derive(Debug, Clone, Serialize)]
pub struct RangeAnalysis {
    pub sample: SupportSample,
    pub inner: Vec<Complex64>,
    pub outer: Vec<Complex64>,
    pub distance: DistanceBracket,
    pub width: WidthBracket,
    pub summary: RangeSummary,
}

pub fn analyze_range(x: &ComplexMatrix, m: usize) -> Result<RangeAnalysis, RangeError> {
    let sample = sample_range(x, m)?;
    let hermitian = hermitian_spread(x)?;
    let mut r = Refiner::new(x, &sample);
    let distance = r.distance()?;
    let width = r.width()?;
    let outer = r.outer_polygon();
    let (radius_upper, outer) = r.refine_radius(outer)?;
    let (diam_upper, outer) = r.refine_diameter(outer)?;
    let radius_upper = radius_upper.min(outer.iter().map(|z| z.norm()).fold(0.0, f64::max));
    let inner = r.inner_hull();
    let radius_lower = r.witnesses().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (diam_lower, diam_upper) = match hermitian {
        Some(s) => (s, s),
        None => {
            let lower = r.max_breadth().max(geometry::polygon_diameter(&inner));
            (lower.min(diam_upper), diam_upper)
        }
    };
    // The inner polygon may have grown during the cuts.
    let d_upper = distance_to_polygon(&inner, Complex64::new(0.0, 0.0));
    let distance = DistanceBracket {
        upper: d_upper.min(distance.upper).max(distance.lower),
        ..distance
    };
    let width_lower = caliper_width(&inner).min(width.upper).max(width.lower);
    let width = WidthBracket {
        lower: width_lower,
        ..width
    };
    let summary = RangeSummary {
        m,
        d_lower: distance.lower,
        d_upper: distance.upper,
        width_lower: width.lower,
        width_upper: width.upper,
        radius_lower,
        radius_upper: radius_upper.max(radius_lower),
        diam_lower,
        diam_upper,
        contains_zero: distance.contains_zero,
    };
    Ok(RangeAnalysis {
        sample,
        inner,
        outer,
        distance,
        width,
        summary,
    })
}

pub fn range_summary(x: &ComplexMatrix, m: usize) -> Result<RangeSummary, RangeError> {
    Ok(analyze_range(x, m)?.summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    #[test]
    fn support_function_of_diagonal() {
        let x = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        let s = support_function(&x, 0.0).unwrap();
        assert!((s.value - 2.0).abs() < 1e-14);
        assert!((s.witness - c(2.0, 0.0)).norm() < 1e-14);
        let s = support_function(&x, PI).unwrap();
        assert!((s.value + 1.0).abs() < 1e-14);
        assert!((s.witness - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn support_function_of_jordan_block_is_constant() {
        for k in 0..16 {
            let theta = 0.37 * k as f64;
            let s = support_function(&jordan(), theta).unwrap();
            assert!((s.value - 0.5).abs() < 1e-14);
            let rot = (Complex64::from_polar(1.0, -theta) * s.witness).re;
            assert!((rot - s.value).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_angle_counts() {
        let x = ComplexMatrix::identity(2);
        assert_eq!(sample_range(&x, 6).unwrap_err(), RangeError::BadAngleCount(6));
        assert_eq!(sample_range(&x, 9).unwrap_err(), RangeError::BadAngleCount(9));
        assert!(matches!(
            sample_range(&ComplexMatrix::zeros(2, 3), 8),
            Err(RangeError::Matrix(MatError::NotSquare { .. }))
        ));
    }

    #[test]
    fn sample_of_identity_and_zero() {
        let s = sample_range(&ComplexMatrix::identity(3), 16).unwrap();
        for (theta, (f, w)) in s.angles.iter().zip(s.values.iter().zip(&s.witnesses)) {
            assert!((f - theta.cos()).abs() < 1e-14);
            assert!((w - c(1.0, 0.0)).norm() < 1e-14);
        }
        let z = sample_range(&ComplexMatrix::zeros(2, 2), 8).unwrap();
        assert!(z.values.iter().all(|&f| f == 0.0));
        assert!(z.witnesses.iter().all(|w| w.norm() == 0.0));
    }

    #[test]
    fn sample_of_jordan_block_traces_circle() {
        let s = sample_range(&jordan(), 720).unwrap();
        for (f, w) in s.values.iter().zip(&s.witnesses) {
            assert!((f - 0.5).abs() < 1e-14);
            assert!((w.norm() - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_brackets() {
        let x = ComplexMatrix::identity(2);
        let d = distance_to_zero(&x, 64).unwrap();
        assert!((d.lower - 1.0).abs() < 1e-14 && (d.upper - 1.0).abs() < 1e-14);
        assert_eq!(d.contains_zero, ZeroVerdict::No);
        let r = numerical_radius(&x, 64).unwrap();
        assert!((r.lower - 1.0).abs() < 1e-12 && (r.upper - 1.0).abs() < 1e-9);
        let dm = diameter(&x, 64).unwrap();
        assert!(dm.lower.abs() < 1e-14 && dm.upper.abs() < 1e-14);
        let w = width(&x, 64).unwrap();
        assert!(w.upper.abs() < 1e-14);
    }

    #[test]
    fn jordan_block_contains_zero_in_interior() {
        let d = distance_to_zero(&jordan(), 720).unwrap();
        assert_eq!(d.contains_zero, ZeroVerdict::Yes);
        assert_eq!((d.lower, d.upper), (0.0, 0.0));
    }

    #[test]
    fn shifted_jordan_block_distance() {
        let x = &ComplexMatrix::identity(2).scale(c(2.0, 0.0)) + &jordan();
        let d = distance_to_zero(&x, 720).unwrap();
        assert!(d.lower <= 1.5 + 1e-12 && d.upper >= 1.5 - 1e-12);
        assert!(d.upper - d.lower <= 1e-3);
        assert_eq!(d.contains_zero, ZeroVerdict::No);
    }

    #[test]
    fn hermitian_width_vanishes() {
        let x =
            ComplexMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.5, 0.5)], vec![c(0.5, -0.5), c(-2.0, 0.0)]]).unwrap();
        let s = sample_range(&x, 8).unwrap();
        // theta = pi/2 is grid index 2: the strip degenerates to a line.
        assert!(s.breadth(2).abs() < 1e-14);
        let w = width(&x, 8).unwrap();
        assert!(w.upper.abs() < 1e-14 && w.lower == 0.0);
        let spread = real_part(&x).unwrap().eigenvalues().unwrap();
        let dm = diameter(&x, 8).unwrap();
        assert_eq!((dm.lower, dm.upper), (spread.spread(), spread.spread()));
        let r = numerical_radius(&x, 64).unwrap();
        let want = spread.max().abs().max(spread.min().abs());
        assert!(r.lower <= want + 1e-12 && r.upper >= want - 1e-12);
        assert!((r.lower - want).abs() < 1e-12);
    }

    #[test]
    fn diagonal_diameter_is_spread() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 3.0]]).unwrap();
        let dm = diameter(&x, 16).unwrap();
        assert_eq!((dm.lower, dm.upper), (3.0, 3.0));
    }

    #[test]
    fn jordan_block_width_radius_diameter() {
        let w = width(&jordan(), 720).unwrap();
        assert!(w.lower <= 1.0 && w.upper >= 1.0 - 1e-12 && w.upper - w.lower < 1e-4);
        let r = numerical_radius(&jordan(), 720).unwrap();
        assert!(r.lower <= 0.5 + 1e-14 && r.upper >= 0.5 && r.upper - r.lower < 1e-4);
        let dm = diameter(&jordan(), 720).unwrap();
        assert!(dm.lower <= 1.0 + 1e-14 && dm.upper >= 1.0 && dm.upper - dm.lower < 1e-4);
    }
}
