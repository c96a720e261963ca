//! Adaptive cubature on rectangles and product rules on triangles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("integrand is not finite at ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("evaluation budget exhausted: best estimate {value} +/- {error} after {evaluations} evaluations")]
    BudgetExceeded {
        value: f64,
        error: f64,
        evaluations: u64,
    },
}

/// Integral value with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    pub fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    fn validate(&self) -> Result<(), QuadratureError> {
        let ok = |t: f64| t.is_finite() && t >= 0.0;
        if ok(self.abs) && ok(self.rel) && (self.abs > 0.0 || self.rel > 0.0) {
            Ok(())
        } else {
            Err(QuadratureError::InvalidTolerance)
        }
    }

    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "rule needs at least one node");
    if n == 1 {
        return vec![(0.0, 2.0)];
    }
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

// 15-point Kronrod extension of the 7-point Gauss rule (positive half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Kronrod {
    nodes: [f64; 15],
    kronrod: [f64; 15],
    gauss: [f64; 15],
}

fn kronrod15() -> Kronrod {
    let mut nodes = [0.0; 15];
    let mut kronrod = [0.0; 15];
    let mut gauss = [0.0; 15];
    for i in 0..8 {
        nodes[i] = -XGK[i];
        nodes[14 - i] = XGK[i];
        kronrod[i] = WGK[i];
        kronrod[14 - i] = WGK[i];
        if i % 2 == 1 {
            gauss[i] = WG[i / 2];
            gauss[14 - i] = WG[i / 2];
        }
    }
    Kronrod {
        nodes,
        kronrod,
        gauss,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    fn split(&self) -> [Rect; 4] {
        let xm = 0.5 * (self.x0 + self.x1);
        let ym = 0.5 * (self.y0 + self.y1);
        [
            Rect::new(self.x0, xm, self.y0, ym),
            Rect::new(xm, self.x1, self.y0, ym),
            Rect::new(self.x0, xm, ym, self.y1),
            Rect::new(xm, self.x1, ym, self.y1),
        ]
    }
}

struct Piece<T> {
    region: T,
    value: f64,
    error: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Piece<T> {}
impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_rect<F: Fn(f64, f64) -> f64>(
    f: &F,
    r: &Rect,
    rule: &Kronrod,
) -> Result<(f64, f64), QuadratureError> {
    let hx = 0.5 * (r.x1 - r.x0);
    let hy = 0.5 * (r.y1 - r.y0);
    let cx = 0.5 * (r.x1 + r.x0);
    let cy = 0.5 * (r.y1 + r.y0);
    let (mut k, mut g) = (0.0, 0.0);
    for i in 0..15 {
        let x = cx + hx * rule.nodes[i];
        for j in 0..15 {
            let y = cy + hy * rule.nodes[j];
            let v = f(x, y);
            if !v.is_finite() {
                return Err(QuadratureError::NonFinite(x, y));
            }
            k += rule.kronrod[i] * rule.kronrod[j] * v;
            g += rule.gauss[i] * rule.gauss[j] * v;
        }
    }
    let scale = hx * hy;
    Ok((k * scale, ((k - g) * scale).abs()))
}

/// Globally adaptive tensor Gauss-Kronrod (7/15) cubature over a rectangle.
pub fn adaptive_rect<F: Fn(f64, f64) -> f64>(
    f: F,
    rect: Rect,
    tol: Tolerance,
    max_evaluations: u64,
) -> Result<Estimate, QuadratureError> {
    tol.validate()?;
    const PER_RECT: u64 = 225;
    let rule = kronrod15();
    let (value, error) = kronrod_rect(&f, &rect, &rule)?;
    let mut evaluations = PER_RECT;
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        region: rect,
        value,
        error,
    });
    let (mut total, mut total_err) = (value, error);
    while total_err > tol.target(total) {
        if evaluations + 4 * PER_RECT > max_evaluations {
            return Err(QuadratureError::BudgetExceeded {
                value: total,
                error: total_err,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        total -= worst.value;
        total_err -= worst.error;
        for child in worst.region.split() {
            let (v, e) = kronrod_rect(&f, &child, &rule)?;
            total += v;
            total_err += e;
            heap.push(Piece {
                region: child,
                value: v,
                error: e,
            });
        }
        evaluations += 4 * PER_RECT;
        // Re-sum occasionally so cancellation in the running totals cannot drift.
        if heap.len() % 256 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(Estimate {
        value: total,
        error: total_err.max(0.0),
        evaluations,
    })
}

pub type Point2 = [f64; 2];
pub type Triangle = [Point2; 3];

pub fn triangle_area(t: &Triangle) -> f64 {
    0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[1][1] - t[0][1]) * (t[2][0] - t[0][0]))
        .abs()
}

/// Splits a triangle into four by its edge midpoints.
pub fn split_triangle(t: &Triangle) -> [Triangle; 4] {
    let mid = |a: Point2, b: Point2| [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let m01 = mid(t[0], t[1]);
    let m12 = mid(t[1], t[2]);
    let m20 = mid(t[2], t[0]);
    [
        [t[0], m01, m20],
        [m01, t[1], m12],
        [m20, m12, t[2]],
        [m01, m12, m20],
    ]
}

/// Fan triangulation of a convex polygon.
pub fn fan(poly: &[Point2]) -> Vec<Triangle> {
    (1..poly.len().saturating_sub(1))
        .map(|i| [poly[0], poly[i], poly[i + 1]])
        .collect()
}

/// Collapsed (Duffy) Gauss-Legendre product rule on the reference triangle
/// `(0,0), (1,0), (0,1)`; exact for polynomials of degree `2q - 2`.
#[derive(Clone, Debug)]
pub struct TriangleRule {
    points: Vec<Point2>,
    weights: Vec<f64>,
}

impl TriangleRule {
    pub fn collapsed(q: usize) -> Self {
        let gl: Vec<(f64, f64)> = gauss_legendre(q)
            .into_iter()
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        let mut points = Vec::with_capacity(q * q);
        let mut weights = Vec::with_capacity(q * q);
        for &(u, wu) in &gl {
            for &(v, wv) in &gl {
                points.push([u, v * (1.0 - u)]);
                weights.push(wu * wv * (1.0 - u));
            }
        }
        TriangleRule { points, weights }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Nodes and weights mapped onto `t`; weights sum to its area.
    pub fn on(&self, t: &Triangle) -> Vec<(Point2, f64)> {
        let jac = 2.0 * triangle_area(t);
        let e1 = [t[1][0] - t[0][0], t[1][1] - t[0][1]];
        let e2 = [t[2][0] - t[0][0], t[2][1] - t[0][1]];
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| {
                (
                    [
                        t[0][0] + p[0] * e1[0] + p[1] * e2[0],
                        t[0][1] + p[0] * e1[1] + p[1] * e2[1],
                    ],
                    w * jac,
                )
            })
            .collect()
    }
}
