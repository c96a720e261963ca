//! Cell-wise quadrature of the dual density over the admissible domain.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::domain::admissible_domain;
use super::{FrequencyMethod, FrequencyResult, Moebius2dError};
use crate::lattice::LatticeFace;
use crate::quadrature::{fan, split_triangle, triangle_area, Point2, Triangle, TriangleRule};

/// Cap on (point of line 2, point of line 3, triangle of line 1) evaluations.
pub const DEFAULT_PAIR_BUDGET: u64 = 4_000_000_000;

const FINE_ORDER: usize = 10;
const COARSE_ORDER: usize = 6;
const BATCH: usize = 256;
/// Orderings of three lines; one ordering is integrated.
const ORDERINGS: f64 = 6.0;

struct Inner {
    /// Fan triangles of the first line's polygon with their areas.
    triangles: Vec<(Triangle, f64)>,
}

impl Inner {
    /// `∫_{P1} 8/|D|³ dn1` at fixed `n2, n3`; `D` is affine in `n1`, so each
    /// triangle contributes `8|T| / |D(v1) D(v2) D(v3)|`.
    fn eval(&self, n2: Point2, n3: Point2) -> Option<f64> {
        let c0 = n3[0] * n2[1] - n2[0] * n3[1];
        let cx = n3[1] - n2[1];
        let cy = n2[0] - n3[0];
        let mut sum = 0.0;
        let mut sign = 0.0;
        for (t, area) in &self.triangles {
            let mut prod = 1.0;
            for v in t {
                let d = c0 + cx * v[0] + cy * v[1];
                if d == 0.0 || (sign != 0.0 && d.signum() != sign) {
                    return None;
                }
                sign = d.signum();
                prod *= d;
            }
            sum += area / prod.abs();
        }
        Some(8.0 * sum)
    }
}

#[derive(Clone, Copy)]
struct Piece {
    cell: usize,
    t2: Triangle,
    t3: Triangle,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

struct Rules {
    fine: TriangleRule,
    coarse: TriangleRule,
}

fn product(rule: &TriangleRule, inner: &Inner, t2: &Triangle, t3: &Triangle) -> Option<f64> {
    let (a, b) = (rule.on(t2), rule.on(t3));
    let mut sum = 0.0;
    for &(x2, w2) in &a {
        for &(x3, w3) in &b {
            sum += w2 * w3 * inner.eval(x2, x3)?;
        }
    }
    Some(sum)
}

fn evaluate(
    rules: &Rules,
    inners: &[Inner],
    cell: usize,
    t2: Triangle,
    t3: Triangle,
) -> Result<Piece, Moebius2dError> {
    let inner = &inners[cell];
    let fine = product(&rules.fine, inner, &t2, &t3).ok_or(Moebius2dError::DegenerateCell(cell))?;
    let coarse =
        product(&rules.coarse, inner, &t2, &t3).ok_or(Moebius2dError::DegenerateCell(cell))?;
    Ok(Piece {
        cell,
        t2,
        t3,
        value: fine,
        error: (fine - coarse).abs(),
    })
}

fn longest_edge(t: &Triangle) -> f64 {
    (0..3)
        .map(|i| {
            let (a, b) = (t[i], t[(i + 1) % 3]);
            (b[0] - a[0]).hypot(b[1] - a[1])
        })
        .fold(0.0, f64::max)
}

fn children(p: &Piece) -> Vec<(usize, Triangle, Triangle)> {
    if longest_edge(&p.t2) >= longest_edge(&p.t3) {
        split_triangle(&p.t2)
            .into_iter()
            .map(|t| (p.cell, t, p.t3))
            .collect()
    } else {
        split_triangle(&p.t3)
            .into_iter()
            .map(|t| (p.cell, p.t2, t))
            .collect()
    }
}

/// Frequency of a distance-1 face with relative tolerance `tol`.
pub fn frequency_exact(face: &LatticeFace, tol: f64) -> Result<FrequencyResult, Moebius2dError> {
    frequency_exact_with_budget(face, tol, DEFAULT_PAIR_BUDGET)
}

pub fn frequency_exact_with_budget(
    face: &LatticeFace,
    tol: f64,
    budget: u64,
) -> Result<FrequencyResult, Moebius2dError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Moebius2dError::InvalidTolerance);
    }
    let domain = admissible_domain(face)?;
    let result = |value: f64, error: f64, samples: u64| FrequencyResult {
        value: value / ORDERINGS,
        error: error / ORDERINGS,
        method: FrequencyMethod::Exact,
        samples,
        face: face.clone(),
        accepted: samples,
        inconclusive: 0,
        outside_box: 0,
        warning: None,
    };
    if domain.cells.is_empty() {
        return Ok(result(0.0, 0.0, 0));
    }
    let rules = Rules {
        fine: TriangleRule::collapsed(FINE_ORDER),
        coarse: TriangleRule::collapsed(COARSE_ORDER),
    };
    let inners: Vec<Inner> = domain
        .cells
        .iter()
        .map(|c| Inner {
            triangles: fan(&c.polygons[0])
                .into_iter()
                .map(|t| (t, triangle_area(&t)))
                .collect(),
        })
        .collect();
    let cost = |cell: usize| -> u64 {
        let pts = (rules.fine.len().pow(2) + rules.coarse.len().pow(2)) as u64;
        pts * inners[cell].triangles.len() as u64
    };

    let mut work: Vec<(usize, Triangle, Triangle)> = Vec::new();
    for (k, c) in domain.cells.iter().enumerate() {
        for t2 in fan(&c.polygons[1]) {
            for t3 in fan(&c.polygons[2]) {
                work.push((k, t2, t3));
            }
        }
    }
    let mut evaluations = 0u64;
    let mut heap = BinaryHeap::new();
    loop {
        evaluations += work.iter().map(|w| cost(w.0)).sum::<u64>();
        let pieces: Vec<Result<Piece, Moebius2dError>> = work
            .par_iter()
            .map(|&(k, t2, t3)| evaluate(&rules, &inners, k, t2, t3))
            .collect();
        for p in pieces {
            heap.push(p?);
        }
        let total: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= tol * total.abs() {
            return Ok(result(total, error, evaluations));
        }
        work.clear();
        while work.len() < 4 * BATCH {
            match heap.pop() {
                Some(p) => work.extend(children(&p)),
                None => break,
            }
        }
        let next: u64 = work.iter().map(|w| cost(w.0)).sum();
        if evaluations + next > budget {
            return Err(Moebius2dError::BudgetExceeded {
                value: total / ORDERINGS,
                error: error / ORDERINGS,
            });
        }
    }
}
