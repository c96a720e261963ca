//! Lattice polygons in a plane lattice: hulls, Pick counts, protected points.

use thiserror::Error;

use crate::lattice::{doubled_signed_area, integer_length, orient2, IVec, IVec2};

/// Default cap on the protected-point search radius.
pub const DEFAULT_MAX_RADIUS: f64 = 4096.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanarError {
    #[error("polygon is degenerate (needs a nonempty interior)")]
    Degenerate,
    #[error("protected-point search needs radius {needed:.3}, above the configured {max:.3}")]
    RadiusExceeded { needed: f64, max: f64 },
}

/// Strict convex hull, counter-clockwise, without collinear boundary points.
pub fn convex_hull(points: &[IVec2]) -> Vec<IVec2> {
    let mut pts: Vec<IVec2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<IVec2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orient2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<IVec2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orient2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Number of lattice points in a convex lattice polygon, by Pick's theorem.
pub fn lattice_point_count(hull: &[IVec2]) -> u128 {
    match hull.len() {
        0 => 0,
        1 => 1,
        _ => {
            let n = hull.len();
            let boundary: u128 = (0..n)
                .map(|i| integer_length(&hull[i], &hull[(i + 1) % n]).expect("distinct") as u128)
                .sum::<u128>()
                / if n == 2 { 2 } else { 1 };
            if n == 2 {
                return boundary + 1;
            }
            let area2 = doubled_signed_area(hull).unsigned_abs();
            // 2A = 2I + B - 2
            let interior = (area2 + 2 - boundary) / 2;
            interior + boundary
        }
    }
}

fn inscribed_radius(hull: &[IVec2]) -> (f64, [f64; 2]) {
    let n = hull.len() as f64;
    let c = [
        hull.iter().map(|p| p.0[0] as f64).sum::<f64>() / n,
        hull.iter().map(|p| p.0[1] as f64).sum::<f64>() / n,
    ];
    let rho = (0..hull.len())
        .map(|i| {
            let a = hull[i].to_f64();
            let b = hull[(i + 1) % hull.len()].to_f64();
            let e = [b[0] - a[0], b[1] - a[1]];
            ((e[0] * (c[1] - a[1]) - e[1] * (c[0] - a[0])) / e[0].hypot(e[1])).abs()
        })
        .fold(f64::INFINITY, f64::min);
    (rho, c)
}

/// Lattice points `q` outside the polygon such that `conv(F ∪ {q})` adds no lattice point but `q`.
///
/// A convex set containing `F` has no lattice points beyond those of `F`
/// exactly when it avoids every protected point.
pub fn protected_points(polygon: &[IVec2], max_radius: f64) -> Result<Vec<IVec2>, PlanarError> {
    let hull = convex_hull(polygon);
    if hull.len() < 3 {
        return Err(PlanarError::Degenerate);
    }
    let n_f = lattice_point_count(&hull);
    let (rho, c) = inscribed_radius(&hull);
    // Pick: area(conv(F ∪ q)) <= N_F - 3/2, and that area is at least rho·|q - c|.
    let radius = (n_f as f64 - 1.5) / (rho * (1.0 - 1e-9)) + 1.0;
    if radius > max_radius {
        return Err(PlanarError::RadiusExceeded {
            needed: radius,
            max: max_radius,
        });
    }
    let orientation = doubled_signed_area(&hull).signum();
    let r = radius.ceil() as i64;
    let (cx, cy) = (c[0].round() as i64, c[1].round() as i64);
    let mut out = Vec::new();
    let mut cand = hull.clone();
    cand.push(IVec([0, 0]));
    for x in cx - r - 1..=cx + r + 1 {
        for y in cy - r - 1..=cy + r + 1 {
            let dx = x as f64 - c[0];
            let dy = y as f64 - c[1];
            if dx.hypot(dy) > radius {
                continue;
            }
            let q = IVec([x, y]);
            if crate::lattice::point_in_convex(&hull, orientation, &q) {
                continue;
            }
            *cand.last_mut().expect("nonempty") = q;
            if lattice_point_count(&convex_hull(&cand)) == n_f + 1 {
                out.push(q);
            }
        }
    }
    out.sort();
    Ok(out)
}
