//! Dual-coordinate domain of line triples whose trace triangle has exactly the face's lattice points.

use super::Moebius2dError;
use crate::lattice::{doubled_signed_area, IVec2, LatticeFace};
use crate::planar;

pub type Polygon = Vec<[f64; 2]>;

/// Cells, protected points, chart origin and containment polygon of a planar face.
pub type PlanarCells = (Vec<ConstraintCell>, Vec<IVec2>, [f64; 2], Polygon);

/// Cells whose area falls below this fraction of the containment polygon are dropped.
const EMPTY_CELL_FRACTION: f64 = 1e-14;

/// Product of three convex polygons, one per line.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintCell {
    pub polygons: [Polygon; 3],
    /// For each protected point, the index of the line that excludes it.
    pub case_label: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleDomain {
    pub cells: Vec<ConstraintCell>,
    pub face: LatticeFace,
    /// Face vertices in plane coordinates, counter-clockwise.
    pub polygon: Vec<IVec2>,
    /// Protected points in plane coordinates.
    pub protected_points: Vec<IVec2>,
    /// Chart origin in plane coordinates (the vertex centroid of the face).
    pub origin: [f64; 2],
    /// Lines containing the face: `n·(v − origin) <= 1` for every vertex `v`.
    pub containment: Polygon,
}

pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

/// Sutherland–Hodgman clip of a convex polygon to `g·n <= c`.
pub fn clip(poly: &[[f64; 2]], g: [f64; 2], c: f64) -> Polygon {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let m = poly.len();
    for i in 0..m {
        let (p, r) = (poly[i], poly[(i + 1) % m]);
        let fp = g[0] * p[0] + g[1] * p[1] - c;
        let fr = g[0] * r[0] + g[1] * r[1] - c;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fr > 0.0) || (fp > 0.0 && fr < 0.0) {
            let t = fp / (fp - fr);
            out.push([p[0] + t * (r[0] - p[0]), p[1] + t * (r[1] - p[1])]);
        }
    }
    out
}

/// `{n : n·(v − o) <= 1}` for a counter-clockwise polygon around `o`: the polar, built from edges.
pub fn polar_polygon(polygon: &[IVec2], origin: [f64; 2]) -> Polygon {
    let k = polygon.len();
    let local: Vec<[f64; 2]> = polygon
        .iter()
        .map(|v| [v.0[0] as f64 - origin[0], v.0[1] as f64 - origin[1]])
        .collect();
    (0..k)
        .map(|i| {
            let (p, q) = (local[i], local[(i + 1) % k]);
            // n·p = 1, n·q = 1
            let det = p[0] * q[1] - q[0] * p[1];
            [(q[1] - p[1]) / det, (p[0] - q[0]) / det]
        })
        .collect()
}

/// Planar cell decomposition for a lattice polygon given in plane coordinates.
pub fn planar_cells(polygon: &[IVec2]) -> Result<PlanarCells, Moebius2dError> {
    let mut poly = polygon.to_vec();
    if doubled_signed_area(&poly) < 0 {
        poly.reverse();
    }
    let n = poly.len() as f64;
    let origin = [
        poly.iter().map(|v| v.0[0] as f64).sum::<f64>() / n,
        poly.iter().map(|v| v.0[1] as f64).sum::<f64>() / n,
    ];
    let protected = planar::protected_points(&poly, planar::DEFAULT_MAX_RADIUS)?;
    let containment = polar_polygon(&poly, origin);
    let eps = EMPTY_CELL_FRACTION * polygon_area(&containment).abs();
    let local: Vec<[f64; 2]> = protected
        .iter()
        .map(|q| [q.0[0] as f64 - origin[0], q.0[1] as f64 - origin[1]])
        .collect();
    let mut cells = Vec::new();
    let mut label = Vec::with_capacity(local.len());
    let start = [
        containment.clone(),
        containment.clone(),
        containment.clone(),
    ];
    recurse(&local, 0, start, &mut label, eps, &mut cells);
    Ok((cells, protected, origin, containment))
}

fn nonempty(p: &[[f64; 2]], eps: f64) -> bool {
    p.len() >= 3 && polygon_area(p).abs() > eps
}

fn recurse(
    points: &[[f64; 2]],
    k: usize,
    polys: [Polygon; 3],
    label: &mut Vec<u8>,
    eps: f64,
    out: &mut Vec<ConstraintCell>,
) {
    if k == points.len() {
        out.push(ConstraintCell {
            polygons: polys,
            case_label: label.clone(),
        });
        return;
    }
    let q = points[k];
    'lines: for i in 0..3 {
        let mut next = polys.clone();
        // line i excludes q: n·q >= 1
        next[i] = clip(&next[i], [-q[0], -q[1]], -1.0);
        if !nonempty(&next[i], eps) {
            continue;
        }
        // earlier lines do not: n·q < 1
        for poly in next.iter_mut().take(i) {
            *poly = clip(poly, q, 1.0);
            if !nonempty(poly, eps) {
                continue 'lines;
            }
        }
        label.push(i as u8);
        recurse(points, k + 1, next, label, eps, out);
        label.pop();
    }
}

/// Cell decomposition of the line triples cutting a triangle whose lattice points are exactly the face's.
pub fn admissible_domain(face: &LatticeFace) -> Result<AdmissibleDomain, Moebius2dError> {
    if face.offset() != 1 {
        return Err(Moebius2dError::DistanceNotOne(face.offset() as u64));
    }
    let lattice = face.plane_lattice();
    let mut polygon = face.plane_polygon(&lattice);
    if doubled_signed_area(&polygon) < 0 {
        polygon.reverse();
    }
    let (cells, protected_points, origin, containment) = planar_cells(&polygon)?;
    Ok(AdmissibleDomain {
        cells,
        face: face.clone(),
        polygon,
        protected_points,
        origin,
        containment,
    })
}

impl AdmissibleDomain {
    /// Whether a dual configuration lies in some cell (closed tests).
    pub fn contains(&self, lines: &[[f64; 2]; 3]) -> bool {
        let inside = |poly: &Polygon, n: [f64; 2]| {
            let m = poly.len();
            (0..m).all(|i| {
                let (a, b) = (poly[i], poly[(i + 1) % m]);
                (b[0] - a[0]) * (n[1] - a[1]) - (b[1] - a[1]) * (n[0] - a[0]) >= -1e-12
            })
        };
        self.cells
            .iter()
            .any(|c| (0..3).all(|i| inside(&c.polygons[i], lines[i])))
    }

    /// Per-line bounding boxes `[xmin, xmax, ymin, ymax]` of the cell union.
    pub fn line_boxes(&self) -> Option<[[f64; 4]; 3]> {
        cell_boxes(&self.cells)
    }
}

pub fn cell_boxes(cells: &[ConstraintCell]) -> Option<[[f64; 4]; 3]> {
    if cells.is_empty() {
        return None;
    }
    let mut boxes = [[
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    ]; 3];
    for c in cells {
        for (b, poly) in boxes.iter_mut().zip(&c.polygons) {
            for p in poly {
                b[0] = b[0].min(p[0]);
                b[1] = b[1].max(p[0]);
                b[2] = b[2].min(p[1]);
                b[3] = b[3].max(p[1]);
            }
        }
    }
    Some(boxes)
}

pub fn polygon_box(poly: &[[f64; 2]]) -> [f64; 4] {
    poly.iter().fold(
        [
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        ],
        |b, p| {
            [
                b[0].min(p[0]),
                b[1].max(p[0]),
                b[2].min(p[1]),
                b[3].max(p[1]),
            ]
        },
    )
}
