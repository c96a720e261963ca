//! Exact integer lattice geometry in dimensions 2 and 3.
//!
//! Everything here is computed with integers (i64 storage, i128 intermediates)
//! or arbitrary-precision rationals. Floating point never enters a lattice
//! predicate.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Largest absolute coordinate accepted for face vertices. Keeps every
/// triple product of edge vectors inside i128.
pub const COORD_LIMIT: i64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is self-intersecting (edges {0} and {1})")]
    SelfIntersecting(usize, usize),
    #[error("vertices are collinear")]
    Collinear,
    #[error("vertex {0} is not coplanar with the others")]
    NotCoplanar(usize),
    #[error("polygon is not strictly convex at edge {0}")]
    NotConvex(usize),
    #[error("face plane passes through the origin")]
    PlaneThroughOrigin,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("coordinate {0} exceeds the supported range")]
    CoordinateTooLarge(i128),
    #[error("plane normal {0:?} is not primitive")]
    NotPrimitive([i64; 3]),
    #[error("invalid face JSON: {0}")]
    Json(String),
}

/// Integer vector with `N` components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IVec<const N: usize>(pub [i64; N]);

pub type IVec2 = IVec<2>;
pub type IVec3 = IVec<3>;

impl<const N: usize> IVec<N> {
    pub const fn new(c: [i64; N]) -> Self {
        IVec(c)
    }

    pub fn zero() -> Self {
        IVec([0; N])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn dot(&self, other: &Self) -> i128 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum()
    }

    /// Componentwise difference widened to i128.
    pub fn diff(&self, other: &Self) -> [i128; N] {
        let mut out = [0i128; N];
        for (o, (&a, &b)) in out.iter_mut().zip(self.0.iter().zip(other.0.iter())) {
            *o = a as i128 - b as i128;
        }
        out
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        narrow_array(self.diff(other))
    }

    pub fn to_f64(&self) -> [f64; N] {
        self.0.map(|c| c as f64)
    }
}

impl IVec3 {
    pub fn cross(&self, other: &Self) -> [i128; 3] {
        cross3(widen(self.0), widen(other.0))
    }
}

impl<const N: usize> fmt::Display for IVec<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn widen<const N: usize>(v: [i64; N]) -> [i128; N] {
    v.map(|c| c as i128)
}

pub(crate) fn narrow(x: i128) -> Result<i64, LatticeError> {
    i64::try_from(x).map_err(|_| LatticeError::CoordinateTooLarge(x))
}

pub(crate) fn narrow_array<const N: usize>(v: [i128; N]) -> Result<IVec<N>, LatticeError> {
    let mut out = [0i64; N];
    for (o, &c) in out.iter_mut().zip(v.iter()) {
        *o = narrow(c)?;
    }
    Ok(IVec(out))
}

pub(crate) fn cross3(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot3(a: [i128; 3], b: [i128; 3]) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Twice the signed area of the triangle `abc` (positive when counter-clockwise).
pub fn orient2(a: &IVec2, b: &IVec2, c: &IVec2) -> i128 {
    let [ux, uy] = b.diff(a);
    let [vx, vy] = c.diff(a);
    ux * vy - uy * vx
}

fn gcd_all(values: &[i128]) -> i128 {
    values.iter().fold(0i128, |g, &v| g.gcd(&v))
}

/// Number of lattice segments on `AB`: the gcd of the absolute coordinate differences.
pub fn integer_length<const N: usize>(a: &IVec<N>, b: &IVec<N>) -> Result<u64, LatticeError> {
    if a == b {
        return Err(LatticeError::DegenerateSegment);
    }
    let g = gcd_all(&a.diff(b));
    u64::try_from(g).map_err(|_| LatticeError::CoordinateTooLarge(g))
}

fn segments_intersect(p1: &IVec2, p2: &IVec2, q1: &IVec2, q2: &IVec2) -> bool {
    let d1 = orient2(q1, q2, p1).signum();
    let d2 = orient2(q1, q2, p2).signum();
    let d3 = orient2(p1, p2, q1).signum();
    let d4 = orient2(p1, p2, q2).signum();
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    let on = |a: &IVec2, b: &IVec2, c: &IVec2| {
        orient2(a, b, c) == 0
            && c.0[0] >= a.0[0].min(b.0[0])
            && c.0[0] <= a.0[0].max(b.0[0])
            && c.0[1] >= a.0[1].min(b.0[1])
            && c.0[1] <= a.0[1].max(b.0[1])
    };
    (d1 == 0 && on(q1, q2, p1))
        || (d2 == 0 && on(q1, q2, p2))
        || (d3 == 0 && on(p1, p2, q1))
        || (d4 == 0 && on(p1, p2, q2))
}

/// Checks that the closed polygon is simple.
pub fn check_simple(poly: &[IVec2]) -> Result<(), LatticeError> {
    let n = poly.len();
    if n < 3 {
        return Err(LatticeError::TooFewVertices(n));
    }
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        if a == b {
            return Err(LatticeError::SelfIntersecting(i, i));
        }
        for j in (i + 1)..n {
            let (c, d) = (&poly[j], &poly[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Adjacent edges may only share their common vertex.
                let (shared, other_a, other_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if orient2(other_a, shared, other_b) == 0 {
                    let u = shared.diff(other_a);
                    let v = other_b.diff(shared);
                    if u[0] * v[0] + u[1] * v[1] < 0 {
                        return Err(LatticeError::SelfIntersecting(i, j));
                    }
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Err(LatticeError::SelfIntersecting(i, j));
            }
        }
    }
    Ok(())
}

/// Twice the signed shoelace area of a closed polygon.
pub fn doubled_signed_area(poly: &[IVec2]) -> i128 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % n]);
            a.0[0] as i128 * b.0[1] as i128 - a.0[1] as i128 * b.0[0] as i128
        })
        .sum()
}

/// Integer area of a simple lattice polygon: twice its Euclidean area.
pub fn integer_area(poly: &[IVec2]) -> Result<u128, LatticeError> {
    check_simple(poly)?;
    Ok(doubled_signed_area(poly).unsigned_abs())
}

/// Lattice points of a convex polygon (either orientation), boundary included.
pub fn convex_polygon_lattice_points(poly: &[IVec2]) -> Vec<IVec2> {
    let orientation = doubled_signed_area(poly).signum();
    let (xmin, xmax) = min_max(poly.iter().map(|p| p.0[0]));
    let (ymin, ymax) = min_max(poly.iter().map(|p| p.0[1]));
    let mut out = Vec::new();
    for x in xmin..=xmax {
        for y in ymin..=ymax {
            let q = IVec([x, y]);
            if point_in_convex(poly, orientation, &q) {
                out.push(q);
            }
        }
    }
    out
}

/// Closed containment test for a convex polygon with the given orientation sign.
pub fn point_in_convex(poly: &[IVec2], orientation: i128, q: &IVec2) -> bool {
    let n = poly.len();
    (0..n).all(|i| orient2(&poly[i], &poly[(i + 1) % n], q) * orientation >= 0)
}

fn min_max(it: impl Iterator<Item = i64>) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Integer basis of the lattice planes `{x : n·x = j}` for a primitive normal `n`.
///
/// `from_plane` has columns `u, v, p` with `n·u = n·v = 0` and `n·p = 1`;
/// `to_plane` is its inverse, whose third row is `n`. A lattice point `x`
/// on level `j` has plane coordinates `to_plane·x = (s, t, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneLattice {
    normal: IVec3,
    from_plane: [[i64; 3]; 3],
    to_plane: [[i64; 3]; 3],
}

impl PlaneLattice {
    pub fn new(normal: IVec3) -> Result<Self, LatticeError> {
        let mut row = widen(normal.0);
        if gcd_all(&row) != 1 {
            return Err(LatticeError::NotPrimitive(normal.0));
        }
        let mut basis = [[1i128, 0, 0], [0, 1, 0], [0, 0, 1]];
        // Column-reduce the row vector to a single ±1 entry.
        loop {
            let nonzero: Vec<usize> = (0..3).filter(|&i| row[i] != 0).collect();
            if nonzero.len() == 1 {
                break;
            }
            let pivot = *nonzero.iter().min_by_key(|&&i| row[i].abs()).unwrap();
            for &j in &nonzero {
                if j == pivot {
                    continue;
                }
                let q = Integer::div_floor(&row[j], &row[pivot]);
                row[j] -= q * row[pivot];
                for r in basis.iter_mut() {
                    r[j] -= q * r[pivot];
                }
            }
        }
        let k = (0..3).find(|&i| row[i] != 0).unwrap();
        if k != 2 {
            for r in basis.iter_mut() {
                r.swap(k, 2);
            }
            row.swap(k, 2);
        }
        if row[2] < 0 {
            for r in basis.iter_mut() {
                r[2] = -r[2];
            }
        }
        let inverse = integer_inverse3(&basis).ok_or(LatticeError::NotUnimodular(0))?;
        let to_i64 = |m: [[i128; 3]; 3]| -> Result<[[i64; 3]; 3], LatticeError> {
            let mut out = [[0i64; 3]; 3];
            for (o, r) in out.iter_mut().zip(m.iter()) {
                *o = narrow_array(*r)?.0;
            }
            Ok(out)
        };
        let lattice = PlaneLattice {
            normal,
            from_plane: to_i64(basis)?,
            to_plane: to_i64(inverse)?,
        };
        debug_assert_eq!(lattice.to_plane[2], normal.0);
        Ok(lattice)
    }

    pub fn normal(&self) -> IVec3 {
        self.normal
    }

    /// Plane coordinates `(s, t, level)` of a lattice point.
    pub fn to_plane(&self, x: &IVec3) -> [i128; 3] {
        let x = widen(x.0);
        self.to_plane.map(|r| dot3(widen(r), x))
    }

    /// Lattice point with plane coordinates `(s, t)` on `level`.
    pub fn from_plane(&self, s: i64, t: i64, level: i64) -> [i128; 3] {
        let c = [s as i128, t as i128, level as i128];
        self.from_plane.map(|r| dot3(widen(r), c))
    }

    /// Real plane coordinates of a real point.
    pub fn to_plane_f64(&self, x: [f64; 3]) -> [f64; 3] {
        self.to_plane
            .map(|r| r[0] as f64 * x[0] + r[1] as f64 * x[1] + r[2] as f64 * x[2])
    }

    /// Real point with plane coordinates `(s, t, level)`.
    pub fn from_plane_f64(&self, c: [f64; 3]) -> [f64; 3] {
        self.from_plane
            .map(|r| r[0] as f64 * c[0] + r[1] as f64 * c[1] + r[2] as f64 * c[2])
    }
}

fn integer_inverse3(m: &[[i128; 3]; 3]) -> Option<[[i128; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() != 1 {
        return None;
    }
    let mut inv = [[0i128; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            // cofactor of m[j][i]
            let r: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]];
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            *e = sign * minor * det;
        }
    }
    Some(inv)
}

/// A strictly convex lattice polygon lying in a plane that misses the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeFace {
    vertices: Vec<IVec3>,
    normal: IVec3,
    offset: i64,
}

#[derive(Serialize, Deserialize)]
struct FaceJson {
    vertices: Vec<[i64; 3]>,
}

impl LatticeFace {
    pub fn new(vertices: Vec<IVec3>) -> Result<Self, LatticeError> {
        let n = vertices.len();
        if n < 3 {
            return Err(LatticeError::TooFewVertices(n));
        }
        for v in &vertices {
            for &c in &v.0 {
                if c.abs() > COORD_LIMIT {
                    return Err(LatticeError::CoordinateTooLarge(c as i128));
                }
            }
        }
        let w: Vec<[i128; 3]> = vertices.iter().map(|v| widen(v.0)).collect();
        // Newell normal: twice the vector area.
        let mut area = [0i128; 3];
        for i in 0..n {
            let c = cross3(w[i], w[(i + 1) % n]);
            for k in 0..3 {
                area[k] += c[k];
            }
        }
        if area == [0, 0, 0] {
            let e = [w[1][0] - w[0][0], w[1][1] - w[0][1], w[1][2] - w[0][2]];
            let flat = w
                .iter()
                .all(|p| cross3(e, [p[0] - w[0][0], p[1] - w[0][1], p[2] - w[0][2]]) == [0, 0, 0]);
            // Zero vector area with spread-out vertices means the boundary folds over itself.
            return Err(if flat {
                LatticeError::Collinear
            } else {
                LatticeError::NotConvex(0)
            });
        }
        for (i, wi) in w.iter().enumerate() {
            let d = [wi[0] - w[0][0], wi[1] - w[0][1], wi[2] - w[0][2]];
            if dot3(area, d) != 0 {
                return Err(LatticeError::NotCoplanar(i));
            }
        }
        for i in 0..n {
            let a = w[i];
            let b = w[(i + 1) % n];
            let e = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            for (k, wk) in w.iter().enumerate() {
                if k == i || k == (i + 1) % n {
                    continue;
                }
                let d = [wk[0] - a[0], wk[1] - a[1], wk[2] - a[2]];
                if dot3(area, cross3(e, d)) <= 0 {
                    return Err(LatticeError::NotConvex(i));
                }
            }
        }
        let g = gcd_all(&area);
        let mut normal = area.map(|c| c / g);
        let mut offset = dot3(normal, w[0]);
        if offset == 0 {
            return Err(LatticeError::PlaneThroughOrigin);
        }
        if offset < 0 {
            normal = normal.map(|c| -c);
            offset = -offset;
        }
        Ok(LatticeFace {
            vertices,
            normal: narrow_array(normal)?,
            offset: narrow(offset)?,
        })
    }

    pub fn from_coords(coords: &[[i64; 3]]) -> Result<Self, LatticeError> {
        Self::new(coords.iter().map(|&c| IVec(c)).collect())
    }

    /// Parses `{"vertices": [[x,y,z], ...]}` and validates every face invariant.
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let raw: FaceJson =
            serde_json::from_str(text).map_err(|e| LatticeError::Json(e.to_string()))?;
        Self::from_coords(&raw.vertices)
    }

    pub fn to_json(&self) -> String {
        let raw = FaceJson {
            vertices: self.vertices.iter().map(|v| v.0).collect(),
        };
        serde_json::to_string(&raw).expect("face serializes")
    }

    pub fn vertices(&self) -> &[IVec3] {
        &self.vertices
    }

    /// Primitive normal oriented so that the offset is positive.
    pub fn normal(&self) -> IVec3 {
        self.normal
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn plane_lattice(&self) -> PlaneLattice {
        PlaneLattice::new(self.normal).expect("face normal is primitive")
    }

    /// Vertices in plane lattice coordinates.
    pub fn plane_polygon(&self, lattice: &PlaneLattice) -> Vec<IVec2> {
        self.vertices
            .iter()
            .map(|v| {
                let [s, t, _] = lattice.to_plane(v);
                IVec([s as i64, t as i64])
            })
            .collect()
    }

    /// All lattice points of the face, vertices and boundary included.
    pub fn lattice_points(&self) -> Vec<IVec3> {
        let lattice = self.plane_lattice();
        let poly = self.plane_polygon(&lattice);
        convex_polygon_lattice_points(&poly)
            .into_iter()
            .map(|q| {
                let x = lattice.from_plane(q.0[0], q.0[1], self.offset);
                IVec(x.map(|c| c as i64))
            })
            .collect()
    }

    /// Integer area measured in the lattice of the face plane.
    pub fn integer_area(&self) -> u128 {
        let lattice = self.plane_lattice();
        doubled_signed_area(&self.plane_polygon(&lattice)).unsigned_abs()
    }
}

/// Integer distance from the origin to the plane of `face`.
pub fn integer_distance(face: &LatticeFace) -> u64 {
    face.offset as u64
}

/// Square integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMap<const N: usize> {
    rows: [[i64; N]; N],
}

impl<const N: usize> UnimodularMap<N> {
    pub fn new(rows: [[i64; N]; N]) -> Result<Self, LatticeError> {
        let det = determinant(&rows);
        if det.abs() != 1 {
            return Err(LatticeError::NotUnimodular(det));
        }
        Ok(UnimodularMap { rows })
    }

    pub fn identity() -> Self {
        let mut rows = [[0i64; N]; N];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 1;
        }
        UnimodularMap { rows }
    }

    /// `I + k·E_ij` for `i ≠ j`.
    pub fn shear(i: usize, j: usize, k: i64) -> Self {
        assert!(i != j && i < N && j < N);
        let mut m = Self::identity();
        m.rows[i][j] = k;
        m
    }

    pub fn rows(&self) -> &[[i64; N]; N] {
        &self.rows
    }

    pub fn determinant(&self) -> i128 {
        determinant(&self.rows)
    }

    pub fn compose(&self, other: &Self) -> Result<Self, LatticeError> {
        let mut rows = [[0i64; N]; N];
        for (row, lhs) in rows.iter_mut().zip(&self.rows) {
            for (j, cell) in row.iter_mut().enumerate() {
                let s: i128 = (0..N)
                    .map(|k| lhs[k] as i128 * other.rows[k][j] as i128)
                    .sum();
                *cell = narrow(s)?;
            }
        }
        Ok(UnimodularMap { rows })
    }

    pub fn apply(&self, v: &IVec<N>) -> Result<IVec<N>, LatticeError> {
        let mut out = [0i128; N];
        for (o, r) in out.iter_mut().zip(self.rows.iter()) {
            *o = IVec(*r).dot(v);
        }
        narrow_array(out)
    }

    pub fn apply_f64(&self, v: [f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, r) in out.iter_mut().zip(self.rows.iter()) {
            *o = r.iter().zip(v.iter()).map(|(&a, &b)| a as f64 * b).sum();
        }
        out
    }
}

/// Image of a face under a unimodular map of the ambient lattice.
pub fn apply_unimodular(
    m: &UnimodularMap<3>,
    face: &LatticeFace,
) -> Result<LatticeFace, LatticeError> {
    let vertices = face
        .vertices()
        .iter()
        .map(|v| m.apply(v))
        .collect::<Result<Vec<_>, _>>()?;
    LatticeFace::new(vertices)
}

/// Exact determinant by fraction-free Bareiss elimination.
pub fn determinant<const N: usize>(rows: &[[i64; N]; N]) -> i128 {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..N {
        if a[k][k] == 0 {
            match (k + 1..N).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..N {
            for j in k + 1..N {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if N == 0 {
        1
    } else {
        sign * a[N - 1][N - 1]
    }
}
