//! Lattice points in simplicial cones and the sail-face predicate.

pub mod hull;

use num_integer::Integer;
use thiserror::Error;

use crate::lattice::{
    cross3, dot3, doubled_signed_area, widen, IVec, IVec2, IVec3, LatticeError, LatticeFace,
    PlaneLattice, COORD_LIMIT,
};
use crate::planar::{self, PlanarError};

pub use hull::{
    convex_hull_3d, default_cut, local_sail, local_sail_with_cut, SailFace, SailFaceSet,
};

/// Candidate lattice cells examined before a question is given up as inconclusive.
pub const DEFAULT_CELL_BUDGET: u64 = 10_000_000;

/// Margin on normalized sign tests for floating-point cones.
pub const FLOAT_MARGIN: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Sail2dError {
    #[error("cone edges are linearly dependent")]
    Singular,
    #[error("cone edge {0} is zero or not finite")]
    BadEdge(usize),
    #[error("region is unbounded: cone edge {0} does not cross the cutting plane")]
    Unbounded(usize),
    #[error("depth must be >= 1, got {0}")]
    BadDepth(i64),
    #[error("enumeration exceeded the budget of {0} candidate cells")]
    Budget(u64),
    #[error("{0} lattice points lie within the floating-point margin of the cone boundary")]
    Inconclusive(usize),
    #[error("too few lattice points for a sail fragment; increase depth")]
    InsufficientDepth,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Planar(#[from] PlanarError),
}

/// Result of a membership test against a closed cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    /// Within the floating-point margin of the boundary.
    Uncertain,
}

/// Cone with integer edge directions; all tests are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    edges: [IVec3; 3],
    /// `normals[i]` vanishes on edges `j != i` and is positive on edge `i`.
    normals: [[i128; 3]; 3],
}

/// Cone with real edge directions, stored normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatCone {
    edges: [[f64; 3]; 3],
    normals: [[f64; 3]; 3],
}

/// Closed simplicial cone spanned by three independent directions.
#[derive(Clone, Debug, PartialEq)]
pub enum Cone3 {
    Rational(RationalCone),
    Float(FloatCone),
}

fn cyclic(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dotf(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn crossf(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl Cone3 {
    /// Cone over integer directions; each direction is reduced to a primitive vector.
    pub fn rational(edges: [IVec3; 3]) -> Result<Self, Sail2dError> {
        let mut prim = edges;
        for (i, e) in prim.iter_mut().enumerate() {
            if e.is_zero() {
                return Err(Sail2dError::BadEdge(i));
            }
            for &c in &e.0 {
                if c.abs() > COORD_LIMIT {
                    return Err(LatticeError::CoordinateTooLarge(c as i128).into());
                }
            }
            let g = e.0.iter().fold(0i64, |g, &c| g.gcd(&c));
            e.0 = e.0.map(|c| c / g);
        }
        let w = prim.map(|e| widen(e.0));
        if dot3(w[0], cross3(w[1], w[2])) == 0 {
            return Err(Sail2dError::Singular);
        }
        let normals = [0, 1, 2].map(|i| {
            let (j, k) = cyclic(i);
            let m = cross3(w[j], w[k]);
            if dot3(m, w[i]) > 0 {
                m
            } else {
                m.map(|c| -c)
            }
        });
        Ok(Cone3::Rational(RationalCone {
            edges: prim,
            normals,
        }))
    }

    pub fn rational_from_coords(edges: [[i64; 3]; 3]) -> Result<Self, Sail2dError> {
        Self::rational(edges.map(IVec))
    }

    /// Cone over real directions.
    pub fn float(edges: [[f64; 3]; 3]) -> Result<Self, Sail2dError> {
        let mut unit = edges;
        for (i, e) in unit.iter_mut().enumerate() {
            let l = norm(*e);
            if !(l.is_finite() && l > 0.0) {
                return Err(Sail2dError::BadEdge(i));
            }
            *e = e.map(|c| c / l);
        }
        let det = dotf(unit[0], crossf(unit[1], unit[2]));
        if det.abs() < 1e-12 {
            return Err(Sail2dError::Singular);
        }
        let normals = [0, 1, 2].map(|i| {
            let (j, k) = cyclic(i);
            let m = crossf(unit[j], unit[k]);
            let l = norm(m);
            let s = if dotf(m, unit[i]) > 0.0 { 1.0 } else { -1.0 };
            m.map(|c| s * c / l)
        });
        Ok(Cone3::Float(FloatCone {
            edges: unit,
            normals,
        }))
    }

    /// One of the eight orthants cut out by three lines: `signs[i]` picks the ray of line `i`.
    pub fn orthant(lines: [[f64; 3]; 3], signs: [bool; 3]) -> Result<Self, Sail2dError> {
        let mut edges = lines;
        for (e, &positive) in edges.iter_mut().zip(&signs) {
            if !positive {
                *e = e.map(|c| -c);
            }
        }
        Self::float(edges)
    }

    pub fn positive_octant() -> Self {
        Self::rational_from_coords([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).expect("octant is a cone")
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Cone3::Rational(_))
    }

    /// Edge directions as reals (primitive integer vectors or unit vectors).
    pub fn edges_f64(&self) -> [[f64; 3]; 3] {
        match self {
            Cone3::Rational(c) => c.edges.map(|e| e.to_f64()),
            Cone3::Float(c) => c.edges,
        }
    }

    pub fn rational_edges(&self) -> Option<[IVec3; 3]> {
        match self {
            Cone3::Rational(c) => Some(c.edges),
            Cone3::Float(_) => None,
        }
    }

    /// Sign of `n·e_i` per edge; exact for rational cones.
    fn crossing_signs(&self, n: &IVec3) -> [i8; 3] {
        match self {
            Cone3::Rational(c) => c.edges.map(|e| n.dot(&e).signum() as i8),
            Cone3::Float(c) => c.edges.map(|e| {
                let v = dotf(n.to_f64(), e);
                if v > 0.0 {
                    1
                } else if v < 0.0 {
                    -1
                } else {
                    0
                }
            }),
        }
    }

    pub fn classify(&self, x: [i128; 3]) -> Membership {
        match self {
            Cone3::Rational(c) => {
                if c.normals.iter().all(|m| dot3(*m, x) >= 0) {
                    Membership::Inside
                } else {
                    Membership::Outside
                }
            }
            Cone3::Float(c) => {
                let xf = x.map(|v| v as f64);
                let len = norm(xf);
                if len == 0.0 {
                    return Membership::Inside;
                }
                let mut uncertain = false;
                for m in &c.normals {
                    let s = dotf(*m, xf) / len;
                    if s < -FLOAT_MARGIN {
                        return Membership::Outside;
                    }
                    if s <= FLOAT_MARGIN {
                        uncertain = true;
                    }
                }
                if uncertain {
                    Membership::Uncertain
                } else {
                    Membership::Inside
                }
            }
        }
    }

    /// Image under an integer-linear map; rational cones stay rational.
    pub fn transformed(&self, m: &crate::lattice::UnimodularMap<3>) -> Result<Self, Sail2dError> {
        match self {
            Cone3::Rational(c) => {
                let mut e = c.edges;
                for v in e.iter_mut() {
                    *v = m.apply(v)?;
                }
                Self::rational(e)
            }
            Cone3::Float(c) => Self::float(c.edges.map(|v| m.apply_f64(v))),
        }
    }
}

/// Cone points with `0 < n·x <= depth` for a primitive `n` crossing every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedConeRegion {
    cone: Cone3,
    lattice: PlaneLattice,
    depth: i64,
}

impl TruncatedConeRegion {
    pub fn new(cone: Cone3, normal: IVec3, depth: i64) -> Result<Self, Sail2dError> {
        if depth < 1 {
            return Err(Sail2dError::BadDepth(depth));
        }
        let lattice = PlaneLattice::new(normal)?;
        if let Some(i) = cone.crossing_signs(&normal).iter().position(|&s| s <= 0) {
            return Err(Sail2dError::Unbounded(i));
        }
        Ok(TruncatedConeRegion {
            cone,
            lattice,
            depth,
        })
    }

    pub fn cone(&self) -> &Cone3 {
        &self.cone
    }

    pub fn normal(&self) -> IVec3 {
        self.lattice.normal()
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }
}

/// Enumerated cone points; `uncertain` holds points inside the float margin.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConePoints {
    pub inside: Vec<IVec3>,
    pub uncertain: Vec<IVec3>,
}

struct Budget {
    left: u64,
    total: u64,
}

impl Budget {
    fn new(total: u64) -> Self {
        Budget { left: total, total }
    }

    fn spend(&mut self, n: u64) -> Result<(), Sail2dError> {
        if n > self.left {
            self.left = 0;
            return Err(Sail2dError::Budget(self.total));
        }
        self.left -= n;
        Ok(())
    }
}

/// `a s + b t + c >= 0` in plane coordinates of one level.
#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    a: i128,
    b: i128,
    c: i128,
}

#[derive(Clone, Copy, Debug)]
struct HalfPlaneF {
    a: f64,
    b: f64,
    c: f64,
}

enum Constraints {
    Exact([HalfPlane; 3]),
    Float { planes: [HalfPlaneF; 3], slack: f64 },
}

fn saturate(v: f64) -> i128 {
    if v.is_nan() {
        0
    } else {
        v.clamp(-1e30, 1e30) as i128
    }
}

/// Integer `s` with every half-plane satisfied on row `t`, exactly.
fn exact_row(planes: &[HalfPlane], t: i128) -> Option<(i128, i128)> {
    let mut lo = i128::MIN;
    let mut hi = i128::MAX;
    for p in planes {
        let rest = p.b * t + p.c;
        if p.a > 0 {
            lo = lo.max(Integer::div_ceil(&(-rest), &p.a));
        } else if p.a < 0 {
            hi = hi.min(Integer::div_floor(&rest, &(-p.a)));
        } else if rest < 0 {
            return None;
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// One level `n·x = j` of a cone, in plane coordinates.
struct Slice<'a> {
    cone: &'a Cone3,
    lattice: &'a PlaneLattice,
    level: i64,
    constraints: Constraints,
    t_range: (i128, i128),
    t_center: i128,
}

impl<'a> Slice<'a> {
    fn new(cone: &'a Cone3, lattice: &'a PlaneLattice, level: i64) -> Self {
        let cols: [[i128; 3]; 3] = [0, 1, 2]
            .map(|k| lattice.from_plane((k == 0) as i64, (k == 1) as i64, (k == 2) as i64));
        let n = lattice.normal();
        let j = level as i128;
        match cone {
            Cone3::Rational(c) => {
                let planes = c.normals.map(|m| HalfPlane {
                    a: dot3(m, cols[0]),
                    b: dot3(m, cols[1]),
                    c: j * dot3(m, cols[2]),
                });
                let ts: Vec<(i128, i128)> = c
                    .edges
                    .iter()
                    .map(|e| (lattice.to_plane(e)[1] * j, n.dot(e)))
                    .collect();
                let tmin = ts
                    .iter()
                    .map(|&(p, q)| Integer::div_floor(&p, &q))
                    .min()
                    .unwrap();
                let tmax = ts
                    .iter()
                    .map(|&(p, q)| Integer::div_ceil(&p, &q))
                    .max()
                    .unwrap();
                let tsum: f64 = ts.iter().map(|&(p, q)| p as f64 / q as f64).sum();
                Slice {
                    cone,
                    lattice,
                    level,
                    constraints: Constraints::Exact(planes),
                    t_range: (tmin, tmax),
                    t_center: saturate((tsum / 3.0).round()),
                }
            }
            Cone3::Float(c) => {
                let colsf = cols.map(|v| v.map(|x| x as f64));
                let nf = n.to_f64();
                let verts: Vec<[f64; 3]> = c
                    .edges
                    .iter()
                    .map(|e| {
                        let k = level as f64 / dotf(nf, *e);
                        e.map(|x| x * k)
                    })
                    .collect();
                let radius = verts.iter().map(|v| norm(*v)).fold(0.0, f64::max);
                let planes = c.normals.map(|m| HalfPlaneF {
                    a: dotf(m, colsf[0]),
                    b: dotf(m, colsf[1]),
                    c: level as f64 * dotf(m, colsf[2]),
                });
                let scale = colsf.iter().map(|v| norm(*v)).fold(0.0, f64::max);
                let slack = 2.0 * FLOAT_MARGIN * radius + 1e-12 * scale * (radius + 1.0);
                let tcoords: Vec<f64> = verts.iter().map(|v| lattice.to_plane_f64(*v)[1]).collect();
                let tmin = tcoords.iter().cloned().fold(f64::INFINITY, f64::min);
                let tmax = tcoords.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let pad = 1.0 + 1e-9 * (tmax - tmin).abs();
                Slice {
                    cone,
                    lattice,
                    level,
                    constraints: Constraints::Float { planes, slack },
                    t_range: (
                        saturate((tmin - pad).floor()),
                        saturate((tmax + pad).ceil()),
                    ),
                    t_center: saturate((tcoords.iter().sum::<f64>() / 3.0).round()),
                }
            }
        }
    }

    /// Candidate `s` range on row `t`; exact for rational cones, slightly widened otherwise.
    fn row(&self, t: i128) -> Option<(i128, i128)> {
        match &self.constraints {
            Constraints::Exact(planes) => exact_row(planes, t),
            Constraints::Float { planes, slack } => {
                let tf = t as f64;
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for p in planes {
                    let rest = p.b * tf + p.c + slack;
                    if p.a.abs() > 1e-300 {
                        let bound = -rest / p.a;
                        if p.a > 0.0 {
                            lo = lo.max(bound);
                        } else {
                            hi = hi.min(bound);
                        }
                    } else if rest < 0.0 {
                        return None;
                    }
                }
                let (lo, hi) = (
                    saturate((lo - 1e-9 * lo.abs()).ceil()),
                    saturate((hi + 1e-9 * hi.abs()).floor()),
                );
                (lo <= hi).then_some((lo, hi))
            }
        }
    }

    fn point(&self, s: i128, t: i128) -> Option<[i128; 3]> {
        let s = i64::try_from(s).ok()?;
        let t = i64::try_from(t).ok()?;
        let x = self.lattice.from_plane(s, t, self.level);
        x.iter()
            .all(|c| c.unsigned_abs() < (1u128 << 62))
            .then_some(x)
    }

    fn classify(&self, s: i128, t: i128) -> Membership {
        match self.point(s, t) {
            Some(x) => self.cone.classify(x),
            None => Membership::Uncertain,
        }
    }

    /// Rows ordered outward from the slice centroid.
    fn rows(&self) -> impl Iterator<Item = i128> + '_ {
        let (lo, hi) = self.t_range;
        let c = self.t_center.clamp(lo, hi);
        let span = (hi - c).max(c - lo);
        (0..=span).flat_map(move |k| {
            let up = (c + k <= hi).then_some(c + k);
            let down = (k > 0 && c - k >= lo).then_some(c - k);
            up.into_iter().chain(down)
        })
    }
}

fn to_ivec(x: [i128; 3]) -> IVec3 {
    IVec(x.map(|c| c as i64))
}

/// Exact enumeration of the nonzero cone lattice points up to the region depth.
pub fn cone_lattice_points(region: &TruncatedConeRegion) -> Result<ConePoints, Sail2dError> {
    cone_lattice_points_with_budget(region, DEFAULT_CELL_BUDGET)
}

pub fn cone_lattice_points_with_budget(
    region: &TruncatedConeRegion,
    budget: u64,
) -> Result<ConePoints, Sail2dError> {
    let mut budget = Budget::new(budget);
    let mut out = ConePoints::default();
    for level in 1..=region.depth {
        let slice = Slice::new(&region.cone, &region.lattice, level);
        let (tlo, thi) = slice.t_range;
        for t in tlo..=thi {
            budget.spend(1)?;
            let Some((lo, hi)) = slice.row(t) else {
                continue;
            };
            let width = u64::try_from(hi - lo + 1).unwrap_or(u64::MAX);
            budget.spend(width)?;
            for s in lo..=hi {
                let x = slice.point(s, t).ok_or(Sail2dError::Budget(budget.total))?;
                match region.cone.classify(x) {
                    Membership::Inside => out.inside.push(to_ivec(x)),
                    Membership::Uncertain => out.uncertain.push(to_ivec(x)),
                    Membership::Outside => {}
                }
            }
        }
    }
    out.inside.sort();
    out.uncertain.sort();
    Ok(out)
}

/// Why a cone does not have the face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Blocker {
    EdgeMissesPlane(usize),
    VertexOutside(usize),
    ExtraPointOnPlane(IVec3),
    IntermediatePoint(IVec3),
}

/// Why no decision could be made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Doubt {
    NearBoundary(IVec3),
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceVerdict {
    Face,
    NotFace(Blocker),
    Inconclusive(Doubt),
}

impl FaceVerdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            FaceVerdict::Face => Some(true),
            FaceVerdict::NotFace(_) => Some(false),
            FaceVerdict::Inconclusive(_) => None,
        }
    }
}

/// Precomputed data for deciding whether cones have a fixed face.
#[derive(Clone, Debug)]
pub struct FaceOracle {
    face: LatticeFace,
    lattice: PlaneLattice,
    polygon: Vec<IVec2>,
    edges: Vec<HalfPlane>,
    protected: Vec<IVec2>,
    budget: u64,
}

impl FaceOracle {
    pub fn new(face: &LatticeFace) -> Result<Self, Sail2dError> {
        Self::with_budget(face, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(face: &LatticeFace, budget: u64) -> Result<Self, Sail2dError> {
        let lattice = face.plane_lattice();
        let mut polygon = face.plane_polygon(&lattice);
        if doubled_signed_area(&polygon) < 0 {
            polygon.reverse();
        }
        let n = polygon.len();
        let edges = (0..n)
            .map(|i| {
                let p = widen(polygon[i].0);
                let q = widen(polygon[(i + 1) % n].0);
                let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
                HalfPlane {
                    a: -dy,
                    b: dx,
                    c: dy * p[0] - dx * p[1],
                }
            })
            .collect();
        let protected = planar::protected_points(&polygon, planar::DEFAULT_MAX_RADIUS)?;
        Ok(FaceOracle {
            face: face.clone(),
            lattice,
            polygon,
            edges,
            protected,
            budget,
        })
    }

    pub fn face(&self) -> &LatticeFace {
        &self.face
    }

    pub fn plane_lattice(&self) -> &PlaneLattice {
        &self.lattice
    }

    /// Face vertices in plane coordinates, counter-clockwise.
    pub fn polygon(&self) -> &[IVec2] {
        &self.polygon
    }

    /// Protected points of the face polygon, in plane coordinates.
    pub fn protected_points(&self) -> &[IVec2] {
        &self.protected
    }

    pub fn verdict(&self, cone: &Cone3) -> FaceVerdict {
        let normal = self.face.normal();
        if let Some(i) = cone.crossing_signs(&normal).iter().position(|&s| s <= 0) {
            return FaceVerdict::NotFace(Blocker::EdgeMissesPlane(i));
        }
        let mut doubt: Option<Doubt> = None;
        for (i, v) in self.face.vertices().iter().enumerate() {
            match cone.classify(widen(v.0)) {
                Membership::Outside => return FaceVerdict::NotFace(Blocker::VertexOutside(i)),
                Membership::Uncertain => {
                    doubt.get_or_insert(Doubt::NearBoundary(*v));
                }
                Membership::Inside => {}
            }
        }
        let d = self.face.offset();
        // Cheap definite refutation: a convex slice containing the face has extra
        // lattice points iff it contains a protected point.
        for q in &self.protected {
            let x = self.lattice.from_plane(q.0[0], q.0[1], d);
            if cone.classify(x) == Membership::Inside {
                return FaceVerdict::NotFace(Blocker::ExtraPointOnPlane(to_ivec(x)));
            }
        }
        let mut budget = Budget::new(self.budget);
        let top = Slice::new(cone, &self.lattice, d);
        match self.scan(&top, true, &mut budget) {
            Ok(Some(x)) => return FaceVerdict::NotFace(Blocker::ExtraPointOnPlane(x)),
            Ok(None) => {}
            Err(ScanDoubt::Uncertain(x)) => {
                doubt.get_or_insert(Doubt::NearBoundary(x));
            }
            Err(ScanDoubt::Budget) => return FaceVerdict::Inconclusive(Doubt::Budget),
        }
        for level in 1..d {
            let slice = Slice::new(cone, &self.lattice, level);
            match self.scan(&slice, false, &mut budget) {
                Ok(Some(x)) => return FaceVerdict::NotFace(Blocker::IntermediatePoint(x)),
                Ok(None) => {}
                Err(ScanDoubt::Uncertain(x)) => {
                    doubt.get_or_insert(Doubt::NearBoundary(x));
                }
                Err(ScanDoubt::Budget) => return FaceVerdict::Inconclusive(Doubt::Budget),
            }
        }
        match doubt {
            Some(d) => FaceVerdict::Inconclusive(d),
            None => FaceVerdict::Face,
        }
    }

    /// Looks for a cone lattice point on the slice that is not a face point.
    ///
    /// `Ok(Some)` is a definite blocker. Uncertain points are reported only when
    /// the whole slice is scanned without finding one.
    fn scan(
        &self,
        slice: &Slice<'_>,
        with_face: bool,
        budget: &mut Budget,
    ) -> Result<Option<IVec3>, ScanDoubt> {
        let mut uncertain: Option<IVec3> = None;
        for t in slice.rows() {
            budget.spend(1).map_err(|_| ScanDoubt::Budget)?;
            let Some((lo, hi)) = slice.row(t) else {
                continue;
            };
            let face_row = if with_face {
                exact_row(&self.edges, t)
            } else {
                None
            };
            let in_face = |s: i128| face_row.is_some_and(|(a, b)| a <= s && s <= b);
            let mut left_end = hi + 1;
            let mut s = lo;
            while s <= hi {
                if in_face(s) {
                    left_end = s;
                    break;
                }
                budget.spend(1).map_err(|_| ScanDoubt::Budget)?;
                match slice.classify(s, t) {
                    Membership::Inside => {
                        return Ok(slice.point(s, t).map(to_ivec));
                    }
                    Membership::Uncertain => {
                        uncertain.get_or_insert_with(|| {
                            slice.point(s, t).map(to_ivec).unwrap_or(IVec([0, 0, 0]))
                        });
                    }
                    Membership::Outside => {}
                }
                s += 1;
            }
            let mut s = hi;
            while s > left_end && s >= lo {
                if in_face(s) {
                    break;
                }
                budget.spend(1).map_err(|_| ScanDoubt::Budget)?;
                match slice.classify(s, t) {
                    Membership::Inside => return Ok(slice.point(s, t).map(to_ivec)),
                    Membership::Uncertain => {
                        uncertain.get_or_insert_with(|| {
                            slice.point(s, t).map(to_ivec).unwrap_or(IVec([0, 0, 0]))
                        });
                    }
                    Membership::Outside => {}
                }
                s -= 1;
            }
        }
        match uncertain {
            Some(x) => Err(ScanDoubt::Uncertain(x)),
            None => Ok(None),
        }
    }
}

enum ScanDoubt {
    Uncertain(IVec3),
    Budget,
}

/// Whether `face` is a face of the sail of `cone`.
pub fn is_face(face: &LatticeFace, cone: &Cone3) -> Result<FaceVerdict, Sail2dError> {
    Ok(FaceOracle::new(face)?.verdict(cone))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(c: &[[i64; 3]]) -> LatticeFace {
        LatticeFace::from_coords(c).unwrap()
    }

    #[test]
    fn octant_first_layer() {
        let region =
            TruncatedConeRegion::new(Cone3::positive_octant(), IVec([1, 1, 1]), 1).unwrap();
        let pts = cone_lattice_points(&region).unwrap();
        assert_eq!(
            pts.inside,
            vec![IVec([0, 0, 1]), IVec([0, 1, 0]), IVec([1, 0, 0])]
        );
        assert!(pts.uncertain.is_empty());
    }

    #[test]
    fn octant_cut_by_horizontal_plane_is_unbounded() {
        assert_eq!(
            TruncatedConeRegion::new(Cone3::positive_octant(), IVec([0, 0, 1]), 1),
            Err(Sail2dError::Unbounded(0))
        );
    }

    #[test]
    fn octant_level_counts() {
        let region =
            TruncatedConeRegion::new(Cone3::positive_octant(), IVec([1, 1, 1]), 4).unwrap();
        // points with a+b+c = j, j = 1..4: C(j+2, 2)
        assert_eq!(
            cone_lattice_points(&region).unwrap().inside.len(),
            3 + 6 + 10 + 15
        );
    }

    #[test]
    fn singular_cones_rejected() {
        assert_eq!(
            Cone3::rational_from_coords([[1, 0, 0], [0, 1, 0], [1, 1, 0]]),
            Err(Sail2dError::Singular)
        );
        assert_eq!(
            Cone3::float([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
            Err(Sail2dError::BadEdge(1))
        );
    }

    fn lifted_triangle_cone(tri: [[f64; 2]; 3], z: f64) -> Cone3 {
        Cone3::float(tri.map(|p| [p[0], p[1], z])).unwrap()
    }

    #[test]
    fn unit_triangle_face_examples() {
        let f = face(&[[0, 0, 1], [0, 1, 1], [1, 0, 1]]);
        let tight = lifted_triangle_cone([[-0.4, -0.4], [1.8, -0.4], [-0.4, 1.8]], 1.0);
        assert_eq!(is_face(&f, &tight).unwrap(), FaceVerdict::Face);
        let wide = lifted_triangle_cone([[-0.4, -0.4], [2.6, -0.4], [-0.4, 2.6]], 1.0);
        assert!(matches!(
            is_face(&f, &wide).unwrap(),
            FaceVerdict::NotFace(Blocker::ExtraPointOnPlane(_))
        ));
        let shifted = lifted_triangle_cone([[0.2, 0.2], [1.8, 0.2], [0.2, 1.8]], 1.0);
        assert_eq!(
            is_face(&f, &shifted).unwrap(),
            FaceVerdict::NotFace(Blocker::VertexOutside(0))
        );
    }

    #[test]
    fn distance_two_with_intermediate_point() {
        let f = face(&[[0, 0, 2], [2, 0, 2], [0, 2, 2]]);
        // contains (0,0,1)... via the vertex ray; face plane z = 2 has extra points? (1,1,2) lies on F.
        let c = lifted_triangle_cone([[-0.3, -0.3], [2.6, -0.3], [-0.3, 2.6]], 2.0);
        assert!(matches!(
            is_face(&f, &c).unwrap(),
            FaceVerdict::NotFace(Blocker::IntermediatePoint(_))
        ));
    }

    #[test]
    fn boundary_point_is_inconclusive() {
        let f = face(&[[0, 0, 1], [0, 1, 1], [1, 0, 1]]);
        // edge through (1,1,1) exactly on the boundary after float rounding
        let c = Cone3::float([[-0.5, -0.5, 1.0], [2.0, 0.0, 1.0], [0.0, 2.0, 1.0]]).unwrap();
        assert!(matches!(
            is_face(&f, &c).unwrap(),
            FaceVerdict::Inconclusive(Doubt::NearBoundary(_))
        ));
    }

    #[test]
    fn rational_cone_over_face_vertices() {
        let f = face(&[[0, 0, 1], [0, 1, 1], [1, 0, 1]]);
        let c = Cone3::rational_from_coords([[0, 0, 1], [1, 0, 1], [0, 1, 1]]).unwrap();
        assert_eq!(is_face(&f, &c).unwrap(), FaceVerdict::Face);
    }
}
