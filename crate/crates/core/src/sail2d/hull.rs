//! Exact 3D convex hull of lattice points and the local sail of a cone.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use super::{cone_lattice_points, Cone3, Sail2dError, TruncatedConeRegion};
use crate::lattice::{cross3, dot3, widen, IVec, IVec2, IVec3, LatticeFace, PlaneLattice};
use crate::planar;

fn sub(a: [i128; 3], b: [i128; 3]) -> [i128; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn orient3(a: [i128; 3], b: [i128; 3], c: [i128; 3], p: [i128; 3]) -> i128 {
    dot3(cross3(sub(b, a), sub(c, a)), sub(p, a))
}

/// Triangulated boundary of the convex hull, faces oriented outward.
///
/// Returns `None` when the points span less than three dimensions.
pub fn convex_hull_3d(points: &[IVec3]) -> Option<Vec<[usize; 3]>> {
    let p: Vec<[i128; 3]> = points.iter().map(|v| widen(v.0)).collect();
    let n = p.len();
    if n < 4 {
        return None;
    }
    let i0 = 0;
    let i1 = (1..n).find(|&i| p[i] != p[i0])?;
    let i2 = (1..n).find(|&i| cross3(sub(p[i1], p[i0]), sub(p[i], p[i0])) != [0, 0, 0])?;
    let i3 = (1..n).find(|&i| orient3(p[i0], p[i1], p[i2], p[i]) != 0)?;
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut edge_owner: HashMap<(usize, usize), usize> = HashMap::new();
    let add = |f: [usize; 3],
               faces: &mut Vec<[usize; 3]>,
               alive: &mut Vec<bool>,
               owner: &mut HashMap<(usize, usize), usize>| {
        let id = faces.len();
        faces.push(f);
        alive.push(true);
        for k in 0..3 {
            owner.insert((f[k], f[(k + 1) % 3]), id);
        }
    };
    let base = if orient3(p[i0], p[i1], p[i2], p[i3]) > 0 {
        [i0, i2, i1]
    } else {
        [i0, i1, i2]
    };
    // base is oriented with i3 behind it
    add(base, &mut faces, &mut alive, &mut edge_owner);
    for k in 0..3 {
        let (a, b) = (base[k], base[(k + 1) % 3]);
        add([b, a, i3], &mut faces, &mut alive, &mut edge_owner);
    }
    for idx in 0..n {
        if idx == i0 || idx == i1 || idx == i2 || idx == i3 {
            continue;
        }
        let q = p[idx];
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&f| {
                alive[f] && {
                    let [a, b, c] = faces[f];
                    orient3(p[a], p[b], p[c], q) > 0
                }
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut horizon = Vec::new();
        for &f in &visible {
            let tri = faces[f];
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let other = edge_owner[&(b, a)];
                if !visible.contains(&other) {
                    horizon.push((a, b));
                }
            }
        }
        for &f in &visible {
            alive[f] = false;
            let tri = faces[f];
            for k in 0..3 {
                let key = (tri[k], tri[(k + 1) % 3]);
                if edge_owner.get(&key) == Some(&f) {
                    edge_owner.remove(&key);
                }
            }
        }
        for (a, b) in horizon {
            add([a, b, idx], &mut faces, &mut alive, &mut edge_owner);
        }
    }
    Some(
        faces
            .into_iter()
            .zip(alive)
            .filter_map(|(f, a)| a.then_some(f))
            .collect(),
    )
}

/// A sail face found in a truncated window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SailFace {
    pub face: LatticeFace,
    /// False when lattice points beyond the truncation could change the face.
    pub reliable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SailFaceSet {
    pub faces: Vec<SailFace>,
    pub cone: Cone3,
    pub cut: IVec3,
    pub depth: i64,
}

impl SailFaceSet {
    pub fn reliable_faces(&self) -> impl Iterator<Item = &LatticeFace> {
        self.faces.iter().filter(|f| f.reliable).map(|f| &f.face)
    }

    /// Whether a reliable face has the same vertex set as `face`.
    pub fn contains(&self, face: &LatticeFace) -> bool {
        let key = vertex_key(face);
        self.reliable_faces().any(|f| vertex_key(f) == key)
    }
}

fn vertex_key(face: &LatticeFace) -> Vec<IVec3> {
    let mut v = face.vertices().to_vec();
    v.sort();
    v
}

fn primitive3(v: [i128; 3]) -> [i128; 3] {
    let g = v.iter().fold(0i128, |g, c| g.gcd(c));
    v.map(|c| c / g)
}

/// An integer plane normal positive on every edge of the cone.
pub fn default_cut(cone: &Cone3) -> Result<IVec3, Sail2dError> {
    match cone {
        Cone3::Rational(c) => {
            let s = [0, 1, 2].map(|k| c.normals.iter().map(|m| m[k]).sum::<i128>());
            let s = primitive3(s);
            Ok(crate::lattice::narrow_array(s)?)
        }
        Cone3::Float(c) => {
            let s = [0, 1, 2].map(|k| c.normals.iter().map(|m| m[k]).sum::<f64>());
            let mut scale = 1.0;
            while scale < 1e6 {
                let n = s.map(|x| (x * scale).round() as i64);
                let nv = IVec(n);
                if !nv.is_zero() && c.edges.iter().all(|e| super::dotf(nv.to_f64(), *e) > 0.0) {
                    let p = primitive3(widen(n));
                    return Ok(crate::lattice::narrow_array(p)?);
                }
                scale *= 2.0;
            }
            Err(Sail2dError::Singular)
        }
    }
}

pub fn local_sail(cone: &Cone3, depth: i64) -> Result<SailFaceSet, Sail2dError> {
    let cut = default_cut(cone)?;
    local_sail_with_cut(cone, cut, depth)
}

fn face_from_plane(points: &[IVec3], normal: IVec3) -> Result<LatticeFace, Sail2dError> {
    let lattice = PlaneLattice::new(normal)?;
    let level = lattice.to_plane(&points[0])[2] as i64;
    let flat: Vec<IVec2> = points
        .iter()
        .map(|x| {
            let c = lattice.to_plane(x);
            IVec([c[0] as i64, c[1] as i64])
        })
        .collect();
    let hull = planar::convex_hull(&flat);
    let vertices = hull
        .iter()
        .map(|q| IVec(lattice.from_plane(q.0[0], q.0[1], level).map(|c| c as i64)))
        .collect();
    Ok(LatticeFace::new(vertices)?)
}

fn reliable(cone: &Cone3, cut: &IVec3, depth: i64, normal: &IVec3, offset: i64) -> bool {
    match cone {
        Cone3::Rational(c) => c.edges.iter().all(|e| {
            let he = normal.dot(e);
            he > 0 && cut.dot(e) * offset as i128 <= depth as i128 * he
        }),
        Cone3::Float(c) => c.edges.iter().all(|e| {
            let he = super::dotf(normal.to_f64(), *e);
            let ce = super::dotf(cut.to_f64(), *e);
            he > 0.0 && ce * offset as f64 <= depth as f64 * he * (1.0 - 1e-12)
        }),
    }
}

/// Faces of the hull of cone lattice points with `cut·x <= depth` that face the origin.
pub fn local_sail_with_cut(
    cone: &Cone3,
    cut: IVec3,
    depth: i64,
) -> Result<SailFaceSet, Sail2dError> {
    let region = TruncatedConeRegion::new(cone.clone(), cut, depth)?;
    let pts = cone_lattice_points(&region)?;
    if !pts.uncertain.is_empty() {
        return Err(Sail2dError::Inconclusive(pts.uncertain.len()));
    }
    let points = pts.inside;
    // (primitive inward normal, offset) -> points on that plane
    let mut planes: BTreeMap<(IVec3, i64), Vec<IVec3>> = BTreeMap::new();
    match convex_hull_3d(&points) {
        Some(tris) => {
            for [a, b, c] in tris {
                let (pa, pb, pc) = (widen(points[a].0), widen(points[b].0), widen(points[c].0));
                let inward = primitive3(cross3(sub(pc, pa), sub(pb, pa)));
                let offset = dot3(inward, pa);
                if offset <= 0 {
                    continue;
                }
                let key = (
                    crate::lattice::narrow_array(inward)?,
                    crate::lattice::narrow(offset)?,
                );
                planes.entry(key).or_default();
            }
        }
        None => {
            // Everything is coplanar: a sail fragment only if the plane misses the origin.
            if points.len() < 3 {
                return Err(Sail2dError::InsufficientDepth);
            }
            let face = LatticeFace::new(planar_hull_3d(&points)?)
                .map_err(|_| Sail2dError::InsufficientDepth)?;
            planes.insert((face.normal(), face.offset()), Vec::new());
        }
    }
    let mut faces = Vec::new();
    for ((normal, offset), members) in planes.iter_mut() {
        members.extend(
            points
                .iter()
                .filter(|x| normal.dot(x) == *offset as i128)
                .copied(),
        );
        let face = face_from_plane(members, *normal)?;
        let reliable = reliable(cone, &cut, depth, normal, *offset);
        faces.push(SailFace { face, reliable });
    }
    Ok(SailFaceSet {
        faces,
        cone: cone.clone(),
        cut,
        depth,
    })
}

fn planar_hull_3d(points: &[IVec3]) -> Result<Vec<IVec3>, Sail2dError> {
    let p: Vec<[i128; 3]> = points.iter().map(|v| widen(v.0)).collect();
    let i1 = (1..p.len())
        .find(|&i| p[i] != p[0])
        .ok_or(Sail2dError::InsufficientDepth)?;
    let i2 = (1..p.len())
        .find(|&i| cross3(sub(p[i1], p[0]), sub(p[i], p[0])) != [0, 0, 0])
        .ok_or(Sail2dError::InsufficientDepth)?;
    let normal = primitive3(cross3(sub(p[i1], p[0]), sub(p[i2], p[0])));
    let n = crate::lattice::narrow_array(normal)?;
    Ok(face_from_plane(points, n)?.vertices().to_vec())
}
