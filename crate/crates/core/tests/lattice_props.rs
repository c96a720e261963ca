mod common;

use std::collections::BTreeSet;

use klein_freq::lattice::{
    apply_unimodular, convex_polygon_lattice_points, determinant, integer_area, integer_distance,
    integer_length, IVec, IVec2, IVec3, LatticeFace, UnimodularMap,
};
use klein_freq::planar::{convex_hull, lattice_point_count, protected_points, DEFAULT_MAX_RADIUS};
use proptest::prelude::*;

use common::{gcd, random_unimodular, rng};

fn hull_from(points: Vec<(i64, i64)>) -> Vec<IVec2> {
    convex_hull(
        &points
            .into_iter()
            .map(|(x, y)| IVec([x, y]))
            .collect::<Vec<_>>(),
    )
}

fn polygon() -> impl Strategy<Value = Vec<IVec2>> {
    prop::collection::vec((-6i64..=6, -6i64..=6), 3..9)
        .prop_map(hull_from)
        .prop_filter("needs an interior", |h| h.len() >= 3)
}

fn map2(m: &UnimodularMap<2>, poly: &[IVec2]) -> Vec<IVec2> {
    poly.iter().map(|p| m.apply(p).unwrap()).collect()
}

/// Independent distance: |det(v0, v1, v2)| over the gcd of the edge cross product.
fn distance_oracle(f: &LatticeFace) -> u64 {
    let v = f.vertices();
    let d = determinant(&[v[0].0, v[1].0, v[2].0]).unsigned_abs() as u64;
    let e1 = [0, 1, 2].map(|k| v[1].0[k] - v[0].0[k]);
    let e2 = [0, 1, 2].map(|k| v[2].0[k] - v[0].0[k]);
    let c = [
        e1[1] * e2[2] - e1[2] * e2[1],
        e1[2] * e2[0] - e1[0] * e2[2],
        e1[0] * e2[1] - e1[1] * e2[0],
    ];
    d / gcd(gcd(c[0], c[1]), c[2]) as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn integer_length_is_unimodular_invariant(
        a in prop::array::uniform3(-20i64..=20),
        b in prop::array::uniform3(-20i64..=20),
        seed in any::<u64>(),
    ) {
        prop_assume!(a != b);
        let m = random_unimodular::<3, _>(&mut rng(seed), 6, 2);
        let (a, b) = (IVec(a), IVec(b));
        let before = integer_length(&a, &b).unwrap();
        let after = integer_length(&m.apply(&a).unwrap(), &m.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(before, after);
        // gcd definition
        let d = a.diff(&b).map(|c| c as i64);
        prop_assert_eq!(before as i64, gcd(gcd(d[0], d[1]), d[2]));
    }

    #[test]
    fn pick_count_matches_enumeration(poly in polygon()) {
        prop_assert_eq!(
            lattice_point_count(&poly),
            convex_polygon_lattice_points(&poly).len() as u128
        );
    }

    #[test]
    fn planar_invariants_under_unimodular_maps(poly in polygon(), seed in any::<u64>()) {
        let m = random_unimodular::<2, _>(&mut rng(seed), 5, 2);
        let image = map2(&m, &poly);
        prop_assert_eq!(integer_area(&poly).unwrap(), integer_area(&image).unwrap());
        prop_assert_eq!(lattice_point_count(&poly), lattice_point_count(&convex_hull(&image)));
        for i in 0..poly.len() {
            let j = (i + 1) % poly.len();
            prop_assert_eq!(
                integer_length(&poly[i], &poly[j]).unwrap(),
                integer_length(&image[i], &image[j]).unwrap()
            );
        }
    }

    #[test]
    fn face_invariants_under_unimodular_maps(
        poly in polygon(),
        level in 1i64..=4,
        seed in any::<u64>(),
    ) {
        let face = LatticeFace::new(poly.iter().map(|p| IVec([p.0[0], p.0[1], level])).collect()).unwrap();
        prop_assert_eq!(integer_distance(&face), level as u64);
        prop_assert_eq!(face.integer_area(), integer_area(&poly).unwrap());
        let m = random_unimodular::<3, _>(&mut rng(seed), 6, 2);
        let image = apply_unimodular(&m, &face).unwrap();
        prop_assert_eq!(integer_distance(&image), level as u64);
        prop_assert_eq!(distance_oracle(&image), level as u64);
        prop_assert_eq!(image.integer_area(), face.integer_area());
        prop_assert_eq!(image.lattice_points().len(), face.lattice_points().len());
        let back = LatticeFace::from_json(&image.to_json()).unwrap();
        prop_assert_eq!(back, image);
    }

    #[test]
    fn protected_points_are_equivariant(
        pts in prop::collection::vec((-2i64..=2, -2i64..=2), 3..6),
        seed in any::<u64>(),
    ) {
        let poly = hull_from(pts);
        prop_assume!(poly.len() >= 3);
        let m = random_unimodular::<2, _>(&mut rng(seed), 3, 1);
        let p: BTreeSet<IVec2> = protected_points(&poly, DEFAULT_MAX_RADIUS).unwrap().into_iter().collect();
        let image = convex_hull(&map2(&m, &poly));
        let q: BTreeSet<IVec2> = protected_points(&image, DEFAULT_MAX_RADIUS).unwrap().into_iter().collect();
        let mapped: BTreeSet<IVec2> = p.iter().map(|x| m.apply(x).unwrap()).collect();
        prop_assert_eq!(mapped, q);
    }
}

fn brute_force_protected(poly: &[IVec2], r: i64) -> BTreeSet<IVec2> {
    let own: BTreeSet<IVec2> = convex_polygon_lattice_points(poly).into_iter().collect();
    let mut out = BTreeSet::new();
    for x in -r..=r {
        for y in -r..=r {
            let q = IVec([x, y]);
            if own.contains(&q) {
                continue;
            }
            let mut cand = poly.to_vec();
            cand.push(q);
            let pts: BTreeSet<IVec2> = convex_polygon_lattice_points(&convex_hull(&cand))
                .into_iter()
                .collect();
            let mut expect = own.clone();
            expect.insert(q);
            if pts == expect {
                out.insert(q);
            }
        }
    }
    out
}

#[test]
fn protected_points_match_exhaustive_scan() {
    let polys: Vec<Vec<IVec2>> = vec![
        vec![IVec([0, 0]), IVec([1, 0]), IVec([0, 1])],
        vec![IVec([0, 0]), IVec([1, 0]), IVec([1, 1]), IVec([0, 1])],
        vec![IVec([0, 0]), IVec([2, 0]), IVec([0, 2])],
        vec![IVec([0, 0]), IVec([3, 1]), IVec([1, 2])],
    ];
    for poly in polys {
        let fast: BTreeSet<IVec2> = protected_points(&poly, DEFAULT_MAX_RADIUS)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(fast, brute_force_protected(&poly, 10), "{poly:?}");
        for q in &fast {
            let mut cand = poly.clone();
            cand.push(*q);
            assert_eq!(
                lattice_point_count(&convex_hull(&cand)),
                lattice_point_count(&poly) + 1
            );
        }
    }
}

#[test]
fn unit_triangle_protected_set_contains_the_obvious_neighbours() {
    let tri = vec![IVec([0, 0]), IVec([1, 0]), IVec([0, 1])];
    let p: BTreeSet<IVec2> = protected_points(&tri, DEFAULT_MAX_RADIUS)
        .unwrap()
        .into_iter()
        .collect();
    for q in [[1, 1], [-1, 0], [0, -1], [-1, 1], [1, -1], [2, 0], [0, 2]] {
        assert!(p.contains(&IVec(q)), "{q:?}");
    }
    assert_eq!(p.len(), 12);
}

#[test]
fn distance_examples() {
    let f: LatticeFace = common::face(&[[1, 0, 2], [0, 1, 2], [1, 1, 2]]);
    assert_eq!(integer_distance(&f), 2);
    let g = common::face(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    assert_eq!(integer_distance(&g), 1);
    assert_eq!(g.integer_area(), 1);
    let v: IVec3 = IVec([2, 4, 6]);
    assert_eq!(integer_length(&IVec([0, 0, 0]), &v).unwrap(), 2);
}
