mod common;

use klein_freq::catalog::{lookup, series_a, series_b};
use klein_freq::lattice::{apply_unimodular, LatticeFace};
use klein_freq::moebius2d::{
    admissible_domain, density_2d_dual, density_2d_vertex, dual_denominator,
    dual_to_vertex_jacobian, frequency_exact, frequency_mc, AdmissibleDomain, DualConfig, McConfig,
    Moebius2dError,
};
use klein_freq::sail2d::{Cone3, FaceOracle, FaceVerdict};
use rand::Rng;

use common::{face, random_unimodular, rng};

const T1_EXACT: f64 = 0.430_463_88;
const Q1_EXACT: f64 = 0.100_304_90;

fn catalog_face(id: &str) -> LatticeFace {
    lookup(id, None).unwrap().entries[0].face.clone()
}

fn within(a: (f64, f64), b: (f64, f64), sigmas: f64) -> bool {
    (a.0 - b.0).abs() <= sigmas * a.1.hypot(b.1)
}

#[test]
fn dual_and_vertex_charts_agree_at_100_configurations() {
    let mut r = rng(41);
    let mut checked = 0;
    while checked < 100 {
        let lines = [0, 1, 2].map(|_| [r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)]);
        let d = DualConfig { lines };
        if dual_denominator(&d).abs() < 0.5 {
            continue;
        }
        let Ok(v) = d.vertices() else { continue };
        if v.points.iter().flatten().any(|c| c.abs() > 20.0) {
            continue;
        }
        let lhs = density_2d_dual(&d).unwrap();
        let rhs = density_2d_vertex(&v).unwrap() * dual_to_vertex_jacobian(&d, 1e-3).unwrap();
        assert!(
            ((lhs - rhs) / lhs).abs() <= 1e-8,
            "{lines:?}: {lhs} vs {rhs}"
        );
        checked += 1;
    }
}

#[test]
fn exact_frequency_is_unimodularly_invariant() {
    let mut r = rng(42);
    for (id, reference) in [("T1", T1_EXACT), ("Q1", Q1_EXACT)] {
        let f = catalog_face(id);
        for _ in 0..2 {
            let m = random_unimodular::<3, _>(&mut r, 5, 1);
            let image = apply_unimodular(&m, &f).unwrap();
            let res = frequency_exact(&image, 1e-6).unwrap();
            assert!(
                (res.value - reference).abs() <= 1e-6 * reference + res.error,
                "{id}"
            );
        }
    }
}

#[test]
fn exact_and_mc_agree_on_distance_one_faces() {
    for id in ["T1", "Q1", "A2", "B2"] {
        let f = catalog_face(id);
        let ex = frequency_exact(&f, 1e-6).unwrap();
        let mc = frequency_mc(&f, &McConfig::new(400_000, 5).workers(2)).unwrap();
        assert!(
            within((ex.value, ex.error), (mc.value, mc.error), 3.0),
            "{id}: exact {} mc {} +/- {}",
            ex.value,
            mc.value,
            mc.error
        );
        assert_eq!(mc.outside_box, 0, "{id}");
    }
}

#[test]
fn mc_frequency_is_unimodularly_invariant() {
    let mut r = rng(43);
    let cfg = McConfig::new(200_000, 9).workers(2);
    for id in ["T1", "Q1", "T2"] {
        let f = catalog_face(id);
        let base = frequency_mc(&f, &cfg).unwrap();
        for _ in 0..2 {
            let m = random_unimodular::<3, _>(&mut r, 5, 1);
            let image = frequency_mc(&apply_unimodular(&m, &f).unwrap(), &cfg).unwrap();
            assert!(
                within((base.value, base.error), (image.value, image.error), 3.0),
                "{id}: {} vs {}",
                base.value,
                image.value
            );
        }
    }
}

#[test]
fn mc_error_scales_as_inverse_square_root() {
    let f = catalog_face("T1");
    let errors: Vec<f64> = [200_000u64, 800_000, 3_200_000]
        .iter()
        .map(|&n| {
            frequency_mc(&f, &McConfig::new(n, 17).workers(2))
                .unwrap()
                .error
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((1.5..2.7).contains(&ratio), "{errors:?}");
    }
}

fn lift_cone(domain: &AdmissibleDomain, lines: [[f64; 2]; 3]) -> Option<Cone3> {
    let lattice = domain.face.plane_lattice();
    let level = domain.face.offset() as f64;
    let o = domain.origin;
    let tri = DualConfig { lines }.vertices().ok()?;
    Cone3::float(
        tri.points
            .map(|p| lattice.from_plane_f64([p[0] + o[0], p[1] + o[1], level])),
    )
    .ok()
}

fn random_in_polygon<R: Rng>(r: &mut R, poly: &[[f64; 2]]) -> [f64; 2] {
    let w: Vec<f64> = poly.iter().map(|_| r.gen_range(0.01..1.0)).collect();
    let s: f64 = w.iter().sum();
    let mut p = [0.0; 2];
    for (v, wi) in poly.iter().zip(&w) {
        p[0] += v[0] * wi / s;
        p[1] += v[1] * wi / s;
    }
    p
}

#[test]
fn samples_inside_cells_are_faces() {
    let mut r = rng(44);
    for id in ["T1", "Q1"] {
        let domain = admissible_domain(&catalog_face(id)).unwrap();
        let oracle = FaceOracle::new(&domain.face).unwrap();
        let mut faces = 0;
        for _ in 0..1000 {
            let cell = &domain.cells[r.gen_range(0..domain.cells.len())];
            let lines = [0, 1, 2].map(|i| random_in_polygon(&mut r, &cell.polygons[i]));
            let cone = lift_cone(&domain, lines).unwrap();
            match oracle.verdict(&cone) {
                FaceVerdict::Face => faces += 1,
                FaceVerdict::Inconclusive(_) => {}
                FaceVerdict::NotFace(b) => panic!("{id}: {lines:?} refuted by {b:?}"),
            }
        }
        assert!(faces >= 990, "{id}: {faces}");
    }
}

#[test]
fn faces_found_by_sampling_lie_in_cells() {
    let mut r = rng(45);
    for id in ["T1", "Q1"] {
        let domain = admissible_domain(&catalog_face(id)).unwrap();
        let oracle = FaceOracle::new(&domain.face).unwrap();
        let (mut faces, mut refuted) = (0, 0);
        for _ in 0..5_000 {
            // Jitter around a cell interior so that many draws land near or across cell boundaries.
            let cell = &domain.cells[r.gen_range(0..domain.cells.len())];
            let lines = [0, 1, 2].map(|i| {
                let p = random_in_polygon(&mut r, &cell.polygons[i]);
                [p[0] + r.gen_range(-0.5..0.5), p[1] + r.gen_range(-0.5..0.5)]
            });
            let Some(cone) = lift_cone(&domain, lines) else {
                continue;
            };
            match oracle.verdict(&cone) {
                FaceVerdict::Face => {
                    assert!(domain.contains(&lines), "{id}: {lines:?}");
                    faces += 1;
                }
                FaceVerdict::NotFace(_) => refuted += 1,
                FaceVerdict::Inconclusive(_) => {}
            }
        }
        assert!(faces > 100 && refuted > 100, "{id}: {faces} {refuted}");
    }
}

#[test]
fn unit_square_at_distance_two_is_never_a_face() {
    let q2 = catalog_face("Q2");
    // Vertices cover every class of the level-2 plane modulo 2, so one of them is twice a lattice point.
    let halves = q2
        .vertices()
        .iter()
        .filter(|v| v.0.iter().all(|c| c % 2 == 0))
        .count();
    assert!(halves >= 1);
    let mut r = rng(46);
    for _ in 0..5 {
        let m = random_unimodular::<3, _>(&mut r, 5, 1);
        let image = apply_unimodular(&m, &q2).unwrap();
        assert!(image
            .vertices()
            .iter()
            .any(|v| v.0.iter().all(|c| c % 2 == 0)));
    }
    let mc = frequency_mc(&q2, &McConfig::new(200_000, 3).workers(2)).unwrap();
    assert_eq!(mc.value, 0.0);
    assert!(matches!(
        frequency_exact(&q2, 1e-6),
        Err(Moebius2dError::DistanceNotOne(2))
    ));
}

#[test]
fn large_squares_have_empty_domains() {
    for n in [2, 3] {
        let b = series_b(n).unwrap().face;
        assert!(admissible_domain(&b).unwrap().cells.is_empty(), "B{n}");
        assert_eq!(
            frequency_mc(&b, &McConfig::new(100_000, 1).workers(2))
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(frequency_exact(&b, 1e-6).unwrap().value, 0.0);
    }
    assert!(!admissible_domain(&series_a(2).unwrap().face)
        .unwrap()
        .cells
        .is_empty());
}

#[test]
fn distance_two_triangle_matches_distance_one() {
    let cfg = McConfig::new(400_000, 8).workers(2);
    let t1 = frequency_mc(&face(&[[0, 0, 1], [0, 1, 1], [1, 0, 1]]), &cfg).unwrap();
    let t2 = frequency_mc(&catalog_face("T2"), &cfg).unwrap();
    assert!(within((t1.value, t1.error), (t2.value, t2.error), 3.0));
}
