#![allow(dead_code)]

use klein_freq::lattice::{IVec, IVec3, LatticeFace, UnimodularMap};
use klein_freq::sail2d::{local_sail, Cone3, SailFaceSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn face(coords: &[[i64; 3]]) -> LatticeFace {
    LatticeFace::from_coords(coords).unwrap()
}

/// Product of `steps` random shears with small multipliers, plus a random signed permutation.
pub fn random_unimodular<const N: usize, R: Rng>(
    rng: &mut R,
    steps: usize,
    k: i64,
) -> UnimodularMap<N> {
    let mut m = UnimodularMap::<N>::identity();
    for _ in 0..steps {
        let i = rng.gen_range(0..N);
        let mut j = rng.gen_range(0..N - 1);
        if j >= i {
            j += 1;
        }
        let s = UnimodularMap::shear(i, j, rng.gen_range(-k..=k));
        m = s.compose(&m).unwrap();
    }
    let mut perm: Vec<usize> = (0..N).collect();
    for i in (1..N).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut rows = [[0i64; N]; N];
    for (i, &p) in perm.iter().enumerate() {
        rows[i][p] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    UnimodularMap::new(rows).unwrap().compose(&m).unwrap()
}

pub fn random_ivec3<R: Rng>(rng: &mut R, r: i64) -> IVec3 {
    IVec([
        rng.gen_range(-r..=r),
        rng.gen_range(-r..=r),
        rng.gen_range(-r..=r),
    ])
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn det3(e: [[i64; 3]; 3]) -> i64 {
    e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
        - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
}

pub fn random_cone<R: Rng>(rng: &mut R) -> ([[i64; 3]; 3], Cone3) {
    loop {
        let e = [0, 1, 2].map(|_| random_ivec3(rng, 4).0);
        let d = det3(e);
        if d != 0 && d.abs() <= 40 {
            return (e, Cone3::rational_from_coords(e).unwrap());
        }
    }
}

/// Whether truncation at `depth` along `cut` can no longer change the face in `normal·x = offset`.
pub fn reliable_at(e: &[[i64; 3]; 3], cut: IVec3, depth: i64, f: &LatticeFace) -> bool {
    e.iter().all(|v| {
        let he = f.normal().dot(&IVec(*v));
        he > 0 && cut.dot(&IVec(*v)) * f.offset() as i128 <= depth as i128 * he
    })
}

pub fn sail_with_faces<R: Rng>(r: &mut R) -> ([[i64; 3]; 3], Cone3, SailFaceSet) {
    loop {
        let (e, cone) = random_cone(r);
        for depth in [4, 8, 16, 32] {
            if let Ok(s) = local_sail(&cone, depth) {
                if s.reliable_faces().count() > 0 {
                    return (e, cone, s);
                }
            }
        }
    }
}
