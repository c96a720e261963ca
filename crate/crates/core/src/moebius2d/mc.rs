//! Monte Carlo frequency estimate with the sail face oracle as indicator.

use rand::Rng;

use super::density::{dual_denominator, DualConfig};
use super::domain::{cell_boxes, planar_cells, polar_polygon, polygon_box};
use super::{FrequencyMethod, FrequencyResult, Moebius2dError};
use crate::lattice::{doubled_signed_area, IVec, IVec2, LatticeFace, PlaneLattice};
use crate::sail2d::{Cone3, FaceOracle, FaceVerdict, DEFAULT_CELL_BUDGET};
use crate::streams::{default_workers, run_partitioned};

pub const DEFAULT_INFLATION: f64 = 1.5;
/// Inconclusive fraction above which a warning is attached.
pub const INCONCLUSIVE_WARN_RATE: f64 = 0.01;
/// Margin for the floating-point prefilters; anything closer goes to the oracle.
const PREFILTER_MARGIN: f64 = 1e-6;
const ORDERINGS: f64 = 6.0;
/// Cap on greedy shear steps when reducing the plane chart.
const MAX_REDUCTION_STEPS: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub inflation: f64,
    pub cell_budget: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            workers: default_workers(),
            inflation: DEFAULT_INFLATION,
            cell_budget: DEFAULT_CELL_BUDGET,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    sum: f64,
    sum_sq: f64,
    accepted: u64,
    inconclusive: u64,
    outside_box: u64,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.accepted += o.accepted;
        self.inconclusive += o.inconclusive;
        self.outside_box += o.outside_box;
        self
    }
}

struct Sampler<'a> {
    oracle: &'a FaceOracle,
    lattice: &'a PlaneLattice,
    /// Maps reduced chart coordinates back to plane lattice coordinates.
    chart_inverse: [[i64; 2]; 2],
    level: f64,
    origin: [f64; 2],
    vertices: Vec<[f64; 2]>,
    protected: Vec<[f64; 2]>,
    boxes: [[f64; 4]; 3],
    inner: [[f64; 4]; 3],
    volume: f64,
}

fn in_box(b: &[f64; 4], p: [f64; 2]) -> bool {
    b[0] <= p[0] && p[0] <= b[1] && b[2] <= p[1] && p[1] <= b[3]
}

impl Sampler<'_> {
    /// Weighted indicator for one dual configuration; `None` if the oracle is inconclusive.
    fn weight(&self, lines: [[f64; 2]; 3]) -> Option<f64> {
        let dot = |n: [f64; 2], p: [f64; 2]| n[0] * p[0] + n[1] * p[1];
        let config = DualConfig { lines };
        if !config.encloses_origin() {
            return Some(0.0);
        }
        // Some vertex of the face is cut off.
        if lines.iter().any(|&n| {
            self.vertices
                .iter()
                .any(|&v| dot(n, v) > 1.0 + PREFILTER_MARGIN)
        }) {
            return Some(0.0);
        }
        // Some protected point lies strictly inside the trace triangle.
        if self
            .protected
            .iter()
            .any(|&q| lines.iter().all(|&n| dot(n, q) < 1.0 - PREFILTER_MARGIN))
        {
            return Some(0.0);
        }
        let d = dual_denominator(&config);
        let tri = config.vertices().ok()?;
        let m = self.chart_inverse;
        let edges = tri.points.map(|p| {
            let (x, y) = (p[0] + self.origin[0], p[1] + self.origin[1]);
            let s = m[0][0] as f64 * x + m[0][1] as f64 * y;
            let t = m[1][0] as f64 * x + m[1][1] as f64 * y;
            self.lattice.from_plane_f64([s, t, self.level])
        });
        let cone = Cone3::float(edges).ok()?;
        match self.oracle.verdict(&cone) {
            FaceVerdict::Face => Some(8.0 / d.abs().powi(3) * self.volume / ORDERINGS),
            FaceVerdict::NotFace(_) => Some(0.0),
            FaceVerdict::Inconclusive(_) => None,
        }
    }

    fn run<R: Rng>(&self, rng: &mut R, count: u64) -> Tally {
        let mut t = Tally::default();
        for _ in 0..count {
            let lines = self.boxes.map(|b| {
                [
                    b[0] + (b[1] - b[0]) * rng.gen::<f64>(),
                    b[2] + (b[3] - b[2]) * rng.gen::<f64>(),
                ]
            });
            match self.weight(lines) {
                Some(w) => {
                    t.sum += w;
                    t.sum_sq += w * w;
                    t.accepted += 1;
                    if w > 0.0 && (0..3).any(|i| !in_box(&self.inner[i], lines[i])) {
                        t.outside_box += 1;
                    }
                }
                None => t.inconclusive += 1,
            }
        }
        t
    }
}

fn apply2(m: [[i64; 2]; 2], p: &IVec2) -> IVec2 {
    IVec([
        m[0][0] * p.0[0] + m[0][1] * p.0[1],
        m[1][0] * p.0[0] + m[1][1] * p.0[1],
    ])
}

fn mul2(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn containment_box_area(polygon: &[IVec2]) -> f64 {
    let n = polygon.len() as f64;
    let origin = [0, 1].map(|k| polygon.iter().map(|v| v.0[k] as f64).sum::<f64>() / n);
    let b = polygon_box(&polar_polygon(polygon, origin));
    (b[1] - b[0]) * (b[3] - b[2])
}

/// Greedy lattice shears that shrink the bounding box of the containment polygon.
/// Returns the reduced polygon and the inverse of the applied unimodular map.
fn reduce_chart(polygon: &[IVec2]) -> (Vec<IVec2>, [[i64; 2]; 2]) {
    let shears = [
        ([[1, 1], [0, 1]], [[1, -1], [0, 1]]),
        ([[1, -1], [0, 1]], [[1, 1], [0, 1]]),
        ([[1, 0], [1, 1]], [[1, 0], [-1, 1]]),
        ([[1, 0], [-1, 1]], [[1, 0], [1, 1]]),
    ];
    let mut poly = polygon.to_vec();
    let mut inverse = [[1, 0], [0, 1]];
    let mut score = containment_box_area(&poly);
    for _ in 0..MAX_REDUCTION_STEPS {
        let best = shears
            .iter()
            .map(|&(m, inv)| {
                let next: Vec<IVec2> = poly.iter().map(|p| apply2(m, p)).collect();
                (containment_box_area(&next), next, inv)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("four shears");
        if best.0 >= score * (1.0 - 1e-9) {
            break;
        }
        score = best.0;
        poly = best.1;
        inverse = mul2(inverse, best.2);
    }
    (poly, inverse)
}

fn inflate(b: [f64; 4], factor: f64) -> [f64; 4] {
    let (cx, cy) = (0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3]));
    let (hx, hy) = (0.5 * (b[1] - b[0]) * factor, 0.5 * (b[3] - b[2]) * factor);
    [cx - hx, cx + hx, cy - hy, cy + hy]
}

/// Importance-sampled frequency of a face at any integer distance.
pub fn frequency_mc(
    face: &LatticeFace,
    config: &McConfig,
) -> Result<FrequencyResult, Moebius2dError> {
    if config.samples == 0 {
        return Err(Moebius2dError::InvalidSamples);
    }
    if !(config.inflation.is_finite() && config.inflation >= 1.0) {
        return Err(Moebius2dError::InvalidTolerance);
    }
    let oracle = FaceOracle::with_budget(face, config.cell_budget)?;
    let lattice = face.plane_lattice();
    let mut polygon = face.plane_polygon(&lattice);
    if doubled_signed_area(&polygon) < 0 {
        polygon.reverse();
    }
    let (polygon, chart_inverse) = reduce_chart(&polygon);
    // The slice condition on the face plane is planar, so the planar cells bound
    // the support at every distance.
    let (cells, protected, origin, containment) = planar_cells(&polygon)?;
    let inner = cell_boxes(&cells).unwrap_or_else(|| [polygon_box(&containment); 3]);
    let boxes = inner.map(|b| inflate(b, config.inflation));
    let volume: f64 = boxes
        .iter()
        .map(|b| (b[1] - b[0]) * (b[3] - b[2]))
        .product();
    let local = |p: &crate::lattice::IVec2| [p.0[0] as f64 - origin[0], p.0[1] as f64 - origin[1]];
    let sampler = Sampler {
        oracle: &oracle,
        lattice: &lattice,
        chart_inverse,
        level: face.offset() as f64,
        origin,
        vertices: polygon.iter().map(local).collect(),
        protected: protected.iter().map(local).collect(),
        boxes,
        inner,
        volume,
    };
    let tally = run_partitioned(config.samples, config.workers, config.seed, |rng, n| {
        sampler.run(rng, n)
    })
    .into_iter()
    .fold(Tally::default(), Tally::merge);
    if tally.accepted == 0 {
        return Err(Moebius2dError::NoAcceptedSamples);
    }
    let n = tally.accepted as f64;
    let mean = tally.sum / n;
    let var = (tally.sum_sq / n - mean * mean).max(0.0);
    let rate = tally.inconclusive as f64 / config.samples as f64;
    let warning = (rate > INCONCLUSIVE_WARN_RATE).then(|| {
        format!(
            "{} of {} samples ({:.2}%) were inconclusive and discarded",
            tally.inconclusive,
            config.samples,
            100.0 * rate
        )
    });
    Ok(FrequencyResult {
        value: mean,
        error: (var / n).sqrt(),
        method: FrequencyMethod::MonteCarlo,
        samples: config.samples,
        face: face.clone(),
        accepted: tally.accepted,
        inconclusive: tally.inconclusive,
        outside_box: tally.outside_box,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(c: &[[i64; 3]]) -> LatticeFace {
        LatticeFace::from_coords(c).unwrap()
    }

    #[test]
    fn unit_triangle_estimate() {
        let f = face(&[[0, 0, 1], [1, 0, 1], [0, 1, 1]]);
        let r = frequency_mc(&f, &McConfig::new(200_000, 7).workers(4)).unwrap();
        assert!(
            (r.value - 0.430_463_88).abs() < 4.0 * r.error,
            "{} +/- {}",
            r.value,
            r.error
        );
        assert_eq!(r.outside_box, 0);
        assert!(r.warning.is_none());
    }

    #[test]
    fn deterministic_for_fixed_seed_and_workers() {
        let f = face(&[[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]]);
        let cfg = McConfig::new(20_000, 3).workers(3);
        assert_eq!(
            frequency_mc(&f, &cfg).unwrap(),
            frequency_mc(&f, &cfg).unwrap()
        );
    }

    #[test]
    fn no_cells_gives_zero() {
        let f = face(&[[0, 0, 1], [2, 0, 1], [2, 2, 1], [0, 2, 1]]);
        let r = frequency_mc(&f, &McConfig::new(5_000, 1).workers(2)).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn chart_reduction_undoes_shears() {
        let skewed = vec![IVec([1, -2]), IVec([-1, 1]), IVec([0, -1])];
        let (reduced, inverse) = reduce_chart(&skewed);
        let unit = containment_box_area(&[IVec([0, 0]), IVec([1, 0]), IVec([0, 1])]);
        assert!(containment_box_area(&reduced) <= unit + 1e-9);
        let back: Vec<IVec2> = reduced.iter().map(|p| apply2(inverse, p)).collect();
        assert_eq!(back, skewed);
    }

    #[test]
    fn sheared_faces_are_sampled_efficiently() {
        let f = face(&[[1, -2, 1], [-1, 1, 1], [0, -1, 1]]);
        let r = frequency_mc(&f, &McConfig::new(100_000, 4).workers(2)).unwrap();
        assert!(
            (r.value - 0.430_463_88).abs() < 4.0 * r.error,
            "{} +/- {}",
            r.value,
            r.error
        );
    }

    #[test]
    fn zero_samples_rejected() {
        let f = face(&[[0, 0, 1], [1, 0, 1], [0, 1, 1]]);
        assert_eq!(
            frequency_mc(&f, &McConfig::new(0, 1)),
            Err(Moebius2dError::InvalidSamples)
        );
    }
}
