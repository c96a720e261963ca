//! Ordinary continued fractions and the sail of a planar angle.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::lattice::{integer_length, orient2, IVec2, Rational};
use crate::streams;

/// Largest denominator for which a sail is built column by column.
pub const MAX_SAIL_DENOMINATOR: i64 = 1 << 26;

/// Largest Gauss-map position sampled in double precision.
pub const MAX_GAUSS_POSITION: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SailError {
    #[error("continued fraction must have at least one element")]
    Empty,
    #[error("element {index} is {value}; elements after the first must be >= 1")]
    NonPositiveElement { index: usize, value: String },
    #[error("sail requires alpha >= 1, got {0}")]
    OutOfRange(String),
    #[error("alpha {0} is too large for the lattice sail")]
    TooLarge(String),
    #[error("sail polyline needs at least 2 vertices")]
    Degenerate,
    #[error("sail polyline is invalid: {0}")]
    InvalidPolyline(String),
    #[error("Gauss-map position must be in 1..={max}, got {0}", max = MAX_GAUSS_POSITION)]
    PositionOutOfRange(usize),
    #[error("sample count must be positive")]
    NoSamples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Shortest,
}

/// Finite ordinary continued fraction `[a0, a1, ..., an]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    elements: Vec<BigInt>,
}

impl ContinuedFraction {
    pub fn new(elements: Vec<BigInt>) -> Result<Self, SailError> {
        if elements.is_empty() {
            return Err(SailError::Empty);
        }
        if let Some((index, value)) = elements
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, a)| !a.is_positive())
        {
            return Err(SailError::NonPositiveElement {
                index,
                value: value.to_string(),
            });
        }
        Ok(ContinuedFraction { elements })
    }

    pub fn from_i64(elements: &[i64]) -> Result<Self, SailError> {
        Self::new(elements.iter().map(|&a| BigInt::from(a)).collect())
    }

    pub fn elements(&self) -> &[BigInt] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Even or odd by the total number of elements.
    pub fn parity(&self) -> Parity {
        if self.elements.len().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn value(&self) -> Rational {
        cf_value(self)
    }

    /// The other expansion of the same rational, with the opposite parity.
    pub fn flip_parity(&self) -> ContinuedFraction {
        let mut e = self.elements.clone();
        let last = e.pop().expect("non-empty");
        if last > BigInt::one() || e.is_empty() {
            e.push(last - 1);
            e.push(BigInt::one());
        } else {
            let prev = e.pop().expect("length >= 2");
            e.push(prev + 1);
        }
        ContinuedFraction { elements: e }
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Euclidean-algorithm expansion of `alpha`, optionally forced to a parity.
pub fn cf_expand(alpha: &Rational, parity: Parity) -> ContinuedFraction {
    let mut elements = Vec::new();
    let mut x = alpha.clone();
    loop {
        let a = x.floor();
        elements.push(a.to_integer());
        let frac = x - a;
        if frac.is_zero() {
            break;
        }
        x = frac.recip();
    }
    let shortest = ContinuedFraction { elements };
    match (parity, shortest.parity()) {
        (Parity::Shortest, _) | (Parity::Even, Parity::Even) | (Parity::Odd, Parity::Odd) => {
            shortest
        }
        _ => shortest.flip_parity(),
    }
}

/// Exact value of a finite continued fraction.
pub fn cf_value(cf: &ContinuedFraction) -> Rational {
    let mut it = cf.elements.iter().rev();
    let mut acc = Rational::from_integer(it.next().expect("non-empty").clone());
    for a in it {
        acc = Rational::from_integer(a.clone()) + acc.recip();
    }
    acc
}

/// Bounded boundary of the convex hull of the nonzero lattice points in an angle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SailPolyline {
    vertices: Vec<IVec2>,
    edge_lengths: Vec<u64>,
    vertex_angles: Vec<u64>,
}

fn primitive(d: [i128; 2]) -> [i128; 2] {
    let g = d[0].gcd(&d[1]);
    [d[0] / g, d[1] / g]
}

impl SailPolyline {
    /// Validates the polyline and derives integer edge lengths and vertex angles.
    pub fn new(vertices: Vec<IVec2>) -> Result<Self, SailError> {
        if vertices.len() < 2 {
            return Err(SailError::Degenerate);
        }
        if vertices[0] != IVec2::new([1, 0]) {
            return Err(SailError::InvalidPolyline(format!(
                "first vertex is {}, expected (1,0)",
                vertices[0]
            )));
        }
        let edge_lengths = vertices
            .windows(2)
            .map(|w| {
                integer_length(&w[0], &w[1])
                    .map_err(|_| SailError::InvalidPolyline("repeated vertex".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut vertex_angles = Vec::with_capacity(vertices.len().saturating_sub(2));
        for w in vertices.windows(3) {
            if orient2(&w[0], &w[1], &w[2]) >= 0 {
                return Err(SailError::InvalidPolyline(format!(
                    "not convex toward the origin at {}",
                    w[1]
                )));
            }
            let back = primitive(w[0].diff(&w[1]));
            let fwd = primitive(w[2].diff(&w[1]));
            let det = back[0] * fwd[1] - back[1] * fwd[0];
            vertex_angles.push(det.unsigned_abs() as u64);
        }
        Ok(SailPolyline {
            vertices,
            edge_lengths,
            vertex_angles,
        })
    }

    pub fn vertices(&self) -> &[IVec2] {
        &self.vertices
    }

    /// `a_i`: integer length of the edge `A_i A_{i+1}`.
    pub fn edge_lengths(&self) -> &[u64] {
        &self.edge_lengths
    }

    /// `b_i`: integer angle at the interior vertex `A_i`.
    pub fn vertex_angles(&self) -> &[u64] {
        &self.vertex_angles
    }
}

/// Sail of the angle between the positive x-axis and the ray `y = alpha x`.
pub fn sail_vertices(alpha: &Rational) -> Result<SailPolyline, SailError> {
    if *alpha < Rational::one() {
        return Err(SailError::OutOfRange(alpha.to_string()));
    }
    let too_large = || SailError::TooLarge(alpha.to_string());
    let p = alpha.numer().to_i64().ok_or_else(too_large)?;
    let q = alpha.denom().to_i64().ok_or_else(too_large)?;
    if q > MAX_SAIL_DENOMINATOR {
        return Err(too_large());
    }
    // Column x contributes only its top point; lower points are convex
    // combinations of (x, 0) and the top.
    let mut candidates: Vec<IVec2> = Vec::with_capacity(q as usize + 1);
    candidates.push(IVec2::new([1, 0]));
    for x in 1..=q {
        let y = Integer::div_floor(&(p as i128 * x as i128), &(q as i128));
        candidates.push(IVec2::new([x, i64::try_from(y).map_err(|_| too_large())?]));
    }
    candidates.sort_by(|a, b| {
        let cr = a.0[0] as i128 * b.0[1] as i128 - a.0[1] as i128 * b.0[0] as i128;
        match cr.cmp(&0) {
            Ordering::Greater => Ordering::Less,
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => a.0[0].cmp(&b.0[0]),
        }
    });
    candidates.dedup_by(|later, earlier| {
        later.0[0] as i128 * earlier.0[1] as i128 == later.0[1] as i128 * earlier.0[0] as i128
    });
    let mut chain: Vec<IVec2> = Vec::new();
    for pt in candidates {
        while chain.len() >= 2
            && orient2(&chain[chain.len() - 2], &chain[chain.len() - 1], &pt) >= 0
        {
            chain.pop();
        }
        chain.push(pt);
    }
    if chain.len() < 2 {
        // alpha = 1 with q = 1 still yields (1,0),(1,1); this guards malformed input.
        return Err(SailError::Degenerate);
    }
    SailPolyline::new(chain)
}

/// Reads `[a0, b1, a1, b2, a2, ...]` off the sail.
pub fn sail_to_cf(sail: &SailPolyline) -> ContinuedFraction {
    let mut elements = Vec::with_capacity(2 * sail.edge_lengths.len());
    for (i, &a) in sail.edge_lengths.iter().enumerate() {
        if i > 0 {
            elements.push(BigInt::from(sail.vertex_angles[i - 1]));
        }
        elements.push(BigInt::from(a));
    }
    ContinuedFraction { elements }
}

/// Sorted samples of `z_n(alpha) = [0, a_n, a_{n+1}, ...]` for uniform `alpha`.
#[derive(Clone, Debug)]
pub struct GaussKuzminSample {
    pub position: usize,
    pub values: Vec<f64>,
    /// Draws discarded because the Gauss map hit zero (a rational sample).
    pub resampled: u64,
}

/// Limiting distribution `log2(1 + x)`.
pub fn gauss_kuzmin_cdf(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

impl GaussKuzminSample {
    /// Fraction of samples strictly below `x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let below = self.values.partition_point(|&v| v < x);
        below as f64 / self.values.len() as f64
    }

    /// `points` evenly spaced `(x, empirical, limit)` rows on `[0, 1]`.
    pub fn cdf_table(&self, points: usize) -> Vec<(f64, f64, f64)> {
        let last = points.max(2) - 1;
        (0..=last)
            .map(|i| {
                let x = i as f64 / last as f64;
                (x, self.cdf(x), gauss_kuzmin_cdf(x))
            })
            .collect()
    }

    /// Kolmogorov distance between the empirical CDF and `log2(1 + x)`.
    pub fn sup_deviation(&self) -> f64 {
        self.sup_deviation_from(gauss_kuzmin_cdf)
    }

    pub fn sup_deviation_from(&self, limit: impl Fn(f64) -> f64) -> f64 {
        let n = self.values.len() as f64;
        self.values
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                let f = limit(z);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    /// Relative frequency of the digit `k` at the sampled position.
    pub fn digit_frequency(&self, k: u64) -> f64 {
        // a_n = k  <=>  1/(k+1) < z_n <= 1/k
        let lo = 1.0 / (k as f64 + 1.0);
        let hi = 1.0 / k as f64;
        let count = self.values.iter().filter(|&&z| z > lo && z <= hi).count();
        count as f64 / self.values.len() as f64
    }
}

fn gauss_map_tail<R: Rng>(rng: &mut R, position: usize) -> (f64, u64) {
    let mut rejected = 0;
    'draw: loop {
        let mut z: f64 = rng.gen();
        if z == 0.0 {
            rejected += 1;
            continue;
        }
        for _ in 1..position {
            let r = 1.0 / z;
            z = r - r.floor();
            if z == 0.0 {
                rejected += 1;
                continue 'draw;
            }
        }
        return (z, rejected);
    }
}

/// Samples `z_n` for uniform `alpha` in `(0, 1)` using `position - 1` Gauss-map steps.
pub fn gauss_kuzmin_empirical(
    position: usize,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<GaussKuzminSample, SailError> {
    if position == 0 || position > MAX_GAUSS_POSITION {
        return Err(SailError::PositionOutOfRange(position));
    }
    if samples == 0 {
        return Err(SailError::NoSamples);
    }
    let chunks = streams::run_partitioned(samples, workers, seed, |rng, count| {
        let mut out = Vec::with_capacity(count as usize);
        let mut rejected = 0;
        for _ in 0..count {
            let (z, r) = gauss_map_tail(rng, position);
            out.push(z);
            rejected += r;
        }
        (out, rejected)
    });
    let mut values = Vec::with_capacity(samples as usize);
    let mut resampled = 0;
    for (chunk, r) in chunks {
        values.extend(chunk);
        resampled += r;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    Ok(GaussKuzminSample {
        position,
        values,
        resampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn cf(e: &[i64]) -> ContinuedFraction {
        ContinuedFraction::from_i64(e).unwrap()
    }

    #[test]
    fn expand_seven_fifths() {
        assert_eq!(cf_expand(&rat(7, 5), Parity::Shortest), cf(&[1, 2, 2]));
        assert_eq!(cf_expand(&rat(7, 5), Parity::Even), cf(&[1, 2, 1, 1]));
        assert_eq!(cf_expand(&rat(7, 5), Parity::Odd), cf(&[1, 2, 2]));
        assert_eq!(cf_expand(&rat(3, 1), Parity::Shortest), cf(&[3]));
        assert_eq!(cf_expand(&rat(3, 1), Parity::Even), cf(&[2, 1]));
        assert_eq!(cf_expand(&rat(-7, 3), Parity::Shortest), cf(&[-3, 1, 2]));
    }

    #[test]
    fn values() {
        assert_eq!(cf_value(&cf(&[1, 2, 2])), rat(7, 5));
        assert_eq!(cf_value(&cf(&[3])), rat(3, 1));
        assert_eq!(cf_value(&cf(&[0, 2])), rat(1, 2));
    }

    #[test]
    fn invalid_elements() {
        assert_eq!(ContinuedFraction::new(vec![]), Err(SailError::Empty));
        assert!(matches!(
            ContinuedFraction::from_i64(&[1, 0, 2]),
            Err(SailError::NonPositiveElement { index: 1, .. })
        ));
        assert!(ContinuedFraction::from_i64(&[-5, 1]).is_ok());
    }

    #[test]
    fn flip_parity_of_trailing_one() {
        assert_eq!(cf(&[1, 2, 1, 1]).flip_parity(), cf(&[1, 2, 2]));
        assert_eq!(cf(&[2, 1]).flip_parity(), cf(&[3]));
    }

    #[test]
    fn sails_of_small_angles() {
        let s = sail_vertices(&rat(7, 5)).unwrap();
        assert_eq!(
            s.vertices(),
            &[IVec2::new([1, 0]), IVec2::new([1, 1]), IVec2::new([5, 7])]
        );
        assert_eq!(s.edge_lengths(), &[1, 2]);
        assert_eq!(s.vertex_angles(), &[2]);
        assert_eq!(sail_to_cf(&s), cf(&[1, 2, 2]));

        let one = sail_vertices(&rat(1, 1)).unwrap();
        assert_eq!(one.vertices(), &[IVec2::new([1, 0]), IVec2::new([1, 1])]);
        let two = sail_vertices(&rat(2, 1)).unwrap();
        assert_eq!(two.vertices(), &[IVec2::new([1, 0]), IVec2::new([1, 2])]);
        assert_eq!(sail_to_cf(&two), cf(&[2]));
    }

    #[test]
    fn sail_errors() {
        assert!(matches!(
            sail_vertices(&rat(1, 2)),
            Err(SailError::OutOfRange(_))
        ));
        assert_eq!(
            SailPolyline::new(vec![IVec2::new([1, 0])]),
            Err(SailError::Degenerate)
        );
        assert!(SailPolyline::new(vec![IVec2::new([2, 0]), IVec2::new([2, 1])]).is_err());
        // Bends away from the origin.
        assert!(SailPolyline::new(vec![
            IVec2::new([1, 0]),
            IVec2::new([3, 1]),
            IVec2::new([1, 1])
        ])
        .is_err());
    }

    #[test]
    fn gauss_kuzmin_position_one_is_uniform() {
        let s = gauss_kuzmin_empirical(1, 20_000, 11, 2).unwrap();
        assert_eq!(s.values.len(), 20_000);
        assert!(s.sup_deviation_from(|x| x) < 0.02);
    }

    #[test]
    fn gauss_kuzmin_rejects_bad_positions() {
        assert_eq!(
            gauss_kuzmin_empirical(0, 10, 1, 1).unwrap_err(),
            SailError::PositionOutOfRange(0)
        );
        assert_eq!(
            gauss_kuzmin_empirical(13, 10, 1, 1).unwrap_err(),
            SailError::PositionOutOfRange(13)
        );
        assert_eq!(
            gauss_kuzmin_empirical(3, 0, 1, 1).unwrap_err(),
            SailError::NoSamples
        );
    }

    #[test]
    fn gauss_kuzmin_is_deterministic_per_worker_count() {
        let a = gauss_kuzmin_empirical(4, 5_000, 9, 3).unwrap();
        let b = gauss_kuzmin_empirical(4, 5_000, 9, 3).unwrap();
        assert_eq!(a.values, b.values);
    }
}
