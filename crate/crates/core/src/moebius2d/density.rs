//! Möbius densities on triples of lines in a plane chart.

use super::Moebius2dError;

/// Three points `P1, P2, P3` of the reference plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexConfig {
    pub points: [[f64; 2]; 3],
}

/// Three lines `a_i x + b_i y = 1`, stored as `[a_i, b_i]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualConfig {
    pub lines: [[f64; 2]; 3],
}

/// `S = (x3y2 − x2y3 + x1y3 − x3y1 + x2y1 − x1y2) / 2`.
pub fn vertex_area(v: &VertexConfig) -> f64 {
    let [[x1, y1], [x2, y2], [x3, y3]] = v.points;
    0.5 * (x3 * y2 - x2 * y3 + x1 * y3 - x3 * y1 + x2 * y1 - x1 * y2)
}

/// `D = a3b2 − a2b3 + a1b3 − a3b1 + a2b1 − a1b2`.
pub fn dual_denominator(d: &DualConfig) -> f64 {
    let [[a1, b1], [a2, b2], [a3, b3]] = d.lines;
    a3 * b2 - a2 * b3 + a1 * b3 - a3 * b1 + a2 * b1 - a1 * b2
}

/// `1 / S³`, sign carried.
pub fn density_2d_vertex(v: &VertexConfig) -> Result<f64, Moebius2dError> {
    let s = vertex_area(v);
    if s == 0.0 || !s.is_finite() {
        return Err(Moebius2dError::Singular);
    }
    Ok(1.0 / (s * s * s))
}

/// `−8 / D³`, sign carried.
pub fn density_2d_dual(d: &DualConfig) -> Result<f64, Moebius2dError> {
    let den = dual_denominator(d);
    if den == 0.0 || !den.is_finite() {
        return Err(Moebius2dError::Singular);
    }
    Ok(-8.0 / (den * den * den))
}

fn meet(l: [f64; 2], m: [f64; 2]) -> Option<[f64; 2]> {
    let det = l[0] * m[1] - m[0] * l[1];
    if det == 0.0 {
        return None;
    }
    Some([(m[1] - l[1]) / det, (l[0] - m[0]) / det])
}

fn join(p: [f64; 2], q: [f64; 2]) -> Option<[f64; 2]> {
    // a p.x + b p.y = 1, a q.x + b q.y = 1
    let det = p[0] * q[1] - q[0] * p[1];
    if det == 0.0 {
        return None;
    }
    Some([(q[1] - p[1]) / det, (p[0] - q[0]) / det])
}

impl DualConfig {
    /// `P1 = ℓ2 ∩ ℓ3`, `P2 = ℓ1 ∩ ℓ3`, `P3 = ℓ1 ∩ ℓ2`.
    pub fn vertices(&self) -> Result<VertexConfig, Moebius2dError> {
        let l = self.lines;
        let p1 = meet(l[1], l[2]).ok_or(Moebius2dError::Singular)?;
        let p2 = meet(l[0], l[2]).ok_or(Moebius2dError::Singular)?;
        let p3 = meet(l[0], l[1]).ok_or(Moebius2dError::Singular)?;
        Ok(VertexConfig {
            points: [p1, p2, p3],
        })
    }

    /// Whether the triangle cut by the lines contains the chart origin strictly.
    pub fn encloses_origin(&self) -> bool {
        let l = self.lines;
        let c = |p: [f64; 2], q: [f64; 2]| p[0] * q[1] - p[1] * q[0];
        let (c1, c2, c3) = (c(l[0], l[1]), c(l[1], l[2]), c(l[2], l[0]));
        (c1 > 0.0 && c2 > 0.0 && c3 > 0.0) || (c1 < 0.0 && c2 < 0.0 && c3 < 0.0)
    }
}

impl VertexConfig {
    /// The lines `ℓ1 = P2P3`, `ℓ2 = P1P3`, `ℓ3 = P1P2`; none may pass through the origin.
    pub fn dual(&self) -> Result<DualConfig, Moebius2dError> {
        let p = self.points;
        Ok(DualConfig {
            lines: [
                join(p[1], p[2]).ok_or(Moebius2dError::Singular)?,
                join(p[0], p[2]).ok_or(Moebius2dError::Singular)?,
                join(p[0], p[1]).ok_or(Moebius2dError::Singular)?,
            ],
        })
    }
}

fn flatten(v: &VertexConfig) -> [f64; 6] {
    let p = v.points;
    [p[0][0], p[0][1], p[1][0], p[1][1], p[2][0], p[2][1]]
}

/// Determinant by Gaussian elimination with partial pivoting.
fn det6(mut m: [[f64; 6]; 6]) -> f64 {
    let mut det = 1.0;
    for col in 0..6 {
        let pivot = (col..6)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("nonempty");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let pivot_row = m[col];
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (x, p) in row.iter_mut().zip(pivot_row).skip(col) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Jacobian determinant of dual coordinates → vertex coordinates, by
/// Richardson-extrapolated central differences.
pub fn dual_to_vertex_jacobian(d: &DualConfig, step: f64) -> Result<f64, Moebius2dError> {
    let eval = |k: usize, h: f64| -> Result<[f64; 6], Moebius2dError> {
        let mut l = d.lines;
        l[k / 2][k % 2] += h;
        Ok(flatten(&DualConfig { lines: l }.vertices()?))
    };
    let mut jac = [[0.0; 6]; 6];
    for k in 0..6 {
        let h = step * d.lines[k / 2][k % 2].abs().max(1.0);
        let central = |h: f64| -> Result<[f64; 6], Moebius2dError> {
            let (p, m) = (eval(k, h)?, eval(k, -h)?);
            Ok([0, 1, 2, 3, 4, 5].map(|i| (p[i] - m[i]) / (2.0 * h)))
        };
        let (d1, d2, d4) = (central(h)?, central(0.5 * h)?, central(0.25 * h)?);
        for (i, row) in jac.iter_mut().enumerate() {
            let r1 = (4.0 * d2[i] - d1[i]) / 3.0;
            let r2 = (4.0 * d4[i] - d2[i]) / 3.0;
            row[k] = (16.0 * r2 - r1) / 15.0;
        }
    }
    Ok(det6(jac))
}

/// The printed `n`-dimensional angular form at pairs `(φ_ij, φ_ji)`, `i < j`.
pub fn density_nd_angular(n: usize, pairs: &[(f64, f64)]) -> Result<f64, Moebius2dError> {
    let expected = n * (n + 1) / 2;
    if n == 0 || pairs.len() != expected {
        return Err(Moebius2dError::AngleCount {
            expected,
            got: pairs.len(),
        });
    }
    let sign = if n.div_ceil(4).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let mut prod = 1.0;
    for &(a, b) in pairs {
        let (s, c) = (0.5 * (a - b)).sin_cos();
        if s.abs() < 1e-300 {
            return Err(Moebius2dError::Singular);
        }
        let cot = c / s;
        prod *= cot * cot;
    }
    Ok(sign * prod / 2f64.powi((n * (n + 1)) as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_density_example() {
        let v = VertexConfig {
            points: [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        };
        assert_eq!(vertex_area(&v), -0.5);
        assert_eq!(density_2d_vertex(&v).unwrap(), -8.0);
        let cyc = VertexConfig {
            points: [v.points[1], v.points[2], v.points[0]],
        };
        assert_eq!(vertex_area(&cyc), vertex_area(&v));
        let scaled = VertexConfig {
            points: [[0.0, 0.0], [3.0, 0.0], [0.0, 3.0]],
        };
        let r = density_2d_vertex(&scaled).unwrap() / density_2d_vertex(&v).unwrap();
        assert!((r - 3f64.powi(-6)).abs() < 1e-15);
        let line = VertexConfig {
            points: [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]],
        };
        assert_eq!(density_2d_vertex(&line), Err(Moebius2dError::Singular));
    }

    #[test]
    fn dual_density_example() {
        let d = DualConfig {
            lines: [[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]],
        };
        assert_eq!(dual_denominator(&d), -3.0);
        assert!((density_2d_dual(&d).unwrap() - 8.0 / 27.0).abs() < 1e-15);
        let even = DualConfig {
            lines: [d.lines[1], d.lines[2], d.lines[0]],
        };
        assert_eq!(density_2d_dual(&even), density_2d_dual(&d));
        assert!(d.encloses_origin());
        let concurrent = DualConfig {
            lines: [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]],
        };
        assert_eq!(density_2d_dual(&concurrent), Err(Moebius2dError::Singular));
    }

    #[test]
    fn vertices_and_lines_round_trip() {
        let d = DualConfig {
            lines: [[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]],
        };
        let v = d.vertices().unwrap();
        assert_eq!(v.points, [[-2.0, 1.0], [1.0, -2.0], [1.0, 1.0]]);
        let back = v.dual().unwrap();
        for i in 0..3 {
            for k in 0..2 {
                assert!((back.lines[i][k] - d.lines[i][k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn dual_density_is_vertex_density_times_jacobian() {
        let d = DualConfig {
            lines: [[1.0, 0.2], [-0.3, 1.1], [-0.9, -0.8]],
        };
        let jac = dual_to_vertex_jacobian(&d, 1e-3).unwrap();
        let lhs = density_2d_dual(&d).unwrap();
        let rhs = density_2d_vertex(&d.vertices().unwrap()).unwrap() * jac;
        assert!(((lhs - rhs) / lhs).abs() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn angular_form() {
        let q = density_nd_angular(1, &[(std::f64::consts::FRAC_PI_2, 0.0)]).unwrap();
        assert!((q.abs() - 0.25).abs() < 1e-15);
        assert!(q < 0.0);
        let pairs = [(std::f64::consts::FRAC_PI_2, 0.0); 3];
        let v = density_nd_angular(2, &pairs).unwrap();
        assert!((v + 1.0 / 64.0).abs() < 1e-15);
        assert_eq!(
            density_nd_angular(2, &pairs[..2]),
            Err(Moebius2dError::AngleCount {
                expected: 3,
                got: 2
            })
        );
    }
}
