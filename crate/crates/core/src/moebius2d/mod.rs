//! Möbius form on triples of lines in a face plane and relative frequencies of 2D sail faces.

mod density;
mod domain;
mod exact;
mod mc;

use thiserror::Error;

use crate::lattice::{LatticeError, LatticeFace};
use crate::planar::PlanarError;
use crate::sail2d::Sail2dError;

pub use density::{
    density_2d_dual, density_2d_vertex, density_nd_angular, dual_denominator,
    dual_to_vertex_jacobian, vertex_area, DualConfig, VertexConfig,
};
pub use domain::{
    admissible_domain, cell_boxes, clip, planar_cells, polar_polygon, polygon_area, polygon_box,
    AdmissibleDomain, ConstraintCell, Polygon,
};
pub use exact::{frequency_exact, frequency_exact_with_budget, DEFAULT_PAIR_BUDGET};
pub use mc::{frequency_mc, McConfig, DEFAULT_INFLATION, INCONCLUSIVE_WARN_RATE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Moebius2dError {
    #[error("configuration is singular")]
    Singular,
    #[error("expected {expected} angle pairs, got {got}")]
    AngleCount { expected: usize, got: usize },
    #[error("exact path needs a face at integer distance 1, got {0}")]
    DistanceNotOne(u64),
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sail(#[from] Sail2dError),
    #[error("quadrature budget exhausted: best estimate {value} +/- {error}")]
    BudgetExceeded { value: f64, error: f64 },
    #[error("no sample was accepted by the face oracle")]
    NoAcceptedSamples,
    #[error("sample count must be at least 1")]
    InvalidSamples,
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("dual denominator changes sign inside cell {0}")]
    DegenerateCell(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrequencyMethod {
    Exact,
    MonteCarlo,
}

impl FrequencyMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            FrequencyMethod::Exact => "exact",
            FrequencyMethod::MonteCarlo => "mc",
        }
    }
}

/// Relative frequency of a face over one ordering of the three lines.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyResult {
    pub value: f64,
    /// Standard error (Monte Carlo) or quadrature error estimate (exact).
    pub error: f64,
    pub method: FrequencyMethod,
    /// Samples drawn, or integrand evaluations for the exact path.
    pub samples: u64,
    pub face: LatticeFace,
    /// Samples with a definite oracle answer.
    pub accepted: u64,
    pub inconclusive: u64,
    /// Accepted face samples lying outside the uninflated bounding box.
    pub outside_box: u64,
    pub warning: Option<String>,
}
