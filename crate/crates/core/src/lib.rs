//! Klein sails of one- and two-dimensional continued fractions and the
//! relative frequencies of their faces.

pub mod catalog;
pub mod cli;
pub mod lattice;
pub mod moebius1d;
pub mod moebius2d;
pub mod planar;
pub mod quadrature;
pub mod report;
pub mod sail1d;
pub mod sail2d;
pub mod streams;
