//! Named faces used by the command-line front end.

use thiserror::Error;

use crate::lattice::{integer_distance, LatticeError, LatticeFace};

/// Largest `n` accepted for the `A<n>` and `B<n>` series.
pub const MAX_SERIES_INDEX: i64 = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog id '{0}'")]
    Unknown(String),
    #[error("catalog id '{0}' needs --n")]
    MissingIndex(String),
    #[error("series index must be in 1..={max}, got {0}", max = MAX_SERIES_INDEX)]
    BadIndex(i64),
    #[error("catalog entry {id}: declared ls={ls}, ld={ld} but computed ls={got_ls}, ld={got_ld}")]
    Mismatch {
        id: String,
        ls: u128,
        ld: u64,
        got_ls: u128,
        got_ld: u64,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub id: String,
    pub face: LatticeFace,
    pub ls: u128,
    pub ld: u64,
    pub source: &'static str,
}

impl CatalogEntry {
    fn new(
        id: impl Into<String>,
        coords: &[[i64; 3]],
        ls: u128,
        ld: u64,
        source: &'static str,
    ) -> Result<Self, CatalogError> {
        let entry = CatalogEntry {
            id: id.into(),
            face: LatticeFace::from_coords(coords)?,
            ls,
            ld,
            source,
        };
        entry.verify()?;
        Ok(entry)
    }

    /// Recomputes integer area and distance and compares them with the declared values.
    pub fn verify(&self) -> Result<(), CatalogError> {
        let got_ls = self.face.integer_area();
        let got_ld = integer_distance(&self.face);
        if got_ls != self.ls || got_ld != self.ld {
            return Err(CatalogError::Mismatch {
                id: self.id.clone(),
                ls: self.ls,
                ld: self.ld,
                got_ls,
                got_ld,
            });
        }
        Ok(())
    }
}

fn unit_triangle() -> Result<CatalogEntry, CatalogError> {
    CatalogEntry::new(
        "T1",
        &[[0, 0, 1], [0, 1, 1], [1, 0, 1]],
        1,
        1,
        "unit triangle",
    )
}

fn unit_triangle_far() -> Result<CatalogEntry, CatalogError> {
    CatalogEntry::new(
        "T2",
        &[[1, 0, 2], [0, 1, 2], [1, 1, 2]],
        1,
        2,
        "unit triangle at distance 2",
    )
}

fn unit_square() -> Result<CatalogEntry, CatalogError> {
    CatalogEntry::new(
        "Q1",
        &[[0, 0, 1], [0, 1, 1], [1, 1, 1], [1, 0, 1]],
        2,
        1,
        "unit square",
    )
}

fn unit_square_far() -> Result<CatalogEntry, CatalogError> {
    CatalogEntry::new(
        "Q2",
        &[[1, 0, 2], [2, 0, 2], [2, 1, 2], [1, 1, 2]],
        2,
        2,
        "unit square at distance 2",
    )
}

fn check_index(n: i64) -> Result<i64, CatalogError> {
    if (1..=MAX_SERIES_INDEX).contains(&n) {
        Ok(n)
    } else {
        Err(CatalogError::BadIndex(n))
    }
}

/// Triangle `(0,0,1), (n,0,1), (0,n,1)`.
pub fn series_a(n: i64) -> Result<CatalogEntry, CatalogError> {
    let n = check_index(n)?;
    CatalogEntry::new(
        format!("A{n}"),
        &[[0, 0, 1], [n, 0, 1], [0, n, 1]],
        (n * n) as u128,
        1,
        "triangle series",
    )
}

/// Square `(0,0,1), (n,0,1), (n,n,1), (0,n,1)`.
pub fn series_b(n: i64) -> Result<CatalogEntry, CatalogError> {
    let n = check_index(n)?;
    CatalogEntry::new(
        format!("B{n}"),
        &[[0, 0, 1], [n, 0, 1], [n, n, 1], [0, n, 1]],
        2 * (n * n) as u128,
        1,
        "square series",
    )
}

/// How the entries of a lookup relate to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grouping {
    Single,
    /// Same affine type at distances 1 and 2; frequencies are compared.
    DistancePair,
    /// `A<n>` and `B<n>`; the ratio of frequencies is reported.
    Ratio,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lookup {
    pub entries: Vec<CatalogEntry>,
    pub grouping: Grouping,
}

fn parse_series(rest: &str, n: Option<i64>, id: &str) -> Result<i64, CatalogError> {
    match rest {
        "n" => n.ok_or_else(|| CatalogError::MissingIndex(id.to_string())),
        digits => digits
            .parse::<i64>()
            .map_err(|_| CatalogError::Unknown(id.to_string())),
    }
}

/// Resolves a catalog id; `n` fills in `An`, `Bn` and `An/Bn`.
pub fn lookup(id: &str, n: Option<i64>) -> Result<Lookup, CatalogError> {
    let single = |e: CatalogEntry| Lookup {
        entries: vec![e],
        grouping: Grouping::Single,
    };
    let pair = |a: CatalogEntry, b: CatalogEntry, grouping| Lookup {
        entries: vec![a, b],
        grouping,
    };
    match id {
        "T1" => Ok(single(unit_triangle()?)),
        "T2" => Ok(single(unit_triangle_far()?)),
        "Q1" => Ok(single(unit_square()?)),
        "Q2" => Ok(single(unit_square_far()?)),
        "T-pair" => Ok(pair(
            unit_triangle()?,
            unit_triangle_far()?,
            Grouping::DistancePair,
        )),
        "Q-pair" => Ok(pair(
            unit_square()?,
            unit_square_far()?,
            Grouping::DistancePair,
        )),
        _ => {
            if let Some(rest) = id.strip_prefix('A') {
                if let Some((a, b)) = rest.split_once("/B") {
                    let ka = parse_series(a, n, id)?;
                    let kb = parse_series(b, n, id)?;
                    return Ok(pair(series_a(ka)?, series_b(kb)?, Grouping::Ratio));
                }
                return Ok(single(series_a(parse_series(rest, n, id)?)?));
            }
            if let Some(rest) = id.strip_prefix('B') {
                return Ok(single(series_b(parse_series(rest, n, id)?)?));
            }
            Err(CatalogError::Unknown(id.to_string()))
        }
    }
}

/// Fixed entries plus the series up to `n_max`, all verified.
pub fn all(n_max: i64) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = vec![
        unit_triangle()?,
        unit_triangle_far()?,
        unit_square()?,
        unit_square_far()?,
    ];
    for n in 1..=n_max {
        out.push(series_a(n)?);
        out.push(series_b(n)?);
    }
    Ok(out)
}
