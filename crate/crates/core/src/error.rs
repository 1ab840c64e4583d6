//! Crate-wide error type. Arithmetic failures inside jet operations are
//! reported as [`JetError`](crate::jet::JetError) and get wrapped with the
//! evaluation point as soon as a field is evaluated somewhere concrete.

use crate::jet::{JetError, Point4};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point outside evaluation domain: {0}")]
    OutOfDomain(String),

    #[error("singular evaluation at {point}: {source}")]
    SingularEvaluation { point: Point4, source: JetError },

    #[error("non-finite result at {point}")]
    NonFinite { point: Point4 },

    #[error("degenerate metric at {point}: |det| = {det:e}")]
    DegenerateMetric { point: Point4, det: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("underdetermined system: {rows} rows < {cols} columns")]
    Underdetermined { rows: usize, cols: usize },

    #[error("no scalar potential exists: a gradient field has zero azimuthal component, so psi3 must be 0 (got {psi3})")]
    PotentialExistence { psi3: f64 },

    #[error("inconsistent coupling: kappa = {kappa} but 2*beta - (p + 1/2) = {derived}")]
    InconsistentKappa { kappa: f64, derived: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
