//! Integral twisted (co)homology of complexified real line arrangements,
//! computed from cochain complexes on chamber bases.
//!
//! Geometry is generic over an ordered field through [`scalar::Scalar`];
//! [`qnum::QNum`] covers ℚ and real quadratic fields.

pub mod chambers;
pub mod complex;
pub mod corpus;
pub mod geometry;
pub mod lineset;
pub mod localsys;
pub mod lp;
pub mod matrix;
pub mod oracle;
pub mod predict;
pub mod qnum;
pub mod random;
pub mod scalar;
pub mod search;
pub mod snf;

use thiserror::Error;

pub use chambers::Analysis;
pub use geometry::Arrangement;
pub use qnum::QNum;
pub use snf::AbelianGroup;

/// Arrangement over ℚ or ℚ(√D).
pub type QArrangement = geometry::Arrangement<QNum>;
/// Arrangement analysis over ℚ or ℚ(√D).
pub type QAnalysis = chambers::Analysis<QNum>;
/// Arrangement over ℚ with plain big rationals.
pub type RationalArrangement = geometry::Arrangement<num_rational::BigRational>;

/// Any error from the library, tagged by module.
#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry: {0}")]
    Geometry(#[from] geometry::GeometryError),
    #[error("chambers: {0}")]
    Chambers(#[from] chambers::ChamberError),
    #[error("localsys: {0}")]
    LocalSys(#[from] localsys::LocalSysError),
    #[error("complex: {0}")]
    Complex(#[from] complex::ComplexError),
    #[error("snf: {0}")]
    Snf(#[from] snf::SnfError),
    #[error("predict: {0}")]
    Predict(#[from] predict::PredictError),
    #[error("oracle: {0}")]
    Oracle(#[from] oracle::OracleError),
    #[error("search: {0}")]
    Search(#[from] search::SearchError),
    #[error("random: {0}")]
    Random(#[from] random::RandomError),
}
