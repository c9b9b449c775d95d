use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("contrast must differ from 1")]
    DegenerateContrast,

    #[error("no sign change of the characteristic function on the bracket for m = {m}, s0 = {s0}")]
    NoSignChange { m: u32, s0: u32 },

    #[error("no sign change found while bracketing zero {s} of order {nu} after {expansions} expansions")]
    ZeroNotBracketed { nu: f64, s: u32, expansions: u32 },

    #[error("root refinement for m = {m}, s0 = {s0} stopped at relative residual {residual:e}")]
    NotConverged { m: u32, s0: u32, residual: f64 },

    #[error("boundary coefficient is singular: J_nu(k) vanishes at k = {k}")]
    DegenerateBoundary { k: f64 },

    #[error("quadrature on [{a}, {b}] did not converge: relative disagreement {disagreement:e}")]
    Quadrature { a: f64, b: f64, disagreement: f64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { op, detail: detail.into() }
    }
}
