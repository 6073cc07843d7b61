//! Pure-state statistical model: the state and its parameter derivatives,
//! represented either by their Gram matrix or by coefficients in an
//! orthonormal basis.

mod gram;
mod frame;

pub use gram::{gaussian_gram, paper_coefficients, paper_gram, PureModelGram};
pub use frame::{orthonormalize, OrthonormalFrame, DEFAULT_RANK_TOL};
