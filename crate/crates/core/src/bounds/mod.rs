//! Scalar precision bounds for the pure-state model: the SLD Cramer-Rao
//! bound, the Holevo Cramer-Rao bound and its brute-force cross-check, and
//! the closed-form reference curves from the published analysis.

mod qfim;
mod holevo;
mod oracle;
mod reference;

pub use qfim::{qfim_pure, sld_crb};
pub use holevo::{
    hcrb_constraints, hcrb_pure, holevo_objective, HcrbOpts, HcrbProblem, HcrbSolution, HcrbStatus,
};
pub use oracle::hcrb_oracle;
pub use reference::{paper_reference_bounds, PaperReferenceBounds};
