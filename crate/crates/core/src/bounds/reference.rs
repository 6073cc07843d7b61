//! Closed-form curves quoted by the published analysis, kept verbatim for
//! comparison against what the engine actually computes.

use serde::{Deserialize, Serialize};

/// Quoted bounds at squeezing g: scalar SLD bound, scalar Holevo bound,
/// attainable classical bound, and the per-parameter diagonal Fisher entry of
/// the quoted optimal measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaperReferenceBounds {
    pub cs: f64,
    pub ch: f64,
    pub cf: f64,
    pub fi_diag: f64,
}

pub fn paper_reference_bounds(g: f64) -> PaperReferenceBounds {
    let c2 = (2.0 * g).cosh();
    let em2g = (-2.0 * g).exp();
    PaperReferenceBounds {
        cs: 4.0 / c2,
        ch: 8.0 * em2g,
        cf: 8.0 * em2g,
        fi_diag: (2.0 * g).exp() / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoted_curves_at_zero_squeezing() {
        let b = paper_reference_bounds(0.0);
        assert_eq!(b.cs, 4.0);
        assert_eq!(b.ch, 8.0);
        assert_eq!(b.cf, 8.0);
        assert_eq!(b.fi_diag, 0.5);
    }

    #[test]
    fn quoted_curves_decay_with_squeezing() {
        let b = paper_reference_bounds(1.0);
        assert!(b.cs < 4.0 && b.ch < 8.0);
        assert!((b.ch - 8.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((b.cs - 4.0 / 2.0f64.cosh()).abs() < 1e-15);
    }
}
