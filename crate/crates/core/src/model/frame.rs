//! Coefficient representation of the model on an orthonormal basis, and a
//! rank-revealing Gram-Schmidt that produces one from a Gram matrix alone.

use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::gram::{paper_coefficients, PureModelGram};

type C64 = Complex<f64>;

/// Relative rank threshold for dropping numerically dependent directions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Coefficients A of (psi_0, ..., psi_d) on an orthonormal basis
/// (e_0, ..., e_r) with e_0 = psi_0, i.e. A has shape (d+1) x (r+1) with
/// first row (1, 0, ..., 0) and A_jm = <e_m | psi_j>.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalFrame {
    a: DMatrix<C64>,
}

impl OrthonormalFrame {
    pub fn new(a: DMatrix<C64>) -> Result<Self> {
        if a.nrows() < 2 || a.ncols() < 1 {
            return Err(Error::invalid("frame", format!("shape {}x{}", a.nrows(), a.ncols())));
        }
        if (a[(0, 0)] - C64::new(1.0, 0.0)).norm() > 1e-8 {
            return Err(Error::invalid("frame", format!("A_00 = {} != 1", a[(0, 0)])));
        }
        for m in 1..a.ncols() {
            if a[(0, m)].norm() > 1e-10 {
                return Err(Error::invalid(
                    "frame",
                    "first row must be (1, 0, ..., 0): the basis is anchored at the state",
                ));
            }
        }
        Ok(OrthonormalFrame { a })
    }

    /// The printed coefficient expansion, taken literally (r = 2).
    pub fn paper_frame(alpha: f64, g: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 || !g.is_finite() {
            return Err(Error::invalid("paper frame", format!("alpha = {alpha}, g = {g}")));
        }
        Self::new(paper_coefficients(alpha, g))
    }

    /// Random model with d parameters spanning r basis directions beyond the
    /// state. Rejection-samples until the QFIM is well conditioned so the
    /// downstream bounds are all finite.
    pub fn random(d: usize, r: usize, seed: u64) -> Self {
        assert!(d >= 1 && r >= 1, "need at least one parameter and one direction");
        // The QFIM has rank at most 2r, so d > 2r can never be identifiable.
        assert!(d <= 2 * r, "d = {d} parameters cannot be identifiable with r = {r} directions");
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        loop {
            let mut a = DMatrix::from_element(d + 1, r + 1, C64::new(0.0, 0.0));
            a[(0, 0)] = C64::new(1.0, 0.0);
            for j in 1..=d {
                for m in 0..=r {
                    a[(j, m)] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
            let frame = OrthonormalFrame { a };
            let q = frame.qfim();
            let eig = q.symmetric_eigen().eigenvalues;
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for &l in eig.iter() {
                lo = lo.min(l);
                hi = hi.max(l);
            }
            if lo > 1e-3 * hi.max(1.0) {
                return frame;
            }
        }
    }

    pub fn d(&self) -> usize {
        self.a.nrows() - 1
    }

    /// Number of basis directions beyond e_0.
    pub fn r(&self) -> usize {
        self.a.ncols() - 1
    }

    pub fn coefficients(&self) -> &DMatrix<C64> {
        &self.a
    }

    /// Fixture form: coefficient rows as [re, im] pairs.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.a.nrows())
            .map(|j| (0..self.a.ncols()).map(|m| [self.a[(j, m)].re, self.a[(j, m)].im]).collect())
            .collect();
        serde_json::json!({ "d": self.d(), "r": self.r(), "coefficients": rows })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let rows = v["coefficients"]
            .as_array()
            .ok_or_else(|| Error::invalid("frame fixture", "missing coefficients"))?;
        let nrows = rows.len();
        let ncols = rows.first().and_then(|r| r.as_array()).map(|r| r.len()).unwrap_or(0);
        if nrows < 2 || ncols < 1 {
            return Err(Error::invalid("frame fixture", format!("shape {nrows}x{ncols}")));
        }
        let mut a = DMatrix::from_element(nrows, ncols, C64::new(0.0, 0.0));
        for (j, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == ncols)
                .ok_or_else(|| Error::invalid("frame fixture", "ragged coefficient rows"))?;
            for (m, entry) in row.iter().enumerate() {
                let re = entry[0].as_f64();
                let im = entry[1].as_f64();
                match (re, im) {
                    (Some(re), Some(im)) => a[(j, m)] = C64::new(re, im),
                    _ => return Err(Error::invalid("frame fixture", "entries must be [re, im]")),
                }
            }
        }
        Self::new(a)
    }

    /// <psi_j | psi_k> implied by the coefficients.
    pub fn gram_entry(&self, j: usize, k: usize) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..self.a.ncols() {
            acc += self.a[(j, m)].conj() * self.a[(k, m)];
        }
        acc
    }

    pub fn gram(&self) -> Result<PureModelGram> {
        PureModelGram::new(self.a.conjugate() * self.a.transpose())
    }

    /// Quantum Fisher information of the pure model:
    /// Q_jk = 4 Re[G_jk - G_j0 G_0k].
    pub fn qfim(&self) -> DMatrix<f64> {
        let d = self.d();
        let mut q = DMatrix::zeros(d, d);
        for j in 1..=d {
            for k in 1..=d {
                let val = self.gram_entry(j, k) - self.gram_entry(j, 0) * self.gram_entry(0, k);
                q[(j - 1, k - 1)] = 4.0 * val.re;
            }
        }
        // Clean up round-off asymmetry.
        let qt = q.transpose();
        (q + qt) * 0.5
    }
}

/// Rank-revealing Gram-Schmidt in Gram coordinates.
///
/// Basis vectors are built as combinations of the psi_j themselves, so only
/// inner products (the Gram entries) are ever needed. Directions whose
/// residual norm-squared falls below `rank_tol` times the largest Gram
/// eigenvalue are treated as linearly dependent and dropped.
pub fn orthonormalize(gram: &PureModelGram, rank_tol: f64) -> Result<OrthonormalFrame> {
    if rank_tol.is_nan() || rank_tol <= 0.0 {
        return Err(Error::invalid("rank_tol", format!("{rank_tol}")));
    }
    let n = gram.d() + 1;
    let scale = gram
        .matrix()
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |a, &b| a.max(b.abs()));
    if gram.min_eigenvalue() < -1e-8 * scale.max(1.0) {
        return Err(Error::invalid("gram", "not positive semidefinite"));
    }

    // basis[i][l]: coefficient of psi_l in orthonormal vector b_i.
    let mut basis: Vec<Vec<C64>> = Vec::new();
    // coeffs[j][i] = <b_i | psi_j>.
    let mut coeffs: Vec<Vec<C64>> = Vec::new();

    for j in 0..n {
        let mut c_j: Vec<C64> = Vec::with_capacity(basis.len());
        for b in &basis {
            // <b_i | psi_j> = sum_l conj(beta_il) G_lj
            let mut acc = C64::new(0.0, 0.0);
            for (l, beta) in b.iter().enumerate() {
                acc += beta.conj() * gram.entry(l, j);
            }
            c_j.push(acc);
        }
        let projected: f64 = c_j.iter().map(|c| c.norm_sqr()).sum();
        let resid_sq = (gram.entry(j, j).re - projected).max(0.0);
        if resid_sq > rank_tol * scale.max(1.0) {
            // New direction: b = (psi_j - sum_i c_ji b_i) / sqrt(resid_sq)
            let norm = resid_sq.sqrt();
            let mut beta = vec![C64::new(0.0, 0.0); n];
            beta[j] = C64::new(1.0, 0.0);
            for (i, b) in basis.iter().enumerate() {
                for (l, v) in b.iter().enumerate() {
                    beta[l] -= c_j[i] * v;
                }
            }
            for v in beta.iter_mut() {
                *v /= C64::new(norm, 0.0);
            }
            basis.push(beta);
            c_j.push(C64::new(norm, 0.0));
        }
        coeffs.push(c_j);
    }

    let r_plus_1 = basis.len();
    let mut a = DMatrix::from_element(n, r_plus_1, C64::new(0.0, 0.0));
    for (j, c_j) in coeffs.iter().enumerate() {
        for (i, c) in c_j.iter().enumerate() {
            a[(j, i)] = *c;
        }
    }
    OrthonormalFrame::new(a)
}
