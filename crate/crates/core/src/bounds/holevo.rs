//! Holevo Cramer-Rao bound for pure models.
//!
//! The bound is the minimum over locally unbiased Hermitian tuples X of
//!   h = Tr Re Z + TrAbs Im Z,   Z_jk = <psi_0| X_j X_k |psi_0>,
//! parametrized by the basis components u_km of X_k|psi_0> orthogonal to the
//! state. Local unbiasedness is the affine family
//!   2 Re sum_{m>=1} conj(A_jm) u_km = delta_jk,
//! and h is convex in u, so the solver combines an exact minimum-norm start
//! (which is the SLD tuple), fixed-point passes on the dual variable of the
//! TrAbs term, Polyak-decay subgradient descent, and Nelder-Mead polish,
//! repeated over multistarts.

use crate::error::{Error, Result};
use crate::model::OrthonormalFrame;
use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

type C64 = Complex<f64>;

/// Optimizer knobs. Everything is deterministic given `seed`.
#[derive(Debug, Clone)]
pub struct HcrbOpts {
    pub seed: u64,
    pub starts: usize,
    pub subgradient_iters: usize,
    pub alternation_rounds: usize,
    pub polish_evals: usize,
    /// Projected supergradient steps on the dual variable after multistart.
    pub dual_ascent_iters: usize,
    /// Multistart agreement threshold, relative to 1 + h.
    pub spread_tol: f64,
    /// Constraint residual threshold (absolute).
    pub residual_tol: f64,
}

impl Default for HcrbOpts {
    fn default() -> Self {
        HcrbOpts {
            seed: 0,
            starts: 8,
            subgradient_iters: 1200,
            alternation_rounds: 30,
            polish_evals: 6000,
            dual_ascent_iters: 400,
            spread_tol: 1e-6,
            residual_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcrbStatus {
    /// The constraints pin the tuple uniquely; no optimization happened.
    Exact,
    /// Multistarts agree within tolerance and constraints hold.
    Converged,
    /// Best value returned, but multistarts disagree; treat with care.
    Stalled,
}

impl HcrbStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            HcrbStatus::Exact => "exact",
            HcrbStatus::Converged => "converged",
            HcrbStatus::Stalled => "stalled",
        }
    }
}

impl std::fmt::Display for HcrbStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct HcrbSolution {
    pub value: f64,
    /// Optimal coefficients u_km (rows k = parameters, columns m = 1..r).
    pub u: DMatrix<C64>,
    /// Z = U U^dagger at the optimum.
    pub z: DMatrix<C64>,
    /// Worst violation of the local-unbiasedness constraints.
    pub residual: f64,
    /// Best-to-worst gap across multistarts (0 for the exact path).
    pub spread: f64,
    pub status: HcrbStatus,
    /// Weak-duality certificate: value minus the best dual lower bound.
    pub lower_bound_gap: Option<f64>,
}

impl HcrbSolution {
    /// Full JSON form including diagnostics; complex entries as [re, im].
    pub fn to_json(&self) -> serde_json::Value {
        let rows = |m: &DMatrix<C64>| -> Vec<Vec<[f64; 2]>> {
            (0..m.nrows())
                .map(|j| (0..m.ncols()).map(|k| [m[(j, k)].re, m[(j, k)].im]).collect())
                .collect()
        };
        serde_json::json!({
            "value": self.value,
            "u": rows(&self.u),
            "z": rows(&self.z),
            "residual": self.residual,
            "spread": self.spread,
            "status": self.status.as_str(),
            "lower_bound_gap": self.lower_bound_gap,
        })
    }
}

/// The affine feasible set of locally unbiased tuples, in real coordinates.
///
/// For each parameter k the unknown is x_k in R^{2r} (alternating Re/Im parts
/// of u_k1..u_kr) subject to the shared d x 2r system `a_tilde` x_k = e_k.
#[derive(Debug, Clone)]
pub struct HcrbProblem {
    frame: OrthonormalFrame,
    d: usize,
    r: usize,
    a_tilde: DMatrix<f64>,
    /// Minimum-norm solutions, one column per parameter. This is exactly the
    /// (centered) SLD tuple: x_k = A~^T (A~ A~^T)^{-1} e_k.
    particular: DMatrix<f64>,
    /// Orthonormal basis of the null space of `a_tilde`.
    null_basis: DMatrix<f64>,
}

/// Builds the constraint system, failing if no locally unbiased tuple exists.
pub fn hcrb_constraints(frame: &OrthonormalFrame) -> Result<HcrbProblem> {
    HcrbProblem::new(frame)
}

impl HcrbProblem {
    pub fn new(frame: &OrthonormalFrame) -> Result<Self> {
        let (d, r) = (frame.d(), frame.r());
        let a = frame.coefficients();
        let mut a_tilde = DMatrix::zeros(d, 2 * r);
        for j in 1..=d {
            for m in 1..=r {
                a_tilde[(j - 1, 2 * (m - 1))] = 2.0 * a[(j, m)].re;
                a_tilde[(j - 1, 2 * (m - 1) + 1)] = 2.0 * a[(j, m)].im;
            }
        }

        // Row space / null space split of a_tilde via its normal matrix.
        // Its nonzero eigenvalues are exactly the QFIM's, so a relative cut
        // cleanly separates true rank from the ~eps*lmax round-off eigenvalues
        // of the exactly deficient directions.
        let normal = a_tilde.transpose() * &a_tilde; // 2r x 2r PSD
        let eig = normal.clone().symmetric_eigen();
        let lmax = eig.eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l));
        let cut = 1e-12 * lmax.max(1e-300);
        let mut rank = 0usize;
        let mut null_cols: Vec<usize> = Vec::new();
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            if l > cut {
                rank += 1;
            } else {
                null_cols.push(i);
            }
        }
        if rank < d {
            return Err(Error::NoUnbiasedEstimator(format!(
                "constraint matrix has rank {rank} < {d}; the QFIM is singular"
            )));
        }

        // particular = A~^+ = V diag(1/l) V^T A~^T applied to each e_k.
        let mut pinv = DMatrix::zeros(2 * r, d);
        for (i, &l) in eig.eigenvalues.iter().enumerate() {
            if l > cut {
                let v = eig.eigenvectors.column(i);
                let av = &a_tilde * v; // d-vector
                // pinv += v (A~ v)^T / l
                for row in 0..2 * r {
                    for col in 0..d {
                        pinv[(row, col)] += v[row] * av[col] / l;
                    }
                }
            }
        }

        let mut null_basis = DMatrix::zeros(2 * r, null_cols.len());
        for (out, &i) in null_cols.iter().enumerate() {
            null_basis.set_column(out, &eig.eigenvectors.column(i));
        }

        Ok(HcrbProblem { frame: frame.clone(), d, r, a_tilde, particular: pinv, null_basis })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn unknown_count(&self) -> usize {
        2 * self.d * self.r
    }

    /// The shared d x 2r real constraint matrix applied to each parameter's
    /// coefficient vector (Re u_k1, Im u_k1, ..., Re u_kr, Im u_kr).
    pub fn constraint_matrix(&self) -> &DMatrix<f64> {
        &self.a_tilde
    }

    pub fn constraint_count(&self) -> usize {
        self.d * self.d
    }

    /// Dimension of the feasible affine set.
    pub fn null_dim(&self) -> usize {
        self.d * self.null_basis.ncols()
    }

    fn n0(&self) -> usize {
        self.null_basis.ncols()
    }

    /// u matrix for reduced coordinates y (n0 x d, column k for parameter k).
    fn u_from_reduced(&self, y: &DMatrix<f64>) -> DMatrix<C64> {
        let mut u = DMatrix::from_element(self.d, self.r, C64::new(0.0, 0.0));
        for k in 0..self.d {
            let x_k = if self.n0() == 0 {
                self.particular.column(k).into_owned()
            } else {
                self.particular.column(k) + &self.null_basis * y.column(k)
            };
            for m in 0..self.r {
                u[(k, m)] = C64::new(x_k[2 * m], x_k[2 * m + 1]);
            }
        }
        u
    }

    /// Max violation of 2 Re sum_m conj(A_jm) u_km = delta_jk, evaluated from
    /// the frame coefficients directly.
    pub fn residual(&self, u: &DMatrix<C64>) -> f64 {
        let a = self.frame.coefficients();
        let mut worst = 0.0f64;
        for k in 0..self.d {
            for j in 1..=self.d {
                let mut acc = C64::new(0.0, 0.0);
                for m in 1..=self.r {
                    acc += a[(j, m)].conj() * u[(k, m - 1)];
                }
                let want = if j - 1 == k { 1.0 } else { 0.0 };
                worst = worst.max((2.0 * acc.re - want).abs());
            }
        }
        worst
    }

    fn objective(&self, y: &DMatrix<f64>) -> f64 {
        let u = self.u_from_reduced(y);
        let z = &u * u.adjoint();
        holevo_objective(&z)
    }

    /// Euclidean subgradient of the objective in reduced coordinates.
    fn subgradient(&self, y: &DMatrix<f64>) -> DMatrix<f64> {
        let u = self.u_from_reduced(y);
        let z = &u * u.adjoint();
        let b = z.map(|v| v.im);
        let w = polar_antisym(&b);
        // grad_U = 2 (I + iW) U; map to (p, q) slots then contract with N.
        let wu = w.map(|x| C64::new(x, 0.0)) * &u;
        let mut g = DMatrix::zeros(self.n0(), self.d);
        for k in 0..self.d {
            let mut gx = DVector::zeros(2 * self.r);
            for m in 0..self.r {
                let hu = u[(k, m)] + C64::new(0.0, 1.0) * wu[(k, m)];
                gx[2 * m] = 2.0 * hu.re;
                gx[2 * m + 1] = 2.0 * hu.im;
            }
            g.set_column(k, &(self.null_basis.transpose() * gx));
        }
        g
    }

    /// Exact minimizer of Tr(U^dag (I + iW) U) over the feasible set.
    /// Returns (y, value); the value is a valid lower bound on the HCRB for
    /// any admissible W (real antisymmetric, operator norm <= 1).
    fn kkt_solve(&self, w: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
        let (d, r, n0) = (self.d, self.r, self.n0());
        let dim = 2 * d * r;
        let idx = |k: usize, m: usize, q_part: usize| k * 2 * r + 2 * m + q_part;

        // Quadratic form M: per basis column m, [[I, -W], [W, I]] across
        // parameter indices.
        let mut mq = DMatrix::zeros(dim, dim);
        for m in 0..r {
            for k in 0..d {
                mq[(idx(k, m, 0), idx(k, m, 0))] = 1.0;
                mq[(idx(k, m, 1), idx(k, m, 1))] = 1.0;
                for k2 in 0..d {
                    if w[(k, k2)] != 0.0 {
                        mq[(idx(k, m, 0), idx(k2, m, 1))] = -w[(k, k2)];
                        mq[(idx(k, m, 1), idx(k2, m, 0))] = w[(k, k2)];
                    }
                }
            }
        }

        let mut x0 = DVector::zeros(dim);
        for k in 0..d {
            for s in 0..2 * r {
                x0[idx(k, s / 2, s % 2)] = self.particular[(s, k)];
            }
        }

        if n0 == 0 {
            let val = (x0.transpose() * &mq * &x0)[(0, 0)];
            return (DMatrix::zeros(0, d), val);
        }

        let mut n_full = DMatrix::zeros(dim, d * n0);
        for k in 0..d {
            for s in 0..2 * r {
                for c in 0..n0 {
                    n_full[(idx(k, s / 2, s % 2), k * n0 + c)] = self.null_basis[(s, c)];
                }
            }
        }

        let m_red = n_full.transpose() * &mq * &n_full;
        let b = n_full.transpose() * &mq * &x0;
        let y_flat = m_red
            .svd(true, true)
            .solve(&(-b), 1e-12)
            .unwrap_or_else(|_| DVector::zeros(d * n0));
        let x = &x0 + &n_full * &y_flat;
        let val = (x.transpose() * &mq * &x)[(0, 0)];

        let mut y = DMatrix::zeros(n0, d);
        for k in 0..d {
            for c in 0..n0 {
                y[(c, k)] = y_flat[k * n0 + c];
            }
        }
        (y, val)
    }
}

/// h = Tr Re Z + TrAbs Im Z for a Hermitian Z.
pub fn holevo_objective(z: &DMatrix<C64>) -> f64 {
    let tr_re: f64 = (0..z.nrows()).map(|j| z[(j, j)].re).sum();
    let b = z.map(|v| v.im);
    tr_re + nuclear_norm_antisym(&b)
}

/// Sum of singular values of a real antisymmetric matrix.
fn nuclear_norm_antisym(b: &DMatrix<f64>) -> f64 {
    if b.amax() == 0.0 {
        return 0.0;
    }
    let btb = b.transpose() * b;
    btb.symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum()
}

/// Antisymmetric polar factor of B: the maximizer of <W, B> over real
/// antisymmetric W with operator norm <= 1.
fn polar_antisym(b: &DMatrix<f64>) -> DMatrix<f64> {
    let n = b.nrows();
    if b.amax() < 1e-300 {
        return DMatrix::zeros(n, n);
    }
    let svd = b.clone().svd(true, true);
    let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
    let w = u * v_t;
    let mut w = (&w - w.transpose()) * 0.5;
    // Guard against round-off pushing the operator norm over 1.
    let smax = w.singular_values().max();
    if smax > 1.0 {
        w /= smax;
    }
    w
}

/// Frobenius projection of a real antisymmetric matrix onto the unit
/// operator-norm ball: clip the singular values at 1.
fn clip_opnorm_antisym(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    if a.amax() < 1e-300 {
        return DMatrix::zeros(n, n);
    }
    let svd = a.clone().svd(true, true);
    let (u, v_t) = (svd.u.unwrap(), svd.v_t.unwrap());
    let clipped = DVector::from_iterator(n, svd.singular_values.iter().map(|&s| s.min(1.0)));
    let w = u * DMatrix::from_diagonal(&clipped) * v_t;
    let mut w = (&w - w.transpose()) * 0.5;
    let smax = w.singular_values().max();
    if smax > 1.0 {
        w /= smax;
    }
    w
}

/// Minimizes the Holevo objective over locally unbiased tuples.
pub fn hcrb_pure(frame: &OrthonormalFrame, opts: &HcrbOpts) -> Result<HcrbSolution> {
    let problem = hcrb_constraints(frame)?;
    let d = problem.d();

    if problem.null_dim() == 0 {
        // Constraints are square and nonsingular: the tuple is unique.
        let y = DMatrix::zeros(0, d);
        let u = problem.u_from_reduced(&y);
        let z = &u * u.adjoint();
        let value = holevo_objective(&z);
        let residual = problem.residual(&u);
        return Ok(HcrbSolution {
            value,
            u,
            z,
            residual,
            spread: 0.0,
            status: HcrbStatus::Exact,
            lower_bound_gap: Some(0.0),
        });
    }

    let n0 = problem.n0();
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);
    let base_scale = {
        let mut s = 0.0f64;
        for k in 0..d {
            s += problem.particular.column(k).norm_squared();
        }
        (1.0 + s.sqrt()) * 0.5
    };

    let mut finals: Vec<(f64, DMatrix<f64>)> = Vec::with_capacity(opts.starts);
    let mut best_dual = f64::NEG_INFINITY;
    for start in 0..opts.starts.max(1) {
        let y0 = if start == 0 {
            // Minimum-norm / SLD start.
            DMatrix::zeros(n0, d)
        } else {
            let spread = base_scale * [0.2, 0.5, 1.0, 2.0][start % 4];
            DMatrix::from_fn(n0, d, |_, _| rng.random_range(-spread..spread))
        };
        let (y, value, dual) = optimize_from(&problem, y0, opts);
        best_dual = best_dual.max(dual);
        finals.push((value, y));
    }

    finals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut f_best = finals[0].0;
    let mut best_y = finals[0].1.clone();
    let spread = finals.last().unwrap().0 - f_best;

    // Dual refinement. g(W) = min over the feasible set of the W-linearized
    // objective is concave with supergradient Im Z at the inner minimizer, and
    // strong duality holds (Sion: affine set vs compact ball), so Polyak
    // ascent with the primal value as target closes the certificate gap. Each
    // exact inner solve is also a feasible primal candidate, so both sides
    // tighten together.
    let mut w = {
        let u = problem.u_from_reduced(&best_y);
        let z = &u * u.adjoint();
        polar_antisym(&z.map(|v| v.im))
    };
    for _ in 0..opts.dual_ascent_iters {
        let (y_w, g_w) = problem.kkt_solve(&w);
        best_dual = best_dual.max(g_w);
        let f_w = problem.objective(&y_w);
        if f_w < f_best {
            f_best = f_w;
            best_y = y_w.clone();
        }
        if best_dual >= f_best - 1e-13 * (1.0 + f_best.abs()) {
            break;
        }
        let u = problem.u_from_reduced(&y_w);
        let z = &u * u.adjoint();
        let b = z.map(|v| v.im);
        let bn2 = b.norm_squared();
        if bn2 < 1e-28 {
            break;
        }
        let step = (f_best - g_w).max(0.0) / bn2;
        w = clip_opnorm_antisym(&(&w + b * step));
    }

    let u = problem.u_from_reduced(&best_y);
    let z = &u * u.adjoint();
    let value = holevo_objective(&z);
    let residual = problem.residual(&u);
    let lower_bound_gap = if best_dual.is_finite() {
        Some((value - best_dual).max(0.0))
    } else {
        None
    };
    let agreed = spread <= opts.spread_tol * (1.0 + value.abs());
    let certified =
        lower_bound_gap.is_some_and(|gap| gap <= opts.spread_tol * (1.0 + value.abs()));
    let status = if residual <= opts.residual_tol && (agreed || certified) {
        HcrbStatus::Converged
    } else {
        HcrbStatus::Stalled
    };
    Ok(HcrbSolution { value, u, z, residual, spread, status, lower_bound_gap })
}

/// One full local solve: dual fixed-point passes, subgradient descent,
/// Nelder-Mead polish. Returns (y, value, best dual lower bound seen).
fn optimize_from(
    problem: &HcrbProblem,
    y0: DMatrix<f64>,
    opts: &HcrbOpts,
) -> (DMatrix<f64>, f64, f64) {
    let mut y_best = y0;
    let mut f_best = problem.objective(&y_best);
    let mut dual_best = f64::NEG_INFINITY;

    // Dual fixed-point: at the current point, take the active W and jump to
    // the exact minimizer of the W-linearized objective. Each solve also
    // yields a weak-duality lower bound. Odd rounds use the Cesaro average of
    // the dual iterates, which settles even when the raw fixed point cycles.
    let mut w_sum = DMatrix::zeros(problem.d(), problem.d());
    for round in 0..opts.alternation_rounds {
        let u = problem.u_from_reduced(&y_best);
        let z = &u * u.adjoint();
        let b = z.map(|v| v.im);
        let w = polar_antisym(&b);
        w_sum += &w;

        let w_try = if round % 2 == 0 {
            w
        } else {
            let mut wt = &w_sum / (round as f64 + 1.0);
            let smax = wt.singular_values().max();
            if smax > 1.0 {
                wt /= smax;
            }
            wt
        };

        let (y_new, dual_val) = problem.kkt_solve(&w_try);
        dual_best = dual_best.max(dual_val);
        let f_new = problem.objective(&y_new);
        if f_new < f_best - 1e-15 {
            f_best = f_new;
            y_best = y_new;
        } else if dual_best >= f_best - 1e-12 * (1.0 + f_best.abs()) {
            break; // certified optimal
        }
    }

    // Polyak-style subgradient descent with geometrically decaying target gap.
    let mut y = y_best.clone();
    let mut f_y = f_best;
    let delta0 = 0.05 * (1.0 + f_best.abs());
    for t in 0..opts.subgradient_iters {
        if dual_best >= f_best - 1e-12 * (1.0 + f_best.abs()) {
            break;
        }
        let g = problem.subgradient(&y);
        let gnorm2 = g.norm_squared();
        if gnorm2 < 1e-28 {
            break;
        }
        let delta = delta0 * (0.99f64).powi(t as i32);
        let step = ((f_y - f_best) + delta) / gnorm2;
        y -= g * step;
        f_y = problem.objective(&y);
        if f_y < f_best {
            f_best = f_y;
            y_best = y.clone();
        }
    }

    // Nelder-Mead polish in the flattened reduced coordinates.
    let (n0, d) = (problem.n0(), problem.d());
    let dim = n0 * d;
    if dim > 0 && opts.polish_evals > 0 {
        let flat = |y: &DMatrix<f64>| -> Vec<f64> { y.as_slice().to_vec() };
        let unflat = |v: &[f64]| -> DMatrix<f64> { DMatrix::from_column_slice(n0, d, v) };
        let eval = |v: &[f64]| problem.objective(&unflat(v));
        for scale in [1e-1, 1e-3] {
            let start = flat(&y_best);
            let (v, f_v) = nelder_mead(&eval, &start, scale * (1.0 + f_best.abs()), opts.polish_evals / 2);
            if f_v < f_best {
                f_best = f_v;
                y_best = unflat(&v);
            }
        }
    }

    // Final certificate at the (near-)optimal dual variable.
    let u = problem.u_from_reduced(&y_best);
    let z = &u * u.adjoint();
    let w = polar_antisym(&z.map(|v| v.im));
    let (_, dual_val) = problem.kkt_solve(&w);
    dual_best = dual_best.max(dual_val);

    (y_best, f_best, dual_best)
}

/// Standard Nelder-Mead with adaptive simplex, returning the best vertex.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    scale: f64,
    max_evals: usize,
) -> (Vec<f64>, f64) {
    let n = start.len();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut evals = 0usize;
    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    simplex.push((eval(start, &mut evals), start.to_vec()));
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += scale.max(1e-8);
        simplex.push((eval(&v, &mut evals), v));
    }

    while evals < max_evals {
        simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let f_spread = simplex[n].0 - simplex[0].0;
        if f_spread <= 1e-13 * (1.0 + simplex[0].0.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(_, v)| v[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect: Vec<f64> = (0..n)
            .map(|i| centroid[i] + alpha * (centroid[i] - worst.1[i]))
            .collect();
        let f_r = eval(&reflect, &mut evals);

        if f_r < simplex[0].0 {
            let expand: Vec<f64> = (0..n)
                .map(|i| centroid[i] + gamma * (reflect[i] - centroid[i]))
                .collect();
            let f_e = eval(&expand, &mut evals);
            simplex[n] = if f_e < f_r { (f_e, expand) } else { (f_r, reflect) };
        } else if f_r < simplex[n - 1].0 {
            simplex[n] = (f_r, reflect);
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|i| centroid[i] + rho * (worst.1[i] - centroid[i]))
                .collect();
            let f_c = eval(&contract, &mut evals);
            if f_c < worst.0 {
                simplex[n] = (f_c, contract);
            } else {
                let best = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = (0..n)
                        .map(|i| best[i] + sigma * (entry.1[i] - best[i]))
                        .collect();
                    *entry = (eval(&shrunk, &mut evals), shrunk);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (f_best, v_best) = simplex.swap_remove(0);
    (v_best, f_best)
}
