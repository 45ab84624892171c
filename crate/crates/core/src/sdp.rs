//! A small dense SDP solver and the slice program pair.
//!
//! [`solve_sdp`] minimizes `⟨C, X⟩` subject to `⟨Aᵢ, X⟩ = bᵢ`, `X ⪰ 0` by
//! following the central path of the log-det barrier with damped Newton
//! steps from a possibly infeasible start. Intended for `n ≤ 30` and a
//! handful of constraints.
//!
//! [`solve_slice_pair`] solves
//!
//! ```text
//! min ⟨C, X⟩  s.t.  ⟨J, X⟩ = 0,  tr X = 1,  X ⪰ 0
//! ```
//!
//! and rewrites the optimum as `Σ ppᵀ` with `p ∈ ∂L`, so the completely
//! positive program over `L` attains the same value.

use crate::error::{Error, Result};
use crate::linalg::{
    backward_substitute, cholesky, dot, forward_substitute, frobenius_inner, is_psd, lambda_min,
    Matrix, SymmetricMatrix,
};
use crate::rank1::{j_balanced_decompose, Rank1Certificate};

/// Residual above which the problem is reported infeasible after the
/// first centering stage.
pub const INFEASIBLE_RESIDUAL: f64 = 1e-7;
/// Objective below which the problem is reported unbounded.
pub const UNBOUNDED_OBJECTIVE: f64 = -1e12;
/// Tolerance on KKT residuals for an `Optimal` status.
pub const KKT_TOL: f64 = 1e-7;
const DEPENDENCE_REL: f64 = 1e-10;
const FEASIBILITY_REL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub c: SymmetricMatrix,
    pub constraints: Vec<(SymmetricMatrix, f64)>,
}

impl SdpProblem {
    pub fn new(c: SymmetricMatrix, constraints: Vec<(SymmetricMatrix, f64)>) -> Result<Self> {
        let n = c.dim();
        if n == 0 {
            return Err(Error::DimensionTooSmall { n, min: 1 });
        }
        for (a, b) in &constraints {
            if a.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: a.dim(),
                });
            }
            if !b.is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(Self { c, constraints })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    fn rhs(&self) -> Vec<f64> {
        self.constraints.iter().map(|(_, b)| *b).collect()
    }

    /// `1 + ‖C‖_F + ‖b‖`.
    pub fn scale(&self) -> f64 {
        1.0 + self.c.frobenius_norm() + dot(&self.rhs(), &self.rhs()).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
}

impl SdpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SdpStatus::Optimal => "optimal",
            SdpStatus::Infeasible => "infeasible",
            SdpStatus::Unbounded => "unbounded",
            SdpStatus::MaxIter => "max_iter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KktResiduals {
    /// `‖A(X) − b‖₂`.
    pub primal: f64,
    /// `max(0, −λ_min(C − Aᵀy))`.
    pub dual: f64,
    /// `|⟨C, X⟩ − bᵀy|`.
    pub gap: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.gap)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub x: SymmetricMatrix,
    /// Multipliers, one per constraint (zero for pruned constraints).
    pub y: Vec<f64>,
    pub objective: f64,
    pub dual_objective: f64,
    pub status: SdpStatus,
    pub kkt_residuals: KktResiduals,
    /// Total Newton steps.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    pub mu_initial: f64,
    pub mu_final: f64,
    pub mu_factor: f64,
    /// Stop centering once `λ²/2` falls below this, `λ` the Newton decrement.
    pub newton_tol: f64,
    pub max_newton_steps: usize,
    pub regularization: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            mu_initial: 1.0,
            mu_final: 1e-9,
            mu_factor: 0.1,
            newton_tol: 1e-10,
            max_newton_steps: 200,
            regularization: 1e-12,
        }
    }
}

/// Residuals recomputed from scratch for any `(X, y)`.
pub fn kkt_residuals(prob: &SdpProblem, x: &SymmetricMatrix, y: &[f64]) -> Result<KktResiduals> {
    if y.len() != prob.constraints.len() {
        return Err(Error::DimensionMismatch {
            expected: prob.constraints.len(),
            got: y.len(),
        });
    }
    let mut primal = 0.0;
    let mut slack = prob.c.as_matrix().clone();
    for ((a, b), &yi) in prob.constraints.iter().zip(y) {
        let r = frobenius_inner(a, x)? - b;
        primal += r * r;
        slack = &slack - &a.scale(yi);
    }
    let slack = SymmetricMatrix::symmetric_part(&slack);
    let objective = frobenius_inner(&prob.c, x)?;
    Ok(KktResiduals {
        primal: primal.sqrt(),
        dual: (-lambda_min(&slack)?).max(0.0),
        gap: (objective - dot(&prob.rhs(), y)).abs(),
    })
}

/// Independently checks feasibility, dual feasibility, the duality gap and
/// `X ⪰ 0`, each at `tol·(1 + ‖C‖_F + ‖b‖)`.
pub fn verify_kkt(prob: &SdpProblem, sol: &SdpSolution, tol: f64) -> bool {
    let band = tol * prob.scale();
    match (kkt_residuals(prob, &sol.x, &sol.y), is_psd(&sol.x, tol)) {
        (Ok(k), Ok(psd)) => psd && k.primal <= band && k.dual <= band && k.gap <= band,
        _ => false,
    }
}

/// Indices of a maximal linearly independent subset of the constraint
/// matrices, by Gram–Schmidt in the Frobenius inner product.
fn independent_constraints(prob: &SdpProblem) -> Vec<usize> {
    let mut basis: Vec<Matrix> = Vec::new();
    let mut keep = Vec::new();
    for (k, (a, _)) in prob.constraints.iter().enumerate() {
        let mut v = a.as_matrix().clone();
        for e in &basis {
            let d = frobenius_inner(&v, e).unwrap_or(0.0);
            v = &v - &e.scale(d);
        }
        let norm = v.frobenius_norm();
        if norm > DEPENDENCE_REL * (1.0 + a.frobenius_norm()) {
            basis.push(v.scale(1.0 / norm));
            keep.push(k);
        } else {
            log::warn!("dropping linearly dependent constraint {k}");
        }
    }
    keep
}

/// Solves `(G + εI) z = r` by Cholesky.
fn solve_spd(g: &Matrix, r: &[f64], regularization: f64) -> Result<Vec<f64>> {
    let m = g.dim();
    if m == 0 {
        return Ok(vec![]);
    }
    let shift = regularization * (1.0 + g.trace().abs() / m as f64);
    let reg = SymmetricMatrix::symmetric_part(&(g + &Matrix::identity(m).scale(shift)));
    let l = cholesky(&reg)
        .ok_or_else(|| Error::LinearAlgebraFailure("singular Newton system".into()))?;
    Ok(backward_substitute(&l, &forward_substitute(&l, r)))
}

/// Least-squares projection of `I` onto the affine constraints when that
/// is positive definite, `I` otherwise.
fn initial_point(a: &[&SymmetricMatrix], b: &[f64], n: usize, reg: f64) -> Result<SymmetricMatrix> {
    let eye = SymmetricMatrix::identity(n);
    let m = a.len();
    if m == 0 {
        return Ok(eye);
    }
    let mut g = Matrix::zeros(m);
    for i in 0..m {
        for j in 0..m {
            g[(i, j)] = frobenius_inner(a[i], a[j])?;
        }
    }
    let r: Vec<f64> = (0..m).map(|i| b[i] - a[i].trace()).collect();
    let z = solve_spd(&g, &r, reg)?;
    let mut x = eye.as_matrix().clone();
    for (ai, zi) in a.iter().zip(&z) {
        x = &x + &ai.scale(*zi);
    }
    let x = SymmetricMatrix::symmetric_part(&x);
    Ok(if cholesky(&x).is_some() { x } else { eye })
}

struct NewtonStep {
    dx: SymmetricMatrix,
    y: Vec<f64>,
    decrement: f64,
}

/// Newton step for `min ⟨C, X⟩ − μ log det X` s.t. `A(X) = b`.
///
/// Works in the coordinates `V = L⁻¹ΔX L⁻ᵀ` for `X = LLᵀ` and around the
/// current dual estimate `y`, so that `S = C − Aᵀy` stays comparable to
/// `μX⁻¹` and the Schur matrix is a Gram matrix of `LᵀAᵢL`.
fn newton_step(
    c: &SymmetricMatrix,
    a: &[&SymmetricMatrix],
    b: &[f64],
    x: &SymmetricMatrix,
    y: &[f64],
    mu: f64,
    reg: f64,
) -> Result<NewtonStep> {
    let m = a.len();
    let l = cholesky(x)
        .ok_or_else(|| Error::LinearAlgebraFailure("iterate lost positive definiteness".into()))?;
    let mut s = c.as_matrix().clone();
    for (ai, yi) in a.iter().zip(y) {
        s = &s - &ai.scale(*yi);
    }
    let s_w = SymmetricMatrix::symmetric_part(&s).congruence(&l);
    let a_w: Vec<SymmetricMatrix> = a.iter().map(|ai| ai.congruence(&l)).collect();
    let mut g = Matrix::zeros(m);
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            g[(i, j)] = frobenius_inner(&a_w[i], &a_w[j])?;
        }
        let ax = a_w[i].trace();
        rhs[i] = (b[i] - ax) + frobenius_inner(&a_w[i], &s_w)? / mu - ax;
    }
    let dnu = solve_spd(&g, &rhs, reg)?;
    let mut v = &Matrix::identity(x.dim()) - &s_w.scale(1.0 / mu);
    for (aj, dj) in a_w.iter().zip(&dnu) {
        v = &v + &aj.scale(*dj);
    }
    let v = SymmetricMatrix::symmetric_part(&v);
    let y_new = y.iter().zip(&dnu).map(|(yi, di)| yi + mu * di).collect();
    Ok(NewtonStep {
        decrement: v.frobenius_norm(),
        dx: v.congruence(&l.transpose()),
        y: y_new,
    })
}

fn active_residual(a: &[&SymmetricMatrix], b: &[f64], x: &SymmetricMatrix) -> Result<f64> {
    let mut s = 0.0;
    for (ai, bi) in a.iter().zip(b) {
        let r = frobenius_inner(ai, x)? - bi;
        s += r * r;
    }
    Ok(s.sqrt())
}

/// Minimizes `⟨C, X⟩` over `{X ⪰ 0 : ⟨Aᵢ, X⟩ = bᵢ}`.
///
/// Linearly dependent constraints are dropped with a warning; if they were
/// inconsistent the problem comes back `Infeasible`.
pub fn solve_sdp(prob: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    let n = prob.dim();
    let keep = independent_constraints(prob);
    let a: Vec<&SymmetricMatrix> = keep.iter().map(|&k| &prob.constraints[k].0).collect();
    let b: Vec<f64> = keep.iter().map(|&k| prob.constraints[k].1).collect();
    let b_scale = 1.0 + dot(&prob.rhs(), &prob.rhs()).sqrt();

    let mut x = initial_point(&a, &b, n, opts.regularization)?;
    let mut y = vec![0.0; a.len()];
    let mut mu = opts.mu_initial;
    let mut iterations = 0;
    let mut status = SdpStatus::Optimal;

    let finish = |x: SymmetricMatrix, y_active: &[f64], status: SdpStatus, iterations: usize| {
        let mut y = vec![0.0; prob.constraints.len()];
        for (k, v) in keep.iter().zip(y_active) {
            y[*k] = *v;
        }
        let kkt = kkt_residuals(prob, &x, &y)?;
        let objective = frobenius_inner(&prob.c, &x)?;
        let status = if status == SdpStatus::Optimal && kkt.max() > KKT_TOL * prob.scale() {
            SdpStatus::MaxIter
        } else {
            status
        };
        Ok(SdpSolution {
            objective,
            dual_objective: dot(&prob.rhs(), &y),
            x,
            y,
            status,
            kkt_residuals: kkt,
            iterations,
        })
    };

    for stage in 0.. {
        let mut centered = false;
        for _ in 0..opts.max_newton_steps {
            iterations += 1;
            let step = newton_step(&prob.c, &a, &b, &x, &y, mu, opts.regularization)?;
            let decrement = step.decrement;
            let mut t = if decrement < 0.25 { 1.0 } else { 1.0 / (1.0 + decrement) };
            let next = loop {
                let cand = &x + &step.dx.scale(t);
                if cholesky(&cand).is_some() {
                    break cand;
                }
                t *= 0.5;
                if t < 1e-20 {
                    return Err(Error::LinearAlgebraFailure("no positive definite step".into()));
                }
            };
            x = next;
            y = step.y;
            if frobenius_inner(&prob.c, &x)? < UNBOUNDED_OBJECTIVE {
                return finish(x, &y, SdpStatus::Unbounded, iterations);
            }
            if 0.5 * decrement * decrement <= opts.newton_tol
                && active_residual(&a, &b, &x)? <= FEASIBILITY_REL * b_scale
            {
                centered = true;
                break;
            }
        }
        if stage == 0 {
            let full = kkt_residuals(prob, &x, &vec![0.0; prob.constraints.len()])?.primal;
            if full > INFEASIBLE_RESIDUAL * b_scale {
                return finish(x, &y, SdpStatus::Infeasible, iterations);
            }
        }
        if !centered {
            status = SdpStatus::MaxIter;
            break;
        }
        if mu <= opts.mu_final * (1.0 + 1e-12) {
            break;
        }
        mu = (mu * opts.mu_factor).max(opts.mu_final);
    }
    finish(x, &y, status, iterations)
}

/// `min ⟨C, X⟩` over `⟨J, X⟩ = 0`, `tr X = 1`, `X ⪰ 0`.
pub fn slice_problem(c: &SymmetricMatrix) -> Result<SdpProblem> {
    let n = c.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    SdpProblem::new(
        c.clone(),
        vec![
            (SymmetricMatrix::reflection(n), 0.0),
            (SymmetricMatrix::identity(n), 1.0),
        ],
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlicePair {
    pub sdp_value: f64,
    pub solution: SdpSolution,
    /// Boundary atoms summing to the SDP optimum: a feasible point of the
    /// completely positive program.
    pub cp_certificate: Rank1Certificate,
    /// `|⟨C, Σ ppᵀ⟩ − sdp_value|`.
    pub gap: f64,
}

/// Solves the normalized slice SDP and certifies its optimum as a sum of
/// boundary atoms.
pub fn solve_slice_pair(c: &SymmetricMatrix, tol: f64) -> Result<SlicePair> {
    let prob = slice_problem(c)?;
    let solution = solve_sdp(&prob, &SdpOptions::default())?;
    if solution.status != SdpStatus::Optimal {
        return Err(Error::ConvergenceFailure {
            what: "slice SDP",
            iterations: solution.iterations,
        });
    }
    let cp_certificate = j_balanced_decompose(&solution.x, tol)?;
    let gap = (frobenius_inner(&prob.c, &cp_certificate.reconstruct())? - solution.objective).abs();
    Ok(SlicePair {
        sdp_value: solution.objective,
        solution,
        cp_certificate,
        gap,
    })
}
