//! Membership oracles for the copositive cones of `L` and of `∂L`.
//!
//! Each cone is tested twice, by independent routes:
//!
//! * a line search on the concave profile `μ ↦ λ_min(X − μJ)`: `X` is
//!   copositive on `L` iff `X − μJ ⪰ 0` for some `μ ≥ 0`, and copositive on
//!   `∂L` iff the same holds for some real `μ`;
//! * a direct minimization of `xᵀXx` over unit vectors of `∂L` (and of `L`)
//!   through the sphere QP solver.
//!
//! The line search decides membership; the direct minimum decides strictness
//! and is cross-checked against the line search.

use crate::error::{Error, Result};
use crate::linalg::{eigh, lambda_max, lambda_min, Matrix, SymmetricMatrix};
use crate::lorentz::j_form;
use crate::search::golden_section_max;
use crate::sphere_qp::min_on_sphere;
use crate::AGREEMENT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CopositiveCone {
    /// The Lorentz cone `L`.
    Lorentz,
    /// Its boundary `∂L`.
    Boundary,
}

impl CopositiveCone {
    pub fn as_str(self) -> &'static str {
        match self {
            CopositiveCone::Lorentz => "L",
            CopositiveCone::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CopositivityVerdict {
    pub cone: CopositiveCone,
    pub member: bool,
    pub strict: bool,
    /// Best `μ` found by the line search: `X − μJ` is PSD at tolerance when
    /// `member` holds.
    pub mu_witness: f64,
    /// `λ_min(X − μ_witness·J)`.
    pub lambda_min_at_witness: f64,
    /// Minimum of `xᵀXx` over unit vectors of `∂L`.
    pub min_quadratic_value: f64,
    /// Minimum of `xᵀXx` over unit vectors of the tested cone (equal to
    /// `min_quadratic_value` for `∂L`).
    pub min_over_cone: f64,
}

/// `λ_min(X − μJ)`, a concave function of `μ`.
pub fn lambda_min_profile(x: &SymmetricMatrix, mu: f64) -> Result<f64> {
    lambda_min(&x.add_reflection(-mu))
}

/// Minimum of `xᵀXx` over unit `x ∈ ∂L` and a minimizer. Uses the
/// parameterization `x = (1, u)/√2`, `‖u‖ = 1`.
pub fn boundary_quadratic_min(x: &SymmetricMatrix) -> Result<(f64, Vec<f64>)> {
    let n = check_dim(x)?;
    let (head, tail_col, block) = split_head(x);
    let r = min_on_sphere(&block, &tail_col)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let point = std::iter::once(s)
        .chain(r.maximizer.iter().map(|v| v * s))
        .collect::<Vec<_>>();
    debug_assert_eq!(point.len(), n);
    Ok((0.5 * (head + r.value), point))
}

/// Minimum of `xᵀXx` over unit `x ∈ L`: the boundary minimum, or the
/// smallest eigenvalue whose eigenspace reaches the interior of `L`.
pub fn cone_quadratic_min(x: &SymmetricMatrix) -> Result<f64> {
    let (boundary_min, _) = boundary_quadratic_min(x)?;
    let n = x.dim();
    let eig = eigh(x)?;
    let cluster = 1e-10 * (1.0 + x.frobenius_norm());
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig.values[end] - eig.values[end - 1] <= cluster {
            end += 1;
        }
        let value = eig.values[start];
        if value >= boundary_min {
            break;
        }
        if eigenspace_meets_interior(&eig.vectors, start..end)? {
            return Ok(value);
        }
        start = end;
    }
    Ok(boundary_min)
}

/// Whether `span{v_k : k ∈ cols}` contains a point of `int L` (up to sign),
/// i.e. whether `J` restricted to it has a positive eigenvalue.
fn eigenspace_meets_interior(v: &Matrix, cols: std::ops::Range<usize>) -> Result<bool> {
    let basis: Vec<Vec<f64>> = cols.map(|k| v.column(k)).collect();
    if basis.len() == 1 {
        return Ok(j_form(&basis[0]) > 0.0);
    }
    let k = basis.len();
    let mut gram = Matrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            let bi = &basis[i];
            let bj = &basis[j];
            gram[(i, j)] = bi[0] * bj[0] - (1..bi.len()).map(|t| bi[t] * bj[t]).sum::<f64>();
        }
    }
    Ok(lambda_max(&SymmetricMatrix::symmetric_part(&gram))? > 0.0)
}

/// Copositivity on `L`: `X − μJ ⪰ 0` for some `μ ≥ 0`.
pub fn is_copositive_on_l(x: &SymmetricMatrix, tol: f64) -> Result<CopositivityVerdict> {
    check_dim(x)?;
    let band = tol * (1.0 + x.frobenius_norm());
    let (lo, hi) = mu_bracket(x, band);
    let search = line_search(x, lo.max(0.0), hi)?;
    let (boundary_min, _) = boundary_quadratic_min(x)?;
    let cone_min = cone_quadratic_min(x)?;
    let member = search.is_some_and(|(_, v)| v >= -band);
    check_agreement(x, tol, member, cone_min, "copositivity on L")?;
    let (mu_witness, lambda_min_at_witness) = match search {
        Some(found) => found,
        None => (0.0, lambda_min_profile(x, 0.0)?),
    };
    Ok(CopositivityVerdict {
        cone: CopositiveCone::Lorentz,
        member,
        strict: member && cone_min > band,
        mu_witness,
        lambda_min_at_witness,
        min_quadratic_value: boundary_min,
        min_over_cone: cone_min,
    })
}

/// Copositivity on `∂L`: `X − μJ ⪰ 0` for some real `μ`.
pub fn is_copositive_on_boundary(x: &SymmetricMatrix, tol: f64) -> Result<CopositivityVerdict> {
    check_dim(x)?;
    let band = tol * (1.0 + x.frobenius_norm());
    let (lo, hi) = mu_bracket(x, band);
    let search = line_search(x, lo, hi)?;
    let (boundary_min, _) = boundary_quadratic_min(x)?;
    let member = search.is_some_and(|(_, v)| v >= -band);
    check_agreement(x, tol, member, boundary_min, "copositivity on the boundary")?;
    let (mu_witness, lambda_min_at_witness) = match search {
        Some(found) => found,
        None => (x[(0, 0)], lambda_min_profile(x, x[(0, 0)])?),
    };
    Ok(CopositivityVerdict {
        cone: CopositiveCone::Boundary,
        member,
        strict: member && boundary_min > band,
        mu_witness,
        lambda_min_at_witness,
        min_quadratic_value: boundary_min,
        min_over_cone: boundary_min,
    })
}

pub fn is_copositive(
    x: &SymmetricMatrix,
    cone: CopositiveCone,
    tol: f64,
) -> Result<CopositivityVerdict> {
    match cone {
        CopositiveCone::Lorentz => is_copositive_on_l(x, tol),
        CopositiveCone::Boundary => is_copositive_on_boundary(x, tol),
    }
}

fn check_dim(x: &SymmetricMatrix) -> Result<usize> {
    let n = x.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    Ok(n)
}

/// `(X₀₀, X[1.., 0], X[1.., 1..])`.
pub(crate) fn split_head(x: &SymmetricMatrix) -> (f64, Vec<f64>, SymmetricMatrix) {
    let n = x.dim();
    let tail_col = (1..n).map(|i| x[(i, 0)]).collect();
    let mut block = Vec::with_capacity((n - 1) * (n - 1));
    for i in 1..n {
        block.extend_from_slice(&x.row(i)[1..]);
    }
    let block = SymmetricMatrix::symmetric_part(&Matrix::from_vec_unchecked(n - 1, block));
    (x[(0, 0)], tail_col, block)
}

/// PSD-ness of `X − μJ` needs a nonnegative diagonal:
/// `X₀₀ − μ ≥ 0` and `Xᵢᵢ + μ ≥ 0` for `i ≥ 1`.
fn mu_bracket(x: &SymmetricMatrix, band: f64) -> (f64, f64) {
    let n = x.dim();
    let min_tail = (1..n).map(|i| x[(i, i)]).fold(f64::INFINITY, f64::min);
    (-min_tail - band, x[(0, 0)] + band)
}

fn line_search(x: &SymmetricMatrix, lo: f64, hi: f64) -> Result<Option<(f64, f64)>> {
    if lo > hi {
        return Ok(None);
    }
    golden_section_max(|mu| lambda_min_profile(x, mu), lo, hi).map(Some)
}

/// The line-search verdict must match the sign of the direct minimum
/// outside a band of `max(tol, AGREEMENT_TOL)·(1 + ‖X‖_F)`.
fn check_agreement(
    x: &SymmetricMatrix,
    tol: f64,
    member: bool,
    direct_min: f64,
    what: &str,
) -> Result<()> {
    let margin = tol.max(AGREEMENT_TOL) * (1.0 + x.frobenius_norm());
    if member && direct_min < -margin {
        return Err(Error::OracleDisagreement(format!(
            "{what}: line search accepts but the direct minimum is {direct_min:e}"
        )));
    }
    if !member && direct_min > margin {
        return Err(Error::OracleDisagreement(format!(
            "{what}: line search rejects but the direct minimum is {direct_min:e}"
        )));
    }
    Ok(())
}
