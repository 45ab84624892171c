//! The dual cone of Z-transformations on `L`.
//!
//! `B` lies in the dual cone iff `tr B = 0` and `−JB` is a sum `Σ ppᵀ` with
//! `p ∈ ∂L` (equivalently, with `p ∈ L`, or just `−JB` PSD, since the trace
//! condition puts `−JB` on the slice `⟨J, ·⟩ = 0`).

use crate::error::{Error, Result};
use crate::linalg::{frobenius_inner, is_psd, Matrix, SymmetricMatrix};
use crate::rank1::{j_balanced_decompose, Rank1Certificate};
use crate::sampling;

#[derive(Debug, Clone, PartialEq)]
pub struct DualMembership {
    pub member: bool,
    /// `|tr B|`.
    pub trace_residual: f64,
    /// `‖W − Wᵀ‖_F` for `W = −JB`.
    pub asymmetry: f64,
    /// `sym(−JB)`.
    pub psd_part: SymmetricMatrix,
    /// Boundary atoms for `−JB`, present exactly when `member` holds.
    pub certificate: Option<Rank1Certificate>,
}

/// Decides membership by the PSD route and, for members, attaches a
/// rank-one certificate over `∂L`.
pub fn is_in_dual_z(b: &Matrix, tol: f64) -> Result<DualMembership> {
    let n = b.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let band = tol * (1.0 + b.frobenius_norm());
    let w = -&b.reflect_rows();
    let trace_residual = b.trace().abs();
    let asymmetry = (&w - &w.transpose()).frobenius_norm();
    let psd_part = SymmetricMatrix::symmetric_part(&w);
    let member = trace_residual <= band && asymmetry <= band && is_psd(&psd_part, tol)?;

    let certificate = if member {
        let cert = j_balanced_decompose(&psd_part, tol).map_err(|e| {
            Error::CertificateFailure(format!("dual member without boundary certificate: {e}"))
        })?;
        Some(cert)
    } else {
        None
    };
    Ok(DualMembership {
        member,
        trace_residual,
        asymmetry,
        psd_part,
        certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingAudit {
    pub samples: usize,
    /// Smallest `⟨A, B⟩` over the sampled Z-transformations `A`.
    pub min_pairing: f64,
    /// Smallest `⟨A, B⟩ / (1 + ‖A‖_F‖B‖_F)`.
    pub min_scaled_pairing: f64,
    /// `min_scaled_pairing ≥ −tol`.
    pub passed: bool,
}

/// Pairs `B` against random Z-transformations `γI − J(P + Q)`. A dual
/// member never produces a negative pairing.
pub fn dual_pairing_audit(b: &Matrix, n_samples: usize, seed: u64, tol: f64) -> Result<PairingAudit> {
    let n = b.dim();
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let mut rng = sampling::rng(seed);
    let mut min_pairing = f64::INFINITY;
    let mut min_scaled_pairing = f64::INFINITY;
    for _ in 0..n_samples {
        let a = sampling::z_member(&mut rng, n).a;
        let v = frobenius_inner(&a, b)?;
        min_pairing = min_pairing.min(v);
        min_scaled_pairing =
            min_scaled_pairing.min(v / (1.0 + a.frobenius_norm() * b.frobenius_norm()));
    }
    if n_samples == 0 {
        min_pairing = 0.0;
        min_scaled_pairing = 0.0;
    }
    Ok(PairingAudit {
        samples: n_samples,
        min_pairing,
        min_scaled_pairing,
        passed: min_scaled_pairing >= -tol,
    })
}
