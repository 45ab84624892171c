//! Membership oracles, classifications and certificates for the cone of
//! Z-transformations on the second-order (Lorentz) cone
//!
//! ```text
//! L = {(t, u) ∈ ℝ × ℝⁿ⁻¹ : t ≥ ‖u‖},   J = diag(1, −1, …, −1).
//! ```
//!
//! A matrix `A` is a Z-transformation on `L` when `⟨Ax, y⟩ ≤ 0` for every
//! complementary pair `x, y ∈ L`, `⟨x, y⟩ = 0`. The crate provides
//!
//! * [`ztransform`]: the complementarity value `γ(A)`, interior/boundary
//!   classification, the PSD interval of γJ − 2·sym(JA) and the certificate
//!   `A = γI − J(P + Q)` with `P` copositive on `∂L` and `Q` skew;
//! * [`copositivity`]: two independent oracles each for copositivity on `L`
//!   and on `∂L`;
//! * [`rank1`]: decomposition of a PSD matrix with `⟨J, X⟩ = 0` into rank-one
//!   terms `ppᵀ` with `p ∈ ∂L`;
//! * [`dual`]: membership in the dual cone of Z-transformations;
//! * [`sdp`]: a small dense barrier SDP solver and the slice program pair;
//! * [`audit`]: seeded property suites shared by the CLI.
//!
//! All tolerances are relative: a tolerance `tol` applied to a matrix `X`
//! means an absolute band of `tol·(1 + ‖X‖_F)`.

pub mod audit;
pub mod copositivity;
pub mod dual;
pub mod error;
pub mod linalg;
pub mod lorentz;
pub mod rank1;
pub mod sampling;
pub mod sdp;
mod search;
pub mod sphere_qp;
pub mod ztransform;

pub use error::{Error, Result};
pub use linalg::{Matrix, SkewMatrix, SymmetricMatrix};
pub use lorentz::Region;

/// Default relative tolerance for PSD tests, cone classification and
/// copositivity verdicts.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Two independent oracles are only reported as disagreeing when their
/// verdicts conflict by more than this relative margin.
pub const AGREEMENT_TOL: f64 = 1e-7;
