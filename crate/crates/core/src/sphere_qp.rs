//! Global maximization of `uᵀBu + 2bᵀu` over the unit sphere `‖u‖ = 1`.
//!
//! With `B = V diag(d) Vᵀ` and `b̂ = Vᵀb`, every global maximizer satisfies
//! `(λI − B)u = b` for some `λ ≥ d_max`. Writing `λ = d_max + δ`, the
//! multiplier is the root of the secular equation
//!
//! ```text
//! ψ(δ) = Σᵢ b̂ᵢ² / (δ + d_max − dᵢ)² = 1,   δ ≥ 0,
//! ```
//!
//! solved by Newton steps on `1/√ψ − 1` safeguarded by bisection. When `b̂`
//! vanishes on the top eigenspace and `ψ(0⁺) ≤ 1` (the hard case) the
//! multiplier is `d_max` and the maximizer is completed to unit norm with a
//! top eigenvector.

use crate::error::{Error, Result};
use crate::linalg::{dot, eigh, norm2, SymmetricMatrix};

/// Components of `b̂` at most `HARD_CASE_REL·(1 + ‖b‖)` are treated as zero.
pub const HARD_CASE_REL: f64 = 1e-12;
/// Eigenvalues within `CLUSTER_REL·(1 + ‖B‖_F)` of the top one share its
/// eigenspace.
pub const CLUSTER_REL: f64 = 1e-12;
pub const SECULAR_TOL: f64 = 1e-12;
pub const SECULAR_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct SphereQpResult {
    pub value: f64,
    /// Unit vector attaining `value`.
    pub maximizer: Vec<f64>,
    /// `λ` with `B u + b = λ u`; at a maximum `λ ≥ λ_max(B)`.
    pub multiplier: f64,
    pub hard_case: bool,
}

/// Maximum of `uᵀBu + 2bᵀu` over the unit sphere, with a KKT certificate.
pub fn max_on_sphere(bmat: &SymmetricMatrix, b: &[f64]) -> Result<SphereQpResult> {
    let m = bmat.dim();
    if m == 0 {
        return Err(Error::DimensionTooSmall { n: 0, min: 1 });
    }
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    if m == 1 {
        // The sphere is {−1, +1}.
        let u = if b[0] >= 0.0 { 1.0 } else { -1.0 };
        return Ok(SphereQpResult {
            value: bmat[(0, 0)] + 2.0 * b[0].abs(),
            maximizer: vec![u],
            multiplier: bmat[(0, 0)] + b[0].abs(),
            hard_case: b[0] == 0.0,
        });
    }

    let eig = eigh(bmat)?;
    let d = &eig.values;
    let d_max = d[m - 1];
    let b_norm = norm2(b);
    let cluster = CLUSTER_REL * (1.0 + bmat.frobenius_norm());
    let negligible = HARD_CASE_REL * (1.0 + b_norm);

    let gaps: Vec<f64> = d.iter().map(|&di| (d_max - di).max(0.0)).collect();
    let in_top: Vec<bool> = gaps.iter().map(|&g| g <= cluster).collect();
    let mut b_hat: Vec<f64> = (0..m).map(|k| dot(&eig.vector(k), b)).collect();

    let top_is_negligible = (0..m).all(|k| !in_top[k] || b_hat[k].abs() <= negligible);
    let mut hard_case = false;
    let coeffs: Vec<f64>;
    let delta;
    if top_is_negligible {
        for k in 0..m {
            if in_top[k] {
                b_hat[k] = 0.0;
            }
        }
        let psi0: f64 = (0..m)
            .filter(|&k| !in_top[k])
            .map(|k| (b_hat[k] / gaps[k]).powi(2))
            .sum();
        if psi0 <= 1.0 {
            hard_case = true;
            delta = 0.0;
            let mut c: Vec<f64> = (0..m)
                .map(|k| if in_top[k] { 0.0 } else { b_hat[k] / gaps[k] })
                .collect();
            c[m - 1] = (1.0 - psi0).max(0.0).sqrt();
            coeffs = c;
        } else {
            delta = solve_secular(&b_hat, &gaps, b_norm)?;
            coeffs = (0..m).map(|k| b_hat[k] / (delta + gaps[k])).collect();
        }
    } else {
        delta = solve_secular(&b_hat, &gaps, b_norm)?;
        coeffs = (0..m).map(|k| b_hat[k] / (delta + gaps[k])).collect();
    }

    let mut u = vec![0.0; m];
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for (i, ui) in u.iter_mut().enumerate() {
            *ui += c * eig.vectors[(i, k)];
        }
    }
    let norm = norm2(&u);
    for ui in &mut u {
        *ui /= norm;
    }
    let value = bmat.quadratic_form(&u) + 2.0 * dot(b, &u);
    Ok(SphereQpResult {
        value,
        maximizer: u,
        multiplier: d_max + delta,
        hard_case,
    })
}

/// Minimum of `uᵀBu + 2bᵀu` over the unit sphere. The multiplier keeps the
/// meaning `B u + b = λ u` (now with `λ ≤ λ_min(B)`).
pub fn min_on_sphere(bmat: &SymmetricMatrix, b: &[f64]) -> Result<SphereQpResult> {
    let neg_b: Vec<f64> = b.iter().map(|v| -v).collect();
    let r = max_on_sphere(&bmat.scale(-1.0), &neg_b)?;
    Ok(SphereQpResult {
        value: -r.value,
        maximizer: r.maximizer,
        multiplier: -r.multiplier,
        hard_case: r.hard_case,
    })
}

fn psi_and_slope(b_hat: &[f64], gaps: &[f64], delta: f64) -> (f64, f64) {
    let mut psi = 0.0;
    let mut slope = 0.0;
    for (&bk, &gk) in b_hat.iter().zip(gaps) {
        if bk == 0.0 {
            continue;
        }
        let denom = delta + gk;
        let term = bk * bk / (denom * denom);
        psi += term;
        slope -= 2.0 * term / denom;
    }
    (psi, slope)
}

/// Root `δ > 0` of `ψ(δ) = 1`. `ψ` is decreasing with `ψ(‖b‖) ≤ 1`.
fn solve_secular(b_hat: &[f64], gaps: &[f64], b_norm: f64) -> Result<f64> {
    let mut hi = b_norm;
    let mut lo = b_hat
        .iter()
        .zip(gaps)
        .map(|(bk, gk)| bk.abs() - gk)
        .fold(0.0_f64, f64::max)
        .min(hi);
    let mut delta = lo;
    for _ in 0..SECULAR_MAX_ITER {
        let (psi, slope) = psi_and_slope(b_hat, gaps, delta);
        if (psi - 1.0).abs() <= SECULAR_TOL {
            return Ok(delta);
        }
        if psi > 1.0 {
            lo = delta;
        } else {
            hi = delta;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.max(f64::MIN_POSITIVE) {
            return Ok(0.5 * (lo + hi));
        }
        // Newton on φ(δ) = 1/√ψ − 1, which is close to linear in δ.
        let phi = 1.0 / psi.sqrt() - 1.0;
        let dphi = -0.5 * slope / (psi * psi.sqrt());
        let newton = if psi.is_finite() && dphi > 0.0 {
            delta - phi / dphi
        } else {
            f64::NAN
        };
        delta = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::ConvergenceFailure {
        what: "secular equation",
        iterations: SECULAR_MAX_ITER,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lambda_max;
    use crate::sampling::{gaussian_vector, random_symmetric, rng, unit_vector};
    use proptest::prelude::*;

    fn objective(bmat: &SymmetricMatrix, b: &[f64], u: &[f64]) -> f64 {
        bmat.quadratic_form(u) + 2.0 * dot(b, u)
    }

    fn assert_certified(bmat: &SymmetricMatrix, b: &[f64], r: &SphereQpResult) {
        let scale = 1.0 + bmat.frobenius_norm() + norm2(b);
        assert!((norm2(&r.maximizer) - 1.0).abs() <= 1e-10);
        let bu = bmat.mul_vec(&r.maximizer);
        let resid: Vec<f64> = (0..b.len())
            .map(|i| r.multiplier * r.maximizer[i] - bu[i] - b[i])
            .collect();
        assert!(norm2(&resid) <= 1e-8 * scale, "stationarity {:e}", norm2(&resid));
        let lmax = lambda_max(bmat).unwrap();
        assert!(r.multiplier >= lmax - 1e-8 * (1.0 + bmat.frobenius_norm()));
        assert!((objective(bmat, b, &r.maximizer) - r.value).abs() <= 1e-12 * scale);
    }

    #[test]
    fn pure_eigenvalue_case() {
        let bmat = SymmetricMatrix::from_diagonal(&[1.0, 3.0]);
        let r = max_on_sphere(&bmat, &[0.0, 0.0]).unwrap();
        assert!((r.value - 3.0).abs() < 1e-15);
        assert!(r.maximizer[0].abs() < 1e-15 && (r.maximizer[1].abs() - 1.0).abs() < 1e-15);
        assert!(r.hard_case);
        assert_certified(&bmat, &[0.0, 0.0], &r);
    }

    #[test]
    fn linear_term_only() {
        let bmat = SymmetricMatrix::zeros(3);
        let b = [1.0, -2.0, 2.0];
        let r = max_on_sphere(&bmat, &b).unwrap();
        assert!((r.value - 6.0).abs() < 1e-12);
        for i in 0..3 {
            assert!((r.maximizer[i] - b[i] / 3.0).abs() < 1e-12);
        }
        assert_certified(&bmat, &b, &r);
    }

    #[test]
    fn circle_instance_matches_dense_grid() {
        let bmat = SymmetricMatrix::from_diagonal(&[2.0, 1.0]);
        let b = [0.0, 0.1];
        let r = max_on_sphere(&bmat, &b).unwrap();
        let steps = 1_000_000;
        let grid = (0..steps)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
                objective(&bmat, &b, &[th.cos(), th.sin()])
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((r.value - grid).abs() <= 1e-6, "{} vs {}", r.value, grid);
        // b is orthogonal to the top eigenvector e₁ and ψ(0) = 0.01 < 1.
        assert!(r.hard_case);
        assert!((r.value - 2.01).abs() < 1e-12);
        assert_certified(&bmat, &b, &r);
    }

    #[test]
    fn one_dimensional_sphere() {
        let bmat = SymmetricMatrix::from_diagonal(&[2.0]);
        let r = max_on_sphere(&bmat, &[-0.5]).unwrap();
        assert_eq!(r.value, 3.0);
        assert_eq!(r.maximizer, vec![-1.0]);
        assert_certified(&bmat, &[-0.5], &r);
        let r = min_on_sphere(&bmat, &[-0.5]).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.maximizer, vec![1.0]);
    }

    #[test]
    fn hard_case_with_degenerate_top_eigenspace() {
        let bmat = SymmetricMatrix::from_diagonal(&[-1.0, 4.0, 4.0]);
        let b = [0.5, 0.0, 0.0];
        let r = max_on_sphere(&bmat, &b).unwrap();
        assert!(r.hard_case);
        assert!((r.multiplier - 4.0).abs() < 1e-14);
        // u₀ = 0.5/5, rest on the top eigenspace.
        assert!((r.value - (4.0 + 0.25 / 5.0)).abs() < 1e-12);
        assert_certified(&bmat, &b, &r);
    }

    #[test]
    fn dimension_errors() {
        assert!(max_on_sphere(&SymmetricMatrix::zeros(0), &[]).is_err());
        assert!(matches!(
            max_on_sphere(&SymmetricMatrix::zeros(2), &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn beats_random_unit_vectors() {
        let mut r = rng(99);
        for m in 1..7 {
            for _ in 0..20 {
                let bmat = random_symmetric(&mut r, m);
                let b = gaussian_vector(&mut r, m);
                let res = max_on_sphere(&bmat, &b).unwrap();
                assert_certified(&bmat, &b, &res);
                for _ in 0..500 {
                    let u = unit_vector(&mut r, m);
                    assert!(res.value >= objective(&bmat, &b, &u) - 1e-9);
                }
            }
        }
    }

    #[test]
    fn constructed_hard_case_is_certified() {
        let mut r = rng(3);
        for m in 2..8 {
            for _ in 0..20 {
                let bmat = random_symmetric(&mut r, m);
                let eig = eigh(&bmat).unwrap();
                // b in the span of the non-top eigenvectors, small enough for
                // ψ(0⁺) < 1.
                let mut b = vec![0.0; m];
                for k in 0..m - 1 {
                    let c = 1e-3 * crate::sampling::gaussian(&mut r);
                    for i in 0..m {
                        b[i] += c * eig.vectors[(i, k)];
                    }
                }
                let res = max_on_sphere(&bmat, &b).unwrap();
                assert_certified(&bmat, &b, &res);
            }
        }
    }

    proptest! {
        #[test]
        fn shift_invariance(seed in 0u64..10_000, m in 1usize..7, c in -50.0f64..50.0) {
            let mut r = rng(seed);
            let bmat = random_symmetric(&mut r, m);
            let b = gaussian_vector(&mut r, m);
            let base = max_on_sphere(&bmat, &b).unwrap().value;
            let shifted = max_on_sphere(&(&bmat + &SymmetricMatrix::identity(m).scale(c)), &b)
                .unwrap()
                .value;
            prop_assert!((shifted - base - c).abs() <= 1e-10 * (1.0 + c.abs()));
        }
    }
}
