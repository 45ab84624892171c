//! Z-transformations on the Lorentz cone.
//!
//! A matrix `A` is a Z-transformation on `L` when `⟨Ax, y⟩ ≤ 0` for every
//! nonzero complementary pair `x, y ∈ L`. Such pairs are, up to positive
//! scaling, `(x, Jx)` with `x ∈ ∂L`, so everything reduces to the quadratic
//! form of `M = sym(JA)` on unit boundary vectors:
//!
//! ```text
//! γ(A) = max { xᵀ M x : x ∈ ∂L, ‖x‖ = 1 }.
//! ```
//!
//! `γ(A) < 0` characterizes the interior (strict Z-transformations),
//! `γ(A) = 0` the boundary. Independently, `A` is a Z-transformation iff
//! `gJ − (JA + AᵀJ)` is PSD for some real `g`; [`sw_feasible_gamma`] returns
//! the set of such `g`, and [`classify_z`] insists the two routes agree.
//!
//! Any member decomposes as `A = cI − J(P + Q)` with `P = cJ − M` and
//! `Q = −skew(JA)`; choosing `c = g/2` for a feasible `g` makes `P` PSD.

use crate::copositivity::{is_copositive_on_boundary, split_head, CopositivityVerdict};
use crate::error::{Error, Result};
use crate::linalg::{expm, is_psd, lambda_min, Matrix, SkewMatrix, SymmetricMatrix};
use crate::lorentz::{classify, Region};
use crate::sampling;
use crate::search::{bisect_edge, golden_section_max};
use crate::sphere_qp::max_on_sphere;
use crate::AGREEMENT_TOL;

/// Default time samples for [`exp_invariance_check`].
pub const EXP_CHECK_TIMES: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
pub const EXP_CHECK_POINTS: usize = 200;
/// Classification slack used by the exponential oracle; the exponential
/// amplifies rounding.
pub const EXP_CHECK_TOL: f64 = 1e-7;

/// Closed interval of `g` for which `gJ − (JA + AᵀJ)` is PSD at tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwInterval {
    pub lower: f64,
    pub upper: f64,
}

impl SwInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, g: f64) -> bool {
        self.lower <= g && g <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZClassification {
    pub gamma_value: f64,
    pub verdict: Region,
    pub sw_interval: Option<SwInterval>,
    /// A unit boundary vector `x` attaining `γ(A)`; `(x, Jx)` is the
    /// worst complementary pair.
    pub maximizer: Vec<f64>,
}

/// Certificate `A = gamma·I − J(P + Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZDecomposition {
    pub gamma: f64,
    pub p: SymmetricMatrix,
    pub q: SkewMatrix,
    /// `‖A − (gamma·I − J(P + Q))‖_F`.
    pub residual: f64,
    /// Whether `P` is PSD (true whenever `gamma` came from the PSD interval).
    pub p_is_psd: bool,
    pub p_copositivity: CopositivityVerdict,
}

impl ZDecomposition {
    pub fn reconstruct(&self) -> Matrix {
        sampling::compose_z(self.gamma, &self.p, &self.q)
    }
}

/// `M = sym(JA)`.
pub fn j_symmetric_part(a: &Matrix) -> SymmetricMatrix {
    SymmetricMatrix::symmetric_part(&a.reflect_rows())
}

fn check_dim(a: &Matrix) -> Result<()> {
    if a.dim() < 2 {
        return Err(Error::DimensionTooSmall { n: a.dim(), min: 2 });
    }
    Ok(())
}

/// `γ(A)` and a unit boundary vector attaining it.
pub fn gamma_with_maximizer(a: &Matrix) -> Result<(f64, Vec<f64>)> {
    check_dim(a)?;
    let m = j_symmetric_part(a);
    // x = (1, u)/√2:  xᵀMx = ½(M₀₀ + 2m̂ᵀu + uᵀM̂u).
    let (head, tail_col, block) = split_head(&m);
    let r = max_on_sphere(&block, &tail_col)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = std::iter::once(s)
        .chain(r.maximizer.iter().map(|v| v * s))
        .collect();
    Ok((0.5 * (head + r.value), x))
}

pub fn gamma(a: &Matrix) -> Result<f64> {
    Ok(gamma_with_maximizer(a)?.0)
}

/// Result of the line search on `g ↦ λ_min(gJ − 2M)`.
struct SwSearch {
    band: f64,
    bracket: Option<(f64, f64)>,
    best: Option<(f64, f64)>,
}

fn sw_search(a: &Matrix, tol: f64) -> Result<SwSearch> {
    let m2 = j_symmetric_part(a).scale(2.0);
    let n = a.dim();
    let band = 2.0 * tol * (1.0 + a.frobenius_norm());
    // Diagonal of gJ − 2M: g − 2M₀₀ ≥ 0 and −g − 2Mᵢᵢ ≥ 0.
    let lo = m2[(0, 0)] - band;
    let hi = -(1..n).map(|i| m2[(i, i)]).fold(f64::NEG_INFINITY, f64::max) + band;
    if lo > hi {
        return Ok(SwSearch {
            band,
            bracket: None,
            best: None,
        });
    }
    let profile = |g: f64| lambda_min(&m2.scale(-1.0).add_reflection(g));
    let best = golden_section_max(profile, lo, hi)?;
    Ok(SwSearch {
        band,
        bracket: Some((lo, hi)),
        best: Some(best),
    })
}

/// The set of `g` with `gJ − (JA + AᵀJ)` PSD at tolerance, i.e.
/// `λ_min ≥ −2·tol·(1 + ‖A‖_F)`. Empty iff `A` is not a Z-transformation.
pub fn sw_feasible_gamma(a: &Matrix, tol: f64) -> Result<Option<SwInterval>> {
    check_dim(a)?;
    let search = sw_search(a, tol)?;
    let (Some((lo, hi)), Some((g_best, v_best))) = (search.bracket, search.best) else {
        return Ok(None);
    };
    if v_best < -search.band {
        return Ok(None);
    }
    let m2 = j_symmetric_part(a).scale(2.0).scale(-1.0);
    let feasible = |g: f64| -> Result<bool> { Ok(lambda_min(&m2.add_reflection(g))? >= -search.band) };
    let lower = if feasible(lo)? {
        lo
    } else {
        bisect_edge(feasible, g_best, lo)?
    };
    let upper = if feasible(hi)? {
        hi
    } else {
        bisect_edge(feasible, g_best, hi)?
    };
    Ok(Some(SwInterval { lower, upper }))
}

/// Interior / boundary / outside verdict from `γ(A)`, cross-checked against
/// the PSD-interval oracle.
pub fn classify_z(a: &Matrix, tol: f64) -> Result<ZClassification> {
    check_dim(a)?;
    let (gamma_value, maximizer) = gamma_with_maximizer(a)?;
    let scale = 1.0 + a.frobenius_norm();
    let verdict = Region::from_margin(gamma_value, tol * scale);
    let sw_interval = sw_feasible_gamma(a, tol)?;

    let margin = tol.max(AGREEMENT_TOL) * scale;
    if sw_interval.is_some() && gamma_value > margin {
        return Err(Error::OracleDisagreement(format!(
            "PSD interval is nonempty but gamma = {gamma_value:e}"
        )));
    }
    if sw_interval.is_none() && gamma_value < -margin {
        return Err(Error::OracleDisagreement(format!(
            "PSD interval is empty but gamma = {gamma_value:e}"
        )));
    }
    Ok(ZClassification {
        gamma_value,
        verdict,
        sw_interval,
        maximizer,
    })
}

/// Builds `A = gamma·I − J(P + Q)` with `P` copositive on `∂L`.
///
/// `gamma` is half the midpoint of the PSD interval, which makes `P` PSD.
/// When the interval is empty but `γ(A)` is within tolerance of zero, the
/// best point of the line search is used and `P` is only certified
/// copositive on `∂L`.
pub fn decompose_z(a: &Matrix, tol: f64) -> Result<ZDecomposition> {
    let class = classify_z(a, tol)?;
    if class.verdict == Region::Outside {
        return Err(Error::NotAZTransformation {
            gamma: class.gamma_value,
        });
    }
    let c = match class.sw_interval {
        Some(iv) => 0.5 * iv.midpoint(),
        None => {
            let search = sw_search(a, tol)?;
            match search.best {
                Some((g, _)) => 0.5 * g,
                None => j_symmetric_part(a)[(0, 0)],
            }
        }
    };
    let m = j_symmetric_part(a);
    let p = m.scale(-1.0).add_reflection(c);
    let q = SkewMatrix::skew_part(&a.reflect_rows()).scale(-1.0);
    let residual = (a - &sampling::compose_z(c, &p, &q)).frobenius_norm();
    let p_is_psd = is_psd(&p, tol)?;
    let p_copositivity = is_copositive_on_boundary(&p, tol)?;

    if !p_copositivity.member {
        return Err(Error::CertificateFailure(format!(
            "P is not copositive on the boundary (min = {:e})",
            p_copositivity.min_quadratic_value
        )));
    }
    if residual > 1e-10 * (1.0 + a.frobenius_norm()) {
        return Err(Error::CertificateFailure(format!(
            "reconstruction residual {residual:e}"
        )));
    }
    Ok(ZDecomposition {
        gamma: c,
        p,
        q,
        residual,
        p_is_psd,
        p_copositivity,
    })
}

/// Both `A` and `−A` are Z-transformations.
pub fn is_lyapunov_like(a: &Matrix, tol: f64) -> Result<bool> {
    let band = tol * (1.0 + a.frobenius_norm());
    Ok(gamma(a)? <= band && gamma(&-a)? <= band)
}

/// Necessary-condition check: `e^{−tA} x` stays in `L` for every sampled
/// time and every sampled boundary point. Not a decision procedure.
pub fn exp_invariance_check(
    a: &Matrix,
    t_samples: &[f64],
    n_points: usize,
    seed: u64,
    tol: f64,
) -> Result<bool> {
    Ok(exp_invariance_violation(a, t_samples, n_points, seed, tol)?.is_none())
}

/// First `(t, x)` with `e^{−tA} x` outside `L`, if any.
pub fn exp_invariance_violation(
    a: &Matrix,
    t_samples: &[f64],
    n_points: usize,
    seed: u64,
    tol: f64,
) -> Result<Option<(f64, Vec<f64>)>> {
    check_dim(a)?;
    if let Some(t) = t_samples.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "time samples must be nonnegative, got {t}"
        )));
    }
    let mut rng = sampling::rng(seed);
    let points: Vec<Vec<f64>> = (0..n_points)
        .map(|_| sampling::boundary_point(&mut rng, a.dim()))
        .collect();
    for &t in t_samples {
        let e = expm(&a.scale(-t));
        for x in &points {
            if classify(&e.mul_vec(x), tol)? == Region::Outside {
                return Ok(Some((t, x.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copositivity::is_copositive_on_boundary;
    use crate::linalg::frobenius_inner;
    use crate::sampling::{gaussian_matrix, rng, strict_z_member, z_member};
    use crate::DEFAULT_TOL;
    use proptest::prelude::*;

    fn mat(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    /// Dense angular grid over the unit boundary vectors of ℝ².
    fn grid_gamma_2(a: &Matrix) -> f64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [[s, s], [s, -s]]
            .iter()
            .map(|x| a.bilinear_form(&crate::lorentz::apply_j(x), x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn gamma_examples() {
        assert!(gamma(&Matrix::identity(4)).unwrap().abs() < 1e-15);
        assert!((gamma(&Matrix::reflection(3)).unwrap() - 1.0).abs() < 1e-14);
        let a = mat(&[&[1.0, 0.0], &[0.0, 2.0]]);
        assert!((gamma(&a).unwrap() + 0.5).abs() < 1e-15);
        assert!((grid_gamma_2(&a) + 0.5).abs() < 1e-15);
        assert!(gamma(&Matrix::identity(1)).is_err());
    }

    #[test]
    fn classify_examples() {
        let c = classify_z(&Matrix::identity(3), DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Region::Boundary);
        let c = classify_z(&mat(&[&[1.0, 0.0], &[0.0, 2.0]]), DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Region::Interior);
        assert!(c.sw_interval.is_some());
        let c = classify_z(&Matrix::reflection(3), DEFAULT_TOL).unwrap();
        assert_eq!(c.verdict, Region::Outside);
        assert!(c.sw_interval.is_none());
    }

    #[test]
    fn sw_examples() {
        let iv = sw_feasible_gamma(&Matrix::identity(3), DEFAULT_TOL).unwrap().unwrap();
        assert!(iv.contains(2.0));
        assert!(iv.width() < 1e-6);
        assert!(sw_feasible_gamma(&Matrix::reflection(3), DEFAULT_TOL).unwrap().is_none());

        // diag(1, 2): gJ − 2·diag(1, −2) = diag(g − 2, 4 − g) ⪰ 0 iff g ∈ [2, 4].
        let iv = sw_feasible_gamma(&mat(&[&[1.0, 0.0], &[0.0, 2.0]]), 0.0)
            .unwrap()
            .unwrap();
        assert!((iv.lower - 2.0).abs() < 1e-9 && (iv.upper - 4.0).abs() < 1e-9);
    }

    #[test]
    fn decompose_identity() {
        let d = decompose_z(&Matrix::identity(3), DEFAULT_TOL).unwrap();
        assert!(d.residual <= 1e-10 * (1.0 + 3f64.sqrt()));
        assert!((d.gamma - 1.0).abs() < 1e-6);
        assert!(d.p.frobenius_norm() < 1e-6);
        assert!(d.p_is_psd);
        assert_eq!(*d.q, Matrix::zeros(3));
    }

    #[test]
    fn decompose_rank_one_generator() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = [s, s];
        let a = -&SymmetricMatrix::outer(&p).reflect_rows();
        let d = decompose_z(&a, DEFAULT_TOL).unwrap();
        assert!(d.residual <= 1e-10 * (1.0 + a.frobenius_norm()));
        assert!((&d.reconstruct() - &a).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn decompose_rejects_outside() {
        assert!(matches!(
            decompose_z(&Matrix::reflection(3), DEFAULT_TOL),
            Err(Error::NotAZTransformation { .. })
        ));
    }

    #[test]
    fn interior_decomposition_has_strictly_copositive_p() {
        let mut r = rng(55);
        for _ in 0..25 {
            let member = strict_z_member(&mut r, 5);
            let class = classify_z(&member.a, DEFAULT_TOL).unwrap();
            assert_eq!(class.verdict, Region::Interior);
            let d = decompose_z(&member.a, DEFAULT_TOL).unwrap();
            assert!(d.p_is_psd);
            assert!(d.p_copositivity.strict);
            let v = is_copositive_on_boundary(&d.p, DEFAULT_TOL).unwrap();
            assert!(v.strict);
        }
    }

    #[test]
    fn lyapunov_examples() {
        assert!(is_lyapunov_like(&Matrix::identity(3), DEFAULT_TOL).unwrap());
        assert!(is_lyapunov_like(&mat(&[&[0.0, 1.0], &[1.0, 0.0]]), DEFAULT_TOL).unwrap());
        assert!(!is_lyapunov_like(&mat(&[&[1.0, 0.0], &[0.0, 2.0]]), DEFAULT_TOL).unwrap());
    }

    #[test]
    fn lyapunov_like_implies_boundary() {
        // Lyapunov-like maps on L: aI + skew(tail) + symmetric boost.
        let mut r = rng(12);
        for n in 2..7 {
            for _ in 0..10 {
                let mut a = Matrix::identity(n).scale(crate::sampling::gaussian(&mut r));
                let skew = crate::sampling::random_skew(&mut r, n - 1);
                let boost = crate::sampling::gaussian_vector(&mut r, n - 1);
                for i in 0..n - 1 {
                    a[(0, i + 1)] += boost[i];
                    a[(i + 1, 0)] += boost[i];
                    for j in 0..n - 1 {
                        a[(i + 1, j + 1)] += skew[(i, j)];
                    }
                }
                assert!(is_lyapunov_like(&a, DEFAULT_TOL).unwrap());
                assert_eq!(classify_z(&a, DEFAULT_TOL).unwrap().verdict, Region::Boundary);
            }
        }
    }

    #[test]
    fn exp_invariance_examples() {
        let times = EXP_CHECK_TIMES;
        assert!(exp_invariance_check(&Matrix::identity(3), &times, 50, 1, EXP_CHECK_TOL).unwrap());
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // e^{−J}(1,1)/√2 = (e⁻¹, e)/√2, outside L.
        let y = expm(&Matrix::reflection(2).scale(-1.0)).mul_vec(&[s, s]);
        assert_eq!(classify(&y, EXP_CHECK_TOL).unwrap(), Region::Outside);
        assert!(!exp_invariance_check(&Matrix::reflection(2), &[1.0], 10, 0, EXP_CHECK_TOL).unwrap());
        assert!(exp_invariance_check(&Matrix::identity(2), &[-1.0], 1, 0, 1e-7).is_err());
    }

    #[test]
    fn generated_members_are_never_outside() {
        let mut r = rng(77);
        for n in 2..8 {
            for _ in 0..30 {
                let m = z_member(&mut r, n);
                assert!(classify_z(&m.a, DEFAULT_TOL).unwrap().verdict.is_member());
            }
        }
    }

    #[test]
    fn gamma_is_sublinear_on_random_pairs() {
        let mut r = rng(31);
        for n in 2..7 {
            for _ in 0..20 {
                let a1 = z_member(&mut r, n).a;
                let a2 = z_member(&mut r, n).a;
                let (s1, s2) = (r.random::<f64>() * 3.0, r.random::<f64>() * 3.0);
                let combo = &a1.scale(s1) + &a2.scale(s2);
                let band = 1e-9 * (1.0 + combo.frobenius_norm());
                assert!(gamma(&combo).unwrap() <= band);
            }
        }
    }

    #[test]
    fn maximizer_attains_gamma() {
        let mut r = rng(2);
        for n in 2..7 {
            let a = gaussian_matrix(&mut r, n);
            let (g, x) = gamma_with_maximizer(&a).unwrap();
            let y = crate::lorentz::apply_j(&x);
            assert!((a.bilinear_form(&y, &x) - g).abs() < 1e-12 * (1.0 + a.frobenius_norm()));
            assert!(frobenius_inner(&a, &a).unwrap() >= 0.0);
        }
    }

    use rand::Rng;

    proptest! {
        #[test]
        fn gamma_shift_and_scale(seed in 0u64..5000, n in 2usize..7, c in -20.0f64..20.0, s in 0.0f64..10.0) {
            let mut r = rng(seed);
            let a = gaussian_matrix(&mut r, n);
            let g = gamma(&a).unwrap();
            let shifted = gamma(&(&a + &Matrix::identity(n).scale(c))).unwrap();
            prop_assert!((shifted - g).abs() <= 1e-9 * (1.0 + c.abs()));
            let scaled = gamma(&a.scale(s)).unwrap();
            prop_assert!((scaled - s * g).abs() <= 1e-10 * (1.0 + s) * (1.0 + g.abs()));
        }

        #[test]
        fn two_by_two_closed_form(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0) {
            let m = mat(&[&[a, b], &[c, d]]);
            let want = 0.5 * ((a - d) + (b - c).abs());
            prop_assert!((gamma(&m).unwrap() - want).abs() <= 1e-12 * (1.0 + want.abs()));
            prop_assert!((grid_gamma_2(&m) - want).abs() <= 1e-12 * (1.0 + want.abs()));
        }
    }
}
