//! Geometry of the Lorentz cone `L = {(t, u) : t ≥ ‖u‖}`.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Matrix, SymmetricMatrix};
use crate::sampling;

/// Three-valued position relative to a closed cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Interior,
    Boundary,
    Outside,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Interior => "interior",
            Region::Boundary => "boundary",
            Region::Outside => "outside",
        }
    }

    /// `Interior` or `Boundary`.
    pub fn is_member(self) -> bool {
        self != Region::Outside
    }

    /// Band classification of a signed margin: negative margins are inside.
    pub(crate) fn from_margin(value: f64, band: f64) -> Self {
        if value.abs() <= band {
            Region::Boundary
        } else if value < 0.0 {
            Region::Interior
        } else {
            Region::Outside
        }
    }
}

/// A vector of ℝⁿ tagged with its position relative to `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzVector {
    x: Vec<f64>,
    region: Region,
}

impl LorentzVector {
    pub fn new(x: Vec<f64>, tol: f64) -> Result<Self> {
        let region = classify(&x, tol)?;
        Ok(Self { x, region })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    pub fn head(&self) -> f64 {
        self.x[0]
    }

    pub fn tail(&self) -> &[f64] {
        &self.x[1..]
    }

    pub fn region(&self) -> Region {
        self.region
    }
}

/// The reflection `J = diag(1, −1, …, −1)`; never stored densely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReflectionJ {
    n: usize,
}

impl ReflectionJ {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        apply_j(x)
    }

    /// `xᵀ J x = t² − ‖u‖²`.
    pub fn form(&self, x: &[f64]) -> f64 {
        j_form(x)
    }

    pub fn to_matrix(&self) -> SymmetricMatrix {
        SymmetricMatrix::reflection(self.n)
    }
}

/// Boundary iff `|t − ‖u‖| ≤ tol·(1 + ‖x‖)`, interior iff `t > ‖u‖` outside
/// that band, outside otherwise. The zero vector is a boundary point.
pub fn classify(x: &[f64], tol: f64) -> Result<Region> {
    if x.len() < 2 {
        return Err(Error::DimensionTooSmall { n: x.len(), min: 2 });
    }
    let gap = x[0] - norm2(&x[1..]);
    Ok(Region::from_margin(-gap, tol * (1.0 + norm2(x))))
}

/// `(x₀, −x₁, …, −xₙ₋₁)`.
pub fn apply_j(x: &[f64]) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| if i == 0 { v } else { -v })
        .collect()
}

pub fn j_form(x: &[f64]) -> f64 {
    x[0] * x[0] - dot(&x[1..], &x[1..])
}

/// Unit vector `(1, u)/√2` on `∂L` with `u` uniform on the sphere of ℝⁿ⁻¹.
pub fn sample_boundary(n: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    Ok(sampling::boundary_point(&mut sampling::rng(seed), n))
}

/// Returns `(x, Jx)` for a nonzero boundary point `x`; the two are in `L`
/// and orthogonal.
pub fn complementary_pair(x: &[f64], tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let region = classify(x, tol)?;
    let gap = x[0] - norm2(&x[1..]);
    if region != Region::Boundary || norm2(x) == 0.0 {
        return Err(Error::NotOnBoundary { gap });
    }
    Ok((x.to_vec(), apply_j(x)))
}

/// `W = diag(1, R)` for an orthogonal `R`; commutes with `J`.
pub fn tail_rotation(r: &Matrix) -> Matrix {
    let m = r.dim();
    let mut w = Matrix::zeros(m + 1);
    w[(0, 0)] = 1.0;
    for i in 0..m {
        for j in 0..m {
            w[(i + 1, j + 1)] = r[(i, j)];
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{cone_point, rng};
    use rand::Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&[1.0, 0.0, 0.0], 1e-9).unwrap(), Region::Interior);
        assert_eq!(
            classify(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], 1e-9).unwrap(),
            Region::Boundary
        );
        assert_eq!(classify(&[0.0, 1.0, 0.0], 1e-9).unwrap(), Region::Outside);
        assert_eq!(classify(&[0.0, 0.0], 0.0).unwrap(), Region::Boundary);
        assert_eq!(classify(&[-1.0, 1.0], 1e-9).unwrap(), Region::Outside);
        assert!(matches!(
            classify(&[1.0], 1e-9),
            Err(Error::DimensionTooSmall { n: 1, min: 2 })
        ));
    }

    #[test]
    fn apply_j_examples() {
        assert_eq!(apply_j(&[1.0, 1.0]), vec![1.0, -1.0]);
        assert_eq!(apply_j(&[2.0, 1.0, 1.0]), vec![2.0, -1.0, -1.0]);
        let x = [0.3, -1.2, 4.5, 0.0];
        assert_eq!(apply_j(&apply_j(&x)), x.to_vec());
        assert_eq!(norm2(&apply_j(&x)), norm2(&x));
    }

    #[test]
    fn boundary_samples() {
        for seed in 0..20 {
            let x = sample_boundary(2, seed).unwrap();
            assert!((x[0] - FRAC_1_SQRT_2).abs() < 1e-15);
            assert!((x[1].abs() - FRAC_1_SQRT_2).abs() < 1e-15);

            let x = sample_boundary(3, seed).unwrap();
            assert!((norm2(&x) - 1.0).abs() < 1e-14);
            assert_eq!(classify(&x, 1e-9).unwrap(), Region::Boundary);
        }
        assert!(sample_boundary(1, 0).is_err());
        assert_eq!(sample_boundary(5, 11).unwrap(), sample_boundary(5, 11).unwrap());
    }

    #[test]
    fn boundary_tail_mean_is_near_zero() {
        let mut r = rng(2024);
        let mut mean = [0.0; 3];
        let samples = 10_000;
        for _ in 0..samples {
            let x = sampling::boundary_point(&mut r, 4);
            // tail of (1,u)/√2 rescaled back to u
            for k in 0..3 {
                mean[k] += x[k + 1] * std::f64::consts::SQRT_2;
            }
        }
        for m in mean {
            assert!((m / samples as f64).abs() < 0.05);
        }
    }

    #[test]
    fn complementary_pair_examples() {
        let s = FRAC_1_SQRT_2;
        let (x, y) = complementary_pair(&[s, s], 1e-9).unwrap();
        assert_eq!(y, vec![s, -s]);
        assert!(dot(&x, &y).abs() < 1e-15);

        let (x, y) = complementary_pair(&[1.0, 0.6, 0.8], 1e-9).unwrap();
        assert_eq!(y, vec![1.0, -0.6, -0.8]);
        assert!(dot(&x, &y).abs() < 1e-15);

        for seed in 0..50 {
            let x = sample_boundary(6, seed).unwrap();
            let (x, y) = complementary_pair(&x, 1e-9).unwrap();
            assert!(dot(&x, &y).abs() < 1e-12);
            assert_eq!(classify(&y, 1e-9).unwrap(), Region::Boundary);
        }

        assert!(matches!(
            complementary_pair(&[1.0, 0.0, 0.0], 1e-9),
            Err(Error::NotOnBoundary { .. })
        ));
        assert!(complementary_pair(&[0.0, 0.0], 1e-9).is_err());
    }

    #[test]
    fn j_form_vanishes_on_boundary() {
        let mut r = rng(5);
        for n in 2..9 {
            for _ in 0..100 {
                let x = sampling::boundary_point(&mut r, n);
                assert!(j_form(&x).abs() <= 1e-12 * dot(&x, &x));
            }
        }
    }

    #[test]
    fn self_duality_witness() {
        let mut r = rng(17);
        for _ in 0..1000 {
            let n = 2 + (r.random_range(0..7usize));
            let x = cone_point(&mut r, n);
            let y = cone_point(&mut r, n);
            assert!(dot(&x, &y) >= -1e-12 * norm2(&x) * norm2(&y));
        }
    }

    #[test]
    fn tail_rotation_commutes_with_j() {
        let r = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let w = tail_rotation(&r);
        let j = Matrix::reflection(3);
        assert_eq!(&w * &j, &j * &w);
    }
}
