//! Seeded random generators for cone elements and structured matrices.
//!
//! Every generator draws from a caller-owned [`ChaCha8Rng`], so a seed fully
//! determines the stream on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{norm2, Matrix, SkewMatrix, SymmetricMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut SeededRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn gaussian_vector(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

/// Uniform point on the unit sphere of ℝᵐ.
pub fn unit_vector(rng: &mut SeededRng, m: usize) -> Vec<f64> {
    loop {
        let g = gaussian_vector(rng, m);
        let norm = norm2(&g);
        if norm > 1e-300 {
            return g.into_iter().map(|v| v / norm).collect();
        }
    }
}

/// Matrix with i.i.d. standard normal entries.
pub fn gaussian_matrix(rng: &mut SeededRng, n: usize) -> Matrix {
    Matrix::from_vec_unchecked(n, gaussian_vector(rng, n * n))
}

pub fn random_symmetric(rng: &mut SeededRng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::symmetric_part(&gaussian_matrix(rng, n))
}

pub fn random_skew(rng: &mut SeededRng, n: usize) -> SkewMatrix {
    SkewMatrix::skew_part(&gaussian_matrix(rng, n))
}

/// `G Gᵀ / n` for an `n × k` Gaussian `G` with `k` drawn from `1..=n`, so
/// singular PSD matrices show up regularly.
pub fn random_psd(rng: &mut SeededRng, n: usize) -> SymmetricMatrix {
    let rank = rng.random_range(1..=n);
    let mut s = SymmetricMatrix::zeros(n);
    for _ in 0..rank {
        let g = gaussian_vector(rng, n);
        s = &s + &SymmetricMatrix::outer(&g);
    }
    s.scale(1.0 / n as f64)
}

/// Positive definite matrix with smallest eigenvalue at least `floor`.
pub fn random_pd(rng: &mut SeededRng, n: usize, floor: f64) -> SymmetricMatrix {
    let s = random_psd(rng, n);
    &s +&SymmetricMatrix::identity(n).scale(floor)
}

/// Unit vector on `∂L`: `(1, u)/√2` with `u` uniform on the unit sphere.
pub fn boundary_point(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    let u = unit_vector(rng, n - 1);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    std::iter::once(s).chain(u.into_iter().map(|v| v * s)).collect()
}

/// Point of `L`: a boundary point half of the time, otherwise an interior
/// point `(t, u)` with `t = ‖u‖ + |g|`. Random positive scale.
pub fn cone_point(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    let scale = (gaussian(rng)).exp();
    if rng.random_bool(0.5) {
        return boundary_point(rng, n).into_iter().map(|v| v * scale).collect();
    }
    let u = gaussian_vector(rng, n - 1);
    let t = norm2(&u) + gaussian(rng).abs();
    std::iter::once(t)
        .chain(u)
        .map(|v| v * scale)
        .collect()
}

/// `Σ pᵢpᵢᵀ` over `count` boundary atoms with random positive scales,
/// together with the atoms. Lies on the slice `⟨J, X⟩ = 0` by construction.
pub fn boundary_atom_sum(
    rng: &mut SeededRng,
    n: usize,
    count: usize,
) -> (SymmetricMatrix, Vec<Vec<f64>>) {
    let mut x = SymmetricMatrix::zeros(n);
    let mut atoms = Vec::with_capacity(count);
    for _ in 0..count {
        let scale = 0.5 + 1.5 * rng.random::<f64>();
        let p: Vec<f64> = boundary_point(rng, n).into_iter().map(|v| v * scale).collect();
        x = &x + &SymmetricMatrix::outer(&p);
        atoms.push(p);
    }
    (x, atoms)
}

/// Parts of a generated Z-transformation `A = γI − J(P + Q)`.
#[derive(Debug, Clone)]
pub struct ZMember {
    pub a: Matrix,
    pub gamma: f64,
    pub p: SymmetricMatrix,
    pub q: SkewMatrix,
}

/// Generator for Z-transformations: `A = γI − J(P + Q)` with random `γ`,
/// `P = S + μJ` (`S` PSD, `μ` any real) and skew `Q`. Every output is a
/// Z-transformation; the rank-deficient `S` draws often land on the boundary.
pub fn z_member(rng: &mut SeededRng, n: usize) -> ZMember {
    let s = random_psd(rng, n);
    z_member_from(rng, n, s)
}

/// As [`z_member`], but with `S` positive definite so the result is a strict
/// Z-transformation.
pub fn strict_z_member(rng: &mut SeededRng, n: usize) -> ZMember {
    let s = random_pd(rng, n, 0.1);
    z_member_from(rng, n, s)
}

fn z_member_from(rng: &mut SeededRng, n: usize, s: SymmetricMatrix) -> ZMember {
    let gamma = 2.0 * gaussian(rng);
    let mu = 2.0 * gaussian(rng);
    let p = s.add_reflection(mu);
    let q = random_skew(rng, n);
    let a = compose_z(gamma, &p, &q);
    ZMember { a, gamma, p, q }
}

/// `γI − J(P + Q)`.
pub fn compose_z(gamma: f64, p: &SymmetricMatrix, q: &SkewMatrix) -> Matrix {
    let n = p.dim();
    let pq = &**p + &**q;
    &Matrix::identity(n).scale(gamma) - &pq.reflect_rows()
}

/// Element of the dual cone: `B = −J Σ pᵢpᵢᵀ` over random boundary atoms.
pub fn dual_member(rng: &mut SeededRng, n: usize) -> Matrix {
    let count = rng.random_range(1..=n + 1);
    let (x, _) = boundary_atom_sum(rng, n, count);
    -&x.reflect_rows()
}

/// Test matrix mixing plain Gaussian draws with perturbed Z-transformations,
/// so classifiers see interior, near-boundary and exterior inputs.
pub fn mixed_test_matrix(rng: &mut SeededRng, n: usize) -> Matrix {
    match rng.random_range(0..3) {
        0 => gaussian_matrix(rng, n),
        1 => strict_z_member(rng, n).a,
        _ => {
            let base = z_member(rng, n).a;
            let eps = 0.3 * rng.random::<f64>();
            &base + &gaussian_matrix(rng, n).scale(eps)
        }
    }
}

/// Symmetric test matrix mixing Gaussian draws with perturbed `S + μJ`.
pub fn mixed_symmetric(rng: &mut SeededRng, n: usize) -> SymmetricMatrix {
    match rng.random_range(0..3) {
        0 => random_symmetric(rng, n),
        1 => random_psd(rng, n).add_reflection(2.0 * gaussian(rng)),
        _ => {
            let base = random_psd(rng, n).add_reflection(2.0 * gaussian(rng));
            let eps = 0.3 * rng.random::<f64>();
            &base + &random_symmetric(rng, n).scale(eps)
        }
    }
}
