//! Rank-one decompositions on the slice `⟨J, X⟩ = 0`.
//!
//! Every PSD matrix with `⟨J, X⟩ = 0` is a finite sum `Σ ppᵀ` with each
//! `p ∈ ∂L`. [`j_balanced_decompose`] builds such a sum from a spectral
//! factorization by repeatedly mixing a factor with positive J-value and
//! one with negative J-value until one of them lands on the boundary.

use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, frobenius_inner, is_psd, lambda_min, norm2, Matrix, SymmetricMatrix};
use crate::lorentz::j_form;

/// Eigenvalues at or below this multiple of `‖X‖_F` are dropped.
pub const RANK_CUTOFF_REL: f64 = 1e-12;
/// Certificates are always checked at least this tightly.
pub const CERTIFICATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Certificate {
    /// Atoms `p` with `p₀ ≥ 0` and `pᵀJp ≈ 0`.
    pub atoms: Vec<Vec<f64>>,
    pub target: SymmetricMatrix,
}

impl Rank1Certificate {
    /// `Σ ppᵀ`.
    pub fn reconstruct(&self) -> SymmetricMatrix {
        self.atoms
            .iter()
            .fold(SymmetricMatrix::zeros(self.target.dim()), |acc, p| {
                &acc + &SymmetricMatrix::outer(p)
            })
    }

    pub fn reconstruction_error(&self) -> f64 {
        (&*self.reconstruct() - &*self.target).frobenius_norm()
    }

    /// Largest `|pᵀJp| / (1 + ‖p‖²)` over the atoms.
    pub fn max_j_residual(&self) -> f64 {
        self.atoms
            .iter()
            .map(|p| j_form(p).abs() / (1.0 + p.iter().map(|v| v * v).sum::<f64>()))
            .fold(0.0, f64::max)
    }
}

/// Number of eigenvalues above `RANK_CUTOFF_REL·‖X‖_F`.
pub fn spectral_rank(x: &SymmetricMatrix) -> Result<usize> {
    let cut = RANK_CUTOFF_REL * x.frobenius_norm();
    Ok(eigvalsh(x)?.into_iter().filter(|&l| l > cut).count())
}

/// Decomposes a PSD `X` with `⟨J, X⟩ = 0` into boundary atoms.
pub fn j_balanced_decompose(x: &SymmetricMatrix, tol: f64) -> Result<Rank1Certificate> {
    let n = x.dim();
    let scale = 1.0 + x.frobenius_norm();
    if !is_psd(x, tol)? {
        return Err(Error::NotPsd {
            lambda_min: lambda_min(x)?,
        });
    }
    let slice = frobenius_inner(x, &Matrix::reflection(n))?;
    if slice.abs() > tol * scale {
        return Err(Error::NotOnSlice { residual: slice });
    }

    let eig = eigh(x)?;
    let cut = RANK_CUTOFF_REL * x.frobenius_norm();
    let mut pending: Vec<Vec<f64>> = (0..n)
        .filter(|&k| eig.values[k] > cut)
        .map(|k| {
            let s = eig.values[k].sqrt();
            eig.vector(k).into_iter().map(|v| v * s).collect()
        })
        .collect();
    let rank = pending.len();
    let mut atoms = Vec::with_capacity(rank);

    let balanced = |q: &[f64]| j_form(q).abs() <= tol * (1.0 + norm2(q).powi(2));
    for _ in 0..rank {
        if pending.iter().all(|q| balanced(q)) {
            break;
        }
        let (Some(i), Some(j)) = (
            argmax_by(&pending, j_form),
            argmax_by(&pending, |q| -j_form(q)),
        ) else {
            break;
        };
        let (qi, qj) = (&pending[i], &pending[j]);
        let (ji, jj) = (j_form(qi), j_form(qj));
        if !(ji > 0.0 && jj < 0.0) {
            break;
        }
        let alpha = mixing_root(qi, qj, ji, jj);
        let s = 1.0 / (1.0 + alpha * alpha).sqrt();
        let y1: Vec<f64> = qi.iter().zip(qj).map(|(a, b)| (a + alpha * b) * s).collect();
        let y2: Vec<f64> = qj.iter().zip(qi).map(|(b, a)| (b - alpha * a) * s).collect();
        atoms.push(y1);
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        pending.swap_remove(hi);
        pending.swap_remove(lo);
        pending.push(y2);
    }
    if pending.iter().any(|q| !balanced(q)) {
        return Err(Error::ConvergenceFailure {
            what: "rank-one balancing",
            iterations: rank,
        });
    }
    atoms.extend(pending);
    for p in &mut atoms {
        if p[0] < 0.0 {
            p.iter_mut().for_each(|v| *v = -*v);
        }
    }

    let cert = Rank1Certificate {
        atoms,
        target: x.clone(),
    };
    if !verify_certificate(&cert, tol.max(CERTIFICATE_TOL)) {
        return Err(Error::CertificateFailure(format!(
            "rank-one certificate fails: reconstruction {:e}, J-residual {:e}",
            cert.reconstruction_error(),
            cert.max_j_residual()
        )));
    }
    Ok(cert)
}

fn argmax_by(qs: &[Vec<f64>], f: impl Fn(&[f64]) -> f64) -> Option<usize> {
    qs.iter()
        .enumerate()
        .map(|(k, q)| (k, f(q)))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k)
}

/// Root of `jj·α² + 2cα + ji = 0` with the smaller magnitude; real because
/// `ji·jj < 0`.
fn mixing_root(qi: &[f64], qj: &[f64], ji: f64, jj: f64) -> f64 {
    let c = qi[0] * qj[0] - qi[1..].iter().zip(&qj[1..]).map(|(a, b)| a * b).sum::<f64>();
    let disc = (c * c - ji * jj).max(0.0).sqrt();
    let big = -(c + c.signum() * disc);
    let big = if big == 0.0 { disc } else { big };
    let r1 = big / jj;
    let r2 = ji / big;
    if r1.abs() <= r2.abs() {
        r1
    } else {
        r2
    }
}

/// Checks a certificate independently of how it was produced: every atom
/// has `p₀ ≥ −tol` and `|pᵀJp| ≤ tol·(1 + ‖p‖²)`, the atoms reconstruct the
/// target within `tol·(1 + ‖target‖_F)`, and there are no more atoms than
/// the spectral rank of the target.
pub fn verify_certificate(cert: &Rank1Certificate, tol: f64) -> bool {
    let n = cert.target.dim();
    if cert.atoms.iter().any(|p| p.len() != n || p.iter().any(|v| !v.is_finite())) {
        return false;
    }
    let atoms_ok = cert.atoms.iter().all(|p| {
        p[0] >= -tol && j_form(p).abs() <= tol * (1.0 + norm2(p).powi(2))
    });
    let recon_ok = cert.reconstruction_error() <= tol * (1.0 + cert.target.frobenius_norm());
    let count_ok = matches!(spectral_rank(&cert.target), Ok(r) if cert.atoms.len() <= r);
    atoms_ok && recon_ok && count_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{classify, tail_rotation, Region};
    use crate::sampling::{boundary_atom_sum, random_psd, rng, unit_vector};
    use crate::DEFAULT_TOL;
    use proptest::prelude::*;

    fn orthogonal(r: &mut crate::sampling::SeededRng, m: usize) -> Matrix {
        // Gram–Schmidt on Gaussian columns.
        let mut cols: Vec<Vec<f64>> = Vec::new();
        while cols.len() < m {
            let mut v = unit_vector(r, m);
            for c in &cols {
                let d = crate::linalg::dot(&v, c);
                v.iter_mut().zip(c).for_each(|(a, b)| *a -= d * b);
            }
            let nv = norm2(&v);
            if nv > 1e-6 {
                cols.push(v.into_iter().map(|a| a / nv).collect());
            }
        }
        let mut q = Matrix::zeros(m);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..m {
                q[(i, j)] = c[i];
            }
        }
        q
    }

    #[test]
    fn single_atom() {
        let p = [1.0, 0.6, 0.8];
        let x = SymmetricMatrix::outer(&p);
        let cert = j_balanced_decompose(&x, DEFAULT_TOL).unwrap();
        assert_eq!(cert.atoms.len(), 1);
        for (a, b) in cert.atoms[0].iter().zip(p) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_slice_matrix() {
        let x = SymmetricMatrix::from_diagonal(&[2.0, 1.0, 1.0]);
        let cert = j_balanced_decompose(&x, DEFAULT_TOL).unwrap();
        assert_eq!(cert.atoms.len(), 3);
        assert!(cert.reconstruction_error() <= 1e-8);
        assert!(verify_certificate(&cert, 1e-8));
        for p in &cert.atoms {
            assert_eq!(classify(p, 1e-8).unwrap(), Region::Boundary);
        }
    }

    #[test]
    fn two_atom_sum() {
        let x = &SymmetricMatrix::outer(&[1.0, 1.0, 0.0]) + &SymmetricMatrix::outer(&[1.0, 0.0, 1.0]);
        let cert = j_balanced_decompose(&x, DEFAULT_TOL).unwrap();
        assert!(cert.reconstruction_error() <= 1e-8);
        assert!(cert.atoms.len() <= 2);
    }

    #[test]
    fn precondition_errors() {
        let x = SymmetricMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(j_balanced_decompose(&x, DEFAULT_TOL), Err(Error::NotPsd { .. })));
        let x = SymmetricMatrix::identity(3);
        assert!(matches!(j_balanced_decompose(&x, DEFAULT_TOL), Err(Error::NotOnSlice { .. })));
    }

    #[test]
    fn verify_examples() {
        let empty = Rank1Certificate {
            atoms: vec![],
            target: SymmetricMatrix::zeros(3),
        };
        assert!(verify_certificate(&empty, 1e-8));
        assert!(j_balanced_decompose(&SymmetricMatrix::zeros(3), DEFAULT_TOL)
            .unwrap()
            .atoms
            .is_empty());

        let x = SymmetricMatrix::from_diagonal(&[2.0, 1.0, 1.0]);
        let mut cert = j_balanced_decompose(&x, DEFAULT_TOL).unwrap();
        cert.atoms[0][0] += 1e-3;
        assert!(!verify_certificate(&cert, 1e-8));

        let too_many = Rank1Certificate {
            atoms: vec![vec![0.5, 0.5], vec![0.5, 0.5], vec![0.5, 0.5], vec![0.5, 0.5]],
            target: SymmetricMatrix::outer(&[1.0, 1.0]),
        };
        assert!(!verify_certificate(&too_many, 1e-8));
    }

    #[test]
    fn random_atom_sums() {
        let mut r = rng(404);
        for n in 2..9 {
            for count in 1..=n + 1 {
                let (x, _) = boundary_atom_sum(&mut r, n, count);
                let cert = j_balanced_decompose(&x, DEFAULT_TOL).unwrap();
                assert!(verify_certificate(&cert, 1e-8));
                assert_eq!(cert.atoms.len(), spectral_rank(&x).unwrap());
            }
        }
    }

    #[test]
    fn general_psd_on_slice() {
        // Shift a random PSD matrix onto the slice by adding s·e₀e₀ᵀ.
        let mut r = rng(9);
        for n in 2..7 {
            for _ in 0..20 {
                let mut x = random_psd(&mut r, n).into_matrix();
                let jt = frobenius_inner(&x, &Matrix::reflection(n)).unwrap();
                if jt < 0.0 {
                    x[(0, 0)] -= jt;
                } else {
                    continue;
                }
                let x = SymmetricMatrix::try_from_matrix(x, 0.0).unwrap();
                let cert = j_balanced_decompose(&x, DEFAULT_TOL).unwrap();
                assert!(verify_certificate(&cert, 1e-8));
            }
        }
    }

    proptest! {
        #[test]
        fn tail_rotation_invariance(seed in 0u64..2000, n in 2usize..7, count in 1usize..6) {
            let mut r = rng(seed);
            let (x, _) = boundary_atom_sum(&mut r, n, count);
            let w = tail_rotation(&orthogonal(&mut r, n - 1));
            let y = x.congruence(&w.transpose());
            let cert = j_balanced_decompose(&y, DEFAULT_TOL).unwrap();
            prop_assert!(verify_certificate(&cert, 1e-8));
        }
    }
}
