//! Seeded property suites over random instances.

use crate::copositivity::{is_copositive_on_boundary, is_copositive_on_l};
use crate::dual::{dual_pairing_audit, is_in_dual_z};
use crate::error::{Error, Result};
use crate::lorentz::Region;
use crate::rank1::{j_balanced_decompose, spectral_rank, verify_certificate, CERTIFICATE_TOL};
use crate::sampling::{self, SeededRng};
use crate::ztransform::{
    classify_z, decompose_z, exp_invariance_check, EXP_CHECK_POINTS, EXP_CHECK_TIMES,
    EXP_CHECK_TOL,
};
use rand::Rng;

/// Dual members drawn by the duality suite; each is paired against
/// `samples` Z-transformations.
pub const DUALITY_MEMBERS: usize = 10;
pub const PAIRING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditSuite {
    Agreement,
    Generators,
    Duality,
    ExpInvariance,
}

impl AuditSuite {
    pub fn as_str(self) -> &'static str {
        match self {
            AuditSuite::Agreement => "agreement",
            AuditSuite::Generators => "generators",
            AuditSuite::Duality => "duality",
            AuditSuite::ExpInvariance => "exp-invariance",
        }
    }
}

impl std::str::FromStr for AuditSuite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "agreement" => Ok(AuditSuite::Agreement),
            "generators" => Ok(AuditSuite::Generators),
            "duality" => Ok(AuditSuite::Duality),
            "exp-invariance" => Ok(AuditSuite::ExpInvariance),
            other => Err(Error::InvalidArgument(format!("unknown audit suite `{other}`"))),
        }
    }
}

/// Outcome of one property over all samples.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditCheck {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Worst value of the property's figure of merit, when it has one.
    pub worst: Option<f64>,
    pub first_failure: Option<String>,
}

impl AuditCheck {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            trials: 0,
            failures: 0,
            worst: None,
            first_failure: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn worst_max(&mut self, v: f64) {
        self.worst = Some(self.worst.map_or(v, |w| w.max(v)));
    }

    fn worst_min(&mut self, v: f64) {
        self.worst = Some(self.worst.map_or(v, |w| w.min(v)));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub suite: AuditSuite,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(AuditCheck::passed)
    }
}

pub fn run_audit(suite: AuditSuite, n: usize, samples: usize, seed: u64, tol: f64) -> Result<AuditReport> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let mut rng = sampling::rng(seed);
    let checks = match suite {
        AuditSuite::Agreement => agreement(&mut rng, n, samples, tol),
        AuditSuite::Generators => generators(&mut rng, n, samples, tol),
        AuditSuite::Duality => duality(&mut rng, n, samples),
        AuditSuite::ExpInvariance => exp_invariance(&mut rng, n, samples, tol),
    };
    Ok(AuditReport {
        suite,
        n,
        samples,
        seed,
        tol,
        checks,
    })
}

fn agreement(rng: &mut SeededRng, n: usize, samples: usize, tol: f64) -> Vec<AuditCheck> {
    let mut z = AuditCheck::new("z_membership_gamma_vs_psd_interval");
    let mut cop = AuditCheck::new("boundary_copositivity_line_search_vs_sphere_qp");
    for k in 0..samples {
        let a = sampling::mixed_test_matrix(rng, n);
        let r = classify_z(&a, tol);
        z.record(r.is_ok(), || format!("sample {k}: {}", r.unwrap_err()));
        let x = sampling::mixed_symmetric(rng, n);
        let r = is_copositive_on_boundary(&x, tol);
        cop.record(r.is_ok(), || format!("sample {k}: {}", r.unwrap_err()));
    }
    vec![z, cop]
}

fn generators(rng: &mut SeededRng, n: usize, samples: usize, tol: f64) -> Vec<AuditCheck> {
    let mut member = AuditCheck::new("generated_z_members_not_outside");
    let mut roundtrip = AuditCheck::new("decomposition_roundtrip");
    let mut cop_b = AuditCheck::new("psd_plus_mu_j_copositive_on_boundary");
    let mut cop_l = AuditCheck::new("psd_plus_nonnegative_mu_j_copositive_on_l");
    let mut slice = AuditCheck::new("atom_sums_decompose");
    let mut dual = AuditCheck::new("dual_generators_accepted");
    for k in 0..samples {
        let m = sampling::z_member(rng, n);
        let r = classify_z(&m.a, tol);
        let ok = matches!(&r, Ok(c) if c.verdict != Region::Outside);
        member.record(ok, || format!("sample {k}: {r:?}"));

        let r = decompose_z(&m.a, tol);
        let bound = 1e-10 * (1.0 + m.a.frobenius_norm());
        if let Ok(d) = &r {
            roundtrip.worst_max(d.residual);
        }
        let ok = matches!(&r, Ok(d) if d.residual <= bound && d.p_copositivity.member);
        roundtrip.record(ok, || format!("sample {k}: {:?}", r.err()));

        let s = sampling::random_psd(rng, n);
        let mu = 10.0 * (rng.random::<f64>() - 0.5);
        let r = is_copositive_on_boundary(&s.add_reflection(mu), tol);
        cop_b.record(matches!(&r, Ok(v) if v.member), || format!("sample {k}, mu {mu}: {r:?}"));
        let r = is_copositive_on_l(&s.add_reflection(mu.abs()), tol);
        cop_l.record(matches!(&r, Ok(v) if v.member), || format!("sample {k}, mu {mu}: {r:?}"));

        let count = rng.random_range(1..=n + 1);
        let (x, _) = sampling::boundary_atom_sum(rng, n, count);
        let r = j_balanced_decompose(&x, tol);
        let ok = match (&r, spectral_rank(&x)) {
            (Ok(c), Ok(rank)) => verify_certificate(c, CERTIFICATE_TOL) && c.atoms.len() == rank,
            _ => false,
        };
        slice.record(ok, || format!("sample {k}: {:?}", r.err()));

        let b = sampling::dual_member(rng, n);
        let r = is_in_dual_z(&b, tol);
        dual.record(matches!(&r, Ok(d) if d.member), || format!("sample {k}: {r:?}"));
    }
    vec![member, roundtrip, cop_b, cop_l, slice, dual]
}

fn duality(rng: &mut SeededRng, n: usize, samples: usize) -> Vec<AuditCheck> {
    let mut pairing = AuditCheck::new("dual_members_pair_nonnegatively");
    for k in 0..DUALITY_MEMBERS {
        let b = sampling::dual_member(rng, n);
        let seed = rng.random::<u64>();
        match dual_pairing_audit(&b, samples, seed, PAIRING_TOL) {
            Ok(a) => {
                pairing.worst_min(a.min_scaled_pairing);
                pairing.record(a.passed, || {
                    format!("member {k}: min scaled pairing {:e}", a.min_scaled_pairing)
                });
            }
            Err(e) => pairing.record(false, || format!("member {k}: {e}")),
        }
    }
    vec![pairing]
}

fn exp_invariance(rng: &mut SeededRng, n: usize, samples: usize, tol: f64) -> Vec<AuditCheck> {
    let mut interior = AuditCheck::new("interior_flows_keep_cone_invariant");
    let mut outside = AuditCheck::new("outside_flows_leave_cone");
    for k in 0..samples {
        let a = sampling::strict_z_member(rng, n).a;
        let seed = rng.random::<u64>();
        let r = classify_z(&a, tol).and_then(|c| {
            if c.verdict != Region::Interior {
                return Ok(true);
            }
            exp_invariance_check(&a, &EXP_CHECK_TIMES, EXP_CHECK_POINTS, seed, EXP_CHECK_TOL)
        });
        interior.record(matches!(r, Ok(true)), || format!("sample {k}: {r:?}"));

        let a = sampling::gaussian_matrix(rng, n);
        let seed = rng.random::<u64>();
        let r = classify_z(&a, tol).and_then(|c| {
            if c.verdict != Region::Outside {
                return Ok(false);
            }
            exp_invariance_check(&a, &EXP_CHECK_TIMES, EXP_CHECK_POINTS, seed, EXP_CHECK_TOL)
        });
        outside.record(matches!(r, Ok(false)), || format!("sample {k}: {r:?}"));
    }
    vec![interior, outside]
}
