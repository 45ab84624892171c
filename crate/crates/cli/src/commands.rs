use crate::error::CliError;
use crate::matrix_file::MatrixFile;
use crate::report::{MapBuilder, Node};
use zcone::audit::{run_audit, AuditSuite};
use zcone::copositivity::{boundary_quadratic_min, is_copositive, CopositiveCone, CopositivityVerdict};
use zcone::dual::{dual_pairing_audit, is_in_dual_z};
use zcone::rank1::{j_balanced_decompose, spectral_rank, verify_certificate, Rank1Certificate, CERTIFICATE_TOL};
use zcone::sdp::{solve_slice_pair, KktResiduals};
use zcone::ztransform::{classify_z, decompose_z};

pub fn classify(file: &MatrixFile, tol: f64) -> Result<Node, CliError> {
    let c = classify_z(&file.matrix, tol)?;
    let interval = c.sw_interval.map(|iv| {
        MapBuilder::new()
            .field("lower", iv.lower)
            .field("upper", iv.upper)
            .build()
    });
    Ok(MapBuilder::new()
        .field("gamma", c.gamma_value)
        .field("verdict", c.verdict.as_str())
        .field("psd_interval", interval)
        .field("maximizer", c.maximizer.as_slice())
        .build())
}

pub fn decompose(file: &MatrixFile, tol: f64) -> Result<Node, CliError> {
    let d = decompose_z(&file.matrix, tol)?;
    Ok(MapBuilder::new()
        .field("gamma", d.gamma)
        .field("p", d.p.as_matrix())
        .field("q", d.q.as_matrix())
        .field("residual", d.residual)
        .field("p_is_psd", d.p_is_psd)
        .field("p_copositivity", copositivity_node(&d.p_copositivity))
        .build())
}

fn copositivity_node(v: &CopositivityVerdict) -> Node {
    MapBuilder::new()
        .field("cone", v.cone.as_str())
        .field("member", v.member)
        .field("strict", v.strict)
        .field("mu_witness", v.mu_witness)
        .field("lambda_min_at_witness", v.lambda_min_at_witness)
        .field("min_quadratic_value", v.min_quadratic_value)
        .field("min_over_cone", v.min_over_cone)
        .build()
}

fn certificate_node(c: &Rank1Certificate) -> Node {
    MapBuilder::new()
        .field("atom_count", c.atoms.len())
        .field(
            "atoms",
            Node::List(c.atoms.iter().map(|p| Node::from(p.as_slice())).collect()),
        )
        .field("reconstruction_error", c.reconstruction_error())
        .field("max_j_residual", c.max_j_residual())
        .field("verified", verify_certificate(c, CERTIFICATE_TOL))
        .build()
}

fn kkt_node(k: &KktResiduals) -> Node {
    MapBuilder::new()
        .field("primal", k.primal)
        .field("dual", k.dual)
        .field("gap", k.gap)
        .build()
}

pub fn dual(file: &MatrixFile, tol: f64, samples: usize, seed: u64) -> Result<Node, CliError> {
    let m = is_in_dual_z(&file.matrix, tol)?;
    let audit = dual_pairing_audit(&file.matrix, samples, seed, tol.max(1e-8))?;
    Ok(MapBuilder::new()
        .field("member", m.member)
        .field("trace_residual", m.trace_residual)
        .field("asymmetry", m.asymmetry)
        .field("certificate", m.certificate.as_ref().map(certificate_node))
        .field(
            "pairing_audit",
            MapBuilder::new()
                .field("samples", audit.samples)
                .field("min_pairing", audit.min_pairing)
                .field("min_scaled_pairing", audit.min_scaled_pairing)
                .field("passed", audit.passed)
                .build(),
        )
        .build())
}

pub fn copositive(file: &MatrixFile, cone: CopositiveCone, tol: f64) -> Result<Node, CliError> {
    let x = file.symmetric(tol)?;
    let v = is_copositive(&x, cone, tol)?;
    Ok(copositivity_node(&v))
}

pub fn rank1(file: &MatrixFile, tol: f64) -> Result<Node, CliError> {
    let x = file.symmetric(tol)?;
    let cert = j_balanced_decompose(&x, tol)?;
    Ok(MapBuilder::new()
        .field("spectral_rank", spectral_rank(&x)?)
        .field("certificate", certificate_node(&cert))
        .build())
}

pub fn slice_sdp(file: &MatrixFile, tol: f64) -> Result<Node, CliError> {
    let c = file.symmetric(tol)?;
    let pair = solve_slice_pair(&c, tol)?;
    let (boundary_min, _) = boundary_quadratic_min(&c)?;
    Ok(MapBuilder::new()
        .field("sdp_value", pair.sdp_value)
        .field("status", pair.solution.status.as_str())
        .field("iterations", pair.solution.iterations)
        .field("dual_objective", pair.solution.dual_objective)
        .field("kkt_residuals", kkt_node(&pair.solution.kkt_residuals))
        .field("x", pair.solution.x.as_matrix())
        .field("y", pair.solution.y.as_slice())
        .field("cp_certificate", certificate_node(&pair.cp_certificate))
        .field("gap", pair.gap)
        .field("boundary_atom_minimum", boundary_min)
        .field("boundary_atom_discrepancy", (pair.sdp_value - boundary_min).abs())
        .build())
}

/// Runs a suite; the report is produced even when checks fail, and the
/// caller turns a failure into exit code 5.
pub fn audit(suite: AuditSuite, n: usize, samples: usize, seed: u64, tol: f64) -> Result<(Node, bool), CliError> {
    let r = run_audit(suite, n, samples, seed, tol)?;
    let checks = r
        .checks
        .iter()
        .map(|c| {
            MapBuilder::new()
                .field("name", c.name)
                .field("trials", c.trials)
                .field("failures", c.failures)
                .field("worst", c.worst)
                .field("first_failure", c.first_failure.clone())
                .field("passed", c.passed())
                .build()
        })
        .collect();
    let node = MapBuilder::new()
        .field("suite", r.suite.as_str())
        .field("n", r.n)
        .field("samples", r.samples)
        .field("checks", Node::List(checks))
        .field("passed", r.passed())
        .build();
    Ok((node, r.passed()))
}
