use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] zcone::Error),
    #[error("audit failed: {0}")]
    AuditFailed(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 parse, 3 precondition, 4 numerical, 5 oracle disagreement.
    pub fn exit_code(&self) -> i32 {
        use zcone::Error as E;
        match self {
            CliError::Parse(_) => 2,
            CliError::Io(_) => 4,
            CliError::AuditFailed(_) => 5,
            CliError::Core(e) => match e {
                E::ConvergenceFailure { .. }
                | E::LinearAlgebraFailure(_)
                | E::CertificateFailure(_) => 4,
                E::OracleDisagreement(_) => 5,
                E::DimensionMismatch { .. }
                | E::DimensionTooSmall { .. }
                | E::NonFinite
                | E::NotSymmetric { .. }
                | E::NotSkew { .. }
                | E::NotOnBoundary { .. }
                | E::NotAZTransformation { .. }
                | E::NotPsd { .. }
                | E::NotOnSlice { .. }
                | E::InvalidArgument(_) => 3,
            },
        }
    }
}
