use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// No solitary wave exists for the requested parameters.
    #[error("no solitary wave for k = {k}, c = {c}: requires k > 0 and c > 3k")]
    Existence { k: f64, c: f64 },

    #[error("profile integration did not converge: {0}")]
    Convergence(String),

    #[error("symbol is singular at the requested argument: {0}")]
    SingularArgument(String),

    #[error("weight nu = {nu} outside the admissible range (0, {nu0})")]
    WeightOutOfRange { nu: f64, nu0: f64 },

    #[error("zero Fourier mode is singular for nu = 0 and eta = {eta} != 0")]
    SingularMode { eta: f64 },

    #[error("domain too small: {0}")]
    DomainTooSmall(String),

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("near-zero eigenvalue cluster is not separated: {0}")]
    ClusterAmbiguity(String),

    #[error("resonance pair not found for eta = {eta}: {reason}")]
    MatchFailure { eta: f64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
