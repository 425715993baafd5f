use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("antipodal inputs: |z + w| = {norm:.3e}")]
    Antipodal { norm: f64 },

    #[error("pole singularity at theta = {theta}")]
    Pole { theta: f64 },

    #[error("shooting bracket not found for mu in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("unsupported radius {radius}: profile extension needs r <= pi/2")]
    UnsupportedRadius { radius: f64 },

    #[error("profile check failed: {0}")]
    Profile(String),

    #[error("mesh level {0} exceeds the maximum of 8")]
    MeshLevel(usize),

    #[error("domain mask selects no triangles")]
    EmptyDomain,

    #[error("vertex {vertex} has zero mass support")]
    SingularMass { vertex: usize },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("factorization failed: matrix not positive definite at pivot {0}")]
    Factorization(usize),

    #[error("points too close to the diagonal: |z - w| = {distance:.3e} < {margin}")]
    NearDiagonal { distance: f64, margin: f64 },

    #[error("no critical pair found (best residual {best_residual:.3e})")]
    PairNotFound { best_residual: f64 },

    #[error("test function vanishes on the support")]
    ZeroDenominator,

    #[error("check failed: {0}")]
    Check(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
