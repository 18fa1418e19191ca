use thiserror::Error;

pub type Result<T> = core::result::Result<T, DiracError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiracError {
    #[error("argument outside the domain of {func}: {value}")]
    Domain { func: &'static str, value: f64 },

    #[error("no bound state: Zα = {zalpha} must be below κ = {kappa}")]
    NoBoundState { kappa: u32, zalpha: f64 },

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(&'static str),

    #[error("invalid spinor label: {0}")]
    InvalidLabel(&'static str),

    #[error("unsupported quadrature: {0}")]
    UnsupportedQuadrature(&'static str),

    #[error("unknown special case `{0}` (expected darwin, jl or bel)")]
    UnknownCase(alloc::string::String),

    #[error("unknown reference state")]
    UnknownReference,

    #[error("radial amplitude is singular at r = 0 (γ = {gamma} < 1)")]
    SingularOrigin { gamma: f64 },

    #[error("operator evaluated at a singular point (r = {r}, ϑ = {theta})")]
    SingularPoint { r: f64, theta: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("shooting found {found} of {wanted} eigenvalues; refine the energy mesh")]
    MissedBracket { found: usize, wanted: usize },
}
