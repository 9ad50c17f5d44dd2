use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wavenumber must be positive and finite, got {0}")]
    NonPositiveWavenumber(f64),

    #[error("matrix is not unitary (max |U^dagger U - I| = {max_deviation:e})")]
    NotUnitary { max_deviation: f64 },

    #[error("interaction is opaque at k = {k} (|T| = {transmission:e}); transfer matrix undefined")]
    OpaqueInteraction { k: f64, transmission: f64 },

    #[error("interactions must be strictly ordered by position, got xi = {left} before xi = {right}")]
    BadOrdering { left: f64, right: f64 },

    #[error("denominator vanishes at k = {k} (|denominator| = {magnitude:e})")]
    DegenerateDenominator { k: f64, magnitude: f64 },

    #[error("tangent-equation right-hand side has a pole at k = {0}")]
    PoleAt(f64),

    #[error("resonance right-hand side requested for a configuration outside cases I-III")]
    WrongClass,

    #[error("linear system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("invalid wavenumber range [{k_min}, {k_max}] with {grid} grid points")]
    InvalidRange { k_min: f64, k_max: f64, grid: usize },

    #[error("all quartic coefficients vanish; the configuration belongs to a classified case")]
    DegenerateQuartic,

    #[error("the quartic has no positive root in k^2")]
    NoPositiveRoot,

    #[error("quartic coefficients are undefined for infinite lengths")]
    InfiniteLength,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
