use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the geometry, constraint and classification layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("string tension must be finite, got {0}")]
    NonFiniteTension(f64),

    #[error("negative string tension {0} requires allow_negative_deficits")]
    NegativeTension(f64),

    #[error("string tension {0} gives a non-positive cone angle (Gμ must be < 1/4)")]
    ConeAngleNonPositive(f64),

    #[error("deficit angle {0} must be < 2π")]
    DeficitTooLarge(f64),

    #[error("surface is disconnected; check each component separately")]
    DisconnectedSurface,

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("order n = {0} is not allowed (need n > -2)")]
    OrderOutOfRange(f64),

    #[error("order n = {0} is not allowed (need integer n >= -1)")]
    PoleOrderTooLow(i64),

    #[error("integration path passes through the singular point")]
    PathThroughOrigin,

    #[error("sample count must be positive")]
    ZeroSamples,

    #[error("cone metric factor c must be positive and finite, got {0}")]
    InvalidMetricFactor(f64),

    #[error("loop vertex {index} has non-positive or non-finite radius {radius}")]
    InvalidRadius { index: usize, radius: f64 },

    #[error("loop vertex {index} has non-finite angle {angle}")]
    InvalidAngle { index: usize, angle: f64 },

    #[error("loop needs at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },

    #[error("loop is not closed")]
    OpenLoop,

    #[error("loop does not wind around the cone point")]
    ZeroWinding,

    #[error("energy scales must be positive and finite (eta = {eta}, m_pl = {m_pl})")]
    InvalidEnergyScale { eta: f64, m_pl: f64 },

    #[error("observational bound '{name}' must be positive and finite, got {value}")]
    InvalidBound { name: String, value: f64 },

    #[error("string count {count} exceeds the per-horizon cap {cap}")]
    CountAboveCap { count: usize, cap: usize },

    #[error("unknown bound '{0}'")]
    UnknownBound(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
