use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("order real part {r} exceeds the configured bound {max}")]
    OrderOutOfRange { r: f64, max: f64 },

    /// A nonuniform evaluator was asked for a point inside the coalescence
    /// band; the caller should use the uniform evaluator instead.
    #[error("parameter {param} lies in the coalescence band; use the uniform evaluator")]
    DispatchToUniform { param: f64 },

    #[error("parameter {param} lies outside the uniform window [{lo}, {hi}]")]
    Window { param: f64, lo: f64, hi: f64 },

    #[error("pole of {0}")]
    Pole(&'static str),

    #[error("integer order {0} is degenerate for the series representation")]
    DegenerateOrder(f64),

    #[error("requested accuracy not reached (achieved relative error {achieved:e})")]
    Accuracy { achieved: f64 },

    #[error("coset sum diverges for Re(s) = {0} <= 1")]
    Divergence(f64),

    #[error("parameters outside the oracle's supported range: {0}")]
    OracleRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
