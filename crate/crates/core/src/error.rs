use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("axis not normalized: |v| = {norm}")]
    AxisNotNormalized { norm: f64 },

    #[error("state outside the Bloch ball: |r| = {norm}")]
    StateOutsideBall { norm: f64 },

    #[error("angle {name} = {value} outside [0, pi]")]
    AngleOutOfRange { name: &'static str, value: f64 },

    #[error("time index {0} out of range (expected 0, 1 or 2)")]
    TimeIndexOutOfRange(usize),

    #[error("invalid moment order {0}: {1}")]
    InvalidMomentOrder(u32, &'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("marginal for interval {interval} is not normalized (sum = {sum})")]
    Unnormalized { interval: &'static str, sum: f64 },

    #[error("singular inversion system")]
    SingularSystem,

    #[error("invalid protocol document: {0}")]
    ProtocolDocument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
