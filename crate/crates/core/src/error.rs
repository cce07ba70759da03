use alloc::string::String;

/// Errors raised by the pipeline. Runtime conditions that the driving
/// protocol treats as values (out-of-range projections, exhausted routes)
/// are not errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("depth {0} m outside the encodable range [0, 1000]")]
    DepthOutOfRange(f64),
    #[error("shape mismatch for {name}: expected {expected}, found {found}")]
    ShapeMismatch {
        name: String,
        expected: String,
        found: String,
    },
    #[error("missing tensor `{0}` in weight bundle")]
    MissingTensor(String),
    #[error("loss weights give a zero denominator for control weight {0}")]
    DegenerateLossWeights(&'static str),
    #[error("unknown policy variant `{0}`")]
    UnknownVariant(String),
    #[error("unknown scenario kind `{0}`")]
    UnknownScenario(String),
    #[error("unknown weather preset `{0}`")]
    UnknownWeather(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invalid world map: {0}")]
    InvalidMap(String),
    #[error("invalid route: {0}")]
    InvalidRoute(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("policy variant {0} needs a network weight bundle")]
    MissingWeights(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
