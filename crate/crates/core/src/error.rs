use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("target coincident")]
    TargetCoincident,
    #[error("out of weapons")]
    OutOfWeapons,
    #[error("episode finished")]
    EpisodeFinished,
    #[error("episode not terminal")]
    NotTerminal,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("behavior tree parse error at line {line}: {msg}")]
    TreeParse { line: usize, msg: String },
    #[error("behavior tree build error: {0}")]
    TreeBuild(String),
    #[error("malformed log: {0}")]
    MalformedLog(String),
    #[error("version mismatch: log has {found}, engine expects {expected}")]
    VersionMismatch { expected: String, found: String },
    #[error("no ticks")]
    NoTicks,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),
    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
}
