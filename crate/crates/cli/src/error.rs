use std::path::PathBuf;

use foxlink_core::{ChannelError, MetricsError};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("unknown profile {0:?} (see `foxlink profiles list`)")]
    UnknownProfile(String),
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("malformed result file: {0}")]
    Parse(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}
