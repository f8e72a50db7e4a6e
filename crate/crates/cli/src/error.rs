use std::fmt;

/// Pipeline stage a failure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    Ingest,
    Split,
    Feature,
    Train,
    Eval,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Ingest => "ingest",
            Stage::Split => "split",
            Stage::Feature => "feature",
            Stage::Train => "train",
            Stage::Eval => "eval",
            Stage::Output => "output",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("[{stage}] {message}")]
pub struct HarnessError {
    pub stage: Stage,
    pub message: String,
}

impl HarnessError {
    pub fn new(stage: Stage, message: impl fmt::Display) -> Self {
        HarnessError {
            stage,
            message: message.to_string(),
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

/// Tags any displayable error with a stage.
pub trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T>;
    fn stage_with(self, stage: Stage, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T, E: fmt::Display> StageExt<T> for std::result::Result<T, E> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(|e| HarnessError::new(stage, e))
    }

    fn stage_with(self, stage: Stage, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| HarnessError::new(stage, format!("{}: {e}", context())))
    }
}
