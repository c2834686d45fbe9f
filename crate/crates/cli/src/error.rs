use std::fmt;

use crate::model::Pos;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Lexical,
    Syntax,
    Resolution,
    Parity,
    Structure,
}

impl Stage {
    fn label(self) -> &'static str {
        match self {
            Stage::Lexical => "lexical error",
            Stage::Syntax => "syntax error",
            Stage::Resolution => "resolution error",
            Stage::Parity => "parity error",
            Stage::Structure => "structure error",
        }
    }
}

/// Anything that stops a DSL file before its directives run.
#[derive(Debug, Clone)]
pub struct DslError {
    pub stage: Stage,
    pub pos: Pos,
    pub message: String,
}

impl DslError {
    pub fn new(stage: Stage, pos: Pos, message: impl Into<String>) -> Self {
        DslError {
            stage,
            pos,
            message: message.into(),
        }
    }

    pub fn line(&self) -> usize {
        self.pos.line
    }

    pub fn col(&self) -> usize {
        self.pos.col
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.pos, self.stage.label(), self.message)
    }
}

impl std::error::Error for DslError {}
