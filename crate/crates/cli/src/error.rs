use std::fmt;

use impa_core::Error;

/// Exit code 2: bad input. Exit code 1: the computation itself failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Input,
    Numerical,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Input,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Numerical,
            message: message.into(),
        }
    }

    /// Classifies a library error, prefixing `context` to the message.
    pub fn from_core(err: Error, context: impl fmt::Display) -> Self {
        let kind = match err {
            Error::InvalidParameter { .. }
            | Error::EmptyGrid
            | Error::DegenerateCalibration { .. }
            | Error::InvalidOrder(_) => Kind::Input,
            _ => Kind::Numerical,
        };
        Self {
            kind,
            message: format!("{context}: {err}"),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Input => 2,
            Kind::Numerical => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            Kind::Input => "input",
            Kind::Numerical => "numerical",
        };
        // diagnostics stay on one line
        write!(
            f,
            "error[{tag}]: {}",
            self.message.replace(['\n', '\r'], " ")
        )
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(format!("io: {e}"))
    }
}
