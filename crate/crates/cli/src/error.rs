//! Diagnostics and the exit-code contract: 0 success, 1 verification
//! failure, 2 input error.

use std::fmt;

use hyperloc::charcycle::CharCycleError;
use hyperloc::conic::ConicError;
use hyperloc::euler::EulerError;
use hyperloc::fan::FanError;
use hyperloc::lefschetz::LefschetzError;
use hyperloc::spectral::SpectralError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    CharCycle(#[from] CharCycleError),
    #[error(transparent)]
    Lefschetz(#[from] LefschetzError),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot access `{path}`: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema version {0} is not supported, expected 1")]
    Version(u32),
    #[error("{at}: {reason}")]
    Schema { at: String, reason: String },
    #[error("{at}: {source}")]
    Engine { at: String, source: EngineError },
    #[error("`{command}` does not apply to a {kind} problem")]
    WrongKind { command: &'static str, kind: &'static str },
    #[error("{0}")]
    Usage(String),
}

/// Leading identifier of a `Debug` rendering, i.e. the variant name.
fn variant<E: fmt::Debug>(e: &E) -> String {
    format!("{e:?}").chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

impl EngineError {
    /// `module::Variant` of the innermost engine error.
    pub fn name(&self) -> String {
        match self {
            EngineError::Fan(e) => format!("fan::{}", variant(e)),
            EngineError::Spectral(e) => format!("spectral::{}", variant(e)),
            EngineError::Conic(ConicError::Fan(e)) => format!("fan::{}", variant(e)),
            EngineError::Conic(ConicError::Spectral(e)) => format!("spectral::{}", variant(e)),
            EngineError::Conic(e) => format!("conic::{}", variant(e)),
            EngineError::Euler(e) => format!("euler::{}", variant(e)),
            EngineError::CharCycle(CharCycleError::Euler(e)) => format!("euler::{}", variant(e)),
            EngineError::CharCycle(e) => format!("charcycle::{}", variant(e)),
            EngineError::Lefschetz(LefschetzError::Conic { source, .. }) => {
                EngineError::Conic(source.clone()).name()
            }
            EngineError::Lefschetz(LefschetzError::Euler(e)) => format!("euler::{}", variant(e)),
            EngineError::Lefschetz(LefschetzError::CharCycle(e)) => EngineError::CharCycle(e.clone()).name(),
            EngineError::Lefschetz(e) => format!("lefschetz::{}", variant(e)),
        }
    }

    /// A disagreement between the two localization traces is a failed
    /// verification; everything else rejects the input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            EngineError::Conic(ConicError::LocalizationMismatch { .. })
                | EngineError::Lefschetz(LefschetzError::Conic { source: ConicError::LocalizationMismatch { .. }, .. })
        )
    }
}

impl CliError {
    pub fn engine(at: &str, e: impl Into<EngineError>) -> CliError {
        CliError::Engine { at: at.to_string(), source: e.into() }
    }

    pub fn name(&self) -> String {
        match self {
            CliError::Engine { source, .. } => source.name(),
            other => format!("input::{}", variant(other)),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine { source, .. } if source.is_verification_failure() => EXIT_FAIL,
            _ => EXIT_INPUT,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyperloc::arith::Gq;

    #[test]
    fn names_and_codes() {
        let e = CliError::engine("localization", ConicError::Equivariance { face: 0, coface: 2, degree: 0 });
        assert_eq!(e.name(), "conic::Equivariance");
        assert_eq!(e.exit_code(), EXIT_INPUT);
        assert!(e.to_string().starts_with("localization: "));
        let m = ConicError::LocalizationMismatch { expanding: Box::new(Gq::int(1)), shrinking: Box::new(Gq::int(0)) };
        let e = CliError::engine("c", LefschetzError::Conic { cell: 3, source: m });
        assert_eq!(e.name(), "conic::LocalizationMismatch");
        assert_eq!(e.exit_code(), EXIT_FAIL);
        assert!(e.to_string().contains("cell 3"));
        let e = CliError::engine("f", ConicError::Fan(FanError::SingularMap));
        assert_eq!(e.name(), "fan::SingularMap");
        assert_eq!(CliError::Version(7).name(), "input::Version");
    }
}
