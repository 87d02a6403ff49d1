use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(String),
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    /// Every failure to run is a usage or input problem as far as the caller
    /// is concerned; fits that run but do not converge exit 0.
    pub fn exit_code(&self) -> u8 {
        2
    }
}

impl From<scurve::Error> for CliError {
    fn from(e: scurve::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
