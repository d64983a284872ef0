use hermsph::exact_arith::ArithError;
use hermsph::hall_littlewood::HlError;
use hermsph::padic_cartan::CartanError;
use hermsph::spherical::SphError;
use hermsph::weyl_roots::WeylError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Precision(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Precision(_) => 3,
        }
    }
}

impl From<WeylError> for CliError {
    fn from(e: WeylError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<ArithError> for CliError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::RankMismatch { .. } => CliError::Invalid(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<HlError> for CliError {
    fn from(e: HlError) -> Self {
        match e {
            HlError::Arith(a) => a.into(),
            HlError::NotInvariant { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<SphError> for CliError {
    fn from(e: SphError) -> Self {
        match e {
            SphError::Arith(a) => a.into(),
            SphError::Weyl(w) => w.into(),
            SphError::Hl(h) => h.into(),
            SphError::Resampling(_) => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CartanError> for CliError {
    fn from(e: CartanError) -> Self {
        match e {
            CartanError::PrecisionExhausted(_) => CliError::Precision(e.to_string()),
            CartanError::Internal(_) => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Invalid(format!("malformed JSON: {e}"))
    }
}
