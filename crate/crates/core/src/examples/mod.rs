//! The two worked examples: `C S_3` over `C Z_2` and `M_3` over `M_2`.

pub mod builders;
pub mod cocycle;
pub mod run;

use alloc::string::String;

use crate::connection::ConnectionError;
use crate::dga::DgaError;
use crate::fibration::FibrationError;
use crate::ksgns::KsgnsError;
use crate::spectral::SpectralError;

pub use builders::*;
pub use cocycle::{solve_s3_cocycle_family, CocycleFamily};
pub use run::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExampleError {
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Ksgns(#[from] KsgnsError),
    #[error("{0}")]
    Construction(String),
}
