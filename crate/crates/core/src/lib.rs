//! Cyclic-group (`Z_n`) decompositions of series, higher-order α-hyperbolic
//! functions, α-circulant matrices and their ψ-deformations, together with a
//! registry of numerical identity checks.

pub mod cyclic;
pub mod demoivre;
pub mod error;
pub mod hyperbolic;
pub mod matrix;
pub mod psi;
pub mod report;
pub mod series;
pub mod suite;

pub use cyclic::{omega_scale, project_pointwise, project_series, AlphaRoot, CyclicContext};
pub use error::{Error, Result};
pub use hyperbolic::{g_eval, h_eval, laurent_component, EvalMethod, HyperbolicFamily};
pub use matrix::ComplexMatrix;
pub use report::IdentityReport;
pub use series::{EvalDomain, TruncatedSeries};
pub use suite::{CheckRegistry, IdentityCheck, Suite, SuiteConfig, SuiteSelection};
