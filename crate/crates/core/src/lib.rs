//! Numerical verification of CHSH-type correlation bounds.
//!
//! Three tracks are evaluated side by side:
//!
//! * classical local hidden-variable models ([`lhv`]), bounded by 2;
//! * two-qubit singlet correlations ([`quantum`]), bounded by 2√2;
//! * vector-valued response functions in the geometric algebra of R³
//!   ([`ga_values`], built on [`ga`]), also bounded by 2√2.
//!
//! [`optimizer`] maximizes each expression over its admissible domain and
//! [`cli`] wraps everything into reproducible, machine-readable reports.

pub mod cli;
pub mod configuration;
pub mod error;
pub mod ga;
pub mod ga_values;
pub mod lhv;
pub mod optimizer;
pub mod quantum;

pub use configuration::{Angles, Configuration};
pub use error::{Error, Result};
pub use ga::{Multivector, UnitVector3, Vector3};

/// Bell-CHSH bound for local hidden-variable models.
pub const CLASSICAL_BOUND: f64 = 2.0;

/// Tsirelson bound, 2√2.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;
