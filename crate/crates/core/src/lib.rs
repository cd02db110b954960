//! Coupling calculators and open-system simulators for hybrid mechanical
//! quantum systems: qubits, spins and atoms coupled to a vibrating resonator.
//!
//! Frequencies and rates are angular (rad/s) throughout. Operators live on a
//! truncated tensor-product space whose factor 0 is the slowest-varying
//! index; qubits use the ordered basis `(|g>, |e>)`.

pub mod constants;
pub mod couplings;
pub mod error;
pub mod fit;
pub mod gaussian;
pub mod lindblad;
pub mod ode;
pub mod operator;
pub mod scenarios;
pub mod series;

pub use error::{Error, Result};
pub use gaussian::{CovarianceReport, GaussianModel};
pub use lindblad::LindbladModel;
pub use series::TimeSeries;
pub use operator::{HilbertSpace, Operator, QuantumState};
pub use scenarios::Scenario;
