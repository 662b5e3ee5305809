//! Work statistics of a driven qubit and Leggett-Garg tests of macrorealism.
//!
//! A qubit with Hamiltonian `H = (eps/2) a.sigma` is quenched through three
//! axes `a0 -> a1 -> a2`, starting from the thermal state of `H0`. Work is
//! defined by one of three schemes (two-point measurement, full counting
//! statistics, Margenau-Hill) and fed into moment-based and
//! characteristic-function Leggett-Garg combinations.

pub mod error;
mod export;
pub mod lg;
pub mod optimize;
pub mod oracle;
pub mod pauli;
pub mod protocol;
pub mod schemes;
pub mod simplex;
pub mod sweep;

pub use error::{Error, Result};
pub use lg::{l_lambda, m_k, ClassicalBound, LgQuantity, LgReport, LgValue, QuantityKind};
pub use oracle::{feasible, Feasibility, MarginalTriple, ThreeTimeDistribution};
pub use pauli::{BlochVector, ComplexScalar, Matrix2, Sign};
pub use protocol::{thermal_state, CoplanarAngles, Protocol, QubitState};
pub use schemes::{Interval, JointWorkDistribution, SchemeKind, WorkDistribution};
