//! Quantum weight enumerators of multipartite states and error-correcting
//! codes, computed through the n-qubit parallelized SWAP test.
//!
//! The crate provides:
//!
//! - dense multipartite linear algebra ([`tensor`]) and subset-indexed
//!   vectors with the signed Walsh-Hadamard transform ([`subset`]);
//! - Pauli strings, stabilizer groups, code projectors, and reference states
//!   ([`pauli`], [`stabilizer`], [`states`]);
//! - the parallelized SWAP test by closed form and by statevector circuit
//!   simulation, with a seedable shot sampler ([`swap`]);
//! - the Shor-Laflamme, Rains unitary, and shadow enumerator families, each
//!   with an independent definitional oracle ([`enumerators`]);
//! - applications: code distance, robustness bounds, k-uniformity,
//!   entanglement measures, and sampling budgets ([`analysis`]);
//! - golden-value verification of the reference tables ([`verify`]).
//!
//! ```
//! use qweight::analysis::code_distance;
//! use qweight::stabilizer::named_code;
//!
//! let code = named_code("five-qubit").unwrap().code_projector().unwrap();
//! let report = code_distance(&code.rho, code.dim as f64, &code.shape, 1e-9).unwrap();
//! assert_eq!(report.delta, 3);
//! assert!(report.pure);
//! ```

pub mod analysis;
pub mod enumerators;
pub mod error;
pub mod json;
pub mod pauli;
pub mod random;
pub mod stabilizer;
pub mod states;
pub mod subset;
pub mod swap;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use subset::{SubsetMask, SubsetVector};
pub use tensor::{Operator, StateVector, SubsystemShape};
