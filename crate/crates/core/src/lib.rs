//! Spectral operator calculus on the circle.
//!
//! The crate models the regular dual of the vector-field algebra on S¹ by
//! truncated Fourier series and provides:
//!
//! - exact coefficient arithmetic and L²-bilinear pairings ([`fourier`]),
//! - dense operator matrices on the exponential basis with the bilinear
//!   adjoint and symmetry diagnostics ([`operator`]),
//! - canonical and modified Lie-Poisson structures, cocycle checks and
//!   regular functionals ([`poisson`]),
//! - the Sobolev H^k Hamiltonians h_k, their fields X_k and the second
//!   Hamiltonians of the k = 0, 1 flows ([`sobolev`]),
//! - the symmetry-defect computation that classifies which (α, β) make X_k
//!   Hamiltonian for K = αD/1 + βD³-type structures ([`obstruction`]),
//! - pseudospectral time integration of the geodesic equations with
//!   invariant monitoring ([`flow`]).
//!
//! Every algorithm is generic over the scalar field: `f64` for floating
//! point or [`scalar::Rat`] for exact rational arithmetic.

pub mod error;
pub mod flow;
pub mod fourier;
pub mod grid;
pub mod obstruction;
pub mod operator;
pub mod poisson;
pub mod scalar;
pub mod sobolev;

pub use error::{FlowError, FourierError, ObstructionError, OperatorError, StructureError};
pub use fourier::FourierSeries;
pub use operator::OperatorMatrix;
pub use poisson::{CocycleSpec, RegularFunctional};
pub use scalar::{Rat, Scalar};
