//! Exact one- and two-body reduced density matrices of fermionic
//! `N`-particle states on `M` modes, and numerical certificates for the
//! norm, trace and entropy bounds they satisfy.

pub mod certificates;
pub mod error;
pub mod extremal;
pub mod fock_basis;
pub mod hermitian;
pub mod rdm;
pub mod spectral;
pub mod states;

pub use error::{Error, Result};
pub use hermitian::{CMatrix, HermitianMatrix};
pub use num_complex::Complex64;
pub use states::SectorVector;
