//! Three-qubit open-system entanglement toolkit: squeezed generalized
//! amplitude damping channels, GHZ/W state families, a semidefinite
//! programming solver and genuine multipartite negativity.

pub mod error;
pub mod matcore;
pub mod sdp;
pub mod channel;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use matcore::{Bipartition, ComplexMatrix};
pub use states::{DensityMatrix, Family, NoisyFamilySpec};
