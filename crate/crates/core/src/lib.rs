//! Entanglement measures for pure states of N identical fermions.
//!
//! States live in the occupation basis of `binomial(d, N)` Slater
//! determinants ([`fock`]). From there the crate computes M-particle reduced
//! density matrices and their purities ([`rdm`]), classifies every `M : N-M`
//! bipartition and evaluates the normalized multipartite concurrence
//! ([`concurrence`]), builds matrix-free observables on two copies of the
//! state whose expectation values reproduce those purities ([`two_copy`]),
//! and runs seeded verification campaigns ([`analysis`]).

pub mod analysis;
pub mod concurrence;
pub mod error;
pub mod fock;
pub mod rdm;
pub mod tolerance;
pub mod two_copy;

pub use concurrence::{
    alpha, c_ff_purity, c_ff_wedge, classify_bipartition, fghz_state, multipartite_concurrence,
    slater_mixture, slater_rank_two_fermions, ConcurrenceReport, MixtureMethod, SlaterMixture,
    Verdict,
};
pub use error::{Error, Result};
pub use fock::{FermionState, SystemShape};
pub use rdm::{purity, purity_deficit, purity_direct, reduce, DensityMatrix};
pub use tolerance::Tolerances;
