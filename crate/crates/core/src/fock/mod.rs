//! Combinatorial Fock basis, fermionic pure states and their representations.

pub mod basis;
pub mod first_quantized;
pub mod random;
pub mod state;
pub mod state_file;
pub mod tensor;
pub mod unitary;

pub use basis::{binomial, enumerate_basis, Mask, OccupationBasis, SystemShape, MAX_MODES};
pub use first_quantized::{embed_first_quantized, FirstQuantizedVector};
pub use random::{
    random_slater_state, random_slater_state_with, random_state, random_state_with, random_unitary,
    seeded_rng, slater_from_frame, trial_rng,
};
pub use state::{slater_state, FermionState};
pub use state_file::{AmplitudeRecord, StateFile};
pub use tensor::{from_antisym_tensor, to_antisym_tensor, AntisymTensor};
pub use unitary::apply_mode_unitary;
