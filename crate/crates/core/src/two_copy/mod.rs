//! Matrix-free observables on two copies of a fermionic state.

mod observables;
mod operator;

pub use observables::{
    antisym_projector, even_minus_patterns, observable_a, observable_a_tilde, observable_af,
    observable_af_prime, observable_af_with_sign, observable_o_nm, purity_observable_on_block,
    swap_operator, sym_projector, Sign,
};
pub use operator::{
    doubled_dim, expectation, hermiticity_defect, inner, CopyPair, DoubledOperator, Expectation,
    MAX_DOUBLED_DIM,
};
