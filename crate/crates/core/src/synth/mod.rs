//! Compilers from target states and unitaries to circuits.

pub mod compile;
pub mod compose;
pub mod continuous;
pub mod graph;
pub mod net;
pub mod sk;
pub mod stateprep;
pub mod su2;

pub(crate) use compile::check_epsilon;
pub use compile::{compile_one_qubit_state, compile_state, compile_to_basis, Compiled, Compiler};
pub use compose::{copies_circuit, separable_circuit};
pub use continuous::{Axis, ContinuousCircuit, ContinuousOp};
pub use graph::{graph_state_circuit, weighted_graph_state_circuit, Graph};
pub use net::Net;
pub use sk::{
    group_commutator_decompose, sk_approximate, SkApprox, SkParams, DEFAULT_L0, DEFAULT_MAX_DEPTH,
};
pub use stateprep::prepare_state_exact;
