//! Quantum bounds for synchronous games: explicit rank-one and unitary
//! strategies with local search (lower bounds), and the cost-matrix
//! eigenvalue bound (upper bounds).

mod bipartite;
mod cost;
mod cycle;
mod frame;
mod q1;
mod unitary;

pub use bipartite::{q1_bipartite_search, q1_bipartite_value, BipartiteReport, BipartiteStrategy};
pub use cost::{
    cost_free_basis, cost_matrix, qc_bound_for, qc_sync_upper_bound, CostFreeBasis, CostFreeElement, QcOptions,
    QcReport,
};
pub use cycle::{
    cycle_angle, cycle_cos, cycle_entangled_state, cycle_q1_bipartite_value, cycle_q1_closed_form,
    cycle_qc_closed_form, cycle_rotation, cycle_rotation_frame, CycleQcCertificate,
};
pub use frame::{random_mask, random_unitary, Frame, FrameData};
pub use q1::{q1_search, q1_sync_value, Q1Options, Q1Report};
pub use unitary::{check_order3_unitary, labelling_unitaries, unitary_value_z3, xi};
