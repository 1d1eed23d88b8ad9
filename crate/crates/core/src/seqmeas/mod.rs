//! Histories, class operators, the decoherence functional and the sequential
//! POVMs built from sharp cells, Gaussian square-root effects or spectral
//! projectors.

mod class_op;
pub mod discrete;
mod history;
pub mod lattice;
mod nogo;
mod povm;

pub use class_op::{
    additivity_defect, class_matrix, class_operator, decoherence_functional, history_probability,
    DecoherenceValue,
};
pub use discrete::{discrete_two_time_povm, discrete_two_time_table};
pub use history::{HistoryEntry, HistorySpec, PovmKind};
pub use lattice::{interference_term, sharp_cell_probabilities, CellDecomposition};
pub use nogo::{compatibility_check, nogo_witness, CompatibilityReport, NogoReport};
pub use povm::{
    gaussian_povm_element, povm_probability, sequential_effect, sequential_matrix,
    sqrt_povm_sequential, EffectOperator,
};
