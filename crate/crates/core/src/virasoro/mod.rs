//! The central extension `L_p` of the three-point Witt algebra, realized on
//! the level-1/2 Heisenberg Fock space.

mod fields;
pub mod ope;

pub use fields::{ModeOperator, NormalOrdering, VirasoroModule};
pub use ope::{
    definition_bracket, definition_data, mode_bracket_from_ope, wick_bracket, wick_data, Family,
    FieldName, ModeBracket, ModeCombination, Normalization, OpeData, OpeTerm,
};
