//! Finite-dimensional modules for the hyperalgebra of SL2 over finite fields,
//! stored weight space by weight space.

pub mod constructors;
pub mod expr;
pub mod hom;
pub mod module;
pub mod named;
pub mod powers;
pub mod sub;

pub use constructors::{
    braiding, direct_sum, dual, evaluation_morphism, frobenius_twist, natural_module, tensor, tensor_many, tensor_map,
    tensor_maps, tensor_power, DirectSum, Dual, Tensor, TensorLayout,
};
pub use expr::{parse_module_expr, ModuleExpr};
pub use hom::{
    check_exact, hom_space, is_split_epi, split_sequence, Exactness, PresentationSequence, SequenceSplitting,
};
pub use module::{module_from_json, Block, Letter, Module, ModuleMap, WeightModule};
pub use named::{simple_module, simple_tilting, steinberg, tilting_module};
pub use powers::{insert_square, ps_presentation, sym2, sym_power, wedge2, wedge_power, ExteriorTower, PsPresentation, SquarePart};
pub use sub::{cokernel, cokernel_of_sum, image, kernel, Quotient, Submodule};
