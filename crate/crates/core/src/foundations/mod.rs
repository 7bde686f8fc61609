//! Exact scalars, grading groups and windows.

pub mod group;
pub mod matrix;
pub mod scalar;
pub mod tensor;
pub mod window;

pub use group::{validate_group, Elem, FiniteGroup, GradingGroup};
pub use matrix::Matrix;
pub use scalar::{FieldSpec, Scalar};
pub use tensor::Tensor;
pub use window::Window;
