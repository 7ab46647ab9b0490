//! Finite fields, 2×2 matrices and the projective line.

pub mod field;
pub mod mat2;
pub mod traces;

pub use field::{element_order, fq_context, Extension, FqCtx, FqElem, MAX_USER_DEGREE};
pub use mat2::{p1_action, Mat2};
pub use traces::{order_k_traces, order_k_traces_in, OrderTrace, QuadraticSolver};
