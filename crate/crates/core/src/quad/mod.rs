//! Quadrature rules shared by the special functions and the transient solver.

mod gauss_kronrod;
mod tanh_sinh;

pub use gauss_kronrod::{integrate, integrate_vec, QuadOptions, QuadResult};
pub use tanh_sinh::TanhSinhRule;
