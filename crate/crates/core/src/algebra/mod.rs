//! Special functions and the boson normal-ordering engine.

mod combinatorics;
mod normal_order;

pub use combinatorics::{
    binomial, double_factorial, factorial, ln_factorial, ln_falling, pochhammer_half,
    ratio_to_f64, stirling2, stirling2_row,
};
pub use normal_order::{
    normal_order, normal_order_bounded, quadrature_power_expansion, quadrature_powers, Letter,
    NormalOrderedPolynomial, DEFAULT_QUADRATURE_LIMIT, DEFAULT_WORD_LIMIT,
};
