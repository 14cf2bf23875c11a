//! Numerical verification of the closed forms and of the summation machinery.

mod gevrey;
mod jump;
mod product;
mod residual;

pub use gevrey::{gevrey_check, optimal_truncation, GevreyReport, GevreyRow, GEVREY_ORDERS};
pub use jump::{
    check_stokes, jump_samples, lateral_ratio, measure_direction, measure_jump, representative, DirectionCheck,
    JumpMeasurement, StokesReport, DEFAULT_EPS, SAMPLE_OFFSET,
};
pub use product::{
    check_product_rule, convolution_oracle, convolve, g_coefficient, omega_sum, omega_sum_matched,
    product_by_convolution, upsilon_coefficient_from_constant_term, w_series, ProductRow, ProductRuleReport,
};
pub use residual::{first_row_factor, ode_residual, FD_STEP};
