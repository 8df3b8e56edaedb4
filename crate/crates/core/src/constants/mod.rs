//! High-precision constants, the feasibility inequality and explicit
//! function-theoretic inequalities checked on concrete functions.

mod checks;
mod precision;

pub use checks::{
    landau_check, poisson_jensen_check, spherical_landau_check, strip_map, strip_map_deriv_at_center,
    strip_map_derivative, theorem4_witness_check,
};
pub use precision::{
    gamma_quarter, hempel_lai_a, max_feasible_c, theorem4_feasible, theorem4_lower_bound,
    CriticalConstant, FeasibilityVerdict, HighPrecisionReal, C_HIGH, C_LOW, FEASIBILITY_DIGITS,
};
