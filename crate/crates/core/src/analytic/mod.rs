//! Closed forms and quadrature oracles that are independent of the Monte
//! Carlo engine.

pub mod density;
pub mod gamma;
pub mod levy;
pub mod perimeter;
pub mod quad;
pub mod rhc;
pub mod skbm;

pub use density::stable_density_1d;
pub use gamma::gamma;
pub use levy::{levy_constant, levy_constant_alt};
pub use perimeter::{
    cantor_gap_perimeter, pair_interaction, per_alpha_gap_union, per_alpha_interval,
    PerimeterBreakdown,
};
pub use quad::{gauss_legendre, integrate, integrate_to_infinity, integrate_with_breaks, Quad, QuadratureConfig};
pub use rhc::{rhc_interval_cauchy, rhc_interval_deficit, rhc_interval_oracle};
pub use skbm::{skbm_interval_series, SeriesValue};
