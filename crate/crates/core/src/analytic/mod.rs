//! Full-group sums: the smooth `SL₂(ℤ)` ball, its exponential sums, the
//! quadratic theta sums with their Gauss-sum and oscillatory-integral pieces,
//! and additive energy.

pub mod bump;
pub mod energy;
pub mod expsum;
pub mod quad;
pub mod sl2ball;
pub mod theta;

pub use bump::BumpFunction;
pub use energy::{additive_energy, energy_fit, EnergyFit, EnergyReport};
pub use expsum::{exp_sum_sl2, exp_sum_sweep, random_primitive_vectors, ExpSumResult};
pub use sl2ball::{enumerate_sl2_ball, enumerate_sl2_norm_ball, Sl2Ball};
pub use theta::{
    gauss_sum_sr, oscillatory_jx, poisson_side, theta_break_check, theta_break_sweep, theta_mass,
    theta_sum_gx, theta_sum_gx_rational, ThetaBreak,
};
