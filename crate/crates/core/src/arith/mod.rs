//! Exact arithmetic: integer matrices, factorization, quadratic surds,
//! continued fractions and the Pell equation.

pub mod cf;
pub mod factor;
pub mod mat2;
pub mod pell;
pub mod quadratic;

pub use cf::{cf_expand_quadratic, cf_expand_rational, ContinuedFraction};
pub use factor::{almost_prime_class, is_almost_prime, squarefree_part};
pub use mat2::{BigMat2, Mat2};
pub use pell::{pell_fundamental, PellSolution};
pub use quadratic::{attracting_fixed_point, QuadraticIrrational};
