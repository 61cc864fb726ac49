//! Special functions every other module consumes: Airy Ai/Bi with
//! derivatives, their modulus/weight/phase companions, stable Laguerre
//! polynomial/function evaluation, Bessel J, and log-gamma.
//!
//! Everything here is pure and re-entrant; the few cached constants
//! (crossover point, λ₀) are initialized once behind `OnceLock`.

pub mod airy;
pub mod bessel;
pub mod gamma;
pub mod laguerre;
pub mod modulus;

pub use airy::{airy_eval, AiryPair};
pub use bessel::{bessel_j, bessel_j_prime};
pub use gamma::{ln_factorial, ln_gamma};
pub use laguerre::{laguerre_fn, laguerre_fn_scaled, laguerre_fn_scaled_pair, laguerre_poly, Scaled};
pub use modulus::{airy_modulus, crossover, lambda0_estimate, modulus_over_weight, AiryModulus};
