//! Numerics for basic hypergeometric series and q-products, with a registry
//! of identities that can be checked numerically at sampled parameter points.
//!
//! The layers build on each other:
//!
//! * [`qcore`] evaluates q-shifted factorials of finite and infinite order.
//! * [`series`] sums unilateral and bilateral basic hypergeometric series.
//! * [`multisum`] handles terminating sums over bounded compositions.
//! * [`integrals`] implements h-functions and Askey–Wilson type quadrature.
//! * [`identities`] turns every identity into a checkable [`identities::IdentityCase`].
//! * [`sweep`] runs seeded, parallel verification sweeps.

pub mod context;
pub mod error;
pub mod identities;
pub mod integrals;
pub mod multisum;
pub mod qcore;
pub mod report;
pub mod series;
pub mod sweep;
pub mod tracked;

pub use context::QContext;
pub use error::QError;
pub use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, QError>;

/// Shorthand for a complex literal.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
