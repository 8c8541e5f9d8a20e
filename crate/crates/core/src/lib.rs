//! Exact and numeric tools for a one-parameter family of Calabi-Yau
//! threefolds built from K3 surfaces `Y² = X³ + f(t)²` carrying an
//! order-three automorphism.
//!
//! - [`algebra`]: exact rationals, polynomials and rational functions in `x, λ`.
//! - [`picard_fuchs`]: forms on cyclic covers, their operators, and the exact certificate.
//! - [`hypergeometric`]: Gauss parameters, local exponents, monodromy and the MUM test.
//! - [`periods`]: double-exponential quadrature, the `2F1` series and residual checks.
//! - [`surface`]: fiber types, fixed-locus counts and Hodge numbers.
//! - [`cm`]: elliptic quotients of `y² = x⁶ − m x³ + 1` and numeric CM detection.

pub mod algebra;
pub mod cm;
pub mod hypergeometric;
pub mod periods;
pub mod picard_fuchs;
pub mod surface;
