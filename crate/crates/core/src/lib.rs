//! Point counting over finite fields, Weil zeta functions, and canonical
//! p-adic measures of resolution data.
//!
//! The modules build on each other bottom-up:
//!
//! * [`finite_field`]: exact `F_{p^r}` arithmetic and fast counting kernels.
//! * [`varieties`]: stratified integer models and exhaustive point counts.
//! * [`zeta`]: recurrence fitting, rational zeta functions, weights and Betti
//!   numbers.
//! * [`birational`]: discrepancy vectors, singularity classes, K-order.
//! * [`padic`]: the value field `Q(q^{1/r})` and measures of SNC models.
//! * [`gallery`]: builtin hand-checked models with expectations.
//! * [`verify`]: the acceptance checks run by `weilbench verify`.

pub mod birational;
pub mod cli;
pub mod finite_field;
pub mod gallery;
pub mod padic;
pub mod upoly;
pub mod varieties;
pub mod verify;
pub mod zeta;
