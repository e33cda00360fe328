//! Exact arithmetic foundations: big rationals, Bernoulli data, the
//! cyclotomic-plus-α coefficient ring, truncated power series, and sparse
//! multivariate polynomials.

pub mod bernoulli;
pub mod cyc;
pub mod mpoly;
pub mod rat;
pub mod series;

pub use bernoulli::{bernoulli_number, bernoulli_poly};
pub use cyc::CycExt;
pub use mpoly::MPoly;
pub use rat::{
    binomial, factorial, int, odd_double_factorial, rat, rat_display, rat_parse, rat_pow, ratio,
    Rat,
};
pub use series::{Coeff, TruncSeries};
