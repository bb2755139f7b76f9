//! Exact arithmetic: Laurent polynomials, rational functions, truncated
//! q-series in one and two variables, and q-Pochhammer products.

pub mod laurent;
pub mod parse;
pub mod pochhammer;
pub mod ratfun;
pub mod series;

pub use laurent::{grlex_cmp, Exponents, LaurentPoly};
pub use parse::parse_poly;
pub use pochhammer::{finite_poch, inverse_qfactorials, PochFactor, PochhammerSpec, Side};
pub use ratfun::RationalFunction;
pub use series::{BiSeries, QSeries};
