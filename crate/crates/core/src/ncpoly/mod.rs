//! Noncommutative polynomials over `Q(q^{1/2})` or `Q`, with rewriting-based
//! normal forms for finitely presented *-algebras.

mod coeff;
mod poly;
mod presentation;
pub mod presentations;
mod scalar;

pub use coeff::{parse_rational, rational_sqrt, rational_to_f64, Coeff};
pub use poly::{Gen, NCPoly, Word};
pub use presentation::{GeneratorSymbol, MonomialOrder, NcError, Presentation, Rule};
pub use scalar::{q_int, q_int_half, Laurent, QScalar, ScalarError};
