//! Exact and certified-numeric computations with period relations of CM
//! abelian varieties.
//!
//! * [`ball`]: midpoint-radius arithmetic, the carrier of every numeric value.
//! * [`exact`]: polynomials, number fields, integer lattices, LLL, factorization.
//! * [`biq`]: split bi-algebraic structures labelled by period monomials.
//! * [`cm`]: CM fields and types, Mumford-Tate ranks, relation lattices.
//! * [`shimura`]: root data of GSp(2g) and the tangent structures at CM points.
//! * [`numeric`]: periods, quasi-periods, `j`, and the certificate pipelines.

pub mod ball;
pub mod biq;
pub mod cm;
pub mod exact;
pub mod numeric;
pub mod shimura;
