//! Exact computational machinery for quadratic Hilbert symbols, quaternion
//! ramification sets, valuation-defined subsets of number fields, and the
//! assembly of their first-order defining formulas with quantifier/degree
//! accounting.
//!
//! All arithmetic is exact (big rationals, residue fields, integer lattices);
//! no floating point participates in any decision.

pub mod arith;
pub mod error;
pub mod formula;
pub mod fp;
pub mod intpoly;
pub mod linalg;
pub mod rat;

pub mod darmon;
pub mod definable;
pub mod localsymbols;
pub mod numberfield;
pub mod prescribe;

pub use error::{Error, Result};
pub use darmon::{rational_power_oracle, Multiplicity, ProjectivePoint, Weight};
pub use definable::TraceOracleResult;
pub use prescribe::{PrescriptionResult, SymbolTarget};
pub use localsymbols::{PlaceSet, SymbolSign};
pub use numberfield::{
    parse_field, Congruence, FieldElement, FractionalIdeal, NumberField, Place, PrimeIdeal,
    SignReq,
};
