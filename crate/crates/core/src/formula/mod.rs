//! Formula assembly: prenex ASTs over sparse integer polynomials, the
//! single-polynomial combiners, the two quantifier rewrites, the set
//! templates, the end-to-end assemblies, and the complexity ledger.

pub mod assemble;
pub mod ast;
pub mod combine;
pub mod ledger;
pub mod poly;
pub mod rewrite;
pub mod search;
pub mod templates;

pub use assemble::{assemble_empty, assemble_main, Budget, DegreeBound, ModeBudget};
pub use ast::{Formula, Quant, Rel};
pub use combine::{CombineMode, CombineStrategy, Combined};
pub use ledger::{budget_ledger, LedgerRow};
pub use poly::{Monomial, Param, Poly, Var, VarGen};
pub use search::{Assignment, BoundedTruth};
pub use templates::{template, TemplateName};
