//! Exact computations with nonsolvable Lie algebras of dimension at most six
//! over small finite fields: construction of every isomorphism class,
//! invariants, and identification of arbitrary input algebras.

pub mod catalog;
pub mod classify;
pub mod field;
pub mod io;
pub mod liealg;
pub mod linalg;
