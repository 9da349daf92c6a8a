//! Linear algebra over exact fields, cochain complexes, DG algebras and
//! modules, twisted modules, and Hochschild invariants of smooth proper DG
//! algebras.

pub mod canonical;
pub mod complex;
pub mod dga;
pub mod duality;
pub mod examples;
pub mod graded;
pub mod hochschild;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod par;
pub mod scalar;
pub mod twisted;
