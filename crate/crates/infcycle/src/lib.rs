//! Exact-arithmetic computational homological algebra for infinitesimal
//! deformation of algebraic cycles: relative Kähler differentials,
//! Hodge-decomposed Hochschild/cyclic homology, Koszul local fundamental
//! classes, Newton/Ext classes of deformed subvarieties, and the obstruction
//! check deciding whether a deformation defines a Milnor K-theoretic cycle.
//!
//! Everything is computed over Q with arbitrary-precision rationals; there
//! is no floating point and every zero test is exact. Results that depend on
//! a truncation (bar depth, internal degree bound) carry the bound used.

pub mod catalog;
pub mod complexes;
pub mod cycles;
pub mod hochcyc;
pub mod exactla;
pub mod kaehler;
pub mod polyalg;
