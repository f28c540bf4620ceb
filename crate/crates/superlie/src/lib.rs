//! Exact supertraces, denominator identities and decompositions for graded
//! Lie superalgebras.

pub mod arith;
pub mod graded_series;
pub mod witt;
pub mod linalg;
pub mod freelie;
pub mod symfunc;
pub mod gl_decomp;
pub mod gkm;
pub mod monstrous;
pub mod orbit;
pub mod selftest;
