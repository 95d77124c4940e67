//! Graded matrix factorizations, their grading groups, and the quiver
//! algebras that appear on the other side of the equivalences.

pub mod abgroup;
pub mod decompose;
pub mod intmat;
pub mod linalg;
pub mod mfengine;
pub mod quiverlab;
pub mod weightcalc;
