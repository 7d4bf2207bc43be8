//! Exact decompositions of exterior powers of Lie group representations
//! into polynomials in the fundamental characters, computed by a
//! semi-numerical pipeline: multiprecision sampling on the maximal torus
//! with rigorous rounding control, followed by exact rational linear
//! algebra. Includes the characteristic-polynomial application layer.

pub mod admiss;
pub mod charcalc;
pub mod faadibruno;
pub mod inversion;
pub mod liealg;
pub mod linsolve;
pub mod mpfloat;
pub mod qi;
pub mod scalar;
