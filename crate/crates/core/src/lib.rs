//! Exact enumeration of rooted one-face bipartite maps via permutation
//! factorizations, coefficient tables of the character polynomials in free
//! cumulants, the edge-sliding transformation, and a verification harness
//! that checks every equality and inequality behind `3|X_k| >= |Y_k|` by
//! exhaustive counting.
//!
//! Everything is exact: counts are integers from brute-force enumeration,
//! coefficients are arbitrary-precision rationals, and no floating point
//! appears anywhere.

pub mod cache;
pub mod enumeration;
pub mod harness;
pub mod perm;
pub mod ratpoly;
pub mod rmap;
pub mod sliding;

pub use cache::CacheStore;
pub use enumeration::{CountResult, EnumContext, Family, FamilySpec};
pub use harness::{verify_chain, ChainOptions, RestReading, TElement, TFamily, VerificationReport};
pub use perm::{enumerate_symmetric_group, CycleDecomposition, PermError, Permutation, Shard};
pub use ratpoly::{
    c_polynomial, expand_c_to_r, gr_fixture, kerov_fixture, Alphabet, Monomial, PolyError,
    Rational, RationalPolynomial,
};
pub use rmap::{
    Corner, DescendantRelation, MapError, MapSchema, RootedBipartiteMap, Side, VertexId,
};
pub use sliding::{EndDirection, RotationGraph, SlideError, SlidingConfig};
