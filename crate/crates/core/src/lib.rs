//! Collatz-style dynamics over binary polynomials.
//!
//! The ring is `F2[x]`, with `x(x+1)` playing the role that `2` plays for the
//! integers. A nonzero polynomial is *odd* when it has no linear factor
//! (`p(0) = p(1) = 1`) and *even* otherwise. From an odd `A` one step of the
//! map forms `1 + M1*A` with `M1 = x^2 + x + 1`, then strips all factors of
//! `x` and `x+1` to get the next odd term. Every trajectory ends at the fixed
//! pair `(x^2 + x, 1)`.
//!
//! The crate provides:
//! - [`gf2poly`]: bit-vector arithmetic for `F2[x]` (add, carry-less multiply,
//!   division, valuations, the `x -> x+1` substitution, reciprocal, parsing).
//! - [`collatz`]: one step of the map and full trajectory traces.
//! - [`enumeration`]: iterators and counts over degree strata.
//! - [`search`]: exhaustive per-degree searches for maximal trajectory length
//!   `f(n)` and maximal within-degree chain length `g(n)`, with parallel
//!   partitioning and checkpoint/resume.
//! - [`families`]: special seed families and automated checks of their
//!   conjectured trajectory shapes.
//! - [`matthews`]: the generalized `(K*S - R)/D` transformation with residue
//!   systems, plus trajectory classification (cycle / divergence).

pub mod collatz;
pub mod enumeration;
pub mod families;
pub mod gf2poly;
pub mod matthews;
pub mod search;

pub use collatz::{trace, CollatzTrace, OddDecomposition, TraceError, TraceOptions};
pub use gf2poly::{ParseError, Poly, PolyError};
pub use search::{ChainCensus, SearchConfig, SearchRecord};
