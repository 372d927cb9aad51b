//! Binary harmonic functions on graphs and lattices.
//!
//! A pattern `f: V -> GF(2)` on a graph is harmonic when every vertex value
//! equals the sum of its neighbours (`Δ⁺ f = 0`), and antiharmonic when the
//! neighbour sum vanishes (`Δ⁻ f = 0`). The crate covers the
//! algebra behind these kernels: polynomials over GF(2) and the
//! Chebyshev-Dickson family, binary finite fields, bit-packed linear
//! algebra, graph kernels, torus and grid lattices, the partnership graph
//! of the curve `(1+x+y)(1+xy) = 1`, and Lights Out.

pub mod berkowitz;
pub mod chebfib;
mod clmul;
pub mod error;
pub mod field2;
pub mod graph;
pub mod lattice;
pub mod lightsout;
pub mod linalg;
pub mod numtheory;
pub mod partnership;
pub mod poly2;

pub use error::{Error, Result};
pub use field2::{FieldCtx, FieldElem};
pub use graph::{Graph, Pattern, Sign};
pub use poly2::Poly2;
