//! Exact-arithmetic core for classifying smooth commutative p-torsion
//! unipotent groups presented as kernels of separable p-polynomials over
//! k = F_q(s).
//!
//! The crate is organized around the field tower
//! F_q ⊆ F_q[s] ⊆ k = F_q(s) ⊆ L = k((t)) (truncated), the algebra of
//! p-polynomials P = Σ_i P_i(T_i) over k, anisotropy decisions for
//! diagonal principal parts, valuation-based exclusion certificates for
//! classes in H¹(L, G) ≅ L / P(L × ⋯ × L), and the Frattini reduction
//! for finite p-groups given by multiplication tables.
//!
//! All values are immutable after construction and every operation is a
//! pure function; the crate is `no_std` (with `alloc`).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cohomology;
pub mod error;
pub mod fq;
pub mod frattini;
pub mod grammar;
pub mod isotropy;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod ppoly;
pub mod ratfn;

pub use error::Error;
pub use fq::{Fq, FqElem};
pub use laurent::LaurentSeries;
pub use poly::PolyS;
pub use ppoly::{DiagonalForm, PPolynomial, Substitution};
pub use ratfn::RatFn;
