//! Verification toolkit for a ghost-element obstruction over a 32-element
//! subring of `Z8^3`.
//!
//! The objects of study are eventually-constant bi-infinite vectors with
//! entries in the base ring ([`ring`]), the subring `D` of the full product
//! they generate ([`family`], [`closure`], [`span`]), and the ring
//! homomorphisms from finite-window truncations of `D` into `Z8` ([`homs`]).
//! A distinguished constant vector — the ghost — is provably outside `D`
//! ([`parity`]), yet the functional it induces on homomorphisms agrees with
//! honest evaluation on every finite family ([`ghostmap`]). The [`quad`] and
//! [`sindi`] modules study the analogous local-vs-global gap for quadratic
//! solution sets over the two-element field.

pub mod cert;
pub mod closure;
pub mod ecvec;
pub mod expr;
pub mod family;
pub mod ghostmap;
pub mod homs;
pub mod parity;
pub mod quad;
pub mod ring;
pub mod seed;
pub mod sindi;
pub mod span;

pub use cert::{Certificate, CertSummary};
pub use ecvec::{ECVector, FiniteVec, Window};
pub use expr::{Expr, GenId};
pub use homs::{Classification, Hom, HomSummary};
pub use ring::{RElem, RingReport};
