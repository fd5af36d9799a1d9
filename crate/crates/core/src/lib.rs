//! Weight combinatorics for mod p representations of GL2(Q_{p^2}) built from
//! a reducible split Diamond diagram, and a certification engine for the
//! irreducibility of the infinite diagram D(λ).
//!
//! * [`ffield`]: exact arithmetic in F_{p^n}.
//! * [`weights`]: matrix models of the weights of GL2(F_{p^2}), their
//!   invariant lines and Iwahori characters.
//! * [`diamond`]: Diamond weights, socle filtrations and D₁ characters for a
//!   generic parameter `(p, r0, r1)`.
//! * [`engine`]: the Π-action on D₁(∞), closure rules, certificates.
//! * [`cli`] and [`selftest`]: the command-line surface.

pub mod cli;
pub mod diamond;
pub mod engine;
pub mod exec;
pub mod ffield;
pub mod linalg;
pub mod selftest;
pub mod weights;

pub use exec::Exec;
