//! A non-Merkle-Damgård hash built on a multiplicative knapsack over a
//! prime field.
//!
//! An n-bit nonzero message is expanded into its *bit long-shadow* string
//! and compressed to an m-bit digest `d = ∏ C_i^{b̿_i} mod M`. The public
//! values `C_i` come out of a one-shot initialization step that hides a
//! coprime sequence, a random exponent injection and two secret residues
//! behind `C_i = (A_i · W^{ℓ(i)})^δ mod M`.
//!
//! Besides the hash itself the crate carries:
//!
//! * [`chp`]: the Chaum-van Heijst-Pfitzmann discrete-log hash used as the
//!   comparison baseline, plus the cost/rate calculators,
//! * [`reform`]: compaction of a classical hash output to half its width,
//! * [`attacks`]: a meet-in-the-middle subset-sum solver, a birthday
//!   collision harness, exhaustive toy-scale collision enumeration and the
//!   knapsack density formula.
//!
//! > This is research code. Nothing here has been reviewed for side
//! > channels, and the security claims made for the construction are not
//! > something the test suite can establish.

pub mod attacks;
pub mod bitcodec;
pub mod chp;
pub mod compress;
pub mod coprime;
mod error;
mod mode;
pub mod numtheory;
pub mod params;
pub mod reform;

pub use bitcodec::{BitString, LongShadowString, ShadowString};
pub use compress::{digest, digest_oracle, Digest};
pub use error::{Error, Result};
pub use mode::Mode;
pub use params::{PrivateParams, PublicParams};
