//! Counting functions, explicit bounds and existence certification for
//! Lehmer numbers and Lehmer primitive roots modulo a prime.
//!
//! A Lehmer number mod p is a residue whose inverse in [1, p-1] has the
//! opposite parity; a Lehmer primitive root (LPR) is one that also
//! generates the multiplicative group. The crate provides:
//!
//! - [`arith`]: primality, factorization, multiplicative functions,
//!   inverse tables and primitive roots on `u64`;
//! - [`lehmer`]: exact O(p) counts of Lehmer numbers, e-free Lehmer
//!   numbers, LPRs and Golomb-Lehmer pairs;
//! - [`charsum`]: direct evaluation of the Kloosterman and twisted
//!   character sums with exhaustive bound verification;
//! - [`bounds`]: the tangent sum T_m and every explicit count estimate
//!   and existence condition, as checkable reports;
//! - [`sieve`]: the core/sieving-prime machinery, worst-case thresholds
//!   per omega(p-1), the 210k+1 candidate enumeration and an end-to-end
//!   existence certifier.

pub mod arith;
pub mod bounds;
pub mod charsum;
mod error;
pub mod lehmer;
pub mod sieve;

pub use error::{Error, Result};
