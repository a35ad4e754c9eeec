//! Large-block privacy amplification with the MMH-MH universal hash pair.
//!
//! The input key is split into `k` blocks of `γ` bits, compressed by a
//! multilinear modular hash over the Mersenne prime `2^γ - 1`, and then
//! shortened to the final key length by a modular arithmetic hash. Every
//! big-number product goes through one NTT multiplier over the field
//! `2^64 - 2^32 + 1` using 24-bit limbs, so a 65536-point plan multiplies
//! operands of up to 786432 bits.
//!
//! Module map:
//!
//! * [`field`]: arithmetic in `F_p`, `p = 2^64 - 2^32 + 1`.
//! * [`ntt`]: radix-2/4/16 forward and inverse transforms.
//! * [`bignum`]: base-2^24 naturals, NTT and schoolbook products, Mersenne folding.
//! * [`pa`]: block splitting, MMH, MH, bit windowing and the streaming session.
//! * [`params`]: Mersenne exponent catalog, `k` selection and key-rate tables.
//! * [`bench`]: throughput measurement.
//! * [`oracle`] and [`selftest`]: independent reference implementations and
//!   the built-in verification suite.

pub mod bench;
pub mod bignum;
pub mod field;
pub mod ntt;
pub mod oracle;
pub mod pa;
pub mod params;
pub mod selftest;

mod error;

pub use bignum::{LimbVec, MersenneModulus, ModAccumulator, LIMB_BITS};
pub use error::Error;
pub use field::FieldElem;
pub use ntt::{NttPlan, Radix};
pub use pa::{BitString, BlockVerdict, PaParams, PaSession, SessionState};

pub type Result<T, E = Error> = std::result::Result<T, E>;
