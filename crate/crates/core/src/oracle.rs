//! Slow reference implementations on general-purpose big integers.
//!
//! Nothing here calls into the NTT, the limb products or the Mersenne
//! folding; the only shared code is the seed container, read through its
//! limbs. Used by the self-test and the test suites.

use num_bigint::BigUint;
use num_traits::One;

use crate::bignum::LimbVec;
use crate::field::FieldElem;
use crate::pa::PaParams;
use crate::{Error, Result};

/// A 24-bit limb is exactly three little-endian bytes.
pub fn to_biguint(v: &LimbVec) -> BigUint {
    let bytes: Vec<u8> = v.limbs().iter().flat_map(|l| l.to_le_bytes()[..3].to_vec()).collect();
    BigUint::from_bytes_le(&bytes)
}

pub fn from_biguint(v: &BigUint) -> LimbVec {
    let limbs = v
        .to_bytes_le()
        .chunks(3)
        .map(|c| c.iter().rev().fold(0u32, |acc, &b| acc << 8 | b as u32))
        .collect();
    LimbVec::from_limbs(limbs).expect("three bytes fit a limb")
}

/// `X_k = Σ_n x_n root^{nk}`, evaluated term by term.
pub fn dft(v: &[FieldElem], root: FieldElem) -> Vec<FieldElem> {
    let n = v.len() as u64;
    (0..n)
        .map(|k| {
            let step = root.pow(k);
            let mut w = FieldElem::ONE;
            let mut sum = FieldElem::ZERO;
            for &x in v {
                sum += x * w;
                w *= step;
            }
            sum
        })
        .collect()
}

/// Cyclic convolution `(u ⊛ v)_i = Σ_j u_j v_{(i - j) mod N}`.
pub fn cyclic_convolution(u: &[FieldElem], v: &[FieldElem]) -> Vec<FieldElem> {
    let n = u.len();
    assert_eq!(n, v.len());
    (0..n)
        .map(|i| {
            (0..n).fold(FieldElem::ZERO, |acc, j| acc + u[j] * v[(i + n - j) % n])
        })
        .collect()
}

/// `Σ a_i x_i mod (2^γ - 1)` with a division-based remainder.
pub fn reference_mmh(a: &[BigUint], x: &[BigUint], gamma: u64) -> BigUint {
    let p = (BigUint::one() << gamma) - 1u8;
    a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<BigUint>() % p
}

/// `((b·y + c) mod 2^α) div 2^(α-β)`.
pub fn reference_mh(b: &BigUint, c: &BigUint, y: &BigUint, alpha: usize, beta: usize) -> BigUint {
    let modulus = BigUint::one() << alpha;
    ((b * y + c) % modulus) >> (alpha - beta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceOutput {
    pub key: BigUint,
    pub rejected_blocks: usize,
}

/// End-to-end `h_{b,c}(g_a(x))` over the key material, slicing blocks with
/// shifts of the whole input and skipping all-ones blocks.
pub fn reference_compress(params: &PaParams, key_material: &[u8]) -> Result<ReferenceOutput> {
    let gamma = params.gamma();
    let bits = gamma as usize;
    let all = BigUint::from_bytes_le(key_material);
    let available = key_material.len() * 8;
    let mask = (BigUint::one() << gamma) - 1u8;
    let mut blocks = Vec::with_capacity(params.k());
    let mut rejected = 0;
    let mut offset = 0;
    while blocks.len() < params.k() {
        if offset + bits > available {
            return Err(Error::InsufficientMaterial {
                block: blocks.len() + 1,
                needed: offset + bits - available,
            });
        }
        let x = (&all >> offset) & &mask;
        offset += bits;
        if x == mask {
            rejected += 1;
        } else {
            blocks.push(x);
        }
    }
    let a: Vec<_> = params.a().iter().map(to_biguint).collect();
    let y = reference_mmh(&a, &blocks, gamma);
    let key = reference_mh(
        &to_biguint(params.b()),
        &to_biguint(params.c()),
        &y,
        params.alpha(),
        params.beta(),
    );
    Ok(ReferenceOutput {
        key,
        rejected_blocks: rejected,
    })
}
