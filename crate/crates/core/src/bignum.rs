//! Natural numbers in base `2^24` and the arithmetic the hash pipeline needs:
//! NTT products, a schoolbook reference product, and division-free reduction
//! modulo a Mersenne prime `2^γ - 1`.

use std::cmp::Ordering;
use std::fmt;

use crate::field::FieldElem;
use crate::ntt::NttPlan;
use crate::params::is_catalogued_exponent;
use crate::{Error, Result};

/// Bits per limb.
pub const LIMB_BITS: usize = 24;
const LIMB_MASK: u32 = (1 << LIMB_BITS) - 1;

/// Little-endian base-`2^24` natural number. Trailing zero limbs are trimmed,
/// so zero has no limbs and equality is value equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LimbVec {
    limbs: Vec<u32>,
}

impl LimbVec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(mut value: u64) -> Self {
        let mut limbs = Vec::new();
        while value > 0 {
            limbs.push((value & LIMB_MASK as u64) as u32);
            value >>= LIMB_BITS;
        }
        Self { limbs }
    }

    pub fn from_limbs(limbs: Vec<u32>) -> Result<Self> {
        if let Some(bad) = limbs.iter().find(|&&l| l > LIMB_MASK) {
            return Err(Error::InvalidParams(format!("limb {bad:#x} exceeds 24 bits")));
        }
        Ok(Self::from_limbs_unchecked(limbs))
    }

    fn from_limbs_unchecked(mut limbs: Vec<u32>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Self { limbs }
    }

    /// `2^bits - 1`.
    pub fn all_ones(bits: usize) -> Self {
        let mut limbs = vec![LIMB_MASK; bits / LIMB_BITS];
        let rem = bits % LIMB_BITS;
        if rem > 0 {
            limbs.push((1 << rem) - 1);
        }
        Self { limbs }
    }

    /// `2^bit`.
    pub fn power_of_two(bit: usize) -> Self {
        let mut limbs = vec![0; bit / LIMB_BITS + 1];
        limbs[bit / LIMB_BITS] = 1 << (bit % LIMB_BITS);
        Self { limbs }
    }

    pub fn limbs(&self) -> &[u32] {
        &self.limbs
    }

    pub fn len(&self) -> usize {
        self.limbs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn bit_len(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(&top) => (self.limbs.len() - 1) * LIMB_BITS + (32 - top.leading_zeros() as usize),
        }
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs
            .get(i / LIMB_BITS)
            .is_some_and(|l| (l >> (i % LIMB_BITS)) & 1 == 1)
    }

    /// Value when it fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        if self.bit_len() > 64 {
            return None;
        }
        Some(
            self.limbs
                .iter()
                .rev()
                .fold(0u64, |acc, &l| (acc << LIMB_BITS) | l as u64),
        )
    }

    /// Reads little-endian bytes: bit 0 of byte 0 is the least significant bit.
    pub fn from_bytes_le(bytes: &[u8]) -> Self {
        Self::from_bits_le(bytes, 0, bytes.len() * 8)
    }

    /// Reads `count` bits starting at bit `offset` of a little-endian byte
    /// string. Bits past the end of `bytes` read as zero.
    pub fn from_bits_le(bytes: &[u8], offset: usize, count: usize) -> Self {
        let mut limbs = Vec::with_capacity(count.div_ceil(LIMB_BITS));
        let mut pos = 0;
        while pos < count {
            let take = (count - pos).min(LIMB_BITS);
            limbs.push(read_bits(bytes, offset + pos, take));
            pos += take;
        }
        Self::from_limbs_unchecked(limbs)
    }

    /// Writes the value into exactly `len` little-endian bytes.
    pub fn to_bytes_le(&self, len: usize) -> Result<Vec<u8>> {
        if self.bit_len() > len * 8 {
            return Err(Error::InvalidParams(format!(
                "value of {} bits does not fit in {len} bytes",
                self.bit_len()
            )));
        }
        let mut out = Vec::with_capacity(len + 3);
        for &l in &self.limbs {
            out.extend_from_slice(&l.to_le_bytes()[..3]);
        }
        out.resize(len, 0);
        Ok(out)
    }

    /// `self mod 2^bits`.
    pub fn low_bits(&self, bits: usize) -> Self {
        let whole = bits / LIMB_BITS;
        let rem = bits % LIMB_BITS;
        if whole >= self.limbs.len() {
            return self.clone();
        }
        let mut limbs = self.limbs[..whole].to_vec();
        if rem > 0 {
            limbs.push(self.limbs[whole] & ((1 << rem) - 1));
        }
        Self::from_limbs_unchecked(limbs)
    }

    /// `self div 2^bits`.
    pub fn shr(&self, bits: usize) -> Self {
        let whole = bits / LIMB_BITS;
        let rem = bits % LIMB_BITS;
        if whole >= self.limbs.len() {
            return Self::zero();
        }
        let src = &self.limbs[whole..];
        if rem == 0 {
            return Self {
                limbs: src.to_vec(),
            };
        }
        let limbs = (0..src.len())
            .map(|i| {
                let hi = src.get(i + 1).copied().unwrap_or(0);
                ((src[i] >> rem) | (hi << (LIMB_BITS - rem))) & LIMB_MASK
            })
            .collect();
        Self::from_limbs_unchecked(limbs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        if other.limbs.len() > self.limbs.len() {
            self.limbs.resize(other.limbs.len(), 0);
        }
        let mut carry = 0u32;
        for (i, l) in self.limbs.iter_mut().enumerate() {
            let o = other.limbs.get(i).copied().unwrap_or(0);
            if o == 0 && carry == 0 && i >= other.limbs.len() {
                break;
            }
            let s = *l + o + carry;
            *l = s & LIMB_MASK;
            carry = s >> LIMB_BITS;
        }
        if carry > 0 {
            self.limbs.push(carry);
        }
    }
}

/// Reads up to 24 bits at bit position `pos`.
fn read_bits(bytes: &[u8], pos: usize, count: usize) -> u32 {
    debug_assert!(count <= LIMB_BITS);
    let start = pos / 8;
    let shift = pos % 8;
    let mut window = 0u64;
    for k in 0..4 {
        if let Some(&b) = bytes.get(start + k) {
            window |= (b as u64) << (8 * k);
        }
    }
    ((window >> shift) & ((1u64 << count) - 1)) as u32
}

impl Ord for LimbVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl PartialOrd for LimbVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LimbVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.limbs.len() > 8 {
            return write!(f, "LimbVec({} limbs, {} bits)", self.limbs.len(), self.bit_len());
        }
        write!(f, "LimbVec(0x")?;
        if self.limbs.is_empty() {
            write!(f, "0")?;
        }
        for (i, l) in self.limbs.iter().rev().enumerate() {
            if i == 0 {
                write!(f, "{l:x}")?;
            } else {
                write!(f, "{l:06x}")?;
            }
        }
        write!(f, ")")
    }
}

/// Exact product by `O(n^2)` limb convolution.
pub fn mul_schoolbook(x: &LimbVec, y: &LimbVec) -> LimbVec {
    if x.is_zero() || y.is_zero() {
        return LimbVec::zero();
    }
    let (x, y) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    // each 48-bit partial product; 2^15 rows keep every column below 2^63
    const ROWS_PER_FLUSH: usize = 1 << 15;
    let mut acc = vec![0u64; x.len() + y.len() + 1];
    for (chunk_idx, chunk) in x.limbs.chunks(ROWS_PER_FLUSH).enumerate() {
        let base = chunk_idx * ROWS_PER_FLUSH;
        for (i, &xi) in chunk.iter().enumerate() {
            let xi = xi as u64;
            let row = &mut acc[base + i..base + i + y.len()];
            for (a, &yj) in row.iter_mut().zip(&y.limbs) {
                *a += xi * yj as u64;
            }
        }
        let mut carry = 0u64;
        for a in acc.iter_mut() {
            let v = *a + carry;
            *a = v & LIMB_MASK as u64;
            carry = v >> LIMB_BITS;
        }
        debug_assert_eq!(carry, 0);
    }
    LimbVec::from_limbs_unchecked(acc.into_iter().map(|a| a as u32).collect())
}

/// Coefficients of the acyclic limb convolution `x * y`, before carries,
/// computed through the plan's forward and inverse transforms.
pub fn convolve_ntt(x: &LimbVec, y: &LimbVec, plan: &NttPlan) -> Result<Vec<u64>> {
    let half = plan.max_operand_limbs();
    for operand in [x, y] {
        if operand.len() > half {
            return Err(Error::OperandTooLarge {
                limbs: operand.len(),
                size: plan.size(),
            });
        }
    }
    let n = plan.size();
    let mut fx = vec![FieldElem::ZERO; n];
    let mut fy = vec![FieldElem::ZERO; n];
    plan.forward_padded(x.len(), |i| FieldElem::from(x.limbs[i]), &mut fx);
    plan.forward_padded(y.len(), |i| FieldElem::from(y.limbs[i]), &mut fy);
    for (a, b) in fx.iter_mut().zip(&fy) {
        *a *= *b;
    }
    plan.inverse_into(&fx, &mut fy)?;
    Ok(fy.into_iter().map(FieldElem::value).collect())
}

/// Exact product through the NTT: transform both zero-padded operands,
/// multiply pointwise, invert, then resolve carries limb by limb.
///
/// Each operand may use at most half the plan size. With 24-bit limbs a
/// pre-carry coefficient is at most `32768 * (2^24 - 1)^2 < 2^63 < p`, so the
/// field result equals the integer convolution.
pub fn mul_ntt(x: &LimbVec, y: &LimbVec, plan: &NttPlan) -> Result<LimbVec> {
    let coeffs = convolve_ntt(x, y, plan)?;
    if x.is_zero() || y.is_zero() {
        return Ok(LimbVec::zero());
    }
    let len = x.len() + y.len();
    let mut limbs = Vec::with_capacity(len);
    let mut carry = 0u128;
    for &c in &coeffs[..len] {
        let z = c as u128 + carry;
        limbs.push((z & LIMB_MASK as u128) as u32);
        carry = z >> LIMB_BITS;
    }
    // zero for a sound plan; kept so a damaged plan yields a wrong value
    // rather than a truncated one
    while carry > 0 {
        limbs.push((carry & LIMB_MASK as u128) as u32);
        carry >>= LIMB_BITS;
    }
    Ok(LimbVec::from_limbs_unchecked(limbs))
}

/// A Mersenne prime modulus `2^γ - 1` with `γ` from the exponent catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MersenneModulus {
    gamma: u64,
}

impl MersenneModulus {
    pub fn new(gamma: u64) -> Result<Self> {
        if !is_catalogued_exponent(gamma) {
            return Err(Error::NotMersenneExponent(gamma));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> u64 {
        self.gamma
    }

    pub fn bits(&self) -> usize {
        self.gamma as usize
    }

    /// `2^γ - 1`.
    pub fn value(&self) -> LimbVec {
        LimbVec::all_ones(self.bits())
    }

    /// Limbs needed for a `γ`-bit residue.
    pub fn limbs(&self) -> usize {
        self.bits().div_ceil(LIMB_BITS)
    }
}

/// Folds `x` into `[0, 2^γ)` using `2^γ ≡ 1`: repeatedly replace `x` by
/// `(x mod 2^γ) + (x div 2^γ)`. The all-ones residue is left as is.
fn fold(mut x: LimbVec, bits: usize) -> LimbVec {
    while x.bit_len() > bits {
        let high = x.shr(bits);
        x = x.low_bits(bits);
        x.add_assign(&high);
    }
    x
}

/// Canonical residue of `x` modulo `2^γ - 1`, in `[0, 2^γ - 1)`.
pub fn mersenne_reduce(x: &LimbVec, m: &MersenneModulus) -> LimbVec {
    let folded = fold(x.clone(), m.bits());
    if folded == m.value() {
        LimbVec::zero()
    } else {
        folded
    }
}

/// Running sum modulo `2^γ - 1`, held in `γ` bits and updated only by folding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModAccumulator {
    modulus: MersenneModulus,
    acc: LimbVec,
}

impl ModAccumulator {
    pub fn new(modulus: MersenneModulus) -> Self {
        Self {
            modulus,
            acc: LimbVec::zero(),
        }
    }

    pub fn modulus(&self) -> &MersenneModulus {
        &self.modulus
    }

    /// Adds a product `y < 2^(2γ)`: its low and high `γ`-bit halves are
    /// added to the stored sum and carries out of bit `γ` wrap to bit 0.
    /// Wider inputs take extra folding rounds.
    pub fn accumulate(&mut self, y: &LimbVec) {
        let bits = self.modulus.bits();
        self.acc.add_assign(&y.low_bits(bits));
        self.acc.add_assign(&y.shr(bits));
        self.acc = fold(std::mem::take(&mut self.acc), bits);
    }

    pub fn clear(&mut self) {
        self.acc = LimbVec::zero();
    }

    /// Stored value; may be `2^γ - 1`, the second representative of zero.
    pub fn raw(&self) -> &LimbVec {
        &self.acc
    }

    /// Canonical residue in `[0, 2^γ - 1)`.
    pub fn value(&self) -> LimbVec {
        if self.acc == self.modulus.value() {
            LimbVec::zero()
        } else {
            self.acc.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntt::Radix;
    use crate::oracle::{from_biguint, to_biguint};
    use num_bigint::BigUint;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_limbs(rng: &mut impl Rng, n: usize) -> LimbVec {
        LimbVec::from_limbs((0..n).map(|_| rng.gen_range(0..=LIMB_MASK)).collect()).unwrap()
    }

    fn random_bits(rng: &mut impl Rng, bits: usize) -> LimbVec {
        let bytes: Vec<u8> = (0..bits.div_ceil(8)).map(|_| rng.gen()).collect();
        LimbVec::from_bits_le(&bytes, 0, bits)
    }

    /// Binary shift-and-add product, a third route independent of both limb
    /// convolutions.
    fn shift_and_add(x: &LimbVec, y: &LimbVec) -> BigUint {
        let y = to_biguint(y);
        let mut acc = BigUint::default();
        for i in 0..x.bit_len() {
            if x.bit(i) {
                acc += &y << i;
            }
        }
        acc
    }

    #[test]
    fn limb_basics() {
        assert!(LimbVec::zero().is_zero());
        assert_eq!(LimbVec::from_u64(0), LimbVec::zero());
        assert_eq!(LimbVec::from_u64(u64::MAX).to_u64(), Some(u64::MAX));
        assert_eq!(LimbVec::all_ones(5).to_u64(), Some(31));
        assert_eq!(LimbVec::all_ones(48).to_u64(), Some((1 << 48) - 1));
        assert_eq!(LimbVec::power_of_two(30).to_u64(), Some(1 << 30));
        assert_eq!(LimbVec::from_limbs(vec![1, 0, 0]).unwrap().len(), 1);
        assert!(LimbVec::from_limbs(vec![1 << 24]).is_err());
        assert_eq!(LimbVec::from_u64(0x1234_5678).bit_len(), 29);
    }

    #[test]
    fn byte_layout_is_little_endian() {
        let v = LimbVec::from_bytes_le(&[0x01, 0x02, 0x03, 0x04]);
        assert_eq!(v.to_u64(), Some(0x0403_0201));
        assert_eq!(v.to_bytes_le(6).unwrap(), vec![1, 2, 3, 4, 0, 0]);
        assert!(v.to_bytes_le(3).is_err());
        let w = LimbVec::from_bits_le(&[0b1011_0000, 0b0000_0001], 4, 5);
        assert_eq!(w.to_u64(), Some(0b11011));
    }

    #[test]
    fn schoolbook_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let y = random_limbs(&mut rng, 20);
        assert_eq!(mul_schoolbook(&LimbVec::zero(), &y), LimbVec::zero());
        assert_eq!(mul_schoolbook(&LimbVec::one(), &y), y);
        for _ in 0..20 {
            let x = random_limbs(&mut rng, 64);
            let y = random_limbs(&mut rng, 64);
            let got = mul_schoolbook(&x, &y);
            assert_eq!(to_biguint(&got), to_biguint(&x) * to_biguint(&y));
            let (xt, yt) = (x.low_bits(96), y.low_bits(96));
            assert_eq!(to_biguint(&mul_schoolbook(&xt, &yt)), shift_and_add(&xt, &yt));
        }
    }

    #[test]
    fn schoolbook_flushes_long_operands() {
        // both operands longer than one flush window
        let n = (1 << 15) + 5;
        let x = LimbVec::all_ones(n * LIMB_BITS);
        let got = mul_schoolbook(&x, &x);
        assert_eq!(to_biguint(&got), to_biguint(&x) * to_biguint(&x));
    }

    #[test]
    fn ntt_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let plan = NttPlan::new(256, Radix::R16).unwrap();
        let y = random_limbs(&mut rng, 128);
        assert_eq!(mul_ntt(&LimbVec::one(), &y, &plan).unwrap(), y);
        assert_eq!(mul_ntt(&LimbVec::zero(), &y, &plan).unwrap(), LimbVec::zero());
        let too_big = random_limbs(&mut rng, 129);
        assert!(matches!(
            mul_ntt(&too_big, &y, &plan),
            Err(Error::OperandTooLarge { limbs: 129, size: 256 })
        ));
    }

    #[test]
    fn ntt_matches_schoolbook_across_plans() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for radix in Radix::ALL {
            for limbs in [1, 2, 3, 7, 16, 33, 100, 500] {
                let plan = NttPlan::for_operand_limbs(limbs, radix).unwrap();
                for _ in 0..5 {
                    let lx = rng.gen_range(1..=limbs);
                    let x = random_limbs(&mut rng, lx);
                    let y = random_limbs(&mut rng, limbs);
                    assert_eq!(mul_ntt(&x, &y, &plan).unwrap(), mul_schoolbook(&x, &y));
                }
            }
        }
    }

    #[test]
    fn max_input_coefficients_stay_below_field_modulus() {
        let plan = NttPlan::new(65536, Radix::R16).unwrap();
        let x = LimbVec::all_ones(32768 * LIMB_BITS);
        let coeffs = convolve_ntt(&x, &x, &plan).unwrap();
        let m = LIMB_MASK as u128;
        let mut peak = 0u128;
        for (i, &c) in coeffs.iter().enumerate() {
            let terms = if i < 32768 { i + 1 } else { 65535 - i } as u128;
            assert_eq!(c as u128, terms * m * m, "coefficient {i}");
            peak = peak.max(c as u128);
        }
        assert_eq!(peak, 32768 * m * m);
        assert!(peak < 1 << 63);
        assert!(peak < crate::field::MODULUS as u128);
        assert_eq!(mul_ntt(&x, &x, &plan).unwrap(), mul_schoolbook(&x, &x));
    }

    #[test]
    fn reduce_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for gamma in [5u64, 13, 61, 127, 521, 607] {
            let m = MersenneModulus::new(gamma).unwrap();
            let bits = gamma as usize;
            assert_eq!(mersenne_reduce(&m.value(), &m), LimbVec::zero());
            assert_eq!(mersenne_reduce(&LimbVec::power_of_two(bits), &m), LimbVec::one());
            let p = to_biguint(&m.value());
            for _ in 0..50 {
                let x = random_bits(&mut rng, 2 * bits);
                let r = mersenne_reduce(&x, &m);
                assert_eq!(to_biguint(&r), to_biguint(&x) % &p);
                assert_eq!(mersenne_reduce(&r, &m), r);
            }
        }
        assert!(matches!(MersenneModulus::new(11), Err(Error::NotMersenneExponent(11))));
    }

    #[test]
    fn accumulator_examples() {
        let m = MersenneModulus::new(13).unwrap();
        let mut acc = ModAccumulator::new(m);
        acc.accumulate(&LimbVec::zero());
        assert!(acc.value().is_zero());
        acc.accumulate(&LimbVec::from_u64((1 << 13) - 2));
        acc.accumulate(&LimbVec::one());
        assert_eq!(acc.raw().to_u64(), Some((1 << 13) - 1));
        assert!(acc.value().is_zero());
        acc.accumulate(&LimbVec::one());
        assert_eq!(acc.value().to_u64(), Some(1));
    }

    #[test]
    fn accumulator_matches_division_for_gamma_521() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = MersenneModulus::new(521).unwrap();
        let p = to_biguint(&m.value());
        for _ in 0..20 {
            let mut acc = ModAccumulator::new(m);
            let mut expected = BigUint::default();
            for _ in 0..16 {
                let a = random_bits(&mut rng, 521);
                let x = random_bits(&mut rng, 521);
                let y = mul_schoolbook(&a, &x);
                expected += to_biguint(&y);
                acc.accumulate(&y);
                assert!(acc.raw().bit_len() <= 521);
            }
            assert_eq!(to_biguint(&acc.value()), expected % &p);
        }
    }

    #[test]
    fn clear_behaviour() {
        let m = MersenneModulus::new(61).unwrap();
        let mut acc = ModAccumulator::new(m);
        acc.accumulate(&LimbVec::from_u64(12345));
        acc.clear();
        assert!(acc.value().is_zero());
        acc.clear();
        assert!(acc.raw().is_zero());
        acc.accumulate(&LimbVec::from_u64(7));
        let mut fresh = ModAccumulator::new(m);
        fresh.accumulate(&LimbVec::from_u64(7));
        assert_eq!(acc, fresh);
    }

    proptest! {
        #[test]
        fn byte_roundtrip(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            let v = LimbVec::from_bytes_le(&bytes);
            prop_assert_eq!(v.to_bytes_le(bytes.len()).unwrap(), bytes.clone());
            prop_assert_eq!(from_biguint(&BigUint::from_bytes_le(&bytes)), v);
        }

        #[test]
        fn shifts_and_masks_match_bigint(bytes in proptest::collection::vec(any::<u8>(), 0..40), bits in 0usize..400) {
            let v = LimbVec::from_bytes_le(&bytes);
            let b = BigUint::from_bytes_le(&bytes);
            prop_assert_eq!(to_biguint(&v.shr(bits)), &b >> bits);
            let mask = (BigUint::from(1u8) << bits) - 1u8;
            prop_assert_eq!(to_biguint(&v.low_bits(bits)), &b & mask);
        }

        #[test]
        fn accumulation_order_is_irrelevant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = MersenneModulus::new(127).unwrap();
            let values: Vec<_> = (0..8).map(|_| random_bits(&mut rng, 254)).collect();
            let mut forward = ModAccumulator::new(m);
            values.iter().for_each(|v| forward.accumulate(v));
            let mut shuffled = values.clone();
            for i in (1..shuffled.len()).rev() {
                shuffled.swap(i, rng.gen_range(0..=i));
            }
            let mut permuted = ModAccumulator::new(m);
            shuffled.iter().for_each(|v| permuted.accumulate(v));
            prop_assert_eq!(forward.value(), permuted.value());
        }
    }
}
