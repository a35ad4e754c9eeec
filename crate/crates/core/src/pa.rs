//! MMH-MH privacy amplification.
//!
//! The `k·γ`-bit input is split into `k` blocks `x_i < 2^γ`. The multilinear
//! modular hash `y = Σ a_i x_i mod (2^γ - 1)` runs the shared NTT multiplier
//! `k` times, feeding each product to a folding accumulator. The modular
//! arithmetic hash then keeps the top `r` bits of `(b·y + c) mod 2^γ`, reusing
//! the same multiplier for `b·y`. A block equal to `2^γ - 1` is discarded and
//! replaced by the next `γ` bits of input.
//!
//! All bit strings are little-endian: bit `i` lives in byte `i / 8` at
//! position `i % 8`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bignum::{mul_ntt, LimbVec, MersenneModulus, ModAccumulator, LIMB_BITS};
use crate::ntt::{NttPlan, Radix};
use crate::{Error, Result};

/// A packed bit sequence, least significant bit first within each byte.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(bits.div_ceil(8)),
            len: 0,
        }
    }

    /// Takes the first `len` bits of `bytes`; unused high bits of the final
    /// byte are cleared.
    pub fn from_bytes(mut bytes: Vec<u8>, len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::InputLength {
                expected: len.div_ceil(8),
                found: bytes.len(),
            });
        }
        if !len.is_multiple_of(8) {
            if let Some(last) = bytes.last_mut() {
                *last &= (1u8 << (len % 8)) - 1;
            }
        }
        Ok(Self { bytes, len })
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            self.bytes[self.len / 8] |= 1 << (self.len % 8);
        }
        self.len += 1;
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| (self.bytes[i / 8] >> (i % 8)) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed bytes, final byte zero-padded.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| (self.bytes[i / 8] >> (i % 8)) & 1 == 1)
    }

    pub fn to_limbs(&self) -> LimbVec {
        LimbVec::from_bits_le(&self.bytes, 0, self.len)
    }
}

/// One MMH-MH compression instance: `γ`, `k`, output length `r`, security
/// parameter `s` and the seeds `a ∈ Z_p^k`, `b, c ∈ Z_{2^γ}` with `b` odd.
/// The MH input width `α` equals `γ` and its output width `β` equals `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaParams {
    modulus: MersenneModulus,
    k: usize,
    r: usize,
    s: usize,
    a: Vec<LimbVec>,
    b: LimbVec,
    c: LimbVec,
}

impl PaParams {
    pub fn new(
        gamma: u64,
        k: usize,
        r: usize,
        s: usize,
        a: Vec<LimbVec>,
        b: LimbVec,
        c: LimbVec,
    ) -> Result<Self> {
        check_shape(gamma, k, r, s)?;
        let modulus = MersenneModulus::new(gamma)?;
        let bits = modulus.bits();
        if a.len() != k {
            return Err(Error::InvalidParams(format!("expected {k} MMH seeds, got {}", a.len())));
        }
        let p = modulus.value();
        if let Some(i) = a.iter().position(|ai| *ai >= p) {
            return Err(Error::InvalidParams(format!("seed a_{} is not below 2^{gamma} - 1", i + 1)));
        }
        if b.bit_len() > bits || c.bit_len() > bits {
            return Err(Error::InvalidParams(format!("b and c must be below 2^{gamma}")));
        }
        if !b.bit(0) {
            return Err(Error::EvenMultiplier);
        }
        Ok(Self {
            modulus,
            k,
            r,
            s,
            a,
            b,
            c,
        })
    }

    /// Expands a 64-bit seed into `a`, `b` and `c` with ChaCha20. Draws equal
    /// to `2^γ - 1` are skipped for `a`; `b` gets its low bit set.
    pub fn from_seed(gamma: u64, k: usize, r: usize, s: usize, seed: u64) -> Result<Self> {
        check_shape(gamma, k, r, s)?;
        let modulus = MersenneModulus::new(gamma)?;
        let bits = modulus.bits();
        let p = modulus.value();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut draw = || {
            let mut bytes = vec![0u8; bits.div_ceil(8)];
            rng.fill_bytes(&mut bytes);
            LimbVec::from_bits_le(&bytes, 0, bits)
        };
        let mut a = Vec::with_capacity(k);
        while a.len() < k {
            let v = draw();
            if v != p {
                a.push(v);
            }
        }
        let b = force_odd(draw());
        let c = draw();
        Self::new(gamma, k, r, s, a, b, c)
    }

    /// Parses the seed file layout: `a_1..a_k`, `b`, `c`, each `⌈γ/8⌉`
    /// little-endian bytes. Bits at and above `γ` are ignored and `b` gets its
    /// low bit set.
    pub fn from_seed_bytes(gamma: u64, k: usize, r: usize, s: usize, bytes: &[u8]) -> Result<Self> {
        check_shape(gamma, k, r, s)?;
        let width = (gamma as usize).div_ceil(8);
        let expected = width * (k + 2);
        if bytes.len() != expected {
            return Err(Error::InputLength {
                expected,
                found: bytes.len(),
            });
        }
        let mut values = bytes
            .chunks_exact(width)
            .map(|chunk| LimbVec::from_bits_le(chunk, 0, gamma as usize));
        let a: Vec<_> = values.by_ref().take(k).collect();
        let b = force_odd(values.next().expect("length checked"));
        let c = values.next().expect("length checked");
        Self::new(gamma, k, r, s, a, b, c)
    }

    /// Serializes the seeds in the seed file layout.
    pub fn seed_bytes(&self) -> Vec<u8> {
        let width = self.modulus.bits().div_ceil(8);
        let mut out = Vec::with_capacity(width * (self.k + 2));
        for v in self.a.iter().chain([&self.b, &self.c]) {
            out.extend(v.to_bytes_le(width).expect("seed below 2^gamma"));
        }
        out
    }

    pub fn gamma(&self) -> u64 {
        self.modulus.gamma()
    }

    pub fn modulus(&self) -> &MersenneModulus {
        &self.modulus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn alpha(&self) -> usize {
        self.modulus.bits()
    }

    pub fn beta(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &[LimbVec] {
        &self.a
    }

    pub fn b(&self) -> &LimbVec {
        &self.b
    }

    pub fn c(&self) -> &LimbVec {
        &self.c
    }

    /// Input block size `k·γ` in bits.
    pub fn block_bits(&self) -> usize {
        self.k * self.modulus.bits()
    }

    /// Smallest plan that multiplies two `γ`-bit operands.
    pub fn plan(&self, radix: Radix) -> Result<NttPlan> {
        NttPlan::for_operand_limbs(self.modulus.limbs(), radix)
    }
}

fn check_shape(gamma: u64, k: usize, r: usize, s: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if r == 0 {
        return Err(Error::InvalidParams("r must be at least 1".into()));
    }
    match (r as u64).checked_add(s as u64) {
        Some(sum) if sum < gamma => Ok(()),
        _ => Err(Error::SecurityCondition {
            r: r as u64,
            gamma,
            s: s as u64,
        }),
    }
}

fn force_odd(v: LimbVec) -> LimbVec {
    if v.bit(0) {
        v
    } else {
        v.add(&LimbVec::one())
    }
}

/// Splits exactly `⌈k·γ/8⌉` bytes into `k` blocks of `γ` bits.
pub fn split_blocks(key_material: &[u8], gamma: u64, k: usize) -> Result<Vec<LimbVec>> {
    let bits = gamma as usize;
    let expected = (bits * k).div_ceil(8);
    if key_material.len() != expected {
        return Err(Error::InputLength {
            expected,
            found: key_material.len(),
        });
    }
    Ok((0..k)
        .map(|i| LimbVec::from_bits_le(key_material, i * bits, bits))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictReason {
    Ok,
    AllOnesRejected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockVerdict {
    pub accepted: bool,
    pub reason: VerdictReason,
}

impl BlockVerdict {
    const ACCEPTED: Self = Self {
        accepted: true,
        reason: VerdictReason::Ok,
    };
    const REJECTED: Self = Self {
        accepted: false,
        reason: VerdictReason::AllOnesRejected,
    };
}

/// Rejects the block `2^γ - 1`, which aliases zero in `Z_p`.
pub fn screen_block(x: &LimbVec, gamma: u64) -> BlockVerdict {
    let bits = gamma as usize;
    let all_ones = x.bit_len() == bits && x.limbs().iter().enumerate().all(|(i, &l)| {
        let width = (bits - i * LIMB_BITS).min(LIMB_BITS);
        l == (1u32 << width) - 1
    });
    if all_ones {
        BlockVerdict::REJECTED
    } else {
        BlockVerdict::ACCEPTED
    }
}

fn check_block(x: &LimbVec, gamma: u64) -> Result<()> {
    if x.bit_len() > gamma as usize {
        return Err(Error::InvalidParams(format!("block exceeds {gamma} bits")));
    }
    if !screen_block(x, gamma).accepted {
        return Err(Error::UnscreenedBlock);
    }
    Ok(())
}

/// `g_a(x) = Σ a_i x_i mod (2^γ - 1)`, one shared multiplier and a folding
/// accumulator.
pub fn mmh(params: &PaParams, x: &[LimbVec], plan: &NttPlan) -> Result<LimbVec> {
    if x.len() != params.k {
        return Err(Error::InvalidParams(format!(
            "expected {} blocks, got {}",
            params.k,
            x.len()
        )));
    }
    let mut acc = ModAccumulator::new(params.modulus);
    for (ai, xi) in params.a.iter().zip(x) {
        check_block(xi, params.gamma())?;
        acc.accumulate(&mul_ntt(ai, xi, plan)?);
    }
    Ok(acc.value())
}

/// `h_{b,c}(y) = ((b·y + c) mod 2^α) div 2^(α-β)` as `r` bits, least
/// significant first.
pub fn mh(params: &PaParams, y: &LimbVec, plan: &NttPlan) -> Result<BitString> {
    if y.bit_len() > params.alpha() {
        return Err(Error::InvalidParams(format!("MH input exceeds {} bits", params.alpha())));
    }
    let mut v = mul_ntt(&params.b, y, plan)?;
    v.add_assign(&params.c);
    extract_window(&v, params.alpha(), params.beta())
}

/// Streams the bits `[α-β, α)` of `v` out of its 24-bit frames: frames below
/// `⌊(α-β)/24⌋` are skipped, the first emitted frame starts at bit offset
/// `(α-β) mod 24`, and frame `⌊α/24⌋` contributes its low `α mod 24` bits.
/// Equal to `(v mod 2^α) div 2^(α-β)`.
pub fn extract_window(v: &LimbVec, alpha: usize, beta: usize) -> Result<BitString> {
    if beta >= alpha {
        return Err(Error::Window { alpha, beta });
    }
    let skip = alpha - beta;
    let first = skip / LIMB_BITS;
    let last = alpha / LIMB_BITS;
    let mut out = BitString::with_capacity(beta);
    for frame_idx in first..=last {
        let frame = v.limbs().get(frame_idx).copied().unwrap_or(0);
        let lo = if frame_idx == first { skip % LIMB_BITS } else { 0 };
        let hi = if frame_idx == last { alpha % LIMB_BITS } else { LIMB_BITS };
        for bit in lo..hi {
            out.push((frame >> bit) & 1 == 1);
        }
    }
    debug_assert_eq!(out.len(), beta);
    Ok(out)
}

/// States of the control unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SessionState {
    Idle,
    Mmh,
    MmhCount,
    Mh,
    Output,
}

/// Streaming MMH-MH evaluation:
/// `Idle → Mmh → MmhCount → (Mmh | Mh) → Output → Idle`.
///
/// Each accepted block performs one multiplication and moves to `MmhCount`;
/// [`count`](Self::count) returns to `Mmh` until `k` blocks are in, then
/// moves to `Mh`. A rejected block leaves the session in `Mmh` waiting for its
/// replacement.
#[derive(Debug)]
pub struct PaSession<'a> {
    params: &'a PaParams,
    plan: &'a NttPlan,
    state: SessionState,
    cnt: usize,
    rejected: usize,
    acc: ModAccumulator,
    output: Option<BitString>,
}

impl<'a> PaSession<'a> {
    pub fn new(params: &'a PaParams, plan: &'a NttPlan) -> Result<Self> {
        let needed = params.modulus.limbs();
        if needed > plan.max_operand_limbs() {
            return Err(Error::OperandTooLarge {
                limbs: needed,
                size: plan.size(),
            });
        }
        Ok(Self {
            params,
            plan,
            state: SessionState::Idle,
            cnt: 0,
            rejected: 0,
            acc: ModAccumulator::new(params.modulus),
            output: None,
        })
    }

    pub fn state(&self) -> SessionState {
        self.state
    }

    /// Accepted blocks in the current run.
    pub fn cnt(&self) -> usize {
        self.cnt
    }

    /// Blocks rejected since the session was created.
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    fn expect(&self, state: SessionState, op: &'static str) -> Result<()> {
        if self.state != state {
            return Err(Error::InvalidTransition {
                state: self.state,
                op,
            });
        }
        Ok(())
    }

    pub fn start(&mut self) -> Result<()> {
        self.expect(SessionState::Idle, "start")?;
        self.cnt = 0;
        self.acc.clear();
        self.output = None;
        self.state = SessionState::Mmh;
        Ok(())
    }

    /// Screens `x`; an accepted block is multiplied by `a_{cnt+1}` and accumulated.
    pub fn feed(&mut self, x: &LimbVec) -> Result<BlockVerdict> {
        self.expect(SessionState::Mmh, "feed")?;
        let gamma = self.params.gamma();
        if x.bit_len() > gamma as usize {
            return Err(Error::InvalidParams(format!("block exceeds {gamma} bits")));
        }
        let verdict = screen_block(x, gamma);
        if !verdict.accepted {
            self.rejected += 1;
            return Ok(verdict);
        }
        let product = mul_ntt(&self.params.a[self.cnt], x, self.plan)?;
        self.acc.accumulate(&product);
        self.cnt += 1;
        self.state = SessionState::MmhCount;
        Ok(verdict)
    }

    pub fn count(&mut self) -> Result<SessionState> {
        self.expect(SessionState::MmhCount, "count")?;
        self.state = if self.cnt < self.params.k {
            SessionState::Mmh
        } else {
            SessionState::Mh
        };
        Ok(self.state)
    }

    /// Runs MH on the accumulated MMH value and clears the accumulator.
    pub fn finish(&mut self) -> Result<&BitString> {
        self.expect(SessionState::Mh, "finish")?;
        let y = self.acc.value();
        let z = mh(self.params, &y, self.plan)?;
        self.acc.clear();
        self.state = SessionState::Output;
        Ok(self.output.insert(z))
    }

    pub fn take_output(&mut self) -> Result<BitString> {
        self.expect(SessionState::Output, "take_output")?;
        self.state = SessionState::Idle;
        Ok(self.output.take().expect("output present in Output state"))
    }
}

/// Result of compressing one input block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressOutput {
    pub key: BitString,
    pub rejected_blocks: usize,
    pub consumed_bits: usize,
}

/// Full MMH-MH compression of one block of key material.
///
/// Blocks are read as consecutive `γ`-bit fields; each rejected block is
/// replaced by the next unread field, so the input must hold `k·γ` bits plus
/// `γ` per rejection.
pub fn compress(params: &PaParams, key_material: &[u8], plan: &NttPlan) -> Result<CompressOutput> {
    let bits = params.modulus.bits();
    let available = key_material.len() * 8;
    let mut session = PaSession::new(params, plan)?;
    let mut cursor = 0usize;
    session.start()?;
    while session.state() != SessionState::Mh {
        if cursor + bits > available {
            return Err(Error::InsufficientMaterial {
                block: session.cnt() + 1,
                needed: cursor + bits - available,
            });
        }
        let x = LimbVec::from_bits_le(key_material, cursor, bits);
        cursor += bits;
        if session.feed(&x)?.accepted {
            session.count()?;
        }
    }
    session.finish()?;
    Ok(CompressOutput {
        key: session.take_output()?,
        rejected_blocks: session.rejected(),
        consumed_bits: cursor,
    })
}
