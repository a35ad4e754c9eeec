//! Mixed-radix decimation-in-time NTT over `F_p`.
//!
//! A plan of size `N` runs `log_r(N)` radix-`r` passes followed by at most two
//! smaller passes (radix 4 and/or 2) when `log2(N)` is not a multiple of
//! `log2(r)`. Inputs are gathered through a digit-reversal permutation so the
//! public API takes and returns vectors in natural order.
//!
//! Inside the 4- and 16-point kernels every twiddle is a power of two
//! (`W_16 = 2^12`, `W_4 = 2^48`), so those products are shifts followed by the
//! 128-bit reduction. Only the inter-pass twiddles need general products.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::field::{FieldElem, MAX_ROOT_LOG2};
use crate::{Error, Result};

/// Largest supported transform.
pub const MAX_SIZE: usize = 1 << MAX_ROOT_LOG2;

/// `W_16 = 2^12`; the inverse root is `2^(192 - 12)`.
const W16_SHIFT: u32 = 12;
/// Butterflies processed together in the strided passes.
const TILE: usize = 8;

/// Butterfly radix of the main passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Radix {
    R2 = 2,
    R4 = 4,
    #[default]
    R16 = 16,
}

impl Radix {
    pub const ALL: [Radix; 3] = [Radix::R2, Radix::R4, Radix::R16];

    pub fn new(radix: u32) -> Result<Self> {
        match radix {
            2 => Ok(Radix::R2),
            4 => Ok(Radix::R4),
            16 => Ok(Radix::R16),
            other => Err(Error::Radix(other)),
        }
    }

    pub fn get(self) -> usize {
        self as usize
    }

    pub fn log2(self) -> u32 {
        match self {
            Radix::R2 => 1,
            Radix::R4 => 2,
            Radix::R16 => 4,
        }
    }
}

impl std::fmt::Display for Radix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.get())
    }
}

impl std::str::FromStr for Radix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: u32 = s.trim().parse().map_err(|_| Error::Radix(0))?;
        Radix::new(value)
    }
}

/// One butterfly pass. Sub-transforms of length `span` are combined `radix`
/// at a time; `twiddles[j * (radix - 1) + t - 1] = W_{span * radix}^{j t}`.
#[derive(Clone, Debug)]
struct Stage {
    radix: usize,
    span: usize,
    twiddles: Vec<FieldElem>,
    inv_twiddles: Vec<FieldElem>,
}

/// Precomputed transform of a fixed power-of-two size.
#[derive(Clone, Debug)]
pub struct NttPlan {
    size: usize,
    radix: Radix,
    root: FieldElem,
    n_inv: FieldElem,
    stages: Vec<Stage>,
    permutation: Vec<u32>,
}

impl NttPlan {
    pub fn new(size: usize, radix: Radix) -> Result<Self> {
        let log2 = checked_log2(size)?;
        let radices = stage_radices(log2, radix);
        let root = FieldElem::root_of_unity(log2)?;
        let root_inv = root.inv()?;
        let n_inv = FieldElem::new(size as u64).inv()?;

        let powers = power_table(root, size);
        let inv_powers = power_table(root_inv, size);

        let mut stages = Vec::with_capacity(radices.len());
        let mut span = 1usize;
        for &r in &radices {
            let len = span * r;
            let step = size / len;
            let mut twiddles = Vec::with_capacity(span * (r - 1));
            let mut inv_twiddles = Vec::with_capacity(span * (r - 1));
            // the first pass has span 1 and only unit twiddles
            for j in (0..span).filter(|_| span > 1) {
                for t in 1..r {
                    let idx = (step * j * t) % size;
                    twiddles.push(powers[idx]);
                    inv_twiddles.push(inv_powers[idx]);
                }
            }
            stages.push(Stage {
                radix: r,
                span,
                twiddles,
                inv_twiddles,
            });
            span = len;
        }

        let plan = Self {
            size,
            radix,
            root,
            n_inv,
            permutation: digit_reversal(size, &radices),
            stages,
        };
        plan.verify()?;
        Ok(plan)
    }

    /// Smallest plan whose half-size holds `limbs` operand limbs.
    pub fn for_operand_limbs(limbs: usize, radix: Radix) -> Result<Self> {
        Self::new(Self::size_for_operand_limbs(limbs), radix)
    }

    pub fn size_for_operand_limbs(limbs: usize) -> usize {
        (2 * limbs.max(1)).next_power_of_two()
    }

    /// Loads serialized twiddle tables from `dir` when present and intact,
    /// otherwise builds the plan and writes the tables there.
    pub fn load_or_build(size: usize, radix: Radix, dir: &Path) -> Result<Self> {
        let path = dir.join(format!("ntt-{size}-r{}.bin", radix.get()));
        let mut plan = Self::new(size, radix)?;
        if let Ok(bytes) = fs::read(&path) {
            if plan.restore_tables(&bytes).is_ok() {
                return Ok(plan);
            }
            plan = Self::new(size, radix)?;
        }
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        let mut file = fs::File::create(&tmp)?;
        file.write_all(&plan.serialize_tables())?;
        file.sync_all()?;
        fs::rename(tmp, path)?;
        Ok(plan)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    /// The primitive `N`-th root `W_N`.
    pub fn root(&self) -> FieldElem {
        self.root
    }

    pub fn n_inv(&self) -> FieldElem {
        self.n_inv
    }

    pub fn stages(&self) -> usize {
        self.stages.len()
    }

    pub fn stage_radices(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.radix).collect()
    }

    /// Largest operand, in limbs, whose product fits without cyclic wraparound.
    pub fn max_operand_limbs(&self) -> usize {
        self.size / 2
    }

    fn verify(&self) -> Result<()> {
        let n = self.size as u64;
        if self.root.pow(n) != FieldElem::ONE {
            return Err(Error::PlanVerification("W_N^N != 1"));
        }
        if self.root.pow(n / 2) != FieldElem::NEG_ONE {
            return Err(Error::PlanVerification("W_N^(N/2) != -1"));
        }
        if self.n_inv * FieldElem::new(n) != FieldElem::ONE {
            return Err(Error::PlanVerification("N * N^-1 != 1"));
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                found: len,
            });
        }
        Ok(())
    }

    /// Natural-order forward transform, `X_k = Σ x_n W_N^{nk}`.
    pub fn forward(&self, input: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let mut out = vec![FieldElem::ZERO; self.size];
        self.forward_into(input, &mut out)?;
        Ok(out)
    }

    /// Natural-order inverse transform, `x_k = N^{-1} Σ X_n W_N^{-nk}`.
    pub fn inverse(&self, input: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let mut out = vec![FieldElem::ZERO; self.size];
        self.inverse_into(input, &mut out)?;
        Ok(out)
    }

    pub fn forward_into(&self, input: &[FieldElem], out: &mut [FieldElem]) -> Result<()> {
        self.check_len(input.len())?;
        self.check_len(out.len())?;
        self.gather(|n| input[n], out);
        self.run_stages(out, false);
        Ok(())
    }

    pub fn inverse_into(&self, input: &[FieldElem], out: &mut [FieldElem]) -> Result<()> {
        self.check_len(input.len())?;
        self.check_len(out.len())?;
        self.gather(|n| input[n], out);
        self.run_stages(out, true);
        for x in out.iter_mut() {
            *x *= self.n_inv;
        }
        Ok(())
    }

    /// Forward transform of a zero-extended sequence given by `source`, which
    /// is only queried for indices below `len`.
    pub(crate) fn forward_padded(
        &self,
        len: usize,
        source: impl Fn(usize) -> FieldElem,
        out: &mut [FieldElem],
    ) {
        debug_assert_eq!(out.len(), self.size);
        self.gather(
            |n| if n < len { source(n) } else { FieldElem::ZERO },
            out,
        );
        self.run_stages(out, false);
    }

    /// Applies the input reordering expected by the first pass.
    pub fn digit_reverse(&self, input: &[FieldElem]) -> Result<Vec<FieldElem>> {
        self.check_len(input.len())?;
        let mut out = vec![FieldElem::ZERO; self.size];
        self.gather(|n| input[n], &mut out);
        Ok(out)
    }

    /// Runs a single forward pass. Applying [`digit_reverse`](Self::digit_reverse)
    /// and then every stage in order reproduces [`forward`](Self::forward).
    pub fn butterfly_stage(&self, input: &[FieldElem], stage: usize) -> Result<Vec<FieldElem>> {
        self.check_len(input.len())?;
        let pass = self.stages.get(stage).ok_or(Error::StageOutOfRange {
            stage,
            stages: self.stages.len(),
        })?;
        let mut out = input.to_vec();
        run_stage(&mut out, pass, false);
        Ok(out)
    }

    #[inline]
    fn gather(&self, source: impl Fn(usize) -> FieldElem, out: &mut [FieldElem]) {
        for (dst, &n) in out.iter_mut().zip(&self.permutation) {
            *dst = source(n as usize);
        }
    }

    fn run_stages(&self, data: &mut [FieldElem], inverse: bool) {
        for stage in &self.stages {
            run_stage(data, stage, inverse);
        }
    }

    /// Perturbs one inter-pass twiddle. Returns `false` when the plan has no
    /// inter-pass twiddles to corrupt. Only useful as a negative control.
    #[doc(hidden)]
    pub fn corrupt_twiddle(&mut self) -> bool {
        match self.stages.iter_mut().rev().find(|s| !s.twiddles.is_empty()) {
            Some(stage) => {
                let idx = stage.twiddles.len() / 2;
                stage.twiddles[idx] += FieldElem::ONE;
                true
            }
            None => false,
        }
    }

    const MAGIC: &'static [u8; 8] = b"PAFGNTT1";

    fn serialize_tables(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(Self::MAGIC);
        out.extend_from_slice(&(self.size as u64).to_le_bytes());
        out.extend_from_slice(&(self.radix.get() as u64).to_le_bytes());
        for stage in &self.stages {
            for w in stage.twiddles.iter().chain(&stage.inv_twiddles) {
                out.extend_from_slice(&w.value().to_le_bytes());
            }
        }
        out
    }

    /// Replaces the twiddle tables with serialized ones after checking the
    /// header, the length and a sample of entries against direct powers.
    fn restore_tables(&mut self, bytes: &[u8]) -> io::Result<()> {
        let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
        let mut reader = bytes;
        let mut magic = [0u8; 8];
        reader.read_exact(&mut magic)?;
        if &magic != Self::MAGIC {
            return Err(bad("bad magic"));
        }
        let mut word = [0u8; 8];
        reader.read_exact(&mut word)?;
        let size = u64::from_le_bytes(word) as usize;
        reader.read_exact(&mut word)?;
        let radix = u64::from_le_bytes(word) as usize;
        if size != self.size || radix != self.radix.get() {
            return Err(bad("plan shape mismatch"));
        }
        let expected: usize = self.stages.iter().map(|s| 2 * s.twiddles.len()).sum();
        if reader.len() != expected * 8 {
            return Err(bad("truncated tables"));
        }
        let mut restored = Vec::with_capacity(self.stages.len());
        for stage in &self.stages {
            let mut read_table = |len: usize| -> io::Result<Vec<FieldElem>> {
                let mut table = Vec::with_capacity(len);
                for _ in 0..len {
                    reader.read_exact(&mut word)?;
                    let v = u64::from_le_bytes(word);
                    if v >= crate::field::MODULUS {
                        return Err(bad("non-canonical entry"));
                    }
                    table.push(FieldElem::new(v));
                }
                Ok(table)
            };
            let tw = read_table(stage.twiddles.len())?;
            let inv = read_table(stage.inv_twiddles.len())?;
            restored.push((tw, inv));
        }
        let root_inv = self.root.inv().map_err(|_| bad("zero root"))?;
        for (stage, (tw, inv)) in self.stages.iter().zip(&restored) {
            let r = stage.radix;
            let step = (self.size / (stage.span * r)) as u64;
            let count = tw.len();
            for idx in sample_indices(count) {
                let (j, t) = ((idx / (r - 1)) as u64, (idx % (r - 1) + 1) as u64);
                if tw[idx] != self.root.pow(step * j * t) || inv[idx] != root_inv.pow(step * j * t) {
                    return Err(bad("twiddle sample mismatch"));
                }
            }
        }
        for (stage, (tw, inv)) in self.stages.iter_mut().zip(restored) {
            stage.twiddles = tw;
            stage.inv_twiddles = inv;
        }
        Ok(())
    }
}

fn sample_indices(count: usize) -> impl Iterator<Item = usize> {
    let picks = count.min(8);
    (0..picks).map(move |i| if picks <= 1 { 0 } else { i * (count - 1) / (picks - 1) })
}

fn checked_log2(size: usize) -> Result<u32> {
    if !(2..=MAX_SIZE).contains(&size) || !size.is_power_of_two() {
        return Err(Error::PlanSize(size));
    }
    Ok(size.trailing_zeros())
}

/// Main passes of `radix` followed by radix-4 / radix-2 passes for the leftover bits.
fn stage_radices(log2: u32, radix: Radix) -> Vec<usize> {
    let bits = radix.log2();
    let mut radices = vec![radix.get(); (log2 / bits) as usize];
    let mut rest = log2 % bits;
    while rest >= 2 {
        radices.push(4);
        rest -= 2;
    }
    if rest == 1 {
        radices.push(2);
    }
    radices
}

fn power_table(root: FieldElem, size: usize) -> Vec<FieldElem> {
    let mut table = Vec::with_capacity(size);
    let mut acc = FieldElem::ONE;
    for _ in 0..size {
        table.push(acc);
        acc *= root;
    }
    table
}

/// `perm[position] = source index` for a decimation-in-time pass sequence.
/// The first pass's digit is least significant in the position and most
/// significant in the source index.
fn digit_reversal(size: usize, radices: &[usize]) -> Vec<u32> {
    let mut perm = vec![0u32; size];
    for (n, slot) in (0..size).map(|n| {
        let mut rest = n;
        let mut position = 0usize;
        let mut place = size;
        for &r in radices.iter().rev() {
            place /= r;
            position += (rest % r) * place;
            rest /= r;
        }
        (n, position)
    }) {
        perm[slot] = n as u32;
    }
    perm
}

fn run_stage(data: &mut [FieldElem], stage: &Stage, inverse: bool) {
    // W^{-1} kernels are the forward kernels with output index k sent to -k
    match (stage.radix, inverse) {
        (2, false) => pass::<2>(data, stage.span, &stage.twiddles, kernel2),
        (2, true) => pass::<2>(data, stage.span, &stage.inv_twiddles, kernel2),
        (4, false) => pass::<4>(data, stage.span, &stage.twiddles, kernel4),
        (4, true) => pass::<4>(data, stage.span, &stage.inv_twiddles, |b| {
            kernel4(b);
            b.swap(1, 3);
        }),
        (16, false) => pass::<16>(data, stage.span, &stage.twiddles, kernel16),
        (16, true) => pass::<16>(data, stage.span, &stage.inv_twiddles, |b| {
            kernel16(b);
            b[1..].reverse();
        }),
        _ => unreachable!("radix fixed at plan construction"),
    }
}

#[inline(always)]
fn pass<const R: usize>(
    data: &mut [FieldElem],
    span: usize,
    twiddles: &[FieldElem],
    kernel: impl Fn(&mut [FieldElem; R]),
) {
    let mut buf = [FieldElem::ZERO; R];
    if span == 1 {
        for block in data.chunks_exact_mut(R) {
            buf.copy_from_slice(block);
            kernel(&mut buf);
            block.copy_from_slice(&buf);
        }
        return;
    }
    if span.is_multiple_of(TILE) {
        // TILE adjacent butterflies at once so every cache line touched is used in full
        let mut tile = [[FieldElem::ZERO; R]; TILE];
        for block in data.chunks_exact_mut(R * span) {
            for (j0, tw) in (0..span).step_by(TILE).zip(twiddles.chunks_exact(TILE * (R - 1))) {
                for (u, lane) in tile.iter_mut().enumerate() {
                    lane[0] = block[j0 + u];
                }
                for t in 1..R {
                    let row = &block[t * span + j0..t * span + j0 + TILE];
                    for (u, lane) in tile.iter_mut().enumerate() {
                        lane[t] = row[u] * tw[u * (R - 1) + t - 1];
                    }
                }
                for lane in tile.iter_mut() {
                    kernel(lane);
                }
                for q in 0..R {
                    let row = &mut block[q * span + j0..q * span + j0 + TILE];
                    for (u, lane) in tile.iter().enumerate() {
                        row[u] = lane[q];
                    }
                }
            }
        }
        return;
    }
    for block in data.chunks_exact_mut(R * span) {
        for (j, tw) in twiddles.chunks_exact(R - 1).enumerate() {
            buf[0] = block[j];
            for t in 1..R {
                buf[t] = block[j + t * span] * tw[t - 1];
            }
            kernel(&mut buf);
            for (q, b) in buf.iter().enumerate() {
                block[j + q * span] = *b;
            }
        }
    }
}

#[inline(always)]
fn kernel2(b: &mut [FieldElem; 2]) {
    let (x, y) = (b[0], b[1]);
    b[0] = x + y;
    b[1] = x - y;
}

/// 4-point DFT with `W_4 = 2^48`.
#[inline(always)]
fn kernel4(b: &mut [FieldElem; 4]) {
    let t0 = b[0] + b[2];
    let t1 = b[0] - b[2];
    let t2 = b[1] + b[3];
    let t3 = (b[1] - b[3]).mul_pow2(4 * W16_SHIFT);
    b[0] = t0 + t2;
    b[1] = t1 + t3;
    b[2] = t0 - t2;
    b[3] = t1 - t3;
}

/// 16-point DFT with `W_16 = 2^12`, as two layers of 4-point DFTs with
/// `W_16^{n1 k0}` between them (`n = 4 n0 + n1`, `k = k0 + 4 k1`).
#[inline(always)]
fn kernel16(b: &mut [FieldElem; 16]) {
    const S: u32 = W16_SHIFT;
    let mut c = [[FieldElem::ZERO; 4]; 4];
    for (n1, col) in c.iter_mut().enumerate() {
        *col = [b[n1], b[4 + n1], b[8 + n1], b[12 + n1]];
        kernel4(col);
    }
    c[1][1] = c[1][1].mul_pow2(S);
    c[1][2] = c[1][2].mul_pow2(2 * S);
    c[1][3] = c[1][3].mul_pow2(3 * S);
    c[2][1] = c[2][1].mul_pow2(2 * S);
    c[2][2] = c[2][2].mul_pow2(4 * S);
    c[2][3] = c[2][3].mul_pow2(6 * S);
    c[3][1] = c[3][1].mul_pow2(3 * S);
    c[3][2] = c[3][2].mul_pow2(6 * S);
    c[3][3] = c[3][3].mul_pow2(9 * S);
    for k0 in 0..4 {
        let mut col = [c[0][k0], c[1][k0], c[2][k0], c[3][k0]];
        kernel4(&mut col);
        for (k1, v) in col.iter().enumerate() {
            b[k0 + 4 * k1] = *v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<FieldElem> {
        (0..n).map(|_| FieldElem::new(rng.gen())).collect()
    }

    #[test]
    fn plan_shapes() {
        let p = NttPlan::new(65536, Radix::R16).unwrap();
        assert_eq!(p.stages(), 4);
        let p = NttPlan::new(2, Radix::R2).unwrap();
        assert_eq!(p.root(), FieldElem::NEG_ONE);
        assert_eq!(p.stages(), 1);
        let p = NttPlan::new(16, Radix::R4).unwrap();
        assert_eq!(p.stages(), 2);
        assert_eq!(NttPlan::new(16, Radix::R2).unwrap().stages(), 4);
        assert_eq!(NttPlan::new(16, Radix::R16).unwrap().stages(), 1);
        assert_eq!(NttPlan::new(64, Radix::R16).unwrap().stage_radices(), vec![16, 4]);
        assert_eq!(NttPlan::new(128, Radix::R16).unwrap().stage_radices(), vec![16, 4, 2]);
        assert_eq!(NttPlan::new(2, Radix::R16).unwrap().stage_radices(), vec![2]);
        assert_eq!(NttPlan::new(8, Radix::R4).unwrap().stage_radices(), vec![4, 2]);
    }

    #[test]
    fn plan_errors() {
        assert!(matches!(NttPlan::new(0, Radix::R2), Err(Error::PlanSize(0))));
        assert!(matches!(NttPlan::new(1, Radix::R2), Err(Error::PlanSize(1))));
        assert!(matches!(NttPlan::new(48, Radix::R2), Err(Error::PlanSize(48))));
        assert!(matches!(NttPlan::new(1 << 17, Radix::R16), Err(Error::PlanSize(_))));
        assert!(matches!(Radix::new(8), Err(Error::Radix(8))));
    }

    #[test]
    fn plan_invariants() {
        for log in 1..=16 {
            let p = NttPlan::new(1 << log, Radix::R16).unwrap();
            let n = p.size() as u64;
            assert_eq!(p.root().pow(n), FieldElem::ONE);
            assert_eq!(p.root().pow(n / 2), FieldElem::NEG_ONE);
            assert_eq!(p.n_inv() * FieldElem::new(n), FieldElem::ONE);
        }
    }

    #[test]
    fn delta_and_ones() {
        for radix in Radix::ALL {
            for n in [2, 4, 8, 16, 32, 256, 1024] {
                let plan = NttPlan::new(n, radix).unwrap();
                let mut delta = vec![FieldElem::ZERO; n];
                delta[0] = FieldElem::ONE;
                let ones = vec![FieldElem::ONE; n];
                assert_eq!(plan.forward(&delta).unwrap(), ones);
                let mut spike = vec![FieldElem::ZERO; n];
                spike[0] = FieldElem::new(n as u64);
                assert_eq!(plan.forward(&ones).unwrap(), spike);
                assert_eq!(plan.inverse(&spike).unwrap(), ones);
            }
        }
    }

    #[test]
    fn forward_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for radix in Radix::ALL {
            for n in [2, 4, 8, 16, 32, 64, 128, 256] {
                let plan = NttPlan::new(n, radix).unwrap();
                for _ in 0..4 {
                    let v = random_vec(&mut rng, n);
                    assert_eq!(plan.forward(&v).unwrap(), oracle::dft(&v, plan.root()));
                }
            }
        }
    }

    #[test]
    fn inverse_matches_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        let plan = NttPlan::new(64, Radix::R16).unwrap();
        let v = random_vec(&mut rng, 64);
        let root_inv = plan.root().inv().unwrap();
        let expected: Vec<_> = oracle::dft(&v, root_inv)
            .into_iter()
            .map(|x| x * plan.n_inv())
            .collect();
        assert_eq!(plan.inverse(&v).unwrap(), expected);
    }

    #[test]
    fn stages_compose_to_forward() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for radix in Radix::ALL {
            for n in [16, 64, 512] {
                let plan = NttPlan::new(n, radix).unwrap();
                let v = random_vec(&mut rng, n);
                let mut acc = plan.digit_reverse(&v).unwrap();
                for s in 0..plan.stages() {
                    acc = plan.butterfly_stage(&acc, s).unwrap();
                }
                assert_eq!(acc, oracle::dft(&v, plan.root()));
            }
        }
    }

    #[test]
    fn single_radix16_stage_is_full_16_point_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let plan = NttPlan::new(16, Radix::R16).unwrap();
        let v = random_vec(&mut rng, 16);
        // a single 16-point pass with span 1 ignores ordering beyond the permutation
        let out = plan.butterfly_stage(&plan.digit_reverse(&v).unwrap(), 0).unwrap();
        assert_eq!(out, oracle::dft(&v, plan.root()));
        assert_eq!(plan.digit_reverse(&v).unwrap(), v);
    }

    #[test]
    fn delta_through_one_stage() {
        // a delta at block offset j in the last pass spreads into W^{j q} down its column
        let plan = NttPlan::new(256, Radix::R16).unwrap();
        let mut v = vec![FieldElem::ZERO; 256];
        v[16 + 3] = FieldElem::ONE;
        let out = plan.butterfly_stage(&v, 1).unwrap();
        let w16 = FieldElem::new(4096);
        let tw = plan.root().pow(3);
        for q in 0..16 {
            assert_eq!(out[3 + 16 * q], tw * w16.pow(q as u64));
        }
        let nonzero = out.iter().filter(|x| !x.is_zero()).count();
        assert_eq!(nonzero, 16);
    }

    #[test]
    fn stage_errors() {
        let plan = NttPlan::new(16, Radix::R4).unwrap();
        let v = vec![FieldElem::ZERO; 16];
        assert!(matches!(
            plan.butterfly_stage(&v, 2),
            Err(Error::StageOutOfRange { stage: 2, stages: 2 })
        ));
        assert!(matches!(
            plan.forward(&v[..8]),
            Err(Error::LengthMismatch { expected: 16, found: 8 })
        ));
        assert!(plan.inverse(&[FieldElem::ZERO; 17]).is_err());
    }

    #[test]
    fn power_of_two_twiddles_match_general_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let w16 = FieldElem::root_of_unity(4).unwrap();
        assert_eq!(w16, FieldElem::new(1 << 12));
        for _ in 0..1000 {
            let x = FieldElem::new(rng.gen());
            let e: u32 = rng.gen_range(0..16);
            let mut doubled = x;
            for _ in 0..12 * e {
                doubled = doubled.double();
            }
            assert_eq!(x * w16.pow(e as u64), doubled);
            assert_eq!(x.mul_pow2(12 * e), doubled);
        }
    }

    #[test]
    fn plan_cache_roundtrip_and_repair() {
        let dir = std::env::temp_dir().join(format!("pa-forge-plan-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let fresh = NttPlan::new(1024, Radix::R4).unwrap();
        let built = NttPlan::load_or_build(1024, Radix::R4, &dir).unwrap();
        let loaded = NttPlan::load_or_build(1024, Radix::R4, &dir).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = random_vec(&mut rng, 1024);
        let expected = fresh.forward(&v).unwrap();
        assert_eq!(built.forward(&v).unwrap(), expected);
        assert_eq!(loaded.forward(&v).unwrap(), expected);

        // a damaged file is rebuilt rather than trusted
        let path = dir.join("ntt-1024-r4.bin");
        let mut bytes = fs::read(&path).unwrap();
        let last = bytes.len() - 1;
        bytes[last] ^= 0x55;
        bytes[24] ^= 0x01;
        fs::write(&path, &bytes).unwrap();
        let repaired = NttPlan::load_or_build(1024, Radix::R4, &dir).unwrap();
        assert_eq!(repaired.forward(&v).unwrap(), expected);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn corrupted_twiddle_is_detectable() {
        let mut plan = NttPlan::new(256, Radix::R16).unwrap();
        assert!(plan.corrupt_twiddle());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_vec(&mut rng, 256);
        assert_ne!(plan.forward(&v).unwrap(), oracle::dft(&v, plan.root()));
        assert!(!NttPlan::new(16, Radix::R16).unwrap().corrupt_twiddle());
    }
}
