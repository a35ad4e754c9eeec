//! Built-in verification suite: root checks, small-size oracle comparisons
//! and the exhaustive universality count at `γ = 5`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bignum::{mersenne_reduce, mul_ntt, mul_schoolbook, LimbVec, MersenneModulus};
use crate::field::{FieldElem, MODULUS, ROOT_65536};
use crate::ntt::{NttPlan, Radix};
use crate::oracle;
use crate::pa::{compress, mmh, PaParams};
use crate::Result;

#[derive(Clone, Debug, Default)]
pub struct SelftestOptions {
    pub radix: Radix,
    /// Negative control: perturb one twiddle in every plan the suite builds.
    pub corrupt_twiddles: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Pair counts for the exhaustive MMH collision experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollisionProfile {
    pub p: u64,
    pub pairs: u64,
    /// Largest number of keys `a` under which a single pair collides.
    pub max_collisions: u64,
    pub total_collisions: u64,
}

impl CollisionProfile {
    /// Worst per-pair collision fraction `≤ 1/p`.
    pub fn within_bound(&self) -> bool {
        self.max_collisions * self.p <= self.p
    }
}

/// For every key `a ∈ Z_p` and every pair `x ≠ x'` in `Z_p` with `k = 1`,
/// counts the keys under which `g_a(x) = g_a(x')`.
pub fn mmh_collisions(gamma: u64, plan: &NttPlan) -> Result<CollisionProfile> {
    let p = (1u64 << gamma) - 1;
    let keyed: Vec<PaParams> = (0..p)
        .map(|a| PaParams::new(gamma, 1, 1, 0, vec![LimbVec::from_u64(a)], LimbVec::one(), LimbVec::zero()))
        .collect::<Result<_>>()?;
    // hashes[a][x]
    let hashes: Vec<Vec<LimbVec>> = keyed
        .iter()
        .map(|params| {
            (0..p)
                .map(|x| mmh(params, &[LimbVec::from_u64(x)], plan))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let mut pairs = 0;
    let mut max_collisions = 0;
    let mut total = 0;
    for x in 0..p as usize {
        for y in x + 1..p as usize {
            let c = hashes.iter().filter(|h| h[x] == h[y]).count() as u64;
            pairs += 1;
            total += c;
            max_collisions = max_collisions.max(c);
        }
    }
    Ok(CollisionProfile {
        p,
        pairs,
        max_collisions,
        total_collisions: total,
    })
}

struct Suite {
    opts: SelftestOptions,
    results: Vec<CheckResult>,
}

impl Suite {
    fn plan(&self, size: usize) -> Result<NttPlan> {
        let mut plan = NttPlan::new(size, self.opts.radix)?;
        if self.opts.corrupt_twiddles {
            plan.corrupt_twiddle();
        }
        Ok(plan)
    }

    fn record(&mut self, name: &'static str, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.results.push(CheckResult { name, passed, detail });
    }
}

pub fn run(opts: &SelftestOptions) -> Vec<CheckResult> {
    let mut suite = Suite {
        opts: opts.clone(),
        results: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f_7e57);

    let w = FieldElem::new(ROOT_65536);
    suite.record(
        "root-of-unity",
        Ok((
            w.pow(65536) == FieldElem::ONE && w.pow(32768) == FieldElem::NEG_ONE,
            format!("W = {w:?}"),
        )),
    );

    let mut field_ok = true;
    for _ in 0..10_000 {
        let (a, b) = (rng.gen_range(0..MODULUS), rng.gen_range(0..MODULUS));
        let expected = (a as u128 * b as u128 % MODULUS as u128) as u64;
        field_ok &= (FieldElem::new(a) * FieldElem::new(b)).value() == expected;
    }
    suite.record("field-mul-vs-wide", Ok((field_ok, "10000 pairs".into())));

    let ntt_check = (|| {
        for size in [16, 64, 256] {
            let plan = suite.plan(size)?;
            let v: Vec<_> = (0..size).map(|_| FieldElem::new(rng.gen())).collect();
            if plan.forward(&v)? != oracle::dft(&v, plan.root()) {
                return Ok((false, format!("forward mismatch at N = {size}")));
            }
            if plan.inverse(&plan.forward(&v)?)? != v {
                return Ok((false, format!("roundtrip mismatch at N = {size}")));
            }
        }
        Ok((true, "N in {16, 64, 256}".into()))
    })();
    suite.record("ntt-vs-dft", ntt_check);

    let conv_check = (|| {
        let plan = suite.plan(64)?;
        let u: Vec<_> = (0..64).map(|_| FieldElem::new(rng.gen())).collect();
        let v: Vec<_> = (0..64).map(|_| FieldElem::new(rng.gen())).collect();
        let fu = plan.forward(&u)?;
        let fv = plan.forward(&v)?;
        let prod: Vec<_> = fu.iter().zip(&fv).map(|(a, b)| *a * *b).collect();
        Ok((plan.inverse(&prod)? == oracle::cyclic_convolution(&u, &v), "N = 64".into()))
    })();
    suite.record("convolution-theorem", conv_check);

    let mul_check = (|| {
        for limbs in [4usize, 64, 1024] {
            let plan = suite.plan(NttPlan::size_for_operand_limbs(limbs))?;
            for _ in 0..3 {
                let x = random_limbs(&mut rng, limbs);
                let y = random_limbs(&mut rng, limbs);
                if mul_ntt(&x, &y, &plan)? != mul_schoolbook(&x, &y) {
                    return Ok((false, format!("mismatch at {limbs} limbs")));
                }
            }
        }
        Ok((true, "limbs in {4, 64, 1024}".into()))
    })();
    suite.record("mul-ntt-vs-schoolbook", mul_check);

    let reduce_check = (|| {
        for gamma in [61u64, 521, 1279] {
            let m = MersenneModulus::new(gamma)?;
            let p = oracle::to_biguint(&m.value());
            for _ in 0..10 {
                let x = random_limbs(&mut rng, (2 * gamma as usize).div_ceil(24)).low_bits(2 * gamma as usize);
                if oracle::to_biguint(&mersenne_reduce(&x, &m)) != oracle::to_biguint(&x) % &p {
                    return Ok((false, format!("mismatch at gamma = {gamma}")));
                }
            }
        }
        Ok((true, "gamma in {61, 521, 1279}".into()))
    })();
    suite.record("mersenne-reduce-vs-division", reduce_check);

    let pipeline_check = (|| {
        for &(gamma, k, r, s) in &[(13u64, 4usize, 4usize, 2usize), (61, 8, 30, 10), (521, 8, 256, 100)] {
            let params = PaParams::from_seed(gamma, k, r, s, rng.gen())?;
            let mut plan = params.plan(suite.opts.radix)?;
            if suite.opts.corrupt_twiddles {
                plan.corrupt_twiddle();
            }
            for _ in 0..3 {
                let input: Vec<u8> = (0..(gamma as usize * k).div_ceil(8) + 8).map(|_| rng.gen()).collect();
                let got = compress(&params, &input, &plan)?;
                let want = oracle::reference_compress(&params, &input)?;
                if num_bigint::BigUint::from_bytes_le(got.key.as_bytes()) != want.key {
                    return Ok((false, format!("mismatch at gamma = {gamma}")));
                }
            }
        }
        Ok((true, "gamma in {13, 61, 521}".into()))
    })();
    suite.record("compress-vs-reference", pipeline_check);

    let universality = (|| {
        let plan = suite.plan(2)?;
        let profile = mmh_collisions(5, &plan)?;
        Ok((
            profile.within_bound(),
            format!(
                "max {} of {} keys per pair over {} pairs",
                profile.max_collisions, profile.p, profile.pairs
            ),
        ))
    })();
    suite.record("mmh-universality-gamma5", universality);

    suite.results
}

fn random_limbs(rng: &mut impl Rng, n: usize) -> LimbVec {
    LimbVec::from_limbs((0..n).map(|_| rng.gen_range(0..1u32 << 24)).collect()).expect("24-bit limbs")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes() {
        for radix in Radix::ALL {
            let results = run(&SelftestOptions {
                radix,
                corrupt_twiddles: false,
            });
            for r in &results {
                assert!(r.passed, "{}: {}", r.name, r.detail);
            }
        }
    }

    #[test]
    fn corrupted_twiddles_fail() {
        let results = run(&SelftestOptions {
            radix: Radix::R16,
            corrupt_twiddles: true,
        });
        assert!(results.iter().any(|r| !r.passed));
        assert!(!results.iter().find(|r| r.name == "ntt-vs-dft").unwrap().passed);
    }

    #[test]
    fn verdicts_are_deterministic() {
        let opts = SelftestOptions::default();
        assert_eq!(run(&opts), run(&opts));
    }

    #[test]
    fn gamma5_collisions_hit_bound_exactly() {
        let plan = NttPlan::new(2, Radix::R2).unwrap();
        let profile = mmh_collisions(5, &plan).unwrap();
        assert_eq!(profile.pairs, 31 * 30 / 2);
        // only a = 0 maps distinct inputs together in a prime field
        assert_eq!(profile.max_collisions, 1);
        assert_eq!(profile.total_collisions, profile.pairs);
        assert!(profile.within_bound());
    }
}
