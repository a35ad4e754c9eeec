//! Throughput measurement on random key material.

use std::time::{Duration, Instant};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::ntt::{NttPlan, Radix};
use crate::pa::{compress, PaParams};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub gamma: u64,
    pub k: usize,
    /// Final key length; defaults to half of `γ - s`.
    pub r: Option<usize>,
    /// Security parameter; defaults to `min(100, γ/4)`.
    pub s: Option<usize>,
    pub radix: Radix,
    pub trials: usize,
    pub threads: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(gamma: u64, k: usize, radix: Radix, trials: usize) -> Self {
        Self {
            gamma,
            k,
            r: None,
            s: None,
            radix,
            trials,
            threads: 1,
            seed: 0x5eed,
        }
    }

    fn resolved_rs(&self) -> (usize, usize) {
        let gamma = self.gamma as usize;
        let s = self.s.unwrap_or_else(|| (gamma / 4).min(100));
        let r = self.r.unwrap_or_else(|| (gamma.saturating_sub(s) / 2).max(1));
        (r, s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    /// Bits per compressed block, `k·γ`.
    pub input_bits: u64,
    /// Median wall time of one trial in seconds.
    pub wall_time_s: f64,
    /// `threads · input_bits / wall_time / 10^6`.
    pub throughput_mbps: f64,
    pub gamma: u64,
    pub k: usize,
    pub radix: Radix,
    pub threads: usize,
    pub trials: usize,
    pub rejected_blocks: usize,
}

impl BenchReport {
    pub const CSV_HEADER: &'static str =
        "input_bits,wall_time_s,throughput_mbps,gamma,k,radix,threads,trials";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6},{:.3},{},{},{},{},{}",
            self.input_bits,
            self.wall_time_s,
            self.throughput_mbps,
            self.gamma,
            self.k,
            self.radix,
            self.threads,
            self.trials
        )
    }
}

fn random_material(rng: &mut ChaCha20Rng, bits: usize) -> Vec<u8> {
    // headroom for the odd rejected block
    let mut bytes = vec![0u8; bits.div_ceil(8) * 2];
    rng.fill_bytes(&mut bytes);
    bytes
}

/// Times `trials` compressions per thread. Plan construction and data
/// generation are excluded; every thread runs its own session against the
/// shared plan.
pub fn run(config: &BenchConfig) -> Result<BenchReport> {
    if config.trials == 0 || config.threads == 0 {
        return Err(Error::InvalidParams("trials and threads must be positive".into()));
    }
    let (r, s) = config.resolved_rs();
    let params = PaParams::from_seed(config.gamma, config.k, r, s, config.seed)?;
    let plan = params.plan(config.radix)?;
    run_with(&params, &plan, config.trials, config.threads, config.seed)
}

pub fn run_with(
    params: &PaParams,
    plan: &NttPlan,
    trials: usize,
    threads: usize,
    seed: u64,
) -> Result<BenchReport> {
    let bits = params.block_bits();
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xda7a);
    let inputs: Vec<Vec<u8>> = (0..threads).map(|_| random_material(&mut rng, bits)).collect();

    let mut times = Vec::with_capacity(trials);
    let mut rejected = 0;
    for _ in 0..trials {
        let start = Instant::now();
        let outcomes: Vec<Result<usize>> = if threads == 1 {
            vec![compress(params, &inputs[0], plan).map(|o| o.rejected_blocks)]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = inputs
                    .iter()
                    .map(|input| scope.spawn(move || compress(params, input, plan).map(|o| o.rejected_blocks)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("bench worker panicked"))
                    .collect()
            })
        };
        times.push(start.elapsed());
        for o in outcomes {
            rejected += o?;
        }
    }
    let wall = median(&mut times).as_secs_f64().max(1e-9);
    Ok(BenchReport {
        input_bits: bits as u64,
        wall_time_s: wall,
        throughput_mbps: (threads * bits) as f64 / wall / 1e6,
        gamma: params.gamma(),
        k: params.k(),
        radix: plan.radix(),
        threads,
        trials,
        rejected_blocks: rejected,
    })
}

fn median(times: &mut [Duration]) -> Duration {
    times.sort_unstable();
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        (times[n / 2 - 1] + times[n / 2]) / 2
    }
}
