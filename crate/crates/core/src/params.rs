//! Parameter selection: the Mersenne exponent catalog, the sub-block count
//! `k` from a compression ratio, and key-rate tables over distance.

use std::io::{Read, Write};

use crate::{Error, Result};

/// Exponents `γ` of the first 33 Mersenne primes `2^γ - 1`.
pub const MERSENNE_EXPONENTS: [u64; 33] = [
    2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607, 1279, 2203, 2281, 3217, 4253, 4423,
    9689, 9941, 11213, 19937, 21701, 23209, 44497, 86243, 110503, 132049, 216091, 756839, 859433,
];

/// Sub-block width of the 786432-bit multiplier configuration.
pub const PRODUCTION_GAMMA: u64 = 756_839;

pub fn is_catalogued_exponent(gamma: u64) -> bool {
    MERSENNE_EXPONENTS.binary_search(&gamma).is_ok()
}

/// Ordered list of Mersenne exponents available for parameter selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MersenneCatalog {
    exponents: Vec<u64>,
}

impl Default for MersenneCatalog {
    fn default() -> Self {
        Self {
            exponents: MERSENNE_EXPONENTS.to_vec(),
        }
    }
}

impl MersenneCatalog {
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn contains(&self, gamma: u64) -> bool {
        self.exponents.binary_search(&gamma).is_ok()
    }

    /// Largest exponent that fits a multiplier supporting `capacity_bits`-bit operands.
    pub fn choose_gamma(&self, capacity_bits: u64) -> Result<u64> {
        self.exponents
            .iter()
            .rev()
            .find(|&&g| g <= capacity_bits)
            .copied()
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "capacity {capacity_bits} is below the smallest exponent {}",
                    self.exponents[0]
                ))
            })
    }
}

/// Largest `k` with `k * r_pa_max < 1`, i.e. `1/k > r_pa_max`.
pub fn choose_k(r_pa_max: f64) -> Result<u64> {
    if !(r_pa_max > 0.0 && r_pa_max < 1.0) {
        return Err(Error::InvalidParams(format!(
            "compression ratio {r_pa_max} must lie in (0, 1)"
        )));
    }
    let estimate = (1.0 / r_pa_max).ceil();
    if estimate > u64::MAX as f64 / 2.0 {
        return Err(Error::InvalidParams(format!(
            "compression ratio {r_pa_max} is too small"
        )));
    }
    let mut k = (estimate as u64).max(1);
    while k > 1 && k as f64 * r_pa_max >= 1.0 {
        k -= 1;
    }
    while ((k + 1) as f64) * r_pa_max < 1.0 {
        k += 1;
    }
    Ok(k)
}

/// Input block size `N = k * γ` in bits.
pub fn block_size(gamma: u64, k: u64) -> u64 {
    gamma * k
}

/// One point of an externally computed compression-ratio curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateCurvePoint {
    pub distance_km: f64,
    pub r_pa: f64,
    pub sifted_rate_bps: f64,
}

/// One output row of a key-rate table. `k` and `n_bits` are zero where the
/// compression ratio leaves no key.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyRateRow {
    pub distance_km: f64,
    pub k: u64,
    pub n_bits: u64,
    pub final_rate_bps: f64,
}

pub fn tabulate_keyrate(curve: &[RateCurvePoint], gamma: u64) -> Result<Vec<KeyRateRow>> {
    if curve.is_empty() {
        return Err(Error::Curve("curve has no points".into()));
    }
    if gamma == 0 {
        return Err(Error::InvalidParams("gamma must be positive".into()));
    }
    let mut rows = Vec::with_capacity(curve.len());
    let mut previous: Option<f64> = None;
    for (i, point) in curve.iter().enumerate() {
        let line = i + 2;
        if !point.distance_km.is_finite() || !point.r_pa.is_finite() || !point.sifted_rate_bps.is_finite() {
            return Err(Error::Curve(format!("row {line}: non-finite value")));
        }
        if point.r_pa >= 1.0 {
            return Err(Error::Curve(format!(
                "row {line}: compression ratio {} must be below 1",
                point.r_pa
            )));
        }
        if point.sifted_rate_bps < 0.0 {
            return Err(Error::Curve(format!("row {line}: negative sifted rate")));
        }
        if previous.is_some_and(|d| point.distance_km <= d) {
            return Err(Error::Curve(format!("row {line}: distances must be ascending")));
        }
        previous = Some(point.distance_km);

        let row = if point.r_pa > 0.0 {
            let k = choose_k(point.r_pa).map_err(|e| Error::Curve(format!("row {line}: {e}")))?;
            KeyRateRow {
                distance_km: point.distance_km,
                k,
                n_bits: block_size(gamma, k),
                final_rate_bps: point.sifted_rate_bps * point.r_pa,
            }
        } else {
            KeyRateRow {
                distance_km: point.distance_km,
                k: 0,
                n_bits: 0,
                final_rate_bps: 0.0,
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

pub const CURVE_HEADER: [&str; 3] = ["distance_km", "r_pa", "sifted_rate_bps"];
pub const TABLE_HEADER: [&str; 4] = ["distance_km", "k", "N_bits", "final_rate_bps"];

/// Parses a `distance_km,r_pa,sifted_rate_bps` CSV with a mandatory header.
pub fn read_curve_csv(reader: impl Read) -> Result<Vec<RateCurvePoint>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != CURVE_HEADER {
        return Err(Error::Curve(format!(
            "expected header `{}`, found `{}`",
            CURVE_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut points = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |idx: usize| -> Result<f64> {
            record[idx]
                .parse::<f64>()
                .map_err(|_| Error::Curve(format!("row {}: bad number `{}`", i + 2, &record[idx])))
        };
        points.push(RateCurvePoint {
            distance_km: field(0)?,
            r_pa: field(1)?,
            sifted_rate_bps: field(2)?,
        });
    }
    Ok(points)
}

pub fn write_table_csv(rows: &[KeyRateRow], writer: impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(TABLE_HEADER)?;
    for row in rows {
        wtr.write_record([
            row.distance_km.to_string(),
            row.k.to_string(),
            row.n_bits.to_string(),
            row.final_rate_bps.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
