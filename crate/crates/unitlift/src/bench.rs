//! Inversion benchmark over `M_n(Z_{p^k})`: adjugate, unit-pivot
//! Gauss-Jordan and lifting from `Z_p`, on the same seeded matrices.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use unitlift_core::arith;
use unitlift_core::matrix::{adjugate_inverse, gauss_jordan_inverse, lift_inverse_kernel};
use unitlift_core::{Error as CoreError, ModMatrix, OpCount};

use crate::Error;

pub const MAX_DIMENSION: usize = 64;
pub const MAX_TRIALS: u64 = 1_000_000;
/// Rejection sampling gives up after this many singular draws in a row.
const MAX_REJECTIONS: u32 = 10_000;

pub const METHODS: [&str; 3] = ["adjugate", "gauss_jordan", "lift"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BenchConfig {
    pub n: usize,
    pub p: u64,
    pub k: u32,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[serde(skip)]
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRecord {
    pub method: &'static str,
    pub n: usize,
    pub p: u64,
    pub k: u32,
    pub trial: u64,
    pub nanoseconds: u64,
    pub mulcount: u64,
    pub matrix_products: u64,
    pub squarings: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub modulus: u64,
    pub records: Vec<BenchRecord>,
    /// Trials on which all three methods returned the same inverse.
    pub agreed: u64,
    /// Singular draws discarded while sampling.
    pub rejected: u64,
}

impl BenchConfig {
    fn modulus(&self) -> Result<u64, Error> {
        if self.n == 0 || self.n > MAX_DIMENSION {
            return Err(CoreError::ResourceLimit(format!("dimension {} is outside 1..={MAX_DIMENSION}", self.n)).into());
        }
        if self.trials > MAX_TRIALS {
            return Err(
                CoreError::ResourceLimit(format!("{} trials is above the cap of {MAX_TRIALS}", self.trials)).into()
            );
        }
        if !arith::is_prime(self.p) || self.k == 0 {
            return Err(CoreError::InvalidDescriptor(format!("{}^{} is not a prime power", self.p, self.k)).into());
        }
        match arith::checked_pow_u64(self.p, self.k) {
            Ok(q) if q < 1 << 63 => Ok(q),
            _ => Err(CoreError::ResourceLimit(format!("{}^{} is not below 2^63", self.p, self.k)).into()),
        }
    }
}

/// Matrix for `trial`: stream `trial` of the seeded generator, redrawn until
/// it is invertible mod `p`.
pub fn sample_matrix(config: &BenchConfig, modulus: u64, trial: u64) -> Result<(ModMatrix, u64), Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    for rejected in 0..MAX_REJECTIONS {
        let rows: Vec<Vec<u64>> =
            (0..config.n).map(|_| (0..config.n).map(|_| rng.gen_range(0..modulus)).collect()).collect();
        let a = ModMatrix::from_rows(&rows, modulus)?;
        if a.reduce(config.p).det() != 0 {
            return Ok((a, rejected as u64));
        }
    }
    Err(CoreError::ResourceLimit(format!("no invertible matrix after {MAX_REJECTIONS} draws")).into())
}

/// Records of one trial and the number of singular draws before it.
type Trial = (Vec<BenchRecord>, u64);

fn run_trial(config: &BenchConfig, modulus: u64, trial: u64) -> Result<Trial, Error> {
    let (a, rejected) = sample_matrix(config, modulus, trial)?;
    let mut records = Vec::with_capacity(3);
    let mut results = Vec::with_capacity(3);
    for method in METHODS {
        let mut ops = OpCount::default();
        let start = Instant::now();
        let inverse = match method {
            "adjugate" => adjugate_inverse(&a, &mut ops),
            "gauss_jordan" => gauss_jordan_inverse(&a, config.p, &mut ops),
            _ => lift_inverse_kernel(&a, config.p, config.k, &mut ops),
        };
        let nanoseconds = start.elapsed().as_nanos() as u64;
        let inverse = inverse
            .ok_or_else(|| CoreError::Internal(format!("{method} failed on trial {trial}: matrix is a unit")))?;
        records.push(BenchRecord {
            method,
            n: config.n,
            p: config.p,
            k: config.k,
            trial,
            nanoseconds,
            mulcount: ops.scalar_muls,
            matrix_products: ops.matrix_products,
            squarings: ops.squarings,
        });
        results.push(inverse);
    }
    if !a.mul(&results[0]).is_identity() || results.iter().any(|r| r != &results[0]) {
        return Err(CoreError::Internal(format!("inversion methods disagree on trial {trial}")).into());
    }
    Ok((records, rejected))
}

pub fn bench_inversion(config: BenchConfig) -> Result<BenchReport, Error> {
    let modulus = config.modulus()?;
    let threads = config.threads.clamp(1, 64) as u64;
    let per_worker = config.trials.div_ceil(threads).max(1);
    let chunks: Vec<Result<Vec<Trial>, Error>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let range = (w * per_worker).min(config.trials)..((w + 1) * per_worker).min(config.trials);
                scope.spawn(move || range.map(|t| run_trial(&config, modulus, t)).collect())
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
    });
    let mut records = Vec::with_capacity(3 * config.trials as usize);
    let mut rejected = 0;
    // workers cover consecutive trial ranges, so concatenation is trial order
    for chunk in chunks {
        for (r, skipped) in chunk? {
            records.extend(r);
            rejected += skipped;
        }
    }
    Ok(BenchReport { config, modulus, records, agreed: config.trials, rejected })
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,n,p,k,trial,nanoseconds,mulcount\n");
        for r in &self.records {
            let _ = writeln!(out, "{},{},{},{},{},{},{}", r.method, r.n, r.p, r.k, r.trial, r.nanoseconds, r.mulcount);
        }
        out
    }

    /// The report with timings zeroed; a function of the configuration alone.
    pub fn deterministic_part(&self) -> Vec<BenchRecord> {
        self.records.iter().map(|r| BenchRecord { nanoseconds: 0, ..r.clone() }).collect()
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "## Inversion benchmark: n = {}, modulus {}^{} = {}, {} trials, seed {}\n\n",
            c.n, c.p, c.k, self.modulus, c.trials, c.seed
        );
        let _ = writeln!(
            out,
            "All three methods agreed on {} of {} trials ({} singular draws rejected).\n",
            self.agreed, c.trials, self.rejected
        );
        out.push_str("| method | median ns | mean ns | scalar muls / inverse | matrix products | squarings |\n");
        out.push_str("|---|---:|---:|---:|---:|---:|\n");
        for method in METHODS {
            let rows: Vec<&BenchRecord> = self.records.iter().filter(|r| r.method == method).collect();
            if rows.is_empty() {
                continue;
            }
            let mut times: Vec<u64> = rows.iter().map(|r| r.nanoseconds).collect();
            times.sort_unstable();
            let count = rows.len() as u64;
            let mean = times.iter().sum::<u64>() / count;
            let muls = rows.iter().map(|r| r.mulcount).sum::<u64>() / count;
            let last = rows[rows.len() - 1];
            let _ = writeln!(
                out,
                "| {method} | {} | {mean} | {muls} | {} | {} |",
                times[times.len() / 2],
                last.matrix_products,
                last.squarings
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(n: usize, p: u64, k: u32, trials: u64, seed: u64) -> BenchConfig {
        BenchConfig { n, p, k, trials, seed, threads: 1 }
    }

    #[test]
    fn seeded_reports_are_reproducible() {
        let a = bench_inversion(config(3, 3, 3, 40, 1)).unwrap();
        let b = bench_inversion(BenchConfig { threads: 4, ..config(3, 3, 3, 40, 1) }).unwrap();
        assert_eq!(a.deterministic_part(), b.deterministic_part());
        assert_eq!(a.records.len(), 120);
        assert_eq!(a.agreed, 40);
        let other = bench_inversion(config(3, 3, 3, 40, 2)).unwrap();
        assert_ne!(a.deterministic_part(), other.deterministic_part());
    }

    #[test]
    fn scalar_case() {
        let report = bench_inversion(config(1, 5, 3, 20, 9)).unwrap();
        assert_eq!(report.agreed, 20);
    }

    #[test]
    fn squarings_for_large_exponent() {
        let report = bench_inversion(config(8, 2, 16, 2, 7)).unwrap();
        let lift = report.records.iter().find(|r| r.method == "lift").unwrap();
        // S - 1 = 2^15 - 1 by left-to-right square and multiply
        assert_eq!((lift.squarings, lift.matrix_products), (14, 30));
    }

    #[test]
    fn caps() {
        assert!(matches!(bench_inversion(config(65, 3, 1, 1, 1)), Err(Error::Core(CoreError::ResourceLimit(_)))));
        assert!(matches!(bench_inversion(config(2, 2, 63, 1, 1)), Err(Error::Core(CoreError::ResourceLimit(_)))));
        assert!(matches!(bench_inversion(config(2, 4, 1, 1, 1)), Err(Error::Core(CoreError::InvalidDescriptor(_)))));
    }

    #[test]
    fn csv_header() {
        let report = bench_inversion(config(2, 3, 2, 1, 1)).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("method,n,p,k,trial,nanoseconds,mulcount\nadjugate,2,3,2,0,"));
        assert_eq!(csv.lines().count(), 4);
    }
}
