//! Benchmark harness: dimension by density sweeps over generated instances,
//! reduction arithmetic, and a postprocess that folds several covers into one.
//!
//! Grid cells are independent of each other; the harness runs them
//! sequentially so wall-clock timings are not disturbed by sibling cells.

use std::collections::HashSet;
use std::time::Instant;

use thiserror::Error;

use crate::datagen::{generate, GenMode, GenSpec};
use crate::minimize::{minimize, MinimizeOptions};
use crate::model::{Cover, Cube};
use crate::oracle::{equivalent, CheckMode};

/// Column order of [`to_csv`]; one column per [`BenchRecord`] field.
pub const CSV_HEADER: &str =
    "dims,density,seed,elapsed_seconds,num_implicants,num_literals,verified,gen_mode,verify_mode";

/// How a record's cover was checked against its instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled,
    Skipped,
}

impl VerifyMode {
    pub fn label(self) -> &'static str {
        match self {
            VerifyMode::Exhaustive => "exhaustive",
            VerifyMode::Sampled => "sampled",
            VerifyMode::Skipped => "skipped",
        }
    }
}

/// One minimization run. `elapsed_seconds` covers the minimizer call only,
/// never generation, parsing, or verification.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub dims: u32,
    pub density: f64,
    pub seed: u64,
    pub elapsed_seconds: f64,
    pub num_implicants: usize,
    pub num_literals: usize,
    pub verified: bool,
    pub gen_mode: GenMode,
    pub verify_mode: VerifyMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub gen_mode: GenMode,
    pub minimize: MinimizeOptions,
    /// Covers are checked when `dims <= verify_limit`; above it verification
    /// is skipped unless `force_verify` is set.
    pub verify_limit: u32,
    pub force_verify: bool,
    /// Seed for the sampled equivalence check on large instances.
    pub sample_seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            gen_mode: GenMode::ExactCount,
            minimize: MinimizeOptions::default(),
            verify_limit: 16,
            force_verify: false,
            sample_seed: 0,
        }
    }
}

pub fn sweep(dims: &[u32], densities: &[f64], repeats: usize, seed: u64) -> Vec<BenchRecord> {
    sweep_with(dims, densities, repeats, seed, &SweepOptions::default())
}

/// Runs `repeats` generate-and-minimize rounds per `(dims, density)` cell in
/// grid order. Instance seeds come from a splitmix64 chain keyed by `seed`,
/// so the whole instance stream is reproducible from the arguments.
///
/// Panics if a list is empty or a cell has an invalid dimension or density.
pub fn sweep_with(
    dims: &[u32],
    densities: &[f64],
    repeats: usize,
    seed: u64,
    options: &SweepOptions,
) -> Vec<BenchRecord> {
    assert!(!dims.is_empty(), "sweep needs at least one dimension");
    assert!(!densities.is_empty(), "sweep needs at least one density");
    let mut chain = seed;
    let mut records = Vec::with_capacity(dims.len() * densities.len() * repeats);
    for &n in dims {
        for &density in densities {
            for _ in 0..repeats {
                let instance_seed = split_mix(&mut chain);
                let spec = GenSpec::new(n, density, instance_seed, options.gen_mode)
                    .expect("sweep cell parameters must be valid");
                let f = generate(&spec);
                let started = Instant::now();
                let cover = minimize(&f, &options.minimize);
                let elapsed_seconds = started.elapsed().as_secs_f64();
                let (verified, verify_mode) = if n <= options.verify_limit || options.force_verify {
                    let report = equivalent(&f, &cover, options.sample_seed);
                    let mode = match report.mode {
                        CheckMode::Exhaustive => VerifyMode::Exhaustive,
                        CheckMode::Sampled { .. } => VerifyMode::Sampled,
                    };
                    (report.equivalent, mode)
                } else {
                    (false, VerifyMode::Skipped)
                };
                records.push(BenchRecord {
                    dims: n,
                    density,
                    seed: instance_seed,
                    elapsed_seconds,
                    num_implicants: cover.len(),
                    num_literals: cover.literal_count(),
                    verified,
                    gen_mode: options.gen_mode,
                    verify_mode,
                });
            }
        }
    }
    records
}

/// splitmix64 step; drives the per-instance seed chain.
fn split_mix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{:.6},{},{},{},{},{}\n",
            r.dims,
            r.density,
            r.seed,
            r.elapsed_seconds,
            r.num_implicants,
            r.num_literals,
            r.verified,
            r.gen_mode.label(),
            r.verify_mode.label(),
        ));
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("reduction percent is undefined when the original literal count is 0")]
    ZeroBaseline,
}

/// Percentage drop from `original_literals` to `minimized_literals`;
/// negative when the minimized form is larger.
pub fn reduction_percent(original_literals: u64, minimized_literals: u64) -> Result<f64, BenchError> {
    if original_literals == 0 {
        return Err(BenchError::ZeroBaseline);
    }
    let original = original_literals as f64;
    Ok(100.0 * (original - minimized_literals as f64) / original)
}

/// Folds several covers of the same space into one: cubes are unioned in
/// first-appearance order, exact duplicates dropped, and then a single pass
/// removes every cube whose two halves along one of its free positions are
/// both present in the deduplicated union.
///
/// A removed cube is exactly the union of those two halves, and a half is
/// only ever removed when its own halves are present, so the evaluated
/// function never changes. Panics if a cover has a different dimension.
pub fn consolidate_multi(covers: &[Cover], n: u32) -> Cover {
    let mut union: Vec<Cube> = Vec::new();
    let mut present: HashSet<(u32, u32)> = HashSet::new();
    for cover in covers {
        assert_eq!(cover.dimension(), n, "all covers must share one dimension");
        for &cube in cover.cubes() {
            if present.insert((cube.fixed_mask(), cube.fixed_values())) {
                union.push(cube);
            }
        }
    }
    let split_into_present_halves = |cube: &Cube| {
        (0..n).filter(|&pos| cube.free_mask() >> pos & 1 == 1).any(|pos| {
            let lo = cube.with_position_fixed(pos, false);
            let hi = cube.with_position_fixed(pos, true);
            present.contains(&(lo.fixed_mask(), lo.fixed_values()))
                && present.contains(&(hi.fixed_mask(), hi.fixed_values()))
        })
    };
    let kept: Vec<Cube> = union.iter().filter(|c| !split_into_present_halves(c)).copied().collect();
    Cover::from_cubes(n, kept).expect("kept cubes keep the input dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{space_size, Coordinate};

    #[test]
    fn reduction_matches_published_figures() {
        assert!((reduction_percent(2303, 142).unwrap() - 93.8341294).abs() < 1e-6);
        assert!((reduction_percent(5435, 6002).unwrap() - -10.4323827).abs() < 1e-6);
        assert_eq!(reduction_percent(17, 17).unwrap(), 0.0);
        assert_eq!(reduction_percent(0, 5), Err(BenchError::ZeroBaseline));
    }

    fn cover_of(n: u32, cubes: &[(u32, u32)]) -> Cover {
        Cover::from_cubes(
            n,
            cubes.iter().map(|&(m, v)| Cube::new(n, m, v).unwrap()).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn consolidation_deduplicates_identical_covers() {
        let c = cover_of(4, &[(0b1010, 0b0000), (0b1101, 0b0101)]);
        let merged = consolidate_multi(&[c.clone(), c.clone()], 4);
        assert_eq!(merged.cubes(), c.cubes());
    }

    #[test]
    fn consolidation_removes_a_cube_split_by_present_halves() {
        // A'C' splits into A'C'D' and A'C'D on the D position; both are
        // present, so the wide cube goes and the halves stay.
        let wide = cover_of(4, &[(0b1010, 0b0000)]);
        let halves = cover_of(4, &[(0b1011, 0b0000), (0b1011, 0b0001)]);
        let merged = consolidate_multi(&[wide, halves.clone()], 4);
        assert_eq!(merged.cubes(), halves.cubes());
    }

    #[test]
    fn consolidation_keeps_covers_without_decomposable_cubes() {
        let c = cover_of(3, &[(0b110, 0b010), (0b011, 0b001)]);
        let merged = consolidate_multi(&[c.clone()], 3);
        assert_eq!(merged.cubes(), c.cubes());
    }

    #[test]
    fn consolidation_preserves_the_union_function() {
        // Chain case: the universe splits into present halves, one of which
        // itself splits. Survivors must still cover everything.
        let n = 3;
        let covers = [
            cover_of(n, &[(0b000, 0b000)]),                   // universe
            cover_of(n, &[(0b100, 0b000), (0b100, 0b100)]),   // A', A
            cover_of(n, &[(0b110, 0b000), (0b110, 0b010)]),   // A'B', A'B
        ];
        let merged = consolidate_multi(&covers, n);
        for bits in 0..space_size(n) {
            let c = Coordinate::new(bits as u32);
            let before = covers.iter().any(|cv| cv.evaluate(c));
            assert_eq!(merged.evaluate(c), before, "coordinate {bits:b}");
        }
    }

    #[test]
    fn consolidation_preserves_minimizer_output_unions() {
        for seed in 0..6 {
            let n = 6;
            let spec = GenSpec::new(n, 0.4, seed, GenMode::ExactCount).unwrap();
            let f = generate(&spec);
            let deterministic = minimize(&f, &MinimizeOptions::default());
            let shuffled = minimize(
                &f,
                &MinimizeOptions { deterministic: false, seed: seed ^ 0xABCD, ..Default::default() },
            );
            let covers = [deterministic, shuffled];
            let merged = consolidate_multi(&covers, n);
            for bits in 0..space_size(n) {
                let c = Coordinate::new(bits as u32);
                let before = covers.iter().any(|cv| cv.evaluate(c));
                assert_eq!(merged.evaluate(c), before, "seed {seed}, coordinate {bits:b}");
            }
        }
    }

    #[test]
    fn sweep_produces_one_record_per_cell_and_repeat() {
        let records = sweep(&[4, 5, 6], &[0.1, 0.5], 2, 99);
        assert_eq!(records.len(), 12);
        let mut expected = Vec::new();
        for n in [4u32, 5, 6] {
            for d in [0.1f64, 0.5] {
                for _ in 0..2 {
                    expected.push((n, d));
                }
            }
        }
        let got: Vec<(u32, f64)> = records.iter().map(|r| (r.dims, r.density)).collect();
        assert_eq!(got, expected);
        for r in &records {
            assert!(r.elapsed_seconds >= 0.0);
            assert!(r.verified, "dims {} should verify exhaustively", r.dims);
            assert_eq!(r.verify_mode, VerifyMode::Exhaustive);
            assert_eq!(r.gen_mode, GenMode::ExactCount);
        }
    }

    #[test]
    fn sweep_with_zero_repeats_is_empty() {
        assert!(sweep(&[4], &[0.5], 0, 1).is_empty());
    }

    #[test]
    fn sweep_instance_stream_is_reproducible() {
        let a = sweep(&[5, 6], &[0.2], 3, 1234);
        let b = sweep(&[5, 6], &[0.2], 3, 1234);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.num_implicants, y.num_implicants);
            assert_eq!(x.num_literals, y.num_literals);
            assert_eq!(x.verified, y.verified);
        }
        let seeds: HashSet<u64> = a.iter().map(|r| r.seed).collect();
        assert_eq!(seeds.len(), a.len(), "repeats must draw distinct seeds");
        let other = sweep(&[5, 6], &[0.2], 3, 1235);
        assert_ne!(
            a.iter().map(|r| r.seed).collect::<Vec<_>>(),
            other.iter().map(|r| r.seed).collect::<Vec<_>>()
        );
    }

    #[test]
    fn verification_is_skipped_above_the_limit_unless_forced() {
        let options = SweepOptions { verify_limit: 4, ..Default::default() };
        let records = sweep_with(&[5], &[0.2], 1, 7, &options);
        assert!(!records[0].verified);
        assert_eq!(records[0].verify_mode, VerifyMode::Skipped);

        let forced = SweepOptions { verify_limit: 4, force_verify: true, ..Default::default() };
        let records = sweep_with(&[5], &[0.2], 1, 7, &forced);
        assert!(records[0].verified);
        assert_eq!(records[0].verify_mode, VerifyMode::Exhaustive);
    }

    #[test]
    fn forced_verification_samples_past_the_exhaustive_limit() {
        let options = SweepOptions { force_verify: true, ..Default::default() };
        let records = sweep_with(&[21], &[0.00001], 1, 11, &options);
        assert!(records[0].verified);
        assert_eq!(records[0].verify_mode, VerifyMode::Sampled);
    }

    #[test]
    fn csv_layout_is_stable() {
        let records = vec![BenchRecord {
            dims: 10,
            density: 0.1,
            seed: 42,
            elapsed_seconds: 0.001234567,
            num_implicants: 17,
            num_literals: 85,
            verified: true,
            gen_mode: GenMode::ExactCount,
            verify_mode: VerifyMode::Exhaustive,
        }];
        assert_eq!(
            to_csv(&records),
            "dims,density,seed,elapsed_seconds,num_implicants,num_literals,verified,gen_mode,verify_mode\n\
             10,0.1,42,0.001235,17,85,true,exact,exhaustive\n"
        );
        assert_eq!(to_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn records_carry_enough_to_recreate_the_run() {
        let records = sweep(&[5], &[0.3], 2, 31);
        for r in &records {
            let spec = GenSpec::new(r.dims, r.density, r.seed, r.gen_mode).unwrap();
            let cover = minimize(&generate(&spec), &MinimizeOptions::default());
            assert_eq!(r.num_implicants, cover.len());
            assert_eq!(r.num_literals, cover.literal_count());
        }
    }
}
