//! The flood-fill minimizer.
//!
//! One cube is grown per uncovered worklist element (the "anchor"). With `k`
//! starting at the anchor's ON-neighbor count, the search picks `k` of those
//! neighbor directions, derives the unique `2^k` subcube spanned by the anchor
//! and the picks, and flood fills it through ON adjacency. A fill aborts as
//! soon as it meets a cube-aligned element with fewer than `k` ON neighbors,
//! because a fully ON `2^k` cube gives each member at least `k` ON neighbors.
//! A completed fill is accepted only when it confirmed exactly `2^k` members,
//! which also proves every member is ON. Failed candidates fall through to the
//! next direction subset, and `k` drops once the per-level budget is spent;
//! `k = 0` always succeeds with the anchor's own minterm. Elements covered by
//! earlier cubes stay usable as fill material, so cubes may overlap.

use std::collections::{HashSet, VecDeque};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adjacency::AdjacencyIndex;
use crate::model::{full_mask, Coordinate, Cover, Cube, CubeOrigin, TruthFunction};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizeOptions {
    /// Direction subsets tried per (anchor, k) before k is decremented.
    /// The default is effectively unlimited, which makes emitted cubes prime.
    pub subset_budget: usize,
    /// Keep the canonical subset order. When false, subsets are reordered by
    /// a seeded shuffle; results stay reproducible for a fixed seed.
    pub deterministic: bool,
    /// Seed for the shuffled order; ignored in deterministic mode.
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { subset_budget: usize::MAX, deterministic: true, seed: 0 }
    }
}

/// Outcome of one flood fill over a candidate cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FloodResult {
    /// Every ON member of the cube reachable from the seeds through in-cube
    /// adjacency, in ascending order.
    Complete(Vec<Coordinate>),
    /// Some cube-aligned ON element had fewer than `k` ON neighbors, so the
    /// cube cannot be fully ON.
    Aborted,
}

/// The cube spanned by `anchor` and the given free bit positions: every other
/// position is fixed to the anchor's bit.
pub fn candidate_cube(anchor: Coordinate, free_positions: u32, n: u32) -> Cube {
    debug_assert!(anchor.in_range(n) && free_positions & !full_mask(n) == 0);
    let fixed_mask = full_mask(n) & !free_positions;
    Cube::new(n, fixed_mask, anchor.bits() & fixed_mask).expect("masks stay within dimension")
}

/// Breadth-first fill of `candidate` through ON adjacency, starting from
/// `seeds` (which must be ON members of the cube). ON elements outside the
/// cube are dropped when dequeued; they do not propagate the fill.
pub fn flood_fill(
    candidate: &Cube,
    seeds: &[Coordinate],
    index: &AdjacencyIndex,
    k: u32,
) -> FloodResult {
    let mut seen: HashSet<Coordinate> = HashSet::new();
    let mut frontier: VecDeque<Coordinate> = VecDeque::new();
    for &s in seeds {
        debug_assert!(candidate.contains(s), "seeds must lie in the candidate cube");
        if seen.insert(s) {
            frontier.push_back(s);
        }
    }
    let mut confirmed: Vec<Coordinate> = Vec::new();
    while let Some(c) = frontier.pop_front() {
        if !candidate.contains(c) {
            continue;
        }
        let ne = index.on_neighbors(c).expect("fill only visits ON elements");
        if (ne.len() as u32) < k {
            return FloodResult::Aborted;
        }
        confirmed.push(c);
        for &b in ne {
            if seen.insert(b) {
                frontier.push_back(b);
            }
        }
    }
    confirmed.sort_unstable();
    FloodResult::Complete(confirmed)
}

/// Accepts a fill exactly when it confirmed a full `2^k` cube. Anything less
/// means an OFF member or an unreachable corner.
pub fn validate(confirmed: &[Coordinate], k: u32) -> bool {
    confirmed.len() as u64 == 1u64 << k
}

/// Covers the function's ON-set with overlapping cubes, one per anchor, and
/// records each cube's anchor and emission-time `k`.
pub fn minimize(f: &TruthFunction, options: &MinimizeOptions) -> Cover {
    let index = AdjacencyIndex::build(f);
    let budget = options.subset_budget.max(1);
    let mut rng =
        if options.deterministic { None } else { Some(ChaCha8Rng::seed_from_u64(options.seed)) };
    let mut covered: HashSet<Coordinate> = HashSet::with_capacity(f.on_count());
    let mut cover = Cover::empty(f.dimension());
    for &anchor in index.worklist() {
        if covered.contains(&anchor) {
            continue;
        }
        let (cube, k, members) = grow_cube(&index, anchor, &covered, budget, rng.as_mut());
        covered.extend(members);
        cover
            .push_with_origin(cube, CubeOrigin { anchor, k })
            .expect("grown cubes share the cover's dimension");
    }
    cover
}

/// Finds the largest validating cube for one anchor. Never fails: the search
/// bottoms out at the anchor's minterm.
fn grow_cube(
    index: &AdjacencyIndex,
    anchor: Coordinate,
    covered: &HashSet<Coordinate>,
    budget: usize,
    mut rng: Option<&mut ChaCha8Rng>,
) -> (Cube, u32, Vec<Coordinate>) {
    let n = index.dimension();
    let flips: Vec<u32> = index
        .on_neighbors(anchor)
        .expect("anchors come from the worklist")
        .iter()
        .map(|&b| (b.bits() ^ anchor.bits()).trailing_zeros())
        .collect();
    let max_k = flips.len() as u32;
    for k in (0..=max_k).rev() {
        // Directions whose neighbor is still uncovered come first, each group
        // in variable order; the first subset is then the greediest pick.
        let mut ordered = flips.clone();
        ordered.sort_by_key(|&p| (covered.contains(&anchor.flip_bit(p)), n - 1 - p));
        if let Some(rng) = rng.as_deref_mut() {
            let split = ordered
                .iter()
                .position(|&p| covered.contains(&anchor.flip_bit(p)))
                .unwrap_or(ordered.len());
            ordered[..split].shuffle(rng);
            ordered[split..].shuffle(rng);
        }
        let mut tried = 0usize;
        for combo in ordered.iter().copied().combinations(k as usize) {
            if tried == budget {
                break;
            }
            tried += 1;
            let free_positions = combo.iter().fold(0u32, |m, &p| m | 1 << p);
            let cube = candidate_cube(anchor, free_positions, n);
            let mut seeds = Vec::with_capacity(combo.len() + 1);
            seeds.push(anchor);
            seeds.extend(combo.iter().map(|&p| anchor.flip_bit(p)));
            if let FloodResult::Complete(confirmed) = flood_fill(&cube, &seeds, index, k) {
                if validate(&confirmed, k) {
                    return (cube, k, confirmed);
                }
            }
        }
    }
    unreachable!("k = 0 always validates with the anchor's minterm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::space_size;

    fn table1() -> TruthFunction {
        TruthFunction::from_indices(4, [0b0000, 0b0001, 0b0100, 0b0101, 0b0111]).unwrap()
    }

    fn assert_cover_matches(f: &TruthFunction, cover: &Cover) {
        for bits in 0..space_size(f.dimension()) as u32 {
            let c = Coordinate::new(bits);
            assert_eq!(cover.evaluate(c), f.contains(c), "row {bits:b}");
        }
    }

    #[test]
    fn candidate_cubes_fix_the_anchor_bits() {
        // Free B and D around 0000: the A'C' cube.
        let cube = candidate_cube(Coordinate::new(0b0000), 0b0101, 4);
        assert_eq!(cube, Cube::new(4, 0b1010, 0b0000).unwrap());
        // Free C around 0111: the A'BD cube.
        let cube = candidate_cube(Coordinate::new(0b0111), 0b0010, 4);
        assert_eq!(cube, Cube::new(4, 0b1101, 0b0101).unwrap());
        // No free positions: the anchor's own minterm.
        let cube = candidate_cube(Coordinate::new(0b10), 0, 2);
        assert_eq!(cube, Cube::minterm(2, Coordinate::new(0b10)));
    }

    #[test]
    fn flood_fill_completes_a_full_subcube() {
        let idx = AdjacencyIndex::build(&table1());
        let cube = Cube::new(4, 0b1010, 0b0000).unwrap();
        let seeds = [0b0000, 0b0001, 0b0100].map(Coordinate::new);
        let got = flood_fill(&cube, &seeds, &idx, 2);
        let want: Vec<Coordinate> = [0b0000, 0b0001, 0b0100, 0b0101].map(Coordinate::new).to_vec();
        assert_eq!(got, FloodResult::Complete(want.clone()));
        assert!(validate(&want, 2));
    }

    #[test]
    fn flood_fill_aborts_on_a_thin_element() {
        // The half-space A' asks for k = 3, but 0000 has only two ON neighbors.
        let idx = AdjacencyIndex::build(&table1());
        let cube = Cube::new(4, 0b1000, 0b0000).unwrap();
        let seeds = [0b0000, 0b0001, 0b0100, 0b0101].map(Coordinate::new);
        assert_eq!(flood_fill(&cube, &seeds, &idx, 3), FloodResult::Aborted);
    }

    #[test]
    fn validation_requires_exactly_two_to_the_k() {
        let cs: Vec<Coordinate> = (0..5).map(Coordinate::new).collect();
        assert!(validate(&cs[..4], 2));
        assert!(!validate(&cs[..5], 3));
        assert!(!validate(&cs[..3], 2));
        assert!(validate(&cs[..1], 0));
    }

    #[test]
    fn worked_example_minimizes_to_two_cubes() {
        let f = table1();
        let cover = minimize(&f, &MinimizeOptions::default());
        assert_eq!(cover.len(), 2);
        assert_eq!(cover.literal_count(), 5);
        assert_cover_matches(&f, &cover);
        // Deterministic run: the nb = 1 element 0111 anchors A'BD first, then
        // 0000 anchors A'C'.
        assert_eq!(cover.cubes()[0], Cube::new(4, 0b1101, 0b0101).unwrap());
        assert_eq!(cover.cubes()[1], Cube::new(4, 0b1010, 0b0000).unwrap());
        let origins: Vec<CubeOrigin> = cover.origins().iter().map(|o| o.unwrap()).collect();
        assert_eq!(origins[0], CubeOrigin { anchor: Coordinate::new(0b0111), k: 1 });
        assert_eq!(origins[1], CubeOrigin { anchor: Coordinate::new(0b0000), k: 2 });
    }

    #[test]
    fn xor_pair_stays_two_minterms() {
        let f = TruthFunction::from_indices(2, [0b01, 0b10]).unwrap();
        let cover = minimize(&f, &MinimizeOptions::default());
        assert_eq!(cover.len(), 2);
        assert_eq!(cover.literal_count(), 4);
        assert_cover_matches(&f, &cover);
    }

    #[test]
    fn constant_one_collapses_to_the_universe_cube() {
        let f = TruthFunction::constant_one(3).unwrap();
        let cover = minimize(&f, &MinimizeOptions::default());
        assert_eq!(cover.cubes(), &[Cube::universe(3)]);
        assert_eq!(cover.literal_count(), 0);
    }

    #[test]
    fn constant_zero_yields_an_empty_cover() {
        let f = TruthFunction::constant_zero(5).unwrap();
        let cover = minimize(&f, &MinimizeOptions::default());
        assert!(cover.is_empty());
    }

    #[test]
    fn tight_budget_still_covers_the_function() {
        let f = TruthFunction::from_indices(4, [0, 1, 2, 3, 5, 7, 8, 10, 15]).unwrap();
        let opts = MinimizeOptions { subset_budget: 1, ..MinimizeOptions::default() };
        assert_cover_matches(&f, &minimize(&f, &opts));
    }

    #[test]
    fn shuffled_order_is_reproducible_and_correct() {
        let f = TruthFunction::from_indices(5, [0, 1, 3, 2, 8, 9, 11, 10, 16, 21, 31]).unwrap();
        let opts = MinimizeOptions { deterministic: false, seed: 11, ..MinimizeOptions::default() };
        let a = minimize(&f, &opts);
        let b = minimize(&f, &opts);
        assert_eq!(a.cubes(), b.cubes());
        assert_cover_matches(&f, &a);
        let other = MinimizeOptions { deterministic: false, seed: 12, ..opts };
        assert_cover_matches(&f, &minimize(&f, &other));
    }

    #[test]
    fn anchors_were_uncovered_at_emission_time() {
        let f = TruthFunction::from_indices(4, [0, 1, 4, 5, 7, 13, 15]).unwrap();
        let cover = minimize(&f, &MinimizeOptions::default());
        let mut covered: HashSet<Coordinate> = HashSet::new();
        for (cube, origin) in cover.cubes().iter().zip(cover.origins()) {
            let origin = origin.expect("minimize records an origin per cube");
            assert!(!covered.contains(&origin.anchor));
            assert!(cube.contains(origin.anchor));
            assert_eq!(origin.k, cube.free_count());
            covered.extend(cube.members());
        }
    }
}
