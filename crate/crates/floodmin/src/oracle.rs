//! Exact reference algorithms: Quine-McCluskey prime generation, an exact
//! minimum-cover search over those primes, and equivalence checking.
//!
//! The minimum cover is exact for the pinned objective: fewest cubes first,
//! fewest total literals as the tie break. Both searches carry hard dimension
//! bounds; callers that need bigger spaces get an error, not a long night.

use std::cell::{Cell, RefCell};
use std::cmp::Reverse;
use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{full_mask, space_size, Coordinate, Cover, Cube, TruthFunction};

/// Prime generation bound.
pub const MAX_PRIME_DIMENSION: u32 = 12;
/// Exact cover search bound; the search is exponential in the worst case.
pub const MAX_COVER_DIMENSION: u32 = 10;
/// Equivalence checks walk the whole space up to this dimension.
pub const EXHAUSTIVE_CHECK_DIMENSION: u32 = 20;
/// OFF points sampled per equivalence check beyond the exhaustive range.
pub const MIN_OFF_SAMPLES: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle limit exceeded: dimension {n} is above the bound {bound}")]
    LimitExceeded { n: u32, bound: u32 },
}

/// All prime implicants of a function, in canonical (mask, values) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    n: u32,
    primes: Vec<Cube>,
}

impl PrimeSet {
    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn primes(&self) -> &[Cube] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Quine-McCluskey merging: level `l` holds all implicants with `l` free
/// bits; two cubes merge when they share a mask and differ in one fixed bit.
/// Cubes that never merge are prime.
pub fn qm_primes(f: &TruthFunction) -> Result<PrimeSet, OracleError> {
    let n = f.dimension();
    if n > MAX_PRIME_DIMENSION {
        return Err(OracleError::LimitExceeded { n, bound: MAX_PRIME_DIMENSION });
    }
    let full = full_mask(n);
    let mut current: HashSet<(u32, u32)> =
        f.on_set().iter().map(|c| (full, c.bits())).collect();
    let mut primes: Vec<Cube> = Vec::new();
    while !current.is_empty() {
        let mut buckets: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for &(mask, values) in &current {
            buckets.entry((mask, values.count_ones())).or_default().push(values);
        }
        let mut merged: HashSet<(u32, u32)> = HashSet::new();
        let mut next: HashSet<(u32, u32)> = HashSet::new();
        for (&(mask, ones), values) in &buckets {
            let Some(upper) = buckets.get(&(mask, ones + 1)) else { continue };
            for &a in values {
                for &b in upper {
                    let diff = a ^ b;
                    if diff.count_ones() == 1 {
                        merged.insert((mask, a));
                        merged.insert((mask, b));
                        let wider = mask & !diff;
                        next.insert((wider, a & wider));
                    }
                }
            }
        }
        for &(mask, values) in &current {
            if !merged.contains(&(mask, values)) {
                primes.push(Cube::new(n, mask, values).expect("merge keeps masks in range"));
            }
        }
        current = next;
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(PrimeSet { n, primes })
}

/// Exact minimum cover: branch and bound over the prime implicants, with
/// essential and dominance reductions re-run at every search node. Cost is
/// scalarized as `count * BIG + literals` with `BIG` larger than any literal
/// total, so the scalar optimum is exactly the lexicographic one.
pub fn qm_minimum_cover(f: &TruthFunction) -> Result<Cover, OracleError> {
    let cover = qm_minimum_cover_bounded(f, u64::MAX)?;
    Ok(cover.expect("an uncapped search always completes"))
}

/// Same search as [`qm_minimum_cover`] under a deterministic effort cap,
/// counted in branch-and-bound nodes rather than wall time so the cutoff
/// is reproducible across machines. Returns `Ok(None)` when the cap fired
/// before the search finished; an unfinished search proves nothing about
/// the optimum, so no partial cover is returned. Dense instances near
/// `n = 10` can exceed any practical cap; sparse ones finish in well under
/// a million nodes.
pub fn qm_minimum_cover_bounded(
    f: &TruthFunction,
    max_nodes: u64,
) -> Result<Option<Cover>, OracleError> {
    let n = f.dimension();
    if n > MAX_COVER_DIMENSION {
        return Err(OracleError::LimitExceeded { n, bound: MAX_COVER_DIMENSION });
    }
    if f.is_empty() {
        return Ok(Some(Cover::empty(n)));
    }
    let primes = qm_primes(f)?;
    let mut selected = match CoverSearch::solve_capped(f, primes.primes(), max_nodes) {
        Some(cubes) => cubes,
        None => return Ok(None),
    };
    selected.sort_unstable();
    Ok(Some(Cover::from_cubes(n, selected).expect("primes share the function's dimension")))
}

/// How an equivalence verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Sampled { off_samples: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    pub counterexample: Option<Coordinate>,
    pub mode: CheckMode,
}

/// Checks `cover` against `f`: exhaustively through dimension
/// `EXHAUSTIVE_CHECK_DIMENSION`, otherwise every ON member plus at least
/// `MIN_OFF_SAMPLES` seeded OFF samples. The sampled mode can miss OFF-side
/// errors; the report says which mode ran.
pub fn equivalent(f: &TruthFunction, cover: &Cover, sample_seed: u64) -> EquivalenceReport {
    assert_eq!(f.dimension(), cover.dimension(), "function and cover dimensions must match");
    let n = f.dimension();
    if n <= EXHAUSTIVE_CHECK_DIMENSION {
        for bits in 0..space_size(n) {
            let c = Coordinate::new(bits as u32);
            if cover.evaluate(c) != f.contains(c) {
                return EquivalenceReport {
                    equivalent: false,
                    counterexample: Some(c),
                    mode: CheckMode::Exhaustive,
                };
            }
        }
        return EquivalenceReport { equivalent: true, counterexample: None, mode: CheckMode::Exhaustive };
    }
    let mut sampled = 0u64;
    for &c in f.on_set() {
        if !cover.evaluate(c) {
            return EquivalenceReport {
                equivalent: false,
                counterexample: Some(c),
                mode: CheckMode::Sampled { off_samples: sampled },
            };
        }
    }
    if f.on_count() as u64 != space_size(n) {
        let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
        while sampled < MIN_OFF_SAMPLES {
            let c = Coordinate::new(rng.gen_range(0..space_size(n)) as u32);
            if f.contains(c) {
                continue;
            }
            sampled += 1;
            if cover.evaluate(c) {
                return EquivalenceReport {
                    equivalent: false,
                    counterexample: Some(c),
                    mode: CheckMode::Sampled { off_samples: sampled },
                };
            }
        }
    }
    EquivalenceReport {
        equivalent: true,
        counterexample: None,
        mode: CheckMode::Sampled { off_samples: sampled },
    }
}

// ---------------------------------------------------------------------------
// Minimum-cover search internals. Rows are ON coordinates, columns primes.

/// Cache entries kept per solve; bounds memory on the hardest instances.
const CACHE_CAP: usize = 1 << 20;

type RowSet = Vec<u64>;

fn any_bit(set: &RowSet) -> bool {
    set.iter().any(|&w| w != 0)
}

fn count_and(a: &RowSet, b: &RowSet) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn is_subset_and(sub: &RowSet, filter: &RowSet, sup: &RowSet) -> bool {
    sub.iter().zip(filter).zip(sup).all(|((s, f), p)| s & f & !p == 0)
}

/// Mutable state of one branch-and-bound node. Cloned when the search takes
/// the include branch; the exclude branch reuses the node in place.
#[derive(Clone)]
struct Node {
    /// Rows still needing coverage.
    remaining: RowSet,
    /// Primes still selectable.
    active: Vec<bool>,
    /// Primes committed on the path here, essentials included.
    chosen: Vec<u32>,
    cost: u64,
}

/// Path-independent fact about one (remaining, active) subproblem.
#[derive(Clone, Copy)]
enum Cached {
    /// The exact minimum completion cost.
    Exactly(u64),
    /// No completion costs less than this.
    AtLeast(u64),
}

struct CoverSearch<'a> {
    primes: &'a [Cube],
    words: usize,
    /// Rows covered by each prime, as a bitset over the ON-set.
    prime_mask: Vec<RowSet>,
    /// Primes covering each row, ascending.
    row_primes: Vec<Vec<u32>>,
    /// Scalarized cube cost: BIG + literal count.
    cost: Vec<u64>,
    /// Row scan order for bounding, by ascending root choice count.
    row_order: Vec<u32>,
    /// Completion-cost facts keyed by (remaining, active), shared across
    /// branches that reach the same subproblem by different include orders.
    cache: RefCell<HashMap<Vec<u64>, Cached>>,
    /// Search nodes visited so far; one node is one reduce-and-bound pass.
    nodes: Cell<u64>,
    node_cap: Cell<u64>,
    /// Set once the cap fires. Everything unwinds quickly afterwards and the
    /// whole result is discarded; cache facts written past this point may be
    /// wrong, which is safe only because the cache dies with the search.
    aborted: Cell<bool>,
}

impl<'a> CoverSearch<'a> {
    fn solve_capped(f: &TruthFunction, primes: &'a [Cube], node_cap: u64) -> Option<Vec<Cube>> {
        let (search, root) = Self::build(f, primes);
        search.node_cap.set(node_cap);
        let (greedy_cost, greedy_picks) = search.greedy_cover(&root);
        let picks = match search.solve_bounded(root, greedy_cost, 0) {
            Some((_, picks)) => picks,
            None => greedy_picks,
        };
        if search.aborted.get() {
            return None;
        }
        Some(picks.iter().map(|&p| primes[p as usize]).collect())
    }

    fn build(f: &TruthFunction, primes: &'a [Cube]) -> (CoverSearch<'a>, Node) {
        let rows = f.on_set();
        let row_index: HashMap<Coordinate, u32> =
            rows.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        let words = rows.len().div_ceil(64);
        let big = u64::from(f.dimension()) * space_size(f.dimension()) + 1;

        let mut prime_mask: Vec<RowSet> = vec![vec![0u64; words]; primes.len()];
        let mut row_primes: Vec<Vec<u32>> = vec![Vec::new(); rows.len()];
        for (p, cube) in primes.iter().enumerate() {
            for member in cube.members() {
                let r = row_index[&member] as usize;
                prime_mask[p][r / 64] |= 1 << (r % 64);
                row_primes[r].push(p as u32);
            }
        }
        let cost: Vec<u64> =
            primes.iter().map(|cube| big + u64::from(cube.fixed_count())).collect();

        let mut remaining: RowSet = vec![0u64; words];
        for r in 0..rows.len() {
            remaining[r / 64] |= 1 << (r % 64);
        }
        let mut row_order: Vec<u32> = (0..rows.len() as u32).collect();
        row_order.sort_by_key(|&r| row_primes[r as usize].len());

        let search = CoverSearch {
            primes,
            words,
            prime_mask,
            row_primes,
            cost,
            row_order,
            cache: RefCell::new(HashMap::new()),
            nodes: Cell::new(0),
            node_cap: Cell::new(u64::MAX),
            aborted: Cell::new(false),
        };
        let root = Node {
            remaining,
            active: vec![true; primes.len()],
            chosen: Vec::new(),
            cost: 0,
        };
        (search, root)
    }

    /// Subproblem identity: the remaining rows then the active primes, both
    /// as bit words. Path costs and chosen lists are deliberately excluded.
    fn state_key(&self, node: &Node) -> Vec<u64> {
        let mut key = Vec::with_capacity(self.words + node.active.len().div_ceil(64));
        key.extend_from_slice(&node.remaining);
        let mut word = 0u64;
        for (i, &a) in node.active.iter().enumerate() {
            if a {
                word |= 1 << (i % 64);
            }
            if i % 64 == 63 {
                key.push(word);
                word = 0;
            }
        }
        if node.active.len() % 64 != 0 {
            key.push(word);
        }
        key
    }

    /// Greedy cover used as the initial upper bound: most new rows first,
    /// cheaper and lower-numbered primes on ties.
    fn greedy_cover(&self, root: &Node) -> (u64, Vec<u32>) {
        let mut left = root.remaining.clone();
        let mut picks: Vec<u32> = Vec::new();
        let mut total = 0u64;
        while any_bit(&left) {
            let mut best_pick: Option<(u32, u64, u32)> = None;
            for r in 0..self.row_primes.len() {
                if left[r / 64] >> (r % 64) & 1 == 0 {
                    continue;
                }
                for &p in &self.row_primes[r] {
                    let gain = count_and(&self.prime_mask[p as usize], &left);
                    let better = match best_pick {
                        None => true,
                        Some((g, c, i)) => {
                            (Reverse(gain), self.cost[p as usize], p) < (Reverse(g), c, i)
                        }
                    };
                    if better {
                        best_pick = Some((gain, self.cost[p as usize], p));
                    }
                }
            }
            let (_, cost, p) = best_pick.expect("every row is covered by some prime");
            for w in 0..self.words {
                left[w] &= !self.prime_mask[p as usize][w];
            }
            picks.push(p);
            total += cost;
        }
        (total, picks)
    }

    fn live(remaining: &RowSet, r: usize) -> bool {
        remaining[r / 64] >> (r % 64) & 1 == 1
    }

    /// Returns the cheapest completion of `node` with total cost strictly
    /// under `budget`, or None when no such completion exists. `floor` is an
    /// inherited lower bound on any completion's cost beyond the entry cost;
    /// it stays valid through exclusions (they shrink the completion set)
    /// and shifts down by whatever the reductions force into `node.cost`.
    /// The exclude branch iterates in place instead of recursing, so stack
    /// depth tracks the number of included cubes, not the number of pruned
    /// primes.
    fn solve_bounded(
        &self,
        mut node: Node,
        mut budget: u64,
        mut floor: u64,
    ) -> Option<(u64, Vec<u32>)> {
        let mut best: Option<(u64, Vec<u32>)> = None;
        loop {
            if self.aborted.get() {
                return best;
            }
            self.nodes.set(self.nodes.get() + 1);
            if self.nodes.get() > self.node_cap.get() {
                self.aborted.set(true);
                return best;
            }
            let cost_before = node.cost;
            if !self.reduce(&mut node) {
                return best;
            }
            floor = floor.saturating_sub(node.cost - cost_before);
            if !any_bit(&node.remaining) {
                if node.cost < budget {
                    return Some((node.cost, node.chosen));
                }
                return best;
            }
            let (dual, charges) = self.dual_bound(&node);
            let bound = dual.max(floor);
            if node.cost + bound >= budget {
                return best;
            }
            floor = bound;

            // Reduced-cost fixing: a completion through prime p costs at
            // least node.cost + dual + (cost[p] - charges on p's rows),
            // because dropping p's rows lowers the dual bound by at most
            // their charges. Primes that cannot beat the budget are dropped,
            // which often cascades fresh essentials and dominances.
            let mut fixed_any = false;
            for p in 0..node.active.len() {
                if !node.active[p] {
                    continue;
                }
                let charged = self.charges_on(p, &node.remaining, &charges);
                debug_assert!(charged <= self.cost[p]);
                if node.cost + dual + (self.cost[p] - charged) >= budget {
                    node.active[p] = false;
                    fixed_any = true;
                }
            }
            if fixed_any {
                continue;
            }

            // Disconnected sub-problems are independent; their optima add up.
            let comps = self.components(&node);
            if comps.len() > 1 {
                match self.solve_components(&node, comps, budget) {
                    Some(sol) => return Some(sol),
                    None => return best,
                }
            }

            // Branch on the hardest row: fewest live choices, scan-order ties.
            let mut branch_row = usize::MAX;
            let mut fewest = usize::MAX;
            for &r in &self.row_order {
                let r = r as usize;
                if !Self::live(&node.remaining, r) {
                    continue;
                }
                let live = self.row_primes[r]
                    .iter()
                    .filter(|&&p| node.active[p as usize])
                    .count();
                if live < fewest {
                    fewest = live;
                    branch_row = r;
                }
            }
            // The reduced node has no essential rows, so every live row
            // keeps at least two choices.
            debug_assert!(fewest >= 2);
            let p = self.row_primes[branch_row]
                .iter()
                .copied()
                .filter(|&p| node.active[p as usize])
                .min_by_key(|&p| {
                    (
                        Reverse(count_and(&self.prime_mask[p as usize], &node.remaining)),
                        self.cost[p as usize],
                        p,
                    )
                })
                .expect("live rows have live choices") as usize;

            let mut take = node.clone();
            take.chosen.push(p as u32);
            take.cost += self.cost[p];
            take.active[p] = false;
            for w in 0..self.words {
                take.remaining[w] &= !self.prime_mask[p][w];
            }
            // Rows of p keep their other charges out of the child's floor.
            let child_floor = dual - self.charges_on(p, &node.remaining, &charges);
            let take_cost = take.cost;
            let key = self.state_key(&take);
            let known = self.cache.borrow().get(&key).copied();
            let (recurse, child_floor, child_budget) = match known {
                Some(Cached::Exactly(c)) => {
                    // The child's optimum is known; chase its picks with a
                    // budget that admits exactly that completion.
                    (take_cost + c < budget, child_floor.max(c), (take_cost + c).saturating_add(1))
                }
                Some(Cached::AtLeast(l)) => (take_cost + l < budget, child_floor.max(l), budget),
                None => (true, child_floor, budget),
            };
            if recurse {
                match self.solve_bounded(take, child_budget.min(budget), child_floor) {
                    Some(sol) => {
                        self.cache_store(key, Cached::Exactly(sol.0 - take_cost));
                        budget = sol.0;
                        best = Some(sol);
                    }
                    None => {
                        self.cache_store(
                            key,
                            Cached::AtLeast(child_budget.min(budget) - take_cost),
                        );
                    }
                }
            }

            // Loop around with the prime excluded.
            node.active[p] = false;
        }
    }

    /// Records a subproblem fact, never weakening what is already known.
    fn cache_store(&self, key: Vec<u64>, fact: Cached) {
        let mut cache = self.cache.borrow_mut();
        match cache.get_mut(&key) {
            Some(existing) => match (*existing, fact) {
                (Cached::Exactly(_), _) => {}
                (Cached::AtLeast(_), Cached::Exactly(c)) => *existing = Cached::Exactly(c),
                (Cached::AtLeast(old), Cached::AtLeast(new)) => {
                    if new > old {
                        *existing = Cached::AtLeast(new);
                    }
                }
            },
            None => {
                if cache.len() < CACHE_CAP {
                    cache.insert(key, fact);
                }
            }
        }
    }

    /// Total dual charge sitting on the given prime's still-remaining rows.
    fn charges_on(&self, p: usize, remaining: &RowSet, charges: &[u64]) -> u64 {
        let mut total = 0u64;
        for w in 0..self.words {
            let mut bits = self.prime_mask[p][w] & remaining[w];
            while bits != 0 {
                total += charges[w * 64 + bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
        }
        total
    }

    /// Live rows grouped into connected components of the row-prime graph.
    fn components(&self, node: &Node) -> Vec<RowSet> {
        let mut seen: RowSet = vec![0u64; self.words];
        let mut prime_seen = vec![false; self.primes.len()];
        let mut comps: Vec<RowSet> = Vec::new();
        for start in 0..self.row_primes.len() {
            if !Self::live(&node.remaining, start) || seen[start / 64] >> (start % 64) & 1 == 1 {
                continue;
            }
            let mut comp: RowSet = vec![0u64; self.words];
            let mut queue = vec![start];
            seen[start / 64] |= 1 << (start % 64);
            comp[start / 64] |= 1 << (start % 64);
            while let Some(r) = queue.pop() {
                for &p in &self.row_primes[r] {
                    let p = p as usize;
                    if !node.active[p] || prime_seen[p] {
                        continue;
                    }
                    prime_seen[p] = true;
                    for w in 0..self.words {
                        let mut fresh = self.prime_mask[p][w] & node.remaining[w] & !seen[w];
                        seen[w] |= fresh;
                        comp[w] |= fresh;
                        while fresh != 0 {
                            queue.push(w * 64 + fresh.trailing_zeros() as usize);
                            fresh &= fresh - 1;
                        }
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Solves each component to optimality, sharing the budget: a component
    /// may spend at most the slack the other components' lower bounds leave.
    fn solve_components(
        &self,
        node: &Node,
        comps: Vec<RowSet>,
        budget: u64,
    ) -> Option<(u64, Vec<u32>)> {
        let mut sub_nodes: Vec<Node> = comps
            .iter()
            .map(|rows| {
                let active: Vec<bool> = (0..self.primes.len())
                    .map(|p| node.active[p] && count_and(&self.prime_mask[p], rows) > 0)
                    .collect();
                Node { remaining: rows.clone(), active, chosen: Vec::new(), cost: 0 }
            })
            .collect();
        let bounds: Vec<u64> = sub_nodes.iter().map(|sn| self.lower_bound(sn)).collect();
        let mut rest: u64 = bounds.iter().sum();
        let mut total = node.cost;
        let mut picks = node.chosen.clone();
        for (i, sub) in sub_nodes.drain(..).enumerate() {
            rest -= bounds[i];
            let sub_budget = budget.checked_sub(total + rest).unwrap_or(0);
            if sub_budget == 0 {
                return None;
            }
            let (cost, sub_picks) = self.solve_bounded(sub, sub_budget, bounds[i])?;
            total += cost;
            picks.extend(sub_picks);
        }
        Some((total, picks))
    }

    /// Essential-prime selection plus row and column dominance, iterated
    /// until nothing changes. Every elimination keeps at least one scalar
    /// optimum reachable. Returns false when some row has no choices left,
    /// which only happens below an exclude branch.
    fn reduce(&self, node: &mut Node) -> bool {
        loop {
            let mut changed = false;

            // Essential: a row with a single surviving choice forces it.
            for r in 0..self.row_primes.len() {
                if !Self::live(&node.remaining, r) {
                    continue;
                }
                let mut only = None;
                let mut count = 0;
                for &p in &self.row_primes[r] {
                    if node.active[p as usize] {
                        count += 1;
                        only = Some(p);
                        if count > 1 {
                            break;
                        }
                    }
                }
                if count == 0 {
                    return false;
                }
                if count == 1 {
                    let p = only.unwrap() as usize;
                    node.chosen.push(p as u32);
                    node.cost += self.cost[p];
                    node.active[p] = false;
                    for w in 0..self.words {
                        node.remaining[w] &= !self.prime_mask[p][w];
                    }
                    changed = true;
                }
            }

            // Column dominance: drop a prime whose live coverage fits inside
            // a no-more-expensive rival's.
            for p1 in 0..self.prime_mask.len() {
                if !node.active[p1] {
                    continue;
                }
                let cov1: RowSet = self.prime_mask[p1]
                    .iter()
                    .zip(node.remaining.iter())
                    .map(|(a, b)| a & b)
                    .collect();
                if !any_bit(&cov1) {
                    node.active[p1] = false;
                    changed = true;
                    continue;
                }
                let first_row = (0..self.row_primes.len())
                    .find(|&r| cov1[r / 64] >> (r % 64) & 1 == 1)
                    .expect("nonempty coverage");
                let cov1_count = cov1.iter().map(|w| w.count_ones()).sum::<u32>();
                for &p2 in &self.row_primes[first_row] {
                    let p2 = p2 as usize;
                    if p2 == p1 || !node.active[p2] {
                        continue;
                    }
                    if !is_subset_and(&cov1, &node.remaining, &self.prime_mask[p2]) {
                        continue;
                    }
                    let cov2_count = count_and(&self.prime_mask[p2], &node.remaining);
                    let dominates = self.cost[p2] < self.cost[p1]
                        || (self.cost[p2] == self.cost[p1]
                            && (cov2_count > cov1_count || p2 < p1));
                    if dominates {
                        node.active[p1] = false;
                        changed = true;
                        break;
                    }
                }
            }

            // Row dominance: a row whose choice set contains another row's
            // choice set is covered for free once the tighter row is handled.
            for r2 in 0..self.row_primes.len() {
                if !Self::live(&node.remaining, r2) {
                    continue;
                }
                let live2: Vec<u32> = self.row_primes[r2]
                    .iter()
                    .copied()
                    .filter(|&p| node.active[p as usize])
                    .collect();
                'outer: for &p in &live2 {
                    for w in 0..self.words {
                        let mut bits = self.prime_mask[p as usize][w] & node.remaining[w];
                        while bits != 0 {
                            let r1 = w * 64 + bits.trailing_zeros() as usize;
                            bits &= bits - 1;
                            if r1 == r2 {
                                continue;
                            }
                            let live1_subset = self.row_primes[r1]
                                .iter()
                                .filter(|&&q| node.active[q as usize])
                                .all(|q| live2.contains(q));
                            let live1_len = self.row_primes[r1]
                                .iter()
                                .filter(|&&q| node.active[q as usize])
                                .count();
                            if live1_subset && (live1_len < live2.len() || r1 < r2) {
                                node.remaining[r2 / 64] &= !(1 << (r2 % 64));
                                changed = true;
                                break 'outer;
                            }
                        }
                    }
                }
            }

            if !changed {
                return true;
            }
        }
    }

    /// Admissible bound by dual ascent, with the per-row charges behind it.
    /// Scanning rows by ascending live degree, each remaining row is charged
    /// the smallest residual capacity among its live choices and the charge
    /// is deducted from all of them, so no prime's charges ever exceed its
    /// cost. Any feasible cover pays each chosen prime at least the charges
    /// of the rows it covers, and covers every charged row, so the charge
    /// total is a true floor.
    fn dual_bound(&self, node: &Node) -> (u64, Vec<u64>) {
        let rows = self.row_primes.len();
        let mut order: Vec<(u32, u32)> = Vec::with_capacity(rows);
        for r in 0..rows {
            if Self::live(&node.remaining, r) {
                let live =
                    self.row_primes[r].iter().filter(|&&p| node.active[p as usize]).count();
                order.push((live as u32, r as u32));
            }
        }
        order.sort_unstable();
        let mut slack: Vec<u64> = self.cost.clone();
        let mut charges = vec![0u64; rows];
        let mut bound = 0u64;
        for &(_, r) in &order {
            let r = r as usize;
            let mut charge = u64::MAX;
            for &p in &self.row_primes[r] {
                if node.active[p as usize] {
                    charge = charge.min(slack[p as usize]);
                }
            }
            if charge == u64::MAX || charge == 0 {
                continue;
            }
            charges[r] = charge;
            bound += charge;
            for &p in &self.row_primes[r] {
                if node.active[p as usize] {
                    slack[p as usize] -= charge;
                }
            }
        }
        (bound, charges)
    }

    fn lower_bound(&self, node: &Node) -> u64 {
        self.dual_bound(node).0
    }
}
