//! Boolean-space primitives: coordinates, adjacency, subcubes, covers, and
//! literal accounting.
//!
//! A coordinate is a truth-table row index of an `n`-variable function.
//! Variable 0 is the leftmost letter in textual output and maps to the most
//! significant bit of the row index: with four variables the row written
//! `1110` is coordinate 14, where `A = 1`, `B = 1`, `C = 1`, `D = 0`.

use std::collections::HashSet;

use thiserror::Error;

/// Upper bound on the number of input variables. Keeps coordinates in a
/// machine word and keeps exhaustive checks within desk-scale budgets.
pub const MAX_DIMENSION: u32 = 30;

/// Mask selecting the `n` bit positions a coordinate may use.
pub(crate) fn full_mask(n: u32) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// Number of points in `{0,1}^n`.
pub fn space_size(n: u32) -> u64 {
    1u64 << n
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("dimension {0} exceeds the supported maximum of {MAX_DIMENSION}")]
    DimensionTooLarge(u32),
    #[error("coordinate {bits} does not fit dimension {n}")]
    CoordinateOutOfRange { bits: u32, n: u32 },
    #[error("mask {mask:#b} uses bits outside dimension {n}")]
    MaskOutOfRange { mask: u32, n: u32 },
    #[error("cube fixes values outside its fixed mask")]
    ValuesOutsideMask,
    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: u32, found: u32 },
    #[error("expected {expected} variable names, found {found}")]
    NameCountMismatch { expected: usize, found: usize },
    #[error("invalid variable name {0:?}")]
    InvalidVariableName(String),
}

/// One point of `{0,1}^n`, stored as the truth-table row index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coordinate(u32);

impl Coordinate {
    /// Wraps a raw row index. Range checks happen where a dimension is known.
    pub fn new(bits: u32) -> Self {
        Coordinate(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn in_range(self, n: u32) -> bool {
        u64::from(self.0) < space_size(n)
    }

    /// Value of variable `var`, counting 0 as the leftmost letter.
    pub fn variable(self, var: u32, n: u32) -> bool {
        debug_assert!(var < n);
        self.0 >> (n - 1 - var) & 1 == 1
    }

    /// Flips the numeric bit at `pos` (0 = least significant).
    pub fn flip_bit(self, pos: u32) -> Self {
        Coordinate(self.0 ^ (1 << pos))
    }

    /// Renders the coordinate as an `n`-character bit string, variable 0 first.
    pub fn bit_string(self, n: u32) -> String {
        (0..n)
            .map(|var| if self.variable(var, n) { '1' } else { '0' })
            .collect()
    }
}

/// True when the two coordinates differ in exactly one bit.
pub fn adjacent(a: Coordinate, b: Coordinate, n: u32) -> bool {
    debug_assert!(a.in_range(n) && b.in_range(n));
    (a.bits() ^ b.bits()).count_ones() == 1
}

/// The `n` single-bit flips of `c`, ordered by variable index: the flip of
/// the leftmost (most significant) variable comes first.
pub fn neighbors(c: Coordinate, n: u32) -> Vec<Coordinate> {
    debug_assert!(c.in_range(n));
    (0..n).map(|var| c.flip_bit(n - 1 - var)).collect()
}

/// A single-output Boolean function stored as its sparse ON-set.
#[derive(Debug, Clone)]
pub struct TruthFunction {
    n: u32,
    on: Vec<Coordinate>,
    set: HashSet<Coordinate>,
}

impl TruthFunction {
    pub fn new(n: u32, on_set: impl IntoIterator<Item = Coordinate>) -> Result<Self, ModelError> {
        if n > MAX_DIMENSION {
            return Err(ModelError::DimensionTooLarge(n));
        }
        let set: HashSet<Coordinate> = on_set.into_iter().collect();
        for &c in &set {
            if !c.in_range(n) {
                return Err(ModelError::CoordinateOutOfRange { bits: c.bits(), n });
            }
        }
        let mut on: Vec<Coordinate> = set.iter().copied().collect();
        on.sort_unstable();
        Ok(TruthFunction { n, on, set })
    }

    pub fn from_indices(n: u32, on_set: impl IntoIterator<Item = u32>) -> Result<Self, ModelError> {
        Self::new(n, on_set.into_iter().map(Coordinate::new))
    }

    pub fn constant_zero(n: u32) -> Result<Self, ModelError> {
        Self::new(n, std::iter::empty())
    }

    /// Materializes all `2^n` rows; intended for small dimensions.
    pub fn constant_one(n: u32) -> Result<Self, ModelError> {
        if n > MAX_DIMENSION {
            return Err(ModelError::DimensionTooLarge(n));
        }
        Self::from_indices(n, 0..space_size(n) as u32)
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    /// ON coordinates in ascending order. This is the canonical form: two
    /// functions are equal exactly when dimension and this slice agree.
    pub fn on_set(&self) -> &[Coordinate] {
        &self.on
    }

    pub fn on_count(&self) -> usize {
        self.on.len()
    }

    pub fn is_empty(&self) -> bool {
        self.on.is_empty()
    }

    pub fn contains(&self, c: Coordinate) -> bool {
        self.set.contains(&c)
    }

    pub fn density(&self) -> f64 {
        self.on.len() as f64 / space_size(self.n) as f64
    }
}

impl PartialEq for TruthFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.on == other.on
    }
}

impl Eq for TruthFunction {}

/// A subcube of `{0,1}^n`, i.e. one product term. Bits set in `fixed_mask`
/// are pinned to the corresponding bit of `fixed_values`; the rest are free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    n: u32,
    fixed_mask: u32,
    fixed_values: u32,
}

impl Cube {
    pub fn new(n: u32, fixed_mask: u32, fixed_values: u32) -> Result<Self, ModelError> {
        if n > MAX_DIMENSION {
            return Err(ModelError::DimensionTooLarge(n));
        }
        if fixed_mask & !full_mask(n) != 0 {
            return Err(ModelError::MaskOutOfRange { mask: fixed_mask, n });
        }
        if fixed_values & !fixed_mask != 0 {
            return Err(ModelError::ValuesOutsideMask);
        }
        Ok(Cube { n, fixed_mask, fixed_values })
    }

    /// The cube holding exactly one coordinate.
    pub fn minterm(n: u32, c: Coordinate) -> Self {
        assert!(n <= MAX_DIMENSION && c.in_range(n));
        Cube { n, fixed_mask: full_mask(n), fixed_values: c.bits() }
    }

    /// The cube with no fixed variables, covering the whole space.
    pub fn universe(n: u32) -> Self {
        assert!(n <= MAX_DIMENSION);
        Cube { n, fixed_mask: 0, fixed_values: 0 }
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn fixed_mask(&self) -> u32 {
        self.fixed_mask
    }

    pub fn fixed_values(&self) -> u32 {
        self.fixed_values
    }

    pub fn free_mask(&self) -> u32 {
        full_mask(self.n) & !self.fixed_mask
    }

    /// Number of fixed variables; equals the term's literal count.
    pub fn fixed_count(&self) -> u32 {
        self.fixed_mask.count_ones()
    }

    pub fn free_count(&self) -> u32 {
        self.n - self.fixed_count()
    }

    pub fn member_count(&self) -> u64 {
        1u64 << self.free_count()
    }

    pub fn contains(&self, c: Coordinate) -> bool {
        c.bits() & self.fixed_mask == self.fixed_values
    }

    /// Pins a currently free bit position to `value`.
    pub fn with_position_fixed(&self, pos: u32, value: bool) -> Self {
        debug_assert!(self.free_mask() >> pos & 1 == 1);
        let mask = self.fixed_mask | 1 << pos;
        let values = self.fixed_values | if value { 1 << pos } else { 0 };
        Cube { n: self.n, fixed_mask: mask, fixed_values: values }
    }

    /// Releases a currently fixed bit position.
    pub fn with_position_freed(&self, pos: u32) -> Self {
        debug_assert!(self.fixed_mask >> pos & 1 == 1);
        let mask = self.fixed_mask & !(1 << pos);
        Cube { n: self.n, fixed_mask: mask, fixed_values: self.fixed_values & mask }
    }

    /// All member coordinates in ascending numeric order. The list has
    /// `2^free_count` entries; callers keep free counts small.
    pub fn members(&self) -> Vec<Coordinate> {
        let free: Vec<u32> = (0..self.n).filter(|&p| self.free_mask() >> p & 1 == 1).collect();
        let count = 1usize << free.len();
        let mut out = Vec::with_capacity(count);
        for s in 0..count {
            let mut bits = self.fixed_values;
            for (j, &p) in free.iter().enumerate() {
                if s >> j & 1 == 1 {
                    bits |= 1 << p;
                }
            }
            out.push(Coordinate::new(bits));
        }
        out
    }

    /// Product-term text: fixed variables in variable order, a trailing
    /// apostrophe marking complemented ones. The all-free cube renders "1".
    pub fn expression(&self, names: &VarNames) -> String {
        assert_eq!(names.len(), self.n as usize, "name list must match dimension");
        let mut out = String::new();
        for var in 0..self.n {
            let pos = self.n - 1 - var;
            if self.fixed_mask >> pos & 1 == 1 {
                out.push_str(names.get(var));
                if self.fixed_values >> pos & 1 == 0 {
                    out.push('\'');
                }
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

/// Variable names used for rendering and parsing product terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarNames(Vec<String>);

impl VarNames {
    /// `A`..`Z` for up to 26 variables, `x0`..`x(n-1)` beyond that.
    pub fn default_for(n: u32) -> Self {
        let names = if n <= 26 {
            (0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect()
        } else {
            (0..n).map(|i| format!("x{i}")).collect()
        };
        VarNames(names)
    }

    /// Names must be non-empty, unique, and free of whitespace, `+`, `'`.
    pub fn new(names: Vec<String>) -> Result<Self, ModelError> {
        let mut seen = HashSet::new();
        for name in &names {
            let bad = name.is_empty()
                || name.chars().any(|c| c.is_whitespace() || c == '+' || c == '\'');
            if bad || !seen.insert(name.clone()) {
                return Err(ModelError::InvalidVariableName(name.clone()));
            }
        }
        Ok(VarNames(names))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: u32) -> &str {
        &self.0[var as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

/// Where a cover cube came from: the worklist element the search was anchored
/// on and the free-dimension count at emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeOrigin {
    pub anchor: Coordinate,
    pub k: u32,
}

/// An ordered sum of product terms, optionally carrying per-cube origins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    n: u32,
    cubes: Vec<Cube>,
    origins: Vec<Option<CubeOrigin>>,
}

impl Cover {
    pub fn empty(n: u32) -> Self {
        assert!(n <= MAX_DIMENSION);
        Cover { n, cubes: Vec::new(), origins: Vec::new() }
    }

    pub fn from_cubes(n: u32, cubes: Vec<Cube>) -> Result<Self, ModelError> {
        let mut cover = Cover::empty(n);
        for cube in cubes {
            cover.push(cube)?;
        }
        Ok(cover)
    }

    pub fn push(&mut self, cube: Cube) -> Result<(), ModelError> {
        if cube.dimension() != self.n {
            return Err(ModelError::DimensionMismatch { expected: self.n, found: cube.dimension() });
        }
        self.cubes.push(cube);
        self.origins.push(None);
        Ok(())
    }

    pub fn push_with_origin(&mut self, cube: Cube, origin: CubeOrigin) -> Result<(), ModelError> {
        self.push(cube)?;
        *self.origins.last_mut().unwrap() = Some(origin);
        Ok(())
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn origins(&self) -> &[Option<CubeOrigin>] {
        &self.origins
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// True when any cube contains `c`.
    pub fn evaluate(&self, c: Coordinate) -> bool {
        self.cubes.iter().any(|cube| cube.contains(c))
    }

    /// Total literal count over all terms.
    pub fn literal_count(&self) -> usize {
        self.cubes.iter().map(|cube| cube.fixed_count() as usize).sum()
    }
}
