//! Two-level logic minimization for single-output Boolean functions.

pub mod adjacency;
pub mod bench;
pub mod datagen;
pub mod minimize;
pub mod model;
pub mod oracle;
pub mod pla;

pub use adjacency::{AdjacencyError, AdjacencyIndex};
pub use bench::{
    consolidate_multi, reduction_percent, sweep, sweep_with, to_csv, BenchError, BenchRecord,
    SweepOptions, VerifyMode, CSV_HEADER,
};
pub use datagen::{generate, GenError, GenMode, GenSpec};
pub use minimize::{candidate_cube, flood_fill, minimize, validate, FloodResult, MinimizeOptions};
pub use model::{
    adjacent, neighbors, space_size, Coordinate, Cover, Cube, CubeOrigin, ModelError,
    TruthFunction, VarNames, MAX_DIMENSION,
};
pub use oracle::{
    equivalent, qm_minimum_cover, qm_minimum_cover_bounded, qm_primes, CheckMode,
    EquivalenceReport, OracleError, PrimeSet,
};
pub use pla::{
    extract_function, parse_cover_sop, parse_minterm_list, parse_pla, parse_truth_table,
    read_function, write_cover_pla, write_cover_sop, write_function, write_minterm_list, write_pla,
    write_truth_table, ExtractError, InstanceFormat, ParseError, PlaDocument, PlaRow, ReadError,
    Trit,
};
