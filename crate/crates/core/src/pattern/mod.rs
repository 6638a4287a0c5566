//! Sign patterns of λ and μ², their densities, and the related pair and run statistics.

mod constants;
mod density;
mod maximal;
mod pairs;
mod sign;

pub use constants::{predicted_constants, prime_square_tail, PredictedConstants, DEFAULT_CONSTANT_CUTOFF};
pub use density::{
    change_of_variable_check, geometric_ladder, match_pattern, pattern_density, pattern_tallies,
    run_density, squarefree_frequency, tally_in_segment, ChangeOfVariable, DensityEstimate,
    DensityReport, Property, Tally, DEFAULT_LADDER_STEPS,
};
pub use maximal::{hl_maximal, MaximalReport};
pub use pairs::{mobius_pair_table, PairTable};
pub use sign::{SignField, SignPattern, Symbol, MAX_PATTERN_LEN};
