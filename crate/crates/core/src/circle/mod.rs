//! Prime triples `m = −p₁ + p₂ − p₃` in fixed intervals, with their circle-method main term.

mod lattice;
mod singular;
mod triples;

pub use lattice::{lattice_count, lattice_count_naive};
pub use singular::{
    f_of, f_value, fg_values, g_of, g_value, singular_series, SingularData,
    DEFAULT_SINGULAR_CUTOFF,
};
pub use triples::{
    count_triples, count_triples_in_classes, main_term_prediction,
    main_term_prediction_with_cutoff, Classes, TriplePrediction, TripleSpec,
};
