//! Random graph on squarefree shifts: sampling, construction, connectivity and path ensembles.

mod components;
mod edges;
mod ensemble;
mod experiment;
mod sample;
mod three_hop;
mod window;

pub use components::{components, shortest_path, Components, GraphPath, UnionFind};
pub use edges::{
    crt_edge_independence, edge_probability_test, joint_edge_frequency, CrtCheck,
    JointEdgeFrequency,
};
pub use ensemble::{
    expected_s1, path_ensemble_stats, step_normalizer, EnsembleReport, PathEnsembleParams,
};
pub use experiment::{
    summarize, EnsembleSpec, EnsembleStats, ExperimentSummary, GraphExperiment, GraphMode,
    GraphStats, TrialRecord,
};
pub use sample::{
    draw_square_residue, sample_profinite, IntegerModel, PrimeTable, ProfiniteSample,
    ResidueModel, SampleSeed,
};
pub use three_hop::{three_hop_search, validate_path, ThreeHop, ThreeHopPath};
pub use window::{build_graph, Edge, GraphWindow, Violation};
