//! Constructive b-colorings of d-regular graphs with `d + 1` colors.
//!
//! A b-coloring is a proper coloring in which every color class contains a
//! dominant vertex: one adjacent to every other color class. This crate
//! builds such colorings for regular graphs by establishing one dominant
//! vertex per color, verifies the result from scratch, and cross-checks
//! against a brute-force exact solver on small graphs.

pub mod coloring;
pub mod digraph;
pub mod exact;
pub mod extension;
pub mod graph;
pub mod matching;

pub use coloring::{
    check_proper, dominant_vertices, greedy_complete, verify_b_coloring, BVerdict, Coloring,
};
pub use digraph::{
    build_digraph, find_circuit_through, rotate_recolor, saturate_loops, ColoringDigraph,
};
pub use exact::{chromatic_number, exact_b_chromatic, exists_b_coloring, ExactResult};
pub use extension::{
    classify, classify_matching, extend_once, extend_once_matching, init_state,
    initial_f_coloring, select_candidate, solve_b_coloring, Classification, ExtensionState, Mode,
    SolveFailure, SolveSuccess, Strategy,
};
pub use graph::{
    gen_random_regular, gen_random_regular_c4free, named_graph, parse_dimacs, write_dimacs, Graph,
};
pub use matching::{max_matching, perfect_matching_degree_sum, BipartiteGraph};
