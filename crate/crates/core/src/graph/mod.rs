//! Combinatorial optimization kernels: bipartite matching, maximum flow and
//! exact minimum vertex cover.

mod flow;
mod matching;
mod vertex_cover;

pub use flow::{FlowBuilder, FlowNetwork};
pub use matching::{hopcroft_karp, Bipartite, BipartiteGraph};
pub use vertex_cover::{greedy_maximal_matching, min_vertex_cover, VertexCover};
