//! Initial tours, candidate neighbour lists and constructive packing.

mod neighbors;
mod packing;
mod tour_build;

pub use neighbors::{delaunay_neighbors, nearest_neighbors, NeighborLists, FALLBACK_K};
pub use packing::{
    init_collection_plan, init_evaluated, insertion_pack, pack_iterative, ALPHA_MAX, ALPHA_PROBES,
};
pub use tour_build::{build_tour, nearest_neighbor_tour, DEFAULT_CHAINS};
