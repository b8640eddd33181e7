use delaunator::{triangulate, Point};

use crate::instance::{CityId, Instance, Metric};

/// Neighbours used when triangulation is unavailable.
pub const FALLBACK_K: usize = 8;

/// Candidate neighbours per city, sorted by distance then id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborLists {
    lists: Vec<Vec<CityId>>,
}

impl NeighborLists {
    pub fn of(&self, c: CityId) -> &[CityId] {
        &self.lists[c]
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    /// Every city adjacent to every other city.
    pub fn complete(inst: &Instance) -> Self {
        let n = inst.num_cities();
        let mut adj = vec![Vec::new(); n];
        for (a, list) in adj.iter_mut().enumerate() {
            list.extend((0..n).filter(|&b| b != a));
        }
        Self::finish(inst, adj)
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn finish(inst: &Instance, mut adj: Vec<Vec<CityId>>) -> Self {
        for (a, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            list.retain(|&b| b != a);
            list.sort_by(|&x, &y| {
                inst.distance(a, x)
                    .total_cmp(&inst.distance(a, y))
                    .then(x.cmp(&y))
            });
        }
        NeighborLists { lists: adj }
    }
}

/// Delaunay adjacency of the city coordinates.
///
/// Fewer than three cities give all pairs. Collinear input, which has no
/// triangulation, gives the `FALLBACK_K` nearest neighbours. Cities left
/// without a triangle (duplicated coordinates) get the same fallback. For
/// explicit distance matrices the coordinates carry no metric meaning, so
/// nearest neighbours by distance are used instead.
pub fn delaunay_neighbors(inst: &Instance) -> NeighborLists {
    let n = inst.num_cities();
    if n < 3 {
        return NeighborLists::complete(inst);
    }
    if inst.metric() == Metric::Explicit {
        return nearest_neighbors(inst, FALLBACK_K);
    }
    let points: Vec<Point> = inst.coords().iter().map(|&(x, y)| Point { x, y }).collect();
    let tri = triangulate(&points);
    if tri.triangles.is_empty() {
        return nearest_neighbors(inst, FALLBACK_K);
    }
    let mut adj: Vec<Vec<CityId>> = vec![Vec::new(); n];
    for t in tri.triangles.chunks_exact(3) {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let isolated: Vec<CityId> = (0..n).filter(|&c| adj[c].is_empty()).collect();
    for c in isolated {
        for b in k_nearest(inst, c, FALLBACK_K) {
            adj[c].push(b);
            adj[b].push(c);
        }
    }
    NeighborLists::finish(inst, adj)
}

/// Symmetrised `k`-nearest-neighbour lists.
pub fn nearest_neighbors(inst: &Instance, k: usize) -> NeighborLists {
    let n = inst.num_cities();
    let mut adj: Vec<Vec<CityId>> = vec![Vec::new(); n];
    for c in 0..n {
        for b in k_nearest(inst, c, k) {
            adj[c].push(b);
            adj[b].push(c);
        }
    }
    NeighborLists::finish(inst, adj)
}

fn k_nearest(inst: &Instance, c: CityId, k: usize) -> Vec<CityId> {
    let mut others: Vec<CityId> = (0..inst.num_cities()).filter(|&b| b != c).collect();
    let by_dist = |x: &CityId, y: &CityId| {
        inst.distance(c, *x)
            .total_cmp(&inst.distance(c, *y))
            .then(x.cmp(y))
    };
    if others.len() > k {
        others.select_nth_unstable_by(k - 1, by_dist);
        others.truncate(k);
    }
    others.sort_by(by_dist);
    others
}
