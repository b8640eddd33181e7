//! Randomised initial tours: nearest neighbour from a random start, 2-opt and
//! Or-opt over candidate lists, then double-bridge kicks that are kept only
//! when they shorten the tour.

use rand::Rng;

use super::neighbors::NeighborLists;
use crate::instance::{CityId, Instance};
use crate::tour::Tour;

pub const DEFAULT_CHAINS: usize = 5;

const EPS: f64 = 1e-7;

/// Cyclic permutation of all cities with its inverse.
#[derive(Clone)]
struct Cycle {
    seq: Vec<CityId>,
    pos: Vec<usize>,
}

impl Cycle {
    fn new(seq: Vec<CityId>) -> Self {
        let mut pos = vec![0; seq.len()];
        for (k, &c) in seq.iter().enumerate() {
            pos[c] = k;
        }
        Cycle { seq, pos }
    }

    fn n(&self) -> usize {
        self.seq.len()
    }

    fn succ(&self, c: CityId) -> CityId {
        self.seq[(self.pos[c] + 1) % self.n()]
    }

    fn pred(&self, c: CityId) -> CityId {
        self.seq[(self.pos[c] + self.n() - 1) % self.n()]
    }

    fn length(&self, inst: &Instance) -> f64 {
        let n = self.n();
        (0..n).map(|k| inst.distance(self.seq[k], self.seq[(k + 1) % n])).sum()
    }

    /// Reverses the path from city `from` forward to city `to`. The shorter
    /// side of the cycle is reversed; for a symmetric metric both give the
    /// same cycle.
    fn reverse_path(&mut self, from: CityId, to: CityId) {
        let n = self.n();
        let (mut i, mut j) = (self.pos[from], self.pos[to]);
        let len = (j + n - i) % n + 1;
        if 2 * len > n {
            let (ni, nj) = ((j + 1) % n, (i + n - 1) % n);
            i = ni;
            j = nj;
        }
        let mut steps = ((j + n - i) % n + 1) / 2;
        while steps > 0 {
            self.seq.swap(i, j);
            self.pos[self.seq[i]] = i;
            self.pos[self.seq[j]] = j;
            i = (i + 1) % n;
            j = (j + n - 1) % n;
            steps -= 1;
        }
    }

    /// Moves the path `first..=last` (forward) between `c` and `succ(c)`,
    /// optionally reversed.
    fn move_segment(&mut self, first: CityId, last: CityId, c: CityId, reversed: bool) {
        let n = self.n();
        let mut segment = Vec::new();
        let mut k = self.pos[first];
        loop {
            segment.push(self.seq[k]);
            if self.seq[k] == last {
                break;
            }
            k = (k + 1) % n;
        }
        if reversed {
            segment.reverse();
        }
        let mut in_segment = vec![false; n];
        for &s in &segment {
            in_segment[s] = true;
        }
        let mut seq = Vec::with_capacity(n);
        let start = self.pos[c];
        for step in 0..n {
            let city = self.seq[(start + step) % n];
            if in_segment[city] {
                continue;
            }
            seq.push(city);
            if city == c {
                seq.extend_from_slice(&segment);
            }
        }
        *self = Cycle::new(seq);
    }
}

fn nearest_neighbor_cycle<R: Rng>(inst: &Instance, neighbors: &NeighborLists, rng: &mut R) -> Cycle {
    let n = inst.num_cities();
    let start = rng.gen_range(0..n);
    let mut visited = vec![false; n];
    let mut unvisited: Vec<CityId> = (0..n).collect();
    let mut slot: Vec<usize> = (0..n).collect();
    let mut take = |c: CityId, visited: &mut Vec<bool>, unvisited: &mut Vec<CityId>| {
        visited[c] = true;
        let s = slot[c];
        let last = *unvisited.last().unwrap();
        unvisited.swap_remove(s);
        if last != c {
            slot[last] = s;
        }
    };
    let mut seq = Vec::with_capacity(n);
    take(start, &mut visited, &mut unvisited);
    seq.push(start);
    let mut cur = start;
    while !unvisited.is_empty() {
        // Neighbour lists are sorted by distance, so the first unvisited entry
        // is the nearest candidate; otherwise scan everything left.
        let next = match neighbors.of(cur).iter().find(|&&c| !visited[c]) {
            Some(&c) => c,
            None => *unvisited
                .iter()
                .min_by(|&&a, &&b| inst.distance(cur, a).total_cmp(&inst.distance(cur, b)).then(a.cmp(&b)))
                .unwrap(),
        };
        take(next, &mut visited, &mut unvisited);
        seq.push(next);
        cur = next;
    }
    Cycle::new(seq)
}

/// First-improvement 2-opt and Or-opt restricted to candidate neighbours,
/// driven by a queue of cities whose surroundings changed.
fn local_search(inst: &Instance, neighbors: &NeighborLists, cycle: &mut Cycle, mut queue: Vec<CityId>) {
    let n = cycle.n();
    if n < 5 {
        if n == 4 {
            exhaustive_small(inst, cycle);
        }
        return;
    }
    let mut queued = vec![false; n];
    for &c in &queue {
        queued[c] = true;
    }
    let d = |a: CityId, b: CityId| inst.distance(a, b);
    while let Some(a) = queue.pop() {
        queued[a] = false;
        let mut touched: Vec<CityId> = Vec::new();

        'moves: {
            // 2-opt, successor side.
            let b = cycle.succ(a);
            for &c in neighbors.of(a) {
                let g1 = d(a, b) - d(a, c);
                if g1 <= EPS {
                    break;
                }
                let e = cycle.succ(c);
                if c == b || e == a {
                    continue;
                }
                if g1 + d(c, e) - d(b, e) > EPS {
                    cycle.reverse_path(b, c);
                    touched.extend([a, b, c, e]);
                    break 'moves;
                }
            }
            // 2-opt, predecessor side.
            let b = cycle.pred(a);
            for &c in neighbors.of(a) {
                let g1 = d(b, a) - d(a, c);
                if g1 <= EPS {
                    break;
                }
                let e = cycle.pred(c);
                if c == b || e == a {
                    continue;
                }
                if g1 + d(e, c) - d(b, e) > EPS {
                    cycle.reverse_path(a, e);
                    touched.extend([a, b, c, e]);
                    break 'moves;
                }
            }
            // Or-opt: segments of 1..=3 cities starting at `a`.
            let mut last = a;
            for len in 1..=3usize {
                if len > 1 {
                    last = cycle.succ(last);
                }
                if len + 2 >= n {
                    break;
                }
                let p = cycle.pred(a);
                let nx = cycle.succ(last);
                let removal = d(p, a) + d(last, nx) - d(p, nx);
                if removal <= EPS {
                    continue;
                }
                let mut in_seg = Vec::with_capacity(len);
                let mut s = a;
                for _ in 0..len {
                    in_seg.push(s);
                    s = cycle.succ(s);
                }
                for &end in &[a, last] {
                    for &c in neighbors.of(end) {
                        if in_seg.contains(&c) {
                            continue;
                        }
                        for (x, y) in [(c, cycle.succ(c)), (cycle.pred(c), c)] {
                            if in_seg.contains(&x) || in_seg.contains(&y) || (x == p && y == nx) {
                                continue;
                            }
                            let base = d(x, y);
                            let fwd = d(x, a) + d(last, y) - base;
                            let rev = d(x, last) + d(a, y) - base;
                            if fwd < removal - EPS && fwd <= rev {
                                cycle.move_segment(a, last, x, false);
                                touched.extend([p, nx, x, y, a, last]);
                                break 'moves;
                            }
                            if rev < removal - EPS {
                                cycle.move_segment(a, last, x, true);
                                touched.extend([p, nx, x, y, a, last]);
                                break 'moves;
                            }
                        }
                    }
                }
            }
        }

        for c in touched {
            if !queued[c] {
                queued[c] = true;
                queue.push(c);
            }
        }
    }
}

/// With four cities there are three distinct cycles; pick the shortest.
fn exhaustive_small(inst: &Instance, cycle: &mut Cycle) {
    let s = cycle.seq.clone();
    let candidates = [
        vec![s[0], s[1], s[2], s[3]],
        vec![s[0], s[2], s[1], s[3]],
        vec![s[0], s[1], s[3], s[2]],
    ];
    let mut best = cycle.length(inst);
    for cand in candidates {
        let c = Cycle::new(cand);
        let len = c.length(inst);
        if len < best - EPS {
            best = len;
            *cycle = c;
        }
    }
}

fn double_bridge<R: Rng>(cycle: &Cycle, rng: &mut R) -> (Cycle, Vec<CityId>) {
    let n = cycle.n();
    let mut cuts = [0usize; 3];
    loop {
        for c in cuts.iter_mut() {
            *c = rng.gen_range(1..n);
        }
        cuts.sort_unstable();
        if cuts[0] < cuts[1] && cuts[1] < cuts[2] {
            break;
        }
    }
    let s = &cycle.seq;
    let (a, b, c) = (cuts[0], cuts[1], cuts[2]);
    let mut seq = Vec::with_capacity(n);
    seq.extend_from_slice(&s[..a]);
    seq.extend_from_slice(&s[b..c]);
    seq.extend_from_slice(&s[a..b]);
    seq.extend_from_slice(&s[c..]);
    let ends = vec![s[a - 1], s[a], s[b - 1], s[b], s[c - 1], s[c % n], s[n - 1], s[0]];
    (Cycle::new(seq), ends)
}

/// Nearest-neighbour tour without improvement, rotated to start at city 0.
pub fn nearest_neighbor_tour<R: Rng>(inst: &Instance, neighbors: &NeighborLists, rng: &mut R) -> Tour {
    let cycle = nearest_neighbor_cycle(inst, neighbors, rng);
    to_tour(&cycle, false)
}

/// Builds a randomised, locally optimal tour.
pub fn build_tour<R: Rng>(inst: &Instance, neighbors: &NeighborLists, rng: &mut R, chains: usize) -> Tour {
    let n = inst.num_cities();
    let mut cycle = nearest_neighbor_cycle(inst, neighbors, rng);
    local_search(inst, neighbors, &mut cycle, (0..n).rev().collect());
    if n >= 8 {
        let mut best = cycle.length(inst);
        for _ in 0..chains {
            let (mut kicked, ends) = double_bridge(&cycle, rng);
            local_search(inst, neighbors, &mut kicked, ends);
            let len = kicked.length(inst);
            if len < best - EPS {
                best = len;
                cycle = kicked;
            }
        }
    }
    let reversed = rng.gen_bool(0.5);
    to_tour(&cycle, reversed)
}

fn to_tour(cycle: &Cycle, reversed: bool) -> Tour {
    let n = cycle.n();
    let start = cycle.pos[0];
    let inner: Vec<CityId> = (1..n)
        .map(|step| {
            let k = if reversed { (start + n - step) % n } else { (start + step) % n };
            cycle.seq[k]
        })
        .collect();
    Tour::from_inner(&inner).expect("cycle is a permutation")
}
