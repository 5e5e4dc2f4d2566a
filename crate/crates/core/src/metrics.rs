//! Distance invariants: BFS distances, eccentricities, radii, diameter,
//! Wiener index, degree vectors and the per-vertex degree bounds.
//!
//! Radii may be half-integral; they are carried as `rad2`, twice the radius.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{full_mask, transpose, Bits, DenseDigraph, VertexPartition};

/// Distance sentinel for unreachable pairs.
pub const UNREACHABLE: u32 = u32::MAX;

/// Largest order accepted by [`clique_number`].
pub const CLIQUE_LIMIT: usize = 20;

/// Largest order for which the universal shortest-path disjointness
/// condition is enumerated.
pub const ALL_PATHS_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("claimed outradius {claimed} but the digraph has outradius {actual:?}")]
    OutradiusMismatch { claimed: u32, actual: Option<u32> },
    #[error("partition is not a proper bipartition of the digraph")]
    NotBipartite,
    #[error("digraph is not strong")]
    NotStrong,
    #[error("outradius {0} is odd; the bound needs an even outradius")]
    OddRadius(u32),
    #[error("outradius {0} is below 4")]
    RadiusTooSmall(u32),
    #[error("order {order} exceeds the limit {limit}")]
    OrderLimit { order: usize, limit: usize },
}

/// Distances from `s` along out-arcs (or in-arcs when `rows` are
/// transposed), written into `out`. Returns the eccentricity (or
/// [`UNREACHABLE`]) and the sum of finite distances.
pub fn bfs_into(rows: &[u64], n: usize, s: usize, out: &mut [u32]) -> (u32, u64) {
    out[..n].fill(UNREACHABLE);
    out[s] = 0;
    let mut seen = 1u64 << s;
    let mut frontier = seen;
    let mut level = 0u32;
    let mut sum = 0u64;
    while frontier != 0 {
        let mut next = 0u64;
        for v in Bits(frontier) {
            next |= rows[v];
        }
        next &= !seen;
        if next == 0 {
            break;
        }
        level += 1;
        sum += u64::from(level) * u64::from(next.count_ones());
        for v in Bits(next) {
            out[v] = level;
        }
        seen |= next;
        frontier = next;
    }
    let ecc = if seen == full_mask(n) { level } else { UNREACHABLE };
    (ecc, sum)
}

/// Eccentricity and distance sum from `s` without materializing distances.
#[inline]
pub fn ecc_and_sum(rows: &[u64], n: usize, s: usize) -> (u32, u64) {
    let all = full_mask(n);
    let mut seen = 1u64 << s;
    let mut frontier = seen;
    let mut level = 0u32;
    let mut sum = 0u64;
    while frontier != 0 {
        let mut next = 0u64;
        for v in Bits(frontier) {
            next |= rows[v];
        }
        next &= !seen;
        if next == 0 {
            break;
        }
        level += 1;
        sum += u64::from(level) * u64::from(next.count_ones());
        seen |= next;
        frontier = next;
    }
    if seen == all {
        (level, sum)
    } else {
        (UNREACHABLE, sum)
    }
}

/// Strong connectivity via forward and backward closure from vertex 0.
#[inline]
pub fn rows_strong(rows: &[u64], cols: &[u64], n: usize) -> bool {
    closure(rows, 1) == full_mask(n) && closure(cols, 1) == full_mask(n)
}

#[inline]
fn closure(rows: &[u64], start: u64) -> u64 {
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0u64;
        for v in Bits(frontier) {
            next |= rows[v];
        }
        frontier = next & !seen;
        seen |= next;
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Hop count `i -> j`, or [`UNREACHABLE`].
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.d[i * self.n..(i + 1) * self.n]
    }
}

pub fn distance_matrix(d: &DenseDigraph) -> DistanceMatrix {
    let n = d.order();
    let mut dist = vec![UNREACHABLE; n * n];
    for (s, chunk) in dist.chunks_mut(n).enumerate() {
        bfs_into(d.rows(), n, s, chunk);
    }
    DistanceMatrix { n, d: dist }
}

pub fn is_strong(d: &DenseDigraph) -> bool {
    rows_strong(d.rows(), &d.in_rows(), d.order())
}

/// All distance and degree invariants of a digraph. `None` stands for an
/// infinite value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub n: usize,
    pub arc_count: usize,
    pub ecc_out: Vec<Option<u32>>,
    pub ecc_in: Vec<Option<u32>>,
    pub rad_out: Option<u32>,
    pub rad_in: Option<u32>,
    pub rad2: Option<u32>,
    /// `rad2 / 2` as a decimal string, e.g. `"2.5"`.
    pub rad: Option<String>,
    pub diameter: Option<u32>,
    pub wiener: Option<u64>,
    pub wiener_infinite: bool,
    /// `W / (n^2 - n)` as a reduced fraction.
    pub avg_distance: Option<String>,
    pub outdeg: Vec<usize>,
    pub indeg: Vec<usize>,
    pub totaldeg: Vec<usize>,
    pub strong: bool,
    pub bipartite: bool,
}

fn finite(x: u32) -> Option<u32> {
    (x != UNREACHABLE).then_some(x)
}

pub fn metric_summary(d: &DenseDigraph) -> MetricSummary {
    let n = d.order();
    let rows = d.rows();
    let cols = d.in_rows();
    let mut ecc_out = Vec::with_capacity(n);
    let mut ecc_in = Vec::with_capacity(n);
    let mut wiener = 0u64;
    for v in 0..n {
        let (e, s) = ecc_and_sum(rows, n, v);
        ecc_out.push(finite(e));
        wiener += s;
        ecc_in.push(finite(ecc_and_sum(&cols, n, v).0));
    }
    let strong = ecc_out.iter().all(Option::is_some);
    let rad_out = ecc_out.iter().flatten().copied().min();
    let rad_in = ecc_in.iter().flatten().copied().min();
    let rad2 = ecc_out
        .iter()
        .zip(&ecc_in)
        .filter_map(|(o, i)| Some((*o)? + (*i)?))
        .min();
    let diameter = if strong {
        ecc_out.iter().flatten().copied().max()
    } else {
        None
    };
    let wiener = strong.then_some(wiener);
    let outdeg: Vec<usize> = (0..n).map(|v| d.outdeg(v)).collect();
    let indeg: Vec<usize> = cols.iter().map(|c| c.count_ones() as usize).collect();
    let totaldeg = outdeg.iter().zip(&indeg).map(|(a, b)| a + b).collect();
    MetricSummary {
        n,
        arc_count: d.arc_count(),
        rad: rad2.map(half_string),
        avg_distance: wiener.and_then(|w| fraction(w, (n * n - n) as u64)),
        ecc_out,
        ecc_in,
        rad_out,
        rad_in,
        rad2,
        diameter,
        wiener,
        wiener_infinite: !strong,
        outdeg,
        indeg,
        totaldeg,
        strong,
        bipartite: d.is_bipartite().is_some(),
    }
}

/// Decimal rendering of `x / 2`.
pub fn half_string(x: u32) -> String {
    if x.is_multiple_of(2) {
        (x / 2).to_string()
    } else {
        format!("{}.5", x / 2)
    }
}

fn fraction(num: u64, den: u64) -> Option<String> {
    if den == 0 {
        return None;
    }
    let g = gcd(num, den);
    let (a, b) = (num / g, den / g);
    Some(if b == 1 { a.to_string() } else { format!("{a}/{b}") })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `F(v)`: the vertices other than `v` that are not out-neighbours of `v`.
pub fn co_out_neighborhood(d: &DenseDigraph, v: usize) -> Vec<usize> {
    let rest = full_mask(d.order()) & !(1u64 << v) & !d.out_row(v);
    Bits(rest).collect()
}

/// Outcome of a per-vertex total-degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexBound {
    pub vertex: usize,
    pub total_degree: usize,
    pub bound: usize,
    pub within: bool,
}

/// Structure found at a vertex meeting the bound with equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityWitness {
    pub vertex: usize,
    pub outdeg: usize,
    pub indeg: usize,
    pub degree_split_matches: bool,
    /// Two internally disjoint shortest paths of lengths `r` and `r - 1`
    /// from the vertex, if any exist.
    pub disjoint_paths: Option<(Vec<usize>, Vec<usize>)>,
    /// Whether some endpoint pair has all of its shortest paths pairwise
    /// disjoint; only evaluated up to [`ALL_PATHS_LIMIT`] vertices.
    pub all_shortest_paths_disjoint: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBoundReport {
    pub r: u32,
    pub vertices: Vec<VertexBound>,
    pub violations: usize,
    pub equality: Vec<EqualityWitness>,
}

impl DegreeBoundReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `deg(v) <= 2(n-1) - (2r-3)` at every vertex of a digraph with
/// outradius `r`.
pub fn check_outradius_degree_bound(d: &DenseDigraph, r: u32) -> Result<DegreeBoundReport, MetricError> {
    let actual = metric_summary(d).rad_out;
    if actual != Some(r) {
        return Err(MetricError::OutradiusMismatch { claimed: r, actual });
    }
    let n = d.order();
    // 2(n-1) - (2r-3) = 2n + 1 - 2r, which stays meaningful at r = 1.
    let bound = (2 * n + 1).saturating_sub(2 * r as usize);
    let split = |v: usize| d.indeg(v) == n - 1 && d.outdeg(v) + 2 * r as usize == n + 2;
    Ok(degree_report(d, r, |_| bound, split))
}

/// Checks `deg(v) <= 2|opposite class| - (r-2)` for a bipartite strong
/// digraph with even outradius `r >= 4`.
pub fn check_bipartite_degree_bound(
    d: &DenseDigraph,
    partition: &VertexPartition,
    r: u32,
) -> Result<DegreeBoundReport, MetricError> {
    if !partition.is_proper_for(d) {
        return Err(MetricError::NotBipartite);
    }
    if !is_strong(d) {
        return Err(MetricError::NotStrong);
    }
    if r % 2 == 1 {
        return Err(MetricError::OddRadius(r));
    }
    if r < 4 {
        return Err(MetricError::RadiusTooSmall(r));
    }
    let actual = metric_summary(d).rad_out;
    if actual != Some(r) {
        return Err(MetricError::OutradiusMismatch { claimed: r, actual });
    }
    let bound = |v: usize| (2 * partition.opposite_size(v)).saturating_sub(r as usize - 2);
    let split = |v: usize| {
        let opp = partition.opposite_size(v);
        d.indeg(v) == opp && d.outdeg(v) + (r as usize - 2) == opp
    };
    Ok(degree_report(d, r, bound, split))
}

fn degree_report(
    d: &DenseDigraph,
    r: u32,
    bound: impl Fn(usize) -> usize,
    split: impl Fn(usize) -> bool,
) -> DegreeBoundReport {
    let n = d.order();
    let dist = distance_matrix(d);
    let vertices: Vec<VertexBound> = (0..n)
        .map(|v| {
            let total_degree = d.total_degree(v);
            let b = bound(v);
            VertexBound {
                vertex: v,
                total_degree,
                bound: b,
                within: total_degree <= b,
            }
        })
        .collect();
    let violations = vertices.iter().filter(|b| !b.within).count();
    let equality = vertices
        .iter()
        .filter(|b| b.total_degree == b.bound)
        .map(|b| {
            let v = b.vertex;
            let paths = PathFinder::new(d, &dist, v);
            EqualityWitness {
                vertex: v,
                outdeg: d.outdeg(v),
                indeg: d.indeg(v),
                degree_split_matches: split(v),
                disjoint_paths: paths.disjoint_pair(r),
                all_shortest_paths_disjoint: (n <= ALL_PATHS_LIMIT).then(|| paths.all_disjoint_pair_exists(r)),
            }
        })
        .collect();
    DegreeBoundReport {
        r,
        vertices,
        violations,
        equality,
    }
}

/// Shortest-path enumeration out of one source.
struct PathFinder<'a> {
    d: &'a DenseDigraph,
    dist: &'a DistanceMatrix,
    source: usize,
}

impl<'a> PathFinder<'a> {
    fn new(d: &'a DenseDigraph, dist: &'a DistanceMatrix, source: usize) -> Self {
        PathFinder { d, dist, source }
    }

    /// Every shortest path from the source to `target`, as internal vertex
    /// lists ending in `target`.
    fn shortest_paths(&self, target: usize) -> Vec<Vec<usize>> {
        let len = self.dist.get(self.source, target);
        let mut out = Vec::new();
        if len == UNREACHABLE || len == 0 {
            return out;
        }
        let mut path = Vec::with_capacity(len as usize);
        self.extend(self.source, target, &mut path, &mut out);
        out
    }

    fn extend(&self, at: usize, target: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == target {
            out.push(path.clone());
            return;
        }
        let step = self.dist.get(self.source, at) + 1;
        for w in Bits(self.d.out_row(at)) {
            if self.dist.get(self.source, w) == step
                && self.dist.get(w, target) != UNREACHABLE
                && step + self.dist.get(w, target) == self.dist.get(self.source, target)
            {
                path.push(w);
                self.extend(w, target, path, out);
                path.pop();
            }
        }
    }

    fn at_distance(&self, k: u32) -> Vec<usize> {
        (0..self.d.order())
            .filter(|&x| self.dist.get(self.source, x) == k)
            .collect()
    }

    fn disjoint_pair(&self, r: u32) -> Option<(Vec<usize>, Vec<usize>)> {
        if r < 2 {
            return None;
        }
        for u in self.at_distance(r) {
            let long = self.shortest_paths(u);
            for w in self.at_distance(r - 1) {
                let short = self.shortest_paths(w);
                for p in &long {
                    for q in &short {
                        if p.iter().all(|x| !q.contains(x)) {
                            return Some((p.clone(), q.clone()));
                        }
                    }
                }
            }
        }
        None
    }

    fn all_disjoint_pair_exists(&self, r: u32) -> bool {
        if r < 2 {
            return false;
        }
        self.at_distance(r).into_iter().any(|u| {
            let long = self.shortest_paths(u);
            self.at_distance(r - 1).into_iter().any(|w| {
                let short = self.shortest_paths(w);
                long.iter()
                    .all(|p| short.iter().all(|q| p.iter().all(|x| !q.contains(x))))
            })
        })
    }
}

/// Order of the largest bidirected clique.
pub fn clique_number(d: &DenseDigraph) -> Result<usize, MetricError> {
    let n = d.order();
    if n > CLIQUE_LIMIT {
        return Err(MetricError::OrderLimit {
            order: n,
            limit: CLIQUE_LIMIT,
        });
    }
    let cols = transpose(d.rows(), n);
    let sym: Vec<u64> = d.rows().iter().zip(&cols).map(|(a, b)| a & b).collect();
    let mut best = 0;
    grow_clique(&sym, 0, full_mask(n), &mut best);
    Ok(best)
}

fn grow_clique(sym: &[u64], size: usize, candidates: u64, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    let mut rest = candidates;
    while rest != 0 {
        if size + rest.count_ones() as usize <= *best {
            return;
        }
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        grow_clique(sym, size + 1, rest & sym[v], best);
    }
}
