//! Dense small-order digraphs.
//!
//! A [`DenseDigraph`] stores one `u64` out-row per vertex (bit `j` of row `i`
//! is the arc `i -> j`), so every order up to 64 fits without allocation
//! beyond the row vector. Undirected graphs are symmetric digraphs.

use std::cmp::Ordering;
use std::fmt;

use crate::error::DigraphError;

/// Largest order a [`DenseDigraph`] can hold.
pub const MAX_ORDER: usize = 64;

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over the set bits of a mask, lowest first.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseDigraph {
    n: usize,
    rows: Vec<u64>,
}

impl DenseDigraph {
    /// The arcless digraph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, DigraphError> {
        check_order(n)?;
        Ok(DenseDigraph { n, rows: vec![0; n] })
    }

    /// Builds a digraph from out-rows. Bits at or above `n` and diagonal
    /// bits are rejected.
    pub fn from_rows(n: usize, rows: &[u64]) -> Result<Self, DigraphError> {
        check_order(n)?;
        if rows.len() != n {
            return Err(DigraphError::RowCount {
                expected: n,
                found: rows.len(),
            });
        }
        let mask = full_mask(n);
        for (i, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                let j = (row & !mask).trailing_zeros() as usize;
                return Err(DigraphError::VertexOutOfRange { vertex: j, order: n });
            }
            if row >> i & 1 == 1 {
                return Err(DigraphError::SelfLoop { vertex: i });
            }
        }
        Ok(DenseDigraph { n, rows: rows.to_vec() })
    }

    /// Builds a digraph from ordered pairs. Duplicates are idempotent.
    pub fn from_arc_list(n: usize, arcs: &[(usize, usize)]) -> Result<Self, DigraphError> {
        let mut d = DenseDigraph::empty(n)?;
        for &(i, j) in arcs {
            d.try_add_arc(i, j)?;
        }
        Ok(d)
    }

    /// Bidirected complete digraph `K_n`.
    pub fn complete(n: usize) -> Result<Self, DigraphError> {
        check_order(n)?;
        let full = full_mask(n);
        let rows = (0..n).map(|i| full & !(1u64 << i)).collect();
        Ok(DenseDigraph { n, rows })
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn directed_cycle(n: usize) -> Result<Self, DigraphError> {
        if n < 2 {
            return Err(DigraphError::Parameter(format!(
                "directed cycle needs at least 2 vertices, got {n}"
            )));
        }
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        DenseDigraph::from_arc_list(n, &arcs)
    }

    /// Undirected cycle `C_n` as a symmetric digraph.
    pub fn cycle_graph(n: usize) -> Result<Self, DigraphError> {
        if n < 3 {
            return Err(DigraphError::Parameter(format!(
                "cycle graph needs at least 3 vertices, got {n}"
            )));
        }
        let mut d = DenseDigraph::empty(n)?;
        for i in 0..n {
            d.add_edge(i, (i + 1) % n);
        }
        Ok(d)
    }

    /// Bidirected complete bipartite digraph with classes `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self, DigraphError> {
        let n = a + b;
        check_order(n)?;
        let first = full_mask(a);
        let second = full_mask(n) & !first;
        let rows = (0..n).map(|i| if i < a { second } else { first }).collect();
        Ok(DenseDigraph { n, rows })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn out_row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    /// In-neighbourhood of `v` as a mask.
    pub fn in_row(&self, v: usize) -> u64 {
        let bit = 1u64 << v;
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, &r)| r & bit != 0)
            .fold(0, |acc, (u, _)| acc | 1u64 << u)
    }

    #[inline]
    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.rows[i] >> j & 1 == 1
    }

    pub(crate) fn try_add_arc(&mut self, i: usize, j: usize) -> Result<(), DigraphError> {
        for v in [i, j] {
            if v >= self.n {
                return Err(DigraphError::VertexOutOfRange {
                    vertex: v,
                    order: self.n,
                });
            }
        }
        if i == j {
            return Err(DigraphError::SelfLoop { vertex: i });
        }
        self.rows[i] |= 1u64 << j;
        Ok(())
    }

    // Internal builders only call these with validated indices.
    pub(crate) fn add_arc(&mut self, i: usize, j: usize) {
        debug_assert!(i != j && i < self.n && j < self.n);
        self.rows[i] |= 1u64 << j;
    }

    pub(crate) fn add_edge(&mut self, i: usize, j: usize) {
        self.add_arc(i, j);
        self.add_arc(j, i);
    }

    pub(crate) fn remove_arc(&mut self, i: usize, j: usize) {
        self.rows[i] &= !(1u64 << j);
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| Bits(r).map(move |j| (i, j)))
    }

    pub fn arc_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Number of undirected edges, defined only for symmetric digraphs.
    pub fn edge_count(&self) -> Option<usize> {
        self.is_symmetric().then(|| self.arc_count() / 2)
    }

    pub fn outdeg(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn indeg(&self, v: usize) -> usize {
        let bit = 1u64 << v;
        self.rows.iter().filter(|&&r| r & bit != 0).count()
    }

    pub fn total_degree(&self, v: usize) -> usize {
        self.outdeg(v) + self.indeg(v)
    }

    /// Transposed rows: `cols[j]` has bit `i` iff `i -> j`.
    pub fn in_rows(&self) -> Vec<u64> {
        transpose(&self.rows, self.n)
    }

    pub fn is_symmetric(&self) -> bool {
        self.in_rows() == self.rows
    }

    pub fn complement(&self) -> DenseDigraph {
        let full = full_mask(self.n);
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &r)| !r & full & !(1u64 << i))
            .collect();
        DenseDigraph { n: self.n, rows }
    }

    pub fn reverse(&self) -> DenseDigraph {
        DenseDigraph {
            n: self.n,
            rows: self.in_rows(),
        }
    }

    /// Arc-wise intersection; vertices are identified by index.
    pub fn intersect(&self, other: &DenseDigraph) -> Result<DenseDigraph, DigraphError> {
        if self.n != other.n {
            return Err(DigraphError::OrderMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect();
        Ok(DenseDigraph { n: self.n, rows })
    }

    /// Induced subdigraph on `keep` (a vertex mask), indices compacted in
    /// increasing order.
    pub fn induced(&self, keep: u64) -> Result<DenseDigraph, DigraphError> {
        let keep = keep & full_mask(self.n);
        let kept: Vec<usize> = Bits(keep).collect();
        if kept.is_empty() {
            return Err(DigraphError::Parameter(
                "induced subdigraph must keep at least one vertex".into(),
            ));
        }
        let rows = kept.iter().map(|&v| compress_bits(self.rows[v], keep)).collect();
        Ok(DenseDigraph { n: kept.len(), rows })
    }

    pub fn remove_vertex(&self, v: usize) -> Result<DenseDigraph, DigraphError> {
        if v >= self.n {
            return Err(DigraphError::VertexOutOfRange {
                vertex: v,
                order: self.n,
            });
        }
        if self.n == 1 {
            return Err(DigraphError::Parameter("cannot remove the only vertex".into()));
        }
        self.induced(full_mask(self.n) & !(1u64 << v))
    }

    /// Relabels so that old vertex `perm[k]` becomes new vertex `k`.
    pub fn relabel(&self, perm: &[usize]) -> Result<DenseDigraph, DigraphError> {
        if perm.len() != self.n {
            return Err(DigraphError::Parameter(format!(
                "permutation has length {}, order is {}",
                perm.len(),
                self.n
            )));
        }
        let mut position = vec![usize::MAX; self.n];
        for (k, &old) in perm.iter().enumerate() {
            if old >= self.n || position[old] != usize::MAX {
                return Err(DigraphError::Parameter("relabeling is not a permutation".into()));
            }
            position[old] = k;
        }
        let rows = perm
            .iter()
            .map(|&old| Bits(self.rows[old]).fold(0u64, |acc, j| acc | 1u64 << position[j]))
            .collect();
        Ok(DenseDigraph { n: self.n, rows })
    }

    /// Replaces each target vertex by a copy of its substitute digraph.
    ///
    /// Copies are laid out in place: vertex `v` becomes a block of
    /// `H.order()` consecutive vertices at `v`'s position. A copy vertex
    /// inherits exactly `v`'s arcs to and from the rest of the digraph; two
    /// copies of adjacent targets are joined in the original direction(s);
    /// copies of non-adjacent targets stay non-adjacent.
    pub fn blow_up(&self, targets: &[(usize, DenseDigraph)]) -> Result<DenseDigraph, DigraphError> {
        let mut substitute: Vec<Option<&DenseDigraph>> = vec![None; self.n];
        for (v, h) in targets {
            if *v >= self.n {
                return Err(DigraphError::VertexOutOfRange {
                    vertex: *v,
                    order: self.n,
                });
            }
            if substitute[*v].is_some() {
                return Err(DigraphError::DuplicateTarget { vertex: *v });
            }
            substitute[*v] = Some(h);
        }
        let sizes: Vec<usize> = substitute.iter().map(|h| h.map_or(1, |h| h.order())).collect();
        let total: usize = sizes.iter().sum();
        check_order(total)?;
        let mut start = Vec::with_capacity(self.n);
        let mut acc = 0;
        for &s in &sizes {
            start.push(acc);
            acc += s;
        }
        let block = |v: usize| full_mask(sizes[v]) << start[v];
        let mut rows = vec![0u64; total];
        for v in 0..self.n {
            let external = Bits(self.rows[v]).fold(0u64, |m, w| m | block(w));
            for k in 0..sizes[v] {
                let internal = substitute[v].map_or(0, |h| h.rows[k] << start[v]);
                rows[start[v] + k] = external | internal;
            }
        }
        Ok(DenseDigraph { n: total, rows })
    }

    /// Proper 2-colouring of the underlying undirected graph, if one exists.
    ///
    /// Each weak component is coloured by BFS from its lowest vertex, which
    /// goes to the first class.
    pub fn is_bipartite(&self) -> Option<VertexPartition> {
        let und: Vec<u64> = self.rows.iter().zip(self.in_rows()).map(|(o, i)| o | i).collect();
        let mut colored = 0u64;
        let mut first = 0u64;
        for root in 0..self.n {
            if colored >> root & 1 == 1 {
                continue;
            }
            colored |= 1u64 << root;
            first |= 1u64 << root;
            let mut queue = vec![root];
            while let Some(u) = queue.pop() {
                let u_first = first >> u & 1 == 1;
                for w in Bits(und[u]) {
                    if colored >> w & 1 == 1 {
                        if (first >> w & 1 == 1) == u_first {
                            return None;
                        }
                    } else {
                        colored |= 1u64 << w;
                        if !u_first {
                            first |= 1u64 << w;
                        }
                        queue.push(w);
                    }
                }
            }
        }
        Some(VertexPartition { n: self.n, first })
    }

    /// Drops every arc inside a class of `partition`.
    pub fn restrict_to_partition(&self, partition: &VertexPartition) -> Result<DenseDigraph, DigraphError> {
        if partition.order() != self.n {
            return Err(DigraphError::OrderMismatch {
                left: self.n,
                right: partition.order(),
            });
        }
        let first = partition.first();
        let second = partition.second();
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &r)| if first >> i & 1 == 1 { r & second } else { r & first })
            .collect();
        Ok(DenseDigraph { n: self.n, rows })
    }

    /// `.adm` body rows, one `'0'/'1'` string per vertex.
    pub fn bit_rows(&self) -> impl Iterator<Item = String> + '_ {
        self.rows
            .iter()
            .map(move |&r| (0..self.n).map(|j| if r >> j & 1 == 1 { '1' } else { '0' }).collect())
    }
}

impl fmt::Debug for DenseDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DenseDigraph(n={}, arcs=[", self.n)?;
        for (k, (i, j)) in self.arcs().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}->{j}")?;
        }
        write!(f, "])")
    }
}

/// Lexicographic order on the row-major adjacency bit string (column 0
/// first), after ordering by vertex count.
impl Ord for DenseDigraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n.cmp(&other.n).then_with(|| {
            for (&a, &b) in self.rows.iter().zip(&other.rows) {
                let c = cmp_row_bits(a, b);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for DenseDigraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares two rows as bit strings read from column 0 upwards.
#[inline]
pub fn cmp_row_bits(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        Ordering::Equal
    } else if a >> diff.trailing_zeros() & 1 == 1 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Which side of a bipartition a vertex is on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexPartition {
    n: usize,
    first: u64,
}

impl VertexPartition {
    pub fn from_first_class(n: usize, first: u64) -> Result<Self, DigraphError> {
        check_order(n)?;
        if first & !full_mask(n) != 0 {
            return Err(DigraphError::Parameter(
                "partition mentions a vertex outside the digraph".into(),
            ));
        }
        Ok(VertexPartition { n, first })
    }

    pub fn from_sides(sides: &[Side]) -> Result<Self, DigraphError> {
        let first = sides
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Side::First)
            .fold(0u64, |m, (i, _)| m | 1u64 << i);
        VertexPartition::from_first_class(sides.len(), first)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn first(&self) -> u64 {
        self.first
    }

    pub fn second(&self) -> u64 {
        full_mask(self.n) & !self.first
    }

    pub fn side(&self, v: usize) -> Side {
        if self.first >> v & 1 == 1 {
            Side::First
        } else {
            Side::Second
        }
    }

    /// Size of the class not containing `v`.
    pub fn opposite_size(&self, v: usize) -> usize {
        match self.side(v) {
            Side::First => self.second().count_ones() as usize,
            Side::Second => self.first.count_ones() as usize,
        }
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.first.count_ones() as usize, self.second().count_ones() as usize)
    }

    /// True iff every arc of `d` joins the two classes.
    pub fn is_proper_for(&self, d: &DenseDigraph) -> bool {
        d.order() == self.n
            && d.rows().iter().enumerate().all(|(i, &r)| {
                let own = if self.first >> i & 1 == 1 {
                    self.first
                } else {
                    self.second()
                };
                r & own == 0
            })
    }
}

fn check_order(n: usize) -> Result<(), DigraphError> {
    if n == 0 || n > MAX_ORDER {
        Err(DigraphError::Order { order: n })
    } else {
        Ok(())
    }
}

/// Transposes `n` rows of an adjacency bit matrix.
pub fn transpose(rows: &[u64], n: usize) -> Vec<u64> {
    let mut cols = vec![0u64; n];
    for (i, &r) in rows.iter().enumerate() {
        for j in Bits(r) {
            cols[j] |= 1u64 << i;
        }
    }
    cols
}

/// Packs the bits of `value` selected by `keep` into the low bits.
fn compress_bits(value: u64, keep: u64) -> u64 {
    Bits(keep)
        .enumerate()
        .filter(|&(_, b)| value >> b & 1 == 1)
        .fold(0u64, |acc, (k, _)| acc | 1u64 << k)
}
