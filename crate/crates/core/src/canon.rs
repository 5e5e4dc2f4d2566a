//! Exact canonical labeling for small digraphs.
//!
//! The canonical form is the relabeling whose adjacency matrix, read row by
//! row with column 0 first, is lexicographically smallest. The search builds
//! the labeling one row at a time over an ordered partition of the
//! still-unlabeled vertices: choosing the vertex for label `k` fixes row `k`
//! completely once every later cell is split non-neighbours first, so only
//! candidates producing the smallest row are branched on. Two candidates
//! that are twins (swapping them is an automorphism) lead to identical
//! subtrees and only one is explored.

use crate::digraph::DenseDigraph;
use crate::error::DigraphError;

/// Largest order accepted by [`canonical_form`].
pub const CANON_LIMIT: usize = 12;

/// Returns the canonical representative of `d`'s isomorphism class.
pub fn canonical_form(d: &DenseDigraph) -> Result<DenseDigraph, DigraphError> {
    let n = d.order();
    if n > CANON_LIMIT {
        return Err(DigraphError::OrderLimit {
            order: n,
            limit: CANON_LIMIT,
            operation: "canonical_form",
        });
    }
    let rows = canonical_rows(d.rows(), n);
    DenseDigraph::from_rows(n, &rows)
}

/// Isomorphism test by canonical-form equality.
pub fn is_isomorphic(a: &DenseDigraph, b: &DenseDigraph) -> Result<bool, DigraphError> {
    for d in [a, b] {
        if d.order() > CANON_LIMIT {
            return Err(DigraphError::OrderLimit {
                order: d.order(),
                limit: CANON_LIMIT,
                operation: "is_isomorphic",
            });
        }
    }
    if a.order() != b.order() || a.arc_count() != b.arc_count() {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

/// Canonical rows for raw out-rows; callers guarantee `n <= CANON_LIMIT`.
pub(crate) fn canonical_rows(rows: &[u64], n: usize) -> Vec<u64> {
    debug_assert!(n <= CANON_LIMIT);
    if n == 0 {
        return Vec::new();
    }
    let mut search = Search {
        n,
        rows,
        cols: crate::digraph::transpose(rows, n),
        labels: Vec::with_capacity(n),
        codes: Vec::with_capacity(n),
        best_codes: Vec::new(),
        best_labels: Vec::new(),
    };
    let cells = vec![(0..n).collect::<Vec<_>>()];
    search.descend(cells);
    let labels = &search.best_labels;
    let mut position = vec![0usize; n];
    for (k, &v) in labels.iter().enumerate() {
        position[v] = k;
    }
    labels
        .iter()
        .map(|&v| crate::digraph::Bits(rows[v]).fold(0u64, |acc, w| acc | 1u64 << position[w]))
        .collect()
}

struct Search<'a> {
    n: usize,
    rows: &'a [u64],
    cols: Vec<u64>,
    labels: Vec<usize>,
    // row k encoded with column j at bit n-1-j, so integer order is row order
    codes: Vec<u64>,
    best_codes: Vec<u64>,
    best_labels: Vec<usize>,
}

impl Search<'_> {
    /// Row code of candidate `x` for label `k = labels.len()`, given the
    /// cells that will follow it.
    fn code(&self, x: usize, rest: &[Vec<usize>]) -> u64 {
        let n = self.n;
        let row = self.rows[x];
        let mut code = 0u64;
        for (j, &l) in self.labels.iter().enumerate() {
            if row >> l & 1 == 1 {
                code |= 1u64 << (n - 1 - j);
            }
        }
        let mut pos = self.labels.len() + 1;
        for cell in rest {
            let members = cell.iter().filter(|&&y| y != x);
            let size = members.clone().count();
            let ones = members.filter(|&&y| row >> y & 1 == 1).count();
            for p in pos + size - ones..pos + size {
                code |= 1u64 << (n - 1 - p);
            }
            pos += size;
        }
        code
    }

    fn twins(&self, x: usize, y: usize) -> bool {
        let mask = !(1u64 << x | 1u64 << y);
        let xy = self.rows[x] >> y & 1;
        let yx = self.rows[y] >> x & 1;
        xy == yx && self.rows[x] & mask == self.rows[y] & mask && self.cols[x] & mask == self.cols[y] & mask
    }

    /// Compares the current prefix extended by `code` with the best
    /// matrix's prefix of the same length.
    fn prefix_cmp(&self, code: u64) -> std::cmp::Ordering {
        let k = self.codes.len();
        self.codes
            .iter()
            .chain(std::iter::once(&code))
            .cmp(self.best_codes[..=k].iter())
    }

    fn descend(&mut self, cells: Vec<Vec<usize>>) {
        let k = self.labels.len();
        if k == self.n {
            if self.best_codes.is_empty() || self.codes < self.best_codes {
                self.best_codes = self.codes.clone();
                self.best_labels = self.labels.clone();
            }
            return;
        }
        let first = &cells[0];
        let mut tried: Vec<usize> = Vec::new();
        let mut scored: Vec<(u64, usize)> = Vec::new();
        for &x in first {
            if tried.iter().any(|&y| self.twins(x, y)) {
                continue;
            }
            tried.push(x);
            scored.push((self.code(x, &cells), x));
        }
        let min = scored.iter().map(|&(c, _)| c).min().expect("non-empty cell");
        for (code, x) in scored {
            if code != min {
                continue;
            }
            if !self.best_codes.is_empty() && self.prefix_cmp(code).is_gt() {
                return;
            }
            let row = self.rows[x];
            let mut next = Vec::with_capacity(cells.len() + 1);
            for cell in &cells {
                let (zeros, ones): (Vec<usize>, Vec<usize>) =
                    cell.iter().filter(|&&y| y != x).partition(|&&y| row >> y & 1 == 0);
                if !zeros.is_empty() {
                    next.push(zeros);
                }
                if !ones.is_empty() {
                    next.push(ones);
                }
            }
            self.labels.push(x);
            self.codes.push(code);
            self.descend(next);
            self.labels.pop();
            self.codes.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Minimum over all n! relabelings, the definition itself.
    fn brute_force(d: &DenseDigraph) -> DenseDigraph {
        let n = d.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = d.relabel(&perm).unwrap();
        heap_permutations(&mut perm, n, &mut |p| {
            let c = d.relabel(p).unwrap();
            if c < best {
                best = c;
            }
        });
        best
    }

    fn heap_permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            f(p);
            return;
        }
        for i in 0..k {
            heap_permutations(p, k - 1, f);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }

    fn random_digraph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> DenseDigraph {
        let mut d = DenseDigraph::empty(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(density) {
                    d.add_arc(i, j);
                }
            }
        }
        d
    }

    #[test]
    fn cycle_relabelings_agree() {
        let c3 = DenseDigraph::directed_cycle(3).unwrap();
        let r = c3.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(canonical_form(&c3).unwrap(), canonical_form(&r).unwrap());
        let p3 = DenseDigraph::from_arc_list(3, &[(2, 1), (1, 0)]).unwrap();
        assert_ne!(canonical_form(&c3).unwrap(), canonical_form(&p3).unwrap());
    }

    #[test]
    fn matches_brute_force_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let density = rng.gen_range(0.1..0.9);
            let d = random_digraph(&mut rng, n, density);
            assert_eq!(canonical_form(&d).unwrap(), brute_force(&d), "{d:?}");
        }
    }

    #[test]
    fn symmetric_inputs_match_brute_force() {
        let k33 = DenseDigraph::complete_bipartite(3, 3).unwrap();
        assert_eq!(canonical_form(&k33).unwrap(), brute_force(&k33));
        let c6 = DenseDigraph::cycle_graph(6).unwrap();
        assert_eq!(canonical_form(&c6).unwrap(), brute_force(&c6));
        let e = DenseDigraph::empty(5).unwrap();
        assert_eq!(canonical_form(&e).unwrap(), e);
    }

    #[test]
    fn invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let density = rng.gen_range(0.2..0.8);
            let d = random_digraph(&mut rng, n, density);
            let c = canonical_form(&d).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            for _ in 0..20 {
                perm.shuffle(&mut rng);
                let r = d.relabel(&perm).unwrap();
                assert_eq!(canonical_form(&r).unwrap(), c);
            }
        }
    }

    #[test]
    fn large_symmetric_inputs_finish() {
        let k12 = DenseDigraph::complete(12).unwrap();
        assert_eq!(canonical_form(&k12).unwrap(), k12);
        let c12 = DenseDigraph::directed_cycle(12).unwrap();
        let shifted = c12.relabel(&[5, 6, 7, 8, 9, 10, 11, 0, 1, 2, 3, 4]).unwrap();
        assert!(is_isomorphic(&c12, &shifted).unwrap());
        let k66 = DenseDigraph::complete_bipartite(6, 6).unwrap();
        assert_eq!(canonical_form(&k66).unwrap().arc_count(), 72);
    }

    #[test]
    fn order_limit() {
        let d = DenseDigraph::empty(13).unwrap();
        assert!(matches!(
            canonical_form(&d),
            Err(DigraphError::OrderLimit { order: 13, .. })
        ));
    }
}
