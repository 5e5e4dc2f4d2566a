//! Integer and structural procedures from the size proofs: layer-profile
//! accounting, the chain maximization, bidirected-biclique extraction in
//! bipartite digraphs and the distance-preserving vertex-removal predicate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{Bits, DenseDigraph, VertexPartition};
use crate::metrics::{distance_matrix, is_strong, metric_summary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("layer profile must start with n0 = 1, found {0}")]
    FirstLayer(usize),
    #[error("layer {0} is empty")]
    EmptyLayer(usize),
    #[error("layer profile needs at least one layer after n0")]
    NoLayers,
    #[error("need n > r >= 3, got n = {n}, r = {r}")]
    ChainDomain { n: usize, r: usize },
    #[error("partition is not a proper bipartition of the digraph")]
    NotBipartite,
    #[error("t must be at least 1")]
    ZeroT,
    #[error("digraph is not strong")]
    NotStrong,
    #[error("vertex {vertex} out of range for order {order}")]
    Vertex { vertex: usize, order: usize },
    #[error("cannot remove a vertex from a digraph of order {0}")]
    TooSmall(usize),
}

/// Distance-layer sizes `n0 = 1, n1, .., nr` seen from one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayerProfile(Vec<usize>);

impl LayerProfile {
    pub fn new(sizes: Vec<usize>) -> Result<Self, StructureError> {
        match sizes.first() {
            None => return Err(StructureError::NoLayers),
            Some(&n0) if n0 != 1 => return Err(StructureError::FirstLayer(n0)),
            _ => {}
        }
        if sizes.len() < 2 {
            return Err(StructureError::NoLayers);
        }
        if let Some(i) = sizes.iter().position(|&x| x == 0) {
            return Err(StructureError::EmptyLayer(i));
        }
        Ok(LayerProfile(sizes))
    }

    /// Profile `1 | tail`.
    pub fn from_tail(tail: &[usize]) -> Result<Self, StructureError> {
        let mut sizes = Vec::with_capacity(tail.len() + 1);
        sizes.push(1);
        sizes.extend_from_slice(tail);
        LayerProfile::new(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.len() - 1
    }

    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn n_even(&self) -> usize {
        self.0.iter().step_by(2).sum()
    }

    pub fn n_odd(&self) -> usize {
        self.0.iter().skip(1).step_by(2).sum()
    }
}

/// `(n_e - 1) n_o + sum_i n_i n_{i+1}`.
pub fn layer_profile_size(p: &LayerProfile) -> usize {
    let chain: usize = p.0.windows(2).map(|w| w[0] * w[1]).sum();
    (p.n_even() - 1) * p.n_odd() + chain
}

/// `n1 + sum_{i=1}^{r-1} n_i n_{i+1}` for a tail `n1..nr`.
pub fn chain_value(tail: &[usize]) -> usize {
    tail[0] + tail.windows(2).map(|w| w[0] * w[1]).sum::<usize>()
}

/// Closed-form optimum of [`chain_value`]: `r + 2(n-r-1) + floor((n-r-1)^2/4)`.
pub fn claim_bound(n: usize, r: usize) -> usize {
    let x = n - r - 1;
    r + 2 * x + x * x / 4
}

/// All compositions of `total` into `parts` positive parts, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=total - (parts - 1) {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts >= 1 && total >= parts {
        go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainOptimum {
    pub value: usize,
    /// Optimal tails `n1..nr`, in lexicographic order.
    pub optima: Vec<Vec<usize>>,
    /// Every optimum has the characterized shape.
    pub claim_holds: bool,
}

/// Brute-force maximization of [`chain_value`] over tails summing to `n - 1`.
pub fn maximize_chain(n: usize, r: usize) -> Result<ChainOptimum, StructureError> {
    if r < 3 || n <= r {
        return Err(StructureError::ChainDomain { n, r });
    }
    let comps = compositions(n - 1, r);
    let value = comps.iter().map(|c| chain_value(c)).max().expect("n > r");
    let optima: Vec<Vec<usize>> = comps.into_iter().filter(|c| chain_value(c) == value).collect();
    let claim_holds = optima.iter().all(|t| has_claim_shape(t));
    Ok(ChainOptimum {
        value,
        optima,
        claim_holds,
    })
}

/// `nr = 1` and some `j` in `1..=r-2` has all layers outside `j, j+1, j+2`
/// equal to 1 and `|n_{j+1} + 1 - (n_j + n_{j+2})| <= 1`.
pub fn has_claim_shape(tail: &[usize]) -> bool {
    let r = tail.len();
    if r < 3 || tail[r - 1] != 1 {
        return false;
    }
    (0..r - 2).any(|j| {
        tail.iter()
            .enumerate()
            .all(|(i, &x)| (j..=j + 2).contains(&i) || x == 1)
            && (tail[j + 1] + 1).abs_diff(tail[j] + tail[j + 2]) <= 1
    })
}

/// The characterized optimum set, generated directly from the shape rule.
pub fn claim_characterization(n: usize, r: usize) -> Result<BTreeSet<Vec<usize>>, StructureError> {
    if r < 3 || n <= r {
        return Err(StructureError::ChainDomain { n, r });
    }
    let mut out = BTreeSet::new();
    let triple = n - 1 - (r - 3);
    for j in 0..r - 2 {
        for a in 1..triple {
            for b in 1..triple - a {
                let c = triple - a - b;
                if (b + 1).abs_diff(a + c) > 1 || (j + 2 == r - 1 && c != 1) {
                    continue;
                }
                let mut tail = vec![1; r];
                tail[j] = a;
                tail[j + 1] = b;
                tail[j + 2] = c;
                out.insert(tail);
            }
        }
    }
    Ok(out)
}

/// Largest [`layer_profile_size`] over characterized tails whose classes
/// satisfy `|n_e - 1 - n_o| <= 1`.
pub fn balanced_profile_maximum(n: usize, r: usize) -> Result<Option<usize>, StructureError> {
    let tails = claim_characterization(n, r)?;
    let mut best = None;
    for tail in tails {
        let p = LayerProfile::from_tail(&tail)?;
        if (p.n_even() - 1).abs_diff(p.n_odd()) <= 1 {
            let v = layer_profile_size(&p);
            best = Some(best.map_or(v, |b: usize| b.max(v)));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicliqueExtraction {
    /// Vertices of the first class, `k` of them.
    pub first: Vec<usize>,
    /// Vertices of the second class, `k` of them.
    pub second: Vec<usize>,
    pub k: usize,
    pub seeds: (usize, usize),
    /// Average total degree at least `n - t` and `n > 9t`.
    pub hypotheses_hold: bool,
    /// `k >= n / (18t)` as rationals.
    pub guarantee_met: bool,
}

/// The alternating pruning procedure: seed each class with all of its
/// high-degree vertices, then alternately fix an unfixed vertex
/// of one seed set and drop every vertex of the other set that is not joined
/// to it in both directions. Survivors form a bidirected biclique.
pub fn extract_bidirected_biclique(
    d: &DenseDigraph,
    partition: &VertexPartition,
    t: usize,
) -> Result<BicliqueExtraction, StructureError> {
    if t == 0 {
        return Err(StructureError::ZeroT);
    }
    if !partition.is_proper_for(d) {
        return Err(StructureError::NotBipartite);
    }
    let n = d.order();
    let cols = d.in_rows();
    let both: Vec<u64> = d.rows().iter().zip(&cols).map(|(a, b)| a & b).collect();
    let (size1, size2) = partition.sizes();
    let seed = |class: u64, other_size: usize| -> u64 {
        let threshold = (2 * other_size + 1).saturating_sub(3 * t);
        Bits(class)
            .filter(|&v| d.total_degree(v) >= threshold)
            .fold(0u64, |m, v| m | 1u64 << v)
    };
    let mut s = [seed(partition.first(), size2), seed(partition.second(), size1)];
    let seeds = (s[0].count_ones() as usize, s[1].count_ones() as usize);
    let mut fixed = [0u64; 2];
    let mut side = 0;
    loop {
        let unfixed = s[side] & !fixed[side];
        if unfixed == 0 {
            break;
        }
        let v = unfixed.trailing_zeros() as usize;
        fixed[side] |= 1u64 << v;
        s[1 - side] &= both[v];
        side = 1 - side;
    }
    let k = s[0].count_ones().min(s[1].count_ones()) as usize;
    let first: Vec<usize> = Bits(s[0]).take(k).collect();
    let second: Vec<usize> = Bits(s[1]).take(k).collect();
    let hypotheses_hold = 2 * d.arc_count() >= n * n.saturating_sub(t) && n > 9 * t;
    Ok(BicliqueExtraction {
        first,
        second,
        k,
        seeds,
        hypotheses_hold,
        guarantee_met: 18 * t * k >= n,
    })
}

/// True iff every listed pair is joined in both directions.
pub fn is_bidirected_biclique(d: &DenseDigraph, first: &[usize], second: &[usize]) -> bool {
    first
        .iter()
        .all(|&u| second.iter().all(|&w| d.has_arc(u, w) && d.has_arc(w, u)))
}

/// Why removing a vertex is not distance preserving. Vertex indices are
/// those of the original digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RemovalWitness {
    NotStrong,
    RadiusChanged {
        before: u32,
        after: Option<u32>,
    },
    DistanceChanged {
        from: usize,
        to: usize,
        before: u32,
        after: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalCheck {
    pub preserving: bool,
    pub witness: Option<RemovalWitness>,
}

/// Whether `D \ v` is strong with the same outradius and unchanged
/// distances between the remaining vertices.
pub fn is_distance_preserving_removal(d: &DenseDigraph, v: usize) -> Result<RemovalCheck, StructureError> {
    let n = d.order();
    if v >= n {
        return Err(StructureError::Vertex { vertex: v, order: n });
    }
    if n < 2 {
        return Err(StructureError::TooSmall(n));
    }
    if !is_strong(d) {
        return Err(StructureError::NotStrong);
    }
    let fail = |w| {
        Ok(RemovalCheck {
            preserving: false,
            witness: Some(w),
        })
    };
    let smaller = d.remove_vertex(v).map_err(|_| StructureError::TooSmall(n))?;
    if !is_strong(&smaller) {
        return fail(RemovalWitness::NotStrong);
    }
    let before = distance_matrix(d);
    let after = distance_matrix(&smaller);
    let original = |i: usize| if i < v { i } else { i + 1 };
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let (a, b) = (before.get(original(i), original(j)), after.get(i, j));
            if a != b {
                return fail(RemovalWitness::DistanceChanged {
                    from: original(i),
                    to: original(j),
                    before: a,
                    after: b,
                });
            }
        }
    }
    let r_before = metric_summary(d).rad_out.expect("strong digraph");
    let r_after = metric_summary(&smaller).rad_out;
    if r_after != Some(r_before) {
        return fail(RemovalWitness::RadiusChanged {
            before: r_before,
            after: r_after,
        });
    }
    Ok(RemovalCheck {
        preserving: true,
        witness: None,
    })
}

/// Repeatedly removes the lowest-index distance-preserving vertex until
/// none is left. Returns the final digraph and the removed vertices, each
/// indexed in the digraph it was removed from.
pub fn reduce_by_removals(d: &DenseDigraph) -> Result<(DenseDigraph, Vec<usize>), StructureError> {
    let mut current = d.clone();
    let mut removed = Vec::new();
    'outer: while current.order() > 1 {
        for v in 0..current.order() {
            if is_distance_preserving_removal(&current, v)?.preserving {
                current = current.remove_vertex(v).expect("order at least 2");
                removed.push(v);
                continue 'outer;
            }
        }
        break;
    }
    Ok((current, removed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{d_2r_r_1, d_nrs};

    #[test]
    fn layer_profile_examples() {
        let p = LayerProfile::from_tail(&[1, 4, 3, 1]).unwrap();
        assert_eq!((p.n_even(), p.n_odd()), (6, 4));
        // (6 - 1) * 4 + (1 + 4 + 12 + 3)
        assert_eq!(layer_profile_size(&p), 40);
        for n in 4..12 {
            let p = LayerProfile::from_tail(&[n - 2, 1]).unwrap();
            assert_eq!(layer_profile_size(&p), 3 * (n - 2));
        }
        assert_eq!(LayerProfile::new(vec![1, 2, 0, 1]), Err(StructureError::EmptyLayer(2)));
        assert_eq!(LayerProfile::new(vec![2, 1]), Err(StructureError::FirstLayer(2)));
    }

    #[test]
    fn chain_examples() {
        let opt = maximize_chain(10, 4).unwrap();
        assert_eq!(opt.value, 20);
        for tail in [[1, 3, 4, 1], [1, 4, 3, 1], [2, 3, 3, 1], [3, 3, 2, 1], [2, 4, 2, 1]] {
            assert!(opt.optima.contains(&tail.to_vec()));
        }
        assert!(opt.claim_holds);
        for r in 3..10 {
            let o = maximize_chain(r + 1, r).unwrap();
            assert_eq!(o.value, r);
            assert_eq!(claim_bound(r + 1, r), r);
            assert_eq!(o.optima, vec![vec![1; r]]);
        }
        assert_eq!(maximize_chain(12, 5).unwrap().value, 26);
        assert_eq!(claim_bound(12, 5), 26);
        assert!(maximize_chain(4, 4).is_err());
    }

    #[test]
    fn compositions_count() {
        // C(total-1, parts-1)
        assert_eq!(compositions(9, 4).len(), 56);
        assert_eq!(compositions(3, 4).len(), 0);
        assert_eq!(compositions(5, 1), vec![vec![5]]);
    }

    #[test]
    fn biclique_on_complete() {
        let k44 = DenseDigraph::complete_bipartite(4, 4).unwrap();
        let p = k44.is_bipartite().unwrap();
        let e = extract_bidirected_biclique(&k44, &p, 1).unwrap();
        assert_eq!(e.k, 4);
        assert!(is_bidirected_biclique(&k44, &e.first, &e.second));
    }

    #[test]
    fn biclique_with_missing_pair() {
        let mut d = DenseDigraph::complete_bipartite(6, 6).unwrap();
        d.remove_arc(0, 6);
        d.remove_arc(6, 0);
        let p = d.is_bipartite().unwrap();
        let e = extract_bidirected_biclique(&d, &p, 1).unwrap();
        assert!(e.k >= 5);
        assert!(is_bidirected_biclique(&d, &e.first, &e.second));
        assert_eq!(e.seeds, (6, 6));
    }

    #[test]
    fn biclique_errors() {
        let k3 = DenseDigraph::complete(3).unwrap();
        let p = VertexPartition::from_first_class(3, 1).unwrap();
        assert_eq!(
            extract_bidirected_biclique(&k3, &p, 1),
            Err(StructureError::NotBipartite)
        );
        let e = DenseDigraph::empty(4).unwrap();
        let p = VertexPartition::from_first_class(4, 0b11).unwrap();
        let out = extract_bidirected_biclique(&e, &p, 1).unwrap();
        assert_eq!(out.k, 0);
    }

    #[test]
    fn removal_examples() {
        let d = d_nrs(10, 3, 2).unwrap();
        assert!(is_distance_preserving_removal(&d, 0).unwrap().preserving);
        assert!(is_distance_preserving_removal(&d, 1).unwrap().preserving);
        let c5 = DenseDigraph::directed_cycle(5).unwrap();
        for v in 0..5 {
            let c = is_distance_preserving_removal(&c5, v).unwrap();
            assert_eq!(c.witness, Some(RemovalWitness::NotStrong));
        }
        for r in [3, 4] {
            let d = d_2r_r_1(r).unwrap();
            for v in 0..2 * r {
                assert!(!is_distance_preserving_removal(&d, v).unwrap().preserving);
            }
        }
        let p = DenseDigraph::from_arc_list(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(is_distance_preserving_removal(&p, 0), Err(StructureError::NotStrong));
    }
}
