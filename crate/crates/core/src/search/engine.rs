//! Row-by-row enumeration of labeled digraphs.
//!
//! A space fixes which columns each row may use (bipartite classes,
//! forward columns for symmetric spaces). Every row is drawn from a sorted
//! candidate list, so a position in the search is an index vector and the
//! traversal order is the lexicographic order of those vectors.

use serde::{Deserialize, Serialize};

use super::task::{BipartiteConstraint, Mode, SearchTask};
use crate::digraph::{full_mask, Bits};
use crate::metrics::{ecc_and_sum, rows_strong, UNREACHABLE};

const MAX_N: usize = 16;

/// Counters describing how candidates were discarded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruningStats {
    /// Row choices removed from candidate lists by outdegree caps.
    pub rows_filtered: u64,
    /// Partial assignments cut by total-degree caps.
    pub prefixes_pruned: u64,
    /// Complete digraphs rejected because their bipartition was counted in
    /// another space.
    pub rejected_duplicate: u64,
    pub rejected_not_strong: u64,
    pub rejected_metric: u64,
    pub accepted: u64,
}

impl PruningStats {
    pub fn add(&mut self, o: &PruningStats) {
        self.rows_filtered += o.rows_filtered;
        self.prefixes_pruned += o.prefixes_pruned;
        self.rejected_duplicate += o.rejected_duplicate;
        self.rejected_not_strong += o.rejected_not_strong;
        self.rejected_metric += o.rejected_metric;
        self.accepted += o.accepted;
    }
}

/// A complete digraph that satisfied every constraint.
pub struct Leaf<'a> {
    pub n: usize,
    pub rows: &'a [u64],
    pub cols: &'a [u64],
    pub arcs: u32,
    /// Present when the task requires strong connectivity.
    pub wiener: Option<u64>,
    /// First class of the space, for bipartite tasks.
    pub first_class: Option<u64>,
}

/// Folds accepted digraphs. Shards are merged in enumeration order.
pub trait Visitor: Send + Sized {
    fn visit(&mut self, leaf: &Leaf<'_>);
    fn merge(&mut self, later: Self);
}

/// Candidate rows and caps for one choice of bipartition.
#[derive(Debug, Clone)]
pub(crate) struct Space {
    pub first_class: Option<u64>,
    /// Set when several spaces share the task, so a digraph with more than
    /// one weak component must be claimed by exactly one of them.
    pub dedup_components: bool,
    pub candidates: Vec<Vec<u64>>,
    /// Upper bound on total degree per vertex; only used by BACKTRACKING.
    pub total_cap: Vec<u32>,
    /// Lower bound on final outdegree per vertex.
    pub min_out: Vec<u32>,
    pub rows_filtered: u64,
}

pub(crate) struct Plan {
    pub n: usize,
    pub symmetric: bool,
    pub strong: bool,
    pub backtracking: bool,
    pub rad_out_eq: Option<u32>,
    pub rad2_eq: Option<u32>,
    pub diameter_eq: Option<u32>,
    pub spaces: Vec<Space>,
}

/// Identifies a shard: a space and the index of its row-0 candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardKey {
    pub space: usize,
    pub row0: usize,
}

impl Plan {
    pub fn new(task: &SearchTask) -> Plan {
        let n = task.n;
        let c = &task.constraints;
        let firsts: Vec<Option<u64>> = match c.bipartite {
            None => vec![None],
            Some(BipartiteConstraint::Classes { p, .. }) => vec![Some(full_mask(p))],
            Some(BipartiteConstraint::Any) => (0..1u64 << (n - 1)).map(|rest| Some(1 | (rest << 1))).collect(),
        };
        let spaces = firsts.into_iter().map(|f| build_space(task, f)).collect();
        Plan {
            n,
            symmetric: c.symmetric,
            strong: c.strong,
            backtracking: task.mode == Mode::Backtracking,
            rad_out_eq: c.rad_out_eq,
            rad2_eq: c.rad2_eq,
            diameter_eq: c.diameter_eq,
            spaces,
        }
    }

    pub fn shards(&self) -> Vec<ShardKey> {
        self.spaces
            .iter()
            .enumerate()
            .flat_map(|(s, sp)| (0..sp.candidates[0].len()).map(move |r| ShardKey { space: s, row0: r }))
            .collect()
    }
}

fn build_space(task: &SearchTask, first: Option<u64>) -> Space {
    let n = task.n;
    let c = &task.constraints;
    let all = full_mask(n);
    let opp = |i: usize| match first {
        Some(f) if f >> i & 1 == 1 => all & !f,
        Some(f) => f,
        None => all & !(1u64 << i),
    };
    let strong_r = if c.strong { c.rad_out_eq } else { None };

    // Final outdegree caps that hold for every satisfying digraph.
    let out_cap: Vec<u32> = (0..n)
        .map(|i| {
            let o = opp(i).count_ones();
            let mut cap = o;
            if let Some(r) = strong_r {
                cap = cap.min((n as u32).saturating_sub(r));
                if first.is_some() {
                    // Odd positions 3, 5, .. on a shortest path to a far
                    // vertex lie in the opposite class and are not neighbours.
                    cap = cap.min(o.saturating_sub(r.div_ceil(2).saturating_sub(1)));
                }
            }
            cap
        })
        .collect();
    let min_out: Vec<u32> = vec![u32::from(c.strong); n];

    let total_cap: Vec<u32> = (0..n)
        .map(|i| {
            let o = opp(i).count_ones();
            let mut cap = 2 * o;
            if !c.strong {
                return cap;
            }
            let base = 2 * (n as u32 - 1);
            if let Some(r) = c.rad_out_eq {
                if r >= 2 {
                    cap = cap.min(base.saturating_sub(2 * r - 3));
                }
                if first.is_some() && r >= 4 && r % 2 == 0 {
                    cap = cap.min((2 * o).saturating_sub(r - 2));
                }
            }
            if let Some(q) = c.rad2_eq {
                if q >= 2 {
                    cap = cap.min(base.saturating_sub(q - 2));
                }
            }
            cap
        })
        .collect();

    let mut rows_filtered = 0u64;
    let candidates = (0..n)
        .map(|i| {
            let allowed = if c.symmetric {
                opp(i) & !full_mask(i + 1)
            } else {
                opp(i)
            };
            let mut list = submasks(allowed);
            if task.mode != Mode::Full && !c.symmetric {
                let before = list.len();
                list.retain(|m| {
                    let k = m.count_ones();
                    k >= min_out[i] && k <= out_cap[i]
                });
                rows_filtered += (before - list.len()) as u64;
            }
            list
        })
        .collect();

    let total_cap = if task.mode == Mode::Backtracking {
        if c.symmetric {
            // In a symmetric space the total degree is twice the degree.
            total_cap.iter().zip(&out_cap).map(|(&t, &o)| t.min(2 * o)).collect()
        } else {
            total_cap
        }
    } else {
        vec![u32::MAX; n]
    };
    Space {
        first_class: first,
        dedup_components: matches!(c.bipartite, Some(BipartiteConstraint::Any)),
        candidates,
        total_cap,
        min_out,
        rows_filtered,
    }
}

fn submasks(allowed: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(1usize << allowed.count_ones());
    let mut sub = allowed;
    loop {
        out.push(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & allowed;
    }
    out.reverse();
    out
}

/// Outcome of running a shard, possibly cut short by a leaf budget.
pub(crate) struct ShardRun {
    pub examined: u64,
    pub cursor: Vec<usize>,
    pub done: bool,
}

/// Enumerates one shard starting at `cursor` (indices for rows `1..n`).
/// `progress` is called every `interval` leaves with the next cursor; if
/// `budget` leaves have been examined the run stops there.
/// Called with the next cursor, the visitor, the stats and the leaf count.
pub(crate) type Progress<'a, V> = dyn FnMut(&[usize], &V, &PruningStats, u64) + 'a;

#[allow(clippy::too_many_arguments)]
pub(crate) fn run_shard<V: Visitor>(
    plan: &Plan,
    key: ShardKey,
    cursor: &[usize],
    visitor: &mut V,
    stats: &mut PruningStats,
    budget: Option<u64>,
    interval: u64,
    progress: &mut Progress<'_, V>,
) -> ShardRun {
    let n = plan.n;
    let space = &plan.spaces[key.space];
    let cand = &space.candidates;
    let mut idx = [0usize; MAX_N];
    let mut rows = [0u64; MAX_N];
    // deg[d][j]: in-arcs of j (or back-edges, when symmetric) from rows 0..=d.
    let mut deg = [[0u32; MAX_N]; MAX_N];
    let mut examined = 0u64;
    let mut since = 0u64;

    idx[0] = key.row0;
    idx[1..n].copy_from_slice(&cursor[..n - 1]);

    // Rebuild rows along the cursor; `d` is the first depth to (re)validate.
    let mut d = 0usize;
    let mut resume_fixed = true;
    loop {
        // Try to place row d at idx[d] or the next acceptable candidate.
        let placed = loop {
            if idx[d] >= cand[d].len() {
                break false;
            }
            let choice = cand[d][idx[d]];
            let row = if plan.symmetric {
                let back = rows[..d]
                    .iter()
                    .enumerate()
                    .fold(0u64, |b, (i, r)| b | (r >> d & 1) << i);
                choice | back
            } else {
                choice
            };
            let ok = set_row(plan, space, &mut rows, &mut deg, d, row);
            if ok {
                break true;
            }
            stats.prefixes_pruned += 1;
            if d == 0 {
                break false;
            }
            idx[d] += 1;
            resume_fixed = false;
        };
        if !placed {
            if d <= 1 {
                return ShardRun {
                    examined,
                    cursor: vec![0; n - 1],
                    done: true,
                };
            }
            idx[d] = 0;
            d -= 1;
            idx[d] += 1;
            resume_fixed = false;
            continue;
        }
        if d + 1 < n {
            d += 1;
            if !resume_fixed {
                idx[d] = 0;
            }
            continue;
        }
        // Complete digraph.
        resume_fixed = false;
        examined += 1;
        evaluate(plan, space, &rows[..n], stats, visitor);
        idx[d] += 1;
        since += 1;
        let exhausted = budget.is_some_and(|b| examined >= b);
        if since >= interval || exhausted {
            since = 0;
            // Normalize the cursor so that it names the next leaf to visit.
            let mut next = idx;
            let mut k = n - 1;
            while k >= 1 && next[k] >= cand[k].len() {
                next[k] = 0;
                if k == 1 {
                    return ShardRun {
                        examined,
                        cursor: vec![0; n - 1],
                        done: true,
                    };
                }
                next[k - 1] += 1;
                k -= 1;
            }
            progress(&next[1..n], visitor, stats, examined);
            if exhausted {
                return ShardRun {
                    examined,
                    cursor: next[1..n].to_vec(),
                    done: false,
                };
            }
        }
    }
}

#[inline]
fn set_row(
    plan: &Plan,
    space: &Space,
    rows: &mut [u64; MAX_N],
    deg: &mut [[u32; MAX_N]; MAX_N],
    d: usize,
    row: u64,
) -> bool {
    rows[d] = row;
    let prev = if d == 0 { [0u32; MAX_N] } else { deg[d - 1] };
    let mut cur = prev;
    let fresh = if plan.symmetric { row & !full_mask(d + 1) } else { row };
    for j in Bits(fresh) {
        cur[j] += 1;
    }
    deg[d] = cur;
    if !plan.backtracking {
        return true;
    }
    let cap = &space.total_cap;
    let n = plan.n;
    let check = |j: usize| -> bool {
        let lb = if plan.symmetric {
            let k = if j <= d { rows[j].count_ones() } else { cur[j] };
            2 * k
        } else {
            let out = if j <= d { rows[j].count_ones() } else { space.min_out[j] };
            out + cur[j]
        };
        lb <= cap[j]
    };
    if !check(d) {
        return false;
    }
    for j in Bits(fresh & full_mask(n)) {
        if j != d && !check(j) {
            return false;
        }
    }
    true
}

fn evaluate<V: Visitor>(plan: &Plan, space: &Space, rows: &[u64], stats: &mut PruningStats, visitor: &mut V) {
    let n = plan.n;
    let all = full_mask(n);
    let mut cols = [0u64; MAX_N];
    for (i, &r) in rows.iter().enumerate() {
        for j in Bits(r) {
            cols[j] |= 1u64 << i;
        }
    }
    let cols = &cols[..n];

    if let Some(f) = space.first_class.filter(|_| space.dedup_components) {
        // Each weak component must have its lowest vertex in the first
        // class; otherwise the same digraph belongs to another space.
        let mut rest = all;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if f >> v & 1 == 0 {
                stats.rejected_duplicate += 1;
                return;
            }
            let mut seen = 1u64 << v;
            let mut frontier = seen;
            while frontier != 0 {
                let mut next = 0u64;
                for u in Bits(frontier) {
                    next |= rows[u] | cols[u];
                }
                frontier = next & !seen;
                seen |= next;
            }
            rest &= !seen;
        }
    }

    if plan.strong && (rows.iter().chain(cols).any(|&r| r == 0) || !rows_strong(rows, cols, n)) {
        stats.rejected_not_strong += 1;
        return;
    }

    let mut wiener = 0u64;
    let need_in = plan.rad2_eq.is_some();
    let mut min_out = UNREACHABLE;
    let mut min2 = UNREACHABLE;
    let mut max_out = 0u32;
    for v in 0..n {
        let (e, s) = ecc_and_sum(rows, n, v);
        wiener += s;
        if let Some(r) = plan.rad_out_eq {
            if e < r {
                stats.rejected_metric += 1;
                return;
            }
        }
        if let Some(dm) = plan.diameter_eq {
            if e > dm {
                stats.rejected_metric += 1;
                return;
            }
        }
        if need_in && e != UNREACHABLE {
            let (ei, _) = ecc_and_sum(cols, n, v);
            if ei != UNREACHABLE {
                let s2 = e + ei;
                if s2 < plan.rad2_eq.unwrap() {
                    stats.rejected_metric += 1;
                    return;
                }
                min2 = min2.min(s2);
            }
        }
        if e != UNREACHABLE {
            min_out = min_out.min(e);
            max_out = max_out.max(e);
        }
    }
    let fail = plan.rad_out_eq.is_some_and(|r| min_out != r)
        || plan.rad2_eq.is_some_and(|q| min2 != q)
        || plan.diameter_eq.is_some_and(|dm| max_out != dm);
    if fail {
        stats.rejected_metric += 1;
        return;
    }
    stats.accepted += 1;
    let arcs = rows.iter().map(|r| r.count_ones()).sum();
    visitor.visit(&Leaf {
        n,
        rows,
        cols,
        arcs,
        wiener: plan.strong.then_some(wiener),
        first_class: space.first_class,
    });
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::search::task::{Constraints, Objective};

    struct Count(u64);
    impl Visitor for Count {
        fn visit(&mut self, _: &Leaf<'_>) {
            self.0 += 1;
        }
        fn merge(&mut self, later: Self) {
            self.0 += later.0;
        }
    }

    fn count(task: &SearchTask) -> u64 {
        let plan = Plan::new(task);
        let mut total = 0;
        for key in plan.shards() {
            let mut c = Count(0);
            let mut st = PruningStats::default();
            let run = run_shard(
                &plan,
                key,
                &vec![0; task.n - 1],
                &mut c,
                &mut st,
                None,
                u64::MAX,
                &mut |_, _, _, _| {},
            );
            assert!(run.done);
            total += c.0;
        }
        total
    }

    #[test]
    fn counts_labeled_spaces() {
        let t = SearchTask::new(3, Constraints::default(), Objective::CountExtremal, Mode::Full);
        assert_eq!(count(&t), 64);
        let mut t = SearchTask::new(4, Constraints::default(), Objective::CountExtremal, Mode::Full);
        t.constraints.symmetric = true;
        assert_eq!(count(&t), 64);
        // Labeled strong digraphs on 3 vertices: 18.
        let mut t = SearchTask::new(3, Constraints::default(), Objective::CountExtremal, Mode::Full);
        t.constraints.strong = true;
        assert_eq!(count(&t), 18);
        t.mode = Mode::Backtracking;
        assert_eq!(count(&t), 18);
    }

    #[test]
    fn bipartite_any_counts_each_digraph_once() {
        // Count labeled bipartite digraphs on 4 vertices by brute force.
        let n = 4;
        let mut expect = 0;
        for bits in 0u32..1 << 12 {
            let mut rows = vec![0u64; n];
            let mut k = 0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        if bits >> k & 1 == 1 {
                            rows[i] |= 1 << j;
                        }
                        k += 1;
                    }
                }
            }
            let d = crate::DenseDigraph::from_rows(n, &rows).unwrap();
            if d.is_bipartite().is_some() {
                expect += 1;
            }
        }
        let mut t = SearchTask::new(n, Constraints::default(), Objective::CountExtremal, Mode::Full);
        t.constraints.bipartite = Some(BipartiteConstraint::Any);
        assert_eq!(count(&t), expect);
    }

    #[test]
    fn resume_from_cursor_matches_full_run() {
        let mut t = SearchTask::new(4, Constraints::default(), Objective::CountExtremal, Mode::RowCapped);
        t.constraints.strong = true;
        let plan = Plan::new(&t);
        let key = plan.shards()[3];
        let mut whole = Count(0);
        let mut st = PruningStats::default();
        run_shard(
            &plan,
            key,
            &[0, 0, 0],
            &mut whole,
            &mut st,
            None,
            u64::MAX,
            &mut |_, _, _, _| {},
        );
        let mut part = Count(0);
        let mut st = PruningStats::default();
        let mut cursor = vec![0, 0, 0];
        let mut examined = 0;
        loop {
            let run = run_shard(
                &plan,
                key,
                &cursor,
                &mut part,
                &mut st,
                Some(7),
                u64::MAX,
                &mut |_, _, _, _| {},
            );
            examined += run.examined;
            cursor = run.cursor;
            if run.done {
                break;
            }
        }
        assert_eq!(part.0, whole.0);
        assert!(examined > 7);
    }
}
