use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::engine::{Leaf, Visitor};
use super::task::Objective;
use crate::canon::canonical_rows;

const FLUSH_AT: usize = 4096;

/// Running extremal value, labeled count and canonical witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub objective: Objective,
    pub n: usize,
    pub best: Option<u64>,
    pub labeled: u64,
    /// Canonical row vectors of the extremal classes.
    pub classes: BTreeSet<Vec<u64>>,
    #[serde(skip)]
    pending: Vec<Vec<u64>>,
}

impl Tally {
    pub fn new(objective: Objective, n: usize) -> Self {
        Tally {
            objective,
            n,
            best: None,
            labeled: 0,
            classes: BTreeSet::new(),
            pending: Vec::new(),
        }
    }

    /// Canonicalizes buffered witnesses.
    pub fn flush(&mut self) {
        let n = self.n;
        for rows in self.pending.drain(..) {
            self.classes.insert(canonical_rows(&rows, n));
        }
    }

    fn value(&self, leaf: &Leaf<'_>) -> Option<u64> {
        match self.objective {
            Objective::MaxSize => Some(u64::from(leaf.arcs)),
            Objective::MinWiener => leaf.wiener,
            Objective::CountExtremal => None,
        }
    }

    /// `Less` when `a` is strictly better than `b`.
    fn rank(&self, a: u64, b: u64) -> std::cmp::Ordering {
        match self.objective {
            Objective::MaxSize => b.cmp(&a),
            _ => a.cmp(&b),
        }
    }

    fn reset(&mut self, best: Option<u64>) {
        self.best = best;
        self.labeled = 0;
        self.classes.clear();
        self.pending.clear();
    }
}

impl Visitor for Tally {
    fn visit(&mut self, leaf: &Leaf<'_>) {
        if let Some(v) = self.value(leaf) {
            match self.best {
                Some(b) if self.rank(v, b).is_gt() => return,
                Some(b) if self.rank(v, b).is_lt() => self.reset(Some(v)),
                None => self.reset(Some(v)),
                _ => {}
            }
        }
        self.labeled += 1;
        self.pending.push(leaf.rows.to_vec());
        if self.pending.len() >= FLUSH_AT {
            self.flush();
        }
    }

    fn merge(&mut self, mut later: Self) {
        self.flush();
        later.flush();
        if self.objective != Objective::CountExtremal {
            match (self.best, later.best) {
                (_, None) => return,
                (None, Some(_)) => {
                    *self = later;
                    return;
                }
                (Some(a), Some(b)) => match self.rank(a, b) {
                    std::cmp::Ordering::Less => return,
                    std::cmp::Ordering::Greater => {
                        *self = later;
                        return;
                    }
                    std::cmp::Ordering::Equal => {}
                },
            }
        }
        self.labeled += later.labeled;
        self.classes.extend(later.classes);
    }
}
