use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::SearchError;

/// Largest order accepted by the pruned modes on general digraphs.
pub const MAX_DIGRAPH_ORDER: usize = 8;
/// Largest order accepted for symmetric or bipartite spaces.
pub const MAX_RESTRICTED_ORDER: usize = 10;
/// Largest number of free adjacency bits accepted by [`Mode::Full`].
pub const FULL_MODE_BITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Objective {
    MaxSize,
    MinWiener,
    /// Every digraph satisfying the constraints counts as extremal; the
    /// extremal value is the labeled count.
    CountExtremal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    /// Every labeled digraph of the space, no pruning.
    Full,
    /// Per-vertex out-row lists filtered by sound outdegree caps.
    RowCapped,
    /// Row-by-row search with total-degree cap propagation.
    Backtracking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BipartiteConstraint {
    /// Classes `0..p` and `p..p+q`.
    Classes { p: usize, q: usize },
    /// Any bipartition; each digraph is enumerated once.
    Any,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraints {
    #[serde(default)]
    pub strong: bool,
    /// Restrict to symmetric digraphs (undirected graphs).
    #[serde(default)]
    pub symmetric: bool,
    #[serde(default)]
    pub bipartite: Option<BipartiteConstraint>,
    #[serde(default)]
    pub rad_out_eq: Option<u32>,
    #[serde(default)]
    pub rad2_eq: Option<u32>,
    #[serde(default)]
    pub diameter_eq: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchTask {
    pub n: usize,
    pub constraints: Constraints,
    pub objective: Objective,
    pub mode: Mode,
    pub threads: usize,
    #[serde(default)]
    pub checkpoint_path: Option<PathBuf>,
}

impl SearchTask {
    pub fn new(n: usize, constraints: Constraints, objective: Objective, mode: Mode) -> Self {
        SearchTask {
            n,
            constraints,
            objective,
            mode,
            threads: 1,
            checkpoint_path: None,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint_path = Some(path.into());
        self
    }

    /// Checks the task's internal consistency and feasibility limits.
    pub fn validate(&self) -> Result<(), SearchError> {
        let c = &self.constraints;
        let invalid = |m: String| Err(SearchError::Invalid(m));
        if self.n < 2 {
            return invalid(format!("order {} must be at least 2", self.n));
        }
        if self.threads == 0 {
            return invalid("threads must be at least 1".into());
        }
        if c.rad_out_eq.is_some() && c.rad2_eq.is_some() {
            return invalid("rad_out_eq and rad2_eq are mutually exclusive".into());
        }
        if self.objective == Objective::MinWiener && !c.strong {
            return invalid("MIN_WIENER needs the strong constraint".into());
        }
        if c.diameter_eq.is_some() && !c.strong {
            return invalid("diameter_eq needs the strong constraint".into());
        }
        if let Some(BipartiteConstraint::Classes { p, q }) = c.bipartite {
            if p == 0 || q == 0 || p + q != self.n {
                return invalid(format!("classes {p}+{q} must be positive and sum to n = {}", self.n));
            }
        }
        let restricted = c.symmetric || c.bipartite.is_some();
        match self.mode {
            Mode::Full => {
                let bits = self.free_bits();
                if bits > FULL_MODE_BITS {
                    return Err(SearchError::Infeasible(format!(
                        "FULL mode allows at most {FULL_MODE_BITS} free adjacency bits, this space has {bits}"
                    )));
                }
            }
            Mode::RowCapped | Mode::Backtracking => {
                let limit = if restricted {
                    MAX_RESTRICTED_ORDER
                } else {
                    MAX_DIGRAPH_ORDER
                };
                if self.n > limit {
                    return Err(SearchError::Infeasible(format!(
                        "order {} exceeds the search limit {limit}",
                        self.n
                    )));
                }
            }
        }
        Ok(())
    }

    /// Free adjacency bits of the largest space the task enumerates.
    pub fn free_bits(&self) -> u32 {
        let n = self.n as u32;
        let pairs = match self.constraints.bipartite {
            Some(BipartiteConstraint::Classes { p, q }) => (p * q) as u32,
            Some(BipartiteConstraint::Any) => (n / 2) * n.div_ceil(2),
            None => n * (n - 1) / 2,
        };
        if self.constraints.symmetric {
            pairs
        } else {
            2 * pairs
        }
    }

    /// Hex digest of everything that determines the result.
    pub fn fingerprint(&self) -> String {
        let key = serde_json::json!({
            "n": self.n,
            "constraints": self.constraints,
            "objective": self.objective,
            "mode": self.mode,
        });
        hex::encode(Sha256::digest(key.to_string().as_bytes()))
    }
}
