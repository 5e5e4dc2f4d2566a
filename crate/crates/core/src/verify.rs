//! Named checks tying the families, bounds and searches to the results
//! they reproduce.
//!
//! Each check runs at one of three depths. `FormulaOnly` compares a closed
//! form with an independently derived expression, `FamilyCrosscheck`
//! builds the extremal families and measures them, and `Exhaustive` runs a
//! search and compares both the extremal value and the set of extremal
//! isomorphism classes with the claimed characterization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_form;
use crate::digraph::{full_mask, DenseDigraph, VertexPartition};
use crate::families::{self, closed_form, BoundName, BoundParams, FamilyError, FormulaError};
use crate::metrics::{check_bipartite_degree_bound, check_outradius_degree_bound, ecc_and_sum, metric_summary};
use crate::search::{
    enumerate, scan, BipartiteConstraint, Constraints, ExtremalCertificate, IsoClass, Leaf, Mode, Objective,
    SearchError, SearchTask, Visitor,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckId {
    Vz,
    Dsv11,
    Fridman,
    Rad3,
    Biconn,
    Prop34,
    Gamma2r1,
    Radconj,
    Bipdi,
    Prop54,
    Bipbiconn,
    AsympRemark,
}

impl CheckId {
    pub const ALL: [CheckId; 12] = [
        CheckId::Vz,
        CheckId::Dsv11,
        CheckId::Fridman,
        CheckId::Rad3,
        CheckId::Biconn,
        CheckId::Prop34,
        CheckId::Gamma2r1,
        CheckId::Radconj,
        CheckId::Bipdi,
        CheckId::Prop54,
        CheckId::Bipbiconn,
        CheckId::AsympRemark,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Vz => "VZ",
            CheckId::Dsv11 => "DSV11",
            CheckId::Fridman => "FRIDMAN",
            CheckId::Rad3 => "RAD3",
            CheckId::Biconn => "BICONN",
            CheckId::Prop34 => "PROP34",
            CheckId::Gamma2r1 => "GAMMA2R1",
            CheckId::Radconj => "RADCONJ",
            CheckId::Bipdi => "BIPDI",
            CheckId::Prop54 => "PROP54",
            CheckId::Bipbiconn => "BIPBICONN",
            CheckId::AsympRemark => "ASYMP_REMARK",
        }
    }

    /// For the radius checks the `r` parameter is the doubled radius.
    pub fn r_is_doubled(self) -> bool {
        matches!(self, CheckId::Gamma2r1 | CheckId::Radconj)
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.to_ascii_uppercase().replace('-', "_");
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Depth {
    FormulaOnly,
    FamilyCrosscheck,
    Exhaustive,
}

impl FromStr for Depth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "formula_only" | "formula" => Ok(Depth::FormulaOnly),
            "family_crosscheck" | "family" => Ok(Depth::FamilyCrosscheck),
            "exhaustive" => Ok(Depth::Exhaustive),
            _ => Err(format!("unknown depth {s:?}")),
        }
    }
}

/// Inclusive ranges of order and radius parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckParams {
    pub n_min: usize,
    pub n_max: usize,
    pub r_min: u32,
    pub r_max: u32,
}

impl CheckParams {
    pub fn single(n: usize, r: u32) -> Self {
        CheckParams {
            n_min: n,
            n_max: n,
            r_min: r,
            r_max: r,
        }
    }

    pub fn within(&self, outer: &CheckParams) -> bool {
        self.n_min <= self.n_max
            && self.r_min <= self.r_max
            && outer.n_min <= self.n_min
            && self.n_max <= outer.n_max
            && outer.r_min <= self.r_min
            && self.r_max <= outer.r_max
    }

    fn label(&self) -> String {
        let span = |a: String, b: String| if a == b { a } else { format!("{a}-{b}") };
        format!(
            "n{}-r{}",
            span(self.n_min.to_string(), self.n_max.to_string()),
            span(self.r_min.to_string(), self.r_max.to_string())
        )
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        (self.n_min..=self.n_max).flat_map(move |n| (self.r_min..=self.r_max).map(move |r| (n, r)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub id: CheckId,
    pub params: CheckParams,
    pub depth: Depth,
    pub threads: usize,
}

impl TheoremCheck {
    /// A check over the default range of its depth.
    pub fn new(id: CheckId, depth: Depth) -> Result<Self, VerifyError> {
        let params = list_checks()
            .into_iter()
            .find(|c| c.id == id)
            .and_then(|c| c.depths.into_iter().find(|d| d.depth == depth))
            .map(|d| d.default_params)
            .ok_or(VerifyError::UnsupportedDepth { id, depth })?;
        Ok(TheoremCheck {
            id,
            params,
            depth,
            threads: 1,
        })
    }

    pub fn with_params(mut self, params: CheckParams) -> Self {
        self.params = params;
        self
    }

    /// File stem for stored reports: `<id>-<params>`.
    pub fn file_stem(&self) -> String {
        format!("{}-{}", self.id.as_str().to_ascii_lowercase(), self.params.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    Refuted,
    /// Outside the scale at which the check can decide.
    Inconclusive,
}

/// Whether the statement probed is proven in the checked range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Range {
    Theorem,
    Conjecture,
}

/// One parameter point of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseEvidence {
    pub n: usize,
    pub r: u32,
    pub range: Range,
    pub verdict: Verdict,
    pub expected: Option<u64>,
    pub observed: Option<u64>,
    /// Content hashes of the canonical forms the characterization names.
    pub expected_classes: Vec<String>,
    pub observed_classes: Vec<String>,
    pub detail: String,
    #[serde(default)]
    pub candidates_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: CheckId,
    pub params: CheckParams,
    pub depth: Depth,
    pub range: Range,
    pub verdict: Verdict,
    pub cases: Vec<CaseEvidence>,
    /// Extremal witnesses found by exhaustive cases.
    pub certificates: Vec<ExtremalCertificate>,
    pub counterexample: Option<ExtremalCertificate>,
    pub runtime_ms: u64,
}

impl VerificationReport {
    /// JSON without the run time, for comparing runs.
    pub fn normalized_json(&self) -> String {
        let mut r = self.clone();
        r.runtime_ms = 0;
        for c in &mut r.certificates {
            c.task.threads = 1;
        }
        if let Some(c) = &mut r.counterexample {
            c.task.threads = 1;
        }
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    /// One markdown table row: id, params, depth, range, verdict.
    pub fn summary_row(&self) -> String {
        format!(
            "| {} | {} | {:?} | {:?} | {:?} |",
            self.id,
            self.params.label(),
            self.depth,
            self.range,
            self.verdict
        )
    }
}

pub const SUMMARY_HEADER: &str = "| check | params | depth | range | verdict |\n|---|---|---|---|---|";

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{id} does not support depth {depth:?}")]
    UnsupportedDepth { id: CheckId, depth: Depth },
    #[error("{id} at depth {depth:?}: parameters {params:?} are outside the supported range {supported:?}")]
    OutOfRange {
        id: CheckId,
        depth: Depth,
        params: CheckParams,
        supported: CheckParams,
    },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Digraph(#[from] crate::error::DigraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthInfo {
    pub depth: Depth,
    pub supported: CheckParams,
    pub default_params: CheckParams,
    /// Hour-scale; excluded from routine runs.
    pub extended: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckInfo {
    pub id: CheckId,
    pub statement: &'static str,
    pub depths: Vec<DepthInfo>,
}

fn p(n_min: usize, n_max: usize, r_min: u32, r_max: u32) -> CheckParams {
    CheckParams {
        n_min,
        n_max,
        r_min,
        r_max,
    }
}

fn depth(depth: Depth, supported: CheckParams, default_params: CheckParams) -> DepthInfo {
    DepthInfo {
        depth,
        supported,
        default_params,
        extended: false,
    }
}

/// The registry: ids, supported depths and parameter ranges.
pub fn list_checks() -> Vec<CheckInfo> {
    use Depth::*;
    vec![
        CheckInfo {
            id: CheckId::Vz,
            statement: "maximum edges of a graph of order n and radius r, with extremal graphs",
            depths: vec![
                depth(FormulaOnly, p(2, 64, 1, 32), p(2, 40, 1, 6)),
                depth(FamilyCrosscheck, p(2, 64, 1, 32), p(2, 24, 1, 6)),
                depth(Exhaustive, p(2, 7, 1, 3), p(2, 7, 1, 3)),
            ],
        },
        CheckInfo {
            id: CheckId::Dsv11,
            statement: "maximum edges of a bipartite graph of order n and radius r >= 4",
            depths: vec![
                depth(FormulaOnly, p(8, 64, 4, 32), p(8, 40, 4, 8)),
                depth(FamilyCrosscheck, p(8, 64, 4, 32), p(8, 24, 4, 6)),
                depth(Exhaustive, p(8, 9, 4, 4), p(8, 9, 4, 4)),
            ],
        },
        CheckInfo {
            id: CheckId::Fridman,
            statement: "maximum arcs of a digraph of order n and outradius r >= 2, with extremal digraphs",
            depths: vec![
                depth(FormulaOnly, p(3, 64, 2, 63), p(3, 40, 2, 10)),
                depth(FamilyCrosscheck, p(3, 64, 2, 63), p(3, 20, 2, 8)),
                depth(Exhaustive, p(3, 5, 2, 4), p(3, 5, 2, 4)),
            ],
        },
        CheckInfo {
            id: CheckId::Rad3,
            statement: "strong digraphs of order n >= 6 and outradius 3 have at most (n-2)^2 arcs, with equality exactly for D(n,3,s)",
            depths: vec![
                depth(FormulaOnly, p(6, 64, 3, 3), p(6, 40, 3, 3)),
                depth(FamilyCrosscheck, p(6, 64, 3, 3), p(6, 30, 3, 3)),
                depth(Exhaustive, p(6, 6, 3, 3), p(6, 6, 3, 3)),
            ],
        },
        CheckInfo {
            id: CheckId::Biconn,
            statement: "strong digraphs of order n >= 2r and outradius r >= 3 are maximized exactly by D(n,r,s)",
            depths: vec![
                depth(FormulaOnly, p(6, 64, 3, 32), p(6, 40, 3, 8)),
                depth(FamilyCrosscheck, p(6, 64, 3, 32), p(6, 24, 3, 6)),
                depth(Exhaustive, p(6, 6, 3, 3), p(6, 6, 3, 3)),
            ],
        },
        CheckInfo {
            id: CheckId::Prop34,
            statement: "every vertex of a strong digraph of outradius r has total degree at most 2(n-1)-(2r-3)",
            depths: vec![
                depth(FamilyCrosscheck, p(4, 24, 2, 10), p(6, 16, 3, 5)),
                depth(Exhaustive, p(2, 5, 1, 4), p(5, 5, 1, 4)),
            ],
        },
        CheckInfo {
            id: CheckId::Gamma2r1,
            statement: "strong digraphs of order 2r+1 and radius r >= 5/2 have at most as many arcs as the unique extremal Gamma(2r+1)",
            depths: vec![
                depth(FormulaOnly, p(6, 64, 5, 63), p(6, 40, 5, 39)),
                depth(FamilyCrosscheck, p(6, 64, 5, 63), p(6, 30, 5, 29)),
                depth(Exhaustive, p(6, 6, 5, 5), p(6, 6, 5, 5)),
            ],
        },
        CheckInfo {
            id: CheckId::Radconj,
            statement: "for n >= 2r+1 the strong digraphs of radius r maximizing size are the blow-ups Gamma(n,2r,i,s)",
            depths: vec![
                depth(FamilyCrosscheck, p(6, 64, 5, 63), p(6, 24, 5, 10)),
                depth(Exhaustive, p(6, 6, 5, 5), p(6, 6, 5, 5)),
            ],
        },
        CheckInfo {
            id: CheckId::Bipdi,
            statement: "maximum arcs of a bipartite digraph of order n and outradius r >= 3, with extremal digraphs",
            depths: vec![
                depth(FormulaOnly, p(4, 64, 3, 63), p(4, 40, 3, 10)),
                depth(FamilyCrosscheck, p(4, 64, 3, 63), p(4, 18, 3, 8)),
                depth(Exhaustive, p(4, 6, 3, 4), p(4, 6, 3, 4)),
            ],
        },
        CheckInfo {
            id: CheckId::Prop54,
            statement: "in a bipartite strong digraph of even outradius r >= 4 every vertex has total degree at most 2|opposite class|-(r-2)",
            depths: vec![
                depth(FamilyCrosscheck, p(8, 40, 4, 12), p(8, 24, 4, 6)),
                depth(Exhaustive, p(6, 7, 4, 4), p(6, 6, 4, 4)),
            ],
        },
        CheckInfo {
            id: CheckId::Bipbiconn,
            statement: "bipartite strong digraphs of outradius r >= 4 are maximized uniquely by the bipartite part of a balanced D(n,r,s)",
            depths: vec![
                depth(FormulaOnly, p(8, 64, 4, 4), p(8, 40, 4, 4)),
                depth(FamilyCrosscheck, p(8, 64, 4, 32), p(8, 24, 4, 8)),
                DepthInfo {
                    extended: true,
                    ..depth(Exhaustive, p(8, 8, 4, 4), p(8, 8, 4, 4))
                },
            ],
        },
        CheckInfo {
            id: CheckId::AsympRemark,
            statement: "bipartite strong digraphs of outradius r >= 4 have n^2/2-(r-2)n+O(1) arcs at most, attained by the conjectured family",
            depths: vec![depth(FormulaOnly, p(8, 64, 4, 16), p(8, 60, 4, 8))],
        },
    ]
}

/// Runs a check. Deterministic apart from `runtime_ms`.
pub fn verify_theorem(check: &TheoremCheck) -> Result<VerificationReport, VerifyError> {
    let info = list_checks()
        .into_iter()
        .find(|c| c.id == check.id)
        .expect("registry covers every id");
    let supported = info
        .depths
        .iter()
        .find(|d| d.depth == check.depth)
        .ok_or(VerifyError::UnsupportedDepth {
            id: check.id,
            depth: check.depth,
        })?
        .supported;
    if !check.params.within(&supported) {
        return Err(VerifyError::OutOfRange {
            id: check.id,
            depth: check.depth,
            params: check.params,
            supported,
        });
    }
    let start = Instant::now();
    let mut run = Run {
        threads: check.threads.max(1),
        cases: Vec::new(),
        certificates: Vec::new(),
        counterexample: None,
    };
    for (n, r) in check.params.pairs() {
        if !applicable(check.id, n, r) {
            continue;
        }
        match check.depth {
            Depth::FormulaOnly => run.formula(check.id, n, r)?,
            Depth::FamilyCrosscheck => run.family(check.id, n, r)?,
            Depth::Exhaustive => run.exhaustive(check.id, n, r)?,
        }
    }
    if check.id == CheckId::AsympRemark {
        run.asymptotic(&check.params)?;
    }
    let verdict = if run.cases.iter().any(|c| c.verdict == Verdict::Refuted) {
        Verdict::Refuted
    } else if run.cases.is_empty() || run.cases.iter().any(|c| c.verdict == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Confirmed
    };
    let range = if run.cases.iter().all(|c| c.range == Range::Theorem) {
        Range::Theorem
    } else {
        Range::Conjecture
    };
    Ok(VerificationReport {
        id: check.id,
        params: check.params,
        depth: check.depth,
        range,
        verdict,
        cases: run.cases,
        certificates: run.certificates,
        counterexample: run.counterexample,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Parameter points where the statement says something.
fn applicable(id: CheckId, n: usize, r: u32) -> bool {
    let r_us = r as usize;
    match id {
        CheckId::Vz => match r {
            0 => false,
            1 => n >= 2,
            2 => n >= 4,
            _ => n >= 2 * r_us,
        },
        CheckId::Dsv11 | CheckId::Biconn | CheckId::Bipbiconn => n >= 2 * r_us,
        CheckId::Fridman | CheckId::Bipdi => n > r_us,
        CheckId::Rad3 => n >= 6,
        CheckId::Prop34 => n > r_us,
        CheckId::Gamma2r1 => n == r_us + 1,
        CheckId::Radconj => n > r_us,
        CheckId::Prop54 => r.is_multiple_of(2) && n >= 2 * r_us - 2,
        CheckId::AsympRemark => false,
    }
}

fn range_of(id: CheckId, n: usize, r: u32) -> Range {
    match id {
        CheckId::Biconn if r > 3 => Range::Conjecture,
        CheckId::Radconj if n > r as usize + 1 => Range::Conjecture,
        CheckId::Bipbiconn => Range::Conjecture,
        _ => Range::Theorem,
    }
}

fn hashes(ds: &BTreeSet<DenseDigraph>) -> Vec<String> {
    ds.iter().map(|d| IsoClass::new(d).hash).collect()
}

fn canon_set(ds: impl IntoIterator<Item = DenseDigraph>) -> Result<BTreeSet<DenseDigraph>, VerifyError> {
    ds.into_iter()
        .map(|d| canonical_form(&d).map_err(|e| VerifyError::Search(e.into())))
        .collect()
}

struct Run {
    threads: usize,
    cases: Vec<CaseEvidence>,
    certificates: Vec<ExtremalCertificate>,
    counterexample: Option<ExtremalCertificate>,
}

impl Run {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        id: CheckId,
        n: usize,
        r: u32,
        ok: bool,
        expected: Option<u64>,
        observed: Option<u64>,
        detail: String,
    ) {
        self.cases.push(CaseEvidence {
            n,
            r,
            range: range_of(id, n, r),
            verdict: if ok { Verdict::Confirmed } else { Verdict::Refuted },
            expected,
            observed,
            expected_classes: Vec::new(),
            observed_classes: Vec::new(),
            detail,
            candidates_examined: 0,
        });
    }

    fn refute_with(&mut self, d: &DenseDigraph, task: &SearchTask) {
        if self.counterexample.is_none() {
            self.counterexample = Some(ExtremalCertificate::new(d, task));
        }
    }

    fn formula(&mut self, id: CheckId, n: usize, r: u32) -> Result<(), VerifyError> {
        let (nn, rr) = (n as u64, u64::from(r));
        let (bound, other, what) = match id {
            CheckId::Vz => {
                let b = closed_form(BoundName::VizingF, BoundParams::nr(nn, rr))?;
                let other = match r {
                    1 => nn * (nn - 1) / 2,
                    2 => nn * (nn - 1) / 2 - nn.div_ceil(2),
                    _ => {
                        let mut sizes = vec![1; 2 * r as usize];
                        sizes[1] = n + 1 - 2 * r as usize;
                        blowup_arcs(&DenseDigraph::cycle_graph(2 * r as usize)?, &sizes, true) / 2
                    }
                };
                (b, other, "edge count of the extremal graph")
            }
            CheckId::Dsv11 => {
                let b = closed_form(BoundName::Dsv11, BoundParams::nr(nn, rr))?;
                let total = nn + 3 - 2 * rr;
                let best = (1..total)
                    .flat_map(|b| (1..total - b).map(move |a| (a, b, total - a - b)))
                    .map(|(a, b, c)| 2 * rr - 4 + (b + 1) * (a + c))
                    .max()
                    .unwrap_or(0);
                (b, best, "best stable blow-up of C(2r)")
            }
            CheckId::Fridman => {
                let b = closed_form(BoundName::Fridman, BoundParams::nr(nn, rr))?;
                let other = if r == 2 {
                    nn * (nn - 2)
                } else {
                    let mut sizes = vec![1; r as usize + 1];
                    sizes[2] = n - r as usize;
                    blowup_arcs(&families::gamma_star(r as usize)?, &sizes, true)
                };
                (b, other, "arc count of the extremal blow-up")
            }
            CheckId::Rad3 => {
                let b = closed_form(BoundName::Rad3Biconn, BoundParams::nr(nn, 3))?;
                let g = closed_form(BoundName::BiconnGeneral, BoundParams::nr(nn, 3))?;
                (b, g, "general biconnected formula at r = 3")
            }
            CheckId::Biconn => {
                let b = closed_form(BoundName::BiconnGeneral, BoundParams::nr(nn, rr))?;
                let ru = r as usize;
                let mut sizes = vec![1; 2 * ru];
                sizes[ru] = n + 1 - 2 * ru;
                let other = blowup_arcs(&families::d_2r_r_1(ru)?, &sizes, true);
                (b, other, "arc count of D(n,r,1) from its blocks")
            }
            CheckId::Gamma2r1 => {
                let b = closed_form(
                    BoundName::Gamma2r1,
                    BoundParams {
                        rad2: Some(rr),
                        ..Default::default()
                    },
                )?;
                let m = nn;
                (b, m * (m - 1) / 2 + (m - 1), "tournament plus path on 2r+1 vertices")
            }
            CheckId::Bipdi => {
                let b = closed_form(BoundName::BipDigraph, BoundParams::nr(nn, rr))?;
                let best = bipdi_members(n, r as usize)?
                    .into_iter()
                    .map(|m| m.digraph.arc_count() as u64)
                    .max()
                    .unwrap_or(0);
                (b, best, "largest stable blow-up of Gamma* intersected with K")
            }
            CheckId::Bipbiconn => {
                let b = closed_form(BoundName::BipBiconnConj, BoundParams::nr(nn, rr))?;
                let k = nn - 2;
                (b, k * k / 2, "floor((n-2)^2/2)")
            }
            _ => {
                return Err(VerifyError::UnsupportedDepth {
                    id,
                    depth: Depth::FormulaOnly,
                })
            }
        };
        self.push(id, n, r, bound == other, Some(bound), Some(other), what.into());
        Ok(())
    }

    fn family(&mut self, id: CheckId, n: usize, r: u32) -> Result<(), VerifyError> {
        let (nn, rr) = (n as u64, u64::from(r));
        let ru = r as usize;
        let mut members: Vec<(String, DenseDigraph)> = Vec::new();
        let mut problems = Vec::new();
        let expected;
        match id {
            CheckId::Vz => {
                expected = 2 * closed_form(BoundName::VizingF, BoundParams::nr(nn, rr))?;
                for g in vz_members(n, r)? {
                    members.push(("graph".into(), g));
                }
                for (_, g) in &members {
                    let m = metric_summary(g);
                    if !g.is_symmetric() || m.rad_out != Some(r) || !m.strong {
                        problems.push("member is not a connected graph of radius r".to_string());
                    }
                }
            }
            CheckId::Dsv11 => {
                expected = 2 * closed_form(BoundName::Dsv11, BoundParams::nr(nn, rr))?;
                for m in dsv11_members(n, ru)? {
                    let s = metric_summary(&m);
                    if !m.is_symmetric() || !s.bipartite || !s.strong || s.rad_out != Some(r) {
                        problems.push("member is not a connected bipartite graph of radius r".into());
                    }
                    members.push(("blow-up".into(), m));
                }
            }
            CheckId::Fridman => {
                expected = closed_form(BoundName::Fridman, BoundParams::nr(nn, rr))?;
                for m in fridman_members(n, ru)? {
                    let s = metric_summary(&m);
                    if s.rad_out != Some(r) || (r >= 3 && s.strong) {
                        problems.push("member does not have outradius r, or is strong with r >= 3".into());
                    }
                    members.push(("gamma-star".into(), m));
                }
            }
            CheckId::Rad3 | CheckId::Biconn => {
                expected = closed_form(BoundName::BiconnGeneral, BoundParams::nr(nn, rr))?;
                for s in 1..=(n + 2 - 2 * ru) / 2 {
                    let d = families::d_nrs(n, ru, s)?;
                    let m = metric_summary(&d);
                    if !m.strong || m.rad_out != Some(r) {
                        problems.push(format!("D({n},{r},{s}) is not strong of outradius r"));
                    }
                    members.push((format!("D({n},{r},{s})"), d));
                }
            }
            CheckId::Prop34 => {
                let mut ds = Vec::new();
                if n >= 2 * ru && ru >= 3 {
                    for s in 1..=(n + 2 - 2 * ru) / 2 {
                        ds.push(families::d_nrs(n, ru, s)?);
                    }
                }
                let violations: usize = ds
                    .iter()
                    .map(|d| {
                        check_outradius_degree_bound(d, r)
                            .map(|rep| rep.violations)
                            .unwrap_or(1)
                    })
                    .sum();
                self.push(
                    id,
                    n,
                    r,
                    violations == 0,
                    Some(0),
                    Some(violations as u64),
                    format!("{} family members scanned", ds.len()),
                );
                return Ok(());
            }
            CheckId::Gamma2r1 => {
                expected = closed_form(
                    BoundName::Gamma2r1,
                    BoundParams {
                        rad2: Some(rr),
                        ..Default::default()
                    },
                )?;
                let g = families::gamma_bar(ru)?;
                let m = metric_summary(&g);
                if !m.strong || m.rad2 != Some(r) {
                    problems.push("Gamma(2r+1) does not have the doubled radius".into());
                }
                members.push(("gamma-bar".into(), g));
            }
            CheckId::Radconj => {
                let ms = radconj_members(n, ru)?;
                expected = ms.first().map_or(0, |d| d.arc_count() as u64);
                for d in ms {
                    let m = metric_summary(&d);
                    if !m.strong || m.rad2 != Some(r) {
                        problems.push("member does not have the doubled radius".into());
                    }
                    members.push(("gamma-bar-blowup".into(), d));
                }
            }
            CheckId::Bipdi => {
                expected = closed_form(BoundName::BipDigraph, BoundParams::nr(nn, rr))?;
                for m in bipdi_members(n, ru)? {
                    let s = metric_summary(&m.digraph);
                    if !m.partition.is_proper_for(&m.digraph) || s.rad_out != Some(r) {
                        problems.push("member is not bipartite of outradius r".into());
                    }
                    if m.extremal {
                        members.push(("bip-digraph-extremal".into(), m.digraph));
                    } else if s.arc_count as u64 >= expected {
                        problems.push("an unbalanced blow-up reaches the bound".into());
                    }
                }
            }
            CheckId::Prop54 => {
                if n < 2 * ru {
                    return Ok(());
                }
                let m = families::d_nrs_bipartite(n, ru)?;
                let rep = check_bipartite_degree_bound(&m.digraph, &m.partition, r);
                let ok = rep.as_ref().is_ok_and(|rep| rep.holds());
                let detail = match &rep {
                    Ok(rep) => format!("{} equality vertices", rep.equality.len()),
                    Err(e) => e.to_string(),
                };
                self.push(id, n, r, ok, Some(0), rep.ok().map(|r| r.violations as u64), detail);
                return Ok(());
            }
            CheckId::Bipbiconn => {
                expected = closed_form(BoundName::BipBiconnConj, BoundParams::nr(nn, rr))?;
                let m = families::d_nrs_bipartite(n, ru)?;
                let s = metric_summary(&m.digraph);
                if !s.strong || s.rad_out != Some(r) || !m.partition.is_proper_for(&m.digraph) {
                    problems.push("member is not bipartite strong of outradius r".into());
                }
                members.push(("d-nrs-bipartite".into(), m.digraph));
            }
            CheckId::AsympRemark => return Ok(()),
        }
        let sizes: BTreeSet<u64> = members.iter().map(|(_, d)| d.arc_count() as u64).collect();
        if members.is_empty() {
            problems.push("no family member at these parameters".into());
        }
        if sizes.len() > 1 || sizes.iter().any(|&s| s != expected) {
            problems.push(format!("member sizes {sizes:?} differ from {expected}"));
        }
        problems.dedup();
        let observed = sizes.iter().next().copied();
        let detail = if problems.is_empty() {
            format!("{} members agree", members.len())
        } else {
            problems.join("; ")
        };
        self.push(id, n, r, problems.is_empty(), Some(expected), observed, detail);
        Ok(())
    }

    fn search(&mut self, task: SearchTask) -> Result<crate::search::SearchReport, VerifyError> {
        Ok(enumerate(&task.with_threads(self.threads))?)
    }

    /// Compares the union of several MAX_SIZE searches with a value and a
    /// set of extremal digraphs.
    fn compare(
        &mut self,
        id: CheckId,
        n: usize,
        r: u32,
        tasks: Vec<SearchTask>,
        expected: u64,
        family: Vec<DenseDigraph>,
    ) -> Result<(), VerifyError> {
        let mut best: Option<u64> = None;
        let mut classes: BTreeMap<DenseDigraph, (IsoClass, SearchTask)> = BTreeMap::new();
        let mut examined = 0;
        for task in tasks {
            let rep = self.search(task)?;
            examined += rep.candidates_examined;
            let Some(v) = rep.extremal_value else { continue };
            if best.is_some_and(|b| v < b) {
                continue;
            }
            if best.is_some_and(|b| v > b) {
                classes.clear();
            }
            best = Some(v);
            for c in rep.iso_classes {
                classes.insert(c.digraph(), (c, rep.task.clone()));
            }
        }
        let expected_set = canon_set(family)?;
        let observed_set: BTreeSet<DenseDigraph> = classes.keys().cloned().collect();
        let mut detail = Vec::new();
        let mut ok = true;
        if best != Some(expected) {
            ok = false;
            detail.push(format!("extremal value {best:?}, expected {expected}"));
            if best.is_some_and(|b| b > expected) {
                let (d, (_, task)) = classes.iter().next().expect("a value has witnesses");
                let task = task.clone();
                self.refute_with(&d.clone(), &task);
            }
        }
        if let Some(extra) = observed_set.difference(&expected_set).next() {
            ok = false;
            detail.push(format!(
                "{} extremal classes outside the characterization",
                observed_set.difference(&expected_set).count()
            ));
            let task = classes[extra].1.clone();
            self.refute_with(&extra.clone(), &task);
        }
        if let Some(missing) = expected_set.difference(&observed_set).next() {
            ok = false;
            detail.push(format!(
                "{} characterized classes not found as extremal",
                expected_set.difference(&observed_set).count()
            ));
            if let Some((_, task)) = classes.values().next() {
                let task = task.clone();
                self.refute_with(&missing.clone(), &task);
            }
        }
        for (c, task) in classes.values() {
            self.certificates.push(ExtremalCertificate {
                adm: c.adm.clone(),
                metrics: c.metrics.clone(),
                task: task.clone(),
                hash: c.hash.clone(),
            });
        }
        if ok {
            detail.push(format!("{} extremal classes match", observed_set.len()));
        }
        self.cases.push(CaseEvidence {
            n,
            r,
            range: range_of(id, n, r),
            verdict: if ok { Verdict::Confirmed } else { Verdict::Refuted },
            expected: Some(expected),
            observed: best,
            expected_classes: hashes(&expected_set),
            observed_classes: hashes(&observed_set),
            detail: detail.join("; "),
            candidates_examined: examined,
        });
        Ok(())
    }

    fn exhaustive(&mut self, id: CheckId, n: usize, r: u32) -> Result<(), VerifyError> {
        let (nn, rr) = (n as u64, u64::from(r));
        let ru = r as usize;
        let strong = |extra: Constraints| Constraints { strong: true, ..extra };
        match id {
            CheckId::Vz => {
                let c = strong(Constraints {
                    symmetric: true,
                    rad_out_eq: Some(r),
                    ..Default::default()
                });
                let task = SearchTask::new(n, c, Objective::MaxSize, Mode::RowCapped);
                let expected = 2 * closed_form(BoundName::VizingF, BoundParams::nr(nn, rr))?;
                self.compare(id, n, r, vec![task], expected, vz_members(n, r)?)
            }
            CheckId::Dsv11 => {
                let tasks = splits(n)
                    .map(|(p, q)| {
                        let c = strong(Constraints {
                            symmetric: true,
                            bipartite: Some(BipartiteConstraint::Classes { p, q }),
                            rad_out_eq: Some(r),
                            ..Default::default()
                        });
                        SearchTask::new(n, c, Objective::MaxSize, Mode::Backtracking)
                    })
                    .collect();
                let expected = 2 * closed_form(BoundName::Dsv11, BoundParams::nr(nn, rr))?;
                self.compare(id, n, r, tasks, expected, dsv11_members(n, ru)?)
            }
            CheckId::Fridman => {
                let c = Constraints {
                    rad_out_eq: Some(r),
                    ..Default::default()
                };
                let task = SearchTask::new(n, c, Objective::MaxSize, Mode::Full);
                let expected = closed_form(BoundName::Fridman, BoundParams::nr(nn, rr))?;
                if r == 2 {
                    self.fridman_two(n, task, expected)
                } else {
                    self.compare(id, n, r, vec![task], expected, fridman_members(n, ru)?)
                }
            }
            CheckId::Rad3 | CheckId::Biconn => {
                let c = strong(Constraints {
                    rad_out_eq: Some(r),
                    ..Default::default()
                });
                let task = SearchTask::new(n, c, Objective::MaxSize, Mode::RowCapped);
                let expected = closed_form(BoundName::BiconnGeneral, BoundParams::nr(nn, rr))?;
                let family = (1..=(n + 2 - 2 * ru) / 2)
                    .map(|s| families::d_nrs(n, ru, s))
                    .collect::<Result<Vec<_>, _>>()?;
                self.compare(id, n, r, vec![task], expected, family)
            }
            CheckId::Gamma2r1 | CheckId::Radconj => {
                let c = strong(Constraints {
                    rad2_eq: Some(r),
                    ..Default::default()
                });
                let task = SearchTask::new(n, c, Objective::MaxSize, Mode::Backtracking);
                let family = if id == CheckId::Gamma2r1 {
                    vec![families::gamma_bar(ru)?]
                } else {
                    radconj_members(n, ru)?
                };
                let expected = family[0].arc_count() as u64;
                self.compare(id, n, r, vec![task], expected, family)
            }
            CheckId::Bipdi => {
                let c = Constraints {
                    bipartite: Some(BipartiteConstraint::Any),
                    rad_out_eq: Some(r),
                    ..Default::default()
                };
                let task = SearchTask::new(n, c, Objective::MaxSize, Mode::RowCapped);
                let expected = closed_form(BoundName::BipDigraph, BoundParams::nr(nn, rr))?;
                let family = bipdi_members(n, ru)?
                    .into_iter()
                    .filter(|m| m.extremal)
                    .map(|m| m.digraph)
                    .collect();
                self.compare(id, n, r, vec![task], expected, family)
            }
            CheckId::Bipbiconn => {
                let tasks = splits(n)
                    .map(|(p, q)| {
                        let c = strong(Constraints {
                            bipartite: Some(BipartiteConstraint::Classes { p, q }),
                            rad_out_eq: Some(r),
                            ..Default::default()
                        });
                        SearchTask::new(n, c, Objective::MaxSize, Mode::Backtracking)
                    })
                    .collect();
                let expected = closed_form(BoundName::BipBiconnConj, BoundParams::nr(nn, rr))?;
                let family = vec![families::d_nrs_bipartite(n, ru)?.digraph];
                self.compare(id, n, r, tasks, expected, family)
            }
            CheckId::Prop34 => self.prop34(n, r),
            CheckId::Prop54 => self.prop54(n, r),
            CheckId::AsympRemark => Err(VerifyError::UnsupportedDepth {
                id,
                depth: Depth::Exhaustive,
            }),
        }
    }

    /// Outradius 2: the extremal digraphs are those with every outdegree
    /// `n - 2`, compared by labeled count.
    fn fridman_two(&mut self, n: usize, task: SearchTask, expected: u64) -> Result<(), VerifyError> {
        let rep = self.search(task.clone())?;
        // Labeled digraphs with constant outdegree n-2 and outradius 2.
        let mut count = 0u64;
        let total = (n as u64 - 1).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut rows = vec![0u64; n];
            for (v, row) in rows.iter_mut().enumerate() {
                let k = (c % (n as u64 - 1)) as usize;
                c /= n as u64 - 1;
                let missing = if k >= v { k + 1 } else { k };
                *row = full_mask(n) & !(1 << v) & !(1 << missing);
            }
            let outradius = (0..n).map(|v| ecc_and_sum(&rows, n, v).0).min();
            if outradius == Some(2) {
                count += 1;
            }
        }
        let all_regular = rep
            .iso_classes
            .iter()
            .all(|c| c.metrics.outdeg.iter().all(|&d| d == n - 2));
        let ok = rep.extremal_value == Some(expected) && all_regular && rep.extremal_labeled_count == count;
        if !ok {
            if let Some(c) = rep
                .iso_classes
                .iter()
                .find(|c| c.metrics.outdeg.iter().any(|&d| d != n - 2))
            {
                self.refute_with(&c.digraph(), &task);
            }
        }
        self.certificates.extend(rep.certificates());
        self.cases.push(CaseEvidence {
            n,
            r: 2,
            range: Range::Theorem,
            verdict: if ok { Verdict::Confirmed } else { Verdict::Refuted },
            expected: Some(expected),
            observed: rep.extremal_value,
            expected_classes: Vec::new(),
            observed_classes: rep.iso_classes.iter().map(|c| c.hash.clone()).collect(),
            detail: format!(
                "{} labeled extremal digraphs, {} labeled digraphs with all outdegrees n-2 and outradius 2",
                rep.extremal_labeled_count, count
            ),
            candidates_examined: rep.candidates_examined,
        });
        Ok(())
    }

    fn prop34(&mut self, n: usize, r: u32) -> Result<(), VerifyError> {
        let c = Constraints {
            strong: true,
            rad_out_eq: Some(r),
            ..Default::default()
        };
        let mode = if n <= 5 { Mode::Full } else { Mode::RowCapped };
        let task = SearchTask::new(n, c, Objective::CountExtremal, mode);
        let bound = (2 * n as u32 + 1).saturating_sub(2 * r);
        let res = scan(&task.clone().with_threads(self.threads), || {
            DegreeScan::new(move |_, _| bound)
        })?;
        self.degree_case(CheckId::Prop34, n, r, task, res.visitor, res.examined, |d, r| {
            check_outradius_degree_bound(d, r)
                .map(|rep| {
                    rep.equality
                        .iter()
                        .all(|e| e.degree_split_matches && e.disjoint_paths.is_some())
                })
                .unwrap_or(false)
        })
    }

    fn prop54(&mut self, n: usize, r: u32) -> Result<(), VerifyError> {
        let mut first = true;
        for (p, q) in splits(n) {
            let c = Constraints {
                strong: true,
                bipartite: Some(BipartiteConstraint::Classes { p, q }),
                rad_out_eq: Some(r),
                ..Default::default()
            };
            let mode = if p * q <= 10 { Mode::Full } else { Mode::RowCapped };
            let task = SearchTask::new(n, c, Objective::CountExtremal, mode);
            let first_mask = full_mask(p);
            let res = scan(&task.clone().with_threads(self.threads), || {
                DegreeScan::new(move |v, _| {
                    let opp = if first_mask >> v & 1 == 1 { q } else { p } as u32;
                    (2 * opp).saturating_sub(r - 2)
                })
            })?;
            let part = VertexPartition::from_first_class(n, first_mask).expect("valid split");
            self.degree_case(CheckId::Prop54, n, r, task, res.visitor, res.examined, |d, r| {
                check_bipartite_degree_bound(d, &part, r)
                    .map(|rep| {
                        rep.equality.iter().all(|e| {
                            e.degree_split_matches
                                && e.disjoint_paths.is_some()
                                && e.all_shortest_paths_disjoint != Some(false)
                        })
                    })
                    .unwrap_or(false)
            })?;
            first = false;
        }
        if first {
            self.push(CheckId::Prop54, n, r, true, Some(0), Some(0), "no class split".into());
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn degree_case(
        &mut self,
        id: CheckId,
        n: usize,
        r: u32,
        task: SearchTask,
        scan: DegreeScan<impl Fn(usize, &Leaf<'_>) -> u32>,
        examined: u64,
        equality_ok: impl Fn(&DenseDigraph, u32) -> bool,
    ) -> Result<(), VerifyError> {
        let mut bad_equality = 0usize;
        for rows in &scan.equality {
            let d = DenseDigraph::from_rows(n, rows)?;
            if !equality_ok(&d, r) {
                bad_equality += 1;
                self.refute_with(&d, &task);
            }
        }
        if let Some(rows) = &scan.violation {
            let d = DenseDigraph::from_rows(n, rows)?;
            self.refute_with(&d, &task);
        }
        let ok = scan.violations == 0 && bad_equality == 0;
        self.cases.push(CaseEvidence {
            n,
            r,
            range: range_of(id, n, r),
            verdict: if ok { Verdict::Confirmed } else { Verdict::Refuted },
            expected: Some(0),
            observed: Some(scan.violations),
            expected_classes: Vec::new(),
            observed_classes: Vec::new(),
            detail: format!(
                "{} digraphs scanned, {} violating vertices, {} digraphs meeting the bound with equality, {} of those lacking the equality structure",
                scan.digraphs,
                scan.violations,
                scan.equality_count,
                bad_equality
            ),
            candidates_examined: examined,
        });
        Ok(())
    }

    fn asymptotic(&mut self, params: &CheckParams) -> Result<(), VerifyError> {
        for r in params.r_min.max(4)..=params.r_max {
            let ru = r as usize;
            let lo = params.n_min.max(2 * ru);
            let mut values: Vec<(usize, i64)> = Vec::new();
            for n in lo..=params.n_max {
                let arcs = families::d_nrs_bipartite(n, ru)?.digraph.arc_count() as i64;
                let n_i = n as i64;
                values.push((n, 2 * arcs - (n_i * n_i - 2 * (r as i64 - 2) * n_i)));
            }
            // Bounded means: past the first two orders, the defect depends
            // only on the parity of n.
            let settled = values.iter().skip(2).all(|&(n, v)| {
                values
                    .iter()
                    .skip(2)
                    .filter(|&&(m, _)| m % 2 == n % 2)
                    .all(|&(_, w)| w == v)
            });
            let spread = values.iter().map(|v| v.1).max().unwrap_or(0) - values.iter().map(|v| v.1).min().unwrap_or(0);
            self.push(
                CheckId::AsympRemark,
                params.n_max,
                r,
                settled && values.len() > 2,
                None,
                Some(spread as u64),
                format!(
                    "2|A| - (n^2 - 2(r-2)n) over n = {lo}..={}: {:?}",
                    params.n_max,
                    values.iter().map(|v| v.1).collect::<Vec<_>>()
                ),
            );
        }
        Ok(())
    }
}

/// Arcs of a blow-up where vertex `x` becomes a block of `sizes[x]`
/// vertices, counted from the base arcs.
fn blowup_arcs(base: &DenseDigraph, sizes: &[usize], cliques: bool) -> u64 {
    let between: usize = base.arcs().map(|(x, y)| sizes[x] * sizes[y]).sum();
    let inside: usize = if cliques {
        sizes.iter().map(|k| k * (k - 1)).sum()
    } else {
        0
    };
    (between + inside) as u64
}

fn splits(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n / 2).map(move |p| (p, n - p))
}

fn vz_members(n: usize, r: u32) -> Result<Vec<DenseDigraph>, VerifyError> {
    Ok(match r {
        1 => vec![DenseDigraph::complete(n)?],
        2 => {
            let mut missing: Vec<(usize, usize)> = (0..n / 2).map(|k| (2 * k, 2 * k + 1)).collect();
            if n % 2 == 1 {
                missing.push((n - 1, 0));
            }
            let mut arcs = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let gone = missing.iter().any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j));
                    if i != j && !gone {
                        arcs.push((i, j));
                    }
                }
            }
            vec![DenseDigraph::from_arc_list(n, &arcs)?]
        }
        _ => {
            let ru = r as usize;
            (1..=(n + 2 - 2 * ru) / 2)
                .map(|s| families::g_nrs(n, ru, s))
                .collect::<Result<_, _>>()?
        }
    })
}

fn dsv11_members(n: usize, r: usize) -> Result<Vec<DenseDigraph>, VerifyError> {
    let total = n + 3 - 2 * r;
    let mut out = Vec::new();
    for a in 1..total {
        for b in 1..total - a {
            let c = total - a - b;
            let m = families::bip_cycle_blowup(n, r, a, b, c)?;
            if m.extremal_profile {
                out.push(m.digraph);
            }
        }
    }
    Ok(out)
}

/// For `r = 2` one representative: every vertex misses only its cycle
/// successor.
fn fridman_members(n: usize, r: usize) -> Result<Vec<DenseDigraph>, VerifyError> {
    if r == 2 {
        return Ok(vec![DenseDigraph::directed_cycle(n)?.complement()]);
    }
    let mut out = Vec::new();
    for i in 1..=r - 2 {
        for s in 1..=n - r {
            out.push(families::gamma_star_blowup(n, r, i, s)?);
        }
    }
    Ok(out)
}

fn radconj_members(n: usize, q: usize) -> Result<Vec<DenseDigraph>, VerifyError> {
    let mut out = Vec::new();
    for i in 1..=q - 2 {
        for s in 1..=n - q {
            out.push(families::gamma_bar_blowup(n, q, i, s)?);
        }
    }
    Ok(out)
}

fn bipdi_members(n: usize, r: usize) -> Result<Vec<families::BipDigraphExtremal>, VerifyError> {
    let total = n + 2 - r;
    let mut out = Vec::new();
    for j in families::bip_digraph_placements(r) {
        for a in 1..total {
            for b in 1..total - a {
                let c = total - a - b;
                match families::bip_digraph_extremal(n, r, a, b, c, j) {
                    Ok(m) => out.push(m),
                    Err(FamilyError::Domain { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    Ok(out)
}

/// Per-vertex total-degree bound scan; keeps digraphs meeting the bound
/// with equality for a structural follow-up.
struct DegreeScan<B> {
    bound: B,
    digraphs: u64,
    violations: u64,
    violation: Option<Vec<u64>>,
    equality_count: u64,
    equality: Vec<Vec<u64>>,
}

const EQUALITY_SAMPLE: usize = 512;

impl<B: Fn(usize, &Leaf<'_>) -> u32> DegreeScan<B> {
    fn new(bound: B) -> Self {
        DegreeScan {
            bound,
            digraphs: 0,
            violations: 0,
            violation: None,
            equality_count: 0,
            equality: Vec::new(),
        }
    }
}

impl<B: Fn(usize, &Leaf<'_>) -> u32 + Send> Visitor for DegreeScan<B> {
    fn visit(&mut self, leaf: &Leaf<'_>) {
        self.digraphs += 1;
        let mut equal = false;
        for v in 0..leaf.n {
            let deg = leaf.rows[v].count_ones() + leaf.cols[v].count_ones();
            let b = (self.bound)(v, leaf);
            if deg > b {
                self.violations += 1;
                self.violation.get_or_insert_with(|| leaf.rows.to_vec());
            } else if deg == b {
                equal = true;
            }
        }
        if equal {
            self.equality_count += 1;
            if self.equality.len() < EQUALITY_SAMPLE {
                self.equality.push(leaf.rows.to_vec());
            }
        }
    }

    fn merge(&mut self, later: Self) {
        self.digraphs += later.digraphs;
        self.violations += later.violations;
        if self.violation.is_none() {
            self.violation = later.violation;
        }
        self.equality_count += later.equality_count;
        let room = EQUALITY_SAMPLE - self.equality.len();
        self.equality.extend(later.equality.into_iter().take(room));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(id: CheckId, depth: Depth) -> VerificationReport {
        verify_theorem(&TheoremCheck::new(id, depth).unwrap()).unwrap()
    }

    #[test]
    fn registry_lists_every_check() {
        let checks = list_checks();
        assert_eq!(checks.len(), CheckId::ALL.len());
        let bip = checks.iter().find(|c| c.id == CheckId::Bipbiconn).unwrap();
        let ex = bip.depths.iter().find(|d| d.depth == Depth::Exhaustive).unwrap();
        assert!(ex.extended);
        assert_eq!(ex.supported, CheckParams::single(8, 4));
        let asym = checks.iter().find(|c| c.id == CheckId::AsympRemark).unwrap();
        assert_eq!(asym.depths.len(), 1);
        assert_eq!(asym.depths[0].depth, Depth::FormulaOnly);
        assert_eq!("rad3".parse::<CheckId>().unwrap(), CheckId::Rad3);
        assert_eq!("asymp-remark".parse::<CheckId>().unwrap(), CheckId::AsympRemark);
    }

    #[test]
    fn formula_and_family_depths_confirm() {
        for info in list_checks() {
            for d in &info.depths {
                if d.depth == Depth::Exhaustive {
                    continue;
                }
                let rep = run(info.id, d.depth);
                assert_eq!(
                    rep.verdict,
                    Verdict::Confirmed,
                    "{} {:?}: {:#?}",
                    info.id,
                    d.depth,
                    rep.cases
                        .iter()
                        .filter(|c| c.verdict != Verdict::Confirmed)
                        .collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn out_of_range_is_an_error() {
        let check = TheoremCheck::new(CheckId::Rad3, Depth::Exhaustive)
            .unwrap()
            .with_params(CheckParams::single(7, 3));
        assert!(matches!(verify_theorem(&check), Err(VerifyError::OutOfRange { .. })));
        assert!(matches!(
            TheoremCheck::new(CheckId::AsympRemark, Depth::Exhaustive),
            Err(VerifyError::UnsupportedDepth { .. })
        ));
    }

    #[test]
    fn small_exhaustive_checks_confirm() {
        for (id, params) in [
            (
                CheckId::Vz,
                CheckParams {
                    n_min: 2,
                    n_max: 6,
                    r_min: 1,
                    r_max: 3,
                },
            ),
            (
                CheckId::Fridman,
                CheckParams {
                    n_min: 3,
                    n_max: 5,
                    r_min: 2,
                    r_max: 4,
                },
            ),
            (
                CheckId::Bipdi,
                CheckParams {
                    n_min: 4,
                    n_max: 5,
                    r_min: 3,
                    r_max: 4,
                },
            ),
        ] {
            let check = TheoremCheck::new(id, Depth::Exhaustive).unwrap().with_params(params);
            let rep = verify_theorem(&check).unwrap();
            assert_eq!(rep.verdict, Verdict::Confirmed, "{id}: {:#?}", rep.cases);
            assert!(rep.counterexample.is_none());
            let back: VerificationReport = serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
            assert_eq!(back, rep);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let check = TheoremCheck::new(CheckId::Fridman, Depth::Exhaustive)
            .unwrap()
            .with_params(CheckParams::single(4, 2));
        let a = verify_theorem(&check).unwrap();
        let b = verify_theorem(&check).unwrap();
        assert_eq!(a.normalized_json(), b.normalized_json());
    }
}
