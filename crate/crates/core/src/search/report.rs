use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::engine::PruningStats;
use super::task::{BipartiteConstraint, SearchTask};
use super::SearchError;
use crate::canon::CANON_LIMIT;
use crate::digraph::{Bits, DenseDigraph};
use crate::io::{parse_adm, to_adm};
use crate::metrics::{metric_summary, MetricSummary};

/// One isomorphism class of extremal digraphs, as its canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClass {
    pub adm: String,
    pub metrics: MetricSummary,
    pub hash: String,
}

impl IsoClass {
    pub fn new(canonical: &DenseDigraph) -> Self {
        let adm = to_adm(canonical);
        IsoClass {
            hash: adm_hash(&adm),
            metrics: metric_summary(canonical),
            adm,
        }
    }

    pub fn digraph(&self) -> DenseDigraph {
        parse_adm(&self.adm).expect("report holds valid adm")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub task: SearchTask,
    pub candidates_examined: u64,
    /// Arc count, Wiener index, or labeled count for COUNT_EXTREMAL.
    pub extremal_value: Option<u64>,
    pub extremal_labeled_count: u64,
    /// Sorted by canonical adjacency bit string.
    pub iso_classes: Vec<IsoClass>,
    pub wall_time_ms: u64,
    pub pruning: PruningStats,
}

impl SearchReport {
    /// JSON with run-dependent fields (timing, thread count, checkpoint
    /// path) cleared, for comparing runs.
    pub fn normalized_json(&self) -> String {
        let mut r = self.clone();
        r.wall_time_ms = 0;
        r.task.threads = 1;
        r.task.checkpoint_path = None;
        serde_json::to_string_pretty(&r).expect("report serializes")
    }

    pub fn certificates(&self) -> Vec<ExtremalCertificate> {
        self.iso_classes
            .iter()
            .map(|c| ExtremalCertificate {
                adm: c.adm.clone(),
                metrics: c.metrics.clone(),
                task: self.task.clone(),
                hash: c.hash.clone(),
            })
            .collect()
    }
}

pub fn adm_hash(adm: &str) -> String {
    hex::encode(Sha256::digest(adm.as_bytes()))
}

/// A self-contained witness that can be re-checked without the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalCertificate {
    pub adm: String,
    pub metrics: MetricSummary,
    pub task: SearchTask,
    pub hash: String,
}

impl ExtremalCertificate {
    pub fn new(d: &DenseDigraph, task: &SearchTask) -> Self {
        let adm = to_adm(d);
        ExtremalCertificate {
            hash: adm_hash(&adm),
            metrics: metric_summary(d),
            task: task.clone(),
            adm,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessVerdict {
    pub valid: bool,
    /// Names of fields or constraints that did not check out.
    pub mismatches: Vec<String>,
}

/// Recomputes a certificate's metrics and checks the task constraints.
pub fn verify_witness(cert: &ExtremalCertificate) -> WitnessVerdict {
    let mut bad = Vec::new();
    let d = match parse_adm(&cert.adm) {
        Ok(d) => d,
        Err(_) => {
            return WitnessVerdict {
                valid: false,
                mismatches: vec!["adm".into()],
            }
        }
    };
    if adm_hash(&cert.adm) != cert.hash {
        bad.push("hash".into());
    }
    let actual = metric_summary(&d);
    let claimed = serde_json::to_value(&cert.metrics).expect("metrics serialize");
    let fresh = serde_json::to_value(&actual).expect("metrics serialize");
    if let (Some(c), Some(f)) = (claimed.as_object(), fresh.as_object()) {
        for (k, v) in f {
            if c.get(k) != Some(v) {
                bad.push(format!("metrics.{k}"));
            }
        }
    }
    let c = &cert.task.constraints;
    let mut need = |ok: bool, name: &str| {
        if !ok {
            bad.push(format!("constraint.{name}"));
        }
    };
    need(d.order() == cert.task.n, "n");
    need(!c.strong || actual.strong, "strong");
    need(!c.symmetric || d.is_symmetric(), "symmetric");
    match c.bipartite {
        None => {}
        Some(BipartiteConstraint::Any) => need(actual.bipartite, "bipartite"),
        Some(BipartiteConstraint::Classes { p, .. }) => need(has_bipartition_of_size(&d, p), "bipartite"),
    }
    if let Some(r) = c.rad_out_eq {
        need(actual.rad_out == Some(r), "rad_out_eq");
    }
    if let Some(q) = c.rad2_eq {
        need(actual.rad2 == Some(q), "rad2_eq");
    }
    if let Some(dm) = c.diameter_eq {
        need(actual.diameter == Some(dm), "diameter_eq");
    }
    WitnessVerdict {
        valid: bad.is_empty(),
        mismatches: bad,
    }
}

/// True if some proper bipartition has a class of exactly `p` vertices.
/// Certificates carry canonical labelings, so the fixed classes of the
/// task are matched up to relabeling.
fn has_bipartition_of_size(d: &DenseDigraph, p: usize) -> bool {
    let n = d.order();
    let cols = d.in_rows();
    let mut colour = vec![None::<bool>; n];
    // reachable[k]: some choice of sides gives k vertices in the first class.
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let (mut sizes, mut stack) = ([0usize; 2], vec![start]);
        while let Some(u) = stack.pop() {
            let cu = colour[u].expect("coloured before push");
            sizes[usize::from(cu)] += 1;
            for w in Bits(d.out_row(u) | cols[u]) {
                match colour[w] {
                    None => {
                        colour[w] = Some(!cu);
                        stack.push(w);
                    }
                    Some(cw) if cw == cu => return false,
                    Some(_) => {}
                }
            }
        }
        let mut next = vec![false; n + 1];
        for k in (0..=n).filter(|&k| reachable[k]) {
            for s in sizes {
                if k + s <= n {
                    next[k + s] = true;
                }
            }
        }
        reachable = next;
    }
    reachable.get(p).copied().unwrap_or(false)
}

/// Groups witnesses into isomorphism classes. Classes are ordered by
/// canonical bit string; each lists the indices of its members.
pub fn classify_extremal(witnesses: &[DenseDigraph]) -> Result<Vec<(DenseDigraph, Vec<usize>)>, SearchError> {
    let Some(first) = witnesses.first() else {
        return Ok(Vec::new());
    };
    let n = first.order();
    if n > CANON_LIMIT {
        return Err(SearchError::Infeasible(format!(
            "classification needs order at most {CANON_LIMIT}, got {n}"
        )));
    }
    let mut groups: std::collections::BTreeMap<DenseDigraph, Vec<usize>> = Default::default();
    for (i, w) in witnesses.iter().enumerate() {
        if w.order() != n {
            return Err(SearchError::Invalid(format!(
                "witness {i} has order {}, expected {n}",
                w.order()
            )));
        }
        let c = crate::canon::canonical_form(w)?;
        groups.entry(c).or_default().push(i);
    }
    Ok(groups.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::task::{Constraints, Mode, Objective};

    #[test]
    fn certificate_round_trip_and_tamper() {
        let d = DenseDigraph::directed_cycle(4).unwrap();
        let mut t = SearchTask::new(4, Constraints::default(), Objective::MaxSize, Mode::Full);
        t.constraints.strong = true;
        t.constraints.rad_out_eq = Some(3);
        let cert = ExtremalCertificate::new(&d, &t);
        assert!(verify_witness(&cert).valid);

        let mut bad = cert.clone();
        bad.metrics.arc_count = 5;
        bad.metrics.rad_out = Some(2);
        let v = verify_witness(&bad);
        assert!(!v.valid);
        assert_eq!(v.mismatches, ["metrics.arc_count", "metrics.rad_out"]);

        let mut bad = cert.clone();
        bad.task.constraints.rad_out_eq = Some(2);
        assert_eq!(verify_witness(&bad).mismatches, ["constraint.rad_out_eq"]);

        let mut bad = cert;
        bad.adm = "4\n0100\n0010\n0001\n1000\n".replace("0010", "0011");
        let v = verify_witness(&bad);
        assert!(v.mismatches.contains(&"hash".to_string()));
    }

    #[test]
    fn classify_groups_relabelings() {
        let a = DenseDigraph::directed_cycle(4).unwrap();
        let b = a.relabel(&[2, 0, 3, 1]).unwrap();
        let c = DenseDigraph::complete(4).unwrap();
        let groups = classify_extremal(&[a, c, b]).unwrap();
        assert_eq!(groups.len(), 2);
        let sizes: Vec<usize> = groups.iter().map(|g| g.1.len()).collect();
        assert!(sizes.contains(&2) && sizes.contains(&1));
        assert!(groups[0].0 < groups[1].0);
        let mixed = classify_extremal(&[DenseDigraph::complete(3).unwrap(), DenseDigraph::complete(4).unwrap()]);
        assert!(mixed.is_err());
    }
}
