//! Candidate geometric arrays over a box of `(D, τ_D, β)`, screened by the
//! full filter battery.
//!
//! Candidates have `1 = φ_0 ≤ φ_1 ≤ … ≤ φ_{D-1} ≤ β` and
//! `1 = τ_1 ≤ τ_2 ≤ … ≤ τ_D`, since both sequences are monotone in any
//! geometric distance-regular graph.

use std::io::Write;
use std::ops::RangeInclusive;

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;

use geodrg_core::filters::{
    check_els_and_design, check_main1, check_order_constraints, report_for_geometric, CheckVerdict, Classification, Status,
};
use geodrg_core::{derive_counts, geometric_to_array, AlgebraicValue, GeometricArray, SpectrumData};

#[derive(Clone, Debug)]
pub struct EnumerationSpec {
    pub diameter: RangeInclusive<i64>,
    pub tau_d: RangeInclusive<i64>,
    pub beta: RangeInclusive<i64>,
    /// Fixed leading entries `φ_0, φ_1, …`.
    pub phi_prefix: Vec<i64>,
    /// Fixed leading entries `τ_1, τ_2, …`.
    pub tau_prefix: Vec<i64>,
    /// Checks whose failure does not exclude a candidate.
    pub ignore: Vec<String>,
}

impl EnumerationSpec {
    pub fn new(diameter: RangeInclusive<i64>, tau_d: RangeInclusive<i64>, beta: RangeInclusive<i64>) -> Self {
        EnumerationSpec { diameter, tau_d, beta, phi_prefix: Vec::new(), tau_prefix: Vec::new(), ignore: Vec::new() }
    }

    /// Rejects ranges below `D ≥ 3`, `τ_D ≥ 2`, `β ≥ 1` and unbounded boxes.
    pub fn validate(&self) -> Result<()> {
        let lows = [("D", &self.diameter, 3), ("tau_D", &self.tau_d, 2), ("beta", &self.beta, 1)];
        for (name, r, min) in lows {
            if !r.is_empty() && *r.start() < min {
                bail!("{name} range starts at {}, below the minimum {min}", r.start());
            }
        }
        if !self.diameter.is_empty() && *self.diameter.end() > 12 {
            bail!("D range ends at {}, above the supported maximum 12", self.diameter.end());
        }
        Ok(())
    }
}

/// One surviving candidate with its derived data and verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub geometric: GeometricArray,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub array: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumData>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<AlgebraicValue>,
    pub branch: Classification,
    pub overall: Status,
    pub checks: Vec<CheckVerdict>,
}

/// Nondecreasing sequences of length `len` with entries in `lo..=hi`,
/// starting with `prefix`, in lexicographic order.
fn monotone(len: usize, lo: i64, hi: i64, prefix: &[i64]) -> Vec<Vec<i64>> {
    fn go(cur: &mut Vec<i64>, len: usize, hi: i64, prefix: &[i64], out: &mut Vec<Vec<i64>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let from = *cur.last().unwrap();
        let pick: Vec<i64> = match prefix.get(cur.len()) {
            Some(&p) => vec![p].into_iter().filter(|&p| p >= from && p <= hi).collect(),
            None => (from..=hi).collect(),
        };
        for v in pick {
            cur.push(v);
            go(cur, len, hi, prefix, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len == 0 || hi < lo || prefix.first().is_some_and(|&p| p != lo) {
        return out;
    }
    go(&mut vec![lo], len, hi, prefix, &mut out);
    out
}

/// All candidates in the order `(D, τ_D, β, τ, φ)`.
pub fn candidates(spec: &EnumerationSpec) -> Vec<GeometricArray> {
    let mut out = Vec::new();
    for d in spec.diameter.clone() {
        let d = d as usize;
        for r in spec.tau_d.clone() {
            // τ_1..τ_{D-1} then τ_D = r
            let mut taus = monotone(d - 1, 1, r, &spec.tau_prefix);
            taus.retain_mut(|t| {
                t.push(r);
                spec.tau_prefix.get(d - 1).is_none_or(|&p| p == r)
            });
            for beta in spec.beta.clone() {
                let phis = monotone(d, 1, beta, &spec.phi_prefix);
                for tau in &taus {
                    for phi in &phis {
                        if let Ok(g) = GeometricArray::new(phi.clone(), tau.clone(), beta) {
                            out.push(g);
                        }
                    }
                }
            }
        }
    }
    out
}

/// The integer-only part of the battery, run before any spectrum is
/// computed. Every verdict here also appears in the full report.
fn cheap_reject(geo: &GeometricArray, counts: impl Fn(&&CheckVerdict) -> bool) -> bool {
    let failed = match geometric_to_array(geo) {
        Err(_) => Some("intersection_array"),
        Ok(a) => derive_counts(&a).is_err().then_some("layer_counts"),
    };
    if failed.is_some_and(|n| counts(&&CheckVerdict::not_applicable(n, ""))) {
        return true;
    }
    let mut v = check_order_constraints(geo);
    v.push(check_main1(geo));
    v.extend(check_els_and_design(geo));
    v.iter().filter(counts).any(CheckVerdict::is_fail)
}

fn screen(geo: GeometricArray, ignore: &[String]) -> Option<Record> {
    let counts = |c: &&CheckVerdict| !ignore.iter().any(|n| n == &c.name);
    if cheap_reject(&geo, counts) {
        return None;
    }
    let rep = report_for_geometric(&geo);
    if rep.checks.iter().filter(counts).any(CheckVerdict::is_fail) || rep.branch.status == Status::Fail {
        return None;
    }
    Some(Record {
        geometric: geo,
        array: rep.derived.array,
        n: rep.derived.n,
        spectrum: rep.spectrum,
        b: rep.derived.b,
        branch: rep.branch,
        overall: rep.overall,
        checks: rep.checks,
    })
}

/// Screens every candidate on `workers` threads; the result is sorted and
/// does not depend on the thread count.
pub fn run(spec: &EnumerationSpec, workers: Option<usize>) -> Result<Vec<Record>> {
    spec.validate()?;
    let cands = candidates(spec);
    let work = || cands.into_par_iter().filter_map(|g| screen(g, &spec.ignore)).collect::<Vec<_>>();
    let mut out = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build()?.install(work),
        None => work(),
    };
    out.sort_by_key(|r| sort_key(&r.geometric));
    Ok(out)
}

fn sort_key(g: &GeometricArray) -> (usize, i64, i64, Vec<i64>, Vec<i64>) {
    (g.diameter(), g.r(), g.beta(), g.taus().to_vec(), g.phis().to_vec())
}

pub fn write_jsonl(records: &[Record], mut w: impl Write) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_sequences() {
        assert_eq!(monotone(3, 1, 2, &[]), vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 2]]);
        assert_eq!(monotone(3, 1, 3, &[1, 3]), vec![vec![1, 3, 3]]);
        assert!(monotone(2, 1, 3, &[2]).is_empty());
    }

    #[test]
    fn candidate_order_and_prefixes() {
        let spec = EnumerationSpec::new(3..=3, 2..=3, 1..=2);
        let c = candidates(&spec);
        let keys: Vec<_> = c.iter().map(sort_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(c.iter().all(|g| g.taus()[2] >= 2 && g.phis()[2] <= g.beta()));
        let fixed = EnumerationSpec { phi_prefix: vec![1, 2], tau_prefix: vec![1, 2], ..EnumerationSpec::new(3..=3, 3..=3, 2..=2) };
        let c = candidates(&fixed);
        assert_eq!(c.iter().map(|g| g.phis().to_vec()).collect::<Vec<_>>(), vec![vec![1, 2, 2]]);
        assert!(c.iter().all(|g| g.taus() == [1, 2, 3]));
    }

    #[test]
    fn small_box_contains_hamming_and_johnson_points() {
        let recs = run(&EnumerationSpec::new(3..=3, 2..=3, 1..=6), Some(2)).unwrap();
        let has = |phi: &[i64], tau: &[i64], beta| {
            recs.iter().any(|r| r.geometric.phis() == phi && r.geometric.taus() == tau && r.geometric.beta() == beta)
        };
        assert!(has(&[1, 1, 1], &[1, 2, 3], 2));
        for beta in 3..=6 {
            assert!(has(&[1, 2, 3], &[1, 2, 3], beta), "J({},3)", beta + 3);
        }
    }

    #[test]
    fn minima_are_enforced() {
        assert!(EnumerationSpec::new(2..=3, 2..=3, 1..=2).validate().is_err());
        assert!(EnumerationSpec::new(3..=3, 1..=3, 1..=2).validate().is_err());
        assert!(EnumerationSpec::new(3..=3, 2..=3, 0..=2).validate().is_err());
        assert!(run(&EnumerationSpec::new(3..=3, 5..=4, 1..=2), None).unwrap().is_empty());
    }
}
