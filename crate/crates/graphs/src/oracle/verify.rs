//! Runs every oracle check in a fixed order and collects the verdicts.

use std::collections::HashMap;

use serde::Serialize;

use geodrg_core::filters::structure::{els_implied, sigma_parameters};
use geodrg_core::filters::{classify_main2, report_for_array, Branch, CheckVerdict, Classification, Derived, Status};
use geodrg_core::rational::{rat, to_i64};
use geodrg_core::spectrum::b_parameter;
use geodrg_core::{eigenvalues, geometric_to_array, GeometricArray, IntersectionArray, SpectrumData};

use super::cliques::{find_assemblies, find_cover, Assemblies, CoverSearch};
use super::cover::{check_c_factorization, check_phi_standard_sequence, measure_phi, measure_tau, verify_cover, LineGeometry};
use super::distance::DistanceData;
use super::drg::{verify_drg, DrgOutcome};
use super::lines::{check_dual_pasch, check_els, verify_design, DesignViolation, LineSets};
use super::local::{check_local_disjoint_cliques, check_local_eigenvalue, check_local_grid};
use super::sigma::{build_sigma, check_intersecting_lines, check_sigma, SigmaCheck};
use crate::graph::{Graph, LineCover};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Distance-2 pairs examined for `Σ`; `None` examines all of them.
    pub sigma_cap: Option<usize>,
    /// Node budget for the cover search when no cover is supplied.
    pub cover_budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { sigma_cap: Some(50), cover_budget: 1_000_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyInput {
    pub n: usize,
    pub edges: usize,
    /// `"file"` or `"search"`.
    pub cover: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lines: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub input: VerifyInput,
    pub derived: Derived,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumData>,
    pub checks: Vec<CheckVerdict>,
    pub branch: Classification,
    pub overall: Status,
}

impl VerifyReport {
    pub fn check(&self, name: &str) -> Option<&CheckVerdict> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckVerdict> {
        self.checks.iter().filter(|c| c.is_fail())
    }
}

struct Run<'a> {
    g: &'a Graph,
    opts: &'a VerifyOptions,
    checks: Vec<CheckVerdict>,
    derived: Derived,
    spectrum: Option<SpectrumData>,
    branch: Option<Classification>,
    cover_source: &'static str,
    lines: Option<usize>,
}

const ASSEMBLY_CHECKS: [&str; 6] = [
    "assembly_order",
    "assemblies_per_vertex",
    "assembly_per_edge",
    "line_meets_assembly",
    "outside_neighbors_in_assembly",
    "assembly_count",
];
const SIGMA_CHECKS: [&str; 5] = ["sigma_diameter", "sigma_geodetic", "sigma_clique_closed", "sigma_srg", "sigma_unique"];

/// Full oracle run. Stops at the first failure that leaves later checks
/// without a meaning (disconnected, not distance-regular, bad cover).
pub fn verify_all(g: &Graph, cover: Option<&LineCover>, opts: &VerifyOptions) -> VerifyReport {
    let mut run = Run {
        g,
        opts,
        checks: Vec::new(),
        derived: Derived::default(),
        spectrum: None,
        branch: None,
        cover_source: if cover.is_some() { "file" } else { "search" },
        lines: cover.map(LineCover::len),
    };
    let _ = run.go(cover);
    let branch = run.branch.unwrap_or_else(|| Classification {
        branch: Branch::NotApplicable,
        status: Status::NotApplicable,
        label: None,
        reasons: vec!["needs measured geometric parameters".into()],
    });
    let mut statuses: Vec<Status> = run.checks.iter().map(|c| c.status).collect();
    statuses.push(branch.status);
    VerifyReport {
        input: VerifyInput { n: g.n(), edges: g.edge_count(), cover: run.cover_source, lines: run.lines },
        derived: run.derived,
        spectrum: run.spectrum,
        checks: run.checks,
        branch,
        overall: Status::overall(&statuses),
    }
}

/// A property the theory forces only under a hypothesis: absence is a
/// failure when forced, otherwise it is recorded as not applicable.
fn property(name: &str, holds: bool, forced: bool, why: &str, witness: impl FnOnce(CheckVerdict) -> CheckVerdict) -> CheckVerdict {
    let base = CheckVerdict::compare(name, if holds { "holds" } else { "absent" }, "expected", if forced { "holds" } else { "unforced" }, holds || forced);
    match (holds, forced) {
        (true, _) => base.note(why),
        (false, true) => witness(base).note(why),
        (false, false) => witness(CheckVerdict::not_applicable(name, format!("property absent but not forced: {why}"))),
    }
}

impl Run<'_> {
    fn push(&mut self, v: CheckVerdict) -> Option<()> {
        let fail = v.is_fail();
        self.checks.push(v);
        (!fail).then_some(())
    }

    fn go(&mut self, cover: Option<&LineCover>) -> Option<()> {
        let g = self.g;
        let dist = match DistanceData::new(g) {
            Ok(d) => {
                self.push(CheckVerdict::compare("connected", "yes", "=", "yes", true).with("diameter", d.diameter()))?;
                d
            }
            Err(e) => return self.push(CheckVerdict::compare("connected", "no", "=", "yes", false).note(e.to_string())),
        };

        let arr = match verify_drg(g, &dist) {
            Ok(DrgOutcome::Regular(a)) => {
                self.push(CheckVerdict::compare("distance_regular", &a, "constant", "c_i, b_i", true))?;
                a
            }
            Ok(DrgOutcome::Violation(v)) => {
                let param = format!("{}_{}", v.parameter, v.distance);
                return self.push(
                    CheckVerdict::compare("distance_regular", v.found, "=", v.expected, false)
                        .with("x", v.x)
                        .with("y", v.y)
                        .with("parameter", param),
                );
            }
            Err(e) => return self.push(CheckVerdict::compare("distance_regular", "no", "=", "yes", false).note(e.to_string())),
        };
        self.derived.array = Some(arr.to_string());
        self.derived.n = Some(g.n() as i64);

        let spec = eigenvalues(&arr).ok();
        let b = match &spec {
            Some(s) if arr.diameter() >= 2 => b_parameter(&arr, s).ok(),
            _ => None,
        };
        self.derived.b = b.clone();
        self.spectrum = spec.clone();
        let r = spec.as_ref().and_then(|s| s.theta_min().exact().and_then(to_i64)).map(|t| -t);
        let (r, beta) = match r {
            Some(r) if r > 0 && arr.k() % r == 0 => (r, arr.k() / r),
            _ => {
                return self.push(CheckVerdict::not_applicable("geometric_parameters", "-theta_min is not an integer dividing k"));
            }
        };

        let searched;
        let cover = match cover {
            Some(c) => c,
            None => match find_cover(g, (beta + 1) as usize, self.opts.cover_budget) {
                CoverSearch::Found(c) => {
                    self.lines = Some(c.len());
                    self.push(CheckVerdict::compare("cover_search", c.len(), "lines of size", beta + 1, true))?;
                    searched = c;
                    &searched
                }
                CoverSearch::None => {
                    return self.push(
                        CheckVerdict::compare("cover_search", "none", "exists", "Delsarte cover", false)
                            .note("no partition of the edges into cliques of size 1 + k/r"),
                    );
                }
                CoverSearch::BudgetExceeded { nodes } => {
                    let mut v = CheckVerdict::not_applicable("cover_search", format!("node budget exhausted after {nodes} nodes"));
                    v.status = Status::Indeterminate;
                    self.checks.push(v);
                    return None;
                }
            },
        };

        let cover_checks = verify_cover(g, cover, r, beta);
        let cover_ok = cover_checks.iter().all(|c| !c.is_fail());
        self.checks.extend(cover_checks);
        if !cover_ok {
            return None;
        }

        let d = arr.diameter();
        let geom = LineGeometry::new(&dist, cover);
        self.push(CheckVerdict::le("line_distance_bound", geom.max_distance() as i64, d as i64 - 1))?;
        let phi = match measure_phi(&dist, &geom, cover) {
            Ok(p) => p,
            Err(v) => return self.push(CheckVerdict::compare("phi_constant", v.found, "=", v.expected, false).note(v.to_string())),
        };
        self.push(CheckVerdict::compare("phi_constant", join(&phi), "over all", "vertex/line pairs", true))?;
        let tau = match measure_tau(&dist, &geom, cover) {
            Ok(t) => t,
            Err(v) => return self.push(CheckVerdict::compare("tau_constant", v.found, "=", v.expected, false).note(v.to_string())),
        };
        self.push(CheckVerdict::compare("tau_constant", join(&tau), "over all", "vertex pairs", true))?;
        self.push(check_c_factorization(&arr, &phi, &tau))?;

        let geo = match GeometricArray::new(phi[..d.min(phi.len())].to_vec(), tau.clone(), beta) {
            Ok(geo) => geo,
            Err(e) => return self.push(CheckVerdict::compare("geometric_array", "measured", "valid", "", false).note(e.to_string())),
        };
        self.derived.geometric = Some(geo.clone());
        let formula = geometric_to_array(&geo).map(|a| a.to_string()).unwrap_or_else(|e| e.to_string());
        self.checks.push(CheckVerdict::compare("formula_array", &formula, "=", &arr, formula == arr.to_string()));
        self.checks.push(check_phi_standard_sequence(&arr, r, beta, geo.phis()));
        self.checks.push(battery(&arr));
        self.branch = Some(classify_main2(&geo, b.as_ref()));

        self.structure(&dist, &geom, cover, &arr, &geo, b.as_ref().and_then(|b| b.exact_value()));
        Some(())
    }

    fn structure(
        &mut self,
        dist: &DistanceData,
        geom: &LineGeometry,
        cover: &LineCover,
        arr: &IntersectionArray,
        geo: &GeometricArray,
        b: Option<geodrg_core::Rational>,
    ) {
        let g = self.g;
        let d = geo.diameter();
        let (r, beta) = (geo.r(), geo.beta());
        let phi1 = if d >= 2 { geo.phi(1) } else { 1 };
        let deep = d >= 3 && phi1 >= 2;
        let sets = LineSets::new(dist, geom, cover);

        let els = sets.as_ref().map(|s| check_els(dist, geom, cover, s));
        let els_holds = matches!(els, Some(Ok(())));
        match &els {
            None => self.checks.push(CheckVerdict::not_applicable("els", "more than 64 lines through a vertex")),
            Some(res) => {
                let forced = d >= 3 && els_implied(geo);
                let why = if forced { "beta reaches the sufficient bound" } else { "beta below the sufficient bound or D < 3" };
                self.checks.push(property("els", res.is_ok(), forced, why, |v| match res {
                    Err(w) => v.with("x", w.x).with("line", w.line).with("y1", w.y1).with("y2", w.y2),
                    Ok(()) => v,
                }));
            }
        }

        let pasch = check_dual_pasch(g, cover);
        let pasch_forced = els_holds && deep;
        let why = if pasch_forced { "ELS holds with D >= 3 and phi_1 >= 2" } else { "ELS absent, D < 3 or phi_1 = 1" };
        self.checks.push(property("dual_pasch", pasch.is_ok(), pasch_forced, why, |v| match &pasch {
            Err(w) => v.with("edge", format!("{},{}", w.x, w.y)).with("non_adjacent", format!("{},{}", w.u, w.v)),
            Ok(()) => v,
        }));

        let assemblies: Option<Assemblies> = (pasch.is_ok() && deep).then(|| find_assemblies(g, cover, r, beta, phi1));
        match &assemblies {
            Some(a) => self.checks.extend(a.verdicts.iter().cloned()),
            None => {
                for n in ASSEMBLY_CHECKS {
                    self.checks.push(CheckVerdict::not_applicable(n, "needs the dual Pasch axiom, D >= 3 and phi_1 >= 2"));
                }
            }
        }

        self.checks.push(if phi1 == 1 && d >= 2 {
            let want = format!("{r} disjoint cliques of order {beta}");
            match check_local_disjoint_cliques(g, r as usize, beta as usize) {
                Ok(()) => CheckVerdict::compare("local_structure", &want, "=", &want, true),
                Err(v) => CheckVerdict::compare("local_structure", &v.reason, "=", want, false).with("x", v.x),
            }
        } else if let Some(a) = assemblies.as_ref().filter(|a| a.verdicts.iter().all(|v| !v.is_fail())) {
            let ext = phi1 - 1;
            let want = format!("{ext}-clique extension of {}x{r} grid", beta / ext);
            match check_local_grid(g, cover, &a.cliques, &a.incidence, phi1 as usize) {
                Ok(s) => {
                    let got = format!("{}-clique extension of {}x{} grid", s.extension, s.rows, s.cols);
                    CheckVerdict::compare("local_structure", &got, "=", &want, got == want)
                }
                Err(v) => CheckVerdict::compare("local_structure", &v.reason, "=", want, false).with("x", v.x),
            }
        } else {
            CheckVerdict::not_applicable("local_structure", "needs phi_1 = 1, or assemblies")
        });

        self.checks.push(match (&b, d >= 3) {
            (Some(b), true) => {
                let bound = -(b + rat(1));
                let e = check_local_eigenvalue(g, &bound);
                let v = CheckVerdict::compare("local_eigenvalue", format!("{:.6}", e.min), ">=", &bound, e.violation.is_none())
                    .with("vertex", e.violation.unwrap_or(e.vertex))
                    .with("decided_exactly", e.escalated);
                v
            }
            (None, true) => CheckVerdict::not_applicable("local_eigenvalue", "b is not rational"),
            (_, false) => CheckVerdict::not_applicable("local_eigenvalue", "needs D >= 3"),
        });

        match (&sets, els_holds && deep) {
            (Some(s), true) => self.sigma(dist, cover, s, geo),
            _ => {
                for n in SIGMA_CHECKS {
                    self.checks.push(CheckVerdict::not_applicable(n, "needs ELS, D >= 3 and phi_1 >= 2"));
                }
            }
        }

        self.checks.push(match (&sets, els_holds && deep) {
            (Some(s), true) => {
                let tau2 = geo.tau(2) as usize;
                let want = format!("2-({r},{tau2},1)");
                let res: Result<Vec<usize>, DesignViolation> =
                    (0..g.n() as u32).map(|x| verify_design(cover, s, x, tau2)).collect();
                match res {
                    Ok(blocks) => CheckVerdict::compare("design", &want, "at every vertex", "", true).with("blocks", blocks[0]),
                    Err(DesignViolation::BlockSize { x, block, expected }) => {
                        CheckVerdict::compare("design", block.len(), "=", expected, false).with("x", x)
                    }
                    Err(DesignViolation::PairCount { x, lines, count }) => CheckVerdict::compare("design", count, "=", 1, false)
                        .with("x", x)
                        .with("lines", format!("{},{}", lines.0, lines.1)),
                }
            }
            _ => CheckVerdict::not_applicable("design", "needs ELS, D >= 3 and phi_1 >= 2"),
        });
        let _ = arr;
    }

    fn sigma(&mut self, dist: &DistanceData, cover: &LineCover, sets: &LineSets, geo: &GeometricArray) {
        let g = self.g;
        let mut pairs = Vec::new();
        let mut complete = true;
        'outer: for x in 0..g.n() as u32 {
            for &(y, _) in sets.at(x) {
                if y > x {
                    if self.opts.sigma_cap.is_some_and(|c| pairs.len() >= c) {
                        complete = false;
                        break 'outer;
                    }
                    pairs.push((x, y));
                }
            }
        }
        let mut seen: HashMap<Vec<u32>, SigmaCheck> = HashMap::new();
        let mut order: Vec<Vec<u32>> = Vec::new();
        let mut first_pair: HashMap<Vec<u32>, (u32, u32)> = HashMap::new();
        for &(x, y) in &pairs {
            let s = build_sigma(dist, cover, sets, x, y).expect("pair at distance 2");
            if !seen.contains_key(&s.vertices) {
                let chk = check_sigma(g, dist, cover, &s);
                first_pair.insert(s.vertices.clone(), (x, y));
                order.push(s.vertices.clone());
                seen.insert(s.vertices, chk);
            }
        }
        let checks: Vec<(&(u32, u32), &SigmaCheck)> = order.iter().map(|v| (&first_pair[v], &seen[v])).collect();
        let tag = |v: CheckVerdict| v.with("pairs", pairs.len()).with("distinct", order.len());
        let at = |v: CheckVerdict, p: &(u32, u32)| v.with("x", p.0).with("y", p.1);

        let bad = checks.iter().find(|(_, c)| c.diameter != Some(2));
        self.checks.push(tag(match bad {
            None => CheckVerdict::compare("sigma_diameter", 2, "=", 2, true),
            Some((p, c)) => at(CheckVerdict::compare("sigma_diameter", fmt_opt(c.diameter), "=", 2, false), p),
        }));

        let bad = checks.iter().find_map(|(p, c)| c.geodetic_escape.map(|e| (p, e)));
        self.checks.push(tag(match bad {
            None => CheckVerdict::compare("sigma_geodetic", "closed", "=", "closed", true),
            Some((p, (u, v, w))) => at(
                CheckVerdict::compare("sigma_geodetic", "escapes", "=", "closed", false).with("path", format!("{u}-{w}-..-{v}")),
                p,
            ),
        }));

        let bad = checks.iter().find_map(|(p, c)| c.partial_line.map(|l| (p, l)));
        self.checks.push(tag(match bad {
            None => CheckVerdict::compare("sigma_clique_closed", "closed", "=", "closed", true),
            Some((p, l)) => at(CheckVerdict::compare("sigma_clique_closed", "partial line", "=", "closed", false).with("line", l), p),
        }));

        let (v, k, lambda, mu) = sigma_parameters(geo);
        let want = format!("({v},{k},{lambda},{mu})");
        let bad = checks.iter().find(|(_, c)| c.srg.as_ref().map(|s| format!("({},{},{},{})", s.0, s.1, s.2, s.3)).ok() != Some(want.clone()));
        self.checks.push(tag(match bad {
            None => CheckVerdict::compare("sigma_srg", &want, "=", &want, true),
            Some((p, c)) => {
                let got = match &c.srg {
                    Ok(s) => format!("({},{},{},{})", s.0, s.1, s.2, s.3),
                    Err(e) => e.clone(),
                };
                at(CheckVerdict::compare("sigma_srg", got, "=", &want, false), p)
            }
        }));

        self.checks.push(tag(match check_intersecting_lines(g, cover, &order, complete) {
            Ok(n) => {
                let v = CheckVerdict::compare("sigma_unique", n, "intersecting line pairs in exactly one", "Sigma", true);
                if complete {
                    v
                } else {
                    v.note("sampled family: checks at most one Sigma per pair")
                }
            }
            Err(((a, b), c)) => CheckVerdict::compare("sigma_unique", c, "=", 1, false).with("lines", format!("{a},{b}")),
        }));
    }
}

fn battery(arr: &IntersectionArray) -> CheckVerdict {
    let r = report_for_array(arr);
    let fails: Vec<String> = r.failures().map(|c| c.name.clone()).collect();
    let v = CheckVerdict::compare("parameter_battery", r.overall.as_str(), "=", "pass", r.overall != Status::Fail);
    if fails.is_empty() {
        v
    } else {
        v.note(format!("failing: {}", fails.join(", ")))
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_opt(v: Option<usize>) -> String {
    v.map_or("disconnected".into(), |d| d.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_hamming, build_johnson};

    fn names(r: &VerifyReport) -> Vec<&str> {
        r.checks.iter().map(|c| c.name.as_str()).collect()
    }

    #[test]
    fn johnson_passes_with_branch_b2() {
        let (g, c) = build_johnson(8, 3).unwrap();
        let r = verify_all(&g, Some(&c), &VerifyOptions { sigma_cap: None, ..Default::default() });
        assert_eq!(r.overall, Status::Pass, "{:#?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.branch.branch, Branch::B2);
        assert_eq!(r.check("sigma_srg").unwrap().lhs.as_deref(), Some("(21,10,5,4)"));
        assert_eq!(r.check("local_structure").unwrap().lhs.as_deref(), Some("1-clique extension of 5x3 grid"));
    }

    #[test]
    fn hamming_passes_with_branch_b1() {
        let (g, c) = build_hamming(3, 3).unwrap();
        let r = verify_all(&g, Some(&c), &VerifyOptions::default());
        assert_eq!(r.overall, Status::Pass, "{:#?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.branch.branch, Branch::B1);
        assert_eq!(r.check("assembly_order").unwrap().status, Status::NotApplicable);
        assert_eq!(r.check("design").unwrap().status, Status::NotApplicable);
    }

    #[test]
    fn deleted_edge_stops_at_distance_regularity() {
        let (g, c) = build_hamming(3, 3).unwrap();
        let r = verify_all(&g.without_edge(0, 1), Some(&c), &VerifyOptions::default());
        assert_eq!(r.overall, Status::Fail);
        assert_eq!(names(&r), vec!["connected", "distance_regular"]);
        assert!(r.check("distance_regular").unwrap().witness.values.contains_key("x"));
    }

    #[test]
    fn cover_is_found_when_absent() {
        let (g, _) = build_hamming(3, 3).unwrap();
        let r = verify_all(&g, None, &VerifyOptions::default());
        assert_eq!(r.overall, Status::Pass);
        assert_eq!(r.input.cover, "search");
    }
}
