//! The feasibility battery and the assembled per-input report.

pub mod classify;
pub mod gram;
pub mod order;
pub mod spectral;
pub mod structure;
pub mod verdict;

use serde::Serialize;

use crate::algebraic::{AlgebraicValue, Eigenvalue};
use crate::params::{
    array_to_geometric, classical_geometric, classical_to_array, derive_counts, geometric_to_array,
    ClassicalParameterSet, GeometricArray, IntersectionArray,
};
use crate::rational::to_i64;
use crate::spectrum::{b_parameter, classical_eigenvalues, eigenvalues, SpectrumData};

pub use classify::{classify_main2, Branch, Classification};
pub use gram::{
    check_classical_identities, check_classical_inequalities, check_classical_items, check_gram_inequality, FilterError,
};
pub use order::check_order_constraints;
pub use spectral::{check_kpy, check_phi1_b_bound, check_spectral_constraints, check_theta_min};
pub use structure::{
    check_clique_gap, check_clique_intersection, check_els_and_design, check_main1, check_neumaier, els_bound,
};
pub use verdict::{CheckVerdict, Status, Witness};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportInput {
    Geometric { phi: Vec<i64>, tau: Vec<i64>, beta: i64 },
    Array { array: String },
    Classical { classical: String },
}

/// Quantities derived along the way, shown alongside the verdicts.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Derived {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub array: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric: Option<GeometricArray>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<AlgebraicValue>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub input: ReportInput,
    pub derived: Derived,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumData>,
    pub checks: Vec<CheckVerdict>,
    pub branch: Classification,
    pub overall: Status,
}

impl FeasibilityReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckVerdict> {
        self.checks.iter().filter(|c| c.is_fail())
    }
}

/// Full battery for postulated geometric parameters.
pub fn report_for_geometric(geo: &GeometricArray) -> FeasibilityReport {
    let input = ReportInput::Geometric { phi: geo.phis().to_vec(), tau: geo.taus().to_vec(), beta: geo.beta() };
    build(input, Some(geo.clone()), geometric_to_array(geo).map_err(|e| e.to_string()), None)
}

/// Battery for an intersection array; the geometric checks run when
/// `-theta_min` is an integer and the array inverts at that value.
pub fn report_for_array(arr: &IntersectionArray) -> FeasibilityReport {
    let input = ReportInput::Array { array: arr.to_string() };
    let geo = eigenvalues(arr).ok().and_then(|s| {
        let r = s.theta_min().exact().and_then(to_i64)?;
        array_to_geometric(arr, -r).ok()
    });
    build(input, geo, Ok(arr.clone()), None)
}

/// Battery for classical parameters, including the closed-form items.
pub fn report_for_classical(cp: &ClassicalParameterSet) -> FeasibilityReport {
    let input = ReportInput::Classical { classical: cp.to_string() };
    let arr = classical_to_array(cp).map_err(|e| e.to_string());
    let geo = classical_geometric(cp).ok().or_else(|| {
        let a = arr.as_ref().ok()?;
        let s = classical_eigenvalues(cp).ok()?;
        array_to_geometric(a, -to_i64(s.theta_min().exact()?)?).ok()
    });
    build(input, geo, arr, Some(cp))
}

fn build(
    input: ReportInput,
    geo: Option<GeometricArray>,
    arr: Result<IntersectionArray, String>,
    cp: Option<&ClassicalParameterSet>,
) -> FeasibilityReport {
    let mut checks = Vec::new();
    let mut derived = Derived { geometric: geo.clone(), ..Derived::default() };

    // cheap integer checks
    match &arr {
        Ok(a) => {
            derived.array = Some(a.to_string());
            checks.push(CheckVerdict::compare("intersection_array", a, "valid", "", true));
            match derive_counts(a) {
                Ok(c) => {
                    derived.n = Some(c.n);
                    let ks: Vec<String> = c.k.iter().map(i64::to_string).collect();
                    checks.push(CheckVerdict::compare("layer_counts", ks.join(","), "integral", "", true).with("n", c.n));
                }
                Err(e) => checks.push(CheckVerdict::compare("layer_counts", "k_i", "integral", "", false).note(e.to_string())),
            }
        }
        Err(e) => {
            checks.push(CheckVerdict::compare("intersection_array", "derived array", "valid", "", false).note(e.clone()));
            checks.push(CheckVerdict::not_applicable("layer_counts", "needs a valid intersection array"));
        }
    }
    let arr = arr.ok().filter(|a| derive_counts(a).is_ok());

    if let Some(cp) = cp {
        checks.extend(check_classical_identities(cp));
    }

    match &geo {
        Some(g) => {
            checks.extend(check_order_constraints(g));
            checks.push(check_main1(g));
            checks.extend(check_els_and_design(g));
        }
        None => {
            for n in ["order_constraints", "main1", "els_sufficient"] {
                checks.push(CheckVerdict::not_applicable(n, "needs geometric parameters"));
            }
        }
    }

    let spectrum = arr.as_ref().and_then(|a| match cp {
        Some(cp) => classical_eigenvalues(cp).ok().filter(|s| s.natural_order).or_else(|| eigenvalues(a).ok()),
        None => eigenvalues(a).ok(),
    });
    let b = match (&arr, &spectrum) {
        (Some(a), Some(s)) if a.diameter() >= 2 => b_parameter(a, s).ok(),
        _ => None,
    };
    derived.b = b.clone();

    match (&arr, &spectrum) {
        (Some(a), Some(s)) => {
            checks.extend(check_spectral_constraints(a, s, geo.as_ref().map(|g| g.phis())));
            checks.push(match &geo {
                Some(g) => check_theta_min(s, g.r()),
                None => CheckVerdict::not_applicable("theta_min_equals_minus_r", "needs geometric parameters"),
            });
        }
        _ => {
            for n in ["kpy", "delsarte_phi", "multiplicities_integral", "u_bounded_theta1", "theta_min_equals_minus_r"] {
                checks.push(CheckVerdict::not_applicable(n, "needs a spectrum"));
            }
        }
    }

    match (&geo, &b) {
        (Some(g), Some(b)) => checks.push(check_phi1_b_bound(g, b)),
        _ => checks.push(CheckVerdict::not_applicable("phi1_b_bound", "needs geometric parameters and b")),
    }

    if let (Some(cp), Some(g)) = (cp, &geo) {
        checks.extend(check_classical_items(cp, g));
    }

    // Gram inequality at theta_1 with s = beta and psi = phi_j
    if let Some(g) = &geo {
        for j in 1..g.diameter() {
            checks.push(match (&arr, &spectrum) {
                (Some(a), Some(s)) => gram_at(a, s.theta(1), j, g.beta(), g.phi(j)),
                _ => CheckVerdict::not_applicable(&format!("gram_j{j}"), "needs a spectrum"),
            });
        }
    }

    let branch = match &geo {
        Some(g) => classify_main2(g, b.as_ref()),
        None => {
            let mut c = classify_main2_na();
            c.reasons.push("needs geometric parameters".into());
            c
        }
    };

    let mut statuses: Vec<Status> = checks.iter().map(|c| c.status).collect();
    statuses.push(branch.status);
    let overall = Status::overall(&statuses);
    FeasibilityReport { input, derived, spectrum, checks, branch, overall }
}

fn gram_at(a: &IntersectionArray, theta: &Eigenvalue, j: usize, s: i64, psi: i64) -> CheckVerdict {
    match check_gram_inequality(a, theta, j, s, psi) {
        Ok(v) => v,
        Err(e) => CheckVerdict::not_applicable(&format!("gram_j{j}"), e.to_string()),
    }
}

fn classify_main2_na() -> Classification {
    Classification { branch: Branch::NotApplicable, status: Status::NotApplicable, label: None, reasons: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(p: &[i64], t: &[i64], b: i64) -> GeometricArray {
        GeometricArray::new(p.to_vec(), t.to_vec(), b).unwrap()
    }

    #[test]
    fn classical_families_pass() {
        for (g, branch) in [
            (geo(&[1, 2, 3], &[1, 2, 3], 5), Branch::B2),
            (geo(&[1, 3, 7], &[1, 3, 7], 14), Branch::B3),
            (geo(&[1, 2, 4], &[1, 3, 7], 7), Branch::B4OrB5),
            (geo(&[1, 1, 1], &[1, 2, 3], 2), Branch::B1),
        ] {
            let r = report_for_geometric(&g);
            assert_eq!(r.overall, Status::Pass, "{g}: {:#?}", r.failures().collect::<Vec<_>>());
            assert_eq!(r.branch.branch, branch);
        }
    }

    #[test]
    fn registry_order_is_fixed() {
        let a = report_for_geometric(&geo(&[1, 2, 3], &[1, 2, 3], 5));
        let b = report_for_geometric(&geo(&[1, 2, 3], &[1, 4, 6], 30));
        let names = |r: &FeasibilityReport| r.checks.iter().map(|c| c.name.clone()).collect::<Vec<_>>();
        assert_eq!(names(&a), names(&b));
        assert_eq!(names(&a)[..2], ["intersection_array".to_string(), "layer_counts".to_string()]);
    }

    #[test]
    fn main1_failure_fails_report() {
        let r = report_for_geometric(&geo(&[1, 2, 3], &[1, 4, 6], 30));
        assert_eq!(r.overall, Status::Fail);
        assert!(r.checks.iter().any(|c| c.name == "main1" && c.is_fail()));
    }

    #[test]
    fn array_and_classical_routes() {
        let r = report_for_array(&"{15,8,3;1,4,9}".parse().unwrap());
        assert_eq!(r.overall, Status::Pass);
        assert_eq!(r.derived.geometric, Some(geo(&[1, 2, 3], &[1, 2, 3], 5)));
        let cp = ClassicalParameterSet::from_ints(3, 2, 1, 7).unwrap();
        let r = report_for_classical(&cp);
        assert_eq!(r.overall, Status::Pass, "{:#?}", r.failures().collect::<Vec<_>>());
        assert!(r.checks.iter().any(|c| c.name == "classical_item4" && c.status == Status::Pass));
        let pentagon = report_for_array(&"{2,1;1,1}".parse().unwrap());
        assert_eq!(pentagon.branch.branch, Branch::NotApplicable);
    }
}
