//! Decision tree over `(phi_1, tau_2, beta)` assigning one of the five
//! structural branches for diameter at least three.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebraic::{AlgError, AlgebraicValue};
use crate::params::{gaussian_bracket, GeometricArray};
use crate::primes::prime_power;
use crate::rational::rat;

use super::structure::els_bound;
use super::verdict::Status;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `phi_1 = 1`: locally a disjoint union of cliques.
    B1,
    /// `phi_1 = tau_2 = 2`: Johnson.
    B2,
    /// `phi_1 = tau_2 >= 3`: Grassmann over `F_{phi_1 - 1}`.
    B3,
    /// `phi_1 = tau_2 - 1 >= 2` with `beta` at least the ELS bound.
    B4,
    /// `phi_1 = tau_2 - 1 >= 2` below the ELS bound.
    B4OrB5,
    /// `2 <= phi_1 <= tau_2 - 2`.
    B5,
    /// `phi_1 > tau_2`, impossible.
    Excluded,
    NotApplicable,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::B1 => "B1",
            Branch::B2 => "B2",
            Branch::B3 => "B3",
            Branch::B4 => "B4",
            Branch::B4OrB5 => "B4-or-B5",
            Branch::B5 => "B5",
            Branch::Excluded => "excluded",
            Branch::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub branch: Branch,
    /// `fail` when a cut attached to the branch rules the parameters out.
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub reasons: Vec<String>,
}

impl Classification {
    fn new(branch: Branch) -> Self {
        Classification { branch, status: Status::Pass, label: None, reasons: Vec::new() }
    }

    fn cut(&mut self, reason: impl Into<String>) {
        self.status = Status::Fail;
        self.reasons.push(reason.into());
    }

    fn undecided(&mut self, what: &str, e: AlgError) {
        if self.status != Status::Fail {
            self.status = Status::Indeterminate;
        }
        self.reasons.push(format!("{what}: {e}"));
    }
}

/// Assigns the branch and applies its cuts. `b` is `b_1/(theta_1 + 1)` when
/// the spectrum is available; cuts needing it are skipped otherwise.
pub fn classify_main2(geo: &GeometricArray, b: Option<&AlgebraicValue>) -> Classification {
    let d = geo.diameter();
    let c2 = geo.c2().unwrap_or(0);
    if d < 3 || c2 < 2 {
        let mut c = Classification::new(Branch::NotApplicable);
        c.status = Status::NotApplicable;
        c.reasons.push(format!("needs D >= 3 and c_2 >= 2, got D = {d}, c_2 = {c2}"));
        return c;
    }
    let (phi1, tau2, beta, r) = (geo.phi(1), geo.tau(2), geo.beta(), geo.r());
    if phi1 > tau2 {
        let mut c = Classification::new(Branch::Excluded);
        c.cut(format!("phi_1 = {phi1} > tau_2 = {tau2}"));
        return c;
    }
    if phi1 == 1 {
        return Classification::new(Branch::B1);
    }
    if phi1 == tau2 {
        return if phi1 == 2 { johnson(geo, b) } else { grassmann(geo, b) };
    }
    let bound = els_bound(geo);
    if phi1 == tau2 - 1 {
        if beta < bound {
            let mut c = Classification::new(Branch::B4OrB5);
            c.reasons.push(format!("beta = {beta} < {bound}: local grid structure not established"));
            return c;
        }
        let mut c = Classification::new(Branch::B4);
        c.label = Some(format!("locally the {}-clique extension of a {} x {r}-grid", phi1 - 1, ratio_label(beta, phi1 - 1)));
        if beta % (phi1 - 1) != 0 {
            c.cut(format!("phi_1 - 1 = {} does not divide beta = {beta}", phi1 - 1));
        }
        if beta < (phi1 - 1) * r {
            c.cut(format!("beta = {beta} < (phi_1 - 1) r = {}", (phi1 - 1) * r));
        }
        if let Some(b) = b {
            let lhs = r * (phi1 - 1);
            // 2b^2 + 2b + 1 - r(phi_1 - 1)
            let gap = b.map(|e| e.mul(e).scale(&rat(2)).add(&e.scale(&rat(2))).add_q(&rat(1 - lhs)));
            match gap.sign() {
                Ok(Ordering::Less) => match b.cmp_rational(&rat(phi1 - 1)) {
                    Ok(Ordering::Less) => c.cut(format!("r(phi_1 - 1) = {lhs} > 2b^2 + 2b + 1 but phi_1 = {phi1} > b + 1 = {}", b.approx() + 1.0)),
                    Ok(_) => c.reasons.push(format!("phi_1 <= b + 1 holds with b = {b}")),
                    Err(e) => c.undecided("phi_1 <= b + 1", e),
                },
                Ok(_) => {}
                Err(e) => c.undecided("r(phi_1 - 1) > 2b^2 + 2b + 1", e),
            }
        }
        return c;
    }
    let mut c = Classification::new(Branch::B5);
    if beta >= bound {
        c.cut(format!("beta = {beta} >= {bound}, violating the bound for 2 <= phi_1 <= tau_2 - 2"));
    }
    c
}

fn ratio_label(n: i64, d: i64) -> String {
    if d != 0 && n % d == 0 {
        (n / d).to_string()
    } else {
        format!("{n}/{d}")
    }
}

fn check_b(c: &mut Classification, b: Option<&AlgebraicValue>, want: i64) {
    let Some(b) = b else { return };
    match b.cmp_rational(&rat(want)) {
        Ok(Ordering::Equal) => c.reasons.push(format!("b = {want} as required")),
        Ok(_) => c.cut(format!("b = {b} but the branch forces b = {want}")),
        Err(e) => c.undecided("b", e),
    }
}

fn johnson(geo: &GeometricArray, b: Option<&AlgebraicValue>) -> Classification {
    let mut c = Classification::new(Branch::B2);
    let d = geo.diameter();
    let n = geo.beta() + d as i64;
    c.label = Some(format!("Johnson J({n},{d})"));
    check_b(&mut c, b, 1);
    for j in 1..d {
        if geo.phi(j) != j as i64 + 1 {
            c.cut(format!("Johnson has phi_{j} = {}, got {}", j + 1, geo.phi(j)));
        }
    }
    for i in 1..=d {
        if geo.tau(i) != i as i64 {
            c.cut(format!("Johnson has tau_{i} = {i}, got {}", geo.tau(i)));
        }
    }
    if geo.beta() < d as i64 {
        c.cut(format!("Johnson J(n,D) needs n >= 2D, so beta >= {d}"));
    }
    c
}

fn grassmann(geo: &GeometricArray, b: Option<&AlgebraicValue>) -> Classification {
    let mut c = Classification::new(Branch::B3);
    let q = geo.phi(1) - 1;
    let d = geo.diameter();
    if prime_power(q as u64).is_none() {
        c.label = Some(format!("Grassmann over F_{q}"));
        c.cut(format!("phi_1 - 1 = {q} is not a prime power"));
        return c;
    }
    check_b(&mut c, b, q);
    let bracket = |j: usize| gaussian_bracket(j as u32, q).ok();
    for j in 1..d {
        let want = bracket(j).map(|x| 1 + q * x);
        if want != Some(geo.phi(j)) {
            c.cut(format!("Grassmann over F_{q} has phi_{j} = {}, got {}", fmt_opt(want), geo.phi(j)));
        }
    }
    for i in 1..=d {
        let want = bracket(i);
        if want != Some(geo.tau(i)) {
            c.cut(format!("Grassmann over F_{q} has tau_{i} = {}, got {}", fmt_opt(want), geo.tau(i)));
        }
    }
    // beta = [m]_q - 1 with m = n - D + 1 >= D + 1
    let target = geo.beta() + 1;
    let m = (1..64u32).map_while(|m| bracket(m as usize).filter(|&x| x <= target)).position(|x| x == target);
    match m.map(|i| i + 1) {
        Some(m) if m > d => c.label = Some(format!("Grassmann J_{q}({},{d})", m + d - 1)),
        Some(m) => {
            c.label = Some(format!("Grassmann over F_{q}"));
            c.cut(format!("beta + 1 = [{m}]_{q} needs {m} >= D + 1 = {}", d + 1));
        }
        None => {
            c.label = Some(format!("Grassmann over F_{q}"));
            c.cut(format!("beta + 1 = {target} is not a Gaussian bracket [m]_{q}"));
        }
    }
    c
}

fn fmt_opt(v: Option<i64>) -> String {
    v.map_or_else(|| "overflow".to_string(), |x| x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{b_parameter, eigenvalues};

    fn geo(p: &[i64], t: &[i64], b: i64) -> GeometricArray {
        GeometricArray::new(p.to_vec(), t.to_vec(), b).unwrap()
    }

    fn b_of(g: &GeometricArray) -> AlgebraicValue {
        let a = crate::params::geometric_to_array(g).unwrap();
        b_parameter(&a, &eigenvalues(&a).unwrap()).unwrap()
    }

    #[test]
    fn classical_families() {
        let j = geo(&[1, 2, 3], &[1, 2, 3], 5);
        let c = classify_main2(&j, Some(&b_of(&j)));
        assert_eq!((c.branch, c.status), (Branch::B2, Status::Pass));
        assert_eq!(c.label.as_deref(), Some("Johnson J(8,3)"));

        let g = geo(&[1, 3, 7], &[1, 3, 7], 14);
        let c = classify_main2(&g, Some(&b_of(&g)));
        assert_eq!((c.branch, c.status), (Branch::B3, Status::Pass), "{c:?}");
        assert_eq!(c.label.as_deref(), Some("Grassmann J_2(6,3)"));

        let bl = geo(&[1, 2, 4], &[1, 3, 7], 7);
        assert_eq!(classify_main2(&bl, Some(&b_of(&bl))).branch, Branch::B4OrB5);

        let h = geo(&[1, 1, 1], &[1, 2, 3], 2);
        assert_eq!(classify_main2(&h, Some(&b_of(&h))).branch, Branch::B1);
    }

    #[test]
    fn gates_and_exclusions() {
        let c = classify_main2(&geo(&[1, 2], &[1, 2], 5), None);
        assert_eq!((c.branch, c.status), (Branch::NotApplicable, Status::NotApplicable));
        let c = classify_main2(&geo(&[1, 3, 4], &[1, 2, 3], 9), None);
        assert_eq!((c.branch, c.status), (Branch::Excluded, Status::Fail));
        // phi_1 - 1 = 6 is not a prime power
        let c = classify_main2(&geo(&[1, 7, 8], &[1, 7, 8], 20), None);
        assert_eq!((c.branch, c.status), (Branch::B3, Status::Fail));
    }

    #[test]
    fn b5_and_b4_cuts() {
        let c = classify_main2(&geo(&[1, 2, 3], &[1, 4, 6], 30), None);
        assert_eq!((c.branch, c.status), (Branch::B5, Status::Fail));
        let c = classify_main2(&geo(&[1, 2, 4], &[1, 4, 7], 4), None);
        assert_eq!((c.branch, c.status), (Branch::B5, Status::Pass));
        // bound (5 - 3 + 1)(3 - 2) + 2 = 5
        let c = classify_main2(&geo(&[1, 2, 3], &[1, 3, 5], 7), None);
        assert_eq!(c.branch, Branch::B4);
        assert_eq!(c.status, Status::Pass);
        // phi_1 - 1 = 2 does not divide beta = 9
        let c = classify_main2(&geo(&[1, 3, 4], &[1, 4, 5], 9), None);
        assert_eq!(c.branch, Branch::B4);
        assert_eq!(c.status, Status::Fail, "{c:?}");
    }

    #[test]
    fn johnson_shape_mismatch() {
        let c = classify_main2(&geo(&[1, 2, 4], &[1, 2, 3], 9), None);
        assert_eq!((c.branch, c.status), (Branch::B2, Status::Fail));
    }
}
