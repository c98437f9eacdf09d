//! Bounds coming from the line structure: the ELS sufficient condition and its
//! design/assembly/strongly-regular consequences, the partial-geometry bound,
//! clique dichotomies, and the bound excluding `2 <= phi_1 <= tau_2 - 2`.

use num_traits::{One, Signed};

use crate::params::GeometricArray;
use crate::rational::{rat, to_i64, Rational};

use super::verdict::{CheckVerdict, Status};

/// `(r - tau_2 + 1)(phi_2 - phi_1) + phi_1`; requires `D >= 3`.
pub fn els_bound(geo: &GeometricArray) -> i64 {
    (geo.r() - geo.tau(2) + 1) * (geo.phi(2) - geo.phi(1)) + geo.phi(1)
}

pub fn els_implied(geo: &GeometricArray) -> bool {
    geo.diameter() >= 3 && geo.beta() >= els_bound(geo)
}

/// Applicable when `2 <= phi_1 <= tau_2 - 2`: fails iff `beta >= bound`.
pub fn check_main1(geo: &GeometricArray) -> CheckVerdict {
    const NAME: &str = "main1";
    if geo.diameter() < 3 {
        return CheckVerdict::not_applicable(NAME, "needs D >= 3");
    }
    let (phi1, tau2) = (geo.phi(1), geo.tau(2));
    if !(2 <= phi1 && phi1 <= tau2 - 2) {
        return CheckVerdict::not_applicable(NAME, "needs 2 <= phi_1 <= tau_2 - 2");
    }
    CheckVerdict::lt(NAME, geo.beta(), els_bound(geo))
        .with("r", geo.r())
        .with("tau_2", tau2)
        .with("phi_1", phi1)
        .with("phi_2", geo.phi(2))
}

/// SRG parameters `(v, k, lambda, mu)` of the subgraph spanned by a distance-2
/// pair under ELS; `v` may be fractional for infeasible inputs.
pub fn sigma_parameters(geo: &GeometricArray) -> (Rational, i64, i64, i64) {
    let (beta, phi1, tau2) = (geo.beta(), geo.phi(1), geo.tau(2));
    let v = Rational::new((beta * (beta - phi1 + 1) * (tau2 - 1)).into(), phi1.into()) + rat(beta * tau2 + 1);
    (v, beta * tau2, beta - 1 + (phi1 - 1) * (tau2 - 1), phi1 * tau2)
}

/// Eigenvalue multiplicities `(f, g)` of an SRG, `f` belonging to the positive
/// restricted eigenvalue, or a reason they cannot be integral.
pub fn srg_multiplicities(v: i64, k: i64, lambda: i64, mu: i64) -> Result<(i64, i64), String> {
    let (v, k, lambda, mu) = (v as i128, k as i128, lambda as i128, mu as i128);
    let disc = (lambda - mu).pow(2) + 4 * (k - mu);
    let top = 2 * k + (v - 1) * (lambda - mu);
    let root = isqrt(disc);
    if root * root != disc {
        // conference case
        if top == 0 && (v - 1) % 2 == 0 {
            return Ok((((v - 1) / 2) as i64, ((v - 1) / 2) as i64));
        }
        return Err(format!("discriminant {disc} is not a square and 2k + (v-1)(lambda-mu) = {top} != 0"));
    }
    if root == 0 {
        return Err("discriminant is zero".into());
    }
    let fnum = (v - 1) * root - top;
    let gnum = (v - 1) * root + top;
    if fnum % (2 * root) != 0 || gnum % (2 * root) != 0 {
        return Err(format!("multiplicities ({fnum}/{0}, {gnum}/{0}) are not integral", 2 * root));
    }
    let (f, g) = (fnum / (2 * root), gnum / (2 * root));
    if f <= 0 || g <= 0 {
        return Err(format!("multiplicities ({f}, {g}) are not positive"));
    }
    Ok((f as i64, g as i64))
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `s <= (t - alpha + 1)^2 (2 alpha - 1)` for `pg(s, t, alpha)` with
/// `alpha <= t - 1`; equality additionally needs `alpha = 1` or `t = 2 alpha`.
pub fn check_neumaier(s: i64, t: i64, alpha: i64) -> CheckVerdict {
    const NAME: &str = "neumaier";
    if alpha < 1 || t < 1 || s < 1 {
        return CheckVerdict::not_applicable(NAME, "needs s, t, alpha >= 1");
    }
    if alpha > t - 1 {
        return CheckVerdict::not_applicable(NAME, "needs alpha <= t - 1");
    }
    let bound = (t - alpha + 1).pow(2) * (2 * alpha - 1);
    let v = CheckVerdict::le(NAME, s, bound).with("s", s).with("t", t).with("alpha", alpha);
    if s == bound {
        let side = alpha == 1 || t == 2 * alpha;
        let mut v = v.note(format!(
            "equality; side condition alpha = 1 or t = 2 alpha {}",
            if side { "holds" } else { "violated" }
        ));
        if !side {
            v.status = Status::Fail;
        }
        return v;
    }
    v
}

/// Dichotomy for `psi_1(x, C)` when `s >= b^4 + 2b^3 + 3b^2 + b + 2`.
pub fn check_clique_gap(b: &Rational, s: i64, psi1: i64) -> CheckVerdict {
    const NAME: &str = "clique_gap";
    let threshold = gap_threshold(b);
    if rat(s) < threshold {
        return CheckVerdict::not_applicable(NAME, format!("needs s >= b^4 + 2b^3 + 3b^2 + b + 2 = {threshold}"));
    }
    if psi1 >= s + 1 {
        return CheckVerdict::not_applicable(NAME, "needs psi_1 < s + 1");
    }
    let small = b * b + b + Rational::one();
    let large = rat(s) - b * b + Rational::one();
    let p = rat(psi1);
    let holds = p <= small || p >= large;
    CheckVerdict::compare(NAME, psi1, "in", format!("[0, {small}] u [{large}, inf)"), holds)
        .with("b", b)
        .with("s", s)
}

pub fn gap_threshold(b: &Rational) -> Rational {
    let b2 = b * b;
    &b2 * &b2 + rat(2) * &b2 * b + rat(3) * &b2 + b + rat(2)
}

/// Intersection dichotomy for two cliques of minimum order `c` in a graph with
/// smallest eigenvalue at least `-m`, applicable when `c > 2m^2 - 2m + 1`.
pub fn check_clique_intersection(m: i64, c: i64, gamma: i64) -> CheckVerdict {
    const NAME: &str = "clique_intersection";
    let threshold = 2 * m * m - 2 * m + 1;
    if m < 1 || c <= threshold {
        return CheckVerdict::not_applicable(NAME, format!("needs m >= 1 and c > 2m^2 - 2m + 1 = {threshold}"));
    }
    let holds = gamma <= m - 1 || gamma >= c - m + 1;
    CheckVerdict::compare(NAME, gamma, "in", format!("[0, {}] u [{}, {c}]", m - 1, c - m + 1), holds)
        .with("m", m)
        .with("c", c)
}

/// The ELS sufficient condition and, when it holds with `phi_1 >= 2`, the
/// design, assembly and strongly-regular-subgraph consequences.
pub fn check_els_and_design(geo: &GeometricArray) -> Vec<CheckVerdict> {
    const NAMES: [&str; 7] = [
        "els_sufficient",
        "design_r_bound",
        "design_phi2_bound",
        "assembly_divisibility",
        "assembly_order_bound",
        "sigma_srg",
        "sigma_neumaier",
    ];
    if geo.diameter() < 3 {
        return NAMES.iter().map(|n| CheckVerdict::not_applicable(n, "needs D >= 3")).collect();
    }
    let bound = els_bound(geo);
    let (beta, r, phi1, phi2, tau2) = (geo.beta(), geo.r(), geo.phi(1), geo.phi(2), geo.tau(2));
    let mut out = Vec::new();
    if beta < bound {
        out.push(CheckVerdict::not_applicable(NAMES[0], format!("ELS not implied: beta = {beta} < {bound}")));
        for n in &NAMES[1..] {
            out.push(CheckVerdict::not_applicable(n, "needs the ELS property to be implied"));
        }
        return out;
    }
    out.push(CheckVerdict::ge(NAMES[0], beta, bound).note("ELS-implied"));
    if phi1 < 2 {
        for n in &NAMES[1..] {
            out.push(CheckVerdict::not_applicable(n, "needs phi_1 >= 2"));
        }
        return out;
    }
    out.push(CheckVerdict::ge(NAMES[1], r, tau2 * (tau2 - 1) + 1).with("tau_2", tau2));
    out.push(CheckVerdict::ge(NAMES[2], phi2, tau2 * (phi1 - 1) + 1).with("tau_2", tau2).with("phi_1", phi1));
    out.push(
        CheckVerdict::compare(NAMES[3], phi1 - 1, "divides", beta, beta % (phi1 - 1) == 0)
            .note("each vertex lies in beta / (phi_1 - 1) assemblies"),
    );
    out.push(CheckVerdict::ge(NAMES[4], beta, (phi1 - 1) * r).note("assemblies have order (phi_1 - 1) r + 1"));
    out.push(check_sigma_srg(geo));
    let mut neu = check_neumaier(beta, tau2 - 1, phi1);
    neu.name = NAMES[6].to_string();
    out.push(neu);
    out
}

fn check_sigma_srg(geo: &GeometricArray) -> CheckVerdict {
    const NAME: &str = "sigma_srg";
    let (v, k, lambda, mu) = sigma_parameters(geo);
    let tuple = format!("({v},{k},{lambda},{mu})");
    let Some(vi) = to_i64(&v).filter(|_| v.is_positive()) else {
        return CheckVerdict::compare(NAME, &tuple, "integral", "v", false).note("v is not a positive integer");
    };
    match srg_multiplicities(vi, k, lambda, mu) {
        Ok((f, g)) => CheckVerdict::compare(NAME, &tuple, "has integral multiplicities", format!("({f},{g})"), true),
        Err(why) => CheckVerdict::compare(NAME, &tuple, "has integral multiplicities", "none", false).note(why),
    }
}
