//! Checks driven by the spectrum: the Krein-type product bound, the Delsarte
//! clique relation at the smallest eigenvalue, and multiplicity integrality.

use std::cmp::Ordering;

use crate::algebraic::{cmp_product_plus, AlgError, AlgebraicValue, Eigenvalue, RatFn};
use crate::params::{GeometricArray, IntersectionArray};
use crate::rational::{rat, Rational};
use crate::spectrum::{is_positive_integral, standard_sequence, SpectrumData};

use super::verdict::{decide, CheckVerdict};

/// KPY, the `theta_min` relation for `phi`, multiplicity integrality and
/// `|u_i| <= 1` at `theta_1`. `phi`, when given, is compared entry by entry
/// against the values forced by the `theta_min` standard sequence.
pub fn check_spectral_constraints(arr: &IntersectionArray, spec: &SpectrumData, phi: Option<&[i64]>) -> Vec<CheckVerdict> {
    let d = arr.diameter();
    let mut out = vec![check_kpy(arr, spec)];
    out.push(match phi {
        Some(phi) => check_delsarte_phi(arr, spec.theta_min(), phi),
        None => CheckVerdict::not_applicable("delsarte_phi", "needs postulated phi values"),
    });
    out.push(check_multiplicities(spec));
    out.push(if d >= 2 {
        decide("u_bounded_theta1", || {
            let seq = standard_sequence(arr, spec.theta(1)).map_err(to_alg)?;
            let ok = seq.bounded().map_err(to_alg)?;
            Ok(CheckVerdict::compare("u_bounded_theta1", "max |u_i(theta_1)|", "<=", 1, ok))
        })
    } else {
        CheckVerdict::not_applicable("u_bounded_theta1", "needs D >= 2")
    });
    out
}

fn to_alg(e: crate::spectrum::SpectrumError) -> AlgError {
    match e {
        crate::spectrum::SpectrumError::Alg(a) => a,
        _ => AlgError::Undecided,
    }
}

/// `(theta_1 + 1)(theta_D + 1) < -b_1`.
pub fn check_kpy(arr: &IntersectionArray, spec: &SpectrumData) -> CheckVerdict {
    const NAME: &str = "kpy";
    if arr.diameter() < 3 {
        return CheckVerdict::not_applicable(NAME, "needs D >= 3");
    }
    decide(NAME, || {
        let one = rat(1);
        let target = rat(-arr.b(1));
        let ord = cmp_product_plus(spec.theta(1), &one, spec.theta_min(), &one, &target)?;
        let lhs = match (spec.theta(1).exact(), spec.theta_min().exact()) {
            (Some(a), Some(b)) => ((a + &one) * (b + &one)).to_string(),
            _ => format!("{:.12}", (spec.theta(1).approx() + 1.0) * (spec.theta_min().approx() + 1.0)),
        };
        Ok(CheckVerdict::compare(NAME, lhs, "<", &target, ord == Ordering::Less)
            .with("theta_1", spec.theta(1))
            .with("theta_D", spec.theta_min()))
    })
}

/// `phi_j` as a rational function of the smallest eigenvalue `x`:
/// `(1 - k/x) u_{j+1} / (u_{j+1} - u_j)`.
pub fn forced_phi(arr: &IntersectionArray, theta_min: &Eigenvalue, j: usize) -> Result<AlgebraicValue, AlgError> {
    let seq = standard_sequence(arr, theta_min).map_err(to_alg)?;
    let x = RatFn::var();
    let factor = RatFn::constant(rat(1)).sub(&RatFn::constant(rat(arr.k())).div(&x));
    let up = RatFn::poly(seq.polys[j + 1].clone());
    let diff = RatFn::poly(&seq.polys[j + 1] - &seq.polys[j]);
    if theta_min.sign_of(&diff.num)? == Ordering::Equal {
        return Err(AlgError::DivisionByZero);
    }
    Ok(AlgebraicValue::new(theta_min.clone(), factor.mul(&up).div(&diff)))
}

fn check_delsarte_phi(arr: &IntersectionArray, theta_min: &Eigenvalue, phi: &[i64]) -> CheckVerdict {
    const NAME: &str = "delsarte_phi";
    let d = arr.diameter();
    if phi.len() != d {
        return CheckVerdict::not_applicable(NAME, format!("needs {d} phi values, got {}", phi.len()));
    }
    if d < 2 {
        return CheckVerdict::not_applicable(NAME, "needs D >= 2");
    }
    decide(NAME, || {
        let mut forced = Vec::new();
        for (j, &p) in phi.iter().enumerate().skip(1) {
            let f = match forced_phi(arr, theta_min, j) {
                Ok(f) => f,
                Err(AlgError::DivisionByZero) => {
                    return Ok(CheckVerdict::compare(NAME, format!("phi_{j}"), "=", "undefined", false)
                        .note(format!("u_{} = u_{j} at theta_min", j + 1)));
                }
                Err(e) => return Err(e),
            };
            if f.cmp_rational(&rat(p))? != Ordering::Equal {
                return Ok(CheckVerdict::compare(NAME, format!("phi_{j} = {p}"), "=", &f, false)
                    .with("j", j)
                    .with("theta_min", theta_min));
            }
            forced.push(f.to_string());
        }
        let given: Vec<String> = phi[1..].iter().map(i64::to_string).collect();
        Ok(CheckVerdict::compare(NAME, given.join(","), "=", forced.join(","), true).with("theta_min", theta_min))
    })
}

fn check_multiplicities(spec: &SpectrumData) -> CheckVerdict {
    const NAME: &str = "multiplicities_integral";
    decide(NAME, || {
        let shown: Vec<String> = spec.multiplicities.iter().map(|m| m.to_string()).collect();
        for (i, m) in spec.multiplicities.iter().enumerate() {
            if !is_positive_integral(m).map_err(to_alg)? {
                return Ok(CheckVerdict::compare(NAME, format!("m(theta_{i}) = {m}"), "in", "Z>0", false)
                    .with("multiplicities", shown.join(",")));
            }
        }
        Ok(CheckVerdict::compare(NAME, shown.join(","), "in", "Z>0", true).note("artifact plumbing: m = n / sum k_i u_i^2"))
    })
}

/// `theta_D = -tau_D` for an array derived from geometric parameters.
pub fn check_theta_min(spec: &SpectrumData, r: i64) -> CheckVerdict {
    const NAME: &str = "theta_min_equals_minus_r";
    decide(NAME, || {
        let ord = spec.theta_min().cmp_rational(&rat(-r))?;
        Ok(CheckVerdict::compare(NAME, spec.theta_min(), "=", -r, ord == Ordering::Equal))
    })
}

fn poly_in(b: &RatFn, coeffs: &[i64]) -> RatFn {
    // Horner in b with integer coefficients, highest first
    let mut acc = RatFn::constant(Rational::from_integer(0.into()));
    for &c in coeffs {
        acc = acc.mul(b).add_q(&rat(c));
    }
    acc
}

/// If `beta >= b^4 + 2b^3 + 3b^2 + b + 2` then `phi_1 <= b^2 + b + 1`.
pub fn check_phi1_b_bound(geo: &GeometricArray, b: &AlgebraicValue) -> CheckVerdict {
    const NAME: &str = "phi1_b_bound";
    if geo.diameter() < 2 {
        return CheckVerdict::not_applicable(NAME, "needs D >= 2");
    }
    decide(NAME, || {
        let threshold = b.map(|e| poly_in(e, &[1, 2, 3, 1, 2]));
        if threshold.cmp_rational(&rat(geo.beta()))? == Ordering::Greater {
            return Ok(CheckVerdict::not_applicable(
                NAME,
                format!("needs beta >= b^4 + 2b^3 + 3b^2 + b + 2 = {threshold}"),
            ));
        }
        let bound = b.map(|e| poly_in(e, &[1, 1, 1]));
        let holds = bound.cmp_rational(&rat(geo.phi(1)))? != Ordering::Less;
        Ok(CheckVerdict::compare(NAME, geo.phi(1), "<=", &bound, holds).with("b", b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::verdict::Status;
    use crate::spectrum::{b_parameter, eigenvalues};

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn find<'a>(v: &'a [CheckVerdict], n: &str) -> &'a CheckVerdict {
        v.iter().find(|c| c.name == n).unwrap()
    }

    #[test]
    fn johnson_phi_forced() {
        let a = arr("{9,4,1;1,4,9}");
        let s = eigenvalues(&a).unwrap();
        let v = check_spectral_constraints(&a, &s, Some(&[1, 2, 3]));
        assert!(v.iter().all(|c| c.status == Status::Pass), "{v:#?}");
        assert_eq!(find(&v, "delsarte_phi").rhs.as_deref(), Some("2,3"));
    }

    #[test]
    fn kpy_johnson_8_3() {
        let a = arr("{15,8,3;1,4,9}");
        let s = eigenvalues(&a).unwrap();
        let k = check_kpy(&a, &s);
        assert_eq!((k.status, k.lhs.as_deref(), k.rhs.as_deref()), (Status::Pass, Some("-16"), Some("-8")));
    }

    #[test]
    fn hamming_wrong_phi() {
        let a = arr("{6,4,2;1,2,3}");
        let s = eigenvalues(&a).unwrap();
        let v = check_spectral_constraints(&a, &s, Some(&[1, 1, 2]));
        let d = find(&v, "delsarte_phi");
        assert_eq!(d.status, Status::Fail);
        assert_eq!(d.witness.values["j"], "2");
        assert_eq!(d.rhs.as_deref(), Some("1"));
    }

    #[test]
    fn pentagon_is_decided_with_irrational_spectrum() {
        let a = arr("{2,1;1,1}");
        let s = eigenvalues(&a).unwrap();
        let v = check_spectral_constraints(&a, &s, None);
        assert_eq!(find(&v, "kpy").status, Status::NotApplicable);
        assert_eq!(find(&v, "multiplicities_integral").status, Status::Pass);
        assert_eq!(find(&v, "u_bounded_theta1").status, Status::Pass);
    }

    #[test]
    fn kpy_heawood_irrational() {
        let a = arr("{3,2,2;1,1,3}");
        let s = eigenvalues(&a).unwrap();
        let k = check_kpy(&a, &s);
        assert_eq!(k.status, Status::Pass);
        assert!(k.lhs.unwrap().starts_with("-4.828"));
    }

    #[test]
    fn fractional_multiplicity_fails() {
        // {4,3;1,2}: valid counts but non-integral multiplicities
        let a = arr("{4,3;1,2}");
        let s = eigenvalues(&a).unwrap();
        assert_eq!(check_multiplicities(&s).status, Status::Fail);
    }

    #[test]
    fn phi1_b_bound_gates() {
        let a = arr("{15,8,3;1,4,9}");
        let s = eigenvalues(&a).unwrap();
        let b = b_parameter(&a, &s).unwrap();
        let g = GeometricArray::new(vec![1, 2, 3], vec![1, 2, 3], 5).unwrap();
        // threshold for b = 1 is 9 > 5
        assert_eq!(check_phi1_b_bound(&g, &b).status, Status::NotApplicable);
        let g = GeometricArray::new(vec![1, 3, 5], vec![1, 2, 3], 9).unwrap();
        assert_eq!(check_phi1_b_bound(&g, &b).status, Status::Pass);
        let g = GeometricArray::new(vec![1, 4, 5], vec![1, 2, 3], 9).unwrap();
        assert_eq!(check_phi1_b_bound(&g, &b).status, Status::Fail);
    }

    #[test]
    fn theta_min_matches_tau() {
        let a = arr("{49,36,16;1,6,28}");
        let s = eigenvalues(&a).unwrap();
        assert_eq!(check_theta_min(&s, 7).status, Status::Pass);
        assert_eq!(check_theta_min(&s, 6).status, Status::Fail);
    }
}
