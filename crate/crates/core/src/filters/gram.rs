//! Positive semidefiniteness of the Gram matrix of a vertex and a clique, and
//! its closed forms for classical parameters.

use std::cmp::Ordering;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::algebraic::{AlgebraicValue, Eigenvalue, RatFn};
use crate::params::{classical_to_array, ClassicalParameterSet, GeometricArray, IntersectionArray};
use crate::poly::Poly;
use crate::rational::{rat, Rational};
use crate::spectrum::{classical_eigenvalues, standard_sequence, SpectrumError};

use super::verdict::{decide, CheckVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("psi = {psi} must be below s + 1 = {}", s + 1)]
    PsiTooLarge { psi: i64, s: i64 },
    #[error("distance j = {j} outside 1..={max}")]
    DistanceOutOfRange { j: usize, max: usize },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// The two sides of the Gram inequality as polynomials in the eigenvalue.
pub fn gram_sides(polys: &[Poly], j: usize, s: i64, psi: i64) -> (Poly, Poly) {
    let one = Poly::one();
    let (u1, uj, uj1) = (&polys[1], &polys[j], &polys[j + 1]);
    let psi = rat(psi);
    let d = uj - uj1;
    let one_minus_u1 = &one - u1;
    let inner = &(u1 * &d).scale(&psi) - &(&one_minus_u1 * uj1);
    let lhs = &inner * &inner;
    let left = &(u1 * &(&d * &d)).scale(&psi) - &(&one_minus_u1 * &(u1 - &(uj1 * uj1)));
    let rhs = &(&u1.scale(&rat(s)) + &one) * &left;
    (lhs, rhs)
}

/// `(psi u_1 (u_j - u_{j+1}) - (1 - u_1) u_{j+1})^2 >=
///  (s u_1 + 1)(psi u_1 (u_j - u_{j+1})^2 - (1 - u_1)(u_1 - u_{j+1}^2))`.
///
/// The difference of the sides is `u_1 det(Q)` for the quotient matrix `Q` of
/// the Gram matrix, so the inequality is only meaningful for `u_1 >= 0`.
pub fn check_gram_inequality(
    arr: &IntersectionArray,
    theta: &Eigenvalue,
    j: usize,
    s: i64,
    psi: i64,
) -> Result<CheckVerdict, FilterError> {
    let d = arr.diameter();
    if psi >= s + 1 {
        return Err(FilterError::PsiTooLarge { psi, s });
    }
    if j < 1 || j + 1 > d {
        return Err(FilterError::DistanceOutOfRange { j, max: d.saturating_sub(1) });
    }
    let seq = standard_sequence(arr, theta)?;
    let name = format!("gram_j{j}");
    Ok(decide(&name, || {
        if theta.sign_of(&seq.polys[1])? == Ordering::Less {
            return Ok(CheckVerdict::not_applicable(&name, "needs u_1 >= 0 (the inequality is u_1 det(Q) >= 0)"));
        }
        let (lhs, rhs) = gram_sides(&seq.polys, j, s, psi);
        let holds = theta.sign_of(&(&lhs - &rhs))? != Ordering::Less;
        let show = |p: Poly| AlgebraicValue::new(theta.clone(), RatFn::poly(p)).to_string();
        Ok(CheckVerdict::compare(&name, show(lhs), ">=", show(rhs), holds)
            .with("theta", theta)
            .with("s", s)
            .with("psi", psi))
    }))
}

/// Corollary-style closed forms for classical parameters, evaluated exactly
/// at `theta_1` with `u_i = u_{i-1}/b + c`.
pub fn check_classical_inequalities(cp: &ClassicalParameterSet, geo: &GeometricArray) -> Vec<CheckVerdict> {
    let mut out = check_classical_identities(cp);
    out.extend(check_classical_items(cp, geo));
    out
}

/// `b not in {0, -1}` and `c_2 = (b + 1)(alpha + 1)`.
pub fn check_classical_identities(cp: &ClassicalParameterSet) -> Vec<CheckVerdict> {
    let mut out = Vec::new();
    let b = cp.b;
    let bq = rat(b);

    out.push(CheckVerdict::compare("b_integral", b, "not in", "{0,-1}", cp.d < 3 || (b != 0 && b != -1)));

    let c2 = (&bq + Rational::one()) * (&cp.alpha + Rational::one());
    out.push(match classical_to_array(cp) {
        Ok(arr) if arr.diameter() >= 2 => {
            CheckVerdict::compare("c2_identity", arr.c(2), "=", &c2, rat(arr.c(2)) == c2)
        }
        Ok(_) => CheckVerdict::not_applicable("c2_identity", "needs D >= 2"),
        Err(e) => CheckVerdict::compare("c2_identity", "array", "integral", "", false).note(e.to_string()),
    });
    out
}

/// The `theta_1` items: `b` from the spectrum, the affine recurrence, the four
/// inequalities and the lower bound on `u_1`.
pub fn check_classical_items(cp: &ClassicalParameterSet, geo: &GeometricArray) -> Vec<CheckVerdict> {
    let mut out = Vec::new();
    let b = cp.b;
    let bq = rat(b);
    let names = [
        "b_matches_spectrum",
        "u_affine_recurrence",
        "classical_item1",
        "classical_item2",
        "classical_item3",
        "classical_item4",
        "u1_lower_bound",
    ];
    let ctx = match classical_context(cp, geo) {
        Ok(c) => c,
        Err(why) => {
            out.extend(names.iter().map(|n| CheckVerdict::not_applicable(n, why.clone())));
            return out;
        }
    };
    let ClassicalContext { theta1, u, u_expected } = ctx;

    let bspec = rat(cp_b1(cp)) / (&theta1 + Rational::one());
    out.push(CheckVerdict::compare("b_matches_spectrum", &bspec, "=", b, bspec == bq).with("theta_1", &theta1));

    let mismatch = (0..u.len()).find(|&i| u[i] != u_expected[i]);
    out.push(match mismatch {
        None => CheckVerdict::compare("u_affine_recurrence", fmt_list(&u), "=", fmt_list(&u_expected), true),
        Some(i) => CheckVerdict::compare("u_affine_recurrence", format!("u_{i} = {}", u[i]), "=", &u_expected[i], false),
    });

    let (phi1, phi2) = (rat(geo.phi(1)), rat(geo.phi(2)));
    let beta = &cp.beta;
    let inv_u1 = Rational::one() / &u[1];
    let b2 = &bq * &bq;

    // item 1
    let l = (&phi1 - &bq * &u[2] / &u[1]).pow(2);
    let r = (beta + &inv_u1) * (&phi1 - &b2 - rat(2) * &bq - Rational::one() + &inv_u1);
    out.push(CheckVerdict::compare("classical_item1", &l, ">=", &r, l >= r));

    // item 2
    let l = (&phi2 - &b2 * &u[3] / &u[1]).pow(2);
    let r = (beta + &inv_u1)
        * (&phi2 - &b2 * &b2 - rat(2) * &b2 * &bq
            - &b2 * (Rational::one() + (rat(2) * &u[2] - Rational::one()) / &u[1])
            - Rational::one()
            + &inv_u1);
    out.push(CheckVerdict::compare("classical_item2", &l, ">=", &r, l >= r));

    if b >= 2 {
        let half = Rational::new(1.into(), 2.into());
        let l = (&phi1 + rat(7) * &b2 * &half).pow(2);
        let r = beta * (&phi1 - &b2 - rat(2) * &bq - Rational::one());
        out.push(CheckVerdict::compare("classical_item3", &l, ">=", &r, l >= r));
        let b3 = &b2 * &bq;
        let l = (&phi2 + rat(7) * &b3 * &half).pow(2);
        let r = beta * (&phi2 - &b2 * &b2 - rat(11) * &b3 * &half - &b2 - Rational::one());
        out.push(CheckVerdict::compare("classical_item4", &l, ">=", &r, l >= r));
        let lb = Rational::new(2.into(), (7 * b).into());
        out.push(CheckVerdict::compare("u1_lower_bound", &u[1], ">=", &lb, u[1] >= lb));
    } else {
        for n in &names[4..] {
            out.push(CheckVerdict::not_applicable(n, format!("needs b >= 2, got b = {b}")));
        }
    }
    out
}

struct ClassicalContext {
    theta1: Rational,
    /// `u_0..u_D` from the affine recurrence.
    u: Vec<Rational>,
    /// The same sequence from the three-term recurrence on the array.
    u_expected: Vec<Rational>,
}

fn cp_b1(cp: &ClassicalParameterSet) -> i64 {
    classical_to_array(cp).map(|a| a.b(1)).unwrap_or(0)
}

fn classical_context(cp: &ClassicalParameterSet, geo: &GeometricArray) -> Result<ClassicalContext, String> {
    if cp.d < 3 {
        return Err("needs D >= 3".into());
    }
    if cp.b < 1 {
        return Err(format!("needs natural eigenvalue ordering (b >= 1), got b = {}", cp.b));
    }
    if geo.diameter() != cp.d {
        return Err("geometric array has a different diameter".into());
    }
    let arr = classical_to_array(cp).map_err(|e| e.to_string())?;
    let spec = classical_eigenvalues(cp).map_err(|e| e.to_string())?;
    if !spec.natural_order {
        return Err("closed-form eigenvalues are not in natural order".into());
    }
    let theta1 = spec.theta(1).exact().cloned().ok_or("theta_1 is not rational")?;
    let u_expected = standard_sequence(&arr, spec.theta(1))
        .map_err(|e| e.to_string())?
        .exact()
        .ok_or("theta_1 is not rational")?;
    let bq = rat(cp.b);
    let r = rat(cp.bracket(cp.d).map_err(|e| e.to_string())?);
    let (alpha, beta) = (&cp.alpha, &cp.beta);
    let c = -(beta + &r * alpha + &bq - alpha) / (&bq * &r * beta);
    let mut u = vec![Rational::one()];
    for i in 1..=cp.d {
        let next = &u[i - 1] / &bq + &c;
        u.push(next);
    }
    if !u[1].is_positive() {
        return Err(format!("needs u_1 > 0, got {}", u[1]));
    }
    Ok(ClassicalContext { theta1, u, u_expected })
}

fn fmt_list(v: &[Rational]) -> String {
    v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::verdict::Status;
    use crate::rational::ratio;

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn find<'a>(v: &'a [CheckVerdict], n: &str) -> &'a CheckVerdict {
        v.iter().find(|c| c.name == n).unwrap()
    }

    /// Determinant of the 3x3 quotient matrix, expanded independently.
    fn det_q(u1: &Rational, uj: &Rational, uj1: &Rational, s: i64, psi: i64) -> Rational {
        let (s, p) = (rat(s), rat(psi));
        let one = Rational::one();
        let m = [
            [one.clone(), &p * uj, (&s + &one - &p) * uj1],
            [uj.clone(), &one + (&p - &one) * u1, (&s + &one - &p) * u1],
            [uj1.clone(), &p * u1, &one + (&s - &p) * u1],
        ];
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    #[test]
    fn difference_is_u1_times_quotient_determinant() {
        let a = arr("{15,8,3;1,4,9}");
        let (polys, _) = crate::spectrum::standard_polys(&a);
        for t in [7, 1, -3, 15] {
            let x = rat(t);
            let u: Vec<Rational> = polys.iter().map(|p| p.eval(&x)).collect();
            for j in 1..3 {
                for psi in 0..6 {
                    let (l, r) = gram_sides(&polys, j, 5, psi);
                    assert_eq!(l.eval(&x) - r.eval(&x), &u[1] * det_q(&u[1], &u[j], &u[j + 1], 5, psi));
                }
            }
        }
    }

    #[test]
    fn johnson_8_3_theta1() {
        let a = arr("{15,8,3;1,4,9}");
        let seq = standard_sequence(&a, &Eigenvalue::Exact(rat(7))).unwrap();
        assert_eq!(seq.exact().unwrap(), vec![rat(1), ratio(7, 15), ratio(-1, 15), ratio(-3, 5)]);
        let v = check_gram_inequality(&a, &Eigenvalue::Exact(rat(7)), 1, 5, 2).unwrap();
        assert_eq!(v.status, Status::Pass);
        assert!(matches!(
            check_gram_inequality(&a, &Eigenvalue::Exact(rat(7)), 1, 5, 6),
            Err(FilterError::PsiTooLarge { .. })
        ));
        assert!(matches!(
            check_gram_inequality(&a, &Eigenvalue::Exact(rat(7)), 3, 5, 2),
            Err(FilterError::DistanceOutOfRange { .. })
        ));
        assert!(matches!(check_gram_inequality(&a, &Eigenvalue::Exact(rat(6)), 1, 5, 2), Err(FilterError::Spectrum(_))));
    }

    #[test]
    fn trivial_eigenvalue_gives_zero_sides() {
        let a = arr("{15,8,3;1,4,9}");
        let v = check_gram_inequality(&a, &Eigenvalue::Exact(rat(15)), 2, 5, 3).unwrap();
        assert_eq!((v.status, v.lhs.as_deref(), v.rhs.as_deref()), (Status::Pass, Some("0"), Some("0")));
    }

    #[test]
    fn negative_u1_is_not_applicable() {
        let a = arr("{15,8,3;1,4,9}");
        let v = check_gram_inequality(&a, &Eigenvalue::Exact(rat(-3)), 1, 5, 2).unwrap();
        assert_eq!(v.status, Status::NotApplicable);
    }

    #[test]
    fn wrong_psi_fails_for_johnson() {
        // in J(8,3) phi_2 = 3; psi = 2 at distance 2 is impossible
        let a = arr("{15,8,3;1,4,9}");
        let v = check_gram_inequality(&a, &Eigenvalue::Exact(rat(7)), 2, 5, 2).unwrap();
        assert_eq!((v.status, v.lhs.as_deref(), v.rhs.as_deref()), (Status::Fail, Some("33856/50625"), Some("1408/2025")));
        let v = check_gram_inequality(&a, &Eigenvalue::Exact(rat(7)), 2, 5, 3).unwrap();
        assert_eq!(v.status, Status::Pass);
    }

    #[test]
    fn classical_items_grassmann_and_bilinear() {
        let cp = ClassicalParameterSet::from_ints(3, 2, 2, 14).unwrap();
        let geo = GeometricArray::new(vec![1, 3, 7], vec![1, 3, 7], 14).unwrap();
        let v = check_classical_inequalities(&cp, &geo);
        assert!(v.iter().all(|c| c.status == Status::Pass), "{v:#?}");
        let i3 = find(&v, "classical_item3");
        assert_eq!((i3.lhs.as_deref(), i3.rhs.as_deref()), (Some("289"), Some("-84")));

        let cp = ClassicalParameterSet::from_ints(3, 2, 1, 7).unwrap();
        let geo = GeometricArray::new(vec![1, 2, 4], vec![1, 3, 7], 7).unwrap();
        let v = check_classical_inequalities(&cp, &geo);
        assert!(v.iter().all(|c| c.status == Status::Pass), "{v:#?}");
        let i4 = find(&v, "classical_item4");
        assert_eq!((i4.lhs.as_deref(), i4.rhs.as_deref()), (Some("1024"), Some("-427")));
    }

    #[test]
    fn classical_items_johnson_gates() {
        let cp = ClassicalParameterSet::from_ints(3, 1, 1, 5).unwrap();
        let geo = GeometricArray::new(vec![1, 2, 3], vec![1, 2, 3], 5).unwrap();
        let v = check_classical_inequalities(&cp, &geo);
        assert_eq!(find(&v, "classical_item1").status, Status::Pass);
        assert_eq!(find(&v, "classical_item3").status, Status::NotApplicable);
        assert_eq!(find(&v, "classical_item4").status, Status::NotApplicable);
        let rec = find(&v, "u_affine_recurrence");
        assert_eq!(rec.lhs.as_deref(), Some("1,7/15,-1/15,-3/5"));
    }
}
