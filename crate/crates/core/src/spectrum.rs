//! Eigenvalues of the intersection matrix, standard sequences and
//! multiplicities.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebraic::{AlgError, AlgebraicValue, Eigenvalue, IsolatedRoot, RatFn, REPORT_WIDTH_EXP};
use crate::params::{classical_to_array, derive_counts, ClassicalParameterSet, IntersectionArray, ParamError};
use crate::poly::{Poly, SturmChain};
use crate::rational::{midpoint, pow10_inv, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("{0} is not an eigenvalue of the array")]
    NotEigenvalue(String),
    #[error("expected {expected} distinct eigenvalues, found {found}")]
    RootCount { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, SpectrumError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    ClassicalClosedForm,
    CharacteristicPolynomial,
}

/// Distinct eigenvalues in strictly decreasing order with their multiplicities.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumData {
    pub eigenvalues: Vec<Eigenvalue>,
    pub multiplicities: Vec<AlgebraicValue>,
    pub source: SpectrumSource,
    /// Whether the closed-form indexing already was decreasing. Always true for
    /// the characteristic-polynomial route.
    pub natural_order: bool,
}

impl SpectrumData {
    pub fn theta(&self, i: usize) -> &Eigenvalue {
        &self.eigenvalues[i]
    }

    pub fn theta_min(&self) -> &Eigenvalue {
        self.eigenvalues.last().unwrap()
    }
}

/// `det(xI - L)` for the tridiagonal intersection matrix `L` with rows
/// `(c_i, a_i, b_i)`.
pub fn characteristic_polynomial(arr: &IntersectionArray) -> Poly {
    let d = arr.diameter();
    let x = Poly::x();
    let mut prev = Poly::one();
    let mut cur = &x - &Poly::constant(rat(arr.a(0)));
    for i in 1..=d {
        let next = &(&(&x - &Poly::constant(rat(arr.a(i)))) * &cur)
            - &prev.scale(&rat(arr.b(i - 1) * arr.c(i)));
        prev = cur;
        cur = next;
    }
    cur
}

/// Roots of a monic integer polynomial: integers exactly, the rest isolated.
fn real_roots(p: &Poly) -> Vec<Eigenvalue> {
    let sturm = SturmChain::new(p);
    let intervals = p.isolate_real_roots();
    let mut integers = Vec::new();
    let mut pending = Vec::new();
    for (mut lo, mut hi) in intervals {
        while &hi - &lo > Rational::one() {
            let mid = midpoint(&lo, &hi);
            if sturm.count_roots(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // (lo, hi] has width <= 1, so it holds at most two integers
        let first = lo.floor() + Rational::one();
        let mut found = None;
        let mut m = first;
        while m <= hi {
            if p.eval(&m).is_zero() {
                found = Some(m.clone());
            }
            m += Rational::one();
        }
        match found {
            Some(m) => integers.push(m),
            None => pending.push((lo, hi)),
        }
    }
    let mut q = p.clone();
    for m in &integers {
        q = q.div_rem(&Poly::linear_root(m)).0;
    }
    let width = pow10_inv(REPORT_WIDTH_EXP);
    let mut out: Vec<Eigenvalue> = integers.into_iter().map(Eigenvalue::Exact).collect();
    for (lo, hi) in pending {
        let root = IsolatedRoot::new(q.clone(), lo, hi).expect("irrational root keeps its isolating interval");
        out.push(Eigenvalue::Isolated(root).refined(&width));
    }
    out
}

fn sort_decreasing(v: &mut [Eigenvalue]) {
    v.sort_by(|a, b| b.cmp_value(a).unwrap_or(Ordering::Equal));
}

/// The `D+1` distinct eigenvalues from the characteristic polynomial.
pub fn eigenvalues(arr: &IntersectionArray) -> Result<SpectrumData> {
    let counts = derive_counts(arr)?;
    let p = characteristic_polynomial(arr);
    let mut eig = real_roots(&p);
    if eig.len() != arr.diameter() + 1 {
        return Err(SpectrumError::RootCount { expected: arr.diameter() + 1, found: eig.len() });
    }
    sort_decreasing(&mut eig);
    let multiplicities = eig
        .iter()
        .map(|t| multiplicity_with_n(arr, t, counts.n))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumData {
        eigenvalues: eig,
        multiplicities,
        source: SpectrumSource::CharacteristicPolynomial,
        natural_order: true,
    })
}

/// `theta_i = [D-i](beta - alpha [i]) - [i]`, sorted numerically.
pub fn classical_eigenvalues(cp: &ClassicalParameterSet) -> Result<SpectrumData> {
    let arr = classical_to_array(cp)?;
    let counts = derive_counts(&arr)?;
    let d = cp.d;
    let mut eig = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let bi = rat(cp.bracket(i)?);
        let t = rat(cp.bracket(d - i)?) * (&cp.beta - &cp.alpha * &bi) - &bi;
        eig.push(Eigenvalue::Exact(t));
    }
    let natural_order = eig.windows(2).all(|w| w[0].exact() > w[1].exact());
    sort_decreasing(&mut eig);
    let multiplicities = eig
        .iter()
        .map(|t| multiplicity_with_n(&arr, t, counts.n))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumData {
        eigenvalues: eig,
        multiplicities,
        source: SpectrumSource::ClassicalClosedForm,
        natural_order,
    })
}

/// `u_0..u_D` for one eigenvalue, kept both as polynomials in `theta` and as
/// values.
#[derive(Clone, Debug)]
pub struct StandardSequence {
    pub theta: Eigenvalue,
    pub polys: Vec<Poly>,
}

impl StandardSequence {
    pub fn u(&self, i: usize) -> AlgebraicValue {
        AlgebraicValue::new(self.theta.clone(), RatFn::poly(self.polys[i].clone()))
    }

    /// Exact values when `theta` is rational.
    pub fn exact(&self) -> Option<Vec<Rational>> {
        let t = self.theta.exact()?;
        Some(self.polys.iter().map(|p| p.eval(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// `|u_i| <= 1` for every `i`.
    pub fn bounded(&self) -> Result<bool> {
        for i in 0..self.len() {
            let u = self.u(i);
            if u.cmp_rational(&rat(1))? == Ordering::Greater || u.cmp_rational(&rat(-1))? == Ordering::Less {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The polynomials `u_i(x)` from `c_i u_{i-1} + a_i u_i + b_i u_{i+1} = x u_i`,
/// together with the closing residual `c_D u_{D-1} + a_D u_D - x u_D`.
pub fn standard_polys(arr: &IntersectionArray) -> (Vec<Poly>, Poly) {
    let d = arr.diameter();
    let x = Poly::x();
    let mut u = vec![Poly::one(), x.scale(&Rational::new(1.into(), arr.k().into()))];
    for i in 1..d {
        let lhs = &(&(&x - &Poly::constant(rat(arr.a(i)))) * &u[i]) - &u[i - 1].scale(&rat(arr.c(i)));
        u.push(lhs.scale(&Rational::new(1.into(), arr.b(i).into())));
    }
    let residual = &(&u[d - 1].scale(&rat(arr.c(d))) + &u[d].scale(&rat(arr.a(d)))) - &(&x * &u[d]);
    (u, residual)
}

pub fn standard_sequence(arr: &IntersectionArray, theta: &Eigenvalue) -> Result<StandardSequence> {
    let (polys, residual) = standard_polys(arr);
    if theta.sign_of(&residual)? != Ordering::Equal {
        return Err(SpectrumError::NotEigenvalue(theta.to_string()));
    }
    Ok(StandardSequence { theta: theta.clone(), polys })
}

fn multiplicity_with_n(arr: &IntersectionArray, theta: &Eigenvalue, n: i64) -> Result<AlgebraicValue> {
    let counts = derive_counts(arr)?;
    let seq = standard_sequence(arr, theta)?;
    let mut norm = Poly::zero();
    for (ki, ui) in counts.k.iter().zip(&seq.polys) {
        norm = &norm + &(ui * ui).scale(&rat(*ki));
    }
    let value = AlgebraicValue::new(theta.clone(), RatFn { num: Poly::constant(rat(n)), den: norm });
    Ok(value)
}

/// `m(theta) = n / sum_i k_i u_i(theta)^2`.
pub fn multiplicity(arr: &IntersectionArray, theta: &Eigenvalue) -> Result<AlgebraicValue> {
    let n = derive_counts(arr)?.n;
    multiplicity_with_n(arr, theta, n)
}

/// `b = b_1 / (theta_1 + 1)`.
pub fn b_parameter(arr: &IntersectionArray, spec: &SpectrumData) -> Result<AlgebraicValue> {
    let theta1 = spec.theta(1);
    let den = Poly::from_coeffs(vec![Rational::one(), Rational::one()]);
    if theta1.sign_of(&den)? == Ordering::Equal {
        return Err(AlgError::DivisionByZero.into());
    }
    Ok(AlgebraicValue::new(
        theta1.clone(),
        RatFn { num: Poly::constant(rat(arr.b(1))), den },
    ))
}

/// True when a multiplicity is a positive integer.
pub fn is_positive_integral(m: &AlgebraicValue) -> Result<bool> {
    Ok(m.as_integer()?.is_some_and(|q| q.is_positive()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    fn exact_list(s: &SpectrumData) -> Vec<Rational> {
        s.eigenvalues.iter().map(|e| e.exact().unwrap().clone()).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn johnson_6_3_spectrum() {
        let s = eigenvalues(&arr("{9,4,1;1,4,9}")).unwrap();
        assert_eq!(exact_list(&s), ints(&[9, 3, -1, -3]));
        let m: Vec<Rational> = s.multiplicities.iter().map(|m| m.exact_value().unwrap()).collect();
        assert_eq!(m, ints(&[1, 5, 9, 5]));
    }

    #[test]
    fn other_family_spectra() {
        assert_eq!(exact_list(&eigenvalues(&arr("{6,4,2;1,2,3}")).unwrap()), ints(&[6, 3, 0, -3]));
        assert_eq!(exact_list(&eigenvalues(&arr("{15,8,3;1,4,9}")).unwrap()), ints(&[15, 7, 1, -3]));
    }

    #[test]
    fn classical_closed_form() {
        let cases = [((3, 1, 1, 3), [9, 3, -1, -3]), ((3, 2, 2, 14), [98, 35, 5, -7]), ((3, 2, 1, 7), [49, 17, 1, -7])];
        for ((d, b, al, be), want) in cases {
            let cp = ClassicalParameterSet::from_ints(d, b, al, be).unwrap();
            let s = classical_eigenvalues(&cp).unwrap();
            assert!(s.natural_order);
            assert_eq!(exact_list(&s), ints(&want));
        }
    }

    #[test]
    fn irrational_eigenvalues_are_isolated() {
        // pentagon: {2,1;1,1} has eigenvalues 2, (-1 +- sqrt 5)/2
        let s = eigenvalues(&arr("{2,1;1,1}")).unwrap();
        assert_eq!(s.eigenvalues[0], Eigenvalue::Exact(rat(2)));
        let (lo, hi) = s.eigenvalues[1].bounds();
        assert!(&hi - &lo <= pow10_inv(12));
        assert!((s.eigenvalues[1].approx() - 0.618033988749895).abs() < 1e-11);
        for m in &s.multiplicities[1..] {
            assert_eq!(m.as_integer().unwrap(), Some(rat(2)));
        }
    }

    #[test]
    fn standard_sequences() {
        let a = arr("{9,4,1;1,4,9}");
        let s = standard_sequence(&a, &Eigenvalue::Exact(rat(3))).unwrap();
        assert_eq!(s.exact().unwrap(), vec![rat(1), ratio(1, 3), ratio(-1, 3), rat(-1)]);
        let t = standard_sequence(&a, &Eigenvalue::Exact(rat(-3))).unwrap();
        assert_eq!(t.exact().unwrap(), vec![rat(1), ratio(-1, 3), ratio(1, 3), rat(-1)]);
        let k = standard_sequence(&a, &Eigenvalue::Exact(rat(9))).unwrap();
        assert_eq!(k.exact().unwrap(), vec![rat(1); 4]);
        assert!(standard_sequence(&a, &Eigenvalue::Exact(rat(2))).is_err());
        assert!(s.bounded().unwrap());
    }

    #[test]
    fn multiplicities_and_b() {
        let a = arr("{9,4,1;1,4,9}");
        assert_eq!(multiplicity(&a, &Eigenvalue::Exact(rat(3))).unwrap().exact_value(), Some(rat(5)));
        assert_eq!(multiplicity(&a, &Eigenvalue::Exact(rat(-3))).unwrap().exact_value(), Some(rat(5)));
        assert_eq!(multiplicity(&a, &Eigenvalue::Exact(rat(9))).unwrap().exact_value(), Some(rat(1)));
        for (s, want) in [("{15,8,3;1,4,9}", 1), ("{98,72,32;1,9,49}", 2), ("{49,36,16;1,6,28}", 2)] {
            let a = arr(s);
            let sp = eigenvalues(&a).unwrap();
            assert_eq!(b_parameter(&a, &sp).unwrap().exact_value(), Some(rat(want)));
        }
    }
}
