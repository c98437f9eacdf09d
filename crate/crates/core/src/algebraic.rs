//! Real algebraic numbers given by an isolating interval, and exact sign
//! determination of rational functions evaluated at them.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::poly::{Poly, SturmChain};
use crate::rational::{midpoint, pow10_inv, to_f64, Rational};

/// Decimal exponent of the width reported for isolated eigenvalues.
pub const REPORT_WIDTH_EXP: u32 = 12;
/// Decimal exponent of the narrowest interval tried before giving up on a sign.
pub const MAX_REFINE_EXP: u32 = 30;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("sign undecided at interval width 1e-{MAX_REFINE_EXP}")]
    Undecided,
    #[error("denominator vanishes at the evaluation point")]
    DivisionByZero,
}

/// The unique root of `poly` in the open interval `(lo, hi)`. `poly` is
/// squarefree and takes nonzero values of opposite sign at both endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    poly: Poly,
    lo: Rational,
    hi: Rational,
}

impl IsolatedRoot {
    /// `None` when the endpoint signs do not bracket a single simple root.
    pub fn new(poly: Poly, lo: Rational, hi: Rational) -> Option<Self> {
        let poly = poly.squarefree_part();
        let (sl, sh) = (poly.sign_at(&lo), poly.sign_at(&hi));
        if lo >= hi || sl == Ordering::Equal || sh == Ordering::Equal || sl == sh {
            return None;
        }
        if SturmChain::new(&poly).count_roots(&lo, &hi) != 1 {
            return None;
        }
        Some(IsolatedRoot { poly, lo, hi })
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// One bisection step. Returns the midpoint if it happens to be the root.
    fn bisect(&mut self) -> Option<Rational> {
        let mid = midpoint(&self.lo, &self.hi);
        match self.poly.sign_at(&mid) {
            Ordering::Equal => Some(mid),
            s if s == self.poly.sign_at(&self.lo) => {
                self.lo = mid;
                None
            }
            _ => {
                self.hi = mid;
                None
            }
        }
    }
}

/// An eigenvalue, either a certified rational or an isolated irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenvalue {
    Exact(Rational),
    Isolated(IsolatedRoot),
}

impl Eigenvalue {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Eigenvalue::Exact(q) => Some(q),
            Eigenvalue::Isolated(_) => None,
        }
    }

    /// Bracketing interval; degenerate for exact values.
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            Eigenvalue::Exact(q) => (q.clone(), q.clone()),
            Eigenvalue::Isolated(r) => (r.lo.clone(), r.hi.clone()),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            Eigenvalue::Exact(q) => to_f64(q),
            Eigenvalue::Isolated(r) => to_f64(&midpoint(&r.lo, &r.hi)),
        }
    }

    /// Narrows an isolating interval to at most `width`. A midpoint that hits
    /// the root turns the value exact.
    pub fn refine(&mut self, width: &Rational) {
        let Eigenvalue::Isolated(r) = self else {
            return;
        };
        while &r.width() > width {
            if let Some(q) = r.bisect() {
                *self = Eigenvalue::Exact(q);
                return;
            }
        }
    }

    pub fn refined(mut self, width: &Rational) -> Self {
        self.refine(width);
        self
    }

    /// Exact sign of `g` at this value.
    pub fn sign_of(&self, g: &Poly) -> Result<Ordering, AlgError> {
        let r = match self {
            Eigenvalue::Exact(q) => return Ok(g.sign_at(q)),
            Eigenvalue::Isolated(r) => r,
        };
        if g.is_zero() {
            return Ok(Ordering::Equal);
        }
        let common = g.gcd(&r.poly);
        if common.degree().unwrap_or(0) > 0 && common.sign_at(&r.lo) != common.sign_at(&r.hi) {
            return Ok(Ordering::Equal);
        }
        let sturm = SturmChain::new(g);
        let limit = pow10_inv(MAX_REFINE_EXP);
        let mut r = r.clone();
        loop {
            if sturm.count_roots(&r.lo, &r.hi) == 0 {
                return Ok(g.sign_at(&r.hi));
            }
            if r.width() < limit {
                return Err(AlgError::Undecided);
            }
            if let Some(q) = r.bisect() {
                return Ok(g.sign_at(&q));
            }
        }
    }

    /// Compares this value with a rational.
    pub fn cmp_rational(&self, q: &Rational) -> Result<Ordering, AlgError> {
        self.sign_of(&Poly::linear_root(q))
    }

    /// Orders two values, refining as needed. Distinct isolated roots of one
    /// polynomial always separate.
    pub fn cmp_value(&self, other: &Eigenvalue) -> Result<Ordering, AlgError> {
        match (self, other) {
            (Eigenvalue::Exact(a), Eigenvalue::Exact(b)) => Ok(a.cmp(b)),
            (_, Eigenvalue::Exact(b)) => self.cmp_rational(b),
            (Eigenvalue::Exact(a), _) => other.cmp_rational(a).map(Ordering::reverse),
            (Eigenvalue::Isolated(x), Eigenvalue::Isolated(y)) => {
                let g = x.poly.gcd(&y.poly);
                if g.degree().unwrap_or(0) > 0
                    && self.sign_of(&g)? == Ordering::Equal
                    && other.sign_of(&g)? == Ordering::Equal
                {
                    // both are roots of g: equal iff g has one root on the hull
                    let lo = (&x.lo).min(&y.lo);
                    let hi = (&x.hi).max(&y.hi);
                    if SturmChain::new(&g).count_roots(lo, hi) == 1 {
                        return Ok(Ordering::Equal);
                    }
                }
                let (mut x, mut y) = (x.clone(), y.clone());
                let limit = pow10_inv(MAX_REFINE_EXP);
                loop {
                    if x.hi <= y.lo {
                        return Ok(Ordering::Less);
                    }
                    if y.hi <= x.lo {
                        return Ok(Ordering::Greater);
                    }
                    if x.width() < limit && y.width() < limit {
                        return Err(AlgError::Undecided);
                    }
                    if let Some(q) = x.bisect() {
                        return Eigenvalue::Exact(q).cmp_value(&Eigenvalue::Isolated(y));
                    }
                    if let Some(q) = y.bisect() {
                        return Eigenvalue::Isolated(x).cmp_value(&Eigenvalue::Exact(q));
                    }
                }
            }
        }
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eigenvalue::Exact(q) => write!(f, "{q}"),
            Eigenvalue::Isolated(r) => write!(f, "root of {} in ({}, {}) ~ {:.12}", r.poly, r.lo, r.hi, self.approx()),
        }
    }
}

impl Serialize for Eigenvalue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Eigenvalue::Exact(q) => s.collect_str(q),
            Eigenvalue::Isolated(r) => {
                let mut m = s.serialize_map(Some(4))?;
                m.serialize_entry("root_of", &r.poly.to_string())?;
                m.serialize_entry("lo", &r.lo.to_string())?;
                m.serialize_entry("hi", &r.hi.to_string())?;
                m.serialize_entry("approx", &self.approx())?;
                m.end()
            }
        }
    }
}

/// Quotient of two polynomials in one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(q: Rational) -> Self {
        Self::poly(Poly::constant(q))
    }

    pub fn var() -> Self {
        Self::poly(Poly::x())
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        let g = num.gcd(&den);
        if g.degree().unwrap_or(0) == 0 {
            return RatFn { num, den };
        }
        RatFn { num: num.div_rem(&g).0, den: den.div_rem(&g).0 }
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return Self::normalize(&self.num + &o.num, self.den.clone());
        }
        Self::normalize(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        Self::normalize(&self.num * &o.num, &self.den * &o.den)
    }

    /// Panics when `o` is the zero function.
    pub fn div(&self, o: &RatFn) -> RatFn {
        assert!(!o.num.is_zero(), "division by the zero rational function");
        Self::normalize(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn add_q(&self, q: &Rational) -> RatFn {
        self.add(&RatFn::constant(q.clone()))
    }

    pub fn scale(&self, q: &Rational) -> RatFn {
        RatFn { num: self.num.scale(q), den: self.den.clone() }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, AlgError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let ev = |p: &Poly| p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c));
        ev(&self.num) / ev(&self.den)
    }
}

/// A quantity given as a rational function of an eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicValue {
    pub at: Eigenvalue,
    pub expr: RatFn,
}

impl AlgebraicValue {
    pub fn new(at: Eigenvalue, expr: RatFn) -> Self {
        AlgebraicValue { at, expr }
    }

    pub fn rational(q: Rational) -> Self {
        AlgebraicValue { at: Eigenvalue::Exact(Rational::zero()), expr: RatFn::constant(q) }
    }

    pub fn map(&self, f: impl FnOnce(&RatFn) -> RatFn) -> Self {
        AlgebraicValue { at: self.at.clone(), expr: f(&self.expr) }
    }

    pub fn sign(&self) -> Result<Ordering, AlgError> {
        let sd = self.at.sign_of(&self.expr.den)?;
        if sd == Ordering::Equal {
            return Err(AlgError::DivisionByZero);
        }
        let sn = self.at.sign_of(&self.expr.num)?;
        Ok(if sd == Ordering::Less { sn.reverse() } else { sn })
    }

    pub fn cmp_rational(&self, q: &Rational) -> Result<Ordering, AlgError> {
        self.map(|e| e.add_q(&-q)).sign()
    }

    /// The value when it is known to be rational: either the point is exact or
    /// the expression is constant.
    pub fn exact_value(&self) -> Option<Rational> {
        if self.expr.num.degree().unwrap_or(0) == 0 && self.expr.den.degree().unwrap_or(0) == 0 {
            let n = self.expr.num.coeffs().first().cloned().unwrap_or_else(Rational::zero);
            return Some(n / self.expr.den.coeffs()[0].clone());
        }
        match &self.at {
            Eigenvalue::Exact(q) => self.expr.eval(q).ok(),
            Eigenvalue::Isolated(_) => None,
        }
    }

    /// The value when it equals an integer, decided exactly by testing the
    /// integer nearest to a floating estimate.
    pub fn as_integer(&self) -> Result<Option<Rational>, AlgError> {
        if let Some(q) = self.exact_value() {
            return Ok(q.is_integer().then_some(q));
        }
        let approx = self.approx();
        if !approx.is_finite() {
            return Ok(None);
        }
        let cand = Rational::from_integer(num_bigint::BigInt::from(approx.round() as i64));
        Ok((self.cmp_rational(&cand)? == Ordering::Equal).then_some(cand))
    }

    pub fn approx(&self) -> f64 {
        match &self.at {
            Eigenvalue::Exact(q) => self.expr.eval(q).map(|v| to_f64(&v)).unwrap_or(f64::NAN),
            Eigenvalue::Isolated(_) => {
                let fine = self.at.clone().refined(&pow10_inv(REPORT_WIDTH_EXP + 4));
                match fine {
                    Eigenvalue::Exact(q) => self.expr.eval(&q).map(|v| to_f64(&v)).unwrap_or(f64::NAN),
                    Eigenvalue::Isolated(_) => self.expr.eval_f64(fine.approx()),
                }
            }
        }
    }

    pub fn is_positive(&self) -> Result<bool, AlgError> {
        Ok(self.sign()? == Ordering::Greater)
    }
}

impl fmt::Display for AlgebraicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_value() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "~{:.12}", self.approx()),
        }
    }
}

impl Serialize for AlgebraicValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.exact_value() {
            Some(q) => s.collect_str(&q),
            None => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("approx", &self.approx())?;
                m.end()
            }
        }
    }
}

/// Sign of a product of two intervals' worth of values against a rational,
/// used where two different eigenvalues meet in one inequality.
pub fn cmp_product_plus(
    x: &Eigenvalue,
    dx: &Rational,
    y: &Eigenvalue,
    dy: &Rational,
    target: &Rational,
) -> Result<Ordering, AlgError> {
    if let (Some(a), Some(b)) = (x.exact(), y.exact()) {
        return Ok(((a + dx) * (b + dy)).cmp(target));
    }
    if let Some(a) = x.exact() {
        return cmp_scaled(y, &(a + dx), dy, target);
    }
    if let Some(b) = y.exact() {
        return cmp_scaled(x, &(b + dy), dx, target);
    }
    let (mut x, mut y) = (x.clone(), y.clone());
    let mut w = pow10_inv(3);
    let limit = pow10_inv(MAX_REFINE_EXP);
    loop {
        x.refine(&w);
        y.refine(&w);
        if x.exact().is_some() || y.exact().is_some() {
            return cmp_product_plus(&x, dx, &y, dy, target);
        }
        let (xl, xh) = x.bounds();
        let (yl, yh) = y.bounds();
        let prods = [
            (&xl + dx) * (&yl + dy),
            (&xl + dx) * (&yh + dy),
            (&xh + dx) * (&yl + dy),
            (&xh + dx) * (&yh + dy),
        ];
        let lo = prods.iter().min().unwrap();
        let hi = prods.iter().max().unwrap();
        if lo > target {
            return Ok(Ordering::Greater);
        }
        if hi < target {
            return Ok(Ordering::Less);
        }
        if w < limit {
            return Err(AlgError::Undecided);
        }
        w = &w * pow10_inv(3);
    }
}

/// Compares `c * (x + dx)` with `target`.
fn cmp_scaled(x: &Eigenvalue, c: &Rational, dx: &Rational, target: &Rational) -> Result<Ordering, AlgError> {
    let p = Poly::from_coeffs(vec![c * dx - target, c.clone()]);
    x.sign_of(&p)
}
