//! Intersection arrays, classical parameters and geometric arrays, with the
//! exact conversions among them.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::rational::{rat, to_i64, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("Gaussian bracket with base b = 0")]
    ZeroBase,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{what}_{index} = {value} is not an integer")]
    NonIntegral { what: &'static str, index: usize, value: String },
    #[error("{what}_{index} = {value} is not positive")]
    NonPositive { what: &'static str, index: usize, value: String },
    #[error("a_{index} = {value} is negative")]
    NegativeA { index: usize, value: i64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("tau_D = {found} differs from r = {expected}")]
    TauMismatch { expected: i64, found: i64 },
}

pub type Result<T> = std::result::Result<T, ParamError>;

/// `[j]_b = 1 + b + ... + b^(j-1)`, which is `j` when `b = 1`.
pub fn gaussian_bracket(j: u32, b: i64) -> Result<i64> {
    if b == 0 {
        return Err(ParamError::ZeroBase);
    }
    let mut sum: i64 = 0;
    let mut pow: i64 = 1;
    for step in 0..j {
        sum = sum.checked_add(pow).ok_or(ParamError::Overflow("[j]"))?;
        if step + 1 < j {
            pow = pow.checked_mul(b).ok_or(ParamError::Overflow("[j]"))?;
        }
    }
    Ok(sum)
}

/// `{b_0, ..., b_{D-1}; c_1, ..., c_D}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntersectionArray {
    b: Vec<i64>,
    c: Vec<i64>,
}

impl IntersectionArray {
    pub fn new(b: Vec<i64>, c: Vec<i64>) -> Result<Self> {
        if b.is_empty() || b.len() != c.len() {
            return Err(ParamError::Malformed(format!(
                "need D >= 1 entries in both halves, got {} and {}",
                b.len(),
                c.len()
            )));
        }
        if let Some(i) = b.iter().position(|&x| x < 1) {
            return Err(ParamError::NonPositive { what: "b", index: i, value: b[i].to_string() });
        }
        if let Some(i) = c.iter().position(|&x| x < 1) {
            return Err(ParamError::NonPositive { what: "c", index: i + 1, value: c[i].to_string() });
        }
        if c[0] != 1 {
            return Err(ParamError::Malformed(format!("c_1 = {} must be 1", c[0])));
        }
        Ok(IntersectionArray { b, c })
    }

    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    /// Valency `k = b_0`.
    pub fn k(&self) -> i64 {
        self.b[0]
    }

    /// `b_i`, with `b_D = 0`.
    pub fn b(&self, i: usize) -> i64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `c_i`, with `c_0 = 0`.
    pub fn c(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.c[i - 1]
        }
    }

    /// `a_i = k - b_i - c_i`.
    pub fn a(&self, i: usize) -> i64 {
        self.k() - self.b(i) - self.c(i)
    }

    pub fn b_slice(&self) -> &[i64] {
        &self.b
    }

    pub fn c_slice(&self) -> &[i64] {
        &self.c
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

impl FromStr for IntersectionArray {
    type Err = ParamError;

    /// Accepts `{b0,b1,...;c1,c2,...}` with optional braces and whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        let (bs, cs) = t
            .split_once(';')
            .ok_or_else(|| ParamError::Malformed(format!("missing ';' in {s:?}")))?;
        let nums = |part: &str| -> Result<Vec<i64>> {
            part.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|_| ParamError::Malformed(format!("bad integer {:?}", x.trim())))
                })
                .collect()
        };
        IntersectionArray::new(nums(bs)?, nums(cs)?)
    }
}

/// Derived counts of an intersection array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    /// `a_0..a_D`.
    pub a: Vec<i64>,
    /// `k_0..k_D`, the sizes of the distance layers.
    pub k: Vec<i64>,
    /// Number of vertices.
    pub n: i64,
}

/// `a_i` and `k_{i+1} = b_i k_i / c_{i+1}`; fails on a negative `a_i` or a
/// non-integral layer size.
pub fn derive_counts(arr: &IntersectionArray) -> Result<Counts> {
    let d = arr.diameter();
    let a: Vec<i64> = (0..=d).map(|i| arr.a(i)).collect();
    if let Some(i) = a.iter().position(|&x| x < 0) {
        return Err(ParamError::NegativeA { index: i, value: a[i] });
    }
    let mut k = vec![1i64];
    for i in 0..d {
        let num = k[i].checked_mul(arr.b(i)).ok_or(ParamError::Overflow("k_i"))?;
        let den = arr.c(i + 1);
        if num % den != 0 {
            return Err(ParamError::NonIntegral {
                what: "k",
                index: i + 1,
                value: format!("{num}/{den}"),
            });
        }
        k.push(num / den);
    }
    let n = k
        .iter()
        .try_fold(0i64, |acc, &x| acc.checked_add(x))
        .ok_or(ParamError::Overflow("n"))?;
    Ok(Counts { a, k, n })
}

/// Classical parameters `(D, b, alpha, beta)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalParameterSet {
    pub d: usize,
    pub b: i64,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub beta: Rational,
}

impl ClassicalParameterSet {
    pub fn new(d: usize, b: i64, alpha: Rational, beta: Rational) -> Result<Self> {
        if d == 0 {
            return Err(ParamError::Malformed("diameter must be positive".into()));
        }
        if b == 0 {
            return Err(ParamError::ZeroBase);
        }
        if d >= 3 && b == -1 {
            return Err(ParamError::Malformed("b = -1 is impossible for D >= 3".into()));
        }
        Ok(ClassicalParameterSet { d, b, alpha, beta })
    }

    pub fn from_ints(d: usize, b: i64, alpha: i64, beta: i64) -> Result<Self> {
        Self::new(d, b, rat(alpha), rat(beta))
    }

    pub fn bracket(&self, j: usize) -> Result<i64> {
        gaussian_bracket(j as u32, self.b)
    }
}

impl fmt::Display for ClassicalParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.d, self.b, self.alpha, self.beta)
    }
}

fn positive_integer(what: &'static str, index: usize, q: &Rational) -> Result<i64> {
    let v = to_i64(q).ok_or_else(|| ParamError::NonIntegral { what, index, value: q.to_string() })?;
    if v < 1 {
        return Err(ParamError::NonPositive { what, index, value: v.to_string() });
    }
    Ok(v)
}

/// `b_i = ([D] - [i])(beta - alpha [i])`, `c_i = [i](1 + alpha [i-1])`, and
/// the identity `c_2 = (b+1)(alpha+1)`.
pub fn classical_to_array(cp: &ClassicalParameterSet) -> Result<IntersectionArray> {
    let d = cp.d;
    let br = |j: usize| cp.bracket(j).map(rat);
    let top = br(d)?;
    let mut b = Vec::with_capacity(d);
    let mut c = Vec::with_capacity(d);
    for i in 0..d {
        let bi = (&top - br(i)?) * (&cp.beta - &cp.alpha * br(i)?);
        b.push(positive_integer("b", i, &bi)?);
    }
    for i in 1..=d {
        let ci = br(i)? * (Rational::one() + &cp.alpha * br(i - 1)?);
        c.push(positive_integer("c", i, &ci)?);
    }
    if d >= 2 {
        let expect = rat(cp.b + 1) * (&cp.alpha + Rational::one());
        if rat(c[1]) != expect {
            return Err(ParamError::Malformed(format!("c_2 = {} but (b+1)(alpha+1) = {expect}", c[1])));
        }
    }
    IntersectionArray::new(b, c)
}

/// `phi_0..phi_{D-1}`, `tau_1..tau_D` and `beta`, with `r = tau_D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GeometricArray {
    phi: Vec<i64>,
    tau: Vec<i64>,
    beta: i64,
}

impl GeometricArray {
    pub fn new(phi: Vec<i64>, tau: Vec<i64>, beta: i64) -> Result<Self> {
        let d = phi.len();
        if d == 0 || tau.len() != d {
            return Err(ParamError::Malformed(format!(
                "phi and tau need D >= 1 entries each, got {} and {}",
                phi.len(),
                tau.len()
            )));
        }
        if beta < 1 {
            return Err(ParamError::NonPositive { what: "beta", index: 0, value: beta.to_string() });
        }
        if let Some(j) = phi.iter().position(|&x| x < 1) {
            return Err(ParamError::NonPositive { what: "phi", index: j, value: phi[j].to_string() });
        }
        if let Some(i) = tau.iter().position(|&x| x < 1) {
            return Err(ParamError::NonPositive { what: "tau", index: i + 1, value: tau[i].to_string() });
        }
        if phi[0] != 1 {
            return Err(ParamError::Malformed(format!("phi_0 = {} must be 1", phi[0])));
        }
        if tau[0] != 1 {
            return Err(ParamError::Malformed(format!("tau_1 = {} must be 1", tau[0])));
        }
        if tau[d - 1] < 2 {
            return Err(ParamError::Malformed(format!("r = tau_D = {} must be at least 2", tau[d - 1])));
        }
        if let Some(j) = (1..d).find(|&j| phi[j] > beta) {
            return Err(ParamError::Malformed(format!("phi_{j} = {} exceeds beta = {beta}", phi[j])));
        }
        Ok(GeometricArray { phi, tau, beta })
    }

    pub fn diameter(&self) -> usize {
        self.phi.len()
    }

    /// `phi_j` for `0 <= j <= D-1`.
    pub fn phi(&self, j: usize) -> i64 {
        self.phi[j]
    }

    /// `tau_i` for `1 <= i <= D`, with `tau_0 = 0`.
    pub fn tau(&self, i: usize) -> i64 {
        if i == 0 {
            0
        } else {
            self.tau[i - 1]
        }
    }

    pub fn phis(&self) -> &[i64] {
        &self.phi
    }

    pub fn taus(&self) -> &[i64] {
        &self.tau
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    /// `r = tau_D = -theta_min`.
    pub fn r(&self) -> i64 {
        self.tau[self.tau.len() - 1]
    }

    /// Valency `k = r * beta`.
    pub fn k(&self) -> i64 {
        self.r() * self.beta
    }

    /// `c_2 = tau_2 phi_1`, or `None` when `D = 1`.
    pub fn c2(&self) -> Option<i64> {
        (self.diameter() >= 2).then(|| self.tau[1] * self.phi[1])
    }
}

impl fmt::Display for GeometricArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "phi=({}) tau=({}) beta={}", join(&self.phi), join(&self.tau), self.beta)
    }
}

/// `c_i = tau_i phi_{i-1}` and `b_i = (r - tau_i)(beta + 1 - phi_i)`.
pub fn geometric_to_array(geo: &GeometricArray) -> Result<IntersectionArray> {
    let d = geo.diameter();
    let r = geo.r();
    let mut b = Vec::with_capacity(d);
    for i in 0..d {
        let bi = (r - geo.tau(i))
            .checked_mul(geo.beta + 1 - geo.phi(i))
            .ok_or(ParamError::Overflow("b_i"))?;
        if bi < 1 {
            return Err(ParamError::NonPositive { what: "b", index: i, value: bi.to_string() });
        }
        b.push(bi);
    }
    let c = (1..=d)
        .map(|i| geo.tau(i).checked_mul(geo.phi(i - 1)).ok_or(ParamError::Overflow("c_i")))
        .collect::<Result<Vec<_>>>()?;
    IntersectionArray::new(b, c)
}

/// Inverts [`geometric_to_array`] for a postulated `r = -theta_min`.
pub fn array_to_geometric(arr: &IntersectionArray, r: i64) -> Result<GeometricArray> {
    if r < 1 {
        return Err(ParamError::NonPositive { what: "r", index: 0, value: r.to_string() });
    }
    let d = arr.diameter();
    if arr.k() % r != 0 {
        return Err(ParamError::NonIntegral {
            what: "beta",
            index: 0,
            value: format!("{}/{r}", arr.k()),
        });
    }
    let beta = arr.k() / r;
    let mut phi = vec![1i64];
    let mut tau = Vec::with_capacity(d);
    for i in 1..=d {
        let prev = phi[i - 1];
        if arr.c(i) % prev != 0 {
            return Err(ParamError::NonIntegral {
                what: "tau",
                index: i,
                value: format!("{}/{prev}", arr.c(i)),
            });
        }
        let t = arr.c(i) / prev;
        tau.push(t);
        if i < d {
            let gap = r - t;
            if gap < 1 {
                return Err(ParamError::NonPositive { what: "r - tau", index: i, value: gap.to_string() });
            }
            if arr.b(i) % gap != 0 {
                return Err(ParamError::NonIntegral {
                    what: "phi",
                    index: i,
                    value: format!("{} + 1 - {}/{gap}", beta, arr.b(i)),
                });
            }
            let p = beta + 1 - arr.b(i) / gap;
            if p < 1 {
                return Err(ParamError::NonPositive { what: "phi", index: i, value: p.to_string() });
            }
            phi.push(p);
        }
    }
    if tau[d - 1] != r {
        return Err(ParamError::TauMismatch { expected: r, found: tau[d - 1] });
    }
    GeometricArray::new(phi, tau, beta)
}

/// `phi_j = 1 + alpha [j]`, `tau_j = [j]`, `beta = b_0 / [D]`; defined for
/// `b >= 2` and `D >= 3`.
pub fn classical_geometric(cp: &ClassicalParameterSet) -> Result<GeometricArray> {
    if cp.b < 2 || cp.d < 3 {
        return Err(ParamError::NotApplicable(format!("needs b >= 2 and D >= 3, got b = {}, D = {}", cp.b, cp.d)));
    }
    let arr = classical_to_array(cp)?;
    let d = cp.d;
    let phi = (0..d)
        .map(|j| positive_integer("phi", j, &(Rational::one() + &cp.alpha * rat(cp.bracket(j)?))))
        .collect::<Result<Vec<_>>>()?;
    let tau = (1..=d).map(|j| cp.bracket(j)).collect::<Result<Vec<_>>>()?;
    let top = cp.bracket(d)?;
    let beta = Rational::new(arr.k().into(), top.into());
    if beta.is_zero() {
        return Err(ParamError::NonPositive { what: "beta", index: 0, value: "0".into() });
    }
    let beta = positive_integer("beta", 0, &beta)?;
    GeometricArray::new(phi, tau, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(s: &str) -> IntersectionArray {
        s.parse().unwrap()
    }

    #[test]
    fn brackets() {
        assert_eq!(gaussian_bracket(3, 2), Ok(7));
        assert_eq!(gaussian_bracket(0, 5), Ok(0));
        assert_eq!(gaussian_bracket(2, 1), Ok(2));
        assert_eq!(gaussian_bracket(3, -2), Ok(3));
        assert_eq!(gaussian_bracket(1, 0), Err(ParamError::ZeroBase));
    }

    #[test]
    fn classical_arrays() {
        let cases = [
            ((3, 1, 1, 3), "{9,4,1;1,4,9}"),
            ((3, 2, 2, 14), "{98,72,32;1,9,49}"),
            ((3, 1, 0, 2), "{6,4,2;1,2,3}"),
        ];
        for ((d, b, al, be), want) in cases {
            let cp = ClassicalParameterSet::from_ints(d, b, al, be).unwrap();
            assert_eq!(classical_to_array(&cp).unwrap(), arr(want));
        }
    }

    #[test]
    fn classical_rejects_non_integral() {
        let cp = ClassicalParameterSet::new(3, 1, rat(1), Rational::new(5.into(), 2.into())).unwrap();
        assert!(matches!(classical_to_array(&cp), Err(ParamError::NonIntegral { what: "b", index: 0, .. })));
    }

    #[test]
    fn counts() {
        let c = derive_counts(&arr("{9,4,1;1,4,9}")).unwrap();
        assert_eq!((c.a, c.k, c.n), (vec![0, 4, 4, 0], vec![1, 9, 9, 1], 20));
        assert_eq!(derive_counts(&arr("{15,8,3;1,4,9}")).unwrap().k, vec![1, 15, 30, 10]);
        let h = derive_counts(&arr("{6,4,2;1,2,3}")).unwrap();
        assert_eq!((h.k, h.n), (vec![1, 6, 12, 8], 27));
        assert!(matches!(derive_counts(&arr("{3,2;1,2}")), Ok(_)));
        assert!(matches!(derive_counts(&arr("{4,3;1,5}")), Err(ParamError::NegativeA { index: 2, .. })));
        assert!(matches!(derive_counts(&arr("{3,2;1,4}")), Err(ParamError::NegativeA { .. })));
        assert!(matches!(derive_counts(&arr("{5,2;1,3}")), Err(ParamError::NonIntegral { what: "k", index: 2, .. })));
    }

    #[test]
    fn geometric_to_array_examples() {
        let g = |p: &[i64], t: &[i64], b| GeometricArray::new(p.to_vec(), t.to_vec(), b).unwrap();
        assert_eq!(geometric_to_array(&g(&[1, 2, 3], &[1, 2, 3], 5)).unwrap(), arr("{15,8,3;1,4,9}"));
        assert_eq!(geometric_to_array(&g(&[1, 1, 1], &[1, 2, 3], 2)).unwrap(), arr("{6,4,2;1,2,3}"));
        assert_eq!(geometric_to_array(&g(&[1, 2, 4], &[1, 3, 7], 7)).unwrap(), arr("{49,36,16;1,6,28}"));
    }

    #[test]
    fn array_to_geometric_examples() {
        let g = array_to_geometric(&arr("{15,8,3;1,4,9}"), 3).unwrap();
        assert_eq!((g.phis(), g.taus(), g.beta()), (&[1, 2, 3][..], &[1, 2, 3][..], 5));
        let h = array_to_geometric(&arr("{6,4,2;1,2,3}"), 3).unwrap();
        assert_eq!((h.phis(), h.taus(), h.beta()), (&[1, 1, 1][..], &[1, 2, 3][..], 2));
        assert!(matches!(
            array_to_geometric(&arr("{9,4,1;1,4,9}"), 2),
            Err(ParamError::NonIntegral { what: "beta", .. })
        ));
        assert!(matches!(
            array_to_geometric(&arr("{9,4,1;1,4,9}"), 9),
            Err(ParamError::NonPositive { what: "r - tau", .. }) | Err(ParamError::NonIntegral { .. })
        ));
    }

    #[test]
    fn classical_geometric_examples() {
        let g = classical_geometric(&ClassicalParameterSet::from_ints(3, 2, 2, 14).unwrap()).unwrap();
        assert_eq!((g.phis(), g.taus(), g.beta()), (&[1, 3, 7][..], &[1, 3, 7][..], 14));
        let b = classical_geometric(&ClassicalParameterSet::from_ints(3, 2, 1, 7).unwrap()).unwrap();
        assert_eq!((b.phis(), b.taus(), b.beta()), (&[1, 2, 4][..], &[1, 3, 7][..], 7));
        assert!(matches!(
            classical_geometric(&ClassicalParameterSet::from_ints(3, 1, 1, 3).unwrap()),
            Err(ParamError::NotApplicable(_))
        ));
    }

    #[test]
    fn geometric_invariants_enforced() {
        assert!(GeometricArray::new(vec![2, 2], vec![1, 2], 5).is_err());
        assert!(GeometricArray::new(vec![1, 2], vec![1, 1], 5).is_err());
        assert!(GeometricArray::new(vec![1, 6], vec![1, 2], 5).is_err());
        assert!(GeometricArray::new(vec![1, 2], vec![1, 2], 5).is_ok());
    }

    #[test]
    fn array_parse_and_display() {
        let a = arr(" { 15, 8 ,3 ; 1,4,9 } ");
        assert_eq!(a.to_string(), "{15,8,3;1,4,9}");
        assert!("{1,2;1}".parse::<IntersectionArray>().is_err());
        assert!("{3,2;2,1}".parse::<IntersectionArray>().is_err());
        assert!(ClassicalParameterSet::from_ints(3, -1, 0, 1).is_err());
    }
}
