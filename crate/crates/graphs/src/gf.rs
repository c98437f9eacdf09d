//! Arithmetic in GF(p^e) through precomputed tables, and row reduction of
//! small matrices over it.

use geodrg_core::primes::prime_power;

/// A finite field with elements `0..q`. Element `x` encodes the polynomial
/// whose base-`p` digits are its coefficients; `0` and `1` are the identities.
#[derive(Clone, Debug)]
pub struct Field {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl Field {
    pub fn new(q: u64) -> Option<Field> {
        let (p, e) = prime_power(q)?;
        if q > 256 {
            return None;
        }
        let (p, e, q) = (p as usize, e as usize, q as usize);
        let digits = |mut x: usize| -> Vec<usize> {
            (0..e)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let undigits = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);

        let mut add = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<usize> = digits(a).iter().zip(digits(b)).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s) as u8;
            }
        }

        // Smallest monic modulus of degree e giving a field.
        for tail in 0..q {
            let mut modulus = digits(tail);
            modulus.push(1);
            let mul = poly_mul_table(p, e, &modulus, &digits, &undigits);
            let inv: Option<Vec<u8>> =
                (0..q).map(|a| if a == 0 { Some(0) } else { (1..q).find(|&b| mul[a * q + b] == 1).map(|b| b as u8) }).collect();
            if let Some(inv) = inv {
                let neg = (0..q).map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8).collect();
                return Some(Field { q, add, mul, neg, inv });
            }
        }
        None
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// In-place reduced row-echelon form of a `rows × cols` row-major
    /// matrix; returns the rank.
    pub fn rref(&self, m: &mut [u8], rows: usize, cols: usize) -> usize {
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else { continue };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let s = self.inv(m[rank * cols + c]);
            for j in 0..cols {
                m[rank * cols + j] = self.mul(m[rank * cols + j], s);
            }
            for r in 0..rows {
                let f = m[r * cols + c];
                if r != rank && f != 0 {
                    for j in 0..cols {
                        let t = self.mul(f, m[rank * cols + j]);
                        m[r * cols + j] = self.sub(m[r * cols + j], t);
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    pub fn rank(&self, m: &[u8], rows: usize, cols: usize) -> usize {
        let mut w = m.to_vec();
        self.rref(&mut w, rows, cols)
    }

    /// All `dim`-dimensional subspaces of GF(q)^n as RREF matrices,
    /// in lexicographic order of their row-major entries.
    pub fn subspaces(&self, n: usize, dim: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for pivots in combinations(n, dim) {
            let free: Vec<(usize, usize)> = (0..dim)
                .flat_map(|i| ((pivots[i] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                .collect();
            let total = self.q.pow(free.len() as u32);
            for mut code in 0..total {
                let mut m = vec![0u8; dim * n];
                for (i, &p) in pivots.iter().enumerate() {
                    m[i * n + p] = 1;
                }
                for &(i, c) in &free {
                    m[i * n + c] = (code % self.q) as u8;
                    code /= self.q;
                }
                out.push(m);
            }
        }
        out.sort();
        out
    }

    /// Nonzero vectors of GF(q)^n whose first nonzero entry is 1.
    pub fn projective_points(&self, n: usize) -> Vec<Vec<u8>> {
        let mut out: Vec<Vec<u8>> = vectors(self.q, n).filter(|v| v.iter().find(|&&x| x != 0) == Some(&1)).collect();
        out.sort();
        out
    }
}

fn poly_mul_table(
    p: usize,
    e: usize,
    modulus: &[usize],
    digits: &dyn Fn(usize) -> Vec<usize>,
    undigits: &dyn Fn(&[usize]) -> usize,
) -> Vec<u8> {
    let q = p.pow(e as u32);
    let mut mul = vec![0u8; q * q];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let mut prod = vec![0usize; 2 * e];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for deg in (e..2 * e).rev() {
                let c = prod[deg];
                if c != 0 {
                    for (i, m) in modulus.iter().enumerate() {
                        prod[deg - e + i] = (prod[deg - e + i] + p * p - c * m % p) % p;
                    }
                }
            }
            mul[a * q + b] = undigits(&prod[..e]) as u8;
        }
    }
    mul
}

/// All vectors of `{0..q}^n` in lexicographic order.
pub fn vectors(q: usize, n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..q.pow(n as u32)).map(move |mut code| {
        let mut v = vec![0u8; n];
        for x in v.iter_mut().rev() {
            *x = (code % q) as u8;
            code /= q;
        }
        v
    })
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
