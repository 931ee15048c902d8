//! Exact arithmetic: arbitrary-precision rationals, Gaussian rationals
//! (a + b·i with rational a, b), and sparse matrices over them. All
//! representation-theoretic identities in this crate are checked with zero
//! residual in this arithmetic.

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

pub fn rat_i(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // Good enough for desk-scale magnitudes.
    let nf = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

/// Gaussian rational: `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GRat {
    pub re: Rat,
    pub im: Rat,
}

impl GRat {
    pub fn zero() -> Self {
        GRat { re: Rat::zero(), im: Rat::zero() }
    }
    pub fn one() -> Self {
        GRat { re: Rat::one(), im: Rat::zero() }
    }
    pub fn i() -> Self {
        GRat { re: Rat::zero(), im: Rat::one() }
    }
    pub fn from_int(n: i64) -> Self {
        GRat { re: rat_i(n), im: Rat::zero() }
    }
    pub fn from_rat(r: Rat) -> Self {
        GRat { re: r, im: Rat::zero() }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn neg(&self) -> Self {
        GRat { re: -self.re.clone(), im: -self.im.clone() }
    }
    pub fn conj(&self) -> Self {
        GRat { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn add(&self, o: &GRat) -> Self {
        GRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    pub fn sub(&self, o: &GRat) -> Self {
        GRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    pub fn mul(&self, o: &GRat) -> Self {
        GRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    pub fn div(&self, o: &GRat) -> Self {
        let n2 = &o.re * &o.re + &o.im * &o.im;
        assert!(!n2.is_zero(), "division by zero GRat");
        let c = o.conj();
        let p = self.mul(&c);
        GRat { re: p.re / n2.clone(), im: p.im / n2 }
    }
    pub fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    /// Returns ±1 when the value is exactly ±1, else None.
    pub fn as_sign(&self) -> Option<i8> {
        if !self.im.is_zero() {
            return None;
        }
        if self.re == Rat::one() {
            Some(1)
        } else if self.re == -Rat::one() {
            Some(-1)
        } else {
            None
        }
    }
}

/// Sparse exact matrix over Gaussian rationals, row-major adjacency.
#[derive(Clone, Debug, PartialEq)]
pub struct SMat {
    pub rows: usize,
    pub cols: usize,
    /// Per row: sorted (col, value) with nonzero values.
    pub entries: Vec<Vec<(usize, GRat)>>,
}

impl SMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SMat { rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SMat::zeros(n, n);
        for i in 0..n {
            m.entries[i].push((i, GRat::one()));
        }
        m
    }

    pub fn from_triplets(rows: usize, cols: usize, trip: &[(usize, usize, GRat)]) -> Self {
        let mut m = SMat::zeros(rows, cols);
        for (i, j, v) in trip {
            m.set(*i, *j, v.clone());
        }
        m
    }

    pub fn diag(vals: Vec<GRat>) -> Self {
        let n = vals.len();
        let mut m = SMat::zeros(n, n);
        for (i, v) in vals.into_iter().enumerate() {
            if !v.is_zero() {
                m.entries[i].push((i, v));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> GRat {
        for (c, v) in &self.entries[i] {
            if *c == j {
                return v.clone();
            }
        }
        GRat::zero()
    }

    pub fn set(&mut self, i: usize, j: usize, v: GRat) {
        let row = &mut self.entries[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(pos) => {
                if v.is_zero() {
                    row.remove(pos);
                } else {
                    row[pos].1 = v;
                }
            }
            Err(pos) => {
                if !v.is_zero() {
                    row.insert(pos, (j, v));
                }
            }
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &GRat) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(i, j);
        self.set(i, j, cur.add(v));
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }

    pub fn add(&self, o: &SMat) -> SMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for i in 0..o.rows {
            for (j, v) in &o.entries[i] {
                out.add_to(i, *j, v);
            }
        }
        out
    }

    pub fn sub(&self, o: &SMat) -> SMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut out = self.clone();
        for i in 0..o.rows {
            for (j, v) in &o.entries[i] {
                out.add_to(i, *j, &v.neg());
            }
        }
        out
    }

    pub fn scale(&self, s: &GRat) -> SMat {
        if s.is_zero() {
            return SMat::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for row in out.entries.iter_mut() {
            for (_, v) in row.iter_mut() {
                *v = v.mul(s);
            }
        }
        out
    }

    pub fn matmul(&self, o: &SMat) -> SMat {
        assert_eq!(self.cols, o.rows);
        let mut out = SMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            let mut acc: std::collections::BTreeMap<usize, GRat> = std::collections::BTreeMap::new();
            for (k, a) in &self.entries[i] {
                for (j, b) in &o.entries[*k] {
                    let t = a.mul(b);
                    acc.entry(*j)
                        .and_modify(|x| *x = x.add(&t))
                        .or_insert(t);
                }
            }
            out.entries[i] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn commutator(&self, o: &SMat) -> SMat {
        self.matmul(o).sub(&o.matmul(self))
    }

    pub fn anticommutator(&self, o: &SMat) -> SMat {
        self.matmul(o).add(&o.matmul(self))
    }

    pub fn transpose(&self) -> SMat {
        let mut out = SMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (j, v) in &self.entries[i] {
                out.entries[*j].push((i, v.clone()));
            }
        }
        for row in out.entries.iter_mut() {
            row.sort_by_key(|(c, _)| *c);
        }
        out
    }

    pub fn kron(&self, o: &SMat) -> SMat {
        let mut out = SMat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for (j, a) in &self.entries[i] {
                for k in 0..o.rows {
                    for (l, b) in &o.entries[k] {
                        out.entries[i * o.rows + k].push((j * o.cols + l, a.mul(b)));
                    }
                }
            }
        }
        for row in out.entries.iter_mut() {
            row.sort_by_key(|(c, _)| *c);
        }
        out
    }

    pub fn apply(&self, v: &[GRat]) -> Vec<GRat> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![GRat::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = GRat::zero();
            for (j, a) in &self.entries[i] {
                if !v[*j].is_zero() {
                    acc = acc.add(&a.mul(&v[*j]));
                }
            }
            out[i] = acc;
        }
        out
    }

    /// exp(M) for nilpotent M, by summing until the power vanishes.
    pub fn exp_nilpotent(&self) -> SMat {
        assert_eq!(self.rows, self.cols);
        let mut sum = SMat::identity(self.rows);
        let mut term = self.clone();
        let mut k = 1u64;
        while !term.is_zero() {
            let scaled = term.scale(&GRat::from_rat(Rat::new(
                BigInt::one(),
                factorial(k),
            )));
            sum = sum.add(&scaled);
            term = term.matmul(self);
            k += 1;
            assert!(k < 200, "matrix is not nilpotent");
        }
        sum
    }

    pub fn to_cmat(&self) -> crate::linalg::CMat {
        let mut m = crate::linalg::CMat::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (j, v) in &self.entries[i] {
                m[(i, *j)] = v.to_c64();
            }
        }
        m
    }
}

fn factorial(k: u64) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= BigInt::from(i);
    }
    f
}

/// Exact dense Gaussian elimination over Gaussian rationals. Solves `A x = b`,
/// returning None when singular.
pub fn solve_exact(a: &SMat, b: &[GRat]) -> Option<Vec<GRat>> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m: Vec<Vec<GRat>> = (0..n)
        .map(|i| {
            let mut row = vec![GRat::zero(); n + 1];
            for (j, v) in &a.entries[i] {
                row[*j] = v.clone();
            }
            row[n] = b[i].clone();
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let d = m[col][col].clone();
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].div(&d);
            for j in col..=n {
                let t = f.mul(&m[col][j]);
                m[r][j] = m[r][j].sub(&t);
            }
        }
    }
    let mut x = vec![GRat::zero(); n];
    for i in 0..n {
        if m[i][i].is_zero() {
            return None;
        }
        x[i] = m[i][n].div(&m[i][i]);
    }
    Some(x)
}

/// Signed ratio helper: returns true when `|r| = 1` exactly.
pub fn is_unit_sign(v: &GRat) -> bool {
    v.as_sign().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grat_field_ops() {
        let a = GRat { re: rat(1, 2), im: rat(3, 4) };
        let b = GRat { re: rat(-2, 3), im: rat(5, 7) };
        let p = a.mul(&b);
        let q = p.div(&b);
        assert_eq!(q, a);
    }

    #[test]
    fn exp_nilpotent_2x2() {
        // exp([[0,1],[0,0]]) = [[1,1],[0,1]]
        let mut e = SMat::zeros(2, 2);
        e.set(0, 1, GRat::one());
        let x = e.exp_nilpotent();
        assert_eq!(x.get(0, 0), GRat::one());
        assert_eq!(x.get(0, 1), GRat::one());
        assert_eq!(x.get(1, 1), GRat::one());
        assert_eq!(x.get(1, 0), GRat::zero());
    }

    #[test]
    fn sparse_matmul_matches_dense() {
        let a = SMat::from_triplets(
            2,
            3,
            &[
                (0, 0, GRat::from_int(2)),
                (0, 2, GRat::i()),
                (1, 1, GRat::from_int(-1)),
            ],
        );
        let b = SMat::from_triplets(
            3,
            2,
            &[
                (0, 1, GRat::from_int(3)),
                (1, 0, GRat::one()),
                (2, 1, GRat::from_int(5)),
            ],
        );
        let c = a.matmul(&b);
        assert_eq!(c.get(0, 1), GRat { re: rat_i(6), im: rat_i(5) });
        assert_eq!(c.get(1, 0), GRat::from_int(-1));
    }

    #[test]
    fn solve_exact_roundtrip() {
        let a = SMat::from_triplets(
            2,
            2,
            &[
                (0, 0, GRat::from_int(2)),
                (0, 1, GRat::i()),
                (1, 0, GRat::one()),
                (1, 1, GRat::from_int(3)),
            ],
        );
        let x = vec![GRat::from_int(4), GRat { re: rat(1, 3), im: rat(1, 2) }];
        let b = a.apply(&x);
        let got = solve_exact(&a, &b).unwrap();
        assert_eq!(got, x);
    }
}
