//! Laurent-polynomial arithmetic in the half-unit shift operator, and the
//! exact solver that turns a relation's dressing imbalance into a finite
//! product of source factors.
//!
//! Writing `D` for the shift by half a unit, every Q-function carries a formal
//! dressing factor per node satisfying `Σ_b [C_ab]_D log σ_b = -Σ_ℓ [m_a^ℓ]_D
//! log φ(u-θ_ℓ)`. A bilinear relation between Q-functions holds for the
//! dressed functions; its polynomial (q-form) version then picks up a finite
//! product of `φ`-shifts whose exponents are obtained by solving the deformed
//! Cartan system below. The solver checks that the result is an honest
//! Laurent polynomial with integer coefficients, which is what makes the
//! source finite.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{rat_i, Rat};

/// Laurent polynomial over the rationals: `Σ c[k] · D^(lo+k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LPoly {
    pub lo: i64,
    pub c: Vec<Rat>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly { lo: 0, c: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// `n · D^k`
    pub fn monomial(n: i64, k: i64) -> Self {
        LPoly { lo: k, c: vec![rat_i(n)] }
    }

    /// The deformed number `[n]_D = D^{n-1} + D^{n-3} + … + D^{1-n}`,
    /// with `[0]_D = 0` and `[-n]_D = -[n]_D`.
    pub fn deformed_number(n: i64) -> Self {
        if n == 0 {
            return LPoly::zero();
        }
        let m = n.abs();
        let sign = if n > 0 { rat_i(1) } else { rat_i(-1) };
        let mut c = vec![Rat::zero(); (2 * m - 1) as usize];
        for k in 0..m {
            c[(2 * k) as usize] = sign.clone();
        }
        LPoly { lo: 1 - m, c }
    }

    fn normalize(mut self) -> Self {
        while let Some(last) = self.c.last() {
            if last.is_zero() {
                self.c.pop();
            } else {
                break;
            }
        }
        let lead_zeros = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead_zeros > 0 {
            self.c.drain(0..lead_zeros);
            self.lo += lead_zeros as i64;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn add(&self, o: &LPoly) -> LPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = (self.lo + self.c.len() as i64).max(o.lo + o.c.len() as i64);
        let mut c = vec![Rat::zero(); (hi - lo) as usize];
        for (k, v) in self.c.iter().enumerate() {
            c[(self.lo - lo) as usize + k] += v;
        }
        for (k, v) in o.c.iter().enumerate() {
            c[(o.lo - lo) as usize + k] += v;
        }
        LPoly { lo, c }.normalize()
    }

    pub fn neg(&self) -> LPoly {
        LPoly { lo: self.lo, c: self.c.iter().map(|x| -x.clone()).collect() }
    }

    pub fn sub(&self, o: &LPoly) -> LPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        LPoly { lo: self.lo + o.lo, c }.normalize()
    }

    pub fn scale(&self, s: &Rat) -> LPoly {
        LPoly { lo: self.lo, c: self.c.iter().map(|x| x * s).collect() }.normalize()
    }

    /// Terms as `(power, coefficient)`.
    pub fn terms(&self) -> Vec<(i64, Rat)> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (self.lo + k as i64, v.clone()))
            .collect()
    }

    /// Terms with integer coefficients, or an error when any is fractional.
    pub fn integer_terms(&self) -> Result<Vec<(i64, i64)>> {
        let mut out = Vec::new();
        for (k, v) in self.terms() {
            if !v.is_integer() {
                return Err(Error::GenericityFailure(format!(
                    "source exponent {v} at shift {k} is not an integer"
                )));
            }
            let n = v.to_integer();
            let n: i64 = n.to_string().parse().map_err(|_| {
                Error::GenericityFailure("source exponent overflows i64".into())
            })?;
            out.push((k, n));
        }
        Ok(out)
    }
}

/// Ordinary polynomial over ℚ in ascending order; internal helper for the
/// fraction-field Gaussian elimination.
#[derive(Clone, Debug, PartialEq)]
struct QPoly(Vec<Rat>);

impl QPoly {
    fn zero() -> Self {
        QPoly(vec![])
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
    fn one() -> Self {
        QPoly(vec![Rat::one()])
    }
    fn norm(mut self) -> Self {
        while let Some(l) = self.0.last() {
            if l.is_zero() {
                self.0.pop();
            } else {
                break;
            }
        }
        self
    }
    fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }
    fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![Rat::zero(); n];
        for (i, v) in self.0.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in o.0.iter().enumerate() {
            c[i] += v;
        }
        QPoly(c).norm()
    }
    fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&-Rat::one()))
    }
    fn scale(&self, s: &Rat) -> QPoly {
        QPoly(self.0.iter().map(|x| x * s).collect()).norm()
    }
    fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly(c).norm()
    }
    fn divrem(&self, o: &QPoly) -> (QPoly, QPoly) {
        assert!(!o.is_zero());
        let mut rem = self.clone().norm();
        let mut quo = vec![Rat::zero(); (self.deg() - o.deg() + 1).max(0) as usize];
        while !rem.is_zero() && rem.deg() >= o.deg() {
            let k = (rem.deg() - o.deg()) as usize;
            let f = rem.0.last().unwrap() / o.0.last().unwrap();
            quo[k] = f.clone();
            for (i, b) in o.0.iter().enumerate() {
                let t = b * &f;
                rem.0[i + k] -= t;
            }
            rem = rem.norm();
        }
        (QPoly(quo).norm(), rem)
    }
    fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.clone().norm();
        let mut b = o.clone().norm();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.0.last().unwrap().clone();
        a.scale(&(Rat::one() / lead))
    }
}

/// Fraction over ℚ[D].
#[derive(Clone, Debug)]
struct QFrac {
    num: QPoly,
    den: QPoly,
}

impl QFrac {
    fn from_poly(p: QPoly) -> Self {
        QFrac { num: p, den: QPoly::one() }
    }
    fn zero() -> Self {
        QFrac::from_poly(QPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return self;
        }
        let g = self.num.gcd(&self.den);
        if g.deg() > 0 {
            self.num = self.num.divrem(&g).0;
            self.den = self.den.divrem(&g).0;
        }
        let lead = self.den.0.last().unwrap().clone();
        if !lead.is_one() {
            let inv = Rat::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }
    fn sub(&self, o: &QFrac) -> QFrac {
        QFrac {
            num: self.num.mul(&o.den).sub(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .reduce()
    }
    fn mul(&self, o: &QFrac) -> QFrac {
        QFrac { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.reduce()
    }
    fn div(&self, o: &QFrac) -> QFrac {
        assert!(!o.is_zero());
        QFrac { num: self.num.mul(&o.den), den: self.den.mul(&o.num) }.reduce()
    }
}

/// Solve `Σ_b [C_ab]_D · w_b = v_a` for `w` over Laurent polynomials, given
/// the Cartan matrix. Errors when the solution fails to be Laurent-polynomial,
/// which signals a relation without a finite source product.
pub fn solve_deformed_cartan(cartan: &[Vec<i64>], v: &[LPoly]) -> Result<Vec<LPoly>> {
    let r = cartan.len();
    assert_eq!(v.len(), r);
    // Work with D * [C_ab]_D which is polynomial: diag D^2+1, off-diag C_ab·D.
    // Then (D·C(D)) w = D·v, so scale v by one power of D.
    let mut mat: Vec<Vec<QFrac>> = vec![vec![QFrac::zero(); r]; r];
    for a in 0..r {
        for b in 0..r {
            if a == b {
                mat[a][b] = QFrac::from_poly(QPoly(vec![Rat::one(), Rat::zero(), Rat::one()]));
            } else if cartan[a][b] != 0 {
                mat[a][b] =
                    QFrac::from_poly(QPoly(vec![Rat::zero(), rat_i(cartan[a][b])]));
            }
        }
    }
    // Clear negative powers in v: common shift so v' = D^(1+s) v is polynomial.
    let min_lo = v.iter().filter(|p| !p.is_zero()).map(|p| p.lo).min().unwrap_or(0);
    let shift = (1 - min_lo).max(1);
    let mut rhs: Vec<QFrac> = v
        .iter()
        .map(|p| {
            let mut c = vec![Rat::zero(); (p.lo + shift) as usize + p.c.len()];
            for (k, val) in p.c.iter().enumerate() {
                c[(p.lo + shift) as usize + k] = val.clone();
            }
            QFrac::from_poly(QPoly(c).norm())
        })
        .collect();
    // Gaussian elimination over the fraction field.
    let mut m = mat;
    for col in 0..r {
        let piv = (col..r)
            .find(|&i| !m[i][col].is_zero())
            .ok_or_else(|| Error::SingularLinearSystem("deformed Cartan singular".into()))?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col].clone();
        for i in 0..r {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].div(&d);
            for j in col..r {
                let t = f.mul(&m[col][j]);
                m[i][j] = m[i][j].sub(&t);
            }
            let t = f.mul(&rhs[col]);
            rhs[i] = rhs[i].sub(&t);
        }
    }
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let sol = rhs[i].div(&m[i][i]).reduce();
        // Laurent-ness: denominator must be a pure power of D.
        let den = &sol.den;
        let nz = den.0.iter().take_while(|x| x.is_zero()).count();
        if den.0.len() != nz + 1 {
            return Err(Error::GenericityFailure(
                "relation source is not a finite shift product".into(),
            ));
        }
        let dpow = nz as i64;
        let lo = -dpow - shift + 1;
        let lead = den.0.last().unwrap().clone();
        let c: Vec<Rat> = sol.num.0.iter().map(|x| x / &lead).collect();
        out.push(LPoly { lo, c }.normalize());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deformed_numbers() {
        let two = LPoly::deformed_number(2);
        assert_eq!(two.terms(), vec![(-1, Rat::one()), (1, Rat::one())]);
        let neg = LPoly::deformed_number(-3);
        assert_eq!(
            neg.terms(),
            vec![(-2, -Rat::one()), (0, -Rat::one()), (2, -Rat::one())]
        );
    }

    #[test]
    fn cartan_row_recovers_unit_source() {
        // v = row a of [C]_D should give w = e_a.
        let cartan = vec![vec![2, -1], vec![-1, 2]];
        let v = vec![LPoly::deformed_number(2), LPoly::monomial(-1, 0)];
        let w = solve_deformed_cartan(&cartan, &v).unwrap();
        assert_eq!(w[0].terms(), vec![(0, Rat::one())]);
        assert!(w[1].is_zero());
    }

    #[test]
    fn sl2_quantisation_exponent() {
        // <Q^{[h/2]}, Q^{[-h/2]}> for sl2 (h=2): imbalance v = D + D^{-1} at
        // the single node, so w = [2]_D^{-1} (D+D^{-1}) = 1.
        let cartan = vec![vec![2]];
        let v = vec![LPoly::deformed_number(2)];
        let w = solve_deformed_cartan(&cartan, &v).unwrap();
        assert_eq!(w[0].terms(), vec![(0, Rat::one())]);
    }

    #[test]
    fn a2_wedge_imbalance() {
        // Node-1 pair relation in A2: v = ([2]_D, -1).
        let cartan = vec![vec![2, -1], vec![-1, 2]];
        let v = vec![LPoly::deformed_number(2), LPoly::monomial(-1, 0)];
        let w = solve_deformed_cartan(&cartan, &v).unwrap();
        // w = e_1 exactly: J_1 appears with unit exponent, no node-2 source.
        assert_eq!(w[0].terms(), vec![(0, Rat::one())]);
        assert!(w[1].is_zero());
    }
}
