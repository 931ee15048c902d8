//! Twisted-polynomial spectral functions and their Wronskian algebra.
//!
//! A spectral function is `f(u) = (Π_j x_j^{w_j})^{u/ħ} · P(u)` with
//! half-integer twist weights `w_j` and a complex polynomial `P`. The family
//! is closed under the shift `f^{[n]}(u) = f(u + nħ/2)`, products, and
//! Wronskian determinants. Branches of the fractional powers are fixed once
//! per twist parameter set, so the shift group law holds exactly.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// Complex polynomial, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly(pub Vec<C64>);

impl CPoly {
    pub fn zero() -> Self {
        CPoly(vec![])
    }
    pub fn one() -> Self {
        CPoly(vec![C64::new(1.0, 0.0)])
    }
    pub fn constant(c: C64) -> Self {
        CPoly(vec![c])
    }
    pub fn monic_from_roots(roots: &[C64]) -> Self {
        let mut p = CPoly::one();
        for r in roots {
            p = p.mul(&CPoly(vec![-r, C64::new(1.0, 0.0)]));
        }
        p
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.norm() == 0.0)
    }
    pub fn degree(&self) -> Option<usize> {
        let max = self.max_coeff();
        if max == 0.0 {
            return None;
        }
        let mut d = self.0.len();
        while d > 0 && self.0[d - 1].norm() <= 1e-13 * max {
            d -= 1;
        }
        if d == 0 {
            None
        } else {
            Some(d - 1)
        }
    }
    pub fn max_coeff(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
    pub fn trim(&self, rel: f64) -> CPoly {
        let max = self.max_coeff();
        let mut v = self.0.clone();
        while let Some(last) = v.last() {
            if last.norm() <= rel * max {
                v.pop();
            } else {
                break;
            }
        }
        CPoly(v)
    }
    pub fn add(&self, o: &CPoly) -> CPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![C64::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        CPoly(v)
    }
    pub fn sub(&self, o: &CPoly) -> CPoly {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }
    pub fn scale(&self, s: C64) -> CPoly {
        CPoly(self.0.iter().map(|c| c * s).collect())
    }
    pub fn mul(&self, o: &CPoly) -> CPoly {
        if self.is_zero() || o.is_zero() {
            return CPoly::zero();
        }
        let mut v = vec![C64::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        CPoly(v)
    }
    /// P(u + s)
    pub fn shift_arg(&self, s: C64) -> CPoly {
        let n = self.0.len();
        let mut v = vec![C64::zero(); n];
        // binomial expansion per coefficient
        for (k, c) in self.0.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            // c (u+s)^k
            let mut binom = C64::new(1.0, 0.0); // C(k, j) s^{k-j}
            // j = k down to 0
            let mut pow = C64::new(1.0, 0.0);
            let mut coeffs = vec![C64::zero(); k + 1];
            for j in (0..=k).rev() {
                coeffs[j] = binom * pow;
                // next: j-1
                if j > 0 {
                    binom = binom * (j as f64) / ((k - j + 1) as f64);
                    pow *= s;
                }
            }
            for (j, b) in coeffs.iter().enumerate() {
                v[j] += c * b;
            }
        }
        CPoly(v)
    }
    pub fn eval(&self, u: C64) -> C64 {
        let mut acc = C64::zero();
        for c in self.0.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }
    pub fn derivative(&self) -> CPoly {
        if self.0.len() <= 1 {
            return CPoly::zero();
        }
        CPoly(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * ((i + 1) as f64))
                .collect(),
        )
    }
}

/// Twist data shared by a family of spectral functions. Quarter-power
/// branches are fixed once at construction.
#[derive(Clone, Debug)]
pub struct TwistParams {
    pub xs: Vec<C64>,
    pub hbar: C64,
    /// Principal logarithms of the twist variables.
    pub log_x: Vec<C64>,
}

impl TwistParams {
    pub fn new(xs: Vec<C64>, hbar: C64) -> Result<Arc<Self>> {
        if hbar.norm() == 0.0 {
            return Err(Error::DegenerateTwist("hbar must be nonzero".into()));
        }
        if xs.iter().any(|x| x.norm() == 0.0) {
            return Err(Error::DegenerateTwist("twist variables must be nonzero".into()));
        }
        let log_x = xs.iter().map(|x| C64::new(x.norm().ln(), x.arg())).collect();
        Ok(Arc::new(TwistParams { xs, hbar, log_x }))
    }

    pub fn untwisted(hbar: C64) -> Arc<Self> {
        Arc::new(TwistParams { xs: vec![], hbar, log_x: vec![] })
    }

    /// `Π_j x_j^{wt_j·n/4}` — the prefactor produced by shifting a function
    /// of half-unit twist weights `wt` by `n` half-units.
    pub fn shift_factor(&self, wt: &[i64], n: i64) -> C64 {
        let mut acc = C64::zero();
        for (j, l) in self.log_x.iter().enumerate() {
            acc += l * (wt[j] as f64) * (n as f64) / 4.0;
        }
        acc.exp()
    }

    /// Twist prefactor `(Π_j x_j^{wt_j/2})^{u/ħ}` at a point.
    pub fn twist_eval(&self, wt: &[i64], u: C64) -> C64 {
        let mut acc = C64::zero();
        for (j, l) in self.log_x.iter().enumerate() {
            acc += l * (wt[j] as f64) / 2.0;
        }
        (acc * u / self.hbar).exp()
    }
}

/// A twisted polynomial: twist weights (in half units) plus polynomial part.
#[derive(Clone, Debug)]
pub struct TwistedPoly {
    pub params: Arc<TwistParams>,
    /// Twist weight w_j = wt[j] / 2.
    pub wt: Vec<i64>,
    pub poly: CPoly,
}

impl TwistedPoly {
    pub fn new(params: Arc<TwistParams>, wt: Vec<i64>, poly: CPoly) -> Self {
        assert_eq!(wt.len(), params.xs.len());
        TwistedPoly { params, wt, poly }
    }

    pub fn zero_like(&self) -> TwistedPoly {
        TwistedPoly { params: self.params.clone(), wt: self.wt.clone(), poly: CPoly::zero() }
    }

    pub fn constant(params: Arc<TwistParams>, c: C64) -> Self {
        let n = params.xs.len();
        TwistedPoly { params, wt: vec![0; n], poly: CPoly::constant(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `f^{[n]}`.
    pub fn shift(&self, n: i64) -> TwistedPoly {
        let factor = self.params.shift_factor(&self.wt, n);
        let h2 = self.params.hbar * 0.5 * n as f64;
        TwistedPoly {
            params: self.params.clone(),
            wt: self.wt.clone(),
            poly: self.poly.shift_arg(h2).scale(factor),
        }
    }

    pub fn mul(&self, o: &TwistedPoly) -> TwistedPoly {
        TwistedPoly {
            params: self.params.clone(),
            wt: self.wt.iter().zip(o.wt.iter()).map(|(a, b)| a + b).collect(),
            poly: self.poly.mul(&o.poly),
        }
    }

    pub fn scale(&self, s: C64) -> TwistedPoly {
        TwistedPoly { params: self.params.clone(), wt: self.wt.clone(), poly: self.poly.scale(s) }
    }

    /// Addition requires matching twist sectors (a zero side is absorbed).
    pub fn add(&self, o: &TwistedPoly) -> Result<TwistedPoly> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.wt != o.wt {
            return Err(Error::Schema("adding twisted polynomials of different sectors".into()));
        }
        Ok(TwistedPoly {
            params: self.params.clone(),
            wt: self.wt.clone(),
            poly: self.poly.add(&o.poly),
        })
    }

    pub fn sub(&self, o: &TwistedPoly) -> Result<TwistedPoly> {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    pub fn eval(&self, u: C64) -> C64 {
        self.params.twist_eval(&self.wt, u) * self.poly.eval(u)
    }

    /// Evaluation in the multiplicative (trigonometric) variable
    /// `z = e^{2π u}`: an optional wrapper, nothing more.
    pub fn eval_multiplicative(&self, z: C64) -> C64 {
        let u = C64::new(z.norm().ln(), z.arg()) / (2.0 * std::f64::consts::PI);
        self.eval(u)
    }
}

/// Wronskian `W(f_1, …, f_k) = det f_a^{[k+1-2b]}`, computed by Laplace
/// expansion with subset memoization over the function list.
pub fn wronskian(fs: &[TwistedPoly]) -> Result<TwistedPoly> {
    let k = fs.len();
    if k == 0 {
        return Err(Error::Schema("empty Wronskian".into()));
    }
    if k > 24 {
        return Err(Error::Schema("Wronskian order too large".into()));
    }
    let params = fs[0].params.clone();
    for f in fs {
        if !Arc::ptr_eq(&f.params, &params) && f.params.xs != params.xs {
            return Err(Error::Schema("Wronskian of mixed twist parameter sets".into()));
        }
    }
    // shifted copies: shifts k+1-2b for column b = 1..k
    let shifted: Vec<Vec<TwistedPoly>> = fs
        .iter()
        .map(|f| (1..=k).map(|b| f.shift(k as i64 + 1 - 2 * b as i64)).collect())
        .collect();
    // det over rows=functions, columns=shifts; expand along columns,
    // memoized on the subset of available rows.
    let mut memo: Vec<Option<TwistedPoly>> = vec![None; 1 << k];
    fn det(
        rows: u32,
        shifted: &Vec<Vec<TwistedPoly>>,
        memo: &mut Vec<Option<TwistedPoly>>,
        params: &Arc<TwistParams>,
        k: usize,
    ) -> Result<TwistedPoly> {
        if rows == 0 {
            return Ok(TwistedPoly::constant(params.clone(), C64::new(1.0, 0.0)));
        }
        if let Some(v) = &memo[rows as usize] {
            return Ok(v.clone());
        }
        let col = k - rows.count_ones() as usize; // next column index
        let mut acc: Option<TwistedPoly> = None;
        let mut parity = 0usize;
        for row in 0..k {
            if rows & (1 << row) == 0 {
                continue;
            }
            let minor = det(rows & !(1 << row), shifted, memo, params, k)?;
            let term = shifted[row][col].mul(&minor);
            let term = if parity % 2 == 1 { term.scale(C64::new(-1.0, 0.0)) } else { term };
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
            parity += 1;
        }
        let v = acc.unwrap();
        memo[rows as usize] = Some(v.clone());
        Ok(v)
    }
    let full = (1u32 << k) - 1;
    det(full, &shifted, &mut memo, &params, k)
}

#[derive(Clone, Debug)]
pub struct QQSolveOptions {
    /// Extra degrees of slack added to the minimal degree bound.
    pub max_degree_slack: usize,
    pub tolerance: f64,
}

impl Default for QQSolveOptions {
    fn default() -> Self {
        QQSolveOptions { max_degree_slack: 1, tolerance: 1e-9 }
    }
}

/// Solution of `W(A, X) = B` together with the consistency residual of the
/// overdetermined coefficient system (relative to the size of B).
#[derive(Clone, Debug)]
pub struct QQSolution {
    pub x: TwistedPoly,
    pub residual: f64,
    /// Residual vector of the overdetermined coefficient system, scaled by
    /// the size of B. Smooth in the inputs, suitable as a solver objective.
    pub residual_vec: Vec<C64>,
    /// Whether the constant-gauge ambiguity was present and fixed.
    pub gauge_fixed: bool,
}

/// Solve the first-order equation `W(A, X) = A⁺X⁻ − A⁻X⁺ = B` for X.
///
/// The twist sector of X is `wt_B − wt_A`. With a generic twist mismatch the
/// polynomial solution is unique; in the matched sector the ambiguity
/// `X → X + c·A` is fixed by zeroing the coefficient of `u^{deg A}` in X.
pub fn solve_first_order_qq(
    a: &TwistedPoly,
    b: &TwistedPoly,
    opts: &QQSolveOptions,
) -> Result<QQSolution> {
    if a.is_zero() {
        return Err(Error::SingularLinearSystem("W(A, X) = B with A = 0".into()));
    }
    let params = a.params.clone();
    let wt_x: Vec<i64> = b.wt.iter().zip(a.wt.iter()).map(|(wb, wa)| wb - wa).collect();
    if b.is_zero() {
        return Ok(QQSolution {
            x: TwistedPoly::new(params, wt_x, CPoly::zero()),
            residual: 0.0,
            residual_vec: vec![],
            gauge_fixed: false,
        });
    }
    let deg_a = a.poly.degree().unwrap();
    let deg_b = b.poly.degree().unwrap();
    // α P_A⁺ P_X⁻ − β P_A⁻ P_X⁺ = P_B with constants from the shift factors.
    let alpha = params.shift_factor(&a.wt, 1) * params.shift_factor(&wt_x, -1);
    let beta = params.shift_factor(&a.wt, -1) * params.shift_factor(&wt_x, 1);
    let gauge = (alpha - beta).norm() <= 1e-10 * (alpha.norm() + beta.norm());
    let m_min = deg_b as i64 - deg_a as i64 + i64::from(gauge);
    let m_max = m_min.max(0) as usize + opts.max_degree_slack;
    let h2 = params.hbar * 0.5;
    let a_plus = a.poly.shift_arg(h2);
    let a_minus = a.poly.shift_arg(-h2);

    // unknown columns: coefficients of X, skipping u^{deg A} in gauge mode
    let cols: Vec<usize> = (0..=m_max).filter(|&j| !(gauge && j == deg_a)).collect();
    let n_rows = (deg_a + m_max + 2).max(deg_b + 2);
    let mut mat = crate::linalg::CMat::zeros(n_rows, cols.len());
    for (cidx, &j) in cols.iter().enumerate() {
        // contribution of x_j u^j: α A⁺ (u-h2)^j x_j − β A⁻ (u+h2)^j x_j
        let uj_minus = CPoly(vec![C64::zero(); j + 1]).add(&monomial(j)).shift_arg(-h2);
        let uj_plus = monomial(j).shift_arg(h2);
        let col_poly = a_plus.mul(&uj_minus).scale(alpha).sub(&a_minus.mul(&uj_plus).scale(beta));
        for (i, c) in col_poly.0.iter().enumerate() {
            mat[(i, cidx)] = *c;
        }
    }
    let mut rhs = vec![C64::zero(); n_rows];
    for (i, c) in b.poly.0.iter().enumerate() {
        rhs[i] = *c;
    }
    let (sol, resid) = crate::linalg::lstsq(&mat, &rhs).map_err(|e| {
        Error::SingularLinearSystem(format!("first-order solve degenerate: {e}"))
    })?;
    let scale = b.poly.max_coeff().max(1.0);
    let mut coeffs = vec![C64::zero(); m_max + 1];
    for (cidx, &j) in cols.iter().enumerate() {
        coeffs[j] = sol[cidx];
    }
    // explicit residual vector A·x - b, scaled
    let mut residual_vec = vec![C64::zero(); n_rows];
    for i in 0..n_rows {
        let mut acc = -rhs[i];
        for (cidx, _) in cols.iter().enumerate() {
            acc += mat[(i, cidx)] * sol[cidx];
        }
        residual_vec[i] = acc / scale;
    }
    let x = TwistedPoly::new(params, wt_x, CPoly(coeffs).trim(1e-13));
    Ok(QQSolution { x, residual: resid / scale, residual_vec, gauge_fixed: gauge })
}

fn monomial(j: usize) -> CPoly {
    let mut v = vec![C64::zero(); j + 1];
    v[j] = C64::new(1.0, 0.0);
    CPoly(v)
}

/// Relative residual `|LHS−RHS| / (1 + max(|LHS|, |RHS|))` at a point.
pub fn rel_residual(lhs: C64, rhs: C64) -> f64 {
    (lhs - rhs).norm() / (1.0 + lhs.norm().max(rhs.norm()))
}

/// Deterministic sample points on a circle with a fixed seed.
pub fn sample_points(seed: u64, n: usize, radius: f64) -> Vec<C64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let th = rng.random::<f64>() * std::f64::consts::TAU;
            let r = radius * (0.6 + 0.4 * rng.random::<f64>());
            C64::from_polar(r, th)
        })
        .collect()
}

/// Exact-rational polynomials for the zero-twist mode.
#[derive(Clone, Debug, PartialEq)]
pub struct RPoly(pub Vec<Rat>);

impl RPoly {
    pub fn zero() -> Self {
        RPoly(vec![])
    }
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
    pub fn add(&self, o: &RPoly) -> RPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![Rat::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        RPoly(v)
    }
    pub fn mul(&self, o: &RPoly) -> RPoly {
        if self.is_zero() || o.is_zero() {
            return RPoly::zero();
        }
        let mut v = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RPoly(v)
    }
    pub fn scale(&self, s: &Rat) -> RPoly {
        RPoly(self.0.iter().map(|c| c * s).collect())
    }
    /// P(u + s) for rational s.
    pub fn shift_arg(&self, s: &Rat) -> RPoly {
        let n = self.0.len();
        let mut v = vec![Rat::zero(); n];
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut binom = Rat::from_integer(1.into());
            let mut pow = Rat::from_integer(1.into());
            let mut coeffs = vec![Rat::zero(); k + 1];
            for j in (0..=k).rev() {
                coeffs[j] = &binom * &pow;
                if j > 0 {
                    binom = binom * Rat::from_integer(j.into())
                        / Rat::from_integer((k - j + 1).into());
                    pow *= s;
                }
            }
            for (j, b) in coeffs.iter().enumerate() {
                v[j] += c * b;
            }
        }
        RPoly(v)
    }
    /// Exact shift by n half-units with ħ = 1.
    pub fn shift(&self, n: i64) -> RPoly {
        self.shift_arg(&crate::exact::rat(n, 2))
    }
}

/// Exact Wronskian of rational polynomials (zero twist, ħ = 1).
pub fn wronskian_exact(fs: &[RPoly]) -> RPoly {
    let k = fs.len();
    assert!(k >= 1);
    let shifted: Vec<Vec<RPoly>> = fs
        .iter()
        .map(|f| (1..=k).map(|b| f.shift(k as i64 + 1 - 2 * b as i64)).collect())
        .collect();
    fn det(rows: u32, shifted: &Vec<Vec<RPoly>>, k: usize) -> RPoly {
        if rows == 0 {
            return RPoly(vec![Rat::from_integer(1.into())]);
        }
        let col = k - rows.count_ones() as usize;
        let mut acc = RPoly::zero();
        let mut parity = 0usize;
        for row in 0..k {
            if rows & (1 << row) == 0 {
                continue;
            }
            let minor = det(rows & !(1 << row), shifted, k);
            let mut term = shifted[row][col].mul(&minor);
            if parity % 2 == 1 {
                term = term.scale(&-Rat::from_integer(1.into()));
            }
            acc = acc.add(&term);
            parity += 1;
        }
        acc
    }
    det((1u32 << k) - 1, &shifted, k)
}

/// Serialization form for a twisted polynomial.
#[derive(Serialize, Deserialize)]
pub struct TwistedPolyDto {
    pub twist_weights: Vec<f64>,
    pub coeffs: Vec<[f64; 2]>,
    pub hbar: [f64; 2],
}

impl TwistedPoly {
    pub fn to_dto(&self) -> TwistedPolyDto {
        TwistedPolyDto {
            twist_weights: self.wt.iter().map(|&w| w as f64 / 2.0).collect(),
            coeffs: self.poly.0.iter().map(|c| [c.re, c.im]).collect(),
            hbar: [self.params.hbar.re, self.params.hbar.im],
        }
    }

    pub fn from_dto(dto: &TwistedPolyDto, params: Arc<TwistParams>) -> Result<Self> {
        let hbar = C64::new(dto.hbar[0], dto.hbar[1]);
        if (hbar - params.hbar).norm() > 1e-12 {
            return Err(Error::Schema("hbar mismatch in twisted polynomial".into()));
        }
        let wt: Vec<i64> = dto
            .twist_weights
            .iter()
            .map(|&w| {
                let k = (2.0 * w).round();
                if (2.0 * w - k).abs() > 1e-9 {
                    Err(Error::Schema("twist weights must be half-integers".into()))
                } else {
                    Ok(k as i64)
                }
            })
            .collect::<Result<_>>()?;
        if wt.len() != params.xs.len() {
            return Err(Error::Schema("twist weight arity mismatch".into()));
        }
        Ok(TwistedPoly::new(
            params,
            wt,
            CPoly(dto.coeffs.iter().map(|c| C64::new(c[0], c[1])).collect()),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn untwisted() -> Arc<TwistParams> {
        TwistParams::new(vec![], c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn shift_of_u_squared() {
        let p = untwisted();
        let f = TwistedPoly::new(p, vec![], CPoly(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        let g = f.shift(2); // (u+ħ)²
        assert!((g.poly.0[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((g.poly.0[1] - c(2.0, 0.0)).norm() < 1e-14);
        assert!((g.poly.0[2] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn twist_shift_multiplies_by_x() {
        // (x^{u/ħ})^{[2]} = x · x^{u/ħ}
        let x = c(0.3, 1.1);
        let params = TwistParams::new(vec![x], c(1.0, 0.0)).unwrap();
        let f = TwistedPoly::new(params.clone(), vec![2], CPoly::one()); // weight 1
        let g = f.shift(2);
        let u = c(0.17, -0.4);
        assert!((g.eval(u) - x * f.eval(u)).norm() < 1e-12);
        // group law
        let h = f.shift(2).shift(-2);
        assert!((h.eval(u) - f.eval(u)).norm() < 1e-12);
        let k = f.shift(1).shift(1);
        assert!((k.eval(u) - g.eval(u)).norm() < 1e-12);
    }

    #[test]
    fn wronskian_small_cases() {
        let p = untwisted();
        let u = TwistedPoly::new(p.clone(), vec![], CPoly(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        let u2 = TwistedPoly::new(p.clone(), vec![], CPoly(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        // W(f) = f
        let w1 = wronskian(std::slice::from_ref(&u)).unwrap();
        assert!((w1.eval(c(0.3, 0.2)) - u.eval(c(0.3, 0.2))).norm() < 1e-13);
        // W(f, f) = 0
        let wff = wronskian(&[u.clone(), u.clone()]).unwrap();
        assert!(wff.poly.trim(1e-12).is_zero());
        // W(u, u²) = -ħ(u² - ħ²/4)
        let w = wronskian(&[u.clone(), u2.clone()]).unwrap();
        let probe = c(0.7, -0.3);
        let expect = -(probe * probe - c(0.25, 0.0));
        assert!((w.eval(probe) - expect).norm() < 1e-12);
        // antisymmetry
        let wr = wronskian(&[u2, u]).unwrap();
        assert!((wr.eval(probe) + expect).norm() < 1e-12);
    }

    #[test]
    fn wronskian_shift_covariance() {
        let params = TwistParams::new(vec![c(0.4, 0.7), c(1.3, -0.2)], c(1.0, 0.0)).unwrap();
        let f1 = TwistedPoly::new(params.clone(), vec![2, 0], CPoly(vec![c(1.0, 0.5), c(0.3, 0.0), c(0.0, 1.0)]));
        let f2 = TwistedPoly::new(params.clone(), vec![0, 2], CPoly(vec![c(-0.2, 0.1), c(1.0, 0.0)]));
        let f3 = TwistedPoly::new(params.clone(), vec![-2, -2], CPoly(vec![c(0.9, 0.0), c(0.0, -0.4), c(0.2, 0.2)]));
        let w = wronskian(&[f1.clone(), f2.clone(), f3.clone()]).unwrap();
        let ws = wronskian(&[f1.shift(3), f2.shift(3), f3.shift(3)]).unwrap();
        let u = c(0.21, 0.13);
        assert!(rel_residual(ws.eval(u), w.shift(3).eval(u)) < 1e-11);
    }

    #[test]
    fn qq_solve_constant_cases() {
        let p = untwisted();
        // A = u, B = 1 -> X = 1/ħ with the gauge coefficient zeroed
        let a = TwistedPoly::new(p.clone(), vec![], CPoly(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        let b = TwistedPoly::constant(p.clone(), c(1.0, 0.0));
        let sol = solve_first_order_qq(&a, &b, &QQSolveOptions::default()).unwrap();
        assert!(sol.residual < 1e-12);
        assert!(sol.gauge_fixed);
        assert!((sol.x.poly.eval(c(0.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-12);
        assert!(sol.x.poly.degree() == Some(0));
        // B = 0 -> X = 0
        let sol0 =
            solve_first_order_qq(&a, &b.scale(C64::zero()), &QQSolveOptions::default()).unwrap();
        assert!(sol0.x.is_zero());
    }

    #[test]
    fn qq_solve_opposite_twists() {
        // A = x^{u/ħ}, B = 1 -> X = x^{-u/ħ} / (x - x^{-1})
        let x = c(0.8, 0.6); // unit modulus
        let params = TwistParams::new(vec![x], c(1.0, 0.0)).unwrap();
        let a = TwistedPoly::new(params.clone(), vec![2], CPoly::one());
        let b = TwistedPoly::constant(params.clone(), c(1.0, 0.0));
        let sol = solve_first_order_qq(&a, &b, &QQSolveOptions::default()).unwrap();
        assert!(sol.residual < 1e-12);
        assert!(!sol.gauge_fixed);
        let expect = 1.0 / (x - 1.0 / x);
        assert!((sol.x.poly.0[0] - expect).norm() < 1e-12);
        assert_eq!(sol.x.wt, vec![-2]);
        // verify W(A, X) = B at points
        let w = wronskian(&[a.clone(), sol.x.clone()]).unwrap();
        for u in sample_points(3, 6, 1.0) {
            assert!(rel_residual(w.eval(u), b.eval(u)) < 1e-12);
        }
    }

    #[test]
    fn qq_solve_generic_roundtrip() {
        // build X first, form B = W(A, X), and recover X
        let params = TwistParams::new(vec![c(0.36, 0.93), c(-0.6, 0.8)], c(1.0, 0.0)).unwrap();
        let a = TwistedPoly::new(
            params.clone(),
            vec![2, -2],
            CPoly(vec![c(0.5, 0.2), c(-1.0, 0.7), c(1.0, 0.0)]),
        );
        let x_true = TwistedPoly::new(
            params.clone(),
            vec![0, 2],
            CPoly(vec![c(0.1, -0.3), c(0.8, 0.1)]),
        );
        let b = wronskian(&[a.clone(), x_true.clone()]).unwrap();
        let sol = solve_first_order_qq(&a, &b, &QQSolveOptions::default()).unwrap();
        assert!(sol.residual < 1e-10, "residual {}", sol.residual);
        for u in sample_points(5, 8, 1.0) {
            assert!(rel_residual(sol.x.eval(u), x_true.eval(u)) < 1e-9);
        }
    }

    #[test]
    fn exact_wronskian_matches_float() {
        use crate::exact::rat_i;
        let f1 = RPoly(vec![rat_i(1), rat_i(2), rat_i(1)]);
        let f2 = RPoly(vec![rat_i(-3), rat_i(0), rat_i(0), rat_i(2)]);
        let w = wronskian_exact(&[f1, f2]);
        let p = untwisted();
        let g1 = TwistedPoly::new(p.clone(), vec![], CPoly(vec![c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]));
        let g2 = TwistedPoly::new(p.clone(), vec![], CPoly(vec![c(-3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]));
        let wf = wronskian(&[g1, g2]).unwrap();
        for (i, cf) in wf.poly.0.iter().enumerate() {
            let exact = w.0.get(i).map(crate::exact::rat_to_f64).unwrap_or(0.0);
            assert!((cf.re - exact).abs() < 1e-12);
            assert!(cf.im.abs() < 1e-12);
        }
    }
}
