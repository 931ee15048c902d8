//! Tensor products of representations, quadratic-Casimir projectors onto
//! isotypic components, and invariant pairings. The machinery is generic
//! over the scalar so the same projectors act on numeric vectors and on
//! vectors of twisted polynomials.

use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::algebra::{CartanData, Weight};
use crate::error::{Error, Result};
use crate::exact::{rat_to_f64, Rat, SMat};
use crate::reps::{root_vectors, MatrixRep};

/// Scalars a projector can act on.
pub trait Scalar: Clone {
    fn add(&self, o: &Self) -> Result<Self>;
    fn scale(&self, c: C64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Scalar for C64 {
    fn add(&self, o: &Self) -> Result<Self> {
        Ok(self + o)
    }
    fn scale(&self, c: C64) -> Self {
        self * c
    }
    fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }
}

impl Scalar for crate::spectral::TwistedPoly {
    fn add(&self, o: &Self) -> Result<Self> {
        crate::spectral::TwistedPoly::add(self, o)
    }
    fn scale(&self, c: C64) -> Self {
        crate::spectral::TwistedPoly::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        crate::spectral::TwistedPoly::is_zero(self)
    }
}

/// Sparse complex matrix (row-major adjacency), converted once from exact.
#[derive(Clone, Debug)]
pub struct SpMatC {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(usize, C64)>>,
}

impl SpMatC {
    pub fn from_exact(m: &SMat) -> Self {
        SpMatC {
            rows: m.rows,
            cols: m.cols,
            entries: m
                .entries
                .iter()
                .map(|row| row.iter().map(|(j, v)| (*j, v.to_c64())).collect())
                .collect(),
        }
    }
}

/// Sparse vector over an arbitrary scalar: None = zero slot.
pub type SVec<T> = Vec<Option<T>>;

pub fn svec_zero<T: Scalar>(n: usize) -> SVec<T> {
    vec![None; n]
}

pub fn svec_add_into<T: Scalar>(acc: &mut SVec<T>, other: &SVec<T>, c: C64) -> Result<()> {
    for (slot, v) in acc.iter_mut().zip(other.iter()) {
        if let Some(x) = v {
            let scaled = x.scale(c);
            match slot {
                None => *slot = Some(scaled),
                Some(cur) => *slot = Some(cur.add(&scaled)?),
            }
        }
    }
    Ok(())
}

/// A tensor product of representations with cached complex generators and
/// root vectors, ready for Casimir applications.
pub struct ProductSpace {
    pub data: Arc<CartanData>,
    pub factors: Vec<Arc<MatrixRep>>,
    pub dims: Vec<usize>,
    pub dim: usize,
    /// Per factor: e_a, f_a as complex sparse matrices.
    e: Vec<Vec<SpMatC>>,
    f: Vec<Vec<SpMatC>>,
    /// Per factor: root vectors for every positive root.
    epos: Vec<Vec<SpMatC>>,
    fpos: Vec<Vec<SpMatC>>,
    /// Weight of every product basis vector.
    pub weights: Vec<Weight>,
}

impl ProductSpace {
    pub fn new(data: Arc<CartanData>, factors: Vec<Arc<MatrixRep>>) -> Result<Self> {
        let dims: Vec<usize> = factors.iter().map(|r| r.dim).collect();
        let dim: usize = dims.iter().product();
        let mut e = Vec::new();
        let mut f = Vec::new();
        let mut epos = Vec::new();
        let mut fpos = Vec::new();
        for rep in &factors {
            e.push(rep.e.iter().map(SpMatC::from_exact).collect());
            f.push(rep.f.iter().map(SpMatC::from_exact).collect());
            let (ep, fp) = root_vectors(rep, &data)?;
            epos.push(ep.iter().map(SpMatC::from_exact).collect());
            fpos.push(fp.iter().map(SpMatC::from_exact).collect());
        }
        let mut weights = Vec::with_capacity(dim);
        for idx in 0..dim {
            let multi = unflatten(idx, &dims);
            let mut w = vec![0i64; data.rank()];
            for (k, &i) in multi.iter().enumerate() {
                for a in 0..data.rank() {
                    w[a] += factors[k].basis_weights[i][a];
                }
            }
            weights.push(w);
        }
        Ok(ProductSpace { data, factors, dims, dim, e, f, epos, fpos, weights })
    }

    pub fn flatten(&self, multi: &[usize]) -> usize {
        let mut idx = 0usize;
        for (k, &i) in multi.iter().enumerate() {
            idx = idx * self.dims[k] + i;
        }
        idx
    }

    /// Apply a one-factor operator by the Leibniz rule across all factors.
    fn apply_leibniz<T: Scalar>(&self, mats: &[&SpMatC], v: &SVec<T>) -> Result<SVec<T>> {
        let mut out: SVec<T> = svec_zero(self.dim);
        for (slot, mat) in mats.iter().enumerate() {
            // iterate source indices with a nonzero value
            for (src, val) in v.iter().enumerate() {
                let Some(val) = val else { continue };
                let multi = unflatten(src, &self.dims);
                for (dst_local, c) in &mat.entries_to(multi[slot]) {
                    let mut m2 = multi.clone();
                    m2[slot] = *dst_local;
                    let dst = self.flatten(&m2);
                    let scaled = val.scale(*c);
                    match &mut out[dst] {
                        None => out[dst] = Some(scaled),
                        Some(cur) => out[dst] = Some(cur.add(&scaled)?),
                    }
                }
            }
        }
        Ok(out)
    }

    fn op_per_factor<'a>(set: &'a [Vec<SpMatC>], which: usize) -> Vec<&'a SpMatC> {
        set.iter().map(|per| &per[which]).collect()
    }

    /// Quadratic Casimir action: Σ_{α>0}(E_α F_α + F_α E_α) + Σ (C^{-1})_{ab} h_a h_b.
    pub fn apply_casimir<T: Scalar>(&self, v: &SVec<T>) -> Result<SVec<T>> {
        let mut out: SVec<T> = svec_zero(self.dim);
        let n_roots = self.data.positive_roots.len();
        for ri in 0..n_roots {
            let em = Self::op_per_factor(&self.epos, ri);
            let fm = Self::op_per_factor(&self.fpos, ri);
            let fv = self.apply_leibniz(&fm, v)?;
            let efv = self.apply_leibniz(&em, &fv)?;
            svec_add_into(&mut out, &efv, C64::new(1.0, 0.0))?;
            let ev = self.apply_leibniz(&em, v)?;
            let fev = self.apply_leibniz(&fm, &ev)?;
            svec_add_into(&mut out, &fev, C64::new(1.0, 0.0))?;
        }
        // Cartan part acts diagonally through the stored weights.
        let r = self.data.rank();
        for (i, val) in v.iter().enumerate() {
            let Some(val) = val else { continue };
            let w = &self.weights[i];
            let mut coef = 0.0f64;
            for a in 0..r {
                for b in 0..r {
                    coef += rat_to_f64(&self.data.cartan_inv[a][b]) * (w[a] * w[b]) as f64;
                }
            }
            let scaled = val.scale(C64::new(coef, 0.0));
            match &mut out[i] {
                None => out[i] = Some(scaled),
                Some(cur) => out[i] = Some(cur.add(&scaled)?),
            }
        }
        Ok(out)
    }

    /// Apply a raising generator e_a across the product.
    pub fn apply_e<T: Scalar>(&self, a: usize, v: &SVec<T>) -> Result<SVec<T>> {
        self.apply_leibniz(&Self::op_per_factor(&self.e, a), v)
    }

    pub fn apply_f<T: Scalar>(&self, a: usize, v: &SVec<T>) -> Result<SVec<T>> {
        self.apply_leibniz(&Self::op_per_factor(&self.f, a), v)
    }

    /// Decompose the product into irreducibles by weight-multiplicity
    /// subtraction. Returns (highest weight, multiplicity) pairs.
    pub fn decompose(&self) -> Vec<(Weight, u64)> {
        use std::collections::HashMap;
        let mut counts: HashMap<Weight, i64> = HashMap::new();
        for w in &self.weights {
            *counts.entry(w.clone()).or_insert(0) += 1;
        }
        let mut out: Vec<(Weight, u64)> = Vec::new();
        loop {
            // maximal dominant weight with positive count
            let mut best: Option<(Weight, Rat)> = None;
            for (w, &c) in counts.iter() {
                if c <= 0 || w.iter().any(|&x| x < 0) {
                    continue;
                }
                let height = self.data.weight_ip(w, &self.data.weyl_vector);
                match &best {
                    None => best = Some((w.clone(), height)),
                    Some((_, h)) if height > *h => best = Some((w.clone(), height)),
                    _ => {}
                }
            }
            let Some((top, _)) = best else { break };
            let mult = counts[&top] as u64;
            let ws = crate::algebra::weight_system_of(&self.data, &top);
            for (dw, m, _) in &ws.dominant_entries {
                for orbit_w in self.data.weyl_orbit(dw) {
                    *counts.entry(orbit_w).or_insert(0) -= (mult * m) as i64;
                }
            }
            out.push((top, mult));
        }
        out
    }

    /// Casimir eigenvalue (λ, λ + 2ρ) as f64.
    pub fn casimir_eigenvalue(&self, w: &Weight) -> f64 {
        let two_rho: Weight = self.data.weyl_vector.iter().map(|x| 2 * x).collect();
        let shifted: Weight = w.iter().zip(two_rho.iter()).map(|(a, b)| a + b).collect();
        rat_to_f64(&self.data.weight_ip(w, &shifted))
    }

    /// Project onto the isotypic component of highest weight ω using the
    /// polynomial in the Casimir over the distinct eigenvalues present.
    /// Requires the eigenvalue of ω to be isolated in this product.
    pub fn project_isotypic<T: Scalar>(&self, v: &SVec<T>, omega: &Weight) -> Result<SVec<T>> {
        let parts = self.decompose();
        if !parts.iter().any(|(w, _)| w == omega) {
            return Err(Error::Representation(
                "target weight does not occur in the decomposition".into(),
            ));
        }
        let target = self.casimir_eigenvalue(omega);
        let mut distinct: Vec<f64> = Vec::new();
        for (w, _) in &parts {
            let c = self.casimir_eigenvalue(w);
            if !distinct.iter().any(|&d| (d - c).abs() < 1e-9) {
                distinct.push(c);
            }
        }
        let colliding = parts
            .iter()
            .filter(|(w, _)| (self.casimir_eigenvalue(w) - target).abs() < 1e-9 && w != omega)
            .count();
        if colliding > 0 {
            return self.project_isotypic_lowering(v, omega, &distinct, target);
        }
        let mut cur = v.clone();
        for &c in &distinct {
            if (c - target).abs() < 1e-9 {
                continue;
            }
            let cv = self.apply_casimir(&cur)?;
            // (C2 - c)/(target - c)
            let mut next: SVec<T> = svec_zero(self.dim);
            svec_add_into(&mut next, &cv, C64::new(1.0 / (target - c), 0.0))?;
            svec_add_into(&mut next, &cur, C64::new(-c / (target - c), 0.0))?;
            cur = next;
        }
        Ok(cur)
    }

    /// Fallback for colliding Casimir eigenvalues: apply the polynomial
    /// projector over the non-colliding eigenvalues, then split the
    /// collision class with bases built by lowering from highest-weight
    /// vectors. Only multiplicity-one targets are supported.
    fn project_isotypic_lowering<T: Scalar>(
        &self,
        v: &SVec<T>,
        omega: &Weight,
        distinct: &[f64],
        target: f64,
    ) -> Result<SVec<T>> {
        let parts = self.decompose();
        if parts.iter().any(|(w, m)| w == omega && *m > 1) {
            return Err(Error::Representation(
                "isotypic projection with multiplicity > 1 unsupported".into(),
            ));
        }
        // partial projector over eigenvalues away from the collision class
        let mut cur = v.clone();
        for &c in distinct {
            if (c - target).abs() < 1e-9 {
                continue;
            }
            let cv = self.apply_casimir(&cur)?;
            let mut next: SVec<T> = svec_zero(self.dim);
            svec_add_into(&mut next, &cv, C64::new(1.0 / (target - c), 0.0))?;
            svec_add_into(&mut next, &cur, C64::new(-c / (target - c), 0.0))?;
            cur = next;
        }
        // numeric bases for every class member isotypic
        let class: Vec<&Weight> = parts
            .iter()
            .filter(|(w, _)| (self.casimir_eigenvalue(w) - target).abs() < 1e-9)
            .map(|(w, _)| w)
            .collect();
        let mut basis: Vec<Vec<C64>> = Vec::new();
        let mut target_cols: Vec<usize> = Vec::new();
        for w in class {
            let vecs = self.isotypic_basis_numeric(w)?;
            for b in vecs {
                if w == omega {
                    target_cols.push(basis.len());
                }
                basis.push(b);
            }
        }
        // Expand cur over the basis via least squares per scalar slot.
        // Only sensible for numeric scalars; for polynomial scalars we
        // require exactness slot-by-slot, so solve with each coefficient.
        let m = basis.len();
        let mut mat = crate::linalg::CMat::zeros(self.dim, m);
        for (j, b) in basis.iter().enumerate() {
            for i in 0..self.dim {
                mat[(i, j)] = b[i];
            }
        }
        // Build the projected vector: Σ_{j in target_cols} coeff_j · basis_j.
        // Coefficients are scalars of type T obtained by solving the linear
        // system column-wise using the pseudo-inverse applied through scalar
        // linear combinations: c_j = Σ_i P_{ji} v_i with P = (A*A)^{-1}A*.
        let at_a = {
            let mut g = crate::linalg::CMat::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..self.dim {
                        acc += basis[i][k].conj() * basis[j][k];
                    }
                    g[(i, j)] = acc;
                }
            }
            g
        };
        let mut out: SVec<T> = svec_zero(self.dim);
        for &j in &target_cols {
            // c_j = Σ_i pinv_{j,i} v_i with pinv = (A*A)^{-1} A*
            let mut rhs = vec![C64::new(0.0, 0.0); m];
            rhs[j] = C64::new(1.0, 0.0);
            let row = crate::linalg::solve(&at_a, &rhs)?; // (A*A)^{-1} e_j
            // pinv_j = row* · A* => coefficient functional on v
            let mut coeff: Option<T> = None;
            for i in 0..self.dim {
                let Some(val) = &cur[i] else { continue };
                let mut w = C64::new(0.0, 0.0);
                for (k, rk) in row.iter().enumerate() {
                    w += rk.conj() * basis[k][i].conj();
                }
                let t = val.scale(w.conj());
                coeff = Some(match coeff {
                    None => t,
                    Some(c) => c.add(&t)?,
                });
            }
            if let Some(cj) = coeff {
                for i in 0..self.dim {
                    if basis[j][i].norm() > 0.0 {
                        let t = cj.scale(basis[j][i]);
                        match &mut out[i] {
                            None => out[i] = Some(t),
                            Some(cur) => *cur = cur.add(&t)?,
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Numeric basis of the isotypic component of a multiplicity-one
    /// constituent: highest-weight vector found in the weight subspace, then
    /// closed under lowering.
    fn isotypic_basis_numeric(&self, omega: &Weight) -> Result<Vec<Vec<C64>>> {
        // weight-subspace indices
        let idxs: Vec<usize> =
            (0..self.dim).filter(|&i| &self.weights[i] == omega).collect();
        if idxs.is_empty() {
            return Err(Error::Representation("empty weight subspace".into()));
        }
        // solve e_a v = 0 for all a on the subspace; rows indexed by
        // (generator, target basis index)
        let r = self.data.rank();
        let mut sys: std::collections::HashMap<(usize, usize), Vec<C64>> =
            std::collections::HashMap::new();
        for a in 0..r {
            for (col, &i) in idxs.iter().enumerate() {
                let mut unit: SVec<C64> = svec_zero(self.dim);
                unit[i] = Some(C64::new(1.0, 0.0));
                let im = self.apply_e(a, &unit)?;
                for (k, val) in im.iter().enumerate() {
                    if let Some(v) = val {
                        if v.norm() > 0.0 {
                            sys.entry((a, k))
                                .or_insert_with(|| vec![C64::new(0.0, 0.0); idxs.len()])
                                [col] = *v;
                        }
                    }
                }
            }
        }
        let sys_rows: Vec<Vec<C64>> = sys.into_values().collect();
        let hw = null_space(&sys_rows, idxs.len());
        if hw.len() != 1 {
            return Err(Error::Representation(format!(
                "expected a single highest-weight vector, found {}",
                hw.len()
            )));
        }
        let mut top: Vec<C64> = vec![C64::new(0.0, 0.0); self.dim];
        for (col, &i) in idxs.iter().enumerate() {
            top[i] = hw[0][col];
        }
        // lowering closure with Gram-Schmidt
        let mut basis: Vec<Vec<C64>> = vec![normalize(&top)];
        let mut frontier = vec![basis[0].clone()];
        while let Some(v) = frontier.pop() {
            for a in 0..self.data.rank() {
                let sv: SVec<C64> = v.iter().map(|&x| if x.norm() > 0.0 { Some(x) } else { None }).collect();
                let im = self.apply_f(a, &sv)?;
                let mut w: Vec<C64> =
                    im.iter().map(|x| x.unwrap_or(C64::new(0.0, 0.0))).collect();
                for b in &basis {
                    let d: C64 = b.iter().zip(w.iter()).map(|(x, y)| x.conj() * y).sum();
                    for (wi, bi) in w.iter_mut().zip(b.iter()) {
                        *wi -= d * bi;
                    }
                }
                let n: f64 = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                if n > 1e-9 {
                    let w = w.iter().map(|x| x / n).collect::<Vec<_>>();
                    basis.push(w.clone());
                    frontier.push(w);
                }
            }
        }
        Ok(basis)
    }
}


impl SpMatC {
    /// Entries of the column `j`: pairs (row, value).
    fn entries_to(&self, j: usize) -> Vec<(usize, C64)> {
        // row-major storage; this is used in hot loops, so cache columns
        // lazily would be better, but desk-scale matrices keep this cheap.
        let mut out = Vec::new();
        for (i, row) in self.entries.iter().enumerate() {
            for (jj, v) in row {
                if *jj == j {
                    out.push((i, *v));
                }
            }
        }
        out
    }
}

fn normalize(v: &[C64]) -> Vec<C64> {
    let n: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Numeric null space of a rectangular system (rows × cols).
fn null_space(rows: &[Vec<C64>], cols: usize) -> Vec<Vec<C64>> {
    let mut m: Vec<Vec<C64>> = rows.to_vec();
    let nr = m.len();
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        // find pivot
        let mut best = 1e-10;
        let mut piv = None;
        for r in rank..nr {
            let v = m[r][col].norm();
            if v > best {
                best = v;
                piv = Some(r);
            }
        }
        let Some(p) = piv else { continue };
        m.swap(rank, p);
        let d = m[rank][col];
        for c in 0..cols {
            m[rank][c] /= d;
        }
        for r in 0..nr {
            if r != rank {
                let f = m[r][col];
                if f.norm() > 0.0 {
                    for c in 0..cols {
                        let v = m[rank][c];
                        m[r][c] -= f * v;
                    }
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == nr {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &fc in &free {
        let mut v = vec![C64::new(0.0, 0.0); cols];
        v[fc] = C64::new(1.0, 0.0);
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[ri][fc];
        }
        out.push(v);
    }
    out
}

fn unflatten(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_cartan, AlgebraSpec, Series};
    use crate::reps::{defining_rep_a, vector_rep_d};

    fn arc_cd(series: Series, rank: usize) -> Arc<CartanData> {
        Arc::new(build_cartan(AlgebraSpec::new(series, rank).unwrap()).unwrap())
    }

    #[test]
    fn decompose_vector_squared_d4() {
        let data = arc_cd(Series::D, 4);
        let rep = Arc::new(vector_rep_d(&data).unwrap());
        let ps = ProductSpace::new(data, vec![rep.clone(), rep]).unwrap();
        let parts = ps.decompose();
        // 8 ⊗ 8 = Sym²₀ (35) + Λ² (28) + trivial
        assert_eq!(parts.len(), 3);
        let dims: Vec<u64> = parts
            .iter()
            .map(|(w, m)| {
                assert_eq!(*m, 1);
                crate::algebra::weyl_dimension(&ps.data, w) as u64
            })
            .collect();
        let mut sorted = dims.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 28, 35]);
    }

    #[test]
    fn casimir_eigenvalue_on_highest_vector() {
        let data = arc_cd(Series::A, 3);
        let rep = Arc::new(defining_rep_a(&data).unwrap());
        let ps = ProductSpace::new(data, vec![rep.clone()]).unwrap();
        let mut v: SVec<C64> = svec_zero(ps.dim);
        v[rep.highest] = Some(C64::new(1.0, 0.0));
        let cv = ps.apply_casimir(&v).unwrap();
        let expect = ps.casimir_eigenvalue(&rep.basis_weights[rep.highest]);
        assert!((cv[rep.highest].unwrap() - C64::new(expect, 0.0)).norm() < 1e-12);
        for (i, x) in cv.iter().enumerate() {
            if i != rep.highest {
                assert!(x.map(|z| z.norm()).unwrap_or(0.0) < 1e-12);
            }
        }
    }

    #[test]
    fn projector_idempotent_and_annihilating() {
        let data = arc_cd(Series::D, 3);
        let rep = Arc::new(vector_rep_d(&data).unwrap());
        let ps = ProductSpace::new(data.clone(), vec![rep.clone(), rep.clone()]).unwrap();
        // antisymmetric combination lives in Λ² = adjoint L(ω_2-neighborhood):
        // for D_3 the wedge of two vectors is the 15-dimensional part
        let mut v: SVec<C64> = svec_zero(ps.dim);
        // e_1 ⊗ e_2 - e_2 ⊗ e_1 + noise in the symmetric part
        v[ps.flatten(&[0, 1])] = Some(C64::new(1.0, 0.0));
        v[ps.flatten(&[1, 0])] = Some(C64::new(-1.0, 0.0));
        let wedge_top: Weight = {
            let mut w = rep.basis_weights[0].clone();
            for (a, x) in rep.basis_weights[1].iter().enumerate() {
                w[a] += x;
            }
            w
        };
        let p1 = ps.project_isotypic(&v, &wedge_top).unwrap();
        // already in the component: projection acts as identity
        for i in 0..ps.dim {
            let a = v[i].map(|z| z).unwrap_or(C64::new(0.0, 0.0));
            let b = p1[i].map(|z| z).unwrap_or(C64::new(0.0, 0.0));
            assert!((a - b).norm() < 1e-9);
        }
        // symmetric top vector is annihilated by the wedge projector
        let mut s: SVec<C64> = svec_zero(ps.dim);
        s[ps.flatten(&[0, 0])] = Some(C64::new(1.0, 0.0));
        let p2 = ps.project_isotypic(&s, &wedge_top).unwrap();
        for x in p2.iter().flatten() {
            assert!(x.norm() < 1e-9);
        }
        // projector is idempotent on a mixed vector
        let mut mixed: SVec<C64> = svec_zero(ps.dim);
        mixed[ps.flatten(&[0, 1])] = Some(C64::new(0.7, 0.1));
        mixed[ps.flatten(&[1, 0])] = Some(C64::new(0.2, -0.4));
        mixed[ps.flatten(&[0, 0])] = Some(C64::new(1.0, 1.0));
        let q1 = ps.project_isotypic(&mixed, &wedge_top).unwrap();
        let q2 = ps.project_isotypic(&q1, &wedge_top).unwrap();
        for i in 0..ps.dim {
            let a = q1[i].unwrap_or(C64::new(0.0, 0.0));
            let b = q2[i].unwrap_or(C64::new(0.0, 0.0));
            assert!((a - b).norm() < 1e-9);
        }
    }
}
