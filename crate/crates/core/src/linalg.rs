//! Dense complex linear algebra at desk scale: solves, least squares via
//! Householder QR, and a shifted-QR eigenvalue routine for non-symmetric
//! matrices. Everything here works on row-major `CMat`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Self {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        CMat { rows: r, cols: c, data }
    }

    pub fn matmul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(other.data.iter()) {
            *x += *y;
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(other.data.iter()) {
            *x -= *y;
        }
        out
    }

    pub fn scale(&self, s: C64) -> CMat {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= s;
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![C64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn transpose(&self) -> CMat {
        let mut out = CMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Kronecker product, `self ⊗ other`.
    pub fn kron(&self, other: &CMat) -> CMat {
        let mut out = CMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(a: &CMat, b: &[C64]) -> Result<Vec<C64>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        let mut best = m[(col, col)].norm();
        for r in col + 1..n {
            let v = m[(r, col)].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Err(Error::SingularLinearSystem(format!("zero pivot at column {col}")));
        }
        if piv != col {
            for j in 0..n {
                let t = m[(col, j)];
                m[(col, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            rhs.swap(col, piv);
        }
        let d = m[(col, col)];
        for r in col + 1..n {
            let f = m[(r, col)] / d;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(r, j)] -= f * v;
            }
            let v = rhs[col];
            rhs[r] -= f * v;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i];
        for j in i + 1..n {
            acc -= m[(i, j)] * x[j];
        }
        x[i] = acc / m[(i, i)];
    }
    Ok(x)
}

/// Least-squares solution of an overdetermined `A x ≈ b` via Householder QR.
/// Returns `(x, residual_norm)`.
pub fn lstsq(a: &CMat, b: &[C64]) -> Result<(Vec<C64>, f64)> {
    let m = a.rows;
    let n = a.cols;
    assert!(m >= n, "lstsq expects rows >= cols");
    assert_eq!(b.len(), m);
    let mut r = a.clone();
    let mut qtb = b.to_vec();
    // Householder triangularization, applying reflectors to b as we go.
    for k in 0..n {
        let mut alpha = 0.0f64;
        for i in k..m {
            alpha += r[(i, k)].norm_sqr();
        }
        let alpha = alpha.sqrt();
        if alpha == 0.0 {
            return Err(Error::SingularLinearSystem(format!("rank-deficient column {k}")));
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let v0 = x0 + phase * alpha;
        let mut v = vec![C64::new(0.0, 0.0); m - k];
        v[0] = v0;
        for i in k + 1..m {
            v[i - k] = r[(i, k)];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // Apply H = I - 2 v v* / |v|^2 to the trailing block and to qtb.
        for j in k..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += v[i].conj() * r[(k + i, j)];
            }
            let f = dot * 2.0 / vnorm2;
            for i in 0..v.len() {
                let vi = v[i];
                r[(k + i, j)] -= f * vi;
            }
        }
        let mut dot = C64::new(0.0, 0.0);
        for i in 0..v.len() {
            dot += v[i].conj() * qtb[k + i];
        }
        let f = dot * 2.0 / vnorm2;
        for i in 0..v.len() {
            qtb[k + i] -= f * v[i];
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let mut acc = qtb[i];
        for j in i + 1..n {
            acc -= r[(i, j)] * x[j];
        }
        if r[(i, i)].norm() == 0.0 {
            return Err(Error::SingularLinearSystem(format!("zero diagonal at {i}")));
        }
        x[i] = acc / r[(i, i)];
    }
    let resid: f64 = qtb[n..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    Ok((x, resid))
}

/// Eigenvalues of a general complex matrix by Hessenberg reduction followed
/// by shifted QR iteration with deflation. Desk-scale only.
pub fn eigenvalues(a: &CMat) -> Result<Vec<C64>> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    if n == 0 {
        return Ok(vec![]);
    }
    let mut h = hessenberg(a);
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n; // active block is 0..hi
    let mut iter_since_deflation = 0usize;
    let scale = a.max_abs().max(1e-300);
    let eps = 1e-15 * scale;
    while hi > 0 {
        if hi == 1 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // Look for a negligible subdiagonal entry to deflate.
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if h[(lo, lo - 1)].norm() <= 1e-15 * s.max(scale) {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if h[(hi - 1, hi - 2)].norm() <= eps
            || h[(hi - 1, hi - 2)].norm()
                <= 1e-15 * (h[(hi - 2, hi - 2)].norm() + h[(hi - 1, hi - 1)].norm()).max(scale)
        {
            eigs.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        if iter_since_deflation > 40 * n + 200 {
            return Err(Error::EigenNonConvergence(format!(
                "QR iteration stalled with block size {hi}"
            )));
        }
        // Wilkinson shift from the trailing 2x2 of the active block.
        let a11 = h[(hi - 2, hi - 2)];
        let a12 = h[(hi - 2, hi - 1)];
        let a21 = h[(hi - 1, hi - 2)];
        let a22 = h[(hi - 1, hi - 1)];
        let tr = a11 + a22;
        let det = a11 * a22 - a12 * a21;
        let disc = (tr * tr - det * 4.0).sqrt();
        let l1 = (tr + disc) * 0.5;
        let l2 = (tr - disc) * 0.5;
        let shift = if (l1 - a22).norm() < (l2 - a22).norm() { l1 } else { l2 };
        // Occasionally use an exceptional shift to break symmetry stalls.
        let shift = if iter_since_deflation > 0 && iter_since_deflation % 17 == 0 {
            shift + C64::new(0.5, 0.25) * h[(hi - 1, hi - 2)].norm()
        } else {
            shift
        };
        qr_step(&mut h, lo, hi, shift);
        iter_since_deflation += 1;
    }
    Ok(eigs)
}

fn hessenberg(a: &CMat) -> CMat {
    let n = a.rows;
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let mut alpha = 0.0f64;
        for i in k + 1..n {
            alpha += h[(i, k)].norm_sqr();
        }
        let alpha = alpha.sqrt();
        if alpha == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let mut v = vec![C64::new(0.0, 0.0); n - k - 1];
        v[0] = x0 + phase * alpha;
        for i in k + 2..n {
            v[i - k - 1] = h[(i, k)];
        }
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H A: rows k+1.. of all columns
        for j in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..v.len() {
                dot += v[i].conj() * h[(k + 1 + i, j)];
            }
            let f = dot * 2.0 / vnorm2;
            for i in 0..v.len() {
                let vi = v[i];
                h[(k + 1 + i, j)] -= f * vi;
            }
        }
        // A H: columns k+1.. of all rows
        for i in 0..n {
            let mut dot = C64::new(0.0, 0.0);
            for j in 0..v.len() {
                dot += h[(i, k + 1 + j)] * v[j];
            }
            let f = dot * 2.0 / vnorm2;
            for j in 0..v.len() {
                let vj = v[j].conj();
                h[(i, k + 1 + j)] -= f * vj;
            }
        }
    }
    h
}

/// One explicit single-shift QR sweep on the Hessenberg block `lo..hi`:
/// factor `B - σI = QR` by Givens rotations, replace the block with
/// `RQ + σI`. Eigenvalue-only, so off-block coupling is not updated.
fn qr_step(h: &mut CMat, lo: usize, hi: usize, shift: C64) {
    let m = hi - lo;
    let mut b = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            b[(i, j)] = h[(lo + i, lo + j)];
        }
        b[(i, i)] -= shift;
    }
    let mut rots: Vec<(C64, C64)> = Vec::with_capacity(m.saturating_sub(1));
    for k in 0..m - 1 {
        let x = b[(k, k)];
        let y = b[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            (x.conj() / r, y.conj() / r)
        };
        rots.push((c, s));
        for j in k..m {
            let u = b[(k, j)];
            let v = b[(k + 1, j)];
            b[(k, j)] = c * u + s * v;
            b[(k + 1, j)] = -s.conj() * u + c.conj() * v;
        }
    }
    // B <- R Q: multiply by each rotation's adjoint on the right.
    for (k, (c, s)) in rots.iter().enumerate() {
        for i in 0..(k + 2).min(m) {
            let u = b[(i, k)];
            let v = b[(i, k + 1)];
            b[(i, k)] = u * c.conj() + v * s.conj();
            b[(i, k + 1)] = -u * *s + v * *c;
        }
    }
    for i in 0..m {
        b[(i, i)] += shift;
        for j in 0..m {
            h[(lo + i, lo + j)] = b[(i, j)];
        }
    }
}

/// Roots of a complex polynomial (ascending coefficients) via the companion
/// matrix. Leading zero coefficients are trimmed with a relative threshold.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let maxc = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if maxc == 0.0 {
        return Ok(vec![]);
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() <= 1e-13 * maxc {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[deg];
    let mut comp = CMat::zeros(deg, deg);
    for i in 0..deg {
        comp[(0, i)] = -coeffs[deg - 1 - i] / lead;
        if i + 1 < deg {
            comp[(i + 1, i)] = C64::new(1.0, 0.0);
        }
    }
    eigenvalues(&comp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn solve_roundtrip() {
        let a = CMat::from_rows(vec![
            vec![c(2.0, 1.0), c(0.5, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0), c(1.0, 1.0)],
            vec![c(1.0, 0.0), c(-1.0, 2.0), c(0.2, 0.0)],
        ]);
        let x = vec![c(1.0, -1.0), c(2.0, 0.5), c(0.0, 3.0)];
        let b = a.apply(&x);
        let got = solve(&a, &b).unwrap();
        for (u, v) in got.iter().zip(x.iter()) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn lstsq_exact_when_consistent() {
        let a = CMat::from_rows(vec![
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 1.0), c(1.0, 0.0)],
            vec![c(3.0, 0.0), c(0.0, -1.0)],
        ]);
        let x = vec![c(0.7, 0.3), c(-1.0, 2.0)];
        let b = a.apply(&x);
        let (got, resid) = lstsq(&a, &b).unwrap();
        assert!(resid < 1e-12);
        for (u, v) in got.iter().zip(x.iter()) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_of_companion_match_roots() {
        // (u - 1)(u - 2i)(u + 3) = 0
        let r1 = c(1.0, 0.0);
        let r2 = c(0.0, 2.0);
        let r3 = c(-3.0, 0.0);
        // expand
        let coeffs = vec![
            -(r1 * r2 * r3),
            r1 * r2 + r1 * r3 + r2 * r3,
            -(r1 + r2 + r3),
            c(1.0, 0.0),
        ];
        let mut roots = poly_roots(&coeffs).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut expect = vec![r1, r2, r3];
        expect.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (u, v) in roots.iter().zip(expect.iter()) {
            assert!((u - v).norm() < 1e-9, "{u} vs {v}");
        }
    }

    #[test]
    fn eigenvalues_random_trace_det() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for n in [2usize, 5, 9, 16] {
            let mut a = CMat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
                }
            }
            let eigs = eigenvalues(&a).unwrap();
            assert_eq!(eigs.len(), n);
            let tr: C64 = (0..n).map(|i| a[(i, i)]).sum();
            let se: C64 = eigs.iter().sum();
            assert!((tr - se).norm() < 1e-9 * (1.0 + tr.norm()), "n={n}");
        }
    }
}
