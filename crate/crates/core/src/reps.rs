//! Exact matrix representations: Chevalley generators for the A-series
//! defining representation and the D-series vector and spinor
//! representations, exterior powers, Weyl-group representatives with sign
//! bookkeeping, and root vectors for arbitrary positive roots.
//!
//! All matrices are sparse over Gaussian rationals and every commutation
//! relation is checked exactly.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{CartanData, Weight};
use crate::error::{Error, Result};
use crate::exact::{GRat, SMat};
use crate::gamma::{gamma_set, GammaSet};

/// An exact matrix representation with Chevalley generators.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub dim: usize,
    pub rank: usize,
    pub e: Vec<SMat>,
    pub f: Vec<SMat>,
    pub h: Vec<SMat>,
    /// Dynkin labels of each basis vector's weight.
    pub basis_weights: Vec<Weight>,
    /// Index of the highest-weight basis vector.
    pub highest: usize,
    /// Per basis vector: reduced word σ with e_i = s_σ e_highest, for
    /// vectors on the Weyl orbit of the highest weight. Populated by
    /// [`normalize_orbit_basis`].
    pub orbit_words: Vec<Option<Vec<usize>>>,
    /// Sign relating the plain construction basis to the orbit-normalized
    /// basis (components transform by this sign). All +1 before
    /// normalization.
    pub orbit_signs: Vec<i8>,
}

impl MatrixRep {
    /// Index of the basis vector at a given orbit weight (weights on the
    /// orbit have one-dimensional weight spaces).
    pub fn index_of_weight(&self, w: &Weight) -> Option<usize> {
        let mut found = None;
        for (i, bw) in self.basis_weights.iter().enumerate() {
            if bw == w {
                if found.is_some() {
                    return None; // weight space not one-dimensional
                }
                found = Some(i);
            }
        }
        found
    }

    /// First descendant index: the unique basis vector at weight
    /// `highest - α_node` for the fundamental representation of `node`.
    pub fn descendant_index(&self, data: &CartanData, node: usize) -> Result<usize> {
        let w = data.reflect(&self.basis_weights[self.highest], node);
        self.index_of_weight(&w)
            .ok_or_else(|| Error::Representation("descendant weight not one-dimensional".into()))
    }

    /// Verify all Chevalley relations exactly.
    pub fn check_chevalley(&self, cartan: &[Vec<i64>]) -> bool {
        let r = self.rank;
        for a in 0..r {
            // h_a diagonal with the recorded weights
            for (i, w) in self.basis_weights.iter().enumerate() {
                if self.h[a].get(i, i) != GRat::from_int(w[a]) {
                    return false;
                }
            }
            if self.h[a].nnz() != self.basis_weights.iter().filter(|w| w[a] != 0).count() {
                return false;
            }
        }
        for a in 0..r {
            for b in 0..r {
                let he = self.h[a].commutator(&self.e[b]);
                if he != self.e[b].scale(&GRat::from_int(cartan[a][b])) {
                    return false;
                }
                let hf = self.h[a].commutator(&self.f[b]);
                if hf != self.f[b].scale(&GRat::from_int(-cartan[a][b])) {
                    return false;
                }
                let ef = self.e[a].commutator(&self.f[b]);
                let expect = if a == b {
                    self.h[a].clone()
                } else {
                    SMat::zeros(self.dim, self.dim)
                };
                if ef != expect {
                    return false;
                }
            }
        }
        true
    }
}

fn find_highest(weights: &[Weight], data: &CartanData) -> Result<usize> {
    // highest weight = the dominant weight of maximal height
    let mut best: Option<(usize, crate::exact::Rat)> = None;
    for (i, w) in weights.iter().enumerate() {
        if w.iter().any(|&x| x < 0) {
            continue;
        }
        let height = data.weight_ip(w, &data.weyl_vector);
        match &best {
            None => best = Some((i, height)),
            Some((_, h)) if height > *h => best = Some((i, height)),
            _ => {}
        }
    }
    best.map(|(i, _)| i)
        .ok_or_else(|| Error::Representation("no dominant basis weight".into()))
}

/// Defining representation of the A-series algebra of the given rank.
pub fn defining_rep_a(data: &CartanData) -> Result<MatrixRep> {
    let r = data.rank();
    let n = r + 1;
    let unit = |i: usize, j: usize| -> SMat {
        SMat::from_triplets(n, n, &[(i, j, GRat::one())])
    };
    let e: Vec<SMat> = (0..r).map(|a| unit(a, a + 1)).collect();
    let f: Vec<SMat> = (0..r).map(|a| unit(a + 1, a)).collect();
    let basis_weights: Vec<Weight> = (0..n)
        .map(|k| {
            (0..r)
                .map(|a| i64::from(k == a) - i64::from(k == a + 1))
                .collect()
        })
        .collect();
    let h: Vec<SMat> = (0..r)
        .map(|a| SMat::diag((0..n).map(|k| GRat::from_int(basis_weights[k][a])).collect()))
        .collect();
    let highest = find_highest(&basis_weights, data)?;
    Ok(MatrixRep { dim: n, rank: r, e, f, h, basis_weights, highest, orbit_words: vec![None; n], orbit_signs: vec![1; n] })
}

/// D-series vector index bookkeeping: positions `(0..r)` carry indices
/// `1..r` and positions `(r..2r)` carry `-r..-1`.
pub fn vector_position(i: i64, r: usize) -> usize {
    if i > 0 {
        (i - 1) as usize
    } else {
        2 * r - (-i) as usize
    }
}

pub fn vector_index(p: usize, r: usize) -> i64 {
    if p < r {
        (p + 1) as i64
    } else {
        -((2 * r - p) as i64)
    }
}

fn eps_labels(i: i64, data: &CartanData) -> Weight {
    // Dynkin labels of ±ε_{|i|} for the D-series.
    let r = data.rank();
    let a_idx = i.unsigned_abs() as usize; // 1..r
    let sign = i.signum();
    let mut labels = vec![0i64; r];
    for node in 0..r {
        // α_node in ε coordinates: ε_{node+1} - ε_{node+2} for node < r-1,
        // ε_{r-1} + ε_r for the last node.
        let ip = if node < r - 1 {
            i64::from(a_idx == node + 1) - i64::from(a_idx == node + 2)
        } else {
            i64::from(a_idx == r - 1) + i64::from(a_idx == r)
        };
        labels[node] = sign * ip;
    }
    labels
}

/// Vector representation of the D-series algebra.
pub fn vector_rep_d(data: &CartanData) -> Result<MatrixRep> {
    let r = data.rank();
    let n = 2 * r;
    let unit = |i: i64, j: i64| -> SMat {
        SMat::from_triplets(
            n,
            n,
            &[(vector_position(i, r), vector_position(j, r), GRat::one())],
        )
    };
    let mut e = Vec::with_capacity(r);
    let mut f = Vec::with_capacity(r);
    for a in 1..r as i64 {
        e.push(unit(a, a + 1).sub(&unit(-(a + 1), -a)));
        f.push(unit(a + 1, a).sub(&unit(-a, -(a + 1))));
    }
    e.push(unit(r as i64 - 1, -(r as i64)).sub(&unit(r as i64, -(r as i64 - 1))));
    f.push(unit(-(r as i64), r as i64 - 1).sub(&unit(-(r as i64 - 1), r as i64)));

    let basis_weights: Vec<Weight> =
        (0..n).map(|p| eps_labels(vector_index(p, r), data)).collect();
    let h: Vec<SMat> = (0..r)
        .map(|a| SMat::diag((0..n).map(|p| GRat::from_int(basis_weights[p][a])).collect()))
        .collect();
    let highest = find_highest(&basis_weights, data)?;
    let rep = MatrixRep {
        dim: n,
        rank: r,
        e,
        f,
        h,
        basis_weights,
        highest,
        orbit_words: vec![None; n],
        orbit_signs: vec![1; n],
    };
    // metric preservation: Xᵀ g + g X = 0 with g the anti-diagonal
    let g = {
        let mut m = SMat::zeros(n, n);
        for p in 0..n {
            m.set(p, n - 1 - p, GRat::one());
        }
        m
    };
    for x in rep.e.iter().chain(rep.f.iter()).chain(rep.h.iter()) {
        if !x.transpose().matmul(&g).add(&g.matmul(x)).is_zero() {
            return Err(Error::Representation("vector rep does not preserve the metric".into()));
        }
    }
    Ok(rep)
}

/// The two Weyl-spinor representations of the D-series algebra,
/// `(ψ-chirality, η-chirality)`; ψ carries an odd number of minus signs.
pub fn spinor_reps_d(data: &CartanData) -> Result<(MatrixRep, MatrixRep)> {
    let r = data.rank();
    let g = gamma_set(r)?;
    let full_dim = g.dim;

    // Chevalley generators on the full Dirac space.
    let mut e_full: Vec<SMat> = Vec::with_capacity(r);
    let mut f_full: Vec<SMat> = Vec::with_capacity(r);
    for a in 1..r as i64 {
        // raise ε_a - ε_{a+1}: flip (s_a, s_{a+1}) = (-,+) -> (+,-)
        e_full.push(g.gamma(-a).compose(g.gamma(a + 1)).to_smat());
        f_full.push(g.gamma(-(a + 1)).compose(g.gamma(a)).to_smat());
    }
    // raise ε_{r-1} + ε_r
    e_full.push(g.gamma(-(r as i64 - 1)).compose(g.gamma(-(r as i64))).to_smat());
    f_full.push(g.gamma(r as i64).compose(g.gamma(r as i64 - 1)).to_smat());

    // Weights: basis b has ε-coordinates s_a/2; Dynkin labels are integers.
    let weight_of = |b: usize| -> Weight {
        let mask = g.basis_mask[b];
        (0..r)
            .map(|node| {
                let s = |slot: usize| -> i64 {
                    if (mask >> slot) & 1 == 1 {
                        -1
                    } else {
                        1
                    }
                };
                if node < r - 1 {
                    (s(node) - s(node + 1)) / 2
                } else {
                    (s(r - 2) + s(r - 1)) / 2
                }
            })
            .collect()
    };

    let build_chirality = |parity: u8| -> Result<MatrixRep> {
        let keep: Vec<usize> = (0..full_dim).filter(|&b| g.chirality(b) == parity).collect();
        let pos: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let dim = keep.len();
        let restrict = |m: &SMat| -> Result<SMat> {
            let mut out = SMat::zeros(dim, dim);
            for (bi, row) in m.entries.iter().enumerate() {
                for (bj, v) in row {
                    match (pos.get(&bi), pos.get(bj)) {
                        (Some(&i), Some(&j)) => out.set(i, j, v.clone()),
                        (None, None) => {}
                        _ => {
                            return Err(Error::Representation(
                                "generator does not preserve chirality".into(),
                            ))
                        }
                    }
                }
            }
            Ok(out)
        };
        let mut e: Vec<SMat> = e_full.iter().map(&restrict).collect::<Result<_>>()?;
        let mut f: Vec<SMat> = f_full.iter().map(&restrict).collect::<Result<_>>()?;
        let basis_weights: Vec<Weight> = keep.iter().map(|&b| weight_of(b)).collect();
        let h: Vec<SMat> = (0..r)
            .map(|a| {
                SMat::diag((0..dim).map(|i| GRat::from_int(basis_weights[i][a])).collect())
            })
            .collect();
        // Resolve sign and orientation ambiguities against the exact
        // Chevalley relations: each candidate pair may need e <-> f or a
        // global sign on f.
        for a in 0..r {
            let he = h[a].commutator(&e[a]);
            if he == e[a].scale(&GRat::from_int(-2)) {
                std::mem::swap(&mut e[a], &mut f[a]);
            }
            let ef = e[a].commutator(&f[a]);
            if ef == h[a].scale(&GRat::from_int(-1)) {
                f[a] = f[a].scale(&GRat::from_int(-1));
            }
        }
        let highest = find_highest(&basis_weights, data)?;
        let rep = MatrixRep {
            dim,
            rank: r,
            e,
            f,
            h,
            basis_weights,
            highest,
            orbit_words: vec![None; dim],
            orbit_signs: vec![1; dim],
        };
        if !rep.check_chevalley(&data.cartan) {
            return Err(Error::Representation("spinor Chevalley relations failed".into()));
        }
        Ok(rep)
    };
    let psi = build_chirality(1)?;
    let eta = build_chirality(0)?;
    Ok((psi, eta))
}

/// Gamma data bundled with the spinor reps, for bilinear contractions.
pub struct SpinorData {
    pub gammas: GammaSet,
    /// Dirac-space basis index per ψ (resp. η) component.
    pub psi_embed: Vec<usize>,
    pub eta_embed: Vec<usize>,
}

pub fn spinor_data(r: usize) -> Result<SpinorData> {
    let g = gamma_set(r)?;
    let psi_embed: Vec<usize> = (0..g.dim).filter(|&b| g.chirality(b) == 1).collect();
    let eta_embed: Vec<usize> = (0..g.dim).filter(|&b| g.chirality(b) == 0).collect();
    Ok(SpinorData { gammas: g, psi_embed, eta_embed })
}

/// k-th exterior power, basis = sorted k-subsets in lexicographic order.
pub fn exterior_power(rep: &MatrixRep, k: usize) -> Result<MatrixRep> {
    if k == 0 || k > rep.dim {
        return Err(Error::IndexRange(format!("exterior power {k} of dim {}", rep.dim)));
    }
    let subsets = k_subsets(rep.dim, k);
    let index: HashMap<Vec<usize>, usize> =
        subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let dim = subsets.len();
    let r = rep.rank;

    let lift = |m: &SMat| -> SMat {
        let mt = m.transpose(); // column access
        let mut out = SMat::zeros(dim, dim);
        for (si, s) in subsets.iter().enumerate() {
            for (slot, &q) in s.iter().enumerate() {
                for (p, val) in &mt.entries[q] {
                    if s.binary_search(p).is_ok() && *p != q {
                        continue;
                    }
                    if *p == q {
                        out.add_to(index[s], si, val);
                        continue;
                    }
                    let mut s2: Vec<usize> = s.clone();
                    s2.remove(slot);
                    let ins = s2.partition_point(|&x| x < *p);
                    s2.insert(ins, *p);
                    let sign = if (slot + ins) % 2 == 0 { 1 } else { -1 };
                    let target = index[&s2];
                    out.add_to(target, si, &val.mul(&GRat::from_int(sign)));
                }
            }
        }
        out
    };

    let e: Vec<SMat> = rep.e.iter().map(&lift).collect();
    let f: Vec<SMat> = rep.f.iter().map(&lift).collect();
    let basis_weights: Vec<Weight> = subsets
        .iter()
        .map(|s| {
            let mut w = vec![0i64; r];
            for &p in s {
                for a in 0..r {
                    w[a] += rep.basis_weights[p][a];
                }
            }
            w
        })
        .collect();
    let h: Vec<SMat> = (0..r)
        .map(|a| SMat::diag((0..dim).map(|i| GRat::from_int(basis_weights[i][a])).collect()))
        .collect();
    // In the representations we build, basis vectors come in descending
    // weight order, so the lexicographically first subset carries the
    // highest weight. Verified: it must be dominant and annihilated by
    // every raising operator.
    let highest = 0usize;
    if basis_weights[highest].iter().any(|&x| x < 0) {
        return Err(Error::Representation("exterior power: first subset not dominant".into()));
    }
    for m in &e {
        if m.entries.iter().any(|row| row.iter().any(|(j, v)| *j == highest && !v.is_zero())) {
            return Err(Error::Representation(
                "exterior power: first subset is not a highest-weight line".into(),
            ));
        }
    }
    Ok(MatrixRep { dim, rank: r, e, f, h, basis_weights, highest, orbit_words: vec![None; dim], orbit_signs: vec![1; dim] })
}

pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 <= n - (k - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Representative of a Weyl-group element in a representation.
#[derive(Clone, Debug)]
pub struct WeylRepresentative {
    pub word: Vec<usize>,
    pub matrix: SMat,
}

/// Per-letter representative `s_a = exp(e_a) exp(-f_a) exp(e_a)`.
pub fn simple_representative(rep: &MatrixRep, a: usize) -> SMat {
    let ea = rep.e[a].exp_nilpotent();
    let fa = rep.f[a].scale(&GRat::from_int(-1)).exp_nilpotent();
    ea.matmul(&fa).matmul(&rep.e[a].exp_nilpotent())
}

/// Ordered product of per-letter representatives along a word.
pub fn weyl_representative(rep: &MatrixRep, word: &[usize]) -> WeylRepresentative {
    let mut m = SMat::identity(rep.dim);
    for &a in word {
        m = m.matmul(&simple_representative(rep, a));
    }
    WeylRepresentative { word: word.to_vec(), matrix: m }
}

/// Length of a Weyl word as a group element (number of positive roots sent
/// negative). Used to detect non-reduced words.
pub fn weyl_length(data: &CartanData, word: &[usize]) -> usize {
    data.positive_roots
        .iter()
        .filter(|root| {
            let img = act_on_root(data, word, root);
            img.iter().sum::<i64>() < 0
        })
        .count()
}

/// Apply a Weyl word (as s_{a_1} ... s_{a_ℓ}) to a root in simple-root
/// coordinates.
pub fn act_on_root(data: &CartanData, word: &[usize], root: &[i64]) -> Vec<i64> {
    let r = data.rank();
    let mut labels: Weight = (0..r)
        .map(|b| (0..r).map(|a| root[a] * data.cartan[a][b]).sum())
        .collect();
    for &a in word.iter().rev() {
        labels = data.reflect(&labels, a);
    }
    // back to root coordinates: c = C^{-1} labels
    (0..r)
        .map(|a| {
            let mut acc = crate::exact::Rat::from_integer(0.into());
            for b in 0..r {
                acc += &data.cartan_inv[a][b] * crate::exact::rat_i(labels[b]);
            }
            assert!(acc.is_integer());
            num_traits::ToPrimitive::to_i64(&acc.to_integer()).unwrap()
        })
        .collect()
}

/// Matrix of a Weyl word acting on Dynkin labels.
pub fn word_label_matrix(data: &CartanData, word: &[usize]) -> Vec<Vec<i64>> {
    let r = data.rank();
    let mut m: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect();
    // columns of m are images of basis labels under the element
    for &a in word.iter().rev() {
        // new = R_a * old applied column-wise: reflect each column
        for j in 0..r {
            let col: Weight = (0..r).map(|i| m[i][j]).collect();
            let refl = data.reflect(&col, a);
            for i in 0..r {
                m[i][j] = refl[i];
            }
        }
    }
    m
}

fn apply_label_matrix(m: &[Vec<i64>], w: &Weight) -> Weight {
    (0..m.len())
        .map(|i| (0..m.len()).map(|j| m[i][j] * w[j]).sum())
        .collect()
}

/// Canonical reduced word of the element represented by an arbitrary word.
pub fn reduce_word(data: &CartanData, word: &[usize]) -> Vec<usize> {
    let r = data.rank();
    let mut inv: Vec<usize> = word.to_vec();
    inv.reverse(); // reflections are involutions
    let mut minv = word_label_matrix(data, &inv);
    let mut out = Vec::new();
    loop {
        // find a with w^{-1} α_a a negative root
        let mut found = None;
        for a in 0..r {
            let alpha = data.simple_root_labels(a);
            let img = apply_label_matrix(&minv, &alpha);
            // labels -> root coords sign: total height
            let mut height = crate::exact::Rat::from_integer(0.into());
            for i in 0..r {
                for j in 0..r {
                    height += &data.cartan_inv[i][j] * crate::exact::rat_i(img[j]);
                }
            }
            if height < crate::exact::Rat::from_integer(0.into()) {
                found = Some(a);
                break;
            }
        }
        match found {
            None => break,
            Some(a) => {
                out.push(a);
                // w := s_a w, so w^{-1} := w^{-1} s_a
                let r_a = word_label_matrix(data, &[a]);
                let mut next = vec![vec![0i64; r]; r];
                for i in 0..r {
                    for j in 0..r {
                        next[i][j] = (0..r).map(|k| minv[i][k] * r_a[k][j]).sum();
                    }
                }
                minv = next;
            }
        }
    }
    out
}

/// The torus sign in `s_σ s_σ' = s_{σσ'} Π_β (-1)^{h_β}` evaluated on a
/// weight λ: the product runs over positive roots β with σ'β < 0 and
/// σσ'β > 0, each contributing `(-1)^{λ(h_β)}`.
pub fn torus_sign_factor(
    data: &CartanData,
    sigma: &[usize],
    sigma_p: &[usize],
    lambda: &Weight,
) -> Result<i64> {
    if weyl_length(data, sigma) != sigma.len() || weyl_length(data, sigma_p) != sigma_p.len() {
        return Err(Error::Representation("word is not reduced".into()));
    }
    let mut composed: Vec<usize> = sigma.to_vec();
    composed.extend_from_slice(sigma_p);
    let mut sign = 1i64;
    for root in &data.positive_roots {
        let im1 = act_on_root(data, sigma_p, root);
        if im1.iter().sum::<i64>() >= 0 {
            continue;
        }
        let im2 = act_on_root(data, &composed, root);
        if im2.iter().sum::<i64>() > 0 {
            let pow = data.weight_root_ip(lambda, root);
            if pow.rem_euclid(2) == 1 {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// Normalize the basis on the Weyl orbit of the highest weight so that
/// `e_i = s_{σ_i} e_highest` with σ_i the lexicographically minimal reduced
/// word reaching that weight. Returns the normalized representation.
pub fn normalize_orbit_basis(rep: &MatrixRep, data: &CartanData) -> Result<MatrixRep> {
    let r = rep.rank;
    let hw = rep.basis_weights[rep.highest].clone();
    // Dijkstra over (length, word) keyed by weight.
    let mut words: HashMap<Weight, Vec<usize>> = HashMap::new();
    let mut queue: BTreeMap<(usize, Vec<usize>), Weight> = BTreeMap::new();
    queue.insert((0, vec![]), hw.clone());
    while let Some(((len, word), w)) = queue.pop_first() {
        if words.contains_key(&w) {
            continue;
        }
        words.insert(w.clone(), word.clone());
        for a in 0..r {
            if w[a] == 0 {
                continue;
            }
            let w2 = data.reflect(&w, a);
            if !words.contains_key(&w2) {
                // left extension: s_a ∘ σ
                let mut word2 = vec![a];
                word2.extend_from_slice(&word);
                queue.insert((len + 1, word2), w2);
            }
        }
    }

    let letters: Vec<SMat> = (0..r).map(|a| simple_representative(rep, a)).collect();
    let mut signs: Vec<GRat> = vec![GRat::one(); rep.dim];
    let mut orbit_words: Vec<Option<Vec<usize>>> = vec![None; rep.dim];
    let mut hw_vec = vec![GRat::zero(); rep.dim];
    hw_vec[rep.highest] = GRat::one();
    for (w, word) in &words {
        let idx = rep
            .index_of_weight(w)
            .ok_or_else(|| Error::OrbitReconstruction("orbit weight space not 1-dim".into()))?;
        let mut v = hw_vec.clone();
        for &a in word.iter().rev() {
            v = letters[a].apply(&v);
        }
        // v must be a unit multiple of e_idx
        let mut val = GRat::zero();
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                if i != idx || !val.is_zero() {
                    return Err(Error::OrbitReconstruction(
                        "representative image is not a basis line".into(),
                    ));
                }
                val = x.clone();
            }
        }
        if val.as_sign().is_none() {
            return Err(Error::OrbitReconstruction("non-unit coefficient on orbit".into()));
        }
        signs[idx] = val;
        orbit_words[idx] = Some(word.clone());
    }

    // Basis change e_i -> sign_i · e_i re-scales matrix entries by
    // sign_i · sign_j (signs are self-inverse).
    let rescale = |m: &SMat| -> SMat {
        let mut out = SMat::zeros(m.rows, m.cols);
        for (i, row) in m.entries.iter().enumerate() {
            for (j, v) in row {
                out.set(i, *j, signs[i].mul(&signs[*j]).mul(v));
            }
        }
        out
    };
    let sign_i8: Vec<i8> = signs.iter().map(|s| s.as_sign().unwrap_or(1)).collect();
    Ok(MatrixRep {
        dim: rep.dim,
        rank: rep.rank,
        e: rep.e.iter().map(&rescale).collect(),
        f: rep.f.iter().map(&rescale).collect(),
        h: rep.h.clone(),
        basis_weights: rep.basis_weights.clone(),
        highest: rep.highest,
        orbit_words,
        orbit_signs: sign_i8,
    })
}

/// Root vectors `E_β, F_β` for every positive root, normalized so that
/// `[E_β, F_β] = h_β` exactly.
pub fn root_vectors(rep: &MatrixRep, data: &CartanData) -> Result<(Vec<SMat>, Vec<SMat>)> {
    let r = rep.rank;
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    for (i, root) in data.positive_roots.iter().enumerate() {
        index.insert(root.clone(), i);
    }
    let n = data.positive_roots.len();
    let mut epos: Vec<Option<SMat>> = vec![None; n];
    let mut fpos: Vec<Option<SMat>> = vec![None; n];
    for (i, root) in data.positive_roots.iter().enumerate() {
        let height: i64 = root.iter().sum();
        if height == 1 {
            let a = root.iter().position(|&c| c == 1).unwrap();
            epos[i] = Some(rep.e[a].clone());
            fpos[i] = Some(rep.f[a].clone());
            continue;
        }
        // find a simple root to peel off
        let mut done = false;
        for a in 0..r {
            if root[a] == 0 {
                continue;
            }
            let mut parent = root.clone();
            parent[a] -= 1;
            if let Some(&pi) = index.get(&parent) {
                let (Some(ep), Some(fp)) = (&epos[pi], &fpos[pi]) else { continue };
                let eb = rep.e[a].commutator(ep);
                let mut fb = rep.f[a].commutator(fp);
                // normalize sign: [E_β, F_β] must equal +h_β = Σ c_a h_a
                let mut hb = SMat::zeros(rep.dim, rep.dim);
                for c in 0..r {
                    if root[c] != 0 {
                        hb = hb.add(&rep.h[c].scale(&GRat::from_int(root[c])));
                    }
                }
                let comm = eb.commutator(&fb);
                if comm == hb {
                } else if comm == hb.scale(&GRat::from_int(-1)) {
                    fb = fb.scale(&GRat::from_int(-1));
                } else {
                    return Err(Error::Representation(format!(
                        "root vector normalization failed at root {root:?}"
                    )));
                }
                epos[i] = Some(eb);
                fpos[i] = Some(fb);
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::Representation("root chain broken".into()));
        }
    }
    Ok((
        epos.into_iter().map(|x| x.unwrap()).collect(),
        fpos.into_iter().map(|x| x.unwrap()).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_cartan, AlgebraSpec, Series};

    fn cd(series: Series, rank: usize) -> CartanData {
        build_cartan(AlgebraSpec::new(series, rank).unwrap()).unwrap()
    }

    #[test]
    fn defining_a_series() {
        for r in 1..=8 {
            let data = cd(Series::A, r);
            let rep = defining_rep_a(&data).unwrap();
            assert_eq!(rep.dim, r + 1);
            assert!(rep.check_chevalley(&data.cartan), "A{r}");
        }
        let data = cd(Series::A, 1);
        let rep = defining_rep_a(&data).unwrap();
        assert_eq!(rep.e[0].get(0, 1), GRat::one());
        assert_eq!(rep.e[0].get(0, 0), GRat::zero());
    }

    #[test]
    fn vector_d_series() {
        for r in 3..=6 {
            let data = cd(Series::D, r);
            let rep = vector_rep_d(&data).unwrap();
            assert_eq!(rep.dim, 2 * r);
            assert!(rep.check_chevalley(&data.cartan), "D{r}");
        }
    }

    #[test]
    fn spinors_d_series() {
        for r in 3..=6 {
            let data = cd(Series::D, r);
            let (psi, eta) = spinor_reps_d(&data).unwrap();
            assert_eq!(psi.dim, 1 << (r - 1));
            assert_eq!(eta.dim, 1 << (r - 1));
            assert!(psi.check_chevalley(&data.cartan), "psi D{r}");
            assert!(eta.check_chevalley(&data.cartan), "eta D{r}");
            // highest weight of the η chirality is the last fundamental
            let mut expect = vec![0i64; r];
            expect[r - 1] = 1;
            assert_eq!(eta.basis_weights[eta.highest], expect);
            let mut expect = vec![0i64; r];
            expect[r - 2] = 1;
            assert_eq!(psi.basis_weights[psi.highest], expect);
            // ψ_1 is |+…+-⟩ and η_1 is |+…+⟩
            assert_eq!(eta.highest, 0);
            assert_eq!(psi.highest, 0);
        }
    }

    #[test]
    fn exterior_powers() {
        let data = cd(Series::A, 3);
        let rep = defining_rep_a(&data).unwrap();
        let l2 = exterior_power(&rep, 2).unwrap();
        assert_eq!(l2.dim, 6);
        assert!(l2.check_chevalley(&data.cartan));
        let top = exterior_power(&rep, 4).unwrap();
        assert_eq!(top.dim, 1);
        assert!(top.e.iter().all(|m| m.is_zero()));

        let data = cd(Series::D, 4);
        let vec_rep = vector_rep_d(&data).unwrap();
        for k in 1..=2 {
            let lk = exterior_power(&vec_rep, k).unwrap();
            assert!(lk.check_chevalley(&data.cartan), "Λ^{k}");
            let mut expect = vec![0i64; 4];
            expect[k - 1] = 1;
            assert_eq!(lk.basis_weights[lk.highest], expect);
        }
    }

    #[test]
    fn weyl_representative_sl2() {
        let data = cd(Series::A, 1);
        let rep = defining_rep_a(&data).unwrap();
        let s = weyl_representative(&rep, &[0]);
        // [[0,1],[-1,0]]
        assert_eq!(s.matrix.get(0, 1), GRat::one());
        assert_eq!(s.matrix.get(1, 0), GRat::from_int(-1));
        assert_eq!(s.matrix.get(0, 0), GRat::zero());
        // s² = -1 on the weight-1 vectors
        let s2 = s.matrix.matmul(&s.matrix);
        assert_eq!(s2, SMat::identity(2).scale(&GRat::from_int(-1)));
    }

    #[test]
    fn torus_signs_match_matrices() {
        let data = cd(Series::D, 4);
        let rep = vector_rep_d(&data).unwrap();
        // sl2 partial case on each node
        for a in 0..4 {
            let lam = rep.basis_weights[rep.highest].clone();
            let sign = torus_sign_factor(&data, &[a], &[a], &lam).unwrap();
            let expect = if lam[a] % 2 == 0 { 1 } else { -1 };
            assert_eq!(sign, expect);
        }
        // identity σ' gives +1
        assert_eq!(torus_sign_factor(&data, &[0, 1], &[], &vec![1, 0, 0, 0]).unwrap(), 1);
        // length-additive words compose without sign on any weight
        // s_0 s_1 vs (s_0)(s_1): ℓ = 2
        let m01 = weyl_representative(&rep, &[0, 1]).matrix;
        let m0 = weyl_representative(&rep, &[0]).matrix;
        let m1 = weyl_representative(&rep, &[1]).matrix;
        assert_eq!(m0.matmul(&m1), m01);
    }

    #[test]
    fn torus_sign_matches_matrix_product_on_orbit() {
        let data = cd(Series::D, 3);
        let rep = normalize_orbit_basis(&vector_rep_d(&data).unwrap(), &data).unwrap();
        // σ = s_1 s_0, σ' = s_0 s_2 (0-indexed letters), both reduced
        let sigma = vec![1usize, 0];
        let sigma_p = vec![0usize, 2];
        let msigma = weyl_representative(&rep, &sigma).matrix;
        let msigma_p = weyl_representative(&rep, &sigma_p).matrix;
        let prod = msigma.matmul(&msigma_p);
        let mut concat = sigma.clone();
        concat.extend_from_slice(&sigma_p);
        let composed = reduce_word(&data, &concat);
        assert_eq!(weyl_length(&data, &composed), composed.len());
        let mcomp = weyl_representative(&rep, &composed).matrix;
        // on each weight basis vector: product = sign(λ) * composed
        for (i, lam) in rep.basis_weights.iter().enumerate() {
            let sign = torus_sign_factor(&data, &sigma, &sigma_p, lam).unwrap();
            let mut ei = vec![GRat::zero(); rep.dim];
            ei[i] = GRat::one();
            let lhs = prod.apply(&ei);
            let rhs_v = mcomp.apply(&ei);
            let rhs: Vec<GRat> =
                rhs_v.iter().map(|x| x.mul(&GRat::from_int(sign))).collect();
            assert_eq!(lhs, rhs, "basis {i}");
        }
    }

    #[test]
    fn orbit_normalization_properties() {
        let data = cd(Series::D, 4);
        for rep in [
            vector_rep_d(&data).unwrap(),
            spinor_reps_d(&data).unwrap().0,
            spinor_reps_d(&data).unwrap().1,
        ] {
            let n = normalize_orbit_basis(&rep, &data).unwrap();
            assert!(n.check_chevalley(&data.cartan));
            // highest-weight vector keeps the empty word
            assert_eq!(n.orbit_words[n.highest].as_deref(), Some(&[][..]));
            // every orbit word, applied to the highest vector, lands exactly
            // on the recorded basis vector with coefficient +1
            let letters: Vec<SMat> = (0..4).map(|a| simple_representative(&n, a)).collect();
            for (i, w) in n.orbit_words.iter().enumerate() {
                let Some(word) = w else { continue };
                let mut v = vec![GRat::zero(); n.dim];
                v[n.highest] = GRat::one();
                for &a in word.iter().rev() {
                    v = letters[a].apply(&v);
                }
                assert_eq!(v[i], GRat::one(), "component {i}");
                assert!(v.iter().enumerate().all(|(j, x)| j == i || x.is_zero()));
            }
        }
    }

    #[test]
    fn weyl_reps_permute_weight_spaces() {
        let data = cd(Series::D, 4);
        let rep = vector_rep_d(&data).unwrap();
        for a in 0..4 {
            let s = simple_representative(&rep, a);
            for (j, w) in rep.basis_weights.iter().enumerate() {
                let target = data.reflect(w, a);
                let mut ej = vec![GRat::zero(); rep.dim];
                ej[j] = GRat::one();
                let im = s.apply(&ej);
                for (i, x) in im.iter().enumerate() {
                    if !x.is_zero() {
                        assert_eq!(rep.basis_weights[i], target);
                    }
                }
            }
        }
    }

    #[test]
    fn root_vector_normalization() {
        for (s, r) in [(Series::A, 3), (Series::D, 4)] {
            let data = cd(s, r);
            let rep = match s {
                Series::A => defining_rep_a(&data).unwrap(),
                _ => vector_rep_d(&data).unwrap(),
            };
            let (ep, fp) = root_vectors(&rep, &data).unwrap();
            for (i, root) in data.positive_roots.iter().enumerate() {
                let mut hb = SMat::zeros(rep.dim, rep.dim);
                for c in 0..r {
                    if root[c] != 0 {
                        hb = hb.add(&rep.h[c].scale(&GRat::from_int(root[c])));
                    }
                }
                assert_eq!(ep[i].commutator(&fp[i]), hb);
            }
        }
    }
}
