//! Static Lie-algebra data for the simply-laced series: Cartan matrices,
//! root systems, fundamental weights, Weyl-group machinery, Coxeter height
//! functions, the Perron-Frobenius vector of the incidence matrix, and
//! spectra of the principal cyclic element on weight systems.
//!
//! Node numbering: A-series is the chain `1..r`. D-series is the chain
//! `1..r-2` with the two spinor nodes `r-1`, `r` attached to node `r-2`
//! (node 1 carries the vector representation). E-series chains `1..N-1`
//! with node `N` attached to node 3.

use std::collections::{HashMap, HashSet, VecDeque};

use num_complex::Complex64 as C64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, rat_i, rat_to_f64, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::D => 'D',
            Series::E => 'E',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub series: Series,
    pub rank: usize,
}

impl AlgebraSpec {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::D => rank >= 3,
            Series::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(AlgebraSpec { series, rank })
        } else {
            Err(Error::InvalidRank { series: series.letter(), rank })
        }
    }

    pub fn parse(series: &str, rank: usize) -> Result<Self> {
        let s = match series {
            "A" | "a" => Series::A,
            "D" | "d" => Series::D,
            "E" | "e" => Series::E,
            _ => return Err(Error::Schema(format!("unknown series {series}"))),
        };
        AlgebraSpec::new(s, rank)
    }
}

/// Dynkin labels of a weight, `λ(h_a)` per node, 0-indexed internally.
pub type Weight = Vec<i64>;

/// Static data for one algebra. Immutable after construction.
#[derive(Clone, Debug)]
pub struct CartanData {
    pub spec: AlgebraSpec,
    pub cartan: Vec<Vec<i64>>,
    pub incidence: Vec<Vec<i64>>,
    pub cartan_inv: Vec<Vec<Rat>>,
    pub coxeter_number: i64,
    /// 0 = even node, 1 = odd node; the distinguished node is even.
    pub node_parity: Vec<u8>,
    /// Node carrying the smallest fundamental representation (0-indexed).
    pub distinguished_node: usize,
    /// Dimension of the ambient orthogonal space for `simple_roots`.
    pub ambient_dim: usize,
    /// Simple roots in orthogonal coordinates.
    pub simple_roots: Vec<Vec<Rat>>,
    /// Fundamental weights in orthogonal coordinates.
    pub fundamental_weights: Vec<Vec<Rat>>,
    /// Positive roots as integer vectors over the simple-root basis.
    pub positive_roots: Vec<Vec<i64>>,
    /// Weyl vector in Dynkin labels (all ones).
    pub weyl_vector: Weight,
    /// Dimensions of the fundamental representations.
    pub fundamental_dims: Vec<u128>,
    /// Weyl group order.
    pub weyl_order: u128,
}

/// Adjacency list of the Dynkin diagram (0-indexed).
fn edges(spec: AlgebraSpec) -> Vec<(usize, usize)> {
    let r = spec.rank;
    match spec.series {
        Series::A => (0..r.saturating_sub(1)).map(|a| (a, a + 1)).collect(),
        Series::D => {
            let mut e: Vec<(usize, usize)> = (0..r - 3).map(|a| (a, a + 1)).collect();
            e.push((r - 3, r - 2));
            e.push((r - 3, r - 1));
            e
        }
        Series::E => {
            let mut e: Vec<(usize, usize)> = (0..r - 2).map(|a| (a, a + 1)).collect();
            e.push((2, r - 1));
            e
        }
    }
}

/// Bourbaki simple roots of E8 in R^8; E6/E7 use the first 6/7.
fn bourbaki_e_roots() -> Vec<Vec<Rat>> {
    let h = rat(1, 2);
    let mut a1 = vec![-h.clone(); 8];
    a1[0] = h.clone();
    a1[7] = h;
    let unit = |i: usize, j: usize, sj: i64| {
        let mut v = vec![Rat::zero(); 8];
        v[i] = rat_i(1);
        v[j] = rat_i(sj);
        v
    };
    vec![
        a1,
        unit(0, 1, 1),  // e1+e2
        unit(1, 0, -1), // e2-e1
        unit(2, 1, -1),
        unit(3, 2, -1),
        unit(4, 3, -1),
        unit(5, 4, -1),
        unit(6, 5, -1),
    ]
}

/// Map from our node numbering to Bourbaki numbering for the E-series.
fn e_to_bourbaki(rank: usize) -> Vec<usize> {
    // chain nodes 1,2,3,...,rank-1 map to 1,3,4,...,rank; branch node -> 2
    let mut m = vec![0usize; rank];
    m[0] = 0;
    for a in 1..rank - 1 {
        m[a] = a + 1;
    }
    m[rank - 1] = 1;
    m
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn invert_rational(m: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = m[i].iter().map(|&x| rat_i(x)).collect();
            row.extend((0..n).map(|j| if i == j { rat_i(1) } else { Rat::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero()).expect("Cartan invertible");
        aug.swap(col, piv);
        let d = aug[col][col].clone();
        for j in 0..2 * n {
            aug[col][j] = &aug[col][j] / &d;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for j in 0..2 * n {
                    let t = &f * &aug[col][j];
                    aug[r][j] = &aug[r][j] - &t;
                }
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Build the full [`CartanData`] for a spec.
pub fn build_cartan(spec: AlgebraSpec) -> Result<CartanData> {
    let r = spec.rank;
    let mut cartan = vec![vec![0i64; r]; r];
    for a in 0..r {
        cartan[a][a] = 2;
    }
    for (a, b) in edges(spec) {
        cartan[a][b] = -1;
        cartan[b][a] = -1;
    }
    let incidence: Vec<Vec<i64>> = (0..r)
        .map(|a| (0..r).map(|b| 2 * i64::from(a == b) - cartan[a][b]).collect())
        .collect();
    let cartan_inv = invert_rational(&cartan);

    // Simple roots in orthogonal coordinates.
    let (ambient_dim, simple_roots): (usize, Vec<Vec<Rat>>) = match spec.series {
        Series::A => {
            let n = r + 1;
            let roots = (0..r)
                .map(|a| {
                    let mut v = vec![Rat::zero(); n];
                    v[a] = rat_i(1);
                    v[a + 1] = rat_i(-1);
                    v
                })
                .collect();
            (n, roots)
        }
        Series::D => {
            let mut roots: Vec<Vec<Rat>> = (0..r - 1)
                .map(|a| {
                    let mut v = vec![Rat::zero(); r];
                    v[a] = rat_i(1);
                    v[a + 1] = rat_i(-1);
                    v
                })
                .collect();
            let mut last = vec![Rat::zero(); r];
            last[r - 2] = rat_i(1);
            last[r - 1] = rat_i(1);
            roots.push(last);
            (r, roots)
        }
        Series::E => {
            let all = bourbaki_e_roots();
            let map = e_to_bourbaki(r);
            let roots = (0..r).map(|a| all[map[a]].clone()).collect();
            (8, roots)
        }
    };

    // Sanity: the orthogonal embedding reproduces the Cartan matrix.
    for a in 0..r {
        for b in 0..r {
            let ip = dot(&simple_roots[a], &simple_roots[b]);
            if ip != rat_i(cartan[a][b]) {
                return Err(Error::Representation(format!(
                    "orthogonal embedding mismatch at ({a},{b})"
                )));
            }
        }
    }

    // Fundamental weights: ω_a = Σ_b (C^{-1})_{ab} α_b.
    let fundamental_weights: Vec<Vec<Rat>> = (0..r)
        .map(|a| {
            let mut v = vec![Rat::zero(); ambient_dim];
            for b in 0..r {
                for k in 0..ambient_dim {
                    v[k] = &v[k] + &(&cartan_inv[a][b] * &simple_roots[b][k]);
                }
            }
            v
        })
        .collect();

    // Positive roots by closure: in simply-laced systems α+α_a is a root
    // iff (α, α_a) = -1 for α ≠ -α_a.
    let mut positive_roots: Vec<Vec<i64>> = (0..r)
        .map(|a| {
            let mut v = vec![0i64; r];
            v[a] = 1;
            v
        })
        .collect();
    let mut seen: HashSet<Vec<i64>> = positive_roots.iter().cloned().collect();
    let mut frontier = positive_roots.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for root in &frontier {
            for a in 0..r {
                // (root, α_a) = Σ_b c_b C_{ba}
                let ip: i64 = (0..r).map(|b| root[b] * cartan[b][a]).sum();
                if ip == -1 {
                    let mut cand = root.clone();
                    cand[a] += 1;
                    if seen.insert(cand.clone()) {
                        positive_roots.push(cand.clone());
                        next.push(cand);
                    }
                }
            }
        }
        frontier = next;
    }
    positive_roots.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));

    let n_pos = positive_roots.len() as i64;
    let coxeter_number = match spec.series {
        Series::A => r as i64 + 1,
        Series::D => 2 * r as i64 - 2,
        Series::E => match r {
            6 => 12,
            7 => 18,
            _ => 30,
        },
    };
    // h·r = 2·#positive roots for simple algebras.
    if coxeter_number * r as i64 != 2 * n_pos {
        return Err(Error::Representation("Coxeter number / root count mismatch".into()));
    }

    let weyl_vector = vec![1i64; r];
    let mut data = CartanData {
        spec,
        cartan,
        incidence,
        cartan_inv,
        coxeter_number,
        node_parity: vec![0; r],
        distinguished_node: 0,
        ambient_dim,
        simple_roots,
        fundamental_weights,
        positive_roots,
        weyl_vector,
        fundamental_dims: vec![],
        weyl_order: 0,
    };

    data.fundamental_dims = (0..r)
        .map(|a| {
            let mut w = vec![0i64; r];
            w[a] = 1;
            weyl_dimension(&data, &w)
        })
        .collect();
    data.weyl_order = weyl_group_order(spec.series, r);

    // Distinguished node: smallest fundamental representation, ties to the
    // lowest index. The bipartition is graph distance parity from there.
    let distinguished = (0..r)
        .min_by_key(|&a| (data.fundamental_dims[a], a))
        .unwrap();
    data.distinguished_node = distinguished;
    let mut parity = vec![u8::MAX; r];
    parity[distinguished] = 0;
    let mut queue = VecDeque::from([distinguished]);
    while let Some(a) = queue.pop_front() {
        for b in 0..r {
            if data.incidence[a][b] != 0 && parity[b] == u8::MAX {
                parity[b] = 1 - parity[a];
                queue.push_back(b);
            }
        }
    }
    if parity.iter().any(|&p| p == u8::MAX) {
        return Err(Error::Representation("Dynkin diagram not connected".into()));
    }
    data.node_parity = parity;
    Ok(data)
}

fn weyl_group_order(series: Series, rank: usize) -> u128 {
    match series {
        Series::A => factorial(rank as u128 + 1),
        Series::D => (1u128 << (rank - 1)) * factorial(rank as u128),
        Series::E => match rank {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
    }
}

fn factorial(n: u128) -> u128 {
    (1..=n).product::<u128>().max(1)
}

impl CartanData {
    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn neighbors(&self, a: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&b| self.incidence[a][b] != 0).collect()
    }

    /// Node of the contragredient fundamental representation.
    pub fn contragredient_node(&self, a: usize) -> usize {
        let r = self.rank();
        match self.spec.series {
            Series::A => r - 1 - a,
            Series::D => {
                if r % 2 == 1 && a >= r - 2 {
                    // odd rank swaps the two spinor nodes
                    if a == r - 2 {
                        r - 1
                    } else {
                        r - 2
                    }
                } else {
                    a
                }
            }
            Series::E => {
                if r == 6 {
                    // diagram reflection: 1<->5, 2<->4 (0-indexed 0<->4, 1<->3)
                    match a {
                        0 => 4,
                        4 => 0,
                        1 => 3,
                        3 => 1,
                        other => other,
                    }
                } else {
                    a
                }
            }
        }
    }

    /// Labels of a simple root.
    pub fn simple_root_labels(&self, a: usize) -> Weight {
        self.cartan[a].clone()
    }

    /// Apply the simple reflection `s_a` to a weight in Dynkin labels.
    pub fn reflect(&self, w: &Weight, a: usize) -> Weight {
        let la = w[a];
        (0..self.rank()).map(|b| w[b] - la * self.cartan[a][b]).collect()
    }

    /// Dominant representative of the Weyl orbit of `w`.
    pub fn dominantize(&self, w: &Weight) -> Weight {
        let mut v = w.clone();
        loop {
            match (0..self.rank()).find(|&a| v[a] < 0) {
                Some(a) => v = self.reflect(&v, a),
                None => return v,
            }
        }
    }

    /// Full Weyl orbit of a weight.
    pub fn weyl_orbit(&self, w: &Weight) -> Vec<Weight> {
        let start = self.dominantize(w);
        let mut seen: HashSet<Weight> = HashSet::new();
        seen.insert(start.clone());
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(v) = queue.pop_front() {
            out.push(v.clone());
            for a in 0..self.rank() {
                if v[a] != 0 {
                    let im = self.reflect(&v, a);
                    if seen.insert(im.clone()) {
                        queue.push_back(im);
                    }
                }
            }
        }
        out
    }

    /// Orbit size via the stabilizer parabolic.
    pub fn orbit_size(&self, dominant: &Weight) -> u128 {
        let fixed: Vec<usize> = (0..self.rank()).filter(|&a| dominant[a] == 0).collect();
        self.weyl_order / parabolic_order(self, &fixed)
    }

    /// Inner product of weights given in Dynkin labels, normalized to
    /// (α, α) = 2 for all roots.
    pub fn weight_ip(&self, x: &Weight, y: &Weight) -> Rat {
        let mut acc = Rat::zero();
        for a in 0..self.rank() {
            if x[a] == 0 {
                continue;
            }
            for b in 0..self.rank() {
                if y[b] != 0 {
                    acc += &self.cartan_inv[a][b] * rat_i(x[a] * y[b]);
                }
            }
        }
        acc
    }

    /// (λ, α) for λ in labels and a root in simple-root coordinates.
    pub fn weight_root_ip(&self, labels: &Weight, root: &[i64]) -> i64 {
        (0..self.rank()).map(|a| labels[a] * root[a]).sum()
    }

    /// Orthogonal coordinates of a weight in Dynkin labels.
    pub fn weight_to_orthogonal(&self, w: &Weight) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.ambient_dim];
        for a in 0..self.rank() {
            if w[a] != 0 {
                for k in 0..self.ambient_dim {
                    v[k] = &v[k] + &(&self.fundamental_weights[a][k] * rat_i(w[a]));
                }
            }
        }
        v
    }
}

fn parabolic_order(data: &CartanData, nodes: &[usize]) -> u128 {
    // Decompose the induced subdiagram into connected components and
    // multiply the component Weyl orders.
    let set: HashSet<usize> = nodes.iter().copied().collect();
    let mut remaining = set.clone();
    let mut order = 1u128;
    while let Some(&start) = remaining.iter().next() {
        let mut comp = vec![start];
        remaining.remove(&start);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for b in 0..data.rank() {
                if data.incidence[a][b] != 0 && remaining.contains(&b) {
                    remaining.remove(&b);
                    comp.push(b);
                    queue.push_back(b);
                }
            }
        }
        order *= component_weyl_order(data, &comp);
    }
    order
}

fn component_weyl_order(data: &CartanData, comp: &[usize]) -> u128 {
    let n = comp.len();
    let degree = |a: usize| -> usize {
        comp.iter().filter(|&&b| b != a && data.incidence[a][b] != 0).count()
    };
    let branch = comp.iter().copied().filter(|&a| degree(a) == 3).count();
    if branch == 0 {
        return factorial(n as u128 + 1); // A_n
    }
    // One branch node: leg lengths decide D vs E.
    let b = comp.iter().copied().find(|&a| degree(a) == 3).unwrap();
    let mut legs: Vec<usize> = Vec::new();
    for &start in comp.iter().filter(|&&a| a != b && data.incidence[a][b] != 0) {
        let mut len = 1;
        let mut prev = b;
        let mut cur = start;
        loop {
            let next = comp
                .iter()
                .copied()
                .find(|&x| x != prev && x != cur && data.incidence[cur][x] != 0);
            match next {
                Some(x) => {
                    len += 1;
                    prev = cur;
                    cur = x;
                }
                None => break,
            }
        }
        legs.push(len);
    }
    legs.sort_unstable();
    match legs.as_slice() {
        [1, 1, _] => (1u128 << (n - 1)) * factorial(n as u128),
        [1, 2, 2] => 51_840,
        [1, 2, 3] => 2_903_040,
        [1, 2, 4] => 696_729_600,
        _ => panic!("unexpected subdiagram shape {legs:?}"),
    }
}

/// Weyl dimension formula, exact.
pub fn weyl_dimension(data: &CartanData, highest: &Weight) -> u128 {
    let mut num = num_bigint::BigInt::from(1);
    let mut den = num_bigint::BigInt::from(1);
    for root in &data.positive_roots {
        let rho_a: i64 = root.iter().sum();
        let lam_a = data.weight_root_ip(highest, root) + rho_a;
        num *= num_bigint::BigInt::from(lam_a);
        den *= num_bigint::BigInt::from(rho_a);
    }
    let q = num / den;
    q.to_u128().expect("dimension fits u128")
}

/// Weight system of an irreducible representation: dominant weights with
/// Freudenthal multiplicities and Weyl-orbit sizes.
#[derive(Clone, Debug)]
pub struct WeightSystem {
    pub highest: Weight,
    /// (dominant weight, multiplicity, orbit size)
    pub dominant_entries: Vec<(Weight, u64, u128)>,
    pub total_dim: u128,
}

impl WeightSystem {
    /// Multiplicity of an arbitrary weight.
    pub fn multiplicity(&self, data: &CartanData, w: &Weight) -> u64 {
        let d = data.dominantize(w);
        self.dominant_entries
            .iter()
            .find(|(dw, _, _)| *dw == d)
            .map(|(_, m, _)| *m)
            .unwrap_or(0)
    }

    /// Expand to the full list of (weight, multiplicity). Guarded against
    /// accidentally expanding astronomically large systems.
    pub fn expanded_entries(&self, data: &CartanData) -> Result<Vec<(Weight, u64)>> {
        let n_weights: u128 = self.dominant_entries.iter().map(|(_, _, s)| s).sum();
        if n_weights > 2_000_000 {
            return Err(Error::Representation(format!(
                "weight system too large to expand ({n_weights} weights)"
            )));
        }
        let mut out = Vec::with_capacity(n_weights as usize);
        for (dw, mult, _) in &self.dominant_entries {
            for w in data.weyl_orbit(dw) {
                out.push((w, *mult));
            }
        }
        Ok(out)
    }
}

/// Enumerate the dominant weights `μ ≤ λ` in the same root-lattice coset.
fn dominant_weights_below(data: &CartanData, highest: &Weight) -> Vec<Weight> {
    let r = data.rank();
    // (μ, ω_a) ≤ (λ, ω_a) for all a bounds each label of μ.
    let bound: Vec<Rat> = (0..r)
        .map(|a| {
            (0..r)
                .map(|b| &data.cartan_inv[b][a] * rat_i(highest[b]))
                .sum::<Rat>()
        })
        .collect();
    let mut label_bound = vec![0i64; r];
    for b in 0..r {
        let mut best: Option<Rat> = None;
        for a in 0..r {
            let q = &bound[a] / &data.cartan_inv[b][a];
            best = Some(match best {
                None => q,
                Some(cur) => {
                    if q < cur {
                        q
                    } else {
                        cur
                    }
                }
            });
        }
        label_bound[b] = best.unwrap().floor().to_integer().to_i64().unwrap_or(0).max(0);
    }
    let mut out = Vec::new();
    let mut mu = vec![0i64; r];
    enumerate_box(&mut mu, 0, &label_bound, &mut |mu| {
        // λ - μ must be a nonnegative integer combination of simple roots.
        let mut ok = true;
        let mut coeffs = vec![Rat::zero(); r];
        for a in 0..r {
            let mut acc = Rat::zero();
            for b in 0..r {
                acc += &data.cartan_inv[a][b] * rat_i(highest[b] - mu[b]);
            }
            if acc.is_negative() || !acc.is_integer() {
                ok = false;
                break;
            }
            coeffs[a] = acc;
        }
        if ok {
            out.push(mu.to_vec());
        }
    });
    out
}

fn enumerate_box(mu: &mut Vec<i64>, idx: usize, bound: &[i64], f: &mut impl FnMut(&[i64])) {
    if idx == bound.len() {
        f(mu);
        return;
    }
    for v in 0..=bound[idx] {
        mu[idx] = v;
        enumerate_box(mu, idx + 1, bound, f);
    }
}

/// Weight system via Freudenthal's recursion in exact rational arithmetic.
pub fn weight_system_of(data: &CartanData, highest: &Weight) -> WeightSystem {
    let rho = &data.weyl_vector;
    let lam_rho: Weight = highest.iter().zip(rho.iter()).map(|(a, b)| a + b).collect();
    let norm_top = data.weight_ip(&lam_rho, &lam_rho);

    let mut dominants = dominant_weights_below(data, highest);
    // Sort by decreasing height of μ so that every μ+kα needed is earlier.
    let height = |w: &Weight| -> Rat {
        let diff: Weight = highest.iter().zip(w.iter()).map(|(a, b)| a - b).collect();
        let mut acc = Rat::zero();
        for a in 0..data.rank() {
            for b in 0..data.rank() {
                acc += &data.cartan_inv[a][b] * rat_i(diff[b]);
            }
        }
        acc
    };
    dominants.sort_by(|x, y| height(x).cmp(&height(y)));

    let mut mult: HashMap<Weight, u64> = HashMap::new();
    mult.insert(highest.clone(), 1);
    let mut entries: Vec<(Weight, u64, u128)> = Vec::with_capacity(dominants.len());
    for mu in &dominants {
        if mu == highest {
            entries.push((mu.clone(), 1, data.orbit_size(mu)));
            continue;
        }
        let mu_rho: Weight = mu.iter().zip(rho.iter()).map(|(a, b)| a + b).collect();
        let denom = &norm_top - &data.weight_ip(&mu_rho, &mu_rho);
        let mut rhs = Rat::zero();
        for root in &data.positive_roots {
            let root_labels: Weight = (0..data.rank())
                .map(|b| (0..data.rank()).map(|a| root[a] * data.cartan[a][b]).sum())
                .collect();
            let mut k = 1i64;
            loop {
                let wk: Weight = (0..data.rank())
                    .map(|b| mu[b] + k * root_labels[b])
                    .collect();
                let dom = data.dominantize(&wk);
                let m = match mult.get(&dom) {
                    Some(&m) => m,
                    None => break,
                };
                if m == 0 {
                    break;
                }
                let ip = data.weight_root_ip(&wk, root);
                rhs += rat_i(2 * m as i64 * ip);
                k += 1;
            }
        }
        let m = (&rhs / &denom).to_integer().to_u64().expect("multiplicity fits u64");
        mult.insert(mu.clone(), m);
        if m > 0 {
            entries.push((mu.clone(), m, data.orbit_size(mu)));
        }
    }
    let total_dim: u128 = entries.iter().map(|(_, m, s)| *m as u128 * s).sum();
    WeightSystem { highest: highest.clone(), dominant_entries: entries, total_dim }
}

/// Weight system of a fundamental representation (1-indexed node).
pub fn weight_system(data: &CartanData, node: usize) -> Result<WeightSystem> {
    if node == 0 || node > data.rank() {
        return Err(Error::IndexRange(format!("node {node} of rank {}", data.rank())));
    }
    let mut w = vec![0i64; data.rank()];
    w[node - 1] = 1;
    Ok(weight_system_of(data, &w))
}

/// `[n]_q = q^{n-1} + q^{n-3} + … + q^{1-n}`, with `[0]=0`, `[-n]=-[n]`.
pub fn deformed_number(n: i64, q: C64) -> C64 {
    if n == 0 {
        return C64::new(0.0, 0.0);
    }
    let m = n.abs();
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..m {
        acc += q.powi((m - 1 - 2 * k) as i32);
    }
    if n > 0 {
        acc
    } else {
        -acc
    }
}

/// Coxeter height function on Dynkin nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightFunction {
    pub p: Vec<i64>,
}

impl HeightFunction {
    pub fn new(data: &CartanData, p: Vec<i64>) -> Result<Self> {
        if p.len() != data.rank() {
            return Err(Error::InvalidHeightFunction("wrong length".into()));
        }
        for a in 0..data.rank() {
            for b in a + 1..data.rank() {
                if data.incidence[a][b] != 0 && (p[a] - p[b]).abs() != 1 {
                    return Err(Error::InvalidHeightFunction(format!(
                        "|p_{}-p_{}| != 1 on an edge",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        // Translate so that values are even exactly at even nodes.
        let shift = (p[data.distinguished_node] % 2 + 2) % 2;
        let p = p.into_iter().map(|x| x - shift as i64).collect::<Vec<_>>();
        for a in 0..data.rank() {
            if (p[a] % 2 + 2) % 2 != data.node_parity[a] as i64 {
                return Err(Error::InvalidHeightFunction(
                    "parity incompatible with the node bipartition".into(),
                ));
            }
        }
        Ok(HeightFunction { p })
    }

    /// The alternating height function: 0 on even nodes, 1 on odd nodes.
    pub fn alternating(data: &CartanData) -> Self {
        HeightFunction { p: data.node_parity.iter().map(|&x| x as i64).collect() }
    }
}

/// Reduced word of the Coxeter element attached to a height function:
/// `s_a` precedes `s_b` for adjacent nodes iff `p_a > p_b`. Returns
/// 0-indexed node letters.
pub fn coxeter_word(data: &CartanData, p: &HeightFunction) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..data.rank()).collect();
    idx.sort_by_key(|&a| (-p.p[a], a));
    idx
}

/// Perron-Frobenius data of the incidence matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PFData {
    pub mu: Vec<f64>,
    pub gamma: C64,
}

/// Largest-eigenvector of the incidence matrix with eigenvalue
/// `2 cos(π/h)`, refined by one exact-eigenvalue linear solve and
/// normalized to the closed-form value at the normalization node
/// (vector node for A/D, distinguished node for E).
pub fn pf_vector(data: &CartanData) -> Result<PFData> {
    let r = data.rank();
    let h = data.coxeter_number as f64;
    let lambda = 2.0 * (std::f64::consts::PI / h).cos();
    // Power iteration on I + 2·Id keeps the spectrum positive.
    let mut v = vec![1.0f64; r];
    for _ in 0..2000 {
        let mut w = vec![0.0f64; r];
        for a in 0..r {
            let mut acc = 2.0 * v[a];
            for b in 0..r {
                if data.incidence[a][b] != 0 {
                    acc += v[b];
                }
            }
            w[a] = acc;
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in w.iter_mut() {
            *x /= n;
        }
        v = w;
    }
    // Exact-eigenvalue refinement: replace one row with a normalization
    // equation and solve (I - λ)μ = 0, μ_pin = 1.
    let pin = 0usize;
    let mut m = crate::linalg::CMat::zeros(r, r);
    let mut b = vec![C64::new(0.0, 0.0); r];
    for a in 0..r {
        if a == pin {
            m[(a, pin)] = C64::new(1.0, 0.0);
            b[a] = C64::new(1.0, 0.0);
            continue;
        }
        for c in 0..r {
            let mut val = if a == c { -lambda } else { 0.0 };
            if data.incidence[a][c] != 0 {
                val += 1.0;
            }
            m[(a, c)] = C64::new(val, 0.0);
        }
    }
    let sol = crate::linalg::solve(&m, &b)
        .map_err(|e| Error::EigenNonConvergence(format!("PF refinement failed: {e}")))?;
    let mut mu: Vec<f64> = sol.iter().map(|z| z.re).collect();
    // residual check against power iteration direction
    let dotpv: f64 = mu.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    if dotpv < 0.0 {
        for x in mu.iter_mut() {
            *x = -*x;
        }
    }
    // Normalization node: vector node for A/D, distinguished node for E.
    let norm_node = match data.spec.series {
        Series::A | Series::D => 0,
        Series::E => data.distinguished_node,
    };
    let target = match data.spec.series {
        // closed form [a]_{γ^{1/2}} at a=1 is 1; E has no closed form, pin 1.
        _ => 1.0,
    };
    let scale = target / mu[norm_node];
    for x in mu.iter_mut() {
        *x *= scale;
    }
    // Residual of the eigen-equation.
    let mut resid = 0.0f64;
    for a in 0..r {
        let mut acc = -lambda * mu[a];
        for b in 0..r {
            if data.incidence[a][b] != 0 {
                acc += mu[b];
            }
        }
        resid = resid.max(acc.abs());
    }
    if resid > 1e-12 {
        return Err(Error::EigenNonConvergence(format!("PF residual {resid}")));
    }
    if mu.iter().any(|&x| x <= 0.0) {
        return Err(Error::EigenNonConvergence("PF vector not positive".into()));
    }
    let gamma = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / h);
    Ok(PFData { mu, gamma })
}

impl PFData {
    /// `γ^{k/2}` with a consistent branch.
    pub fn gamma_half_pow(&self, k: i64) -> C64 {
        let theta = self.gamma.arg() / 2.0;
        C64::from_polar(1.0, theta * k as f64)
    }
}

/// Eigenvalue of the principal cyclic element on a weight, for a height
/// function `p`: `Σ_a γ^{p_a/2} μ_a λ(h_a)`.
pub fn lambda_eigenvalue(data: &CartanData, w: &Weight, p: &HeightFunction, pf: &PFData) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..data.rank() {
        if w[a] != 0 {
            acc += pf.gamma_half_pow(p.p[a]) * pf.mu[a] * w[a] as f64;
        }
    }
    acc
}

/// Spectrum of the principal cyclic element on a full weight system.
pub fn lambda_spectrum(
    data: &CartanData,
    ws: &WeightSystem,
    p: &HeightFunction,
    pf: &PFData,
) -> Result<Vec<C64>> {
    let mut out = Vec::new();
    for (w, m) in ws.expanded_entries(data)? {
        let v = lambda_eigenvalue(data, &w, p, pf);
        for _ in 0..m {
            out.push(v);
        }
    }
    Ok(out)
}

/// Greedy multiset match: max distance between paired elements, pairing each
/// element of `a` with the nearest unused element of `b`.
pub fn multiset_match_distance(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

/// Convert Dynkin labels to orthogonal coordinates for the D-series.
pub fn orthogonal_convert(data: &CartanData, w: &Weight) -> Result<Vec<Rat>> {
    if data.spec.series != Series::D {
        return Err(Error::WrongSeries { expected: 'D', got: data.spec.series.letter() });
    }
    Ok(data.weight_to_orthogonal(w))
}

pub fn rat_vec_to_f64(v: &[Rat]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cd(series: Series, rank: usize) -> CartanData {
        build_cartan(AlgebraSpec::new(series, rank).unwrap()).unwrap()
    }

    #[test]
    fn cartan_basics() {
        let d4 = cd(Series::D, 4);
        assert_eq!(d4.coxeter_number, 6);
        // bifurcation at node 2 (0-indexed 1)
        assert_eq!(d4.neighbors(1), vec![0, 2, 3]);
        let a1 = cd(Series::A, 1);
        assert_eq!(a1.cartan, vec![vec![2]]);
        assert_eq!(a1.coxeter_number, 2);
        let e8 = cd(Series::E, 8);
        assert_eq!(e8.coxeter_number, 30);
        assert_eq!(e8.positive_roots.len(), 120);
        assert!(AlgebraSpec::new(Series::D, 2).is_err());
        assert!(AlgebraSpec::new(Series::E, 9).is_err());
    }

    #[test]
    fn parity_and_distinguished() {
        let d4 = cd(Series::D, 4);
        assert_eq!(d4.distinguished_node, 0);
        assert_eq!(d4.node_parity, vec![0, 1, 0, 0]);
        let d3 = cd(Series::D, 3);
        // spinors are 4-dimensional, vector is 6: node 2 is distinguished
        assert_eq!(d3.distinguished_node, 1);
        assert_eq!(d3.node_parity, vec![1, 0, 0]);
        let e7 = cd(Series::E, 7);
        assert_eq!(e7.fundamental_dims[5], 56);
        assert_eq!(e7.distinguished_node, 5);
    }

    #[test]
    fn fundamental_dimensions() {
        let e6 = cd(Series::E, 6);
        assert_eq!(e6.fundamental_dims[0], 27);
        assert_eq!(e6.fundamental_dims[5], 78); // adjoint at the branch tip
        let e8 = cd(Series::E, 8);
        assert_eq!(e8.fundamental_dims[6], 248);
        let d5 = cd(Series::D, 5);
        assert_eq!(d5.fundamental_dims, vec![10, 45, 120, 16, 16]);
    }

    #[test]
    fn weight_system_dims_match_weyl_formula() {
        for (s, r) in [
            (Series::A, 3),
            (Series::A, 8),
            (Series::D, 4),
            (Series::D, 6),
            (Series::E, 6),
            (Series::E, 7),
        ] {
            let data = cd(s, r);
            for a in 1..=r {
                let ws = weight_system(&data, a).unwrap();
                assert_eq!(
                    ws.total_dim, data.fundamental_dims[a - 1],
                    "{s:?}{r} node {a}"
                );
            }
        }
    }

    #[test]
    fn e8_weight_system_dims() {
        let data = cd(Series::E, 8);
        for a in 1..=8 {
            let ws = weight_system(&data, a).unwrap();
            assert_eq!(ws.total_dim, data.fundamental_dims[a - 1], "node {a}");
        }
        // includes the 6.9-billion-dimensional node-3 representation
        assert_eq!(data.fundamental_dims[2], 6_899_079_264);
    }

    #[test]
    fn deformed_number_values() {
        let q = C64::from_polar(1.0, std::f64::consts::PI / 6.0);
        assert!((deformed_number(1, q) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let two = deformed_number(2, q);
        assert!((two - (q + 1.0 / q)).norm() < 1e-15);
        let three = deformed_number(3, q);
        assert!((three - C64::new(2.0, 0.0)).norm() < 1e-14);
        // [n](q - 1/q) = q^n - q^-n
        for n in -6..=6 {
            let lhs = deformed_number(n, q) * (q - 1.0 / q);
            let rhs = q.powi(n as i32) - q.powi(-n as i32);
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn pf_closed_forms() {
        let d4 = cd(Series::D, 4);
        let pf = pf_vector(&d4).unwrap();
        let g = pf.gamma_half_pow(1);
        // μ = (1, √3, 1, 1): [a]_{γ^{1/2}} and half-[r-1] at the forks
        assert!((pf.mu[0] - 1.0).abs() < 1e-12);
        assert!((pf.mu[1] - 3.0f64.sqrt()).abs() < 1e-12);
        assert!((pf.mu[2] - 1.0).abs() < 1e-12);
        assert!((pf.mu[3] - 1.0).abs() < 1e-12);
        for r in 3..=6 {
            let d = cd(Series::D, r);
            let pf = pf_vector(&d).unwrap();
            let g2 = pf.gamma_half_pow(1);
            for a in 1..=(r - 2) {
                let expect = deformed_number(a as i64, g2).re;
                assert!((pf.mu[a - 1] - expect).abs() < 1e-12, "D{r} mu_{a}");
            }
            let expect = 0.5 * deformed_number(r as i64 - 1, g2).re;
            assert!((pf.mu[r - 2] - expect).abs() < 1e-12);
            assert!((pf.mu[r - 1] - expect).abs() < 1e-12);
        }
        let a1 = cd(Series::A, 1);
        let pf = pf_vector(&a1).unwrap();
        assert_eq!(pf.mu, vec![1.0]);
        let _ = g;
    }

    #[test]
    fn coxeter_word_rules() {
        let d4 = cd(Series::D, 4);
        let p = HeightFunction::alternating(&d4);
        let w = coxeter_word(&d4, &p);
        // odd nodes first, then even nodes
        assert_eq!(w, vec![1, 0, 2, 3]);
        let a3 = cd(Series::A, 3);
        let p = HeightFunction::new(&a3, vec![0, 1, 2]).unwrap();
        assert_eq!(coxeter_word(&a3, &p), vec![2, 1, 0]);
        // translation invariance
        let p2 = HeightFunction::new(&a3, vec![2, 3, 4]).unwrap();
        assert_eq!(coxeter_word(&a3, &p2), coxeter_word(&a3, &p));
    }

    #[test]
    fn lambda_spectrum_gamma_closed() {
        let d4 = cd(Series::D, 4);
        let pf = pf_vector(&d4).unwrap();
        let p = HeightFunction::alternating(&d4);
        let adj = weight_system(&d4, 2).unwrap();
        assert_eq!(adj.total_dim, 28);
        let spec = lambda_spectrum(&d4, &adj, &p, &pf).unwrap();
        let rotated: Vec<C64> = spec.iter().map(|z| z * pf.gamma).collect();
        assert!(multiset_match_distance(&spec, &rotated) < 1e-10);
        let nonzero = spec.iter().filter(|z| z.norm() > 1e-9).count();
        assert_eq!(nonzero, 24);
    }

    #[test]
    fn orthogonal_convert_rows() {
        let d5 = cd(Series::D, 5);
        let mut w = vec![0i64; 5];
        w[0] = 1;
        let eps = orthogonal_convert(&d5, &w).unwrap();
        assert_eq!(eps[0], rat_i(1));
        assert!(eps[1..].iter().all(|x| x.is_zero()));
        let mut w = vec![0i64; 5];
        w[4] = 1;
        let eps = orthogonal_convert(&d5, &w).unwrap();
        assert!(eps.iter().all(|x| *x == rat(1, 2)));
        let zero = vec![0i64; 5];
        let eps = orthogonal_convert(&d5, &zero).unwrap();
        assert!(eps.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn contragredient_nodes() {
        let a3 = cd(Series::A, 3);
        assert_eq!(a3.contragredient_node(0), 2);
        let d5 = cd(Series::D, 5);
        assert_eq!(d5.contragredient_node(3), 4);
        assert_eq!(d5.contragredient_node(0), 0);
        let d4 = cd(Series::D, 4);
        assert_eq!(d4.contragredient_node(2), 2);
        let e6 = cd(Series::E, 6);
        assert_eq!(e6.contragredient_node(0), 4);
        assert_eq!(e6.contragredient_node(1), 3);
        assert_eq!(e6.contragredient_node(5), 5);
    }
}
