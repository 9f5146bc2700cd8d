//! Chevalley basis: structure constants n_{α,β} = ±1 and the bracket on
//! g = h ⊕ ⊕ g_α.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::rootsys::RootSystem;

#[derive(Clone, Debug)]
pub struct StructureConstants {
    pub roots: RootSystem,
    table: Vec<i8>,
    sums: Vec<Option<u32>>,
    cartan: Vec<Vec<i64>>,
}

/// Frenkel–Kac sign ε(α,β) = (−1)^{Σ aᵢ bⱼ mᵢⱼ}, mᵢⱼ = 1 for i = j and for
/// adjacent i < j.
fn epsilon(m: &[Vec<i64>], a: &[i64], b: &[i64]) -> i8 {
    let mut e = 0i64;
    for (i, &ai) in a.iter().enumerate() {
        if ai != 0 {
            for (j, &bj) in b.iter().enumerate() {
                e += ai * m[i][j] * bj;
            }
        }
    }
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn cocycle_matrix(rs: &RootSystem) -> Vec<Vec<i64>> {
    let n = rs.rank;
    let unit = |i: usize| {
        let mut e = vec![0; n];
        e[i] = 1;
        e
    };
    (0..n)
        .map(|i| (0..n).map(|j| (i == j || (i < j && rs.dot(&unit(i), &unit(j)) == 1)) as i64).collect())
        .collect()
}

pub fn compute_structure_constants(rs: &RootSystem) -> StructureConstants {
    let r = rs.len();
    let p = rs.num_positive();
    let m = cocycle_matrix(rs);
    let mut sums = vec![None; r * r];
    for a in 0..r {
        for b in 0..r {
            sums[a * r + b] = rs.sum_index(a, b).map(|s| s as u32);
        }
    }
    // Gauge s_γ on positive roots; x_γ = s_γE_γ, x_{−γ} = −s_γE_{−γ}.
    let mut s = vec![1i8; p];
    for g in 0..p {
        if rs.simple_node(g).is_some() {
            continue;
        }
        let (a, b) = (0..g)
            .find_map(|a| {
                let d: Vec<i64> = rs.root(g).iter().zip(rs.root(a)).map(|(x, y)| x - y).collect();
                rs.index_of(&d).filter(|&b| rs.is_positive(b)).map(|b| (a, b))
            })
            .expect("non-simple positive root has a decomposition");
        s[g] = epsilon(&m, rs.root(a), rs.root(b)) * s[a] * s[b];
    }
    let sigma = |i: usize| if i < p { s[i] } else { -s[i - p] };
    let mut table = vec![0i8; r * r];
    for a in 0..r {
        for b in 0..r {
            if let Some(c) = sums[a * r + b] {
                let c = c as usize;
                table[a * r + b] = sigma(a) * sigma(b) * sigma(c) * epsilon(&m, rs.root(a), rs.root(b));
            }
        }
    }
    let n = rs.rank;
    let cartan = (0..r)
        .map(|a| {
            (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    -rs.dot(rs.root(a), &e)
                })
                .collect()
        })
        .collect();
    StructureConstants { roots: rs.clone(), table, sums, cartan }
}

impl StructureConstants {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    pub fn n(&self, a: usize, b: usize) -> i8 {
        self.table[a * self.len() + b]
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sums[a * self.len() + b].map(|x| x as usize)
    }

    /// ⟨α, Cᵢ⟩ for root index `a`, node `i` 0-based.
    pub fn cartan_pairing(&self, a: usize, i: usize) -> i64 {
        self.cartan[a][i]
    }

    /// Flip n(α,β) and n(β,α) together; used to build broken tables.
    pub fn flip(&mut self, a: usize, b: usize) {
        let r = self.len();
        self.table[a * r + b] = -self.table[a * r + b];
        self.table[b * r + a] = -self.table[b * r + a];
    }

    /// All nonzero (α, β, n) with α, β indices.
    pub fn entries(&self) -> Vec<(usize, usize, i8)> {
        let r = self.len();
        let mut v = Vec::new();
        for a in 0..r {
            for b in 0..r {
                let x = self.n(a, b);
                if x != 0 {
                    v.push((a, b, x));
                }
            }
        }
        v
    }

    pub fn dimension(&self) -> usize {
        self.len() + self.rank()
    }

    /// ad(x_α) on the basis (x_β for all roots, then h₁…h_n), as
    /// (row, col, value) triples.
    pub fn ad_root(&self, a: usize) -> Vec<(usize, usize, i64)> {
        let r = self.len();
        let mut out = Vec::new();
        for b in 0..r {
            if let Some(c) = self.sum(a, b) {
                out.push((c, b, self.n(a, b) as i64));
            } else if b == self.roots.neg(a) {
                for (i, &x) in self.roots.root(a).iter().enumerate() {
                    if x != 0 {
                        out.push((r + i, b, x));
                    }
                }
            }
        }
        for i in 0..self.rank() {
            let v = -self.cartan_pairing(a, i);
            if v != 0 {
                out.push((a, r + i, v));
            }
        }
        out.sort();
        out
    }
}

/// h-part in the basis h₁…h_n plus root components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement {
    pub h: Vec<BigRational>,
    pub coeff: BTreeMap<usize, BigRational>,
}

impl LieElement {
    pub fn zero(n: usize) -> Self {
        LieElement { h: vec![BigRational::zero(); n], coeff: BTreeMap::new() }
    }

    pub fn root(n: usize, a: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeff.insert(a, BigRational::one());
        e
    }

    /// h_{i+1} for 0-based `i`.
    pub fn cartan(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.h[i] = BigRational::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(Zero::is_zero) && self.coeff.values().all(Zero::is_zero)
    }

    fn add_root(&mut self, a: usize, c: BigRational) {
        let e = self.coeff.entry(a).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeff.remove(&a);
        }
    }

    pub fn add(&self, o: &LieElement) -> LieElement {
        let mut r = self.clone();
        for (x, y) in r.h.iter_mut().zip(&o.h) {
            *x += y;
        }
        for (&a, c) in &o.coeff {
            r.add_root(a, c.clone());
        }
        r
    }

    pub fn scale(&self, c: &BigRational) -> LieElement {
        let mut r = LieElement::zero(self.h.len());
        if c.is_zero() {
            return r;
        }
        r.h = self.h.iter().map(|x| x * c).collect();
        r.coeff = self.coeff.iter().map(|(&a, x)| (a, x * c)).collect();
        r
    }

    pub fn sub(&self, o: &LieElement) -> LieElement {
        self.add(&o.scale(&-BigRational::one()))
    }
}

pub fn bracket(sc: &StructureConstants, x: &LieElement, y: &LieElement) -> LieElement {
    let n = sc.rank();
    let mut out = LieElement::zero(n);
    let hpair = |h: &[BigRational], a: usize| -> BigRational {
        h.iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(sc.cartan_pairing(a, i))))
            .sum()
    };
    for (&b, cb) in &y.coeff {
        let w = hpair(&x.h, b);
        if !w.is_zero() {
            out.add_root(b, w * cb);
        }
    }
    for (&a, ca) in &x.coeff {
        let w = hpair(&y.h, a);
        if !w.is_zero() {
            out.add_root(a, -(w * ca));
        }
    }
    for (&a, ca) in &x.coeff {
        for (&b, cb) in &y.coeff {
            let c = ca * cb;
            if let Some(s) = sc.sum(a, b) {
                out.add_root(s, c * BigRational::from_integer(BigInt::from(sc.n(a, b))));
            } else if b == sc.roots.neg(a) {
                for (i, &k) in sc.roots.root(a).iter().enumerate() {
                    out.h[i] += &c * BigRational::from_integer(BigInt::from(k));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JacobiMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiReport {
    pub mode: JacobiMode,
    pub checked: u64,
    pub nontrivial: u64,
    pub witness: Option<[usize; 3]>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Outcome for one triple: `None` if no identity applies, else whether it holds
/// and whether it had at least two nonzero terms.
fn check_triple(sc: &StructureConstants, a: usize, b: usize, c: usize) -> Option<(bool, bool)> {
    let rs = &sc.roots;
    if b == rs.neg(a) || c == rs.neg(b) || a == rs.neg(c) {
        return None;
    }
    let ab = sc.sum(a, b);
    let bc = sc.sum(b, c);
    let ca = sc.sum(c, a);
    let term = |s: Option<usize>, x: usize, y: usize, z: usize| -> i64 {
        match s {
            Some(s) => sc.n(x, y) as i64 * sc.n(s, z) as i64,
            None => 0,
        }
    };
    if let Some(s) = ab {
        if c == rs.neg(s) {
            // α + β + γ = 0: n_{α,β} = n_{β,γ} = n_{γ,α}
            let (x, y, z) = (sc.n(a, b), sc.n(b, c), sc.n(c, a));
            return Some((x == y && y == z && x != 0, true));
        }
    }
    let t = [term(ab, a, b, c), term(bc, b, c, a), term(ca, c, a, b)];
    let nz = t.iter().filter(|&&x| x != 0).count();
    if nz == 0 {
        return None;
    }
    Some((t.iter().sum::<i64>() == 0, nz >= 2))
}

pub fn verify_jacobi(sc: &StructureConstants, mode: JacobiMode) -> JacobiReport {
    let r = sc.len();
    match mode {
        JacobiMode::Exhaustive => {
            let per: Vec<(u64, u64, Option<[usize; 3]>)> = (0..r)
                .into_par_iter()
                .map(|a| {
                    let (mut checked, mut nontrivial, mut witness) = (0u64, 0u64, None);
                    for b in 0..r {
                        for c in 0..r {
                            if let Some((ok, nt)) = check_triple(sc, a, b, c) {
                                checked += 1;
                                nontrivial += nt as u64;
                                if !ok && witness.is_none() {
                                    witness = Some([a, b, c]);
                                }
                            }
                        }
                    }
                    (checked, nontrivial, witness)
                })
                .collect();
            JacobiReport {
                mode,
                checked: per.iter().map(|x| x.0).sum(),
                nontrivial: per.iter().map(|x| x.1).sum(),
                witness: per.iter().find_map(|x| x.2),
            }
        }
        JacobiMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let partners: Vec<Vec<usize>> =
                (0..r).map(|a| (0..r).filter(|&b| sc.sum(a, b).is_some()).collect()).collect();
            let (mut checked, mut nontrivial, mut witness) = (0u64, 0u64, None);
            while (checked as usize) < samples {
                let a = rng.gen_range(0..r);
                let b = partners[a][rng.gen_range(0..partners[a].len())];
                let s = sc.sum(a, b).unwrap();
                let c = partners[s][rng.gen_range(0..partners[s].len())];
                if let Some((ok, nt)) = check_triple(sc, a, b, c) {
                    checked += 1;
                    nontrivial += nt as u64;
                    if !ok && witness.is_none() {
                        witness = Some([a, b, c]);
                    }
                }
            }
            JacobiReport { mode, checked, nontrivial, witness }
        }
    }
}
