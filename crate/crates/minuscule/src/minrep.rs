//! The minuscule representation V₀ = ℂ^I: x_α v_l = n_{α,w} v_{l+α}.

use std::collections::{BTreeMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::chevalley::StructureConstants;
use crate::curves::CurveSet;
use crate::error::{Error, Result};
use crate::linalg::Eliminator;

/// Signed partial permutation: `map[j] = Some((i, s))` means x v_j = s v_i.
pub type SignedPerm = Vec<Option<(usize, i8)>>;

#[derive(Clone, Debug)]
pub struct RepAction {
    pub dim: usize,
    pub rank: usize,
    /// One operator per root index of the structure constants.
    pub generators: Vec<SignedPerm>,
    /// `cartan[i][l]`: eigenvalue of h_{i+1} on v_l.
    pub cartan: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignEntry {
    pub alpha: usize,
    pub curve: usize,
    pub target: usize,
    pub sign: i8,
}

fn compose(a: &SignedPerm, b: &SignedPerm, j: usize) -> Option<(usize, i64)> {
    let (k, s) = b[j]?;
    let (i, t) = a[k]?;
    Some((i, (s * t) as i64))
}

/// [A, B] as a signed partial permutation, scaled by `c`.
fn commutator(a: &SignedPerm, b: &SignedPerm, c: i8) -> Result<SignedPerm> {
    let n = a.len();
    let mut out = vec![None; n];
    for (j, slot) in out.iter_mut().enumerate() {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        if let Some((i, s)) = compose(a, b, j) {
            *acc.entry(i).or_insert(0) += s;
        }
        if let Some((i, s)) = compose(b, a, j) {
            *acc.entry(i).or_insert(0) -= s;
        }
        acc.retain(|_, v| *v != 0);
        match acc.len() {
            0 => {}
            1 => {
                let (&i, &v) = acc.iter().next().unwrap();
                if v.abs() != 1 {
                    return Err(Error::Invariant(format!("commutator entry {v} at ({i}, {j})")));
                }
                *slot = Some((i, v as i8 * c));
            }
            _ => return Err(Error::Invariant(format!("commutator is not a partial permutation at {j}"))),
        }
    }
    Ok(out)
}

fn transpose(a: &SignedPerm) -> SignedPerm {
    let mut out = vec![None; a.len()];
    for (j, e) in a.iter().enumerate() {
        if let Some((i, s)) = *e {
            out[i] = Some((j, s));
        }
    }
    out
}

/// Signs of x_{Cᵢ} on the weight graph. Fixing +1 on a spanning tree from
/// C₀ᵏ, the remaining relations are the commuting squares of orthogonal
/// nodes, x(w,i)·x(w+Cᵢ,j) = x(w,j)·x(w+Cⱼ,i); they are homogeneous, so the
/// propagated solution is +1 on every edge. The squares are re-checked.
pub fn solve_simple_signs(cs: &CurveSet) -> Result<Vec<SignedPerm>> {
    let n = cs.rank();
    let dim = cs.len();
    let unit = |k: usize| {
        let mut e = vec![0; n];
        e[k - 1] = 1;
        e
    };
    let mut gens: Vec<SignedPerm> = vec![vec![None; dim]; n];
    for j in 0..dim {
        for k in 1..=n {
            if let Some(i) = cs.shift(j, &unit(k)) {
                gens[k - 1][j] = Some((i, 1));
            }
        }
    }
    let mut reached = vec![false; dim];
    reached[dim - 1] = true;
    let mut q = VecDeque::from([dim - 1]);
    while let Some(v) = q.pop_front() {
        for g in &gens {
            if let Some((i, _)) = g[v] {
                if !reached[i] {
                    reached[i] = true;
                    q.push_back(i);
                }
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(Error::Unsatisfiable("weight graph is disconnected".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if cs.lattice.gram[i + 1][j + 1] != 0 {
                continue;
            }
            for w in 0..dim {
                let a = compose(&gens[j], &gens[i], w);
                let b = compose(&gens[i], &gens[j], w);
                if a != b {
                    return Err(Error::Unsatisfiable(format!("square at curve {w}, nodes {} {}", i + 1, j + 1)));
                }
            }
        }
    }
    Ok(gens)
}

pub fn build_action(cs: &CurveSet, sc: &StructureConstants) -> Result<RepAction> {
    if cs.spec.is_adjoint() {
        return Err(Error::NotMinuscule(cs.spec.to_string()));
    }
    let simple = solve_simple_signs(cs)?;
    action_from_simple(cs, sc, &simple)
}

/// Extend simple raising operators to all roots via brackets.
pub fn action_from_simple(cs: &CurveSet, sc: &StructureConstants, simple: &[SignedPerm]) -> Result<RepAction> {
    let rs = &sc.roots;
    let n = cs.rank();
    let dim = cs.len();
    let p = rs.num_positive();
    let mut gens: Vec<Option<SignedPerm>> = vec![None; rs.len()];
    for k in 1..=n {
        let s = rs.simple(k);
        gens[s] = Some(simple[k - 1].clone());
        gens[rs.neg(s)] = Some(transpose(&simple[k - 1]));
    }
    for g in 0..p {
        if gens[g].is_some() {
            continue;
        }
        let (ci, beta) = (1..=n)
            .find_map(|k| {
                let mut d = rs.root(g).to_vec();
                d[k - 1] -= 1;
                rs.index_of(&d).filter(|&b| rs.is_positive(b)).map(|b| (rs.simple(k), b))
            })
            .ok_or_else(|| Error::Invariant("positive root without simple descent".into()))?;
        let pos = commutator(gens[ci].as_ref().unwrap(), gens[beta].as_ref().unwrap(), sc.n(ci, beta))?;
        let (nci, nbeta) = (rs.neg(ci), rs.neg(beta));
        let neg = commutator(gens[nci].as_ref().unwrap(), gens[nbeta].as_ref().unwrap(), sc.n(nci, nbeta))?;
        gens[g] = Some(pos);
        gens[rs.neg(g)] = Some(neg);
    }
    let cartan = (1..=n).map(|k| (0..dim).map(|l| -cs.degree(l, k)).collect()).collect();
    Ok(RepAction { dim, rank: n, generators: gens.into_iter().map(Option::unwrap).collect(), cartan })
}

impl RepAction {
    /// n_{α,w_j} if l_j + α ∈ I.
    pub fn sign(&self, alpha: usize, j: usize) -> Option<(usize, i8)> {
        self.generators[alpha][j]
    }

    pub fn sign_table(&self) -> Vec<SignEntry> {
        let mut v = Vec::new();
        for (alpha, g) in self.generators.iter().enumerate() {
            for (curve, e) in g.iter().enumerate() {
                if let Some((target, sign)) = *e {
                    v.push(SignEntry { alpha, curve, target, sign });
                }
            }
        }
        v
    }

    /// Gauge change v_l ↦ d_l v_l.
    pub fn rescaled(&self, d: &[i8]) -> RepAction {
        let mut r = self.clone();
        for g in r.generators.iter_mut() {
            for (j, e) in g.iter_mut().enumerate() {
                if let Some((i, s)) = e {
                    *s *= d[*i] * d[j];
                }
            }
        }
        r
    }

    /// Flip one entry of one generator; used to build broken actions.
    pub fn flip(&mut self, alpha: usize, j: usize) {
        if let Some((_, s)) = self.generators[alpha][j].as_mut() {
            *s = -*s;
        }
    }

    /// Basis element `b` (roots first, then h₁…h_n) applied to v_j.
    fn apply(&self, b: usize, j: usize) -> Vec<(usize, i64)> {
        let r = self.generators.len();
        if b < r {
            self.generators[b][j].map(|(i, s)| vec![(i, s as i64)]).unwrap_or_default()
        } else {
            let c = self.cartan[b - r][j];
            if c == 0 {
                vec![]
            } else {
                vec![(j, c)]
            }
        }
    }

    fn apply_vec(&self, b: usize, v: &BTreeMap<usize, i64>) -> BTreeMap<usize, i64> {
        let mut out = BTreeMap::new();
        for (&j, &c) in v {
            for (i, s) in self.apply(b, j) {
                *out.entry(i).or_insert(0) += c * s;
            }
        }
        out.retain(|_, x| *x != 0);
        out
    }
}

/// Bracket of two basis elements as integer coefficients on the basis.
pub fn basis_bracket(sc: &StructureConstants, x: usize, y: usize) -> BTreeMap<usize, i64> {
    let r = sc.len();
    let mut out = BTreeMap::new();
    match (x < r, y < r) {
        (true, true) => {
            if let Some(s) = sc.sum(x, y) {
                out.insert(s, sc.n(x, y) as i64);
            } else if y == sc.roots.neg(x) {
                for (i, &a) in sc.roots.root(x).iter().enumerate() {
                    if a != 0 {
                        out.insert(r + i, a);
                    }
                }
            }
        }
        (false, true) => {
            let c = sc.cartan_pairing(y, x - r);
            if c != 0 {
                out.insert(y, c);
            }
        }
        (true, false) => {
            let c = sc.cartan_pairing(x, y - r);
            if c != 0 {
                out.insert(x, -c);
            }
        }
        (false, false) => {}
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ModuleReport {
    pub basis: usize,
    pub dim: usize,
    pub checks: u64,
    pub witness: Option<[usize; 3]>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// ρ([x,y]) v = ρx ρy v − ρy ρx v for all basis pairs and basis vectors.
pub fn verify_module(action: &RepAction, sc: &StructureConstants) -> ModuleReport {
    let basis = sc.len() + sc.rank();
    let dim = action.dim;
    let found: Vec<Option<[usize; 3]>> = (0..basis)
        .into_par_iter()
        .map(|x| {
            for y in 0..basis {
                let br = basis_bracket(sc, x, y);
                for l in 0..dim {
                    let v = BTreeMap::from([(l, 1i64)]);
                    let mut lhs = BTreeMap::new();
                    for (&b, &c) in &br {
                        for (i, s) in action.apply(b, l) {
                            *lhs.entry(i).or_insert(0) += c * s;
                        }
                    }
                    lhs.retain(|_, z| *z != 0);
                    let xy = action.apply_vec(x, &action.apply_vec(y, &v));
                    let yx = action.apply_vec(y, &action.apply_vec(x, &v));
                    let mut rhs = xy;
                    for (i, c) in yx {
                        *rhs.entry(i).or_insert(0) -= c;
                    }
                    rhs.retain(|_, z| *z != 0);
                    if lhs != rhs {
                        return Some([x, y, l]);
                    }
                }
            }
            None
        })
        .collect();
    ModuleReport {
        basis,
        dim,
        checks: (basis * basis * dim) as u64,
        witness: found.into_iter().flatten().next(),
    }
}

/// Rank of the span of ρ(basis) inside End(V₀), exact.
pub fn image_rank(action: &RepAction, sc: &StructureConstants) -> usize {
    let basis = sc.len() + sc.rank();
    let dim = action.dim;
    let mut e = Eliminator::new(dim * dim);
    for b in 0..basis {
        let mut row = BTreeMap::new();
        for j in 0..dim {
            for (i, s) in action.apply(b, j) {
                row.insert(i * dim + j, s);
            }
        }
        e.add_int_row(&row);
    }
    e.rank()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WeylReport {
    pub weights: usize,
    pub zero_weights: usize,
    pub orbit: usize,
    pub transitive: bool,
}

/// Orbit of the weight of C₀ᵏ under simple reflections, compared with the
/// weight multiset (curves plus the Cartan zero weights in the adjoint case).
pub fn weyl_transitivity(cs: &CurveSet) -> WeylReport {
    let n = cs.rank();
    let cartan = cs.lattice.cartan_matrix();
    let weight = |l: usize| -> Vec<i64> { (1..=n).map(|k| -cs.degree(l, k)).collect() };
    let all: Vec<Vec<i64>> = (0..cs.len()).map(weight).collect();
    let zero_weights = if cs.spec.is_adjoint() { n } else { 0 };
    let start = weight(cs.len() - 1);
    let mut seen: HashSet<Vec<i64>> = HashSet::from([start.clone()]);
    let mut q = VecDeque::from([start]);
    while let Some(w) = q.pop_front() {
        for i in 0..n {
            if w[i] == 0 {
                continue;
            }
            let s: Vec<i64> = (0..n).map(|j| w[j] - w[i] * cartan[i][j]).collect();
            if seen.insert(s.clone()) {
                q.push_back(s);
            }
        }
    }
    let covered = all.iter().filter(|w| seen.contains(*w)).count();
    let total = all.len() + zero_weights;
    WeylReport { weights: total, zero_weights, orbit: seen.len(), transitive: covered == total }
}
