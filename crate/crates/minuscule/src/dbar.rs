//! Formal exterior calculus in anticommuting symbols φ_α (α ∈ Φ⁺) with
//! integer-matrix coefficients, the η-matrix of a deformed structure, and the
//! symbolic checks (∂̄ + η)² = 0, ∂̄_η f = 0 and the descent block shapes.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::chevalley::StructureConstants;
use crate::curves::CurveSet;
use crate::error::{Error, Result};
use crate::forms::{invariance_defect, FormTensor};
use crate::minrep::RepAction;

pub type SparseMat = BTreeMap<(usize, usize), i64>;

fn mat_mul(a: &SparseMat, b: &SparseMat) -> SparseMat {
    let mut rows: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
    for (&(i, j), &v) in b {
        rows.entry(i).or_default().push((j, v));
    }
    let mut out = SparseMat::new();
    for (&(i, k), &x) in a {
        if let Some(r) = rows.get(&k) {
            for &(j, y) in r {
                *out.entry((i, j)).or_insert(0) += x * y;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn mat_add(a: &mut SparseMat, b: &SparseMat, c: i64) {
    for (&k, &v) in b {
        let e = a.entry(k).or_insert(0);
        *e += c * v;
        if *e == 0 {
            a.remove(&k);
        }
    }
}

/// Sort a monomial; returns the permutation sign, or `None` if a symbol
/// repeats (φ∧φ = 0).
pub fn canonicalize(m: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = m.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Σ (monomial in φ) ⊗ (rows × cols integer matrix). A 1×1 shape is a scalar
/// and multiplies as one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalPolyForm {
    pub rows: usize,
    pub cols: usize,
    pub terms: BTreeMap<Vec<usize>, SparseMat>,
}

impl FormalPolyForm {
    pub fn zero(rows: usize, cols: usize) -> Self {
        FormalPolyForm { rows, cols, terms: BTreeMap::new() }
    }

    pub fn scalar() -> Self {
        Self::zero(1, 1)
    }

    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    pub fn add_term(&mut self, mono: &[usize], m: &SparseMat, c: i64) {
        let Some((key, sign)) = canonicalize(mono) else { return };
        let e = self.terms.entry(key.clone()).or_default();
        mat_add(e, m, c * sign);
        if e.is_empty() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scalar_term(&mut self, mono: &[usize], c: i64) {
        self.add_term(mono, &SparseMat::from([((0, 0), 1)]), c);
    }

    pub fn add(&mut self, o: &FormalPolyForm) {
        for (mono, m) in &o.terms {
            self.add_term(mono, m, 1);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_set(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Vec::len).collect();
        d.dedup();
        d
    }

    /// φ-monomials concatenate, coefficients multiply.
    pub fn wedge(&self, o: &FormalPolyForm) -> FormalPolyForm {
        let (rows, cols) = match (self.is_scalar(), o.is_scalar()) {
            (true, _) => (o.rows, o.cols),
            (false, true) => (self.rows, self.cols),
            (false, false) => (self.rows, o.cols),
        };
        let mut out = FormalPolyForm::zero(rows, cols);
        for (m1, a) in &self.terms {
            for (m2, b) in &o.terms {
                let mono: Vec<usize> = m1.iter().chain(m2).copied().collect();
                if canonicalize(&mono).is_none() {
                    continue;
                }
                let prod = match (self.is_scalar(), o.is_scalar()) {
                    (true, _) => b.iter().map(|(&k, &v)| (k, v * a[&(0, 0)])).collect(),
                    (false, true) => a.iter().map(|(&k, &v)| (k, v * b[&(0, 0)])).collect(),
                    (false, false) => mat_mul(a, b),
                };
                out.add_term(&mono, &prod, 1);
            }
        }
        out
    }
}

/// ∂̄₀φ_α = −Σ_{β<γ, β+γ=α} n_{β,γ} φ_β∧φ_γ.
pub fn d_generator(alpha: usize, sc: &StructureConstants) -> FormalPolyForm {
    let mut out = FormalPolyForm::scalar();
    for b in 0..alpha {
        for c in b + 1..alpha {
            if sc.sum(b, c) == Some(alpha) {
                out.add_scalar_term(&[b, c], -(sc.n(b, c) as i64));
            }
        }
    }
    out
}

/// Graded Leibniz extension of `d_generator` to scalar forms.
pub fn d_form(f: &FormalPolyForm, sc: &StructureConstants) -> FormalPolyForm {
    let mut out = FormalPolyForm::zero(f.rows, f.cols);
    for (mono, m) in &f.terms {
        for (pos, &a) in mono.iter().enumerate() {
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            for (dm, dc) in &d_generator(a, sc).terms {
                let mut new = mono[..pos].to_vec();
                new.extend(dm);
                new.extend(&mono[pos + 1..]);
                let c = dc[&(0, 0)] * sign;
                out.add_term(&new, m, c);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EtaEntry {
    pub i: usize,
    pub j: usize,
    pub root: usize,
    pub sign: i8,
}

/// η_{i,j} = n_{α,w_j} φ_α where l_i − l_j = α ∈ Φ⁺.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaMatrix {
    pub size: usize,
    pub entries: BTreeMap<(usize, usize), (usize, i8)>,
}

pub fn eta_from_rep(cs: &CurveSet, action: &RepAction, sc: &StructureConstants) -> Result<EtaMatrix> {
    let rs = &sc.roots;
    let mut entries = BTreeMap::new();
    for a in 0..rs.num_positive() {
        for (j, e) in action.generators[a].iter().enumerate() {
            if let Some((i, s)) = *e {
                if i >= j {
                    return Err(Error::Ordering(i, j));
                }
                if cs.difference(i, j) != rs.root(a) {
                    return Err(Error::Invariant(format!("entry ({i}, {j}) is not labelled by l_i - l_j")));
                }
                entries.insert((i, j), (a, s));
            }
        }
    }
    for i in 0..cs.len() {
        for j in 0..cs.len() {
            if let Some(a) = rs.index_of(&cs.difference(i, j)) {
                if rs.is_positive(a) && !entries.contains_key(&(i, j)) {
                    return Err(Error::Invariant(format!("missing entry ({i}, {j})")));
                }
            }
        }
    }
    Ok(EtaMatrix { size: cs.len(), entries })
}

impl EtaMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<(usize, i8)> {
        self.entries.get(&(i, j)).copied()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.entries.keys().all(|&(i, j)| i < j)
    }

    pub fn list(&self) -> Vec<EtaEntry> {
        self.entries.iter().map(|(&(i, j), &(root, sign))| EtaEntry { i, j, root, sign }).collect()
    }

    /// Coefficient matrix of φ_α.
    pub fn component(&self, alpha: usize) -> SparseMat {
        self.entries.iter().filter(|(_, v)| v.0 == alpha).map(|(&k, v)| (k, v.1 as i64)).collect()
    }

    pub fn as_form(&self) -> FormalPolyForm {
        let mut f = FormalPolyForm::zero(self.size, self.size);
        for (&(i, j), &(a, s)) in &self.entries {
            f.add_term(&[a], &SparseMat::from([((i, j), 1)]), s as i64);
        }
        f
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    Adjoint,
    Rep,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NilpotenceReport {
    pub target: Target,
    pub size: usize,
    pub generators: usize,
    pub monomials: usize,
    pub residue: Vec<(Vec<usize>, usize)>,
}

impl NilpotenceReport {
    pub fn passed(&self) -> bool {
        self.residue.is_empty()
    }
}

/// Expand ∂̄(A) + A∧A for A = Σ φ_α M_α and report non-vanishing monomials
/// with the number of nonzero matrix entries each.
pub fn nilpotence(sc: &StructureConstants, size: usize, target: Target, comps: &[(usize, SparseMat)]) -> NilpotenceReport {
    let mut a = FormalPolyForm::zero(size, size);
    for (alpha, m) in comps {
        a.add_term(&[*alpha], m, 1);
    }
    let mut total = FormalPolyForm::zero(size, size);
    for (alpha, m) in comps {
        let mut mf = FormalPolyForm::zero(size, size);
        mf.add_term(&[], m, 1);
        total.add(&d_generator(*alpha, sc).wedge(&mf));
    }
    let aa = a.wedge(&a);
    let monomials = aa.terms.len();
    total.add(&aa);
    NilpotenceReport {
        target,
        size,
        generators: comps.len(),
        monomials,
        residue: total.terms.iter().map(|(k, m)| (k.clone(), m.len())).collect(),
    }
}

pub fn nilpotence_adjoint(sc: &StructureConstants) -> NilpotenceReport {
    let comps: Vec<(usize, SparseMat)> = (0..sc.roots.num_positive())
        .map(|a| (a, sc.ad_root(a).into_iter().map(|(i, j, v)| ((i, j), v)).collect()))
        .collect();
    nilpotence(sc, sc.dimension(), Target::Adjoint, &comps)
}

pub fn nilpotence_rep(sc: &StructureConstants, eta: &EtaMatrix) -> NilpotenceReport {
    let comps: Vec<(usize, SparseMat)> =
        (0..sc.roots.num_positive()).map(|a| (a, eta.component(a))).collect();
    nilpotence(sc, eta.size, Target::Rep, &comps)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RootPattern {
    pub root: usize,
    pub entries: usize,
    pub plus: usize,
    pub minus: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub invariant: bool,
    pub witness: Option<(usize, Vec<usize>)>,
    pub patterns: Vec<RootPattern>,
    /// D_n standard only: η_{i,j} = −η_{p(j),p(i)} with p the partner map.
    pub partner_relation: Option<bool>,
    /// D_n standard only: η_{n,n+1} absent.
    pub middle_zero: Option<bool>,
}

pub fn form_compatibility_check(eta: &EtaMatrix, f: &FormTensor, cs: &CurveSet, sc: &StructureConstants) -> Result<CompatibilityReport> {
    let mut witness = None;
    let mut patterns = Vec::new();
    for a in 0..sc.roots.num_positive() {
        let comp = eta.component(a);
        let by_col: HashMap<usize, (usize, i64)> = comp.iter().map(|(&(i, j), &v)| (j, (i, v))).collect();
        let op = |j: usize| by_col.get(&j).copied();
        if witness.is_none() {
            if let (_, Some(m)) = invariance_defect(cs, f, sc.roots.root(a), &op)? {
                witness = Some((a, m));
            }
        }
        let plus = comp.values().filter(|&&v| v > 0).count();
        patterns.push(RootPattern { root: a, entries: comp.len(), plus, minus: comp.len() - plus });
    }
    let (partner_relation, middle_zero) = if f.degree == 2 {
        let n = eta.size;
        let p = |i: usize| n - 1 - i;
        let rel = eta.entries.iter().all(|(&(i, j), &(a, s))| eta.get(p(j), p(i)) == Some((a, -s)));
        (Some(rel), Some(eta.get(n / 2 - 1, n / 2).is_none()))
    } else {
        (None, None)
    };
    Ok(CompatibilityReport { invariant: witness.is_none(), witness, patterns, partner_relation, middle_zero })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BlockReport {
    pub node: usize,
    /// (u, w) with u = w + C_k, sorted by u.
    pub pairs: Vec<(usize, usize)>,
    pub diagonal_ok: bool,
    pub violations: Vec<(usize, usize)>,
    pub node_entries: usize,
}

impl BlockReport {
    pub fn passed(&self) -> bool {
        self.diagonal_ok && self.violations.is_empty()
    }
}

/// Curves paired across C_k: each diagonal pairing entry carries the root
/// C_k and η(u_p, w_q) vanishes for q < p.
pub fn block_shape_check(eta: &EtaMatrix, cs: &CurveSet, sc: &StructureConstants, k: usize) -> BlockReport {
    let ck = sc.roots.simple(k);
    let mut e = vec![0; cs.rank()];
    e[k - 1] = 1;
    let mut pairs: Vec<(usize, usize)> =
        (0..cs.len()).filter(|&w| cs.degree(w, k) == 1).filter_map(|w| cs.shift(w, &e).map(|u| (u, w))).collect();
    pairs.sort_unstable();
    let diagonal_ok = pairs.iter().all(|&(u, w)| eta.get(u, w).map(|x| x.0) == Some(ck));
    let mut violations = Vec::new();
    for (p, &(u, _)) in pairs.iter().enumerate() {
        for &(_, w) in &pairs[..p] {
            if eta.get(u, w).is_some() {
                violations.push((u, w));
            }
        }
    }
    let node_entries = eta.entries.values().filter(|v| v.0 == ck).count();
    BlockReport { node: k, pairs, diagonal_ok, violations, node_entries }
}
