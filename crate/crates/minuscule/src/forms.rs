//! Invariant tensors on V₀: the quadric q (D_n), cubic c (E₆), quartic t
//! (E₇), and the automorphism algebra they cut out.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chevalley::StructureConstants;
use crate::curves::CurveSet;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, Family};
use crate::linalg::{rat, Eliminator, SparseRow};
use crate::minrep::RepAction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTensor {
    pub degree: usize,
    pub target: DivisorClass,
    /// Sorted index tuples with nonzero coefficient.
    pub coeff: BTreeMap<Vec<usize>, BigRational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormEntry {
    pub tuple: Vec<usize>,
    pub value: String,
}

impl FormTensor {
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.coeff.keys().cloned().collect()
    }

    pub fn value(&self, tuple: &[usize]) -> BigRational {
        let mut t = tuple.to_vec();
        t.sort_unstable();
        self.coeff.get(&t).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_unit(&self) -> bool {
        self.coeff.values().all(|v| v.abs() == BigRational::one())
    }

    /// Histogram of |coefficient| over the support.
    pub fn magnitudes(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for v in self.coeff.values() {
            *m.entry(v.abs().to_string()).or_insert(0) += 1;
        }
        m
    }

    pub fn entries(&self) -> Vec<FormEntry> {
        self.coeff.iter().map(|(t, v)| FormEntry { tuple: t.clone(), value: v.to_string() }).collect()
    }

    /// Every support tuple sums to the target class.
    pub fn sums_to_target(&self, cs: &CurveSet) -> bool {
        let Ok(t) = self.target.to_full() else { return false };
        self.coeff.keys().all(|tup| {
            (0..t.len()).all(|k| tup.iter().map(|&i| cs.curve(i)[k]).sum::<i64>() == t[k])
        })
    }

    /// Copy with one coefficient negated; used to build broken forms.
    pub fn with_flipped(&self, tuple: &[usize]) -> FormTensor {
        let mut f = self.clone();
        if let Some(v) = f.coeff.get_mut(tuple) {
            *v = -v.clone();
        }
        f
    }
}

/// Sorted r-multisets of curve indices whose classes sum to `target`.
pub fn multisets_with_sum(cs: &CurveSet, r: usize, target: &[i64]) -> Vec<Vec<usize>> {
    fn rec(cs: &CurveSet, r: usize, rest: &mut Vec<i64>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let lo = cur.last().copied().unwrap_or(0);
        if r == 1 {
            if let Some(i) = cs.index_of(rest) {
                if i >= lo {
                    cur.push(i);
                    out.push(cur.clone());
                    cur.pop();
                }
            }
            return;
        }
        for i in lo..cs.len() {
            let c = cs.curve(i);
            if rest.iter().zip(c).any(|(x, y)| x < y) {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(c) {
                *x -= y;
            }
            cur.push(i);
            rec(cs, r - 1, rest, cur, out);
            cur.pop();
            for (x, y) in rest.iter_mut().zip(c) {
                *x += y;
            }
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    rec(cs, r, &mut target.to_vec(), &mut Vec::new(), &mut out);
    out
}

fn shifted(target: &[i64], alpha: &[i64]) -> Vec<i64> {
    let mut t = target.to_vec();
    for (x, a) in t[1..].iter_mut().zip(alpha) {
        *x -= a;
    }
    t
}

fn replace_sorted(m: &[usize], p: usize, i: usize) -> Vec<usize> {
    let mut t = m.to_vec();
    t[p] = i;
    t.sort_unstable();
    t
}

/// q(v_i, v_j) = l_i·l_j on D_n partner pairs.
pub fn quadratic_q(cs: &CurveSet) -> Result<FormTensor> {
    if cs.spec.family != Family::D || cs.spec.node != 1 {
        return Err(Error::Undefined("q".into(), cs.spec.to_string()));
    }
    let f = cs.special["F"].clone();
    let mut coeff = BTreeMap::new();
    for t in multisets_with_sum(cs, 2, &f.to_full()?) {
        let v = cs.pair(t[0], t[1]);
        if v != 0 {
            coeff.insert(t, rat(v));
        }
    }
    Ok(FormTensor { degree: 2, target: f, coeff })
}

/// Target class of the invariant form for a standard configuration.
pub fn default_target(cs: &CurveSet) -> Result<(usize, DivisorClass)> {
    let s = cs.spec;
    match (s.family, s.rank, s.node) {
        (Family::D, _, 1) => Ok((2, cs.special["F"].clone())),
        (Family::E, 6, 1) => Ok((3, cs.special["K'"].clone())),
        (Family::E, 7, 1) => Ok((4, 2 * &cs.special["K'"])),
        _ => Err(Error::Undefined("invariant form".into(), s.to_string())),
    }
}

/// Solve Σ_slots f(…, ρ(x)v, …) = 0 for the Chevalley generators x_{±Cᵢ};
/// the solution space must be one-dimensional.
pub fn solve_invariant_form(action: &RepAction, cs: &CurveSet, sc: &StructureConstants, r: usize, target: &DivisorClass) -> Result<FormTensor> {
    let t = target.to_full()?;
    let unknowns = multisets_with_sum(cs, r, &t);
    if unknowns.is_empty() {
        return Err(Error::Invariant("empty support".into()));
    }
    let col: HashMap<Vec<usize>, usize> = unknowns.iter().enumerate().map(|(i, u)| (u.clone(), i)).collect();
    let rs = &sc.roots;
    let gens: Vec<usize> = (1..=cs.rank()).flat_map(|k| [rs.simple(k), rs.neg(rs.simple(k))]).collect();
    let rows: Vec<BTreeMap<usize, i64>> = gens
        .par_iter()
        .flat_map_iter(|&x| {
            let shifted_t = shifted(&t, rs.root(x));
            multisets_with_sum(cs, r, &shifted_t).into_iter().map(move |m| (x, m))
        })
        .map(|(x, m)| {
            let mut row = BTreeMap::new();
            for p in 0..m.len() {
                if let Some((i, s)) = action.sign(x, m[p]) {
                    *row.entry(col[&replace_sorted(&m, p, i)]).or_insert(0) += s as i64;
                }
            }
            row.retain(|_, v| *v != 0);
            row
        })
        .collect();
    let mut e = Eliminator::new(unknowns.len());
    for row in &rows {
        if !row.is_empty() {
            e.add_int_row(row);
        }
    }
    let kernel = e.kernel();
    if kernel.len() != 1 {
        return Err(Error::Nullity(kernel.len()));
    }
    let v = &kernel[0];
    let mut coeff: BTreeMap<Vec<usize>, BigRational> =
        v.iter().map(|(&c, x)| (unknowns[c].clone(), x.clone())).collect();
    let lead = coeff.values().next().cloned().unwrap();
    for x in coeff.values_mut() {
        *x = &*x / &lead;
    }
    Ok(FormTensor { degree: r, target: target.clone(), coeff })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AutReport {
    pub elements: usize,
    pub equations: u64,
    pub witness: Option<(usize, Vec<usize>)>,
}

impl AutReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// First multiset witnessing that f is not killed by the operator `op`
/// of weight `alpha` (a Λ-vector), if any; also the number of equations.
pub fn invariance_defect(
    cs: &CurveSet,
    f: &FormTensor,
    alpha: &[i64],
    op: &dyn Fn(usize) -> Option<(usize, i64)>,
) -> Result<(u64, Option<Vec<usize>>)> {
    let t = shifted(&f.target.to_full()?, alpha);
    let mut n = 0;
    for m in multisets_with_sum(cs, f.degree, &t) {
        n += 1;
        let mut acc = BigRational::zero();
        for p in 0..m.len() {
            if let Some((i, s)) = op(m[p]) {
                acc += f.value(&replace_sorted(&m, p, i)) * rat(s);
            }
        }
        if !acc.is_zero() {
            return Ok((n, Some(m)));
        }
    }
    Ok((n, None))
}

/// Equations checked and the first failing (element, multiset).
type Tally = (u64, Option<(usize, Vec<usize>)>);

/// Invariance of f under every Chevalley basis element, exhaustively.
pub fn verify_aut(action: &RepAction, cs: &CurveSet, sc: &StructureConstants, f: &FormTensor) -> Result<AutReport> {
    let r = sc.len();
    let basis = r + sc.rank();
    let zero = vec![0i64; sc.rank()];
    let per: Vec<Result<Tally>> = (0..basis)
        .into_par_iter()
        .map(|x| {
            let (n, w) = if x < r {
                let op = |j: usize| action.sign(x, j).map(|(i, s)| (i, s as i64));
                invariance_defect(cs, f, sc.roots.root(x), &op)?
            } else {
                let op = |j: usize| Some((j, action.cartan[x - r][j]));
                invariance_defect(cs, f, &zero, &op)?
            };
            Ok((n, w.map(|m| (x, m))))
        })
        .collect();
    let per = per.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(AutReport {
        elements: basis,
        equations: per.iter().map(|p| p.0).sum(),
        witness: per.into_iter().find_map(|p| p.1),
    })
}

/// dim {M ∈ End V₀ : f(M·) invariant}, optionally intersected with trace
/// zero. Weight homogeneity splits the system by the shift l_j − l_t.
pub fn aut_dimension(cs: &CurveSet, f: Option<&FormTensor>, traceless: bool) -> Result<usize> {
    let n = cs.len();
    let Some(f) = f else {
        return Ok(n * n - traceless as usize);
    };
    let t = f.target.to_full()?;
    let mut blocks: BTreeMap<Vec<i64>, Vec<(usize, usize)>> = BTreeMap::new();
    for j in 0..n {
        for s in 0..n {
            blocks.entry(cs.difference(j, s)).or_default().push((j, s));
        }
    }
    let dims: Vec<Result<usize>> = blocks
        .par_iter()
        .map(|(delta, unknowns)| {
            let col: HashMap<(usize, usize), usize> = unknowns.iter().enumerate().map(|(i, u)| (*u, i)).collect();
            let by_source: HashMap<usize, usize> = unknowns.iter().map(|&(j, s)| (s, j)).collect();
            let mut e = Eliminator::new(unknowns.len());
            for m in multisets_with_sum(cs, f.degree, &shifted(&t, delta)) {
                let mut row = SparseRow::new();
                for p in 0..m.len() {
                    if let Some(&j) = by_source.get(&m[p]) {
                        let v = f.value(&replace_sorted(&m, p, j));
                        if !v.is_zero() {
                            let c = col[&(j, m[p])];
                            let ent = row.entry(c).or_insert_with(BigRational::zero);
                            *ent += v;
                        }
                    }
                }
                row.retain(|_, v| !v.is_zero());
                if !row.is_empty() {
                    e.add_row(row);
                }
            }
            if traceless && delta.iter().all(|&x| x == 0) {
                e.add_row(unknowns.iter().map(|u| (col[u], BigRational::one())).collect());
            }
            Ok(e.nullity())
        })
        .collect();
    dims.into_iter().sum()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub enum Gauge {
    Tree,
    Quadric,
    Balanced { seed: u64, restarts: usize },
}

/// Signed entry sum per positive root of the raising operators.
fn root_imbalance(action: &RepAction, sc: &StructureConstants, d: &[i8]) -> Vec<i64> {
    (0..sc.roots.num_positive())
        .map(|a| {
            action.generators[a]
                .iter()
                .enumerate()
                .filter_map(|(j, e)| e.map(|(i, s)| (s * d[i] * d[j]) as i64))
                .sum()
        })
        .collect()
}

/// Seeded local search for a diagonal ±1 rescaling whose entries cancel
/// root by root.
pub fn balanced_gauge(action: &RepAction, sc: &StructureConstants, seed: u64) -> Result<(Vec<i8>, usize)> {
    let n = action.dim;
    let p = sc.roots.num_positive();
    // incidence[v] = (root, other endpoint, base sign) for entries touching v
    let mut incidence: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); n];
    for a in 0..p {
        for (j, e) in action.generators[a].iter().enumerate() {
            if let Some((i, s)) = *e {
                incidence[i].push((a, j, s));
                incidence[j].push((a, i, s));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for restart in 0..200 {
        let mut d = vec![1i8; n];
        if restart > 0 {
            d.iter_mut().for_each(|x| *x = if rng.gen_bool(0.5) { 1 } else { -1 });
        }
        let mut sums = root_imbalance(action, sc, &d);
        let cost = |s: &[i64]| s.iter().map(|x| x.abs()).sum::<i64>();
        let mut current = cost(&sums);
        for _ in 0..20_000 {
            if current == 0 {
                return Ok((d, restart));
            }
            let delta_for = |v: usize, sums: &[i64], d: &[i8]| -> i64 {
                let mut change: BTreeMap<usize, i64> = BTreeMap::new();
                for &(a, w, s) in &incidence[v] {
                    *change.entry(a).or_insert(0) -= 2 * (s * d[v] * d[w]) as i64;
                }
                change.iter().map(|(&a, &c)| (sums[a] + c).abs() - sums[a].abs()).sum()
            };
            let (best_v, best) = (0..n).map(|v| (v, delta_for(v, &sums, &d))).min_by_key(|x| x.1).unwrap();
            let v = if best < 0 || rng.gen_bool(0.3) { best_v } else { rng.gen_range(0..n) };
            for &(a, w, s) in &incidence[v] {
                sums[a] -= 2 * (s * d[v] * d[w]) as i64;
            }
            d[v] = -d[v];
            current = cost(&sums);
        }
    }
    Err(Error::Unsatisfiable("no balanced gauge found".into()))
}

/// The representation in the gauge used for η: partner-normalized for
/// D_n standard, root-balanced for E₆/E₇, tree otherwise.
pub fn compatible_action(action: &RepAction, cs: &CurveSet, sc: &StructureConstants, seed: u64) -> Result<(RepAction, Gauge)> {
    let s = cs.spec;
    match s.family {
        Family::D if s.node == 1 => {
            let (r, target) = default_target(cs)?;
            let f = solve_invariant_form(action, cs, sc, r, &target)?;
            let mut d = vec![1i8; action.dim];
            for (t, v) in &f.coeff {
                let sign = if v.is_negative() { -1 } else { 1 };
                d[t[1]] = sign * d[t[0]];
            }
            Ok((action.rescaled(&d), Gauge::Quadric))
        }
        Family::E if s.rank <= 7 => {
            let (d, restarts) = balanced_gauge(action, sc, seed)?;
            Ok((action.rescaled(&d), Gauge::Balanced { seed, restarts }))
        }
        _ => Ok((action.clone(), Gauge::Tree)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::compute_structure_constants;
    use crate::curves::{enumerate_curves, triangles};
    use crate::lattice::{build_lattice, DynkinSpec};
    use crate::minrep::{build_action, verify_module};
    use crate::rootsys::enumerate_roots;

    fn setup(f: Family, n: usize, k: usize) -> (CurveSet, StructureConstants, RepAction) {
        let l = build_lattice(DynkinSpec::new(f, n, k).unwrap()).unwrap();
        let cs = enumerate_curves(&l).unwrap();
        let sc = compute_structure_constants(&enumerate_roots(&l));
        let a = build_action(&cs, &sc).unwrap();
        (cs, sc, a)
    }

    #[test]
    fn multiset_enumeration() {
        let (cs, _, _) = setup(Family::E, 6, 1);
        let k = cs.special_full("K'").unwrap();
        let m = multisets_with_sum(&cs, 3, &k);
        assert_eq!(m.len(), 45);
        assert_eq!(m, triangles(&cs).unwrap().iter().map(|t| t.to_vec()).collect::<Vec<_>>());
    }

    #[test]
    fn d_quadric_recovered() {
        let (cs, sc, a) = setup(Family::D, 5, 1);
        let q = quadratic_q(&cs).unwrap();
        assert_eq!(q.coeff.len(), 5);
        assert!(q.coeff.keys().all(|t| t[0] + t[1] == 9));
        let (r, target) = default_target(&cs).unwrap();
        let (g, gauge) = compatible_action(&a, &cs, &sc, 1).unwrap();
        assert_eq!(gauge, Gauge::Quadric);
        assert!(verify_module(&g, &sc).passed());
        let f = solve_invariant_form(&g, &cs, &sc, r, &target).unwrap();
        assert_eq!(f, q);
        assert!(verify_aut(&g, &cs, &sc, &q).unwrap().passed());
        assert_eq!(aut_dimension(&cs, Some(&q), false).unwrap(), 45);
    }

    #[test]
    fn e6_cubic() {
        let (cs, sc, a) = setup(Family::E, 6, 1);
        let (r, target) = default_target(&cs).unwrap();
        let c = solve_invariant_form(&a, &cs, &sc, r, &target).unwrap();
        assert_eq!(c.coeff.len(), 45);
        assert!(c.is_unit());
        assert!(c.sums_to_target(&cs));
        assert!(verify_aut(&a, &cs, &sc, &c).unwrap().passed());
        let broken = c.with_flipped(&c.support()[3]);
        assert!(!verify_aut(&a, &cs, &sc, &broken).unwrap().passed());
        assert_eq!(aut_dimension(&cs, Some(&c), false).unwrap(), 78);
        assert_eq!(aut_dimension(&cs, Some(&c), true).unwrap(), 78);
    }

    #[test]
    fn traceless_endomorphisms() {
        let (cs, _, _) = setup(Family::A, 4, 1);
        assert_eq!(aut_dimension(&cs, None, true).unwrap(), 24);
        assert_eq!(aut_dimension(&cs, None, false).unwrap(), 25);
    }

    #[test]
    fn balanced_gauge_e6() {
        let (cs, sc, a) = setup(Family::E, 6, 1);
        let (g, _) = compatible_action(&a, &cs, &sc, 7).unwrap();
        assert!(verify_module(&g, &sc).passed());
        let d = vec![1; g.dim];
        assert!(root_imbalance(&g, &sc, &d).iter().all(|&x| x == 0));
    }
}
