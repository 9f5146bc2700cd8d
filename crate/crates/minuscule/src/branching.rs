//! Branching of I (or of the roots, for E₈) under deletion of one node,
//! graded by the coefficient of the deleted node.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::curves::{enumerate_curves, CurveSet};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, DynkinSpec, Family};
use crate::rootsys::RootSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub label: String,
    pub grade: i64,
    pub size: usize,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchReport {
    pub ambient: String,
    pub removed: usize,
    pub total: usize,
    pub summands: Vec<Summand>,
    pub exact: bool,
    pub witness: Option<String>,
    /// E₇ only: whether {3H − Σ_{j≠i} l_j} gives the same top summand.
    pub three_h_formula_holds: Option<bool>,
}

impl BranchReport {
    pub fn sizes(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.size).collect()
    }

    pub fn passed(&self) -> bool {
        self.exact
    }
}

struct Part {
    label: String,
    grade: i64,
    classes: Vec<Vec<i64>>,
}

fn part(label: impl Into<String>, grade: i64, classes: Vec<Vec<i64>>) -> Part {
    Part { label: label.into(), grade, classes }
}

/// Match formula classes against I and check the parts partition it; with a
/// removed node, each part must also sit in its grade.
fn partition(cs: &CurveSet, removed: Option<usize>, parts: Vec<Part>) -> BranchReport {
    let mut witness = None;
    let mut seen = BTreeSet::new();
    let mut summands = Vec::new();
    for p in parts {
        let mut members = Vec::new();
        for c in &p.classes {
            match cs.index_of(c) {
                Some(i) if !seen.insert(i) => {
                    witness.get_or_insert_with(|| format!("{} repeats curve {i}", p.label));
                }
                Some(i) if removed.is_some_and(|r| c[r] != p.grade) => {
                    witness.get_or_insert_with(|| format!("curve {i} in {} has the wrong grade", p.label));
                }
                Some(i) => members.push(i),
                None => {
                    witness.get_or_insert_with(|| format!("{} produces {c:?}, not a curve", p.label));
                }
            }
        }
        members.sort_unstable();
        summands.push(Summand { label: p.label, grade: p.grade, size: members.len(), members });
    }
    if witness.is_none() && seen.len() != cs.len() {
        let miss = (0..cs.len()).find(|i| !seen.contains(i)).unwrap_or(0);
        witness = Some(format!("curve {miss} is in no summand"));
    }
    BranchReport {
        ambient: cs.spec.label(),
        removed: removed.unwrap_or(0),
        total: cs.len(),
        summands,
        exact: witness.is_none(),
        witness,
        three_h_formula_holds: None,
    }
}

fn require(cs: &CurveSet, f: Family, pred: bool, what: &str) -> Result<()> {
    if cs.spec.family != f || !pred {
        return Err(Error::Undefined(what.into(), cs.spec.label()));
    }
    Ok(())
}

/// Full vectors of the standard A_m curves C₀, C₀+C₁, …, C₀+C₁+⋯+C_m,
/// padded with zeros to `width` Λ-coordinates.
fn standard_chain(m: usize, width: usize) -> Vec<Vec<i64>> {
    (0..=m)
        .map(|s| {
            let mut v = vec![0i64; width + 1];
            v[0] = 1;
            v[1..=s].iter_mut().for_each(|x| *x = 1);
            v
        })
        .collect()
}

fn combine(terms: &[(i64, &[i64])]) -> Vec<i64> {
    let mut v = vec![0i64; terms[0].1.len()];
    for (c, t) in terms {
        for (x, y) in v.iter_mut().zip(t.iter()) {
            *x += c * y;
        }
    }
    v
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// D_n standard: 2n = n + n, graded by a_n.
pub fn branch_dn_std(cs: &CurveSet) -> Result<BranchReport> {
    let n = cs.rank();
    require(cs, Family::D, cs.spec.node == 1, "standard branching")?;
    let f = cs.special_full("F")?;
    let low = standard_chain(n - 1, n);
    let high = low.iter().map(|l| combine(&[(1, &f), (-1, l)])).collect();
    Ok(partition(cs, Some(n), vec![part("L(A_{n-1})", 0, low), part("L(A_{n-1})*(F)", 1, high)]))
}

/// A_n Λᵏ: k-subsets S of the standard curves give C₀ᵏ + Σ_S λ − Σ_{s≤k} λ.
pub fn branch_an_wedge(cs: &CurveSet) -> Result<BranchReport> {
    let (n, k) = (cs.rank(), cs.spec.node);
    require(cs, Family::A, true, "wedge branching")?;
    let std = standard_chain(n, n);
    let base: Vec<&[i64]> = std[..k].iter().map(|v| v.as_slice()).collect();
    let classes = subsets(n + 1, k)
        .into_iter()
        .map(|s| {
            let mut terms: Vec<(i64, &[i64])> = s.iter().map(|&i| (1, std[i].as_slice())).collect();
            terms.extend(base.iter().map(|b| (-1, *b)));
            let mut v = combine(&terms);
            v[0] = 1;
            v
        })
        .collect();
    Ok(partition(cs, None, vec![part(format!("Λ^{k} L(A_{n})"), 0, classes)]))
}

/// D_n spinor: even subsets S of the A_{n−1} standard curves give
/// C₀ⁿ + mF − Σ_S l with |S| = 2m.
pub fn branch_dn_spinor(cs: &CurveSet) -> Result<BranchReport> {
    let n = cs.rank();
    require(cs, Family::D, cs.spec.node == n, "spinor branching")?;
    let f = cs.special_full("F")?;
    let std = standard_chain(n - 1, n);
    let mut c0 = vec![0i64; n + 1];
    c0[0] = 1;
    let parts = (0..=n / 2)
        .map(|m| {
            let classes = subsets(n, 2 * m)
                .into_iter()
                .map(|s| {
                    let mut terms: Vec<(i64, &[i64])> = vec![(1, &c0), (m as i64, &f)];
                    terms.extend(s.iter().map(|&i| (-1, std[i].as_slice())));
                    combine(&terms)
                })
                .collect();
            part(format!("Λ^{} L(A_{})*({m}F + C0)", 2 * m, n - 1), m as i64, classes)
        })
        .collect();
    Ok(partition(cs, Some(n), parts))
}

/// E₆: 27 = 6 + 15 + 6 via {l_i}, {H − l_i − l_j}, {2H − Σ_{j≠i} l_j}.
pub fn branch_e6(cs: &CurveSet) -> Result<BranchReport> {
    require(cs, Family::E, cs.rank() == 6, "E6 branching")?;
    let h = cs.special_full("H")?;
    let l = standard_chain(5, 6);
    let pairs = subsets(6, 2).into_iter().map(|s| combine(&[(1, &h), (-1, &l[s[0]]), (-1, &l[s[1]])])).collect();
    let fives = subsets(6, 5)
        .into_iter()
        .map(|s| {
            let mut t: Vec<(i64, &[i64])> = vec![(2, &h)];
            t.extend(s.iter().map(|&i| (-1, l[i].as_slice())));
            combine(&t)
        })
        .collect();
    Ok(partition(
        cs,
        Some(6),
        vec![part("L(A5)", 0, l.clone()), part("Λ² L(A5)*(H)", 1, pairs), part("Λ⁵ L(A5)*(2H)", 2, fives)],
    ))
}

/// E₇: 56 = 7 + 21 + 21 + 7; the top summand is {K′ − l_i}.
pub fn branch_e7(cs: &CurveSet) -> Result<BranchReport> {
    require(cs, Family::E, cs.rank() == 7, "E7 branching")?;
    let h = cs.special_full("H")?;
    let kp = cs.special_full("K'")?;
    let l = standard_chain(6, 7);
    let minus = |coef: i64, base: &[i64], s: &[usize]| {
        let mut t: Vec<(i64, &[i64])> = vec![(coef, base)];
        t.extend(s.iter().map(|&i| (-1, l[i].as_slice())));
        combine(&t)
    };
    let two = subsets(7, 2).iter().map(|s| minus(1, &h, s)).collect();
    let five = subsets(7, 5).iter().map(|s| minus(2, &h, s)).collect();
    let top: Vec<Vec<i64>> = (0..7).map(|i| minus(1, &kp, &[i])).collect();
    let three_h: Vec<Vec<i64>> = subsets(7, 6).iter().map(|s| minus(3, &h, s)).collect();
    let mut r = partition(
        cs,
        Some(7),
        vec![
            part("L(A6)", 0, l.clone()),
            part("Λ² L(A6)*(H)", 1, two),
            part("Λ⁵ L(A6)*(2H)", 2, five),
            part("L(A6)*(K')", 3, top.clone()),
        ],
    );
    let a: BTreeSet<_> = three_h.into_iter().collect();
    let b: BTreeSet<_> = top.into_iter().collect();
    r.three_h_formula_holds = Some(a == b);
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradeRow {
    pub grade: i64,
    pub roots: usize,
    pub cartan: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingReport {
    pub ambient: String,
    pub removed: usize,
    pub rows: Vec<GradeRow>,
    pub grade_sum: i64,
    /// Row totals, with grade 0 split into centre and semisimple part when
    /// the remaining diagram is not of type A.
    pub summands: Vec<usize>,
}

/// Grade every root by its coefficient on `removed` (1-based); the Cartan
/// subalgebra sits in grade 0.
pub fn grade_roots(rs: &RootSystem, removed: usize) -> Result<GradingReport> {
    let n = rs.root(0).len();
    if removed == 0 || removed > n {
        return Err(Error::InvalidSpec(format!("no node C{removed}")));
    }
    let top = rs.root(rs.highest())[removed - 1];
    let mut rows: Vec<GradeRow> =
        (-top..=top).map(|g| GradeRow { grade: g, roots: 0, cartan: if g == 0 { n } else { 0 }, total: 0 }).collect();
    let mut grade_sum = 0;
    for r in rs.roots() {
        let g = r[removed - 1];
        grade_sum += g;
        rows[(g + top) as usize].roots += 1;
    }
    for r in &mut rows {
        r.total = r.roots + r.cartan;
    }
    let mut deg = vec![0; n + 1];
    for i in (1..=n).filter(|&i| i != removed) {
        for j in (1..=n).filter(|&j| j != removed && j != i) {
            if rs.dot(&unit(n, i), &unit(n, j)) == 1 {
                deg[i] += 1;
            }
        }
    }
    let levi_is_a = deg.iter().all(|&d| d <= 2);
    let mut summands = Vec::new();
    for r in &rows {
        if r.grade == 0 && !levi_is_a {
            summands.push(1);
            summands.push(r.total - 1);
        } else {
            summands.push(r.total);
        }
    }
    Ok(GradingReport { ambient: format!("rank {n}"), removed, rows, grade_sum, summands })
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i - 1] = 1;
    v
}

pub fn branch_e8(rs: &RootSystem, removed: usize) -> Result<GradingReport> {
    let mut r = grade_roots(rs, removed)?;
    r.ambient = "E8".into();
    Ok(r)
}

/// Curves of the diagram with the last node deleted (node 1), padded by a
/// zero coordinate; these are the grade-0 summand of the branchings above.
pub fn levi_curves(cs: &CurveSet) -> Result<Vec<Vec<i64>>> {
    let n = cs.rank();
    let sub = DynkinSpec::new(Family::A, n - 1, 1)?;
    let sc = enumerate_curves(&build_lattice(sub)?)?;
    Ok(sc
        .curves()
        .iter()
        .map(|c| {
            let mut v = c.clone();
            v.push(0);
            v
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::enumerate_roots;

    fn curves(f: Family, n: usize, k: usize) -> CurveSet {
        enumerate_curves(&build_lattice(DynkinSpec::new(f, n, k).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn d_std() {
        for n in 4..=8 {
            let r = branch_dn_std(&curves(Family::D, n, 1)).unwrap();
            assert!(r.exact, "{:?}", r.witness);
            assert_eq!(r.sizes(), vec![n, n]);
        }
    }

    #[test]
    fn levi_recovers_grade_zero() {
        for (f, n) in [(Family::D, 6), (Family::E, 6), (Family::E, 7)] {
            let cs = curves(f, n, 1);
            let r = match (f, n) {
                (Family::D, _) => branch_dn_std(&cs),
                (_, 6) => branch_e6(&cs),
                _ => branch_e7(&cs),
            }
            .unwrap();
            let mut levi: Vec<usize> = levi_curves(&cs).unwrap().iter().map(|c| cs.index_of(c).unwrap()).collect();
            levi.sort_unstable();
            assert_eq!(levi, r.summands[0].members);
        }
    }

    #[test]
    fn wedges() {
        for n in 1..=7 {
            for k in 1..=n {
                let r = branch_an_wedge(&curves(Family::A, n, k)).unwrap();
                assert!(r.exact, "A{n} {k}: {:?}", r.witness);
            }
        }
    }

    #[test]
    fn spinors() {
        let r = branch_dn_spinor(&curves(Family::D, 4, 4)).unwrap();
        assert_eq!(r.sizes(), vec![1, 6, 1]);
        let r = branch_dn_spinor(&curves(Family::D, 5, 5)).unwrap();
        assert_eq!(r.sizes(), vec![1, 10, 5]);
        for n in 4..=8 {
            let r = branch_dn_spinor(&curves(Family::D, n, n)).unwrap();
            assert!(r.exact);
            assert_eq!(r.sizes().iter().sum::<usize>(), 1 << (n - 1));
        }
    }

    #[test]
    fn exceptional() {
        let r = branch_e6(&curves(Family::E, 6, 1)).unwrap();
        assert!(r.exact);
        assert_eq!(r.sizes(), vec![6, 15, 6]);
        let r = branch_e7(&curves(Family::E, 7, 1)).unwrap();
        assert!(r.exact, "{:?}", r.witness);
        assert_eq!(r.sizes(), vec![7, 21, 21, 7]);
        assert_eq!(r.three_h_formula_holds, Some(false));
    }

    #[test]
    fn e8_gradings() {
        let rs = enumerate_roots(&build_lattice(DynkinSpec::new(Family::E, 8, 1).unwrap()).unwrap());
        let a7 = branch_e8(&rs, 8).unwrap();
        assert_eq!(a7.summands, vec![8, 28, 56, 64, 56, 28, 8]);
        assert_eq!(a7.grade_sum, 0);
        let d7 = branch_e8(&rs, 7).unwrap();
        assert_eq!(d7.summands, vec![14, 64, 1, 91, 64, 14]);
        assert_eq!(d7.rows[2].roots, 84);
    }

    #[test]
    fn wrong_family_rejected() {
        assert!(branch_e6(&curves(Family::D, 6, 1)).is_err());
        assert!(branch_dn_spinor(&curves(Family::D, 5, 1)).is_err());
    }
}
