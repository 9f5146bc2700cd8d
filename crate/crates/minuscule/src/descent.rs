//! Splitting types of the restrictions to each C_i, the descent entries of η,
//! the twist divisors B and Chern data.

use serde::Serialize;

use crate::chevalley::StructureConstants;
use crate::curves::CurveSet;
use crate::dbar::{EtaEntry, EtaMatrix};
use crate::error::{Error, Result};
use crate::lattice::{build_lattice, DivisorClass, DynkinSpec, Family};
use crate::rootsys::RootSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub component: usize,
    pub zeros: usize,
    /// (l, l + C_i) with l·C_i = 1.
    pub pairs: Vec<[usize; 2]>,
    /// (l, l + 2C_i) with l·C_i = 2; only in the adjoint E₈ case.
    pub twos: Vec<[usize; 2]>,
}

pub fn splitting_type(cs: &CurveSet, k: usize) -> Result<SplittingType> {
    let mut e = vec![0; cs.rank()];
    e[k - 1] = 1;
    let e2: Vec<i64> = e.iter().map(|x| 2 * x).collect();
    let mut st = SplittingType { component: k, zeros: 0, pairs: vec![], twos: vec![] };
    let mut minus = [0usize; 2];
    for l in 0..cs.len() {
        match cs.degree(l, k) {
            0 => st.zeros += 1,
            1 => {
                let m = cs.shift(l, &e).filter(|&m| cs.degree(m, k) == -1);
                let m = m.ok_or_else(|| Error::Invariant(format!("curve {l} has degree 1 on C{k} but no partner")))?;
                st.pairs.push([l, m]);
            }
            2 => {
                let m = cs.shift(l, &e2).filter(|&m| cs.degree(m, k) == -2);
                let m = m.ok_or_else(|| Error::Invariant(format!("curve {l} has degree 2 on C{k} but no partner")))?;
                st.twos.push([l, m]);
            }
            -1 => minus[0] += 1,
            -2 => minus[1] += 1,
            d => return Err(Error::Invariant(format!("curve {l} has degree {d} on C{k}"))),
        }
    }
    if minus != [st.pairs.len(), st.twos.len()] {
        return Err(Error::Invariant(format!("unmatched negative degrees on C{k}")));
    }
    Ok(st)
}

pub fn splitting_types(cs: &CurveSet) -> Result<Vec<SplittingType>> {
    (1..=cs.rank()).map(|k| splitting_type(cs, k)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentComponent {
    pub component: usize,
    pub entries: Vec<EtaEntry>,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub components: Vec<DescentComponent>,
    /// The analytic input: every class [φ_{C_k}|_{C_k}] is assumed nonzero.
    pub assumption: String,
    pub verdict: String,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.components.iter().all(|c| c.nonzero && !c.entries.is_empty())
    }
}

/// For every C_k, the η entries at positions (u, w) with l_u − l_w = C_k.
pub fn descent_report(eta: &EtaMatrix, cs: &CurveSet, sc: &StructureConstants) -> DescentReport {
    let components: Vec<DescentComponent> = (1..=cs.rank())
        .map(|k| {
            let ck = sc.roots.simple(k);
            let mut entries = Vec::new();
            let mut nonzero = true;
            for u in 0..cs.len() {
                for w in u + 1..cs.len() {
                    if sc.roots.index_of(&cs.difference(u, w)) != Some(ck) {
                        continue;
                    }
                    match eta.get(u, w) {
                        Some((_, s)) => entries.push(EtaEntry { i: u, j: w, root: ck, sign: s }),
                        None => nonzero = false,
                    }
                }
            }
            DescentComponent { component: k, entries, nonzero }
        })
        .collect();
    let ok = components.iter().all(|c| c.nonzero);
    DescentReport {
        components,
        assumption: "[phi_Ck|_Ck] != 0 for every k".into(),
        verdict: if ok {
            "every C_k carries a nonzero entry labelled C_k; descends given the assumption".into()
        } else {
            "some entry labelled C_k vanishes".into()
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistReport {
    pub b: DivisorClass,
    pub k: i64,
    /// B·C_i for i = 1..n.
    pub pairings: Vec<i64>,
    pub b_dot_c0: i64,
}

impl TwistReport {
    pub fn orthogonal(&self) -> bool {
        self.pairings.iter().all(|&p| p == 0)
    }
}

/// The twist divisor B with O(B) of degree 0 on every C_i.
pub fn twist_divisor(spec: DynkinSpec) -> Result<DivisorClass> {
    let n = spec.rank as i64;
    let k = spec.node as i64;
    let b = match (spec.family, spec.rank, spec.node) {
        (Family::A, _, _) => {
            let a: Vec<i64> = (1..=n).map(|i| i.min(k) * (n + 1 - i.max(k))).collect();
            DivisorClass::new(n + 1, &a)
        }
        (Family::D, _, 1) => {
            let mut a = vec![2; n as usize];
            a[n as usize - 2] = 1;
            a[n as usize - 1] = 1;
            DivisorClass::new(2, &a)
        }
        (Family::D, _, node) if node as i64 == n => {
            let mut a: Vec<i64> = (1..=n).map(|i| 2 * i).collect();
            a[n as usize - 2] = n - 2;
            a[n as usize - 1] = n;
            DivisorClass::new(4, &a)
        }
        (Family::E, 6, 1) => DivisorClass::new(3, &[4, 5, 6, 4, 2, 3]),
        (Family::E, 7, 1) => DivisorClass::new(2, &[3, 4, 5, 6, 4, 2, 3]),
        _ => return Err(Error::Undefined("twist divisor".into(), spec.label())),
    };
    Ok(b)
}

/// A variant of the A_n wedge divisor with no C_k term and with
/// (k−1)(n−k−1) at C_{k−1}; not orthogonal to the C_i.
pub fn wedge_twist_variant(n: usize, k: usize) -> DivisorClass {
    let (n, k) = (n as i64, k as i64);
    let a: Vec<i64> = (1..=n)
        .map(|i| match i {
            _ if i == k => 0,
            _ if i == k - 1 && k > 1 => (k - 1) * (n - k - 1),
            _ => i.min(k) * (n + 1 - i.max(k)),
        })
        .collect();
    DivisorClass::new(n + 1, &a)
}

pub fn twist_report(spec: DynkinSpec, b: DivisorClass) -> Result<TwistReport> {
    let l = build_lattice(spec)?;
    let full = b.to_full()?;
    let unit = |i: usize| {
        let mut v = vec![0i64; spec.rank + 1];
        v[i] = 1;
        v
    };
    let pairings = (1..=spec.rank).map(|i| l.pair_full(&full, &unit(i))).collect();
    let b_dot_c0 = l.pair_full(&full, &unit(0));
    Ok(TwistReport { k: full[0], b, pairings, b_dot_c0 })
}

pub fn descent_twist(spec: DynkinSpec) -> Result<TwistReport> {
    twist_report(spec, twist_divisor(spec)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernReport {
    pub c1: DivisorClass,
    pub c2: Option<usize>,
    pub dim_minus_rank: Option<usize>,
}

/// c₁ = Σ_{l∈I} l.
pub fn chern_rep(cs: &CurveSet) -> ChernReport {
    let mut v = vec![0i64; cs.rank() + 1];
    for c in cs.curves() {
        for (x, y) in v.iter_mut().zip(c) {
            *x += y;
        }
    }
    ChernReport { c1: DivisorClass::from_full(&v), c2: None, dim_minus_rank: None }
}

/// c₁ = Σ_{α∈Φ} α and c₂ = 2|Φ⁺|.
pub fn chern_adjoint(rs: &RootSystem) -> ChernReport {
    let n = rs.root(0).len();
    let mut v = vec![0i64; n];
    for r in rs.roots() {
        for (x, y) in v.iter_mut().zip(r) {
            *x += y;
        }
    }
    ChernReport {
        c1: DivisorClass::new(0, &v),
        c2: Some(2 * rs.num_positive()),
        dim_minus_rank: Some(rs.dimension() - n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::compute_structure_constants;
    use crate::curves::enumerate_curves;
    use crate::dbar::eta_from_rep;
    use crate::forms::compatible_action;
    use crate::minrep::build_action;
    use crate::rootsys::enumerate_roots;
    use num_bigint::BigInt;

    fn curves(f: Family, n: usize, k: usize) -> CurveSet {
        enumerate_curves(&build_lattice(DynkinSpec::new(f, n, k).unwrap()).unwrap()).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn shape(cs: &CurveSet) -> Vec<(usize, usize)> {
        splitting_types(cs).unwrap().iter().map(|s| (s.zeros, s.pairs.len())).collect()
    }

    #[test]
    fn known_splittings() {
        assert!(shape(&curves(Family::E, 6, 1)).iter().all(|&s| s == (15, 6)));
        assert!(shape(&curves(Family::E, 7, 1)).iter().all(|&s| s == (32, 12)));
        for n in 4..=7 {
            assert!(shape(&curves(Family::D, n, n)).iter().all(|&s| s == (1 << (n - 2), 1 << (n - 3))));
            assert!(shape(&curves(Family::D, n, 1)).iter().all(|&s| s == (2 * n - 4, 2)));
        }
    }

    #[test]
    fn wedge_oracle() {
        for n in 1..=7 {
            for k in 1..=n {
                let cs = curves(Family::A, n, k);
                for s in splitting_types(&cs).unwrap() {
                    assert_eq!(s.pairs.len(), binom(n - 1, k - 1));
                    assert_eq!(s.zeros, binom(n - 1, k) + if k >= 2 { binom(n - 1, k - 2) } else { 0 });
                }
            }
        }
    }

    #[test]
    fn e8_twos() {
        let cs = curves(Family::E, 8, 1);
        for s in splitting_types(&cs).unwrap() {
            assert_eq!(s.twos.len(), 1);
            assert_eq!(s.zeros + 2 * s.pairs.len() + 2 * s.twos.len(), 240);
        }
    }

    #[test]
    fn descent_entries() {
        let n = 5;
        for (f, k) in [(Family::A, 1), (Family::D, 1)] {
            let l = build_lattice(DynkinSpec::new(f, n, k).unwrap()).unwrap();
            let cs = enumerate_curves(&l).unwrap();
            let sc = compute_structure_constants(&enumerate_roots(&l));
            let (g, _) = compatible_action(&build_action(&cs, &sc).unwrap(), &cs, &sc, 1).unwrap();
            let eta = eta_from_rep(&cs, &g, &sc).unwrap();
            let r = descent_report(&eta, &cs, &sc);
            assert!(r.passed());
            let at = |i: usize| r.components[i - 1].entries.iter().map(|e| (e.i + 1, e.j + 1)).collect::<Vec<_>>();
            if f == Family::A {
                for i in 1..=n {
                    assert_eq!(at(i), vec![(n + 1 - i, n + 2 - i)]);
                }
            } else {
                assert_eq!(at(n), vec![(n - 1, n + 1), (n, n + 2)]);
            }
        }
    }

    #[test]
    fn twists_orthogonal() {
        let mut specs = vec![(Family::E, 6, 1), (Family::E, 7, 1)];
        for n in 1..=8 {
            for k in 1..=n {
                specs.push((Family::A, n, k));
            }
        }
        for n in 4..=8 {
            specs.push((Family::D, n, 1));
            specs.push((Family::D, n, n));
        }
        for (f, n, k) in specs {
            let r = descent_twist(DynkinSpec::new(f, n, k).unwrap()).unwrap();
            assert!(r.orthogonal(), "{f}{n} node {k}");
            assert_eq!(BigInt::from(r.k), r.b.c0);
        }
        let d4 = descent_twist(DynkinSpec::new(Family::D, 4, 4).unwrap()).unwrap();
        assert_eq!(d4.b, DivisorClass::new(4, &[2, 4, 2, 4]));
        assert!(descent_twist(DynkinSpec::new(Family::D, 5, 4).unwrap()).is_err());
    }

    #[test]
    fn wedge_variant_fails() {
        let spec = DynkinSpec::new(Family::A, 5, 3).unwrap();
        assert!(!twist_report(spec, wedge_twist_variant(5, 3)).unwrap().orthogonal());
    }

    #[test]
    fn chern_numbers() {
        for (f, n) in [(Family::A, 2), (Family::E, 8), (Family::D, 5)] {
            let rs = enumerate_roots(&build_lattice(DynkinSpec::new(f, n, 1).unwrap()).unwrap());
            let c = chern_adjoint(&rs);
            assert!(c.c1.is_zero());
            assert_eq!(c.c2, c.dim_minus_rank);
        }
        let rs = enumerate_roots(&build_lattice(DynkinSpec::new(Family::E, 8, 1).unwrap()).unwrap());
        assert_eq!(chern_adjoint(&rs).c2, Some(240));
        let cs = curves(Family::A, 2, 1);
        assert_eq!(chern_rep(&cs).c1, DivisorClass::new(3, &[2, 1]));
    }
}
