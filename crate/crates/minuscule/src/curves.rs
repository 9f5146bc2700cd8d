//! The set I of (−1)-curves l with π(l) = C₀: c₀ = 1, aᵢ ≥ 0, l² = −1.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, DynkinSpec, Family, IntersectionLattice};

/// Coefficient cap for the enumeration; every desk-scale curve stays far below.
const COEFF_CAP: i64 = 64;

#[derive(Clone, Debug)]
pub struct CurveSet {
    pub spec: DynkinSpec,
    pub lattice: IntersectionLattice,
    curves: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    pub special: BTreeMap<String, DivisorClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub max_height: i64,
    pub levels: Vec<Vec<usize>>,
}

pub fn height(l: &[i64]) -> i64 {
    l[1..].iter().sum()
}

/// Height descending; inside a layer ascending lex on (a₁…a_n).
fn curve_order(x: &[i64], y: &[i64]) -> std::cmp::Ordering {
    height(y).cmp(&height(x)).then_with(|| x[1..].cmp(&y[1..]))
}

pub fn enumerate_curves(l: &IntersectionLattice) -> Result<CurveSet> {
    let n = l.rank();
    let mut start = vec![0i64; n + 1];
    start[0] = 1;
    let mut seen: HashSet<Vec<i64>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        for i in 1..=n {
            // l·Cᵢ = p ∈ {1, 2} ⇒ (l + pCᵢ)² = −1; p = 2 only crosses the
            // zero weight in the quasi-minuscule case.
            let p: i64 = (0..=n).map(|j| c[j] * l.gram[j][i]).sum();
            if p == 1 || p == 2 {
                let mut d = c.clone();
                d[i] += p;
                if d[i] > COEFF_CAP {
                    return Err(Error::Overflow);
                }
                if seen.insert(d.clone()) {
                    queue.push_back(d);
                }
            }
        }
    }
    let mut curves: Vec<Vec<i64>> = seen.into_iter().collect();
    curves.sort_by(|x, y| curve_order(x, y));
    Ok(CurveSet::from_sorted(l.clone(), curves))
}

impl CurveSet {
    fn from_sorted(lattice: IntersectionLattice, curves: Vec<Vec<i64>>) -> Self {
        let index = curves.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let spec = lattice.spec;
        CurveSet { spec, lattice, curves, index, special: special_divisors(spec) }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    /// Full coefficient vector (c₀ first) of curve `i`, 0-based.
    pub fn curve(&self, i: usize) -> &[i64] {
        &self.curves[i]
    }

    pub fn curves(&self) -> &[Vec<i64>] {
        &self.curves
    }

    pub fn class(&self, i: usize) -> DivisorClass {
        DivisorClass::from_full(&self.curves[i])
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn pair(&self, i: usize, j: usize) -> i64 {
        self.lattice.pair_full(&self.curves[i], &self.curves[j])
    }

    /// l·Cₖ for node `k` 1-based.
    pub fn degree(&self, i: usize, k: usize) -> i64 {
        let c = &self.curves[i];
        (0..c.len()).map(|j| c[j] * self.lattice.gram[j][k]).sum()
    }

    pub fn height(&self, i: usize) -> i64 {
        height(&self.curves[i])
    }

    /// Full vector of a named special divisor.
    pub fn special_full(&self, name: &str) -> Result<Vec<i64>> {
        self.special
            .get(name)
            .ok_or_else(|| Error::Undefined(name.into(), self.spec.label()))?
            .to_full()
    }

    /// Index of l + Λ-vector `alpha` if that is a curve.
    pub fn shift(&self, i: usize, alpha: &[i64]) -> Option<usize> {
        let mut v = self.curves[i].clone();
        for (x, a) in v[1..].iter_mut().zip(alpha) {
            *x += a;
        }
        self.index_of(&v)
    }

    /// Λ-part of l_i − l_j.
    pub fn difference(&self, i: usize, j: usize) -> Vec<i64> {
        self.curves[i][1..].iter().zip(&self.curves[j][1..]).map(|(x, y)| x - y).collect()
    }
}

pub fn order_and_filter(cs: &CurveSet) -> Filtration {
    let m = (0..cs.len()).map(|i| cs.height(i)).max().unwrap_or(0);
    let levels = (0..=m)
        .map(|i| (0..cs.len()).filter(|&j| cs.height(j) <= m - i).collect())
        .collect();
    Filtration { max_height: m, levels }
}

/// Per curve: value l·l′ ↦ number of l′ ≠ l attaining it.
pub fn intersection_profile(cs: &CurveSet) -> Vec<BTreeMap<i64, usize>> {
    (0..cs.len())
        .map(|i| {
            let mut m = BTreeMap::new();
            for j in 0..cs.len() {
                if j != i {
                    *m.entry(cs.pair(i, j)).or_insert(0) += 1;
                }
            }
            m
        })
        .collect()
}

fn require(cs: &CurveSet, family: Family, rank: usize, what: &str) -> Result<()> {
    if cs.spec.family != family || cs.spec.rank != rank || cs.spec.node != 1 {
        return Err(Error::Undefined(what.into(), cs.spec.to_string()));
    }
    Ok(())
}

/// Triples i < j < k with l_i + l_j + l_k = K′ (E₆ node 1).
pub fn triangles(cs: &CurveSet) -> Result<Vec<[usize; 3]>> {
    require(cs, Family::E, 6, "triangles")?;
    let k = cs.special_full("K'")?;
    let mut out = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let rest: Vec<i64> = (0..k.len()).map(|t| k[t] - cs.curve(i)[t] - cs.curve(j)[t]).collect();
            if let Some(m) = cs.index_of(&rest) {
                if m > j {
                    out.push([i, j, m]);
                }
            }
        }
    }
    Ok(out)
}

/// Quadruples i < j < p < q of distinct curves with sum 2K′ (E₇ node 1).
pub fn quadrangles(cs: &CurveSet) -> Result<Vec<[usize; 4]>> {
    require(cs, Family::E, 7, "quadrangles")?;
    let k: Vec<i64> = cs.special_full("K'")?.iter().map(|x| 2 * x).collect();
    let n = cs.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for p in j + 1..n {
                let rest: Vec<i64> = (0..k.len())
                    .map(|t| k[t] - cs.curve(i)[t] - cs.curve(j)[t] - cs.curve(p)[t])
                    .collect();
                if let Some(q) = cs.index_of(&rest) {
                    if q > p {
                        out.push([i, j, p, q]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// F, H and K′ for each family (empty for A).
pub fn special_divisors(spec: DynkinSpec) -> BTreeMap<String, DivisorClass> {
    let n = spec.rank;
    let mut m = BTreeMap::new();
    match (spec.family, n) {
        (Family::D, _) => {
            let mut a = vec![2i64; n];
            a[n - 2] = 1;
            a[n - 1] = 1;
            m.insert("F".into(), DivisorClass::new(2, &a));
        }
        (Family::E, 6) => {
            m.insert("H".into(), DivisorClass::new(3, &[3, 3, 3, 2, 1, 1]));
            m.insert("K'".into(), DivisorClass::new(3, &[4, 5, 6, 4, 2, 3]));
        }
        (Family::E, 7) => {
            m.insert("H".into(), DivisorClass::new(3, &[3, 3, 3, 3, 2, 1, 1]));
            m.insert("K'".into(), DivisorClass::new(2, &[3, 4, 5, 6, 4, 2, 3]));
        }
        (Family::E, 8) => {
            m.insert("H".into(), DivisorClass::new(3, &[3, 3, 3, 3, 3, 2, 1, 1]));
            m.insert("K'".into(), DivisorClass::new(1, &[2, 3, 4, 5, 6, 4, 2, 3]));
        }
        _ => {}
    }
    m
}

pub fn special_divisor(spec: DynkinSpec, name: &str) -> Result<DivisorClass> {
    special_divisors(spec).remove(name).ok_or_else(|| Error::Undefined(name.into(), spec.label()))
}

/// Oracle: every c₀ = 1 class with coefficients in [0, hi] and square −1.
pub fn curve_box_scan(l: &IntersectionLattice, hi: i64) -> HashSet<Vec<i64>> {
    let n = l.rank();
    let mut out = HashSet::new();
    let mut v = vec![0i64; n + 1];
    v[0] = 1;
    loop {
        if l.pair_full(&v, &v) == -1 {
            out.insert(v.clone());
        }
        let mut i = 1;
        loop {
            if i > n {
                return out;
            }
            if v[i] < hi {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}
