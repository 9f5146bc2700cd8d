//! Root system Φ = {α ∈ Λ : α² = −2} of the exceptional lattice.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, IntersectionLattice};

/// Roots are indexed: positives `0..P` in (height, lex) order, and the
/// negative of positive `p` at `P + p`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub rank: usize,
    gram: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    npos: usize,
}

fn dot(g: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut s = 0;
    for (i, &xi) in x.iter().enumerate() {
        if xi != 0 {
            for (j, &yj) in y.iter().enumerate() {
                s += xi * g[i][j] * yj;
            }
        }
    }
    s
}

fn root_order(a: &Vec<i64>, b: &Vec<i64>) -> std::cmp::Ordering {
    let ha: i64 = a.iter().sum();
    let hb: i64 = b.iter().sum();
    ha.cmp(&hb).then_with(|| a.cmp(b))
}

pub fn enumerate_roots(l: &IntersectionLattice) -> RootSystem {
    let g = l.root_gram();
    let n = l.rank();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(a) = queue.pop_front() {
        for i in 0..n {
            // α·Cᵢ = 1 ⇒ (α+Cᵢ)² = −2
            let p: i64 = (0..n).map(|j| a[j] * g[j][i]).sum();
            if p == 1 {
                let mut b = a.clone();
                b[i] += 1;
                if seen.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
        }
    }
    let mut pos: Vec<Vec<i64>> = seen.into_iter().collect();
    pos.sort_by(root_order);
    RootSystem::from_positive(n, g, pos)
}

impl RootSystem {
    fn from_positive(rank: usize, gram: Vec<Vec<i64>>, pos: Vec<Vec<i64>>) -> Self {
        let npos = pos.len();
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        RootSystem { rank, gram, roots, index, npos }
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn num_positive(&self) -> usize {
        self.npos
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive(&self) -> &[Vec<i64>] {
        &self.roots[..self.npos]
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.npos
    }

    pub fn neg(&self, i: usize) -> usize {
        if i < self.npos {
            i + self.npos
        } else {
            i - self.npos
        }
    }

    /// Index of the simple root Cᵢ, 1-based.
    pub fn simple(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank];
        e[i - 1] = 1;
        self.index[&e]
    }

    /// The simple node number if `i` is ±Cⱼ.
    pub fn simple_node(&self, i: usize) -> Option<usize> {
        let r = self.root(i);
        if r.iter().sum::<i64>() == 1 && r.iter().all(|&x| x >= 0) {
            r.iter().position(|&x| x == 1).map(|p| p + 1)
        } else {
            None
        }
    }

    /// Intersection-form pairing on Λ.
    pub fn dot(&self, x: &[i64], y: &[i64]) -> i64 {
        dot(&self.gram, x, y)
    }

    pub fn height(&self, i: usize) -> Result<i64> {
        if !self.is_positive(i) {
            return Err(Error::NotPositive(format!("{:?}", self.root(i))));
        }
        Ok(self.root(i).iter().sum())
    }

    /// Height of an arbitrary class vector on Λ; must be a positive root.
    pub fn height_of(&self, v: &[i64]) -> Result<i64> {
        match self.index_of(v) {
            Some(i) => self.height(i),
            None => Err(Error::NotPositive(format!("{v:?}"))),
        }
    }

    pub fn highest(&self) -> usize {
        self.npos - 1
    }

    /// Index of α + β when that is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i64> = self.root(a).iter().zip(self.root(b)).map(|(x, y)| x + y).collect();
        self.index_of(&s)
    }

    pub fn class(&self, i: usize) -> DivisorClass {
        DivisorClass::new(0, self.root(i))
    }

    /// (r, q): β − rα, …, β + qα is the α-string through β.
    pub fn alpha_string(&self, beta: &[i64], alpha: &[i64]) -> Result<(i64, i64)> {
        if !self.contains(beta) || !self.contains(alpha) {
            return Err(Error::NotPositive("not a root".into()));
        }
        let neg: Vec<i64> = alpha.iter().map(|x| -x).collect();
        if beta == alpha || beta == neg.as_slice() {
            return Err(Error::Dependent(format!("{beta:?} = ±{alpha:?}")));
        }
        let step = |k: i64| -> Vec<i64> { beta.iter().zip(alpha).map(|(b, a)| b + k * a).collect() };
        let mut r = 0;
        while self.contains(&step(-(r + 1))) {
            r += 1;
        }
        let mut q = 0;
        while self.contains(&step(q + 1)) {
            q += 1;
        }
        Ok((r, q))
    }

    pub fn dimension(&self) -> usize {
        self.len() + self.rank
    }
}

/// Every vector of Λ with entries in `[lo, hi]` and square −2.
pub fn box_scan(l: &IntersectionLattice, lo: i64, hi: i64) -> HashSet<Vec<i64>> {
    let g = l.root_gram();
    let n = l.rank();
    let mut out = HashSet::new();
    let mut v = vec![lo; n];
    loop {
        if dot(&g, &v, &v) == -2 {
            out.insert(v.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if v[i] < hi {
                v[i] += 1;
                break;
            }
            v[i] = lo;
            i += 1;
        }
    }
}

/// Oracle: non-negative roots from the box [0, 7]ⁿ together with their
/// negatives.
pub fn box_oracle(l: &IntersectionLattice) -> HashSet<Vec<i64>> {
    let pos = box_scan(l, 0, 7);
    let mut all = pos.clone();
    all.extend(pos.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
    all
}
