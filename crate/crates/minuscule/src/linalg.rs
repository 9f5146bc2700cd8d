//! Sparse exact Gaussian elimination over ℚ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type SparseRow = BTreeMap<usize, BigRational>;

pub fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Row echelon form built incrementally; each stored row has its pivot as
/// its smallest column, normalized to 1.
#[derive(Clone, Debug, Default)]
pub struct Eliminator {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

fn axpy(row: &mut SparseRow, c: &BigRational, other: &SparseRow) {
    for (&k, v) in other {
        let e = row.entry(k).or_insert_with(BigRational::zero);
        *e -= c * v;
        if e.is_zero() {
            row.remove(&k);
        }
    }
}

impl Eliminator {
    pub fn new(ncols: usize) -> Self {
        Eliminator { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Reduce and insert; returns whether the row was independent.
    pub fn add_row(&mut self, mut row: SparseRow) -> bool {
        row.retain(|_, v| !v.is_zero());
        loop {
            let Some((&c, _)) = row.iter().next() else { return false };
            match self.pivots.get(&c) {
                Some(p) => {
                    let f = row[&c].clone();
                    axpy(&mut row, &f, p);
                }
                None => {
                    let inv = BigRational::one() / &row[&c];
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(c, row);
                    return true;
                }
            }
        }
    }

    pub fn add_int_row(&mut self, row: &BTreeMap<usize, i64>) -> bool {
        self.add_row(row.iter().filter(|(_, &v)| v != 0).map(|(&k, &v)| (k, rat(v))).collect())
    }

    /// Basis of the null space, one vector per free column in ascending order.
    pub fn kernel(&self) -> Vec<SparseRow> {
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let later: Vec<usize> = r.keys().copied().filter(|&k| k != c && reduced.contains_key(&k)).collect();
            for k in later {
                if let Some(f) = r.get(&k).cloned() {
                    axpy(&mut r, &f, &reduced[&k]);
                }
            }
            reduced.insert(c, r);
        }
        (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|f| {
                let mut v = SparseRow::new();
                v.insert(f, BigRational::one());
                for (&p, row) in &reduced {
                    if let Some(x) = row.get(&f) {
                        v.insert(p, -x.clone());
                    }
                }
                v
            })
            .collect()
    }
}
