//! Intersection lattice of a resolved ADE singularity together with the
//! strict transform C₀ of a (−1)-curve through it.
//!
//! Basis order is (C₀, C₁, …, C_n). Node labels follow the chain-plus-branch
//! convention: A_n is the chain C₁–…–C_n, D_n hangs C_n off C_{n−2}, and E_n
//! hangs C_n off C_{n−3}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::D => "D",
            Family::E => "E",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DynkinSpec {
    pub family: Family,
    pub rank: usize,
    pub node: usize,
}

impl DynkinSpec {
    pub fn new(family: Family, rank: usize, node: usize) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidSpec(format!("{family}{rank} node {node}: {why}")));
        match family {
            Family::A if rank < 1 => return bad("A needs rank >= 1"),
            Family::D if rank < 4 => return bad("D needs rank >= 4"),
            Family::E if !(6..=8).contains(&rank) => return bad("E needs rank 6, 7 or 8"),
            _ => {}
        }
        if node < 1 || node > rank {
            return bad("node out of range");
        }
        let ok = match family {
            Family::A => true,
            Family::D => node == 1 || node == rank - 1 || node == rank,
            Family::E => match rank {
                6 => node == 1 || node == 5,
                7 | 8 => node == 1,
                _ => false,
            },
        };
        if !ok {
            return bad("not a minuscule node");
        }
        Ok(DynkinSpec { family, rank, node })
    }

    /// E₈ with node 1: the quasi-minuscule adjoint configuration.
    pub fn is_adjoint(&self) -> bool {
        self.family == Family::E && self.rank == 8
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.family, self.rank)
    }

    /// Edges of the Dynkin diagram, 1-based, each with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        let mut e = Vec::new();
        match self.family {
            Family::A => (1..n).for_each(|i| e.push((i, i + 1))),
            Family::D => {
                (1..n - 1).for_each(|i| e.push((i, i + 1)));
                e.push((n - 2, n));
            }
            Family::E => {
                (1..n - 1).for_each(|i| e.push((i, i + 1)));
                e.push((n - 3, n));
            }
        }
        e
    }
}

impl fmt::Display for DynkinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} node {}", self.family, self.rank, self.node)
    }
}

/// Parses `E6`, `D5`, `A3`, case-insensitive.
pub fn parse_type(s: &str) -> Result<(Family, usize)> {
    let s = s.trim();
    let mut chars = s.chars();
    let fam = match chars.next().map(|c| c.to_ascii_uppercase()) {
        Some('A') => Family::A,
        Some('D') => Family::D,
        Some('E') => Family::E,
        _ => return Err(Error::InvalidSpec(format!("unknown type {s:?}"))),
    };
    let rank = usize::from_str(chars.as_str())
        .map_err(|_| Error::InvalidSpec(format!("bad rank in {s:?}")))?;
    Ok((fam, rank))
}

/// Integer combination c₀C₀ + Σ aᵢCᵢ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub c0: BigInt,
    pub a: Vec<BigInt>,
}

impl DivisorClass {
    pub fn zero(n: usize) -> Self {
        DivisorClass { c0: BigInt::zero(), a: vec![BigInt::zero(); n] }
    }

    pub fn c0_unit(n: usize) -> Self {
        let mut d = Self::zero(n);
        d.c0 = BigInt::from(1);
        d
    }

    /// The class C_i, 1-based.
    pub fn simple(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n);
        d.a[i - 1] = BigInt::from(1);
        d
    }

    /// From a full coefficient vector (c₀ first).
    pub fn from_full(v: &[i64]) -> Self {
        DivisorClass { c0: BigInt::from(v[0]), a: v[1..].iter().map(|&x| BigInt::from(x)).collect() }
    }

    /// From c₀ and the C₁…C_n coefficients.
    pub fn new(c0: i64, a: &[i64]) -> Self {
        DivisorClass { c0: BigInt::from(c0), a: a.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.a.iter().all(Zero::is_zero)
    }

    pub fn height(&self) -> BigInt {
        self.a.iter().sum()
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        if i == 0 {
            &self.c0
        } else {
            &self.a[i - 1]
        }
    }

    /// Full coefficient vector as machine integers, if it fits.
    pub fn to_full(&self) -> Result<Vec<i64>> {
        std::iter::once(&self.c0)
            .chain(self.a.iter())
            .map(|x| x.to_i64().ok_or(Error::Overflow))
            .collect()
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for i in 0..=self.rank() {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            let name = format!("C{i}");
            terms.push(if *c == BigInt::from(1) { name } else { format!("{c}{name}") });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + ").replace("+ -", "- "))
        }
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rank() + 1))?;
        for x in std::iter::once(&self.c0).chain(self.a.iter()) {
            match x.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&x.to_string())?,
            }
        }
        seq.end()
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass {
            c0: &self.c0 + &o.c0,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        DivisorClass {
            c0: &self.c0 - &o.c0,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass { c0: -&self.c0, a: self.a.iter().map(|x| -x).collect() }
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: &DivisorClass) -> DivisorClass {
        DivisorClass { c0: &d.c0 * self, a: d.a.iter().map(|x| x * self).collect() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionLattice {
    pub spec: DynkinSpec,
    pub gram: Vec<Vec<i64>>,
    pub adjacency: Vec<(usize, usize)>,
}

pub fn build_lattice(spec: DynkinSpec) -> Result<IntersectionLattice> {
    let spec = DynkinSpec::new(spec.family, spec.rank, spec.node)?;
    let n = spec.rank;
    let mut gram = vec![vec![0i64; n + 1]; n + 1];
    gram[0][0] = -1;
    for i in 1..=n {
        gram[i][i] = -2;
    }
    let adjacency = spec.edges();
    for &(i, j) in &adjacency {
        gram[i][j] = 1;
        gram[j][i] = 1;
    }
    gram[0][spec.node] = 1;
    gram[spec.node][0] = 1;
    Ok(IntersectionLattice { spec, gram, adjacency })
}

impl IntersectionLattice {
    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn pair(&self, d1: &DivisorClass, d2: &DivisorClass) -> Result<BigInt> {
        let n = self.rank();
        if d1.rank() != n || d2.rank() != n {
            return Err(Error::Dimension(d1.rank(), d2.rank()));
        }
        let mut acc = BigInt::zero();
        for i in 0..=n {
            let x = d1.coeff(i);
            if x.is_zero() {
                continue;
            }
            for j in 0..=n {
                let g = self.gram[i][j];
                if g != 0 {
                    acc += x * d2.coeff(j) * g;
                }
            }
        }
        Ok(acc)
    }

    /// Pairing of full machine-integer vectors (c₀ first).
    pub fn pair_full(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                for (j, &yj) in y.iter().enumerate() {
                    acc += xi * self.gram[i][j] * yj;
                }
            }
        }
        acc
    }

    /// Pairing with the canonical class: K·Cᵢ = 0, K·C₀ = −1.
    pub fn k_degree(&self, d: &DivisorClass) -> BigInt {
        -&d.c0
    }

    /// ⟨α, C_i⟩ = −α·C_i.
    pub fn cartan_pairing(&self, d: &DivisorClass, i: usize) -> Result<BigInt> {
        Ok(-self.pair(d, &DivisorClass::simple(self.rank(), i))?)
    }

    /// Cartan matrix in the node labeling (negated Gram block on C₁…C_n).
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (1..=n).map(|i| (1..=n).map(|j| -self.gram[i][j]).collect()).collect()
    }

    /// Gram block on C₁…C_n.
    pub fn root_gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (1..=n).map(|i| (1..=n).map(|j| self.gram[i][j]).collect()).collect()
    }

    /// Leading principal minors of the Gram block on C₁…C_n.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let g = self.root_gram();
        (1..=self.rank()).map(|k| det(&g, k)).collect()
    }

    /// Determinant of the full Gram matrix including C₀. Its sign is not
    /// fixed: C₀ + Λ is indefinite whenever the dual weight of C_k has norm
    /// at least 1.
    pub fn full_determinant(&self) -> BigInt {
        det(&self.gram, self.rank() + 1)
    }

    /// Negative definiteness of the exceptional lattice Λ = ⊕ ℤCᵢ.
    pub fn is_negative_definite(&self) -> bool {
        self.leading_minors().iter().enumerate().all(|(k, m)| {
            let want_positive = (k + 1) % 2 == 0;
            if want_positive {
                *m > BigInt::zero()
            } else {
                *m < BigInt::zero()
            }
        })
    }
}

/// Determinant of the leading k×k block via fraction-free elimination.
fn det(m: &[Vec<i64>], k: usize) -> BigInt {
    let mut a: Vec<Vec<BigInt>> =
        (0..k).map(|i| (0..k).map(|j| BigInt::from(m[i][j])).collect()).collect();
    let mut sign = 1i64;
    let mut prev = BigInt::from(1);
    for p in 0..k {
        if a[p][p].is_zero() {
            match (p + 1..k).find(|&r| !a[r][p].is_zero()) {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                a[i][j] = (&a[i][j] * &a[p][p] - &a[i][p] * &a[p][j]) / &prev;
            }
            a[i][p] = BigInt::zero();
        }
        prev = a[p][p].clone();
    }
    prev * sign
}
