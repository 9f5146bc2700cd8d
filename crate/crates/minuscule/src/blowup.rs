//! Picard lattices of iterated point blowups, the chain, ruling and
//! three-arm recipes, and verification that they realise a minuscule
//! configuration.

use petgraph::algo::subgraph_isomorphisms_iter;
use petgraph::graph::UnGraph;
use serde::Serialize;

use crate::curves::enumerate_curves;
use crate::error::{Error, Result};
use crate::lattice::{DynkinSpec, Family, IntersectionLattice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrackedCurve {
    pub name: String,
    /// Coordinates in the current basis.
    pub class: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupSurface {
    pub basis: Vec<String>,
    pub gram: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    pub curves: Vec<TrackedCurve>,
    /// Tracked ids of the final (−1)-class of each construction arm.
    pub terminals: Vec<usize>,
    pub steps: Vec<BlowupStep>,
}

/// One point blowup: the tracked curves through the centre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct BlowupStep {
    pub on: Vec<usize>,
}

impl BlowupSurface {
    /// P² with the line class L.
    pub fn plane() -> Self {
        BlowupSurface {
            basis: vec!["L".into()],
            gram: vec![vec![1]],
            canonical: vec![-3],
            curves: vec![TrackedCurve { name: "C".into(), class: vec![1] }],
            terminals: vec![],
            steps: vec![],
        }
    }

    /// P¹×P¹ with the rulings D and S.
    pub fn quadric() -> Self {
        BlowupSurface {
            basis: vec!["D".into(), "S".into()],
            gram: vec![vec![0, 1], vec![1, 0]],
            canonical: vec![-2, -2],
            curves: vec![TrackedCurve { name: "D".into(), class: vec![1, 0] }],
            terminals: vec![],
            steps: vec![],
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn dot(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                s += xi * self.gram[i][j] * yj;
            }
        }
        s
    }

    pub fn self_intersection(&self, c: usize) -> i64 {
        let v = &self.curves[c].class;
        self.dot(v, v)
    }

    pub fn k_degree(&self, c: usize) -> i64 {
        self.dot(&self.canonical, &self.curves[c].class)
    }

    pub fn nodes(&self) -> Vec<usize> {
        (0..self.curves.len()).filter(|&c| self.self_intersection(c) == -2).collect()
    }
}

/// Blow up a point lying on the listed tracked curves; returns the id of the
/// new exceptional curve.
pub fn blowup(s: &mut BlowupSurface, on: &[usize]) -> usize {
    let r = s.rank();
    let e = s.curves.iter().filter(|c| c.name.starts_with('e')).count() + 1;
    s.basis.push(format!("e{e}"));
    for row in &mut s.gram {
        row.push(0);
    }
    let mut last = vec![0; r + 1];
    last[r] = -1;
    s.gram.push(last);
    s.canonical.push(1);
    for c in &mut s.curves {
        c.class.push(0);
    }
    for &c in on {
        s.curves[c].class[r] = -1;
    }
    let mut class = vec![0; r + 1];
    class[r] = 1;
    s.curves.push(TrackedCurve { name: format!("e{e}"), class });
    s.steps.push(BlowupStep { on: on.to_vec() });
    s.curves.len() - 1
}

/// n + 1 iterated blowups starting from a general point of P².
pub fn construct_chain(n: usize) -> BlowupSurface {
    let mut s = BlowupSurface::plane();
    let mut last = blowup(&mut s, &[]);
    for _ in 0..n {
        last = blowup(&mut s, &[last]);
    }
    s.terminals = vec![last];
    s
}

/// From a ruling D with D² = 0: blow up a point of D, then the meeting point
/// of the two (−1)-curves, then n − 2 iterated blowups.
pub fn construct_ruling(n: usize) -> BlowupSurface {
    let mut s = BlowupSurface::quadric();
    let e1 = blowup(&mut s, &[0]);
    let mut last = blowup(&mut s, &[0, e1]);
    for _ in 2..n {
        last = blowup(&mut s, &[last]);
    }
    s.terminals = vec![last];
    s
}

/// Three points on a line C of P², then m_i iterated blowups per arm.
pub fn construct_three_arm(m: [usize; 3]) -> BlowupSurface {
    let mut s = BlowupSurface::plane();
    let heads: Vec<usize> = (0..3).map(|_| blowup(&mut s, &[0])).collect();
    s.terminals = heads
        .iter()
        .zip(m)
        .map(|(&h, mi)| (0..mi).fold(h, |last, _| blowup(&mut s, &[last])))
        .collect();
    s
}

/// Replay a list of steps on a starting surface.
pub fn replay(mut s: BlowupSurface, steps: &[BlowupStep]) -> Result<BlowupSurface> {
    for st in steps {
        if let Some(&bad) = st.on.iter().find(|&&c| c >= s.curves.len()) {
            return Err(Error::InvalidSpec(format!("step refers to untracked curve {bad}")));
        }
        blowup(&mut s, &st.on);
    }
    Ok(s)
}

/// (m₁, m₂, m₃) and the arm carrying the (−1)-curve for each table row.
pub fn table_row(spec: DynkinSpec) -> Result<([usize; 3], usize)> {
    let (n, k) = (spec.rank, spec.node);
    Ok(match (spec.family, n) {
        (Family::A, _) => ([k - 1, 0, n - k], 1),
        (Family::D, _) if k == 1 => ([n - 3, 1, 1], 0),
        (Family::D, _) => ([n - 3, 1, 1], if k == n - 1 { 1 } else { 2 }),
        (Family::E, 6) => ([2, 1, 2], if k == 1 { 0 } else { 2 }),
        (Family::E, 7) => ([3, 1, 2], 0),
        _ => return Err(Error::Undefined("three-arm construction".into(), spec.to_string())),
    })
}

pub fn minuscule_dimension(spec: DynkinSpec) -> usize {
    let (n, k) = (spec.rank, spec.node);
    match (spec.family, n) {
        (Family::A, _) => (0..k).fold(1, |acc, i| acc * (n + 1 - i) / (i + 1)),
        (Family::D, _) if k == 1 => 2 * n,
        (Family::D, _) => 1 << (n - 1),
        (Family::E, 6) => 27,
        (Family::E, 7) => 56,
        _ => 240,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigReport {
    pub spec: DynkinSpec,
    pub nodes: usize,
    pub isomorphic: bool,
    /// Tracked curve id realising C_i, for i = 1..n.
    pub labelling: Vec<usize>,
    pub terminal_meets_one: bool,
    pub gram_matches: bool,
    pub canonical_ok: bool,
    pub curves_found: usize,
    pub expected: usize,
    pub lifted_ok: bool,
}

impl ConfigReport {
    pub fn passed(&self) -> bool {
        self.isomorphic
            && self.terminal_meets_one
            && self.gram_matches
            && self.canonical_ok
            && self.curves_found == self.expected
            && self.lifted_ok
    }
}

/// Match the (−2)-curves with the Dynkin diagram so that the curve met by the
/// terminal (−1)-curve is C_k, then recount I inside the surface lattice.
pub fn verify_configuration(s: &BlowupSurface, spec: DynkinSpec, terminal: usize) -> Result<ConfigReport> {
    let nodes = s.nodes();
    let n = spec.rank;
    let mut rep = ConfigReport {
        spec,
        nodes: nodes.len(),
        isomorphic: false,
        labelling: vec![],
        terminal_meets_one: false,
        gram_matches: false,
        canonical_ok: false,
        curves_found: 0,
        expected: minuscule_dimension(spec),
        lifted_ok: false,
    };
    let meets: Vec<i64> = nodes.iter().map(|&c| s.dot(&s.curves[c].class, &s.curves[terminal].class)).collect();
    rep.terminal_meets_one =
        s.self_intersection(terminal) == -1 && meets.iter().filter(|&&m| m == 1).count() == 1 && meets.iter().all(|&m| m == 0 || m == 1);
    rep.canonical_ok = s.k_degree(terminal) == -1 && nodes.iter().all(|&c| s.k_degree(c) == 0);
    if nodes.len() != n || !rep.terminal_meets_one {
        return Ok(rep);
    }

    let mut dynkin = UnGraph::<bool, ()>::new_undirected();
    let dn: Vec<_> = (1..=n).map(|i| dynkin.add_node(i == spec.node)).collect();
    for (i, j) in spec.edges() {
        dynkin.add_edge(dn[i - 1], dn[j - 1], ());
    }
    let mut surf = UnGraph::<bool, ()>::new_undirected();
    let sn: Vec<_> = meets.iter().map(|&m| surf.add_node(m == 1)).collect();
    for a in 0..n {
        for b in a + 1..n {
            if s.dot(&s.curves[nodes[a]].class, &s.curves[nodes[b]].class) != 0 {
                surf.add_edge(sn[a], sn[b], ());
            }
        }
    }
    if dynkin.edge_count() != surf.edge_count() {
        return Ok(rep);
    }
    let mut nm = |a: &bool, b: &bool| a == b;
    let mut em = |_: &(), _: &()| true;
    let mapping = subgraph_isomorphisms_iter(&&dynkin, &&surf, &mut nm, &mut em).and_then(|mut it| it.next());
    let Some(mapping) = mapping else { return Ok(rep) };
    rep.isomorphic = true;
    rep.labelling = mapping.iter().map(|&m| nodes[m]).collect();

    // Basis (C₀, C₁, …, C_n) realised by the terminal and the labelled nodes.
    let ids: Vec<usize> = std::iter::once(terminal).chain(rep.labelling.iter().copied()).collect();
    let gram: Vec<Vec<i64>> =
        ids.iter().map(|&a| ids.iter().map(|&b| s.dot(&s.curves[a].class, &s.curves[b].class)).collect()).collect();
    let lattice = crate::lattice::build_lattice(spec)?;
    rep.gram_matches = gram == lattice.gram;
    let inner = IntersectionLattice { spec, gram, adjacency: spec.edges() };
    let found = enumerate_curves(&inner)?;
    rep.curves_found = found.len();
    rep.lifted_ok = found.curves().iter().all(|c| {
        let mut v = vec![0i64; s.rank()];
        for (coef, &id) in c.iter().zip(&ids) {
            for (x, y) in v.iter_mut().zip(&s.curves[id].class) {
                *x += coef * y;
            }
        }
        s.dot(&v, &v) == -1 && s.dot(&s.canonical, &v) == -1
    });
    Ok(rep)
}

pub fn verify_table_row(spec: DynkinSpec) -> Result<ConfigReport> {
    let (m, arm) = table_row(spec)?;
    let s = construct_three_arm(m);
    verify_configuration(&s, spec, s.terminals[arm])
}
