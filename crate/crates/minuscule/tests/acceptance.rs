//! One line per acceptance criterion. Tolerances are exact (zero) except the
//! pinned wall-clock budgets below. Criterion 7 is expected to fail on its
//! E₇ "±1 coefficients" clause; any other failure exits nonzero.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use minuscule::blowup::{construct_chain, construct_ruling, verify_configuration, verify_table_row};
use minuscule::branching::*;
use minuscule::chevalley::{compute_structure_constants, verify_jacobi, JacobiMode, StructureConstants};
use minuscule::curves::{enumerate_curves, intersection_profile, triangles, CurveSet};
use minuscule::dbar::{block_shape_check, eta_from_rep, form_compatibility_check, nilpotence_adjoint, nilpotence_rep, EtaMatrix};
use minuscule::descent::{chern_adjoint, descent_twist, wedge_twist_variant, splitting_types, twist_report};
use minuscule::forms::{aut_dimension, compatible_action, default_target, solve_invariant_form, verify_aut};
use minuscule::lattice::{build_lattice, DynkinSpec, Family};
use minuscule::minrep::{build_action, verify_module, RepAction};
use minuscule::rootsys::{box_oracle, enumerate_roots, RootSystem};

const CURVE_BUDGET: Duration = Duration::from_secs(10);
const MODULE_BUDGET: Duration = Duration::from_secs(120);
const E6_ADJOINT_BUDGET: Duration = Duration::from_secs(300);
const E8_SAMPLES: usize = 100_000;
const SEED: u64 = 1;
const EXPECTED_RED: &[usize] = &[7];

fn spec(f: Family, n: usize, k: usize) -> DynkinSpec {
    DynkinSpec::new(f, n, k).unwrap()
}

fn curves(s: DynkinSpec) -> CurveSet {
    enumerate_curves(&build_lattice(s).unwrap()).unwrap()
}

fn roots(f: Family, n: usize) -> RootSystem {
    enumerate_roots(&build_lattice(spec(f, n, 1)).unwrap())
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every minuscule configuration up to rank 8 (A_n for n ≤ 8).
fn minuscule_specs(max_a: usize, max_d: usize) -> Vec<DynkinSpec> {
    let mut v = Vec::new();
    for n in 1..=max_a {
        v.extend((1..=n).map(|k| spec(Family::A, n, k)));
    }
    for n in 4..=max_d {
        v.extend([spec(Family::D, n, 1), spec(Family::D, n, n - 1), spec(Family::D, n, n)]);
    }
    v.extend([spec(Family::E, 6, 1), spec(Family::E, 6, 5), spec(Family::E, 7, 1)]);
    v
}

struct Gauged {
    cs: CurveSet,
    sc: StructureConstants,
    action: RepAction,
    eta: EtaMatrix,
}

fn gauged(s: DynkinSpec) -> Gauged {
    let l = build_lattice(s).unwrap();
    let cs = enumerate_curves(&l).unwrap();
    let sc = compute_structure_constants(&enumerate_roots(&l));
    let (action, _) = compatible_action(&build_action(&cs, &sc).unwrap(), &cs, &sc, SEED).unwrap();
    let eta = eta_from_rep(&cs, &action, &sc).unwrap();
    Gauged { cs, sc, action, eta }
}

fn c1() -> (bool, String) {
    let t = Instant::now();
    let mut bad = Vec::new();
    let mut cases = 0;
    let mut check = |s: DynkinSpec, want: usize| {
        cases += 1;
        let got = curves(s).len();
        if got != want {
            bad.push(format!("{s}: {got} != {want}"));
        }
    };
    for n in 1..=8 {
        for k in 1..=n {
            check(spec(Family::A, n, k), binom(n + 1, k));
        }
    }
    for n in 4..=8 {
        check(spec(Family::D, n, 1), 2 * n);
        check(spec(Family::D, n, n), 1 << (n - 1));
    }
    check(spec(Family::E, 6, 1), 27);
    check(spec(Family::E, 7, 1), 56);
    check(spec(Family::E, 8, 1), 240);
    let el = t.elapsed();
    (bad.is_empty() && el < CURVE_BUDGET, format!("{cases} cases, mismatches {bad:?}, {el:.2?} (budget {CURVE_BUDGET:?})"))
}

fn c2() -> (bool, String) {
    let mut bad = Vec::new();
    let mut cases: Vec<(Family, usize, usize)> = (1..=8).map(|n| (Family::A, n, n * (n + 1))).collect();
    cases.extend((4..=8).map(|n| (Family::D, n, 2 * n * (n - 1))));
    cases.extend([(Family::E, 6, 72), (Family::E, 7, 126), (Family::E, 8, 240)]);
    for &(f, n, want) in &cases {
        let l = build_lattice(spec(f, n, 1)).unwrap();
        let rs = enumerate_roots(&l);
        let bfs: BTreeSet<Vec<i64>> = rs.roots().iter().cloned().collect();
        let oracle: BTreeSet<Vec<i64>> = box_oracle(&l).into_iter().collect();
        if rs.len() != want || bfs != oracle {
            bad.push(format!("{f}{n}: {} (want {want}), oracle equal {}", rs.len(), bfs == oracle));
        }
    }
    (bad.is_empty(), format!("{} root systems, BFS = box oracle; mismatches {bad:?}", cases.len()))
}

/// Triangles by pairwise intersection only, independent of K′.
fn triangle_oracle(cs: &CurveSet) -> BTreeSet<[usize; 3]> {
    let mut out = BTreeSet::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            for k in j + 1..cs.len() {
                if cs.pair(i, j) == 1 && cs.pair(i, k) == 1 && cs.pair(j, k) == 1 {
                    out.insert([i, j, k]);
                }
            }
        }
    }
    out
}

fn c3() -> (bool, String) {
    let e6 = curves(spec(Family::E, 6, 1));
    let meets10 = intersection_profile(&e6).iter().all(|m| m.get(&1) == Some(&10));
    let tri = triangles(&e6).unwrap();
    let five = (0..27).all(|i| tri.iter().filter(|t| t.contains(&i)).count() == 5);
    let oracle = triangle_oracle(&e6);
    let again = triangle_oracle(&curves(spec(Family::E, 6, 1)));
    let tri_set: BTreeSet<[usize; 3]> = tri.iter().copied().collect();
    let stable = oracle == again && oracle == tri_set;
    let e7 = curves(spec(Family::E, 7, 1));
    let prof = intersection_profile(&e7).iter().all(|m| m.get(&1) == Some(&27) && m.get(&2) == Some(&1));
    let k = e7.special_full("K'").unwrap();
    let sums = (0..56).all(|i| {
        (0..56).filter(|&j| j != i && e7.pair(i, j) == 2).all(|j| (0..8).all(|t| e7.curve(i)[t] + e7.curve(j)[t] == k[t]))
    });
    (
        meets10 && five && stable && prof && sums,
        format!(
            "E6 meets 10: {meets10}, 5 triangles per curve: {five}, oracle triangles {} stable: {stable}; E7 profile (27x1, 1x2): {prof}, twice-pairs sum to K': {sums}",
            oracle.len()
        ),
    )
}

fn c4() -> (bool, String) {
    let mut bad = Vec::new();
    let mut expect = |s: DynkinSpec, want: (usize, usize)| {
        for t in splitting_types(&curves(s)).unwrap() {
            if (t.zeros, t.pairs.len()) != want || !t.twos.is_empty() {
                bad.push(format!("{s} C{}: ({}, {})", t.component, t.zeros, t.pairs.len()));
            }
        }
    };
    for n in 1..=8 {
        expect(spec(Family::A, n, 1), (n - 1, 1));
    }
    for n in 4..=8 {
        expect(spec(Family::D, n, 1), (2 * n - 4, 2));
        expect(spec(Family::D, n, n), (1 << (n - 2), 1 << (n - 3)));
    }
    expect(spec(Family::E, 6, 1), (15, 6));
    expect(spec(Family::E, 7, 1), (32, 12));
    (bad.is_empty(), format!("A1-A8 std, D4-D8 std and spinor, E6, E7 on every C_i; mismatches {bad:?}"))
}

fn c5() -> (bool, String) {
    let mut bad = Vec::new();
    let mut exhaustive: Vec<(Family, usize)> = (1..=7).map(|n| (Family::A, n)).collect();
    exhaustive.extend((4..=7).map(|n| (Family::D, n)));
    exhaustive.extend([(Family::E, 6), (Family::E, 7)]);
    for &(f, n) in &exhaustive {
        let r = verify_jacobi(&compute_structure_constants(&roots(f, n)), JacobiMode::Exhaustive);
        if !r.passed() {
            bad.push(format!("{f}{n}: {:?}", r.witness));
        }
    }
    let mode = if std::env::var_os("ADE_EXHAUSTIVE").is_some() {
        JacobiMode::Exhaustive
    } else {
        JacobiMode::Sampled { samples: E8_SAMPLES, seed: SEED }
    };
    let e8 = verify_jacobi(&compute_structure_constants(&roots(Family::E, 8)), mode);
    if !e8.passed() {
        bad.push(format!("E8: {:?}", e8.witness));
    }
    (bad.is_empty(), format!("exhaustive A1-A7, D4-D7, E6, E7; E8 {:?} ({} triples); failures {bad:?}", e8.mode, e8.checked))
}

fn c6() -> (bool, String) {
    let t = Instant::now();
    let specs = minuscule_specs(7, 7);
    let mut bad = Vec::new();
    let mut checks = 0;
    for &s in &specs {
        let l = build_lattice(s).unwrap();
        let cs = enumerate_curves(&l).unwrap();
        let sc = compute_structure_constants(&enumerate_roots(&l));
        let r = verify_module(&build_action(&cs, &sc).unwrap(), &sc);
        checks += r.checks;
        if !r.passed() {
            bad.push(format!("{s}: {:?}", r.witness));
        }
    }
    let el = t.elapsed();
    (
        bad.is_empty() && el < MODULE_BUDGET,
        format!("{} representations, {checks} identities, failures {bad:?}, {el:.2?} (budget {MODULE_BUDGET:?})", specs.len()),
    )
}

fn c7() -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut cases: Vec<DynkinSpec> = (4..=7).map(|n| spec(Family::D, n, 1)).collect();
    cases.extend([spec(Family::E, 6, 1), spec(Family::E, 7, 1)]);
    for s in cases {
        let g = gauged(s);
        let (r, target) = default_target(&g.cs).unwrap();
        let form = solve_invariant_form(&g.action, &g.cs, &g.sc, r, &target);
        let Ok(f) = form else {
            ok = false;
            parts.push(format!("{}: {:?}", s.label(), form.err()));
            continue;
        };
        let aut = verify_aut(&g.action, &g.cs, &g.sc, &f).unwrap();
        let dim = aut_dimension(&g.cs, Some(&f), false).unwrap();
        let want = enumerate_roots(&g.cs.lattice).len() + s.rank;
        let unit = f.is_unit();
        ok &= unit && aut.passed() && dim == want;
        parts.push(format!(
            "{}: nullity 1, unit {unit}{}, aut {}, dim {dim}/{want}",
            s.label(),
            if unit { String::new() } else { format!(" {:?}", f.magnitudes()) },
            aut.passed()
        ));
    }
    (ok, parts.join("; "))
}

fn c8() -> (bool, String) {
    let mut bad = Vec::new();
    let mut e6_time = Duration::ZERO;
    let mut cases: Vec<DynkinSpec> = (1..=5).map(|n| spec(Family::A, n, 1)).collect();
    cases.extend([spec(Family::D, 4, 1), spec(Family::D, 5, 1), spec(Family::E, 6, 1), spec(Family::E, 7, 1)]);
    for s in cases {
        let g = gauged(s);
        let t = Instant::now();
        let adj = nilpotence_adjoint(&g.sc);
        if s.family == Family::E && s.rank == 6 {
            e6_time = t.elapsed();
        }
        let rep = nilpotence_rep(&g.sc, &g.eta);
        if !adj.passed() || !rep.passed() {
            bad.push(format!("{s}: adjoint residue {}, rep residue {}", adj.residue.len(), rep.residue.len()));
        }
    }
    (
        bad.is_empty() && e6_time < E6_ADJOINT_BUDGET,
        format!("adjoint and standard for A1-A5, D4, D5, E6, E7; failures {bad:?}; E6 adjoint {e6_time:.2?} (budget {E6_ADJOINT_BUDGET:?})"),
    )
}

fn c9() -> (bool, String) {
    let mut bad = Vec::new();
    for s in minuscule_specs(7, 7) {
        if !gauged(s).eta.is_upper_triangular() {
            bad.push(format!("{s} not upper triangular"));
        }
    }
    for n in 4..=7 {
        let g = gauged(spec(Family::D, n, 1));
        let (r, t) = default_target(&g.cs).unwrap();
        let q = solve_invariant_form(&g.action, &g.cs, &g.sc, r, &t).unwrap();
        let c = form_compatibility_check(&g.eta, &q, &g.cs, &g.sc).unwrap();
        if c.partner_relation != Some(true) || c.middle_zero != Some(true) || !c.invariant {
            bad.push(format!("D{n} partner relation"));
        }
        let sp = gauged(spec(Family::D, n, n));
        let b = block_shape_check(&sp.eta, &sp.cs, &sp.sc, n);
        if b.node_entries != 1 << (n - 3) || !b.passed() {
            bad.push(format!("D{n} spinor C{n} entries {}", b.node_entries));
        }
    }
    for (n, per, half) in [(6, 6, 3), (7, 12, 6)] {
        let g = gauged(spec(Family::E, n, 1));
        let (r, t) = default_target(&g.cs).unwrap();
        let f = solve_invariant_form(&g.action, &g.cs, &g.sc, r, &t).unwrap();
        let c = form_compatibility_check(&g.eta, &f, &g.cs, &g.sc).unwrap();
        if !c.invariant || !c.patterns.iter().all(|p| p.entries == per && p.plus == half) {
            bad.push(format!("E{n} sign pattern"));
        }
    }
    for n in 1..=7 {
        let g = gauged(spec(Family::A, n, 1));
        for i in 1..=n {
            let b = block_shape_check(&g.eta, &g.cs, &g.sc, i);
            if b.pairs != vec![(n - i, n + 1 - i)] || !b.passed() {
                bad.push(format!("A{n} C{i} at {:?}", b.pairs));
            }
        }
    }
    (bad.is_empty(), format!("triangularity, D4-D7 partners, E6 3/3, E7 6/6, spinor 2^(n-3), A_n descent entries; failures {bad:?}"))
}

fn c10() -> (bool, String) {
    let mut bad = Vec::new();
    for n in 4..=8 {
        let r = branch_dn_std(&curves(spec(Family::D, n, 1))).unwrap();
        if !r.exact || r.sizes() != vec![n, n] {
            bad.push(format!("D{n} std {:?}", r.sizes()));
        }
        let r = branch_dn_spinor(&curves(spec(Family::D, n, n))).unwrap();
        let want: Vec<usize> = (0..=n / 2).map(|m| binom(n, 2 * m)).collect();
        if !r.exact || r.sizes() != want || r.sizes().iter().sum::<usize>() != 1 << (n - 1) {
            bad.push(format!("D{n} spinor {:?}", r.sizes()));
        }
    }
    for n in 1..=8 {
        for k in 1..=n {
            let r = branch_an_wedge(&curves(spec(Family::A, n, k))).unwrap();
            if !r.exact {
                bad.push(format!("A{n} wedge {k}: {:?}", r.witness));
            }
        }
    }
    let e6 = branch_e6(&curves(spec(Family::E, 6, 1))).unwrap();
    let e7 = branch_e7(&curves(spec(Family::E, 7, 1))).unwrap();
    if !e6.exact || e6.sizes() != vec![6, 15, 6] {
        bad.push(format!("E6 {:?}", e6.sizes()));
    }
    if !e7.exact || e7.sizes() != vec![7, 21, 21, 7] {
        bad.push(format!("E7 {:?}", e7.sizes()));
    }
    let rs = roots(Family::E, 8);
    let a7 = branch_e8(&rs, 8).unwrap().summands;
    let d7 = branch_e8(&rs, 7).unwrap().summands;
    if a7 != vec![8, 28, 56, 64, 56, 28, 8] || d7 != vec![14, 64, 1, 91, 64, 14] {
        bad.push(format!("E8 {a7:?} {d7:?}"));
    }
    (
        bad.is_empty(),
        format!("D std n+n, spinor 2^(n-1), A wedge bijections, E6 {:?}, E7 {:?}, E8 {a7:?} and {d7:?}; failures {bad:?}", e6.sizes(), e7.sizes()),
    )
}

fn c11() -> (bool, String) {
    let mut bad = Vec::new();
    let mut cases = vec![spec(Family::E, 6, 1), spec(Family::E, 7, 1)];
    for n in 1..=8 {
        cases.extend((1..=n).map(|k| spec(Family::A, n, k)));
    }
    for n in 4..=8 {
        cases.extend([spec(Family::D, n, 1), spec(Family::D, n, n)]);
    }
    for &s in &cases {
        let r = descent_twist(s).unwrap();
        if !r.orthogonal() || num_bigint::BigInt::from(r.k) != r.b.c0 || r.k == 0 {
            bad.push(format!("{s}: {:?}", r.pairings));
        }
    }
    let variant_fails = (2..=8)
        .flat_map(|n| (2..n).map(move |k| (n, k)))
        .filter(|&(n, k)| !twist_report(spec(Family::A, n, k), wedge_twist_variant(n, k)).unwrap().orthogonal())
        .count();
    (
        bad.is_empty(),
        format!("{} cases orthogonal with k = C0 coefficient; failures {bad:?}; A wedge variant without the C_k term and with (k-1)(n-k-1) at C_(k-1) fails in {variant_fails} interior cases", cases.len()),
    )
}

fn c12() -> (bool, String) {
    let mut bad = Vec::new();
    let mut cases: Vec<(Family, usize)> = (1..=8).map(|n| (Family::A, n)).collect();
    cases.extend((4..=8).map(|n| (Family::D, n)));
    cases.extend([(Family::E, 6), (Family::E, 7), (Family::E, 8)]);
    for &(f, n) in &cases {
        let c = chern_adjoint(&roots(f, n));
        if !c.c1.is_zero() || c.c2 != c.dim_minus_rank {
            bad.push(format!("{f}{n}"));
        }
    }
    (bad.is_empty(), format!("{} adjoint bundles: c1 = 0 and c2 = 2|roots+| = dim - rank; failures {bad:?}", cases.len()))
}

fn c13() -> (bool, String) {
    let mut bad = Vec::new();
    let rows = minuscule_specs(8, 8);
    for &s in &rows {
        if !verify_table_row(s).unwrap().passed() {
            bad.push(format!("{s}"));
        }
    }
    for n in 1..=8 {
        let c = construct_chain(n);
        if !verify_configuration(&c, spec(Family::A, n, 1), c.terminals[0]).unwrap().passed() {
            bad.push(format!("chain {n}"));
        }
    }
    for n in 4..=8 {
        let r = construct_ruling(n);
        if !verify_configuration(&r, spec(Family::D, n, 1), r.terminals[0]).unwrap().passed() {
            bad.push(format!("ruling {n}"));
        }
    }
    (bad.is_empty(), format!("{} table rows, chains n <= 8, rulings 4 <= n <= 8; failures {bad:?}", rows.len()))
}

const SUITE: &[&str] = &[
    "roots --type E7",
    "roots --type E8",
    "curves --type E6",
    "curves --type D5 --node 5",
    "rep --type E6",
    "form --type D5",
    "form --type E6",
    "dbar-check --type D4",
    "restrict --type E7",
    "descent --type A5 --node 3",
    "branch --type E8 --remove C7",
    "branch --type E7",
    "blowup --type E7",
    "chern --type E8",
];

fn run_suite(workers: &str) -> Vec<u8> {
    let mut out = Vec::new();
    for cmd in SUITE {
        let o = Command::new(env!("CARGO_BIN_EXE_ade"))
            .args(cmd.split_whitespace())
            .args(["--format", "json", "--workers", workers])
            .output()
            .expect("run ade");
        out.extend(o.stdout);
    }
    out
}

fn c14() -> (bool, String) {
    let a = run_suite("1");
    let b = run_suite("4");
    (a == b && !a.is_empty(), format!("{} commands, {} bytes, runs with 1 and 4 workers identical: {}", SUITE.len(), a.len(), a == b))
}

fn main() {
    let criteria: [fn() -> (bool, String); 14] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12, c13, c14];
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let n = i + 1;
        let (ok, detail) = c();
        println!("criterion {n:>2}: {}  {detail}", if ok { "PASS" } else { "FAIL" });
        if ok {
            passed += 1;
        }
        if ok == EXPECTED_RED.contains(&n) {
            unexpected.push(n);
        }
    }
    println!("acceptance: {passed}/14 pass; expected red {EXPECTED_RED:?}");
    if !unexpected.is_empty() {
        println!("acceptance: unexpected outcome for {unexpected:?}");
        std::process::exit(1);
    }
}
