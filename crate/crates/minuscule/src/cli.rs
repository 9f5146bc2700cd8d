//! The `ade` command line: one subcommand per verification, reports as text,
//! JSON (`schema: 1`) or DOT.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::blowup::{self, BlowupStep, BlowupSurface};
use crate::branching;
use crate::chevalley::{compute_structure_constants, verify_jacobi, JacobiMode, StructureConstants};
use crate::curves::{enumerate_curves, intersection_profile, order_and_filter, CurveSet};
use crate::dbar;
use crate::descent;
use crate::error::{Error, Result};
use crate::forms;
use crate::lattice::{build_lattice, parse_type, DynkinSpec, Family};
use crate::minrep::{build_action, image_rank, verify_module, weyl_transitivity};
use crate::rootsys::{box_oracle, enumerate_roots, RootSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "ade", version, about = "Exact verification of minuscule ADE configurations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Worker threads for the parallel checks.
    #[arg(long, env = "ADE_WORKERS", global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args, Clone)]
pub struct SpecArgs {
    /// Diagram type such as A4, D5, E6.
    #[arg(long = "type", value_parser = parse_family)]
    pub ty: (Family, usize),
    /// Minuscule node k (C₀ meets C_k).
    #[arg(long, default_value_t = 1)]
    pub node: usize,
}

fn parse_family(s: &str) -> std::result::Result<(Family, usize), String> {
    parse_type(s).map_err(|e| e.to_string())
}

impl SpecArgs {
    fn spec(&self) -> Result<DynkinSpec> {
        DynkinSpec::new(self.ty.0, self.ty.1, self.node)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots, the box oracle and the Jacobi identity for the structure constants.
    Roots {
        #[command(flatten)]
        spec: SpecArgs,
        /// Check every triple instead of a seeded sample.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The ordered set I of (−1)-curves.
    Curves {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// The representation on span(I) and its module identities.
    Rep {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// The invariant form and its automorphism algebra.
    Form {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Symbolic (∂̄ + η)² = 0 and the η-matrix shape.
    DbarCheck {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Splitting types on every C_i.
    Restrict {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Descent entries of η and the twist divisor B.
    Descent {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Branching under deletion of a node.
    Branch {
        #[command(flatten)]
        spec: SpecArgs,
        /// Node to delete for E8 (C8 or C7).
        #[arg(long)]
        remove: Option<String>,
    },
    /// Build a configuration by blowups and verify it.
    Blowup {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "three-arm")]
        recipe: Recipe,
        /// JSON construction script replacing the recipe.
        #[arg(long)]
        script: Option<std::path::PathBuf>,
    },
    /// Chern classes of the representation and adjoint bundles.
    Chern {
        #[command(flatten)]
        spec: SpecArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Recipe {
    ThreeArm,
    Chain,
    Ruling,
}

/// Starting surface, steps and the terminal curve id.
#[derive(Debug, serde::Deserialize)]
pub struct Script {
    pub start: String,
    pub steps: Vec<BlowupStep>,
    pub terminal: usize,
}

/// Result of one subcommand before formatting.
pub struct Outcome {
    pub passed: bool,
    pub report: Value,
    pub summary: Vec<String>,
    pub dot: Option<String>,
}

fn outcome(passed: bool, report: impl Serialize, summary: Vec<String>) -> Result<Outcome> {
    let report = serde_json::to_value(report).map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(Outcome { passed, report, summary, dot: None })
}

struct Ctx {
    spec: DynkinSpec,
    rs: RootSystem,
    cs: CurveSet,
}

fn context(spec: DynkinSpec) -> Result<Ctx> {
    let l = build_lattice(spec)?;
    Ok(Ctx { spec, rs: enumerate_roots(&l), cs: enumerate_curves(&l)? })
}

fn require_minuscule(spec: DynkinSpec) -> Result<()> {
    if spec.is_adjoint() {
        return Err(Error::NotMinuscule(spec.to_string()));
    }
    Ok(())
}

fn roots(ctx: &Ctx, mode: JacobiMode) -> Result<Outcome> {
    let rs = &ctx.rs;
    let l = build_lattice(ctx.spec)?;
    let oracle_equal = box_oracle(&l) == rs.roots().iter().cloned().collect();
    let sc = compute_structure_constants(rs);
    let jac = verify_jacobi(&sc, mode);
    let summary = vec![
        format!("roots: {} ({} positive)", rs.len(), rs.num_positive()),
        format!("box oracle agrees: {oracle_equal}"),
        format!("jacobi: {} triples checked, witness {:?}", jac.checked, jac.witness),
    ];
    outcome(
        oracle_equal && jac.passed(),
        json!({
            "count": rs.len(),
            "positive": rs.num_positive(),
            "highest": rs.root(rs.highest()),
            "roots": rs.roots(),
            "box_oracle_equal": oracle_equal,
            "jacobi": jac,
        }),
        summary,
    )
}

fn curves_dot(cs: &CurveSet) -> String {
    let mut s = String::from("graph I {\n");
    for (i, c) in cs.curves().iter().enumerate() {
        let _ = writeln!(s, "  {i} [label=\"{i}: {c:?}\"];");
    }
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let p = cs.pair(i, j);
            if p != 0 {
                let _ = writeln!(s, "  {i} -- {j} [label=\"{p}\"];");
            }
        }
    }
    s.push_str("}\n");
    s
}

fn curves(ctx: &Ctx) -> Result<Outcome> {
    let cs = &ctx.cs;
    let filt = order_and_filter(cs);
    let profile = intersection_profile(cs);
    let weyl = weyl_transitivity(cs);
    let summary = vec![
        format!("curves: {}", cs.len()),
        format!("max height: {}", filt.max_height),
        format!("weyl orbit transitive: {}", weyl.transitive),
    ];
    let profile: Vec<Vec<(i64, usize)>> = profile.into_iter().map(|m| m.into_iter().collect()).collect();
    let mut o = outcome(
        weyl.transitive,
        json!({
            "count": cs.len(),
            "tie_break": "ascending-lex",
            "curves": cs.curves(),
            "filtration": filt,
            "profile": profile,
            "special": cs.special.iter().map(|(k, v)| (k.clone(), v.clone())).collect::<std::collections::BTreeMap<_, _>>(),
            "weyl": weyl,
        }),
        summary,
    )?;
    o.dot = Some(curves_dot(cs));
    Ok(o)
}

fn rep(ctx: &Ctx, seed: u64) -> Result<Outcome> {
    require_minuscule(ctx.spec)?;
    let sc = compute_structure_constants(&ctx.rs);
    let base = build_action(&ctx.cs, &sc)?;
    let (action, gauge) = forms::compatible_action(&base, &ctx.cs, &sc, seed)?;
    let module = verify_module(&action, &sc);
    let rank = image_rank(&action, &sc);
    let faithful = rank == sc.dimension();
    let summary = vec![
        format!("dimension: {}", action.dim),
        format!("module identities: {} checks, witness {:?}", module.checks, module.witness),
        format!("image rank: {rank} of {}", sc.dimension()),
    ];
    outcome(
        module.passed() && faithful,
        json!({ "dim": action.dim, "gauge": gauge, "module": module, "image_rank": rank, "signs": action.sign_table() }),
        summary,
    )
}

fn form(ctx: &Ctx, seed: u64) -> Result<Outcome> {
    let cs = &ctx.cs;
    let sc = compute_structure_constants(&ctx.rs);
    let (r, target) = forms::default_target(cs)?;
    let base = build_action(cs, &sc)?;
    let (action, gauge) = forms::compatible_action(&base, cs, &sc, seed)?;
    let f = forms::solve_invariant_form(&action, cs, &sc, r, &target)?;
    let aut = forms::verify_aut(&action, cs, &sc, &f)?;
    let dim = forms::aut_dimension(cs, Some(&f), false)?;
    let expected = ctx.rs.len() + ctx.spec.rank;
    let summary = vec![
        format!("degree {r}, target {target}, support {}", f.coeff.len()),
        format!("coefficient magnitudes: {:?}", f.magnitudes()),
        format!("invariance: {} equations, witness {:?}", aut.equations, aut.witness),
        format!("aut dimension: {dim} (|roots| + rank = {expected})"),
    ];
    outcome(
        aut.passed() && dim == expected,
        json!({
            "degree": r,
            "target": target,
            "gauge": gauge,
            "support": f.coeff.len(),
            "magnitudes": f.magnitudes(),
            "unit_coefficients": f.is_unit(),
            "entries": f.entries(),
            "aut": aut,
            "aut_dimension": dim,
            "roots_plus_rank": expected,
        }),
        summary,
    )
}

fn gauged_eta(ctx: &Ctx, sc: &StructureConstants, seed: u64) -> Result<(crate::minrep::RepAction, dbar::EtaMatrix)> {
    let base = build_action(&ctx.cs, sc)?;
    let (action, _) = forms::compatible_action(&base, &ctx.cs, sc, seed)?;
    let eta = dbar::eta_from_rep(&ctx.cs, &action, sc)?;
    Ok((action, eta))
}

fn dbar_check(ctx: &Ctx, seed: u64) -> Result<Outcome> {
    let sc = compute_structure_constants(&ctx.rs);
    let adjoint = dbar::nilpotence_adjoint(&sc);
    let mut passed = adjoint.passed();
    let mut summary = vec![format!("adjoint: {} monomials, residue {}", adjoint.monomials, adjoint.residue.len())];
    let mut report = json!({ "adjoint": adjoint });
    if !ctx.spec.is_adjoint() {
        let (action, eta) = gauged_eta(ctx, &sc, seed)?;
        let nil = dbar::nilpotence_rep(&sc, &eta);
        let blocks: Vec<dbar::BlockReport> =
            (1..=ctx.spec.rank).map(|k| dbar::block_shape_check(&eta, &ctx.cs, &sc, k)).collect();
        passed &= nil.passed() && eta.is_upper_triangular() && blocks.iter().all(|b| b.passed());
        summary.push(format!("representation: {} monomials, residue {}", nil.monomials, nil.residue.len()));
        summary.push(format!("eta entries: {}, upper triangular: {}", eta.entries.len(), eta.is_upper_triangular()));
        report["representation"] = json!(nil);
        report["eta"] = json!(eta.list());
        report["blocks"] = json!(blocks);
        if let Ok((r, target)) = forms::default_target(&ctx.cs) {
            let f = forms::solve_invariant_form(&action, &ctx.cs, &sc, r, &target)?;
            let compat = dbar::form_compatibility_check(&eta, &f, &ctx.cs, &sc)?;
            passed &= compat.invariant && compat.partner_relation != Some(false) && compat.middle_zero != Some(false);
            summary.push(format!("form compatible: {}", compat.invariant));
            report["form"] = json!(compat);
        }
    }
    outcome(passed, report, summary)
}

fn restrict(ctx: &Ctx) -> Result<Outcome> {
    let types = descent::splitting_types(&ctx.cs)?;
    let summary = types
        .iter()
        .map(|t| format!("C{}: zeros {}, pairs {}, twos {}", t.component, t.zeros, t.pairs.len(), t.twos.len()))
        .collect();
    outcome(true, json!({ "components": types }), summary)
}

fn descent_cmd(ctx: &Ctx, seed: u64) -> Result<Outcome> {
    require_minuscule(ctx.spec)?;
    let sc = compute_structure_constants(&ctx.rs);
    let (_, eta) = gauged_eta(ctx, &sc, seed)?;
    let rep = descent::descent_report(&eta, &ctx.cs, &sc);
    let twist = descent::descent_twist(ctx.spec).ok();
    let mut summary: Vec<String> = rep
        .components
        .iter()
        .map(|c| format!("C{}: {} entries, nonzero {}", c.component, c.entries.len(), c.nonzero))
        .collect();
    if let Some(t) = &twist {
        summary.push(format!("B = {}, k = {}, orthogonal {}", t.b, t.k, t.orthogonal()));
    }
    let passed = rep.passed() && twist.as_ref().is_none_or(|t| t.orthogonal());
    outcome(passed, json!({ "descent": rep, "twist": twist }), summary)
}

fn branch(ctx: &Ctx, remove: Option<&str>) -> Result<Outcome> {
    let spec = ctx.spec;
    let parse_remove = |r: &str| -> Result<usize> {
        r.trim_start_matches(['C', 'c']).parse().map_err(|_| Error::InvalidSpec(format!("bad node {r:?}")))
    };
    if spec.is_adjoint() {
        let node = remove.map(parse_remove).transpose()?.unwrap_or(8);
        let g = branching::branch_e8(&ctx.rs, node)?;
        let summary = vec![format!("grades: {:?}", g.summands)];
        let total: usize = g.summands.iter().sum();
        return outcome(total == ctx.rs.dimension() && g.grade_sum == 0, g, summary);
    }
    let r = match (spec.family, spec.rank) {
        (Family::A, _) => branching::branch_an_wedge(&ctx.cs)?,
        (Family::D, _) if spec.node == 1 => branching::branch_dn_std(&ctx.cs)?,
        (Family::D, n) if spec.node == n => branching::branch_dn_spinor(&ctx.cs)?,
        (Family::E, 6) if spec.node == 1 => branching::branch_e6(&ctx.cs)?,
        (Family::E, 7) => branching::branch_e7(&ctx.cs)?,
        _ => return Err(Error::Undefined("branching".into(), spec.to_string())),
    };
    let summary = vec![format!("sizes: {:?}", r.sizes()), format!("exact: {}", r.exact)];
    outcome(r.passed(), r, summary)
}

fn surface_dot(s: &BlowupSurface) -> String {
    let mut out = String::from("graph S {\n");
    for (i, c) in s.curves.iter().enumerate() {
        let _ = writeln!(out, "  {i} [label=\"{}: {}\"];", c.name, s.self_intersection(i));
    }
    for i in 0..s.curves.len() {
        for j in i + 1..s.curves.len() {
            let p = s.dot(&s.curves[i].class, &s.curves[j].class);
            if p != 0 {
                let _ = writeln!(out, "  {i} -- {j} [label=\"{p}\"];");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn blowup_cmd(spec: DynkinSpec, recipe: Recipe, script: Option<&std::path::Path>) -> Result<Outcome> {
    let (surface, terminal) = if let Some(path) = script {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let sc: Script = serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let start = match sc.start.as_str() {
            "plane" => BlowupSurface::plane(),
            "quadric" => BlowupSurface::quadric(),
            other => return Err(Error::InvalidSpec(format!("unknown start surface {other:?}"))),
        };
        let s = blowup::replay(start, &sc.steps)?;
        if sc.terminal >= s.curves.len() {
            return Err(Error::InvalidSpec(format!("terminal {} is not tracked", sc.terminal)));
        }
        (s, sc.terminal)
    } else {
        match recipe {
            Recipe::ThreeArm => {
                let (m, arm) = blowup::table_row(spec)?;
                let s = blowup::construct_three_arm(m);
                let t = s.terminals[arm];
                (s, t)
            }
            Recipe::Chain if spec.family == Family::A && spec.node == 1 => {
                let s = blowup::construct_chain(spec.rank);
                let t = s.terminals[0];
                (s, t)
            }
            Recipe::Ruling if spec.family == Family::D && spec.node == 1 => {
                let s = blowup::construct_ruling(spec.rank);
                let t = s.terminals[0];
                (s, t)
            }
            _ => return Err(Error::Undefined(format!("{recipe:?} recipe"), spec.to_string())),
        }
    };
    let rep = blowup::verify_configuration(&surface, spec, terminal)?;
    let summary = vec![
        format!("blowups: {}, (-2)-curves: {}", surface.steps.len(), rep.nodes),
        format!("dynkin isomorphic: {}, node identified: {}", rep.isomorphic, rep.terminal_meets_one),
        format!("curves in lattice: {} (expected {})", rep.curves_found, rep.expected),
    ];
    let mut o = outcome(rep.passed(), json!({ "surface": surface, "verification": rep }), summary)?;
    o.dot = Some(surface_dot(&surface));
    Ok(o)
}

fn chern(ctx: &Ctx) -> Result<Outcome> {
    let adj = descent::chern_adjoint(&ctx.rs);
    let mut summary = vec![format!(
        "adjoint: c1 = {}, c2 = {}, dim - rank = {}",
        adj.c1,
        adj.c2.unwrap_or(0),
        adj.dim_minus_rank.unwrap_or(0)
    )];
    let passed = adj.c1.is_zero() && adj.c2 == adj.dim_minus_rank;
    let rep = (!ctx.spec.is_adjoint()).then(|| descent::chern_rep(&ctx.cs));
    if let Some(r) = &rep {
        summary.push(format!("representation: c1 = {}", r.c1));
    }
    outcome(passed, json!({ "adjoint": adj, "representation": rep }), summary)
}

fn dispatch(cmd: &Command) -> Result<(DynkinSpec, &'static str, Outcome)> {
    let spec_of = |s: &SpecArgs| s.spec();
    Ok(match cmd {
        Command::Roots { spec, exhaustive, samples, seed } => {
            let s = spec_of(spec)?;
            let mode = if *exhaustive { JacobiMode::Exhaustive } else { JacobiMode::Sampled { samples: *samples, seed: *seed } };
            (s, "roots", roots(&context(s)?, mode)?)
        }
        Command::Curves { spec } => {
            let s = spec_of(spec)?;
            (s, "curves", curves(&context(s)?)?)
        }
        Command::Rep { spec, seed } => {
            let s = spec_of(spec)?;
            (s, "rep", rep(&context(s)?, *seed)?)
        }
        Command::Form { spec, seed } => {
            let s = spec_of(spec)?;
            (s, "form", form(&context(s)?, *seed)?)
        }
        Command::DbarCheck { spec, seed } => {
            let s = spec_of(spec)?;
            (s, "dbar-check", dbar_check(&context(s)?, *seed)?)
        }
        Command::Restrict { spec } => {
            let s = spec_of(spec)?;
            (s, "restrict", restrict(&context(s)?)?)
        }
        Command::Descent { spec, seed } => {
            let s = spec_of(spec)?;
            (s, "descent", descent_cmd(&context(s)?, *seed)?)
        }
        Command::Branch { spec, remove } => {
            let s = spec_of(spec)?;
            (s, "branch", branch(&context(s)?, remove.as_deref())?)
        }
        Command::Blowup { spec, recipe, script } => {
            let s = spec_of(spec)?;
            (s, "blowup", blowup_cmd(s, *recipe, script.as_deref())?)
        }
        Command::Chern { spec } => {
            let s = spec_of(spec)?;
            (s, "chern", chern(&context(s)?)?)
        }
    })
}

fn envelope(spec: DynkinSpec, command: &str, passed: bool, body: Value) -> Value {
    json!({
        "schema": 1,
        "command": command,
        "type": spec.label(),
        "node": spec.node,
        "passed": passed,
        "report": body,
    })
}

fn render(format: Format, spec: DynkinSpec, command: &str, o: &Outcome) -> std::result::Result<String, String> {
    match format {
        Format::Json => {
            let v = envelope(spec, command, o.passed, o.report.clone());
            Ok(serde_json::to_string_pretty(&v).map_err(|e| e.to_string())? + "\n")
        }
        Format::Dot => o.dot.clone().ok_or_else(|| format!("{command} has no DOT output")),
        Format::Text => {
            let mut s = format!("{command} {spec}\n");
            for line in &o.summary {
                let _ = writeln!(s, "  {line}");
            }
            let _ = writeln!(s, "{}", if o.passed { "PASS" } else { "FAIL" });
            Ok(s)
        }
    }
}

/// Parsed run: exit status, standard output and standard error.
pub fn run_parsed(cli: &Cli) -> (i32, String, String) {
    let work = || match dispatch(&cli.command) {
        Ok((spec, name, o)) => match render(cli.format, spec, name, &o) {
            Ok(out) => (if o.passed { 0 } else { 1 }, out, String::new()),
            Err(e) => (2, String::new(), format!("error: {e}\n")),
        },
        Err(e) => {
            let v = json!({ "schema": 1, "passed": false, "error": e.to_string() });
            let out = if cli.format == Format::Json { format!("{v:#}\n") } else { String::new() };
            (1, out, format!("error: {e}\n"))
        }
    };
    match cli.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => (2, String::new(), format!("error: {e}\n")),
        },
        None => work(),
    }
}

/// Parse and run; usage errors give clap's message and status 2.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_parsed(&cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                (0, text, String::new())
            } else {
                (2, String::new(), text)
            }
        }
    }
}
