//! Command-line frontend for `splitbound-core`.
//!
//! [`run`] takes an argument vector and returns the exit code together with
//! the bytes destined for stdout and stderr, so tests can drive it without
//! spawning a process.

use std::ffi::OsString;
use std::ops::ControlFlow;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use splitbound_core::f2quad::{
    self, e8_torus_census, ec8_generation_check, lemma_quad_classes, Ec8Model,
};
use splitbound_core::finabel::{
    for_each_subgroup, quotient, reduce_tuple, subgroup_from_generators, subgroup_types,
};
use splitbound_core::heisenberg::{commutator, diag_matrix, perm_matrix, phi, MonomialMatrix, PglSubgroup};
use splitbound_core::liedata::{self, GroupDescriptor, Tables};
use splitbound_core::obstruction::{
    comparison_bound, f_e, min_splitting_exponent, thm13_bound, ObstructionQuery,
};
use splitbound_core::{EnumLimit, Error, ErrorKind, SkewForm, Subgroup};

pub mod parse;
pub mod verify;

/// Environment variable overriding the subgroup-enumeration bound.
pub const ENUM_LIMIT_VAR: &str = "SPLITBOUND_ENUM_LIMIT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.kind() == ErrorKind::Internal => 1,
            _ => 2,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "splitbound", version, about = "Exact symplectic-module and splitting-bound calculator")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite abelian groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Q/Z-valued alternating forms.
    #[command(subcommand)]
    Form(FormCmd),
    /// The Heisenberg embedding into PGL_n.
    #[command(subcommand)]
    Pgl(PglCmd),
    /// Quadratic forms over GF(2).
    #[command(subcommand)]
    F2(F2Cmd),
    /// Splitting-group and splitting-degree lower bounds.
    Obstruct(ObstructArgs),
    /// Torsion primes and Tits splitting degrees.
    Tables(TablesArgs),
    /// Replay the built-in invariant suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Order, rank, exponent and canonical invariants.
    Info {
        #[arg(long)]
        group: String,
    },
    /// All subgroups, or with --types their isomorphism types.
    Subgroups {
        #[arg(long)]
        group: String,
        #[arg(long)]
        types: bool,
    },
    /// The subgroup generated by --gens and the quotient by it.
    Quotient {
        #[arg(long)]
        group: String,
        /// Elements separated by ';', e.g. "(1,0);(0,2)".
        #[arg(long)]
        gens: String,
    },
    /// chi(a) in Q/Z.
    Character {
        #[arg(long)]
        group: String,
        #[arg(long)]
        chi: String,
        #[arg(long)]
        a: String,
    },
    /// Reduce a generator tuple by elementary operations.
    Reduce {
        #[arg(long)]
        group: String,
        #[arg(long)]
        tuple: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum FormCmd {
    /// Gram matrix, nondegeneracy and radical.
    Info {
        /// `std:<group>`, `<group>|<row>;<row>...` or `@file`.
        #[arg(long)]
        form: String,
    },
    /// Whether the subgroup generated by --gens is isotropic or Lagrangian.
    Check {
        #[arg(long)]
        form: String,
        #[arg(long)]
        gens: String,
    },
    /// All Lagrangian subgroups with their quotient types.
    Lagrangians {
        #[arg(long)]
        form: String,
    },
    /// Largest isotropic subgroups.
    MaxIsotropic {
        #[arg(long)]
        form: String,
    },
    /// A nondegenerate subgroup of order p^(2s) in an elementary abelian module.
    Symplectic {
        #[arg(long)]
        form: String,
        #[arg(long)]
        s: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum PglCmd {
    /// Depth of the image of A x A*.
    Depth {
        #[arg(long)]
        group: String,
    },
    /// The image of A x A* with its commutator form.
    Image {
        #[arg(long)]
        group: String,
    },
    /// The projective class of P_a D_chi.
    Phi {
        #[arg(long)]
        group: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        chi: String,
    },
    /// Check D_chi P_a = chi(a) P_a D_chi.
    Braid {
        #[arg(long)]
        group: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        chi: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    Quad,
    E8,
    Ec8,
}

#[derive(Debug, Subcommand)]
pub enum F2Cmd {
    /// Fixed counting results.
    Census {
        #[arg(long, value_enum)]
        lemma: Lemma,
        /// Include per-class detail.
        #[arg(long)]
        detail: bool,
    },
    /// Normal form and value counts of one form.
    Analyze {
        #[arg(long)]
        dim: usize,
        /// Comma-separated hex rows of the upper-triangular matrix.
        #[arg(long)]
        rows: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Thm13,
    F,
    Fe,
    MinPartition,
    Compare,
}

#[derive(Debug, Args)]
pub struct ObstructArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long, default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub e: u32,
    /// First module for --mode compare.
    #[arg(long)]
    pub w1: Option<String>,
    /// Second module for --mode compare.
    #[arg(long)]
    pub w2: Option<String>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[command(subcommand)]
    pub command: Option<TablesCmd>,
}

#[derive(Debug, Args)]
pub struct GroupType {
    /// E8, G2, A3, D_5, ...
    #[arg(long = "type")]
    pub name: String,
    /// Use the not simply connected row.
    #[arg(long)]
    pub non_sc: bool,
}

#[derive(Debug, Subcommand)]
pub enum TablesCmd {
    Torsion {
        #[command(flatten)]
        g: GroupType,
    },
    Tits {
        #[command(flatten)]
        g: GroupType,
    },
    Depth {
        #[command(flatten)]
        g: GroupType,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u32,
    },
    Quadform {
        #[arg(long)]
        n: u32,
        /// SO_n instead of O_n.
        #[arg(long)]
        det_one: bool,
    },
    Fixed,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// isometry, lagrangian, ec8, partitions, duality, reduce, tables or all.
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Add wall-clock milliseconds per check.
    #[arg(long)]
    pub timings: bool,
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation; the first argument is the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = enum_limit().and_then(|limit| dispatch(&cli.command, limit));
    match result {
        Ok((value, code)) => Output { code, stdout: render(&value, cli.format), stderr: String::new() },
        Err(e) => {
            let obj = json!({"error": {"code": e.code(), "message": e.to_string()}});
            Output { code: e.exit_code(), stdout: String::new(), stderr: render(&obj, cli.format) }
        }
    }
}

fn enum_limit() -> CliResult<EnumLimit> {
    match std::env::var(ENUM_LIMIT_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(EnumLimit)
            .map_err(|_| CliError::Usage(format!("{ENUM_LIMIT_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(EnumLimit::DEFAULT),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            text(v, 0, &mut s);
            s
        }
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for i in items {
                            out.push_str(&format!("{pad}  -\n"));
                            text(i, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn dispatch(cmd: &Command, limit: EnumLimit) -> CliResult<(Value, i32)> {
    let ok = |v: CliResult<Value>| v.map(|v| (v, 0));
    match cmd {
        Command::Group(c) => ok(group_cmd(c, limit)),
        Command::Form(c) => ok(form_cmd(c, limit)),
        Command::Pgl(c) => ok(pgl_cmd(c, limit)),
        Command::F2(c) => ok(f2_cmd(c)),
        Command::Obstruct(a) => ok(obstruct(a, limit)),
        Command::Tables(a) => ok(tables_cmd(a.command.as_ref())),
        Command::Verify(a) => verify_cmd(a, limit),
    }
}

fn subgroup_json(s: &Subgroup) -> Value {
    json!({"order": s.order(), "invariants": s.invariants(), "hnf": s.hnf_rows()})
}

fn form_json(w: &SkewForm) -> Value {
    let gram: Vec<Vec<String>> = w
        .gram()
        .iter()
        .map(|r| r.iter().map(|q| q.to_string()).collect())
        .collect();
    json!({"group": w.group().invariants(), "gram": gram})
}

fn group_cmd(c: &GroupCmd, limit: EnumLimit) -> CliResult<Value> {
    Ok(match c {
        GroupCmd::Info { group } => {
            let g = parse::group(group)?;
            json!({
                "invariants": g.invariants(),
                "order": g.order(),
                "rank": g.rank(),
                "exponent": g.exponent(),
            })
        }
        GroupCmd::Subgroups { group, types } => {
            let g = parse::group(group)?;
            if *types {
                let t: Vec<Value> = subgroup_types(&g, limit)?
                    .into_iter()
                    .map(|(inv, n)| json!({"invariants": inv, "count": n}))
                    .collect();
                json!({"types": t})
            } else {
                let mut subs = Vec::new();
                for_each_subgroup(&g, limit, |s| {
                    subs.push(subgroup_json(&s));
                    ControlFlow::Continue(())
                })?;
                json!({"count": subs.len(), "subgroups": subs})
            }
        }
        GroupCmd::Quotient { group, gens } => {
            let g = parse::group(group)?;
            let s = subgroup_from_generators(&g, &parse::tuple(&g, gens)?)?;
            let q = quotient(&g, &s)?;
            json!({"subgroup": subgroup_json(&s), "quotient": q.invariants()})
        }
        GroupCmd::Character { group, chi, a } => {
            let g = parse::group(group)?;
            let chi = parse::element(&g.dual(), chi)?;
            let a = parse::element(&g, a)?;
            json!({"value": g.eval_character(&chi, &a)?.to_string()})
        }
        GroupCmd::Reduce { group, tuple } => {
            let g = parse::group(group)?;
            let xi = parse::tuple(&g, tuple)?;
            let red = reduce_tuple(&g, &xi)?;
            let ops: Vec<String> = red.ops.iter().map(|o| o.to_string()).collect();
            let reduced: Vec<&[u64]> = red.reduced.iter().map(|x| x.coords()).collect();
            json!({"ops": ops, "reduced": reduced, "nonzero": red.nonzero_count()})
        }
    })
}

fn form_cmd(c: &FormCmd, limit: EnumLimit) -> CliResult<Value> {
    Ok(match c {
        FormCmd::Info { form } => {
            let w = parse::form(form)?;
            let mut v = form_json(&w);
            v["nondegenerate"] = json!(w.is_nondegenerate());
            v["radical"] = subgroup_json(&w.radical());
            v
        }
        FormCmd::Check { form, gens } => {
            let w = parse::form(form)?;
            let s = subgroup_from_generators(w.group(), &parse::tuple(w.group(), gens)?)?;
            let lagrangian = if w.is_nondegenerate() { json!(w.is_lagrangian(&s)?) } else { Value::Null };
            json!({"subgroup": subgroup_json(&s), "isotropic": w.is_isotropic(&s)?, "lagrangian": lagrangian})
        }
        FormCmd::Lagrangians { form } => {
            let w = parse::form(form)?;
            let ls = w
                .lagrangians(limit)?
                .iter()
                .map(|l| {
                    let mut v = subgroup_json(l);
                    v["quotient"] = json!(w.quotient_by_lagrangian(l)?.invariants());
                    Ok(v)
                })
                .collect::<CliResult<Vec<_>>>()?;
            json!({"count": ls.len(), "lagrangians": ls})
        }
        FormCmd::MaxIsotropic { form } => {
            let w = parse::form(form)?;
            let m = w.max_isotropic(limit)?;
            json!({
                "order": m.order,
                "count": m.count,
                "types": m.types,
                "witness": subgroup_json(&m.witness),
            })
        }
        FormCmd::Symplectic { form, s } => {
            let w = parse::form(form)?;
            json!({"subgroup": subgroup_json(&w.symplectic_submodule(*s)?)})
        }
    })
}

fn matrix_json(m: &MonomialMatrix) -> Value {
    json!({"perm": m.perm(), "diag": m.diag(), "modulus": m.modulus()})
}

fn pgl_cmd(c: &PglCmd, limit: EnumLimit) -> CliResult<Value> {
    Ok(match c {
        PglCmd::Depth { group } => {
            let g = parse::group(group)?;
            json!({"depth": PglSubgroup::heisenberg_image(&g, limit)?.depth(limit)?})
        }
        PglCmd::Image { group } => {
            let g = parse::group(group)?;
            let img = PglSubgroup::heisenberg_image(&g, limit)?;
            let gens: Vec<Value> = img.abstract_generators().iter().map(|x| matrix_json(x.lift())).collect();
            json!({
                "order": img.order(),
                "invariants": img.abstract_group().invariants(),
                "generators": gens,
                "form": form_json(img.alpha_form()),
                "toral": img.is_toral(),
            })
        }
        PglCmd::Phi { group, a, chi } => {
            let g = parse::group(group)?;
            let a = parse::element(&g, a)?;
            let chi = parse::element(&g.dual(), chi)?;
            matrix_json(phi(&g, &a, &chi)?.lift())
        }
        PglCmd::Braid { group, a, chi } => {
            let g = parse::group(group)?;
            let a = parse::element(&g, a)?;
            let chi = parse::element(&g.dual(), chi)?;
            let c = commutator(&diag_matrix(&g, &chi)?, &perm_matrix(&g, &a)?)?;
            let value = g.eval_character(&chi, &a)?;
            let scalar = c.scalar_exponent()?;
            json!({"commutator": scalar.to_string(), "character": value.to_string(), "holds": scalar == value})
        }
    })
}

fn f2_cmd(c: &F2Cmd) -> CliResult<Value> {
    Ok(match c {
        F2Cmd::Census { lemma: Lemma::Quad, detail } => {
            let counts: Vec<u64> = f2quad::lemma_quad_census().into_iter().collect();
            if *detail {
                let classes: Vec<Value> = lemma_quad_classes()
                    .iter()
                    .map(|c| json!({"class": c.name, "count": c.anisotropic}))
                    .collect();
                json!({"counts": counts, "classes": classes})
            } else {
                json!({"counts": counts})
            }
        }
        F2Cmd::Census { lemma: Lemma::E8, .. } => {
            let c = e8_torus_census();
            json!({"type_a": c.type_a, "type_b": c.type_b, "hyperbolic_planes": c.hyperbolic_planes})
        }
        F2Cmd::Census { lemma: Lemma::Ec8, detail } => {
            let m = Ec8Model::standard();
            let h = m.hyperplane_census();
            let mut v = json!({
                "type_a": m.type_a_count(),
                "type_b": m.type_b_count(),
                "a2_minus_r": m.a2_minus_r(),
                "a1r_minus_r": m.a1r_minus_r(),
                "generates": ec8_generation_check(&m),
                "hyperplane_contains_type_a": h.max_contained == m.type_a_count(),
            });
            if *detail {
                v["hyperplanes"] = json!({
                    "count": h.hyperplanes,
                    "max_contained": h.max_contained,
                    "min_missed": h.min_missed,
                });
            }
            v
        }
        F2Cmd::Analyze { dim, rows } => {
            let q = parse::f2_form(*dim, rows)?;
            let d = q.decompose_with_basis()?;
            let ones = q.count_anisotropic()?;
            let names: Vec<&str> = d.blocks.iter().map(|b| b.name()).collect();
            let basis: Vec<String> = d.basis.iter().map(|b| format!("{b:x}")).collect();
            json!({
                "dim": dim,
                "blocks": names,
                "basis": basis,
                "anisotropic": ones,
                "isotropic": (1u64 << dim) - ones,
                "radical_dim": q.radical().len(),
            })
        }
    })
}

fn power(p: u64, k: u32) -> CliResult<u64> {
    p.checked_pow(k)
        .ok_or_else(|| CliError::Core(Error::Precondition(format!("{p}^{k} does not fit in 64 bits"))))
}

fn obstruct(a: &ObstructArgs, limit: EnumLimit) -> CliResult<Value> {
    let need_r = || a.r.ok_or_else(|| CliError::Usage(format!("--mode {:?} needs --r", a.mode).to_lowercase()));
    Ok(match a.mode {
        Mode::Thm13 => {
            let q = ObstructionQuery::new(a.p, need_r()?, a.e)?;
            json!({"bound": thm13_bound(&q)?.bound})
        }
        Mode::F | Mode::Fe => {
            let q = ObstructionQuery::new(a.p, need_r()?, a.e)?;
            let e = if a.mode == Mode::F { 0 } else { q.e };
            let k = f_e(q.r, e);
            json!({"bound": power(q.p, k)?, "exponent": k})
        }
        Mode::MinPartition => {
            let q = ObstructionQuery::new(a.p, need_r()?, a.e)?;
            let m = min_splitting_exponent(&q)?;
            json!({
                "bound": power(q.p, m.total)?,
                "exponent": m.total,
                "f_e": m.f_e,
                "witness": m.witness.parts(),
            })
        }
        Mode::Compare => {
            let (w1, w2) = match (&a.w1, &a.w2) {
                (Some(x), Some(y)) => (parse::form(x)?, parse::form(y)?),
                _ => return Err(CliError::Usage("--mode compare needs --w1 and --w2".to_owned())),
            };
            let c = comparison_bound(&w1, &w2, a.e, limit)?;
            json!({
                "bound": c.bound,
                "witness": [c.witness.0, c.witness.1],
                "types": [c.types1, c.types2],
                "coarse_cap": c.coarse_cap,
            })
        }
    })
}

fn descriptor(g: &GroupType) -> CliResult<GroupDescriptor> {
    Ok(GroupDescriptor::parse(&g.name, !g.non_sc)?)
}

fn tables_cmd(c: Option<&TablesCmd>) -> CliResult<Value> {
    let e8 = liedata::e8_candidates()?;
    let e8_meta = json!({"candidates": e8.candidates, "lcm": e8.lcm, "uncertain": e8.uncertain});
    Ok(match c {
        None => {
            let t = Tables::embedded()?;
            let torsion: Vec<Value> = t
                .torsion
                .iter()
                .map(|r| json!({"type": r.series.name(), "min_rank": r.min_rank, "primes": r.primes}))
                .collect();
            let tits: Vec<Value> = t
                .tits
                .iter()
                .map(|r| {
                    json!({
                        "type": r.series.name(),
                        "simply_connected": r.simply_connected.as_ref().map(|f| f.source()),
                        "non_simply_connected": r.non_simply_connected.as_ref().map(|f| f.source()),
                    })
                })
                .collect();
            let depths: Vec<Value> = liedata::depth_fixtures()?
                .into_iter()
                .map(|(f, ok)| {
                    json!({
                        "type": f.group.label(),
                        "simply_connected": f.group.is_simply_connected(),
                        "p": f.p,
                        "d": f.d,
                        "consistent": ok,
                    })
                })
                .collect();
            json!({
                "torsion": torsion,
                "tits": tits,
                "e8": e8_meta,
                "depths": depths,
                "fixed_divisors": liedata::fixed_divisors()?,
            })
        }
        Some(TablesCmd::Torsion { g }) => {
            let d = descriptor(g)?;
            json!({"type": d.label(), "simply_connected": d.is_simply_connected(), "primes": liedata::torsion_primes(&d)?})
        }
        Some(TablesCmd::Tits { g }) => {
            let d = descriptor(g)?;
            let mut v = json!({"type": d.label(), "simply_connected": d.is_simply_connected(), "n": liedata::tits_n(&d)?});
            if d.series() == liedata::Series::E8 {
                v["e8"] = e8_meta;
            }
            v
        }
        Some(TablesCmd::Depth { g, p, d }) => {
            let desc = descriptor(g)?;
            json!({
                "type": desc.label(),
                "simply_connected": desc.is_simply_connected(),
                "n": liedata::tits_n(&desc)?,
                "consistent": liedata::depth_consistency(&desc, *p, *d)?,
            })
        }
        Some(TablesCmd::Quadform { n, det_one }) => {
            let q = liedata::quadform_split_exponents(*n, *det_one)?;
            json!({"upper_l": q.upper_l, "lower_exp": q.lower_exp})
        }
        Some(TablesCmd::Fixed) => json!({"fixed_divisors": liedata::fixed_divisors()?}),
    })
}

fn verify_cmd(a: &VerifyArgs, limit: EnumLimit) -> CliResult<(Value, i32)> {
    let suite: verify::Suite = a.suite.parse()?;
    let opts = verify::Options { seed: a.seed, limit, ..verify::Options::default() };
    let checks = verify::run(suite, &opts);
    let passed = checks.iter().all(|c| c.passed);
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            let mut v = json!({"name": c.name, "passed": c.passed, "count": c.count});
            if let Some(d) = &c.detail {
                v["detail"] = json!(d);
            }
            if a.timings {
                v["millis"] = json!(c.millis as u64);
            }
            v
        })
        .collect();
    let report = json!({"suite": a.suite, "seed": a.seed, "passed": passed, "checks": rows});
    Ok((report, if passed { 0 } else { 1 }))
}

