//! Replays of the library's checkable invariants, grouped into suites.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splitbound_core::f2quad::{
    count_by_recursion, e8_torus_census, ec8_generation_check, lemma_quad_census, Block,
    Ec8Model, F2QuadForm,
};
use splitbound_core::finabel::{
    for_each_subgroup, quotient, reduce_tuple, replay, subgroup_from_generators,
};
use splitbound_core::heisenberg::{commutator, diag_matrix, perm_matrix, PglSubgroup};
use splitbound_core::liedata::{self, GroupDescriptor, Series};
use splitbound_core::obstruction::{
    comparison_bound, f, f_e, min_splitting_exponent, ta_feasible, thm13_bound,
    ObstructionQuery, PartitionCandidate,
};
use splitbound_core::qzforms::standard_module;
use splitbound_core::{EnumLimit, Error, FinAbGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Isometry,
    Lagrangian,
    Ec8,
    Partitions,
    Duality,
    Reduce,
    Tables,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] =
        ["isometry", "lagrangian", "ec8", "partitions", "duality", "reduce", "tables", "all"];

    fn parts(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Isometry, Lagrangian, Ec8, Partitions, Duality, Reduce, Tables],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite, Error> {
        Ok(match s {
            "isometry" => Suite::Isometry,
            "lagrangian" => Suite::Lagrangian,
            "ec8" => Suite::Ec8,
            "partitions" => Suite::Partitions,
            "duality" => Suite::Duality,
            "reduce" => Suite::Reduce,
            "tables" => Suite::Tables,
            "all" => Suite::All,
            _ => {
                return Err(Error::Precondition(format!(
                    "unknown suite {s:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

/// Knobs for the suites. The defaults match the acceptance sizes.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub limit: EnumLimit,
    /// Largest `|A|` for the isometry and braiding checks.
    pub isometry_order: u64,
    /// Largest `|A|` whose standard module is searched for Lagrangians.
    pub lagrangian_order: u64,
    /// Largest group order in the subgroup/quotient comparison.
    pub duality_order: u64,
    pub random_forms: usize,
    pub reduce_instances: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            limit: EnumLimit::DEFAULT,
            isometry_order: 8,
            lagrangian_order: 16,
            duality_order: 256,
            random_forms: 1000,
            reduce_instances: 10_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Number of instances examined.
    pub count: u64,
    pub detail: Option<String>,
    pub millis: u128,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} ({} checked)", self.name, self.count)?;
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        Ok(())
    }
}

type Outcome = Result<u64, String>;

fn timed(name: &'static str, body: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let r = body();
    let millis = start.elapsed().as_millis();
    match r {
        Ok(count) => Check { name, passed: true, count, detail: None, millis },
        Err(d) => Check { name, passed: false, count: 0, detail: Some(d), millis },
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Every invariant-factor chain of order at most `n`, the trivial group first.
pub fn groups_up_to(n: u64) -> Vec<FinAbGroup> {
    fn rec(chain: &mut Vec<u64>, order: u64, n: u64, out: &mut Vec<Vec<u64>>) {
        out.push(chain.clone());
        let last = chain.last().copied().unwrap_or(1);
        let mut d = if last == 1 { 2 } else { last };
        while order * d <= n {
            chain.push(d);
            rec(chain, order * d, n, out);
            chain.pop();
            d += last;
        }
    }
    let mut chains = Vec::new();
    rec(&mut Vec::new(), 1, n, &mut chains);
    chains.sort_by_key(|c| (c.iter().product::<u64>(), c.clone()));
    chains.into_iter().map(|c| FinAbGroup::new(&c).expect("valid chain")).collect()
}

pub fn run(suite: Suite, opts: &Options) -> Vec<Check> {
    let mut out = Vec::new();
    for s in suite.parts() {
        match s {
            Suite::Isometry => {
                out.push(timed("isometry-gram", || isometry(opts)));
                out.push(timed("braiding", || braiding(opts)));
                out.push(timed("pgl-depth", || depth(opts)));
            }
            Suite::Lagrangian => out.push(timed("lagrangian-self-duality", || lagrangian(opts))),
            Suite::Ec8 => {
                out.push(timed("lemma-quad-census", lemma_quad));
                out.push(timed("count-folding", || count_folding(opts)));
                out.push(timed("e8-torus", e8_torus));
                out.push(timed("ec8-model", ec8_model));
            }
            Suite::Partitions => {
                out.push(timed("obstruction-constants", || obstruction_constants(opts)));
                out.push(timed("min-partition-vs-f_e", min_partition));
                out.push(timed("random-candidates", || random_candidates(opts)));
            }
            Suite::Duality => out.push(timed("subgroup-quotient-duality", || duality(opts))),
            Suite::Reduce => out.push(timed("reduce-tuple", || reduce(opts))),
            Suite::Tables => out.push(timed("tables", tables)),
            Suite::All => unreachable!(),
        }
    }
    out
}

pub fn isometry(opts: &Options) -> Outcome {
    let mut n = 0;
    for a in groups_up_to(opts.isometry_order) {
        let img = lib(PglSubgroup::heisenberg_image(&a, opts.limit))?;
        let std = standard_module(&a);
        ensure(img.abstract_group() == std.group(), || {
            format!("A = {:?}: image {:?}", a.invariants(), img.abstract_group().invariants())
        })?;
        ensure(img.alpha_form().gram() == std.gram(), || {
            format!("A = {:?}: Gram matrices differ", a.invariants())
        })?;
        n += 1;
    }
    Ok(n)
}

pub fn braiding(opts: &Options) -> Outcome {
    let mut n = 0;
    for a in groups_up_to(opts.isometry_order) {
        let dual = a.dual();
        for x in a.elements() {
            let p = lib(perm_matrix(&a, &x))?;
            for chi in dual.elements() {
                let d = lib(diag_matrix(&a, &chi))?;
                // D P D^-1 P^-1 = chi(x) is D P = chi(x) P D
                let c = lib(commutator(&d, &p))?;
                let want = lib(a.eval_character(&chi, &x))?;
                ensure(c.is_scalar() && lib(c.scalar_exponent())? == want, || {
                    format!("A = {:?}, a = {:?}, chi = {:?}", a.invariants(), x.coords(), chi.coords())
                })?;
                n += 1;
            }
        }
    }
    Ok(n)
}

pub const DEPTH_CASES: [(&[u64], u32); 7] = [
    (&[2], 1),
    (&[4], 2),
    (&[2, 2], 2),
    (&[8], 3),
    (&[2, 4], 3),
    (&[9], 2),
    (&[3, 3], 2),
];

pub fn depth(opts: &Options) -> Outcome {
    for (inv, r) in DEPTH_CASES {
        let a = lib(FinAbGroup::new(inv))?;
        let d = lib(lib(PglSubgroup::heisenberg_image(&a, opts.limit))?.depth(opts.limit))?;
        ensure(d == r, || format!("A = {inv:?}: depth {d}, expected {r}"))?;
    }
    Ok(DEPTH_CASES.len() as u64)
}

pub fn lagrangian(opts: &Options) -> Outcome {
    let mut n = 0;
    for a in groups_up_to(opts.lagrangian_order) {
        let w = standard_module(&a);
        for l in lib(w.lagrangians(opts.limit))? {
            let q = lib(w.quotient_by_lagrangian(&l))?;
            ensure(q.invariants() == l.invariants(), || {
                format!("A = {:?}: H/L = {:?}, L = {:?}", a.invariants(), q.invariants(), l.invariants())
            })?;
            n += 1;
        }
    }
    Ok(n)
}

fn lemma_quad() -> Outcome {
    let got: Vec<u64> = lemma_quad_census().into_iter().collect();
    ensure(got == [56, 64, 72], || format!("census {got:?}"))?;
    Ok(3)
}

fn brute_anisotropic(q: &F2QuadForm) -> Result<u64, String> {
    let mut n = 0;
    for x in 0..(1u32 << q.dim()) {
        n += lib(q.eval(x))? as u64;
    }
    Ok(n)
}

fn fold_matches(q: &F2QuadForm, what: impl Fn() -> String) -> Result<(), String> {
    let blocks = lib(q.decompose())?;
    let (_, ones) = lib(count_by_recursion(&blocks))?;
    let brute = brute_anisotropic(q)?;
    ensure(brute == ones && lib(q.count_anisotropic())? == brute, || {
        format!("{}: brute force {brute}, folding {ones}", what())
    })
}

/// Every block word `a^i h^j one^k zero^l` of dimension at most 10, then
/// random upper-triangular forms.
pub fn count_folding(opts: &Options) -> Outcome {
    let mut n = 0;
    for ia in 0..=5usize {
        for ih in 0..=5usize {
            for io in 0..=10usize {
                for iz in 0..=10usize {
                    let dim = 2 * ia + 2 * ih + io + iz;
                    if dim == 0 || dim > 10 {
                        continue;
                    }
                    let mut blocks = vec![Block::A; ia];
                    blocks.extend(vec![Block::H; ih]);
                    blocks.extend(vec![Block::One; io]);
                    blocks.extend(vec![Block::Zero; iz]);
                    let q = lib(F2QuadForm::from_blocks(&blocks))?;
                    fold_matches(&q, || format!("blocks {blocks:?}"))?;
                    let (_, ones) = lib(count_by_recursion(&blocks))?;
                    ensure(brute_anisotropic(&q)? == ones, || format!("blocks {blocks:?}"))?;
                    n += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_forms {
        let dim = rng.random_range(1..=10usize);
        let rows: Vec<u32> = (0..dim)
            .map(|i| rng.random::<u32>() & !((1u32 << i) - 1) & ((1u32 << dim) - 1))
            .collect();
        let q = lib(F2QuadForm::new(dim, rows.clone()))?;
        fold_matches(&q, || format!("rows {rows:x?}"))?;
        n += 1;
    }
    Ok(n)
}

fn e8_torus() -> Outcome {
    let c = e8_torus_census();
    ensure((c.type_a, c.type_b, c.hyperbolic_planes) == (120, 135, 4), || format!("{c:?}"))?;
    Ok(1)
}

fn ec8_model() -> Outcome {
    let m = Ec8Model::standard();
    let h = m.hyperplane_census();
    let got = (m.type_a_count(), m.type_b_count(), m.a2_minus_r(), m.a1r_minus_r());
    ensure(got == (56, 199, 28, 28), || format!("counts {got:?}"))?;
    ensure(ec8_generation_check(&m), || "type-A elements do not span".to_owned())?;
    ensure(h.max_contained < m.type_a_count(), || format!("{h:?}"))?;
    Ok(h.hyperplanes as u64)
}

fn obstruction_constants(opts: &Options) -> Outcome {
    let t = lib(thm13_bound(&lib(ObstructionQuery::new(2, 3, 0))?))?;
    ensure(t.bound == 16, || format!("thm13(2,3,0) = {}", t.bound))?;
    let six = standard_module(&lib(FinAbGroup::new(&[2, 2, 2]))?);
    let eight = standard_module(&lib(FinAbGroup::new(&[8]))?);
    let c = lib(comparison_bound(&six, &eight, 0, opts.limit))?;
    ensure(c.bound == 16, || format!("comparison bound {}", c.bound))?;
    let m = lib(min_splitting_exponent(&lib(ObstructionQuery::new(2, 3, 0))?))?;
    ensure(m.total == 4 && f(3) == 4, || format!("min total {} vs f(3) = {}", m.total, f(3)))?;
    Ok(3)
}

fn min_partition() -> Outcome {
    let mut n = 0;
    for p in [2u64, 3] {
        for r in 1..=12 {
            for e in 0..=2 {
                let m = lib(min_splitting_exponent(&lib(ObstructionQuery::new(p, r, e))?))?;
                ensure(m.total >= f_e(r, e), || {
                    format!("p={p} r={r} e={e}: total {} < f_e {}", m.total, f_e(r, e))
                })?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn random_candidates(opts: &Options) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut feasible = 0;
    for _ in 0..2000 {
        let r = rng.random_range(1..=10u32);
        let e = rng.random_range(0..=2u32);
        let q = lib(ObstructionQuery::new(2, r, e))?;
        let k = rng.random_range(1..=r as usize);
        let mut parts: Vec<u32> = (0..k).map(|_| rng.random_range(1..=r)).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let c = lib(PartitionCandidate::new(parts))?;
        if ta_feasible(&q, &c) {
            let m = lib(min_splitting_exponent(&q))?;
            ensure(c.total() >= m.total, || format!("{c} beats the minimum {}", m.total))?;
            feasible += 1;
        }
    }
    Ok(feasible)
}

pub fn duality(opts: &Options) -> Outcome {
    let limit = EnumLimit(opts.limit.0.max(opts.duality_order));
    let mut n = 0;
    for a in groups_up_to(opts.duality_order) {
        let mut subs: BTreeMap<Vec<u64>, i64> = BTreeMap::new();
        let mut err = None;
        lib(for_each_subgroup(&a, limit, |s| {
            match quotient(&a, &s) {
                Ok(q) => {
                    *subs.entry(s.invariants().to_vec()).or_default() += 1;
                    *subs.entry(q.invariants().to_vec()).or_default() -= 1;
                    n += 1;
                    ControlFlow::Continue(())
                }
                Err(e) => {
                    err = Some(e.to_string());
                    ControlFlow::Break(())
                }
            }
        }))?;
        if let Some(e) = err {
            return Err(e);
        }
        ensure(subs.values().all(|&v| v == 0), || {
            format!("A = {:?}: subgroup and quotient types differ", a.invariants())
        })?;
    }
    Ok(n)
}

pub fn reduce(opts: &Options) -> Outcome {
    let groups: Vec<FinAbGroup> = groups_up_to(64).into_iter().filter(|g| g.rank() > 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.reduce_instances {
        let a = &groups[rng.random_range(0..groups.len())];
        let s = a.rank() + rng.random_range(0..=3usize);
        let xi: Vec<_> = (0..s)
            .map(|_| {
                let c: Vec<u64> = a.invariants().iter().map(|&d| rng.random_range(0..d)).collect();
                a.element(&c)
            })
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let red = lib(reduce_tuple(a, &xi))?;
        let what = || format!("A = {:?}, xi = {:?}", a.invariants(), xi);
        ensure(red.nonzero_count() <= a.rank(), what)?;
        ensure(lib(replay(a, &xi, &red.ops))? == red.reduced, what)?;
        ensure(
            lib(subgroup_from_generators(a, &xi))? == lib(subgroup_from_generators(a, &red.reduced))?,
            what,
        )?;
    }
    Ok(opts.reduce_instances as u64)
}

pub fn tables() -> Outcome {
    let fx = lib(liedata::depth_fixtures())?;
    for (f, ok) in &fx {
        let n = lib(liedata::tits_n(&f.group))?;
        ensure(*ok && n % f.p.pow(f.d) == 0, || format!("{} p={} d={}", f.group, f.p, f.d))?;
    }
    let fixed = lib(liedata::fixed_divisors())?;
    ensure(fixed.get("E8_splitting") == Some(&60), || format!("{fixed:?}"))?;
    ensure(fixed.get("E7_splitting") == Some(&12), || format!("{fixed:?}"))?;
    for e in lib(liedata::fixed_divisor_entries())? {
        ensure(e.recompose() == e.value, || e.name.clone())?;
    }
    let e8 = lib(liedata::tits_n(&lib(GroupDescriptor::new(Series::E8, None, true))?))?;
    ensure(e8 == 17280, || format!("n(E8) = {e8}"))?;
    Ok(fx.len() as u64 + 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_listing() {
        let gs = groups_up_to(16);
        // 1,2,3,4(2),5,6,7,8(3),9(2),10,11,12(2),13,14,15,16(5)
        assert_eq!(gs.len(), 25);
        assert_eq!(gs[0].order(), 1);
        assert!(gs.windows(2).all(|w| w[0].order() <= w[1].order()));
    }

    #[test]
    fn suite_names() {
        for n in Suite::NAMES {
            assert!(n.parse::<Suite>().is_ok());
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let opts = Options {
            isometry_order: 4,
            lagrangian_order: 4,
            duality_order: 32,
            random_forms: 50,
            reduce_instances: 200,
            ..Options::default()
        };
        for c in run(Suite::All, &opts) {
            assert!(c.passed, "{c}");
        }
    }
}
