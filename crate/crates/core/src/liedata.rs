//! Torsion primes, Tits splitting degrees `n(G)` and a few constants derived
//! from them.
//!
//! The data lives in `tables.txt`, embedded at compile time and parsed on
//! demand. Formula cells are kept as source text and evaluated exactly.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::finabel::is_prime;

/// The embedded table source.
pub const TABLES_SOURCE: &str = include_str!("tables.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Series {
    A,
    B,
    C,
    D,
    G2,
    F4,
    E6,
    E7,
    E8,
}

impl Series {
    pub const ALL: [Series; 9] = [
        Series::A,
        Series::B,
        Series::C,
        Series::D,
        Series::G2,
        Series::F4,
        Series::E6,
        Series::E7,
        Series::E8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::G2 => "G2",
            Series::F4 => "F4",
            Series::E6 => "E6",
            Series::E7 => "E7",
            Series::E8 => "E8",
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, Series::A | Series::B | Series::C | Series::D)
    }

    /// Smallest rank for which the classical series is a valid descriptor.
    pub fn min_rank(self) -> Option<u32> {
        match self {
            Series::A => Some(1),
            Series::B | Series::C => Some(2),
            Series::D => Some(4),
            _ => None,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Series {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Series::ALL
            .iter()
            .copied()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown series {s:?}")))
    }
}

/// A simple algebraic group, named by its Dynkin type and isogeny class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupDescriptor {
    series: Series,
    n: Option<u32>,
    simply_connected: bool,
}

impl GroupDescriptor {
    pub fn new(series: Series, n: Option<u32>, simply_connected: bool) -> Result<Self> {
        match (series.min_rank(), n) {
            (Some(min), Some(n)) if n >= min => {}
            (Some(min), Some(n)) => {
                return Err(Error::Precondition(format!(
                    "{series}_{n} needs rank at least {min}"
                )))
            }
            (Some(_), None) => {
                return Err(Error::Precondition(format!("{series} needs a rank")))
            }
            (None, Some(_)) => {
                return Err(Error::Precondition(format!(
                    "{series} does not take a rank"
                )))
            }
            (None, None) => {}
        }
        Ok(GroupDescriptor { series, n, simply_connected })
    }

    pub fn simply_connected(series: Series, n: Option<u32>) -> Result<Self> {
        Self::new(series, n, true)
    }

    /// Parses names like `E8`, `A3`, `D_5`.
    pub fn parse(name: &str, simply_connected: bool) -> Result<Self> {
        let name = name.trim();
        let (series, n) = if name.len() == 2
            && Series::ALL.iter().any(|s| !s.is_classical() && s.name().eq_ignore_ascii_case(name))
        {
            (name.parse::<Series>()?, None)
        } else {
            let mut chars = name.chars();
            let head = chars.next().ok_or_else(|| Error::Parse("empty group name".to_owned()))?;
            let series: Series = head.to_string().parse()?;
            if !series.is_classical() {
                return Err(Error::Parse(format!("unknown group {name:?}")));
            }
            let rest = chars.as_str().trim_start_matches('_');
            let n = rest
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad rank in {name:?}")))?;
            (series, Some(n))
        };
        Self::new(series, n, simply_connected)
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> Option<u32> {
        self.n
    }

    pub fn is_simply_connected(&self) -> bool {
        self.simply_connected
    }

    /// `A3`, `E8` and so on, without the isogeny class.
    pub fn label(&self) -> String {
        match self.n {
            Some(n) => format!("{}{}", self.series, n),
            None => self.series.name().to_owned(),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let class = if self.simply_connected { "sc" } else { "non-sc" };
        write!(f, "{} ({class})", self.label())
    }
}

// ---------------------------------------------------------------------------
// formulas

#[derive(Debug, Clone, PartialEq, Eq)]
enum Expr {
    Num(i128),
    Rank,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    V2(Box<Expr>),
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at offset {} in formula {:?}",
            self.pos,
            core::str::from_utf8(self.src).unwrap_or("")
        ))
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {:?}", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            Ok(Expr::Pow(Box::new(base), Box::new(self.power()?)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let rest = &self.src[self.pos..];
        if rest.starts_with(b"max(") {
            self.pos += 4;
            let a = self.expr()?;
            self.expect(b',')?;
            let b = self.expr()?;
            self.expect(b')')?;
            return Ok(Expr::Max(Box::new(a), Box::new(b)));
        }
        if rest.starts_with(b"v2(") {
            self.pos += 3;
            let a = self.expr()?;
            self.expect(b')')?;
            return Ok(Expr::V2(Box::new(a)));
        }
        match self.peek() {
            Some(b'n') => {
                self.pos += 1;
                Ok(Expr::Rank)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                digits.parse().map(Expr::Num).map_err(|_| self.err("number too large"))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

fn eval(e: &Expr, n: Option<u32>) -> Result<i128> {
    let overflow = || Error::Internal("formula overflow".to_owned());
    Ok(match e {
        Expr::Num(v) => *v,
        Expr::Rank => n.ok_or_else(|| {
            Error::Precondition("formula uses n but the group has no rank".to_owned())
        })? as i128,
        Expr::Add(a, b) => eval(a, n)?.checked_add(eval(b, n)?).ok_or_else(overflow)?,
        Expr::Sub(a, b) => eval(a, n)?.checked_sub(eval(b, n)?).ok_or_else(overflow)?,
        Expr::Mul(a, b) => eval(a, n)?.checked_mul(eval(b, n)?).ok_or_else(overflow)?,
        Expr::Pow(a, b) => {
            let exp = eval(b, n)?;
            let exp = u32::try_from(exp)
                .map_err(|_| Error::Precondition(format!("bad exponent {exp}")))?;
            eval(a, n)?.checked_pow(exp).ok_or_else(overflow)?
        }
        Expr::Max(a, b) => eval(a, n)?.max(eval(b, n)?),
        Expr::V2(a) => {
            let v = eval(a, n)?;
            if v == 0 {
                return Err(Error::Precondition("v2(0) is undefined".to_owned()));
            }
            v.trailing_zeros() as i128
        }
    })
}

/// A table cell: an integer expression, possibly in the rank `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    source: String,
    expr: Expr,
}

impl Formula {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn uses_rank(&self) -> bool {
        fn walk(e: &Expr) -> bool {
            match e {
                Expr::Num(_) => false,
                Expr::Rank => true,
                Expr::V2(a) => walk(a),
                Expr::Add(a, b)
                | Expr::Sub(a, b)
                | Expr::Mul(a, b)
                | Expr::Pow(a, b)
                | Expr::Max(a, b) => walk(a) || walk(b),
            }
        }
        walk(&self.expr)
    }

    /// Evaluates at rank `n`; the result must be a positive integer.
    pub fn evaluate(&self, n: Option<u32>) -> Result<u64> {
        let v = eval(&self.expr, n)?;
        if v < 1 {
            return Err(Error::Internal(format!(
                "formula {} evaluated to {v}",
                self.source
            )));
        }
        u64::try_from(v).map_err(|_| Error::Internal("formula overflow".to_owned()))
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let source: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = ExprParser { src: source.as_bytes(), pos: 0 };
        let expr = p.expr()?;
        if p.pos != source.len() {
            return Err(p.err("trailing input"));
        }
        Ok(Formula { source, expr })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

// ---------------------------------------------------------------------------
// tables

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionRow {
    pub series: Series,
    /// Rows for classical series only apply from this rank up.
    pub min_rank: Option<u32>,
    pub primes: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TitsRow {
    pub series: Series,
    pub simply_connected: Option<Formula>,
    pub non_simply_connected: Option<Formula>,
}

/// An abelian `p`-subgroup of depth `d` known to exist in the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthFixture {
    pub group: GroupDescriptor,
    pub p: u64,
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedDivisor {
    pub name: String,
    pub value: u64,
    pub group: GroupDescriptor,
    /// `(p, depth)` pairs whose prime powers multiply to `value`.
    pub depths: Vec<(u64, u32)>,
}

impl FixedDivisor {
    pub fn recompose(&self) -> u64 {
        self.depths.iter().map(|&(p, d)| p.pow(d)).product()
    }
}

/// The parsed contents of the reference tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tables {
    pub torsion: Vec<TorsionRow>,
    pub tits: Vec<TitsRow>,
    pub e8_candidates: Vec<Formula>,
    pub depths: Vec<DepthFixture>,
    pub fixed_divisors: Vec<FixedDivisor>,
}

fn parse_opt<T: FromStr<Err = Error>>(cell: &str) -> Result<Option<T>> {
    if cell == "-" {
        Ok(None)
    } else {
        cell.parse().map(Some)
    }
}

fn parse_num<T: FromStr>(cell: &str, line: usize) -> Result<T> {
    cell.parse()
        .map_err(|_| Error::Parse(format!("line {line}: bad number {cell:?}")))
}

fn parse_form(series: Series, cell: &str, line: usize) -> Result<GroupDescriptor> {
    let sc = match cell {
        "sc" => true,
        "ad" => false,
        _ => return Err(Error::Parse(format!("line {line}: bad isogeny class {cell:?}"))),
    };
    GroupDescriptor::new(series, None, sc)
}

impl Tables {
    /// The embedded tables.
    pub fn embedded() -> Result<Self> {
        Self::parse(TABLES_SOURCE)
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut t = Tables {
            torsion: Vec::new(),
            tits: Vec::new(),
            e8_candidates: Vec::new(),
            depths: Vec::new(),
            fixed_divisors: Vec::new(),
        };
        let mut section = "";
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            if let Some(name) = text.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                section = match name {
                    "torsion" | "tits" | "e8-candidates" | "depths" | "fixed-divisors" => name,
                    _ => return Err(Error::Parse(format!("line {line}: unknown section {name}"))),
                };
                continue;
            }
            let cells: Vec<&str> = text.split_whitespace().collect();
            let want = |k: usize| -> Result<()> {
                if cells.len() < k {
                    Err(Error::Parse(format!("line {line}: expected at least {k} fields")))
                } else {
                    Ok(())
                }
            };
            match section {
                "torsion" => {
                    want(3)?;
                    let series: Series = cells[0].parse()?;
                    let min_rank = match cells[1] {
                        "-" => None,
                        c => Some(parse_num::<u32>(c, line)?),
                    };
                    let primes = if cells[2..] == ["-"] {
                        Vec::new()
                    } else {
                        cells[2..]
                            .iter()
                            .map(|c| parse_num::<u64>(c, line))
                            .collect::<Result<Vec<_>>>()?
                    };
                    t.torsion.push(TorsionRow { series, min_rank, primes });
                }
                "tits" => {
                    if cells.len() != 3 {
                        return Err(Error::Parse(format!("line {line}: expected 3 fields")));
                    }
                    t.tits.push(TitsRow {
                        series: cells[0].parse()?,
                        simply_connected: parse_opt(cells[1])?,
                        non_simply_connected: parse_opt(cells[2])?,
                    });
                }
                "e8-candidates" => t.e8_candidates.push(text.parse()?),
                "depths" => {
                    if cells.len() != 4 {
                        return Err(Error::Parse(format!("line {line}: expected 4 fields")));
                    }
                    t.depths.push(DepthFixture {
                        group: parse_form(cells[0].parse()?, cells[1], line)?,
                        p: parse_num(cells[2], line)?,
                        d: parse_num(cells[3], line)?,
                    });
                }
                "fixed-divisors" => {
                    want(5)?;
                    let depths = cells[4..]
                        .iter()
                        .map(|c| {
                            let (p, d) = c.split_once(':').ok_or_else(|| {
                                Error::Parse(format!("line {line}: expected prime:depth"))
                            })?;
                            Ok((parse_num(p, line)?, parse_num(d, line)?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    t.fixed_divisors.push(FixedDivisor {
                        name: cells[0].to_owned(),
                        value: parse_num(cells[1], line)?,
                        group: parse_form(cells[2].parse()?, cells[3], line)?,
                        depths,
                    });
                }
                _ => return Err(Error::Parse(format!("line {line}: data outside a section"))),
            }
        }
        Ok(t)
    }

    /// Writes the tables back in the format [`Tables::parse`] reads.
    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        let dash = |o: Option<String>| o.unwrap_or_else(|| "-".to_owned());
        let form = |g: &GroupDescriptor| if g.simply_connected { "sc" } else { "ad" };
        let mut out = String::new();
        out.push_str("[torsion]\n");
        for r in &self.torsion {
            let primes: Vec<String> = r.primes.iter().map(|p| p.to_string()).collect();
            let primes = if primes.is_empty() { "-".to_owned() } else { primes.join(" ") };
            let _ = writeln!(
                out,
                "{} {} {}",
                r.series,
                dash(r.min_rank.map(|m| m.to_string())),
                primes
            );
        }
        out.push_str("\n[tits]\n");
        for r in &self.tits {
            let _ = writeln!(
                out,
                "{} {} {}",
                r.series,
                dash(r.simply_connected.as_ref().map(|f| f.to_string())),
                dash(r.non_simply_connected.as_ref().map(|f| f.to_string()))
            );
        }
        out.push_str("\n[e8-candidates]\n");
        for f in &self.e8_candidates {
            let _ = writeln!(out, "{f}");
        }
        out.push_str("\n[depths]\n");
        for d in &self.depths {
            let _ = writeln!(out, "{} {} {} {}", d.group.series, form(&d.group), d.p, d.d);
        }
        out.push_str("\n[fixed-divisors]\n");
        for f in &self.fixed_divisors {
            let depths: Vec<String> = f.depths.iter().map(|(p, d)| format!("{p}:{d}")).collect();
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                f.name,
                f.value,
                f.group.series,
                form(&f.group),
                depths.join(" ")
            );
        }
        out
    }

    pub fn torsion_primes(&self, g: &GroupDescriptor) -> Result<BTreeSet<u64>> {
        let unsupported = || Error::UnsupportedType(format!("no torsion entry for {g}"));
        if !g.simply_connected {
            return Err(unsupported());
        }
        let row = self.torsion.iter().find(|r| r.series == g.series).ok_or_else(unsupported)?;
        if let (Some(min), Some(n)) = (row.min_rank, g.n) {
            if n < min {
                return Err(unsupported());
            }
        }
        Ok(row.primes.iter().copied().collect())
    }

    pub fn tits_n(&self, g: &GroupDescriptor) -> Result<u64> {
        let unsupported = || Error::UnsupportedType(format!("no Tits entry for {g}"));
        let row = self.tits.iter().find(|r| r.series == g.series).ok_or_else(unsupported)?;
        let cell = if g.simply_connected {
            &row.simply_connected
        } else {
            &row.non_simply_connected
        };
        cell.as_ref().ok_or_else(unsupported)?.evaluate(g.n)
    }
}

// ---------------------------------------------------------------------------
// operations

/// Torsion primes of a simply connected simple group.
pub fn torsion_primes(g: &GroupDescriptor) -> Result<BTreeSet<u64>> {
    Tables::embedded()?.torsion_primes(g)
}

/// The Tits number `n(G)`: every torsor is split by an extension of degree
/// dividing it.
pub fn tits_n(g: &GroupDescriptor) -> Result<u64> {
    Tables::embedded()?.tits_n(g)
}

/// Whether `p^d` divides `n(G)`.
pub fn depth_consistency(g: &GroupDescriptor, p: u64, d: u32) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let n = tits_n(g)?;
    Ok(match p.checked_pow(d) {
        Some(q) => n % q == 0,
        None => false,
    })
}

/// Unresolved value of `n(E8)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct E8Candidates {
    pub candidates: Vec<u64>,
    pub lcm: u64,
    /// The tabulated value, equal to `lcm`.
    pub served: u64,
    /// Always true: which candidate is correct is open.
    pub uncertain: bool,
}

pub fn e8_candidates() -> Result<E8Candidates> {
    let t = Tables::embedded()?;
    let candidates = t
        .e8_candidates
        .iter()
        .map(|f| f.evaluate(None))
        .collect::<Result<Vec<_>>>()?;
    let lcm = candidates.iter().fold(1, |a, &b| crate::qz::lcm(a, b));
    let served = t.tits_n(&GroupDescriptor::simply_connected(Series::E8, None)?)?;
    if served != lcm {
        return Err(Error::Internal(format!(
            "tabulated n(E8) = {served} but the candidates have lcm {lcm}"
        )));
    }
    Ok(E8Candidates { candidates, lcm, served, uncertain: true })
}

/// Exponents for orthogonal groups of an `n`-dimensional form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadformSplit {
    /// Splitting fields of degree `2^upper_l` exist.
    pub upper_l: u32,
    /// Generic forms need degree at least `2^lower_exp`.
    pub lower_exp: u32,
}

/// `O_n` gives `floor((n+1)/2)` both ways, `SO_n` gives `floor((n-1)/2)`.
pub fn quadform_split_exponents(n: u32, det_one: bool) -> Result<QuadformSplit> {
    if n < 1 {
        return Err(Error::Precondition("n must be at least 1".to_owned()));
    }
    let e = if det_one { (n - 1) / 2 } else { n.div_ceil(2) };
    Ok(QuadformSplit { upper_l: e, lower_exp: e })
}

/// Known divisors of splitting degrees, checked against their depth
/// decomposition and against `n(G)`.
pub fn fixed_divisor_entries() -> Result<Vec<FixedDivisor>> {
    let t = Tables::embedded()?;
    for f in &t.fixed_divisors {
        if f.recompose() != f.value {
            return Err(Error::Internal(format!(
                "{} = {} does not recompose to {}",
                f.name,
                f.value,
                f.recompose()
            )));
        }
        if t.tits_n(&f.group)? % f.value != 0 {
            return Err(Error::Internal(format!("{} does not divide n(G)", f.name)));
        }
    }
    Ok(t.fixed_divisors)
}

pub fn fixed_divisors() -> Result<BTreeMap<String, u64>> {
    Ok(fixed_divisor_entries()?
        .into_iter()
        .map(|f| (f.name, f.value))
        .collect())
}

/// Each shipped depth fixture with its divisibility verdict.
pub fn depth_fixtures() -> Result<Vec<(DepthFixture, bool)>> {
    Tables::embedded()?
        .depths
        .into_iter()
        .map(|f| Ok((f, depth_consistency(&f.group, f.p, f.d)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sc(s: Series, n: Option<u32>) -> GroupDescriptor {
        GroupDescriptor::new(s, n, true).unwrap()
    }

    fn ad(s: Series, n: Option<u32>) -> GroupDescriptor {
        GroupDescriptor::new(s, n, false).unwrap()
    }

    fn v2(n: u32) -> u32 {
        n.trailing_zeros()
    }

    #[test]
    fn torsion_examples() {
        let e8 = torsion_primes(&sc(Series::E8, None)).unwrap();
        assert_eq!(e8.into_iter().collect::<Vec<_>>(), vec![2, 3, 5]);
        assert!(torsion_primes(&sc(Series::A, Some(4))).unwrap().is_empty());
        assert!(torsion_primes(&sc(Series::C, Some(3))).unwrap().is_empty());
        let g2 = torsion_primes(&sc(Series::G2, None)).unwrap();
        assert_eq!(g2.into_iter().collect::<Vec<_>>(), vec![2]);
        for s in [Series::F4, Series::E6, Series::E7] {
            let t = torsion_primes(&sc(s, None)).unwrap();
            assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![2, 3]);
        }
        assert_eq!(torsion_primes(&sc(Series::B, Some(3))).unwrap().len(), 1);
        assert_eq!(torsion_primes(&sc(Series::D, Some(4))).unwrap().len(), 1);
    }

    #[test]
    fn torsion_outside_table() {
        let b2 = sc(Series::B, Some(2));
        assert_eq!(torsion_primes(&b2).unwrap_err().code(), "unsupported-type");
        let e7ad = ad(Series::E7, None);
        assert_eq!(torsion_primes(&e7ad).unwrap_err().code(), "unsupported-type");
    }

    #[test]
    fn tits_examples() {
        assert_eq!(tits_n(&sc(Series::E8, None)).unwrap(), 17280);
        assert_eq!(17280, 2u64.pow(7) * 27 * 5);
        assert_eq!(tits_n(&sc(Series::E7, None)).unwrap(), 12);
        assert_eq!(tits_n(&ad(Series::E7, None)).unwrap(), 96);
        assert_eq!(tits_n(&ad(Series::E6, None)).unwrap(), 162);
        assert_eq!(tits_n(&ad(Series::C, Some(2))).unwrap(), 4);
        assert_eq!(tits_n(&ad(Series::G2, None)).unwrap_err().code(), "unsupported-type");
        assert_eq!(tits_n(&ad(Series::E8, None)).unwrap_err().code(), "unsupported-type");
    }

    #[test]
    fn formula_rows_agree_with_direct_evaluation() {
        for n in 1..=20u32 {
            assert_eq!(tits_n(&sc(Series::A, Some(n))).unwrap(), 1);
            assert_eq!(tits_n(&ad(Series::A, Some(n))).unwrap(), n as u64 + 1);
        }
        for n in 2..=20u32 {
            let b_sc = 1u64 << 1.max(n as i64 - 4);
            assert_eq!(tits_n(&sc(Series::B, Some(n))).unwrap(), b_sc);
            assert_eq!(tits_n(&ad(Series::B, Some(n))).unwrap(), 1 << n);
            assert_eq!(tits_n(&sc(Series::C, Some(n))).unwrap(), 1);
            assert_eq!(tits_n(&ad(Series::C, Some(n))).unwrap(), 1 << (v2(n) + 1));
        }
        for n in 4..=20u32 {
            let d_sc = 1u64 << 1.max(n as i64 - 5);
            assert_eq!(tits_n(&sc(Series::D, Some(n))).unwrap(), d_sc);
            assert_eq!(tits_n(&ad(Series::D, Some(n))).unwrap(), 1 << (v2(n) + n));
        }
        // a few small values written out
        assert_eq!(tits_n(&sc(Series::B, Some(6))).unwrap(), 4);
        assert_eq!(tits_n(&sc(Series::D, Some(7))).unwrap(), 4);
        assert_eq!(tits_n(&ad(Series::D, Some(6))).unwrap(), 128);
        assert_eq!(tits_n(&ad(Series::C, Some(4))).unwrap(), 8);
    }

    #[test]
    fn depth_examples() {
        assert!(depth_consistency(&sc(Series::E8, None), 2, 2).unwrap());
        assert!(depth_consistency(&ad(Series::E7, None), 2, 2).unwrap());
        assert!(!depth_consistency(&sc(Series::E8, None), 7, 1).unwrap());
        assert!(!depth_consistency(&sc(Series::E8, None), 2, 8).unwrap());
        assert!(depth_consistency(&sc(Series::E8, None), 4, 1).is_err());
    }

    #[test]
    fn shipped_depth_fixtures_hold() {
        let fx = depth_fixtures().unwrap();
        assert_eq!(fx.len(), 8);
        for (f, ok) in fx {
            let n = tits_n(&f.group).unwrap();
            assert_eq!(n % f.p.pow(f.d), 0, "{f:?}");
            assert!(ok);
        }
    }

    #[test]
    fn fixed_divisor_values() {
        let m = fixed_divisors().unwrap();
        assert_eq!(m["E8_splitting"], 60);
        assert_eq!(m["E7_splitting"], 12);
        assert_eq!(4 * 3 * 5, 60);
        for f in fixed_divisor_entries().unwrap() {
            assert_eq!(f.recompose(), f.value);
        }
    }

    #[test]
    fn e8_lcm() {
        let e = e8_candidates().unwrap();
        assert_eq!(e.candidates, vec![1920, 2880, 2160]);
        assert_eq!(e.lcm, 17280);
        assert!(e.uncertain);
    }

    #[test]
    fn quadform_examples() {
        let q = quadform_split_exponents(5, false).unwrap();
        assert_eq!((q.upper_l, q.lower_exp), (3, 3));
        let q = quadform_split_exponents(4, true).unwrap();
        assert_eq!((q.upper_l, q.lower_exp), (1, 1));
        for m in 1..20 {
            let q = quadform_split_exponents(2 * m, false).unwrap();
            assert_eq!((q.upper_l, q.lower_exp), (m, m));
        }
        assert!(quadform_split_exponents(0, false).is_err());
    }

    #[test]
    fn round_trip() {
        let t = Tables::embedded().unwrap();
        let again = Tables::parse(&t.to_text()).unwrap();
        assert_eq!(t, again);
        assert_eq!(again.to_text(), t.to_text());
    }

    #[test]
    fn descriptor_validation() {
        assert!(GroupDescriptor::new(Series::D, Some(3), true).is_err());
        assert!(GroupDescriptor::new(Series::B, Some(1), true).is_err());
        assert!(GroupDescriptor::new(Series::E8, Some(8), true).is_err());
        assert!(GroupDescriptor::new(Series::A, None, true).is_err());
        assert_eq!(GroupDescriptor::parse("E8", true).unwrap(), sc(Series::E8, None));
        assert_eq!(GroupDescriptor::parse("d_5", false).unwrap(), ad(Series::D, Some(5)));
        assert_eq!(GroupDescriptor::parse("A3", true).unwrap().label(), "A3");
        assert!(GroupDescriptor::parse("E9", true).is_err());
        assert!(GroupDescriptor::parse("G", true).is_err());
    }

    #[test]
    fn formula_parser() {
        let f: Formula = "2^(v2(n)+n)".parse().unwrap();
        assert!(f.uses_rank());
        assert_eq!(f.evaluate(Some(6)).unwrap(), 128);
        let f: Formula = "2 ^ 3 ^ 2".parse().unwrap();
        assert_eq!(f.evaluate(None).unwrap(), 512);
        assert_eq!("2*3-1".parse::<Formula>().unwrap().evaluate(None).unwrap(), 5);
        assert!("2^".parse::<Formula>().is_err());
        assert!("2)".parse::<Formula>().is_err());
        assert!("n".parse::<Formula>().unwrap().evaluate(None).is_err());
    }
}
