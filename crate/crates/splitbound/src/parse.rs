//! Shell-friendly literals: groups `2,4`, elements `(1,3)`, tuples
//! `(1,0);(0,1)`, forms and GF(2) rows.

use std::fs;

use serde::Deserialize;
use splitbound_core::f2quad::F2QuadForm;
use splitbound_core::qzforms::standard_module;
use splitbound_core::{Element, Error, FinAbGroup, QmodZ, SkewForm};

use crate::CliError;

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::Parse(msg.into()))
}

fn parse_u64(s: &str) -> Result<u64, CliError> {
    s.trim().parse().map_err(|_| bad(format!("expected a nonnegative integer, got {s:?}")))
}

/// `2,4`; the empty string and `1` are the trivial group.
pub fn group(s: &str) -> Result<FinAbGroup, CliError> {
    let s = s.trim();
    if s.is_empty() || s == "1" {
        return Ok(FinAbGroup::trivial());
    }
    let factors = s.split(',').map(parse_u64).collect::<Result<Vec<_>, _>>()?;
    Ok(FinAbGroup::new(&factors)?)
}

/// `(1,3)` or bare `1,3`; entries are reduced modulo the invariants.
pub fn element(g: &FinAbGroup, s: &str) -> Result<Element, CliError> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    let coords: Vec<i64> = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|c| c.trim().parse().map_err(|_| bad(format!("bad coordinate {c:?}"))))
            .collect::<Result<_, _>>()?
    };
    Ok(g.element_reduced(&coords)?)
}

/// `(1,0);(0,1)`.
pub fn tuple(g: &FinAbGroup, s: &str) -> Result<Vec<Element>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(|e| element(g, e)).collect()
}

#[derive(Deserialize)]
struct FormFile {
    group: Vec<u64>,
    gram: Vec<Vec<String>>,
}

fn gram_rows(rows: &[Vec<String>]) -> Result<Vec<Vec<QmodZ>>, CliError> {
    rows.iter()
        .map(|r| r.iter().map(|c| Ok(c.trim().parse::<QmodZ>()?)).collect())
        .collect()
}

/// `std:2,4` (the standard module of `A = [2,4]`), `2,2|0,1/2;1/2,0`, or
/// `@path` holding either of these or `{"group": [...], "gram": [[...]]}`.
pub fn form(s: &str) -> Result<SkewForm, CliError> {
    let s = s.trim();
    if let Some(path) = s.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
        let text = text.trim();
        if text.starts_with('{') {
            let f: FormFile =
                serde_json::from_str(text).map_err(|e| bad(format!("{path}: {e}")))?;
            let g = FinAbGroup::new(&f.group)?;
            return Ok(SkewForm::new(g, &gram_rows(&f.gram)?)?);
        }
        return form(text);
    }
    if let Some(a) = s.strip_prefix("std:") {
        return Ok(standard_module(&group(a)?));
    }
    let (g, gram) = s
        .split_once('|')
        .ok_or_else(|| bad("form literal needs the shape <group>|<row>;<row>..."))?;
    let g = group(g)?;
    let rows: Vec<Vec<String>> = if gram.trim().is_empty() {
        Vec::new()
    } else {
        gram.split(';')
            .map(|r| r.split(',').map(str::to_owned).collect())
            .collect()
    };
    Ok(SkewForm::new(g, &gram_rows(&rows)?)?)
}

/// Hex rows such as `2,0,1`; row `i` holds bit `j >= i` of the
/// upper-triangular matrix.
pub fn f2_form(dim: usize, rows: &str) -> Result<F2QuadForm, CliError> {
    let rows = if rows.trim().is_empty() {
        Vec::new()
    } else {
        rows.split(',')
            .map(|r| {
                let r = r.trim();
                let r = r.strip_prefix("0x").unwrap_or(r);
                u32::from_str_radix(r, 16).map_err(|_| bad(format!("bad hex row {r:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(F2QuadForm::new(dim, rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups() {
        assert_eq!(group("2,3").unwrap().invariants(), &[6]);
        assert_eq!(group("4, 2").unwrap().invariants(), &[2, 4]);
        assert_eq!(group("").unwrap().order(), 1);
        assert!(group("2,x").is_err());
        assert!(group("1,2").is_err());
    }

    #[test]
    fn elements() {
        let g = group("2,4").unwrap();
        assert_eq!(element(&g, "(1,3)").unwrap().coords(), &[1, 3]);
        assert_eq!(element(&g, "3,-1").unwrap().coords(), &[1, 3]);
        assert!(element(&g, "(1)").is_err());
        assert_eq!(tuple(&g, "(1,0);(0,1)").unwrap().len(), 2);
    }

    #[test]
    fn forms() {
        let w = form("2,2|0,1/2;1/2,0").unwrap();
        assert!(w.is_nondegenerate());
        assert_eq!(w, form("std:2").unwrap());
        assert!(form("2,2|0,1/3;1/3,0").is_err());
        assert!(form("2,2").is_err());
    }

    #[test]
    fn f2_rows() {
        let q = f2_form(2, "2,0").unwrap();
        assert_eq!(q.count_anisotropic().unwrap(), 1);
        assert!(f2_form(2, "zz,0").is_err());
    }
}
