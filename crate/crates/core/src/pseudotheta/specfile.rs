//! Plain-text key = value spec files.
//!
//! ```text
//! # V = ℤ⁴ with the sum-of-squares form, V₁ = first two coordinates
//! gram_V = 1 0 0 0; 0 1 0 0; 0 0 1 0; 0 0 0 1
//! embed_V1 = 0 1
//! embed_V0 =
//! radius = 7
//! phi_default = 1 0
//! phi_ext_V0 = 1 0
//! phi = 1 0; 1; 1/2 0
//! ```
//!
//! `phi` lines give a V₁-coordinate point, u (always 1 over ℚ with standard
//! finite data), and φ′ as "re im". Numbers are integers, fractions or
//! decimals, all read exactly. `serialize` writes fractions in lowest terms,
//! so serialize ∘ parse is idempotent and parse ∘ serialize is the identity.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rug::Rational;

use super::group::parse_rational;
use super::lattice::{Gram, QuadLatticeTriple};
use super::series::{ComplexQ, PseudoThetaSpec};
use crate::error::{Error, Result};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn ints(s: &str, line: usize) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| perr(line, format!("expected an integer, got '{t}'"))))
        .collect()
}

fn indices(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| perr(line, format!("expected an index, got '{t}'"))))
        .collect()
}

fn complex(s: &str, line: usize) -> Result<ComplexQ> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    let num = |t: &str| parse_rational(t).ok_or_else(|| perr(line, format!("expected a number, got '{t}'")));
    match parts.as_slice() {
        [re] => Ok(ComplexQ::real(num(re)?)),
        [re, im] => Ok(ComplexQ::new(num(re)?, num(im)?)),
        _ => Err(perr(line, "a complex value is 're' or 're im'")),
    }
}

pub fn parse_spec(text: &str) -> Result<PseudoThetaSpec> {
    let mut gram: Option<(Vec<Vec<i64>>, usize)> = None;
    let mut e1: Option<Vec<usize>> = None;
    let mut e0: Option<Vec<usize>> = None;
    let mut radius: Option<Rational> = None;
    let mut default: Option<ComplexQ> = None;
    let mut ext: Option<ComplexQ> = None;
    let mut phi = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last_line = ln;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| perr(ln, format!("expected 'key = value', got '{line}'")))?;
        let (key, val) = (key.trim(), val.trim());
        let dup = |set: bool| if set { Err(perr(ln, format!("duplicate key '{key}'"))) } else { Ok(()) };
        match key {
            "gram_V" => {
                dup(gram.is_some())?;
                let rows = val.split(';').map(|r| ints(r, ln)).collect::<Result<Vec<_>>>()?;
                gram = Some((rows, ln));
            }
            "embed_V1" => {
                dup(e1.is_some())?;
                e1 = Some(indices(val, ln)?);
            }
            "embed_V0" => {
                dup(e0.is_some())?;
                e0 = Some(indices(val, ln)?);
            }
            "radius" => {
                dup(radius.is_some())?;
                radius = Some(parse_rational(val).ok_or_else(|| perr(ln, format!("bad radius '{val}'")))?);
            }
            "phi_default" => {
                dup(default.is_some())?;
                default = Some(complex(val, ln)?);
            }
            "phi_ext_V0" => {
                dup(ext.is_some())?;
                ext = Some(complex(val, ln)?);
            }
            "phi" => {
                let f: Vec<&str> = val.split(';').collect();
                if f.len() != 3 {
                    return Err(perr(ln, "phi = <point>; <u>; <re> [im]"));
                }
                let x = ints(f[0], ln)?;
                let u = parse_rational(f[1].trim()).ok_or_else(|| perr(ln, "bad u"))?;
                if u != 1 {
                    return Err(perr(
                        ln,
                        "φ′ is tabulated at u = 1 only (standard finite data collapse the u-sum)",
                    ));
                }
                if phi.insert(x.clone(), complex(f[2], ln)?).is_some() {
                    return Err(perr(ln, format!("duplicate φ′ point {x:?}")));
                }
            }
            _ => return Err(perr(ln, format!("unknown key '{key}'"))),
        }
    }
    let missing = |k: &str| perr(last_line, format!("missing key '{k}'"));
    let (rows, gl) = gram.ok_or_else(|| missing("gram_V"))?;
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(perr(gl, "gram_V must be square"));
    }
    let g = Gram::new(d, rows.concat()).map_err(|e| perr(gl, e.to_string()))?;
    let triple = QuadLatticeTriple::new(g, e1.ok_or_else(|| missing("embed_V1"))?, e0.unwrap_or_default())
        .map_err(|e| perr(gl, e.to_string()))?;
    PseudoThetaSpec::new(
        triple,
        radius.ok_or_else(|| missing("radius"))?,
        default.ok_or_else(|| missing("phi_default"))?,
        ext.ok_or_else(|| missing("phi_ext_V0"))?,
        phi,
    )
    .map_err(|e| perr(last_line, e.to_string()))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cq(z: &ComplexQ) -> String {
    format!("{} {}", z.re, z.im)
}

pub fn serialize_spec(s: &PseudoThetaSpec) -> String {
    let t = &s.triple;
    let d = t.gram_v.dim();
    let rows: Vec<String> = (0..d).map(|i| join(&t.gram_v.entries()[i * d..(i + 1) * d])).collect();
    let mut out = String::new();
    writeln!(out, "gram_V = {}", rows.join("; ")).unwrap();
    writeln!(out, "embed_V1 = {}", join(&t.embed_v1)).unwrap();
    writeln!(out, "embed_V0 = {}", join(&t.embed_v0)).unwrap();
    writeln!(out, "radius = {}", s.radius).unwrap();
    writeln!(out, "phi_default = {}", cq(&s.phi_default)).unwrap();
    writeln!(out, "phi_ext_V0 = {}", cq(&s.phi_ext_v0)).unwrap();
    for (x, v) in &s.phi {
        writeln!(out, "phi = {}; 1; {}", join(x), cq(v)).unwrap();
    }
    out
}
