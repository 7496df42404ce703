//! The line-oriented `.wcspd` instance format.
//!
//! ```text
//! # comment
//! p wcspd <num_vars> <domain_size> <num_constraints>
//! con <arity> <v1> ... <vk> default <num>/<den>
//! t <d1> ... <dk> <num>/<den>
//! ```
//!
//! Variables are 1-based, domain values 0-based. `t` lines belong to the
//! closest preceding `con` and list values in that line's variable order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::wcsp::{WcspInstance, WeightedConstraint};
use crate::Var;

struct PendingConstraint {
    line: usize,
    scope: Vec<Var>,
    default: Rational,
    entries: Vec<(Vec<u32>, Rational)>,
}

struct Header {
    num_vars: u32,
    domain_size: u32,
    num_constraints: usize,
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))
}

fn parse_rational(tok: &str, line: usize) -> Result<Rational> {
    tok.parse()
        .map_err(|e: crate::rational::ParseRationalError| Error::parse(line, e.to_string()))
}

pub fn parse_wcspd(text: &str) -> Result<WcspInstance> {
    let mut header: Option<Header> = None;
    let mut instance: Option<WcspInstance> = None;
    let mut pending: Option<PendingConstraint> = None;
    let mut seen = 0usize;

    let flush = |instance: &mut WcspInstance, p: PendingConstraint| -> Result<()> {
        let line = p.line;
        let c = WeightedConstraint::from_table(&p.scope, p.default, p.entries)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        instance
            .push(c)
            .map_err(|e| Error::parse(line, e.to_string()))?;
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(lineno, "duplicate header"));
                }
                if toks.len() != 5 || toks[1] != "wcspd" {
                    return Err(Error::parse(
                        lineno,
                        "malformed header, expected `p wcspd <num_vars> <domain_size> <num_constraints>`",
                    ));
                }
                let h = Header {
                    num_vars: parse_num(toks[2], lineno, "variable count")?,
                    domain_size: parse_num(toks[3], lineno, "domain size")?,
                    num_constraints: parse_num(toks[4], lineno, "constraint count")?,
                };
                instance = Some(
                    WcspInstance::new(h.domain_size, h.num_vars)
                        .map_err(|e| Error::parse(lineno, e.to_string()))?,
                );
                header = Some(h);
            }
            "con" => {
                let inst = instance
                    .as_mut()
                    .ok_or_else(|| Error::parse(lineno, "constraint before header"))?;
                let h = header.as_ref().expect("set with instance");
                if let Some(p) = pending.take() {
                    flush(inst, p)?;
                }
                let arity: usize = toks
                    .get(1)
                    .ok_or_else(|| Error::parse(lineno, "missing arity"))
                    .and_then(|t| parse_num(t, lineno, "arity"))?;
                if toks.len() != arity + 4 || toks[arity + 2] != "default" {
                    return Err(Error::parse(
                        lineno,
                        format!("expected `con {arity} <{arity} variables> default <num>/<den>`"),
                    ));
                }
                let mut scope = Vec::with_capacity(arity);
                for t in &toks[2..2 + arity] {
                    let idx: u32 = parse_num(t, lineno, "variable")?;
                    if idx == 0 || idx > h.num_vars {
                        return Err(Error::parse(
                            lineno,
                            format!("variable {idx} out of range 1..={}", h.num_vars),
                        ));
                    }
                    scope.push(Var::new(idx));
                }
                let default = parse_rational(toks[arity + 3], lineno)?;
                pending = Some(PendingConstraint {
                    line: lineno,
                    scope,
                    default,
                    entries: Vec::new(),
                });
                seen += 1;
            }
            "t" => {
                let h = header
                    .as_ref()
                    .ok_or_else(|| Error::parse(lineno, "tuple before header"))?;
                let p = pending
                    .as_mut()
                    .ok_or_else(|| Error::parse(lineno, "tuple before any constraint"))?;
                let arity = p.scope.len();
                if toks.len() != arity + 2 {
                    return Err(Error::parse(
                        lineno,
                        format!(
                            "arity mismatch: expected {arity} domain values and a weight, got {} tokens",
                            toks.len() - 1
                        ),
                    ));
                }
                let mut tuple = Vec::with_capacity(arity);
                for t in &toks[1..=arity] {
                    let d: u32 = parse_num(t, lineno, "domain value")?;
                    if d >= h.domain_size {
                        return Err(Error::parse(
                            lineno,
                            format!("domain value {d} out of range 0..{}", h.domain_size),
                        ));
                    }
                    tuple.push(d);
                }
                if p.entries.iter().any(|(k, _)| *k == tuple) {
                    return Err(Error::parse(
                        lineno,
                        format!("duplicate support tuple {tuple:?}"),
                    ));
                }
                let value = parse_rational(toks[arity + 1], lineno)?;
                p.entries.push((tuple, value));
            }
            other => {
                return Err(Error::parse(lineno, format!("unknown line type {other:?}")));
            }
        }
    }

    let mut inst = instance.ok_or_else(|| Error::parse(1, "missing `p wcspd` header"))?;
    if let Some(p) = pending.take() {
        flush(&mut inst, p)?;
    }
    let h = header.expect("set with instance");
    if seen != h.num_constraints {
        return Err(Error::parse(
            text.lines().count(),
            format!(
                "header declares {} constraints, found {seen}",
                h.num_constraints
            ),
        ));
    }
    Ok(inst)
}

/// Canonical text: the scalar (when not 1) as a leading empty-scope
/// constraint, then constraints in order with sorted scopes. Support
/// entries equal to the default are omitted.
pub fn serialize_wcspd(instance: &WcspInstance) -> String {
    let mut body = String::new();
    let mut count = 0usize;
    if !instance.scalar().is_one() {
        let _ = writeln!(body, "con 0 default {}", instance.scalar());
        count += 1;
    }
    for c in instance.constraints() {
        count += 1;
        let _ = write!(body, "con {}", c.scope().len());
        for v in c.scope() {
            let _ = write!(body, " {v}");
        }
        let _ = writeln!(body, " default {}", c.default_value());
        for (tuple, value) in c.support() {
            if value == c.default_value() {
                continue;
            }
            body.push('t');
            for d in tuple {
                let _ = write!(body, " {d}");
            }
            let _ = writeln!(body, " {value}");
        }
    }
    format!(
        "p wcspd {} {} {}\n{body}",
        instance.num_vars(),
        instance.domain_size(),
        count
    )
}
