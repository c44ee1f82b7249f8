//! Plain-text sparse QUBO export.
//!
//! ```text
//! # steiner-qubo sparse model
//! # name: path3
//! # offset: 3
//! # lambda: 10000
//! # steps: 2
//! 29
//! 0 0 -10000
//! 0 7 5
//! ```
//!
//! After the header comes the variable count, then one `i j coeff` line per
//! nonzero coefficient with `i <= j`; `i == j` is a linear term.

use std::fmt::Write as _;

use anyhow::{bail, Context};
use steiner_qubo_core::qubo::QuboModel;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelHeader {
    pub name: Option<String>,
    pub lambda: Option<i64>,
    pub steps: Option<usize>,
    /// Free-form `key: value` lines written after the known keys.
    pub extra: Vec<(String, String)>,
}

pub fn write_model(model: &QuboModel, header: &ModelHeader) -> String {
    let mut out = String::from("# steiner-qubo sparse model\n");
    if let Some(name) = &header.name {
        let _ = writeln!(out, "# name: {name}");
    }
    let _ = writeln!(out, "# offset: {}", model.offset());
    if let Some(l) = header.lambda {
        let _ = writeln!(out, "# lambda: {l}");
    }
    if let Some(s) = header.steps {
        let _ = writeln!(out, "# steps: {s}");
    }
    for (k, v) in &header.extra {
        let _ = writeln!(out, "# {k}: {v}");
    }
    let _ = writeln!(out, "{}", model.num_vars());
    for (&i, &c) in model.linear() {
        let _ = writeln!(out, "{i} {i} {c}");
    }
    for (&(i, j), &c) in model.quadratic() {
        let _ = writeln!(out, "{i} {j} {c}");
    }
    out
}

pub fn read_model(text: &str) -> anyhow::Result<(QuboModel, ModelHeader)> {
    let mut header = ModelHeader::default();
    let mut offset = 0;
    let mut num_vars = None;
    let mut linear = Vec::new();
    let mut quadratic = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(comment) = body.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once(':') {
                let (k, v) = (k.trim(), v.trim());
                let bad = || format!("line {line}: invalid {k} '{v}'");
                match k {
                    "name" => header.name = Some(v.to_string()),
                    "offset" => offset = v.parse().with_context(bad)?,
                    "lambda" => header.lambda = Some(v.parse().with_context(bad)?),
                    "steps" => header.steps = Some(v.parse().with_context(bad)?),
                    _ => header.extra.push((k.to_string(), v.to_string())),
                }
            }
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match (num_vars, toks.as_slice()) {
            (None, [n]) => {
                num_vars = Some(
                    n.parse::<usize>()
                        .with_context(|| format!("line {line}: invalid variable count"))?,
                )
            }
            (Some(n), [a, b, c]) => {
                let parse = |t: &str| {
                    t.parse::<i64>()
                        .with_context(|| format!("line {line}: invalid number '{t}'"))
                };
                let (a, b, c) = (parse(a)?, parse(b)?, parse(c)?);
                if a < 0 || b < 0 || a as usize >= n || b as usize >= n {
                    bail!("line {line}: variable out of range for {n} variables");
                }
                let (a, b) = (a as usize, b as usize);
                if a == b {
                    linear.push((a, c));
                } else {
                    quadratic.push(((a.min(b), a.max(b)), c));
                }
            }
            _ => bail!("line {line}: unexpected '{body}'"),
        }
    }
    let n = num_vars.context("missing variable count")?;
    Ok((
        QuboModel::from_coefficients(n, linear, quadratic, offset),
        header,
    ))
}
