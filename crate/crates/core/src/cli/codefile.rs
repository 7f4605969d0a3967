//! Plain-text code description files.
//!
//! ```text
//! # 3-qubit CWS code
//! format: cws
//! n: 3
//! graph: 001;000;100
//! codeword: 011
//! correction: Z        # optional octahedral rotation label
//! ```
//!
//! Stabilizer files use `generators:` (comma separated), `logical_z:` and
//! `logical_x:` instead of `graph:` and `codeword:`. Keys may appear in any
//! order; `#` starts a comment.

use std::collections::BTreeMap;

use crate::cws::{CwsCode, Graph};
use crate::distill::CliffordRotation;
use crate::error::{Error, Result};
use crate::pauli::GeneratorSet;
use crate::registry::{CodeBody, CodeSpec};

const KEYS: &[&str] = &["format", "n", "graph", "codeword", "correction", "generators", "logical_z", "logical_x"];

fn at(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn strip_context(e: Error) -> String {
    match e {
        Error::Parse(m) => m,
        other => other.to_string(),
    }
}

/// Parses a code file; `name` labels the resulting spec.
pub fn parse_code_file(name: &str, text: &str) -> Result<CodeSpec> {
    let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once(':').ok_or_else(|| at(line, format!("expected `key: value`, got `{content}`")))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(at(line, format!("unknown key `{key}`")));
        }
        if fields.insert(key, (line, value.trim())).is_some() {
            return Err(at(line, format!("duplicate key `{key}`")));
        }
    }
    let get = |key: &str| fields.get(key).copied();
    let require = |key: &str| get(key).ok_or_else(|| Error::Parse(format!("missing key `{key}`")));

    let (fl, format) = require("format")?;
    let (nl, n_text) = require("n")?;
    let n: usize = n_text.parse().map_err(|_| at(nl, format!("`{n_text}` is not a qubit count")))?;

    let correction = match get("correction") {
        None => None,
        Some((_, v)) if v.eq_ignore_ascii_case("none") => None,
        Some((line, v)) => Some(v.parse::<CliffordRotation>().map_err(|e| at(line, strip_context(e)))?),
    };

    let spec = match format {
        "cws" => {
            for key in ["generators", "logical_z", "logical_x"] {
                if let Some((line, _)) = get(key) {
                    return Err(at(line, format!("`{key}` is not used by cws files")));
                }
            }
            let (gl, g) = require("graph")?;
            let graph = Graph::parse_rows(g).map_err(|e| at(gl, strip_context(e)))?;
            if graph.n() != n {
                return Err(at(gl, format!("graph has {} vertices but n is {n}", graph.n())));
            }
            let (wl, w) = require("codeword")?;
            let code = CwsCode::with_codeword_str(graph, w).map_err(|e| at(wl, strip_context(e)))?;
            CodeSpec::cws(name, code)
        }
        "stabilizer" => {
            for key in ["graph", "codeword"] {
                if let Some((line, _)) = get(key) {
                    return Err(at(line, format!("`{key}` is not used by stabilizer files")));
                }
            }
            let (gl, gens) = require("generators")?;
            let gens: Vec<&str> = gens.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let (zl, lz) = require("logical_z")?;
            let (xl, lx) = require("logical_x")?;
            for (line, text) in gens.iter().map(|g| (gl, *g)).chain([(zl, lz), (xl, lx)]) {
                let op: crate::pauli::PauliOperator = text.parse().map_err(|e| at(line, strip_context(e)))?;
                if op.n() != n {
                    return Err(at(line, format!("`{text}` acts on {} qubits but n is {n}", op.n())));
                }
            }
            let set = GeneratorSet::parse(&gens, lz, lx).map_err(|e| at(gl, strip_context(e)))?;
            CodeSpec::stabilizer(name, set)
        }
        other => return Err(at(fl, format!("unknown format `{other}` (expected cws or stabilizer)"))),
    };
    Ok(spec.with_correction(correction))
}

/// Inverse of [`parse_code_file`].
pub fn format_code_file(spec: &CodeSpec) -> String {
    let mut out = format!("# {}\n", spec.name);
    match &spec.body {
        CodeBody::Cws(c) => {
            out += &format!("format: cws\nn: {}\ngraph: {}\ncodeword: {}\n", c.n(), c.graph().to_rows_string(), c.codeword_string());
        }
        CodeBody::Stabilizer(s) => {
            let gens: Vec<String> = s.generators().iter().map(|g| g.to_string()).collect();
            out += &format!(
                "format: stabilizer\nn: {}\ngenerators: {}\nlogical_z: {}\nlogical_x: {}\n",
                s.n(),
                gens.join(", "),
                s.logical_z(),
                s.logical_x()
            );
        }
    }
    if let Some(r) = spec.correction {
        out += &format!("correction: {}\n", r.label());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry;

    #[test]
    fn builtins_round_trip() {
        for name in registry::BUILTIN_NAMES {
            let spec = registry::builtin(name).unwrap();
            let text = format_code_file(&spec);
            let back = parse_code_file(name, &text).unwrap();
            assert_eq!(back.body, spec.body, "{name}");
            assert_eq!(back.correction, spec.correction, "{name}");
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "format: stabilizer\nn: 3\n# comment\ngenerators: ZIZ, XQZ\nlogical_z: XXY\nlogical_x: IXZ\n";
        let err = parse_code_file("bad", text).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("'Q'"), "{err}");

        let err = parse_code_file("bad", "format: cws\nn: 3\ngraph: 01;10\ncodeword: 11\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");

        let err = parse_code_file("bad", "format: cws\nbogus\n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");

        assert!(parse_code_file("bad", "n: 3\n").unwrap_err().to_string().contains("format"));
    }

    #[test]
    fn key_order_and_comments_are_irrelevant() {
        let a = parse_code_file("a", "codeword: 011 # w\ngraph: 001;000;100\nn: 3\nformat: cws\n").unwrap();
        let b = parse_code_file("b", "format: cws\nn: 3\ngraph: 001;000;100\ncodeword: 011\ncorrection: none\n").unwrap();
        assert_eq!(a.body, b.body);
        assert_eq!(a.correction, None);
    }
}
