//! Line-oriented model file parser.
//!
//! ```text
//! # comment
//! [model]
//! kind = sps
//! name = square
//!
//! [lattice]
//! elements = 0 a a' 1
//!
//! [order]
//! 0 < a < 1
//! 0 < a' < 1
//!
//! [states]
//! names = p q
//!
//! [actuality]
//! p = a 1
//! q = a' 1
//! ```
//!
//! Hilbert documents carry `[hilbert]` (`dims = 2 2`) and any number of
//! `[matrix NAME RxC]` blocks: an optional `role = ...` line followed by `R`
//! rows of `C` comma-separated complex entries (`0.5`, `-1e-3+2i`, `0.5 - 0.5i`).
//! Laboratory worlds carry `[devices]` and `[lab ID]` blocks whose rows read
//! `object preparer r1=yes r2=no ...`, with `-` for an object without preparer.
//! Compound documents carry `[compound]`, `[include]` and matrix blocks.

use std::collections::HashSet;

use thiserror::Error;

use subentity_core::hilbert::{CMatrix, DensityOperator, HilbertError, Projection, C64};
use subentity_core::lecce::{Lab, LabObject, LabWorld};
use subentity_core::Tolerances;

use crate::model::{
    Body, CompoundSpec, HilbertSpec, LatticeSpec, MatrixRole, Meta, ModelDocument, ModelKind,
    NamedMatrix, SpsSpec,
};

/// Upper bound on `rows * cols` for one matrix block.
pub const MAX_MATRIX_ENTRIES: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("[{section}] {reason}")]
    Schema { section: String, reason: String },
}

fn schema(section: impl Into<String>, reason: impl Into<String>) -> ParseError {
    ParseError::Schema {
        section: section.into(),
        reason: reason.into(),
    }
}

const SECTIONS: [&str; 11] = [
    "model",
    "lattice",
    "order",
    "states",
    "actuality",
    "hilbert",
    "matrix",
    "compound",
    "include",
    "devices",
    "lab",
];

#[derive(Clone, Copy)]
struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    /// One-based column of `part`, which must be a subslice of this line.
    fn col(&self, part: &str) -> usize {
        let offset = (part.as_ptr() as usize)
            .saturating_sub(self.text.as_ptr() as usize)
            .min(self.text.len());
        self.text[..offset].chars().count() + 1
    }

    fn err(&self, part: &str, expected: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.no,
            col: self.col(part),
            expected: expected.into(),
        }
    }

    fn end_err(&self, expected: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.no,
            col: self.text.chars().count() + 1,
            expected: expected.into(),
        }
    }

    /// Splits `key = value`, returning both trimmed.
    fn key_value(&self) -> Result<(&'a str, &'a str), ParseError> {
        let Some((k, v)) = self.text.split_once('=') else {
            return Err(self.end_err("'='"));
        };
        let key = k.trim();
        if !is_ident(key) {
            return Err(self.err(self.text.trim_start(), "key"));
        }
        Ok((key, v.trim()))
    }
}

struct Section<'a> {
    name: &'a str,
    args: Vec<&'a str>,
    header: Line<'a>,
    body: Vec<Line<'a>>,
}

impl Section<'_> {
    fn title(&self) -> String {
        match self.args.first() {
            Some(a) => format!("{} {a}", self.name),
            None => self.name.to_string(),
        }
    }
}

fn is_ident(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || "=<,[]#".contains(c))
}

fn idents<'a>(line: &Line<'a>, value: &'a str) -> Result<Vec<String>, ParseError> {
    value
        .split_whitespace()
        .map(|t| {
            if is_ident(t) {
                Ok(t.to_string())
            } else {
                Err(line.err(t, "identifier"))
            }
        })
        .collect()
}

fn unique(section: &str, what: &str, names: &[String]) -> Result<(), ParseError> {
    let mut seen = HashSet::new();
    match names.iter().find(|n| !seen.insert(n.as_str())) {
        Some(n) => Err(schema(section, format!("duplicate {what} {n}"))),
        None => Ok(()),
    }
}

fn split_sections(text: &str) -> Result<Vec<Section<'_>>, ParseError> {
    let mut sections: Vec<Section<'_>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = Line {
            no: i + 1,
            text: raw,
        };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(line.end_err("']'"));
            };
            let mut parts = inner.split_whitespace();
            let Some(name) = parts.next() else {
                return Err(line.err(inner, "section name"));
            };
            if !SECTIONS.contains(&name) {
                return Err(line.err(name, format!("section name ({})", SECTIONS.join(", "))));
            }
            let args: Vec<&str> = parts.collect();
            let wanted = match name {
                "matrix" => 2,
                "lab" => 1,
                _ => 0,
            };
            if args.len() != wanted {
                let at = args.get(wanted).copied().unwrap_or(inner);
                let expected = match name {
                    "matrix" => "matrix header 'matrix NAME RxC'",
                    "lab" => "lab header 'lab ID'",
                    _ => "']' after section name",
                };
                return Err(if args.len() < wanted {
                    line.end_err(expected)
                } else {
                    line.err(at, expected)
                });
            }
            if let Some(bad) = args.iter().find(|a| !is_ident(a)) {
                return Err(line.err(bad, "identifier"));
            }
            sections.push(Section {
                name,
                args,
                header: line,
                body: Vec::new(),
            });
        } else {
            match sections.last_mut() {
                Some(s) => s.body.push(line),
                None => return Err(line.err(trimmed, "section header")),
            }
        }
    }
    Ok(sections)
}

/// Parses UTF-8 model text with the default tolerances.
pub fn parse_model(text: &[u8]) -> Result<ModelDocument, ParseError> {
    parse_model_with(text, &Tolerances::DEFAULT)
}

/// Parses model text, validating role-tagged matrices against `tol`.
pub fn parse_model_with(bytes: &[u8], tol: &Tolerances) -> Result<ModelDocument, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let before = &bytes[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let line_start = before
            .iter()
            .rposition(|&b| b == b'\n')
            .map_or(0, |p| p + 1);
        let col = String::from_utf8_lossy(&before[line_start..])
            .chars()
            .count()
            + 1;
        ParseError::Syntax {
            line,
            col,
            expected: "UTF-8 text".to_string(),
        }
    })?;
    let sections = split_sections(text)?;

    let mut models = sections.iter().filter(|s| s.name == "model");
    let model = models
        .next()
        .ok_or_else(|| schema("model", "missing section"))?;
    if models.next().is_some() {
        return Err(schema("model", "duplicate section"));
    }
    let (kind, meta) = parse_meta(model)?;

    let allowed: &[&str] = match kind {
        ModelKind::Lattice => &["model", "lattice", "order"],
        ModelKind::Sps => &["model", "lattice", "order", "states", "actuality"],
        ModelKind::Hilbert => &["model", "hilbert", "matrix"],
        ModelKind::LabWorld => &["model", "devices", "lab"],
        ModelKind::Compound => &["model", "compound", "include", "matrix"],
    };
    let mut seen = HashSet::new();
    for s in &sections {
        if !allowed.contains(&s.name) {
            return Err(schema(
                s.title(),
                format!("not allowed in a {kind} document"),
            ));
        }
        if !seen.insert(s.title()) {
            return Err(schema(s.title(), "duplicate section"));
        }
    }
    let find = |name: &str| sections.iter().find(|s| s.name == name);
    let require = |name: &str| find(name).ok_or_else(|| schema(name, "missing section"));

    let body = match kind {
        ModelKind::Lattice => Body::Lattice(parse_lattice(require("lattice")?, find("order"))?),
        ModelKind::Sps => {
            let lattice = parse_lattice(require("lattice")?, find("order"))?;
            Body::Sps(parse_sps(
                lattice,
                require("states")?,
                require("actuality")?,
            )?)
        }
        ModelKind::Hilbert => {
            let dims = parse_hilbert(require("hilbert")?)?;
            Body::Hilbert(HilbertSpec {
                dims,
                matrices: parse_matrices(&sections, tol)?,
            })
        }
        ModelKind::LabWorld => Body::LabWorld(parse_world(require("devices")?, &sections)?),
        ModelKind::Compound => Body::Compound(parse_compound(
            require("compound")?,
            find("include"),
            &sections,
            tol,
        )?),
    };
    Ok(ModelDocument { meta, body })
}

fn parse_meta(s: &Section<'_>) -> Result<(ModelKind, Meta), ParseError> {
    let mut kind = None;
    let mut meta = Meta::default();
    for line in &s.body {
        let (key, value) = line.key_value()?;
        match key {
            "kind" => {
                let k = ModelKind::from_name(value).ok_or_else(|| {
                    line.err(value, "kind (lattice, sps, hilbert, labworld, compound)")
                })?;
                kind = Some(k);
            }
            "name" => meta.name = value.to_string(),
            "description" => meta.description = value.to_string(),
            _ => return Err(line.err(key, "kind, name or description")),
        }
    }
    let kind = kind.ok_or_else(|| schema("model", "missing kind"))?;
    Ok((kind, meta))
}

fn parse_lattice(s: &Section<'_>, order: Option<&Section<'_>>) -> Result<LatticeSpec, ParseError> {
    let mut elements = None;
    for line in &s.body {
        let (key, value) = line.key_value()?;
        if key != "elements" {
            return Err(line.err(key, "elements"));
        }
        elements = Some(idents(line, value)?);
    }
    let elements = elements.ok_or_else(|| schema("lattice", "missing elements"))?;
    if elements.is_empty() {
        return Err(schema("lattice", "no elements"));
    }
    unique("lattice", "element", &elements)?;

    let mut pairs = Vec::new();
    for line in order.map(|o| o.body.as_slice()).unwrap_or_default() {
        let chain: Vec<&str> = line.text.split('<').map(str::trim).collect();
        if chain.len() < 2 {
            return Err(line.end_err("chain 'a < b [< c ...]'"));
        }
        for t in &chain {
            if !is_ident(t) {
                return Err(if t.is_empty() {
                    line.end_err("element name")
                } else {
                    line.err(t, "element name")
                });
            }
            if !elements.iter().any(|e| e == t) {
                return Err(schema("order", format!("unknown element {t}")));
            }
        }
        for w in chain.windows(2) {
            pairs.push((w[0].to_string(), w[1].to_string()));
        }
    }
    Ok(LatticeSpec {
        elements,
        order: pairs,
    })
}

fn parse_sps(
    lattice: LatticeSpec,
    states: &Section<'_>,
    actuality: &Section<'_>,
) -> Result<SpsSpec, ParseError> {
    let mut names = None;
    for line in &states.body {
        let (key, value) = line.key_value()?;
        if key != "names" {
            return Err(line.err(key, "names"));
        }
        names = Some(idents(line, value)?);
    }
    let names = names.ok_or_else(|| schema("states", "missing names"))?;
    unique("states", "state", &names)?;

    let mut actual: Vec<Option<Vec<String>>> = vec![None; names.len()];
    for line in &actuality.body {
        let (key, value) = line.key_value()?;
        let p = names
            .iter()
            .position(|n| n == key)
            .ok_or_else(|| schema("actuality", format!("unknown state {key}")))?;
        if actual[p].is_some() {
            return Err(schema("actuality", format!("state {key} listed twice")));
        }
        let props = idents(line, value)?;
        if let Some(bad) = props.iter().find(|a| !lattice.elements.contains(a)) {
            return Err(schema("actuality", format!("unknown property {bad}")));
        }
        actual[p] = Some(props);
    }
    let actual = actual
        .into_iter()
        .zip(&names)
        .map(|(a, n)| a.ok_or_else(|| schema("actuality", format!("state {n} not listed"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpsSpec {
        lattice,
        states: names,
        actual,
    })
}

fn parse_dims(line: &Line<'_>, value: &str) -> Result<Vec<usize>, ParseError> {
    value
        .split_whitespace()
        .map(|t| match t.parse::<usize>() {
            Ok(d) if (1..=MAX_MATRIX_ENTRIES).contains(&d) => Ok(d),
            _ => Err(line.err(t, "positive dimension")),
        })
        .collect()
}

fn parse_hilbert(s: &Section<'_>) -> Result<Vec<usize>, ParseError> {
    let mut dims = None;
    for line in &s.body {
        let (key, value) = line.key_value()?;
        if key != "dims" {
            return Err(line.err(key, "dims"));
        }
        dims = Some(parse_dims(line, value)?);
    }
    let dims = dims.ok_or_else(|| schema("hilbert", "missing dims"))?;
    if dims.is_empty() || dims.len() > 2 {
        return Err(schema("hilbert", "dims must list one or two factors"));
    }
    Ok(dims)
}

fn parse_real(s: &str) -> Option<f64> {
    let lower = s.to_ascii_lowercase();
    if lower.contains("inf") || lower.contains("nan") {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// `a`, `bi`, `a+bi` or `a-bi`, whitespace ignored.
pub fn parse_complex(s: &str) -> Option<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(&t).map(|re| C64::new(re, 0.0));
    };
    let imag = |s: &str| match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => parse_real(s),
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some(C64::new(parse_real(&body[..k])?, imag(&body[k..])?)),
        None => Some(C64::new(0.0, imag(body)?)),
    }
}

fn hilbert_reason(e: &HilbertError) -> String {
    match e {
        HilbertError::NotHermitian => "not Hermitian within eps".to_string(),
        HilbertError::TraceNotOne { trace } => format!("trace {trace} is not 1 within eps"),
        HilbertError::NotPositive { min_eigenvalue } => {
            format!("not positive semidefinite (minimum eigenvalue {min_eigenvalue})")
        }
        HilbertError::NotProjection => "not a projection within eps".to_string(),
        HilbertError::NotUnitary => "not unitary within eps".to_string(),
        HilbertError::NormViolation { norm } => format!("not a unit vector (norm {norm})"),
        HilbertError::DimensionMismatch { .. } => "not square".to_string(),
        other => other.to_string(),
    }
}

fn validate_role(role: MatrixRole, m: &CMatrix, tol: &Tolerances) -> Result<(), HilbertError> {
    match role {
        MatrixRole::Operator => Ok(()),
        MatrixRole::Density => DensityOperator::new(m.clone(), tol).map(|_| ()),
        MatrixRole::Projection => Projection::new(m.clone(), tol).map(|_| ()),
        MatrixRole::Unitary => {
            if !m.is_square() {
                Err(HilbertError::DimensionMismatch {
                    expected: m.rows(),
                    found: m.cols(),
                })
            } else if !m.is_unitary(tol.eps) {
                Err(HilbertError::NotUnitary)
            } else {
                Ok(())
            }
        }
        MatrixRole::Vector => {
            if m.rows() != 1 && m.cols() != 1 {
                return Err(HilbertError::InvalidShape {
                    rows: m.rows(),
                    cols: m.cols(),
                    entries: m.data().len(),
                });
            }
            let norm = subentity_core::hilbert::norm(m.data());
            if (norm - 1.0).abs() > tol.eps {
                return Err(HilbertError::NormViolation { norm });
            }
            Ok(())
        }
    }
}

fn parse_shape(line: &Line<'_>, s: &str) -> Result<(usize, usize), ParseError> {
    let bad = || line.err(s, "shape RxC");
    let (r, c) = s.split_once('x').ok_or_else(bad)?;
    let rows: usize = r.parse().map_err(|_| bad())?;
    let cols: usize = c.parse().map_err(|_| bad())?;
    match rows.checked_mul(cols) {
        Some(n) if rows > 0 && cols > 0 && n <= MAX_MATRIX_ENTRIES => Ok((rows, cols)),
        _ => Err(line.err(
            s,
            format!("shape RxC with at most {MAX_MATRIX_ENTRIES} entries"),
        )),
    }
}

fn parse_matrix(s: &Section<'_>, tol: &Tolerances) -> Result<NamedMatrix, ParseError> {
    let name = s.args[0].to_string();
    let (rows, cols) = parse_shape(&s.header, s.args[1])?;
    let mut role = MatrixRole::Operator;
    let mut body = s.body.as_slice();
    if let Some(first) = body.first() {
        if first.text.contains('=') {
            let (key, value) = first.key_value()?;
            if key != "role" {
                return Err(first.err(key, "role"));
            }
            role = MatrixRole::from_name(value).ok_or_else(|| {
                first.err(
                    value,
                    "role (operator, density, projection, unitary, vector)",
                )
            })?;
            body = &body[1..];
        }
    }
    if body.len() != rows {
        return Err(schema(
            s.title(),
            format!("expected {rows} rows, found {}", body.len()),
        ));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for line in body {
        let entries: Vec<&str> = line.text.split(',').collect();
        if entries.len() != cols {
            return Err(line.end_err(format!("{cols} comma-separated entries")));
        }
        for e in entries {
            let z = parse_complex(e)
                .ok_or_else(|| line.err(e.trim_start(), "complex number 'a+bi'"))?;
            data.push(z);
        }
    }
    let matrix =
        CMatrix::new(rows, cols, data).map_err(|e| schema("matrix", hilbert_reason(&e)))?;
    validate_role(role, &matrix, tol)
        .map_err(|e| schema("matrix", format!("{} ({name})", hilbert_reason(&e))))?;
    Ok(NamedMatrix { name, role, matrix })
}

fn parse_matrices(
    sections: &[Section<'_>],
    tol: &Tolerances,
) -> Result<Vec<NamedMatrix>, ParseError> {
    sections
        .iter()
        .filter(|s| s.name == "matrix")
        .map(|s| parse_matrix(s, tol))
        .collect()
}

fn parse_compound(
    s: &Section<'_>,
    include: Option<&Section<'_>>,
    sections: &[Section<'_>],
    tol: &Tolerances,
) -> Result<CompoundSpec, ParseError> {
    let (mut dims, mut whole, mut part_properties, mut part_states) = (None, None, None, None);
    for line in &s.body {
        let (key, value) = line.key_value()?;
        match key {
            "dims" => {
                let d = parse_dims(line, value)?;
                if d.len() != 2 {
                    return Err(schema("compound", "dims must list two factors"));
                }
                dims = Some((d[0], d[1]));
            }
            "whole" => whole = Some(idents(line, value)?),
            "part_properties" => part_properties = Some(idents(line, value)?),
            "part_states" => part_states = Some(idents(line, value)?),
            _ => return Err(line.err(key, "dims, whole, part_properties or part_states")),
        }
    }
    let mut includes = Vec::new();
    for line in include.map(|i| i.body.as_slice()).unwrap_or_default() {
        let (key, value) = line.key_value()?;
        if value.is_empty() {
            return Err(line.end_err("path"));
        }
        includes.push((key.to_string(), value.to_string()));
    }
    let matrices = parse_matrices(sections, tol)?;
    unique(
        "matrix",
        "matrix",
        &matrices.iter().map(|m| m.name.clone()).collect::<Vec<_>>(),
    )?;
    Ok(CompoundSpec {
        dims: dims.ok_or_else(|| schema("compound", "missing dims"))?,
        whole: whole.ok_or_else(|| schema("compound", "missing whole"))?,
        part_properties: part_properties.unwrap_or_default(),
        part_states,
        includes,
        matrices,
    })
}

fn parse_world(devices: &Section<'_>, sections: &[Section<'_>]) -> Result<LabWorld, ParseError> {
    let (mut preparing, mut registering, mut ideal) = (None, None, None);
    for line in &devices.body {
        let (key, value) = line.key_value()?;
        let list = idents(line, value)?;
        match key {
            "preparing" => preparing = Some(list),
            "registering" => registering = Some(list),
            "ideal" => ideal = Some(list),
            _ => return Err(line.err(key, "preparing, registering or ideal")),
        }
    }
    let preparing = preparing.ok_or_else(|| schema("devices", "missing preparing"))?;
    let registering = registering.ok_or_else(|| schema("devices", "missing registering"))?;
    unique("devices", "device", &preparing)?;
    unique("devices", "device", &registering)?;
    let ideal_flags = match ideal {
        None => vec![true; registering.len()],
        Some(list) => {
            if let Some(bad) = list.iter().find(|r| !registering.contains(r)) {
                return Err(schema(
                    "devices",
                    format!("ideal device {bad} is not registering"),
                ));
            }
            registering.iter().map(|r| list.contains(r)).collect()
        }
    };
    let mut world = LabWorld::new(preparing, registering, ideal_flags);
    for s in sections.iter().filter(|s| s.name == "lab") {
        let mut objects = Vec::new();
        for line in &s.body {
            let tokens: Vec<&str> = line.text.split_whitespace().collect();
            if tokens.len() < 2 {
                return Err(line.end_err("object row 'object preparer r=yes ...'"));
            }
            if let Some(bad) = tokens[..2].iter().find(|t| !is_ident(t)) {
                return Err(line.err(bad, "identifier"));
            }
            let preparer =
                match tokens[1] {
                    "-" => None,
                    p => Some(world.preparers.iter().position(|x| x == p).ok_or_else(|| {
                        schema(s.title(), format!("unknown preparing device {p}"))
                    })?),
                };
            let mut outcomes: Vec<Option<bool>> = vec![None; world.registers.len()];
            for t in &tokens[2..] {
                let Some((r, v)) = t.split_once('=') else {
                    return Err(line.err(t, "outcome 'device=yes|no'"));
                };
                let value = match v {
                    "yes" => true,
                    "no" => false,
                    _ => return Err(line.err(&t[r.len() + 1..], "'yes' or 'no'")),
                };
                let i =
                    world.registers.iter().position(|x| x == r).ok_or_else(|| {
                        schema(s.title(), format!("unknown registering device {r}"))
                    })?;
                if outcomes[i].replace(value).is_some() {
                    return Err(schema(
                        s.title(),
                        format!("object {} repeats device {r}", tokens[0]),
                    ));
                }
            }
            let outcomes = outcomes
                .into_iter()
                .zip(&world.registers)
                .map(|(o, r)| {
                    o.ok_or_else(|| {
                        schema(s.title(), format!("object {} lacks device {r}", tokens[0]))
                    })
                })
                .collect::<Result<Vec<bool>, _>>()?;
            objects.push(LabObject {
                name: tokens[0].to_string(),
                preparer,
                outcomes,
            });
        }
        world.labs.push(Lab {
            id: s.args[0].to_string(),
            objects,
        });
    }
    Ok(world)
}
