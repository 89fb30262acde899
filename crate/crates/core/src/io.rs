//! System-file parsing, report rendering, and plot data.
//!
//! System files are JSON:
//!
//! ```json
//! {"rank": 2, "letters": ["a","b"],
//!  "transitions": [{"from":"a","to":"a","class":[1,0]},
//!                  {"from":"a","to":"b","class":[0,1]},
//!                  {"from":"b","to":"a","class":[1,0]}]}
//! ```
//!
//! An optional `"name"` string labels the system in reports.

use num_rational::BigRational;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::arith::{dot_int_rat, fmt_int_vec, fmt_rat, fmt_rat_vec, primitive_rat, IntVec, RatVec};
use crate::cone::{cone_from_inequalities, linalg, Certificate, OverlapVerdict};
use crate::foliation::{ConeFamilyReport, FoliationConeReport, RayClassification};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at `{0}`")]
    SchemaError(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub from: String,
    pub to: String,
    pub class: Vec<i64>,
}

/// A syntactically valid system description, not yet validated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDocument {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub rank: i64,
    pub letters: Vec<String>,
    pub transitions: Vec<TransitionRecord>,
}

impl SystemDocument {
    pub fn new(rank: i64, letters: &[&str], transitions: &[(&str, &str, &[i64])]) -> Self {
        SystemDocument {
            name: None,
            rank,
            letters: letters.iter().map(|s| s.to_string()).collect(),
            transitions: transitions
                .iter()
                .map(|(f, t, c)| TransitionRecord {
                    from: f.to_string(),
                    to: t.to_string(),
                    class: c.to_vec(),
                })
                .collect(),
        }
    }
}

fn schema(path: impl Into<String>) -> FormatError {
    FormatError::SchemaError(path.into())
}

fn as_int(v: &Value, path: &str) -> Result<i64, FormatError> {
    v.as_i64().ok_or_else(|| schema(path))
}

fn as_str<'a>(v: &'a Value, path: &str) -> Result<&'a str, FormatError> {
    v.as_str().ok_or_else(|| schema(path))
}

/// Parses a system file. Syntax errors carry line and column; structural
/// problems name the offending field, e.g. `transitions[1].class`.
pub fn parse_system_file(text: &str) -> Result<SystemDocument, FormatError> {
    let root: Value = serde_json::from_str(text).map_err(|e| FormatError::SyntaxError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = root.as_object().ok_or_else(|| schema("$"))?;

    let name = match obj.get("name") {
        None | Some(Value::Null) => None,
        Some(v) => Some(as_str(v, "name")?.to_string()),
    };
    let rank = as_int(obj.get("rank").ok_or_else(|| schema("rank"))?, "rank")?;

    let letters = obj
        .get("letters")
        .ok_or_else(|| schema("letters"))?
        .as_array()
        .ok_or_else(|| schema("letters"))?
        .iter()
        .enumerate()
        .map(|(i, v)| as_str(v, &format!("letters[{i}]")).map(str::to_string))
        .collect::<Result<Vec<_>, _>>()?;

    let raw_transitions = obj
        .get("transitions")
        .ok_or_else(|| schema("transitions"))?
        .as_array()
        .ok_or_else(|| schema("transitions"))?;
    let mut transitions = Vec::with_capacity(raw_transitions.len());
    for (i, t) in raw_transitions.iter().enumerate() {
        let at = |field: &str| format!("transitions[{i}].{field}");
        let t = t.as_object().ok_or_else(|| schema(format!("transitions[{i}]")))?;
        let from = as_str(t.get("from").ok_or_else(|| schema(at("from")))?, &at("from"))?;
        let to = as_str(t.get("to").ok_or_else(|| schema(at("to")))?, &at("to"))?;
        let class = t
            .get("class")
            .ok_or_else(|| schema(at("class")))?
            .as_array()
            .ok_or_else(|| schema(at("class")))?
            .iter()
            .enumerate()
            .map(|(k, c)| as_int(c, &format!("transitions[{i}].class[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if rank >= 1 && class.len() as i64 != rank {
            return Err(schema(at("class")));
        }
        transitions.push(TransitionRecord {
            from: from.to_string(),
            to: to.to_string(),
            class,
        });
    }

    Ok(SystemDocument {
        name,
        rank,
        letters,
        transitions,
    })
}

/// Pretty JSON with stable field order.
pub fn render_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Parses a machine-readable report produced by [`render_json`].
pub fn parse_report<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError::SyntaxError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn vec_list(v: &[IntVec]) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_int_vec(x)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn render_cone_text(r: &FoliationConeReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("system: {}\n", r.system));
    out.push_str(&format!("rank: {}\n", r.rank()));
    out.push_str(&format!("minimal loops: {}\n", r.loops.len()));
    for (i, l) in r.loops.iter().enumerate() {
        out.push_str(&format!("  [{i}] {} : {}\n", r.word_names(&l.word), l.class));
    }
    let h = &r.homology_cone;
    out.push_str(&format!("homology cone generators: {}\n", vec_list(&h.generators)));
    let f = &r.foliation_cone;
    out.push_str(&format!("foliation cone generators: {}\n", vec_list(&f.generators)));
    out.push_str(&format!("foliation cone lineality: {}\n", vec_list(&f.lineality)));
    out.push_str(&format!("facets: {}\n", r.facets.len()));
    for (i, facet) in r.facets.iter().enumerate() {
        let loops: Vec<String> = facet
            .loops
            .iter()
            .map(|&k| r.word_names(&r.loops[k].word))
            .collect();
        out.push_str(&format!(
            "  [{i}] {} >= 0  from {}\n",
            fmt_int_vec(&facet.normal),
            loops.join(" ")
        ));
    }
    out.push_str(&format!("salience witness: {}\n", fmt_rat_vec(&r.salience_witness)));
    out
}

pub fn render_classification_text(c: &RayClassification) -> String {
    let name = format!("{:?}", c.verdict);
    let pairings: Vec<String> = c.pairings.iter().map(ToString::to_string).collect();
    let mut out = format!(
        "input: {}\nprimitive: {}\nverdict: {name}\npairings: [{}]\n",
        fmt_rat_vec(&c.input),
        fmt_int_vec(&c.primitive),
        pairings.join(", ")
    );
    if let Certificate::SeparatingFunctional { normal } = &c.certificate {
        out.push_str(&format!("separating functional: {}\n", fmt_int_vec(normal)));
    }
    out
}

pub fn render_family_text(f: &ConeFamilyReport) -> String {
    let mut out = format!("systems: {}\n", f.reports.len());
    for (i, r) in f.reports.iter().enumerate() {
        out.push_str(&format!("  [{i}] {} facets {}\n", r.system, vec_list(&r.foliation_cone.facets)));
    }
    for (i, row) in f.overlaps.iter().enumerate() {
        let cells: Vec<&str> = row
            .iter()
            .map(|v| match v {
                OverlapVerdict::SharedInterior { .. } => "shared",
                OverlapVerdict::DisjointInteriors { .. } => "disjoint",
            })
            .collect();
        out.push_str(&format!("  row {i}: {}\n", cells.join(" ")));
    }
    out.push_str(&format!("coincident: {:?}\nviolations: {:?}\n", f.coincident, f.violations));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SliceError {
    #[error("plane vectors must be two linearly independent vectors of rank {0}")]
    DegeneratePlane(usize),
}

/// Intersection of a cone with a 2-plane, in plane coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceTable {
    /// The cone meets the plane only at the origin.
    Empty,
    /// The plane lies inside the cone.
    All,
    /// Boundary ray directions `(s, t)` of the planar section, sorted.
    Rays(Vec<RatVec>),
}

impl SliceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t\n");
        match self {
            SliceTable::Empty => {}
            SliceTable::All => out.push_str("ALL,ALL\n"),
            SliceTable::Rays(rays) => {
                for r in rays {
                    out.push_str(&format!("{},{}\n", fmt_rat(&r[0]), fmt_rat(&r[1])));
                }
            }
        }
        out
    }
}

/// Section of the foliation cone by the plane `{s u + t v}`.
pub fn slice_plot_data(
    report: &FoliationConeReport,
    u: &[BigRational],
    v: &[BigRational],
) -> Result<SliceTable, SliceError> {
    let cone = &report.foliation_cone;
    let d = cone.rank;
    if u.len() != d || v.len() != d {
        return Err(SliceError::DegeneratePlane(d));
    }
    let pu = primitive_rat(u);
    let pv = primitive_rat(v);
    if linalg::rank(&[pu, pv], d) < 2 {
        return Err(SliceError::DegeneratePlane(d));
    }
    let normals: Vec<IntVec> = cone
        .inequality_normals()
        .iter()
        .map(|f| primitive_rat(&[dot_int_rat(f, u), dot_int_rat(f, v)]))
        .filter(|n| !n.iter().all(Zero::is_zero))
        .collect();
    let section = cone_from_inequalities(&normals, 2).expect("plane normals have rank 2");
    if section.is_whole_space() {
        return Ok(SliceTable::All);
    }
    if section.is_zero() {
        return Ok(SliceTable::Empty);
    }
    let to_rat = |x: &IntVec| -> RatVec { crate::arith::to_rat(x) };
    let mut rays: Vec<RatVec> = if section.lineality.is_empty() {
        section.generators.iter().map(to_rat).collect()
    } else {
        section
            .lineality
            .iter()
            .flat_map(|l| [to_rat(l), to_rat(&crate::arith::neg_vec(l))])
            .collect()
    };
    rays.sort();
    Ok(SliceTable::Rays(rays))
}

/// Parses `"v1;v2"` with comma-separated rational coordinates.
pub fn parse_plane(s: &str) -> Option<(RatVec, RatVec)> {
    let (a, b) = s.split_once(';')?;
    Some((crate::arith::parse_rat_list(a)?, crate::arith::parse_rat_list(b)?))
}
