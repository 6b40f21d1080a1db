//! JSON and CSV file formats.
//!
//! JSON is written canonically: object keys sorted, floats with 17
//! significant digits, so a reloaded file reproduces the in-memory value
//! bit for bit. Complex scalars are `[re, im]` pairs. Group and graph
//! references are either inline objects or paths relative to the file that
//! mentions them.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::action::{ElementAction, GraphAction};
use crate::error::{Error, Result};
use crate::graph::{standard_condition, ConditionKind, Edge, QuantumGraph, VertexRecord};
use crate::group::{FiniteGroup, SubgroupRef};
use crate::linalg::{c, CMatrix};
use crate::quotient::QuotientResult;
use crate::rep::Representation;
use crate::spectral::{Spectrum, SpectrumEntry};

/// How a file refers to a group or graph.
#[derive(Clone, Debug)]
pub enum Ref {
    Inline,
    /// Path written verbatim into the referencing file.
    Path(String),
}

struct CanonicalFormatter {
    pretty: serde_json::ser::PrettyFormatter<'static>,
}

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{}", format_float(value))
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.pretty.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.pretty.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.pretty.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.pretty.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.pretty.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.pretty.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.pretty.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.pretty.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.pretty.end_object_value(w)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Canonical text of a JSON value.
pub fn to_canonical_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let fmt = CanonicalFormatter { pretty: serde_json::ser::PrettyFormatter::with_indent(b"  ") };
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, fmt);
    serde::Serialize::serialize(value, &mut ser).expect("serializing a JSON value cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON output is UTF-8")
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

fn fmt_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Format { path: path.display().to_string(), message: message.into() }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn write_json(path: &Path, value: &Value) -> Result<()> {
    write_text(path, &to_canonical_string(value))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| fmt_err(path, e.to_string()))
}

// ---- field helpers -------------------------------------------------------

fn field<'a>(obj: &'a Value, name: &str, path: &Path) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| fmt_err(path, format!("missing field \"{name}\"")))
}

fn as_usize(v: &Value, what: &str, path: &Path) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| fmt_err(path, format!("{what} must be a non-negative integer")))
}

fn as_f64(v: &Value, what: &str, path: &Path) -> Result<f64> {
    v.as_f64().ok_or_else(|| fmt_err(path, format!("{what} must be a number")))
}

fn as_array<'a>(v: &'a Value, what: &str, path: &Path) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| fmt_err(path, format!("{what} must be an array")))
}

fn as_object<'a>(v: &'a Value, what: &str, path: &Path) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| fmt_err(path, format!("{what} must be an object")))
}

fn parse_index(key: &str, what: &str, path: &Path) -> Result<usize> {
    key.parse().map_err(|_| fmt_err(path, format!("{what} key \"{key}\" is not an index")))
}

pub fn matrix_to_value(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

/// Reads a complex matrix; `cols` fixes the width of matrices without rows.
pub fn matrix_from_value(v: &Value, cols: usize, path: &Path) -> Result<CMatrix> {
    let rows = as_array(v, "matrix", path)?;
    let mut m = CMatrix::zeros(rows.len(), cols);
    for (i, row) in rows.iter().enumerate() {
        let row = as_array(row, "matrix row", path)?;
        if row.len() != cols {
            return Err(fmt_err(path, format!("matrix row {i} has {} entries, expected {cols}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            let pair = as_array(z, "complex entry", path)?;
            if pair.len() != 2 {
                return Err(fmt_err(path, "complex entries are [re, im] pairs"));
            }
            m[(i, j)] = c(as_f64(&pair[0], "real part", path)?, as_f64(&pair[1], "imaginary part", path)?);
        }
    }
    Ok(m)
}

/// Resolves an inline-or-path reference, returning the object and the path
/// its own references are relative to.
fn resolve(v: &Value, base: &Path) -> Result<(Value, PathBuf)> {
    match v {
        Value::String(rel) => {
            let p = base.parent().unwrap_or(Path::new("")).join(rel);
            Ok((read_json(&p)?, p))
        }
        Value::Object(_) => Ok((v.clone(), base.to_path_buf())),
        _ => Err(fmt_err(base, "reference must be a path string or an inline object")),
    }
}

fn ref_value(r: &Ref, inline: impl FnOnce() -> Value) -> Value {
    match r {
        Ref::Inline => inline(),
        Ref::Path(p) => Value::String(p.clone()),
    }
}

// ---- groups ------------------------------------------------------------

pub fn group_to_value(g: &FiniteGroup) -> Value {
    json!({
        "order": g.order(),
        "identity": g.identity(),
        "names": g.names(),
        "table": g.table(),
    })
}

pub fn group_from_value(v: &Value, path: &Path) -> Result<FiniteGroup> {
    let order = as_usize(field(v, "order", path)?, "order", path)?;
    let identity = as_usize(field(v, "identity", path)?, "identity", path)?;
    let names: Vec<String> = as_array(field(v, "names", path)?, "names", path)?
        .iter()
        .map(|n| n.as_str().map(str::to_string).ok_or_else(|| fmt_err(path, "names must be strings")))
        .collect::<Result<_>>()?;
    let table: Vec<Vec<usize>> = as_array(field(v, "table", path)?, "table", path)?
        .iter()
        .map(|row| as_array(row, "table row", path)?.iter().map(|x| as_usize(x, "table entry", path)).collect())
        .collect::<Result<_>>()?;
    if table.len() != order {
        return Err(fmt_err(path, format!("table has {} rows for order {order}", table.len())));
    }
    FiniteGroup::new(table, identity, names)
}

pub fn load_group(path: &Path) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(group_from_value(&read_json(path)?, path)?))
}

fn load_group_ref(v: &Value, base: &Path) -> Result<Arc<FiniteGroup>> {
    let (obj, p) = resolve(v, base)?;
    Ok(Arc::new(group_from_value(&obj, &p)?))
}

// ---- representations ---------------------------------------------------

pub fn rep_to_value(rep: &Representation, group: &Ref) -> Value {
    let matrices: Map<String, Value> = rep
        .domain()
        .elements()
        .iter()
        .zip(rep.matrices())
        .map(|(g, m)| (g.to_string(), matrix_to_value(m)))
        .collect();
    json!({
        "group": ref_value(group, || group_to_value(rep.group())),
        "dim": rep.dim(),
        "matrices": matrices,
    })
}

/// The listed elements must form a subgroup; it becomes the domain.
pub fn rep_from_value(v: &Value, path: &Path) -> Result<Representation> {
    let group = load_group_ref(field(v, "group", path)?, path)?;
    let dim = as_usize(field(v, "dim", path)?, "dim", path)?;
    let mats = as_object(field(v, "matrices", path)?, "matrices", path)?;
    let mut by_element = BTreeMap::new();
    for (k, m) in mats {
        let g = parse_index(k, "matrices", path)?;
        group.check_element(g)?;
        by_element.insert(g, matrix_from_value(m, dim, path)?);
    }
    let domain = SubgroupRef::new(group, by_element.keys().copied())?;
    Representation::new(domain, dim, by_element.into_values().collect())
}

pub fn load_rep(path: &Path) -> Result<Representation> {
    rep_from_value(&read_json(path)?, path)
}

pub fn write_rep(path: &Path, rep: &Representation, group: &Ref) -> Result<()> {
    write_json(path, &rep_to_value(rep, group))
}

// ---- graphs ------------------------------------------------------------

pub fn graph_to_value(g: &QuantumGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .map(|v| json!({"id": v.id, "edge_order": v.edge_order, "A": matrix_to_value(&v.a), "B": matrix_to_value(&v.b)}))
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|e| json!({"id": e.id, "source": e.source, "target": e.target, "length": e.length}))
        .collect();
    json!({"vertices": vertices, "edges": edges})
}

pub fn graph_from_value(v: &Value, path: &Path) -> Result<QuantumGraph> {
    let mut edges = Vec::new();
    for e in as_array(field(v, "edges", path)?, "edges", path)? {
        edges.push(Edge {
            id: as_usize(field(e, "id", path)?, "edge id", path)?,
            source: as_usize(field(e, "source", path)?, "edge source", path)?,
            target: as_usize(field(e, "target", path)?, "edge target", path)?,
            length: as_f64(field(e, "length", path)?, "edge length", path)?,
        });
    }
    edges.sort_by_key(|e| e.id);
    let mut vertices = Vec::new();
    for item in as_array(field(v, "vertices", path)?, "vertices", path)? {
        let id = as_usize(field(item, "id", path)?, "vertex id", path)?;
        let edge_order: Vec<usize> = match item.get("edge_order") {
            Some(list) => as_array(list, "edge_order", path)?.iter().map(|x| as_usize(x, "edge id", path)).collect::<Result<_>>()?,
            None => edges.iter().filter(|e| e.source == id || e.target == id).map(|e| e.id).collect(),
        };
        let d = edge_order.len();
        let (a, b) = match item.get("condition") {
            Some(Value::String(kind)) => {
                let kind = match kind.as_str() {
                    "neumann" => ConditionKind::Neumann,
                    "dirichlet" => ConditionKind::Dirichlet,
                    other => return Err(fmt_err(path, format!("unknown condition \"{other}\""))),
                };
                standard_condition(kind, d)
            }
            Some(_) => return Err(fmt_err(path, "condition must be \"neumann\" or \"dirichlet\"")),
            None => (
                matrix_from_value(field(item, "A", path)?, d, path)?,
                matrix_from_value(field(item, "B", path)?, d, path)?,
            ),
        };
        vertices.push(VertexRecord { id, edge_order, a, b });
    }
    vertices.sort_by_key(|v| v.id);
    QuantumGraph::new(vertices, edges)
}

pub fn load_graph(path: &Path) -> Result<QuantumGraph> {
    graph_from_value(&read_json(path)?, path)
}

pub fn write_graph(path: &Path, g: &QuantumGraph) -> Result<()> {
    write_json(path, &graph_to_value(g))
}

// ---- actions -----------------------------------------------------------

pub fn action_to_value(action: &GraphAction, group: &Ref, graph: &Ref) -> Value {
    let elements: Map<String, Value> = action
        .group()
        .elements()
        .iter()
        .zip(action.maps())
        .map(|(g, m)| {
            let vertices: Map<String, Value> =
                m.vertex_map.iter().enumerate().map(|(v, w)| (v.to_string(), Value::String(w.to_string()))).collect();
            let edges: Map<String, Value> = m
                .edge_map
                .iter()
                .zip(&m.edge_flip)
                .enumerate()
                .map(|(e, (to, flip))| (e.to_string(), json!({"to": to.to_string(), "flip": flip})))
                .collect();
            (g.to_string(), json!({"vertices": vertices, "edges": edges}))
        })
        .collect();
    json!({
        "group": ref_value(group, || group_to_value(action.group().parent())),
        "graph": ref_value(graph, || graph_to_value(action.graph())),
        "elements": elements,
    })
}

fn id_value(v: &Value, what: &str, path: &Path) -> Result<usize> {
    match v {
        Value::String(s) => parse_index(s, what, path),
        other => as_usize(other, what, path),
    }
}

/// The listed elements must form a subgroup; it becomes the acting group.
pub fn action_from_value(v: &Value, path: &Path) -> Result<GraphAction> {
    let group = load_group_ref(field(v, "group", path)?, path)?;
    let (graph_obj, graph_path) = resolve(field(v, "graph", path)?, path)?;
    let graph = graph_from_value(&graph_obj, &graph_path)?;
    let (nv, ne) = (graph.vertices().len(), graph.edges().len());
    let mut maps = BTreeMap::new();
    for (k, spec) in as_object(field(v, "elements", path)?, "elements", path)? {
        let g = parse_index(k, "elements", path)?;
        group.check_element(g)?;
        let mut m = ElementAction::identity(nv, ne);
        for (from, to) in as_object(field(spec, "vertices", path)?, "vertex map", path)? {
            let from = parse_index(from, "vertex map", path)?;
            if from >= nv {
                return Err(fmt_err(path, format!("element {g} maps unknown vertex {from}")));
            }
            m.vertex_map[from] = id_value(to, "vertex image", path)?;
        }
        for (from, img) in as_object(field(spec, "edges", path)?, "edge map", path)? {
            let from = parse_index(from, "edge map", path)?;
            if from >= ne {
                return Err(fmt_err(path, format!("element {g} maps unknown edge {from}")));
            }
            m.edge_map[from] = id_value(field(img, "to", path)?, "edge image", path)?;
            m.edge_flip[from] = img.get("flip").and_then(Value::as_bool).unwrap_or(false);
        }
        maps.insert(g, m);
    }
    let acting = SubgroupRef::new(group, maps.keys().copied())?;
    GraphAction::new(acting, graph, maps.into_values().collect())
}

pub fn load_action(path: &Path) -> Result<GraphAction> {
    action_from_value(&read_json(path)?, path)
}

// ---- spectra and quotients ---------------------------------------------

/// CSV with header `k,lambda,multiplicity`; a zero mode is the row `k = 0`.
pub fn spectrum_to_csv(s: &Spectrum) -> String {
    let mut out = String::from("k,lambda,multiplicity\n");
    if s.zero_mode > 0 {
        out.push_str(&format!("{},{},{}\n", format_float(0.0), format_float(0.0), s.zero_mode));
    }
    for e in &s.entries {
        out.push_str(&format!("{},{},{}\n", format_float(e.k), format_float(e.k * e.k), e.multiplicity));
    }
    out
}

/// Reads back `(zero-mode multiplicity, entries)` from [`spectrum_to_csv`].
pub fn spectrum_from_csv(text: &str, path: &Path) -> Result<(usize, Vec<SpectrumEntry>)> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("k,lambda,multiplicity") {
        return Err(fmt_err(path, "missing header k,lambda,multiplicity"));
    }
    let mut zero = 0;
    let mut entries = Vec::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(fmt_err(path, format!("bad row \"{line}\"")));
        }
        let k: f64 = cols[0].trim().parse().map_err(|_| fmt_err(path, format!("bad k in \"{line}\"")))?;
        let m: usize = cols[2].trim().parse().map_err(|_| fmt_err(path, format!("bad multiplicity in \"{line}\"")))?;
        if k == 0.0 {
            zero = m;
        } else {
            entries.push(SpectrumEntry { k, multiplicity: m });
        }
    }
    Ok((zero, entries))
}

/// Settings, diagnostics and near misses of a spectrum run.
pub fn spectrum_sidecar(s: &Spectrum, graph_file: Option<&str>) -> Value {
    json!({
        "graph": graph_file,
        "k_max": s.k_max,
        "settings": serde_json::to_value(&s.settings).expect("plain data"),
        "zero_mode": s.zero_mode,
        "count": s.count(),
        "near_misses": s.near_misses.iter().map(|(k, r)| json!({"k": k, "ratio": r})).collect::<Vec<_>>(),
        "diagnostics": serde_json::to_value(&s.diagnostics).expect("plain data"),
    })
}

pub fn provenance_to_value(q: &QuotientResult, names: &[String]) -> Value {
    let edges: Vec<Value> = q
        .edges
        .iter()
        .enumerate()
        .map(|(id, e)| json!({"id": id, "orbit": e.orbit, "copy": e.copy, "representative": e.representative, "length": e.length}))
        .collect();
    let vertices: Vec<Value> = q
        .vertices
        .iter()
        .map(|v| {
            json!({
                "id": v.orbit,
                "orbit": v.orbit,
                "representative": v.representative,
                "incident_orbits": v.incident_orbits,
                "witnesses": v.witnesses,
                "witness_names": v.witnesses.iter().map(|&g| names.get(g).cloned().unwrap_or_default()).collect::<Vec<_>>(),
                "A_unreduced": matrix_to_value(&v.a_unreduced),
                "B_unreduced": matrix_to_value(&v.b_unreduced),
                "generalized": v.generalized,
            })
        })
        .collect();
    json!({"edges": edges, "vertices": vertices, "processed_graph": graph_to_value(&q.processed)})
}
