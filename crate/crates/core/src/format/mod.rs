//! Reading and writing the JSON documents: crossed modules, discretizations,
//! connections, connection morphisms, gauge elements, change scripts, and
//! scenarios bundling several of them.
//!
//! Parsing reports every problem it can find as a [`Diagnostic`] with a byte
//! offset, line and column. Serialization is canonical: sorted keys, declared
//! element order, two-space indentation and a trailing newline.

pub mod json;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde_json::{json, Map, Value as Json};

use crate::complex::{Direction, DiscretizationDef, EdgeDef, FaceDef, WordDef};
use crate::conn::{ConnMorphism, ConnObject};
use crate::crossed_module::{CrossedModule, CrossedModuleDef};
use crate::error::{Error, Result};
use crate::gauge::{GaugeMorphism, GaugeObject};
use crate::group::{valid_element_id, GroupDef};
use crate::rediscretize::ChangeSpec;
use crate::Discretization;
use json::{LineIndex, Member, Node, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DocumentKind {
    CrossedModule,
    Discretization,
    Connection,
    Morphism,
    Gauge,
    ChangeScript,
    Scenario,
}

impl DocumentKind {
    pub const ALL: [DocumentKind; 7] = [
        Self::CrossedModule,
        Self::Discretization,
        Self::Connection,
        Self::Morphism,
        Self::Gauge,
        Self::ChangeScript,
        Self::Scenario,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::CrossedModule => "crossed-module",
            Self::Discretization => "discretization",
            Self::Connection => "connection",
            Self::Morphism => "morphism",
            Self::Gauge => "gauge",
            Self::ChangeScript => "change-script",
            Self::Scenario => "scenario",
        }
    }

    /// Value of the `"schema"` field.
    pub fn schema(self) -> String {
        format!("hgauge-{}/1", self.name())
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A connection `(g, h)` by cell id and element id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConnectionDef {
    pub g: BTreeMap<String, String>,
    pub h: BTreeMap<String, String>,
}

/// A connection morphism: its source connection and `η` by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MorphismDef {
    pub source: ConnectionDef,
    pub eta: BTreeMap<String, String>,
}

/// A gauge object `γ`, or a gauge morphism `(γ, χ)` when `chi` is present.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaugeDef {
    pub gamma: BTreeMap<String, String>,
    pub chi: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScenarioDef {
    pub crossed_module: CrossedModuleDef,
    pub discretization: DiscretizationDef,
    pub connection: Option<ConnectionDef>,
    pub morphism: Option<MorphismDef>,
    pub gauge: Option<GaugeDef>,
    pub script: Option<Vec<ChangeSpec>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    CrossedModule(CrossedModuleDef),
    Discretization(DiscretizationDef),
    Connection(ConnectionDef),
    Morphism(MorphismDef),
    Gauge(GaugeDef),
    ChangeScript(Vec<ChangeSpec>),
    Scenario(Box<ScenarioDef>),
}

impl Document {
    pub fn kind(&self) -> DocumentKind {
        match self {
            Document::CrossedModule(_) => DocumentKind::CrossedModule,
            Document::Discretization(_) => DocumentKind::Discretization,
            Document::Connection(_) => DocumentKind::Connection,
            Document::Morphism(_) => DocumentKind::Morphism,
            Document::Gauge(_) => DocumentKind::Gauge,
            Document::ChangeScript(_) => DocumentKind::ChangeScript,
            Document::Scenario(_) => DocumentKind::Scenario,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.code, self.message)
    }
}

/// Already-loaded documents that references are resolved against.
#[derive(Debug, Clone, Copy, Default)]
pub struct Context<'a> {
    pub crossed_module: Option<&'a CrossedModuleDef>,
    pub discretization: Option<&'a DiscretizationDef>,
}

/// Parses a document of the expected kind, checking structure and every
/// reference that can be resolved without context.
pub fn parse(bytes: &[u8], kind: DocumentKind) -> Result<Document, Vec<Diagnostic>> {
    parse_with(bytes, kind, &Context::default())
}

/// As [`parse`], additionally resolving cell and element ids against `ctx`.
pub fn parse_with(bytes: &[u8], kind: DocumentKind, ctx: &Context) -> Result<Document, Vec<Diagnostic>> {
    let text = match std::str::from_utf8(bytes) {
        Ok(t) => t,
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap();
            let (line, column) = LineIndex::new(valid).position(valid.len());
            return Err(vec![Diagnostic {
                offset: e.valid_up_to(),
                line,
                column,
                code: "encoding",
                message: "input is not valid UTF-8".into(),
            }]);
        }
    };
    let lines = LineIndex::new(text);
    let root = match json::parse(text) {
        Ok(root) => root,
        Err(e) => {
            let (line, column) = lines.position(e.offset);
            return Err(vec![Diagnostic {
                offset: e.offset,
                line,
                column,
                code: "syntax",
                message: e.message,
            }]);
        }
    };
    let mut dec = Decoder {
        lines: &lines,
        diags: Vec::new(),
    };
    let doc = dec.document(&root, kind, ctx);
    if dec.diags.is_empty() {
        Ok(doc.expect("decoder yields a document when it reports nothing"))
    } else {
        let mut diags = dec.diags;
        diags.sort();
        diags.dedup();
        Err(diags)
    }
}

/// Convenience wrapper for text input.
pub fn parse_str(text: &str, kind: DocumentKind) -> Result<Document, Vec<Diagnostic>> {
    parse(text.as_bytes(), kind)
}

struct Decoder<'a> {
    lines: &'a LineIndex<'a>,
    diags: Vec<Diagnostic>,
}

type Fields<'n> = HashMap<&'n str, &'n Node>;

/// Ids declared by a crossed module, for reference checks.
struct ModuleNames {
    g: BTreeSet<String>,
    h: BTreeSet<String>,
}

impl ModuleNames {
    fn of(def: &CrossedModuleDef) -> Self {
        Self {
            g: def.g.elements.iter().cloned().collect(),
            h: def.h.elements.iter().cloned().collect(),
        }
    }
}

struct CellNames {
    vertices: Vec<String>,
    edges: Vec<String>,
    faces: Vec<String>,
}

impl CellNames {
    fn of(def: &DiscretizationDef) -> Self {
        Self {
            vertices: def.vertices.clone(),
            edges: def.edges.iter().map(|e| e.id.clone()).collect(),
            faces: def.faces.iter().map(|f| f.id.clone()).collect(),
        }
    }
}

impl<'a> Decoder<'a> {
    fn report(&mut self, offset: usize, code: &'static str, message: impl Into<String>) {
        let (line, column) = self.lines.position(offset);
        self.diags.push(Diagnostic {
            offset,
            line,
            column,
            code,
            message: message.into(),
        });
    }

    fn type_error(&mut self, node: &Node, what: &str, expected: &str) {
        self.report(
            node.start,
            "type",
            format!("{what} must be {expected}, found {}", node.value.type_name()),
        );
    }

    /// Checks an object's keys. Duplicate and unknown keys are reported at the
    /// key; missing required keys at the object.
    fn object<'n>(&mut self, node: &'n Node, what: &str, required: &[&str], optional: &[&str]) -> Option<Fields<'n>> {
        let Value::Object(members) = &node.value else {
            self.type_error(node, what, "an object");
            return None;
        };
        let mut fields = HashMap::new();
        for Member { key, key_start, value } in members {
            if fields.contains_key(key.as_str()) {
                self.report(*key_start, "duplicate-key", format!("key {key:?} repeated in {what}"));
            } else if required.contains(&key.as_str()) || optional.contains(&key.as_str()) {
                fields.insert(key.as_str(), value);
            } else {
                self.report(*key_start, "unknown-key", format!("unknown key {key:?} in {what}"));
            }
        }
        for key in required {
            if !fields.contains_key(key) {
                self.report(node.start, "missing-key", format!("{what} lacks required key {key:?}"));
            }
        }
        Some(fields)
    }

    fn string<'n>(&mut self, node: &'n Node, what: &str) -> Option<&'n str> {
        match &node.value {
            Value::String(s) => Some(s),
            _ => {
                self.type_error(node, what, "a string");
                None
            }
        }
    }

    fn array<'n>(&mut self, node: &'n Node, what: &str) -> Option<&'n [Node]> {
        match &node.value {
            Value::Array(items) => Some(items),
            _ => {
                self.type_error(node, what, "an array");
                None
            }
        }
    }

    fn schema(&mut self, fields: &Fields, kind: DocumentKind) {
        if let Some(node) = fields.get("schema") {
            if let Some(s) = self.string(node, "schema") {
                if s != kind.schema() {
                    self.report(
                        node.start,
                        "schema-mismatch",
                        format!("expected schema {:?}, found {s:?}", kind.schema()),
                    );
                }
            }
        }
    }

    /// A list of unique ids.
    fn id_list(&mut self, node: &Node, what: &str, valid: fn(&str) -> bool) -> Option<Vec<String>> {
        let items = self.array(node, what)?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for item in items {
            let Some(id) = self.string(item, &format!("entry of {what}")) else { continue };
            if !valid(id) {
                self.report(item.start, "invalid-id", format!("{id:?} is not a valid id in {what}"));
            } else if !seen.insert(id) {
                self.report(item.start, "duplicate-id", format!("{id:?} declared twice in {what}"));
            } else {
                out.push(id.to_string());
            }
        }
        Some(out)
    }

    /// A string-to-string map, reporting each non-string value.
    fn string_map<'n>(&mut self, node: &'n Node, what: &str) -> Option<Vec<(&'n Member, &'n str)>> {
        let Value::Object(members) = &node.value else {
            self.type_error(node, what, "an object");
            return None;
        };
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for m in members {
            if !seen.insert(m.key.as_str()) {
                self.report(m.key_start, "duplicate-key", format!("key {:?} repeated in {what}", m.key));
                continue;
            }
            if let Some(v) = self.string(&m.value, &format!("value of {:?} in {what}", m.key)) {
                out.push((m, v));
            }
        }
        Some(out)
    }

    fn reference(&mut self, offset: usize, id: &str, declared: &BTreeSet<String>, what: &str) -> bool {
        if declared.contains(id) {
            true
        } else {
            self.report(offset, "dangling-reference", format!("{what} {id:?} is not declared"));
            false
        }
    }

    fn document(&mut self, node: &Node, kind: DocumentKind, ctx: &Context) -> Option<Document> {
        if kind == DocumentKind::ChangeScript && matches!(node.value, Value::Array(_)) {
            return self.changes(node, ctx.discretization).map(Document::ChangeScript);
        }
        let schema: &[&str] = &["schema"];
        match kind {
            DocumentKind::CrossedModule => {
                let f = self.object(node, "crossed module", &["G", "H", "action", "boundary"], schema)?;
                self.schema(&f, kind);
                self.crossed_module(&f).map(Document::CrossedModule)
            }
            DocumentKind::Discretization => {
                let f = self.object(node, "discretization", &["vertices", "edges", "faces"], schema)?;
                self.schema(&f, kind);
                self.discretization(&f).map(Document::Discretization)
            }
            DocumentKind::Connection => {
                let f = self.object(node, "connection", &["g", "h"], schema)?;
                self.schema(&f, kind);
                self.connection(&f, ctx).map(Document::Connection)
            }
            DocumentKind::Morphism => {
                let f = self.object(node, "morphism", &["g", "h", "eta"], schema)?;
                self.schema(&f, kind);
                let source = self.connection(&f, ctx);
                let eta = f.get("eta").and_then(|n| self.labelling(n, "eta", ctx, Cells::Edges, Group::H));
                Some(Document::Morphism(MorphismDef { source: source?, eta: eta? }))
            }
            DocumentKind::Gauge => {
                let f = self.object(node, "gauge element", &["gamma"], &["schema", "chi"])?;
                self.schema(&f, kind);
                let gamma = f.get("gamma").and_then(|n| self.labelling(n, "gamma", ctx, Cells::Vertices, Group::G));
                let chi = match f.get("chi") {
                    Some(n) => Some(self.labelling(n, "chi", ctx, Cells::Vertices, Group::H)?),
                    None => None,
                };
                Some(Document::Gauge(GaugeDef { gamma: gamma?, chi }))
            }
            DocumentKind::ChangeScript => {
                let f = self.object(node, "change script", &["changes"], schema)?;
                self.schema(&f, kind);
                self.changes(f["changes"], ctx.discretization).map(Document::ChangeScript)
            }
            DocumentKind::Scenario => {
                let f = self.object(
                    node,
                    "scenario",
                    &["crossed_module", "discretization"],
                    &["schema", "connection", "morphism", "gauge", "script"],
                )?;
                self.schema(&f, kind);
                self.scenario(&f).map(|s| Document::Scenario(Box::new(s)))
            }
        }
    }

    fn part(&mut self, node: &Node, kind: DocumentKind, ctx: &Context) -> Option<Document> {
        self.document(node, kind, ctx)
    }

    fn scenario(&mut self, f: &Fields) -> Option<ScenarioDef> {
        let cm = match self.part(f.get("crossed_module")?, DocumentKind::CrossedModule, &Context::default()) {
            Some(Document::CrossedModule(cm)) => Some(cm),
            _ => None,
        };
        let disc = match self.part(f.get("discretization")?, DocumentKind::Discretization, &Context::default()) {
            Some(Document::Discretization(d)) => Some(d),
            _ => None,
        };
        let ctx = Context {
            crossed_module: cm.as_ref(),
            discretization: disc.as_ref(),
        };
        let connection = f.get("connection").map(|n| match self.part(n, DocumentKind::Connection, &ctx) {
            Some(Document::Connection(c)) => Some(c),
            _ => None,
        });
        let morphism = f.get("morphism").map(|n| match self.part(n, DocumentKind::Morphism, &ctx) {
            Some(Document::Morphism(m)) => Some(m),
            _ => None,
        });
        let gauge = f.get("gauge").map(|n| match self.part(n, DocumentKind::Gauge, &ctx) {
            Some(Document::Gauge(g)) => Some(g),
            _ => None,
        });
        let script = f.get("script").map(|n| match self.part(n, DocumentKind::ChangeScript, &ctx) {
            Some(Document::ChangeScript(s)) => Some(s),
            _ => None,
        });
        Some(ScenarioDef {
            crossed_module: cm?,
            discretization: disc?,
            connection: connection.map(|c| c.ok_or(())).transpose().ok()?,
            morphism: morphism.map(|c| c.ok_or(())).transpose().ok()?,
            gauge: gauge.map(|c| c.ok_or(())).transpose().ok()?,
            script: script.map(|c| c.ok_or(())).transpose().ok()?,
        })
    }

    /// A group table, with the element ids it declares even when the rest
    /// of it is broken.
    fn group(&mut self, node: &Node, label: &str) -> (Option<GroupDef>, BTreeSet<String>) {
        let what = format!("group {label}");
        let Some(f) = self.object(node, &what, &["elements", "mul", "identity"], &[]) else {
            return (None, BTreeSet::new());
        };
        let elements = f.get("elements").and_then(|n| self.id_list(n, &format!("{label}.elements"), valid_element_id));
        let declared: BTreeSet<String> = elements.iter().flatten().cloned().collect();
        let identity = f.get("identity").and_then(|n| {
            let id = self.string(n, &format!("{label}.identity"))?;
            self.reference(n.start, id, &declared, &format!("{label} element")).then(|| id.to_string())
        });
        let mul = f.get("mul").and_then(|n| {
            let table = self.pair_table(n, &format!("{label}.mul"), (&declared, label), (&declared, label), (&declared, label))?;
            if elements.is_some() {
                self.totality(n, &format!("{label}.mul"), &table, &declared, &declared);
            }
            Some(table)
        });
        let def = match (elements, mul, identity) {
            (Some(elements), Some(mul), Some(identity)) => Some(GroupDef { elements, mul, identity }),
            _ => None,
        };
        (def, declared)
    }

    /// Reports table entries that are missing from a total `"a,b"` table.
    fn totality(
        &mut self,
        node: &Node,
        what: &str,
        table: &BTreeMap<(String, String), String>,
        rows: &BTreeSet<String>,
        cols: &BTreeSet<String>,
    ) {
        let missing: Vec<String> = rows
            .iter()
            .flat_map(|a| cols.iter().map(move |b| (a, b)))
            .filter(|(a, b)| !table.contains_key(&((*a).clone(), (*b).clone())))
            .map(|(a, b)| format!("\"{a},{b}\""))
            .collect();
        if let Some(first) = missing.first() {
            self.report(
                node.start,
                "missing-entry",
                format!("{what} lacks {} of {} entries, first {first}", missing.len(), rows.len() * cols.len()),
            );
        }
    }

    /// A table keyed by `"a,b"`.
    fn pair_table(
        &mut self,
        node: &Node,
        what: &str,
        left: (&BTreeSet<String>, &str),
        right: (&BTreeSet<String>, &str),
        values: (&BTreeSet<String>, &str),
    ) -> Option<BTreeMap<(String, String), String>> {
        let entries = self.string_map(node, what)?;
        let mut table = BTreeMap::new();
        let mut ok = true;
        for (m, v) in entries {
            let Some((a, b)) = m.key.split_once(',').filter(|(_, b)| !b.contains(',')) else {
                self.report(m.key_start, "bad-key", format!("key {:?} in {what} must have the form \"a,b\"", m.key));
                ok = false;
                continue;
            };
            let refs = self.reference(m.key_start, a, left.0, &format!("{} element", left.1))
                & self.reference(m.key_start, b, right.0, &format!("{} element", right.1))
                & self.reference(m.value.start, v, values.0, &format!("{} element", values.1));
            ok &= refs;
            table.insert((a.to_string(), b.to_string()), v.to_string());
        }
        ok.then_some(table)
    }

    fn crossed_module(&mut self, f: &Fields) -> Option<CrossedModuleDef> {
        let (g, gs) = f.get("G").map(|n| self.group(n, "G")).unwrap_or_default();
        let (h, hs) = f.get("H").map(|n| self.group(n, "H")).unwrap_or_default();
        let action = f.get("action").and_then(|n| {
            let t = self.pair_table(n, "action", (&gs, "G"), (&hs, "H"), (&hs, "H"))?;
            self.totality(n, "action", &t, &gs, &hs);
            Some(t)
        });
        let boundary = f.get("boundary").and_then(|n| {
            let entries = self.string_map(n, "boundary")?;
            let mut map = BTreeMap::new();
            let mut ok = true;
            for (m, v) in entries {
                ok &= self.reference(m.key_start, &m.key, &hs, "H element") & self.reference(m.value.start, v, &gs, "G element");
                map.insert(m.key.clone(), v.to_string());
            }
            if let Some(missing) = hs.iter().find(|x| !map.contains_key(*x)) {
                self.report(n.start, "missing-entry", format!("boundary lacks an entry for {missing:?}"));
            }
            ok.then_some(map)
        });
        Some(CrossedModuleDef {
            g: g?,
            h: h?,
            action: action?,
            boundary: boundary?,
        })
    }

    /// A word of `[edge, direction]` steps; edges are checked when `edges` is known.
    fn word(&mut self, node: &Node, what: &str, edges: Option<&BTreeSet<String>>) -> Option<WordDef> {
        let items = self.array(node, what)?;
        let mut out = Vec::new();
        let mut ok = true;
        for item in items {
            let pair = match &item.value {
                Value::Array(p) if p.len() == 2 => p,
                _ => {
                    self.report(item.start, "type", format!("steps of {what} must be [edge, \"+\" or \"-\"] pairs"));
                    ok = false;
                    continue;
                }
            };
            let (Some(e), Some(d)) = (self.string(&pair[0], "step edge"), self.string(&pair[1], "step direction")) else {
                ok = false;
                continue;
            };
            if let Some(edges) = edges {
                ok &= self.reference(pair[0].start, e, edges, "edge");
            }
            match Direction::from_symbol(d) {
                Some(dir) => out.push((e.to_string(), dir)),
                None => {
                    self.report(pair[1].start, "bad-direction", format!("direction {d:?} must be \"+\" or \"-\""));
                    ok = false;
                }
            }
        }
        ok.then_some(out)
    }

    fn discretization(&mut self, f: &Fields) -> Option<DiscretizationDef> {
        let vertices = f.get("vertices").and_then(|n| self.id_list(n, "vertices", |s| !s.is_empty()));
        let vset: BTreeSet<String> = vertices.iter().flatten().cloned().collect();
        let mut edges = Vec::new();
        let mut edges_ok = true;
        let mut seen = BTreeSet::new();
        if let Some(items) = f.get("edges").and_then(|n| self.array(n, "edges")) {
            for item in items {
                let Some(ef) = self.object(item, "edge", &["id", "src", "tgt"], &[]) else {
                    edges_ok = false;
                    continue;
                };
                let id = self.cell_id(&ef, "edge", &mut seen);
                let src = self.vertex_ref(&ef, "src", &vset);
                let tgt = self.vertex_ref(&ef, "tgt", &vset);
                match (id, src, tgt) {
                    (Some(id), Some(src), Some(tgt)) => edges.push(EdgeDef { id, src, tgt }),
                    _ => edges_ok = false,
                }
            }
        } else {
            edges_ok = false;
        }
        let eset: BTreeSet<String> = edges.iter().map(|e| e.id.clone()).collect();
        let mut faces = Vec::new();
        let mut faces_ok = true;
        let mut seen = BTreeSet::new();
        if let Some(items) = f.get("faces").and_then(|n| self.array(n, "faces")) {
            for item in items {
                let Some(ff) = self.object(item, "face", &["id", "v", "w", "top", "bottom"], &[]) else {
                    faces_ok = false;
                    continue;
                };
                let id = self.cell_id(&ff, "face", &mut seen);
                let v = self.vertex_ref(&ff, "v", &vset);
                let w = self.vertex_ref(&ff, "w", &vset);
                let label = id.clone().unwrap_or_default();
                let mut word = |key: &str| {
                    let n = ff.get(key)?;
                    let w = self.word(n, &format!("{key} of face {label:?}"), Some(&eset))?;
                    if w.is_empty() {
                        self.report(n.start, "empty-word", format!("{key} of face {label:?} is empty"));
                        return None;
                    }
                    Some(w)
                };
                let (top, bottom) = (word("top"), word("bottom"));
                match (id, v, w, top, bottom) {
                    (Some(id), Some(v), Some(w), Some(top), Some(bottom)) => faces.push(FaceDef { id, v, w, top, bottom }),
                    _ => faces_ok = false,
                }
            }
        } else {
            faces_ok = false;
        }
        (edges_ok && faces_ok).then_some(())?;
        Some(DiscretizationDef {
            vertices: vertices?,
            edges,
            faces,
        })
    }

    fn cell_id(&mut self, f: &Fields, what: &str, seen: &mut BTreeSet<String>) -> Option<String> {
        let n = f.get("id")?;
        let id = self.string(n, &format!("{what} id"))?;
        if id.is_empty() {
            self.report(n.start, "invalid-id", format!("{what} id must be nonempty"));
            return None;
        }
        if !seen.insert(id.to_string()) {
            self.report(n.start, "duplicate-id", format!("{what} {id:?} declared twice"));
            return None;
        }
        Some(id.to_string())
    }

    fn vertex_ref(&mut self, f: &Fields, key: &str, vertices: &BTreeSet<String>) -> Option<String> {
        let n = f.get(key)?;
        let v = self.string(n, key)?;
        self.reference(n.start, v, vertices, "vertex").then(|| v.to_string())
    }

    /// A map from cells to group elements, resolved against `ctx` when
    /// possible. With a discretization in context the map must be total.
    fn labelling(&mut self, node: &Node, what: &str, ctx: &Context, cells: Cells, group: Group) -> Option<BTreeMap<String, String>> {
        let entries = self.string_map(node, what)?;
        let cell_names = ctx.discretization.map(|d| {
            let names = CellNames::of(d);
            match cells {
                Cells::Vertices => names.vertices,
                Cells::Edges => names.edges,
                Cells::Faces => names.faces,
            }
        });
        let elements = ctx.crossed_module.map(|cm| {
            let names = ModuleNames::of(cm);
            match group {
                Group::G => names.g,
                Group::H => names.h,
            }
        });
        let mut map = BTreeMap::new();
        let mut ok = true;
        for (m, v) in entries {
            if let Some(cells_declared) = &cell_names {
                if !cells_declared.contains(&m.key) {
                    self.report(m.key_start, "dangling-reference", format!("{} {:?} is not declared", cells.noun(), m.key));
                    ok = false;
                }
            }
            if let Some(declared) = &elements {
                ok &= self.reference(m.value.start, v, declared, &format!("{} element", group.name()));
            }
            map.insert(m.key.clone(), v.to_string());
        }
        if let Some(cells_declared) = &cell_names {
            let Value::Object(members) = &node.value else { unreachable!() };
            let present: BTreeSet<&str> = members.iter().map(|m| m.key.as_str()).collect();
            let missing: Vec<&String> = cells_declared.iter().filter(|c| !present.contains(c.as_str())).collect();
            if let Some(first) = missing.first() {
                self.report(
                    node.start,
                    "missing-assignment",
                    format!("{what} assigns no value to {} {first:?}{}", cells.noun(), plural_tail(missing.len())),
                );
                ok = false;
            }
        }
        ok.then_some(map)
    }

    fn connection(&mut self, f: &Fields, ctx: &Context) -> Option<ConnectionDef> {
        let g = f.get("g").and_then(|n| self.labelling(n, "g", ctx, Cells::Edges, Group::G));
        let h = f.get("h").and_then(|n| self.labelling(n, "h", ctx, Cells::Faces, Group::H));
        Some(ConnectionDef { g: g?, h: h? })
    }

    fn changes(&mut self, node: &Node, disc: Option<&DiscretizationDef>) -> Option<Vec<ChangeSpec>> {
        let items = self.array(node, "changes")?;
        let names = disc.map(CellNames::of);
        let set = |v: &Vec<String>| v.iter().cloned().collect::<BTreeSet<_>>();
        let (vs, es, fs) = match &names {
            Some(n) => (Some(set(&n.vertices)), Some(set(&n.edges)), Some(set(&n.faces))),
            None => (None, None, None),
        };
        let mut out = Vec::new();
        let mut ok = true;
        for item in items {
            let Some(kind_node) = (match &item.value {
                Value::Object(members) => members.iter().find(|m| m.key == "kind").map(|m| &m.value),
                _ => {
                    self.type_error(item, "a change", "an object");
                    ok = false;
                    continue;
                }
            }) else {
                self.report(item.start, "missing-key", "change lacks required key \"kind\"");
                ok = false;
                continue;
            };
            let Some(kind) = self.string(kind_node, "change kind") else {
                ok = false;
                continue;
            };
            let reference = |dec: &mut Self, f: &Fields, key: &str, declared: &Option<BTreeSet<String>>, noun: &str| -> Option<String> {
                let n = f.get(key)?;
                let id = dec.string(n, key)?;
                match declared {
                    Some(d) if !d.contains(id) => {
                        dec.report(n.start, "dangling-reference", format!("{noun} {id:?} is not declared"));
                        None
                    }
                    _ => Some(id.to_string()),
                }
            };
            let spec = match kind {
                "edge_flip" => {
                    let f = self.object(item, "edge_flip change", &["kind", "edge"], &[]);
                    f.and_then(|f| reference(self, &f, "edge", &es, "edge")).map(|edge| ChangeSpec::EdgeFlip { edge })
                }
                "face_vflip" | "face_hflip" => {
                    let f = self.object(item, &format!("{kind} change"), &["kind", "face"], &[]);
                    f.and_then(|f| reference(self, &f, "face", &fs, "face")).map(|face| {
                        if kind == "face_vflip" {
                            ChangeSpec::FaceVflip { face }
                        } else {
                            ChangeSpec::FaceHflip { face }
                        }
                    })
                }
                "bigon_move" => {
                    let keys = ["kind", "face", "source", "target", "nu", "omega"];
                    self.object(item, "bigon_move change", &keys, &[]).and_then(|f| {
                        let face = reference(self, &f, "face", &fs, "face");
                        let source = reference(self, &f, "source", &vs, "vertex");
                        let target = reference(self, &f, "target", &vs, "vertex");
                        let nu = f.get("nu").and_then(|n| self.word(n, "nu", es.as_ref()));
                        let omega = f.get("omega").and_then(|n| self.word(n, "omega", es.as_ref()));
                        Some(ChangeSpec::BigonMove {
                            face: face?,
                            source: source?,
                            target: target?,
                            nu: nu?,
                            omega: omega?,
                        })
                    })
                }
                other => {
                    self.report(
                        kind_node.start,
                        "unknown-kind",
                        format!("change kind {other:?} is not one of edge_flip, face_vflip, face_hflip, bigon_move"),
                    );
                    None
                }
            };
            match spec {
                Some(s) => out.push(s),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }
}

#[derive(Clone, Copy)]
enum Cells {
    Vertices,
    Edges,
    Faces,
}

impl Cells {
    fn noun(self) -> &'static str {
        match self {
            Cells::Vertices => "vertex",
            Cells::Edges => "edge",
            Cells::Faces => "face",
        }
    }
}

#[derive(Clone, Copy)]
enum Group {
    G,
    H,
}

impl Group {
    fn name(self) -> &'static str {
        match self {
            Group::G => "G",
            Group::H => "H",
        }
    }
}

fn plural_tail(n: usize) -> String {
    if n > 1 {
        format!(" (and {} more)", n - 1)
    } else {
        String::new()
    }
}

fn string_map_json(map: &BTreeMap<String, String>) -> Json {
    Json::Object(map.iter().map(|(k, v)| (k.clone(), Json::String(v.clone()))).collect())
}

fn pair_table_json(table: &BTreeMap<(String, String), String>) -> Json {
    Json::Object(
        table
            .iter()
            .map(|((a, b), c)| (format!("{a},{b}"), Json::String(c.clone())))
            .collect(),
    )
}

fn group_json(g: &GroupDef) -> Json {
    json!({
        "elements": g.elements,
        "mul": pair_table_json(&g.mul),
        "identity": g.identity,
    })
}

fn word_json(w: &WordDef) -> Json {
    Json::Array(w.iter().map(|(e, d)| json!([e, d.symbol()])).collect())
}

fn crossed_module_json(cm: &CrossedModuleDef) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("G".into(), group_json(&cm.g));
    m.insert("H".into(), group_json(&cm.h));
    m.insert("action".into(), pair_table_json(&cm.action));
    m.insert("boundary".into(), string_map_json(&cm.boundary));
    m
}

fn discretization_json(d: &DiscretizationDef) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("vertices".into(), json!(d.vertices));
    m.insert(
        "edges".into(),
        Json::Array(d.edges.iter().map(|e| json!({"id": e.id, "src": e.src, "tgt": e.tgt})).collect()),
    );
    m.insert(
        "faces".into(),
        Json::Array(
            d.faces
                .iter()
                .map(|f| {
                    json!({
                        "id": f.id,
                        "v": f.v,
                        "w": f.w,
                        "top": word_json(&f.top),
                        "bottom": word_json(&f.bottom),
                    })
                })
                .collect(),
        ),
    );
    m
}

fn connection_json(c: &ConnectionDef) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("g".into(), string_map_json(&c.g));
    m.insert("h".into(), string_map_json(&c.h));
    m
}

fn morphism_json(md: &MorphismDef) -> Map<String, Json> {
    let mut m = connection_json(&md.source);
    m.insert("eta".into(), string_map_json(&md.eta));
    m
}

fn gauge_json(g: &GaugeDef) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("gamma".into(), string_map_json(&g.gamma));
    if let Some(chi) = &g.chi {
        m.insert("chi".into(), string_map_json(chi));
    }
    m
}

pub fn change_json(c: &ChangeSpec) -> Json {
    match c {
        ChangeSpec::EdgeFlip { edge } => json!({"kind": c.kind(), "edge": edge}),
        ChangeSpec::FaceVflip { face } | ChangeSpec::FaceHflip { face } => json!({"kind": c.kind(), "face": face}),
        ChangeSpec::BigonMove {
            face,
            source,
            target,
            nu,
            omega,
        } => json!({
            "kind": c.kind(),
            "face": face,
            "source": source,
            "target": target,
            "nu": word_json(nu),
            "omega": word_json(omega),
        }),
    }
}

fn script_json(s: &[ChangeSpec]) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("changes".into(), Json::Array(s.iter().map(change_json).collect()));
    m
}

fn body(doc: &Document) -> Map<String, Json> {
    match doc {
        Document::CrossedModule(cm) => crossed_module_json(cm),
        Document::Discretization(d) => discretization_json(d),
        Document::Connection(c) => connection_json(c),
        Document::Morphism(m) => morphism_json(m),
        Document::Gauge(g) => gauge_json(g),
        Document::ChangeScript(s) => script_json(s),
        Document::Scenario(s) => {
            let mut m = Map::new();
            m.insert("crossed_module".into(), Json::Object(crossed_module_json(&s.crossed_module)));
            m.insert("discretization".into(), Json::Object(discretization_json(&s.discretization)));
            if let Some(c) = &s.connection {
                m.insert("connection".into(), Json::Object(connection_json(c)));
            }
            if let Some(c) = &s.morphism {
                m.insert("morphism".into(), Json::Object(morphism_json(c)));
            }
            if let Some(g) = &s.gauge {
                m.insert("gauge".into(), Json::Object(gauge_json(g)));
            }
            if let Some(sc) = &s.script {
                m.insert("script".into(), Json::Object(script_json(sc)));
            }
            m
        }
    }
}

/// The canonical JSON value of a document, including its `"schema"` field.
pub fn to_json(doc: &Document) -> Json {
    let mut m = body(doc);
    m.insert("schema".into(), Json::String(doc.kind().schema()));
    Json::Object(m)
}

/// Canonical text of a document.
pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(doc)).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn lookup_all<T>(
    map: &BTreeMap<String, String>,
    cells: impl Iterator<Item = String>,
    what: &str,
    elem: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let mut count = 0;
    for cell in cells {
        count += 1;
        let name = map
            .get(&cell)
            .ok_or_else(|| Error::MissingAssignment(format!("{what} at {cell:?}")))?;
        out.push(elem(name).ok_or_else(|| Error::IllFormed(format!("{what}: unknown element {name:?}")))?);
    }
    if map.len() != count {
        return Err(Error::IllFormed(format!("{what} mentions undeclared cells")));
    }
    Ok(out)
}

fn vertex_ids(d: &Discretization) -> impl Iterator<Item = String> + '_ {
    (0..d.vertex_count()).map(|v| d.vertex_id(v).to_string())
}

fn edge_ids(d: &Discretization) -> impl Iterator<Item = String> + '_ {
    d.edges().iter().map(|e| e.id().to_string())
}

fn face_ids(d: &Discretization) -> impl Iterator<Item = String> + '_ {
    d.faces().iter().map(|f| f.id().to_string())
}

fn named<T>(ids: impl Iterator<Item = String>, values: &[T], name: impl Fn(T) -> String) -> BTreeMap<String, String>
where
    T: Copy,
{
    ids.zip(values).map(|(id, &v)| (id, name(v))).collect()
}

impl ConnectionDef {
    pub fn to_object(&self, cm: &CrossedModule, d: &Discretization) -> Result<ConnObject> {
        Ok(ConnObject {
            g: lookup_all(&self.g, edge_ids(d), "g", |s| cm.g_elem(s))?,
            h: lookup_all(&self.h, face_ids(d), "h", |s| cm.h_elem(s))?,
        })
    }

    pub fn from_object(cm: &CrossedModule, d: &Discretization, x: &ConnObject) -> Self {
        Self {
            g: named(edge_ids(d), &x.g, |g| cm.g_name(g).to_string()),
            h: named(face_ids(d), &x.h, |h| cm.h_name(h).to_string()),
        }
    }
}

impl MorphismDef {
    pub fn to_morphism(&self, cm: &CrossedModule, d: &Discretization) -> Result<ConnMorphism> {
        Ok(ConnMorphism {
            source: self.source.to_object(cm, d)?,
            eta: lookup_all(&self.eta, edge_ids(d), "eta", |s| cm.h_elem(s))?,
        })
    }

    pub fn from_morphism(cm: &CrossedModule, d: &Discretization, m: &ConnMorphism) -> Self {
        Self {
            source: ConnectionDef::from_object(cm, d, &m.source),
            eta: named(edge_ids(d), &m.eta, |h| cm.h_name(h).to_string()),
        }
    }
}

impl GaugeDef {
    pub fn to_object(&self, cm: &CrossedModule, d: &Discretization) -> Result<GaugeObject> {
        Ok(GaugeObject {
            gamma: lookup_all(&self.gamma, vertex_ids(d), "gamma", |s| cm.g_elem(s))?,
        })
    }

    /// The gauge morphism, with `χ ≡ 1` when absent.
    pub fn to_morphism(&self, cm: &CrossedModule, d: &Discretization) -> Result<GaugeMorphism> {
        let source = self.to_object(cm, d)?;
        let chi = match &self.chi {
            Some(chi) => lookup_all(chi, vertex_ids(d), "chi", |s| cm.h_elem(s))?,
            None => vec![cm.h_one(); d.vertex_count()],
        };
        Ok(GaugeMorphism { source, chi })
    }

    pub fn from_object(cm: &CrossedModule, d: &Discretization, g: &GaugeObject) -> Self {
        Self {
            gamma: named(vertex_ids(d), &g.gamma, |g| cm.g_name(g).to_string()),
            chi: None,
        }
    }

    pub fn from_morphism(cm: &CrossedModule, d: &Discretization, m: &GaugeMorphism) -> Self {
        Self {
            gamma: named(vertex_ids(d), &m.source.gamma, |g| cm.g_name(g).to_string()),
            chi: Some(named(vertex_ids(d), &m.chi, |h| cm.h_name(h).to_string())),
        }
    }
}
