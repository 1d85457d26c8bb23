//! Combinatorial 2-complexes with oriented edges and bigon structure on faces.
//!
//! Every face carries a 0-source `v`, a 0-target `w` (possibly equal) and two
//! edge words from `v` to `w`: the 1-source (top) and the 1-target (bottom).
//! Only this combinatorial shadow of the attaching maps is represented.

use std::collections::HashMap;
use std::fmt;

use crate::crossed_module::{CrossedModule, GElem, Square};
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Forward => "+",
            Direction::Reverse => "-",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        match s {
            "+" => Some(Direction::Forward),
            "-" => Some(Direction::Reverse),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An edge word by edge id, as it appears in files.
pub type WordDef = Vec<(String, Direction)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDef {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceDef {
    pub id: String,
    /// 0-source
    pub v: String,
    /// 0-target
    pub w: String,
    /// 1-source
    pub top: WordDef,
    /// 1-target
    pub bottom: WordDef,
}

/// Unvalidated discretization, keyed by cell ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiscretizationDef {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDef>,
    pub faces: Vec<FaceDef>,
}

impl DiscretizationDef {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: &str) -> Self {
        self.vertices.push(id.to_string());
        self
    }

    pub fn edge(mut self, id: &str, src: &str, tgt: &str) -> Self {
        self.edges.push(EdgeDef {
            id: id.into(),
            src: src.into(),
            tgt: tgt.into(),
        });
        self
    }

    pub fn face(mut self, id: &str, v: &str, w: &str, top: &[(&str, Direction)], bottom: &[(&str, Direction)]) -> Self {
        let word = |steps: &[(&str, Direction)]| steps.iter().map(|(e, d)| (e.to_string(), *d)).collect();
        self.faces.push(FaceDef {
            id: id.into(),
            v: v.into(),
            w: w.into(),
            top: word(top),
            bottom: word(bottom),
        });
        self
    }
}

/// One step of an edge word: an edge index and the direction it is traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: usize,
    pub dir: Direction,
}

impl Step {
    pub fn forward(edge: usize) -> Self {
        Step {
            edge,
            dir: Direction::Forward,
        }
    }

    pub fn reverse(edge: usize) -> Self {
        Step {
            edge,
            dir: Direction::Reverse,
        }
    }

    fn cancels(self, other: Step) -> bool {
        self.edge == other.edge && self.dir != other.dir
    }
}

/// A sequence of oriented edges, indexed into a [`Discretization`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EdgeWord {
    steps: Vec<Step>,
}

impl EdgeWord {
    pub fn new(steps: Vec<Step>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The same path walked backwards.
    pub fn reversed(&self) -> Self {
        Self {
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    edge: s.edge,
                    dir: s.dir.flip(),
                })
                .collect(),
        }
    }

    pub fn concat(&self, other: &EdgeWord) -> Self {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Self { steps }
    }

    /// Cancels adjacent `e e̅` pairs until none remain.
    pub fn free_reduced(&self) -> Self {
        let mut out: Vec<Step> = Vec::with_capacity(self.steps.len());
        for &s in &self.steps {
            match out.last() {
                Some(&last) if last.cancels(s) => {
                    out.pop();
                }
                _ => out.push(s),
            }
        }
        Self { steps: out }
    }

    /// Flips the direction of every step along `edge`.
    pub(crate) fn flip_edge(&mut self, edge: usize) {
        for s in &mut self.steps {
            if s.edge == edge {
                s.dir = s.dir.flip();
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    id: String,
    src: usize,
    tgt: usize,
}

impl Edge {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn src(&self) -> usize {
        self.src
    }

    pub fn tgt(&self) -> usize {
        self.tgt
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    id: String,
    source: usize,
    target: usize,
    one_source: EdgeWord,
    one_target: EdgeWord,
}

impl Face {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// 0-source vertex.
    pub fn source(&self) -> usize {
        self.source
    }

    /// 0-target vertex.
    pub fn target(&self) -> usize {
        self.target
    }

    /// 1-source word (`e`, the top of the face square).
    pub fn one_source(&self) -> &EdgeWord {
        &self.one_source
    }

    /// 1-target word (`d`, the bottom of the face square).
    pub fn one_target(&self) -> &EdgeWord {
        &self.one_target
    }
}

/// A validated discretization. Cells are addressed by their position in the
/// declared lists; ids are kept for serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discretization {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    vertex_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    face_index: HashMap<String, usize>,
}

fn step_ends(edges: &HashMap<&str, (&str, &str)>, step: &(String, Direction)) -> Option<(String, String)> {
    let (s, t) = edges.get(step.0.as_str())?;
    Some(match step.1 {
        Direction::Forward => (s.to_string(), t.to_string()),
        Direction::Reverse => (t.to_string(), s.to_string()),
    })
}

/// Checks every invariant of a discretization description.
///
/// Unknown vertex/edge references are `Dangling`; duplicate ids and empty
/// words are `Malformed`; broken paths are `Violation`s.
pub fn validate_discretization(def: &DiscretizationDef) -> Report {
    let mut report = Report::new();
    let mut seen = HashMap::new();
    for v in &def.vertices {
        if seen.insert(v.as_str(), ()).is_some() {
            report.malformed("duplicate-id", format!("vertex {v:?} declared twice"));
        }
    }
    let mut edges: HashMap<&str, (&str, &str)> = HashMap::new();
    for e in &def.edges {
        for end in [&e.src, &e.tgt] {
            if !seen.contains_key(end.as_str()) {
                report.dangling("unknown-vertex", format!("edge {:?} references undeclared vertex {end:?}", e.id));
            }
        }
        if edges.insert(e.id.as_str(), (e.src.as_str(), e.tgt.as_str())).is_some() {
            report.malformed("duplicate-id", format!("edge {:?} declared twice", e.id));
        }
    }
    let mut faces = HashMap::new();
    for f in &def.faces {
        if faces.insert(f.id.as_str(), ()).is_some() {
            report.malformed("duplicate-id", format!("face {:?} declared twice", f.id));
        }
        for end in [&f.v, &f.w] {
            if !seen.contains_key(end.as_str()) {
                report.dangling("unknown-vertex", format!("face {:?} references undeclared vertex {end:?}", f.id));
            }
        }
        for (which, word) in [("1-source", &f.top), ("1-target", &f.bottom)] {
            if word.is_empty() {
                report.malformed("empty-word", format!("face {:?}: {which} is empty", f.id));
                continue;
            }
            let mut dangling = false;
            for (e, _) in word {
                if !edges.contains_key(e.as_str()) {
                    report.dangling("unknown-edge", format!("face {:?}: {which} references undeclared edge {e:?}", f.id));
                    dangling = true;
                }
            }
            if dangling {
                continue;
            }
            let ends: Vec<(String, String)> = word.iter().map(|s| step_ends(&edges, s).unwrap()).collect();
            if let Some(i) = (1..ends.len()).find(|&i| ends[i - 1].1 != ends[i].0) {
                report.violation(
                    "word-disconnected",
                    format!(
                        "face {:?}: {which} breaks between step {} ({}) and step {} ({})",
                        f.id,
                        i - 1,
                        word[i - 1].0,
                        i,
                        word[i].0
                    ),
                );
                continue;
            }
            let (start, end) = (&ends[0].0, &ends[ends.len() - 1].1);
            if *start != f.v || *end != f.w {
                let code = if which == "1-source" { "one-source-endpoints" } else { "one-target-endpoints" };
                report.violation(
                    code,
                    format!(
                        "face {:?}: {which} not a path from 0-source to 0-target (runs {start} -> {end}, expected {} -> {})",
                        f.id, f.v, f.w
                    ),
                );
            }
        }
    }
    report
}

impl Discretization {
    pub fn from_def(def: &DiscretizationDef) -> Result<Self> {
        let report = validate_discretization(def);
        if !report.is_empty() {
            return Err(Error::InvalidDiscretization(report));
        }
        let vertex_index: HashMap<String, usize> =
            def.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let edge_index: HashMap<String, usize> =
            def.edges.iter().enumerate().map(|(i, e)| (e.id.clone(), i)).collect();
        let face_index = def.faces.iter().enumerate().map(|(i, f)| (f.id.clone(), i)).collect();
        let edges = def
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id.clone(),
                src: vertex_index[&e.src],
                tgt: vertex_index[&e.tgt],
            })
            .collect();
        let word = |w: &WordDef| {
            EdgeWord::new(
                w.iter()
                    .map(|(e, dir)| Step {
                        edge: edge_index[e],
                        dir: *dir,
                    })
                    .collect(),
            )
        };
        let faces = def
            .faces
            .iter()
            .map(|f| Face {
                id: f.id.clone(),
                source: vertex_index[&f.v],
                target: vertex_index[&f.w],
                one_source: word(&f.top),
                one_target: word(&f.bottom),
            })
            .collect();
        Ok(Self {
            vertices: def.vertices.clone(),
            edges,
            faces,
            vertex_index,
            edge_index,
            face_index,
        })
    }

    pub fn to_def(&self) -> DiscretizationDef {
        DiscretizationDef {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDef {
                    id: e.id.clone(),
                    src: self.vertices[e.src].clone(),
                    tgt: self.vertices[e.tgt].clone(),
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceDef {
                    id: f.id.clone(),
                    v: self.vertices[f.source].clone(),
                    w: self.vertices[f.target].clone(),
                    top: self.word_to_def(&f.one_source),
                    bottom: self.word_to_def(&f.one_target),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn face_index(&self, id: &str) -> Option<usize> {
        self.face_index.get(id).copied()
    }

    /// Resolves a word by edge id. Unknown edges are reported as
    /// [`Error::MissingAssignment`]-style ill-formed data.
    pub fn word_from_def(&self, word: &WordDef) -> Result<EdgeWord> {
        word.iter()
            .map(|(e, dir)| {
                self.edge_index(e)
                    .map(|edge| Step { edge, dir: *dir })
                    .ok_or_else(|| Error::IllFormed(format!("unknown edge {e:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(EdgeWord::new)
    }

    pub fn word_to_def(&self, word: &EdgeWord) -> WordDef {
        word.steps()
            .iter()
            .map(|s| (self.edges[s.edge].id.clone(), s.dir))
            .collect()
    }

    fn step_ends(&self, s: Step) -> (usize, usize) {
        let e = &self.edges[s.edge];
        match s.dir {
            Direction::Forward => (e.src, e.tgt),
            Direction::Reverse => (e.tgt, e.src),
        }
    }

    /// Whether consecutive steps chain and every edge exists.
    pub fn is_path(&self, word: &EdgeWord) -> bool {
        word.steps().iter().all(|s| s.edge < self.edges.len())
            && word
                .steps()
                .windows(2)
                .all(|p| self.step_ends(p[0]).1 == self.step_ends(p[1]).0)
    }

    pub(crate) fn faces_mut(&mut self) -> &mut [Face] {
        &mut self.faces
    }

    pub(crate) fn edges_mut(&mut self) -> &mut [Edge] {
        &mut self.edges
    }
}

impl Face {
    pub(crate) fn set_bigon(&mut self, source: usize, target: usize, one_source: EdgeWord, one_target: EdgeWord) {
        self.source = source;
        self.target = target;
        self.one_source = one_source;
        self.one_target = one_target;
    }
}

impl Edge {
    pub(crate) fn reverse(&mut self) {
        std::mem::swap(&mut self.src, &mut self.tgt);
    }
}

/// Starting vertex of a word, taking directions into account.
pub fn word_source(d: &Discretization, w: &EdgeWord) -> Result<usize> {
    let first = *w.steps().first().ok_or(Error::EmptyWord)?;
    Ok(d.step_ends(first).0)
}

/// Final vertex of a word, taking directions into account.
pub fn word_target(d: &Discretization, w: &EdgeWord) -> Result<usize> {
    let last = *w.steps().last().ok_or(Error::EmptyWord)?;
    Ok(d.step_ends(last).1)
}

/// Ordered product of the `G`-labels along a word, inverting reversed steps.
/// The empty word evaluates to the identity.
pub fn evaluate_word_g(cm: &CrossedModule, g: &[GElem], w: &EdgeWord) -> Result<GElem> {
    w.steps().iter().try_fold(cm.g_one(), |acc, s| {
        let x = *g
            .get(s.edge)
            .ok_or_else(|| Error::MissingAssignment(format!("edge #{}", s.edge)))?;
        Ok(match s.dir {
            Direction::Forward => cm.g_mul(acc, x),
            Direction::Reverse => cm.g_mul(acc, cm.g_inv(x)),
        })
    })
}

/// Horizontal composite of per-edge squares along a word, using the
/// horizontal inverse for reversed steps. The empty word gives the identity
/// square on `1`.
pub fn evaluate_word_square(cm: &CrossedModule, squares: &[Square], w: &EdgeWord) -> Result<Square> {
    w.steps().iter().try_fold(cm.identity_square(cm.g_one()), |acc, s| {
        let sq = *squares
            .get(s.edge)
            .ok_or_else(|| Error::MissingAssignment(format!("edge #{}", s.edge)))?;
        let sq = match s.dir {
            Direction::Forward => sq,
            Direction::Reverse => cm.hinverse(sq)?,
        };
        cm.hcompose(acc, sq)
    })
}
