//! Changes of orientation and bigon structure, and the induced isomorphisms
//! of connection groupoids.

use crate::complex::{evaluate_word_g, word_source, word_target, Discretization, EdgeWord, WordDef};
use crate::conn::{Conn, ConnMorphism, ConnObject};
use crate::crossed_module::CrossedModule;
use crate::error::{Error, Result};
use crate::report::Report;

/// One elementary change, addressed by cell id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChangeSpec {
    /// Reverse the orientation of an edge.
    EdgeFlip { edge: String },
    /// Swap the 1-source and 1-target of a face.
    FaceVflip { face: String },
    /// Swap the 0-source and 0-target of a face, walking both words backwards.
    FaceHflip { face: String },
    /// Move the 0-source to `source` and the 0-target to `target`, whiskering
    /// both words by `nu` (`source → v`) and `omega` (`w → target`).
    BigonMove {
        face: String,
        source: String,
        target: String,
        nu: WordDef,
        omega: WordDef,
    },
}

impl ChangeSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ChangeSpec::EdgeFlip { .. } => "edge_flip",
            ChangeSpec::FaceVflip { .. } => "face_vflip",
            ChangeSpec::FaceHflip { .. } => "face_hflip",
            ChangeSpec::BigonMove { .. } => "bigon_move",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Resolved {
    EdgeFlip(usize),
    FaceVflip(usize),
    FaceHflip(usize),
    BigonMove {
        face: usize,
        source: usize,
        target: usize,
        nu: EdgeWord,
        omega: EdgeWord,
    },
}

fn check_connector(d: &Discretization, report: &mut Report, name: &str, word: &EdgeWord, from: usize, to: usize) {
    if word.is_empty() {
        if from != to {
            report.violation(
                "connector-endpoints",
                format!(
                    "{name} is empty but must lead from {} to {}",
                    d.vertex_id(from),
                    d.vertex_id(to)
                ),
            );
        }
        return;
    }
    if !d.is_path(word) {
        report.violation("word-disconnected", format!("{name} is not a connected path"));
        return;
    }
    let (s, t) = (word_source(d, word).unwrap(), word_target(d, word).unwrap());
    if (s, t) != (from, to) {
        report.violation(
            "connector-endpoints",
            format!(
                "{name} runs {} → {}, expected {} → {}",
                d.vertex_id(s),
                d.vertex_id(t),
                d.vertex_id(from),
                d.vertex_id(to)
            ),
        );
    }
}

fn whiskered(nu: &EdgeWord, word: &EdgeWord, omega: &EdgeWord) -> EdgeWord {
    nu.concat(word).concat(omega).free_reduced()
}

fn resolve(d: &Discretization, spec: &ChangeSpec) -> std::result::Result<Resolved, Report> {
    let mut report = Report::new();
    let face = |report: &mut Report, id: &str| {
        let f = d.face_index(id);
        if f.is_none() {
            report.dangling("unknown-face", format!("no face {id:?}"));
        }
        f
    };
    let resolved = match spec {
        ChangeSpec::EdgeFlip { edge } => match d.edge_index(edge) {
            Some(e) => Some(Resolved::EdgeFlip(e)),
            None => {
                report.dangling("unknown-edge", format!("no edge {edge:?}"));
                None
            }
        },
        ChangeSpec::FaceVflip { face: id } => face(&mut report, id).map(Resolved::FaceVflip),
        ChangeSpec::FaceHflip { face: id } => face(&mut report, id).map(Resolved::FaceHflip),
        ChangeSpec::BigonMove {
            face: id,
            source,
            target,
            nu,
            omega,
        } => {
            let f = face(&mut report, id);
            let mut vertex = |v: &str| {
                let i = d.vertex_index(v);
                if i.is_none() {
                    report.dangling("unknown-vertex", format!("no vertex {v:?}"));
                }
                i
            };
            let (s, t) = (vertex(source), vertex(target));
            let mut word = |w: &WordDef| match d.word_from_def(w) {
                Ok(w) => Some(w),
                Err(e) => {
                    report.dangling("unknown-edge", e.to_string());
                    None
                }
            };
            let (nu, omega) = (word(nu), word(omega));
            match (f, s, t, nu, omega) {
                (Some(f), Some(s), Some(t), Some(nu), Some(omega)) => {
                    let face = d.face(f);
                    check_connector(d, &mut report, "nu", &nu, s, face.source());
                    check_connector(d, &mut report, "omega", &omega, face.target(), t);
                    if report.is_empty()
                        && (whiskered(&nu, face.one_source(), &omega).is_empty()
                            || whiskered(&nu, face.one_target(), &omega).is_empty())
                    {
                        report.violation("empty-word", format!("face {id}: whiskered word reduces to nothing"));
                    }
                    Some(Resolved::BigonMove {
                        face: f,
                        source: s,
                        target: t,
                        nu,
                        omega,
                    })
                }
                _ => None,
            }
        }
    };
    match resolved {
        Some(r) if report.is_empty() => Ok(r),
        _ => Err(report),
    }
}

/// Checks that a change applies to `d`.
pub fn validate_change(d: &Discretization, spec: &ChangeSpec) -> Report {
    resolve(d, spec).err().unwrap_or_default()
}

fn resolve_or_err(d: &Discretization, spec: &ChangeSpec) -> Result<Resolved> {
    resolve(d, spec).map_err(|r| {
        Error::InvalidChange(
            r.issues()
                .iter()
                .map(|i| i.message.as_str())
                .collect::<Vec<_>>()
                .join("; "),
        )
    })
}

fn apply_resolved(d: &Discretization, r: &Resolved) -> Discretization {
    let mut out = d.clone();
    match r {
        Resolved::EdgeFlip(e) => {
            out.edges_mut()[*e].reverse();
            for f in out.faces_mut() {
                let (mut top, mut bottom) = (f.one_source().clone(), f.one_target().clone());
                top.flip_edge(*e);
                bottom.flip_edge(*e);
                let (v, w) = (f.source(), f.target());
                f.set_bigon(v, w, top, bottom);
            }
        }
        Resolved::FaceVflip(i) => {
            let f = &mut out.faces_mut()[*i];
            let (v, w, top, bottom) = (f.source(), f.target(), f.one_source().clone(), f.one_target().clone());
            f.set_bigon(v, w, bottom, top);
        }
        Resolved::FaceHflip(i) => {
            let f = &mut out.faces_mut()[*i];
            let (v, w) = (f.source(), f.target());
            let (top, bottom) = (f.one_source().reversed(), f.one_target().reversed());
            f.set_bigon(w, v, top, bottom);
        }
        Resolved::BigonMove {
            face,
            source,
            target,
            nu,
            omega,
        } => {
            let f = &mut out.faces_mut()[*face];
            let top = whiskered(nu, f.one_source(), omega);
            let bottom = whiskered(nu, f.one_target(), omega);
            f.set_bigon(*source, *target, top, bottom);
        }
    }
    out
}

/// The changed discretization. Cell ids and positions are preserved.
pub fn apply_change(d: &Discretization, spec: &ChangeSpec) -> Result<Discretization> {
    Ok(apply_resolved(d, &resolve_or_err(d, spec)?))
}

/// The change undoing `spec` on `d`.
pub fn inverse_change(d: &Discretization, spec: &ChangeSpec) -> Result<ChangeSpec> {
    resolve_or_err(d, spec)?;
    Ok(match spec {
        ChangeSpec::BigonMove { face, nu, omega, .. } => {
            let f = d.face(d.face_index(face).unwrap());
            let rev = |w: &WordDef| w.iter().rev().map(|(e, dir)| (e.clone(), dir.flip())).collect();
            ChangeSpec::BigonMove {
                face: face.clone(),
                source: d.vertex_id(f.source()).to_string(),
                target: d.vertex_id(f.target()).to_string(),
                nu: rev(nu),
                omega: rev(omega),
            }
        }
        other => other.clone(),
    })
}

fn transport_object_resolved(cm: &CrossedModule, d: &Discretization, r: &Resolved, x: &ConnObject) -> ConnObject {
    let mut y = x.clone();
    match r {
        Resolved::EdgeFlip(e) => y.g[*e] = cm.g_inv(x.g[*e]),
        Resolved::FaceVflip(f) => {
            let face = Conn::new(cm, d).face_square(x, *f).unwrap();
            y.h[*f] = cm.vinverse(face).unwrap().label();
        }
        Resolved::FaceHflip(f) => {
            let face = Conn::new(cm, d).face_square(x, *f).unwrap();
            y.h[*f] = cm.hinverse(face).unwrap().label();
        }
        Resolved::BigonMove { face, nu, omega, .. } => {
            let sq = Conn::new(cm, d).face_square(x, *face).unwrap();
            let left = cm.identity_square(evaluate_word_g(cm, &x.g, nu).unwrap());
            let right = cm.identity_square(evaluate_word_g(cm, &x.g, omega).unwrap());
            y.h[*face] = cm.hcompose(cm.hcompose(left, sq).unwrap(), right).unwrap().label();
        }
    }
    y
}

fn transport_morphism_resolved(cm: &CrossedModule, d: &Discretization, r: &Resolved, m: &ConnMorphism) -> ConnMorphism {
    let mut eta = m.eta.clone();
    if let Resolved::EdgeFlip(e) = r {
        eta[*e] = cm.hinverse(cm.square(m.source.g[*e], m.eta[*e])).unwrap().label();
    }
    ConnMorphism {
        source: transport_object_resolved(cm, d, r, &m.source),
        eta,
    }
}

/// Image of an object of `Conn(d)` in the groupoid of the changed discretization.
pub fn transport_object(cm: &CrossedModule, d: &Discretization, spec: &ChangeSpec, x: &ConnObject) -> Result<ConnObject> {
    let r = resolve_or_err(d, spec)?;
    Conn::new(cm, d).validate_object(x).into_result().map_err(Error::InvalidObject)?;
    Ok(transport_object_resolved(cm, d, &r, x))
}

/// Image of a morphism of `Conn(d)` in the groupoid of the changed discretization.
pub fn transport_morphism(cm: &CrossedModule, d: &Discretization, spec: &ChangeSpec, m: &ConnMorphism) -> Result<ConnMorphism> {
    let r = resolve_or_err(d, spec)?;
    Conn::new(cm, d).target(m)?;
    Ok(transport_morphism_resolved(cm, d, &r, m))
}

/// A sequence of changes applied one after another.
#[derive(Debug, Clone)]
pub struct Script {
    stages: Vec<(Discretization, Resolved)>,
    specs: Vec<ChangeSpec>,
    result: Discretization,
}

impl Script {
    pub fn new(d: &Discretization, specs: &[ChangeSpec]) -> Result<Self> {
        let mut stages = Vec::with_capacity(specs.len());
        let mut cur = d.clone();
        for (i, spec) in specs.iter().enumerate() {
            let r = resolve_or_err(&cur, spec).map_err(|e| match e {
                Error::InvalidChange(msg) => Error::InvalidChange(format!("change #{i} ({}): {msg}", spec.kind())),
                other => other,
            })?;
            let next = apply_resolved(&cur, &r);
            stages.push((cur, r));
            cur = next;
        }
        Ok(Self {
            stages,
            specs: specs.to_vec(),
            result: cur,
        })
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn source(&self) -> Option<&Discretization> {
        self.stages.first().map(|(d, _)| d)
    }

    pub fn result(&self) -> &Discretization {
        &self.result
    }

    pub fn object(&self, cm: &CrossedModule, x: &ConnObject) -> Result<ConnObject> {
        if let Some(d) = self.source() {
            Conn::new(cm, d).validate_object(x).into_result().map_err(Error::InvalidObject)?;
        }
        Ok(self
            .stages
            .iter()
            .fold(x.clone(), |x, (d, r)| transport_object_resolved(cm, d, r, &x)))
    }

    pub fn morphism(&self, cm: &CrossedModule, m: &ConnMorphism) -> Result<ConnMorphism> {
        if let Some(d) = self.source() {
            Conn::new(cm, d).target(m)?;
        }
        Ok(self
            .stages
            .iter()
            .fold(m.clone(), |m, (d, r)| transport_morphism_resolved(cm, d, r, &m)))
    }

    /// The script undoing this one, to be applied to [`Script::result`].
    pub fn inverse_specs(&self) -> Vec<ChangeSpec> {
        self.stages
            .iter()
            .zip(&self.specs)
            .rev()
            .map(|((d, _), spec)| inverse_change(d, spec).expect("resolved earlier"))
            .collect()
    }
}
