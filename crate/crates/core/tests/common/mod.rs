//! Golden corpus checks shared by the acceptance suite and the format tests.
//!
//! Files are named `<stem>.<kind>.json`. A stem of the form
//! `<discretization>-<crossed module>-...` is resolved against the
//! discretization and crossed-module files of the valid corpus, and a change
//! script stem `<discretization>-...` is applied to that discretization.
//! Malformed files carry their expected diagnostics in `<stem>.<kind>.expected`.
//! Set `HG_BLESS=1` to rewrite the expected files.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hgt_core::format::{self, Context, Diagnostic, Document, DocumentKind};
use hgt_core::{Conn, CrossedModule, CrossedModuleDef, Discretization, DiscretizationDef, Gauge, Script};

pub struct CorpusResult {
    pub files: Vec<String>,
    pub failures: Vec<String>,
}

pub fn golden_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn json_files(dir: &Path) -> Vec<(String, DocumentKind, PathBuf)> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())) {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let Some(base) = name.strip_suffix(".json") else { continue };
        let Some((stem, kind)) = base.rsplit_once('.') else { continue };
        let kind = DocumentKind::from_name(kind).unwrap_or_else(|| panic!("{name}: unknown document kind"));
        out.push((stem.to_string(), kind, path));
    }
    out.sort_by(|a, b| a.2.cmp(&b.2));
    out
}

/// The discretizations and crossed modules declared by the valid corpus.
pub struct Library {
    discretizations: BTreeMap<String, DiscretizationDef>,
    modules: BTreeMap<String, CrossedModuleDef>,
}

impl Library {
    pub fn load() -> Self {
        let mut lib = Library {
            discretizations: BTreeMap::new(),
            modules: BTreeMap::new(),
        };
        for (stem, kind, path) in json_files(&golden_root().join("valid")) {
            let bytes = fs::read(&path).unwrap();
            match format::parse(&bytes, kind) {
                Ok(Document::Discretization(d)) => {
                    lib.discretizations.insert(stem, d);
                }
                Ok(Document::CrossedModule(cm)) => {
                    lib.modules.insert(stem, cm);
                }
                _ => {}
            }
        }
        lib
    }

    /// Longest discretization name `d` with `stem = d-rest`, and a crossed
    /// module named by the first component of `rest`.
    fn resolve(&self, stem: &str) -> (Option<&DiscretizationDef>, Option<&CrossedModuleDef>) {
        let disc = self
            .discretizations
            .iter()
            .filter_map(|(name, d)| stem.strip_prefix(name.as_str())?.strip_prefix('-').map(|rest| (name, d, rest)))
            .max_by_key(|(name, _, _)| name.len());
        match disc {
            Some((_, d, rest)) => {
                let module = rest.split('-').next().and_then(|m| self.modules.get(m));
                (Some(d), module)
            }
            None => (None, None),
        }
    }

    pub fn context(&self, stem: &str, kind: DocumentKind) -> Context<'_> {
        let (disc, cm) = self.resolve(stem);
        match kind {
            DocumentKind::ChangeScript => Context {
                crossed_module: None,
                discretization: disc,
            },
            DocumentKind::Connection | DocumentKind::Morphism | DocumentKind::Gauge => Context {
                crossed_module: cm,
                discretization: cm.and(disc),
            },
            _ => Context::default(),
        }
    }
}

/// Checks that a parsed valid document is also meaningful.
fn semantic_check(doc: &Document, ctx: &Context) -> Result<(), String> {
    let built = |ctx: &Context| -> Result<Option<(CrossedModule, Discretization)>, String> {
        match (ctx.crossed_module, ctx.discretization) {
            (Some(cm), Some(d)) => Ok(Some((
                CrossedModule::from_def(cm).map_err(|e| e.to_string())?,
                Discretization::from_def(d).map_err(|e| e.to_string())?,
            ))),
            _ => Ok(None),
        }
    };
    match doc {
        Document::CrossedModule(cm) => CrossedModule::from_def(cm).map(drop).map_err(|e| e.to_string()),
        Document::Discretization(d) => Discretization::from_def(d).map(drop).map_err(|e| e.to_string()),
        Document::Connection(c) => {
            let Some((cm, d)) = built(ctx)? else { return Err("no context to check against".into()) };
            let x = c.to_object(&cm, &d).map_err(|e| e.to_string())?;
            Conn::new(&cm, &d).validate_object(&x).into_result().map_err(|r| r.to_string())
        }
        Document::Morphism(m) => {
            let Some((cm, d)) = built(ctx)? else { return Err("no context to check against".into()) };
            let m = m.to_morphism(&cm, &d).map_err(|e| e.to_string())?;
            Conn::new(&cm, &d).validate_object(&m.source).into_result().map_err(|r| r.to_string())
        }
        Document::Gauge(g) => {
            let Some((cm, d)) = built(ctx)? else { return Err("no context to check against".into()) };
            let m = g.to_morphism(&cm, &d).map_err(|e| e.to_string())?;
            Gauge::new(&cm, &d).validate_morphism(&m).into_result().map_err(|r| r.to_string())
        }
        Document::ChangeScript(specs) => {
            let Some(d) = ctx.discretization else { return Err("no discretization to apply to".into()) };
            let d = Discretization::from_def(d).map_err(|e| e.to_string())?;
            Script::new(&d, specs).map(drop).map_err(|e| e.to_string())
        }
        Document::Scenario(s) => {
            let ctx = Context {
                crossed_module: Some(&s.crossed_module),
                discretization: Some(&s.discretization),
            };
            let parts = [
                s.connection.clone().map(Document::Connection),
                s.morphism.clone().map(Document::Morphism),
                s.gauge.clone().map(Document::Gauge),
                s.script.clone().map(Document::ChangeScript),
            ];
            semantic_check(&Document::CrossedModule(s.crossed_module.clone()), &ctx)?;
            semantic_check(&Document::Discretization(s.discretization.clone()), &ctx)?;
            parts.iter().flatten().try_for_each(|p| semantic_check(p, &ctx))
        }
    }
}

/// Every valid file parses, is meaningful, and reserializes byte for byte.
pub fn check_valid_corpus() -> CorpusResult {
    let lib = Library::load();
    let mut result = CorpusResult {
        files: Vec::new(),
        failures: Vec::new(),
    };
    for (stem, kind, path) in json_files(&golden_root().join("valid")) {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let bytes = fs::read(&path).unwrap();
        let ctx = lib.context(&stem, kind);
        match format::parse_with(&bytes, kind, &ctx) {
            Err(diags) => result.failures.push(format!("{name}: {}", render(&diags).trim_end())),
            Ok(doc) => {
                if format::serialize(&doc).as_bytes() != bytes.as_slice() {
                    result.failures.push(format!("{name}: reserialization differs"));
                }
                if let Err(e) = semantic_check(&doc, &ctx) {
                    result.failures.push(format!("{name}: {e}"));
                }
            }
        }
        result.files.push(name);
    }
    result
}

pub fn render(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("{d}\n")).collect()
}

/// Every malformed file is rejected with exactly the expected diagnostics.
pub fn check_malformed_corpus() -> CorpusResult {
    let lib = Library::load();
    let bless = std::env::var_os("HG_BLESS").is_some();
    let mut result = CorpusResult {
        files: Vec::new(),
        failures: Vec::new(),
    };
    for (stem, kind, path) in json_files(&golden_root().join("malformed")) {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let bytes = fs::read(&path).unwrap();
        let expected_path = path.with_extension("expected");
        let got = match format::parse_with(&bytes, kind, &lib.context(&stem, kind)) {
            Ok(_) => {
                result.failures.push(format!("{name}: accepted"));
                result.files.push(name);
                continue;
            }
            Err(diags) => render(&diags),
        };
        if bless {
            fs::write(&expected_path, &got).unwrap();
        }
        match fs::read_to_string(&expected_path) {
            Ok(expected) if expected == got => {}
            Ok(expected) => result
                .failures
                .push(format!("{name}: expected\n{expected}got\n{got}")),
            Err(e) => result.failures.push(format!("{name}: {e}")),
        }
        result.files.push(name);
    }
    result
}
