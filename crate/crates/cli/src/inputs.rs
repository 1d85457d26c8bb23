//! Reading input documents from files, bundled names and standard input.

use std::io::Read;
use std::path::Path;

use hgt_core::format::{self, ConnectionDef, Context, Document, DocumentKind, GaugeDef, MorphismDef};
use hgt_core::moduli::{example_def, two_face_bigon_def, Example};
use hgt_core::{catalog, ChangeSpec, CrossedModule, CrossedModuleDef, Discretization, DiscretizationDef, Error};

use crate::args::Inputs;
use crate::report::{Failure, Issue};

#[derive(Debug, Clone)]
pub struct Named<T> {
    pub source: String,
    pub value: T,
}

impl<T> Named<T> {
    fn new(source: impl Into<String>, value: T) -> Self {
        Self {
            source: source.into(),
            value,
        }
    }
}

/// Parsed, not yet validated, documents.
#[derive(Debug, Default)]
pub struct Loaded {
    pub cm: Option<Named<CrossedModuleDef>>,
    pub disc: Option<Named<DiscretizationDef>>,
    pub conns: Vec<Named<ConnectionDef>>,
    pub morphisms: Vec<Named<MorphismDef>>,
    pub gauge: Option<Named<GaugeDef>>,
    pub script: Option<Named<Vec<ChangeSpec>>>,
}

pub const BUNDLED_DISCRETIZATIONS: [&str; 4] = ["s1", "s2", "t2", "two-face-bigon"];
pub const BUNDLED_MODULES: [&str; 4] = ["z2z4", "s3conj", "z2z3inv", "trivial"];

pub fn bundled_discretization(name: &str) -> Option<DiscretizationDef> {
    match name {
        "two-face-bigon" => Some(two_face_bigon_def()),
        _ => name.parse::<Example>().ok().map(example_def),
    }
}

pub fn bundled_module(name: &str) -> Option<CrossedModuleDef> {
    catalog::by_name(name).map(|cm| cm.to_def())
}

/// Collects parse problems across every input before giving up.
struct Reader<'a> {
    stdin: &'a mut dyn Read,
    issues: Vec<Issue>,
}

impl Reader<'_> {
    fn bytes(&mut self, source: &str) -> Option<Vec<u8>> {
        let result = if source == "-" {
            let mut buf = Vec::new();
            self.stdin.read_to_end(&mut buf).map(|_| buf)
        } else {
            std::fs::read(source)
        };
        match result {
            Ok(b) => Some(b),
            Err(e) => {
                self.issues.push(Issue::new("input", "io", format!("cannot read: {e}")).at(display(source)));
                None
            }
        }
    }

    fn parse(&mut self, source: &str, kind: DocumentKind, ctx: &Context) -> Option<Document> {
        let bytes = self.bytes(source)?;
        match format::parse_with(&bytes, kind, ctx) {
            Ok(doc) => Some(doc),
            Err(diags) => {
                let name = display(source);
                self.issues.extend(diags.iter().map(|d| Issue::from_diagnostic(name, d)));
                None
            }
        }
    }

    /// A file, or a bundled document when no such file exists.
    fn file_or_bundled<T>(&mut self, arg: &str, kind: DocumentKind, bundled: impl Fn(&str) -> Option<T>, pick: impl Fn(Document) -> Option<T>) -> Option<Named<T>> {
        if arg != "-" && !Path::new(arg).exists() {
            if let Some(v) = bundled(arg) {
                return Some(Named::new(arg, v));
            }
        }
        self.parse(arg, kind, &Context::default()).and_then(pick).map(|v| Named::new(display(arg), v))
    }
}

fn display(source: &str) -> &str {
    if source == "-" {
        "<stdin>"
    } else {
        source
    }
}

/// Parses every input named by `args`. With `need_disc`, a missing
/// discretization is read from standard input.
pub fn load(args: &Inputs, need_disc: bool, stdin: &mut dyn Read) -> Result<Loaded, Failure> {
    let mut r = Reader {
        stdin,
        issues: Vec::new(),
    };
    let mut loaded = Loaded::default();
    let mut scenario = None;
    if let Some(path) = &args.scenario {
        let path = path.to_string_lossy().into_owned();
        if let Some(Document::Scenario(s)) = r.parse(&path, DocumentKind::Scenario, &Context::default()) {
            scenario = Some((path, *s));
        }
    }

    loaded.cm = match &args.cm {
        Some(arg) => r.file_or_bundled(arg, DocumentKind::CrossedModule, bundled_module, |d| match d {
            Document::CrossedModule(cm) => Some(cm),
            _ => None,
        }),
        None => scenario.as_ref().map(|(p, s)| Named::new(format!("{p}#crossed_module"), s.crossed_module.clone())),
    };
    let disc_arg = args.disc.clone().or_else(|| (need_disc && scenario.is_none()).then(|| "-".to_string()));
    loaded.disc = match &disc_arg {
        Some(arg) => r.file_or_bundled(arg, DocumentKind::Discretization, bundled_discretization, |d| match d {
            Document::Discretization(d) => Some(d),
            _ => None,
        }),
        None => scenario.as_ref().map(|(p, s)| Named::new(format!("{p}#discretization"), s.discretization.clone())),
    };
    if !r.issues.is_empty() {
        return Err(r.issues.into());
    }

    let ctx = Context {
        crossed_module: loaded.cm.as_ref().map(|n| &n.value),
        discretization: loaded.disc.as_ref().map(|n| &n.value),
    };
    let mut conns = Vec::new();
    for path in &args.conn {
        let path = path.to_string_lossy();
        if let Some(Document::Connection(c)) = r.parse(&path, DocumentKind::Connection, &ctx) {
            conns.push(Named::new(path, c));
        }
    }
    let mut morphisms = Vec::new();
    for path in &args.morphism {
        let path = path.to_string_lossy();
        if let Some(Document::Morphism(m)) = r.parse(&path, DocumentKind::Morphism, &ctx) {
            morphisms.push(Named::new(path, m));
        }
    }
    let gauge = args.gauge.as_ref().and_then(|path| {
        let path = path.to_string_lossy();
        match r.parse(&path, DocumentKind::Gauge, &ctx) {
            Some(Document::Gauge(g)) => Some(Named::new(path, g)),
            _ => None,
        }
    });
    let script = args.script.as_ref().and_then(|path| {
        let path = path.to_string_lossy();
        match r.parse(&path, DocumentKind::ChangeScript, &ctx) {
            Some(Document::ChangeScript(s)) => Some(Named::new(path, s)),
            _ => None,
        }
    });
    if !r.issues.is_empty() {
        return Err(r.issues.into());
    }
    loaded.conns = conns;
    loaded.morphisms = morphisms;
    loaded.gauge = gauge;
    loaded.script = script;

    if let Some((p, s)) = scenario {
        if loaded.conns.is_empty() {
            loaded.conns.extend(s.connection.map(|c| Named::new(format!("{p}#connection"), c)));
        }
        if loaded.morphisms.is_empty() {
            loaded.morphisms.extend(s.morphism.map(|m| Named::new(format!("{p}#morphism"), m)));
        }
        if loaded.gauge.is_none() {
            loaded.gauge = s.gauge.map(|g| Named::new(format!("{p}#gauge"), g));
        }
        if loaded.script.is_none() {
            loaded.script = s.script.map(|sc| Named::new(format!("{p}#script"), sc));
        }
    }
    Ok(loaded)
}

/// Turns a core error about an input into issues.
pub fn issues_of(source: &str, e: &Error) -> Vec<Issue> {
    match e {
        Error::InvalidCrossedModule(r) | Error::InvalidDiscretization(r) | Error::InvalidObject(r) => Issue::from_report(source, r),
        Error::BudgetExceeded { .. } => vec![Issue::new("budget", "budget-exceeded", e.to_string()).at(source)],
        Error::MissingAssignment(_) => vec![Issue::new("dangling", "missing-assignment", e.to_string()).at(source)],
        Error::NotComposable(_) => vec![Issue::new("violation", "not-composable", e.to_string()).at(source)],
        Error::InvalidChange(_) => vec![Issue::new("violation", "invalid-change", e.to_string()).at(source)],
        _ => vec![Issue::new("violation", "invalid", e.to_string()).at(source)],
    }
}

pub fn build_cm(n: &Named<CrossedModuleDef>) -> Result<CrossedModule, Vec<Issue>> {
    CrossedModule::from_def(&n.value).map_err(|e| issues_of(&n.source, &e))
}

pub fn build_disc(n: &Named<DiscretizationDef>) -> Result<Discretization, Vec<Issue>> {
    Discretization::from_def(&n.value).map_err(|e| issues_of(&n.source, &e))
}

pub fn require<'a, T>(value: &'a Option<Named<T>>, flag: &str) -> Result<&'a Named<T>, Failure> {
    value
        .as_ref()
        .ok_or_else(|| Issue::usage(format!("{flag} is required")).into())
}
