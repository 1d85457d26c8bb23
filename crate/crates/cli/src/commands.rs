use std::fmt::Write as _;
use std::io::Read;

use serde_json::{json, Value};

use hgt_core::format::{self, ConnectionDef, Document, MorphismDef};
use hgt_core::laws::{self, LawConfig, Sampling, Suite};
use hgt_core::moduli::{self, build_example, EquivalenceMode, Example};
use hgt_core::{Budget, Conn, ConnMorphism, CrossedModule, Discretization, Gauge, Script};

use crate::args::{EnumerateArgs, ExampleArgs, Inputs, LawsArgs, OrbitsArgs};
use crate::inputs::{self, build_cm, build_disc, issues_of, load, require, Named, BUNDLED_DISCRETIZATIONS, BUNDLED_MODULES};
use crate::report::{Failure, Issue, Outcome};

type Run = Result<Outcome, Failure>;

fn budget(args: &Inputs) -> Budget {
    Budget::new(args.common.max_states)
}

/// Crossed module and discretization, both required and valid.
fn base(args: &Inputs, stdin: &mut dyn Read) -> Result<(inputs::Loaded, CrossedModule, Discretization), Failure> {
    let loaded = load(args, true, stdin)?;
    let cm = build_cm(require(&loaded.cm, "--cm")?)?;
    let d = build_disc(require(&loaded.disc, "--disc")?)?;
    Ok((loaded, cm, d))
}

fn doc_value(doc: Document) -> Value {
    format::to_json(&doc)
}

fn doc_text(doc: &Document) -> String {
    format::serialize(doc)
}

pub fn validate(args: &Inputs, stdin: &mut dyn Read) -> Run {
    if args.cm.is_none()
        && args.disc.is_none()
        && args.scenario.is_none()
        && args.conn.is_empty()
        && args.morphism.is_empty()
        && args.gauge.is_none()
        && args.script.is_none()
    {
        return Err(Issue::usage("nothing to validate; pass at least one document").into());
    }
    let loaded = load(args, false, stdin)?;
    let mut checked = Vec::new();
    let mut issues = Vec::new();
    let mut record = |kind: &str, source: &str, result: Result<(), Vec<Issue>>| {
        let valid = result.is_ok();
        checked.push(json!({"kind": kind, "source": source, "valid": valid}));
        issues.extend(result.err().unwrap_or_default());
    };
    let cm = loaded.cm.as_ref().map(|n| {
        let r = build_cm(n);
        record("crossed-module", &n.source, r.as_ref().map(drop).map_err(Clone::clone));
        r.ok()
    });
    let d = loaded.disc.as_ref().map(|n| {
        let r = build_disc(n);
        record("discretization", &n.source, r.as_ref().map(drop).map_err(Clone::clone));
        r.ok()
    });
    let both = match (cm.flatten(), d.flatten()) {
        (Some(cm), Some(d)) => Some((cm, d)),
        _ => None,
    };
    let dependent = !loaded.conns.is_empty() || !loaded.morphisms.is_empty() || loaded.gauge.is_some();
    if dependent && (loaded.cm.is_none() || loaded.disc.is_none()) {
        return Err(Issue::usage("connections, morphisms and gauge elements need --cm and --disc").into());
    }
    if let Some((cm, d)) = &both {
        let conn = Conn::new(cm, d);
        for n in &loaded.conns {
            let r = n
                .value
                .to_object(cm, d)
                .map_err(|e| issues_of(&n.source, &e))
                .and_then(|x| conn.validate_object(&x).into_result().map_err(|r| Issue::from_report(&n.source, &r)));
            record("connection", &n.source, r);
        }
        for n in &loaded.morphisms {
            let r = n
                .value
                .to_morphism(cm, d)
                .map_err(|e| issues_of(&n.source, &e))
                .and_then(|m| conn.validate_object(&m.source).into_result().map_err(|r| Issue::from_report(&n.source, &r)));
            record("morphism", &n.source, r);
        }
        if let Some(n) = &loaded.gauge {
            let gauge = Gauge::new(cm, d);
            let r = n
                .value
                .to_morphism(cm, d)
                .map_err(|e| issues_of(&n.source, &e))
                .and_then(|m| gauge.validate_morphism(&m).into_result().map_err(|r| Issue::from_report(&n.source, &r)));
            record("gauge", &n.source, r);
        }
    }
    if let Some(n) = &loaded.script {
        let Some(disc) = &loaded.disc else {
            return Err(Issue::usage("a change script needs --disc").into());
        };
        if let Ok(d) = build_disc(disc) {
            let r = Script::new(&d, &n.value).map(drop).map_err(|e| issues_of(&n.source, &e));
            record("change-script", &n.source, r);
        }
    }
    let mut text = String::new();
    for c in &checked {
        let verdict = if c["valid"] == true { "valid" } else { "invalid" };
        writeln!(text, "{} {}: {verdict}", c["kind"].as_str().unwrap(), c["source"].as_str().unwrap()).unwrap();
    }
    let mut out = Outcome::new(json!({ "documents": checked }), text);
    out.issues = issues;
    Ok(out)
}

fn suite_value(s: &Suite) -> Value {
    json!({
        "name": s.name,
        "laws": s.outcomes.iter().map(|o| json!({
            "name": o.name,
            "cases": o.cases.to_string(),
            "sampled": o.sampled,
            "violations": o.violations.to_string(),
            "witness": o.witness,
        })).collect::<Vec<_>>(),
    })
}

pub fn laws(args: &LawsArgs, stdin: &mut dyn Read) -> Run {
    let inputs = &args.inputs;
    let loaded = load(inputs, false, stdin)?;
    let cm_named = require(&loaded.cm, "--cm")?;
    let cm = build_cm(cm_named)?;
    let b = budget(inputs);
    let cfg = LawConfig {
        budget: b,
        sampling: if args.exhaustive {
            Sampling {
                max_cases: b.max_states,
                seed: args.seed,
            }
        } else {
            Sampling {
                max_cases: args.samples,
                seed: args.seed,
            }
        },
    };
    let fail = |e: hgt_core::Error| Failure::from(issues_of(&cm_named.source, &e));
    let mut suites = vec![laws::square_calculus(&cm)];
    match &loaded.disc {
        Some(n) => {
            let d = build_disc(n)?;
            let tag = |mut s: Suite| {
                s.name = format!("{} on {}", s.name, n.source);
                s
            };
            suites.push(tag(laws::conn_groupoid(&cm, &d, &cfg).map_err(fail)?));
            suites.push(tag(laws::gauge_group(&cm, &d, &cfg).map_err(fail)?));
            suites.push(tag(laws::gauge_action(&cm, &d, &cfg).map_err(fail)?));
            suites.push(tag(laws::double_groupoid(&cm, &d, &cfg).map_err(fail)?));
            if let Some(script) = &loaded.script {
                let s = laws::rediscretization(&cm, &d, &script.value, &cfg).map_err(|e| Failure::from(issues_of(&script.source, &e)))?;
                suites.push(tag(s));
            }
        }
        None => {
            if loaded.script.is_some() {
                return Err(Issue::usage("--script needs --disc").into());
            }
            for ex in Example::ALL {
                let d = build_example(ex);
                for mut s in [
                    laws::gauge_group(&cm, &d, &cfg).map_err(fail)?,
                    laws::gauge_action(&cm, &d, &cfg).map_err(fail)?,
                ] {
                    s.name = format!("{} on {ex}", s.name);
                    suites.push(s);
                }
            }
            suites.push(laws::sphere_factorization(&cm, &cfg).map_err(fail)?);
        }
    }

    let mut issues = Vec::new();
    for s in &suites {
        for o in &s.outcomes {
            if o.violations > 0 {
                issues.push(Issue::new(
                    "violation",
                    "law-violated",
                    format!("{} / {}: {} violations, first {}", s.name, o.name, o.violations, o.witness.as_deref().unwrap_or("?")),
                ));
            }
            if o.sampled && args.exhaustive {
                issues.push(Issue::new(
                    "budget",
                    "not-exhaustive",
                    format!("{} / {} has more cases than --max-states {} and was sampled", s.name, o.name, b.max_states),
                ));
            }
        }
    }
    let cases: u128 = suites.iter().map(Suite::cases).sum();
    let violations: u128 = suites.iter().map(Suite::violations).sum();
    let laws_count: usize = suites.iter().map(|s| s.outcomes.len()).sum();
    let mut text: String = suites.iter().map(|s| s.to_string()).collect();
    writeln!(text, "{} suites, {laws_count} laws, {cases} cases, {violations} violations (seed {})", suites.len(), args.seed).unwrap();
    let result = json!({
        "seed": args.seed,
        "exhaustive": args.exhaustive,
        "suites": suites.iter().map(suite_value).collect::<Vec<_>>(),
        "cases": cases.to_string(),
        "violations": violations.to_string(),
    });
    let mut out = Outcome::new(result, text);
    out.issues = issues;
    Ok(out)
}

pub fn enumerate(args: &EnumerateArgs, stdin: &mut dyn Read) -> Run {
    let (loaded, cm, d) = base(&args.inputs, stdin)?;
    let b = budget(&args.inputs);
    let source = &loaded.disc.as_ref().unwrap().source;
    let conn = Conn::new(&cm, &d);
    let objects = conn.enumerate_objects(&b).map_err(|e| Failure::from(issues_of(source, &e)))?;
    let morphisms = objects.len() as u128 * conn.morphisms_per_object();
    let mut text = format!("objects {}\nmorphisms {morphisms}\n", objects.len());
    let mut result = json!({
        "objects": objects.len(),
        "morphisms": morphisms.to_string(),
        "morphisms_per_object": conn.morphisms_per_object().to_string(),
    });
    if args.list {
        let list: Vec<Value> = objects
            .iter()
            .map(|x| doc_value(Document::Connection(ConnectionDef::from_object(&cm, &d, x))))
            .collect();
        for x in &objects {
            writeln!(text, "{}", compact(&ConnectionDef::from_object(&cm, &d, x))).unwrap();
        }
        result["connections"] = Value::Array(list);
    }
    Ok(Outcome::new(result, text))
}

fn compact(c: &ConnectionDef) -> String {
    let show = |m: &std::collections::BTreeMap<String, String>| m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
    format!("g: {} | h: {}", show(&c.g), show(&c.h))
}

pub fn orbits(args: &OrbitsArgs, stdin: &mut dyn Read) -> Run {
    let mode: EquivalenceMode = args.mode.parse().map_err(|m: String| Failure::from(Issue::usage(m)))?;
    let (loaded, cm, d) = base(&args.inputs, stdin)?;
    let source = &loaded.disc.as_ref().unwrap().source;
    let report = moduli::count_orbits(&cm, &d, mode, &budget(&args.inputs)).map_err(|e| Failure::from(issues_of(source, &e)))?;
    let mut text = format!("mode {mode}\nobjects {}\norbits {}\n", report.objects, report.count());
    let classes: Vec<Value> = report
        .orbits
        .iter()
        .map(|o| {
            let rep = ConnectionDef::from_object(&cm, &d, &o.representative);
            writeln!(text, "  size {:>4}  {}", o.size, compact(&rep)).unwrap();
            json!({"size": o.size, "representative": doc_value(Document::Connection(rep))})
        })
        .collect();
    let result = json!({
        "mode": mode.name(),
        "objects": report.objects,
        "orbits": report.count(),
        "classes": classes,
    });
    Ok(Outcome::new(result, text))
}

fn connection(cm: &CrossedModule, d: &Discretization, n: &Named<ConnectionDef>) -> Result<hgt_core::ConnObject, Failure> {
    let x = n.value.to_object(cm, d).map_err(|e| Failure::from(issues_of(&n.source, &e)))?;
    Conn::new(cm, d)
        .validate_object(&x)
        .into_result()
        .map_err(|r| Failure::from(Issue::from_report(&n.source, &r)))?;
    Ok(x)
}

fn morphism(cm: &CrossedModule, d: &Discretization, n: &Named<MorphismDef>) -> Result<ConnMorphism, Failure> {
    let m = n.value.to_morphism(cm, d).map_err(|e| Failure::from(issues_of(&n.source, &e)))?;
    Conn::new(cm, d)
        .validate_object(&m.source)
        .into_result()
        .map_err(|r| Failure::from(Issue::from_report(&n.source, &r)))?;
    Ok(m)
}

fn emit(doc: Document, key: &str) -> Outcome {
    let text = doc_text(&doc);
    Outcome::document(json!({ key: doc_value(doc) }), text)
}

pub fn act(args: &Inputs, stdin: &mut dyn Read) -> Run {
    let (loaded, cm, d) = base(args, stdin)?;
    let g = require(&loaded.gauge, "--gauge")?;
    let gauge = Gauge::new(&cm, &d);
    let fail = |e: hgt_core::Error| Failure::from(issues_of(&g.source, &e));
    match (loaded.conns.as_slice(), loaded.morphisms.as_slice()) {
        ([c], []) => {
            if g.value.chi.is_some() {
                return Err(Issue::usage("a gauge morphism (with chi) acts on --morphism, not --conn").into());
            }
            let x = connection(&cm, &d, c)?;
            let gamma = g.value.to_object(&cm, &d).map_err(fail)?;
            let y = gauge.act_object(&gamma, &x).map_err(fail)?;
            Ok(emit(Document::Connection(ConnectionDef::from_object(&cm, &d, &y)), "connection"))
        }
        ([], [m]) => {
            let m = morphism(&cm, &d, m)?;
            let gm = g.value.to_morphism(&cm, &d).map_err(fail)?;
            let out = gauge.act_morphism(&gm, &m).map_err(fail)?;
            Ok(emit(Document::Morphism(MorphismDef::from_morphism(&cm, &d, &out)), "morphism"))
        }
        _ => Err(Issue::usage("act takes exactly one --conn or one --morphism").into()),
    }
}

pub fn compose(args: &Inputs, stdin: &mut dyn Read) -> Run {
    let (loaded, cm, d) = base(args, stdin)?;
    if loaded.morphisms.len() < 2 {
        return Err(Issue::usage("compose needs at least two --morphism files").into());
    }
    let conn = Conn::new(&cm, &d);
    let mut acc = morphism(&cm, &d, &loaded.morphisms[0])?;
    for n in &loaded.morphisms[1..] {
        let next = morphism(&cm, &d, n)?;
        acc = conn.compose(&next, &acc).map_err(|e| Failure::from(issues_of(&n.source, &e)))?;
    }
    Ok(emit(Document::Morphism(MorphismDef::from_morphism(&cm, &d, &acc)), "morphism"))
}

pub fn change(args: &Inputs, stdin: &mut dyn Read) -> Run {
    let loaded = load(args, true, stdin)?;
    let d = build_disc(require(&loaded.disc, "--disc")?)?;
    let s = require(&loaded.script, "--script")?;
    let script = Script::new(&d, &s.value).map_err(|e| Failure::from(issues_of(&s.source, &e)))?;
    let result_def = script.result().to_def();
    let mut result = json!({
        "changes": s.value.len(),
        "discretization": doc_value(Document::Discretization(result_def.clone())),
    });
    let mut docs = vec![Document::Discretization(result_def)];
    let carried = !loaded.conns.is_empty() || !loaded.morphisms.is_empty();
    if carried {
        let cm = build_cm(require(&loaded.cm, "--cm")?)?;
        let mut conns = Vec::new();
        for n in &loaded.conns {
            let x = connection(&cm, &d, n)?;
            let y = script.object(&cm, &x).map_err(|e| Failure::from(issues_of(&n.source, &e)))?;
            let def = ConnectionDef::from_object(&cm, script.result(), &y);
            conns.push(doc_value(Document::Connection(def.clone())));
            docs.push(Document::Connection(def));
        }
        let mut mors = Vec::new();
        for n in &loaded.morphisms {
            let m = morphism(&cm, &d, n)?;
            let out = script.morphism(&cm, &m).map_err(|e| Failure::from(issues_of(&n.source, &e)))?;
            let def = MorphismDef::from_morphism(&cm, script.result(), &out);
            mors.push(doc_value(Document::Morphism(def.clone())));
            docs.push(Document::Morphism(def));
        }
        result["connections"] = Value::Array(conns);
        result["morphisms"] = Value::Array(mors);
    }
    let text: String = docs.iter().map(doc_text).collect();
    Ok(Outcome::document(result, text))
}

pub fn example(args: &ExampleArgs) -> Run {
    let name = args.name.as_str();
    let doc = if let Some(d) = inputs::bundled_discretization(name) {
        Document::Discretization(d)
    } else if let Some(cm) = inputs::bundled_module(name) {
        Document::CrossedModule(cm)
    } else {
        return Err(Issue::usage(format!(
            "unknown example {name:?}; choose one of {}, {}",
            BUNDLED_DISCRETIZATIONS.join(", "),
            BUNDLED_MODULES.join(", ")
        ))
        .into());
    };
    let text = doc_text(&doc);
    Ok(Outcome::document(json!({ "name": name, "document": doc_value(doc) }), text))
}
