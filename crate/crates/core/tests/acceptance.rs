//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hgt_core::catalog;
use hgt_core::complex::Direction;
use hgt_core::format::DocumentKind;
use hgt_core::laws::{self, LawConfig, Sampling, Suite};
use hgt_core::moduli::{self, build_example, example_def, Example};
use hgt_core::{Budget, ChangeSpec, CrossedModule, DiscretizationDef};

const SQUARE_LAW_TIME_LIMIT: Duration = Duration::from_secs(10);
const DOUBLE_GROUPOID_SAMPLE: u128 = 1_000_000;

struct Criterion {
    passed: bool,
    detail: String,
}

fn summarize(suites: &[Suite]) -> Criterion {
    let cases: u128 = suites.iter().map(Suite::cases).sum();
    let violations: u128 = suites.iter().map(Suite::violations).sum();
    let mut detail = format!("{} laws, {cases} cases, {violations} violations", suites.iter().map(|s| s.outcomes.len()).sum::<usize>());
    for s in suites {
        for f in s.failures() {
            detail.push_str(&format!("\n    {} / {}: {}", s.name, f.name, f.witness.as_deref().unwrap_or("")));
        }
    }
    Criterion {
        passed: violations == 0,
        detail,
    }
}

fn exhaustive() -> LawConfig {
    LawConfig {
        budget: Budget::default(),
        sampling: Sampling::exhaustive(),
    }
}

fn ac1() -> Criterion {
    let mut passed = true;
    let mut lines = Vec::new();
    for (name, cm) in [
        ("z2z4", catalog::z2_z4()),
        ("s3conj", catalog::s3_conjugation()),
        ("z2z3inv", catalog::z2_z3_inversion()),
    ] {
        let start = Instant::now();
        let suite = laws::square_calculus(&cm);
        let elapsed = start.elapsed();
        let sampled = suite.outcomes.iter().any(|o| o.sampled);
        let ok = suite.passed() && !sampled && elapsed < SQUARE_LAW_TIME_LIMIT;
        passed &= ok;
        lines.push(format!(
            "{name}: {} cases, {} violations, {:.2}s",
            suite.cases(),
            suite.violations(),
            elapsed.as_secs_f64()
        ));
        for f in suite.failures() {
            lines.push(format!("  {}: {}", f.name, f.witness.as_deref().unwrap_or("")));
        }
    }
    Criterion {
        passed,
        detail: lines.join("; "),
    }
}

fn ac2() -> Criterion {
    let cm = catalog::z2_z4();
    let d = build_example(Example::T2);
    let suite = laws::conn_groupoid(&cm, &d, &exhaustive()).unwrap();
    let objects = moduli::count_objects(&cm, &d, &Budget::default()).unwrap();
    let morphisms = moduli::count_morphisms(&cm, &d, &Budget::default()).unwrap();
    let mut c = summarize(&[suite]);
    c.passed &= objects == 8 && morphisms == 8 * 16;
    c.detail = format!("{objects} objects, {morphisms} morphisms; {}", c.detail);
    c
}

fn ac3() -> Criterion {
    let cm = catalog::z2_z4();
    let suites: Vec<Suite> = Example::ALL
        .iter()
        .flat_map(|&ex| {
            let d = build_example(ex);
            let cfg = exhaustive();
            let mut action = laws::gauge_action(&cm, &d, &cfg).unwrap();
            action.name = format!("{} on {ex}", action.name);
            let mut group = laws::gauge_group(&cm, &d, &cfg).unwrap();
            group.name = format!("{} on {ex}", group.name);
            [action, group]
        })
        .collect();
    summarize(&suites)
}

/// Counts objects and morphisms straight from the description: every
/// assignment is tried and word products are taken from the tables.
fn brute_force_counts(cm: &CrossedModule, def: &DiscretizationDef) -> (u128, u128) {
    let (ng, nh) = (cm.g_order(), cm.h_order());
    let (ne, nf) = (def.edges.len(), def.faces.len());
    let edge_pos: BTreeMap<&str, usize> = def.edges.iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
    let total = ng.pow(ne as u32) * nh.pow(nf as u32);
    let mut objects = 0u128;
    for code in 0..total {
        let mut rest = code;
        let g: Vec<usize> = (0..ne)
            .map(|_| {
                let x = rest % ng;
                rest /= ng;
                x
            })
            .collect();
        let h: Vec<usize> = (0..nf)
            .map(|_| {
                let x = rest % nh;
                rest /= nh;
                x
            })
            .collect();
        let eval = |word: &[(String, Direction)]| {
            word.iter().fold(cm.g_one(), |acc, (e, dir)| {
                let x = cm.g_at(g[edge_pos[e.as_str()]]);
                let x = if *dir == Direction::Forward { x } else { cm.g_inv(x) };
                cm.g_mul(acc, x)
            })
        };
        let ok = def.faces.iter().zip(&h).all(|(f, &hf)| {
            cm.bnd(cm.h_at(hf)) == cm.g_mul(eval(&f.bottom), cm.g_inv(eval(&f.top)))
        });
        objects += u128::from(ok);
    }
    (objects, objects * (nh as u128).pow(ne as u32))
}

fn ac4() -> Criterion {
    let cm = catalog::z2_z4();
    let b = Budget::default();
    let (g, h) = (cm.g_order() as u128, cm.h_order() as u128);
    let kernel = cm.kernel().len() as u128;
    let commutator_pairs: u128 = cm
        .g_elements()
        .flat_map(|a| cm.g_elements().map(move |b| (a, b)))
        .map(|(a, b)| {
            let c = cm.g_mul(cm.g_mul(a, b), cm.g_mul(cm.g_inv(a), cm.g_inv(b)));
            cm.fiber(c).len() as u128
        })
        .sum();
    let expected = [
        (Example::S1, g, Some(g * h), 2u128, Some(8u128)),
        (Example::S2, g * kernel, None, 4, None),
        (Example::T2, commutator_pairs, None, 8, None),
    ];
    let mut passed = true;
    let mut lines = Vec::new();
    for (ex, formula, formula_m, literal, literal_m) in expected {
        let d = build_example(ex);
        let objects = moduli::count_objects(&cm, &d, &b).unwrap();
        let morphisms = moduli::count_morphisms(&cm, &d, &b).unwrap();
        let (bo, bm) = brute_force_counts(&cm, &example_def(ex));
        let ok = objects == bo
            && morphisms == bm
            && objects == formula
            && objects == literal
            && formula_m.is_none_or(|f| f == morphisms)
            && literal_m.is_none_or(|l| l == morphisms);
        passed &= ok;
        lines.push(format!("{ex}: objects {objects} (brute {bo}), morphisms {morphisms} (brute {bm})"));
    }
    Criterion {
        passed,
        detail: lines.join("; "),
    }
}

fn ac5() -> Criterion {
    summarize(&[laws::sphere_factorization(&catalog::z2_z4(), &exhaustive()).unwrap()])
}

fn word(steps: &[(&str, Direction)]) -> Vec<(String, Direction)> {
    steps.iter().map(|(e, d)| (e.to_string(), *d)).collect()
}

fn ac6() -> Criterion {
    use Direction::{Forward as F, Reverse as R};
    let t2 = build_example(Example::T2);
    let t2_changes = [
        ChangeSpec::EdgeFlip { edge: "e1".into() },
        ChangeSpec::FaceVflip { face: "f".into() },
        ChangeSpec::FaceHflip { face: "f".into() },
        ChangeSpec::BigonMove {
            face: "f".into(),
            source: "v".into(),
            target: "v".into(),
            nu: word(&[("e1", R)]),
            omega: word(&[("e2", F)]),
        },
    ];
    let cfg = exhaustive();
    let mut suites = Vec::new();
    for cm in [catalog::z2_z4(), catalog::s3_conjugation()] {
        for spec in &t2_changes {
            suites.push(laws::rediscretization(&cm, &t2, std::slice::from_ref(spec), &cfg).unwrap());
        }
    }
    let two_face = moduli::two_face_bigon();
    let multi = ChangeSpec::BigonMove {
        face: "f".into(),
        source: "x2".into(),
        target: "y1".into(),
        nu: word(&[("e2", R), ("e1", R)]),
        omega: word(&[("d3", R), ("d2", R)]),
    };
    let sampled = LawConfig {
        budget: Budget::default(),
        sampling: Sampling::default(),
    };
    for cm in [catalog::z2_z4(), catalog::z2_z3_inversion()] {
        suites.push(laws::rediscretization(&cm, &two_face, std::slice::from_ref(&multi), &sampled).unwrap());
    }
    summarize(&suites)
}

fn ac7() -> Criterion {
    let cm = catalog::s3_conjugation();
    let d = build_example(Example::S1);
    let cfg = LawConfig {
        budget: Budget::default(),
        sampling: Sampling {
            max_cases: DOUBLE_GROUPOID_SAMPLE,
            seed: 0,
        },
    };
    let suite = laws::double_groupoid(&cm, &d, &cfg).unwrap();
    let sampled: Vec<&str> = suite.outcomes.iter().filter(|o| o.sampled).map(|o| o.name.as_str()).collect();
    let mut c = summarize(&[suite.clone()]);
    if !sampled.is_empty() {
        c.detail.push_str(&format!("; sampled (seed 0): {}", sampled.join(", ")));
    }
    c
}

fn ac8() -> Criterion {
    let valid = common::check_valid_corpus();
    let malformed = common::check_malformed_corpus();
    let examples_present = ["s1", "s2", "t2"]
        .iter()
        .all(|n| valid.files.iter().any(|f| f.starts_with(n) && f.contains(DocumentKind::Discretization.name())));
    let passed = valid.failures.is_empty()
        && valid.files.len() >= 50
        && examples_present
        && malformed.failures.is_empty()
        && malformed.files.len() >= 20;
    let mut detail = format!(
        "{} valid files round-trip ({} failures), {} malformed files with stable diagnostics ({} failures)",
        valid.files.len(),
        valid.failures.len(),
        malformed.files.len(),
        malformed.failures.len()
    );
    for f in valid.failures.iter().chain(&malformed.failures) {
        detail.push_str(&format!("\n    {f}"));
    }
    Criterion { passed, detail }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Criterion); 8] = [
        ("AC1 square-calculus laws on three crossed modules", ac1),
        ("AC2 connection groupoid on the torus", ac2),
        ("AC3 gauge action on circle, sphere and torus", ac3),
        ("AC4 example counts against brute force", ac4),
        ("AC5 sphere factorization", ac5),
        ("AC6 rediscretization isomorphisms", ac6),
        ("AC7 transformation double groupoid on the circle", ac7),
        ("AC8 parser round trip and diagnostics", ac8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let c = run();
        let tag = if c.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!c.passed);
        println!("[{tag}] {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), c.detail);
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
