use proptest::prelude::*;

use hgt_core::complex::{evaluate_word_g, Direction, EdgeDef, FaceDef, Step};
use hgt_core::format::{self, Document, DocumentKind};
use hgt_core::moduli::{build_example, Example};
use hgt_core::rediscretize::{apply_change, inverse_change, transport_object};
use hgt_core::{catalog, ChangeSpec, Conn, ConnObject, CrossedModule, DiscretizationDef, EdgeWord, FiniteGroup, Gauge, GaugeObject};

/// Abelian crossed modules `Z_m → Z_n`, `h ↦ k·h`, with trivial action or
/// with `Z₂` inverting `Z_m` (then `∂` is trivial), plus the adjoint modules.
fn crossed_module() -> impl Strategy<Value = CrossedModule> {
    let hom = (1usize..=6, 1usize..=6, 0usize..6)
        .prop_filter("k·m ≡ 0 mod n", |(m, n, k)| (k * m) % n == 0)
        .prop_map(|(m, n, k)| {
            CrossedModule::from_parts(FiniteGroup::cyclic(n), FiniteGroup::cyclic(m), |_, h| h, move |h| (k * h) % n).unwrap()
        });
    let inversion = (2usize..=7).prop_map(|m| {
        CrossedModule::from_parts(FiniteGroup::cyclic(2), FiniteGroup::cyclic(m), move |g, h| if g == 0 { h } else { (m - h) % m }, |_| 0)
            .unwrap()
    });
    let adjoint = prop_oneof![
        Just(catalog::s3_conjugation()),
        (1usize..=5).prop_map(|n| catalog::adjoint(FiniteGroup::cyclic(n))),
        Just(catalog::with_trivial_h(FiniteGroup::symmetric(3))),
    ];
    prop_oneof![hom, inversion, adjoint]
}

/// A crossed module with `count` random (top, label) index pairs.
fn module_with_indices(count: usize) -> impl Strategy<Value = (CrossedModule, Vec<(usize, usize)>)> {
    crossed_module().prop_flat_map(move |cm| {
        let (g, h) = (cm.g_order(), cm.h_order());
        (Just(cm), proptest::collection::vec((0..g, 0..h), count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn horizontal_composition_is_associative((cm, ix) in module_with_indices(3)) {
        let sq: Vec<_> = ix.iter().map(|&(g, h)| cm.square(cm.g_at(g), cm.h_at(h))).collect();
        let l = cm.hcompose(cm.hcompose(sq[0], sq[1]).unwrap(), sq[2]).unwrap();
        let r = cm.hcompose(sq[0], cm.hcompose(sq[1], sq[2]).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert!(cm.is_valid_square(&l));
    }

    #[test]
    fn vertical_composition_is_associative((cm, ix) in module_with_indices(3)) {
        let a = cm.square(cm.g_at(ix[0].0), cm.h_at(ix[0].1));
        let b = cm.square(a.bottom(), cm.h_at(ix[1].1));
        let c = cm.square(b.bottom(), cm.h_at(ix[2].1));
        let l = cm.vcompose(cm.vcompose(a, b).unwrap(), c).unwrap();
        let r = cm.vcompose(a, cm.vcompose(b, c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!((l.top(), l.bottom()), (a.top(), c.bottom()));
    }

    #[test]
    fn interchange_holds((cm, ix) in module_with_indices(4)) {
        let a = cm.square(cm.g_at(ix[0].0), cm.h_at(ix[0].1));
        let b = cm.square(cm.g_at(ix[1].0), cm.h_at(ix[1].1));
        let c = cm.square(a.bottom(), cm.h_at(ix[2].1));
        let d = cm.square(b.bottom(), cm.h_at(ix[3].1));
        let rows = cm.vcompose(cm.hcompose(a, b).unwrap(), cm.hcompose(c, d).unwrap()).unwrap();
        let cols = cm.hcompose(cm.vcompose(a, c).unwrap(), cm.vcompose(b, d).unwrap()).unwrap();
        prop_assert_eq!(rows, cols);
    }

    #[test]
    fn inverses_cancel((cm, ix) in module_with_indices(1)) {
        let a = cm.square(cm.g_at(ix[0].0), cm.h_at(ix[0].1));
        let hi = cm.hinverse(a).unwrap();
        prop_assert_eq!(cm.hcompose(a, hi).unwrap(), cm.identity_square(cm.g_one()));
        prop_assert_eq!(cm.hcompose(hi, a).unwrap(), cm.identity_square(cm.g_one()));
        let vi = cm.vinverse(a).unwrap();
        prop_assert_eq!(cm.vcompose(a, vi).unwrap(), cm.identity_square(a.top()));
        prop_assert_eq!(cm.vcompose(vi, a).unwrap(), cm.identity_square(a.bottom()));
    }
}

fn word(n_edges: usize) -> impl Strategy<Value = Vec<Step>> {
    proptest::collection::vec((0..n_edges, any::<bool>()), 0..8).prop_map(|steps| {
        steps
            .into_iter()
            .map(|(e, fwd)| if fwd { Step::forward(e) } else { Step::reverse(e) })
            .collect()
    })
}

proptest! {
    #[test]
    fn word_evaluation_is_a_monoid_map(
        (cm, g, u, v) in crossed_module().prop_flat_map(|cm| {
            let n = cm.g_order();
            (Just(cm), proptest::collection::vec(0..n, 3), word(3), word(3))
        })
    ) {
        let g: Vec<_> = g.into_iter().map(|i| cm.g_at(i)).collect();
        let (u, v) = (EdgeWord::new(u), EdgeWord::new(v));
        let eval = |w: &EdgeWord| evaluate_word_g(&cm, &g, w).unwrap();
        prop_assert_eq!(eval(&u.concat(&v)), cm.g_mul(eval(&u), eval(&v)));
        prop_assert_eq!(eval(&u.reversed()), cm.g_inv(eval(&u)));
        prop_assert_eq!(eval(&u.free_reduced()), eval(&u));
        prop_assert_eq!(eval(&EdgeWord::new(vec![])), cm.g_one());
    }
}

fn discretization_def() -> impl Strategy<Value = DiscretizationDef> {
    (1usize..4, 1usize..5).prop_flat_map(|(nv, ne)| {
        let edges = proptest::collection::vec((0..nv, 0..nv), ne);
        let step = (0..ne, any::<bool>());
        let face = (0..nv, 0..nv, proptest::collection::vec(step.clone(), 1..4), proptest::collection::vec(step, 1..4));
        (Just(nv), edges, proptest::collection::vec(face, 0..3)).prop_map(|(nv, edges, faces)| {
            let dir = |fwd: bool| if fwd { Direction::Forward } else { Direction::Reverse };
            DiscretizationDef {
                vertices: (0..nv).map(|i| format!("v{i}")).collect(),
                edges: edges
                    .iter()
                    .enumerate()
                    .map(|(i, &(s, t))| EdgeDef {
                        id: format!("e{i}"),
                        src: format!("v{s}"),
                        tgt: format!("v{t}"),
                    })
                    .collect(),
                faces: faces
                    .into_iter()
                    .enumerate()
                    .map(|(i, (v, w, top, bottom))| FaceDef {
                        id: format!("f{i}"),
                        v: format!("v{v}"),
                        w: format!("v{w}"),
                        top: top.into_iter().map(|(e, f)| (format!("e{e}"), dir(f))).collect(),
                        bottom: bottom.into_iter().map(|(e, f)| (format!("e{e}"), dir(f))).collect(),
                    })
                    .collect(),
            }
        })
    })
}

proptest! {
    #[test]
    fn serialization_round_trips(def in discretization_def()) {
        let doc = Document::Discretization(def);
        let text = format::serialize(&doc);
        let back = format::parse_str(&text, DocumentKind::Discretization).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(format::serialize(&back), text.clone());
        // whitespace and key order do not matter
        let compact = serde_json::to_string(&serde_json::from_str::<serde_json::Value>(&text).unwrap()).unwrap();
        prop_assert_eq!(format::parse_str(&compact, DocumentKind::Discretization).unwrap(), doc);
    }

    #[test]
    fn damaged_documents_give_sorted_diagnostics(def in discretization_def(), cut in any::<prop::sample::Index>(), len in 1usize..6) {
        let text = format::serialize(&Document::Discretization(def));
        let start = cut.index(text.len());
        let end = (start + len).min(text.len());
        let damaged = [&text.as_bytes()[..start], &text.as_bytes()[end..]].concat();
        if let Err(diags) = format::parse(&damaged, DocumentKind::Discretization) {
            prop_assert!(!diags.is_empty());
            prop_assert!(diags.windows(2).all(|w| w[0] <= w[1]));
            prop_assert!(diags.iter().all(|d| d.offset <= damaged.len() && d.line >= 1 && d.column >= 1));
            prop_assert_eq!(format::parse(&damaged, DocumentKind::Discretization).unwrap_err(), diags);
        }
    }
}

fn torus_connection(cm: &CrossedModule, pick: usize) -> ConnObject {
    let d = build_example(Example::T2);
    let objects = Conn::new(cm, &d).enumerate_objects(&hgt_core::Budget::default()).unwrap();
    objects[pick % objects.len()].clone()
}

proptest! {
    #[test]
    fn gauge_action_is_functorial_on_the_torus(pick in any::<usize>(), a in any::<usize>(), b in any::<usize>()) {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::T2);
        let gauge = Gauge::new(&cm, &d);
        let x = torus_connection(&cm, pick);
        let g1 = GaugeObject { gamma: vec![cm.g_at(a % 6)] };
        let g2 = GaugeObject { gamma: vec![cm.g_at(b % 6)] };
        let once = gauge.act_object(&gauge.tensor_objects(&g1, &g2).unwrap(), &x).unwrap();
        let twice = gauge.act_object(&g1, &gauge.act_object(&g2, &x).unwrap()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn changes_round_trip_on_the_torus(pick in any::<usize>(), kind in 0usize..4) {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::T2);
        let spec = match kind {
            0 => ChangeSpec::EdgeFlip { edge: "e2".into() },
            1 => ChangeSpec::FaceVflip { face: "f".into() },
            2 => ChangeSpec::FaceHflip { face: "f".into() },
            _ => ChangeSpec::BigonMove {
                face: "f".into(),
                source: "v".into(),
                target: "v".into(),
                nu: vec![("e2".into(), Direction::Forward)],
                omega: vec![("e1".into(), Direction::Reverse)],
            },
        };
        let x = torus_connection(&cm, pick);
        let d2 = apply_change(&d, &spec).unwrap();
        let y = transport_object(&cm, &d, &spec, &x).unwrap();
        prop_assert!(Conn::new(&cm, &d2).is_object(&y));
        let back = inverse_change(&d, &spec).unwrap();
        prop_assert_eq!(transport_object(&cm, &d2, &back, &y).unwrap(), x);
    }
}
