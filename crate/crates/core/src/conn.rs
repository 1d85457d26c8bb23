//! The groupoid of discretized connections.
//!
//! Objects are pairs `(g, h)` with `g: E → G`, `h: F → H` and
//! `∂(h(f)) = g(d)·g(e)⁻¹` on every face. A morphism out of `(g, h)` is an
//! edge labelling `η: E → H`; its target is `g'(e) = ∂(η(e))·g(e)` on edges and
//! the unique `h'` making the bigon cylinder of each face commute.

use crate::assign::{for_each_assignment, pow_saturating, Budget};
use crate::complex::{evaluate_word_g, evaluate_word_square, Discretization};
use crate::crossed_module::{CrossedModule, GElem, HElem, Square};
use crate::error::{Error, Result};
use crate::report::Report;

/// A connection: `g` indexed by edge, `h` indexed by face.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnObject {
    pub g: Vec<GElem>,
    pub h: Vec<HElem>,
}

/// A morphism `((g, h), η)` of the connection groupoid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnMorphism {
    pub source: ConnObject,
    pub eta: Vec<HElem>,
}

/// The groupoid `Conn` for a fixed crossed module and discretization.
#[derive(Debug, Clone, Copy)]
pub struct Conn<'a> {
    cm: &'a CrossedModule,
    disc: &'a Discretization,
}

impl<'a> Conn<'a> {
    pub fn new(cm: &'a CrossedModule, disc: &'a Discretization) -> Self {
        Self { cm, disc }
    }

    pub fn crossed_module(&self) -> &'a CrossedModule {
        self.cm
    }

    pub fn discretization(&self) -> &'a Discretization {
        self.disc
    }

    /// Checks totality, element ranges and the face condition.
    pub fn validate_object(&self, x: &ConnObject) -> Report {
        let mut report = Report::new();
        let (cm, d) = (self.cm, self.disc);
        if x.g.len() != d.edge_count() {
            report.malformed(
                "missing-assignment",
                format!("g assigns {} edges, discretization has {}", x.g.len(), d.edge_count()),
            );
        }
        if x.h.len() != d.face_count() {
            report.malformed(
                "missing-assignment",
                format!("h assigns {} faces, discretization has {}", x.h.len(), d.face_count()),
            );
        }
        if x.g.iter().any(|g| g.index() >= cm.g_order()) || x.h.iter().any(|h| h.index() >= cm.h_order()) {
            report.dangling("unknown-element", "assignment uses an element outside the crossed module");
        }
        if !report.is_empty() {
            return report;
        }
        for face in d.faces() {
            let top = evaluate_word_g(cm, &x.g, face.one_source()).expect("total");
            let bottom = evaluate_word_g(cm, &x.g, face.one_target()).expect("total");
            let i = d.face_index(face.id()).unwrap();
            let lhs = cm.bnd(x.h[i]);
            let rhs = cm.g_mul(bottom, cm.g_inv(top));
            if lhs != rhs {
                report.violation(
                    "face-condition",
                    format!(
                        "face {}: ∂(h) = {} but g(d)g(e)⁻¹ = {}",
                        face.id(),
                        cm.g_name(lhs),
                        cm.g_name(rhs)
                    ),
                );
            }
        }
        report
    }

    pub fn is_object(&self, x: &ConnObject) -> bool {
        self.validate_object(x).is_empty()
    }

    fn require_object(&self, x: &ConnObject) -> Result<()> {
        self.validate_object(x).into_result().map_err(Error::InvalidObject)
    }

    fn require_eta(&self, eta: &[HElem]) -> Result<()> {
        if eta.len() != self.disc.edge_count() {
            return Err(Error::MissingAssignment(format!(
                "η assigns {} edges, discretization has {}",
                eta.len(),
                self.disc.edge_count()
            )));
        }
        if eta.iter().any(|h| h.index() >= self.cm.h_order()) {
            return Err(Error::IllFormed("η uses an element outside H".into()));
        }
        Ok(())
    }

    /// Per-edge squares `(g(e), ∂(η(e))·g(e), η(e))`.
    pub fn edge_squares(&self, g: &[GElem], eta: &[HElem]) -> Vec<Square> {
        g.iter().zip(eta).map(|(&g, &eta)| self.cm.square(g, eta)).collect()
    }

    /// The face square `(g(e), g(d), h(f))` of a valid object.
    pub fn face_square(&self, x: &ConnObject, face: usize) -> Result<Square> {
        let f = self.disc.face(face);
        let top = evaluate_word_g(self.cm, &x.g, f.one_source())?;
        let bottom = evaluate_word_g(self.cm, &x.g, f.one_target())?;
        self.cm.square_checked(top, bottom, x.h[face])
    }

    pub fn identity(&self, x: &ConnObject) -> ConnMorphism {
        ConnMorphism {
            source: x.clone(),
            eta: vec![self.cm.h_one(); self.disc.edge_count()],
        }
    }

    /// Target of a morphism. `h'(f)` is isolated from the commuting bigon
    /// cylinder: `[η(e)]^{-v}` over `[h(f)]` over `[η(d)]`, stacked top to bottom.
    pub fn target(&self, m: &ConnMorphism) -> Result<ConnObject> {
        self.require_object(&m.source)?;
        self.require_eta(&m.eta)?;
        Ok(self.target_unchecked(m))
    }

    pub(crate) fn target_unchecked(&self, m: &ConnMorphism) -> ConnObject {
        let cm = self.cm;
        let squares = self.edge_squares(&m.source.g, &m.eta);
        let g2: Vec<GElem> = squares.iter().map(Square::bottom).collect();
        let h2 = (0..self.disc.face_count())
            .map(|i| {
                let f = self.disc.face(i);
                let along_e = evaluate_word_square(cm, &squares, f.one_source()).expect("total");
                let along_d = evaluate_word_square(cm, &squares, f.one_target()).expect("total");
                let face = cm.square(along_e.top(), m.source.h[i]);
                let upper = cm.vcompose(cm.vinverse(along_e).unwrap(), face).expect("face square starts at g(e)");
                let stacked = cm.vcompose(upper, along_d).expect("face square ends at g(d)");
                stacked.label()
            })
            .collect();
        ConnObject { g: g2, h: h2 }
    }

    /// `m2 ∘ m1`, defined when `m2` starts where `m1` ends.
    pub fn compose(&self, m2: &ConnMorphism, m1: &ConnMorphism) -> Result<ConnMorphism> {
        let mid = self.target(m1)?;
        if mid != m2.source {
            return Err(Error::NotComposable("source of the second morphism is not the target of the first".into()));
        }
        self.require_eta(&m2.eta)?;
        Ok(ConnMorphism {
            source: m1.source.clone(),
            eta: m2.eta.iter().zip(&m1.eta).map(|(&a, &b)| self.cm.h_mul(a, b)).collect(),
        })
    }

    /// Inverse morphism: pointwise vertical inverse of the edge squares,
    /// starting at the target.
    pub fn inverse(&self, m: &ConnMorphism) -> Result<ConnMorphism> {
        let source = self.target(m)?;
        Ok(ConnMorphism {
            source,
            eta: m.eta.iter().map(|&h| self.cm.h_inv(h)).collect(),
        })
    }

    /// `|G|^|E| · |H|^|F|`, the number of raw assignments.
    pub fn object_bound(&self) -> u128 {
        pow_saturating(self.cm.g_order(), self.disc.edge_count())
            .saturating_mul(pow_saturating(self.cm.h_order(), self.disc.face_count()))
    }

    /// Every object, ordered by `g` then `h` (cell order, element index).
    ///
    /// Walks `g`-assignments and, per face, the fiber of `∂` over the required
    /// value instead of all of `H^F`.
    pub fn enumerate_objects(&self, budget: &Budget) -> Result<Vec<ConnObject>> {
        budget.check(self.object_bound())?;
        let cm = self.cm;
        let mut out = Vec::new();
        let mut g = vec![cm.g_one(); self.disc.edge_count()];
        for_each_assignment(self.disc.edge_count(), cm.g_order(), |digits| {
            for (slot, &k) in g.iter_mut().zip(digits) {
                *slot = cm.g_at(k);
            }
            let fibers: Vec<&[HElem]> = self
                .disc
                .faces()
                .iter()
                .map(|f| {
                    let top = evaluate_word_g(cm, &g, f.one_source()).unwrap();
                    let bottom = evaluate_word_g(cm, &g, f.one_target()).unwrap();
                    cm.fiber(cm.g_mul(bottom, cm.g_inv(top)))
                })
                .collect();
            if fibers.iter().any(|f| f.is_empty()) {
                return;
            }
            let mut idx = vec![0usize; fibers.len()];
            loop {
                out.push(ConnObject {
                    g: g.clone(),
                    h: idx.iter().zip(&fibers).map(|(&i, f)| f[i]).collect(),
                });
                let mut i = fibers.len();
                loop {
                    if i == 0 {
                        return;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < fibers[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        });
        Ok(out)
    }

    /// `|H|^|E|`, the number of morphisms out of each object.
    pub fn morphisms_per_object(&self) -> u128 {
        pow_saturating(self.cm.h_order(), self.disc.edge_count())
    }

    pub fn count_morphisms(&self, budget: &Budget) -> Result<u128> {
        let objects = self.enumerate_objects(budget)?.len() as u128;
        Ok(objects.saturating_mul(self.morphisms_per_object()))
    }

    /// Every morphism out of `x`, ordered by `η`.
    pub fn morphisms_from(&self, x: &ConnObject) -> Vec<ConnMorphism> {
        let mut out = Vec::new();
        for_each_assignment(self.disc.edge_count(), self.cm.h_order(), |digits| {
            out.push(ConnMorphism {
                source: x.clone(),
                eta: digits.iter().map(|&k| self.cm.h_at(k)).collect(),
            });
        });
        out
    }

    /// Every morphism, grouped by source object.
    pub fn enumerate_morphisms(&self, budget: &Budget) -> Result<Vec<ConnMorphism>> {
        let objects = self.enumerate_objects(budget)?;
        budget.check((objects.len() as u128).saturating_mul(self.morphisms_per_object()))?;
        Ok(objects.iter().flat_map(|x| self.morphisms_from(x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::moduli::{build_example, Example};

    fn named(cm: &CrossedModule, g: &[&str], h: &[&str]) -> ConnObject {
        ConnObject {
            g: g.iter().map(|s| cm.g_elem(s).unwrap()).collect(),
            h: h.iter().map(|s| cm.h_elem(s).unwrap()).collect(),
        }
    }

    #[test]
    fn sphere_objects_need_kernel_labels() {
        let cm = catalog::z2_z4();
        let d = build_example(Example::S2);
        let conn = Conn::new(&cm, &d);
        assert!(conn.is_object(&named(&cm, &["1"], &["2"])));
        assert!(conn.is_object(&named(&cm, &["0"], &["0"])));
        let r = conn.validate_object(&named(&cm, &["1"], &["1"]));
        assert!(r.has_code("face-condition"));
        assert!(r.issues()[0].message.contains("face f"));
    }

    #[test]
    fn torus_commutator_condition() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::T2);
        let conn = Conn::new(&cm, &d);
        let (g1, g2) = (cm.g_elem("(12)").unwrap(), cm.g_elem("(123)").unwrap());
        let comm = cm.g_mul(cm.g_mul(g1, g2), cm.g_mul(cm.g_inv(g1), cm.g_inv(g2)));
        let (e1, e2) = (d.edge_index("e1").unwrap(), d.edge_index("e2").unwrap());
        let mut g = vec![cm.g_one(); 2];
        g[e1] = g1;
        g[e2] = g2;
        let h = cm.h_elem(cm.g_name(comm)).unwrap();
        assert!(conn.is_object(&ConnObject { g: g.clone(), h: vec![h] }));
        assert!(!conn.is_object(&ConnObject { g, h: vec![cm.h_one()] }));
    }

    #[test]
    fn missing_assignments_reported() {
        let cm = catalog::z2_z4();
        let d = build_example(Example::T2);
        let conn = Conn::new(&cm, &d);
        let r = conn.validate_object(&ConnObject { g: vec![cm.g_one()], h: vec![] });
        assert!(r.has_code("missing-assignment"));
    }

    #[test]
    fn identity_morphism_has_source_as_target() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::T2);
        let conn = Conn::new(&cm, &d);
        for x in conn.enumerate_objects(&Budget::default()).unwrap() {
            assert_eq!(conn.target(&conn.identity(&x)).unwrap(), x);
        }
    }

    #[test]
    fn sphere_target_is_vertical_conjugate() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::S2);
        let conn = Conn::new(&cm, &d);
        for x in conn.enumerate_objects(&Budget::default()).unwrap() {
            for m in conn.morphisms_from(&x) {
                let y = conn.target(&m).unwrap();
                let eta = m.eta[0];
                // h' = η h η⁻¹
                let expected = cm.h_mul(cm.h_mul(eta, x.h[0]), cm.h_inv(eta));
                assert_eq!(y.h[0], expected);
                assert_eq!(y.g[0], cm.g_mul(cm.bnd(eta), x.g[0]));
            }
        }
    }

    #[test]
    fn compose_and_inverse() {
        let cm = catalog::z2_z3_inversion();
        let d = build_example(Example::T2);
        let conn = Conn::new(&cm, &d);
        let objs = conn.enumerate_objects(&Budget::default()).unwrap();
        let m = conn.morphisms_from(&objs[3]).swap_remove(5);
        let inv = conn.inverse(&m).unwrap();
        assert_eq!(conn.compose(&inv, &m).unwrap(), conn.identity(&m.source));
        assert_eq!(conn.compose(&m, &inv).unwrap(), conn.identity(&inv.source));
        assert_eq!(conn.inverse(&inv).unwrap(), m);
        assert_eq!(conn.compose(&conn.identity(&inv.source), &m).unwrap(), m);
        assert_eq!(conn.compose(&m, &conn.identity(&m.source)).unwrap(), m);
        let other = conn.identity(&objs[0]);
        if objs[0] != inv.source {
            assert!(matches!(conn.compose(&other, &m), Err(Error::NotComposable(_))));
        }
    }

    #[test]
    fn invalid_source_rejected() {
        let cm = catalog::z2_z4();
        let d = build_example(Example::S2);
        let conn = Conn::new(&cm, &d);
        let bad = ConnMorphism {
            source: named(&cm, &["0"], &["1"]),
            eta: vec![cm.h_one()],
        };
        assert!(matches!(conn.target(&bad), Err(Error::InvalidObject(_))));
    }

    #[test]
    fn budget_refusal_reports_bound() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::T2);
        let conn = Conn::new(&cm, &d);
        assert_eq!(conn.object_bound(), 216);
        assert_eq!(
            conn.enumerate_objects(&Budget::new(100)),
            Err(Error::BudgetExceeded { bound: 216, budget: 100 })
        );
    }
}
