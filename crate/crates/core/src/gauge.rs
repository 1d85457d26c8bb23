//! The gauge categorical group and its strict action on connections.
//!
//! Objects are vertex labellings `γ: V → G`; a morphism `(γ, χ)` has target
//! `γ'(v) = ∂(χ(v))·γ(v)`. Composition is pointwise vertical composition of
//! the vertex squares, the tensor product is pointwise horizontal composition.

use crate::assign::{for_each_assignment, pow_saturating, Budget};
use crate::complex::Discretization;
use crate::conn::{Conn, ConnMorphism, ConnObject};
use crate::crossed_module::{CrossedModule, GElem, HElem, Square};
use crate::error::{Error, Result};
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaugeObject {
    pub gamma: Vec<GElem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaugeMorphism {
    pub source: GaugeObject,
    pub chi: Vec<HElem>,
}

#[derive(Debug, Clone, Copy)]
pub struct Gauge<'a> {
    cm: &'a CrossedModule,
    disc: &'a Discretization,
}

impl<'a> Gauge<'a> {
    pub fn new(cm: &'a CrossedModule, disc: &'a Discretization) -> Self {
        Self { cm, disc }
    }

    pub fn crossed_module(&self) -> &'a CrossedModule {
        self.cm
    }

    pub fn discretization(&self) -> &'a Discretization {
        self.disc
    }

    fn conn(&self) -> Conn<'a> {
        Conn::new(self.cm, self.disc)
    }

    pub fn validate_object(&self, gamma: &GaugeObject) -> Report {
        let mut report = Report::new();
        if gamma.gamma.len() != self.disc.vertex_count() {
            report.malformed(
                "missing-assignment",
                format!(
                    "γ assigns {} vertices, discretization has {}",
                    gamma.gamma.len(),
                    self.disc.vertex_count()
                ),
            );
        } else if gamma.gamma.iter().any(|g| g.index() >= self.cm.g_order()) {
            report.dangling("unknown-element", "γ uses an element outside G");
        }
        report
    }

    pub fn validate_morphism(&self, m: &GaugeMorphism) -> Report {
        let mut report = self.validate_object(&m.source);
        if m.chi.len() != self.disc.vertex_count() {
            report.malformed(
                "missing-assignment",
                format!("χ assigns {} vertices, discretization has {}", m.chi.len(), self.disc.vertex_count()),
            );
        } else if m.chi.iter().any(|h| h.index() >= self.cm.h_order()) {
            report.dangling("unknown-element", "χ uses an element outside H");
        }
        report
    }

    fn require_object(&self, gamma: &GaugeObject) -> Result<()> {
        self.validate_object(gamma).into_result().map_err(Error::InvalidObject)
    }

    fn require_morphism(&self, m: &GaugeMorphism) -> Result<()> {
        self.validate_morphism(m).into_result().map_err(Error::InvalidObject)
    }

    /// The tensor unit `γ ≡ 1`.
    pub fn unit(&self) -> GaugeObject {
        GaugeObject {
            gamma: vec![self.cm.g_one(); self.disc.vertex_count()],
        }
    }

    pub fn identity(&self, gamma: &GaugeObject) -> GaugeMorphism {
        GaugeMorphism {
            source: gamma.clone(),
            chi: vec![self.cm.h_one(); gamma.gamma.len()],
        }
    }

    /// Per-vertex squares `(γ(v), γ'(v), χ(v))`.
    pub fn vertex_squares(&self, m: &GaugeMorphism) -> Vec<Square> {
        m.source.gamma.iter().zip(&m.chi).map(|(&g, &h)| self.cm.square(g, h)).collect()
    }

    fn from_squares(squares: &[Square]) -> GaugeMorphism {
        GaugeMorphism {
            source: GaugeObject {
                gamma: squares.iter().map(Square::top).collect(),
            },
            chi: squares.iter().map(Square::label).collect(),
        }
    }

    pub fn target(&self, m: &GaugeMorphism) -> GaugeObject {
        GaugeObject {
            gamma: self.vertex_squares(m).iter().map(Square::bottom).collect(),
        }
    }

    /// `m2 ∘ m1`: pointwise vertical composition.
    pub fn compose(&self, m2: &GaugeMorphism, m1: &GaugeMorphism) -> Result<GaugeMorphism> {
        self.require_morphism(m1)?;
        self.require_morphism(m2)?;
        if self.target(m1) != m2.source {
            return Err(Error::NotComposable("gauge morphisms: target of the first is not the source of the second".into()));
        }
        let squares = self
            .vertex_squares(m1)
            .into_iter()
            .zip(self.vertex_squares(m2))
            .map(|(a, b)| self.cm.vcompose(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_squares(&squares))
    }

    /// `γ̃ ⊗ γ`, pointwise product with `γ̃` on the left.
    pub fn tensor_objects(&self, left: &GaugeObject, right: &GaugeObject) -> Result<GaugeObject> {
        self.require_object(left)?;
        self.require_object(right)?;
        Ok(GaugeObject {
            gamma: left.gamma.iter().zip(&right.gamma).map(|(&a, &b)| self.cm.g_mul(a, b)).collect(),
        })
    }

    /// `(γ̃, χ̃) ⊗ (γ, χ) = (γ̃γ, χ̃(γ̃▷χ))`: pointwise horizontal composition.
    pub fn tensor(&self, left: &GaugeMorphism, right: &GaugeMorphism) -> Result<GaugeMorphism> {
        self.require_morphism(left)?;
        self.require_morphism(right)?;
        let squares = self
            .vertex_squares(left)
            .into_iter()
            .zip(self.vertex_squares(right))
            .map(|(a, b)| self.cm.hcompose(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_squares(&squares))
    }

    /// Inverse for composition: pointwise vertical inverse.
    pub fn compose_inverse(&self, m: &GaugeMorphism) -> Result<GaugeMorphism> {
        self.require_morphism(m)?;
        let squares = self
            .vertex_squares(m)
            .into_iter()
            .map(|s| self.cm.vinverse(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_squares(&squares))
    }

    /// Inverse for the tensor product: pointwise horizontal inverse.
    pub fn tensor_inverse(&self, m: &GaugeMorphism) -> Result<GaugeMorphism> {
        self.require_morphism(m)?;
        let squares = self
            .vertex_squares(m)
            .into_iter()
            .map(|s| self.cm.hinverse(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_squares(&squares))
    }

    pub fn tensor_inverse_object(&self, gamma: &GaugeObject) -> GaugeObject {
        GaugeObject {
            gamma: gamma.gamma.iter().map(|&g| self.cm.g_inv(g)).collect(),
        }
    }

    pub fn object_bound(&self) -> u128 {
        pow_saturating(self.cm.g_order(), self.disc.vertex_count())
    }

    pub fn enumerate_objects(&self, budget: &Budget) -> Result<Vec<GaugeObject>> {
        budget.check(self.object_bound())?;
        let mut out = Vec::new();
        for_each_assignment(self.disc.vertex_count(), self.cm.g_order(), |d| {
            out.push(GaugeObject {
                gamma: d.iter().map(|&k| self.cm.g_at(k)).collect(),
            });
        });
        Ok(out)
    }

    pub fn morphisms_from(&self, gamma: &GaugeObject) -> Vec<GaugeMorphism> {
        let mut out = Vec::new();
        for_each_assignment(self.disc.vertex_count(), self.cm.h_order(), |d| {
            out.push(GaugeMorphism {
                source: gamma.clone(),
                chi: d.iter().map(|&k| self.cm.h_at(k)).collect(),
            });
        });
        out
    }

    pub fn enumerate_morphisms(&self, budget: &Budget) -> Result<Vec<GaugeMorphism>> {
        let bound = self
            .object_bound()
            .saturating_mul(pow_saturating(self.cm.h_order(), self.disc.vertex_count()));
        budget.check(bound)?;
        Ok(self
            .enumerate_objects(budget)?
            .iter()
            .flat_map(|g| self.morphisms_from(g))
            .collect())
    }

    /// `γ.(g, h)`: `g(e) ↦ γ(v)g(e)γ(w)⁻¹` and `h(f) ↦ γ(v_f)▷h(f)`.
    pub fn act_object(&self, gamma: &GaugeObject, x: &ConnObject) -> Result<ConnObject> {
        self.require_object(gamma)?;
        self.conn().validate_object(x).into_result().map_err(Error::InvalidObject)?;
        Ok(self.act_object_unchecked(gamma, x))
    }

    pub(crate) fn act_object_unchecked(&self, gamma: &GaugeObject, x: &ConnObject) -> ConnObject {
        let cm = self.cm;
        let g = self
            .disc
            .edges()
            .iter()
            .zip(&x.g)
            .map(|(e, &g)| cm.g_mul(cm.g_mul(gamma.gamma[e.src()], g), cm.g_inv(gamma.gamma[e.tgt()])))
            .collect();
        let h = self
            .disc
            .faces()
            .iter()
            .zip(&x.h)
            .map(|(f, &h)| cm.act(gamma.gamma[f.source()], h))
            .collect();
        ConnObject { g, h }
    }

    /// Face part of the action computed literally as the horizontal composite
    /// `[γ(v)] ∘ [h(f)] ∘ [γ(w)⁻¹]` of identity squares around the face square.
    pub fn act_object_by_squares(&self, gamma: &GaugeObject, x: &ConnObject) -> Result<ConnObject> {
        let mut y = self.act_object(gamma, x)?;
        let cm = self.cm;
        let conn = self.conn();
        for (i, f) in self.disc.faces().iter().enumerate() {
            let face = conn.face_square(x, i)?;
            let left = cm.identity_square(gamma.gamma[f.source()]);
            let right = cm.identity_square(cm.g_inv(gamma.gamma[f.target()]));
            y.h[i] = cm.hcompose(cm.hcompose(left, face)?, right)?.label();
        }
        Ok(y)
    }

    /// `(γ, χ).((g, h), η)`: on each edge `e: v → w` the horizontal composite
    /// `[χ(v)] ∘ [η(e)] ∘ [χ(w)]⁻ʰ`.
    pub fn act_morphism(&self, gm: &GaugeMorphism, m: &ConnMorphism) -> Result<ConnMorphism> {
        self.require_morphism(gm)?;
        let conn = self.conn();
        conn.target(m)?;
        let cm = self.cm;
        let chi = self.vertex_squares(gm);
        let eta = conn.edge_squares(&m.source.g, &m.eta);
        let mut labels = Vec::with_capacity(eta.len());
        for (e, &sq) in self.disc.edges().iter().zip(&eta) {
            let composite = cm.hcompose(cm.hcompose(chi[e.src()], sq)?, cm.hinverse(chi[e.tgt()])?)?;
            labels.push(composite.label());
        }
        Ok(ConnMorphism {
            source: self.act_object_unchecked(&gm.source, &m.source),
            eta: labels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::moduli::{build_example, Example};

    fn all_pairs<'a>(cm: &'a CrossedModule, d: &'a Discretization) -> (Gauge<'a>, Vec<GaugeMorphism>, Vec<ConnMorphism>) {
        let gauge = Gauge::new(cm, d);
        let conn = Conn::new(cm, d);
        let b = Budget::default();
        (gauge, gauge.enumerate_morphisms(&b).unwrap(), conn.enumerate_morphisms(&b).unwrap())
    }

    #[test]
    fn circle_action_is_conjugation() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::S1);
        let gauge = Gauge::new(&cm, &d);
        for gamma in gauge.enumerate_objects(&Budget::default()).unwrap() {
            for g in cm.g_elements() {
                let x = ConnObject { g: vec![g], h: vec![] };
                let y = gauge.act_object(&gamma, &x).unwrap();
                let c = gamma.gamma[0];
                assert_eq!(y.g[0], cm.g_mul(cm.g_mul(c, g), cm.g_inv(c)));
            }
        }
    }

    #[test]
    fn sphere_face_label_transforms_by_source_vertex() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::S2);
        let gauge = Gauge::new(&cm, &d);
        let conn = Conn::new(&cm, &d);
        let v = d.vertex_index("v").unwrap();
        for gamma in gauge.enumerate_objects(&Budget::default()).unwrap() {
            for x in conn.enumerate_objects(&Budget::default()).unwrap() {
                let y = gauge.act_object(&gamma, &x).unwrap();
                assert_eq!(y.h[0], cm.act(gamma.gamma[v], x.h[0]));
                assert_eq!(gauge.act_object_by_squares(&gamma, &x).unwrap(), y);
                assert!(conn.is_object(&y));
            }
        }
    }

    #[test]
    fn closed_form_matches_square_composite_on_torus() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::T2);
        let gauge = Gauge::new(&cm, &d);
        let conn = Conn::new(&cm, &d);
        for gamma in gauge.enumerate_objects(&Budget::default()).unwrap() {
            for x in conn.enumerate_objects(&Budget::default()).unwrap() {
                assert_eq!(gauge.act_object_by_squares(&gamma, &x).unwrap(), gauge.act_object(&gamma, &x).unwrap());
            }
        }
    }

    #[test]
    fn trivial_chi_acts_by_source_vertex() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::S2);
        let (gauge, gms, cms) = all_pairs(&cm, &d);
        for gm in gms.iter().filter(|g| g.chi.iter().all(|&h| h == cm.h_one())) {
            for m in &cms {
                let out = gauge.act_morphism(gm, m).unwrap();
                let e = d.edge(0);
                assert_eq!(out.eta[0], cm.act(gm.source.gamma[e.src()], m.eta[0]));
            }
        }
    }

    #[test]
    fn lemma_well_defined_on_sphere() {
        let cm = catalog::z2_z4();
        let d = build_example(Example::S2);
        let (gauge, gms, cms) = all_pairs(&cm, &d);
        let conn = Conn::new(&cm, &d);
        for gm in &gms {
            for m in &cms {
                let out = gauge.act_morphism(gm, m).unwrap();
                let expected = gauge.act_object(&gauge.target(gm), &conn.target(m).unwrap()).unwrap();
                assert_eq!(conn.target(&out).unwrap(), expected);
            }
        }
    }

    #[test]
    fn categorical_group_inverses() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::S2);
        let gauge = Gauge::new(&cm, &d);
        let gms = gauge.enumerate_morphisms(&Budget::default()).unwrap();
        let unit = gauge.identity(&gauge.unit());
        for m in gms.iter().step_by(7) {
            let ci = gauge.compose_inverse(m).unwrap();
            assert_eq!(gauge.compose(&ci, m).unwrap(), gauge.identity(&m.source));
            assert_eq!(gauge.compose(m, &ci).unwrap(), gauge.identity(&ci.source));
            let ti = gauge.tensor_inverse(m).unwrap();
            assert_eq!(gauge.tensor(m, &ti).unwrap(), unit);
            assert_eq!(gauge.tensor(&ti, m).unwrap(), unit);
            assert_eq!(gauge.tensor(&unit, m).unwrap(), *m);
        }
    }

    #[test]
    fn compose_rejects_mismatch() {
        let cm = catalog::z2_z4();
        let d = build_example(Example::S1);
        let gauge = Gauge::new(&cm, &d);
        let a = gauge.identity(&gauge.unit());
        let b = GaugeMorphism {
            source: GaugeObject { gamma: vec![cm.g_at(1)] },
            chi: vec![cm.h_one()],
        };
        assert!(matches!(gauge.compose(&b, &a), Err(Error::NotComposable(_))));
    }
}
