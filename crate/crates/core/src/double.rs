//! The transformation double groupoid of the gauge action on connections.
//!
//! Horizontal morphisms are morphisms of `Conn`; vertical morphisms are pairs
//! `(γ, x)` from `x` to `γ.x`; a square is a gauge morphism together with a
//! connection morphism, and all four sides are derived from that pair:
//!
//! ```text
//!        x ────── m ──────▶ y
//!        │                  │
//!   (γ, x)                  (γ', y)
//!        ▼                  ▼
//!      γ.x ── (γ,χ).m ──▶ γ'.y
//! ```

use crate::conn::{Conn, ConnMorphism, ConnObject};
use crate::error::{Error, Result};
use crate::gauge::{Gauge, GaugeMorphism, GaugeObject};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertMorphism {
    pub gamma: GaugeObject,
    pub base: ConnObject,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DGSquare {
    pub gmor: GaugeMorphism,
    pub cmor: ConnMorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundaries {
    pub top: ConnMorphism,
    pub bottom: ConnMorphism,
    pub left: VertMorphism,
    pub right: VertMorphism,
}

#[derive(Debug, Clone, Copy)]
pub struct DoubleGroupoid<'a> {
    conn: Conn<'a>,
    gauge: Gauge<'a>,
}

impl<'a> DoubleGroupoid<'a> {
    pub fn new(conn: Conn<'a>, gauge: Gauge<'a>) -> Self {
        Self { conn, gauge }
    }

    pub fn conn(&self) -> Conn<'a> {
        self.conn
    }

    pub fn gauge(&self) -> Gauge<'a> {
        self.gauge
    }

    pub fn vert_target(&self, v: &VertMorphism) -> Result<ConnObject> {
        self.gauge.act_object(&v.gamma, &v.base)
    }

    /// `(γ̃, γ.x) ∘ (γ, x) = (γ̃γ, x)`.
    pub fn vert_compose(&self, upper: &VertMorphism, lower: &VertMorphism) -> Result<VertMorphism> {
        if self.vert_target(upper)? != lower.base {
            return Err(Error::NotComposable("vertical morphisms do not meet".into()));
        }
        Ok(VertMorphism {
            gamma: self.gauge.tensor_objects(&lower.gamma, &upper.gamma)?,
            base: upper.base.clone(),
        })
    }

    pub fn vert_inverse(&self, v: &VertMorphism) -> Result<VertMorphism> {
        Ok(VertMorphism {
            gamma: self.gauge.tensor_inverse_object(&v.gamma),
            base: self.vert_target(v)?,
        })
    }

    pub fn vert_identity(&self, x: &ConnObject) -> VertMorphism {
        VertMorphism {
            gamma: self.gauge.unit(),
            base: x.clone(),
        }
    }

    pub fn boundaries(&self, s: &DGSquare) -> Result<Boundaries> {
        let y = self.conn.target(&s.cmor)?;
        let bottom = self.gauge.act_morphism(&s.gmor, &s.cmor)?;
        Ok(Boundaries {
            top: s.cmor.clone(),
            bottom,
            left: VertMorphism {
                gamma: s.gmor.source.clone(),
                base: s.cmor.source.clone(),
            },
            right: VertMorphism {
                gamma: self.gauge.target(&s.gmor),
                base: y,
            },
        })
    }

    /// Horizontal identity on a vertical morphism.
    pub fn h_identity(&self, v: &VertMorphism) -> DGSquare {
        DGSquare {
            gmor: self.gauge.identity(&v.gamma),
            cmor: self.conn.identity(&v.base),
        }
    }

    /// Vertical identity on a connection morphism.
    pub fn v_identity(&self, m: &ConnMorphism) -> DGSquare {
        DGSquare {
            gmor: self.gauge.identity(&self.gauge.unit()),
            cmor: m.clone(),
        }
    }

    /// `s2` to the right of `s1`: `((γ, χ'χ), m2 ∘ m1)`.
    pub fn hcompose(&self, s2: &DGSquare, s1: &DGSquare) -> Result<DGSquare> {
        let right = self.boundaries(s1)?.right;
        let left = self.boundaries(s2)?.left;
        if right != left {
            return Err(Error::NotComposable("right side of the first square is not the left side of the second".into()));
        }
        Ok(DGSquare {
            gmor: self.gauge.compose(&s2.gmor, &s1.gmor)?,
            cmor: self.conn.compose(&s2.cmor, &s1.cmor)?,
        })
    }

    /// `lower` stacked under `upper`: `((γ̃γ, χ̃(γ̃▷χ)), m)`.
    pub fn vcompose(&self, upper: &DGSquare, lower: &DGSquare) -> Result<DGSquare> {
        let bottom = self.boundaries(upper)?.bottom;
        self.boundaries(lower)?;
        if bottom != lower.cmor {
            return Err(Error::NotComposable("bottom of the upper square is not the top of the lower".into()));
        }
        Ok(DGSquare {
            gmor: self.gauge.tensor(&lower.gmor, &upper.gmor)?,
            cmor: upper.cmor.clone(),
        })
    }

    pub fn hinverse(&self, s: &DGSquare) -> Result<DGSquare> {
        Ok(DGSquare {
            gmor: self.gauge.compose_inverse(&s.gmor)?,
            cmor: self.conn.inverse(&s.cmor)?,
        })
    }

    pub fn vinverse(&self, s: &DGSquare) -> Result<DGSquare> {
        Ok(DGSquare {
            gmor: self.gauge.tensor_inverse(&s.gmor)?,
            cmor: self.gauge.act_morphism(&s.gmor, &s.cmor)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::Budget;
    use crate::catalog;
    use crate::moduli::{build_example, Example};

    #[test]
    fn circle_square_sides() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::S1);
        let dg = DoubleGroupoid::new(Conn::new(&cm, &d), Gauge::new(&cm, &d));
        let b = Budget::default();
        let gms = dg.gauge().enumerate_morphisms(&b).unwrap();
        let cms = dg.conn().enumerate_morphisms(&b).unwrap();
        for gm in gms.iter().step_by(5) {
            for m in cms.iter().step_by(3) {
                let s = DGSquare { gmor: gm.clone(), cmor: m.clone() };
                let bd = dg.boundaries(&s).unwrap();
                let (c, chi) = (gm.source.gamma[0], gm.chi[0]);
                let (g, eta) = (m.source.g[0], m.eta[0]);
                // bottom: χ·(c▷η)·((c g c⁻¹)▷χ⁻ʰ)
                let chi_sq = cm.square(c, chi);
                let inv = cm.hinverse(chi_sq).unwrap();
                let expected = cm.h_mul(cm.h_mul(chi, cm.act(c, eta)), cm.act(cm.g_mul(c, g), inv.label()));
                assert_eq!(bd.bottom.eta[0], expected);
                assert_eq!(bd.bottom.source.g[0], cm.g_mul(cm.g_mul(c, g), cm.g_inv(c)));
                assert_eq!(dg.vert_target(&bd.left).unwrap(), bd.bottom.source);
                assert_eq!(dg.vert_target(&bd.right).unwrap(), dg.conn().target(&bd.bottom).unwrap());
            }
        }
    }

    #[test]
    fn identity_squares_have_equal_sides() {
        let cm = catalog::z2_z4();
        let d = build_example(Example::T2);
        let dg = DoubleGroupoid::new(Conn::new(&cm, &d), Gauge::new(&cm, &d));
        let cms = dg.conn().enumerate_morphisms(&Budget::default()).unwrap();
        for m in cms.iter().step_by(11) {
            let v = dg.v_identity(m);
            let bd = dg.boundaries(&v).unwrap();
            assert_eq!(bd.top, bd.bottom);
            let gamma = GaugeObject { gamma: vec![cm.g_at(1)] };
            let h = dg.h_identity(&VertMorphism { gamma, base: m.source.clone() });
            let bd = dg.boundaries(&h).unwrap();
            assert_eq!(bd.left, bd.right);
        }
    }

    #[test]
    fn inverses_are_two_sided() {
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::S1);
        let dg = DoubleGroupoid::new(Conn::new(&cm, &d), Gauge::new(&cm, &d));
        let b = Budget::default();
        let gms = dg.gauge().enumerate_morphisms(&b).unwrap();
        let cms = dg.conn().enumerate_morphisms(&b).unwrap();
        for gm in gms.iter().step_by(4) {
            for m in cms.iter().step_by(5) {
                let s = DGSquare { gmor: gm.clone(), cmor: m.clone() };
                let bd = dg.boundaries(&s).unwrap();
                let hi = dg.hinverse(&s).unwrap();
                assert_eq!(dg.hcompose(&hi, &s).unwrap(), dg.h_identity(&bd.left));
                assert_eq!(dg.hcompose(&s, &hi).unwrap(), dg.h_identity(&bd.right));
                let vi = dg.vinverse(&s).unwrap();
                assert_eq!(dg.vcompose(&s, &vi).unwrap(), dg.v_identity(&bd.top));
                assert_eq!(dg.vcompose(&vi, &s).unwrap(), dg.v_identity(&bd.bottom));
                assert_eq!(dg.hinverse(&hi).unwrap(), s);
                assert_eq!(dg.vinverse(&vi).unwrap(), s);
            }
        }
    }

    #[test]
    fn mismatched_squares_rejected() {
        let cm = catalog::z2_z4();
        let d = build_example(Example::S1);
        let dg = DoubleGroupoid::new(Conn::new(&cm, &d), Gauge::new(&cm, &d));
        let x = ConnObject { g: vec![cm.g_at(0)], h: vec![] };
        let y = ConnObject { g: vec![cm.g_at(1)], h: vec![] };
        let a = dg.v_identity(&dg.conn().identity(&x));
        let b = dg.v_identity(&dg.conn().identity(&y));
        assert!(matches!(dg.hcompose(&b, &a), Err(Error::NotComposable(_))));
        assert!(matches!(dg.vcompose(&a, &b), Err(Error::NotComposable(_))));
    }
}
