//! Crossed modules `(G, H, ▷, ∂)` and the calculus of squares.
//!
//! A square has a top edge `g`, a bottom edge `g'` (both in `G`) and a
//! centre label `η ∈ H`, subject to `∂(η) = g'·g⁻¹`. Side edges are always the
//! identity of `G`.
//!
//! ```text
//!      g                 g₁      g₂                  g₁g₂
//!   ┌─────┐           ┌─────┬─────┐             ┌───────────┐
//!   │  η  │           │ η₁  │ η₂  │      =      │ η₁(g₁▷η₂) │
//!   └─────┘           └─────┴─────┘             └───────────┘
//!      g'                g₁'     g₂'                 g₁'g₂'
//! ```
//!
//! Vertical composition stacks `first` above `second` (`first.bottom ==
//! second.top`) and multiplies labels with the lower one on the left:
//! `vcompose(first, second).label == second.label · first.label`.

use std::collections::{BTreeMap, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::error::{Error, Result};
use crate::group::{validate_group_def, FiniteGroup, GroupDef};
use crate::report::Report;

/// An element of the group `G` of a crossed module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GElem(pub(crate) u16);

/// An element of the group `H` of a crossed module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HElem(pub(crate) u16);

impl GElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl HElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Fingerprint of a crossed module's tables. Squares carry it so that mixing
/// squares from different modules is caught.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModuleId(u64);

/// Serializable description of a crossed module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrossedModuleDef {
    pub g: GroupDef,
    pub h: GroupDef,
    /// `(g, η) ↦ g ▷ η`
    pub action: BTreeMap<(String, String), String>,
    /// `η ↦ ∂(η)`
    pub boundary: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    g: FiniteGroup,
    h: FiniteGroup,
    act: Vec<u16>,
    bnd: Vec<u16>,
    /// `fibers[g]` lists every η with `∂(η) = g`, in element order.
    fibers: Vec<Vec<HElem>>,
    id: ModuleId,
}

/// Runs every crossed-module check on a description.
///
/// Structural problems in either group or in the action/boundary tables are
/// reported with class `Malformed`/`Dangling` and suppress the axiom checks.
/// Each violated axiom is reported once, with the first witness found.
pub fn validate_crossed_module(def: &CrossedModuleDef) -> Report {
    let mut report = validate_group_def("G", &def.g);
    report.extend(validate_group_def("H", &def.h));
    let g_ids: HashMap<&str, usize> = def.g.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let h_ids: HashMap<&str, usize> = def.h.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    for ((g, eta), out) in &def.action {
        if !g_ids.contains_key(g.as_str()) {
            report.dangling("unknown-element", format!("action: {g:?} is not an element of G"));
        }
        for x in [eta, out] {
            if !h_ids.contains_key(x.as_str()) {
                report.dangling("unknown-element", format!("action: {x:?} is not an element of H"));
            }
        }
    }
    for (eta, g) in &def.boundary {
        if !h_ids.contains_key(eta.as_str()) {
            report.dangling("unknown-element", format!("boundary: {eta:?} is not an element of H"));
        }
        if !g_ids.contains_key(g.as_str()) {
            report.dangling("unknown-element", format!("boundary: {g:?} is not an element of G"));
        }
    }
    let mut missing_act = 0usize;
    let mut first = None;
    for g in &def.g.elements {
        for eta in &def.h.elements {
            if !def.action.contains_key(&(g.clone(), eta.clone())) {
                missing_act += 1;
                first.get_or_insert_with(|| format!("{g},{eta}"));
            }
        }
    }
    if let Some(first) = first {
        report.malformed(
            "missing-entry",
            format!("action table has {missing_act} missing entries (first: {first})"),
        );
    }
    let missing_bnd: Vec<&String> = def.h.elements.iter().filter(|e| !def.boundary.contains_key(*e)).collect();
    if let Some(first) = missing_bnd.first() {
        report.malformed(
            "missing-entry",
            format!("boundary table has {} missing entries (first: {first})", missing_bnd.len()),
        );
    }
    if !report.is_empty() {
        return report;
    }

    let g = FiniteGroup::from_def_labelled("G", &def.g).expect("checked above");
    let h = FiniteGroup::from_def_labelled("H", &def.h).expect("checked above");
    let (ng, nh) = (g.order(), h.order());
    let act: Vec<usize> = (0..ng * nh)
        .map(|k| {
            let key = (g.name(k / nh).to_string(), h.name(k % nh).to_string());
            h.lookup(&def.action[&key]).unwrap()
        })
        .collect();
    let bnd: Vec<usize> = (0..nh).map(|k| g.lookup(&def.boundary[h.name(k)]).unwrap()).collect();
    check_axioms(&g, &h, &act, &bnd, &mut report);
    report
}

fn check_axioms(g: &FiniteGroup, h: &FiniteGroup, act: &[usize], bnd: &[usize], report: &mut Report) {
    let (ng, nh) = (g.order(), h.order());
    let a = |x: usize, eta: usize| act[x * nh + eta];
    let (gn, hn) = (|x: usize| g.name(x).to_string(), |x: usize| h.name(x).to_string());

    // ∂ is a homomorphism
    'bnd: for x in 0..nh {
        for y in 0..nh {
            if bnd[h.mul(x, y)] != g.mul(bnd[x], bnd[y]) {
                report.violation(
                    "boundary-not-homomorphism",
                    format!("∂ not a homomorphism; witness (η, ζ) = ({}, {})", hn(x), hn(y)),
                );
                break 'bnd;
            }
        }
    }
    // each g ▷ · is an automorphism of H
    'auto: for x in 0..ng {
        for y in 0..nh {
            for z in 0..nh {
                if a(x, h.mul(y, z)) != h.mul(a(x, y), a(x, z)) {
                    report.violation(
                        "action-not-automorphism",
                        format!(
                            "g ▷ · is not a homomorphism of H; witness (g, η, ζ) = ({}, {}, {})",
                            gn(x),
                            hn(y),
                            hn(z)
                        ),
                    );
                    break 'auto;
                }
            }
        }
        let mut hit = vec![false; nh];
        for y in 0..nh {
            hit[a(x, y)] = true;
        }
        if hit.iter().any(|b| !b) {
            report.violation(
                "action-not-automorphism",
                format!("g ▷ · is not bijective on H; witness g = {}", gn(x)),
            );
            break;
        }
    }
    if let Some(y) = (0..nh).find(|&y| a(g.identity(), y) != y) {
        report.violation(
            "action-unit",
            format!("1 ▷ η ≠ η; witness η = {}", hn(y)),
        );
    }
    'comp: for x in 0..ng {
        for x2 in 0..ng {
            for y in 0..nh {
                if a(g.mul(x, x2), y) != a(x, a(x2, y)) {
                    report.violation(
                        "action-not-compatible",
                        format!(
                            "(g₁g₂) ▷ η ≠ g₁ ▷ (g₂ ▷ η); witness ({}, {}, {})",
                            gn(x),
                            gn(x2),
                            hn(y)
                        ),
                    );
                    break 'comp;
                }
            }
        }
    }
    'p1: for x in 0..ng {
        for y in 0..nh {
            if bnd[a(x, y)] != g.mul(g.mul(x, bnd[y]), g.inv(x)) {
                report.violation(
                    "peiffer-equivariance",
                    format!("∂(g ▷ η) ≠ g ∂(η) g⁻¹; witness (g, η) = ({}, {})", gn(x), hn(y)),
                );
                break 'p1;
            }
        }
    }
    'p2: for y in 0..nh {
        for z in 0..nh {
            if a(bnd[y], z) != h.mul(h.mul(y, z), h.inv(y)) {
                report.violation(
                    "peiffer-identity",
                    format!("∂(η) ▷ ζ ≠ η ζ η⁻¹; witness (η, ζ) = ({}, {})", hn(y), hn(z)),
                );
                break 'p2;
            }
        }
    }
}

impl CrossedModule {
    pub fn from_def(def: &CrossedModuleDef) -> Result<Self> {
        let report = validate_crossed_module(def);
        if !report.is_empty() {
            return Err(Error::InvalidCrossedModule(report));
        }
        let g = FiniteGroup::from_def_labelled("G", &def.g).map_err(Error::InvalidCrossedModule)?;
        let h = FiniteGroup::from_def_labelled("H", &def.h).map_err(Error::InvalidCrossedModule)?;
        let (ng, nh) = (g.order(), h.order());
        let act = (0..ng * nh)
            .map(|k| {
                let key = (g.name(k / nh).to_string(), h.name(k % nh).to_string());
                h.lookup(&def.action[&key]).unwrap()
            })
            .collect::<Vec<_>>();
        let bnd = (0..nh)
            .map(|k| g.lookup(&def.boundary[h.name(k)]).unwrap())
            .collect::<Vec<_>>();
        Ok(Self::assemble(g, h, act, bnd))
    }

    /// Builds a crossed module from groups and closures for `▷` and `∂`,
    /// validating every axiom.
    pub fn from_parts(
        g: FiniteGroup,
        h: FiniteGroup,
        act: impl Fn(usize, usize) -> usize,
        bnd: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let (ng, nh) = (g.order(), h.order());
        assert!(ng <= u16::MAX as usize && nh <= u16::MAX as usize);
        let act: Vec<usize> = (0..ng * nh).map(|k| act(k / nh, k % nh)).collect();
        let bnd: Vec<usize> = (0..nh).map(bnd).collect();
        let mut report = Report::new();
        if act.iter().any(|&x| x >= nh) || bnd.iter().any(|&x| x >= ng) {
            report.dangling("unknown-element", "action or boundary maps outside the group");
            return Err(Error::InvalidCrossedModule(report));
        }
        check_axioms(&g, &h, &act, &bnd, &mut report);
        if !report.is_empty() {
            return Err(Error::InvalidCrossedModule(report));
        }
        Ok(Self::assemble(g, h, act, bnd))
    }

    fn assemble(g: FiniteGroup, h: FiniteGroup, act: Vec<usize>, bnd: Vec<usize>) -> Self {
        let mut hasher = DefaultHasher::new();
        g.names().hash(&mut hasher);
        g.raw_table().hash(&mut hasher);
        h.names().hash(&mut hasher);
        h.raw_table().hash(&mut hasher);
        act.hash(&mut hasher);
        bnd.hash(&mut hasher);
        let mut fibers = vec![Vec::new(); g.order()];
        for (eta, &x) in bnd.iter().enumerate() {
            fibers[x].push(HElem(eta as u16));
        }
        Self {
            act: act.into_iter().map(|x| x as u16).collect(),
            bnd: bnd.into_iter().map(|x| x as u16).collect(),
            g,
            h,
            fibers,
            id: ModuleId(hasher.finish()),
        }
    }

    pub fn to_def(&self) -> CrossedModuleDef {
        let mut action = BTreeMap::new();
        for x in self.g_elements() {
            for y in self.h_elements() {
                action.insert(
                    (self.g_name(x).to_string(), self.h_name(y).to_string()),
                    self.h_name(self.act(x, y)).to_string(),
                );
            }
        }
        let boundary = self
            .h_elements()
            .map(|y| (self.h_name(y).to_string(), self.g_name(self.bnd(y)).to_string()))
            .collect();
        CrossedModuleDef {
            g: self.g.to_def(),
            h: self.h.to_def(),
            action,
            boundary,
        }
    }

    pub fn id(&self) -> ModuleId {
        self.id
    }

    pub fn g_group(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn h_group(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn g_order(&self) -> usize {
        self.g.order()
    }

    pub fn h_order(&self) -> usize {
        self.h.order()
    }

    pub fn g_elements(&self) -> impl Iterator<Item = GElem> + Clone {
        (0..self.g.order()).map(|i| GElem(i as u16))
    }

    pub fn h_elements(&self) -> impl Iterator<Item = HElem> + Clone {
        (0..self.h.order()).map(|i| HElem(i as u16))
    }

    pub fn g_elem(&self, name: &str) -> Option<GElem> {
        self.g.lookup(name).map(|i| GElem(i as u16))
    }

    pub fn h_elem(&self, name: &str) -> Option<HElem> {
        self.h.lookup(name).map(|i| HElem(i as u16))
    }

    /// Element by position; panics when out of range.
    pub fn g_at(&self, index: usize) -> GElem {
        assert!(index < self.g.order());
        GElem(index as u16)
    }

    pub fn h_at(&self, index: usize) -> HElem {
        assert!(index < self.h.order());
        HElem(index as u16)
    }

    pub fn g_name(&self, x: GElem) -> &str {
        self.g.name(x.index())
    }

    pub fn h_name(&self, x: HElem) -> &str {
        self.h.name(x.index())
    }

    #[inline]
    pub fn g_one(&self) -> GElem {
        GElem(self.g.identity() as u16)
    }

    #[inline]
    pub fn h_one(&self) -> HElem {
        HElem(self.h.identity() as u16)
    }

    #[inline]
    pub fn g_mul(&self, a: GElem, b: GElem) -> GElem {
        GElem(self.g.mul(a.index(), b.index()) as u16)
    }

    #[inline]
    pub fn g_inv(&self, a: GElem) -> GElem {
        GElem(self.g.inv(a.index()) as u16)
    }

    #[inline]
    pub fn h_mul(&self, a: HElem, b: HElem) -> HElem {
        HElem(self.h.mul(a.index(), b.index()) as u16)
    }

    #[inline]
    pub fn h_inv(&self, a: HElem) -> HElem {
        HElem(self.h.inv(a.index()) as u16)
    }

    /// `g ▷ η`
    #[inline]
    pub fn act(&self, g: GElem, eta: HElem) -> HElem {
        HElem(self.act[g.index() * self.h.order() + eta.index()])
    }

    /// `∂(η)`
    #[inline]
    pub fn bnd(&self, eta: HElem) -> GElem {
        GElem(self.bnd[eta.index()])
    }

    /// Every `η` with `∂(η) = g`.
    pub fn fiber(&self, g: GElem) -> &[HElem] {
        &self.fibers[g.index()]
    }

    pub fn kernel(&self) -> &[HElem] {
        self.fiber(self.g_one())
    }

    pub fn image(&self) -> Vec<GElem> {
        self.g_elements().filter(|&g| !self.fiber(g).is_empty()).collect()
    }

    // ---- squares ----------------------------------------------------------

    /// The square with top `top` and label `label`; its bottom is `∂(label)·top`.
    pub fn square(&self, top: GElem, label: HElem) -> Square {
        Square {
            top,
            bottom: self.g_mul(self.bnd(label), top),
            label,
            module: self.id,
        }
    }

    /// A square from all three parts, rejected unless `∂(label) = bottom·top⁻¹`.
    pub fn square_checked(&self, top: GElem, bottom: GElem, label: HElem) -> Result<Square> {
        let s = Square {
            top,
            bottom,
            label,
            module: self.id,
        };
        if self.is_valid_square(&s) {
            Ok(s)
        } else {
            Err(Error::InvalidSquare {
                top: self.g_name(top).into(),
                bottom: self.g_name(bottom).into(),
                label: self.h_name(label).into(),
            })
        }
    }

    pub fn identity_square(&self, g: GElem) -> Square {
        Square {
            top: g,
            bottom: g,
            label: self.h_one(),
            module: self.id,
        }
    }

    pub fn is_valid_square(&self, s: &Square) -> bool {
        s.module == self.id && self.bnd(s.label) == self.g_mul(s.bottom, self.g_inv(s.top))
    }

    /// Every valid square, ordered by (top, label).
    pub fn squares(&self) -> impl Iterator<Item = Square> + '_ {
        self.g_elements()
            .flat_map(move |g| self.h_elements().map(move |eta| self.square(g, eta)))
    }

    fn own(&self, s: &Square) -> Result<()> {
        if s.module == self.id {
            Ok(())
        } else {
            Err(Error::ForeignSquare)
        }
    }

    /// `a` to the left of `b`: `(a.top·b.top, a.bottom·b.bottom, a.label·(a.top ▷ b.label))`.
    pub fn hcompose(&self, a: Square, b: Square) -> Result<Square> {
        self.own(&a)?;
        self.own(&b)?;
        Ok(Square {
            top: self.g_mul(a.top, b.top),
            bottom: self.g_mul(a.bottom, b.bottom),
            label: self.h_mul(a.label, self.act(a.top, b.label)),
            module: self.id,
        })
    }

    /// `first` stacked above `second`.
    pub fn vcompose(&self, first: Square, second: Square) -> Result<Square> {
        self.own(&first)?;
        self.own(&second)?;
        if first.bottom != second.top {
            return Err(Error::VerticalMismatch {
                first_bottom: self.g_name(first.bottom).into(),
                second_top: self.g_name(second.top).into(),
            });
        }
        Ok(Square {
            top: first.top,
            bottom: second.bottom,
            label: self.h_mul(second.label, first.label),
            module: self.id,
        })
    }

    /// `η^{-h}`: `(g⁻¹, g'⁻¹, g⁻¹ ▷ η⁻¹)`.
    pub fn hinverse(&self, a: Square) -> Result<Square> {
        self.own(&a)?;
        let top = self.g_inv(a.top);
        Ok(Square {
            top,
            bottom: self.g_inv(a.bottom),
            label: self.act(top, self.h_inv(a.label)),
            module: self.id,
        })
    }

    /// `η^{-v}`: `(g', g, η⁻¹)`.
    pub fn vinverse(&self, a: Square) -> Result<Square> {
        self.own(&a)?;
        Ok(Square {
            top: a.bottom,
            bottom: a.top,
            label: self.h_inv(a.label),
            module: self.id,
        })
    }

    pub fn describe_square(&self, s: &Square) -> String {
        format!(
            "[{} | {} | {}]",
            self.g_name(s.top),
            self.h_name(s.label),
            self.g_name(s.bottom)
        )
    }
}

/// A square `(top, bottom, label)` of the 2D calculus.
///
/// Squares built through [`CrossedModule`] are always valid; the composition
/// operations compute their outputs by formula, which is what the law suite
/// re-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    top: GElem,
    bottom: GElem,
    label: HElem,
    module: ModuleId,
}

impl Square {
    pub fn top(&self) -> GElem {
        self.top
    }

    pub fn bottom(&self) -> GElem {
        self.bottom
    }

    pub fn label(&self) -> HElem {
        self.label
    }

    pub fn module(&self) -> ModuleId {
        self.module
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn z2z4_is_valid_and_has_expected_kernel() {
        let cm = catalog::z2_z4();
        assert!(validate_crossed_module(&cm.to_def()).is_empty());
        let ker: Vec<&str> = cm.kernel().iter().map(|&h| cm.h_name(h)).collect();
        assert_eq!(ker, ["0", "2"]);
        assert_eq!(cm.image().len(), 2);
    }

    #[test]
    fn trivial_h_is_valid_over_any_g() {
        let cm = catalog::with_trivial_h(FiniteGroup::symmetric(3));
        assert!(validate_crossed_module(&cm.to_def()).is_empty());
    }

    #[test]
    fn corrupted_boundary_is_reported_with_witness() {
        let mut def = catalog::z2_z4().to_def();
        // generator-to-generator but ∂(2) = 1 breaks ∂(1+1) = ∂(1)∂(1)
        def.boundary.insert("2".into(), "1".into());
        let r = validate_crossed_module(&def);
        let issue = r.issues().iter().find(|i| i.code == "boundary-not-homomorphism").unwrap();
        assert!(issue.message.contains("∂ not a homomorphism"));
        assert!(issue.message.contains("witness"));
        assert!(!r.has_class(crate::report::IssueClass::Malformed));
    }

    #[test]
    fn missing_table_entry_is_malformed_not_violation() {
        let mut def = catalog::z2_z4().to_def();
        def.action.remove(&("1".to_string(), "3".to_string()));
        def.boundary.insert("9".into(), "0".into());
        let r = validate_crossed_module(&def);
        assert!(r.has_code("missing-entry"));
        assert!(r.has_code("unknown-element"));
        assert!(!r.has_class(crate::report::IssueClass::Violation));
    }

    #[test]
    fn broken_peiffer_identity() {
        // Z2 acting trivially on Z3 with ∂ trivial is fine; make H = S3 with
        // trivial action and trivial boundary, which breaks Peiffer 2.
        let err = CrossedModule::from_parts(
            FiniteGroup::cyclic(2),
            FiniteGroup::symmetric(3),
            |_, eta| eta,
            |_| 0,
        )
        .unwrap_err();
        match err {
            Error::InvalidCrossedModule(r) => assert!(r.has_code("peiffer-identity")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn square_constructors() {
        let cm = catalog::z2_z4();
        let one = cm.g_elem("1").unwrap();
        let s = cm.square(one, cm.h_elem("1").unwrap());
        assert_eq!(cm.g_name(s.bottom()), "0");
        assert!(cm.square_checked(one, one, cm.h_elem("1").unwrap()).is_err());
        assert!(cm.square_checked(one, one, cm.h_elem("2").unwrap()).is_ok());
    }

    #[test]
    fn foreign_squares_rejected() {
        let a = catalog::z2_z4();
        let b = catalog::s3_conjugation();
        let sa = a.identity_square(a.g_one());
        let sb = b.identity_square(b.g_one());
        assert_eq!(a.hcompose(sa, sb), Err(Error::ForeignSquare));
        assert_eq!(a.vinverse(sb), Err(Error::ForeignSquare));
        assert!(!a.is_valid_square(&sb));
    }

    #[test]
    fn vertical_mismatch() {
        let cm = catalog::z2_z4();
        let s = cm.square(cm.g_one(), cm.h_elem("1").unwrap());
        assert!(matches!(cm.vcompose(s, s), Err(Error::VerticalMismatch { .. })));
    }

    #[test]
    fn identity_and_inverse_squares() {
        let cm = catalog::s3_conjugation();
        for s in cm.squares() {
            let id_top = cm.identity_square(s.top());
            let id_bot = cm.identity_square(s.bottom());
            assert_eq!(cm.vcompose(s, id_bot).unwrap(), s);
            assert_eq!(cm.vcompose(id_top, s).unwrap(), s);
            let hi = cm.hinverse(s).unwrap();
            assert_eq!(cm.hcompose(s, hi).unwrap(), cm.identity_square(cm.g_one()));
            assert_eq!(cm.hcompose(hi, s).unwrap(), cm.identity_square(cm.g_one()));
            assert_eq!(cm.hinverse(hi).unwrap(), s);
            let vi = cm.vinverse(s).unwrap();
            assert_eq!(cm.vcompose(s, vi).unwrap(), id_top);
            assert_eq!(cm.vcompose(vi, s).unwrap(), id_bot);
            assert_eq!(cm.vinverse(vi).unwrap(), s);
        }
        for g in cm.g_elements() {
            let id = cm.identity_square(g);
            assert_eq!(cm.hinverse(id).unwrap(), cm.identity_square(cm.g_inv(g)));
            assert_eq!(cm.vinverse(id).unwrap(), id);
        }
    }
}
