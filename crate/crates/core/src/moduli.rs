//! Example surfaces and orbit counting of connections.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;

use crate::assign::{pow_saturating, Budget};
use crate::complex::{Direction::*, Discretization, DiscretizationDef};
use crate::conn::{Conn, ConnMorphism, ConnObject};
use crate::crossed_module::CrossedModule;
use crate::error::{Error, Result};
use crate::gauge::{Gauge, GaugeObject};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    S1,
    S2,
    T2,
}

impl Example {
    pub const ALL: [Example; 3] = [Example::S1, Example::S2, Example::T2];

    pub fn name(self) -> &'static str {
        match self {
            Example::S1 => "s1",
            Example::S2 => "s2",
            Example::T2 => "t2",
        }
    }
}

impl FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Example::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn example_def(ex: Example) -> DiscretizationDef {
    match ex {
        Example::S1 => DiscretizationDef::new().vertex("v").edge("e", "v", "v"),
        Example::S2 => DiscretizationDef::new()
            .vertex("v")
            .vertex("w")
            .edge("e", "v", "w")
            .face("f", "v", "w", &[("e", Forward)], &[("e", Forward)]),
        // top reads g₂g₁, bottom g₁g₂, so ∂(h) = g₁g₂g₁⁻¹g₂⁻¹
        Example::T2 => DiscretizationDef::new()
            .vertex("v")
            .edge("e1", "v", "v")
            .edge("e2", "v", "v")
            .face("f", "v", "v", &[("e2", Forward), ("e1", Forward)], &[("e1", Forward), ("e2", Forward)]),
    }
}

pub fn build_example(ex: Example) -> Discretization {
    Discretization::from_def(&example_def(ex)).expect("bundled examples are valid")
}

pub fn build_named(name: &str) -> Result<Discretization> {
    Ok(build_example(name.parse()?))
}

/// Two faces sharing the same pair of three-edge paths `v → w`, in opposite
/// roles. Used to exercise 0-source/0-target moves along multi-edge words.
pub fn two_face_bigon_def() -> DiscretizationDef {
    let upper = [("e1", Forward), ("e2", Forward), ("e3", Forward)];
    let lower = [("d1", Forward), ("d2", Forward), ("d3", Forward)];
    DiscretizationDef::new()
        .vertex("v")
        .vertex("x1")
        .vertex("x2")
        .vertex("w")
        .vertex("y1")
        .vertex("y2")
        .edge("e1", "v", "x1")
        .edge("e2", "x1", "x2")
        .edge("e3", "x2", "w")
        .edge("d1", "v", "y1")
        .edge("d2", "y1", "y2")
        .edge("d3", "y2", "w")
        .face("f", "v", "w", &upper, &lower)
        .face("g", "v", "w", &lower, &upper)
}

pub fn two_face_bigon() -> Discretization {
    Discretization::from_def(&two_face_bigon_def()).expect("valid complex")
}

pub fn count_objects(cm: &CrossedModule, d: &Discretization, budget: &Budget) -> Result<u128> {
    Ok(Conn::new(cm, d).enumerate_objects(budget)?.len() as u128)
}

pub fn count_morphisms(cm: &CrossedModule, d: &Discretization, budget: &Budget) -> Result<u128> {
    Conn::new(cm, d).count_morphisms(budget)
}

/// Which relation identifies connections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquivalenceMode {
    /// Related by a morphism of the connection groupoid.
    ConnMorphisms,
    /// Related by the action of a gauge object.
    GaugeObjects,
    /// Both.
    Full,
}

impl EquivalenceMode {
    pub const ALL: [EquivalenceMode; 3] = [Self::ConnMorphisms, Self::GaugeObjects, Self::Full];

    pub fn name(self) -> &'static str {
        match self {
            Self::ConnMorphisms => "conn_morphisms",
            Self::GaugeObjects => "gauge_objects",
            Self::Full => "full",
        }
    }

    fn uses_conn(self) -> bool {
        matches!(self, Self::ConnMorphisms | Self::Full)
    }

    fn uses_gauge(self) -> bool {
        matches!(self, Self::GaugeObjects | Self::Full)
    }
}

impl FromStr for EquivalenceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected conn_morphisms, gauge_objects or full)"))
    }
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub representative: ConnObject,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitReport {
    pub mode: EquivalenceMode,
    pub objects: usize,
    /// Sorted by representative; each representative is the least member.
    pub orbits: Vec<Orbit>,
}

impl OrbitReport {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }
}

/// Partitions the objects of `Conn` into classes of the chosen relation.
///
/// Generating moves: morphisms with one nontrivial `η` entry and gauge
/// objects with one nontrivial `γ` entry.
pub fn count_orbits(cm: &CrossedModule, d: &Discretization, mode: EquivalenceMode, budget: &Budget) -> Result<OrbitReport> {
    let objects = Conn::new(cm, d).enumerate_objects(budget)?;
    orbits_of(cm, d, objects, mode, budget)
}

/// Orbit partition of an explicitly given object list (any order).
pub fn orbits_of(
    cm: &CrossedModule,
    d: &Discretization,
    objects: Vec<ConnObject>,
    mode: EquivalenceMode,
    budget: &Budget,
) -> Result<OrbitReport> {
    let conn = Conn::new(cm, d);
    let gauge = Gauge::new(cm, d);
    let mut moves: u128 = 0;
    if mode.uses_conn() {
        moves += (d.edge_count() * cm.h_order().saturating_sub(1)) as u128;
    }
    if mode.uses_gauge() {
        moves += (d.vertex_count() * cm.g_order().saturating_sub(1)) as u128;
    }
    budget.check((objects.len() as u128).saturating_mul(moves.max(1)))?;

    let index: HashMap<&ConnObject, usize> = objects.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut uf = UnionFind::<usize>::new(objects.len());
    for (i, x) in objects.iter().enumerate() {
        if mode.uses_conn() {
            for e in 0..d.edge_count() {
                for eta in cm.h_elements().skip(1) {
                    let mut m = conn.identity(x);
                    m.eta[e] = eta;
                    let y = conn.target(&m)?;
                    uf.union(i, index[&y]);
                }
            }
        }
        if mode.uses_gauge() {
            for v in 0..d.vertex_count() {
                for g in cm.g_elements().skip(1) {
                    let mut gamma = gauge.unit();
                    gamma.gamma[v] = g;
                    let y = gauge.act_object(&gamma, x)?;
                    uf.union(i, index[&y]);
                }
            }
        }
    }

    let mut classes: HashMap<usize, Orbit> = HashMap::new();
    for (i, x) in objects.iter().enumerate() {
        let orbit = classes.entry(uf.find(i)).or_insert_with(|| Orbit {
            representative: x.clone(),
            size: 0,
        });
        orbit.size += 1;
        if *x < orbit.representative {
            orbit.representative = x.clone();
        }
    }
    let mut orbits: Vec<Orbit> = classes.into_values().collect();
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(OrbitReport {
        mode,
        objects: objects.len(),
        orbits,
    })
}

/// Gauge objects that act nontrivially only at one vertex.
pub fn single_vertex_gauges(cm: &CrossedModule, d: &Discretization, vertex: usize) -> Vec<GaugeObject> {
    cm.g_elements()
        .map(|g| {
            let mut gamma = vec![cm.g_one(); d.vertex_count()];
            gamma[vertex] = g;
            GaugeObject { gamma }
        })
        .collect()
}

/// Upper bound on the number of morphisms, `|G|^|E|·|H|^|F|·|H|^|E|`.
pub fn morphism_bound(cm: &CrossedModule, d: &Discretization) -> u128 {
    Conn::new(cm, d)
        .object_bound()
        .saturating_mul(pow_saturating(cm.h_order(), d.edge_count()))
}

/// Every morphism out of the given objects.
pub fn morphisms_over(cm: &CrossedModule, d: &Discretization, objects: &[ConnObject]) -> Vec<ConnMorphism> {
    let conn = Conn::new(cm, d);
    objects.iter().flat_map(|x| conn.morphisms_from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::FiniteGroup;

    #[test]
    fn example_shapes() {
        let counts = |d: &Discretization| (d.vertex_count(), d.edge_count(), d.face_count());
        assert_eq!(counts(&build_example(Example::S1)), (1, 1, 0));
        assert_eq!(counts(&build_example(Example::S2)), (2, 1, 1));
        assert_eq!(counts(&build_example(Example::T2)), (1, 2, 1));
        assert!(matches!(build_named("k3"), Err(Error::UnknownExample(_))));
        assert_eq!(build_named("t2").unwrap(), build_example(Example::T2));
        two_face_bigon();
    }

    #[test]
    fn z2z4_counts() {
        let cm = catalog::z2_z4();
        let b = Budget::default();
        assert_eq!(count_objects(&cm, &build_example(Example::S1), &b).unwrap(), 2);
        assert_eq!(count_morphisms(&cm, &build_example(Example::S1), &b).unwrap(), 8);
        assert_eq!(count_objects(&cm, &build_example(Example::S2), &b).unwrap(), 4);
        assert_eq!(count_objects(&cm, &build_example(Example::T2), &b).unwrap(), 8);
        assert_eq!(count_morphisms(&cm, &build_example(Example::T2), &b).unwrap(), 128);
    }

    fn conjugacy_classes(g: &FiniteGroup) -> usize {
        let mut seen = vec![false; g.order()];
        let mut classes = 0;
        for a in 0..g.order() {
            if seen[a] {
                continue;
            }
            classes += 1;
            for x in 0..g.order() {
                seen[g.mul(g.mul(x, a), g.inv(x))] = true;
            }
        }
        classes
    }

    #[test]
    fn circle_gauge_orbits_are_conjugacy_classes() {
        let s1 = build_example(Example::S1);
        for n in 1..=4 {
            let g = FiniteGroup::symmetric(n);
            let expected = conjugacy_classes(&g);
            let cm = catalog::with_trivial_h(g);
            let r = count_orbits(&cm, &s1, EquivalenceMode::GaugeObjects, &Budget::default()).unwrap();
            assert_eq!(r.count(), expected);
        }
    }

    #[test]
    fn trivial_module_has_one_orbit() {
        let cm = catalog::trivial();
        for ex in Example::ALL {
            for mode in EquivalenceMode::ALL {
                let r = count_orbits(&cm, &build_example(ex), mode, &Budget::default()).unwrap();
                assert_eq!(r.count(), 1);
            }
        }
    }

    /// Orbits from a breadth-first closure over every morphism and every gauge
    /// object, not just the generating moves.
    fn closure_orbits(cm: &CrossedModule, d: &Discretization, mode: EquivalenceMode) -> usize {
        let conn = Conn::new(cm, d);
        let gauge = Gauge::new(cm, d);
        let b = Budget::default();
        let objects = conn.enumerate_objects(&b).unwrap();
        let gammas = gauge.enumerate_objects(&b).unwrap();
        let mut seen = std::collections::HashSet::new();
        let mut count = 0;
        for x in &objects {
            if !seen.insert(x.clone()) {
                continue;
            }
            count += 1;
            let mut stack = vec![x.clone()];
            while let Some(y) = stack.pop() {
                let mut next = Vec::new();
                if mode.uses_conn() {
                    next.extend(conn.morphisms_from(&y).iter().map(|m| conn.target(m).unwrap()));
                }
                if mode.uses_gauge() {
                    next.extend(gammas.iter().map(|g| gauge.act_object(g, &y).unwrap()));
                }
                for z in next {
                    if seen.insert(z.clone()) {
                        stack.push(z);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn generator_moves_match_full_closure() {
        for cm in [catalog::z2_z4(), catalog::s3_conjugation(), catalog::z2_z3_inversion()] {
            for ex in Example::ALL {
                let d = build_example(ex);
                for mode in EquivalenceMode::ALL {
                    let r = count_orbits(&cm, &d, mode, &Budget::default()).unwrap();
                    assert_eq!(r.count(), closure_orbits(&cm, &d, mode), "{ex} {mode}");
                    assert_eq!(r.orbits.iter().map(|o| o.size).sum::<usize>(), r.objects);
                }
            }
        }
    }

    #[test]
    fn full_mode_is_coarsest() {
        let cm = catalog::z2_z4();
        for ex in Example::ALL {
            let d = build_example(ex);
            let b = Budget::default();
            let full = count_orbits(&cm, &d, EquivalenceMode::Full, &b).unwrap().count();
            assert!(full <= count_orbits(&cm, &d, EquivalenceMode::ConnMorphisms, &b).unwrap().count());
            assert!(full <= count_orbits(&cm, &d, EquivalenceMode::GaugeObjects, &b).unwrap().count());
        }
    }

    #[test]
    fn orbit_report_independent_of_order() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let cm = catalog::s3_conjugation();
        let d = build_example(Example::T2);
        let b = Budget::default();
        let base = count_orbits(&cm, &d, EquivalenceMode::Full, &b).unwrap();
        let mut objects = Conn::new(&cm, &d).enumerate_objects(&b).unwrap();
        for seed in 0..2 {
            objects.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            assert_eq!(orbits_of(&cm, &d, objects.clone(), EquivalenceMode::Full, &b).unwrap(), base);
        }
    }
}
