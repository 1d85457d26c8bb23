//! Executable law suites: every algebraic identity the library relies on,
//! checked exhaustively over small case spaces or sampled with a fixed seed.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assign::Budget;
use crate::complex::Discretization;
use crate::conn::{Conn, ConnMorphism, ConnObject};
use crate::crossed_module::{validate_crossed_module, CrossedModule, HElem, Square};
use crate::double::{DGSquare, DoubleGroupoid};
use crate::error::Result;
use crate::gauge::{Gauge, GaugeMorphism, GaugeObject};
use crate::moduli::{build_example, single_vertex_gauges, Example};
use crate::rediscretize::{ChangeSpec, Script};

/// How many cases a single law may visit before switching to sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub max_cases: u128,
    pub seed: u64,
}

impl Sampling {
    pub const DEFAULT_MAX_CASES: u128 = 1_000_000;

    pub fn exhaustive() -> Self {
        Self {
            max_cases: u128::MAX,
            seed: 0,
        }
    }
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            max_cases: Self::DEFAULT_MAX_CASES,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LawConfig {
    pub budget: Budget,
    pub sampling: Sampling,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawOutcome {
    pub name: String,
    pub cases: u128,
    pub sampled: bool,
    pub violations: u128,
    /// The first failing case, rendered for humans.
    pub witness: Option<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suite {
    pub name: String,
    pub outcomes: Vec<LawOutcome>,
}

impl Suite {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            outcomes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(LawOutcome::passed)
    }

    pub fn violations(&self) -> u128 {
        self.outcomes.iter().map(|o| o.violations).sum()
    }

    pub fn cases(&self) -> u128 {
        self.outcomes.iter().map(|o| o.cases).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.name)?;
        for o in &self.outcomes {
            let mode = if o.sampled { "sampled" } else { "exhaustive" };
            write!(f, "  {:<40} {:>9} cases ({mode}), {} violations", o.name, o.cases, o.violations)?;
            if let Some(w) = &o.witness {
                write!(f, "; first: {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn seed_for(seed: u64, name: &str) -> u64 {
    name.bytes()
        .fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Runs `law` over the mixed-radix space `dims`. `law` returns a description
/// of the case when it fails.
pub fn check_law(name: &str, dims: &[usize], sampling: &Sampling, mut law: impl FnMut(&[usize]) -> Option<String>) -> LawOutcome {
    let total = dims.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128));
    let mut outcome = LawOutcome {
        name: name.to_string(),
        cases: 0,
        sampled: total > sampling.max_cases,
        violations: 0,
        witness: None,
    };
    let mut record = |outcome: &mut LawOutcome, case: &[usize]| {
        outcome.cases += 1;
        if let Some(w) = law(case) {
            outcome.violations += 1;
            outcome.witness.get_or_insert(w);
        }
    };
    if total == 0 {
        return outcome;
    }
    let mut case = vec![0usize; dims.len()];
    if outcome.sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(sampling.seed, name));
        for _ in 0..sampling.max_cases {
            for (c, &d) in case.iter_mut().zip(dims) {
                *c = rng.random_range(0..d);
            }
            record(&mut outcome, &case);
        }
        return outcome;
    }
    loop {
        record(&mut outcome, &case);
        let mut i = dims.len();
        loop {
            if i == 0 {
                return outcome;
            }
            i -= 1;
            case[i] += 1;
            if case[i] < dims[i] {
                break;
            }
            case[i] = 0;
        }
    }
}

fn expect(ok: bool, witness: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(witness())
    }
}

fn show_obj(cm: &CrossedModule, x: &ConnObject) -> String {
    let g: Vec<&str> = x.g.iter().map(|&g| cm.g_name(g)).collect();
    let h: Vec<&str> = x.h.iter().map(|&h| cm.h_name(h)).collect();
    format!("g=[{}] h=[{}]", g.join(","), h.join(","))
}

fn show_mor(cm: &CrossedModule, m: &ConnMorphism) -> String {
    let eta: Vec<&str> = m.eta.iter().map(|&h| cm.h_name(h)).collect();
    format!("({}; η=[{}])", show_obj(cm, &m.source), eta.join(","))
}

fn show_gmor(cm: &CrossedModule, m: &GaugeMorphism) -> String {
    let gamma: Vec<&str> = m.source.gamma.iter().map(|&g| cm.g_name(g)).collect();
    let chi: Vec<&str> = m.chi.iter().map(|&h| cm.h_name(h)).collect();
    format!("(γ=[{}]; χ=[{}])", gamma.join(","), chi.join(","))
}

fn labels(cm: &CrossedModule, digits: &[usize]) -> Vec<HElem> {
    digits.iter().map(|&k| cm.h_at(k)).collect()
}

/// Square-calculus laws, always exhaustive.
pub fn square_calculus(cm: &CrossedModule) -> Suite {
    let s = Sampling::exhaustive();
    let (g, h) = (cm.g_order(), cm.h_order());
    let sq = |top: usize, label: usize| cm.square(cm.g_at(top), cm.h_at(label));
    // A square stacked under `a`, chosen by its label.
    let under = |a: Square, label: usize| cm.square(a.bottom(), cm.h_at(label));
    let d = |s: &Square| cm.describe_square(s);
    let mut suite = Suite::new("square calculus");

    let report = validate_crossed_module(&cm.to_def());
    suite.outcomes.push(LawOutcome {
        name: "crossed-module axioms".into(),
        cases: 1,
        sampled: false,
        violations: report.len() as u128,
        witness: report.issues().first().map(|i| i.message.clone()),
    });
    suite.outcomes.push(check_law("hcompose closure", &[g, h, g, h], &s, |c| {
        let (a, b) = (sq(c[0], c[1]), sq(c[2], c[3]));
        let r = cm.hcompose(a, b).unwrap();
        let ok = cm.bnd(r.label()) == cm.g_mul(r.bottom(), cm.g_inv(r.top()));
        expect(ok, || format!("{} ∘ {}", d(&a), d(&b)))
    }));
    suite.outcomes.push(check_law("vcompose closure", &[g, h, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let b = under(a, c[2]);
        let r = cm.vcompose(a, b).unwrap();
        let ok = cm.bnd(r.label()) == cm.g_mul(r.bottom(), cm.g_inv(r.top())) && r.top() == a.top() && r.bottom() == b.bottom();
        expect(ok, || format!("{} over {}", d(&a), d(&b)))
    }));
    suite.outcomes.push(check_law("inverse closure", &[g, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let ok = cm.is_valid_square(&cm.hinverse(a).unwrap()) && cm.is_valid_square(&cm.vinverse(a).unwrap());
        expect(ok, || d(&a))
    }));
    suite.outcomes.push(check_law("hcompose associativity", &[g, h, g, h, g, h], &s, |c| {
        let (a, b, e) = (sq(c[0], c[1]), sq(c[2], c[3]), sq(c[4], c[5]));
        let l = cm.hcompose(cm.hcompose(a, b).unwrap(), e).unwrap();
        let r = cm.hcompose(a, cm.hcompose(b, e).unwrap()).unwrap();
        expect(l == r, || format!("{} {} {}", d(&a), d(&b), d(&e)))
    }));
    suite.outcomes.push(check_law("vcompose associativity", &[g, h, h, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let b = under(a, c[2]);
        let e = under(b, c[3]);
        let l = cm.vcompose(cm.vcompose(a, b).unwrap(), e).unwrap();
        let r = cm.vcompose(a, cm.vcompose(b, e).unwrap()).unwrap();
        expect(l == r, || format!("{} {} {}", d(&a), d(&b), d(&e)))
    }));
    suite.outcomes.push(check_law("identities", &[g, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let one = cm.identity_square(cm.g_one());
        let ok = cm.hcompose(one, a).unwrap() == a
            && cm.hcompose(a, one).unwrap() == a
            && cm.vcompose(cm.identity_square(a.top()), a).unwrap() == a
            && cm.vcompose(a, cm.identity_square(a.bottom())).unwrap() == a;
        expect(ok, || d(&a))
    }));
    suite.outcomes.push(check_law("horizontal inverses", &[g, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let i = cm.hinverse(a).unwrap();
        let one = cm.identity_square(cm.g_one());
        let ok = cm.hcompose(a, i).unwrap() == one && cm.hcompose(i, a).unwrap() == one && cm.hinverse(i).unwrap() == a;
        expect(ok, || d(&a))
    }));
    suite.outcomes.push(check_law("vertical inverses", &[g, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let i = cm.vinverse(a).unwrap();
        let ok = cm.vcompose(a, i).unwrap() == cm.identity_square(a.top())
            && cm.vcompose(i, a).unwrap() == cm.identity_square(a.bottom())
            && cm.vinverse(i).unwrap() == a;
        expect(ok, || d(&a))
    }));
    suite.outcomes.push(check_law("interchange", &[g, h, g, h, h, h], &s, |c| {
        let (a, b) = (sq(c[0], c[1]), sq(c[2], c[3]));
        let (a2, b2) = (under(a, c[4]), under(b, c[5]));
        let l = cm.vcompose(cm.hcompose(a, b).unwrap(), cm.hcompose(a2, b2).unwrap()).unwrap();
        let r = cm.hcompose(cm.vcompose(a, a2).unwrap(), cm.vcompose(b, b2).unwrap()).unwrap();
        expect(l == r, || format!("{} {} / {} {}", d(&a), d(&b), d(&a2), d(&b2)))
    }));
    suite.outcomes.push(check_law("hinverse of hcompose", &[g, h, g, h], &s, |c| {
        let (a, b) = (sq(c[0], c[1]), sq(c[2], c[3]));
        let l = cm.hinverse(cm.hcompose(a, b).unwrap()).unwrap();
        let r = cm.hcompose(cm.hinverse(b).unwrap(), cm.hinverse(a).unwrap()).unwrap();
        expect(l == r, || format!("{} {}", d(&a), d(&b)))
    }));
    suite.outcomes.push(check_law("hinverse of vcompose", &[g, h, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let b = under(a, c[2]);
        let l = cm.hinverse(cm.vcompose(a, b).unwrap()).unwrap();
        let r = cm.vcompose(cm.hinverse(a).unwrap(), cm.hinverse(b).unwrap()).unwrap();
        expect(l == r, || format!("{} over {}", d(&a), d(&b)))
    }));
    suite.outcomes.push(check_law("vinverse of vcompose", &[g, h, h], &s, |c| {
        let a = sq(c[0], c[1]);
        let b = under(a, c[2]);
        let l = cm.vinverse(cm.vcompose(a, b).unwrap()).unwrap();
        let r = cm.vcompose(cm.vinverse(b).unwrap(), cm.vinverse(a).unwrap()).unwrap();
        expect(l == r, || format!("{} over {}", d(&a), d(&b)))
    }));
    suite
}

/// Every object of `Conn`, with morphisms addressed by index and built on
/// demand.
struct ConnData<'a> {
    conn: Conn<'a>,
    objects: Vec<ConnObject>,
    per_object: usize,
}

impl<'a> ConnData<'a> {
    fn new(cm: &'a CrossedModule, d: &'a Discretization, budget: &Budget) -> Result<Self> {
        let conn = Conn::new(cm, d);
        let objects = conn.enumerate_objects(budget)?;
        let per_object = cm.h_order().pow(d.edge_count() as u32);
        budget.check((objects.len() as u128).saturating_mul(per_object as u128))?;
        Ok(Self { conn, objects, per_object })
    }

    fn morphism_count(&self) -> usize {
        self.objects.len() * self.per_object
    }

    /// Morphisms in the order of [`Conn::enumerate_morphisms`].
    fn morphism(&self, i: usize) -> ConnMorphism {
        let cm = self.conn.crossed_module();
        let n = self.conn.discretization().edge_count();
        let mut eta = vec![cm.h_one(); n];
        let mut k = i % self.per_object;
        for slot in eta.iter_mut().rev() {
            *slot = cm.h_at(k % cm.h_order());
            k /= cm.h_order();
        }
        ConnMorphism {
            source: self.objects[i / self.per_object].clone(),
            eta,
        }
    }

    /// The morphism out of `target(m)` with labels `digits`.
    fn after(&self, m: &ConnMorphism, digits: &[usize]) -> ConnMorphism {
        ConnMorphism {
            source: self.conn.target_unchecked(m),
            eta: labels(self.conn.crossed_module(), digits),
        }
    }
}

/// `Conn` is a well-defined groupoid.
pub fn conn_groupoid(cm: &CrossedModule, d: &Discretization, cfg: &LawConfig) -> Result<Suite> {
    let data = ConnData::new(cm, d, &cfg.budget)?;
    let (conn, s) = (data.conn, &cfg.sampling);
    let nm = data.morphism_count();
    let eta_dims = vec![cm.h_order(); d.edge_count()];
    let ne = d.edge_count();
    let mut suite = Suite::new("connection groupoid");

    suite.outcomes.push(check_law("objects satisfy face condition", &[data.objects.len()], s, |c| {
        let x = &data.objects[c[0]];
        expect(conn.is_object(x), || show_obj(cm, x))
    }));
    suite.outcomes.push(check_law("targets are objects", &[nm], s, |c| {
        let m = &data.morphism(c[0]);
        expect(conn.target(m).is_ok_and(|y| conn.is_object(&y)), || show_mor(cm, m))
    }));
    suite.outcomes.push(check_law("face label is the unique solution", &[nm], s, |c| {
        let m = &data.morphism(c[0]);
        let y = conn.target(m).unwrap();
        let squares = conn.edge_squares(&m.source.g, &m.eta);
        let ok = d.faces().iter().enumerate().all(|(i, f)| {
            let along_e = crate::complex::evaluate_word_square(cm, &squares, f.one_source()).unwrap().label();
            let along_d = crate::complex::evaluate_word_square(cm, &squares, f.one_target()).unwrap().label();
            // h'·η(e) = η(d)·h, solved by search
            let rhs = cm.h_mul(along_d, m.source.h[i]);
            let solutions: Vec<HElem> = cm.h_elements().filter(|&h2| cm.h_mul(h2, along_e) == rhs).collect();
            solutions == [y.h[i]]
        });
        expect(ok, || show_mor(cm, m))
    }));
    let pair_dims: Vec<usize> = std::iter::once(nm).chain(eta_dims.iter().copied()).collect();
    suite.outcomes.push(check_law("composite target", &pair_dims, s, |c| {
        let m1 = &data.morphism(c[0]);
        let m2 = data.after(m1, &c[1..]);
        let comp = conn.compose(&m2, m1).unwrap();
        let ok = comp.source == m1.source && conn.target(&comp).unwrap() == conn.target(&m2).unwrap();
        expect(ok, || format!("{} then {}", show_mor(cm, m1), show_mor(cm, &m2)))
    }));
    let triple_dims: Vec<usize> = pair_dims.iter().chain(&eta_dims).copied().collect();
    suite.outcomes.push(check_law("associativity", &triple_dims, s, |c| {
        let m1 = &data.morphism(c[0]);
        let m2 = data.after(m1, &c[1..1 + ne]);
        let m3 = data.after(&m2, &c[1 + ne..]);
        let l = conn.compose(&m3, &conn.compose(&m2, m1).unwrap()).unwrap();
        let r = conn.compose(&conn.compose(&m3, &m2).unwrap(), m1).unwrap();
        expect(l == r, || format!("{} {} {}", show_mor(cm, m1), show_mor(cm, &m2), show_mor(cm, &m3)))
    }));
    suite.outcomes.push(check_law("identities", &[nm], s, |c| {
        let m = &data.morphism(c[0]);
        let y = conn.target(m).unwrap();
        let ok = conn.target(&conn.identity(&m.source)).unwrap() == m.source
            && conn.compose(m, &conn.identity(&m.source)).unwrap() == *m
            && conn.compose(&conn.identity(&y), m).unwrap() == *m;
        expect(ok, || show_mor(cm, m))
    }));
    suite.outcomes.push(check_law("inverses", &[nm], s, |c| {
        let m = &data.morphism(c[0]);
        let i = conn.inverse(m).unwrap();
        let ok = conn.compose(&i, m).unwrap() == conn.identity(&m.source)
            && conn.compose(m, &i).unwrap() == conn.identity(&i.source)
            && conn.inverse(&i).unwrap() == *m;
        expect(ok, || show_mor(cm, m))
    }));
    Ok(suite)
}

struct GaugeData<'a> {
    gauge: Gauge<'a>,
    objects: Vec<GaugeObject>,
    morphisms: Vec<GaugeMorphism>,
}

impl<'a> GaugeData<'a> {
    fn new(cm: &'a CrossedModule, d: &'a Discretization, budget: &Budget) -> Result<Self> {
        let gauge = Gauge::new(cm, d);
        Ok(Self {
            gauge,
            objects: gauge.enumerate_objects(budget)?,
            morphisms: gauge.enumerate_morphisms(budget)?,
        })
    }

    fn morphism(&self, i: usize) -> GaugeMorphism {
        self.morphisms[i].clone()
    }

    fn after(&self, m: &GaugeMorphism, digits: &[usize]) -> GaugeMorphism {
        GaugeMorphism {
            source: self.gauge.target(m),
            chi: labels(self.gauge.crossed_module(), digits),
        }
    }
}

/// The gauge 2-group is a categorical group.
pub fn gauge_group(cm: &CrossedModule, d: &Discretization, cfg: &LawConfig) -> Result<Suite> {
    let data = GaugeData::new(cm, d, &cfg.budget)?;
    let (gauge, s) = (data.gauge, &cfg.sampling);
    let n = data.morphisms.len();
    let nv = d.vertex_count();
    let chi_dims = vec![cm.h_order(); nv];
    let pair: Vec<usize> = std::iter::once(n).chain(chi_dims.iter().copied()).collect();
    let mut suite = Suite::new("gauge categorical group");
    let unit = gauge.identity(&gauge.unit());

    suite.outcomes.push(check_law("compose associativity", &[pair.clone(), chi_dims.clone()].concat(), s, |c| {
        let m1 = &data.morphism(c[0]);
        let m2 = data.after(m1, &c[1..1 + nv]);
        let m3 = data.after(&m2, &c[1 + nv..]);
        let l = gauge.compose(&m3, &gauge.compose(&m2, m1).unwrap()).unwrap();
        let r = gauge.compose(&gauge.compose(&m3, &m2).unwrap(), m1).unwrap();
        expect(l == r, || show_gmor(cm, m1))
    }));
    suite.outcomes.push(check_law("tensor associativity", &[n, n, n], s, |c| {
        let (a, b, e) = (&data.morphism(c[0]), &data.morphism(c[1]), &data.morphism(c[2]));
        let l = gauge.tensor(&gauge.tensor(a, b).unwrap(), e).unwrap();
        let r = gauge.tensor(a, &gauge.tensor(b, e).unwrap()).unwrap();
        expect(l == r, || format!("{} {} {}", show_gmor(cm, a), show_gmor(cm, b), show_gmor(cm, e)))
    }));
    suite.outcomes.push(check_law("interchange", &[pair.clone(), pair.clone()].concat(), s, |c| {
        let a1 = &data.morphism(c[0]);
        let a2 = data.after(a1, &c[1..1 + nv]);
        let b1 = &data.morphisms[c[1 + nv]];
        let b2 = data.after(b1, &c[2 + nv..]);
        let l = gauge.tensor(&gauge.compose(&a2, a1).unwrap(), &gauge.compose(&b2, b1).unwrap()).unwrap();
        let r = gauge.compose(&gauge.tensor(&a2, &b2).unwrap(), &gauge.tensor(a1, b1).unwrap()).unwrap();
        expect(l == r, || format!("{} {}", show_gmor(cm, a1), show_gmor(cm, b1)))
    }));
    suite.outcomes.push(check_law("units", &[n], s, |c| {
        let m = &data.morphism(c[0]);
        let ok = gauge.tensor(&unit, m).unwrap() == *m
            && gauge.tensor(m, &unit).unwrap() == *m
            && gauge.compose(m, &gauge.identity(&m.source)).unwrap() == *m
            && gauge.compose(&gauge.identity(&gauge.target(m)), m).unwrap() == *m;
        expect(ok, || show_gmor(cm, m))
    }));
    suite.outcomes.push(check_law("compose inverses", &[n], s, |c| {
        let m = &data.morphism(c[0]);
        let i = gauge.compose_inverse(m).unwrap();
        let ok = gauge.compose(&i, m).unwrap() == gauge.identity(&m.source)
            && gauge.compose(m, &i).unwrap() == gauge.identity(&i.source);
        expect(ok, || show_gmor(cm, m))
    }));
    suite.outcomes.push(check_law("tensor inverses", &[n], s, |c| {
        let m = &data.morphism(c[0]);
        let i = gauge.tensor_inverse(m).unwrap();
        let ok = gauge.tensor(&i, m).unwrap() == unit && gauge.tensor(m, &i).unwrap() == unit;
        expect(ok, || show_gmor(cm, m))
    }));
    Ok(suite)
}

/// The gauge 2-group acts strictly on `Conn`.
pub fn gauge_action(cm: &CrossedModule, d: &Discretization, cfg: &LawConfig) -> Result<Suite> {
    let cdata = ConnData::new(cm, d, &cfg.budget)?;
    let gdata = GaugeData::new(cm, d, &cfg.budget)?;
    let (conn, gauge, s) = (cdata.conn, gdata.gauge, &cfg.sampling);
    let (nx, nm) = (cdata.objects.len(), cdata.morphism_count());
    let (ng, ngm) = (gdata.objects.len(), gdata.morphisms.len());
    let (nv, ne) = (d.vertex_count(), d.edge_count());
    let mut suite = Suite::new("gauge action");

    suite.outcomes.push(check_law("act on objects is valid", &[ng, nx], s, |c| {
        let (gamma, x) = (&gdata.objects[c[0]], &cdata.objects[c[1]]);
        let y = gauge.act_object(gamma, x).unwrap();
        let ok = conn.is_object(&y) && gauge.act_object_by_squares(gamma, x).unwrap() == y;
        expect(ok, || show_obj(cm, x))
    }));
    suite.outcomes.push(check_law("act on morphisms is well defined", &[ngm, nm], s, |c| {
        let (gm, m) = (&gdata.morphisms[c[0]], &cdata.morphism(c[1]));
        let out = gauge.act_morphism(gm, m).unwrap();
        let ok = out.source == gauge.act_object(&gm.source, &m.source).unwrap()
            && conn.target(&out).unwrap() == gauge.act_object(&gauge.target(gm), &conn.target(m).unwrap()).unwrap();
        expect(ok, || format!("{} on {}", show_gmor(cm, gm), show_mor(cm, m)))
    }));
    let dims: Vec<usize> = [vec![ngm], vec![cm.h_order(); nv], vec![nm], vec![cm.h_order(); ne]].concat();
    suite.outcomes.push(check_law("functoriality", &dims, s, |c| {
        let gm1 = &gdata.morphisms[c[0]];
        let gm2 = gdata.after(gm1, &c[1..1 + nv]);
        let m1 = &cdata.morphism(c[1 + nv]);
        let m2 = cdata.after(m1, &c[2 + nv..]);
        let l = conn
            .compose(&gauge.act_morphism(&gm2, &m2).unwrap(), &gauge.act_morphism(gm1, m1).unwrap())
            .unwrap();
        let r = gauge
            .act_morphism(&gauge.compose(&gm2, gm1).unwrap(), &conn.compose(&m2, m1).unwrap())
            .unwrap();
        expect(l == r, || format!("{} {} on {} {}", show_gmor(cm, gm1), show_gmor(cm, &gm2), show_mor(cm, m1), show_mor(cm, &m2)))
    }));
    suite.outcomes.push(check_law("identities map to identities", &[ng, nx], s, |c| {
        let (gamma, x) = (&gdata.objects[c[0]], &cdata.objects[c[1]]);
        let out = gauge.act_morphism(&gauge.identity(gamma), &conn.identity(x)).unwrap();
        expect(out == conn.identity(&gauge.act_object(gamma, x).unwrap()), || show_obj(cm, x))
    }));
    suite.outcomes.push(check_law("action square on objects", &[ng, ng, nx], s, |c| {
        let (a, b, x) = (&gdata.objects[c[0]], &gdata.objects[c[1]], &cdata.objects[c[2]]);
        let l = gauge.act_object(&gauge.tensor_objects(a, b).unwrap(), x).unwrap();
        let r = gauge.act_object(a, &gauge.act_object(b, x).unwrap()).unwrap();
        expect(l == r, || show_obj(cm, x))
    }));
    suite.outcomes.push(check_law("action square on morphisms", &[ngm, ngm, nm], s, |c| {
        let (a, b, m) = (&gdata.morphisms[c[0]], &gdata.morphisms[c[1]], &cdata.morphism(c[2]));
        let l = gauge.act_morphism(&gauge.tensor(a, b).unwrap(), m).unwrap();
        let r = gauge.act_morphism(a, &gauge.act_morphism(b, m).unwrap()).unwrap();
        expect(l == r, || format!("{} ⊗ {} on {}", show_gmor(cm, a), show_gmor(cm, b), show_mor(cm, m)))
    }));
    let unit = gauge.unit();
    suite.outcomes.push(check_law("unit on objects", &[nx], s, |c| {
        let x = &cdata.objects[c[0]];
        expect(gauge.act_object(&unit, x).unwrap() == *x, || show_obj(cm, x))
    }));
    let unit_id = gauge.identity(&unit);
    suite.outcomes.push(check_law("unit on morphisms", &[nm], s, |c| {
        let m = &cdata.morphism(c[0]);
        expect(gauge.act_morphism(&unit_id, m).unwrap() == *m, || show_mor(cm, m))
    }));
    Ok(suite)
}

/// `Conn//Gauge` is a double groupoid.
pub fn double_groupoid(cm: &CrossedModule, d: &Discretization, cfg: &LawConfig) -> Result<Suite> {
    let cdata = ConnData::new(cm, d, &cfg.budget)?;
    let gdata = GaugeData::new(cm, d, &cfg.budget)?;
    let dg = DoubleGroupoid::new(cdata.conn, gdata.gauge);
    let (conn, gauge, s) = (cdata.conn, gdata.gauge, &cfg.sampling);
    let (ngm, nm) = (gdata.morphisms.len(), cdata.morphism_count());
    let (nv, ne) = (d.vertex_count(), d.edge_count());
    let h = cm.h_order();
    let square = |c: &[usize]| DGSquare {
        gmor: gdata.morphisms[c[0]].clone(),
        cmor: cdata.morphism(c[1]),
    };
    let show = |sq: &DGSquare| format!("{} × {}", show_gmor(cm, &sq.gmor), show_mor(cm, &sq.cmor));
    // The square to the right of `s1` with the given labels.
    let right_of = |s1: &DGSquare, c: &[usize]| DGSquare {
        gmor: gdata.after(&s1.gmor, &c[..nv]),
        cmor: cdata.after(&s1.cmor, &c[nv..]),
    };
    // The square under `upper` whose gauge part starts at `gm.source`.
    let under = |upper: &DGSquare, gm: &GaugeMorphism| DGSquare {
        gmor: gm.clone(),
        cmor: gauge.act_morphism(&upper.gmor, &upper.cmor).unwrap(),
    };
    let sq_dims = [ngm, nm];
    let right_dims: Vec<usize> = vec![h; nv + ne];
    let mut suite = Suite::new("transformation double groupoid");

    suite.outcomes.push(check_law("boundary consistency", &sq_dims, s, |c| {
        let sq = square(c);
        let b = dg.boundaries(&sq).unwrap();
        let ok = b.top.source == b.left.base
            && conn.target(&b.top).unwrap() == b.right.base
            && dg.vert_target(&b.left).unwrap() == b.bottom.source
            && dg.vert_target(&b.right).unwrap() == conn.target(&b.bottom).unwrap()
            && b.left.gamma == sq.gmor.source
            && b.right.gamma == gauge.target(&sq.gmor);
        expect(ok, || show(&sq))
    }));
    suite.outcomes.push(check_law("horizontal composition", &[&sq_dims[..], &right_dims].concat(), s, |c| {
        let s1 = square(c);
        let s2 = right_of(&s1, &c[2..]);
        let comp = dg.hcompose(&s2, &s1).unwrap();
        let (b, b1, b2) = (dg.boundaries(&comp).unwrap(), dg.boundaries(&s1).unwrap(), dg.boundaries(&s2).unwrap());
        let ok = b.left == b1.left
            && b.right == b2.right
            && b.top == conn.compose(&b2.top, &b1.top).unwrap()
            && b.bottom == conn.compose(&b2.bottom, &b1.bottom).unwrap();
        expect(ok, || format!("{} then {}", show(&s1), show(&s2)))
    }));
    suite.outcomes.push(check_law("vertical composition", &[ngm, nm, ngm], s, |c| {
        let upper = square(c);
        let lower = under(&upper, &gdata.morphisms[c[2]]);
        let comp = dg.vcompose(&upper, &lower).unwrap();
        let (b, bu, bl) = (dg.boundaries(&comp).unwrap(), dg.boundaries(&upper).unwrap(), dg.boundaries(&lower).unwrap());
        let ok = b.top == bu.top
            && b.bottom == bl.bottom
            && b.left == dg.vert_compose(&bu.left, &bl.left).unwrap()
            && b.right == dg.vert_compose(&bu.right, &bl.right).unwrap();
        expect(ok, || format!("{} over {}", show(&upper), show(&lower)))
    }));
    suite.outcomes.push(check_law(
        "horizontal associativity",
        &[&sq_dims[..], &right_dims, &right_dims].concat(),
        s,
        |c| {
            let s1 = square(c);
            let s2 = right_of(&s1, &c[2..2 + nv + ne]);
            let s3 = right_of(&s2, &c[2 + nv + ne..]);
            let l = dg.hcompose(&s3, &dg.hcompose(&s2, &s1).unwrap()).unwrap();
            let r = dg.hcompose(&dg.hcompose(&s3, &s2).unwrap(), &s1).unwrap();
            expect(l == r, || show(&s1))
        },
    ));
    suite.outcomes.push(check_law("vertical associativity", &[ngm, nm, ngm, ngm], s, |c| {
        let s1 = square(c);
        let s2 = under(&s1, &gdata.morphisms[c[2]]);
        let s3 = under(&s2, &gdata.morphisms[c[3]]);
        let l = dg.vcompose(&dg.vcompose(&s1, &s2).unwrap(), &s3).unwrap();
        let r = dg.vcompose(&s1, &dg.vcompose(&s2, &s3).unwrap()).unwrap();
        expect(l == r, || show(&s1))
    }));
    suite.outcomes.push(check_law("interchange", &[&sq_dims[..], &right_dims, &[ngm], &vec![h; nv]].concat(), s, |c| {
        let s11 = square(c);
        let s12 = right_of(&s11, &c[2..2 + nv + ne]);
        let s21 = under(&s11, &gdata.morphisms[c[2 + nv + ne]]);
        let s22 = DGSquare {
            gmor: gdata.after(&s21.gmor, &c[3 + nv + ne..]),
            cmor: gauge.act_morphism(&s12.gmor, &s12.cmor).unwrap(),
        };
        let l = dg
            .vcompose(&dg.hcompose(&s12, &s11).unwrap(), &dg.hcompose(&s22, &s21).unwrap())
            .unwrap();
        let r = dg
            .hcompose(&dg.vcompose(&s12, &s22).unwrap(), &dg.vcompose(&s11, &s21).unwrap())
            .unwrap();
        expect(l == r, || format!("{} / {}", show(&s11), show(&s22)))
    }));
    suite.outcomes.push(check_law("identities", &sq_dims, s, |c| {
        let sq = square(c);
        let b = dg.boundaries(&sq).unwrap();
        let ok = dg.hcompose(&sq, &dg.h_identity(&b.left)).unwrap() == sq
            && dg.hcompose(&dg.h_identity(&b.right), &sq).unwrap() == sq
            && dg.vcompose(&dg.v_identity(&b.top), &sq).unwrap() == sq
            && dg.vcompose(&sq, &dg.v_identity(&b.bottom)).unwrap() == sq;
        expect(ok, || show(&sq))
    }));
    suite.outcomes.push(check_law("inverses", &sq_dims, s, |c| {
        let sq = square(c);
        let b = dg.boundaries(&sq).unwrap();
        let hi = dg.hinverse(&sq).unwrap();
        let vi = dg.vinverse(&sq).unwrap();
        let ok = dg.hcompose(&hi, &sq).unwrap() == dg.h_identity(&b.left)
            && dg.hcompose(&sq, &hi).unwrap() == dg.h_identity(&b.right)
            && dg.vcompose(&sq, &vi).unwrap() == dg.v_identity(&b.top)
            && dg.vcompose(&vi, &sq).unwrap() == dg.v_identity(&b.bottom)
            && dg.hinverse(&hi).unwrap() == sq
            && dg.vinverse(&vi).unwrap() == sq;
        expect(ok, || show(&sq))
    }));
    let nx = cdata.objects.len();
    let ng = gdata.objects.len();
    suite.outcomes.push(check_law("vertical morphisms", &[ng, ng, nx], s, |c| {
        let x = &cdata.objects[c[2]];
        let v1 = crate::double::VertMorphism {
            gamma: gdata.objects[c[0]].clone(),
            base: x.clone(),
        };
        let v2 = crate::double::VertMorphism {
            gamma: gdata.objects[c[1]].clone(),
            base: dg.vert_target(&v1).unwrap(),
        };
        let comp = dg.vert_compose(&v1, &v2).unwrap();
        let inv = dg.vert_inverse(&v1).unwrap();
        let ok = dg.vert_target(&comp).unwrap() == dg.vert_target(&v2).unwrap()
            && dg.vert_compose(&v1, &inv).unwrap() == dg.vert_identity(x)
            && dg.vert_compose(&dg.vert_identity(x), &v1).unwrap() == v1;
        expect(ok, || show_obj(cm, x))
    }));
    Ok(suite)
}

/// A change script induces an isomorphism of connection groupoids.
pub fn rediscretization(cm: &CrossedModule, d: &Discretization, specs: &[ChangeSpec], cfg: &LawConfig) -> Result<Suite> {
    let script = Script::new(d, specs)?;
    let undo = Script::new(script.result(), &script.inverse_specs())?;
    let before = ConnData::new(cm, d, &cfg.budget)?;
    let after = ConnData::new(cm, script.result(), &cfg.budget)?;
    let s = &cfg.sampling;
    let (nx, nm) = (before.objects.len(), before.morphism_count());
    let kinds: Vec<&str> = specs.iter().map(ChangeSpec::kind).collect();
    let mut suite = Suite::new(format!("rediscretization [{}]", kinds.join(", ")));

    suite.outcomes.push(LawOutcome {
        name: "discretization round trip".into(),
        cases: 1,
        sampled: false,
        violations: u128::from(undo.result() != d),
        witness: (undo.result() != d).then(|| "undoing the script does not restore the discretization".into()),
    });
    let counts_ok = after.objects.len() == nx && after.morphism_count() == nm;
    suite.outcomes.push(LawOutcome {
        name: "counts invariant".into(),
        cases: 1,
        sampled: false,
        violations: u128::from(!counts_ok),
        witness: (!counts_ok).then(|| {
            format!(
                "objects {} → {}, morphisms {} → {}",
                nx,
                after.objects.len(),
                nm,
                after.morphism_count()
            )
        }),
    });
    let mut images: Vec<ConnObject> = before.objects.iter().map(|x| script.object(cm, x).unwrap()).collect();
    images.sort();
    images.dedup();
    let bijective = images == after.objects;
    suite.outcomes.push(LawOutcome {
        name: "objects map bijectively".into(),
        cases: nx as u128,
        sampled: false,
        violations: u128::from(!bijective),
        witness: (!bijective).then(|| "image of the object set differs from the changed object set".into()),
    });
    suite.outcomes.push(check_law("objects round trip", &[nx], s, |c| {
        let x = &before.objects[c[0]];
        let y = script.object(cm, x).unwrap();
        expect(after.conn.is_object(&y) && undo.object(cm, &y).unwrap() == *x, || show_obj(cm, x))
    }));
    suite.outcomes.push(check_law("morphisms round trip", &[nm], s, |c| {
        let m = &before.morphism(c[0]);
        let t = script.morphism(cm, m).unwrap();
        expect(undo.morphism(cm, &t).unwrap() == *m, || show_mor(cm, m))
    }));
    suite.outcomes.push(check_law("sources and targets preserved", &[nm], s, |c| {
        let m = &before.morphism(c[0]);
        let t = script.morphism(cm, m).unwrap();
        let ok = t.source == script.object(cm, &m.source).unwrap()
            && after.conn.target(&t).ok() == Some(script.object(cm, &before.conn.target(m).unwrap()).unwrap());
        expect(ok, || show_mor(cm, m))
    }));
    suite.outcomes.push(check_law("identities preserved", &[nx], s, |c| {
        let x = &before.objects[c[0]];
        let t = script.morphism(cm, &before.conn.identity(x)).unwrap();
        expect(t == after.conn.identity(&script.object(cm, x).unwrap()), || show_obj(cm, x))
    }));
    let dims: Vec<usize> = std::iter::once(nm).chain(vec![cm.h_order(); d.edge_count()]).collect();
    suite.outcomes.push(check_law("composition preserved", &dims, s, |c| {
        let m1 = &before.morphism(c[0]);
        let m2 = before.after(m1, &c[1..]);
        let l = script.morphism(cm, &before.conn.compose(&m2, m1).unwrap()).unwrap();
        let r = after
            .conn
            .compose(&script.morphism(cm, &m2).unwrap(), &script.morphism(cm, m1).unwrap())
            .unwrap();
        expect(l == r, || format!("{} then {}", show_mor(cm, m1), show_mor(cm, &m2)))
    }));
    Ok(suite)
}

/// On the sphere the gauge action splits into independent actions at the two
/// vertices, and the face label transforms by the 0-source vertex only.
pub fn sphere_factorization(cm: &CrossedModule, cfg: &LawConfig) -> Result<Suite> {
    let d = build_example(Example::S2);
    let data = ConnData::new(cm, &d, &cfg.budget)?;
    let (conn, gauge, s) = (data.conn, Gauge::new(cm, &d), &cfg.sampling);
    let (v, w) = (d.vertex_index("v").unwrap(), d.vertex_index("w").unwrap());
    let (at_v, at_w) = (single_vertex_gauges(cm, &d, v), single_vertex_gauges(cm, &d, w));
    let local = |vertex: usize, g: usize, h: usize| {
        let mut m = gauge.identity(&gauge.unit());
        m.source.gamma[vertex] = cm.g_at(g);
        m.chi[vertex] = cm.h_at(h);
        m
    };
    let (g, h) = (cm.g_order(), cm.h_order());
    let (nx, nm) = (data.objects.len(), data.morphism_count());
    let mut suite = Suite::new("sphere factorization");

    suite.outcomes.push(check_law("vertex actions commute on objects", &[g, g, nx], s, |c| {
        let (a, b, x) = (&at_v[c[0]], &at_w[c[1]], &data.objects[c[2]]);
        let l = gauge.act_object(a, &gauge.act_object(b, x).unwrap()).unwrap();
        let r = gauge.act_object(b, &gauge.act_object(a, x).unwrap()).unwrap();
        expect(l == r, || show_obj(cm, x))
    }));
    suite.outcomes.push(check_law("vertex actions commute on morphisms", &[g, h, g, h, nm], s, |c| {
        let (a, b, m) = (local(v, c[0], c[1]), local(w, c[2], c[3]), &data.morphism(c[4]));
        let l = gauge.act_morphism(&a, &gauge.act_morphism(&b, m).unwrap()).unwrap();
        let r = gauge.act_morphism(&b, &gauge.act_morphism(&a, m).unwrap()).unwrap();
        expect(l == r, || format!("{} {} on {}", show_gmor(cm, &a), show_gmor(cm, &b), show_mor(cm, m)))
    }));
    let gammas = gauge.enumerate_objects(&cfg.budget)?;
    suite.outcomes.push(check_law("face label transforms as γ(v)▷h", &[gammas.len(), nx], s, |c| {
        let (gamma, x) = (&gammas[c[0]], &data.objects[c[1]]);
        let y = gauge.act_object(gamma, x).unwrap();
        let ok = y.h[0] == cm.act(gamma.gamma[v], x.h[0]) && conn.is_object(&y);
        expect(ok, || show_obj(cm, x))
    }));
    suite.outcomes.push(check_law("action factors through the vertices", &[gammas.len(), nx], s, |c| {
        let (gamma, x) = (&gammas[c[0]], &data.objects[c[1]]);
        let split = gauge
            .act_object(&at_v[gamma.gamma[v].index()], &gauge.act_object(&at_w[gamma.gamma[w].index()], x).unwrap())
            .unwrap();
        expect(split == gauge.act_object(gamma, x).unwrap(), || show_obj(cm, x))
    }));
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn runner_is_exhaustive_under_budget() {
        let mut seen = Vec::new();
        let o = check_law("t", &[2, 3], &Sampling::default(), |c| {
            seen.push(c.to_vec());
            (c == [1, 2]).then(|| "last".to_string())
        });
        assert_eq!(seen.len(), 6);
        assert!(!o.sampled);
        assert_eq!(o.violations, 1);
        assert_eq!(o.witness.as_deref(), Some("last"));
    }

    #[test]
    fn runner_samples_deterministically() {
        let s = Sampling { max_cases: 50, seed: 7 };
        let mut a = Vec::new();
        let mut b = Vec::new();
        check_law("t", &[100, 100], &s, |c| {
            a.push(c.to_vec());
            None
        });
        let o = check_law("t", &[100, 100], &s, |c| {
            b.push(c.to_vec());
            None
        });
        assert!(o.sampled);
        assert_eq!(o.cases, 50);
        assert_eq!(a, b);
    }

    #[test]
    fn empty_space_has_no_cases() {
        let o = check_law("t", &[3, 0], &Sampling::default(), |_| Some("x".into()));
        assert_eq!((o.cases, o.violations), (0, 0));
    }

    #[test]
    fn small_suites_pass() {
        let cm = catalog::z2_z3_inversion();
        assert!(square_calculus(&cm).passed());
        let d = build_example(Example::S2);
        let cfg = LawConfig::default();
        assert!(conn_groupoid(&cm, &d, &cfg).unwrap().passed());
        assert!(gauge_group(&cm, &d, &cfg).unwrap().passed());
        assert!(gauge_action(&cm, &d, &cfg).unwrap().passed());
        assert!(sphere_factorization(&cm, &cfg).unwrap().passed());
    }

    #[test]
    fn corrupted_module_fails_axioms() {
        let cm = catalog::z2_z4();
        let mut def = cm.to_def();
        def.boundary.insert("1".into(), "0".into());
        assert!(validate_crossed_module(&def).has_code("boundary-not-homomorphism"));
    }
}
