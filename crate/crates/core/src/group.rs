//! Finite groups given by explicit Cayley tables.

use std::collections::{BTreeMap, HashMap};

use crate::report::Report;

/// Serializable description of a finite group: element ids, the full
/// multiplication table keyed by `(a, b)`, and the identity.
///
/// Inverses are not part of the description; they are derived.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupDef {
    pub elements: Vec<String>,
    pub mul: BTreeMap<(String, String), String>,
    pub identity: String,
}

/// A validated finite group. Elements are addressed by their position in the
/// declared element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    index: HashMap<String, usize>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
}

/// Element ids must be nonempty and free of commas, since tables are keyed
/// by `"a,b"` strings.
pub fn valid_element_id(id: &str) -> bool {
    !id.is_empty() && !id.contains(',')
}

/// Checks a group description. `label` prefixes every message (`G`, `H`).
pub fn validate_group_def(label: &str, def: &GroupDef) -> Report {
    let mut report = Report::new();
    let mut index = HashMap::new();
    if def.elements.is_empty() {
        report.malformed("empty-group", format!("{label}: element list is empty"));
    }
    for (i, name) in def.elements.iter().enumerate() {
        if !valid_element_id(name) {
            report.malformed(
                "bad-element-id",
                format!("{label}: element id {name:?} must be nonempty and contain no comma"),
            );
        }
        if index.insert(name.as_str(), i).is_some() {
            report.malformed("duplicate-element", format!("{label}: element {name:?} declared twice"));
        }
    }
    if !index.contains_key(def.identity.as_str()) {
        report.dangling(
            "unknown-element",
            format!("{label}: identity {:?} is not a declared element", def.identity),
        );
    }
    for ((a, b), c) in &def.mul {
        for x in [a, b, c] {
            if !index.contains_key(x.as_str()) {
                report.dangling(
                    "unknown-element",
                    format!("{label}: multiplication entry {a},{b} -> {c} mentions undeclared {x:?}"),
                );
            }
        }
    }
    let mut missing = 0usize;
    let mut first_missing = None;
    for a in &def.elements {
        for b in &def.elements {
            if !def.mul.contains_key(&(a.clone(), b.clone())) {
                missing += 1;
                first_missing.get_or_insert_with(|| format!("{a},{b}"));
            }
        }
    }
    if let Some(first) = first_missing {
        report.malformed(
            "missing-entry",
            format!("{label}: multiplication table has {missing} missing entries (first: {first})"),
        );
    }
    if !report.is_empty() {
        return report;
    }

    let n = def.elements.len();
    let e = index[def.identity.as_str()];
    let table: Vec<usize> = (0..n * n)
        .map(|k| {
            let key = (def.elements[k / n].clone(), def.elements[k % n].clone());
            index[def.mul[&key].as_str()]
        })
        .collect();
    let mul = |a: usize, b: usize| table[a * n + b];
    let name = |a: usize| def.elements[a].as_str();

    if let Some(a) = (0..n).find(|&a| mul(e, a) != a || mul(a, e) != a) {
        report.violation(
            "identity-not-neutral",
            format!("{label}: identity {} is not two-sided neutral; witness a={}", name(e), name(a)),
        );
    }
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    report.violation(
                        "not-associative",
                        format!(
                            "{label}: multiplication not associative; witness ({},{},{})",
                            name(a),
                            name(b),
                            name(c)
                        ),
                    );
                    break 'assoc;
                }
            }
        }
    }
    if let Some(a) = (0..n).find(|&a| !(0..n).any(|b| mul(a, b) == e && mul(b, a) == e)) {
        report.violation(
            "no-inverse",
            format!("{label}: element {} has no two-sided inverse", name(a)),
        );
    }
    report
}

impl FiniteGroup {
    /// Builds a group from a description, returning every problem found.
    pub fn from_def(def: &GroupDef) -> Result<Self, Report> {
        Self::from_def_labelled("group", def)
    }

    pub(crate) fn from_def_labelled(label: &str, def: &GroupDef) -> Result<Self, Report> {
        validate_group_def(label, def).into_result()?;
        let index: HashMap<String, usize> = def
            .elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let n = def.elements.len();
        let mul = (0..n * n)
            .map(|k| {
                let key = (def.elements[k / n].clone(), def.elements[k % n].clone());
                index[def.mul[&key].as_str()]
            })
            .collect();
        Ok(Self::assemble(def.elements.clone(), mul, index[&def.identity]))
    }

    /// Builds a group from a closure. The resulting table is validated.
    pub fn from_fn(
        names: Vec<String>,
        identity: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, Report> {
        let n = names.len();
        let mut def = GroupDef {
            elements: names.clone(),
            mul: BTreeMap::new(),
            identity: names.get(identity).cloned().unwrap_or_default(),
        };
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                let c = names.get(c).cloned().unwrap_or_else(|| format!("#{c}"));
                def.mul.insert((names[a].clone(), names[b].clone()), c);
            }
        }
        Self::from_def(&def)
    }

    fn assemble(names: Vec<String>, mul: Vec<usize>, identity: usize) -> Self {
        let n = names.len();
        let inv = (0..n)
            .map(|a| {
                (0..n)
                    .find(|&b| mul[a * n + b] == identity)
                    .expect("validated group has inverses")
            })
            .collect();
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self {
            names,
            index,
            mul,
            inv,
            identity,
        }
    }

    /// The cyclic group Z_n with elements `"0"`..`"n-1"`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group needs n > 0");
        let names = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::assemble(names, mul, 0)
    }

    /// The one-element group.
    pub fn trivial() -> Self {
        Self::assemble(vec!["1".to_string()], vec![0], 0)
    }

    /// The symmetric group S_n (1 ≤ n ≤ 6), elements named in cycle notation
    /// (`"()"`, `"(12)"`, `"(123)"`, ...). The product `a·b` applies `b` first.
    pub fn symmetric(n: usize) -> Self {
        assert!((1..=6).contains(&n), "symmetric group supported for 1 <= n <= 6");
        let perms = permutations(n);
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let m = perms.len();
        let mut mul = vec![0; m * m];
        for (i, a) in perms.iter().enumerate() {
            for (j, b) in perms.iter().enumerate() {
                let c: Vec<usize> = (0..n).map(|x| a[b[x]]).collect();
                mul[i * m + j] = index[c.as_slice()];
            }
        }
        let names = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::assemble(names, mul, 0)
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.names.len() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn to_def(&self) -> GroupDef {
        let n = self.order();
        let mut mul = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                mul.insert(
                    (self.names[a].clone(), self.names[b].clone()),
                    self.names[self.mul(a, b)].clone(),
                );
            }
        }
        GroupDef {
            elements: self.names.clone(),
            mul,
            identity: self.names[self.identity].clone(),
        }
    }

    pub(crate) fn raw_table(&self) -> &[usize] {
        &self.mul
    }
}

/// All permutations of `0..n` in lexicographic order (identity first).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
