//! Bosonic Wick contractions for ground-state expectation values, exact in
//! the particle number.
//!
//! Every label is a mode summed over the whole spectrum, ground state
//! included, unless it is declared excited. A contraction pairs an
//! annihilator with a creator to its right and gives a Kronecker delta; the
//! operators left over are normal ordered, which forces their labels to the
//! ground mode, and ⟨M| a₀†^p a₀^p |M⟩ = (M)_p.

mod diagrams;
mod poly;

pub use diagrams::{
    canonical_pattern, third_order_prefactors, Atom, Contribution, Pattern, PrefactorEntry, PrefactorTable,
};
pub use poly::{mbody_decompose, FallingPoly, MBodyDecomposition};

use crate::error::{Error, Result};
use num_rational::Rational64;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Create,
    Annihilate,
}

/// Operator target: the ground orbital or a symbolic label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Mode {
    Ground,
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Op {
    pub mode: Mode,
    pub kind: Kind,
}

/// An ordered product of creation and annihilation operators, with the
/// labels that may never be the ground mode and the label sets that may not
/// all be ground at once (an intermediate state |ij⟩ ≠ |00⟩).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OpString {
    pub ops: Vec<Op>,
    pub excited: BTreeSet<String>,
    pub not_all_ground: Vec<Vec<String>>,
}

impl OpString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ann(mut self, label: &str) -> Self {
        self.ops.push(Op { mode: mode_of(label), kind: Kind::Annihilate });
        self
    }

    pub fn cre(mut self, label: &str) -> Self {
        self.ops.push(Op { mode: mode_of(label), kind: Kind::Create });
        self
    }

    pub fn with_excited(mut self, labels: &[&str]) -> Self {
        self.excited.extend(labels.iter().map(|s| s.to_string()));
        self
    }

    pub fn not_all_ground(mut self, labels: &[&str]) -> Self {
        self.not_all_ground.push(labels.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn labels(&self) -> BTreeSet<String> {
        self.ops
            .iter()
            .filter_map(|o| match &o.mode {
                Mode::Label(l) => Some(l.clone()),
                Mode::Ground => None,
            })
            .collect()
    }
}

fn mode_of(label: &str) -> Mode {
    if label == "0" {
        Mode::Ground
    } else {
        Mode::Label(label.to_string())
    }
}

/// Whitespace-separated tokens: `i` annihilates mode i, `i+` creates it,
/// `0` is the ground mode.
impl FromStr for OpString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut out = OpString::new();
        for tok in s.split_whitespace() {
            let (label, create) = match tok.strip_suffix('+') {
                Some(l) => (l, true),
                None => (tok, false),
            };
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Invalid(format!("bad operator token '{tok}'")));
            }
            out = if create { out.cre(label) } else { out.ann(label) };
        }
        Ok(out)
    }
}

impl fmt::Display for OpString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .ops
            .iter()
            .map(|o| {
                let l = match &o.mode {
                    Mode::Ground => "0",
                    Mode::Label(l) => l.as_str(),
                };
                match o.kind {
                    Kind::Create => format!("{l}+"),
                    Kind::Annihilate => l.to_string(),
                }
            })
            .collect();
        write!(f, "{}", toks.join(" "))
    }
}

/// One term of an expectation value: Π δ over each class, the labels set to
/// the ground mode, and multiplicity·(M)_p with M the particle count of the
/// state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WickTerm {
    /// Labels identified by contractions; each class has at least two
    /// members, or one if a label was contracted with itself.
    pub classes: Vec<Vec<String>>,
    /// Labels forced to the ground mode.
    pub ground: Vec<String>,
    /// Number of normal-ordered a₀† a₀ pairs left, p.
    pub normal_ordered: usize,
    pub multiplicity: i64,
}

impl WickTerm {
    /// The deltas as pairs, each class written as a chain.
    pub fn deltas(&self) -> Vec<(String, String)> {
        self.classes.iter().flat_map(|c| c.windows(2).map(|w| (w[0].clone(), w[1].clone()))).collect()
    }

    fn key(&self) -> TermKey {
        (self.classes.clone(), self.ground.clone(), self.normal_ordered)
    }
}

/// Classes, ground labels and normal-ordered count: a term without its
/// multiplicity.
type TermKey = (Vec<Vec<String>>, Vec<String>, usize);

/// Sum of [`WickTerm`]s for a string evaluated in the state with N - `shift`
/// ground-mode particles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WickResult {
    pub shift: i64,
    pub terms: Vec<WickTerm>,
}

impl WickResult {
    /// The polynomial in N a term contributes when all its deltas are 1.
    pub fn term_polynomial(&self, t: &WickTerm) -> FallingPoly {
        FallingPoly::shifted_falling(self.shift, t.normal_ordered).scale(Rational64::from_integer(t.multiplicity))
    }

    /// Σ over terms of [`WickResult::term_polynomial`].
    pub fn polynomial(&self) -> FallingPoly {
        self.terms.iter().fold(FallingPoly::zero(), |acc, t| &acc + &self.term_polynomial(t))
    }

    /// Merge terms related by a relabeling symmetry of the surrounding sum.
    /// Each generator is a set of label swaps applied together; the group
    /// they generate is enumerated and each term is replaced by its smallest
    /// image.
    pub fn combine(&self, generators: &[Vec<(&str, &str)>]) -> WickResult {
        let group = generate_group(generators);
        let mut merged: BTreeMap<TermKey, i64> = BTreeMap::new();
        for t in &self.terms {
            let best = group.iter().map(|g| relabel(t, g).key()).min().expect("group contains identity");
            *merged.entry(best).or_insert(0) += t.multiplicity;
        }
        WickResult {
            shift: self.shift,
            terms: merged
                .into_iter()
                .filter(|(_, m)| *m != 0)
                .map(|((classes, ground, normal_ordered), multiplicity)| WickTerm {
                    classes,
                    ground,
                    normal_ordered,
                    multiplicity,
                })
                .collect(),
        }
    }
}

impl fmt::Display for WickResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let m = if self.shift == 0 { "N".to_string() } else { format!("(N-{})", self.shift) };
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let mut s = if t.multiplicity == 1 { String::new() } else { t.multiplicity.to_string() };
                for (a, b) in t.deltas() {
                    s.push_str(&format!("d({a},{b})"));
                }
                if t.normal_ordered > 0 {
                    let ff: Vec<String> =
                        (0..t.normal_ordered).map(|k| if k == 0 { m.clone() } else { format!("({m}-{k})") }).collect();
                    s.push_str(&ff.join(""));
                }
                if s.is_empty() {
                    s.push('1');
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type Perm = BTreeMap<String, String>;

fn generate_group(generators: &[Vec<(&str, &str)>]) -> Vec<Perm> {
    let gens: Vec<Perm> = generators
        .iter()
        .map(|g| {
            let mut p = Perm::new();
            for (a, b) in g {
                p.insert(a.to_string(), b.to_string());
                p.insert(b.to_string(), a.to_string());
            }
            p
        })
        .collect();
    let apply = |p: &Perm, l: &String| p.get(l).cloned().unwrap_or_else(|| l.clone());
    let compose = |p: &Perm, q: &Perm| -> Perm {
        let keys: BTreeSet<&String> = p.keys().chain(q.keys()).collect();
        keys.into_iter().map(|k| (k.clone(), apply(p, &apply(q, k)))).filter(|(k, v)| k != v).collect()
    };
    let mut group = vec![Perm::new()];
    let mut frontier = vec![Perm::new()];
    while let Some(p) = frontier.pop() {
        for g in &gens {
            let q = compose(g, &p);
            if !group.contains(&q) {
                group.push(q.clone());
                frontier.push(q);
            }
        }
    }
    group
}

fn relabel(t: &WickTerm, p: &Perm) -> WickTerm {
    let f = |l: &String| p.get(l).cloned().unwrap_or_else(|| l.clone());
    let mut classes: Vec<Vec<String>> = t
        .classes
        .iter()
        .map(|c| {
            let mut c: Vec<String> = c.iter().map(f).collect();
            c.sort();
            c
        })
        .collect();
    classes.sort();
    let mut ground: Vec<String> = t.ground.iter().map(f).collect();
    ground.sort();
    WickTerm { classes, ground, normal_ordered: t.normal_ordered, multiplicity: t.multiplicity }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        self.parent[x] = r;
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Every term of ⟨ops⟩ in the state with N - `shift` particles in the
/// ground mode, one term per contraction pattern. Strings with no
/// surviving pattern give an empty result.
pub fn expectation(ops: &OpString, shift: i64) -> WickResult {
    let mut terms = Vec::new();
    let mut partner: Vec<Option<usize>> = vec![None; ops.ops.len()];
    enumerate(ops, 0, &mut partner, &mut |partner| {
        if let Some(t) = evaluate(ops, partner) {
            terms.push(t);
        }
    });
    terms.sort();
    WickResult { shift, terms }
}

/// Walk annihilators left to right; each is left alone or paired with a
/// free creator to its right.
fn enumerate<F: FnMut(&[Option<usize>])>(ops: &OpString, pos: usize, partner: &mut Vec<Option<usize>>, f: &mut F) {
    if pos == ops.ops.len() {
        f(partner);
        return;
    }
    if ops.ops[pos].kind == Kind::Create {
        enumerate(ops, pos + 1, partner, f);
        return;
    }
    enumerate(ops, pos + 1, partner, f);
    for c in pos + 1..ops.ops.len() {
        if ops.ops[c].kind == Kind::Create && partner[c].is_none() {
            partner[c] = Some(pos);
            partner[pos] = Some(c);
            enumerate(ops, pos + 1, partner, f);
            partner[c] = None;
            partner[pos] = None;
        }
    }
}

fn evaluate(ops: &OpString, partner: &[Option<usize>]) -> Option<WickTerm> {
    let labels: Vec<String> = ops.labels().into_iter().collect();
    let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i + 1)).collect();
    // Node 0 is the ground mode.
    let node = |o: &Op| match &o.mode {
        Mode::Ground => 0,
        Mode::Label(l) => index[l.as_str()],
    };
    let mut uf = UnionFind::new(labels.len() + 1);
    let (mut left_a, mut left_c) = (0usize, 0usize);
    for (i, o) in ops.ops.iter().enumerate() {
        match partner[i] {
            Some(j) if j > i => uf.union(node(o), node(&ops.ops[j])),
            Some(_) => {}
            None => {
                uf.union(node(o), 0);
                match o.kind {
                    Kind::Annihilate => left_a += 1,
                    Kind::Create => left_c += 1,
                }
            }
        }
    }
    if left_a != left_c {
        return None;
    }
    let g = uf.find(0);
    let is_ground = |uf: &mut UnionFind, l: &str| uf.find(index[l]) == g;
    if ops.excited.iter().any(|l| index.contains_key(l.as_str()) && is_ground(&mut uf, l)) {
        return None;
    }
    for set in &ops.not_all_ground {
        if set.iter().all(|l| !index.contains_key(l.as_str()) || is_ground(&mut uf, l)) {
            return None;
        }
    }
    let mut by_root: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    let mut ground = Vec::new();
    for l in &labels {
        let r = uf.find(index[l.as_str()]);
        if r == g {
            ground.push(l.clone());
        } else {
            by_root.entry(r).or_default().push(l.clone());
        }
    }
    let mut classes: Vec<Vec<String>> = by_root.into_values().collect();
    classes.sort();
    Some(WickTerm { classes, ground, normal_ordered: left_a, multiplicity: 1 })
}
