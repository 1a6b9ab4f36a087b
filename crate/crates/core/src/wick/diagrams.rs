//! Identification of Wick terms with the named coefficient sums, and the
//! prefactors of each coefficient in U_m through third order.
//!
//! A term is turned into a product of vertices K and energy denominators Δε
//! by substituting its deltas and ground labels into the interaction
//! template. The orbitals are real, so K_{ij;kl} is symmetric in all four
//! indices and Δε_{ij} in both; a pattern is canonical once every factor is
//! sorted and the summation variables are renamed to the smallest form.

use super::poly::{mbody_decompose, FallingPoly};
use super::{expectation, OpString, WickTerm};
use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Zero,
    Var(u8),
}

/// Π K over `vertices` divided by Π Δε over `denominators`, summed over the
/// variables except where a denominator vanishes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub vertices: Vec<[Atom; 4]>,
    pub denominators: Vec<[Atom; 2]>,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = |x: &Atom| match x {
            Atom::Zero => "0".to_string(),
            Atom::Var(v) => ((b'a' + v) as char).to_string(),
        };
        for k in &self.vertices {
            write!(f, "K({})", k.iter().map(a).collect::<String>())?;
        }
        if !self.denominators.is_empty() {
            write!(f, " /")?;
            for d in &self.denominators {
                write!(f, " D({})", d.iter().map(a).collect::<String>())?;
            }
        }
        Ok(())
    }
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, (n - 1) as u8);
            out.push(q);
        }
    }
    out
}

/// Smallest image of `p` under renaming of its variables.
pub fn canonical_pattern(p: &Pattern) -> Pattern {
    let mut vars: Vec<u8> = p
        .vertices
        .iter()
        .flatten()
        .chain(p.denominators.iter().flatten())
        .filter_map(|a| match a {
            Atom::Var(v) => Some(*v),
            Atom::Zero => None,
        })
        .collect();
    vars.sort_unstable();
    vars.dedup();
    let mut best: Option<Pattern> = None;
    for perm in permutations(vars.len()) {
        let map = |a: &Atom| match a {
            Atom::Zero => Atom::Zero,
            Atom::Var(v) => Atom::Var(perm[vars.iter().position(|x| x == v).expect("variable listed")]),
        };
        let mut vertices: Vec<[Atom; 4]> = p
            .vertices
            .iter()
            .map(|k| {
                let mut k = [map(&k[0]), map(&k[1]), map(&k[2]), map(&k[3])];
                k.sort();
                k
            })
            .collect();
        vertices.sort();
        let mut denominators: Vec<[Atom; 2]> = p
            .denominators
            .iter()
            .map(|d| {
                let mut d = [map(&d[0]), map(&d[1])];
                d.sort();
                d
            })
            .collect();
        denominators.sort();
        let cand = Pattern { vertices, denominators };
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    best.expect("at least the identity permutation")
}

/// A vertex/denominator template written with one character per index,
/// e.g. ("00ij,ij00", "ij").
struct Template<'a> {
    vertices: &'a str,
    denominators: &'a str,
}

impl Template<'_> {
    /// Pattern with the labels replaced through `atom`.
    fn substitute(&self, atom: &dyn Fn(char) -> Atom) -> Pattern {
        let vertices = self
            .vertices
            .split(',')
            .map(|k| {
                let c: Vec<Atom> = k.chars().map(atom).collect();
                [c[0], c[1], c[2], c[3]]
            })
            .collect();
        let denominators = self
            .denominators
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|d| {
                let c: Vec<Atom> = d.chars().map(atom).collect();
                [c[0], c[1]]
            })
            .collect();
        Pattern { vertices, denominators }
    }

    /// The pattern of the template itself, every letter its own variable.
    fn pattern(&self) -> Pattern {
        canonical_pattern(&self.substitute(&|c| if c == '0' { Atom::Zero } else { Atom::Var(c as u8 - b'a') }))
    }

    /// The pattern one Wick term selects.
    fn for_term(&self, t: &WickTerm) -> Pattern {
        let atom = |c: char| {
            if c == '0' {
                return Atom::Zero;
            }
            let l = c.to_string();
            if t.ground.contains(&l) {
                return Atom::Zero;
            }
            let idx = t.classes.iter().position(|cl| cl.contains(&l)).expect("label in a class");
            Atom::Var(idx as u8)
        };
        canonical_pattern(&self.substitute(&atom))
    }
}

/// The coefficient definitions, as sums over K and Δε.
const NAMED: &[(&str, &str, &str)] = &[
    ("alpha2_1", "0000", ""),
    ("beta2_2", "00ij,ij00", "ij"),
    ("alpha3_2", "000i,i000", "i0"),
    ("beta2_3", "00ij,ijkl,kl00", "ij,kl"),
    ("beta3_3", "00ij,ij0k,k000", "ij,k0"),
    ("alpha3_3", "00ij,j00k,ik00", "ij,ik"),
    ("alpha4_1", "00ij,j000,i000", "ij,i0"),
    ("alpha4_2", "000i,i00j,j000", "i0,j0"),
    ("alpha4_3", "00ij,0000,ij00", "ij,ij"),
    ("alpha5_3", "000i,0000,i000", "i0,i0"),
];

/// Which part of the perturbation series an entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Contribution {
    /// ⟨V⟩.
    FirstOrder,
    /// ⟨V_ct⟩, the counterterm at first order.
    Counterterm,
    /// −Σ V V/Δε.
    SecondOrder,
    /// Σ V V V/(Δε Δε).
    ThirdOrderChain,
    /// −V₀₀,₀₀ Σ V V/Δε².
    ThirdOrderRenormalization,
    /// −2 Σ V_ct V/Δε.
    CountertermCross,
    /// ⟨V′⟩, first order in the effective range.
    EffectiveRange,
}

/// Coefficient `coefficient` enters U_m as `prefactor`·coefficient·`factor`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefactorEntry {
    pub contribution: Contribution,
    pub coefficient: String,
    /// Powers of ξ = a_t/σ, χ = a_ct/σ and r_eff/σ multiplying it.
    pub factor: &'static str,
    pub m: usize,
    #[serde(serialize_with = "ser_rational")]
    pub prefactor: Rational64,
    /// Number of Wick terms that selected this coefficient.
    pub wick_terms: i64,
}

fn ser_rational<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefactorTable {
    pub entries: Vec<PrefactorEntry>,
}

impl PrefactorTable {
    /// Sum of the prefactors of `coefficient` in U_m over all contributions.
    pub fn net(&self, coefficient: &str, m: usize) -> Rational64 {
        self.entries.iter().filter(|e| e.coefficient == coefficient && e.m == m).map(|e| e.prefactor).sum()
    }

    /// Sum of all prefactors in U_m with the given factor.
    pub fn net_body(&self, m: usize, factor: &str) -> Rational64 {
        self.entries.iter().filter(|e| e.m == m && e.factor == factor).map(|e| e.prefactor).sum()
    }

    pub fn get(&self, contribution: Contribution, coefficient: &str, m: usize) -> Option<&PrefactorEntry> {
        self.entries.iter().find(|e| e.contribution == contribution && e.coefficient == coefficient && e.m == m)
    }
}

struct Source<'a> {
    contribution: Contribution,
    factor: &'static str,
    ops: OpString,
    shift: i64,
    /// Polynomial in N from the ground-state normalizations outside ⟨ops⟩.
    outer: FallingPoly,
    overall: Rational64,
    template: Template<'a>,
    /// Overrides the name lookup (the effective-range vertex K′ has the
    /// same index pattern as K).
    name: Option<&'static str>,
}

fn expand(src: Source<'_>, named: &BTreeMap<Pattern, &'static str>) -> Result<Vec<PrefactorEntry>> {
    let w = expectation(&src.ops, src.shift);
    let mut by_name: BTreeMap<&'static str, (FallingPoly, i64)> = BTreeMap::new();
    for t in &w.terms {
        let p = src.template.for_term(t);
        let name = match src.name {
            Some(n) => n,
            None => *named.get(&p).ok_or_else(|| Error::Invalid(format!("Wick term selects an unnamed sum {p}")))?,
        };
        let e = by_name.entry(name).or_insert((FallingPoly::zero(), 0));
        e.0 = &e.0 + &(&src.outer * &w.term_polynomial(t)).scale(src.overall);
        e.1 += t.multiplicity;
    }
    let mut out = Vec::new();
    for (name, (poly, count)) in by_name {
        for (m, u) in mbody_decompose(&poly).coefficients {
            out.push(PrefactorEntry {
                contribution: src.contribution,
                coefficient: name.to_string(),
                factor: src.factor,
                m,
                prefactor: u,
                wick_terms: count,
            });
        }
    }
    Ok(out)
}

fn q(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Every coefficient's prefactor in every U_m, from the operator strings of
/// the first-, second- and third-order energy with counterterm and
/// effective-range vertices.
pub fn third_order_prefactors() -> Result<PrefactorTable> {
    let named: BTreeMap<Pattern, &'static str> =
        NAMED.iter().map(|(n, v, d)| (Template { vertices: v, denominators: d }.pattern(), *n)).collect();
    let ff2 = FallingPoly::falling(2);
    let ground_pair: OpString = "0+ 0+ 0 0".parse()?;
    let pair = || OpString::new().ann("i").ann("j").cre("k").cre("l").not_all_ground(&["i", "j"]);
    let one = FallingPoly::constant(q(1, 1));
    let sources = vec![
        Source {
            contribution: Contribution::FirstOrder,
            factor: "xi",
            ops: ground_pair.clone(),
            shift: 0,
            outer: one.clone(),
            overall: q(1, 2),
            template: Template { vertices: "0000", denominators: "" },
            name: None,
        },
        Source {
            contribution: Contribution::Counterterm,
            factor: "chi",
            ops: ground_pair.clone(),
            shift: 0,
            outer: one.clone(),
            overall: q(1, 2),
            template: Template { vertices: "0000", denominators: "" },
            name: None,
        },
        Source {
            contribution: Contribution::SecondOrder,
            factor: "xi^2",
            ops: pair(),
            shift: 2,
            outer: ff2.clone(),
            overall: q(-1, 4),
            template: Template { vertices: "00ij,kl00", denominators: "ij" },
            name: None,
        },
        Source {
            contribution: Contribution::ThirdOrderChain,
            factor: "xi^3",
            ops: OpString::new()
                .ann("i")
                .ann("j")
                .cre("k")
                .cre("l")
                .ann("q")
                .ann("r")
                .cre("s")
                .cre("t")
                .not_all_ground(&["i", "j"])
                .not_all_ground(&["s", "t"]),
            shift: 2,
            outer: ff2.clone(),
            overall: q(1, 8),
            template: Template { vertices: "00ij,klqr,st00", denominators: "ij,st" },
            name: None,
        },
        Source {
            contribution: Contribution::ThirdOrderRenormalization,
            factor: "xi^3",
            ops: pair(),
            shift: 2,
            outer: &ff2 * &ff2,
            overall: q(-1, 8),
            template: Template { vertices: "0000,00ij,kl00", denominators: "ij,ij" },
            name: None,
        },
        Source {
            contribution: Contribution::CountertermCross,
            factor: "chi*xi",
            ops: pair(),
            shift: 2,
            outer: ff2.clone(),
            overall: q(-1, 2),
            template: Template { vertices: "00ij,kl00", denominators: "ij" },
            name: None,
        },
        Source {
            contribution: Contribution::EffectiveRange,
            factor: "reff*xi^2",
            ops: ground_pair,
            shift: 0,
            outer: one,
            overall: q(1, 2),
            template: Template { vertices: "0000", denominators: "" },
            name: Some("alpha2_12"),
        },
    ];
    let mut entries = Vec::new();
    for s in sources {
        entries.extend(expand(s, &named)?);
    }
    entries.retain(|e| !e.prefactor.is_zero());
    Ok(PrefactorTable { entries })
}
