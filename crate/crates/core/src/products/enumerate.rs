//! Deterministic enumeration of formulas by depth, and a bounded search for
//! Palyutin sentences separating two structures.

use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::ProductError;
use crate::fragments::{is_b_combination, FragmentLabel};
use crate::rational::Rational;
use crate::semantics::{eval_sentence, tuple_at, tuple_count, FiniteMetricStructure};
use crate::syntax::{ClassicalFormula, ClassicalSignature, Formula, HNode, PLFunc, Signature, Term};

/// The unary connectives available to an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Basis {
    pub connectives: Vec<PLFunc>,
}

impl Basis {
    pub fn new(connectives: Vec<PLFunc>) -> Self {
        Basis { connectives }
    }

    /// `{t, 1 - t, max(0, t)}`.
    pub fn standard() -> Self {
        Basis::new(vec![PLFunc::identity(), PLFunc::one_minus(), PLFunc::positive_part()])
    }

    pub fn nondecreasing(&self) -> Vec<PLFunc> {
        self.connectives
            .iter()
            .filter(|c| c.monotonicity().is_nondecreasing())
            .cloned()
            .collect()
    }

    pub fn nonincreasing(&self) -> Vec<PLFunc> {
        self.connectives
            .iter()
            .filter(|c| c.monotonicity().is_nonincreasing())
            .cloned()
            .collect()
    }

    /// Nonincreasing connectives paired with their fixed points.
    pub fn h_maps(&self) -> Vec<(PLFunc, Rational)> {
        self.nonincreasing()
            .into_iter()
            .filter_map(|d| d.fixed_point().ok().map(|fp| (d, fp)))
            .collect()
    }
}

impl Default for Basis {
    fn default() -> Self {
        Basis::standard()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumFragment {
    Horn,
    Palyutin,
    BCombination,
    /// Every formula built from atoms with the basis, `max`, `min`, both
    /// quantifiers and h-nodes.
    Formula,
}

impl EnumFragment {
    pub const ALL: [EnumFragment; 4] = [
        EnumFragment::Horn,
        EnumFragment::Palyutin,
        EnumFragment::BCombination,
        EnumFragment::Formula,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnumFragment::Horn => "horn",
            EnumFragment::Palyutin => "palyutin",
            EnumFragment::BCombination => "b-combination",
            EnumFragment::Formula => "formula",
        }
    }
}

impl fmt::Display for EnumFragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnumFragment {
    type Err = ProductError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EnumFragment::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ProductError::UnsupportedFragment(s.to_string()))
    }
}

impl TryFrom<FragmentLabel> for EnumFragment {
    type Error = ProductError;

    fn try_from(label: FragmentLabel) -> Result<Self, Self::Error> {
        label.name().parse()
    }
}

/// Atomic formulas over the pool variables and the signature's constants:
/// every predicate applied to every tuple of terms, then `d(s, t)` for each
/// pair of terms `s <= t` in that order. Function symbols are not applied.
pub fn enumeration_atoms(sig: &Signature, pool: &[&str]) -> Vec<Formula> {
    let terms: Vec<Term> = pool
        .iter()
        .map(|v| Term::var(v))
        .chain(sig.constants.iter().map(|c| Term::constant(c)))
        .collect();
    let mut out = Vec::new();
    for p in &sig.predicates {
        for t in 0..tuple_count(terms.len(), p.arity) {
            let args = tuple_at(terms.len(), p.arity, t).into_iter().map(|i| terms[i].clone()).collect();
            out.push(Formula::atom(&p.name, args));
        }
    }
    for i in 0..terms.len() {
        for j in i..terms.len() {
            out.push(Formula::dist(terms[i].clone(), terms[j].clone()));
        }
    }
    out
}

struct Grammar {
    fragment: EnumFragment,
    atoms: Vec<Formula>,
    maps: Vec<PLFunc>,
    heads: Vec<PLFunc>,
    bodies: Vec<PLFunc>,
    h_maps: Vec<(PLFunc, Rational)>,
    pool: Vec<String>,
    min: bool,
}

impl Grammar {
    fn new(sig: &Signature, fragment: EnumFragment, basis: &Basis, pool: &[&str]) -> Self {
        let horn = fragment == EnumFragment::Horn;
        let maps = match fragment {
            EnumFragment::Horn => Vec::new(),
            EnumFragment::Palyutin => basis.nondecreasing(),
            EnumFragment::BCombination | EnumFragment::Formula => basis.connectives.clone(),
        };
        Grammar {
            fragment,
            atoms: enumeration_atoms(sig, pool),
            maps,
            heads: if horn { basis.nondecreasing() } else { Vec::new() },
            bodies: if horn { basis.nonincreasing() } else { Vec::new() },
            h_maps: if horn { Vec::new() } else { basis.h_maps() },
            pool: pool.iter().map(|v| v.to_string()).collect(),
            min: matches!(fragment, EnumFragment::BCombination | EnumFragment::Formula),
        }
    }

    /// Primitive Horn formulas other than bare atoms: `C alpha` at depth 1,
    /// `min(head, D_1 beta_1, ..., D_n beta_n)` at depth 2 with the bodies a
    /// nonempty set taken in order.
    fn horn_primitives(&self, d: usize) -> Vec<Formula> {
        let apply = |maps: &[PLFunc]| -> Vec<Formula> {
            maps.iter()
                .flat_map(|c| self.atoms.iter().map(move |a| Formula::unary(c.clone(), a.clone())))
                .collect()
        };
        match d {
            1 => apply(&self.heads),
            2 => {
                let heads: Vec<Formula> = self.atoms.iter().cloned().chain(apply(&self.heads)).collect();
                let bodies = apply(&self.bodies);
                let mut out = Vec::new();
                for head in &heads {
                    for mask in 1u64..(1 << bodies.len()) {
                        let mut items = vec![head.clone()];
                        items.extend((0..bodies.len()).filter(|b| mask >> b & 1 == 1).map(|b| bodies[b].clone()));
                        out.push(Formula::Min(items));
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }
}

type Stream = Box<dyn Iterator<Item = Formula>>;

/// Formulas of depth exactly `d`, given every formula of smaller depth in
/// `below`, those of depth `d - 1` starting at index `fresh`.
fn level(g: Rc<Grammar>, below: Rc<Vec<Formula>>, fresh: usize, d: usize) -> Stream {
    let n = below.len();
    let mut parts: Vec<Stream> = Vec::new();
    if g.fragment == EnumFragment::Horn {
        parts.push(Box::new(g.horn_primitives(d).into_iter()));
    }
    for c in g.maps.clone() {
        let b = below.clone();
        parts.push(Box::new((fresh..n).map(move |i| Formula::unary(c.clone(), b[i].clone()))));
    }
    for v in g.pool.clone() {
        let (b, w) = (below.clone(), v.clone());
        parts.push(Box::new((fresh..n).map(move |i| Formula::sup(&v, b[i].clone()))));
        let b = below.clone();
        parts.push(Box::new((fresh..n).map(move |i| Formula::inf(&w, b[i].clone()))));
    }
    let pairs = move || (0..n).flat_map(move |i| (fresh.max(i + 1)..n).map(move |j| (i, j)));
    let b = below.clone();
    parts.push(Box::new(pairs().map(move |(i, j)| Formula::Max(vec![b[i].clone(), b[j].clone()]))));
    if g.min {
        let b = below.clone();
        parts.push(Box::new(pairs().map(move |(i, j)| Formula::Min(vec![b[i].clone(), b[j].clone()]))));
    }
    for (dm, delta) in g.h_maps.clone() {
        for v in g.pool.clone() {
            let b = below.clone();
            let dm = dm.clone();
            let ordered = (0..n).flat_map(move |i| (0..n).filter(move |&j| i.max(j) >= fresh).map(move |j| (i, j)));
            parts.push(Box::new(ordered.map(move |(i, j)| {
                Formula::H(Box::new(HNode {
                    var: v.clone(),
                    d: dm.clone(),
                    delta,
                    phi: b[i].clone(),
                    psi: b[j].clone(),
                }))
            })));
        }
    }
    let all = parts.into_iter().flatten();
    if g.fragment == EnumFragment::BCombination {
        Box::new(all.filter(is_b_combination))
    } else {
        Box::new(all)
    }
}

/// A lazily generated sequence of formulas.
pub struct FormulaStream {
    inner: Stream,
}

impl Iterator for FormulaStream {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        self.inner.next()
    }
}

fn sort_by_print(level: &mut [Formula]) {
    level.sort_by_cached_key(|f| f.to_string());
}

/// Every formula of `fragment` up to AST depth `depth` over the pool
/// variables, without repetitions. Formulas come by increasing depth; each
/// level below `depth` is sorted by its printed form, while the last level is
/// generated lazily in a fixed constructor order.
pub fn enumerate_fragment_formulas(
    sig: &Signature,
    fragment: EnumFragment,
    depth: usize,
    basis: &Basis,
    pool: &[&str],
) -> FormulaStream {
    let g = Rc::new(Grammar::new(sig, fragment, basis, pool));
    let mut below = g.atoms.clone();
    sort_by_print(&mut below);
    if depth == 0 {
        return FormulaStream {
            inner: Box::new(below.into_iter()),
        };
    }
    let mut fresh = 0;
    for d in 1..depth {
        let mut next: Vec<Formula> = level(g.clone(), Rc::new(below.clone()), fresh, d).collect();
        sort_by_print(&mut next);
        fresh = below.len();
        below.extend(next);
    }
    let below = Rc::new(below);
    let last = level(g, below.clone(), fresh, depth);
    FormulaStream {
        inner: Box::new((0..below.len()).map(move |i| below[i].clone()).chain(last)),
    }
}

/// The sentences among [`enumerate_fragment_formulas`].
pub fn enumerate_fragment_sentences(
    sig: &Signature,
    fragment: EnumFragment,
    depth: usize,
    basis: &Basis,
    pool: &[&str],
) -> FormulaStream {
    let all = enumerate_fragment_formulas(sig, fragment, depth, basis, pool);
    FormulaStream {
        inner: Box::new(all.filter(Formula::is_sentence)),
    }
}

/// Classical Palyutin formulas up to AST depth `depth`: atoms (relations
/// over pool variables and constants, then `s = t` for `s <= t`), closed
/// under `&`, both quantifiers and the h-operation, whose own AST depth is
/// three more than its arguments'. Sorted by depth, then printed form.
pub fn enumerate_classical_palyutin(sig: &ClassicalSignature, depth: usize, pool: &[&str]) -> Vec<ClassicalFormula> {
    let terms: Vec<Term> = pool
        .iter()
        .map(|v| Term::var(v))
        .chain(sig.constants.iter().map(|c| Term::constant(c)))
        .collect();
    let mut atoms = Vec::new();
    for (r, arity) in &sig.relations {
        for t in 0..tuple_count(terms.len(), *arity) {
            let args = tuple_at(terms.len(), *arity, t).into_iter().map(|i| terms[i].clone()).collect();
            atoms.push(ClassicalFormula::atom(r, args));
        }
    }
    for i in 0..terms.len() {
        for j in i..terms.len() {
            atoms.push(ClassicalFormula::eq(terms[i].clone(), terms[j].clone()));
        }
    }
    let mut levels: Vec<Vec<ClassicalFormula>> = vec![atoms];
    for d in 1..=depth {
        let below: Vec<&ClassicalFormula> = levels.iter().flatten().collect();
        let fresh = below.len() - levels[d - 1].len();
        let mut next = Vec::new();
        for i in 0..below.len() {
            for j in fresh.max(i + 1)..below.len() {
                next.push(ClassicalFormula::and(below[i].clone(), below[j].clone()));
            }
        }
        for v in pool {
            for f in &levels[d - 1] {
                next.push(ClassicalFormula::exists(v, f.clone()));
                next.push(ClassicalFormula::forall(v, f.clone()));
            }
        }
        if d >= 3 {
            let args: Vec<&ClassicalFormula> = levels[..=d - 3].iter().flatten().collect();
            let newest = args.len() - levels[d - 3].len();
            for v in pool {
                for i in 0..args.len() {
                    for j in 0..args.len() {
                        if i.max(j) >= newest {
                            next.push(ClassicalFormula::h_op(v, args[i].clone(), args[j].clone()));
                        }
                    }
                }
            }
        }
        next.sort_by_cached_key(|f| f.to_string());
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

fn as_text<S: Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    #[serde(serialize_with = "as_text")]
    pub sentence: Formula,
    pub left: Rational,
    pub right: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivVerdict {
    pub depth: usize,
    /// Sentences compared before stopping.
    pub checked: usize,
    pub equivalent: bool,
    pub separator: Option<Separation>,
    pub warnings: Vec<String>,
}

/// [`palyutin_equiv_in_pool`] with the single variable `x`.
pub fn palyutin_equiv_bounded(
    m: &FiniteMetricStructure,
    n: &FiniteMetricStructure,
    depth: usize,
    basis: &Basis,
) -> Result<EquivVerdict, ProductError> {
    palyutin_equiv_in_pool(m, n, depth, basis, &["x"])
}

/// Compares `m` and `n` on every enumerated Palyutin sentence up to `depth`
/// and stops at the first one on which they differ.
pub fn palyutin_equiv_in_pool(
    m: &FiniteMetricStructure,
    n: &FiniteMetricStructure,
    depth: usize,
    basis: &Basis,
    pool: &[&str],
) -> Result<EquivVerdict, ProductError> {
    if m.signature != n.signature {
        return Err(ProductError::SignatureMismatch(1));
    }
    let mut warnings = Vec::new();
    if basis.h_maps().is_empty() {
        warnings.push("basis has no nonincreasing connective with a fixed point; h-nodes are not enumerated".to_string());
    }
    let mut checked = 0;
    for sentence in enumerate_fragment_sentences(&m.signature, EnumFragment::Palyutin, depth, basis, pool) {
        checked += 1;
        let (left, right) = (eval_sentence(m, &sentence)?, eval_sentence(n, &sentence)?);
        if left != right {
            return Ok(EquivVerdict {
                depth,
                checked,
                equivalent: false,
                separator: Some(Separation { sentence, left, right }),
                warnings,
            });
        }
    }
    Ok(EquivVerdict {
        depth,
        checked,
        equivalent: true,
        separator: None,
        warnings,
    })
}
