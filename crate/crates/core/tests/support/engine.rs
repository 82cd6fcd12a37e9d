//! Whole-table evaluation of many formulas over many structures at once.
//!
//! Every formula ranges over the single variable `x`. A table holds its value
//! at every point of every structure, structures laid end to end. Tables are
//! interned by content, so formulas with equal tables share a class, and a
//! node is keyed by its connective and the classes of its children.

use std::collections::{HashMap, HashSet};
use std::ops::Range;
use std::rc::Rc;

use redprod_core::semantics::table::atom_table;
use redprod_core::{FiniteMetricStructure, Formula, PLFunc, Rational};

pub const VAR: &str = "x";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Key {
    Atom(Formula),
    Unary(usize, usize),
    Sup(usize),
    Inf(usize),
    Max(Vec<usize>),
    Min(Vec<usize>),
    H(usize, Rational, usize, usize),
}

pub struct Engine {
    pub structures: Vec<FiniteMetricStructure>,
    offsets: Vec<usize>,
    maps: Vec<PLFunc>,
    map_ids: HashMap<PLFunc, usize>,
    tables: Vec<Rc<Vec<Rational>>>,
    by_table: HashMap<Rc<Vec<Rational>>, usize>,
    by_key: HashMap<Key, usize>,
    by_formula: HashMap<Formula, usize>,
    mapped: HashMap<(usize, usize), Rc<Vec<Rational>>>,
}

impl Engine {
    pub fn new(structures: Vec<FiniteMetricStructure>) -> Self {
        let mut offsets = vec![0];
        for m in &structures {
            offsets.push(offsets.last().unwrap() + m.size());
        }
        Engine {
            structures,
            offsets,
            maps: Vec::new(),
            map_ids: HashMap::new(),
            tables: Vec::new(),
            by_table: HashMap::new(),
            by_key: HashMap::new(),
            by_formula: HashMap::new(),
            mapped: HashMap::new(),
        }
    }

    pub fn segment(&self, s: usize) -> Range<usize> {
        self.offsets[s]..self.offsets[s + 1]
    }

    pub fn classes(&self) -> usize {
        self.tables.len()
    }

    pub fn table(&self, class: usize) -> &[Rational] {
        &self.tables[class]
    }

    fn map_id(&mut self, c: &PLFunc) -> usize {
        if let Some(&id) = self.map_ids.get(c) {
            return id;
        }
        self.maps.push(c.clone());
        self.map_ids.insert(c.clone(), self.maps.len() - 1);
        self.maps.len() - 1
    }

    fn bound(v: &str) {
        assert_eq!(v, VAR, "formulas must quantify only `{VAR}`");
    }

    /// The key of `f`, classing its children first.
    pub fn key_of(&mut self, f: &Formula) -> Key {
        match f {
            Formula::Atomic(..) | Formula::Dist(..) => Key::Atom(f.clone()),
            Formula::Unary(c, a) => {
                let c = self.map_id(c);
                Key::Unary(c, self.class(a))
            }
            Formula::Sup(v, a) => {
                Self::bound(v);
                Key::Sup(self.class(a))
            }
            Formula::Inf(v, a) => {
                Self::bound(v);
                Key::Inf(self.class(a))
            }
            Formula::Max(xs) | Formula::Min(xs) => {
                let ids = xs.iter().map(|x| self.class(x)).collect();
                if matches!(f, Formula::Max(_)) {
                    Key::Max(ids)
                } else {
                    Key::Min(ids)
                }
            }
            Formula::H(h) => {
                Self::bound(&h.var);
                let d = self.map_id(&h.d);
                Key::H(d, h.delta, self.class(&h.phi), self.class(&h.psi))
            }
            Formula::Affine { .. } => panic!("affine nodes are not enumerated: {f}"),
        }
    }

    /// The class of `f`, computing and interning its table if needed.
    pub fn class(&mut self, f: &Formula) -> usize {
        if let Some(&id) = self.by_formula.get(f) {
            return id;
        }
        let key = self.key_of(f);
        let id = match self.by_key.get(&key) {
            Some(&id) => id,
            None => {
                let table = self.compute(&key);
                let id = self.intern(table);
                self.by_key.insert(key, id);
                id
            }
        };
        self.by_formula.insert(f.clone(), id);
        id
    }

    fn intern(&mut self, table: Vec<Rational>) -> usize {
        let table = Rc::new(table);
        if let Some(&id) = self.by_table.get(&table) {
            return id;
        }
        self.tables.push(table.clone());
        self.by_table.insert(table, self.tables.len() - 1);
        self.tables.len() - 1
    }

    fn mapped(&mut self, c: usize, a: usize) -> Rc<Vec<Rational>> {
        if let Some(t) = self.mapped.get(&(c, a)) {
            return t.clone();
        }
        let t: Rc<Vec<Rational>> = Rc::new(self.tables[a].iter().map(|&v| self.maps[c].eval(v)).collect());
        self.mapped.insert((c, a), t.clone());
        t
    }

    fn per_segment(&self, len: usize, mut f: impl FnMut(Range<usize>) -> Rational) -> Vec<Rational> {
        let mut out = Vec::with_capacity(len);
        for s in 0..self.structures.len() {
            let r = self.segment(s);
            let v = f(r.clone());
            out.extend(std::iter::repeat(v).take(r.len()));
        }
        out
    }

    /// The table of a node given by its key, without interning it.
    pub fn compute(&mut self, key: &Key) -> Vec<Rational> {
        let len = *self.offsets.last().unwrap();
        match key {
            Key::Atom(f) => {
                let pool = [VAR.to_string()];
                let mut out = Vec::with_capacity(len);
                for m in &self.structures {
                    out.extend(atom_table(m, f, &pool).expect("atom over the pool"));
                }
                out
            }
            Key::Unary(c, a) => self.mapped(*c, *a).as_ref().clone(),
            Key::Sup(a) | Key::Inf(a) => {
                let t = self.tables[*a].clone();
                let sup = matches!(key, Key::Sup(_));
                self.per_segment(len, |r| {
                    let it = t[r].iter().copied();
                    if sup {
                        it.max().unwrap()
                    } else {
                        it.min().unwrap()
                    }
                })
            }
            Key::Max(ids) | Key::Min(ids) => {
                let max = matches!(key, Key::Max(_));
                let mut out = self.tables[ids[0]].as_ref().clone();
                for &c in &ids[1..] {
                    for (o, v) in out.iter_mut().zip(self.tables[c].iter()) {
                        *o = if max { (*o).max(*v) } else { (*o).min(*v) };
                    }
                }
                out
            }
            Key::H(d, delta, a, b) => {
                let dphi = self.mapped(*d, *a);
                let (phi, psi) = (self.tables[*a].clone(), self.tables[*b].clone());
                let delta = *delta;
                self.per_segment(len, |r| {
                    let lower = phi[r.clone()].iter().copied().min().unwrap();
                    let upper = r.map(|i| dphi[i].min(delta).min(psi[i])).max().unwrap();
                    lower.max(upper)
                })
            }
        }
    }

    /// One value per structure, for a sentence's table.
    pub fn sentence_values(&self, table: &[Rational]) -> Vec<Rational> {
        (0..self.structures.len()).map(|s| table[self.offsets[s]]).collect()
    }
}

/// Distinct per-structure value vectors of a stream of sentences.
pub struct SentenceSummary {
    pub sentences: usize,
    pub keys: usize,
    pub vectors: Vec<Vec<Rational>>,
    /// The first sentence giving each vector.
    pub witnesses: Vec<Formula>,
    pub samples: Vec<Formula>,
}

/// Evaluates every sentence through the engine. Nodes of depth below
/// `top` are classed and kept; top-level nodes are keyed by their children's
/// classes and only their values are kept.
pub fn summarize(
    engine: &mut Engine,
    sentences: impl Iterator<Item = Formula>,
    top: usize,
    sample_every: usize,
) -> SentenceSummary {
    let mut top_keys: HashSet<Key> = HashSet::new();
    let mut by_vector: HashMap<Vec<Rational>, usize> = HashMap::new();
    let mut out = SentenceSummary {
        sentences: 0,
        keys: 0,
        vectors: Vec::new(),
        witnesses: Vec::new(),
        samples: Vec::new(),
    };
    for f in sentences {
        if out.sentences % sample_every == 0 {
            out.samples.push(f.clone());
        }
        out.sentences += 1;
        let values = if f.depth() < top {
            let c = engine.class(&f);
            engine.sentence_values(engine.table(c))
        } else {
            let key = engine.key_of(&f);
            if top_keys.contains(&key) {
                continue;
            }
            let table = engine.compute(&key);
            let values = engine.sentence_values(&table);
            top_keys.insert(key);
            values
        };
        if !by_vector.contains_key(&values) {
            by_vector.insert(values.clone(), out.vectors.len());
            out.vectors.push(values);
            out.witnesses.push(f);
        }
    }
    out.keys = top_keys.len();
    out
}
