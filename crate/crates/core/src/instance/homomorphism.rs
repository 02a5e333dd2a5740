//! Conjunctive matching of atoms against a dimension instance plus a
//! categorical-relation instance.

use std::collections::{BTreeMap, BTreeSet};

use super::relation::Window;
use super::{DimensionInstance, MDInstance, Value};
use crate::schema::{Atom, Term};

/// Variable assignment produced by matching.
pub type Binding = BTreeMap<String, Value>;

/// Read-only view over the two halves of an instance.
#[derive(Clone, Copy, Debug)]
pub struct Database<'a> {
    pub dimensions: &'a DimensionInstance,
    pub facts: &'a MDInstance,
}

impl<'a> Database<'a> {
    pub fn new(dimensions: &'a DimensionInstance, facts: &'a MDInstance) -> Self {
        Database { dimensions, facts }
    }

    /// Whether `predicate` names a category, roll-up or relation here.
    pub fn knows(&self, predicate: &str) -> bool {
        self.dimensions.has_category(predicate)
            || self.dimensions.has_rollup(predicate)
            || self.facts.is_declared(predicate)
    }

    fn candidates(&self, atom: &Atom, binding: &Binding, window: Window) -> Vec<&'a [Value]> {
        let bound: Vec<Option<Value>> = atom
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Some(Value::constant(c)),
                Term::Var(v) => binding.get(v).cloned(),
            })
            .collect();
        let pred = atom.predicate.as_str();

        if let Some(members) = self.dimensions.members.get(pred) {
            if !window.admits(0) || bound.len() != 1 {
                return Vec::new();
            }
            return match &bound[0] {
                Some(v) => members
                    .get(v)
                    .map(std::slice::from_ref)
                    .into_iter()
                    .collect(),
                None => members.iter().map(std::slice::from_ref).collect(),
            };
        }

        if let Some(rollup) = self.dimensions.rollups.get(pred) {
            if !window.admits(0) || bound.len() != 2 {
                return Vec::new();
            }
            let pick = |idx: &Vec<usize>| -> Vec<&'a [Value]> {
                idx.iter().map(|&i| &rollup.edges[i][..]).collect()
            };
            return match (&bound[0], &bound[1]) {
                (Some(c), _) => rollup.by_child.get(c).map(pick).unwrap_or_default(),
                (None, Some(p)) => rollup.by_parent.get(p).map(pick).unwrap_or_default(),
                (None, None) => rollup.edges.iter().map(|e| &e[..]).collect(),
            };
        }

        if let Some(rel) = self.facts.relations.get(pred) {
            if bound.len() != rel.arity {
                return Vec::new();
            }
            let range = rel.window_range(window);
            let positions: Vec<usize> = (0..bound.len()).filter(|&i| bound[i].is_some()).collect();
            if !positions.is_empty() {
                if let Some(index) = rel.index(&positions) {
                    let key: Vec<Value> = positions
                        .iter()
                        .map(|&i| bound[i].clone().unwrap())
                        .collect();
                    return index
                        .get(&key)
                        .into_iter()
                        .flatten()
                        .filter(|&&i| range.contains(&i))
                        .map(|&i| &rel.rows[i].values[..])
                        .collect();
                }
            }
            return rel.rows[range].iter().map(|r| &r.values[..]).collect();
        }

        Vec::new()
    }
}

/// Extends `input` so that `atom` maps onto `fact`, if possible.
pub(crate) fn unify(atom: &Atom, fact: &[Value], input: &Binding) -> Option<Binding> {
    if atom.args.len() != fact.len() {
        return None;
    }
    let mut out: Option<Binding> = None;
    for (term, value) in atom.args.iter().zip(fact) {
        match term {
            Term::Const(c) => {
                if value.as_const() != Some(c.as_str()) {
                    return None;
                }
            }
            Term::Var(v) => {
                let current = out.as_ref().unwrap_or(input);
                match current.get(v) {
                    Some(existing) if existing != value => return None,
                    Some(_) => {}
                    None => {
                        out.get_or_insert_with(|| input.clone())
                            .insert(v.clone(), value.clone());
                    }
                }
            }
        }
    }
    Some(out.unwrap_or_else(|| input.clone()))
}

struct Frame<'a> {
    input: Binding,
    candidates: Vec<&'a [Value]>,
    cursor: usize,
}

/// Lazy enumeration of the bindings under which every atom of a plan maps to
/// a stored fact. Bindings come out in plan order, then fact insertion order.
pub struct Homomorphisms<'a> {
    db: Database<'a>,
    plan: Vec<(&'a Atom, Window)>,
    frames: Vec<Frame<'a>>,
    initial: Option<Binding>,
    done: bool,
}

impl<'a> Homomorphisms<'a> {
    pub(crate) fn new(db: Database<'a>, plan: Vec<(&'a Atom, Window)>, initial: Binding) -> Self {
        Homomorphisms {
            db,
            plan,
            frames: Vec::new(),
            initial: Some(initial),
            done: false,
        }
    }

    fn frame(&self, depth: usize, input: Binding) -> Frame<'a> {
        let (atom, window) = self.plan[depth];
        let candidates = self.db.candidates(atom, &input, window);
        Frame {
            input,
            candidates,
            cursor: 0,
        }
    }
}

impl Iterator for Homomorphisms<'_> {
    type Item = Binding;

    fn next(&mut self) -> Option<Binding> {
        if self.done {
            return None;
        }
        if let Some(initial) = self.initial.take() {
            if self.plan.is_empty() {
                self.done = true;
                return Some(initial);
            }
            let f = self.frame(0, initial);
            self.frames.push(f);
        }
        while !self.frames.is_empty() {
            let depth = self.frames.len() - 1;
            let frame = &mut self.frames[depth];
            let atom = self.plan[depth].0;
            let mut found = None;
            while frame.cursor < frame.candidates.len() {
                let fact = frame.candidates[frame.cursor];
                frame.cursor += 1;
                if let Some(b) = unify(atom, fact, &frame.input) {
                    found = Some(b);
                    break;
                }
            }
            match found {
                None => {
                    self.frames.pop();
                }
                Some(b) if depth + 1 == self.plan.len() => return Some(b),
                Some(b) => {
                    let f = self.frame(depth + 1, b);
                    self.frames.push(f);
                }
            }
        }
        self.done = true;
        None
    }
}

/// All bindings of the variables of `atoms` under which every atom maps to a
/// fact of `db`, in atom order then insertion order.
pub fn find_homomorphisms<'a>(atoms: &'a [Atom], db: Database<'a>) -> Homomorphisms<'a> {
    extend_homomorphisms(atoms, db, Binding::new())
}

/// Like [`find_homomorphisms`], starting from a partial binding.
pub fn extend_homomorphisms<'a>(
    atoms: &'a [Atom],
    db: Database<'a>,
    initial: Binding,
) -> Homomorphisms<'a> {
    let plan = atoms.iter().map(|a| (a, Window::All)).collect();
    Homomorphisms::new(db, plan, initial)
}

/// Plans enumerating exactly the bindings that use at least one fact with
/// stamp `>= since`. Plan `i` takes atom `i` from the new facts, atoms before
/// it from the old ones and atoms after it from all facts, and matches the
/// new atom first.
pub(crate) fn delta_plans(atoms: &[Atom], since: u64) -> Vec<Vec<(&Atom, Window)>> {
    if since == 0 {
        return vec![atoms.iter().map(|a| (a, Window::All)).collect()];
    }
    (0..atoms.len())
        .map(|i| {
            let mut plan = vec![(&atoms[i], Window::Since(since))];
            for (j, a) in atoms.iter().enumerate() {
                if j < i {
                    plan.push((a, Window::Before(since)));
                } else if j > i {
                    plan.push((a, Window::All));
                }
            }
            plan
        })
        .collect()
}

/// Relation positions that will be bound when each atom of `order` is
/// matched, given the variables bound up front.
pub(crate) fn bound_positions<'a>(
    order: impl IntoIterator<Item = &'a Atom>,
    initially_bound: &BTreeSet<String>,
) -> Vec<(String, Vec<usize>)> {
    let mut bound = initially_bound.clone();
    let mut out = Vec::new();
    for atom in order {
        let positions: Vec<usize> = atom
            .args
            .iter()
            .enumerate()
            .filter(|(_, t)| match t {
                Term::Const(_) => true,
                Term::Var(v) => bound.contains(v),
            })
            .map(|(i, _)| i)
            .collect();
        out.push((atom.predicate.clone(), positions));
        bound.extend(atom.vars().map(String::from));
    }
    out
}
