use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use indexmap::IndexMap;

use super::{InstanceError, NullId, Value};

/// A fact of a categorical relation, `R(cat; noncat)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    pub predicate: String,
    pub cat: Vec<Value>,
    pub noncat: Vec<Value>,
}

impl Tuple {
    pub fn new(predicate: impl Into<String>, cat: Vec<Value>, noncat: Vec<Value>) -> Self {
        Tuple {
            predicate: predicate.into(),
            cat,
            noncat,
        }
    }

    /// Convenience constructor from lexical constants.
    pub fn of(predicate: &str, cat: &[&str], noncat: &[&str]) -> Self {
        Tuple::new(
            predicate,
            cat.iter().map(|s| Value::constant(s)).collect(),
            noncat.iter().map(|s| Value::constant(s)).collect(),
        )
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.cat.iter().chain(&self.noncat)
    }

    pub fn has_nulls(&self) -> bool {
        self.values().any(Value::is_null)
    }
}

/// Export rendering: `R(v1,...;w1,...)`.
impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, v) in self.cat.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(";")?;
        for (i, v) in self.noncat.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Which rows a search may use, by insertion stamp. Dimension facts carry
/// stamp 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Window {
    All,
    Before(u64),
    Since(u64),
}

impl Window {
    pub(crate) fn admits(self, stamp: u64) -> bool {
        match self {
            Window::All => true,
            Window::Before(s) => stamp < s,
            Window::Since(s) => stamp >= s,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Row {
    pub(crate) values: Vec<Value>,
    pub(crate) stamp: u64,
}

type Index = HashMap<Vec<Value>, Vec<usize>>;

/// Rows are kept sorted by stamp: appends take the next stamp, and rows
/// rewritten by a substitution move to the end with a fresh one.
#[derive(Clone, Debug)]
pub(crate) struct Relation {
    pub(crate) cat_arity: usize,
    pub(crate) arity: usize,
    pub(crate) rows: Vec<Row>,
    lookup: HashMap<Vec<Value>, usize>,
    indexes: HashMap<Vec<usize>, Index>,
}

impl Relation {
    fn new(cat_arity: usize, arity: usize) -> Self {
        Relation {
            cat_arity,
            arity,
            rows: Vec::new(),
            lookup: HashMap::new(),
            indexes: HashMap::new(),
        }
    }

    fn push(&mut self, values: Vec<Value>, stamp: u64) -> bool {
        if self.lookup.contains_key(&values) {
            return false;
        }
        let idx = self.rows.len();
        for (positions, index) in &mut self.indexes {
            let key = positions.iter().map(|&p| values[p].clone()).collect();
            index.entry(key).or_default().push(idx);
        }
        self.lookup.insert(values.clone(), idx);
        self.rows.push(Row { values, stamp });
        true
    }

    pub(crate) fn window_range(&self, window: Window) -> Range<usize> {
        match window {
            Window::All => 0..self.rows.len(),
            Window::Before(s) => 0..self.rows.partition_point(|r| r.stamp < s),
            Window::Since(s) => self.rows.partition_point(|r| r.stamp < s)..self.rows.len(),
        }
    }

    pub(crate) fn index(&self, positions: &[usize]) -> Option<&Index> {
        self.indexes.get(positions)
    }

    fn build_index(&mut self, positions: Vec<usize>) {
        if self.indexes.contains_key(&positions) {
            return;
        }
        let mut index: Index = HashMap::new();
        for (i, row) in self.rows.iter().enumerate() {
            let key = positions.iter().map(|&p| row.values[p].clone()).collect();
            index.entry(key).or_default().push(i);
        }
        self.indexes.insert(positions, index);
    }

    fn rebuild(&mut self, rows: Vec<Row>) {
        let positions: Vec<_> = self.indexes.keys().cloned().collect();
        self.rows = Vec::with_capacity(rows.len());
        self.lookup.clear();
        self.indexes.clear();
        for row in rows {
            self.push(row.values, row.stamp);
        }
        for p in positions {
            self.build_index(p);
        }
    }
}

/// Instance of the categorical relations: set semantics per relation, rows
/// enumerated in insertion order. Categorical positions never hold nulls.
#[derive(Clone, Debug)]
pub struct MDInstance {
    pub(crate) relations: IndexMap<String, Relation>,
    null_counter: u64,
    next_stamp: u64,
}

impl Default for MDInstance {
    fn default() -> Self {
        MDInstance {
            relations: IndexMap::new(),
            null_counter: 0,
            next_stamp: 1,
        }
    }
}

impl MDInstance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares relation `name` with `cat` categorical and `noncat`
    /// non-categorical positions. Redeclaring is a no-op.
    pub fn declare(&mut self, name: &str, cat: usize, noncat: usize) {
        self.relations
            .entry(name.to_string())
            .or_insert_with(|| Relation::new(cat, cat + noncat));
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.relations.contains_key(name)
    }

    pub fn relation_names(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    /// Inserts a tuple; returns `false` if it was already present.
    pub fn insert(&mut self, tuple: Tuple) -> Result<bool, InstanceError> {
        let rel = self
            .relations
            .get_mut(&tuple.predicate)
            .ok_or_else(|| InstanceError::UnknownRelation(tuple.predicate.clone()))?;
        if tuple.cat.len() != rel.cat_arity || tuple.cat.len() + tuple.noncat.len() != rel.arity {
            return Err(InstanceError::ArityMismatch {
                relation: tuple.predicate.clone(),
                expected: (rel.cat_arity, rel.arity - rel.cat_arity),
                found: (tuple.cat.len(), tuple.noncat.len()),
            });
        }
        if tuple.cat.iter().any(Value::is_null) {
            return Err(InstanceError::NullInCategoricalPosition(tuple.to_string()));
        }
        for v in &tuple.noncat {
            if let Value::Null(NullId(k)) = v {
                self.null_counter = self.null_counter.max(*k);
            }
        }
        let mut values = tuple.cat;
        values.extend(tuple.noncat);
        let stamp = self.next_stamp;
        let fresh = rel.push(values, stamp);
        if fresh {
            self.next_stamp += 1;
        }
        Ok(fresh)
    }

    /// Mints a labeled null with an index above every null seen so far.
    pub fn fresh_null(&mut self) -> Value {
        self.null_counter += 1;
        Value::null(self.null_counter)
    }

    pub fn null_counter(&self) -> u64 {
        self.null_counter
    }

    pub(crate) fn next_stamp(&self) -> u64 {
        self.next_stamp
    }

    pub fn contains(&self, tuple: &Tuple) -> bool {
        self.relations.get(&tuple.predicate).is_some_and(|r| {
            let values: Vec<Value> = tuple.values().cloned().collect();
            r.lookup.contains_key(&values)
        })
    }

    /// Tuples of one relation in insertion order.
    pub fn tuples<'a>(&'a self, predicate: &'a str) -> impl Iterator<Item = Tuple> + 'a {
        self.relations
            .get(predicate)
            .into_iter()
            .flat_map(move |r| {
                r.rows.iter().map(move |row| {
                    Tuple::new(
                        predicate,
                        row.values[..r.cat_arity].to_vec(),
                        row.values[r.cat_arity..].to_vec(),
                    )
                })
            })
    }

    /// All tuples, relation by relation in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = Tuple> + '_ {
        self.relations
            .keys()
            .flat_map(move |name| self.tuples(name))
    }

    pub fn len(&self) -> usize {
        self.relations.values().map(|r| r.rows.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn relation_len(&self, predicate: &str) -> usize {
        self.relations.get(predicate).map_or(0, |r| r.rows.len())
    }

    /// Replaces every occurrence of `from` by `to`. Rewritten tuples are
    /// re-inserted (so they count as new for incremental evaluation) unless
    /// an identical tuple already exists. Returns the number of tuples that
    /// mentioned `from`.
    pub fn apply_substitution(&mut self, from: NullId, to: &Value) -> usize {
        let target = Value::Null(from);
        let mut touched = 0;
        for rel in self.relations.values_mut() {
            if !rel.rows.iter().any(|r| r.values.contains(&target)) {
                continue;
            }
            let mut kept = Vec::with_capacity(rel.rows.len());
            let mut changed = Vec::new();
            for row in std::mem::take(&mut rel.rows) {
                if row.values.contains(&target) {
                    let values = row
                        .values
                        .into_iter()
                        .map(|v| if v == target { to.clone() } else { v })
                        .collect();
                    changed.push(values);
                } else {
                    kept.push(row);
                }
            }
            touched += changed.len();
            for values in changed {
                kept.push(Row {
                    values,
                    stamp: self.next_stamp,
                });
                self.next_stamp += 1;
            }
            // Duplicates created by the rewrite collapse on rebuild; the
            // earlier (unchanged) copy wins.
            rel.rebuild(kept);
        }
        touched
    }

    /// Makes lookups on `positions` of `predicate` index-backed.
    pub(crate) fn ensure_index(&mut self, predicate: &str, positions: Vec<usize>) {
        if let Some(rel) = self.relations.get_mut(predicate) {
            if !positions.is_empty() && positions.iter().all(|&p| p < rel.arity) {
                rel.build_index(positions);
            }
        }
    }

    /// Tuples sorted by predicate, then by value order.
    pub fn sorted_tuples(&self) -> Vec<Tuple> {
        let mut all: Vec<Tuple> = self.iter().collect();
        all.sort();
        all
    }

    /// One line per tuple, `R(v1,...;w1,...)`, nulls as `_:n<k>`, sorted by
    /// predicate then value order.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for t in self.sorted_tuples() {
            out.push_str(&t.to_string());
            out.push('\n');
        }
        out
    }
}

/// Set equality per relation; stamps, order and indexes are ignored.
impl PartialEq for MDInstance {
    fn eq(&self, other: &Self) -> bool {
        self.relations.len() == other.relations.len()
            && self.relations.iter().all(|(name, rel)| {
                other.relations.get(name).is_some_and(|o| {
                    o.rows.len() == rel.rows.len()
                        && rel.rows.iter().all(|r| o.lookup.contains_key(&r.values))
                })
            })
    }
}

impl Eq for MDInstance {}
