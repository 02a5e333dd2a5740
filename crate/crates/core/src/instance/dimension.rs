use std::collections::HashMap;

use indexmap::{IndexMap, IndexSet};

use super::Value;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Rollup {
    pub(crate) edges: IndexSet<[Value; 2]>,
    pub(crate) by_child: HashMap<Value, Vec<usize>>,
    pub(crate) by_parent: HashMap<Value, Vec<usize>>,
}

/// Extensions of the category and child-parent predicates. The dimension
/// instance is complete and stays fixed while a chase runs; it holds
/// constants only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimensionInstance {
    pub(crate) members: IndexMap<String, IndexSet<Value>>,
    pub(crate) rollups: IndexMap<String, Rollup>,
}

impl DimensionInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_category(&mut self, category: &str) {
        self.members.entry(category.to_string()).or_default();
    }

    pub fn declare_rollup(&mut self, predicate: &str) {
        self.rollups.entry(predicate.to_string()).or_default();
    }

    pub fn add_member(&mut self, category: &str, member: &str) -> bool {
        self.members
            .entry(category.to_string())
            .or_default()
            .insert(Value::constant(member))
    }

    pub fn add_edge(&mut self, predicate: &str, child: &str, parent: &str) -> bool {
        let rollup = self.rollups.entry(predicate.to_string()).or_default();
        let edge = [Value::constant(child), Value::constant(parent)];
        let (idx, fresh) = rollup.edges.insert_full(edge.clone());
        if fresh {
            let [c, p] = edge;
            rollup.by_child.entry(c).or_default().push(idx);
            rollup.by_parent.entry(p).or_default().push(idx);
        }
        fresh
    }

    pub fn has_category(&self, category: &str) -> bool {
        self.members.contains_key(category)
    }

    pub fn has_rollup(&self, predicate: &str) -> bool {
        self.rollups.contains_key(predicate)
    }

    pub fn is_member(&self, category: &str, value: &Value) -> bool {
        self.members
            .get(category)
            .is_some_and(|m| m.contains(value))
    }

    pub fn members(&self, category: &str) -> impl Iterator<Item = &Value> {
        self.members.get(category).into_iter().flatten()
    }

    pub fn edges(&self, predicate: &str) -> impl Iterator<Item = (&Value, &Value)> {
        self.rollups
            .get(predicate)
            .into_iter()
            .flat_map(|r| r.edges.iter().map(|[c, p]| (c, p)))
    }

    pub fn parents<'a>(
        &'a self,
        predicate: &str,
        child: &'a Value,
    ) -> impl Iterator<Item = &'a Value> {
        self.rollups.get(predicate).into_iter().flat_map(move |r| {
            r.by_child
                .get(child)
                .into_iter()
                .flatten()
                .map(move |&i| &r.edges[i][1])
        })
    }

    pub fn children<'a>(
        &'a self,
        predicate: &str,
        parent: &'a Value,
    ) -> impl Iterator<Item = &'a Value> {
        self.rollups.get(predicate).into_iter().flat_map(move |r| {
            r.by_parent
                .get(parent)
                .into_iter()
                .flatten()
                .map(move |&i| &r.edges[i][0])
        })
    }

    /// Total number of member and edge facts.
    pub fn len(&self) -> usize {
        self.members.values().map(IndexSet::len).sum::<usize>()
            + self.rollups.values().map(|r| r.edges.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
