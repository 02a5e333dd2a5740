use std::collections::HashMap;

use super::{Atom, Ontology};

/// What a predicate name refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PredicateKind {
    Category {
        name: String,
        dimension: String,
    },
    ChildParent {
        dimension: String,
        child: String,
        parent: String,
    },
    Relation {
        categories: Vec<String>,
        noncategorical: usize,
    },
}

impl PredicateKind {
    pub fn arity(&self) -> usize {
        match self {
            PredicateKind::Category { .. } => 1,
            PredicateKind::ChildParent { .. } => 2,
            PredicateKind::Relation {
                categories,
                noncategorical,
            } => categories.len() + noncategorical,
        }
    }

    /// Category bound to position `i`; `None` for non-categorical positions.
    pub fn position_category(&self, i: usize) -> Option<&str> {
        match self {
            PredicateKind::Category { name, .. } if i == 0 => Some(name),
            PredicateKind::Category { .. } => None,
            PredicateKind::ChildParent { child, parent, .. } => match i {
                0 => Some(child),
                1 => Some(parent),
                _ => None,
            },
            PredicateKind::Relation { categories, .. } => categories.get(i).map(String::as_str),
        }
    }

    pub fn is_relation(&self) -> bool {
        matches!(self, PredicateKind::Relation { .. })
    }

    pub fn is_child_parent(&self) -> bool {
        matches!(self, PredicateKind::ChildParent { .. })
    }

    pub fn is_category(&self) -> bool {
        matches!(self, PredicateKind::Category { .. })
    }
}

/// Predicate-name resolution over one ontology. Categories, roll-ups and
/// categorical relations share a single namespace; on a clash the first
/// declaration wins (validation reports the clash).
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    predicates: HashMap<String, PredicateKind>,
}

impl Catalog {
    pub fn from_ontology(ontology: &Ontology) -> Self {
        let mut predicates = HashMap::new();
        for dim in &ontology.dimensions {
            for cat in &dim.categories {
                predicates
                    .entry(cat.name.clone())
                    .or_insert_with(|| PredicateKind::Category {
                        name: cat.name.clone(),
                        dimension: dim.name.clone(),
                    });
            }
        }
        for dim in &ontology.dimensions {
            for r in &dim.rollups {
                predicates
                    .entry(r.name.clone())
                    .or_insert_with(|| PredicateKind::ChildParent {
                        dimension: dim.name.clone(),
                        child: r.child.clone(),
                        parent: r.parent.clone(),
                    });
            }
        }
        for rel in &ontology.relations {
            predicates
                .entry(rel.name.clone())
                .or_insert_with(|| PredicateKind::Relation {
                    categories: rel.categorical.iter().map(|a| a.category.clone()).collect(),
                    noncategorical: rel.noncategorical.len(),
                });
        }
        Catalog { predicates }
    }

    pub fn kind(&self, predicate: &str) -> Option<&PredicateKind> {
        self.predicates.get(predicate)
    }

    pub fn atom_kind(&self, atom: &Atom) -> Option<&PredicateKind> {
        self.kind(&atom.predicate)
    }

    pub fn is_category(&self, name: &str) -> bool {
        self.kind(name).is_some_and(PredicateKind::is_category)
    }

    /// Whether argument `i` of `atom` sits in a categorical position: a
    /// categorical attribute of a relation, either end of a child-parent
    /// atom, or the argument of a category atom.
    pub fn is_categorical_position(&self, atom: &Atom, i: usize) -> bool {
        match self.atom_kind(atom) {
            Some(PredicateKind::Relation { categories, .. }) => i < categories.len(),
            Some(_) => true,
            None => false,
        }
    }
}
