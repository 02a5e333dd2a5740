//! Static structure of an ontology: dimensions, categorical relations, rules
//! and constraints, together with the validation and derivation logic that
//! operates on them.

mod basic;
mod catalog;
mod navigation;
mod summarizability;
mod validate;

use std::collections::BTreeSet;

use crate::instance::{DimensionInstance, InstanceError, MDInstance, Tuple, Value};
use crate::query::ConjunctiveQuery;
use crate::span::SourceSpan;

pub use basic::{generate_basic_constraints, BasicConstraints};
pub use catalog::{Catalog, PredicateKind};
pub use navigation::{
    category_level, category_levels, classify_navigation, LevelDifference, Navigation,
    NavigationReport,
};
pub use summarizability::{
    generate_summarizability_constraints, SummarizabilityConstraints, SummarizabilityMode,
};
pub use validate::{
    validate_dimensional_constraint, validate_dimensional_tgd, validate_schema, Constraint,
    Diagnostic, DiagnosticKind, Severity, ValidationReport,
};

/// A rule or query argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(lexical: impl Into<String>) -> Self {
        Term::Const(lexical.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

/// An atom `P(t1, ..., tk)`. For categorical relations `split` records where
/// the `;` separating categorical from non-categorical arguments was written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
    pub split: Option<usize>,
    pub span: Option<SourceSpan>,
    /// One span per argument when the atom was parsed; empty otherwise.
    pub arg_spans: Vec<SourceSpan>,
}

impl Atom {
    /// An atom without a categorical split (category and child-parent atoms).
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
            split: None,
            span: None,
            arg_spans: Vec::new(),
        }
    }

    /// An atom over a categorical relation, `R(cat; noncat)`.
    pub fn relational(predicate: impl Into<String>, cat: Vec<Term>, noncat: Vec<Term>) -> Self {
        let split = cat.len();
        let mut args = cat;
        args.extend(noncat);
        Atom {
            predicate: predicate.into(),
            args,
            split: Some(split),
            span: None,
            arg_spans: Vec::new(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(Term::as_var)
    }

    /// Span of argument `i`, falling back to the atom's span.
    pub fn arg_span(&self, i: usize) -> Option<&SourceSpan> {
        self.arg_spans.get(i).or(self.span.as_ref())
    }

    pub(crate) fn erase_spans(&mut self) {
        self.span = None;
        self.arg_spans.clear();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    pub name: String,
    pub dimension: String,
    pub span: Option<SourceSpan>,
}

/// A roll-up predicate `P(child, parent)` between two categories of one
/// dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildParentPredicate {
    pub name: String,
    pub dimension: String,
    pub child: String,
    pub parent: String,
    pub span: Option<SourceSpan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionSchema {
    pub name: String,
    pub categories: Vec<Category>,
    pub rollups: Vec<ChildParentPredicate>,
    pub span: Option<SourceSpan>,
}

impl DimensionSchema {
    pub fn new(name: impl Into<String>) -> Self {
        DimensionSchema {
            name: name.into(),
            categories: Vec::new(),
            rollups: Vec::new(),
            span: None,
        }
    }

    pub fn with_category(mut self, name: impl Into<String>) -> Self {
        self.categories.push(Category {
            name: name.into(),
            dimension: self.name.clone(),
            span: None,
        });
        self
    }

    pub fn with_rollup(
        mut self,
        name: impl Into<String>,
        child: impl Into<String>,
        parent: impl Into<String>,
    ) -> Self {
        self.rollups.push(ChildParentPredicate {
            name: name.into(),
            dimension: self.name.clone(),
            child: child.into(),
            parent: parent.into(),
            span: None,
        });
        self
    }

    pub fn category(&self, name: &str) -> Option<&Category> {
        self.categories.iter().find(|c| c.name == name)
    }

    /// Categories without an incoming roll-up.
    pub fn base_categories(&self) -> impl Iterator<Item = &Category> {
        self.categories
            .iter()
            .filter(|c| !self.rollups.iter().any(|r| r.parent == c.name))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoricalAttribute {
    pub name: String,
    pub category: String,
}

/// Signature `R(C1, ..., Cm; N1, ..., Nn)` of a categorical relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoricalPredicateSchema {
    pub name: String,
    pub categorical: Vec<CategoricalAttribute>,
    pub noncategorical: Vec<String>,
    pub span: Option<SourceSpan>,
}

impl CategoricalPredicateSchema {
    pub fn new(name: impl Into<String>) -> Self {
        CategoricalPredicateSchema {
            name: name.into(),
            categorical: Vec::new(),
            noncategorical: Vec::new(),
            span: None,
        }
    }

    pub fn with_categorical(
        mut self,
        attr: impl Into<String>,
        category: impl Into<String>,
    ) -> Self {
        self.categorical.push(CategoricalAttribute {
            name: attr.into(),
            category: category.into(),
        });
        self
    }

    pub fn with_noncategorical(mut self, attr: impl Into<String>) -> Self {
        self.noncategorical.push(attr.into());
        self
    }

    pub fn arity(&self) -> usize {
        self.categorical.len() + self.noncategorical.len()
    }

    pub fn attribute_names(&self) -> impl Iterator<Item = &str> {
        self.categorical
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.noncategorical.iter().map(String::as_str))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TgdKind {
    /// Body of categorical and child-parent atoms, categorical head.
    #[default]
    Dimensional,
    /// Admits unary category atoms in the body and a child-parent head; only
    /// produced by the homogeneity generator.
    SummarizabilityExtension,
}

/// `body -> exists ys: head`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionalTgd {
    pub id: String,
    pub body: Vec<Atom>,
    pub head: Atom,
    pub existential: Vec<String>,
    pub kind: TgdKind,
    pub span: Option<SourceSpan>,
}

impl DimensionalTgd {
    pub fn new(
        id: impl Into<String>,
        body: Vec<Atom>,
        existential: Vec<String>,
        head: Atom,
    ) -> Self {
        DimensionalTgd {
            id: id.into(),
            body,
            head,
            existential,
            kind: TgdKind::Dimensional,
            span: None,
        }
    }

    pub fn is_existential(&self, var: &str) -> bool {
        self.existential.iter().any(|v| v == var)
    }

    /// Head variables that are not existential, in order of first occurrence.
    pub fn frontier(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.head
            .vars()
            .filter(|v| !self.is_existential(v) && seen.insert(*v))
            .collect()
    }
}

/// `body -> lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionalEgd {
    pub id: String,
    pub body: Vec<Atom>,
    pub lhs: String,
    pub rhs: String,
    pub span: Option<SourceSpan>,
}

impl DimensionalEgd {
    pub fn new(
        id: impl Into<String>,
        body: Vec<Atom>,
        lhs: impl Into<String>,
        rhs: impl Into<String>,
    ) -> Self {
        DimensionalEgd {
            id: id.into(),
            body,
            lhs: lhs.into(),
            rhs: rhs.into(),
            span: None,
        }
    }
}

/// A negated category atom `not K(x)` in a basic constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegatedCategory {
    pub category: String,
    pub var: String,
    pub span: Option<SourceSpan>,
}

/// `body -> bottom`, optionally with one negated category atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeConstraint {
    pub id: String,
    pub body: Vec<Atom>,
    pub negated: Option<NegatedCategory>,
    pub span: Option<SourceSpan>,
}

impl NegativeConstraint {
    pub fn new(id: impl Into<String>, body: Vec<Atom>) -> Self {
        NegativeConstraint {
            id: id.into(),
            body,
            negated: None,
            span: None,
        }
    }

    pub fn with_negated(mut self, category: impl Into<String>, var: impl Into<String>) -> Self {
        self.negated = Some(NegatedCategory {
            category: category.into(),
            var: var.into(),
            span: None,
        });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemberDecl {
    pub category: String,
    pub value: String,
    pub span: Option<SourceSpan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub predicate: String,
    pub child: String,
    pub parent: String,
    pub span: Option<SourceSpan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl {
    pub relation: String,
    pub categorical: Vec<Value>,
    pub noncategorical: Vec<Value>,
    pub span: Option<SourceSpan>,
}

impl DataDecl {
    pub fn to_tuple(&self) -> Tuple {
        Tuple::new(
            self.relation.clone(),
            self.categorical.clone(),
            self.noncategorical.clone(),
        )
    }
}

/// A complete multidimensional ontology: schema, dimension instance,
/// extensional data, rules, constraints and named queries. Every collection
/// keeps declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    pub dimensions: Vec<DimensionSchema>,
    pub relations: Vec<CategoricalPredicateSchema>,
    pub members: Vec<MemberDecl>,
    pub edges: Vec<EdgeDecl>,
    pub data: Vec<DataDecl>,
    pub tgds: Vec<DimensionalTgd>,
    pub egds: Vec<DimensionalEgd>,
    pub ncs: Vec<NegativeConstraint>,
    pub queries: Vec<ConjunctiveQuery>,
}

impl Ontology {
    pub fn is_empty(&self) -> bool {
        *self == Ontology::default()
    }

    pub fn dimension(&self, name: &str) -> Option<&DimensionSchema> {
        self.dimensions.iter().find(|d| d.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&CategoricalPredicateSchema> {
        self.relations.iter().find(|r| r.name == name)
    }

    pub fn rollup(&self, name: &str) -> Option<&ChildParentPredicate> {
        self.dimensions
            .iter()
            .flat_map(|d| &d.rollups)
            .find(|r| r.name == name)
    }

    pub fn tgd(&self, id: &str) -> Option<&DimensionalTgd> {
        self.tgds.iter().find(|t| t.id == id)
    }

    pub fn egd(&self, id: &str) -> Option<&DimensionalEgd> {
        self.egds.iter().find(|t| t.id == id)
    }

    pub fn nc(&self, id: &str) -> Option<&NegativeConstraint> {
        self.ncs.iter().find(|t| t.id == id)
    }

    pub fn query(&self, name: &str) -> Option<&ConjunctiveQuery> {
        self.queries.iter().find(|q| q.name == name)
    }

    pub fn catalog(&self) -> Catalog {
        Catalog::from_ontology(self)
    }

    /// Builds the dimension instance from the member and edge declarations.
    /// Every declared category and roll-up gets an (initially empty) extension.
    pub fn dimension_instance(&self) -> DimensionInstance {
        let mut inst = DimensionInstance::new();
        for dim in &self.dimensions {
            for cat in &dim.categories {
                inst.declare_category(&cat.name);
            }
            for r in &dim.rollups {
                inst.declare_rollup(&r.name);
            }
        }
        for m in &self.members {
            inst.add_member(&m.category, &m.value);
        }
        for e in &self.edges {
            inst.add_edge(&e.predicate, &e.child, &e.parent);
        }
        inst
    }

    /// Builds the categorical-relation instance from the `data` declarations.
    pub fn extensional_instance(&self) -> Result<MDInstance, InstanceError> {
        let mut inst = MDInstance::new();
        for r in &self.relations {
            inst.declare(&r.name, r.categorical.len(), r.noncategorical.len());
        }
        for d in &self.data {
            inst.insert(d.to_tuple())?;
        }
        Ok(inst)
    }

    /// A copy of this ontology whose `data` declarations are the tuples of
    /// `facts`, in export order.
    pub fn with_facts(&self, facts: &MDInstance) -> Ontology {
        let mut out = self.clone();
        out.data = facts
            .sorted_tuples()
            .into_iter()
            .map(|t| DataDecl {
                relation: t.predicate,
                categorical: t.cat,
                noncategorical: t.noncat,
                span: None,
            })
            .collect();
        out
    }

    /// Clears every source span, leaving only structural content.
    pub fn erase_spans(&mut self) {
        for d in &mut self.dimensions {
            d.span = None;
            for c in &mut d.categories {
                c.span = None;
            }
            for r in &mut d.rollups {
                r.span = None;
            }
        }
        for r in &mut self.relations {
            r.span = None;
        }
        for m in &mut self.members {
            m.span = None;
        }
        for e in &mut self.edges {
            e.span = None;
        }
        for d in &mut self.data {
            d.span = None;
        }
        for t in &mut self.tgds {
            t.span = None;
            t.body.iter_mut().for_each(Atom::erase_spans);
            t.head.erase_spans();
        }
        for e in &mut self.egds {
            e.span = None;
            e.body.iter_mut().for_each(Atom::erase_spans);
        }
        for n in &mut self.ncs {
            n.span = None;
            n.body.iter_mut().for_each(Atom::erase_spans);
            if let Some(neg) = &mut n.negated {
                neg.span = None;
            }
        }
        for q in &mut self.queries {
            q.span = None;
            q.body.iter_mut().for_each(Atom::erase_spans);
        }
    }
}

/// Renders a rule with variables renamed `v0, v1, ...` in order of first
/// occurrence, so that alpha-equivalent rules render identically.
pub trait CanonicalForm {
    fn canonical(&self) -> String;
}

fn rename_atoms<'a>(atoms: impl Iterator<Item = &'a Atom>, names: &mut Vec<String>) -> Vec<Atom> {
    atoms
        .map(|a| {
            let mut a = a.clone();
            a.erase_spans();
            for t in &mut a.args {
                if let Term::Var(v) = t {
                    *v = canonical_var(v, names);
                }
            }
            a
        })
        .collect()
}

fn canonical_var(v: &str, names: &mut Vec<String>) -> String {
    let idx = match names.iter().position(|n| n == v) {
        Some(i) => i,
        None => {
            names.push(v.to_string());
            names.len() - 1
        }
    };
    format!("v{idx}")
}

impl CanonicalForm for DimensionalTgd {
    fn canonical(&self) -> String {
        let mut names = Vec::new();
        let mut t = self.clone();
        t.id = "_".into();
        t.span = None;
        t.body = rename_atoms(self.body.iter(), &mut names);
        t.head = rename_atoms(std::iter::once(&self.head), &mut names).remove(0);
        t.existential = self
            .existential
            .iter()
            .map(|v| canonical_var(v, &mut names))
            .collect();
        t.to_string()
    }
}

impl CanonicalForm for DimensionalEgd {
    fn canonical(&self) -> String {
        let mut names = Vec::new();
        let mut e = self.clone();
        e.id = "_".into();
        e.span = None;
        e.body = rename_atoms(self.body.iter(), &mut names);
        e.lhs = canonical_var(&self.lhs, &mut names);
        e.rhs = canonical_var(&self.rhs, &mut names);
        e.to_string()
    }
}

impl CanonicalForm for NegativeConstraint {
    fn canonical(&self) -> String {
        let mut names = Vec::new();
        let mut n = self.clone();
        n.id = "_".into();
        n.span = None;
        n.body = rename_atoms(self.body.iter(), &mut names);
        if let Some(neg) = &mut n.negated {
            neg.var = canonical_var(&neg.var, &mut names);
            neg.span = None;
        }
        n.to_string()
    }
}
