use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use super::{
    Atom, Catalog, DimensionalEgd, DimensionalTgd, NegativeConstraint, Ontology, PredicateKind,
    Term, TgdKind,
};
use crate::instance::Value;
use crate::span::SourceSpan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    CyclicHierarchy,
    UnknownCategory,
    UnknownPredicate,
    ArityMismatch,
    DuplicateName,
    EmptyDimension,
    EmptyRelation,
    CrossDimensionRollup,
    /// Body or head atom over a predicate kind the rule shape does not allow.
    IllegalAtom,
    JoinOnNonCategorical,
    ExistentialInCategoricalPosition,
    ExistentialInBody,
    UnusedExistential,
    UnsafeHeadVariable,
    UnboundEquatedVariable,
    NegationInUserConstraint,
    UnknownMember,
    NullInExtensionalData,
    UnboundAnswerVariable,
}

impl DiagnosticKind {
    pub fn name(self) -> &'static str {
        match self {
            DiagnosticKind::CyclicHierarchy => "CyclicHierarchy",
            DiagnosticKind::UnknownCategory => "UnknownCategory",
            DiagnosticKind::UnknownPredicate => "UnknownPredicate",
            DiagnosticKind::ArityMismatch => "ArityMismatch",
            DiagnosticKind::DuplicateName => "DuplicateName",
            DiagnosticKind::EmptyDimension => "EmptyDimension",
            DiagnosticKind::EmptyRelation => "EmptyRelation",
            DiagnosticKind::CrossDimensionRollup => "CrossDimensionRollup",
            DiagnosticKind::IllegalAtom => "IllegalAtom",
            DiagnosticKind::JoinOnNonCategorical => "JoinOnNonCategorical",
            DiagnosticKind::ExistentialInCategoricalPosition => "ExistentialInCategoricalPosition",
            DiagnosticKind::ExistentialInBody => "ExistentialInBody",
            DiagnosticKind::UnusedExistential => "UnusedExistential",
            DiagnosticKind::UnsafeHeadVariable => "UnsafeHeadVariable",
            DiagnosticKind::UnboundEquatedVariable => "UnboundEquatedVariable",
            DiagnosticKind::NegationInUserConstraint => "NegationInUserConstraint",
            DiagnosticKind::UnknownMember => "UnknownMember",
            DiagnosticKind::NullInExtensionalData => "NullInExtensionalData",
            DiagnosticKind::UnboundAnswerVariable => "UnboundAnswerVariable",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    /// Name of the offending declaration (dimension, relation, rule, query).
    pub element: String,
    pub message: String,
    pub span: Option<SourceSpan>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(span) = &self.span {
            write!(f, "{span}: ")?;
        }
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}: {}", self.kind, self.element, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
    }

    pub fn has(&self, kind: DiagnosticKind) -> bool {
        self.diagnostics.iter().any(|d| d.kind == kind)
    }

    pub fn kinds(&self) -> Vec<DiagnosticKind> {
        self.diagnostics.iter().map(|d| d.kind).collect()
    }

    fn error(
        &mut self,
        kind: DiagnosticKind,
        element: &str,
        span: Option<&SourceSpan>,
        message: String,
    ) {
        self.push(Severity::Error, kind, element, span, message);
    }

    fn push(
        &mut self,
        severity: Severity,
        kind: DiagnosticKind,
        element: &str,
        span: Option<&SourceSpan>,
        message: String,
    ) {
        self.diagnostics.push(Diagnostic {
            severity,
            kind,
            element: element.to_string(),
            message,
            span: span.cloned(),
        });
    }
}

/// An EGD or a negative constraint.
#[derive(Clone, Copy, Debug)]
pub enum Constraint<'a> {
    Egd(&'a DimensionalEgd),
    Nc(&'a NegativeConstraint),
}

impl<'a> From<&'a DimensionalEgd> for Constraint<'a> {
    fn from(e: &'a DimensionalEgd) -> Self {
        Constraint::Egd(e)
    }
}

impl<'a> From<&'a NegativeConstraint> for Constraint<'a> {
    fn from(n: &'a NegativeConstraint) -> Self {
        Constraint::Nc(n)
    }
}

/// Checks every well-formedness condition of the ontology: hierarchy shape,
/// name uniqueness, signatures, declared members and data, and the shape of
/// every rule, constraint and query.
pub fn validate_schema(o: &Ontology) -> ValidationReport {
    let mut r = ValidationReport::default();
    let catalog = o.catalog();
    check_names(o, &mut r);
    check_dimensions(o, &mut r);
    check_relations(o, &catalog, &mut r);
    check_instance(o, &catalog, &mut r);
    for t in &o.tgds {
        r.diagnostics
            .extend(validate_dimensional_tgd(t, o).diagnostics);
    }
    for e in &o.egds {
        r.diagnostics
            .extend(validate_dimensional_constraint(e.into(), o).diagnostics);
    }
    for n in &o.ncs {
        r.diagnostics
            .extend(validate_dimensional_constraint(n.into(), o).diagnostics);
    }
    for q in &o.queries {
        let mut names = HashMap::new();
        for a in &q.body {
            check_atom(a, &q.name, &catalog, o, &mut r);
            collect_occurrences(a, &mut names);
        }
        for v in &q.answer_vars {
            if !names.contains_key(v.as_str()) {
                r.error(
                    DiagnosticKind::UnboundAnswerVariable,
                    &q.name,
                    q.span.as_ref(),
                    format!("answer variable `{v}` does not occur in the body"),
                );
            }
            if q.existential.contains(v) {
                r.error(
                    DiagnosticKind::UnboundAnswerVariable,
                    &q.name,
                    q.span.as_ref(),
                    format!("answer variable `{v}` is also existential"),
                );
            }
        }
    }
    r
}

fn check_names(o: &Ontology, r: &mut ValidationReport) {
    let mut dims = HashSet::new();
    for d in &o.dimensions {
        if !dims.insert(&d.name) {
            r.error(
                DiagnosticKind::DuplicateName,
                &d.name,
                d.span.as_ref(),
                format!("dimension `{}` is declared twice", d.name),
            );
        }
    }
    let mut preds: HashMap<String, &str> = HashMap::new();
    let mut claim =
        |name: &str, what: &'static str, span: Option<&SourceSpan>, r: &mut ValidationReport| {
            if let Some(prev) = preds.get(name) {
                r.error(
                    DiagnosticKind::DuplicateName,
                    name,
                    span,
                    format!("{what} `{name}` clashes with a {prev} of the same name"),
                );
            } else {
                preds.insert(name.to_string(), what);
            }
        };
    for d in &o.dimensions {
        for c in &d.categories {
            claim(&c.name, "category", c.span.as_ref(), r);
        }
        for p in &d.rollups {
            claim(&p.name, "roll-up", p.span.as_ref(), r);
        }
    }
    for rel in &o.relations {
        claim(&rel.name, "relation", rel.span.as_ref(), r);
    }
    let mut rules = HashSet::new();
    let ids = o
        .tgds
        .iter()
        .map(|t| (&t.id, t.span.as_ref()))
        .chain(o.egds.iter().map(|e| (&e.id, e.span.as_ref())))
        .chain(o.ncs.iter().map(|n| (&n.id, n.span.as_ref())));
    for (id, span) in ids {
        if !rules.insert(id) {
            r.error(
                DiagnosticKind::DuplicateName,
                id,
                span,
                format!("rule `{id}` is declared twice"),
            );
        }
    }
    let mut queries = HashSet::new();
    for q in &o.queries {
        if !queries.insert(&q.name) {
            r.error(
                DiagnosticKind::DuplicateName,
                &q.name,
                q.span.as_ref(),
                format!("query `{}` is declared twice", q.name),
            );
        }
    }
}

fn check_dimensions(o: &Ontology, r: &mut ValidationReport) {
    for d in &o.dimensions {
        if d.categories.is_empty() {
            r.error(
                DiagnosticKind::EmptyDimension,
                &d.name,
                d.span.as_ref(),
                "a dimension needs at least one category".into(),
            );
        }
        let mut graph: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for p in &d.rollups {
            let mut ok = true;
            for end in [&p.child, &p.parent] {
                if d.category(end).is_some() {
                    continue;
                }
                ok = false;
                if let Some(other) = o.dimensions.iter().find(|x| x.category(end).is_some()) {
                    r.error(
                        DiagnosticKind::CrossDimensionRollup,
                        &p.name,
                        p.span.as_ref(),
                        format!(
                            "category `{end}` belongs to dimension `{}`, not `{}`",
                            other.name, d.name
                        ),
                    );
                } else {
                    r.error(
                        DiagnosticKind::UnknownCategory,
                        &p.name,
                        p.span.as_ref(),
                        format!("unknown category `{end}`"),
                    );
                }
            }
            if p.child == p.parent {
                r.error(
                    DiagnosticKind::CyclicHierarchy,
                    &p.name,
                    p.span.as_ref(),
                    format!("roll-up from `{}` to itself", p.child),
                );
            } else if ok {
                graph.entry(&p.child).or_default().push(&p.parent);
            }
        }
        if let Some(cycle) = find_cycle(&graph) {
            r.error(
                DiagnosticKind::CyclicHierarchy,
                &d.name,
                d.span.as_ref(),
                format!("roll-up cycle {}", cycle.join(" -> ")),
            );
        }
    }
}

/// Some cycle of `graph`, as the list of nodes with the first repeated last.
fn find_cycle<'a>(graph: &BTreeMap<&'a str, Vec<&'a str>>) -> Option<Vec<&'a str>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn dfs<'a>(
        n: &'a str,
        graph: &BTreeMap<&'a str, Vec<&'a str>>,
        marks: &mut HashMap<&'a str, Mark>,
        stack: &mut Vec<&'a str>,
    ) -> Option<Vec<&'a str>> {
        marks.insert(n, Mark::Active);
        stack.push(n);
        for &m in graph.get(n).into_iter().flatten() {
            match marks.get(m) {
                Some(Mark::Active) => {
                    let start = stack.iter().position(|&s| s == m).unwrap_or(0);
                    let mut cycle = stack[start..].to_vec();
                    cycle.push(m);
                    return Some(cycle);
                }
                Some(Mark::Done) => {}
                None => {
                    if let Some(c) = dfs(m, graph, marks, stack) {
                        return Some(c);
                    }
                }
            }
        }
        stack.pop();
        marks.insert(n, Mark::Done);
        None
    }
    let mut marks = HashMap::new();
    for &n in graph.keys() {
        if !marks.contains_key(n) {
            if let Some(c) = dfs(n, graph, &mut marks, &mut Vec::new()) {
                return Some(c);
            }
        }
    }
    None
}

fn check_relations(o: &Ontology, catalog: &Catalog, r: &mut ValidationReport) {
    for rel in &o.relations {
        if rel.arity() == 0 {
            r.error(
                DiagnosticKind::EmptyRelation,
                &rel.name,
                rel.span.as_ref(),
                "a relation needs at least one attribute".into(),
            );
        }
        for a in &rel.categorical {
            if !catalog.is_category(&a.category) {
                r.error(
                    DiagnosticKind::UnknownCategory,
                    &rel.name,
                    rel.span.as_ref(),
                    format!(
                        "attribute `{}` refers to unknown category `{}`",
                        a.name, a.category
                    ),
                );
            }
        }
        let mut seen = HashSet::new();
        for name in rel.attribute_names() {
            if !seen.insert(name) {
                r.error(
                    DiagnosticKind::DuplicateName,
                    &rel.name,
                    rel.span.as_ref(),
                    format!("attribute `{name}` is declared twice"),
                );
            }
        }
    }
}

fn check_instance(o: &Ontology, catalog: &Catalog, r: &mut ValidationReport) {
    for m in &o.members {
        if !catalog.is_category(&m.category) {
            r.error(
                DiagnosticKind::UnknownCategory,
                &m.category,
                m.span.as_ref(),
                format!("member `{}` of unknown category `{}`", m.value, m.category),
            );
        }
    }
    for e in &o.edges {
        if !catalog
            .kind(&e.predicate)
            .is_some_and(PredicateKind::is_child_parent)
        {
            r.error(
                DiagnosticKind::UnknownPredicate,
                &e.predicate,
                e.span.as_ref(),
                format!("`{}` is not a declared roll-up", e.predicate),
            );
        }
    }
    for d in &o.data {
        let Some(rel) = o.relation(&d.relation) else {
            r.error(
                DiagnosticKind::UnknownPredicate,
                &d.relation,
                d.span.as_ref(),
                format!("data for undeclared relation `{}`", d.relation),
            );
            continue;
        };
        if d.categorical.len() != rel.categorical.len()
            || d.noncategorical.len() != rel.noncategorical.len()
        {
            r.error(
                DiagnosticKind::ArityMismatch,
                &d.relation,
                d.span.as_ref(),
                format!(
                    "expected {}+{} values, found {}+{}",
                    rel.categorical.len(),
                    rel.noncategorical.len(),
                    d.categorical.len(),
                    d.noncategorical.len()
                ),
            );
        }
        if d.categorical
            .iter()
            .chain(&d.noncategorical)
            .any(Value::is_null)
        {
            r.error(
                DiagnosticKind::NullInExtensionalData,
                &d.relation,
                d.span.as_ref(),
                "extensional data may not contain labeled nulls".into(),
            );
        }
    }
}

/// Resolves `atom` against the schema: known predicate, matching arity and
/// split, and declared members for constants in categorical positions.
/// Returns the predicate kind when the atom resolves.
fn check_atom<'c>(
    atom: &Atom,
    element: &str,
    catalog: &'c Catalog,
    o: &Ontology,
    r: &mut ValidationReport,
) -> Option<&'c PredicateKind> {
    let Some(kind) = catalog.atom_kind(atom) else {
        r.error(
            DiagnosticKind::UnknownPredicate,
            element,
            atom.span.as_ref(),
            format!("unknown predicate `{}`", atom.predicate),
        );
        return None;
    };
    let split_ok = match (kind, atom.split) {
        (PredicateKind::Relation { categories, .. }, Some(k)) => k == categories.len(),
        (PredicateKind::Relation { .. }, None) => true,
        (_, split) => split.is_none(),
    };
    if atom.args.len() != kind.arity() || !split_ok {
        let expected = match kind {
            PredicateKind::Relation {
                categories,
                noncategorical,
            } => format!("{}; {}", categories.len(), noncategorical),
            k => k.arity().to_string(),
        };
        r.error(
            DiagnosticKind::ArityMismatch,
            element,
            atom.span.as_ref(),
            format!("`{}` expects {expected} arguments", atom.predicate),
        );
        return None;
    }
    for (i, t) in atom.args.iter().enumerate() {
        let (Term::Const(c), Some(cat)) = (t, kind.position_category(i)) else {
            continue;
        };
        let declared = o.members.iter().any(|m| m.category == cat && m.value == *c);
        if !declared {
            r.error(
                DiagnosticKind::UnknownMember,
                element,
                atom.arg_span(i),
                format!("`{c}` is not a member of category `{cat}`"),
            );
        }
    }
    Some(kind)
}

/// Occurrences of each variable: (atom index, position).
fn collect_occurrences<'a>(atom: &'a Atom, out: &mut HashMap<&'a str, usize>) {
    for v in atom.vars() {
        *out.entry(v).or_default() += 1;
    }
}

/// Checks the dimensional-rule shape: joins only on categorical positions,
/// existential variables only in non-categorical head positions, and every
/// other head variable drawn from a body position of the same sort.
pub fn validate_dimensional_tgd(tgd: &DimensionalTgd, o: &Ontology) -> ValidationReport {
    let mut r = ValidationReport::default();
    let catalog = o.catalog();
    let id = tgd.id.as_str();
    let extension = tgd.kind == TgdKind::SummarizabilityExtension;

    let mut resolved = true;
    for atom in &tgd.body {
        match check_atom(atom, id, &catalog, o, &mut r) {
            None => resolved = false,
            Some(PredicateKind::Category { .. }) if !extension => {
                r.error(
                    DiagnosticKind::IllegalAtom,
                    id,
                    atom.span.as_ref(),
                    format!("category atom `{}` in a rule body", atom.predicate),
                );
            }
            Some(_) => {}
        }
    }
    match check_atom(&tgd.head, id, &catalog, o, &mut r) {
        None => resolved = false,
        Some(PredicateKind::Relation { .. }) => {}
        Some(PredicateKind::ChildParent { .. }) if extension => {}
        Some(_) => {
            r.error(
                DiagnosticKind::IllegalAtom,
                id,
                tgd.head.span.as_ref(),
                format!(
                    "rule head `{}` is not a categorical relation",
                    tgd.head.predicate
                ),
            );
        }
    }
    if !resolved {
        return r;
    }

    // Where each body variable occurs, split by categorical or not.
    let mut cat_occ: HashMap<&str, usize> = HashMap::new();
    let mut noncat_occ: HashMap<&str, Vec<Option<&SourceSpan>>> = HashMap::new();
    for atom in &tgd.body {
        for (i, t) in atom.args.iter().enumerate() {
            let Term::Var(v) = t else { continue };
            if catalog.is_categorical_position(atom, i) {
                *cat_occ.entry(v).or_default() += 1;
            } else {
                noncat_occ.entry(v).or_default().push(atom.arg_span(i));
            }
        }
    }

    let mut reported = HashSet::new();
    for (v, spans) in &noncat_occ {
        let total = spans.len() + cat_occ.get(v).copied().unwrap_or(0);
        if total > 1 && reported.insert(*v) {
            r.error(
                DiagnosticKind::JoinOnNonCategorical,
                id,
                spans.get(1).or(spans.first()).copied().flatten(),
                format!("variable `{v}` is joined through a non-categorical position"),
            );
        }
    }

    for (i, t) in tgd.head.args.iter().enumerate() {
        let Term::Var(v) = t else { continue };
        let categorical = catalog.is_categorical_position(&tgd.head, i);
        let span = tgd.head.arg_span(i);
        if tgd.is_existential(v) {
            if categorical {
                r.error(
                    DiagnosticKind::ExistentialInCategoricalPosition,
                    id,
                    span,
                    format!("existential variable `{v}` in a categorical head position"),
                );
            }
            continue;
        }
        let safe = if categorical {
            cat_occ.contains_key(v.as_str())
        } else {
            noncat_occ.contains_key(v.as_str())
        };
        if !safe {
            let sort = if categorical {
                "categorical"
            } else {
                "non-categorical"
            };
            r.error(
                DiagnosticKind::UnsafeHeadVariable,
                id,
                span,
                format!("head variable `{v}` does not occur in a {sort} body position"),
            );
        }
    }

    for v in &tgd.existential {
        if cat_occ.contains_key(v.as_str()) || noncat_occ.contains_key(v.as_str()) {
            r.error(
                DiagnosticKind::ExistentialInBody,
                id,
                tgd.span.as_ref(),
                format!("existential variable `{v}` also occurs in the body"),
            );
        }
        if !tgd.head.vars().any(|h| h == v) {
            r.push(
                Severity::Warning,
                DiagnosticKind::UnusedExistential,
                id,
                tgd.span.as_ref(),
                format!("existential variable `{v}` does not occur in the head"),
            );
        }
    }
    r
}

/// Checks a user-written EGD or NC: atoms resolve, equated variables occur
/// in the body, and no atom is negated.
pub fn validate_dimensional_constraint(c: Constraint<'_>, o: &Ontology) -> ValidationReport {
    let mut r = ValidationReport::default();
    let catalog = o.catalog();
    let (id, body, span) = match c {
        Constraint::Egd(e) => (&e.id, &e.body, e.span.as_ref()),
        Constraint::Nc(n) => (&n.id, &n.body, n.span.as_ref()),
    };
    for atom in body {
        if let Some(PredicateKind::Category { .. }) = check_atom(atom, id, &catalog, o, &mut r) {
            r.error(
                DiagnosticKind::IllegalAtom,
                id,
                atom.span.as_ref(),
                format!("category atom `{}` in a constraint body", atom.predicate),
            );
        }
    }
    let mut vars = HashMap::new();
    for atom in body {
        collect_occurrences(atom, &mut vars);
    }
    match c {
        Constraint::Egd(e) => {
            for v in [&e.lhs, &e.rhs] {
                if !vars.contains_key(v.as_str()) {
                    r.error(
                        DiagnosticKind::UnboundEquatedVariable,
                        id,
                        span,
                        format!("equated variable `{v}` does not occur in the body"),
                    );
                }
            }
        }
        Constraint::Nc(n) => {
            if let Some(neg) = &n.negated {
                r.error(
                    DiagnosticKind::NegationInUserConstraint,
                    id,
                    neg.span.as_ref().or(span),
                    format!(
                        "negated atom `not {}({})` in a user constraint",
                        neg.category, neg.var
                    ),
                );
            }
        }
    }
    r
}
