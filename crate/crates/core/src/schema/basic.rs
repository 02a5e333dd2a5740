use std::collections::HashSet;

use super::{Atom, CanonicalForm, DimensionalEgd, NegativeConstraint, Ontology, Term};

/// Constraints implied by the shape of the schema: roll-up endpoints and
/// categorical attributes take values from their categories, and every
/// roll-up is functional.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BasicConstraints {
    /// Child and parent inclusion NCs, then categorical-attribute NCs.
    pub ncs: Vec<NegativeConstraint>,
    /// One key EGD per roll-up predicate.
    pub egds: Vec<DimensionalEgd>,
}

impl BasicConstraints {
    pub fn len(&self) -> usize {
        self.ncs.len() + self.egds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Picks a fresh variable name derived from the initial of `hint`.
fn fresh_var(hint: &str, used: &mut HashSet<String>) -> String {
    let mut name = match hint.chars().next() {
        Some(c) if c.is_ascii_alphabetic() => c.to_ascii_lowercase().to_string(),
        _ => "x".to_string(),
    };
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

pub fn generate_basic_constraints(o: &Ontology) -> BasicConstraints {
    let mut out = BasicConstraints::default();
    let rollups: Vec<_> = o.dimensions.iter().flat_map(|d| &d.rollups).collect();

    for p in &rollups {
        let mut used = HashSet::new();
        let x = fresh_var(&p.child, &mut used);
        let y = fresh_var(&p.parent, &mut used);
        let atom = Atom::new(&p.name, vec![Term::var(&x), Term::var(&y)]);
        out.ncs.push(
            NegativeConstraint::new(format!("cp_child_{}", p.name), vec![atom.clone()])
                .with_negated(&p.child, &x),
        );
        out.ncs.push(
            NegativeConstraint::new(format!("cp_parent_{}", p.name), vec![atom])
                .with_negated(&p.parent, &y),
        );
    }

    for p in &rollups {
        let mut used = HashSet::new();
        let x = fresh_var(&p.child, &mut used);
        let y1 = fresh_var(&p.parent, &mut used);
        let y2 = fresh_var(&p.parent, &mut used);
        out.egds.push(DimensionalEgd::new(
            format!("key_{}", p.name),
            vec![
                Atom::new(&p.name, vec![Term::var(&x), Term::var(&y1)]),
                Atom::new(&p.name, vec![Term::var(&x), Term::var(&y2)]),
            ],
            y1,
            y2,
        ));
    }

    for r in &o.relations {
        let mut used = HashSet::new();
        let cat: Vec<String> = r
            .categorical
            .iter()
            .map(|a| fresh_var(&a.category, &mut used))
            .collect();
        let noncat: Vec<Term> = r
            .noncategorical
            .iter()
            .map(|a| Term::var(fresh_var(a, &mut used)))
            .collect();
        let atom = Atom::relational(&r.name, cat.iter().map(Term::var).collect(), noncat);
        for (i, a) in r.categorical.iter().enumerate() {
            out.ncs.push(
                NegativeConstraint::new(format!("cat_{}_{}", r.name, i + 1), vec![atom.clone()])
                    .with_negated(&a.category, &cat[i]),
            );
        }
    }

    let mut seen = HashSet::new();
    out.ncs.retain(|c| seen.insert(c.canonical()));
    let mut seen = HashSet::new();
    out.egds.retain(|c| seen.insert(c.canonical()));
    out
}
