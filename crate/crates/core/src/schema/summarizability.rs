use super::{
    Atom, ChildParentPredicate, DimensionSchema, DimensionalEgd, DimensionalTgd, Term, TgdKind,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummarizabilityMode {
    /// Every member rolls up to at most one member of each ancestor category.
    Strictness,
    /// Every member has a parent in each parent category.
    Homogeneity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SummarizabilityConstraints {
    Strictness(Vec<DimensionalEgd>),
    Homogeneity(Vec<DimensionalTgd>),
}

impl SummarizabilityConstraints {
    pub fn egds(&self) -> &[DimensionalEgd] {
        match self {
            SummarizabilityConstraints::Strictness(e) => e,
            SummarizabilityConstraints::Homogeneity(_) => &[],
        }
    }

    pub fn tgds(&self) -> &[DimensionalTgd] {
        match self {
            SummarizabilityConstraints::Strictness(_) => &[],
            SummarizabilityConstraints::Homogeneity(t) => t,
        }
    }

    pub fn len(&self) -> usize {
        self.egds().len() + self.tgds().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn generate_summarizability_constraints(
    dim: &DimensionSchema,
    mode: SummarizabilityMode,
) -> SummarizabilityConstraints {
    match mode {
        SummarizabilityMode::Strictness => SummarizabilityConstraints::Strictness(strictness(dim)),
        SummarizabilityMode::Homogeneity => {
            SummarizabilityConstraints::Homogeneity(homogeneity(dim))
        }
    }
}

fn strictness(dim: &DimensionSchema) -> Vec<DimensionalEgd> {
    let mut out: Vec<DimensionalEgd> = dim
        .rollups
        .iter()
        .map(|p| {
            DimensionalEgd::new(
                format!("strict_{}", p.name),
                vec![
                    Atom::new(&p.name, vec![Term::var("x"), Term::var("y")]),
                    Atom::new(&p.name, vec![Term::var("x"), Term::var("y'")]),
                ],
                "y",
                "y'",
            )
        })
        .collect();

    // Two different roll-up paths from one category to a common ancestor
    // must reach the same member.
    for from in &dim.categories {
        let paths = paths_from(dim, &from.name);
        for to in &dim.categories {
            let ending: Vec<&Vec<&ChildParentPredicate>> = paths
                .iter()
                .filter(|p| p.last().is_some_and(|e| e.parent == to.name))
                .collect();
            let mut k = 0;
            for i in 0..ending.len() {
                for j in i + 1..ending.len() {
                    k += 1;
                    let mut body = chain(ending[i], "a", "y");
                    body.extend(chain(ending[j], "b", "y'"));
                    out.push(DimensionalEgd::new(
                        format!("strict_{}_{}_{k}", from.name, to.name),
                        body,
                        "y",
                        "y'",
                    ));
                }
            }
        }
    }
    out
}

/// Every non-empty roll-up path starting at `from`, depth first in
/// declaration order. Cycles are cut.
fn paths_from<'a>(dim: &'a DimensionSchema, from: &str) -> Vec<Vec<&'a ChildParentPredicate>> {
    fn walk<'a>(
        dim: &'a DimensionSchema,
        at: &str,
        prefix: &mut Vec<&'a ChildParentPredicate>,
        out: &mut Vec<Vec<&'a ChildParentPredicate>>,
    ) {
        for r in dim.rollups.iter().filter(|r| r.child == at) {
            if prefix.iter().any(|p| p.child == r.parent) || r.parent == r.child {
                continue;
            }
            prefix.push(r);
            out.push(prefix.clone());
            walk(dim, &r.parent, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(dim, from, &mut Vec::new(), &mut out);
    out
}

/// Atoms `P1(x, p1), P2(p1, p2), ..., Pn(p_{n-1}, end)`.
fn chain(path: &[&ChildParentPredicate], prefix: &str, end: &str) -> Vec<Atom> {
    let mut prev = "x".to_string();
    path.iter()
        .enumerate()
        .map(|(i, p)| {
            let next = if i + 1 == path.len() {
                end.to_string()
            } else {
                format!("{prefix}{}", i + 1)
            };
            let atom = Atom::new(&p.name, vec![Term::var(&prev), Term::var(&next)]);
            prev = next;
            atom
        })
        .collect()
}

fn homogeneity(dim: &DimensionSchema) -> Vec<DimensionalTgd> {
    dim.rollups
        .iter()
        .map(|p| {
            let mut t = DimensionalTgd::new(
                format!("homog_{}", p.name),
                vec![Atom::new(&p.child, vec![Term::var("x")])],
                vec!["y".into()],
                Atom::new(&p.name, vec![Term::var("x"), Term::var("y")]),
            );
            t.kind = TgdKind::SummarizabilityExtension;
            t
        })
        .collect()
}
