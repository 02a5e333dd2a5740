use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use super::{DimensionSchema, DimensionalTgd, Ontology, PredicateKind, Term};

/// Longest-path level of every category of `dim`; base categories are at 0.
/// Categories on a cycle get the level reached before the cycle closes.
pub fn category_levels(dim: &DimensionSchema) -> BTreeMap<String, usize> {
    fn visit<'a>(
        cat: &'a str,
        children_of: &HashMap<&'a str, Vec<&'a str>>,
        memo: &mut BTreeMap<String, usize>,
        active: &mut HashSet<&'a str>,
    ) -> usize {
        if let Some(&l) = memo.get(cat) {
            return l;
        }
        if !active.insert(cat) {
            return 0;
        }
        let level = children_of
            .get(cat)
            .into_iter()
            .flatten()
            .map(|c| visit(c, children_of, memo, active) + 1)
            .max()
            .unwrap_or(0);
        active.remove(cat);
        memo.insert(cat.to_string(), level);
        level
    }

    let mut children_of: HashMap<&str, Vec<&str>> = HashMap::new();
    for r in &dim.rollups {
        children_of.entry(&r.parent).or_default().push(&r.child);
    }
    let mut memo = BTreeMap::new();
    for c in &dim.categories {
        visit(&c.name, &children_of, &mut memo, &mut HashSet::new());
    }
    memo
}

/// Level of `category` within `dim`, or `None` if it is not declared there.
pub fn category_level(category: &str, dim: &DimensionSchema) -> Option<usize> {
    dim.category(category)?;
    category_levels(dim).get(category).copied()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Navigation {
    Upward,
    Downward,
    Lateral,
    Mixed,
}

impl fmt::Display for Navigation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Navigation::Upward => "upward",
            Navigation::Downward => "downward",
            Navigation::Lateral => "lateral",
            Navigation::Mixed => "mixed",
        })
    }
}

/// A head categorical position connected through child-parent atoms to a
/// body categorical position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDifference {
    pub head_position: usize,
    pub head_category: String,
    pub body_atom: usize,
    pub body_position: usize,
    pub body_category: String,
    /// Head level minus body level.
    pub difference: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NavigationReport {
    pub navigation: Navigation,
    pub differences: Vec<LevelDifference>,
}

/// Direction in which `tgd` moves data through the dimension hierarchies.
///
/// Each head categorical variable is followed through the child-parent atoms
/// of the body; every body categorical position it reaches contributes the
/// level difference between the two categories. Positions joined without
/// any child-parent atom do not navigate and are ignored.
pub fn classify_navigation(tgd: &DimensionalTgd, o: &Ontology) -> NavigationReport {
    let catalog = o.catalog();
    let levels: HashMap<String, i64> = o
        .dimensions
        .iter()
        .flat_map(|d| category_levels(d).into_iter().map(|(c, l)| (c, l as i64)))
        .collect();

    // Undirected variable graph of the child-parent atoms.
    let mut adjacent: HashMap<&str, Vec<&str>> = HashMap::new();
    for atom in &tgd.body {
        if !matches!(
            catalog.atom_kind(atom),
            Some(PredicateKind::ChildParent { .. })
        ) {
            continue;
        }
        if let [Term::Var(a), Term::Var(b)] = atom.args.as_slice() {
            adjacent.entry(a).or_default().push(b);
            adjacent.entry(b).or_default().push(a);
        }
    }

    let mut differences = Vec::new();
    let head_categories = match catalog.atom_kind(&tgd.head) {
        Some(PredicateKind::Relation { categories, .. }) => categories.clone(),
        _ => Vec::new(),
    };
    for (hp, head_cat) in head_categories.iter().enumerate() {
        let Some(Term::Var(x)) = tgd.head.args.get(hp) else {
            continue;
        };
        let mut reached = HashSet::from([x.as_str()]);
        let mut queue = VecDeque::from([x.as_str()]);
        let mut connected = Vec::new();
        while let Some(v) = queue.pop_front() {
            for &n in adjacent.get(v).into_iter().flatten() {
                if reached.insert(n) {
                    connected.push(n);
                    queue.push_back(n);
                }
            }
        }
        for (ai, atom) in tgd.body.iter().enumerate() {
            let Some(PredicateKind::Relation { categories, .. }) = catalog.atom_kind(atom) else {
                continue;
            };
            for (bp, body_cat) in categories.iter().enumerate() {
                let Some(Term::Var(y)) = atom.args.get(bp) else {
                    continue;
                };
                if !connected.contains(&y.as_str()) {
                    continue;
                }
                let (Some(hl), Some(bl)) = (levels.get(head_cat), levels.get(body_cat)) else {
                    continue;
                };
                differences.push(LevelDifference {
                    head_position: hp,
                    head_category: head_cat.clone(),
                    body_atom: ai,
                    body_position: bp,
                    body_category: body_cat.clone(),
                    difference: hl - bl,
                });
            }
        }
    }

    let navigation = if differences.iter().all(|d| d.difference == 0) {
        Navigation::Lateral
    } else if differences.iter().all(|d| d.difference > 0) {
        Navigation::Upward
    } else if differences.iter().all(|d| d.difference < 0) {
        Navigation::Downward
    } else {
        Navigation::Mixed
    };
    NavigationReport {
        navigation,
        differences,
    }
}
