//! Brute-force reference implementations for checking the engine on small
//! inputs: a naive chase that fires every trigger once per frontier binding
//! and cleans up dominated tuples afterwards, and a matcher that tries every
//! assignment of facts to atoms. Neither uses the engine's indexes or
//! incremental evaluation.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::chase::{ChaseError, ChaseResult, Origin, Program, Provenance, Verdict};
use crate::instance::{
    dominates, Binding, DimensionInstance, InstanceError, MDInstance, NullId, Tuple, Value,
};
use crate::query::{AnswerSet, ConjunctiveQuery};
use crate::schema::{Atom, DimensionalTgd, Ontology, Term};

/// Largest number of fact combinations the brute-force matcher accepts.
pub const MAX_CANDIDATES: u128 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_rounds: usize,
    /// Remove tuples strictly dominated by another tuple at the end.
    pub subsume: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_rounds: 100,
            subsume: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("no fixpoint after {0} rounds")]
    RoundBudgetExhausted(usize),
    #[error("{0} candidate combinations exceed the oracle limit")]
    TooLargeForOracle(u128),
    #[error("the ontology is inconsistent: {0}")]
    Inconsistent(Verdict),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Chase(#[from] ChaseError),
}

type Fact = (String, Vec<Value>);

fn all_facts(dims: &DimensionInstance, inst: &MDInstance) -> Vec<Fact> {
    let mut out = Vec::new();
    for (cat, members) in &dims.members {
        for m in members {
            out.push((cat.clone(), vec![m.clone()]));
        }
    }
    for (pred, rollup) in &dims.rollups {
        for e in &rollup.edges {
            out.push((pred.clone(), e.to_vec()));
        }
    }
    for t in inst.iter() {
        let values = t.values().cloned().collect();
        out.push((t.predicate, values));
    }
    out
}

fn bind(atom: &Atom, fact: &[Value], b: &mut Binding) -> bool {
    if atom.args.len() != fact.len() {
        return false;
    }
    for (t, v) in atom.args.iter().zip(fact) {
        match t {
            Term::Const(c) => {
                if v.as_const() != Some(c) {
                    return false;
                }
            }
            Term::Var(x) => match b.get(x) {
                Some(old) if old != v => return false,
                Some(_) => {}
                None => {
                    b.insert(x.clone(), v.clone());
                }
            },
        }
    }
    true
}

/// Every binding under which each atom maps to some fact, found by trying
/// each combination of same-predicate facts. Sorted and deduplicated.
fn matches(atoms: &[Atom], facts: &[Fact]) -> Vec<Binding> {
    let candidates: Vec<Vec<&[Value]>> = atoms
        .iter()
        .map(|a| {
            facts
                .iter()
                .filter(|(p, _)| *p == a.predicate)
                .map(|(_, v)| v.as_slice())
                .collect()
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; atoms.len()];
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    loop {
        let mut b = Binding::new();
        if atoms
            .iter()
            .zip(&choice)
            .enumerate()
            .all(|(i, (a, &c))| bind(a, candidates[i][c], &mut b))
        {
            out.insert(b);
        }
        // Odometer increment over the combination.
        let mut i = atoms.len();
        loop {
            if i == 0 {
                return out.into_iter().collect();
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn combinations(atoms: &[Atom], facts: &[Fact]) -> u128 {
    atoms
        .iter()
        .map(|a| facts.iter().filter(|(p, _)| *p == a.predicate).count() as u128)
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

/// All homomorphisms from `atoms` into the instance, by exhaustive search.
pub fn brute_force_homomorphisms(
    atoms: &[Atom],
    dims: &DimensionInstance,
    inst: &MDInstance,
) -> Result<Vec<Binding>, OracleError> {
    let facts = all_facts(dims, inst);
    let n = combinations(atoms, &facts);
    if n > MAX_CANDIDATES {
        return Err(OracleError::TooLargeForOracle(n));
    }
    Ok(matches(atoms, &facts))
}

/// Answers of `q` over the instance (nulls included), by exhaustive search.
pub fn brute_force_answers(
    q: &ConjunctiveQuery,
    dims: &DimensionInstance,
    inst: &MDInstance,
) -> Result<AnswerSet, OracleError> {
    let rows = brute_force_homomorphisms(&q.body, dims, inst)?
        .into_iter()
        .filter_map(|b| q.answer_vars.iter().map(|v| b.get(v).cloned()).collect())
        .collect();
    Ok(AnswerSet {
        vars: q.answer_vars.clone(),
        rows,
    })
}

/// Certain answers of `q` over the naive chase of `o`.
pub fn brute_force_certain_answers(
    o: &Ontology,
    q: &ConjunctiveQuery,
    config: &OracleConfig,
) -> Result<AnswerSet, OracleError> {
    let result = naive_chase(o, config)?;
    if !result.verdict.is_consistent() {
        return Err(OracleError::Inconsistent(result.verdict));
    }
    Ok(brute_force_answers(q, &result.dimensions, &result.instance)?.null_free())
}

struct Naive {
    program: Program,
    dims: DimensionInstance,
    inst: MDInstance,
    provenance: Provenance,
    /// (rule, frontier values) pairs that already fired.
    fired: HashSet<(usize, Vec<Value>)>,
    steps: usize,
}

impl Naive {
    fn substitute(&mut self, from: NullId, to: &Value) {
        self.inst.apply_substitution(from, to);
        self.provenance.substitute(from, to);
        let target = Value::Null(from);
        self.fired = std::mem::take(&mut self.fired)
            .into_iter()
            .map(|(r, vs)| {
                let vs = vs
                    .into_iter()
                    .map(|v| if v == target { to.clone() } else { v })
                    .collect();
                (r, vs)
            })
            .collect();
    }

    /// EGDs to a fixpoint, then every NC. Returns the violation, if any.
    fn enforce(&mut self) -> Option<Verdict> {
        'fixpoint: loop {
            let facts = all_facts(&self.dims, &self.inst);
            for egd in &self.program.egds.clone() {
                for b in matches(&egd.body, &facts) {
                    let (Some(x), Some(y)) = (b.get(&egd.lhs), b.get(&egd.rhs)) else {
                        continue;
                    };
                    match (x, y) {
                        _ if x == y => {}
                        (Value::Const(_), Value::Const(_)) => {
                            return Some(Verdict::Inconsistent {
                                constraint: egd.id.clone(),
                                witness: b.clone(),
                            })
                        }
                        (Value::Null(n), Value::Null(m)) => {
                            let (from, to) = if n > m { (*n, y) } else { (*m, x) };
                            let to = to.clone();
                            self.substitute(from, &to);
                            continue 'fixpoint;
                        }
                        (Value::Null(n), c) | (c, Value::Null(n)) => {
                            let (from, to) = (*n, c.clone());
                            self.substitute(from, &to);
                            continue 'fixpoint;
                        }
                    }
                }
            }
            break;
        }
        let facts = all_facts(&self.dims, &self.inst);
        for nc in &self.program.ncs {
            for b in matches(&nc.body, &facts) {
                let violated = match &nc.negated {
                    None => true,
                    Some(neg) => b
                        .get(&neg.var)
                        .is_some_and(|v| !self.dims.is_member(&neg.category, v)),
                };
                if violated {
                    return Some(Verdict::Inconsistent {
                        constraint: nc.id.clone(),
                        witness: b,
                    });
                }
            }
        }
        None
    }

    fn head_tuple(&mut self, tgd: &DimensionalTgd, b: &Binding) -> Result<Tuple, OracleError> {
        let cat_arity = head_cat_arity(&self.inst, tgd)?;
        let mut nulls: HashMap<&str, Value> = HashMap::new();
        let mut values = Vec::new();
        for t in &tgd.head.args {
            values.push(match t {
                Term::Const(c) => Value::constant(c),
                Term::Var(v) if tgd.is_existential(v) => {
                    if !nulls.contains_key(v.as_str()) {
                        let fresh = self.inst.fresh_null();
                        nulls.insert(v, fresh);
                    }
                    nulls[v.as_str()].clone()
                }
                Term::Var(v) => {
                    b.get(v)
                        .cloned()
                        .ok_or_else(|| ChaseError::UnboundHeadVariable {
                            rule: tgd.id.clone(),
                            var: v.clone(),
                        })?
                }
            });
        }
        let noncat = values.split_off(cat_arity);
        Ok(Tuple::new(tgd.head.predicate.clone(), values, noncat))
    }

    fn run(&mut self, config: &OracleConfig) -> Result<Verdict, OracleError> {
        if let Some(v) = self.enforce() {
            return Ok(v);
        }
        for _ in 0..config.max_rounds {
            let facts = all_facts(&self.dims, &self.inst);
            let mut firing = Vec::new();
            for (i, tgd) in self.program.tgds.iter().enumerate() {
                for b in matches(&tgd.body, &facts) {
                    let key: Vec<Value> = tgd
                        .frontier()
                        .iter()
                        .map(|v| b.get(*v).cloned().unwrap_or_else(|| Value::constant("")))
                        .collect();
                    if self.fired.insert((i, key)) {
                        firing.push((i, b));
                    }
                }
            }
            if firing.is_empty() {
                return Ok(Verdict::Consistent);
            }
            for (i, b) in firing {
                let tgd = self.program.tgds[i].clone();
                let tuple = self.head_tuple(&tgd, &b)?;
                self.inst.insert(tuple.clone())?;
                self.steps += 1;
                self.provenance.record(
                    tuple,
                    Origin::Fired {
                        rule: tgd.id.clone(),
                        binding: b,
                    },
                );
            }
            if let Some(v) = self.enforce() {
                return Ok(v);
            }
        }
        Err(OracleError::RoundBudgetExhausted(config.max_rounds))
    }
}

fn head_cat_arity(inst: &MDInstance, tgd: &DimensionalTgd) -> Result<usize, OracleError> {
    match inst.relations.get(&tgd.head.predicate) {
        Some(rel) if rel.arity == tgd.head.args.len() => Ok(rel.cat_arity),
        _ => Err(ChaseError::HeadNotARelation {
            rule: tgd.id.clone(),
            predicate: tgd.head.predicate.clone(),
        }
        .into()),
    }
}

/// Chase by rounds of exhaustive firing: in each round every body match
/// whose frontier values have not fired for that rule before produces a head
/// tuple, whether or not the head is already satisfied. Then EGDs and NCs
/// are enforced. With `subsume`, tuples strictly dominated by another tuple
/// are dropped at the end.
pub fn naive_chase(o: &Ontology, config: &OracleConfig) -> Result<ChaseResult, OracleError> {
    let inst = o.extensional_instance()?;
    let mut provenance = Provenance::default();
    for t in inst.iter() {
        provenance.record(t, Origin::Extensional);
    }
    let mut n = Naive {
        program: Program::from_ontology(o),
        dims: o.dimension_instance(),
        inst,
        provenance,
        fired: HashSet::new(),
        steps: 0,
    };
    let verdict = n.run(config)?;
    if config.subsume && verdict.is_consistent() {
        let (inst, provenance) = subsume(&n.inst, &n.provenance);
        n.inst = inst;
        n.provenance = provenance;
    }
    Ok(ChaseResult {
        instance: n.inst,
        dimensions: n.dims,
        verdict,
        provenance: n.provenance,
        steps_used: n.steps,
    })
}

fn subsume(inst: &MDInstance, provenance: &Provenance) -> (MDInstance, Provenance) {
    let mut out = MDInstance::new();
    for (name, rel) in &inst.relations {
        out.declare(name, rel.cat_arity, rel.arity - rel.cat_arity);
    }
    let mut kept = Provenance::default();
    for name in inst.relation_names() {
        let tuples: Vec<Tuple> = inst.tuples(name).collect();
        for t in &tuples {
            let strictly_dominated = tuples
                .iter()
                .any(|u| u != t && dominates(u, t) && !dominates(t, u));
            if !strictly_dominated {
                // Re-inserting tuples taken from a valid instance cannot fail.
                let _ = out.insert(t.clone());
                if let Some(origin) = provenance.get(t) {
                    kept.record(t.clone(), origin.clone());
                }
            }
        }
    }
    (out, kept)
}

/// Whether every tuple of each instance is dominated by some tuple of the
/// other.
pub fn domination_equivalent(a: &MDInstance, b: &MDInstance) -> bool {
    let covered = |x: &MDInstance, y: &MDInstance| {
        x.iter()
            .all(|t| y.tuples(&t.predicate).any(|u| dominates(&u, &t)))
    };
    covered(a, b) && covered(b, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ontology;

    #[test]
    fn matcher_filters_combinations() {
        let mut d = DimensionInstance::new();
        d.add_edge("P", "a", "b");
        d.add_edge("P", "b", "c");
        let m = MDInstance::new();
        let atoms = vec![
            Atom::new("P", vec![Term::var("x"), Term::var("y")]),
            Atom::new("P", vec![Term::var("y"), Term::var("z")]),
        ];
        let hs = brute_force_homomorphisms(&atoms, &d, &m).unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0]["z"], Value::constant("c"));
    }

    #[test]
    fn guard_refuses_large_products() {
        let mut d = DimensionInstance::new();
        for i in 0..200 {
            d.add_member("K", &i.to_string());
        }
        let atoms = vec![
            Atom::new("K", vec![Term::var("x")]),
            Atom::new("K", vec![Term::var("y")]),
        ];
        assert!(matches!(
            brute_force_homomorphisms(&atoms, &d, &MDInstance::new()),
            Err(OracleError::TooLargeForOracle(40_000))
        ));
    }

    #[test]
    fn no_rules_is_identity() {
        let o = parse_ontology(
            "dimension D { category A; } member A a; relation R(cat A a; v); data R(a; x);",
            "t.omd",
        )
        .unwrap();
        let r = naive_chase(&o, &OracleConfig::default()).unwrap();
        assert_eq!(r.instance, o.extensional_instance().unwrap());
        assert_eq!(r.steps_used, 0);
    }

    #[test]
    fn cycle_runs_out_of_rounds() {
        let o = parse_ontology(
            "dimension D { category A; } member A a;
             relation S(cat A a; v); relation L(cat A a; v, w);
             data S(a; zero);
             tgd t1: S(a; v) -> exists w: L(a; v, w).
             tgd t2: L(a; v, w) -> S(a; w).",
            "t.omd",
        )
        .unwrap();
        let cfg = OracleConfig {
            max_rounds: 5,
            subsume: false,
        };
        assert_eq!(
            naive_chase(&o, &cfg).unwrap_err(),
            OracleError::RoundBudgetExhausted(5)
        );
    }
}
