//! Restricted chase over dimensional TGDs with eager EGD enforcement and
//! incremental NC checking.
//!
//! Triggers are evaluated semi-naively: each round looks only for body
//! matches that use a tuple inserted or rewritten during the previous round.
//! Within a round triggers are applied in rule order, then match order, and
//! each one is re-checked against the current instance before it fires.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;

use crate::instance::{
    bound_positions, delta_plans, extend_homomorphisms, find_homomorphisms, Binding, Database,
    DimensionInstance, Homomorphisms, InstanceError, MDInstance, NullId, Tuple, Value,
};
use crate::schema::{
    generate_basic_constraints, Atom, DimensionalEgd, DimensionalTgd, NegativeConstraint, Ontology,
    Term,
};

/// The rules a chase runs with.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub tgds: Vec<DimensionalTgd>,
    pub egds: Vec<DimensionalEgd>,
    pub ncs: Vec<NegativeConstraint>,
}

impl Program {
    pub fn new(
        tgds: Vec<DimensionalTgd>,
        egds: Vec<DimensionalEgd>,
        ncs: Vec<NegativeConstraint>,
    ) -> Self {
        Program { tgds, egds, ncs }
    }

    /// The ontology's rules and constraints followed by its basic
    /// constraints.
    pub fn from_ontology(o: &Ontology) -> Self {
        let basic = generate_basic_constraints(o);
        Program {
            tgds: o.tgds.clone(),
            egds: o.egds.iter().cloned().chain(basic.egds).collect(),
            ncs: o.ncs.iter().cloned().chain(basic.ncs).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChaseConfig {
    /// Maximum number of trigger applications.
    pub max_steps: usize,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        ChaseConfig { max_steps: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    /// A constraint failed; `witness` satisfies its body (for an EGD, with
    /// two distinct constants on the equated variables).
    Inconsistent {
        constraint: String,
        witness: Binding,
    },
    StepBudgetExhausted,
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent)
    }

    pub fn is_inconsistent(&self) -> bool {
        matches!(self, Verdict::Inconsistent { .. })
    }

    pub fn violated(&self) -> Option<&str> {
        match self {
            Verdict::Inconsistent { constraint, .. } => Some(constraint),
            _ => None,
        }
    }
}

pub(crate) fn format_binding(b: &Binding) -> String {
    let parts: Vec<String> = b.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Consistent => f.write_str("consistent"),
            Verdict::Inconsistent {
                constraint,
                witness,
            } => write!(
                f,
                "inconsistent: `{constraint}` violated by {}",
                format_binding(witness)
            ),
            Verdict::StepBudgetExhausted => f.write_str("step budget exhausted"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Extensional,
    Fired { rule: String, binding: Binding },
}

/// First derivation of every materialized tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    records: IndexMap<Tuple, Origin>,
}

impl Provenance {
    pub fn get(&self, tuple: &Tuple) -> Option<&Origin> {
        self.records.get(tuple)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tuple, &Origin)> {
        self.records.iter()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records `origin` unless `tuple` already has one.
    pub fn record(&mut self, tuple: Tuple, origin: Origin) {
        self.records.entry(tuple).or_insert(origin);
    }

    /// Rewrites `from` to `to` in tuples and bindings; when two tuples
    /// collapse the earlier record is kept.
    pub fn substitute(&mut self, from: NullId, to: &Value) {
        let target = Value::Null(from);
        let swap = |v: &mut Value| {
            if *v == target {
                *v = to.clone();
            }
        };
        let old = std::mem::take(&mut self.records);
        for (mut t, mut o) in old {
            t.cat.iter_mut().chain(t.noncat.iter_mut()).for_each(swap);
            if let Origin::Fired { binding, .. } = &mut o {
                binding.values_mut().for_each(swap);
            }
            self.records.entry(t).or_insert(o);
        }
    }
}

/// A rule together with a body match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trigger {
    pub rule: String,
    pub binding: Binding,
}

#[derive(Clone, Debug)]
pub struct ChaseResult {
    pub instance: MDInstance,
    pub dimensions: DimensionInstance,
    pub verdict: Verdict,
    pub provenance: Provenance,
    pub steps_used: usize,
}

impl ChaseResult {
    pub fn database(&self) -> Database<'_> {
        Database::new(&self.dimensions, &self.instance)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChaseError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("rule `{rule}`: head predicate `{predicate}` is not a categorical relation")]
    HeadNotARelation { rule: String, predicate: String },
    #[error("rule `{rule}`: head variable `{var}` is not bound by the body")]
    UnboundHeadVariable { rule: String, var: String },
    #[error("rule `{rule}` would place a labeled null in a categorical position of {tuple}")]
    IllegalNullInCategorical { rule: String, tuple: String },
}

/// Whether some stored tuple matches the head of `tgd` under `binding`,
/// with existential positions matching anything.
fn head_satisfied(tgd: &DimensionalTgd, binding: &Binding, db: Database<'_>) -> bool {
    let frontier: Binding = tgd
        .frontier()
        .into_iter()
        .filter_map(|v| binding.get(v).map(|x| (v.to_string(), x.clone())))
        .collect();
    extend_homomorphisms(std::slice::from_ref(&tgd.head), db, frontier)
        .next()
        .is_some()
}

/// Body matches of every TGD whose head is not yet satisfied, in rule order
/// then match order.
pub fn find_active_triggers(program: &Program, db: Database<'_>) -> Vec<Trigger> {
    let mut out = Vec::new();
    for tgd in &program.tgds {
        for b in find_homomorphisms(&tgd.body, db) {
            if !head_satisfied(tgd, &b, db) {
                out.push(Trigger {
                    rule: tgd.id.clone(),
                    binding: b,
                });
            }
        }
    }
    out
}

/// Inserts the head of `tgd` under `binding`, with one fresh labeled null
/// per existential variable. Returns the inserted tuple.
pub fn apply_trigger(
    instance: &mut MDInstance,
    tgd: &DimensionalTgd,
    binding: &Binding,
) -> Result<Tuple, ChaseError> {
    let cat_arity = match instance.relations.get(&tgd.head.predicate) {
        Some(rel) if rel.arity == tgd.head.args.len() => rel.cat_arity,
        _ => {
            return Err(ChaseError::HeadNotARelation {
                rule: tgd.id.clone(),
                predicate: tgd.head.predicate.clone(),
            })
        }
    };
    let mut fresh: HashMap<&str, Value> = HashMap::new();
    let mut values = Vec::with_capacity(tgd.head.args.len());
    for t in &tgd.head.args {
        let v = match t {
            Term::Const(c) => Value::constant(c),
            Term::Var(v) if tgd.is_existential(v) => fresh
                .entry(v.as_str())
                .or_insert_with(|| instance.fresh_null())
                .clone(),
            Term::Var(v) => {
                binding
                    .get(v)
                    .cloned()
                    .ok_or_else(|| ChaseError::UnboundHeadVariable {
                        rule: tgd.id.clone(),
                        var: v.clone(),
                    })?
            }
        };
        values.push(v);
    }
    let noncat = values.split_off(cat_arity);
    let tuple = Tuple::new(tgd.head.predicate.clone(), values, noncat);
    if tuple.cat.iter().any(Value::is_null) {
        return Err(ChaseError::IllegalNullInCategorical {
            rule: tgd.id.clone(),
            tuple: tuple.to_string(),
        });
    }
    instance.insert(tuple.clone())?;
    Ok(tuple)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EgdOutcome {
    Unchanged,
    /// Every occurrence of `from` was replaced by `to`.
    Merged {
        from: NullId,
        to: Value,
    },
    /// The equated values are distinct constants.
    Inconsistent,
}

/// Enforces `egd` for one body match. When both sides are nulls the one
/// with the larger index is replaced.
pub fn apply_egd(instance: &mut MDInstance, egd: &DimensionalEgd, binding: &Binding) -> EgdOutcome {
    let (Some(a), Some(b)) = (binding.get(&egd.lhs), binding.get(&egd.rhs)) else {
        return EgdOutcome::Unchanged;
    };
    let (from, to) = match (a, b) {
        _ if a == b => return EgdOutcome::Unchanged,
        (Value::Const(_), Value::Const(_)) => return EgdOutcome::Inconsistent,
        (Value::Null(x), Value::Null(y)) => {
            if x > y {
                (*x, b.clone())
            } else {
                (*y, a.clone())
            }
        }
        (Value::Null(x), c) | (c, Value::Null(x)) => (*x, c.clone()),
    };
    instance.apply_substitution(from, &to);
    EgdOutcome::Merged { from, to }
}

fn nc_violated(nc: &NegativeConstraint, b: &Binding, dims: &DimensionInstance) -> bool {
    match &nc.negated {
        None => true,
        Some(neg) => b
            .get(&neg.var)
            .is_some_and(|v| !dims.is_member(&neg.category, v)),
    }
}

/// Checks every NC against the instance; categories are closed-world.
pub fn check_ncs(program: &Program, db: Database<'_>) -> Verdict {
    for nc in &program.ncs {
        for b in find_homomorphisms(&nc.body, db) {
            if nc_violated(nc, &b, db.dimensions) {
                return Verdict::Inconsistent {
                    constraint: nc.id.clone(),
                    witness: b,
                };
            }
        }
    }
    Verdict::Consistent
}

/// Materializes `o` with its rules and basic constraints.
pub fn chase(o: &Ontology, config: &ChaseConfig) -> Result<ChaseResult, ChaseError> {
    chase_program(o, &Program::from_ontology(o), config)
}

/// Materializes the data of `o` under `program`.
pub fn chase_program(
    o: &Ontology,
    program: &Program,
    config: &ChaseConfig,
) -> Result<ChaseResult, ChaseError> {
    let instance = o.extensional_instance()?;
    let mut provenance = Provenance::default();
    for t in instance.iter() {
        provenance.record(t, Origin::Extensional);
    }
    let mut engine = Engine {
        program,
        dims: o.dimension_instance(),
        inst: instance,
        provenance,
        merged: HashMap::new(),
        steps: 0,
    };
    let verdict = engine.run(config)?;
    Ok(ChaseResult {
        instance: engine.inst,
        dimensions: engine.dims,
        verdict,
        provenance: engine.provenance,
        steps_used: engine.steps,
    })
}

struct Engine<'p> {
    program: &'p Program,
    dims: DimensionInstance,
    inst: MDInstance,
    provenance: Provenance,
    /// Nulls eliminated by EGDs, so that pending bindings can be updated.
    merged: HashMap<NullId, Value>,
    steps: usize,
}

impl Engine<'_> {
    fn db(&self) -> Database<'_> {
        Database::new(&self.dims, &self.inst)
    }

    fn run(&mut self, config: &ChaseConfig) -> Result<Verdict, ChaseError> {
        self.prepare_indexes();
        if let Some(v) = self.normalize(0) {
            return Ok(v);
        }
        let mut since = 0;
        loop {
            let round_start = self.inst.next_stamp();
            let triggers = self.discover(since);
            if triggers.is_empty() {
                return Ok(Verdict::Consistent);
            }
            for (rule, binding) in triggers {
                let tgd = &self.program.tgds[rule];
                let binding = self.resolve(binding);
                if head_satisfied(tgd, &binding, self.db()) {
                    continue;
                }
                if self.steps >= config.max_steps {
                    return Ok(Verdict::StepBudgetExhausted);
                }
                let mark = self.inst.next_stamp();
                let tuple = apply_trigger(&mut self.inst, tgd, &binding)?;
                self.steps += 1;
                self.provenance.record(
                    tuple,
                    Origin::Fired {
                        rule: tgd.id.clone(),
                        binding,
                    },
                );
                if let Some(v) = self.normalize(mark) {
                    return Ok(v);
                }
            }
            since = round_start;
        }
    }

    /// Builds the relation indexes that rule bodies and head checks probe.
    fn prepare_indexes(&mut self) {
        let empty = BTreeSet::new();
        let mut wanted = HashSet::new();
        let bodies = self
            .program
            .tgds
            .iter()
            .map(|t| &t.body)
            .chain(self.program.egds.iter().map(|e| &e.body))
            .chain(self.program.ncs.iter().map(|n| &n.body));
        for body in bodies {
            wanted.extend(bound_positions(body, &empty));
            for i in 0..body.len() {
                let order = std::iter::once(&body[i]).chain(
                    body.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, a)| a),
                );
                wanted.extend(bound_positions(order, &empty));
            }
        }
        for tgd in &self.program.tgds {
            let frontier: BTreeSet<String> = tgd.frontier().into_iter().map(String::from).collect();
            wanted.extend(bound_positions(std::iter::once(&tgd.head), &frontier));
        }
        let mut wanted: Vec<_> = wanted.into_iter().collect();
        wanted.sort();
        for (pred, positions) in wanted {
            self.inst.ensure_index(&pred, positions);
        }
    }

    fn resolve_value(&self, v: &Value) -> Value {
        let mut v = v.clone();
        while let Some(n) = v.as_null() {
            match self.merged.get(&n) {
                Some(next) => v = next.clone(),
                None => break,
            }
        }
        v
    }

    fn resolve(&self, mut b: Binding) -> Binding {
        if !self.merged.is_empty() {
            for v in b.values_mut() {
                *v = self.resolve_value(v);
            }
        }
        b
    }

    /// TGD matches using a tuple stamped at or after `since` whose head is
    /// not satisfied.
    fn discover(&self, since: u64) -> Vec<(usize, Binding)> {
        let db = self.db();
        let mut out = Vec::new();
        for (i, tgd) in self.program.tgds.iter().enumerate() {
            for plan in delta_plans(&tgd.body, since) {
                for b in Homomorphisms::new(db, plan, Binding::new()) {
                    if !head_satisfied(tgd, &b, db) {
                        out.push((i, b));
                    }
                }
            }
        }
        out
    }

    /// EGD fixpoint, then NC check, over tuples stamped at or after `since`.
    fn normalize(&mut self, since: u64) -> Option<Verdict> {
        self.egd_fixpoint(since).or_else(|| self.nc_check(since))
    }

    fn egd_fixpoint(&mut self, mut since: u64) -> Option<Verdict> {
        loop {
            let mark = self.inst.next_stamp();
            let mut pending = Vec::new();
            {
                let db = self.db();
                for (i, egd) in self.program.egds.iter().enumerate() {
                    for plan in delta_plans(&egd.body, since) {
                        for b in Homomorphisms::new(db, plan, Binding::new()) {
                            if b.get(&egd.lhs) != b.get(&egd.rhs) {
                                pending.push((i, b));
                            }
                        }
                    }
                }
            }
            if pending.is_empty() {
                return None;
            }
            for (i, b) in pending {
                let egd = &self.program.egds[i];
                let b = self.resolve(b);
                match apply_egd(&mut self.inst, egd, &b) {
                    EgdOutcome::Unchanged => {}
                    EgdOutcome::Merged { from, to } => {
                        self.provenance.substitute(from, &to);
                        self.merged.insert(from, to);
                    }
                    EgdOutcome::Inconsistent => {
                        return Some(Verdict::Inconsistent {
                            constraint: egd.id.clone(),
                            witness: b,
                        })
                    }
                }
            }
            since = mark;
        }
    }

    fn nc_check(&self, since: u64) -> Option<Verdict> {
        let db = self.db();
        for nc in &self.program.ncs {
            for plan in delta_plans(&nc.body, since) {
                for b in Homomorphisms::new(db, plan, Binding::new()) {
                    if nc_violated(nc, &b, &self.dims) {
                        return Some(Verdict::Inconsistent {
                            constraint: nc.id.clone(),
                            witness: b,
                        });
                    }
                }
            }
        }
        None
    }
}

/// Renders `atom` with its variables replaced by their values in `binding`.
pub fn instantiate(atom: &Atom, binding: &Binding) -> String {
    let args: Vec<String> = atom
        .args
        .iter()
        .map(|t| match t {
            Term::Const(c) => Value::constant(c).to_string(),
            Term::Var(v) => binding
                .get(v)
                .map_or_else(|| v.clone(), ToString::to_string),
        })
        .collect();
    match atom.split {
        Some(k) if k <= args.len() => format!(
            "{}({};{})",
            atom.predicate,
            args[..k].join(","),
            args[k..].join(",")
        ),
        _ => format!("{}({})", atom.predicate, args.join(",")),
    }
}
