//! Conjunctive queries and certain answers.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::chase::{ChaseResult, Verdict};
use crate::instance::{find_homomorphisms, Database, Value};
use crate::schema::Atom;
use crate::span::SourceSpan;

/// `Q(x1, ..., xk): exists ys: body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjunctiveQuery {
    pub name: String,
    pub answer_vars: Vec<String>,
    pub existential: Vec<String>,
    pub body: Vec<Atom>,
    pub span: Option<SourceSpan>,
}

impl ConjunctiveQuery {
    pub fn new(name: impl Into<String>, answer_vars: Vec<String>, body: Vec<Atom>) -> Self {
        ConjunctiveQuery {
            name: name.into(),
            answer_vars,
            existential: Vec::new(),
            body,
            span: None,
        }
    }
}

/// Answer rows, deduplicated and sorted by value order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnswerSet {
    pub vars: Vec<String>,
    pub rows: BTreeSet<Vec<Value>>,
}

impl AnswerSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows as raw lexical strings, for comparisons in tests and tools.
    pub fn raw_rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|v| v.raw().to_string()).collect())
            .collect()
    }

    /// Only the rows without labeled nulls.
    pub fn null_free(&self) -> AnswerSet {
        AnswerSet {
            vars: self.vars.clone(),
            rows: self
                .rows
                .iter()
                .filter(|r| !r.iter().any(Value::is_null))
                .cloned()
                .collect(),
        }
    }

    /// Header line of variable names, then one line per row; fields are
    /// tab-separated.
    pub fn to_tsv(&self) -> String {
        let mut out = self.vars.join("\t");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|v| v.raw().to_string()).collect();
            let _ = writeln!(out, "{}", fields.join("\t"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error("query `{query}` uses unknown predicate `{predicate}`")]
    UnknownPredicate { query: String, predicate: String },
    #[error("query `{query}`: answer variable `{var}` does not occur in the body")]
    UnboundAnswerVariable { query: String, var: String },
    #[error("the ontology is inconsistent: {0}")]
    InconsistentOntology(String),
    #[error("the chase stopped before reaching a fixpoint")]
    IncompleteChase,
}

/// All answers of `q` over `db`, including rows with labeled nulls.
pub fn evaluate_cq(q: &ConjunctiveQuery, db: Database<'_>) -> Result<AnswerSet, QueryError> {
    for atom in &q.body {
        if !db.knows(&atom.predicate) {
            return Err(QueryError::UnknownPredicate {
                query: q.name.clone(),
                predicate: atom.predicate.clone(),
            });
        }
    }
    for v in &q.answer_vars {
        if !q.body.iter().any(|a| a.vars().any(|x| x == v)) {
            return Err(QueryError::UnboundAnswerVariable {
                query: q.name.clone(),
                var: v.clone(),
            });
        }
    }
    let rows = find_homomorphisms(&q.body, db)
        .map(|b| q.answer_vars.iter().map(|v| b[v].clone()).collect())
        .collect();
    Ok(AnswerSet {
        vars: q.answer_vars.clone(),
        rows,
    })
}

/// Null-free answers of `q` over a completed, consistent chase.
pub fn certain_answers(
    q: &ConjunctiveQuery,
    result: &ChaseResult,
) -> Result<AnswerSet, QueryError> {
    match &result.verdict {
        Verdict::Consistent => {}
        Verdict::Inconsistent { .. } => {
            return Err(QueryError::InconsistentOntology(result.verdict.to_string()))
        }
        Verdict::StepBudgetExhausted => return Err(QueryError::IncompleteChase),
    }
    Ok(evaluate_cq(q, result.database())?.null_free())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{DimensionInstance, MDInstance, Tuple};
    use crate::schema::Term;

    fn facts() -> (DimensionInstance, MDInstance) {
        let dims = DimensionInstance::new();
        let mut m = MDInstance::new();
        m.declare("R", 1, 1);
        m.declare("E", 1, 0);
        m.insert(Tuple::of("R", &["a"], &["x"])).unwrap();
        m.insert(Tuple::new("R", vec!["b".into()], vec![Value::null(1)]))
            .unwrap();
        (dims, m)
    }

    fn q(vars: &[&str], body: Vec<Atom>) -> ConjunctiveQuery {
        ConjunctiveQuery::new("Q", vars.iter().map(|s| s.to_string()).collect(), body)
    }

    #[test]
    fn projection_keeps_nulls_until_filtered() {
        let (d, m) = facts();
        let query = q(
            &["y"],
            vec![Atom::relational(
                "R",
                vec![Term::var("x")],
                vec![Term::var("y")],
            )],
        );
        let raw = evaluate_cq(&query, Database::new(&d, &m)).unwrap();
        assert_eq!(raw.len(), 2);
        assert_eq!(raw.null_free().raw_rows(), vec![vec!["x".to_string()]]);
    }

    #[test]
    fn empty_body_is_boolean_true() {
        let (d, m) = facts();
        let raw = evaluate_cq(&q(&[], vec![]), Database::new(&d, &m)).unwrap();
        assert_eq!(raw.rows.len(), 1);
        assert!(raw.rows.iter().next().unwrap().is_empty());
    }

    #[test]
    fn empty_relation_gives_no_rows() {
        let (d, m) = facts();
        let query = q(
            &["x"],
            vec![Atom::relational("E", vec![Term::var("x")], vec![])],
        );
        assert!(evaluate_cq(&query, Database::new(&d, &m))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn unknown_predicate() {
        let (d, m) = facts();
        let query = q(&["x"], vec![Atom::new("Nope", vec![Term::var("x")])]);
        assert!(matches!(
            evaluate_cq(&query, Database::new(&d, &m)),
            Err(QueryError::UnknownPredicate { .. })
        ));
    }

    #[test]
    fn tsv_output() {
        let (d, m) = facts();
        let query = q(
            &["x", "y"],
            vec![Atom::relational(
                "R",
                vec![Term::var("x")],
                vec![Term::var("y")],
            )],
        );
        let a = evaluate_cq(&query, Database::new(&d, &m)).unwrap();
        assert_eq!(a.to_tsv(), "x\ty\na\tx\nb\t_:n1\n");
    }
}
