//! Ontological multidimensional data (OMD) engine.
//!
//! An OMD ontology combines dimension hierarchies (categories linked by
//! child-parent roll-up predicates), categorical relations whose attributes
//! are split into categorical and non-categorical positions, existential
//! dimensional rules (TGDs), and dimensional constraints (EGDs and negative
//! constraints). This crate parses such ontologies, validates them,
//! materializes them with a restricted chase and answers conjunctive queries
//! under certain-answer semantics.
//!
//! ```
//! use omd_core::{chase, parse_ontology, ChaseConfig};
//!
//! let src = r#"
//!     dimension Hospital { category Ward; category Unit; rollup WardUnit: Ward -> Unit; }
//!     member Ward W1; member Unit standard;
//!     edge WardUnit(W1, standard);
//!     relation Shifts(cat Ward ward; nurse, shift);
//!     relation Staff(cat Unit unit; nurse, role);
//!     data Shifts(W1; helen, morning);
//!     tgd up: Shifts(w; n, s), WardUnit(w, u) -> exists r: Staff(u; n, r).
//! "#;
//! let ontology = parse_ontology(src, "inline.omd").unwrap();
//! let result = chase(&ontology, &ChaseConfig::default()).unwrap();
//! assert!(result.verdict.is_consistent());
//! assert_eq!(result.instance.len(), 2);
//! ```

pub mod chase;
pub mod fixtures;
pub mod instance;
pub mod oracle;
pub mod parser;
pub mod query;
pub mod schema;
pub mod span;

pub use chase::{
    apply_egd, apply_trigger, chase, check_ncs, find_active_triggers, ChaseConfig, ChaseError,
    ChaseResult, EgdOutcome, Origin, Program, Provenance, Trigger, Verdict,
};
pub use instance::{
    dominates, find_homomorphisms, Binding, Database, DimensionInstance, InstanceError, MDInstance,
    NullId, Tuple, Value,
};
pub use parser::{parse_ontology, parse_query, serialize_ontology, ParseError};
pub use query::{certain_answers, evaluate_cq, AnswerSet, ConjunctiveQuery, QueryError};
pub use schema::{
    Atom, CategoricalPredicateSchema, Category, ChildParentPredicate, Diagnostic, DiagnosticKind,
    DimensionSchema, DimensionalEgd, DimensionalTgd, NegativeConstraint, Ontology, Severity, Term,
    ValidationReport,
};
pub use span::SourceSpan;
