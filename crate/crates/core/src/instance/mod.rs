//! Dimension instances and categorical-relation instances over constants and
//! labeled nulls, with conjunctive matching, null substitution and tuple
//! domination.

mod dimension;
mod homomorphism;
mod relation;
mod value;

use std::collections::HashMap;

pub use dimension::DimensionInstance;
pub use homomorphism::{
    extend_homomorphisms, find_homomorphisms, Binding, Database, Homomorphisms,
};
pub use relation::{MDInstance, Tuple};
pub use value::{NullId, RawValue, Value};

pub(crate) use homomorphism::{bound_positions, delta_plans};
pub(crate) use value::{is_number, write_quoted};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("relation `{relation}` expects {}+{} arguments, got {}+{}", expected.0, expected.1, found.0, found.1)]
    ArityMismatch {
        relation: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("labeled null in categorical position: {0}")]
    NullInCategoricalPosition(String),
}

/// Whether `t1` carries at least the information of `t2`: some mapping that
/// fixes constants and sends each null of `t2` to the value at the same
/// position of `t1` turns `t2` into `t1`. Reflexive and transitive.
pub fn dominates(t1: &Tuple, t2: &Tuple) -> bool {
    if t1.predicate != t2.predicate
        || t1.cat.len() != t2.cat.len()
        || t1.noncat.len() != t2.noncat.len()
    {
        return false;
    }
    let mut mapping: HashMap<NullId, &Value> = HashMap::new();
    for (v1, v2) in t1.values().zip(t2.values()) {
        match v2 {
            Value::Const(_) => {
                if v1 != v2 {
                    return false;
                }
            }
            Value::Null(n) => match mapping.get(n) {
                Some(prev) if *prev != v1 => return false,
                Some(_) => {}
                None => {
                    mapping.insert(*n, v1);
                }
            },
        }
    }
    true
}
