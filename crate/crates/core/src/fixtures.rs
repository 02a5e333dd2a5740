//! Example ontologies shipped with the crate.

use crate::parser::{parse_ontology, ParseError};
use crate::schema::Ontology;

/// The hospital example.
pub const HOSPITAL: &str = include_str!("../fixtures/hospital.omd");
/// The hospital example plus a tuple violating `eta`.
pub const HOSPITAL_VIOLATION: &str = include_str!("../fixtures/hospital-violation.omd");
/// A generated thermometer type that the `therm` EGD resolves to a constant.
pub const THERM_MERGE: &str = include_str!("../fixtures/therm-merge.omd");
/// Two different thermometer types in one unit.
pub const THERM_CONFLICT: &str = include_str!("../fixtures/therm-conflict.omd");
/// Rules whose restricted chase never terminates.
pub const NONTERMINATING: &str = include_str!("../fixtures/nonterminating.omd");
pub const EMPTY: &str = include_str!("../fixtures/empty.omd");

/// Every fixture with its file name.
pub const ALL: [(&str, &str); 6] = [
    ("hospital.omd", HOSPITAL),
    ("hospital-violation.omd", HOSPITAL_VIOLATION),
    ("therm-merge.omd", THERM_MERGE),
    ("therm-conflict.omd", THERM_CONFLICT),
    ("nonterminating.omd", NONTERMINATING),
    ("empty.omd", EMPTY),
];

/// Parses one of the fixtures above.
pub fn load(name: &str, text: &str) -> Result<Ontology, ParseError> {
    parse_ontology(text, name)
}

pub fn hospital() -> Ontology {
    load("hospital.omd", HOSPITAL).expect("hospital fixture parses")
}
