//! CSV ingestion into categorical relations.

use std::path::Path;

use anyhow::{bail, Context, Result};
use omd_core::schema::DataDecl;
use omd_core::{Ontology, Value};

/// Reads `path` and appends its rows to the data of `relation`.
///
/// The header must list the relation's attributes in schema order; the
/// categorical split comes from the schema. Empty cells are rejected.
pub fn merge_csv(o: &mut Ontology, relation: &str, path: &Path) -> Result<usize> {
    let file =
        std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    merge_reader(o, relation, file, path)
}

pub fn merge_reader(
    o: &mut Ontology,
    relation: &str,
    input: impl std::io::Read,
    path: &Path,
) -> Result<usize> {
    let Some(schema) = o.relation(relation) else {
        bail!("{}: unknown relation `{relation}`", path.display());
    };
    let expected: Vec<String> = schema.attribute_names().map(String::from).collect();
    let split = schema.categorical.len();

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .with_context(|| format!("{}: cannot read header", path.display()))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header != expected {
        bail!(
            "{}:1: header `{}` does not match `{relation}({})`",
            path.display(),
            header.join(","),
            expected.join(",")
        );
    }

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.with_context(|| format!("{}:{line}: malformed row", path.display()))?;
        if let Some(col) = record.iter().position(str::is_empty) {
            bail!(
                "{}:{line}: empty value for attribute `{}`",
                path.display(),
                expected[col]
            );
        }
        let values: Vec<Value> = record.iter().map(Value::constant).collect();
        let (cat, noncat) = values.split_at(split);
        rows.push(DataDecl {
            relation: relation.to_string(),
            categorical: cat.to_vec(),
            noncategorical: noncat.to_vec(),
            span: None,
        });
    }
    let n = rows.len();
    o.data.extend(rows);
    Ok(n)
}
