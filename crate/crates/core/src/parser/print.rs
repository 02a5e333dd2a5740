use std::fmt::{self, Write};

use crate::instance::{is_number, write_quoted, Value};
use crate::query::ConjunctiveQuery;
use crate::schema::{Atom, DimensionalEgd, DimensionalTgd, NegativeConstraint, Ontology, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) if is_number(c) => f.write_str(c),
            Term::Const(c) => write_quoted(f, c),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        match self.split {
            None => write_list(f, &self.args, ", ")?,
            Some(k) => {
                let k = k.min(self.args.len());
                write_list(f, &self.args[..k], ", ")?;
                f.write_str(if k == 0 { ";" } else { "; " })?;
                write_list(f, &self.args[k..], ", ")?;
            }
        }
        f.write_str(")")
    }
}

fn write_list<T: fmt::Display>(f: &mut impl Write, items: &[T], sep: &str) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for DimensionalTgd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tgd {}: ", self.id)?;
        write_list(f, &self.body, ", ")?;
        f.write_str(" -> ")?;
        if !self.existential.is_empty() {
            f.write_str("exists ")?;
            write_list(f, &self.existential, ", ")?;
            f.write_str(": ")?;
        }
        write!(f, "{}.", self.head)
    }
}

impl fmt::Display for DimensionalEgd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "egd {}: ", self.id)?;
        write_list(f, &self.body, ", ")?;
        write!(f, " -> {} = {}.", self.lhs, self.rhs)
    }
}

impl fmt::Display for NegativeConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nc {}: ", self.id)?;
        write_list(f, &self.body, ", ")?;
        if let Some(neg) = &self.negated {
            if !self.body.is_empty() {
                f.write_str(", ")?;
            }
            write!(f, "not {}({})", neg.category, neg.var)?;
        }
        f.write_str(" -> bottom.")
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "query {}(", self.name)?;
        write_list(f, &self.answer_vars, ", ")?;
        f.write_str("): ")?;
        if !self.existential.is_empty() {
            f.write_str("exists ")?;
            write_list(f, &self.existential, ", ")?;
            f.write_str(": ")?;
        }
        if self.body.is_empty() {
            f.write_str("true")?;
        } else {
            write_list(f, &self.body, ", ")?;
        }
        f.write_str(".")
    }
}

/// Renders an ontology in the concrete syntax, sections in a fixed order and
/// declaration order within each section. Parsing the result gives back an
/// ontology equal to `o` up to source spans.
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut out = String::from("-- OMD ontology\n");
    // Writing into a String cannot fail.
    let _ = write_sections(&mut out, o);
    out
}

fn write_sections(out: &mut String, o: &Ontology) -> fmt::Result {
    for d in &o.dimensions {
        writeln!(out, "\ndimension {} {{", d.name)?;
        for c in &d.categories {
            writeln!(out, "  category {};", c.name)?;
        }
        for r in &d.rollups {
            writeln!(out, "  rollup {}: {} -> {};", r.name, r.child, r.parent)?;
        }
        writeln!(out, "}}")?;
    }

    if !o.relations.is_empty() {
        out.push('\n');
    }
    for r in &o.relations {
        write!(out, "relation {}(", r.name)?;
        let cats: Vec<String> = r
            .categorical
            .iter()
            .map(|a| format!("cat {} {}", a.category, a.name))
            .collect();
        write_list(out, &cats, ", ")?;
        out.push_str(if cats.is_empty() { ";" } else { "; " });
        write_list(out, &r.noncategorical, ", ")?;
        writeln!(out, ");")?;
    }

    if !o.members.is_empty() {
        out.push('\n');
    }
    for m in &o.members {
        writeln!(out, "member {} {};", m.category, Value::constant(&m.value))?;
    }

    if !o.edges.is_empty() {
        out.push('\n');
    }
    for e in &o.edges {
        writeln!(
            out,
            "edge {}({}, {});",
            e.predicate,
            Value::constant(&e.child),
            Value::constant(&e.parent)
        )?;
    }

    if !o.data.is_empty() {
        out.push('\n');
    }
    for d in &o.data {
        write!(out, "data {}(", d.relation)?;
        write_list(out, &d.categorical, ", ")?;
        out.push_str(if d.categorical.is_empty() { ";" } else { "; " });
        write_list(out, &d.noncategorical, ", ")?;
        writeln!(out, ");")?;
    }

    let rules: Vec<String> = o
        .tgds
        .iter()
        .map(ToString::to_string)
        .chain(o.egds.iter().map(ToString::to_string))
        .chain(o.ncs.iter().map(ToString::to_string))
        .collect();
    if !rules.is_empty() {
        out.push('\n');
    }
    for r in rules {
        writeln!(out, "{r}")?;
    }

    if !o.queries.is_empty() {
        out.push('\n');
    }
    for q in &o.queries {
        writeln!(out, "{q}")?;
    }
    Ok(())
}
