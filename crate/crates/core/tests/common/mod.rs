//! Random inputs and property checks shared by the property tests and the
//! acceptance harness.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use omd_core::oracle::{self, OracleConfig};
use omd_core::schema::{category_levels, generate_basic_constraints, validate_schema};
use omd_core::{
    certain_answers, chase, dominates, find_homomorphisms, parse_ontology, serialize_ontology,
    AnswerSet, Atom, Binding, ChaseConfig, Database, DimensionInstance, DimensionSchema,
    MDInstance, Ontology, Term, Tuple, Value,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, FileFailurePersistence, RngSeed, TestCaseError, TestRunner};

pub const CASES: u32 = 1000;
pub const SEED: u64 = 0x0bd5_1a7e;

/// Runner with a fixed seed and no failure persistence, so every run sees
/// the same cases.
pub fn runner() -> TestRunner {
    let config = Config {
        cases: CASES,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..Config::default()
    };
    TestRunner::new(config)
}

/// Runs `check` on `CASES` inputs drawn from `strategy`.
pub fn run<S: Strategy>(
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner().run(&strategy, check).map_err(|e| e.to_string())
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

// ---------------------------------------------------------------------------
// Arbitrary syntax, for the printer round trip.

/// A constant as written in source: bare word, number or quoted string.
fn source_constant() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z][a-z0-9_']{0,5}",
        "-?[0-9]{1,3}(\\.[0-9]{1,2})?",
        "[ -~]{0,6}".prop_map(|s| quote(&s)),
        "[a-z]{1,3}[\\t\\n][a-z]{0,2}".prop_map(|s| quote(&s)),
    ]
}

fn source_value() -> impl Strategy<Value = String> {
    prop_oneof![
        4 => source_constant(),
        1 => (0u64..50).prop_map(|n| format!("_:n{n}")),
    ]
}

fn source_term() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => prop::sample::select(vec!["x", "y", "z", "w1", "v'"]).prop_map(String::from),
        1 => source_constant().prop_map(|c| {
            if c.starts_with('"') || c.starts_with(|d: char| d.is_ascii_digit() || d == '-') {
                c
            } else {
                quote(&c)
            }
        }),
    ]
}

fn source_atom(predicates: Vec<String>) -> impl Strategy<Value = String> {
    (
        prop::sample::select(predicates),
        prop::collection::vec(source_term(), 0..3),
        prop::option::of(prop::collection::vec(source_term(), 0..3)),
    )
        .prop_map(|(p, cat, noncat)| match noncat {
            None => format!("{p}({})", cat.join(", ")),
            Some(n) => format!("{p}({}; {})", cat.join(", "), n.join(", ")),
        })
}

fn source_body(predicates: Vec<String>) -> impl Strategy<Value = String> {
    prop::collection::vec(source_atom(predicates), 1..4).prop_map(|a| a.join(", "))
}

/// Text of a syntactically valid ontology with no regard for well-formedness
/// (arities and names need not match the declarations).
pub fn ontology_source() -> impl Strategy<Value = String> {
    let preds: Vec<String> = ["R", "S", "Rollup", "Cat", "T2"].map(String::from).to_vec();
    let dims = prop::collection::vec(
        (
            prop::collection::vec("[A-Z][a-z]{0,3}", 0..4),
            prop::collection::vec(("[A-Z][a-z]{0,3}", "[A-Z][a-z]{0,3}"), 0..3),
        ),
        0..3,
    );
    let relations = prop::collection::vec(
        (
            prop::collection::vec(("[A-Z][a-z]{0,3}", "[a-z]{1,4}"), 0..3),
            prop::collection::vec("[a-z]{1,4}", 0..3),
        ),
        0..3,
    );
    let members = prop::collection::vec(("[A-Z][a-z]{0,3}", source_constant()), 0..4);
    let edges = prop::collection::vec(
        ("[A-Z][a-z]{0,3}", source_constant(), source_constant()),
        0..3,
    );
    let data = prop::collection::vec(
        (
            prop::sample::select(preds.clone()),
            prop::collection::vec(source_value(), 0..3),
            prop::collection::vec(source_value(), 0..3),
        ),
        0..4,
    );
    let tgds = prop::collection::vec(
        (
            source_body(preds.clone()),
            prop::collection::vec(prop::sample::select(vec!["t", "u", "x"]), 0..2),
            source_atom(preds.clone()),
        ),
        0..3,
    );
    let egds = prop::collection::vec(
        (
            source_body(preds.clone()),
            prop::sample::select(vec!["x", "y"]),
            prop::sample::select(vec!["z", "x"]),
        ),
        0..2,
    );
    let ncs = prop::collection::vec(
        (
            source_body(preds.clone()),
            prop::option::of("[A-Z][a-z]{0,3}"),
        ),
        0..2,
    );
    let queries = prop::collection::vec(
        (
            prop::collection::vec(prop::sample::select(vec!["x", "y", "z"]), 0..3),
            prop::collection::vec(prop::sample::select(vec!["w1", "v'"]), 0..2),
            prop::option::of(source_body(preds)),
        ),
        0..3,
    );
    (
        dims,
        relations,
        members,
        edges,
        data,
        (tgds, egds, ncs, queries),
    )
        .prop_map(
            |(dims, relations, members, edges, data, (tgds, egds, ncs, queries))| {
                let mut s = String::new();
                for (i, (cats, rollups)) in dims.iter().enumerate() {
                    let _ = write!(s, "dimension D{i} {{ ");
                    for (k, c) in cats.iter().enumerate() {
                        let _ = write!(s, "category {c}_{i}_{k}; ");
                    }
                    for (j, (a, b)) in rollups.iter().enumerate() {
                        let _ = write!(s, "rollup Up{i}x{j}: {a} -> {b}; ");
                    }
                    s.push_str("}\n");
                }
                for (i, (cats, noncats)) in relations.iter().enumerate() {
                    let cats: Vec<String> =
                        cats.iter().map(|(c, a)| format!("cat {c} {a}")).collect();
                    let _ = writeln!(
                        s,
                        "relation Rel{i}({}; {});",
                        cats.join(", "),
                        noncats.join(", ")
                    );
                }
                for (c, v) in &members {
                    let _ = writeln!(s, "member {c} {v};");
                }
                for (p, a, b) in &edges {
                    let _ = writeln!(s, "edge {p}({a}, {b});");
                }
                for (p, c, n) in &data {
                    let _ = writeln!(s, "data {p}({}; {});", c.join(", "), n.join(", "));
                }
                for (i, (body, ex, head)) in tgds.iter().enumerate() {
                    let ex: BTreeSet<&str> = ex.iter().copied().collect();
                    let ex: Vec<&str> = ex.into_iter().collect();
                    let ex = if ex.is_empty() {
                        String::new()
                    } else {
                        format!("exists {}: ", ex.join(", "))
                    };
                    let _ = writeln!(s, "tgd t{i}: {body} -> {ex}{head}.");
                }
                for (i, (body, a, b)) in egds.iter().enumerate() {
                    let _ = writeln!(s, "egd e{i}: {body} -> {a} = {b}.");
                }
                for (i, (body, neg)) in ncs.iter().enumerate() {
                    let neg = neg
                        .as_ref()
                        .map(|c| format!(", not {c}(x)"))
                        .unwrap_or_default();
                    let _ = writeln!(s, "nc n{i}: {body}{neg} -> bottom.");
                }
                for (i, (vars, ex, body)) in queries.iter().enumerate() {
                    let ex: BTreeSet<&str> = ex.iter().copied().collect();
                    let ex: Vec<&str> = ex.into_iter().collect();
                    let ex = if ex.is_empty() {
                        String::new()
                    } else {
                        format!("exists {}: ", ex.join(", "))
                    };
                    let body = body.clone().unwrap_or_else(|| "true".into());
                    let _ = writeln!(s, "query Q{i}({}): {ex}{body}.", vars.join(", "));
                }
                s
            },
        )
}

/// Printing and re-parsing gives the same ontology, and printing is stable.
pub fn check_round_trip(src: String) -> Result<(), TestCaseError> {
    let mut a =
        parse_ontology(&src, "gen.omd").map_err(|e| TestCaseError::fail(format!("{e}\n{src}")))?;
    let text = serialize_ontology(&a);
    let mut b = parse_ontology(&text, "printed.omd")
        .map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(serialize_ontology(&b), text.clone());
    a.erase_spans();
    b.erase_spans();
    prop_assert_eq!(a, b, "{}", text);
    Ok(())
}

// ---------------------------------------------------------------------------
// Tuples, for domination.

fn small_value() -> impl Strategy<Value = Value> {
    prop_oneof![
        3 => prop::sample::select(vec!["a", "b", "c"]).prop_map(Value::constant),
        2 => (1u64..4).prop_map(Value::null),
    ]
}

fn tuple_of(len: usize) -> impl Strategy<Value = Tuple> {
    prop::collection::vec(small_value(), len).prop_map(|vals| {
        let (cat, noncat) = vals.split_at(1);
        Tuple::new("R", cat.to_vec(), noncat.to_vec())
    })
}

/// Generalizes a tuple: each distinct value is kept or replaced by one fresh
/// null, so the original dominates the result.
fn generalize(t: &Tuple, mask: &[bool], base: u64) -> Tuple {
    let mut map: BTreeMap<&Value, Value> = BTreeMap::new();
    let mut next = base;
    let vals: Vec<Value> = t
        .values()
        .zip(mask)
        .map(|(v, &m)| {
            if !m {
                return v.clone();
            }
            map.entry(v)
                .or_insert_with(|| {
                    next += 1;
                    Value::null(next)
                })
                .clone()
        })
        .collect();
    let (cat, noncat) = vals.split_at(t.cat.len());
    Tuple::new(t.predicate.clone(), cat.to_vec(), noncat.to_vec())
}

/// Three tuples, either independent or each a generalization of the
/// previous one.
pub fn tuple_triples() -> impl Strategy<Value = (Tuple, Tuple, Tuple)> {
    (2usize..5).prop_flat_map(|len| {
        let independent = (tuple_of(len), tuple_of(len), tuple_of(len));
        let chained = (
            tuple_of(len),
            prop::collection::vec(any::<bool>(), len),
            prop::collection::vec(any::<bool>(), len),
        )
            .prop_map(|(t, m1, m2)| {
                let u = generalize(&t, &m1, 10);
                let w = generalize(&u, &m2, 20);
                (t, u, w)
            });
        prop_oneof![independent, chained]
    })
}

/// Domination by trying every assignment of `t2`'s nulls to values.
fn dominates_by_search(t1: &Tuple, t2: &Tuple) -> bool {
    if t1.predicate != t2.predicate
        || t1.cat.len() != t2.cat.len()
        || t1.noncat.len() != t2.noncat.len()
    {
        return false;
    }
    let nulls: Vec<Value> = t2
        .values()
        .filter(|v| v.is_null())
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pool: Vec<Value> = t1.values().cloned().collect();
    let total = pool.len().pow(nulls.len() as u32);
    (0..total).any(|mut code| {
        let mut map = BTreeMap::new();
        for n in &nulls {
            map.insert(n.clone(), pool[code % pool.len()].clone());
            code /= pool.len();
        }
        t2.values()
            .zip(t1.values())
            .all(|(v2, v1)| map.get(v2).unwrap_or(v2) == v1)
    })
}

/// `dominates` is reflexive and transitive and agrees with exhaustive search.
pub fn check_dominates((a, b, c): (Tuple, Tuple, Tuple)) -> Result<(), TestCaseError> {
    for t in [&a, &b, &c] {
        prop_assert!(dominates(t, t));
    }
    for (x, y) in [(&a, &b), (&b, &a), (&b, &c), (&c, &b), (&a, &c), (&c, &a)] {
        prop_assert_eq!(dominates(x, y), dominates_by_search(x, y), "{} vs {}", x, y);
    }
    if dominates(&a, &b) && dominates(&b, &c) {
        prop_assert!(dominates(&a, &c));
    }
    if dominates(&c, &b) && dominates(&b, &a) {
        prop_assert!(dominates(&c, &a));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Small instances and queries, for homomorphism search.

#[derive(Clone, Debug)]
pub struct SmallDb {
    pub members: Vec<(&'static str, &'static str)>,
    pub edges: Vec<(&'static str, &'static str)>,
    pub facts: Vec<Tuple>,
}

impl SmallDb {
    pub fn build(&self) -> (DimensionInstance, MDInstance) {
        let mut d = DimensionInstance::new();
        d.declare_category("A");
        d.declare_category("B");
        d.declare_rollup("AB");
        for (c, m) in &self.members {
            d.add_member(c, m);
        }
        for (a, b) in &self.edges {
            d.add_edge("AB", a, b);
        }
        let mut m = MDInstance::new();
        m.declare("R", 1, 1);
        m.declare("S", 0, 2);
        m.declare("T", 2, 0);
        for t in &self.facts {
            m.insert(t.clone())
                .expect("generated fact fits its relation");
        }
        (d, m)
    }
}

fn noncat_value() -> impl Strategy<Value = Value> {
    prop_oneof![
        3 => prop::sample::select(vec!["u", "v", "a1"]).prop_map(Value::constant),
        2 => (1u64..4).prop_map(Value::null),
    ]
}

fn small_fact() -> impl Strategy<Value = Tuple> {
    let a = || prop::sample::select(vec!["a1", "a2", "a3"]).prop_map(Value::constant);
    let b = || prop::sample::select(vec!["b1", "b2"]).prop_map(Value::constant);
    prop_oneof![
        (a(), noncat_value()).prop_map(|(x, y)| Tuple::new("R", vec![x], vec![y])),
        (noncat_value(), noncat_value()).prop_map(|(x, y)| Tuple::new("S", vec![], vec![x, y])),
        (a(), b()).prop_map(|(x, y)| Tuple::new("T", vec![x, y], vec![])),
    ]
}

/// Instances with at most 20 tuples in total, dimension facts included.
pub fn small_db() -> impl Strategy<Value = SmallDb> {
    (
        prop::sample::subsequence(
            vec![
                ("A", "a1"),
                ("A", "a2"),
                ("A", "a3"),
                ("B", "b1"),
                ("B", "b2"),
            ],
            0..=5,
        ),
        prop::sample::subsequence(
            vec![("a1", "b1"), ("a2", "b1"), ("a3", "b2"), ("a1", "b2")],
            0..=4,
        ),
        prop::collection::vec(small_fact(), 0..12),
    )
        .prop_map(|(members, edges, facts)| SmallDb {
            members,
            edges,
            facts,
        })
}

fn query_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        1 => prop::sample::select(vec!["a1", "b1", "u"]).prop_map(Term::constant),
    ]
}

fn query_atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        (query_term(), query_term()).prop_map(|(x, y)| Atom::relational("R", vec![x], vec![y])),
        (query_term(), query_term()).prop_map(|(x, y)| Atom::relational("S", vec![], vec![x, y])),
        (query_term(), query_term()).prop_map(|(x, y)| Atom::relational("T", vec![x, y], vec![])),
        (query_term(), query_term()).prop_map(|(x, y)| Atom::new("AB", vec![x, y])),
        query_term().prop_map(|x| Atom::new("A", vec![x])),
    ]
}

pub fn small_query() -> impl Strategy<Value = Vec<Atom>> {
    prop::collection::vec(query_atom(), 0..4)
}

/// The indexed matcher finds exactly the bindings exhaustive search finds.
pub fn check_homomorphisms((db, body): (SmallDb, Vec<Atom>)) -> Result<(), TestCaseError> {
    let (d, m) = db.build();
    prop_assert!(d.len() + m.len() <= 20);
    let fast: Vec<Binding> = find_homomorphisms(&body, Database::new(&d, &m)).collect();
    let fast_set: BTreeSet<Binding> = fast.iter().cloned().collect();
    prop_assert_eq!(fast.len(), fast_set.len(), "duplicate bindings");
    let slow: BTreeSet<Binding> = oracle::brute_force_homomorphisms(&body, &d, &m)
        .map_err(|e| TestCaseError::fail(e.to_string()))?
        .into_iter()
        .collect();
    prop_assert_eq!(fast_set, slow);
    Ok(())
}

// ---------------------------------------------------------------------------
// Random ontologies over a geography dimension, for chase properties.

const GEO_SCHEMA: &str = r#"
dimension Geo {
  category City;
  category Region;
  category Country;
  rollup CityRegion: City -> Region;
  rollup RegionCountry: Region -> Country;
}
relation Visit(cat City city; person, purpose);
relation Stay(cat Region region; person, purpose);
relation Home(cat Country country; person);
relation Tag(; person, label);
member City c1; member City c2; member City c3; member City c4;
member Region r1; member Region r2; member Region r3;
member Country k1; member Country k2;
"#;

const GEO_TGDS: [&str; 7] = [
    "tgd up_visit: Visit(c; p, u), CityRegion(c, r) -> exists z: Stay(r; p, z).",
    "tgd up_stay: Stay(r; p, u), RegionCountry(r, k) -> Home(k; p).",
    "tgd down_home: Home(k; p), RegionCountry(r, k) -> exists z: Stay(r; p, z).",
    "tgd down_stay: Stay(r; p, u), CityRegion(c, r) -> Visit(c; p, u).",
    "tgd tag_visit: Visit(c; p, u) -> Tag(; p, u).",
    "tgd tag_home: Home(k; p) -> exists l: Tag(; p, l).",
    "tgd up_twice: Visit(c; p, u), CityRegion(c, r), RegionCountry(r, k) -> Home(k; p).",
];

const GEO_EGDS: [&str; 3] = [
    "egd one_purpose: Stay(r; p, u), Stay(r; p2, u2) -> u = u2.",
    "egd visit_like_stay: Visit(c; p, u), Stay(r; p2, u2), CityRegion(c, r) -> u = u2.",
    "egd one_label: Tag(; p, l), Tag(; p2, l2) -> l = l2.",
];

const GEO_NCS: [&str; 2] = [
    r#"nc no_fun_in_k2: Visit(c; p, "fun"), CityRegion(c, r), RegionCountry(r, "k2") -> bottom."#,
    r#"nc no_work_tag: Tag(; p, "work") -> bottom."#,
];

const GEO_QUERIES: &str = r#"
query Homes(k, p): Home(k; p).
query StayPurpose(r, u): exists p: Stay(r; p, u).
query Purposes(p, u): exists c: Visit(c; p, u).
query Tags(p, l): Tag(; p, l).
query AnyStay(): exists r, p, u: Stay(r; p, u).
query Countries(c, k): exists p, u, r: Visit(c; p, u), CityRegion(c, r), RegionCountry(r, k).
"#;

#[derive(Clone, Debug)]
pub struct Scenario {
    pub text: String,
}

impl Scenario {
    pub fn ontology(&self) -> Ontology {
        parse_ontology(&self.text, "scenario.omd").expect("scenario parses")
    }
}

fn geo_fact() -> impl Strategy<Value = String> {
    let city = || prop::sample::select(vec!["c1", "c2", "c3", "c4"]);
    let person = || prop::sample::select(vec!["ann", "bob", "cy"]);
    let purpose = || prop::sample::select(vec!["work", "fun", "1"]);
    prop_oneof![
        12 => (city(), person(), purpose()).prop_map(|(c, p, u)| format!("data Visit({c}; {p}, {u});")),
        6 => (prop::sample::select(vec!["r1", "r2", "r3"]), person(), purpose())
            .prop_map(|(r, p, u)| format!("data Stay({r}; {p}, {u});")),
        3 => (prop::sample::select(vec!["k1", "k2"]), person()).prop_map(|(k, p)| format!("data Home({k}; {p});")),
        3 => (person(), purpose()).prop_map(|(p, u)| format!("data Tag(; {p}, {u});")),
        // Not a member of City, so a basic constraint fails.
        1 => (person(), purpose()).prop_map(|(p, u)| format!("data Visit(c9; {p}, {u});")),
    ]
}

fn shuffled<T: Clone + std::fmt::Debug>(items: Vec<T>) -> impl Strategy<Value = Vec<T>> {
    Just(items).prop_shuffle()
}

/// A well-formed ontology: the geography schema, random roll-up edges and
/// data, a random subset of terminating rules, EGDs and NCs, and fixed
/// queries.
pub fn scenario() -> impl Strategy<Value = Scenario> {
    // Roll-ups must be functional, or the key EGDs fail.
    let city_edges = prop::collection::vec(
        prop::option::weighted(0.8, prop::sample::select(vec!["r1", "r2", "r3"])),
        4,
    );
    let region_edges = prop::collection::vec(
        prop::option::weighted(0.8, prop::sample::select(vec!["k1", "k2"])),
        3,
    );
    (
        city_edges,
        region_edges,
        prop::collection::vec(geo_fact(), 0..8),
        prop::sample::subsequence(GEO_TGDS.to_vec(), 0..=GEO_TGDS.len()),
        prop::sample::subsequence(GEO_EGDS.to_vec(), 0..=1),
        prop::sample::subsequence(GEO_NCS.to_vec(), 0..=2),
    )
        .prop_map(|(ce, re, facts, tgds, egds, ncs)| {
            let mut s = String::from(GEO_SCHEMA);
            for (i, r) in ce.iter().enumerate() {
                if let Some(r) = r {
                    let _ = writeln!(s, "edge CityRegion(c{}, {r});", i + 1);
                }
            }
            for (i, k) in re.iter().enumerate() {
                if let Some(k) = k {
                    let _ = writeln!(s, "edge RegionCountry(r{}, {k});", i + 1);
                }
            }
            for f in facts {
                s.push_str(&f);
                s.push('\n');
            }
            for r in tgds.iter().chain(&egds).chain(&ncs) {
                s.push_str(r);
                s.push('\n');
            }
            s.push_str(GEO_QUERIES);
            Scenario { text: s }
        })
}

/// A scenario together with a reordering of its rules and data.
pub fn permuted_scenario() -> impl Strategy<Value = (Scenario, Scenario)> {
    scenario().prop_flat_map(|sc| {
        let lines: Vec<String> = sc.text.lines().map(String::from).collect();
        let (movable, fixed): (Vec<String>, Vec<String>) = lines.into_iter().partition(|l| {
            ["data ", "tgd ", "egd ", "nc "]
                .iter()
                .any(|k| l.starts_with(k))
        });
        (Just(sc), Just(fixed), shuffled(movable)).prop_map(|(sc, fixed, moved)| {
            let mut text = fixed.join("\n");
            text.push('\n');
            text.push_str(&moved.join("\n"));
            text.push('\n');
            (sc, Scenario { text })
        })
    })
}

/// Reordering rules and data changes neither the verdict nor, for a
/// consistent result, the chased instance up to domination.
pub fn check_permutation((a, b): (Scenario, Scenario)) -> Result<(), TestCaseError> {
    let (oa, ob) = (a.ontology(), b.ontology());
    let ra = chase(&oa, &ChaseConfig::default()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let rb = chase(&ob, &ChaseConfig::default()).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(!matches!(
        ra.verdict,
        omd_core::Verdict::StepBudgetExhausted
    ));
    prop_assert_eq!(ra.verdict.is_consistent(), rb.verdict.is_consistent());
    prop_assert_eq!(ra.verdict.is_inconsistent(), rb.verdict.is_inconsistent());
    if ra.verdict.is_consistent() {
        prop_assert!(
            oracle::domination_equivalent(&ra.instance, &rb.instance),
            "{}\n---\n{}",
            ra.instance.export(),
            rb.instance.export()
        );
    }
    Ok(())
}

/// Certain answers from the engine agree with the naive-chase oracle on
/// every query, and both agree on consistency.
pub fn check_oracle_answers(sc: Scenario) -> Result<(), TestCaseError> {
    let o = sc.ontology();
    compare_with_oracle(&o).map_err(TestCaseError::fail)
}

/// Engine against oracle on one ontology: verdict kind, instance up to
/// domination, and certain answers of each declared query.
pub fn compare_with_oracle(o: &Ontology) -> Result<(), String> {
    let engine = chase(o, &ChaseConfig::default()).map_err(|e| e.to_string())?;
    let naive = oracle::naive_chase(o, &OracleConfig::default()).map_err(|e| e.to_string())?;
    if engine.verdict.is_consistent() != naive.verdict.is_consistent() {
        return Err(format!(
            "verdicts differ: {} vs {}",
            engine.verdict, naive.verdict
        ));
    }
    if !engine.verdict.is_consistent() {
        return Ok(());
    }
    if !oracle::domination_equivalent(&engine.instance, &naive.instance) {
        return Err(format!(
            "instances differ:\n{}---\n{}",
            engine.instance.export(),
            naive.instance.export()
        ));
    }
    for q in &o.queries {
        let fast = certain_answers(q, &engine).map_err(|e| e.to_string())?;
        let slow = oracle::brute_force_answers(q, &naive.dimensions, &naive.instance)
            .map_err(|e| e.to_string())?
            .null_free();
        if fast.rows != slow.rows {
            return Err(format!(
                "query {}: {:?} vs {:?}",
                q.name,
                fast.raw_rows(),
                slow.raw_rows()
            ));
        }
    }
    Ok(())
}

/// Answers over the extensional data are kept after chasing.
pub fn check_monotone(o: &Ontology) -> Result<(), String> {
    let result = chase(o, &ChaseConfig::default()).map_err(|e| e.to_string())?;
    if !result.verdict.is_consistent() {
        return Ok(());
    }
    let dims = o.dimension_instance();
    let data = o.extensional_instance().map_err(|e| e.to_string())?;
    for q in &o.queries {
        let before = omd_core::evaluate_cq(q, Database::new(&dims, &data))
            .map_err(|e| e.to_string())?
            .null_free();
        let after: AnswerSet = certain_answers(q, &result).map_err(|e| e.to_string())?;
        if !before.rows.is_subset(&after.rows) {
            return Err(format!("query {} lost answers", q.name));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Dimension schemas, for levels and basic constraints.

/// A dimension whose roll-ups only go from lower to higher category index,
/// so it is acyclic.
pub fn dag_dimension() -> impl Strategy<Value = DimensionSchema> {
    (1usize..7).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let len = pairs.len();
        (Just(n), prop::sample::subsequence(pairs, 0..=len)).prop_map(|(n, edges)| {
            let mut d = DimensionSchema::new("D");
            for i in 0..n {
                d = d.with_category(format!("C{i}"));
            }
            for (i, j) in edges {
                d = d.with_rollup(format!("C{i}C{j}"), format!("C{i}"), format!("C{j}"));
            }
            d
        })
    })
}

/// Base categories sit at level 0, every roll-up climbs at least one level,
/// and every other category is exactly one above some child.
pub fn check_levels(d: DimensionSchema) -> Result<(), TestCaseError> {
    let levels = category_levels(&d);
    prop_assert_eq!(levels.len(), d.categories.len());
    for c in d.base_categories() {
        prop_assert_eq!(levels[&c.name], 0);
    }
    for r in &d.rollups {
        prop_assert!(levels[&r.parent] > levels[&r.child]);
    }
    for c in &d.categories {
        let children: Vec<usize> = d
            .rollups
            .iter()
            .filter(|r| r.parent == c.name)
            .map(|r| levels[&r.child])
            .collect();
        if !children.is_empty() {
            prop_assert_eq!(levels[&c.name], children.iter().max().unwrap() + 1);
        }
    }
    Ok(())
}

/// An ontology with random dimensions and relations over their categories.
pub fn random_schema() -> impl Strategy<Value = Ontology> {
    (
        prop::collection::vec(dag_dimension(), 1..3),
        prop::collection::vec((0usize..4, 0usize..3), 0..4),
    )
        .prop_map(|(dims, rels)| {
            let mut o = Ontology::default();
            for (k, d) in dims.into_iter().enumerate() {
                let mut renamed = DimensionSchema::new(format!("D{k}"));
                for c in &d.categories {
                    renamed = renamed.with_category(format!("D{k}{}", c.name));
                }
                for r in &d.rollups {
                    renamed = renamed.with_rollup(
                        format!("D{k}{}", r.name),
                        format!("D{k}{}", r.child),
                        format!("D{k}{}", r.parent),
                    );
                }
                o.dimensions.push(renamed);
            }
            let cats: Vec<String> = o
                .dimensions
                .iter()
                .flat_map(|d| d.categories.iter().map(|c| c.name.clone()))
                .collect();
            for (i, (m, n)) in rels.into_iter().enumerate() {
                let n = n.max(usize::from(m == 0));
                let mut r = omd_core::CategoricalPredicateSchema::new(format!("Rel{i}"));
                for j in 0..m {
                    r = r.with_categorical(format!("a{j}"), cats[(i + j) % cats.len()].clone());
                }
                for j in 0..n {
                    r = r.with_noncategorical(format!("b{j}"));
                }
                o.relations.push(r);
            }
            o
        })
}

/// Two NCs and one key EGD per roll-up, one NC per categorical attribute,
/// the same output twice, and every generated constraint well-formed.
pub fn check_basic_constraints(o: Ontology) -> Result<(), TestCaseError> {
    let rollups: usize = o.dimensions.iter().map(|d| d.rollups.len()).sum();
    let attrs: usize = o.relations.iter().map(|r| r.categorical.len()).sum();
    let basic = generate_basic_constraints(&o);
    prop_assert_eq!(basic.ncs.len(), 2 * rollups + attrs);
    prop_assert_eq!(basic.egds.len(), rollups);
    prop_assert_eq!(&basic, &generate_basic_constraints(&o));
    prop_assert!(validate_schema(&o).is_ok());
    Ok(())
}
