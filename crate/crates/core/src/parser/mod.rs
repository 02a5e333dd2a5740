//! Concrete syntax for ontologies.
//!
//! ```text
//! dimension Hospital { category Ward; category Unit; rollup WardUnit: Ward -> Unit; }
//! member Ward W1;
//! edge WardUnit(W1, standard);
//! relation Shifts(cat Ward ward, cat Day day; nurse, shift);
//! data Shifts(W1, "sep/6/2016"; helen, morning);
//! tgd s1: Shifts(w, d; n, s), WardUnit(w, u) -> exists t: WorkingSchedules(u, d; n, t).
//! egd key: Therm(w, t; n), Therm(w2, t2; n2), WardUnit(w, u), WardUnit(w2, u) -> t = t2.
//! nc eta: WorkingSchedules("intensive", d; n, s), DayMonth(d, "jan") -> bottom.
//! query Q(w): exists s: Shifts(w, "sep/6/2016"; "helen", s).
//! ```
//!
//! In rules and queries bare identifiers are variables and constants are
//! quoted (numbers may stay bare). In `member`, `edge` and `data`
//! declarations bare identifiers are constants. `--` starts a comment.

mod lexer;
mod print;

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use lexer::{tokenize, Tok, Token};
pub use print::serialize_ontology;

use crate::instance::Value;
use crate::query::ConjunctiveQuery;
use crate::schema::{
    Atom, CategoricalAttribute, CategoricalPredicateSchema, Category, ChildParentPredicate,
    DataDecl, DimensionSchema, DimensionalEgd, DimensionalTgd, EdgeDecl, MemberDecl,
    NegatedCategory, NegativeConstraint, Ontology, Term, TgdKind,
};
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{span}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        span: SourceSpan,
        expected: Vec<String>,
        found: String,
    },
    #[error("{span}: duplicate declaration of {kind} `{name}`")]
    DuplicateDeclaration {
        span: SourceSpan,
        kind: &'static str,
        name: String,
    },
}

impl ParseError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            ParseError::Syntax { span, .. } | ParseError::DuplicateDeclaration { span, .. } => span,
        }
    }
}

/// Parses a whole ontology. Every element carries the span it was read from.
pub fn parse_ontology(text: &str, origin: impl AsRef<Path>) -> Result<Ontology, ParseError> {
    let file: Arc<Path> = Arc::from(origin.as_ref());
    let tokens = tokenize(text, &file)?;
    Parser::new(tokens).ontology()
}

/// Parses a single `query` declaration.
pub fn parse_query(text: &str, origin: impl AsRef<Path>) -> Result<ConjunctiveQuery, ParseError> {
    let file: Arc<Path> = Arc::from(origin.as_ref());
    let tokens = tokenize(text, &file)?;
    let mut p = Parser::new(tokens);
    let start = p.expect_keyword("query")?;
    let q = p.query(start)?;
    p.expect(Tok::Eof)?;
    Ok(q)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

struct Literal {
    atom: Atom,
    negated: bool,
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if *self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            self.error(&[&tok.describe()])
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<SourceSpan, ParseError> {
        if self.is_keyword(kw) {
            Ok(self.bump().span)
        } else {
            self.error(&[&format!("`{kw}`")])
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump().span)),
            _ => self.error(&[what]),
        }
    }

    /// Span from `start` to the end of the previous token (same line only;
    /// multi-line constructs are clipped to their first line).
    fn since(&self, start: &SourceSpan) -> SourceSpan {
        let end = self.prev_span();
        let length = if end.line == start.line {
            end.column + end.length - start.column
        } else {
            start.length
        };
        SourceSpan::new(start.file.clone(), start.line, start.column, length)
    }

    fn ontology(mut self) -> Result<Ontology, ParseError> {
        let mut o = Ontology::default();
        let mut dims = HashSet::new();
        let mut preds = HashSet::new();
        let mut rules = HashSet::new();
        let mut queries = HashSet::new();
        let dup = |set: &mut HashSet<String>, name: &str, kind: &'static str, span: &SourceSpan| {
            if set.insert(name.to_string()) {
                Ok(())
            } else {
                Err(ParseError::DuplicateDeclaration {
                    span: span.clone(),
                    kind,
                    name: name.to_string(),
                })
            }
        };

        loop {
            let start = self.span();
            let kw = match self.peek() {
                Tok::Eof => break,
                Tok::Ident(s) => s.clone(),
                _ => return self.error(&["declaration"]),
            };
            match kw.as_str() {
                "dimension" => {
                    self.bump();
                    let (name, name_span) = self.ident("dimension name")?;
                    dup(&mut dims, &name, "dimension", &name_span)?;
                    let mut dim = DimensionSchema::new(name.clone());
                    self.expect(Tok::LBrace)?;
                    while !self.eat(Tok::RBrace) {
                        let item = self.span();
                        if self.is_keyword("category") {
                            self.bump();
                            let (c, cs) = self.ident("category name")?;
                            dup(&mut preds, &c, "predicate", &cs)?;
                            self.expect(Tok::Semi)?;
                            dim.categories.push(Category {
                                name: c,
                                dimension: name.clone(),
                                span: Some(self.since(&item)),
                            });
                        } else if self.is_keyword("rollup") {
                            self.bump();
                            let (p, ps) = self.ident("roll-up name")?;
                            dup(&mut preds, &p, "predicate", &ps)?;
                            self.expect(Tok::Colon)?;
                            let (child, _) = self.ident("child category")?;
                            self.expect(Tok::Arrow)?;
                            let (parent, _) = self.ident("parent category")?;
                            self.expect(Tok::Semi)?;
                            dim.rollups.push(ChildParentPredicate {
                                name: p,
                                dimension: name.clone(),
                                child,
                                parent,
                                span: Some(self.since(&item)),
                            });
                        } else {
                            return self.error(&["`category`", "`rollup`", "`}`"]);
                        }
                    }
                    dim.span = Some(self.since(&start));
                    o.dimensions.push(dim);
                }
                "member" => {
                    self.bump();
                    let (category, _) = self.ident("category name")?;
                    let value = self.constant()?;
                    self.expect(Tok::Semi)?;
                    o.members.push(MemberDecl {
                        category,
                        value,
                        span: Some(self.since(&start)),
                    });
                }
                "edge" => {
                    self.bump();
                    let (predicate, _) = self.ident("roll-up name")?;
                    self.expect(Tok::LParen)?;
                    let child = self.constant()?;
                    self.expect(Tok::Comma)?;
                    let parent = self.constant()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Semi)?;
                    o.edges.push(EdgeDecl {
                        predicate,
                        child,
                        parent,
                        span: Some(self.since(&start)),
                    });
                }
                "relation" => {
                    self.bump();
                    let (name, name_span) = self.ident("relation name")?;
                    dup(&mut preds, &name, "predicate", &name_span)?;
                    let rel = self.relation_signature(name, &start)?;
                    o.relations.push(rel);
                }
                "data" => {
                    self.bump();
                    let (relation, _) = self.ident("relation name")?;
                    self.expect(Tok::LParen)?;
                    let categorical = self.values(Tok::Semi)?;
                    self.expect(Tok::Semi)?;
                    let noncategorical = self.values(Tok::RParen)?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Semi)?;
                    o.data.push(DataDecl {
                        relation,
                        categorical,
                        noncategorical,
                        span: Some(self.since(&start)),
                    });
                }
                "tgd" => {
                    self.bump();
                    let (id, id_span) = self.ident("rule name")?;
                    dup(&mut rules, &id, "rule", &id_span)?;
                    o.tgds.push(self.tgd(id, &start)?);
                }
                "egd" => {
                    self.bump();
                    let (id, id_span) = self.ident("rule name")?;
                    dup(&mut rules, &id, "rule", &id_span)?;
                    o.egds.push(self.egd(id, &start)?);
                }
                "nc" => {
                    self.bump();
                    let (id, id_span) = self.ident("rule name")?;
                    dup(&mut rules, &id, "rule", &id_span)?;
                    o.ncs.push(self.nc(id, &start)?);
                }
                "query" => {
                    self.bump();
                    let name_span = self.span();
                    let q = self.query(start)?;
                    dup(&mut queries, &q.name, "query", &name_span)?;
                    o.queries.push(q);
                }
                _ => {
                    return self.error(&[
                        "`dimension`",
                        "`member`",
                        "`edge`",
                        "`relation`",
                        "`data`",
                        "`tgd`",
                        "`egd`",
                        "`nc`",
                        "`query`",
                    ])
                }
            }
        }
        Ok(o)
    }

    fn relation_signature(
        &mut self,
        name: String,
        start: &SourceSpan,
    ) -> Result<CategoricalPredicateSchema, ParseError> {
        let mut rel = CategoricalPredicateSchema::new(name);
        self.expect(Tok::LParen)?;
        if !self.eat(Tok::Semi) {
            loop {
                self.expect_keyword("cat")?;
                let (category, _) = self.ident("category name")?;
                let (attr, _) = self.ident("attribute name")?;
                rel.categorical.push(CategoricalAttribute {
                    name: attr,
                    category,
                });
                if self.eat(Tok::Comma) {
                    continue;
                }
                if self.eat(Tok::Semi) {
                    break;
                }
                return self.error(&["`,`", "`;`"]);
            }
        }
        if !self.eat(Tok::RParen) {
            loop {
                let (attr, _) = self.ident("attribute name")?;
                rel.noncategorical.push(attr);
                if self.eat(Tok::Comma) {
                    continue;
                }
                self.expect(Tok::RParen)?;
                break;
            }
        }
        self.expect(Tok::Semi)?;
        rel.span = Some(self.since(start));
        Ok(rel)
    }

    /// A constant in a member or edge declaration.
    fn constant(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Str(s) | Tok::Number(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error(&["constant"]),
        }
    }

    /// Comma-separated data values up to (not including) `end`.
    fn values(&mut self, end: Tok) -> Result<Vec<Value>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == end {
            return Ok(out);
        }
        loop {
            let v = match self.peek().clone() {
                Tok::Ident(s) | Tok::Str(s) | Tok::Number(s) => Value::constant(&s),
                Tok::Null(k) => Value::null(k),
                _ => return self.error(&["value"]),
            };
            self.bump();
            out.push(v);
            if !self.eat(Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Term::Var(s))
            }
            Tok::Str(s) | Tok::Number(s) => {
                self.bump();
                Ok(Term::Const(s))
            }
            _ => self.error(&["variable", "constant"]),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let start = self.span();
        let (predicate, _) = self.ident("predicate name")?;
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        let mut arg_spans = Vec::new();
        let mut split = None;
        if !self.eat(Tok::RParen) {
            loop {
                if *self.peek() == Tok::Semi {
                    if split.is_some() {
                        return self.error(&["term", "`)`"]);
                    }
                    self.bump();
                    split = Some(args.len());
                    if self.eat(Tok::RParen) {
                        break;
                    }
                    continue;
                }
                arg_spans.push(self.span());
                args.push(self.term()?);
                if self.eat(Tok::Comma) {
                    continue;
                }
                if *self.peek() == Tok::Semi && split.is_none() {
                    continue;
                }
                if self.eat(Tok::RParen) {
                    break;
                }
                return if split.is_none() {
                    self.error(&["`,`", "`;`", "`)`"])
                } else {
                    self.error(&["`,`", "`)`"])
                };
            }
        }
        Ok(Atom {
            predicate,
            args,
            split,
            span: Some(self.since(&start)),
            arg_spans,
        })
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negated = self.is_keyword("not") && matches!(self.peek_at(1), Tok::Ident(_));
        if negated {
            self.bump();
        }
        Ok(Literal {
            atom: self.atom()?,
            negated,
        })
    }

    fn body(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut out = vec![self.literal()?];
        while self.eat(Tok::Comma) {
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn positive_body(&mut self) -> Result<Vec<Atom>, ParseError> {
        let start = self.pos;
        let lits = self.body()?;
        if let Some(i) = lits.iter().position(|l| l.negated) {
            // Point at the offending `not`.
            let span = self.tokens[start..]
                .iter()
                .find(|t| {
                    matches!(&t.tok, Tok::Ident(s) if s == "not")
                        && t.span.line == lits[i].atom.span.as_ref().unwrap().line
                })
                .map(|t| t.span.clone())
                .unwrap_or_else(|| lits[i].atom.span.clone().unwrap());
            return Err(ParseError::Syntax {
                span,
                expected: vec!["positive atom".into()],
                found: "negation".into(),
            });
        }
        Ok(lits.into_iter().map(|l| l.atom).collect())
    }

    fn var_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut out = vec![self.ident("variable")?.0];
        while self.eat(Tok::Comma) {
            out.push(self.ident("variable")?.0);
        }
        Ok(out)
    }

    fn exists_prefix(&mut self) -> Result<Vec<String>, ParseError> {
        if self.is_keyword("exists") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            let vars = self.var_list()?;
            self.expect(Tok::Colon)?;
            Ok(vars)
        } else {
            Ok(Vec::new())
        }
    }

    fn tgd(&mut self, id: String, start: &SourceSpan) -> Result<DimensionalTgd, ParseError> {
        self.expect(Tok::Colon)?;
        let body = self.positive_body()?;
        self.expect(Tok::Arrow)?;
        let existential = self.exists_prefix()?;
        let head = self.atom()?;
        self.expect(Tok::Dot)?;
        Ok(DimensionalTgd {
            id,
            body,
            head,
            existential,
            kind: TgdKind::Dimensional,
            span: Some(self.since(start)),
        })
    }

    fn egd(&mut self, id: String, start: &SourceSpan) -> Result<DimensionalEgd, ParseError> {
        self.expect(Tok::Colon)?;
        let body = self.positive_body()?;
        self.expect(Tok::Arrow)?;
        let (lhs, _) = self.ident("variable")?;
        self.expect(Tok::Eq)?;
        let (rhs, _) = self.ident("variable")?;
        self.expect(Tok::Dot)?;
        Ok(DimensionalEgd {
            id,
            body,
            lhs,
            rhs,
            span: Some(self.since(start)),
        })
    }

    fn nc(&mut self, id: String, start: &SourceSpan) -> Result<NegativeConstraint, ParseError> {
        self.expect(Tok::Colon)?;
        let lits = self.body()?;
        let mut body = Vec::new();
        let mut negated = None;
        for lit in lits {
            if !lit.negated {
                body.push(lit.atom);
                continue;
            }
            let span = lit.atom.span.clone();
            if negated.is_some() {
                return Err(ParseError::Syntax {
                    span: span.unwrap(),
                    expected: vec!["positive atom".into()],
                    found: "second negated atom".into(),
                });
            }
            let var = match lit.atom.args.as_slice() {
                [Term::Var(v)] => v.clone(),
                _ => {
                    return Err(ParseError::Syntax {
                        span: span.unwrap(),
                        expected: vec!["category atom over one variable".into()],
                        found: format!("`{}`", lit.atom),
                    })
                }
            };
            negated = Some(NegatedCategory {
                category: lit.atom.predicate,
                var,
                span,
            });
        }
        self.expect(Tok::Arrow)?;
        self.expect_keyword("bottom")?;
        self.expect(Tok::Dot)?;
        Ok(NegativeConstraint {
            id,
            body,
            negated,
            span: Some(self.since(start)),
        })
    }

    /// Everything after the `query` keyword.
    fn query(&mut self, start: SourceSpan) -> Result<ConjunctiveQuery, ParseError> {
        let (name, _) = self.ident("query name")?;
        self.expect(Tok::LParen)?;
        let answer_vars = if *self.peek() == Tok::RParen {
            Vec::new()
        } else {
            self.var_list()?
        };
        self.expect(Tok::RParen)?;
        self.expect(Tok::Colon)?;
        let existential = self.exists_prefix()?;
        let body = if self.is_keyword("true") && *self.peek_at(1) == Tok::Dot {
            self.bump();
            Vec::new()
        } else {
            self.positive_body()?
        };
        self.expect(Tok::Dot)?;
        Ok(ConjunctiveQuery {
            name,
            answer_vars,
            existential,
            body,
            span: Some(self.since(&start)),
        })
    }
}
