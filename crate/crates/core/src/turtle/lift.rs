//! Lifting parsed triples into axioms and assertions.
//!
//! Named subjects are lifted statement by statement. Blank nodes are only
//! meaningful as class expressions or list cells reached from a lifted axiom;
//! any triple that is not consumed ends up as a warning.

use std::collections::{HashMap, HashSet};

use super::reader::{Node, RawTriple};
use super::{ParseDiagnostic, Pos, TurtleError};
use crate::kb::{
    vocab, Assertion, Axiom, ClassExpression, EntityKind, Facet, Iri, KbError, KnowledgeBase,
    PrefixMap,
};

pub(super) struct Lifter<'t> {
    triples: &'t [RawTriple],
    by_blank: HashMap<u32, Vec<usize>>,
    consumed: Vec<bool>,
    kb: KnowledgeBase,
    warnings: Vec<ParseDiagnostic>,
}

impl<'t> Lifter<'t> {
    pub(super) fn new(triples: &'t [RawTriple], prefixes: PrefixMap) -> Self {
        let mut by_blank: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, t) in triples.iter().enumerate() {
            if let Node::Blank(b) = t.subject {
                by_blank.entry(b).or_default().push(i);
            }
        }
        Lifter {
            triples,
            by_blank,
            consumed: vec![false; triples.len()],
            kb: KnowledgeBase::with_prefixes(prefixes),
            warnings: Vec::new(),
        }
    }

    pub(super) fn run(mut self) -> Result<(KnowledgeBase, Vec<ParseDiagnostic>), TurtleError> {
        // Declarations first, so sub-property axioms see property kinds.
        let triples = self.triples;
        for (i, t) in triples.iter().enumerate() {
            if let (Node::Iri(s), true, Node::Iri(o)) =
                (&t.subject, t.predicate == *vocab::RDF_TYPE, &t.object)
            {
                if let Some(kind) = declaration_kind(o) {
                    self.add_axiom(Axiom::declaration(kind, s), t.pos)?;
                    self.consumed[i] = true;
                }
            }
        }
        for (i, t) in triples.iter().enumerate() {
            if self.consumed[i] {
                continue;
            }
            if let Node::Iri(s) = &t.subject {
                self.named_statement(i, s)?;
            }
        }
        for (i, t) in self.triples.iter().enumerate() {
            if !self.consumed[i] {
                self.warnings.push(ParseDiagnostic::warning(
                    t.pos,
                    format!(
                        "triple with predicate <{}> was not lifted into an axiom or assertion",
                        t.predicate
                    ),
                ));
            }
        }
        self.warnings.sort_by_key(|w| (w.line, w.column));
        Ok((self.kb, self.warnings))
    }

    fn add_axiom(&mut self, axiom: Axiom, pos: Pos) -> Result<(), TurtleError> {
        self.kb
            .add_axiom(axiom)
            .map(|_| ())
            .map_err(|e: KbError| TurtleError::lift(pos, e.to_string()))
    }

    fn named_statement(&mut self, i: usize, subject: &Iri) -> Result<(), TurtleError> {
        let triples = self.triples;
        let t = &triples[i];
        let p = &t.predicate;
        let lifted = if *p == *vocab::RDF_TYPE {
            match &t.object {
                Node::Iri(class) if !vocab::is_reserved(class) => {
                    self.kb.add_assertion(Assertion::class(class, subject));
                    true
                }
                _ => false,
            }
        } else if *p == *vocab::RDFS_SUBCLASS_OF {
            let sup = self.expression(&t.object, t.pos, &mut HashSet::new())?;
            self.add_axiom(Axiom::sub_class_of(subject, sup), t.pos)?;
            true
        } else if *p == *vocab::OWL_EQUIVALENT_CLASS {
            let def = self.expression(&t.object, t.pos, &mut HashSet::new())?;
            self.add_axiom(Axiom::equivalent(subject, def), t.pos)?;
            true
        } else if *p == *vocab::RDFS_SUBPROPERTY_OF {
            match &t.object {
                Node::Iri(sup) => {
                    self.add_axiom(Axiom::sub_property_of(subject, sup), t.pos)?;
                    true
                }
                _ => false,
            }
        } else if vocab::is_reserved(p) {
            false
        } else {
            match &t.object {
                Node::Iri(o) => {
                    self.kb.add_assertion(Assertion::object(p, subject, o));
                    true
                }
                Node::Integer(v) => {
                    self.kb.add_assertion(Assertion::data(p, subject, *v));
                    true
                }
                _ => false,
            }
        };
        self.consumed[i] = lifted;
        Ok(())
    }

    /// Consumes `(subject = b, predicate)` triples and returns their objects.
    fn take(&mut self, b: u32, predicate: &Iri) -> Vec<(Node, Pos)> {
        let mut out = Vec::new();
        let triples = self.triples;
        for &i in self.by_blank.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
            let t = &triples[i];
            if t.predicate == *predicate {
                self.consumed[i] = true;
                out.push((t.object.clone(), t.pos));
            }
        }
        out
    }

    fn single(
        &mut self,
        b: u32,
        predicate: &Iri,
        at: Pos,
    ) -> Result<Option<(Node, Pos)>, TurtleError> {
        let mut found = self.take(b, predicate);
        match found.len() {
            0 => Ok(None),
            1 => Ok(found.pop()),
            _ => Err(TurtleError::lift(
                at,
                format!("blank node has more than one <{predicate}>"),
            )),
        }
    }

    fn expression(
        &mut self,
        node: &Node,
        at: Pos,
        visiting: &mut HashSet<u32>,
    ) -> Result<ClassExpression, TurtleError> {
        let b = match node {
            Node::Iri(i) => return Ok(ClassExpression::Named(i.clone())),
            Node::Blank(b) => *b,
            _ => {
                return Err(TurtleError::lift(
                    at,
                    "literal used where a class expression is expected",
                ))
            }
        };
        if !visiting.insert(b) {
            return Err(TurtleError::lift(at, "cyclic class expression"));
        }
        let types = self.take(b, &vocab::RDF_TYPE);
        let is_type = |class: &Iri| types.iter().any(|(n, _)| *n == Node::Iri(class.clone()));
        let restriction = is_type(&vocab::OWL_RESTRICTION);
        if !types.iter().all(|(n, _)| {
            *n == Node::Iri(vocab::OWL_CLASS.clone())
                || *n == Node::Iri(vocab::OWL_RESTRICTION.clone())
        }) {
            return Err(TurtleError::lift(
                at,
                "class expression node has an unsupported rdf:type",
            ));
        }

        let expr = if let Some((list, list_at)) = self.single(b, &vocab::OWL_INTERSECTION_OF, at)? {
            let mut conjuncts = Vec::new();
            for (item, item_at) in self.list(&list, list_at)? {
                conjuncts.push(self.expression(&item, item_at, visiting)?);
            }
            if conjuncts.is_empty() {
                return Err(TurtleError::lift(
                    list_at,
                    "owl:intersectionOf with an empty list",
                ));
            }
            ClassExpression::Intersection(conjuncts)
        } else if let Some((prop, prop_at)) = self.single(b, &vocab::OWL_ON_PROPERTY, at)? {
            let Node::Iri(property) = prop else {
                return Err(TurtleError::lift(
                    prop_at,
                    "owl:onProperty must name a property",
                ));
            };
            let filler = self.single(b, &vocab::OWL_SOME_VALUES_FROM, at)?;
            let mut facets = Vec::new();
            for (facet, pred) in [
                (Facet::MaxInclusive, &*vocab::XSD_MAX_INCLUSIVE),
                (Facet::MinInclusive, &*vocab::XSD_MIN_INCLUSIVE),
                (Facet::Exact, &*vocab::OWL_HAS_VALUE),
            ] {
                for (value, value_at) in self.take(b, pred) {
                    facets.push((facet, value, value_at));
                }
            }
            match (filler, facets.len()) {
                (Some((filler, filler_at)), 0) => {
                    let filler = self.expression(&filler, filler_at, visiting)?;
                    ClassExpression::some(&property, filler)
                }
                (None, 1) => match facets.pop().unwrap() {
                    (facet, Node::Integer(bound), _) => ClassExpression::facet(&property, facet, bound),
                    (_, _, value_at) => return Err(TurtleError::lift(value_at, "data facet bound must be an integer literal")),
                },
                (None, 0) => {
                    return Err(TurtleError::lift(
                        at,
                        format!("restriction on <{property}> has neither owl:someValuesFrom nor an integer facet"),
                    ))
                }
                _ => {
                    return Err(TurtleError::lift(
                        at,
                        format!("restriction on <{property}> combines several value constraints"),
                    ))
                }
            }
        } else if restriction {
            return Err(TurtleError::lift(
                at,
                "owl:Restriction without owl:onProperty",
            ));
        } else {
            return Err(TurtleError::lift(
                at,
                "blank node is not a supported class expression",
            ));
        };
        visiting.remove(&b);
        Ok(expr)
    }

    fn list(&mut self, head: &Node, at: Pos) -> Result<Vec<(Node, Pos)>, TurtleError> {
        let mut items = Vec::new();
        let mut seen = HashSet::new();
        let mut cur = head.clone();
        let mut cur_at = at;
        loop {
            match &cur {
                Node::Iri(i) if *i == *vocab::RDF_NIL => return Ok(items),
                Node::Blank(b) if seen.insert(*b) => {
                    let b = *b;
                    let first = self.take(b, &vocab::RDF_FIRST);
                    let rest = self.take(b, &vocab::RDF_REST);
                    match (first.as_slice(), rest.as_slice()) {
                        ([item], [(next, next_at)]) => {
                            items.push(item.clone());
                            cur = next.clone();
                            cur_at = *next_at;
                        }
                        _ => {
                            return Err(TurtleError::syntax(
                                cur_at,
                                "malformed list: each cell needs exactly one rdf:first and one rdf:rest",
                            ))
                        }
                    }
                }
                Node::Blank(_) => {
                    return Err(TurtleError::syntax(
                        cur_at,
                        "malformed list: cycle in rdf:rest chain",
                    ))
                }
                _ => {
                    return Err(TurtleError::syntax(
                        cur_at,
                        "malformed list: expected a list cell or rdf:nil",
                    ))
                }
            }
        }
    }
}

fn declaration_kind(class: &Iri) -> Option<EntityKind> {
    if *class == *vocab::OWL_CLASS {
        Some(EntityKind::Class)
    } else if *class == *vocab::OWL_OBJECT_PROPERTY {
        Some(EntityKind::ObjectProperty)
    } else if *class == *vocab::OWL_DATATYPE_PROPERTY {
        Some(EntityKind::DataProperty)
    } else if *class == *vocab::OWL_NAMED_INDIVIDUAL {
        Some(EntityKind::Individual)
    } else {
        None
    }
}
