use std::collections::BTreeSet;
use std::fmt;

use super::{vocab, Assertion, Axiom, ClassExpression, EntityKind, Facet, Iri, KnowledgeBase};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Blank(u32),
    Integer(i64),
}

impl Term {
    pub fn iri(iri: &Iri) -> Self {
        Term::Iri(iri.clone())
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => write!(f, "<{i}>"),
            Term::Blank(n) => write!(f, "_:b{n}"),
            Term::Integer(v) => write!(f, "\"{v}\"^^<{}>", *vocab::XSD_INT),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: &Iri, object: Term) -> Self {
        Triple {
            subject,
            predicate: predicate.clone(),
            object,
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <{}> {} .", self.subject, self.predicate, self.object)
    }
}

/// The predicate used for a data facet in the triple encoding.
pub(crate) fn facet_predicate(facet: Facet) -> &'static Iri {
    match facet {
        Facet::MaxInclusive => &vocab::XSD_MAX_INCLUSIVE,
        Facet::MinInclusive => &vocab::XSD_MIN_INCLUSIVE,
        Facet::Exact => &vocab::OWL_HAS_VALUE,
    }
}

/// Lowers the KB to RDF triples.
///
/// Blank nodes are numbered in the order they are created while walking axioms
/// and then assertions in sorted order, so repeated calls give identical output.
pub fn rdf_view(kb: &KnowledgeBase) -> BTreeSet<Triple> {
    let mut lower = Lowering::default();
    for axiom in kb.axioms() {
        lower.axiom(axiom);
    }
    for assertion in kb.assertions() {
        lower.assertion(assertion);
    }
    lower.out
}

#[derive(Default)]
struct Lowering {
    next_blank: u32,
    out: BTreeSet<Triple>,
}

impl Lowering {
    fn fresh(&mut self) -> Term {
        let b = Term::Blank(self.next_blank);
        self.next_blank += 1;
        b
    }

    fn emit(&mut self, s: Term, p: &Iri, o: Term) {
        self.out.insert(Triple::new(s, p, o));
    }

    fn axiom(&mut self, axiom: &Axiom) {
        match axiom {
            Axiom::Declaration { kind, iri } => {
                let class = match kind {
                    EntityKind::Class => &*vocab::OWL_CLASS,
                    EntityKind::ObjectProperty => &*vocab::OWL_OBJECT_PROPERTY,
                    EntityKind::DataProperty => &*vocab::OWL_DATATYPE_PROPERTY,
                    EntityKind::Individual => &*vocab::OWL_NAMED_INDIVIDUAL,
                };
                self.emit(Term::iri(iri), &vocab::RDF_TYPE, Term::iri(class));
            }
            Axiom::SubClassOf { sub, sup } => {
                let node = self.expression(sup);
                self.emit(Term::iri(sub), &vocab::RDFS_SUBCLASS_OF, node);
            }
            Axiom::EquivalentClasses { named, definition } => {
                let node = self.expression(definition);
                self.emit(Term::iri(named), &vocab::OWL_EQUIVALENT_CLASS, node);
            }
            Axiom::SubPropertyOf { sub, sup } => {
                self.emit(Term::iri(sub), &vocab::RDFS_SUBPROPERTY_OF, Term::iri(sup));
            }
        }
    }

    fn assertion(&mut self, assertion: &Assertion) {
        match assertion {
            Assertion::ClassAssertion { class, individual } => {
                self.emit(Term::iri(individual), &vocab::RDF_TYPE, Term::iri(class));
            }
            Assertion::ObjectPropertyAssertion {
                property,
                subject,
                object,
            } => self.emit(Term::iri(subject), property, Term::iri(object)),
            Assertion::DataPropertyAssertion {
                property,
                subject,
                value,
            } => self.emit(Term::iri(subject), property, Term::Integer(*value)),
        }
    }

    fn expression(&mut self, expr: &ClassExpression) -> Term {
        match expr {
            ClassExpression::Named(c) => Term::iri(c),
            ClassExpression::Intersection(conjuncts) => {
                let node = self.fresh();
                self.emit(node.clone(), &vocab::RDF_TYPE, Term::iri(&vocab::OWL_CLASS));
                let list = self.list(conjuncts);
                self.emit(node.clone(), &vocab::OWL_INTERSECTION_OF, list);
                node
            }
            ClassExpression::ObjectSome { property, filler } => {
                let node = self.restriction(property);
                let filler = self.expression(filler);
                self.emit(node.clone(), &vocab::OWL_SOME_VALUES_FROM, filler);
                node
            }
            ClassExpression::DataFacet {
                property,
                facet,
                bound,
            } => {
                let node = self.restriction(property);
                self.emit(node.clone(), facet_predicate(*facet), Term::Integer(*bound));
                node
            }
        }
    }

    fn restriction(&mut self, property: &Iri) -> Term {
        let node = self.fresh();
        self.emit(
            node.clone(),
            &vocab::RDF_TYPE,
            Term::iri(&vocab::OWL_RESTRICTION),
        );
        self.emit(node.clone(), &vocab::OWL_ON_PROPERTY, Term::iri(property));
        node
    }

    fn list(&mut self, items: &[ClassExpression]) -> Term {
        let cells: Vec<Term> = items.iter().map(|_| self.fresh()).collect();
        for (i, item) in items.iter().enumerate() {
            let value = self.expression(item);
            self.emit(cells[i].clone(), &vocab::RDF_FIRST, value);
            let rest = cells
                .get(i + 1)
                .cloned()
                .unwrap_or_else(|| Term::iri(&vocab::RDF_NIL));
            self.emit(cells[i].clone(), &vocab::RDF_REST, rest);
        }
        cells
            .into_iter()
            .next()
            .unwrap_or_else(|| Term::iri(&vocab::RDF_NIL))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nis(s: &str) -> Iri {
        vocab::nis(s)
    }

    #[test]
    fn class_assertion_lowers_to_type_triple() {
        let mut kb = KnowledgeBase::new();
        kb.add_assertion(Assertion::class(&nis("Agent"), &nis("individual3")));
        let view = rdf_view(&kb);
        assert!(view.contains(&Triple::new(
            Term::iri(&nis("individual3")),
            &vocab::RDF_TYPE,
            Term::iri(&nis("Agent"))
        )));
    }

    #[test]
    fn restriction_lowers_to_on_property_and_some_values_from() {
        let mut kb = KnowledgeBase::new();
        let def = ClassExpression::some(
            &nis("adopt"),
            ClassExpression::named(&nis("NationalCybersecurityStrategy")),
        );
        kb.add_axiom(Axiom::equivalent(&nis("Article7-MemberState"), def))
            .unwrap();
        let view = rdf_view(&kb);
        let r = view
            .iter()
            .find(|t| t.predicate == *vocab::OWL_ON_PROPERTY)
            .map(|t| t.subject.clone())
            .unwrap();
        assert!(matches!(r, Term::Blank(_)));
        assert!(view.contains(&Triple::new(
            r.clone(),
            &vocab::OWL_ON_PROPERTY,
            Term::iri(&nis("adopt"))
        )));
        assert!(view.contains(&Triple::new(
            r,
            &vocab::OWL_SOME_VALUES_FROM,
            Term::iri(&nis("NationalCybersecurityStrategy"))
        )));
    }

    /// Walks an RDF list from its head, returning the number of cells.
    fn list_cells(view: &BTreeSet<Triple>, head: &Term) -> usize {
        let mut n = 0;
        let mut cur = head.clone();
        while cur != Term::iri(&vocab::RDF_NIL) {
            assert!(view
                .iter()
                .any(|t| t.subject == cur && t.predicate == *vocab::RDF_FIRST));
            cur = view
                .iter()
                .find(|t| t.subject == cur && t.predicate == *vocab::RDF_REST)
                .map(|t| t.object.clone())
                .expect("cell without rdf:rest");
            n += 1;
        }
        n
    }

    #[test]
    fn list_has_one_cell_per_conjunct() {
        // A one-element intersection normalizes away, so there is no list at n = 1.
        for n in 1..=4usize {
            let conjuncts: Vec<_> = (0..n)
                .map(|i| {
                    ClassExpression::some(&nis(&format!("p{i}")), ClassExpression::named(&nis("O")))
                })
                .collect();
            let mut kb = KnowledgeBase::new();
            kb.add_axiom(Axiom::equivalent(
                &nis("N"),
                ClassExpression::Intersection(conjuncts),
            ))
            .unwrap();
            let view = rdf_view(&kb);
            let heads: Vec<_> = view
                .iter()
                .filter(|t| t.predicate == *vocab::OWL_INTERSECTION_OF)
                .map(|t| t.object.clone())
                .collect();
            if n == 1 {
                assert!(heads.is_empty());
                continue;
            }
            assert_eq!(heads.len(), 1);
            assert_eq!(list_cells(&view, &heads[0]), n);
            assert_eq!(
                view.iter()
                    .filter(|t| t.predicate == *vocab::RDF_FIRST)
                    .count(),
                n
            );
        }
    }

    #[test]
    fn view_is_deterministic() {
        let mut kb = KnowledgeBase::new();
        let def = ClassExpression::Intersection(vec![
            ClassExpression::named(&nis("Agent")),
            ClassExpression::some(&nis("designate"), ClassExpression::named(&nis("CSIRT"))),
            ClassExpression::facet(&nis("SubmissionMonths"), Facet::MaxInclusive, 3),
        ]);
        kb.add_axiom(Axiom::equivalent(&nis("MemberState"), def))
            .unwrap();
        kb.add_assertion(Assertion::data(&nis("SubmissionMonths"), &nis("plan"), 2));
        let a = rdf_view(&kb);
        let b = rdf_view(&kb);
        assert_eq!(a, b);
        assert!(a.contains(&Triple::new(
            Term::iri(&nis("plan")),
            &nis("SubmissionMonths"),
            Term::Integer(2)
        )));
        assert!(a
            .iter()
            .any(|t| t.predicate == *vocab::XSD_MAX_INCLUSIVE && t.object == Term::Integer(3)));
    }

    #[test]
    fn concurrent_reads_agree() {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::sub_class_of(
            &nis("A"),
            ClassExpression::some(&nis("p"), ClassExpression::named(&nis("B"))),
        ))
        .unwrap();
        let expected = rdf_view(&kb);
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..4).map(|_| s.spawn(|| rdf_view(&kb))).collect();
            for h in handles {
                assert_eq!(h.join().unwrap(), expected);
            }
        });
    }
}
