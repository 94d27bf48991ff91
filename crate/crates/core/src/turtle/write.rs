use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::kb::{
    vocab, Assertion, Axiom, ClassExpression, EntityKind, Iri, KnowledgeBase, PrefixMap,
};

const INDENT: &str = "    ";

/// Writes the KB as Turtle. Output depends only on the KB contents.
pub fn serialize(kb: &KnowledgeBase) -> String {
    let prefixes = kb.prefixes();
    let mut out = String::new();
    for (label, ns) in prefixes.iter() {
        let _ = writeln!(out, "@prefix {label}: <{ns}> .");
    }

    // subject -> (predicate rank, predicate, object text)
    let mut statements: BTreeMap<&Iri, Vec<(u8, &Iri, String)>> = BTreeMap::new();
    let w = Writer { prefixes };
    for axiom in kb.axioms() {
        let (subject, rank, predicate, object) = match axiom {
            Axiom::Declaration { kind, iri } => {
                let class = match kind {
                    EntityKind::Class => &*vocab::OWL_CLASS,
                    EntityKind::ObjectProperty => &*vocab::OWL_OBJECT_PROPERTY,
                    EntityKind::DataProperty => &*vocab::OWL_DATATYPE_PROPERTY,
                    EntityKind::Individual => &*vocab::OWL_NAMED_INDIVIDUAL,
                };
                (iri, 0, &*vocab::RDF_TYPE, w.iri(class))
            }
            Axiom::SubClassOf { sub, sup } => {
                (sub, 1, &*vocab::RDFS_SUBCLASS_OF, w.expression(sup, 1))
            }
            Axiom::EquivalentClasses { named, definition } => (
                named,
                1,
                &*vocab::OWL_EQUIVALENT_CLASS,
                w.expression(definition, 1),
            ),
            Axiom::SubPropertyOf { sub, sup } => (sub, 1, &*vocab::RDFS_SUBPROPERTY_OF, w.iri(sup)),
        };
        statements
            .entry(subject)
            .or_default()
            .push((rank, predicate, object));
    }
    for assertion in kb.assertions() {
        let (subject, rank, predicate, object) = match assertion {
            Assertion::ClassAssertion { class, individual } => {
                (individual, 0, &*vocab::RDF_TYPE, w.iri(class))
            }
            Assertion::ObjectPropertyAssertion {
                property,
                subject,
                object,
            } => (subject, 2, property, w.iri(object)),
            Assertion::DataPropertyAssertion {
                property,
                subject,
                value,
            } => (subject, 2, property, w.integer(*value)),
        };
        statements
            .entry(subject)
            .or_default()
            .push((rank, predicate, object));
    }

    for (subject, mut lines) in statements {
        lines.sort();
        out.push('\n');
        out.push_str(&w.iri(subject));
        for (i, (_, predicate, object)) in lines.iter().enumerate() {
            let predicate = if **predicate == *vocab::RDF_TYPE {
                "a".to_string()
            } else {
                w.iri(predicate)
            };
            let sep = if i + 1 == lines.len() { " ." } else { " ;" };
            if i == 0 {
                let _ = write!(out, " {predicate} {object}{sep}");
            } else {
                let _ = write!(out, "\n{INDENT}{predicate} {object}{sep}");
            }
        }
        out.push('\n');
    }
    out
}

struct Writer<'a> {
    prefixes: &'a PrefixMap,
}

impl Writer<'_> {
    fn iri(&self, iri: &Iri) -> String {
        self.prefixes.compact(iri)
    }

    fn integer(&self, v: i64) -> String {
        format!("\"{v}\"^^{}", self.iri(&vocab::XSD_INT))
    }

    fn expression(&self, expr: &ClassExpression, depth: usize) -> String {
        match expr {
            ClassExpression::Named(c) => self.iri(c),
            ClassExpression::ObjectSome { property, filler } => format!(
                "[ a {} ; {} {} ; {} {} ]",
                self.iri(&vocab::OWL_RESTRICTION),
                self.iri(&vocab::OWL_ON_PROPERTY),
                self.iri(property),
                self.iri(&vocab::OWL_SOME_VALUES_FROM),
                self.expression(filler, depth)
            ),
            ClassExpression::DataFacet {
                property,
                facet,
                bound,
            } => format!(
                "[ a {} ; {} {} ; {} {} ]",
                self.iri(&vocab::OWL_RESTRICTION),
                self.iri(&vocab::OWL_ON_PROPERTY),
                self.iri(property),
                self.iri(crate::kb::rdf_facet_predicate(*facet)),
                self.integer(*bound)
            ),
            ClassExpression::Intersection(conjuncts) => {
                let inner = INDENT.repeat(depth + 1);
                let item = INDENT.repeat(depth + 2);
                let mut s = format!(
                    "[\n{inner}a {} ;\n{inner}{} (",
                    self.iri(&vocab::OWL_CLASS),
                    self.iri(&vocab::OWL_INTERSECTION_OF)
                );
                for c in conjuncts {
                    let _ = write!(s, "\n{item}{}", self.expression(c, depth + 2));
                }
                let _ = write!(s, "\n{inner})\n{}]", INDENT.repeat(depth));
                s
            }
        }
    }
}
