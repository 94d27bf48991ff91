//! Turtle reading and writing for the subset used by directive ontologies:
//! `@prefix`, `;`/`,` abbreviations, `[ ... ]` blank nodes, `( ... )` collections
//! and integer literals. Parsed triples are lifted into axioms and assertions;
//! triples outside the supported patterns become warnings.

mod lexer;
mod lift;
mod reader;
mod write;

use std::fmt;

use crate::kb::KnowledgeBase;

pub use write::serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A located message; `line` and `column` are 1-based, columns count characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    fn new(pos: Pos, message: impl Into<String>, severity: Severity) -> Self {
        ParseDiagnostic {
            line: pos.line,
            column: pos.column,
            message: message.into(),
            severity,
        }
    }

    pub(crate) fn warning(pos: Pos, message: impl Into<String>) -> Self {
        Self::new(pos, message, Severity::Warning)
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {level}: {}",
            self.line, self.column, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TurtleError {
    #[error("syntax error at {0}")]
    Syntax(ParseDiagnostic),
    #[error("cannot lift triples at {0}")]
    Lift(ParseDiagnostic),
}

impl TurtleError {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        TurtleError::Syntax(ParseDiagnostic::new(pos, message, Severity::Error))
    }

    pub(crate) fn lift(pos: Pos, message: impl Into<String>) -> Self {
        TurtleError::Lift(ParseDiagnostic::new(pos, message, Severity::Error))
    }

    pub fn diagnostic(&self) -> &ParseDiagnostic {
        match self {
            TurtleError::Syntax(d) | TurtleError::Lift(d) => d,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParsedTurtle {
    pub kb: KnowledgeBase,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parses Turtle text into a knowledge base.
///
/// The standard `owl`, `rdf`, `rdfs` and `xsd` prefixes are pre-bound.
pub fn parse_turtle(text: &str) -> Result<ParsedTurtle, TurtleError> {
    let mut reader = reader::Reader::new(text)?;
    reader.parse_document()?;
    let (kb, warnings) = lift::Lifter::new(&reader.triples, reader.prefixes.clone()).run()?;
    Ok(ParsedTurtle { kb, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{vocab, Assertion, Axiom, ClassExpression, EntityKind, Facet, Iri, NIS_NS};

    fn nis(s: &str) -> Iri {
        vocab::nis(s)
    }

    fn parse(text: &str) -> ParsedTurtle {
        parse_turtle(text).unwrap_or_else(|e| panic!("{e}"))
    }

    /// The text at `(line, column)` of `src`.
    fn slice_at(src: &str, d: &ParseDiagnostic) -> String {
        let line = src.lines().nth(d.line - 1).expect("line inside input");
        line.chars().skip(d.column - 1).collect()
    }

    #[test]
    fn single_class_assertion() {
        let p = parse("@prefix nis: <urn:nis#> . nis:individual3 rdf:type nis:Agent .");
        assert_eq!(p.kb.abox().len(), 1);
        assert!(p
            .kb
            .contains_assertion(&Assertion::class(&nis("Agent"), &nis("individual3"))));
        assert!(p.warnings.is_empty());
        assert_eq!(p.kb.prefixes().get("nis"), Some(NIS_NS));
    }

    #[test]
    fn restriction_inside_intersection_lifts_to_object_some() {
        let src = r#"@prefix nis: <urn:nis#> .
nis:Article7-MemberState owl:equivalentClass [
    a owl:Class ;
    owl:intersectionOf (
        [ rdf:type owl:Restriction ; owl:onProperty nis:adopt ; owl:someValuesFrom nis:NationalCybersecurityStrategy ]
    )
] .
"#;
        let p = parse(src);
        let def = p.kb.definition(&nis("Article7-MemberState")).unwrap();
        assert_eq!(
            *def,
            ClassExpression::some(
                &nis("adopt"),
                ClassExpression::named(&nis("NationalCybersecurityStrategy"))
            )
        );
        assert!(p.warnings.is_empty(), "{:?}", p.warnings);
    }

    #[test]
    fn facet_restriction_lifts() {
        let src = r#"@prefix nis: <urn:nis#> .
nis:CyberSecurityIncidentResponsePlan rdfs:subClassOf [ a owl:Restriction ; owl:onProperty nis:SubmissionMonths ; xsd:maxInclusive "3"^^xsd:int ] .
nis:plan nis:SubmissionMonths 2 .
"#;
        let p = parse(src);
        assert!(p.kb.contains_axiom(&Axiom::sub_class_of(
            &nis("CyberSecurityIncidentResponsePlan"),
            ClassExpression::facet(&nis("SubmissionMonths"), Facet::MaxInclusive, 3)
        )));
        assert!(p.kb.contains_assertion(&Assertion::data(
            &nis("SubmissionMonths"),
            &nis("plan"),
            2
        )));
        assert!(p
            .kb
            .is_declared(&nis("SubmissionMonths"), EntityKind::DataProperty));
    }

    #[test]
    fn missing_final_dot_is_reported_at_last_token() {
        let src = "@prefix nis: <urn:nis#> .\nnis:individual3 rdf:type nis:Agent";
        let err = parse_turtle(src).unwrap_err();
        let TurtleError::Syntax(d) = &err else {
            panic!("{err:?}")
        };
        assert_eq!((d.line, d.column), (2, 26));
        assert!(slice_at(src, d).starts_with("nis:Agent"));
    }

    #[test]
    fn missing_dot_between_statements_points_at_next_subject() {
        let src = "@prefix nis: <urn:nis#> .\nnis:a a nis:B\nnis:c a nis:D .\n";
        let d = parse_turtle(src).unwrap_err().diagnostic().clone();
        assert_eq!((d.line, d.column), (3, 1));
        assert!(slice_at(src, &d).starts_with("nis:c"));
    }

    #[test]
    fn unknown_prefix_is_a_syntax_error() {
        let src = "foo:a a foo:B .";
        let err = parse_turtle(src).unwrap_err();
        assert!(
            matches!(&err, TurtleError::Syntax(d) if d.message.contains("foo") && d.column == 1)
        );
    }

    #[test]
    fn unsupported_features_are_rejected() {
        for (src, needle) in [
            ("@base <urn:x#> .", "@base"),
            ("<urn:a> <urn:p> \"x\"@en .", "language"),
            ("<urn:a> <urn:p> \"\"\"x\"\"\" .", "multi-line"),
            ("<urn:a> <urn:p> 1.5 .", "integer"),
            ("<urn:a> <urn:p> <rel> .", "relative"),
            ("<urn:a> <urn:p> (<urn:b> .", "collection"),
        ] {
            let err = parse_turtle(src).unwrap_err();
            assert!(err.diagnostic().message.contains(needle), "{src}: {err:?}");
        }
    }

    #[test]
    fn restriction_without_on_property_is_a_lift_error() {
        let src = "@prefix nis: <urn:nis#> .\nnis:A rdfs:subClassOf [ a owl:Restriction ; owl:someValuesFrom nis:B ] .";
        assert!(
            matches!(parse_turtle(src), Err(TurtleError::Lift(d)) if d.message.contains("onProperty"))
        );
    }

    #[test]
    fn malformed_explicit_list_is_a_syntax_error() {
        let src = "@prefix nis: <urn:nis#> .\nnis:A owl:equivalentClass [ owl:intersectionOf _:l ] .\n_:l rdf:first nis:B .\n";
        assert!(
            matches!(parse_turtle(src), Err(TurtleError::Syntax(d)) if d.message.contains("malformed list"))
        );
    }

    #[test]
    fn unknown_vocabulary_becomes_warnings() {
        let src = "@prefix nis: <urn:nis#> .\nnis:A rdfs:label \"Article\" ;\n  a owl:Class .\n_:x nis:p nis:q .\n";
        let p = parse(src);
        assert_eq!(p.warnings.len(), 2);
        assert!(p.warnings.iter().all(|w| w.severity == Severity::Warning));
        assert_eq!((p.warnings[0].line, p.warnings[1].line), (2, 4));
        assert!(p.kb.is_declared(&nis("A"), EntityKind::Class));
    }

    #[test]
    fn abbreviations_expand() {
        let src = "@prefix nis: <urn:nis#> .\nnis:i a nis:Agent , nis:Org ; nis:adopt nis:s1 , nis:s2 ; .";
        let p = parse(src);
        assert_eq!(p.kb.abox().len(), 4);
    }

    #[test]
    fn empty_kb_serializes_to_prefix_block() {
        let text = serialize(&KnowledgeBase::new());
        assert_eq!(
            text,
            "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
             @prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
        );
    }

    #[test]
    fn serialize_round_trips_and_is_stable() {
        let mut kb = KnowledgeBase::new();
        kb.prefixes_mut().insert("nis", NIS_NS);
        let def = ClassExpression::Intersection(vec![
            ClassExpression::named(&nis("Agent")),
            ClassExpression::some(
                &nis("designate"),
                ClassExpression::Intersection(vec![
                    ClassExpression::named(&nis("CSIRT")),
                    ClassExpression::some(&nis("p"), ClassExpression::named(&nis("Q"))),
                ]),
            ),
            ClassExpression::facet(&nis("SubmissionMonths"), Facet::Exact, -2),
        ]);
        kb.add_axiom(Axiom::equivalent(&nis("MemberState"), def))
            .unwrap();
        kb.add_axiom(Axiom::sub_property_of(&nis("p"), &nis("q")))
            .unwrap();
        kb.add_assertion(Assertion::object(&nis("designate"), &nis("i1"), &nis("c1")));
        kb.add_assertion(Assertion::data(&nis("SubmissionMonths"), &nis("i1"), 7));
        kb.add_assertion(Assertion::class(
            &Iri::new("urn:other/Thing(1)"),
            &nis("i1"),
        ));
        let text = serialize(&kb);
        assert_eq!(text, serialize(&kb));
        let back = parse(&text);
        assert!(back.warnings.is_empty(), "{:?}", back.warnings);
        assert_eq!(back.kb, kb);
    }
}
