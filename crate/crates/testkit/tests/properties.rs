use nis_core::gap::{gap_report, report_rows, run_missing_measures_query};
use nis_core::kb::{vocab, Assertion, Axiom, ClassExpression, Facet, KnowledgeBase};
use nis_core::reasoner::Inference;
use nis_testkit::suites;

#[test]
fn engine_matches_oracle() {
    let outcome = suites::oracle_equivalence(300, 1_000);
    assert!(outcome.passed(), "{outcome}");
}

#[test]
fn types_and_gaps_are_monotone() {
    let outcome = suites::monotonicity(200, 2_000);
    assert!(outcome.passed(), "{outcome}");
}

#[test]
fn compiled_kbs_round_trip() {
    let outcome = suites::round_trip(60, 3_000);
    assert!(outcome.passed(), "{outcome}");
}

#[test]
fn zero_gap_iff_member() {
    let outcome = suites::zero_gap_membership(80, 4_000);
    assert!(outcome.passed(), "{outcome}");
}

#[test]
fn engine_matches_literal_query() {
    let outcome = suites::listing_equivalence(80, 5_000);
    assert!(outcome.passed(), "{outcome}");
}

#[test]
fn extra_data_value_can_retract_facet_membership() {
    // Facets need every asserted value inside the bound, so a new value can
    // remove a type. Monotonicity covers class and object assertions only.
    let months = vocab::nis("SubmissionMonths");
    let plan = vocab::nis("plan");
    let mut kb = KnowledgeBase::new();
    kb.add_axiom(Axiom::equivalent(
        &vocab::nis("Timely"),
        ClassExpression::facet(&months, Facet::MaxInclusive, 3),
    ))
    .unwrap();
    kb.add_assertion(Assertion::data(&months, &plan, 2));
    assert!(Inference::new(&kb)
        .types()
        .has_type(&plan, &vocab::nis("Timely")));
    kb.add_assertion(Assertion::data(&months, &plan, 7));
    assert!(!Inference::new(&kb)
        .types()
        .has_type(&plan, &vocab::nis("Timely")));
}

fn nis(s: &str) -> nis_core::kb::Iri {
    vocab::nis(s)
}

#[test]
fn literal_query_misses_single_measure_articles() {
    // A one-measure article is defined by a bare restriction, which the query's
    // intersectionOf pattern does not reach.
    let mut kb = KnowledgeBase::new();
    kb.add_axiom(Axiom::equivalent(
        &nis("Art1-G"),
        ClassExpression::some(&nis("adopt"), ClassExpression::named(&nis("Strategy"))),
    ))
    .unwrap();
    kb.add_axiom(Axiom::equivalent(
        &nis("G"),
        ClassExpression::Intersection(vec![
            ClassExpression::named(&nis("Agent")),
            ClassExpression::named(&nis("Art1-G")),
        ]),
    ))
    .unwrap();
    kb.add_assertion(Assertion::class(&nis("Agent"), &nis("x")));
    let inf = Inference::new(&kb);
    let report = gap_report(&kb, &inf, &nis("x"), &nis("G")).unwrap();
    assert_eq!(report.rows.len(), 1);
    let query = run_missing_measures_query(&kb, inf.types(), &nis("x"), &nis("G")).unwrap();
    assert!(query.is_empty());
}

#[test]
fn literal_query_ignores_sub_property_evidence() {
    let mut kb = KnowledgeBase::new();
    kb.add_axiom(Axiom::sub_property_of(&nis("adoptNational"), &nis("adopt")))
        .unwrap();
    kb.add_axiom(Axiom::equivalent(
        &nis("Art1-G"),
        ClassExpression::Intersection(vec![
            ClassExpression::some(&nis("adopt"), ClassExpression::named(&nis("Strategy"))),
            ClassExpression::some(&nis("notify"), ClassExpression::named(&nis("Strategy"))),
        ]),
    ))
    .unwrap();
    kb.add_axiom(Axiom::equivalent(
        &nis("G"),
        ClassExpression::Intersection(vec![
            ClassExpression::named(&nis("Agent")),
            ClassExpression::named(&nis("Art1-G")),
        ]),
    ))
    .unwrap();
    let (x, s) = (nis("x"), nis("s"));
    kb.add_assertion(Assertion::class(&nis("Agent"), &x));
    kb.add_assertion(Assertion::class(&nis("Strategy"), &s));
    kb.add_assertion(Assertion::object(&nis("adoptNational"), &x, &s));
    let inf = Inference::new(&kb);
    let engine = report_rows(&gap_report(&kb, &inf, &x, &nis("G")).unwrap().rows);
    let query = run_missing_measures_query(&kb, inf.types(), &x, &nis("G")).unwrap();
    let adopt = (nis("Art1-G"), nis("adopt"), nis("Strategy"));
    assert!(!engine.contains(&adopt));
    assert!(query.contains(&adopt));
}
