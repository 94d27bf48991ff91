//! Gap analysis: which measures of a target agent class an individual is missing.
//!
//! [`gap_analysis`] is the engine form. [`match_patterns`] evaluates a small
//! conjunctive triple-pattern query (with `rdf:rest*` and one MINUS group) so
//! the same question can be asked literally over the RDF view, see
//! [`missing_measures_query`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::kb::{vocab, ClassExpression, Facet, Iri, KnowledgeBase, PrefixMap, Term, Triple};
use crate::reasoner::{Inference, ReasonerError, SubsumptionMap, TypeMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GapError {
    #[error("target {0:?} has no equivalent-class definition")]
    UndefinedTarget(Iri),
    #[error("unknown individual {0:?}")]
    UnknownIndividual(Iri),
    #[error("unsupported query feature: {0}")]
    UnsupportedFeature(String),
}

impl From<ReasonerError> for GapError {
    fn from(e: ReasonerError) -> Self {
        match e {
            ReasonerError::UnknownIndividual(i) => GapError::UnknownIndividual(i),
        }
    }
}

/// Object column of a gap row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GapObject {
    /// Filler of an existential measure; a named class in compiled directives.
    Class(ClassExpression),
    /// Bound of a data facet measure.
    Facet { facet: Facet, bound: i64 },
}

impl GapObject {
    pub fn render(&self, prefixes: &PrefixMap) -> String {
        match self {
            GapObject::Class(c) => render_expression(c, prefixes),
            GapObject::Facet { facet, bound } => format!("{} {bound}", facet.keyword()),
        }
    }

    pub fn as_class(&self) -> Option<&Iri> {
        match self {
            GapObject::Class(ClassExpression::Named(c)) => Some(c),
            _ => None,
        }
    }
}

fn render_expression(expr: &ClassExpression, prefixes: &PrefixMap) -> String {
    match expr {
        ClassExpression::Named(c) => prefixes.compact(c),
        ClassExpression::Intersection(cs) => {
            let parts: Vec<String> = cs.iter().map(|c| render_expression(c, prefixes)).collect();
            format!("({})", parts.join(" and "))
        }
        ClassExpression::ObjectSome { property, filler } => {
            format!(
                "({} some {})",
                prefixes.compact(property),
                render_expression(filler, prefixes)
            )
        }
        ClassExpression::DataFacet {
            property,
            facet,
            bound,
        } => {
            format!(
                "({} {} {bound})",
                prefixes.compact(property),
                facet.keyword()
            )
        }
    }
}

/// One measure: the article class requiring it, the task property and its object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GapRow {
    pub article: Iri,
    pub task: Iri,
    pub object: GapObject,
}

impl GapRow {
    /// The measure as a class expression.
    pub fn restriction(&self) -> ClassExpression {
        match &self.object {
            GapObject::Class(c) => ClassExpression::some(&self.task, c.clone()),
            GapObject::Facet { facet, bound } => ClassExpression::facet(&self.task, *facet, *bound),
        }
    }
}

impl fmt::Display for GapRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let object = self.object.render(&PrefixMap::empty());
        write!(f, "{} | {} | {}", self.article, self.task, object)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub individual: Iri,
    pub target: Iri,
    /// Defined classes the individual is inferred to belong to.
    pub compliant: BTreeSet<Iri>,
    /// Missing measures, sorted.
    pub rows: Vec<GapRow>,
    /// Measures already met, sorted.
    pub satisfied: Vec<GapRow>,
}

impl GapReport {
    pub fn is_compliant(&self) -> bool {
        self.rows.is_empty()
    }
}

/// The measures required by `target`: for each named conjunct of its definition
/// that is itself defined, every existential or facet conjunct of that definition.
pub fn required_measures(kb: &KnowledgeBase, target: &Iri) -> Result<Vec<GapRow>, GapError> {
    let definition = kb
        .definition(target)
        .ok_or_else(|| GapError::UndefinedTarget(target.clone()))?;
    let mut rows = BTreeSet::new();
    for conjunct in definition.conjuncts() {
        let ClassExpression::Named(article) = conjunct else {
            continue;
        };
        let Some(article_def) = kb.definition(article) else {
            continue;
        };
        for measure in article_def.conjuncts() {
            let (task, object) = match measure {
                ClassExpression::ObjectSome { property, filler } => {
                    (property, GapObject::Class((**filler).clone()))
                }
                ClassExpression::DataFacet {
                    property,
                    facet,
                    bound,
                } => (
                    property,
                    GapObject::Facet {
                        facet: *facet,
                        bound: *bound,
                    },
                ),
                _ => continue,
            };
            rows.insert(GapRow {
                article: article.clone(),
                task: task.clone(),
                object,
            });
        }
    }
    Ok(rows.into_iter().collect())
}

/// Gap report against a precomputed [`Inference`] for `kb`.
pub fn gap_report(
    kb: &KnowledgeBase,
    inference: &Inference,
    individual: &Iri,
    target: &Iri,
) -> Result<GapReport, GapError> {
    let required = required_measures(kb, target)?;
    if !inference.is_individual(individual) {
        return Err(GapError::UnknownIndividual(individual.clone()));
    }
    let (mut rows, mut satisfied) = (Vec::new(), Vec::new());
    for row in required {
        if inference.entails_instance(individual, &row.restriction())? {
            satisfied.push(row);
        } else {
            rows.push(row);
        }
    }
    let compliant = inference
        .types()
        .types_of(individual)
        .into_iter()
        .flatten()
        .filter(|c| kb.definition(c).is_some())
        .cloned()
        .collect();
    Ok(GapReport {
        individual: individual.clone(),
        target: target.clone(),
        compliant,
        rows,
        satisfied,
    })
}

/// Realizes `kb` under `subs` and reports the measures of `target` that `individual` lacks.
pub fn gap_analysis(
    kb: &KnowledgeBase,
    subs: &SubsumptionMap,
    individual: &Iri,
    target: &Iri,
) -> Result<GapReport, GapError> {
    let inference = Inference::with_subsumption(kb, subs.clone());
    gap_report(kb, &inference, individual, target)
}

/// A variable or a ground term in a pattern position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(String),
    Ground(Term),
}

impl PatternTerm {
    pub fn var(name: &str) -> Self {
        PatternTerm::Var(name.to_string())
    }

    pub fn iri(iri: &Iri) -> Self {
        PatternTerm::Ground(Term::iri(iri))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PatternPredicate {
    Var(String),
    Iri(Iri),
    /// `p*`: zero or more steps. Only `rdf:rest` is supported.
    ZeroOrMore(Iri),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternPredicate,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternPredicate, object: PatternTerm) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    fn variables(&self) -> impl Iterator<Item = &str> {
        let p = match &self.predicate {
            PatternPredicate::Var(v) => Some(v.as_str()),
            _ => None,
        };
        [&self.subject, &self.object]
            .into_iter()
            .filter_map(|t| match t {
                PatternTerm::Var(v) => Some(v.as_str()),
                PatternTerm::Ground(_) => None,
            })
            .chain(p)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Query {
    pub select: Vec<String>,
    pub patterns: Vec<TriplePattern>,
    pub minus: Option<Vec<TriplePattern>>,
}

type Binding = HashMap<String, Term>;

struct Graph<'a> {
    all: Vec<&'a Triple>,
    by_subject: HashMap<&'a Term, Vec<&'a Triple>>,
    by_object: HashMap<&'a Term, Vec<&'a Triple>>,
    by_predicate: HashMap<&'a Iri, Vec<&'a Triple>>,
}

impl<'a> Graph<'a> {
    fn new(triples: impl IntoIterator<Item = &'a Triple>) -> Self {
        let mut g = Graph {
            all: Vec::new(),
            by_subject: HashMap::new(),
            by_object: HashMap::new(),
            by_predicate: HashMap::new(),
        };
        for t in triples {
            g.all.push(t);
            g.by_subject.entry(&t.subject).or_default().push(t);
            g.by_object.entry(&t.object).or_default().push(t);
            g.by_predicate.entry(&t.predicate).or_default().push(t);
        }
        g
    }

    fn nodes(&self) -> BTreeSet<&'a Term> {
        self.all
            .iter()
            .flat_map(|t| [&t.subject, &t.object])
            .collect()
    }

    /// Nodes reachable from `start` by zero or more `p` steps, forwards or backwards.
    fn closure(&self, start: &Term, p: &Iri, forward: bool) -> BTreeSet<Term> {
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        let index = if forward {
            &self.by_subject
        } else {
            &self.by_object
        };
        while let Some(n) = queue.pop_front() {
            for t in index.get(&n).into_iter().flatten() {
                if &t.predicate != p {
                    continue;
                }
                let next = if forward { &t.object } else { &t.subject };
                if seen.insert(next.clone()) {
                    queue.push_back(next.clone());
                }
            }
        }
        seen
    }
}

fn resolve<'b>(term: &'b PatternTerm, binding: &'b Binding) -> Option<&'b Term> {
    match term {
        PatternTerm::Ground(t) => Some(t),
        PatternTerm::Var(v) => binding.get(v),
    }
}

/// Extends `binding` with `var = value`; false on a conflicting binding.
fn bind(binding: &mut Binding, term: &PatternTerm, value: &Term) -> bool {
    match term {
        PatternTerm::Ground(t) => t == value,
        PatternTerm::Var(v) => match binding.get(v) {
            Some(old) => old == value,
            None => {
                binding.insert(v.clone(), value.clone());
                true
            }
        },
    }
}

fn extend(graph: &Graph<'_>, pattern: &TriplePattern, binding: &Binding, out: &mut Vec<Binding>) {
    let s = resolve(&pattern.subject, binding).cloned();
    let o = resolve(&pattern.object, binding).cloned();
    match &pattern.predicate {
        PatternPredicate::ZeroOrMore(p) => {
            let pairs: Vec<(Term, Term)> = match (&s, &o) {
                (Some(s), _) => graph
                    .closure(s, p, true)
                    .into_iter()
                    .map(|n| (s.clone(), n))
                    .collect(),
                (None, Some(o)) => graph
                    .closure(o, p, false)
                    .into_iter()
                    .map(|n| (n, o.clone()))
                    .collect(),
                (None, None) => graph
                    .nodes()
                    .into_iter()
                    .flat_map(|s| {
                        graph
                            .closure(s, p, true)
                            .into_iter()
                            .map(move |n| (s.clone(), n))
                    })
                    .collect(),
            };
            for (from, to) in pairs {
                let mut b = binding.clone();
                if bind(&mut b, &pattern.subject, &from) && bind(&mut b, &pattern.object, &to) {
                    out.push(b);
                }
            }
        }
        predicate => {
            let fixed = match predicate {
                PatternPredicate::Iri(p) => Some(p.clone()),
                PatternPredicate::Var(v) => binding.get(v).and_then(|t| t.as_iri().cloned()),
                PatternPredicate::ZeroOrMore(_) => unreachable!(),
            };
            let candidates: &[&Triple] = if let Some(s) = &s {
                graph.by_subject.get(s).map_or(&[], Vec::as_slice)
            } else if let Some(o) = &o {
                graph.by_object.get(o).map_or(&[], Vec::as_slice)
            } else if let Some(p) = &fixed {
                graph.by_predicate.get(p).map_or(&[], Vec::as_slice)
            } else {
                &graph.all
            };
            for t in candidates {
                if fixed.as_ref().is_some_and(|p| *p != t.predicate) {
                    continue;
                }
                let mut b = binding.clone();
                let predicate_ok = match &pattern.predicate {
                    PatternPredicate::Var(v) => bind(
                        &mut b,
                        &PatternTerm::Var(v.clone()),
                        &Term::iri(&t.predicate),
                    ),
                    _ => true,
                };
                if predicate_ok
                    && bind(&mut b, &pattern.subject, &t.subject)
                    && bind(&mut b, &pattern.object, &t.object)
                {
                    out.push(b);
                }
            }
        }
    }
}

fn evaluate(graph: &Graph<'_>, patterns: &[TriplePattern]) -> Vec<Binding> {
    let mut solutions = vec![Binding::new()];
    for pattern in patterns {
        let mut next = Vec::new();
        for b in &solutions {
            extend(graph, pattern, b, &mut next);
        }
        solutions = next;
        if solutions.is_empty() {
            break;
        }
    }
    solutions
}

fn check_supported(patterns: &[TriplePattern]) -> Result<(), GapError> {
    for p in patterns {
        if let PatternPredicate::ZeroOrMore(path) = &p.predicate {
            if *path != *vocab::RDF_REST {
                return Err(GapError::UnsupportedFeature(format!(
                    "path `<{path}>*`; only rdf:rest* is supported"
                )));
            }
        }
        for t in [&p.subject, &p.object] {
            if let PatternTerm::Ground(Term::Blank(_)) = t {
                return Err(GapError::UnsupportedFeature(
                    "blank node in a pattern; use a variable".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Evaluates `query` over `triples` and returns the selected values of each
/// solution, in `query.select` order, sorted.
pub fn match_patterns<'a>(
    triples: impl IntoIterator<Item = &'a Triple>,
    query: &Query,
) -> Result<Vec<Vec<Term>>, GapError> {
    check_supported(&query.patterns)?;
    if let Some(minus) = &query.minus {
        check_supported(minus)?;
    }
    let bound: HashSet<&str> = query
        .patterns
        .iter()
        .flat_map(TriplePattern::variables)
        .collect();
    if let Some(v) = query.select.iter().find(|v| !bound.contains(v.as_str())) {
        return Err(GapError::UnsupportedFeature(format!(
            "selected variable ?{v} is never bound"
        )));
    }

    let graph = Graph::new(triples);
    let mut solutions = evaluate(&graph, &query.patterns);
    if let Some(minus) = &query.minus {
        let removed = evaluate(&graph, minus);
        solutions.retain(|s| {
            !removed.iter().any(|r| {
                let mut shared = r.keys().filter(|k| s.contains_key(*k)).peekable();
                shared.peek().is_some() && r.iter().all(|(k, v)| s.get(k).is_none_or(|w| w == v))
            })
        });
    }
    let mut rows: Vec<Vec<Term>> = solutions
        .into_iter()
        .map(|s| query.select.iter().map(|v| s[v].clone()).collect())
        .collect();
    rows.sort();
    Ok(rows)
}

/// The missing-measures query: article, task and object of every existential
/// measure of `target`'s articles that `individual` has no matching edge for.
///
/// Only articles defined by an intersection are reached, and `?task` must be
/// the asserted property itself.
pub fn missing_measures_query(target: &Iri, individual: &Iri) -> Query {
    use PatternPredicate as P;
    use PatternTerm as T;
    let v = T::var;
    let iri = |i: &Iri| P::Iri(i.clone());
    let rest = P::ZeroOrMore(vocab::RDF_REST.clone());
    let eq = iri(&vocab::OWL_EQUIVALENT_CLASS);
    let and = iri(&vocab::OWL_INTERSECTION_OF);
    let first = iri(&vocab::RDF_FIRST);
    Query {
        select: vec!["article".into(), "task".into(), "obj".into()],
        patterns: vec![
            TriplePattern::new(T::iri(target), eq.clone(), v("a")),
            TriplePattern::new(v("a"), and.clone(), v("b")),
            TriplePattern::new(v("b"), rest.clone(), v("c")),
            TriplePattern::new(v("c"), first.clone(), v("article")),
            TriplePattern::new(v("article"), eq, v("e")),
            TriplePattern::new(v("e"), and, v("f")),
            TriplePattern::new(v("f"), rest, v("t")),
            TriplePattern::new(v("t"), first, v("s")),
            TriplePattern::new(v("s"), iri(&vocab::OWL_ON_PROPERTY), v("task")),
            TriplePattern::new(v("s"), iri(&vocab::OWL_SOME_VALUES_FROM), v("obj")),
        ],
        minus: Some(vec![
            TriplePattern::new(T::iri(individual), P::Var("task".into()), v("objInd")),
            TriplePattern::new(v("objInd"), iri(&vocab::RDF_TYPE), v("obj")),
        ]),
    }
}

/// `(individual, rdf:type, class)` for every inferred membership.
pub fn type_triples(types: &TypeMap) -> BTreeSet<Triple> {
    types
        .iter()
        .flat_map(|(ind, classes)| {
            classes
                .iter()
                .map(move |c| Triple::new(Term::iri(ind), &vocab::RDF_TYPE, Term::iri(c)))
        })
        .collect()
}

/// Rows of the missing-measures query as (article, task, object) IRIs.
pub fn query_rows(rows: &[Vec<Term>]) -> BTreeSet<(Iri, Iri, Iri)> {
    rows.iter()
        .filter_map(|r| match r.as_slice() {
            [Term::Iri(a), Term::Iri(t), Term::Iri(o)] => Some((a.clone(), t.clone(), o.clone())),
            _ => None,
        })
        .collect()
}

/// Gap rows with a named object, in the shape of [`query_rows`].
pub fn report_rows(rows: &[GapRow]) -> BTreeSet<(Iri, Iri, Iri)> {
    rows.iter()
        .filter_map(|r| {
            r.object
                .as_class()
                .map(|o| (r.article.clone(), r.task.clone(), o.clone()))
        })
        .collect()
}

/// Runs the missing-measures query over the RDF view plus inferred types.
pub fn run_missing_measures_query(
    kb: &KnowledgeBase,
    types: &TypeMap,
    individual: &Iri,
    target: &Iri,
) -> Result<BTreeSet<(Iri, Iri, Iri)>, GapError> {
    let mut graph = crate::kb::rdf_view(kb);
    graph.extend(type_triples(types));
    let rows = match_patterns(&graph, &missing_measures_query(target, individual))?;
    Ok(query_rows(&rows))
}

/// Groups rows by article, for presentation.
pub fn rows_by_article(rows: &[GapRow]) -> BTreeMap<&Iri, Vec<&GapRow>> {
    let mut out: BTreeMap<&Iri, Vec<&GapRow>> = BTreeMap::new();
    for r in rows {
        out.entry(&r.article).or_default().push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::{Assertion, Axiom};
    use crate::reasoner::classify;

    fn nis(s: &str) -> Iri {
        vocab::nis(s)
    }

    fn named(s: &str) -> ClassExpression {
        ClassExpression::named(&nis(s))
    }

    fn some(p: &str, o: &str) -> ClassExpression {
        ClassExpression::some(&nis(p), named(o))
    }

    fn member_state_kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.add_axiom(Axiom::equivalent(
            &nis("Article7-MemberState"),
            ClassExpression::Intersection(vec![
                some("adopt", "NationalCybersecurityStrategy"),
                some("notify", "NationalCybersecurityStrategy"),
            ]),
        ))
        .unwrap();
        kb.add_axiom(Axiom::equivalent(
            &nis("Article10-MemberState"),
            ClassExpression::Intersection(vec![
                some("designate", "CSIRT"),
                some("ensureReportingVulnerabilityTo", "CSIRT"),
            ]),
        ))
        .unwrap();
        kb.add_axiom(Axiom::equivalent(
            &nis("MemberState"),
            ClassExpression::Intersection(vec![
                named("Agent"),
                named("Article7-MemberState"),
                named("Article10-MemberState"),
            ]),
        ))
        .unwrap();
        let (i3, s) = (nis("individual3"), nis("strategy"));
        kb.add_assertion(Assertion::class(&nis("Agent"), &i3));
        kb.add_assertion(Assertion::class(&nis("NationalCybersecurityStrategy"), &s));
        kb.add_assertion(Assertion::object(&nis("adopt"), &i3, &s));
        kb.add_assertion(Assertion::object(&nis("notify"), &i3, &s));
        kb
    }

    fn article10_gaps() -> BTreeSet<(Iri, Iri, Iri)> {
        ["designate", "ensureReportingVulnerabilityTo"]
            .into_iter()
            .map(|t| (nis("Article10-MemberState"), nis(t), nis("CSIRT")))
            .collect()
    }

    #[test]
    fn engine_reports_missing_article() {
        let kb = member_state_kb();
        let report = gap_analysis(
            &kb,
            &classify(&kb),
            &nis("individual3"),
            &nis("MemberState"),
        )
        .unwrap();
        assert_eq!(report_rows(&report.rows), article10_gaps());
        assert_eq!(report.satisfied.len(), 2);
        assert_eq!(
            report.compliant,
            BTreeSet::from([nis("Article7-MemberState")])
        );
        assert!(!report.is_compliant());
    }

    #[test]
    fn literal_query_agrees() {
        let kb = member_state_kb();
        let inf = Inference::new(&kb);
        let rows =
            run_missing_measures_query(&kb, inf.types(), &nis("individual3"), &nis("MemberState"))
                .unwrap();
        assert_eq!(rows, article10_gaps());
    }

    #[test]
    fn gap_errors() {
        let kb = member_state_kb();
        let subs = classify(&kb);
        assert_eq!(
            gap_analysis(&kb, &subs, &nis("individual3"), &nis("Agent")),
            Err(GapError::UndefinedTarget(nis("Agent")))
        );
        assert_eq!(
            gap_analysis(&kb, &subs, &nis("ghost"), &nis("MemberState")),
            Err(GapError::UnknownIndividual(nis("ghost")))
        );
    }

    #[test]
    fn facet_measures_are_rendered() {
        let mut kb = KnowledgeBase::new();
        let months = nis("SubmissionMonths");
        kb.add_axiom(Axiom::equivalent(
            &nis("Timely"),
            ClassExpression::Intersection(vec![
                ClassExpression::facet(&months, Facet::MaxInclusive, 3),
                some("submit", "Plan"),
            ]),
        ))
        .unwrap();
        kb.add_axiom(Axiom::equivalent(
            &nis("Target"),
            ClassExpression::Intersection(vec![named("Agent"), named("Timely")]),
        ))
        .unwrap();
        kb.add_assertion(Assertion::data(&months, &nis("x"), 5));
        let report = gap_analysis(&kb, &classify(&kb), &nis("x"), &nis("Target")).unwrap();
        assert_eq!(report.rows.len(), 2);
        let facet = report.rows.iter().find(|r| r.task == months).unwrap();
        assert_eq!(facet.object.render(kb.prefixes()), "max 3");
    }

    fn list_graph() -> BTreeSet<Triple> {
        let cell = |n| Term::Blank(n);
        let mut g = BTreeSet::new();
        for n in 0..3u32 {
            g.insert(Triple::new(
                cell(n),
                &vocab::RDF_FIRST,
                Term::iri(&nis(&format!("x{n}"))),
            ));
            let next = if n == 2 {
                Term::iri(&vocab::RDF_NIL)
            } else {
                cell(n + 1)
            };
            g.insert(Triple::new(cell(n), &vocab::RDF_REST, next));
        }
        g.insert(Triple::new(Term::iri(&nis("head")), &nis("list"), cell(0)));
        g
    }

    #[test]
    fn single_pattern() {
        let g: BTreeSet<Triple> = [
            Triple::new(
                Term::iri(&nis("a")),
                &vocab::RDF_TYPE,
                Term::iri(&nis("Agent")),
            ),
            Triple::new(
                Term::iri(&nis("b")),
                &vocab::RDF_TYPE,
                Term::iri(&nis("System")),
            ),
            Triple::new(Term::iri(&nis("a")), &nis("adopt"), Term::iri(&nis("b"))),
        ]
        .into();
        let q = Query {
            select: vec!["s".into()],
            patterns: vec![TriplePattern::new(
                PatternTerm::var("s"),
                PatternPredicate::Iri(vocab::RDF_TYPE.clone()),
                PatternTerm::iri(&nis("Agent")),
            )],
            minus: None,
        };
        assert_eq!(
            match_patterns(&g, &q).unwrap(),
            vec![vec![Term::iri(&nis("a"))]]
        );
    }

    #[test]
    fn rest_star_reaches_every_tail() {
        let g = list_graph();
        let q = Query {
            select: vec!["c".into()],
            patterns: vec![
                TriplePattern::new(
                    PatternTerm::iri(&nis("head")),
                    PatternPredicate::Iri(nis("list")),
                    PatternTerm::var("b"),
                ),
                TriplePattern::new(
                    PatternTerm::var("b"),
                    PatternPredicate::ZeroOrMore(vocab::RDF_REST.clone()),
                    PatternTerm::var("c"),
                ),
            ],
            minus: None,
        };
        let rows = match_patterns(&g, &q).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.contains(&vec![Term::iri(&vocab::RDF_NIL)]));

        // Unbound on both sides: every node pairs with itself at least.
        let q = Query {
            select: vec!["x".into(), "y".into()],
            patterns: vec![TriplePattern::new(
                PatternTerm::var("x"),
                PatternPredicate::ZeroOrMore(vocab::RDF_REST.clone()),
                PatternTerm::var("y"),
            )],
            minus: None,
        };
        let rows = match_patterns(&g, &q).unwrap();
        assert!(rows.contains(&vec![Term::Blank(0), Term::iri(&vocab::RDF_NIL)]));
        assert!(rows.contains(&vec![Term::iri(&nis("x1")), Term::iri(&nis("x1"))]));
    }

    #[test]
    fn minus_needs_shared_variables() {
        let g: BTreeSet<Triple> = [
            Triple::new(
                Term::iri(&nis("a")),
                &vocab::RDF_TYPE,
                Term::iri(&nis("Agent")),
            ),
            Triple::new(
                Term::iri(&nis("b")),
                &vocab::RDF_TYPE,
                Term::iri(&nis("Agent")),
            ),
            Triple::new(Term::iri(&nis("a")), &nis("adopt"), Term::iri(&nis("s"))),
        ]
        .into();
        let agents = vec![TriplePattern::new(
            PatternTerm::var("x"),
            PatternPredicate::Iri(vocab::RDF_TYPE.clone()),
            PatternTerm::iri(&nis("Agent")),
        )];
        let adopters = vec![TriplePattern::new(
            PatternTerm::var("x"),
            PatternPredicate::Iri(nis("adopt")),
            PatternTerm::var("y"),
        )];
        let q = Query {
            select: vec!["x".into()],
            patterns: agents.clone(),
            minus: Some(adopters),
        };
        assert_eq!(
            match_patterns(&g, &q).unwrap(),
            vec![vec![Term::iri(&nis("b"))]]
        );

        // No shared variable: MINUS removes nothing.
        let disjoint = vec![TriplePattern::new(
            PatternTerm::var("p"),
            PatternPredicate::Iri(nis("adopt")),
            PatternTerm::var("q"),
        )];
        let q = Query {
            select: vec!["x".into()],
            patterns: agents,
            minus: Some(disjoint),
        };
        assert_eq!(match_patterns(&g, &q).unwrap().len(), 2);
    }

    #[test]
    fn unsupported_paths_are_rejected() {
        let q = Query {
            select: vec!["y".into()],
            patterns: vec![TriplePattern::new(
                PatternTerm::var("x"),
                PatternPredicate::ZeroOrMore(vocab::RDFS_SUBCLASS_OF.clone()),
                PatternTerm::var("y"),
            )],
            minus: None,
        };
        assert!(matches!(
            match_patterns(&BTreeSet::new(), &q),
            Err(GapError::UnsupportedFeature(_))
        ));
        let q = Query {
            select: vec!["z".into()],
            patterns: vec![],
            minus: None,
        };
        assert!(matches!(
            match_patterns(&BTreeSet::new(), &q),
            Err(GapError::UnsupportedFeature(_))
        ));
    }
}
