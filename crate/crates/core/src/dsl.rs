//! The measure DSL and its compiler into TBox axioms.
//!
//! ```text
//! # comment
//! entity Agent MemberState
//! entity Object NationalCybersecurityStrategy
//! relation cooperateWith
//! article Article7 for MemberState:
//!   adopt NationalCybersecurityStrategy
//! clause NationalCybersecurityStrategy include StrategicObjectives
//! qualify CyberSecurityIncidentResponsePlan SubmissionMonths max 3
//! ```
//!
//! Every article block `(A, G)` compiles to a class `A-G` defined as the
//! conjunction of its `task some object` restrictions, placed under `A` and
//! `NisArticles`. An agent with blocks is defined as `Agent` and all its
//! article-agent classes.

use std::collections::{BTreeMap, BTreeSet};

use crate::kb::{
    vocab, Axiom, ClassExpression, EntityKind, Facet, Iri, KbError, KnowledgeBase, PrefixMap,
    NIS_NS,
};

pub const ACTOR: &str = "Actor";
pub const AGENT: &str = "Agent";
pub const SYSTEM: &str = "System";
pub const NIS_ARTICLES: &str = "NisArticles";

const RESERVED: [&str; 4] = [ACTOR, AGENT, SYSTEM, NIS_ARTICLES];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{name}` is not a declared entity")]
    UndeclaredEntity { line: usize, name: String },
    #[error("line {line}: entity `{name}` is declared twice")]
    DuplicateEntity { line: usize, name: String },
    #[error("line {line}: a block for article `{article}` and agent `{agent}` already exists")]
    DuplicateArticleBlock {
        line: usize,
        article: String,
        agent: String,
    },
    #[error("line {line}: `{name}` is not declared as an Agent")]
    NotAnAgent { line: usize, name: String },
    #[error("line {line}: `{name}` is a reserved name")]
    ReservedName { line: usize, name: String },
    #[error("compiled axioms are inconsistent: {0}")]
    Compile(#[from] KbError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityRole {
    Agent,
    System,
    Object,
}

impl EntityRole {
    fn parse(word: &str) -> Option<Self> {
        match word {
            "Agent" => Some(EntityRole::Agent),
            "System" => Some(EntityRole::System),
            "Object" => Some(EntityRole::Object),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    pub task: Iri,
    pub object: Iri,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArticleBlock {
    pub article: Iri,
    pub agent: Iri,
    pub measures: Vec<Measure>,
}

impl ArticleBlock {
    /// IRI of the `Article-Agent` class this block defines.
    pub fn class(&self) -> Iri {
        article_agent_class(&self.article, &self.agent)
    }
}

pub fn article_agent_class(article: &Iri, agent: &Iri) -> Iri {
    vocab::nis(&format!("{}-{}", article.local_name(), agent.local_name()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub subject: Iri,
    pub verb: Iri,
    pub object: Iri,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qualifier {
    pub class: Iri,
    pub property: Iri,
    pub facet: Facet,
    pub bound: i64,
}

/// Parsed form of a measure file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeasureSet {
    pub entities: Vec<(EntityRole, Iri)>,
    /// Object properties declared with `relation`.
    pub relations: Vec<Iri>,
    pub articles: Vec<ArticleBlock>,
    pub clauses: Vec<Clause>,
    pub qualifiers: Vec<Qualifier>,
}

fn is_name(word: &str) -> bool {
    let mut chars = word.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Source line of each item, kept so validation can point at the input.
#[derive(Default)]
struct Lines {
    entities: Vec<usize>,
    articles: Vec<usize>,
    clauses: Vec<usize>,
    qualifiers: Vec<usize>,
}

struct Parser {
    set: MeasureSet,
    lines: Lines,
    open_block: Option<usize>,
}

pub fn parse_measures(text: &str) -> Result<MeasureSet, DslError> {
    let mut p = Parser {
        set: MeasureSet::default(),
        lines: Lines::default(),
        open_block: None,
    };
    for (idx, raw) in text.lines().enumerate() {
        p.line(idx + 1, raw)?;
    }
    p.close_block()?;
    p.set.check(&p.lines)?;
    Ok(p.set)
}

impl Parser {
    fn name(&self, line: usize, word: &str) -> Result<Iri, DslError> {
        if is_name(word) {
            Ok(vocab::nis(word))
        } else {
            Err(DslError::Syntax {
                line,
                message: format!("`{word}` is not a valid name"),
            })
        }
    }

    fn close_block(&mut self) -> Result<(), DslError> {
        if let Some(i) = self.open_block.take() {
            if self.set.articles[i].measures.is_empty() {
                return Err(DslError::Syntax {
                    line: self.lines.articles[i],
                    message: "article block has no measures".into(),
                });
            }
        }
        Ok(())
    }

    fn line(&mut self, line: usize, raw: &str) -> Result<(), DslError> {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            return Ok(());
        }
        let syntax = |message: String| DslError::Syntax { line, message };
        let words: Vec<&str> = content.split_whitespace().collect();

        if content.starts_with([' ', '\t']) {
            let Some(block) = self.open_block else {
                return Err(syntax("indented line outside an article block".into()));
            };
            let [task, object] = words[..] else {
                return Err(syntax(
                    "measure lines have the form `<verb> <Object>`".into(),
                ));
            };
            let measure = Measure {
                task: self.name(line, task)?,
                object: self.name(line, object)?,
            };
            self.set.articles[block].measures.push(measure);
            return Ok(());
        }

        self.close_block()?;
        match words[0] {
            "entity" => {
                let [_, role, name] = words[..] else {
                    return Err(syntax(
                        "expected `entity <Agent|System|Object> <Name>`".into(),
                    ));
                };
                let role = EntityRole::parse(role).ok_or_else(|| {
                    syntax(format!(
                        "unknown entity kind `{role}`; use Agent, System or Object"
                    ))
                })?;
                let iri = self.name(line, name)?;
                self.set.entities.push((role, iri));
                self.lines.entities.push(line);
            }
            "relation" => {
                let [_, name] = words[..] else {
                    return Err(syntax("expected `relation <name>`".into()));
                };
                let iri = self.name(line, name)?;
                self.set.relations.push(iri);
            }
            "article" => {
                let rest = content
                    .trim()
                    .strip_suffix(':')
                    .ok_or_else(|| syntax("article header must end with `:`".into()))?;
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let ["article", article, "for", agent] = parts[..] else {
                    return Err(syntax("expected `article <Article> for <Agent>:`".into()));
                };
                let block = ArticleBlock {
                    article: self.name(line, article)?,
                    agent: self.name(line, agent)?,
                    measures: Vec::new(),
                };
                self.set.articles.push(block);
                self.lines.articles.push(line);
                self.open_block = Some(self.set.articles.len() - 1);
            }
            "clause" => {
                let [_, subject, verb, object] = words[..] else {
                    return Err(syntax("expected `clause <Subject> <verb> <Object>`".into()));
                };
                let clause = Clause {
                    subject: self.name(line, subject)?,
                    verb: self.name(line, verb)?,
                    object: self.name(line, object)?,
                };
                self.set.clauses.push(clause);
                self.lines.clauses.push(line);
            }
            "qualify" => {
                let [_, class, property, facet, bound] = words[..] else {
                    return Err(syntax(
                        "expected `qualify <Class> <property> <max|min|exact> <integer>`".into(),
                    ));
                };
                let facet = Facet::from_keyword(facet).ok_or_else(|| {
                    syntax(format!("unknown facet `{facet}`; use max, min or exact"))
                })?;
                let bound = bound
                    .parse::<i64>()
                    .map_err(|_| syntax(format!("`{bound}` is not an integer")))?;
                let qualifier = Qualifier {
                    class: self.name(line, class)?,
                    property: self.name(line, property)?,
                    facet,
                    bound,
                };
                self.set.qualifiers.push(qualifier);
                self.lines.qualifiers.push(line);
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
        Ok(())
    }
}

impl MeasureSet {
    /// Checks declaration and uniqueness rules. Errors from sets built in code carry line 0.
    pub fn validate(&self) -> Result<(), DslError> {
        self.check(&Lines::default())
    }

    fn check(&self, lines: &Lines) -> Result<(), DslError> {
        let at = |v: &Vec<usize>, i: usize| v.get(i).copied().unwrap_or(0);
        let mut roles: BTreeMap<&Iri, EntityRole> = BTreeMap::new();
        for (i, (role, iri)) in self.entities.iter().enumerate() {
            let line = at(&lines.entities, i);
            let name = iri.local_name().to_string();
            if RESERVED.contains(&name.as_str()) {
                return Err(DslError::ReservedName { line, name });
            }
            if roles.insert(iri, *role).is_some() {
                return Err(DslError::DuplicateEntity { line, name });
            }
        }
        let declared = |iri: &Iri, line: usize| {
            if roles.contains_key(iri) {
                Ok(())
            } else {
                Err(DslError::UndeclaredEntity {
                    line,
                    name: iri.local_name().to_string(),
                })
            }
        };

        let mut blocks = BTreeSet::new();
        for (i, block) in self.articles.iter().enumerate() {
            let line = at(&lines.articles, i);
            declared(&block.agent, line)?;
            if roles[&block.agent] != EntityRole::Agent {
                return Err(DslError::NotAnAgent {
                    line,
                    name: block.agent.local_name().to_string(),
                });
            }
            if block.measures.is_empty() {
                return Err(DslError::Syntax {
                    line,
                    message: "article block has no measures".into(),
                });
            }
            for name in [&block.article, &block.class()] {
                if roles.contains_key(name) || RESERVED.contains(&name.local_name()) {
                    return Err(DslError::ReservedName {
                        line,
                        name: name.local_name().to_string(),
                    });
                }
            }
            if !blocks.insert((&block.article, &block.agent)) {
                return Err(DslError::DuplicateArticleBlock {
                    line,
                    article: block.article.local_name().to_string(),
                    agent: block.agent.local_name().to_string(),
                });
            }
            for m in &block.measures {
                declared(&m.object, line)?;
            }
        }
        for (i, c) in self.clauses.iter().enumerate() {
            let line = at(&lines.clauses, i);
            declared(&c.subject, line)?;
            declared(&c.object, line)?;
        }
        for (i, q) in self.qualifiers.iter().enumerate() {
            declared(&q.class, at(&lines.qualifiers, i))?;
        }
        Ok(())
    }

    /// Agents that head at least one article block, with their blocks in input order.
    pub fn blocks_by_agent(&self) -> BTreeMap<&Iri, Vec<&ArticleBlock>> {
        let mut out: BTreeMap<&Iri, Vec<&ArticleBlock>> = BTreeMap::new();
        for b in &self.articles {
            out.entry(&b.agent).or_default().push(b);
        }
        out
    }
}

/// Prefix map used by compiled ontologies.
pub fn default_prefixes() -> PrefixMap {
    let mut p = PrefixMap::standard();
    p.insert("nis", NIS_NS);
    p
}

/// Compiles a measure set into a TBox.
pub fn compile(ms: &MeasureSet) -> Result<KnowledgeBase, DslError> {
    ms.validate()?;
    let mut kb = KnowledgeBase::with_prefixes(default_prefixes());
    let named = |s: &str| ClassExpression::Named(vocab::nis(s));
    let actor = vocab::nis(ACTOR);
    let agent = vocab::nis(AGENT);
    let system = vocab::nis(SYSTEM);
    let articles = vocab::nis(NIS_ARTICLES);

    kb.add_axiom(Axiom::sub_class_of(&agent, ClassExpression::named(&actor)))?;
    kb.add_axiom(Axiom::sub_class_of(&system, ClassExpression::named(&actor)))?;
    kb.add_axiom(Axiom::declaration(EntityKind::Class, &articles))?;

    let by_agent = ms.blocks_by_agent();
    for (role, iri) in &ms.entities {
        kb.add_axiom(Axiom::declaration(EntityKind::Class, iri))?;
        match role {
            EntityRole::System => {
                kb.add_axiom(Axiom::sub_class_of(iri, named(SYSTEM)))?;
            }
            EntityRole::Agent if !by_agent.contains_key(iri) => {
                kb.add_axiom(Axiom::sub_class_of(iri, named(AGENT)))?;
            }
            _ => {}
        }
    }
    for r in &ms.relations {
        kb.add_axiom(Axiom::declaration(EntityKind::ObjectProperty, r))?;
    }

    for block in &ms.articles {
        let class = block.class();
        let restrictions = block
            .measures
            .iter()
            .map(|m| ClassExpression::some(&m.task, ClassExpression::named(&m.object)))
            .collect();
        kb.add_axiom(Axiom::equivalent(
            &class,
            ClassExpression::Intersection(restrictions),
        ))?;
        kb.add_axiom(Axiom::sub_class_of(
            &class,
            ClassExpression::named(&block.article),
        ))?;
        kb.add_axiom(Axiom::sub_class_of(
            &block.article,
            ClassExpression::named(&articles),
        ))?;
    }
    for (g, blocks) in &by_agent {
        let mut conjuncts = vec![ClassExpression::named(&agent)];
        conjuncts.extend(blocks.iter().map(|b| ClassExpression::Named(b.class())));
        kb.add_axiom(Axiom::equivalent(
            g,
            ClassExpression::Intersection(conjuncts),
        ))?;
    }
    for c in &ms.clauses {
        kb.add_axiom(Axiom::sub_class_of(
            &c.subject,
            ClassExpression::some(&c.verb, ClassExpression::named(&c.object)),
        ))?;
    }
    for q in &ms.qualifiers {
        kb.add_axiom(Axiom::sub_class_of(
            &q.class,
            ClassExpression::facet(&q.property, q.facet, q.bound),
        ))?;
    }
    Ok(kb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nis(s: &str) -> Iri {
        vocab::nis(s)
    }

    fn some(p: &str, o: &str) -> ClassExpression {
        ClassExpression::some(&nis(p), ClassExpression::named(&nis(o)))
    }

    #[test]
    fn parses_entity_and_block() {
        let ms = parse_measures(
            "entity Agent MemberState\nentity Object NationalCybersecurityStrategy\narticle Article7 for MemberState:\n  adopt NationalCybersecurityStrategy\n",
        )
        .unwrap();
        assert_eq!(ms.entities.len(), 2);
        assert_eq!(ms.articles.len(), 1);
        assert_eq!(
            ms.articles[0].measures,
            vec![Measure {
                task: nis("adopt"),
                object: nis("NationalCybersecurityStrategy")
            }]
        );
    }

    #[test]
    fn parses_clause_and_qualifier() {
        let ms = parse_measures(
            "entity Object NationalCybersecurityStrategy\nentity Object StrategicObjectives\n\
             entity Object CyberSecurityIncidentResponsePlan\n\
             clause NationalCybersecurityStrategy include StrategicObjectives  # split sentence\n\
             qualify CyberSecurityIncidentResponsePlan SubmissionMonths max 3\n",
        )
        .unwrap();
        assert_eq!(ms.clauses.len(), 1);
        assert_eq!(ms.clauses[0].verb, nis("include"));
        assert_eq!(
            ms.qualifiers,
            vec![Qualifier {
                class: nis("CyberSecurityIncidentResponsePlan"),
                property: nis("SubmissionMonths"),
                facet: Facet::MaxInclusive,
                bound: 3
            }]
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases: [(&str, fn(&DslError) -> bool); 8] = [
            ("article X for UndeclaredAgent:\n  adopt Y\n", |e| {
                matches!(e, DslError::UndeclaredEntity { line: 1, name } if name == "UndeclaredAgent")
            }),
            ("entity Agent A\nentity Object O\narticle X for A:\n  do O\narticle X for A:\n  do O\n", |e| {
                matches!(e, DslError::DuplicateArticleBlock { line: 5, .. })
            }),
            ("entity Agent A\nentity Object A\n", |e| matches!(e, DslError::DuplicateEntity { line: 2, .. })),
            ("entity Agent A\narticle X for A:\nentity Object O\n", |e| {
                matches!(e, DslError::Syntax { line: 2, .. })
            }),
            ("  adopt Thing\n", |e| matches!(e, DslError::Syntax { line: 1, .. })),
            ("entity Object O\narticle X for O:\n  do O\n", |e| matches!(e, DslError::NotAnAgent { line: 2, .. })),
            ("entity Agent Agent\n", |e| matches!(e, DslError::ReservedName { line: 1, .. })),
            ("\n\nqualify C p max three\n", |e| matches!(e, DslError::Syntax { line: 3, .. })),
        ];
        for (src, check) in cases {
            let err = parse_measures(src).unwrap_err();
            assert!(check(&err), "{src:?} -> {err:?}");
        }
    }

    #[test]
    fn article10_block_compiles_to_intersection() {
        let ms = parse_measures(
            "entity Agent MemberState\nentity Agent CSIRT\n\
             article Article10 for MemberState:\n  designate CSIRT\n  ensureReportingVulnerabilityTo CSIRT\n",
        )
        .unwrap();
        let kb = compile(&ms).unwrap();
        assert_eq!(
            kb.definition(&nis("Article10-MemberState")),
            Some(
                &ClassExpression::Intersection(vec![
                    some("designate", "CSIRT"),
                    some("ensureReportingVulnerabilityTo", "CSIRT")
                ])
                .normalize()
            )
        );
        assert!(kb.contains_axiom(&Axiom::sub_class_of(
            &nis("Article10-MemberState"),
            ClassExpression::named(&nis("Article10"))
        )));
        assert!(kb.contains_axiom(&Axiom::sub_class_of(
            &nis("Article10"),
            ClassExpression::named(&nis("NisArticles"))
        )));
        // CSIRT has no block of its own
        assert!(kb.contains_axiom(&Axiom::sub_class_of(
            &nis("CSIRT"),
            ClassExpression::named(&nis("Agent"))
        )));
    }

    #[test]
    fn agent_definition_conjoins_its_articles() {
        let ms = parse_measures(
            "entity Agent MemberState\nentity Object S\n\
             article Article7 for MemberState:\n  adopt S\n\
             article Article10 for MemberState:\n  designate S\n",
        )
        .unwrap();
        let kb = compile(&ms).unwrap();
        let expected = ClassExpression::Intersection(vec![
            ClassExpression::named(&nis("Agent")),
            ClassExpression::named(&nis("Article7-MemberState")),
            ClassExpression::named(&nis("Article10-MemberState")),
        ]);
        assert_eq!(
            kb.definition(&nis("MemberState")),
            Some(&expected.normalize())
        );
        // a single measure is a bare restriction
        assert_eq!(
            kb.definition(&nis("Article7-MemberState")),
            Some(&some("adopt", "S"))
        );
    }

    #[test]
    fn empty_set_compiles_to_scaffold() {
        let kb = compile(&parse_measures("# nothing\n").unwrap()).unwrap();
        let classes: Vec<_> = kb.classes().map(|c| c.local_name().to_string()).collect();
        assert_eq!(classes, ["Actor", "Agent", "NisArticles", "System"]);
        let subclass_axioms = kb
            .axioms()
            .filter(|a| matches!(a, Axiom::SubClassOf { .. }))
            .count();
        assert_eq!(subclass_axioms, 2);
        assert_eq!(kb.definitions().count(), 0);
    }

    #[test]
    fn system_entities_sit_under_system() {
        let kb = compile(&parse_measures("entity System SearchEngine\nrelation manage\n").unwrap())
            .unwrap();
        assert!(kb.contains_axiom(&Axiom::sub_class_of(
            &nis("SearchEngine"),
            ClassExpression::named(&nis("System"))
        )));
        assert!(kb.is_declared(&nis("manage"), EntityKind::ObjectProperty));
    }

    #[test]
    fn compile_is_deterministic() {
        let src =
            "entity Agent G\nentity Object O\nentity Object P\narticle A for G:\n  t O\n  u P\n";
        let ms = parse_measures(src).unwrap();
        assert_eq!(compile(&ms).unwrap(), compile(&ms).unwrap());
    }
}
