//! Seeded random inputs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use nis_core::dsl::{self, MeasureSet};
use nis_core::kb::{vocab, Assertion, Axiom, ClassExpression, Facet, Iri, KnowledgeBase};

const FACETS: [Facet; 3] = [Facet::MaxInclusive, Facet::MinInclusive, Facet::Exact];

/// Size limits for [`random_kb`].
#[derive(Clone, Copy, Debug)]
pub struct KbShape {
    pub max_classes: usize,
    pub max_properties: usize,
    pub max_individuals: usize,
    pub max_depth: usize,
}

impl Default for KbShape {
    fn default() -> Self {
        KbShape {
            max_classes: 8,
            max_properties: 4,
            max_individuals: 6,
            max_depth: 2,
        }
    }
}

/// Vocabulary of a random KB.
#[derive(Clone, Debug)]
pub struct Signature {
    pub classes: Vec<Iri>,
    pub object_properties: Vec<Iri>,
    pub data_property: Option<Iri>,
    pub individuals: Vec<Iri>,
}

impl Signature {
    fn random(rng: &mut impl Rng, shape: &KbShape) -> Self {
        let n_classes = rng.gen_range(1..=shape.max_classes);
        let n_props = rng.gen_range(1..=shape.max_properties);
        let with_data = n_props >= 2 && rng.gen_bool(0.5);
        let n_obj = if with_data { n_props - 1 } else { n_props };
        Signature {
            classes: (0..n_classes)
                .map(|i| vocab::nis(&format!("C{i}")))
                .collect(),
            object_properties: (0..n_obj).map(|i| vocab::nis(&format!("p{i}"))).collect(),
            data_property: with_data.then(|| vocab::nis("d0")),
            individuals: (0..rng.gen_range(1..=shape.max_individuals))
                .map(|i| vocab::nis(&format!("i{i}")))
                .collect(),
        }
    }

    fn class(&self, rng: &mut impl Rng) -> Iri {
        self.classes.choose(rng).unwrap().clone()
    }

    fn property(&self, rng: &mut impl Rng) -> Iri {
        self.object_properties.choose(rng).unwrap().clone()
    }

    fn individual(&self, rng: &mut impl Rng) -> Iri {
        self.individuals.choose(rng).unwrap().clone()
    }

    fn facet(&self, rng: &mut impl Rng) -> Option<ClassExpression> {
        let d = self.data_property.as_ref()?;
        Some(ClassExpression::facet(
            d,
            *FACETS.choose(rng).unwrap(),
            rng.gen_range(0..6),
        ))
    }

    /// A random expression of depth at most `depth`.
    pub fn expression<R: Rng>(&self, rng: &mut R, depth: usize) -> ClassExpression {
        let leaf = |rng: &mut R| match rng.gen_range(0..5) {
            0 => self
                .facet(rng)
                .unwrap_or_else(|| ClassExpression::named(&self.class(rng))),
            _ => ClassExpression::named(&self.class(rng)),
        };
        if depth <= 1 {
            return leaf(rng);
        }
        match rng.gen_range(0..4) {
            0 => leaf(rng),
            1 => {
                let n = rng.gen_range(2..=3);
                ClassExpression::Intersection(
                    (0..n).map(|_| self.expression(rng, depth - 1)).collect(),
                )
            }
            _ => ClassExpression::some(&self.property(rng), self.expression(rng, depth - 1)),
        }
    }

    /// A random ABox fact over this signature. `data` allows data-property facts.
    pub fn assertion(&self, rng: &mut impl Rng, data: bool) -> Assertion {
        let kinds = if data && self.data_property.is_some() {
            3
        } else {
            2
        };
        match rng.gen_range(0..kinds) {
            0 => Assertion::class(&self.class(rng), &self.individual(rng)),
            1 => Assertion::object(
                &self.property(rng),
                &self.individual(rng),
                &self.individual(rng),
            ),
            _ => Assertion::data(
                self.data_property.as_ref().unwrap(),
                &self.individual(rng),
                rng.gen_range(0..6),
            ),
        }
    }
}

/// A random KB within `shape`, with its signature.
pub fn random_kb(rng: &mut impl Rng, shape: &KbShape) -> (KnowledgeBase, Signature) {
    let sig = Signature::random(rng, shape);
    let mut kb = KnowledgeBase::with_prefixes(dsl::default_prefixes());
    for c in &sig.classes {
        kb.add_axiom(Axiom::declaration(nis_core::kb::EntityKind::Class, c))
            .unwrap();
    }
    for i in &sig.individuals {
        kb.add_axiom(Axiom::declaration(nis_core::kb::EntityKind::Individual, i))
            .unwrap();
    }
    for _ in 0..rng.gen_range(1..=sig.classes.len() + 3) {
        let c = sig.class(rng);
        let e = sig.expression(rng, shape.max_depth);
        let axiom = if rng.gen_bool(0.5) {
            Axiom::equivalent(&c, e)
        } else {
            Axiom::sub_class_of(&c, e)
        };
        // A second definition for the same class is rejected; skip it.
        let _ = kb.add_axiom(axiom);
    }
    let props = &sig.object_properties;
    for i in 0..props.len() {
        for j in i + 1..props.len() {
            if rng.gen_bool(0.2) {
                kb.add_axiom(Axiom::sub_property_of(&props[i], &props[j]))
                    .unwrap();
            }
        }
    }
    for _ in 0..rng.gen_range(0..=3 * sig.individuals.len()) {
        kb.add_assertion(sig.assertion(rng, true));
    }
    (kb, sig)
}

/// Limits for [`random_measures`].
#[derive(Clone, Copy, Debug)]
pub struct MeasureShape {
    pub max_agents: usize,
    pub max_objects: usize,
    pub max_relations: usize,
    pub max_articles: usize,
    pub min_measures: usize,
    pub max_measures: usize,
}

impl Default for MeasureShape {
    fn default() -> Self {
        MeasureShape {
            max_agents: 4,
            max_objects: 5,
            max_relations: 4,
            max_articles: 3,
            min_measures: 1,
            max_measures: 4,
        }
    }
}

/// DSL source for a random measure set. Every agent gets at least one block.
pub fn random_measure_text(rng: &mut impl Rng, shape: &MeasureShape) -> String {
    let agents: Vec<String> = (0..rng.gen_range(1..=shape.max_agents))
        .map(|i| format!("Agent{i}"))
        .collect();
    let objects: Vec<String> = (0..rng.gen_range(1..=shape.max_objects))
        .map(|i| format!("Obj{i}"))
        .collect();
    let relations: Vec<String> = (0..rng.gen_range(1..=shape.max_relations))
        .map(|i| format!("rel{i}"))
        .collect();
    let mut out = String::from("# generated\n");
    for a in &agents {
        let _ = writeln!(out, "entity Agent {a}");
    }
    for o in &objects {
        let kind = if rng.gen_bool(0.3) {
            "System"
        } else {
            "Object"
        };
        let _ = writeln!(out, "entity {kind} {o}");
    }
    for r in &relations {
        let _ = writeln!(out, "relation {r}");
    }
    let fillers: Vec<&String> = objects.iter().chain(agents.iter()).collect();
    let possible = relations.len() * fillers.len();
    for a in &agents {
        let n_articles = rng.gen_range(1..=shape.max_articles);
        let mut articles: Vec<usize> = (0..shape.max_articles).collect();
        articles.shuffle(rng);
        for art in articles.into_iter().take(n_articles) {
            let want = rng
                .gen_range(shape.min_measures..=shape.max_measures)
                .min(possible);
            let mut seen = BTreeSet::new();
            let _ = writeln!(out, "article Art{art} for {a}:");
            while seen.len() < want {
                let m = (
                    relations.choose(rng).unwrap(),
                    *fillers.choose(rng).unwrap(),
                );
                if seen.insert(m) {
                    let _ = writeln!(out, "    {} {}", m.0, m.1);
                }
            }
        }
    }
    for _ in 0..rng.gen_range(0..=3) {
        let s = objects.choose(rng).unwrap();
        let _ = writeln!(
            out,
            "clause {s} {} {}",
            relations.choose(rng).unwrap(),
            objects.choose(rng).unwrap()
        );
    }
    for _ in 0..rng.gen_range(0..=2) {
        let facet = ["max", "min", "exact"].choose(rng).unwrap();
        let _ = writeln!(
            out,
            "qualify {} Months {facet} {}",
            objects.choose(rng).unwrap(),
            rng.gen_range(0..6)
        );
    }
    out
}

pub fn random_measures(rng: &mut impl Rng, shape: &MeasureShape) -> (String, MeasureSet) {
    let text = random_measure_text(rng, shape);
    let ms = dsl::parse_measures(&text)
        .unwrap_or_else(|e| panic!("generated DSL is invalid: {e}\n{text}"));
    (text, ms)
}

/// A test organization added to a compiled KB.
#[derive(Clone, Debug)]
pub struct Organization {
    pub individual: Iri,
    /// Agent class it is checked against.
    pub target: Iri,
}

/// Adds `count` organizations, each asserted `Agent` and owning a random subset
/// of one agent's measures. Fillers are usually typed as the measure's object.
pub fn add_organizations(
    rng: &mut impl Rng,
    kb: &mut KnowledgeBase,
    ms: &MeasureSet,
    count: usize,
) -> Vec<Organization> {
    let agent = vocab::nis(dsl::AGENT);
    let by_agent = ms.blocks_by_agent();
    let targets: Vec<&Iri> = by_agent.keys().copied().collect();
    let classes: Vec<Iri> = kb.classes().cloned().collect();
    let mut orgs = Vec::new();
    for n in 0..count {
        let org = vocab::nis(&format!("org{n}"));
        let target = (*targets.choose(rng).expect("at least one agent has blocks")).clone();
        kb.add_assertion(Assertion::class(&agent, &org));
        let keep = if rng.gen_bool(0.3) {
            1.0
        } else {
            rng.gen_range(0.3..1.0)
        };
        for block in &by_agent[&target] {
            for (k, m) in block.measures.iter().enumerate() {
                if !rng.gen_bool(keep) {
                    continue;
                }
                let filler = vocab::nis(&format!("org{n}-{}-{k}", block.article.local_name()));
                let class = if rng.gen_bool(0.85) {
                    m.object.clone()
                } else {
                    classes.choose(rng).unwrap().clone()
                };
                kb.add_assertion(Assertion::class(&class, &filler));
                kb.add_assertion(Assertion::object(&m.task, &org, &filler));
            }
        }
        orgs.push(Organization {
            individual: org,
            target,
        });
    }
    orgs
}

/// A synthetic directive with `agents × articles` blocks of `measures` each,
/// for scale runs.
pub fn large_measure_text(
    agents: usize,
    articles: usize,
    measures: usize,
    relations: usize,
    objects: usize,
) -> String {
    let mut out = String::new();
    for a in 0..agents {
        let _ = writeln!(out, "entity Agent Agent{a}");
    }
    for o in 0..objects {
        let _ = writeln!(out, "entity Object Obj{o}");
    }
    for r in 0..relations {
        let _ = writeln!(out, "relation rel{r}");
    }
    for a in 0..agents {
        for art in 0..articles {
            let _ = writeln!(out, "article Art{art} for Agent{a}:");
            for m in 0..measures {
                // Distinct (relation, object) pairs within a block.
                let k = a * 7919 + art * 104_729 + m;
                let _ = writeln!(
                    out,
                    "    rel{} Obj{}",
                    k % relations,
                    (k / relations + m) % objects
                );
            }
        }
    }
    out
}
