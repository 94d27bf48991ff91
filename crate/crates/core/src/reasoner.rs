//! Classification and realization for the supported fragment.
//!
//! Classification works over a graph whose nodes are the named classes plus
//! every sub-expression mentioned by an axiom. It computes the least relation
//! `X sat Y` ("every instance of X is an instance of Y") closed under:
//!
//! * reflexivity and transitivity;
//! * told `SubClassOf(C, E)` and both directions of `EquivalentClasses(C, E)`;
//! * an intersection satisfies each of its conjuncts, and whatever satisfies
//!   every conjunct satisfies the intersection;
//! * `some(p, A) sat some(q, B)` when `p ⊑* q` and `A sat B`;
//! * `facet(d, f, m) sat facet(d, g, n)` when every value meeting `f m` meets `g n`.
//!
//! The subsumption map is that relation restricted to named classes.
//!
//! Realization is closed-evidence: an individual satisfies `some(p, D)` only
//! through an asserted `q` edge with `q ⊑* p` to an individual satisfying `D`,
//! and a data facet only when at least one value is asserted and all asserted
//! values meet it. No anonymous individuals are introduced.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::kb::{
    Assertion, Axiom, ClassExpression, EntityKind, Facet, Iri, KnowledgeBase, PropertyHierarchy,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReasonerError {
    #[error("unknown individual {0:?}")]
    UnknownIndividual(Iri),
}

/// Reflexive, transitively closed subsumption between named classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubsumptionMap {
    supers: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl SubsumptionMap {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Iri, Iri)>) -> Self {
        let mut supers: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for (sub, sup) in pairs {
            supers.entry(sub).or_default().insert(sup);
        }
        SubsumptionMap { supers }
    }

    pub fn is_subclass(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup || self.supers.get(sub).is_some_and(|s| s.contains(sup))
    }

    /// All subsumers of `class`, itself included.
    pub fn supers_of(&self, class: &Iri) -> impl Iterator<Item = &Iri> {
        self.supers.get(class).into_iter().flatten()
    }

    pub fn classes(&self) -> impl Iterator<Item = &Iri> {
        self.supers.keys()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Iri, &Iri)> {
        self.supers
            .iter()
            .flat_map(|(c, s)| s.iter().map(move |d| (c, d)))
    }

    pub fn len(&self) -> usize {
        self.supers.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.supers.is_empty()
    }

    /// Strict subsumers of `class` that are not equivalent to it.
    pub fn strict_supers<'a>(&'a self, class: &'a Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        self.supers_of(class)
            .filter(move |d| *d != class && !self.is_subclass(d, class))
    }

    /// Strict subsumers with no other strict subsumer between them and `class`.
    pub fn direct_supers(&self, class: &Iri) -> BTreeSet<Iri> {
        let strict: BTreeSet<&Iri> = self.strict_supers(class).collect();
        strict
            .iter()
            .filter(|d| {
                !strict
                    .iter()
                    .any(|e| e != *d && self.is_subclass(e, d) && !self.is_subclass(d, e))
            })
            .map(|d| (*d).clone())
            .collect()
    }
}

/// Named-class memberships of each individual.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeMap {
    entries: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl TypeMap {
    pub fn types_of(&self, individual: &Iri) -> Option<&BTreeSet<Iri>> {
        self.entries.get(individual)
    }

    pub fn has_type(&self, individual: &Iri, class: &Iri) -> bool {
        self.entries
            .get(individual)
            .is_some_and(|t| t.contains(class))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Iri, &BTreeSet<Iri>)> {
        self.entries.iter()
    }

    pub fn from_entries(entries: BTreeMap<Iri, BTreeSet<Iri>>) -> Self {
        TypeMap { entries }
    }
}

type NodeId = u32;

#[derive(Debug)]
enum Node {
    Named,
    And(Vec<NodeId>),
    Some {
        property: Iri,
        filler: NodeId,
    },
    Facet {
        property: Iri,
        facet: Facet,
        bound: i64,
    },
}

/// Expression graph plus the completion state.
struct Completion {
    nodes: Vec<Node>,
    ids: HashMap<ClassExpression, NodeId>,
    sat: Vec<HashSet<NodeId>>,
    users: Vec<Vec<NodeId>>,
    and_containing: Vec<Vec<NodeId>>,
    some_by_filler: Vec<Vec<NodeId>>,
    queue: Vec<(NodeId, NodeId)>,
}

impl Completion {
    fn new() -> Self {
        Completion {
            nodes: Vec::new(),
            ids: HashMap::new(),
            sat: Vec::new(),
            users: Vec::new(),
            and_containing: Vec::new(),
            some_by_filler: Vec::new(),
            queue: Vec::new(),
        }
    }

    fn intern(&mut self, expr: &ClassExpression) -> NodeId {
        if let Some(&id) = self.ids.get(expr) {
            return id;
        }
        let node = match expr {
            ClassExpression::Named(_) => Node::Named,
            ClassExpression::Intersection(cs) => {
                Node::And(cs.iter().map(|c| self.intern(c)).collect())
            }
            ClassExpression::ObjectSome { property, filler } => Node::Some {
                property: property.clone(),
                filler: self.intern(filler),
            },
            ClassExpression::DataFacet {
                property,
                facet,
                bound,
            } => Node::Facet {
                property: property.clone(),
                facet: *facet,
                bound: *bound,
            },
        };
        let id = self.nodes.len() as NodeId;
        match &node {
            Node::And(cs) => {
                for &c in cs {
                    self.and_containing[c as usize].push(id);
                }
            }
            Node::Some { filler, .. } => self.some_by_filler[*filler as usize].push(id),
            _ => {}
        }
        self.nodes.push(node);
        self.sat.push(HashSet::new());
        self.users.push(Vec::new());
        self.and_containing.push(Vec::new());
        self.some_by_filler.push(Vec::new());
        self.ids.insert(expr.clone(), id);
        id
    }

    fn add(&mut self, x: NodeId, y: NodeId) {
        if self.sat[x as usize].insert(y) {
            self.users[y as usize].push(x);
            self.queue.push((x, y));
        }
    }

    fn run(&mut self, props: &PropertyHierarchy) {
        while let Some((x, y)) = self.queue.pop() {
            let forward: Vec<NodeId> = self.sat[y as usize].iter().copied().collect();
            for z in forward {
                self.add(x, z);
            }
            let backward = self.users[x as usize].clone();
            for w in backward {
                self.add(w, y);
            }
            for i in self.and_containing[y as usize].clone() {
                let Node::And(cs) = &self.nodes[i as usize] else {
                    unreachable!()
                };
                if cs.iter().all(|c| self.sat[x as usize].contains(c)) {
                    self.add(x, i);
                }
            }
            // x sat y as fillers: lift to the restrictions over them
            let (lower, upper) = (
                self.some_by_filler[x as usize].clone(),
                self.some_by_filler[y as usize].clone(),
            );
            for &r in &lower {
                for &s in &upper {
                    let (Node::Some { property: p, .. }, Node::Some { property: q, .. }) =
                        (&self.nodes[r as usize], &self.nodes[s as usize])
                    else {
                        unreachable!()
                    };
                    if props.is_sub_property(p, q) {
                        self.add(r, s);
                    }
                }
            }
        }
    }
}

/// Computes named-class subsumption.
pub fn classify(kb: &KnowledgeBase) -> SubsumptionMap {
    let props = kb.property_hierarchy();
    let mut c = Completion::new();
    let mut named: Vec<(Iri, NodeId)> = Vec::new();
    for class in kb.classes() {
        let id = c.intern(&ClassExpression::Named(class.clone()));
        named.push((class.clone(), id));
    }
    for axiom in kb.axioms() {
        match axiom {
            Axiom::SubClassOf { sub, sup } => {
                let (s, t) = (
                    c.intern(&ClassExpression::Named(sub.clone())),
                    c.intern(sup),
                );
                c.add(s, t);
            }
            Axiom::EquivalentClasses { named, definition } => {
                let (s, t) = (
                    c.intern(&ClassExpression::Named(named.clone())),
                    c.intern(definition),
                );
                c.add(s, t);
                c.add(t, s);
            }
            _ => {}
        }
    }
    for x in 0..c.nodes.len() as NodeId {
        c.add(x, x);
        if let Node::And(cs) = &c.nodes[x as usize] {
            for y in cs.clone() {
                c.add(x, y);
            }
        }
    }
    let facets: Vec<(NodeId, Iri, Facet, i64)> = c
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, n)| match n {
            Node::Facet {
                property,
                facet,
                bound,
            } => Some((i as NodeId, property.clone(), *facet, *bound)),
            _ => None,
        })
        .collect();
    for (a, pa, fa, ba) in &facets {
        for (b, pb, fb, bb) in &facets {
            if pa == pb && fa.implies(*ba, *fb, *bb) {
                c.add(*a, *b);
            }
        }
    }
    c.run(&props);

    let by_id: HashMap<NodeId, &Iri> = named.iter().map(|(iri, id)| (*id, iri)).collect();
    let mut supers = BTreeMap::new();
    for (iri, id) in &named {
        let set: BTreeSet<Iri> = c.sat[*id as usize]
            .iter()
            .filter_map(|n| by_id.get(n).map(|i| (*i).clone()))
            .collect();
        supers.insert(iri.clone(), set);
    }
    SubsumptionMap { supers }
}

/// An expression compiled against the interned ABox.
enum Check {
    /// A class that no individual can be known to belong to.
    Never,
    Class(u32),
    All(Vec<Check>),
    Some {
        properties: Vec<u32>,
        filler: Box<Check>,
    },
    Facet {
        property: u32,
        facet: Facet,
        bound: i64,
    },
}

/// Interned ABox and closure data shared by realization and instance checks.
struct Abox {
    class_ids: HashMap<Iri, u32>,
    class_names: Vec<Iri>,
    supers: Vec<Vec<u32>>,
    prop_ids: HashMap<Iri, u32>,
    props: PropertyHierarchy,
    individual_ids: HashMap<Iri, u32>,
    individual_names: Vec<Iri>,
    edges: Vec<HashMap<u32, Vec<u32>>>,
    values: Vec<HashMap<u32, Vec<i64>>>,
    asserted: Vec<Vec<u32>>,
}

impl Abox {
    fn new(kb: &KnowledgeBase, subs: &SubsumptionMap) -> Self {
        let mut class_names: Vec<Iri> = kb.classes().cloned().collect();
        for c in subs.classes() {
            if !kb.is_declared(c, EntityKind::Class) {
                class_names.push(c.clone());
            }
        }
        let class_ids: HashMap<Iri, u32> = class_names
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        let supers = class_names
            .iter()
            .map(|c| {
                let mut s: Vec<u32> = subs
                    .supers_of(c)
                    .filter_map(|d| class_ids.get(d).copied())
                    .collect();
                if let Some(&own) = class_ids.get(c) {
                    s.push(own);
                }
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();

        let individual_names: Vec<Iri> = kb.individuals().cloned().collect();
        let individual_ids: HashMap<Iri, u32> = individual_names
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        let mut prop_ids: HashMap<Iri, u32> = HashMap::new();
        let n = individual_names.len();
        let mut edges = vec![HashMap::<u32, Vec<u32>>::new(); n];
        let mut values = vec![HashMap::<u32, Vec<i64>>::new(); n];
        let mut asserted = vec![Vec::new(); n];
        for a in kb.assertions() {
            let s = individual_ids[a.subject()] as usize;
            match a {
                Assertion::ClassAssertion { class, .. } => asserted[s].push(class_ids[class]),
                Assertion::ObjectPropertyAssertion {
                    property, object, ..
                } => {
                    let next = prop_ids.len() as u32;
                    let p = *prop_ids.entry(property.clone()).or_insert(next);
                    edges[s].entry(p).or_default().push(individual_ids[object]);
                }
                Assertion::DataPropertyAssertion {
                    property, value, ..
                } => {
                    let next = prop_ids.len() as u32;
                    let p = *prop_ids.entry(property.clone()).or_insert(next);
                    values[s].entry(p).or_default().push(*value);
                }
            }
        }
        Abox {
            class_ids,
            class_names,
            supers,
            prop_ids,
            props: kb.property_hierarchy(),
            individual_ids,
            individual_names,
            edges,
            values,
            asserted,
        }
    }

    fn compile(&self, expr: &ClassExpression) -> Check {
        match expr {
            ClassExpression::Named(c) => self
                .class_ids
                .get(c)
                .map_or(Check::Never, |&id| Check::Class(id)),
            ClassExpression::Intersection(cs) => {
                Check::All(cs.iter().map(|c| self.compile(c)).collect())
            }
            ClassExpression::ObjectSome { property, filler } => Check::Some {
                properties: self
                    .props
                    .sub_properties(property)
                    .iter()
                    .filter_map(|q| self.prop_ids.get(q).copied())
                    .collect(),
                filler: Box::new(self.compile(filler)),
            },
            ClassExpression::DataFacet {
                property,
                facet,
                bound,
            } => match self.prop_ids.get(property) {
                Some(&p) => Check::Facet {
                    property: p,
                    facet: *facet,
                    bound: *bound,
                },
                None => Check::Never,
            },
        }
    }

    fn satisfies(&self, types: &[HashSet<u32>], a: u32, check: &Check) -> bool {
        match check {
            Check::Never => false,
            Check::Class(c) => types[a as usize].contains(c),
            Check::All(cs) => cs.iter().all(|c| self.satisfies(types, a, c)),
            Check::Some { properties, filler } => properties.iter().any(|p| {
                self.edges[a as usize].get(p).is_some_and(|targets| {
                    targets.iter().any(|&b| self.satisfies(types, b, filler))
                })
            }),
            Check::Facet {
                property,
                facet,
                bound,
            } => self.values[a as usize]
                .get(property)
                .is_some_and(|vs| !vs.is_empty() && vs.iter().all(|&v| facet.admits(*bound, v))),
        }
    }

    fn realize(&self, kb: &KnowledgeBase) -> Vec<HashSet<u32>> {
        let n = self.individual_names.len();
        let mut types: Vec<HashSet<u32>> = vec![HashSet::new(); n];
        for (a, classes) in self.asserted.iter().enumerate() {
            for &c in classes {
                types[a].extend(self.supers[c as usize].iter().copied());
            }
        }
        let definitions: Vec<(u32, Check)> = kb
            .definitions()
            .map(|(class, def)| (self.class_ids[class], self.compile(def)))
            .collect();
        let guards = Guards::new(&definitions);
        let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (a, edges) in self.edges.iter().enumerate() {
            for &b in edges.values().flatten() {
                preds[b as usize].push(a as u32);
            }
        }

        // Round-based fixpoint. A definition can only start to hold for an
        // individual whose own types changed or that reaches, through edges,
        // an individual whose types changed.
        let mut dirty: Vec<u32> = (0..n as u32).collect();
        let mut candidates = Vec::new();
        while !dirty.is_empty() {
            let mut changed = Vec::new();
            for &a in &dirty {
                let mut grew = false;
                loop {
                    candidates.clear();
                    guards.candidates(
                        &types[a as usize],
                        &self.edges[a as usize],
                        &self.values[a as usize],
                        &mut candidates,
                    );
                    let mut added = false;
                    for &i in &candidates {
                        let (class, check) = &definitions[i];
                        if !types[a as usize].contains(class) && self.satisfies(&types, a, check) {
                            types[a as usize].extend(self.supers[*class as usize].iter().copied());
                            added = true;
                        }
                    }
                    if !added {
                        break;
                    }
                    grew = true;
                }
                if grew {
                    changed.push(a);
                }
            }
            let mut seen = vec![false; n];
            let mut queue: Vec<u32> = changed;
            for &a in &queue {
                seen[a as usize] = true;
            }
            let mut next = Vec::new();
            while let Some(b) = queue.pop() {
                next.push(b);
                for &a in &preds[b as usize] {
                    if !seen[a as usize] {
                        seen[a as usize] = true;
                        queue.push(a);
                    }
                }
            }
            next.sort_unstable();
            dirty = next;
        }
        types
    }

    fn type_map(&self, types: &[HashSet<u32>]) -> TypeMap {
        let entries = self
            .individual_names
            .iter()
            .zip(types)
            .map(|(ind, ts)| {
                (
                    ind.clone(),
                    ts.iter()
                        .map(|&c| self.class_names[c as usize].clone())
                        .collect(),
                )
            })
            .collect();
        TypeMap { entries }
    }
}

/// Indexes definitions by one conjunct that must hold for them to hold, so an
/// individual is only checked against definitions it could meet.
struct Guards {
    by_property: HashMap<u32, Vec<usize>>,
    by_class: HashMap<u32, Vec<usize>>,
    always: Vec<usize>,
}

enum Guard {
    Properties(Vec<u32>),
    Class(u32),
    Always,
    Never,
}

impl Guard {
    fn of(check: &Check) -> Guard {
        match check {
            Check::Never => Guard::Never,
            Check::Class(c) => Guard::Class(*c),
            Check::Some { properties, .. } if properties.is_empty() => Guard::Never,
            Check::Some { properties, .. } => Guard::Properties(properties.clone()),
            Check::Facet { property, .. } => Guard::Properties(vec![*property]),
            Check::All(cs) => {
                let guards: Vec<Guard> = cs.iter().map(Guard::of).collect();
                if guards.iter().any(|g| matches!(g, Guard::Never)) {
                    return Guard::Never;
                }
                let mut fallback = Guard::Always;
                for g in guards {
                    match g {
                        Guard::Properties(_) => return g,
                        Guard::Class(_) if matches!(fallback, Guard::Always) => fallback = g,
                        _ => {}
                    }
                }
                fallback
            }
        }
    }
}

impl Guards {
    fn new(definitions: &[(u32, Check)]) -> Self {
        let mut g = Guards {
            by_property: HashMap::new(),
            by_class: HashMap::new(),
            always: Vec::new(),
        };
        for (i, (_, check)) in definitions.iter().enumerate() {
            match Guard::of(check) {
                Guard::Properties(ps) => {
                    for p in ps {
                        g.by_property.entry(p).or_default().push(i);
                    }
                }
                Guard::Class(c) => g.by_class.entry(c).or_default().push(i),
                Guard::Always => g.always.push(i),
                Guard::Never => {}
            }
        }
        g
    }

    fn candidates(
        &self,
        types: &HashSet<u32>,
        edges: &HashMap<u32, Vec<u32>>,
        values: &HashMap<u32, Vec<i64>>,
        out: &mut Vec<usize>,
    ) {
        out.extend_from_slice(&self.always);
        for p in edges.keys().chain(values.keys()) {
            if let Some(ds) = self.by_property.get(p) {
                out.extend_from_slice(ds);
            }
        }
        for c in types {
            if let Some(ds) = self.by_class.get(c) {
                out.extend_from_slice(ds);
            }
        }
        out.sort_unstable();
        out.dedup();
    }
}

/// Computes the named-class memberships of every declared individual.
pub fn realize(kb: &KnowledgeBase, subs: &SubsumptionMap) -> TypeMap {
    let abox = Abox::new(kb, subs);
    let types = abox.realize(kb);
    abox.type_map(&types)
}

/// Whether `individual` satisfies `expr` under the realization of `kb`.
///
/// Realizes the whole KB on each call; use [`Inference`] for repeated checks.
pub fn entails_instance(
    kb: &KnowledgeBase,
    subs: &SubsumptionMap,
    individual: &Iri,
    expr: &ClassExpression,
) -> Result<bool, ReasonerError> {
    Inference::with_subsumption(kb, subs.clone()).entails_instance(individual, expr)
}

/// Classification and realization results for one KB, kept for repeated instance checks.
pub struct Inference {
    subsumption: SubsumptionMap,
    types: TypeMap,
    abox: Abox,
    dense: Vec<HashSet<u32>>,
}

impl Inference {
    pub fn new(kb: &KnowledgeBase) -> Self {
        Self::with_subsumption(kb, classify(kb))
    }

    pub fn with_subsumption(kb: &KnowledgeBase, subsumption: SubsumptionMap) -> Self {
        let abox = Abox::new(kb, &subsumption);
        let dense = abox.realize(kb);
        let types = abox.type_map(&dense);
        Inference {
            subsumption,
            types,
            abox,
            dense,
        }
    }

    pub fn subsumption(&self) -> &SubsumptionMap {
        &self.subsumption
    }

    pub fn types(&self) -> &TypeMap {
        &self.types
    }

    pub fn is_individual(&self, individual: &Iri) -> bool {
        self.abox.individual_ids.contains_key(individual)
    }

    pub fn entails_instance(
        &self,
        individual: &Iri,
        expr: &ClassExpression,
    ) -> Result<bool, ReasonerError> {
        let &a = self
            .abox
            .individual_ids
            .get(individual)
            .ok_or_else(|| ReasonerError::UnknownIndividual(individual.clone()))?;
        Ok(self
            .abox
            .satisfies(&self.dense, a, &self.abox.compile(&expr.normalize())))
    }
}
