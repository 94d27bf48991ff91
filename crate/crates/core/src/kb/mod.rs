//! In-memory knowledge base: TBox axioms, ABox assertions and their indexes.
//!
//! A [`KnowledgeBase`] is built by a single writer through [`KnowledgeBase::add_axiom`]
//! and [`KnowledgeBase::add_assertion`] and is then only read. Every IRI used by an
//! axiom or assertion gets a matching declaration on first use, and all class
//! expressions are stored in normalized form.

mod expr;
mod iri;
mod rdf;

use std::collections::{BTreeMap, BTreeSet};

pub use expr::{ClassExpression, Facet};
pub use iri::{is_pn_local, vocab, Iri, PrefixMap, NIS_NS, OWL_NS, RDFS_NS, RDF_NS, XSD_NS};
pub(crate) use rdf::facet_predicate as rdf_facet_predicate;
pub use rdf::{rdf_view, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KbError {
    #[error("class {0:?} already has a different equivalent-class definition")]
    DuplicateDefinition(Iri),
    #[error("sub-property axiom {sub:?} -> {sup:?} would make the property hierarchy cyclic")]
    CyclicPropertyHierarchy { sub: Iri, sup: Iri },
    #[error("intersection with no conjuncts")]
    EmptyIntersection,
    #[error("unknown prefix `{0}`")]
    UnknownPrefix(String),
    #[error("invalid IRI `{0}`")]
    InvalidIri(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityKind {
    Class,
    ObjectProperty,
    DataProperty,
    Individual,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Declaration {
        kind: EntityKind,
        iri: Iri,
    },
    SubClassOf {
        sub: Iri,
        sup: ClassExpression,
    },
    EquivalentClasses {
        named: Iri,
        definition: ClassExpression,
    },
    SubPropertyOf {
        sub: Iri,
        sup: Iri,
    },
}

impl Axiom {
    pub fn declaration(kind: EntityKind, iri: &Iri) -> Self {
        Axiom::Declaration {
            kind,
            iri: iri.clone(),
        }
    }

    pub fn sub_class_of(sub: &Iri, sup: ClassExpression) -> Self {
        Axiom::SubClassOf {
            sub: sub.clone(),
            sup,
        }
    }

    pub fn equivalent(named: &Iri, definition: ClassExpression) -> Self {
        Axiom::EquivalentClasses {
            named: named.clone(),
            definition,
        }
    }

    pub fn sub_property_of(sub: &Iri, sup: &Iri) -> Self {
        Axiom::SubPropertyOf {
            sub: sub.clone(),
            sup: sup.clone(),
        }
    }

    fn normalized(self) -> Self {
        match self {
            Axiom::SubClassOf { sub, sup } => Axiom::SubClassOf {
                sub,
                sup: sup.normalize(),
            },
            Axiom::EquivalentClasses { named, definition } => Axiom::EquivalentClasses {
                named,
                definition: definition.normalize(),
            },
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    ClassAssertion {
        class: Iri,
        individual: Iri,
    },
    ObjectPropertyAssertion {
        property: Iri,
        subject: Iri,
        object: Iri,
    },
    DataPropertyAssertion {
        property: Iri,
        subject: Iri,
        value: i64,
    },
}

impl Assertion {
    pub fn class(class: &Iri, individual: &Iri) -> Self {
        Assertion::ClassAssertion {
            class: class.clone(),
            individual: individual.clone(),
        }
    }

    pub fn object(property: &Iri, subject: &Iri, object: &Iri) -> Self {
        Assertion::ObjectPropertyAssertion {
            property: property.clone(),
            subject: subject.clone(),
            object: object.clone(),
        }
    }

    pub fn data(property: &Iri, subject: &Iri, value: i64) -> Self {
        Assertion::DataPropertyAssertion {
            property: property.clone(),
            subject: subject.clone(),
            value,
        }
    }

    pub fn subject(&self) -> &Iri {
        match self {
            Assertion::ClassAssertion { individual, .. } => individual,
            Assertion::ObjectPropertyAssertion { subject, .. }
            | Assertion::DataPropertyAssertion { subject, .. } => subject,
        }
    }

    /// The predicate under which the assertion is indexed; `rdf:type` for class assertions.
    pub fn property(&self) -> &Iri {
        match self {
            Assertion::ClassAssertion { .. } => &vocab::RDF_TYPE,
            Assertion::ObjectPropertyAssertion { property, .. }
            | Assertion::DataPropertyAssertion { property, .. } => property,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeBase {
    prefixes: PrefixMap,
    tbox: BTreeSet<Axiom>,
    abox: BTreeSet<Assertion>,
    definitions: BTreeMap<Iri, ClassExpression>,
    declarations: BTreeMap<Iri, BTreeSet<EntityKind>>,
    told_super_properties: BTreeMap<Iri, BTreeSet<Iri>>,
    by_subject: BTreeMap<Iri, BTreeSet<Assertion>>,
    by_property: BTreeMap<Iri, BTreeSet<Assertion>>,
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        Self::new()
    }
}

impl KnowledgeBase {
    /// An empty KB with the standard `owl`/`rdf`/`rdfs`/`xsd` prefixes.
    pub fn new() -> Self {
        Self::with_prefixes(PrefixMap::standard())
    }

    pub fn with_prefixes(prefixes: PrefixMap) -> Self {
        KnowledgeBase {
            prefixes,
            tbox: BTreeSet::new(),
            abox: BTreeSet::new(),
            definitions: BTreeMap::new(),
            declarations: BTreeMap::new(),
            told_super_properties: BTreeMap::new(),
            by_subject: BTreeMap::new(),
            by_property: BTreeMap::new(),
        }
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    /// Adds an axiom in normalized form together with the declarations it implies.
    ///
    /// Returns `Ok(false)` when the axiom was already present. Nothing is modified
    /// when an error is returned.
    pub fn add_axiom(&mut self, axiom: Axiom) -> Result<bool, KbError> {
        let axiom = axiom.normalized();
        let mut implied = Vec::new();
        match &axiom {
            Axiom::Declaration { .. } => {}
            Axiom::SubClassOf { sub, sup } => {
                if sup.has_empty_intersection() {
                    return Err(KbError::EmptyIntersection);
                }
                implied.push((EntityKind::Class, sub.clone()));
                collect_signature(sup, &mut implied);
            }
            Axiom::EquivalentClasses { named, definition } => {
                if definition.has_empty_intersection() {
                    return Err(KbError::EmptyIntersection);
                }
                match self.definitions.get(named) {
                    Some(existing) if existing == definition => return Ok(false),
                    Some(_) => return Err(KbError::DuplicateDefinition(named.clone())),
                    None => {}
                }
                implied.push((EntityKind::Class, named.clone()));
                collect_signature(definition, &mut implied);
            }
            Axiom::SubPropertyOf { sub, sup } => {
                if sub != sup && self.told_reaches(sup, sub) {
                    return Err(KbError::CyclicPropertyHierarchy {
                        sub: sub.clone(),
                        sup: sup.clone(),
                    });
                }
                let kind = if self.is_declared(sub, EntityKind::DataProperty)
                    || self.is_declared(sup, EntityKind::DataProperty)
                {
                    EntityKind::DataProperty
                } else {
                    EntityKind::ObjectProperty
                };
                for p in [sub, sup] {
                    if !self.is_declared(p, EntityKind::ObjectProperty)
                        && !self.is_declared(p, EntityKind::DataProperty)
                    {
                        implied.push((kind, p.clone()));
                    }
                }
            }
        }

        if self.tbox.contains(&axiom) {
            return Ok(false);
        }
        for (kind, iri) in implied {
            self.declare(kind, iri);
        }
        match &axiom {
            Axiom::Declaration { kind, iri } => {
                self.declarations
                    .entry(iri.clone())
                    .or_default()
                    .insert(*kind);
            }
            Axiom::EquivalentClasses { named, definition } => {
                self.definitions.insert(named.clone(), definition.clone());
            }
            Axiom::SubPropertyOf { sub, sup } => {
                self.told_super_properties
                    .entry(sub.clone())
                    .or_default()
                    .insert(sup.clone());
            }
            Axiom::SubClassOf { .. } => {}
        }
        self.tbox.insert(axiom);
        Ok(true)
    }

    fn declare(&mut self, kind: EntityKind, iri: Iri) {
        let decl = Axiom::Declaration {
            kind,
            iri: iri.clone(),
        };
        if self.tbox.insert(decl) {
            self.declarations.entry(iri).or_default().insert(kind);
        }
    }

    fn told_reaches(&self, from: &Iri, to: &Iri) -> bool {
        let mut stack = vec![from];
        let mut seen = BTreeSet::new();
        while let Some(p) = stack.pop() {
            if p == to {
                return true;
            }
            if seen.insert(p) {
                if let Some(ups) = self.told_super_properties.get(p) {
                    stack.extend(ups.iter());
                }
            }
        }
        false
    }

    /// Adds an assertion plus declarations for its class, property and individuals.
    /// Returns `false` when it was already present.
    pub fn add_assertion(&mut self, assertion: Assertion) -> bool {
        if self.abox.contains(&assertion) {
            return false;
        }
        match &assertion {
            Assertion::ClassAssertion { class, individual } => {
                self.declare(EntityKind::Class, class.clone());
                self.declare(EntityKind::Individual, individual.clone());
            }
            Assertion::ObjectPropertyAssertion {
                property,
                subject,
                object,
            } => {
                self.declare(EntityKind::ObjectProperty, property.clone());
                self.declare(EntityKind::Individual, subject.clone());
                self.declare(EntityKind::Individual, object.clone());
            }
            Assertion::DataPropertyAssertion {
                property, subject, ..
            } => {
                self.declare(EntityKind::DataProperty, property.clone());
                self.declare(EntityKind::Individual, subject.clone());
            }
        }
        self.by_subject
            .entry(assertion.subject().clone())
            .or_default()
            .insert(assertion.clone());
        self.by_property
            .entry(assertion.property().clone())
            .or_default()
            .insert(assertion.clone());
        self.abox.insert(assertion);
        true
    }

    /// Unions `other` into this KB. Prefix labels already bound here win.
    pub fn merge(&mut self, other: &KnowledgeBase) -> Result<(), KbError> {
        self.prefixes.absorb(&other.prefixes);
        for ax in &other.tbox {
            self.add_axiom(ax.clone())?;
        }
        for a in &other.abox {
            self.add_assertion(a.clone());
        }
        Ok(())
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.iter()
    }

    pub fn assertions(&self) -> impl Iterator<Item = &Assertion> {
        self.abox.iter()
    }

    pub fn tbox(&self) -> &BTreeSet<Axiom> {
        &self.tbox
    }

    pub fn abox(&self) -> &BTreeSet<Assertion> {
        &self.abox
    }

    pub fn contains_axiom(&self, axiom: &Axiom) -> bool {
        self.tbox.contains(&axiom.clone().normalized())
    }

    pub fn contains_assertion(&self, assertion: &Assertion) -> bool {
        self.abox.contains(assertion)
    }

    /// The equivalent-class definition of `class`, if any.
    pub fn definition(&self, class: &Iri) -> Option<&ClassExpression> {
        self.definitions.get(class)
    }

    pub fn definitions(&self) -> impl Iterator<Item = (&Iri, &ClassExpression)> {
        self.definitions.iter()
    }

    pub fn is_declared(&self, iri: &Iri, kind: EntityKind) -> bool {
        self.declarations
            .get(iri)
            .is_some_and(|k| k.contains(&kind))
    }

    /// Declared entities of one kind, sorted by IRI.
    pub fn declared(&self, kind: EntityKind) -> impl Iterator<Item = &Iri> {
        self.declarations
            .iter()
            .filter(move |(_, kinds)| kinds.contains(&kind))
            .map(|(iri, _)| iri)
    }

    pub fn classes(&self) -> impl Iterator<Item = &Iri> {
        self.declared(EntityKind::Class)
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Iri> {
        self.declared(EntityKind::Individual)
    }

    pub fn assertions_about<'a>(&'a self, subject: &Iri) -> impl Iterator<Item = &'a Assertion> {
        self.by_subject.get(subject).into_iter().flatten()
    }

    pub fn assertions_with<'a>(&'a self, property: &Iri) -> impl Iterator<Item = &'a Assertion> {
        self.by_property.get(property).into_iter().flatten()
    }

    /// Told `SubPropertyOf` edges, sub → direct supers.
    pub fn told_super_properties(&self) -> &BTreeMap<Iri, BTreeSet<Iri>> {
        &self.told_super_properties
    }

    /// Reflexive-transitive closure of the told property hierarchy.
    pub fn property_hierarchy(&self) -> PropertyHierarchy {
        let mut props: BTreeSet<Iri> = self
            .declared(EntityKind::ObjectProperty)
            .chain(self.declared(EntityKind::DataProperty))
            .cloned()
            .collect();
        for (sub, sups) in &self.told_super_properties {
            props.insert(sub.clone());
            props.extend(sups.iter().cloned());
        }
        let mut supers = BTreeMap::new();
        for p in &props {
            let mut reach = BTreeSet::new();
            let mut stack = vec![p.clone()];
            while let Some(q) = stack.pop() {
                if reach.insert(q.clone()) {
                    if let Some(ups) = self.told_super_properties.get(&q) {
                        stack.extend(ups.iter().cloned());
                    }
                }
            }
            supers.insert(p.clone(), reach);
        }
        let mut subs: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for (p, ups) in &supers {
            for q in ups {
                subs.entry(q.clone()).or_default().insert(p.clone());
            }
        }
        PropertyHierarchy { supers, subs }
    }

    /// Checks that the indexes agree with the assertion set.
    pub fn indexes_consistent(&self) -> bool {
        let by_s: usize = self.by_subject.values().map(BTreeSet::len).sum();
        let by_p: usize = self.by_property.values().map(BTreeSet::len).sum();
        by_s == self.abox.len()
            && by_p == self.abox.len()
            && self.abox.iter().all(|a| {
                self.by_subject
                    .get(a.subject())
                    .is_some_and(|s| s.contains(a))
                    && self
                        .by_property
                        .get(a.property())
                        .is_some_and(|s| s.contains(a))
            })
    }
}

fn collect_signature(expr: &ClassExpression, out: &mut Vec<(EntityKind, Iri)>) {
    expr.walk(&mut |e| match e {
        ClassExpression::Named(c) => out.push((EntityKind::Class, c.clone())),
        ClassExpression::ObjectSome { property, .. } => {
            out.push((EntityKind::ObjectProperty, property.clone()))
        }
        ClassExpression::DataFacet { property, .. } => {
            out.push((EntityKind::DataProperty, property.clone()))
        }
        ClassExpression::Intersection(_) => {}
    });
}

/// Reflexive-transitive sub-property relation.
#[derive(Clone, Debug, Default)]
pub struct PropertyHierarchy {
    supers: BTreeMap<Iri, BTreeSet<Iri>>,
    subs: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl PropertyHierarchy {
    /// `sub ⊑* sup`. Always true when the two are equal.
    pub fn is_sub_property(&self, sub: &Iri, sup: &Iri) -> bool {
        sub == sup || self.supers.get(sub).is_some_and(|s| s.contains(sup))
    }

    /// Every property `q` with `q ⊑* property`, including `property` itself.
    pub fn sub_properties(&self, property: &Iri) -> Vec<Iri> {
        match self.subs.get(property) {
            Some(s) => s.iter().cloned().collect(),
            None => vec![property.clone()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nis(s: &str) -> Iri {
        vocab::nis(s)
    }

    #[test]
    fn sub_class_axiom_declares_both_classes() {
        let mut kb = KnowledgeBase::new();
        assert!(kb
            .add_axiom(Axiom::sub_class_of(
                &nis("Article10"),
                ClassExpression::named(&nis("NisArticles"))
            ))
            .unwrap());
        assert_eq!(kb.tbox().len(), 3);
        assert!(kb.is_declared(&nis("Article10"), EntityKind::Class));
        assert!(kb.is_declared(&nis("NisArticles"), EntityKind::Class));
    }

    #[test]
    fn adding_twice_is_idempotent() {
        let mut kb = KnowledgeBase::new();
        let ax = Axiom::sub_class_of(
            &nis("Article10"),
            ClassExpression::named(&nis("NisArticles")),
        );
        kb.add_axiom(ax.clone()).unwrap();
        let before = kb.clone();
        assert!(!kb.add_axiom(ax).unwrap());
        assert_eq!(kb, before);
    }

    #[test]
    fn second_definition_is_rejected() {
        let mut kb = KnowledgeBase::new();
        let ms = nis("MemberState");
        kb.add_axiom(Axiom::equivalent(&ms, ClassExpression::named(&nis("X"))))
            .unwrap();
        let before = kb.clone();
        let err = kb
            .add_axiom(Axiom::equivalent(&ms, ClassExpression::named(&nis("Y"))))
            .unwrap_err();
        assert_eq!(err, KbError::DuplicateDefinition(ms.clone()));
        assert_eq!(kb, before);
        // the same definition in a different conjunct order is not a second definition
        let ab = ClassExpression::Intersection(vec![
            ClassExpression::named(&nis("A")),
            ClassExpression::named(&nis("B")),
        ]);
        let ba = ClassExpression::Intersection(vec![
            ClassExpression::named(&nis("B")),
            ClassExpression::named(&nis("A")),
        ]);
        kb.add_axiom(Axiom::equivalent(&nis("Z"), ab)).unwrap();
        assert!(!kb.add_axiom(Axiom::equivalent(&nis("Z"), ba)).unwrap());
    }

    #[test]
    fn empty_intersection_is_rejected() {
        let mut kb = KnowledgeBase::new();
        let err = kb
            .add_axiom(Axiom::sub_class_of(
                &nis("A"),
                ClassExpression::Intersection(vec![]),
            ))
            .unwrap_err();
        assert_eq!(err, KbError::EmptyIntersection);
        assert!(kb.tbox().is_empty());
    }

    #[test]
    fn cyclic_property_hierarchy_is_rejected() {
        let mut kb = KnowledgeBase::new();
        let (p, q, r) = (nis("p"), nis("q"), nis("r"));
        kb.add_axiom(Axiom::sub_property_of(&p, &q)).unwrap();
        kb.add_axiom(Axiom::sub_property_of(&q, &r)).unwrap();
        kb.add_axiom(Axiom::sub_property_of(&p, &p)).unwrap();
        assert!(matches!(
            kb.add_axiom(Axiom::sub_property_of(&r, &p)),
            Err(KbError::CyclicPropertyHierarchy { .. })
        ));
        let h = kb.property_hierarchy();
        assert!(h.is_sub_property(&p, &r));
        assert!(!h.is_sub_property(&r, &p));
        assert_eq!(h.sub_properties(&r), vec![p.clone(), q.clone(), r.clone()]);
    }

    #[test]
    fn assertions_are_indexed_and_declared() {
        let mut kb = KnowledgeBase::new();
        let i3 = nis("individual3");
        assert!(kb.add_assertion(Assertion::class(&nis("Agent"), &i3)));
        assert!(kb.add_assertion(Assertion::object(&nis("adopt"), &i3, &nis("s1"))));
        assert!(kb.add_assertion(Assertion::data(&nis("SubmissionMonths"), &nis("plan"), 3)));
        assert!(!kb.add_assertion(Assertion::class(&nis("Agent"), &i3)));
        assert_eq!(kb.abox().len(), 3);
        assert_eq!(kb.assertions_about(&i3).count(), 2);
        assert_eq!(kb.assertions_with(&vocab::RDF_TYPE).count(), 1);
        assert!(kb.is_declared(&nis("s1"), EntityKind::Individual));
        assert!(kb.is_declared(&nis("SubmissionMonths"), EntityKind::DataProperty));
        assert!(kb.indexes_consistent());
    }
}
