//! Reference reasoner: the same entailment rules applied by naive iteration
//! over an explicit matrix until nothing changes. Slow and obviously correct.

use std::collections::{BTreeMap, BTreeSet};

use nis_core::kb::{Assertion, Axiom, ClassExpression, Iri, KnowledgeBase};
use nis_core::reasoner::{SubsumptionMap, TypeMap};

/// Reflexive-transitive closure of the told sub-property axioms.
pub fn property_closure(kb: &KnowledgeBase) -> BTreeSet<(Iri, Iri)> {
    let mut props: BTreeSet<Iri> = BTreeSet::new();
    let mut rel = BTreeSet::new();
    for a in kb.axioms() {
        if let Axiom::SubPropertyOf { sub, sup } = a {
            props.insert(sub.clone());
            props.insert(sup.clone());
            rel.insert((sub.clone(), sup.clone()));
        }
    }
    for p in &props {
        rel.insert((p.clone(), p.clone()));
    }
    loop {
        let mut next = rel.clone();
        for (a, b) in &rel {
            for (c, d) in &rel {
                if b == c {
                    next.insert((a.clone(), d.clone()));
                }
            }
        }
        if next.len() == rel.len() {
            return rel;
        }
        rel = next;
    }
}

fn sub_property(closure: &BTreeSet<(Iri, Iri)>, p: &Iri, q: &Iri) -> bool {
    p == q || closure.contains(&(p.clone(), q.clone()))
}

fn collect(expr: &ClassExpression, out: &mut BTreeSet<ClassExpression>) {
    out.insert(expr.clone());
    match expr {
        ClassExpression::Intersection(cs) => cs.iter().for_each(|c| collect(c, out)),
        ClassExpression::ObjectSome { filler, .. } => collect(filler, out),
        _ => {}
    }
}

pub fn classify(kb: &KnowledgeBase) -> SubsumptionMap {
    let mut all = BTreeSet::new();
    for c in kb.classes() {
        all.insert(ClassExpression::Named(c.clone()));
    }
    let mut told = Vec::new();
    for a in kb.axioms() {
        match a {
            Axiom::SubClassOf { sub, sup } => {
                collect(sup, &mut all);
                told.push((ClassExpression::Named(sub.clone()), sup.clone()));
            }
            Axiom::EquivalentClasses { named, definition } => {
                collect(definition, &mut all);
                let n = ClassExpression::Named(named.clone());
                told.push((n.clone(), definition.clone()));
                told.push((definition.clone(), n));
            }
            _ => {}
        }
    }
    let nodes: Vec<ClassExpression> = all.into_iter().collect();
    let idx = |e: &ClassExpression| nodes.binary_search(e).expect("node collected");
    let n = nodes.len();
    let props = property_closure(kb);
    let mut sat = vec![vec![false; n]; n];
    for (a, b) in &told {
        sat[idx(a)][idx(b)] = true;
    }
    loop {
        let mut changed = false;
        let mut set = |sat: &mut Vec<Vec<bool>>, x: usize, y: usize| {
            if !sat[x][y] {
                sat[x][y] = true;
                changed = true;
            }
        };
        for x in 0..n {
            set(&mut sat, x, x);
            match &nodes[x] {
                ClassExpression::Intersection(cs) => {
                    for c in cs {
                        set(&mut sat, x, idx(c));
                    }
                }
                ClassExpression::DataFacet {
                    property,
                    facet,
                    bound,
                } => {
                    for y in 0..n {
                        if let ClassExpression::DataFacet {
                            property: q,
                            facet: g,
                            bound: m,
                        } = &nodes[y]
                        {
                            if property == q && facet.implies(*bound, *g, *m) {
                                set(&mut sat, x, y);
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        for x in 0..n {
            for y in 0..n {
                if !sat[x][y] {
                    continue;
                }
                for z in 0..n {
                    if sat[y][z] {
                        set(&mut sat, x, z);
                    }
                }
            }
        }
        for x in 0..n {
            for i in 0..n {
                if let ClassExpression::Intersection(cs) = &nodes[i] {
                    if cs.iter().all(|c| sat[x][idx(c)]) {
                        set(&mut sat, x, i);
                    }
                }
            }
        }
        for r in 0..n {
            let ClassExpression::ObjectSome {
                property: p,
                filler: a,
            } = &nodes[r]
            else {
                continue;
            };
            for s in 0..n {
                let ClassExpression::ObjectSome {
                    property: q,
                    filler: b,
                } = &nodes[s]
                else {
                    continue;
                };
                if sub_property(&props, p, q) && sat[idx(a)][idx(b)] {
                    set(&mut sat, r, s);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut pairs = Vec::new();
    for c in kb.classes() {
        let x = idx(&ClassExpression::Named(c.clone()));
        for d in kb.classes() {
            if sat[x][idx(&ClassExpression::Named(d.clone()))] {
                pairs.push((c.clone(), d.clone()));
            }
        }
    }
    SubsumptionMap::from_pairs(pairs)
}

/// Whether `a` satisfies `expr` given current `types`, by the closed-evidence rules.
pub fn satisfies(
    kb: &KnowledgeBase,
    props: &BTreeSet<(Iri, Iri)>,
    types: &BTreeMap<Iri, BTreeSet<Iri>>,
    a: &Iri,
    expr: &ClassExpression,
) -> bool {
    match expr {
        ClassExpression::Named(c) => types.get(a).is_some_and(|t| t.contains(c)),
        ClassExpression::Intersection(cs) => cs.iter().all(|c| satisfies(kb, props, types, a, c)),
        ClassExpression::ObjectSome { property, filler } => kb.assertions().any(|x| match x {
            Assertion::ObjectPropertyAssertion {
                property: q,
                subject,
                object,
            } => {
                subject == a
                    && sub_property(props, q, property)
                    && satisfies(kb, props, types, object, filler)
            }
            _ => false,
        }),
        ClassExpression::DataFacet {
            property,
            facet,
            bound,
        } => {
            let values: Vec<i64> = kb
                .assertions()
                .filter_map(|x| match x {
                    Assertion::DataPropertyAssertion {
                        property: d,
                        subject,
                        value,
                    } if d == property && subject == a => Some(*value),
                    _ => None,
                })
                .collect();
            !values.is_empty() && values.iter().all(|v| facet.admits(*bound, *v))
        }
    }
}

pub fn realize(kb: &KnowledgeBase, subs: &SubsumptionMap) -> TypeMap {
    let props = property_closure(kb);
    let mut types: BTreeMap<Iri, BTreeSet<Iri>> = kb
        .individuals()
        .map(|i| (i.clone(), BTreeSet::new()))
        .collect();
    for a in kb.assertions() {
        if let Assertion::ClassAssertion { class, individual } = a {
            types.get_mut(individual).unwrap().insert(class.clone());
        }
    }
    loop {
        let before = types.clone();
        for ind in kb.individuals() {
            let current: Vec<Iri> = types[ind].iter().cloned().collect();
            for c in current {
                let supers: Vec<Iri> = kb
                    .classes()
                    .filter(|d| subs.is_subclass(&c, d))
                    .cloned()
                    .collect();
                types.get_mut(ind).unwrap().extend(supers);
            }
            for (class, def) in kb.definitions() {
                if satisfies(kb, &props, &types, ind, def) {
                    types.get_mut(ind).unwrap().insert(class.clone());
                }
            }
        }
        if types == before {
            return TypeMap::from_entries(types);
        }
    }
}
