use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use nis_core::dsl::{ACTOR, NIS_ARTICLES};
use nis_core::kb::{vocab, Iri, KnowledgeBase};
use nis_core::reasoner::SubsumptionMap;

/// Indented class tree under the scaffold roots; classes reaching neither
/// root are listed under `<unrooted>`.
pub fn render(kb: &KnowledgeBase, subs: &SubsumptionMap) -> String {
    let prefixes = kb.prefixes();
    let mut children: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    let mut tops = BTreeSet::new();
    for class in kb.classes() {
        let parents = subs.direct_supers(class);
        if parents.is_empty() {
            tops.insert(class.clone());
        }
        for p in parents {
            children.entry(p).or_default().insert(class.clone());
        }
    }
    // Sort siblings by displayed name.
    let sorted = |set: &BTreeSet<Iri>| {
        let mut v: Vec<Iri> = set.iter().cloned().collect();
        v.sort_by_key(|c| prefixes.compact(c));
        v
    };

    let mut out = String::new();
    let emit = |root: &Iri, depth: usize, out: &mut String| {
        let mut stack = vec![(root.clone(), depth)];
        while let Some((class, d)) = stack.pop() {
            let _ = writeln!(out, "{}{}", "  ".repeat(d), prefixes.compact(&class));
            if let Some(kids) = children.get(&class) {
                for k in sorted(kids).into_iter().rev() {
                    stack.push((k, d + 1));
                }
            }
        }
    };
    let roots = [vocab::nis(ACTOR), vocab::nis(NIS_ARTICLES)];
    for root in &roots {
        if kb.classes().any(|c| c == root) {
            emit(root, 0, &mut out);
        }
    }
    let orphans: BTreeSet<Iri> = tops.into_iter().filter(|c| !roots.contains(c)).collect();
    if !orphans.is_empty() {
        out.push_str("<unrooted>\n");
        for c in sorted(&orphans) {
            emit(&c, 1, &mut out);
        }
    }
    out
}
