use std::cmp::Ordering;
use std::fmt;

use super::Iri;

/// Comparison carried by a data restriction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Facet {
    MaxInclusive,
    MinInclusive,
    Exact,
}

impl Facet {
    /// Whether `value` meets this facet at `bound`.
    pub fn admits(self, bound: i64, value: i64) -> bool {
        match self {
            Facet::MaxInclusive => value <= bound,
            Facet::MinInclusive => value >= bound,
            Facet::Exact => value == bound,
        }
    }

    /// Whether every value admitted by `(self, bound)` is admitted by `(other, other_bound)`.
    pub fn implies(self, bound: i64, other: Facet, other_bound: i64) -> bool {
        match (self, other) {
            (Facet::MaxInclusive, Facet::MaxInclusive) => bound <= other_bound,
            (Facet::MinInclusive, Facet::MinInclusive) => bound >= other_bound,
            (Facet::Exact, _) => other.admits(other_bound, bound),
            _ => false,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Facet::MaxInclusive => "max",
            Facet::MinInclusive => "min",
            Facet::Exact => "exact",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Facet> {
        match word {
            "max" => Some(Facet::MaxInclusive),
            "min" => Some(Facet::MinInclusive),
            "exact" => Some(Facet::Exact),
            _ => None,
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// The class expressions of the supported fragment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpression {
    Named(Iri),
    Intersection(Vec<ClassExpression>),
    ObjectSome {
        property: Iri,
        filler: Box<ClassExpression>,
    },
    DataFacet {
        property: Iri,
        facet: Facet,
        bound: i64,
    },
}

impl ClassExpression {
    pub fn named(iri: &Iri) -> Self {
        ClassExpression::Named(iri.clone())
    }

    pub fn some(property: &Iri, filler: ClassExpression) -> Self {
        ClassExpression::ObjectSome {
            property: property.clone(),
            filler: Box::new(filler),
        }
    }

    pub fn facet(property: &Iri, facet: Facet, bound: i64) -> Self {
        ClassExpression::DataFacet {
            property: property.clone(),
            facet,
            bound,
        }
    }

    /// The IRI used to order conjuncts: the class name, or the restricted property.
    pub fn head(&self) -> Option<&Iri> {
        match self {
            ClassExpression::Named(c) => Some(c),
            ClassExpression::ObjectSome { property, .. }
            | ClassExpression::DataFacet { property, .. } => Some(property),
            ClassExpression::Intersection(cs) => cs.first().and_then(ClassExpression::head),
        }
    }

    fn conjunct_order(&self, other: &Self) -> Ordering {
        self.head().cmp(&other.head()).then_with(|| self.cmp(other))
    }

    /// Flattens nested intersections, drops duplicate conjuncts, sorts the rest
    /// and collapses singleton intersections.
    pub fn normalize(&self) -> ClassExpression {
        match self {
            ClassExpression::Named(_) | ClassExpression::DataFacet { .. } => self.clone(),
            ClassExpression::ObjectSome { property, filler } => ClassExpression::ObjectSome {
                property: property.clone(),
                filler: Box::new(filler.normalize()),
            },
            ClassExpression::Intersection(conjuncts) => {
                let mut flat = Vec::with_capacity(conjuncts.len());
                for c in conjuncts {
                    match c.normalize() {
                        ClassExpression::Intersection(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                flat.sort_by(Self::conjunct_order);
                flat.dedup();
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    ClassExpression::Intersection(flat)
                }
            }
        }
    }

    /// Top-level conjuncts; a non-intersection is its own single conjunct.
    pub fn conjuncts(&self) -> &[ClassExpression] {
        match self {
            ClassExpression::Intersection(cs) => cs,
            other => std::slice::from_ref(other),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ClassExpression::Named(_) | ClassExpression::DataFacet { .. } => 1,
            ClassExpression::ObjectSome { filler, .. } => 1 + filler.depth(),
            ClassExpression::Intersection(cs) => 1 + cs.iter().map(Self::depth).max().unwrap_or(0),
        }
    }

    /// True when some intersection anywhere in the expression has no conjuncts.
    pub(crate) fn has_empty_intersection(&self) -> bool {
        match self {
            ClassExpression::Intersection(cs) => {
                cs.is_empty() || cs.iter().any(Self::has_empty_intersection)
            }
            ClassExpression::ObjectSome { filler, .. } => filler.has_empty_intersection(),
            _ => false,
        }
    }

    /// Calls `visit` on this expression and every sub-expression, outermost first.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a ClassExpression)) {
        visit(self);
        match self {
            ClassExpression::Intersection(cs) => cs.iter().for_each(|c| c.walk(visit)),
            ClassExpression::ObjectSome { filler, .. } => filler.walk(visit),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(s: &str) -> ClassExpression {
        ClassExpression::Named(Iri::new(format!("urn:t#{s}")))
    }

    #[test]
    fn named_is_unchanged() {
        assert_eq!(n("Agent").normalize(), n("Agent"));
    }

    #[test]
    fn nested_intersections_flatten() {
        let e = ClassExpression::Intersection(vec![
            n("A"),
            ClassExpression::Intersection(vec![n("B"), n("C")]),
        ]);
        assert_eq!(
            e.normalize(),
            ClassExpression::Intersection(vec![n("A"), n("B"), n("C")])
        );
    }

    #[test]
    fn duplicate_conjunct_collapses() {
        let e = ClassExpression::Intersection(vec![n("A"), n("A")]);
        assert_eq!(e.normalize(), n("A"));
    }

    #[test]
    fn conjuncts_sorted_by_head() {
        let p = Iri::new("urn:t#b");
        let e =
            ClassExpression::Intersection(vec![n("c"), ClassExpression::some(&p, n("Z")), n("a")]);
        let heads: Vec<_> = e
            .normalize()
            .conjuncts()
            .iter()
            .map(|c| c.head().unwrap().local_name().to_string())
            .collect();
        assert_eq!(heads, ["a", "b", "c"]);
    }

    #[test]
    fn facet_implication() {
        use Facet::*;
        assert!(MaxInclusive.implies(2, MaxInclusive, 3));
        assert!(!MaxInclusive.implies(4, MaxInclusive, 3));
        assert!(MinInclusive.implies(5, MinInclusive, 3));
        assert!(Exact.implies(3, MaxInclusive, 3));
        assert!(Exact.implies(3, MinInclusive, 1));
        assert!(!Exact.implies(3, Exact, 4));
        assert!(!MaxInclusive.implies(1, Exact, 1));
        assert!(!MaxInclusive.implies(1, MinInclusive, 0));
    }

    fn arb_expr() -> impl Strategy<Value = ClassExpression> {
        let leaf = prop_oneof![
            (0..4u8).prop_map(|i| n(&format!("C{i}"))),
            (0..2u8, 0..3i64).prop_map(|(p, b)| ClassExpression::facet(
                &Iri::new(format!("urn:t#d{p}")),
                Facet::MaxInclusive,
                b
            )),
        ];
        leaf.prop_recursive(3, 16, 4, |inner| {
            prop_oneof![
                (0..3u8, inner.clone())
                    .prop_map(|(p, f)| ClassExpression::some(&Iri::new(format!("urn:t#p{p}")), f)),
                prop::collection::vec(inner, 1..4).prop_map(ClassExpression::Intersection),
            ]
        })
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(e in arb_expr()) {
            let once = e.normalize();
            prop_assert_eq!(once.normalize(), once);
        }

        #[test]
        fn normalized_intersections_are_flat_and_distinct(e in arb_expr()) {
            let mut ok = true;
            e.normalize().walk(&mut |x| {
                if let ClassExpression::Intersection(cs) = x {
                    ok &= cs.len() >= 2;
                    ok &= !cs.iter().any(|c| matches!(c, ClassExpression::Intersection(_)));
                    ok &= cs.windows(2).all(|w| w[0] != w[1]);
                }
            });
            prop_assert!(ok);
        }
    }
}
