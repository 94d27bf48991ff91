use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, LazyLock};

use super::KbError;

/// An expanded IRI. Cheap to clone; ordering and equality use the expanded text.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(expanded: impl AsRef<str>) -> Self {
        Iri(Arc::from(expanded.as_ref()))
    }

    /// Joins a namespace expansion and a local name.
    pub fn from_parts(namespace: &str, local: &str) -> Self {
        let mut s = String::with_capacity(namespace.len() + local.len());
        s.push_str(namespace);
        s.push_str(local);
        Iri(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Text after the last `#`, `/` or `:`.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['#', '/', ':']) {
            Some(i) => &s[i + 1..],
            None => s,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl serde::Serialize for Iri {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD_NS: &str = "http://www.w3.org/2001/XMLSchema#";
/// Namespace of the directive vocabulary.
pub const NIS_NS: &str = "urn:nis#";

/// Well-known vocabulary terms.
pub mod vocab {
    use super::*;

    macro_rules! term {
        ($name:ident, $ns:expr, $local:literal) => {
            pub static $name: LazyLock<Iri> = LazyLock::new(|| Iri::from_parts($ns, $local));
        };
    }

    term!(RDF_TYPE, RDF_NS, "type");
    term!(RDF_FIRST, RDF_NS, "first");
    term!(RDF_REST, RDF_NS, "rest");
    term!(RDF_NIL, RDF_NS, "nil");
    term!(RDFS_SUBCLASS_OF, RDFS_NS, "subClassOf");
    term!(RDFS_SUBPROPERTY_OF, RDFS_NS, "subPropertyOf");
    term!(OWL_CLASS, OWL_NS, "Class");
    term!(OWL_OBJECT_PROPERTY, OWL_NS, "ObjectProperty");
    term!(OWL_DATATYPE_PROPERTY, OWL_NS, "DatatypeProperty");
    term!(OWL_NAMED_INDIVIDUAL, OWL_NS, "NamedIndividual");
    term!(OWL_RESTRICTION, OWL_NS, "Restriction");
    term!(OWL_EQUIVALENT_CLASS, OWL_NS, "equivalentClass");
    term!(OWL_INTERSECTION_OF, OWL_NS, "intersectionOf");
    term!(OWL_ON_PROPERTY, OWL_NS, "onProperty");
    term!(OWL_SOME_VALUES_FROM, OWL_NS, "someValuesFrom");
    term!(OWL_HAS_VALUE, OWL_NS, "hasValue");
    term!(XSD_MAX_INCLUSIVE, XSD_NS, "maxInclusive");
    term!(XSD_MIN_INCLUSIVE, XSD_NS, "minInclusive");
    term!(XSD_INT, XSD_NS, "int");
    term!(XSD_INTEGER, XSD_NS, "integer");

    /// True for IRIs in the RDF, RDFS, OWL or XSD namespaces.
    pub fn is_reserved(iri: &Iri) -> bool {
        [RDF_NS, RDFS_NS, OWL_NS, XSD_NS]
            .iter()
            .any(|ns| iri.as_str().starts_with(ns))
    }

    pub fn nis(local: &str) -> Iri {
        Iri::from_parts(NIS_NS, local)
    }
}

/// Short label → namespace expansion.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrefixMap {
    map: BTreeMap<String, String>,
}

impl PrefixMap {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The `owl`, `rdf`, `rdfs` and `xsd` prefixes.
    pub fn standard() -> Self {
        let mut p = Self::default();
        p.insert("owl", OWL_NS);
        p.insert("rdf", RDF_NS);
        p.insert("rdfs", RDFS_NS);
        p.insert("xsd", XSD_NS);
        p
    }

    pub fn insert(&mut self, label: impl Into<String>, expansion: impl Into<String>) {
        self.map.insert(label.into(), expansion.into());
    }

    pub fn get(&self, label: &str) -> Option<&str> {
        self.map.get(label).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Adds every label of `other` that is not already bound here.
    pub fn absorb(&mut self, other: &PrefixMap) {
        for (k, v) in other.iter() {
            self.map
                .entry(k.to_string())
                .or_insert_with(|| v.to_string());
        }
    }

    /// Resolves `label:local` or `<full-iri>` text.
    pub fn expand(&self, text: &str) -> Result<Iri, KbError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) {
            if inner.is_empty() {
                return Err(KbError::InvalidIri(text.to_string()));
            }
            return Ok(Iri::new(inner));
        }
        let (label, local) = text
            .split_once(':')
            .ok_or_else(|| KbError::InvalidIri(text.to_string()))?;
        if local.is_empty() {
            return Err(KbError::InvalidIri(text.to_string()));
        }
        let ns = self
            .get(label)
            .ok_or_else(|| KbError::UnknownPrefix(label.to_string()))?;
        Ok(Iri::from_parts(ns, local))
    }

    /// Shortest `label:local` rendering, or `<iri>` when no prefix applies.
    pub fn compact(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        let best = self
            .map
            .iter()
            .filter(|(_, ns)| s.starts_with(ns.as_str()) && is_pn_local(&s[ns.len()..]))
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)));
        match best {
            Some((label, ns)) => format!("{label}:{}", &s[ns.len()..]),
            None => format!("<{s}>"),
        }
    }
}

/// The local-name characters accepted by the Turtle reader.
pub fn is_pn_local(local: &str) -> bool {
    let mut chars = local.chars();
    match chars.next() {
        Some(c) if c.is_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    !local.ends_with('.')
        && local
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_uses_expanded_form() {
        let mut p = PrefixMap::standard();
        p.insert("nis", NIS_NS);
        p.insert("n2", NIS_NS);
        let a = p.expand("nis:MemberState").unwrap();
        let b = p.expand("n2:MemberState").unwrap();
        let c = p.expand("<urn:nis#MemberState>").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.local_name(), "MemberState");
    }

    #[test]
    fn expand_rejects_unknown_prefix_and_empty_local() {
        let p = PrefixMap::standard();
        assert!(matches!(p.expand("nis:X"), Err(KbError::UnknownPrefix(l)) if l == "nis"));
        assert!(matches!(p.expand("owl:"), Err(KbError::InvalidIri(_))));
        assert!(matches!(p.expand("noColon"), Err(KbError::InvalidIri(_))));
    }

    #[test]
    fn compact_prefers_longest_namespace() {
        let mut p = PrefixMap::standard();
        p.insert("a", "urn:x#");
        p.insert("b", "urn:x#sub/");
        assert_eq!(p.compact(&Iri::new("urn:x#sub/Thing")), "b:Thing");
        assert_eq!(
            p.compact(&Iri::new("urn:x#Article10-MemberState")),
            "a:Article10-MemberState"
        );
        assert_eq!(p.compact(&Iri::new("urn:other")), "<urn:other>");
        assert_eq!(p.compact(&Iri::new("urn:x#bad local")), "<urn:x#bad local>");
    }
}
