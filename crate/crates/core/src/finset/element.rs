use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A canonical term naming a point of a computed set.
///
/// Atoms are user-facing names, tuples are points of limits, and families are
/// points of exponentials and dependent products. The derived ordering is
/// lexicographic on the variant first and then on contents, which gives every
/// computed set a canonical enumeration order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Atom(Arc<str>),
    Tuple(Arc<[Element]>),
    /// Sorted by key, keys pairwise distinct.
    Fam(Arc<[(Element, Element)]>),
}

impl Element {
    pub fn atom(name: impl AsRef<str>) -> Element {
        Element::Atom(Arc::from(name.as_ref()))
    }

    pub fn tuple(items: impl IntoIterator<Item = Element>) -> Element {
        Element::Tuple(items.into_iter().collect::<Vec<_>>().into())
    }

    pub fn unit() -> Element {
        Element::Tuple(Arc::from(Vec::new()))
    }

    /// Builds a family, sorting the entries by key. Duplicate keys are rejected.
    pub fn fam(entries: impl IntoIterator<Item = (Element, Element)>) -> Result<Element> {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Invalid(format!("duplicate family key {}", w[0].0)));
        }
        Ok(Element::Fam(entries.into()))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Element::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Element]> {
        match self {
            Element::Tuple(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_fam(&self) -> Option<&[(Element, Element)]> {
        match self {
            Element::Fam(f) => Some(f),
            _ => None,
        }
    }

    /// Component `i` of a tuple.
    pub fn component(&self, i: usize) -> Option<&Element> {
        self.as_tuple().and_then(|t| t.get(i))
    }

    /// Value of a family at `key`.
    pub fn lookup(&self, key: &Element) -> Option<&Element> {
        let entries = self.as_fam()?;
        entries
            .binary_search_by(|(k, _)| k.cmp(key))
            .ok()
            .map(|i| &entries[i].1)
    }
}

impl From<&str> for Element {
    fn from(s: &str) -> Self {
        Element::atom(s)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(a) => write!(f, "{a}"),
            Element::Tuple(items) => {
                write!(f, "(")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Element::Fam(entries) => {
                write!(f, "{{")?;
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k} => {v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_order_is_atom_tuple_fam() {
        let a = Element::atom("z");
        let t = Element::unit();
        let f = Element::fam([]).unwrap();
        assert!(a < t && t < f);
    }

    #[test]
    fn fam_sorts_and_rejects_duplicates() {
        let f = Element::fam([("b".into(), "1".into()), ("a".into(), "2".into())]).unwrap();
        assert_eq!(f.as_fam().unwrap()[0].0, Element::atom("a"));
        assert_eq!(f.lookup(&"b".into()), Some(&Element::atom("1")));
        assert!(Element::fam([("a".into(), "1".into()), ("a".into(), "2".into())]).is_err());
    }

    #[test]
    fn tuples_compare_lexicographically() {
        let x = Element::tuple(["a".into(), "b".into()]);
        let y = Element::tuple(["a".into(), "c".into()]);
        let z = Element::tuple(["b".into(), "a".into()]);
        assert!(x < y && y < z);
    }
}
