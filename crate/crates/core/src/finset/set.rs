use std::fmt;
use std::sync::Arc;

use super::Element;
use crate::error::{check_bound, Error, Result, DEFAULT_BOUND};

/// A finite set: sorted, duplicate-free elements.
#[derive(Clone, Eq)]
pub struct FinSet {
    elems: Arc<[Element]>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.elems, &other.elems) || self.elems == other.elems
    }
}

impl std::hash::Hash for FinSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl FinSet {
    pub fn new(elems: impl IntoIterator<Item = Element>) -> FinSet {
        let mut v: Vec<Element> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        FinSet { elems: v.into() }
    }

    pub fn empty() -> FinSet {
        FinSet::new([])
    }

    /// `{()}`, the canonical one-point set.
    pub fn singleton() -> FinSet {
        FinSet::new([Element::unit()])
    }

    /// `{"0", "1", ..., "n-1"}`.
    pub fn range(n: usize) -> FinSet {
        FinSet::new((0..n).map(|i| Element::atom(i.to_string())))
    }

    pub fn atoms<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> FinSet {
        FinSet::new(names.into_iter().map(Element::atom))
    }

    pub(crate) fn from_sorted(v: Vec<Element>) -> FinSet {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]), "unsorted FinSet");
        FinSet { elems: v.into() }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.elems.iter()
    }

    pub fn get(&self, i: usize) -> &Element {
        &self.elems[i]
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.elems.binary_search(x).ok()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.index_of(x).is_some()
    }

    pub(crate) fn require_index(&self, x: &Element, context: &str) -> Result<usize> {
        self.index_of(x).ok_or_else(|| Error::UnknownElement {
            element: x.to_string(),
            context: context.to_string(),
        })
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elems.iter()).finish()
    }
}

/// A total function between finite sets, stored as an index table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFunction {
    dom: FinSet,
    cod: FinSet,
    map: Arc<[usize]>,
}

impl FinFunction {
    /// Builds a function from an association list, which must cover `dom`
    /// exactly once and take values in `cod`.
    pub fn from_pairs(
        dom: FinSet,
        cod: FinSet,
        pairs: impl IntoIterator<Item = (Element, Element)>,
    ) -> Result<FinFunction> {
        let mut map = vec![usize::MAX; dom.len()];
        for (x, y) in pairs {
            let i = dom.require_index(&x, "function domain")?;
            let j = cod.require_index(&y, "function codomain")?;
            if map[i] != usize::MAX {
                return Err(Error::Invalid(format!("function defined twice at {x}")));
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Invalid(format!(
                "function undefined at {}",
                dom.get(i)
            )));
        }
        Ok(FinFunction {
            dom,
            cod,
            map: map.into(),
        })
    }

    /// Builds a function by evaluating `f` on every element of `dom`.
    pub fn from_fn(
        dom: FinSet,
        cod: FinSet,
        mut f: impl FnMut(&Element) -> Element,
    ) -> Result<FinFunction> {
        let map = dom
            .iter()
            .map(|x| cod.require_index(&f(x), "function codomain"))
            .collect::<Result<Vec<_>>>()?;
        Ok(FinFunction {
            dom,
            cod,
            map: map.into(),
        })
    }

    pub fn from_indices(dom: FinSet, cod: FinSet, map: Vec<usize>) -> Result<FinFunction> {
        if map.len() != dom.len() {
            return Err(Error::Invalid(format!(
                "index table has {} entries for a domain of {}",
                map.len(),
                dom.len()
            )));
        }
        if let Some(&j) = map.iter().find(|&&j| j >= cod.len()) {
            return Err(Error::Invalid(format!("index {j} outside codomain")));
        }
        Ok(FinFunction {
            dom,
            cod,
            map: map.into(),
        })
    }

    pub(crate) fn from_indices_unchecked(dom: FinSet, cod: FinSet, map: Vec<usize>) -> FinFunction {
        debug_assert!(map.len() == dom.len() && map.iter().all(|&j| j < cod.len()));
        FinFunction {
            dom,
            cod,
            map: map.into(),
        }
    }

    pub fn identity(set: &FinSet) -> FinFunction {
        FinFunction {
            dom: set.clone(),
            cod: set.clone(),
            map: (0..set.len()).collect::<Vec<_>>().into(),
        }
    }

    /// The unique map into the canonical singleton.
    pub fn to_singleton(set: &FinSet) -> FinFunction {
        FinFunction {
            dom: set.clone(),
            cod: FinSet::singleton(),
            map: vec![0; set.len()].into(),
        }
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    pub fn at(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn apply(&self, x: &Element) -> Option<&Element> {
        self.dom.index_of(x).map(|i| self.cod.get(self.map[i]))
    }

    /// The association table, in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Element, &Element)> + '_ {
        self.dom
            .iter()
            .zip(self.map.iter())
            .map(|(x, &j)| (x, self.cod.get(j)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunction) -> Result<FinFunction> {
        if self.cod != other.dom {
            return Err(Error::Invalid(
                "composing functions with mismatched codomain/domain".into(),
            ));
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &FinFunction) -> FinFunction {
        FinFunction {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            map: self.map.iter().map(|&j| other.map[j]).collect::<Vec<_>>().into(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.map.iter().all(|&j| !std::mem::replace(&mut seen[j], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for &j in self.map.iter() {
            seen[j] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }

    /// Preimage lists indexed by codomain position.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod.len()];
        for (i, &j) in self.map.iter().enumerate() {
            out[j].push(i);
        }
        out
    }
}

impl fmt::Debug for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// Cartesian product with projections. Elements are tuples in factor order;
/// the empty product is `{()}`.
pub fn fin_product(factors: &[FinSet]) -> Result<(FinSet, Vec<FinFunction>)> {
    fin_product_bounded(factors, DEFAULT_BOUND)
}

pub fn fin_product_bounded(
    factors: &[FinSet],
    bound: usize,
) -> Result<(FinSet, Vec<FinFunction>)> {
    let size = factors
        .iter()
        .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
        .unwrap_or(usize::MAX);
    check_bound(|| "finite product".into(), size, bound)?;
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for s in factors {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..s.len()).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    let apex = FinSet::from_sorted(
        tuples
            .iter()
            .map(|t| Element::tuple(t.iter().zip(factors).map(|(&i, s)| s.get(i).clone())))
            .collect(),
    );
    let projections = factors
        .iter()
        .enumerate()
        .map(|(k, s)| {
            FinFunction::from_indices_unchecked(
                apex.clone(),
                s.clone(),
                tuples.iter().map(|t| t[k]).collect(),
            )
        })
        .collect();
    Ok((apex, projections))
}
