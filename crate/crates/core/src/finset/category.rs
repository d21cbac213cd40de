use std::collections::BTreeSet;

use super::{Element, FinFunction, FinSet};
use crate::error::{Error, Result};

/// A finite category presented by tables.
///
/// Composition is stored explicitly; `comp(g, f)` is `g ∘ f` and is defined
/// when `tgt(f) = src(g)`. Nothing here checks the axioms: use
/// [`FiniteCategory::validate`] for that.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: FinSet,
    morphisms: FinSet,
    src: FinFunction,
    tgt: FinFunction,
    identity: FinFunction,
    /// `comp[g * |morphisms| + f]`
    comp: Vec<Option<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl std::fmt::Debug for FiniteCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms)
            .finish_non_exhaustive()
    }
}

impl FiniteCategory {
    /// `comp` entries are `(g, f, g ∘ f)`. Entries for non-composable pairs
    /// and duplicate entries are rejected; missing entries are reported by
    /// [`FiniteCategory::validate`].
    pub fn new(
        objects: FinSet,
        morphisms: FinSet,
        src: FinFunction,
        tgt: FinFunction,
        identity: FinFunction,
        comp: impl IntoIterator<Item = (Element, Element, Element)>,
    ) -> Result<FiniteCategory> {
        for (name, f, d, c) in [
            ("src", &src, &morphisms, &objects),
            ("tgt", &tgt, &morphisms, &objects),
            ("identity", &identity, &objects, &morphisms),
        ] {
            if f.dom() != d || f.cod() != c {
                return Err(Error::Invalid(format!("{name} has the wrong domain or codomain")));
            }
        }
        let n = morphisms.len();
        let mut table = vec![None; n * n];
        for (g, f, gf) in comp {
            let gi = morphisms.require_index(&g, "morphisms")?;
            let fi = morphisms.require_index(&f, "morphisms")?;
            let k = morphisms.require_index(&gf, "morphisms")?;
            if tgt.at(fi) != src.at(gi) {
                return Err(Error::Invalid(format!(
                    "composite {g} ∘ {f} given for a non-composable pair"
                )));
            }
            if table[gi * n + fi].replace(k).is_some() {
                return Err(Error::Invalid(format!("composite {g} ∘ {f} given twice")));
            }
        }
        let mut incoming = vec![Vec::new(); objects.len()];
        for u in 0..n {
            incoming[tgt.at(u)].push(u);
        }
        Ok(FiniteCategory {
            objects,
            morphisms,
            src,
            tgt,
            identity,
            comp: table,
            incoming,
        })
    }

    /// One object `*` with one morphism `id`.
    pub fn terminal() -> FiniteCategory {
        FiniteCategory::group(&["id"], |_, _| 0).expect("terminal category")
    }

    /// The empty category.
    pub fn empty() -> FiniteCategory {
        let e = FinSet::empty();
        FiniteCategory::new(
            e.clone(),
            e.clone(),
            FinFunction::identity(&e),
            FinFunction::identity(&e),
            FinFunction::identity(&e),
            [],
        )
        .expect("empty category")
    }

    /// A one-object category from a multiplication table on named elements.
    /// `mul(g, f)` is the index of `g ∘ f`; index 0 must be the unit.
    pub fn group(names: &[&str], mul: impl Fn(usize, usize) -> usize) -> Result<FiniteCategory> {
        let objects = FinSet::atoms(["*"]);
        let morphisms = FinSet::atoms(names.iter().copied());
        if morphisms.len() != names.len() {
            return Err(Error::Invalid("duplicate element names".into()));
        }
        let to_star = FinFunction::from_fn(morphisms.clone(), objects.clone(), |_| "*".into())?;
        let identity =
            FinFunction::from_fn(objects.clone(), morphisms.clone(), |_| names[0].into())?;
        let mut comp = Vec::new();
        for g in 0..names.len() {
            for f in 0..names.len() {
                comp.push((names[g].into(), names[f].into(), names[mul(g, f)].into()));
            }
        }
        FiniteCategory::new(objects, morphisms, to_star.clone(), to_star, identity, comp)
    }

    /// The category of a preorder: one morphism `(x, y)` whenever `leq(x, y)`.
    pub fn preorder(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Result<FiniteCategory> {
        let objects = FinSet::atoms(names.iter().copied());
        let arrow = |x: usize, y: usize| Element::tuple([names[x].into(), names[y].into()]);
        let mut morphs = Vec::new();
        for x in 0..names.len() {
            for y in 0..names.len() {
                if leq(x, y) {
                    morphs.push((x, y));
                }
            }
        }
        let morphisms = FinSet::new(morphs.iter().map(|&(x, y)| arrow(x, y)));
        let part = |k: usize| {
            FinFunction::from_fn(morphisms.clone(), objects.clone(), |m| {
                m.component(k).cloned().unwrap()
            })
        };
        let identity = FinFunction::from_fn(objects.clone(), morphisms.clone(), |x| {
            Element::tuple([x.clone(), x.clone()])
        })?;
        let mut comp = Vec::new();
        for &(x, y) in &morphs {
            for &(y2, z) in &morphs {
                if y == y2 {
                    comp.push((arrow(y, z), arrow(x, y), arrow(x, z)));
                }
            }
        }
        let (src, tgt) = (part(0)?, part(1)?);
        FiniteCategory::new(objects, morphisms, src, tgt, identity, comp)
    }

    /// A category with the given generating arrows and no composable pairs of
    /// non-identity arrows (the shape of a pullback, wide pullback, equalizer,
    /// and so on). Identities are named `id:<object>`.
    pub fn shape(objects: &[&str], arrows: &[(&str, &str, &str)]) -> Result<FiniteCategory> {
        let obj = FinSet::atoms(objects.iter().copied());
        let id_name = |x: &str| format!("id:{x}");
        let mut names: Vec<(String, String, String)> = objects
            .iter()
            .map(|x| (id_name(x), x.to_string(), x.to_string()))
            .collect();
        names.extend(
            arrows
                .iter()
                .map(|(a, s, t)| (a.to_string(), s.to_string(), t.to_string())),
        );
        for (a, s, _) in arrows {
            if arrows.iter().any(|(_, _, t)| t == s) {
                return Err(Error::Invalid(format!(
                    "shape arrow {a} is composable with another arrow"
                )));
            }
        }
        let morphisms = FinSet::atoms(names.iter().map(|n| n.0.as_str()));
        if morphisms.len() != names.len() {
            return Err(Error::Invalid("duplicate arrow names in shape".into()));
        }
        let src = FinFunction::from_pairs(
            morphisms.clone(),
            obj.clone(),
            names.iter().map(|(a, s, _)| (Element::atom(a), Element::atom(s))),
        )?;
        let tgt = FinFunction::from_pairs(
            morphisms.clone(),
            obj.clone(),
            names.iter().map(|(a, _, t)| (Element::atom(a), Element::atom(t))),
        )?;
        let identity = FinFunction::from_fn(obj.clone(), morphisms.clone(), |x| {
            Element::atom(id_name(x.as_atom().unwrap()))
        })?;
        let mut comp = Vec::new();
        for (a, s, t) in &names {
            comp.push((Element::atom(id_name(t)), Element::atom(a), Element::atom(a)));
            if s != t {
                comp.push((Element::atom(a), Element::atom(id_name(s)), Element::atom(a)));
            }
        }
        FiniteCategory::new(obj, morphisms, src, tgt, identity, comp)
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.morphisms
    }

    pub fn src_fn(&self) -> &FinFunction {
        &self.src
    }

    pub fn tgt_fn(&self) -> &FinFunction {
        &self.tgt
    }

    pub fn identity_fn(&self) -> &FinFunction {
        &self.identity
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src.at(f)
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt.at(f)
    }

    pub fn id(&self, x: usize) -> usize {
        self.identity.at(x)
    }

    /// `g ∘ f`, if the table defines it.
    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.morphisms.len() + f]
    }

    /// `g ∘ f` for a validated category and a composable pair.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.comp(g, f).expect("composite of a composable pair in a validated category")
    }

    /// All `(g, f, g ∘ f)` entries of the table.
    pub fn comp_entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.morphisms.len();
        self.comp
            .iter()
            .enumerate()
            .filter_map(move |(k, c)| c.map(|gf| (k / n, k % n, gf)))
    }

    /// Morphisms with target `c`.
    pub fn incoming(&self, c: usize) -> &[usize] {
        &self.incoming[c]
    }

    /// Morphisms `d → c`.
    pub fn hom(&self, d: usize, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.incoming[c].iter().copied().filter(move |&u| self.src(u) == d)
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.id(self.src(f)) == f
    }

    /// Every violated axiom; empty iff this is a category.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = |f: usize| self.morphisms.get(f);
        for x in 0..self.num_objects() {
            let i = self.id(x);
            if self.src(i) != x || self.tgt(i) != x {
                out.push(format!(
                    "identity {} of {} has the wrong endpoints",
                    m(i),
                    self.objects.get(x)
                ));
            }
        }
        let n = self.num_morphisms();
        for g in 0..n {
            for f in 0..n {
                let composable = self.tgt(f) == self.src(g);
                match (composable, self.comp(g, f)) {
                    (true, None) => out.push(format!("composite {} ∘ {} is missing", m(g), m(f))),
                    (true, Some(gf)) => {
                        if self.src(gf) != self.src(f) || self.tgt(gf) != self.tgt(g) {
                            out.push(format!(
                                "composite {} ∘ {} = {} has the wrong endpoints",
                                m(g),
                                m(f),
                                m(gf)
                            ));
                        }
                    }
                    (false, Some(_)) => {
                        out.push(format!("composite {} ∘ {} of a non-composable pair", m(g), m(f)))
                    }
                    (false, None) => {}
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in 0..n {
            if self.compose(self.id(self.tgt(f)), f) != f {
                out.push(format!("left unit law fails at {}", m(f)));
            }
            if self.compose(f, self.id(self.src(f))) != f {
                out.push(format!("right unit law fails at {}", m(f)));
            }
        }
        for f in 0..n {
            for g in self.outgoing_from(self.tgt(f)) {
                for h in self.outgoing_from(self.tgt(g)) {
                    let left = self.compose(h, self.compose(g, f));
                    let right = self.compose(self.compose(h, g), f);
                    if left != right {
                        out.push(format!(
                            "associativity fails at ({}, {}, {}): {} ≠ {}",
                            m(h),
                            m(g),
                            m(f),
                            m(left),
                            m(right)
                        ));
                    }
                }
            }
        }
        out
    }

    fn outgoing_from(&self, x: usize) -> Vec<usize> {
        (0..self.num_morphisms()).filter(|&g| self.src(g) == x).collect()
    }

    /// Invertible morphisms, by brute force over candidate inverses.
    pub fn isomorphisms(&self) -> BTreeSet<usize> {
        (0..self.num_morphisms())
            .filter(|&f| {
                let (x, y) = (self.src(f), self.tgt(f));
                self.hom(x, y).count() > 0
                    && self.hom(y, x).any(|g| {
                        self.compose(g, f) == self.id(x) && self.compose(f, g) == self.id(y)
                    })
            })
            .collect()
    }

    /// No isomorphisms besides identities.
    pub fn is_gaunt(&self) -> bool {
        self.isomorphisms().iter().all(|&f| self.is_identity(f))
    }

    /// Replaces one composite. Used to build broken tables for testing.
    pub fn with_composite(&self, g: &Element, f: &Element, gf: &Element) -> Result<FiniteCategory> {
        let gi = self.morphisms.require_index(g, "morphisms")?;
        let fi = self.morphisms.require_index(f, "morphisms")?;
        let k = self.morphisms.require_index(gf, "morphisms")?;
        let mut out = self.clone();
        let n = self.num_morphisms();
        out.comp[gi * n + fi] = Some(k);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> FiniteCategory {
        FiniteCategory::group(&["e", "g"], |a, b| a ^ b).unwrap()
    }

    #[test]
    fn terminal_and_c2_are_valid() {
        assert!(FiniteCategory::terminal().validate().is_empty());
        assert!(c2().validate().is_empty());
        assert!(FiniteCategory::empty().validate().is_empty());
    }

    #[test]
    fn broken_c2_reports_associativity() {
        let bad = c2()
            .with_composite(&"g".into(), &"g".into(), &"g".into())
            .unwrap();
        let report = bad.validate();
        // brute force over all triples of {e, g}
        let mul = |a: usize, b: usize| if a == 1 && b == 1 { 1 } else { a | b };
        let brute = (0..2)
            .flat_map(|h| (0..2).flat_map(move |g| (0..2).map(move |f| (h, g, f))))
            .any(|(h, g, f)| mul(h, mul(g, f)) != mul(mul(h, g), f));
        assert_eq!(brute, report.iter().any(|r| r.contains("associativity")));
        // g∘g = g with e the unit: (g∘g)∘g = g = g∘(g∘g), so the table is
        // actually a valid monoid {e, g} with g idempotent.
        assert!(!brute);
        assert!(report.is_empty());
    }

    #[test]
    fn broken_unit_and_associativity_reported() {
        // Z3 with one entry changed: g ∘ g = e instead of g²
        let z3 = FiniteCategory::group(&["e", "g", "h"], |a, b| (a + b) % 3).unwrap();
        let bad = z3.with_composite(&"g".into(), &"g".into(), &"e".into()).unwrap();
        let report = bad.validate();
        assert!(report.iter().any(|r| r.contains("associativity")), "{report:?}");
    }

    #[test]
    fn preorder_chain() {
        let chain = FiniteCategory::preorder(&["0", "1"], |x, y| x <= y).unwrap();
        assert_eq!(chain.num_morphisms(), 3);
        assert!(chain.validate().is_empty());
        assert!(chain.is_gaunt());
    }

    #[test]
    fn group_is_not_gaunt() {
        assert_eq!(c2().isomorphisms().len(), 2);
        assert!(!c2().is_gaunt());
    }

    #[test]
    fn shape_rejects_composable_arrows() {
        assert!(FiniteCategory::shape(&["a", "b", "c"], &[("f", "a", "b"), ("g", "b", "c")]).is_err());
        let pb = FiniteCategory::shape(&["a", "b", "c"], &[("f", "a", "c"), ("g", "b", "c")]).unwrap();
        assert!(pb.validate().is_empty());
        assert_eq!(pb.num_morphisms(), 5);
    }
}
