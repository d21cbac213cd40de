use crate::error::{Error, Result, DEFAULT_BOUND};
use crate::finset::{Element, FinFunction, FinSet, FiniteCategory};

/// A finite presheaf topos `Set^(C^op)` over a validated index category.
#[derive(Clone, Debug)]
pub struct Topos {
    index: FiniteCategory,
    bound: usize,
}

impl Topos {
    pub fn new(index: FiniteCategory) -> Result<Topos> {
        let violations = index.validate();
        if !violations.is_empty() {
            return Err(Error::Invalid(format!(
                "index category: {}",
                violations.join("; ")
            )));
        }
        Ok(Topos {
            index,
            bound: DEFAULT_BOUND,
        })
    }

    /// Finite sets: presheaves on the terminal category.
    pub fn finset() -> Topos {
        Topos::new(FiniteCategory::terminal()).expect("terminal category is valid")
    }

    pub fn with_bound(mut self, bound: usize) -> Topos {
        self.bound = bound;
        self
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn index(&self) -> &FiniteCategory {
        &self.index
    }

    pub fn num_objects(&self) -> usize {
        self.index.num_objects()
    }

    /// Builds and validates a presheaf. `restrict[u]` for `u: c → d` must be a
    /// function `at[d] → at[c]`.
    pub fn presheaf(&self, at: Vec<FinSet>, restrict: Vec<FinFunction>) -> Result<Presheaf> {
        let p = Presheaf { at, restrict };
        self.check_presheaf(&p)?;
        Ok(p)
    }

    /// Builds a presheaf from the action of every non-identity morphism given
    /// by name; identities are filled in.
    pub fn presheaf_from_actions(
        &self,
        at: Vec<FinSet>,
        actions: &[(Element, FinFunction)],
    ) -> Result<Presheaf> {
        let c = &self.index;
        let mut restrict: Vec<Option<FinFunction>> = vec![None; c.num_morphisms()];
        for x in 0..c.num_objects() {
            restrict[c.id(x)] = Some(FinFunction::identity(&at[x]));
        }
        for (name, f) in actions {
            let u = c.morphisms().require_index(name, "index morphisms")?;
            if c.is_identity(u) {
                if Some(f) != restrict[u].as_ref() {
                    return Err(Error::Invalid(format!("identity {name} must act trivially")));
                }
                continue;
            }
            restrict[u] = Some(f.clone());
        }
        let restrict = restrict
            .into_iter()
            .enumerate()
            .map(|(u, f)| {
                f.ok_or_else(|| {
                    Error::Invalid(format!("no action given for {}", c.morphisms().get(u)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.presheaf(at, restrict)
    }

    pub fn check_presheaf(&self, p: &Presheaf) -> Result<()> {
        let c = &self.index;
        if p.at.len() != c.num_objects() || p.restrict.len() != c.num_morphisms() {
            return Err(Error::NotFunctorial("presheaf size does not match the index".into()));
        }
        for u in 0..c.num_morphisms() {
            let r = &p.restrict[u];
            if r.dom() != &p.at[c.tgt(u)] || r.cod() != &p.at[c.src(u)] {
                return Err(Error::NotFunctorial(format!(
                    "restriction along {} has the wrong endpoints",
                    c.morphisms().get(u)
                )));
            }
        }
        for x in 0..c.num_objects() {
            if p.restrict[c.id(x)] != FinFunction::identity(&p.at[x]) {
                return Err(Error::NotFunctorial(format!(
                    "restriction along the identity of {} is not the identity",
                    c.objects().get(x)
                )));
            }
        }
        for (g, f, gf) in c.comp_entries() {
            // P(g ∘ f) = P(f) ∘ P(g)
            if p.restrict[g].then_unchecked(&p.restrict[f]) != p.restrict[gf] {
                return Err(Error::NotFunctorial(format!(
                    "restriction along {} ∘ {} is not contravariantly functorial",
                    c.morphisms().get(g),
                    c.morphisms().get(f)
                )));
            }
        }
        Ok(())
    }

    /// Builds and validates a natural transformation.
    pub fn nat(&self, dom: &Presheaf, cod: &Presheaf, components: Vec<FinFunction>) -> Result<NatTrans> {
        let t = NatTrans {
            dom: dom.clone(),
            cod: cod.clone(),
            components,
        };
        self.check_nat(&t)?;
        Ok(t)
    }

    pub fn check_nat(&self, t: &NatTrans) -> Result<()> {
        let c = &self.index;
        if t.components.len() != c.num_objects() {
            return Err(Error::NotNatural("wrong number of components".into()));
        }
        for x in 0..c.num_objects() {
            let k = &t.components[x];
            if k.dom() != &t.dom.at[x] || k.cod() != &t.cod.at[x] {
                return Err(Error::NotNatural(format!(
                    "component at {} has the wrong endpoints",
                    c.objects().get(x)
                )));
            }
        }
        for u in 0..c.num_morphisms() {
            if c.is_identity(u) {
                continue;
            }
            let (s, d) = (c.src(u), c.tgt(u));
            let left = t.dom.restrict[u].then_unchecked(&t.components[s]);
            let right = t.components[d].then_unchecked(&t.cod.restrict[u]);
            if left != right {
                return Err(Error::NotNatural(format!(
                    "naturality square for {} does not commute",
                    c.morphisms().get(u)
                )));
            }
        }
        Ok(())
    }

    /// Builds a natural transformation elementwise and validates it.
    pub fn nat_from_fn(
        &self,
        dom: &Presheaf,
        cod: &Presheaf,
        mut f: impl FnMut(usize, &Element) -> Element,
    ) -> Result<NatTrans> {
        let components = (0..self.num_objects())
            .map(|x| FinFunction::from_fn(dom.at[x].clone(), cod.at[x].clone(), |e| f(x, e)))
            .collect::<Result<Vec<_>>>()?;
        self.nat(dom, cod, components)
    }

    /// The constant presheaf at a set.
    pub fn constant(&self, set: &FinSet) -> Presheaf {
        let c = &self.index;
        Presheaf {
            at: vec![set.clone(); c.num_objects()],
            restrict: vec![FinFunction::identity(set); c.num_morphisms()],
        }
    }

    /// The constant-singleton presheaf.
    pub fn terminal(&self) -> Presheaf {
        self.constant(&FinSet::singleton())
    }

    /// The constant-empty presheaf.
    pub fn initial(&self) -> Presheaf {
        self.constant(&FinSet::empty())
    }

    pub fn identity(&self, p: &Presheaf) -> NatTrans {
        NatTrans::identity(p)
    }

    /// The unique map to the terminal presheaf.
    pub fn to_terminal(&self, p: &Presheaf) -> NatTrans {
        NatTrans {
            dom: p.clone(),
            cod: self.terminal(),
            components: p.at.iter().map(FinFunction::to_singleton).collect(),
        }
    }

    /// The unique map out of the initial presheaf.
    pub fn from_initial(&self, p: &Presheaf) -> NatTrans {
        let init = self.initial();
        NatTrans {
            components: p
                .at
                .iter()
                .map(|s| FinFunction::from_indices_unchecked(FinSet::empty(), s.clone(), vec![]))
                .collect(),
            dom: init,
            cod: p.clone(),
        }
    }

    /// `y(c)`: at `d` the morphisms `d → c`, restricted by precomposition.
    pub fn representable(&self, c: usize) -> Presheaf {
        let cat = &self.index;
        let at: Vec<FinSet> = (0..cat.num_objects())
            .map(|d| FinSet::new(cat.hom(d, c).map(|u| cat.morphisms().get(u).clone())))
            .collect();
        let restrict = (0..cat.num_morphisms())
            .map(|w| {
                // w: d' → d, y(c)(d) → y(c)(d'), u ↦ u ∘ w
                let (d2, d) = (cat.src(w), cat.tgt(w));
                let map = at[d]
                    .iter()
                    .map(|m| {
                        let u = cat.morphisms().index_of(m).unwrap();
                        let uw = cat.compose(u, w);
                        at[d2].index_of(cat.morphisms().get(uw)).unwrap()
                    })
                    .collect();
                FinFunction::from_indices_unchecked(at[d].clone(), at[d2].clone(), map)
            })
            .collect();
        Presheaf { at, restrict }
    }

    /// The Yoneda map `y(c) → P` classifying `x ∈ P(c)`: `u ↦ P(u)(x)`.
    pub fn yoneda(&self, c: usize, p: &Presheaf, x: usize) -> NatTrans {
        let cat = &self.index;
        let yc = self.representable(c);
        let components = (0..cat.num_objects())
            .map(|d| {
                let map = yc.at[d]
                    .iter()
                    .map(|m| p.restrict[cat.morphisms().index_of(m).unwrap()].at(x))
                    .collect();
                FinFunction::from_indices_unchecked(yc.at[d].clone(), p.at[d].clone(), map)
            })
            .collect();
        NatTrans {
            dom: yc,
            cod: p.clone(),
            components,
        }
    }

    /// `g ∘ f`, checking that the endpoints match.
    pub fn compose(&self, g: &NatTrans, f: &NatTrans) -> Result<NatTrans> {
        f.then(g)
    }

    /// Global elements `1 → P` are exactly the elements of the limit of P,
    /// i.e. compatible families; here returned as natural transformations.
    pub fn global_elements(&self, p: &Presheaf) -> Result<Vec<NatTrans>> {
        let one = self.terminal();
        Ok(crate::topos::HomSearch::new(self, &one, p)
            .run()?
            .into_iter()
            .map(|t| self.nat_unchecked(&one, p, t))
            .collect())
    }

    pub(crate) fn nat_unchecked(&self, dom: &Presheaf, cod: &Presheaf, tables: Vec<Vec<usize>>) -> NatTrans {
        let components = tables
            .into_iter()
            .enumerate()
            .map(|(x, t)| FinFunction::from_indices_unchecked(dom.at[x].clone(), cod.at[x].clone(), t))
            .collect();
        NatTrans {
            dom: dom.clone(),
            cod: cod.clone(),
            components,
        }
    }
}

/// A presheaf: a finite set per index object and a restriction function per
/// index morphism, contravariantly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Presheaf {
    at: Vec<FinSet>,
    restrict: Vec<FinFunction>,
}

impl Presheaf {
    pub(crate) fn from_parts_unchecked(at: Vec<FinSet>, restrict: Vec<FinFunction>) -> Presheaf {
        Presheaf { at, restrict }
    }

    pub fn at(&self, c: usize) -> &FinSet {
        &self.at[c]
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.at
    }

    /// Restriction along the index morphism `u: c → d`, a function `P(d) → P(c)`.
    pub fn restrict(&self, u: usize) -> &FinFunction {
        &self.restrict[u]
    }

    pub fn restrictions(&self) -> &[FinFunction] {
        &self.restrict
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.at.iter().map(FinSet::len).collect()
    }

    pub fn total_size(&self) -> usize {
        self.at.iter().map(FinSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.at.iter().all(FinSet::is_empty)
    }
}

/// A natural transformation between presheaves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NatTrans {
    dom: Presheaf,
    cod: Presheaf,
    components: Vec<FinFunction>,
}

impl NatTrans {
    pub fn identity(p: &Presheaf) -> NatTrans {
        NatTrans {
            dom: p.clone(),
            cod: p.clone(),
            components: p.at.iter().map(FinFunction::identity).collect(),
        }
    }

    pub fn dom(&self) -> &Presheaf {
        &self.dom
    }

    pub fn cod(&self) -> &Presheaf {
        &self.cod
    }

    pub fn component(&self, c: usize) -> &FinFunction {
        &self.components[c]
    }

    pub fn components(&self) -> &[FinFunction] {
        &self.components
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans> {
        if self.cod != other.dom {
            return Err(Error::Invalid(
                "composing natural transformations with mismatched endpoints".into(),
            ));
        }
        Ok(NatTrans {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(f, g)| f.then_unchecked(g))
                .collect(),
        })
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(FinFunction::is_injective)
    }

    pub fn is_epi(&self) -> bool {
        self.components.iter().all(FinFunction::is_surjective)
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(FinFunction::is_bijective)
    }

    /// Pointwise image membership: does `x ∈ cod(c)` lie in the image?
    pub fn hits(&self, c: usize, x: usize) -> bool {
        self.components[c].indices().contains(&x)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<NatTrans> {
        if !self.is_iso() {
            return Err(Error::Precondition("inverting a non-isomorphism".into()));
        }
        let components = self
            .components
            .iter()
            .map(|f| {
                let mut inv = vec![0; f.dom().len()];
                for (i, &j) in f.indices().iter().enumerate() {
                    inv[j] = i;
                }
                FinFunction::from_indices_unchecked(f.cod().clone(), f.dom().clone(), inv)
            })
            .collect();
        Ok(NatTrans {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            components,
        })
    }
}

/// An object of a slice topos: a presheaf with a map to the base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SliceMap {
    pub total: Presheaf,
    pub proj: NatTrans,
}

impl SliceMap {
    pub fn new(proj: NatTrans) -> SliceMap {
        SliceMap {
            total: proj.dom().clone(),
            proj,
        }
    }

    pub fn base(&self) -> &Presheaf {
        self.proj.cod()
    }
}
