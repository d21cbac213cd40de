use super::{NatTrans, Presheaf, Topos};
use crate::error::{Error, Result};
use crate::finset::{limit_unchecked, Element, FinFunction, FinLimit, FinSet, FiniteCategory};

/// A finite diagram of presheaves (covariant in the shape).
#[derive(Clone, Debug)]
pub struct PsDiagram {
    pub shape: FiniteCategory,
    pub objects: Vec<Presheaf>,
    pub arrows: Vec<NatTrans>,
}

impl PsDiagram {
    /// Diagram over a [`FiniteCategory::shape`], identities filled in.
    /// Shape objects are ordered by name; that order is the component order
    /// of the limit's tuples.
    pub fn over_shape(
        topos: &Topos,
        shape: FiniteCategory,
        objects: Vec<Presheaf>,
        arrows: &[(&str, &NatTrans)],
    ) -> Result<PsDiagram> {
        let mut table: Vec<Option<NatTrans>> = vec![None; shape.num_morphisms()];
        for x in 0..shape.num_objects() {
            table[shape.id(x)] = Some(topos.identity(&objects[x]));
        }
        for (name, f) in arrows {
            let k = shape.morphisms().require_index(&Element::atom(name), "shape arrows")?;
            table[k] = Some((*f).clone());
        }
        let arrows = table
            .into_iter()
            .enumerate()
            .map(|(k, f)| {
                f.ok_or_else(|| {
                    Error::Invalid(format!("no map for shape arrow {}", shape.morphisms().get(k)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PsDiagram {
            shape,
            objects,
            arrows,
        })
    }
}

/// A limit cone of presheaves, computed pointwise.
#[derive(Clone, Debug)]
pub struct PsLimit {
    pub apex: Presheaf,
    pub legs: Vec<NatTrans>,
    pointwise: Vec<FinLimit>,
}

impl PsLimit {
    /// The unique map from `vertex` into the apex commuting with the legs.
    /// Errors if `cone` is not a cone over the diagram.
    pub fn mediate(&self, topos: &Topos, vertex: &Presheaf, cone: &[NatTrans]) -> Result<NatTrans> {
        if cone.len() != self.legs.len() {
            return Err(Error::Invalid("cone has the wrong number of legs".into()));
        }
        for (k, l) in cone.iter().zip(&self.legs) {
            if k.dom() != vertex || k.cod() != l.cod() {
                return Err(Error::Invalid("cone leg has the wrong endpoints".into()));
            }
        }
        let components = (0..topos.num_objects())
            .map(|c| {
                let legs: Vec<FinFunction> = cone.iter().map(|k| k.component(c).clone()).collect();
                self.pointwise[c].mediate_from(vertex.at(c), &legs)
            })
            .collect::<Result<Vec<_>>>()?;
        // naturality follows from that of the legs
        Ok(topos.nat_unchecked(
            vertex,
            &self.apex,
            components.into_iter().map(|f| f.indices().to_vec()).collect(),
        ))
    }

    /// Position of the point with the given component indices at object `c`.
    pub fn position(&self, c: usize, components: &[usize]) -> Option<usize> {
        self.pointwise[c].position(components)
    }

    pub fn components(&self, c: usize, k: usize) -> &[usize] {
        self.pointwise[c].components(k)
    }
}

impl Topos {
    /// Limit of a diagram of presheaves, computed pointwise with restrictions
    /// induced by the universal property.
    pub fn limit(&self, d: &PsDiagram) -> Result<PsLimit> {
        let s = &d.shape;
        if d.objects.len() != s.num_objects() || d.arrows.len() != s.num_morphisms() {
            return Err(Error::NotFunctorial("diagram size does not match its shape".into()));
        }
        for (u, f) in d.arrows.iter().enumerate() {
            if f.dom() != &d.objects[s.src(u)] || f.cod() != &d.objects[s.tgt(u)] {
                return Err(Error::NotFunctorial(format!(
                    "arrow {} has the wrong endpoints",
                    s.morphisms().get(u)
                )));
            }
        }
        let cat = self.index();
        let mut pointwise = Vec::with_capacity(cat.num_objects());
        for c in 0..cat.num_objects() {
            let diagram = crate::finset::Diagram {
                shape: s.clone(),
                objects: d.objects.iter().map(|p| p.at(c).clone()).collect(),
                arrows: d.arrows.iter().map(|f| f.component(c).clone()).collect(),
            };
            diagram.check_functorial()?;
            pointwise.push(limit_unchecked(s, &diagram.objects, &diagram.arrows, self.bound())?);
        }
        let at: Vec<FinSet> = pointwise.iter().map(|l| l.apex.clone()).collect();
        let mut restrict = Vec::with_capacity(cat.num_morphisms());
        let mut buf = vec![0; d.objects.len()];
        for u in 0..cat.num_morphisms() {
            let (c, e) = (cat.src(u), cat.tgt(u));
            let mut map = Vec::with_capacity(at[e].len());
            for k in 0..at[e].len() {
                let t = pointwise[e].components(k);
                for (i, p) in d.objects.iter().enumerate() {
                    buf[i] = p.restrict(u).at(t[i]);
                }
                let j = pointwise[c]
                    .position(&buf)
                    .ok_or_else(|| Error::NotNatural("diagram arrows are not natural".into()))?;
                map.push(j);
            }
            restrict.push(FinFunction::from_indices_unchecked(at[e].clone(), at[c].clone(), map));
        }
        let apex = Presheaf::from_parts_unchecked(at, restrict);
        let legs = (0..d.objects.len())
            .map(|i| {
                self.nat_unchecked(
                    &apex,
                    &d.objects[i],
                    pointwise.iter().map(|l| l.legs[i].indices().to_vec()).collect(),
                )
            })
            .collect();
        Ok(PsLimit {
            apex,
            legs,
            pointwise,
        })
    }

    /// Pullback of `f: A → C` and `g: B → C`; points are `(a, b, c)` and the
    /// legs are in that order.
    pub fn pullback(&self, f: &NatTrans, g: &NatTrans) -> Result<PsLimit> {
        if f.cod() != g.cod() {
            return Err(Error::Invalid("pullback of maps with different codomains".into()));
        }
        let shape = FiniteCategory::shape(&["a", "b", "c"], &[("f", "a", "c"), ("g", "b", "c")])?;
        let d = PsDiagram::over_shape(
            self,
            shape,
            vec![f.dom().clone(), g.dom().clone(), f.cod().clone()],
            &[("f", f), ("g", g)],
        )?;
        self.limit(&d)
    }

    /// Product; points are tuples in factor order, the empty product is terminal.
    pub fn product(&self, factors: &[Presheaf]) -> Result<PsLimit> {
        let names: Vec<String> = (0..factors.len()).map(|i| format!("{i:04}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let shape = FiniteCategory::shape(&refs, &[])?;
        let d = PsDiagram::over_shape(self, shape, factors.to_vec(), &[])?;
        self.limit(&d)
    }

    /// Wide pullback of `maps[i]: X_i → Y`; points are `(x_0, ..., x_{n-1}, y)`.
    pub fn wide_pullback(&self, maps: &[&NatTrans]) -> Result<PsLimit> {
        let Some(first) = maps.first() else {
            return Err(Error::Invalid("wide pullback of no maps".into()));
        };
        let base = first.cod();
        if maps.iter().any(|m| m.cod() != base) {
            return Err(Error::Invalid("wide pullback of maps with different codomains".into()));
        }
        let names: Vec<String> = (0..maps.len()).map(|i| format!("x{i:04}")).collect();
        let arrows: Vec<String> = (0..maps.len()).map(|i| format!("f{i:04}")).collect();
        let mut objs: Vec<&str> = names.iter().map(String::as_str).collect();
        objs.push("y");
        let arrow_list: Vec<(&str, &str, &str)> = arrows
            .iter()
            .zip(&names)
            .map(|(a, x)| (a.as_str(), x.as_str(), "y"))
            .collect();
        let shape = FiniteCategory::shape(&objs, &arrow_list)?;
        let mut objects: Vec<Presheaf> = maps.iter().map(|m| m.dom().clone()).collect();
        objects.push(base.clone());
        let named: Vec<(&str, &NatTrans)> = arrows.iter().map(String::as_str).zip(maps.iter().copied()).collect();
        let d = PsDiagram::over_shape(self, shape, objects, &named)?;
        self.limit(&d)
    }

    /// `⟨f_0, ..., f_{n-1}⟩: X → ∏ Y_i` into a computed product.
    pub fn pairing(&self, product: &PsLimit, maps: &[NatTrans]) -> Result<NatTrans> {
        let Some(first) = maps.first() else {
            return Err(Error::Invalid("pairing of no maps".into()));
        };
        product.mediate(self, &first.dom().clone(), maps)
    }

    /// `f × g` between computed products.
    pub fn product_map(&self, source: &PsLimit, target: &PsLimit, maps: &[NatTrans]) -> Result<NatTrans> {
        let legs = source
            .legs
            .iter()
            .zip(maps)
            .map(|(l, f)| l.then(f))
            .collect::<Result<Vec<_>>>()?;
        target.mediate(self, &source.apex, &legs)
    }

    /// Diagonal `X → X × X`, with the product it lands in.
    pub fn diagonal(&self, x: &Presheaf) -> Result<(PsLimit, NatTrans)> {
        let prod = self.product(&[x.clone(), x.clone()])?;
        let id = self.identity(x);
        let d = prod.mediate(self, x, &[id.clone(), id])?;
        Ok((prod, d))
    }

    /// Monic: pointwise injective.
    pub fn is_mono(&self, f: &NatTrans) -> bool {
        f.is_mono()
    }

    /// Epic: pointwise surjective.
    pub fn is_epi(&self, f: &NatTrans) -> bool {
        f.is_epi()
    }

    pub fn is_iso(&self, f: &NatTrans) -> bool {
        f.is_iso()
    }

    /// Whether `X → 1` is mono. Computed both directly and through the
    /// diagonal `X → X × X`; the two must agree.
    pub fn is_minus1_truncated(&self, x: &Presheaf) -> Result<bool> {
        let direct = self.to_terminal(x).is_mono();
        let (_, diag) = self.diagonal(x)?;
        let via_diagonal = diag.is_iso();
        if direct != via_diagonal {
            return Err(Error::Internal(format!(
                "(-1)-truncation verdicts disagree: map to terminal mono = {direct}, diagonal iso = {via_diagonal}"
            )));
        }
        Ok(direct)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn pullback_along_identity_copies_the_other_leg() {
        let t = corpus::c2_sets();
        let x = corpus::c2_free_orbit(&t);
        let y = corpus::c2_trivial(&t, 3);
        let f = t.to_terminal(&x);
        let g = t.to_terminal(&y);
        let prod = t.pullback(&f, &g).unwrap();
        assert_eq!(prod.apex.cardinalities(), vec![x.at(0).len() * y.at(0).len()]);
        let id = t.identity(&x);
        let along = t.pullback(&id, &t.identity(&x)).unwrap();
        assert!(along.legs[0].is_iso());
    }

    #[test]
    fn empty_product_is_terminal() {
        let t = corpus::sierpinski();
        let p = t.product(&[]).unwrap();
        assert_eq!(p.apex.cardinalities(), vec![1, 1]);
    }

    #[test]
    fn minus1_truncation() {
        let t = Topos::finset();
        assert!(t.is_minus1_truncated(&t.initial()).unwrap());
        assert!(t.is_minus1_truncated(&t.terminal()).unwrap());
        assert!(!t.is_minus1_truncated(&t.constant(&FinSet::range(2))).unwrap());
    }

    #[test]
    fn mono_epi_iso() {
        let t = Topos::finset();
        let two = t.constant(&FinSet::range(2));
        let id = t.identity(&two);
        assert!(id.is_mono() && id.is_epi() && id.is_iso());
        let bang = t.to_terminal(&two);
        assert!(bang.is_epi() && !bang.is_mono());

        let c2 = corpus::c2_sets();
        let orbit = corpus::c2_free_orbit(&c2);
        let two_orbits = c2.product(&[orbit.clone(), c2.constant(&FinSet::range(2))]).unwrap();
        // the first orbit, included as (x, "0")
        let incl = c2
            .nat_from_fn(&orbit, &two_orbits.apex, |_, x| {
                Element::tuple([x.clone(), Element::atom("0")])
            })
            .unwrap();
        assert!(incl.is_mono() && !incl.is_epi());
    }
}
