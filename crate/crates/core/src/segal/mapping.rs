use super::{EquivalencesObject, SegalObject};
use crate::error::{Error, Result};
use crate::topos::{DependentProduct, HomSearch, NatTrans, Presheaf, PsLimit, SliceMap, Topos};

/// `map(x0, …, xn) = Π_D (x0, …, xn)* Xn` for points `xi: D → X0`.
#[derive(Clone, Debug)]
pub struct MappingObject {
    pub context: Presheaf,
    pub points: Vec<NatTrans>,
    /// `X0^{n+1}`.
    pub vertices: PsLimit,
    /// `Xn ×_{X0^{n+1}} D`, points `(σ, d, v)`.
    pub pullback: PsLimit,
    pub pi: DependentProduct,
    /// `(v0, …, vn): Xn → X0^{n+1}`.
    pub vertex_map: NatTrans,
    /// `(x0, …, xn): D → X0^{n+1}`.
    pub point_map: NatTrans,
}

impl MappingObject {
    pub fn object(&self) -> &Presheaf {
        self.pi.object()
    }

    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    /// Sections `D → Xn` with vertices `x0, …, xn`; these correspond to the
    /// global elements of the mapping object.
    pub fn sections(&self, topos: &Topos, x: &SegalObject) -> Result<Vec<NatTrans>> {
        HomSearch::new(topos, &self.context, x.x.level(self.n()))
            .over(&self.vertex_map, &self.point_map)
            .maps()
    }
}

impl SegalObject {
    fn check_points(&self, d: &Presheaf, points: &[NatTrans]) -> Result<()> {
        if points.len() < 2 || points.len() > 4 {
            return Err(Error::Precondition("mapping objects take 2 to 4 points".into()));
        }
        if points.iter().any(|p| p.dom() != d || p.cod() != self.x.level(0)) {
            return Err(Error::Invalid("points must be maps D → X0".into()));
        }
        Ok(())
    }

    pub fn mapping_object(&self, topos: &Topos, d: &Presheaf, points: &[NatTrans]) -> Result<MappingObject> {
        self.check_points(d, points)?;
        let n = points.len() - 1;
        let x = &self.x;
        let vertices = topos.product(&vec![x.level(0).clone(); n + 1])?;
        let vs: Vec<NatTrans> = (0..=n).map(|i| x.vertex(n, i)).collect();
        let vertex_map = vertices.mediate(topos, x.level(n), &vs)?;
        let point_map = vertices.mediate(topos, d, points)?;
        let pullback = topos.pullback(&vertex_map, &point_map)?;
        let slice = SliceMap::new(pullback.legs[1].clone());
        let pi = topos.dependent_product(&topos.to_terminal(d), &slice)?;
        Ok(MappingObject {
            context: d.clone(),
            points: points.to_vec(),
            vertices,
            pullback,
            pi,
            vertex_map,
            point_map,
        })
    }

    /// `(α0, …, α(n-1)): map(x0, …, xn) → ∏ map(xi, x(i+1))`, with whether
    /// it is an isomorphism.
    pub fn mapping_comparison(&self, topos: &Topos, m: &MappingObject) -> Result<(NatTrans, bool)> {
        let n = m.n();
        let mut binaries = Vec::with_capacity(n);
        let mut maps = Vec::with_capacity(n);
        let [sigma, dleg, vleg] = &m.pullback.legs[..] else { unreachable!() };
        for i in 0..n {
            let b = self.mapping_object(topos, &m.context, &[m.points[i].clone(), m.points[i + 1].clone()])?;
            let pair = b.vertices.mediate(topos, &m.vertices.apex, &[
                m.vertices.legs[i].clone(),
                m.vertices.legs[i + 1].clone(),
            ])?;
            let into = b.pullback.mediate(topos, &m.pullback.apex, &[
                sigma.then(&self.x.edge(n, i))?,
                dleg.clone(),
                vleg.then(&pair)?,
            ])?;
            maps.push(m.pi.induced(topos, &b.pi, &into)?);
            binaries.push(b);
        }
        let prod = topos.product(&binaries.iter().map(|b| b.object().clone()).collect::<Vec<_>>())?;
        let comparison = prod.mediate(topos, m.object(), &maps)?;
        let iso = comparison.is_iso();
        Ok((comparison, iso))
    }

    /// `id_x = s0 ∘ x`.
    pub fn identity_morphism(&self, x: &NatTrans) -> Result<NatTrans> {
        x.then(self.x.s(0, 0))
    }

    /// `g ∘ f` for `f, g: D → X1` with `t f = s g`: the inverse of the Segal
    /// comparison at level 2, then `d1`.
    pub fn compose(&self, topos: &Topos, f: &NatTrans, g: &NatTrans) -> Result<NatTrans> {
        let x = &self.x;
        if f.cod() != x.level(1) || g.cod() != x.level(1) || f.dom() != g.dom() {
            return Err(Error::Invalid("composing maps that are not morphisms with a common context".into()));
        }
        let (tf, sg) = (f.then(x.target())?, g.then(x.source())?);
        if tf != sg {
            return Err(Error::Precondition("morphisms are not composable".into()));
        }
        let cone = [f.then(x.source())?, f.clone(), tf, g.clone(), g.then(x.target())?];
        let pt = self.segal_limit(2).mediate(topos, f.dom(), &cone)?;
        pt.then(self.segal_inverse(2))?.then(x.d(2, 1))
    }

    /// `hoequiv(x, y) = Π_D (x, y)* X_hoequiv`, with the induced map to
    /// `map(x, y)` and whether that map is mono.
    pub fn hoequiv_object(
        &self,
        topos: &Topos,
        eq: &EquivalencesObject,
        d: &Presheaf,
        x: &NatTrans,
        y: &NatTrans,
    ) -> Result<(DependentProduct, NatTrans, bool)> {
        let map = self.mapping_object(topos, d, &[x.clone(), y.clone()])?;
        let st_u = eq.u.then(&map.vertex_map)?;
        let pb = topos.pullback(&st_u, &map.point_map)?;
        let pi = topos.dependent_product(&topos.to_terminal(d), &SliceMap::new(pb.legs[1].clone()))?;
        let into = map.pullback.mediate(topos, &pb.apex, &[
            pb.legs[0].then(&eq.u)?,
            pb.legs[1].clone(),
            pb.legs[2].clone(),
        ])?;
        let comparison = pi.induced(topos, &map.pi, &into)?;
        let mono = comparison.is_mono();
        Ok((pi, comparison, mono))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::finset::FiniteCategory;
    use crate::segal::{nerve_truncation, CategoryObject};

    fn segal_nerve(c: &FiniteCategory) -> (Topos, SegalObject) {
        let t = Topos::finset();
        let co = CategoryObject::from_finite_category(&t, c).unwrap();
        let n = nerve_truncation(&t, &co).unwrap();
        (t.clone(), SegalObject::new(&t, n.simplicial).unwrap())
    }

    fn points(t: &Topos, x: &SegalObject) -> Vec<NatTrans> {
        t.global_elements(x.x.level(0)).unwrap()
    }

    #[test]
    fn binary_mapping_objects_are_hom_sets() {
        for (name, c) in corpus::finite_categories() {
            let (t, x) = segal_nerve(&c);
            let one = t.terminal();
            let pts = points(&t, &x);
            for (i, a) in pts.iter().enumerate() {
                for (j, b) in pts.iter().enumerate() {
                    let m = x.mapping_object(&t, &one, &[a.clone(), b.clone()]).unwrap();
                    let hom = c.hom(i, j).count();
                    assert_eq!(m.object().total_size(), hom, "{name}");
                    assert_eq!(m.sections(&t, &x).unwrap().len(), hom);
                }
            }
        }
    }

    #[test]
    fn ternary_mapping_object_splits() {
        let (t, x) = segal_nerve(&corpus::chain(2));
        let one = t.terminal();
        let pts = points(&t, &x);
        for a in &pts {
            for b in &pts {
                for c in &pts {
                    let m = x.mapping_object(&t, &one, &[a.clone(), b.clone(), c.clone()]).unwrap();
                    assert!(x.mapping_comparison(&t, &m).unwrap().1);
                }
            }
        }
    }

    #[test]
    fn compose_matches_the_table() {
        for (name, c) in corpus::finite_categories() {
            let (t, x) = segal_nerve(&c);
            let one = t.terminal();
            let arrows = t.global_elements(x.x.level(1)).unwrap();
            for f in &arrows {
                for g in &arrows {
                    let (fi, gi) = (f.component(0).at(0), g.component(0).at(0));
                    match c.comp(gi, fi) {
                        Some(gf) => {
                            let h = x.compose(&t, f, g).unwrap();
                            assert_eq!(h.component(0).at(0), gf, "{name}");
                        }
                        None => assert!(x.compose(&t, f, g).is_err()),
                    }
                }
            }
            let _ = one;
        }
    }

    #[test]
    fn hoequiv_objects_are_iso_sets() {
        for (name, c) in corpus::finite_categories() {
            let (t, x) = segal_nerve(&c);
            let eq = x.hoequiv(&t).unwrap();
            let one = t.terminal();
            let isos = c.isomorphisms();
            let pts = points(&t, &x);
            for (i, a) in pts.iter().enumerate() {
                for (j, b) in pts.iter().enumerate() {
                    let (h, _, mono) = x.hoequiv_object(&t, &eq, &one, a, b).unwrap();
                    assert!(mono, "{name}");
                    let expected = c.hom(i, j).filter(|u| isos.contains(u)).count();
                    assert_eq!(h.object().total_size(), expected, "{name}");
                    if i == j {
                        assert!(expected >= 1);
                    }
                }
            }
        }
    }
}
